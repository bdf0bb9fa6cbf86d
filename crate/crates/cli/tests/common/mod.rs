//! Random task trees and the checks run against every state they reach.

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::sample::Index;
use toprt_core::semantics::{enumerate_inputs, failing, handle, normalize, value};
use toprt_core::task::SelectKind;
use toprt_core::*;

const LABELS: [&str; 3] = ["A", "B", "C"];

/// A closure-free description of a task, so failing cases print readably.
#[derive(Clone, Debug)]
pub enum Shape {
    Enter(ValueType),
    Update(Value),
    View(Value),
    Watch(usize),
    Change(usize),
    Done(Value),
    Fail,
    Assign(usize),
    Pair(Box<Shape>, Box<Shape>),
    Choose(Box<Shape>, Box<Shape>),
    Trans(Box<Shape>),
    StepAuto(Box<Shape>, Cont),
    StepUser(Box<Shape>, Cont),
    StepOptions(Box<Shape>, Vec<(usize, Cont)>),
    Select(Vec<(usize, Shape)>),
    Repeat(Box<Shape>),
}

#[derive(Clone, Debug)]
pub enum Cont {
    Const(Box<Shape>),
    /// Continues with the task only for truthy arguments, fails otherwise.
    Guard(Box<Shape>),
    ViewArg,
    Fail,
}

#[derive(Clone, Debug)]
pub struct Case {
    pub stores: Vec<Value>,
    pub root: Shape,
    pub walk: Vec<(Index, Index)>,
}

fn any_value() -> impl Strategy<Value = Value> {
    prop_oneof![
        (-3i64..20).prop_map(Value::Int),
        any::<bool>().prop_map(Value::Bool),
        prop::sample::select(vec!["", "a", "hi"]).prop_map(Value::from),
        Just(Value::Unit),
    ]
}

fn input_type() -> impl Strategy<Value = ValueType> {
    prop::sample::select(vec![ValueType::Int, ValueType::Bool, ValueType::String])
}

fn cont(task: impl Strategy<Value = Shape> + Clone) -> impl Strategy<Value = Cont> {
    prop_oneof![
        3 => task.clone().prop_map(|t| Cont::Const(Box::new(t))),
        2 => task.prop_map(|t| Cont::Guard(Box::new(t))),
        1 => Just(Cont::ViewArg),
        1 => Just(Cont::Fail),
    ]
}

fn labelled<T: std::fmt::Debug + Clone>(
    item: impl Strategy<Value = T>,
) -> impl Strategy<Value = Vec<(usize, T)>> {
    prop::collection::vec((0..LABELS.len(), item), 1..4).prop_map(|opts| {
        opts.into_iter()
            .collect::<BTreeMap<_, _>>()
            .into_iter()
            .collect()
    })
}

pub fn shape() -> impl Strategy<Value = Shape> {
    let leaf = prop_oneof![
        3 => input_type().prop_map(Shape::Enter),
        2 => any_value().prop_map(Shape::Update),
        2 => any_value().prop_map(Shape::View),
        1 => any::<usize>().prop_map(Shape::Watch),
        1 => any::<usize>().prop_map(Shape::Change),
        2 => any_value().prop_map(Shape::Done),
        1 => Just(Shape::Fail),
        1 => any::<usize>().prop_map(Shape::Assign),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Shape::Pair(a.into(), b.into())),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Shape::Choose(a.into(), b.into())),
            inner.clone().prop_map(|a| Shape::Trans(a.into())),
            (inner.clone(), cont(inner.clone())).prop_map(|(a, k)| Shape::StepAuto(a.into(), k)),
            (inner.clone(), cont(inner.clone())).prop_map(|(a, k)| Shape::StepUser(a.into(), k)),
            (inner.clone(), labelled(cont(inner.clone())))
                .prop_map(|(a, ks)| Shape::StepOptions(a.into(), ks)),
            labelled(inner.clone()).prop_map(Shape::Select),
            inner.prop_map(|a| Shape::Repeat(a.into())),
        ]
    })
}

pub fn case() -> impl Strategy<Value = Case> {
    (
        prop::collection::vec(any_value(), 1..3),
        shape(),
        prop::collection::vec(any::<(Index, Index)>(), 0..6),
    )
        .prop_map(|(stores, root, walk)| Case { stores, root, walk })
}

fn truthy(data: &Data) -> bool {
    match data.as_value() {
        Some(Value::Int(i)) => *i > 0,
        Some(Value::Bool(b)) => *b,
        Some(Value::String(s)) => !s.is_empty(),
        _ => true,
    }
}

fn bump(v: &Value) -> Value {
    match v {
        Value::Int(i) => Value::Int(i.wrapping_add(1)),
        Value::Bool(b) => Value::Bool(!b),
        Value::String(s) => Value::String(format!("{s}x")),
        Value::Unit => Value::Unit,
    }
}

fn continuation(k: &Cont, stores: &[StoreRef]) -> impl Fn(Data) -> Task + Send + Sync + 'static {
    let k = k.clone();
    let stores = stores.to_vec();
    move |arg| match &k {
        Cont::Const(t) => build(t, &stores),
        Cont::Guard(t) if truthy(&arg) => build(t, &stores),
        Cont::Guard(_) | Cont::Fail => fail(),
        Cont::ViewArg => view(arg.as_value().cloned().unwrap_or(Value::from("pair"))),
    }
}

pub fn build(shape: &Shape, stores: &[StoreRef]) -> Task {
    let store = |i: &usize| stores[i % stores.len()];
    match shape {
        Shape::Enter(ty) => enter(*ty).expect("input type"),
        Shape::Update(v) => update(v.clone()),
        Shape::View(v) => view(v.clone()),
        Shape::Watch(i) => watch(store(i)),
        Shape::Change(i) => change(store(i)),
        Shape::Done(v) => done(v.clone()),
        Shape::Fail => fail(),
        Shape::Assign(i) => assign_with(store(i), bump),
        Shape::Pair(a, b) => pair(build(a, stores), build(b, stores)),
        Shape::Choose(a, b) => choose(build(a, stores), build(b, stores)),
        Shape::Trans(a) => trans(|d| Data::pair(d, true.into()), build(a, stores)),
        Shape::StepAuto(a, k) => step_auto(build(a, stores), continuation(k, stores)),
        Shape::StepUser(a, k) => step_user(build(a, stores), continuation(k, stores)),
        Shape::StepOptions(a, ks) => {
            let options = ks
                .iter()
                .map(|(l, k)| (LABELS[*l], Continuation::new(continuation(k, stores))));
            step_options(build(a, stores), options).expect("distinct labels")
        }
        Shape::Select(opts) => {
            select(opts.iter().map(|(l, t)| (LABELS[*l], build(t, stores)))).expect("distinct labels")
        }
        // A user step inside keeps the loop from spinning without input.
        Shape::Repeat(a) => repeat(step_user(build(a, stores), |_| done(()))),
    }
}

impl Case {
    pub fn program(&self) -> Program {
        let case = self.clone();
        Program::new(move |heap| {
            let stores: Vec<_> = case.stores.iter().map(|v| heap.share(v.clone())).collect();
            build(&case.root, &stores)
        })
    }
}

/// Addressable nodes in id order, each select numbered after its inner task.
pub fn addressable(task: &Task) -> Vec<&Task> {
    fn go<'a>(task: &'a Task, out: &mut Vec<&'a Task>) {
        match task {
            Task::Edit(_) => out.push(task),
            Task::Select { inner, .. } => {
                go(inner, out);
                out.push(task);
            }
            Task::Pair(a, b) | Task::Choose(a, b) => {
                go(a, out);
                go(b, out);
            }
            Task::Step(a, _) | Task::Trans(_, a) => go(a, out),
            Task::Done(_) | Task::Fail | Task::Assign(..) => {}
        }
    }
    let mut out = Vec::new();
    go(task, &mut out);
    out
}

pub fn sample_value(ty: ValueType, pick: usize) -> Value {
    match ty {
        ValueType::Int => [0i64, 7, -1][pick % 3].into(),
        ValueType::Bool => pick.is_multiple_of(2).into(),
        ValueType::String => ["", "hi", "Alice"][pick % 3].into(),
        ValueType::Unit => Value::Unit,
    }
}

pub fn concretize(input: &AbstractInput, pick: usize) -> ConcreteInput {
    match input {
        AbstractInput::Insert { id, value_type } => ConcreteInput::Insert {
            id: *id,
            value: sample_value(*value_type, pick),
        },
        AbstractInput::Option { id, label } => ConcreteInput::Decide {
            id: *id,
            label: label.as_str().to_owned(),
        },
    }
}

/// Inputs worth trying against a task with `nodes` addressable nodes.
fn candidates(nodes: usize) -> Vec<ConcreteInput> {
    let mut out = Vec::new();
    for id in 0..nodes + 2 {
        for ty in [ValueType::Int, ValueType::Bool, ValueType::String, ValueType::Unit] {
            for pick in 0..2 {
                out.push(ConcreteInput::insert(id, sample_value(ty, pick)));
            }
        }
        for label in LABELS.iter().chain(&["Continue", "Z"]) {
            out.push(ConcreteInput::decide(id, *label));
        }
    }
    out
}

fn option_target<'a>(
    nodes: &[&'a Task],
    id: NodeId,
    label: &Label,
) -> Option<(&'a Continuation, SelectKind, &'a Task)> {
    match nodes.get(id.0)? {
        Task::Select {
            inner,
            options,
            kind,
        } => options
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, k)| (k, *kind, &**inner)),
        _ => None,
    }
}

/// Checks every property on the normalized state `(task, heap)`.
pub fn check_state(task: &Task, heap: &Heap) -> Result<(), String> {
    // idempotence
    let (again, again_heap) =
        normalize(task.clone(), heap.clone()).map_err(|e| format!("renormalize: {e}"))?;
    if !again.structurally_eq(task) || &again_heap != heap {
        return Err(format!("normalize is not idempotent on {task:?}"));
    }

    // heap typing
    for (id, ty, v) in heap.entries() {
        if v.type_of() != ty {
            return Err(format!("store {id} holds {v:?}, declared {}", ty.name()));
        }
    }

    // determinism of describe and of ids
    let first = protocol::describe_normalized(task, heap).map_err(|e| e.to_string())?;
    let second = protocol::describe_normalized(task, heap).map_err(|e| e.to_string())?;
    if first.to_string() != second.to_string() {
        return Err("describe is not deterministic".into());
    }
    let advertised = enumerate_inputs(task, heap).map_err(|e| e.to_string())?;
    if advertised != first.inputs {
        return Err("enumerate_inputs disagrees with describe".into());
    }

    // failing exclusion
    let nodes = addressable(task);
    for input in &advertised {
        if let AbstractInput::Option { id, label } = input {
            let (k, kind, inner) = option_target(&nodes, *id, label)
                .ok_or_else(|| format!("option {label} at {id:?} is not a select option"))?;
            let arg = match kind {
                SelectKind::Choice => Data::unit(),
                SelectKind::Step => value(inner, heap).ok_or("step option without a value")?,
            };
            let (next, next_heap) =
                normalize(k.apply(arg), heap.clone()).map_err(|e| e.to_string())?;
            if failing(&next, &next_heap).map_err(|e| e.to_string())? {
                return Err(format!("advertised option {label} at {id:?} leads to failure"));
            }
        }
    }

    // soundness
    for input in &advertised {
        for pick in 0..3 {
            let concrete = concretize(input, pick);
            let a = handle(task, heap, &concrete)
                .map_err(|e| format!("advertised {concrete:?} rejected: {e}"))?;
            let b = handle(task, heap, &concrete).map_err(|e| e.to_string())?;
            let (da, db) = (
                protocol::describe_normalized(&a.0, &a.1).map_err(|e| e.to_string())?,
                protocol::describe_normalized(&b.0, &b.1).map_err(|e| e.to_string())?,
            );
            if da.to_string() != db.to_string() || a.1 != b.1 {
                return Err(format!("handle {concrete:?} is not deterministic"));
            }
        }
    }

    // completeness
    for concrete in candidates(nodes.len()) {
        if handle(task, heap, &concrete).is_ok() && !advertised.iter().any(|d| d.admits(&concrete)) {
            return Err(format!("{concrete:?} succeeded without being advertised"));
        }
    }
    Ok(())
}

/// Instantiates the case, then follows its walk through advertised inputs,
/// checking every state on the way. Returns the number of states checked.
pub fn run_case(case: &Case) -> Result<usize, String> {
    let (task, heap) = case.program().instantiate();
    let (mut task, mut heap) = normalize(task, heap).map_err(|e| format!("normalize: {e}"))?;
    let mut states = 1;
    check_state(&task, &heap)?;
    for (which, pick) in &case.walk {
        let inputs = enumerate_inputs(&task, &heap).map_err(|e| e.to_string())?;
        if inputs.is_empty() {
            break;
        }
        let input = concretize(&inputs[which.index(inputs.len())], pick.index(3));
        (task, heap) = handle(&task, &heap, &input).map_err(|e| e.to_string())?;
        check_state(&task, &heap)?;
        states += 1;
    }
    Ok(states)
}
