//! The task tree and its constructors.
//!
//! Tasks are immutable values. Every combinator takes its subtasks by value
//! and returns a new tree; continuations are opaque host closures that are
//! only invoked by the semantics.

use std::fmt;
use std::sync::Arc;

use crate::store::{Heap, StoreRef};
use crate::value::{Data, Value, ValueType};

/// Label of a selectable option. Never empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(String);

impl Label {
    pub fn new(text: impl Into<String>) -> Result<Self, TaskError> {
        let text = text.into();
        if text.is_empty() {
            return Err(TaskError::EmptyLabel);
        }
        Ok(Label(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TaskError {
    #[error("an enter editor for unit has nothing to enter")]
    EnterUnit,
    #[error("option map is empty")]
    NoOptions,
    #[error("duplicate option label {0:?}")]
    DuplicateLabel(String),
    #[error("option labels must be non-empty")]
    EmptyLabel,
}

/// Host function from a task's semantic value to the next task.
#[derive(Clone)]
pub struct Continuation(Arc<dyn Fn(Data) -> Task + Send + Sync>);

impl Continuation {
    pub fn new(f: impl Fn(Data) -> Task + Send + Sync + 'static) -> Self {
        Continuation(Arc::new(f))
    }

    /// A continuation that ignores its argument.
    pub fn constant(task: Task) -> Self {
        Continuation::new(move |_| task.clone())
    }

    pub fn apply(&self, data: Data) -> Task {
        (self.0)(data)
    }

    fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl fmt::Debug for Continuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<continuation>")
    }
}

/// Maps the value of an inner task to the value of a `Trans` node.
#[derive(Clone)]
pub struct Transform(Arc<dyn Fn(Data) -> Data + Send + Sync>);

impl Transform {
    pub fn new(f: impl Fn(Data) -> Data + Send + Sync + 'static) -> Self {
        Transform(Arc::new(f))
    }

    pub fn apply(&self, data: Data) -> Data {
        (self.0)(data)
    }
}

impl fmt::Debug for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<transform>")
    }
}

/// Store transformer used by [`assign_with`].
#[derive(Clone)]
pub struct StoreUpdate(Arc<dyn Fn(&Value) -> Value + Send + Sync>);

impl StoreUpdate {
    pub fn new(f: impl Fn(&Value) -> Value + Send + Sync + 'static) -> Self {
        StoreUpdate(Arc::new(f))
    }

    pub fn apply(&self, current: &Value) -> Value {
        (self.0)(current)
    }
}

impl fmt::Debug for StoreUpdate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<store update>")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Editor {
    Enter(ValueType),
    Update(Value),
    View(Value),
    Watch(StoreRef),
    Change(StoreRef),
}

/// Whether a select's options may be taken before its inner task has a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectKind {
    /// Plain labeled choice; options ignore the inner value.
    Choice,
    /// User step: options are continuations on the inner value.
    Step,
}

#[derive(Clone, Debug)]
pub enum Task {
    Edit(Editor),
    Select {
        inner: Box<Task>,
        options: Vec<(Label, Continuation)>,
        kind: SelectKind,
    },
    Pair(Box<Task>, Box<Task>),
    Choose(Box<Task>, Box<Task>),
    Step(Box<Task>, Continuation),
    Trans(Transform, Box<Task>),
    Done(Data),
    Fail,
    Assign(StoreRef, StoreUpdate),
}

impl Task {
    /// Structural equality where closures compare by identity.
    pub fn structurally_eq(&self, other: &Task) -> bool {
        use Task::*;
        match (self, other) {
            (Edit(a), Edit(b)) => a == b,
            (
                Select {
                    inner: ia,
                    options: oa,
                    kind: ka,
                },
                Select {
                    inner: ib,
                    options: ob,
                    kind: kb,
                },
            ) => {
                ka == kb
                    && oa.len() == ob.len()
                    && oa
                        .iter()
                        .zip(ob)
                        .all(|((la, ca), (lb, cb))| la == lb && ca.ptr_eq(cb))
                    && ia.structurally_eq(ib)
            }
            (Pair(a1, a2), Pair(b1, b2)) | (Choose(a1, a2), Choose(b1, b2)) => {
                a1.structurally_eq(b1) && a2.structurally_eq(b2)
            }
            (Step(a, ka), Step(b, kb)) => ka.ptr_eq(kb) && a.structurally_eq(b),
            (Trans(fa, a), Trans(fb, b)) => Arc::ptr_eq(&fa.0, &fb.0) && a.structurally_eq(b),
            (Done(a), Done(b)) => a == b,
            (Fail, Fail) => true,
            (Assign(ra, ua), Assign(rb, ub)) => ra == rb && Arc::ptr_eq(&ua.0, &ub.0),
            _ => false,
        }
    }
}

fn option_map<T>(
    opts: impl IntoIterator<Item = (impl Into<String>, T)>,
) -> Result<Vec<(Label, T)>, TaskError> {
    let mut out: Vec<(Label, T)> = Vec::new();
    for (label, item) in opts {
        let label = Label::new(label)?;
        if out.iter().any(|(l, _)| *l == label) {
            return Err(TaskError::DuplicateLabel(label.0));
        }
        out.push((label, item));
    }
    if out.is_empty() {
        return Err(TaskError::NoOptions);
    }
    Ok(out)
}

/// An initially empty editor. Unit has nothing to enter and is rejected.
pub fn enter(ty: ValueType) -> Result<Task, TaskError> {
    if ty == ValueType::Unit {
        return Err(TaskError::EnterUnit);
    }
    Ok(Task::Edit(Editor::Enter(ty)))
}

pub fn update(value: impl Into<Value>) -> Task {
    Task::Edit(Editor::Update(value.into()))
}

pub fn view(value: impl Into<Value>) -> Task {
    Task::Edit(Editor::View(value.into()))
}

pub fn watch(store: StoreRef) -> Task {
    Task::Edit(Editor::Watch(store))
}

pub fn change(store: StoreRef) -> Task {
    Task::Edit(Editor::Change(store))
}

/// Parallel-and.
pub fn pair(left: Task, right: Task) -> Task {
    Task::Pair(Box::new(left), Box::new(right))
}

/// Parallel-or, left-biased when both sides hold a value.
pub fn choose(left: Task, right: Task) -> Task {
    Task::Choose(Box::new(left), Box::new(right))
}

pub fn done(data: impl Into<Data>) -> Task {
    Task::Done(data.into())
}

pub fn fail() -> Task {
    Task::Fail
}

/// Automatic step: moves on as soon as `task` has a value and the
/// continuation does not fail.
pub fn step_auto(task: Task, k: impl Fn(Data) -> Task + Send + Sync + 'static) -> Task {
    Task::Step(Box::new(task), Continuation::new(k))
}

/// User step with a single "Continue" option.
pub fn step_user(task: Task, k: impl Fn(Data) -> Task + Send + Sync + 'static) -> Task {
    Task::Select {
        inner: Box::new(task),
        options: vec![(Label("Continue".into()), Continuation::new(k))],
        kind: SelectKind::Step,
    }
}

/// User step with labeled continuations, offered once `task` has a value.
pub fn step_options(
    task: Task,
    options: impl IntoIterator<Item = (impl Into<String>, Continuation)>,
) -> Result<Task, TaskError> {
    Ok(Task::Select {
        inner: Box::new(task),
        options: option_map(options)?,
        kind: SelectKind::Step,
    })
}

/// Labeled choice between tasks. A label is offered iff its task does not fail.
pub fn select(
    options: impl IntoIterator<Item = (impl Into<String>, Task)>,
) -> Result<Task, TaskError> {
    let options = option_map(options)?
        .into_iter()
        .map(|(l, t)| (l, Continuation::constant(t)))
        .collect();
    Ok(Task::Select {
        inner: Box::new(Task::Done(Data::unit())),
        options,
        kind: SelectKind::Choice,
    })
}

pub fn trans(f: impl Fn(Data) -> Data + Send + Sync + 'static, task: Task) -> Task {
    Task::Trans(Transform::new(f), Box::new(task))
}

/// Rewrites the store with `f` applied to its current content, then
/// completes with unit.
pub fn assign_with(store: StoreRef, f: impl Fn(&Value) -> Value + Send + Sync + 'static) -> Task {
    Task::Assign(store, StoreUpdate::new(f))
}

/// Runs `body` again, from a fresh copy, each time it completes.
pub fn repeat(body: Task) -> Task {
    let template = body.clone();
    Task::Step(
        Box::new(body),
        Continuation::new(move |_| repeat(template.clone())),
    )
}

/// Re-instantiable program: builds a task against a fresh heap, allocating
/// any shared stores it needs.
#[derive(Clone)]
pub struct Program(Arc<dyn Fn(&mut Heap) -> Task + Send + Sync>);

impl Program {
    pub fn new(build: impl Fn(&mut Heap) -> Task + Send + Sync + 'static) -> Self {
        Program(Arc::new(build))
    }

    /// A program that needs no shared stores.
    pub fn from_fn(build: impl Fn() -> Task + Send + Sync + 'static) -> Self {
        Program::new(move |_| build())
    }

    pub fn instantiate(&self) -> (Task, Heap) {
        let mut heap = Heap::new();
        let task = (self.0)(&mut heap);
        (task, heap)
    }
}

impl fmt::Debug for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<program>")
    }
}
