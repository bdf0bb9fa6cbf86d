//! Small-step interaction semantics.
//!
//! A task is driven by alternating two operations: [`normalize`] rewrites
//! it until only user input can make progress, and [`handle`] applies one
//! concrete input and normalizes again. [`enumerate_inputs`] lists exactly
//! the inputs [`handle`] will accept.
//!
//! Rewriting rules:
//!
//! * `Assign` executes during normalization, leftmost first, and becomes
//!   `Done(unit)`.
//! * An automatic `Step` fires once its inner task has a value and the
//!   normalized continuation is not failing. The continuation is evaluated
//!   against a heap snapshot that is only committed when the step fires.
//! * Passes repeat until one commits no rewrite, so the result is a
//!   fixpoint even when a step is guarded on a store written to its right.
//!
//! Every step firing, effect and option probe spends one unit of fuel.
//! Running out reports [`EngineError::FuelExhausted`] instead of diverging.
//!
//! Node ids number editors and selects depth-first, left to right. A select
//! is numbered after the nodes of its inner task, so the editor a user fills
//! in gets a lower id than the options that act on it.

mod inputs;

pub use inputs::{AbstractInput, ConcreteInput, NodeId};

use crate::store::{Heap, StoreError};
use crate::task::{Continuation, Editor, Label, SelectKind, Task};
use crate::value::{Data, ValueType};

pub const DEFAULT_FUEL: u32 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("normalization did not reach a fixpoint within its rewrite budget")]
    FuelExhausted,
    #[error("store {0} was not issued by this engine")]
    ForeignStore(usize),
    #[error("store {id} holds {expected} values but was assigned {found}")]
    StoreTypeMismatch {
        id: usize,
        expected: ValueType,
        found: ValueType,
    },
    #[error("no input target with id {0}")]
    UnknownId(NodeId),
    #[error("node {id} accepts {expected} values, got {found}")]
    TypeMismatch {
        id: NodeId,
        expected: ValueType,
        found: ValueType,
    },
    #[error("option {label:?} is not enabled on node {id}")]
    LabelDisabled { id: NodeId, label: String },
}

impl EngineError {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            EngineError::FuelExhausted => "fuel-exhausted",
            EngineError::ForeignStore(_) => "foreign-store",
            EngineError::StoreTypeMismatch { .. } => "store-type-mismatch",
            EngineError::UnknownId(_) => "unknown-id",
            EngineError::TypeMismatch { .. } => "type-mismatch",
            EngineError::LabelDisabled { .. } => "label-disabled",
        }
    }
}

impl From<StoreError> for EngineError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Foreign(id) => EngineError::ForeignStore(id),
            StoreError::TypeMismatch {
                id,
                expected,
                found,
            } => EngineError::StoreTypeMismatch {
                id,
                expected,
                found,
            },
        }
    }
}

type Result<T> = std::result::Result<T, EngineError>;

struct Fuel(u32);

impl Fuel {
    fn spend(&mut self) -> Result<()> {
        self.0 = self.0.checked_sub(1).ok_or(EngineError::FuelExhausted)?;
        Ok(())
    }
}

// Nesting depth grows with fuel; keep deep rewrites off the caller's stack.
const RED_ZONE: usize = 64 * 1024;
const STACK_CHUNK: usize = 2 * 1024 * 1024;

fn normalize_in(task: Task, heap: &mut Heap, fuel: &mut Fuel) -> Result<Task> {
    let mut task = task;
    loop {
        let mut rewrites = 0;
        task = pass(task, heap, fuel, &mut rewrites)?;
        if rewrites == 0 {
            return Ok(task);
        }
    }
}

fn pass(task: Task, heap: &mut Heap, fuel: &mut Fuel, rewrites: &mut u32) -> Result<Task> {
    stacker::maybe_grow(RED_ZONE, STACK_CHUNK, || match task {
        Task::Edit(Editor::Watch(r) | Editor::Change(r)) => {
            heap.read(r)?;
            Ok(task)
        }
        Task::Edit(_) | Task::Done(_) | Task::Fail => Ok(task),
        Task::Assign(r, f) => {
            fuel.spend()?;
            let next = f.apply(heap.read(r)?);
            heap.write(r, next)?;
            *rewrites += 1;
            Ok(Task::Done(Data::unit()))
        }
        Task::Pair(a, b) => {
            let a = pass(*a, heap, fuel, rewrites)?;
            let b = pass(*b, heap, fuel, rewrites)?;
            Ok(Task::Pair(Box::new(a), Box::new(b)))
        }
        Task::Choose(a, b) => {
            let a = pass(*a, heap, fuel, rewrites)?;
            let b = pass(*b, heap, fuel, rewrites)?;
            Ok(Task::Choose(Box::new(a), Box::new(b)))
        }
        Task::Trans(f, inner) => {
            let inner = pass(*inner, heap, fuel, rewrites)?;
            Ok(Task::Trans(f, Box::new(inner)))
        }
        Task::Select {
            inner,
            options,
            kind,
        } => {
            let inner = pass(*inner, heap, fuel, rewrites)?;
            Ok(Task::Select {
                inner: Box::new(inner),
                options,
                kind,
            })
        }
        Task::Step(inner, k) => {
            let inner = pass(*inner, heap, fuel, rewrites)?;
            if let Some(v) = value_of(&inner, heap)? {
                fuel.spend()?;
                let mut snapshot = heap.clone();
                let next = normalize_in(k.apply(v), &mut snapshot, fuel)?;
                if !failing_in(&next, &snapshot, fuel)? {
                    *heap = snapshot;
                    *rewrites += 1;
                    return Ok(next);
                }
            }
            Ok(Task::Step(Box::new(inner), k))
        }
    })
}

fn value_of(task: &Task, heap: &Heap) -> Result<Option<Data>> {
    Ok(match task {
        Task::Edit(Editor::Enter(_)) => None,
        Task::Edit(Editor::Update(v) | Editor::View(v)) => Some(Data::Value(v.clone())),
        Task::Edit(Editor::Watch(r) | Editor::Change(r)) => Some(Data::Value(heap.read(*r)?.clone())),
        Task::Done(d) => Some(d.clone()),
        Task::Pair(a, b) => match (value_of(a, heap)?, value_of(b, heap)?) {
            (Some(x), Some(y)) => Some(Data::pair(x, y)),
            _ => None,
        },
        Task::Choose(a, b) => match value_of(a, heap)? {
            Some(x) => Some(x),
            None => value_of(b, heap)?,
        },
        Task::Trans(f, inner) => value_of(inner, heap)?.map(|d| f.apply(d)),
        Task::Step(..) | Task::Select { .. } | Task::Fail | Task::Assign(..) => None,
    })
}

fn failing_in(task: &Task, heap: &Heap, fuel: &mut Fuel) -> Result<bool> {
    stacker::maybe_grow(RED_ZONE, STACK_CHUNK, || {
        Ok(match task {
            Task::Fail => true,
            Task::Edit(_) | Task::Done(_) | Task::Assign(..) => false,
            Task::Pair(a, b) | Task::Choose(a, b) => {
                failing_in(a, heap, fuel)? && failing_in(b, heap, fuel)?
            }
            Task::Trans(_, inner) | Task::Step(inner, _) => failing_in(inner, heap, fuel)?,
            Task::Select {
                inner,
                options,
                kind,
            } => {
                if failing_in(inner, heap, fuel)? {
                    true
                } else if value_of(inner, heap)?.is_none() {
                    false
                } else {
                    let arg = option_argument(*kind, inner, heap)?;
                    let mut any = false;
                    for (_, k) in options {
                        if let Some(arg) = &arg {
                            if enabled(k, arg.clone(), heap, fuel)? {
                                any = true;
                                break;
                            }
                        }
                    }
                    !any
                }
            }
        })
    })
}

/// The value passed to a select's continuations, if its options may be taken.
fn option_argument(kind: SelectKind, inner: &Task, heap: &Heap) -> Result<Option<Data>> {
    let v = value_of(inner, heap)?;
    Ok(match kind {
        SelectKind::Choice => Some(v.unwrap_or_else(Data::unit)),
        SelectKind::Step => v,
    })
}

fn enabled(k: &Continuation, arg: Data, heap: &Heap, fuel: &mut Fuel) -> Result<bool> {
    fuel.spend()?;
    let mut snapshot = heap.clone();
    let next = normalize_in(k.apply(arg), &mut snapshot, fuel)?;
    Ok(!failing_in(&next, &snapshot, fuel)?)
}

fn addressable(task: &Task) -> usize {
    match task {
        Task::Edit(_) => 1,
        Task::Select { inner, .. } => addressable(inner) + 1,
        Task::Pair(a, b) | Task::Choose(a, b) => addressable(a) + addressable(b),
        Task::Step(inner, _) | Task::Trans(_, inner) => addressable(inner),
        Task::Done(_) | Task::Fail | Task::Assign(..) => 0,
    }
}

fn own_id(task: &Task, base: usize) -> Option<usize> {
    match task {
        Task::Edit(_) => Some(base),
        Task::Select { inner, .. } => Some(base + addressable(inner)),
        _ => None,
    }
}

fn locate(task: &mut Task, target: usize, base: usize) -> Option<&mut Task> {
    if own_id(task, base) == Some(target) {
        return Some(task);
    }
    match task {
        Task::Select { inner, .. } | Task::Step(inner, _) | Task::Trans(_, inner) => {
            locate(inner, target, base)
        }
        Task::Pair(a, b) | Task::Choose(a, b) => {
            let left = addressable(a);
            if target < base + left {
                locate(a, target, base)
            } else {
                locate(b, target, base + left)
            }
        }
        _ => None,
    }
}

fn enumerate_in(
    task: &Task,
    heap: &Heap,
    fuel: &mut Fuel,
    next: &mut usize,
    out: &mut Vec<AbstractInput>,
) -> Result<()> {
    match task {
        Task::Edit(editor) => {
            let id = NodeId(*next);
            *next += 1;
            let value_type = match editor {
                Editor::Enter(ty) => Some(*ty),
                Editor::Update(v) => Some(v.type_of()),
                Editor::Change(r) => Some(r.value_type()),
                Editor::View(_) | Editor::Watch(_) => None,
            };
            if let Some(value_type) = value_type {
                out.push(AbstractInput::Insert { id, value_type });
            }
        }
        Task::Select {
            inner,
            options,
            kind,
        } => {
            enumerate_in(inner, heap, fuel, next, out)?;
            let id = NodeId(*next);
            *next += 1;
            if let Some(arg) = option_argument(*kind, inner, heap)? {
                for (label, k) in options {
                    if enabled(k, arg.clone(), heap, fuel)? {
                        out.push(AbstractInput::Option {
                            id,
                            label: label.clone(),
                        });
                    }
                }
            }
        }
        Task::Pair(a, b) | Task::Choose(a, b) => {
            enumerate_in(a, heap, fuel, next, out)?;
            enumerate_in(b, heap, fuel, next, out)?;
        }
        Task::Step(inner, _) | Task::Trans(_, inner) => {
            enumerate_in(inner, heap, fuel, next, out)?;
        }
        Task::Done(_) | Task::Fail | Task::Assign(..) => {}
    }
    Ok(())
}

/// Rewrites `task` to a fixpoint with the default fuel budget.
pub fn normalize(task: Task, heap: Heap) -> Result<(Task, Heap)> {
    normalize_with_fuel(task, heap, DEFAULT_FUEL)
}

pub fn normalize_with_fuel(task: Task, mut heap: Heap, fuel: u32) -> Result<(Task, Heap)> {
    let task = normalize_in(task, &mut heap, &mut Fuel(fuel))?;
    Ok((task, heap))
}

/// Whether a normalized task can never produce a value.
///
/// Deciding this for a select probes its options, which can run out of fuel.
pub fn failing(task: &Task, heap: &Heap) -> Result<bool> {
    failing_in(task, heap, &mut Fuel(DEFAULT_FUEL))
}

/// Observes the current value of a normalized task. Reads of stores not
/// owned by `heap` observe nothing.
pub fn value(task: &Task, heap: &Heap) -> Option<Data> {
    value_of(task, heap).ok().flatten()
}

/// Inputs the normalized `task` accepts, in node id order.
pub fn enumerate_inputs(task: &Task, heap: &Heap) -> Result<Vec<AbstractInput>> {
    let mut out = Vec::new();
    enumerate_in(task, heap, &mut Fuel(DEFAULT_FUEL), &mut 0, &mut out)?;
    Ok(out)
}

/// Enabled labels of the select node with the given id, if any.
pub fn enabled_labels(inputs: &[AbstractInput], id: NodeId) -> Vec<Label> {
    inputs
        .iter()
        .filter_map(|i| match i {
            AbstractInput::Option { id: oid, label } if *oid == id => Some(label.clone()),
            _ => None,
        })
        .collect()
}

/// Applies one input to a normalized task and normalizes the result.
///
/// On error nothing is returned, so callers keep their previous state.
pub fn handle(task: &Task, heap: &Heap, input: &ConcreteInput) -> Result<(Task, Heap)> {
    let mut task = task.clone();
    let mut heap = heap.clone();
    match input {
        ConcreteInput::Insert { id, value } => {
            let Some(Task::Edit(editor)) = locate(&mut task, id.0, 0) else {
                return Err(EngineError::UnknownId(*id));
            };
            let expected = match editor {
                Editor::Enter(ty) => *ty,
                Editor::Update(old) => old.type_of(),
                Editor::Change(r) => r.value_type(),
                Editor::View(_) | Editor::Watch(_) => return Err(EngineError::UnknownId(*id)),
            };
            if value.type_of() != expected {
                return Err(EngineError::TypeMismatch {
                    id: *id,
                    expected,
                    found: value.type_of(),
                });
            }
            match editor {
                Editor::Change(r) => heap.write(*r, value.clone())?,
                _ => *editor = Editor::Update(value.clone()),
            }
        }
        ConcreteInput::Decide { id, label } => {
            let disabled = || EngineError::LabelDisabled {
                id: *id,
                label: label.clone(),
            };
            let Some(node) = locate(&mut task, id.0, 0) else {
                return Err(EngineError::UnknownId(*id));
            };
            let Task::Select {
                inner,
                options,
                kind,
            } = &*node
            else {
                return Err(EngineError::UnknownId(*id));
            };
            let k = options
                .iter()
                .find(|(l, _)| l.as_str() == label)
                .map(|(_, k)| k.clone())
                .ok_or_else(disabled)?;
            let arg = option_argument(*kind, inner, &heap)?.ok_or_else(disabled)?;
            if !enabled(&k, arg.clone(), &heap, &mut Fuel(DEFAULT_FUEL))? {
                return Err(disabled());
            }
            *node = k.apply(arg);
        }
    }
    normalize(task, heap)
}
