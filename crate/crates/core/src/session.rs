//! A single running instance of a program, driven one input at a time.

use crate::protocol::{self, ProtocolError, TaskDescription};
use crate::semantics::{self, ConcreteInput};
use crate::store::Heap;
use crate::task::{Program, Task};

/// Owns the current task and heap of one program instance.
///
/// Every method either moves to a new state and describes it, or fails and
/// keeps the previous state untouched.
#[derive(Debug)]
pub struct Session {
    program: Program,
    state: Option<(Task, Heap)>,
}

impl Session {
    pub fn new(program: Program) -> Self {
        Session {
            program,
            state: None,
        }
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn is_initialized(&self) -> bool {
        self.state.is_some()
    }

    /// The current normalized task and heap, once initialized.
    pub fn current(&self) -> Option<(&Task, &Heap)> {
        self.state.as_ref().map(|(t, h)| (t, h))
    }

    fn fresh(&self) -> Result<(Task, Heap, TaskDescription), ProtocolError> {
        let (task, heap) = self.program.instantiate();
        let (task, heap) = semantics::normalize(task, heap)?;
        let description = protocol::describe_normalized(&task, &heap)?;
        Ok((task, heap, description))
    }

    fn ensure_initialized(&mut self) -> Result<(), ProtocolError> {
        if self.state.is_none() {
            let (task, heap, _) = self.fresh()?;
            self.state = Some((task, heap));
        }
        Ok(())
    }

    /// Describes the current task, instantiating the program on first use.
    pub fn initial(&mut self) -> Result<TaskDescription, ProtocolError> {
        self.ensure_initialized()?;
        let (task, heap) = self.state.as_ref().expect("initialized above");
        protocol::describe_normalized(task, heap)
    }

    pub fn interact(&mut self, input: &ConcreteInput) -> Result<TaskDescription, ProtocolError> {
        self.ensure_initialized()?;
        let (task, heap) = self.state.as_ref().expect("initialized above");
        let (task, heap) = semantics::handle(task, heap, input)?;
        let description = protocol::describe_normalized(&task, &heap)?;
        self.state = Some((task, heap));
        Ok(description)
    }

    /// Replaces the state with a fresh instantiation of the program.
    pub fn reset(&mut self) -> Result<TaskDescription, ProtocolError> {
        let (task, heap, description) = self.fresh()?;
        self.state = Some((task, heap));
        Ok(description)
    }
}

/// Where a replay stopped.
#[derive(Debug, PartialEq, Eq, thiserror::Error)]
#[error("{}: {error}", match step { Some(i) => format!("step {i}"), None => "initial task".into() })]
pub struct ReplayError {
    /// Index of the failing input, or `None` if the program itself failed
    /// to start.
    pub step: Option<usize>,
    pub error: ProtocolError,
}

/// Runs `inputs` against a fresh instance of `program` and returns the
/// description after each input.
pub fn replay(
    program: &Program,
    inputs: &[ConcreteInput],
) -> Result<Vec<TaskDescription>, ReplayError> {
    let mut session = Session::new(program.clone());
    session
        .initial()
        .map_err(|error| ReplayError { step: None, error })?;
    inputs
        .iter()
        .enumerate()
        .map(|(step, input)| {
            session.interact(input).map_err(|error| ReplayError {
                step: Some(step),
                error,
            })
        })
        .collect()
}
