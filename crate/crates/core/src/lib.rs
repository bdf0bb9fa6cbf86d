//! Task-oriented programming runtime.
//!
//! Programs are trees of [`Task`]s built from editors and combinators.
//! The [`semantics`] module drives them one user input at a time, and
//! [`protocol`] renders their state as JSON for a generic front end.
//!
//! ```
//! use toprt_core::{enter, step_user, view, ConcreteInput, Program, Session, ValueType};
//!
//! let greet = Program::from_fn(|| {
//!     step_user(enter(ValueType::String).unwrap(), |name| {
//!         view(format!("Hello {}", name.as_str().unwrap()))
//!     })
//! });
//! let mut session = Session::new(greet);
//! session.initial()?;
//! session.interact(&ConcreteInput::insert(0, "Alice"))?;
//! let done = session.interact(&ConcreteInput::decide(1, "Continue"))?;
//! assert!(done.to_string().contains("Hello Alice"));
//! # Ok::<(), toprt_core::ProtocolError>(())
//! ```

pub mod protocol;
pub mod semantics;
pub mod session;
pub mod store;
pub mod task;
pub mod value;

pub use protocol::{describe, ProtocolError, TaskDescription};
pub use semantics::{AbstractInput, ConcreteInput, EngineError, NodeId};
pub use session::Session;
pub use store::{Heap, StoreRef};
pub use task::{
    assign_with, change, choose, done, enter, fail, pair, repeat, select, step_auto,
    step_options, step_user, trans, update, view, watch, Continuation, Editor, Label, Program,
    Task, TaskError,
};
pub use value::{Data, Value, ValueType};
