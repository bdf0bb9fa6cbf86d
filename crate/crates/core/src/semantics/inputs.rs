use std::fmt;

use crate::task::Label;
use crate::value::{Value, ValueType};

/// Address of an editor or select node within one description.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An input a user actually performs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConcreteInput {
    Insert { id: NodeId, value: Value },
    Decide { id: NodeId, label: String },
}

/// An input the current task is ready to accept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbstractInput {
    Insert { id: NodeId, value_type: ValueType },
    Option { id: NodeId, label: Label },
}

impl ConcreteInput {
    pub fn insert(id: usize, value: impl Into<Value>) -> Self {
        ConcreteInput::Insert {
            id: NodeId(id),
            value: value.into(),
        }
    }

    pub fn decide(id: usize, label: impl Into<String>) -> Self {
        ConcreteInput::Decide {
            id: NodeId(id),
            label: label.into(),
        }
    }

    pub fn id(&self) -> NodeId {
        match self {
            ConcreteInput::Insert { id, .. } | ConcreteInput::Decide { id, .. } => *id,
        }
    }
}

impl AbstractInput {
    pub fn id(&self) -> NodeId {
        match self {
            AbstractInput::Insert { id, .. } | AbstractInput::Option { id, .. } => *id,
        }
    }

    /// Whether `input` is a type-conforming instance of this description.
    pub fn admits(&self, input: &ConcreteInput) -> bool {
        match (self, input) {
            (
                AbstractInput::Insert { id, value_type },
                ConcreteInput::Insert { id: cid, value },
            ) => id == cid && value.type_of() == *value_type,
            (AbstractInput::Option { id, label }, ConcreteInput::Decide { id: cid, label: cl }) => {
                id == cid && label.as_str() == cl
            }
            _ => false,
        }
    }
}
