//! Values carried by editors and the semantic results of tasks.

use std::fmt;

/// A flat, serializable payload. Only these ever reach an editor or the wire.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Int(i64),
    Bool(bool),
    String(String),
    Unit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ValueType {
    Int,
    Bool,
    String,
    Unit,
}

impl Value {
    pub fn type_of(&self) -> ValueType {
        match self {
            Value::Int(_) => ValueType::Int,
            Value::Bool(_) => ValueType::Bool,
            Value::String(_) => ValueType::String,
            Value::Unit => ValueType::Unit,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::String(s) => Some(s),
            _ => None,
        }
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::Int(n)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::String(s.to_owned())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::String(s)
    }
}

impl From<()> for Value {
    fn from(_: ()) -> Self {
        Value::Unit
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(true) => f.write_str("True"),
            Value::Bool(false) => f.write_str("False"),
            Value::String(s) => f.write_str(s),
            Value::Unit => f.write_str("()"),
        }
    }
}

impl ValueType {
    /// Wire name of the type.
    pub fn name(self) -> &'static str {
        match self {
            ValueType::Int => "int",
            ValueType::Bool => "bool",
            ValueType::String => "string",
            ValueType::Unit => "unit",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "int" => Some(ValueType::Int),
            "bool" => Some(ValueType::Bool),
            "string" => Some(ValueType::String),
            "unit" => Some(ValueType::Unit),
            _ => None,
        }
    }
}

impl fmt::Display for ValueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The semantic value of a task: a flat [`Value`] or a nested pair of them.
///
/// Pairs arise from the parallel-and combinator and are only ever observed
/// by continuations and transformers, never serialized.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Data {
    Value(Value),
    Pair(Box<Data>, Box<Data>),
}

impl Data {
    pub fn unit() -> Self {
        Data::Value(Value::Unit)
    }

    pub fn pair(left: Data, right: Data) -> Self {
        Data::Pair(Box::new(left), Box::new(right))
    }

    pub fn as_value(&self) -> Option<&Value> {
        match self {
            Data::Value(v) => Some(v),
            Data::Pair(..) => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&Data, &Data)> {
        match self {
            Data::Pair(l, r) => Some((l, r)),
            Data::Value(_) => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        self.as_value().and_then(Value::as_int)
    }

    pub fn as_bool(&self) -> Option<bool> {
        self.as_value().and_then(Value::as_bool)
    }

    pub fn as_str(&self) -> Option<&str> {
        self.as_value().and_then(Value::as_str)
    }
}

impl<T: Into<Value>> From<T> for Data {
    fn from(v: T) -> Self {
        Data::Value(v.into())
    }
}
