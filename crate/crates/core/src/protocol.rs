//! JSON wire format.
//!
//! Every object carries a `"type"` tag from a closed vocabulary:
//!
//! * tasks: `edit`, `select`, `pair`, `choose`, `step`, `trans`, `done`, `fail`
//! * editors: `enter`, `update`, `view`, `change`, `watch`
//! * values: `int`, `bool`, `string`, `unit`
//! * input descriptions: `insert`, `option`
//! * concrete inputs: `insert`, `decide`
//!
//! A description is `{"task": <task>, "inputs": [<description>...]}`.
//! Continuations never cross the wire, only the labels that are enabled.

use serde::{Serialize, Serializer};
use serde_json::{json, Map, Value as Json};

use crate::semantics::{self, enabled_labels, AbstractInput, ConcreteInput, EngineError, NodeId};
use crate::store::Heap;
use crate::task::{Editor, Task};
use crate::value::Value;

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("malformed JSON: {0}")]
    MalformedJson(String),
    #[error("unknown input type {0:?}")]
    UnknownInputType(String),
    #[error("missing field {0:?}")]
    MissingField(&'static str),
    #[error("field {0:?} has the wrong shape")]
    InvalidField(&'static str),
    #[error("cannot encode a task with pending effects")]
    Unnormalized,
}

impl ProtocolError {
    pub fn code(&self) -> &'static str {
        match self {
            ProtocolError::Engine(e) => e.code(),
            ProtocolError::MalformedJson(_) => "malformed-json",
            ProtocolError::UnknownInputType(_) => "unknown-input-type",
            ProtocolError::MissingField(_) => "missing-field",
            ProtocolError::InvalidField(_) => "invalid-field",
            ProtocolError::Unnormalized => "unnormalized",
        }
    }

    /// Whether the error stems from an unreadable request rather than
    /// from the task's state.
    pub fn is_syntactic(&self) -> bool {
        matches!(
            self,
            ProtocolError::MalformedJson(_)
                | ProtocolError::UnknownInputType(_)
                | ProtocolError::MissingField(_)
                | ProtocolError::InvalidField(_)
        )
    }
}

type Result<T> = std::result::Result<T, ProtocolError>;

/// Everything a front end needs to render a task and offer its inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct TaskDescription {
    pub task: Json,
    pub inputs: Vec<AbstractInput>,
}

impl TaskDescription {
    pub fn to_json(&self) -> Json {
        json!({ "task": self.task, "inputs": encode_inputs(&self.inputs) })
    }
}

impl Serialize for TaskDescription {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl std::fmt::Display for TaskDescription {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

pub fn encode_value(value: &Value) -> Json {
    match value {
        Value::Int(n) => json!({ "type": "int", "value": n }),
        Value::Bool(b) => json!({ "type": "bool", "value": b }),
        Value::String(s) => json!({ "type": "string", "value": s }),
        Value::Unit => json!({ "type": "unit" }),
    }
}

fn encode_editor(editor: &Editor, heap: &Heap) -> Result<Json> {
    let tagged = |tag: &str, v: &Value| json!({ "type": tag, "value": encode_value(v) });
    Ok(match editor {
        Editor::Enter(ty) => json!({ "type": "enter", "valueType": ty.name() }),
        Editor::Update(v) => tagged("update", v),
        Editor::View(v) => tagged("view", v),
        Editor::Change(r) => tagged("change", heap.read(*r).map_err(EngineError::from)?),
        Editor::Watch(r) => tagged("watch", heap.read(*r).map_err(EngineError::from)?),
    })
}

fn encode_node(
    task: &Task,
    heap: &Heap,
    inputs: &[AbstractInput],
    next: &mut usize,
) -> Result<Json> {
    Ok(match task {
        Task::Edit(editor) => {
            let id = *next;
            *next += 1;
            json!({ "type": "edit", "id": id, "editor": encode_editor(editor, heap)? })
        }
        Task::Select { inner, .. } => {
            let inner = encode_node(inner, heap, inputs, next)?;
            let id = *next;
            *next += 1;
            let labels: Vec<String> = enabled_labels(inputs, NodeId(id))
                .into_iter()
                .map(|l| l.to_string())
                .collect();
            json!({ "type": "select", "id": id, "task": inner, "labels": labels })
        }
        Task::Pair(a, b) => json!({
            "type": "pair",
            "t1": encode_node(a, heap, inputs, next)?,
            "t2": encode_node(b, heap, inputs, next)?,
        }),
        Task::Choose(a, b) => json!({
            "type": "choose",
            "t1": encode_node(a, heap, inputs, next)?,
            "t2": encode_node(b, heap, inputs, next)?,
        }),
        Task::Step(inner, _) => json!({ "type": "step", "task": encode_node(inner, heap, inputs, next)? }),
        Task::Trans(_, inner) => json!({ "type": "trans", "task": encode_node(inner, heap, inputs, next)? }),
        Task::Done(_) => json!({ "type": "done" }),
        Task::Fail => json!({ "type": "fail" }),
        Task::Assign(..) => return Err(ProtocolError::Unnormalized),
    })
}

/// Encodes a normalized task tree, numbering its nodes and listing the
/// enabled labels of each select.
pub fn encode_task(task: &Task, heap: &Heap) -> Result<Json> {
    let inputs = semantics::enumerate_inputs(task, heap)?;
    encode_node(task, heap, &inputs, &mut 0)
}

pub fn encode_input_description(input: &AbstractInput) -> Json {
    match input {
        AbstractInput::Insert { id, value_type } => {
            json!({ "type": "insert", "id": id.0, "valueType": value_type.name() })
        }
        AbstractInput::Option { id, label } => {
            json!({ "type": "option", "id": id.0, "label": label.as_str() })
        }
    }
}

pub fn encode_inputs(inputs: &[AbstractInput]) -> Json {
    Json::Array(inputs.iter().map(encode_input_description).collect())
}

pub fn encode_input(input: &ConcreteInput) -> Json {
    match input {
        ConcreteInput::Insert { id, value } => {
            json!({ "type": "insert", "id": id.0, "value": encode_value(value) })
        }
        ConcreteInput::Decide { id, label } => {
            json!({ "type": "decide", "id": id.0, "label": label })
        }
    }
}

fn object<'a>(json: &'a Json, what: &'static str) -> Result<&'a Map<String, Json>> {
    json.as_object().ok_or(ProtocolError::InvalidField(what))
}

fn field<'a>(obj: &'a Map<String, Json>, name: &'static str) -> Result<&'a Json> {
    obj.get(name).ok_or(ProtocolError::MissingField(name))
}

pub fn decode_value(json: &Json) -> Result<Value> {
    let obj = object(json, "value")?;
    let tag = field(obj, "type")
        .map_err(|_| ProtocolError::MissingField("value.type"))?
        .as_str()
        .ok_or(ProtocolError::InvalidField("value.type"))?;
    let payload = || obj.get("value").ok_or(ProtocolError::MissingField("value.value"));
    let invalid = ProtocolError::InvalidField("value.value");
    match tag {
        "int" => payload()?.as_i64().map(Value::Int).ok_or(invalid),
        "bool" => payload()?.as_bool().map(Value::Bool).ok_or(invalid),
        "string" => payload()?
            .as_str()
            .map(|s| Value::String(s.to_owned()))
            .ok_or(invalid),
        "unit" => Ok(Value::Unit),
        _ => Err(ProtocolError::InvalidField("value.type")),
    }
}

/// Decodes a concrete input from its wire object.
pub fn decode_input_json(json: &Json) -> Result<ConcreteInput> {
    let obj = json
        .as_object()
        .ok_or_else(|| ProtocolError::MalformedJson("expected a JSON object".into()))?;
    let tag = field(obj, "type")?
        .as_str()
        .ok_or(ProtocolError::InvalidField("type"))?;
    if tag != "insert" && tag != "decide" {
        return Err(ProtocolError::UnknownInputType(tag.to_owned()));
    }
    let id = field(obj, "id")?
        .as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .map(NodeId)
        .ok_or(ProtocolError::InvalidField("id"))?;
    if tag == "insert" {
        let value = decode_value(field(obj, "value")?)?;
        Ok(ConcreteInput::Insert { id, value })
    } else {
        let label = field(obj, "label")?
            .as_str()
            .ok_or(ProtocolError::InvalidField("label"))?;
        Ok(ConcreteInput::Decide {
            id,
            label: label.to_owned(),
        })
    }
}

pub fn decode_input(text: &str) -> Result<ConcreteInput> {
    let json: Json =
        serde_json::from_str(text).map_err(|e| ProtocolError::MalformedJson(e.to_string()))?;
    decode_input_json(&json)
}

/// Decodes a JSON array of concrete inputs, as used by replay scripts.
pub fn decode_inputs(text: &str) -> Result<Vec<ConcreteInput>> {
    let json: Json =
        serde_json::from_str(text).map_err(|e| ProtocolError::MalformedJson(e.to_string()))?;
    json.as_array()
        .ok_or_else(|| ProtocolError::MalformedJson("expected a JSON array".into()))?
        .iter()
        .map(decode_input_json)
        .collect()
}

/// Describes a task that is already normalized.
pub fn describe_normalized(task: &Task, heap: &Heap) -> Result<TaskDescription> {
    let inputs = semantics::enumerate_inputs(task, heap)?;
    let task = encode_node(task, heap, &inputs, &mut 0)?;
    Ok(TaskDescription { task, inputs })
}

/// Normalizes a copy of `task` and describes the result.
pub fn describe(task: &Task, heap: &Heap) -> Result<TaskDescription> {
    let (task, heap) = semantics::normalize(task.clone(), heap.clone())?;
    describe_normalized(&task, &heap)
}
