//! Two users appending to a shared chat history.

use toprt_core::{
    assign_with, enter, pair, repeat, step_options, watch, Continuation, Heap, StoreRef, Task,
    Value, ValueType,
};

pub fn chat_session(heap: &mut Heap) -> Task {
    let history = heap.share("");
    pair(
        watch(history),
        pair(chat("Tim", history), chat("Nico", history)),
    )
}

fn chat(name: &'static str, history: StoreRef) -> Task {
    let send = Continuation::new(move |msg| {
        append(history, name, msg.as_str().unwrap_or_default().to_owned())
    });
    repeat(
        step_options(enter(ValueType::String).expect("string editor"), [("Send", send)])
            .expect("single label"),
    )
}

fn append(history: StoreRef, name: &'static str, msg: String) -> Task {
    assign_with(history, move |h| {
        let h = h.as_str().unwrap_or_default();
        let sep = if h.is_empty() { "" } else { "\n" };
        Value::String(format!("{h}{sep}{name}: '{msg}'"))
    })
}
