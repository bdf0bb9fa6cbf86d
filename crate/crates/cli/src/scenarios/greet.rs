use toprt_core::{enter, step_user, view, Task, ValueType};

/// Asks for a name, then greets it after the user presses Continue.
pub fn greet() -> Task {
    step_user(enter(ValueType::String).expect("string editor"), |name| {
        view(format!("Hello {}", name.as_str().unwrap_or_default()))
    })
}
