//! Built-in example workflows with replay scripts.

mod calories;
mod candy;
mod chat;
mod greet;
mod tax;

pub use calories::{calculate_calories, calorie_calculator, ActivityLevel, Gender};
pub use candy::candy_machine;
pub use chat::chat_session;
pub use greet::greet;
pub use tax::{subsidy_amount, tax, TODAY};

pub mod text {
    pub use super::calories::INTRODUCTION as CALORIE_INTRODUCTION;
    pub use super::candy::{INTRO as CANDY_INTRO, OVERPAID, PAID};
}

use serde_json::{json, Value as Json};
use toprt_core::{ConcreteInput, Program};

/// A recorded input sequence and a fragment its final description must contain.
#[derive(Clone, Debug)]
pub struct Script {
    pub name: &'static str,
    pub inputs: Vec<ConcreteInput>,
    pub expect: Json,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: &'static str,
    pub program: Program,
    pub scripts: Vec<Script>,
}

/// Whether every object key, array element and scalar in `fragment` is
/// present in `json`. Arrays must match in length.
pub fn contains_fragment(json: &Json, fragment: &Json) -> bool {
    match (json, fragment) {
        (Json::Object(have), Json::Object(want)) => want
            .iter()
            .all(|(k, w)| have.get(k).is_some_and(|h| contains_fragment(h, w))),
        (Json::Array(have), Json::Array(want)) => {
            have.len() == want.len() && have.iter().zip(want).all(|(h, w)| contains_fragment(h, w))
        }
        (h, w) => h == w,
    }
}

fn view_of(text: &str) -> Json {
    json!({ "type": "edit", "editor": { "type": "view", "value": { "type": "string", "value": text } } })
}

fn insert(id: usize, v: impl Into<toprt_core::Value>) -> ConcreteInput {
    ConcreteInput::insert(id, v)
}

fn decide(id: usize, label: &str) -> ConcreteInput {
    ConcreteInput::decide(id, label)
}

/// Inputs that select `bar` and pay with `coins`, pressing Continue after
/// each step. The price and coin selects sit at ids 3 and 1.
pub fn candy_inputs(bar: &str, coins: &[i64]) -> Vec<ConcreteInput> {
    let mut inputs = vec![decide(1, bar), decide(3, "Continue")];
    for coin in coins {
        inputs.push(decide(2, &coin.to_string()));
        inputs.push(decide(3, "Continue"));
    }
    inputs
}

/// Inputs for the tax workflow up to and including the officer's Continue.
pub fn tax_inputs(amount: i64, invoice_date: i64, confirmed: bool) -> Vec<ConcreteInput> {
    vec![
        insert(0, amount),
        insert(1, invoice_date),
        insert(2, confirmed),
        decide(3, "Continue"),
        decide(1, "Continue"),
    ]
}

/// Inputs for the calorie calculator: Continue, then each prompt in order.
pub fn calorie_inputs(height: i64, weight: i64, age: i64, gender: &str, activity: &str) -> Vec<ConcreteInput> {
    vec![
        decide(1, "Continue"),
        insert(1, height),
        insert(1, weight),
        insert(1, age),
        decide(1, gender),
        decide(1, activity),
    ]
}

/// Inputs that let each `(sender, message)` pair send one chat message.
pub fn chat_inputs(messages: &[(&str, &str)]) -> Vec<ConcreteInput> {
    messages
        .iter()
        .flat_map(|&(who, msg)| {
            let (field, send) = if who == "Tim" { (1, 2) } else { (3, 4) };
            [insert(field, msg), decide(send, "Send")]
        })
        .collect()
}

pub fn all() -> Vec<Scenario> {
    vec![
        Scenario {
            name: "greet",
            program: Program::from_fn(greet),
            scripts: vec![Script {
                name: "alice",
                inputs: vec![insert(0, "Alice"), decide(1, "Continue")],
                expect: json!({ "task": view_of("Hello Alice"), "inputs": [] }),
            }],
        },
        Scenario {
            name: "candy",
            program: Program::from_fn(candy_machine),
            scripts: vec![
                Script {
                    name: "io-exact",
                    inputs: candy_inputs("IO Chocolate", &[5, 2]),
                    expect: json!({ "task": { "t2": { "t2": view_of(candy::PAID) } } }),
                },
                Script {
                    name: "pure-overpaid",
                    inputs: candy_inputs("Pure Chocolate", &[5, 5]),
                    expect: json!({ "task": { "t2": { "t2": view_of(candy::OVERPAID) } } }),
                },
            ],
        },
        Scenario {
            name: "calories",
            program: Program::from_fn(calorie_calculator),
            scripts: vec![Script {
                name: "reference-person",
                inputs: calorie_inputs(180, 80, 30, "Male", "Sedentary"),
                expect: json!({
                    "task": view_of("Your resting metabolic rate is: 2136 calories per day.")
                }),
            }],
        },
        Scenario {
            name: "chat",
            program: Program::new(chat_session),
            scripts: vec![Script {
                name: "two-messages",
                inputs: chat_inputs(&[("Tim", "hi"), ("Nico", "yo")]),
                expect: json!({ "task": { "t1": { "editor": {
                    "type": "watch",
                    "value": { "type": "string", "value": "Tim: 'hi'\nNico: 'yo'" }
                } } } }),
            }],
        },
        Scenario {
            name: "tax",
            program: Program::from_fn(tax),
            scripts: vec![
                Script {
                    name: "approved",
                    inputs: tax_inputs(1000, 0, true),
                    expect: json!({ "task": view_of(
                        "Subsidy amount: 100\nApproved: True\nConfirmed: True\nInvoice date: 0\nToday: 100\n"
                    ) }),
                },
                Script {
                    name: "capped",
                    inputs: tax_inputs(10000, 0, true),
                    expect: json!({ "task": view_of(
                        "Subsidy amount: 600\nApproved: True\nConfirmed: True\nInvoice date: 0\nToday: 100\n"
                    ) }),
                },
                Script {
                    name: "unconfirmed",
                    inputs: tax_inputs(1000, 0, false),
                    expect: json!({ "task": view_of(
                        "Subsidy amount: 0\nApproved: False\nConfirmed: False\nInvoice date: 0\nToday: 100\n"
                    ) }),
                },
            ],
        },
    ]
}

pub fn names() -> Vec<&'static str> {
    all().iter().map(|s| s.name).collect()
}

pub fn find(name: &str) -> Option<Scenario> {
    all().into_iter().find(|s| s.name == name)
}
