//! Candy vending machine: pick a bar, then insert coins until the bill is paid.

use std::cmp::Ordering;

use toprt_core::{pair, select, step_user, view, Task};

pub const INTRO: &str = "We offer you three chocolate bars. Pure Chocolate: It's all in the name. \
IO Chocolate: Chocolate with unpredictable side effects. \
Sem Chocolate: don't try to understand, just eat it!";

pub const PAID: &str = "You have paid. Here is your candy. Enjoy it!";
pub const OVERPAID: &str = "You have paid too much! Sorry, no change, but here is your candy.";

pub const BARS: [(&str, i64); 3] = [
    ("Pure Chocolate", 8),
    ("IO Chocolate", 7),
    ("Sem Chocolate", 9),
];

pub const COINS: [i64; 3] = [5, 2, 1];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mood {
    Fair,
    Evil,
}

pub fn candy_machine() -> Task {
    let options = BARS.iter().map(|&(name, price)| (name, entry(price)));
    pair(view(INTRO), select(options).expect("bar labels are unique"))
}

fn entry(price: i64) -> Task {
    pair(
        view("You need to pay:"),
        step_user(view(price), |bill| pay_candy(bill.as_int().unwrap_or_default())),
    )
}

fn pay_candy(bill: i64) -> Task {
    step_user(pay_coin(bill), |left| {
        let left = left.as_int().unwrap_or_default();
        match left.cmp(&0) {
            Ordering::Equal => dispense_candy(Mood::Fair),
            Ordering::Less => dispense_candy(Mood::Evil),
            Ordering::Greater => pay_candy(left),
        }
    })
}

fn pay_coin(bill: i64) -> Task {
    let coins = COINS.iter().map(|&size| (size.to_string(), view(bill - size)));
    select(coins).expect("coin labels are unique")
}

fn dispense_candy(mood: Mood) -> Task {
    match mood {
        Mood::Fair => view(PAID),
        Mood::Evil => view(OVERPAID),
    }
}
