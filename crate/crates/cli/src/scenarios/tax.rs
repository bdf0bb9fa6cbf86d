//! Solar panel subsidy request: the citizen and the installer fill in their
//! parts in parallel, an officer reviews, and the outcome is summarized.

use toprt_core::{enter, pair, step_user, view, Task, ValueType};

/// Dates are day numbers.
pub const TODAY: i64 = 100;

pub fn subsidy_amount(approved: bool, invoice_amount: i64) -> i64 {
    if approved {
        600.min(invoice_amount.div_euclid(10))
    } else {
        0
    }
}

fn officer_approve(invoice_date: i64, date: i64, confirmed: bool) -> Task {
    view(date - invoice_date < 365 && confirmed)
}

pub fn tax() -> Task {
    let int = || enter(ValueType::Int).expect("int editor");
    let provide_documents = pair(int(), int());
    let company_confirm = enter(ValueType::Bool).expect("bool editor");
    step_user(pair(provide_documents, company_confirm), |d| {
        let (documents, confirmed) = d.as_pair().expect("pair value");
        let (amount, invoice_date) = documents.as_pair().expect("pair value");
        let amount = amount.as_int().unwrap_or_default();
        let invoice_date = invoice_date.as_int().unwrap_or_default();
        let confirmed = confirmed.as_bool().unwrap_or_default();
        step_user(officer_approve(invoice_date, TODAY, confirmed), move |approved| {
            let approved = approved.as_bool().unwrap_or_default();
            let lines = [
                format!("Subsidy amount: {}", subsidy_amount(approved, amount)),
                format!("Approved: {}", toprt_core::Value::Bool(approved)),
                format!("Confirmed: {}", toprt_core::Value::Bool(confirmed)),
                format!("Invoice date: {invoice_date}"),
                format!("Today: {TODAY}"),
            ];
            view(lines.iter().map(|l| format!("{l}\n")).collect::<String>())
        })
    })
}
