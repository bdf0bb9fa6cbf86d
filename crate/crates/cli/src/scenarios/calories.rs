//! Calorie calculator: a sequence of labeled prompts followed by the
//! Mifflin-St Jeor estimate of daily energy use.

use toprt_core::{done, enter, pair, select, step_auto, step_user, view, Data, Task, ValueType};

pub const INTRODUCTION: &str = "This tool estimates your resting metabolic rate,\n\
i.e. the number of  calories you have to consume\n\
per day to maintain your weight.\n\
Press \"Continue\" to start\n";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gender {
    Male,
    Female,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActivityLevel {
    Sedentary,
    Low,
    Active,
    VeryActive,
}

impl Gender {
    const LABELS: [(&'static str, Gender); 2] = [("Male", Gender::Male), ("Female", Gender::Female)];

    fn from_label(label: &str) -> Option<Self> {
        Self::LABELS.iter().find(|(l, _)| *l == label).map(|(_, g)| *g)
    }
}

impl ActivityLevel {
    const LABELS: [(&'static str, ActivityLevel); 4] = [
        ("Sedentary", ActivityLevel::Sedentary),
        ("Low active", ActivityLevel::Low),
        ("Active", ActivityLevel::Active),
        ("Very Active", ActivityLevel::VeryActive),
    ];

    fn from_label(label: &str) -> Option<Self> {
        Self::LABELS.iter().find(|(l, _)| *l == label).map(|(_, a)| *a)
    }

    /// Activity multiplier as an exact fraction.
    fn factor(self) -> (i64, i64) {
        match self {
            ActivityLevel::Sedentary => (6, 5),
            ActivityLevel::Low => (11, 8),
            ActivityLevel::Active => (31, 20),
            ActivityLevel::VeryActive => (69, 40),
        }
    }
}

/// Daily calories, truncated toward zero. Height in cm, weight in kg, age in
/// years.
pub fn calculate_calories(
    gender: Gender,
    activity: ActivityLevel,
    height: i64,
    weight: i64,
    age: i64,
) -> i64 {
    // Four times the resting rate keeps the 6.25 * height term integral.
    let offset = match gender {
        Gender::Male => 5 * 4,
        Gender::Female => -161 * 4,
    };
    let bmr4 = 40 * weight + 25 * height - 20 * age + offset;
    let (num, den) = activity.factor();
    bmr4 * num / (4 * den)
}

fn prompt(label: &str, task: Task) -> Task {
    pair(view(label), task)
}

fn prompted_int(label: &str) -> Task {
    prompt(label, enter(ValueType::Int).expect("int editor"))
}

fn prompted_choice(label: &str, labels: &[&str]) -> Task {
    let options = labels.iter().map(|l| (*l, done(*l)));
    prompt(label, select(options).expect("labels are unique"))
}

/// The answer half of a `(label, answer)` prompt value.
fn answer(d: &Data) -> &Data {
    d.as_pair().map(|(_, a)| a).expect("prompt value is a pair")
}

pub fn calorie_calculator() -> Task {
    step_user(view(INTRODUCTION), |_| {
        step_auto(prompted_int("Enter your height in cm:"), |d| {
            let height = answer(&d).as_int().unwrap_or_default();
            step_auto(prompted_int("Enter your weight in kg:"), move |d| {
                let weight = answer(&d).as_int().unwrap_or_default();
                step_auto(prompted_int("Enter your age:"), move |d| {
                    let age = answer(&d).as_int().unwrap_or_default();
                    let genders: Vec<&str> = Gender::LABELS.iter().map(|(l, _)| *l).collect();
                    step_auto(prompted_choice("Select your gender:", &genders), move |d| {
                        let gender = answer(&d).as_str().and_then(Gender::from_label);
                        let levels: Vec<&str> =
                            ActivityLevel::LABELS.iter().map(|(l, _)| *l).collect();
                        step_auto(
                            prompted_choice("What is your activity level?", &levels),
                            move |d| {
                                let activity =
                                    answer(&d).as_str().and_then(ActivityLevel::from_label);
                                let calories = calculate_calories(
                                    gender.unwrap_or(Gender::Male),
                                    activity.unwrap_or(ActivityLevel::Sedentary),
                                    height,
                                    weight,
                                    age,
                                );
                                view(format!(
                                    "Your resting metabolic rate is: {calories} calories per day."
                                ))
                            },
                        )
                    })
                })
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Direct floating-point evaluation of the same formula.
    fn oracle(male: bool, factor: f64, h: f64, w: f64, a: f64) -> f64 {
        let bmr = 10.0 * w + 6.25 * h - 5.0 * a + if male { 5.0 } else { -161.0 };
        bmr * factor
    }

    #[test]
    fn reference_person() {
        // (10*80 + 6.25*180 - 5*30 + 5) * 1.2 = 1780 * 1.2
        assert_eq!(
            calculate_calories(Gender::Male, ActivityLevel::Sedentary, 180, 80, 30),
            2136
        );
    }

    #[test]
    fn matches_float_oracle() {
        let levels = [
            (ActivityLevel::Sedentary, 1.2),
            (ActivityLevel::Low, 1.375),
            (ActivityLevel::Active, 1.55),
            (ActivityLevel::VeryActive, 1.725),
        ];
        for (gender, male) in [(Gender::Male, true), (Gender::Female, false)] {
            for (level, factor) in levels {
                for h in [150, 163, 181, 199] {
                    for w in [45, 70, 93] {
                        for a in [18, 41, 77] {
                            let exact = oracle(male, factor, h as f64, w as f64, a as f64);
                            let got = calculate_calories(gender, level, h, w, a);
                            let gap = exact - got as f64;
                            assert!(
                                (-1e-6..1.0).contains(&gap),
                                "{gender:?} {level:?} {h} {w} {a}: {got} vs {exact}"
                            );
                        }
                    }
                }
            }
        }
    }
}
