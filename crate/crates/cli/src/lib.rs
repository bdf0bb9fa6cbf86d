//! Example workflows and the headless replay driver behind the `toprt` binary.

pub mod scenarios;
