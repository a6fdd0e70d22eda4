//! The acceptance suite: every closed-form identity and quantitative bound
//! the library is contracted to reproduce, each pinned to its tolerance and
//! a runtime budget. The CLI `verify acceptance` subcommand and the
//! integration test target both run `run_all`.

use crate::error::Result;
use serde::Serialize;
use std::time::Instant;

#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub check_id: String,
    pub paper_ref: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
    pub seconds: f64,
    pub budget_seconds: f64,
}

impl Criterion {
    fn new(
        check_id: &str,
        reference: &str,
        value: f64,
        threshold: f64,
        seconds: f64,
        budget: f64,
    ) -> Criterion {
        Criterion {
            check_id: check_id.into(),
            paper_ref: reference.into(),
            value,
            threshold,
            pass: value <= threshold && seconds <= budget,
            seconds,
            budget_seconds: budget,
        }
    }

    pub fn print_line(&self) {
        println!(
            "{} {:<28} value {:> .3e}  threshold {:> .3e}  ({:.2}s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.check_id,
            self.value,
            self.threshold,
            self.seconds
        );
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool_version: String,
    pub criteria: Vec<Criterion>,
    pub all_pass: bool,
}

mod checks;
pub use checks::run_all;

pub(crate) fn timed<F: FnOnce() -> Result<Vec<(String, String, f64, f64)>>>(
    budget: f64,
    f: F,
) -> Result<Vec<Criterion>> {
    let start = Instant::now();
    let rows = f()?;
    let secs = start.elapsed().as_secs_f64();
    Ok(rows
        .into_iter()
        .map(|(id, reference, value, threshold)| {
            Criterion::new(&id, &reference, value, threshold, secs, budget)
        })
        .collect())
}
