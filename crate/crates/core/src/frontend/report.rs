//! Machine-readable run reports.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::counters::Alphabet;
use crate::engine::{Direction, Round, RoundOutcome, Verdict, VerifyReport};
use crate::system::ParameterizedSystem;

#[derive(Debug, Serialize)]
pub struct RoundRecord {
    pub index: usize,
    pub resolution: BTreeMap<String, u32>,
    pub time_s: f64,
    pub iterations: u64,
    pub words: u64,
    pub outcome: RoundOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separation_fallback: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub model: String,
    pub direction: Direction,
    pub verdict: &'static str,
    pub refinements: usize,
    pub total_time_s: f64,
    pub rounds: Vec<RoundRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<String>>,
}

fn resolution_map(round: &Round, alphabet: &Alphabet) -> BTreeMap<String, u32> {
    alphabet
        .states()
        .filter(|&q| round.resolution.get(q) > 0)
        .map(|q| (alphabet.name(q).to_string(), round.resolution.get(q)))
        .collect()
}

impl RunReport {
    pub fn new(sys: &ParameterizedSystem, direction: Direction, report: &VerifyReport) -> RunReport {
        let rounds: Vec<RoundRecord> = report
            .rounds
            .iter()
            .map(|r| RoundRecord {
                index: r.index,
                resolution: resolution_map(r, &sys.alphabet),
                time_s: r.stats.elapsed.as_secs_f64(),
                iterations: r.stats.iterations,
                words: r.stats.words,
                outcome: r.outcome,
                trace_length: r.trace.as_ref().map(|t| t.len()),
                separation_fallback: r.separation.as_ref().map(|s| s.fallback),
            })
            .collect();
        let counterexample = match &report.verdict {
            Verdict::Reachable(cex) => Some(
                cex.run
                    .iter()
                    .map(|c| c.display(&sys.alphabet).to_string())
                    .collect(),
            ),
            _ => None,
        };
        RunReport {
            model: sys.name.clone(),
            direction,
            verdict: report.verdict.name(),
            refinements: report.refinements(),
            total_time_s: rounds.iter().map(|r| r.time_s).sum(),
            rounds,
            counterexample,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
