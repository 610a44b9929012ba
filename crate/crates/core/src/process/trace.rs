//! Process traces and their CSV / JSON forms.
//!
//! A trace serializes as one `round` row per round followed by a single
//! `summary` row, under the fixed header [`ProcessTrace::CSV_HEADER`]. Columns
//! that do not apply to a row are left empty. Sets print as space-separated
//! vertex lists (`-` for the empty set); per-size weights print as
//! `t:weight` pairs joined by `;`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Pp,
    Restart,
    Main,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Pp => "pp",
            Variant::Restart => "restart",
            Variant::Main => "main",
        }
    }
}

/// Result of a round's success test. `Exhausted` marks the no-op rounds that
/// follow once nothing is left to fragment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    Failure,
    Exhausted,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Success => "success",
            Outcome::Failure => "failure",
            Outcome::Exhausted => "exhausted",
        }
    }
}

/// `Σ_{U ∈ U_t} q^t` together with `|U_t|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeWeight {
    pub t: usize,
    pub count: usize,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub index: usize,
    /// Size bound `ℓ_i` in force during the round.
    pub ell: usize,
    /// `|X_i|`.
    pub active_size: usize,
    pub w: VertexSet,
    /// `L` for fixed-size rounds.
    pub l: Option<f64>,
    /// Inclusion probability for Bernoulli rounds (restart attempts).
    pub p: Option<f64>,
    /// Weights for `t` in `(⌊ℓ_i/2⌋, ℓ_i]`.
    pub size_weights: Vec<SizeWeight>,
    pub c_weight: f64,
    /// Twice the expected-weight bound; the round fails when `c_weight`
    /// exceeds it.
    pub threshold: f64,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProcessTrace {
    pub variant: Variant,
    pub q: f64,
    pub eps: Option<f64>,
    /// `ℓ(H)` of the input.
    pub ell: usize,
    /// Round budget: `⌊log2 ℓ⌋ + 1`, `⌈log2(1/ε)⌉` or `6⌊log2(ℓ/ε)⌋`.
    pub planned_rounds: usize,
    pub rounds: Vec<RoundRecord>,
    /// Some edge of `H` lies inside `total_w`.
    pub found: bool,
    /// Lexicographically least such edge.
    pub found_edge: Option<VertexSet>,
    /// The process reached the hypergraph `{∅}`.
    pub resolved: bool,
    pub total_w: VertexSet,
    /// The accumulated cover `𝒰`, lexicographically sorted.
    pub u_edges: Vec<VertexSet>,
    /// `Σ_{U ∈ 𝒰} q^{|U|}`.
    pub u_weight: f64,
    /// Bound on `u_weight`: its expectation bound for `pp`, the sum of the
    /// success thresholds for `main`, 0 for `restart`.
    pub u_bound: f64,
    /// Whether `𝒰` undercovers `H`; not tracked for `restart`.
    pub u_undercovers: Option<bool>,
    pub successes: usize,
    /// Size bound after the last round.
    pub final_ell: usize,
}

impl ProcessTrace {
    pub const CSV_HEADER: [&'static str; 24] = [
        "record",
        "variant",
        "index",
        "ell",
        "active_size",
        "w_size",
        "w",
        "L",
        "p",
        "size_weights",
        "c_weight",
        "threshold",
        "outcome",
        "q",
        "eps",
        "planned_rounds",
        "found",
        "found_edge",
        "resolved",
        "total_w",
        "u_weight",
        "u_bound",
        "u_undercovers",
        "successes",
    ];

    /// `found` and `u_undercovers` disagree (exactly one holds). `None` for
    /// variants that do not track the cover.
    pub fn dichotomy_holds(&self) -> Option<bool> {
        self.u_undercovers.map(|u| self.found != u)
    }

    pub fn failure_rounds(&self) -> usize {
        self.rounds
            .iter()
            .filter(|r| r.outcome == Outcome::Failure)
            .count()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut out = csv::Writer::from_writer(Vec::new());
        out.write_record(Self::CSV_HEADER).map_err(csv_error)?;
        self.write_csv_rows(&mut out)?;
        finish(out)
    }

    /// Writes this trace's rows (no header) to `out`.
    pub fn write_csv_rows<W: std::io::Write>(&self, out: &mut csv::Writer<W>) -> Result<()> {
        let variant = self.variant.name();
        for r in &self.rounds {
            let weights: Vec<String> = r
                .size_weights
                .iter()
                .map(|s| format!("{}:{}", s.t, s.weight))
                .collect();
            let row: [String; 24] = [
                "round".into(),
                variant.into(),
                r.index.to_string(),
                r.ell.to_string(),
                r.active_size.to_string(),
                r.w.len().to_string(),
                r.w.to_string(),
                opt(r.l),
                opt(r.p),
                weights.join(";"),
                r.c_weight.to_string(),
                r.threshold.to_string(),
                r.outcome.name().into(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ];
            out.write_record(&row).map_err(csv_error)?;
        }
        let row: [String; 24] = [
            "summary".into(),
            variant.into(),
            self.rounds.len().to_string(),
            self.final_ell.to_string(),
            String::new(),
            self.total_w.len().to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            self.q.to_string(),
            opt(self.eps),
            self.planned_rounds.to_string(),
            self.found.to_string(),
            self.found_edge.as_ref().map(|e| e.to_string()).unwrap_or_default(),
            self.resolved.to_string(),
            self.total_w.to_string(),
            self.u_weight.to_string(),
            self.u_bound.to_string(),
            self.u_undercovers.map(|u| u.to_string()).unwrap_or_default(),
            self.successes.to_string(),
        ];
        out.write_record(&row).map_err(csv_error)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("traces serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub(crate) fn finish(out: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = out.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
