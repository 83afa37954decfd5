//! Serializable reports for the CLI.
//!
//! Every invocation produces one [`Report`] with a fixed top-level shape
//! `{ command, space, result, diagnostics }`. The `result` payload is
//! internally tagged by `kind`, field order is fixed by the struct
//! definitions, and nothing time- or host-dependent is ever included, so
//! identical jobs serialize to identical bytes. Text rendering prints the
//! same values to 12 significant digits.

use serde::Serialize;

use crate::operator::{IntervalEqualityReport, OperatorVerdict, Preservation, ScaledIsometry};
use crate::pencil::{CompanionSample, CompanionStatus};
use crate::reconstruct::ReconstructionResult;
use crate::space::{NormKind, NormSpec, Vector};

/// Top-level report emitted for one job.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub space: NormSpec,
    pub result: ReportResult,
    pub diagnostics: Diagnostics,
}

/// Command-specific payload, tagged by `kind`.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportResult {
    CheckOrtho {
        orthogonal: bool,
        /// `D⁻` of `α ↦ ‖u + αv‖` at `0`.
        left_derivative: f64,
        /// `D⁺` of the same map.
        right_derivative: f64,
    },
    Interval {
        m: f64,
        #[serde(rename = "M")]
        upper: f64,
        min_value: f64,
    },
    Companion(CompanionSample),
    Reconstruct(ReconstructionResult),
    ClassifyOperator {
        verdict: OperatorVerdict,
    },
    TheoremSuite {
        verdict: OperatorVerdict,
        /// Absent when the operator is singular (the image pencils would
        /// degenerate, so the check does not apply).
        interval_equality: Option<IntervalEqualityReport>,
    },
}

/// Job parameters echoed for reproducibility. Only fields relevant to the
/// command are present.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_pairs: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

/// A real formatted to 12 significant digits, in plain decimal for
/// moderate magnitudes and scientific notation otherwise.
pub fn sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    if (-5..12).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.11e}")
    }
}

fn vector_text(v: &Vector) -> String {
    let coords: Vec<String> = v.coords().iter().map(|&c| sig12(c)).collect();
    format!("[{}]", coords.join(", "))
}

fn space_text(space: &NormSpec) -> String {
    let d = space.descriptor();
    match &d.norm {
        NormKind::Lp { p } => format!("dim {}, lp p={p}", d.dim),
        NormKind::WeightedLp { p, weights } => {
            let w: Vec<String> = weights.iter().map(|&c| sig12(c)).collect();
            format!("dim {}, weighted_lp p={p} weights=[{}]", d.dim, w.join(", "))
        }
        NormKind::Polyhedral { generators } => {
            format!("dim {}, polyhedral with {} generators", d.dim, generators.len())
        }
    }
}

fn push_companion(lines: &mut Vec<String>, sample: &CompanionSample) {
    lines.push(format!("alpha: {}", sig12(sample.alpha)));
    match sample.status {
        CompanionStatus::OrthogonalToY => lines.push("status: orthogonal_to_y".to_string()),
        CompanionStatus::Value { f_alpha } => {
            lines.push("status: value".to_string());
            lines.push(format!("f_alpha: {}", sig12(f_alpha)));
        }
        CompanionStatus::NotDifferentiable => {
            lines.push("status: not_differentiable".to_string())
        }
    }
}

fn push_verdict(lines: &mut Vec<String>, verdict: &OperatorVerdict) {
    match &verdict.preserves {
        Preservation::Preserves => lines.push("preserves: preserves".to_string()),
        Preservation::Falsified {
            witness_u,
            witness_v,
        } => {
            lines.push("preserves: falsified".to_string());
            lines.push(format!("witness_u: {}", vector_text(witness_u)));
            lines.push(format!("witness_v: {}", vector_text(witness_v)));
        }
    }
    match &verdict.scaled_isometry {
        ScaledIsometry::Yes { k } => {
            lines.push(format!("scaled_isometry: yes, k = {}", sig12(*k)));
        }
        ScaledIsometry::No {
            ratio_min,
            ratio_max,
            witness_lo,
            witness_hi,
        } => {
            lines.push("scaled_isometry: no".to_string());
            lines.push(format!("ratio_min: {}", sig12(*ratio_min)));
            lines.push(format!("ratio_max: {}", sig12(*ratio_max)));
            lines.push(format!("witness_lo: {}", vector_text(witness_lo)));
            lines.push(format!("witness_hi: {}", vector_text(witness_hi)));
        }
    }
    lines.push(format!("kernel_hits: {}", verdict.kernel_hits));
    lines.push(format!("zero_operator: {}", verdict.zero_operator));
    lines.push(format!("inconsistent: {}", verdict.inconsistent));
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    pub fn to_text(&self) -> String {
        let mut lines = vec![
            format!("command: {}", self.command),
            format!("space: {}", space_text(&self.space)),
        ];
        match &self.result {
            ReportResult::CheckOrtho {
                orthogonal,
                left_derivative,
                right_derivative,
            } => {
                lines.push(format!("orthogonal: {orthogonal}"));
                lines.push(format!("left_derivative: {}", sig12(*left_derivative)));
                lines.push(format!("right_derivative: {}", sig12(*right_derivative)));
            }
            ReportResult::Interval {
                m,
                upper,
                min_value,
            } => {
                lines.push(format!("m: {}", sig12(*m)));
                lines.push(format!("M: {}", sig12(*upper)));
                lines.push(format!("min_value: {}", sig12(*min_value)));
            }
            ReportResult::Companion(sample) => push_companion(&mut lines, sample),
            ReportResult::Reconstruct(r) => {
                lines.push(format!("alpha: {}", sig12(r.alpha)));
                lines.push(format!("reconstructed: {}", sig12(r.reconstructed)));
                lines.push(format!("direct: {}", sig12(r.direct)));
                lines.push(format!("rel_error: {}", sig12(r.rel_error)));
                lines.push(format!("nodes_used: {}", r.nodes_used));
            }
            ReportResult::ClassifyOperator { verdict } => push_verdict(&mut lines, verdict),
            ReportResult::TheoremSuite {
                verdict,
                interval_equality,
            } => {
                push_verdict(&mut lines, verdict);
                match interval_equality {
                    Some(eq) => {
                        lines.push(format!("interval_pencils_tested: {}", eq.pencils_tested));
                        lines.push(format!("interval_degenerate_skipped: {}", eq.degenerate_skipped));
                        lines.push(format!("interval_max_hausdorff: {}", sig12(eq.max_hausdorff)));
                    }
                    None => lines.push("interval_equality: skipped (singular operator)".to_string()),
                }
            }
        }
        let mut diag = Vec::new();
        if let Some(seed) = self.diagnostics.seed {
            diag.push(format!("seed={seed}"));
        }
        if let Some(pairs) = self.diagnostics.num_pairs {
            diag.push(format!("pairs={pairs}"));
        }
        if let Some(alpha) = self.diagnostics.alpha {
            diag.push(format!("alpha={}", sig12(alpha)));
        }
        if !diag.is_empty() {
            lines.push(format!("diagnostics: {}", diag.join(" ")));
        }
        lines.join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_formats() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(1.0), "1.00000000000");
        assert_eq!(sig12(-1.0), "-1.00000000000");
        assert_eq!(sig12(0.5), "0.500000000000");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(1e15), "1.00000000000e15");
        assert_eq!(sig12(2.5e-9), "2.50000000000e-9");
    }

    #[test]
    fn sig12_agrees_with_value_to_twelve_digits() {
        for v in [std::f64::consts::PI, -0.123456789123456, 3.0f64.sqrt(), 1e-3] {
            let parsed: f64 = sig12(v).parse().unwrap();
            assert!((parsed - v).abs() <= 1e-11 * v.abs().max(1.0));
        }
    }

    #[test]
    fn report_json_has_stable_top_level() {
        let space = NormSpec::l2(2).unwrap();
        let report = Report {
            command: "interval".to_string(),
            space,
            result: ReportResult::Interval {
                m: -1.0,
                upper: 1.0,
                min_value: 1.0,
            },
            diagnostics: Diagnostics::default(),
        };
        let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(value["command"], "interval");
        assert_eq!(value["space"]["dim"], 2);
        assert_eq!(value["result"]["kind"], "interval");
        assert_eq!(value["result"]["m"], -1.0);
        assert_eq!(value["result"]["M"], 1.0);
        assert!(value["diagnostics"].as_object().unwrap().is_empty());
    }

    #[test]
    fn companion_report_flattens_status() {
        let space = NormSpec::l2(2).unwrap();
        let report = Report {
            command: "companion".to_string(),
            space,
            result: ReportResult::Companion(CompanionSample {
                alpha: 2.0,
                status: CompanionStatus::Value { f_alpha: 0.5 },
            }),
            diagnostics: Diagnostics::default(),
        };
        let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(value["result"]["kind"], "companion");
        assert_eq!(value["result"]["alpha"], 2.0);
        assert_eq!(value["result"]["status"], "value");
        assert_eq!(value["result"]["f_alpha"], 0.5);
        let text = report.to_text();
        assert!(text.contains("status: value"));
        assert!(text.contains("f_alpha: 0.500000000000"));
    }

    #[test]
    fn text_contains_expected_lines() {
        let space = NormSpec::l2(2).unwrap();
        let report = Report {
            command: "check-ortho".to_string(),
            space,
            result: ReportResult::CheckOrtho {
                orthogonal: true,
                left_derivative: 0.0,
                right_derivative: 0.0,
            },
            diagnostics: Diagnostics::default(),
        };
        let text = report.to_text();
        assert!(text.contains("orthogonal: true"));
        assert!(text.contains("command: check-ortho"));
    }
}
