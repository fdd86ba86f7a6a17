//! Report payloads and rendering. Structured output is JSON with
//! full-precision floats; text output rounds to 6 significant digits.
//! Every numeric claim in a report is recomputable from its payload.

use gsdfit::classify::{GeneralClassification, PerturbationPlan, RankRegionClass, RegionCase,
                       RegionLabel};
use gsdfit::gsd::{FitReport, Gsd};
use gsdfit::pencil::{GeneralizedEigenvalue, PencilQZ};
use gsdfit::{CpFactors, DenseMatrix, Tensor3};
use serde::Serialize;

use crate::io::TensorFile;

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    pub payload: Payload,
}

#[derive(Debug, Serialize)]
pub struct Tolerances {
    pub tol: f64,
    pub sing_tol: f64,
    pub max_sweeps: usize,
    pub restarts: usize,
}

#[derive(Debug, Serialize)]
pub struct EigenvalueRepr {
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub beta: f64,
    pub value_re: f64,
    pub value_im: f64,
    pub infinite: bool,
}

impl EigenvalueRepr {
    fn from(e: &GeneralizedEigenvalue) -> Self {
        let (re, im) = e.value();
        Self {
            alpha_re: e.alpha_re,
            alpha_im: e.alpha_im,
            beta: e.beta,
            value_re: re,
            value_im: im,
            infinite: e.is_infinite(),
        }
    }

    /// Report order: finite values ascending by (re, im), infinite last.
    pub fn sorted(eigs: &[GeneralizedEigenvalue]) -> Vec<Self> {
        let mut out: Vec<Self> = eigs.iter().map(Self::from).collect();
        out.sort_by(|a, b| {
            a.infinite
                .cmp(&b.infinite)
                .then(a.value_re.total_cmp(&b.value_re))
                .then(a.value_im.total_cmp(&b.value_im))
        });
        out
    }
}

#[derive(Debug, Serialize)]
pub struct MatrixRepr {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<f64>>,
}

impl MatrixRepr {
    pub fn from(m: &DenseMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.to_rows(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GsdRepr {
    pub rank: usize,
    pub qa: MatrixRepr,
    pub qb: MatrixRepr,
    pub r1: MatrixRepr,
    pub r2: MatrixRepr,
}

impl GsdRepr {
    pub fn from(d: &Gsd) -> Self {
        Self {
            rank: d.rank(),
            qa: MatrixRepr::from(d.qa()),
            qb: MatrixRepr::from(d.qb()),
            r1: MatrixRepr::from(d.r1()),
            r2: MatrixRepr::from(d.r2()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ClassificationRepr {
    pub label: String,
    pub case: String,
    pub eigenvalues: Vec<EigenvalueRepr>,
    pub margin: f64,
}

impl ClassificationRepr {
    pub fn from(c: &RankRegionClass) -> Self {
        Self {
            label: label_name(c.label).to_string(),
            case: case_name(c.case).to_string(),
            eigenvalues: EigenvalueRepr::sorted(&c.eigenvalues),
            margin: c.margin,
        }
    }
}

pub fn label_name(l: RegionLabel) -> &'static str {
    match l {
        RegionLabel::Interior => "interior",
        RegionLabel::Boundary => "boundary",
        RegionLabel::Exterior => "exterior",
    }
}

pub fn case_name(c: RegionCase) -> &'static str {
    match c {
        RegionCase::A1 => "a1",
        RegionCase::A2 => "a2",
        RegionCase::A3 => "a3",
        RegionCase::B => "b",
    }
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Classify(ClassificationRepr),
    ClassifyGeneral {
        rank: usize,
        in_closure: bool,
        residual: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        square: Option<ClassificationRepr>,
    },
    ClassifyBatch {
        reports: Vec<BatchEntry>,
    },
    Fit {
        rank: usize,
        residual: f64,
        relative_residual: f64,
        converged: bool,
        sweeps: usize,
        trace: Vec<f64>,
        gsd: GsdRepr,
    },
    Qz {
        identically_singular: bool,
        q: MatrixRepr,
        z: MatrixRepr,
        f: MatrixRepr,
        g: MatrixRepr,
        block_sizes: Vec<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        eigenvalues: Option<Vec<EigenvalueRepr>>,
    },
    DecomposeCp {
        a: MatrixRepr,
        b: MatrixRepr,
        c: MatrixRepr,
        residual: f64,
    },
    DecomposeGsd {
        gsd: GsdRepr,
        residual: f64,
    },
    Perturb {
        h1: MatrixRepr,
        h2: MatrixRepr,
        perturbed: TensorFile,
        plan: PerturbationPlanRepr,
        reclassified: ClassificationRepr,
    },
    Gen {
        instance_kind: String,
        dims: Vec<usize>,
        rank: usize,
        tensor: TensorFile,
        self_check: String,
    },
}

#[derive(Debug, Serialize)]
pub struct BatchEntry {
    pub file: String,
    pub digest: String,
    pub classification: ClassificationRepr,
}

#[derive(Debug, Serialize)]
pub struct PerturbationPlanRepr {
    pub position_i: usize,
    pub position_j: usize,
    pub case: String,
    pub delta1: f64,
    pub delta2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    pub repeated_eigenvalue: f64,
    pub perturbation_norm: f64,
    pub h1_smallest_singular_value: f64,
}

impl PerturbationPlanRepr {
    pub fn from(p: &PerturbationPlan) -> Self {
        use gsdfit::classify::PerturbationCase;
        Self {
            position_i: p.position_i,
            position_j: p.position_j,
            case: match p.case {
                PerturbationCase::CommonNonzero => "common-nonzero",
                PerturbationCase::R1Nonzero => "r1-nonzero",
                PerturbationCase::R2Nonzero => "r2-nonzero",
            }
            .to_string(),
            delta1: p.delta1,
            delta2: p.delta2,
            eta: p.eta,
            repeated_eigenvalue: p.repeated_eigenvalue,
            perturbation_norm: p.perturbation_norm,
            h1_smallest_singular_value: p.h1_smallest_singular_value,
        }
    }
}

pub fn qz_payload(qz: &PencilQZ, identically_singular: bool) -> Payload {
    Payload::Qz {
        identically_singular,
        q: MatrixRepr::from(&qz.q),
        z: MatrixRepr::from(&qz.z),
        f: MatrixRepr::from(&qz.f),
        g: MatrixRepr::from(&qz.g),
        block_sizes: qz.blocks.iter().map(|b| b.size).collect(),
        eigenvalues: if identically_singular {
            None
        } else {
            Some(EigenvalueRepr::sorted(&qz.eigenvalues()))
        },
    }
}

pub fn cp_payload(f: &CpFactors, y: &Tensor3) -> Payload {
    let back = gsdfit::cp_reconstruct(f).expect("factor dims consistent");
    let residual = gsdfit::frobenius_distance(y, &back).expect("same dims");
    Payload::DecomposeCp {
        a: MatrixRepr::from(&f.a),
        b: MatrixRepr::from(&f.b),
        c: MatrixRepr::from(&f.c),
        residual,
    }
}

pub fn general_payload(rank: usize, g: &GeneralClassification) -> Payload {
    Payload::ClassifyGeneral {
        rank,
        in_closure: g.in_closure,
        residual: g.residual,
        square: g.square_detail.as_ref().map(ClassificationRepr::from),
    }
}

pub fn fit_payload(rank: usize, norm: f64, d: &Gsd, rep: &FitReport) -> Payload {
    Payload::Fit {
        rank,
        residual: rep.final_residual,
        relative_residual: if norm > 0.0 {
            rep.final_residual / norm
        } else {
            0.0
        },
        converged: rep.converged,
        sweeps: rep.sweeps,
        trace: rep.trace.clone(),
        gsd: GsdRepr::from(d),
    }
}

// ---------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------

/// Six significant digits for the human-readable format.
fn fmt6(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.is_finite() {
        format!("{x:.5e}")
    } else {
        format!("{x}")
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let push = |out: &mut String, line: String| {
            out.push_str(&line);
            out.push('\n');
        };
        push(&mut out, format!("command: {}", self.command));
        if let Some(d) = &self.input_digest {
            push(&mut out, format!("input digest: {d}"));
        }
        if let Some(s) = self.seed {
            push(&mut out, format!("seed: {s}"));
        }
        push(
            &mut out,
            format!(
                "tolerances: tol={} sing-tol={} max-sweeps={} restarts={}",
                fmt6(self.tolerances.tol),
                fmt6(self.tolerances.sing_tol),
                self.tolerances.max_sweeps,
                self.tolerances.restarts
            ),
        );
        match &self.payload {
            Payload::Classify(c) => render_classification(&mut out, c),
            Payload::ClassifyGeneral {
                rank,
                in_closure,
                residual,
                square,
            } => {
                push(
                    &mut out,
                    format!(
                        "rank {rank}: {} (fit residual {})",
                        if *in_closure { "in closure" } else { "exterior" },
                        fmt6(*residual)
                    ),
                );
                if let Some(c) = square {
                    render_classification(&mut out, c);
                }
            }
            Payload::ClassifyBatch { reports } => {
                for r in reports {
                    push(
                        &mut out,
                        format!(
                            "{}: {} (case {}, margin {}) digest {}",
                            r.file,
                            r.classification.label,
                            r.classification.case,
                            fmt6(r.classification.margin),
                            r.digest
                        ),
                    );
                }
            }
            Payload::Fit {
                rank,
                residual,
                relative_residual,
                converged,
                sweeps,
                trace: _,
                gsd: _,
            } => {
                push(
                    &mut out,
                    format!(
                        "fit rank {rank}: residual {} (relative {}), {} after {sweeps} sweeps",
                        fmt6(*residual),
                        fmt6(*relative_residual),
                        if *converged { "converged" } else { "not converged" },
                    ),
                );
            }
            Payload::Qz {
                identically_singular,
                block_sizes,
                eigenvalues,
                ..
            } => {
                push(
                    &mut out,
                    format!(
                        "qz: blocks {:?}{}",
                        block_sizes,
                        if *identically_singular {
                            " (identically singular pencil; eigenvalues undefined)"
                        } else {
                            ""
                        }
                    ),
                );
                if let Some(eigs) = eigenvalues {
                    for e in eigs {
                        push(&mut out, format!("  eigenvalue {}", fmt_eig(e)));
                    }
                }
            }
            Payload::DecomposeCp { residual, a, .. } => {
                push(
                    &mut out,
                    format!(
                        "cp decomposition: rank {} factors, reconstruction residual {}",
                        a.cols,
                        fmt6(*residual)
                    ),
                );
            }
            Payload::DecomposeGsd { residual, gsd } => {
                push(
                    &mut out,
                    format!(
                        "full gsd: rank {}, reconstruction residual {}",
                        gsd.rank,
                        fmt6(*residual)
                    ),
                );
            }
            Payload::Perturb {
                plan, reclassified, ..
            } => {
                push(
                    &mut out,
                    format!(
                        "perturbation: case {} at position {} (partner {}), norm {}",
                        plan.case, plan.position_i, plan.position_j,
                        fmt6(plan.perturbation_norm)
                    ),
                );
                push(
                    &mut out,
                    format!(
                        "  delta1 {} delta2 {}{} repeated eigenvalue {}",
                        fmt6(plan.delta1),
                        fmt6(plan.delta2),
                        plan.eta.map(|e| format!(" eta {}", fmt6(e))).unwrap_or_default(),
                        fmt6(plan.repeated_eigenvalue)
                    ),
                );
                push(
                    &mut out,
                    format!(
                        "  H1 smallest singular value {}",
                        fmt6(plan.h1_smallest_singular_value)
                    ),
                );
                render_classification(&mut out, reclassified);
            }
            Payload::Gen {
                instance_kind,
                dims,
                rank,
                self_check,
                ..
            } => {
                push(
                    &mut out,
                    format!(
                        "generated {instance_kind} instance, dims {dims:?}, rank {rank}: self-check {self_check}"
                    ),
                );
            }
        }
        out
    }
}

fn render_classification(out: &mut String, c: &ClassificationRepr) {
    out.push_str(&format!(
        "classification: {} (case {}), margin {}\n",
        c.label,
        c.case,
        fmt6(c.margin)
    ));
    for e in &c.eigenvalues {
        out.push_str(&format!("  eigenvalue {}\n", fmt_eig(e)));
    }
}

fn fmt_eig(e: &EigenvalueRepr) -> String {
    if e.infinite {
        format!("infinite (alpha={}, beta=0)", fmt6(e.alpha_re))
    } else if e.value_im != 0.0 {
        format!("{} {} {}i", fmt6(e.value_re), if e.value_im >= 0.0 { "+" } else { "-" }, fmt6(e.value_im.abs()))
    } else {
        fmt6(e.value_re)
    }
}
