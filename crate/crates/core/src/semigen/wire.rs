//! JSON wire format for decisions and certificates: verdict, certificate
//! kind, ideal/basis vectors as rational strings, trace steps as
//! `{rule, inputs, added}`. Schema version 1.

use super::quotients::EngelQuotientCert;
use super::saturate::{RuleId, TraceStep};
use super::{Certificate, Decision, SaturationConclusion, Subject, Verdict};
use crate::linalg::Subspace;
use crate::presentation::PresentationFile;
use crate::rat::{format_rat, parse_rat, Rat};
use serde::{Deserialize, Serialize};

fn vecs_to_wire(vs: &[Vec<Rat>]) -> Vec<Vec<String>> {
    vs.iter()
        .map(|v| v.iter().map(format_rat).collect())
        .collect()
}

fn vecs_from_wire(vs: &[Vec<String>]) -> Result<Vec<Vec<Rat>>, String> {
    vs.iter()
        .map(|v| {
            v.iter()
                .map(|s| parse_rat(s).map_err(|e| e.to_string()))
                .collect()
        })
        .collect()
}

fn subspace_to_wire(s: &Subspace) -> SubspaceWire {
    SubspaceWire {
        ambient: s.ambient_dim(),
        basis: vecs_to_wire(s.basis()),
    }
}

fn subspace_from_wire(w: &SubspaceWire) -> Result<Subspace, String> {
    Subspace::from_rows(w.ambient, vecs_from_wire(&w.basis)?).map_err(|e| e.to_string())
}

#[derive(Serialize, Deserialize)]
pub struct SubspaceWire {
    pub ambient: usize,
    pub basis: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
pub struct TraceStepWire {
    pub rule: String,
    pub inputs: Vec<Vec<String>>,
    pub added: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
pub struct EngelQuotientWire {
    pub ideal: SubspaceWire,
    pub n: usize,
    pub adapted_basis: Vec<Vec<String>>,
    pub gram: Vec<Vec<String>>,
    pub hyperplane: SubspaceWire,
}

#[derive(Serialize, Deserialize)]
pub struct ProductQuotientWire {
    pub factors: Vec<PresentationFile>,
    pub ideal: Vec<Vec<String>>,
    pub iso: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateWire {
    StepTwo {},
    Saturation {
        trace: Vec<TraceStepWire>,
        edge: SubspaceWire,
        conclusion: String,
    },
    DiamondBasis {
        basis: Vec<Vec<String>>,
        trace: Vec<TraceStepWire>,
        edge: SubspaceWire,
    },
    DiamondProductQuotient {
        data: ProductQuotientWire,
    },
    EngelQuotient {
        cert: EngelQuotientWire,
    },
    EngelSearchEmpty {
        reductions: Vec<SubspaceWire>,
        rejection: String,
    },
}

#[derive(Serialize, Deserialize)]
pub struct DecisionWire {
    pub schema: u32,
    pub algebra: String,
    /// `null` for a whole-algebra decision, else the covector.
    pub lambda: Option<Vec<String>>,
    pub verdict: String,
    pub certificate: Option<CertificateWire>,
    pub notes: Vec<String>,
}

pub fn product_quotient_to_wire(d: &super::diamond::ProductQuotientData) -> ProductQuotientWire {
    ProductQuotientWire {
        factors: d.factors.clone(),
        ideal: vecs_to_wire(&d.ideal),
        iso: vecs_to_wire(&d.iso),
    }
}

pub fn product_quotient_from_wire(
    w: &ProductQuotientWire,
) -> Result<super::diamond::ProductQuotientData, String> {
    Ok(super::diamond::ProductQuotientData {
        factors: w.factors.clone(),
        ideal: vecs_from_wire(&w.ideal)?,
        iso: vecs_from_wire(&w.iso)?,
    })
}

fn rule_to_str(r: RuleId) -> String {
    format!("{r:?}")
}

fn rule_from_str(s: &str) -> Result<RuleId, String> {
    match s {
        "R1" => Ok(RuleId::R1),
        "R2" => Ok(RuleId::R2),
        "R3" => Ok(RuleId::R3),
        "R4" => Ok(RuleId::R4),
        "R5" => Ok(RuleId::R5),
        _ => Err(format!("unknown rule `{s}`")),
    }
}

fn trace_to_wire(trace: &[TraceStep]) -> Vec<TraceStepWire> {
    trace
        .iter()
        .map(|s| TraceStepWire {
            rule: rule_to_str(s.rule),
            inputs: vecs_to_wire(&s.inputs),
            added: vecs_to_wire(&s.added),
        })
        .collect()
}

fn trace_from_wire(trace: &[TraceStepWire]) -> Result<Vec<TraceStep>, String> {
    trace
        .iter()
        .map(|s| {
            Ok(TraceStep {
                rule: rule_from_str(&s.rule)?,
                inputs: vecs_from_wire(&s.inputs)?,
                added: vecs_from_wire(&s.added)?,
            })
        })
        .collect()
}

pub fn decision_to_wire(algebra: &str, d: &Decision) -> DecisionWire {
    let lambda = match &d.subject {
        Subject::Algebra => None,
        Subject::HalfSpace(l) => Some(l.iter().map(format_rat).collect()),
    };
    let verdict = match d.verdict {
        Verdict::Semigenerated => "semigenerated",
        Verdict::NotSemigenerated => "not_semigenerated",
        Verdict::Unknown => "unknown",
    }
    .to_string();
    let certificate = d.certificate.as_ref().map(|c| match c {
        Certificate::StepTwo => CertificateWire::StepTwo {},
        Certificate::Saturation {
            trace,
            edge,
            conclusion,
        } => CertificateWire::Saturation {
            trace: trace_to_wire(trace),
            edge: subspace_to_wire(edge),
            conclusion: match conclusion {
                SaturationConclusion::V3InEdge => "v3_in_edge".into(),
                SaturationConclusion::V2InEdge => "v2_in_edge".into(),
            },
        },
        Certificate::DiamondBasis { basis, trace, edge } => CertificateWire::DiamondBasis {
            basis: vecs_to_wire(basis),
            trace: trace_to_wire(trace),
            edge: subspace_to_wire(edge),
        },
        Certificate::DiamondProductQuotient(data) => CertificateWire::DiamondProductQuotient {
            data: ProductQuotientWire {
                factors: data.factors.clone(),
                ideal: vecs_to_wire(&data.ideal),
                iso: vecs_to_wire(&data.iso),
            },
        },
        Certificate::EngelQuotient(cert) => CertificateWire::EngelQuotient {
            cert: EngelQuotientWire {
                ideal: subspace_to_wire(&cert.ideal),
                n: cert.n,
                adapted_basis: vecs_to_wire(&cert.adapted_basis),
                gram: vecs_to_wire(&cert.gram),
                hyperplane: subspace_to_wire(&cert.hyperplane),
            },
        },
        Certificate::EngelSearchEmpty {
            reductions,
            rejection,
        } => CertificateWire::EngelSearchEmpty {
            reductions: reductions.iter().map(subspace_to_wire).collect(),
            rejection: rejection.clone(),
        },
    });
    DecisionWire {
        schema: 1,
        algebra: algebra.to_string(),
        lambda,
        verdict,
        certificate,
        notes: d.notes.clone(),
    }
}

pub fn decision_from_wire(w: &DecisionWire) -> Result<Decision, String> {
    if w.schema != 1 {
        return Err(format!("unsupported schema {}", w.schema));
    }
    let subject = match &w.lambda {
        None => Subject::Algebra,
        Some(l) => Subject::HalfSpace(
            l.iter()
                .map(|s| parse_rat(s).map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?,
        ),
    };
    let verdict = match w.verdict.as_str() {
        "semigenerated" => Verdict::Semigenerated,
        "not_semigenerated" => Verdict::NotSemigenerated,
        "unknown" => Verdict::Unknown,
        other => return Err(format!("unknown verdict `{other}`")),
    };
    let certificate = match &w.certificate {
        None => None,
        Some(CertificateWire::StepTwo {}) => Some(Certificate::StepTwo),
        Some(CertificateWire::Saturation {
            trace,
            edge,
            conclusion,
        }) => Some(Certificate::Saturation {
            trace: trace_from_wire(trace)?,
            edge: subspace_from_wire(edge)?,
            conclusion: match conclusion.as_str() {
                "v3_in_edge" => SaturationConclusion::V3InEdge,
                "v2_in_edge" => SaturationConclusion::V2InEdge,
                other => return Err(format!("unknown conclusion `{other}`")),
            },
        }),
        Some(CertificateWire::DiamondBasis { basis, trace, edge }) => {
            Some(Certificate::DiamondBasis {
                basis: vecs_from_wire(basis)?,
                trace: trace_from_wire(trace)?,
                edge: subspace_from_wire(edge)?,
            })
        }
        Some(CertificateWire::DiamondProductQuotient { data }) => Some(
            Certificate::DiamondProductQuotient(super::diamond::ProductQuotientData {
                factors: data.factors.clone(),
                ideal: vecs_from_wire(&data.ideal)?,
                iso: vecs_from_wire(&data.iso)?,
            }),
        ),
        Some(CertificateWire::EngelQuotient { cert }) => {
            Some(Certificate::EngelQuotient(EngelQuotientCert {
                ideal: subspace_from_wire(&cert.ideal)?,
                n: cert.n,
                adapted_basis: vecs_from_wire(&cert.adapted_basis)?,
                gram: vecs_from_wire(&cert.gram)?,
                hyperplane: subspace_from_wire(&cert.hyperplane)?,
            }))
        }
        Some(CertificateWire::EngelSearchEmpty {
            reductions,
            rejection,
        }) => Some(Certificate::EngelSearchEmpty {
            reductions: reductions
                .iter()
                .map(subspace_from_wire)
                .collect::<Result<_, _>>()?,
            rejection: rejection.clone(),
        }),
    };
    Ok(Decision {
        subject,
        verdict,
        certificate,
        notes: w.notes.clone(),
    })
}
