//! Half-spaces, the edge-saturation engine, type (⋆)/(◊) checks,
//! Engel-quotient search, and the three-valued semigeneration decision with
//! machine-checkable certificates.
//!
//! Soundness is the contract throughout: the saturation engine computes a
//! monotone lower bound for the edge of the half-space semigroup, each step
//! justified by one of five rules; `Unknown` is the honest fallback where
//! the implemented criteria do not apply.

mod decide;
mod diamond;
mod quotients;
mod saturate;
mod star;
mod verify;
pub mod wire;

pub use decide::{decide_halfspace, decide_semigenerated, DecideOptions};
pub use diamond::{
    check_type_diamond, find_abelian_hyperplane, DiamondAnswer, DiamondEvidence, DiamondReport,
    ProductQuotientData,
};
pub use quotients::{find_engel_quotients, EngelQuotientCert, SearchOptions, SearchOutcome};
pub use saturate::{saturate_edge, EdgeApprox, RuleId, SaturateOptions, TraceStep};
pub use star::{check_type_star, verify_star_no_witness, StarAnswer, StarReport, StarStep};
pub use verify::{verify_certificate, VerifyError};

use crate::lie::LieError;
use crate::linalg::{vec_is_zero, LinalgError, Subspace};
use crate::rat::Rat;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SemigenError {
    #[error("covector must be nonzero")]
    ZeroCovector,
    #[error("covector has length {got}, expected dim V1 = {expected}")]
    BadCovector { expected: usize, got: usize },
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A horizontal half-space `W = λ⁻¹([0, ∞)) ⊆ V1`, given by a nonzero
/// covector on V1 in the coordinate order of the algebra's V1 basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub lambda: Vec<Rat>,
}

impl HalfSpace {
    pub fn new(lambda: Vec<Rat>) -> Result<Self, SemigenError> {
        if vec_is_zero(&lambda) {
            return Err(SemigenError::ZeroCovector);
        }
        Ok(HalfSpace { lambda })
    }

    /// `∂W = ker λ ∩ V1`, embedded in ambient coordinates.
    pub fn boundary(&self, g: &crate::lie::GradedLieAlgebra) -> Result<Subspace, SemigenError> {
        let d1 = g.v1_dim();
        if self.lambda.len() != d1 {
            return Err(SemigenError::BadCovector {
                expected: d1,
                got: self.lambda.len(),
            });
        }
        let kernel = crate::linalg::nullspace(&[self.lambda.clone()], d1);
        let rows = kernel.into_iter().map(|v| g.embed_v1(&v)).collect();
        Ok(Subspace::from_rows(g.dim(), rows)?)
    }

    /// Value of λ on the V1 part of an ambient vector.
    pub fn pairing(&self, g: &crate::lie::GradedLieAlgebra, v: &[Rat]) -> Rat {
        g.layer_range(1)
            .zip(&self.lambda)
            .map(|(i, l)| &v[i] * l)
            .sum()
    }
}

/// Three-valued verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Semigenerated,
    NotSemigenerated,
    Unknown,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Semigenerated => write!(f, "SEMIGENERATED"),
            Verdict::NotSemigenerated => write!(f, "NOT_SEMIGENERATED"),
            Verdict::Unknown => write!(f, "UNKNOWN"),
        }
    }
}

/// What a decision is about: the whole algebra or one horizontal half-space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subject {
    Algebra,
    HalfSpace(Vec<Rat>),
}

/// How a saturation-based positive conclusion was reached in step ≤ 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaturationConclusion {
    V3InEdge,
    V2InEdge,
}

/// A machine-checkable certificate; every variant is independently
/// re-verifiable by [`verify_certificate`].
#[derive(Clone, Debug)]
pub enum Certificate {
    /// Step ≤ 2 algebras are semigenerated.
    StepTwo,
    /// A saturation trace whose fixpoint contains V3 (or V2) in step ≤ 4.
    Saturation {
        trace: Vec<saturate::TraceStep>,
        edge: Subspace,
        conclusion: SaturationConclusion,
    },
    /// A V1 basis whose diamond terms all lie in the saturated edge bound.
    DiamondBasis {
        basis: Vec<Vec<Rat>>,
        trace: Vec<saturate::TraceStep>,
        edge: Subspace,
    },
    /// A product-quotient construction witnessing type (◊).
    DiamondProductQuotient(ProductQuotientData),
    /// An Engel-type quotient; for a half-space subject the boundary must
    /// map onto the abelian hyperplane of the quotient.
    EngelQuotient(EngelQuotientCert),
    /// The exhaustive Engel-quotient search came back empty (step 3), with
    /// the forced reduction chain recorded.
    EngelSearchEmpty {
        reductions: Vec<Subspace>,
        rejection: String,
    },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::StepTwo => "step_two",
            Certificate::Saturation { .. } => "saturation",
            Certificate::DiamondBasis { .. } => "diamond_basis",
            Certificate::DiamondProductQuotient(_) => "diamond_product_quotient",
            Certificate::EngelQuotient(_) => "engel_quotient",
            Certificate::EngelSearchEmpty { .. } => "engel_search_empty",
        }
    }
}

/// A verdict with its certificate and any advisory notes.
#[derive(Clone, Debug)]
pub struct Decision {
    pub subject: Subject,
    pub verdict: Verdict,
    pub certificate: Option<Certificate>,
    pub notes: Vec<String>,
}
