//! Direct checks of Hölder-type inequalities and of the weak-strong embeddings
//! on concrete function tuples.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{ExponentSystem, Rational};
use crate::norms::{norm, NormResult, OracleConfig, Weight};
use crate::phi::PhiSpec;
use crate::radial::{product_all, RadialStepFunction};

/// Relative slack allowed on the right-hand side before a record fails.
pub const HOLDS_RTOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Strong,
    Weak,
    GenStrong,
    GenWeak,
    Embedding,
}

impl Mode {
    pub fn is_weak(self) -> bool {
        matches!(self, Mode::Weak | Mode::GenWeak)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub function_digests: Vec<String>,
    pub dimension: usize,
    pub target: String,
    pub factors: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub mode: Mode,
    pub lhs: f64,
    pub rhs: f64,
    pub multiplier: f64,
    pub holds: bool,
    /// `multiplier * rhs - lhs`
    pub slack: f64,
    pub inputs: Provenance,
}

impl VerificationRecord {
    fn new(mode: Mode, lhs: f64, rhs: f64, multiplier: f64, inputs: Provenance) -> Self {
        VerificationRecord {
            mode,
            lhs,
            rhs,
            multiplier,
            holds: lhs <= multiplier * rhs + HOLDS_RTOL * rhs,
            slack: multiplier * rhs - lhs,
            inputs,
        }
    }

    /// `lhs / (multiplier * rhs)`, or 0 when both sides vanish.
    pub fn ratio(&self) -> f64 {
        let denom = self.multiplier * self.rhs;
        if denom > 0.0 {
            self.lhs / denom
        } else if self.lhs > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }
}

fn check_tuple(
    functions: &[RadialStepFunction],
    count: usize,
    dim: Option<usize>,
) -> Result<usize> {
    if functions.len() != count {
        return Err(Error::CountMismatch {
            what: "functions".into(),
            expected: count,
            found: functions.len(),
        });
    }
    let d = dim.unwrap_or_else(|| functions.first().map_or(1, RadialStepFunction::dim));
    if let Some(f) = functions.iter().find(|f| f.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: f.dim(),
        });
    }
    Ok(d)
}

fn factor_norms(
    functions: &[RadialStepFunction],
    ps: &[Rational],
    weights: &[Weight],
    weak: bool,
    cfg: &OracleConfig,
) -> Result<Vec<NormResult>> {
    functions
        .par_iter()
        .zip(ps.par_iter())
        .zip(weights.par_iter())
        .map(|((f, &p), w)| norm(f, p, w, weak, cfg))
        .collect()
}

/// `||prod f_i||_{(w)M^p_q} <= mult * prod ||f_i||_{(w)M^{p_i}_{q_i}}` with
/// `mult = 1` (strong) or `m` (weak).
pub fn verify_holder(
    functions: &[RadialStepFunction],
    system: &ExponentSystem,
    weak: bool,
) -> Result<VerificationRecord> {
    system.validate()?;
    let d = check_tuple(functions, system.m(), Some(system.dimension))?;
    let cfg = OracleConfig::default();
    let product = product_all(functions)?;
    let target = Weight::Classical { q: system.target.q };
    let lhs = norm(&product, system.target.p, &target, weak, &cfg)?.value;
    let ps: Vec<Rational> = system.factors.iter().map(|f| f.p).collect();
    let weights: Vec<Weight> = system
        .factors
        .iter()
        .map(|f| Weight::Classical { q: f.q })
        .collect();
    let rhs: f64 = factor_norms(functions, &ps, &weights, weak, &cfg)?
        .iter()
        .map(|n| n.value)
        .product();
    let (mode, multiplier) = if weak {
        (Mode::Weak, system.m() as f64)
    } else {
        (Mode::Strong, 1.0)
    };
    let inputs = Provenance {
        function_digests: functions.iter().map(RadialStepFunction::digest).collect(),
        dimension: d,
        target: format!("p={},q={}", system.target.p, system.target.q),
        factors: system
            .factors
            .iter()
            .map(|f| format!("p={},q={}", f.p, f.q))
            .collect(),
    };
    Ok(VerificationRecord::new(mode, lhs, rhs, multiplier, inputs))
}

/// Generalized version: `||prod f_i||_{(w)M^p_phi} <= mult * prod ||f_i||_{(w)M^{p_i}_{phi_i}}`.
#[allow(clippy::too_many_arguments)]
pub fn verify_holder_generalized(
    functions: &[RadialStepFunction],
    p: Rational,
    factor_ps: &[Rational],
    phi: &PhiSpec,
    factor_phis: &[PhiSpec],
    weak: bool,
    cfg: &OracleConfig,
) -> Result<VerificationRecord> {
    let m = factor_ps.len();
    if factor_phis.len() != m {
        return Err(Error::CountMismatch {
            what: "factor phis".into(),
            expected: m,
            found: factor_phis.len(),
        });
    }
    if m < 2 {
        return Err(Error::validation(
            "factors",
            format!("need at least 2, got {m}"),
        ));
    }
    let d = check_tuple(functions, m, None)?;
    let product = product_all(functions)?;
    let lhs = norm(&product, p, &Weight::Phi(phi.clone()), weak, cfg)?.value;
    let weights: Vec<Weight> = factor_phis.iter().cloned().map(Weight::Phi).collect();
    let rhs: f64 = factor_norms(functions, factor_ps, &weights, weak, cfg)?
        .iter()
        .map(|n| n.value)
        .product();
    let (mode, multiplier) = if weak {
        (Mode::GenWeak, m as f64)
    } else {
        (Mode::GenStrong, 1.0)
    };
    let inputs = Provenance {
        function_digests: functions.iter().map(RadialStepFunction::digest).collect(),
        dimension: d,
        target: format!("p={},phi={}", p, phi.digest()),
        factors: factor_ps
            .iter()
            .zip(factor_phis)
            .map(|(p, phi)| format!("p={},phi={}", p, phi.digest()))
            .collect(),
    };
    Ok(VerificationRecord::new(mode, lhs, rhs, multiplier, inputs))
}

/// Weak norm against strong norm, multiplier 1.
pub fn verify_embedding(
    f: &RadialStepFunction,
    p: Rational,
    weight: &Weight,
    cfg: &OracleConfig,
) -> Result<VerificationRecord> {
    let lhs = norm(f, p, weight, true, cfg)?.value;
    let rhs = norm(f, p, weight, false, cfg)?.value;
    let target = match weight {
        Weight::Classical { q } => format!("p={p},q={q}"),
        Weight::Phi(phi) => format!("p={},phi={}", p, phi.digest()),
    };
    let inputs = Provenance {
        function_digests: vec![f.digest()],
        dimension: f.dim(),
        target,
        factors: Vec::new(),
    };
    Ok(VerificationRecord::new(
        Mode::Embedding,
        lhs,
        rhs,
        1.0,
        inputs,
    ))
}
