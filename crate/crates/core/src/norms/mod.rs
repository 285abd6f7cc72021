//! Morrey, weak Morrey, generalized Morrey and generalized weak Morrey norms
//! of radial step functions.
//!
//! All exact evaluators take the supremum over balls centered at the origin.
//! For the radial class this is the contract of the module; `audit` checks it
//! against off-center balls.

mod audit;
pub(crate) mod exact;
mod oracle;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{ExponentPair, Rational};
use crate::optimize::golden_section_max;
use crate::phi::PhiSpec;
use crate::radial::{unit_ball_volume, RadialStepFunction};

pub use audit::{audit_centered_supremum, AuditReport, AuditSpec};
pub use oracle::oracle_norm;

use exact::{sup_weighted_mass, MassProfile, Supremum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactCandidates,
    GridOracle,
    GridRefined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub value: f64,
    pub argmax_radius: f64,
    pub argmax_gamma: Option<f64>,
    pub method: Method,
    pub tolerance: f64,
}

impl NormResult {
    fn zero(method: Method) -> Self {
        NormResult {
            value: 0.0,
            argmax_radius: 1.0,
            argmax_gamma: None,
            method,
            tolerance: 0.0,
        }
    }
}

/// Radius weight of a norm: classical `|B|^{1/q}` or a generalized `1/phi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weight {
    Classical { q: Rational },
    Phi(PhiSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Log-spaced radii over `[R_min/10, 10 R_max]`.
    pub radius_grid_size: usize,
    /// Extra points per bracket around near-maximal grid values; 0 disables.
    pub refine_points: usize,
    pub seed: u64,
    pub samples: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            radius_grid_size: 4096,
            refine_points: 64,
            seed: 0,
            samples: 100_000,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.radius_grid_size < 64 {
            return Err(Error::validation(
                "radius_grid_size",
                format!("{} < 64", self.radius_grid_size),
            ));
        }
        if self.refine_points == 1 {
            return Err(Error::validation(
                "refine_points",
                "must be 0 or at least 2",
            ));
        }
        Ok(())
    }
}

/// Relative tolerance of the golden-section refinement for tabulated weights.
pub const REFINE_RTOL: f64 = 1e-10;

fn check_classical(p: Rational, q: Rational) -> Result<()> {
    ExponentPair::new(p, q).map(|_| ())
}

fn check_p(p: Rational) -> Result<()> {
    if p < Rational::one() {
        return Err(Error::validation("p", format!("{p} < 1")));
    }
    Ok(())
}

fn from_sup(sup: Option<Supremum>, method: Method) -> NormResult {
    match sup {
        None => NormResult::zero(method),
        Some(s) => NormResult {
            value: s.value,
            argmax_radius: s.radius,
            argmax_gamma: None,
            method,
            tolerance: 0.0,
        },
    }
}

/// `sup_r |B(0,r)|^{1/q - 1/p} (int_{B(0,r)} |f|^p)^{1/p}`, exactly.
pub fn morrey_norm(f: &RadialStepFunction, p: Rational, q: Rational) -> Result<NormResult> {
    check_classical(p, q)?;
    let pf = p.to_f64();
    // objective^p = (v_d t)^alpha I(t),  alpha = p/q - 1
    let alpha = (p / q).to_f64() - 1.0;
    let log_c = alpha * unit_ball_volume(f.dim()).ln();
    let sup = sup_weighted_mass(&MassProfile::new(f, pf), alpha, log_c, pf)?;
    Ok(from_sup(sup, Method::ExactCandidates))
}

/// Maximum over value levels `v` of `v * ||chi_{f >= v}||`, the threshold
/// supremum approached from below each level.
fn over_levels<F>(f: &RadialStepFunction, mut strong: F) -> Result<NormResult>
where
    F: FnMut(&RadialStepFunction) -> Result<NormResult>,
{
    let mut best: Option<NormResult> = None;
    let mut method = Method::ExactCandidates;
    for level in f.levels() {
        let mut r = strong(&f.superlevel_indicator(level))?;
        method = r.method;
        r.value *= level;
        r.argmax_gamma = Some(level);
        if best.as_ref().is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    }
    Ok(best.unwrap_or_else(|| NormResult::zero(method)))
}

/// `sup_{r, gamma} |B(0,r)|^{1/q - 1/p} gamma |{f > gamma} cap B(0,r)|^{1/p}`.
pub fn weak_morrey_norm(f: &RadialStepFunction, p: Rational, q: Rational) -> Result<NormResult> {
    check_classical(p, q)?;
    over_levels(f, |chi| morrey_norm(chi, p, q))
}

/// `sup_r (1/phi(r)) (|B(0,r)|^{-1} int_{B(0,r)} |f|^p)^{1/p}`.
///
/// Power weights use the exact candidate scan; tabulated weights a log grid
/// with golden-section refinement.
pub fn generalized_morrey_norm(
    f: &RadialStepFunction,
    p: Rational,
    phi: &PhiSpec,
    cfg: &OracleConfig,
) -> Result<NormResult> {
    check_p(p)?;
    let pf = p.to_f64();
    match phi {
        PhiSpec::Power { a } => {
            // objective^p = r^{a p} I / (v_d r^d) = v_d^{-1} t^{a p / d - 1} I
            let alpha = (*a * p / Rational::integer(f.dim() as i128)).to_f64() - 1.0;
            let log_c = -unit_ball_volume(f.dim()).ln();
            let sup = sup_weighted_mass(&MassProfile::new(f, pf), alpha, log_c, pf)?;
            Ok(from_sup(sup, Method::ExactCandidates))
        }
        PhiSpec::Table { .. } => {
            cfg.validate()?;
            table_weight_sup(f, pf, phi, cfg)
        }
    }
}

pub fn generalized_weak_morrey_norm(
    f: &RadialStepFunction,
    p: Rational,
    phi: &PhiSpec,
    cfg: &OracleConfig,
) -> Result<NormResult> {
    check_p(p)?;
    over_levels(f, |chi| generalized_morrey_norm(chi, p, phi, cfg))
}

/// Strong or weak norm for either weight kind.
pub fn norm(
    f: &RadialStepFunction,
    p: Rational,
    weight: &Weight,
    weak: bool,
    cfg: &OracleConfig,
) -> Result<NormResult> {
    match (weight, weak) {
        (Weight::Classical { q }, false) => morrey_norm(f, p, *q),
        (Weight::Classical { q }, true) => weak_morrey_norm(f, p, *q),
        (Weight::Phi(phi), false) => generalized_morrey_norm(f, p, phi, cfg),
        (Weight::Phi(phi), true) => generalized_weak_morrey_norm(f, p, phi, cfg),
    }
}

/// Log-spaced sample radii over `[lo, hi)`: `lo * rho^i`, `i < n`. Doubling `n`
/// yields a superset.
pub(crate) fn log_grid(lo: f64, hi: f64, n: usize) -> (Vec<f64>, f64) {
    let step = (hi / lo).ln() / n as f64;
    let pts = (0..n).map(|i| lo * (step * i as f64).exp()).collect();
    (pts, step)
}

pub(crate) fn radius_window(f: &RadialStepFunction) -> (f64, f64) {
    let lo = f.min_positive_radius().expect("nonzero function") / 10.0;
    (lo, 10.0 * f.max_radius())
}

fn table_weight_sup(
    f: &RadialStepFunction,
    p: f64,
    phi: &PhiSpec,
    cfg: &OracleConfig,
) -> Result<NormResult> {
    if f.is_zero() {
        return Ok(NormResult::zero(Method::GridRefined));
    }
    let d = f.dim() as f64;
    let (left, right) = phi.tail_exponents();
    if f.shells()[0].inner == 0.0 && left < 0.0 {
        return Err(Error::Unbounded(format!(
            "1/phi grows like r^{left} as r -> 0"
        )));
    }
    if right > d / p {
        return Err(Error::Unbounded(format!(
            "objective grows like r^{} as r -> inf",
            right - d / p
        )));
    }
    let profile = MassProfile::new(f, p);
    let vd = unit_ball_volume(f.dim());
    let objective = |r: f64| {
        let mass = profile.mass_at(r);
        if mass <= 0.0 {
            return 0.0;
        }
        (mass / (vd * r.powf(d))).powf(1.0 / p) / phi.eval(r)
    };

    let (lo, hi) = radius_window(f);
    let (mut radii, _) = log_grid(lo, hi, cfg.radius_grid_size);
    radii.extend(f.breakpoints().into_iter().filter(|&r| r > 0.0));
    radii.extend(phi.knot_radii().into_iter().filter(|&r| r > lo && r < hi));
    radii.push(hi);
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let values: Vec<f64> = radii.iter().map(|&r| objective(r)).collect();

    let mut best = (radii[0], values[0]);
    for (&r, &v) in radii.iter().zip(&values) {
        if v > best.1 {
            best = (r, v);
        }
    }
    let n = radii.len();
    for i in 0..n {
        let left_ok = i == 0 || values[i] >= values[i - 1];
        let right_ok = i + 1 == n || values[i] >= values[i + 1];
        if !(left_ok && right_ok) || values[i] <= 0.0 {
            continue;
        }
        let a = radii[i.saturating_sub(1)].ln();
        let b = radii[(i + 1).min(n - 1)].ln();
        if b <= a {
            continue;
        }
        let (u, v) = golden_section_max(|u| objective(u.exp()), a, b, REFINE_RTOL);
        if v > best.1 {
            best = (u.exp(), v);
        }
    }
    Ok(NormResult {
        value: best.1,
        argmax_radius: best.0,
        argmax_gamma: None,
        method: Method::GridRefined,
        tolerance: REFINE_RTOL,
    })
}
