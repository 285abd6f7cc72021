//! Necessity demonstrations: extremal families whose Hölder ratios grow
//! without bound once an exponent or weight condition fails.
//!
//! - `q_scaling_series`: indicators of `B(0, R)` across scales. The ratio is
//!   exactly `|B(0,R)|^{1/q - sum 1/q_i}`.
//! - `p_divergence_series` / `weak_p_divergence_series`: the thinning-annuli
//!   functions `g_{eps,K}` with `K` growing; the ratio grows like
//!   `K^{eps (sum 1/p_i - 1/p)}`.
//! - `phi_necessity_series`: indicators against generalized weights, tracking
//!   `prod phi_i(R) / phi(R)`.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{check_holder_exponents, ExponentSystem, Rational};
use crate::norms::{morrey_norm, norm, weak_morrey_norm, OracleConfig, Weight};
use crate::phi::PhiSpec;
use crate::radial::{RadialStepFunction, Shell};

/// Ratio spread at which a series counts as unbounded.
pub const SPREAD_THRESHOLD: f64 = 10.0;

/// `spread >= SPREAD_THRESHOLD`, forgiving rounding: a ratio climbing from 1
/// to exactly 10 must not hinge on the last bit.
fn wide(spread: f64) -> bool {
    spread >= SPREAD_THRESHOLD * (1.0 - 1e-9)
}

/// Largest `K` accepted by the `g_{eps,K}` series.
pub const MAX_K: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleParams {
    pub epsilon: f64,
    pub k: u64,
    pub dimension: usize,
}

impl CounterexampleParams {
    /// Checks `0 < eps < min_i d p_i / q_i` for `system`.
    pub fn validate(&self, system: &ExponentSystem) -> Result<()> {
        let bound = epsilon_bound(system).to_f64();
        if !(self.epsilon > 0.0 && self.epsilon < bound) {
            return Err(Error::EpsilonOutOfRange {
                eps: self.epsilon,
                bound,
            });
        }
        if self.k == 0 || self.k > MAX_K {
            return Err(Error::validation(
                "K",
                format!("{} outside [1, {MAX_K}]", self.k),
            ));
        }
        Ok(())
    }
}

/// `chi_{|x| < 1} + sum_{j=1}^K chi_{j <= |x| <= j + j^{-eps}}`.
pub fn make_g_eps_k(eps: f64, k: u64, d: usize) -> Result<RadialStepFunction> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::validation("eps", format!("{eps} must be positive")));
    }
    if k == 0 {
        return Err(Error::validation("K", "must be at least 1"));
    }
    let mut shells = Vec::with_capacity(k as usize + 1);
    shells.push(Shell::new(0.0, 1.0, 1.0));
    for j in 1..=k {
        let jf = j as f64;
        shells.push(Shell::closed(jf, jf + jf.powf(-eps), 1.0));
    }
    RadialStepFunction::new(d, shells)
}

/// `min_i d p_i / q_i`, the exclusive upper bound for `eps`.
pub fn epsilon_bound(system: &ExponentSystem) -> Rational {
    let d = Rational::integer(system.dimension as i128);
    system
        .factors
        .iter()
        .map(|f| d * f.p / f.q)
        .min()
        .expect("system has factors")
}

/// Midpoint of the admissible range `(0, min_i d p_i / q_i)`.
pub fn choose_epsilon(system: &ExponentSystem) -> f64 {
    (epsilon_bound(system) / Rational::integer(2)).to_f64()
}

/// `sum_{j<=K} [(j + j^{-eps})^d - j^d] / (K + K^{-eps})^{d - eps}`, which stays
/// bounded away from zero as `K` grows.
pub fn shell_sum_lower_bound_ratio(eps: f64, k: u64, d: usize) -> f64 {
    let di = d as i32;
    let sum: f64 = (1..=k)
        .map(|j| {
            let jf = j as f64;
            (jf + jf.powf(-eps)).powi(di) - jf.powi(di)
        })
        .sum();
    let kf = k as f64;
    sum / (kf + kf.powf(-eps)).powf(d as f64 - eps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Diverges,
    Bounded,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub param: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// `prod phi_i(R) / phi(R)` for weight series.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub rows: Vec<SeriesRow>,
    pub fitted_slope: Option<f64>,
    pub predicted_slope: f64,
    pub spread: f64,
    pub verdict: Verdict,
    /// `eps` of the `g_{eps,K}` family; absent for radius series.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
}

impl DivergenceReport {
    /// Writes `param,lhs,rhs,ratio` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["param", "lhs", "rhs", "ratio"])?;
        for row in &self.rows {
            w.write_record([
                row.param.to_string(),
                row.lhs.to_string(),
                row.rhs.to_string(),
                row.ratio.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

/// Least-squares slope of `ln y` against `ln x`; `None` without spread in `x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 1e-300 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

/// Slope over the upper half of the rows (by parameter).
fn tail_slope(rows: &[SeriesRow], value: impl Fn(&SeriesRow) -> f64) -> Option<f64> {
    let tail = &rows[rows.len() / 2..];
    let pts: Vec<(f64, f64)> = tail.iter().map(|r| (r.param, value(r))).collect();
    log_log_slope(&pts)
}

fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

/// Tail slope above which a steadily growing `K`-series counts as unbounded
/// even without a spread of `SPREAD_THRESHOLD`. Spreads of that size need
/// `K` ranges far beyond `MAX_K` when the predicted slope is small (slope
/// 1/8 needs a factor 10^8 in `K`); series whose conditions hold fit slopes
/// at rounding level.
pub const MIN_GROWTH_SLOPE: f64 = 1e-3;

#[derive(Clone, Copy)]
enum Divergence {
    /// Unbounded only as the parameter grows; sustained growth suffices.
    Upward,
    /// Unbounded at either end of the parameter range.
    EitherEnd,
}

fn verdict(rows: &[SeriesRow], fitted: Option<f64>, spread: f64, kind: Divergence) -> Verdict {
    let Some(slope) = fitted else {
        return Verdict::Inconclusive;
    };
    let diverges = match kind {
        Divergence::Upward => {
            let tail = &rows[rows.len() / 2..];
            let growing = tail.windows(2).all(|w| w[1].ratio >= w[0].ratio);
            (wide(spread) && slope > 0.0) || (slope >= MIN_GROWTH_SLOPE && growing)
        }
        Divergence::EitherEnd => wide(spread) && slope.abs() > 1e-9,
    };
    if diverges {
        Verdict::Diverges
    } else {
        Verdict::Bounded
    }
}

fn finish(rows: Vec<SeriesRow>, predicted_slope: f64, kind: Divergence) -> DivergenceReport {
    let fitted_slope = tail_slope(&rows, |r| r.ratio);
    let spread = spread(rows.iter().map(|r| r.ratio));
    DivergenceReport {
        verdict: verdict(&rows, fitted_slope, spread, kind),
        rows,
        fitted_slope,
        predicted_slope,
        spread,
        epsilon: None,
    }
}

fn sorted_params(values: &[f64], name: &str) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::validation(name, "empty list"));
    }
    if let Some(v) = values.iter().find(|&&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::validation(name, format!("{v} is not positive")));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

fn row(param: f64, lhs: f64, rhs: f64) -> SeriesRow {
    SeriesRow {
        param,
        lhs,
        rhs,
        ratio: lhs / rhs,
        analytic: None,
    }
}

/// Indicator balls across scales; ratio `= |B(0,R)|^{1/q - sum 1/q_i}`.
pub fn q_scaling_series(system: &ExponentSystem, radii: &[f64]) -> Result<DivergenceReport> {
    system.validate()?;
    let radii = sorted_params(radii, "radii")?;
    let rows = radii
        .par_iter()
        .map(|&r| {
            let chi = RadialStepFunction::indicator_ball(r, system.dimension)?;
            let lhs = morrey_norm(&chi, system.target.p, system.target.q)?.value;
            let rhs = system
                .factors
                .iter()
                .map(|f| morrey_norm(&chi, f.p, f.q).map(|n| n.value))
                .product::<Result<f64>>()?;
            Ok(row(r, lhs, rhs))
        })
        .collect::<Result<Vec<_>>>()?;
    let predicted =
        system.dimension as f64 * (system.target.q.recip()? - system.sum_inv_q()).to_f64();
    Ok(finish(rows, predicted, Divergence::EitherEnd))
}

fn g_series(
    system: &ExponentSystem,
    k_values: &[u64],
    eps: Option<f64>,
    weak: bool,
) -> Result<DivergenceReport> {
    let report = check_holder_exponents(system)?;
    if !report.q_condition_holds {
        return Err(Error::QConditionViolated {
            slack: report.q_slack.to_string(),
        });
    }
    let eps = eps.unwrap_or_else(|| choose_epsilon(system));
    let mut ks = k_values.to_vec();
    if ks.is_empty() {
        return Err(Error::validation("K values", "empty list"));
    }
    ks.sort_unstable();
    for &k in &ks {
        CounterexampleParams {
            epsilon: eps,
            k,
            dimension: system.dimension,
        }
        .validate(system)?;
    }
    let m = system.m() as f64;
    let rows = ks
        .par_iter()
        .map(|&k| {
            // g is {0,1}-valued, so the product of m copies is g itself
            let g = make_g_eps_k(eps, k, system.dimension)?;
            let eval = |p, q| {
                if weak {
                    weak_morrey_norm(&g, p, q)
                } else {
                    morrey_norm(&g, p, q)
                }
                .map(|n| n.value)
            };
            let lhs = eval(system.target.p, system.target.q)?;
            let mut rhs = system
                .factors
                .iter()
                .map(|f| eval(f.p, f.q))
                .product::<Result<f64>>()?;
            if weak {
                rhs *= m;
            }
            Ok(row(k as f64, lhs, rhs))
        })
        .collect::<Result<Vec<_>>>()?;
    let predicted = eps * (report.sum_inv_p - system.target.p.recip()?).to_f64();
    Ok(DivergenceReport {
        epsilon: Some(eps),
        ..finish(rows, predicted, Divergence::Upward)
    })
}

/// `g_{eps,K}` in every factor with strong norms.
pub fn p_divergence_series(
    system: &ExponentSystem,
    k_values: &[u64],
    eps: Option<f64>,
) -> Result<DivergenceReport> {
    g_series(system, k_values, eps, false)
}

/// Weak-norm version with right-hand side multiplied by `m`.
pub fn weak_p_divergence_series(
    system: &ExponentSystem,
    k_values: &[u64],
    eps: Option<f64>,
) -> Result<DivergenceReport> {
    g_series(system, k_values, eps, true)
}

/// Indicator balls against weights `phi`, `phi_i`. The verdict follows the
/// analytic ratio `prod phi_i(R) / phi(R)`; the norm ratio is reported
/// alongside.
#[allow(clippy::too_many_arguments)]
pub fn phi_necessity_series(
    p: Rational,
    factor_ps: &[Rational],
    phi: &PhiSpec,
    factor_phis: &[PhiSpec],
    dimension: usize,
    radii: &[f64],
    weak: bool,
    cfg: &OracleConfig,
) -> Result<DivergenceReport> {
    if factor_ps.len() != factor_phis.len() {
        return Err(Error::CountMismatch {
            what: "factor phis".into(),
            expected: factor_ps.len(),
            found: factor_phis.len(),
        });
    }
    if factor_ps.is_empty() {
        return Err(Error::validation("factors", "empty list"));
    }
    let radii = sorted_params(radii, "radii")?;
    let m = factor_ps.len() as f64;
    let target = Weight::Phi(phi.clone());
    let factor_weights: Vec<Weight> = factor_phis.iter().cloned().map(Weight::Phi).collect();
    let rows = radii
        .par_iter()
        .map(|&r| {
            let chi = RadialStepFunction::indicator_ball(r, dimension)?;
            let lhs = norm(&chi, p, &target, weak, cfg)?.value;
            let mut rhs = factor_ps
                .iter()
                .zip(&factor_weights)
                .map(|(&pi, w)| norm(&chi, pi, w, weak, cfg).map(|n| n.value))
                .product::<Result<f64>>()?;
            if weak {
                rhs *= m;
            }
            let analytic = factor_phis.iter().map(|s| s.eval(r)).product::<f64>() / phi.eval(r);
            Ok(SeriesRow {
                analytic: Some(analytic),
                ..row(r, lhs, rhs)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fitted_slope = tail_slope(&rows, |r| r.ratio);
    let predicted_slope = tail_slope(&rows, |r| r.analytic.unwrap_or(f64::NAN)).unwrap_or(0.0);
    let analytic_spread = spread(rows.iter().filter_map(|r| r.analytic));
    let verdict = if radii.first() == radii.last() {
        Verdict::Inconclusive
    } else if wide(analytic_spread) {
        Verdict::Diverges
    } else {
        Verdict::Bounded
    };
    Ok(DivergenceReport {
        spread: spread(rows.iter().map(|r| r.ratio)),
        rows,
        fitted_slope,
        predicted_slope,
        verdict,
        epsilon: None,
    })
}

/// `{1, 3} x 10^j` values from 100 (or 1 when `k_max < 100`) up to `k_max`,
/// with `k_max` itself appended.
pub fn default_k_values(k_max: u64) -> Vec<u64> {
    let start = if k_max >= 100 { 100 } else { 1 };
    let mut out = Vec::new();
    let mut decade = start;
    while decade <= k_max {
        for mult in [1, 3] {
            let k = decade * mult;
            if k <= k_max {
                out.push(k);
            }
        }
        decade *= 10;
    }
    if out.last() != Some(&k_max) {
        out.push(k_max);
    }
    out
}
