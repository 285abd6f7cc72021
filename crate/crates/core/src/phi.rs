//! Weight functions `phi : (0, inf) -> (0, inf)` for generalized Morrey norms
//! and empirical audits of the `G_p` conditions.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exponents::Rational;
use crate::radial::hex_prefix;

/// `phi(r) = r^{-a}` or a log-log interpolated table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPhi", into = "RawPhi")]
pub enum PhiSpec {
    Power { a: Rational },
    Table { knots: Vec<(f64, f64)> },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum RawPhi {
    Power { a: Rational },
    Table { knots: Vec<(f64, f64)> },
}

impl TryFrom<RawPhi> for PhiSpec {
    type Error = Error;
    fn try_from(raw: RawPhi) -> Result<Self> {
        match raw {
            RawPhi::Power { a } => Ok(PhiSpec::Power { a }),
            RawPhi::Table { knots } => PhiSpec::table(knots),
        }
    }
}

impl From<PhiSpec> for RawPhi {
    fn from(spec: PhiSpec) -> Self {
        match spec {
            PhiSpec::Power { a } => RawPhi::Power { a },
            PhiSpec::Table { knots } => RawPhi::Table { knots },
        }
    }
}

impl PhiSpec {
    pub fn power(a: Rational) -> Self {
        PhiSpec::Power { a }
    }

    /// `phi(r) = r^{-d/q}`, the weight of the classical Morrey space.
    pub fn classical(d: usize, q: Rational) -> Result<Self> {
        Ok(PhiSpec::Power {
            a: Rational::integer(d as i128) * q.recip()?,
        })
    }

    pub fn table(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::validation("knots", "empty table"));
        }
        for (i, &(r, v)) in knots.iter().enumerate() {
            if !(r > 0.0 && r.is_finite() && v > 0.0 && v.is_finite()) {
                return Err(Error::validation(
                    format!("knots[{i}]"),
                    format!("({r}, {v}) must be positive and finite"),
                ));
            }
        }
        if let Some(i) = knots.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(Error::validation(
                format!("knots[{}]", i + 1),
                "radii must be strictly increasing",
            ));
        }
        Ok(PhiSpec::Table { knots })
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            PhiSpec::Power { a } => (-a.to_f64() * r.ln()).exp(),
            PhiSpec::Table { knots } => table_eval(knots, r),
        }
    }

    /// Local decay exponents `a` (with `phi ~ r^{-a}`) over every log-linear
    /// piece, tails included.
    pub fn local_exponents(&self) -> Vec<f64> {
        match self {
            PhiSpec::Power { a } => vec![a.to_f64()],
            PhiSpec::Table { knots } => {
                if knots.len() == 1 {
                    vec![0.0]
                } else {
                    knots.windows(2).map(|w| -log_slope(w[0], w[1])).collect()
                }
            }
        }
    }

    /// Decay exponents of the left and right power-law tails.
    pub fn tail_exponents(&self) -> (f64, f64) {
        let e = self.local_exponents();
        (e[0], e[e.len() - 1])
    }

    pub fn knot_radii(&self) -> Vec<f64> {
        match self {
            PhiSpec::Power { .. } => Vec::new(),
            PhiSpec::Table { knots } => knots.iter().map(|k| k.0).collect(),
        }
    }

    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("phi serializes");
        hex_prefix(&Sha256::digest(&json))
    }
}

fn log_slope(a: (f64, f64), b: (f64, f64)) -> f64 {
    (b.1.ln() - a.1.ln()) / (b.0.ln() - a.0.ln())
}

fn table_eval(knots: &[(f64, f64)], r: f64) -> f64 {
    if knots.len() == 1 {
        return knots[0].1;
    }
    let idx = knots.partition_point(|k| k.0 <= r);
    // segment [i, i+1] used for interpolation or extrapolation
    let i = idx.saturating_sub(1).min(knots.len() - 2);
    let (k0, k1) = (knots[i], knots[i + 1]);
    let slope = log_slope(k0, k1);
    (k0.1.ln() + slope * (r.ln() - k0.0.ln())).exp()
}

/// Pointwise product of weights.
pub fn product_phi(specs: &[PhiSpec]) -> Result<PhiSpec> {
    if specs.is_empty() {
        return Err(Error::validation("phi list", "empty"));
    }
    let powers: Option<Vec<Rational>> = specs
        .iter()
        .map(|s| match s {
            PhiSpec::Power { a } => Some(*a),
            PhiSpec::Table { .. } => None,
        })
        .collect();
    if let Some(exps) = powers {
        return Ok(PhiSpec::Power {
            a: exps.into_iter().sum(),
        });
    }
    let mut radii: Vec<f64> = specs.iter().flat_map(PhiSpec::knot_radii).collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    if radii.len() == 1 {
        // a second knot pins the tail slope of the power factors
        radii.push(2.0 * radii[0]);
    }
    let knots = radii
        .into_iter()
        .map(|r| (r, specs.iter().map(|s| s.eval(r)).product()))
        .collect();
    PhiSpec::table(knots)
}

/// Sample radii for the empirical audits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditGrid {
    pub points: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub count: usize,
    pub min: f64,
    pub max: f64,
}

impl AuditGrid {
    pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && n >= 2) {
            return Err(Error::validation(
                "grid",
                format!("need 0 < lo < hi and n >= 2, got [{lo}, {hi}] with n = {n}"),
            ));
        }
        let (l0, l1) = (lo.ln(), hi.ln());
        let points = (0..n)
            .map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp())
            .collect();
        Ok(AuditGrid { points })
    }

    /// 512 log-spaced points over `[1e-4, 1e4]`.
    pub fn standard() -> Self {
        AuditGrid::log_spaced(1e-4, 1e4, 512).expect("valid default grid")
    }

    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::validation("grid", "empty grid"));
        }
        if points.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(Error::validation("grid", "radii must be positive"));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::validation(
                "grid",
                "radii must be strictly increasing",
            ));
        }
        Ok(AuditGrid { points })
    }

    pub fn summary(&self) -> GridSummary {
        GridSummary {
            count: self.points.len(),
            min: self.points[0],
            max: self.points[self.points.len() - 1],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GpReport {
    pub p: Rational,
    pub d: usize,
    /// `None` marks failure of the condition.
    pub almost_decreasing_constant: Option<f64>,
    pub almost_increasing_constant: Option<f64>,
    pub doubling_constant: f64,
    pub member: bool,
    pub analytic: bool,
    pub grid: GridSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsReport {
    pub p: Rational,
    pub eps: f64,
    pub almost_decreasing_constant: Option<f64>,
    pub holds: bool,
    pub analytic: bool,
    pub grid: GridSummary,
}

/// `max_{r < s} h(s) / h(r)`, at least 1.
fn rise_constant(values: &[f64]) -> f64 {
    let mut lowest = f64::INFINITY;
    let mut worst: f64 = 1.0;
    for &v in values {
        worst = worst.max(v / lowest);
        lowest = lowest.min(v);
    }
    worst
}

fn doubling_on_grid(spec: &PhiSpec, grid: &AuditGrid) -> f64 {
    let pts = &grid.points;
    let vals: Vec<f64> = pts.iter().map(|&r| spec.eval(r)).collect();
    let mut c: f64 = 1.0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[j] > 2.0 * pts[i] {
                break;
            }
            c = c.max(vals[j] / vals[i]).max(vals[i] / vals[j]);
        }
        let twice = spec.eval(2.0 * pts[i]);
        c = c.max(twice / vals[i]).max(vals[i] / twice);
    }
    c
}

/// Grid points plus the knots: extremes of a log-linear interpolant sit at
/// knots.
fn audit_points(spec: &PhiSpec, grid: &AuditGrid) -> Vec<f64> {
    let mut pts = grid.points.clone();
    pts.extend(spec.knot_radii());
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Absolute slack on tail exponents of tabulated weights.
const TAIL_TOL: f64 = 1e-12;

pub fn check_g_p(spec: &PhiSpec, p: Rational, d: usize, grid: &AuditGrid) -> Result<GpReport> {
    if grid.points.is_empty() {
        return Err(Error::validation("grid", "empty grid"));
    }
    if p < Rational::one() {
        return Err(Error::validation("p", format!("{p} < 1")));
    }
    let dp = d as f64 / p.to_f64();
    let (dec, inc, doubling, analytic) = match spec {
        PhiSpec::Power { a } => {
            let dp_exact = Rational::integer(d as i128) / p;
            let dec = (!a.is_negative()).then_some(1.0);
            let inc = (*a <= dp_exact).then_some(1.0);
            (dec, inc, 2f64.powf(a.to_f64().abs()), true)
        }
        PhiSpec::Table { .. } => {
            let (left, right) = spec.tail_exponents();
            let pts = audit_points(spec, grid);
            let phi: Vec<f64> = pts.iter().map(|&r| spec.eval(r)).collect();
            // tail exponents come from logs of knot values; allow rounding
            let dec = (left >= -TAIL_TOL && right >= -TAIL_TOL).then(|| rise_constant(&phi));
            // r^{d/p} phi(r) almost increasing <=> its reciprocal never rises much
            let recip: Vec<f64> = pts
                .iter()
                .zip(&phi)
                .map(|(&r, &v)| 1.0 / (r.powf(dp) * v))
                .collect();
            let inc =
                (dp - left >= -TAIL_TOL && dp - right >= -TAIL_TOL).then(|| rise_constant(&recip));
            (dec, inc, doubling_on_grid(spec, grid), false)
        }
    };
    Ok(GpReport {
        p,
        d,
        almost_decreasing_constant: dec,
        almost_increasing_constant: inc,
        doubling_constant: doubling,
        member: dec.is_some() && inc.is_some(),
        analytic,
        grid: grid.summary(),
    })
}

/// Audits that `r^{eps/p} phi(r)` is almost decreasing.
pub fn check_eps_almost_decreasing(
    spec: &PhiSpec,
    p: Rational,
    eps: f64,
    grid: &AuditGrid,
) -> Result<EpsReport> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::validation("eps", format!("{eps} must be positive")));
    }
    if grid.points.is_empty() {
        return Err(Error::validation("grid", "empty grid"));
    }
    let shift = eps / p.to_f64();
    let (constant, analytic) = match spec {
        PhiSpec::Power { a } => ((shift <= a.to_f64()).then_some(1.0), true),
        PhiSpec::Table { .. } => {
            let (left, right) = spec.tail_exponents();
            let h: Vec<f64> = audit_points(spec, grid)
                .iter()
                .map(|&r| r.powf(shift) * spec.eval(r))
                .collect();
            (
                (left - shift >= -TAIL_TOL && right - shift >= -TAIL_TOL)
                    .then(|| rise_constant(&h)),
                false,
            )
        }
    };
    Ok(EpsReport {
        p,
        eps,
        almost_decreasing_constant: constant,
        holds: constant.is_some(),
        analytic,
        grid: grid.summary(),
    })
}
