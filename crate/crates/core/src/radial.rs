//! Radially symmetric step functions on `R^d` and their exact geometry.
//!
//! A function is a finite list of concentric shells `{x : inner <= |x| < outer}`
//! carrying constant nonnegative values. Every integral the norms need reduces
//! to sums of `v_d * (outer^d - inner^d)` terms.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exponents::Rational;

/// Relative tolerance under which two shell endpoints are considered touching.
pub const TOUCH_RTOL: f64 = 1e-12;

/// Volume of the unit ball in `R^d`, `pi^{d/2} / Gamma(d/2 + 1)`.
pub fn unit_ball_volume(d: usize) -> f64 {
    // v_0 = 1, v_1 = 2, v_d = v_{d-2} * 2 pi / d
    let (mut v, start) = if d.is_multiple_of(2) {
        (1.0, 2)
    } else {
        (2.0, 3)
    };
    let mut k = start;
    while k <= d {
        v *= 2.0 * PI / k as f64;
        k += 2;
    }
    v
}

/// Lebesgue measure of the centered ball of radius `r` in `R^d`.
pub fn ball_volume(d: usize, r: f64) -> f64 {
    unit_ball_volume(d) * r.powi(d as i32)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Shell {
    pub inner: f64,
    pub outer: f64,
    pub value: f64,
    /// Endpoint flags are kept for faithful construction only; no measure
    /// computation reads them.
    #[serde(default = "default_true")]
    pub inner_closed: bool,
    #[serde(default)]
    pub outer_closed: bool,
}

fn default_true() -> bool {
    true
}

impl Shell {
    /// Half-open shell `[inner, outer)`.
    pub fn new(inner: f64, outer: f64, value: f64) -> Self {
        Shell {
            inner,
            outer,
            value,
            inner_closed: true,
            outer_closed: false,
        }
    }

    pub fn closed(inner: f64, outer: f64, value: f64) -> Self {
        Shell {
            outer_closed: true,
            ..Shell::new(inner, outer, value)
        }
    }

    fn validate(&self, index: usize) -> Result<()> {
        let field = format!("shells[{index}]");
        if !(self.inner.is_finite() && self.outer.is_finite() && self.value.is_finite()) {
            return Err(Error::validation(field, "non-finite entry"));
        }
        if self.inner < 0.0 {
            return Err(Error::validation(
                field,
                format!("inner = {} < 0", self.inner),
            ));
        }
        if self.inner >= self.outer {
            return Err(Error::validation(
                field,
                format!("inner = {} >= outer = {}", self.inner, self.outer),
            ));
        }
        if self.value < 0.0 {
            return Err(Error::validation(
                field,
                format!("value = {} < 0", self.value),
            ));
        }
        Ok(())
    }

    /// `|{x in B(0, r) : inner <= |x| < outer}|`
    pub fn volume_within(&self, d: usize, r: f64) -> f64 {
        let hi = self.outer.min(r);
        let lo = self.inner.min(r);
        if hi <= lo {
            return 0.0;
        }
        unit_ball_volume(d) * (hi.powi(d as i32) - lo.powi(d as i32))
    }
}

fn touching(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOUCH_RTOL * a.abs().max(b.abs()).max(1.0)
}

/// A nonnegative radial step function with bounded support, kept in canonical
/// form: shells sorted, pairwise disjoint, no zero values, touching equal-valued
/// neighbours merged.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFunction", into = "RawFunction")]
pub struct RadialStepFunction {
    dim: usize,
    shells: Vec<Shell>,
}

#[derive(Serialize, Deserialize)]
struct RawFunction {
    dim: usize,
    shells: Vec<Shell>,
}

impl TryFrom<RawFunction> for RadialStepFunction {
    type Error = Error;
    fn try_from(raw: RawFunction) -> Result<Self> {
        RadialStepFunction::new(raw.dim, raw.shells)
    }
}

impl From<RadialStepFunction> for RawFunction {
    fn from(f: RadialStepFunction) -> Self {
        RawFunction {
            dim: f.dim,
            shells: f.shells,
        }
    }
}

impl RadialStepFunction {
    pub fn new(dim: usize, shells: Vec<Shell>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::validation("dim", "must be positive"));
        }
        for (i, s) in shells.iter().enumerate() {
            s.validate(i)?;
        }
        let mut sorted = shells;
        sorted.sort_by(|a, b| {
            a.inner
                .total_cmp(&b.inner)
                .then(a.outer.total_cmp(&b.outer))
        });
        for w in sorted.windows(2) {
            if w[1].inner < w[0].outer && !touching(w[1].inner, w[0].outer) {
                return Err(Error::validation(
                    "shells",
                    format!(
                        "[{}, {}) overlaps [{}, {})",
                        w[0].inner, w[0].outer, w[1].inner, w[1].outer
                    ),
                ));
            }
        }
        let mut canon: Vec<Shell> = Vec::with_capacity(sorted.len());
        for s in sorted.into_iter().filter(|s| s.value > 0.0) {
            match canon.last_mut() {
                Some(last) if last.value == s.value && touching(last.outer, s.inner) => {
                    last.outer = s.outer;
                    last.outer_closed = s.outer_closed;
                }
                _ => canon.push(s),
            }
        }
        Ok(RadialStepFunction { dim, shells: canon })
    }

    pub fn zero(dim: usize) -> Self {
        RadialStepFunction {
            dim: dim.max(1),
            shells: Vec::new(),
        }
    }

    /// `chi_{B(0,R)}`.
    pub fn indicator_ball(radius: f64, dim: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::validation(
                "R",
                format!("{radius} is not a positive radius"),
            ));
        }
        RadialStepFunction::new(dim, vec![Shell::new(0.0, radius, 1.0)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shells(&self) -> &[Shell] {
        &self.shells
    }

    pub fn is_zero(&self) -> bool {
        self.shells.is_empty()
    }

    /// Largest outer radius, 0 for the zero function.
    pub fn max_radius(&self) -> f64 {
        self.shells.last().map_or(0.0, |s| s.outer)
    }

    /// Smallest positive shell endpoint.
    pub fn min_positive_radius(&self) -> Option<f64> {
        self.shells
            .iter()
            .flat_map(|s| [s.inner, s.outer])
            .filter(|&r| r > 0.0)
            .min_by(f64::total_cmp)
    }

    pub fn max_value(&self) -> f64 {
        self.shells.iter().map(|s| s.value).fold(0.0, f64::max)
    }

    /// Sorted distinct positive values.
    pub fn levels(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.shells.iter().map(|s| s.value).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Value at radius `|x| = r` (half-open shells).
    pub fn value_at(&self, r: f64) -> f64 {
        let i = self.shells.partition_point(|s| s.outer <= r);
        match self.shells.get(i) {
            Some(s) if s.inner <= r => s.value,
            _ => 0.0,
        }
    }

    /// Sorted distinct shell endpoints, including 0 if a shell starts there.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self
            .shells
            .iter()
            .flat_map(|s| [s.inner, s.outer])
            .collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// `int_{B(0,r)} |f|^p dx`.
    pub fn ball_integral_power(&self, p: Rational, r: f64) -> f64 {
        self.ball_integral_powf(p.to_f64(), r)
    }

    pub fn ball_integral_powf(&self, p: f64, r: f64) -> f64 {
        self.shells
            .iter()
            .take_while(|s| s.inner < r)
            .map(|s| s.value.powf(p) * s.volume_within(self.dim, r))
            .sum()
    }

    /// `|{x in B(0,r) : f(x) > gamma}|`
    pub fn superlevel_measure(&self, gamma: f64, r: f64) -> f64 {
        self.shells
            .iter()
            .take_while(|s| s.inner < r)
            .filter(|s| s.value > gamma)
            .map(|s| s.volume_within(self.dim, r))
            .sum()
    }

    pub fn support_measure(&self) -> f64 {
        self.superlevel_measure(0.0, f64::INFINITY)
    }

    /// Indicator of `{f >= level}`.
    pub fn superlevel_indicator(&self, level: f64) -> RadialStepFunction {
        let shells = self
            .shells
            .iter()
            .filter(|s| s.value >= level)
            .map(|s| Shell { value: 1.0, ..*s })
            .collect();
        RadialStepFunction::new(self.dim, shells).expect("subset of a canonical function")
    }

    /// `c * f` for `c >= 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::validation(
                "scale",
                format!("{c} is not a nonnegative factor"),
            ));
        }
        let shells = self
            .shells
            .iter()
            .map(|s| Shell {
                value: s.value * c,
                ..*s
            })
            .collect();
        RadialStepFunction::new(self.dim, shells)
    }

    /// `x -> f(lambda x)`, i.e. every radius divided by `lambda`.
    pub fn dilated(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::validation(
                "lambda",
                format!("{lambda} is not positive"),
            ));
        }
        let shells = self
            .shells
            .iter()
            .map(|s| Shell {
                inner: s.inner / lambda,
                outer: s.outer / lambda,
                ..*s
            })
            .collect();
        RadialStepFunction::new(self.dim, shells)
    }

    /// Pointwise product on the merged breakpoint partition.
    pub fn pointwise_product(&self, other: &RadialStepFunction) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut cuts: Vec<f64> = self
            .breakpoints()
            .into_iter()
            .chain(other.breakpoints())
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|b, a| touching(*a, *b));
        let mut shells = Vec::new();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let mid = 0.5 * (lo + hi);
            let v = self.value_at(mid) * other.value_at(mid);
            if v > 0.0 {
                shells.push(Shell {
                    inner_closed: self.closed_at(mid, lo) && other.closed_at(mid, lo),
                    outer_closed: self.closed_at(mid, hi) && other.closed_at(mid, hi),
                    ..Shell::new(lo, hi, v)
                });
            }
        }
        RadialStepFunction::new(self.dim, shells)
    }

    /// Whether the shell containing `mid` also contains its endpoint `edge`.
    fn closed_at(&self, mid: f64, edge: f64) -> bool {
        let i = self.shells.partition_point(|s| s.outer <= mid);
        let Some(s) = self.shells.get(i) else {
            return false;
        };
        if touching(edge, s.inner) {
            s.inner_closed
        } else if touching(edge, s.outer) {
            s.outer_closed
        } else {
            true
        }
    }

    /// Exact `int_{(a-r, a+r)} |f|^p dx` in dimension one.
    pub fn offcenter_integral_1d(&self, a: f64, r: f64, p: Rational) -> Result<f64> {
        if self.dim != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.dim,
            });
        }
        Ok(self.offcenter_integral_1d_powf(a, r, p.to_f64()))
    }

    pub(crate) fn offcenter_integral_1d_powf(&self, a: f64, r: f64, p: f64) -> f64 {
        let (lo, hi) = (a - r, a + r);
        let overlap = |x0: f64, x1: f64| (hi.min(x1) - lo.max(x0)).max(0.0);
        self.shells
            .iter()
            .map(|s| {
                let len = overlap(s.inner, s.outer) + overlap(-s.outer, -s.inner);
                s.value.powf(p) * len
            })
            .sum()
    }

    /// Short content digest of the canonical JSON form.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("function serializes");
        hex_prefix(&Sha256::digest(&json))
    }
}

pub(crate) fn hex_prefix(bytes: &[u8]) -> String {
    bytes[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Product of a nonempty list of functions.
pub fn product_all(functions: &[RadialStepFunction]) -> Result<RadialStepFunction> {
    let (first, rest) = functions
        .split_first()
        .ok_or_else(|| Error::validation("functions", "empty list"))?;
    rest.iter()
        .try_fold(first.clone(), |acc, f| acc.pointwise_product(f))
}
