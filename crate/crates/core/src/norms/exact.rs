//! Supremum of `c * t^alpha * I(t)` over `t = r^d > 0`, where `I` is the
//! (piecewise linear in `t`) integral of a radial step function over `B(0, r)`.
//!
//! On each segment `[t_k, t_{k+1}]` the objective is `t^alpha (A + B t)` whose
//! only stationary point is `t* = -alpha A / ((alpha + 1) B)`. Segment
//! endpoints plus in-range stationary points form a finite candidate set that
//! contains the supremum, once both limits `t -> 0` and `t -> inf` are ruled out.

use crate::error::{Error, Result};
use crate::radial::{unit_ball_volume, RadialStepFunction};

/// Breakpoints in `t = r^d` with the cumulative integral and the slope dI/dt
/// on the segment to the right of each breakpoint.
#[derive(Clone, Debug)]
pub(crate) struct MassProfile {
    pub dim: usize,
    pub radii: Vec<f64>,
    pub ts: Vec<f64>,
    pub masses: Vec<f64>,
    pub slopes: Vec<f64>,
}

impl MassProfile {
    /// Profile of `r -> int_{B(0,r)} |f|^p`.
    pub fn new(f: &RadialStepFunction, p: f64) -> Self {
        let d = f.dim();
        let vd = unit_ball_volume(d);
        let radii = f.breakpoints();
        let ts: Vec<f64> = radii.iter().map(|r| r.powi(d as i32)).collect();
        let mut masses = Vec::with_capacity(radii.len());
        let mut slopes = Vec::with_capacity(radii.len());
        let mut acc = 0.0;
        for k in 0..radii.len() {
            masses.push(acc);
            if k + 1 < radii.len() {
                let mid = 0.5 * (radii[k] + radii[k + 1]);
                let density = f.value_at(mid).powf(p) * vd;
                slopes.push(density);
                acc += density * (ts[k + 1] - ts[k]);
            } else {
                slopes.push(0.0);
            }
        }
        MassProfile {
            dim: d,
            radii,
            ts,
            masses,
            slopes,
        }
    }

    pub fn total(&self) -> f64 {
        self.masses.last().copied().unwrap_or(0.0)
    }

    /// `I` at radius `r`.
    pub fn mass_at(&self, r: f64) -> f64 {
        let k = self.radii.partition_point(|&b| b <= r);
        if k == 0 {
            return 0.0;
        }
        let k = k - 1;
        let t = r.powi(self.dim as i32);
        self.masses[k] + self.slopes[k] * (t - self.ts[k])
    }
}

/// Maximizer of `ln c + alpha ln t + ln I(t)`; the returned value is that
/// quantity raised to `1/p`, i.e. `(c t^alpha I)^{1/p}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Supremum {
    pub value: f64,
    pub radius: f64,
}

pub(crate) fn sup_weighted_mass(
    profile: &MassProfile,
    alpha: f64,
    log_c: f64,
    p: f64,
) -> Result<Option<Supremum>> {
    if profile.total() <= 0.0 {
        return Ok(None);
    }
    let d = profile.dim as f64;
    let n = profile.radii.len();

    // t -> 0: a shell touching the origin gives I ~ B t
    if profile.radii[0] == 0.0 && profile.slopes[0] > 0.0 && alpha + 1.0 < 0.0 {
        return Err(Error::Unbounded(format!(
            "objective grows like r^{} as r -> 0",
            d * (alpha + 1.0) / p
        )));
    }
    // t -> inf: I is constant past the support
    if alpha > 0.0 {
        return Err(Error::Unbounded(format!(
            "objective grows like r^{} as r -> inf",
            d * alpha / p
        )));
    }

    let log_obj = |t: f64, mass: f64| log_c + alpha * t.ln() + mass.ln();
    let mut best: Option<(f64, f64)> = None; // (log objective, t)
    let mut offer = |t: f64, mass: f64| {
        if t > 0.0 && mass > 0.0 {
            let v = log_obj(t, mass);
            // ascending t: strict improvement keeps the smallest radius on ties
            if best.is_none_or(|(bv, _)| v > bv) {
                best = Some((v, t));
            }
        }
    };
    for k in 0..n {
        offer(profile.ts[k], profile.masses[k]);
        let slope = profile.slopes[k];
        if k + 1 < n && slope > 0.0 && alpha != -1.0 {
            let a = profile.masses[k] - slope * profile.ts[k];
            let t_star = -alpha * a / ((alpha + 1.0) * slope);
            if t_star > profile.ts[k] && t_star < profile.ts[k + 1] {
                offer(t_star, a + slope * t_star);
            }
        }
    }
    // alpha == -1 on the first shell from the origin: constant, attained at t_1
    let (log_v, t) = best.expect("positive total mass yields a candidate");
    Ok(Some(Supremum {
        value: (log_v / p).exp(),
        radius: t.powf(1.0 / d),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::Shell;

    #[test]
    fn profile_matches_direct_integration() {
        let f = RadialStepFunction::new(
            3,
            vec![
                Shell::new(0.0, 0.5, 1.5),
                Shell::new(0.7, 1.0, 0.25),
                Shell::new(1.0, 2.0, 3.0),
            ],
        )
        .unwrap();
        let prof = MassProfile::new(&f, 2.5);
        for r in [0.1, 0.5, 0.6, 0.7, 0.9, 1.0, 1.4, 2.0, 3.0] {
            let direct = f.ball_integral_powf(2.5, r);
            let via = prof.mass_at(r);
            assert!(
                (via - direct).abs() <= 1e-12 * direct.max(1.0),
                "{r}: {via} vs {direct}"
            );
        }
    }

    #[test]
    fn interior_stationary_point_can_win() {
        // annulus away from the origin with alpha < -1 peaks strictly inside
        let f = RadialStepFunction::new(1, vec![Shell::new(1.0, 10.0, 1.0)]).unwrap();
        let prof = MassProfile::new(&f, 1.0);
        let alpha = -2.0;
        let sup = sup_weighted_mass(&prof, alpha, 0.0, 1.0).unwrap().unwrap();
        // t^-2 * 2 (t - 1) peaks at t = 2
        assert!((sup.radius - 2.0).abs() < 1e-12);
        assert!((sup.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unbounded_limits_are_reported() {
        let f = RadialStepFunction::indicator_ball(1.0, 1).unwrap();
        let prof = MassProfile::new(&f, 1.0);
        assert!(matches!(
            sup_weighted_mass(&prof, 0.5, 0.0, 1.0),
            Err(Error::Unbounded(_))
        ));
        assert!(matches!(
            sup_weighted_mass(&prof, -1.5, 0.0, 1.0),
            Err(Error::Unbounded(_))
        ));
        assert!(sup_weighted_mass(&prof, -1.0, 0.0, 1.0).unwrap().is_some());
    }
}
