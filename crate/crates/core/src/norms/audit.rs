//! Audit of the centered-ball reduction: compares the centered supremum with
//! the Morrey objective on off-center balls `B(a, r)`.
//!
//! Since `f` is radial only `|a|` matters, so centers are sampled on a ray.
//! Dimension one is evaluated exactly; dimension two by seeded Monte-Carlo.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::morrey_norm;
use crate::error::{Error, Result};
use crate::exponents::Rational;
use crate::radial::{ball_volume, RadialStepFunction};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditSpec {
    /// Number of sampled `(a, r)` pairs.
    pub pairs: usize,
    pub seed: u64,
    /// Monte-Carlo points per pair (dimension two only).
    pub mc_samples: usize,
    /// Fixed center distances to cycle through; sampled when absent.
    pub centers: Option<Vec<f64>>,
}

impl Default for AuditSpec {
    fn default() -> Self {
        AuditSpec {
            pairs: 10_000,
            seed: 0,
            mc_samples: 100_000,
            centers: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub max_offcenter_value: f64,
    pub centered_value: f64,
    /// `centered_value - max_offcenter_value`
    pub margin: f64,
    pub samples_used: usize,
    /// Standard error of the winning off-center estimate; 0 when exact.
    pub standard_error: f64,
    pub argmax_center: f64,
    pub argmax_radius: f64,
}

struct Estimate {
    value: f64,
    std_err: f64,
}

fn objective(vol: f64, integral: f64, p: f64, q: f64) -> f64 {
    if integral <= 0.0 {
        return 0.0;
    }
    vol.powf(1.0 / q - 1.0 / p) * integral.powf(1.0 / p)
}

fn monte_carlo_2d(
    f: &RadialStepFunction,
    a: f64,
    r: f64,
    p: f64,
    q: f64,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Estimate {
    let vol = ball_volume(2, r);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let rho = r * rng.gen::<f64>().sqrt();
        let theta = std::f64::consts::TAU * rng.gen::<f64>();
        let (x, y) = (a + rho * theta.cos(), rho * theta.sin());
        let v = f.value_at(x.hypot(y)).powf(p);
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
    let integral = vol * mean;
    let integral_se = vol * (var / n).sqrt();
    let value = objective(vol, integral, p, q);
    // delta method for integral^{1/p}
    let std_err = if integral > 0.0 {
        value * integral_se / (p * integral)
    } else {
        0.0
    };
    Estimate { value, std_err }
}

pub fn audit_centered_supremum(
    f: &RadialStepFunction,
    p: Rational,
    q: Rational,
    spec: &AuditSpec,
) -> Result<AuditReport> {
    let d = f.dim();
    if d > 2 {
        return Err(Error::validation(
            "dim",
            format!("audit supports d <= 2, got {d}"),
        ));
    }
    if spec.pairs == 0 {
        return Err(Error::validation("pairs", "must be positive"));
    }
    if d == 2 && spec.mc_samples < 2 {
        return Err(Error::validation("mc_samples", "need at least 2"));
    }
    let centered = morrey_norm(f, p, q)?;
    if f.is_zero() {
        return Ok(AuditReport {
            max_offcenter_value: 0.0,
            centered_value: 0.0,
            margin: 0.0,
            samples_used: 0,
            standard_error: 0.0,
            argmax_center: 0.0,
            argmax_radius: 1.0,
        });
    }
    let (pf, qf) = (p.to_f64(), q.to_f64());
    let r_max = f.max_radius();
    let r_lo = f.min_positive_radius().expect("nonzero") / 10.0;
    let r_hi = 10.0 * r_max;

    // stream 0 draws the pairs; pair i runs its Monte-Carlo on stream i + 1
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let pairs: Vec<(f64, f64)> = (0..spec.pairs)
        .map(|i| {
            let a = match &spec.centers {
                Some(c) if !c.is_empty() => c[i % c.len()].abs(),
                _ => rng.gen_range(0.0..=1.5 * r_max),
            };
            let r = (rng.gen_range(r_lo.ln()..=r_hi.ln())).exp();
            (a, r)
        })
        .collect();

    let estimates: Vec<Estimate> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, &(a, r))| {
            if d == 1 {
                let integral = f.offcenter_integral_1d_powf(a, r, pf);
                Estimate {
                    value: objective(ball_volume(1, r), integral, pf, qf),
                    std_err: 0.0,
                }
            } else {
                let mut task_rng = ChaCha8Rng::seed_from_u64(spec.seed);
                task_rng.set_stream(i as u64 + 1);
                monte_carlo_2d(f, a, r, pf, qf, spec.mc_samples, &mut task_rng)
            }
        })
        .collect();

    let (idx, best) = estimates
        .iter()
        .enumerate()
        .fold((0, &estimates[0]), |acc, (i, e)| {
            if e.value > acc.1.value {
                (i, e)
            } else {
                acc
            }
        });
    let samples_used = if d == 1 {
        spec.pairs
    } else {
        spec.pairs * spec.mc_samples
    };
    Ok(AuditReport {
        max_offcenter_value: best.value,
        centered_value: centered.value,
        margin: centered.value - best.value,
        samples_used,
        standard_error: best.std_err,
        argmax_center: pairs[idx].0,
        argmax_radius: pairs[idx].1,
    })
}
