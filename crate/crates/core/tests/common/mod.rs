//! Shared generators and invariant checks for the integration suites.

#![allow(dead_code)]

use morrey_holder::norms::{norm, OracleConfig, Weight};
use morrey_holder::radial::{ball_volume, RadialStepFunction, Shell};
use morrey_holder::{ExponentPair, PhiSpec, Rational};
use rand::Rng;

pub fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Random nonzero step function: 1..=5 shells with radii in roughly
/// [1e-2, 1e2] and values in [0.1, 10].
pub fn random_function<R: Rng>(rng: &mut R, d: usize) -> RadialStepFunction {
    let n = rng.gen_range(1..=5);
    let mut cuts: Vec<f64> = (0..2 * n)
        .map(|_| 10f64.powf(rng.gen_range(-2.0..2.0)))
        .collect();
    cuts.sort_by(f64::total_cmp);
    let mut shells = Vec::with_capacity(n);
    for (i, pair) in cuts.chunks(2).enumerate() {
        let inner = if i == 0 && rng.gen_bool(0.5) {
            0.0
        } else {
            pair[0]
        };
        if pair[1] > inner {
            shells.push(Shell::new(
                inner,
                pair[1],
                10f64.powf(rng.gen_range(-1.0..1.0)),
            ));
        }
    }
    RadialStepFunction::new(d, shells).unwrap()
}

/// Rational with denominator up to 4 in `[lo, hi]`.
pub fn random_rational<R: Rng>(rng: &mut R, lo: i128, hi: i128) -> Rational {
    let den = rng.gen_range(1..=4i128);
    let num = rng.gen_range(lo * den..=hi * den);
    Rational::new(num, den).unwrap()
}

/// Random `1 <= p <= q <= 8`.
pub fn random_pair<R: Rng>(rng: &mut R) -> ExponentPair {
    let p = random_rational(rng, 1, 6);
    let q = p + random_rational(rng, 0, 2);
    ExponentPair::new(p, q).unwrap()
}

/// Power weight in G_p for dimension `d`: exponent in `[0, d/p]`.
pub fn random_gp_power<R: Rng>(rng: &mut R, p: Rational, d: usize) -> PhiSpec {
    let bound = Rational::integer(d as i128) / p;
    let t = Rational::new(rng.gen_range(0..=8), 8).unwrap();
    PhiSpec::power(bound * t)
}

/// Table weight in G_p: random log-linear pieces with decay in `[0, d/p]`.
pub fn random_gp_table<R: Rng>(rng: &mut R, p: Rational, d: usize) -> PhiSpec {
    let dp = d as f64 / p.to_f64();
    let n = rng.gen_range(2..=4);
    let mut r0 = 10f64.powf(rng.gen_range(-1.5..0.0));
    let mut v: f64 = 1.0;
    let mut knots = vec![(r0, v)];
    for _ in 1..n {
        let r1 = r0 * 10f64.powf(rng.gen_range(0.2..1.0));
        let a = rng.gen_range(0.0..=dp);
        v *= (r1 / r0).powf(-a);
        knots.push((r1, v));
        r0 = r1;
    }
    PhiSpec::table(knots).unwrap()
}

/// All four norms of `f` for `(p, q)`; generalized ones use `phi`.
pub fn four_weights(q: Rational, phi: &PhiSpec) -> [(Weight, bool); 4] {
    [
        (Weight::Classical { q }, false),
        (Weight::Classical { q }, true),
        (Weight::Phi(phi.clone()), false),
        (Weight::Phi(phi.clone()), true),
    ]
}

fn value(f: &RadialStepFunction, p: Rational, w: &Weight, weak: bool) -> f64 {
    norm(f, p, w, weak, &OracleConfig::default()).unwrap().value
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `||c f|| = c ||f||` for all four norms, 1e-12 relative.
pub fn homogeneity(
    f: &RadialStepFunction,
    c: f64,
    pair: ExponentPair,
    phi: &PhiSpec,
) -> Result<(), String> {
    let g = f.scaled(c).unwrap();
    for (w, weak) in four_weights(pair.q, phi) {
        let (a, b) = (value(&g, pair.p, &w, weak), c * value(f, pair.p, &w, weak));
        check(rel(a, b) <= 1e-12, || {
            format!("homogeneity {w:?} weak={weak}: {a} vs {b}")
        })?;
    }
    Ok(())
}

/// `||f(lambda .)|| = lambda^{-d/q} ||f||` (strong and weak), 1e-10 relative.
pub fn dilation(f: &RadialStepFunction, lambda: f64, pair: ExponentPair) -> Result<(), String> {
    let g = f.dilated(lambda).unwrap();
    let factor = lambda.powf(-(f.dim() as f64) / pair.q.to_f64());
    let w = Weight::Classical { q: pair.q };
    for weak in [false, true] {
        let (a, b) = (
            value(&g, pair.p, &w, weak),
            factor * value(f, pair.p, &w, weak),
        );
        check(rel(a, b) <= 1e-10, || {
            format!("dilation weak={weak}: {a} vs {b}")
        })?;
    }
    Ok(())
}

/// Restricting `f` to an annulus never increases any of the four norms.
pub fn monotonicity(
    f: &RadialStepFunction,
    (inner, outer): (f64, f64),
    pair: ExponentPair,
    phi: &PhiSpec,
) -> Result<(), String> {
    let window = RadialStepFunction::new(f.dim(), vec![Shell::new(inner, outer, 1.0)]).unwrap();
    let g = f.pointwise_product(&window).unwrap();
    for (w, weak) in four_weights(pair.q, phi) {
        let (a, b) = (value(&g, pair.p, &w, weak), value(f, pair.p, &w, weak));
        check(a <= b * (1.0 + 1e-12), || {
            format!("monotonicity {w:?} weak={weak}: {a} > {b}")
        })?;
    }
    Ok(())
}

/// `int_{B_r} f^p = sum_k (v_k^p - v_{k-1}^p) |{f > v_{k-1}} cap B_r|`, 1e-12.
pub fn layer_cake(f: &RadialStepFunction, p: f64, radius: f64) -> Result<(), String> {
    let direct = f.ball_integral_powf(p, radius);
    let mut prev: f64 = 0.0;
    let mut layered = 0.0;
    for v in f.levels() {
        layered += (v.powf(p) - prev.powf(p)) * f.superlevel_measure(prev, radius);
        prev = v;
    }
    check(
        rel(direct, layered) <= 1e-12 || (direct - layered).abs() <= 1e-300,
        || format!("layer cake p={p} r={radius}: {direct} vs {layered}"),
    )
}

/// `fg = gf` and `(fg)h = f(gh)` as functions (compared by value at every
/// breakpoint midpoint) and in norm.
pub fn product_laws(
    f: &RadialStepFunction,
    g: &RadialStepFunction,
    h: &RadialStepFunction,
    pair: ExponentPair,
) -> Result<(), String> {
    let fg = f.pointwise_product(g).unwrap();
    let gf = g.pointwise_product(f).unwrap();
    let left = fg.pointwise_product(h).unwrap();
    let right = f
        .pointwise_product(&g.pointwise_product(h).unwrap())
        .unwrap();
    let mut cuts: Vec<f64> = [f, g, h].iter().flat_map(|x| x.breakpoints()).collect();
    cuts.push(0.0);
    cuts.sort_by(f64::total_cmp);
    for w in cuts.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        check(rel(fg.value_at(mid), gf.value_at(mid)) <= 1e-15, || {
            format!("commutativity at {mid}")
        })?;
        check(
            rel(left.value_at(mid), right.value_at(mid)) <= 1e-14,
            || format!("associativity at {mid}"),
        )?;
    }
    let w = Weight::Classical { q: pair.q };
    for weak in [false, true] {
        let (a, b) = (value(&fg, pair.p, &w, weak), value(&gf, pair.p, &w, weak));
        check(rel(a, b) <= 1e-12, || {
            format!("commutative norm weak={weak}: {a} vs {b}")
        })?;
        let (a, b) = (
            value(&left, pair.p, &w, weak),
            value(&right, pair.p, &w, weak),
        );
        check(rel(a, b) <= 1e-12, || {
            format!("associative norm weak={weak}: {a} vs {b}")
        })?;
    }
    Ok(())
}

/// Weak norm never exceeds the strong norm (classical and generalized).
pub fn weak_below_strong(
    f: &RadialStepFunction,
    pair: ExponentPair,
    phi: &PhiSpec,
) -> Result<(), String> {
    for w in [Weight::Classical { q: pair.q }, Weight::Phi(phi.clone())] {
        let (weak, strong) = (value(f, pair.p, &w, true), value(f, pair.p, &w, false));
        check(weak <= strong * (1.0 + 1e-12), || {
            format!("embedding {w:?}: {weak} > {strong}")
        })?;
    }
    Ok(())
}

/// `||chi_{B(0,R)}||_{M^p_q} = ||chi_{B(0,R)}||_{wM^p_q} = |B(0,R)|^{1/q}`.
pub fn chi_closed_form(radius: f64, d: usize, pair: ExponentPair, tol: f64) -> Result<(), String> {
    let chi = RadialStepFunction::indicator_ball(radius, d).unwrap();
    let expected = ball_volume(d, radius).powf(1.0 / pair.q.to_f64());
    let w = Weight::Classical { q: pair.q };
    for weak in [false, true] {
        let got = value(&chi, pair.p, &w, weak);
        check(rel(got, expected) <= tol, || {
            format!(
                "chi R={radius} d={d} p={} q={} weak={weak}: {got} vs {expected}",
                pair.p, pair.q
            )
        })?;
    }
    Ok(())
}
