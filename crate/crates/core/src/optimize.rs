//! One-dimensional maximization helpers.

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `xtol`. Returns the best point seen,
/// endpoints included, so a monotone `f` yields the right endpoint exactly.
pub fn golden_section_max<F>(f: F, lo: f64, hi: f64, xtol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let mut best = (lo, f(lo));
    let f_hi = f(hi);
    if f_hi > best.1 {
        best = (hi, f_hi);
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > xtol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_maximum() {
        let (x, v) = golden_section_max(|x| -(x - 0.3).powi(2) + 2.0, -1.0, 4.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn monotone_returns_endpoint() {
        let (x, _) = golden_section_max(|x| x.exp(), 0.0, 1.0, 1e-10);
        assert_eq!(x, 1.0);
        let (x, _) = golden_section_max(|x| -x, 0.0, 1.0, 1e-10);
        assert_eq!(x, 0.0);
    }
}
