//! Exact exponent bookkeeping.
//!
//! All Lebesgue/Morrey exponents are rationals so that the q-condition
//! `sum 1/q_i = 1/q` is decided by exact equality.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number in lowest terms with positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(Ratio<i128>);

impl Rational {
    pub fn new(numer: i128, denom: i128) -> Result<Self> {
        if denom == 0 {
            return Err(Error::validation("rational", "zero denominator"));
        }
        Ok(Rational(Ratio::new(numer, denom)))
    }

    pub fn integer(n: i128) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn zero() -> Self {
        Rational(Ratio::zero())
    }

    pub fn one() -> Self {
        Rational(Ratio::one())
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// `1/self`; fails on zero.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::validation("rational", "reciprocal of zero"));
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn to_f64(&self) -> f64 {
        // Ratio::to_f64 is correctly rounded for i128 components.
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"a/b"` or an integer `"a"`. Decimal notation is rejected.
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "rational".into(),
            input: s.into(),
        };
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i128 = n.trim().parse().map_err(|_| err())?;
                let d: i128 = d.trim().parse().map_err(|_| err())?;
                if d == 0 {
                    return Err(err());
                }
                Rational::new(n, d)
            }
            None => s.parse::<i128>().map(Rational::integer).map_err(|_| err()),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Int(n) => Ok(Rational::integer(n as i128)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

/// A Morrey exponent pair with `1 <= p <= q < inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub p: Rational,
    pub q: Rational,
}

impl ExponentPair {
    pub fn new(p: Rational, q: Rational) -> Result<Self> {
        let pair = ExponentPair { p, q };
        pair.validate("exponent pair")?;
        Ok(pair)
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if self.p < Rational::one() {
            return Err(Error::validation(name, format!("p = {} < 1", self.p)));
        }
        if self.p > self.q {
            return Err(Error::validation(
                name,
                format!("p = {} > q = {}", self.p, self.q),
            ));
        }
        Ok(())
    }
}

impl FromStr for ExponentPair {
    type Err = Error;

    /// `"p/q"` with integer components, or `"P:Q"` where each side is a rational.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (p, q) = if let Some((p, q)) = s.split_once(':') {
            (p.parse()?, q.parse()?)
        } else if let Some((p, q)) = s.split_once('/') {
            let p: i128 = p.trim().parse().map_err(|_| Error::Parse {
                what: "exponent pair".into(),
                input: s.into(),
            })?;
            let q: i128 = q.trim().parse().map_err(|_| Error::Parse {
                what: "exponent pair".into(),
                input: s.into(),
            })?;
            (Rational::integer(p), Rational::integer(q))
        } else {
            return Err(Error::Parse {
                what: "exponent pair".into(),
                input: s.into(),
            });
        };
        ExponentPair::new(p, q)
    }
}

/// Parses a comma-separated list of factor pairs, e.g. `"2/4,2/4"`.
pub fn parse_factor_list(s: &str) -> Result<Vec<ExponentPair>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// Target pair, `m >= 2` factor pairs and the ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentSystem {
    pub target: ExponentPair,
    pub factors: Vec<ExponentPair>,
    pub dimension: usize,
}

impl ExponentSystem {
    pub fn new(target: ExponentPair, factors: Vec<ExponentPair>, dimension: usize) -> Result<Self> {
        let system = ExponentSystem {
            target,
            factors,
            dimension,
        };
        system.validate()?;
        Ok(system)
    }

    pub fn validate(&self) -> Result<()> {
        self.target.validate("target")?;
        if self.factors.len() < 2 {
            return Err(Error::validation(
                "factors",
                format!("need at least 2 factors, got {}", self.factors.len()),
            ));
        }
        for (i, f) in self.factors.iter().enumerate() {
            f.validate(&format!("factor {}", i + 1))?;
        }
        if self.dimension == 0 {
            return Err(Error::validation("dimension", "must be positive"));
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.factors.len()
    }

    pub fn sum_inv_p(&self) -> Rational {
        self.factors.iter().map(|f| recip_nonzero(f.p)).sum()
    }

    pub fn sum_inv_q(&self) -> Rational {
        self.factors.iter().map(|f| recip_nonzero(f.q)).sum()
    }
}

// Validated pairs have p, q >= 1.
fn recip_nonzero(r: Rational) -> Rational {
    Rational::one() / r
}

/// Outcome of the exponent conditions `sum 1/p_i <= 1/p` and `sum 1/q_i = 1/q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub q_condition_holds: bool,
    pub p_condition_holds: bool,
    pub sum_inv_p: Rational,
    pub sum_inv_q: Rational,
    pub p_star: Rational,
    pub q_slack: Rational,
    pub p_slack: Rational,
}

impl ConditionReport {
    pub fn both_hold(&self) -> bool {
        self.q_condition_holds && self.p_condition_holds
    }
}

pub fn check_holder_exponents(system: &ExponentSystem) -> Result<ConditionReport> {
    system.validate()?;
    let sum_inv_p = system.sum_inv_p();
    let sum_inv_q = system.sum_inv_q();
    let q_slack = recip_nonzero(system.target.q) - sum_inv_q;
    let p_slack = recip_nonzero(system.target.p) - sum_inv_p;
    Ok(ConditionReport {
        q_condition_holds: q_slack.is_zero(),
        p_condition_holds: !p_slack.is_negative(),
        sum_inv_p,
        sum_inv_q,
        p_star: sum_inv_p.recip()?,
        q_slack,
        p_slack,
    })
}
