//! Exact scalar arithmetic: arbitrary-precision rationals, rational square-root
//! bounds, and the small field of symbolic values (`a + b*sqrt(s)`, `c*exp(q)`)
//! that map patterns evaluate to.

use num_bigint::{BigInt, BigUint, Sign};

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

/// Exact rational scalar. Serialized as the string `"p/q"` (or `"p"` when the
/// denominator is 1) so that no float ever enters a document.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Q(pub BigRational);

impl Q {
    pub fn zero() -> Q {
        Q(BigRational::zero())
    }

    pub fn one() -> Q {
        Q(BigRational::one())
    }

    pub fn from_int(n: i64) -> Q {
        Q(BigRational::from_integer(BigInt::from(n)))
    }

    /// `n / d`; panics if `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Q {
        assert!(d != 0, "zero denominator");
        Q(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Q {
        Q(self.0.abs())
    }

    pub fn square(&self) -> Q {
        Q(&self.0 * &self.0)
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn recip(&self) -> Q {
        assert!(!self.is_zero(), "division by zero");
        Q(self.0.recip())
    }

    pub fn min(self, other: Q) -> Q {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Q) -> Q {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Best-effort float view for rendering; never used in exact logic.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// True iff `self` is the square of a rational.
    pub fn is_perfect_square(&self) -> bool {
        if self.is_negative() {
            return false;
        }
        if self.is_zero() {
            return true;
        }
        let n = self.0.numer().magnitude();
        let d = self.0.denom().magnitude();
        is_square_uint(n) && is_square_uint(d)
    }

    /// Exact square root, if `self` is a perfect square.
    pub fn sqrt_exact(&self) -> Option<Q> {
        if self.is_negative() {
            return None;
        }
        let n = self.0.numer().magnitude().sqrt();
        let d = self.0.denom().magnitude().sqrt();
        let cand = Q(BigRational::new(
            BigInt::from_biguint(Sign::Plus, n),
            BigInt::from_biguint(Sign::Plus, d),
        ));
        if &cand.square() == self {
            Some(cand)
        } else {
            None
        }
    }
}

fn is_square_uint(n: &BigUint) -> bool {
    let r = n.sqrt();
    &(&r * &r) == n
}

/// Default scaling used by the rational square-root bounds below; the returned
/// bound differs from the true root by less than 1e-6 times the denominator
/// scale, which is plenty for margin arithmetic (margins only need soundness).
const SQRT_SCALE: u64 = 1_000_000;

/// Rational lower bound on sqrt(q); exact when q is a perfect square.
/// Requires q >= 0.
pub fn sqrt_floor(q: &Q) -> Q {
    assert!(!q.is_negative(), "sqrt of negative rational");
    if let Some(r) = q.sqrt_exact() {
        return r;
    }
    // sqrt(n/d) = sqrt(n*d)/d; scale for precision.
    let k = BigUint::from(SQRT_SCALE);
    let n = q.0.numer().magnitude();
    let d = q.0.denom().magnitude();
    let scaled = n * d * (&k * &k);
    let root = scaled.sqrt(); // floor sqrt
    Q(BigRational::new(
        BigInt::from_biguint(Sign::Plus, root),
        BigInt::from_biguint(Sign::Plus, d * k),
    ))
}

/// Rational upper bound on sqrt(q); exact when q is a perfect square.
pub fn sqrt_ceil(q: &Q) -> Q {
    assert!(!q.is_negative(), "sqrt of negative rational");
    if let Some(r) = q.sqrt_exact() {
        return r;
    }
    let k = BigUint::from(SQRT_SCALE);
    let n = q.0.numer().magnitude();
    let d = q.0.denom().magnitude();
    let scaled = n * d * (&k * &k);
    let root = scaled.sqrt() + BigUint::one();
    Q(BigRational::new(
        BigInt::from_biguint(Sign::Plus, root),
        BigInt::from_biguint(Sign::Plus, d * k),
    ))
}

/// Decides `sqrt(s) + sqrt(t) <= bound` exactly for rationals s, t >= 0.
pub fn sqrt_sum_leq(s: &Q, t: &Q, bound: &Q) -> bool {
    if bound.is_negative() {
        return false;
    }
    // sqrt(s)+sqrt(t) <= b  <=>  s+t+2*sqrt(st) <= b^2
    //                      <=>  b^2-s-t >= 0  and  4st <= (b^2-s-t)^2
    let rhs = &bound.square() - s - t;
    if rhs.is_negative() {
        return false;
    }
    Q::from_int(4) * s.clone() * t.clone() <= rhs.square()
}

/// Decides `sqrt(s) <= bound` exactly for rational s >= 0.
pub fn sqrt_leq(s: &Q, bound: &Q) -> bool {
    !bound.is_negative() && *s <= bound.square()
}

/// Decides `sqrt(s) < bound` exactly.
pub fn sqrt_lt(s: &Q, bound: &Q) -> bool {
    bound.is_positive() && *s < bound.square()
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Q {
            type Output = Q;
            fn $method(self, rhs: Q) -> Q {
                Q((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Q> for Q {
            type Output = Q;
            fn $method(self, rhs: &'a Q) -> Q {
                Q((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Q> for &'a Q {
            type Output = Q;
            fn $method(self, rhs: &'a Q) -> Q {
                Q((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Q> for &'a Q {
            type Output = Q;
            fn $method(self, rhs: Q) -> Q {
                Q((&self.0).$method(rhs.0))
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);
impl_binop!(Div, div);

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-self.0)
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-&self.0)
    }
}

impl AddAssign for Q {
    fn add_assign(&mut self, rhs: Q) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Q {
    fn sub_assign(&mut self, rhs: Q) {
        self.0 -= rhs.0;
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, thiserror::Error)]
#[error("malformed rational `{0}`")]
pub struct ParseQError(String);

impl FromStr for Q {
    type Err = ParseQError;
    fn from_str(s: &str) -> Result<Q, ParseQError> {
        let bad = || ParseQError(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Q(BigRational::new(n, d)))
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Q, D::Error> {
        let s = String::deserialize(deserializer)?;
        Q::from_str(&s).map_err(serde::de::Error::custom)
    }
}

/// Exact value of a (vector-valued) map at a point. All components of one
/// value share the same radical or exponential part, because they come from a
/// single placed atom scaled by a rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Value {
    /// Plain rational vector.
    Rat(Vec<Q>),
    /// Componentwise `a_i + b_i * sqrt(s)` with a fixed non-square radicand s > 0.
    Quad { a: Vec<Q>, b: Vec<Q>, s: Q },
    /// Componentwise `c_i * exp(inner)` with rational inner != 0.
    Exp { c: Vec<Q>, inner: Q },
}

impl Value {
    pub fn zero(dim: usize) -> Value {
        Value::Rat(vec![Q::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        match self {
            Value::Rat(v) => v.len(),
            Value::Quad { a, .. } => a.len(),
            Value::Exp { c, .. } => c.len(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Rat(v) => v.iter().all(Q::is_zero),
            // Normalized forms never hide a zero here, but be safe.
            Value::Quad { a, b, .. } => a.iter().all(Q::is_zero) && b.iter().all(Q::is_zero),
            Value::Exp { c, .. } => c.iter().all(Q::is_zero),
        }
    }

    /// `a + b*sqrt(s)` componentwise, normalizing away square radicands and
    /// zero coefficients.
    pub fn quad(a: Vec<Q>, b: Vec<Q>, s: Q) -> Value {
        assert_eq!(a.len(), b.len());
        assert!(!s.is_negative());
        if b.iter().all(Q::is_zero) || s.is_zero() {
            return Value::Rat(a);
        }
        if let Some(r) = s.sqrt_exact() {
            let v = a
                .into_iter()
                .zip(b)
                .map(|(ai, bi)| ai + bi * &r)
                .collect();
            return Value::Rat(v);
        }
        Value::Quad { a, b, s }
    }

    /// `c * exp(inner)` componentwise, normalized.
    pub fn exp(c: Vec<Q>, inner: Q) -> Value {
        if c.iter().all(Q::is_zero) {
            return Value::Rat(c);
        }
        if inner.is_zero() {
            return Value::Rat(c);
        }
        Value::Exp { c, inner }
    }

    /// Applies a rational matrix (rows) to the value.
    pub fn linear_map(&self, rows: &[Vec<Q>]) -> Value {
        let apply = |v: &[Q]| -> Vec<Q> {
            rows.iter()
                .map(|row| {
                    assert_eq!(row.len(), v.len(), "matrix/value dimension mismatch");
                    row.iter()
                        .zip(v)
                        .fold(Q::zero(), |acc, (m, x)| acc + m * x)
                })
                .collect()
        };
        match self {
            Value::Rat(v) => Value::Rat(apply(v)),
            Value::Quad { a, b, s } => Value::quad(apply(a), apply(b), s.clone()),
            Value::Exp { c, inner } => Value::exp(apply(c), inner.clone()),
        }
    }

    /// Exact equality of the denoted real vectors.
    pub fn eq_exact(&self, other: &Value) -> bool {
        use Value::*;
        match (self, other) {
            (Rat(x), Rat(y)) => x == y,
            (Quad { a, b, s }, Quad { a: a2, b: b2, s: s2 }) => {
                if s == s2 {
                    return a == a2 && b == b2;
                }
                // Fold when sqrt(s2) is a rational multiple of sqrt(s):
                // s*s2 a perfect square k^2 gives sqrt(s2) = k/s * sqrt(s).
                let prod = s * s2;
                if let Some(k) = prod.sqrt_exact() {
                    let factor = &k / s; // sqrt(s2)/sqrt(s)
                    return a == a2
                        && b.iter()
                            .zip(b2)
                            .all(|(bi, b2i)| *bi == b2i * &factor);
                }
                // 1, sqrt(s), sqrt(s2) linearly independent over Q here.
                false
            }
            (Exp { c, inner }, Exp { c: c2, inner: i2 }) => c == c2 && inner == i2,
            // Normalized cross-kind values denote different reals: a normalized
            // Quad has an irrational part, a normalized Exp a transcendental one.
            (Rat(_), Quad { .. }) | (Quad { .. }, Rat(_)) => false,
            (Rat(_), Exp { .. }) | (Exp { .. }, Rat(_)) => false,
            (Quad { .. }, Exp { .. }) | (Exp { .. }, Quad { .. }) => false,
        }
    }

    /// Decimal rendering with 12 significant digits; presentation only.
    pub fn render(&self) -> Vec<String> {
        let f = |x: f64| format!("{x:.12e}");
        match self {
            Value::Rat(v) => v.iter().map(|q| q.to_string()).collect(),
            Value::Quad { a, b, s } => {
                let rs = s.to_f64().sqrt();
                a.iter()
                    .zip(b)
                    .map(|(ai, bi)| f(ai.to_f64() + bi.to_f64() * rs))
                    .collect()
            }
            Value::Exp { c, inner } => {
                let e = inner.to_f64().exp();
                c.iter().map(|ci| f(ci.to_f64() * e)).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "-3", "5/7", "-22/7"] {
            let v: Q = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert!("1/0".parse::<Q>().is_err());
        assert!("a/b".parse::<Q>().is_err());
    }

    #[test]
    fn sqrt_bounds_bracket_the_root() {
        for v in [q(2, 1), q(1, 2), q(17, 3), q(25, 4)] {
            let lo = sqrt_floor(&v);
            let hi = sqrt_ceil(&v);
            assert!(lo.square() <= v && v <= hi.square());
            assert!(lo <= hi);
        }
        assert_eq!(sqrt_floor(&q(9, 4)), q(3, 2));
        assert_eq!(sqrt_ceil(&q(9, 4)), q(3, 2));
    }

    #[test]
    fn sqrt_sum_comparison_is_exact() {
        // sqrt(2) + sqrt(8) = 3*sqrt(2) ~ 4.2426
        assert!(sqrt_sum_leq(&q(2, 1), &q(8, 1), &q(17, 4))); // 4.25
        assert!(!sqrt_sum_leq(&q(2, 1), &q(8, 1), &q(424, 100)));
        // sqrt(9) + sqrt(16) = 7 exactly
        assert!(sqrt_sum_leq(&q(9, 1), &q(16, 1), &q(7, 1)));
        assert!(!sqrt_sum_leq(&q(9, 1), &q(16, 1), &q(699, 100)));
    }

    #[test]
    fn quad_values_fold_and_compare() {
        // 1 + 2*sqrt(9/4) = 4
        let v = Value::quad(vec![q(1, 1)], vec![q(2, 1)], q(9, 4));
        assert!(v.eq_exact(&Value::Rat(vec![q(4, 1)])));
        // sqrt(8) = 2*sqrt(2)
        let a = Value::quad(vec![Q::zero()], vec![Q::one()], q(8, 1));
        let b = Value::quad(vec![Q::zero()], vec![q(2, 1)], q(2, 1));
        assert!(a.eq_exact(&b));
        // sqrt(2) != sqrt(3)
        let c = Value::quad(vec![Q::zero()], vec![Q::one()], q(3, 1));
        assert!(!a.eq_exact(&c));
        // 1 + sqrt(2) is irrational
        let d = Value::quad(vec![Q::one()], vec![Q::one()], q(2, 1));
        assert!(!d.eq_exact(&Value::Rat(vec![q(2, 1)])));
    }

    #[test]
    fn exp_values_compare_by_coefficient_and_exponent() {
        let a = Value::exp(vec![Q::one()], q(-1, 1));
        let b = Value::exp(vec![Q::one()], q(-1, 1));
        let c = Value::exp(vec![Q::one()], q(-2, 1));
        assert!(a.eq_exact(&b));
        assert!(!a.eq_exact(&c));
        // exp(0) folds to rational
        assert!(Value::exp(vec![q(3, 1)], Q::zero()).eq_exact(&Value::Rat(vec![q(3, 1)])));
    }
}
