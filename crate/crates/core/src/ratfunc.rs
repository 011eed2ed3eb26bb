//! Univariate polynomials over Q and exact limits at poles.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Integer power, negative exponents allowed for nonzero `x`.
pub fn powi(x: &Rational, e: i32) -> Rational {
    num_traits::Pow::pow(x, e)
}

/// Polynomial with rational coefficients, low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly(Vec<Rational>);

impl RatPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        RatPoly(c)
    }

    pub fn one() -> Self {
        RatPoly(vec![Rational::one()])
    }

    /// `1 - c T^e`.
    pub fn one_minus(c: Rational, e: usize) -> Self {
        let mut v = vec![Rational::zero(); e + 1];
        v[0] = Rational::one();
        v[e] -= c;
        RatPoly::new(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> RatPoly {
        (0..e).fold(RatPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Divides by `T - a`, returning the quotient and the remainder `p(a)`.
    pub fn div_linear(&self, a: &Rational) -> (RatPoly, Rational) {
        if self.is_zero() {
            return (RatPoly(Vec::new()), Rational::zero());
        }
        let n = self.0.len();
        let mut q = vec![Rational::zero(); n - 1];
        let mut carry = Rational::zero();
        for i in (0..n).rev() {
            let cur = &self.0[i] + &carry * a;
            if i == 0 {
                return (RatPoly::new(q), cur);
            }
            q[i - 1] = cur.clone();
            carry = cur;
        }
        unreachable!()
    }

    /// Strips every factor `T - a`; returns the multiplicity and cofactor.
    pub fn strip_root(&self, a: &Rational) -> (u32, RatPoly) {
        let mut m = 0;
        let mut cur = self.clone();
        while !cur.is_zero() {
            let (q, r) = cur.div_linear(a);
            if !r.is_zero() {
                break;
            }
            cur = q;
            m += 1;
        }
        (m, cur)
    }
}

/// `lim_{T→a} (1 - T/a)^k · num(T)/den(T)`, computed by cancelling the
/// factors `T - a` exactly. Fails if the pole at `a` has order above `k`.
pub fn pole_limit(num: &RatPoly, den: &RatPoly, a: &Rational, k: u32) -> Result<Rational> {
    if a.is_zero() {
        return Err(Error::InvalidArgument("pole location must be nonzero".into()));
    }
    if den.is_zero() {
        return Err(Error::InvalidArgument("zero denominator".into()));
    }
    if num.is_zero() {
        return Ok(Rational::zero());
    }
    let (mn, num_r) = num.strip_root(a);
    let (md, den_r) = den.strip_root(a);
    let order = k as i64 + mn as i64 - md as i64;
    if order < 0 {
        return Err(Error::Precondition(format!(
            "pole of order {md} at {a} exceeds the requested order {k}"
        )));
    }
    if order > 0 {
        return Ok(Rational::zero());
    }
    // (1 - T/a)^k = (-1/a)^k (T - a)^k
    let mut scale = Rational::one();
    let minus_inv = -a.recip();
    for _ in 0..k {
        scale *= &minus_inv;
    }
    Ok(scale * num_r.eval(a) / den_r.eval(a))
}

/// Rational rendered as a float (diagnostics only).
pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().expect("rational out of f64 range")
}
