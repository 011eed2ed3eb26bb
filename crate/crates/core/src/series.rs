//! Truncated power series in up to three variables with exact rational
//! coefficients, the generating functions `F_ν` / `F̃_ν`, Euler products
//! for gcd sums, and pole extraction.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ff_poly::{closed_points, effective_divisors, ClosedPoint, DivisorP1, FieldCtx};
use crate::ratfunc::{int, pole_limit, powi, rat, RatPoly, Rational};

/// Dense truncated series; exponent `n_i` ranges over `0..=trunc[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    trunc: Vec<usize>,
    coeffs: Vec<Rational>,
}

impl TruncSeries {
    pub fn zero(trunc: &[usize]) -> Self {
        assert!((1..=3).contains(&trunc.len()), "1 to 3 variables");
        let size = trunc.iter().map(|&t| t + 1).product();
        TruncSeries {
            trunc: trunc.to_vec(),
            coeffs: vec![Rational::zero(); size],
        }
    }

    pub fn one(trunc: &[usize]) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0] = Rational::one();
        s
    }

    /// Series with coefficient `f(n)` at every exponent inside the box.
    pub fn from_fn(trunc: &[usize], mut f: impl FnMut(&[usize]) -> Rational) -> Self {
        let mut s = Self::zero(trunc);
        for idx in 0..s.coeffs.len() {
            let n = s.exponent(idx);
            s.coeffs[idx] = f(&n);
        }
        s
    }

    pub fn vars(&self) -> usize {
        self.trunc.len()
    }

    pub fn trunc(&self) -> &[usize] {
        &self.trunc
    }

    fn index(&self, n: &[usize]) -> Option<usize> {
        let mut idx = 0;
        for (&e, &t) in n.iter().zip(&self.trunc).rev() {
            if e > t {
                return None;
            }
            idx = idx * (t + 1) + e;
        }
        Some(idx)
    }

    fn exponent(&self, mut idx: usize) -> Vec<usize> {
        self.trunc
            .iter()
            .map(|&t| {
                let e = idx % (t + 1);
                idx /= t + 1;
                e
            })
            .collect()
    }

    /// Coefficient of `Π T_i^{n_i}`; zero outside the box.
    pub fn get(&self, n: &[usize]) -> Rational {
        self.index(n)
            .map(|i| self.coeffs[i].clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, n: &[usize], v: Rational) {
        let i = self.index(n).expect("exponent outside truncation box");
        self.coeffs[i] = v;
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.exponent(i), c))
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        assert_eq!(self.trunc, other.trunc);
        TruncSeries {
            trunc: self.trunc.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        assert_eq!(self.trunc, other.trunc);
        TruncSeries {
            trunc: self.trunc.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> TruncSeries {
        TruncSeries {
            trunc: self.trunc.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Product truncated to the common box. Iterates only over the nonzero
    /// terms of `self`, so sparse left factors are cheap.
    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        assert_eq!(self.trunc, other.trunc);
        let mut out = TruncSeries::zero(&self.trunc);
        let other_terms: Vec<(Vec<usize>, &Rational)> = other.terms().collect();
        for (na, a) in self.terms() {
            for (nb, b) in &other_terms {
                let n: Vec<usize> = na.iter().zip(nb).map(|(x, y)| x + y).collect();
                if let Some(i) = out.index(&n) {
                    out.coeffs[i] += a * *b;
                }
            }
        }
        out
    }

    /// Evaluates the (polynomial) truncation at a rational point.
    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.vars());
        let mut acc = Rational::zero();
        for (n, c) in self.terms() {
            let mut term = c.clone();
            for (xi, &e) in x.iter().zip(&n) {
                term *= powi(xi, e as i32);
            }
            acc += term;
        }
        acc
    }

    /// Largest exponent of variable `i` with a nonzero coefficient.
    pub fn partial_degree(&self, i: usize) -> Option<usize> {
        self.terms().map(|(n, _)| n[i]).max()
    }
}

fn rho_pow(rho: &Rational, e: i64) -> Rational {
    powi(rho, e as i32)
}

/// Zeta function of P^1 over F_q: `Σ_D T^{deg D} = 1/((1-T)(1-qT))`.
pub fn zeta_p1(q: u64, trunc: usize) -> TruncSeries {
    let geo = |ratio: Rational| TruncSeries::from_fn(&[trunc], |n| powi(&ratio, n[0] as i32));
    geo(int(1)).mul(&geo(int(q as i64)))
}

/// `F_ν(ρ, T) = Σ_n ρ^{min(n_i + ν_i)} T^n`, truncated at `trunc` in each variable.
pub fn f_nu_direct(nu: &[usize], rho: &Rational, trunc: usize) -> TruncSeries {
    let box_ = vec![trunc; nu.len()];
    TruncSeries::from_fn(&box_, |n| {
        let m = n.iter().zip(nu).map(|(a, b)| a + b).min().unwrap();
        rho_pow(rho, m as i64)
    })
}

/// The prefactor `(1 - ρ Π T_i) Π (1 - T_i)` in a given box.
pub fn f_tilde_prefactor(r: usize, rho: &Rational, trunc: usize) -> TruncSeries {
    let box_ = vec![trunc; r];
    let mut out = TruncSeries::one(&box_);
    for i in 0..r {
        let mut lin = TruncSeries::one(&box_);
        let mut e = vec![0; r];
        e[i] = 1;
        if trunc >= 1 {
            lin.set(&e, int(-1));
        }
        out = lin.mul(&out);
    }
    let mut diag = TruncSeries::one(&box_);
    if trunc >= 1 {
        diag.set(&vec![1; r], -rho.clone());
    }
    diag.mul(&out)
}

/// Coefficient of `T^n` in `F̃_ν(ρ, T)` from the closed-form case analysis.
pub fn f_tilde_coefficient(nu: &[usize], rho: &Rational, n: &[usize]) -> Rational {
    let r = nu.len();
    let m = n.iter().zip(nu).map(|(a, b)| a + b).min().unwrap() as i64;
    let in_i1: Vec<bool> = n.iter().map(|&x| x >= 1).collect();
    let in_i2: Vec<bool> = n.iter().map(|&x| x >= 2).collect();
    let in_k: Vec<bool> = (0..r).map(|i| in_i1[i] && (n[i] + nu[i]) as i64 > m).collect();
    let i1_all = in_i1.iter().all(|&b| b);
    let i1_empty = !in_i1.iter().any(|&b| b);
    let i2_empty = !in_i2.iter().any(|&b| b);
    let k_empty = !in_k.iter().any(|&b| b);
    let i2_meets_k = (0..r).any(|i| in_i2[i] && in_k[i]);
    let p = |e: i64| rho_pow(rho, e);
    if !i1_all {
        if i1_empty {
            p(m)
        } else if k_empty {
            p(m) - p(m - 1)
        } else {
            Rational::zero()
        }
    } else if i2_meets_k {
        Rational::zero()
    } else if i2_empty && !k_empty {
        -p(m)
    } else if !i2_empty && k_empty {
        Rational::zero()
    } else if !i2_empty {
        p(m - 1) - p(m)
    } else {
        -p(m - 1)
    }
}

/// `F̃_ν(ρ, T)` as a polynomial with partial degrees at most `max ν + 1`.
pub fn f_tilde_closed(nu: &[usize], rho: &Rational) -> TruncSeries {
    assert!((1..=3).contains(&nu.len()));
    let bound = nu.iter().copied().max().unwrap() + 1;
    TruncSeries::from_fn(&vec![bound; nu.len()], |n| f_tilde_coefficient(nu, rho, n))
}

/// Evaluates `F̃_ν(ρ, T)` at a point without materializing the series.
pub fn f_tilde_eval(nu: &[usize], rho: &Rational, x: &[Rational]) -> Rational {
    f_tilde_closed(nu, rho).eval(x)
}

/// Whether the closed form of `F̃_ν` equals
/// `(1 - ρ Π T_i) Π (1 - T_i) · F_ν` coefficientwise in the box `[0, trunc]^r`.
pub fn f_tilde_matches_product(nu: &[usize], rho: &Rational, trunc: usize) -> bool {
    let r = nu.len();
    let product = f_tilde_prefactor(r, rho, trunc).mul(&f_nu_direct(nu, rho, trunc));
    let closed = f_tilde_closed(nu, rho);
    (0..product.coeffs.len()).all(|idx| {
        let n = product.exponent(idx);
        product.get(&n) == closed.get(&n)
    })
}

/// `(|F̃_ν(ρ, (η_i/ρ))|, (2 + max ν - min ν)^r ρ^{min ν})` for signs `η_i = ±1`.
pub fn f_tilde_sign_bound(nu: &[usize], rho: &Rational, eta: &[i8]) -> (Rational, Rational) {
    let x: Vec<Rational> = eta.iter().map(|&e| Rational::from_integer(BigInt::from(e)) / rho).collect();
    let value = f_tilde_eval(nu, rho, &x).abs();
    let (lo, hi) = (*nu.iter().min().unwrap(), *nu.iter().max().unwrap());
    let bound = powi(&int((2 + hi - lo) as i64), nu.len() as i32) * powi(rho, lo as i32);
    (value, bound)
}

/// Sum over effective divisor tuples `G` with `deg G_i = d_i` of
/// `q^{deg gcd_i(D_i + G_i)}`, by exhaustive enumeration.
pub fn gcd_sum_brute(k: &FieldCtx, d_divs: &[DivisorP1], d: &[usize]) -> Result<BigInt> {
    let r = d_divs.len();
    if !(1..=2).contains(&r) || d.len() != r {
        return Err(Error::InvalidArgument("gcd sums take one or two divisors".into()));
    }
    let total: usize = d.iter().sum();
    if total > 8 || k.q() > 3 {
        return Err(Error::Budget(format!(
            "exhaustive gcd sum limited to q ≤ 3 and total degree ≤ 8 (got q={}, {total})",
            k.q()
        )));
    }
    let max_d = d.iter().copied().max().unwrap_or(0).max(1);
    let pts: Vec<ClosedPoint> = closed_points(k, max_d).into_iter().flatten().collect();
    let lists: Vec<Vec<DivisorP1>> = d.iter().map(|&di| effective_divisors(&pts, di)).collect();
    let q = BigInt::from(k.q());
    let mut acc = BigInt::zero();
    let mut visit = |gs: &[&DivisorP1]| {
        let shifted: Vec<DivisorP1> = gs.iter().zip(d_divs).map(|(g, dd)| g.sum(dd)).collect();
        let g = shifted[1..].iter().fold(shifted[0].clone(), |acc, x| acc.gcd(x));
        acc += q.clone().pow(g.degree() as u32);
    };
    if r == 1 {
        for g in &lists[0] {
            visit(&[g]);
        }
    } else {
        for g1 in &lists[0] {
            for g2 in &lists[1] {
                visit(&[g1, g2]);
            }
        }
    }
    Ok(acc)
}

/// Euler factor `F_ν(q_v, T^{f})` in the box `trunc`.
fn euler_factor(nu: &[usize], qv: &Rational, f: usize, trunc: &[usize]) -> TruncSeries {
    TruncSeries::from_fn(trunc, |n| {
        if n.iter().any(|&e| e % f != 0) {
            return Rational::zero();
        }
        let m = n.iter().zip(nu).map(|(&e, &v)| e / f + v).min().unwrap();
        powi(qv, m as i32)
    })
}

/// The same gcd sum read off the truncated Euler product
/// `Π_v F_{(v(D_i))}(q_v, T^{deg v})` over places of degree ≤ `cutoff`
/// and every place in the support of `D`.
pub fn gcd_sum_euler(k: &FieldCtx, d_divs: &[DivisorP1], d: &[usize], cutoff: usize) -> Result<BigInt> {
    let r = d_divs.len();
    if !(1..=3).contains(&r) || d.len() != r {
        return Err(Error::InvalidArgument("gcd sums take one to three divisors".into()));
    }
    let needed = d.iter().copied().max().unwrap_or(0);
    if cutoff < needed {
        return Err(Error::Precondition(format!("cutoff {cutoff} below degree {needed}")));
    }
    let mut places: Vec<ClosedPoint> = closed_points(k, cutoff.max(1)).into_iter().flatten().collect();
    for dd in d_divs {
        for p in dd.support() {
            if !places.contains(p) {
                places.push(p.clone());
            }
        }
    }
    let q = k.q() as i64;
    let mut prod = TruncSeries::one(d);
    for p in &places {
        let f = p.degree();
        let nu: Vec<usize> = d_divs.iter().map(|dd| dd.mult(p) as usize).collect();
        let qv = powi(&int(q), f as i32);
        prod = euler_factor(&nu, &qv, f, d).mul(&prod);
    }
    let c = prod.get(d);
    if !c.is_integer() {
        return Err(Error::Internal("non-integral gcd-sum coefficient".into()));
    }
    Ok(c.to_integer())
}

/// `lim_{T→1/q} (1 - qT)^4 Z(q^2 T^3) Z(q T^2)^3` for the zeta function of P^1.
pub fn main_term_residue(q: u64) -> Rational {
    let q = int(q as i64);
    // Z(a T^e) = 1 / ((1 - a T^e)(1 - q a T^e))
    let zeta_den = |a: Rational, e: usize| {
        RatPoly::one_minus(a.clone(), e).mul(&RatPoly::one_minus(a * &q, e))
    };
    let den = zeta_den(&q * &q, 3).mul(&zeta_den(q.clone(), 2).pow(3));
    pole_limit(&RatPoly::one(), &den, &q.recip(), 4).expect("pole of order four at 1/q")
}

/// Converts a pole coefficient `C = lim_{z→α} (z - α)^k f(z)` into the
/// leading constant of `a_n ~ const · n^{k-1} α^{-n}`:
/// `const = C (-1)^k α^{-k} / (k-1)!`.
pub fn pole_to_growth_constant(c: &Rational, k: u32, alpha: &Rational) -> Rational {
    let mut out = c.clone();
    for j in 1..k {
        out /= int(j as i64);
    }
    let sign = if k.is_multiple_of(2) { int(1) } else { int(-1) };
    out * sign * powi(alpha, -(k as i32))
}

/// Least-squares estimate of `C` in `a_n ≈ n^{k-1} α_inv^n (C + Σ_{j<k} B_j n^{-j})`
/// over the terms `n ≥ 1`. Diagnostic only.
pub fn tauber_fit(coeffs: &[f64], k: u32, alpha_inv: f64) -> Result<f64> {
    let rows: Vec<(f64, f64)> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, &a)| {
            let n = n as f64;
            (n, a / (n.powi(k as i32 - 1) * alpha_inv.powf(n)))
        })
        .collect();
    let params = k.max(1) as usize;
    if rows.len() < 4 || rows.len() < params {
        return Err(Error::InvalidArgument(format!(
            "need at least max(4, {params}) tail coefficients, got {}",
            rows.len()
        )));
    }
    let a = DMatrix::from_fn(rows.len(), params, |r, c| rows[r].0.powi(-(c as i32)));
    let b = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.1));
    let svd = a.svd(true, true);
    let sol = svd
        .solve(&b, 1e-14)
        .map_err(|e| Error::Internal(format!("least squares failed: {e}")))?;
    Ok(sol[0])
}

/// `r` as a float, for reporting.
pub fn as_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `ρ` helper for tests and callers that work with small integers.
pub fn rho(n: i64) -> Rational {
    rat(n, 1)
}
