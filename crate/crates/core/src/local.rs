//! Local densities of the torsor equation over a residue field, the local
//! factors they produce after Möbius inversion, and point counts of the
//! surface over finite fields.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff_poly::{Elem, FieldCtx};
use crate::moebius::surface_table;
use crate::ratfunc::{int, powi, Rational};
use crate::series::f_tilde_eval;
use crate::surface::zero_set_allowed;

/// Largest residue field handled by the exact density computation.
pub const DENS_MAX_Q: u32 = 256;
/// Largest residue field for the exhaustive torsor point count.
pub const TORSOR_MAX_Q: u32 = 16;

fn bit(mask: u8, j: usize) -> bool {
    mask >> j & 1 == 1
}

/// For one pair `(x_i, y_i)` with the forced zeros of `mask`, the number of
/// allowed pairs with each product value, indexed by field label.
fn pair_product_histogram(k: &FieldCtx, x_forced: bool, y_forced: bool) -> Vec<u64> {
    let mut h = vec![0u64; k.q() as usize];
    let xs: Vec<Elem> = if x_forced { vec![Elem::ZERO] } else { k.elements().collect() };
    let ys: Vec<Elem> = if y_forced { vec![Elem::ZERO] } else { k.elements().collect() };
    for &x in &xs {
        for &y in &ys {
            h[k.mul(x, y).index()] += 1;
        }
    }
    h
}

/// Number of `(x0, x, y)` in `κ^7` with the coordinates flagged in `mask`
/// forced to zero and `x1 y1 + x2 y2 + x3 y3 = 0`.
///
/// Counts by convolving the product histograms of the three pairs, which
/// is exact; [`dens_count_naive`] is the plain seven-fold loop.
pub fn dens_count(k: &FieldCtx, mask: u8) -> u64 {
    let q = k.q() as usize;
    let hs: Vec<Vec<u64>> = (1..=3)
        .map(|i| pair_product_histogram(k, bit(mask, i), bit(mask, 3 + i)))
        .collect();
    let mut conv = vec![0u64; q];
    for a in 0..q {
        if hs[0][a] == 0 {
            continue;
        }
        for b in 0..q {
            if hs[1][b] == 0 {
                continue;
            }
            let s = k.add(Elem(a as u16), Elem(b as u16));
            conv[s.index()] += hs[0][a] * hs[1][b];
        }
    }
    let mut total = 0u64;
    for c in 0..q {
        let neg = k.neg(Elem(c as u16)).index();
        total += conv[neg] * hs[2][c];
    }
    let x0 = if bit(mask, 0) { 1 } else { q as u64 };
    total * x0
}

/// Seven-fold loop over `κ^7`; reference for [`dens_count`].
pub fn dens_count_naive(k: &FieldCtx, mask: u8) -> u64 {
    let range = |j: usize| -> Vec<Elem> {
        if bit(mask, j) {
            vec![Elem::ZERO]
        } else {
            k.elements().collect()
        }
    };
    let r: Vec<Vec<Elem>> = (0..7).map(range).collect();
    let mut count = 0u64;
    for _x0 in &r[0] {
        for &x1 in &r[1] {
            for &x2 in &r[2] {
                for &x3 in &r[3] {
                    for &y1 in &r[4] {
                        for &y2 in &r[5] {
                            for &y3 in &r[6] {
                                let s = k.add(k.add(k.mul(x1, y1), k.mul(x2, y2)), k.mul(x3, y3));
                                if s.is_zero() {
                                    count += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    count
}

/// `dens(n)`: the normalized solution count `#{…} / q^6` for a binary `n`
/// given as a 7-bit mask.
pub fn dens(k: &FieldCtx, mask: u8) -> Result<Rational> {
    if k.q() > DENS_MAX_Q {
        return Err(Error::Budget(format!("density loop limited to q ≤ {DENS_MAX_Q}")));
    }
    let q = int(k.q() as i64);
    Ok(Rational::from_integer(BigInt::from(dens_count(k, mask))) / powi(&q, 6))
}

fn exps(mask: u8) -> (i64, [usize; 3]) {
    let e0 = i64::from(bit(mask, 0));
    let nu = std::array::from_fn(|i| usize::from(bit(mask, 1 + i)) + usize::from(bit(mask, 4 + i)));
    (e0, nu)
}

/// `fact(n) = (1 - q^{-2})^{-1} q^{-e0-Σ(e_i+f_i)} F̃_{(e_i+f_i)}(q, q^{-1})`
/// through the closed-form coefficients of `F̃`.
pub fn fact(qv: u64, mask: u8) -> Rational {
    let q = int(qv as i64);
    let (e0, nu) = exps(mask);
    let x = q.recip();
    let ft = f_tilde_eval(&nu, &q, &[x.clone(), x.clone(), x.clone()]);
    let total: i64 = e0 + nu.iter().map(|&v| v as i64).sum::<i64>();
    let pre = int(1) - powi(&x, 2);
    ft * powi(&x, total as i32) / pre
}

/// `(1 - q^{-1})^3 q^{-e0} Σ_{n ≥ ν} q^{min n - Σ n}` evaluated exactly.
///
/// Grouping by `m = min n`, the sum is `Σ_m q^m (G(m) - G(m+1))` with
/// `G(m) = Π_i x^{max(ν_i, m)} / (1-x)^3`, `x = q^{-1}`. For `m ≥ M = max ν`
/// the terms are geometric with ratio `q x^3`, so the tail is closed.
pub fn fact_series(qv: u64, mask: u8) -> Rational {
    let q = int(qv as i64);
    let x = q.recip();
    let (e0, nu) = exps(mask);
    let one_minus_x = int(1) - &x;
    let g = |m: usize| -> Rational {
        let e: usize = nu.iter().map(|&v| v.max(m)).sum();
        powi(&x, e as i32) / powi(&one_minus_x, 3)
    };
    let big_m = *nu.iter().max().unwrap();
    let mut sum = Rational::zero();
    for m in 0..big_m {
        sum += powi(&q, m as i32) * (g(m) - g(m + 1));
    }
    let ratio = &q * powi(&x, 3);
    let tail = (int(1) - powi(&x, 3)) / powi(&one_minus_x, 3) * powi(&ratio, big_m as i32)
        / (int(1) - &ratio);
    sum += tail;
    powi(&one_minus_x, 3) * powi(&x, e0 as i32) * sum
}

/// Same sum, truncated at `bound` in each coordinate, for cross-checking
/// the closed tail.
pub fn fact_series_truncated(qv: u64, mask: u8, bound: usize) -> Rational {
    let q = int(qv as i64);
    let x = q.recip();
    let (e0, nu) = exps(mask);
    let mut sum = Rational::zero();
    for a in nu[0]..=bound {
        for b in nu[1]..=bound {
            for c in nu[2]..=bound {
                let m = a.min(b).min(c) as i32;
                sum += powi(&q, m) * powi(&x, (a + b + c) as i32);
            }
        }
    }
    powi(&(int(1) - &x), 3) * powi(&x, e0 as i32) * sum
}

/// Raw and normalized torsor point counts over a finite field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsorPointCount {
    pub q: u32,
    /// `#{x ∈ κ^7 : Σ x_i y_i = 0, zero set allowed}`.
    pub raw: u64,
    /// `raw / (q-1)^4`.
    pub points: u64,
}

/// Counts points of the surface as torsor points modulo the torus.
pub fn s_count_torsor(k: &FieldCtx) -> Result<TorsorPointCount> {
    if k.q() > TORSOR_MAX_Q {
        return Err(Error::Budget(format!("torsor loop limited to q ≤ {TORSOR_MAX_Q}")));
    }
    let els: Vec<Elem> = k.elements().collect();
    let mut raw = 0u64;
    // x0 enters only through the zero pattern: zero, or q-1 nonzero values
    for x0_zero in [true, false] {
        let weight = if x0_zero { 1 } else { k.q() as u64 - 1 };
        let base = u8::from(x0_zero);
        let mut sub = 0u64;
        for &x1 in &els {
            for &x2 in &els {
                for &x3 in &els {
                    for &y1 in &els {
                        for &y2 in &els {
                            let partial = k.add(k.mul(x1, y1), k.mul(x2, y2));
                            for &y3 in &els {
                                if !k.add(partial, k.mul(x3, y3)).is_zero() {
                                    continue;
                                }
                                let coords = [x1, x2, x3, y1, y2, y3];
                                let mut zeros = base;
                                for (j, c) in coords.iter().enumerate() {
                                    if c.is_zero() {
                                        zeros |= 1 << (j + 1);
                                    }
                                }
                                if zero_set_allowed(zeros) {
                                    sub += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
        raw += weight * sub;
    }
    let torus = (k.q() as u64 - 1).pow(4);
    if !raw.is_multiple_of(torus) {
        return Err(Error::NotDivisible {
            raw: raw as u128,
            divisor: torus as u128,
        });
    }
    Ok(TorsorPointCount {
        q: k.q(),
        raw,
        points: raw / torus,
    })
}

/// `(1 - q^{-1})^4 · points / q^2`.
pub fn local_target(qv: u64, points: u64) -> Rational {
    let q = int(qv as i64);
    powi(&(int(1) - q.recip()), 4) * int(points as i64) / powi(&q, 2)
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalReport {
    pub q: u32,
    pub mu_dens: Option<String>,
    pub mu_fact: String,
    pub target: String,
    pub points: u64,
    pub pass: bool,
}

/// Checks `Σ_n μ0(n) dens(n) = Σ_n μ0(n) fact(n) = (1-q^{-1})^4 |S(κ)| / q^2`.
/// The density sum is skipped above [`DENS_MAX_Q`]; the point count falls
/// back to `q^2 + 4q + 1` above [`TORSOR_MAX_Q`].
pub fn verify_local(k: &FieldCtx) -> Result<LocalReport> {
    let table = surface_table();
    let qv = k.q() as u64;
    let mut mu_dens = (k.q() <= DENS_MAX_Q).then(Rational::zero);
    let mut mu_fact = Rational::zero();
    for mask in 0u8..128 {
        let w = table.mu0_mask(mask);
        if w == 0 {
            continue;
        }
        if let Some(acc) = mu_dens.as_mut() {
            *acc += dens(k, mask)? * int(w);
        }
        mu_fact += fact(qv, mask) * int(w);
    }
    let points = if k.q() <= TORSOR_MAX_Q {
        s_count_torsor(k)?.points
    } else {
        qv * qv + 4 * qv + 1
    };
    let target = local_target(qv, points);
    let pass = mu_fact == target && mu_dens.as_ref().is_none_or(|d| *d == target);
    Ok(LocalReport {
        q: k.q(),
        mu_dens: mu_dens.map(|d| d.to_string()),
        mu_fact: mu_fact.to_string(),
        target: target.to_string(),
        points,
        pass,
    })
}

/// `1 + q^{-2} - q^{-3}`: the density with no forced zeros.
pub fn dens_unconstrained(qv: u64) -> Rational {
    let x = int(qv as i64).recip();
    Rational::one() + powi(&x, 2) - powi(&x, 3)
}
