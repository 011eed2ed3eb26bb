//! Morphism count through the universal torsor: 7-tuples of nonzero forms
//! of degrees `lift_degrees(d)` satisfying the Cox relation and the chart
//! condition at every point, modulo the torus `(F_q^×)^4`.
//!
//! For fixed `(s1, s2, s3)` the `t`-solutions form the kernel of a linear
//! map. The kernel is walked by a modular Gray code over F_p, so each step
//! adds one basis vector. Alongside the `t`-coordinates the walk carries
//! linear residue functionals: `t_j` at each point where some `s_i`
//! (`i ≠ j`) vanishes, and `t_j` at each point of degree `≤ d0`. The
//! former decide primitivity against the `s_i`; the latter determine
//! which points `s0` must avoid, and the number of such `s0` depends only
//! on that set of points.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{constant_maps, divide_torus};
use crate::error::{Error, Result};
use crate::ff_poly::{closed_points, divisor_of, BinaryForm, ClosedPoint, Elem, FieldCtx, FormSpace, Poly};
use crate::linalg::Matrix;
use crate::sections::multiplication_matrix;
use crate::surface::{degree_vectors, is_primitive, lift_degrees, DivTuple7};

/// Small points beyond this many cannot be tracked in a `u64` mask.
const MAX_SMALL_POINTS: usize = 64;

/// `N(n)` for `0 ≤ n ≤ n_max`.
pub fn count_torsor(k: &FieldCtx, n_max: u32) -> Result<Vec<u128>> {
    (0..=n_max).map(|n| count_torsor_level(k, n)).collect()
}

/// `N(n)`: the raw tuple count divided by `(q-1)^4`.
pub fn count_torsor_level(k: &FieldCtx, n: u32) -> Result<u128> {
    divide_torus(raw_count_level(k, n)?, k.q() as u64, 4)
}

/// Number of torsor tuples over all `d` with anticanonical degree `n`.
pub fn raw_count_level(k: &FieldCtx, n: u32) -> Result<u128> {
    degree_vectors(n).into_iter().map(|d| raw_count(k, d)).sum()
}

/// A nonzero form with the closed points where it vanishes.
struct Section {
    form: BinaryForm,
    zeros: Vec<ClosedPoint>,
}

fn sections_of_degree(k: &FieldCtx, deg: u32) -> Result<Vec<Section>> {
    FormSpace::new(k, deg as usize)
        .iter(true)
        .map(|form| {
            let zeros = divisor_of(k, &form)?.support().cloned().collect();
            Ok(Section { form, zeros })
        })
        .collect()
}

fn coprime(a: &Section, b: &Section) -> bool {
    !a.zeros.iter().any(|p| b.zeros.contains(p))
}

/// Raw torsor tuple count at a fixed degree vector.
pub fn raw_count(k: &FieldCtx, d: [u32; 4]) -> Result<u128> {
    let small: Vec<ClosedPoint> = if d[0] == 0 {
        Vec::new()
    } else {
        closed_points(k, d[0] as usize).into_iter().flatten().collect()
    };
    if small.len() > MAX_SMALL_POINTS {
        return Err(Error::Budget(format!("{} points of degree ≤ {} exceed the mask width", small.len(), d[0])));
    }
    let secs: Vec<Vec<Section>> = (1..=3).map(|i| sections_of_degree(k, d[i])).collect::<Result<_>>()?;
    let avoid = AvoidCounter::new(k.q() as u64, d[0], &small);
    let jobs: Vec<(usize, usize)> = (0..secs[0].len()).flat_map(|a| (0..secs[1].len()).map(move |b| (a, b))).collect();
    let partial: Result<Vec<u128>> = jobs
        .par_iter()
        .map(|&(a, b)| {
            let (s1, s2) = (&secs[0][a], &secs[1][b]);
            if !coprime(s1, s2) {
                return Ok(0);
            }
            let mut memo = HashMap::new();
            let mut acc = 0u128;
            for s3 in secs[2].iter().filter(|s3| coprime(s1, s3) && coprime(s2, s3)) {
                acc += count_for_s(k, d, [s1, s2, s3], &small, &avoid, &mut memo)?;
            }
            Ok(acc)
        })
        .collect();
    Ok(partial?.into_iter().sum())
}

/// Counts nonzero forms of degree `d0` vanishing at none of a set of
/// small points: `(q-1) [T^{d0}] Z(T) Π_v (1 - T^{deg v})`.
struct AvoidCounter {
    q: u128,
    d0: usize,
    degrees: Vec<usize>,
}

impl AvoidCounter {
    fn new(q: u64, d0: u32, small: &[ClosedPoint]) -> Self {
        AvoidCounter {
            q: q as u128,
            d0: d0 as usize,
            degrees: small.iter().map(ClosedPoint::degree).collect(),
        }
    }

    fn count(&self, mask: u64) -> u128 {
        // coefficients of Π (1 - T^deg) as signed integers up to T^{d0}
        let mut poly = vec![0i128; self.d0 + 1];
        poly[0] = 1;
        for (i, &deg) in self.degrees.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for e in (deg..=self.d0).rev() {
                    poly[e] -= poly[e - deg];
                }
            }
        }
        // effective divisors of degree m: (q^{m+1} - 1)/(q - 1)
        let z = |m: usize| -> i128 { ((self.q.pow(m as u32 + 1) - 1) / (self.q - 1)) as i128 };
        let divisors: i128 = (0..=self.d0).map(|j| poly[j] * z(self.d0 - j)).sum();
        (self.q - 1) * u128::try_from(divisors).expect("divisor count is nonnegative")
    }
}

/// Coefficient vectors of `X^c mod P` for `c ≤ max_exp`, or the single
/// functional "coefficient of `X^f`" at infinity.
fn residue_rows(k: &FieldCtx, p: &ClosedPoint, f: usize) -> Vec<Vec<Elem>> {
    match p {
        ClosedPoint::Infinity => {
            let mut row = vec![Elem::ZERO; f + 1];
            row[f] = Elem::ONE;
            vec![row]
        }
        ClosedPoint::Finite(m) => {
            let r = m.degree().unwrap();
            let mut rows = vec![vec![Elem::ZERO; f + 1]; r];
            let mut xc = Poly::one();
            for c in 0..=f {
                for (j, row) in rows.iter_mut().enumerate() {
                    row[c] = xc.coeff(j);
                }
                xc = xc.mul(k, &Poly::x()).rem(k, m);
            }
            rows
        }
    }
}

/// Linear functionals on `t = (t1, t2, t3)` evaluated along the walk,
/// grouped into blocks that are tested for vanishing.
struct Functionals {
    rows: Matrix,
    /// `t`-blocks and coprimality residues: each must be nonzero.
    required: Vec<(usize, usize)>,
    /// Per small point, the residue blocks of `t1, t2, t3`.
    small: Vec<[(usize, usize); 3]>,
}

fn functionals(k: &FieldCtx, f: [usize; 3], s: [&Section; 3], small: &[ClosedPoint]) -> Functionals {
    let offsets = [0, f[0] + 1, f[0] + f[1] + 2];
    let width = f.iter().map(|x| x + 1).sum::<usize>();
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    let mut required = Vec::new();
    let push_block = |rows: &mut Vec<Vec<Elem>>, j: usize, local: Vec<Vec<Elem>>| -> (usize, usize) {
        let start = rows.len();
        for l in local {
            let mut row = vec![Elem::ZERO; width];
            row[offsets[j]..offsets[j] + f[j] + 1].copy_from_slice(&l);
            rows.push(row);
        }
        (start, rows.len())
    };
    for j in 0..3 {
        let ident: Vec<Vec<Elem>> = (0..=f[j])
            .map(|c| {
                let mut r = vec![Elem::ZERO; f[j] + 1];
                r[c] = Elem::ONE;
                r
            })
            .collect();
        required.push(push_block(&mut rows, j, ident));
    }
    for j in 0..3 {
        let mut pts: Vec<&ClosedPoint> = (0..3).filter(|&i| i != j).flat_map(|i| s[i].zeros.iter()).collect();
        pts.sort();
        pts.dedup();
        for p in pts {
            let block = push_block(&mut rows, j, residue_rows(k, p, f[j]));
            required.push(block);
        }
    }
    let small_blocks = small
        .iter()
        .map(|p| std::array::from_fn(|j| push_block(&mut rows, j, residue_rows(k, p, f[j]))))
        .collect();
    let mut m = Matrix::zeros(rows.len(), width);
    for (r, row) in rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            m.set(r, c, v);
        }
    }
    Functionals {
        rows: m,
        required,
        small: small_blocks,
    }
}

/// Vectors over F_p stored digit by digit, with a packed variant for p = 2.
trait Lanes: Clone {
    type Probe;
    fn from_digits(d: &[u8]) -> Self;
    fn add_assign(&mut self, other: &Self, p: u8);
    fn probe(lo: usize, hi: usize) -> Self::Probe;
    fn any(&self, probe: &Self::Probe) -> bool;
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Lanes for Bits {
    type Probe = Vec<(usize, u64)>;

    fn from_digits(d: &[u8]) -> Self {
        let mut w = vec![0u64; d.len().div_ceil(64)];
        for (i, &x) in d.iter().enumerate() {
            w[i / 64] |= u64::from(x) << (i % 64);
        }
        Bits(w)
    }

    #[inline]
    fn add_assign(&mut self, other: &Self, _p: u8) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }

    fn probe(lo: usize, hi: usize) -> Self::Probe {
        let mut out: Vec<(usize, u64)> = Vec::new();
        for i in lo..hi {
            match out.last_mut() {
                Some((w, m)) if *w == i / 64 => *m |= 1 << (i % 64),
                _ => out.push((i / 64, 1 << (i % 64))),
            }
        }
        out
    }

    #[inline]
    fn any(&self, probe: &Self::Probe) -> bool {
        probe.iter().any(|&(w, m)| self.0[w] & m != 0)
    }
}

#[derive(Clone)]
struct Digits(Vec<u8>);

impl Lanes for Digits {
    type Probe = (usize, usize);

    fn from_digits(d: &[u8]) -> Self {
        Digits(d.to_vec())
    }

    #[inline]
    fn add_assign(&mut self, other: &Self, p: u8) {
        for (a, &b) in self.0.iter_mut().zip(&other.0) {
            let s = *a + b;
            *a = if s >= p { s - p } else { s };
        }
    }

    fn probe(lo: usize, hi: usize) -> Self::Probe {
        (lo, hi)
    }

    #[inline]
    fn any(&self, probe: &Self::Probe) -> bool {
        self.0[probe.0..probe.1].iter().any(|&x| x != 0)
    }
}

/// Base-p digits of each entry, `f` digits per entry.
fn to_digits(k: &FieldCtx, v: &[Elem]) -> Vec<u8> {
    let (p, f) = (k.p(), k.degree());
    let mut out = Vec::with_capacity(v.len() * f as usize);
    for e in v {
        let mut x = e.0 as u32;
        for _ in 0..f {
            out.push((x % p) as u8);
            x /= p;
        }
    }
    out
}

/// Number of `(s0, t)` completing a pairwise coprime `s`-triple to a
/// primitive torsor tuple.
fn count_for_s(
    k: &FieldCtx,
    d: [u32; 4],
    s: [&Section; 3],
    small: &[ClosedPoint],
    avoid: &AvoidCounter,
    memo: &mut HashMap<u64, u128>,
) -> Result<u128> {
    let lift = lift_degrees(d);
    let f = [lift[4] as usize, lift[5] as usize, lift[6] as usize];
    let total_deg = (d.iter().sum::<u32>()) as i64;
    let m = multiplication_matrix(&[&s[0].form, &s[1].form, &s[2].form], total_deg);
    let basis = m.nullspace(k);
    let fun = functionals(k, f, s, small);
    // F_p basis {ω^m b}; ω generates F_q over F_p
    let omega = k.generator_over_prime();
    let mut fp_basis: Vec<Vec<u8>> = Vec::new();
    for b in &basis {
        let mut scaled = b.clone();
        for _ in 0..k.degree() {
            fp_basis.push(to_digits(k, &fun.rows.mul_vec(k, &scaled)));
            for x in scaled.iter_mut() {
                *x = k.mul(*x, omega);
            }
        }
    }
    let fdeg = k.degree() as usize;
    let scale = |(lo, hi): (usize, usize)| (lo * fdeg, hi * fdeg);
    if k.p() == 2 {
        walk::<Bits>(k, &fp_basis, &fun, scale, avoid, memo)
    } else {
        walk::<Digits>(k, &fp_basis, &fun, scale, avoid, memo)
    }
}

fn walk<L: Lanes>(
    k: &FieldCtx,
    basis: &[Vec<u8>],
    fun: &Functionals,
    scale: impl Fn((usize, usize)) -> (usize, usize),
    avoid: &AvoidCounter,
    memo: &mut HashMap<u64, u128>,
) -> Result<u128> {
    let p = k.p() as u8;
    let len = fun.rows.rows() * k.degree() as usize;
    let vecs: Vec<L> = basis.iter().map(|b| L::from_digits(b)).collect();
    let required: Vec<L::Probe> = fun.required.iter().map(|&b| { let (lo, hi) = scale(b); L::probe(lo, hi) }).collect();
    let small: Vec<[L::Probe; 3]> = fun
        .small
        .iter()
        .map(|blocks| blocks.map(|b| { let (lo, hi) = scale(b); L::probe(lo, hi) }))
        .collect();
    let total = (p as u128)
        .checked_pow(vecs.len() as u32)
        .filter(|&t| t <= 1 << 40)
        .ok_or_else(|| Error::Budget(format!("kernel of F_p-dimension {} too large", vecs.len())))?;
    let mut state = L::from_digits(&vec![0u8; len]);
    let mut acc = 0u128;
    let mut i: u128 = 0;
    loop {
        if required.iter().all(|pr| state.any(pr)) {
            let mut mask = 0u64;
            for (v, blocks) in small.iter().enumerate() {
                if blocks.iter().any(|pr| !state.any(pr)) {
                    mask |= 1 << v;
                }
            }
            acc += *memo.entry(mask).or_insert_with(|| avoid.count(mask));
        }
        i += 1;
        if i == total {
            break;
        }
        // the digit that changes is the p-adic valuation of i
        let mut j = 0;
        let mut r = i;
        while r.is_multiple_of(p as u128) {
            r /= p as u128;
            j += 1;
        }
        state.add_assign(&vecs[j], p);
    }
    Ok(acc)
}

/// Reference count by exhaustive enumeration of all 7-tuples, testing the
/// relation and primitivity through divisors. Returns `N(n)`.
pub fn count_torsor_naive(k: &FieldCtx, n: u32) -> Result<u128> {
    let mut raw = 0u128;
    for d in degree_vectors(n) {
        let lift = lift_degrees(d);
        let size: u128 = lift.iter().map(|&e| (k.q() as u128).pow(e + 1)).product();
        if size > 1 << 26 {
            return Err(Error::Budget(format!("naive enumeration of {size} tuples at d = {d:?}")));
        }
        let spaces: Vec<Vec<(BinaryForm, crate::ff_poly::DivisorP1)>> = lift
            .iter()
            .map(|&e| {
                FormSpace::new(k, e as usize)
                    .iter(true)
                    .map(|f| {
                        let dv = divisor_of(k, &f)?;
                        Ok((f, dv))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let total_deg = d.iter().sum::<u32>() as usize;
        for s1 in &spaces[1] {
            for s2 in &spaces[2] {
                for s3 in &spaces[3] {
                    for t1 in &spaces[4] {
                        let a = s1.0.mul(k, &t1.0);
                        for t2 in &spaces[5] {
                            let b = a.add(k, &s2.0.mul(k, &t2.0));
                            for t3 in &spaces[6] {
                                let c = b.add(k, &s3.0.mul(k, &t3.0));
                                debug_assert_eq!(c.degree(), total_deg);
                                if !c.is_zero() {
                                    continue;
                                }
                                for s0 in &spaces[0] {
                                    let tuple = DivTuple7([
                                        s0.1.clone(),
                                        s1.1.clone(),
                                        s2.1.clone(),
                                        s3.1.clone(),
                                        t1.1.clone(),
                                        t2.1.clone(),
                                        t3.1.clone(),
                                    ]);
                                    if is_primitive(&tuple) {
                                        raw += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    divide_torus(raw, k.q() as u64, 4)
}

/// `N(0) = (q-1)(q-2)`, the number of points of the open part.
pub fn expected_level_zero(q: u64) -> u128 {
    constant_maps(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> FieldCtx {
        FieldCtx::with_order(q).unwrap()
    }

    #[test]
    fn level_zero_and_one() {
        for q in [2u32, 3, 4, 5] {
            let k = f(q);
            assert_eq!(count_torsor_level(&k, 0).unwrap(), expected_level_zero(q as u64));
            assert_eq!(count_torsor_level(&k, 1).unwrap(), 0);
        }
        assert_eq!(raw_count_level(&f(3), 0).unwrap(), 32);
    }

    #[test]
    fn avoid_counter_matches_enumeration() {
        for q in [2u32, 3] {
            let k = f(q);
            for d0 in 1..=3u32 {
                let small: Vec<ClosedPoint> = closed_points(&k, d0 as usize).into_iter().flatten().collect();
                let avoid = AvoidCounter::new(q as u64, d0, &small);
                let forms: Vec<(BinaryForm, Vec<ClosedPoint>)> = FormSpace::new(&k, d0 as usize)
                    .iter(true)
                    .map(|f| {
                        let z = divisor_of(&k, &f).unwrap().support().cloned().collect();
                        (f, z)
                    })
                    .collect();
                for mask in [0u64, 1, 0b101, 0b110, (1 << small.len()) - 1] {
                    let chosen: Vec<&ClosedPoint> = (0..small.len()).filter(|i| mask >> i & 1 == 1).map(|i| &small[i]).collect();
                    let brute = forms.iter().filter(|(_, z)| !z.iter().any(|p| chosen.contains(&p))).count();
                    assert_eq!(avoid.count(mask), brute as u128, "q={q} d0={d0} mask={mask:b}");
                }
            }
        }
    }

    #[test]
    fn residues_match_evaluation() {
        let k = f(3);
        let pts: Vec<ClosedPoint> = closed_points(&k, 2).into_iter().flatten().collect();
        for form in FormSpace::new(&k, 3).iter(true).step_by(7) {
            for p in &pts {
                let rows = residue_rows(&k, p, 3);
                let vanishes = rows.iter().all(|r| {
                    r.iter().zip(form.coeffs()).fold(Elem::ZERO, |acc, (&a, &b)| k.add(acc, k.mul(a, b))).is_zero()
                });
                assert_eq!(vanishes, p.order_of(&k, &form) > 0);
            }
        }
    }

    #[test]
    fn fast_matches_naive() {
        for (q, n_max) in [(2u32, 7u32), (3, 4), (4, 3)] {
            let k = f(q);
            for n in 0..=n_max {
                assert_eq!(count_torsor_level(&k, n).unwrap(), count_torsor_naive(&k, n).unwrap(), "q={q} n={n}");
            }
        }
    }
}
