//! Linear algebra of section spaces on the projective line: kernels of
//! `(t_i) ↦ Σ a_i t_i` and the counts of torsor sections built from them.
//!
//! A section space of negative degree is the zero space: it has exactly one
//! element, the zero section.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff_poly::{BinaryForm, Elem, FieldCtx, FormSpace};
use crate::linalg::Matrix;
use crate::surface::{phi_degrees, psi_degrees, DivTuple7};

/// Upper bound on the number of `s`-triples visited by one count.
pub const S_TUPLE_BUDGET: u128 = 1 << 24;
/// Upper bound on the size of a `t`-space enumerated element by element.
pub const T_SPACE_BUDGET: u128 = 1 << 20;

/// Matrix of `(t_i) ↦ Σ a_i t_i` into forms of degree `delta`, where `t_i`
/// has degree `delta - deg a_i`. Factors with negative `t`-degree
/// contribute no columns.
pub fn multiplication_matrix(a: &[&BinaryForm], delta: i64) -> Matrix {
    let rows = (delta + 1).max(0) as usize;
    let widths: Vec<usize> = a.iter().map(|ai| t_len(delta - ai.degree() as i64)).collect();
    let mut m = Matrix::zeros(rows, widths.iter().sum());
    let mut col = 0;
    for (ai, &w) in a.iter().zip(&widths) {
        for shift in 0..w {
            for (e, &c) in ai.coeffs().iter().enumerate() {
                m.set(e + shift, col, c);
            }
            col += 1;
        }
    }
    m
}

/// Dimension of the space of forms of degree `deg` (zero when negative).
pub fn t_len(deg: i64) -> usize {
    (deg + 1).max(0) as usize
}

/// Kernel dimension of `(t_i) ↦ Σ a_i t_i` by row reduction.
pub fn kernel_dim(k: &FieldCtx, a: &[&BinaryForm], delta: i64) -> usize {
    let m = multiplication_matrix(a, delta);
    m.cols() - m.rank(k)
}

/// Kernel dimension of `(t1, t2) ↦ s1 t1 + s2 t2` with `deg t_i = delta - deg s_i`.
pub fn kernel_dim2(k: &FieldCtx, s1: &BinaryForm, s2: &BinaryForm, delta: i64) -> Result<usize> {
    nonzero(&[s1, s2])?;
    Ok(kernel_dim(k, &[s1, s2], delta))
}

/// `max(0, 1 + delta - deg s1 - deg s2 + deg gcd(s1, s2))`: the kernel
/// is `u ↦ (u s2/g, -u s1/g)` with `u` of that degree minus one.
pub fn kernel_dim2_formula(k: &FieldCtx, s1: &BinaryForm, s2: &BinaryForm, delta: i64) -> usize {
    let g = s1.gcd_degree(k, s2) as i64;
    (1 + delta - s1.degree() as i64 - s2.degree() as i64 + g).max(0) as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Kernel3 {
    pub dim: usize,
    /// `2(delta + 1) - Σ deg s_i + deg gcd(s_i)`.
    pub formula: i64,
    /// `Some(dim == formula)` when `delta ≥ deg s1 + deg s2 - 1` and
    /// `delta ≥ deg s2 + deg s3 - 1`; `None` otherwise.
    pub formula_check: Option<bool>,
}

/// Kernel dimension of `(t1, t2, t3) ↦ Σ s_i t_i` and its comparison with
/// the closed formula.
pub fn kernel_dim3(k: &FieldCtx, s1: &BinaryForm, s2: &BinaryForm, s3: &BinaryForm, delta: i64) -> Result<Kernel3> {
    nonzero(&[s1, s2, s3])?;
    let dim = kernel_dim(k, &[s1, s2, s3], delta);
    let deg = [s1, s2, s3].map(|s| s.degree() as i64);
    let g = s1.gcd(k, s2).gcd(k, s3).degree() as i64;
    let formula = 2 * (delta + 1) - deg.iter().sum::<i64>() + g;
    let hyp = delta >= deg[0] + deg[1] - 1 && delta >= deg[1] + deg[2] - 1;
    Ok(Kernel3 {
        dim,
        formula,
        formula_check: hyp.then_some(dim as i64 == formula),
    })
}

/// Number of `(t1, t2, t3)` in the kernel of `Σ s_i t_i` with `t3 ≠ 0`.
pub fn kernel3_t3_nonzero(k: &FieldCtx, s: [&BinaryForm; 3], delta: i64) -> u128 {
    let q = k.q() as u128;
    let all = q.pow(kernel_dim(k, &s, delta) as u32);
    let t3_zero = q.pow(kernel_dim(k, &s[..2], delta) as u32);
    all - t3_zero
}

/// Bound on the same count without hypotheses:
/// `q^{2+2δ-Σ deg s_i+h} + q^{1+δ-deg s3}` with `h = deg gcd(s1, s2, s3)`.
///
/// Dividing the three forms by their common factor lowers `δ` and each
/// `deg s_i` by `h`, which raises `2+2δ-Σ deg s_i` by `h`; without the `h`
/// the first term fails whenever the forms share a factor.
pub fn kernel3_t3_bound_general(k: &FieldCtx, s: [&BinaryForm; 3], delta: i64) -> u128 {
    let q = k.q() as u128;
    let second = q.pow((1 + delta - s[2].degree() as i64).max(0) as u32);
    first_term(k, s, delta) + second
}

/// Bound `q^{2+2δ-Σ deg s_i+h}`, valid when `δ ≥ deg s1 + deg s2 - 1`.
pub fn kernel3_t3_bound(k: &FieldCtx, s: [&BinaryForm; 3], delta: i64) -> Option<u128> {
    (delta >= s[0].degree() as i64 + s[1].degree() as i64 - 1).then(|| first_term(k, s, delta))
}

/// `q^{2+2δ-Σ deg s_i+h}`, or 0 when the exponent is negative (the
/// count is then 0 as well).
fn first_term(k: &FieldCtx, s: [&BinaryForm; 3], delta: i64) -> u128 {
    let h = s[0].gcd(k, s[1]).gcd(k, s[2]).degree() as i64;
    let e = 2 + 2 * delta - s.iter().map(|f| f.degree() as i64).sum::<i64>() + h;
    if e < 0 {
        0
    } else {
        (k.q() as u128).pow(e as u32)
    }
}

fn nonzero(forms: &[&BinaryForm]) -> Result<()> {
    if forms.iter().any(|f| f.is_zero()) {
        return Err(Error::ZeroForm);
    }
    Ok(())
}

/// Which member of the section-count family to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    /// All `s_i` and `t_i` nonzero.
    Full,
    /// `t_i` may vanish.
    Zero0,
    /// `t_k` omitted, relation over `i ≠ k`, remaining `t_i` may vanish.
    Drop(usize),
    /// Product of the nonzero `s`-space sizes.
    Prod4,
}

/// How to count the `t`-solutions for a fixed `s`-triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Solver {
    /// Enumerate every `t`-tuple and test the relation.
    Brute,
    /// Enumerate the kernel from a nullspace basis and filter.
    Kernel,
    /// Combine kernel dimensions by inclusion–exclusion over vanishing `t_i`.
    Dimensions,
}

/// Data shared by all counts at fixed `(d, E)`: the `s`-degrees, the
/// products `ê(E_i) ê(F_i)` and the target degree `δ`.
#[derive(Clone, Debug)]
pub struct SectionProblem {
    pub d: [u32; 4],
    pub e_degrees: [i64; 7],
    pub twist: [BinaryForm; 3],
    pub delta: i64,
}

impl SectionProblem {
    pub fn new(k: &FieldCtx, d: [u32; 4], e: &DivTuple7) -> Self {
        let twist = std::array::from_fn(|i| e.0[1 + i].canonical_section(k).mul(k, &e.0[4 + i].canonical_section(k)));
        let e_degrees = e.degrees();
        let delta = d.iter().map(|&x| x as i64).sum::<i64>() + e_degrees[..4].iter().sum::<i64>();
        SectionProblem {
            d,
            e_degrees,
            twist,
            delta,
        }
    }

    pub fn psi(&self, i: usize) -> i64 {
        psi_degrees(i, self.d, &self.e_degrees)
    }

    pub fn phi(&self, i: usize) -> i64 {
        phi_degrees(i, self.d, &self.e_degrees)
    }

    /// `|H*_{d_i}| = q^{d_i + 1} - 1`.
    pub fn nonzero_sections(&self, q: u64, i: usize) -> u128 {
        (q as u128).pow(self.d[i] + 1) - 1
    }

    fn s_tuples(&self, q: u64) -> Result<u128> {
        let n: u128 = (1..=3).map(|i| self.nonzero_sections(q, i)).product();
        if n > S_TUPLE_BUDGET {
            return Err(Error::Budget(format!("{n} s-triples exceed the budget {S_TUPLE_BUDGET}")));
        }
        Ok(n)
    }

    /// Visits every nonzero `s`-triple with the twisted coefficients
    /// `a_i = s_i ê(E_i) ê(F_i)`.
    fn for_each_s(&self, k: &FieldCtx, mut f: impl FnMut([&BinaryForm; 3], [&BinaryForm; 3]) -> Result<()>) -> Result<()> {
        self.s_tuples(k.q() as u64)?;
        let spaces = [1, 2, 3].map(|i| FormSpace::new(k, self.d[i] as usize));
        for s1 in spaces[0].iter(true) {
            let a1 = s1.mul(k, &self.twist[0]);
            for s2 in spaces[1].iter(true) {
                let a2 = s2.mul(k, &self.twist[1]);
                for s3 in spaces[2].iter(true) {
                    let a3 = s3.mul(k, &self.twist[2]);
                    f([&s1, &s2, &s3], [&a1, &a2, &a3])?;
                }
            }
        }
        Ok(())
    }
}

/// The section count `N_S` and its variants; `H*_{d0}` contributes a factor.
pub fn count_ns(k: &FieldCtx, d: [u32; 4], e: &DivTuple7, variant: Variant, solver: Solver) -> Result<u128> {
    let pb = SectionProblem::new(k, d, e);
    let q = k.q() as u64;
    let s0 = pb.nonzero_sections(q, 0);
    if variant == Variant::Prod4 {
        return Ok(s0 * pb.s_tuples(q)?);
    }
    if let Variant::Drop(kk) = variant {
        if !(1..=3).contains(&kk) {
            return Err(Error::InvalidArgument(format!("dropped index {kk} not in 1..=3")));
        }
    }
    let mut total = 0u128;
    pb.for_each_s(k, |_, a| {
        total += t_solutions(k, &a, pb.delta, variant, solver)?;
        Ok(())
    })?;
    Ok(s0 * total)
}

/// Number of admissible `t` for fixed twisted coefficients `a`.
pub fn t_solutions(k: &FieldCtx, a: &[&BinaryForm; 3], delta: i64, variant: Variant, solver: Solver) -> Result<u128> {
    let active: Vec<usize> = match variant {
        Variant::Drop(kk) => (0..3).filter(|&i| i != kk - 1).collect(),
        _ => vec![0, 1, 2],
    };
    let need_nonzero = variant == Variant::Full;
    let coeffs: Vec<&BinaryForm> = active.iter().map(|&i| a[i]).collect();
    match solver {
        Solver::Dimensions => {
            let q = k.q() as u128;
            let size = |c: &[&BinaryForm]| q.pow(kernel_dim(k, c, delta) as u32);
            let all = size(&coeffs);
            if !need_nonzero {
                return Ok(all);
            }
            // t_i = t_j = 0 forces the last t to 0 since a ≠ 0
            let pairs: u128 = (0..3)
                .map(|skip| {
                    let c: Vec<&BinaryForm> = (0..3).filter(|&i| i != skip).map(|i| coeffs[i]).collect();
                    size(&c)
                })
                .sum();
            Ok(all + 2 - pairs)
        }
        Solver::Kernel => {
            let m = multiplication_matrix(&coeffs, delta);
            let basis = m.nullspace(k);
            let widths: Vec<usize> = coeffs.iter().map(|c| t_len(delta - c.degree() as i64)).collect();
            let mut count = 0u128;
            for_each_combination(k, &basis, m.cols(), |v| {
                if !need_nonzero || blocks_nonzero(v, &widths) {
                    count += 1;
                }
            })?;
            Ok(count)
        }
        Solver::Brute => {
            let widths: Vec<usize> = coeffs.iter().map(|c| t_len(delta - c.degree() as i64)).collect();
            let cols: usize = widths.iter().sum();
            let q = k.q() as u128;
            let size = q.checked_pow(cols as u32).filter(|&n| n <= T_SPACE_BUDGET);
            let size = size.ok_or_else(|| Error::Budget(format!("t-space of dimension {cols} too large to enumerate")))?;
            let m = multiplication_matrix(&coeffs, delta);
            let mut v = vec![Elem::ZERO; cols];
            let mut count = 0u128;
            for idx in 0..size {
                let mut rest = idx;
                for x in v.iter_mut() {
                    *x = Elem((rest % q) as u16);
                    rest /= q;
                }
                if need_nonzero && !blocks_nonzero(&v, &widths) {
                    continue;
                }
                if m.mul_vec(k, &v).iter().all(|c| c.is_zero()) {
                    count += 1;
                }
            }
            Ok(count)
        }
    }
}

fn blocks_nonzero(v: &[Elem], widths: &[usize]) -> bool {
    let mut start = 0;
    widths.iter().all(|&w| {
        let ok = v[start..start + w].iter().any(|c| !c.is_zero());
        start += w;
        ok
    })
}

/// Calls `f` on every F_q-combination of `basis`.
fn for_each_combination(k: &FieldCtx, basis: &[Vec<Elem>], len: usize, mut f: impl FnMut(&[Elem])) -> Result<()> {
    let q = k.q() as u128;
    let size = q
        .checked_pow(basis.len() as u32)
        .filter(|&n| n <= T_SPACE_BUDGET)
        .ok_or_else(|| Error::Budget(format!("kernel of dimension {} too large to enumerate", basis.len())))?;
    let mut digits = vec![0u32; basis.len()];
    let mut v = vec![Elem::ZERO; len];
    for idx in 0..size {
        let mut rest = idx;
        for dgt in digits.iter_mut() {
            *dgt = (rest % q) as u32;
            rest /= q;
        }
        v.fill(Elem::ZERO);
        for (b, &c) in basis.iter().zip(&digits) {
            if c == 0 {
                continue;
            }
            let c = k.elem(c);
            for (x, &y) in v.iter_mut().zip(b) {
                *x = k.add(*x, k.mul(c, y));
            }
        }
        f(&v);
    }
    Ok(())
}

/// Closed form of the `Zero0` count, valid when every `ψ_i ≥ 0` and two
/// distinct `φ_j ≥ -1`:
/// `|H*_{d0}| q^{2+2d0+Σd_i+2deg E0+Σdeg E_i-Σdeg F_i} Σ_s q^{deg gcd(div s_i + E_i + F_i)}`.
pub fn count_ns0_closed(k: &FieldCtx, d: [u32; 4], e: &DivTuple7) -> Result<u128> {
    let pb = SectionProblem::new(k, d, e);
    if let Some(i) = (1..=3).find(|&i| pb.psi(i) < 0) {
        return Err(Error::Precondition(format!("psi_{i} = {} < 0", pb.psi(i))));
    }
    if (1..=3).filter(|&i| pb.phi(i) >= -1).count() < 2 {
        return Err(Error::Precondition("fewer than two phi_j ≥ -1".into()));
    }
    let q = k.q() as u128;
    let ed = &pb.e_degrees;
    let exp = 2 + 2 * d[0] as i64 + d[1..].iter().map(|&x| x as i64).sum::<i64>() + 2 * ed[0] + ed[1..4].iter().sum::<i64>()
        - ed[4..].iter().sum::<i64>();
    let mut gcd_sum = 0u128;
    pb.for_each_s(k, |_, a| {
        gcd_sum += q.pow(a[0].gcd(k, a[1]).gcd(k, a[2]).degree() as u32);
        Ok(())
    })?;
    let base = pb.nonzero_sections(q as u64, 0) * gcd_sum;
    // exp can be negative only through large F_i; then the sum carries the deficit
    if exp >= 0 {
        Ok(base * q.pow(exp as u32))
    } else {
        let den = q.pow((-exp) as u32);
        if !base.is_multiple_of(den) {
            return Err(Error::NotDivisible { raw: base, divisor: den });
        }
        Ok(base / den)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub count: u128,
    pub bound: u128,
    pub holds: bool,
}

/// `N_{S,1} ≤ q^{5+2d0+2d1+2d2+d3+deg E0+deg E1+deg E2-deg F3}` for `ψ ≥ 0`.
pub fn bound_ns1(k: &FieldCtx, d: [u32; 4], e: &DivTuple7) -> Result<BoundCheck> {
    let pb = SectionProblem::new(k, d, e);
    if let Some(i) = (1..=3).find(|&i| pb.psi(i) < 0) {
        return Err(Error::Precondition(format!("psi_{i} = {} < 0", pb.psi(i))));
    }
    let ed = &pb.e_degrees;
    let exp = 5 + 2 * (d[0] + d[1] + d[2]) as i64 + d[3] as i64 + ed[0] + ed[1] + ed[2] - ed[6];
    let count = count_ns(k, d, e, Variant::Drop(1), Solver::Dimensions)?;
    let bound = (k.q() as u128).pow(exp.max(0) as u32);
    Ok(BoundCheck {
        count,
        bound,
        holds: exp >= 0 && count <= bound,
    })
}

/// Whether the image of `(t1, t2) ↦ s1 t1 + s2 t2` in degree `delta` is
/// exactly `{0} ∪ {s : gcd(s1, s2) | s}`, by enumerating both sides.
pub fn image_is_gcd_multiples(k: &FieldCtx, s1: &BinaryForm, s2: &BinaryForm, delta: i64) -> Result<bool> {
    let w1 = t_len(delta - s1.degree() as i64);
    let w2 = t_len(delta - s2.degree() as i64);
    let size = (k.q() as u128).checked_pow((w1 + w2) as u32).filter(|&n| n <= T_SPACE_BUDGET);
    if size.is_none() || w1 == 0 || w2 == 0 || delta < 0 {
        return Err(Error::Budget(format!("image enumeration at delta {delta} out of range")));
    }
    let g = s1.gcd(k, s2);
    let mut image = std::collections::HashSet::new();
    for t1 in FormSpace::new(k, w1 - 1).iter(false) {
        let a = s1.mul(k, &t1);
        for t2 in FormSpace::new(k, w2 - 1).iter(false) {
            image.insert(a.add(k, &s2.mul(k, &t2)));
        }
    }
    Ok(FormSpace::new(k, delta as usize).iter(false).all(|s| {
        let divisible = s.is_zero() || s.gcd_degree(k, &g) == g.degree();
        image.contains(&s) == divisible
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff_poly::{closed_points, DivisorP1};
    use crate::surface::{anticanonical_degree, degree_vectors};
    use proptest::prelude::*;

    fn f(q: u32) -> FieldCtx {
        FieldCtx::with_order(q).unwrap()
    }

    fn form(l: &[u32]) -> BinaryForm {
        BinaryForm::from_labels(l)
    }

    #[test]
    fn kernel_dim2_examples() {
        let k = f(2);
        // X and Y with constant t: no relation
        assert_eq!(kernel_dim2(&k, &form(&[0, 1]), &form(&[1, 0]), 1).unwrap(), 0);
        // equal forms: t1 = -t2
        let s = form(&[1, 1, 1]);
        for delta in 1..6 {
            assert_eq!(kernel_dim2(&k, &s, &s, delta).unwrap(), (1 + delta - 2) as usize);
        }
        assert_eq!(kernel_dim2(&k, &form(&[0]), &s, 3), Err(Error::ZeroForm));
    }

    #[test]
    fn kernel_dim3_examples() {
        let k = f(2);
        let r = kernel_dim3(&k, &form(&[0, 1]), &form(&[1, 0]), &form(&[1, 1]), 4).unwrap();
        assert_eq!((r.dim, r.formula, r.formula_check), (7, 7, Some(true)));
        let s = form(&[1, 0, 1]);
        let r = kernel_dim3(&k, &s, &s, &s, 5).unwrap();
        assert_eq!(r.dim as i64, 2 * 6 - 4);
        assert_eq!(r.formula_check, Some(true));
        let r = kernel_dim3(&k, &form(&[1, 0, 1, 1]), &form(&[1, 1, 0, 1]), &s, 3).unwrap();
        assert_eq!(r.formula_check, None);
    }

    #[test]
    fn small_counts() {
        let k = f(3);
        let zero = DivTuple7::zero();
        for solver in [Solver::Brute, Solver::Kernel, Solver::Dimensions] {
            // 2 choices of s0, 8 of s, 2 nonzero t-solutions each
            assert_eq!(count_ns(&k, [0; 4], &zero, Variant::Full, solver).unwrap(), 32);
            assert_eq!(count_ns(&k, [0; 4], &zero, Variant::Zero0, solver).unwrap(), 144);
        }
        assert_eq!(count_ns0_closed(&k, [0; 4], &zero).unwrap(), 144);
        let k2 = f(2);
        assert_eq!(count_ns(&k2, [1, 0, 0, 0], &zero, Variant::Prod4, Solver::Dimensions).unwrap(), 3);
        let b = bound_ns1(&k2, [0; 4], &zero).unwrap();
        assert_eq!((b.count, b.bound, b.holds), (2, 32, true));
        let b = bound_ns1(&k2, [0, 0, 0, 1], &zero).unwrap();
        assert!(b.holds && b.bound == 64);
    }

    /// Effective divisors supported on points of degree ≤ 2.
    fn divisor_strategy() -> impl Strategy<Value = Vec<(usize, u32)>> {
        prop::collection::vec((0usize..6, 1u32..3), 0..2)
    }

    fn build(k: &FieldCtx, layout: &[Vec<(usize, u32)>]) -> DivTuple7 {
        let pts: Vec<_> = closed_points(k, 2).into_iter().flatten().collect();
        let mut e = DivTuple7::zero();
        for (j, parts) in layout.iter().enumerate() {
            let mut dv = DivisorP1::zero();
            for &(p, m) in parts {
                dv.add_point(pts[p % pts.len()].clone(), m);
            }
            e.0[j] = dv;
        }
        e
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

        #[test]
        fn strategies_agree_and_decompose(
            q in prop::sample::select(vec![2u32, 3]),
            d in prop::array::uniform4(0u32..2),
            layout in prop::collection::vec(divisor_strategy(), 7),
        ) {
            let k = f(q);
            let e = build(&k, &layout);
            let variants = [Variant::Full, Variant::Zero0, Variant::Drop(1), Variant::Drop(2), Variant::Drop(3)];
            let mut by_dim = Vec::new();
            for v in variants {
                let dims = count_ns(&k, d, &e, v, Solver::Dimensions).unwrap();
                match count_ns(&k, d, &e, v, Solver::Kernel) {
                    Ok(c) => prop_assert_eq!(c, dims),
                    Err(err) => prop_assert!(matches!(err, Error::Budget(_))),
                }
                by_dim.push(dims);
            }
            let prod4 = count_ns(&k, d, &e, Variant::Prod4, Solver::Dimensions).unwrap();
            prop_assert_eq!(by_dim[1] + 2 * prod4, by_dim[0] + by_dim[2] + by_dim[3] + by_dim[4]);
        }

        #[test]
        fn kernel2_matches_formula(
            q in prop::sample::select(vec![2u32, 3]),
            a in prop::collection::vec(0u32..3, 1..5),
            b in prop::collection::vec(0u32..3, 1..5),
            extra in 0i64..4,
        ) {
            let k = f(q);
            let s1 = form(&a.iter().map(|&x| x % q).collect::<Vec<_>>());
            let s2 = form(&b.iter().map(|&x| x % q).collect::<Vec<_>>());
            prop_assume!(!s1.is_zero() && !s2.is_zero());
            let delta = s1.degree().max(s2.degree()) as i64 + extra;
            prop_assert_eq!(kernel_dim2(&k, &s1, &s2, delta).unwrap(), kernel_dim2_formula(&k, &s1, &s2, delta));
        }
    }

    #[test]
    fn t3_nonzero_counts_respect_bounds() {
        for q in [2u32, 3] {
            let k = f(q);
            let forms: Vec<BinaryForm> = (0..=2).flat_map(|d| FormSpace::new(&k, d).iter(true).collect::<Vec<_>>()).collect();
            for (i, s1) in forms.iter().enumerate().step_by(3) {
                for s2 in forms.iter().skip(i % 5).step_by(4) {
                    for s3 in forms.iter().step_by(5) {
                        let s = [s1, s2, s3];
                        let h = s1.gcd(&k, s2).gcd(&k, s3).degree() as u32;
                        let lo = s.iter().map(|f| f.degree()).max().unwrap() as i64;
                        for delta in lo..lo + 4 {
                            let n = kernel3_t3_nonzero(&k, s, delta);
                            assert!(n <= kernel3_t3_bound_general(&k, s, delta));
                            if let Some(b) = kernel3_t3_bound(&k, s, delta) {
                                assert!(n <= b);
                                // without a common factor the bound is q^{2+2δ-Σ deg s_i}
                                if h == 0 {
                                    assert!(n <= b / (q as u128).pow(h));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn t3_bound_needs_common_factor_term() {
        // Y(X+Y), Y, XY share Y; 12 solutions exceed 2^{2+6-4} = 8
        let k = f(2);
        let s = [&form(&[1, 1, 0]), &form(&[1, 0]), &form(&[0, 1, 0])];
        assert_eq!(s[0].gcd(&k, s[1]).gcd(&k, s[2]).degree(), 1);
        assert_eq!(kernel3_t3_nonzero(&k, s, 3), 12);
        assert_eq!(kernel3_t3_bound(&k, s, 3), Some(16));
    }

    #[test]
    fn brute_matches_dimensions_on_small_instances() {
        for q in [2u32, 3] {
            let k = f(q);
            let zero = DivTuple7::zero();
            for n in 0..=4 {
                for d in degree_vectors(n) {
                    for v in [Variant::Full, Variant::Zero0, Variant::Drop(2)] {
                        let brute = count_ns(&k, d, &zero, v, Solver::Brute);
                        let Ok(brute) = brute else { continue };
                        assert_eq!(brute, count_ns(&k, d, &zero, v, Solver::Dimensions).unwrap(), "q={q} d={d:?} {v:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_on_level_six() {
        let k = f(2);
        let zero = DivTuple7::zero();
        for n in 0..=6 {
            for d in degree_vectors(n) {
                assert_eq!(anticanonical_degree(d), n);
                match count_ns0_closed(&k, d, &zero) {
                    Ok(c) => assert_eq!(c, count_ns(&k, d, &zero, Variant::Zero0, Solver::Kernel).unwrap()),
                    Err(Error::Precondition(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn image_is_multiples_of_gcd() {
        let k = f(2);
        let forms: Vec<BinaryForm> = (1..=2).flat_map(|d| FormSpace::new(&k, d).iter(true).collect::<Vec<_>>()).collect();
        for s1 in &forms {
            for s2 in &forms {
                let g = s1.gcd(&k, s2);
                let lo = s1.degree() as i64 + s2.degree() as i64 - g.degree() as i64 - 1;
                for delta in lo.max(s1.degree().max(s2.degree()) as i64)..=6 {
                    assert!(image_is_gcd_multiples(&k, s1, s2, delta).unwrap());
                }
            }
        }
    }
}
