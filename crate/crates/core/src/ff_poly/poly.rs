//! Dense univariate polynomials over a [`FieldCtx`].
//!
//! Coefficients are stored low degree first with no trailing zeros, so the
//! zero polynomial is the empty vector and `degree()` is `None` for it.

use super::field::{Elem, FieldCtx};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![Elem::ONE],
        }
    }

    /// `X`.
    pub fn x() -> Self {
        Poly {
            coeffs: vec![Elem::ZERO, Elem::ONE],
        }
    }

    pub fn constant(c: Elem) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Convenience constructor from integer labels.
    pub fn from_labels(labels: &[u32]) -> Self {
        Self::from_coeffs(labels.iter().map(|&k| Elem(k as u16)).collect())
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Elem::ONE
    }

    pub fn add(&self, k: &FieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| k.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, k: &FieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| k.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn scale(&self, k: &FieldCtx, c: Elem) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&a| k.mul(a, c)).collect())
    }

    pub fn mul(&self, k: &FieldCtx, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, k: &FieldCtx, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(k, self);
        }
        acc
    }

    /// Quotient and remainder. Panics if `divisor` is zero.
    pub fn div_rem(&self, k: &FieldCtx, divisor: &Poly) -> (Poly, Poly) {
        let db = divisor.degree().expect("division by the zero polynomial");
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return (Poly::zero(), self.clone());
        }
        let inv_lead = k.inv(divisor.leading());
        let mut quot = vec![Elem::ZERO; r.len() - db];
        for top in (db..r.len()).rev() {
            let c = k.mul(r[top], inv_lead);
            if c.is_zero() {
                continue;
            }
            let shift = top - db;
            quot[shift] = c;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                r[shift + i] = k.sub(r[shift + i], k.mul(c, b));
            }
        }
        r.truncate(db);
        (Poly::from_coeffs(quot), Poly::from_coeffs(r))
    }

    pub fn rem(&self, k: &FieldCtx, divisor: &Poly) -> Poly {
        self.div_rem(k, divisor).1
    }

    /// Scales to leading coefficient 1; the zero polynomial is returned unchanged.
    pub fn monic(&self, k: &FieldCtx) -> Poly {
        match self.coeffs.last() {
            None => Poly::zero(),
            Some(&lead) => self.scale(k, k.inv(lead)),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, k: &FieldCtx, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(k, &b);
            a = b;
            b = r;
        }
        a.monic(k)
    }

    pub fn eval(&self, k: &FieldCtx, x: Elem) -> Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| k.add(k.mul(acc, x), c))
    }

    /// Largest `m` with `factor^m | self`, and the cofactor. `factor` must have positive degree.
    pub fn split_power(&self, k: &FieldCtx, factor: &Poly) -> (u32, Poly) {
        let mut m = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.div_rem(k, factor);
            if !r.is_zero() || cur.is_zero() {
                return (m, cur);
            }
            cur = q;
            m += 1;
        }
    }
}

/// The monic polynomial of degree `deg` whose lower coefficients are the
/// base-q digits of `index` (constant term varying fastest).
pub fn monic_from_index(k: &FieldCtx, deg: usize, index: u64) -> Poly {
    let q = k.q() as u64;
    let mut c = Vec::with_capacity(deg + 1);
    let mut rest = index;
    for _ in 0..deg {
        c.push(Elem((rest % q) as u16));
        rest /= q;
    }
    c.push(Elem::ONE);
    Poly::from_coeffs(c)
}

/// Monic irreducible polynomials over F_q grouped by degree `1..=max_deg`
/// (index 0 of the result is degree 1). Built by sieving with the
/// irreducibles of lower degree.
pub fn monic_irreducibles(k: &FieldCtx, max_deg: usize) -> Vec<Vec<Poly>> {
    let q = k.q() as u64;
    let mut out: Vec<Vec<Poly>> = Vec::with_capacity(max_deg);
    for deg in 1..=max_deg {
        let count = q.checked_pow(deg as u32).expect("enumeration overflow");
        let mut found = Vec::new();
        for idx in 0..count {
            let cand = monic_from_index(k, deg, idx);
            let reducible = out
                .iter()
                .take(deg / 2)
                .flatten()
                .any(|p| cand.rem(k, p).is_zero());
            if !reducible {
                found.push(cand);
            }
        }
        out.push(found);
    }
    out
}

/// Number of monic irreducibles of degree `n` over F_q (necklace formula).
pub fn irreducible_count(q: u64, n: u32) -> u64 {
    let mut total: i128 = 0;
    for d in 1..=n {
        if n.is_multiple_of(d) {
            total += mobius(n / d) as i128 * (q as i128).pow(d);
        }
    }
    (total / n as i128) as u64
}

fn mobius(mut n: u32) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(q: u32) -> FieldCtx {
        FieldCtx::with_order(q).unwrap()
    }

    #[test]
    fn div_rem_reconstructs() {
        let k = f(3);
        let a = Poly::from_labels(&[1, 2, 0, 1, 2]);
        let b = Poly::from_labels(&[2, 1, 1]);
        let (q, r) = a.div_rem(&k, &b);
        assert!(r.degree().is_none_or(|d| d < 2));
        assert_eq!(q.mul(&k, &b).add(&k, &r), a);
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        for q in [2u32, 3, 4] {
            let k = f(q);
            let max = if q == 2 { 8 } else { 4 };
            let irr = monic_irreducibles(&k, max);
            for (i, list) in irr.iter().enumerate() {
                let n = i as u32 + 1;
                assert_eq!(list.len() as u64, irreducible_count(q as u64, n), "q={q} n={n}");
            }
        }
    }

    #[test]
    fn irreducible_degree_sum_identity() {
        // sum_{e | f} e * I(e) = q^f
        for q in [2u32, 3, 5] {
            let k = f(q);
            let irr = monic_irreducibles(&k, 5);
            for fdeg in 1..=5usize {
                let s: usize = (1..=fdeg)
                    .filter(|e| fdeg % e == 0)
                    .map(|e| e * irr[e - 1].len())
                    .sum();
                assert_eq!(s as u64, (q as u64).pow(fdeg as u32));
            }
        }
    }

    #[test]
    fn only_quadratic_irreducible_over_f2() {
        let k = f(2);
        let irr = monic_irreducibles(&k, 2);
        assert_eq!(irr[1], vec![Poly::from_labels(&[1, 1, 1])]);
    }

    fn arb_poly(q: u32, max_len: usize) -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0..q, 0..max_len)
    }

    proptest! {
        #[test]
        fn gcd_divides_both(a in arb_poly(3, 8), b in arb_poly(3, 8)) {
            let k = f(3);
            let (a, b) = (Poly::from_labels(&a), Poly::from_labels(&b));
            let g = a.gcd(&k, &b);
            if !g.is_zero() {
                prop_assert!(a.rem(&k, &g).is_zero());
                prop_assert!(b.rem(&k, &g).is_zero());
                prop_assert!(g.is_monic());
            } else {
                prop_assert!(a.is_zero() && b.is_zero());
            }
        }

        #[test]
        fn ring_laws_f4(a in arb_poly(4, 6), b in arb_poly(4, 6), c in arb_poly(4, 6)) {
            let k = f(4);
            let (a, b, c) = (Poly::from_labels(&a), Poly::from_labels(&b), Poly::from_labels(&c));
            prop_assert_eq!(a.mul(&k, &b.add(&k, &c)), a.mul(&k, &b).add(&k, &a.mul(&k, &c)));
            prop_assert_eq!(a.mul(&k, &b).mul(&k, &c), a.mul(&k, &b.mul(&k, &c)));
            prop_assert_eq!(a.sub(&k, &a), Poly::zero());
        }

        #[test]
        fn eval_is_ring_hom(a in arb_poly(5, 6), b in arb_poly(5, 6), x in 0u32..5) {
            let k = f(5);
            let (a, b) = (Poly::from_labels(&a), Poly::from_labels(&b));
            let x = Elem(x as u16);
            prop_assert_eq!(a.mul(&k, &b).eval(&k, x), k.mul(a.eval(&k, x), b.eval(&k, x)));
        }
    }
}
