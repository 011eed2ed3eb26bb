//! Closed points and effective divisors on the projective line over F_q.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::field::{Elem, FieldCtx};
use super::form::BinaryForm;
use super::poly::{monic_from_index, monic_irreducibles, Poly};
use crate::error::{Error, Result};

/// A closed point of P^1: infinity `(1:0)` or the zero locus of a monic
/// irreducible polynomial in the affine coordinate `X`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClosedPoint {
    Infinity,
    Finite(Poly),
}

impl ClosedPoint {
    pub fn degree(&self) -> usize {
        match self {
            ClosedPoint::Infinity => 1,
            ClosedPoint::Finite(p) => p.degree().expect("closed point of a constant"),
        }
    }

    /// The rational point `(x : 1)`.
    pub fn affine(k: &FieldCtx, x: Elem) -> Self {
        ClosedPoint::Finite(Poly::from_coeffs(vec![k.neg(x), Elem::ONE]))
    }

    /// Local equation as a form of degree `deg v`: `Y` at infinity, the
    /// homogenized polynomial otherwise.
    pub fn local_form(&self) -> BinaryForm {
        match self {
            ClosedPoint::Infinity => BinaryForm::from_labels(&[1, 0]),
            ClosedPoint::Finite(p) => BinaryForm::from_poly(p, p.degree().unwrap()),
        }
    }

    /// Order of vanishing of a nonzero form at this point.
    pub fn order_of(&self, k: &FieldCtx, form: &BinaryForm) -> u32 {
        match self {
            ClosedPoint::Infinity => form.infinity_order().expect("zero form") as u32,
            ClosedPoint::Finite(p) => form.dehomogenize().split_power(k, p).0,
        }
    }
}

impl Ord for ClosedPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |p: &ClosedPoint| -> (usize, u8) {
            match p {
                ClosedPoint::Infinity => (1, 0),
                ClosedPoint::Finite(f) => (f.degree().unwrap_or(0), 1),
            }
        };
        key(self).cmp(&key(other)).then_with(|| match (self, other) {
            (ClosedPoint::Finite(a), ClosedPoint::Finite(b)) => {
                a.coeffs().iter().rev().cmp(b.coeffs().iter().rev())
            }
            _ => Ordering::Equal,
        })
    }
}

impl PartialOrd for ClosedPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ClosedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedPoint::Infinity => write!(f, "inf"),
            ClosedPoint::Finite(p) => {
                let labels: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
                write!(f, "[{}]", labels.join(","))
            }
        }
    }
}

/// An effective divisor: closed points with positive multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorP1 {
    points: BTreeMap<ClosedPoint, u32>,
}

impl DivisorP1 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn point(p: ClosedPoint, mult: u32) -> Self {
        let mut d = Self::zero();
        d.add_point(p, mult);
        d
    }

    pub fn add_point(&mut self, p: ClosedPoint, mult: u32) {
        if mult > 0 {
            *self.points.entry(p).or_insert(0) += mult;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.points.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.points
            .iter()
            .map(|(p, &m)| p.degree() * m as usize)
            .sum()
    }

    pub fn mult(&self, p: &ClosedPoint) -> u32 {
        self.points.get(p).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ClosedPoint, u32)> {
        self.points.iter().map(|(p, &m)| (p, m))
    }

    pub fn support(&self) -> impl Iterator<Item = &ClosedPoint> {
        self.points.keys()
    }

    pub fn sum(&self, other: &DivisorP1) -> DivisorP1 {
        let mut out = self.clone();
        for (p, m) in other.iter() {
            out.add_point(p.clone(), m);
        }
        out
    }

    /// Pointwise minimum.
    pub fn gcd(&self, other: &DivisorP1) -> DivisorP1 {
        let mut out = DivisorP1::zero();
        for (p, m) in self.iter() {
            out.add_point(p.clone(), m.min(other.mult(p)));
        }
        out
    }

    /// `self ≤ other` pointwise.
    pub fn le(&self, other: &DivisorP1) -> bool {
        self.iter().all(|(p, m)| m <= other.mult(p))
    }

    /// The canonical section: product of the local forms raised to their
    /// multiplicities. Its dehomogenization is monic.
    pub fn canonical_section(&self, k: &FieldCtx) -> BinaryForm {
        let mut acc = BinaryForm::from_labels(&[1]);
        for (p, m) in self.iter() {
            let local = p.local_form();
            for _ in 0..m {
                acc = acc.mul(k, &local);
            }
        }
        acc
    }
}

impl fmt::Display for DivisorP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.iter().map(|(p, m)| format!("{p}:{m}")).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

/// The divisor of zeros of a nonzero form, by trial division.
///
/// Monic trial divisors are taken in increasing degree; once every factor
/// of lower degree has been stripped, a monic divisor can only succeed if it
/// is irreducible, so no irreducibility test is needed.
pub fn divisor_of(k: &FieldCtx, form: &BinaryForm) -> Result<DivisorP1> {
    let inf = form.infinity_order().ok_or(Error::ZeroForm)?;
    let mut div = DivisorP1::zero();
    div.add_point(ClosedPoint::Infinity, inf as u32);
    let mut rest = form.dehomogenize().monic(k);
    let mut e = 1usize;
    while rest.degree().unwrap_or(0) >= 2 * e {
        let count = (k.q() as u64).pow(e as u32);
        for idx in 0..count {
            let cand = monic_from_index(k, e, idx);
            let (m, cof) = rest.split_power(k, &cand);
            if m > 0 {
                div.add_point(ClosedPoint::Finite(cand), m);
                rest = cof;
            }
        }
        e += 1;
    }
    if rest.degree().unwrap_or(0) >= 1 {
        div.add_point(ClosedPoint::Finite(rest), 1);
    }
    Ok(div)
}

/// Closed points of P^1 of degree `1..=max_deg`; entry `i` holds degree
/// `i + 1`, with infinity listed first among the rational points.
pub fn closed_points(k: &FieldCtx, max_deg: usize) -> Vec<Vec<ClosedPoint>> {
    monic_irreducibles(k, max_deg)
        .into_iter()
        .enumerate()
        .map(|(i, polys)| {
            let mut pts: Vec<ClosedPoint> = Vec::with_capacity(polys.len() + 1);
            if i == 0 {
                pts.push(ClosedPoint::Infinity);
            }
            pts.extend(polys.into_iter().map(ClosedPoint::Finite));
            pts
        })
        .collect()
}

/// Number of closed points of degree `n` on P^1 over F_q.
pub fn closed_point_count(q: u64, n: u32) -> u64 {
    super::poly::irreducible_count(q, n) + u64::from(n == 1)
}

/// Every effective divisor of degree exactly `deg` supported on `points`
/// (a flat list; duplicates are not allowed).
pub fn effective_divisors(points: &[ClosedPoint], deg: usize) -> Vec<DivisorP1> {
    fn rec(points: &[ClosedPoint], deg: usize, cur: &mut DivisorP1, out: &mut Vec<DivisorP1>) {
        if deg == 0 {
            out.push(cur.clone());
            return;
        }
        let Some((p, rest)) = points.split_first() else {
            return;
        };
        let pd = p.degree();
        let mut m = 0u32;
        loop {
            let used = pd * m as usize;
            if used > deg {
                break;
            }
            let mut next = cur.clone();
            next.add_point(p.clone(), m);
            rec(rest, deg - used, &mut next, out);
            m += 1;
        }
    }
    let mut out = Vec::new();
    rec(points, deg, &mut DivisorP1::zero(), &mut out);
    out
}
