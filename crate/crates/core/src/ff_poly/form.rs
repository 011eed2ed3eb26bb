//! Binary forms: global sections of O(d) on the projective line.
//!
//! A form of degree `d` is stored as `d + 1` coefficients where index `i`
//! holds the coefficient of `X^i Y^(d-i)`. Dehomogenizing at `Y = 1` gives
//! a polynomial in `X`; the gap between `d` and its degree is the order of
//! vanishing at infinity `(1:0)`.

use std::ops::Range;

use super::field::{Elem, FieldCtx};
use super::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<Elem>,
}

impl BinaryForm {
    pub fn zero(d: usize) -> Self {
        BinaryForm {
            coeffs: vec![Elem::ZERO; d + 1],
        }
    }

    /// Form of degree `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<Elem>) -> Self {
        assert!(!coeffs.is_empty(), "a form needs d + 1 ≥ 1 coefficients");
        BinaryForm { coeffs }
    }

    pub fn from_labels(labels: &[u32]) -> Self {
        Self::from_coeffs(labels.iter().map(|&k| Elem(k as u16)).collect())
    }

    /// Homogenizes `p` to degree `d`; requires `deg p ≤ d`.
    pub fn from_poly(p: &Poly, d: usize) -> Self {
        assert!(p.degree().is_none_or(|e| e <= d), "polynomial degree exceeds form degree");
        let mut coeffs = p.coeffs().to_vec();
        coeffs.resize(d + 1, Elem::ZERO);
        BinaryForm { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn dehomogenize(&self) -> Poly {
        Poly::from_coeffs(self.coeffs.clone())
    }

    /// Order of vanishing at infinity; `None` for the zero form.
    pub fn infinity_order(&self) -> Option<usize> {
        self.coeffs.iter().rev().position(|c| !c.is_zero())
    }

    pub fn mul(&self, k: &FieldCtx, other: &BinaryForm) -> BinaryForm {
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(a, b));
            }
        }
        BinaryForm { coeffs: out }
    }

    /// Sum of two forms of equal degree.
    pub fn add(&self, k: &FieldCtx, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree(), other.degree());
        BinaryForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| k.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, k: &FieldCtx, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree(), other.degree());
        BinaryForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| k.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, k: &FieldCtx, c: Elem) -> BinaryForm {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|&a| k.mul(a, c)).collect(),
        }
    }

    /// Value at the point `(x : 1)`.
    pub fn eval_affine(&self, k: &FieldCtx, x: Elem) -> Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| k.add(k.mul(acc, x), c))
    }

    /// Greatest common divisor as a form, normalized so the dehomogenized
    /// part is monic. `gcd(0, b) = b` up to scaling.
    pub fn gcd(&self, k: &FieldCtx, other: &BinaryForm) -> BinaryForm {
        match (self.infinity_order(), other.infinity_order()) {
            (None, None) => BinaryForm::zero(self.degree().min(other.degree())),
            (None, Some(_)) => other.normalized(k),
            (Some(_), None) => self.normalized(k),
            (Some(ia), Some(ib)) => {
                let g = self.dehomogenize().gcd(k, &other.dehomogenize());
                let d = g.degree().unwrap_or(0) + ia.min(ib);
                BinaryForm::from_poly(&g, d)
            }
        }
    }

    /// Degree of the form gcd of two nonzero forms.
    pub fn gcd_degree(&self, k: &FieldCtx, other: &BinaryForm) -> usize {
        self.gcd(k, other).degree()
    }

    fn normalized(&self, k: &FieldCtx) -> BinaryForm {
        let lead = self.coeffs.iter().rev().find(|c| !c.is_zero()).copied();
        match lead {
            Some(c) => self.scale(k, k.inv(c)),
            None => self.clone(),
        }
    }
}

/// The space of binary forms of degree `d` over F_q, indexed by
/// `0..q^(d+1)` through base-q digits (digit `i` is the coefficient of `X^i`).
/// Index 0 is the zero form.
#[derive(Clone, Copy, Debug)]
pub struct FormSpace {
    pub q: u32,
    pub d: usize,
}

impl FormSpace {
    pub fn new(k: &FieldCtx, d: usize) -> Self {
        FormSpace { q: k.q(), d }
    }

    /// `q^(d+1)`.
    pub fn len(&self) -> u64 {
        (self.q as u64)
            .checked_pow(self.d as u32 + 1)
            .expect("form space too large to index")
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, index: u64) -> BinaryForm {
        let mut c = Vec::with_capacity(self.d + 1);
        let mut rest = index;
        for _ in 0..=self.d {
            c.push(Elem((rest % self.q as u64) as u16));
            rest /= self.q as u64;
        }
        BinaryForm { coeffs: c }
    }

    /// Inverse of [`FormSpace::get`].
    pub fn index_of(&self, form: &BinaryForm) -> u64 {
        form.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, c| acc * self.q as u64 + c.0 as u64)
    }

    /// All forms (or all nonzero forms) in index order.
    pub fn iter(&self, nonzero_only: bool) -> impl Iterator<Item = BinaryForm> + '_ {
        let start = u64::from(nonzero_only);
        self.range(start..self.len())
    }

    /// Forms with index in `range`; disjoint ranges give disjoint streams.
    pub fn range(&self, range: Range<u64>) -> impl Iterator<Item = BinaryForm> + '_ {
        range.map(move |i| self.get(i))
    }
}

/// Stream of all forms of degree `d`, or only the nonzero ones.
pub fn enumerate_forms(k: &FieldCtx, d: usize, nonzero_only: bool) -> impl Iterator<Item = BinaryForm> {
    let space = FormSpace::new(k, d);
    let start = u64::from(nonzero_only);
    (start..space.len()).map(move |i| space.get(i))
}
