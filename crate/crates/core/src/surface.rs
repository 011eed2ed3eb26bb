//! Combinatorial data of the plane blown up in three collinear points.
//!
//! The Cox ring is `k[s0, s1, s2, s3, t1, t2, t3] / (s1 t1 + s2 t2 + s3 t3)`.
//! Generators are indexed `0..7` in that order; subsets of generators are
//! 7-bit masks with bit `j` standing for generator `j`.

use std::collections::BTreeSet;

use crate::ff_poly::{ClosedPoint, DivisorP1};
use crate::ratfunc::{int, pole_limit, RatPoly, Rational};

pub const NUM_GENERATORS: usize = 7;
pub const GENERATOR_NAMES: [&str; 7] = ["s0", "s1", "s2", "s3", "t1", "t2", "t3"];

/// Integer vector on the basis `[E0], [E1], [E2], [E3]` of the Picard group.
pub type PicVector = [i64; 4];

/// Degree classes of the generators: `s_j ↦ [E_j]`, `t_i ↦ [E0] + Σ_{j≠i} [E_j]`.
pub const GENERATOR_DEGREES: [PicVector; 7] = [
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, 1, 0],
    [0, 0, 0, 1],
    [1, 0, 1, 1],
    [1, 1, 0, 1],
    [1, 1, 1, 0],
];

pub const ANTICANONICAL: PicVector = [3, 2, 2, 2];

/// Anticanonical class as a combination of `s`-generators.
pub const ANTICANONICAL_VIA_S: [i64; 7] = [3, 2, 2, 2, 0, 0, 0];
/// Anticanonical class as `t1 + t2 + t3`.
pub const ANTICANONICAL_VIA_T: [i64; 7] = [0, 0, 0, 0, 1, 1, 1];

/// Generators of the lattice of relations among the generator degrees.
pub const RELATIONS: [[i64; 7]; 3] = [
    [-1, 0, -1, -1, 1, 0, 0],
    [-1, -1, 0, -1, 0, 1, 0],
    [-1, -1, -1, 0, 0, 0, 1],
];

const fn mask(bits: [usize; 7], len: usize) -> u8 {
    let mut m = 0u8;
    let mut i = 0;
    while i < len {
        m |= 1 << bits[i];
        i += 1;
    }
    m
}

/// The seven monomial charts covering the universal torsor.
pub const CHARTS: [u8; 7] = [
    mask([1, 2, 4, 5, 6, 0, 0], 5),
    mask([2, 3, 4, 5, 6, 0, 0], 5),
    mask([1, 3, 4, 5, 6, 0, 0], 5),
    mask([0, 1, 2, 4, 5, 0, 0], 5),
    mask([0, 1, 3, 4, 6, 0, 0], 5),
    mask([0, 2, 3, 5, 6, 0, 0], 5),
    mask([0, 1, 2, 3, 0, 0, 0], 4),
];

/// Whether generators in `zeros` may vanish simultaneously on the torsor,
/// i.e. some chart avoids all of them.
#[inline]
pub fn zero_set_allowed(zeros: u8) -> bool {
    CHARTS.iter().any(|&c| c & zeros == 0)
}

/// `min` over charts of the chart sums of `n`.
pub fn chart_min(n: &[u32; 7]) -> u32 {
    CHARTS
        .iter()
        .map(|&c| (0..7).filter(|&j| c >> j & 1 == 1).map(|j| n[j]).sum())
        .min()
        .unwrap()
}

/// Degree class of the monomial with exponents `n`.
pub fn class_of(n: &[i64; 7]) -> PicVector {
    let mut out = [0i64; 4];
    for (j, &e) in n.iter().enumerate() {
        for (o, g) in out.iter_mut().zip(GENERATOR_DEGREES[j]) {
            *o += e * g;
        }
    }
    out
}

/// The bijection `N^4 → N^7_S`: `(d0, d) ↦ (d0, d1, d2, d3, f1, f2, f3)`
/// with `f_i = d0 + Σ_{j≠i} d_j`.
pub fn lift_degrees(d: [u32; 4]) -> [u32; 7] {
    let sum: u32 = d[1] + d[2] + d[3];
    [
        d[0],
        d[1],
        d[2],
        d[3],
        d[0] + sum - d[1],
        d[0] + sum - d[2],
        d[0] + sum - d[3],
    ]
}

/// Anticanonical degree `3 d0 + 2 (d1 + d2 + d3)`.
pub fn anticanonical_degree(d: [u32; 4]) -> u32 {
    3 * d[0] + 2 * (d[1] + d[2] + d[3])
}

/// All `d ∈ N^4` with anticanonical degree exactly `n`, in lexicographic order.
pub fn degree_vectors(n: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for d0 in 0..=n / 3 {
        let rest = n - 3 * d0;
        if !rest.is_multiple_of(2) {
            continue;
        }
        let s = rest / 2;
        for d1 in 0..=s {
            for d2 in 0..=s - d1 {
                out.push([d0, d1, d2, s - d1 - d2]);
            }
        }
    }
    out
}

/// Seven effective divisors `(E0, E1, E2, E3, F1, F2, F3)`, one per generator.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DivTuple7(pub [DivisorP1; 7]);

impl DivTuple7 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn degrees(&self) -> [i64; 7] {
        std::array::from_fn(|j| self.0[j].degree() as i64)
    }

    pub fn joint_support(&self) -> BTreeSet<ClosedPoint> {
        self.0.iter().flat_map(|d| d.support().cloned()).collect()
    }

    /// Multiplicity vector at `p`.
    pub fn pattern_at(&self, p: &ClosedPoint) -> [u32; 7] {
        std::array::from_fn(|j| self.0[j].mult(p))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(DivisorP1::is_zero)
    }
}

/// `ψ_i` from the degree vector and the divisor degrees `(deg E0, …, deg F3)`.
pub fn psi_degrees(i: usize, d: [u32; 4], e: &[i64; 7]) -> i64 {
    assert!((1..=3).contains(&i));
    let mut v = d[0] as i64 + e[0];
    for j in (1..=3).filter(|&j| j != i) {
        v += d[j] as i64 + e[j];
    }
    v - e[3 + i]
}

pub fn psi(i: usize, d: [u32; 4], e: &DivTuple7) -> i64 {
    psi_degrees(i, d, &e.degrees())
}

/// `φ_i = d0 + d_i + deg E0 + deg E_i - Σ_{j≠i} deg F_j`.
pub fn phi_degrees(i: usize, d: [u32; 4], e: &[i64; 7]) -> i64 {
    assert!((1..=3).contains(&i));
    let mut v = d[0] as i64 + d[i] as i64 + e[0] + e[i];
    for j in (1..=3).filter(|&j| j != i) {
        v -= e[3 + j];
    }
    v
}

pub fn phi(i: usize, d: [u32; 4], e: &DivTuple7) -> i64 {
    phi_degrees(i, d, &e.degrees())
}

/// Whether the divisors of the seven sections meet the chart condition at
/// every closed point: some chart has all its sections nonvanishing there.
pub fn is_primitive(divs: &DivTuple7) -> bool {
    divs.joint_support().iter().all(|p| {
        let pat = divs.pattern_at(p);
        chart_min(&pat) == 0
    })
}

/// `lim_{T→1} (1-T)^4 / ((1-T^3)(1-T^2)^3)`.
pub fn alpha_s() -> Rational {
    let den = RatPoly::one_minus(int(1), 3).mul(&RatPoly::one_minus(int(1), 2).pow(3));
    pole_limit(&RatPoly::one(), &den, &int(1), 4).expect("pole order is four")
}
