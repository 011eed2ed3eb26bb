//! Möbius weights inverting the chart indicator on `{0,1}^7`, and their
//! multiplicative extension to 7-tuples of divisors.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::surface::{DivTuple7, CHARTS};

/// Möbius data for a family of charts on seven generators.
#[derive(Clone, Debug)]
pub struct MoebiusTable {
    charts: Vec<u8>,
    /// `mu0` indexed by the 7-bit mask of a binary vector.
    table: [i64; 128],
}

impl MoebiusTable {
    pub fn new(charts: &[u8]) -> Self {
        let indicator = |m: u8| -> i64 { i64::from(charts.iter().any(|&c| c & m == 0)) };
        let mut table = [0i64; 128];
        for (n, slot) in table.iter_mut().enumerate() {
            let n = n as u8;
            // Σ_{m ⊆ n} (-1)^{|n|-|m|} 1(m), by submask enumeration
            let mut acc = 0i64;
            let mut m = n;
            loop {
                let sign = if (n.count_ones() - m.count_ones()).is_multiple_of(2) { 1 } else { -1 };
                acc += sign * indicator(m);
                if m == 0 {
                    break;
                }
                m = (m - 1) & n;
            }
            *slot = acc;
        }
        MoebiusTable {
            charts: charts.to_vec(),
            table,
        }
    }

    pub fn charts(&self) -> &[u8] {
        &self.charts
    }

    /// Indicator of `{0,1}^7_S` on a mask.
    #[inline]
    pub fn in_set_mask(&self, m: u8) -> bool {
        self.charts.iter().any(|&c| c & m == 0)
    }

    #[inline]
    pub fn mu0_mask(&self, m: u8) -> i64 {
        self.table[m as usize]
    }

    pub fn mu0(&self, n: &[u32; 7]) -> i64 {
        match to_mask(n) {
            Some(m) => self.table[m as usize],
            None => 0,
        }
    }

    /// Product over the joint support of `mu0` of the local multiplicity vectors.
    pub fn mu_div(&self, e: &DivTuple7) -> i64 {
        let mut acc = 1i64;
        for p in e.joint_support() {
            acc *= self.mu0(&e.pattern_at(&p));
            if acc == 0 {
                break;
            }
        }
        acc
    }

    /// Masks with nonzero weight, in increasing order.
    pub fn support(&self) -> Vec<u8> {
        (0u8..128).filter(|&m| self.table[m as usize] != 0).collect()
    }
}

fn to_mask(n: &[u32; 7]) -> Option<u8> {
    let mut m = 0u8;
    for (j, &x) in n.iter().enumerate() {
        match x {
            0 => {}
            1 => m |= 1 << j,
            _ => return None,
        }
    }
    Some(m)
}

/// The table for the surface's chart family, built once.
pub fn surface_table() -> &'static MoebiusTable {
    static TABLE: OnceLock<MoebiusTable> = OnceLock::new();
    TABLE.get_or_init(|| MoebiusTable::new(&CHARTS))
}

/// Whether a binary vector lies in `{0,1}^7_S`.
pub fn in_01s(n: &[u32; 7]) -> Result<bool> {
    let m = to_mask(n).ok_or_else(|| Error::InvalidArgument(format!("{n:?} is not binary")))?;
    Ok(surface_table().in_set_mask(m))
}

pub fn mu0(n: &[u32; 7]) -> i64 {
    surface_table().mu0(n)
}

pub fn mu_div(e: &DivTuple7) -> i64 {
    surface_table().mu_div(e)
}

/// Unit vectors and vectors with `e0 = e1 = e2 = e3 = 0` or with
/// `e0 = 0`, a single `e_i = 1` and its partner `f_i = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VanishingFamily {
    Unit,
    NoExceptional,
    PairedSingle,
}

impl VanishingFamily {
    pub const ALL: [VanishingFamily; 3] = [VanishingFamily::Unit, VanishingFamily::NoExceptional, VanishingFamily::PairedSingle];

    pub fn contains(self, m: u8) -> bool {
        let bit = |j: usize| m >> j & 1 == 1;
        match self {
            VanishingFamily::Unit => m.count_ones() == 1,
            VanishingFamily::NoExceptional => m & 0b1111 == 0,
            VanishingFamily::PairedSingle => {
                !bit(0) && (1..=3).any(|i| bit(i) && bit(3 + i) && (1..=3).all(|j| j == i || !bit(j)))
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            VanishingFamily::Unit => "unit vectors",
            VanishingFamily::NoExceptional => "no exceptional coordinate",
            VanishingFamily::PairedSingle => "single exceptional with its paired t",
        }
    }
}

/// Masks in `family` with nonzero weight.
pub fn family_violations(family: VanishingFamily) -> Vec<u8> {
    (1u8..128).filter(|&m| family.contains(m) && surface_table().mu0_mask(m) != 0).collect()
}

/// Masks `n` where `Σ_{m ⊆ n} mu0(m) ≠ 1(n)`, summed by plain iteration
/// over all pairs rather than submask enumeration.
pub fn inversion_failures() -> Vec<u8> {
    let t = surface_table();
    (0u8..128)
        .filter(|&n| {
            let total: i64 = (0u8..128).filter(|&m| m & !n == 0).map(|m| t.mu0_mask(m)).sum();
            total != i64::from(t.in_set_mask(n))
        })
        .collect()
}

/// `Σ_{(e, f) ∈ {0,1}^6} mu0(e0, e, f)`.
pub fn slice_sum(e0: u8) -> i64 {
    (0u8..64).map(|rest| surface_table().mu0_mask(e0 & 1 | rest << 1)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff_poly::{closed_points, DivisorP1, FieldCtx};
    use crate::surface::chart_min;
    use proptest::prelude::*;

    fn bits(m: u8) -> [u32; 7] {
        std::array::from_fn(|j| u32::from(m >> j & 1))
    }

    #[test]
    fn membership_examples() {
        assert!(in_01s(&[0; 7]).unwrap());
        assert!(in_01s(&[1, 0, 0, 0, 0, 0, 0]).unwrap());
        assert!(!in_01s(&[1; 7]).unwrap());
        assert!(in_01s(&[2, 0, 0, 0, 0, 0, 0]).is_err());
        for m in 0u8..128 {
            assert_eq!(in_01s(&bits(m)).unwrap(), chart_min(&bits(m)) == 0);
        }
    }

    #[test]
    fn inversion_identity_on_all_binary_vectors() {
        // 1(n) = Σ_{m ≤ n} mu0(m), checked by plain iteration over all pairs
        for n in 0u8..128 {
            let total: i64 = (0u8..128).filter(|&m| m & !n == 0).map(|m| mu0(&bits(m))).sum();
            assert_eq!(total, i64::from(in_01s(&bits(n)).unwrap()));
        }
    }

    #[test]
    fn all_ones_value_by_subtraction() {
        // mu0(1..1) = 1(1..1) - Σ_{m < 1..1} mu0(m)
        let lower: i64 = (0u8..127).map(|m| mu0(&bits(m))).sum();
        assert_eq!(mu0(&[1; 7]), 0 - lower);
    }

    #[test]
    fn vanishing_families() {
        assert_eq!(mu0(&[0; 7]), 1);
        for m in 1u8..128 {
            let n = bits(m);
            let (e0, e, f) = (n[0], [n[1], n[2], n[3]], [n[4], n[5], n[6]]);
            if in_01s(&n).unwrap() {
                assert_eq!(mu0(&n), 0, "nonzero member {m:07b}");
            }
            if m.count_ones() == 1 {
                assert_eq!(mu0(&n), 0);
            }
            if e0 == 0 && e == [0, 0, 0] {
                assert_eq!(mu0(&n), 0);
            }
            for i in 0..3 {
                let others_zero = (0..3).filter(|&j| j != i).all(|j| e[j] == 0);
                if e0 == 0 && e[i] == 1 && f[i] == 1 && others_zero {
                    assert_eq!(mu0(&n), 0);
                }
            }
        }
        for j in 0..7 {
            let mut n = [0u32; 7];
            n[j] = 2;
            assert_eq!(mu0(&n), 0);
        }
    }

    #[test]
    fn single_exceptional_vanishing_needs_paired_t() {
        // With e0 = 0 and a single e_i = 1, mu0 vanishes when f_i = 1 but
        // not in general when f_i = 0: {s_i, t_j} with j ≠ i is forbidden
        // while {s_i}, {t_j} are allowed, giving weight -1.
        let mut offenders = Vec::new();
        for m in 1u8..128 {
            let n = bits(m);
            for i in 1..=3 {
                let single = (1..=3).all(|j| n[j] == u32::from(j == i));
                if n[0] == 0 && single && n[3 + i] == 0 && mu0(&n) != 0 {
                    offenders.push(n);
                }
            }
        }
        assert_eq!(offenders.len(), 9);
        assert_eq!(mu0(&[0, 1, 0, 0, 0, 1, 0]), -1);
        assert_eq!(mu0(&[0, 1, 0, 0, 0, 1, 1]), 1);
    }

    #[test]
    fn public_checks_agree() {
        assert!(inversion_failures().is_empty());
        for fam in VanishingFamily::ALL {
            assert!(family_violations(fam).is_empty(), "{}", fam.name());
        }
        assert_eq!((slice_sum(0), slice_sum(1)), (0, 0));
        assert!(VanishingFamily::PairedSingle.contains(0b0010010));
        assert!(!VanishingFamily::PairedSingle.contains(0b0100010));
    }

    #[test]
    fn slice_sums_vanish() {
        for e0 in 0..2u8 {
            let s: i64 = (0u8..64).map(|rest| mu0(&bits(e0 | rest << 1))).sum();
            assert_eq!(s, 0, "e0={e0}");
        }
    }

    #[test]
    fn mu_div_examples() {
        let k = FieldCtx::with_order(2).unwrap();
        let pts = &closed_points(&k, 1)[0];
        assert_eq!(mu_div(&DivTuple7::zero()), 1);
        let mut e = DivTuple7::zero();
        e.0[1] = DivisorP1::point(pts[0].clone(), 2);
        assert_eq!(mu_div(&e), 0);
        let mut e = DivTuple7::zero();
        e.0[1] = DivisorP1::point(pts[0].clone(), 1);
        e.0[5] = DivisorP1::point(pts[1].clone(), 1);
        assert_eq!(mu_div(&e), 0);
    }

    proptest! {
        #[test]
        fn mu_div_multiplicative_on_disjoint_supports(a in 0u8..128, b in 0u8..128, c in 0u8..128) {
            let k = FieldCtx::with_order(2).unwrap();
            let pts = &closed_points(&k, 1)[0];
            let at = |m: u8, p: usize| -> DivTuple7 {
                DivTuple7(std::array::from_fn(|j| DivisorP1::point(pts[p].clone(), u32::from(m >> j & 1))))
            };
            let (x, y, z) = (at(a, 0), at(b, 1), at(c, 2));
            let xy = DivTuple7(std::array::from_fn(|j| x.0[j].sum(&y.0[j])));
            let xyz = DivTuple7(std::array::from_fn(|j| xy.0[j].sum(&z.0[j])));
            prop_assert_eq!(mu_div(&xy), mu_div(&x) * mu_div(&y));
            prop_assert_eq!(mu_div(&xyz), mu_div(&x) * mu_div(&y) * mu_div(&z));
        }
    }
}
