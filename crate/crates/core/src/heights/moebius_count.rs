//! Morphism count by Möbius inversion of the chart condition: primitivity
//! is traded for a signed sum over divisor tuples `E` of section counts
//! twisted by the canonical sections of `E`.
//!
//! `N(n) = (q-1)^{-4} Σ_E μ(E) Σ_d N_S(d, E)` over `d` with
//! `3(d0 + deg E0) + 2 Σ (d_i + deg E_i) = n`. Every pattern with nonzero
//! weight has some `e_j = 1` (`j ≤ 3`), so a point of degree `r` in the
//! support of `E` costs at least `2r`, which makes the sum finite.

use rayon::prelude::*;

use super::divide_torus;
use crate::error::{Error, Result};
use crate::ff_poly::{closed_points, ClosedPoint, FieldCtx};
use crate::moebius::surface_table;
use crate::sections::{count_ns, SectionProblem, Solver, Variant};
use crate::surface::{degree_vectors, DivTuple7};

/// `N(n)` for `0 ≤ n ≤ n_max`.
pub fn count_moebius(k: &FieldCtx, n_max: u32) -> Result<Vec<u128>> {
    (0..=n_max).map(|n| count_moebius_level(k, n)).collect()
}

/// `N(n)` at one level.
pub fn count_moebius_level(k: &FieldCtx, n: u32) -> Result<u128> {
    let signed = signed_sum_level(k, n)?;
    let raw = u128::try_from(signed).map_err(|_| Error::Internal(format!("negative Möbius sum {signed} at n = {n}")))?;
    divide_torus(raw, k.q() as u64, 4)
}

/// A pattern in `{0,1}^7` with nonzero weight and its cost `3 e0 + 2 Σ e_i`.
#[derive(Clone, Copy, Debug)]
struct Pattern {
    mask: u8,
    mu: i64,
    cost: u32,
}

fn patterns() -> Vec<Pattern> {
    let table = surface_table();
    table
        .support()
        .into_iter()
        .filter(|&m| m != 0)
        .map(|mask| {
            let cost = 3 * u32::from(mask & 1) + 2 * (mask >> 1 & 0b111).count_ones();
            Pattern {
                mask,
                mu: table.mu0_mask(mask),
                cost,
            }
        })
        .collect()
}

/// A divisor tuple with nonzero weight, its weight and its cost.
#[derive(Clone, Debug)]
pub struct WeightedTuple {
    pub tuple: DivTuple7,
    pub mu: i64,
    pub cost: u32,
}

/// All `E` with `μ(E) ≠ 0` and cost at most `budget`, including `E = 0`.
pub fn weighted_tuples(k: &FieldCtx, budget: u32) -> Vec<WeightedTuple> {
    let pats = patterns();
    debug_assert!(pats.iter().all(|p| p.cost >= 2));
    let points: Vec<ClosedPoint> = if budget < 2 {
        Vec::new()
    } else {
        closed_points(k, budget as usize / 2).into_iter().flatten().collect()
    };
    let mut out = Vec::new();
    let mut chosen: Vec<(usize, Pattern)> = Vec::new();
    extend(&points, &pats, 0, budget, &mut chosen, &mut out);
    out
}

fn extend(
    points: &[ClosedPoint],
    pats: &[Pattern],
    start: usize,
    budget: u32,
    chosen: &mut Vec<(usize, Pattern)>,
    out: &mut Vec<WeightedTuple>,
) {
    let mut tuple = DivTuple7::zero();
    let mut mu = 1;
    let mut cost = 0;
    for &(pi, pat) in chosen.iter() {
        for j in 0..7 {
            if pat.mask >> j & 1 == 1 {
                tuple.0[j].add_point(points[pi].clone(), 1);
            }
        }
        mu *= pat.mu;
        cost += pat.cost * points[pi].degree() as u32;
    }
    out.push(WeightedTuple { tuple, mu, cost });
    for pi in start..points.len() {
        let deg = points[pi].degree() as u32;
        if 2 * deg > budget - cost {
            // points are sorted by degree
            break;
        }
        for &pat in pats {
            if pat.cost * deg <= budget - cost {
                chosen.push((pi, pat));
                extend(points, pats, pi + 1, budget, chosen, out);
                chosen.pop();
            }
        }
    }
}

/// `Σ_E μ(E) Σ_d N_S(d, E)` at level `n`, before division by the torus.
pub fn signed_sum_level(k: &FieldCtx, n: u32) -> Result<i128> {
    let tuples = weighted_tuples(k, n);
    let parts: Result<Vec<i128>> = tuples
        .par_iter()
        .map(|w| {
            let rest = n - w.cost;
            let mut acc = 0i128;
            for d in degree_vectors(rest) {
                let pb = SectionProblem::new(k, d, &w.tuple);
                // a t-space of negative degree admits no nonzero t_i
                if (1..=3).any(|i| pb.psi(i) < 0) {
                    continue;
                }
                acc += count_ns(k, d, &w.tuple, Variant::Full, Solver::Dimensions)? as i128;
            }
            Ok(w.mu as i128 * acc)
        })
        .collect();
    Ok(parts?.into_iter().sum())
}

/// Contribution of `E = 0` alone (no inversion), for diagnostics.
pub fn untwisted_sum_level(k: &FieldCtx, n: u32) -> Result<u128> {
    let zero = DivTuple7::zero();
    degree_vectors(n)
        .into_iter()
        .map(|d| count_ns(k, d, &zero, Variant::Full, Solver::Dimensions))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heights::torsor::count_torsor_level;
    use crate::moebius::mu_div;

    fn f(q: u32) -> FieldCtx {
        FieldCtx::with_order(q).unwrap()
    }

    #[test]
    fn only_zero_tuple_at_small_levels() {
        let k = f(2);
        for n in 0..2 {
            let t = weighted_tuples(&k, n);
            assert_eq!(t.len(), 1);
            assert!(t[0].tuple.is_zero() && t[0].mu == 1);
        }
        assert!(weighted_tuples(&k, 2).len() > 1);
    }

    #[test]
    fn tuples_carry_their_weight_and_cost() {
        let k = f(2);
        let tuples = weighted_tuples(&k, 6);
        for w in &tuples {
            assert_eq!(w.mu, mu_div(&w.tuple));
            let deg = w.tuple.degrees();
            assert_eq!(w.cost as i64, 3 * deg[0] + 2 * (deg[1] + deg[2] + deg[3]));
            assert!(w.cost <= 6);
        }
        // enumeration is duplicate free
        let mut seen = std::collections::HashSet::new();
        assert!(tuples.iter().all(|w| seen.insert(w.tuple.clone())));
    }

    #[test]
    fn matches_torsor_count() {
        for (q, n_max) in [(2u32, 6u32), (3, 4)] {
            let k = f(q);
            for n in 0..=n_max {
                assert_eq!(count_moebius_level(&k, n).unwrap(), count_torsor_level(&k, n).unwrap(), "q={q} n={n}");
            }
        }
    }

    #[test]
    fn inversion_changes_the_count() {
        // without the twisted terms the count includes non-primitive tuples
        let k = f(2);
        let raw = untwisted_sum_level(&k, 4).unwrap();
        let corrected = signed_sum_level(&k, 4).unwrap();
        assert!(raw as i128 > corrected);
    }
}
