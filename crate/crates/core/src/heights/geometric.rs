//! Morphism count through the plane model: `S` is the blow-up of `P^2` in
//! `p1 = (1:0:0)`, `p2 = (0:1:0)`, `p3 = (1:1:0)` on the line `L = {x2 = 0}`.
//!
//! A non-constant map `P^1 → S` meeting the open part is a map
//! `(g0 : g1 : g2)` of degree `e` with coprime coordinates whose image is
//! none of `L`, `L1 = {x1 = 0}`, `L2 = {x0 = 0}`, `L3 = {x0 = x1}`. Its
//! anticanonical degree is `3e - m1 - m2 - m3`, where `m_i` is the length
//! of the fiber over `p_i`: `m1 = deg gcd(g1, g2)`, `m2 = deg gcd(g0, g2)`,
//! `m3 = deg gcd(g0 - g1, g2)`. The three gcds divide `g2` and are pairwise
//! coprime, so `n ≥ 2e`.

use rayon::prelude::*;

use super::constant_maps;
use crate::error::Result;
use crate::ff_poly::{BinaryForm, FieldCtx, FormSpace};

/// `N(n)` for `0 ≤ n ≤ n_max`.
pub fn count_geometric(k: &FieldCtx, n_max: u32) -> Result<Vec<u128>> {
    let mut counts = vec![0u128; n_max as usize + 1];
    counts[0] = constant_maps(k.q() as u64);
    for e in 1..=n_max / 2 {
        for (n, c) in count_degree(k, e as usize).into_iter().enumerate() {
            if n <= n_max as usize {
                counts[n] += c;
            }
        }
    }
    Ok(counts)
}

/// Whether the last nonzero coefficient is 1: one representative per
/// line through a nonzero form.
fn is_normalized(f: &BinaryForm) -> bool {
    f.coeffs().iter().rev().find(|c| !c.is_zero()).is_some_and(|c| c.0 == 1)
}

/// Counts projective maps of degree `e` by anticanonical degree `0..=3e`.
/// Scaling is removed by normalizing `g2`, which never vanishes.
pub fn count_degree(k: &FieldCtx, e: usize) -> Vec<u128> {
    let space = FormSpace::new(k, e);
    let all: Vec<BinaryForm> = space.iter(false).collect();
    let g2s: Vec<&BinaryForm> = all.iter().filter(|f| is_normalized(f)).collect();
    g2s.par_iter()
        .map(|g2| {
            let mut local = vec![0u128; 3 * e + 1];
            for g1 in all.iter().filter(|f| !f.is_zero()) {
                let h1 = g1.gcd(k, g2);
                for g0 in all.iter().filter(|f| !f.is_zero() && *f != g1) {
                    if h1.degree() > 0 && g0.gcd_degree(k, &h1) > 0 {
                        continue;
                    }
                    let m2 = g0.gcd_degree(k, g2);
                    let m3 = g0.sub(k, g1).gcd_degree(k, g2);
                    local[3 * e - h1.degree() - m2 - m3] += 1;
                }
            }
            local
        })
        .reduce(
            || vec![0u128; 3 * e + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

/// Points of `P^2` off the four lines, found by running the degree-0
/// case of [`count_degree`].
pub fn constant_maps_enumerated(k: &FieldCtx) -> u128 {
    count_degree(k, 0)[0]
}
