//! The constant `γ` as a product of local factors over closed points of
//! `P^1`, and the predicted count `α γ n³ qⁿ`.
//!
//! At a point with residue field of size `q_v`, the local factor is
//! `(1 - 1/q_v)^4 |S(F_{q_v})| / q_v^2` with `|S(F_{q_v})| = q_v^2 + 4 q_v + 1`,
//! i.e. `(1-x)^4 (1 + 4x + x^2)` with `x = 1/q_v`, which is `1 - 9x^2 + O(x^3)`.

use num_traits::ToPrimitive;

use crate::ratfunc::{int, powi, Rational};
use crate::surface::alpha_s;

/// Cutoff used for predictions; the omitted tail is below `10^{-8}`
/// relative for every `q ≥ 2`.
pub const DEFAULT_GAMMA_CUTOFF: u32 = 30;

/// Number of closed points of degree `n` on `P^1` over F_q, in `u128`.
pub fn closed_points_of_degree(q: u64, n: u32) -> u128 {
    let q = q as u128;
    let mut total: i128 = 0;
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        total += moebius_fn(n / d) as i128 * q.pow(d) as i128;
    }
    let finite = (total / n as i128) as u128;
    finite + u128::from(n == 1)
}

fn moebius_fn(mut n: u32) -> i32 {
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

/// `(1 - 1/q_v)^4 (q_v^2 + 4 q_v + 1) / q_v^2`.
pub fn local_factor(qv: &Rational) -> Rational {
    let x = qv.recip();
    powi(&(int(1) - &x), 4) * (int(1) + int(4) * &x + &x * &x)
}

/// `(1 - 1/q)^{-4} q^2 Π_{deg v ≤ cutoff} local_factor(q^{deg v})` exactly.
pub fn gamma_s_exact(q: u64, cutoff: u32) -> Rational {
    let qr = int(q as i64);
    let mut acc = powi(&(int(1) - qr.recip()), -4) * powi(&qr, 2);
    for deg in 1..=cutoff {
        let count = closed_points_of_degree(q, deg);
        let factor = local_factor(&powi(&qr, deg as i32));
        let count = i32::try_from(count).expect("point count fits the exponent range");
        acc *= powi(&factor, count);
    }
    acc
}

/// `γ` truncated at `cutoff` in floating point, summed in log space.
pub fn gamma_s(q: u64, cutoff: u32) -> f64 {
    let qf = q as f64;
    let mut log = -4.0 * (-1.0 / qf).ln_1p() + 2.0 * qf.ln();
    for deg in 1..=cutoff {
        let x = qf.powi(-(deg as i32));
        let local = 4.0 * (-x).ln_1p() + (4.0 * x + x * x).ln_1p();
        log += closed_points_of_degree(q, deg) as f64 * local;
    }
    log.exp()
}

/// `-9 Σ_{lo < deg ≤ hi} N_deg q^{-2 deg}`: the leading-order change in
/// `log γ` between two cutoffs.
pub fn log_gamma_tail_estimate(q: u64, lo: u32, hi: u32) -> f64 {
    (lo + 1..=hi)
        .map(|d| -9.0 * closed_points_of_degree(q, d) as f64 * (q as f64).powi(-2 * d as i32))
        .sum()
}

/// `α γ n³ qⁿ`.
pub fn predict(q: u64, n: u32, gamma: f64) -> f64 {
    let alpha = alpha_s().to_f64().unwrap_or(f64::NAN);
    alpha * gamma * (n as f64).powi(3) * (q as f64).powi(n as i32)
}

/// `1 / (24 (1 - 1/q)^4)`, the product `α` times the residue at `T = 1/q`.
pub fn alpha_times_residue(q: u64) -> Rational {
    alpha_s() * crate::series::main_term_residue(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff_poly::{closed_point_count, FieldCtx};
    use crate::local::s_count_torsor;
    use crate::ratfunc::{rat, to_f64};

    #[test]
    fn point_counts_match_sieve() {
        for q in [2u64, 3, 4, 5] {
            for n in 1..=6 {
                assert_eq!(closed_points_of_degree(q, n), closed_point_count(q, n) as u128);
            }
        }
        assert_eq!(closed_points_of_degree(2, 10), 99);
        assert_eq!(closed_points_of_degree(2, 9), 56);
    }

    #[test]
    fn local_factor_matches_torsor_point_counts() {
        for qv in [2u32, 3, 4, 5, 7, 8, 9, 16] {
            let pts = s_count_torsor(&FieldCtx::with_order(qv).unwrap()).unwrap().points;
            let q = int(qv as i64);
            let direct = powi(&(int(1) - q.recip()), 4) * int(pts as i64) / powi(&q, 2);
            assert_eq!(local_factor(&q), direct, "q_v={qv}");
        }
    }

    #[test]
    fn cutoff_one_value() {
        // 16 · 4 · (13/64)^3
        assert_eq!(gamma_s_exact(2, 1), int(64) * powi(&rat(13, 64), 3));
    }

    #[test]
    fn float_matches_exact() {
        for q in [2u64, 3] {
            for cutoff in [1u32, 4, 8] {
                let exact = to_f64(&gamma_s_exact(q, cutoff));
                let float = gamma_s(q, cutoff);
                assert!((exact - float).abs() < 1e-12 * exact, "q={q} cutoff={cutoff}");
            }
        }
    }

    #[test]
    fn cutoff_change_follows_tail_estimate() {
        let g8 = to_f64(&gamma_s_exact(2, 8));
        let g10 = to_f64(&gamma_s_exact(2, 10));
        let actual = (g10 / g8).ln();
        let estimate = log_gamma_tail_estimate(2, 8, 10);
        // the next term of the local expansion is O(x^3)
        assert!((actual - estimate).abs() < 0.05 * estimate.abs(), "actual={actual} estimate={estimate}");
        // converged value agrees with a long cutoff
        assert!((gamma_s(2, 30) - gamma_s(2, 60)).abs() < 1e-8);
    }

    #[test]
    fn prediction_scaling() {
        let g = gamma_s(2, DEFAULT_GAMMA_CUTOFF);
        assert!((predict(2, 1, g) - g * 2.0 / 24.0).abs() < 1e-15);
        let r = predict(3, 7, 1.0) / predict(3, 6, 1.0);
        assert!((r - 3.0 * (7.0f64 / 6.0).powi(3)).abs() < 1e-12);
        assert_eq!(alpha_times_residue(2), rat(1, 24) * rat(2, 3));
    }
}
