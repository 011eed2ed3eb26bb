//! Counts of morphisms `P^1 → S` of fixed anticanonical degree meeting the
//! open set off the boundary lines, by three independent routes, and the
//! predicted leading behaviour.

pub mod constants;
pub mod geometric;
pub mod moebius_count;
pub mod torsor;

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff_poly::FieldCtx;

pub use constants::{gamma_s, gamma_s_exact, predict, DEFAULT_GAMMA_CUTOFF};
pub use geometric::count_geometric;
pub use moebius_count::count_moebius;
pub use torsor::{count_torsor, count_torsor_naive};

/// Which counter produced a record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Torsor,
    Geometric,
    Moebius,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Torsor, Method::Geometric, Method::Moebius];

    pub fn name(self) -> &'static str {
        match self {
            Method::Torsor => "torsor",
            Method::Geometric => "geometric",
            Method::Moebius => "moebius",
        }
    }

    /// Largest `n` run by default for field size `q`; `None` when `q` has
    /// no default budget.
    pub fn budget(self, q: u32) -> Option<u32> {
        let table: &[(u32, u32)] = match self {
            Method::Torsor | Method::Geometric => &[(2, 14), (3, 8), (4, 6), (5, 5)],
            Method::Moebius => &[(2, 10), (3, 6), (4, 4), (5, 4)],
        };
        table.iter().find(|&&(qq, _)| qq == q).map(|&(_, n)| n)
    }

    /// Errors unless `n_max` is within the default budget.
    pub fn check_budget(self, q: u32, n_max: u32) -> Result<()> {
        match self.budget(q) {
            Some(b) if n_max <= b => Ok(()),
            Some(b) => Err(Error::Budget(format!("{} counter: n_max {n_max} exceeds budget {b} for q = {q}", self.name()))),
            None => Err(Error::Budget(format!("{} counter: no default budget for q = {q}", self.name()))),
        }
    }

    /// Counts `N(n)` for `0 ≤ n ≤ n_max`.
    pub fn run(self, k: &FieldCtx, n_max: u32) -> Result<Vec<u128>> {
        match self {
            Method::Torsor => count_torsor(k, n_max),
            Method::Geometric => count_geometric(k, n_max),
            Method::Moebius => count_moebius(k, n_max),
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

/// One row of a count table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountRecord {
    pub n: u32,
    pub method: Method,
    pub count: u128,
    /// `α γ n³ qⁿ`, or 0 at `n = 0` where the prediction is not defined.
    pub predicted: f64,
    /// `count / predicted`; `None` at `n = 0`.
    pub ratio: Option<f64>,
    pub seconds: f64,
}

/// Runs one counter and wraps the results in records. With `timings` each
/// level is run and timed separately; otherwise `seconds` is 0 so that
/// output is reproducible.
pub fn count_records(k: &FieldCtx, method: Method, n_max: u32, timings: bool) -> Result<Vec<CountRecord>> {
    let q = k.q() as u64;
    let gamma = gamma_s(q, DEFAULT_GAMMA_CUTOFF);
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut push = |n: u32, count: u128, seconds: f64| {
        let predicted = if n == 0 { 0.0 } else { predict(q, n, gamma) };
        let ratio = (n > 0).then(|| count as f64 / predicted);
        out.push(CountRecord {
            n,
            method,
            count,
            predicted,
            ratio,
            seconds,
        });
    };
    if timings {
        for n in 0..=n_max {
            let start = Instant::now();
            let c = method.run_level(k, n)?;
            push(n, c, start.elapsed().as_secs_f64());
        }
    } else {
        for (n, c) in method.run(k, n_max)?.into_iter().enumerate() {
            push(n as u32, c, 0.0);
        }
    }
    Ok(out)
}

impl Method {
    /// `N(n)` for a single level.
    pub fn run_level(self, k: &FieldCtx, n: u32) -> Result<u128> {
        match self {
            Method::Torsor => torsor::count_torsor_level(k, n),
            Method::Geometric => geometric::count_geometric(k, n).map(|v| v[n as usize]),
            Method::Moebius => moebius_count::count_moebius_level(k, n),
        }
    }
}

/// Number of constant maps to the open part: `(q-1)(q-2)`.
pub fn constant_maps(q: u64) -> u128 {
    ((q - 1) * (q.saturating_sub(2))) as u128
}

/// Exact division by `(q-1)^e`, reporting a remainder as an error.
pub(crate) fn divide_torus(raw: u128, q: u64, e: u32) -> Result<u128> {
    let divisor = ((q - 1) as u128).pow(e);
    if !raw.is_multiple_of(divisor) {
        return Err(Error::NotDivisible { raw, divisor });
    }
    Ok(raw / divisor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budgets() {
        assert_eq!(Method::Torsor.budget(2), Some(14));
        assert_eq!(Method::Moebius.budget(3), Some(6));
        assert!(Method::Geometric.budget(7).is_none());
        assert!(Method::Torsor.check_budget(2, 14).is_ok());
        assert!(matches!(Method::Torsor.check_budget(2, 15), Err(Error::Budget(_))));
        assert_eq!("moebius".parse::<Method>().unwrap(), Method::Moebius);
        assert!("all".parse::<Method>().is_err());
    }

    #[test]
    fn records_have_prediction_columns() {
        let k = FieldCtx::with_order(2).unwrap();
        let recs = count_records(&k, Method::Torsor, 4, false).unwrap();
        assert_eq!(recs.len(), 5);
        assert_eq!(recs[0].ratio, None);
        assert_eq!(recs[0].predicted, 0.0);
        assert!(recs[4].ratio.unwrap() > 0.0);
        assert!(recs.iter().all(|r| r.seconds == 0.0));
        let timed = count_records(&k, Method::Torsor, 4, true).unwrap();
        let counts = |v: &[CountRecord]| v.iter().map(|r| r.count).collect::<Vec<_>>();
        assert_eq!(counts(&recs), counts(&timed));
    }
}
