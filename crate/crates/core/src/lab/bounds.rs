//! Closed-form upper bounds on conjugator length, evaluated in exact
//! integer arithmetic.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Named conjugator-length bounds. Tags are the identifiers used in CSV
/// headers and on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundId {
    /// `(n + 1) P (2δ(P) + 1)`, wreath products with infinite-order cursor.
    InfiniteOrder,
    /// `P (N + 1)(2n + CLF_A + 1)`, cursor of finite order `N`.
    FiniteOrder,
    /// Whichever of the two applies, with `P = max(2n, n + CLF_B(n))`.
    Wreath,
    /// `(16n² + 8n)(2Δ(4n) + 1)` for `F/N'`.
    Metabelian,
    /// `(16n² + 8n)(16n + 1)` for free solvable groups.
    FreeSolvable,
}

impl BoundId {
    pub const ALL: [BoundId; 5] = [
        BoundId::InfiniteOrder,
        BoundId::FiniteOrder,
        BoundId::Wreath,
        BoundId::Metabelian,
        BoundId::FreeSolvable,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            BoundId::InfiniteOrder => "L15",
            BoundId::FiniteOrder => "L17",
            BoundId::Wreath => "T18",
            BoundId::Metabelian => "T210",
            BoundId::FreeSolvable => "C211",
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundId::ALL
            .into_iter()
            .find(|b| b.tag().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::input(format!("unknown bound `{s}` (expected L15, L17, T18, T210 or C211)")))
    }
}

/// Inputs to [`bound_evaluate`]. Unused fields are ignored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundParams {
    /// `n = |u| + |v|`.
    pub n: u64,
    /// `P`; when absent the conservative `max(2n, n + clf_b)` is used.
    pub p: Option<u64>,
    /// `δ⟨b⟩(P)`.
    pub delta_p: Option<u64>,
    /// Order `N` of the cursor, `None` for infinite.
    pub order: Option<u64>,
    /// `CLF_A(n)`.
    pub clf_a: u64,
    /// `CLF_B(n)`.
    pub clf_b: u64,
    /// `Δ(4n)`.
    pub delta_4n: Option<u64>,
}

impl BoundParams {
    pub fn conservative_p(&self) -> u64 {
        (2 * self.n).max(self.n + self.clf_b)
    }
}

fn mul(parts: &[u64]) -> Result<u64> {
    parts.iter().try_fold(1u64, |acc, &x| {
        acc.checked_mul(x)
            .ok_or_else(|| Error::input("bound value overflows 64 bits"))
    })
}

fn need(value: Option<u64>, what: &str, id: BoundId) -> Result<u64> {
    value.ok_or_else(|| Error::input(format!("bound {id} needs {what}")))
}

pub fn bound_evaluate(id: BoundId, params: &BoundParams) -> Result<u64> {
    let n = params.n;
    if n == 0 {
        return Ok(0);
    }
    let p = params.p.unwrap_or_else(|| params.conservative_p());
    match id {
        BoundId::InfiniteOrder => {
            let d = need(params.delta_p, "δ(P)", id)?;
            mul(&[n + 1, p, 2 * d + 1])
        }
        BoundId::FiniteOrder => {
            let order = need(params.order, "the order N", id)?;
            mul(&[p, order + 1, 2 * n + params.clf_a + 1])
        }
        BoundId::Wreath => match params.order {
            Some(_) => bound_evaluate(BoundId::FiniteOrder, &BoundParams { p: Some(p), ..params.clone() }),
            None => bound_evaluate(BoundId::InfiniteOrder, &BoundParams { p: Some(p), ..params.clone() }),
        },
        BoundId::Metabelian => {
            let d = need(params.delta_4n, "Δ(4n)", id)?;
            mul(&[16 * n * n + 8 * n, 2 * d + 1])
        }
        BoundId::FreeSolvable => mul(&[16 * n * n + 8 * n, 16 * n + 1]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        let c = bound_evaluate(BoundId::FreeSolvable, &BoundParams { n: 1, ..Default::default() }).unwrap();
        assert_eq!(c, 408);
        let l = BoundParams { n: 2, p: Some(4), delta_p: Some(4), ..Default::default() };
        assert_eq!(bound_evaluate(BoundId::InfiniteOrder, &l).unwrap(), 108);
        let f = BoundParams { n: 2, p: Some(4), order: Some(2), clf_a: 3, ..Default::default() };
        assert_eq!(bound_evaluate(BoundId::FiniteOrder, &f).unwrap(), 4 * 3 * 8);
        let t = BoundParams { n: 1, delta_4n: Some(4), ..Default::default() };
        assert_eq!(bound_evaluate(BoundId::Metabelian, &t).unwrap(), 24 * 9);
    }

    #[test]
    fn zero_at_zero() {
        for id in BoundId::ALL {
            assert_eq!(bound_evaluate(id, &BoundParams::default()).unwrap(), 0);
        }
    }

    #[test]
    fn conservative_p_and_dispatch() {
        let params = BoundParams { n: 3, delta_p: Some(6), clf_b: 1, ..Default::default() };
        assert_eq!(params.conservative_p(), 6);
        assert_eq!(
            bound_evaluate(BoundId::Wreath, &params).unwrap(),
            bound_evaluate(BoundId::InfiniteOrder, &BoundParams { p: Some(6), ..params.clone() }).unwrap()
        );
        assert!("t18".parse::<BoundId>().is_ok());
        assert!("L99".parse::<BoundId>().is_err());
        assert!(bound_evaluate(BoundId::InfiniteOrder, &BoundParams { n: 1, ..Default::default() }).is_err());
    }
}
