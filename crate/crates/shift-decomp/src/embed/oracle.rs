use std::cmp::Ordering;

use crate::algebra::{is_perron, is_weak_perron, EntropyValue};
use crate::error::{Error, Result};

/// Entropy sets of intermediate shifts for an embedding φ: X → Y.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntropySet {
    /// All intermediate shifts, h(X) excluded.
    TPrime,
    /// Intermediate shifts of finite type.
    T0,
    /// Sofic intermediate shifts, h(X) excluded.
    T1Prime,
}

#[derive(Clone, Debug)]
pub struct EntropySetQuery {
    pub set: EntropySet,
    pub h: EntropyValue,
    pub hx: EntropyValue,
    pub hy: EntropyValue,
    /// Period of X (used by T0).
    pub p: u64,
    /// Period of Y (used by T0).
    pub q: u64,
    /// Largest r tried for T0.
    pub r_bound: u64,
    /// Admit h = h(X) for T′ and T₁′ (X irreducible).
    pub x_irreducible: bool,
    /// T0 for a nonwandering X: h = h(X) is excluded.
    pub nonwandering: bool,
}

impl EntropySetQuery {
    pub fn new(set: EntropySet, h: EntropyValue, hx: EntropyValue, hy: EntropyValue) -> Self {
        EntropySetQuery { set, h, hx, hy, p: 1, q: 1, r_bound: u64::MAX, x_irreducible: false, nonwandering: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// T0: the r with e^(r·h) Perron. T₁′: the weak Perron exponent.
    pub witness: Option<u64>,
    /// The hypotheses the answer rests on.
    pub hypotheses: String,
}

fn divisors(p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..).take_while(|d| d * d <= p).filter(|d| p % d == 0).flat_map(|d| [d, p / d]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Exact membership of h in the chosen entropy set.
pub fn membership(query: &EntropySetQuery) -> Result<Membership> {
    let EntropySetQuery { set, h, hx, hy, p, q, r_bound, x_irreducible, nonwandering } = query;
    if hx.cmp_exact(hy) == Ordering::Greater {
        return Err(Error::Precondition("need h(X) ≤ h(Y)".into()));
    }
    if *p == 0 || *q == 0 {
        return Err(Error::Precondition("periods must be at least 1".into()));
    }
    let above_low = match h.cmp_exact(hx) {
        Ordering::Greater => true,
        Ordering::Equal => match set {
            EntropySet::T0 => !nonwandering,
            _ => *x_irreducible,
        },
        Ordering::Less => false,
    };
    let in_range = above_low && h.cmp_exact(hy) != Ordering::Greater;
    let closed = |c: bool| if c { "[h(X), h(Y)]" } else { "(h(X), h(Y)]" };
    match set {
        EntropySet::TPrime => Ok(Membership {
            member: in_range,
            witness: None,
            hypotheses: format!("Y irreducible sofic; interval {}", closed(*x_irreducible)),
        }),
        EntropySet::T1Prime => {
            let witness = if in_range { is_weak_perron(&h.base)? } else { None };
            Ok(Membership {
                member: witness.is_some(),
                witness,
                hypotheses: format!(
                    "Y irreducible sofic{}; interval {} intersected with weak Perron logarithms",
                    if *x_irreducible { ", X irreducible sofic" } else { "" },
                    closed(*x_irreducible)
                ),
            })
        }
        EntropySet::T0 => {
            let hypotheses = format!(
                "X {} shift of finite type with period {p}, Y irreducible shift of finite type with period {q}; interval {}",
                if *nonwandering { "nonwandering" } else { "irreducible" },
                closed(!nonwandering)
            );
            if !in_range {
                return Ok(Membership { member: false, witness: None, hypotheses });
            }
            let mut skipped = false;
            for r in divisors(*p).into_iter().filter(|r| r % q == 0) {
                if r > *r_bound {
                    skipped = true;
                    continue;
                }
                if is_perron(&h.base.pow(r as u32))? {
                    return Ok(Membership { member: true, witness: Some(r), hypotheses });
                }
            }
            if skipped {
                return Err(Error::Budget(format!("divisors of {p} above r_bound = {r_bound} were not tried")));
            }
            Ok(Membership { member: false, witness: None, hypotheses })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraicReal, IntPoly};

    fn root(c: &[i64]) -> EntropyValue {
        EntropyValue::from_base(AlgebraicReal::largest_root(&IntPoly::from_i64(c)).unwrap())
    }

    #[test]
    fn t0_square_root_two() {
        let s2 = root(&[-2, 0, 1]);
        let mut q = EntropySetQuery::new(EntropySet::T0, s2, EntropyValue::zero(), EntropyValue::log_int(2));
        q.p = 2;
        let m = membership(&q).unwrap();
        assert_eq!((m.member, m.witness), (true, Some(2)));
        q.p = 1;
        assert!(!membership(&q).unwrap().member);
        q.p = 4;
        assert!(membership(&q).unwrap().member);
    }

    #[test]
    fn intervals() {
        let g = root(&[-1, -1, 1]);
        let q = EntropySetQuery::new(EntropySet::TPrime, g.clone(), EntropyValue::zero(), EntropyValue::log_int(2));
        assert!(membership(&q).unwrap().member);
        let mut at_low = EntropySetQuery::new(EntropySet::TPrime, g.clone(), g.clone(), EntropyValue::log_int(2));
        assert!(!membership(&at_low).unwrap().member);
        at_low.x_irreducible = true;
        assert!(membership(&at_low).unwrap().member);
        let w = EntropySetQuery::new(EntropySet::T1Prime, root(&[-2, 0, 1]), EntropyValue::zero(), EntropyValue::log_int(2));
        assert_eq!(membership(&w).unwrap().witness, Some(2));
    }
}
