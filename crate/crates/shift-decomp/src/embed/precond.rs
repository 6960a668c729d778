use std::cmp::Ordering;

use num_bigint::BigInt;

use super::blowup::{blow_up, periodic_orbits, BlowupSpec};
use super::bn::is_irreducible_matrix;
use crate::algebra::{crossover, entropy, is_perron, perron_root, q_census, EntropyValue};
use crate::error::{Error, Result};
use crate::shift::{structure, ShiftSpace};
use crate::symbols::Word;

/// Krieger's conditions for X ↪ Y, checked exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbedPreconditionReport {
    pub entropy_ok: bool,
    /// q_k(X) ≤ q_k(Y) is certified for every k beyond this horizon.
    pub census_horizon: usize,
    pub census_ok: bool,
    /// Periods k ≤ horizon with q_k(X) > q_k(Y).
    pub witnesses: Vec<usize>,
}

impl EmbedPreconditionReport {
    pub fn holds(&self) -> bool {
        self.entropy_ok && self.census_ok
    }
}

fn check_target(y: &ShiftSpace) -> Result<()> {
    if !y.is_finite_type_form() || !structure(y)?.mixing {
        return Err(Error::NotMixingTarget);
    }
    Ok(())
}

/// h(X) < h(Y), and q_k(X) ≤ q_k(Y) for every k up to the crossover
/// horizon; past the horizon the inequality is certified by the bound.
pub fn embedding_preconditions(x: &ShiftSpace, y: &ShiftSpace) -> Result<EmbedPreconditionReport> {
    check_target(y)?;
    let entropy_ok = entropy(x)?.cmp_exact(&entropy(y)?) == Ordering::Less;
    if !entropy_ok {
        return Ok(EmbedPreconditionReport { entropy_ok, census_horizon: 0, census_ok: false, witnesses: vec![] });
    }
    let k_star = crossover(x, y)?.k_star;
    let witnesses = if k_star == 0 {
        vec![]
    } else {
        let qx = q_census(x, k_star)?;
        let qy = q_census(y, k_star)?;
        (1..=k_star).filter(|&k| qx.get(k) > qy.get(k)).collect()
    };
    Ok(EmbedPreconditionReport { entropy_ok, census_horizon: k_star, census_ok: witnesses.is_empty(), witnesses })
}

/// Nonnegative companion matrix of x^d − a₁x^(d−1) − … − a_d, when the
/// minimal polynomial of e^h has that form with every a_i ≥ 0, a_d ≥ 1.
pub fn dominant_companion(target: &EntropyValue) -> Option<Vec<Vec<u64>>> {
    let m = target.base.minimal();
    let p = m.poly();
    let d = p.degree();
    if d == 0 || p.lead() != BigInt::from(1) {
        return None;
    }
    let mut a = Vec::with_capacity(d);
    for i in 1..=d {
        let c = -p.coeff(d - i);
        if c < BigInt::from(0) {
            return None;
        }
        a.push(u64::try_from(c).ok()?);
    }
    if a[d - 1] == 0 {
        return None;
    }
    let mut mat = vec![vec![0u64; d]; d];
    mat[0] = a;
    for i in 1..d {
        mat[i][i - 1] = 1;
    }
    Some(mat)
}

#[derive(Clone, Debug)]
pub struct SandwichReport {
    pub w: ShiftSpace,
    pub w_matrix: Vec<Vec<u64>>,
    /// X ↪ W.
    pub lower: EmbedPreconditionReport,
    /// W ↪ Y.
    pub upper: EmbedPreconditionReport,
    pub blowups: Vec<BlowupSpec>,
}

/// Blow-ups applied before giving up.
pub const MAX_BLOWUPS: usize = 64;

fn matrix_of(w: &ShiftSpace) -> Vec<Vec<u64>> {
    match w.kind() {
        crate::shift::ShiftKind::EdgeShift { matrix } => matrix.clone(),
        _ => unreachable!("sandwich shifts are edge shifts"),
    }
}

/// First orbit whose least period divides k, shortest first.
fn orbit_dividing(w: &ShiftSpace, k: usize) -> Result<Option<Word>> {
    for n in (1..=k).filter(|n| k % n == 0) {
        if let Some(o) = periodic_orbits(w, n)?.into_iter().next() {
            return Ok(Some(o));
        }
    }
    Ok(None)
}

/// A mixing SFT W with h(W) = target and q_k(X) ≤ q_k(W) ≤ q_k(Y) for all k.
///
/// W starts as the realization (supplied, or the dominant companion of
/// e^target). While some k up to the two crossover horizons violates the
/// sandwich, one blow-up is applied: a short orbit of period dividing k
/// gains an extra orbit of length k when W has too few points, or an orbit
/// of length k is pushed past the horizon when W has too many.
pub fn census_sandwich(
    x: &ShiftSpace,
    y: &ShiftSpace,
    target: &EntropyValue,
    realization: Option<Vec<Vec<u64>>>,
) -> Result<SandwichReport> {
    check_target(y)?;
    if entropy(x)?.cmp_exact(target) != Ordering::Less || target.cmp_exact(&entropy(y)?) != Ordering::Less {
        return Err(Error::Precondition("need h(X) < target < h(Y)".into()));
    }
    let start = match realization {
        Some(m) => {
            if !is_irreducible_matrix(&m) || perron_root(&m)? != target.base {
                return Err(Error::RealizationUnavailable("supplied matrix does not realize the target".into()));
            }
            m
        }
        None => {
            if !is_perron(&target.base)? {
                return Err(Error::RealizationUnavailable("e^target is not a Perron number".into()));
            }
            dominant_companion(target).ok_or_else(|| {
                Error::RealizationUnavailable("minimal polynomial is not of dominant companion form".into())
            })?
        }
    };
    let mut w = ShiftSpace::edge_shift(start)?;
    if !structure(&w)?.mixing {
        return Err(Error::RealizationUnavailable("realization is not mixing".into()));
    }
    let mut blowups = Vec::new();
    for _ in 0..=MAX_BLOWUPS {
        let h = crossover(x, &w)?.k_star.max(crossover(&w, y)?.k_star).max(1);
        let qx = q_census(x, h)?;
        let qw = q_census(&w, h)?;
        let qy = q_census(y, h)?;
        let bad = (1..=h).find(|&k| qx.get(k) > qw.get(k) || qw.get(k) > qy.get(k));
        let Some(k) = bad else {
            let lower = embedding_preconditions(x, &w)?;
            let upper = embedding_preconditions(&w, y)?;
            if !lower.holds() || !upper.holds() {
                return Err(Error::Certificate("sandwich reports do not both hold".into()));
            }
            return Ok(SandwichReport { w_matrix: matrix_of(&w), w, lower, upper, blowups });
        };
        if qx.get(k) > qy.get(k) {
            return Err(Error::Precondition(format!("q_{k}(X) > q_{k}(Y); no W can sit between")));
        }
        if blowups.len() == MAX_BLOWUPS {
            break;
        }
        let spec = if qx.get(k) > qw.get(k) {
            let o = orbit_dividing(&w, k)?.ok_or_else(|| {
                Error::RealizationUnavailable(format!("W has no orbit of period dividing {k}; supply a realization"))
            })?;
            let extra = k / o.len();
            let mut m = vec![1];
            // ceil(deficit / k) new orbits of length k
            let deficit = qx.get(k) - qw.get(k);
            let count = (deficit + num_bigint::BigUint::from(k - 1)) / num_bigint::BigUint::from(k);
            let count: usize = count.try_into().map_err(|_| Error::Budget("deficit too large".into()))?;
            m.extend(std::iter::repeat(extra).take(count));
            BlowupSpec { orbit: o, multipliers: m }
        } else {
            let o = periodic_orbits(&w, k)?.into_iter().next().expect("q_k(W) > 0 means an orbit of period k");
            BlowupSpec { orbit: o, multipliers: vec![h / k + 1] }
        };
        w = blow_up(&w, &spec)?;
        blowups.push(spec);
    }
    Err(Error::IterationCap(format!("census sandwich not reached after {MAX_BLOWUPS} blow-ups")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraicReal;
    use crate::symbols::{word, Alphabet};

    fn golden() -> ShiftSpace {
        ShiftSpace::sft(Alphabet::new(vec!["0".into(), "1".into()]).unwrap(), vec![word("11")]).unwrap()
    }

    fn zero() -> ShiftSpace {
        ShiftSpace::sft(Alphabet::new(vec!["0".into(), "1".into()]).unwrap(), vec![word("1")]).unwrap()
    }

    #[test]
    fn krieger_examples() {
        let f2 = ShiftSpace::edge_shift(vec![vec![2]]).unwrap();
        let r = embedding_preconditions(&golden(), &f2).unwrap();
        assert!(r.entropy_ok && r.census_ok);
        assert!(!embedding_preconditions(&f2, &golden()).unwrap().entropy_ok);
        let b2 = ShiftSpace::edge_shift(vec![vec![0, 2], vec![2, 0]]).unwrap();
        assert!(!embedding_preconditions(&b2, &f2).unwrap().entropy_ok);
        assert_eq!(embedding_preconditions(&f2, &b2).unwrap_err(), Error::NotMixingTarget);
    }

    #[test]
    fn sandwiches() {
        let f2 = ShiftSpace::edge_shift(vec![vec![2]]).unwrap();
        let f3 = ShiftSpace::edge_shift(vec![vec![3]]).unwrap();
        let g = entropy(&golden()).unwrap();
        let s = census_sandwich(&zero(), &f2, &g, None).unwrap();
        assert_eq!(entropy(&s.w).unwrap(), g);
        let s = census_sandwich(&zero(), &f3, &EntropyValue::log_int(2), None).unwrap();
        assert!(s.lower.holds() && s.upper.holds());
        let root2 = EntropyValue::from_base(AlgebraicReal::largest_root(&crate::algebra::IntPoly::from_i64(&[-2, 0, 1])).unwrap());
        let e = census_sandwich(&zero(), &f2, &root2, None).unwrap_err();
        assert!(matches!(e, Error::RealizationUnavailable(_)));
    }
}
