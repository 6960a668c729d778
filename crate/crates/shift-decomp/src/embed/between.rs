use std::cmp::Ordering;

use crate::algebra::epsilon::below_plus;
use crate::algebra::{entropy, within, Certainty, EntropyValue, Epsilon};
use crate::error::{Error, Result};
use crate::shift::{forbid, in_language, is_subshift_of, min_step, words, ShiftSpace};

/// Class the returned shift must belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Require {
    None,
    Sofic,
    Sft,
}

impl std::str::FromStr for Require {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Require::None),
            "sofic" => Ok(Require::Sofic),
            "sft" => Ok(Require::Sft),
            _ => Err(Error::Parse(format!("unknown class {s:?}; expected none, sofic or sft"))),
        }
    }
}

fn meets(z: &ShiftSpace, require: Require) -> Result<bool> {
    Ok(match require {
        Require::Sft => min_step(z)?.is_some(),
        Require::Sofic | Require::None => true,
    })
}

/// Greedy search for Z with X ⊂ Z ⊂ Y, |h(Z) − target| < tol, in the
/// required class.
///
/// Starting from Y, words of length 1..=`max_len` are visited in
/// (length, lexicographic) order. Words of X are skipped, so X stays
/// inside. A word is forbidden when the entropy stays above target − tol.
/// The first shift reached that is within tolerance and in the class is
/// returned.
pub fn subshift_between_search(
    x: &ShiftSpace,
    y: &ShiftSpace,
    target: &EntropyValue,
    tol: &Epsilon,
    require: Require,
    max_len: usize,
) -> Result<ShiftSpace> {
    if !is_subshift_of(x, y)? {
        return Err(Error::Precondition("X is not contained in Y".into()));
    }
    if target.cmp_exact(&entropy(x)?) == Ordering::Less || target.cmp_exact(&entropy(y)?) == Ordering::Greater {
        return Err(Error::Precondition("target lies outside [h(X), h(Y)]".into()));
    }
    let mut cur = y.clone();
    let mut h = entropy(&cur)?;
    if within(&h, target, tol) == Certainty::Yes && meets(&cur, require)? {
        return Ok(cur);
    }
    for n in 1..=max_len {
        for w in words(&cur, n)? {
            if in_language(x, &w)? || !in_language(&cur, &w)? {
                continue;
            }
            let cand = forbid(&cur, &[w])?;
            let hc = entropy(&cand)?;
            if below_plus(target, &hc, tol) != Certainty::Yes {
                continue;
            }
            cur = cand;
            h = hc;
            if within(&h, target, tol) == Certainty::Yes && meets(&cur, require)? {
                return Ok(cur);
            }
        }
    }
    Err(Error::NotFound(format!(
        "no {require:?} shift within tolerance using forbidden words of length ≤ {max_len}; last entropy {:.6}",
        h.nats()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::perron_root;
    use crate::symbols::{word, Alphabet};

    fn zero() -> ShiftSpace {
        ShiftSpace::sft(Alphabet::new(vec!["0".into(), "1".into()]).unwrap(), vec![word("1")]).unwrap()
    }

    #[test]
    fn golden_between_zero_and_full() {
        let f2 = ShiftSpace::sft(Alphabet::new(vec!["0".into(), "1".into()]).unwrap(), vec![]).unwrap();
        let g = EntropyValue::from_base(perron_root(&[vec![1, 1], vec![1, 0]]).unwrap());
        let z = subshift_between_search(&zero(), &f2, &g, &Epsilon::parse("1/100").unwrap(), Require::Sft, 4).unwrap();
        assert_eq!(entropy(&z).unwrap(), g);
        assert!(in_language(&z, &word("0101")).unwrap() && !in_language(&z, &word("11")).unwrap());
        let top = subshift_between_search(&zero(), &f2, &EntropyValue::log_int(2), &Epsilon::parse("1/100").unwrap(), Require::Sft, 4).unwrap();
        assert_eq!(top, f2);
    }
}
