use std::cmp::Ordering;

use crate::algebra::epsilon::below_plus;
use crate::algebra::{entropy, within, Certainty, EntropyValue, Epsilon};
use crate::algebra::entropy::approx_base;
use crate::codes::{image, BlockMap};
use crate::error::{Error, Result};
use crate::shift::{forbid, min_step, words, ShiftSpace};

/// Largest word length tried by [`find_sub_sft`].
pub const MAX_WORD_LENGTH: usize = 14;

/// Greedy search for a sub-shift of finite type with entropy within `tol`
/// of `target` and strictly above `floor`.
///
/// For n = 1, 2, … the words of B_n(Z) are tried in lexicographic order and
/// a word is forbidden whenever the result keeps entropy above
/// max(floor, target − tol). A sofic `x` is searched through the edge shift
/// of its minimal right-resolving graph and the answer is the image.
pub fn find_sub_sft(x: &ShiftSpace, target: &EntropyValue, floor: &EntropyValue, tol: &Epsilon) -> Result<ShiftSpace> {
    if floor.cmp_exact(target) != Ordering::Less {
        return Err(Error::Precondition("floor must lie below the target".into()));
    }
    let hx = entropy(x)?;
    if target.cmp_exact(&hx) != Ordering::Less {
        return Err(Error::Precondition("target must lie below the entropy of the shift".into()));
    }
    if min_step(x)?.is_none() {
        let c = x.canon()?;
        let all: Vec<u32> = (0..c.ess.n_states as u32).collect();
        let cover = ShiftSpace::edge_shift(c.ess.adjacency(&all))?;
        let found = find_sub_sft(&cover, target, floor, tol)?;
        let label = cover_labels(&c.ess);
        let code = BlockMap::from_fn_into(cover, 0, 0, c.ess.alphabet.clone(), |e| label(e[0]))?;
        return image(&code.restrict(&found)?);
    }
    search(x, target, floor, tol, MAX_WORD_LENGTH)
}

fn cover_labels(p: &crate::graph::Presentation) -> impl Fn(&str) -> String + '_ {
    // Edge shift symbols are numbered row-major with parallel edges consecutive.
    let mut order: Vec<usize> = (0..p.edges.len()).collect();
    order.sort_by_key(|&i| (p.edges[i].from, p.edges[i].to));
    move |s: &str| {
        let i: usize = s.parse().unwrap();
        p.alphabet.symbol(p.edges[order[i]].label).to_string()
    }
}

fn search(x: &ShiftSpace, target: &EntropyValue, floor: &EntropyValue, tol: &Epsilon, max_n: usize) -> Result<ShiftSpace> {
    let mut cur = x.clone();
    let mut h = entropy(&cur)?;
    let lower_f = floor.nats().max(target.nats() - tol.to_f64());
    for n in 1..=max_n {
        if within(&h, target, tol) == Certainty::Yes {
            return Ok(cur);
        }
        for w in words(&cur, n)? {
            let cand = forbid(&cur, &[w])?;
            let (_, hi) = match approx_base(&cand) {
                Ok(b) => b,
                Err(Error::EmptyShift) => continue,
                Err(e) => return Err(e),
            };
            if hi <= 1.0 || hi.ln() < lower_f - 1e-9 {
                continue;
            }
            let hc = entropy(&cand)?;
            let above_floor = hc.cmp_exact(floor) == Ordering::Greater;
            // hc > target − tol  ⇔  target < hc + tol
            let above_band = below_plus(target, &hc, tol) == Certainty::Yes;
            if above_floor && above_band {
                cur = cand;
                h = hc;
                if within(&h, target, tol) == Certainty::Yes {
                    return Ok(cur);
                }
            }
        }
    }
    if within(&h, target, tol) == Certainty::Yes {
        return Ok(cur);
    }
    Err(Error::SearchExhausted { max_n, closest: format!("{:.6}", h.nats()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_entropy_expr;
    use crate::symbols::word;

    #[test]
    fn golden_from_full_two() {
        let f = ShiftSpace::edge_shift(vec![vec![2]]).unwrap();
        let g = parse_entropy_expr("1*log(2)").unwrap();
        let golden = crate::algebra::perron_root(&[vec![1, 1], vec![1, 0]]).unwrap();
        let target = EntropyValue::from_base(golden);
        let z = find_sub_sft(&f, &target, &EntropyValue::zero(), &Epsilon::parse("1/100").unwrap()).unwrap();
        assert_eq!(entropy(&z).unwrap(), target);
        assert_eq!(z.declared_step(), Some(1));
        assert!(crate::shift::in_language(&z, &word("0101")).unwrap());
        let e = find_sub_sft(&f, &target, &g, &Epsilon::parse("1/100").unwrap()).unwrap_err();
        assert!(matches!(e, Error::Precondition(_)));
    }
}
