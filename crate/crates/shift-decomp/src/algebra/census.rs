//! Periodic-point censuses q_k.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{Presentation, NONE};
use crate::shift::ShiftSpace;

/// Number of points of least period k, for 1 ≤ k ≤ horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicCensus {
    pub horizon: usize,
    /// `q[k - 1]` is q_k.
    pub q: Vec<BigUint>,
}

impl PeriodicCensus {
    pub fn get(&self, k: usize) -> BigUint {
        self.q[k - 1].clone()
    }

    /// Points whose period divides k.
    pub fn fixed_by(&self, k: usize) -> BigUint {
        (1..=k).filter(|d| k % d == 0).map(|d| self.get(d)).sum()
    }

    pub fn as_map(&self) -> BTreeMap<usize, BigUint> {
        self.q.iter().enumerate().map(|(i, v)| (i + 1, v.clone())).collect()
    }
}

pub fn mobius(mut n: usize) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Least-period counts from counts of points fixed by σ^k.
pub fn least_periods(fixed: &[BigUint]) -> Vec<BigUint> {
    let k = fixed.len();
    (1..=k)
        .map(|n| {
            let mut s = BigInt::zero();
            for d in (1..=n).filter(|d| n % d == 0) {
                match mobius(n / d) {
                    1 => s += BigInt::from(fixed[d - 1].clone()),
                    -1 => s -= BigInt::from(fixed[d - 1].clone()),
                    _ => {}
                }
            }
            s.to_biguint().expect("least-period count is nonnegative")
        })
        .collect()
}

/// tr(A^j) for j = 1..=k, where A is the adjacency matrix of `p`.
pub fn traces(p: &Presentation, k: usize) -> Vec<BigUint> {
    let mut tr = vec![BigUint::zero(); k];
    for comp in p.nontrivial_sccs() {
        let mut pos = vec![usize::MAX; p.n_states];
        for (i, &s) in comp.iter().enumerate() {
            pos[s as usize] = i;
        }
        let edges: Vec<(usize, usize)> = p
            .edges
            .iter()
            .filter_map(|e| {
                let (i, j) = (pos[e.from as usize], pos[e.to as usize]);
                (i != usize::MAX && j != usize::MAX).then_some((i, j))
            })
            .collect();
        let n = comp.len();
        if edges.len() == n {
            // A single cycle of length n.
            for j in (n..=k).step_by(n) {
                tr[j - 1] += n as u64;
            }
            continue;
        }
        for start in 0..n {
            let mut v = vec![BigUint::zero(); n];
            v[start] = BigUint::from(1u8);
            for t in tr.iter_mut() {
                let mut w = vec![BigUint::zero(); n];
                for &(i, j) in &edges {
                    if !v[i].is_zero() {
                        w[j] += &v[i];
                    }
                }
                v = w;
                *t += &v[start];
            }
        }
    }
    tr
}

/// Points of period dividing j in the shift presented by a right-resolving
/// graph: words w of length j for which δ_w has a periodic state.
fn sofic_fixed_counts(p: &Presentation, k: usize, budget: usize) -> Result<Vec<BigUint>> {
    let n = p.n_states;
    let a = p.alphabet.len();
    let mut delta = vec![NONE; n * a];
    for e in &p.edges {
        delta[e.from as usize * a + e.label as usize] = e.to;
    }
    let has_cycle = |f: &[u32]| -> bool {
        // A partial function has a periodic point iff iterating from some state returns.
        let mut color = vec![0u8; n];
        for s in 0..n {
            if color[s] != 0 {
                continue;
            }
            let mut path = Vec::new();
            let mut x = s as u32;
            while x != NONE && color[x as usize] == 0 {
                color[x as usize] = 1;
                path.push(x);
                x = f[x as usize];
            }
            if x != NONE && color[x as usize] == 1 {
                return true;
            }
            for y in path {
                color[y as usize] = 2;
            }
        }
        false
    };
    let mut layer: HashMap<Vec<u32>, BigUint> = HashMap::new();
    layer.insert((0..n as u32).collect(), BigUint::from(1u8));
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let mut next: HashMap<Vec<u32>, BigUint> = HashMap::new();
        for (f, c) in &layer {
            for x in 0..a {
                let g: Vec<u32> = f.iter().map(|&s| if s == NONE { NONE } else { delta[s as usize * a + x] }).collect();
                if g.iter().all(|&s| s == NONE) {
                    continue;
                }
                *next.entry(g).or_default() += c;
            }
        }
        if next.len() > budget {
            return Err(Error::Budget(format!("sofic census needs more than {budget} transition functions")));
        }
        let total: BigUint = next.iter().filter(|(f, _)| has_cycle(f)).map(|(_, c)| c.clone()).sum();
        out.push(total);
        layer = next;
    }
    Ok(out)
}

/// Exact q_k for 1 ≤ k ≤ horizon.
pub fn q_census(x: &ShiftSpace, horizon: usize) -> Result<PeriodicCensus> {
    if horizon == 0 {
        return Err(Error::Precondition("census horizon must be at least 1".into()));
    }
    let fixed = if x.is_finite_type_form() {
        traces(&x.path_graph()?.pres, horizon)
    } else {
        let c = x.canon()?;
        sofic_fixed_counts(&c.ess, horizon, 2_000_000)?
    };
    Ok(PeriodicCensus { horizon, q: least_periods(&fixed) })
}

/// q_k of a matrix's edge shift.
pub fn matrix_census(a: &[Vec<u64>], horizon: usize) -> Result<PeriodicCensus> {
    q_census(&ShiftSpace::edge_shift(a.to_vec())?, horizon)
}

pub fn to_u64_vec(c: &PeriodicCensus) -> Vec<u64> {
    c.q.iter().map(|x| x.to_u64().unwrap_or(u64::MAX)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{word, Alphabet};

    #[test]
    fn full_two_shift() {
        let c = matrix_census(&[vec![2]], 3).unwrap();
        assert_eq!(to_u64_vec(&c), vec![2, 2, 6]);
    }

    #[test]
    fn golden_mean() {
        let g = ShiftSpace::sft(Alphabet::new(vec!["0".into(), "1".into()]).unwrap(), vec![word("11")]).unwrap();
        assert_eq!(to_u64_vec(&q_census(&g, 3).unwrap()), vec![1, 2, 3]);
    }

    #[test]
    fn single_loop() {
        assert_eq!(to_u64_vec(&matrix_census(&[vec![1]], 5).unwrap()), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn even_shift_counts_points_not_cycles() {
        let even = ShiftSpace::sofic(
            vec!["a".into(), "b".into()],
            vec![("a".into(), "a".into(), "1".into()), ("a".into(), "b".into(), "0".into()), ("b".into(), "a".into(), "0".into())],
        )
        .unwrap();
        // Fixed points 0^∞ and 1^∞; period 2: (01)^∞ is excluded, (00)… is 0^∞.
        let c = q_census(&even, 4).unwrap();
        assert_eq!(c.get(1), BigUint::from(2u8));
        assert_eq!(c.get(2), BigUint::from(0u8));
    }

    #[test]
    fn mobius_values() {
        assert_eq!((1..=10).map(mobius).collect::<Vec<_>>(), vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }
}
