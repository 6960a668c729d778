//! Entropy as the logarithm of an exact Perron root.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use super::modular::char_poly;
use super::poly::IntPoly;
use super::real::AlgebraicReal;
use crate::error::{Error, Result};
use crate::graph::{Edge, Presentation};
use crate::shift::ShiftSpace;
use crate::symbols::Alphabet;

/// `log(base)`; comparisons go through the exact base.
#[derive(Clone)]
pub struct EntropyValue {
    pub base: AlgebraicReal,
    pub approx: f64,
}

impl fmt::Debug for EntropyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "log({:?}) ≈ {:.6}", self.base, self.nats())
    }
}

impl EntropyValue {
    pub fn from_base(base: AlgebraicReal) -> Self {
        let approx = base.to_f64();
        EntropyValue { base, approx }
    }

    /// log 1 = 0.
    pub fn zero() -> Self {
        Self::from_base(AlgebraicReal::from_int(1))
    }

    /// log n for a positive integer n.
    pub fn log_int(n: i64) -> Self {
        Self::from_base(AlgebraicReal::from_int(n))
    }

    /// Value in natural-log units (display only).
    pub fn nats(&self) -> f64 {
        self.approx.ln()
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        self.base.cmp_exact(&other.base)
    }
}

impl PartialEq for EntropyValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }
}

/// Trichotomy on entropies.
pub fn compare(a: &EntropyValue, b: &EntropyValue) -> Ordering {
    a.cmp_exact(b)
}

fn unit_alphabet() -> Alphabet {
    Alphabet::new(vec!["e".into()]).unwrap()
}

fn matrix_presentation(a: &[Vec<u64>]) -> Presentation {
    let mut edges = Vec::new();
    for (i, row) in a.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            for _ in 0..c {
                edges.push(Edge { from: i as u32, to: j as u32, label: 0 });
            }
        }
    }
    Presentation::new(unit_alphabet(), a.len(), edges)
}

/// Spectral radius of a nonnegative integer matrix.
pub fn perron_root(a: &[Vec<u64>]) -> Result<AlgebraicReal> {
    if a.iter().flatten().all(|&x| x == 0) {
        return Err(Error::ZeroMatrix);
    }
    Ok(spectral_radius(&matrix_presentation(a)))
}

/// Float bounds on the spectral radius of an irreducible component,
/// from Collatz–Wielandt quotients of power iterates of A + I.
pub fn float_bounds(n: usize, edges: &[(usize, usize)]) -> (f64, f64) {
    let mut v = vec![1.0f64; n];
    let mut lower = 0.0f64;
    let mut upper = f64::INFINITY;
    for _ in 0..400 {
        let mut w = v.clone();
        for &(i, j) in edges {
            w[i] += v[j];
        }
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..n {
            let q = w[i] / v[i];
            lo = lo.min(q);
            hi = hi.max(q);
        }
        lower = lower.max(lo - 1.0);
        upper = upper.min(hi - 1.0);
        let s = w.iter().cloned().fold(0.0, f64::max);
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = (wi / s).max(1e-300);
        }
        if upper - lower < 1e-12 * upper.max(1.0) {
            break;
        }
    }
    (lower, upper)
}

/// Characteristic polynomials above this degree are not factored when the
/// Perron root can be certified directly.
const FACTOR_DEGREE: usize = 24;

/// Exact spectral radius of a graph's adjacency matrix (labels ignored).
pub fn spectral_radius(p: &Presentation) -> AlgebraicReal {
    let comps = p.nontrivial_sccs();
    if comps.is_empty() {
        return AlgebraicReal::from_int(0);
    }
    let mut cands: Vec<(Vec<u32>, f64, f64)> = Vec::new();
    let mut pos = vec![usize::MAX; p.n_states];
    for comp in comps {
        for (i, &s) in comp.iter().enumerate() {
            pos[s as usize] = i;
        }
        let mut local = Vec::new();
        for e in &p.edges {
            let (i, j) = (pos[e.from as usize], pos[e.to as usize]);
            if i != usize::MAX && j != usize::MAX && comp.binary_search(&e.from).is_ok() && comp.binary_search(&e.to).is_ok() {
                local.push((i, j));
            }
        }
        let (lo, hi) = if local.len() == comp.len() { (1.0, 1.0) } else { float_bounds(comp.len(), &local) };
        for &s in &comp {
            pos[s as usize] = usize::MAX;
        }
        cands.push((comp, lo, hi));
    }
    let best_lo = cands.iter().map(|c| c.1).fold(0.0, f64::max);
    let slack = 1e-7 * best_lo.max(1.0);
    let mut best: Option<AlgebraicReal> = None;
    let mut seen_polys: Vec<IntPoly> = Vec::new();
    for (comp, lo, hi) in &cands {
        if *hi + slack < best_lo {
            continue;
        }
        let r = if lo == hi && *lo == 1.0 {
            AlgebraicReal::from_int(1)
        } else {
            let a = p.adjacency(comp);
            let m: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let cp = char_poly(&m);
            if seen_polys.contains(&cp) {
                continue;
            }
            seen_polys.push(cp.clone());
            let certified = if cp.degree() > FACTOR_DEGREE { AlgebraicReal::certify_perron(&cp, *lo, *hi) } else { None };
            certified.unwrap_or_else(|| AlgebraicReal::largest_root(&cp).expect("irreducible component has a Perron root"))
        };
        best = Some(match best {
            None => r,
            Some(b) => {
                if r.cmp_exact(&b) == Ordering::Greater {
                    r
                } else {
                    b
                }
            }
        });
    }
    best.unwrap()
}

/// Float enclosure of the spectral radius of a graph (labels ignored).
pub fn float_radius(p: &Presentation) -> (f64, f64) {
    let mut best = (0.0f64, 0.0f64);
    for comp in p.nontrivial_sccs() {
        let mut pos = vec![usize::MAX; p.n_states];
        for (i, &s) in comp.iter().enumerate() {
            pos[s as usize] = i;
        }
        let local: Vec<(usize, usize)> = p
            .edges
            .iter()
            .filter(|e| pos[e.from as usize] != usize::MAX && pos[e.to as usize] != usize::MAX)
            .map(|e| (pos[e.from as usize], pos[e.to as usize]))
            .collect();
        let (lo, hi) = if local.len() == comp.len() { (1.0, 1.0) } else { float_bounds(comp.len(), &local) };
        best = (best.0.max(lo), best.1.max(hi));
    }
    best
}

/// Float enclosure of e^h(X), cheap enough for screening candidates.
pub fn approx_base(x: &ShiftSpace) -> Result<(f64, f64)> {
    Ok(float_radius(&x.canon()?.ess))
}

/// Topological entropy, computed on the minimal right-resolving presentation.
pub fn entropy(x: &ShiftSpace) -> Result<EntropyValue> {
    x.entropy_cached(|| {
        let c = x.canon()?;
        Ok(EntropyValue::from_base(spectral_radius(&c.ess)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::word;

    #[test]
    fn perron_roots() {
        assert_eq!(perron_root(&[vec![2]]).unwrap(), AlgebraicReal::from_int(2));
        assert_eq!(perron_root(&[vec![0, 2], vec![2, 0]]).unwrap(), AlgebraicReal::from_int(2));
        let g = perron_root(&[vec![1, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.poly(), &IntPoly::from_i64(&[-1, -1, 1]));
        assert_eq!(perron_root(&[vec![0]]).unwrap_err(), Error::ZeroMatrix);
    }

    #[test]
    fn even_and_golden_agree() {
        let even = ShiftSpace::sofic(
            vec!["a".into(), "b".into()],
            vec![("a".into(), "a".into(), "1".into()), ("a".into(), "b".into(), "0".into()), ("b".into(), "a".into(), "0".into())],
        )
        .unwrap();
        let golden = ShiftSpace::sft(Alphabet::new(vec!["0".into(), "1".into()]).unwrap(), vec![word("11")]).unwrap();
        assert_eq!(entropy(&even).unwrap(), entropy(&golden).unwrap());
    }
}
