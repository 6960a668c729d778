use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::normalize::rename_shift;
use super::{DecompositionReport, SftTrace, Trace};
use crate::algebra::epsilon::below_plus;
use crate::algebra::{entropy, Certainty, Epsilon};
use crate::codes::{image, verify_decomposition, BlockMap, CodeChain};
use crate::error::{Error, Result};
use crate::graph::{Dfa, Edge, Presentation, NONE};
use crate::shift::{higher_block, is_k_step, min_step, ShiftSpace};
use crate::symbols::{block_name, Alphabet, Symbol, Word};

/// Largest block length n tried when choosing the partition.
pub const MAX_BLOCK_LENGTH: usize = 64;
/// Largest m tried in the φ^(m) sweep.
pub const MAX_M: usize = 16;

/// Classes E_1, …, E_N of the symbols of X^[n]. E_1..E_{N−1} are the
/// singletons (sorted by word), E_N holds the words that overlap themselves
/// after a shift of at most n/4 and may be empty.
#[derive(Clone, Debug)]
pub struct OverlapPartition {
    pub n: usize,
    pub xn: ShiftSpace,
    /// The X-word behind each symbol of X^[n].
    pub words: BTreeMap<Symbol, Word>,
    pub classes: Vec<Vec<Symbol>>,
    /// 1-based class index of each symbol.
    pub class_of: BTreeMap<Symbol, usize>,
}

impl OverlapPartition {
    /// N, counting E_N even when it is empty.
    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn representatives(&self) -> Vec<Symbol> {
        self.classes[..self.classes.len() - 1].iter().map(|c| c[0].clone()).collect()
    }
}

/// Least s ≥ 1 with w[s..] = w[..len−s]; `len` when there is none.
pub fn min_overlap_shift<T: PartialEq>(w: &[T]) -> usize {
    (1..w.len()).find(|&s| w[s..] == w[..w.len() - s]).unwrap_or(w.len())
}

/// Partition of the symbols of X^[n] by self-overlap.
pub fn overlap_partition(x: &ShiftSpace, n: usize) -> Result<OverlapPartition> {
    let xn = higher_block(x, n)?;
    let c = x.canon()?;
    let mut words = BTreeMap::new();
    let mut encoded = Vec::new();
    for w in c.min.words(n) {
        let d = c.min.alphabet.decode(&w);
        let name = block_name(&d);
        words.insert(name.clone(), d);
        encoded.push((w, name));
    }
    encoded.sort();
    let mut classes: Vec<Vec<Symbol>> = Vec::new();
    let mut last = Vec::new();
    for (w, name) in encoded {
        let s = min_overlap_shift(&w);
        if 4 * s <= n && s < n {
            last.push(name);
        } else {
            classes.push(vec![name]);
        }
    }
    classes.push(last);
    let mut class_of = BTreeMap::new();
    for (j, cl) in classes.iter().enumerate() {
        for s in cl {
            class_of.insert(s.clone(), j + 1);
        }
    }
    Ok(OverlapPartition { n, xn, words, classes, class_of })
}

/// X^[n] ∩ (E_N)^ℤ is a disjoint union of cycles.
pub fn periodic_core_is_cycles(part: &OverlapPartition) -> Result<bool> {
    let c = part.xn.canon()?;
    let p = &c.ess;
    let last: HashSet<&Symbol> = part.classes.last().unwrap().iter().collect();
    let sub = Presentation::new(
        p.alphabet.clone(),
        p.n_states,
        p.edges.iter().filter(|e| last.contains(&p.alphabet.symbol(e.label).to_string())).copied().collect(),
    );
    let (t, _) = sub.trim();
    let mut outd = vec![0usize; t.n_states];
    let mut ind = vec![0usize; t.n_states];
    for e in &t.edges {
        outd[e.from as usize] += 1;
        ind[e.to as usize] += 1;
    }
    Ok(outd.iter().chain(&ind).all(|&d| d == 1))
}

/// φ^(m): the center is kept when no symbol of a lower class lies within
/// distance m, and replaced by φ of its first letter otherwise.
pub fn build_phi_m(part: &OverlapPartition, phi: &BlockMap, m: usize, target: &Alphabet) -> Result<BlockMap> {
    BlockMap::from_fn_into(part.xn.clone(), m, m, target.clone(), |w| {
        let c = w[m];
        let j = part.class_of[c];
        if w.iter().all(|s| part.class_of[*s] >= j) {
            c.to_string()
        } else {
            phi.get(&part.words[c][..1]).unwrap().to_string()
        }
    })
}

/// X_{𝓕_n(a)}: Y with an extra symbol `a` whose occurrences are separated
/// by at least n/4 symbols of Y.
pub fn aux_shift(y: &ShiftSpace, a: &str, n: usize) -> Result<ShiftSpace> {
    let yc = y.canon()?;
    let dfa = &yc.min;
    let g = n / 4;
    let cap = g.max(1);
    let alpha = Alphabet::sorted(dfa.alphabet.symbols().iter().cloned().chain([a.to_string()]))?;
    let ai = alpha.index_of(a).unwrap();
    let ys = |q: u32, c: usize| (1 + q as usize * cap + (c - 1)) as u32;
    let n_states = 1 + dfa.n * cap;
    let mut edges = Vec::new();
    if g == 0 {
        edges.push(Edge { from: 0, to: 0, label: ai });
    }
    for (k, s) in dfa.alphabet.symbols().iter().enumerate() {
        let q = dfa.step(dfa.init, k as u32);
        if q != NONE {
            edges.push(Edge { from: 0, to: ys(q, 1), label: alpha.index_of(s).unwrap() });
        }
    }
    for q in 0..dfa.n as u32 {
        for c in 1..=cap {
            for (k, s) in dfa.alphabet.symbols().iter().enumerate() {
                let r = dfa.step(q, k as u32);
                if r != NONE {
                    edges.push(Edge { from: ys(q, c), to: ys(r, (c + 1).min(cap)), label: alpha.index_of(s).unwrap() });
                }
            }
            if c >= g {
                edges.push(Edge { from: ys(q, c), to: 0, label: ai });
            }
        }
    }
    let p = Presentation::new(alpha, n_states, edges);
    ShiftSpace::from_presentation(&p, (0..n_states).map(|i| format!("s{i}")).collect())
}

fn y_dfa(y: &ShiftSpace) -> Result<Dfa> {
    Ok(y.canon()?.min.clone())
}

/// Shift bounding Z_m from above: the forbidden family of the
/// construction together with the 2-word constraints of X^[n].
pub fn bound_shift(part: &OverlapPartition, y: &ShiftSpace, m: usize, target: &Alphabet) -> Result<ShiftSpace> {
    let dfa = y_dfa(y)?;
    let n4 = part.n / 4;
    let big_n = part.n_classes();
    let cap = m.max(n4).max(1);
    let xs: Vec<&Symbol> = part.class_of.keys().collect();
    let nx = xs.len();
    let xc = part.xn.canon()?;
    let b2: HashSet<Word> = xc.min.words(2).iter().map(|w| xc.min.alphabet.decode(w)).collect();
    // Y-states (q, c, k): c = class of the last X^[n]-symbol (0 if none), k = run length.
    let ys = |q: u32, c: usize, k: usize| (nx + (q as usize * (big_n + 1) + c) * cap + (k - 1)) as u32;
    let n_states = nx + dfa.n * (big_n + 1) * cap;
    let blocked = |c: usize, k: usize, j: usize| -> bool {
        if c == 0 {
            return false;
        }
        (c != j && k < m) || (c == j && j < big_n && k < n4) || (c == j && j == big_n && k >= 1 && k < m)
    };
    let mut edges = Vec::new();
    for (i, s) in xs.iter().enumerate() {
        let ci = part.class_of[*s];
        for (j, t) in xs.iter().enumerate() {
            let cj = part.class_of[*t];
            if b2.contains(&vec![(*s).clone(), (*t).clone()]) && !blocked(ci, 0, cj) {
                edges.push(Edge { from: i as u32, to: j as u32, label: target.index_of(t).unwrap() });
            }
        }
        for (k, l) in dfa.alphabet.symbols().iter().enumerate() {
            let q = dfa.step(dfa.init, k as u32);
            if q != NONE {
                edges.push(Edge { from: i as u32, to: ys(q, ci, 1), label: target.index_of(l).unwrap() });
            }
        }
    }
    for q in 0..dfa.n as u32 {
        for c in 0..=big_n {
            for k in 1..=cap {
                if c == 0 && k != cap {
                    continue;
                }
                for (a, l) in dfa.alphabet.symbols().iter().enumerate() {
                    let r = dfa.step(q, a as u32);
                    if r != NONE {
                        edges.push(Edge { from: ys(q, c, k), to: ys(r, c, (k + 1).min(cap)), label: target.index_of(l).unwrap() });
                    }
                }
                for (j, t) in xs.iter().enumerate() {
                    if !blocked(c, k, part.class_of[*t]) {
                        edges.push(Edge { from: ys(q, c, k), to: j as u32, label: target.index_of(t).unwrap() });
                    }
                }
            }
        }
    }
    let p = Presentation::new(target.clone(), n_states, edges);
    ShiftSpace::from_presentation(&p, (0..n_states).map(|i| format!("s{i}")).collect())
}

/// Recodes φ: X → Y to a 1-block code on a 1-step X̄ whose symbols avoid
/// the target alphabet. Returns (X̄, β: X → X̄, φ̄).
pub(crate) fn one_step_form(phi: &BlockMap) -> Result<(ShiftSpace, BlockMap, BlockMap)> {
    let x = phi.domain();
    let kx = min_step(x)?.ok_or_else(|| Error::Precondition("domain is not of finite type".into()))?;
    let ys: BTreeSet<&Symbol> = phi.target().symbols().iter().collect();
    let l = kx.max(phi.window()).max(1);
    let xl = higher_block(x, l)?;
    let xc = x.canon()?;
    let blocks: BTreeMap<Symbol, Word> = xc
        .min
        .words(l)
        .into_iter()
        .map(|w| {
            let d = xc.min.alphabet.decode(&w);
            (block_name(&d), d)
        })
        .collect();
    let mut p = String::from("x");
    while blocks.keys().any(|b| ys.contains(&format!("{p}{b}"))) {
        p.push('x');
    }
    let xbar = rename_shift(&xl, |b| format!("{p}{b}"))?;
    let m = phi.memory();
    let beta = BlockMap::from_fn_into(x.clone(), m, l - 1 - m, xbar.alphabet(), |w| format!("{p}{}", block_name(w)))?;
    let w = phi.window();
    let plen = p.len();
    let phibar = BlockMap::from_fn_into(xbar.clone(), 0, 0, phi.target().clone(), |s| {
        phi.get(&blocks[&s[0][plen..]][..w]).unwrap().to_string()
    })?;
    Ok((xbar, beta, phibar))
}

fn fresh_symbol(y: &Alphabet) -> String {
    let mut a = String::from("a");
    while y.contains(&a) {
        a.push('\'');
    }
    a
}

/// Splits φ: X → Y (X of finite type, h(X) > h(Y)) through a shift of
/// finite type with entropy below h(Y) + ε.
pub fn split_sft(phi: &BlockMap, y: &ShiftSpace, eps: &Epsilon) -> Result<DecompositionReport> {
    let x = phi.domain();
    let (hx, hy) = (entropy(x)?, entropy(y)?);
    if hx.cmp_exact(&hy).is_le() {
        return Err(Error::Precondition("h(X) must exceed h(Y)".into()));
    }
    let (xbar, beta0, phibar) = one_step_form(phi)?;
    let trivial = below_plus(&hx, &hy, eps) == Certainty::Yes;
    let (n, aux_entropy) = if trivial {
        (1, hx.clone())
    } else {
        let a = fresh_symbol(&y.canon()?.min.alphabet);
        let mut found = None;
        for n in (4..=MAX_BLOCK_LENGTH).step_by(4) {
            let h = entropy(&aux_shift(y, &a, n)?)?;
            if below_plus(&h, &hy, eps) == Certainty::Yes {
                found = Some((n, h));
                break;
            }
        }
        found.ok_or_else(|| Error::IterationCap(format!("no block length up to {MAX_BLOCK_LENGTH} meets the bound")))?
    };
    let part = overlap_partition(&xbar, n)?;
    let ya = phi.target();
    if part.class_of.keys().any(|s| ya.contains(s)) {
        return Err(Error::Precondition("block names collide with the target alphabet".into()));
    }
    let target = Alphabet::sorted(part.class_of.keys().cloned().chain(ya.symbols().iter().cloned()))?;
    let beta_n = BlockMap::from_fn_into(xbar.clone(), 0, n - 1, part.xn.alphabet(), |w| block_name(w))?;
    let big_n = part.n_classes();
    let mut entropies = Vec::new();
    let mut bounds = Vec::new();
    let mut chosen = None;
    for m in 1..=MAX_M {
        let code = match build_phi_m(&part, &phibar, m, &target) {
            Ok(c) => c,
            Err(Error::Budget(b)) => return Err(Error::IterationCap(format!("m = {m}: {b}"))),
            Err(e) => return Err(e),
        };
        let zm = match image(&code) {
            Ok(z) => z,
            Err(Error::Budget(b)) => return Err(Error::IterationCap(format!("m = {m}: {b}"))),
            Err(e) => return Err(e),
        };
        let h = entropy(&zm)?;
        bounds.push(entropy(&bound_shift(&part, y, m, &target)?)?);
        let ok = below_plus(&h, &hy, eps) == Certainty::Yes;
        entropies.push(h);
        if ok {
            chosen = Some((m, code, zm));
            break;
        }
    }
    let (m, code, zm) = chosen.ok_or_else(|| {
        Error::IterationCap(format!(
            "no m up to {MAX_M} gives entropy below h(Y) + ε; entropies {:?}",
            entropies.iter().map(|h| h.nats()).collect::<Vec<_>>()
        ))
    })?;
    let phi1 = CodeChain::new(vec![beta0, beta_n, code])?;
    let back = BlockMap::from_fn_into(zm.clone(), 0, 0, ya.clone(), |s| match part.words.get(s[0]) {
        Some(w) => phibar.get(&w[..1]).unwrap().to_string(),
        None => s[0].to_string(),
    })?;
    let phi2 = CodeChain::single(back);
    let certificate = verify_decomposition(phi, &phi1, &phi2, &zm, y)?;
    let step = 2 * m * big_n + 1;
    if !is_k_step(&zm, step)? {
        return Err(Error::Certificate(format!("intermediate is not {step}-step")));
    }
    let h = entropies.last().unwrap().clone();
    Ok(DecompositionReport {
        phi1,
        phi2,
        intermediate: zm,
        intermediate_entropy: h,
        target: hy,
        epsilon: eps.clone(),
        certificate,
        k_step: Some(step),
        trace: Trace {
            sofic: None,
            sft: Some(SftTrace { n, classes: big_n, m, aux_entropy, entropies, bounds }),
            notes: if trivial { vec!["ε exceeds h(X) − h(Y); trivial partition".into()] } else { vec![] },
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::word;

    #[test]
    fn overlap_shifts() {
        assert_eq!(min_overlap_shift(&word("aaaa")), 1);
        assert_eq!(min_overlap_shift(&word("abca")), 3);
        assert_eq!(min_overlap_shift(&word("abcd")), 4);
        assert_eq!(min_overlap_shift(&word("abab")), 2);
    }

    #[test]
    fn partitions() {
        let abc = ShiftSpace::sft(Alphabet::new(vec!["a".into(), "b".into(), "c".into()]).unwrap(), vec![]).unwrap();
        let p = overlap_partition(&abc, 4).unwrap();
        assert_eq!(p.class_of["aaaa"], p.n_classes());
        assert!(p.class_of["abca"] < p.n_classes());
        assert_eq!(p.classes.last().unwrap().len(), 3);
        assert!(periodic_core_is_cycles(&p).unwrap());
        let p1 = overlap_partition(&abc, 1).unwrap();
        assert!(p1.classes.last().unwrap().is_empty());
        assert_eq!(p1.n_classes(), 4);
    }

    #[test]
    fn trivial_and_small_splits() {
        let x = ShiftSpace::edge_shift(vec![vec![2]]).unwrap();
        let y = ShiftSpace::edge_shift(vec![vec![1]]).unwrap();
        let phi = BlockMap::from_fn_into(x.clone(), 0, 0, y.alphabet(), |_| "0".into()).unwrap();
        let r = split_sft(&phi, &y, &Epsilon::parse("1").unwrap()).unwrap();
        let t = r.trace.sft.as_ref().unwrap();
        assert_eq!((t.n, t.m), (1, 1));
        assert!(is_k_step(&r.intermediate, r.k_step.unwrap()).unwrap());
        assert!(split_sft(&BlockMap::identity(x.clone()).unwrap(), &x, &Epsilon::parse("1").unwrap()).is_err());
    }
}
