//! Shift spaces and their structural predicates.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use crate::algebra::EntropyValue;
use crate::error::{Error, Result};
use crate::graph::{canonicalize, Canon, Edge, Presentation, NONE};
use crate::symbols::{block_name, contains_subword, Alphabet, Word};

/// The three ways a shift space can be written down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftKind {
    /// Bi-infinite walks on a multigraph. Edge `e` (row-major, parallel
    /// edges consecutive) is the symbol `"e"`.
    EdgeShift { matrix: Vec<Vec<u64>> },
    /// Sequences over `alphabet` avoiding every word of `forbidden`.
    Sft { alphabet: Alphabet, forbidden: Vec<Word> },
    /// Label sequences of bi-infinite walks on a labeled graph.
    Sofic { states: Vec<String>, pres: Presentation },
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.n_states == other.n_states && self.edges == other.edges
    }
}
impl Eq for Presentation {}

/// A path graph whose bi-infinite walks are exactly the points of the shift,
/// trimmed, with readable state names.
#[derive(Clone, Debug)]
pub struct PathGraph {
    pub pres: Presentation,
    pub names: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ShiftSpace {
    kind: ShiftKind,
    graph: OnceLock<Result<Arc<PathGraph>>>,
    canon: OnceLock<Result<Arc<Canon>>>,
    entropy: OnceLock<Result<EntropyValue>>,
}

impl PartialEq for ShiftSpace {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}
impl Eq for ShiftSpace {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureFacts {
    pub irreducible: bool,
    pub mixing: bool,
    pub period: u64,
    pub nonwandering_note: String,
}

impl ShiftSpace {
    fn from_kind(kind: ShiftKind) -> Self {
        ShiftSpace { kind, graph: OnceLock::new(), canon: OnceLock::new(), entropy: OnceLock::new() }
    }

    pub fn edge_shift(matrix: Vec<Vec<u64>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::EmptyShift);
        }
        if matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Parse("adjacency matrix is not square".into()));
        }
        Ok(Self::from_kind(ShiftKind::EdgeShift { matrix }))
    }

    pub fn sft(alphabet: Alphabet, forbidden: Vec<Word>) -> Result<Self> {
        for w in &forbidden {
            if w.is_empty() {
                return Err(Error::Parse("empty forbidden word".into()));
            }
            if let Some(s) = w.iter().find(|s| !alphabet.contains(s)) {
                return Err(Error::InvalidAlphabet(format!("forbidden word uses unknown symbol {s:?}")));
            }
        }
        let mut forbidden = forbidden;
        forbidden.sort_by(|a, b| (a.len(), alphabet.encode(a)).cmp(&(b.len(), alphabet.encode(b))));
        forbidden.dedup();
        Ok(Self::from_kind(ShiftKind::Sft { alphabet, forbidden }))
    }

    /// Sofic shift from named states and `(from, to, label)` edges. The
    /// alphabet is the sorted set of labels.
    pub fn sofic(states: Vec<String>, edges: Vec<(String, String, String)>) -> Result<Self> {
        let mut idx = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if idx.insert(s.clone(), i as u32).is_some() {
                return Err(Error::Parse(format!("duplicate state {s:?}")));
            }
        }
        if edges.is_empty() {
            return Err(Error::EmptyShift);
        }
        let alphabet = Alphabet::sorted(edges.iter().map(|e| e.2.clone()))?;
        let mut es = Vec::with_capacity(edges.len());
        for (f, t, l) in &edges {
            let from = *idx.get(f).ok_or_else(|| Error::Parse(format!("unknown state {f:?}")))?;
            let to = *idx.get(t).ok_or_else(|| Error::Parse(format!("unknown state {t:?}")))?;
            es.push(Edge { from, to, label: alphabet.index_of(l).unwrap() });
        }
        Ok(Self::from_kind(ShiftKind::Sofic { states, pres: Presentation::new(alphabet, idx.len(), es) }))
    }

    /// Sofic shift from a presentation: trimmed, labels restricted to those
    /// used and sorted.
    pub fn from_presentation(p: &Presentation, names: Vec<String>) -> Result<Self> {
        let (t, map) = p.trim();
        if t.is_empty() {
            return Err(Error::EmptyShift);
        }
        let mut kept = vec![String::new(); t.n_states];
        for (old, &new) in map.iter().enumerate() {
            if new != NONE {
                kept[new as usize] = names[old].clone();
            }
        }
        let used: Vec<String> = t.edges.iter().map(|e| p.alphabet.symbol(e.label).to_string()).collect();
        let alphabet = Alphabet::sorted(used)?;
        let relabeled = t.relabel(alphabet.clone(), |l| alphabet.index_of(p.alphabet.symbol(l)).unwrap());
        let mut edges = relabeled.edges;
        edges.sort();
        Ok(Self::from_kind(ShiftKind::Sofic { states: kept, pres: Presentation::new(alphabet, t.n_states, edges) }))
    }

    pub fn kind(&self) -> &ShiftKind {
        &self.kind
    }

    /// The symbol set the shift is declared over.
    pub fn alphabet(&self) -> Alphabet {
        match &self.kind {
            ShiftKind::EdgeShift { matrix } => {
                let e: u64 = matrix.iter().flatten().sum();
                if e == 0 {
                    Alphabet::new(vec!["0".into()]).unwrap()
                } else {
                    Alphabet::new((0..e).map(|i| i.to_string()).collect()).unwrap()
                }
            }
            ShiftKind::Sft { alphabet, .. } => alphabet.clone(),
            ShiftKind::Sofic { pres, .. } => pres.alphabet.clone(),
        }
    }

    pub fn is_finite_type_form(&self) -> bool {
        !matches!(self.kind, ShiftKind::Sofic { .. })
    }

    /// Step of a forbidden-word description (longest forbidden word minus one).
    pub fn declared_step(&self) -> Option<usize> {
        match &self.kind {
            ShiftKind::EdgeShift { .. } => Some(1),
            ShiftKind::Sft { forbidden, .. } => Some(forbidden.iter().map(|w| w.len()).max().unwrap_or(1).max(1) - 1),
            ShiftKind::Sofic { .. } => None,
        }
    }

    pub fn path_graph(&self) -> Result<Arc<PathGraph>> {
        self.graph.get_or_init(|| build_path_graph(&self.kind).map(Arc::new)).clone()
    }

    pub(crate) fn entropy_cached(&self, f: impl FnOnce() -> Result<EntropyValue>) -> Result<EntropyValue> {
        self.entropy.get_or_init(f).clone()
    }

    pub fn canon(&self) -> Result<Arc<Canon>> {
        self.canon
            .get_or_init(|| {
                let g = self.path_graph()?;
                canonicalize(&g.pres).map(Arc::new)
            })
            .clone()
    }
}

fn build_path_graph(kind: &ShiftKind) -> Result<PathGraph> {
    let (pres, names) = match kind {
        ShiftKind::EdgeShift { matrix } => {
            let n = matrix.len();
            let total: u64 = matrix.iter().flatten().sum();
            if total == 0 {
                return Err(Error::EmptyShift);
            }
            let alphabet = Alphabet::new((0..total).map(|i| i.to_string()).collect())?;
            let mut edges = Vec::new();
            let mut id = 0u32;
            for (i, row) in matrix.iter().enumerate() {
                for (j, &c) in row.iter().enumerate() {
                    for _ in 0..c {
                        edges.push(Edge { from: i as u32, to: j as u32, label: id });
                        id += 1;
                    }
                }
            }
            (Presentation::new(alphabet, n, edges), (0..n).map(|i| i.to_string()).collect::<Vec<_>>())
        }
        ShiftKind::Sft { alphabet, forbidden } => sft_graph(alphabet, forbidden)?,
        ShiftKind::Sofic { states, pres } => (pres.clone(), states.clone()),
    };
    let (t, map) = pres.trim();
    if t.is_empty() {
        return Err(Error::EmptyShift);
    }
    let mut kept = vec![String::new(); t.n_states];
    for (old, &new) in map.iter().enumerate() {
        if new != NONE {
            kept[new as usize] = names[old].clone();
        }
    }
    Ok(PathGraph { pres: t, names: kept })
}

/// Vertex graph on the allowed k-words, k = longest forbidden length − 1.
fn sft_graph(alphabet: &Alphabet, forbidden: &[Word]) -> Result<(Presentation, Vec<String>)> {
    let enc: HashSet<Vec<u32>> = forbidden.iter().map(|w| alphabet.encode(w).unwrap()).collect();
    let maxlen = forbidden.iter().map(|w| w.len()).max().unwrap_or(1);
    let k = maxlen.saturating_sub(1);
    let ok_tail = |w: &[u32]| (1..=w.len()).all(|l| !enc.contains(&w[w.len() - l..]));
    let a = alphabet.len() as u32;
    let mut states: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &states {
            for x in 0..a {
                let mut w = s.clone();
                w.push(x);
                if ok_tail(&w) {
                    next.push(w);
                }
            }
        }
        states = next;
    }
    let id: HashMap<&Vec<u32>, u32> = states.iter().enumerate().map(|(i, s)| (s, i as u32)).collect();
    let mut edges = Vec::new();
    for (i, s) in states.iter().enumerate() {
        for x in 0..a {
            let mut w = s.clone();
            w.push(x);
            if ok_tail(&w) {
                let t = id[&w[1..].to_vec()];
                edges.push(Edge { from: i as u32, to: t, label: x });
            }
        }
    }
    let names = states
        .iter()
        .map(|s| {
            let parts: Vec<&str> = s.iter().map(|&x| alphabet.symbol(x)).collect();
            block_name(&parts)
        })
        .collect();
    Ok((Presentation::new(alphabet.clone(), states.len(), edges), names))
}

/// Removes stranded states (or symbols) so every state lies on a bi-infinite path.
pub fn trim(x: &ShiftSpace) -> Result<ShiftSpace> {
    match x.kind() {
        ShiftKind::EdgeShift { matrix } => {
            let g = x.path_graph()?;
            // Recover the surviving original states from the names.
            let keep: Vec<usize> = g.names.iter().map(|s| s.parse().unwrap()).collect();
            let m = keep.iter().map(|&i| keep.iter().map(|&j| matrix[i][j]).collect()).collect();
            ShiftSpace::edge_shift(m)
        }
        ShiftKind::Sft { alphabet, forbidden } => {
            let g = x.path_graph()?;
            let mut used = vec![false; alphabet.len()];
            for e in &g.pres.edges {
                used[e.label as usize] = true;
            }
            let syms: Vec<String> =
                alphabet.symbols().iter().zip(&used).filter(|(_, u)| **u).map(|(s, _)| s.clone()).collect();
            let a = Alphabet::new(syms)?;
            let f = forbidden.iter().filter(|w| w.iter().all(|s| a.contains(s))).cloned().collect();
            ShiftSpace::sft(a, f)
        }
        ShiftKind::Sofic { .. } => {
            let g = x.path_graph()?;
            ShiftSpace::from_presentation(&g.pres, g.names.clone())
        }
    }
}

/// All words of length `n` in the language, in lexicographic order.
pub fn words(x: &ShiftSpace, n: usize) -> Result<Vec<Word>> {
    let c = x.canon()?;
    Ok(c.min.words(n).into_iter().map(|w| c.min.alphabet.decode(&w)).collect())
}

/// Encoded words of length `n` over the path graph's alphabet.
pub fn in_language(x: &ShiftSpace, w: &[String]) -> Result<bool> {
    let c = x.canon()?;
    Ok(match c.min.alphabet.encode(w) {
        Some(e) => c.min.run(c.min.init, &e) != NONE,
        None => false,
    })
}

pub fn structure(x: &ShiftSpace) -> Result<StructureFacts> {
    let (irreducible, period, note) = if x.is_finite_type_form() {
        let g = x.path_graph()?;
        let comps = g.pres.nontrivial_sccs();
        let irr = comps.len() == 1 && comps[0].len() == g.pres.n_states;
        let per = comps.iter().fold(0u64, |acc, c| num_integer::gcd(acc, g.pres.period_of(c)));
        (irr, per, comps.len())
    } else {
        let c = x.canon()?;
        let comps = c.ess.nontrivial_sccs();
        let per = if c.irreducible {
            c.ess.period_of(&comps[0])
        } else {
            comps.iter().fold(0u64, |acc, k| num_integer::gcd(acc, c.ess.period_of(k)))
        };
        (c.irreducible, per, comps.len())
    };
    let nonwandering_note = if irreducible {
        "irreducible; the nonwandering set is the whole shift".to_string()
    } else {
        format!("reducible; {note} irreducible component(s) carry the recurrent part, no decomposition is exposed")
    };
    Ok(StructureFacts { irreducible, mixing: irreducible && period == 1, period: period.max(1), nonwandering_note })
}

/// Labeled vertex presentation of `X^[n]`: states are (n−1)-paths, each
/// n-path is an edge labeled by the block it reads.
pub fn higher_block_presentation(x: &ShiftSpace, n: usize, budget: usize) -> Result<Presentation> {
    if n == 0 {
        return Err(Error::Precondition("block length must be at least 1".into()));
    }
    let c = x.canon()?;
    let (p, _) = crate::graph::window_presentation(&c.ess, n, budget)?;
    Ok(p)
}

/// Largest number of candidate words scanned when listing forbidden blocks.
const FORBIDDEN_LIST_LIMIT: u128 = 1 << 16;

/// The n-th higher block shift.
///
/// Finite-type inputs give a forbidden-word description over the n-blocks
/// when that list is small; otherwise, and for sofic inputs, the result is
/// given by a labeled graph.
pub fn higher_block(x: &ShiftSpace, n: usize) -> Result<ShiftSpace> {
    if n == 0 {
        return Err(Error::Precondition("block length must be at least 1".into()));
    }
    let p = higher_block_presentation(x, n, 1 << 22)?;
    let as_sofic = ShiftSpace::from_presentation(&p, (0..p.n_states).map(|i| format!("s{i}")).collect())?;
    if !x.is_finite_type_form() {
        return determinize(&as_sofic);
    }
    let step = min_step(x)?.ok_or_else(|| Error::Precondition("finite-type input has no finite step".into()))?;
    let j = (step + 1).saturating_sub(n).max(1);
    let alphabet = as_sofic.alphabet();
    if (alphabet.len() as u128).pow(j as u32 + 1) > FORBIDDEN_LIST_LIMIT {
        // The forbidden list would be huge; keep the graph form.
        return Ok(as_sofic);
    }
    let c = as_sofic.canon()?;
    let allowed: HashSet<Vec<u32>> = c.min.words(j + 1).into_iter().collect();
    let shorter: HashSet<Vec<u32>> = c.min.words(j).into_iter().collect();
    let mut forbidden = Vec::new();
    let mut cur = vec![0u32; j + 1];
    let k = alphabet.len() as u32;
    loop {
        if !allowed.contains(&cur) && shorter.contains(&cur[..j]) && shorter.contains(&cur[1..]) {
            forbidden.push(c.min.alphabet.decode(&cur));
        }
        let mut i = j + 1;
        loop {
            if i == 0 {
                return ShiftSpace::sft(c.min.alphabet.clone(), forbidden);
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < k {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Forbidden-word description of an edge shift over its edge names.
fn edge_shift_as_sft(x: &ShiftSpace) -> Result<ShiftSpace> {
    let g = x.path_graph()?;
    let alphabet = x.alphabet();
    let mut forbidden = Vec::new();
    let all: Vec<&Edge> = g.pres.edges.iter().collect();
    for e in &all {
        for f in &all {
            if e.to != f.from {
                forbidden.push(vec![alphabet.symbol(e.label).to_string(), alphabet.symbol(f.label).to_string()]);
            }
        }
    }
    let used: HashSet<u32> = g.pres.edges.iter().map(|e| e.label).collect();
    for l in 0..alphabet.len() as u32 {
        if !used.contains(&l) {
            forbidden.push(vec![alphabet.symbol(l).to_string()]);
        }
    }
    ShiftSpace::sft(alphabet, forbidden)
}

/// The largest subshift avoiding every word of `extra`.
pub fn forbid(x: &ShiftSpace, extra: &[Word]) -> Result<ShiftSpace> {
    let alphabet = x.alphabet();
    for w in extra {
        if let Some(s) = w.iter().find(|s| !alphabet.contains(s)) {
            return Err(Error::InvalidAlphabet(format!("word uses unknown symbol {s:?}")));
        }
        if w.is_empty() {
            return Err(Error::EmptyShift);
        }
    }
    let out = match x.kind() {
        ShiftKind::Sft { alphabet, forbidden } => {
            let mut f = forbidden.clone();
            f.extend(extra.iter().cloned());
            ShiftSpace::sft(alphabet.clone(), f)?
        }
        ShiftKind::EdgeShift { .. } => {
            if extra.is_empty() {
                return trim(x);
            }
            let base = edge_shift_as_sft(x)?;
            return forbid(&base, extra);
        }
        ShiftKind::Sofic { .. } => {
            let c = x.canon()?;
            let enc: Vec<Vec<u32>> = extra.iter().map(|w| c.ess.alphabet.encode(w).unwrap()).collect();
            let p = avoid_product(&c.ess, &enc);
            let s = ShiftSpace::from_presentation(&p, (0..p.n_states).map(|i| format!("s{i}")).collect())?;
            return determinize(&s);
        }
    };
    out.path_graph()?;
    trim(&out)
}

/// Product of a presentation with the automaton tracking the longest
/// suffix that is a proper prefix of a forbidden word.
pub(crate) fn avoid_product(p: &Presentation, forbidden: &[Vec<u32>]) -> Presentation {
    let fset: HashSet<&[u32]> = forbidden.iter().map(|w| w.as_slice()).collect();
    let mut prefixes: Vec<Vec<u32>> = vec![Vec::new()];
    let mut seen: HashSet<Vec<u32>> = HashSet::from([Vec::new()]);
    for w in forbidden {
        for l in 1..w.len() {
            if seen.insert(w[..l].to_vec()) {
                prefixes.push(w[..l].to_vec());
            }
        }
    }
    let pid: HashMap<&[u32], u32> = prefixes.iter().enumerate().map(|(i, w)| (w.as_slice(), i as u32)).collect();
    let np = prefixes.len();
    let k = p.alphabet.len();
    let mut trans = vec![NONE; np * k];
    for (i, u) in prefixes.iter().enumerate() {
        for a in 0..k as u32 {
            let mut t = u.clone();
            t.push(a);
            if (0..t.len()).any(|s| fset.contains(&t[s..])) {
                continue;
            }
            let s = (0..t.len()).find(|&s| pid.contains_key(&t[s..])).unwrap_or(t.len());
            trans[i * k + a as usize] = pid[&t[s..]];
        }
    }
    let mut edges = Vec::new();
    for e in &p.edges {
        for u in 0..np {
            let v = trans[u * k + e.label as usize];
            if v != NONE {
                edges.push(Edge { from: e.from * np as u32 + u as u32, to: e.to * np as u32 + v, label: e.label });
            }
        }
    }
    Presentation::new(p.alphabet.clone(), p.n_states * np, edges)
}

/// Canonical right-resolving presentation; state names list the members of
/// the subset that produced each state.
pub fn determinize(x: &ShiftSpace) -> Result<ShiftSpace> {
    let g = x.path_graph()?;
    let c = x.canon()?;
    let names: Vec<String> = c
        .ess_to_min
        .iter()
        .map(|&m| {
            let members: Vec<&str> = c.min_rep[m as usize].iter().map(|&s| g.names[s as usize].as_str()).collect();
            format!("{{{}}}", members.join(","))
        })
        .collect();
    ShiftSpace::from_presentation(&c.ess, names)
}

/// Smallest k such that the shift is k-step, or `None` when it is not of finite type.
pub fn min_step(x: &ShiftSpace) -> Result<Option<usize>> {
    Ok(x.canon()?.min.min_step())
}

pub fn is_k_step(x: &ShiftSpace, k: usize) -> Result<bool> {
    Ok(matches!(min_step(x)?, Some(s) if s <= k))
}

pub fn is_synchronizing(x: &ShiftSpace, w: &[String]) -> Result<bool> {
    let c = x.canon()?;
    let m = &c.min;
    let enc = m.alphabet.encode(w).ok_or_else(|| Error::WordNotInLanguage(w.to_vec()))?;
    let target = m.run(m.init, &enc);
    if target == NONE {
        return Err(Error::WordNotInLanguage(w.to_vec()));
    }
    Ok((0..m.n as u32).all(|q| {
        let t = m.run(q, &enc);
        t == NONE || t == target
    }))
}

/// Whether some constant sequence `a^∞` is a point of the shift.
pub fn has_fixed_point(x: &ShiftSpace) -> Result<bool> {
    let c = x.canon()?;
    let p = &c.ess;
    for a in 0..p.alphabet.len() as u32 {
        let sub = Presentation::new(
            p.alphabet.clone(),
            p.n_states,
            p.edges.iter().filter(|e| e.label == a).copied().collect(),
        );
        if !sub.nontrivial_sccs().is_empty() {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn is_subshift_of(x: &ShiftSpace, y: &ShiftSpace) -> Result<bool> {
    Ok(crate::graph::dfa_included(&x.canon()?.min, &y.canon()?.min))
}

pub fn language_eq(x: &ShiftSpace, y: &ShiftSpace) -> Result<bool> {
    Ok(is_subshift_of(x, y)? && is_subshift_of(y, x)?)
}

/// Whether a word contains any of the given words.
pub fn avoids(w: &[String], forbidden: &[Word]) -> bool {
    forbidden.iter().all(|f| !contains_subword(w, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::word;

    fn bin() -> Alphabet {
        Alphabet::new(vec!["0".into(), "1".into()]).unwrap()
    }

    fn golden() -> ShiftSpace {
        ShiftSpace::sft(bin(), vec![word("11")]).unwrap()
    }

    fn even() -> ShiftSpace {
        ShiftSpace::sofic(
            vec!["a".into(), "b".into()],
            vec![("a".into(), "a".into(), "1".into()), ("a".into(), "b".into(), "0".into()), ("b".into(), "a".into(), "0".into())],
        )
        .unwrap()
    }

    #[test]
    fn trim_examples() {
        let t = trim(&ShiftSpace::edge_shift(vec![vec![1, 1], vec![0, 0]]).unwrap()).unwrap();
        assert_eq!(t.kind(), &ShiftKind::EdgeShift { matrix: vec![vec![1]] });
        let all = ShiftSpace::sft(bin(), vec![word("00"), word("01"), word("10"), word("11")]).unwrap();
        assert_eq!(trim(&all).unwrap_err(), Error::EmptyShift);
    }

    #[test]
    fn golden_words() {
        assert_eq!(words(&golden(), 2).unwrap(), vec![word("00"), word("01"), word("10")]);
        assert_eq!(words(&golden(), 0).unwrap(), vec![Vec::<String>::new()]);
    }

    #[test]
    fn structure_examples() {
        let s = structure(&ShiftSpace::edge_shift(vec![vec![0, 2], vec![2, 0]]).unwrap()).unwrap();
        assert!(s.irreducible && !s.mixing && s.period == 2);
        let s = structure(&ShiftSpace::edge_shift(vec![vec![1, 1], vec![1, 0]]).unwrap()).unwrap();
        assert!(s.mixing);
    }

    #[test]
    fn even_shift_sync() {
        let e = even();
        assert!(is_synchronizing(&e, &word("1")).unwrap());
        assert!(!is_synchronizing(&e, &word("0")).unwrap());
        assert!(!is_k_step(&e, 5).unwrap());
        assert!(is_k_step(&golden(), 1).unwrap());
    }

    #[test]
    fn forbid_golden_zero_is_empty() {
        assert_eq!(forbid(&golden(), &[word("0")]).unwrap_err(), Error::EmptyShift);
    }
}
