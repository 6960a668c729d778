//! Sliding block codes given by finite window tables.
//!
//! A code with memory `m` and anticipation `a` reads the window
//! `x[i-m ..= i+a]` and writes one symbol at position `i`. Applied to a
//! word it produces `|w| - m - a` symbols, the first belonging to position
//! `m` of the input.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::{window_presentation, Edge, Presentation};
use crate::shift::{determinize, higher_block, in_language, language_eq, ShiftSpace};
use crate::symbols::{block_name, Alphabet, Symbol, Word};

/// Largest window presentation (in states) built while computing images.
pub const WINDOW_BUDGET: usize = 1 << 21;

#[derive(Clone, Debug)]
pub struct BlockMap {
    memory: usize,
    anticipation: usize,
    domain: ShiftSpace,
    source: Alphabet,
    target: Alphabet,
    table: BTreeMap<Vec<u32>, u32>,
}

impl PartialEq for BlockMap {
    fn eq(&self, other: &Self) -> bool {
        self.memory == other.memory
            && self.anticipation == other.anticipation
            && self.domain == other.domain
            && self.entries() == other.entries()
    }
}

/// Encoded words of length `n` of a shift, over its language alphabet.
pub(crate) fn encoded_words(x: &ShiftSpace, n: usize) -> Result<(Alphabet, Vec<Vec<u32>>)> {
    let c = x.canon()?;
    Ok((c.min.alphabet.clone(), c.min.words(n)))
}

impl BlockMap {
    /// Builds a code from an explicit table, which must cover exactly the
    /// words of length `memory + anticipation + 1` of the domain.
    pub fn new(
        domain: ShiftSpace,
        memory: usize,
        anticipation: usize,
        target: Alphabet,
        entries: Vec<(Word, Symbol)>,
    ) -> Result<Self> {
        let w = memory + anticipation + 1;
        let (source, words) = encoded_words(&domain, w)?;
        let mut table = BTreeMap::new();
        for (win, out) in entries {
            let enc = source.encode(&win).ok_or_else(|| Error::ExtraWindow(win.clone()))?;
            let o = target
                .index_of(&out)
                .ok_or_else(|| Error::InvalidAlphabet(format!("output {out:?} is not in the target alphabet")))?;
            if table.insert(enc, o).is_some() {
                return Err(Error::Parse(format!("window {win:?} listed twice")));
            }
        }
        let lang: HashSet<&Vec<u32>> = words.iter().collect();
        if let Some(extra) = table.keys().find(|k| !lang.contains(k)) {
            return Err(Error::ExtraWindow(source.decode(extra)));
        }
        let missing: Vec<Word> = words.iter().filter(|w| !table.contains_key(*w)).map(|w| source.decode(w)).collect();
        if !missing.is_empty() {
            return Err(Error::IncompleteTable(missing));
        }
        Ok(BlockMap { memory, anticipation, domain, source, target, table })
    }

    /// Builds a code by evaluating `f` on every window of the domain. The
    /// target alphabet is the sorted set of outputs.
    pub fn from_fn(
        domain: ShiftSpace,
        memory: usize,
        anticipation: usize,
        f: impl Fn(&[&str]) -> Symbol,
    ) -> Result<Self> {
        let (source, words) = encoded_words(&domain, memory + anticipation + 1)?;
        let outs: Vec<Symbol> = words
            .iter()
            .map(|w| {
                let parts: Vec<&str> = w.iter().map(|&s| source.symbol(s)).collect();
                f(&parts)
            })
            .collect();
        let target = Alphabet::sorted(outs.iter().cloned())?;
        let table = words.into_iter().zip(outs).map(|(w, o)| (w, target.index_of(&o).unwrap())).collect();
        Ok(BlockMap { memory, anticipation, domain, source, target, table })
    }

    /// Like [`BlockMap::from_fn`] with a prescribed target alphabet.
    pub fn from_fn_into(
        domain: ShiftSpace,
        memory: usize,
        anticipation: usize,
        target: Alphabet,
        f: impl Fn(&[&str]) -> Symbol,
    ) -> Result<Self> {
        let (source, words) = encoded_words(&domain, memory + anticipation + 1)?;
        let mut table = BTreeMap::new();
        for w in words {
            let parts: Vec<&str> = w.iter().map(|&s| source.symbol(s)).collect();
            let o = f(&parts);
            let i = target
                .index_of(&o)
                .ok_or_else(|| Error::InvalidAlphabet(format!("output {o:?} is not in the target alphabet")))?;
            table.insert(w, i);
        }
        Ok(BlockMap { memory, anticipation, domain, source, target, table })
    }

    pub fn identity(domain: ShiftSpace) -> Result<Self> {
        Self::from_fn(domain, 0, 0, |w| w[0].to_string())
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn anticipation(&self) -> usize {
        self.anticipation
    }

    pub fn window(&self) -> usize {
        self.memory + self.anticipation + 1
    }

    pub fn domain(&self) -> &ShiftSpace {
        &self.domain
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Table rows in lexicographic window order.
    pub fn entries(&self) -> Vec<(Word, Symbol)> {
        self.table.iter().map(|(w, &o)| (self.source.decode(w), self.target.symbol(o).to_string())).collect()
    }

    pub fn get(&self, window: &[String]) -> Option<&str> {
        let enc = self.source.encode(window)?;
        self.table.get(&enc).map(|&o| self.target.symbol(o))
    }

    /// Replaces one table entry (used to build negative controls).
    pub fn with_entry(&self, window: &[String], out: &str) -> Result<Self> {
        let enc = self.source.encode(window).ok_or_else(|| Error::ExtraWindow(window.to_vec()))?;
        if !self.table.contains_key(&enc) {
            return Err(Error::ExtraWindow(window.to_vec()));
        }
        let mut c = self.clone();
        if c.target.index_of(out).is_none() {
            let mut syms = c.target.symbols().to_vec();
            syms.push(out.to_string());
            let t = Alphabet::sorted(syms)?;
            c.table = c.table.into_iter().map(|(k, v)| (k, t.index_of(self.target.symbol(v)).unwrap())).collect();
            c.target = t;
        }
        let o = c.target.index_of(out).unwrap();
        c.table.insert(enc, o);
        Ok(c)
    }

    /// The same code on a subshift of the domain.
    pub fn restrict(&self, sub: &ShiftSpace) -> Result<Self> {
        let (src, words) = encoded_words(sub, self.window())?;
        let mut table = BTreeMap::new();
        for w in words {
            let dec = src.decode(&w);
            let enc = self.source.encode(&dec).ok_or_else(|| Error::WordNotInDomain(dec.clone()))?;
            let o = *self.table.get(&enc).ok_or_else(|| Error::WordNotInDomain(dec.clone()))?;
            table.insert(w, o);
        }
        Ok(BlockMap {
            memory: self.memory,
            anticipation: self.anticipation,
            domain: sub.clone(),
            source: src,
            target: self.target.clone(),
            table,
        })
    }

    /// Same code viewed with a declared codomain shift as the next domain.
    fn encoded_output(&self, w: &[u32]) -> Option<Vec<u32>> {
        let k = self.window();
        if w.len() < k {
            return None;
        }
        w.windows(k).map(|win| self.table.get(win).copied()).collect()
    }
}

/// Slides the window along `w`.
pub fn apply(code: &BlockMap, w: &[String]) -> Result<Word> {
    if w.len() < code.window() {
        return Err(Error::WordTooShort { len: w.len(), window: code.window() });
    }
    if !in_language(&code.domain, w)? {
        return Err(Error::WordNotInDomain(w.to_vec()));
    }
    let enc = code.source.encode(w).ok_or_else(|| Error::WordNotInDomain(w.to_vec()))?;
    let out = code.encoded_output(&enc).ok_or_else(|| Error::WordNotInDomain(w.to_vec()))?;
    Ok(code.target.decode(&out))
}

/// `g ∘ f`, with memory and anticipation added.
pub fn compose(g: &BlockMap, f: &BlockMap) -> Result<BlockMap> {
    let w = f.window() + g.window() - 1;
    let (src, words) = encoded_words(&f.domain, w)?;
    debug_assert_eq!(src, f.source);
    let remap: Vec<Option<u32>> = f.target.symbols().iter().map(|s| g.source.index_of(s)).collect();
    let mut table = BTreeMap::new();
    for word in words {
        let mid = f.encoded_output(&word).expect("windows of the domain are in the table");
        let moved: Option<Vec<u32>> = mid.iter().map(|&s| remap[s as usize]).collect();
        let o = moved.and_then(|m| g.table.get(&m).copied());
        match o {
            Some(o) => {
                table.insert(word, o);
            }
            None => return Err(Error::ImageNotInDomain(f.target.decode(&mid))),
        }
    }
    Ok(BlockMap {
        memory: f.memory + g.memory,
        anticipation: f.anticipation + g.anticipation,
        domain: f.domain.clone(),
        source: f.source.clone(),
        target: g.target.clone(),
        table,
    })
}

/// A 1-block code on the higher block shift and the higher block
/// conjugacy `beta` with `code = one_block ∘ beta` (same indexing).
pub fn recode_one_block(code: &BlockMap) -> Result<(BlockMap, BlockMap)> {
    let w = code.window();
    let hb = higher_block(&code.domain, w)?;
    let hb_alpha = hb.alphabet();
    let beta = BlockMap::from_fn_into(code.domain.clone(), code.memory, code.anticipation, hb_alpha, |win| {
        block_name(win)
    })?;
    let mut by_name: HashMap<String, u32> = HashMap::new();
    for (win, &o) in &code.table {
        let parts: Vec<&str> = win.iter().map(|&s| code.source.symbol(s)).collect();
        by_name.insert(block_name(&parts), o);
    }
    let one = BlockMap::from_fn_into(hb, 0, 0, code.target.clone(), |s| {
        code.target.symbol(by_name[s[0]]).to_string()
    })?;
    Ok((one, beta))
}

/// Labeled graph whose label sequences are the images of the domain.
pub fn image_presentation(code: &BlockMap) -> Result<Presentation> {
    let c = code.domain.canon()?;
    let (p, words) = window_presentation(&c.ess, code.window(), WINDOW_BUDGET)?;
    let outs: Vec<u32> = words.iter().map(|w| code.table[w]).collect();
    Ok(p.relabel(code.target.clone(), |l| outs[l as usize]))
}

/// The image shift, as a canonical right-resolving presentation.
pub fn image(code: &BlockMap) -> Result<ShiftSpace> {
    let p = image_presentation(code)?;
    let s = ShiftSpace::from_presentation(&p, (0..p.n_states).map(|i| format!("s{i}")).collect())?;
    determinize(&s)
}

pub fn is_factor_onto(code: &BlockMap, y: &ShiftSpace) -> Result<bool> {
    language_eq(&image(code)?, y)
}

/// Injectivity on points: no bi-infinite walk of the agreement graph
/// passes through a pair of distinct windows.
pub fn is_embedding(code: &BlockMap) -> Result<bool> {
    let c = code.domain.canon()?;
    let (p, words) = window_presentation(&c.ess, code.window(), WINDOW_BUDGET)?;
    let outs: Vec<u32> = words.iter().map(|w| code.table[w]).collect();
    let n = p.n_states as u32;
    let mut by_out: HashMap<u32, Vec<&Edge>> = HashMap::new();
    for e in &p.edges {
        by_out.entry(outs[e.label as usize]).or_default().push(e);
    }
    let mut edges = Vec::new();
    let mut differs = Vec::new();
    for group in by_out.values() {
        for e in group {
            for f in group {
                edges.push(Edge { from: e.from * n + f.from, to: e.to * n + f.to, label: 0 });
                differs.push(e.label != f.label);
            }
        }
    }
    // Tag each pair edge with its index so it survives trimming.
    let tagged: Vec<Edge> = edges.iter().enumerate().map(|(i, e)| Edge { label: i as u32, ..*e }).collect();
    let labels = Alphabet::new(vec!["*".into()])?;
    let pair = Presentation { alphabet: labels, n_states: (n * n) as usize, edges: tagged };
    let (t, _) = pair.trim();
    Ok(!t.edges.iter().any(|e| differs[e.label as usize]))
}

/// A composite `stages[k-1] ∘ … ∘ stages[0]` kept as separate tables.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeChain {
    pub stages: Vec<BlockMap>,
}

impl CodeChain {
    pub fn new(stages: Vec<BlockMap>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::Precondition("a code chain needs at least one stage".into()));
        }
        Ok(CodeChain { stages })
    }

    pub fn single(code: BlockMap) -> Self {
        CodeChain { stages: vec![code] }
    }

    pub fn memory(&self) -> usize {
        self.stages.iter().map(|s| s.memory).sum()
    }

    pub fn anticipation(&self) -> usize {
        self.stages.iter().map(|s| s.anticipation).sum()
    }

    pub fn window(&self) -> usize {
        self.memory() + self.anticipation() + 1
    }

    pub fn domain(&self) -> &ShiftSpace {
        &self.stages[0].domain
    }

    pub fn target(&self) -> &Alphabet {
        &self.stages.last().unwrap().target
    }

    pub fn then(mut self, other: CodeChain) -> Self {
        self.stages.extend(other.stages);
        self
    }

    /// Runs an encoded word of the first domain through every stage.
    fn run_encoded(&self, w: &[u32]) -> std::result::Result<Vec<u32>, Word> {
        let mut cur = w.to_vec();
        let mut alpha = &self.stages[0].source;
        for s in &self.stages {
            let moved: Option<Vec<u32>> = if alpha == &s.source {
                Some(cur.clone())
            } else {
                cur.iter().map(|&x| s.source.index_of(alpha.symbol(x))).collect()
            };
            let moved = moved.ok_or_else(|| alpha.decode(&cur))?;
            cur = s.encoded_output(&moved).ok_or_else(|| s.source.decode(&moved))?;
            alpha = &s.target;
        }
        Ok(cur)
    }

    pub fn apply(&self, w: &[String]) -> Result<Word> {
        if w.len() < self.window() {
            return Err(Error::WordTooShort { len: w.len(), window: self.window() });
        }
        if !in_language(self.domain(), w)? {
            return Err(Error::WordNotInDomain(w.to_vec()));
        }
        let enc = self.stages[0].source.encode(w).ok_or_else(|| Error::WordNotInDomain(w.to_vec()))?;
        let out = self.run_encoded(&enc).map_err(Error::ImageNotInDomain)?;
        Ok(self.target().decode(&out))
    }

    /// Folds the chain into one table.
    pub fn collapse(&self) -> Result<BlockMap> {
        let mut acc = self.stages[0].clone();
        for s in &self.stages[1..] {
            acc = compose(s, &acc)?;
        }
        Ok(acc)
    }

    /// Image of the whole chain, computed stage by stage.
    pub fn image(&self) -> Result<ShiftSpace> {
        let mut cur = image(&self.stages[0])?;
        for s in &self.stages[1..] {
            cur = image(&s.restrict(&cur)?)?;
        }
        Ok(cur)
    }
}

/// What [`verify_decomposition`] checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionCertificate {
    /// Windows of this length of the domain were compared.
    pub window_length: usize,
    pub windows_checked: usize,
    pub first_stage_onto: bool,
    pub second_stage_onto: bool,
}

/// Checks `phi = phi2 ∘ phi1`, that `phi1` maps onto `intermediate` and
/// that `phi2` maps `intermediate` onto `y`.
///
/// The stages are composed right to left and each partial composite is
/// trimmed, then compared with `phi` on every window of the common length.
pub fn verify_decomposition(
    phi: &BlockMap,
    phi1: &CodeChain,
    phi2: &CodeChain,
    intermediate: &ShiftSpace,
    y: &ShiftSpace,
) -> Result<DecompositionCertificate> {
    let chain = phi1.clone().then(phi2.clone());
    if phi.source != chain.stages[0].source {
        return Err(Error::Certificate("the two sides have different domains".into()));
    }
    // Fold from the right, trimming coordinates the output ignores, so
    // the table never spans the full window of the chain.
    let mut stages = chain.stages.iter().rev();
    let mut g = trim(stages.next().expect("chains are nonempty").clone());
    let mut windows_checked = 0usize;
    for f in stages {
        g = compose(&g, f).map_err(|e| match e {
            Error::ImageNotInDomain(w) => Error::Certificate(format!("intermediate word {w:?} is outside a stage domain")),
            e => e,
        })?;
        windows_checked += g.len();
        g = trim(g);
    }
    let m = phi.memory.max(g.memory);
    let a = phi.anticipation.max(g.anticipation);
    let len = m + a + 1;
    let (_, words) = encoded_words(&phi.domain, len)?;
    windows_checked += words.len();
    for w in &words {
        let left = phi.table[&w[m - phi.memory..=m + phi.anticipation]];
        let right = g.table[&w[m - g.memory..=m + g.anticipation]];
        if phi.target.symbol(left) != g.target.symbol(right) {
            return Err(Error::Mismatch { window: phi.source.decode(w) });
        }
    }
    let first_stage_onto = language_eq(&phi1.image()?, intermediate)?;
    let second_stage_onto = language_eq(&image_of_chain_on(phi2, intermediate)?, y)?;
    if !first_stage_onto {
        return Err(Error::Certificate("first stage does not map onto the intermediate shift".into()));
    }
    if !second_stage_onto {
        return Err(Error::Certificate("second stage does not map onto the target shift".into()));
    }
    Ok(DecompositionCertificate { window_length: len, windows_checked, first_stage_onto, second_stage_onto })
}

/// Drops outer window coordinates the output does not depend on.
pub fn trim(mut code: BlockMap) -> BlockMap {
    loop {
        let mut changed = false;
        if code.memory > 0 {
            if let Some(t) = drop_coord(&code.table, true) {
                code.table = t;
                code.memory -= 1;
                changed = true;
            }
        }
        if code.anticipation > 0 {
            if let Some(t) = drop_coord(&code.table, false) {
                code.table = t;
                code.anticipation -= 1;
                changed = true;
            }
        }
        if !changed {
            return code;
        }
    }
}

fn drop_coord(table: &BTreeMap<Vec<u32>, u32>, first: bool) -> Option<BTreeMap<Vec<u32>, u32>> {
    let mut out = BTreeMap::new();
    for (w, &o) in table {
        let k = if first { w[1..].to_vec() } else { w[..w.len() - 1].to_vec() };
        if *out.entry(k).or_insert(o) != o {
            return None;
        }
    }
    Some(out)
}

fn image_of_chain_on(chain: &CodeChain, x: &ShiftSpace) -> Result<ShiftSpace> {
    let mut cur = x.clone();
    for s in &chain.stages {
        cur = image(&s.restrict(&cur)?)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::words;
    use crate::symbols::word;

    fn full2() -> ShiftSpace {
        ShiftSpace::edge_shift(vec![vec![2]]).unwrap()
    }

    fn golden() -> ShiftSpace {
        ShiftSpace::sft(Alphabet::new(vec!["0".into(), "1".into()]).unwrap(), vec![word("11")]).unwrap()
    }

    fn xor() -> BlockMap {
        BlockMap::from_fn(full2(), 0, 1, |w| if w[0] == w[1] { "0".into() } else { "1".into() }).unwrap()
    }

    #[test]
    fn identity_applies() {
        let id = BlockMap::identity(full2()).unwrap();
        assert_eq!(apply(&id, &word("0110")).unwrap(), word("0110"));
        assert_eq!(apply(&xor(), &word("0110")).unwrap(), word("101"));
        assert!(matches!(apply(&xor(), &word("0")), Err(Error::WordTooShort { .. })));
    }

    #[test]
    fn compose_window_arithmetic() {
        let a = BlockMap::from_fn(full2(), 1, 1, |w| w[1].to_string()).unwrap();
        let c = compose(&a, &a).unwrap();
        assert_eq!(c.window(), 5);
        let id = BlockMap::identity(full2()).unwrap();
        assert_eq!(compose(&id, &xor()).unwrap(), xor());
    }

    #[test]
    fn images() {
        let collapse = BlockMap::from_fn(golden(), 0, 0, |_| "0".into()).unwrap();
        let img = image(&collapse).unwrap();
        assert_eq!(words(&img, 3).unwrap(), vec![word("000")]);
        let single = ShiftSpace::edge_shift(vec![vec![1]]).unwrap();
        assert!(is_factor_onto(&collapse, &single).unwrap());
        assert!(!is_factor_onto(&collapse, &full2()).unwrap());
        assert!(is_factor_onto(&xor(), &full2()).unwrap());
    }

    #[test]
    fn embeddings() {
        assert!(is_embedding(&BlockMap::identity(full2()).unwrap()).unwrap());
        assert!(!is_embedding(&BlockMap::from_fn(full2(), 0, 0, |_| "0".into()).unwrap()).unwrap());
        assert!(!is_embedding(&xor()).unwrap());
        let (_, beta) = recode_one_block(&xor()).unwrap();
        assert!(is_embedding(&beta).unwrap());
    }

    #[test]
    fn recoding_keeps_the_code() {
        let (one, beta) = recode_one_block(&xor()).unwrap();
        assert_eq!(one.window(), 1);
        assert_eq!(compose(&one, &beta).unwrap().entries(), xor().entries());
        assert!(language_eq(&image(&one).unwrap(), &image(&xor()).unwrap()).unwrap());
    }

    #[test]
    fn partial_table_is_rejected() {
        let e = BlockMap::new(
            full2(),
            0,
            0,
            Alphabet::new(vec!["a".into()]).unwrap(),
            vec![(word("0"), "a".into())],
        )
        .unwrap_err();
        assert_eq!(e, Error::IncompleteTable(vec![word("1")]));
    }

    #[test]
    fn decomposition_certificate() {
        let phi = xor();
        let id = CodeChain::single(BlockMap::identity(full2()).unwrap());
        let cert = verify_decomposition(&phi, &id, &CodeChain::single(phi.clone()), &full2(), &full2()).unwrap();
        assert_eq!(cert.window_length, 2);
        let bad = phi.with_entry(&word("01"), "0").unwrap();
        let e = verify_decomposition(&phi, &id, &CodeChain::single(bad), &full2(), &full2()).unwrap_err();
        assert_eq!(e, Error::Mismatch { window: word("01") });
    }
}
