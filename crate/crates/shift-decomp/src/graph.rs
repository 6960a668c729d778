//! Labeled graphs and the automata algorithms behind every shift computation.

use std::collections::{HashMap, VecDeque};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::symbols::{block_name, Alphabet};

pub const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: u32,
    pub to: u32,
    pub label: u32,
}

/// A finite labeled directed multigraph.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub alphabet: Alphabet,
    pub n_states: usize,
    pub edges: Vec<Edge>,
}

impl Presentation {
    pub fn new(alphabet: Alphabet, n_states: usize, edges: Vec<Edge>) -> Self {
        Presentation { alphabet, n_states, edges }
    }

    pub fn is_empty(&self) -> bool {
        self.n_states == 0
    }

    /// Outgoing edge indices per state, ordered by (label, target).
    pub fn out_edges(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.n_states];
        for (i, e) in self.edges.iter().enumerate() {
            out[e.from as usize].push(i as u32);
        }
        for v in &mut out {
            v.sort_by_key(|&i| {
                let e = self.edges[i as usize];
                (e.label, e.to, i)
            });
        }
        out
    }

    pub fn in_edges(&self) -> Vec<Vec<u32>> {
        let mut inn = vec![Vec::new(); self.n_states];
        for (i, e) in self.edges.iter().enumerate() {
            inn[e.to as usize].push(i as u32);
        }
        inn
    }

    /// Keeps the states flagged in `keep`; returns the old-to-new map.
    pub fn restrict(&self, keep: &[bool]) -> (Presentation, Vec<u32>) {
        let mut map = vec![NONE; self.n_states];
        let mut n = 0u32;
        for s in 0..self.n_states {
            if keep[s] {
                map[s] = n;
                n += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| keep[e.from as usize] && keep[e.to as usize])
            .map(|e| Edge { from: map[e.from as usize], to: map[e.to as usize], label: e.label })
            .collect();
        (Presentation::new(self.alphabet.clone(), n as usize, edges), map)
    }

    /// Removes states that do not lie on a bi-infinite path.
    pub fn trim(&self) -> (Presentation, Vec<u32>) {
        let n = self.n_states;
        let mut indeg = vec![0usize; n];
        let mut outdeg = vec![0usize; n];
        for e in &self.edges {
            outdeg[e.from as usize] += 1;
            indeg[e.to as usize] += 1;
        }
        let out = self.out_edges();
        let inn = self.in_edges();
        let mut alive = vec![true; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&s| indeg[s] == 0 || outdeg[s] == 0).collect();
        for &s in &queue {
            alive[s] = false;
        }
        while let Some(s) = queue.pop_front() {
            for &ei in &out[s] {
                let t = self.edges[ei as usize].to as usize;
                if alive[t] {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        alive[t] = false;
                        queue.push_back(t);
                    }
                }
            }
            for &ei in &inn[s] {
                let t = self.edges[ei as usize].from as usize;
                if alive[t] {
                    outdeg[t] -= 1;
                    if outdeg[t] == 0 {
                        alive[t] = false;
                        queue.push_back(t);
                    }
                }
            }
        }
        self.restrict(&alive)
    }

    pub fn is_right_resolving(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().all(|e| seen.insert((e.from, e.label)))
    }

    /// Strongly connected components, each sorted, ordered by smallest member.
    pub fn sccs(&self) -> Vec<Vec<u32>> {
        let n = self.n_states;
        let out = self.out_edges();
        let mut index = vec![NONE; n];
        let mut low = vec![0u32; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<u32> = Vec::new();
        let mut comps = Vec::new();
        let mut counter = 0u32;
        for root in 0..n {
            if index[root] != NONE {
                continue;
            }
            let mut call: Vec<(u32, usize)> = vec![(root as u32, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root as u32);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                let vu = v as usize;
                if *pos < out[vu].len() {
                    let w = self.edges[out[vu][*pos] as usize].to as usize;
                    *pos += 1;
                    if index[w] == NONE {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w as u32);
                        on_stack[w] = true;
                        call.push((w as u32, 0));
                    } else if on_stack[w] {
                        low[vu] = low[vu].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(p, _)) = call.last() {
                        low[p as usize] = low[p as usize].min(low[vu]);
                    }
                    if low[vu] == index[vu] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w as usize] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        comps.sort_by_key(|c| c[0]);
        comps
    }

    /// Components carrying at least one cycle.
    pub fn nontrivial_sccs(&self) -> Vec<Vec<u32>> {
        let comps = self.sccs();
        let mut comp_of = vec![NONE; self.n_states];
        for (i, c) in comps.iter().enumerate() {
            for &s in c {
                comp_of[s as usize] = i as u32;
            }
        }
        let mut has_edge = vec![false; comps.len()];
        for e in &self.edges {
            let (a, b) = (comp_of[e.from as usize], comp_of[e.to as usize]);
            if a == b {
                has_edge[a as usize] = true;
            }
        }
        comps.into_iter().zip(has_edge).filter(|(_, h)| *h).map(|(c, _)| c).collect()
    }

    /// Gcd of cycle lengths inside a strongly connected component.
    pub fn period_of(&self, comp: &[u32]) -> u64 {
        let mut member = vec![false; self.n_states];
        for &s in comp {
            member[s as usize] = true;
        }
        let out = self.out_edges();
        let mut level = vec![i64::MIN; self.n_states];
        let start = comp[0] as usize;
        level[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &ei in &out[u] {
                let v = self.edges[ei as usize].to as usize;
                if member[v] && level[v] == i64::MIN {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let mut g: i64 = 0;
        for e in &self.edges {
            let (u, v) = (e.from as usize, e.to as usize);
            if member[u] && member[v] {
                g = g.gcd(&(level[u] + 1 - level[v]).abs());
            }
        }
        g.max(0) as u64
    }

    /// Integer adjacency matrix restricted to `states` (in the given order).
    pub fn adjacency(&self, states: &[u32]) -> Vec<Vec<u64>> {
        let mut pos = vec![NONE; self.n_states];
        for (i, &s) in states.iter().enumerate() {
            pos[s as usize] = i as u32;
        }
        let k = states.len();
        let mut a = vec![vec![0u64; k]; k];
        for e in &self.edges {
            let (i, j) = (pos[e.from as usize], pos[e.to as usize]);
            if i != NONE && j != NONE {
                a[i as usize][j as usize] += 1;
            }
        }
        a
    }

    /// Same graph with labels rewritten through `f` into a new alphabet.
    pub fn relabel(&self, alphabet: Alphabet, f: impl Fn(u32) -> u32) -> Presentation {
        let edges = self.edges.iter().map(|e| Edge { from: e.from, to: e.to, label: f(e.label) }).collect();
        Presentation::new(alphabet, self.n_states, edges)
    }

    /// Disjoint union of two presentations over a common alphabet.
    pub fn union(&self, other: &Presentation) -> Presentation {
        debug_assert_eq!(self.alphabet, other.alphabet);
        let off = self.n_states as u32;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| Edge { from: e.from + off, to: e.to + off, label: e.label }));
        Presentation::new(self.alphabet.clone(), self.n_states + other.n_states, edges)
    }
}

/// Paths of `w` edges become edges labeled by the word they read.
///
/// States are paths of `w - 1` edges. Returns the presentation (over
/// block-named symbols, in lexicographic order of the underlying words)
/// together with the word of each new label.
pub fn window_presentation(p: &Presentation, w: usize, budget: usize) -> Result<(Presentation, Vec<Vec<u32>>)> {
    assert!(w >= 1);
    let out = p.out_edges();
    let mut path_id: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut paths: Vec<Vec<u32>> = Vec::new();
    if w == 1 {
        for s in 0..p.n_states {
            path_id.insert(vec![s as u32], s as u32);
            paths.push(vec![s as u32]);
        }
    } else {
        let mut frontier: Vec<Vec<u32>> = Vec::new();
        for s in 0..p.n_states {
            for &e in &out[s] {
                frontier.push(vec![e]);
            }
        }
        for _ in 1..w - 1 {
            let mut next = Vec::new();
            for path in &frontier {
                let last = p.edges[*path.last().unwrap() as usize].to as usize;
                for &e in &out[last] {
                    let mut q = path.clone();
                    q.push(e);
                    next.push(q);
                }
                if next.len() > budget {
                    return Err(Error::Budget(format!("window presentation exceeds {budget} states")));
                }
            }
            frontier = next;
        }
        if frontier.len() > budget {
            return Err(Error::Budget(format!("window presentation exceeds {budget} states")));
        }
        for (i, path) in frontier.into_iter().enumerate() {
            path_id.insert(path.clone(), i as u32);
            paths.push(path);
        }
    }
    let mut raw: Vec<(u32, u32, Vec<u32>)> = Vec::new();
    for (i, path) in paths.iter().enumerate() {
        if w == 1 {
            let s = path[0] as usize;
            for &e in &out[s] {
                let ed = p.edges[e as usize];
                raw.push((i as u32, ed.to, vec![ed.label]));
            }
        } else {
            let last = p.edges[*path.last().unwrap() as usize].to as usize;
            for &e in &out[last] {
                let mut full = path.clone();
                full.push(e);
                let labels: Vec<u32> = full.iter().map(|&x| p.edges[x as usize].label).collect();
                let target = path_id[&full[1..]];
                raw.push((i as u32, target, labels));
            }
        }
        if raw.len() > budget.saturating_mul(64) {
            return Err(Error::Budget(format!("window presentation exceeds {budget} states")));
        }
    }
    let mut words: Vec<Vec<u32>> = raw.iter().map(|r| r.2.clone()).collect();
    words.sort();
    words.dedup();
    let word_id: HashMap<&Vec<u32>, u32> = words.iter().enumerate().map(|(i, w)| (w, i as u32)).collect();
    let names: Vec<String> = words
        .iter()
        .map(|w| {
            let parts: Vec<&str> = w.iter().map(|&l| p.alphabet.symbol(l)).collect();
            block_name(&parts)
        })
        .collect();
    let alphabet = unique_alphabet(names)?;
    let edges = raw.iter().map(|(f, t, l)| Edge { from: *f, to: *t, label: word_id[l] }).collect();
    Ok((Presentation::new(alphabet, paths.len(), edges), words))
}

fn unique_alphabet(names: Vec<String>) -> Result<Alphabet> {
    Alphabet::new(names).map_err(|e| Error::Precondition(format!("block names collide: {e}")))
}

/// Deterministic automaton with partial transitions; every state accepts.
#[derive(Clone, Debug)]
pub struct Dfa {
    pub alphabet: Alphabet,
    pub n: usize,
    pub delta: Vec<u32>,
    pub init: u32,
}

impl Dfa {
    pub fn k(&self) -> usize {
        self.alphabet.len()
    }

    pub fn step(&self, q: u32, a: u32) -> u32 {
        if q == NONE {
            NONE
        } else {
            self.delta[q as usize * self.k() + a as usize]
        }
    }

    pub fn run(&self, mut q: u32, w: &[u32]) -> u32 {
        for &a in w {
            q = self.step(q, a);
            if q == NONE {
                break;
            }
        }
        q
    }

    /// Subset construction started from the set of all states.
    pub fn subset(p: &Presentation) -> (Dfa, Vec<Vec<u32>>) {
        let k = p.alphabet.len();
        let mut adj: Vec<Vec<(u32, u32)>> = vec![Vec::new(); p.n_states];
        for e in &p.edges {
            adj[e.from as usize].push((e.label, e.to));
        }
        let init: Vec<u32> = (0..p.n_states as u32).collect();
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut sets: Vec<Vec<u32>> = Vec::new();
        ids.insert(init.clone(), 0);
        sets.push(init);
        let mut delta: Vec<u32> = Vec::new();
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); k];
        let mut touched: Vec<u32> = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            delta.extend(std::iter::repeat(NONE).take(k));
            for &s in &sets[i] {
                for &(a, t) in &adj[s as usize] {
                    if buckets[a as usize].is_empty() {
                        touched.push(a);
                    }
                    buckets[a as usize].push(t);
                }
            }
            touched.sort_unstable();
            for &a in &touched {
                let mut t = std::mem::take(&mut buckets[a as usize]);
                t.sort_unstable();
                t.dedup();
                let id = match ids.get(&t) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len() as u32;
                        ids.insert(t.clone(), id);
                        sets.push(t);
                        id
                    }
                };
                delta[i * k + a as usize] = id;
            }
            touched.clear();
            i += 1;
        }
        (Dfa { alphabet: p.alphabet.clone(), n: sets.len(), delta, init: 0 }, sets)
    }

    /// Moore refinement; classes are numbered by first occurrence.
    pub fn minimize(&self) -> (Dfa, Vec<u32>) {
        let k = self.k();
        let mut class = vec![0u32; self.n];
        let mut count = if self.n == 0 { 0 } else { 1 };
        loop {
            let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut next = vec![0u32; self.n];
            for s in 0..self.n {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[s]);
                for a in 0..k {
                    let t = self.delta[s * k + a];
                    sig.push(if t == NONE { NONE } else { class[t as usize] });
                }
                let len = ids.len() as u32;
                next[s] = *ids.entry(sig).or_insert(len);
            }
            let new_count = ids.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut delta = vec![NONE; count * k];
        let mut done = vec![false; count];
        for s in 0..self.n {
            let c = class[s] as usize;
            if done[c] {
                continue;
            }
            done[c] = true;
            for a in 0..k {
                let t = self.delta[s * k + a];
                delta[c * k + a] = if t == NONE { NONE } else { class[t as usize] };
            }
        }
        let init = if self.init == NONE { NONE } else { class[self.init as usize] };
        (Dfa { alphabet: self.alphabet.clone(), n: count, delta, init }, class)
    }

    pub fn to_presentation(&self) -> Presentation {
        let k = self.k();
        let mut edges = Vec::new();
        for s in 0..self.n {
            for a in 0..k {
                let t = self.delta[s * k + a];
                if t != NONE {
                    edges.push(Edge { from: s as u32, to: t, label: a as u32 });
                }
            }
        }
        Presentation::new(self.alphabet.clone(), self.n, edges)
    }

    /// Words readable from `init`, in lexicographic order of the alphabet.
    pub fn words(&self, n: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        if self.init == NONE {
            return out;
        }
        let mut cur = Vec::with_capacity(n);
        self.words_rec(self.init, n, &mut cur, &mut out);
        out
    }

    fn words_rec(&self, q: u32, n: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for a in 0..self.k() as u32 {
            let t = self.step(q, a);
            if t != NONE {
                cur.push(a);
                self.words_rec(t, n, cur, out);
                cur.pop();
            }
        }
    }

    /// Length of the longest word that is not synchronizing plus one, or
    /// `None` when arbitrarily long non-synchronizing words exist.
    ///
    /// A word `v` synchronizes iff every state reading `v` lands where the
    /// initial state lands, so non-synchronizing words are exactly the labels
    /// of off-diagonal paths from pairs `(q, init)` in the pair graph.
    pub fn min_step(&self) -> Option<usize> {
        let k = self.k();
        let n = self.n;
        let key = |p: u32, q: u32| (p as u64) * (n as u64) + q as u64;
        let mut id: HashMap<u64, u32> = HashMap::new();
        let mut nodes: Vec<(u32, u32)> = Vec::new();
        let mut queue = VecDeque::new();
        for q in 0..n as u32 {
            if q != self.init {
                id.insert(key(q, self.init), nodes.len() as u32);
                nodes.push((q, self.init));
                queue.push_back(nodes.len() - 1);
            }
        }
        let mut succ: Vec<Vec<u32>> = vec![Vec::new(); nodes.len()];
        while let Some(i) = queue.pop_front() {
            let (p, q) = nodes[i];
            for a in 0..k as u32 {
                let (p2, q2) = (self.step(p, a), self.step(q, a));
                if p2 == NONE || q2 == NONE || p2 == q2 {
                    continue;
                }
                let kk = key(p2, q2);
                let j = match id.get(&kk) {
                    Some(&j) => j,
                    None => {
                        let j = nodes.len() as u32;
                        id.insert(kk, j);
                        nodes.push((p2, q2));
                        succ.push(Vec::new());
                        queue.push_back(j as usize);
                        j
                    }
                };
                succ[i].push(j);
            }
        }
        if nodes.is_empty() {
            return Some(0);
        }
        // Longest path by reverse topological order; a cycle means no finite step.
        let m = nodes.len();
        let mut indeg = vec![0usize; m];
        for s in &succ {
            for &j in s {
                indeg[j as usize] += 1;
            }
        }
        let mut order = Vec::with_capacity(m);
        let mut q: VecDeque<usize> = (0..m).filter(|&i| indeg[i] == 0).collect();
        while let Some(i) = q.pop_front() {
            order.push(i);
            for &j in &succ[i] {
                indeg[j as usize] -= 1;
                if indeg[j as usize] == 0 {
                    q.push_back(j as usize);
                }
            }
        }
        if order.len() < m {
            return None;
        }
        let mut longest = vec![0usize; m];
        for &i in order.iter().rev() {
            longest[i] = succ[i].iter().map(|&j| longest[j as usize] + 1).max().unwrap_or(0);
        }
        Some(longest.into_iter().max().unwrap() + 1)
    }
}

/// Language inclusion between two minimal automata (labels matched by name).
pub fn dfa_included(a: &Dfa, b: &Dfa) -> bool {
    let map: Vec<u32> = a.alphabet.symbols().iter().map(|s| b.alphabet.index_of(s).unwrap_or(NONE)).collect();
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![(a.init, b.init)];
    seen.insert((a.init, b.init));
    while let Some((p, q)) = stack.pop() {
        for (x, &y) in map.iter().enumerate() {
            let p2 = a.step(p, x as u32);
            if p2 == NONE {
                continue;
            }
            if y == NONE {
                return false;
            }
            let q2 = b.step(q, y);
            if q2 == NONE {
                return false;
            }
            if seen.insert((p2, q2)) {
                stack.push((p2, q2));
            }
        }
    }
    true
}

/// Minimal automaton, essential right-resolving presentation, and the
/// irreducible cover when the shift is irreducible.
#[derive(Clone, Debug)]
pub struct Canon {
    pub min: Dfa,
    pub ess: Presentation,
    pub ess_to_min: Vec<u32>,
    pub irreducible: bool,
    /// For each minimal state, the subset (of input states) that first produced it.
    pub min_rep: Vec<Vec<u32>>,
}

pub fn canonicalize(p: &Presentation) -> Result<Canon> {
    let (tp, tmap) = p.trim();
    if tp.is_empty() {
        return Err(Error::EmptyShift);
    }
    let mut back = vec![0u32; tp.n_states];
    for (old, &new) in tmap.iter().enumerate() {
        if new != NONE {
            back[new as usize] = old as u32;
        }
    }
    let (d, sets) = Dfa::subset(&tp);
    let (min, class) = d.minimize();
    let mut min_rep: Vec<Vec<u32>> = vec![Vec::new(); min.n];
    let mut done = vec![false; min.n];
    for (s, &c) in class.iter().enumerate() {
        if !done[c as usize] {
            done[c as usize] = true;
            min_rep[c as usize] = sets[s].iter().map(|&x| back[x as usize]).collect();
        }
    }
    let mp = min.to_presentation();
    let (ess, emap) = mp.trim();
    let mut ess_to_min = vec![0u32; ess.n_states];
    for (old, &new) in emap.iter().enumerate() {
        if new != NONE {
            ess_to_min[new as usize] = old as u32;
        }
    }
    let mut canon = Canon { min, ess, ess_to_min, irreducible: false, min_rep };
    restrict_to_cover(&mut canon);
    Ok(canon)
}

/// Replaces the essential graph by its unique terminal component when that
/// component already carries the whole language.
fn restrict_to_cover(c: &mut Canon) {
    let comps = c.ess.sccs();
    let mut comp_of = vec![0usize; c.ess.n_states];
    for (i, comp) in comps.iter().enumerate() {
        for &s in comp {
            comp_of[s as usize] = i;
        }
    }
    let mut terminal = vec![true; comps.len()];
    for e in &c.ess.edges {
        if comp_of[e.from as usize] != comp_of[e.to as usize] {
            terminal[comp_of[e.from as usize]] = false;
        }
    }
    let terms: Vec<usize> = (0..comps.len()).filter(|&i| terminal[i]).collect();
    if terms.len() != 1 {
        return;
    }
    let comp = &comps[terms[0]];
    let cover: Vec<u32> = comp.iter().map(|&s| c.ess_to_min[s as usize]).collect();
    if !covers_language(&c.min, &cover) {
        return;
    }
    if comp.len() < c.ess.n_states {
        let mut keep = vec![false; c.ess.n_states];
        for &s in comp {
            keep[s as usize] = true;
        }
        let (sub, map) = c.ess.restrict(&keep);
        let mut e2m = vec![0u32; sub.n_states];
        for (old, &new) in map.iter().enumerate() {
            if new != NONE {
                e2m[new as usize] = c.ess_to_min[old];
            }
        }
        c.ess = sub;
        c.ess_to_min = e2m;
    }
    c.irreducible = true;
}

/// Whether every word read from the initial state is readable from `states`.
fn covers_language(m: &Dfa, states: &[u32]) -> bool {
    let mut start: Vec<u32> = states.to_vec();
    start.sort_unstable();
    let mut seen: std::collections::HashSet<(u32, Vec<u32>)> = std::collections::HashSet::new();
    let mut stack = vec![(m.init, start)];
    while let Some((q, set)) = stack.pop() {
        if !seen.insert((q, set.clone())) {
            continue;
        }
        for a in 0..m.k() as u32 {
            let q2 = m.step(q, a);
            if q2 == NONE {
                continue;
            }
            let mut s2: Vec<u32> = set.iter().map(|&s| m.step(s, a)).filter(|&t| t != NONE).collect();
            if s2.is_empty() {
                return false;
            }
            s2.sort_unstable();
            s2.dedup();
            stack.push((q2, s2));
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> Presentation {
        let a = Alphabet::new(vec!["0".into(), "1".into()]).unwrap();
        Presentation::new(
            a,
            2,
            vec![Edge { from: 0, to: 0, label: 0 }, Edge { from: 0, to: 1, label: 1 }, Edge { from: 1, to: 0, label: 0 }],
        )
    }

    fn even() -> Presentation {
        let a = Alphabet::new(vec!["0".into(), "1".into()]).unwrap();
        Presentation::new(
            a,
            2,
            vec![Edge { from: 0, to: 0, label: 1 }, Edge { from: 0, to: 1, label: 0 }, Edge { from: 1, to: 0, label: 0 }],
        )
    }

    #[test]
    fn trim_removes_dead_states() {
        let a = Alphabet::new(vec!["x".into()]).unwrap();
        let p = Presentation::new(a, 3, vec![Edge { from: 0, to: 0, label: 0 }, Edge { from: 0, to: 1, label: 0 }, Edge { from: 2, to: 0, label: 0 }]);
        let (t, map) = p.trim();
        assert_eq!(t.n_states, 1);
        assert_eq!(map, vec![0, NONE, NONE]);
    }

    #[test]
    fn golden_min_step_is_one() {
        let c = canonicalize(&golden()).unwrap();
        assert_eq!(c.min.min_step(), Some(1));
        assert!(c.irreducible);
    }

    #[test]
    fn even_shift_is_not_finite_type() {
        let c = canonicalize(&even()).unwrap();
        assert_eq!(c.min.min_step(), None);
        assert_eq!(c.ess.n_states, 2);
        assert!(c.irreducible);
    }

    #[test]
    fn period_of_two_cycle() {
        let a = Alphabet::new(vec!["a".into(), "b".into()]).unwrap();
        let p = Presentation::new(a, 2, vec![Edge { from: 0, to: 1, label: 0 }, Edge { from: 1, to: 0, label: 1 }]);
        assert_eq!(p.period_of(&[0, 1]), 2);
    }

    #[test]
    fn window_of_golden() {
        let (w, words) = window_presentation(&golden(), 2, 1000).unwrap();
        assert_eq!(words.len(), 3);
        assert_eq!(w.n_states, 3);
    }
}
