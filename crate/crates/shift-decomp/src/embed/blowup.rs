use num_bigint::BigUint;
use num_traits::One;

use crate::algebra::{entropy, q_census, PeriodicCensus};
use crate::error::{Error, Result};
use crate::shift::{min_step, structure, words, ShiftSpace};
use crate::symbols::Word;

/// Which orbit to replace, and by how many orbits of which lengths.
///
/// `orbit` is one period of the periodic point, so n = `orbit.len()` must be
/// its least period. Multiplier M_i yields an orbit of length n·M_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupSpec {
    pub orbit: Word,
    pub multipliers: Vec<usize>,
}

/// Vertex count past which the entry-edge splitting gives up.
pub const MAX_SPLIT_VERTICES: usize = 1 << 14;

#[derive(Clone, Debug)]
struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    fn in_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].1 == v).collect()
    }

    fn matrix(&self) -> Vec<Vec<u64>> {
        let mut a = vec![vec![0u64; self.n]; self.n];
        for &(u, v) in &self.edges {
            a[u][v] += 1;
        }
        a
    }
}

/// The census predicted after replacing an orbit of length n.
///
/// q_n loses the n points of the orbit and gains n for every M_i = 1;
/// q_(nM) gains nM points for every M_i = M > 1.
pub fn predicted_census(before: &PeriodicCensus, n: usize, multipliers: &[usize]) -> PeriodicCensus {
    let mut q = before.q.clone();
    let h = before.horizon;
    if n <= h {
        let ones = multipliers.iter().filter(|&&m| m == 1).count();
        q[n - 1] = &q[n - 1] + BigUint::from(n * ones) - BigUint::from(n);
    }
    for &m in multipliers.iter().filter(|&&m| m > 1) {
        if n * m <= h {
            q[n * m - 1] += BigUint::from(n * m);
        }
    }
    PeriodicCensus { horizon: h, q }
}

fn is_primitive(w: &[String]) -> bool {
    let n = w.len();
    (1..n).filter(|d| n % d == 0).all(|d| (0..n).any(|i| w[i] != w[(i + d) % n]))
}

/// Cycle of the orbit in the path graph, if that cycle is simple and has
/// no chords; otherwise in the vertex graph of N-blocks, N = max(n+1, step).
fn locate(x: &ShiftSpace, w: &Word) -> Result<(Multigraph, Vec<usize>, Vec<usize>)> {
    let n = w.len();
    let g = x.path_graph()?;
    let p = &g.pres;
    let enc = p.alphabet.encode(w).ok_or(Error::OrbitNotFound)?;
    let out = p.out_edges();
    let mut found = None;
    for s in 0..p.n_states {
        let mut cur = s;
        let mut verts = Vec::with_capacity(n);
        let mut es = Vec::with_capacity(n);
        let mut ok = true;
        for &a in &enc {
            match out[cur].iter().find(|&&e| p.edges[e as usize].label == a) {
                Some(&e) => {
                    verts.push(cur);
                    es.push(e as usize);
                    cur = p.edges[e as usize].to as usize;
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && cur == s {
            found = Some((verts, es));
            break;
        }
    }
    let (verts, es) = found.ok_or(Error::OrbitNotFound)?;
    let mut seen = verts.clone();
    seen.sort_unstable();
    seen.dedup();
    let simple = seen.len() == n;
    let chordless = simple && {
        let on: Vec<bool> = (0..p.n_states).map(|v| verts.contains(&v)).collect();
        p.edges
            .iter()
            .enumerate()
            .all(|(i, e)| !(on[e.from as usize] && on[e.to as usize]) || es.contains(&i))
    };
    if chordless {
        let m = Multigraph { n: p.n_states, edges: p.edges.iter().map(|e| (e.from as usize, e.to as usize)).collect() };
        return Ok((m, verts, es));
    }
    let step = min_step(x)?.ok_or_else(|| Error::Precondition("blow-up needs a shift of finite type".into()))?;
    let big = (n + 1).max(step).max(1);
    let vs = words(x, big)?;
    let id: std::collections::HashMap<&[String], usize> = vs.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
    let mut edges = Vec::new();
    for e in words(x, big + 1)? {
        edges.push((id[&e[..big]], id[&e[1..]]));
    }
    let phase_block = |a: usize, len: usize| -> Word { (0..len).map(|i| w[(a + i) % n].clone()).collect() };
    let mut cverts = Vec::with_capacity(n);
    let mut cedges = Vec::with_capacity(n);
    for a in 0..n {
        let v = *id.get(phase_block(a, big).as_slice()).ok_or(Error::OrbitNotFound)?;
        cverts.push(v);
    }
    for a in 0..n {
        let (u, v) = (cverts[a], cverts[(a + 1) % n]);
        let e = edges.iter().position(|&x| x == (u, v)).ok_or(Error::OrbitNotFound)?;
        cedges.push(e);
    }
    Ok((Multigraph { n: vs.len(), edges }, cverts, cedges))
}

fn entries(g: &Multigraph, in_c: &[bool]) -> Vec<usize> {
    (0..g.edges.len()).filter(|&i| !in_c[g.edges[i].0] && in_c[g.edges[i].1]).collect()
}

/// In-splits `v`: edge `moved` now ends at a new vertex that copies every
/// edge leaving `v`.
fn split(g: &mut Multigraph, in_c: &mut Vec<bool>, v: usize, moved: usize) {
    let nv = g.n;
    g.n += 1;
    in_c.push(false);
    g.edges[moved].1 = nv;
    let copies: Vec<(usize, usize)> = g.edges.iter().filter(|e| e.0 == v).map(|e| (nv, e.1)).collect();
    g.edges.extend(copies);
}

/// One in-split on the way back from an entry edge; repeated calls raise
/// the number of edges entering the cycle.
fn grow_entries(g: &mut Multigraph, in_c: &mut Vec<bool>, cycle_edges: &[usize]) -> Result<()> {
    let e = entries(g, in_c)[0];
    let mut v = g.edges[e].0;
    for _ in 0..=g.n {
        let ins = g.in_edges(v);
        if ins.len() >= 2 {
            // A cycle vertex keeps its cycle edge.
            let moved = *ins.iter().rev().find(|i| !cycle_edges.contains(i)).unwrap();
            split(g, in_c, v, moved);
            return Ok(());
        }
        v = g.edges[ins[0]].0;
    }
    Err(Error::Precondition("every vertex has in-degree one; the shift has zero entropy".into()))
}

/// Replaces a periodic orbit of length n by orbits of lengths n·M_1, …, n·M_k.
///
/// The orbit is a chordless cycle C in a presentation. Predecessors are
/// in-split until at least k edges enter C. C is then replaced by k cycles
/// D_i of length n·M_i: the entry edges are shared out among the D_i (each
/// gets at least one), and every exit edge of C at phase b is repeated at
/// each vertex of each D_i whose position is ≡ b mod n. Walks entering and
/// leaving the region keep their lengths, so only the orbit itself
/// changes. The census is checked against [`predicted_census`].
pub fn blow_up(x: &ShiftSpace, spec: &BlowupSpec) -> Result<ShiftSpace> {
    let n = spec.orbit.len();
    let k = spec.multipliers.len();
    if n == 0 || k == 0 || spec.multipliers.contains(&0) {
        return Err(Error::Precondition("need a nonempty orbit and multipliers M_i ≥ 1".into()));
    }
    if !is_primitive(&spec.orbit) {
        return Err(Error::Precondition("orbit word is a proper power; give one least period".into()));
    }
    if !x.is_finite_type_form() {
        return Err(Error::Precondition("blow-up needs a shift of finite type".into()));
    }
    let facts = structure(x)?;
    if !facts.irreducible {
        return Err(Error::Precondition("blow-up needs an irreducible shift".into()));
    }
    if entropy(x)?.base.cmp_rational(&num_rational::BigRational::one()) != std::cmp::Ordering::Greater {
        return Err(Error::Precondition("blow-up needs positive entropy".into()));
    }
    let (mut g, cverts, cedges) = locate(x, &spec.orbit)?;
    let mut in_c = vec![false; g.n];
    for &v in &cverts {
        in_c[v] = true;
    }
    while entries(&g, &in_c).len() < k {
        if g.n > MAX_SPLIT_VERTICES {
            return Err(Error::Budget(format!("more than {MAX_SPLIT_VERTICES} vertices while splitting")));
        }
        grow_entries(&mut g, &mut in_c, &cedges)?;
    }

    let phase = |v: usize| cverts.iter().position(|&c| c == v).unwrap();
    let mut map = vec![usize::MAX; g.n];
    let mut count = 0;
    for v in 0..g.n {
        if !in_c[v] {
            map[v] = count;
            count += 1;
        }
    }
    let mut edges = Vec::new();
    let mut base = Vec::with_capacity(k);
    for &m in &spec.multipliers {
        base.push(count);
        let len = n * m;
        for j in 0..len {
            edges.push((count + j, count + (j + 1) % len));
        }
        count += len;
    }
    let ents = entries(&g, &in_c);
    for (t, &e) in ents.iter().enumerate() {
        let (u, c) = g.edges[e];
        let i = t.min(k - 1);
        edges.push((map[u], base[i] + phase(c)));
    }
    for (idx, &(u, v)) in g.edges.iter().enumerate() {
        match (in_c[u], in_c[v]) {
            (false, false) => edges.push((map[u], map[v])),
            (true, false) => {
                let b = phase(u);
                for (i, &m) in spec.multipliers.iter().enumerate() {
                    for j in (b..n * m).step_by(n) {
                        edges.push((base[i] + j, map[v]));
                    }
                }
            }
            (true, true) => debug_assert!(cedges.contains(&idx)),
            (false, true) => {}
        }
    }
    let out = ShiftSpace::edge_shift(Multigraph { n: count, edges }.matrix())?;

    let horizon = (n * spec.multipliers.iter().max().unwrap()).max(n) + n;
    let expect = predicted_census(&q_census(x, horizon)?, n, &spec.multipliers);
    let got = q_census(&out, horizon)?;
    for p in 1..=horizon {
        if expect.get(p) != got.get(p) {
            return Err(Error::CensusMismatch { period: p, expected: expect.get(p).to_string(), got: got.get(p).to_string() });
        }
    }
    let after = structure(&out)?;
    if !after.irreducible || (facts.mixing && !after.mixing) {
        return Err(Error::Certificate("blow-up lost irreducibility or mixing".into()));
    }
    Ok(out)
}

/// Least-rotation words of the periodic orbits of least period n.
pub fn periodic_orbits(x: &ShiftSpace, n: usize) -> Result<Vec<Word>> {
    let g = x.path_graph()?;
    let p = &g.pres;
    let out = p.out_edges();
    let mut found = Vec::new();
    for w in words(x, n)? {
        if !is_primitive(&w) {
            continue;
        }
        let least = (0..n).all(|r| {
            let rot: Vec<&String> = (0..n).map(|i| &w[(i + r) % n]).collect();
            w.iter().collect::<Vec<_>>() <= rot
        });
        if !least {
            continue;
        }
        let enc = p.alphabet.encode(&w).unwrap();
        // The point w^∞ exists iff some state has a closed walk reading w.
        let closed = (0..p.n_states).any(|s| {
            let mut states = vec![s];
            for &a in &enc {
                let mut next: Vec<usize> = states
                    .iter()
                    .flat_map(|&q| out[q].iter().map(|&e| p.edges[e as usize]))
                    .filter(|e| e.label == a)
                    .map(|e| e.to as usize)
                    .collect();
                next.sort_unstable();
                next.dedup();
                states = next;
            }
            states.contains(&s)
        });
        if closed {
            found.push(w);
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::word;

    fn full2() -> ShiftSpace {
        ShiftSpace::edge_shift(vec![vec![2]]).unwrap()
    }

    fn q(x: &ShiftSpace, h: usize) -> Vec<u64> {
        crate::algebra::census::to_u64_vec(&q_census(x, h).unwrap())
    }

    #[test]
    fn fixed_point_examples() {
        let two = blow_up(&full2(), &BlowupSpec { orbit: word("0"), multipliers: vec![1, 1] }).unwrap();
        assert_eq!(q(&two, 4), vec![3, 2, 6, 12]);
        let long = blow_up(&full2(), &BlowupSpec { orbit: word("0"), multipliers: vec![2] }).unwrap();
        assert_eq!(q(&long, 4), vec![1, 4, 6, 12]);
        let same = blow_up(&full2(), &BlowupSpec { orbit: word("0"), multipliers: vec![1] }).unwrap();
        assert_eq!(q(&same, 6), q(&full2(), 6));
    }

    #[test]
    fn golden_orbits() {
        let g = ShiftSpace::edge_shift(vec![vec![1, 1], vec![1, 0]]).unwrap();
        let orbits = periodic_orbits(&g, 2).unwrap();
        assert_eq!(orbits.len(), 1);
        let out = blow_up(&g, &BlowupSpec { orbit: orbits[0].clone(), multipliers: vec![1, 2, 3] }).unwrap();
        assert!(structure(&out).unwrap().mixing);
        assert_eq!(entropy(&out).unwrap(), entropy(&g).unwrap());
    }

    #[test]
    fn rejects_bad_specs() {
        let e = blow_up(&full2(), &BlowupSpec { orbit: word("00"), multipliers: vec![1] }).unwrap_err();
        assert!(matches!(e, Error::Precondition(_)));
        let e = blow_up(&full2(), &BlowupSpec { orbit: word("7"), multipliers: vec![1] }).unwrap_err();
        assert_eq!(e, Error::OrbitNotFound);
    }
}
