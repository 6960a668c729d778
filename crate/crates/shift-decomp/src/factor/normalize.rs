use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::codes::BlockMap;
use crate::error::{Error, Result};
use crate::graph::{Edge, Presentation, NONE};
use crate::shift::{higher_block, is_subshift_of, min_step, ShiftSpace};
use crate::symbols::{block_name, Alphabet, Symbol, Word};

/// A factor code put in the shape the α-iteration needs: X 1-step, φ
/// 1-block, Z a 1-step subshift whose symbols avoid the target alphabet,
/// and every X-transition between Z-symbols is a Z-transition.
#[derive(Clone, Debug)]
pub struct NormalizedTriple {
    /// The recoded domain X^[L] with renamed symbols.
    pub x: ShiftSpace,
    /// The recoded subshift Z^[L].
    pub z: ShiftSpace,
    /// 1-block code from `x` onto the original target.
    pub phi: BlockMap,
    /// Conjugacy from the original domain onto `x`.
    pub beta: BlockMap,
    /// Original L-block behind each symbol of `x`.
    pub renaming: BTreeMap<Symbol, Word>,
    pub block_length: usize,
    pub z_symbols: BTreeSet<Symbol>,
    pub y_symbols: BTreeSet<Symbol>,
}

impl NormalizedTriple {
    pub fn is_identity_renaming(&self) -> bool {
        self.block_length == 1 && self.renaming.iter().all(|(k, v)| v.len() == 1 && &v[0] == k)
    }

    /// The alphabet 𝒜_Z ∪ 𝒜_Y.
    pub fn joint_alphabet(&self) -> Alphabet {
        Alphabet::sorted(self.z_symbols.iter().chain(&self.y_symbols).cloned()).unwrap()
    }

    /// φ on a symbol of `x`.
    pub fn phi_of(&self, s: &str) -> String {
        self.phi.get(&[s.to_string()]).expect("symbol of the normalized domain").to_string()
    }
}

/// Renames the symbols of a shift through `f` (which must be injective).
pub(crate) fn rename_shift(x: &ShiftSpace, f: impl Fn(&str) -> String) -> Result<ShiftSpace> {
    let c = x.canon()?;
    let old = &c.ess.alphabet;
    let alpha = Alphabet::new(old.symbols().iter().map(|s| f(s)).collect())
        .map_err(|e| Error::Precondition(format!("renaming is not injective: {e}")))?;
    let sorted = Alphabet::sorted(alpha.symbols().iter().cloned())?;
    let p = c.ess.relabel(sorted.clone(), |l| sorted.index_of(&f(old.symbol(l))).unwrap());
    ShiftSpace::from_presentation(&p, (0..p.n_states).map(|i| format!("s{i}")).collect())
}

fn two_words(x: &ShiftSpace) -> Result<HashSet<Word>> {
    let c = x.canon()?;
    Ok(c.min.words(2).iter().map(|w| c.min.alphabet.decode(w)).collect())
}

fn one_symbols(x: &ShiftSpace) -> Result<BTreeSet<Symbol>> {
    let c = x.canon()?;
    Ok(c.ess.edges.iter().map(|e| c.ess.alphabet.symbol(e.label).to_string()).collect())
}

fn already_normal(x: &ShiftSpace, z: &ShiftSpace, phi: &BlockMap) -> Result<bool> {
    if phi.window() != 1 || min_step(x)?.map_or(true, |k| k > 1) || min_step(z)?.map_or(true, |k| k > 1) {
        return Ok(false);
    }
    let az = one_symbols(z)?;
    if az.iter().any(|s| phi.target().contains(s)) {
        return Ok(false);
    }
    let bz = two_words(z)?;
    Ok(two_words(x)?.iter().all(|w| !(az.contains(&w[0]) && az.contains(&w[1])) || bz.contains(w)))
}

/// Recodes (X, Z, φ) so that the normal-form conditions hold.
pub fn normalize(x: &ShiftSpace, z: &ShiftSpace, phi: &BlockMap) -> Result<NormalizedTriple> {
    if phi.domain() != x && !crate::shift::language_eq(phi.domain(), x)? {
        return Err(Error::Precondition("the code is not defined on the given domain".into()));
    }
    if !is_subshift_of(z, x)? {
        return Err(Error::Precondition("Z is not a subshift of X".into()));
    }
    let kx = min_step(x)?.ok_or_else(|| Error::Precondition("domain is not of finite type".into()))?;
    let kz = min_step(z)?.ok_or_else(|| Error::Precondition("Z is not of finite type".into()))?;
    let y_symbols: BTreeSet<Symbol> = phi.target().symbols().iter().cloned().collect();
    if already_normal(x, z, phi)? {
        let beta = BlockMap::identity(x.clone())?;
        let renaming = x.canon()?.min.alphabet.symbols().iter().map(|s| (s.clone(), vec![s.clone()])).collect();
        let z_symbols = one_symbols(z)?;
        let phi1 = BlockMap::from_fn_into(x.clone(), 0, 0, phi.target().clone(), |w| {
            phi.get(&[w[0].to_string()]).unwrap().to_string()
        })?;
        return Ok(NormalizedTriple {
            x: x.clone(),
            z: z.clone(),
            phi: phi1,
            beta,
            renaming,
            block_length: 1,
            z_symbols,
            y_symbols,
        });
    }
    let l = kx.max(kz + 1).max(phi.window()).max(1);
    let xl = higher_block(x, l)?;
    let xc = x.canon()?;
    let c = xl.canon()?;
    // Recover the underlying L-block of each block name.
    let blocks: BTreeMap<Symbol, Word> = xc
        .min
        .words(l)
        .into_iter()
        .map(|w| {
            let d = xc.min.alphabet.decode(&w);
            (block_name(&d), d)
        })
        .collect();
    let zset: HashSet<Word> = {
        let zc = z.canon()?;
        zc.min.words(l).iter().map(|w| zc.min.alphabet.decode(w)).collect()
    };
    let mut zp = String::from("z");
    let mut xp = String::from("x");
    let names = c.min.alphabet.symbols().to_vec();
    loop {
        let clash = names.iter().any(|b| {
            let n = if zset.contains(&blocks[b]) { format!("{zp}{b}") } else { format!("{xp}{b}") };
            y_symbols.contains(&n)
        });
        if !clash {
            break;
        }
        zp.push('z');
        xp.push('x');
    }
    let rename = |b: &str| -> String {
        if zset.contains(&blocks[b]) {
            format!("{zp}{b}")
        } else {
            format!("{xp}{b}")
        }
    };
    let xbar = rename_shift(&xl, rename)?;
    let zl = higher_block(z, l)?;
    let zbar = rename_shift(&zl, |b| format!("{zp}{b}"))?;
    let renaming: BTreeMap<Symbol, Word> = names.iter().map(|b| (rename(b), blocks[b].clone())).collect();
    let m = phi.memory();
    let beta = BlockMap::from_fn_into(x.clone(), m, l - 1 - m, xbar.alphabet(), |w| rename(&block_name(w)))?;
    let wlen = phi.window();
    let phi1 = BlockMap::from_fn_into(xbar.clone(), 0, 0, phi.target().clone(), |s| {
        phi.get(&renaming[s[0]][..wlen]).expect("window of the domain").to_string()
    })?;
    let z_symbols = one_symbols(&zbar)?;
    Ok(NormalizedTriple { x: xbar, z: zbar, phi: phi1, beta, renaming, block_length: l, z_symbols, y_symbols })
}

/// θ: Z-symbols are kept, every other symbol goes through φ.
pub fn build_theta(t: &NormalizedTriple) -> Result<BlockMap> {
    BlockMap::from_fn_into(t.x.clone(), 0, 0, t.joint_alphabet(), |s| {
        if t.z_symbols.contains(s[0]) {
            s[0].to_string()
        } else {
            t.phi_of(s[0])
        }
    })
}

/// α on the full shift over 𝒜_Z ∪ 𝒜_Y: a Z-symbol next to a Y-symbol is
/// replaced by its φ-image.
pub fn build_alpha(t: &NormalizedTriple) -> Result<BlockMap> {
    let a = t.joint_alphabet();
    let full = ShiftSpace::sft(a.clone(), vec![])?;
    BlockMap::from_fn_into(full, 1, 1, a, |w| {
        let c = w[1];
        if t.z_symbols.contains(c) && (t.y_symbols.contains(w[0]) || t.y_symbols.contains(w[2])) {
            t.phi_of(c)
        } else {
            c.to_string()
        }
    })
}

/// Ẑ_n: sequences over 𝒜_Z ∪ 𝒜_Y whose pure Y-segments lie in B(Y), pure
/// Z-segments in B(Z), and with no a w b (a, b ∈ 𝒜_Z, w ∈ 𝒜_Y^j, 1 ≤ j ≤ 2n).
pub fn hat_z(t: &NormalizedTriple, y: &ShiftSpace, n: usize) -> Result<ShiftSpace> {
    let alpha = t.joint_alphabet();
    let yc = y.canon()?;
    let dfa = &yc.min;
    let cap = 2 * n + 1;
    let zs: Vec<&Symbol> = t.z_symbols.iter().collect();
    let nz = zs.len();
    let ny = dfa.n;
    // States: 0..nz are "last symbol z"; then (q, c) for c in 1..=cap.
    let ystate = |q: u32, c: usize| (nz + q as usize * cap + (c - 1)) as u32;
    let n_states = nz + ny * cap;
    let z2 = two_words(&t.z)?;
    let mut edges = Vec::new();
    for (i, a) in zs.iter().enumerate() {
        for (j, b) in zs.iter().enumerate() {
            if z2.contains(&vec![(*a).clone(), (*b).clone()]) {
                edges.push(Edge { from: i as u32, to: j as u32, label: alpha.index_of(b).unwrap() });
            }
        }
        for ys in &t.y_symbols {
            if let Some(k) = dfa.alphabet.index_of(ys) {
                let q = dfa.step(dfa.init, k);
                if q != NONE {
                    edges.push(Edge { from: i as u32, to: ystate(q, 1), label: alpha.index_of(ys).unwrap() });
                }
            }
        }
    }
    for q in 0..ny as u32 {
        for c in 1..=cap {
            for ys in &t.y_symbols {
                if let Some(k) = dfa.alphabet.index_of(ys) {
                    let r = dfa.step(q, k);
                    if r != NONE {
                        edges.push(Edge { from: ystate(q, c), to: ystate(r, (c + 1).min(cap)), label: alpha.index_of(ys).unwrap() });
                    }
                }
            }
            if c == cap {
                for (j, b) in zs.iter().enumerate() {
                    edges.push(Edge { from: ystate(q, c), to: j as u32, label: alpha.index_of(b).unwrap() });
                }
            }
        }
    }
    let p = Presentation::new(alpha, n_states, edges);
    ShiftSpace::from_presentation(&p, (0..n_states).map(|i| format!("s{i}")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::entropy;
    use crate::symbols::word;

    fn fixture() -> (ShiftSpace, ShiftSpace, BlockMap) {
        let x = ShiftSpace::edge_shift(vec![vec![2]]).unwrap();
        let z = ShiftSpace::sft(Alphabet::new(vec!["0".into(), "1".into()]).unwrap(), vec![word("11")]).unwrap();
        let phi = BlockMap::from_fn(x.clone(), 0, 0, |_| "y".into()).unwrap();
        (x, z, phi)
    }

    #[test]
    fn fixture_is_recoded() {
        let (x, z, phi) = fixture();
        let t = normalize(&x, &z, &phi).unwrap();
        assert_eq!(t.block_length, 2);
        assert_eq!(t.z_symbols.iter().cloned().collect::<Vec<_>>(), vec!["z00", "z01", "z10"]);
        assert_eq!(t.renaming["x11"], word("11"));
        let theta = build_theta(&t).unwrap();
        assert_eq!(theta.get(&["z01".to_string()]), Some("z01"));
        assert_eq!(theta.get(&["x11".to_string()]), Some("y"));
        let alpha = build_alpha(&t).unwrap();
        let w = |s: &[&str]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        assert_eq!(alpha.get(&w(&["y", "z00", "z01"])), Some("y"));
        assert_eq!(alpha.get(&w(&["z00", "z01", "z10"])), Some("z01"));
        assert_eq!(alpha.get(&w(&["y", "y", "y"])), Some("y"));
    }

    #[test]
    fn normalized_input_is_kept() {
        let x = ShiftSpace::sft(Alphabet::new(vec!["a".into(), "b".into()]).unwrap(), vec![]).unwrap();
        let z = ShiftSpace::sft(Alphabet::new(vec!["a".into(), "b".into()]).unwrap(), vec![word("b")]).unwrap();
        let phi = BlockMap::from_fn(x.clone(), 0, 0, |_| "y".into()).unwrap();
        let t = normalize(&x, &z, &phi).unwrap();
        assert!(t.is_identity_renaming());
    }

    #[test]
    fn hat_z_decreases() {
        let (x, z, phi) = fixture();
        let t = normalize(&x, &z, &phi).unwrap();
        let y = ShiftSpace::edge_shift(vec![vec![1]]).unwrap();
        let y = rename_shift(&y, |_| "y".into()).unwrap();
        let hz = entropy(&z).unwrap();
        let mut prev = entropy(&hat_z(&t, &y, 0).unwrap()).unwrap();
        for n in 1..6 {
            let h = entropy(&hat_z(&t, &y, n).unwrap()).unwrap();
            assert!(h.cmp_exact(&prev).is_le());
            assert!(h.cmp_exact(&hz).is_ge());
            prev = h;
        }
    }
}
