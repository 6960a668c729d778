//! A horizon beyond which q_k(X) ≤ q_k(Y) holds for every k.
//!
//! Upper side: q_k(X) ≤ |B_k(X)| ≤ 1ᵀA^k 1 ≤ C·r^k for a rational
//! r > λ_X, where v = (rI − A)^{-1} 1 and C = Σv / min v.
//! Lower side: q_k(Y) ≥ tr(B^k) − Σ_{d ≤ k/2} tr(B^d) and
//! λ^k − (D−1)ρ^k ≤ tr(B^k) ≤ λ^k + (D−1)ρ^k, with ρ a certified bound on
//! the moduli of the non-dominant eigenvalues (Graeffe squaring followed by
//! a Fujiwara bound on the deflated polynomial).

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::entropy::entropy;
use super::modular::char_poly;
use super::poly::IntPoly;
use super::real::ratio_to_f64;
use crate::error::{Error, Result};
use crate::shift::{structure, ShiftSpace};

#[derive(Clone, Debug)]
pub struct Crossover {
    /// q_k(X) ≤ q_k(Y) for every k > k_star.
    pub k_star: usize,
    pub r: BigRational,
    pub c_x: BigRational,
    pub rho: BigRational,
    pub dim_y: usize,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Solves M v = b over the rationals; `None` if M is singular.
pub fn solve(mut m: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        b.swap(col, piv);
        let p = m[col][col].clone();
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
            let t = &f * &b[col];
            b[r] -= t;
        }
    }
    Some((0..n).map(|i| &b[i] / &m[i][i]).collect())
}

/// Smallest dyadic-ish rational u with u^k ≥ x (x ≥ 0).
fn root_upper(x: &BigRational, k: u32) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let mut lo = BigRational::zero();
    let mut hi = BigRational::one().max(x.clone());
    let eps = rat(1, 1 << 24);
    while &hi - &lo > &eps * &hi {
        let mid = (&lo + &hi) / int(2);
        let mid = BigRational::new((&mid * int(1 << 30)).ceil().to_integer(), BigInt::from(1u64 << 30));
        if num_traits::pow(mid.clone(), k as usize) >= *x {
            if mid >= hi {
                break;
            }
            hi = mid;
        } else {
            if mid <= lo {
                break;
            }
            lo = mid;
        }
    }
    hi
}

/// One Graeffe step: roots are squared.
fn graeffe(f: &IntPoly) -> IntPoly {
    let prod = f.mul(&f.reflect());
    let d = f.degree();
    let c: Vec<BigInt> = (0..=d).map(|i| prod.coeff(2 * i)).collect();
    let g = IntPoly::new(c);
    if d % 2 == 1 {
        g.neg()
    } else {
        g
    }
}

fn imul(a: &(BigRational, BigRational), b: &(BigRational, BigRational)) -> (BigRational, BigRational) {
    let p = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let lo = p.iter().min().unwrap().clone();
    let hi = p.iter().max().unwrap().clone();
    (lo, hi)
}

/// Certified bound on |μ| for every eigenvalue μ other than the simple
/// dominant root, given the characteristic polynomial and a λ enclosure.
fn second_modulus_bound(chi: &IntPoly, lam: &super::real::AlgebraicReal) -> Option<BigRational> {
    let d = chi.degree();
    if d <= 1 {
        return Some(BigRational::zero());
    }
    let mut best: Option<BigRational> = None;
    let mut g = chi.clone();
    for j in 0..7u32 {
        if j > 0 {
            g = graeffe(&g);
        }
        let pw = 1usize << j;
        let bits = g.coeffs().iter().map(|c| c.bits()).max().unwrap_or(0);
        if bits > 200_000 {
            break;
        }
        // Λ = λ^(2^j) enclosed tightly enough for the deflation.
        let w = BigRational::new(BigInt::one(), BigInt::one() << (64 + 4 * bits as usize / pw.max(1) + 8 * d));
        let (llo, lhi) = lam.enclosure(&w);
        let big_l = (num_traits::pow(llo, pw), num_traits::pow(lhi, pw));
        // Synthetic division of g by (x − Λ) with interval coefficients.
        let mut q: Vec<(BigRational, BigRational)> = vec![(BigRational::zero(), BigRational::zero()); d];
        let lead = BigRational::from_integer(g.coeff(d));
        q[d - 1] = (lead.clone(), lead);
        for i in (1..d).rev() {
            let a = BigRational::from_integer(g.coeff(i));
            let m = imul(&big_l, &q[i]);
            q[i - 1] = (&a + &m.0, &a + &m.1);
        }
        let lead = q[d - 1].0.abs();
        // Fujiwara: |z| ≤ 2·max_i |q_{d−1−i}/lead|^{1/i}, the last term halved.
        let mut m = BigRational::zero();
        for i in 1..d {
            let c = &q[d - 1 - i];
            let mut a = c.0.abs().max(c.1.abs()) / &lead;
            if i == d - 1 {
                a /= int(2);
            }
            let u = root_upper(&a, i as u32);
            if u > m {
                m = u;
            }
        }
        let bound = m * int(2);
        let rho = root_upper(&bound, pw as u32);
        let better = match &best {
            None => true,
            Some(b) => rho < *b,
        };
        if better {
            best = Some(rho);
        }
    }
    best
}

fn adjacency_rational(a: &[Vec<u64>]) -> Vec<Vec<BigRational>> {
    a.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect()
}

/// Certified crossover horizon for q_k(X) ≤ q_k(Y).
pub fn crossover(x: &ShiftSpace, y: &ShiftSpace) -> Result<Crossover> {
    let hx = entropy(x)?;
    let hy = entropy(y)?;
    if hx.cmp_exact(&hy) != Ordering::Less {
        return Err(Error::EntropyNotSeparated);
    }
    let sy = structure(y)?;
    if !y.is_finite_type_form() || !sy.mixing {
        return Err(Error::NotMixingTarget);
    }
    let mut lx = hx.base.clone();
    let mut ly = hy.base.clone();
    while lx.interval().1 >= ly.interval().0 {
        lx.refine();
        ly.refine();
    }
    let w = rat(1, 1 << 40);
    let (ly_lo, ly_hi) = ly.enclosure(&w);
    let lx_hi = lx.enclosure(&w).1;

    let cx = x.canon()?;
    let all: Vec<u32> = (0..cx.ess.n_states as u32).collect();
    let a = cx.ess.adjacency(&all);
    let ay = y.path_graph()?;
    let ally: Vec<u32> = (0..ay.pres.n_states as u32).collect();
    let by = ay.pres.adjacency(&ally);
    let chi = char_poly(&by.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect::<Vec<_>>());
    let dim_y = chi.degree();
    let rho = second_modulus_bound(&chi, &hy.base).unwrap_or_else(|| ly_hi.clone());
    if rho >= ly_lo {
        return Err(Error::Budget("no certified spectral gap for the target shift".into()));
    }
    // Try a few splitting points r and keep the smallest horizon.
    let mut best: Option<Crossover> = None;
    for t in [rat(1, 4), rat(1, 2), rat(3, 4)] {
        let r = &lx_hi + (&ly_lo - &lx_hi) * t;
        let n = a.len();
        let mut m = adjacency_rational(&a);
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = -v.clone();
                if i == j {
                    *v += &r;
                }
            }
        }
        let v = solve(m, vec![BigRational::one(); n]).ok_or_else(|| Error::Precondition("singular resolvent".into()))?;
        let minv = v.iter().min().unwrap().clone();
        let c = v.iter().fold(BigRational::zero(), |s, t| s + t) / minv;
        let k = first_good_k(&c, &r, &ly_lo, &ly_hi, &rho, dim_y)?;
        let cand = Crossover { k_star: k - 1, r: r.clone(), c_x: c, rho: rho.clone(), dim_y };
        if best.as_ref().map_or(true, |b| cand.k_star < b.k_star) {
            best = Some(cand);
        }
    }
    Ok(best.unwrap())
}

/// First k with g(k) ≤ 1, where g is the decreasing majorant described in the module docs.
fn first_good_k(
    c: &BigRational,
    r: &BigRational,
    l_lo: &BigRational,
    l_hi: &BigRational,
    rho: &BigRational,
    dim: usize,
) -> Result<usize> {
    let rho1 = rho.clone().max(rat(17, 16));
    let s_l = root_upper(l_hi, 2);
    let s_r = root_upper(&rho1, 2);
    let dm1 = int(dim.saturating_sub(1));
    let g = |k: usize| -> BigRational {
        let kk = k as usize;
        let lk = num_traits::pow(l_lo.clone(), kk);
        let t1 = c * num_traits::pow(r.clone(), kk);
        let t2 = &dm1 * num_traits::pow(rho.clone(), kk);
        let t3 = l_hi * num_traits::pow(s_l.clone(), kk) / (l_hi - BigRational::one());
        let t4 = &dm1 * &rho1 * num_traits::pow(s_r.clone(), kk) / (&rho1 - BigRational::one());
        (t1 + t2 + t3 + t4) / lk
    };
    let gf = |k: usize| -> f64 {
        let lr = ratio_to_f64(l_lo).ln();
        let f = |x: &BigRational| ratio_to_f64(x);
        let kf = k as f64;
        let e = |base: f64| (kf * (base.ln() - lr)).exp();
        f(c) * e(f(r)) + f(&dm1) * e(f(rho)) + f(l_hi) / (f(l_hi) - 1.0) * e(f(&s_l)) + f(&dm1) * f(&rho1) / (f(&rho1) - 1.0) * e(f(&s_r))
    };
    let mut k = 1usize;
    while gf(k) > 0.999 {
        k += 1;
        if k > 100_000 {
            return Err(Error::Budget("crossover horizon exceeds 100000".into()));
        }
    }
    k = k.saturating_sub(2).max(1);
    while g(k) > BigRational::one() {
        k += 1;
    }
    let _ = l_lo.to_f64();
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{word, Alphabet};

    #[test]
    fn golden_into_full_two() {
        let g = ShiftSpace::sft(Alphabet::new(vec!["0".into(), "1".into()]).unwrap(), vec![word("11")]).unwrap();
        let f = ShiftSpace::edge_shift(vec![vec![2]]).unwrap();
        let c = crossover(&g, &f).unwrap();
        assert!(c.k_star <= 30, "{c:?}");
        assert_eq!(crossover(&f, &f).unwrap_err(), Error::EntropyNotSeparated);
    }

    #[test]
    fn graeffe_squares_roots() {
        // (x − 2)(x + 3) → (x − 4)(x − 9)
        let f = IntPoly::from_i64(&[-6, 1, 1]);
        assert_eq!(graeffe(&f), IntPoly::from_i64(&[36, -13, 1]));
    }
}
