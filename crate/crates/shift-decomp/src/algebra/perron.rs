//! Perron and weak Perron decisions.
//!
//! Let C be the companion matrix of the minimal polynomial of λ. The roots
//! of M = charpoly(C ⊗ C) are all products λ_i λ_j of conjugates, so |μ|²
//! is a real root of M for every conjugate μ. Hence λ is Perron iff no real
//! root of M exceeds λ² and λ² is a simple root of M.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::census::mobius;
use super::modular::char_poly;
use super::poly::IntPoly;
use super::real::{companion, power_poly, AlgebraicReal};
use crate::error::{Error, Result};

/// Largest minimal-polynomial degree handled by the exact decision.
pub const DEGREE_BUDGET: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleData {
    /// Some conjugate has modulus larger than λ.
    pub outside: bool,
    /// Number of conjugates (λ included) with modulus exactly λ.
    pub on_circle: usize,
}

fn kron(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let d = a.len();
    let mut m = vec![vec![BigInt::zero(); d * d]; d * d];
    for i in 0..d {
        for j in 0..d {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..d {
                for l in 0..d {
                    m[i * d + k][j * d + l] = &a[i][j] * &a[k][l];
                }
            }
        }
    }
    m
}

/// Multiplicity of `f` as a factor of `p`.
fn multiplicity(p: &IntPoly, f: &IntPoly) -> usize {
    let mut q = p.clone();
    let mut m = 0;
    while let Some(r) = q.div_exact(f) {
        q = r;
        m += 1;
    }
    m
}

fn check_input(x: &AlgebraicReal) -> Result<()> {
    if !x.is_algebraic_integer() {
        return Err(Error::NotAlgebraicInteger);
    }
    if x.degree() > DEGREE_BUDGET {
        return Err(Error::Budget(format!(
            "minimal polynomial of degree {} exceeds the exact Perron budget {DEGREE_BUDGET}",
            x.degree()
        )));
    }
    Ok(())
}

/// Where the conjugates of λ sit relative to the circle of radius λ.
pub fn circle_data(x: &AlgebraicReal) -> Result<CircleData> {
    let x = &x.minimal();
    check_input(x)?;
    if x.degree() == 1 {
        return Ok(CircleData { outside: false, on_circle: 1 });
    }
    let c = companion(x.poly());
    let m = char_poly(&kron(&c));
    let sq = x.pow(2);
    let on_circle = multiplicity(&m, sq.poly());
    // Isolate λ² among the real roots of sqfree(M), then look above it.
    let sf = m.square_free();
    let sturm = sf.sturm();
    let mut s = sq.clone();
    let w = BigRational::new(1.into(), 1024.into());
    s.refine_to(&w);
    loop {
        let (lo, hi) = s.interval();
        let lo = lo.clone();
        let hi = hi.clone();
        if lo == hi || (sf.sign_at(&lo) != 0 && sf.sign_at(&hi) != 0 && sturm.count(&lo, &hi) == 1) {
            let top = sf.cauchy_bound();
            let above = sturm.count(&hi, &top);
            return Ok(CircleData { outside: above > 0, on_circle });
        }
        let width = &hi - &lo;
        s.refine_to(&(width / BigRational::from_integer(2.into())));
    }
}

pub fn is_perron(x: &AlgebraicReal) -> Result<bool> {
    let x = &x.minimal();
    if !x.is_algebraic_integer() {
        return Err(Error::NotAlgebraicInteger);
    }
    if x.cmp_rational(&BigRational::from_integer(1.into())) == std::cmp::Ordering::Less {
        return Ok(false);
    }
    let d = circle_data(x)?;
    Ok(!d.outside && d.on_circle == 1)
}

fn euler_phi(mut n: u64) -> u64 {
    let mut r = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

/// Orders k with φ(k) ≤ bound (a divisor-closed set).
pub fn small_orders(bound: u64) -> Vec<u64> {
    // φ(k) ≥ sqrt(k/2), so k ≤ 2·bound² suffices.
    let lim = 2 * bound * bound + 2;
    (1..=lim).filter(|&k| euler_phi(k) <= bound).collect()
}

pub fn lcm_u128(a: u128, b: u128) -> u128 {
    let g = num_integer::gcd(a, b);
    a / g * b
}

/// P_max = lcm{k : φ(k) ≤ d²}.
pub fn p_max(d: usize) -> BigInt {
    small_orders((d * d) as u64).into_iter().fold(BigInt::from(1), |acc, k| num_integer::lcm(acc, BigInt::from(k)))
}

/// Number of conjugates μ with μ^p = λ^p.
fn mult_at(x: &AlgebraicReal, p: u64) -> usize {
    if p == 1 {
        return 1;
    }
    let q = power_poly(x.poly(), p as u32).square_free();
    x.degree() / q.degree()
}

/// Smallest p ≤ P_max with λ^p Perron, or `None`.
///
/// For each order k with φ(k) ≤ d², N(k) = Σ_{j|k} μ(k/j)·mult(j) counts
/// the conjugates λζ with ζ a primitive k-th root of unity. λ is weak
/// Perron iff nothing lies outside the circle and these account for every
/// conjugate on it; the least exponent is the lcm of the orders present.
pub fn is_weak_perron(x: &AlgebraicReal) -> Result<Option<u64>> {
    let x = &x.minimal();
    check_input(x)?;
    if x.cmp_rational(&BigRational::from_integer(1.into())) == std::cmp::Ordering::Less {
        return Ok(None);
    }
    let cd = circle_data(x)?;
    if cd.outside {
        return Ok(None);
    }
    if cd.on_circle == 1 {
        return Ok(Some(1));
    }
    let d = x.degree() as u64;
    let orders = small_orders(d * d);
    let mut mult = std::collections::HashMap::new();
    let mut found = 0usize;
    let mut l: u128 = 1;
    for &k in &orders {
        let divs: Vec<u64> = (1..=k).filter(|j| k % j == 0).collect();
        for &j in &divs {
            mult.entry(j).or_insert_with(|| mult_at(x, j));
        }
        let n: i64 = divs.iter().map(|&j| mobius((k / j) as usize) as i64 * mult[&j] as i64).sum();
        if n > 0 {
            found += n as usize;
            l = lcm_u128(l, k as u128);
        }
        if found == cd.on_circle {
            return Ok(Some(l as u64));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn root(c: &[i64]) -> AlgebraicReal {
        AlgebraicReal::largest_root(&IntPoly::from_i64(c)).unwrap()
    }

    #[test]
    fn perron_examples() {
        assert!(is_perron(&AlgebraicReal::from_int(2)).unwrap());
        assert!(is_perron(&root(&[-1, -1, 1])).unwrap());
        assert!(is_perron(&root(&[1, -3, 1])).unwrap());
        assert!(!is_perron(&root(&[-2, 0, 1])).unwrap());
    }

    #[test]
    fn weak_perron_examples() {
        assert_eq!(is_weak_perron(&root(&[-2, 0, 1])).unwrap(), Some(2));
        assert_eq!(is_weak_perron(&AlgebraicReal::from_int(2)).unwrap(), Some(1));
        assert_eq!(is_weak_perron(&root(&[-1, -1, 1])).unwrap(), Some(1));
        // x^6 − 2: conjugates 2^{1/6}·ζ_6^j, six on the circle.
        assert_eq!(is_weak_perron(&root(&[-2, 0, 0, 0, 0, 0, 1])).unwrap(), Some(6));
    }

    #[test]
    fn non_integer_rejected() {
        let half = AlgebraicReal::largest_root(&IntPoly::from_i64(&[-3, 2])).unwrap();
        assert_eq!(is_perron(&half).unwrap_err(), Error::NotAlgebraicInteger);
    }

    #[test]
    fn p_max_small() {
        assert_eq!(p_max(1), BigInt::from(2));
        assert_eq!(p_max(2), BigInt::from(120));
    }
}
