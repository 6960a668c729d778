//! Characteristic polynomials by Hessenberg reduction modulo word-size
//! primes, recombined with the Chinese remainder theorem.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::IntPoly;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes below 2^61, largest first.
pub fn primes() -> impl Iterator<Item = u64> {
    let mut n: u64 = (1 << 61) - 1;
    std::iter::from_fn(move || {
        while !is_prime_u64(n) {
            n -= 2;
        }
        let p = n;
        n -= 2;
        Some(p)
    })
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let mut r = x % &pb;
    if r.is_negative() {
        r += &pb;
    }
    r.to_u64().unwrap()
}

/// Characteristic polynomial of `a` modulo `p`, ascending coefficients.
pub fn char_poly_mod(a: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut h: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    for m in 1..n.saturating_sub(1) {
        let piv = (m..n).find(|&i| h[i][m - 1] != 0);
        let Some(i) = piv else { continue };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let inv = inv_mod(h[m][m - 1], p);
        for i in m + 1..n {
            if h[i][m - 1] == 0 {
                continue;
            }
            let u = mul_mod(h[i][m - 1], inv, p);
            for j in 0..n {
                let t = mul_mod(u, h[m][j], p);
                h[i][j] = (h[i][j] + p - t) % p;
            }
            for row in h.iter_mut() {
                let t = mul_mod(u, row[i], p);
                row[m] = (row[m] + t) % p;
            }
        }
    }
    // p_{k+1} = (x − h_kk) p_k − Σ_{i<k} h_ik (Π_{j=i+1..k} h_{j,j−1}) p_i
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        let pk = &polys[k];
        let mut next = vec![0u64; k + 2];
        for (d, &c) in pk.iter().enumerate() {
            next[d + 1] = (next[d + 1] + c) % p;
            let t = mul_mod(c, h[k][k], p);
            next[d] = (next[d] + p - t) % p;
        }
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = mul_mod(prod, h[i + 1][i], p);
            if prod == 0 {
                break;
            }
            let coef = mul_mod(h[i][k], prod, p);
            if coef == 0 {
                continue;
            }
            for (d, &c) in polys[i].iter().enumerate() {
                let t = mul_mod(coef, c, p);
                next[d] = (next[d] + p - t) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// Exact characteristic polynomial det(xI − A) of an integer matrix.
pub fn char_poly(a: &[Vec<BigInt>]) -> IntPoly {
    let n = a.len();
    if n == 0 {
        return IntPoly::one();
    }
    // |coefficients| ≤ Π (1 + row abs sum).
    let mut bound = BigUint::one();
    for row in a {
        let s: BigInt = row.iter().map(|x| x.abs()).sum();
        bound *= s.to_biguint().unwrap() + 1u32;
    }
    let need = bound * 2u32 + 1u32;
    let mut modulus = BigUint::one();
    let mut acc: Vec<BigUint> = vec![BigUint::zero(); n + 1];
    for p in primes() {
        let am: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|x| reduce(x, p)).collect()).collect();
        let c = char_poly_mod(&am, p);
        // CRT: x ≡ acc (mod modulus), x ≡ c (mod p).
        let m_mod_p = (&modulus % p).to_u64().unwrap();
        let inv = inv_mod(m_mod_p, p);
        for (i, ci) in c.iter().enumerate() {
            let cur = (&acc[i] % p).to_u64().unwrap();
            let diff = (ci + p - cur) % p;
            let t = mul_mod(diff, inv, p);
            acc[i] = &acc[i] + &modulus * t;
        }
        modulus *= p;
        if modulus >= need {
            break;
        }
    }
    let half = &modulus >> 1;
    let coeffs = acc
        .into_iter()
        .map(|x| {
            if x > half {
                BigInt::from(x) - BigInt::from(modulus.clone())
            } else {
                BigInt::from(x)
            }
        })
        .collect();
    IntPoly::new(coeffs)
}

pub fn char_poly_u64(a: &[Vec<u64>]) -> IntPoly {
    let b: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    char_poly(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        assert_eq!(char_poly_u64(&[vec![2]]), IntPoly::from_i64(&[-2, 1]));
        assert_eq!(char_poly_u64(&[vec![1, 1], vec![1, 0]]), IntPoly::from_i64(&[-1, -1, 1]));
        assert_eq!(char_poly_u64(&[vec![0, 2], vec![2, 0]]), IntPoly::from_i64(&[-4, 0, 1]));
    }

    #[test]
    fn negative_entries() {
        let a = vec![vec![BigInt::from(0), BigInt::from(-1)], vec![BigInt::from(1), BigInt::from(0)]];
        assert_eq!(char_poly(&a), IntPoly::from_i64(&[1, 0, 1]));
    }

    #[test]
    fn primes_are_prime() {
        let v: Vec<u64> = primes().take(3).collect();
        assert_eq!(v[0], (1 << 61) - 1);
        assert!(v.iter().all(|&p| is_prime_u64(p)));
    }
}
