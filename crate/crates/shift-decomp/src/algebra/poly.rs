//! Integer polynomials, Sturm sequences and real root isolation.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Integer polynomial, coefficients in ascending degree order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    c: Vec<BigInt>,
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly{:?}", self.c.iter().map(|x| x.to_string()).collect::<Vec<_>>())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl IntPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        IntPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        IntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::from_i64(&[1])
    }

    /// x − r for an integer r.
    pub fn linear(r: &BigInt) -> Self {
        IntPoly::new(vec![-r.clone(), BigInt::one()])
    }

    /// Primitive linear polynomial q·x − p with root p/q.
    pub fn rational_root(r: &BigRational) -> Self {
        IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]).primitive()
    }

    pub fn monomial(d: usize) -> Self {
        let mut c = vec![BigInt::zero(); d + 1];
        c[d] = BigInt::one();
        IntPoly { c }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_default()
    }

    pub fn lead(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn content(&self) -> BigInt {
        self.c.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Divided by its content, with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        IntPoly { c: self.c.iter().map(|x| x / &g).collect() }
    }

    pub fn neg(&self) -> Self {
        IntPoly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntPoly::new(self.c.iter().map(|x| x * k).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPoly::new(c)
    }

    pub fn derivative(&self) -> Self {
        IntPoly::new(self.c.iter().enumerate().skip(1).map(|(i, x)| x * BigInt::from(i)).collect())
    }

    /// p(x^k).
    pub fn inflate(&self, k: usize) -> Self {
        let mut c = vec![BigInt::zero(); self.degree() * k + 1];
        for (i, x) in self.c.iter().enumerate() {
            c[i * k] = x.clone();
        }
        IntPoly::new(c)
    }

    /// p(−x).
    pub fn reflect(&self) -> Self {
        IntPoly::new(self.c.iter().enumerate().map(|(i, x)| if i % 2 == 1 { -x } else { x.clone() }).collect())
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.c.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.c.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// Sign of p(r), computed without building the rational value.
    pub fn sign_at(&self, r: &BigRational) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let (p, q) = (r.numer(), r.denom());
        let d = self.degree();
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        // Horner on the homogenized form Σ c_i p^i q^(d−i).
        let mut terms = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            terms.push(qpow.clone());
            qpow *= q;
        }
        for (i, c) in self.c.iter().enumerate().rev() {
            acc = acc * p + c * &terms[d - i];
        }
        match acc.sign() {
            Sign::Plus => 1,
            Sign::Minus => -1,
            Sign::NoSign => 0,
        }
    }

    /// Sign variations in the coefficients of p(t + x); by Descartes an
    /// upper bound on the roots above x, exact when it is 0 or 1.
    pub fn taylor_variations(&self, x: &BigRational) -> usize {
        let d = self.degree();
        let (a, b) = (x.numer(), x.denom());
        // b^d·p((s + a)/b) has the same sign pattern and integer coefficients.
        let mut q: Vec<BigInt> = Vec::with_capacity(d + 1);
        let mut bp = BigInt::one();
        for i in (0..=d).rev() {
            q.push(&self.c[i] * &bp);
            bp *= b;
        }
        q.reverse();
        for i in 0..d {
            for j in (i..d).rev() {
                let t = &q[j + 1] * a;
                q[j] += t;
            }
        }
        let signs: Vec<Sign> = q.iter().map(|c| c.sign()).filter(|s| *s != Sign::NoSign).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Pseudo-remainder `lc(g)^(deg f − deg g + 1) · f mod g`.
    pub fn pseudo_rem(&self, g: &Self) -> Self {
        assert!(!g.is_zero());
        let mut r = self.c.clone();
        let dg = g.degree();
        let lg = g.lead();
        let mut steps = (self.degree() + 1).saturating_sub(dg);
        while r.len() > dg && !r.is_empty() {
            steps -= 1;
            let lr = r.last().unwrap().clone();
            let shift = r.len() - 1 - dg;
            for x in r.iter_mut() {
                *x *= &lg;
            }
            for (i, gc) in g.c.iter().enumerate() {
                r[i + shift] -= &lr * gc;
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        let k = num_traits::pow(lg, steps);
        IntPoly::new(r).scale(&k)
    }

    /// Exact quotient over the integers, `None` if `g` does not divide.
    pub fn div_exact(&self, g: &Self) -> Option<Self> {
        assert!(!g.is_zero());
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.degree() < g.degree() {
            return None;
        }
        let mut r = self.c.clone();
        let dg = g.degree();
        let lg = g.lead();
        let mut q = vec![BigInt::zero(); self.degree() - dg + 1];
        for k in (0..q.len()).rev() {
            let top = r[k + dg].clone();
            if top.is_zero() {
                continue;
            }
            let (qq, rem) = top.div_rem(&lg);
            if !rem.is_zero() {
                return None;
            }
            for (i, gc) in g.c.iter().enumerate() {
                r[k + i] -= &qq * gc;
            }
            q[k] = qq;
        }
        if r.iter().all(|x| x.is_zero()) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, g: &Self) -> Self {
        let mut a = self.primitive();
        let mut b = g.primitive();
        if a.degree() < b.degree() || (a.is_zero() && !b.is_zero()) {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    pub fn square_free(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            self.primitive()
        } else {
            self.div_exact(&g).map(|q| q.primitive()).unwrap_or_else(|| self.primitive())
        }
    }

    /// Irreducible factors over the rationals with multiplicities, each
    /// primitive with positive leading coefficient. Constants are dropped.
    pub fn factor(&self) -> Vec<(IntPoly, usize)> {
        use algebraics::polynomial::Polynomial;
        if self.degree() == 0 {
            return Vec::new();
        }
        let p = Polynomial::<BigInt>::from(self.c.clone());
        let f = p.factor();
        let mut out: Vec<(IntPoly, usize)> = f
            .polynomial_factors
            .into_iter()
            .map(|pf| (IntPoly::new(pf.polynomial.into_coefficients()).primitive(), pf.power))
            .filter(|(q, _)| q.degree() > 0)
            .collect();
        out.sort_by(|a, b| (a.0.degree(), &a.0.c).cmp(&(b.0.degree(), &b.0.c)));
        out
    }

    /// Strict bound on the absolute value of every root.
    pub fn cauchy_bound(&self) -> BigRational {
        let l = self.lead().abs();
        let m = self.c[..self.c.len() - 1].iter().map(|x| x.abs()).max().unwrap_or_default();
        BigRational::one() + BigRational::new(m, l)
    }

    pub fn sturm(&self) -> Sturm {
        Sturm::new(self)
    }

    /// Isolating intervals for all real roots in increasing order.
    ///
    /// Each interval is either a point `[r, r]` with `p(r) = 0` or an open
    /// interval `(lo, hi)` containing exactly one root with `p(lo), p(hi) ≠ 0`.
    pub fn real_roots(&self) -> Vec<(BigRational, BigRational)> {
        let p = self.square_free();
        if p.degree() == 0 {
            return Vec::new();
        }
        let s = p.sturm();
        let b = p.cauchy_bound();
        let mut out = Vec::new();
        let lo = -b.clone();
        let total = s.variations(&lo) - s.variations(&b);
        isolate(&p, &s, lo, b, total, &mut out);
        out
    }

    /// Isolating interval of the largest real root, if any.
    pub fn largest_real_root(&self) -> Option<(BigRational, BigRational)> {
        let p = self.square_free();
        if p.degree() == 0 {
            return None;
        }
        let s = p.sturm();
        let mut hi = p.cauchy_bound();
        let lo0 = -hi.clone();
        if s.variations(&lo0) == s.variations(&hi) {
            return None;
        }
        // Keep the upper half whenever it still holds a root; `hi` is never a root.
        let mut lo = lo0;
        loop {
            if s.count(&lo, &hi) == 1 && p.sign_at(&lo) != 0 {
                return Some((lo, hi));
            }
            let mid = (&lo + &hi) / BigRational::from_integer(2.into());
            if s.count(&mid, &hi) > 0 {
                lo = mid;
            } else if p.sign_at(&mid) == 0 {
                return Some((mid.clone(), mid));
            } else {
                hi = mid;
            }
        }
    }
}

fn isolate(p: &IntPoly, s: &Sturm, lo: BigRational, hi: BigRational, count: i64, out: &mut Vec<(BigRational, BigRational)>) {
    // Invariant: `count` roots in the open interval (lo, hi), p(lo), p(hi) ≠ 0.
    if count == 0 {
        return;
    }
    if count == 1 {
        out.push((lo, hi));
        return;
    }
    let mid = (&lo + &hi) / BigRational::from_integer(2.into());
    let vm = s.variations(&mid);
    let left = s.variations(&lo) - vm;
    if p.sign_at(&mid) == 0 {
        isolate(p, s, lo, mid.clone(), left - 1, out);
        out.push((mid.clone(), mid.clone()));
        isolate(p, s, mid, hi, count - left, out);
    } else {
        isolate(p, s, lo, mid.clone(), left, out);
        isolate(p, s, mid, hi, count - left, out);
    }
}

/// Sturm sequence of a square-free polynomial.
#[derive(Clone, Debug)]
pub struct Sturm {
    seq: Vec<IntPoly>,
}

impl Sturm {
    pub fn new(p: &IntPoly) -> Self {
        let mut seq = vec![p.clone(), p.derivative()];
        loop {
            let n = seq.len();
            let (a, b) = (&seq[n - 2], &seq[n - 1]);
            if b.is_zero() || b.degree() == 0 {
                break;
            }
            let delta = a.degree() - b.degree() + 1;
            let mut r = a.pseudo_rem(b);
            // prem multiplies by lc(b)^delta; undo its sign, then negate.
            if b.lead().is_negative() && delta % 2 == 1 {
                r = r.neg();
            }
            r = r.neg();
            if r.is_zero() {
                break;
            }
            let g = r.content();
            r = IntPoly { c: r.c.iter().map(|x| x / &g).collect() };
            seq.push(r);
        }
        if seq.last().is_some_and(|x| x.is_zero()) {
            seq.pop();
        }
        Sturm { seq }
    }

    pub fn variations(&self, x: &BigRational) -> i64 {
        let mut last = 0;
        let mut v = 0;
        for p in &self.seq {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Number of distinct roots in the half-open interval (a, b].
    pub fn count(&self, a: &BigRational, b: &BigRational) -> i64 {
        self.variations(a) - self.variations(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gcd_and_division() {
        let a = IntPoly::from_i64(&[-1, 0, 1]);
        let b = IntPoly::from_i64(&[1, 1]);
        assert_eq!(a.gcd(&b), b);
        assert_eq!(a.div_exact(&b).unwrap(), IntPoly::from_i64(&[-1, 1]));
        assert!(a.div_exact(&IntPoly::from_i64(&[2, 1])).is_none());
    }

    #[test]
    fn roots_of_x2_minus_2() {
        let p = IntPoly::from_i64(&[-2, 0, 1]);
        let roots = p.real_roots();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].1 <= r(0, 1) && roots[1].0 >= r(0, 1));
    }

    #[test]
    fn rational_roots_are_points() {
        let p = IntPoly::from_i64(&[0, -1, 0, 1]);
        let roots = p.real_roots();
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().any(|(a, b)| a == b && a.is_zero()));
        let top = p.largest_real_root().unwrap();
        assert!(top.0 <= r(1, 1) && top.1 >= r(1, 1));
    }

    #[test]
    fn factor_x4_minus_4() {
        let f = IntPoly::from_i64(&[-4, 0, 0, 0, 1]).factor();
        assert_eq!(f, vec![(IntPoly::from_i64(&[-2, 0, 1]), 1), (IntPoly::from_i64(&[2, 0, 1]), 1)]);
    }

    #[test]
    fn display() {
        assert_eq!(IntPoly::from_i64(&[-1, -1, 1]).to_string(), "x^2 - x - 1");
    }
}
