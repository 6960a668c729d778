//! Real algebraic numbers as a minimal polynomial plus an isolating interval.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use super::modular::char_poly;
use super::poly::IntPoly;

#[derive(Clone)]
pub struct AlgebraicReal {
    poly: IntPoly,
    lo: BigRational,
    hi: BigRational,
    // false when `poly` is only known to have the value as a simple root
    minimal: bool,
}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {} in [{}, {}]", self.poly, self.lo, self.hi)
    }
}

impl PartialEq for AlgebraicReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }
}

impl Eq for AlgebraicReal {}

fn two() -> BigRational {
    BigRational::from_integer(BigInt::from(2))
}

impl AlgebraicReal {
    pub fn from_rational(r: BigRational) -> Self {
        AlgebraicReal { poly: IntPoly::rational_root(&r), lo: r.clone(), hi: r, minimal: true }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// Builds a value from an irreducible polynomial and an interval that
    /// isolates one of its roots. Returns `None` if the interval does not.
    pub fn new(poly: IntPoly, lo: BigRational, hi: BigRational) -> Option<Self> {
        let poly = poly.square_free();
        if poly.degree() == 0 || lo > hi {
            return None;
        }
        if poly.degree() == 1 {
            let r = BigRational::new(-poly.coeff(0), poly.coeff(1));
            return (lo <= r && r <= hi).then(|| Self::from_rational(r));
        }
        if lo == hi {
            return None;
        }
        if poly.sign_at(&lo) == 0 || poly.sign_at(&hi) == 0 {
            return None;
        }
        let s = poly.sturm();
        (s.count(&lo, &hi) == 1).then_some(AlgebraicReal { poly, lo, hi, minimal: true })
    }

    /// Builds from a polynomial (not necessarily irreducible) and an
    /// interval isolating one of its real roots.
    pub fn from_root_of(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> Self {
        if lo == hi {
            return Self::from_rational(lo.clone());
        }
        for (f, _) in p.factor() {
            if f.sign_at(lo) * f.sign_at(hi) < 0 || (f.sturm().count(lo, hi) == 1 && f.sign_at(lo) != 0) {
                if let Some(x) = AlgebraicReal::new(f.clone(), lo.clone(), hi.clone()) {
                    return x;
                }
            }
        }
        unreachable!("interval does not isolate a root of {p}")
    }

    /// Largest real root of `p`, if any.
    pub fn largest_root(p: &IntPoly) -> Option<Self> {
        let mut best: Option<AlgebraicReal> = None;
        for (f, _) in p.factor() {
            if let Some((lo, hi)) = f.largest_real_root() {
                let x = if f.degree() == 1 {
                    Self::from_rational(BigRational::new(-f.coeff(0), f.coeff(1)))
                } else if lo == hi {
                    Self::from_rational(lo)
                } else {
                    AlgebraicReal { poly: f, lo, hi, minimal: true }
                };
                best = Some(match best {
                    None => x,
                    Some(b) => {
                        if x.cmp_exact(&b) == Ordering::Greater {
                            x
                        } else {
                            b
                        }
                    }
                });
            }
        }
        best
    }

    /// Spectral radius of an irreducible nonnegative matrix with
    /// characteristic polynomial `cp`, given float guesses `lo ≤ λ ≤ hi`.
    ///
    /// The guess is accepted when cp(t + hi) has no sign variations and
    /// cp(t + lo) has exactly one: then cp has a single root above `lo`, it
    /// is simple, and it is the largest real root. No factoring is done.
    pub fn certify_perron(cp: &IntPoly, lo: f64, hi: f64) -> Option<Self> {
        let poly = cp.primitive();
        if poly.degree() < 2 || !poly.lead().is_positive() {
            return None;
        }
        let lo = dyadic(lo * (1.0 - 1e-10), false)?;
        let hi = dyadic(hi * (1.0 + 1e-10), true)?;
        if lo >= hi || poly.sign_at(&lo) == 0 || poly.sign_at(&hi) == 0 {
            return None;
        }
        if poly.taylor_variations(&hi) != 0 || poly.taylor_variations(&lo) != 1 {
            return None;
        }
        Some(AlgebraicReal { poly, lo, hi, minimal: false })
    }

    /// The same number with its minimal polynomial.
    pub fn minimal(&self) -> Self {
        if self.minimal {
            return self.clone();
        }
        for (f, _) in self.poly.factor() {
            if f.sign_at(&self.lo) * f.sign_at(&self.hi) < 0 {
                if f.degree() == 1 {
                    return Self::from_rational(BigRational::new(-f.coeff(0), f.coeff(1)));
                }
                return AlgebraicReal { poly: f, lo: self.lo.clone(), hi: self.hi.clone(), minimal: true };
            }
        }
        unreachable!("simple root without a sign-changing factor")
    }

    /// Defining polynomial; minimal unless built by [`Self::certify_perron`].
    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    /// Whether [`Self::poly`] is known to be the minimal polynomial.
    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    /// Rebuilds a value from a polynomial and an interval, checking that
    /// the polynomial has exactly one root there and that it is simple. A
    /// point interval must be a rational root. Polynomials of degree above
    /// 24 are not factored here.
    pub fn from_parts(poly: IntPoly, lo: BigRational, hi: BigRational) -> Option<Self> {
        if poly.degree() == 0 || lo > hi {
            return None;
        }
        if lo == hi {
            return (poly.sign_at(&lo) == 0).then(|| Self::from_rational(lo));
        }
        if poly.degree() == 1 {
            let r = BigRational::new(-poly.coeff(0), poly.coeff(1));
            return (lo < r && r < hi).then(|| Self::from_rational(r));
        }
        if poly.sign_at(&lo) * poly.sign_at(&hi) >= 0 || poly.square_free().sturm().count(&lo, &hi) != 1 {
            return None;
        }
        let g = poly.gcd(&poly.derivative());
        if g.degree() > 0 && g.square_free().sturm().count(&lo, &hi) != 0 {
            return None;
        }
        let minimal = poly.degree() <= 24 && matches!(poly.factor().as_slice(), [(_, 1)]);
        Some(AlgebraicReal { poly, lo, hi, minimal })
    }

    pub fn is_rational(&self) -> bool {
        self.lo == self.hi
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.lo.clone())
    }

    pub fn is_algebraic_integer(&self) -> bool {
        self.poly.is_monic()
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    /// Halves the isolating interval.
    pub fn refine(&mut self) {
        if self.is_rational() {
            return;
        }
        let mid = (&self.lo + &self.hi) / two();
        let s = self.poly.sign_at(&mid);
        if s == 0 {
            // Only possible for linear polynomials, which are stored as points.
            self.lo = mid.clone();
            self.hi = mid;
        } else if s == self.poly.sign_at(&self.lo) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    /// Refines until the interval width is below `w`.
    pub fn refine_to(&mut self, w: &BigRational) {
        while &self.hi - &self.lo > *w {
            self.refine();
        }
    }

    pub fn refined(&self, w: &BigRational) -> Self {
        let mut c = self.clone();
        c.refine_to(w);
        c
    }

    /// Rational enclosure `[lo, hi]` with width at most `w`.
    pub fn enclosure(&self, w: &BigRational) -> (BigRational, BigRational) {
        let c = self.refined(w);
        (c.lo, c.hi)
    }

    pub fn to_f64(&self) -> f64 {
        let w = BigRational::new(BigInt::one(), BigInt::from(1u64 << 60));
        let c = self.refined(&w);
        let mid = (&c.lo + &c.hi) / two();
        ratio_to_f64(&mid)
    }

    /// Exact comparison.
    ///
    /// Every interval holds exactly one root of its polynomial and that root
    /// is simple, so a common factor g that changes sign on the overlap
    /// proves equality.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        let mut a = self.clone();
        let mut b = other.clone();
        let mut common: Option<IntPoly> = if a.poly == b.poly {
            Some(a.poly.clone())
        } else {
            None
        };
        let coprime = a.minimal && b.minimal && a.poly != b.poly;
        let mut rounds = 0usize;
        loop {
            if a.hi < b.lo {
                return Ordering::Less;
            }
            if b.hi < a.lo {
                return Ordering::Greater;
            }
            if a.is_rational() && b.is_rational() {
                return a.lo.cmp(&b.lo);
            }
            if a.is_rational() {
                return b.cmp_rational(&a.lo).reverse();
            }
            if b.is_rational() {
                return a.cmp_rational(&b.lo);
            }
            if !coprime {
                if common.is_none() && rounds == 64 {
                    common = Some(a.poly.gcd(&b.poly));
                }
                if let Some(g) = common.as_ref().filter(|g| g.degree() > 0) {
                    let lo = (&a.lo).max(&b.lo);
                    let hi = (&a.hi).min(&b.hi);
                    if g.sign_at(lo) * g.sign_at(hi) <= 0 {
                        return Ordering::Equal;
                    }
                }
            }
            a.refine();
            b.refine();
            rounds += 1;
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        if self.is_rational() {
            return self.lo.cmp(r);
        }
        if *r <= self.lo {
            return Ordering::Greater;
        }
        if *r >= self.hi {
            return Ordering::Less;
        }
        // r lies strictly inside; the side is read off the sign change.
        let sr = self.poly.sign_at(r);
        if sr == 0 {
            Ordering::Equal
        } else if sr == self.poly.sign_at(&self.lo) {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    /// `self^k` for k ≥ 1, via the characteristic polynomial of the k-th
    /// power of the companion matrix.
    pub fn pow(&self, k: u32) -> Self {
        assert!(k >= 1);
        if k == 1 {
            return self.clone();
        }
        if let Some(r) = self.as_rational() {
            return Self::from_rational(num_traits::pow(r, k as usize));
        }
        let me = self.minimal();
        let p = power_poly(&me.poly, k);
        // Interval arithmetic on x^k; refine until the image isolates a root of p.
        let sturm = p.square_free().sturm();
        let mut a = me;
        loop {
            let (lo, hi) = pow_interval(&a.lo, &a.hi, k);
            if lo < hi {
                let roots_here = sturm.count(&lo, &hi);
                let edge = p.sign_at(&lo) == 0 || p.sign_at(&hi) == 0;
                if roots_here == 1 && !edge {
                    return Self::from_root_of(&p, &lo, &hi);
                }
            }
            a.refine();
        }
    }
}

/// Dyadic rational at 2^-64 resolution, rounded in the given direction.
fn dyadic(x: f64, up: bool) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let scale = 2f64.powi(64);
    let v = if up { (x * scale).ceil() } else { (x * scale).floor() };
    let n = BigInt::from_f64(v)?;
    Some(BigRational::new(n, BigInt::one() << 64u32))
}

/// Exact monotone image of [lo, hi] under x ↦ x^k.
fn pow_interval(lo: &BigRational, hi: &BigRational, k: u32) -> (BigRational, BigRational) {
    let a = num_traits::pow(lo.clone(), k as usize);
    let b = num_traits::pow(hi.clone(), k as usize);
    if k % 2 == 1 || !lo.is_negative() {
        (a, b)
    } else if !hi.is_positive() {
        (b, a)
    } else {
        (BigRational::zero(), a.max(b))
    }
}

/// Primitive polynomial whose roots are the k-th powers of the roots of `p`.
///
/// Uses the k-th power of the companion matrix of the monic rescaling
/// lc^(d−1)·p(y/lc), whose roots are lc·α.
pub fn power_poly(p: &IntPoly, k: u32) -> IntPoly {
    let d = p.degree();
    let lc = p.lead();
    let mut q = vec![BigInt::zero(); d + 1];
    for (i, qi) in q.iter_mut().enumerate().take(d) {
        *qi = p.coeff(i) * num_traits::pow(lc.clone(), d - 1 - i);
    }
    q[d] = BigInt::one();
    let comp = companion(&IntPoly::new(q));
    let ck = mat_pow(&comp, k);
    let cp = char_poly(&ck);
    // Roots of cp are (lc·α)^k; rescale back to α^k.
    let lk = num_traits::pow(lc, k as usize);
    let mut c = Vec::with_capacity(d + 1);
    for i in 0..=d {
        c.push(cp.coeff(i) * num_traits::pow(lk.clone(), i));
    }
    IntPoly::new(c).primitive()
}

/// Companion matrix of a monic polynomial.
pub fn companion(p: &IntPoly) -> Vec<Vec<BigInt>> {
    let d = p.degree();
    let mut m = vec![vec![BigInt::zero(); d]; d];
    for i in 1..d {
        m[i][i - 1] = BigInt::one();
    }
    for i in 0..d {
        m[i][d - 1] = -p.coeff(i);
    }
    m
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let m = b[0].len();
    let mut c = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                c[i][j] += &a[i][k] * &bk[j];
            }
        }
    }
    c
}

pub fn mat_pow(a: &[Vec<BigInt>], mut k: u32) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut r: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect()).collect();
    let mut b = a.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            r = mat_mul(&r, &b);
        }
        k >>= 1;
        if k > 0 {
            b = mat_mul(&b, &b);
        }
    }
    r
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() && d != 0.0 {
        return n / d;
    }
    // Scale down huge numerators and denominators together.
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
    let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
    n / d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> AlgebraicReal {
        AlgebraicReal::largest_root(&IntPoly::from_i64(&[-1, -1, 1])).unwrap()
    }

    #[test]
    fn golden_value() {
        assert!((golden().to_f64() - 1.618_033_988_749_895).abs() < 1e-12);
    }

    #[test]
    fn sqrt2_vs_fourth_root_of_4() {
        let a = AlgebraicReal::largest_root(&IntPoly::from_i64(&[-2, 0, 1])).unwrap();
        let b = AlgebraicReal::largest_root(&IntPoly::from_i64(&[-4, 0, 0, 0, 1])).unwrap();
        assert_eq!(a.cmp_exact(&b), Ordering::Equal);
        assert_eq!(a.poly(), b.poly());
    }

    #[test]
    fn ordering() {
        assert_eq!(golden().cmp_exact(&AlgebraicReal::from_int(2)), Ordering::Less);
        assert_eq!(AlgebraicReal::from_int(2).cmp_exact(&golden()), Ordering::Greater);
    }

    #[test]
    fn powers() {
        let s = AlgebraicReal::largest_root(&IntPoly::from_i64(&[-2, 0, 1])).unwrap();
        assert_eq!(s.pow(2), AlgebraicReal::from_int(2));
        let g2 = golden().pow(2);
        assert_eq!(g2.poly(), &IntPoly::from_i64(&[1, -3, 1]));
    }

    #[test]
    fn non_monic_power() {
        // root 3/2 of 2x − 3 and the root of 2x² − 3 squared both give 3/2.
        let r = AlgebraicReal::largest_root(&IntPoly::from_i64(&[-3, 0, 2])).unwrap();
        assert_eq!(r.pow(2).as_rational(), Some(BigRational::new(3.into(), 2.into())));
    }
}
