//! Tolerances in natural-log units and certified closeness of entropies.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::entropy::EntropyValue;
use super::poly::IntPoly;
use super::real::{ratio_to_f64, AlgebraicReal};
use crate::error::{Error, Result};

/// A positive real tolerance: a rational, or a rational multiple of log b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Epsilon {
    Nat(BigRational),
    LogMultiple { coeff: BigRational, base: BigInt },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certainty {
    Yes,
    No,
    Undecided,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Parses a decimal or fraction: "0.35", "7/20", "3".
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{ip}{fp}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let d = num_traits::pow(BigInt::from(10), fp.len());
    let r = BigRational::new(n, d);
    Ok(if neg { -r } else { r })
}

/// Parses "c*log(b)", "log(b)" or a plain rational.
pub fn parse_log_expr(s: &str) -> Result<(BigRational, Option<BigInt>)> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(idx) = t.find("log(") {
        let head = &t[..idx];
        let tail = &t[idx + 4..];
        let inner = tail.strip_suffix(')').ok_or_else(|| Error::Parse(format!("unbalanced log in {s:?}")))?;
        let base: BigInt = inner.parse().map_err(|_| Error::Parse(format!("log base must be an integer in {s:?}")))?;
        if base < BigInt::one() {
            return Err(Error::Parse(format!("log base must be positive in {s:?}")));
        }
        let coeff = if head.is_empty() {
            BigRational::one()
        } else {
            parse_rational(head.strip_suffix('*').ok_or_else(|| Error::Parse(format!("expected '*' in {s:?}")))?)?
        };
        Ok((coeff, Some(base)))
    } else {
        Ok((parse_rational(&t)?, None))
    }
}

impl Epsilon {
    pub fn parse(s: &str) -> Result<Self> {
        let e = match parse_log_expr(s)? {
            (c, Some(b)) => Epsilon::LogMultiple { coeff: c, base: b },
            (c, None) => Epsilon::Nat(c),
        };
        if !e.is_positive() {
            return Err(Error::Precondition(format!("tolerance must be positive, got {s:?}")));
        }
        Ok(e)
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Epsilon::Nat(r) => r.is_positive(),
            Epsilon::LogMultiple { coeff, base } => coeff.is_positive() && *base > BigInt::one(),
        }
    }

    pub fn halve(&self) -> Self {
        self.scale(&rat(1, 2))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        match self {
            Epsilon::Nat(r) => Epsilon::Nat(r * k),
            Epsilon::LogMultiple { coeff, base } => Epsilon::LogMultiple { coeff: coeff * k, base: base.clone() },
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Epsilon::Nat(r) => ratio_to_f64(r),
            Epsilon::LogMultiple { coeff, base } => ratio_to_f64(coeff) * base.to_f64().unwrap().ln(),
        }
    }

    /// Rational enclosure of e^ε with relative width about 2^-bits.
    pub fn exp_bounds(&self, bits: u32) -> (BigRational, BigRational) {
        match self {
            Epsilon::Nat(r) => exp_enclosure(r, bits),
            Epsilon::LogMultiple { coeff, base } => {
                // b^(p/q): q-th root of b^p, by bisection.
                let p = coeff.numer().to_u32().expect("small numerator");
                let q = coeff.denom().to_u32().expect("small denominator");
                let target = BigRational::from_integer(num_traits::pow(base.clone(), p as usize));
                root_enclosure(&target, q, bits)
            }
        }
    }

    /// e^ε as an exact algebraic number when it is one.
    pub fn exp_exact(&self) -> Option<AlgebraicReal> {
        match self {
            Epsilon::Nat(_) => None,
            Epsilon::LogMultiple { coeff, base } => Some(log_multiple_base(coeff, base)),
        }
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Epsilon::Nat(r) => write!(f, "{r}"),
            Epsilon::LogMultiple { coeff, base } => write!(f, "{coeff}*log({base})"),
        }
    }
}

/// Exact base b^(p/q) of the entropy (p/q)·log b.
pub fn log_multiple_base(coeff: &BigRational, base: &BigInt) -> AlgebraicReal {
    assert!(!coeff.is_negative());
    if coeff.is_zero() {
        return AlgebraicReal::from_int(1);
    }
    let p = coeff.numer().to_usize().expect("small numerator");
    let q = coeff.denom().to_usize().expect("small denominator");
    let mut c = vec![BigInt::zero(); q + 1];
    c[0] = -num_traits::pow(base.clone(), p);
    c[q] = BigInt::one();
    AlgebraicReal::largest_root(&IntPoly::new(c)).expect("x^q − b^p has a positive root")
}

/// Target entropy from an expression such as "1/5*log(2)".
pub fn parse_entropy_expr(s: &str) -> Result<EntropyValue> {
    match parse_log_expr(s)? {
        (c, Some(b)) => {
            if c.is_negative() {
                return Err(Error::Precondition("entropy must be nonnegative".into()));
            }
            if c.denom() > &BigInt::from(4096) || c.numer() > &BigInt::from(1 << 16) {
                return Err(Error::Budget(format!("log coefficient {c} is too fine for an exact base")));
            }
            Ok(EntropyValue::from_base(log_multiple_base(&c, &b)))
        }
        (c, None) if c.is_zero() => Ok(EntropyValue::zero()),
        (c, None) => Err(Error::InexactTarget(format!(
            "entropy {c} in natural-log units is transcendental; give it as a multiple of log(b)"
        ))),
    }
}

fn dyadic_floor(x: &BigRational, bits: u32) -> BigRational {
    let s = BigInt::one() << bits;
    BigRational::new((x * BigRational::from_integer(s.clone())).floor().to_integer(), s)
}

fn dyadic_ceil(x: &BigRational, bits: u32) -> BigRational {
    let s = BigInt::one() << bits;
    BigRational::new((x * BigRational::from_integer(s.clone())).ceil().to_integer(), s)
}

/// Enclosure of e^r for rational r ≥ 0 by a Taylor sum with remainder bound.
fn exp_enclosure(r: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(!r.is_negative());
    let mut s = 0u32;
    let mut t = r.clone();
    while t > rat(1, 2) {
        t /= BigRational::from_integer(2.into());
        s += 1;
    }
    let work = bits + 16 + s;
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    let mut n = 0u32;
    let eps = BigRational::new(BigInt::one(), BigInt::one() << work);
    loop {
        sum += &term;
        n += 1;
        term = term * &t / BigRational::from_integer(n.into());
        if term < eps {
            break;
        }
    }
    // Remainder ≤ 2·(next term) since t ≤ 1/2.
    let mut lo = dyadic_floor(&sum, work);
    let mut hi = dyadic_ceil(&(sum + term * BigRational::from_integer(2.into())), work);
    for _ in 0..s {
        lo = dyadic_floor(&(&lo * &lo), work);
        hi = dyadic_ceil(&(&hi * &hi), work);
    }
    (lo, hi)
}

/// Enclosure of target^(1/q) for target ≥ 1.
fn root_enclosure(target: &BigRational, q: u32, bits: u32) -> (BigRational, BigRational) {
    let mut lo = BigRational::one();
    let mut hi = target.clone().max(BigRational::one()) + BigRational::one();
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (bits + 8));
    while &hi - &lo > eps {
        let mid = dyadic_floor(&((&lo + &hi) / BigRational::from_integer(2.into())), bits + 16);
        if num_traits::pow(mid.clone(), q as usize) <= *target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Certifies |h(a) − h(t)| < ε, i.e. a < t·e^ε and t < a·e^ε.
pub fn within(a: &EntropyValue, t: &EntropyValue, eps: &Epsilon) -> Certainty {
    if a.base.cmp_exact(&t.base) == std::cmp::Ordering::Equal {
        return Certainty::Yes;
    }
    for bits in [32u32, 64, 128, 256, 512, 1024] {
        let w = BigRational::new(BigInt::one(), BigInt::one() << bits);
        let (alo, ahi) = a.base.enclosure(&w);
        let (tlo, thi) = t.base.enclosure(&w);
        let (elo, ehi) = eps.exp_bounds(bits);
        if ahi < &tlo * &elo && thi < &alo * &elo {
            return Certainty::Yes;
        }
        if alo >= &thi * &ehi || tlo >= &ahi * &ehi {
            return Certainty::No;
        }
    }
    Certainty::Undecided
}

/// Certifies h(a) < h(t) + ε.
pub fn below_plus(a: &EntropyValue, t: &EntropyValue, eps: &Epsilon) -> Certainty {
    for bits in [32u32, 64, 128, 256, 512, 1024] {
        let w = BigRational::new(BigInt::one(), BigInt::one() << bits);
        let (alo, ahi) = a.base.enclosure(&w);
        let (tlo, thi) = t.base.enclosure(&w);
        let (elo, ehi) = eps.exp_bounds(bits);
        if ahi < &tlo * &elo {
            return Certainty::Yes;
        }
        if alo >= &thi * &ehi {
            return Certainty::No;
        }
    }
    Certainty::Undecided
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("0.35").unwrap(), rat(7, 20));
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_log_expr("1/10*log(2)").unwrap(), (rat(1, 10), Some(BigInt::from(2))));
        assert_eq!(parse_log_expr("log(3)").unwrap(), (rat(1, 1), Some(BigInt::from(3))));
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn exp_bounds_bracket() {
        let (lo, hi) = Epsilon::Nat(rat(1, 1)).exp_bounds(40);
        let e = std::f64::consts::E;
        assert!(ratio_to_f64(&lo) <= e && e <= ratio_to_f64(&hi));
        let (lo, hi) = Epsilon::parse("1/2*log(2)").unwrap().exp_bounds(40);
        let s = 2f64.sqrt();
        assert!(ratio_to_f64(&lo) <= s && s <= ratio_to_f64(&hi));
    }

    #[test]
    fn within_golden() {
        let g = EntropyValue::from_base(AlgebraicReal::largest_root(&IntPoly::from_i64(&[-1, -1, 1])).unwrap());
        let t = parse_entropy_expr("0.7*log(2)").unwrap();
        // log φ ≈ 0.4812, 0.7·log 2 ≈ 0.4852.
        assert_eq!(within(&g, &t, &Epsilon::parse("0.01").unwrap()), Certainty::Yes);
        assert_eq!(within(&g, &t, &Epsilon::parse("0.001").unwrap()), Certainty::No);
    }
}
