//! Exact arithmetic for positive reals of the form `∏ pᵢ^{eᵢ}` with primes
//! `pᵢ` and rational exponents `eᵢ`. Products, quotients and rational powers
//! stay exact, and any two values can be compared exactly.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest integer that will be factored by trial division.
const FACTOR_LIMIT: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PowerProduct {
    /// Prime → exponent, zero exponents omitted.
    factors: BTreeMap<u64, BigRational>,
}

fn factor_into(mut n: u64, sign: i64, out: &mut BTreeMap<u64, BigRational>) {
    let mut push = |p: u64, k: i64| {
        let e = out.entry(p).or_insert_with(BigRational::zero);
        *e += BigRational::from_integer(BigInt::from(k * sign));
    };
    let mut p = 2;
    while p * p <= n {
        let mut k = 0;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        if k > 0 {
            push(p, k);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        push(n, 1);
    }
}

fn to_factorable(n: &BigInt) -> Result<u64> {
    n.to_u64()
        .filter(|&v| v <= FACTOR_LIMIT)
        .ok_or_else(|| Error::Domain(format!("{n} is too large to factor exactly")))
}

impl PowerProduct {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_ratio(q: &BigRational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::Domain(format!("{q} is not positive")));
        }
        let mut factors = BTreeMap::new();
        factor_into(to_factorable(q.numer())?, 1, &mut factors);
        factor_into(to_factorable(q.denom())?, -1, &mut factors);
        factors.retain(|_, e| !e.is_zero());
        Ok(Self { factors })
    }

    pub fn from_integer(n: u64) -> Result<Self> {
        Self::from_ratio(&BigRational::from_integer(BigInt::from(n)))
    }

    pub fn pow(&self, e: &BigRational) -> Self {
        if e.is_zero() {
            return Self::one();
        }
        Self { factors: self.factors.iter().map(|(p, x)| (*p, x * e)).collect() }
    }

    pub fn recip(&self) -> Self {
        self.pow(&-BigRational::one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (p, e) in &other.factors {
            *factors.entry(*p).or_insert_with(BigRational::zero) += e;
        }
        factors.retain(|_, e| !e.is_zero());
        Self { factors }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Natural logarithm, rounded once per factor.
    pub fn ln(&self) -> f64 {
        self.factors.iter().map(|(p, e)| e.to_f64().unwrap_or(f64::NAN) * (*p as f64).ln()).sum()
    }

    pub fn to_f64(&self) -> f64 {
        self.ln().exp()
    }

    /// Exact comparison with one: raises both sides to the common exponent
    /// denominator and compares the resulting integers.
    pub fn cmp_one(&self) -> Ordering {
        if self.is_one() {
            return Ordering::Equal;
        }
        let lcm = self.factors.values().fold(BigInt::one(), |acc, e| Integer::lcm(&acc, e.denom()));
        let mut above = BigUint::one();
        let mut below = BigUint::one();
        for (p, e) in &self.factors {
            let k = (e * BigRational::from_integer(lcm.clone())).to_integer();
            let k = k.abs().to_u32().expect("exponent fits in u32");
            let pk = BigUint::from(*p).pow(k);
            if e.is_positive() {
                above *= pk;
            } else {
                below *= pk;
            }
        }
        above.cmp(&below)
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        self.div(other).cmp_one()
    }

    /// Exact comparison with Euler's number. Never returns `Equal`, since `e`
    /// is transcendental and every value here is algebraic. Compares `self^D`,
    /// an exact rational, with `s_n^D` and `(s_n + 1/(n!·n))^D` where `s_n` are
    /// the partial sums of `Σ 1/k!` bracketing `e`.
    pub fn cmp_e(&self) -> Ordering {
        let lcm = self.factors.values().fold(BigInt::one(), |acc, e| Integer::lcm(&acc, e.denom()));
        let d = lcm.to_u32().expect("denominator fits in u32");
        let mut value = BigRational::one();
        for (p, e) in &self.factors {
            let k = (e * BigRational::from_integer(lcm.clone())).to_integer();
            let base = BigRational::from_integer(BigInt::from(*p));
            let pk = num_traits::pow(base, k.abs().to_usize().expect("exponent fits"));
            value = if k.is_positive() { value * pk } else { value / pk };
        }
        let mut sum = BigRational::one();
        let mut term = BigRational::one();
        for n in 1u32..2000 {
            term /= BigRational::from_integer(BigInt::from(n));
            sum += &term;
            let hi = &sum + &term / BigRational::from_integer(BigInt::from(n));
            if value < num_traits::pow(sum.clone(), d as usize) {
                return Ordering::Less;
            }
            if value > num_traits::pow(hi, d as usize) {
                return Ordering::Greater;
            }
        }
        unreachable!("an algebraic number never equals e")
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if e.is_one() { p.to_string() } else { format!("{p}^({e})") })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_and_recombines() {
        let x = PowerProduct::from_ratio(&ratio(12, 35)).unwrap();
        assert!((x.to_f64() - 12.0 / 35.0).abs() < 1e-15);
        assert!(x.mul(&x.recip()).is_one());
        assert_eq!(x.to_string(), "2^(2)·3·5^(-1)·7^(-1)");
    }

    #[test]
    fn square_root_squares_back() {
        let two = PowerProduct::from_integer(2).unwrap();
        let root = two.pow(&ratio(1, 2));
        assert_eq!(root.mul(&root), two);
        assert_eq!(root.cmp_exact(&PowerProduct::from_ratio(&ratio(141, 100)).unwrap()), Ordering::Greater);
        assert_eq!(root.cmp_exact(&PowerProduct::from_ratio(&ratio(142, 100)).unwrap()), Ordering::Less);
    }

    #[test]
    fn compares_with_e() {
        assert_eq!(PowerProduct::from_integer(2).unwrap().cmp_e(), Ordering::Less);
        assert_eq!(PowerProduct::from_integer(3).unwrap().cmp_e(), Ordering::Greater);
        // 2718/1000 < e < 2719/1000
        assert_eq!(PowerProduct::from_ratio(&ratio(2718, 1000)).unwrap().cmp_e(), Ordering::Less);
        assert_eq!(PowerProduct::from_ratio(&ratio(2719, 1000)).unwrap().cmp_e(), Ordering::Greater);
        // 7.389^(1/2) < e < 7.39^(1/2)
        let half = ratio(1, 2);
        assert_eq!(PowerProduct::from_ratio(&ratio(7389, 1000)).unwrap().pow(&half).cmp_e(), Ordering::Less);
        assert_eq!(PowerProduct::from_ratio(&ratio(7390, 1000)).unwrap().pow(&half).cmp_e(), Ordering::Greater);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(PowerProduct::from_ratio(&ratio(0, 1)).is_err());
        assert!(PowerProduct::from_ratio(&ratio(-3, 2)).is_err());
    }
}
