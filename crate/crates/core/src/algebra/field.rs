//! Coefficient fields: the rationals and prime fields `F_p` with `p < 2^63`.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    /// `None` when the denominator vanishes in this field.
    fn from_rational(&self, v: &BigRational) -> Option<Self::Elem>;
    /// Exact textual form used by the polynomial grammar.
    fn format_elem(&self, a: &Self::Elem) -> String;
    /// Header descriptor: `QQ` or `GF(p)`.
    fn descriptor(&self) -> String;
    /// Multiplier that makes a coefficient list integral and primitive, if
    /// the field has a notion of content.
    fn content_normalizer(&self, _coeffs: &[&Self::Elem]) -> Option<Self::Elem> {
        None
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }
}

/// The rationals, with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn from_rational(&self, v: &BigRational) -> Option<BigRational> {
        Some(v.clone())
    }
    fn format_elem(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn descriptor(&self) -> String {
        "QQ".to_string()
    }
    fn content_normalizer(&self, coeffs: &[&BigRational]) -> Option<BigRational> {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in coeffs {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return None;
        }
        let mut m = BigRational::new(den_lcm, num_gcd);
        // leading coefficient positive
        if let Some(first) = coeffs.first() {
            if (*first * &m).is_negative() {
                m = -m;
            }
        }
        Some(m)
    }
}

/// `F_p` for a prime `p < 2^63`; elements are canonical residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Panics unless `p` is a prime below `2^63`.
    pub fn new(p: u64) -> Self {
        assert!(p < (1 << 63) && is_prime(p), "{p} is not a prime below 2^63");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(acc, b, self.p);
            }
            b = mul_mod(b, b, self.p);
            e >>= 1;
        }
        acc
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
    fn from_i64(&self, v: i64) -> u64 {
        let r = (v as i128).rem_euclid(self.p as i128);
        r as u64
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        v.mod_floor(&m).to_u64().expect("residue fits")
    }
    fn from_rational(&self, v: &BigRational) -> Option<u64> {
        let d = self.from_bigint(v.denom());
        if d == 0 {
            return None;
        }
        Some(self.div(&self.from_bigint(v.numer()), &d))
    }
    fn format_elem(&self, a: &u64) -> String {
        // symmetric representative
        if *a > self.p / 2 {
            format!("-{}", self.p - a)
        } else {
            a.to_string()
        }
    }
    fn descriptor(&self) -> String {
        format!("GF({})", self.p)
    }
}

/// Deterministic Miller–Rabin, exact for every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = {
            let mut acc = 1u64;
            let mut b = a % n;
            let mut e = d;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_mod(acc, b, n);
                }
                b = mul_mod(b, b, n);
                e >>= 1;
            }
            acc
        };
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A uniformly sampled prime in `[lo, hi)`.
pub fn random_prime<R: Rng + ?Sized>(rng: &mut R, lo: u64, hi: u64) -> u64 {
    assert!(lo < hi);
    loop {
        let c = rng.gen_range(lo..hi) | 1;
        if c < hi && is_prime(c) {
            return c;
        }
    }
}

/// Default sampling window `[2^60, 2^61)`.
pub const PRIME_RANGE: (u64, u64) = (1 << 60, 1 << 61);

/// Rational with integer part only, convenience for tests and builders.
pub fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn trial_division(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), trial_division(n), "{n}");
        }
        // strong pseudoprimes to several bases
        for n in [3_215_031_751u64, 2_152_302_898_747, 3_474_749_660_383, 341_550_071_728_321] {
            assert!(!is_prime(n));
        }
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime((1 << 61) + 1));
    }

    #[test]
    fn sampled_primes_lie_in_range() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let p = random_prime(&mut rng, PRIME_RANGE.0, PRIME_RANGE.1);
            assert!(p >= PRIME_RANGE.0 && p < PRIME_RANGE.1 && is_prime(p));
        }
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(5);
        assert_eq!(f.mul(&2, &3), 1);
        assert_eq!(f.inv(&2), 3);
        assert_eq!(f.from_i64(-1), 4);
        assert_eq!(f.format_elem(&4), "-1");
        assert_eq!(f.from_rational(&BigRational::new(1.into(), 2.into())), Some(3));
        assert_eq!(f.from_rational(&BigRational::new(1.into(), 5.into())), None);
        let big = PrimeField::new((1 << 61) - 1);
        let a = 123_456_789_012_345u64;
        assert_eq!(big.mul(&a, &big.inv(&a)), 1);
    }

    #[test]
    fn rational_content() {
        let q = Rationals;
        let c = [BigRational::new((-2).into(), 3.into()), BigRational::new(4.into(), 9.into())];
        let refs: Vec<&BigRational> = c.iter().collect();
        let m = q.content_normalizer(&refs).unwrap();
        assert_eq!(&c[0] * &m, rat(3));
        assert_eq!(&c[1] * &m, rat(-2));
    }
}
