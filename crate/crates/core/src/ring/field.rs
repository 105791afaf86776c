use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::RingError;

/// Coefficient field: a prime field F_p (p < 2^32) or the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Prime(u64),
    Rational,
}

/// A field element. `Fp` values are always reduced into `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Fp(u64),
    Q(Box<BigRational>),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

impl Field {
    /// Builds a field from its characteristic; 0 means the rationals.
    pub fn from_characteristic(p: u64) -> Result<Field, RingError> {
        if p == 0 {
            Ok(Field::Rational)
        } else if p < (1u64 << 32) && is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(RingError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Prime(p) => *p,
            Field::Rational => 0,
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            Field::Prime(_) => Coeff::Fp(0),
            Field::Rational => Coeff::Q(Box::new(BigRational::zero())),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        match self {
            Field::Prime(p) => {
                let p = *p as i128;
                Coeff::Fp((v as i128).rem_euclid(p) as u64)
            }
            Field::Rational => Coeff::Q(Box::new(BigRational::from_integer(BigInt::from(v)))),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Coeff {
        match self {
            Field::Prime(p) => {
                let r = v % BigInt::from(*p);
                let r = if r.is_negative() { r + BigInt::from(*p) } else { r };
                Coeff::Fp(r.try_into().expect("reduced below p"))
            }
            Field::Rational => Coeff::Q(Box::new(BigRational::from_integer(v.clone()))),
        }
    }

    pub fn is_zero(&self, c: &Coeff) -> bool {
        match c {
            Coeff::Fp(v) => *v == 0,
            Coeff::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self, c: &Coeff) -> bool {
        match c {
            Coeff::Fp(v) => *v == 1,
            Coeff::Q(q) => q.is_one(),
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Field::Prime(p), Coeff::Fp(x), Coeff::Fp(y)) => Coeff::Fp((x + y) % p),
            (Field::Rational, Coeff::Q(x), Coeff::Q(y)) => Coeff::Q(Box::new(&**x + &**y)),
            _ => panic!("coefficient from a different field"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Field::Prime(p), Coeff::Fp(x), Coeff::Fp(y)) => Coeff::Fp((x + p - y) % p),
            (Field::Rational, Coeff::Q(x), Coeff::Q(y)) => Coeff::Q(Box::new(&**x - &**y)),
            _ => panic!("coefficient from a different field"),
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Field::Prime(p), Coeff::Fp(x), Coeff::Fp(y)) => Coeff::Fp(x * y % p),
            (Field::Rational, Coeff::Q(x), Coeff::Q(y)) => Coeff::Q(Box::new(&**x * &**y)),
            _ => panic!("coefficient from a different field"),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (Field::Prime(p), Coeff::Fp(x)) => Coeff::Fp((p - x) % p),
            (Field::Rational, Coeff::Q(x)) => Coeff::Q(Box::new(-&**x)),
            _ => panic!("coefficient from a different field"),
        }
    }

    pub fn inv(&self, a: &Coeff) -> Option<Coeff> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (self, a) {
            (Field::Prime(p), Coeff::Fp(x)) => Coeff::Fp(pow_mod(*x, p - 2, *p)),
            (Field::Rational, Coeff::Q(x)) => Coeff::Q(Box::new(x.recip())),
            _ => panic!("coefficient from a different field"),
        })
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Option<Coeff> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    /// Signed integer view used for printing: symmetric representative in F_p.
    pub(crate) fn signed_parts(&self, c: &Coeff) -> (bool, String) {
        match (self, c) {
            (Field::Prime(p), Coeff::Fp(x)) => {
                if *x > p / 2 {
                    (true, (p - x).to_string())
                } else {
                    (false, x.to_string())
                }
            }
            (Field::Rational, Coeff::Q(q)) => {
                let neg = q.is_negative();
                let a = q.abs();
                if a.is_integer() {
                    (neg, a.numer().to_string())
                } else {
                    (neg, format!("{}/{}", a.numer(), a.denom()))
                }
            }
            _ => panic!("coefficient from a different field"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F_{p}"),
            Field::Rational => write!(f, "Q"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_check() {
        assert!(Field::from_characteristic(101).is_ok());
        assert!(Field::from_characteristic(32003).is_ok());
        assert!(Field::from_characteristic(100).is_err());
        assert_eq!(Field::from_characteristic(0).unwrap(), Field::Rational);
    }

    #[test]
    fn fp_inverse_roundtrip() {
        let k = Field::Prime(101);
        for v in 1..101 {
            let c = k.from_i64(v);
            let i = k.inv(&c).unwrap();
            assert!(k.is_one(&k.mul(&c, &i)));
        }
        assert!(k.inv(&k.zero()).is_none());
    }

    #[test]
    fn symmetric_printing() {
        let k = Field::Prime(101);
        assert_eq!(k.signed_parts(&k.from_i64(-1)), (true, "1".into()));
        assert_eq!(k.signed_parts(&k.from_i64(50)), (false, "50".into()));
        assert_eq!(k.signed_parts(&k.from_i64(51)), (true, "50".into()));
    }
}
