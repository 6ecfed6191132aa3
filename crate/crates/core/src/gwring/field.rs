//! Minimal exact field arithmetic for trace-form computations: `ℚ` and `F_p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub(crate) trait FieldOps {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn to_rational(&self, a: &Self::Elem) -> BigRational;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

pub(crate) struct Rationals;

impl FieldOps for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn to_rational(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
}

/// `F_p` for a prime `p`, elements stored in `[0, p)`.
pub(crate) struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    fn reduce(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue fits in u64")
    }

    pub fn from_rational(&self, r: &BigRational) -> Option<u64> {
        let d = self.reduce(r.denom());
        let di = self.inv(&d)?;
        Some(self.mul(&self.reduce(r.numer()), &di))
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let p = self.p as u128;
        let mut acc: u128 = 1 % p;
        let mut b = base as u128 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            exp >>= 1;
        }
        acc as u64
    }

    /// Legendre symbol for odd `p`: `1` for nonzero squares, `-1` otherwise.
    pub fn legendre(&self, a: u64) -> i32 {
        if self.p == 2 {
            return 1;
        }
        if self.pow(a, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }
}

impl FieldOps for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        self.reduce(n)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if (*a).is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        (*a).is_multiple_of(self.p)
    }
    fn to_rational(&self, a: &u64) -> BigRational {
        BigRational::from_integer(BigInt::from(*a))
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense polynomial helpers, coefficients low to high degree.
pub(crate) mod poly {
    use super::FieldOps;

    pub fn trim<F: FieldOps>(f: &F, mut p: Vec<F::Elem>) -> Vec<F::Elem> {
        while p.last().is_some_and(|c| f.is_zero(c)) {
            p.pop();
        }
        p
    }

    pub fn derivative<F: FieldOps>(f: &F, p: &[F::Elem]) -> Vec<F::Elem> {
        let d = p
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(&f.from_int(&(i as i64).into()), c))
            .collect();
        trim(f, d)
    }

    pub fn rem<F: FieldOps>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let b = trim(f, b.to_vec());
        let lead_inv = f.inv(b.last().expect("division by zero polynomial")).expect("nonzero lead");
        let mut r = trim(f, a.to_vec());
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = f.mul(r.last().unwrap(), &lead_inv);
            for (i, bc) in b.iter().enumerate() {
                r[shift + i] = f.sub(&r[shift + i], &f.mul(&c, bc));
            }
            r = trim(f, r);
        }
        r
    }

    pub fn gcd<F: FieldOps>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let mut a = trim(f, a.to_vec());
        let mut b = trim(f, b.to_vec());
        while !b.is_empty() {
            let r = rem(f, &a, &b);
            a = b;
            b = r;
        }
        a
    }
}
