use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use thiserror::Error;

/// An element `x + y·ε` of `ℤ_ε = ℤ[ε]/(ε² − 1)`.
///
/// `1` is the class of `⟨1⟩` and `ε` the class of `⟨−1⟩`, so this is the
/// subring of `GW(k)` generated by those two forms. The hyperbolic plane is
/// `h = 1 + ε`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GwElement {
    #[serde(with = "crate::serde_int")]
    pub x: BigInt,
    #[serde(with = "crate::serde_int")]
    pub y: BigInt,
}

/// The pair `(n, m)` is not in the image of `ℤ_ε → ℤ₊ × ℤ₋` (`n ≢ m mod 2`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("({n}, {m}) does not lift to ℤ_ε: components differ in parity")]
pub struct NoLift {
    pub n: BigInt,
    pub m: BigInt,
}

impl GwElement {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        GwElement { x: x.into(), y: y.into() }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        GwElement { x: n.into(), y: BigInt::zero() }
    }

    /// `ε = ⟨−1⟩`.
    pub fn eps() -> Self {
        GwElement::new(0, 1)
    }

    /// The hyperbolic plane `h = ⟨1⟩ + ⟨−1⟩`.
    pub fn h() -> Self {
        GwElement::new(1, 1)
    }

    /// `n·h`.
    pub fn h_multiple(n: impl Into<BigInt>) -> Self {
        let n = n.into();
        GwElement { x: n.clone(), y: n }
    }

    /// Rank: the image under `ε ↦ 1`.
    pub fn plus(&self) -> BigInt {
        &self.x + &self.y
    }

    /// Signature: the image under `ε ↦ −1`.
    pub fn minus(&self) -> BigInt {
        &self.x - &self.y
    }

    /// `π(a) = (p₊(a), p₋(a))`.
    pub fn project(&self) -> (BigInt, BigInt) {
        (self.plus(), self.minus())
    }

    /// Inverse of [`project`](Self::project) on parity-matched pairs.
    pub fn lift(n: &BigInt, m: &BigInt) -> Result<GwElement, NoLift> {
        let sum = n + m;
        if sum.is_odd() {
            return Err(NoLift { n: n.clone(), m: m.clone() });
        }
        let diff = n - m;
        Ok(GwElement { x: sum / 2, y: diff / 2 })
    }

    pub fn is_unit(&self) -> bool {
        let (p, m) = self.project();
        p.abs().is_one() && m.abs().is_one()
    }

    /// Inverse, when `self` is one of `±1, ±ε`. Each unit is its own inverse.
    pub fn inverse(&self) -> Option<GwElement> {
        self.is_unit().then(|| self.clone())
    }

    /// Exact quotient `self / divisor`, if it exists in `ℤ_ε`.
    pub fn exact_div(&self, divisor: &GwElement) -> Option<GwElement> {
        let (a, b) = self.project();
        let (c, d) = divisor.project();
        let q_plus = exact_component(&a, &c)?;
        let q_minus = exact_component(&b, &d)?;
        match (q_plus, q_minus) {
            (Some(p), Some(m)) => GwElement::lift(&p, &m).ok(),
            // A zero component of the divisor leaves that quotient component free;
            // choose it to satisfy the parity constraint.
            (Some(p), None) => GwElement::lift(&p, &p).ok(),
            (None, Some(m)) => GwElement::lift(&m, &m).ok(),
            (None, None) => Some(GwElement::zero()),
        }
    }

    pub fn divides(&self, other: &GwElement) -> bool {
        other.exact_div(self).is_some()
    }

    /// True when `other = u·self` for a unit `u`.
    pub fn is_associate(&self, other: &GwElement) -> bool {
        let (a, b) = self.project();
        let (c, d) = other.project();
        a.abs() == c.abs() && b.abs() == d.abs()
    }

    /// Splits `self = unit · normal` with `p₊(normal) ≥ 0` and `p₋(normal) ≥ 0`.
    ///
    /// The four units act on `(p₊, p₋)` by the four sign patterns, so the
    /// normal representative is unique.
    pub fn normalize(&self) -> (GwElement, GwElement) {
        let (p, m) = self.project();
        let sp = if p.is_negative() { -1 } else { 1 };
        let sm = if m.is_negative() { -1 } else { 1 };
        let unit = GwElement::lift(&BigInt::from(sp), &BigInt::from(sm)).expect("odd pair");
        let normal = GwElement::lift(&p.abs(), &m.abs()).expect("parity preserved");
        (unit, normal)
    }

    pub fn normalized(&self) -> GwElement {
        self.normalize().1
    }

    /// `max(|p₊|, |p₋|)`, then `|p₊| + |p₋|`; used to order pivot candidates.
    pub fn size_key(&self) -> (BigInt, BigInt) {
        let (p, m) = self.project();
        let (p, m) = (p.abs(), m.abs());
        let big = if p > m { p.clone() } else { m.clone() };
        (big, p + m)
    }
}

fn exact_component(a: &BigInt, c: &BigInt) -> Option<Option<BigInt>> {
    if c.is_zero() {
        if a.is_zero() {
            Some(None)
        } else {
            None
        }
    } else {
        let (q, r) = a.div_rem(c);
        r.is_zero().then_some(Some(q))
    }
}

impl Zero for GwElement {
    fn zero() -> Self {
        GwElement::new(0, 0)
    }

    fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl One for GwElement {
    fn one() -> Self {
        GwElement::new(1, 0)
    }
}

impl From<i64> for GwElement {
    fn from(n: i64) -> Self {
        GwElement::from_int(n)
    }
}

impl From<BigInt> for GwElement {
    fn from(n: BigInt) -> Self {
        GwElement::from_int(n)
    }
}

impl Add<&GwElement> for &GwElement {
    type Output = GwElement;
    fn add(self, rhs: &GwElement) -> GwElement {
        GwElement { x: &self.x + &rhs.x, y: &self.y + &rhs.y }
    }
}

impl Sub<&GwElement> for &GwElement {
    type Output = GwElement;
    fn sub(self, rhs: &GwElement) -> GwElement {
        GwElement { x: &self.x - &rhs.x, y: &self.y - &rhs.y }
    }
}

impl Mul<&GwElement> for &GwElement {
    type Output = GwElement;
    fn mul(self, rhs: &GwElement) -> GwElement {
        // ε² = 1
        GwElement {
            x: &self.x * &rhs.x + &self.y * &rhs.y,
            y: &self.x * &rhs.y + &self.y * &rhs.x,
        }
    }
}

impl Neg for &GwElement {
    type Output = GwElement;
    fn neg(self) -> GwElement {
        GwElement { x: -&self.x, y: -&self.y }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<GwElement> for GwElement {
            type Output = GwElement;
            fn $method(self, rhs: GwElement) -> GwElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&GwElement> for GwElement {
            type Output = GwElement;
            fn $method(self, rhs: &GwElement) -> GwElement {
                (&self).$method(rhs)
            }
        }
        impl $tr<GwElement> for &GwElement {
            type Output = GwElement;
            fn $method(self, rhs: GwElement) -> GwElement {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for GwElement {
    type Output = GwElement;
    fn neg(self) -> GwElement {
        -&self
    }
}

impl AddAssign<&GwElement> for GwElement {
    fn add_assign(&mut self, rhs: &GwElement) {
        self.x += &rhs.x;
        self.y += &rhs.y;
    }
}

impl SubAssign<&GwElement> for GwElement {
    fn sub_assign(&mut self, rhs: &GwElement) {
        self.x -= &rhs.x;
        self.y -= &rhs.y;
    }
}

impl fmt::Display for GwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x == self.y {
            return match &self.x {
                x if x.is_zero() => write!(f, "0"),
                x if x.is_one() => write!(f, "h"),
                x if *x == BigInt::from(-1) => write!(f, "-h"),
                x => write!(f, "{x}h"),
            };
        }
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        let eps = match &self.y {
            y if y.is_one() => "ε".to_string(),
            y if *y == BigInt::from(-1) => "-ε".to_string(),
            y => format!("{y}ε"),
        };
        if self.x.is_zero() {
            write!(f, "{eps}")
        } else if eps.starts_with('-') {
            write!(f, "{}{eps}", self.x)
        } else {
            write!(f, "{}+{eps}", self.x)
        }
    }
}
