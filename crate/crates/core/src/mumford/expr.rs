//! Formal direct sums of Tate, hofib, cone and Artin atoms.

use crate::gwring::GwElement;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeMap, SerializeSeq, Serializer};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Atom kinds, ordered `Tate < HoFib < Cone < Artin`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomKind {
    /// `𝟙`
    Tate,
    /// `hofib(d·)` for `d` neither zero nor a unit.
    HoFib(GwElement),
    /// cone of multiplication by `n > 1`.
    Cone(BigInt),
    /// `M(L)` with `[L : k] = degree`.
    Artin(u32),
}

/// `kind(q)[p]`. Field order gives the canonical sort `(q, p, kind)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub q: i64,
    pub p: i64,
    pub kind: AtomKind,
}

impl Atom {
    pub fn tate(q: i64, p: i64) -> Self {
        Atom { q, p, kind: AtomKind::Tate }
    }

    pub fn cone(n: impl Into<BigInt>, q: i64, p: i64) -> Self {
        Atom { q, p, kind: AtomKind::Cone(n.into()) }
    }

    pub fn hofib(d: GwElement, q: i64, p: i64) -> Self {
        Atom { q, p, kind: AtomKind::HoFib(d) }
    }

    pub fn artin(degree: u32, q: i64, p: i64) -> Self {
        Atom { q, p, kind: AtomKind::Artin(degree) }
    }

    /// Same kind, twist and shift moved by `(dq, dp)`.
    pub fn shifted(&self, dq: i64, dp: i64) -> Self {
        Atom { q: self.q + dq, p: self.p + dp, kind: self.kind.clone() }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            AtomKind::Tate => write!(f, "𝟙")?,
            AtomKind::HoFib(d) => write!(f, "hofib({d})")?,
            AtomKind::Cone(n) => write!(f, "cone({n})")?,
            AtomKind::Artin(d) => write!(f, "M(L{d})")?,
        }
        if self.q != 0 {
            write!(f, "({})", self.q)?;
        }
        if self.p != 0 {
            write!(f, "[{}]", self.p)?;
        }
        Ok(())
    }
}

/// A finite direct sum of atoms with multiplicities, kept in canonical form:
/// hofib atoms never carry zero or unit `d` (their `d` is unit-normalized),
/// cone atoms have `n > 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MotiveExpression {
    atoms: BTreeMap<Atom, u64>,
}

impl MotiveExpression {
    pub fn zero() -> Self {
        MotiveExpression::default()
    }

    /// `𝟙(q)[p]`
    pub fn tate(q: i64, p: i64) -> Self {
        let mut e = MotiveExpression::zero();
        e.push(Atom::tate(q, p), 1);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Adds `mult` copies of `atom`, rewriting it into canonical atoms first.
    pub fn push(&mut self, atom: Atom, mult: u64) {
        if mult == 0 {
            return;
        }
        let Atom { q, p, kind } = atom;
        match kind {
            AtomKind::HoFib(d) => {
                if d.is_zero() {
                    // fiber of 0 on 𝟙(q)[p]: source plus target shifted down
                    self.push(Atom::tate(q, p), mult);
                    self.push(Atom::tate(q, p - 1), mult);
                } else if !d.is_unit() {
                    self.insert(Atom::hofib(d.normalized(), q, p), mult);
                }
            }
            AtomKind::Cone(n) => {
                let n = n.abs();
                if n.is_zero() {
                    self.push(Atom::tate(q, p), mult);
                    self.push(Atom::tate(q, p + 1), mult);
                } else if !n.is_one() {
                    self.insert(Atom::cone(n, q, p), mult);
                }
            }
            kind => self.insert(Atom { q, p, kind }, mult),
        }
    }

    fn insert(&mut self, atom: Atom, mult: u64) {
        *self.atoms.entry(atom).or_insert(0) += mult;
    }

    /// Direct sum.
    pub fn extend(&mut self, other: &MotiveExpression) {
        for (a, m) in &other.atoms {
            self.insert(a.clone(), *m);
        }
    }

    pub fn sum(parts: impl IntoIterator<Item = MotiveExpression>) -> Self {
        let mut out = MotiveExpression::zero();
        for p in parts {
            out.extend(&p);
        }
        out
    }

    /// Atoms in canonical order with multiplicities.
    pub fn atoms(&self) -> impl Iterator<Item = (&Atom, u64)> {
        self.atoms.iter().map(|(a, m)| (a, *m))
    }

    pub fn multiplicity(&self, atom: &Atom) -> u64 {
        self.atoms.get(atom).copied().unwrap_or(0)
    }

    /// Total number of atoms counted with multiplicity.
    pub fn len(&self) -> u64 {
        self.atoms.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Every atom moved by `(dq, dp)`.
    pub fn twisted(&self, dq: i64, dp: i64) -> Self {
        MotiveExpression { atoms: self.atoms.iter().map(|(a, m)| (a.shifted(dq, dp), *m)).collect() }
    }

    /// `X ↦ X^∨(q)[p]`: Tate and Artin atoms dualize to `(−q)[−p]`, cones to `(−q)[−p−1]`.
    pub fn dual_twisted(&self, q: i64, p: i64) -> Self {
        let mut out = MotiveExpression::zero();
        for (a, m) in &self.atoms {
            let extra = match a.kind {
                AtomKind::Cone(_) | AtomKind::HoFib(_) => -1,
                _ => 0,
            };
            out.insert(Atom { q: q - a.q, p: p - a.p + extra, kind: a.kind.clone() }, *m);
        }
        out
    }
}

impl fmt::Display for MotiveExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .atoms
            .iter()
            .map(|(a, m)| if *m == 1 { a.to_string() } else { format!("{a}^{m}") })
            .collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

struct AtomJson<'a>(&'a Atom, u64);

impl Serialize for AtomJson<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let Atom { q, p, kind } = self.0;
        let mut map = serializer.serialize_map(None)?;
        match kind {
            AtomKind::Tate => map.serialize_entry("kind", "tate")?,
            AtomKind::HoFib(d) => {
                map.serialize_entry("kind", "hofib")?;
                map.serialize_entry("d", d)?;
            }
            AtomKind::Cone(n) => {
                map.serialize_entry("kind", "cone")?;
                map.serialize_entry("n", &crate::serde_int::Int(n))?;
            }
            AtomKind::Artin(deg) => {
                map.serialize_entry("kind", "artin")?;
                map.serialize_entry("degree", deg)?;
            }
        }
        map.serialize_entry("q", q)?;
        map.serialize_entry("p", p)?;
        map.serialize_entry("mult", &self.1)?;
        map.end()
    }
}

struct AtomList<'a>(&'a BTreeMap<Atom, u64>);

impl Serialize for AtomList<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for (a, m) in self.0 {
            seq.serialize_element(&AtomJson(a, *m))?;
        }
        seq.end()
    }
}

/// `{"atoms": [{"kind": "tate", "q": 0, "p": 0, "mult": 1}, …]}` in canonical order.
impl Serialize for MotiveExpression {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(1))?;
        map.serialize_entry("atoms", &AtomList(&self.atoms))?;
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_rewrites() {
        let mut e = MotiveExpression::zero();
        e.push(Atom::hofib(GwElement::one(), 1, 2), 1);
        assert!(e.is_zero());
        e.push(Atom::hofib(GwElement::zero(), 1, 2), 1);
        assert_eq!(e, MotiveExpression::sum([MotiveExpression::tate(1, 2), MotiveExpression::tate(1, 1)]));
        let mut f = MotiveExpression::zero();
        f.push(Atom::hofib(-GwElement::h(), 1, 2), 1);
        f.push(Atom::hofib(GwElement::h(), 1, 2), 1);
        assert_eq!(f.multiplicity(&Atom::hofib(GwElement::h(), 1, 2)), 2);
        let mut c = MotiveExpression::zero();
        c.push(Atom::cone(-3, 1, 1), 1);
        c.push(Atom::cone(1, 1, 1), 1);
        assert_eq!(c.len(), 1);
        assert_eq!(c.to_string(), "cone(3)(1)[1]");
    }

    #[test]
    fn ordering_and_json() {
        let e = MotiveExpression::sum([
            MotiveExpression::tate(2, 3),
            {
                let mut x = MotiveExpression::zero();
                x.push(Atom::hofib(GwElement::h(), 1, 2), 1);
                x
            },
            MotiveExpression::tate(0, 0),
        ]);
        assert_eq!(e.to_string(), "𝟙 ⊕ hofib(h)(1)[2] ⊕ 𝟙(2)[3]");
        let json = serde_json::to_value(&e).unwrap();
        assert_eq!(json["atoms"][1]["kind"], "hofib");
        assert_eq!(json["atoms"][1]["d"]["x"], 1);
        assert_eq!(json["atoms"][2]["q"], 2);
        assert_eq!(json["atoms"][2]["mult"], 1);
    }

    #[test]
    fn duals() {
        let d = MotiveExpression::sum([MotiveExpression::tate(0, 0), MotiveExpression::tate(0, 1)]);
        let dual = d.dual_twisted(2, 4);
        assert_eq!(dual, MotiveExpression::sum([MotiveExpression::tate(2, 4), MotiveExpression::tate(2, 3)]));
    }
}
