//! Dihedral group arithmetic.
//!
//! `D_k` has `2k` elements: rotations `r^a` and reflections `r^a·s` for
//! `a ∈ [0, k)`, with `s² = e` and `r^a s = s r^{-a}`. Elements are always
//! stored in canonical form, so equality is structural.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite group small enough to enumerate.
///
/// Only used where the search oracles need a non-dihedral group of order 4;
/// everything else works on [`Dihedral`] directly.
pub trait FiniteGroup {
    type Elem: Copy + Eq + Ord + Hash + fmt::Debug;

    fn order(&self) -> usize;
    fn identity(&self) -> Self::Elem;
    fn op(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    /// All elements in a fixed deterministic order.
    fn elements(&self) -> Vec<Self::Elem>;
    fn token(&self, a: Self::Elem) -> String;

    /// Product of `seq` in written order. `None` for an empty sequence.
    fn product<I>(&self, seq: I) -> Option<Self::Elem>
    where
        I: IntoIterator<Item = Self::Elem>,
    {
        seq.into_iter().reduce(|acc, x| self.op(acc, x))
    }
}

/// An element `r^exponent` (or `r^exponent·s` when `reflected`).
///
/// Field order gives the derived `Ord`: all rotations before all
/// reflections, each by exponent.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DihedralElement {
    reflected: bool,
    exponent: u32,
}

impl DihedralElement {
    pub const IDENTITY: DihedralElement = DihedralElement {
        reflected: false,
        exponent: 0,
    };

    pub fn exponent(self) -> u32 {
        self.exponent
    }

    pub fn is_reflection(self) -> bool {
        self.reflected
    }

    pub fn is_rotation(self) -> bool {
        !self.reflected
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.reflected {
            write!(f, "r^{}.s", self.exponent)
        } else {
            write!(f, "r^{}", self.exponent)
        }
    }
}

/// Syntax-only parse of a token `r^A` or `r^A.s`. The exponent is not
/// range-checked here; use [`Dihedral::parse`] for that.
impl FromStr for DihedralElement {
    type Err = Error;

    fn from_str(tok: &str) -> Result<Self> {
        let bad = || Error::Token(tok.to_string());
        let rest = tok.strip_prefix("r^").ok_or_else(bad)?;
        let (digits, reflected) = match rest.strip_suffix(".s") {
            Some(d) => (d, true),
            None => (rest, false),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let exponent = digits.parse().map_err(|_| bad())?;
        Ok(DihedralElement {
            reflected,
            exponent,
        })
    }
}

impl Serialize for DihedralElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DihedralElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The dihedral group `D_k` of order `2k`.
///
/// `k = 1` and `k = 2` are accepted (the groups of order 2 and the Klein
/// four-group); both are abelian.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Dihedral {
    k: u32,
}

impl Dihedral {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::GroupParameter(k));
        }
        Ok(Dihedral { k })
    }

    pub fn k(self) -> u32 {
        self.k
    }

    fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.k as i64) as u32
    }

    pub fn rotation(self, a: i64) -> DihedralElement {
        DihedralElement {
            reflected: false,
            exponent: self.reduce(a),
        }
    }

    pub fn reflection(self, a: i64) -> DihedralElement {
        DihedralElement {
            reflected: true,
            exponent: self.reduce(a),
        }
    }

    /// Whether `a` is canonical for this group.
    pub fn contains(self, a: DihedralElement) -> bool {
        a.exponent < self.k
    }

    /// Parse a token and check its exponent against `k`.
    pub fn parse(self, tok: &str) -> Result<DihedralElement> {
        let a: DihedralElement = tok.parse()?;
        if !self.contains(a) {
            return Err(Error::ExponentRange {
                token: tok.to_string(),
                k: self.k,
            });
        }
        Ok(a)
    }

    pub fn multiply(self, a: DihedralElement, b: DihedralElement) -> DihedralElement {
        let (x, y) = (a.exponent as i64, b.exponent as i64);
        // r^x s r^y = r^{x-y} s
        let exponent = if a.reflected { x - y } else { x + y };
        DihedralElement {
            reflected: a.reflected ^ b.reflected,
            exponent: self.reduce(exponent),
        }
    }

    pub fn inverse(self, a: DihedralElement) -> DihedralElement {
        if a.reflected {
            a
        } else {
            self.rotation(-(a.exponent as i64))
        }
    }

    /// Product of a nonempty sequence, folded left to right in written order.
    pub fn sequence_product<I>(self, seq: I) -> Result<DihedralElement>
    where
        I: IntoIterator<Item = DihedralElement>,
    {
        seq.into_iter()
            .reduce(|acc, x| self.multiply(acc, x))
            .ok_or(Error::EmptySequence)
    }

    /// Rotations by exponent, then reflections by exponent.
    pub fn enumerate_elements(self) -> Vec<DihedralElement> {
        let k = self.k as i64;
        (0..k)
            .map(|a| self.rotation(a))
            .chain((0..k).map(|a| self.reflection(a)))
            .collect()
    }

    /// Dense index in `[0, 2k)` matching [`Dihedral::enumerate_elements`].
    pub fn index_of(self, a: DihedralElement) -> usize {
        a.exponent as usize + if a.reflected { self.k as usize } else { 0 }
    }
}

impl FiniteGroup for Dihedral {
    type Elem = DihedralElement;

    fn order(&self) -> usize {
        2 * self.k as usize
    }

    fn identity(&self) -> DihedralElement {
        DihedralElement::IDENTITY
    }

    fn op(&self, a: DihedralElement, b: DihedralElement) -> DihedralElement {
        self.multiply(a, b)
    }

    fn elements(&self) -> Vec<DihedralElement> {
        self.enumerate_elements()
    }

    fn token(&self, a: DihedralElement) -> String {
        a.to_string()
    }
}

/// Cyclic group `Z_n`, written additively as `g^a`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Cyclic {
    n: u32,
}

impl Cyclic {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::GroupParameter(n));
        }
        Ok(Cyclic { n })
    }
}

impl FiniteGroup for Cyclic {
    type Elem = u32;

    fn order(&self) -> usize {
        self.n as usize
    }

    fn identity(&self) -> u32 {
        0
    }

    fn op(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.n
    }

    fn elements(&self) -> Vec<u32> {
        (0..self.n).collect()
    }

    fn token(&self, a: u32) -> String {
        format!("g^{a}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(k: u32) -> Dihedral {
        Dihedral::new(k).unwrap()
    }

    /// Cayley table built from the defining relations alone: every element is
    /// a word `r^a s^b`, and `s r = r^{-1} s` is applied by rewriting.
    fn relation_product(k: i64, a: (i64, bool), b: (i64, bool)) -> (i64, bool) {
        // (r^x s^p)(r^y s^q): move r^y left past s^p.
        let (x, p) = a;
        let (y, q) = b;
        let y = if p { -y } else { y };
        ((x + y).rem_euclid(k), p ^ q)
    }

    #[test]
    fn reflection_pair_from_prop() {
        let g = d(16);
        assert_eq!(g.multiply(g.reflection(0), g.reflection(3)), g.rotation(13));
    }

    #[test]
    fn reflection_pair_in_d32() {
        let g = d(32);
        assert_eq!(g.multiply(g.reflection(4), g.reflection(5)), g.rotation(31));
        // same thing expanded as r^4 (s r^5 s)
        let s = g.reflection(0);
        let inner = g.sequence_product([s, g.rotation(5), s]).unwrap();
        assert_eq!(g.multiply(g.rotation(4), inner), g.rotation(31));
    }

    #[test]
    fn multiply_matches_relation_table() {
        for k in 1..=8u32 {
            let g = d(k);
            for a in g.enumerate_elements() {
                for b in g.enumerate_elements() {
                    let (e, s) = relation_product(
                        k as i64,
                        (a.exponent() as i64, a.is_reflection()),
                        (b.exponent() as i64, b.is_reflection()),
                    );
                    let c = g.multiply(a, b);
                    assert_eq!((c.exponent() as i64, c.is_reflection()), (e, s));
                }
            }
        }
    }

    #[test]
    fn identity_and_inverse() {
        let g = d(16);
        for x in g.enumerate_elements() {
            assert_eq!(g.multiply(DihedralElement::IDENTITY, x), x);
            assert_eq!(g.multiply(x, g.inverse(x)), DihedralElement::IDENTITY);
        }
        assert_eq!(g.inverse(g.rotation(3)), g.rotation(13));
        assert_eq!(g.inverse(g.reflection(5)), g.reflection(5));
        assert_eq!(g.inverse(DihedralElement::IDENTITY), DihedralElement::IDENTITY);
    }

    #[test]
    fn sequence_products() {
        let g = d(32);
        let row = [g.reflection(0), g.reflection(29), g.reflection(6), g.reflection(7)];
        assert_eq!(g.sequence_product(row).unwrap(), g.rotation(2));
        let row = [g.rotation(0), g.rotation(5), g.rotation(6), g.rotation(27)];
        assert_eq!(g.sequence_product(row).unwrap(), g.rotation(6));
        assert_eq!(
            g.sequence_product([DihedralElement::IDENTITY]).unwrap(),
            DihedralElement::IDENTITY
        );
        assert!(matches!(
            g.sequence_product(std::iter::empty()),
            Err(Error::EmptySequence)
        ));
    }

    #[test]
    fn enumeration() {
        let g = d(2);
        assert_eq!(
            g.enumerate_elements(),
            vec![g.rotation(0), g.rotation(1), g.reflection(0), g.reflection(1)]
        );
        let all = d(16).enumerate_elements();
        assert_eq!(all.len(), 32);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, all);
        for (i, x) in all.iter().enumerate() {
            assert_eq!(d(16).index_of(*x), i);
        }
    }

    #[test]
    fn triangle_group_is_nonabelian() {
        let g = d(3);
        let (r, s) = (g.rotation(1), g.reflection(0));
        assert_ne!(g.multiply(r, s), g.multiply(s, r));
        // r has order 3, s order 2, and s r s = r^{-1}
        assert_eq!(g.sequence_product([r, r, r]).unwrap(), DihedralElement::IDENTITY);
        assert_eq!(g.sequence_product([s, r, s]).unwrap(), g.rotation(2));
    }

    #[test]
    fn token_parsing() {
        let g = d(32);
        assert_eq!(g.parse("r^13").unwrap(), g.rotation(13));
        assert_eq!(g.parse("r^0.s").unwrap(), g.reflection(0));
        assert_eq!(g.reflection(7).to_string(), "r^7.s");
        assert_eq!(DihedralElement::IDENTITY.to_string(), "r^0");
        for bad in ["r^", "r^ 3", "r^3s", "s", "r^-1", "r^3.s ", "x^3", "r^+3"] {
            assert!(matches!(bad.parse::<DihedralElement>(), Err(Error::Token(_))), "{bad}");
        }
        assert!(matches!(g.parse("r^32"), Err(Error::ExponentRange { .. })));
    }

    #[test]
    fn degenerate_groups() {
        assert!(Dihedral::new(0).is_err());
        let g = d(1);
        assert_eq!(g.enumerate_elements().len(), 2);
        // k = 2 is the Klein four-group: abelian, every element an involution
        let g = d(2);
        for a in g.enumerate_elements() {
            assert_eq!(g.multiply(a, a), DihedralElement::IDENTITY);
            for b in g.enumerate_elements() {
                assert_eq!(g.multiply(a, b), g.multiply(b, a));
            }
        }
    }

    #[test]
    fn cyclic_group() {
        let z = Cyclic::new(4).unwrap();
        assert_eq!(z.elements(), vec![0, 1, 2, 3]);
        assert_eq!(z.op(3, 2), 1);
        assert_eq!(z.product([1, 1, 1]), Some(3));
        assert_eq!(z.token(2), "g^2");
    }
}
