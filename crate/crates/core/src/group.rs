//! The elementary abelian 2-group on `[2^M]` and the flattening of pair
//! indices `(p, r)` into `p * 2^M + r`.

use std::fmt;
use std::ops::BitXor;

use crate::error::{Error, Result};

/// Largest supported exponent: pair encodings of `[2^M]^2` must fit in `u32`.
pub const MAX_EXPONENT: u32 = 15;

/// Group operation: bitwise addition.
#[inline]
pub fn xor_mul(x: u32, y: u32) -> u32 {
    x ^ y
}

/// The elementary abelian 2-group of order `2^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Group {
    exponent: u32,
}

impl Group {
    pub fn new(exponent: u32) -> Result<Self> {
        if exponent > MAX_EXPONENT {
            return Err(Error::Exponent(exponent));
        }
        Ok(Self { exponent })
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn order(&self) -> u32 {
        1 << self.exponent
    }

    pub fn element(&self, value: u32) -> Result<GroupElement> {
        if value >= self.order() {
            return Err(Error::OutOfRange {
                value: value.into(),
                bound: self.order().into(),
            });
        }
        Ok(GroupElement(value))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(0)
    }

    /// `p * 2^M + r`. The identity coset `(0, r)` maps to `r`.
    pub fn encode_pair(&self, p: u32, r: u32) -> Result<u32> {
        let hi = self.element(p)?;
        let lo = self.element(r)?;
        Ok(PairIndex { hi, lo }.encode(self.exponent))
    }

    pub fn decode_pair(&self, x: u32) -> Result<PairIndex> {
        let bound = 1u64 << (2 * self.exponent);
        if u64::from(x) >= bound {
            return Err(Error::OutOfRange {
                value: x.into(),
                bound,
            });
        }
        Ok(PairIndex::decode(x, self.exponent))
    }

    /// Every element, ascending.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> {
        (0..self.order()).map(GroupElement)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GroupElement(u32);

impl GroupElement {
    pub fn value(self) -> u32 {
        self.0
    }

    pub fn op(self, other: Self) -> Self {
        Self(xor_mul(self.0, other.0))
    }
}

impl BitXor for GroupElement {
    type Output = Self;

    fn bitxor(self, rhs: Self) -> Self {
        self.op(rhs)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A row, column or symbol of a product square, indexed by `[2^M] x [2^M]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairIndex {
    pub hi: GroupElement,
    pub lo: GroupElement,
}

impl PairIndex {
    #[inline]
    pub fn encode(self, exponent: u32) -> u32 {
        (self.hi.0 << exponent) | self.lo.0
    }

    #[inline]
    pub fn decode(x: u32, exponent: u32) -> Self {
        Self {
            hi: GroupElement(x >> exponent),
            lo: GroupElement(x & ((1 << exponent) - 1)),
        }
    }
}

impl fmt::Display for PairIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.hi, self.lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_examples() {
        for x in 0..64 {
            assert_eq!(xor_mul(x, x), 0);
        }
        assert_eq!(xor_mul(0, 7), 7);
        assert_eq!(xor_mul(3, 5), 6);
    }

    #[test]
    fn group_axioms_exhaustive() {
        for exp in 0..=8u32 {
            let g = Group::new(exp).unwrap();
            let n = g.order();
            for x in 0..n {
                assert_eq!(xor_mul(x, 0), x);
                assert_eq!(xor_mul(x, x), 0);
                for y in 0..n {
                    let xy = xor_mul(x, y);
                    assert!(xy < n);
                    assert_eq!(xy, xor_mul(y, x));
                }
            }
            // associativity is cubic; keep it to the smaller groups
            if exp <= 5 {
                for x in 0..n {
                    for y in 0..n {
                        for z in 0..n {
                            assert_eq!(xor_mul(xor_mul(x, y), z), xor_mul(x, xor_mul(y, z)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn encode_examples() {
        assert_eq!(Group::new(3).unwrap().encode_pair(0, 5).unwrap(), 5);
        let g = Group::new(2).unwrap();
        assert_eq!(g.encode_pair(2, 3).unwrap(), 11);
        let d = g.decode_pair(11).unwrap();
        assert_eq!((d.hi.value(), d.lo.value()), (2, 3));
        assert!(g.encode_pair(4, 0).is_err());
        assert!(g.decode_pair(16).is_err());
    }

    #[test]
    fn encode_decode_bijection() {
        for exp in 0..=6u32 {
            let g = Group::new(exp).unwrap();
            let n = g.order();
            let mut seen = vec![false; (n * n) as usize];
            for p in 0..n {
                for r in 0..n {
                    let x = g.encode_pair(p, r).unwrap();
                    assert!(!seen[x as usize]);
                    seen[x as usize] = true;
                    let d = g.decode_pair(x).unwrap();
                    assert_eq!((d.hi.value(), d.lo.value()), (p, r));
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn exponent_limit() {
        assert!(Group::new(15).is_ok());
        assert!(matches!(Group::new(16), Err(Error::Exponent(16))));
    }
}
