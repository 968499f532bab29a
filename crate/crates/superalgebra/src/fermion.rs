//! Grassmann generators and their power products.
//!
//! The 2N generators carry the frozen total order
//! `xi_1 < eta_1 < xi_2 < eta_2 < ...`; every sign in the engine is
//! relative to it. A monomial is stored as a bitmask over generator
//! positions, which is canonically the strictly increasing product of the
//! generators whose bits are set.

use std::cmp::Ordering;
use std::fmt;

/// Which of the two Grassmann species at a site.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Species {
    Xi,
    Eta,
}

/// A single Grassmann generator: site (1-based) and species.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct FermionIndex {
    pub site: u32,
    pub species: Species,
}

impl FermionIndex {
    pub fn xi(site: u32) -> Self {
        FermionIndex { site, species: Species::Xi }
    }

    pub fn eta(site: u32) -> Self {
        FermionIndex { site, species: Species::Eta }
    }

    /// Position in the global generator order, starting at 0.
    pub fn position(&self) -> u32 {
        debug_assert!(self.site >= 1);
        2 * (self.site - 1)
            + match self.species {
                Species::Xi => 0,
                Species::Eta => 1,
            }
    }

    fn from_position(pos: u32) -> Self {
        FermionIndex {
            site: pos / 2 + 1,
            species: if pos % 2 == 0 { Species::Xi } else { Species::Eta },
        }
    }
}

impl Ord for FermionIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.position().cmp(&other.position())
    }
}

impl PartialOrd for FermionIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FermionIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.species {
            Species::Xi => write!(f, "xi{}", self.site),
            Species::Eta => write!(f, "eta{}", self.site),
        }
    }
}

/// A strictly increasing product of Grassmann generators.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Default)]
pub struct FermionMonomial(u32);

impl FermionMonomial {
    pub fn one() -> Self {
        FermionMonomial(0)
    }

    pub fn generator(g: FermionIndex) -> Self {
        FermionMonomial(1 << g.position())
    }

    /// Build from an index list; repeated indices yield `None` (nilpotency
    /// makes the product zero, which is not a monomial).
    pub fn from_indices(indices: &[FermionIndex]) -> Option<Self> {
        let mut mask = 0u32;
        for g in indices {
            let bit = 1u32 << g.position();
            if mask & bit != 0 {
                return None;
            }
            mask |= bit;
        }
        Some(FermionMonomial(mask))
    }

    /// The full top monomial `xi_1 eta_1 ... xi_n eta_n`.
    pub fn top(n_sites: u32) -> Self {
        FermionMonomial((1u32 << (2 * n_sites)) - 1)
    }

    pub fn is_one(&self) -> bool {
        self.0 == 0
    }

    pub fn degree(&self) -> u32 {
        self.0.count_ones()
    }

    /// Grassmann parity: 0 even, 1 odd.
    pub fn parity(&self) -> u32 {
        self.degree() % 2
    }

    pub fn contains(&self, g: FermionIndex) -> bool {
        self.0 & (1 << g.position()) != 0
    }

    pub fn indices(&self) -> impl Iterator<Item = FermionIndex> + '_ {
        (0..32).filter(|p| self.0 & (1 << p) != 0).map(FermionIndex::from_position)
    }

    pub fn max_site(&self) -> u32 {
        (0..32u32)
            .rev()
            .find(|p| self.0 & (1 << p) != 0)
            .map(|p| p / 2 + 1)
            .unwrap_or(0)
    }

    /// Graded product. `None` when a generator repeats; otherwise the
    /// merged monomial together with the sign of sorting the concatenation
    /// `self ++ other` into increasing order.
    pub fn mul(&self, other: &FermionMonomial) -> Option<(FermionMonomial, i8)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // For each generator g of `other`, moving it into place crosses
        // every generator of `self` that sits above g.
        let mut swaps = 0u32;
        for p in 0..32 {
            if other.0 & (1 << p) != 0 {
                swaps += (self.0 >> (p + 1)).count_ones();
            }
        }
        let sign = if swaps % 2 == 0 { 1 } else { -1 };
        Some((FermionMonomial(self.0 | other.0), sign))
    }

    /// Left derivative data: `None` when `g` is absent; otherwise the
    /// reduced monomial and the sign `(-1)^(number of generators before g)`.
    pub fn left_derive(&self, g: FermionIndex) -> Option<(FermionMonomial, i8)> {
        let pos = g.position();
        if self.0 & (1 << pos) == 0 {
            return None;
        }
        let before = (self.0 & ((1u32 << pos) - 1)).count_ones();
        let sign = if before % 2 == 0 { 1 } else { -1 };
        Some((FermionMonomial(self.0 & !(1 << pos)), sign))
    }
}

// Degree first, then mask: scalars sort before fermionic content and the
// top monomial comes last, which fixes the serialization order.
impl Ord for FermionMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.0).cmp(&(other.degree(), other.0))
    }
}

impl PartialOrd for FermionMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FermionMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for g in self.indices() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", g)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_order_is_frozen() {
        assert!(FermionIndex::xi(1) < FermionIndex::eta(1));
        assert!(FermionIndex::eta(1) < FermionIndex::xi(2));
        assert!(FermionIndex::xi(2) < FermionIndex::eta(2));
    }

    #[test]
    fn product_anticommutes() {
        let xi1 = FermionMonomial::generator(FermionIndex::xi(1));
        let eta1 = FermionMonomial::generator(FermionIndex::eta(1));
        let (m1, s1) = xi1.mul(&eta1).unwrap();
        let (m2, s2) = eta1.mul(&xi1).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(s1, 1);
        assert_eq!(s2, -1);
    }

    #[test]
    fn product_nilpotent() {
        let xi1 = FermionMonomial::generator(FermionIndex::xi(1));
        assert!(xi1.mul(&xi1).is_none());
    }

    #[test]
    fn left_derive_signs() {
        // d_eta1 (xi1 eta1) = -xi1
        let m = FermionMonomial::from_indices(&[FermionIndex::xi(1), FermionIndex::eta(1)]).unwrap();
        let (rest, sign) = m.left_derive(FermionIndex::eta(1)).unwrap();
        assert_eq!(rest, FermionMonomial::generator(FermionIndex::xi(1)));
        assert_eq!(sign, -1);
        // d_xi1 (xi1 eta1) = eta1
        let (rest2, sign2) = m.left_derive(FermionIndex::xi(1)).unwrap();
        assert_eq!(rest2, FermionMonomial::generator(FermionIndex::eta(1)));
        assert_eq!(sign2, 1);
    }

    #[test]
    fn repeated_index_rejected() {
        assert!(FermionMonomial::from_indices(&[FermionIndex::xi(1), FermionIndex::xi(1)]).is_none());
    }
}
