use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::{FgAbGroup, Int};

/// One coefficient group `G_m ≅ ℤ^free ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_t` in canonical form.
///
/// Cochains use one *generator slot* per free summand followed by one per
/// torsion summand, and one *relator slot* per torsion summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffPiece {
    pub free: usize,
    pub torsion: Vec<Int>,
}

impl CoeffPiece {
    pub fn new(free: usize, torsion: &[Int]) -> Self {
        let g = FgAbGroup::from_invariants(torsion, free);
        CoeffPiece { free: g.free_rank(), torsion: g.invariant_factors().to_vec() }
    }

    pub fn generator_slots(&self) -> usize {
        self.free + self.torsion.len()
    }

    pub fn relator_slots(&self) -> usize {
        self.torsion.len()
    }

    /// Order of the torsion generator in slot `g`, `None` for free slots.
    pub fn slot_order(&self, g: usize) -> Option<&Int> {
        g.checked_sub(self.free).map(|t| &self.torsion[t])
    }

    pub fn group(&self) -> FgAbGroup {
        FgAbGroup::from_invariants(&self.torsion, self.free)
    }

    pub fn is_trivial(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }
}

/// The graded coefficient group `m ↦ G_m`, finitely supported.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedCoefficients {
    pieces: BTreeMap<i64, CoeffPiece>,
}

impl GradedCoefficients {
    /// Builds from `(degree, free rank, torsion factors)`; duplicate degrees are an error.
    pub fn from_parts(parts: &[(i64, usize, Vec<Int>)]) -> Result<Self> {
        let mut pieces = BTreeMap::new();
        for (deg, free, torsion) in parts {
            if torsion.iter().any(|d| d <= &Int::from(0)) {
                return Err(Error::Scene(format!("degree {deg}: torsion orders must be positive")));
            }
            let piece = CoeffPiece::new(*free, torsion);
            if pieces.insert(*deg, piece).is_some() {
                return Err(Error::Scene(format!("coefficient degree {deg} given twice")));
            }
        }
        pieces.retain(|_, p: &mut CoeffPiece| !p.is_trivial());
        Ok(GradedCoefficients { pieces })
    }

    /// `ℤ` concentrated in degree 0.
    pub fn integers() -> Self {
        GradedCoefficients::from_parts(&[(0, 1, vec![])]).expect("valid coefficients")
    }

    pub fn get(&self, m: i64) -> Option<&CoeffPiece> {
        self.pieces.get(&m)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &CoeffPiece)> {
        self.pieces.iter().map(|(m, p)| (*m, p))
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.pieces.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.pieces.keys().next_back().copied()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.pieces.values().all(|p| p.torsion.is_empty())
    }
}

impl fmt::Display for GradedCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pieces.iter().map(|(m, p)| format!("G{m} = {}", p.group())).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_pieces() {
        let g = GradedCoefficients::from_parts(&[(0, 1, vec![Int::from(2)]), (2, 0, vec![Int::from(2), Int::from(3)])])
            .unwrap();
        assert_eq!(g.get(0).unwrap().generator_slots(), 2);
        assert_eq!(g.get(2).unwrap().torsion, vec![Int::from(6)]);
        assert_eq!(g.get(0).unwrap().slot_order(1), Some(&Int::from(2)));
        assert!(g.get(1).is_none());
        assert_eq!(g.to_string(), "G0 = Z/2 + Z, G2 = Z/6");
    }

    #[test]
    fn collisions_rejected() {
        assert!(GradedCoefficients::from_parts(&[(0, 1, vec![]), (0, 2, vec![])]).is_err());
    }
}
