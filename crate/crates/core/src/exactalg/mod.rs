//! Exact integer and rational linear algebra, plus finitely generated
//! abelian groups.

pub mod group;
pub mod matrix;
pub mod mixed;
pub mod rational;
pub mod snf;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use group::{
    cokernel_presentation, hom_kernel_image, preimage_solve, quotient_group, torsion_subgroup, AbHom, FgAbGroup,
    Subgroup,
};
pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use mixed::{ExactnessCheck, MixedGroup, MixedHom, MixedKernel, MixedSystem};
pub use rational::{row_echelon, RowEchelon};
pub use snf::{smith_normal_form, SmithForm};

pub type Int = BigInt;
pub type Rat = BigRational;

/// `n / d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// Which ring [`solve_linear`] works over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveRing {
    Integer,
    Rational,
}

/// Solves `M x = b`; `None` when no solution exists in the requested ring.
pub fn solve_linear(m: &IntMatrix, b: &[Int], ring: SolveRing) -> crate::Result<Option<Vec<Rat>>> {
    if b.len() != m.rows() {
        return Err(crate::Error::DimensionMismatch(format!(
            "matrix has {} rows but right-hand side has length {}",
            m.rows(),
            b.len()
        )));
    }
    Ok(match ring {
        SolveRing::Integer => smith_normal_form(m).solve(b).map(|x| rational::to_rat_vec(&x)),
        SolveRing::Rational => row_echelon(&m.to_rat()).solve(&rational::to_rat_vec(b)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn solve_linear_examples() {
        let two = IntMatrix::from_i64(&[&[2]]);
        assert_eq!(solve_linear(&two, &ints(&[4]), SolveRing::Integer).unwrap(), Some(vec![rat(2, 1)]));
        assert_eq!(solve_linear(&two, &ints(&[3]), SolveRing::Integer).unwrap(), None);
        assert_eq!(solve_linear(&two, &ints(&[3]), SolveRing::Rational).unwrap(), Some(vec![rat(3, 2)]));
        let m = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        let x = solve_linear(&m, &ints(&[1, 2]), SolveRing::Integer).unwrap().unwrap();
        assert_eq!(m.to_rat().mul_vec(&x), vec![rat(1, 1), rat(2, 1)]);
        assert!(solve_linear(&m, &ints(&[1]), SolveRing::Integer).is_err());
    }
}
