//! Fixtures shared by the benchmarks.

use mvglue_core::exactalg::IntMatrix;
use mvglue_core::random::{int_vec, stream};

/// A seeded `rows × cols` matrix with entries in `[-bound, bound]`.
pub fn random_matrix(rows: usize, cols: usize, bound: i64, seed: u64) -> IntMatrix {
    let mut rng = stream(seed, 0);
    IntMatrix::new(rows, cols, int_vec(&mut rng, rows * cols, bound))
}

#[cfg(test)]
mod tests {
    #[test]
    fn matrices_are_reproducible() {
        assert_eq!(super::random_matrix(3, 4, 5, 1), super::random_matrix(3, 4, 5, 1));
    }
}
