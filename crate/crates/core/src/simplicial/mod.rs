//! Finite simplicial complexes, two-piece covers, and cochains with graded
//! coefficients.

mod cochain;
mod coefficients;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

pub(crate) use cochain::mul_int_rat;
pub use cochain::{glue_cochain, restrict_cochain, Cell, CellKind, Cochain, CochainComplex, CoeffRing};
pub use coefficients::{CoeffPiece, GradedCoefficients};

use crate::error::{Error, Result};
use crate::exactalg::{Int, IntMatrix};

/// Sorted, deduplicated vertex labels.
pub type Simplex = Vec<usize>;

pub fn simplex_name(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Face-closed set of simplices, stored by dimension in lexicographic order.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex").field("simplices", &self.by_dim).finish()
    }
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex { by_dim: Vec::new(), index: HashMap::new() }
    }

    /// Face closure of the given simplices (vertex order inside each input is irrelevant).
    pub fn from_simplices<I, S>(simplices: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        let mut all: BTreeSet<(usize, Simplex)> = BTreeSet::new();
        for s in simplices {
            let mut s = s.as_ref().to_vec();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            add_faces(&s, &mut all);
        }
        let top = all.iter().map(|(d, _)| *d).max();
        let mut by_dim: Vec<Vec<Simplex>> = vec![Vec::new(); top.map_or(0, |d| d + 1)];
        for (d, s) in all {
            by_dim[d].push(s);
        }
        let mut index = HashMap::new();
        for level in &by_dim {
            for (i, s) in level.iter().enumerate() {
                index.insert(s.clone(), i);
            }
        }
        SimplicialComplex { by_dim, index }
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    /// Dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.simplices(0).iter().map(|s| s[0]).collect()
    }

    pub fn simplices(&self, j: usize) -> &[Simplex] {
        self.by_dim.get(j).map_or(&[], |v| v.as_slice())
    }

    pub fn count(&self, j: usize) -> usize {
        self.simplices(j).len()
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn num_simplices(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    /// Position of `s` among simplices of its dimension.
    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index.contains_key(s)
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.all_simplices().all(|s| other.contains(s))
    }

    pub fn intersection(&self, other: &SimplicialComplex) -> SimplicialComplex {
        SimplicialComplex::from_simplices(self.all_simplices().filter(|s| other.contains(s)))
    }

    pub fn union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        SimplicialComplex::from_simplices(self.all_simplices().chain(other.all_simplices()))
    }

    /// Maximal simplices (not a proper face of anything), for serialization.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let faces: BTreeSet<Simplex> = self.all_simplices().flat_map(|s| facets(s)).collect();
        let mut out: Vec<Simplex> = self.all_simplices().filter(|s| !faces.contains(*s)).cloned().collect();
        out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Matrix of `δ: C^j → C^{j+1}`; entry `(τ, σ)` is `(-1)^i` when `σ` is
    /// `τ` with its `i`-th vertex removed.
    pub fn coboundary_matrix(&self, j: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.count(j + 1), self.count(j));
        for (t, tau) in self.simplices(j + 1).iter().enumerate() {
            for (i, face) in facets(tau).into_iter().enumerate() {
                let s = self.index_of(&face).expect("complex is face closed");
                m[(t, s)] = if i % 2 == 0 { Int::from(1) } else { Int::from(-1) };
            }
        }
        m
    }

    /// Euler characteristic.
    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim.iter().enumerate().map(|(d, v)| if d % 2 == 0 { v.len() as i64 } else { -(v.len() as i64) }).sum()
    }
}

/// Codimension-one faces in the order of the removed vertex.
pub fn facets(s: &[usize]) -> Vec<Simplex> {
    if s.len() <= 1 {
        return Vec::new();
    }
    (0..s.len()).map(|i| s.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v).collect()).collect()
}

fn add_faces(s: &[usize], out: &mut BTreeSet<(usize, Simplex)>) {
    if !out.insert((s.len() - 1, s.to_vec())) {
        return;
    }
    for f in facets(s) {
        add_faces(&f, out);
    }
}

/// `X = A ∪ B` with `D = A ∩ B`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub x: SimplicialComplex,
    pub a: SimplicialComplex,
    pub b: SimplicialComplex,
    pub d: SimplicialComplex,
}

/// Face-closes `A` and `B`, checks that they lie in `X` and cover it.
pub fn validate_decomposition<S: AsRef<[usize]>>(
    x: &SimplicialComplex,
    a_simplices: &[S],
    b_simplices: &[S],
) -> Result<Decomposition> {
    let a = SimplicialComplex::from_simplices(a_simplices);
    let b = SimplicialComplex::from_simplices(b_simplices);
    for (name, piece) in [("A", &a), ("B", &b)] {
        if let Some(s) = piece.all_simplices().find(|s| !x.contains(s)) {
            return Err(Error::NotSubcomplex(format!("{name} contains {} which is not in X", simplex_name(s))));
        }
    }
    if let Some(s) = x.all_simplices().find(|s| !a.contains(s) && !b.contains(s)) {
        return Err(Error::CoverFailure(simplex_name(s)));
    }
    let d = a.intersection(&b);
    Ok(Decomposition { x: x.clone(), a, b, d })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_boundary() -> SimplicialComplex {
        SimplicialComplex::from_simplices([[0, 1], [1, 2], [0, 2]])
    }

    #[test]
    fn closure_and_counts() {
        let x = SimplicialComplex::from_simplices([[2, 1, 0]]);
        assert_eq!(x.count(0), 3);
        assert_eq!(x.count(1), 3);
        assert_eq!(x.count(2), 1);
        assert_eq!(x.dim(), Some(2));
        assert_eq!(x.maximal_simplices(), vec![vec![0, 1, 2]]);
        assert_eq!(triangle_boundary().euler_characteristic(), 0);
    }

    #[test]
    fn coboundary_examples() {
        let pt = SimplicialComplex::from_simplices([[0]]);
        assert_eq!(pt.coboundary_matrix(0).shape(), (0, 1));
        let edge = SimplicialComplex::from_simplices([[0, 1]]);
        assert_eq!(edge.coboundary_matrix(0), IntMatrix::from_i64(&[&[-1, 1]]));
        let c = triangle_boundary().coboundary_matrix(0);
        assert_eq!(c.shape(), (3, 3));
        assert_eq!(crate::exactalg::rational::rank(&c.to_rat()), 2);
    }

    #[test]
    fn coboundary_squares_to_zero() {
        let x = SimplicialComplex::from_simplices([[0, 1, 2, 3]]);
        for j in 0..3 {
            assert!(x.coboundary_matrix(j + 1).mul(&x.coboundary_matrix(j)).is_zero());
        }
    }

    #[test]
    fn decompositions() {
        let x = triangle_boundary();
        let dec = validate_decomposition(&x, &[vec![0, 1], vec![1, 2]], &[vec![0, 2]]).unwrap();
        assert_eq!(dec.d.vertices(), vec![0, 2]);
        assert_eq!(dec.d.count(1), 0);

        let all: Vec<Vec<usize>> = x.maximal_simplices();
        let dec = validate_decomposition(&x, &all, &[]).unwrap();
        assert!(dec.d.is_empty());

        let sphere = SimplicialComplex::from_simplices([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]);
        let dec =
            validate_decomposition(&sphere, &[vec![0, 1, 2], vec![0, 1, 3]], &[vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
        assert_eq!(dec.d.simplices(1), &[vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]);
        assert_eq!(dec.d.count(2), 0);

        let err = validate_decomposition(&x, &[vec![0, 1]], &[vec![0, 2]]).unwrap_err();
        assert!(matches!(err, Error::CoverFailure(s) if s == "[1,2]"));
        let err = validate_decomposition(&x, &[vec![0, 1, 2]], &[vec![0, 2]]).unwrap_err();
        assert!(matches!(err, Error::NotSubcomplex(_)));
    }
}
