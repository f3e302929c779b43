use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{Int, IntMatrix};

/// Smith decomposition `U · M · V = S` with `U`, `V` unimodular and `S`
/// diagonal with `d₁ | d₂ | … | d_rank`, all positive.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    /// Diagonal of `S`, length `min(rows, cols)`; entries past `rank` are zero.
    pub diagonal: Vec<Int>,
    pub rank: usize,
    rows: usize,
    cols: usize,
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap_rows(i, j);
            self.u.swap_rows(i, j);
            self.u_inv.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap_cols(i, j);
            self.v.swap_cols(i, j);
            self.v_inv.swap_rows(i, j);
        }
    }

    // row[target] += c * row[source]
    fn add_row(&mut self, target: usize, source: usize, c: &Int) {
        self.a.add_row_multiple(target, source, c);
        self.u.add_row_multiple(target, source, c);
        self.u_inv.add_col_multiple(source, target, &-c);
    }

    // col[target] += c * col[source]
    fn add_col(&mut self, target: usize, source: usize, c: &Int) {
        self.a.add_col_multiple(target, source, c);
        self.v.add_col_multiple(target, source, c);
        self.v_inv.add_row_multiple(source, target, &-c);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        for r in 0..self.u_inv.rows() {
            let x = &mut self.u_inv[(r, i)];
            *x = -std::mem::take(x);
        }
    }

    /// Smallest nonzero |entry| in the trailing block, lowest row then column on ties.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = m.shape();
    let mut r = Reducer {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = r.min_pivot(t) else { break };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        loop {
            let pivot = r.a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if r.a[(i, t)].is_zero() {
                    continue;
                }
                let q = r.a[(i, t)].div_floor(&pivot);
                r.add_row(i, t, &-q);
                clean &= r.a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if r.a[(t, j)].is_zero() {
                    continue;
                }
                let q = r.a[(t, j)].div_floor(&pivot);
                r.add_col(j, t, &-q);
                clean &= r.a[(t, j)].is_zero();
            }
            if !clean {
                // a remainder smaller than the pivot survived; restart with it
                let (pi, pj) = r.min_pivot(t).expect("nonzero remainder exists");
                r.swap_rows(t, pi);
                r.swap_cols(t, pj);
                continue;
            }
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !r.a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => r.add_row(t, i, &Int::from(1)),
                None => break,
            }
        }
        if r.a[(t, t)].is_negative() {
            r.negate_row(t);
        }
        t += 1;
    }
    let diagonal = (0..rows.min(cols)).map(|i| r.a[(i, i)].clone()).collect();
    SmithForm { u: r.u, u_inv: r.u_inv, v: r.v, v_inv: r.v_inv, diagonal, rank: t, rows, cols }
}

impl SmithForm {
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// The diagonal matrix `S`.
    pub fn s(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| if i == j { self.diagonal[i].clone() } else { Int::zero() })
    }

    /// Nonzero diagonal entries `d₁ | … | d_rank`.
    pub fn nonzero_diagonal(&self) -> &[Int] {
        &self.diagonal[..self.rank]
    }

    /// Integer solution of `M x = b`, if one exists.
    pub fn solve(&self, b: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let z = self.u.mul_vec(b);
        let mut y = vec![Int::zero(); self.cols];
        for (i, zi) in z.iter().enumerate() {
            if i < self.rank {
                let (q, rem) = zi.div_rem(&self.diagonal[i]);
                if !rem.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !zi.is_zero() {
                return None;
            }
        }
        Some(self.v.mul_vec(&y))
    }

    /// Columns form a basis of the integer kernel (a saturated lattice).
    pub fn kernel_basis(&self) -> IntMatrix {
        let idx: Vec<usize> = (self.rank..self.cols).collect();
        self.v.select_columns(&idx)
    }

    /// Left inverse of [`Self::kernel_basis`]: maps a kernel vector to its coordinates.
    pub fn kernel_coordinates(&self) -> IntMatrix {
        let idx: Vec<usize> = (self.rank..self.cols).collect();
        self.v_inv.select_rows(&idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    fn check_decomposition(m: &IntMatrix) -> SmithForm {
        let f = smith_normal_form(m);
        assert_eq!(f.u.mul(m).mul(&f.v), f.s());
        assert_eq!(f.u.mul(&f.u_inv), IntMatrix::identity(m.rows()));
        assert_eq!(f.v.mul(&f.v_inv), IntMatrix::identity(m.cols()));
        for w in f.nonzero_diagonal().windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        f
    }

    #[test]
    fn two_by_two_example() {
        // gcd elimination by hand: gcd of entries is 2, det = -8, so diag(2, 4)
        let f = check_decomposition(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]]));
        assert_eq!(f.diagonal, ints(&[2, 4]));
    }

    #[test]
    fn identity_is_fixed() {
        let id = IntMatrix::identity(2);
        let f = check_decomposition(&id);
        assert_eq!(f.s(), id);
        assert_eq!(f.u, id);
        assert_eq!(f.v, id);
    }

    #[test]
    fn zero_matrix_is_fixed() {
        let f = check_decomposition(&IntMatrix::from_i64(&[&[0]]));
        assert_eq!(f.s(), IntMatrix::from_i64(&[&[0]]));
        assert_eq!(f.rank, 0);
    }

    #[test]
    fn empty_shapes() {
        let f = check_decomposition(&IntMatrix::zeros(0, 3));
        assert_eq!(f.kernel_basis().shape(), (3, 3));
        let f = check_decomposition(&IntMatrix::zeros(2, 0));
        assert_eq!(f.solve(&ints(&[0, 0])), Some(vec![]));
        assert_eq!(f.solve(&ints(&[0, 1])), None);
    }

    #[test]
    fn solving_and_kernels() {
        let m = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        let f = check_decomposition(&m);
        let x = f.solve(&ints(&[1, 2])).unwrap();
        assert_eq!(m.mul_vec(&x), ints(&[1, 2]));
        assert_eq!(f.solve(&ints(&[1, 3])), None);
        let k = f.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        assert_eq!(f.kernel_coordinates().mul(&k), IntMatrix::identity(1));
    }

    #[test]
    fn deterministic_output() {
        let m = IntMatrix::from_i64(&[&[3, -6, 9], &[4, 2, -2], &[0, 5, 7]]);
        let a = smith_normal_form(&m);
        let b = smith_normal_form(&m);
        assert_eq!(a.u, b.u);
        assert_eq!(a.v, b.v);
        check_decomposition(&m);
    }
}
