use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Int, Rat, RatMatrix};

/// Reduced row echelon form `E · A = R` over the rationals, with the
/// invertible transform `E` kept so that solvability and left null spaces
/// can be read off later.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    rref: RatMatrix,
    transform: RatMatrix,
    pivots: Vec<usize>,
}

pub fn row_echelon(a: &RatMatrix) -> RowEchelon {
    let (rows, cols) = a.shape();
    let mut r = a.clone();
    let mut e = RatMatrix::identity(rows);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !r[(i, col)].is_zero()) else { continue };
        r.swap_rows(row, p);
        e.swap_rows(row, p);
        let inv = r[(row, col)].recip();
        scale_row(&mut r, row, &inv);
        scale_row(&mut e, row, &inv);
        for i in 0..rows {
            if i != row && !r[(i, col)].is_zero() {
                let f = -r[(i, col)].clone();
                add_row(&mut r, i, row, &f);
                add_row(&mut e, i, row, &f);
            }
        }
        pivots.push(col);
        row += 1;
    }
    RowEchelon { rref: r, transform: e, pivots }
}

fn scale_row(m: &mut RatMatrix, i: usize, f: &Rat) {
    for x in m.row_mut(i) {
        if !x.is_zero() {
            *x *= f;
        }
    }
}

fn add_row(m: &mut RatMatrix, target: usize, source: usize, f: &Rat) {
    for j in 0..m.cols() {
        if !m[(source, j)].is_zero() {
            let p = &m[(source, j)] * f;
            m[(target, j)] += p;
        }
    }
}

impl RowEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rref(&self) -> &RatMatrix {
        &self.rref
    }

    /// Some solution of `A x = y` (free variables set to zero), if consistent.
    pub fn solve(&self, y: &[Rat]) -> Option<Vec<Rat>> {
        let ey = self.transform.mul_vec(y);
        if ey[self.rank()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.rref.cols()];
        for (i, &p) in self.pivots.iter().enumerate() {
            x[p] = ey[i].clone();
        }
        Some(x)
    }

    /// Basis of the right null space, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let cols = self.rref.cols();
        let mut is_pivot = vec![false; cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Rat::zero(); cols];
                v[f] = Rat::one();
                for (i, &p) in self.pivots.iter().enumerate() {
                    v[p] = -self.rref[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Rows spanning the left null space `{p : p A = 0}`.
    pub fn left_nullspace(&self) -> Vec<Vec<Rat>> {
        (self.rank()..self.transform.rows()).map(|i| self.transform.row(i).to_vec()).collect()
    }
}

pub fn rank(a: &RatMatrix) -> usize {
    row_echelon(a).rank()
}

/// Least common multiple of the denominators.
pub fn common_denominator(v: &[Rat]) -> Int {
    v.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction (first nonzero entry keeps its sign).
pub fn primitive_integer_vector(v: &[Rat]) -> Vec<Int> {
    let l = common_denominator(v);
    let ints: Vec<Int> = v.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// `true` when `v` lies in the rational span of `generators`.
pub fn in_span(generators: &[Vec<Rat>], v: &[Rat]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    let m = RatMatrix::from_columns(v.len(), generators);
    row_echelon(&m).solve(v).is_some()
}

pub fn to_rat_vec(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

pub fn to_int_vec(v: &[Rat]) -> Option<Vec<Int>> {
    v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rat) -> Rat {
    x - x.floor()
}

pub fn is_integral(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn abs_max(v: &[Rat]) -> Rat {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Rat::zero)
}
