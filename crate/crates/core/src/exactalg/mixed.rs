//! Linear systems with some unknowns rational and some integral, and the
//! groups `(ℚ^a ⊕ ℤ^b) / L` they describe.

use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::{in_span, row_echelon, RowEchelon};
use super::snf::{smith_normal_form, SmithForm};
use super::{Int, IntMatrix, Rat, RatMatrix};

/// Solver for `A x + B z = y` with `x ∈ ℚ^n`, `z ∈ ℤ^m`.
///
/// Rows of the left null space of `A` eliminate `x`; each such row is scaled
/// so that its product with `B` is integral, which leaves an integer system
/// for `z` that is solved through its Smith form.
#[derive(Clone, Debug)]
pub struct MixedSystem {
    a: RatMatrix,
    b: RatMatrix,
    echelon: RowEchelon,
    eliminator: RatMatrix,
    snf: SmithForm,
}

/// Kernel of a mixed system: every solution of `A x + B z = 0` is a rational
/// combination of `rational` plus an integer combination of `lattice`.
#[derive(Clone, Debug, Default)]
pub struct MixedKernel {
    /// Directions `(x, 0)`.
    pub rational: Vec<Vec<Rat>>,
    /// Generators `(x, z)`.
    pub lattice: Vec<(Vec<Rat>, Vec<Int>)>,
}

impl MixedSystem {
    pub fn new(a: &RatMatrix, b: &RatMatrix) -> Self {
        assert_eq!(a.rows(), b.rows(), "mixed system blocks must have equal row counts");
        let echelon = row_echelon(a);
        let mut rows = Vec::new();
        for p in echelon.left_nullspace() {
            let pb: Vec<Rat> = (0..b.cols())
                .map(|j| p.iter().enumerate().fold(Rat::zero(), |acc, (i, pi)| acc + pi * &b[(i, j)]))
                .collect();
            let l = pb.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
            let scale = Rat::from_integer(l);
            rows.push(p.iter().map(|x| x * &scale).collect::<Vec<_>>());
        }
        let eliminator = RatMatrix::from_rows(a.rows(), rows);
        let int_system = eliminator.mul(b).to_int().expect("scaled rows are integral");
        let snf = smith_normal_form(&int_system);
        MixedSystem { a: a.clone(), b: b.clone(), echelon, eliminator, snf }
    }

    pub fn rational_unknowns(&self) -> usize {
        self.a.cols()
    }

    pub fn integer_unknowns(&self) -> usize {
        self.b.cols()
    }

    pub fn solve(&self, y: &[Rat]) -> Option<(Vec<Rat>, Vec<Int>)> {
        let c = self.eliminator.mul_vec(y);
        let c: Option<Vec<Int>> = c.into_iter().map(|v| v.is_integer().then(|| v.to_integer())).collect();
        let z = self.snf.solve(&c?)?;
        let bz = self.b.mul_vec(&z.iter().map(|v| Rat::from_integer(v.clone())).collect::<Vec<_>>());
        let rest: Vec<Rat> = y.iter().zip(&bz).map(|(u, v)| u - v).collect();
        let x = self.echelon.solve(&rest)?;
        Some((x, z))
    }

    pub fn kernel(&self) -> MixedKernel {
        let rational = self.echelon.nullspace();
        let lattice = self
            .snf
            .kernel_basis()
            .columns()
            .into_iter()
            .map(|z| {
                let bz = self.b.mul_vec(&z.iter().map(|v| Rat::from_integer(v.clone())).collect::<Vec<_>>());
                let neg: Vec<Rat> = bz.into_iter().map(|v| -v).collect();
                let x = self.echelon.solve(&neg).expect("eliminated system is consistent");
                (x, z)
            })
            .collect();
        MixedKernel { rational, lattice }
    }
}

/// The group `(ℚ^rat ⊕ ℤ^int) / L` for a lattice `L` given by generators.
///
/// Coordinates are vectors of length `rat + int` whose last `int` entries
/// are integers. Models ℤ-, ℚ- and ℚ/ℤ-cohomology groups uniformly.
#[derive(Clone, Debug)]
pub struct MixedGroup {
    rat: usize,
    int: usize,
    lattice: Vec<Vec<Rat>>,
    membership: MixedSystem,
}

impl MixedGroup {
    pub fn new(rat: usize, int: usize, lattice: Vec<Vec<Rat>>) -> Self {
        let n = rat + int;
        let l = RatMatrix::from_columns(n, &lattice);
        let membership = MixedSystem::new(&RatMatrix::zeros(n, 0), &l);
        MixedGroup { rat, int, lattice, membership }
    }

    pub fn dim(&self) -> usize {
        self.rat + self.int
    }

    pub fn rational_dim(&self) -> usize {
        self.rat
    }

    pub fn lattice(&self) -> &[Vec<Rat>] {
        &self.lattice
    }

    pub fn is_zero(&self, x: &[Rat]) -> bool {
        x.iter().all(Zero::is_zero) || self.membership.solve(x).is_some()
    }

    pub fn equal(&self, x: &[Rat], y: &[Rat]) -> bool {
        let d: Vec<Rat> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_zero(&d)
    }

    /// Unit vectors: the first `rat` are rational directions, the rest generators.
    fn unit(&self, i: usize) -> Vec<Rat> {
        let mut e = vec![Rat::zero(); self.dim()];
        e[i] = Rat::one();
        e
    }
}

/// Hom `(ℚ^a ⊕ ℤ^b)/L → (ℚ^c ⊕ ℤ^d)/L'` given by a rational matrix.
#[derive(Clone, Debug)]
pub struct MixedHom {
    pub domain: MixedGroup,
    pub codomain: MixedGroup,
    pub matrix: RatMatrix,
}

/// Result of checking exactness of `G₁ → G₂ → G₃` at `G₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessCheck {
    pub well_defined: bool,
    pub image_in_kernel: bool,
    pub kernel_in_image: bool,
    pub detail: Option<String>,
}

impl ExactnessCheck {
    pub fn passed(&self) -> bool {
        self.well_defined && self.image_in_kernel && self.kernel_in_image
    }
}

impl MixedHom {
    pub fn new(domain: MixedGroup, codomain: MixedGroup, matrix: RatMatrix) -> Self {
        assert_eq!(matrix.shape(), (codomain.dim(), domain.dim()), "mixed hom shape");
        MixedHom { domain, codomain, matrix }
    }

    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        self.matrix.mul_vec(x)
    }

    /// Rational directions must go to rational directions, generators to
    /// valid coordinates, and the domain lattice into the codomain lattice.
    pub fn well_defined(&self) -> Result<(), String> {
        let cr = self.codomain.rat;
        for j in 0..self.domain.dim() {
            let col = self.matrix.column(j);
            if j < self.domain.rat {
                if col[cr..].iter().any(|v| !v.is_zero()) {
                    return Err(format!("rational direction {j} has an integer component"));
                }
            } else if col[cr..].iter().any(|v| !v.is_integer()) {
                return Err(format!("generator {j} maps to a non-integral coordinate"));
            }
        }
        for (i, l) in self.domain.lattice.iter().enumerate() {
            if !self.codomain.is_zero(&self.apply(l)) {
                return Err(format!("lattice generator {i} does not map to zero"));
            }
        }
        Ok(())
    }

    /// Whether `y` is `f(x)` for some `x`.
    pub fn preimage(&self, y: &[Rat]) -> Option<Vec<Rat>> {
        let (a, b) = self.membership_blocks();
        let sys = MixedSystem::new(&a, &b);
        let (x, z) = sys.solve(y)?;
        let mut out = x;
        out.extend(z[..self.domain.int].iter().map(|v| Rat::from_integer(v.clone())));
        Some(out)
    }

    // [f_rat] and [f_int | L'] as blocks of the system f(x) + l = y
    fn membership_blocks(&self) -> (RatMatrix, RatMatrix) {
        let rat_idx: Vec<usize> = (0..self.domain.rat).collect();
        let int_idx: Vec<usize> = (self.domain.rat..self.domain.dim()).collect();
        let a = self.matrix.select_columns(&rat_idx);
        let l = RatMatrix::from_columns(self.codomain.dim(), &self.codomain.lattice);
        let b = self.matrix.select_columns(&int_idx).hstack(&l);
        (a, b)
    }

    /// Kernel directions and lattice generators, as domain coordinates.
    pub fn kernel(&self) -> MixedKernel {
        let rat_idx: Vec<usize> = (0..self.domain.rat).collect();
        let int_idx: Vec<usize> = (self.domain.rat..self.domain.dim()).collect();
        let a = self.matrix.select_columns(&rat_idx);
        let l = RatMatrix::from_columns(self.codomain.dim(), &self.codomain.lattice);
        let neg_l = l.map(|v| -v);
        let b = self.matrix.select_columns(&int_idx).hstack(&neg_l);
        let k = MixedSystem::new(&a, &b).kernel();
        let pad = |x: Vec<Rat>, z: &[Int]| {
            let mut v = x;
            v.extend(z[..self.domain.int].iter().map(|t| Rat::from_integer(t.clone())));
            v
        };
        let zeros = vec![Int::zero(); self.domain.int];
        MixedKernel {
            rational: k.rational.into_iter().map(|x| pad(x, &zeros)).collect(),
            lattice: k.lattice.into_iter().map(|(x, z)| (pad(x, &z), z)).collect(),
        }
    }
}

/// Checks exactness of `G₁ --f--> G₂ --g--> G₃` at `G₂`.
pub fn check_exact(f: &MixedHom, g: &MixedHom) -> ExactnessCheck {
    let mut detail = None;
    let well_defined = match f.well_defined().and_then(|_| g.well_defined()) {
        Ok(()) => true,
        Err(e) => {
            detail = Some(e);
            false
        }
    };
    let comp = g.matrix.mul(&f.matrix);
    let mut image_in_kernel = true;
    for j in 0..f.domain.dim() {
        let col = comp.column(j);
        let ok = if j < f.domain.rat { col.iter().all(Zero::is_zero) } else { g.codomain.is_zero(&col) };
        if !ok {
            image_in_kernel = false;
            detail.get_or_insert_with(|| format!("g∘f is nonzero on domain coordinate {j}"));
            break;
        }
    }
    let k = g.kernel();
    let rat_idx: Vec<usize> = (0..f.domain.rat).collect();
    let f_rat_cols = f.matrix.select_columns(&rat_idx).columns();
    let mut kernel_in_image = true;
    for u in &k.rational {
        if !in_span(&f_rat_cols, u) {
            kernel_in_image = false;
            detail.get_or_insert_with(|| "a rational kernel direction is not in the image".into());
        }
    }
    if kernel_in_image {
        let (a, b) = f.membership_blocks();
        let sys = MixedSystem::new(&a, &b);
        for (x, _) in &k.lattice {
            if sys.solve(x).is_none() {
                kernel_in_image = false;
                detail.get_or_insert_with(|| "a kernel element is not in the image".into());
                break;
            }
        }
    }
    ExactnessCheck { well_defined, image_in_kernel, kernel_in_image, detail }
}

impl MixedGroup {
    /// All coordinate unit vectors, rational directions first.
    pub fn units(&self) -> Vec<Vec<Rat>> {
        (0..self.dim()).map(|i| self.unit(i)).collect()
    }

    pub fn trivial() -> Self {
        MixedGroup::new(0, 0, Vec::new())
    }

    /// Convenience for a group presented by integer relations.
    pub fn from_relations(ngens: usize, relations: &IntMatrix) -> Self {
        let lattice = relations.to_rat().columns();
        MixedGroup::new(0, ngens, lattice)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn rm(rows: &[&[i64]]) -> RatMatrix {
        IntMatrix::from_i64(rows).to_rat()
    }

    #[test]
    fn mixed_solve_respects_integrality() {
        // x + 2z = y with x rational: always solvable
        let sys = MixedSystem::new(&rm(&[&[1]]), &rm(&[&[2]]));
        assert!(sys.solve(&[rat(1, 3)]).is_some());
        // 2z = y only: needs y even
        let sys = MixedSystem::new(&RatMatrix::zeros(1, 0), &rm(&[&[2]]));
        assert!(sys.solve(&[rat(4, 1)]).is_some());
        assert!(sys.solve(&[rat(3, 1)]).is_none());
        // rows: x = y0, x + z = y1 → z = y1 - y0 must be integral
        let sys = MixedSystem::new(&rm(&[&[1], &[1]]), &rm(&[&[0], &[1]]));
        let (x, z) = sys.solve(&[rat(1, 2), rat(5, 2)]).unwrap();
        assert_eq!(x, vec![rat(1, 2)]);
        assert_eq!(z, vec![Int::from(2)]);
        assert!(sys.solve(&[rat(1, 2), rat(1, 1)]).is_none());
    }

    #[test]
    fn mixed_solve_with_fractional_eliminator() {
        // 2x + z = y0, 3z = y1 (x rational): z = y1/3 must be an integer
        let a = rm(&[&[2], &[0]]);
        let b = RatMatrix::from_rows(1, vec![vec![rat(1, 2)], vec![rat(3, 1)]]);
        let sys = MixedSystem::new(&a, &b);
        assert!(sys.solve(&[rat(0, 1), rat(3, 1)]).is_some());
        assert!(sys.solve(&[rat(0, 1), rat(1, 1)]).is_none());
        let k = sys.kernel();
        assert_eq!(k.rational.len(), 0);
        assert_eq!(k.lattice.len(), 0);
    }

    #[test]
    fn kernel_of_mixed_system() {
        // x - z = 0
        let sys = MixedSystem::new(&rm(&[&[1]]), &rm(&[&[-1]]));
        let k = sys.kernel();
        assert!(k.rational.is_empty());
        assert_eq!(k.lattice.len(), 1);
        let (x, z) = &k.lattice[0];
        assert_eq!(x[0], Rat::from_integer(z[0].clone()));
    }

    #[test]
    fn exactness_of_short_sequences() {
        // 0 → ℤ --×2--> ℤ → ℤ/2 → 0
        let z = MixedGroup::new(0, 1, vec![]);
        let z2 = MixedGroup::new(0, 1, vec![vec![rat(2, 1)]]);
        let f = MixedHom::new(z.clone(), z.clone(), rm(&[&[2]]));
        let g = MixedHom::new(z.clone(), z2.clone(), rm(&[&[1]]));
        assert!(check_exact(&f, &g).passed());
        let g_bad = MixedHom::new(z.clone(), z2.clone(), rm(&[&[0]]));
        assert!(!check_exact(&f, &g_bad).passed());

        // ℤ → ℚ → ℚ/ℤ
        let q = MixedGroup::new(1, 0, vec![]);
        let qz = MixedGroup::new(1, 0, vec![vec![rat(1, 1)]]);
        let inc = MixedHom::new(z.clone(), q.clone(), rm(&[&[1]]));
        let proj = MixedHom::new(q.clone(), qz.clone(), rm(&[&[1]]));
        assert!(check_exact(&inc, &proj).passed());
        let twice = MixedHom::new(z, q.clone(), rm(&[&[2]]));
        assert!(!check_exact(&twice, &proj).passed());
    }

    #[test]
    fn ill_defined_mixed_hom() {
        let q = MixedGroup::new(1, 0, vec![]);
        let z = MixedGroup::new(0, 1, vec![]);
        let h = MixedHom::new(q, z, rm(&[&[1]]));
        assert!(h.well_defined().is_err());
    }
}
