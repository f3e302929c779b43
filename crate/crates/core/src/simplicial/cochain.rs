use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use super::{facets, simplex_name, GradedCoefficients, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::exactalg::rational::frac;
use crate::exactalg::{Int, IntMatrix, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellKind {
    Generator,
    Relator,
}

/// One coordinate of a graded cochain: a simplex paired with a generator or
/// relator slot of some coefficient group `G_m`.
///
/// A generator cell on a `j`-simplex has total degree `j + m`; a relator cell
/// has total degree `j + m - 1`. The differential is
/// `D(x, y) = (δx + R·y, -δy)` where `R` sends a relator to `d` times its
/// torsion generator. This complex computes cohomology with coefficients in
/// `G` and stays correct after tensoring with ℚ or ℚ/ℤ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub dim: usize,
    pub simplex: usize,
    pub coeff_degree: i64,
    pub kind: CellKind,
    pub slot: usize,
}

type CellKey = (Simplex, CellKind, usize);

/// Total cochain complex of a simplicial complex with graded coefficients.
pub struct CochainComplex {
    complex: SimplicialComplex,
    coeffs: GradedCoefficients,
    lo: i64,
    cells: Vec<Vec<Cell>>,
    lookup: Vec<HashMap<CellKey, usize>>,
    diffs: Vec<OnceLock<IntMatrix>>,
}

impl fmt::Debug for CochainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CochainComplex")
            .field("simplices", &self.complex.num_simplices())
            .field("coefficients", &self.coeffs.to_string())
            .finish()
    }
}

impl CochainComplex {
    pub fn new(complex: SimplicialComplex, coeffs: GradedCoefficients) -> Arc<Self> {
        let (lo, hi) = match (complex.dim(), coeffs.min_degree(), coeffs.max_degree()) {
            (Some(d), Some(mlo), Some(mhi)) => (mlo - 1, d as i64 + mhi),
            _ => (0, -1),
        };
        let mut cells = Vec::new();
        let mut lookup = Vec::new();
        for n in lo..=hi {
            let mut level = Vec::new();
            let mut map = HashMap::new();
            for j in 0..=complex.dim().unwrap_or(0) {
                let gen = coeffs.get(n - j as i64);
                let rel = coeffs.get(n - j as i64 + 1);
                for (si, s) in complex.simplices(j).iter().enumerate() {
                    if let Some(p) = gen {
                        for g in 0..p.generator_slots() {
                            map.insert((s.clone(), CellKind::Generator, g), level.len());
                            level.push(Cell {
                                dim: j,
                                simplex: si,
                                coeff_degree: n - j as i64,
                                kind: CellKind::Generator,
                                slot: g,
                            });
                        }
                    }
                    if let Some(p) = rel {
                        for r in 0..p.relator_slots() {
                            map.insert((s.clone(), CellKind::Relator, r), level.len());
                            level.push(Cell {
                                dim: j,
                                simplex: si,
                                coeff_degree: n - j as i64 + 1,
                                kind: CellKind::Relator,
                                slot: r,
                            });
                        }
                    }
                }
            }
            cells.push(level);
            lookup.push(map);
        }
        let diffs = (0..cells.len()).map(|_| OnceLock::new()).collect();
        Arc::new(CochainComplex { complex, coeffs, lo, cells, lookup, diffs })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn coefficients(&self) -> &GradedCoefficients {
        &self.coeffs
    }

    /// Inclusive range of degrees that can carry cells (empty when `lo > hi`).
    pub fn degree_range(&self) -> (i64, i64) {
        (self.lo, self.lo + self.cells.len() as i64 - 1)
    }

    fn slot(&self, n: i64) -> Option<usize> {
        let i = n - self.lo;
        (i >= 0 && (i as usize) < self.cells.len()).then_some(i as usize)
    }

    pub fn cells(&self, n: i64) -> &[Cell] {
        self.slot(n).map_or(&[], |i| self.cells[i].as_slice())
    }

    pub fn dim(&self, n: i64) -> usize {
        self.cells(n).len()
    }

    pub fn simplex_of(&self, cell: &Cell) -> &Simplex {
        &self.complex.simplices(cell.dim)[cell.simplex]
    }

    pub fn cell_index(&self, n: i64, simplex: &[usize], kind: CellKind, slot: usize) -> Option<usize> {
        let i = self.slot(n)?;
        self.lookup[i].get(&(simplex.to_vec(), kind, slot)).copied()
    }

    pub fn describe_cell(&self, cell: &Cell) -> String {
        let kind = match cell.kind {
            CellKind::Generator => "gen",
            CellKind::Relator => "rel",
        };
        format!("{} {kind}{} of G{}", simplex_name(self.simplex_of(cell)), cell.slot, cell.coeff_degree)
    }

    /// Differential `D_n: C^n → C^{n+1}` as a `dim(n+1) × dim(n)` matrix.
    pub fn differential(&self, n: i64) -> IntMatrix {
        match self.slot(n) {
            Some(i) => self.diffs[i].get_or_init(|| self.build_differential(n)).clone(),
            None => IntMatrix::zeros(self.dim(n + 1), 0),
        }
    }

    /// Borrowing variant of [`Self::differential`] for degrees inside the range.
    pub fn differential_ref(&self, n: i64) -> Option<&IntMatrix> {
        self.slot(n).map(|i| self.diffs[i].get_or_init(|| self.build_differential(n)))
    }

    fn build_differential(&self, n: i64) -> IntMatrix {
        let rows = self.cells(n + 1);
        let mut m = IntMatrix::zeros(rows.len(), self.dim(n));
        for (r, cell) in rows.iter().enumerate() {
            let tau = self.simplex_of(cell);
            let piece = self.coeffs.get(cell.coeff_degree).expect("cell has coefficients");
            for (i, face) in facets(tau).into_iter().enumerate() {
                let sign = if i % 2 == 0 { Int::one() } else { -Int::one() };
                let col = self.cell_index(n, &face, cell.kind, cell.slot).expect("face cell exists");
                m[(r, col)] = match cell.kind {
                    CellKind::Generator => sign,
                    CellKind::Relator => -sign,
                };
            }
            if cell.kind == CellKind::Generator {
                if let Some(d) = piece.slot_order(cell.slot) {
                    let t = cell.slot - piece.free;
                    let col = self.cell_index(n, tau, CellKind::Relator, t).expect("relator cell exists");
                    m[(r, col)] = d.clone();
                }
            }
        }
        m
    }

    /// For each cell of `sub` in degree `n`, its index in `self`.
    pub fn restriction_indices(&self, sub: &CochainComplex, n: i64) -> Result<Vec<usize>> {
        if sub.coeffs != self.coeffs {
            return Err(Error::Incompatible("restriction between different coefficient systems".into()));
        }
        sub.cells(n)
            .iter()
            .map(|c| {
                let s = sub.simplex_of(c);
                self.cell_index(n, s, c.kind, c.slot)
                    .ok_or_else(|| Error::NotSubcomplex(format!("{} is not in the ambient complex", simplex_name(s))))
            })
            .collect()
    }

    /// Restriction `C^n(self) → C^n(sub)` as a 0/1 matrix.
    pub fn restriction_matrix(&self, sub: &CochainComplex, n: i64) -> Result<IntMatrix> {
        let idx = self.restriction_indices(sub, n)?;
        let mut m = IntMatrix::zeros(idx.len(), self.dim(n));
        for (r, &c) in idx.iter().enumerate() {
            m[(r, c)] = Int::one();
        }
        Ok(m)
    }
}

/// Coefficient ring of a cochain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    Int,
    Rat,
    RatModInt,
}

/// A graded cochain of total degree `n` with values in ℤ, ℚ or ℚ/ℤ.
///
/// Values are stored as rationals; integral cochains hold integers and
/// ℚ/ℤ cochains hold representatives in `[0, 1)`.
#[derive(Clone)]
pub struct Cochain {
    space: Arc<CochainComplex>,
    degree: i64,
    ring: CoeffRing,
    values: Vec<Rat>,
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "Cochain({:?}, deg {}, [{}])", self.ring, self.degree, vals.join(", "))
    }
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        self.same_space(other) && self.degree == other.degree && self.ring == other.ring && self.values == other.values
    }
}

impl Cochain {
    pub fn zero(space: &Arc<CochainComplex>, degree: i64, ring: CoeffRing) -> Self {
        Cochain { space: space.clone(), degree, ring, values: vec![Rat::zero(); space.dim(degree)] }
    }

    pub fn new(space: &Arc<CochainComplex>, degree: i64, ring: CoeffRing, values: Vec<Rat>) -> Result<Self> {
        if values.len() != space.dim(degree) {
            return Err(Error::DimensionMismatch(format!(
                "degree {degree} cochain needs {} values, got {}",
                space.dim(degree),
                values.len()
            )));
        }
        if ring == CoeffRing::Int {
            if let Some(i) = values.iter().position(|v| !v.is_integer()) {
                return Err(Error::DimensionMismatch(format!(
                    "integral cochain has non-integer value at {}",
                    space.describe_cell(&space.cells(degree)[i])
                )));
            }
        }
        Ok(Cochain::from_raw(space, degree, ring, values))
    }

    pub fn from_ints(space: &Arc<CochainComplex>, degree: i64, values: &[Int]) -> Result<Self> {
        Cochain::new(space, degree, CoeffRing::Int, values.iter().map(|v| Rat::from_integer(v.clone())).collect())
    }

    fn from_raw(space: &Arc<CochainComplex>, degree: i64, ring: CoeffRing, mut values: Vec<Rat>) -> Self {
        if ring == CoeffRing::RatModInt {
            for v in &mut values {
                *v = frac(v);
            }
        }
        Cochain { space: space.clone(), degree, ring, values }
    }

    /// Builds a cochain from per-simplex value vectors. Each vector lists the
    /// generator slots of `G_{n-j}` and then the relator slots of `G_{n-j+1}`.
    pub fn from_simplex_map(
        space: &Arc<CochainComplex>,
        degree: i64,
        ring: CoeffRing,
        map: &BTreeMap<Simplex, Vec<Rat>>,
    ) -> Result<Self> {
        let mut values = vec![Rat::zero(); space.dim(degree)];
        for (s, vals) in map {
            if !space.complex().contains(s) {
                return Err(Error::NotSubcomplex(format!("{} is not a simplex of the complex", simplex_name(s))));
            }
            let idx = simplex_cells(space, degree, s);
            if idx.len() != vals.len() {
                return Err(Error::DimensionMismatch(format!(
                    "simplex {} carries {} values in degree {degree}, got {}",
                    simplex_name(s),
                    idx.len(),
                    vals.len()
                )));
            }
            for (i, v) in idx.into_iter().zip(vals) {
                values[i] = v.clone();
            }
        }
        Cochain::new(space, degree, ring, values)
    }

    /// Inverse of [`Self::from_simplex_map`], listing only simplices with a nonzero value.
    pub fn to_simplex_map(&self) -> BTreeMap<Simplex, Vec<Rat>> {
        let mut out = BTreeMap::new();
        for j in 0..=self.space.complex().dim().unwrap_or(0) {
            for s in self.space.complex().simplices(j) {
                let idx = simplex_cells(&self.space, self.degree, s);
                if idx.iter().any(|&i| !self.values[i].is_zero()) {
                    out.insert(s.clone(), idx.iter().map(|&i| self.values[i].clone()).collect());
                }
            }
        }
        out
    }

    pub fn space(&self) -> &Arc<CochainComplex> {
        &self.space
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn int_values(&self) -> Option<Vec<Int>> {
        self.values.iter().map(|v| v.is_integer().then(|| v.to_integer())).collect()
    }

    pub fn same_space(&self, other: &Cochain) -> bool {
        Arc::ptr_eq(&self.space, &other.space)
            || (self.space.complex == other.space.complex && self.space.coeffs == other.space.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Same values viewed in another ring (ℤ → ℚ is ρ, ℚ → ℚ/ℤ reduces mod 1).
    pub fn to_ring(&self, ring: CoeffRing) -> Result<Cochain> {
        if ring == CoeffRing::Int && !self.values.iter().all(|v| v.is_integer()) {
            return Err(Error::Incompatible("cochain is not integral".into()));
        }
        Ok(Cochain::from_raw(&self.space, self.degree, ring, self.values.clone()))
    }

    pub fn coboundary(&self) -> Cochain {
        let d = self.space.differential(self.degree);
        let vals = mul_int_rat(&d, &self.values);
        Cochain::from_raw(&self.space, self.degree + 1, self.ring, vals)
    }

    pub fn is_cocycle(&self) -> bool {
        self.coboundary().is_zero()
    }

    fn check_compatible(&self, other: &Cochain) {
        assert!(self.same_space(other) && self.degree == other.degree, "cochains live in different groups");
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        self.check_compatible(other);
        let vals = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Cochain::from_raw(&self.space, self.degree, self.ring, vals)
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.check_compatible(other);
        let vals = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Cochain::from_raw(&self.space, self.degree, self.ring, vals)
    }

    pub fn neg(&self) -> Cochain {
        Cochain::from_raw(&self.space, self.degree, self.ring, self.values.iter().map(|v| -v).collect())
    }

    pub fn scale(&self, k: &Rat) -> Cochain {
        let ring = if self.ring == CoeffRing::Int && !k.is_integer() { CoeffRing::Rat } else { self.ring };
        Cochain::from_raw(&self.space, self.degree, ring, self.values.iter().map(|v| v * k).collect())
    }

    /// Extends a cochain on a subcomplex by zero.
    pub fn extend_by_zero(&self, ambient: &Arc<CochainComplex>) -> Result<Cochain> {
        let idx = ambient.restriction_indices(&self.space, self.degree)?;
        let mut vals = vec![Rat::zero(); ambient.dim(self.degree)];
        for (v, i) in self.values.iter().zip(idx) {
            vals[i] = v.clone();
        }
        Ok(Cochain::from_raw(ambient, self.degree, self.ring, vals))
    }

    /// First cell where the cochain is nonzero, for error messages.
    pub fn first_nonzero(&self) -> Option<String> {
        let i = self.values.iter().position(|v| !v.is_zero())?;
        Some(self.space.describe_cell(&self.space.cells(self.degree)[i]))
    }
}

fn simplex_cells(space: &CochainComplex, degree: i64, s: &[usize]) -> Vec<usize> {
    let j = s.len() as i64 - 1;
    let mut idx = Vec::new();
    if let Some(p) = space.coefficients().get(degree - j) {
        idx.extend((0..p.generator_slots()).filter_map(|g| space.cell_index(degree, s, CellKind::Generator, g)));
    }
    if let Some(p) = space.coefficients().get(degree - j + 1) {
        idx.extend((0..p.relator_slots()).filter_map(|r| space.cell_index(degree, s, CellKind::Relator, r)));
    }
    idx
}

pub(crate) fn mul_int_rat(m: &IntMatrix, v: &[Rat]) -> Vec<Rat> {
    assert_eq!(m.cols(), v.len(), "matrix-vector shape mismatch");
    (0..m.rows())
        .map(|i| {
            m.row(i).iter().zip(v).fold(
                Rat::zero(),
                |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        acc + b * a
                    }
                },
            )
        })
        .collect()
}

/// Restriction to a subcomplex.
pub fn restrict_cochain(c: &Cochain, sub: &Arc<CochainComplex>) -> Result<Cochain> {
    let idx = c.space.restriction_indices(sub, c.degree)?;
    let vals = idx.into_iter().map(|i| c.values[i].clone()).collect();
    Ok(Cochain::from_raw(sub, c.degree, c.ring, vals))
}

/// The unique cochain on `x` restricting to `a` and `b`, which must agree on
/// the overlap and cover `x`.
pub fn glue_cochain(a: &Cochain, b: &Cochain, x: &Arc<CochainComplex>) -> Result<Cochain> {
    if a.degree != b.degree || a.ring != b.ring {
        return Err(Error::Incompatible("glued cochains differ in degree or ring".into()));
    }
    let n = a.degree;
    let ia = x.restriction_indices(&a.space, n)?;
    let ib = x.restriction_indices(&b.space, n)?;
    let mut vals: Vec<Option<Rat>> = vec![None; x.dim(n)];
    for (v, i) in a.values.iter().zip(ia) {
        vals[i] = Some(v.clone());
    }
    for (v, i) in b.values.iter().zip(ib) {
        match &vals[i] {
            Some(w) if w != v => {
                return Err(Error::GlueMismatch(simplex_name(x.simplex_of(&x.cells(n)[i]))));
            }
            _ => vals[i] = Some(v.clone()),
        }
    }
    let vals = vals
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::CoverFailure(simplex_name(x.simplex_of(&x.cells(n)[i])))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Cochain::from_raw(x, n, a.ring, vals))
}
