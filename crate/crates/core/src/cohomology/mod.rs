//! Cohomology with ℤ, ℚ and ℚ/ℤ coefficients, the coefficient maps between
//! them, and the Mayer-Vietoris machinery.

mod mv;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

pub use mv::{exactness, square_sign, verify_diagram2, MvContext, MvMap, Piece, SquareSign};

use crate::error::{Error, Result};
use crate::exactalg::rational::{common_denominator, frac, to_rat_vec};
use crate::exactalg::{
    row_echelon, smith_normal_form, FgAbGroup, Int, IntMatrix, MixedGroup, Rat, RowEchelon, SmithForm,
};
use crate::simplicial::{Cochain, CochainComplex, CoeffRing, GradedCoefficients, SimplicialComplex};

#[derive(Default)]
struct DegreeCache {
    snf: OnceLock<Arc<SmithForm>>,
    echelon: OnceLock<Arc<RowEchelon>>,
    int: OnceLock<Arc<IntCohomology>>,
    qz: OnceLock<Arc<QzCohomology>>,
}

/// A cochain complex together with write-once caches of the factorizations
/// every cohomology computation on it needs.
pub struct Space {
    cc: Arc<CochainComplex>,
    caches: BTreeMap<i64, DegreeCache>,
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Space").field("cochains", &self.cc).finish()
    }
}

impl Space {
    pub fn new(cc: Arc<CochainComplex>) -> Arc<Self> {
        let (lo, hi) = cc.degree_range();
        let caches =
            if lo <= hi { (lo - 3..=hi + 3).map(|n| (n, DegreeCache::default())).collect() } else { BTreeMap::new() };
        Arc::new(Space { cc, caches })
    }

    pub fn from_parts(complex: SimplicialComplex, coeffs: GradedCoefficients) -> Arc<Self> {
        Space::new(CochainComplex::new(complex, coeffs))
    }

    pub fn cochains(&self) -> &Arc<CochainComplex> {
        &self.cc
    }

    pub fn complex(&self) -> &SimplicialComplex {
        self.cc.complex()
    }

    pub fn coefficients(&self) -> &GradedCoefficients {
        self.cc.coefficients()
    }

    pub fn dim(&self, n: i64) -> usize {
        self.cc.dim(n)
    }

    fn cached<T: Clone>(&self, n: i64, pick: impl Fn(&DegreeCache) -> &OnceLock<T>, make: impl FnOnce() -> T) -> T {
        match self.caches.get(&n) {
            Some(c) => pick(c).get_or_init(make).clone(),
            None => make(),
        }
    }

    /// Smith form of `D_n: C^n → C^{n+1}`.
    pub fn snf(&self, n: i64) -> Arc<SmithForm> {
        self.cached(n, |c| &c.snf, || Arc::new(smith_normal_form(&self.cc.differential(n))))
    }

    /// Rational row echelon form of `D_n`.
    pub fn echelon(&self, n: i64) -> Arc<RowEchelon> {
        self.cached(n, |c| &c.echelon, || Arc::new(row_echelon(&self.cc.differential(n).to_rat())))
    }

    pub fn int(&self, n: i64) -> Arc<IntCohomology> {
        self.cached(n, |c| &c.int, || Arc::new(IntCohomology::compute(self, n)))
    }

    pub fn qz(&self, n: i64) -> Arc<QzCohomology> {
        self.cached(n, |c| &c.qz, || Arc::new(QzCohomology::compute(self, n)))
    }

    pub fn group(&self, ring: CoeffRing, n: i64) -> CohGroup {
        match ring {
            CoeffRing::Int => CohGroup::Int(self.int(n)),
            CoeffRing::Rat => CohGroup::Rat(self.int(n)),
            CoeffRing::RatModInt => CohGroup::Qz(self.qz(n)),
        }
    }

    /// Integer `b` with `D_{n-1} b = x`.
    pub fn solve_int_coboundary(&self, n: i64, x: &[Int]) -> Option<Vec<Int>> {
        self.snf(n - 1).solve(x)
    }

    /// Rational `s` with `D_{n-1} s = x`.
    pub fn solve_rat_coboundary(&self, n: i64, x: &[Rat]) -> Option<Vec<Rat>> {
        self.echelon(n - 1).solve(x)
    }

    pub fn is_rat_cocycle(&self, n: i64, x: &[Rat]) -> bool {
        crate::simplicial::mul_int_rat(&self.cc.differential(n), x).iter().all(Zero::is_zero)
    }

    pub fn coboundary_rat(&self, n: i64, x: &[Rat]) -> Vec<Rat> {
        crate::simplicial::mul_int_rat(&self.cc.differential(n), x)
    }
}

/// `H^n(X; G)` with integer coefficients in canonical form.
///
/// Computed from the Smith form of `D_n`: its kernel basis `K` gives cocycle
/// coordinates, the image of `D_{n-1}` gives relations in those coordinates.
#[derive(Debug)]
pub struct IntCohomology {
    degree: i64,
    group: FgAbGroup,
    presentation: FgAbGroup,
    kernel: IntMatrix,
    kernel_coords: IntMatrix,
    reps: Vec<Vec<Int>>,
    torsion_witnesses: Vec<Vec<Int>>,
}

impl IntCohomology {
    fn compute(space: &Space, n: i64) -> Self {
        let snf = space.snf(n);
        let kernel = snf.kernel_basis();
        let kernel_coords = snf.kernel_coordinates();
        let relations = kernel_coords.mul(&space.cc.differential(n - 1));
        let presentation = FgAbGroup::new(relations);
        let group = FgAbGroup::from_invariants(presentation.invariant_factors(), presentation.free_rank());
        let reps: Vec<Vec<Int>> =
            presentation.canonical_generators_ambient().iter().map(|a| kernel.mul_vec(a)).collect();
        let prev = space.snf(n - 1);
        let torsion_witnesses = group
            .invariant_factors()
            .iter()
            .zip(&reps)
            .map(|(d, z)| {
                let target: Vec<Int> = z.iter().map(|x| x * d).collect();
                prev.solve(&target).expect("torsion generator has a coboundary multiple")
            })
            .collect();
        IntCohomology { degree: n, group, presentation, kernel, kernel_coords, reps, torsion_witnesses }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Canonical group; its generators are the canonical coordinates.
    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn torsion_count(&self) -> usize {
        self.group.invariant_factors().len()
    }

    pub fn free_rank(&self) -> usize {
        self.group.free_rank()
    }

    pub fn invariant_factors(&self) -> &[Int] {
        self.group.invariant_factors()
    }

    /// Cocycle representing canonical generator `i`.
    pub fn representative(&self, i: usize) -> &[Int] {
        &self.reps[i]
    }

    pub fn representatives(&self) -> &[Vec<Int>] {
        &self.reps
    }

    /// `y` with `D y = d·z` for the `i`-th torsion generator `z` of order `d`.
    pub fn torsion_witness(&self, i: usize) -> &[Int] {
        &self.torsion_witnesses[i]
    }

    pub fn is_cocycle(&self, x: &[Int]) -> bool {
        self.kernel.mul_vec(&self.kernel_coords.mul_vec(x)) == x
    }

    /// Canonical coordinates of the class of an integral cocycle.
    pub fn coords(&self, x: &[Int]) -> Result<Vec<Int>> {
        if x.len() != self.kernel.rows() {
            return Err(Error::DimensionMismatch(format!(
                "degree {} cochain has length {}, expected {}",
                self.degree,
                x.len(),
                self.kernel.rows()
            )));
        }
        let a = self.kernel_coords.mul_vec(x);
        if self.kernel.mul_vec(&a) != x {
            return Err(Error::NotCocycle(format!("degree {} cochain", self.degree)));
        }
        // the group's generators are the presentation's canonical generators
        Ok(self.presentation.from_ambient(&a))
    }

    /// A cocycle in the class with the given canonical coordinates.
    pub fn cocycle(&self, coords: &[Int]) -> Vec<Int> {
        let mut out = vec![Int::zero(); self.kernel.rows()];
        for (c, r) in coords.iter().zip(&self.reps) {
            if c.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(r) {
                *o += c * v;
            }
        }
        out
    }

    /// Rational coordinates of a rational cocycle in the basis `ch(free generators)`.
    pub fn rational_coords(&self, x: &[Rat]) -> Result<Vec<Rat>> {
        let l = common_denominator(x);
        let scaled: Vec<Int> = x.iter().map(|v| (v * Rat::from_integer(l.clone())).to_integer()).collect();
        let c = self.coords(&scaled)?;
        let t = self.torsion_count();
        Ok(c[t..].iter().map(|v| Rat::new(v.clone(), l.clone())).collect())
    }

    /// Rational cocycle representing the given rational coordinates.
    pub fn rational_cocycle(&self, coords: &[Rat]) -> Vec<Rat> {
        let t = self.torsion_count();
        let mut out = vec![Rat::zero(); self.kernel.rows()];
        for (c, r) in coords.iter().zip(&self.reps[t..]) {
            if c.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(r) {
                if !v.is_zero() {
                    *o += c * Rat::from_integer(v.clone());
                }
            }
        }
        out
    }

    pub fn cochain_len(&self) -> usize {
        self.kernel.rows()
    }
}

/// `H^n(X; G ⊗ ℚ/ℤ) ≅ (ℚ/ℤ)^r ⊕ Tor H^{n+1}(X; G)`.
///
/// Coordinates are `r` rationals in `[0, 1)` followed by torsion coordinates.
/// The torsion generators are realized by the sections `[-y/d]` where
/// `D y = d·z` for the torsion cocycle `z`; the Bockstein `b(u) = -[Dū]`
/// sends them to the canonical torsion generators.
#[derive(Debug)]
pub struct QzCohomology {
    degree: i64,
    int: Arc<IntCohomology>,
    next: Arc<IntCohomology>,
    snf: Arc<SmithForm>,
    differential: IntMatrix,
    sections: Vec<Vec<Rat>>,
}

impl QzCohomology {
    fn compute(space: &Space, n: i64) -> Self {
        let int = space.int(n);
        let next = space.int(n + 1);
        let sections = next
            .invariant_factors()
            .iter()
            .enumerate()
            .map(|(j, d)| next.torsion_witness(j).iter().map(|y| -Rat::new(y.clone(), d.clone())).collect())
            .collect();
        QzCohomology { degree: n, int, next, snf: space.snf(n), differential: space.cc.differential(n), sections }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn divisible_rank(&self) -> usize {
        self.int.free_rank()
    }

    pub fn torsion(&self) -> &[Int] {
        self.next.invariant_factors()
    }

    pub fn dim(&self) -> usize {
        self.divisible_rank() + self.torsion().len()
    }

    /// Rational lift of the section for torsion coordinate `j`.
    pub fn section(&self, j: usize) -> &[Rat] {
        &self.sections[j]
    }

    pub fn integral(&self) -> &Arc<IntCohomology> {
        &self.int
    }

    pub fn next_integral(&self) -> &Arc<IntCohomology> {
        &self.next
    }

    pub fn normalize(&self, mut c: Vec<Rat>) -> Vec<Rat> {
        let r = self.divisible_rank();
        for v in &mut c[..r] {
            *v = frac(v);
        }
        for (v, d) in c[r..].iter_mut().zip(self.torsion()) {
            let i = v.to_integer();
            *v = Rat::from_integer(num_integer::Integer::mod_floor(&i, d));
        }
        c
    }

    /// Torsion coordinates of `b(u) = -[Dū]`; errors if `ū` is not a cocycle mod ℤ.
    pub fn bockstein_coords(&self, lift: &[Rat]) -> Result<Vec<Int>> {
        let dv = crate::simplicial::mul_int_rat(&self.differential, lift);
        let neg: Option<Vec<Int>> = dv.iter().map(|v| v.is_integer().then(|| -v.to_integer())).collect();
        let neg = neg.ok_or_else(|| Error::NotFlatCocycle(format!("degree {} cochain", self.degree)))?;
        let c = self.next.coords(&neg)?;
        let t = self.next.torsion_count();
        debug_assert!(c[t..].iter().all(Zero::is_zero), "Bockstein image is torsion");
        Ok(c[..t].to_vec())
    }

    /// Coordinates of the class of a rational lift `ū` of a ℚ/ℤ-cocycle.
    pub fn coords(&self, lift: &[Rat]) -> Result<Vec<Rat>> {
        let t = self.bockstein_coords(lift)?;
        let mut u = lift.to_vec();
        for (tj, s) in t.iter().zip(&self.sections) {
            if tj.is_zero() {
                continue;
            }
            let tj = Rat::from_integer(tj.clone());
            for (a, b) in u.iter_mut().zip(s) {
                *a -= &tj * b;
            }
        }
        let du: Vec<Int> =
            crate::simplicial::mul_int_rat(&self.differential, &u).into_iter().map(|v| v.to_integer()).collect();
        let w = self
            .snf
            .solve(&du)
            .ok_or_else(|| Error::Internal("ℚ/ℤ class with zero Bockstein has no integral primitive".into()))?;
        for (a, b) in u.iter_mut().zip(&w) {
            *a -= Rat::from_integer(b.clone());
        }
        let q = self.int.rational_coords(&u)?;
        let mut out: Vec<Rat> = q.iter().map(frac).collect();
        out.extend(t.into_iter().map(Rat::from_integer));
        Ok(out)
    }

    /// A rational lift representing the given coordinates.
    pub fn lift(&self, coords: &[Rat]) -> Vec<Rat> {
        let r = self.divisible_rank();
        let mut out = self.int.rational_cocycle(&coords[..r]);
        for (c, s) in coords[r..].iter().zip(&self.sections) {
            if c.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(s) {
                *o += c * v;
            }
        }
        out
    }
}

/// A cohomology group of one of the three coefficient rings, seen as a
/// [`MixedGroup`]: rational coordinates first, then integer coordinates.
#[derive(Clone, Debug)]
pub enum CohGroup {
    Int(Arc<IntCohomology>),
    Rat(Arc<IntCohomology>),
    Qz(Arc<QzCohomology>),
}

impl CohGroup {
    pub fn ring(&self) -> CoeffRing {
        match self {
            CohGroup::Int(_) => CoeffRing::Int,
            CohGroup::Rat(_) => CoeffRing::Rat,
            CohGroup::Qz(_) => CoeffRing::RatModInt,
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            CohGroup::Int(h) | CohGroup::Rat(h) => h.degree,
            CohGroup::Qz(h) => h.degree,
        }
    }

    pub fn rational_dim(&self) -> usize {
        match self {
            CohGroup::Int(_) => 0,
            CohGroup::Rat(h) => h.free_rank(),
            CohGroup::Qz(h) => h.divisible_rank(),
        }
    }

    /// Orders of the integer coordinates (`0` for a free coordinate).
    pub fn integer_orders(&self) -> Vec<Int> {
        match self {
            CohGroup::Int(h) => {
                let mut v = h.invariant_factors().to_vec();
                v.extend(std::iter::repeat(Int::zero()).take(h.free_rank()));
                v
            }
            CohGroup::Rat(_) => Vec::new(),
            CohGroup::Qz(h) => h.torsion().to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rational_dim() + self.integer_orders().len()
    }

    /// Lattice `L` with the group equal to `(ℚ^rat ⊕ ℤ^int)/L`.
    pub fn lattice(&self) -> Vec<Vec<Rat>> {
        let r = self.rational_dim();
        let orders = self.integer_orders();
        let n = r + orders.len();
        let mut out = Vec::new();
        if matches!(self, CohGroup::Qz(_)) {
            for i in 0..r {
                let mut e = vec![Rat::zero(); n];
                e[i] = Rat::one();
                out.push(e);
            }
        }
        for (j, d) in orders.iter().enumerate() {
            if !d.is_zero() {
                let mut e = vec![Rat::zero(); n];
                e[r + j] = Rat::from_integer(d.clone());
                out.push(e);
            }
        }
        out
    }

    pub fn mixed(&self) -> MixedGroup {
        MixedGroup::new(self.rational_dim(), self.integer_orders().len(), self.lattice())
    }

    /// The integral group, for the ℤ row.
    pub fn fg_group(&self) -> Option<&FgAbGroup> {
        match self {
            CohGroup::Int(h) => Some(h.group()),
            _ => None,
        }
    }

    /// Human-readable isomorphism type, e.g. `Z/2 + Z`, `Q^2`, `(Q/Z) + Z/2`.
    pub fn describe(&self) -> String {
        match self {
            CohGroup::Int(h) => h.group().to_string(),
            CohGroup::Rat(h) => match h.free_rank() {
                0 => "0".into(),
                1 => "Q".into(),
                r => format!("Q^{r}"),
            },
            CohGroup::Qz(h) => {
                let mut parts = Vec::new();
                match h.divisible_rank() {
                    0 => {}
                    1 => parts.push("Q/Z".to_string()),
                    r => parts.push(format!("(Q/Z)^{r}")),
                }
                parts.extend(h.torsion().iter().map(|d| format!("Z/{d}")));
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join(" + ")
                }
            }
        }
    }

    /// Coordinates of the class of a cocycle (for ℚ/ℤ, of a rational lift).
    pub fn coords(&self, x: &[Rat]) -> Result<Vec<Rat>> {
        match self {
            CohGroup::Int(h) => {
                let ints: Vec<Int> = x
                    .iter()
                    .map(|v| v.is_integer().then(|| v.to_integer()))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::Incompatible("integral class needs an integral cochain".into()))?;
                Ok(to_rat_vec(&h.coords(&ints)?))
            }
            CohGroup::Rat(h) => h.rational_coords(x),
            CohGroup::Qz(h) => h.coords(x),
        }
    }

    /// Exact coordinates of the image of a rational direction: a rational
    /// cocycle whose multiples are all tracked (used for ℚ/ℤ divisible parts).
    pub fn direction_coords(&self, x: &[Rat]) -> Result<Vec<Rat>> {
        match self {
            CohGroup::Qz(h) => {
                let mut q = h.int.rational_coords(x)?;
                q.extend(std::iter::repeat(Rat::zero()).take(h.torsion().len()));
                Ok(q)
            }
            _ => self.coords(x),
        }
    }

    /// One cochain per coordinate: rational directions get rational cocycles,
    /// integer coordinates get generator representatives (rational lifts for ℚ/ℤ).
    pub fn unit_lifts(&self) -> Vec<Vec<Rat>> {
        match self {
            CohGroup::Int(h) => h.reps.iter().map(|r| to_rat_vec(r)).collect(),
            CohGroup::Rat(h) => h.reps[h.torsion_count()..].iter().map(|r| to_rat_vec(r)).collect(),
            CohGroup::Qz(h) => {
                let t = h.int.torsion_count();
                let mut out: Vec<Vec<Rat>> = h.int.reps[t..].iter().map(|r| to_rat_vec(r)).collect();
                out.extend(h.sections.iter().cloned());
                out
            }
        }
    }

    /// A cochain (rational lift for ℚ/ℤ) representing the given coordinates.
    pub fn lift(&self, coords: &[Rat]) -> Vec<Rat> {
        let units = self.unit_lifts();
        let len = self.cochain_len();
        let mut out = vec![Rat::zero(); len];
        for (c, u) in coords.iter().zip(&units) {
            if c.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(u) {
                if !v.is_zero() {
                    *o += c * v;
                }
            }
        }
        out
    }

    fn cochain_len(&self) -> usize {
        match self {
            CohGroup::Int(h) | CohGroup::Rat(h) => h.cochain_len(),
            CohGroup::Qz(h) => h.int.cochain_len(),
        }
    }

    /// Canonical reduced form of coordinates.
    pub fn normalize(&self, c: Vec<Rat>) -> Vec<Rat> {
        match self {
            CohGroup::Int(h) => {
                let ints: Vec<Int> = c.iter().map(|v| v.to_integer()).collect();
                to_rat_vec(&h.group().reduce(ints))
            }
            CohGroup::Rat(_) => c,
            CohGroup::Qz(h) => h.normalize(c),
        }
    }
}

/// An element of a cohomology group in canonical coordinates.
#[derive(Clone, Debug)]
pub struct CohClass {
    pub group: CohGroup,
    pub coords: Vec<Rat>,
}

impl CohClass {
    pub fn new(group: CohGroup, coords: Vec<Rat>) -> Self {
        let coords = group.normalize(coords);
        CohClass { group, coords }
    }

    pub fn of_cochain(group: CohGroup, c: &Cochain) -> Result<Self> {
        let coords = group.coords(c.values())?;
        Ok(CohClass::new(group, coords))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn representative(&self, space: &Arc<CochainComplex>) -> Result<Cochain> {
        let vals = self.group.lift(&self.coords);
        Cochain::new(space, self.group.degree(), self.group.ring(), vals)
    }
}

impl PartialEq for CohClass {
    fn eq(&self, other: &Self) -> bool {
        self.group.ring() == other.group.ring()
            && self.group.degree() == other.group.degree()
            && self.coords == other.coords
    }
}

/// `ch: H^n(ℤ) → H^n(ℚ)` on canonical coordinates: keeps the free part.
pub fn ch(x: &CohClass, space: &Space) -> CohClass {
    let h = space.int(x.group.degree());
    let t = h.torsion_count();
    CohClass::new(CohGroup::Rat(h), x.coords[t..].to_vec())
}

/// `p: H^n(ℚ) → H^n(ℚ/ℤ)`: reduce mod the lattice.
pub fn mod_lattice_p(s: &CohClass, space: &Space) -> CohClass {
    let g = space.qz(s.group.degree());
    let mut c = s.coords.clone();
    c.extend(std::iter::repeat(Rat::zero()).take(g.torsion().len()));
    CohClass::new(CohGroup::Qz(g), c)
}

/// `b: H^n(ℚ/ℤ) → H^{n+1}(ℤ)`, `b(u) = -[Dū]`.
pub fn bockstein(u: &CohClass, space: &Space) -> CohClass {
    let n = u.group.degree();
    let g = space.qz(n);
    let next = space.int(n + 1);
    let r = g.divisible_rank();
    let mut c: Vec<Rat> = u.coords[r..].to_vec();
    c.extend(std::iter::repeat(Rat::zero()).take(next.free_rank()));
    CohClass::new(CohGroup::Int(next), c)
}

/// Rational basis of `H^n(ℚ)` together with generators of `Im(ch)`.
///
/// The basis is `ch` of the free integral generators, so `Im(ch)` is the
/// standard lattice `ℤ^r` in these coordinates.
#[derive(Clone, Debug)]
pub struct LatticeData {
    pub degree: i64,
    pub basis: Vec<Vec<Rat>>,
    pub lattice_generators: Vec<Vec<Rat>>,
}

pub fn lattice_data(space: &Space, n: i64) -> LatticeData {
    let h = space.int(n);
    let r = h.free_rank();
    let basis = h.reps[h.torsion_count()..].iter().map(|v| to_rat_vec(v)).collect();
    let lattice_generators =
        (0..r).map(|i| (0..r).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect();
    LatticeData { degree: n, basis, lattice_generators }
}

impl LatticeData {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Whether rational coordinates lie in `Im(ch)`.
    pub fn contains(&self, coords: &[Rat]) -> bool {
        coords.iter().all(|c| c.is_integer())
    }
}

/// Whether a rational cochain is closed with class in `Im(ch)`.
pub fn in_lambda_j(space: &Space, n: i64, x: &[Rat]) -> Result<bool> {
    if !space.is_rat_cocycle(n, x) {
        return Ok(false);
    }
    Ok(space.int(n).rational_coords(x)?.iter().all(|c| c.is_integer()))
}

pub fn cohomology_group(space: &Space, n: i64, ring: CoeffRing) -> CohGroup {
    space.group(ring, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn space(maximal: &[&[usize]]) -> Arc<Space> {
        Space::from_parts(SimplicialComplex::from_simplices(maximal), GradedCoefficients::integers())
    }

    fn rp2() -> Arc<Space> {
        let tris: [[usize; 3]; 10] = [
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 1, 5],
            [1, 2, 4],
            [1, 3, 4],
            [1, 3, 5],
            [2, 3, 5],
            [2, 4, 5],
        ];
        let refs: Vec<&[usize]> = tris.iter().map(|t| t.as_slice()).collect();
        space(&refs)
    }

    #[test]
    fn golden_groups() {
        assert_eq!(space(&[&[0]]).int(0).group().to_string(), "Z");
        let circle = space(&[&[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!(circle.int(0).group().to_string(), "Z");
        assert_eq!(circle.int(1).group().to_string(), "Z");
        assert_eq!(circle.int(2).group().to_string(), "0");
        let p = rp2();
        assert_eq!(p.int(0).group().to_string(), "Z");
        assert_eq!(p.int(1).group().to_string(), "0");
        assert_eq!(p.int(2).group().to_string(), "Z/2");
        assert_eq!(p.group(CoeffRing::RatModInt, 1).describe(), "Z/2");
    }

    #[test]
    fn bockstein_of_rp2_flat_generator() {
        let p = rp2();
        let g = CohGroup::Qz(p.qz(1));
        let u = CohClass::new(g.clone(), vec![rat(1, 1)]);
        let b = bockstein(&u, &p);
        assert_eq!(b.coords, vec![rat(1, 1)]);
        // coordinates recovered from the lift
        let lift = g.lift(&u.coords);
        assert_eq!(g.coords(&lift).unwrap(), vec![rat(1, 1)]);
    }

    #[test]
    fn ch_and_p_on_circle() {
        let circle = space(&[&[0, 1], &[1, 2], &[0, 2]]);
        let gen = CohClass::new(CohGroup::Int(circle.int(1)), vec![rat(1, 1)]);
        let c = ch(&gen, &circle);
        assert_eq!(c.coords, vec![rat(1, 1)]);
        assert!(mod_lattice_p(&c, &circle).is_zero());
        let half = CohClass::new(CohGroup::Rat(circle.int(1)), vec![rat(1, 2)]);
        let p = mod_lattice_p(&half, &circle);
        assert_eq!(p.coords, vec![rat(1, 2)]);
        assert!(bockstein(&p, &circle).is_zero());
        // constant 1/2 in degree 0 is a rational cocycle, so its Bockstein vanishes
        let g0 = CohGroup::Qz(circle.qz(0));
        let lift = vec![rat(1, 2); 3];
        assert_eq!(g0.coords(&lift).unwrap(), vec![rat(1, 2)]);
    }

    #[test]
    fn torsion_coefficients_on_a_point() {
        let g = GradedCoefficients::from_parts(&[(0, 1, vec![Int::from(2)])]).unwrap();
        let pt = Space::from_parts(SimplicialComplex::from_simplices([[0]]), g);
        assert_eq!(pt.int(0).group().to_string(), "Z/2 + Z");
        assert_eq!(CohGroup::Rat(pt.int(0)).describe(), "Q");
        assert_eq!(CohGroup::Qz(pt.qz(0)).describe(), "Q/Z");
        assert_eq!(CohGroup::Qz(pt.qz(-1)).describe(), "Z/2");
    }
}
