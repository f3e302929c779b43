use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::snf::{smith_normal_form, SmithForm};
use super::{Int, IntMatrix};
use crate::error::{Error, Result};

/// Finitely generated abelian group `ℤ^ngens / relations·ℤ^m`.
///
/// Elements are handled in *canonical coordinates*: one coordinate per
/// invariant factor `d ≥ 2` (reduced into `[0, d)`), followed by one
/// unbounded coordinate per free summand. Equal elements have equal
/// coordinate vectors.
#[derive(Clone, Debug)]
pub struct FgAbGroup {
    ngens: usize,
    relations: IntMatrix,
    torsion: Vec<Int>,
    free_rank: usize,
    to_canon: IntMatrix,
    from_canon: IntMatrix,
}

impl FgAbGroup {
    /// Group presented by `relations` (columns are relators in `ℤ^ngens`).
    pub fn new(relations: IntMatrix) -> Self {
        let ngens = relations.rows();
        let snf = smith_normal_form(&relations);
        let mut keep = Vec::new();
        let mut torsion = Vec::new();
        let mut free_rank = 0;
        for i in 0..ngens {
            if i < snf.rank {
                if !snf.diagonal[i].is_one() {
                    keep.push(i);
                    torsion.push(snf.diagonal[i].clone());
                }
            } else {
                keep.push(i);
                free_rank += 1;
            }
        }
        let to_canon = snf.u.select_rows(&keep);
        let from_canon = snf.u_inv.select_columns(&keep);
        FgAbGroup { ngens, relations, torsion, free_rank, to_canon, from_canon }
    }

    /// `ℤ/d₁ ⊕ … ⊕ ℤ/d_t ⊕ ℤ^free`. When the factors already form a
    /// divisibility chain of entries `≥ 2` the generators are the canonical ones.
    pub fn from_invariants(torsion: &[Int], free_rank: usize) -> Self {
        let n = torsion.len() + free_rank;
        let mut rel = IntMatrix::zeros(n, torsion.len());
        for (j, d) in torsion.iter().enumerate() {
            rel[(j, j)] = d.clone();
        }
        FgAbGroup::new(rel)
    }

    pub fn trivial() -> Self {
        FgAbGroup::new(IntMatrix::zeros(0, 0))
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup::new(IntMatrix::zeros(rank, 0))
    }

    pub fn cyclic(order: i64) -> Self {
        FgAbGroup::new(IntMatrix::from_i64(&[&[order]]))
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        FgAbGroup::new(self.relations.block_diag(&other.relations))
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// Invariant factors `d₁ | d₂ | …`, all `≥ 2`.
    pub fn invariant_factors(&self) -> &[Int] {
        &self.torsion
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// Number of canonical coordinates.
    pub fn dim(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<Int> {
        self.is_finite().then(|| self.torsion.iter().fold(Int::one(), |a, d| a * d))
    }

    pub fn torsion_order(&self) -> Int {
        self.torsion.iter().fold(Int::one(), |a, d| a * d)
    }

    /// Same invariants (isomorphic groups).
    pub fn is_isomorphic(&self, other: &FgAbGroup) -> bool {
        self.torsion == other.torsion && self.free_rank == other.free_rank
    }

    pub fn zero(&self) -> Vec<Int> {
        vec![Int::zero(); self.dim()]
    }

    /// Normalizes canonical coordinates.
    pub fn reduce(&self, mut e: Vec<Int>) -> Vec<Int> {
        assert_eq!(e.len(), self.dim(), "element has wrong number of coordinates");
        for (x, d) in e.iter_mut().zip(&self.torsion) {
            *x = x.mod_floor(d);
        }
        e
    }

    pub fn from_ambient(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.ngens, "ambient vector has wrong length");
        self.reduce(self.to_canon.mul_vec(x))
    }

    /// A representative in generator coordinates.
    pub fn to_ambient(&self, e: &[Int]) -> Vec<Int> {
        self.from_canon.mul_vec(e)
    }

    /// Canonical generators written in ambient coordinates.
    pub fn canonical_generators_ambient(&self) -> Vec<Vec<Int>> {
        self.from_canon.columns()
    }

    pub fn unit(&self, i: usize) -> Vec<Int> {
        let mut e = self.zero();
        e[i] = Int::one();
        self.reduce(e)
    }

    pub fn generators(&self) -> Vec<Vec<Int>> {
        (0..self.dim()).map(|i| self.unit(i)).collect()
    }

    pub fn add(&self, a: &[Int], b: &[Int]) -> Vec<Int> {
        self.reduce(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &[Int], b: &[Int]) -> Vec<Int> {
        self.reduce(a.iter().zip(b).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &[Int]) -> Vec<Int> {
        self.reduce(a.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, a: &[Int], k: &Int) -> Vec<Int> {
        self.reduce(a.iter().map(|x| x * k).collect())
    }

    pub fn combine(&self, coeffs: &[Int], elems: &[Vec<Int>]) -> Vec<Int> {
        let mut acc = vec![Int::zero(); self.dim()];
        for (c, e) in coeffs.iter().zip(elems) {
            for (a, x) in acc.iter_mut().zip(e) {
                *a += c * x;
            }
        }
        self.reduce(acc)
    }

    pub fn is_zero(&self, e: &[Int]) -> bool {
        e.iter().all(Zero::is_zero)
    }

    pub fn is_torsion_element(&self, e: &[Int]) -> bool {
        e[self.torsion.len()..].iter().all(Zero::is_zero)
    }

    /// Order of an element, `None` for infinite order.
    pub fn element_order(&self, e: &[Int]) -> Option<Int> {
        if !self.is_torsion_element(e) {
            return None;
        }
        Some(e.iter().zip(&self.torsion).fold(Int::one(), |acc, (x, d)| {
            let o = d / x.gcd(d);
            acc.lcm(&o)
        }))
    }

    /// All elements of a finite group in lexicographic coordinate order.
    pub fn enumerate(&self) -> Option<Vec<Vec<Int>>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = vec![Vec::new()];
        for d in &self.torsion {
            let mut next = Vec::new();
            for prefix in &out {
                let mut k = Int::zero();
                while &k < d {
                    let mut e = prefix.clone();
                    e.push(k.clone());
                    next.push(e);
                    k += 1;
                }
            }
            out = next;
        }
        Some(out)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Homomorphism given by an integer matrix on ambient generators.
#[derive(Clone, Debug)]
pub struct AbHom {
    domain: FgAbGroup,
    codomain: FgAbGroup,
    matrix: IntMatrix,
}

impl AbHom {
    /// Checks that every domain relator lands in the codomain relation lattice.
    pub fn new(domain: FgAbGroup, codomain: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.shape() != (codomain.ngens, domain.ngens) {
            return Err(Error::DimensionMismatch(format!(
                "hom matrix is {:?}, expected {}x{}",
                matrix.shape(),
                codomain.ngens,
                domain.ngens
            )));
        }
        let lattice = smith_normal_form(&codomain.relations);
        for (j, rel) in matrix.mul(&domain.relations).columns().into_iter().enumerate() {
            if lattice.solve(&rel).is_none() {
                return Err(Error::IllDefinedHom(format!("relator {j} does not map to zero")));
            }
        }
        Ok(AbHom { domain, codomain, matrix })
    }

    /// Builds the hom sending ambient generator `j` of `domain` to `images[j]`
    /// (canonical coordinates in `codomain`).
    pub fn from_images(domain: FgAbGroup, codomain: FgAbGroup, images: &[Vec<Int>]) -> Result<Self> {
        assert_eq!(images.len(), domain.ngens, "one image per generator");
        let cols: Vec<Vec<Int>> = images.iter().map(|y| codomain.to_ambient(y)).collect();
        let m = IntMatrix::from_columns(codomain.ngens, &cols);
        AbHom::new(domain, codomain, m)
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        AbHom { domain: g.clone(), codomain: g.clone(), matrix: IntMatrix::identity(g.ngens) }
    }

    pub fn zero(domain: FgAbGroup, codomain: FgAbGroup) -> Self {
        let matrix = IntMatrix::zeros(codomain.ngens, domain.ngens);
        AbHom { domain, codomain, matrix }
    }

    pub fn domain(&self) -> &FgAbGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FgAbGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, e: &[Int]) -> Vec<Int> {
        self.codomain.from_ambient(&self.matrix.mul_vec(&self.domain.to_ambient(e)))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &AbHom) -> Result<AbHom> {
        // first's codomain and self's domain may use different presentations
        // of the same group only if they are literally the same presentation
        if first.codomain.relations != self.domain.relations {
            return Err(Error::Incompatible("composition across different presentations".into()));
        }
        Ok(AbHom {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.mul(&first.matrix),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.domain.generators().iter().all(|g| self.codomain.is_zero(&self.apply(g)))
    }

    /// Images of the canonical domain generators, in canonical coordinates.
    pub fn generator_images(&self) -> Vec<Vec<Int>> {
        self.domain.generators().iter().map(|g| self.apply(g)).collect()
    }

    /// `x` with `f(x) = y`, or `None` when `y` is not in the image.
    pub fn preimage(&self, y: &[Int]) -> Option<Vec<Int>> {
        let system = self.matrix.hstack(&self.codomain.relations);
        let sol = smith_normal_form(&system).solve(&self.codomain.to_ambient(y))?;
        Some(self.domain.from_ambient(&sol[..self.domain.ngens]))
    }

    pub fn kernel(&self) -> Subgroup {
        let system = self.matrix.hstack(&self.codomain.relations);
        let k = smith_normal_form(&system).kernel_basis();
        let gens: Vec<Vec<Int>> = k.columns().into_iter().map(|c| c[..self.domain.ngens].to_vec()).collect();
        Subgroup::from_ambient(&self.domain, gens)
    }

    pub fn image(&self) -> Subgroup {
        let gens = self.domain.generators().iter().map(|g| self.apply(g)).collect::<Vec<_>>();
        Subgroup::generated_by(&self.codomain, &gens)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.codomain.generators().iter().all(|g| self.preimage(g).is_some())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// Subgroup of `parent` generated by a finite list, with its own presentation.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: FgAbGroup,
    /// Generators in ambient parent coordinates.
    generators: Vec<Vec<Int>>,
    group: FgAbGroup,
    solver: SmithForm,
}

impl Subgroup {
    /// Generators given in canonical parent coordinates.
    pub fn generated_by(parent: &FgAbGroup, gens: &[Vec<Int>]) -> Subgroup {
        let amb = gens.iter().filter(|g| !parent.is_zero(g)).map(|g| parent.to_ambient(g)).collect();
        Subgroup::from_ambient(parent, amb)
    }

    fn from_ambient(parent: &FgAbGroup, gens: Vec<Vec<Int>>) -> Subgroup {
        let mut generators: Vec<Vec<Int>> = Vec::new();
        let mut seen: Vec<Vec<Int>> = Vec::new();
        for g in gens {
            let c = parent.from_ambient(&g);
            if parent.is_zero(&c) || seen.contains(&c) {
                continue;
            }
            seen.push(c);
            generators.push(g);
        }
        let h = IntMatrix::from_columns(parent.ngens, &generators);
        let system = h.hstack(&parent.relations);
        let solver = smith_normal_form(&system);
        let s = generators.len();
        let k = solver.kernel_basis();
        let rel_cols: Vec<Vec<Int>> = k.columns().into_iter().map(|c| c[..s].to_vec()).collect();
        let group = FgAbGroup::new(IntMatrix::from_columns(s, &rel_cols));
        Subgroup { parent: parent.clone(), generators, group, solver }
    }

    pub fn parent(&self) -> &FgAbGroup {
        &self.parent
    }

    /// The subgroup as an abstract group (on its generators).
    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn generators_ambient(&self) -> &[Vec<Int>] {
        &self.generators
    }

    /// Generators in canonical parent coordinates.
    pub fn generators(&self) -> Vec<Vec<Int>> {
        self.generators.iter().map(|g| self.parent.from_ambient(g)).collect()
    }

    pub fn inclusion(&self) -> AbHom {
        let m = IntMatrix::from_columns(self.parent.ngens, &self.generators);
        AbHom { domain: self.group.clone(), codomain: self.parent.clone(), matrix: m }
    }

    /// Coordinates (in the subgroup's canonical coordinates) of a parent element.
    pub fn coordinates(&self, y: &[Int]) -> Option<Vec<Int>> {
        let sol = self.solver.solve(&self.parent.to_ambient(y))?;
        Some(self.group.from_ambient(&sol[..self.generators.len()]))
    }

    pub fn contains(&self, y: &[Int]) -> bool {
        self.coordinates(y).is_some()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.generators().iter().all(|g| other.contains(g))
    }

    pub fn same_as(&self, other: &Subgroup) -> bool {
        self.is_subgroup_of(other) && other.is_subgroup_of(self)
    }
}

/// Presentation `ℤ^rows / M·ℤ^cols`.
pub fn cokernel_presentation(m: &IntMatrix) -> FgAbGroup {
    FgAbGroup::new(m.clone())
}

pub fn hom_kernel_image(f: &AbHom) -> (Subgroup, Subgroup) {
    (f.kernel(), f.image())
}

/// `G / H` with the projection `G → G/H`.
pub fn quotient_group(g: &FgAbGroup, h_gens: &[Vec<Int>]) -> (FgAbGroup, AbHom) {
    let cols: Vec<Vec<Int>> = h_gens.iter().map(|h| g.to_ambient(h)).collect();
    let extra = IntMatrix::from_columns(g.ngens, &cols);
    let q = FgAbGroup::new(g.relations.hstack(&extra));
    let proj = AbHom { domain: g.clone(), codomain: q.clone(), matrix: IntMatrix::identity(g.ngens) };
    (q, proj)
}

pub fn torsion_subgroup(g: &FgAbGroup) -> Subgroup {
    let gens: Vec<Vec<Int>> = (0..g.invariant_factors().len()).map(|i| g.unit(i)).collect();
    Subgroup::generated_by(g, &gens)
}

pub fn preimage_solve(f: &AbHom, y: &[Int]) -> Option<Vec<Int>> {
    f.preimage(y)
}

/// `|x|` for use in small brute-force loops.
pub fn abs(x: &Int) -> Int {
    x.abs()
}
