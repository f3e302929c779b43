//! Differential cohomology as pairs `(c, h)` of an integral cocycle and a
//! rational cochain one degree lower, modulo `(Db, -b + Ds)`.
//!
//! Curvature is `ω = c + Dh`; the characteristic class is `[c]`.

use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;

use crate::cohomology::{exactness, in_lambda_j, CohClass, CohGroup, MvMap, Space};
use crate::error::{Error, Result};
use crate::exactalg::rational::{to_int_vec, to_rat_vec};
use crate::exactalg::{Int, Rat};
use crate::random;
use crate::report::Check;
use crate::simplicial::CoeffRing;

/// A deliberately wrong variant of the model, for negative controls.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// Relation `(Db, Ds)` instead of `(Db, -b + Ds)`.
    DropRhoTerm,
    /// `i₁(u) = (Dū, ū)`.
    FlipI1Sign,
}

#[derive(Clone, Debug)]
pub struct DiffClass {
    pub space: Arc<Space>,
    pub degree: i64,
    pub c: Vec<Int>,
    pub h: Vec<Rat>,
}

fn vsub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn vadd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn int_coboundary(space: &Space, n: i64, x: &[Int]) -> Vec<Int> {
    space.cochains().differential(n).mul_vec(x)
}

impl DiffClass {
    pub fn new(space: &Arc<Space>, degree: i64, c: Vec<Int>, h: Vec<Rat>) -> Result<Self> {
        let (nc, nh) = (space.dim(degree), space.dim(degree - 1));
        if c.len() != nc || h.len() != nh {
            return Err(Error::DimensionMismatch(format!(
                "differential class of degree {degree} needs lengths ({nc}, {nh}), got ({}, {})",
                c.len(),
                h.len()
            )));
        }
        if !int_coboundary(space, degree, &c).iter().all(Zero::is_zero) {
            return Err(Error::NotCocycle(format!("integral part in degree {degree}")));
        }
        Ok(DiffClass { space: space.clone(), degree, c, h })
    }

    pub fn zero(space: &Arc<Space>, degree: i64) -> Self {
        DiffClass {
            space: space.clone(),
            degree,
            c: vec![Int::zero(); space.dim(degree)],
            h: vec![Rat::zero(); space.dim(degree - 1)],
        }
    }

    fn check_compatible(&self, other: &DiffClass) {
        assert!(
            Arc::ptr_eq(&self.space, &other.space) && self.degree == other.degree,
            "differential classes on different complexes or degrees"
        );
    }

    pub fn add(&self, other: &DiffClass) -> DiffClass {
        self.check_compatible(other);
        DiffClass {
            space: self.space.clone(),
            degree: self.degree,
            c: self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect(),
            h: vadd(&self.h, &other.h),
        }
    }

    pub fn neg(&self) -> DiffClass {
        DiffClass {
            space: self.space.clone(),
            degree: self.degree,
            c: self.c.iter().map(|v| -v).collect(),
            h: self.h.iter().map(|v| -v).collect(),
        }
    }

    pub fn sub(&self, other: &DiffClass) -> DiffClass {
        self.add(&other.neg())
    }

    /// Adds the relation `(Db, -b + Ds)`.
    pub fn shifted(&self, b: &[Int], s: &[Rat]) -> DiffClass {
        let k = self.degree;
        let db = int_coboundary(&self.space, k - 1, b);
        let ds = self.space.coboundary_rat(k - 2, s);
        DiffClass {
            space: self.space.clone(),
            degree: k,
            c: self.c.iter().zip(&db).map(|(a, b)| a + b).collect(),
            h: self.h.iter().zip(b).zip(&ds).map(|((h, b), d)| h - Rat::from_integer(b.clone()) + d).collect(),
        }
    }

    /// Curvature `δ₁(f) = c + Dh`.
    pub fn curvature(&self) -> Vec<Rat> {
        vadd(&to_rat_vec(&self.c), &self.space.coboundary_rat(self.degree - 1, &self.h))
    }

    /// Coordinates of the characteristic class `δ₂(f) = [c]`.
    pub fn characteristic_coords(&self) -> Vec<Int> {
        self.space.int(self.degree).coords(&self.c).expect("integral part is a cocycle")
    }

    pub fn characteristic_class(&self) -> CohClass {
        CohClass::new(CohGroup::Int(self.space.int(self.degree)), to_rat_vec(&self.characteristic_coords()))
    }

    pub fn restrict(&self, sub: &Arc<Space>) -> Result<DiffClass> {
        let k = self.degree;
        let ic = self.space.cochains().restriction_indices(sub.cochains(), k)?;
        let ih = self.space.cochains().restriction_indices(sub.cochains(), k - 1)?;
        Ok(DiffClass {
            space: sub.clone(),
            degree: k,
            c: ic.iter().map(|&i| self.c[i].clone()).collect(),
            h: ih.iter().map(|&i| self.h[i].clone()).collect(),
        })
    }
}

pub fn diff_equal(f: &DiffClass, g: &DiffClass) -> bool {
    diff_equal_with(f, g, Fault::None)
}

/// Equality of classes. Under the true relation this means equal curvature and
/// `h_f - h_g ∈ D(C_ℚ) + C_ℤ`, i.e. the difference is zero as a ℚ/ℤ class.
pub fn diff_equal_with(f: &DiffClass, g: &DiffClass, fault: Fault) -> bool {
    f.check_compatible(g);
    let k = f.degree;
    let space = &f.space;
    let dh = vsub(&f.h, &g.h);
    match fault {
        Fault::DropRhoTerm => {
            let dc: Vec<Int> = f.c.iter().zip(&g.c).map(|(a, b)| a - b).collect();
            space.solve_int_coboundary(k, &dc).is_some() && space.solve_rat_coboundary(k - 1, &dh).is_some()
        }
        _ => {
            if f.curvature() != g.curvature() {
                return false;
            }
            match space.qz(k - 1).coords(&dh) {
                Ok(q) => q.iter().all(Zero::is_zero),
                Err(_) => false,
            }
        }
    }
}

/// `i₂(α) = (0, α)`.
pub fn i2(space: &Arc<Space>, k: i64, alpha: &[Rat]) -> DiffClass {
    DiffClass { space: space.clone(), degree: k, c: vec![Int::zero(); space.dim(k)], h: alpha.to_vec() }
}

/// `i₁(u) = (-Dū, ū)` for a rational lift `ū` of a ℚ/ℤ cocycle of degree `k - 1`.
pub fn i1_lift(space: &Arc<Space>, k: i64, lift: &[Rat], fault: Fault) -> Result<DiffClass> {
    let du = space.coboundary_rat(k - 1, lift);
    let du = to_int_vec(&du).ok_or_else(|| Error::NotFlatCocycle(format!("degree {} lift", k - 1)))?;
    let c = if fault == Fault::FlipI1Sign { du } else { du.into_iter().map(|v| -v).collect() };
    Ok(DiffClass { space: space.clone(), degree: k, c, h: lift.to_vec() })
}

pub fn i1(space: &Arc<Space>, u: &CohClass) -> Result<DiffClass> {
    if u.group.ring() != CoeffRing::RatModInt {
        return Err(Error::Incompatible("i1 takes a ℚ/ℤ class".into()));
    }
    i1_lift(space, u.group.degree() + 1, &u.group.lift(&u.coords), Fault::None)
}

/// `α` with `i₂(α) = f`, for `f` with vanishing characteristic class.
pub fn i2_preimage(f: &DiffClass) -> Result<Vec<Rat>> {
    let b = f
        .space
        .solve_int_coboundary(f.degree, &f.c)
        .ok_or_else(|| Error::NotInSubgroup("characteristic class is nonzero".into()))?;
    Ok(vadd(&f.h, &to_rat_vec(&b)))
}

/// The ℚ/ℤ class `u` with `i₁(u) = f`, for flat `f`.
pub fn flat_preimage(f: &DiffClass) -> Result<CohClass> {
    if !f.curvature().iter().all(Zero::is_zero) {
        return Err(Error::NotInSubgroup("curvature is nonzero".into()));
    }
    let g = CohGroup::Qz(f.space.qz(f.degree - 1));
    let coords = g.coords(&f.h)?;
    Ok(CohClass::new(g, coords))
}

/// `f` with `δ₁(f) = ω` for `ω ∈ 𝚲_J`, built as `(c, h)` with `c` the stored
/// representative of the class of `ω`.
pub fn curvature_preimage(space: &Arc<Space>, k: i64, omega: &[Rat]) -> Result<DiffClass> {
    let h = space.int(k);
    let q = h.rational_coords(omega)?;
    let free = to_int_vec(&q).ok_or_else(|| Error::NotInSubgroup("curvature class is not in the lattice".into()))?;
    let mut coords = vec![Int::zero(); h.torsion_count()];
    coords.extend(free);
    let c = h.cocycle(&coords);
    let rest = vsub(omega, &to_rat_vec(&c));
    let hh = space
        .solve_rat_coboundary(k, &rest)
        .ok_or_else(|| Error::Internal("closed form minus its class representative is not exact".into()))?;
    Ok(DiffClass { space: space.clone(), degree: k, c, h: hh })
}

/// Whether `α - β ∈ 𝚲_J`, i.e. `{α} = {β}` in `𝚲/𝚲_J`.
pub fn forms_equal_mod_lattice(space: &Space, n: i64, alpha: &[Rat], beta: &[Rat]) -> bool {
    in_lambda_j(space, n, &vsub(alpha, beta)).unwrap_or(false)
}

struct Sampler<'a> {
    space: &'a Arc<Space>,
    k: i64,
}

impl Sampler<'_> {
    fn int_class_coords<R: Rng>(&self, rng: &mut R, n: i64) -> Vec<Int> {
        let h = self.space.int(n);
        let mut c: Vec<Int> = h.invariant_factors().iter().map(|d| random::residue(rng, d)).collect();
        c.extend(random::int_vec(rng, h.free_rank(), 3));
        c
    }

    fn int_cocycle<R: Rng>(&self, rng: &mut R, n: i64) -> Vec<Int> {
        let z = self.space.int(n).cocycle(&self.int_class_coords(rng, n));
        let b = random::int_vec(rng, self.space.dim(n - 1), 2);
        let db = int_coboundary(self.space, n - 1, &b);
        z.iter().zip(&db).map(|(a, b)| a + b).collect()
    }

    fn rat_cochain<R: Rng>(&self, rng: &mut R, n: i64) -> Vec<Rat> {
        random::rat_vec(rng, self.space.dim(n), 4, 4)
    }

    fn exact<R: Rng>(&self, rng: &mut R, n: i64) -> Vec<Rat> {
        let s = self.rat_cochain(rng, n - 1);
        self.space.coboundary_rat(n - 1, &s)
    }

    /// Element of `𝚲^n_J`: an integral cocycle plus an exact rational cochain.
    fn lattice_form<R: Rng>(&self, rng: &mut R, n: i64) -> Vec<Rat> {
        vadd(&to_rat_vec(&self.int_cocycle(rng, n)), &self.exact(rng, n))
    }

    /// Closed rational cochain with a random rational class.
    fn closed_form<R: Rng>(&self, rng: &mut R, n: i64) -> Vec<Rat> {
        let h = self.space.int(n);
        let q = random::rat_vec(rng, h.free_rank(), 4, 4);
        vadd(&h.rational_cocycle(&q), &self.exact(rng, n))
    }

    fn diff_class<R: Rng>(&self, rng: &mut R) -> DiffClass {
        let k = self.k;
        DiffClass { space: self.space.clone(), degree: k, c: self.int_cocycle(rng, k), h: self.rat_cochain(rng, k - 1) }
    }

    fn qz_class<R: Rng>(&self, rng: &mut R) -> CohClass {
        let g = self.space.qz(self.k - 1);
        let mut coords: Vec<Rat> = (0..g.divisible_rank()).map(|_| random::small_rat(rng, 5, 6)).collect();
        coords.extend(g.torsion().iter().map(|d| Rat::from_integer(random::residue(rng, d))));
        if rng.gen_bool(0.2) {
            coords.iter_mut().for_each(|c| *c = Rat::zero());
        }
        CohClass::new(CohGroup::Qz(g), coords)
    }

    /// A random lift of `u`: the stored lift plus integral and exact noise.
    fn qz_lift<R: Rng>(&self, rng: &mut R, u: &CohClass) -> Vec<Rat> {
        let n = self.k - 1;
        let base = u.group.lift(&u.coords);
        let m = to_rat_vec(&random::int_vec(rng, self.space.dim(n), 2));
        vadd(&vadd(&base, &m), &self.exact(rng, n))
    }
}

type CheckFn = fn(&Sampler, &mut rand_chacha::ChaCha8Rng, usize, Fault) -> std::result::Result<(), String>;

fn fail_at<T: std::fmt::Debug>(what: &str, i: usize, data: T) -> std::result::Result<(), String> {
    Err(format!("{what} (sample {i}): {data:?}"))
}

fn check_group_laws(s: &Sampler, rng: &mut rand_chacha::ChaCha8Rng, n: usize, fault: Fault) -> Result<(), String> {
    let zero = DiffClass::zero(s.space, s.k);
    for i in 0..n {
        let f = s.diff_class(rng);
        let g = s.diff_class(rng);
        if !diff_equal_with(&f.add(&f.neg()), &zero, fault) {
            return fail_at("f + (-f) is not zero", i, &f.h);
        }
        if !diff_equal_with(&f.add(&g), &g.add(&f), fault) {
            return fail_at("addition is not commutative", i, &f.h);
        }
        let b = random::int_vec(rng, s.space.dim(s.k - 1), 2);
        let t = s.rat_cochain(rng, s.k - 2);
        if !diff_equal_with(&f.shifted(&b, &t), &f, fault) {
            return fail_at("f is not equal to f shifted by a relation", i, &b);
        }
    }
    Ok(())
}

fn check_i2_well_defined(s: &Sampler, rng: &mut rand_chacha::ChaCha8Rng, n: usize, fault: Fault) -> Result<(), String> {
    for i in 0..n {
        let alpha = s.rat_cochain(rng, s.k - 1);
        let lambda = s.lattice_form(rng, s.k - 1);
        if !diff_equal_with(&i2(s.space, s.k, &vadd(&alpha, &lambda)), &i2(s.space, s.k, &alpha), fault) {
            return fail_at("i2 changes when a lattice form is added", i, &lambda);
        }
    }
    Ok(())
}

fn check_i2_injective(s: &Sampler, rng: &mut rand_chacha::ChaCha8Rng, n: usize, fault: Fault) -> Result<(), String> {
    let zero = DiffClass::zero(s.space, s.k);
    let k = s.k;
    for i in 0..n {
        // half the samples lie in the lattice, the rest are off it by a fraction of a class or a non-closed part
        let mut alpha = s.lattice_form(rng, k - 1);
        if rng.gen_bool(0.5) {
            alpha = vadd(&alpha, &s.closed_form(rng, k - 1));
            if rng.gen_bool(0.5) {
                alpha = vadd(&alpha, &s.rat_cochain(rng, k - 1));
            }
        }
        let in_lattice = in_lambda_j(s.space, k - 1, &alpha).map_err(|e| e.to_string())?;
        if diff_equal_with(&i2(s.space, k, &alpha), &zero, fault) != in_lattice {
            return fail_at("i2(alpha) = 0 disagrees with alpha in the lattice", i, &alpha);
        }
    }
    Ok(())
}

fn check_delta2_surjective(s: &Sampler, rng: &mut rand_chacha::ChaCha8Rng, n: usize, _: Fault) -> Result<(), String> {
    let h = s.space.int(s.k);
    let gens = h.group().ngens();
    for i in 0..gens + n {
        let coords = if i < gens {
            (0..gens).map(|j| Int::from((i == j) as i64)).collect()
        } else {
            s.int_class_coords(rng, s.k)
        };
        let f = DiffClass::zero(s.space, s.k);
        let f = DiffClass { c: h.cocycle(&coords), ..f };
        if f.characteristic_coords() != h.group().reduce(coords.clone()) {
            return fail_at("(c, 0) has the wrong characteristic class", i, &coords);
        }
    }
    Ok(())
}

fn check_ker_delta2(s: &Sampler, rng: &mut rand_chacha::ChaCha8Rng, n: usize, fault: Fault) -> Result<(), String> {
    for i in 0..n {
        let alpha = s.rat_cochain(rng, s.k - 1);
        if !i2(s.space, s.k, &alpha).characteristic_coords().iter().all(Zero::is_zero) {
            return fail_at("delta2 of i2(alpha) is nonzero", i, &alpha);
        }
        let b = random::int_vec(rng, s.space.dim(s.k - 1), 3);
        let f = DiffClass {
            c: int_coboundary(s.space, s.k - 1, &b),
            h: s.rat_cochain(rng, s.k - 1),
            ..DiffClass::zero(s.space, s.k)
        };
        let pre = i2_preimage(&f).map_err(|e| format!("sample {i}: {e}"))?;
        if !diff_equal_with(&i2(s.space, s.k, &pre), &f, fault) {
            return fail_at("i2 of the constructed preimage differs from f", i, &b);
        }
    }
    Ok(())
}

fn check_i1_injective(s: &Sampler, rng: &mut rand_chacha::ChaCha8Rng, n: usize, fault: Fault) -> Result<(), String> {
    let zero = DiffClass::zero(s.space, s.k);
    for i in 0..n {
        let u = s.qz_class(rng);
        let l1 = s.qz_lift(rng, &u);
        let l2 = s.qz_lift(rng, &u);
        let f1 = i1_lift(s.space, s.k, &l1, fault).map_err(|e| e.to_string())?;
        let f2 = i1_lift(s.space, s.k, &l2, fault).map_err(|e| e.to_string())?;
        if !diff_equal_with(&f1, &f2, fault) {
            return fail_at("i1 depends on the lift", i, &u.coords);
        }
        if diff_equal_with(&f1, &zero, fault) != u.is_zero() {
            return fail_at("i1(u) = 0 disagrees with u = 0", i, &u.coords);
        }
    }
    Ok(())
}

fn check_delta1_surjective(s: &Sampler, rng: &mut rand_chacha::ChaCha8Rng, n: usize, _: Fault) -> Result<(), String> {
    for i in 0..n {
        let omega = s.lattice_form(rng, s.k);
        let f = curvature_preimage(s.space, s.k, &omega).map_err(|e| format!("sample {i}: {e}"))?;
        if f.curvature() != omega {
            return fail_at("curvature of the witness differs", i, &omega);
        }
        let g = s.diff_class(rng);
        if !in_lambda_j(s.space, s.k, &g.curvature()).unwrap_or(false) {
            return fail_at("curvature is not a lattice form", i, &g.c);
        }
    }
    Ok(())
}

fn check_ker_delta1(s: &Sampler, rng: &mut rand_chacha::ChaCha8Rng, n: usize, fault: Fault) -> Result<(), String> {
    for i in 0..n {
        let u = s.qz_class(rng);
        let lift = s.qz_lift(rng, &u);
        let f = i1_lift(s.space, s.k, &lift, fault).map_err(|e| e.to_string())?;
        if !f.curvature().iter().all(Zero::is_zero) {
            return fail_at("i1(u) is not flat", i, &u.coords);
        }
        let b = random::int_vec(rng, s.space.dim(s.k - 1), 2);
        let t = s.rat_cochain(rng, s.k - 2);
        let f = f.shifted(&b, &t);
        let pre = flat_preimage(&f).map_err(|e| format!("sample {i}: {e}"))?;
        let back = i1_lift(s.space, s.k, &pre.group.lift(&pre.coords), fault).map_err(|e| e.to_string())?;
        if !diff_equal_with(&back, &f, fault) {
            return fail_at("flat class is not i1 of its preimage", i, &u.coords);
        }
    }
    Ok(())
}

fn check_b_is_delta2_i1(s: &Sampler, rng: &mut rand_chacha::ChaCha8Rng, n: usize, fault: Fault) -> Result<(), String> {
    for i in 0..n {
        let u = s.qz_class(rng);
        let lift = s.qz_lift(rng, &u);
        let f = i1_lift(s.space, s.k, &lift, fault).map_err(|e| e.to_string())?;
        let b = crate::cohomology::bockstein(&u, s.space);
        if to_rat_vec(&f.characteristic_coords()) != b.coords {
            return fail_at("delta2(i1(u)) differs from b(u)", i, &u.coords);
        }
    }
    Ok(())
}

fn check_delta1_i2(s: &Sampler, rng: &mut rand_chacha::ChaCha8Rng, n: usize, _: Fault) -> Result<(), String> {
    for i in 0..n {
        let alpha = s.rat_cochain(rng, s.k - 1);
        if i2(s.space, s.k, &alpha).curvature() != s.space.coboundary_rat(s.k - 1, &alpha) {
            return fail_at("delta1(i2(alpha)) differs from d(alpha)", i, &alpha);
        }
    }
    Ok(())
}

fn check_outer(s: &Sampler, rng: &mut rand_chacha::ChaCha8Rng, n: usize, _: Fault) -> Result<(), String> {
    let h = s.space.int(s.k);
    let t = h.torsion_count();
    for i in 0..n {
        let f = s.diff_class(rng);
        let de_rham = h.rational_coords(&f.curvature()).map_err(|e| e.to_string())?;
        let chern = to_rat_vec(&f.characteristic_coords()[t..]);
        if de_rham != chern {
            return fail_at("de Rham class of the curvature differs from ch of the characteristic class", i, &f.c);
        }
    }
    Ok(())
}

fn check_additivity(s: &Sampler, rng: &mut rand_chacha::ChaCha8Rng, n: usize, _: Fault) -> Result<(), String> {
    let grp = s.space.int(s.k);
    for i in 0..n {
        let f = s.diff_class(rng);
        let g = s.diff_class(rng);
        let fg = f.add(&g);
        if fg.curvature() != vadd(&f.curvature(), &g.curvature()) {
            return fail_at("curvature is not additive", i, &f.c);
        }
        let sum = grp.group().add(&f.characteristic_coords(), &g.characteristic_coords());
        if fg.characteristic_coords() != sum {
            return fail_at("characteristic class is not additive", i, &f.c);
        }
    }
    Ok(())
}

/// `H^{k-1}(ℚ) → 𝚲^{k-1}/𝚲_J → 𝚲^k_J → H^k(ℚ)`, exact at the two middle terms.
fn check_forms_sequence(s: &Sampler, rng: &mut rand_chacha::ChaCha8Rng, n: usize, _: Fault) -> Result<(), String> {
    let k = s.k;
    let prev = s.space.int(k - 1);
    let cur = s.space.int(k);
    for i in 0..n {
        let q = random::rat_vec(rng, prev.free_rank(), 4, 4);
        if !s.space.is_rat_cocycle(k - 1, &prev.rational_cocycle(&q)) {
            return fail_at("class representative is not closed", i, &q);
        }
        // closed modulo the lattice means closed: every closed form comes from its class
        let alpha = s.closed_form(rng, k - 1);
        let class_part = prev.rational_cocycle(&prev.rational_coords(&alpha).map_err(|e| e.to_string())?);
        if s.space.solve_rat_coboundary(k - 1, &vsub(&alpha, &class_part)).is_none() {
            return fail_at("closed form is not its class representative up to exact forms", i, &alpha);
        }
        let mut omega = s.exact(rng, k);
        if rng.gen_bool(0.5) {
            omega = s.lattice_form(rng, k);
        }
        let de_rham = cur.rational_coords(&omega).map_err(|e| e.to_string())?;
        let exact = s.space.solve_rat_coboundary(k, &omega).is_some();
        if de_rham.iter().all(Zero::is_zero) != exact {
            return fail_at("lattice form with zero class is not exact", i, &omega);
        }
    }
    Ok(())
}

/// `H^{k-1}(ℚ) → H^{k-1}(ℚ/ℤ) → H^k(ℤ) → H^k(ℚ)` on generators.
fn check_coefficient_sequence(s: &Sampler, _: &mut rand_chacha::ChaCha8Rng, _: usize, _: Fault) -> Result<(), String> {
    let k = s.k;
    let sp = s.space;
    let p = MvMap::from_cochain_map(
        "p",
        vec![sp.group(CoeffRing::Rat, k - 1)],
        vec![sp.group(CoeffRing::RatModInt, k - 1)],
        |_, u| vec![u.to_vec()],
    )
    .map_err(|e| e.to_string())?;
    let b = MvMap::from_cochain_map(
        "b",
        vec![sp.group(CoeffRing::RatModInt, k - 1)],
        vec![sp.group(CoeffRing::Int, k)],
        |_, u| vec![sp.coboundary_rat(k - 1, u).into_iter().map(|v| -v).collect()],
    )
    .map_err(|e| e.to_string())?;
    let ch =
        MvMap::from_cochain_map("ch", vec![sp.group(CoeffRing::Int, k)], vec![sp.group(CoeffRing::Rat, k)], |_, u| {
            vec![u.to_vec()]
        })
        .map_err(|e| e.to_string())?;
    for (name, f, g) in [("H^{k-1}(Q/Z)", &p, &b), ("H^k(Z)", &b, &ch)] {
        let (ok, detail) = exactness(f, g);
        if !ok {
            return Err(format!("not exact at {name}: {}", detail.unwrap_or_default()));
        }
    }
    Ok(())
}

const CHECKS: [(&str, CheckFn); 14] = [
    ("group-laws", check_group_laws),
    ("additivity", check_additivity),
    ("i2-well-defined", check_i2_well_defined),
    ("i2-injective", check_i2_injective),
    ("delta2-surjective", check_delta2_surjective),
    ("ker-delta2-is-im-i2", check_ker_delta2),
    ("i1-injective", check_i1_injective),
    ("delta1-surjective", check_delta1_surjective),
    ("ker-delta1-is-im-i1", check_ker_delta1),
    ("b-is-delta2-i1", check_b_is_delta2_i1),
    ("delta1-i2-is-d", check_delta1_i2),
    ("outer-square", check_outer),
    ("forms-sequence-exact", check_forms_sequence),
    ("coefficient-sequence-exact", check_coefficient_sequence),
];

fn run_checks(space: &Arc<Space>, k: i64, samples: usize, seed: u64, fault: Fault) -> Vec<Check> {
    let sampler = Sampler { space, k };
    CHECKS
        .par_iter()
        .enumerate()
        .map(|(idx, (name, f))| {
            let mut rng = random::stream(seed, idx as u64);
            let res = f(&sampler, &mut rng, samples, fault);
            Check::new(format!("diagram1/{name}"), res.is_ok(), res.err())
        })
        .collect()
}

/// Whether a fault changes the model at all in degree `k`.
fn fault_applies(space: &Space, k: i64, fault: Fault) -> bool {
    match fault {
        Fault::None => false,
        // the relations differ iff some integral (k-1)-cochain is not rationally exact
        Fault::DropRhoTerm => space.echelon(k - 2).rank() < space.dim(k - 1),
        // the two i₁ differ iff some integral lift has nonzero coboundary
        Fault::FlipI1Sign => !space.cochains().differential(k - 1).is_zero(),
    }
}

fn negative_control(space: &Arc<Space>, k: i64, samples: usize, seed: u64, fault: Fault) -> Check {
    let name = match fault {
        Fault::DropRhoTerm => "diagram1/negative-control/drop-rho-term",
        _ => "diagram1/negative-control/flip-i1-sign",
    };
    let caught: Vec<String> =
        run_checks(space, k, samples, seed, fault).into_iter().filter(|c| !c.passed).map(|c| c.name).collect();
    if !caught.is_empty() {
        Check::pass(name).with_detail(format!("caught by {}", caught.join(", ")))
    } else if fault_applies(space, k, fault) {
        Check::fail(name, "injected fault went unnoticed")
    } else {
        Check::pass(name).with_detail("not applicable: the fault does not change the model in this degree")
    }
}

/// All identities of the hexagon in degree `k`, each on `samples` random
/// elements from an independent seeded stream, plus the two negative controls.
pub fn verify_diagram1(space: &Arc<Space>, k: i64, samples: usize, seed: u64) -> Vec<Check> {
    let mut checks = run_checks(space, k, samples, seed, Fault::None);
    checks.push(negative_control(space, k, samples, seed, Fault::DropRhoTerm));
    checks.push(negative_control(space, k, samples, seed, Fault::FlipI1Sign));
    checks
}
