use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use super::{CohGroup, Space};
use crate::error::Result;
use crate::exactalg::mixed::check_exact;
use crate::exactalg::{AbHom, FgAbGroup, IntMatrix, MixedGroup, MixedHom, Rat, RatMatrix};
use crate::report::Check;
use crate::simplicial::{CoeffRing, Decomposition, GradedCoefficients};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Piece {
    X,
    A,
    B,
    D,
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Piece::X => "X",
            Piece::A => "A",
            Piece::B => "B",
            Piece::D => "D",
        };
        write!(f, "{s}")
    }
}

/// A decomposition with cochain spaces for `X`, `A`, `B`, `D` over common
/// coefficients, plus cochain-level restriction, extension and connecting maps.
pub struct MvContext {
    pub dec: Decomposition,
    pub x: Arc<Space>,
    pub a: Arc<Space>,
    pub b: Arc<Space>,
    pub d: Arc<Space>,
    restrictions: Mutex<HashMap<(Piece, Piece, i64), Arc<Vec<usize>>>>,
}

impl fmt::Debug for MvContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MvContext").field("dec", &self.dec).finish()
    }
}

impl MvContext {
    pub fn new(dec: Decomposition, coeffs: GradedCoefficients) -> Self {
        let x = Space::from_parts(dec.x.clone(), coeffs.clone());
        let a = Space::from_parts(dec.a.clone(), coeffs.clone());
        let b = Space::from_parts(dec.b.clone(), coeffs.clone());
        let d = Space::from_parts(dec.d.clone(), coeffs);
        MvContext { dec, x, a, b, d, restrictions: Mutex::new(HashMap::new()) }
    }

    pub fn space(&self, p: Piece) -> &Arc<Space> {
        match p {
            Piece::X => &self.x,
            Piece::A => &self.a,
            Piece::B => &self.b,
            Piece::D => &self.d,
        }
    }

    pub fn coefficients(&self) -> &GradedCoefficients {
        self.x.coefficients()
    }

    pub fn group(&self, p: Piece, ring: CoeffRing, n: i64) -> CohGroup {
        self.space(p).group(ring, n)
    }

    /// Indices in `from` of the cells of `to` (a subcomplex), in degree `n`.
    pub fn restriction_indices(&self, from: Piece, to: Piece, n: i64) -> Arc<Vec<usize>> {
        let key = (from, to, n);
        if let Some(v) = self.restrictions.lock().expect("cache lock").get(&key) {
            return v.clone();
        }
        let idx = self
            .space(from)
            .cochains()
            .restriction_indices(self.space(to).cochains(), n)
            .expect("pieces of a decomposition are nested");
        let idx = Arc::new(idx);
        self.restrictions.lock().expect("cache lock").entry(key).or_insert(idx).clone()
    }

    pub fn restrict<T: Clone>(&self, from: Piece, to: Piece, n: i64, x: &[T]) -> Vec<T> {
        self.restriction_indices(from, to, n).iter().map(|&i| x[i].clone()).collect()
    }

    pub fn extend_by_zero<T: Clone + Zero>(&self, from: Piece, to: Piece, n: i64, x: &[T]) -> Vec<T> {
        let idx = self.restriction_indices(to, from, n);
        let mut out = vec![T::zero(); self.space(to).dim(n)];
        for (v, &i) in x.iter().zip(idx.iter()) {
            out[i] = v.clone();
        }
        out
    }

    /// Cochain-level connecting map: `z ↦ ext_{A→X}(D_A ext_{D→A} z)`.
    pub fn connecting_cochain(&self, n: i64, z: &[Rat]) -> Vec<Rat> {
        let on_a = self.extend_by_zero(Piece::D, Piece::A, n, z);
        let d = self.a.coboundary_rat(n, &on_a);
        self.extend_by_zero(Piece::A, Piece::X, n + 1, &d)
    }

    fn build(
        &self,
        name: String,
        domain: Vec<CohGroup>,
        codomain: Vec<CohGroup>,
        f: impl Fn(usize, &[Rat]) -> Vec<Vec<Rat>>,
    ) -> Result<MvMap> {
        MvMap::from_cochain_map(name, domain, codomain, f)
    }

    fn pair(&self, ring: CoeffRing, n: i64) -> Vec<CohGroup> {
        vec![self.group(Piece::A, ring, n), self.group(Piece::B, ring, n)]
    }

    /// `Σ: H^n(X) → H^n(A) ⊕ H^n(B)`.
    pub fn sigma(&self, ring: CoeffRing, n: i64) -> Result<MvMap> {
        self.build(format!("Sigma^{n}"), vec![self.group(Piece::X, ring, n)], self.pair(ring, n), |_, u| {
            vec![self.restrict(Piece::X, Piece::A, n, u), self.restrict(Piece::X, Piece::B, n, u)]
        })
    }

    /// `Δ: H^n(A) ⊕ H^n(B) → H^n(D)`, `(a, b) ↦ a|D - b|D`.
    pub fn delta(&self, ring: CoeffRing, n: i64) -> Result<MvMap> {
        self.build(format!("Delta^{n}"), self.pair(ring, n), vec![self.group(Piece::D, ring, n)], |i, u| {
            if i == 0 {
                vec![self.restrict(Piece::A, Piece::D, n, u)]
            } else {
                vec![self.restrict(Piece::B, Piece::D, n, u).into_iter().map(|v| -v).collect()]
            }
        })
    }

    /// `d*: H^n(D) → H^{n+1}(X)`.
    pub fn dstar(&self, ring: CoeffRing, n: i64) -> Result<MvMap> {
        self.build(
            format!("d*^{n}"),
            vec![self.group(Piece::D, ring, n)],
            vec![self.group(Piece::X, ring, n + 1)],
            |_, u| vec![self.connecting_cochain(n, u)],
        )
    }

    fn groups(&self, pieces: &[Piece], ring: CoeffRing, n: i64) -> Vec<CohGroup> {
        pieces.iter().map(|&p| self.group(p, ring, n)).collect()
    }

    /// `ch` on `⊕ H^n(P; ℤ) → ⊕ H^n(P; ℚ)`.
    pub fn ch_map(&self, pieces: &[Piece], n: i64) -> Result<MvMap> {
        self.build(
            format!("ch^{n}"),
            self.groups(pieces, CoeffRing::Int, n),
            self.groups(pieces, CoeffRing::Rat, n),
            |i, u| {
                let mut out = vec![Vec::new(); pieces.len()];
                out[i] = u.to_vec();
                for (j, p) in pieces.iter().enumerate() {
                    if j != i {
                        out[j] = vec![Rat::zero(); self.space(*p).dim(n)];
                    }
                }
                out
            },
        )
    }

    /// Bockstein `b` on `⊕ H^n(P; ℚ/ℤ) → ⊕ H^{n+1}(P; ℤ)`.
    pub fn b_map(&self, pieces: &[Piece], n: i64) -> Result<MvMap> {
        self.build(
            format!("b^{n}"),
            self.groups(pieces, CoeffRing::RatModInt, n),
            self.groups(pieces, CoeffRing::Int, n + 1),
            |i, u| {
                let mut out = vec![Vec::new(); pieces.len()];
                for (j, p) in pieces.iter().enumerate() {
                    out[j] = if j == i {
                        self.space(*p).coboundary_rat(n, u).into_iter().map(|v| -v).collect()
                    } else {
                        vec![Rat::zero(); self.space(*p).dim(n + 1)]
                    };
                }
                out
            },
        )
    }
}

/// A homomorphism between direct sums of cohomology groups, as a rational
/// matrix on concatenated coordinates.
#[derive(Clone, Debug)]
pub struct MvMap {
    pub name: String,
    pub domain: Vec<CohGroup>,
    pub codomain: Vec<CohGroup>,
    pub matrix: RatMatrix,
}

/// Mixed-group form of a direct sum and the position of each concatenated
/// coordinate in it.
fn layout(groups: &[CohGroup]) -> (MixedGroup, Vec<usize>) {
    let total_rat: usize = groups.iter().map(CohGroup::rational_dim).sum();
    let total: usize = groups.iter().map(CohGroup::dim).sum();
    let mut perm = Vec::with_capacity(total);
    let (mut rpos, mut ipos) = (0, total_rat);
    let mut lattice = Vec::new();
    for g in groups {
        let start = perm.len();
        for _ in 0..g.rational_dim() {
            perm.push(rpos);
            rpos += 1;
        }
        for _ in 0..g.integer_orders().len() {
            perm.push(ipos);
            ipos += 1;
        }
        for v in g.lattice() {
            let mut e = vec![Rat::zero(); total];
            for (k, x) in v.into_iter().enumerate() {
                e[perm[start + k]] = x;
            }
            lattice.push(e);
        }
    }
    (MixedGroup::new(total_rat, total - total_rat, lattice), perm)
}

fn permute(v: &[Rat], perm: &[usize]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); v.len()];
    for (x, &p) in v.iter().zip(perm) {
        out[p] = x.clone();
    }
    out
}

fn is_rational_direction(groups: &[CohGroup]) -> Vec<bool> {
    let mut out = Vec::new();
    for g in groups {
        out.extend(std::iter::repeat(true).take(g.rational_dim()));
        out.extend(std::iter::repeat(false).take(g.integer_orders().len()));
    }
    out
}

impl MvMap {
    /// Matrix of the map induced by a cochain map. `f(i, lift)` receives a lift
    /// from domain summand `i` and returns one cochain per codomain summand.
    pub fn from_cochain_map(
        name: impl Into<String>,
        domain: Vec<CohGroup>,
        codomain: Vec<CohGroup>,
        f: impl Fn(usize, &[Rat]) -> Vec<Vec<Rat>>,
    ) -> Result<MvMap> {
        let rows: usize = codomain.iter().map(CohGroup::dim).sum();
        let mut cols = Vec::new();
        for (i, g) in domain.iter().enumerate() {
            let r = g.rational_dim();
            for (k, lift) in g.unit_lifts().iter().enumerate() {
                let images = f(i, lift);
                let mut col = Vec::with_capacity(rows);
                for (target, img) in codomain.iter().zip(&images) {
                    let c = if k < r { target.direction_coords(img)? } else { target.coords(img)? };
                    col.extend(c);
                }
                cols.push(col);
            }
        }
        Ok(MvMap { name: name.into(), domain, codomain, matrix: RatMatrix::from_columns(rows, &cols) })
    }

    pub fn mixed(&self) -> MixedHom {
        let (dom, pd) = layout(&self.domain);
        let (cod, pc) = layout(&self.codomain);
        let mut m = RatMatrix::zeros(cod.dim(), dom.dim());
        for i in 0..self.matrix.rows() {
            for j in 0..self.matrix.cols() {
                m[(pc[i], pd[j])] = self.matrix[(i, j)].clone();
            }
        }
        MixedHom::new(dom, cod, m)
    }

    /// Integral form for maps between integral groups.
    pub fn ab_hom(&self) -> Option<AbHom> {
        let sum = |gs: &[CohGroup]| -> Option<FgAbGroup> {
            let mut rel = IntMatrix::zeros(0, 0);
            for g in gs {
                rel = rel.block_diag(g.fg_group()?.relations());
            }
            Some(FgAbGroup::new(rel))
        };
        let dom = sum(&self.domain)?;
        let cod = sum(&self.codomain)?;
        AbHom::new(dom, cod, self.matrix.to_int()?).ok()
    }

    /// Image of concatenated coordinates, normalized piece by piece.
    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        let y = self.matrix.mul_vec(x);
        let mut out = Vec::with_capacity(y.len());
        let mut off = 0;
        for g in &self.codomain {
            let n = g.dim();
            out.extend(g.normalize(y[off..off + n].to_vec()));
            off += n;
        }
        out
    }

    /// Whether two concatenated coordinate vectors of the codomain are equal.
    pub fn codomain_equal(&self, x: &[Rat], y: &[Rat]) -> bool {
        let (cod, pc) = layout(&self.codomain);
        cod.equal(&permute(x, &pc), &permute(y, &pc))
    }

    pub fn domain_dim(&self) -> usize {
        self.matrix.cols()
    }
}

/// Checks exactness of `f` then `g` at their common group.
pub fn exactness(f: &MvMap, g: &MvMap) -> (bool, Option<String>) {
    let res = check_exact(&f.mixed(), &g.mixed());
    let mut ok = res.passed();
    let mut detail = res.detail;
    if let (Some(fi), Some(gi)) = (f.ab_hom(), g.ab_hom()) {
        let same = gi.kernel().same_as(&fi.image());
        if !same {
            ok = false;
            detail.get_or_insert_with(|| "kernel and image differ as subgroups".into());
        }
    }
    (ok, detail)
}

/// Sign `s` with `bottom ∘ left = s · right ∘ top`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareSign {
    Plus,
    Minus,
    /// Both signs hold (the composites have order at most 2).
    Either,
    Neither,
}

impl SquareSign {
    pub fn as_i8(self) -> Option<i8> {
        match self {
            SquareSign::Plus | SquareSign::Either => Some(1),
            SquareSign::Minus => Some(-1),
            SquareSign::Neither => None,
        }
    }
}

pub fn square_sign(left: &MvMap, bottom: &MvMap, top: &MvMap, right: &MvMap) -> SquareSign {
    let m1 = bottom.matrix.mul(&left.matrix);
    let m2 = right.matrix.mul(&top.matrix);
    let rational = is_rational_direction(&left.domain);
    let (cod, pc) = layout(&bottom.codomain);
    let holds = |s: i64| {
        let s = Rat::from_integer(s.into());
        (0..m1.cols()).all(|j| {
            let diff: Vec<Rat> = m1.column(j).iter().zip(m2.column(j)).map(|(a, b)| a - &s * b).collect();
            if rational[j] {
                diff.iter().all(Zero::is_zero)
            } else {
                cod.is_zero(&permute(&diff, &pc))
            }
        })
    };
    match (holds(1), holds(-1)) {
        (true, true) => SquareSign::Either,
        (true, false) => SquareSign::Plus,
        (false, true) => SquareSign::Minus,
        (false, false) => SquareSign::Neither,
    }
}

fn ring_label(ring: CoeffRing) -> &'static str {
    match ring {
        CoeffRing::Int => "Z",
        CoeffRing::Rat => "Q",
        CoeffRing::RatModInt => "Q/Z",
    }
}

struct Row {
    ring: CoeffRing,
    n0: i64,
    sigma0: MvMap,
    delta0: MvMap,
    dstar0: MvMap,
    sigma1: MvMap,
    delta1: MvMap,
}

impl Row {
    fn new(ctx: &MvContext, ring: CoeffRing, n0: i64) -> Result<Self> {
        Ok(Row {
            ring,
            n0,
            sigma0: ctx.sigma(ring, n0)?,
            delta0: ctx.delta(ring, n0)?,
            dstar0: ctx.dstar(ring, n0)?,
            sigma1: ctx.sigma(ring, n0 + 1)?,
            delta1: ctx.delta(ring, n0 + 1)?,
        })
    }

    fn exactness_checks(&self, delta_override: Option<&MvMap>) -> Vec<Check> {
        let delta0 = delta_override.unwrap_or(&self.delta0);
        let r = ring_label(self.ring);
        let (n0, n1) = (self.n0, self.n0 + 1);
        let spots = [
            (format!("A+B^{n0}"), &self.sigma0, delta0),
            (format!("D^{n0}"), delta0, &self.dstar0),
            (format!("X^{n1}"), &self.dstar0, &self.sigma1),
            (format!("A+B^{n1}"), &self.sigma1, &self.delta1),
        ];
        spots
            .into_iter()
            .map(|(spot, f, g)| {
                let (ok, detail) = exactness(f, g);
                Check::new(format!("diagram2/exact/{r}/{spot}"), ok, detail)
            })
            .collect()
    }
}

/// Rows, vertical maps and all six squares of the three-row diagram at degree `k`.
struct Diagram2 {
    qz: Row,
    int: Row,
    rat: Row,
    b_ab: MvMap,
    b_d: MvMap,
    b_x: MvMap,
    b_ab_next: MvMap,
    ch_ab: MvMap,
    ch_d: MvMap,
    ch_x: MvMap,
    ch_ab_next: MvMap,
}

impl Diagram2 {
    fn new(ctx: &MvContext, k: i64) -> Result<Self> {
        let ab = [Piece::A, Piece::B];
        Ok(Diagram2 {
            qz: Row::new(ctx, CoeffRing::RatModInt, k - 2)?,
            int: Row::new(ctx, CoeffRing::Int, k - 1)?,
            rat: Row::new(ctx, CoeffRing::Rat, k - 1)?,
            b_ab: ctx.b_map(&ab, k - 2)?,
            b_d: ctx.b_map(&[Piece::D], k - 2)?,
            b_x: ctx.b_map(&[Piece::X], k - 1)?,
            b_ab_next: ctx.b_map(&ab, k - 1)?,
            ch_ab: ctx.ch_map(&ab, k - 1)?,
            ch_d: ctx.ch_map(&[Piece::D], k - 1)?,
            ch_x: ctx.ch_map(&[Piece::X], k)?,
            ch_ab_next: ctx.ch_map(&ab, k)?,
        })
    }

    fn square_checks(&self, int_delta: Option<&MvMap>) -> Vec<Check> {
        let d2 = int_delta.unwrap_or(&self.int.delta0);
        // b/d* anticommutes because the Bockstein is taken as minus the coboundary class
        let squares: [(&str, i8, &MvMap, &MvMap, &MvMap, &MvMap); 6] = [
            ("b/Delta", 1, &self.b_ab, d2, &self.qz.delta0, &self.b_d),
            ("b/d*", -1, &self.b_d, &self.int.dstar0, &self.qz.dstar0, &self.b_x),
            ("b/Sigma", 1, &self.b_x, &self.int.sigma1, &self.qz.sigma1, &self.b_ab_next),
            ("ch/Delta", 1, &self.ch_ab, &self.rat.delta0, d2, &self.ch_d),
            ("ch/d*", 1, &self.ch_d, &self.rat.dstar0, &self.int.dstar0, &self.ch_x),
            ("ch/Sigma", 1, &self.ch_x, &self.rat.sigma1, &self.int.sigma1, &self.ch_ab_next),
        ];
        squares
            .into_iter()
            .map(|(name, expected, left, bottom, top, right)| {
                let s = square_sign(left, bottom, top, right);
                let name = format!("diagram2/square/{name}");
                match s {
                    SquareSign::Either => {
                        Check::pass(name).with_sign(expected).with_detail("commutes with either sign")
                    }
                    SquareSign::Neither => Check::fail(name, "square commutes with neither sign"),
                    _ => {
                        let found = s.as_i8().expect("definite sign");
                        if found == expected {
                            Check::pass(name).with_sign(found)
                        } else {
                            Check::fail(name, format!("commutes with sign {found}, expected {expected}"))
                                .with_sign(found)
                        }
                    }
                }
            })
            .collect()
    }

    fn checks(&self) -> Vec<Check> {
        let mut out = Vec::new();
        for row in [&self.qz, &self.int, &self.rat] {
            out.extend(row.exactness_checks(None));
        }
        out.extend(self.square_checks(None));
        out
    }

    /// Flips one entry of the integral `Δ` and reports whether any check notices.
    fn negative_control(&self) -> Check {
        let name = "diagram2/negative-control/flip-delta";
        let delta = &self.int.delta0;
        let m = &delta.matrix;
        for j in 0..m.cols() {
            for i in 0..m.rows() {
                if m[(i, j)].is_zero() {
                    continue;
                }
                let mut bad = delta.clone();
                bad.matrix[(i, j)] = -m[(i, j)].clone();
                if delta.codomain_equal(&bad.matrix.column(j), &m.column(j)) {
                    continue;
                }
                bad.name = format!("{} (entry ({i},{j}) negated)", delta.name);
                let mut checks = self.int.exactness_checks(Some(&bad));
                checks.extend(self.square_checks(Some(&bad)));
                let caught: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
                return if caught.is_empty() {
                    Check::fail(name, format!("{} went unnoticed", bad.name))
                } else {
                    Check::pass(name).with_detail(format!("{} caught by {}", bad.name, caught.join(", ")))
                };
            }
        }
        Check::pass(name).with_detail("not applicable: integral Delta has no entry whose sign matters")
    }
}

/// Exactness of the three rows and the six squares linking them, around degree `k`.
pub fn verify_diagram2(ctx: &MvContext, k: i64) -> Result<Vec<Check>> {
    let diagram = Diagram2::new(ctx, k)?;
    let mut checks = diagram.checks();
    checks.push(diagram.negative_control());
    Ok(checks)
}
