//! Extended quivers and their bounded algebras.
//!
//! For a quiver `Q` and depth `d`, the extended quiver stacks `d` copies of
//! `Q` with connecting vertical arrows, so that a (strict) partial flag of a
//! representation becomes a single module over the algebra `R` obtained by
//! identifying all parallel length-2 paths.  Each identification is recorded
//! by a *virtual arrow* carrying its two composing paths; virtual arrows
//! enter the Euler form with a plus sign and index the third term of the
//! standard projective resolution, which is how `Ext^0/Ext^1/Ext^2` over `R`
//! are computed here (two rank computations per differential, no chain
//! homotopies).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{Field, Fp, Rationals};
use crate::matrix::{Matrix, Subspace};
use crate::quiver::{euler_form, DimVec, Quiver};
use crate::rep::Rep;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtArrowKind {
    /// `(i, r) -> (i, r+1)`.
    Vertical { vertex: usize, level: usize },
    /// Copy of a base arrow inside level `r` (non-strict), or from level `r`
    /// down to `r-1` (strict).
    Level { arrow: usize, level: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtArrow {
    pub kind: ExtArrowKind,
    pub src: usize,
    pub dst: usize,
}

/// A virtual arrow with its two composing length-2 paths (stored as pairs of
/// extended-arrow indices, first applied first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualArrow {
    pub src: usize,
    pub dst: usize,
    pub path_a: (usize, usize),
    pub path_b: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtQuiver {
    pub base: Quiver,
    pub d: usize,
    pub strict: bool,
    n_base: usize,
    pub arrows: Vec<ExtArrow>,
    pub virtuals: Vec<VirtualArrow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtError {
    DepthZero,
    StrictNeedsDepthTwo,
    ShapeMismatch,
    ExtDegreeOutOfRange(usize),
}

impl fmt::Display for ExtError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtError::DepthZero => write!(f, "depth must be at least 1"),
            ExtError::StrictNeedsDepthTwo => write!(f, "strict extension requires depth >= 2"),
            ExtError::ShapeMismatch => write!(f, "module data does not match the extended quiver"),
            ExtError::ExtDegreeOutOfRange(i) => {
                write!(f, "Ext^{i} requested: the algebra has global dimension <= 2, degree must be 0, 1 or 2")
            }
        }
    }
}
impl core::error::Error for ExtError {}


impl ExtQuiver {
    /// Builds the (strict) extended quiver of depth `d` with its virtual
    /// arrows and path identifications.
    pub fn build(base: &Quiver, d: usize, strict: bool) -> Result<ExtQuiver, ExtError> {
        if d == 0 {
            return Err(ExtError::DepthZero);
        }
        if strict && d < 2 {
            return Err(ExtError::StrictNeedsDepthTwo);
        }
        let n = base.n_vertices();
        let vid = |i: usize, r: usize| (r - 1) * n + i; // levels are 1-based
        let mut arrows = Vec::new();
        for r in 1..d {
            for i in 0..n {
                arrows.push(ExtArrow {
                    kind: ExtArrowKind::Vertical { vertex: i, level: r },
                    src: vid(i, r),
                    dst: vid(i, r + 1),
                });
            }
        }
        let level_range = if strict { 2..=d } else { 1..=d };
        for r in level_range {
            for (k, a) in base.arrows().iter().enumerate() {
                let (src, dst) = if strict {
                    (vid(a.from, r), vid(a.to, r - 1))
                } else {
                    (vid(a.from, r), vid(a.to, r))
                };
                arrows.push(ExtArrow { kind: ExtArrowKind::Level { arrow: k, level: r }, src, dst });
            }
        }
        let find = |kind: ExtArrowKind| arrows.iter().position(|x| x.kind == kind).expect("arrow exists");
        let mut virtuals = Vec::new();
        if strict {
            // one virtual arrow per base arrow and level r in 2..=d-1,
            // from (i, r) to (j, r): vertical-then-level vs level-then-vertical
            for r in 2..d {
                for (k, a) in base.arrows().iter().enumerate() {
                    let up_i = find(ExtArrowKind::Vertical { vertex: a.from, level: r });
                    let lv_hi = find(ExtArrowKind::Level { arrow: k, level: r + 1 });
                    let lv_lo = find(ExtArrowKind::Level { arrow: k, level: r });
                    let up_j = find(ExtArrowKind::Vertical { vertex: a.to, level: r - 1 });
                    virtuals.push(VirtualArrow {
                        src: vid(a.from, r),
                        dst: vid(a.to, r),
                        path_a: (up_i, lv_hi),
                        path_b: (lv_lo, up_j),
                    });
                }
            }
        } else {
            // one per base arrow and level r in 1..=d-1, from (i, r) to (j, r+1)
            for r in 1..d {
                for (k, a) in base.arrows().iter().enumerate() {
                    let up_i = find(ExtArrowKind::Vertical { vertex: a.from, level: r });
                    let lv_hi = find(ExtArrowKind::Level { arrow: k, level: r + 1 });
                    let lv_lo = find(ExtArrowKind::Level { arrow: k, level: r });
                    let up_j = find(ExtArrowKind::Vertical { vertex: a.to, level: r });
                    virtuals.push(VirtualArrow {
                        src: vid(a.from, r),
                        dst: vid(a.to, r + 1),
                        path_a: (up_i, lv_hi),
                        path_b: (lv_lo, up_j),
                    });
                }
            }
        }
        Ok(ExtQuiver { base: base.clone(), d, strict, n_base: n, arrows, virtuals })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_base * self.d
    }

    pub fn vertex_id(&self, base_vertex: usize, level: usize) -> usize {
        debug_assert!(level >= 1 && level <= self.d);
        (level - 1) * self.n_base + base_vertex
    }

    /// `(base vertex, level)` of an extended vertex id.
    pub fn vertex_pair(&self, v: usize) -> (usize, usize) {
        (v % self.n_base, v / self.n_base + 1)
    }

    /// Euler form of the algebra: vertex sum minus arrow sum plus
    /// virtual-arrow sum.
    pub fn euler_form_r(&self, f: &DimVec, g: &DimVec) -> i64 {
        let arrows: Vec<(usize, usize)> = self.arrows.iter().map(|a| (a.src, a.dst)).collect();
        let virtuals: Vec<(usize, usize)> = self.virtuals.iter().map(|c| (c.src, c.dst)).collect();
        euler_form(f, g, &arrows, &virtuals)
    }

    /// The extended dimension vector of `Phi(M)`: `d` concatenated copies of
    /// `dim M`.
    pub fn phi_dim(&self, dim: &DimVec) -> DimVec {
        let mut out = Vec::with_capacity(dim.len() * self.d);
        for _ in 0..self.d {
            out.extend_from_slice(dim);
        }
        out
    }
}

/// A module over the bounded algebra: a representation of the extended quiver
/// whose matrices satisfy every virtual-arrow relation.
#[derive(Clone, PartialEq)]
pub struct BoundModule<F: Field> {
    pub dims: Vec<usize>,
    pub mats: Vec<Matrix<F>>,
}

impl<F: Field> fmt::Debug for BoundModule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoundModule(dims = {:?})", self.dims)
    }
}

impl<F: Field> BoundModule<F> {
    pub fn new(eq: &ExtQuiver, field: F, dims: Vec<usize>, mats: Vec<Matrix<F>>) -> Result<Self, ExtError> {
        if dims.len() != eq.n_vertices() || mats.len() != eq.arrows.len() {
            return Err(ExtError::ShapeMismatch);
        }
        for (a, m) in eq.arrows.iter().zip(&mats) {
            if m.rows() != dims[a.dst] || m.cols() != dims[a.src] {
                return Err(ExtError::ShapeMismatch);
            }
        }
        let _ = field;
        Ok(BoundModule { dims, mats })
    }

    pub fn zero(eq: &ExtQuiver, field: F) -> Self {
        BoundModule {
            dims: vec![0; eq.n_vertices()],
            mats: eq.arrows.iter().map(|_| Matrix::zeros(field.clone(), 0, 0)).collect(),
        }
    }

    pub fn dim_vec(&self) -> DimVec {
        self.dims.iter().map(|&d| d as i64).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
}

/// The canonical functor: vertical arrows carry identities, level arrows
/// carry the arrow matrices of `m`.  Relations hold by construction.
pub fn phi<F: Field>(eq: &ExtQuiver, field: &F, m: &Rep<F>) -> BoundModule<F> {
    let mut dims = vec![0usize; eq.n_vertices()];
    for v in 0..eq.n_vertices() {
        let (i, _) = eq.vertex_pair(v);
        dims[v] = m.dims[i];
    }
    let mats = eq
        .arrows
        .iter()
        .map(|a| match a.kind {
            ExtArrowKind::Vertical { vertex, .. } => Matrix::identity(field.clone(), m.dims[vertex]),
            ExtArrowKind::Level { arrow, .. } => m.mats[arrow].clone(),
        })
        .collect();
    BoundModule { dims, mats }
}

/// Checks every virtual-arrow relation; returns the list of violated virtual
/// arrows (by index).
pub fn validate<F: Field>(eq: &ExtQuiver, t: &BoundModule<F>) -> Vec<usize> {
    let mut bad = Vec::new();
    for (c_idx, c) in eq.virtuals.iter().enumerate() {
        let (a1, a2) = c.path_a;
        let (b1, b2) = c.path_b;
        let lhs = t.mats[a2].mul(&t.mats[a1]);
        let rhs = t.mats[b2].mul(&t.mats[b1]);
        if lhs != rhs {
            bad.push(c_idx);
        }
    }
    bad
}

/// A morphism of bound modules: vertex matrices commuting with every
/// (non-virtual) arrow.
pub type BoundMorphism<F> = crate::rep::Morphism<F>;

/// Basis of `Hom_R(T, T')`.
pub fn hom_r<F: Field>(eq: &ExtQuiver, field: &F, t: &BoundModule<F>, t2: &BoundModule<F>) -> Vec<BoundMorphism<F>> {
    // reuse the representation-level solver over the extended quiver's shape
    let n_vertices = eq.n_vertices();
    let mut offsets = vec![0usize; n_vertices + 1];
    for v in 0..n_vertices {
        offsets[v + 1] = offsets[v] + t2.dims[v] * t.dims[v];
    }
    let total = offsets[n_vertices];
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for (k, a) in eq.arrows.iter().enumerate() {
        let (s, tt) = (a.src, a.dst);
        for i in 0..t2.dims[tt] {
            for j in 0..t.dims[s] {
                let mut row = vec![field.zero(); total];
                for l in 0..t.dims[tt] {
                    let idx = offsets[tt] + i * t.dims[tt] + l;
                    row[idx] = field.add(&row[idx], t.mats[k].at(l, j));
                }
                for l in 0..t2.dims[s] {
                    let idx = offsets[s] + l * t.dims[s] + j;
                    row[idx] = field.sub(&row[idx], t2.mats[k].at(i, l));
                }
                rows.push(row);
            }
        }
    }
    let sys = if rows.is_empty() {
        Matrix::zeros(field.clone(), 0, total)
    } else {
        Matrix::from_rows(field.clone(), rows)
    };
    sys.kernel_basis()
        .into_iter()
        .map(|x| {
            let mats = (0..n_vertices)
                .map(|v| {
                    Matrix::from_fn(field.clone(), t2.dims[v], t.dims[v], |i, j| {
                        x[offsets[v] + i * t.dims[v] + j].clone()
                    })
                })
                .collect();
            crate::rep::Morphism { mats }
        })
        .collect()
}

pub fn hom_r_dim<F: Field>(eq: &ExtQuiver, field: &F, t: &BoundModule<F>, t2: &BoundModule<F>) -> usize {
    hom_r(eq, field, t, t2).len()
}

/// Dimensions of `Ext^0, Ext^1, Ext^2` over the algebra, from the three-term
/// complex obtained by applying `Hom(-, t2)` to the standard projective
/// resolution of `t`.  The terms have dimensions
/// `sum_v f_v g_v`, `sum_{arrows} f_src g_dst`, `sum_{virtual} f_src g_dst`.
pub fn ext_profile<F: Field>(eq: &ExtQuiver, field: &F, t: &BoundModule<F>, t2: &BoundModule<F>) -> (usize, usize, usize) {
    let n_vertices = eq.n_vertices();
    // term 0: blocks Hom(T_v, T'_v)
    let mut off0 = vec![0usize; n_vertices + 1];
    for v in 0..n_vertices {
        off0[v + 1] = off0[v] + t2.dims[v] * t.dims[v];
    }
    // term 1: blocks Hom(T_src(b), T'_dst(b))
    let n_arrows = eq.arrows.len();
    let mut off1 = vec![0usize; n_arrows + 1];
    for (k, a) in eq.arrows.iter().enumerate() {
        off1[k + 1] = off1[k] + t2.dims[a.dst] * t.dims[a.src];
    }
    // term 2: blocks Hom(T_src(c), T'_dst(c))
    let n_virt = eq.virtuals.len();
    let mut off2 = vec![0usize; n_virt + 1];
    for (k, c) in eq.virtuals.iter().enumerate() {
        off2[k + 1] = off2[k] + t2.dims[c.dst] * t.dims[c.src];
    }
    let (h0, h1, h2) = (off0[n_vertices], off1[n_arrows], off2[n_virt]);

    // delta0: (phi_v)_v -> per arrow b: phi_dst . T_b - T'_b . phi_src
    let mut d0 = Matrix::zeros(field.clone(), h1, h0);
    for (k, a) in eq.arrows.iter().enumerate() {
        let (s, d) = (a.src, a.dst);
        for i in 0..t2.dims[d] {
            for j in 0..t.dims[s] {
                let row = off1[k] + i * t.dims[s] + j;
                for l in 0..t.dims[d] {
                    let col = off0[d] + i * t.dims[d] + l;
                    let v = field.add(d0.at(row, col), t.mats[k].at(l, j));
                    d0.set(row, col, v);
                }
                for l in 0..t2.dims[s] {
                    let col = off0[s] + l * t.dims[s] + j;
                    let v = field.sub(d0.at(row, col), t2.mats[k].at(i, l));
                    d0.set(row, col, v);
                }
            }
        }
    }

    // delta1: (psi_b)_b -> per virtual arrow c with paths (a1,a2), (b1,b2):
    //   T'_{a2} psi_{a1} + psi_{a2} T_{a1} - T'_{b2} psi_{b1} - psi_{b2} T_{b1}
    let mut d1 = Matrix::zeros(field.clone(), h2, h1);
    for (k, c) in eq.virtuals.iter().enumerate() {
        let sc = c.src;
        let dc = c.dst;
        for i in 0..t2.dims[dc] {
            for j in 0..t.dims[sc] {
                let row = off2[k] + i * t.dims[sc] + j;
                for (sign_plus, (first, second)) in [(true, c.path_a), (false, c.path_b)] {
                    let mid_t = eq.arrows[first].dst; // = src of second
                    // T'_{second}[i][l] * psi_{first}[l][j], unknown psi_first (t2.dims[mid] x t.dims[sc])
                    for l in 0..t2.dims[mid_t] {
                        let col = off1[first] + l * t.dims[sc] + j;
                        let coef = t2.mats[second].at(i, l).clone();
                        let v = if sign_plus {
                            field.add(d1.at(row, col), &coef)
                        } else {
                            field.sub(d1.at(row, col), &coef)
                        };
                        d1.set(row, col, v);
                    }
                    // psi_{second}[i][l] * T_{first}[l][j], unknown psi_second (t2.dims[dc] x t.dims[mid])
                    for l in 0..t.dims[mid_t] {
                        let col = off1[second] + i * t.dims[mid_t] + l;
                        let coef = t.mats[first].at(l, j).clone();
                        let v = if sign_plus {
                            field.add(d1.at(row, col), &coef)
                        } else {
                            field.sub(d1.at(row, col), &coef)
                        };
                        d1.set(row, col, v);
                    }
                }
            }
        }
    }

    debug_assert!(d1.mul(&d0).is_zero(), "complex property delta1 . delta0 = 0");

    let r0 = d0.rank();
    let r1 = d1.rank();
    let e0 = h0 - r0;
    let e1 = h1 - r1 - r0;
    let e2 = h2 - r1;
    (e0, e1, e2)
}

/// `dim Ext^i_R(T, T')` for `i` in `0..=2`; higher degrees are rejected to
/// catch caller bugs (they vanish by the global dimension bound).
pub fn ext_r<F: Field>(
    eq: &ExtQuiver,
    field: &F,
    t: &BoundModule<F>,
    t2: &BoundModule<F>,
    i: usize,
) -> Result<usize, ExtError> {
    if i > 2 {
        return Err(ExtError::ExtDegreeOutOfRange(i));
    }
    let (e0, e1, e2) = ext_profile(eq, field, t, t2);
    Ok([e0, e1, e2][i])
}

/// A submodule of a bound module: a subspace per extended vertex; stability
/// over every (non-virtual) arrow is the defining condition.
pub type BoundSubTuple<F> = Vec<Subspace<F>>;

pub fn bound_is_stable<F: Field>(eq: &ExtQuiver, t: &BoundModule<F>, sub: &BoundSubTuple<F>) -> bool {
    eq.arrows.iter().enumerate().all(|(k, a)| {
        let img = sub[a.src].image_under(&t.mats[k]);
        sub[a.dst].contains(&img)
    })
}

/// The bound module carried by a stable tuple (a submodule), with inclusion
/// matrices per vertex.
pub fn bound_sub_module<F: Field>(
    eq: &ExtQuiver,
    field: &F,
    t: &BoundModule<F>,
    sub: &BoundSubTuple<F>,
) -> (BoundModule<F>, Vec<Matrix<F>>) {
    let dims: Vec<usize> = sub.iter().map(|s| s.dim()).collect();
    let mats: Vec<Matrix<F>> = eq
        .arrows
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let rhs = t.mats[k].mul(&sub[a.src].0);
            sub[a.dst].0.solve_matrix(&rhs).expect("tuple not arrow-stable")
        })
        .collect();
    let _ = field;
    (BoundModule { dims, mats }, sub.iter().map(|s| s.0.clone()).collect())
}

/// Quotient of a bound module by a stable tuple, with projection matrices.
pub fn bound_quotient<F: Field>(
    eq: &ExtQuiver,
    field: &F,
    t: &BoundModule<F>,
    sub: &BoundSubTuple<F>,
) -> (BoundModule<F>, Vec<Matrix<F>>) {
    let proj: Vec<Matrix<F>> = sub
        .iter()
        .enumerate()
        .map(|(v, s)| {
            if s.dim() == 0 {
                Matrix::identity(field.clone(), t.dims[v])
            } else if s.dim() == t.dims[v] {
                Matrix::zeros(field.clone(), 0, t.dims[v])
            } else {
                Matrix::from_rows(field.clone(), s.0.left_kernel_basis())
            }
        })
        .collect();
    let dims: Vec<usize> = proj.iter().map(|p| p.rows()).collect();
    let mats: Vec<Matrix<F>> = eq
        .arrows
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let rhs = proj[a.dst].mul(&t.mats[k]);
            proj[a.src].solve_left(&rhs).expect("projection has full row rank")
        })
        .collect();
    (BoundModule { dims, mats }, proj)
}

/// Direct sum of bound modules, block by block.
pub fn bound_direct_sum<F: Field>(eq: &ExtQuiver, field: &F, a: &BoundModule<F>, b: &BoundModule<F>) -> BoundModule<F> {
    let dims: Vec<usize> = a.dims.iter().zip(&b.dims).map(|(x, y)| x + y).collect();
    let mats = eq
        .arrows
        .iter()
        .enumerate()
        .map(|(k, arrow)| {
            let mut m = Matrix::zeros(field.clone(), dims[arrow.dst], dims[arrow.src]);
            m.paste(0, 0, &a.mats[k]);
            m.paste(a.dims[arrow.dst], a.dims[arrow.src], &b.mats[k]);
            m
        })
        .collect();
    BoundModule { dims, mats }
}

/// Smallest stable tuple containing the given spanning vectors per vertex:
/// close under all arrow images, then echelonize.
pub fn generated_submodule<F: Field>(
    eq: &ExtQuiver,
    field: &F,
    t: &BoundModule<F>,
    generators: &[(usize, Vec<F::Elem>)],
) -> BoundSubTuple<F> {
    let mut spans: Vec<Vec<Vec<F::Elem>>> = vec![Vec::new(); eq.n_vertices()];
    for (v, vec) in generators {
        spans[*v].push(vec.clone());
    }
    loop {
        let mut changed = false;
        for (k, a) in eq.arrows.iter().enumerate() {
            let images: Vec<Vec<F::Elem>> = spans[a.src].iter().map(|x| t.mats[k].mul_vec(x)).collect();
            for img in images {
                let current = Subspace::span(&Matrix::from_cols(field.clone(), t.dims[a.dst], &spans[a.dst]));
                if !current.contains_vec(&img) {
                    spans[a.dst].push(img);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..eq.n_vertices())
        .map(|v| Subspace::span(&Matrix::from_cols(field.clone(), t.dims[v], &spans[v])))
        .collect()
}

/// Deterministically samples a bound module over `F_p` for randomized
/// consistency checks: a generated submodule or a quotient of the canonical
/// image of a random representation, or a direct sum of two such.  All
/// outputs satisfy the relations by construction.
pub fn random_bound_module(eq: &ExtQuiver, fp: Fp, rng: &mut crate::rng::SplitMix64, max_dim: usize) -> BoundModule<Fp> {
    fn random_rep(eq: &ExtQuiver, fp: Fp, rng: &mut crate::rng::SplitMix64, max_dim: usize) -> Rep<Fp> {
        let q = &eq.base;
        let dims: Vec<usize> = (0..q.n_vertices()).map(|_| rng.below(max_dim as u64 + 1) as usize).collect();
        let mats = q
            .arrows()
            .iter()
            .map(|a| Matrix::from_fn(fp, dims[a.to], dims[a.from], |_, _| rng.below(fp.modulus())))
            .collect();
        Rep { dims, mats }
    }
    fn sample_once(eq: &ExtQuiver, fp: Fp, rng: &mut crate::rng::SplitMix64, max_dim: usize) -> BoundModule<Fp> {
        let m = random_rep(eq, fp, rng, max_dim);
        let t = phi(eq, &fp, &m);
        let n_gens = 1 + rng.below(3) as usize;
        let mut gens = Vec::new();
        for _ in 0..n_gens {
            let v = rng.below(eq.n_vertices() as u64) as usize;
            if t.dims[v] == 0 {
                continue;
            }
            let vec: Vec<u64> = (0..t.dims[v]).map(|_| rng.below(fp.modulus())).collect();
            gens.push((v, vec));
        }
        let sub = generated_submodule(eq, &fp, &t, &gens);
        if rng.below(2) == 0 {
            bound_sub_module(eq, &fp, &t, &sub).0
        } else {
            bound_quotient(eq, &fp, &t, &sub).0
        }
    }
    match rng.below(3) {
        0 | 1 => sample_once(eq, fp, rng, max_dim),
        _ => {
            let a = sample_once(eq, fp, rng, max_dim);
            let b = sample_once(eq, fp, rng, max_dim);
            bound_direct_sum(eq, &fp, &a, &b)
        }
    }
}

/// Reduces a rational bound module mod `p`; `None` if `p` divides a
/// denominator.
pub fn reduce_bound(t: &BoundModule<Rationals>, fp: Fp) -> Option<BoundModule<Fp>> {
    let mats = t
        .mats
        .iter()
        .map(|mat| {
            let mut out = Matrix::zeros(fp, mat.rows(), mat.cols());
            for i in 0..mat.rows() {
                for j in 0..mat.cols() {
                    out.set(i, j, fp.reduce_rational(mat.at(i, j))?);
                }
            }
            Some(out)
        })
        .collect::<Option<Vec<_>>>()?;
    Some(BoundModule { dims: t.dims.clone(), mats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;

    fn a4() -> Quiver {
        Quiver::from_arrows(4, &[(1, 2), (3, 2), (3, 4)])
    }

    #[test]
    fn extended_quiver_counts() {
        let q = a4();
        let eq = ExtQuiver::build(&q, 3, false).unwrap();
        assert_eq!(eq.n_vertices(), 12);
        assert_eq!(eq.arrows.len(), 17); // 8 vertical + 9 level
        assert_eq!(eq.virtuals.len(), 6);

        let eqs = ExtQuiver::build(&q, 3, true).unwrap();
        assert_eq!(eqs.n_vertices(), 12);
        assert_eq!(eqs.arrows.len(), 14); // 8 vertical + 6 level
        assert_eq!(eqs.virtuals.len(), 3);
    }

    #[test]
    fn depth_one_is_the_base_quiver() {
        let q = a4();
        let eq = ExtQuiver::build(&q, 1, false).unwrap();
        assert_eq!(eq.n_vertices(), 4);
        assert_eq!(eq.arrows.len(), 3);
        assert!(eq.virtuals.is_empty());
        assert_eq!(ExtQuiver::build(&q, 1, true), Err(ExtError::StrictNeedsDepthTwo));
        assert_eq!(ExtQuiver::build(&q, 0, false), Err(ExtError::DepthZero));
    }

    #[test]
    fn virtual_paths_really_are_parallel() {
        let q = a4();
        for strict in [false, true] {
            let eq = ExtQuiver::build(&q, 3, strict).unwrap();
            for c in &eq.virtuals {
                let (a1, a2) = c.path_a;
                let (b1, b2) = c.path_b;
                assert_eq!(eq.arrows[a1].src, c.src);
                assert_eq!(eq.arrows[b1].src, c.src);
                assert_eq!(eq.arrows[a2].dst, c.dst);
                assert_eq!(eq.arrows[b2].dst, c.dst);
                assert_eq!(eq.arrows[a1].dst, eq.arrows[a2].src);
                assert_eq!(eq.arrows[b1].dst, eq.arrows[b2].src);
                assert_ne!(c.path_a, c.path_b);
            }
        }
    }

    #[test]
    fn phi_satisfies_relations_and_preserves_hom() {
        let q = Quiver::from_arrows(2, &[(1, 2)]);
        let eq = ExtQuiver::build(&q, 2, false).unwrap();
        let p1 = Rep::new(&q, Rationals, vec![1, 1], vec![Matrix::identity(Rationals, 1)]).unwrap();
        let s1 = Rep::simple(&q, Rationals, 0);
        let s2 = Rep::simple(&q, Rationals, 1);
        for m in [&p1, &s1, &s2] {
            let t = phi(&eq, &Rationals, m);
            assert!(validate(&eq, &t).is_empty());
            assert_eq!(t.dim_vec(), eq.phi_dim(&m.dim_vec()));
        }
        // [Phi(M), Phi(N)] = [M, N]
        for m in [&p1, &s1, &s2] {
            for n in [&p1, &s1, &s2] {
                let tm = phi(&eq, &Rationals, m);
                let tn = phi(&eq, &Rationals, n);
                assert_eq!(
                    hom_r_dim(&eq, &Rationals, &tm, &tn),
                    crate::rep::hom_dim(&q, &Rationals, m, n)
                );
            }
        }
    }

    #[test]
    fn perturbed_phi_violates_a_specific_relation() {
        let q = Quiver::from_arrows(2, &[(1, 2)]);
        let eq = ExtQuiver::build(&q, 2, false).unwrap();
        let p1 = Rep::new(&q, Rationals, vec![1, 1], vec![Matrix::identity(Rationals, 1)]).unwrap();
        let mut t = phi(&eq, &Rationals, &p1);
        // perturb the level-2 copy of the arrow
        let idx = eq
            .arrows
            .iter()
            .position(|a| a.kind == ExtArrowKind::Level { arrow: 0, level: 2 })
            .unwrap();
        t.mats[idx] = t.mats[idx].scale(&crate::field::rat(2));
        assert_eq!(validate(&eq, &t), vec![0]);
        // the zero module is vacuously fine
        let z = BoundModule::zero(&eq, Rationals);
        assert!(validate(&eq, &z).is_empty());
    }

    #[test]
    fn euler_form_matches_ext_alternating_sum_for_phi() {
        let q = Quiver::from_arrows(2, &[(1, 2)]);
        let eq = ExtQuiver::build(&q, 2, false).unwrap();
        let p1 = Rep::new(&q, Rationals, vec![1, 1], vec![Matrix::identity(Rationals, 1)]).unwrap();
        let t = phi(&eq, &Rationals, &p1);
        let (e0, e1, e2) = ext_profile(&eq, &Rationals, &t, &t);
        assert_eq!((e0, e1, e2), (1, 0, 0));
        assert_eq!(eq.euler_form_r(&t.dim_vec(), &t.dim_vec()), 1);
    }

    #[test]
    fn ext_degree_guard() {
        let q = Quiver::from_arrows(2, &[(1, 2)]);
        let eq = ExtQuiver::build(&q, 2, false).unwrap();
        let z = BoundModule::zero(&eq, Rationals);
        assert_eq!(ext_r(&eq, &Rationals, &z, &z, 3), Err(ExtError::ExtDegreeOutOfRange(3)));
        assert_eq!(ext_r(&eq, &Rationals, &z, &z, 2), Ok(0));
    }

    #[test]
    fn phi_of_projective_is_projective_at_level_one() {
        // [Phi(P(i)), -] is exact iff Ext^1 and Ext^2 vanish against everything;
        // spot-check against Phi of the simples.
        let q = Quiver::from_arrows(2, &[(1, 2)]);
        let eq = ExtQuiver::build(&q, 2, false).unwrap();
        let p1 = Rep::new(&q, Rationals, vec![1, 1], vec![Matrix::identity(Rationals, 1)]).unwrap();
        let tp = phi(&eq, &Rationals, &p1);
        for i in 0..2 {
            let s = Rep::simple(&q, Rationals, i);
            let ts = phi(&eq, &Rationals, &s);
            let (_, e1, e2) = ext_profile(&eq, &Rationals, &tp, &ts);
            assert_eq!((e1, e2), (0, 0));
        }
    }
}
