//! Representations of a quiver over an exact field: Hom and Ext^1 spaces,
//! order statistics, subrepresentations and quotients, and Krull-Schmidt
//! decomposition by Hom-counts against a table of indecomposables.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{Field, Fp, Rationals};
use crate::matrix::{Matrix, Subspace};
use crate::quiver::{euler_form_kq, DimVec, Quiver};

/// A representation: one space per vertex, one matrix per arrow.
/// The matrix of an arrow has `dim(target)` rows and `dim(source)` columns.
#[derive(Clone, PartialEq)]
pub struct Rep<F: Field> {
    pub dims: Vec<usize>,
    pub mats: Vec<Matrix<F>>,
}

impl<F: Field> fmt::Debug for Rep<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rep(dims = {:?})", self.dims)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepError {
    ShapeMismatch,
    QuiverMismatch,
    CyclicQuiver,
    NotIndecomposable,
    InconsistentDecomposition,
    NotTypeE,
    InvalidRoot,
}

impl fmt::Display for RepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepError::ShapeMismatch => write!(f, "matrix shapes do not match vertex dimensions"),
            RepError::QuiverMismatch => write!(f, "representations live over different quivers"),
            RepError::CyclicQuiver => write!(f, "operation requires an acyclic quiver"),
            RepError::NotIndecomposable => write!(f, "representation is not indecomposable"),
            RepError::InconsistentDecomposition => {
                write!(f, "Hom-count system has no nonnegative integer solution (malformed representation?)")
            }
            RepError::NotTypeE => write!(f, "operation requires a quiver of type E"),
            RepError::InvalidRoot => write!(f, "dimension vector is not a positive root of this quiver"),
        }
    }
}
impl core::error::Error for RepError {}


impl<F: Field> Rep<F> {
    pub fn new(q: &Quiver, field: F, dims: Vec<usize>, mats: Vec<Matrix<F>>) -> Result<Self, RepError> {
        if dims.len() != q.n_vertices() || mats.len() != q.arrows().len() {
            return Err(RepError::ShapeMismatch);
        }
        for (a, m) in q.arrows().iter().zip(&mats) {
            if m.rows() != dims[a.to] || m.cols() != dims[a.from] {
                return Err(RepError::ShapeMismatch);
            }
        }
        let _ = field;
        Ok(Rep { dims, mats })
    }

    pub fn zero(q: &Quiver, field: F) -> Self {
        let dims = vec![0; q.n_vertices()];
        let mats = q.arrows().iter().map(|_| Matrix::zeros(field.clone(), 0, 0)).collect();
        Rep { dims, mats }
    }

    pub fn dim_vec(&self) -> DimVec {
        self.dims.iter().map(|&d| d as i64).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Simple representation at vertex `i`.
    pub fn simple(q: &Quiver, field: F, i: usize) -> Self {
        let mut dims = vec![0; q.n_vertices()];
        dims[i] = 1;
        let mats = q
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(field.clone(), dims[a.to], dims[a.from]))
            .collect();
        Rep { dims, mats }
    }

    /// Direct sum, with the summands' coordinates in block order.
    pub fn direct_sum(&self, q: &Quiver, other: &Self, field: F) -> Self {
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mats = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let mut m = Matrix::zeros(field.clone(), dims[a.to], dims[a.from]);
                m.paste(0, 0, &self.mats[k]);
                m.paste(self.dims[a.to], self.dims[a.from], &other.mats[k]);
                m
            })
            .collect();
        Rep { dims, mats }
    }

    /// The largest vertex dimension.
    pub fn ord(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(0)
    }
}

/// A morphism of representations: one matrix per vertex, commuting with every
/// arrow (exactly).
#[derive(Clone, PartialEq)]
pub struct Morphism<F: Field> {
    pub mats: Vec<Matrix<F>>,
}

impl<F: Field> fmt::Debug for Morphism<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({} vertices)", self.mats.len())
    }
}

impl<F: Field> Morphism<F> {
    pub fn commutes(&self, q: &Quiver, m: &Rep<F>, n: &Rep<F>) -> bool {
        q.arrows().iter().enumerate().all(|(k, a)| {
            self.mats[a.to].mul(&m.mats[k]) == n.mats[k].mul(&self.mats[a.from])
        })
    }

    pub fn compose(&self, first: &Morphism<F>) -> Morphism<F> {
        // self after first
        let mats = self.mats.iter().zip(&first.mats).map(|(g, f)| g.mul(f)).collect();
        Morphism { mats }
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(|m| m.is_zero())
    }

    pub fn is_mono(&self) -> bool {
        self.mats.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_epi(&self) -> bool {
        self.mats.iter().all(|m| m.rank() == m.rows())
    }

    pub fn is_iso(&self) -> bool {
        self.mats.iter().all(|m| m.rows() == m.cols() && m.rank() == m.rows())
    }

    pub fn identity(field: F, rep: &Rep<F>) -> Self {
        Morphism { mats: rep.dims.iter().map(|&d| Matrix::identity(field.clone(), d)).collect() }
    }

    pub fn add(&self, other: &Morphism<F>) -> Morphism<F> {
        Morphism { mats: self.mats.iter().zip(&other.mats).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, c: &F::Elem) -> Morphism<F> {
        Morphism { mats: self.mats.iter().map(|m| m.scale(c)).collect() }
    }
}

/// Basis of `Hom(M, N)` as the kernel of the commuting-square linear system.
/// Basis order is the deterministic order induced by the kernel pivot order.
pub fn hom_space<F: Field>(q: &Quiver, field: &F, m: &Rep<F>, n: &Rep<F>) -> Vec<Morphism<F>> {
    // unknowns: entries of f_v (dim N_v x dim M_v), flattened row-major per vertex
    let n_vertices = q.n_vertices();
    let mut offsets = vec![0usize; n_vertices + 1];
    for v in 0..n_vertices {
        offsets[v + 1] = offsets[v] + n.dims[v] * m.dims[v];
    }
    let total = offsets[n_vertices];
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for (k, a) in q.arrows().iter().enumerate() {
        let (s, t) = (a.from, a.to);
        // f_t * M_a - N_a * f_s = 0, entrywise (i, j): i < dim N_t, j < dim M_s
        for i in 0..n.dims[t] {
            for j in 0..m.dims[s] {
                let mut row = vec![field.zero(); total];
                // (f_t * M_a)[i][j] = sum_l f_t[i][l] * M_a[l][j]
                for l in 0..m.dims[t] {
                    let idx = offsets[t] + i * m.dims[t] + l;
                    row[idx] = field.add(&row[idx], m.mats[k].at(l, j));
                }
                // -(N_a * f_s)[i][j] = -sum_l N_a[i][l] * f_s[l][j]
                for l in 0..n.dims[s] {
                    let idx = offsets[s] + l * m.dims[s] + j;
                    row[idx] = field.sub(&row[idx], n.mats[k].at(i, l));
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
                    Matrix::from_fn(field.clone(), n.dims[v], m.dims[v], |i, j| {
                        x[offsets[v] + i * m.dims[v] + j].clone()
                    })
                })
                .collect();
            Morphism { mats }
        })
        .collect()
}

pub fn hom_dim<F: Field>(q: &Quiver, field: &F, m: &Rep<F>, n: &Rep<F>) -> usize {
    hom_space(q, field, m, n).len()
}

/// `dim Ext^1(M, N)` over an acyclic quiver, via the hereditary identity
/// `[M,N] - [M,N]^1 = <dim M, dim N>`.
pub fn ext1_dim<F: Field>(q: &Quiver, field: &F, m: &Rep<F>, n: &Rep<F>) -> Result<usize, RepError> {
    if !q.is_acyclic() {
        return Err(RepError::CyclicQuiver);
    }
    let hom = hom_dim(q, field, m, n) as i64;
    let euler = euler_form_kq(q, &m.dim_vec(), &n.dim_vec());
    let e = hom - euler;
    debug_assert!(e >= 0);
    Ok(e as usize)
}

/// `ord_e(M) = dim M_e` at the unique trivalent vertex of a type-E quiver.
pub fn ord_e<F: Field>(q: &Quiver, m: &Rep<F>) -> Result<usize, RepError> {
    let shape = crate::quiver::classify(&q.clone()).map_err(|_| RepError::NotTypeE)?;
    if shape.family != crate::quiver::Family::E {
        return Err(RepError::NotTypeE);
    }
    let deg = q.undirected_degrees();
    let e = (0..q.n_vertices()).find(|&v| deg[v] == 3).expect("type E has a trivalent vertex");
    Ok(m.dims[e])
}

/// A subrepresentation described by a subspace at each vertex editor; the
/// subspaces must be arrow-stable.
pub type SubTuple<F> = Vec<Subspace<F>>;

/// Checks arrow stability of a tuple of subspaces.
pub fn is_stable<F: Field>(q: &Quiver, m: &Rep<F>, t: &SubTuple<F>) -> bool {
    q.arrows().iter().enumerate().all(|(k, a)| {
        let img = t[a.from].image_under(&m.mats[k]);
        t[a.to].contains(&img)
    })
}

/// The subrepresentation carried by a stable tuple, with its inclusion.
pub fn sub_rep<F: Field>(q: &Quiver, field: &F, m: &Rep<F>, t: &SubTuple<F>) -> (Rep<F>, Morphism<F>) {
    let dims: Vec<usize> = t.iter().map(|s| s.dim()).collect();
    let mats: Vec<Matrix<F>> = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            // restriction: solve  T_target * X = M_a * T_source
            let rhs = m.mats[k].mul(&t[a.from].0);
            t[a.to].0.solve_matrix(&rhs).expect("tuple not arrow-stable")
        })
        .collect();
    let _ = field;
    let incl = Morphism { mats: t.iter().map(|s| s.0.clone()).collect() };
    (Rep { dims, mats }, incl)
}

/// Quotient of `m` by a stable tuple, with its projection.  The projection at
/// each vertex is a left kernel basis of the inclusion, so entries stay exact.
pub fn quotient_rep<F: Field>(q: &Quiver, field: &F, m: &Rep<F>, t: &SubTuple<F>) -> (Rep<F>, Morphism<F>) {
    let proj: Vec<Matrix<F>> = t
        .iter()
        .enumerate()
        .map(|(v, s)| {
            let rows = complement_projection(field, m.dims[v], s);
            rows
        })
        .collect();
    let dims: Vec<usize> = proj.iter().map(|p| p.rows()).collect();
    let mats: Vec<Matrix<F>> = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            // induced map C_a with C_a * proj_s = proj_t * M_a
            let rhs = proj[a.to].mul(&m.mats[k]);
            proj[a.from]
                .solve_left(&rhs)
                .expect("projection has full row rank")
        })
        .collect();
    (Rep { dims, mats }, Morphism { mats: proj })
}

/// A full-row-rank matrix `P` with `P * basis = 0`, i.e. coordinates on a
/// complement of the subspace.
fn complement_projection<F: Field>(field: &F, ambient: usize, s: &Subspace<F>) -> Matrix<F> {
    let codim = ambient - s.dim();
    if codim == 0 {
        return Matrix::zeros(field.clone(), 0, ambient);
    }
    if s.dim() == 0 {
        return Matrix::identity(field.clone(), ambient);
    }
    let left = s.0.left_kernel_basis();
    debug_assert_eq!(left.len(), codim);
    Matrix::from_rows(field.clone(), left)
}

/// Kernel of a morphism as a stable tuple in the source.
pub fn kernel_tuple<F: Field>(f: &Morphism<F>) -> SubTuple<F> {
    f.mats
        .iter()
        .map(|m| {
            let cols = m.kernel_basis();
            Subspace::span(&Matrix::from_cols(m.field().clone(), m.cols(), &cols))
        })
        .collect()
}

/// Image of a morphism as a stable tuple in the target.
pub fn image_tuple<F: Field>(f: &Morphism<F>) -> SubTuple<F> {
    f.mats.iter().map(|m| Subspace::span(m)).collect()
}

/// Reduces a rational representation mod `p`.  `None` when `p` divides a
/// denominator.
pub fn reduce_rep(m: &Rep<Rationals>, fp: Fp) -> Option<Rep<Fp>> {
    let mats = m
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
    Some(Rep { dims: m.dims.clone(), mats })
}

/// Prime-safety guard: `p` is accepted for `m` when reduction succeeds and
/// the End/self-extension dimensions are unchanged mod `p`.
pub fn prime_is_safe(q: &Quiver, m: &Rep<Rationals>, fp: Fp) -> bool {
    let Some(mp) = reduce_rep(m, fp) else {
        return false;
    };
    let end_q = hom_dim(q, &Rationals, m, m);
    let end_p = hom_dim(q, &fp, &mp, &mp);
    end_q == end_p
}

/// The first `count` primes that pass the guard for every representation in
/// `reps`, starting from 2.
pub fn safe_primes(q: &Quiver, reps: &[&Rep<Rationals>], count: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while out.len() < count {
        if let Some(fp) = Fp::new(p) {
            if reps.iter().all(|m| prime_is_safe(q, m, fp)) {
                out.push(p);
            }
        }
        p += 1;
        assert!(p < 10_000, "ran out of candidate primes");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use crate::quiver::Quiver;

    fn a2() -> Quiver {
        Quiver::from_arrows(2, &[(1, 2)])
    }

    /// P(1) of A2 (1 -> 2): K --id--> K.
    fn p1(q: &Quiver) -> Rep<Rationals> {
        Rep::new(q, Rationals, vec![1, 1], vec![Matrix::identity(Rationals, 1)]).unwrap()
    }

    #[test]
    fn simples_have_no_homs() {
        let q = a2();
        let s1 = Rep::simple(&q, Rationals, 0);
        let s2 = Rep::simple(&q, Rationals, 1);
        assert_eq!(hom_dim(&q, &Rationals, &s1, &s2), 0);
        assert_eq!(hom_dim(&q, &Rationals, &s2, &s1), 0);
        assert_eq!(hom_dim(&q, &Rationals, &s1, &s1), 1);
    }

    #[test]
    fn ext_of_simples_on_a2() {
        let q = a2();
        let s1 = Rep::simple(&q, Rationals, 0);
        let s2 = Rep::simple(&q, Rationals, 1);
        // [S(1), S(2)]^1 = 1 on 1 -> 2
        assert_eq!(ext1_dim(&q, &Rationals, &s1, &s2).unwrap(), 1);
        assert_eq!(ext1_dim(&q, &Rationals, &s2, &s1).unwrap(), 0);
        assert_eq!(ext1_dim(&q, &Rationals, &s1, &s1).unwrap(), 0);
    }

    #[test]
    fn hom_from_projective_counts_dimension() {
        let q = a2();
        let p = p1(&q);
        let s2 = Rep::simple(&q, Rationals, 1);
        // Hom(P(i), M) = M_i
        assert_eq!(hom_dim(&q, &Rationals, &p, &s2), 0); // S(2)_1 = 0
        assert_eq!(hom_dim(&q, &Rationals, &s2, &p), 1); // P(2) -> P(1) socle
        assert_eq!(hom_dim(&q, &Rationals, &p, &p), 1);
    }

    #[test]
    fn sub_and_quotient() {
        let q = a2();
        let p = p1(&q);
        // socle S(2) inside P(1): subspace (0, K)
        let t: SubTuple<Rationals> = vec![
            Subspace::zero(Rationals, 1),
            Subspace::full(Rationals, 1),
        ];
        assert!(is_stable(&q, &p, &t));
        let (s, incl) = sub_rep(&q, &Rationals, &p, &t);
        assert_eq!(s.dim_vec(), vec![0, 1]);
        assert!(incl.commutes(&q, &s, &p));
        let (quot, proj) = quotient_rep(&q, &Rationals, &p, &t);
        assert_eq!(quot.dim_vec(), vec![1, 0]);
        assert!(proj.commutes(&q, &p, &quot));
        // the top S(1) is not stable
        let bad: SubTuple<Rationals> = vec![
            Subspace::full(Rationals, 1),
            Subspace::zero(Rationals, 1),
        ];
        assert!(!is_stable(&q, &p, &bad));
    }

    #[test]
    fn euler_identity_random_sums() {
        let q = Quiver::from_arrows(3, &[(1, 2), (3, 2)]);
        let s2 = Rep::simple(&q, Rationals, 1);
        let m = Rep::new(
            &q,
            Rationals,
            vec![1, 1, 1],
            vec![Matrix::identity(Rationals, 1), Matrix::identity(Rationals, 1)],
        )
        .unwrap();
        let sum = m.direct_sum(&q, &s2, Rationals);
        for (x, y) in [(&m, &s2), (&s2, &m), (&sum, &m), (&m, &sum)] {
            let h = hom_dim(&q, &Rationals, x, y) as i64;
            let e = ext1_dim(&q, &Rationals, x, y).unwrap() as i64;
            assert_eq!(h - e, euler_form_kq(&q, &x.dim_vec(), &y.dim_vec()));
        }
    }

    #[test]
    fn reduction_guard() {
        let q = a2();
        // arrow matrix [1/3]: reduction mod 3 must be rejected
        let m = Rep::new(
            &q,
            Rationals,
            vec![1, 1],
            vec![Matrix::from_rows(Rationals, vec![vec![rat(1) / rat(3)]])],
        )
        .unwrap();
        assert!(reduce_rep(&m, Fp::new(3).unwrap()).is_none());
        assert!(prime_is_safe(&q, &m, Fp::new(2).unwrap()));
        // [2]: mod 2 the arrow degenerates and End jumps from 1 to 2
        let m2 = Rep::new(
            &q,
            Rationals,
            vec![1, 1],
            vec![Matrix::from_rows(Rationals, vec![vec![rat(2)]])],
        )
        .unwrap();
        assert!(!prime_is_safe(&q, &m2, Fp::new(2).unwrap()));
        assert_eq!(safe_primes(&q, &[&m2], 2), vec![3, 5]);
    }
}
