//! Root systems of Dynkin and affine diagrams: positive roots by reflection
//! closure, the minimal positive imaginary root of an affine diagram, and the
//! Coxeter transformation attached to an orientation.
//!
//! Roots are always computed, never hard-coded; the table entries in the test
//! suite act as golden files.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{rat, Rationals};
use crate::matrix::Matrix;
use crate::quiver::{classify, DimVec, Family, Quiver, QuiverError};

/// Symmetric Cartan matrix of the underlying graph: `2` on the diagonal,
/// minus the number of edges between distinct vertices elsewhere.
pub fn cartan_matrix(q: &Quiver) -> Vec<Vec<i64>> {
    let n = q.n_vertices();
    let mut c = vec![vec![0i64; n]; n];
    for i in 0..n {
        c[i][i] = 2;
    }
    for a in q.arrows() {
        if a.from != a.to {
            c[a.from][a.to] -= 1;
            c[a.to][a.from] -= 1;
        }
    }
    c
}

/// Simple reflection `s_i` acting on a dimension vector.
pub fn reflect(cartan: &[Vec<i64>], i: usize, v: &DimVec) -> DimVec {
    let pairing: i64 = cartan[i].iter().zip(v).map(|(c, x)| c * x).sum();
    let mut out = v.clone();
    out[i] -= pairing;
    out
}

/// All positive roots of a Dynkin quiver's underlying graph, computed by
/// closing the simple roots under simple reflections.  Sorted by height then
/// lexicographically, so the maximal root comes last.
pub fn positive_roots(q: &Quiver) -> Result<Vec<DimVec>, QuiverError> {
    let shape = classify(q)?;
    if !shape.family.is_dynkin() {
        return Err(QuiverError::NotDynkin);
    }
    let cartan = cartan_matrix(q);
    let n = q.n_vertices();
    let mut roots: Vec<DimVec> = (0..n)
        .map(|i| {
            let mut e = vec![0i64; n];
            e[i] = 1;
            e
        })
        .collect();
    loop {
        let mut new = Vec::new();
        for r in &roots {
            for i in 0..n {
                let s = reflect(&cartan, i, r);
                if s.iter().all(|&x| x >= 0) && !roots.contains(&s) && !new.contains(&s) {
                    new.push(s);
                }
            }
        }
        if new.is_empty() {
            break;
        }
        roots.append(&mut new);
    }
    roots.sort_by(|a, b| {
        let (ha, hb) = (a.iter().sum::<i64>(), b.iter().sum::<i64>());
        ha.cmp(&hb).then(a.cmp(b))
    });
    Ok(roots)
}

/// The unique maximal positive root of a Dynkin quiver.
pub fn maximal_root(q: &Quiver) -> Result<DimVec, QuiverError> {
    let roots = positive_roots(q)?;
    let max = roots.last().expect("nonempty root system").clone();
    debug_assert!(roots.iter().all(|r| crate::quiver::dim_leq(r, &max)));
    Ok(max)
}

/// The minimal positive imaginary root `delta` of an affine diagram, computed
/// as the primitive positive integer vector spanning the radical of the
/// Cartan matrix.
pub fn minimal_imaginary_root(q: &Quiver) -> Result<DimVec, QuiverError> {
    let shape = classify(q)?;
    if !shape.family.is_affine() {
        return Err(QuiverError::NotAffine);
    }
    let cartan = cartan_matrix(q);
    let n = q.n_vertices();
    let m = Matrix::from_fn(Rationals, n, n, |i, j| rat(cartan[i][j]));
    let ker = m.kernel_basis();
    assert_eq!(ker.len(), 1, "affine Cartan matrix has a 1-dimensional radical");
    let v = &ker[0];
    // clear denominators and divide by gcd
    let lcm = v.iter().fold(num_bigint::BigInt::from(1), |acc, x| {
        num_integer::Integer::lcm(&acc, x.denom())
    });
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    let gcd = ints.iter().fold(num_bigint::BigInt::from(0), |acc, x| {
        num_integer::Integer::gcd(&acc, x)
    });
    let mut out: Vec<i64> = ints
        .iter()
        .map(|x| {
            let q = x / &gcd;
            i64::try_from(&q).expect("delta entries are small")
        })
        .collect();
    if out.iter().any(|&x| x < 0) {
        for x in &mut out {
            *x = -*x;
        }
    }
    assert!(out.iter().all(|&x| x > 0), "delta is sincere and positive");
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoxeterError {
    Cyclic,
    /// The input corresponds to a projective (or, for the inverse transform,
    /// an injective) indecomposable: the transform leaves the root system.
    LeavesRootSystem,
}

impl core::fmt::Display for CoxeterError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CoxeterError::Cyclic => write!(f, "quiver has an oriented cycle"),
            CoxeterError::LeavesRootSystem => {
                write!(f, "transform leaves the root system (projective/injective input)")
            }
        }
    }
}

impl core::error::Error for CoxeterError {}

/// Dimension vector of `tau M` for the indecomposable `M` with dimension
/// vector `v`, computed by the Coxeter transformation of the orientation:
/// simple reflections applied sink-first along a topological order.
pub fn coxeter_transform(q: &Quiver, v: &DimVec) -> Result<DimVec, CoxeterError> {
    coxeter_apply(q, v, false)
}

/// Dimension vector of `tau^{-1} M`; reflections applied source-first.
pub fn coxeter_transform_inv(q: &Quiver, v: &DimVec) -> Result<DimVec, CoxeterError> {
    coxeter_apply(q, v, true)
}

fn coxeter_apply(q: &Quiver, v: &DimVec, inverse: bool) -> Result<DimVec, CoxeterError> {
    let topo = q.topological_order().map_err(|_| CoxeterError::Cyclic)?;
    let cartan = cartan_matrix(q);
    let mut cur = v.clone();
    let order: Vec<usize> = if inverse {
        topo
    } else {
        topo.into_iter().rev().collect()
    };
    for i in order {
        cur = reflect(&cartan, i, &cur);
        // once any entry goes negative it never recovers for a root input
    }
    if cur.iter().any(|&x| x < 0) {
        return Err(CoxeterError::LeavesRootSystem);
    }
    Ok(cur)
}

/// Dimension vectors of the indecomposable projectives: the support of the
/// set of vertices reachable from `i`.
pub fn projective_dims(q: &Quiver) -> Vec<DimVec> {
    (0..q.n_vertices()).map(|i| reach_dim(q, i, false)).collect()
}

/// Dimension vectors of the indecomposable injectives: vertices that reach `i`.
pub fn injective_dims(q: &Quiver) -> Vec<DimVec> {
    (0..q.n_vertices()).map(|i| reach_dim(q, i, true)).collect()
}

fn reach_dim(q: &Quiver, i: usize, backwards: bool) -> DimVec {
    let n = q.n_vertices();
    let mut seen = vec![false; n];
    seen[i] = true;
    let mut stack = vec![i];
    while let Some(v) = stack.pop() {
        for a in q.arrows() {
            let (s, t) = if backwards { (a.to, a.from) } else { (a.from, a.to) };
            if s == v && !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    seen.into_iter().map(|b| if b { 1 } else { 0 }).collect()
}

/// A canonical quiver for each family and rank, oriented toward lower indices
/// along the bottom chain.  Only the underlying graph matters for root-system
/// computations; the orientation is a convenience for representation-level
/// tests.
pub fn canonical_quiver(family: Family, rank: usize) -> Option<Quiver> {
    let chain = |n: usize| -> Vec<(usize, usize)> { (1..n).map(|i| (i + 1, i)).collect() };
    match family {
        Family::A => {
            if rank == 0 {
                return None;
            }
            Some(Quiver::from_arrows(rank, &chain(rank)))
        }
        Family::D => {
            if rank < 4 {
                return None;
            }
            // bottom chain 1..rank-1, raised vertex rank attached to rank-2
            let mut arrows = chain(rank - 1);
            arrows.push((rank, rank - 2));
            Some(Quiver::from_arrows(rank, &arrows))
        }
        Family::E => {
            if !(6..=8).contains(&rank) {
                return None;
            }
            // bottom chain 1..rank-1 with branch at position rank-3, raised = rank
            let mut arrows = chain(rank - 1);
            arrows.push((rank, rank - 3));
            Some(Quiver::from_arrows(rank, &arrows))
        }
        Family::AffineA => {
            if rank < 1 {
                return None;
            }
            let n = rank + 1;
            let mut arrows: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
            arrows.push((n, 1));
            Some(Quiver::from_arrows(n, &arrows))
        }
        Family::AffineD => {
            if rank < 4 {
                return None;
            }
            // bottom chain 1..rank-1 plus raised leaves rank at 2 and rank+1 at rank-2
            let n = rank + 1;
            let mut arrows = chain(rank - 1);
            arrows.push((rank, 2));
            arrows.push((n, rank - 2));
            Some(Quiver::from_arrows(n, &arrows))
        }
        Family::AffineE => match rank {
            6 => {
                // bottom 1..5, raised arm 6-7 attached to 3
                let mut arrows = chain(5);
                arrows.push((6, 3));
                arrows.push((7, 6));
                Some(Quiver::from_arrows(7, &arrows))
            }
            7 => {
                // bottom 1..7, raised 8 attached to 4
                let mut arrows = chain(7);
                arrows.push((8, 4));
                Some(Quiver::from_arrows(8, &arrows))
            }
            8 => {
                // bottom 1..8, raised 9 attached to 6
                let mut arrows = chain(8);
                arrows.push((9, 6));
                Some(Quiver::from_arrows(9, &arrows))
            }
            _ => None,
        },
        Family::Other => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::render_stacked;

    #[test]
    fn a2_roots() {
        let q = canonical_quiver(Family::A, 2).unwrap();
        let roots = positive_roots(&q).unwrap();
        assert_eq!(roots, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn root_counts() {
        // |positive roots| = n(n+1)/2 for A_n, n(n-1) for D_n, 36 for E6,
        // 63 for E7, 120 for E8
        for (fam, rank, count) in [
            (Family::A, 4, 10),
            (Family::D, 4, 12),
            (Family::D, 5, 20),
            (Family::E, 6, 36),
            (Family::E, 7, 63),
            (Family::E, 8, 120),
        ] {
            let q = canonical_quiver(fam, rank).unwrap();
            assert_eq!(positive_roots(&q).unwrap().len(), count, "{fam:?}{rank}");
        }
    }

    #[test]
    fn e6_maximal_root_matches_table() {
        let q = canonical_quiver(Family::E, 6).unwrap();
        let max = maximal_root(&q).unwrap();
        assert_eq!(max, vec![1, 2, 3, 2, 1, 2]);
        let shape = classify(&q).unwrap();
        assert_eq!(render_stacked(&shape, &max), "    2\n1 2 3 2 1");
    }

    #[test]
    fn reflection_closure_agrees_with_tits_form_enumeration() {
        // Independent oracle: the positive roots of a Dynkin diagram are
        // exactly the nonzero vectors 0 <= v <= (maximal root) with Euler-Tits
        // norm 1.  Enumerate the box brute-force and compare sets.
        for (fam, rank) in [(Family::A, 3), (Family::D, 4), (Family::E, 6)] {
            let q = canonical_quiver(fam, rank).unwrap();
            let roots = positive_roots(&q).unwrap();
            let max = roots.last().unwrap().clone();
            let mut brute = std::vec::Vec::new();
            let mut v = vec![0i64; max.len()];
            loop {
                if v.iter().any(|&x| x > 0) && crate::quiver::euler_form_kq(&q, &v, &v) == 1 {
                    brute.push(v.clone());
                }
                // odometer over the box [0, max]
                let mut k = 0;
                loop {
                    if k == v.len() {
                        break;
                    }
                    v[k] += 1;
                    if v[k] <= max[k] {
                        break;
                    }
                    v[k] = 0;
                    k += 1;
                }
                if k == v.len() {
                    break;
                }
            }
            brute.sort_by(|a, b| {
                let (ha, hb) = (a.iter().sum::<i64>(), b.iter().sum::<i64>());
                ha.cmp(&hb).then(a.cmp(b))
            });
            assert_eq!(roots, brute, "{fam:?}{rank}");
        }
    }

    #[test]
    fn dynkin_roots_have_euler_norm_one() {
        for (fam, rank) in [(Family::A, 3), (Family::D, 4), (Family::E, 6)] {
            let q = canonical_quiver(fam, rank).unwrap();
            for r in positive_roots(&q).unwrap() {
                assert_eq!(crate::quiver::euler_form_kq(&q, &r, &r), 1);
            }
        }
    }

    #[test]
    fn affine_deltas() {
        let q = canonical_quiver(Family::AffineA, 4).unwrap();
        assert_eq!(minimal_imaginary_root(&q).unwrap(), vec![1; 5]);

        let q = canonical_quiver(Family::AffineD, 4).unwrap();
        assert_eq!(minimal_imaginary_root(&q).unwrap(), vec![1, 2, 1, 1, 1]);

        let q = canonical_quiver(Family::AffineE, 8).unwrap();
        assert_eq!(minimal_imaginary_root(&q).unwrap(), vec![1, 2, 3, 4, 5, 6, 4, 2, 3]);
    }

    #[test]
    fn coxeter_a2() {
        // 1 -> 2: tau S(1) = S(2), tau P(1) leaves the root system
        let q = Quiver::from_arrows(2, &[(1, 2)]);
        assert_eq!(coxeter_transform(&q, &vec![1, 0]).unwrap(), vec![0, 1]);
        assert_eq!(coxeter_transform(&q, &vec![1, 1]), Err(CoxeterError::LeavesRootSystem));
        assert_eq!(coxeter_transform(&q, &vec![0, 1]), Err(CoxeterError::LeavesRootSystem));
        // inverse undoes it
        assert_eq!(coxeter_transform_inv(&q, &vec![0, 1]).unwrap(), vec![1, 0]);
    }

    #[test]
    fn coxeter_roundtrip_on_non_projectives() {
        let q = canonical_quiver(Family::D, 4).unwrap();
        let projs = projective_dims(&q);
        for r in positive_roots(&q).unwrap() {
            if projs.contains(&r) {
                assert!(coxeter_transform(&q, &r).is_err());
            } else {
                let t = coxeter_transform(&q, &r).unwrap();
                assert_eq!(coxeter_transform_inv(&q, &t).unwrap(), r);
            }
        }
    }

    #[test]
    fn e7_maximal_root_computed() {
        // the table's E7 row read long-arm-first
        let q = canonical_quiver(Family::E, 7).unwrap();
        assert_eq!(maximal_root(&q).unwrap(), vec![1, 2, 3, 4, 3, 2, 2]);
    }
}
