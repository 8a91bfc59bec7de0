//! Property tests for the exact-linear-algebra kit and the homological
//! identities that everything else leans on.

use proptest::prelude::*;

use qp_core::field::{rat, Fp, Rationals};
use qp_core::grassmann::interpolate_polynomial;
use qp_core::matrix::Matrix;
use qp_core::quiver::{euler_form_kq, Quiver};
use qp_core::rep::{ext1_dim, hom_dim, Rep};

fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-4i64..5, r * c).prop_map(move |data| (r, c, data))
    })
}

proptest! {
    #[test]
    fn rank_plus_nullity_is_cols((r, c, data) in small_matrix()) {
        let m = Matrix::from_fn(Rationals, r, c, |i, j| rat(data[i * c + j]));
        prop_assert_eq!(m.rank() + m.kernel_basis().len(), c);
        // rank is invariant under transpose
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn rank_agrees_mod_safe_primes((r, c, data) in small_matrix()) {
        let m = Matrix::from_fn(Rationals, r, c, |i, j| rat(data[i * c + j]));
        // a prime larger than any minor survives reduction; 10007 is plenty
        // for 4x4 integer matrices with entries in [-4, 4]
        let fp = Fp::new(10007).unwrap();
        let mp = Matrix::from_fn(fp, r, c, |i, j| fp.reduce_i64(data[i * c + j]));
        prop_assert_eq!(m.rank(), mp.rank());
    }

    #[test]
    fn kernel_vectors_are_killed((r, c, data) in small_matrix()) {
        let m = Matrix::from_fn(Rationals, r, c, |i, j| rat(data[i * c + j]));
        for k in m.kernel_basis() {
            let image = m.mul_vec(&k);
            prop_assert!(image.iter().all(|x| x == &rat(0)));
        }
    }

    #[test]
    fn solve_finds_actual_solutions((r, c, data) in small_matrix(), xs in proptest::collection::vec(-3i64..4, 0..5)) {
        let m = Matrix::from_fn(Rationals, r, c, |i, j| rat(data[i * c + j]));
        // build a consistent right-hand side from a known solution
        let x: Vec<_> = (0..c).map(|j| rat(*xs.get(j).unwrap_or(&1))).collect();
        let b = m.mul_vec(&x);
        let sol = m.solve(&b).expect("consistent by construction");
        prop_assert_eq!(m.mul_vec(&sol), b);
    }

    #[test]
    fn euler_identity_on_a3_representations(dims in proptest::collection::vec(0usize..3, 3), entries in proptest::collection::vec(-2i64..3, 8)) {
        let q = Quiver::from_arrows(3, &[(1, 2), (2, 3)]);
        let mut it = entries.into_iter();
        let mats: Vec<Matrix<Rationals>> = q
            .arrows()
            .iter()
            .map(|a| {
                Matrix::from_fn(Rationals, dims[a.to], dims[a.from], |_, _| rat(it.next().unwrap_or(0)))
            })
            .collect();
        let m = Rep::new(&q, Rationals, dims.clone(), mats).unwrap();
        let h = hom_dim(&q, &Rationals, &m, &m) as i64;
        let e = ext1_dim(&q, &Rationals, &m, &m).unwrap() as i64;
        prop_assert_eq!(h - e, euler_form_kq(&q, &m.dim_vec(), &m.dim_vec()));
    }

    #[test]
    fn interpolation_reproduces_polynomials(coeffs in proptest::collection::vec(0u64..5, 1..5)) {
        // evaluate a known polynomial at enough primes and recover it
        let eval = |q: u64| -> u64 {
            coeffs.iter().rev().fold(0u64, |acc, &c| acc * q + c)
        };
        let primes = [2u64, 3, 5, 7, 11];
        let pts: Vec<(u64, u64)> = primes.iter().take(coeffs.len()).map(|&p| (p, eval(p))).collect();
        let poly = interpolate_polynomial(&pts, coeffs.len() - 1).unwrap();
        let mut expect = coeffs.clone();
        while expect.len() > 1 && *expect.last().unwrap() == 0 {
            expect.pop();
        }
        let got: Vec<u64> = poly.coeffs.iter().map(|c| u64::try_from(c).unwrap()).collect();
        prop_assert_eq!(got, expect);
    }
}
