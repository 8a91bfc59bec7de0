//! End-to-end checks of the paving engine against brute-force point counts
//! over small prime fields: exact equality of `sum mult q^d` with the
//! enumerated number of submodules, for every dimension vector.

use qp_core::artheory::knit;
use qp_core::extended::{phi, ExtQuiver};
use qp_core::field::Fp;
use qp_core::grassmann::{count_submodules_all, Budget};
use qp_core::paving::Paver;
use qp_core::quiver::Quiver;
use qp_core::rep::reduce_rep;

fn verify_paving_everywhere(q: &Quiver, roots_to_check: &[Vec<i64>], d: usize, strict: bool, primes: &[u64]) {
    let ar = knit(q).unwrap();
    let mut paver = Paver::new(&ar, d, strict).unwrap();
    for root in roots_to_check {
        let node = ar.node_by_root(root).unwrap_or_else(|| panic!("{root:?} is a root"));
        let m = ar.nodes[node].rep.clone();
        for &p in primes {
            let fp = Fp::new(p).unwrap();
            let mp = reduce_rep(&m, fp).expect("knitted models reduce mod small primes");
            let eq = ExtQuiver::build(q, d, strict).unwrap();
            let t = phi(&eq, &fp, &mp);
            let mut budget = Budget::default();
            let table = count_submodules_all(&eq, fp, &t, &mut budget).unwrap();
            // every f with a nonzero brute count, and a sample of zero ones
            for (f, &count) in &table {
                let cells = paver
                    .pave(&m, f)
                    .unwrap_or_else(|e| panic!("unresolved at {root:?} f={f:?}: {e}"));
                assert_eq!(cells.eval(p), count as u128, "paving vs brute at {root:?} f={f:?} p={p}");
                let recursive = paver.count(&m, f, p).unwrap();
                assert_eq!(recursive, count as u128, "count_recursive vs brute at {root:?} f={f:?} p={p}");
            }
        }
    }
}

#[test]
fn a3_indecomposables_d2_both_flavors() {
    let q = Quiver::from_arrows(3, &[(1, 2), (2, 3)]);
    let roots: Vec<Vec<i64>> = qp_core::roots::positive_roots(&q).unwrap();
    verify_paving_everywhere(&q, &roots, 2, false, &[2, 3]);
    verify_paving_everywhere(&q, &roots, 2, true, &[2, 3]);
}

#[test]
fn d4_maximal_root_d1_and_d2() {
    let q = Quiver::from_arrows(4, &[(1, 2), (3, 2), (4, 2)]);
    let max = qp_core::roots::maximal_root(&q).unwrap();
    verify_paving_everywhere(&q, &[max.clone()], 1, false, &[2, 3]);
    verify_paving_everywhere(&q, &[max], 2, false, &[2]);
}

#[test]
fn e6_ord3_indecomposables_d1() {
    // bottom chain 1..5, raised 6 -> 3 (the worked orientation)
    let q = Quiver::from_arrows(6, &[(2, 1), (2, 3), (4, 3), (5, 4), (6, 3)]);
    let ord3: Vec<Vec<i64>> = vec![vec![1, 2, 3, 2, 1, 1], vec![1, 2, 3, 2, 1, 2]];
    verify_paving_everywhere(&q, &ord3, 1, false, &[2]);
}
