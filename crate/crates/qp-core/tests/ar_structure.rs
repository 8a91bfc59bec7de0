//! Structural checks of the knitted AR quiver against independently known
//! data: the full E6 arrow set, translation formulas, sectional-path
//! examples, and the alternative kernel description of the X_S construction.

use qp_core::artheory::{
    compute_s_x, compute_x_s, decompose_rational, hom_gram, irreducible_dim, knit,
    minimal_sectional_monos_into, sectional_paths_into, tau,
};
use qp_core::extended::{phi, ExtQuiver};
use qp_core::field::Rationals;
use qp_core::quiver::{DimVec, Quiver};
use qp_core::rep::{ext1_dim, hom_dim, hom_space, image_tuple, kernel_tuple, quotient_rep};

fn e6_figure_orientation() -> Quiver {
    Quiver::from_arrows(6, &[(2, 1), (2, 3), (4, 3), (5, 4), (6, 3)])
}

/// Parses the stacked label "t/abcde" into the vertex order used here
/// (bottom chain 1..5, raised 6).
fn label(s: &str) -> DimVec {
    let (top, bottom) = s.split_once('/').unwrap();
    let mut v: DimVec = bottom.bytes().map(|b| (b - b'0') as i64).collect();
    v.push(top.parse().unwrap());
    v
}

const E6_ARROWS: &[(&str, &str)] = &[
    ("0/10000", "0/11100"),
    ("0/00100", "0/11100"),
    ("0/00100", "1/00100"),
    ("0/00100", "0/00110"),
    ("0/11100", "0/01100"),
    ("0/11100", "1/11210"),
    ("1/00100", "1/11210"),
    ("0/00110", "1/11210"),
    ("0/00110", "0/00111"),
    ("0/00111", "1/11211"),
    ("1/11210", "1/11211"),
    ("1/11210", "0/11110"),
    ("1/11210", "1/01210"),
    ("0/01100", "1/01210"),
    ("1/01210", "1/00110"),
    ("1/01210", "1/12321"),
    ("0/11110", "1/12321"),
    ("1/11211", "1/12321"),
    ("1/11211", "1/11100"),
    ("1/11100", "1/12210"),
    ("1/12321", "1/12210"),
    ("1/12321", "1/01211"),
    ("1/12321", "1/11221"),
    ("1/00110", "1/11221"),
    ("1/11221", "0/11111"),
    ("1/11221", "2/12321"),
    ("1/01211", "2/12321"),
    ("1/12210", "2/12321"),
    ("1/12210", "0/01110"),
    ("0/11111", "1/12211"),
    ("2/12321", "1/12211"),
    ("2/12321", "1/11110"),
    ("2/12321", "1/01221"),
    ("0/01110", "1/01221"),
    ("1/01221", "1/00111"),
    ("1/01221", "1/12221"),
    ("1/11110", "1/12221"),
    ("1/12211", "1/12221"),
    ("1/12211", "1/01100"),
    ("1/01100", "1/01110"),
    ("1/12221", "1/01110"),
    ("1/12221", "0/01111"),
    ("1/12221", "1/11111"),
    ("1/00111", "1/11111"),
    ("1/11111", "0/11000"),
    ("1/11111", "1/01111"),
    ("0/01111", "1/01111"),
    ("1/01110", "1/01111"),
    ("1/01110", "0/00010"),
    ("0/00010", "0/00011"),
    ("1/01111", "0/00011"),
    ("1/01111", "1/00000"),
    ("1/01111", "0/01000"),
    ("0/11000", "0/01000"),
    ("0/00011", "0/00001"),
];

#[test]
fn e6_arrow_set_is_reproduced_node_for_node() {
    let q = e6_figure_orientation();
    let ar = knit(&q).unwrap();
    assert_eq!(ar.nodes.len(), 36);
    let mut expected: Vec<(DimVec, DimVec)> =
        E6_ARROWS.iter().map(|&(a, b)| (label(a), label(b))).collect();
    expected.sort();
    let mut knitted: Vec<(DimVec, DimVec)> = ar
        .arrows
        .iter()
        .map(|a| (ar.nodes[a.from].root.clone(), ar.nodes[a.to].root.clone()))
        .collect();
    knitted.sort();
    assert_eq!(knitted, expected);
    // one translation arrow per non-projective: 36 nodes - 6 projectives
    assert_eq!(ar.tau.iter().flatten().count(), 30);
}

#[test]
fn e6_adjacency_agrees_with_radical_quotients() {
    // dim rad/rad^2 is the independent definition of arrow multiplicities
    let q = e6_figure_orientation();
    let ar = knit(&q).unwrap();
    for a in 0..ar.nodes.len() {
        for b in 0..ar.nodes.len() {
            let knitted = ar.arrows.iter().filter(|x| x.from == a && x.to == b).count();
            assert_eq!(
                irreducible_dim(&ar, a, b),
                knitted,
                "{:?} -> {:?}",
                ar.nodes[a].root,
                ar.nodes[b].root
            );
        }
    }
}

#[test]
fn ar_formula_on_small_types() {
    // [T', T]^1 = [T, tau T'] whenever T' is non-projective and T is not injective
    for q in [
        Quiver::from_arrows(3, &[(1, 2), (2, 3)]),
        Quiver::from_arrows(4, &[(1, 2), (3, 2), (4, 2)]),
    ] {
        let ar = knit(&q).unwrap();
        for tp in 0..ar.nodes.len() {
            if ar.is_projective(tp) {
                continue;
            }
            let tau_tp = &ar.nodes[ar.tau[tp].unwrap()].rep;
            for t in 0..ar.nodes.len() {
                if ar.is_injective(t) {
                    continue;
                }
                let lhs = ext1_dim(&q, &Rationals, &ar.nodes[tp].rep, &ar.nodes[t].rep).unwrap();
                let rhs = hom_dim(&q, &Rationals, &ar.nodes[t].rep, tau_tp);
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn mesh_sequences_are_exact_and_nonsplit() {
    let q = Quiver::from_arrows(4, &[(1, 2), (3, 2), (4, 2)]);
    let ar = knit(&q).unwrap();
    let gram = hom_gram(&ar);
    for node in 0..ar.nodes.len() {
        if ar.is_projective(node) {
            continue;
        }
        let seq = ar.ar_sequence(node).unwrap();
        // middle decomposes exactly into the recorded summands
        let mut middle = ar.nodes[seq.middle[0]].rep.clone();
        for &m in &seq.middle[1..] {
            middle = middle.direct_sum(&q, &ar.nodes[m].rep, Rationals);
        }
        let dec = decompose_rational(&ar, &gram, &middle).unwrap();
        let total: usize = dec.iter().map(|&(_, m)| m).sum();
        assert_eq!(total, seq.middle.len());
        // non-split: middle not iso to tau X + X
        let split = ar.nodes[seq.tau_end]
            .rep
            .clone()
            .direct_sum(&q, &ar.nodes[seq.end].rep, Rationals);
        let dec_split = decompose_rational(&ar, &gram, &split).unwrap();
        assert_ne!(dec, dec_split, "almost-split sequences do not split");
    }
}

#[test]
fn sectional_examples_from_the_e6_quiver() {
    let q = e6_figure_orientation();
    let ar = knit(&q).unwrap();
    // a nonzero map (1;00110) -> (1;11110) is a minimal sectional mono
    let y = ar.node_by_root(&label("1/11110")).unwrap();
    let x = ar.node_by_root(&label("1/00110")).unwrap();
    let paths = sectional_paths_into(&ar, y);
    let found = paths
        .iter()
        .find(|p| p.source() == x)
        .expect("sectional path exists");
    assert!(found.is_mono());
    assert!(found.is_minimal(&ar));
    // (0;01100) -> (1;01211) is sectional and injective but not minimal
    let y2 = ar.node_by_root(&label("1/01211")).unwrap();
    let x2 = ar.node_by_root(&label("0/01100")).unwrap();
    let paths2 = sectional_paths_into(&ar, y2);
    let found2 = paths2.iter().find(|p| p.source() == x2).expect("path exists");
    assert!(found2.is_mono());
    assert!(!found2.is_minimal(&ar));
    // every sectional composite is injective or surjective
    for p in paths.iter().chain(&paths2) {
        assert!(p.composite.is_mono() || p.composite.is_epi());
    }
}

#[test]
fn x_s_matches_the_almost_split_description() {
    // X_S = ker(X -> tau S) decomposes as E' (+) ker(tau X_1 -> tau Y), with
    // E (+) = E' + tau X_1 the middle of the sequence ending at X
    let e7 = Quiver::from_arrows(7, &[(1, 2), (2, 3), (3, 4), (5, 4), (6, 5), (7, 4)]);
    for q in [e6_figure_orientation(), e7] {
        let ar = knit(&q).unwrap();
        let gram = hom_gram(&ar);
        for y in 0..ar.nodes.len() {
            if ar.nodes[y].rep.ord() <= 2 {
                continue;
            }
            for cand in minimal_sectional_monos_into(&ar, y) {
                let x = cand.source();
                if ar.is_projective(x) || ar.is_projective(y) {
                    continue;
                }
                let x1 = cand.nodes[1];
                if ar.is_projective(x1) {
                    continue;
                }
                let x_rep = ar.nodes[x].rep.clone();
                let img = image_tuple(&cand.composite);
                let (s_rep, _) = quotient_rep(&q, &Rationals, &ar.nodes[y].rep, &img);
                let (_, xs) = compute_x_s(&q, &x_rep, &s_rep).unwrap();
                let mut expected: Vec<(usize, usize)> = Vec::new();
                // E' = middle of the sequence ending at X, minus one tau X_1
                let seq = ar.ar_sequence(x).unwrap();
                let tau_x1 = ar.tau[x1].unwrap();
                let mut removed = false;
                for &m in &seq.middle {
                    if !removed && m == tau_x1 {
                        removed = true;
                        continue;
                    }
                    expected.push((m, 1));
                }
                assert!(removed, "tau X_1 is a summand of the middle term");
                // plus ker(tau X_1 -> tau Y)
                let tau_y = tau(&q, &ar.nodes[y].rep).unwrap();
                let maps = hom_space(&q, &Rationals, &ar.nodes[tau_x1].rep, &tau_y);
                assert_eq!(maps.len(), 1, "the comparison map is unique up to scalar");
                let ker = kernel_tuple(&maps[0]);
                let (ker_rep, _) = qp_core::rep::sub_rep(&q, &Rationals, &ar.nodes[tau_x1].rep, &ker);
                if !ker_rep.is_zero() {
                    for (n, m) in decompose_rational(&ar, &gram, &ker_rep).unwrap() {
                        expected.push((n, m));
                    }
                }
                let mut expected_sorted = expected;
                expected_sorted.sort();
                let mut merged: Vec<(usize, usize)> = Vec::new();
                for (n, m) in expected_sorted {
                    if let Some(last) = merged.last_mut() {
                        if last.0 == n {
                            last.1 += m;
                            continue;
                        }
                    }
                    merged.push((n, m));
                }
                let got = if xs.is_zero() {
                    Vec::new()
                } else {
                    decompose_rational(&ar, &gram, &xs).unwrap()
                };
                assert_eq!(got, merged, "X_S description at Y = {:?}, X = {:?}", ar.nodes[y].root, ar.nodes[x].root);
            }
        }
    }
}

#[test]
fn phi_commutes_with_the_kernel_construction() {
    // the kernel of Phi(f) is the canonical image of the kernel of f, for the
    // morphism defining X_S
    let q = e6_figure_orientation();
    let ar = knit(&q).unwrap();
    let y = ar.node_by_root(&label("2/12321")).unwrap();
    let cand = &minimal_sectional_monos_into(&ar, y)[0];
    let x_rep = ar.nodes[cand.source()].rep.clone();
    let img = image_tuple(&cand.composite);
    let (s_rep, _) = quotient_rep(&q, &Rationals, &ar.nodes[y].rep, &img);
    let tau_s = tau(&q, &s_rep).unwrap();
    let f = &hom_space(&q, &Rationals, &x_rep, &tau_s)[0];
    let ker = kernel_tuple(f);
    for d in [1usize, 2] {
        let eq = ExtQuiver::build(&q, d, false).unwrap();
        let tf_mats: Vec<_> = (0..eq.n_vertices())
            .map(|v| {
                let (i, _) = eq.vertex_pair(v);
                f.mats[i].clone()
            })
            .collect();
        let phi_x = phi(&eq, &Rationals, &x_rep);
        let phi_tau_s = phi(&eq, &Rationals, &tau_s);
        let phi_f = qp_core::rep::Morphism { mats: tf_mats };
        // Phi(f) is a morphism of bound modules and its kernel is Phi(ker f)
        for (k, a) in eq.arrows.iter().enumerate() {
            assert_eq!(
                phi_f.mats[a.dst].mul(&phi_x.mats[k]),
                phi_tau_s.mats[k].mul(&phi_f.mats[a.src])
            );
        }
        let phi_ker = kernel_tuple(&phi_f);
        for v in 0..eq.n_vertices() {
            let (i, _) = eq.vertex_pair(v);
            assert_eq!(phi_ker[v], ker[i]);
        }
    }
}

#[test]
fn s_x_image_construction_is_the_least_live_submodule() {
    // The image of tau^{-1} X -> S is the smallest submodule M of S keeping
    // the extension space alive: [M, X]^1 = 1 holds exactly when M contains
    // it.  (Taking a literal maximum over the collection is vacuous: S itself
    // always qualifies under the hypothesis [S, X]^1 = 1.)  Verify the
    // equivalence pointwise over every submodule of S enumerated over F_2.
    use qp_core::field::Fp;
    use qp_core::grassmann::{enumerate_submodules, Budget};
    use qp_core::matrix::{Matrix, Subspace};
    use qp_core::paving::for_each_in_box;
    use qp_core::rep::reduce_rep;

    let q = Quiver::from_arrows(4, &[(1, 2), (3, 2), (4, 2)]);
    let ar = knit(&q).unwrap();
    let fp = Fp::new(2).unwrap();
    let eq = ExtQuiver::build(&q, 1, false).unwrap();
    let reduce_tuple = |tuple: &[Subspace<Rationals>]| -> Vec<Subspace<Fp>> {
        tuple
            .iter()
            .map(|s| {
                let m = &s.0;
                let mut out = Matrix::zeros(fp, m.rows(), m.cols());
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        out.set(i, j, fp.reduce_rational(m.at(i, j)).expect("small denominators"));
                    }
                }
                Subspace::span(&out)
            })
            .collect()
    };
    for xi in 0..ar.nodes.len() {
        for si in 0..ar.nodes.len() {
            let x = &ar.nodes[xi].rep;
            let s = &ar.nodes[si].rep;
            if ext1_dim(&q, &Rationals, s, x).unwrap() != 1 {
                continue;
            }
            let (sx_tuple, sx) = compute_s_x(&q, x, s).unwrap();
            let sx_mod2 = reduce_tuple(&sx_tuple);
            assert_eq!(
                sx_mod2.iter().map(|t| t.dim()).sum::<usize>() as i64,
                sx.dim_vec().iter().sum::<i64>()
            );
            let sp = reduce_rep(s, fp).unwrap();
            let xp = reduce_rep(x, fp).unwrap();
            let t = phi(&eq, &fp, &sp);
            let dims = s.dim_vec();
            let zero = vec![0i64; dims.len()];
            for_each_in_box::<std::convert::Infallible>(&zero, &dims, &mut |f| {
                let mut budget = Budget::default();
                enumerate_submodules(&eq, fp, &t, f, &mut budget, |sub| {
                    let (m_rep, _) = qp_core::rep::sub_rep(&q, &fp, &sp, &sub.to_vec());
                    let live = qp_core::rep::ext1_dim(&q, &fp, &m_rep, &xp).unwrap() == 1;
                    let contains = sub
                        .iter()
                        .zip(&sx_mod2)
                        .all(|(big, small)| big.contains(small));
                    assert_eq!(live, contains, "X={xi} S={si} f={f:?}");
                })
                .unwrap();
                Ok(())
            })
            .unwrap();
        }
    }
    let _ = DimVec::new();
}
