use qp_core::artheory::knit;
use qp_core::extended::{phi, ExtQuiver};
use qp_core::field::Fp;
use qp_core::grassmann::{count_submodules_all, Budget};
use qp_core::paving::{for_each_in_box, Paver, PaveEvent};
use qp_core::quiver::Quiver;
use qp_core::rep::reduce_rep;

// With summand peeling disabled (the narrow hand-computation repertoire),
// the first-choice mono into (1;122321) must dead-end on its decomposable
// removed submodule and an alternative mono must resolve, with counts still
// exact at q = 2.
#[test]
fn narrow_repertoire_backtracks_and_stays_exact() {
    let q = Quiver::from_arrows(7, &[(1,2),(2,3),(3,4),(5,4),(6,5),(7,4)]);
    let ar = knit(&q).unwrap();
    let y = ar.node_by_root(&vec![1,2,2,3,2,1,1]).unwrap();
    let y_rep = ar.nodes[y].rep.clone();
    let fp = Fp::new(2).unwrap();
    let mp = reduce_rep(&y_rep, fp).unwrap();
    let eq = ExtQuiver::build(&q, 1, false).unwrap();
    let t = phi(&eq, &fp, &mp);
    let mut budget = Budget::default();
    let table = count_submodules_all(&eq, fp, &t, &mut budget).unwrap();
    let mut paver = Paver::new(&ar, 1, false).unwrap();
    paver.set_summand_peeling(false);
    let dims = y_rep.dim_vec();
    let zero = vec![0i64; dims.len()];
    let mut mismatches = 0u32;
    let mut unresolved = 0u32;
    for_each_in_box::<()>(&zero, &dims, &mut |f| {
        let brute = table.get(f).copied().unwrap_or(0) as u128;
        match paver.pave(&y_rep, f) {
            Ok(cells) => {
                if cells.eval(2) != brute { mismatches += 1; println!("MISMATCH f={f:?}"); }
            }
            Err(e) => { unresolved += 1; println!("UNRESOLVED f={f:?}: {}", e.reason); }
        }
        Ok(())
    }).unwrap();
    let bad_x = vec![1i64,1,2,3,2,1,1];
    let mut first_choice_failed = false;
    let mut alternative_ok = false;
    let mut n_fail = 0;
    for e in &paver.events {
        match e {
            PaveEvent::CandidateFailed { y, x, reason } => {
                n_fail += 1;
                if n_fail <= 6 { println!("FAILED y={y:?} x={x:?}: {reason}"); }
                if *y == vec![1,2,2,3,2,1,1] && *x == bad_x { first_choice_failed = true; }
            }
            PaveEvent::CandidateSucceeded { y, x } => {
                if *y == vec![1,2,2,3,2,1,1] && *x != bad_x { alternative_ok = true; }
            }
            _ => {}
        }
    }
    println!("mismatches={mismatches} unresolved={unresolved} failures={n_fail} first_failed={first_choice_failed} alt_ok={alternative_ok}");
    assert_eq!((mismatches, unresolved), (0, 0));
    assert!(first_choice_failed, "the preferred mono should dead-end in the narrow repertoire");
    assert!(alternative_ok, "an alternative mono should resolve");
}
