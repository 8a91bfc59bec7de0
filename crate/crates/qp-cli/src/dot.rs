//! DOT rendering of an Auslander-Reiten quiver: solid arrows for irreducible
//! morphisms, dashed arrows from each non-projective back to its translate,
//! node labels in the stacked dimension-vector notation.

use qp_core::artheory::ArQuiver;
use qp_core::quiver::{classify, render_stacked};

pub fn ar_quiver_dot(ar: &ArQuiver) -> String {
    let shape = classify(&ar.quiver).ok();
    let label = |node: usize| -> String {
        let root = &ar.nodes[node].root;
        match &shape {
            Some(s) => render_stacked(s, root).replace('\n', "\\n"),
            None => format!("{root:?}"),
        }
    };
    let mut out = String::from("digraph ar_quiver {\n  rankdir=LR;\n  node [shape=plaintext];\n");
    for (i, _) in ar.nodes.iter().enumerate() {
        out.push_str(&format!("  n{} [label=\"{}\"];\n", i, label(i)));
    }
    for a in &ar.arrows {
        out.push_str(&format!("  n{} -> n{};\n", a.from, a.to));
    }
    for (x, t) in ar.tau.iter().enumerate() {
        if let Some(tx) = t {
            out.push_str(&format!("  n{x} -> n{tx} [style=dashed, constraint=false];\n"));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use qp_core::artheory::knit;
    use qp_core::quiver::Quiver;

    #[test]
    fn a2_dot_shape() {
        let q = Quiver::from_arrows(2, &[(1, 2)]);
        let ar = knit(&q).unwrap();
        let dot = ar_quiver_dot(&ar);
        assert_eq!(dot.matches("style=dashed").count(), 1);
        assert_eq!(dot.matches("->").count(), 3); // 2 solid + 1 dashed
        assert!(dot.starts_with("digraph"));
    }
}
