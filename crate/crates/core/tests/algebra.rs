use logfc_core::algebra::{
    algebra_validates, coloring_generates, generated_subalgebra, heyting_imp, coimp,
    isolated_chain_partition, isolated_chains, is_bie_partition, twin_partition,
};
use logfc_core::poset::{enumerate_cotrees, enumerate_posets};
use logfc_core::semantics::{all_upsets, is_valid};
use logfc_core::Formula;

#[test]
fn residuation_on_small_frames() {
    for x in enumerate_posets(4).unwrap() {
        let ups = all_upsets(&x).unwrap();
        for &a in &ups {
            for &b in &ups {
                let imp = heyting_imp(&x, a, b).unwrap();
                let co = coimp(&x, a, b).unwrap();
                assert!(x.is_upset(imp) && x.is_upset(co));
                for &c in &ups {
                    assert_eq!(c.is_subset(imp), a.intersection(c).is_subset(b));
                    assert_eq!(co.is_subset(c), a.is_subset(b.union(c)));
                }
            }
        }
    }
}

#[test]
fn coloring_matches_generation_on_small_frames() {
    for x in enumerate_posets(4).unwrap() {
        let ups = all_upsets(&x).unwrap();
        let full = ups.len();
        for (i, &a) in ups.iter().enumerate() {
            for &b in &ups[i..] {
                for gens in [vec![], vec![a], vec![a, b]] {
                    let generated = generated_subalgebra(&x, &gens).unwrap().len() == full;
                    assert_eq!(coloring_generates(&x, &gens).unwrap(), generated);
                }
            }
        }
    }
}

#[test]
fn twin_and_isolated_partitions_are_bie() {
    for t in enumerate_cotrees(7).unwrap() {
        for w in t.points() {
            for v in t.points() {
                if let Some(p) = twin_partition(&t, w, v).unwrap() {
                    assert!(is_bie_partition(&t, &p.blocks));
                }
            }
        }
        for (y, x) in isolated_chains(&t).unwrap() {
            let p = isolated_chain_partition(&t, y, x).unwrap().unwrap();
            assert!(is_bie_partition(&t, &p.blocks));
            assert!(!p.is_identity());
        }
    }
}

#[test]
fn algebra_and_frame_validity_agree() {
    let formulas = [
        Formula::prelinearity(),
        Formula::chain_axiom(),
        "p | !p".parse().unwrap(),
        "~p | !~p".parse().unwrap(),
        "(p <- q) -> p".parse().unwrap(),
        "p -> (q <- p) | q".parse().unwrap(),
    ];
    for x in enumerate_posets(4).unwrap() {
        for f in &formulas {
            assert_eq!(algebra_validates(&x, f).unwrap(), is_valid(&x, f).unwrap(), "{f}");
        }
    }
}
