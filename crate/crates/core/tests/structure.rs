use logfc_core::morphism::surjection_exists;
use logfc_core::poset::{classify, enumerate_cotrees, make_comb};
use logfc_core::semantics::is_valid;
use logfc_core::structure::{branching_bound_check, frame_f, validates_lfc};
use logfc_core::Formula;

#[test]
fn lfc_classifies_small_cotrees() {
    let trees = enumerate_cotrees(7).unwrap();
    assert_eq!(trees.len(), 85);
    for t in &trees {
        let verdict = validates_lfc(t).unwrap().verdict;
        assert_eq!(verdict, classify(t).is_comb_or_hcomb(), "{:?}", t.covers());
    }
}

#[test]
fn no_f3_image_bounds_branching() {
    for t in enumerate_cotrees(7).unwrap() {
        if surjection_exists(&t, &frame_f(3)).unwrap().is_none() {
            assert!(branching_bound_check(&t).unwrap(), "{:?}", t.covers());
        }
    }
}

#[test]
fn report_agrees_with_individual_checks_on_combs() {
    for n in 1..=4 {
        let c = make_comb(n).unwrap();
        let r = validates_lfc(&c).unwrap();
        assert!(is_valid(&c, &Formula::prelinearity()).unwrap());
        assert!(!r.f0_embeds && !r.f1_image && !r.f2_image && !r.f3_image);
        assert!(r.verdict);
    }
}
