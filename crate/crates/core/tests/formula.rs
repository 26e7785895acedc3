mod common;

use logfc_core::{formula::print, parse, Formula};
use proptest::prelude::*;

proptest! {
    #[test]
    fn print_then_parse_is_identity(f in common::formula_strategy(6)) {
        prop_assert_eq!(parse(&print(&f)).unwrap(), f);
    }

    #[test]
    fn subformulas_are_closed(f in common::formula_strategy(6)) {
        let s = f.subformulas();
        prop_assert!(s.all.contains(&f));
        for g in &s.all {
            if let Some((a, b)) = g.children() {
                prop_assert!(s.all.contains(a) && s.all.contains(b));
            }
        }
        prop_assert!(s.imps.iter().all(Formula::is_imp));
        prop_assert!(s.coimps.iter().all(Formula::is_coimp));
        prop_assert!(f.ipd() <= f.depth());
    }
}

#[test]
fn sugar_round_trips() {
    for s in ["!p", "~p", "!!p", "~~p", "!~p", "~(p -> q)", "!(p & q) | ~q"] {
        let f = parse(s).unwrap();
        assert_eq!(print(&f), s);
    }
    assert_eq!(parse("!p").unwrap(), Formula::imp(Formula::var("p"), Formula::Bot));
    assert_eq!(parse("~p").unwrap(), Formula::coimp(Formula::Top, Formula::var("p")));
}
