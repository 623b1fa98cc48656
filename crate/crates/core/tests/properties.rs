//! Randomized properties of the term layer: the printer/parser round trip
//! and composition of substitutions.

use std::collections::BTreeMap;

use proptest::prelude::*;

use forge_core::terms::{parse_term, Signature, Term};

fn sig() -> Signature {
    Signature::new(
        "P",
        [("meet", 2), ("join", 2), ("neg", 1), ("bot", 0), ("top", 0)],
    )
    .unwrap()
}

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0usize..6).prop_map(Term::var),
        Just(Term::constant("bot")),
        Just(Term::constant("top")),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Term::app("meet", vec![a, b])),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Term::app("join", vec![a, b])),
            inner.prop_map(|a| Term::app("neg", vec![a])),
        ]
    })
}

fn arb_substitution() -> impl Strategy<Value = BTreeMap<usize, Term>> {
    proptest::collection::btree_map(0usize..6, arb_term(), 0..6)
}

/// Totalizes a substitution over the variables 0..6 and post-composes it
/// with another one.
fn compose(
    first: &BTreeMap<usize, Term>,
    second: &BTreeMap<usize, Term>,
) -> BTreeMap<usize, Term> {
    (0..6)
        .map(|v| {
            let image = first.get(&v).cloned().unwrap_or(Term::var(v));
            (v, image.substitute(second))
        })
        .collect()
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(t in arb_term()) {
        let text = t.to_string();
        let back = parse_term(&text, &sig()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn substitution_composes(
        t in arb_term(),
        s1 in arb_substitution(),
        s2 in arb_substitution(),
    ) {
        let stepwise = t.substitute(&s1).substitute(&s2);
        let at_once = t.substitute(&compose(&s1, &s2));
        prop_assert_eq!(stepwise, at_once);
    }

    #[test]
    fn substitution_preserves_validity(t in arb_term(), s in arb_substitution()) {
        prop_assert!(t.substitute(&s).validate(&sig()).is_ok());
    }
}
