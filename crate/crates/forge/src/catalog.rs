//! Built-in signatures, algebras, batteries, translations and deduction
//! suites.
//!
//! All catalog objects are constructed on demand and validated by their
//! module's constructors; names are stable and used by the CLI as
//! `CLASS:algebra` references.

use std::collections::BTreeMap;

use forge_core::adjoint::RightAdjointSpec;
use forge_core::classes::{ClassBattery, Presentation};
use forge_core::finalg::{product, AlgebraError, FiniteAlgebra};
use forge_core::terms::{eq, term, QuasiEquation, Signature};
use forge_core::xlate::{ContextualTranslation, Deduction, FunctorData, Translation};

// ---------------------------------------------------------------------------
// signatures

pub fn dl01_sig() -> Signature {
    Signature::new("DL01", [("meet", 2), ("join", 2), ("bot", 0), ("top", 0)]).unwrap()
}

pub fn ka_sig() -> Signature {
    Signature::new(
        "KA",
        [("meet", 2), ("join", 2), ("neg", 1), ("bot", 0), ("top", 0)],
    )
    .unwrap()
}

pub fn ba_sig() -> Signature {
    Signature::new(
        "BA",
        [("meet", 2), ("join", 2), ("neg", 1), ("imp", 2), ("bot", 0), ("top", 0)],
    )
    .unwrap()
}

pub fn ha_sig() -> Signature {
    ba_sig().renamed("HA")
}

pub fn ia_sig() -> Signature {
    Signature::new(
        "IA",
        [
            ("meet", 2),
            ("join", 2),
            ("neg", 1),
            ("imp", 2),
            ("box", 1),
            ("bot", 0),
            ("top", 0),
        ],
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// algebra constructors

/// Bounded chain 0 < 1 < … < n−1 as a distributive lattice.
pub fn bounded_chain(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::from_fn(dl01_sig(), n, |sym, args| match sym {
        "meet" => args[0].min(args[1]),
        "join" => args[0].max(args[1]),
        "bot" => 0,
        "top" => n - 1,
        _ => unreachable!(),
    })
    .unwrap()
}

/// The standard 3-element Kleene chain 0 < ½ < 1 with the involution.
pub fn kleene_chain3() -> FiniteAlgebra {
    FiniteAlgebra::from_fn(ka_sig(), 3, |sym, args| match sym {
        "meet" => args[0].min(args[1]),
        "join" => args[0].max(args[1]),
        "neg" => 2 - args[0],
        "bot" => 0,
        "top" => 2,
        _ => unreachable!(),
    })
    .unwrap()
}

/// The Boolean algebra of subsets of a k-element set, elements as bitmasks.
pub fn boolean_algebra(k: u32) -> FiniteAlgebra {
    let n = 1usize << k;
    let full = n - 1;
    FiniteAlgebra::from_fn(ba_sig(), n, |sym, args| match sym {
        "meet" => args[0] & args[1],
        "join" => args[0] | args[1],
        "neg" => full & !args[0],
        "imp" => (full & !args[0]) | args[1],
        "bot" => 0,
        "top" => full,
        _ => unreachable!(),
    })
    .unwrap()
}

/// Upgrades a bounded distributive lattice to a Heyting algebra:
/// `imp(a,b)` is the largest `c` with `a ∧ c ≤ b`, and `neg(a) = imp(a,⊥)`.
pub fn heyting_from_lattice(lattice: &FiniteAlgebra) -> Result<FiniteAlgebra, AlgebraError> {
    let n = lattice.size();
    let leq = |a: usize, b: usize| lattice.op("meet", &[a, b]) == a;
    let mut imp = vec![0usize; n * n];
    for a in 0..n {
        for b in 0..n {
            // join of all candidates; in a distributive lattice this is
            // itself a candidate (the relative pseudo-complement)
            let mut best = lattice.op("bot", &[]);
            for c in 0..n {
                if leq(lattice.op("meet", &[a, c]), b) {
                    best = lattice.op("join", &[best, c]);
                }
            }
            if !leq(lattice.op("meet", &[a, best]), b) {
                return Err(AlgebraError::Other(format!(
                    "lattice has no relative pseudo-complement for ({a}, {b})"
                )));
            }
            imp[a * n + b] = best;
        }
    }
    let bot = lattice.op("bot", &[]);
    FiniteAlgebra::from_fn(ha_sig(), n, |sym, args| match sym {
        "meet" | "join" | "bot" | "top" => lattice.op(sym, args),
        "imp" => imp[args[0] * n + args[1]],
        "neg" => imp[args[0] * n + bot],
        _ => unreachable!(),
    })
}

/// Equips a Boolean algebra with the interior operator of a topology: `opens`
/// must contain ⊥ and ⊤ and be closed under meet and join; `box(x)` is the
/// largest open below `x`.
pub fn interior_from_opens(
    ba: &FiniteAlgebra,
    opens: &[usize],
) -> Result<FiniteAlgebra, AlgebraError> {
    let bot = ba.op("bot", &[]);
    let top = ba.op("top", &[]);
    let is_open = |x: usize| opens.contains(&x);
    if !is_open(bot) || !is_open(top) {
        return Err(AlgebraError::Other("opens must contain bot and top".into()));
    }
    for &a in opens {
        for &b in opens {
            if !is_open(ba.op("meet", &[a, b])) || !is_open(ba.op("join", &[a, b])) {
                return Err(AlgebraError::Other(
                    "opens must be closed under meet and join".into(),
                ));
            }
        }
    }
    let leq = |a: usize, b: usize| ba.op("meet", &[a, b]) == a;
    let interior: Vec<usize> = (0..ba.size())
        .map(|x| {
            let mut best = bot;
            for &o in opens {
                if leq(o, x) {
                    best = ba.op("join", &[best, o]);
                }
            }
            best
        })
        .collect();
    FiniteAlgebra::from_fn(ia_sig(), ba.size(), |sym, args| match sym {
        "box" => interior[args[0]],
        _ => ba.op(sym, args),
    })
}

/// The 2×2 diamond with one extra top element: 0 < {1, 2} < 3 < 4.
fn square_top_lattice() -> FiniteAlgebra {
    // elements 0..3 are the 2×2 product (mixed radix), 4 the new top
    let (square, _) = product(&dl01_sig(), &[bounded_chain(2), bounded_chain(2)]).unwrap();
    FiniteAlgebra::from_fn(dl01_sig(), 5, |sym, args| match sym {
        "bot" => 0,
        "top" => 4,
        "meet" => match (args[0], args[1]) {
            (4, x) | (x, 4) => x,
            (a, b) => square.op("meet", &[a, b]),
        },
        "join" => match (args[0], args[1]) {
            (4, _) | (_, 4) => 4,
            (a, b) => square.op("join", &[a, b]),
        },
        _ => unreachable!(),
    })
    .unwrap()
}

// ---------------------------------------------------------------------------
// axioms

fn identities(sig: &Signature, texts: &[&str]) -> Vec<QuasiEquation> {
    texts
        .iter()
        .map(|t| QuasiEquation::identity(eq(t, sig)))
        .collect()
}

const LATTICE_AXIOMS: &[&str] = &[
    "meet(x0, x1) = meet(x1, x0)",
    "join(x0, x1) = join(x1, x0)",
    "meet(x0, meet(x1, x2)) = meet(meet(x0, x1), x2)",
    "join(x0, join(x1, x2)) = join(join(x0, x1), x2)",
    "meet(x0, join(x0, x1)) = x0",
    "join(x0, meet(x0, x1)) = x0",
    "meet(x0, join(x1, x2)) = join(meet(x0, x1), meet(x0, x2))",
    "meet(x0, bot) = bot",
    "join(x0, top) = top",
    "meet(x0, top) = x0",
    "join(x0, bot) = x0",
];

fn dl01_axioms() -> Vec<QuasiEquation> {
    identities(&dl01_sig(), LATTICE_AXIOMS)
}

fn ka_axiom_texts() -> Vec<&'static str> {
    let mut texts = LATTICE_AXIOMS.to_vec();
    texts.extend([
        "neg(neg(x0)) = x0",
        "neg(meet(x0, x1)) = join(neg(x0), neg(x1))",
        "neg(join(x0, x1)) = meet(neg(x0), neg(x1))",
        "neg(bot) = top",
        "neg(top) = bot",
        // the Kleene law: x ∧ ¬x ≤ y ∨ ¬y
        "meet(meet(x0, neg(x0)), join(x1, neg(x1))) = meet(x0, neg(x0))",
    ]);
    texts
}

fn ka_axioms() -> Vec<QuasiEquation> {
    identities(&ka_sig(), &ka_axiom_texts())
}

fn ba_axiom_texts() -> Vec<&'static str> {
    let mut texts = LATTICE_AXIOMS.to_vec();
    texts.extend([
        "meet(x0, neg(x0)) = bot",
        "join(x0, neg(x0)) = top",
        "neg(neg(x0)) = x0",
        "imp(x0, x1) = join(neg(x0), x1)",
        "neg(meet(x0, x1)) = join(neg(x0), neg(x1))",
        "neg(join(x0, x1)) = meet(neg(x0), neg(x1))",
    ]);
    texts
}

fn ba_axioms() -> Vec<QuasiEquation> {
    identities(&ba_sig(), &ba_axiom_texts())
}

fn ha_axiom_texts() -> Vec<&'static str> {
    let mut texts = LATTICE_AXIOMS.to_vec();
    texts.extend([
        "imp(x0, x0) = top",
        "meet(x0, imp(x0, x1)) = meet(x0, x1)",
        "meet(x1, imp(x0, x1)) = x1",
        "imp(x0, meet(x1, x2)) = meet(imp(x0, x1), imp(x0, x2))",
        "imp(top, x0) = x0",
        "neg(x0) = imp(x0, bot)",
        "neg(neg(neg(x0))) = neg(x0)",
    ]);
    texts
}

fn ha_axioms() -> Vec<QuasiEquation> {
    identities(&ha_sig(), &ha_axiom_texts())
}

fn ia_axioms() -> Vec<QuasiEquation> {
    let mut texts = ba_axiom_texts();
    texts.extend([
        "meet(box(x0), x0) = box(x0)",
        "box(box(x0)) = box(x0)",
        "box(meet(x0, x1)) = meet(box(x0), box(x1))",
        "box(top) = top",
    ]);
    identities(&ia_sig(), &texts)
}

// ---------------------------------------------------------------------------
// classes

/// A named class: its battery of generating algebras, its defining axioms,
/// and its sample algebras.
pub struct CatalogClass {
    pub name: &'static str,
    pub battery: ClassBattery,
    pub axioms: Vec<QuasiEquation>,
    pub algebras: Vec<(&'static str, FiniteAlgebra)>,
}

impl CatalogClass {
    pub fn signature(&self) -> &Signature {
        self.battery.signature()
    }

    pub fn algebra(&self, name: &str) -> Option<&FiniteAlgebra> {
        self.algebras.iter().find(|(n, _)| *n == name).map(|(_, a)| a)
    }
}

pub fn classes() -> Vec<CatalogClass> {
    let (square, _) = product(&dl01_sig(), &[bounded_chain(2), bounded_chain(2)]).unwrap();
    let (cube, _) = product(
        &dl01_sig(),
        &[bounded_chain(2), bounded_chain(2), bounded_chain(2)],
    )
    .unwrap();

    let ha_algebras: Vec<(&'static str, FiniteAlgebra)> = vec![
        ("chain2", heyting_from_lattice(&bounded_chain(2)).unwrap()),
        ("chain3", heyting_from_lattice(&bounded_chain(3)).unwrap()),
        ("chain4", heyting_from_lattice(&bounded_chain(4)).unwrap()),
        ("squaretop", heyting_from_lattice(&square_top_lattice()).unwrap()),
    ];
    let ia_algebras: Vec<(&'static str, FiniteAlgebra)> = vec![
        ("op2", interior_from_opens(&boolean_algebra(1), &[0, 1]).unwrap()),
        // the 4-element interior algebra with opens {0, a, 1}
        ("op4", interior_from_opens(&boolean_algebra(2), &[0, 1, 3]).unwrap()),
        ("disc4", interior_from_opens(&boolean_algebra(2), &[0, 1, 2, 3]).unwrap()),
    ];

    vec![
        CatalogClass {
            name: "DL01",
            battery: ClassBattery::new("DL01", dl01_sig(), vec![bounded_chain(2)]).unwrap(),
            axioms: dl01_axioms(),
            algebras: vec![
                ("chain2", bounded_chain(2)),
                ("chain3", bounded_chain(3)),
                ("chain4", bounded_chain(4)),
                ("square", square),
                ("cube", cube),
            ],
        },
        CatalogClass {
            name: "KA",
            battery: ClassBattery::new("KA", ka_sig(), vec![kleene_chain3()]).unwrap(),
            axioms: ka_axioms(),
            algebras: vec![("chain3", kleene_chain3())],
        },
        CatalogClass {
            name: "BA",
            battery: ClassBattery::new("BA", ba_sig(), vec![boolean_algebra(1)]).unwrap(),
            axioms: ba_axioms(),
            algebras: vec![("bool2", boolean_algebra(1)), ("bool4", boolean_algebra(2))],
        },
        CatalogClass {
            name: "HA",
            battery: ClassBattery::new(
                "HA",
                ha_sig(),
                ha_algebras.iter().map(|(_, a)| a.clone()).collect(),
            )
            .unwrap(),
            axioms: ha_axioms(),
            algebras: ha_algebras,
        },
        CatalogClass {
            name: "IA",
            battery: ClassBattery::new(
                "IA",
                ia_sig(),
                ia_algebras.iter().map(|(_, a)| a.clone()).collect(),
            )
            .unwrap(),
            axioms: ia_axioms(),
            algebras: ia_algebras,
        },
    ]
}

pub fn class(name: &str) -> Option<CatalogClass> {
    classes().into_iter().find(|c| c.name == name)
}

/// Resolves `CLASS:algebra` references.
pub fn algebra(reference: &str) -> Option<FiniteAlgebra> {
    let (class_name, alg_name) = reference.split_once(':')?;
    class(class_name)?.algebra(alg_name).cloned()
}

// ---------------------------------------------------------------------------
// translations

/// A named contextual translation with its verification data: the classes it
/// runs between, a suite of deductions for consequence-transfer checking, the
/// catalog presentations used by the adjunction checks, and (when available)
/// the functor data it can be re-derived from.
pub struct CatalogTranslation {
    pub name: &'static str,
    pub source: &'static str,
    pub target: &'static str,
    pub ct: ContextualTranslation,
    pub deductions: Vec<Deduction>,
    pub presentations: Vec<(&'static str, Presentation)>,
    pub functor_data: Option<FunctorData>,
}

impl CatalogTranslation {
    pub fn source_class(&self) -> CatalogClass {
        class(self.source).expect("catalog class")
    }

    pub fn target_class(&self) -> CatalogClass {
        class(self.target).expect("catalog class")
    }

    /// Packages the translation as a right-adjoint spec with the catalog
    /// batteries and the source class axioms as image checks.
    pub fn spec(&self) -> Result<RightAdjointSpec, AlgebraError> {
        let source = self.source_class();
        let target = self.target_class();
        RightAdjointSpec::new(self.ct.clone(), source.battery, target.battery, source.axioms)
    }
}

fn axioms_as_deductions(sig: &Signature, texts: &[&str]) -> Vec<Deduction> {
    texts
        .iter()
        .map(|t| Deduction::new(3, vec![], eq(t, sig)).unwrap())
        .collect()
}

fn kleene_translation() -> CatalogTranslation {
    let src = ka_sig();
    let tgt = dl01_sig();
    let images = BTreeMap::from([
        (
            "meet".to_string(),
            vec![term("meet(x0, x2)", &tgt), term("join(x1, x3)", &tgt)],
        ),
        (
            "join".to_string(),
            vec![term("join(x0, x2)", &tgt), term("meet(x1, x3)", &tgt)],
        ),
        ("neg".to_string(), vec![term("x1", &tgt), term("x0", &tgt)]),
        ("bot".to_string(), vec![term("bot", &tgt), term("top", &tgt)]),
        ("top".to_string(), vec![term("top", &tgt), term("bot", &tgt)]),
    ]);
    let tau = Translation::new(2, src.clone(), tgt.clone(), images.clone()).unwrap();
    let ct = ContextualTranslation::new(tau, vec![eq("meet(x0, x1) = bot", &tgt)]).unwrap();
    let mut deductions = axioms_as_deductions(&src, &ka_axiom_texts());
    deductions.extend([
        Deduction::new(2, vec![eq("x0 = x1", &src)], eq("neg(x0) = neg(x1)", &src)).unwrap(),
        Deduction::new(
            2,
            vec![eq("meet(x0, x1) = x0", &src)],
            eq("join(x0, x1) = x1", &src),
        )
        .unwrap(),
    ]);
    CatalogTranslation {
        name: "kleene",
        source: "KA",
        target: "DL01",
        ct,
        deductions,
        presentations: vec![
            ("one-free", Presentation::new(1, vec![]).unwrap()),
            ("initial", Presentation::new(0, vec![]).unwrap()),
        ],
        functor_data: Some(FunctorData {
            kappa: 2,
            f1: Presentation::new(2, vec![eq("meet(x0, x1) = bot", &tgt)]).unwrap(),
            op_images: images,
        }),
    }
}

fn godel_translation() -> CatalogTranslation {
    let src = ha_sig();
    let tgt = ia_sig();
    let images = BTreeMap::from([
        ("meet".to_string(), vec![term("meet(x0, x1)", &tgt)]),
        ("join".to_string(), vec![term("join(x0, x1)", &tgt)]),
        ("neg".to_string(), vec![term("box(neg(x0))", &tgt)]),
        ("imp".to_string(), vec![term("box(imp(x0, x1))", &tgt)]),
        ("bot".to_string(), vec![term("bot", &tgt)]),
        ("top".to_string(), vec![term("top", &tgt)]),
    ]);
    let tau = Translation::new(1, src.clone(), tgt.clone(), images).unwrap();
    let ct = ContextualTranslation::new(tau, vec![eq("x0 = box(x0)", &tgt)]).unwrap();
    let mut deductions = axioms_as_deductions(&src, &ha_axiom_texts());
    deductions.extend([
        // modus ponens, equationally
        Deduction::new(
            2,
            vec![eq("x0 = top", &src), eq("imp(x0, x1) = top", &src)],
            eq("x1 = top", &src),
        )
        .unwrap(),
        Deduction::new(
            2,
            vec![eq("imp(x0, x1) = top", &src), eq("imp(x1, x0) = top", &src)],
            eq("x0 = x1", &src),
        )
        .unwrap(),
    ]);
    CatalogTranslation {
        name: "godel",
        source: "HA",
        target: "IA",
        ct,
        deductions,
        presentations: vec![
            ("one-free", Presentation::new(1, vec![]).unwrap()),
            ("initial", Presentation::new(0, vec![]).unwrap()),
        ],
        functor_data: None,
    }
}

fn kolmogorov_translation() -> CatalogTranslation {
    let src = ba_sig();
    let tgt = ha_sig();
    let images = BTreeMap::from([
        ("meet".to_string(), vec![term("neg(neg(meet(x0, x1)))", &tgt)]),
        ("join".to_string(), vec![term("neg(neg(join(x0, x1)))", &tgt)]),
        ("neg".to_string(), vec![term("neg(x0)", &tgt)]),
        ("imp".to_string(), vec![term("neg(neg(imp(x0, x1)))", &tgt)]),
        ("bot".to_string(), vec![term("bot", &tgt)]),
        ("top".to_string(), vec![term("top", &tgt)]),
    ]);
    let tau = Translation::new(1, src.clone(), tgt.clone(), images).unwrap();
    let ct = ContextualTranslation::new(tau, vec![eq("x0 = neg(neg(x0))", &tgt)]).unwrap();
    let mut deductions = axioms_as_deductions(&src, &ba_axiom_texts());
    deductions.extend([
        Deduction::new(
            2,
            vec![eq("meet(x0, x1) = bot", &src), eq("join(x0, x1) = top", &src)],
            eq("x1 = neg(x0)", &src),
        )
        .unwrap(),
        Deduction::new(
            2,
            vec![eq("x0 = top", &src), eq("imp(x0, x1) = top", &src)],
            eq("x1 = top", &src),
        )
        .unwrap(),
    ]);
    CatalogTranslation {
        name: "kolmogorov",
        source: "BA",
        target: "HA",
        ct,
        deductions,
        presentations: vec![
            ("one-free", Presentation::new(1, vec![]).unwrap()),
            ("initial", Presentation::new(0, vec![]).unwrap()),
        ],
        functor_data: None,
    }
}

pub fn translations() -> Vec<CatalogTranslation> {
    vec![kleene_translation(), godel_translation(), kolmogorov_translation()]
}

pub fn translation(name: &str) -> Option<CatalogTranslation> {
    translations().into_iter().find(|t| t.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use forge_core::matpow::DEFAULT_UNIVERSE_LIMIT;
    use forge_core::thetasub::is_compatible;

    #[test]
    fn every_battery_satisfies_its_axioms() {
        for c in classes() {
            for q in &c.axioms {
                assert!(c.battery.entails(q), "{}: {q}", c.name);
            }
            for (name, a) in &c.algebras {
                for q in &c.axioms {
                    assert!(a.satisfies_quasi_equation(q), "{}:{name}: {q}", c.name);
                }
            }
        }
    }

    #[test]
    fn catalog_translations_build_specs() {
        for t in translations() {
            let spec = t.spec().unwrap();
            assert!(is_compatible(spec.target.generators(), spec.theta())
                .unwrap()
                .is_none());
        }
    }

    #[test]
    fn heyting_upgrade_examples() {
        let h3 = heyting_from_lattice(&bounded_chain(3)).unwrap();
        // in the 3-chain: 1 → 0 is 0, 2 → 1 is 1, ¬1 = 0
        assert_eq!(h3.op("imp", &[1, 0]), 0);
        assert_eq!(h3.op("imp", &[2, 1]), 1);
        assert_eq!(h3.op("imp", &[0, 1]), 2);
        assert_eq!(h3.op("neg", &[1]), 0);
        assert_eq!(h3.op("neg", &[0]), 2);
    }

    #[test]
    fn interior_examples() {
        let op4 = interior_from_opens(&boolean_algebra(2), &[0, 1, 3]).unwrap();
        assert_eq!(op4.op("box", &[0]), 0);
        assert_eq!(op4.op("box", &[1]), 1);
        assert_eq!(op4.op("box", &[2]), 0); // largest open under the non-open atom
        assert_eq!(op4.op("box", &[3]), 3);
        // bad topologies are rejected
        assert!(interior_from_opens(&boolean_algebra(2), &[0, 1, 2]).is_err());
        assert!(interior_from_opens(&boolean_algebra(2), &[1, 3]).is_err());
    }

    #[test]
    fn godel_right_adjoint_gives_the_opens() {
        use forge_core::adjoint::apply_right_adjoint;
        let t = translation("godel").unwrap();
        let spec = t.spec().unwrap();
        let op4 = algebra("IA:op4").unwrap();
        let opens = apply_right_adjoint(&spec, &op4, DEFAULT_UNIVERSE_LIMIT).unwrap();
        assert_eq!(opens.size(), 3);
        // a 3-element Heyting chain
        let h3 = heyting_from_lattice(&bounded_chain(3)).unwrap();
        assert!(forge_core::finalg::are_isomorphic(&opens, &h3));
    }

    #[test]
    fn kolmogorov_right_adjoint_gives_the_regular_elements() {
        use forge_core::adjoint::apply_right_adjoint;
        let t = translation("kolmogorov").unwrap();
        let spec = t.spec().unwrap();
        let h3 = algebra("HA:chain3").unwrap();
        let regs = apply_right_adjoint(&spec, &h3, DEFAULT_UNIVERSE_LIMIT).unwrap();
        assert_eq!(regs.size(), 2);
        let st = algebra("HA:squaretop").unwrap();
        let regs = apply_right_adjoint(&spec, &st, DEFAULT_UNIVERSE_LIMIT).unwrap();
        assert_eq!(regs.size(), 4);
    }
}
