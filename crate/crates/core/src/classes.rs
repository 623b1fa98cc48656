//! Classes of algebras presented by finitely many finite generators.
//!
//! A [`ClassBattery`] stands for the quasi-variety generated by its listed
//! algebras. Entailment, free algebras and relative congruence generation are
//! all decided exactly by exhaustive evaluation over the generators.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::cmp::Ordering;

use crate::finalg::{
    decode_args, enumerate_homs, quotient, AlgebraError, Congruence, FiniteAlgebra, Homomorphism,
};
use crate::terms::{compare_terms, Equation, QuasiEquation, Signature, Term};

/// A finite list of finite algebras over a common signature, standing for the
/// quasi-variety they generate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassBattery {
    name: String,
    sig: Signature,
    generators: Vec<FiniteAlgebra>,
}

impl ClassBattery {
    pub fn new(
        name: impl Into<String>,
        sig: Signature,
        generators: Vec<FiniteAlgebra>,
    ) -> Result<Self, AlgebraError> {
        for g in &generators {
            if !g.signature().same_ops(&sig) {
                return Err(AlgebraError::SignatureMismatch);
            }
        }
        Ok(ClassBattery { name: name.into(), sig, generators })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn generators(&self) -> &[FiniteAlgebra] {
        &self.generators
    }

    /// Whether the quasi-equation holds in every generator (and hence in the
    /// whole generated class).
    pub fn entails(&self, q: &QuasiEquation) -> bool {
        self.generators.iter().all(|g| g.satisfies_quasi_equation(q))
    }

    pub fn entails_equation(&self, e: &Equation) -> bool {
        self.entails(&QuasiEquation::identity(e.clone()))
    }

    /// A generator and assignment falsifying the quasi-equation, if any.
    pub fn countermodel(&self, q: &QuasiEquation) -> Option<(usize, Vec<usize>)> {
        self.generators
            .iter()
            .enumerate()
            .find_map(|(i, g)| g.quasi_countermodel(q).map(|a| (i, a)))
    }
}

/// The free algebra of the class on `lambda` generators, together with the
/// generator elements and a canonical term representative for each element.
///
/// Representatives have minimal depth; ties are broken by the canonical term
/// order of the signature.
#[derive(Debug, Clone)]
pub struct FreeAlgebra {
    pub algebra: FiniteAlgebra,
    pub generators: Vec<usize>,
    term_of: Vec<Term>,
}

impl FreeAlgebra {
    pub fn term_of(&self, e: usize) -> &Term {
        &self.term_of[e]
    }

    /// Evaluates a term over variables `x0..x<lambda-1>` at the generators.
    pub fn eval_term(&self, t: &Term) -> Result<usize, AlgebraError> {
        self.algebra.evaluate(t, &self.generators)
    }
}

/// Computes the free algebra of `battery` on `lambda` generators as the
/// subalgebra of the product of all (generator, assignment) factors that is
/// generated by the projection tuples of the variables.
///
/// The product itself is never materialized: elements are handled as
/// coordinate vectors, one coordinate per pair of a generator algebra `G` and
/// an assignment of the `lambda` variables into `G`.
pub fn free_algebra(battery: &ClassBattery, lambda: usize) -> Result<FreeAlgebra, AlgebraError> {
    // Factor list: (generator index, assignment), assignments in mixed-radix
    // order with variable 0 most significant.
    let mut factors: Vec<(usize, Vec<usize>)> = Vec::new();
    for (gi, g) in battery.generators.iter().enumerate() {
        let count = {
            let mut c: usize = 1;
            for _ in 0..lambda {
                c = c
                    .checked_mul(g.size())
                    .ok_or_else(|| AlgebraError::Other(format!("too many assignments into {gi}")))?;
            }
            c
        };
        if g.size() == 0 && lambda > 0 {
            continue;
        }
        let mut asn = vec![0usize; lambda];
        for idx in 0..count {
            decode_args(idx, g.size().max(1), &mut asn);
            factors.push((gi, asn.clone()));
        }
    }

    let apply = |sym: &str, args: &[&Vec<usize>]| -> Vec<usize> {
        factors
            .iter()
            .enumerate()
            .map(|(f, (gi, _))| {
                let component: Vec<usize> = args.iter().map(|a| a[f]).collect();
                battery.generators[*gi].op(sym, &component)
            })
            .collect()
    };

    // Seed: variable tuples, then constants.
    let mut elements: Vec<Vec<usize>> = Vec::new();
    let mut index_of: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut term_of: Vec<Term> = Vec::new();
    let mut generators: Vec<usize> = Vec::new();
    for j in 0..lambda {
        let vec: Vec<usize> = factors.iter().map(|(_, asn)| asn[j]).collect();
        if let Some(&e) = index_of.get(&vec) {
            generators.push(e);
        } else {
            index_of.insert(vec.clone(), elements.len());
            generators.push(elements.len());
            elements.push(vec);
            term_of.push(Term::var(j));
        }
    }
    for c in battery.sig.constants() {
        let vec = apply(c, &[]);
        if !index_of.contains_key(&vec) {
            index_of.insert(vec.clone(), elements.len());
            elements.push(vec);
            term_of.push(Term::constant(c));
        }
    }

    // Depth-by-depth closure. Elements discovered in round r have canonical
    // terms of depth exactly r; ties inside a round keep the smaller term.
    let mut frontier_start = 0;
    while frontier_start < elements.len() {
        let known = elements.len();
        let mut round: Vec<(Vec<usize>, Term)> = Vec::new();
        let mut round_index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for (sym, arity) in battery.sig.ops() {
            if *arity == 0 {
                continue;
            }
            let entries = {
                let mut c: usize = 1;
                for _ in 0..*arity {
                    c = c
                        .checked_mul(known)
                        .ok_or_else(|| AlgebraError::Other("closure overflow".into()))?;
                }
                c
            };
            let mut args = vec![0usize; *arity];
            for idx in 0..entries {
                decode_args(idx, known, &mut args);
                if args.iter().all(|&x| x < frontier_start) {
                    continue;
                }
                let arg_vecs: Vec<&Vec<usize>> = args.iter().map(|&x| &elements[x]).collect();
                let vec = apply(sym, &arg_vecs);
                if index_of.contains_key(&vec) {
                    continue;
                }
                let t = Term::app(
                    sym.clone(),
                    args.iter().map(|&x| term_of[x].clone()).collect(),
                );
                match round_index.get(&vec) {
                    Some(&slot) => {
                        if compare_terms(&battery.sig, &t, &round[slot].1) == Ordering::Less {
                            round[slot].1 = t;
                        }
                    }
                    None => {
                        round_index.insert(vec.clone(), round.len());
                        round.push((vec, t));
                    }
                }
            }
        }
        for (vec, t) in round {
            index_of.insert(vec.clone(), elements.len());
            elements.push(vec);
            term_of.push(t);
        }
        frontier_start = known;
    }

    let algebra = FiniteAlgebra::from_fn(battery.sig.clone(), elements.len(), |sym, args| {
        let arg_vecs: Vec<&Vec<usize>> = args.iter().map(|&x| &elements[x]).collect();
        index_of[&apply(sym, &arg_vecs)]
    })?;
    Ok(FreeAlgebra { algebra, generators, term_of })
}

/// The least congruence of `a` containing `pairs` whose quotient embeds into
/// a power of the battery's generators: the intersection of the kernels of
/// all homomorphisms from `a` into a generator that collapse every pair.
/// If no homomorphism qualifies, the result is the top congruence.
pub fn cg_class(
    battery: &ClassBattery,
    a: &FiniteAlgebra,
    pairs: &[(usize, usize)],
) -> Result<Congruence, AlgebraError> {
    let mut signatures: Vec<Vec<usize>> = vec![Vec::new(); a.size()];
    let mut found = false;
    for g in &battery.generators {
        for h in enumerate_homs(a, g)? {
            if pairs.iter().any(|&(x, y)| h.apply(x) != h.apply(y)) {
                continue;
            }
            found = true;
            for e in 0..a.size() {
                signatures[e].push(h.apply(e));
            }
        }
    }
    if !found {
        return Ok(Congruence::top(a.clone()));
    }
    let mut dense: BTreeMap<&Vec<usize>, usize> = BTreeMap::new();
    let mut labels = Vec::with_capacity(a.size());
    for s in &signatures {
        let next = dense.len();
        labels.push(*dense.entry(s).or_insert(next));
    }
    Congruence::from_labels(a.clone(), labels)
}

/// A finite presentation: `lambda` generators and relations between terms
/// over the variables `x0..x<lambda-1>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub lambda: usize,
    pub relations: Vec<Equation>,
}

impl Presentation {
    pub fn new(lambda: usize, relations: Vec<Equation>) -> Result<Self, AlgebraError> {
        for r in &relations {
            if let Some(&v) = r.variables().iter().next_back() {
                if v >= lambda {
                    return Err(AlgebraError::Other(format!(
                        "relation {r} uses x{v}, but only {lambda} generators are declared"
                    )));
                }
            }
        }
        Ok(Presentation { lambda, relations })
    }
}

/// A presented algebra: the quotient of the free algebra by the class
/// congruence generated by the relations, with its projection.
#[derive(Debug, Clone)]
pub struct PresentedAlgebra {
    pub free: FreeAlgebra,
    pub algebra: FiniteAlgebra,
    /// Canonical projection from the free algebra onto the quotient.
    pub projection: Homomorphism,
}

impl PresentedAlgebra {
    /// Image of the `j`-th generator in the presented algebra.
    pub fn generator(&self, j: usize) -> usize {
        self.projection.apply(self.free.generators[j])
    }

    /// The canonical term naming an element: the representative of the least
    /// free-algebra element in its fiber.
    pub fn term_of(&self, e: usize) -> &Term {
        let pre = min_preimage(&self.projection, e).expect("projection is onto");
        self.free.term_of(pre)
    }

    pub fn eval_term(&self, t: &Term) -> Result<usize, AlgebraError> {
        let gens: Vec<usize> = (0..self.free.generators.len())
            .map(|j| self.generator(j))
            .collect();
        self.algebra.evaluate(t, &gens)
    }
}

/// Builds the algebra presented by `p` relative to the class.
pub fn present(battery: &ClassBattery, p: &Presentation) -> Result<PresentedAlgebra, AlgebraError> {
    for r in &p.relations {
        r.validate(&battery.sig)
            .map_err(|e| AlgebraError::Other(format!("{e}")))?;
    }
    let free = free_algebra(battery, p.lambda)?;
    let mut pairs = Vec::with_capacity(p.relations.len());
    for r in &p.relations {
        pairs.push((free.eval_term(&r.lhs)?, free.eval_term(&r.rhs)?));
    }
    let theta = cg_class(battery, &free.algebra, &pairs)?;
    let (algebra, projection) = quotient(&free.algebra, &theta)?;
    Ok(PresentedAlgebra { free, algebra, projection })
}

/// The least source element mapped to `v`.
pub fn min_preimage(h: &Homomorphism, v: usize) -> Option<usize> {
    h.map().iter().position(|&x| x == v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finalg::testkit::*;
    use crate::terms::{eq, term};
    use alloc::string::ToString;

    fn dl01_battery() -> ClassBattery {
        ClassBattery::new("bounded distributive lattices", dl01_sig(), vec![chain(2)]).unwrap()
    }

    fn ka_battery() -> ClassBattery {
        ClassBattery::new("Kleene algebras", ka_sig(), vec![kleene_chain3()]).unwrap()
    }

    #[test]
    fn free_bounded_lattice_sizes() {
        // Free bounded distributive lattices: 2, 3 and 6 elements.
        for (lambda, expected) in [(0usize, 2usize), (1, 3), (2, 6)] {
            let f = free_algebra(&dl01_battery(), lambda).unwrap();
            assert_eq!(f.algebra.size(), expected, "lambda = {lambda}");
        }
    }

    #[test]
    fn free_kleene_one_generator() {
        // 0 < x&~x < {x, ~x} < x|~x < 1: six elements.
        let f = free_algebra(&ka_battery(), 1).unwrap();
        assert_eq!(f.algebra.size(), 6);
        // representatives are minimal-depth and canonical
        let names: Vec<String> = (0..6).map(|e| f.term_of(e).to_string()).collect();
        assert!(names.contains(&"x0".to_string()));
        assert!(names.contains(&"neg(x0)".to_string()));
        assert!(names.contains(&"bot".to_string()));
        assert!(names.contains(&"top".to_string()));
        assert!(names.contains(&"meet(x0, neg(x0))".to_string()));
        assert!(names.contains(&"join(x0, neg(x0))".to_string()));
    }

    /// Universal property oracle: maps of generators into a generator algebra
    /// correspond bijectively to homomorphisms out of the free algebra.
    #[test]
    fn free_algebra_universal_property() {
        for lambda in 0..3 {
            let f = free_algebra(&dl01_battery(), lambda).unwrap();
            let homs = enumerate_homs(&f.algebra, &chain(2)).unwrap();
            assert_eq!(homs.len(), 2usize.pow(lambda as u32));
            // distinct homomorphisms differ on the generators
            for (i, h1) in homs.iter().enumerate() {
                for h2 in homs.iter().skip(i + 1) {
                    assert!(f.generators.iter().any(|&g| h1.apply(g) != h2.apply(g)));
                }
            }
        }
    }

    #[test]
    fn term_representatives_evaluate_back() {
        let f = free_algebra(&ka_battery(), 2).unwrap();
        for e in 0..f.algebra.size() {
            assert_eq!(f.eval_term(f.term_of(e)).unwrap(), e);
        }
    }

    #[test]
    fn class_congruence_meets_entailment() {
        // K entails premises -> conclusion iff the conclusion's pair lies in
        // the class congruence generated by the premise pairs.
        let battery = dl01_battery();
        let sig = dl01_sig();
        let cases = [
            (vec!["meet(x0, x1) = top"], "x0 = top", true),
            (vec!["join(x0, x1) = bot"], "x1 = bot", true),
            (vec![], "meet(x0, x1) = meet(x1, x0)", true),
            (vec!["x0 = x1"], "x0 = bot", false),
            (vec![], "x0 = x1", false),
        ];
        for (premises, conclusion, expected) in cases {
            let premises: Vec<Equation> = premises.iter().map(|s| eq(s, &sig)).collect();
            let conclusion = eq(conclusion, &sig);
            let q = QuasiEquation::new(premises.clone(), conclusion.clone());
            assert_eq!(battery.entails(&q), expected, "{q}");

            let f = free_algebra(&battery, 2).unwrap();
            let pairs: Vec<(usize, usize)> = premises
                .iter()
                .map(|p| (f.eval_term(&p.lhs).unwrap(), f.eval_term(&p.rhs).unwrap()))
                .collect();
            let theta = cg_class(&battery, &f.algebra, &pairs).unwrap();
            let l = f.eval_term(&conclusion.lhs).unwrap();
            let r = f.eval_term(&conclusion.rhs).unwrap();
            assert_eq!(theta.relates(l, r), expected, "{q}");
        }
    }

    #[test]
    fn inconsistent_pairs_give_top() {
        let battery = dl01_battery();
        let f = free_algebra(&battery, 1).unwrap();
        let b = f.eval_term(&term("bot", &dl01_sig())).unwrap();
        let t = f.eval_term(&term("top", &dl01_sig())).unwrap();
        let theta = cg_class(&battery, &f.algebra, &[(b, t)]).unwrap();
        assert_eq!(theta.num_blocks(), 1);
    }

    #[test]
    fn presentation_quotient() {
        let battery = dl01_battery();
        let sig = dl01_sig();
        let p = Presentation::new(2, vec![eq("meet(x0, x1) = bot", &sig)]).unwrap();
        let pres = present(&battery, &p).unwrap();
        // free on two generators has 6 elements; identifying x0 /\ x1 with
        // bottom collapses exactly one pair
        assert_eq!(pres.free.algebra.size(), 6);
        assert_eq!(pres.algebra.size(), 5);
        assert!(pres.projection.is_surjective());
        let m = term("meet(x0, x1)", &sig);
        assert_eq!(
            pres.eval_term(&m).unwrap(),
            pres.eval_term(&term("bot", &sig)).unwrap()
        );

        // empty presentation is the free algebra itself
        let p = Presentation::new(2, vec![]).unwrap();
        let pres = present(&battery, &p).unwrap();
        assert_eq!(pres.algebra.size(), 6);
    }

    #[test]
    fn presentation_rejects_stray_variables() {
        let sig = dl01_sig();
        assert!(Presentation::new(1, vec![eq("x0 = x1", &sig)]).is_err());
        assert!(Presentation::new(2, vec![eq("x0 = x1", &sig)]).is_ok());
    }
}
