//! The right adjoint induced by a contextual translation — solutions of the
//! context inside a matrix power — its left adjoint on presentations, and
//! verification of adjointness by hom counting and by the explicit
//! decomposition isomorphism.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::classes::{present, ClassBattery, Presentation, PresentedAlgebra};
use crate::finalg::{enumerate_homs, AlgebraError, FiniteAlgebra, Homomorphism};
use crate::matpow::{MatrixLanguage, MatrixOp};
use crate::terms::{Equation, QuasiEquation, Term};
use crate::thetasub::{is_compatible, theta_sub, theta_sub_hom, ThetaEquation, ThetaSpec};
use crate::xlate::ContextualTranslation;

/// A contextual translation packaged with its source and target classes and
/// the derived matrix language and solution equations of the right adjoint
/// `G = θ_L ∘ [κ]`.
#[derive(Debug, Clone)]
pub struct RightAdjointSpec {
    pub ct: ContextualTranslation,
    pub source: ClassBattery,
    pub target: ClassBattery,
    /// Quasi-equations every right-adjoint image must satisfy (typically the
    /// source class's defining axioms); checked after each application.
    pub source_axioms: Vec<QuasiEquation>,
    lang: MatrixLanguage,
    theta: ThetaSpec,
}

impl RightAdjointSpec {
    /// Derives the language `{τ(ψ) : ψ}` and the constant-tuple form of the
    /// context, and eagerly checks that the context is compatible with the
    /// language on the target battery (which the context-preservation
    /// condition guarantees for genuine contextual translations).
    pub fn new(
        ct: ContextualTranslation,
        source: ClassBattery,
        target: ClassBattery,
        source_axioms: Vec<QuasiEquation>,
    ) -> Result<Self, AlgebraError> {
        if !ct.tau.source_sig().same_ops(source.signature()) {
            return Err(AlgebraError::SignatureMismatch);
        }
        if !ct.tau.target_sig().same_ops(target.signature()) {
            return Err(AlgebraError::SignatureMismatch);
        }
        let kappa = ct.kappa();
        let mut ops = Vec::new();
        for (sym, arity) in source.signature().ops() {
            let components = ct.tau.image(sym).expect("validated translation").to_vec();
            ops.push(MatrixOp::new(
                target.signature(),
                sym.clone(),
                *arity,
                kappa,
                components,
            )?);
        }
        let lang = MatrixLanguage::new(target.signature().clone(), kappa, ops)?;
        let theta_eqs = ct
            .context
            .iter()
            .map(|e| {
                ThetaEquation::new(
                    vec![e.lhs.clone(); kappa],
                    vec![e.rhs.clone(); kappa],
                    kappa,
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        let theta = ThetaSpec::new(lang.clone(), theta_eqs)?;
        if let Some(cex) = is_compatible(target.generators(), &theta)? {
            return Err(AlgebraError::Other(format!(
                "context is not compatible with the translated language at {} \
                 (generator {}, args {:?})",
                cex.op, cex.algebra, cex.args
            )));
        }
        Ok(RightAdjointSpec { ct, source, target, source_axioms, lang, theta })
    }

    pub fn lang(&self) -> &MatrixLanguage {
        &self.lang
    }

    pub fn theta(&self) -> &ThetaSpec {
        &self.theta
    }

    pub fn kappa(&self) -> usize {
        self.ct.kappa()
    }
}

/// Applies the right adjoint to a target-signature algebra: the solutions of
/// the context inside the matrix power, relabeled with the source signature.
/// The image is checked against the spec's source axioms.
pub fn apply_right_adjoint(
    spec: &RightAdjointSpec,
    b: &FiniteAlgebra,
    limit: usize,
) -> Result<FiniteAlgebra, AlgebraError> {
    let sub = theta_sub(b, &spec.theta, limit)?;
    let image = sub.algebra.with_signature(spec.source.signature().clone())?;
    for q in &spec.source_axioms {
        if !image.satisfies_quasi_equation(q) {
            return Err(AlgebraError::Other(format!(
                "right-adjoint image violates the source axiom {q}"
            )));
        }
    }
    Ok(image)
}

/// The right adjoint on arrows: the coordinatewise lift restricted to
/// solutions, relabeled with the source signature.
pub fn apply_right_adjoint_hom(
    spec: &RightAdjointSpec,
    f: &Homomorphism,
    limit: usize,
) -> Result<Homomorphism, AlgebraError> {
    let restricted = theta_sub_hom(f, &spec.theta, limit)?;
    let sig = spec.source.signature().clone();
    Homomorphism::new(
        restricted.source().clone().with_signature(sig.clone())?,
        restricted.target().clone().with_signature(sig)?,
        restricted.map().to_vec(),
    )
}

/// Applies the left adjoint to a presentation over the source class: κ·λ
/// generators, with the lifted relations plus one copy of the context per
/// original generator block. Returns the presented target algebra and the
/// presentation itself.
pub fn apply_left_adjoint(
    spec: &RightAdjointSpec,
    p: &Presentation,
) -> Result<(PresentedAlgebra, Presentation), AlgebraError> {
    let mut relations = spec.ct.tau.lift_equations(&p.relations)?;
    for j in 0..p.lambda {
        relations.extend(spec.ct.context_at_block(j));
    }
    let out = Presentation::new(spec.kappa() * p.lambda, relations)?;
    let algebra = present(&spec.target, &out)?;
    Ok((algebra, out))
}

/// Outcome of counting both hom-sets of the adjunction for one presentation
/// and one target algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomsetReport {
    /// `|hom_Y(F(P), B)|`.
    pub count_left: usize,
    /// `|hom_X(present(X, P), G(B))|`.
    pub count_right: usize,
    pub bijective: bool,
}

/// Verifies the hom-set bijection of the adjunction on a presentation `P`
/// and target algebra `B`: counts both sides and additionally builds the
/// explicit correspondence — each `f : F(P) → B` restricts, via the tuples
/// `⟨f(π(x^{jκ+i})) : i<κ⟩`, to a homomorphism `present(X,P) → G(B)` — and
/// checks it is injective. `bijective` requires equal counts and an injective
/// well-defined correspondence.
pub fn verify_homset_bijection(
    spec: &RightAdjointSpec,
    p: &Presentation,
    b: &FiniteAlgebra,
    limit: usize,
) -> Result<HomsetReport, AlgebraError> {
    let (fp, _) = apply_left_adjoint(spec, p)?;
    let left_homs = enumerate_homs(&fp.algebra, b)?;
    let count_left = left_homs.len();

    let ax = present(&spec.source, p)?;
    let gb = apply_right_adjoint(spec, b, limit)?;
    let count_right = enumerate_homs(&ax.algebra, &gb)?.len();

    // Solution tuples of G(B), for locating σ-images.
    let gb_sub = theta_sub(b, &spec.theta, limit)?;
    let kappa = spec.kappa();

    let mut images: Vec<Vec<usize>> = Vec::new();
    let mut correspondence_ok = true;
    for f in &left_homs {
        // generator images: block j restricts to a solution tuple of B
        let mut gen_images = Vec::with_capacity(p.lambda);
        for j in 0..p.lambda {
            let tuple: Vec<usize> = (0..kappa)
                .map(|i| f.apply(fp.generator(j * kappa + i)))
                .collect();
            match gb_sub.coords.iter().position(|t| *t == tuple) {
                Some(e) => gen_images.push(e),
                None => {
                    correspondence_ok = false;
                    break;
                }
            }
        }
        if gen_images.len() < p.lambda {
            break;
        }
        // extend over all of present(X, P) via canonical representatives
        let mut map = Vec::with_capacity(ax.algebra.size());
        for e in 0..ax.algebra.size() {
            map.push(gb.evaluate(ax.term_of(e), &gen_images)?);
        }
        if Homomorphism::new(ax.algebra.clone(), gb.clone(), map.clone()).is_err() {
            correspondence_ok = false;
            break;
        }
        if images.contains(&map) {
            correspondence_ok = false; // not injective
            break;
        }
        images.push(map);
    }

    Ok(HomsetReport {
        count_left,
        count_right,
        bijective: count_left == count_right && correspondence_ok,
    })
}

/// Verifies the decomposition isomorphism on one target algebra `B`: the set
/// `H = hom_Y(F1, B)` (where `F1` is the context presentation on κ
/// generators, the left-adjoint image of one free generator) carries a
/// source-signature structure `ψ^H(f₁,…,fₙ) = ⟨f₁,…,fₙ⟩ ∘ F(ψ)`, and the map
/// `σ : f ↦ ⟨f(π₁(x^i)) : i<κ⟩` must be a bijective homomorphism from `H`
/// onto `G(B)`.
pub fn verify_sigma_iso(
    spec: &RightAdjointSpec,
    b: &FiniteAlgebra,
    limit: usize,
) -> Result<bool, AlgebraError> {
    let kappa = spec.kappa();
    let f1 = present(
        &spec.target,
        &Presentation::new(kappa, spec.ct.context_at_block(0))?,
    )?;
    let homs = enumerate_homs(&f1.algebra, b)?;

    // Source-structure tables on H: ψ^H applied to (f_1..f_n) sends each
    // u ∈ F1 to the evaluation in B of u's representative term with x<i>
    // replaced by τ(ψ)'s i-th component, under the assignment
    // x<m·κ+i> ↦ f_m(π₁(x^i)).
    let hom_index = |map: &[usize]| homs.iter().position(|h| h.map() == map);
    let sig = spec.source.signature().clone();
    let mut tables: BTreeMap<alloc::string::String, Vec<usize>> = BTreeMap::new();
    for (sym, arity) in sig.ops() {
        let tau_sym = spec.ct.tau.image(sym).expect("validated translation");
        let entries = homs.len().checked_pow(*arity as u32).ok_or_else(|| {
            AlgebraError::Other("hom-set structure table overflow".into())
        })?;
        let entries = if *arity == 0 { 1 } else { entries };
        let mut table = Vec::with_capacity(entries);
        let mut args = vec![0usize; *arity];
        for idx in 0..entries {
            crate::finalg::decode_args(idx, homs.len().max(1), &mut args);
            let mut assignment = vec![0usize; *arity * kappa];
            for (m, &fm) in args.iter().enumerate() {
                for i in 0..kappa {
                    assignment[m * kappa + i] = homs[fm].apply(f1.generator(i));
                }
            }
            let substitution: BTreeMap<usize, Term> =
                tau_sym.iter().cloned().enumerate().collect();
            let mut result_map = Vec::with_capacity(f1.algebra.size());
            for u in 0..f1.algebra.size() {
                let t = f1.term_of(u).substitute(&substitution);
                result_map.push(b.evaluate(&t, &assignment)?);
            }
            match hom_index(&result_map) {
                Some(r) => table.push(r),
                None => return Ok(false), // structure does not close on H
            }
        }
        tables.insert(sym.clone(), table);
    }
    let h_algebra = match FiniteAlgebra::new(sig, homs.len(), tables) {
        Ok(a) => a,
        Err(_) => return Ok(false),
    };

    // σ: f ↦ the solution tuple of its generator images.
    let gb_sub = theta_sub(b, &spec.theta, limit)?;
    let gb = gb_sub
        .algebra
        .clone()
        .with_signature(spec.source.signature().clone())?;
    if gb.size() != homs.len() {
        return Ok(false);
    }
    let mut sigma_map = Vec::with_capacity(homs.len());
    for h in &homs {
        let tuple: Vec<usize> = (0..kappa).map(|i| h.apply(f1.generator(i))).collect();
        match gb_sub.coords.iter().position(|t| *t == tuple) {
            Some(e) => sigma_map.push(e),
            None => return Ok(false),
        }
    }
    let sigma = match Homomorphism::new(h_algebra, gb, sigma_map) {
        Ok(s) => s,
        Err(_) => return Ok(false),
    };
    Ok(sigma.is_injective() && sigma.is_surjective())
}

/// The finiteness witness of the decomposition: the exponent and context are
/// finite by construction, and the one-generator left-adjoint image is
/// presented by (κ, context).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitenessReport {
    pub kappa_finite: bool,
    pub theta_finite: bool,
    pub witness_generators: usize,
    pub witness_relations: Vec<Equation>,
}

pub fn finiteness_report(spec: &RightAdjointSpec) -> FinitenessReport {
    FinitenessReport {
        kappa_finite: true,
        theta_finite: true,
        witness_generators: spec.kappa(),
        witness_relations: spec.ct.context.clone(),
    }
}

#[cfg(test)]
pub(crate) mod testkit {
    use super::*;
    use crate::finalg::testkit::*;
    use crate::terms::eq;
    use crate::xlate::testkit::kleene_ct;

    pub fn kleene_spec() -> RightAdjointSpec {
        let x = ClassBattery::new("KA", ka_sig(), vec![kleene_chain3()]).unwrap();
        let y = ClassBattery::new("DL01", dl01_sig(), vec![chain(2)]).unwrap();
        let axioms = vec![
            QuasiEquation::identity(eq("neg(neg(x0)) = x0", &ka_sig())),
            QuasiEquation::identity(eq("neg(meet(x0, x1)) = join(neg(x0), neg(x1))", &ka_sig())),
        ];
        RightAdjointSpec::new(kleene_ct(), x, y, axioms).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::testkit::*;
    use super::*;
    use crate::finalg::testkit::*;
    use crate::finalg::{are_isomorphic, product};
    use crate::matpow::DEFAULT_UNIVERSE_LIMIT;

    const LIMIT: usize = DEFAULT_UNIVERSE_LIMIT;

    #[test]
    fn right_adjoint_on_objects() {
        let spec = kleene_spec();
        let g2 = apply_right_adjoint(&spec, &chain(2), LIMIT).unwrap();
        assert!(are_isomorphic(&g2, &kleene_chain3()));
        let g3 = apply_right_adjoint(&spec, &chain(3), LIMIT).unwrap();
        assert_eq!(g3.size(), 5);
    }

    #[test]
    fn right_adjoint_on_arrows() {
        let spec = kleene_spec();
        let f = Homomorphism::new(chain(3), chain(2), vec![0, 1, 1]).unwrap();
        let gf = apply_right_adjoint_hom(&spec, &f, LIMIT).unwrap();
        assert_eq!(gf.source().size(), 5);
        assert_eq!(gf.target().size(), 3);
        let id = Homomorphism::identity(&chain(2));
        let gid = apply_right_adjoint_hom(&spec, &id, LIMIT).unwrap();
        assert_eq!(gid.map(), &[0, 1, 2]);
    }

    #[test]
    fn left_adjoint_on_presentations() {
        let spec = kleene_spec();
        let (fp, out) = apply_left_adjoint(&spec, &Presentation::new(1, vec![]).unwrap()).unwrap();
        assert_eq!(out.lambda, 2);
        assert_eq!(out.relations.len(), 1);
        assert_eq!(fp.algebra.size(), 5);

        let (f0, _) = apply_left_adjoint(&spec, &Presentation::new(0, vec![]).unwrap()).unwrap();
        assert_eq!(f0.algebra.size(), 2);
    }

    #[test]
    fn homset_bijection_counts() {
        let spec = kleene_spec();
        let p = Presentation::new(1, vec![]).unwrap();
        let cases = [(chain(2), 3), (chain(3), 5), (square(), 9)];
        for (b, expected) in cases {
            let r = verify_homset_bijection(&spec, &p, &b, LIMIT).unwrap();
            assert_eq!(r.count_left, expected);
            assert_eq!(r.count_right, expected);
            assert!(r.bijective);
        }
        // terminal object on the right
        let trivial = FiniteAlgebra::from_fn(dl01_sig(), 1, |_, _| 0).unwrap();
        let r = verify_homset_bijection(&spec, &p, &trivial, LIMIT).unwrap();
        assert_eq!((r.count_left, r.count_right), (1, 1));
        assert!(r.bijective);
    }

    #[test]
    fn sigma_isomorphism() {
        let spec = kleene_spec();
        for b in [chain(2), chain(3), square()] {
            assert!(verify_sigma_iso(&spec, &b, LIMIT).unwrap());
        }
    }

    #[test]
    fn sigma_naturality_sample() {
        // G(g) ∘ σ_B = σ_B′ ∘ (postcomposition with g) for g : B → B′
        let spec = kleene_spec();
        let g = Homomorphism::new(chain(3), chain(2), vec![0, 1, 1]).unwrap();
        let f1 = present(
            &spec.target,
            &Presentation::new(2, spec.ct.context_at_block(0)).unwrap(),
        )
        .unwrap();
        let homs_b = enumerate_homs(&f1.algebra, g.source()).unwrap();
        let gg = apply_right_adjoint_hom(&spec, &g, LIMIT).unwrap();
        let sub_b = theta_sub(g.source(), spec.theta(), LIMIT).unwrap();
        let sub_b2 = theta_sub(g.target(), spec.theta(), LIMIT).unwrap();
        for h in &homs_b {
            let sigma_b = |h: &Homomorphism, sub: &crate::thetasub::ThetaSubAlgebra| {
                let tuple: Vec<usize> = (0..2).map(|i| h.apply(f1.generator(i))).collect();
                sub.coords.iter().position(|t| *t == tuple).unwrap()
            };
            let left = gg.apply(sigma_b(h, &sub_b));
            let right = sigma_b(&g.compose(h).unwrap(), &sub_b2);
            assert_eq!(left, right);
        }
    }

    #[test]
    fn left_adjoint_respects_extra_relations() {
        // adding relations induces a surjection between the images
        use crate::terms::eq;
        let spec = kleene_spec();
        let p1 = Presentation::new(1, vec![]).unwrap();
        let p2 = Presentation::new(1, vec![eq("neg(x0) = x0", &ka_sig())]).unwrap();
        let (f1, _) = apply_left_adjoint(&spec, &p1).unwrap();
        let (f2, _) = apply_left_adjoint(&spec, &p2).unwrap();
        assert!(f2.algebra.size() <= f1.algebra.size());
        // the canonical map exists: every relation of p1 holds in f2
        let gens: Vec<usize> = (0..2).map(|j| f2.generator(j)).collect();
        let map: Vec<usize> = (0..f1.algebra.size())
            .map(|e| f2.algebra.evaluate(f1.term_of(e), &gens).unwrap())
            .collect();
        let h = Homomorphism::new(f1.algebra.clone(), f2.algebra.clone(), map).unwrap();
        assert!(h.is_surjective());
    }

    #[test]
    fn finiteness_witness() {
        let spec = kleene_spec();
        let r = finiteness_report(&spec);
        assert!(r.kappa_finite && r.theta_finite);
        assert_eq!(r.witness_generators, 2);
        assert_eq!(r.witness_relations.len(), 1);
    }

    #[test]
    fn right_adjoint_matches_brute_force() {
        // G(A) = {⟨a,b⟩ : a∧b = ⊥} with the blockwise structure, built here
        // directly from the definition
        let spec = kleene_spec();
        for a in [chain(2), chain(3), square(), chain(4)] {
            let image = apply_right_adjoint(&spec, &a, LIMIT).unwrap();
            let brute = brute_force_disjoint_pairs(&a);
            assert!(are_isomorphic(&image, &brute));
        }
        let (cube, _) = product(&dl01_sig(), &[chain(2), chain(2), chain(2)]).unwrap();
        let image = apply_right_adjoint(&spec, &cube, LIMIT).unwrap();
        assert!(are_isomorphic(&image, &brute_force_disjoint_pairs(&cube)));
    }

    /// Independent oracle: enumerate the disjoint pairs of a bounded lattice
    /// and equip them with the Kleene structure directly.
    fn brute_force_disjoint_pairs(a: &FiniteAlgebra) -> FiniteAlgebra {
        let bot = a.op("bot", &[]);
        let top = a.op("top", &[]);
        let mut pairs = Vec::new();
        for x in 0..a.size() {
            for y in 0..a.size() {
                if a.op("meet", &[x, y]) == bot {
                    pairs.push((x, y));
                }
            }
        }
        let index = |p: (usize, usize)| pairs.iter().position(|&q| q == p).unwrap();
        FiniteAlgebra::from_fn(ka_sig(), pairs.len(), |sym, args| {
            let get = |i: usize| pairs[args[i]];
            match sym {
                "meet" => {
                    let ((a1, b1), (a2, b2)) = (get(0), get(1));
                    index((a.op("meet", &[a1, a2]), a.op("join", &[b1, b2])))
                }
                "join" => {
                    let ((a1, b1), (a2, b2)) = (get(0), get(1));
                    index((a.op("join", &[a1, a2]), a.op("meet", &[b1, b2])))
                }
                "neg" => {
                    let (x, y) = get(0);
                    index((y, x))
                }
                "bot" => index((bot, top)),
                "top" => index((top, bot)),
                _ => unreachable!(),
            }
        })
        .unwrap()
    }
}
