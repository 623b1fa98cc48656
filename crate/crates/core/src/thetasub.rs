//! Compatible equation sets and the solution subalgebras they carve out of
//! matrix powers.
//!
//! A [`ThetaSpec`] pairs a finite matrix language `L` with a finite set θ of
//! equations between κ-tuples in one tuple variable. When θ is compatible
//! with `L`, the solutions of θ in a matrix power form a subalgebra under the
//! restricted `L`-operations.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::finalg::{AlgebraError, FiniteAlgebra, Homomorphism};
use crate::matpow::{decode_tuple, matrix_power, MatrixLanguage};
use crate::terms::Term;

/// An equation `⟨lhs_0,…,lhs_{κ-1}⟩ ≈ ⟨rhs_0,…,rhs_{κ-1}⟩` between κ-tuples
/// of base terms in one tuple variable, whose coordinates are the flattened
/// variables `x0..x<κ-1>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaEquation {
    pub lhs: Vec<Term>,
    pub rhs: Vec<Term>,
}

impl ThetaEquation {
    pub fn new(lhs: Vec<Term>, rhs: Vec<Term>, kappa: usize) -> Result<Self, AlgebraError> {
        if lhs.len() != kappa || rhs.len() != kappa {
            return Err(AlgebraError::Other(format!(
                "tuple equation sides must have {kappa} components"
            )));
        }
        for t in lhs.iter().chain(&rhs) {
            if let Some(&v) = t.variables().iter().next_back() {
                if v >= kappa {
                    return Err(AlgebraError::Other(format!(
                        "tuple equation uses x{v}, beyond the single {kappa}-block"
                    )));
                }
            }
        }
        Ok(ThetaEquation { lhs, rhs })
    }
}

/// A matrix language together with equations its solution sets must satisfy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaSpec {
    lang: MatrixLanguage,
    theta: Vec<ThetaEquation>,
}

impl ThetaSpec {
    pub fn new(lang: MatrixLanguage, theta: Vec<ThetaEquation>) -> Result<Self, AlgebraError> {
        for eq in &theta {
            if eq.lhs.len() != lang.kappa() {
                return Err(AlgebraError::Other(
                    "tuple equation exponent differs from the language exponent".into(),
                ));
            }
            for t in eq.lhs.iter().chain(&eq.rhs) {
                t.validate(lang.base())
                    .map_err(|e| AlgebraError::Other(format!("{e}")))?;
            }
        }
        Ok(ThetaSpec { lang, theta })
    }

    pub fn lang(&self) -> &MatrixLanguage {
        &self.lang
    }

    pub fn theta(&self) -> &[ThetaEquation] {
        &self.theta
    }

    pub fn kappa(&self) -> usize {
        self.lang.kappa()
    }

    /// Whether the κ-tuple `coords` over the base algebra `a` solves every
    /// equation of θ.
    pub fn is_solution(&self, a: &FiniteAlgebra, coords: &[usize]) -> Result<bool, AlgebraError> {
        for eq in &self.theta {
            for (l, r) in eq.lhs.iter().zip(&eq.rhs) {
                if a.evaluate(l, coords)? != a.evaluate(r, coords)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// All solution tuples in `a`, in encoded (mixed-radix) order.
    pub fn solutions(&self, a: &FiniteAlgebra) -> Result<Vec<Vec<usize>>, AlgebraError> {
        let kappa = self.kappa();
        let mut out = Vec::new();
        let total = {
            let mut n: usize = 1;
            for _ in 0..kappa {
                n = n
                    .checked_mul(a.size())
                    .ok_or_else(|| AlgebraError::Other("solution space overflow".into()))?;
            }
            n
        };
        for e in 0..total {
            let coords = decode_tuple(e, a.size(), kappa);
            if self.is_solution(a, &coords)? {
                out.push(coords);
            }
        }
        Ok(out)
    }
}

/// Witness that θ fails to be compatible with the language: an operation and
/// solution arguments whose image is not a solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityFailure {
    /// Index into the checked algebra list.
    pub algebra: usize,
    pub op: String,
    /// One solution tuple per argument of the operation.
    pub args: Vec<Vec<usize>>,
    /// The offending image tuple.
    pub image: Vec<usize>,
}

/// Checks that θ-solutions are closed under every language operation on each
/// listed base algebra: `θ(ā₁), …, θ(āₙ)` solving θ forces the image tuple to
/// solve θ. Returns the first counterexample, or `None` when compatible.
///
/// The matrix powers are never built; the check runs directly over solution
/// tuples of the base algebras.
pub fn is_compatible(
    algebras: &[FiniteAlgebra],
    spec: &ThetaSpec,
) -> Result<Option<CompatibilityFailure>, AlgebraError> {
    let kappa = spec.kappa();
    for (ai, a) in algebras.iter().enumerate() {
        if !a.signature().same_ops(spec.lang.base()) {
            return Err(AlgebraError::SignatureMismatch);
        }
        let sols = spec.solutions(a)?;
        for op in spec.lang.ops() {
            // all op.arity-tuples of solutions
            let mut pick = vec![0usize; op.arity];
            loop {
                if op.arity == 0 || !sols.is_empty() {
                    let mut assignment = Vec::with_capacity(op.arity * kappa);
                    for &p in &pick {
                        assignment.extend_from_slice(&sols[p]);
                    }
                    let image: Vec<usize> = op
                        .components
                        .iter()
                        .map(|c| a.evaluate(c, &assignment))
                        .collect::<Result<_, _>>()?;
                    if !spec.is_solution(a, &image)? {
                        return Ok(Some(CompatibilityFailure {
                            algebra: ai,
                            op: op.name.clone(),
                            args: pick.iter().map(|&p| sols[p].clone()).collect(),
                            image,
                        }));
                    }
                }
                // next argument selection
                let mut i = 0;
                loop {
                    if i == op.arity {
                        break;
                    }
                    pick[i] += 1;
                    if pick[i] < sols.len() {
                        break;
                    }
                    pick[i] = 0;
                    i += 1;
                }
                if i == op.arity {
                    break;
                }
            }
        }
    }
    Ok(None)
}

/// The solution subalgebra of a matrix power, with its inclusion.
#[derive(Debug, Clone)]
pub struct ThetaSubAlgebra {
    /// The solutions of θ with the restricted language operations.
    pub algebra: FiniteAlgebra,
    /// The full matrix power the solutions live in.
    pub power: FiniteAlgebra,
    /// Inclusion of the solution algebra into the power.
    pub inclusion: Homomorphism,
    /// Solution tuples, indexed by element of `algebra`.
    pub coords: Vec<Vec<usize>>,
}

/// Builds `θ_L(A^[κ])`: the matrix power of `a` restricted to the solutions
/// of θ. Compatibility with `a` is checked eagerly.
pub fn theta_sub(
    a: &FiniteAlgebra,
    spec: &ThetaSpec,
    limit: usize,
) -> Result<ThetaSubAlgebra, AlgebraError> {
    if let Some(cex) = is_compatible(core::slice::from_ref(a), spec)? {
        return Err(AlgebraError::Other(format!(
            "equations are not compatible with operation {} (args {:?} give {:?})",
            cex.op, cex.args, cex.image
        )));
    }
    let power = matrix_power(a, spec.lang(), limit)?;
    let coords = spec.solutions(a)?;
    let elements: Vec<usize> = coords
        .iter()
        .map(|c| crate::matpow::encode_tuple(c, a.size()))
        .collect();
    let mut index_of = vec![usize::MAX; power.size()];
    for (i, &e) in elements.iter().enumerate() {
        index_of[e] = i;
    }
    let algebra = FiniteAlgebra::from_fn(power.signature().clone(), elements.len(), |sym, args| {
        let concrete: Vec<usize> = args.iter().map(|&x| elements[x]).collect();
        index_of[power.op(sym, &concrete)]
    })?;
    let inclusion = Homomorphism::new(algebra.clone(), power.clone(), elements)?;
    Ok(ThetaSubAlgebra { algebra, power, inclusion, coords })
}

/// Restriction of a base homomorphism to the solution subalgebras: solutions
/// map to solutions coordinatewise, and the restriction is a homomorphism of
/// the restricted languages.
pub fn theta_sub_hom(
    f: &Homomorphism,
    spec: &ThetaSpec,
    limit: usize,
) -> Result<Homomorphism, AlgebraError> {
    let sa = theta_sub(f.source(), spec, limit)?;
    let sb = theta_sub(f.target(), spec, limit)?;
    let mut map = Vec::with_capacity(sa.coords.len());
    for tuple in &sa.coords {
        let image: Vec<usize> = tuple.iter().map(|&c| f.apply(c)).collect();
        let target = sb
            .coords
            .iter()
            .position(|t| *t == image)
            .ok_or_else(|| {
                AlgebraError::Other(format!(
                    "image tuple {image:?} is not a solution in the target"
                ))
            })?;
        map.push(target);
    }
    Homomorphism::new(sa.algebra, sb.algebra, map)
}


#[cfg(test)]
mod tests {
    use super::testkit::*;
    use super::*;
    use crate::finalg::testkit::*;
    use crate::finalg::{are_isomorphic, product};
    use crate::matpow::testkit::kleene_matrix_language;
    use crate::matpow::{MatrixOp, DEFAULT_UNIVERSE_LIMIT};
    use crate::terms::term;

    #[test]
    fn disjoint_pairs_of_the_two_chain() {
        let spec = kleene_theta_spec();
        let sub = theta_sub(&chain(2), &spec, DEFAULT_UNIVERSE_LIMIT).unwrap();
        // pairs with meet 0: (0,0)=0, (1,0)=1, (0,1)=2
        assert_eq!(sub.coords, vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
        let relabeled = sub.algebra.with_signature(ka_sig()).unwrap();
        assert!(are_isomorphic(&relabeled, &kleene_chain3()));
    }

    #[test]
    fn empty_theta_keeps_the_whole_power() {
        let lang = kleene_matrix_language();
        let spec = ThetaSpec::new(lang, vec![]).unwrap();
        assert!(is_compatible(&[chain(2)], &spec).unwrap().is_none());
        let sub = theta_sub(&chain(2), &spec, DEFAULT_UNIVERSE_LIMIT).unwrap();
        assert_eq!(sub.algebra.size(), 4);
    }

    #[test]
    fn incompatible_constant_is_reported() {
        let sig = dl01_sig();
        let lang = MatrixLanguage::new(
            sig.clone(),
            1,
            vec![MatrixOp::new(&sig, "top", 0, 1, vec![term("top", &sig)]).unwrap()],
        )
        .unwrap();
        let theta =
            vec![ThetaEquation::new(vec![term("x0", &sig)], vec![term("bot", &sig)], 1).unwrap()];
        let spec = ThetaSpec::new(lang, theta).unwrap();
        let cex = is_compatible(&[chain(2)], &spec).unwrap().unwrap();
        assert_eq!(cex.op, "top");
        assert_eq!(cex.image, vec![1]);
        assert!(theta_sub(&chain(2), &spec, DEFAULT_UNIVERSE_LIMIT).is_err());
    }

    #[test]
    fn restriction_of_homs_is_functorial() {
        let spec = kleene_theta_spec();
        let f = Homomorphism::new(chain(3), chain(2), vec![0, 1, 1]).unwrap();
        let rf = theta_sub_hom(&f, &spec, DEFAULT_UNIVERSE_LIMIT).unwrap();
        // disjoint pairs in the 3-chain: (0,0),(1,0),(2,0),(0,1),(0,2) — 5 of them
        assert_eq!(rf.source().size(), 5);
        assert_eq!(rf.target().size(), 3);

        let id3 = Homomorphism::identity(&chain(3));
        let rid = theta_sub_hom(&id3, &spec, DEFAULT_UNIVERSE_LIMIT).unwrap();
        assert_eq!(rid.map(), &[0, 1, 2, 3, 4]);

        let id2 = Homomorphism::identity(&chain(2));
        let composed = theta_sub_hom(&id2.compose(&f).unwrap(), &spec, DEFAULT_UNIVERSE_LIMIT)
            .unwrap();
        let stepwise = theta_sub_hom(&id2, &spec, DEFAULT_UNIVERSE_LIMIT)
            .unwrap()
            .compose(&rf)
            .unwrap();
        assert_eq!(composed, stepwise);
    }

    #[test]
    fn solutions_respect_products() {
        let sig = dl01_sig();
        let spec = kleene_theta_spec();
        for (a, b) in [(chain(2), chain(2)), (chain(2), chain(3))] {
            let (ab, _) = product(&sig, &[a.clone(), b.clone()]).unwrap();
            let lhs = theta_sub(&ab, &spec, DEFAULT_UNIVERSE_LIMIT).unwrap().algebra;
            let sa = theta_sub(&a, &spec, DEFAULT_UNIVERSE_LIMIT).unwrap().algebra;
            let sb = theta_sub(&b, &spec, DEFAULT_UNIVERSE_LIMIT).unwrap().algebra;
            let (rhs, _) = product(sa.signature(), &[sa.clone(), sb]).unwrap();
            assert!(are_isomorphic(&lhs, &rhs));
        }
    }

    #[test]
    fn larger_theta_means_fewer_solutions() {
        let lang = kleene_matrix_language();
        let empty = ThetaSpec::new(lang.clone(), vec![]).unwrap();
        let kleene = kleene_theta_spec();
        for a in [chain(2), chain(3), square()] {
            let all = empty.solutions(&a).unwrap().len();
            let some = kleene.solutions(&a).unwrap().len();
            assert!(some <= all);
        }
    }
}
