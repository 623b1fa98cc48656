//! Finite-exponent matrix powers.
//!
//! The κ-th matrix power of an algebra `A` lives on the universe `A^κ`; its
//! operations are chosen κ-tuples of base terms applied blockwise. Only the
//! finitely many listed operations are materialized — the ambient language of
//! all such tuples exists only as the validity domain for [`MatrixOp`].

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::classes::{free_algebra, ClassBattery};
use crate::finalg::{AlgebraError, FiniteAlgebra, Homomorphism};
use crate::terms::{Signature, Term};
use crate::thetasub::{theta_sub, ThetaEquation, ThetaSpec};

/// Default cap on materialized universes (`|A|^κ` and friends).
pub const DEFAULT_UNIVERSE_LIMIT: usize = 1_000_000;

/// One operation of a matrix power: a κ-tuple of base-signature terms over
/// the flattened variables of `arity` argument blocks.
///
/// The `i`-th coordinate of argument `m` (both 0-based) is the flattened
/// variable `x<m·κ + i>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixOp {
    pub name: String,
    pub arity: usize,
    pub exponent: usize,
    pub components: Vec<Term>,
}

impl MatrixOp {
    pub fn new(
        base: &Signature,
        name: impl Into<String>,
        arity: usize,
        exponent: usize,
        components: Vec<Term>,
    ) -> Result<Self, AlgebraError> {
        let name = name.into();
        if exponent == 0 {
            return Err(AlgebraError::Other(format!("{name}: exponent must be positive")));
        }
        if components.len() != exponent {
            return Err(AlgebraError::Other(format!(
                "{name}: expected {exponent} components, got {}",
                components.len()
            )));
        }
        for c in &components {
            c.validate(base)
                .map_err(|e| AlgebraError::Other(format!("{name}: {e}")))?;
            if let Some(&v) = c.variables().iter().next_back() {
                if v >= arity * exponent {
                    return Err(AlgebraError::Other(format!(
                        "{name}: component uses x{v}, outside the {arity} argument blocks"
                    )));
                }
            }
        }
        Ok(MatrixOp { name, arity, exponent, components })
    }
}

/// A finite list of matrix operations over a common base signature and
/// exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixLanguage {
    base: Signature,
    kappa: usize,
    ops: Vec<MatrixOp>,
}

impl MatrixLanguage {
    pub fn new(base: Signature, kappa: usize, ops: Vec<MatrixOp>) -> Result<Self, AlgebraError> {
        let mut seen = alloc::collections::BTreeSet::new();
        for op in &ops {
            if op.exponent != kappa {
                return Err(AlgebraError::Other(format!(
                    "{}: exponent {} differs from the language exponent {kappa}",
                    op.name, op.exponent
                )));
            }
            if !seen.insert(op.name.clone()) {
                return Err(AlgebraError::Other(format!("duplicate operation {}", op.name)));
            }
        }
        Ok(MatrixLanguage { base, kappa, ops })
    }

    pub fn base(&self) -> &Signature {
        &self.base
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn ops(&self) -> &[MatrixOp] {
        &self.ops
    }

    pub fn op(&self, name: &str) -> Option<&MatrixOp> {
        self.ops.iter().find(|o| o.name == name)
    }

    /// The signature of the matrix powers this language produces.
    pub fn induced_signature(&self, name: impl Into<String>) -> Signature {
        Signature::new(name, self.ops.iter().map(|o| (o.name.clone(), o.arity)))
            .expect("op names are distinct")
    }
}

/// Mixed-radix encoding of a κ-tuple over `{0..size-1}`, coordinate 0 least
/// significant.
pub fn encode_tuple(coords: &[usize], size: usize) -> usize {
    let mut e = 0usize;
    for &c in coords.iter().rev() {
        debug_assert!(c < size);
        e = e * size + c;
    }
    e
}

/// Inverse of [`encode_tuple`].
pub fn decode_tuple(mut e: usize, size: usize, kappa: usize) -> Vec<usize> {
    let mut coords = Vec::with_capacity(kappa);
    for _ in 0..kappa {
        coords.push(e % size);
        e /= size;
    }
    coords
}

fn power_size(size: usize, kappa: usize, limit: usize) -> Result<usize, AlgebraError> {
    let mut n: usize = 1;
    for _ in 0..kappa {
        n = n
            .checked_mul(size)
            .filter(|&n| n <= limit)
            .ok_or_else(|| {
                AlgebraError::Other(format!(
                    "universe {size}^{kappa} exceeds the limit {limit}"
                ))
            })?;
    }
    Ok(n)
}

/// The κ-th matrix power of `a` over the listed operations.
pub fn matrix_power(
    a: &FiniteAlgebra,
    lang: &MatrixLanguage,
    limit: usize,
) -> Result<FiniteAlgebra, AlgebraError> {
    if !a.signature().same_ops(&lang.base) {
        return Err(AlgebraError::SignatureMismatch);
    }
    let kappa = lang.kappa;
    let n = power_size(a.size(), kappa, limit)?;
    let sig = lang.induced_signature(format!("{}^[{kappa}]", a.signature().name()));
    let ops: BTreeMap<&str, &MatrixOp> =
        lang.ops.iter().map(|o| (o.name.as_str(), o)).collect();
    FiniteAlgebra::from_fn(sig, n, |sym, args| {
        let op = ops[sym];
        let mut assignment = Vec::with_capacity(op.arity * kappa);
        for &arg in args {
            assignment.extend(decode_tuple(arg, a.size(), kappa));
        }
        let coords: Vec<usize> = op
            .components
            .iter()
            .map(|c| a.evaluate(c, &assignment).expect("validated component"))
            .collect();
        encode_tuple(&coords, a.size())
    })
}

/// The coordinatewise lift of a homomorphism to the matrix powers.
pub fn matrix_power_hom(
    f: &Homomorphism,
    lang: &MatrixLanguage,
    limit: usize,
) -> Result<Homomorphism, AlgebraError> {
    let pa = matrix_power(f.source(), lang, limit)?;
    let pb = matrix_power(f.target(), lang, limit)?;
    let map: Vec<usize> = (0..pa.size())
        .map(|e| {
            let coords: Vec<usize> = decode_tuple(e, f.source().size(), lang.kappa)
                .into_iter()
                .map(|c| f.apply(c))
                .collect();
            encode_tuple(&coords, f.target().size())
        })
        .collect();
    Homomorphism::new(pa, pb, map)
}

/// A language whose matrix powers carry their full structure: the pointwise
/// lifts of every base operation, plus (for κ > 1) the cyclic coordinate
/// shift and the κ-ary "collect" that assembles coordinate 0 of its κ
/// arguments. Shift and collect generate all coordinate rearrangements, so
/// together with the pointwise lifts they generate every blockwise term
/// operation; in particular homomorphisms between these powers are exactly
/// the coordinatewise lifts.
pub fn full_matrix_language(base: &Signature, kappa: usize) -> Result<MatrixLanguage, AlgebraError> {
    let mut ops = Vec::new();
    for (sym, arity) in base.ops() {
        let components = (0..kappa)
            .map(|i| {
                Term::app(
                    sym.clone(),
                    (0..*arity).map(|m| Term::var(m * kappa + i)).collect(),
                )
            })
            .collect();
        ops.push(MatrixOp::new(base, sym.clone(), *arity, kappa, components)?);
    }
    if kappa > 1 {
        let shift = (0..kappa).map(|i| Term::var((i + 1) % kappa)).collect();
        ops.push(MatrixOp::new(base, "shift", 1, kappa, shift)?);
        let collect = (0..kappa).map(|i| Term::var(i * kappa)).collect();
        ops.push(MatrixOp::new(base, "collect", kappa, kappa, collect)?);
    }
    MatrixLanguage::new(base.clone(), kappa, ops)
}

/// Verdict of [`sigma_check`]: whether a unary term is idempotent over the
/// class and whether the variable is recoverable from its images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaReport {
    pub idempotent: bool,
    pub invertible: bool,
    /// Term over `x0` recovering the generator from σ-images, when invertible.
    pub witness: Option<Term>,
}

/// Checks whether the unary term σ is idempotent (`K ⊨ σσ(x) ≈ σ(x)`) and
/// invertible: the free generator of the one-generated free algebra lies in
/// the subalgebra generated by the σ-images. The witness is the recovering
/// expression, built from σ-images of one-variable terms.
pub fn sigma_check(battery: &ClassBattery, sigma: &Term) -> Result<SigmaReport, AlgebraError> {
    sigma
        .validate(battery.signature())
        .map_err(|e| AlgebraError::Other(e.to_string()))?;
    if sigma.variables().into_iter().collect::<Vec<_>>() != [0] {
        return Err(AlgebraError::Other(
            "the term must use exactly the variable x0".into(),
        ));
    }
    let sub = |t: &Term| sigma.substitute(&BTreeMap::from([(0, t.clone())]));
    let sigma_sigma = sub(sigma);
    let idempotent = battery.entails_equation(&crate::terms::Equation::new(
        sigma_sigma,
        sigma.clone(),
    ));

    let free = free_algebra(battery, 1)?;
    let f = &free.algebra;
    // Seed: σ-images of every element, with the expressions producing them.
    let mut witness_of: BTreeMap<usize, Term> = BTreeMap::new();
    let mut frontier: Vec<usize> = Vec::new();
    for u in 0..f.size() {
        let image = f.evaluate(sigma, &[u])?;
        if !witness_of.contains_key(&image) {
            witness_of.insert(image, sub(free.term_of(u)));
            frontier.push(image);
        }
    }
    // Work-list closure under the operations, tracking expressions.
    let mut current = frontier;
    while !current.is_empty() {
        let known: Vec<usize> = witness_of.keys().copied().collect();
        let mut next = Vec::new();
        for (sym, arity) in battery.signature().ops() {
            let mut stack = vec![Vec::<usize>::new()];
            while let Some(partial) = stack.pop() {
                if partial.len() == *arity {
                    if *arity > 0 && !partial.iter().any(|x| current.contains(x)) {
                        continue;
                    }
                    let result = f.op(sym, &partial);
                    if !witness_of.contains_key(&result) {
                        let t = Term::app(
                            sym.clone(),
                            partial.iter().map(|x| witness_of[x].clone()).collect(),
                        );
                        witness_of.insert(result, t);
                        next.push(result);
                    }
                    continue;
                }
                // later candidates first so that smaller elements pop first
                for &x in known.iter().rev() {
                    let mut p = partial.clone();
                    p.push(x);
                    stack.push(p);
                }
            }
        }
        current = next;
    }
    let witness = witness_of.get(&free.generators[0]).cloned();
    Ok(SigmaReport { idempotent, invertible: witness.is_some(), witness })
}

/// The image algebra `A(σ)`: solutions of `x ≈ σ(x)` in the exponent-1
/// matrix power over the language `{σψ : ψ basic}`.
///
/// Requires σ to pass both parts of [`sigma_check`].
pub fn sigma_construction(
    a: &FiniteAlgebra,
    battery: &ClassBattery,
    sigma: &Term,
) -> Result<FiniteAlgebra, AlgebraError> {
    let report = sigma_check(battery, sigma)?;
    if !report.idempotent {
        return Err(AlgebraError::Other("the term is not idempotent over the class".into()));
    }
    if !report.invertible {
        return Err(AlgebraError::Other("the term is not invertible over the class".into()));
    }
    let base = battery.signature();
    let mut ops = Vec::new();
    for (sym, arity) in base.ops() {
        let inner = Term::app(sym.clone(), (0..*arity).map(Term::var).collect());
        let component = sigma.substitute(&BTreeMap::from([(0, inner)]));
        ops.push(MatrixOp::new(base, sym.clone(), *arity, 1, vec![component])?);
    }
    let lang = MatrixLanguage::new(base.clone(), 1, ops)?;
    let theta = vec![ThetaEquation::new(vec![Term::var(0)], vec![sigma.clone()], 1)?];
    let spec = ThetaSpec::new(lang, theta)?;
    let sub = theta_sub(a, &spec, DEFAULT_UNIVERSE_LIMIT)?;
    Ok(sub.algebra)
}

#[cfg(test)]
pub(crate) mod testkit {
    //! The exponent-2 language of the standard right-adjoint example for
    //! bounded distributive lattices, written out explicitly.
    use super::*;
    use crate::finalg::testkit::dl01_sig;
    use crate::terms::term;

    pub fn kleene_matrix_language() -> MatrixLanguage {
        let sig = dl01_sig();
        // argument blocks: arg0 = (x0, x1), arg1 = (x2, x3)
        let ops = vec![
            MatrixOp::new(
                &sig,
                "meet",
                2,
                2,
                vec![term("meet(x0, x2)", &sig), term("join(x1, x3)", &sig)],
            )
            .unwrap(),
            MatrixOp::new(
                &sig,
                "join",
                2,
                2,
                vec![term("join(x0, x2)", &sig), term("meet(x1, x3)", &sig)],
            )
            .unwrap(),
            MatrixOp::new(&sig, "neg", 1, 2, vec![term("x1", &sig), term("x0", &sig)]).unwrap(),
            MatrixOp::new(&sig, "bot", 0, 2, vec![term("bot", &sig), term("top", &sig)]).unwrap(),
            MatrixOp::new(&sig, "top", 0, 2, vec![term("top", &sig), term("bot", &sig)]).unwrap(),
        ];
        MatrixLanguage::new(sig, 2, ops).unwrap()
    }
}
