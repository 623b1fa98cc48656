//! Finite algebras as operation tables over the universe `{0..n-1}`.
//!
//! All semantics is exhaustive evaluation. Enumeration routines fix a
//! deterministic order so outputs are reproducible byte for byte.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use crate::terms::{Equation, QuasiEquation, Signature, Term};

/// A finite algebra: a signature together with one total operation table per
/// symbol. The table of an arity-`m` operation has `n^m` entries, stored
/// row-major with the first argument most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    sig: Signature,
    size: usize,
    tables: BTreeMap<String, Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    MissingTable(String),
    TableSize { symbol: String, expected: usize, found: usize },
    EntryOutOfRange { symbol: String, entry: usize, size: usize },
    EmptyWithConstants,
    SignatureMismatch,
    NotAHomomorphism { symbol: String, args: Vec<usize> },
    MapOutOfRange,
    NotACongruence { symbol: String, args: Vec<usize>, other_args: Vec<usize> },
    UnassignedVariable(usize),
    UnknownSymbol(String),
    Other(String),
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::MissingTable(s) => write!(f, "missing table for {s}"),
            AlgebraError::TableSize { symbol, expected, found } => {
                write!(f, "table for {symbol} has {found} entries, expected {expected}")
            }
            AlgebraError::EntryOutOfRange { symbol, entry, size } => {
                write!(f, "table for {symbol} contains {entry}, universe size is {size}")
            }
            AlgebraError::EmptyWithConstants => {
                write!(f, "empty universe is only allowed for constant-free signatures")
            }
            AlgebraError::SignatureMismatch => write!(f, "signature mismatch"),
            AlgebraError::NotAHomomorphism { symbol, args } => {
                write!(f, "map does not preserve {symbol} at {args:?}")
            }
            AlgebraError::MapOutOfRange => write!(f, "map entry outside the target universe"),
            AlgebraError::NotACongruence { symbol, args, other_args } => {
                write!(
                    f,
                    "partition is not compatible with {symbol}: {args:?} vs {other_args:?}"
                )
            }
            AlgebraError::UnassignedVariable(j) => write!(f, "unassigned variable x{j}"),
            AlgebraError::UnknownSymbol(s) => write!(f, "unknown symbol {s}"),
            AlgebraError::Other(s) => write!(f, "{s}"),
        }
    }
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

impl FiniteAlgebra {
    pub fn new(
        sig: Signature,
        size: usize,
        tables: BTreeMap<String, Vec<usize>>,
    ) -> Result<Self, AlgebraError> {
        if size == 0 && sig.has_constants() {
            return Err(AlgebraError::EmptyWithConstants);
        }
        for (sym, arity) in sig.ops() {
            let table = tables
                .get(sym)
                .ok_or_else(|| AlgebraError::MissingTable(sym.clone()))?;
            let expected = checked_pow(size, *arity)
                .ok_or_else(|| AlgebraError::Other(format!("table for {sym} overflows")))?;
            if table.len() != expected {
                return Err(AlgebraError::TableSize {
                    symbol: sym.clone(),
                    expected,
                    found: table.len(),
                });
            }
            if let Some(&entry) = table.iter().find(|&&e| e >= size) {
                return Err(AlgebraError::EntryOutOfRange { symbol: sym.clone(), entry, size });
            }
        }
        Ok(FiniteAlgebra { sig, size, tables })
    }

    /// Builds the algebra by evaluating a closure instead of spelling out
    /// tables. Used pervasively by the derived constructions.
    pub fn from_fn(
        sig: Signature,
        size: usize,
        mut op: impl FnMut(&str, &[usize]) -> usize,
    ) -> Result<Self, AlgebraError> {
        let mut tables = BTreeMap::new();
        for (sym, arity) in sig.ops().to_vec() {
            let entries = checked_pow(size, arity)
                .ok_or_else(|| AlgebraError::Other(format!("table for {sym} overflows")))?;
            let mut table = Vec::with_capacity(entries);
            let mut args = vec![0usize; arity];
            for idx in 0..entries {
                decode_args(idx, size, &mut args);
                table.push(op(&sym, &args));
            }
            tables.insert(sym, table);
        }
        FiniteAlgebra::new(sig, size, tables)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn table(&self, symbol: &str) -> Option<&[usize]> {
        self.tables.get(symbol).map(Vec::as_slice)
    }

    /// Relabels the algebra with a signature that has the same symbols and
    /// arities (e.g. after a matrix-power construction named its operations
    /// after another language).
    pub fn with_signature(mut self, sig: Signature) -> Result<Self, AlgebraError> {
        if !self.sig.same_ops(&sig) {
            return Err(AlgebraError::SignatureMismatch);
        }
        self.sig = sig;
        Ok(self)
    }

    /// Applies an operation by table lookup.
    pub fn op(&self, symbol: &str, args: &[usize]) -> usize {
        let table = &self.tables[symbol];
        let mut idx = 0usize;
        for &a in args {
            debug_assert!(a < self.size);
            idx = idx * self.size + a;
        }
        table[idx]
    }

    /// Inductive evaluation of a term under a variable assignment
    /// (`assignment[j]` is the value of `x<j>`).
    pub fn evaluate(&self, t: &Term, assignment: &[usize]) -> Result<usize, AlgebraError> {
        match t {
            Term::Var(j) => assignment
                .get(*j)
                .copied()
                .ok_or(AlgebraError::UnassignedVariable(*j)),
            Term::App(sym, args) => {
                if !self.tables.contains_key(sym) {
                    return Err(AlgebraError::UnknownSymbol(sym.clone()));
                }
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.evaluate(a, assignment)?);
                }
                Ok(self.op(sym, &vals))
            }
        }
    }

    pub fn satisfies_equation(&self, eq: &Equation, assignment: &[usize]) -> Result<bool, AlgebraError> {
        Ok(self.evaluate(&eq.lhs, assignment)? == self.evaluate(&eq.rhs, assignment)?)
    }

    /// Whether the implication holds under every assignment of the variables
    /// occurring in the quasi-equation.
    pub fn satisfies_quasi_equation(&self, q: &QuasiEquation) -> bool {
        self.quasi_countermodel(q).is_none()
    }

    /// An assignment under which the premises hold but the conclusion fails,
    /// if one exists. Variables not occurring in the quasi-equation stay 0.
    pub fn quasi_countermodel(&self, q: &QuasiEquation) -> Option<Vec<usize>> {
        let vars: Vec<usize> = q.variables().into_iter().collect();
        if !vars.is_empty() && self.size == 0 {
            return None;
        }
        let num_slots = vars.iter().copied().max().map(|m| m + 1).unwrap_or(0);
        let mut assignment = vec![0usize; num_slots];
        let mut counter = vec![0usize; vars.len()];
        loop {
            for (slot, &v) in vars.iter().enumerate() {
                assignment[v] = counter[slot];
            }
            let premises_hold = q
                .premises
                .iter()
                .all(|p| self.satisfies_equation(p, &assignment).unwrap_or(false));
            if premises_hold
                && !self
                    .satisfies_equation(&q.conclusion, &assignment)
                    .unwrap_or(false)
            {
                return Some(assignment);
            }
            // next assignment
            let mut i = 0;
            loop {
                if i == vars.len() {
                    return None;
                }
                counter[i] += 1;
                if counter[i] < self.size {
                    break;
                }
                counter[i] = 0;
                i += 1;
            }
        }
    }
}

/// Decodes a row-major table index into its argument tuple
/// (first argument most significant).
pub fn decode_args(mut idx: usize, size: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = idx % size;
        idx /= size;
    }
}

/// A homomorphism between finite algebras over the same operations.
/// Construction verifies preservation on every table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    source: FiniteAlgebra,
    target: FiniteAlgebra,
    map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(
        source: FiniteAlgebra,
        target: FiniteAlgebra,
        map: Vec<usize>,
    ) -> Result<Self, AlgebraError> {
        if !source.sig.same_ops(&target.sig) {
            return Err(AlgebraError::SignatureMismatch);
        }
        if map.len() != source.size {
            return Err(AlgebraError::MapOutOfRange);
        }
        if map.iter().any(|&v| v >= target.size) {
            return Err(AlgebraError::MapOutOfRange);
        }
        for (sym, arity) in source.sig.ops() {
            let entries = checked_pow(source.size, *arity).expect("validated at construction");
            let mut args = vec![0usize; *arity];
            for idx in 0..entries {
                decode_args(idx, source.size, &mut args);
                let image_args: Vec<usize> = args.iter().map(|&a| map[a]).collect();
                if map[source.op(sym, &args)] != target.op(sym, &image_args) {
                    return Err(AlgebraError::NotAHomomorphism {
                        symbol: sym.clone(),
                        args: args.clone(),
                    });
                }
            }
        }
        Ok(Homomorphism { source, target, map })
    }

    pub fn identity(alg: &FiniteAlgebra) -> Homomorphism {
        Homomorphism {
            source: alg.clone(),
            target: alg.clone(),
            map: (0..alg.size).collect(),
        }
    }

    pub fn source(&self) -> &FiniteAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FiniteAlgebra {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, e: usize) -> usize {
        self.map[e]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.size];
        for &v in &self.map {
            hit[v] = true;
        }
        hit.iter().all(|&h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.target.size];
        for &v in &self.map {
            if hit[v] {
                return false;
            }
            hit[v] = true;
        }
        true
    }

    /// `g.compose(f)` is `g ∘ f` (apply `f` first).
    pub fn compose(&self, f: &Homomorphism) -> Result<Homomorphism, AlgebraError> {
        if f.target != self.source {
            return Err(AlgebraError::SignatureMismatch);
        }
        Ok(Homomorphism {
            source: f.source.clone(),
            target: self.target.clone(),
            map: f.map.iter().map(|&e| self.map[e]).collect(),
        })
    }

    /// Partition of the source by the fibers of the map.
    pub fn kernel(&self) -> Congruence {
        Congruence::from_labels(self.source.clone(), self.map.clone())
            .expect("fibers of a homomorphism are a congruence")
    }
}

/// Enumerates all homomorphisms from `a` to `b`, sorted lexicographically by
/// map array. Backtracking over source elements in index order; whenever all
/// arguments and the result of an operation application are already assigned,
/// the preservation constraint is checked immediately.
pub fn enumerate_homs(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
) -> Result<Vec<Homomorphism>, AlgebraError> {
    if !a.sig.same_ops(&b.sig) {
        return Err(AlgebraError::SignatureMismatch);
    }
    let mut out = Vec::new();
    if a.size == 0 {
        out.push(Homomorphism {
            source: a.clone(),
            target: b.clone(),
            map: Vec::new(),
        });
        return Ok(out);
    }
    if b.size == 0 {
        return Ok(out);
    }
    let mut map = vec![0usize; a.size];
    search_homs(a, b, 0, &mut map, &mut out);
    Ok(out)
}

fn search_homs(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    k: usize,
    map: &mut Vec<usize>,
    out: &mut Vec<Homomorphism>,
) {
    if k == a.size {
        out.push(Homomorphism {
            source: a.clone(),
            target: b.clone(),
            map: map.clone(),
        });
        return;
    }
    'candidates: for v in 0..b.size {
        map[k] = v;
        // Check every constraint whose arguments and result lie in 0..=k and
        // mention k (otherwise it was checked earlier).
        for (sym, arity) in a.sig.ops() {
            let entries = checked_pow(k + 1, *arity).expect("desk scale");
            let mut args = vec![0usize; *arity];
            for idx in 0..entries {
                decode_args(idx, k + 1, &mut args);
                let result = a.op(sym, &args);
                if result > k {
                    continue;
                }
                if *arity > 0 && !args.contains(&k) && result != k {
                    continue;
                }
                let image_args: Vec<usize> = args.iter().map(|&x| map[x]).collect();
                if map[result] != b.op(sym, &image_args) {
                    continue 'candidates;
                }
            }
        }
        search_homs(a, b, k + 1, map, out);
    }
}

/// Direct product with projection homomorphisms. The empty product is the
/// one-element trivial algebra. Elements are encoded mixed-radix with
/// factor 0 least significant.
pub fn product(
    sig: &Signature,
    factors: &[FiniteAlgebra],
) -> Result<(FiniteAlgebra, Vec<Homomorphism>), AlgebraError> {
    for f in factors {
        if !f.sig.same_ops(sig) {
            return Err(AlgebraError::SignatureMismatch);
        }
    }
    let mut size = 1usize;
    for f in factors {
        size = size
            .checked_mul(f.size)
            .ok_or_else(|| AlgebraError::Other("product size overflow".to_string()))?;
    }
    let decode = |e: usize| -> Vec<usize> {
        let mut coords = Vec::with_capacity(factors.len());
        let mut rem = e;
        for f in factors {
            coords.push(rem % f.size);
            rem /= f.size;
        }
        coords
    };
    let encode = |coords: &[usize]| -> usize {
        let mut e = 0usize;
        for (f, &c) in factors.iter().zip(coords).rev() {
            e = e * f.size + c;
        }
        e
    };
    let alg = FiniteAlgebra::from_fn(sig.clone(), size, |sym, args| {
        let arg_coords: Vec<Vec<usize>> = args.iter().map(|&a| decode(a)).collect();
        let coords: Vec<usize> = factors
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let component_args: Vec<usize> = arg_coords.iter().map(|c| c[i]).collect();
                f.op(sym, &component_args)
            })
            .collect();
        encode(&coords)
    })?;
    let mut projections = Vec::with_capacity(factors.len());
    for (i, f) in factors.iter().enumerate() {
        let map: Vec<usize> = (0..size).map(|e| decode(e)[i]).collect();
        projections.push(Homomorphism::new(alg.clone(), f.clone(), map)?);
    }
    Ok((alg, projections))
}

/// Least subuniverse containing `seed` and all constants, by work-list
/// closure. Element order is discovery order: the seed in the given order,
/// then constants, then closure rounds (operations in symbol order, argument
/// tuples in index order).
pub fn subalgebra_generated(
    a: &FiniteAlgebra,
    seed: &[usize],
) -> Result<(FiniteAlgebra, Homomorphism), AlgebraError> {
    let mut elements: Vec<usize> = Vec::new();
    let mut index_of: BTreeMap<usize, usize> = BTreeMap::new();
    let push = |e: usize, elements: &mut Vec<usize>, index_of: &mut BTreeMap<usize, usize>| {
        if !index_of.contains_key(&e) {
            index_of.insert(e, elements.len());
            elements.push(e);
        }
    };
    for &s in seed {
        push(s, &mut elements, &mut index_of);
    }
    for c in a.sig.constants() {
        push(a.op(c, &[]), &mut elements, &mut index_of);
    }
    let mut frontier_start = 0;
    while frontier_start < elements.len() {
        let known = elements.len();
        for (sym, arity) in a.sig.ops() {
            if *arity == 0 {
                continue;
            }
            let entries = checked_pow(known, *arity).expect("desk scale");
            let mut args = vec![0usize; *arity];
            for idx in 0..entries {
                decode_args(idx, known, &mut args);
                // At least one argument from the latest round, otherwise this
                // application was already performed.
                if args.iter().all(|&x| x < frontier_start) {
                    continue;
                }
                let concrete: Vec<usize> = args.iter().map(|&x| elements[x]).collect();
                let result = a.op(sym, &concrete);
                push(result, &mut elements, &mut index_of);
            }
        }
        frontier_start = known;
    }
    let sub = FiniteAlgebra::from_fn(a.sig.clone(), elements.len(), |sym, args| {
        let concrete: Vec<usize> = args.iter().map(|&x| elements[x]).collect();
        index_of[&a.op(sym, &concrete)]
    })?;
    let inclusion = Homomorphism::new(sub.clone(), a.clone(), elements)?;
    Ok((sub, inclusion))
}

/// A partition of an algebra's universe into blocks, compatible with every
/// operation. Block ids are dense `0..k-1`, ordered by first occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    algebra: FiniteAlgebra,
    block_of: Vec<usize>,
}

impl Congruence {
    /// Normalizes arbitrary labels into dense block ids and verifies
    /// compatibility with every operation.
    pub fn from_labels(algebra: FiniteAlgebra, labels: Vec<usize>) -> Result<Self, AlgebraError> {
        assert_eq!(labels.len(), algebra.size);
        let mut dense: BTreeMap<usize, usize> = BTreeMap::new();
        let mut block_of = Vec::with_capacity(labels.len());
        for &l in &labels {
            let next = dense.len();
            let id = *dense.entry(l).or_insert(next);
            block_of.push(id);
        }
        let cong = Congruence { algebra, block_of };
        cong.check_compatible()?;
        Ok(cong)
    }

    /// The finest congruence relating every pair in `pairs` (plain congruence
    /// generation by closure under operations and transitivity).
    pub fn generated_by(
        algebra: FiniteAlgebra,
        pairs: &[(usize, usize)],
    ) -> Result<Self, AlgebraError> {
        let n = algebra.size;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let union = |parent: &mut Vec<usize>, a: usize, b: usize| -> bool {
            let ra = find(parent, a);
            let rb = find(parent, b);
            if ra == rb {
                return false;
            }
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent[hi] = lo;
            true
        };
        for &(a, b) in pairs {
            union(&mut parent, a, b);
        }
        // Close under operations: if arguments are pairwise related, results
        // must be related.
        let mut changed = true;
        while changed {
            changed = false;
            for (sym, arity) in algebra.sig.ops() {
                if *arity == 0 {
                    continue;
                }
                let entries = checked_pow(n, *arity).expect("desk scale");
                let mut args = vec![0usize; *arity];
                for idx in 0..entries {
                    decode_args(idx, n, &mut args);
                    for pos in 0..*arity {
                        let orig = args[pos];
                        let root = find(&mut parent, orig);
                        for other in 0..n {
                            if other == orig || find(&mut parent, other) != root {
                                continue;
                            }
                            let mut args2 = args.clone();
                            args2[pos] = other;
                            let r1 = algebra.op(sym, &args);
                            let r2 = algebra.op(sym, &args2);
                            if union(&mut parent, r1, r2) {
                                changed = true;
                            }
                        }
                    }
                }
            }
        }
        let labels: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
        Congruence::from_labels(algebra, labels)
    }

    fn check_compatible(&self) -> Result<(), AlgebraError> {
        let n = self.algebra.size;
        for (sym, arity) in self.algebra.sig.ops() {
            if *arity == 0 {
                continue;
            }
            let entries = checked_pow(n, *arity).expect("desk scale");
            let mut args = vec![0usize; *arity];
            for idx in 0..entries {
                decode_args(idx, n, &mut args);
                for pos in 0..*arity {
                    let orig = args[pos];
                    for other in (orig + 1)..n {
                        if self.block_of[other] != self.block_of[orig] {
                            continue;
                        }
                        let mut args2 = args.clone();
                        args2[pos] = other;
                        let r1 = self.algebra.op(sym, &args);
                        let r2 = self.algebra.op(sym, &args2);
                        if self.block_of[r1] != self.block_of[r2] {
                            return Err(AlgebraError::NotACongruence {
                                symbol: sym.clone(),
                                args: args.clone(),
                                other_args: args2,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn block_of(&self) -> &[usize] {
        &self.block_of
    }

    pub fn num_blocks(&self) -> usize {
        self.block_of.iter().copied().max().map(|m| m + 1).unwrap_or(0)
    }

    pub fn relates(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    pub fn is_identity(&self) -> bool {
        self.num_blocks() == self.algebra.size
    }

    /// Identity partition.
    pub fn identity(algebra: FiniteAlgebra) -> Congruence {
        let labels = (0..algebra.size).collect();
        Congruence { algebra, block_of: labels }
    }

    /// All-in-one-block partition (the top congruence).
    pub fn top(algebra: FiniteAlgebra) -> Congruence {
        let labels = vec![0; algebra.size];
        Congruence { algebra, block_of: labels }
    }

    /// Common refinement-wise comparison: does every block of `self` lie in a
    /// block of `other`?
    pub fn finer_than(&self, other: &Congruence) -> bool {
        for a in 0..self.algebra.size {
            for b in (a + 1)..self.algebra.size {
                if self.relates(a, b) && !other.relates(a, b) {
                    return false;
                }
            }
        }
        true
    }
}

/// Quotient by a congruence, with the canonical projection. Blocks become
/// elements, in block-id order.
pub fn quotient(
    a: &FiniteAlgebra,
    theta: &Congruence,
) -> Result<(FiniteAlgebra, Homomorphism), AlgebraError> {
    if theta.algebra != *a {
        return Err(AlgebraError::SignatureMismatch);
    }
    let k = theta.num_blocks();
    // representative of each block = first element with that id
    let mut rep = vec![usize::MAX; k];
    for (e, &b) in theta.block_of.iter().enumerate() {
        if rep[b] == usize::MAX {
            rep[b] = e;
        }
    }
    let q = FiniteAlgebra::from_fn(a.sig.clone(), k, |sym, args| {
        let concrete: Vec<usize> = args.iter().map(|&b| rep[b]).collect();
        theta.block_of[a.op(sym, &concrete)]
    })?;
    let projection = Homomorphism::new(a.clone(), q.clone(), theta.block_of.clone())?;
    Ok((q, projection))
}

/// Brute-force isomorphism search: backtracking over bijections with a cheap
/// table-profile invariant for pruning. Intended for sizes up to ~12 plus the
/// highly constrained algebras this crate produces.
pub fn find_isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Option<Vec<usize>> {
    if !a.sig.same_ops(&b.sig) || a.size != b.size {
        return None;
    }
    let inv_a = invariants(a);
    let inv_b = invariants(b);
    {
        let mut sa = inv_a.clone();
        let mut sb = inv_b.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return None;
        }
    }
    let mut map = vec![usize::MAX; a.size];
    let mut used = vec![false; b.size];
    fn search(
        a: &FiniteAlgebra,
        b: &FiniteAlgebra,
        inv_a: &[Vec<usize>],
        inv_b: &[Vec<usize>],
        k: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == a.size {
            return true;
        }
        'candidates: for v in 0..b.size {
            if used[v] || inv_a[k] != inv_b[v] {
                continue;
            }
            map[k] = v;
            for (sym, arity) in a.sig.ops() {
                let entries = checked_pow(k + 1, *arity).expect("desk scale");
                let mut args = vec![0usize; *arity];
                for idx in 0..entries {
                    decode_args(idx, k + 1, &mut args);
                    let result = a.op(sym, &args);
                    if result > k {
                        continue;
                    }
                    let image_args: Vec<usize> = args.iter().map(|&x| map[x]).collect();
                    if map[result] != b.op(sym, &image_args) {
                        map[k] = usize::MAX;
                        continue 'candidates;
                    }
                }
            }
            used[v] = true;
            if search(a, b, inv_a, inv_b, k + 1, map, used) {
                return true;
            }
            used[v] = false;
            map[k] = usize::MAX;
        }
        false
    }
    if search(a, b, &inv_a, &inv_b, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

pub fn are_isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Per-element invariant vector: for each operation, how often the element
/// occurs as an output, whether it is fixed by unary operations, and whether
/// it is idempotent for binary ones.
fn invariants(a: &FiniteAlgebra) -> Vec<Vec<usize>> {
    let mut inv = vec![Vec::new(); a.size];
    for (sym, arity) in a.sig.ops() {
        let table = &a.tables[sym];
        let mut counts = vec![0usize; a.size];
        for &r in table {
            counts[r] += 1;
        }
        for e in 0..a.size {
            inv[e].push(counts[e]);
            match arity {
                0 => inv[e].push((table[0] == e) as usize),
                1 => inv[e].push((table[e] == e) as usize),
                2 => inv[e].push((a.op(sym, &[e, e]) == e) as usize),
                _ => {}
            }
        }
    }
    inv
}


#[cfg(test)]
mod tests {
    use super::testkit::*;
    use super::*;
    use crate::terms::{eq, term};

    #[test]
    fn evaluate_examples() {
        let c2 = chain(2);
        let sig = dl01_sig();
        let t = term("meet(x0, x1)", &sig);
        assert_eq!(c2.evaluate(&t, &[1, 0]).unwrap(), 0);
        assert_eq!(c2.evaluate(&Term::var(0), &[1]).unwrap(), 1);
        let k3 = kleene_chain3();
        let neg = term("neg(x0)", &ka_sig());
        assert_eq!(k3.evaluate(&neg, &[1]).unwrap(), 1);
        assert!(matches!(
            c2.evaluate(&t, &[1]),
            Err(AlgebraError::UnassignedVariable(1))
        ));
    }

    #[test]
    fn quasi_equation_examples() {
        let sig = ka_sig();
        let k3 = kleene_chain3();
        // x /\ ~x <= y \/ ~y, encoded as meet(lhs, rhs) = lhs
        let lhs = term("meet(x0, neg(x0))", &sig);
        let rhs = term("join(x1, neg(x1))", &sig);
        let q = QuasiEquation::identity(Equation::new(
            Term::app("meet", vec![lhs.clone(), rhs]),
            lhs,
        ));
        assert!(k3.satisfies_quasi_equation(&q));

        let dl = dl01_sig();
        let c2 = chain(2);
        let q = QuasiEquation::new(
            vec![eq("x0 = x1", &dl)],
            eq("x0 = x1", &dl),
        );
        assert!(c2.satisfies_quasi_equation(&q));

        // In 2x2, complementary pairs are not unique, so the conclusion x0 = x1 fails.
        let sq = square();
        let premises = vec![
            eq("meet(x0, x1) = bot", &dl),
            eq("join(x0, x1) = top", &dl),
        ];
        let ok = QuasiEquation::new(premises.clone(), eq("x0 = x0", &dl));
        assert!(sq.satisfies_quasi_equation(&ok));
        let bad = QuasiEquation::new(premises, eq("x0 = x1", &dl));
        assert!(!sq.satisfies_quasi_equation(&bad));
    }

    #[test]
    fn hom_enumeration_examples() {
        let c2 = chain(2);
        let homs = enumerate_homs(&c2, &c2).unwrap();
        assert_eq!(homs.len(), 1);
        assert_eq!(homs[0].map(), &[0, 1]);

        let c3 = chain(3);
        let homs = enumerate_homs(&c3, &c2).unwrap();
        assert_eq!(homs.len(), 2);

        let trivial = FiniteAlgebra::from_fn(dl01_sig(), 1, |_, _| 0).unwrap();
        assert_eq!(enumerate_homs(&c3, &trivial).unwrap().len(), 1);
    }

    /// Oracle equivalence: backtracking agrees with the naive filter.
    #[test]
    fn hom_enumeration_matches_naive() {
        let algs = [chain(2), chain(3), chain(4), square()];
        for a in &algs {
            for b in &algs {
                if a.size() > 4 {
                    continue;
                }
                let fast = enumerate_homs(a, b).unwrap();
                let mut naive = Vec::new();
                let total = checked_pow(b.size(), a.size()).unwrap();
                for code in 0..total {
                    let mut map = vec![0usize; a.size()];
                    let mut rem = code;
                    // lexicographic: element 0 most significant
                    for slot in map.iter_mut().rev() {
                        *slot = rem % b.size();
                        rem /= b.size();
                    }
                    if Homomorphism::new(a.clone(), b.clone(), map.clone()).is_ok() {
                        naive.push(map);
                    }
                }
                let fast_maps: Vec<_> = fast.iter().map(|h| h.map().to_vec()).collect();
                assert_eq!(fast_maps, naive);
            }
        }
    }

    #[test]
    fn product_examples() {
        let sig = dl01_sig();
        let (empty, projs) = product(&sig, &[]).unwrap();
        assert_eq!(empty.size(), 1);
        assert!(projs.is_empty());

        let (sq, projs) = product(&sig, &[chain(2), chain(2)]).unwrap();
        assert_eq!(sq.size(), 4);
        assert_eq!(projs.len(), 2);
        // projections verified as homomorphisms by construction
    }

    #[test]
    fn subalgebra_examples() {
        let sq = square();
        // element encoding: coord0 least significant. (0,1) = 2.
        let (sub, incl) = subalgebra_generated(&sq, &[2]).unwrap();
        assert_eq!(sub.size(), 3);
        assert_eq!(incl.map(), &[2, 0, 3]); // seed, bot, top

        let c3 = chain(3);
        let all: Vec<usize> = (0..3).collect();
        let (sub, incl) = subalgebra_generated(&c3, &all).unwrap();
        assert_eq!(sub.size(), 3);
        assert!(incl.is_injective() && incl.is_surjective());

        let k3 = kleene_chain3();
        let (sub, _) = subalgebra_generated(&k3, &[1]).unwrap();
        assert_eq!(sub.size(), 3);
    }

    #[test]
    fn quotient_and_kernel_examples() {
        let c3 = chain(3);
        let identity = Congruence::identity(c3.clone());
        let (q, _) = quotient(&c3, &identity).unwrap();
        assert!(are_isomorphic(&q, &c3));

        let top = Congruence::top(c3.clone());
        let (q, proj) = quotient(&c3, &top).unwrap();
        assert_eq!(q.size(), 1);
        assert_eq!(proj.kernel().num_blocks(), 1);

        let id = Homomorphism::identity(&c3);
        assert!(id.kernel().is_identity());
    }

    #[test]
    fn first_isomorphism_theorem_samples() {
        // surjection 3-chain -> 2-chain collapsing {1,2}
        let c3 = chain(3);
        let c2 = chain(2);
        let f = Homomorphism::new(c3.clone(), c2.clone(), vec![0, 1, 1]).unwrap();
        let (q, _) = quotient(&c3, &f.kernel()).unwrap();
        assert!(are_isomorphic(&q, &c2));
    }

    #[test]
    fn congruence_rejects_incompatible_partition() {
        let c3 = chain(3);
        // {0,2} in one block but 1 alone is not a lattice congruence
        let err = Congruence::from_labels(c3, vec![0, 1, 0]).unwrap_err();
        assert!(matches!(err, AlgebraError::NotACongruence { .. }));
    }

    #[test]
    fn empty_algebra_rules() {
        let sig = Signature::new("semilattice", [("meet", 2)]).unwrap();
        let empty = FiniteAlgebra::new(sig, 0, BTreeMap::from([("meet".to_string(), vec![])]));
        assert!(empty.is_ok());
        let err = FiniteAlgebra::new(dl01_sig(), 0, BTreeMap::new()).unwrap_err();
        assert_eq!(err, AlgebraError::EmptyWithConstants);
    }

    #[test]
    fn isomorphism_search() {
        let sq = square();
        let (sq2, _) = product(&dl01_sig(), &[chain(2), chain(2)]).unwrap();
        assert!(are_isomorphic(&sq, &sq2));
        assert!(!are_isomorphic(&sq, &chain(4)));
    }
}
