//! CNF formulas in product-of-sums form: truth evaluation, the mod-2
//! Boolean-polynomial encoding, and exhaustive root counting.
//!
//! Variables are 1-based (`x1..xn`). An [`Assignment`] maps to an integer
//! index by taking `x1` as the most significant of `n` bits; the same
//! convention orders the register in [`crate::qsim`], so any index
//! arithmetic must use it.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

/// Largest `n` for which exhaustive enumeration runs by default.
pub const DEFAULT_ENUM_LIMIT: u32 = 30;

/// Hard cap on any enumeration limit, so `2^n` and the root count fit in
/// `u64` and the measured probability `r/2^n` stays exactly representable.
pub const MAX_ENUM_LIMIT: u32 = 62;

/// Variable count above which root counting partitions the assignment
/// space across threads. Counting is associative, so the split does not
/// affect the result.
const PARALLEL_THRESHOLD: u32 = 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("variable x{var_index} is out of range for an assignment of length {assignment_len}")]
    VariableOutOfRange { var_index: u32, assignment_len: usize },
    #[error("assignment has {got} values but the formula has {expected} variables")]
    AssignmentLength { expected: u32, got: usize },
    #[error("formula must declare at least one variable")]
    NoVariables,
    #[error("literal x{var_index} exceeds the declared variable count {num_vars}")]
    LiteralOutOfRange { var_index: u32, num_vars: u32 },
    #[error("clause width {width} exceeds the variable count {num_vars}")]
    ClauseWidth { width: u32, num_vars: u32 },
    #[error("{n} variables exceed the enumeration limit of {limit}")]
    EnumerationLimit { n: u32, limit: u32 },
}

/// A variable `x_k` or its negation; `k` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    var_index: u32,
    negated: bool,
}

impl Literal {
    /// Panics if `var_index` is 0; variable indices are 1-based.
    pub fn new(var_index: u32, negated: bool) -> Self {
        assert!(var_index >= 1, "variable indices are 1-based");
        Literal { var_index, negated }
    }

    pub fn positive(var_index: u32) -> Self {
        Self::new(var_index, false)
    }

    pub fn negative(var_index: u32) -> Self {
        Self::new(var_index, true)
    }

    pub fn var_index(&self) -> u32 {
        self.var_index
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    /// Signed integer code: `k` for `x_k`, `-k` for its negation.
    pub fn code(&self) -> i64 {
        if self.negated {
            -i64::from(self.var_index)
        } else {
            i64::from(self.var_index)
        }
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool, FormulaError> {
        let value = a
            .value(self.var_index)
            .ok_or(FormulaError::VariableOutOfRange {
                var_index: self.var_index,
                assignment_len: a.len(),
            })?;
        Ok(value != self.negated)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "-x{}", self.var_index)
        } else {
            write!(f, "x{}", self.var_index)
        }
    }
}

/// A truth assignment to `x1..xn`; `values()[k]` is the value of `x_{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    /// Decode an assignment from its `n`-bit index, `x1` most significant.
    pub fn from_index(index: u64, n: u32) -> Self {
        let values = (0..n).map(|k| (index >> (n - 1 - k)) & 1 == 1).collect();
        Assignment { values }
    }

    /// Inverse of [`Assignment::from_index`].
    pub fn index(&self) -> u64 {
        self.values
            .iter()
            .fold(0, |acc, &bit| (acc << 1) | u64::from(bit))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// Value of `x_k` (1-based), or `None` when out of range.
    pub fn value(&self, var_index: u32) -> Option<bool> {
        if var_index == 0 {
            return None;
        }
        self.values.get(var_index as usize - 1).copied()
    }
}

/// A disjunction of literals. Duplicates collapse; the empty clause is
/// false under every assignment.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Clause {
    literals: BTreeSet<Literal>,
}

impl Clause {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Self {
        Clause {
            literals: literals.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Clause::default()
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.literals.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn contains(&self, literal: Literal) -> bool {
        self.literals.contains(&literal)
    }

    /// Highest variable index mentioned, 0 for the empty clause.
    pub fn max_var(&self) -> u32 {
        self.literals
            .iter()
            .map(Literal::var_index)
            .max()
            .unwrap_or(0)
    }

    /// True when the clause contains both `x_k` and its negation, which
    /// makes it true under every assignment.
    pub fn is_tautology(&self) -> bool {
        self.literals
            .iter()
            .filter(|l| !l.is_negated())
            .any(|l| self.literals.contains(&Literal::negative(l.var_index())))
    }

    /// True iff some literal is true under `a`; the empty clause yields
    /// false.
    pub fn eval(&self, a: &Assignment) -> Result<bool, FormulaError> {
        let max_var = self.max_var();
        if max_var as usize > a.len() {
            return Err(FormulaError::VariableOutOfRange {
                var_index: max_var,
                assignment_len: a.len(),
            });
        }
        Ok(self
            .literals
            .iter()
            .any(|l| a.value(l.var_index()).expect("range checked") != l.is_negated()))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{lit}")?;
        }
        write!(f, ")")
    }
}

/// A CNF formula: the conjunction of `clauses` over variables
/// `x1..x{num_vars}`. An empty clause list is true under every assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseSet {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl ClauseSet {
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        if num_vars == 0 {
            return Err(FormulaError::NoVariables);
        }
        for clause in &clauses {
            let max_var = clause.max_var();
            if max_var > num_vars {
                return Err(FormulaError::LiteralOutOfRange {
                    var_index: max_var,
                    num_vars,
                });
            }
        }
        Ok(ClauseSet { num_vars, clauses })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// True iff every clause is true under `a`. The assignment length must
    /// equal the declared variable count.
    pub fn eval(&self, a: &Assignment) -> Result<bool, FormulaError> {
        if a.len() != self.num_vars as usize {
            return Err(FormulaError::AssignmentLength {
                expected: self.num_vars,
                got: a.len(),
            });
        }
        for clause in &self.clauses {
            if !clause.eval(a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The index-set encoding: clause `i` maps to the pair of its
    /// positive-literal and negated-literal variable indices.
    pub fn to_index_sets(&self) -> IndexSetFamily {
        let entries = self
            .clauses
            .iter()
            .map(|clause| {
                let mut positive = BTreeSet::new();
                let mut negated = BTreeSet::new();
                for lit in clause.literals() {
                    if lit.is_negated() {
                        negated.insert(lit.var_index());
                    } else {
                        positive.insert(lit.var_index());
                    }
                }
                IndexSetPair { positive, negated }
            })
            .collect();
        IndexSetFamily {
            n: self.num_vars,
            entries,
        }
    }

    /// Count satisfying assignments by enumerating all `2^n` candidates,
    /// refusing formulas above [`DEFAULT_ENUM_LIMIT`] variables.
    pub fn count_roots(&self) -> Result<u64, FormulaError> {
        self.count_roots_with_limit(DEFAULT_ENUM_LIMIT)
    }

    /// As [`ClauseSet::count_roots`] with an explicit limit; limits above
    /// [`MAX_ENUM_LIMIT`] are clamped to it.
    pub fn count_roots_with_limit(&self, limit: u32) -> Result<u64, FormulaError> {
        let limit = limit.min(MAX_ENUM_LIMIT);
        if self.num_vars > limit {
            return Err(FormulaError::EnumerationLimit {
                n: self.num_vars,
                limit,
            });
        }
        let compiled = CompiledFormula::new(self);
        let total = 1u64 << self.num_vars;
        let count = if self.num_vars <= PARALLEL_THRESHOLD {
            (0..total).filter(|&x| compiled.satisfied(x)).count() as u64
        } else {
            (0..total)
                .into_par_iter()
                .filter(|&x| compiled.satisfied(x))
                .count() as u64
        };
        Ok(count)
    }
}

impl fmt::Display for ClauseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return write!(f, "true");
        }
        for (i, clause) in self.clauses.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{clause}")?;
        }
        Ok(())
    }
}

/// One factor of the Boolean polynomial: the clause's positive-literal
/// indices and its negated-literal indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSetPair {
    pub positive: BTreeSet<u32>,
    pub negated: BTreeSet<u32>,
}

/// The data behind the polynomial encoding of a formula: one
/// [`IndexSetPair`] per clause, in clause order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSetFamily {
    n: u32,
    entries: Vec<IndexSetPair>,
}

impl IndexSetFamily {
    pub fn new(n: u32, entries: Vec<IndexSetPair>) -> Result<Self, FormulaError> {
        if n == 0 {
            return Err(FormulaError::NoVariables);
        }
        for entry in &entries {
            for &index in entry.positive.iter().chain(entry.negated.iter()) {
                if index == 0 || index > n {
                    return Err(FormulaError::LiteralOutOfRange {
                        var_index: index,
                        num_vars: n,
                    });
                }
            }
        }
        Ok(IndexSetFamily { n, entries })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn entries(&self) -> &[IndexSetPair] {
        &self.entries
    }

    /// Evaluate the Boolean polynomial with arithmetic mod 2:
    /// `prod_i (1 + prod_{a in S_i} (1 - x_a) * prod_{b in T_i} x_b)`,
    /// where `S_i` holds clause i's positive indices and `T_i` its negated
    /// ones. The value is 1 exactly when the originating formula is
    /// satisfied; a factor whose clause mentions both polarities of a
    /// variable reduces to 1.
    pub fn eval(&self, a: &Assignment) -> Result<u8, FormulaError> {
        if a.len() != self.n as usize {
            return Err(FormulaError::AssignmentLength {
                expected: self.n,
                got: a.len(),
            });
        }
        let bit = |k: u32| u8::from(a.value(k).expect("length checked"));
        let mut product: u8 = 1;
        for pair in &self.entries {
            let mut inner: u8 = 1;
            for &i in &pair.positive {
                inner *= 1 - bit(i);
            }
            for &i in &pair.negated {
                inner *= bit(i);
            }
            product *= (1 + inner) % 2;
        }
        Ok(product)
    }
}

/// Bitmask form of a [`ClauseSet`] for evaluating assignment indices
/// without allocation; bit `n - k` of an index holds `x_k`.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    n: u32,
    pos_masks: Vec<u64>,
    neg_masks: Vec<u64>,
}

impl CompiledFormula {
    pub fn new(cs: &ClauseSet) -> Self {
        let n = cs.num_vars();
        let mut pos_masks = Vec::with_capacity(cs.num_clauses());
        let mut neg_masks = Vec::with_capacity(cs.num_clauses());
        for clause in cs.clauses() {
            let mut pos = 0u64;
            let mut neg = 0u64;
            for lit in clause.literals() {
                let bit = 1u64 << (n - lit.var_index());
                if lit.is_negated() {
                    neg |= bit;
                } else {
                    pos |= bit;
                }
            }
            pos_masks.push(pos);
            neg_masks.push(neg);
        }
        CompiledFormula {
            n,
            pos_masks,
            neg_masks,
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.n
    }

    /// True iff the assignment with index `x` satisfies every clause.
    pub fn satisfied(&self, x: u64) -> bool {
        self.pos_masks
            .iter()
            .zip(&self.neg_masks)
            .all(|(&pos, &neg)| x & pos != 0 || !x & neg != 0)
    }
}

/// Uniform random k-CNF: `m` clauses, each over `k` distinct variables with
/// independent random polarity. Duplicate clauses may occur.
pub fn random_kcnf<R: rand::Rng>(
    n: u32,
    m: usize,
    k: u32,
    rng: &mut R,
) -> Result<ClauseSet, FormulaError> {
    if n == 0 {
        return Err(FormulaError::NoVariables);
    }
    if k > n {
        return Err(FormulaError::ClauseWidth {
            width: k,
            num_vars: n,
        });
    }
    let mut clauses = Vec::with_capacity(m);
    for _ in 0..m {
        let vars = rand::seq::index::sample(rng, n as usize, k as usize);
        let mut literals = Vec::with_capacity(k as usize);
        for v in vars.iter() {
            literals.push(Literal::new(v as u32 + 1, rng.random_bool(0.5)));
        }
        clauses.push(Clause::new(literals));
    }
    ClauseSet::new(n, clauses)
}
