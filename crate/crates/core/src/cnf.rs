//! CNF formulas, DIMACS input, and clause evaluation.
//!
//! [`Instance`] is immutable once built. [`EvalState`] pairs an assignment
//! with per-clause true-literal counts and per-variable make/break counts,
//! updated incrementally on every flip. [`satisfied_count_naive`] and
//! [`brute_force_optimum`] are the slow reference evaluators.

use std::fmt;
use std::io::BufRead;

use rand::Rng;
use thiserror::Error;

/// Largest variable count accepted by [`brute_force_optimum`].
pub const ENUMERATION_LIMIT: usize = 26;

/// A Boolean variable, stored 0-based. DIMACS numbering is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    pub fn new(index: usize) -> Self {
        Var(index as u32)
    }

    /// Variable from its 1-based DIMACS number. Returns `None` for 0.
    pub fn from_dimacs(number: usize) -> Option<Self> {
        number.checked_sub(1).map(Var::new)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn dimacs(self) -> usize {
        self.index() + 1
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dimacs())
    }
}

/// A literal: a variable with a polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Self {
        Lit(var.0 << 1 | (!positive) as u32)
    }

    pub fn positive(var: Var) -> Self {
        Lit::new(var, true)
    }

    pub fn negative(var: Var) -> Self {
        Lit::new(var, false)
    }

    /// Literal from a signed DIMACS integer. Returns `None` for 0.
    pub fn from_dimacs(value: i64) -> Option<Self> {
        if value == 0 {
            return None;
        }
        let var = Var::new(value.unsigned_abs() as usize - 1);
        Some(Lit::new(var, value > 0))
    }

    #[inline]
    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Dense code, `2 * var + negated`, usable as an array index.
    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var().dimacs() as i64;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    #[inline]
    pub fn is_true_under(self, values: &[bool]) -> bool {
        values[self.var().index()] == self.is_positive()
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// Occurrences of one variable inside one clause, folded by polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarOccurrence {
    /// Clause index (in the owning variable's list) or variable index (in a
    /// clause's list).
    pub index: u32,
    pub positive: u32,
    pub negative: u32,
}

impl VarOccurrence {
    /// Literals of this variable that are true when the variable has `value`.
    #[inline]
    fn true_when(&self, value: bool) -> u32 {
        if value {
            self.positive
        } else {
            self.negative
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("clause {clause} is empty")]
    EmptyClause { clause: usize },
    #[error("literal {literal} in clause {clause} is outside variable range 1..={num_vars}")]
    LiteralOutOfRange {
        clause: usize,
        literal: i64,
        num_vars: usize,
    },
    #[error("assignment has {got} values, instance has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
    #[error("variable {var} is outside range 1..={num_vars}")]
    VarOutOfRange { var: usize, num_vars: usize },
    #[error("{num_vars} variables exceed the enumeration limit of {ENUMERATION_LIMIT}")]
    TooManyVariables { num_vars: usize },
}

/// An immutable CNF formula with occurrence indices.
#[derive(Clone, Debug)]
pub struct Instance {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    /// For each literal code, clause indices containing it (once per occurrence).
    lit_occurrences: Vec<Vec<u32>>,
    /// For each variable, the clauses it appears in with polarity counts.
    var_occurrences: Vec<Vec<VarOccurrence>>,
    /// For each clause, the distinct variables it contains with polarity counts.
    clause_vars: Vec<Vec<VarOccurrence>>,
    /// For each clause, the largest number of literals sharing one variable.
    max_multiplicity: Vec<u32>,
}

impl Instance {
    /// Builds an instance, keeping duplicate and tautological clauses verbatim.
    pub fn new(num_vars: usize, clauses: Vec<Vec<Lit>>) -> Result<Self, CnfError> {
        let mut lit_occurrences = vec![Vec::new(); 2 * num_vars];
        let mut var_occurrences: Vec<Vec<VarOccurrence>> = vec![Vec::new(); num_vars];
        let mut clause_vars = Vec::with_capacity(clauses.len());
        let mut max_multiplicity = Vec::with_capacity(clauses.len());

        for (ci, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(CnfError::EmptyClause { clause: ci });
            }
            let mut folded: Vec<VarOccurrence> = Vec::with_capacity(clause.len());
            for &lit in clause {
                let v = lit.var().index();
                if v >= num_vars {
                    return Err(CnfError::LiteralOutOfRange {
                        clause: ci,
                        literal: lit.to_dimacs(),
                        num_vars,
                    });
                }
                lit_occurrences[lit.code()].push(ci as u32);
                let entry = match folded.iter_mut().find(|o| o.index as usize == v) {
                    Some(e) => e,
                    None => {
                        folded.push(VarOccurrence {
                            index: v as u32,
                            positive: 0,
                            negative: 0,
                        });
                        folded.last_mut().unwrap()
                    }
                };
                if lit.is_positive() {
                    entry.positive += 1;
                } else {
                    entry.negative += 1;
                }
            }
            max_multiplicity.push(
                folded
                    .iter()
                    .map(|o| o.positive.max(o.negative))
                    .max()
                    .unwrap_or(0),
            );
            for o in &folded {
                var_occurrences[o.index as usize].push(VarOccurrence {
                    index: ci as u32,
                    positive: o.positive,
                    negative: o.negative,
                });
            }
            clause_vars.push(folded);
        }

        Ok(Instance {
            num_vars,
            clauses,
            lit_occurrences,
            var_occurrences,
            clause_vars,
            max_multiplicity,
        })
    }

    /// Builds an instance from DIMACS-style signed integers.
    pub fn from_dimacs_clauses(num_vars: usize, clauses: &[&[i64]]) -> Result<Self, CnfError> {
        let mut out = Vec::with_capacity(clauses.len());
        for (ci, clause) in clauses.iter().enumerate() {
            let mut lits = Vec::with_capacity(clause.len());
            for &x in clause.iter() {
                match Lit::from_dimacs(x) {
                    Some(l) if l.var().index() < num_vars => lits.push(l),
                    _ => {
                        return Err(CnfError::LiteralOutOfRange {
                            clause: ci,
                            literal: x,
                            num_vars,
                        })
                    }
                }
            }
            out.push(lits);
        }
        Instance::new(num_vars, out)
    }

    /// Uniform random k-CNF: each clause draws `k` distinct variables with
    /// random polarities. Requires `k <= num_vars`.
    pub fn random_kcnf<R: Rng + ?Sized>(num_vars: usize, num_clauses: usize, k: usize, rng: &mut R) -> Self {
        assert!(k >= 1 && k <= num_vars, "clause width must be in 1..=num_vars");
        let clauses = (0..num_clauses)
            .map(|_| {
                rand::seq::index::sample(rng, num_vars, k)
                    .into_iter()
                    .map(|v| Lit::new(Var::new(v), rng.gen_bool(0.5)))
                    .collect()
            })
            .collect();
        Instance::new(num_vars, clauses).expect("generated clauses are valid")
    }

    /// Random k-CNF where every clause is satisfied by a hidden assignment.
    pub fn random_planted_kcnf<R: Rng + ?Sized>(
        num_vars: usize,
        num_clauses: usize,
        k: usize,
        rng: &mut R,
    ) -> (Self, Assignment) {
        assert!(k >= 1 && k <= num_vars, "clause width must be in 1..=num_vars");
        let hidden = Assignment::random(num_vars, rng);
        let mut clauses = Vec::with_capacity(num_clauses);
        while clauses.len() < num_clauses {
            let clause: Vec<Lit> = rand::seq::index::sample(rng, num_vars, k)
                .into_iter()
                .map(|v| Lit::new(Var::new(v), rng.gen_bool(0.5)))
                .collect();
            if clause.iter().any(|l| l.is_true_under(hidden.values())) {
                clauses.push(clause);
            }
        }
        let inst = Instance::new(num_vars, clauses).expect("generated clauses are valid");
        (inst, hidden)
    }

    #[inline]
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    #[inline]
    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn clause(&self, index: usize) -> &[Lit] {
        &self.clauses[index]
    }

    /// Clause indices containing `lit`, once per occurrence.
    pub fn occurrences(&self, lit: Lit) -> &[u32] {
        &self.lit_occurrences[lit.code()]
    }

    /// Clauses containing `var`, with per-polarity literal counts.
    pub fn var_occurrences(&self, var: Var) -> &[VarOccurrence] {
        &self.var_occurrences[var.index()]
    }

    /// Distinct variables of a clause, with per-polarity literal counts.
    pub fn clause_vars(&self, clause: usize) -> &[VarOccurrence] {
        &self.clause_vars[clause]
    }

    pub fn check_var(&self, var: Var) -> Result<(), CnfError> {
        if var.index() < self.num_vars {
            Ok(())
        } else {
            Err(CnfError::VarOutOfRange {
                var: var.dimacs(),
                num_vars: self.num_vars,
            })
        }
    }

    pub fn check_assignment(&self, a: &Assignment) -> Result<(), CnfError> {
        if a.len() == self.num_vars {
            Ok(())
        } else {
            Err(CnfError::LengthMismatch {
                expected: self.num_vars,
                got: a.len(),
            })
        }
    }
}

/// A total truth assignment.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment(values)
    }

    pub fn all_false(num_vars: usize) -> Self {
        Assignment(vec![false; num_vars])
    }

    pub fn random<R: Rng + ?Sized>(num_vars: usize, rng: &mut R) -> Self {
        Assignment((0..num_vars).map(|_| rng.gen_bool(0.5)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, var: Var) -> bool {
        self.0[var.index()]
    }

    pub fn set(&mut self, var: Var, value: bool) {
        self.0[var.index()] = value;
    }

    pub fn flip(&mut self, var: Var) {
        let slot = &mut self.0[var.index()];
        *slot = !*slot;
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    pub fn into_values(self) -> Vec<bool> {
        self.0
    }
}

/// Number of clauses satisfied by `a`, computed clause by clause.
pub fn satisfied_count_naive(inst: &Instance, a: &Assignment) -> Result<usize, CnfError> {
    inst.check_assignment(a)?;
    Ok(inst
        .clauses()
        .iter()
        .filter(|c| c.iter().any(|l| l.is_true_under(a.values())))
        .count())
}

const NOT_LISTED: u32 = u32::MAX;

/// Set of clause indices with O(1) insert, remove, and uniform indexing.
#[derive(Clone, Debug)]
pub struct ClauseSet {
    items: Vec<u32>,
    position: Vec<u32>,
}

impl ClauseSet {
    fn with_capacity(num_clauses: usize) -> Self {
        ClauseSet {
            items: Vec::new(),
            position: vec![NOT_LISTED; num_clauses],
        }
    }

    fn insert(&mut self, clause: usize) {
        debug_assert_eq!(self.position[clause], NOT_LISTED);
        self.position[clause] = self.items.len() as u32;
        self.items.push(clause as u32);
    }

    fn remove(&mut self, clause: usize) {
        let pos = self.position[clause] as usize;
        debug_assert_ne!(pos, NOT_LISTED as usize);
        let last = self.items.pop().unwrap();
        if last as usize != clause {
            self.items[pos] = last;
            self.position[last as usize] = pos as u32;
        }
        self.position[clause] = NOT_LISTED;
    }

    pub fn contains(&self, clause: usize) -> bool {
        self.position[clause] != NOT_LISTED
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.items
    }
}

/// An assignment with incremental satisfaction bookkeeping.
///
/// A clause contributes to `make[u]` when no literal is true, and to
/// `break[u]` when every true literal belongs to `u` and the clause holds no
/// literal of `u` that would become true. Both are per-clause transitions, so
/// repeated and complementary literals are handled without special cases.
#[derive(Clone, Debug)]
pub struct EvalState<'a> {
    inst: &'a Instance,
    assignment: Assignment,
    true_lits: Vec<u32>,
    make: Vec<u32>,
    brk: Vec<u32>,
    satisfied: usize,
    unsat: ClauseSet,
}

impl<'a> EvalState<'a> {
    pub fn new(inst: &'a Instance, assignment: Assignment) -> Result<Self, CnfError> {
        inst.check_assignment(&assignment)?;
        let m = inst.num_clauses();
        let n = inst.num_vars();
        let mut state = EvalState {
            inst,
            assignment,
            true_lits: vec![0; m],
            make: vec![0; n],
            brk: vec![0; n],
            satisfied: 0,
            unsat: ClauseSet::with_capacity(m),
        };
        for c in 0..m {
            let t = inst
                .clause(c)
                .iter()
                .filter(|l| l.is_true_under(state.assignment.values()))
                .count() as u32;
            state.true_lits[c] = t;
            if t == 0 {
                state.unsat.insert(c);
            } else {
                state.satisfied += 1;
            }
            state.apply_contribution(c, true);
        }
        Ok(state)
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    pub fn into_assignment(self) -> Assignment {
        self.assignment
    }

    #[inline]
    pub fn value(&self, var: Var) -> bool {
        self.assignment.get(var)
    }

    #[inline]
    pub fn satisfied_total(&self) -> usize {
        self.satisfied
    }

    pub fn true_lit_count(&self, clause: usize) -> u32 {
        self.true_lits[clause]
    }

    pub fn true_lit_counts(&self) -> &[u32] {
        &self.true_lits
    }

    #[inline]
    pub fn make_count(&self, var: Var) -> u32 {
        self.make[var.index()]
    }

    #[inline]
    pub fn break_count(&self, var: Var) -> u32 {
        self.brk[var.index()]
    }

    /// Currently unsatisfied clauses.
    pub fn unsatisfied(&self) -> &ClauseSet {
        &self.unsat
    }

    /// Change in satisfied clauses if `var` were flipped.
    pub fn delta_for_flip(&self, var: Var) -> Result<i64, CnfError> {
        self.inst.check_var(var)?;
        Ok(self.delta(var))
    }

    #[inline]
    pub(crate) fn delta(&self, var: Var) -> i64 {
        self.make[var.index()] as i64 - self.brk[var.index()] as i64
    }

    /// Negates `var`, touching only the clauses it occurs in.
    pub fn flip(&mut self, var: Var) -> Result<(), CnfError> {
        self.inst.check_var(var)?;
        self.flip_unchecked(var);
        Ok(())
    }

    pub(crate) fn flip_unchecked(&mut self, var: Var) {
        let inst = self.inst;
        let occs = inst.var_occurrences(var);
        for occ in occs {
            self.apply_contribution(occ.index as usize, false);
        }
        self.assignment.flip(var);
        let value = self.assignment.get(var);
        for occ in occs {
            let c = occ.index as usize;
            let old = self.true_lits[c];
            let new = old - occ.true_when(!value) + occ.true_when(value);
            self.true_lits[c] = new;
            if old == 0 && new > 0 {
                self.satisfied += 1;
                self.unsat.remove(c);
            } else if old > 0 && new == 0 {
                self.satisfied -= 1;
                self.unsat.insert(c);
            }
            self.apply_contribution(c, true);
        }
    }

    /// Adds (`add`) or removes this clause's make/break contribution under the
    /// current assignment.
    fn apply_contribution(&mut self, clause: usize, add: bool) {
        let t = self.true_lits[clause];
        let inst = self.inst;
        if t == 0 {
            for o in inst.clause_vars(clause) {
                bump(&mut self.make[o.index as usize], add);
            }
        } else if t <= inst.max_multiplicity[clause] {
            for o in inst.clause_vars(clause) {
                let value = self.assignment.values()[o.index as usize];
                if o.true_when(value) == t && o.true_when(!value) == 0 {
                    bump(&mut self.brk[o.index as usize], add);
                    break;
                }
            }
        }
    }
}

#[inline]
fn bump(slot: &mut u32, add: bool) {
    if add {
        *slot += 1;
    } else {
        *slot -= 1;
    }
}

impl PartialEq for EvalState<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.inst, other.inst)
            && self.assignment == other.assignment
            && self.true_lits == other.true_lits
            && self.make == other.make
            && self.brk == other.brk
            && self.satisfied == other.satisfied
            && self.unsat.len() == other.unsat.len()
            && self.unsat.as_slice().iter().all(|&c| other.unsat.contains(c as usize))
    }
}

/// Exact MAX-SAT optimum by Gray-code enumeration of all assignments.
/// Returns the best count and the first assignment found attaining it.
pub fn brute_force_optimum(inst: &Instance) -> Result<(usize, Assignment), CnfError> {
    let n = inst.num_vars();
    if n > ENUMERATION_LIMIT {
        return Err(CnfError::TooManyVariables { num_vars: n });
    }
    let mut state = EvalState::new(inst, Assignment::all_false(n))?;
    let mut best = state.satisfied_total();
    let mut witness = state.assignment().clone();
    let m = inst.num_clauses();
    for step in 1u64..(1u64 << n) {
        if best == m {
            break;
        }
        state.flip_unchecked(Var::new(step.trailing_zeros() as usize));
        if state.satisfied_total() > best {
            best = state.satisfied_total();
            witness = state.assignment().clone();
        }
    }
    Ok((best, witness))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("no `p cnf` header before clause data")]
    MissingHeader,
    #[error("malformed header `{0}`")]
    MalformedHeader(String),
    #[error("duplicate header")]
    DuplicateHeader,
    #[error("weighted input (`p wcnf`) is not supported; only unweighted MAX-SAT")]
    Weighted,
    #[error("invalid token `{0}`")]
    InvalidToken(String),
    #[error("literal {literal} outside range ±{num_vars}")]
    LiteralOutOfRange { literal: i64, num_vars: usize },
    #[error("empty clause")]
    EmptyClause,
    #[error("header declares {declared} clauses but {found} were found")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("final clause is not terminated by 0")]
    UnterminatedClause,
    #[error("trailing tokens after the declared {declared} clauses")]
    TrailingTokens { declared: usize },
    #[error("read failure: {0}")]
    Io(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn at(line: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, kind }
    }
}

/// Parses DIMACS CNF text.
///
/// Comment lines start with `c`. Clauses may span lines. After the declared
/// clause count only a SATLIB-style `%` trailer (and whatever follows it) may
/// appear.
pub fn parse_dimacs<R: BufRead>(reader: R) -> Result<Instance, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut current_start = 0;
    let mut last_line = 0;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = line.map_err(|e| ParseError::at(lineno, ParseErrorKind::Io(e.to_string())))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::at(lineno, ParseErrorKind::DuplicateHeader));
            }
            header = Some(parse_header(trimmed).map_err(|k| ParseError::at(lineno, k))?);
            continue;
        }
        let (num_vars, declared) =
            header.ok_or_else(|| ParseError::at(lineno, ParseErrorKind::MissingHeader))?;
        if trimmed.starts_with('%') {
            if clauses.len() == declared && current.is_empty() {
                break;
            }
            // A trailer in the middle of the clause data.
            return Err(ParseError::at(
                lineno,
                ParseErrorKind::ClauseCountMismatch {
                    declared,
                    found: clauses.len(),
                },
            ));
        }
        for token in trimmed.split_whitespace() {
            if clauses.len() == declared {
                return Err(ParseError::at(lineno, ParseErrorKind::TrailingTokens { declared }));
            }
            let value: i64 = token
                .parse()
                .map_err(|_| ParseError::at(lineno, ParseErrorKind::InvalidToken(token.to_string())))?;
            if value == 0 {
                if current.is_empty() {
                    return Err(ParseError::at(lineno, ParseErrorKind::EmptyClause));
                }
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if value.unsigned_abs() as usize > num_vars {
                return Err(ParseError::at(
                    lineno,
                    ParseErrorKind::LiteralOutOfRange {
                        literal: value,
                        num_vars,
                    },
                ));
            }
            if current.is_empty() {
                current_start = lineno;
            }
            current.push(Lit::from_dimacs(value).unwrap());
        }
    }

    let (num_vars, declared) =
        header.ok_or_else(|| ParseError::at(last_line.max(1), ParseErrorKind::MissingHeader))?;
    if !current.is_empty() {
        return Err(ParseError::at(current_start, ParseErrorKind::UnterminatedClause));
    }
    if clauses.len() != declared {
        return Err(ParseError::at(
            last_line.max(1),
            ParseErrorKind::ClauseCountMismatch {
                declared,
                found: clauses.len(),
            },
        ));
    }
    Ok(Instance::new(num_vars, clauses).expect("parser validated every literal"))
}

/// Parses DIMACS CNF from a string.
pub fn parse_dimacs_str(text: &str) -> Result<Instance, ParseError> {
    parse_dimacs(text.as_bytes())
}

fn parse_header(line: &str) -> Result<(usize, usize), ParseErrorKind> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    let malformed = || ParseErrorKind::MalformedHeader(line.to_string());
    if fields.len() < 2 || fields[0] != "p" {
        return Err(malformed());
    }
    match fields[1] {
        "cnf" => {}
        "wcnf" => return Err(ParseErrorKind::Weighted),
        _ => return Err(malformed()),
    }
    if fields.len() != 4 {
        return Err(malformed());
    }
    let n = fields[2].parse().map_err(|_| malformed())?;
    let m = fields[3].parse().map_err(|_| malformed())?;
    Ok((n, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn inst(n: usize, clauses: &[&[i64]]) -> Instance {
        Instance::from_dimacs_clauses(n, clauses).unwrap()
    }

    fn a(values: &[bool]) -> Assignment {
        Assignment::new(values.to_vec())
    }

    #[test]
    fn parses_small_file() {
        let i = parse_dimacs_str("p cnf 2 2\n1 -2 0\n2 0\n").unwrap();
        assert_eq!(i.num_vars(), 2);
        assert_eq!(i.num_clauses(), 2);
        assert_eq!(i.clause(0), &[Lit::from_dimacs(1).unwrap(), Lit::from_dimacs(-2).unwrap()]);
        assert_eq!(i.clause(1), &[Lit::from_dimacs(2).unwrap()]);
    }

    #[test]
    fn clauses_may_span_lines_and_comments_anywhere() {
        let i = parse_dimacs_str("c hello\np cnf 3 2\n1 2\nc mid\n 3 0 -1\n0\n").unwrap();
        assert_eq!(i.num_clauses(), 2);
        assert_eq!(i.clause(0).len(), 3);
        assert_eq!(i.clause(1).len(), 1);
    }

    #[test]
    fn keeps_duplicates_and_tautologies() {
        let i = parse_dimacs_str("p cnf 2 3\n1 1 0\n1 -1 0\n1 1 0\n").unwrap();
        assert_eq!(i.num_clauses(), 3);
        assert_eq!(i.clause(0).len(), 2);
        assert_eq!(i.occurrences(Lit::from_dimacs(1).unwrap()), &[0, 0, 1, 2, 2]);
    }

    #[test]
    fn accepts_satlib_trailer() {
        let i = parse_dimacs_str("p cnf 2 1\n1 2 0\n%\n0\n\n").unwrap();
        assert_eq!(i.num_clauses(), 1);
    }

    #[test]
    fn parse_errors_are_distinct() {
        let kind = |text: &str| parse_dimacs_str(text).unwrap_err().kind;
        assert_eq!(kind("p cnf 3 1\n1 2 0 extra"), ParseErrorKind::TrailingTokens { declared: 1 });
        assert_eq!(kind("1 2 0\n"), ParseErrorKind::MissingHeader);
        assert_eq!(kind(""), ParseErrorKind::MissingHeader);
        assert!(matches!(kind("p cnf x 1\n1 0\n"), ParseErrorKind::MalformedHeader(_)));
        assert!(matches!(kind("p dnf 1 1\n1 0\n"), ParseErrorKind::MalformedHeader(_)));
        assert_eq!(kind("p wcnf 2 1 10\n10 1 0\n"), ParseErrorKind::Weighted);
        assert_eq!(
            kind("p cnf 2 1\n1 -3 0\n"),
            ParseErrorKind::LiteralOutOfRange { literal: -3, num_vars: 2 }
        );
        assert_eq!(
            kind("p cnf 2 3\n1 0\n2 0\n"),
            ParseErrorKind::ClauseCountMismatch { declared: 3, found: 2 }
        );
        assert_eq!(kind("p cnf 2 2\n1 0\n2"), ParseErrorKind::UnterminatedClause);
        assert_eq!(kind("p cnf 2 1\n0\n"), ParseErrorKind::EmptyClause);
        assert_eq!(kind("p cnf 2 1\np cnf 2 1\n1 0\n"), ParseErrorKind::DuplicateHeader);
        assert_eq!(kind("p cnf 2 1\n1 0\n2 0\n"), ParseErrorKind::TrailingTokens { declared: 1 });
    }

    #[test]
    fn error_carries_line_number() {
        let err = parse_dimacs_str("c x\np cnf 2 2\n1 0\n5 0\n").unwrap_err();
        assert_eq!(err.line, 4);
        assert!(err.to_string().starts_with("line 4:"));
    }

    #[test]
    fn naive_count_examples() {
        assert_eq!(satisfied_count_naive(&inst(1, &[&[1]]), &a(&[true])).unwrap(), 1);
        let i = inst(2, &[&[1, -2], &[2], &[-1]]);
        assert_eq!(satisfied_count_naive(&i, &a(&[true, false])).unwrap(), 1);
        assert_eq!(
            satisfied_count_naive(&i, &a(&[true])),
            Err(CnfError::LengthMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn init_state_examples() {
        let i = inst(2, &[&[1], &[-1]]);
        let s = EvalState::new(&i, a(&[true, false])).unwrap();
        assert_eq!(s.satisfied_total(), 1);
        assert_eq!(s.make_count(Var::new(0)), 1);
        assert_eq!(s.break_count(Var::new(0)), 1);
        // x2 appears nowhere.
        assert_eq!(s.make_count(Var::new(1)), 0);
        assert_eq!(s.break_count(Var::new(1)), 0);
        assert_eq!(s.delta_for_flip(Var::new(0)).unwrap(), 0);
        assert!(EvalState::new(&i, a(&[true])).is_err());
    }

    #[test]
    fn flip_examples() {
        let i = inst(1, &[&[1]]);
        let mut s = EvalState::new(&i, a(&[false])).unwrap();
        assert_eq!(s.delta_for_flip(Var::new(0)).unwrap(), 1);
        s.flip(Var::new(0)).unwrap();
        assert_eq!(s.satisfied_total(), 1);
        assert!(s.unsatisfied().is_empty());
        assert_eq!(
            s.flip(Var::new(1)),
            Err(CnfError::VarOutOfRange { var: 2, num_vars: 1 })
        );
        assert!(s.delta_for_flip(Var::new(3)).is_err());
    }

    #[test]
    fn flip_twice_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let i = Instance::random_kcnf(12, 50, 3, &mut rng);
        let start = EvalState::new(&i, Assignment::random(12, &mut rng)).unwrap();
        for v in 0..12 {
            let mut s = start.clone();
            s.flip(Var::new(v)).unwrap();
            s.flip(Var::new(v)).unwrap();
            assert_eq!(s, start);
        }
    }

    #[test]
    fn repeated_literals_give_per_clause_counts() {
        // (x1 ∨ x1), (x1 ∨ ¬x1), (x1 ∨ x1 ∨ x2)
        let i = inst(2, &[&[1, 1], &[1, -1], &[1, 1, 2]]);
        let s = EvalState::new(&i, a(&[true, false])).unwrap();
        assert_eq!(s.true_lit_count(0), 2);
        assert_eq!(s.break_count(Var::new(0)), 2);
        assert_eq!(s.make_count(Var::new(0)), 0);
        assert_eq!(s.delta_for_flip(Var::new(1)).unwrap(), 0);
        let mut f = s.clone();
        f.flip(Var::new(0)).unwrap();
        assert_eq!(f.satisfied_total(), 1);
        assert_eq!(f.make_count(Var::new(0)), 2);
        assert_eq!(f.make_count(Var::new(1)), 1);
        assert_eq!(f, EvalState::new(&i, f.assignment().clone()).unwrap());
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_optimum(&inst(1, &[&[1], &[-1]])).unwrap().0, 1);
        let i = inst(2, &[&[1, 2]]);
        let (best, w) = brute_force_optimum(&i).unwrap();
        assert_eq!(best, 1);
        assert!(w.get(Var::new(0)) || w.get(Var::new(1)));
        let big = Instance::new(27, vec![vec![Lit::positive(Var::new(0))]]).unwrap();
        assert_eq!(
            brute_force_optimum(&big).unwrap_err(),
            CnfError::TooManyVariables { num_vars: 27 }
        );
    }

    #[test]
    fn instance_construction_errors() {
        assert_eq!(
            Instance::new(1, vec![vec![]]).unwrap_err(),
            CnfError::EmptyClause { clause: 0 }
        );
        assert!(matches!(
            Instance::from_dimacs_clauses(1, &[&[2]]),
            Err(CnfError::LiteralOutOfRange { literal: 2, .. })
        ));
    }
}
