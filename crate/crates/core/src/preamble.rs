//! Preambles: sequences of single-variable assignment steps played out
//! before a local-search heuristic to choose its starting assignment.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::cnf::{Assignment, CnfError, EvalState, Instance, Var};

/// What a step does to its variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    /// Set the value that satisfies fewer clauses (code 0).
    Contrary,
    /// Set the value that satisfies more clauses (code 1).
    Greedy,
    /// Keep the current value (code 2).
    Leave,
}

impl Action {
    pub const ALL: [Action; 3] = [Action::Contrary, Action::Greedy, Action::Leave];

    pub fn code(self) -> u8 {
        match self {
            Action::Contrary => 0,
            Action::Greedy => 1,
            Action::Leave => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Action::ALL.get(code as usize).copied()
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Action::ALL[rng.gen_range(0..3)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PreambleStep {
    pub var: Var,
    pub action: Action,
}

impl PreambleStep {
    pub fn new(var: Var, action: Action) -> Self {
        PreambleStep { var, action }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PreambleError {
    #[error("step {step} names variable {var}, instance has {num_vars}")]
    StepOutOfRange { step: usize, var: usize, num_vars: usize },
    #[error("infeasible bounds: distinct floor {floor} with {num_vars} variables and maximum length {max_len}")]
    InfeasibleBounds {
        floor: usize,
        max_len: usize,
        num_vars: usize,
    },
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error("preamble text line {line}: {message}")]
    Format { line: usize, message: String },
}

/// A preamble genome. Variables may repeat.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Preamble {
    steps: Vec<PreambleStep>,
}

impl Preamble {
    pub fn new(steps: Vec<PreambleStep>) -> Self {
        Preamble { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[PreambleStep] {
        &self.steps
    }

    pub fn steps_mut(&mut self) -> &mut [PreambleStep] {
        &mut self.steps
    }

    pub fn into_steps(self) -> Vec<PreambleStep> {
        self.steps
    }

    pub fn distinct_vars(&self) -> usize {
        distinct_vars(&self.steps)
    }

    /// Checks every step against the instance's variable range.
    pub fn validate(&self, inst: &Instance) -> Result<(), PreambleError> {
        let n = inst.num_vars();
        match self.steps.iter().position(|s| s.var.index() >= n) {
            Some(step) => Err(PreambleError::StepOutOfRange {
                step,
                var: self.steps[step].var.dimacs(),
                num_vars: n,
            }),
            None => Ok(()),
        }
    }

    /// Text form: header `preamble <len>`, then one `v a` line per step with
    /// `v` 1-based and `a` the action code.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Preamble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "preamble {}", self.steps.len())?;
        for s in &self.steps {
            writeln!(f, "{} {}", s.var.dimacs(), s.action.code())?;
        }
        Ok(())
    }
}

impl FromStr for Preamble {
    type Err = PreambleError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, message: &str| PreambleError::Format {
            line,
            message: message.to_string(),
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
        let declared: usize = header
            .trim()
            .strip_prefix("preamble")
            .and_then(|rest| rest.trim().parse().ok())
            .ok_or_else(|| err(1, "expected `preamble <length>`"))?;
        let mut steps = Vec::with_capacity(declared);
        for (idx, line) in lines {
            let mut fields = line.split_whitespace();
            let var = fields
                .next()
                .and_then(|t| t.parse::<usize>().ok())
                .and_then(Var::from_dimacs)
                .ok_or_else(|| err(idx + 1, "bad variable"))?;
            let action = fields
                .next()
                .and_then(|t| t.parse::<u8>().ok())
                .and_then(Action::from_code)
                .ok_or_else(|| err(idx + 1, "bad action code"))?;
            if fields.next().is_some() {
                return Err(err(idx + 1, "extra fields"));
            }
            steps.push(PreambleStep::new(var, action));
        }
        if steps.len() != declared {
            return Err(err(1, "step count differs from header"));
        }
        Ok(Preamble::new(steps))
    }
}

/// Number of distinct variables named by `steps`.
pub fn distinct_vars(steps: &[PreambleStep]) -> usize {
    steps.iter().map(|s| s.var).collect::<HashSet<_>>().len()
}

/// Executes one step against `state`. Returns whether the variable flipped.
///
/// The two candidate values are compared through the flip delta; the rng is
/// consulted only on an exact tie.
pub fn play_step<R: Rng + ?Sized>(state: &mut EvalState<'_>, step: PreambleStep, rng: &mut R) -> bool {
    let delta = match step.action {
        Action::Leave => return false,
        Action::Greedy => state.delta(step.var),
        Action::Contrary => -state.delta(step.var),
    };
    let flip = match delta {
        d if d > 0 => true,
        0 => rng.gen_bool(0.5),
        _ => false,
    };
    if flip {
        state.flip_unchecked(step.var);
    }
    flip
}

/// Plays `p` from `start`, returning the resulting evaluation state.
pub fn playout_state<'a, R: Rng + ?Sized>(
    inst: &'a Instance,
    p: &Preamble,
    start: Assignment,
    rng: &mut R,
) -> Result<EvalState<'a>, PreambleError> {
    p.validate(inst)?;
    let mut state = EvalState::new(inst, start)?;
    for &step in p.steps() {
        play_step(&mut state, step, rng);
    }
    Ok(state)
}

/// Plays `p` from `start` and returns the final assignment.
pub fn playout<R: Rng + ?Sized>(
    inst: &Instance,
    p: &Preamble,
    start: Assignment,
    rng: &mut R,
) -> Result<Assignment, PreambleError> {
    playout_state(inst, p, start, rng).map(EvalState::into_assignment)
}

/// Length bounds for initial genomes on an `n`-variable instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PreambleBounds {
    /// Minimum number of distinct variables, `ceil(floor_frac * n)`.
    pub distinct_floor: usize,
    /// Maximum initial length, `floor(max_len_frac * n)`, never below the floor.
    pub max_len: usize,
}

impl PreambleBounds {
    pub fn for_instance(num_vars: usize, floor_frac: f64, max_len_frac: f64) -> Self {
        let distinct_floor = ceil_frac(floor_frac, num_vars).min(num_vars);
        let max_len = floor_frac_of(max_len_frac, num_vars).max(distinct_floor);
        PreambleBounds {
            distinct_floor,
            max_len,
        }
    }
}

// The epsilon absorbs representation error such as 0.4 * 10 = 4.000000000000001.
const FRAC_EPS: f64 = 1e-9;

pub(crate) fn ceil_frac(frac: f64, count: usize) -> usize {
    (frac * count as f64 - FRAC_EPS).ceil().max(0.0) as usize
}

pub(crate) fn floor_frac_of(frac: f64, count: usize) -> usize {
    (frac * count as f64 + FRAC_EPS).floor().max(0.0) as usize
}

/// Random genome with length uniform on `[distinct_floor, max_len]` and at
/// least `distinct_floor` distinct variables.
///
/// A random sample of `distinct_floor` distinct variables is placed at random
/// positions; the remaining positions get uniform variables. Actions are
/// uniform over the three codes.
pub fn random_preamble<R: Rng + ?Sized>(
    num_vars: usize,
    max_len: usize,
    distinct_floor: usize,
    rng: &mut R,
) -> Result<Preamble, PreambleError> {
    if distinct_floor > num_vars || distinct_floor > max_len || (num_vars == 0 && max_len > 0) {
        return Err(PreambleError::InfeasibleBounds {
            floor: distinct_floor,
            max_len,
            num_vars,
        });
    }
    let len = rng.gen_range(distinct_floor..=max_len);
    let mut vars: Vec<Option<Var>> = vec![None; len];
    let seeded = rand::seq::index::sample(rng, num_vars.max(1), distinct_floor);
    let slots = rand::seq::index::sample(rng, len.max(1), distinct_floor);
    for (v, pos) in seeded.into_iter().zip(slots) {
        vars[pos] = Some(Var::new(v));
    }
    let steps = vars
        .into_iter()
        .map(|slot| {
            let var = slot.unwrap_or_else(|| Var::new(rng.gen_range(0..num_vars)));
            PreambleStep::new(var, Action::random(rng))
        })
        .collect();
    Ok(Preamble::new(steps))
}
