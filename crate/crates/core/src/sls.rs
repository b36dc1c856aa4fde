//! Stochastic local-search heuristics and the timed run loop.
//!
//! Nine heuristics share one [`SearchState`]. The GSAT family scores every
//! variable by `make - break`; the WalkSAT family works on a randomly picked
//! unsatisfied clause. Novelty and its descendants rank the clause's
//! variables by `make - break` with flip age as tie-breaker.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Assignment, CnfError, EvalState, Instance, Var};

/// Clause re-draws walksat-tabu makes when every variable of the picked
/// clause is tabu, before it ignores tabu status.
pub const TABU_RETRIES: usize = 10;

/// Time budgets are polled once every this many flips.
pub const TIME_CHECK_INTERVAL: u64 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeuristicKind {
    Gsat,
    Gwsat,
    Hsat,
    Hwsat,
    GsatTabu,
    WalksatTabu,
    Novelty,
    #[serde(rename = "novelty+")]
    NoveltyPlus,
    #[serde(rename = "adaptnovelty+")]
    AdaptNoveltyPlus,
}

impl HeuristicKind {
    pub const ALL: [HeuristicKind; 9] = [
        HeuristicKind::Gsat,
        HeuristicKind::Gwsat,
        HeuristicKind::Hsat,
        HeuristicKind::Hwsat,
        HeuristicKind::GsatTabu,
        HeuristicKind::WalksatTabu,
        HeuristicKind::Novelty,
        HeuristicKind::NoveltyPlus,
        HeuristicKind::AdaptNoveltyPlus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HeuristicKind::Gsat => "gsat",
            HeuristicKind::Gwsat => "gwsat",
            HeuristicKind::Hsat => "hsat",
            HeuristicKind::Hwsat => "hwsat",
            HeuristicKind::GsatTabu => "gsat-tabu",
            HeuristicKind::WalksatTabu => "walksat-tabu",
            HeuristicKind::Novelty => "novelty",
            HeuristicKind::NoveltyPlus => "novelty+",
            HeuristicKind::AdaptNoveltyPlus => "adaptnovelty+",
        }
    }

    /// Whether every move flips a variable of a picked unsatisfied clause.
    pub fn is_clause_driven(self) -> bool {
        matches!(
            self,
            HeuristicKind::WalksatTabu
                | HeuristicKind::Novelty
                | HeuristicKind::NoveltyPlus
                | HeuristicKind::AdaptNoveltyPlus
        )
    }

    fn uses_tabu(self) -> bool {
        matches!(self, HeuristicKind::GsatTabu | HeuristicKind::WalksatTabu)
    }
}

impl fmt::Display for HeuristicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HeuristicKind {
    type Err = SlsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        HeuristicKind::ALL
            .into_iter()
            .find(|k| k.name() == lower)
            .ok_or_else(|| SlsError::UnknownHeuristic(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SlsError {
    #[error("unknown heuristic `{0}`")]
    UnknownHeuristic(String),
    #[error("{name} = {value} is outside [0, 1]")]
    BadProbability { name: &'static str, value: f64 },
    #[error("budget must limit flips or time")]
    UnboundedBudget,
    #[error("every clause is satisfied")]
    AllSatisfied,
    #[error(transparent)]
    Cnf(#[from] CnfError),
}

/// Heuristic choice and parameters. Only the fields relevant to `kind` are read.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeuristicSpec {
    pub kind: HeuristicKind,
    /// Novelty noise: probability of taking the second-best variable.
    pub noise: f64,
    /// Random-walk probability (gwsat, hwsat, novelty+, adaptnovelty+).
    pub walk_prob: f64,
    /// Tabu tenure in flips; `None` means `1 + n / 100`.
    pub tabu_tenure: Option<u64>,
    pub adapt_theta: f64,
    pub adapt_phi: f64,
}

impl HeuristicSpec {
    pub fn new(kind: HeuristicKind) -> Self {
        let walk_prob = match kind {
            HeuristicKind::Gwsat | HeuristicKind::Hwsat => 0.5,
            _ => 0.01,
        };
        HeuristicSpec {
            kind,
            noise: 0.5,
            walk_prob,
            tabu_tenure: None,
            adapt_theta: 1.0 / 6.0,
            adapt_phi: 0.2,
        }
    }

    pub fn with_noise(mut self, noise: f64) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_walk_prob(mut self, wp: f64) -> Self {
        self.walk_prob = wp;
        self
    }

    pub fn with_tabu_tenure(mut self, tenure: u64) -> Self {
        self.tabu_tenure = Some(tenure);
        self
    }

    pub fn validate(&self) -> Result<(), SlsError> {
        for (name, value) in [
            ("noise", self.noise),
            ("walk_prob", self.walk_prob),
            ("adapt_theta", self.adapt_theta),
            ("adapt_phi", self.adapt_phi),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(SlsError::BadProbability { name, value });
            }
        }
        Ok(())
    }

    pub fn tenure_for(&self, num_vars: usize) -> u64 {
        self.tabu_tenure.unwrap_or(1 + num_vars as u64 / 100).max(1)
    }
}

/// Stopping rule for one heuristic run. At least one limit must be set.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Budget {
    pub max_flips: Option<u64>,
    pub max_time: Option<Duration>,
    /// Absolute cutoff shared with an enclosing experiment.
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn flips(max_flips: u64) -> Self {
        Budget {
            max_flips: Some(max_flips),
            ..Default::default()
        }
    }

    pub fn time(max_time: Duration) -> Self {
        Budget {
            max_time: Some(max_time),
            ..Default::default()
        }
    }

    pub fn with_deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = match (self.deadline, deadline) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }

    fn is_bounded(&self) -> bool {
        self.max_flips.is_some() || self.max_time.is_some() || self.deadline.is_some()
    }
}

/// Outcome of one run. `best_*` refer to the first time the best count was seen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub best_count: usize,
    #[serde(rename = "best_time_s")]
    pub best_found_at_time: f64,
    #[serde(rename = "best_flips")]
    pub best_found_at_flips: u64,
    pub total_flips: u64,
    #[serde(skip)]
    pub final_assignment_of_best: Assignment,
}

/// Mutable search state for one run.
pub struct SearchState<'a> {
    eval: EvalState<'a>,
    /// Flip number of each variable's most recent flip; 0 when never flipped.
    last_flip: Vec<u64>,
    flips: u64,
    /// A variable is tabu while `flips < tabu_until[v]`.
    tabu_until: Vec<u64>,
    tenure: u64,
    best_count: usize,
    best_flips: u64,
    best_time: Duration,
    started: Instant,
    current_noise: f64,
    last_improvement_flip: u64,
    best_snapshot: BestSnapshot,
    /// Scratch buffer for clause variable lists.
    scratch: Vec<Var>,
}

/// Recovers the best assignment without copying it on every improvement.
/// Flips since the last improvement are logged; once the log outgrows `n`
/// the assignment at the improvement is materialized.
struct BestSnapshot {
    trail: Vec<Var>,
    pending: bool,
    saved: Assignment,
}

impl<'a> SearchState<'a> {
    pub fn new(inst: &'a Instance, start: Assignment, spec: &HeuristicSpec) -> Result<Self, SlsError> {
        spec.validate()?;
        let eval = EvalState::new(inst, start)?;
        let n = inst.num_vars();
        let best_count = eval.satisfied_total();
        let saved = eval.assignment().clone();
        Ok(SearchState {
            last_flip: vec![0; n],
            flips: 0,
            tabu_until: vec![0; n],
            tenure: spec.tenure_for(n),
            best_count,
            best_flips: 0,
            best_time: Duration::ZERO,
            started: Instant::now(),
            current_noise: 0.0,
            last_improvement_flip: 0,
            best_snapshot: BestSnapshot {
                trail: Vec::new(),
                pending: false,
                saved,
            },
            scratch: Vec::new(),
            eval,
        })
    }

    pub fn eval(&self) -> &EvalState<'a> {
        &self.eval
    }

    pub fn flips_done(&self) -> u64 {
        self.flips
    }

    pub fn best_count(&self) -> usize {
        self.best_count
    }

    pub fn best_found_at_flips(&self) -> u64 {
        self.best_flips
    }

    pub fn current_noise(&self) -> f64 {
        self.current_noise
    }

    pub fn set_current_noise(&mut self, noise: f64) {
        self.current_noise = noise.clamp(0.0, 1.0);
    }

    pub fn last_flip_age(&self, var: Var) -> u64 {
        self.last_flip[var.index()]
    }

    pub fn is_tabu(&self, var: Var) -> bool {
        self.flips < self.tabu_until[var.index()]
    }

    pub fn tenure(&self) -> u64 {
        self.tenure
    }

    pub fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }

    /// Uniformly random unsatisfied clause.
    pub fn pick_unsat_clause<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize, SlsError> {
        let unsat = self.eval.unsatisfied().as_slice();
        if unsat.is_empty() {
            return Err(SlsError::AllSatisfied);
        }
        Ok(unsat[rng.gen_range(0..unsat.len())] as usize)
    }

    /// Chooses the next variable to flip, or `None` when nothing is unsatisfied.
    pub fn select_flip<R: Rng + ?Sized>(&mut self, spec: &HeuristicSpec, rng: &mut R) -> Option<Var> {
        if self.eval.unsatisfied().is_empty() {
            return None;
        }
        let var = match spec.kind {
            HeuristicKind::Gsat => self.gsat_move(false, false, rng),
            HeuristicKind::Hsat => self.gsat_move(true, false, rng),
            HeuristicKind::GsatTabu => self.gsat_move(false, true, rng),
            HeuristicKind::Gwsat | HeuristicKind::Hwsat => {
                if rng.gen_bool(spec.walk_prob) {
                    let c = self.pick_unsat_clause(rng).ok()?;
                    self.random_clause_var(c, rng)
                } else {
                    self.gsat_move(spec.kind == HeuristicKind::Hwsat, false, rng)
                }
            }
            HeuristicKind::WalksatTabu => self.walksat_tabu_move(rng),
            HeuristicKind::Novelty => {
                let c = self.pick_unsat_clause(rng).ok()?;
                self.novelty_move(c, spec.noise, rng)
            }
            HeuristicKind::NoveltyPlus | HeuristicKind::AdaptNoveltyPlus => {
                let noise = if spec.kind == HeuristicKind::AdaptNoveltyPlus {
                    self.current_noise
                } else {
                    spec.noise
                };
                let c = self.pick_unsat_clause(rng).ok()?;
                if rng.gen_bool(spec.walk_prob) {
                    self.random_clause_var(c, rng)
                } else {
                    self.novelty_move(c, noise, rng)
                }
            }
        };
        Some(var)
    }

    /// Flips `var` and updates ages, tabu status, and best-so-far tracking.
    /// Returns whether the best count improved.
    pub fn apply_flip(&mut self, var: Var, spec: &HeuristicSpec) -> bool {
        self.eval.flip_unchecked(var);
        self.flips += 1;
        self.last_flip[var.index()] = self.flips;
        if spec.kind.uses_tabu() {
            self.tabu_until[var.index()] = self.flips + self.tenure;
        }
        let snap = &mut self.best_snapshot;
        if self.eval.satisfied_total() > self.best_count {
            self.best_count = self.eval.satisfied_total();
            self.best_flips = self.flips;
            self.best_time = self.started.elapsed();
            snap.trail.clear();
            snap.pending = true;
            true
        } else {
            if snap.pending {
                snap.trail.push(var);
                if snap.trail.len() > self.eval.instance().num_vars() {
                    snap.saved = rewind(self.eval.assignment(), &snap.trail);
                    snap.trail.clear();
                    snap.pending = false;
                }
            }
            false
        }
    }

    /// Adjusts the adaptive noise after a flip: raise it after `theta * m`
    /// flips without improvement of the best count, lower it on improvement.
    pub fn adapt_noise(&mut self, spec: &HeuristicSpec, improved: bool) {
        let phi = spec.adapt_phi;
        if improved {
            self.current_noise -= self.current_noise * phi / 2.0;
            self.last_improvement_flip = self.flips;
        } else {
            let window = spec.adapt_theta * self.eval.instance().num_clauses() as f64;
            if (self.flips - self.last_improvement_flip) as f64 > window {
                self.current_noise += (1.0 - self.current_noise) * phi;
                self.last_improvement_flip = self.flips;
            }
        }
        self.current_noise = self.current_noise.clamp(0.0, 1.0);
    }

    /// Assignment at which the best count was first reached.
    pub fn best_assignment(&self) -> Assignment {
        let snap = &self.best_snapshot;
        if snap.pending {
            rewind(self.eval.assignment(), &snap.trail)
        } else {
            snap.saved.clone()
        }
    }

    fn into_record(self) -> RunRecord {
        RunRecord {
            best_count: self.best_count,
            best_found_at_time: self.best_time.as_secs_f64(),
            best_found_at_flips: self.best_flips,
            total_flips: self.flips,
            final_assignment_of_best: self.best_assignment(),
        }
    }

    fn clause_vars_into_scratch(&mut self, clause: usize) {
        self.scratch.clear();
        self.scratch.extend(
            self.eval
                .instance()
                .clause_vars(clause)
                .iter()
                .map(|o| Var::new(o.index as usize)),
        );
    }

    fn random_clause_var<R: Rng + ?Sized>(&mut self, clause: usize, rng: &mut R) -> Var {
        let vars = self.eval.instance().clause_vars(clause);
        Var::new(vars[rng.gen_range(0..vars.len())].index as usize)
    }

    /// Argmax of `make - break` over all variables. `by_age` breaks score
    /// ties towards the least recently flipped variable; remaining ties are
    /// uniform. With `tabu`, tabu variables are skipped unless all are tabu.
    fn gsat_move<R: Rng + ?Sized>(&self, by_age: bool, tabu: bool, rng: &mut R) -> Var {
        let n = self.eval.instance().num_vars();
        let mut pick = |respect_tabu: bool| {
            let mut best: Option<(i64, u64)> = None;
            let mut chosen = None;
            let mut ties = 0u32;
            for v in (0..n).map(Var::new) {
                if respect_tabu && self.is_tabu(v) {
                    continue;
                }
                let key = (self.eval.delta(v), if by_age { self.last_flip_age(v) } else { 0 });
                let better = match best {
                    None => true,
                    Some((d, age)) => key.0 > d || (key.0 == d && key.1 < age),
                };
                if better {
                    best = Some(key);
                    chosen = Some(v);
                    ties = 1;
                } else if best == Some(key) {
                    ties += 1;
                    if rng.gen_range(0..ties) == 0 {
                        chosen = Some(v);
                    }
                }
            }
            chosen
        };
        if tabu {
            if let Some(v) = pick(true) {
                return v;
            }
        }
        pick(false).expect("instance has at least one variable")
    }

    fn walksat_tabu_move<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Var {
        for attempt in 0..=TABU_RETRIES {
            let clause = self.pick_unsat_clause(rng).expect("caller checked for unsatisfied clauses");
            self.clause_vars_into_scratch(clause);
            if let Some(v) = uniform_min_by(&self.scratch, rng, |v| Some(self.eval.break_count(v)))
                .filter(|&v| self.eval.break_count(v) == 0)
            {
                return v;
            }
            let ignore_tabu = attempt == TABU_RETRIES;
            let choice = uniform_min_by(&self.scratch, rng, |v| {
                (ignore_tabu || !self.is_tabu(v)).then(|| self.eval.break_count(v))
            });
            if let Some(v) = choice {
                return v;
            }
        }
        unreachable!("the final attempt ignores tabu status")
    }

    /// Novelty on a given clause: take the best variable unless it is the
    /// clause's most recently flipped one, in which case take the second
    /// best with probability `noise`.
    fn novelty_move<R: Rng + ?Sized>(&mut self, clause: usize, noise: f64, rng: &mut R) -> Var {
        self.clause_vars_into_scratch(clause);
        let vars = &self.scratch;
        if vars.len() == 1 {
            return vars[0];
        }
        // Ranked by score, then older flip first.
        let rank = |v: Var| (self.eval.delta(v), std::cmp::Reverse(self.last_flip_age(v)));
        let mut best = vars[0];
        let mut second: Option<Var> = None;
        for &v in &vars[1..] {
            if rank(v) > rank(best) {
                second = Some(best);
                best = v;
            } else if second.is_none_or(|s| rank(v) > rank(s)) {
                second = Some(v);
            }
        }
        let second = second.expect("clause has at least two variables");
        let youngest = vars
            .iter()
            .copied()
            .max_by_key(|&v| self.last_flip_age(v))
            .filter(|&v| self.last_flip_age(v) > 0);
        if youngest != Some(best) {
            best
        } else if rng.gen_bool(noise) {
            second
        } else {
            best
        }
    }
}

fn rewind(current: &Assignment, trail: &[Var]) -> Assignment {
    let mut out = current.clone();
    for &v in trail.iter().rev() {
        out.flip(v);
    }
    out
}

/// Uniformly random element among those with the smallest key. Elements
/// with key `None` are excluded.
fn uniform_min_by<R: Rng + ?Sized>(
    vars: &[Var],
    rng: &mut R,
    key: impl Fn(Var) -> Option<u32>,
) -> Option<Var> {
    let mut best: Option<u32> = None;
    let mut chosen = None;
    let mut ties = 0u32;
    for &v in vars {
        let Some(k) = key(v) else { continue };
        if best.is_none_or(|b| k < b) {
            best = Some(k);
            chosen = Some(v);
            ties = 1;
        } else if best == Some(k) {
            ties += 1;
            if rng.gen_range(0..ties) == 0 {
                chosen = Some(v);
            }
        }
    }
    chosen
}

/// Runs `spec` from `start` until the budget is spent or every clause is
/// satisfied, reporting the best count seen and when it was first reached.
pub fn run_heuristic<R: Rng + ?Sized>(
    spec: &HeuristicSpec,
    inst: &Instance,
    start: Assignment,
    budget: Budget,
    rng: &mut R,
) -> Result<RunRecord, SlsError> {
    if !budget.is_bounded() {
        return Err(SlsError::UnboundedBudget);
    }
    let mut state = SearchState::new(inst, start, spec)?;
    let deadline = budget
        .max_time
        .map(|t| state.started + t)
        .into_iter()
        .chain(budget.deadline)
        .min();
    let max_flips = budget.max_flips.unwrap_or(u64::MAX);
    let adaptive = spec.kind == HeuristicKind::AdaptNoveltyPlus;

    if deadline.is_some_and(|d| Instant::now() >= d) {
        return Ok(state.into_record());
    }
    while state.flips < max_flips {
        let Some(var) = state.select_flip(spec, rng) else {
            break;
        };
        let improved = state.apply_flip(var, spec);
        if adaptive {
            state.adapt_noise(spec, improved);
        }
        if state.flips % TIME_CHECK_INTERVAL == 0 && deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
    }
    Ok(state.into_record())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::satisfied_count_naive;
    use crate::SolverRng;
    use rand::SeedableRng;

    fn inst(n: usize, clauses: &[&[i64]]) -> Instance {
        Instance::from_dimacs_clauses(n, clauses).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for k in HeuristicKind::ALL {
            assert_eq!(k.name().parse::<HeuristicKind>().unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.name()));
        }
        assert!("saps".parse::<HeuristicKind>().is_err());
    }

    #[test]
    fn spec_validation() {
        let spec = HeuristicSpec::new(HeuristicKind::Novelty).with_noise(1.5);
        assert!(matches!(spec.validate(), Err(SlsError::BadProbability { name: "noise", .. })));
        assert_eq!(HeuristicSpec::new(HeuristicKind::WalksatTabu).tenure_for(250), 3);
        assert_eq!(HeuristicSpec::new(HeuristicKind::WalksatTabu).tenure_for(5), 1);
        assert_eq!(
            HeuristicSpec::new(HeuristicKind::WalksatTabu).with_tabu_tenure(0).tenure_for(5),
            1
        );
    }

    #[test]
    fn pick_unsat_examples() {
        let i = inst(2, &[&[1], &[2]]);
        let spec = HeuristicSpec::new(HeuristicKind::Novelty);
        let mut rng = SolverRng::seed_from_u64(1);
        let s = SearchState::new(&i, Assignment::new(vec![true, false]), &spec).unwrap();
        assert_eq!(s.pick_unsat_clause(&mut rng).unwrap(), 1);
        let sat = SearchState::new(&i, Assignment::new(vec![true, true]), &spec).unwrap();
        assert_eq!(sat.pick_unsat_clause(&mut rng), Err(SlsError::AllSatisfied));
    }

    #[test]
    fn gsat_flips_unique_improving_var() {
        let i = inst(1, &[&[1]]);
        let spec = HeuristicSpec::new(HeuristicKind::Gsat);
        let mut rng = SolverRng::seed_from_u64(1);
        let mut s = SearchState::new(&i, Assignment::new(vec![false]), &spec).unwrap();
        assert_eq!(s.select_flip(&spec, &mut rng), Some(Var::new(0)));
        s.apply_flip(Var::new(0), &spec);
        assert_eq!(s.select_flip(&spec, &mut rng), None);
    }

    #[test]
    fn novelty_takes_second_best_when_best_is_youngest() {
        // Clause (x1 ∨ x2); x2 flipped most recently and scores best.
        let i = inst(2, &[&[1, 2], &[2], &[2, -1]]);
        let spec = HeuristicSpec::new(HeuristicKind::Novelty).with_noise(1.0);
        let mut rng = SolverRng::seed_from_u64(1);
        let mut s = SearchState::new(&i, Assignment::new(vec![false, true]), &spec).unwrap();
        s.apply_flip(Var::new(1), &spec);
        assert_eq!(s.eval().unsatisfied().as_slice(), &[0, 1]);
        // Clause 0 is the one with both variables.
        let chosen = s.novelty_move(0, 1.0, &mut rng);
        assert!(s.eval().delta(Var::new(1)) > s.eval().delta(Var::new(0)));
        assert_eq!(chosen, Var::new(0));
        // Noise 0 always takes the best.
        assert_eq!(s.novelty_move(0, 0.0, &mut rng), Var::new(1));
    }

    #[test]
    fn adapt_noise_formula() {
        let i = inst(1, &[&[1], &[-1]]);
        let spec = HeuristicSpec::new(HeuristicKind::AdaptNoveltyPlus);
        let mut s = SearchState::new(&i, Assignment::new(vec![true]), &spec).unwrap();
        // theta * m = 1/3, so one stagnant flip triggers an increase.
        s.flips = 1;
        s.adapt_noise(&spec, false);
        assert!((s.current_noise() - 0.2).abs() < 1e-12);
        s.adapt_noise(&spec, true);
        assert!((s.current_noise() - 0.18).abs() < 1e-12);
        let mut prev = s.current_noise();
        for f in 2..500 {
            s.flips = f;
            s.adapt_noise(&spec, false);
            assert!(s.current_noise() >= prev && s.current_noise() <= 1.0);
            prev = s.current_noise();
        }
        assert!(prev > 0.999);
    }

    #[test]
    fn satisfied_start_stops_immediately() {
        let i = inst(2, &[&[1], &[2]]);
        for kind in HeuristicKind::ALL {
            let spec = HeuristicSpec::new(kind);
            let mut rng = SolverRng::seed_from_u64(3);
            let r = run_heuristic(&spec, &i, Assignment::new(vec![true, true]), Budget::flips(100), &mut rng)
                .unwrap();
            assert_eq!((r.best_count, r.total_flips), (2, 0));
        }
    }

    #[test]
    fn contradiction_pair_reaches_one() {
        let i = inst(1, &[&[1], &[-1]]);
        for kind in HeuristicKind::ALL {
            let spec = HeuristicSpec::new(kind);
            let mut rng = SolverRng::seed_from_u64(3);
            let r = run_heuristic(&spec, &i, Assignment::new(vec![false]), Budget::flips(1), &mut rng).unwrap();
            assert_eq!(r.best_count, 1);
            assert_eq!(r.best_found_at_flips, 0);
        }
    }

    #[test]
    fn zero_flip_budget_reports_start() {
        let mut rng = SolverRng::seed_from_u64(9);
        let i = Instance::random_kcnf(15, 70, 3, &mut rng);
        let start = Assignment::random(15, &mut rng);
        let naive = satisfied_count_naive(&i, &start).unwrap();
        let spec = HeuristicSpec::new(HeuristicKind::Novelty);
        let r = run_heuristic(&spec, &i, start.clone(), Budget::flips(0), &mut rng).unwrap();
        assert_eq!(r.best_count, naive);
        assert_eq!(r.final_assignment_of_best, start);
        assert_eq!(
            run_heuristic(&spec, &i, start, Budget::default(), &mut rng),
            Err(SlsError::UnboundedBudget)
        );
    }

    #[test]
    fn best_assignment_matches_best_count() {
        let mut rng = SolverRng::seed_from_u64(21);
        let i = Instance::random_kcnf(30, 160, 3, &mut rng);
        for kind in HeuristicKind::ALL {
            let spec = HeuristicSpec::new(kind);
            for _ in 0..5 {
                let start = Assignment::random(30, &mut rng);
                let r = run_heuristic(&spec, &i, start, Budget::flips(2_000), &mut rng).unwrap();
                assert_eq!(satisfied_count_naive(&i, &r.final_assignment_of_best).unwrap(), r.best_count, "{kind}");
            }
        }
    }

    #[test]
    fn time_budget_stops() {
        let mut rng = SolverRng::seed_from_u64(2);
        let i = Instance::random_kcnf(40, 400, 3, &mut rng);
        let spec = HeuristicSpec::new(HeuristicKind::Novelty);
        let t = Instant::now();
        let r = run_heuristic(&spec, &i, Assignment::random(40, &mut rng), Budget::time(Duration::from_millis(50)), &mut rng)
            .unwrap();
        assert!(t.elapsed() < Duration::from_secs(2));
        assert!(r.best_found_at_time <= t.elapsed().as_secs_f64());
        assert!(r.total_flips > 0);
    }

    #[test]
    fn record_json_field_names() {
        let r = RunRecord {
            best_count: 3,
            best_found_at_time: 0.5,
            best_found_at_flips: 7,
            total_flips: 10,
            final_assignment_of_best: Assignment::all_false(1),
        };
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"best_count":3,"best_time_s":0.5,"best_flips":7,"total_flips":10}"#
        );
    }
}
