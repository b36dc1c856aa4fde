//! Generational GA over preambles for a fixed instance and heuristic.
//!
//! Fitness is the pair `(S, R)`: `R` is the best satisfied count among
//! playouts of the genome from several random assignments, and `S` is the
//! best count the heuristic reaches when started from that playout. Pairs
//! compare lexicographically, then randomly.
//!
//! Newcomers of a generation are created sequentially from the master rng,
//! each with its own derived seed, and then evaluated in parallel. Results
//! therefore do not depend on the thread count.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Assignment, Instance, Var};
use crate::preamble::{
    playout_state, random_preamble, Action, Preamble, PreambleBounds, PreambleError, PreambleStep,
};
use crate::sls::{run_heuristic, Budget, HeuristicSpec, SlsError};
use crate::SolverRng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaError {
    #[error("invalid GA parameter: {0}")]
    BadParams(String),
    #[error("selection weights must be finite, non-negative, and sum to a positive value")]
    BadWeights,
    #[error("selection needs at least 2 individuals, got {0}")]
    PopulationTooSmall(usize),
    #[error("parent has {distinct} distinct variables, crossover needs {floor}")]
    NoFeasibleMiddle { distinct: usize, floor: usize },
    #[error("individual has not been evaluated")]
    Unevaluated,
    #[error(transparent)]
    Preamble(#[from] PreambleError),
    #[error(transparent)]
    Sls(#[from] SlsError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaParams {
    pub pop_size: usize,
    pub elite_frac: f64,
    pub p_crossover: f64,
    pub p_mutation: f64,
    /// Random assignments each genome is played out from.
    pub eval_starts: usize,
    /// Best-to-worst selection weight ratio.
    pub selection_ratio: f64,
    pub distinct_floor_frac: f64,
    pub init_maxlen_frac: f64,
    pub mutation_frac: f64,
    /// Flip budget of the heuristic inside one fitness evaluation.
    pub per_eval_flips: u64,
}

impl GaParams {
    pub fn new(per_eval_flips: u64) -> Self {
        GaParams {
            pop_size: 50,
            elite_frac: 0.20,
            p_crossover: 0.25,
            p_mutation: 0.75,
            eval_starts: 10,
            selection_ratio: 20.0,
            distinct_floor_frac: 0.4,
            init_maxlen_frac: 1.5,
            mutation_frac: 0.5,
            per_eval_flips,
        }
    }

    pub fn validate(&self) -> Result<(), GaError> {
        let bad = |m: String| Err(GaError::BadParams(m));
        if self.pop_size < 2 {
            return bad(format!("pop_size {} < 2", self.pop_size));
        }
        if (self.p_crossover + self.p_mutation - 1.0).abs() > 1e-9
            || !(0.0..=1.0).contains(&self.p_crossover)
        {
            return bad(format!(
                "p_crossover {} and p_mutation {} must be probabilities summing to 1",
                self.p_crossover, self.p_mutation
            ));
        }
        for (name, v) in [
            ("elite_frac", self.elite_frac),
            ("distinct_floor_frac", self.distinct_floor_frac),
            ("mutation_frac", self.mutation_frac),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return bad(format!("{name} {v} outside (0, 1]"));
            }
        }
        if !(self.init_maxlen_frac > 0.0 && self.init_maxlen_frac.is_finite()) {
            return bad(format!("init_maxlen_frac {} must be positive", self.init_maxlen_frac));
        }
        if self.eval_starts == 0 {
            return bad("eval_starts must be at least 1".into());
        }
        if !(self.selection_ratio >= 1.0 && self.selection_ratio.is_finite()) {
            return bad(format!("selection_ratio {} < 1", self.selection_ratio));
        }
        if self.elite_count() >= self.pop_size {
            return bad(format!("{} elites leave no room in a population of {}", self.elite_count(), self.pop_size));
        }
        Ok(())
    }

    pub fn elite_count(&self) -> usize {
        (self.elite_frac * self.pop_size as f64).round() as usize
    }

    pub fn bounds(&self, num_vars: usize) -> PreambleBounds {
        PreambleBounds::for_instance(num_vars, self.distinct_floor_frac, self.init_maxlen_frac)
    }
}

/// The pair `(S, R)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fitness {
    /// Best count reached by the heuristic from the winning playout.
    #[serde(rename = "S")]
    pub s: usize,
    /// Best count among the genome's playouts.
    #[serde(rename = "R")]
    pub r: usize,
}

impl Fitness {
    fn key(self) -> (usize, usize) {
        (self.s, self.r)
    }
}

/// Lexicographic on `(S, R)`, then a fair coin. `Greater` means `f1` is fitter.
pub fn compare<R: Rng + ?Sized>(f1: Fitness, f2: Fitness, rng: &mut R) -> Ordering {
    match f1.key().cmp(&f2.key()) {
        Ordering::Equal if rng.gen_bool(0.5) => Ordering::Greater,
        Ordering::Equal => Ordering::Less,
        ord => ord,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub genome: Preamble,
    pub fitness: Option<Fitness>,
    /// Winning playout, the heuristic's starting point.
    pub best_assignment: Option<Assignment>,
    /// Seconds since the GA started at which `fitness.s` was first reached.
    pub attained_at_s: f64,
}

impl Individual {
    pub fn new(genome: Preamble) -> Self {
        Individual {
            genome,
            fitness: None,
            best_assignment: None,
            attained_at_s: 0.0,
        }
    }

    pub fn fitness(&self) -> Result<Fitness, GaError> {
        self.fitness.ok_or(GaError::Unevaluated)
    }
}

/// Start time and optional hard cutoff of a GA run.
#[derive(Clone, Copy, Debug)]
pub struct Clock {
    pub start: Instant,
    pub deadline: Option<Instant>,
}

impl Clock {
    pub fn unbounded() -> Self {
        Clock {
            start: Instant::now(),
            deadline: None,
        }
    }

    pub fn with_budget(budget: Duration) -> Self {
        let start = Instant::now();
        Clock {
            start,
            deadline: Some(start + budget),
        }
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// Satisfied counts of each playout, in draw order.
#[derive(Clone, Debug, PartialEq)]
pub struct PlayoutTrace {
    pub starts: Vec<Assignment>,
    pub outcomes: Vec<Assignment>,
    pub counts: Vec<usize>,
    pub winner: usize,
}

/// Computes an individual's fitness and stores it with its winning playout.
pub fn evaluate<R: Rng + ?Sized>(
    ind: &mut Individual,
    inst: &Instance,
    spec: &HeuristicSpec,
    params: &GaParams,
    clock: &Clock,
    rng: &mut R,
) -> Result<Fitness, GaError> {
    evaluate_inner(ind, inst, spec, params, clock, rng, false).map(|(f, _)| f)
}

/// [`evaluate`] that also returns every playout it performed.
pub fn evaluate_traced<R: Rng + ?Sized>(
    ind: &mut Individual,
    inst: &Instance,
    spec: &HeuristicSpec,
    params: &GaParams,
    clock: &Clock,
    rng: &mut R,
) -> Result<(Fitness, PlayoutTrace), GaError> {
    evaluate_inner(ind, inst, spec, params, clock, rng, true).map(|(f, t)| (f, t.unwrap()))
}

fn evaluate_inner<R: Rng + ?Sized>(
    ind: &mut Individual,
    inst: &Instance,
    spec: &HeuristicSpec,
    params: &GaParams,
    clock: &Clock,
    rng: &mut R,
    traced: bool,
) -> Result<(Fitness, Option<PlayoutTrace>), GaError> {
    let n = inst.num_vars();
    let mut trace = traced.then(|| PlayoutTrace {
        starts: Vec::new(),
        outcomes: Vec::new(),
        counts: Vec::new(),
        winner: 0,
    });
    let mut best: Option<(usize, Assignment)> = None;
    let mut ties = 0u32;
    for i in 0..params.eval_starts {
        let start = Assignment::random(n, rng);
        if let Some(t) = trace.as_mut() {
            t.starts.push(start.clone());
        }
        let state = playout_state(inst, &ind.genome, start, rng)?;
        let count = state.satisfied_total();
        let outcome = state.into_assignment();
        if let Some(t) = trace.as_mut() {
            t.outcomes.push(outcome.clone());
            t.counts.push(count);
        }
        let replace = match &best {
            None => {
                ties = 1;
                true
            }
            Some((b, _)) if count > *b => {
                ties = 1;
                true
            }
            Some((b, _)) if count == *b => {
                ties += 1;
                rng.gen_range(0..ties) == 0
            }
            _ => false,
        };
        if replace {
            best = Some((count, outcome));
            if let Some(t) = trace.as_mut() {
                t.winner = i;
            }
        }
    }
    let (r, winner) = best.expect("eval_starts >= 1");
    let h_start = clock.start.elapsed().as_secs_f64();
    let budget = Budget::flips(params.per_eval_flips).with_deadline(clock.deadline);
    let run = run_heuristic(spec, inst, winner.clone(), budget, rng)?;
    let fitness = Fitness { s: run.best_count, r };
    ind.fitness = Some(fitness);
    ind.best_assignment = Some(winner);
    ind.attained_at_s = h_start + run.best_found_at_time;
    Ok((fitness, trace))
}

/// Sorts best-first; exact fitness ties are ordered uniformly at random.
pub fn rank<R: Rng + ?Sized>(pop: Vec<Individual>, rng: &mut R) -> Result<Vec<Individual>, GaError> {
    let mut keyed = pop
        .into_iter()
        .map(|ind| Ok((ind.fitness()?.key(), rng.gen::<u64>(), ind)))
        .collect::<Result<Vec<_>, GaError>>()?;
    keyed.sort_by_key(|k| std::cmp::Reverse((k.0, k.1)));
    Ok(keyed.into_iter().map(|(_, _, ind)| ind).collect())
}

/// Weights linear in rank, from `ratio` for the fittest down to 1.
pub fn selection_weights(pop_size: usize, ratio: f64) -> Result<Vec<f64>, GaError> {
    if pop_size < 2 {
        return Err(GaError::PopulationTooSmall(pop_size));
    }
    let last = (pop_size - 1) as f64;
    Ok((0..pop_size)
        .map(|i| ratio - (ratio - 1.0) * i as f64 / last)
        .collect())
}

/// Roulette-wheel draw proportional to `weights`.
pub fn select_parent<'p, T, R: Rng + ?Sized>(
    population: &'p [T],
    weights: &[f64],
    rng: &mut R,
) -> Result<&'p T, GaError> {
    if population.len() != weights.len() || weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(GaError::BadWeights);
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(GaError::BadWeights);
    }
    let mut x = rng.gen::<f64>() * total;
    for (ind, &w) in population.iter().zip(weights) {
        if x < w {
            return Ok(ind);
        }
        x -= w;
    }
    // Rounding can leave a sliver past the last positive weight.
    let last = weights.iter().rposition(|&w| w > 0.0).unwrap();
    Ok(&population[last])
}

/// Section boundaries of both parents and the resulting children.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossoverOutcome {
    pub children: (Preamble, Preamble),
    /// Half-open middle section `[start, end)` in each parent.
    pub middles: [(usize, usize); 2],
}

/// Two-point crossover whose middle sections each hold exactly
/// `distinct_floor` distinct variables. Children swap middles.
pub fn crossover<R: Rng + ?Sized>(
    p1: &Preamble,
    p2: &Preamble,
    distinct_floor: usize,
    rng: &mut R,
) -> Result<CrossoverOutcome, GaError> {
    let m1 = choose_middle(p1.steps(), distinct_floor, rng)?;
    let m2 = choose_middle(p2.steps(), distinct_floor, rng)?;
    let splice = |base: &[PreambleStep], (s, e): (usize, usize), donor: &[PreambleStep]| {
        let mut out = Vec::with_capacity(base.len() - (e - s) + donor.len());
        out.extend_from_slice(&base[..s]);
        out.extend_from_slice(donor);
        out.extend_from_slice(&base[e..]);
        Preamble::new(out)
    };
    let (a, b) = (p1.steps(), p2.steps());
    let c1 = splice(a, m1, &b[m2.0..m2.1]);
    let c2 = splice(b, m2, &a[m1.0..m1.1]);
    Ok(CrossoverOutcome {
        children: (c1, c2),
        middles: [m1, m2],
    })
}

/// Random `[start, end)` with exactly `floor` distinct variables. The start
/// is uniform over positions that leave enough distinct variables after
/// them; the end is uniform over the ends that hit the count exactly.
fn choose_middle<R: Rng + ?Sized>(
    steps: &[PreambleStep],
    floor: usize,
    rng: &mut R,
) -> Result<(usize, usize), GaError> {
    let len = steps.len();
    if floor == 0 {
        let s = rng.gen_range(0..=len);
        return Ok((s, s));
    }
    // suffix_distinct[i] = distinct variables in steps[i..].
    let mut suffix_distinct = vec![0usize; len + 1];
    let mut seen = HashSet::new();
    for i in (0..len).rev() {
        seen.insert(steps[i].var);
        suffix_distinct[i] = seen.len();
    }
    if suffix_distinct[0] < floor {
        return Err(GaError::NoFeasibleMiddle {
            distinct: suffix_distinct[0],
            floor,
        });
    }
    let last_start = (0..len).rev().find(|&i| suffix_distinct[i] >= floor).unwrap();
    let start = rng.gen_range(0..=last_start);

    let mut seen = HashSet::new();
    let mut min_end = None;
    let mut max_end = len;
    for (j, step) in steps.iter().enumerate().skip(start) {
        if seen.insert(step.var) {
            if seen.len() == floor {
                min_end = Some(j + 1);
            } else if seen.len() == floor + 1 {
                max_end = j;
                break;
            }
        }
    }
    let min_end = min_end.expect("start leaves enough distinct variables");
    Ok((start, rng.gen_range(min_end..=max_end)))
}

/// Positions to mutate: `mutation_frac * len`, rounded half up.
pub fn mutation_count(len: usize, mutation_frac: f64) -> usize {
    crate::preamble::floor_frac_of(mutation_frac, len * 2).div_ceil(2).min(len)
}

/// Mutates `mutation_count(len)` distinct positions, in sequence order. Each
/// gets a fresh variable and action when the distinct-variable floor
/// survives the change, and only a fresh action otherwise.
pub fn mutate<R: Rng + ?Sized>(
    p: &Preamble,
    num_vars: usize,
    distinct_floor: usize,
    mutation_frac: f64,
    rng: &mut R,
) -> Preamble {
    let mut steps = p.steps().to_vec();
    let k = mutation_count(steps.len(), mutation_frac);
    let mut positions = rand::seq::index::sample(rng, steps.len().max(1), k).into_vec();
    positions.sort_unstable();
    let mut counts: HashMap<Var, usize> = HashMap::new();
    for s in &steps {
        *counts.entry(s.var).or_default() += 1;
    }
    let mut distinct = counts.len();
    for pos in positions {
        let old = steps[pos].var;
        let new = Var::new(rng.gen_range(0..num_vars));
        let after = if new == old {
            distinct
        } else {
            distinct - usize::from(counts[&old] == 1) + usize::from(!counts.contains_key(&new))
        };
        let action = Action::random(rng);
        if after >= distinct_floor {
            if new != old {
                let c = counts.get_mut(&old).unwrap();
                *c -= 1;
                if *c == 0 {
                    counts.remove(&old);
                }
                *counts.entry(new).or_default() += 1;
                distinct = after;
            }
            steps[pos] = PreambleStep::new(new, action);
        } else {
            steps[pos].action = action;
        }
    }
    Preamble::new(steps)
}

/// Operator bookkeeping for one generation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenerationStats {
    pub crossovers: usize,
    pub mutations: usize,
    /// Distinct-variable count of every crossover middle section.
    pub middle_distinct: Vec<usize>,
    /// Second children discarded because the population was full.
    pub dropped_children: usize,
}

#[derive(Clone, Debug)]
pub struct GenerationOutcome {
    /// Elites first, then newcomers in creation order.
    pub population: Vec<Individual>,
    pub stats: GenerationStats,
    /// False when the deadline passed before every newcomer was evaluated.
    pub complete: bool,
}

/// Derived seeds give each newcomer an rng stream independent of thread scheduling.
fn evaluate_batch(
    batch: Vec<(Preamble, u64)>,
    inst: &Instance,
    spec: &HeuristicSpec,
    params: &GaParams,
    clock: &Clock,
) -> Result<Vec<Individual>, GaError> {
    batch
        .into_par_iter()
        .map(|(genome, seed)| {
            let mut rng = SolverRng::seed_from_u64(seed);
            let mut ind = Individual::new(genome);
            evaluate(&mut ind, inst, spec, params, clock, &mut rng)?;
            Ok(ind)
        })
        .collect()
}

/// Builds the next population from `ranked` (sorted best-first): copies the
/// elites, then fills the rest by crossover or mutation of wheel-selected
/// parents, and evaluates the newcomers.
pub fn next_generation<R: Rng + ?Sized>(
    ranked: &[Individual],
    inst: &Instance,
    spec: &HeuristicSpec,
    params: &GaParams,
    clock: &Clock,
    rng: &mut R,
) -> Result<GenerationOutcome, GaError> {
    let pop_size = params.pop_size;
    let weights = selection_weights(ranked.len(), params.selection_ratio)?;
    let floor = params.bounds(inst.num_vars()).distinct_floor;
    let elites = params.elite_count().min(ranked.len());

    let mut stats = GenerationStats::default();
    let mut newcomers: Vec<(Preamble, u64)> = Vec::with_capacity(pop_size - elites);
    while elites + newcomers.len() < pop_size {
        if rng.gen_bool(params.p_crossover) {
            stats.crossovers += 1;
            let a = select_parent(ranked, &weights, rng)?;
            let b = select_parent(ranked, &weights, rng)?;
            let out = crossover(&a.genome, &b.genome, floor, rng)?;
            for (parent, (s, e)) in [a, b].into_iter().zip(out.middles) {
                stats
                    .middle_distinct
                    .push(crate::preamble::distinct_vars(&parent.genome.steps()[s..e]));
            }
            let (c1, c2) = out.children;
            newcomers.push((c1, rng.gen()));
            if elites + newcomers.len() < pop_size {
                newcomers.push((c2, rng.gen()));
            } else {
                stats.dropped_children += 1;
            }
        } else {
            stats.mutations += 1;
            let parent = select_parent(ranked, &weights, rng)?;
            let child = mutate(&parent.genome, inst.num_vars(), floor, params.mutation_frac, rng);
            newcomers.push((child, rng.gen()));
        }
    }

    let mut population: Vec<Individual> = ranked[..elites].to_vec();
    population.extend(evaluate_batch(newcomers, inst, spec, params, clock)?);
    Ok(GenerationOutcome {
        population,
        stats,
        complete: !clock.expired(),
    })
}

/// When a GA run ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GaStop {
    /// Wall-clock budget, as in the original protocol.
    Time(Duration),
    /// Fixed number of generations after the initial population.
    Generations(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationSummary {
    pub generation: u32,
    pub best: Fitness,
    pub median: Fitness,
}

#[derive(Clone, Debug)]
pub struct GaRecord {
    /// Fittest individual of the last completed population, if any completed.
    pub best: Option<Individual>,
    /// Seconds from the start until the best `S` value was first reached.
    pub best_time_s: Option<f64>,
    /// Generations completed after the initial population.
    pub generations: u32,
    pub trace: Vec<GenerationSummary>,
    pub evaluations: u64,
}

/// JSON payload of a [`GaRecord`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaRecordJson {
    #[serde(rename = "best_S")]
    pub best_s: Option<usize>,
    #[serde(rename = "best_R")]
    pub best_r: Option<usize>,
    pub best_time_s: Option<f64>,
    pub generations: u32,
    pub evaluations: u64,
    pub preamble: Option<String>,
    pub trace: Vec<GenerationSummary>,
}

impl GaRecord {
    pub fn best_fitness(&self) -> Option<Fitness> {
        self.best.as_ref().and_then(|b| b.fitness)
    }

    pub fn to_json(&self) -> GaRecordJson {
        let f = self.best_fitness();
        GaRecordJson {
            best_s: f.map(|f| f.s),
            best_r: f.map(|f| f.r),
            best_time_s: self.best_time_s,
            generations: self.generations,
            evaluations: self.evaluations,
            preamble: self.best.as_ref().map(|b| b.genome.to_text()),
            trace: self.trace.clone(),
        }
    }
}

/// Earliest time each `S` value was reached by an accepted individual.
fn record_reach(pop: &[Individual], map: &mut BTreeMap<usize, f64>) {
    for ind in pop {
        let s = ind.fitness.unwrap().s;
        let t = map.entry(s).or_insert(f64::INFINITY);
        *t = t.min(ind.attained_at_s);
    }
}

fn summarize(generation: u32, ranked: &[Individual]) -> GenerationSummary {
    GenerationSummary {
        generation,
        best: ranked[0].fitness.unwrap(),
        median: ranked[ranked.len() / 2].fitness.unwrap(),
    }
}

/// Evolves preambles until `stop`, reporting the fittest individual of the
/// last population that was completely filled.
pub fn run_ga<R: Rng + ?Sized>(
    inst: &Instance,
    spec: &HeuristicSpec,
    params: &GaParams,
    stop: GaStop,
    rng: &mut R,
) -> Result<GaRecord, GaError> {
    run_ga_observed(inst, spec, params, stop, rng, |_, _| {})
}

/// [`run_ga`] with a callback invoked on each completed generation,
/// receiving the ranked population and the stats of the step that built it
/// (`None` for the initial population).
pub fn run_ga_observed<R: Rng + ?Sized>(
    inst: &Instance,
    spec: &HeuristicSpec,
    params: &GaParams,
    stop: GaStop,
    rng: &mut R,
    mut observe: impl FnMut(&[Individual], Option<&GenerationStats>),
) -> Result<GaRecord, GaError> {
    params.validate()?;
    spec.validate()?;
    let (clock, max_generations) = match stop {
        GaStop::Time(budget) => (Clock::with_budget(budget), u32::MAX),
        GaStop::Generations(g) => (Clock::unbounded(), g),
    };
    let bounds = params.bounds(inst.num_vars());
    let mut first_reach: BTreeMap<usize, f64> = BTreeMap::new();
    let mut record = GaRecord {
        best: None,
        best_time_s: None,
        generations: 0,
        trace: Vec::new(),
        evaluations: 0,
    };

    let mut initial = Vec::with_capacity(params.pop_size);
    for _ in 0..params.pop_size {
        let genome = random_preamble(inst.num_vars(), bounds.max_len, bounds.distinct_floor, rng)?;
        initial.push((genome, rng.gen::<u64>()));
    }
    let population = evaluate_batch(initial, inst, spec, params, &clock)?;
    record.evaluations += params.pop_size as u64;
    if clock.expired() {
        return Ok(record);
    }
    record_reach(&population, &mut first_reach);
    let mut ranked = rank(population, rng)?;
    record.trace.push(summarize(0, &ranked));
    observe(&ranked, None);

    while record.generations < max_generations && !clock.expired() {
        let outcome = next_generation(&ranked, inst, spec, params, &clock, rng)?;
        record.evaluations += (params.pop_size - params.elite_count()) as u64;
        if !outcome.complete {
            break;
        }
        record_reach(&outcome.population, &mut first_reach);
        ranked = rank(outcome.population, rng)?;
        record.generations += 1;
        record.trace.push(summarize(record.generations, &ranked));
        observe(&ranked, Some(&outcome.stats));
    }

    let best = ranked.swap_remove(0);
    let best_s = best.fitness.unwrap().s;
    record.best_time_s = first_reach
        .range(best_s..)
        .map(|(_, &t)| t)
        .reduce(f64::min);
    record.best = Some(best);
    Ok(record)
}
