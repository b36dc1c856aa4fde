mod common;

use common::*;
use preamble_sat::cnf::{Assignment, Instance, Var};
use preamble_sat::sls::{run_heuristic, Budget, HeuristicKind, HeuristicSpec, SearchState};
use preamble_sat::SolverRng;
use rand::{Rng, SeedableRng};

/// Clauses satisfied now that become unsatisfied when `v` flips.
fn naive_break(raw: &RawClauses, values: &[bool], v: usize) -> usize {
    let mut flipped = values.to_vec();
    flipped[v] = !flipped[v];
    raw.iter()
        .filter(|c| c.iter().any(|&l| lit_true(l, values)) && !c.iter().any(|&l| lit_true(l, &flipped)))
        .count()
}

fn naive_delta(raw: &RawClauses, values: &[bool], v: usize) -> i64 {
    let mut flipped = values.to_vec();
    flipped[v] = !flipped[v];
    recount(raw, &flipped) as i64 - recount(raw, values) as i64
}

fn unsat_clauses(raw: &RawClauses, values: &[bool]) -> Vec<usize> {
    (0..raw.len()).filter(|&c| !raw[c].iter().any(|&l| lit_true(l, values))).collect()
}

#[test]
fn unsat_clause_pick_is_uniform() {
    // Four unit clauses on x1..x4 with x1, x2 false: two unsatisfied clauses.
    let inst = Instance::from_dimacs_clauses(4, &[&[1], &[2], &[3], &[4]]).unwrap();
    let spec = HeuristicSpec::new(HeuristicKind::Novelty);
    let s = SearchState::new(&inst, Assignment::new(vec![false, false, true, true]), &spec).unwrap();
    let mut rng = SolverRng::seed_from_u64(300);
    let draws = 20_000;
    let hits = (0..draws).filter(|_| s.pick_unsat_clause(&mut rng).unwrap() == 0).count();
    let freq = hits as f64 / draws as f64;
    assert!((freq - 0.5).abs() < 0.03, "frequency {freq}");
}

#[test]
fn break_counts_match_naive() {
    let mut rng = SolverRng::seed_from_u64(301);
    for _ in 0..50 {
        let inst = random_messy_instance(12, 60, 4, &mut rng);
        let raw = raw_clauses(&inst);
        let a = random_assignment(12, &mut rng);
        let spec = HeuristicSpec::new(HeuristicKind::WalksatTabu);
        let s = SearchState::new(&inst, a.clone(), &spec).unwrap();
        for v in 0..12 {
            assert_eq!(s.eval().break_count(Var::new(v)) as usize, naive_break(&raw, a.values(), v));
        }
    }
}

#[test]
fn walksat_tabu_freebie_against_naive_selector() {
    // States with exactly one unsatisfied clause, so the picked clause is known.
    let mut rng = SolverRng::seed_from_u64(302);
    let spec = HeuristicSpec::new(HeuristicKind::WalksatTabu);
    let mut checked = 0;
    let mut freebies = 0;
    while checked < 1000 {
        let (inst, planted) = Instance::random_planted_kcnf(15, 60, 3, &mut rng);
        let raw = raw_clauses(&inst);
        let mut values = planted.values().to_vec();
        let mut tries = 0;
        while unsat_clauses(&raw, &values).len() != 1 && tries < 40 {
            values = planted.values().to_vec();
            let k = rng.gen_range(1..=3);
            for _ in 0..k {
                let v = rng.gen_range(0..15);
                values[v] = !values[v];
            }
            tries += 1;
        }
        let unsat = unsat_clauses(&raw, &values);
        if unsat.len() != 1 {
            continue;
        }
        let clause_vars: Vec<usize> = raw[unsat[0]].iter().map(|l| (l.unsigned_abs() - 1) as usize).collect();
        let breaks: Vec<usize> = clause_vars.iter().map(|&v| naive_break(&raw, &values, v)).collect();
        let min_break = *breaks.iter().min().unwrap();
        let mut s = SearchState::new(&inst, Assignment::new(values.clone()), &spec).unwrap();
        let chosen = s.select_flip(&spec, &mut rng).unwrap().index();
        assert!(clause_vars.contains(&chosen));
        let chosen_break = naive_break(&raw, &values, chosen);
        // No variable is tabu in a fresh state, so the choice is always a minimum-break variable.
        assert_eq!(chosen_break, min_break);
        if min_break == 0 {
            freebies += 1;
        }
        checked += 1;
    }
    assert!(freebies > 0);
}

#[test]
fn clause_driven_moves_touch_unsat_clauses() {
    let mut rng = SolverRng::seed_from_u64(303);
    for kind in HeuristicKind::ALL.into_iter().filter(|k| k.is_clause_driven()) {
        let spec = HeuristicSpec::new(kind).with_walk_prob(0.2);
        let inst = Instance::random_kcnf(20, 100, 3, &mut rng);
        let raw = raw_clauses(&inst);
        let mut s = SearchState::new(&inst, random_assignment(20, &mut rng), &spec).unwrap();
        for _ in 0..2000 {
            let values = s.eval().assignment().values().to_vec();
            let Some(v) = s.select_flip(&spec, &mut rng) else { break };
            let lit_in_unsat = unsat_clauses(&raw, &values)
                .iter()
                .any(|&c| raw[c].iter().any(|l| (l.unsigned_abs() - 1) as usize == v.index()));
            assert!(lit_in_unsat, "{kind}");
            s.apply_flip(v, &spec);
        }
    }
}

#[test]
fn gsat_and_hsat_pick_a_best_score() {
    let mut rng = SolverRng::seed_from_u64(304);
    for kind in [HeuristicKind::Gsat, HeuristicKind::Hsat] {
        let spec = HeuristicSpec::new(kind);
        let inst = Instance::random_kcnf(15, 70, 3, &mut rng);
        let raw = raw_clauses(&inst);
        let mut s = SearchState::new(&inst, random_assignment(15, &mut rng), &spec).unwrap();
        for _ in 0..300 {
            let values = s.eval().assignment().values().to_vec();
            let deltas: Vec<i64> = (0..15).map(|v| naive_delta(&raw, &values, v)).collect();
            let best = *deltas.iter().max().unwrap();
            let Some(v) = s.select_flip(&spec, &mut rng) else { break };
            assert_eq!(deltas[v.index()], best);
            if kind == HeuristicKind::Hsat {
                let oldest = (0..15)
                    .filter(|&u| deltas[u] == best)
                    .map(|u| s.last_flip_age(Var::new(u)))
                    .min()
                    .unwrap();
                assert_eq!(s.last_flip_age(v), oldest);
            }
            s.apply_flip(v, &spec);
        }
    }
}

#[test]
fn gsat_tabu_avoids_tabu_variables() {
    let mut rng = SolverRng::seed_from_u64(305);
    let spec = HeuristicSpec::new(HeuristicKind::GsatTabu).with_tabu_tenure(5);
    let inst = Instance::random_kcnf(12, 60, 3, &mut rng);
    let mut s = SearchState::new(&inst, random_assignment(12, &mut rng), &spec).unwrap();
    for _ in 0..500 {
        let any_free = (0..12).any(|v| !s.is_tabu(Var::new(v)));
        let Some(v) = s.select_flip(&spec, &mut rng) else { break };
        if any_free {
            assert!(!s.is_tabu(v));
        }
        s.apply_flip(v, &spec);
    }
}

#[test]
fn runs_are_deterministic_per_seed() {
    let mut rng = SolverRng::seed_from_u64(306);
    let inst = Instance::random_kcnf(40, 190, 3, &mut rng);
    let start = random_assignment(40, &mut rng);
    for kind in HeuristicKind::ALL {
        let spec = HeuristicSpec::new(kind);
        let run = |seed| {
            run_heuristic(&spec, &inst, start.clone(), Budget::flips(5000), &mut SolverRng::seed_from_u64(seed)).unwrap()
        };
        let (a, b) = (run(7), run(7));
        assert_eq!(a.best_count, b.best_count, "{kind}");
        assert_eq!(a.best_found_at_flips, b.best_found_at_flips, "{kind}");
        assert_eq!(a.total_flips, b.total_flips, "{kind}");
        assert_eq!(a.final_assignment_of_best, b.final_assignment_of_best, "{kind}");
    }
}

#[test]
fn best_assignment_reproduces_best_count() {
    let mut rng = SolverRng::seed_from_u64(307);
    for kind in HeuristicKind::ALL {
        let inst = Instance::random_kcnf(30, 150, 3, &mut rng);
        let raw = raw_clauses(&inst);
        let start = random_assignment(30, &mut rng);
        let initial = recount(&raw, start.values());
        let rec = run_heuristic(&HeuristicSpec::new(kind), &inst, start, Budget::flips(3000), &mut rng).unwrap();
        assert_eq!(recount(&raw, rec.final_assignment_of_best.values()), rec.best_count, "{kind}");
        assert!(rec.best_count >= initial);
        assert!(rec.total_flips <= 3000);
        assert!(rec.best_found_at_flips <= rec.total_flips);
    }
}

#[test]
fn novelty_solves_small_planted_instances() {
    let mut rng = SolverRng::seed_from_u64(308);
    let (inst, _) = Instance::random_planted_kcnf(20, 85, 3, &mut rng);
    let spec = HeuristicSpec::new(HeuristicKind::Novelty);
    let solved = (0..20)
        .filter(|&seed| {
            let mut r = SolverRng::seed_from_u64(seed);
            let start = Assignment::random(20, &mut r);
            run_heuristic(&spec, &inst, start, Budget::flips(100_000), &mut r).unwrap().best_count == 85
        })
        .count();
    assert!(solved >= 18, "solved {solved}/20");
}

#[test]
fn adaptive_noise_stays_in_unit_interval() {
    let mut rng = SolverRng::seed_from_u64(309);
    let spec = HeuristicSpec::new(HeuristicKind::AdaptNoveltyPlus);
    let inst = Instance::random_kcnf(50, 300, 3, &mut rng);
    let mut s = SearchState::new(&inst, random_assignment(50, &mut rng), &spec).unwrap();
    assert_eq!(s.current_noise(), 0.0);
    let mut raised = false;
    for _ in 0..20_000 {
        let Some(v) = s.select_flip(&spec, &mut rng) else { break };
        let improved = s.apply_flip(v, &spec);
        s.adapt_noise(&spec, improved);
        let noise = s.current_noise();
        assert!((0.0..=1.0).contains(&noise));
        raised |= noise > 0.0;
    }
    assert!(raised, "an unsatisfiable-looking instance should trigger noise increases");
}

#[test]
fn empty_budget_is_rejected() {
    let inst = Instance::from_dimacs_clauses(1, &[&[1]]).unwrap();
    let spec = HeuristicSpec::new(HeuristicKind::Gsat);
    let r = run_heuristic(&spec, &inst, Assignment::all_false(1), Budget::default(), &mut SolverRng::seed_from_u64(0));
    assert!(r.is_err());
}
