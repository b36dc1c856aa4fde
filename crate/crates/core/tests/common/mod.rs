//! Test-only reference evaluators. They work on raw signed-integer clauses
//! and share no code with the library's evaluation paths.
#![allow(dead_code)]

use preamble_sat::cnf::{Assignment, Instance};
use rand::Rng;

pub type RawClauses = Vec<Vec<i64>>;

pub fn raw_clauses(inst: &Instance) -> RawClauses {
    inst.clauses()
        .iter()
        .map(|c| c.iter().map(|l| l.to_dimacs()).collect())
        .collect()
}

pub fn lit_true(lit: i64, values: &[bool]) -> bool {
    let v = values[(lit.unsigned_abs() - 1) as usize];
    if lit > 0 {
        v
    } else {
        !v
    }
}

/// Clause-by-clause recount.
pub fn recount(clauses: &RawClauses, values: &[bool]) -> usize {
    let mut total = 0;
    for clause in clauses {
        let mut sat = false;
        for &lit in clause {
            if lit_true(lit, values) {
                sat = true;
                break;
            }
        }
        if sat {
            total += 1;
        }
    }
    total
}

/// Plain binary-counter enumeration of every assignment.
pub fn enumerate_optimum(num_vars: usize, clauses: &RawClauses) -> usize {
    let mut best = 0;
    let mut values = vec![false; num_vars];
    for bits in 0u64..(1u64 << num_vars) {
        for (i, v) in values.iter_mut().enumerate() {
            *v = bits >> i & 1 == 1;
        }
        best = best.max(recount(clauses, &values));
    }
    best
}

/// Random clauses of width 1..=max_width, allowing repeated and
/// complementary literals.
pub fn random_messy_instance<R: Rng>(n: usize, m: usize, max_width: usize, rng: &mut R) -> Instance {
    let clauses: Vec<Vec<i64>> = (0..m)
        .map(|_| {
            let w = rng.gen_range(1..=max_width);
            (0..w)
                .map(|_| {
                    let v = rng.gen_range(1..=n as i64);
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    let refs: Vec<&[i64]> = clauses.iter().map(|c| c.as_slice()).collect();
    Instance::from_dimacs_clauses(n, &refs).unwrap()
}

pub fn random_assignment<R: Rng>(n: usize, rng: &mut R) -> Assignment {
    Assignment::random(n, rng)
}
