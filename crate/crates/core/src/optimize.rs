//! Multistart minimization of the equal-weight objective
//! `prod_j max{1, max_{arc j} |Q|}` over configurations of `n` points.
//!
//! The objective is invariant under rotation, so one point is pinned at angle
//! 0 and the remaining `n - 1` angles are free. Arc maxima equal to 1 put the
//! minimizer on kinks of `max{1, .}`, which rules out gradient methods; the
//! local search is a restarted Nelder-Mead simplex on the log-objective.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chebyshev::{cstar, extremal_configuration};
use crate::error::{Error, Result};
use crate::geometry::arcs::log_objective_raw;
use crate::geometry::config::reduce_angle;
use crate::geometry::{objective, CircleConfiguration};

pub const DEFAULT_STEP_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 100_000;

/// Initial simplex edges, in radians, for successive restarts without gain.
/// A run has converged once a restart at each edge gains less than the step
/// tolerance.
const SIMPLEX_STEPS: [f64; 3] = [0.1, 1e-2, 1e-3];
/// Simplex diameter at which one Nelder-Mead run stops.
const SIMPLEX_COLLAPSE: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_config: CircleConfiguration,
    /// `objective(best_config)`.
    pub best_objective: f64,
    pub starts: usize,
    pub iterations_total: usize,
    /// Fraction of local runs that met the step tolerance within the budget.
    pub converged_fraction: f64,
    pub seed: Option<u64>,
    /// Set when some local run stopped at `max_iterations`.
    pub iteration_limit: bool,
    /// Local optima whose objectives differ by more than `1e-8`.
    pub distinct_local_optima: usize,
}

/// Equal-weight log-objective of the point at 0 together with `free`.
fn gauge_log_objective(free: &[f64], scratch: &mut Vec<f64>, weights: &[f64]) -> f64 {
    scratch.clear();
    scratch.push(0.0);
    scratch.extend(free.iter().map(|&a| reduce_angle(a)));
    scratch.sort_by(|a, b| a.total_cmp(b));
    log_objective_raw(scratch, weights)
}

/// Offsets of the other points from the point that precedes the largest gap,
/// listed counter-clockwise. The choice depends only on the shape of the
/// configuration, so rotated starts give the same offsets.
fn gauge_offsets(c: &CircleConfiguration) -> Vec<f64> {
    let a = c.angles();
    let n = a.len();
    let gap = |j: usize| reduce_angle(a[(j + 1) % n] - a[j]);
    let gap = |j: usize| if n == 1 { TAU } else { gap(j) };
    let pinned = (0..n)
        .max_by(|&i, &j| gap(i).total_cmp(&gap(j)).then(j.cmp(&i)))
        .expect("nonempty configuration");
    (1..n)
        .map(|k| reduce_angle(a[(pinned + k) % n] - a[pinned]))
        .collect()
}

struct LocalRun {
    config: CircleConfiguration,
    iterations: usize,
    converged: bool,
}

/// Nelder-Mead from `x0` with edge `step`, until the simplex collapses, its
/// values agree to `ftol`, or `budget` iterations pass.
fn nelder_mead(
    f: &mut impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    ftol: f64,
    budget: usize,
) -> (Vec<f64>, f64, usize) {
    let d = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = f(&x);
        simplex.push((x, v));
    }
    let mut iterations = 0;
    while iterations < budget {
        // stable sort keeps the incumbent first among ties
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[d].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter <= SIMPLEX_COLLAPSE || (worst - best <= ftol && diameter <= 1e-6) {
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; d];
        for (x, _) in &simplex[..d] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / d as f64;
            }
        }
        let toward = |t: f64, from: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(from)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let worst_x = simplex[d].0.clone();
        let xr = toward(1.0, &worst_x);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            let xe = toward(2.0, &worst_x);
            let fe = f(&xe);
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst {
            let xc = toward(0.5, &worst_x);
            let fc = f(&xc);
            (xc, fc)
        } else {
            let xc = toward(-0.5, &worst_x);
            let fc = f(&xc);
            (xc, fc)
        };
        if fc < fr.min(worst) {
            simplex[d] = (xc, fc);
            continue;
        }
        let x_best = simplex[0].0.clone();
        for (x, v) in simplex[1..].iter_mut() {
            for (xi, bi) in x.iter_mut().zip(&x_best) {
                *xi = bi + 0.5 * (*xi - bi);
            }
            *v = f(x);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, v) = simplex.swap_remove(0);
    (x, v, iterations)
}

fn local_run(start: &CircleConfiguration, step_tolerance: f64, max_iterations: usize) -> LocalRun {
    let n = start.len();
    let weights = vec![1.0 / n as f64; n];
    let mut scratch = Vec::with_capacity(n);
    let mut f = |x: &[f64]| gauge_log_objective(x, &mut scratch, &weights);

    let mut x = gauge_offsets(start);
    let mut value = f(&x);
    let mut iterations = 0;
    let mut converged = x.is_empty();
    let mut stalls = 0;
    while !converged && iterations < max_iterations {
        let (next, next_value, used) = nelder_mead(
            &mut f,
            &x,
            SIMPLEX_STEPS[stalls],
            step_tolerance,
            max_iterations - iterations,
        );
        iterations += used;
        let gain = value - next_value;
        if next_value <= value {
            x = next;
            value = next_value;
        }
        stalls = if gain < step_tolerance { stalls + 1 } else { 0 };
        converged = stalls == SIMPLEX_STEPS.len();
    }

    let mut angles = vec![0.0];
    angles.extend(x.iter().map(|&a| reduce_angle(a)));
    let config = CircleConfiguration::equal_weights(&angles).expect("n points of weight 1/n");
    LocalRun {
        config,
        iterations,
        converged,
    }
}

/// Derivative-free descent from `start` over its `n` angles, with one point
/// pinned at angle 0 in the returned configuration.
///
/// The result never has a larger objective than `start`. A run that reaches
/// `max_iterations` returns its best point with `iteration_limit` set.
pub fn local_minimize(
    start: &CircleConfiguration,
    step_tolerance: f64,
    max_iterations: usize,
) -> Result<OptimizationResult> {
    if start.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    if !start.is_equal_weight() {
        return Err(Error::Assertion(
            "local_minimize needs an equal-weight configuration".into(),
        ));
    }
    let run = local_run(start, step_tolerance, max_iterations);
    let (best_config, best_objective) = descended(start, run.config);
    Ok(OptimizationResult {
        best_config,
        best_objective,
        starts: 1,
        iterations_total: run.iterations,
        converged_fraction: if run.converged { 1.0 } else { 0.0 },
        seed: None,
        iteration_limit: !run.converged,
        distinct_local_optima: 1,
    })
}

/// The candidate, unless rounding left it above the start.
fn descended(
    start: &CircleConfiguration,
    candidate: CircleConfiguration,
) -> (CircleConfiguration, f64) {
    let before = objective(start);
    let after = objective(&candidate);
    if after <= before {
        (candidate, after)
    } else {
        (start.clone(), before)
    }
}

/// Uniform random equal-weight configuration of `n` points for start `index`.
pub fn random_start(n: usize, seed: u64, index: usize) -> CircleConfiguration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
    CircleConfiguration::equal_weights(&angles).expect("n points of weight 1/n")
}

/// Best of [`local_minimize`] runs from `starts` random configurations.
///
/// Start `i` draws its angles from its own stream of a ChaCha generator seeded
/// with `seed`, and ties are broken by the lower start index, so the result
/// does not depend on how the starts are scheduled.
pub fn multistart_minimize(n: usize, starts: usize, seed: u64) -> Result<OptimizationResult> {
    multistart_minimize_with(
        n,
        starts,
        seed,
        DEFAULT_STEP_TOLERANCE,
        DEFAULT_MAX_ITERATIONS,
    )
}

pub fn multistart_minimize_with(
    n: usize,
    starts: usize,
    seed: u64,
    step_tolerance: f64,
    max_iterations: usize,
) -> Result<OptimizationResult> {
    if n == 0 {
        return Err(Error::EmptyConfiguration);
    }
    if starts == 0 {
        return Err(Error::Assertion(
            "multistart needs at least one start".into(),
        ));
    }
    let runs: Vec<(CircleConfiguration, f64, usize, bool)> = (0..starts)
        .into_par_iter()
        .map(|i| {
            let start = random_start(n, seed, i);
            let run = local_run(&start, step_tolerance, max_iterations);
            let (config, value) = descended(&start, run.config);
            (config, value, run.iterations, run.converged)
        })
        .collect();

    let best = runs
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.1.total_cmp(&b.1).then(i.cmp(j)))
        .map(|(i, _)| i)
        .expect("starts >= 1");
    let iterations_total = runs.iter().map(|r| r.2).sum();
    let converged = runs.iter().filter(|r| r.3).count();

    let mut optima: Vec<f64> = runs.iter().map(|r| r.1).collect();
    optima.sort_by(|a, b| a.total_cmp(b));
    optima.dedup_by(|a, b| (*a - *b).abs() <= 1e-8);

    let (best_config, best_objective) = (runs[best].0.clone(), runs[best].1);
    Ok(OptimizationResult {
        best_config,
        best_objective,
        starts,
        iterations_total,
        converged_fraction: converged as f64 / starts as f64,
        seed: Some(seed),
        iteration_limit: converged < starts,
        distinct_local_optima: optima.len(),
    })
}

/// Upper-bound evidence for the minimum `C_n`: the explicit construction
/// attains `C_n*`, and the search finds nothing lower.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundReport {
    pub n: usize,
    pub cstar: f64,
    pub construction_objective: f64,
    pub multistart_best: f64,
    /// `construction_objective - cstar`.
    pub construction_gap: f64,
    /// `multistart_best - cstar`.
    pub multistart_gap: f64,
    /// `multistart_best - construction_objective`.
    pub search_gap: f64,
    /// Set when the search went below `cstar - 1e-6`.
    pub below_construction: bool,
    pub optimization: OptimizationResult,
}

/// Tolerance on `objective(extremal_configuration(n)) = C_n*`.
pub const CONSTRUCTION_TOLERANCE: f64 = 1e-8;
/// A multistart best below `C_n*` by more than this is reported.
pub const FINDING_TOLERANCE: f64 = 1e-6;

pub fn verify_cn_upper(n: usize, starts: usize, seed: u64) -> Result<UpperBoundReport> {
    if n == 0 {
        return Err(Error::EmptyConfiguration);
    }
    let c = cstar(n as u64).value;
    let construction_objective = objective(&extremal_configuration(n as u64));
    let construction_gap = construction_objective - c;
    if construction_gap.abs() > CONSTRUCTION_TOLERANCE {
        return Err(Error::Assertion(format!(
            "objective of the extremal configuration is {construction_objective}, expected {c} (n = {n})"
        )));
    }
    let optimization = multistart_minimize(n, starts, seed)?;
    let multistart_best = optimization.best_objective;
    Ok(UpperBoundReport {
        n,
        cstar: c,
        construction_objective,
        multistart_best,
        construction_gap,
        multistart_gap: multistart_best - c,
        search_gap: multistart_best - construction_objective,
        below_construction: multistart_best < c - FINDING_TOLERANCE,
        optimization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_is_trivial() {
        for a in [0.0, 1.0, 5.5] {
            let start = CircleConfiguration::equal_weights(&[a]).unwrap();
            let r = local_minimize(&start, DEFAULT_STEP_TOLERANCE, 10).unwrap();
            assert!((r.best_objective - 2.0).abs() < 1e-15);
            assert!(!r.iteration_limit);
        }
        let r = multistart_minimize(1, 3, 9).unwrap();
        assert!((r.best_objective - 2.0).abs() < 1e-15);
    }

    #[test]
    fn extremal_configuration_is_stationary() {
        for n in 2..=8u64 {
            let start = extremal_configuration(n);
            let r = local_minimize(&start, DEFAULT_STEP_TOLERANCE, DEFAULT_MAX_ITERATIONS).unwrap();
            assert!(
                (r.best_objective - objective(&start)).abs() < 1e-9,
                "n = {n}: {} vs {}",
                r.best_objective,
                objective(&start)
            );
        }
    }

    #[test]
    fn roots_of_unity_descend_to_cstar() {
        let start = CircleConfiguration::roots_of_unity(4);
        assert!((objective(&start) - 2.0).abs() < 1e-12);
        let r = local_minimize(&start, DEFAULT_STEP_TOLERANCE, DEFAULT_MAX_ITERATIONS).unwrap();
        assert!(
            r.best_objective <= cstar(4).value + 1e-6,
            "{}",
            r.best_objective
        );
        assert!(r.best_objective >= cstar(4).value - 1e-6);
    }

    #[test]
    fn result_objective_is_recomputable() {
        let r = multistart_minimize(3, 4, 1).unwrap();
        assert!((objective(&r.best_config) - r.best_objective).abs() <= 1e-10);
        assert!(r.best_objective >= 1.0);
        assert!((0.0..=1.0).contains(&r.converged_fraction));
    }

    #[test]
    fn two_points_give_sqrt3() {
        let r = multistart_minimize(2, 50, 7).unwrap();
        assert!(
            (r.best_objective - 3f64.sqrt()).abs() < 1e-6,
            "{}",
            r.best_objective
        );
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = multistart_minimize(4, 6, 42).unwrap();
        let b = multistart_minimize(4, 6, 42).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let c = pool.install(|| multistart_minimize(4, 6, 42).unwrap());
        assert_eq!(a, c);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(multistart_minimize(3, 0, 1).is_err());
        let uneven = CircleConfiguration::normalize(&[0.0, 1.0], &[0.3, 0.7]).unwrap();
        assert!(local_minimize(&uneven, 1e-10, 10).is_err());
    }

    #[test]
    fn upper_bound_report() {
        let r = verify_cn_upper(1, 2, 0).unwrap();
        for v in [r.cstar, r.construction_objective, r.multistart_best] {
            assert!((v - 2.0).abs() < 1e-12);
        }
        let r = verify_cn_upper(3, 20, 3).unwrap();
        assert!(r.construction_gap.abs() <= CONSTRUCTION_TOLERANCE);
        assert!(!r.below_construction);
        assert!((r.search_gap - (r.multistart_best - r.construction_objective)).abs() < 1e-15);
    }
}
