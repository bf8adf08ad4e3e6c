//! The numerical claims checked end to end, one [`CheckOutcome`] per claim.
//!
//! Each check records what it measured, whether it met its tolerance, and
//! whether it met its time budget. Advisory observations never fail a check.

use std::f64::consts::{LN_2, TAU};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    dimitrov_series, graeffe_product, hankel_determinants, theorem2_coefficients, IntPolynomial,
    IntSeries,
};
use crate::chebyshev::{cstar, cstar_t, cstar_t_limit, extremal_configuration, precise};
use crate::geometry::arcs::{arc_maxima_raw, log_objective_raw, log_potential};
use crate::geometry::{
    arc_maxima, hedgehog_from_polynomial, log_objective, objective, spine_moduli,
    CircleConfiguration,
};
use crate::optimize::multistart_minimize;

pub const SMYTH: &str = "x^3-x-1";
pub const LEHMER: &str = "x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1";

/// Seed shared by every randomized check.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: String,
    /// Tolerance met.
    pub passed: bool,
    /// Time budget met.
    pub within_budget: bool,
    pub measured: String,
    pub notes: Vec<String>,
    pub seconds: f64,
    pub budget_seconds: f64,
}

impl CheckOutcome {
    pub fn ok(&self) -> bool {
        self.passed && self.within_budget
    }

    /// `PASS [id] name: measured (1.23 s)`, plus indented notes.
    pub fn line(&self) -> String {
        let status = if self.ok() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{status} [{:>2}] {}: {} ({:.2} s",
            self.id, self.name, self.measured, self.seconds
        );
        if !self.within_budget {
            let _ = write!(s, ", budget {:.0} s exceeded", self.budget_seconds);
        }
        s.push(')');
        for note in &self.notes {
            let _ = write!(s, "\n       {note}");
        }
        s
    }
}

struct Measured {
    passed: bool,
    measured: String,
    notes: Vec<String>,
}

fn timed(id: u32, name: &str, budget: Duration, body: impl FnOnce() -> Measured) -> CheckOutcome {
    let t0 = Instant::now();
    let m = body();
    let elapsed = t0.elapsed();
    CheckOutcome {
        id,
        name: name.to_string(),
        passed: m.passed,
        within_budget: elapsed <= budget,
        measured: m.measured,
        notes: m.notes,
        seconds: elapsed.as_secs_f64(),
        budget_seconds: budget.as_secs_f64(),
    }
}

fn failure(err: impl std::fmt::Display) -> Measured {
    Measured {
        passed: false,
        measured: format!("error: {err}"),
        notes: vec![],
    }
}

fn hedgehog_measure_check(id: u32, name: &str, poly: &str, expected: f64) -> CheckOutcome {
    timed(id, name, Duration::from_secs(1), || {
        let h = IntPolynomial::parse(poly).and_then(|p| hedgehog_from_polynomial(&p));
        match h {
            Ok(h) => {
                let m = h.measure();
                Measured {
                    passed: (m - expected).abs() <= 1e-6,
                    measured: format!("measure {m:.10} (expected {expected} within 1e-6)"),
                    notes: vec![],
                }
            }
            Err(e) => failure(e),
        }
    })
}

pub fn check_smyth_measure() -> CheckOutcome {
    hedgehog_measure_check(1, "Smyth hedgehog measure", SMYTH, 3.07959562)
}

pub fn check_lehmer_measure() -> CheckOutcome {
    hedgehog_measure_check(2, "Lehmer hedgehog measure", LEHMER, 1.91445008)
}

/// Objective of the extremal configuration against `C_n*`, and the count of
/// arc maxima equal to 1, for `n = 1..=64`.
pub fn check_constructive_identity() -> CheckOutcome {
    timed(
        3,
        "constructive identity, n = 1..64",
        Duration::from_secs(30),
        || {
            let mut worst_gap: f64 = 0.0;
            let mut bad = Vec::new();
            for n in 1..=64u64 {
                let c = extremal_configuration(n);
                let gap = (objective(&c) - cstar(n).value).abs();
                worst_gap = worst_gap.max(gap);
                let ones = arc_maxima(&c)
                    .per_arc
                    .iter()
                    .filter(|a| (a.max_value - 1.0).abs() <= 1e-8)
                    .count();
                if gap > 1e-8 || ones != n as usize - 1 {
                    bad.push(format!("n = {n}: gap {gap:e}, {ones} unit arc maxima"));
                }
            }
            let measured = if bad.is_empty() {
                format!("max |objective - C_n*| = {worst_gap:.3e}; n-1 unit arc maxima for every n")
            } else {
                format!("{} violation(s)", bad.len())
            };
            Measured {
                passed: bad.is_empty(),
                measured,
                notes: bad,
            }
        },
    )
}

pub fn check_theorem2_coefficients() -> CheckOutcome {
    timed(
        4,
        "exact expansion coefficients",
        Duration::from_secs(1),
        || {
            let expected: Vec<BigRational> = [
                (1, 1),
                (-1, 4),
                (5, 96),
                (-1, 128),
                (79, 92160),
                (-3, 40960),
            ]
            .iter()
            .map(|&(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
            .collect();
            let h = theorem2_coefficients(5);
            let shown: Vec<String> = h.coeffs().iter().map(|c| c.to_string()).collect();
            Measured {
                passed: h.coeffs() == expected.as_slice(),
                measured: format!("[{}]", shown.join(", ")),
                notes: vec![],
            }
        },
    )
}

/// Four-term expansion against `C_n*` in extended precision, and monotone
/// convergence of `(C_n*)^(sqrt n)` to `e^(sqrt(log 4))`.
pub fn check_asymptotics() -> CheckOutcome {
    timed(5, "asymptotic expansion", Duration::from_secs(5), || {
        let limit = (2.0 * LN_2).sqrt().exp();
        let mut notes = Vec::new();
        let mut passed = true;
        let mut worst_ratio: f64 = 0.0;
        let mut prev_power: Option<f64> = None;
        for e in 2..=6 {
            let n = 10u64.pow(e);
            let g = precise::expansion_gap(n, 4);
            worst_ratio = worst_ratio.max(g.difference.abs() / g.tolerance);
            if !g.within_tolerance() {
                passed = false;
                notes.push(format!(
                    "n = {n}: |difference| {:e} > {:e}",
                    g.difference.abs(),
                    g.tolerance
                ));
            }
            let power = ((n as f64).sqrt() * cstar(n).log_value).exp();
            if let Some(p) = prev_power {
                if !(power > p && (limit - power).abs() < (limit - p).abs()) {
                    passed = false;
                    notes.push(format!(
                        "n = {n}: (C_n*)^sqrt(n) = {power} does not move toward {limit}"
                    ));
                }
            }
            prev_power = Some(power);
        }
        Measured {
            passed,
            measured: format!(
                "max |difference| / (2 nu^9) = {worst_ratio:.4}; (C_n*)^sqrt(n) at n = 1e6: {:.10} -> {limit:.10}",
                prev_power.unwrap_or(f64::NAN)
            ),
            notes,
        }
    })
}

/// Hankel determinants of the integer series attached to Smyth's polynomial.
pub fn check_hankel(kmax: usize) -> CheckOutcome {
    let budget = if kmax <= 60 { 30 } else { 600 };
    let name = format!("Hankel determinants, kmax = {kmax}");
    timed(6, &name, Duration::from_secs(budget), || {
        let report = IntPolynomial::parse(SMYTH)
            .and_then(|p| dimitrov_series(&p, 2 * kmax - 2))
            .and_then(|s| hankel_determinants(&s, kmax));
        let report = match report {
            Ok(r) => r,
            Err(e) => return failure(e),
        };
        let (k_at, max_root) = report.max_root_k().unwrap_or((0, f64::NAN));
        let last = report.last().map(|e| e.root_k2).unwrap_or(f64::NAN);
        let mut notes = vec![format!(
            "advisory: |A_{kmax}|^(1/k^2) = {last:.6} (threshold 1.1: {})",
            if last < 1.1 { "below" } else { "not below" }
        )];
        let vanishing = report.entries.iter().filter(|e| e.vanishing).count();
        if vanishing > 0 {
            notes.push(format!("{vanishing} vanishing determinant(s)"));
        }
        Measured {
            passed: report.entries.len() == kmax && max_root < 2.5,
            measured: format!("max_k |A_k|^(1/k) = {max_root:.10} at k = {k_at} (< 2.5)"),
            notes,
        }
    })
}

pub fn check_series_integrality() -> CheckOutcome {
    timed(
        7,
        "integral square root series, order 300",
        Duration::from_secs(5),
        || {
            let run = || -> crate::Result<bool> {
                let p = IntPolynomial::parse(SMYTH)?;
                let s = dimitrov_series(&p, 300)?;
                let product = IntSeries::from_polynomial(&graeffe_product(&p)?.product, 300);
                Ok(s.coeffs().len() == 301 && s.mul(&s) == product)
            };
            match run() {
                Ok(ok) => Measured {
                    passed: ok,
                    measured: "301 integer coefficients; square equals the truncated product"
                        .into(),
                    notes: vec![],
                },
                Err(e) => failure(e),
            }
        },
    )
}

pub fn check_roots_of_unity() -> CheckOutcome {
    timed(
        8,
        "roots of unity calibration, n = 1..32",
        Duration::from_secs(5),
        || {
            let mut worst: f64 = 0.0;
            for n in 1..=32 {
                let c = CircleConfiguration::roots_of_unity(n);
                worst = worst
                    .max((objective(&c) - 2.0).abs())
                    .max((spine_moduli(&c).measure() - 4.0).abs());
            }
            Measured {
                passed: worst <= 1e-10,
                measured: format!("max deviation from objective 2 / measure 4 = {worst:.3e}"),
                notes: vec![],
            }
        },
    )
}

/// Multistart best against `C_n*` for `n = 2..=8`.
pub fn check_optimizer(starts: usize, seed: u64) -> CheckOutcome {
    timed(
        9,
        "multistart minimum, n = 2..8",
        Duration::from_secs(300),
        || {
            let mut passed = true;
            let mut notes = Vec::new();
            let mut worst: f64 = 0.0;
            for n in 2..=8usize {
                let r = match multistart_minimize(n, starts, seed) {
                    Ok(r) => r,
                    Err(e) => return failure(e),
                };
                let c = cstar(n as u64).value;
                let gap = r.best_objective - c;
                worst = worst.max(gap.abs());
                if gap < -1e-6 {
                    passed = false;
                    notes.push(format!(
                        "FINDING n = {n}: multistart best {} is below C_n* = {c}",
                        r.best_objective
                    ));
                } else if gap > 1e-4 {
                    passed = false;
                    notes.push(format!(
                        "n = {n}: best {} exceeds C_n* + 1e-4",
                        r.best_objective
                    ));
                }
            }
            Measured {
                passed,
                measured: format!("max |best - C_n*| = {worst:.3e} ({starts} starts, seed {seed})"),
                notes,
            }
        },
    )
}

pub fn check_t_generalization() -> CheckOutcome {
    timed(10, "t-scaled constants", Duration::from_secs(2), || {
        let mut passed = true;
        let mut parts = Vec::new();
        let mut notes = Vec::new();
        for t in [1.1, 1.5, 2.0] {
            let limit = cstar_t_limit(t);
            let mut prev = f64::INFINITY;
            for e in 1..=5 {
                let d = (cstar_t(10u64.pow(e), t).value - limit).abs();
                if d >= prev {
                    passed = false;
                    notes.push(format!("t = {t}: distance at n = 1e{e} did not shrink"));
                }
                prev = d;
            }
            passed &= prev <= 1e-3;
            parts.push(format!("t = {t}: {prev:.2e}"));
        }
        Measured {
            passed,
            measured: format!(
                "distance to t + sqrt(t^2 - 1) at n = 1e5: {}",
                parts.join(", ")
            ),
            notes,
        }
    })
}

/// Randomized identities, `cases` each, from a fixed seed.
pub fn check_properties(cases: usize, seed: u64) -> CheckOutcome {
    timed(11, "property suites", Duration::from_secs(120), || {
        let suites: [(&str, Property); 5] = [
            ("series sqrt round trip", prop_series_sqrt),
            ("Hankel vs cofactor expansion", prop_hankel_oracle),
            ("arc maxima vs dense sampling", prop_arc_sampling),
            ("rotation/conjugation invariance", prop_invariance),
            ("multiset reduction", prop_multiset),
        ];
        let mut notes = Vec::new();
        for (i, (name, prop)) in suites.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            if let Some(fail) = (0..cases).find_map(|_| prop(&mut rng)) {
                notes.push(format!("{name}: {fail}"));
            }
        }
        Measured {
            passed: notes.is_empty(),
            measured: format!(
                "{} suites x {cases} cases, {} failing",
                suites.len(),
                notes.len()
            ),
            notes,
        }
    })
}

/// One randomized case; `Some` describes a failure.
type Property = fn(&mut ChaCha8Rng) -> Option<String>;

fn random_series(rng: &mut ChaCha8Rng, len: usize, bound: i64) -> IntSeries {
    let mut c: Vec<i64> = (0..len).map(|_| rng.gen_range(-bound..=bound)).collect();
    c[0] = 1;
    IntSeries::from_i64s(&c)
}

fn prop_series_sqrt(rng: &mut ChaCha8Rng) -> Option<String> {
    let len = rng.gen_range(1..40);
    let f = random_series(rng, len, 20);
    let square = f.mul(&f);
    match square.sqrt() {
        Ok(r) if r == f && r.mul(&r) == square => None,
        Ok(_) => Some(format!("sqrt(f^2) != f for f = {:?}", f.coeffs())),
        Err(e) => Some(format!("{e} for f = {:?}", f.coeffs())),
    }
}

/// Cofactor expansion along the first row.
pub fn cofactor_determinant(m: &[Vec<BigInt>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = entry * cofactor_determinant(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn prop_hankel_oracle(rng: &mut ChaCha8Rng) -> Option<String> {
    let kmax = rng.gen_range(1..=6);
    let coeffs: Vec<i64> = (0..2 * kmax - 1).map(|_| rng.gen_range(-4..=4)).collect();
    let s = IntSeries::from_i64s(&coeffs);
    let report = hankel_determinants(&s, kmax).ok()?;
    report.entries.iter().find_map(|e| {
        let m: Vec<Vec<BigInt>> = (0..e.k).map(|i| s.coeffs()[i..i + e.k].to_vec()).collect();
        let expected = cofactor_determinant(&m);
        (e.det != expected).then(|| format!("A_{} = {} != {expected} for {coeffs:?}", e.k, e.det))
    })
}

fn random_config(rng: &mut ChaCha8Rng, n: usize, equal: bool) -> CircleConfiguration {
    let angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
    let raw: Vec<f64> = (0..n)
        .map(|_| if equal { 1.0 } else { rng.gen_range(0.05..1.0) })
        .collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    CircleConfiguration::normalize(&angles, &weights).expect("valid random configuration")
}

const SAMPLES_PER_ARC: usize = 250_000;

fn prop_arc_sampling(rng: &mut ChaCha8Rng) -> Option<String> {
    let n = rng.gen_range(1..=4);
    let equal = rng.gen_bool(0.5);
    let c = random_config(rng, n, equal);
    let (a, w) = (c.angles(), c.weights());
    for arc in arc_maxima(&c).per_arc {
        let lo = arc.arc_start_angle;
        let len = {
            let d = (arc.arc_end_angle - lo).rem_euclid(TAU);
            if d == 0.0 {
                TAU
            } else {
                d
            }
        };
        let sampled = (1..SAMPLES_PER_ARC)
            .map(|i| log_potential(lo + len * i as f64 / SAMPLES_PER_ARC as f64, a, w))
            .fold(f64::NEG_INFINITY, f64::max)
            .exp();
        if sampled > arc.max_value + 1e-12 || arc.max_value - sampled > 1e-8 {
            return Some(format!(
                "sampled {sampled} vs computed {} on an arc of {c:?}",
                arc.max_value
            ));
        }
    }
    None
}

fn prop_invariance(rng: &mut ChaCha8Rng) -> Option<String> {
    let n = rng.gen_range(1..=8);
    let equal = rng.gen_bool(0.5);
    let c = random_config(rng, n, equal);
    let base = log_objective(&c);
    let delta = rng.gen_range(-10.0..10.0);
    let rotated = log_objective(&c.rotated(delta));
    let conjugated = log_objective(&c.conjugated());
    let tol = 1e-10 * base.abs().max(1.0);
    ((rotated - base).abs() > tol || (conjugated - base).abs() > tol).then(|| {
        format!("log objective {base} -> rotated {rotated}, conjugated {conjugated} for {c:?}")
    })
}

/// A configuration with weights `a_j / m` against the list in which point `j`
/// appears `a_j` times with weight `1/m`.
fn prop_multiset(rng: &mut ChaCha8Rng) -> Option<String> {
    let m = rng.gen_range(2..=12u64);
    let points = rng.gen_range(1..=(m as usize).min(5));
    // split m into `points` positive parts
    let mut cuts: Vec<u64> = (1..m).collect();
    for i in 0..points - 1 {
        let j = rng.gen_range(i..cuts.len());
        cuts.swap(i, j);
    }
    let mut cuts: Vec<u64> = cuts[..points - 1].to_vec();
    cuts.sort_unstable();
    cuts.insert(0, 0);
    cuts.push(m);
    let mult: Vec<u64> = cuts.windows(2).map(|w| w[1] - w[0]).collect();

    let angles: Vec<f64> = (0..points).map(|_| rng.gen_range(0.0..TAU)).collect();
    let weights: Vec<f64> = mult.iter().map(|&a| a as f64 / m as f64).collect();
    let c = CircleConfiguration::normalize(&angles, &weights).ok()?;
    let mut repeated: Vec<f64> = angles
        .iter()
        .zip(&mult)
        .flat_map(|(&a, &k)| std::iter::repeat_n(a.rem_euclid(TAU), k as usize))
        .collect();
    repeated.sort_by(|a, b| a.total_cmp(b));
    let unit = vec![1.0 / m as f64; repeated.len()];
    let merged = log_objective(&c);
    let raw = log_objective_raw(&repeated, &unit);
    let raw_arcs = arc_maxima_raw(&repeated, &unit)
        .iter()
        .filter(|a| a.log_max > f64::NEG_INFINITY)
        .count();
    ((merged - raw).abs() > 1e-12 * merged.abs().max(1.0) || raw_arcs != c.len())
        .then(|| format!("multiplicities {mult:?} over {m}: {merged} vs {raw}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReproduceOptions {
    /// Run the Hankel check at `kmax = 60` instead of 150.
    pub quick: bool,
    pub seed: u64,
    pub starts: usize,
    pub property_cases: usize,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        ReproduceOptions {
            quick: false,
            seed: DEFAULT_SEED,
            starts: 200,
            property_cases: 100,
        }
    }
}

/// Every check, in order.
pub fn run_all(opts: &ReproduceOptions) -> Vec<CheckOutcome> {
    run_each(opts, |_| {})
}

/// Every check, in order, calling `progress` after each one.
pub fn run_each(
    opts: &ReproduceOptions,
    mut progress: impl FnMut(&CheckOutcome),
) -> Vec<CheckOutcome> {
    let kmax = if opts.quick { 60 } else { 150 };
    let checks: Vec<Box<dyn FnOnce() -> CheckOutcome>> = vec![
        Box::new(check_smyth_measure),
        Box::new(check_lehmer_measure),
        Box::new(check_constructive_identity),
        Box::new(check_theorem2_coefficients),
        Box::new(check_asymptotics),
        Box::new(move || check_hankel(kmax)),
        Box::new(check_series_integrality),
        Box::new(check_roots_of_unity),
        Box::new(move || check_optimizer(opts.starts, opts.seed)),
        Box::new(check_t_generalization),
        Box::new(move || check_properties(opts.property_cases, opts.seed)),
    ];
    checks
        .into_iter()
        .map(|check| {
            let outcome = check();
            progress(&outcome);
            outcome
        })
        .collect()
}

/// One line per check followed by a totals line.
pub fn summary(outcomes: &[CheckOutcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        let _ = writeln!(s, "{}", o.line());
    }
    let passed = outcomes.iter().filter(|o| o.ok()).count();
    let _ = writeln!(s, "{passed}/{} checks passed", outcomes.len());
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_checks_pass() {
        for o in [
            check_smyth_measure(),
            check_lehmer_measure(),
            check_theorem2_coefficients(),
            check_series_integrality(),
            check_roots_of_unity(),
            check_t_generalization(),
        ] {
            assert!(o.ok(), "{}", o.line());
        }
    }

    #[test]
    fn line_format() {
        let o = CheckOutcome {
            id: 4,
            name: "x".into(),
            passed: true,
            within_budget: false,
            measured: "y".into(),
            notes: vec!["z".into()],
            seconds: 2.0,
            budget_seconds: 1.0,
        };
        assert_eq!(
            o.line(),
            "FAIL [ 4] x: y (2.00 s, budget 1 s exceeded)\n       z"
        );
    }

    #[test]
    fn cofactor_oracle_small_cases() {
        let m = |rows: &[&[i64]]| -> Vec<Vec<BigInt>> {
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect()
        };
        assert_eq!(cofactor_determinant(&m(&[])), BigInt::one());
        assert_eq!(
            cofactor_determinant(&m(&[&[1, 2], &[3, 4]])),
            BigInt::from(-2)
        );
        assert_eq!(
            cofactor_determinant(&m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]])),
            BigInt::zero()
        );
    }
}
