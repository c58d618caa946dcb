//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use hermcurv::random::{potential_sum, random_exp_quadratic, random_potential, PotentialBase};
use hermcurv::sampling::{random_point_in_ball, random_positive_definite, random_unit_direction, sample_points, seeded_rng};
use hermcurv::selftest::run_selftest;
use hermcurv::wu::decompose_jets;
use hermcurv::{
    decompose, gaussian_curvature_1d, hsc_extrema_at_jet, is_positive_definite, is_positive_semidefinite,
    quotient_metric, quotient_metric_oracle, scalar_mixing_inequality, wu_verify, ChartPoint, Direction,
    ExtremaOptions, HscEvaluator, MetricField, Result, WuOptions, C64,
};
use rand::Rng;

const SEED: u64 = 20240601;

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

/// Seeded pairs of exact conformal metrics on the unit disk, each with a point.
fn conformal_fixtures(count: usize) -> Vec<(MetricField, MetricField, ChartPoint)> {
    let mut rng = seeded_rng(SEED, 1);
    (0..count)
        .map(|i| {
            let g = if i % 5 == 0 {
                MetricField::poincare_disk(rng.random_range(0.5..4.0)).unwrap()
            } else {
                random_exp_quadratic(SEED + 2 * i as u64)
            };
            let h = random_exp_quadratic(SEED + 2 * i as u64 + 1);
            let p = random_point_in_ball(&mut rng, &[C64::new(0.0, 0.0)], 0.9);
            (g, h, p)
        })
        .collect()
}

fn decomposition_identity() -> Result<Outcome> {
    let start = Instant::now();
    let mut exact: f64 = 0.0;
    for (g, h, p) in conformal_fixtures(100) {
        exact = exact.max(decompose(&g.evaluate_jet(&p)?, &h.evaluate_jet(&p)?)?.residual);
    }
    let mut fd: f64 = 0.0;
    for i in 0..50u64 {
        let base = if i % 2 == 0 { PotentialBase::Flat } else { PotentialBase::Ball };
        let a = random_potential(SEED + 1000 + 2 * i, 2, 3, base)?;
        let b = random_potential(SEED + 1001 + 2 * i, 2, 3, PotentialBase::Ball)?;
        let sum = potential_sum(&a, &b)?;
        let p = &sample_points(&sum, 1, SEED + i)?[0];
        let rep = decompose_jets(&a.field.evaluate_jet(p)?, &b.field.evaluate_jet(p)?, &sum.evaluate_jet(p)?)?;
        fd = fd.max(rep.residual);
    }
    let elapsed = start.elapsed();
    outcome(
        exact <= 1e-8 && fd <= 1e-4 && elapsed.as_secs_f64() <= 10.0,
        format!("analytic max residual {exact:.2e} (<= 1e-8), finite-difference {fd:.2e} (<= 1e-4), {}", secs(elapsed)),
    )
}

fn quotient_metric_checks() -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = seeded_rng(SEED, 2);
    let mut worst: f64 = 0.0;
    let mut bad = 0;
    for i in 0..1000 {
        let dim = 1 + i % 6;
        let g = random_positive_definite(&mut rng, dim, 0.1);
        let h = random_positive_definite(&mut rng, dim, 0.1);
        let q = quotient_metric(&g, &h)?;
        worst = worst.max(q.sub(&quotient_metric_oracle(&g, &h)?).max_abs());
        if !is_positive_definite(&q)? || !is_positive_semidefinite(&g.add(&h).sub(&q), 1e-12)? {
            bad += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-12 && bad == 0 && elapsed.as_secs_f64() <= 5.0,
        format!("oracle gap {worst:.2e} (<= 1e-12), {bad} of 1000 fail q > 0 or q <= g + h, {}", secs(elapsed)),
    )
}

fn constant_curvature() -> Result<Outcome> {
    let cases = [
        (MetricField::poincare_disk(1.0)?, -2.0),
        (MetricField::complex_ball(2)?, -2.0),
        (MetricField::fubini_study_chart(1)?, 2.0),
    ];
    let mut worst_exact: f64 = 0.0;
    let mut worst_fd: f64 = 0.0;
    for (i, (field, want)) in cases.iter().enumerate() {
        let fd_field = field.clone().with_finite_differences();
        let mut rng = seeded_rng(SEED, 30 + i as u64);
        for p in sample_points(field, 50, SEED + i as u64)? {
            let xi = random_unit_direction(&mut rng, field.n());
            let h = HscEvaluator::new(&field.evaluate_jet(&p)?)?.eval(&xi)?;
            worst_exact = worst_exact.max((h - want).abs());
            let h = HscEvaluator::new(&fd_field.evaluate_jet(&p)?)?.eval(&xi)?;
            worst_fd = worst_fd.max((h - want).abs());
        }
    }
    outcome(
        worst_exact <= 1e-6 && worst_fd <= 1e-4,
        format!("analytic max error {worst_exact:.2e} (<= 1e-6), finite-difference {worst_fd:.2e} (<= 1e-4)"),
    )
}

fn wu_chain() -> Result<Outcome> {
    let opts = |seed| WuOptions {
        samples: 1000,
        seed,
        extrema: ExtremaOptions { seed, ..Default::default() },
    };
    let mut pairs = vec![(MetricField::poincare_disk(1.0)?, MetricField::poincare_disk(3.0)?)];
    for i in 0..5u64 {
        pairs.push((
            random_potential(SEED + 3000 + 2 * i, 2, 3, PotentialBase::Ball)?.field,
            random_potential(SEED + 3001 + 2 * i, 2, 3, PotentialBase::Ball)?.field,
        ));
    }
    let mut chain = f64::INFINITY;
    let mut mixing = f64::INFINITY;
    let mut pointwise = f64::INFINITY;
    let mut global = f64::INFINITY;
    for (i, (g, h)) in pairs.iter().enumerate() {
        let sum = MetricField::sum(g.clone(), h.clone())?;
        let pts = sample_points(&sum, 10, SEED + i as u64)?;
        let rep = wu_verify(g, h, &pts, &opts(SEED + i as u64))?;
        chain = chain.min(rep.worst_slack_chain);
        mixing = mixing.min(rep.worst_slack_mixing.unwrap_or(f64::NEG_INFINITY));
        pointwise = pointwise.min(rep.worst_slack_pointwise_k.unwrap_or(f64::INFINITY));
        global = global.min(rep.global.map_or(f64::INFINITY, |g| g.worst_slack));
    }

    let f = MetricField::poincare_disk(1.0)?;
    let pts = sample_points(&f, 10, SEED)?;
    let rep = wu_verify(&f, &f, &pts, &opts(SEED))?;
    let mut equal: f64 = 0.0;
    for s in &rep.samples {
        let harmonic = s.h_g * s.h_h / (s.h_g + s.h_h);
        equal = equal.max((s.h_sum - s.h_g / 2.0).abs()).max((s.h_sum - harmonic).abs());
        equal = equal.max(s.slack_mixing.map_or(f64::INFINITY, f64::abs));
    }
    outcome(
        chain >= -1e-9 && mixing >= -1e-9 && equal <= 1e-9,
        format!(
            "worst slack link (i) {chain:.2e}, link (ii) {mixing:.2e} (>= -1e-9) over 6 pairs x 10 points x 1000 directions; \
             g = h deviation {equal:.2e} (<= 1e-9); pointwise-K slack {pointwise:.2e}, global slack {global:.2e}"
        ),
    )
}

fn scalar_inequality() -> Result<Outcome> {
    let mut rng = seeded_rng(SEED, 5);
    let mut worst = f64::INFINITY;
    let mut flagged = 0;
    let mut false_equalities = 0;
    for i in 0..100_000 {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let x = sign * rng.random_range(1e-3..10.0);
        let y = sign * rng.random_range(1e-3..10.0);
        let a = rng.random_range(1e-3..10.0);
        let b = rng.random_range(1e-3..10.0);
        let s = scalar_mixing_inequality(x, y, a, b)?;
        worst = worst.min(s);
        if s <= 1e-12 {
            flagged += 1;
            // equality only on the degenerate locus x a = y b
            if (x * a - y * b).abs() > 1e-4 * (x * a).abs().max((y * b).abs()) {
                false_equalities += 1;
            }
        }
    }
    let mut symmetric: f64 = 0.0;
    for i in 0..10_000 {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let x = sign * rng.random_range(1e-3..10.0);
        let a = rng.random_range(1e-3..10.0);
        symmetric = symmetric.max(scalar_mixing_inequality(x, x, a, a)?.abs());
    }
    outcome(
        worst >= -1e-12 && symmetric <= 1e-12 && false_equalities == 0,
        format!(
            "min slack {worst:.2e} (>= -1e-12) over 1e5 quadruples; symmetric-case |slack| {symmetric:.2e} (<= 1e-12); \
             {flagged} near-equalities, {false_equalities} off the x a = y b locus"
        ),
    )
}

fn product_extrema() -> Result<Outcome> {
    let f = MetricField::product(MetricField::poincare_disk(1.0)?, MetricField::poincare_disk(1.0)?);
    let mut rng = seeded_rng(SEED, 6);
    let p = random_point_in_ball(&mut rng, &[C64::new(0.0, 0.0); 2], 0.5);
    let jet = f.evaluate_jet(&p)?;
    let ext = hsc_extrema_at_jet(&jet, &ExtremaOptions { seed: SEED, ..Default::default() })?;
    let eval = HscEvaluator::new(&jet)?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..100_000 {
        let v = eval.eval(&random_unit_direction(&mut rng, 2))?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let err = (ext.min + 2.0).abs().max((ext.max + 1.0).abs());
    let sweep_err = (lo + 2.0).abs().max((hi + 1.0).abs());
    let outside = (ext.min - lo).max(hi - ext.max);
    outcome(
        err <= 1e-3 && sweep_err <= 1e-3 && outside <= 1e-9,
        format!(
            "range [{:.6}, {:.6}], error {err:.2e} (<= 1e-3); sweep range [{lo:.6}, {hi:.6}], \
             largest sweep excursion beyond the range {outside:.2e}",
            ext.min, ext.max
        ),
    )
}

fn gaussian_relation() -> Result<Outcome> {
    let mut rng = seeded_rng(SEED, 7);
    let xi = Direction::new(vec![C64::new(1.0, 0.0)])?;
    let mut worst: f64 = 0.0;
    for i in 0..100u64 {
        let f = if i % 5 == 0 {
            MetricField::poincare_disk(rng.random_range(0.5..4.0))?
        } else {
            random_exp_quadratic(SEED + 7000 + i)
        };
        let p = random_point_in_ball(&mut rng, &[C64::new(0.0, 0.0)], 0.9);
        let jet = f.evaluate_jet(&p)?;
        let k = gaussian_curvature_1d(&jet)?;
        worst = worst.max((k - 2.0 * hermcurv::hsc(&jet, &xi)?).abs());
    }
    outcome(worst <= 1e-9, format!("max |K - 2H| {worst:.2e} (<= 1e-9) over 100 conformal jets"))
}

fn mutation_canary() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for (g, h, p) in conformal_fixtures(100) {
        let rep = hermcurv::wu::decompose_with_correction_sign(&g.evaluate_jet(&p)?, &h.evaluate_jet(&p)?, 1.0)?;
        worst = worst.max(rep.residual);
    }
    outcome(worst >= 1e-2, format!("flipped-sign max residual {worst:.2e} (>= 1e-2)"))
}

fn determinism() -> Result<Outcome> {
    let start = Instant::now();
    let a = serde_json::to_string(&run_selftest(42)).expect("serializes");
    let lib_elapsed = start.elapsed();
    let b = serde_json::to_string(&run_selftest(42)).expect("serializes");
    let all_pass = run_selftest(42).iter().all(|p| p.passed);

    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hermcurv"))
            .args(["selftest", "--seed", "42"])
            .output()
            .expect("binary runs")
    };
    let cli_start = Instant::now();
    let first = run();
    let cli_elapsed = cli_start.elapsed();
    let second = run();
    let identical = a == b && first.stdout == second.stdout && !first.stdout.is_empty();
    outcome(
        identical && all_pass && first.status.success() && cli_elapsed.as_secs_f64() <= 30.0,
        format!(
            "reports identical: {identical}, all properties pass: {all_pass}, exit {:?}, selftest {} (library {})",
            first.status.code(),
            secs(cli_elapsed),
            secs(lib_elapsed)
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("decomposition identity", decomposition_identity),
        ("quotient metric", quotient_metric_checks),
        ("constant-curvature fixtures", constant_curvature),
        ("curvature bound chain", wu_chain),
        ("scalar inequality", scalar_inequality),
        ("extrema engine", product_extrema),
        ("one-variable relation", gaussian_relation),
        ("mutation canary", mutation_canary),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = match check() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!("criterion {} {}: {} - {}", i + 1, name, if pass { "PASS" } else { "FAIL" }, detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
