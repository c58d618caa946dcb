//! Reduced-size property suites over every module, with named results.

use rand::Rng;
use serde::Serialize;

use crate::curvature::{
    curvature_tensor, gaussian_curvature_1d, hsc_extrema_at_jet, ExtremaOptions, HscEvaluator,
};
use crate::error::Result;
use crate::expr::Expr;
use crate::field::{Domain, MetricField};
use crate::jet::{jet_scale, MetricJet2};
use crate::linalg::{
    is_positive_definite, is_positive_semidefinite, pullback_metric, solve, Endomorphism, HermitianMatrix, C64,
};
use crate::metric_spec::{parse_metric_spec, render_metric_spec};
use crate::point::ChartPoint;
use crate::random::{potential_sum, random_exp_quadratic, random_metric_field, random_potential, PotentialBase};
use crate::sampling::{
    gaussian_complex, random_endomorphism, random_hermitian, random_point_in_ball, random_positive_definite,
    random_unit_direction, sample_points, seeded_rng,
};
use crate::wu::{
    decompose, decompose_jets, decompose_with_correction_sign, quotient_metric, quotient_metric_oracle,
    scalar_mixing_inequality, wu_verify, WuOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    /// The measured extreme value.
    pub worst: Option<f64>,
    pub bound: Bound,
    pub limit: f64,
    /// Distance from failing; negative on failure.
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

struct Measure {
    cases: usize,
    worst: f64,
}

/// Running maximum or minimum over cases.
struct Tally {
    cases: usize,
    worst: Option<f64>,
    bound: Bound,
}

impl Tally {
    fn new(bound: Bound) -> Self {
        Tally { cases: 0, worst: None, bound }
    }

    fn push(&mut self, v: f64) {
        self.cases += 1;
        let v = if v.is_nan() { f64::INFINITY * if self.bound == Bound::AtMost { 1.0 } else { -1.0 } } else { v };
        self.worst = Some(match (self.worst, self.bound) {
            (None, _) => v,
            (Some(w), Bound::AtMost) => w.max(v),
            (Some(w), Bound::AtLeast) => w.min(v),
        });
    }

    fn done(self) -> Result<Measure> {
        Ok(Measure { cases: self.cases, worst: self.worst.unwrap_or(0.0) })
    }
}

type Check = fn(u64) -> Result<Measure>;

const PROPERTIES: &[(&str, Bound, f64, Check)] = &[
    ("hermitian_linalg.positive_definite_vs_minors", Bound::AtMost, 0.0, pd_vs_minors),
    ("hermitian_linalg.solve_residual", Bound::AtMost, 1e-12, solve_residual),
    ("hermitian_linalg.pullback_identities", Bound::AtMost, 1e-12, pullback_identities),
    ("metric_fields.spec_round_trip", Bound::AtMost, 0.0, spec_round_trip),
    ("metric_fields.finite_difference_vs_exact", Bound::AtMost, 1e-5, fd_vs_exact),
    ("metric_fields.random_fields_positive", Bound::AtMost, 0.0, random_fields_positive),
    ("curvature_engine.pair_symmetry_exact", Bound::AtMost, 1e-9, pair_symmetry_exact),
    ("curvature_engine.pair_symmetry_finite_difference", Bound::AtMost, 1e-4, pair_symmetry_fd),
    ("curvature_engine.kahler_symmetry", Bound::AtMost, 1e-4, kahler_symmetry),
    ("curvature_engine.projective_invariance", Bound::AtMost, 1e-10, projective_invariance),
    ("curvature_engine.homogeneity", Bound::AtMost, 1e-10, homogeneity),
    ("curvature_engine.constant_curvature_exact", Bound::AtMost, 1e-6, constant_curvature_exact),
    ("curvature_engine.constant_curvature_finite_difference", Bound::AtMost, 1e-4, constant_curvature_fd),
    ("curvature_engine.gaussian_curvature_relation", Bound::AtMost, 1e-9, gaussian_relation),
    ("curvature_engine.conformal_closed_form", Bound::AtMost, 1e-4, conformal_closed_form),
    ("curvature_engine.extrema_bound_samples", Bound::AtMost, 1e-6, extrema_bound_samples),
    ("curvature_engine.product_extrema", Bound::AtMost, 1e-3, product_extrema),
    ("wu_decomposition.quotient_oracle", Bound::AtMost, 1e-12, quotient_oracle),
    ("wu_decomposition.quotient_positive_and_dominated", Bound::AtMost, 0.0, quotient_positive),
    ("wu_decomposition.decomposition_exact", Bound::AtMost, 1e-8, decomposition_exact),
    ("wu_decomposition.decomposition_finite_difference", Bound::AtMost, 1e-4, decomposition_fd),
    ("wu_decomposition.decomposition_symmetry", Bound::AtMost, 1e-12, decomposition_symmetry),
    ("wu_decomposition.sign_flip_canary", Bound::AtLeast, 1e-2, sign_flip_canary),
    ("wu_decomposition.scalar_inequality", Bound::AtLeast, -1e-12, scalar_inequality),
    ("wu_decomposition.scalar_equality_case", Bound::AtMost, 1e-12, scalar_equality_case),
    ("wu_decomposition.wu_chain", Bound::AtLeast, -1e-9, wu_chain),
    ("wu_decomposition.equal_metrics_equality", Bound::AtMost, 1e-9, equal_metrics_equality),
];

/// Names of every property, in report order.
pub fn property_names() -> Vec<&'static str> {
    PROPERTIES.iter().map(|p| p.0).collect()
}

/// Runs every property suite with seeds derived from `seed`.
pub fn run_selftest(seed: u64) -> Vec<PropertyResult> {
    PROPERTIES
        .iter()
        .enumerate()
        .map(|(idx, &(name, bound, limit, check))| {
            let prop_seed = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(idx as u64);
            match check(prop_seed) {
                Ok(m) => {
                    let margin = match bound {
                        Bound::AtMost => limit - m.worst,
                        Bound::AtLeast => m.worst - limit,
                    };
                    PropertyResult {
                        name,
                        passed: margin >= 0.0,
                        cases: m.cases,
                        worst: Some(m.worst),
                        bound,
                        limit,
                        margin: Some(margin),
                        error: None,
                    }
                }
                Err(e) => PropertyResult {
                    name,
                    passed: false,
                    cases: 0,
                    worst: None,
                    bound,
                    limit,
                    margin: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn disk_points(seed: u64, n: usize, radius: f64, count: usize) -> Vec<ChartPoint> {
    let mut rng = seeded_rng(seed, 0xd15c);
    let center = vec![c(0.0, 0.0); n];
    (0..count).map(|_| random_point_in_ball(&mut rng, &center, radius)).collect()
}

/// Determinant by Gaussian elimination with partial pivoting.
fn determinant(m: &[Vec<C64>]) -> C64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = c(1.0, 0.0);
    for col in 0..n {
        let p = (col..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm())).expect("non-empty");
        if a[p][col].norm() == 0.0 {
            return c(0.0, 0.0);
        }
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for j in col..n {
                let v = a[col][j];
                a[row][j] -= f * v;
            }
        }
    }
    det
}

fn pd_vs_minors(seed: u64) -> Result<Measure> {
    let mut rng = seeded_rng(seed, 0);
    let mut t = Tally::new(Bound::AtMost);
    for _ in 0..300 {
        let dim = rng.random_range(1..=8);
        let m = if rng.random::<bool>() {
            let shift = rng.random_range(-0.3..0.3);
            random_positive_definite(&mut rng, dim, shift)
        } else {
            random_hermitian(&mut rng, dim)
        };
        let rows: Vec<Vec<C64>> = (0..dim).map(|i| (0..dim).map(|j| m[(i, j)]).collect()).collect();
        let minors: Vec<f64> = (1..=dim)
            .map(|k| determinant(&rows[..k].iter().map(|r| r[..k].to_vec()).collect::<Vec<_>>()).re)
            .collect();
        // skip matrices too close to singular for either test to be decisive
        let scale = m.max_abs().max(1.0);
        if minors.iter().enumerate().any(|(k, d)| d.abs() < 1e-8 * scale.powi(k as i32 + 1)) {
            continue;
        }
        let sylvester = minors.iter().all(|&d| d > 0.0);
        t.push(if is_positive_definite(&m)? == sylvester { 0.0 } else { 1.0 });
    }
    t.done()
}

fn solve_residual(seed: u64) -> Result<Measure> {
    let mut rng = seeded_rng(seed, 0);
    let mut t = Tally::new(Bound::AtMost);
    for _ in 0..100 {
        let m = random_positive_definite(&mut rng, 5, 0.5);
        let b = random_endomorphism(&mut rng, 5);
        let x = solve(&m, &b)?;
        let r = m.as_endomorphism().matmul(&x).sub(&b);
        t.push(r.norm_inf() / b.norm_inf());
    }
    t.done()
}

fn pullback_identities(seed: u64) -> Result<Measure> {
    let mut rng = seeded_rng(seed, 0);
    let mut t = Tally::new(Bound::AtMost);
    for dim in 1..=6 {
        let m = random_positive_definite(&mut rng, dim, 0.1);
        let a = random_endomorphism(&mut rng, dim);
        t.push(pullback_metric(&Endomorphism::identity(dim), &m)?.sub(&m).max_abs());
        let direct = HermitianMatrix::from_endomorphism(&a.adjoint().matmul(&a));
        t.push(pullback_metric(&a, &HermitianMatrix::identity(dim))?.sub(&direct).max_abs());
    }
    t.done()
}

fn spec_round_trip(_seed: u64) -> Result<Measure> {
    let specs = [
        "builtin: euclidean; n: 2",
        "builtin: poincare_disk; c: 2.5",
        "builtin: complex_ball; n: 3",
        "builtin: fubini_study_chart; n: 2",
        "builtin: exp_quadratic; coeffs: 0, 1, -1, 0.5, 0, 0.25",
        "potential: r2 + 0.1*x_1^3*y_2; domain: ball 0.5",
        "conformal: exp(x_1); jets: finite_difference",
        "matrix: 2, x_1; x_1, 3; n: 1",
        "[a]\nbuiltin: poincare_disk\n[b]\nbuiltin: poincare_disk; c: 3\n[main]\nsum: a, b",
        "[a]\nbuiltin: poincare_disk\n[main]\nproduct: a, a",
        "[a]\nbuiltin: complex_ball; n: 2\n[main]\nscale: a; c: 0.5",
    ];
    let mut t = Tally::new(Bound::AtMost);
    for s in specs {
        let f = parse_metric_spec(s)?;
        let again = parse_metric_spec(&render_metric_spec(&f))?;
        t.push(if f == again { 0.0 } else { 1.0 });
    }
    t.done()
}

fn exact_fixtures() -> Vec<MetricField> {
    vec![
        MetricField::poincare_disk(1.0).expect("valid"),
        MetricField::complex_ball(2).expect("valid"),
        MetricField::fubini_study_chart(2).expect("valid"),
    ]
}

fn fd_vs_exact(seed: u64) -> Result<Measure> {
    let mut t = Tally::new(Bound::AtMost);
    for (i, f) in exact_fixtures().into_iter().enumerate() {
        let fd = f.clone().with_finite_differences();
        // away from the unit sphere, where the closed forms blow up
        for p in disk_points(seed ^ i as u64, f.n(), 0.5, 10) {
            let (a, b) = (f.evaluate_jet(&p)?, fd.evaluate_jet(&p)?);
            t.push(jet_distance(&a, &b));
        }
    }
    t.done()
}

fn jet_distance(a: &MetricJet2, b: &MetricJet2) -> f64 {
    let mut worst = a.value().sub(b.value()).max_abs();
    for k in 0..a.n() {
        worst = worst.max(a.d(k).sub(b.d(k)).max_abs());
        for l in 0..a.n() {
            worst = worst.max(a.ddbar(k, l).sub(b.ddbar(k, l)).max_abs());
        }
    }
    worst
}

fn random_fields_positive(seed: u64) -> Result<Measure> {
    let mut t = Tally::new(Bound::AtMost);
    for i in 0..3 {
        let f = random_metric_field(seed.wrapping_add(i), 2, 3)?;
        let mut rng = seeded_rng(seed, i);
        for _ in 0..20 {
            let p = random_point_in_ball(&mut rng, &[c(0.0, 0.0); 2], 0.5);
            t.push(if is_positive_definite(&f.exact_value(&p.to_real()))? { 0.0 } else { 1.0 });
        }
    }
    t.done()
}

fn pair_symmetry_exact(seed: u64) -> Result<Measure> {
    let mut t = Tally::new(Bound::AtMost);
    let mut fields = exact_fixtures();
    fields.push(random_exp_quadratic(seed));
    for (i, f) in fields.iter().enumerate() {
        for p in sample_points(f, 5, seed ^ i as u64)? {
            t.push(curvature_tensor(&f.evaluate_jet(&p)?)?.pair_symmetry_defect());
        }
    }
    t.done()
}

fn fd_potentials(seed: u64, count: u64) -> Result<Vec<MetricField>> {
    (0..count)
        .map(|i| random_potential(seed.wrapping_add(i), 2, 3, PotentialBase::Flat).map(|r| r.field))
        .collect()
}

fn pair_symmetry_fd(seed: u64) -> Result<Measure> {
    let mut t = Tally::new(Bound::AtMost);
    for f in fd_potentials(seed, 2)? {
        for p in sample_points(&f, 2, seed)? {
            t.push(curvature_tensor(&f.evaluate_jet(&p)?)?.pair_symmetry_defect());
        }
    }
    t.done()
}

fn kahler_symmetry(seed: u64) -> Result<Measure> {
    let mut t = Tally::new(Bound::AtMost);
    let mut fields = fd_potentials(seed, 2)?;
    fields.push(MetricField::complex_ball(2)?);
    fields.push(MetricField::fubini_study_chart(3)?);
    for f in fields {
        for p in sample_points(&f, 2, seed)? {
            t.push(curvature_tensor(&f.evaluate_jet(&p)?)?.kahler_symmetry_defect()?);
        }
    }
    t.done()
}

fn projective_invariance(seed: u64) -> Result<Measure> {
    let mut rng = seeded_rng(seed, 0);
    let mut t = Tally::new(Bound::AtMost);
    let f = MetricField::fubini_study_chart(2)?;
    let p = ChartPoint::new(vec![c(0.3, -0.2), c(0.1, 0.4)])?;
    let eval = HscEvaluator::new(&f.evaluate_jet(&p)?)?;
    for _ in 0..100 {
        let xi = random_unit_direction(&mut rng, 2);
        let mut k = gaussian_complex(&mut rng);
        while k.norm() < 1e-3 {
            k = gaussian_complex(&mut rng);
        }
        let scaled: Vec<C64> = xi.iter().map(|z| z * k).collect();
        t.push((eval.eval(&xi)? - eval.eval(&scaled)?).abs());
    }
    t.done()
}

fn homogeneity(seed: u64) -> Result<Measure> {
    let mut rng = seeded_rng(seed, 0);
    let mut t = Tally::new(Bound::AtMost);
    let f = MetricField::complex_ball(2)?;
    for p in sample_points(&f, 5, seed)? {
        let jet = f.evaluate_jet(&p)?;
        let xi = random_unit_direction(&mut rng, 2);
        let base = HscEvaluator::new(&jet)?.eval(&xi)?;
        for s in [0.5, 2.0, 10.0] {
            let scaled = HscEvaluator::new(&jet_scale(s, &jet)?)?.eval(&xi)?;
            t.push((scaled * s - base).abs());
        }
    }
    t.done()
}

fn constant_curvature_cases(seed: u64, fd: bool) -> Result<Measure> {
    let mut rng = seeded_rng(seed, 0);
    let mut t = Tally::new(Bound::AtMost);
    let cases = [
        (MetricField::poincare_disk(1.0)?, -2.0),
        (MetricField::complex_ball(2)?, -2.0),
        (MetricField::fubini_study_chart(1)?, 2.0),
    ];
    for (i, (f, want)) in cases.into_iter().enumerate() {
        let f = if fd { f.with_finite_differences() } else { f };
        for p in sample_points(&f, 10, seed ^ i as u64)? {
            let xi = random_unit_direction(&mut rng, f.n());
            t.push((HscEvaluator::new(&f.evaluate_jet(&p)?)?.eval(&xi)? - want).abs());
        }
    }
    t.done()
}

fn constant_curvature_exact(seed: u64) -> Result<Measure> {
    constant_curvature_cases(seed, false)
}

fn constant_curvature_fd(seed: u64) -> Result<Measure> {
    constant_curvature_cases(seed, true)
}

fn gaussian_relation(seed: u64) -> Result<Measure> {
    let mut t = Tally::new(Bound::AtMost);
    let pts = disk_points(seed, 1, 0.9, 20);
    for (i, p) in pts.iter().enumerate() {
        let f = random_exp_quadratic(seed.wrapping_add(i as u64));
        let jet = f.evaluate_jet(p)?;
        let k = gaussian_curvature_1d(&jet)?;
        let h = HscEvaluator::new(&jet)?.eval(&[c(1.0, 0.0)])?;
        t.push((k - 2.0 * h).abs());
    }
    t.done()
}

fn conformal_closed_form(seed: u64) -> Result<Measure> {
    let mut t = Tally::new(Bound::AtMost);
    let expr = Expr::parse("exp(0.3*x_1 - 0.2*y_1 + 0.5*x_1*y_1) + 0.5")?;
    let f = MetricField::conformal(1, expr.clone(), Domain::Whole)?;
    let log_lambda = |x: f64, y: f64| expr.eval(&[x], &[y]).ln();
    let h = 1e-3;
    // 4th-order five-point second derivative
    let w = [(-2.0, -1.0 / 12.0), (-1.0, 4.0 / 3.0), (0.0, -5.0 / 2.0), (1.0, 4.0 / 3.0), (2.0, -1.0 / 12.0)];
    for p in disk_points(seed, 1, 0.9, 10) {
        let (x, y) = (p.coords()[0].re, p.coords()[0].im);
        let lap: f64 = w
            .iter()
            .map(|&(o, wt)| wt * (log_lambda(x + o * h, y) + log_lambda(x, y + o * h)))
            .sum::<f64>()
            / (h * h);
        let lambda = expr.eval(&[x], &[y]);
        let want = -lambda * lap / 4.0;
        let r = curvature_tensor(&f.evaluate_jet(&p)?)?.get(0, 0, 0, 0);
        t.push((r.re - want).abs().max(r.im.abs()));
    }
    t.done()
}

fn extrema_bound_samples(seed: u64) -> Result<Measure> {
    let mut rng = seeded_rng(seed, 0);
    let mut t = Tally::new(Bound::AtMost);
    let fields = [
        MetricField::fubini_study_chart(2)?,
        MetricField::product(MetricField::poincare_disk(1.0)?, MetricField::poincare_disk(2.0)?),
        random_potential(seed, 2, 3, PotentialBase::Ball)?.field,
    ];
    let opts = ExtremaOptions { seed, restarts: 8, ..Default::default() };
    for f in &fields {
        for p in sample_points(f, 2, seed)? {
            let jet = f.evaluate_jet(&p)?;
            let ext = hsc_extrema_at_jet(&jet, &opts)?;
            let eval = HscEvaluator::new(&jet)?;
            for _ in 0..1000 {
                let v = eval.eval(&random_unit_direction(&mut rng, 2))?;
                t.push((ext.min - v).max(v - ext.max));
            }
        }
    }
    t.done()
}

fn product_extrema(seed: u64) -> Result<Measure> {
    let mut t = Tally::new(Bound::AtMost);
    let f = MetricField::product(MetricField::poincare_disk(1.0)?, MetricField::poincare_disk(1.0)?);
    let opts = ExtremaOptions { seed, ..Default::default() };
    let ext = hsc_extrema_at_jet(&f.evaluate_jet(&ChartPoint::origin(2))?, &opts)?;
    t.push((ext.min + 2.0).abs());
    t.push((ext.max + 1.0).abs());
    t.done()
}

fn random_pd_pairs(seed: u64, count: usize) -> Vec<(HermitianMatrix, HermitianMatrix)> {
    let mut rng = seeded_rng(seed, 0);
    (0..count)
        .map(|i| {
            let dim = 1 + i % 6;
            (random_positive_definite(&mut rng, dim, 0.1), random_positive_definite(&mut rng, dim, 0.1))
        })
        .collect()
}

fn quotient_oracle(seed: u64) -> Result<Measure> {
    let mut t = Tally::new(Bound::AtMost);
    for (g, h) in random_pd_pairs(seed, 200) {
        t.push(quotient_metric(&g, &h)?.sub(&quotient_metric_oracle(&g, &h)?).max_abs());
    }
    t.done()
}

fn quotient_positive(seed: u64) -> Result<Measure> {
    let mut t = Tally::new(Bound::AtMost);
    for (g, h) in random_pd_pairs(seed, 200) {
        let q = quotient_metric(&g, &h)?;
        let ok = is_positive_definite(&q)? && is_positive_semidefinite(&g.add(&h).sub(&q), 1e-12)?;
        t.push(if ok { 0.0 } else { 1.0 });
    }
    t.done()
}

/// Seeded pairs of exact conformal metrics, each with a point in the disk.
fn conformal_pairs(seed: u64, count: usize) -> Vec<(MetricField, MetricField, ChartPoint)> {
    let pts = disk_points(seed, 1, 0.9, count);
    pts.into_iter()
        .enumerate()
        .map(|(i, p)| {
            let g = if i % 4 == 0 {
                MetricField::poincare_disk(1.0 + i as f64 / 10.0).expect("positive c")
            } else {
                random_exp_quadratic(seed.wrapping_add(2 * i as u64))
            };
            (g, random_exp_quadratic(seed.wrapping_add(2 * i as u64 + 1)), p)
        })
        .collect()
}

fn decomposition_exact(seed: u64) -> Result<Measure> {
    let mut t = Tally::new(Bound::AtMost);
    for (g, h, p) in conformal_pairs(seed, 20) {
        t.push(decompose(&g.evaluate_jet(&p)?, &h.evaluate_jet(&p)?)?.residual);
    }
    let g = MetricField::complex_ball(2)?;
    let h = MetricField::fubini_study_chart(2)?;
    for p in sample_points(&g, 5, seed)? {
        t.push(decompose(&g.evaluate_jet(&p)?, &h.evaluate_jet(&p)?)?.residual);
    }
    t.done()
}

fn decomposition_fd(seed: u64) -> Result<Measure> {
    let mut t = Tally::new(Bound::AtMost);
    for i in 0..2 {
        let a = random_potential(seed.wrapping_add(2 * i), 2, 3, PotentialBase::Flat)?;
        let b = random_potential(seed.wrapping_add(2 * i + 1), 2, 3, PotentialBase::Ball)?;
        let sum = potential_sum(&a, &b)?;
        for p in sample_points(&sum, 1, seed ^ i)? {
            let rep = decompose_jets(&a.field.evaluate_jet(&p)?, &b.field.evaluate_jet(&p)?, &sum.evaluate_jet(&p)?)?;
            t.push(rep.residual);
        }
    }
    t.done()
}

fn decomposition_symmetry(seed: u64) -> Result<Measure> {
    let mut t = Tally::new(Bound::AtMost);
    for (g, h, p) in conformal_pairs(seed, 10) {
        let (jg, jh) = (g.evaluate_jet(&p)?, h.evaluate_jet(&p)?);
        let (a, b) = (decompose(&jg, &jh)?, decompose(&jh, &jg)?);
        t.push((a.residual - b.residual).abs().max(a.correction.sub(&b.correction).max_abs()));
    }
    t.done()
}

fn sign_flip_canary(seed: u64) -> Result<Measure> {
    // the largest residual of the broken identity over the fixture set
    let mut worst: f64 = 0.0;
    let pairs = conformal_pairs(seed, 20);
    for (g, h, p) in &pairs {
        let rep = decompose_with_correction_sign(&g.evaluate_jet(p)?, &h.evaluate_jet(p)?, 1.0)?;
        worst = worst.max(rep.residual);
    }
    Ok(Measure { cases: pairs.len(), worst })
}

fn same_signed(rng: &mut impl Rng, negative: bool) -> f64 {
    let v = rng.random_range(1e-3..=10.0);
    if negative {
        -v
    } else {
        v
    }
}

fn scalar_inequality(seed: u64) -> Result<Measure> {
    let mut rng = seeded_rng(seed, 0);
    let mut t = Tally::new(Bound::AtLeast);
    for i in 0..10_000 {
        let negative = i % 2 == 1;
        let (x, y) = (same_signed(&mut rng, negative), same_signed(&mut rng, negative));
        let (a, b) = (rng.random_range(1e-3..=10.0), rng.random_range(1e-3..=10.0));
        t.push(scalar_mixing_inequality(x, y, a, b)?);
    }
    t.done()
}

fn scalar_equality_case(seed: u64) -> Result<Measure> {
    let mut rng = seeded_rng(seed, 0);
    let mut t = Tally::new(Bound::AtMost);
    for i in 0..1000 {
        let negative = i % 2 == 1;
        let x = same_signed(&mut rng, negative);
        let (a, b) = (rng.random_range(1e-3..=10.0), rng.random_range(1e-3..=10.0));
        // x a = y b
        let y = x * a / b;
        let s = scalar_mixing_inequality(x, y, a, b)?;
        let scale = x.abs().max(y.abs());
        t.push(s.abs() / scale);
    }
    t.done()
}

fn wu_chain(seed: u64) -> Result<Measure> {
    let mut t = Tally::new(Bound::AtLeast);
    let opts = WuOptions {
        samples: 100,
        seed,
        extrema: ExtremaOptions { seed, restarts: 8, ..Default::default() },
    };
    let g = MetricField::poincare_disk(1.0)?;
    let h = MetricField::poincare_disk(3.0)?;
    let mut pairs = vec![(g.clone(), h, sample_points(&g, 3, seed)?)];
    let a = random_potential(seed, 2, 3, PotentialBase::Ball)?.field;
    let b = random_potential(seed.wrapping_add(1), 2, 3, PotentialBase::Ball)?.field;
    let pts = sample_points(&a, 2, seed)?;
    pairs.push((a, b, pts));
    for (g, h, pts) in pairs {
        let rep = wu_verify(&g, &h, &pts, &opts)?;
        t.push(rep.worst_slack_chain);
        if let Some(w) = rep.worst_slack_mixing {
            t.push(w);
        }
        if let Some(w) = rep.worst_slack_pointwise_k {
            t.push(w);
        }
        if let Some(gb) = &rep.global {
            t.push(gb.worst_slack);
        }
    }
    t.done()
}

fn equal_metrics_equality(seed: u64) -> Result<Measure> {
    let mut t = Tally::new(Bound::AtMost);
    let f = MetricField::poincare_disk(1.0)?;
    let opts = WuOptions {
        samples: 100,
        seed,
        extrema: ExtremaOptions { seed, restarts: 4, ..Default::default() },
    };
    let rep = wu_verify(&f, &f, &sample_points(&f, 3, seed)?, &opts)?;
    for s in &rep.samples {
        t.push(s.slack_mixing.map_or(f64::INFINITY, f64::abs));
        t.push((s.h_sum - s.h_g / 2.0).abs());
    }
    t.done()
}
