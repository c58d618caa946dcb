//! Curvature of a sum of metrics, the quotient metric, and Wu's bound for
//! the holomorphic sectional curvature of `g + h`.
//!
//! For metrics `g`, `h` on the same bundle, `s ↦ s ⊕ s` embeds `(E, g + h)`
//! isometrically into `(E ⊕ E, g ⊕ h)`. The quotient by this subbundle is
//! identified with `E` through `(s, t) ↦ s − t` and carries the metric `q`;
//! the second fundamental form is `σ = D_g − D_h`. Then
//! `R_{g+h} = R_g + R_h − σ*q` with
//! `(σ*q)_{k l̄ i j̄} = Σ q_{p q̄} (σ_k)^p_i conj((σ_l)^q_j)`.

use serde::Serialize;

use crate::curvature::{
    chern_connection, curvature_tensor, hsc_extrema_at_jet, CurvatureTensor, Direction, ExtremaOptions,
    HscEvaluator,
};
use crate::error::{Error, Result};
use crate::field::MetricField;
use crate::jet::{jet_sum, MetricJet2};
use crate::linalg::{solve, Cholesky, Endomorphism, HermitianMatrix, C64};
use crate::point::ChartPoint;
use crate::sampling::{random_unit_direction, seeded_rng};

/// Tolerance on every inequality slack.
pub const SLACK_TOL: f64 = 1e-9;

/// `σ_k = Γ^g_k − Γ^h_k` as frame matrices: `σ_k e_i = Σ_p σ_k[i][p] e_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondFundamentalForm {
    sigma: Vec<Endomorphism>,
}

impl SecondFundamentalForm {
    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    pub fn component(&self, k: usize) -> &Endomorphism {
        &self.sigma[k]
    }

    /// `σ(ξ) = Σ_k ξ^k σ_k`.
    pub fn contract(&self, xi: &[C64]) -> Endomorphism {
        let rank = self.sigma[0].dim();
        self.sigma
            .iter()
            .zip(xi)
            .fold(Endomorphism::zeros(rank), |acc, (s, &c)| acc.add(&s.scale(c)))
    }

    pub fn max_abs(&self) -> f64 {
        self.sigma.iter().map(Endomorphism::max_abs).fold(0.0, f64::max)
    }
}

fn check_shapes(a: &MetricJet2, b: &MetricJet2) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), found: b.n() });
    }
    if a.rank() != b.rank() {
        return Err(Error::DimensionMismatch { expected: a.rank(), found: b.rank() });
    }
    Ok(())
}

pub fn second_fundamental_form(jet_g: &MetricJet2, jet_h: &MetricJet2) -> Result<SecondFundamentalForm> {
    check_shapes(jet_g, jet_h)?;
    let a = chern_connection(jet_g)?;
    let b = chern_connection(jet_h)?;
    let sigma = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x.sub(y)).collect();
    Ok(SecondFundamentalForm { sigma })
}

/// `q = A†GA + B†HB` with `A = (G+H)⁻¹H`, `B = (G+H)⁻¹G`.
pub fn quotient_metric(g: &HermitianMatrix, h: &HermitianMatrix) -> Result<HermitianMatrix> {
    if g.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: h.dim() });
    }
    Cholesky::factor(g)?;
    Cholesky::factor(h)?;
    let s = Cholesky::factor(&g.add(h))?;
    let a = s.solve(h.as_endomorphism());
    let b = s.solve(g.as_endomorphism());
    let q = a
        .adjoint()
        .matmul(g.as_endomorphism())
        .matmul(&a)
        .add(&b.adjoint().matmul(h.as_endomorphism()).matmul(&b));
    Ok(HermitianMatrix::from_endomorphism(&q))
}

/// Inverse of a general square matrix by Gaussian elimination with partial
/// pivoting.
fn general_inverse(m: &Endomorphism) -> Result<Endomorphism> {
    let n = m.dim();
    let mut a: Vec<Vec<C64>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect();
    let mut inv: Vec<Vec<C64>> = (0..n)
        .map(|i| (0..n).map(|j| C64::new((i == j) as u8 as f64, 0.0)).collect())
        .collect();
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
            .expect("non-empty range");
        if a[pivot][col].norm() <= 1e-14 * scale {
            return Err(Error::NotPositiveDefinite { pivot: col, value: a[pivot][col].norm() });
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = a[row][col];
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                let (ac, ic) = (a[col][j], inv[col][j]);
                a[row][j] -= f * ac;
                inv[row][j] -= f * ic;
            }
        }
    }
    Ok(Endomorphism::from_fn(n, |i, j| inv[i][j]))
}

/// `q` built as the metric induced on the quotient `(E ⊕ E)/j(E)`.
///
/// The `g ⊕ h`-orthogonal complement of `j(E) = {(s, s)}` is
/// `W = {(u, −H⁻¹Gu)}`. The projection `π(u, v) = u − v` maps it onto `E` by
/// `u ↦ (I + H⁻¹G)u`, and `q` is the restriction of `g ⊕ h` to `W`, read
/// through the inverse of that map.
pub fn quotient_metric_oracle(g: &HermitianMatrix, h: &HermitianMatrix) -> Result<HermitianMatrix> {
    if g.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: h.dim() });
    }
    let r = g.dim();
    Cholesky::factor(g)?;
    // v = K u on W
    let k = solve(h, g.as_endomorphism())?.scale(C64::new(-1.0, 0.0));
    // metric of g ⊕ h on (u, Ku), as a form in u
    let m = g.as_endomorphism().add(&k.adjoint().matmul(h.as_endomorphism()).matmul(&k));
    let pi = Endomorphism::identity(r).sub(&k);
    let t = general_inverse(&pi)?;
    Ok(HermitianMatrix::from_endomorphism(&t.adjoint().matmul(&m).matmul(&t)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    pub r_sum_direct: CurvatureTensor,
    pub r_g: CurvatureTensor,
    pub r_h: CurvatureTensor,
    pub correction: CurvatureTensor,
    pub residual: f64,
}

/// Checks `R_{g+h} = R_g + R_h − σ*q` at one point.
pub fn decompose(jet_g: &MetricJet2, jet_h: &MetricJet2) -> Result<DecompositionReport> {
    decompose_with_correction_sign(jet_g, jet_h, -1.0)
}

/// [`decompose`] with the jet of `g + h` supplied separately, e.g. from
/// differentiating the sum metric directly.
pub fn decompose_jets(jet_g: &MetricJet2, jet_h: &MetricJet2, jet_gh: &MetricJet2) -> Result<DecompositionReport> {
    check_shapes(jet_g, jet_gh)?;
    decompose_inner(jet_g, jet_h, jet_gh, -1.0)
}

/// [`decompose`] with the correction entering as `R_g + R_h + sign · σ*q`.
/// Any sign other than `−1` is a deliberately broken identity, used to show
/// that the residual check is not vacuous.
pub fn decompose_with_correction_sign(jet_g: &MetricJet2, jet_h: &MetricJet2, sign: f64) -> Result<DecompositionReport> {
    check_shapes(jet_g, jet_h)?;
    decompose_inner(jet_g, jet_h, &jet_sum(jet_g, jet_h)?, sign)
}

fn decompose_inner(jet_g: &MetricJet2, jet_h: &MetricJet2, jet_gh: &MetricJet2, sign: f64) -> Result<DecompositionReport> {
    check_shapes(jet_g, jet_h)?;
    let n = jet_g.n();
    let sigma = second_fundamental_form(jet_g, jet_h)?;
    let q = quotient_metric(jet_g.value(), jet_h.value())?;
    let q_sigma: Vec<Endomorphism> = (0..n)
        .map(|l| q.as_endomorphism().matmul(&sigma.component(l).adjoint()))
        .collect();
    let mut blocks = Vec::with_capacity(n * n);
    for k in 0..n {
        for l in 0..n {
            blocks.push(sigma.component(k).matmul(&q_sigma[l]));
        }
    }
    let correction = CurvatureTensor::from_blocks(n, blocks)?;
    let r_g = curvature_tensor(jet_g)?;
    let r_h = curvature_tensor(jet_h)?;
    let r_sum_direct = curvature_tensor(jet_gh)?;
    let predicted = r_g.add(&r_h).add(&correction.scale(sign));
    let residual = r_sum_direct.sub(&predicted).max_abs();
    Ok(DecompositionReport {
        r_sum_direct,
        r_g,
        r_h,
        correction,
        residual,
    })
}

fn domain_error(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

/// Slack of `xy/(x+y) ≤ (xa² + yb²)/(a+b)²` for `x, y > 0`, and of the reversed
/// inequality for `x, y < 0`; nonnegative when the inequality holds.
pub fn scalar_mixing_inequality(x: f64, y: f64, a: f64, b: f64) -> Result<f64> {
    if ![x, y, a, b].iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("scalar mixing inequality input"));
    }
    if !(a > 0.0 && b > 0.0) {
        return Err(domain_error(format!("a and b must be positive, got a = {a}, b = {b}")));
    }
    let sign = if x > 0.0 && y > 0.0 {
        1.0
    } else if x < 0.0 && y < 0.0 {
        -1.0
    } else {
        return Err(domain_error(format!("x and y must be nonzero with equal signs, got x = {x}, y = {y}")));
    };
    let mixed = (x * a * a + y * b * b) / ((a + b) * (a + b));
    let harmonic = x * y / (x + y);
    Ok(sign * (mixed - harmonic))
}

/// `−K_g K_h / (K_g + K_h)`.
pub fn wu_bound(k_g: f64, k_h: f64) -> Result<f64> {
    if !(k_g > 0.0 && k_h > 0.0) || !k_g.is_finite() || !k_h.is_finite() {
        return Err(domain_error(format!("curvature bounds must be positive, got {k_g} and {k_h}")));
    }
    Ok(-k_g * k_h / (k_g + k_h))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WuOptions {
    /// Directions per point.
    pub samples: usize,
    pub seed: u64,
    pub extrema: ExtremaOptions,
}

impl Default for WuOptions {
    fn default() -> Self {
        WuOptions {
            samples: 100,
            seed: 0,
            extrema: ExtremaOptions::default(),
        }
    }
}

/// One direction at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WuSample {
    pub point: usize,
    pub direction: Direction,
    pub h_g: f64,
    pub h_h: f64,
    pub h_sum: f64,
    /// `(H_g|ξ|_g⁴ + H_h|ξ|_h⁴)/(|ξ|_g² + |ξ|_h²)²`.
    pub chain: f64,
    /// `chain − H_{g+h}`.
    pub slack_chain: f64,
    /// `H_gH_h/(H_g + H_h)`, only when both are negative.
    pub mixing_bound: Option<f64>,
    /// `mixing_bound − chain`.
    pub slack_mixing: Option<f64>,
    /// `wu_bound(K_g, K_h) − H_{g+h}` with this point's constants.
    pub slack_pointwise_k: Option<f64>,
}

/// Curvature constants at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WuPoint {
    pub point: ChartPoint,
    pub max_h_g: f64,
    pub max_h_h: f64,
    /// `−max H_g` when positive.
    pub k_g: Option<f64>,
    pub k_h: Option<f64>,
    pub bound: Option<f64>,
    pub extrema_converged: bool,
}

/// The bound with constants taken over all points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalBound {
    pub k_g: f64,
    pub k_h: f64,
    pub bound: f64,
    pub worst_slack: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WuReport {
    pub points: Vec<WuPoint>,
    pub samples: Vec<WuSample>,
    pub worst_slack_chain: f64,
    pub worst_slack_mixing: Option<f64>,
    pub worst_slack_pointwise_k: Option<f64>,
    /// Links (i) and (ii) over all samples.
    pub chain_pass: bool,
    /// `None` when some point has nonnegative maximal curvature.
    pub global: Option<GlobalBound>,
    pub pass: bool,
}

fn worst(values: impl Iterator<Item = f64>) -> Option<f64> {
    values.fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.min(v))))
}

fn verify_point(
    field_g: &MetricField,
    field_h: &MetricField,
    idx: usize,
    p: &ChartPoint,
    opts: &WuOptions,
) -> Result<(WuPoint, Vec<WuSample>)> {
    let jet_g = field_g.evaluate_jet(p)?;
    let jet_h = field_h.evaluate_jet(p)?;
    let jet_s = jet_sum(&jet_g, &jet_h)?;
    let (eg, eh, es) = (HscEvaluator::new(&jet_g)?, HscEvaluator::new(&jet_h)?, HscEvaluator::new(&jet_s)?);
    let ext = ExtremaOptions { seed: opts.extrema.seed ^ idx as u64, ..opts.extrema };
    let xg = hsc_extrema_at_jet(&jet_g, &ext)?;
    let xh = hsc_extrema_at_jet(&jet_h, &ext)?;
    let k_g = (xg.max < 0.0).then_some(-xg.max);
    let k_h = (xh.max < 0.0).then_some(-xh.max);
    let bound = match (k_g, k_h) {
        (Some(a), Some(b)) => Some(wu_bound(a, b)?),
        _ => None,
    };
    let mut rng = seeded_rng(opts.seed, idx as u64);
    let mut samples = Vec::with_capacity(opts.samples);
    for _ in 0..opts.samples {
        let xi = random_unit_direction(&mut rng, p.n());
        let (h_g, h_h, h_sum) = (eg.eval(&xi)?, eh.eval(&xi)?, es.eval(&xi)?);
        let a = jet_g.value().norm_sqr(&xi);
        let b = jet_h.value().norm_sqr(&xi);
        let chain = (h_g * a * a + h_h * b * b) / ((a + b) * (a + b));
        let mixing_bound = (h_g < 0.0 && h_h < 0.0).then(|| h_g * h_h / (h_g + h_h));
        samples.push(WuSample {
            point: idx,
            direction: Direction::new(xi)?,
            h_g,
            h_h,
            h_sum,
            chain,
            slack_chain: chain - h_sum,
            mixing_bound,
            slack_mixing: mixing_bound.map(|m| m - chain),
            slack_pointwise_k: bound.map(|b| b - h_sum),
        });
    }
    let point = WuPoint {
        point: p.clone(),
        max_h_g: xg.max,
        max_h_h: xh.max,
        k_g,
        k_h,
        bound,
        extrema_converged: xg.converged && xh.converged,
    };
    Ok((point, samples))
}

/// Checks the chain `H_{g+h}(ξ) ≤ chain(ξ) ≤ H_gH_h/(H_g+H_h)` at seeded
/// directions, and the bound with constants from direction extrema, both per
/// point and over all points.
pub fn wu_verify(field_g: &MetricField, field_h: &MetricField, points: &[ChartPoint], opts: &WuOptions) -> Result<WuReport> {
    if field_g.n() != field_h.n() {
        return Err(Error::DimensionMismatch { expected: field_g.n(), found: field_h.n() });
    }
    for f in [field_g, field_h] {
        if f.rank() != f.n() {
            return Err(Error::RankMismatch { rank: f.rank(), dim: f.n() });
        }
    }
    if opts.samples == 0 {
        return Err(Error::InvalidParameter { name: "samples".into(), reason: "must be at least 1".into() });
    }
    if points.is_empty() {
        return Err(Error::InvalidParameter { name: "points".into(), reason: "need at least one point".into() });
    }
    let run = |(idx, p): (usize, &ChartPoint)| verify_point(field_g, field_h, idx, p, opts);
    #[cfg(feature = "parallel")]
    let per_point: Vec<Result<(WuPoint, Vec<WuSample>)>> = {
        use rayon::prelude::*;
        points.par_iter().enumerate().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let per_point: Vec<Result<(WuPoint, Vec<WuSample>)>> = points.iter().enumerate().map(run).collect();

    let mut pts = Vec::with_capacity(points.len());
    let mut samples = Vec::with_capacity(points.len() * opts.samples);
    for r in per_point {
        let (p, s) = r?;
        pts.push(p);
        samples.extend(s);
    }
    let worst_slack_chain = worst(samples.iter().map(|s| s.slack_chain)).expect("samples exist");
    let worst_slack_mixing = worst(samples.iter().filter_map(|s| s.slack_mixing));
    let worst_slack_pointwise_k = worst(samples.iter().filter_map(|s| s.slack_pointwise_k));
    let chain_pass = worst_slack_chain >= -SLACK_TOL && worst_slack_mixing.is_none_or(|w| w >= -SLACK_TOL);

    let global = match (
        pts.iter().map(|p| p.k_g).collect::<Option<Vec<f64>>>(),
        pts.iter().map(|p| p.k_h).collect::<Option<Vec<f64>>>(),
    ) {
        (Some(kg), Some(kh)) => {
            let k_g = kg.into_iter().fold(f64::INFINITY, f64::min);
            let k_h = kh.into_iter().fold(f64::INFINITY, f64::min);
            let bound = wu_bound(k_g, k_h)?;
            let worst_slack = worst(samples.iter().map(|s| bound - s.h_sum)).expect("samples exist");
            Some(GlobalBound {
                k_g,
                k_h,
                bound,
                worst_slack,
                pass: worst_slack >= -SLACK_TOL,
            })
        }
        _ => None,
    };
    let pointwise_k_pass = worst_slack_pointwise_k.is_none_or(|w| w >= -SLACK_TOL);
    let pass = chain_pass && pointwise_k_pass && global.as_ref().is_none_or(|g| g.pass);
    Ok(WuReport {
        points: pts,
        samples,
        worst_slack_chain,
        worst_slack_mixing,
        worst_slack_pointwise_k,
        chain_pass,
        global,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::field::{Domain, MetricField};
    use crate::linalg::{is_positive_definite, is_positive_semidefinite};
    use crate::sampling::{random_positive_definite, sample_points};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pt(x: f64, y: f64) -> ChartPoint {
        ChartPoint::new(vec![c(x, y)]).unwrap()
    }

    #[test]
    fn quotient_metric_examples() {
        let i = HermitianMatrix::identity(3);
        assert!(quotient_metric(&i, &i).unwrap().sub(&i.scale(0.5)).max_abs() < 1e-15);
        assert!(quotient_metric_oracle(&i, &i).unwrap().sub(&i.scale(0.5)).max_abs() < 1e-15);
        let g = HermitianMatrix::diagonal(&[1.0]);
        let h = HermitianMatrix::diagonal(&[3.0]);
        assert!((quotient_metric(&g, &h).unwrap()[(0, 0)] - c(0.75, 0.0)).norm() < 1e-15);
        assert!((quotient_metric_oracle(&g, &h).unwrap()[(0, 0)] - c(0.75, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn quotient_metric_agrees_with_oracle() {
        let mut rng = seeded_rng(3, 0);
        for dim in 1..=6 {
            for _ in 0..20 {
                let g = random_positive_definite(&mut rng, dim, 0.1);
                let h = random_positive_definite(&mut rng, dim, 0.1);
                let q = quotient_metric(&g, &h).unwrap();
                let o = quotient_metric_oracle(&g, &h).unwrap();
                assert!(q.sub(&o).max_abs() <= 1e-12, "{}", q.sub(&o).max_abs());
                assert!(is_positive_definite(&q).unwrap());
                assert!(is_positive_semidefinite(&g.add(&h).sub(&q), 1e-12).unwrap());
            }
        }
    }

    #[test]
    fn quotient_metric_rejects_bad_input() {
        let g = HermitianMatrix::identity(2);
        assert!(quotient_metric(&g, &HermitianMatrix::identity(3)).is_err());
        assert!(quotient_metric(&g, &HermitianMatrix::diagonal(&[1.0, -1.0])).is_err());
        assert!(quotient_metric_oracle(&g, &HermitianMatrix::zeros(2)).is_err());
    }

    #[test]
    fn second_fundamental_form_examples() {
        let f = MetricField::poincare_disk(1.0).unwrap();
        let jet = f.evaluate_jet(&pt(0.3, 0.2)).unwrap();
        assert_eq!(second_fundamental_form(&jet, &jet).unwrap().max_abs(), 0.0);

        let g = MetricJet2::constant(HermitianMatrix::diagonal(&[1.0, 2.0]), 2);
        let h = MetricJet2::constant(HermitianMatrix::identity(2), 2);
        assert_eq!(second_fundamental_form(&g, &h).unwrap().max_abs(), 0.0);

        // n = 1: σ = ∂ log λ − ∂ log μ
        let mu = MetricField::conformal(1, Expr::parse("exp(x_1)").unwrap(), Domain::Whole).unwrap();
        let p = pt(0.4, -0.1);
        let jl = f.evaluate_jet(&p).unwrap();
        let jm = mu.evaluate_jet(&p).unwrap();
        let s = second_fundamental_form(&jl, &jm).unwrap();
        let z = c(0.4, -0.1);
        let dlog_lambda = 2.0 * z.conj() / (1.0 - z.norm_sqr());
        let want = dlog_lambda - c(0.5, 0.0);
        assert!((s.component(0)[(0, 0)] - want).norm() < 1e-6);
        assert!((s.contract(&[c(0.0, 2.0)])[(0, 0)] - want * c(0.0, 2.0)).norm() < 1e-6);
    }

    #[test]
    fn equal_jets_decompose_trivially() {
        let jet = MetricField::complex_ball(2).unwrap().evaluate_jet(&ChartPoint::new(vec![c(0.1, 0.2), c(-0.3, 0.1)]).unwrap()).unwrap();
        let rep = decompose(&jet, &jet).unwrap();
        assert!(rep.residual <= 1e-10);
        assert_eq!(rep.correction.max_abs(), 0.0);
        assert!(rep.r_sum_direct.sub(&rep.r_g.scale(2.0)).max_abs() <= 1e-10);
    }

    /// `S∂∂̄log S = λ∂∂̄log λ + μ∂∂̄log μ + (λμ/S)|∂log λ − ∂log μ|²` with `S = λ + μ`.
    #[test]
    fn scalar_identity_oracle() {
        let g = MetricField::poincare_disk(1.0).unwrap();
        let h = MetricField::exp_quadratic([0.0, 1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        for p in sample_points(&g, 20, 1).unwrap() {
            let (jl, jm) = (g.evaluate_jet(&p).unwrap(), h.evaluate_jet(&p).unwrap());
            let rep = decompose(&jl, &jm).unwrap();
            assert!(rep.residual <= 1e-8, "{}", rep.residual);
            let parts = |j: &MetricJet2| {
                let v = j.value()[(0, 0)].re;
                let d = j.d(0)[(0, 0)] / v;
                (v, d, j.ddbar(0, 0)[(0, 0)].re / v - d.norm_sqr())
            };
            let (l, dl, ll) = parts(&jl);
            let (m, dm, mm) = parts(&jm);
            let s = l + m;
            let rhs = l * ll + m * mm + l * m / s * (dl - dm).norm_sqr();
            // R = −λ∂∂̄ log λ
            assert!((rep.r_sum_direct.get(0, 0, 0, 0).re + rhs).abs() < 1e-10);
            assert!((rep.correction.get(0, 0, 0, 0).re - l * m / s * (dl - dm).norm_sqr()).abs() < 1e-10);
        }
    }

    #[test]
    fn decomposition_is_symmetric_and_canary_breaks_it() {
        let g = MetricField::fubini_study_chart(2).unwrap();
        let h = MetricField::complex_ball(2).unwrap();
        let p = ChartPoint::new(vec![c(0.2, -0.1), c(0.3, 0.4)]).unwrap();
        let (jg, jh) = (g.evaluate_jet(&p).unwrap(), h.evaluate_jet(&p).unwrap());
        let a = decompose(&jg, &jh).unwrap();
        let b = decompose(&jh, &jg).unwrap();
        assert!(a.residual <= 1e-12 && b.residual <= 1e-12);
        assert!((a.residual - b.residual).abs() <= 1e-12);
        assert!(a.correction.sub(&b.correction).max_abs() <= 1e-12);
        let broken = decompose_with_correction_sign(&jg, &jh, 1.0).unwrap();
        assert!(broken.residual >= 1e-2);
    }

    #[test]
    fn decompose_rejects_mismatched_jets() {
        let a = MetricJet2::constant(HermitianMatrix::identity(1), 1);
        let b = MetricJet2::constant(HermitianMatrix::identity(2), 2);
        assert!(decompose(&a, &b).is_err());
    }

    #[test]
    fn scalar_inequality_examples() {
        assert_eq!(scalar_mixing_inequality(1.0, 1.0, 1.0, 1.0).unwrap(), 0.0);
        assert!((scalar_mixing_inequality(1.0, 2.0, 1.0, 1.0).unwrap() - 1.0 / 12.0).abs() < 1e-15);
        assert!((scalar_mixing_inequality(-1.0, -2.0, 1.0, 1.0).unwrap() - 1.0 / 12.0).abs() < 1e-15);
        // equality whenever x a = y b
        assert!(scalar_mixing_inequality(2.0, 1.0, 1.0, 2.0).unwrap().abs() < 1e-15);
        assert!(scalar_mixing_inequality(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(scalar_mixing_inequality(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(scalar_mixing_inequality(0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn wu_bound_examples() {
        assert_eq!(wu_bound(2.0, 2.0).unwrap(), -1.0);
        assert_eq!(wu_bound(1.0, 1.0).unwrap(), -0.5);
        assert_eq!(wu_bound(1.0, 3.0).unwrap(), -0.75);
        assert!(wu_bound(0.0, 1.0).is_err());
        assert!(wu_bound(1.0, -1.0).is_err());
    }

    fn quick() -> WuOptions {
        WuOptions {
            samples: 50,
            seed: 7,
            extrema: ExtremaOptions { restarts: 4, ..Default::default() },
        }
    }

    #[test]
    fn wu_verify_equal_disks_is_sharp() {
        let f = MetricField::poincare_disk(1.0).unwrap();
        let pts = sample_points(&f, 3, 2).unwrap();
        let rep = wu_verify(&f, &f, &pts, &quick()).unwrap();
        assert!(rep.pass);
        assert!(rep.worst_slack_mixing.unwrap().abs() <= 1e-9);
        for s in &rep.samples {
            assert!((s.h_sum + 1.0).abs() < 1e-9 && s.slack_chain.abs() < 1e-9);
        }
        let g = rep.global.unwrap();
        assert!((g.bound + 1.0).abs() < 1e-9);
    }

    #[test]
    fn wu_verify_disks_of_different_curvature() {
        let g = MetricField::poincare_disk(1.0).unwrap();
        let h = MetricField::poincare_disk(3.0).unwrap();
        let pts = sample_points(&g, 3, 4).unwrap();
        let rep = wu_verify(&g, &h, &pts, &quick()).unwrap();
        assert!(rep.pass);
        for s in &rep.samples {
            assert!(s.h_sum <= -0.5 + 1e-9);
            assert!((s.mixing_bound.unwrap() + 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn wu_verify_positive_curvature_skips_mixing_link() {
        let f = MetricField::fubini_study_chart(1).unwrap();
        let pts = sample_points(&f, 2, 5).unwrap();
        let rep = wu_verify(&f, &f, &pts, &quick()).unwrap();
        assert!(rep.chain_pass);
        assert!(rep.worst_slack_mixing.is_none());
        assert!(rep.global.is_none());
    }

    #[test]
    fn wu_verify_is_deterministic_and_validates() {
        let g = MetricField::complex_ball(2).unwrap();
        let h = MetricField::scale(2.0, MetricField::complex_ball(2).unwrap()).unwrap();
        let pts = sample_points(&g, 2, 9).unwrap();
        assert_eq!(wu_verify(&g, &h, &pts, &quick()).unwrap(), wu_verify(&g, &h, &pts, &quick()).unwrap());
        let bad = WuOptions { samples: 0, ..quick() };
        assert!(wu_verify(&g, &h, &pts, &bad).is_err());
        assert!(wu_verify(&g, &MetricField::poincare_disk(1.0).unwrap(), &pts, &quick()).is_err());
        assert!(wu_verify(&g, &h, &[], &quick()).is_err());
    }
}
