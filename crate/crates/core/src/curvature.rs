//! Chern connection, Chern curvature and holomorphic sectional curvature.
//!
//! Conventions (used everywhere in this crate):
//!
//! * the metric matrix is `H[i][j] = h_{i j̄} = h(e_i, e_j)` in a holomorphic
//!   frame `e_i`, and `|ξ|² = Σ h_{i j̄} ξ^i conj(ξ^j)`;
//! * connection matrices are frame matrices, `D_{∂_k} e_i = Σ_p Γ_k[i][p] e_p`,
//!   so `∂_k H = Γ_k H`, i.e. `Γ_k = ∂_k H · H⁻¹`;
//! * `R_{k l̄ i j̄} = −∂_k ∂̄_l h_{i j̄} + Σ_{p,q} h^{p q̄} (∂_k h_{i q̄})(∂̄_l h_{p j̄})`,
//!   which in matrix form is `R_{k l̄} = −∂_k∂̄_l H + ∂_k H · H⁻¹ · (∂_l H)†`;
//! * `H(ξ) = R(ξ, ξ̄, ξ, ξ̄) / |ξ|⁴`, without a factor of 2. With this
//!   normalization the metric `(1 − |z|²)^{-2}|dz|²` has `H ≡ −2` and the
//!   Gaussian curvature of `λ|dz|²` is `K = 2H`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::MetricField;
use crate::jet::MetricJet2;
use crate::linalg::{solve, Cholesky, Endomorphism, HermitianMatrix, C64};
use crate::point::{format_complex_list, ChartPoint};
use crate::sampling::{random_unit_direction, seeded_rng};

/// Imaginary residue allowed in `R(ξ, ξ̄, ξ, ξ̄)` for unit `ξ`.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-9;

/// Chern connection matrices `Γ_k = ∂_k H · H⁻¹`, one per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionCoefficients {
    gamma: Vec<Endomorphism>,
}

impl ConnectionCoefficients {
    pub fn n(&self) -> usize {
        self.gamma.len()
    }

    pub fn gamma(&self, k: usize) -> &Endomorphism {
        &self.gamma[k]
    }

    pub fn as_slice(&self) -> &[Endomorphism] {
        &self.gamma
    }
}

pub fn chern_connection(jet: &MetricJet2) -> Result<ConnectionCoefficients> {
    let chol = Cholesky::factor(jet.value())?;
    // Γ_k = (H⁻¹ (∂_k H)†)† since H⁻¹ is Hermitian
    let gamma = (0..jet.n())
        .map(|k| chol.solve(&jet.d(k).adjoint()).adjoint())
        .collect();
    Ok(ConnectionCoefficients { gamma })
}

/// Components `R_{k l̄ i j̄}` stored as one `r × r` block per `(k, l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    n: usize,
    rank: usize,
    blocks: Vec<Endomorphism>,
}

impl CurvatureTensor {
    pub fn from_blocks(n: usize, blocks: Vec<Endomorphism>) -> Result<Self> {
        if blocks.len() != n * n || n == 0 {
            return Err(Error::DimensionMismatch { expected: n * n, found: blocks.len() });
        }
        let rank = blocks[0].dim();
        if let Some(b) = blocks.iter().find(|b| b.dim() != rank) {
            return Err(Error::DimensionMismatch { expected: rank, found: b.dim() });
        }
        Ok(CurvatureTensor { n, rank, blocks })
    }

    pub fn zeros(n: usize, rank: usize) -> Self {
        CurvatureTensor {
            n,
            rank,
            blocks: vec![Endomorphism::zeros(rank); n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The `r × r` block `(R_{k l̄ i j̄})_{ij}`.
    pub fn block(&self, k: usize, l: usize) -> &Endomorphism {
        &self.blocks[k * self.n + l]
    }

    /// `R_{k l̄ i j̄}`.
    pub fn get(&self, k: usize, l: usize, i: usize, j: usize) -> C64 {
        self.block(k, l)[(i, j)]
    }

    fn zip(&self, other: &CurvatureTensor, f: impl Fn(&Endomorphism, &Endomorphism) -> Endomorphism) -> Self {
        assert_eq!((self.n, self.rank), (other.n, other.rank), "tensor shape mismatch");
        CurvatureTensor {
            n: self.n,
            rank: self.rank,
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &CurvatureTensor) -> Self {
        self.zip(other, Endomorphism::add)
    }

    pub fn sub(&self, other: &CurvatureTensor) -> Self {
        self.zip(other, Endomorphism::sub)
    }

    pub fn scale(&self, c: f64) -> Self {
        CurvatureTensor {
            n: self.n,
            rank: self.rank,
            blocks: self.blocks.iter().map(|b| b.scale(C64::new(c, 0.0))).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(Endomorphism::max_abs).fold(0.0, f64::max)
    }

    /// Largest `|R_{k l̄ i j̄} − conj(R_{l k̄ j ī})|`.
    pub fn pair_symmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..self.n {
            for l in 0..self.n {
                for i in 0..self.rank {
                    for j in 0..self.rank {
                        worst = worst.max((self.get(k, l, i, j) - self.get(l, k, j, i).conj()).norm());
                    }
                }
            }
        }
        worst
    }

    /// Largest `|R_{k l̄ i j̄} − R_{i l̄ k j̄}|`; zero for Kähler metrics.
    pub fn kahler_symmetry_defect(&self) -> Result<f64> {
        if self.rank != self.n {
            return Err(Error::RankMismatch { rank: self.rank, dim: self.n });
        }
        let mut worst: f64 = 0.0;
        for k in 0..self.n {
            for l in 0..self.n {
                for i in 0..self.n {
                    for j in 0..self.n {
                        worst = worst.max((self.get(k, l, i, j) - self.get(i, l, k, j)).norm());
                    }
                }
            }
        }
        Ok(worst)
    }

    /// `R(ξ, ξ̄, ξ, ξ̄) = Σ R_{k l̄ i j̄} ξ^k ξ̄^l ξ^i ξ̄^j`, complex before the
    /// residue check.
    pub fn quartic(&self, xi: &[C64]) -> C64 {
        let n = self.n;
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..n {
            for l in 0..n {
                let kl = xi[k] * xi[l].conj();
                let block = self.block(k, l);
                for i in 0..n {
                    for j in 0..n {
                        acc += block[(i, j)] * kl * xi[i] * xi[j].conj();
                    }
                }
            }
        }
        acc
    }
}

/// Chern curvature of the metric whose jet is given.
pub fn curvature_tensor(jet: &MetricJet2) -> Result<CurvatureTensor> {
    let n = jet.n();
    let chol = Cholesky::factor(jet.value())?;
    // H⁻¹ (∂_l H)† for each l
    let solved: Vec<Endomorphism> = (0..n).map(|l| chol.solve(&jet.dbar(l))).collect();
    let mut blocks = Vec::with_capacity(n * n);
    for k in 0..n {
        for l in 0..n {
            blocks.push(jet.d(k).matmul(&solved[l]).sub(jet.ddbar(k, l)));
        }
    }
    CurvatureTensor::from_blocks(n, blocks)
}

/// A nonzero tangent vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(Vec<C64>);

impl Direction {
    pub fn new(components: Vec<C64>) -> Result<Self> {
        if components.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("direction"));
        }
        if components.iter().all(|z| z.norm() == 0.0) {
            return Err(Error::ZeroDirection);
        }
        Ok(Direction(components))
    }

    pub fn components(&self) -> &[C64] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Direction {
        let s = self.euclidean_norm();
        Direction(self.0.iter().map(|z| z / s).collect())
    }
}

impl Serialize for Direction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_complex_list(&self.0))
    }
}

/// Curvature tensor and metric at one point, for repeated HSC evaluation.
#[derive(Debug, Clone)]
pub struct HscEvaluator {
    tensor: CurvatureTensor,
    metric: HermitianMatrix,
}

impl HscEvaluator {
    pub fn new(jet: &MetricJet2) -> Result<Self> {
        if jet.rank() != jet.n() {
            return Err(Error::RankMismatch { rank: jet.rank(), dim: jet.n() });
        }
        Ok(HscEvaluator {
            tensor: curvature_tensor(jet)?,
            metric: jet.value().clone(),
        })
    }

    pub fn tensor(&self) -> &CurvatureTensor {
        &self.tensor
    }

    pub fn metric(&self) -> &HermitianMatrix {
        &self.metric
    }

    pub fn n(&self) -> usize {
        self.tensor.n()
    }

    /// `H(ξ)`; errors on zero directions and on an imaginary residue above
    /// [`IMAGINARY_RESIDUE_TOL`].
    pub fn eval(&self, xi: &[C64]) -> Result<f64> {
        if xi.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: xi.len() });
        }
        let scale = xi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(scale > 0.0) {
            return Err(Error::ZeroDirection);
        }
        let unit: Vec<C64> = xi.iter().map(|z| z / scale).collect();
        let r = self.tensor.quartic(&unit);
        if r.im.abs() > IMAGINARY_RESIDUE_TOL * r.re.abs().max(1.0) {
            return Err(Error::InconsistentJet { residue: r.im.abs() });
        }
        let norm2 = self.metric.norm_sqr(&unit);
        Ok(r.re / (norm2 * norm2))
    }

    /// `H` on interleaved real coordinates, for the optimizer.
    fn eval_real(&self, t: &[f64]) -> f64 {
        let xi: Vec<C64> = t.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
        let r = self.tensor.quartic(&xi);
        let norm2 = self.metric.norm_sqr(&xi);
        r.re / (norm2 * norm2)
    }
}

/// Holomorphic sectional curvature of the jet's metric in direction `xi`.
pub fn hsc(jet: &MetricJet2, xi: &Direction) -> Result<f64> {
    HscEvaluator::new(jet)?.eval(xi.components())
}

/// Gaussian curvature `K = −(2/λ) ∂∂̄ log λ` of `λ|dz|²`.
pub fn gaussian_curvature_1d(jet: &MetricJet2) -> Result<f64> {
    if jet.n() != 1 || jet.rank() != 1 {
        return Err(Error::RankMismatch { rank: jet.rank(), dim: jet.n() });
    }
    let lambda = jet.value()[(0, 0)].re;
    if !(lambda > 0.0) {
        return Err(Error::NotPositiveDefinite { pivot: 0, value: lambda });
    }
    let d = jet.d(0)[(0, 0)];
    let dd = jet.ddbar(0, 0)[(0, 0)].re;
    let ddbar_log = dd / lambda - d.norm_sqr() / (lambda * lambda);
    Ok(-2.0 / lambda * ddbar_log)
}

/// Candidate directions scored per restart before climbing.
const PRESCREEN: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremaOptions {
    pub restarts: usize,
    pub tol: f64,
    pub seed: u64,
    pub max_iterations: usize,
    pub gradient_step: f64,
}

impl Default for ExtremaOptions {
    fn default() -> Self {
        ExtremaOptions {
            restarts: 32,
            tol: 1e-8,
            seed: 0,
            max_iterations: 500,
            gradient_step: 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HscExtremaReport {
    pub min: f64,
    pub max: f64,
    pub argmin: Direction,
    pub argmax: Direction,
    pub restarts: usize,
    /// Every ascent and descent met the gradient tolerance.
    pub converged: bool,
}

const ARMIJO: f64 = 0.25;

struct Climb {
    value: f64,
    point: Vec<f64>,
    converged: bool,
}

fn normalize(t: &mut [f64]) {
    let s = t.iter().map(|v| v * v).sum::<f64>().sqrt();
    t.iter_mut().for_each(|v| *v /= s);
}

/// Projected gradient ascent of `sign · H` on the unit sphere of `R^{2n}`.
fn climb(eval: &HscEvaluator, start: &[f64], sign: f64, opts: &ExtremaOptions) -> Climb {
    let f = |t: &[f64]| sign * eval.eval_real(t);
    let h = opts.gradient_step;
    let mut x = start.to_vec();
    normalize(&mut x);
    let mut fx = f(&x);
    let mut step = 0.5;
    let dims = x.len();
    for _ in 0..opts.max_iterations {
        let mut grad: Vec<f64> = (0..dims)
            .map(|a| {
                let mut plus = x.clone();
                let mut minus = x.clone();
                plus[a] += h;
                minus[a] -= h;
                (f(&plus) - f(&minus)) / (2.0 * h)
            })
            .collect();
        let radial: f64 = grad.iter().zip(&x).map(|(g, v)| g * v).sum();
        grad.iter_mut().zip(&x).for_each(|(g, v)| *g -= radial * v);
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm < opts.tol {
            return Climb { value: sign * fx, point: x, converged: true };
        }
        let mut accepted = false;
        for _ in 0..60 {
            let mut trial: Vec<f64> = x.iter().zip(&grad).map(|(v, g)| v + step * g).collect();
            normalize(&mut trial);
            let ft = f(&trial);
            // Armijo condition
            if ft >= fx + ARMIJO * step * gnorm * gnorm && ft > fx {
                x = trial;
                fx = ft;
                accepted = true;
                step = (step * 2.0).min(8.0);
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // no ascent left at machine precision
            return Climb { value: sign * fx, point: x, converged: gnorm < opts.tol.sqrt() };
        }
    }
    Climb { value: sign * fx, point: x, converged: false }
}

/// Extremes of `H` over directions at the point of `jet`.
pub fn hsc_extrema_at_jet(jet: &MetricJet2, opts: &ExtremaOptions) -> Result<HscExtremaReport> {
    let eval = HscEvaluator::new(jet)?;
    let n = eval.n();
    let restarts = opts.restarts.max(1);
    let run = |idx: usize| -> (Climb, Climb) {
        let mut rng = seeded_rng(opts.seed, idx as u64);
        let mut candidates: Vec<Vec<C64>> = (0..PRESCREEN).map(|_| random_unit_direction(&mut rng, n)).collect();
        if idx == 0 {
            candidates.extend((0..n).map(|k| (0..n).map(|j| C64::new((j == k) as u8 as f64, 0.0)).collect()));
        }
        let scored: Vec<(f64, Vec<f64>)> = candidates
            .into_iter()
            .map(|c| {
                let v = eval.eval(&c).unwrap_or(f64::NAN);
                (v, c.iter().flat_map(|z| [z.re, z.im]).collect())
            })
            .filter(|(v, _)| v.is_finite())
            .collect();
        let pick = |better: fn(f64, f64) -> bool| {
            scored
                .iter()
                .fold(None::<&(f64, Vec<f64>)>, |acc, c| match acc {
                    Some(a) if !better(c.0, a.0) => Some(a),
                    _ => Some(c),
                })
                .map(|c| c.1.clone())
                .unwrap_or_else(|| vec![1.0; 2 * n])
        };
        let (lo_start, hi_start) = (pick(|a, b| a < b), pick(|a, b| a > b));
        (climb(&eval, &lo_start, -1.0, opts), climb(&eval, &hi_start, 1.0, opts))
    };
    #[cfg(feature = "parallel")]
    let results: Vec<(Climb, Climb)> = {
        use rayon::prelude::*;
        (0..restarts).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<(Climb, Climb)> = (0..restarts).map(run).collect();

    let mut converged = true;
    let mut best_min: Option<&Climb> = None;
    let mut best_max: Option<&Climb> = None;
    for (lo, hi) in &results {
        converged &= lo.converged && hi.converged;
        if best_min.is_none_or(|b| lo.value < b.value) {
            best_min = Some(lo);
        }
        if best_max.is_none_or(|b| hi.value > b.value) {
            best_max = Some(hi);
        }
    }
    let to_dir = |c: &Climb| {
        Direction::new(c.point.chunks(2).map(|p| C64::new(p[0], p[1])).collect())
            .map(|d| d.normalized())
    };
    let (lo, hi) = (best_min.expect("at least one restart"), best_max.expect("at least one restart"));
    if !lo.value.is_finite() || !hi.value.is_finite() {
        return Err(Error::NonFinite("holomorphic sectional curvature"));
    }
    Ok(HscExtremaReport {
        min: lo.value,
        max: hi.value,
        argmin: to_dir(lo)?,
        argmax: to_dir(hi)?,
        restarts,
        converged,
    })
}

/// Extremes of `H` over directions at `p`.
pub fn hsc_extrema(field: &MetricField, p: &ChartPoint, opts: &ExtremaOptions) -> Result<HscExtremaReport> {
    hsc_extrema_at_jet(&field.evaluate_jet(p)?, opts)
}

/// `Γ_k` by an explicit solve, for checking [`chern_connection`].
#[doc(hidden)]
pub fn chern_connection_by_solve(jet: &MetricJet2) -> Result<Vec<Endomorphism>> {
    (0..jet.n())
        .map(|k| solve(jet.value(), &jet.d(k).adjoint()).map(|m| m.adjoint()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::MetricField;
    use crate::jet::jet_scale;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pt(coords: &[(f64, f64)]) -> ChartPoint {
        ChartPoint::new(coords.iter().map(|&(a, b)| c(a, b)).collect()).unwrap()
    }

    fn dir(coords: &[(f64, f64)]) -> Direction {
        Direction::new(coords.iter().map(|&(a, b)| c(a, b)).collect()).unwrap()
    }

    #[test]
    fn euclidean_connection_and_curvature_vanish() {
        let jet = MetricField::euclidean(2).unwrap().evaluate_jet(&pt(&[(0.1, 0.2), (-0.3, 0.0)])).unwrap();
        let conn = chern_connection(&jet).unwrap();
        assert!(conn.as_slice().iter().all(|g| g.max_abs() == 0.0));
        assert_eq!(curvature_tensor(&jet).unwrap().max_abs(), 0.0);
        assert_eq!(hsc(&jet, &dir(&[(1.0, 0.0), (0.5, -2.0)])).unwrap(), 0.0);
    }

    #[test]
    fn poincare_connection_at_half() {
        let jet = MetricField::poincare_disk(1.0).unwrap().evaluate_jet(&pt(&[(0.5, 0.0)])).unwrap();
        let conn = chern_connection(&jet).unwrap();
        assert!((conn.gamma(0)[(0, 0)] - c(4.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn product_connection_is_block_diagonal() {
        let f = MetricField::product(
            MetricField::poincare_disk(1.0).unwrap(),
            MetricField::complex_ball(1).unwrap(),
        );
        let p = pt(&[(0.5, 0.0), (0.1, 0.3)]);
        let conn = chern_connection(&f.evaluate_jet(&p).unwrap()).unwrap();
        let a = chern_connection(&MetricField::poincare_disk(1.0).unwrap().evaluate_jet(&pt(&[(0.5, 0.0)])).unwrap()).unwrap();
        let b = chern_connection(&MetricField::complex_ball(1).unwrap().evaluate_jet(&pt(&[(0.1, 0.3)])).unwrap()).unwrap();
        let zero = Endomorphism::zeros(1);
        assert!(conn.gamma(0).sub(&a.gamma(0).block_diag(&zero)).max_abs() < 1e-15);
        assert!(conn.gamma(1).sub(&zero.block_diag(b.gamma(0))).max_abs() < 1e-15);
    }

    #[test]
    fn poincare_curvature_at_origin() {
        let jet = MetricField::poincare_disk(1.0).unwrap().evaluate_jet(&ChartPoint::origin(1)).unwrap();
        let r = curvature_tensor(&jet).unwrap();
        assert_eq!(r.get(0, 0, 0, 0), c(-2.0, 0.0));
    }

    #[test]
    fn complex_ball_curvature_at_origin() {
        let jet = MetricField::complex_ball(2).unwrap().evaluate_jet(&ChartPoint::origin(2)).unwrap();
        let r = curvature_tensor(&jet).unwrap();
        let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        for k in 0..2 {
            for l in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        let want = -(delta(i, j) * delta(k, l) + delta(i, l) * delta(k, j));
                        assert_eq!(r.get(k, l, i, j), c(want, 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn poincare_hsc_is_constant() {
        let f = MetricField::poincare_disk(1.0).unwrap();
        for &(x, y) in &[(0.0, 0.0), (0.5, 0.1), (-0.3, -0.7)] {
            let jet = f.evaluate_jet(&pt(&[(x, y)])).unwrap();
            let h = hsc(&jet, &dir(&[(0.3, -1.2)])).unwrap();
            assert!((h + 2.0).abs() < 1e-12, "{h}");
            let scaled = jet_scale(2.0, &jet).unwrap();
            assert!((hsc(&scaled, &dir(&[(1.0, 0.0)])).unwrap() + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hsc_errors() {
        let jet = MetricField::euclidean(2).unwrap().evaluate_jet(&ChartPoint::origin(2)).unwrap();
        assert_eq!(Direction::new(vec![c(0.0, 0.0); 2]), Err(Error::ZeroDirection));
        let eval = HscEvaluator::new(&jet).unwrap();
        assert_eq!(eval.eval(&[c(0.0, 0.0); 2]), Err(Error::ZeroDirection));
        assert!(eval.eval(&[c(1.0, 0.0)]).is_err());
        let m = MetricField::matrix(
            1,
            vec![crate::expr::Expr::Num(1.0), crate::expr::Expr::Num(0.0), crate::expr::Expr::Num(0.0), crate::expr::Expr::Num(1.0)],
            crate::field::Domain::Whole,
        )
        .unwrap();
        let jet = m.evaluate_jet(&ChartPoint::origin(1)).unwrap();
        assert!(matches!(hsc(&jet, &dir(&[(1.0, 0.0)])), Err(Error::RankMismatch { rank: 2, dim: 1 })));
    }

    #[test]
    fn inconsistent_jet_is_rejected() {
        // a jet whose mixed second derivative is not self-adjoint
        let bad = MetricJet2::new(
            HermitianMatrix::identity(1),
            vec![Endomorphism::zeros(1)],
            vec![vec![Endomorphism::scalar(1, c(1.0, 0.5))]],
        )
        .unwrap();
        assert!(matches!(hsc(&bad, &dir(&[(1.0, 0.0)])), Err(Error::InconsistentJet { .. })));
    }

    #[test]
    fn gaussian_curvature_examples() {
        let euc = MetricField::euclidean(1).unwrap().evaluate_jet(&ChartPoint::origin(1)).unwrap();
        assert_eq!(gaussian_curvature_1d(&euc).unwrap(), 0.0);
        let p = MetricField::poincare_disk(1.0).unwrap().evaluate_jet(&ChartPoint::origin(1)).unwrap();
        assert_eq!(gaussian_curvature_1d(&p).unwrap(), -4.0);
        assert_eq!(gaussian_curvature_1d(&jet_scale(4.0, &p).unwrap()).unwrap(), -1.0);
        let two = MetricField::euclidean(2).unwrap().evaluate_jet(&ChartPoint::origin(2)).unwrap();
        assert!(gaussian_curvature_1d(&two).is_err());
    }

    #[test]
    fn extrema_of_flat_and_ball() {
        let opts = ExtremaOptions::default();
        let e = hsc_extrema(&MetricField::euclidean(2).unwrap(), &ChartPoint::origin(2), &opts).unwrap();
        assert_eq!((e.min, e.max), (0.0, 0.0));
        assert!(e.converged);
        let b = hsc_extrema(&MetricField::complex_ball(2).unwrap(), &ChartPoint::origin(2), &opts).unwrap();
        assert!((b.min + 2.0).abs() < 1e-6 && (b.max + 2.0).abs() < 1e-6);
    }

    #[test]
    fn extrema_of_product_of_disks() {
        let f = MetricField::product(
            MetricField::poincare_disk(1.0).unwrap(),
            MetricField::poincare_disk(1.0).unwrap(),
        );
        let r = hsc_extrema(&f, &ChartPoint::origin(2), &ExtremaOptions::default()).unwrap();
        assert!((r.min + 2.0).abs() < 1e-3, "{}", r.min);
        assert!((r.max + 1.0).abs() < 1e-3, "{}", r.max);
        assert!(r.converged);
        let n2 = r.argmax.euclidean_norm();
        assert!((n2 - 1.0).abs() < 1e-12);
        // balanced direction
        let a = r.argmax.components();
        assert!((a[0].norm() - a[1].norm()).abs() < 1e-3);
    }

    #[test]
    fn extrema_are_deterministic() {
        let f = MetricField::fubini_study_chart(2).unwrap();
        let p = pt(&[(0.3, 0.1), (-0.2, 0.4)]);
        let opts = ExtremaOptions { seed: 9, restarts: 8, ..Default::default() };
        assert_eq!(hsc_extrema(&f, &p, &opts).unwrap(), hsc_extrema(&f, &p, &opts).unwrap());
    }

    #[test]
    fn connection_paths_agree() {
        let f = MetricField::fubini_study_chart(3).unwrap();
        let jet = f.evaluate_jet(&pt(&[(0.3, 0.1), (-0.2, 0.4), (0.0, 0.5)])).unwrap();
        let a = chern_connection(&jet).unwrap();
        let b = chern_connection_by_solve(&jet).unwrap();
        for k in 0..3 {
            assert!(a.gamma(k).sub(&b[k]).max_abs() < 1e-14);
            // ∂_k H = Γ_k H
            let back = a.gamma(k).matmul(jet.value().as_endomorphism());
            assert!(back.sub(jet.d(k)).max_abs() < 1e-12);
        }
    }
}
