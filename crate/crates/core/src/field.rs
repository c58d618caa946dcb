//! Hermitian metric fields on chart domains of `C^n`.
//!
//! A field is local chart data: a domain plus a way to produce the metric
//! matrix `h_{i j̄}(z)` and its second-order jet. Closed-form catalog entries
//! have exact jets; expression-backed fields are differentiated numerically.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::{finite_difference_jet, jet_product, jet_scale, jet_sum, levi_matrix, MetricJet2};
use crate::linalg::{is_positive_definite, Endomorphism, HermitianMatrix, C64};
use crate::point::{real_to_complex, ChartPoint};

/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-3;

/// The inner step used for the complex Hessian of a potential, relative to
/// the field's step.
pub const POTENTIAL_STEP_FACTOR: f64 = 10.0;

/// Names accepted by [`builtin`].
pub const CATALOG: &[&str] = &[
    "euclidean",
    "poincare_disk",
    "complex_ball",
    "fubini_study_chart",
    "exp_quadratic",
    "product",
    "scale",
    "sum",
];

#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Whole,
    Ball { center: Vec<C64>, radius: f64 },
    Polydisk { center: Vec<C64>, radius: f64 },
}

impl Domain {
    pub fn ball(n: usize, radius: f64) -> Self {
        Domain::Ball {
            center: vec![C64::new(0.0, 0.0); n],
            radius,
        }
    }

    pub fn polydisk(n: usize, radius: f64) -> Self {
        Domain::Polydisk {
            center: vec![C64::new(0.0, 0.0); n],
            radius,
        }
    }

    /// Distance from `z` to the boundary; negative outside.
    pub fn boundary_distance(&self, z: &[C64]) -> f64 {
        match self {
            Domain::Whole => f64::INFINITY,
            Domain::Ball { center, radius } => {
                let r2: f64 = z.iter().zip(center).map(|(a, b)| (a - b).norm_sqr()).sum();
                radius - r2.sqrt()
            }
            Domain::Polydisk { center, radius } => z
                .iter()
                .zip(center)
                .map(|(a, b)| radius - (a - b).norm())
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub(crate) fn center(&self) -> Option<&[C64]> {
        match self {
            Domain::Whole => None,
            Domain::Ball { center, .. } | Domain::Polydisk { center, .. } => Some(center),
        }
    }
}

/// How a field produces its metric.
#[derive(Debug, Clone, PartialEq)]
pub enum Backend {
    Euclidean,
    /// `λ = c / (1 − |z|²)²` on the unit disk.
    PoincareDisk { c: f64 },
    /// Metric of the potential `−log(1 − |z|²)`.
    ComplexBall,
    /// Metric of the potential `log(1 + |z|²)`.
    FubiniStudy,
    /// Conformal `λ = exp(a0 + a1 x + a2 y + a3 x² + a4 x y + a5 y²)`, n = 1.
    ExpQuadratic { coeffs: [f64; 6] },
    /// Metric `∂_i ∂̄_j φ` of a real potential.
    Potential(Expr),
    /// `λ(z) · I_n`.
    Conformal(Expr),
    /// Row-major grid of real expressions, symmetrized.
    Matrix(Vec<Expr>),
    Product(Box<MetricField>, Box<MetricField>),
    Scale(f64, Box<MetricField>),
    Sum(Box<MetricField>, Box<MetricField>),
}

/// A Hermitian metric on a rank-`r` trivial bundle over a chart domain in `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricField {
    n: usize,
    rank: usize,
    backend: Backend,
    domain: Domain,
    step: f64,
    force_fd: bool,
}

impl MetricField {
    fn leaf(n: usize, rank: usize, backend: Backend, domain: Domain) -> Self {
        MetricField {
            n,
            rank,
            backend,
            domain,
            step: DEFAULT_STEP,
            force_fd: false,
        }
    }

    pub fn euclidean(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self::leaf(n, n, Backend::Euclidean, Domain::Whole))
    }

    pub fn poincare_disk(c: f64) -> Result<Self> {
        check_positive("c", c)?;
        Ok(Self::leaf(1, 1, Backend::PoincareDisk { c }, Domain::ball(1, 1.0)))
    }

    pub fn complex_ball(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self::leaf(n, n, Backend::ComplexBall, Domain::ball(n, 1.0)))
    }

    pub fn fubini_study_chart(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self::leaf(n, n, Backend::FubiniStudy, Domain::Whole))
    }

    pub fn exp_quadratic(coeffs: [f64; 6]) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "coeffs".into(),
                reason: "coefficients must be finite".into(),
            });
        }
        Ok(Self::leaf(1, 1, Backend::ExpQuadratic { coeffs }, Domain::Whole))
    }

    pub fn potential(n: usize, expr: Expr, domain: Domain) -> Result<Self> {
        check_dim(n)?;
        check_arity(n, &expr)?;
        check_domain(n, &domain)?;
        Ok(Self::leaf(n, n, Backend::Potential(expr), domain))
    }

    pub fn conformal(n: usize, expr: Expr, domain: Domain) -> Result<Self> {
        check_dim(n)?;
        check_arity(n, &expr)?;
        check_domain(n, &domain)?;
        Ok(Self::leaf(n, n, Backend::Conformal(expr), domain))
    }

    pub fn matrix(n: usize, entries: Vec<Expr>, domain: Domain) -> Result<Self> {
        check_dim(n)?;
        let rank = (entries.len() as f64).sqrt().round() as usize;
        if rank == 0 || rank * rank != entries.len() {
            return Err(Error::InvalidParameter {
                name: "matrix".into(),
                reason: format!("{} entries do not form a square grid", entries.len()),
            });
        }
        for e in &entries {
            check_arity(n, e)?;
        }
        check_domain(n, &domain)?;
        Ok(Self::leaf(n, rank, Backend::Matrix(entries), domain))
    }

    pub fn product(a: MetricField, b: MetricField) -> Self {
        MetricField {
            n: a.n + b.n,
            rank: a.rank + b.rank,
            backend: Backend::Product(Box::new(a), Box::new(b)),
            domain: Domain::Whole,
            step: DEFAULT_STEP,
            force_fd: false,
        }
    }

    pub fn scale(c: f64, a: MetricField) -> Result<Self> {
        check_positive("c", c)?;
        Ok(MetricField {
            n: a.n,
            rank: a.rank,
            backend: Backend::Scale(c, Box::new(a)),
            domain: Domain::Whole,
            step: DEFAULT_STEP,
            force_fd: false,
        })
    }

    pub fn sum(a: MetricField, b: MetricField) -> Result<Self> {
        if a.n != b.n {
            return Err(Error::DimensionMismatch { expected: a.n, found: b.n });
        }
        if a.rank != b.rank {
            return Err(Error::DimensionMismatch { expected: a.rank, found: b.rank });
        }
        Ok(MetricField {
            n: a.n,
            rank: a.rank,
            backend: Backend::Sum(Box::new(a), Box::new(b)),
            domain: Domain::Whole,
            step: DEFAULT_STEP,
            force_fd: false,
        })
    }

    /// Replaces the domain of a leaf field.
    pub fn with_domain(mut self, domain: Domain) -> Result<Self> {
        check_domain(self.n, &domain)?;
        if self.is_combinator() {
            return Err(Error::InvalidParameter {
                name: "domain".into(),
                reason: "combinators take the domains of their parts".into(),
            });
        }
        self.domain = domain;
        Ok(self)
    }

    /// Sets the finite-difference step on this field and all of its parts.
    pub fn with_step(mut self, step: f64) -> Result<Self> {
        check_positive("step", step)?;
        self.step = step;
        self.backend = match self.backend {
            Backend::Product(a, b) => {
                Backend::Product(Box::new(a.with_step(step)?), Box::new(b.with_step(step)?))
            }
            Backend::Sum(a, b) => Backend::Sum(Box::new(a.with_step(step)?), Box::new(b.with_step(step)?)),
            Backend::Scale(c, a) => Backend::Scale(c, Box::new(a.with_step(step)?)),
            other => other,
        };
        Ok(self)
    }

    /// Forces finite-difference jets everywhere, including closed forms.
    pub fn with_finite_differences(mut self) -> Self {
        self.force_fd = true;
        self.backend = match self.backend {
            Backend::Product(a, b) => Backend::Product(
                Box::new(a.with_finite_differences()),
                Box::new(b.with_finite_differences()),
            ),
            Backend::Sum(a, b) => Backend::Sum(
                Box::new(a.with_finite_differences()),
                Box::new(b.with_finite_differences()),
            ),
            Backend::Scale(c, a) => Backend::Scale(c, Box::new(a.with_finite_differences())),
            other => other,
        };
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn forces_finite_differences(&self) -> bool {
        self.force_fd
    }

    fn is_combinator(&self) -> bool {
        matches!(
            self.backend,
            Backend::Product(..) | Backend::Scale(..) | Backend::Sum(..)
        )
    }

    /// True when every part of the field has closed-form jets.
    pub fn has_exact_jets(&self) -> bool {
        match &self.backend {
            Backend::Product(a, b) | Backend::Sum(a, b) => a.has_exact_jets() && b.has_exact_jets(),
            Backend::Scale(_, a) => a.has_exact_jets(),
            Backend::Potential(_) | Backend::Conformal(_) | Backend::Matrix(_) => false,
            _ => !self.force_fd,
        }
    }

    fn uses_finite_differences(&self) -> bool {
        self.force_fd
            || matches!(
                self.backend,
                Backend::Potential(_) | Backend::Conformal(_) | Backend::Matrix(_)
            )
    }

    /// Distance from `z` to the boundary of the field's domain.
    pub fn boundary_distance(&self, z: &[C64]) -> f64 {
        match &self.backend {
            Backend::Product(a, b) => {
                let (za, zb) = z.split_at(a.n);
                a.boundary_distance(za).min(b.boundary_distance(zb))
            }
            Backend::Sum(a, b) => a.boundary_distance(z).min(b.boundary_distance(z)),
            Backend::Scale(_, a) => a.boundary_distance(z),
            _ => self.domain.boundary_distance(z),
        }
    }

    /// Smallest boundary distance at which a jet can be evaluated.
    pub fn required_margin(&self) -> f64 {
        match &self.backend {
            Backend::Product(a, b) | Backend::Sum(a, b) => a.required_margin().max(b.required_margin()),
            Backend::Scale(_, a) => a.required_margin(),
            Backend::Potential(_) => 4.0 * self.step + 3.0 * POTENTIAL_STEP_FACTOR * self.step,
            _ if self.uses_finite_differences() => 4.0 * self.step,
            _ => 0.0,
        }
    }

    /// True when a jet can be evaluated at `p`.
    pub fn admits(&self, p: &ChartPoint) -> bool {
        p.n() == self.n && self.margin_ok(p.coords())
    }

    fn margin_ok(&self, z: &[C64]) -> bool {
        match &self.backend {
            Backend::Product(a, b) => {
                let (za, zb) = z.split_at(a.n);
                a.margin_ok(za) && b.margin_ok(zb)
            }
            Backend::Sum(a, b) => a.margin_ok(z) && b.margin_ok(z),
            Backend::Scale(_, a) => a.margin_ok(z),
            _ => {
                let dist = self.domain.boundary_distance(z);
                let margin = self.required_margin();
                if margin > 0.0 {
                    dist >= margin
                } else {
                    dist > 0.0
                }
            }
        }
    }

    /// The metric matrix `h_{i j̄}` at `z`, without domain checks.
    pub fn value_at(&self, z: &[C64]) -> Result<HermitianMatrix> {
        match &self.backend {
            Backend::Euclidean => Ok(HermitianMatrix::identity(self.n)),
            Backend::PoincareDisk { c } => {
                let u = 1.0 / (1.0 - z[0].norm_sqr());
                Ok(HermitianMatrix::scalar(1, c * u * u))
            }
            Backend::ComplexBall => Ok(radial_jet(z, &ball_profile(z)).0),
            Backend::FubiniStudy => Ok(radial_jet(z, &fubini_study_profile(z)).0),
            Backend::ExpQuadratic { coeffs } => Ok(HermitianMatrix::scalar(1, exp_quadratic(coeffs, z[0]).0)),
            Backend::Conformal(expr) => {
                let (x, y) = split_re_im(z);
                Ok(HermitianMatrix::scalar(self.n, expr.eval(&x, &y)))
            }
            Backend::Matrix(entries) => {
                let (x, y) = split_re_im(z);
                let r = self.rank;
                let m = Endomorphism::from_fn(r, |i, j| Complex64::new(entries[i * r + j].eval(&x, &y), 0.0));
                Ok(HermitianMatrix::from_endomorphism(&m))
            }
            Backend::Potential(expr) => {
                let t: Vec<f64> = z.iter().flat_map(|c| [c.re, c.im]).collect();
                let program = expr.compile();
                Ok(levi_matrix(|s| program.eval(s), &t, POTENTIAL_STEP_FACTOR * self.step))
            }
            Backend::Product(a, b) => {
                let (za, zb) = z.split_at(a.n);
                Ok(a.value_at(za)?.block_diag(&b.value_at(zb)?))
            }
            Backend::Scale(c, a) => Ok(a.value_at(z)?.scale(*c)),
            Backend::Sum(a, b) => Ok(a.value_at(z)?.add(&b.value_at(z)?)),
        }
    }

    /// Second-order jet of the metric at `p`.
    pub fn evaluate_jet(&self, p: &ChartPoint) -> Result<MetricJet2> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: p.n() });
        }
        if !self.margin_ok(p.coords()) {
            return Err(Error::OutsideDomain {
                point: p.to_string(),
                margin: self.required_margin(),
            });
        }
        let jet = self.jet_unchecked(p.coords()).map_err(|e| match e {
            Error::NonFinite(_) | Error::NotPositiveDefinite { .. } => Error::DegenerateMetric {
                point: p.to_string(),
            },
            other => other,
        })?;
        match is_positive_definite(jet.value()) {
            Ok(true) => Ok(jet),
            _ => Err(Error::DegenerateMetric { point: p.to_string() }),
        }
    }

    fn jet_unchecked(&self, z: &[C64]) -> Result<MetricJet2> {
        match &self.backend {
            Backend::Product(a, b) => {
                let (za, zb) = z.split_at(a.n);
                Ok(jet_product(&a.jet_unchecked(za)?, &b.jet_unchecked(zb)?))
            }
            Backend::Sum(a, b) => jet_sum(&a.jet_unchecked(z)?, &b.jet_unchecked(z)?),
            Backend::Scale(c, a) => jet_scale(*c, &a.jet_unchecked(z)?),
            _ if self.uses_finite_differences() => {
                let t: Vec<f64> = z.iter().flat_map(|c| [c.re, c.im]).collect();
                finite_difference_jet(
                    |s| Ok(self.value_at(&real_to_complex(s))?.as_endomorphism().clone()),
                    &t,
                    self.step,
                )
            }
            Backend::Euclidean => Ok(MetricJet2::constant(HermitianMatrix::identity(self.n), self.n)),
            Backend::PoincareDisk { c } => {
                let s = z[0].norm_sqr();
                let u = 1.0 / (1.0 - s);
                let value = c * u * u;
                let d = z[0].conj() * (2.0 * c * u * u * u);
                let dd = 2.0 * c * u.powi(4) * (1.0 + 2.0 * s);
                scalar_jet(value, d, dd)
            }
            Backend::ComplexBall => {
                let (value, d, ddbar) = radial_jet(z, &ball_profile(z));
                MetricJet2::new(value, d, ddbar)
            }
            Backend::FubiniStudy => {
                let (value, d, ddbar) = radial_jet(z, &fubini_study_profile(z));
                MetricJet2::new(value, d, ddbar)
            }
            Backend::ExpQuadratic { coeffs } => {
                let (value, d, dd) = exp_quadratic(coeffs, z[0]);
                scalar_jet(value, d, dd)
            }
            Backend::Potential(_) | Backend::Conformal(_) | Backend::Matrix(_) => {
                unreachable!("expression backends always use finite differences")
            }
        }
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n".into(),
            reason: "dimension must be at least 1".into(),
        });
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidParameter {
            name: name.into(),
            reason: format!("must be a positive number, got {v}"),
        });
    }
    Ok(())
}

fn check_arity(n: usize, expr: &Expr) -> Result<()> {
    if expr.arity() > n {
        return Err(Error::InvalidParameter {
            name: "n".into(),
            reason: format!("expression uses coordinate {} but n = {n}", expr.arity()),
        });
    }
    Ok(())
}

fn check_domain(n: usize, domain: &Domain) -> Result<()> {
    match domain {
        Domain::Whole => Ok(()),
        Domain::Ball { center, radius } | Domain::Polydisk { center, radius } => {
            check_positive("domain radius", *radius)?;
            if center.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: center.len() });
            }
            Ok(())
        }
    }
}

fn split_re_im(z: &[C64]) -> (Vec<f64>, Vec<f64>) {
    z.iter().map(|c| (c.re, c.im)).unzip()
}

fn scalar_jet(value: f64, d: C64, dd: f64) -> Result<MetricJet2> {
    MetricJet2::new(
        HermitianMatrix::scalar(1, value),
        vec![Endomorphism::scalar(1, d)],
        vec![vec![Endomorphism::scalar(1, C64::new(dd, 0.0))]],
    )
}

/// `f'(s), f''(s), f'''(s), f''''(s)` of a radial potential `f(|z|²)`.
type RadialProfile = [f64; 4];

fn ball_profile(z: &[C64]) -> RadialProfile {
    let s: f64 = z.iter().map(|c| c.norm_sqr()).sum();
    let u = 1.0 / (1.0 - s);
    [u, u * u, 2.0 * u.powi(3), 6.0 * u.powi(4)]
}

fn fubini_study_profile(z: &[C64]) -> RadialProfile {
    let s: f64 = z.iter().map(|c| c.norm_sqr()).sum();
    let u = 1.0 / (1.0 + s);
    [u, -u * u, 2.0 * u.powi(3), -6.0 * u.powi(4)]
}

/// Exact jet of the metric of a radial potential `f(|z|²)`:
///
/// ```text
/// h_{ij̄}        = f' δ_ij + f'' z̄_i z_j
/// ∂_k h_{ij̄}    = f''(z̄_k δ_ij + z̄_i δ_jk) + f''' z̄_k z̄_i z_j
/// ∂_k∂̄_l h_{ij̄} = f''(δ_kl δ_ij + δ_il δ_jk)
///               + f'''(z_l z̄_k δ_ij + z_l z̄_i δ_jk + z̄_k z_j δ_il + z̄_i z_j δ_kl)
///               + f'''' z̄_k z_l z̄_i z_j
/// ```
fn radial_jet(z: &[C64], f: &RadialProfile) -> (HermitianMatrix, Vec<Endomorphism>, Vec<Vec<Endomorphism>>) {
    let n = z.len();
    let [f1, f2, f3, f4] = *f;
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let zb: Vec<C64> = z.iter().map(|c| c.conj()).collect();
    let value = HermitianMatrix::from_endomorphism(&Endomorphism::from_fn(n, |i, j| {
        zb[i] * z[j] * f2 + f1 * delta(i, j)
    }));
    let d = (0..n)
        .map(|k| {
            Endomorphism::from_fn(n, |i, j| {
                (zb[k] * delta(i, j) + zb[i] * delta(j, k)) * f2 + zb[k] * zb[i] * z[j] * f3
            })
        })
        .collect();
    let ddbar = (0..n)
        .map(|k| {
            (0..n)
                .map(|l| {
                    Endomorphism::from_fn(n, |i, j| {
                        let second = f2 * (delta(k, l) * delta(i, j) + delta(i, l) * delta(j, k));
                        let third = z[l] * zb[k] * delta(i, j)
                            + z[l] * zb[i] * delta(j, k)
                            + zb[k] * z[j] * delta(i, l)
                            + zb[i] * z[j] * delta(k, l);
                        third * f3 + zb[k] * z[l] * zb[i] * z[j] * f4 + second
                    })
                })
                .collect()
        })
        .collect();
    (value, d, ddbar)
}

/// `(λ, ∂λ, ∂∂̄λ)` for `λ = exp(ψ)`, `ψ` a real quadratic in `x, y`.
fn exp_quadratic(a: &[f64; 6], z: C64) -> (f64, C64, f64) {
    let (x, y) = (z.re, z.im);
    let psi = a[0] + a[1] * x + a[2] * y + a[3] * x * x + a[4] * x * y + a[5] * y * y;
    let psi_x = a[1] + 2.0 * a[3] * x + a[4] * y;
    let psi_y = a[2] + a[4] * x + 2.0 * a[5] * y;
    let d_psi = C64::new(0.5 * psi_x, -0.5 * psi_y);
    let ddbar_psi = 0.5 * (a[3] + a[5]);
    let lambda = psi.exp();
    (lambda, d_psi * lambda, lambda * (d_psi.norm_sqr() + ddbar_psi))
}

/// Catalog parameters for [`builtin`].
#[derive(Debug, Clone, Default)]
pub struct BuiltinParams {
    pub n: Option<usize>,
    pub c: Option<f64>,
    pub coeffs: Option<[f64; 6]>,
    pub fields: Vec<MetricField>,
}

/// Looks up a catalog entry by name.
pub fn builtin(name: &str, params: &BuiltinParams) -> Result<MetricField> {
    let n = params.n.unwrap_or(1);
    let c = params.c.unwrap_or(1.0);
    let two = |fields: &[MetricField]| -> Result<(MetricField, MetricField)> {
        match fields {
            [a, b] => Ok((a.clone(), b.clone())),
            _ => Err(Error::InvalidParameter {
                name: name.into(),
                reason: format!("needs two fields, got {}", fields.len()),
            }),
        }
    };
    match name {
        "euclidean" => MetricField::euclidean(n),
        "poincare_disk" => MetricField::poincare_disk(c),
        "complex_ball" => MetricField::complex_ball(n),
        "fubini_study_chart" => MetricField::fubini_study_chart(n),
        "exp_quadratic" => MetricField::exp_quadratic(params.coeffs.unwrap_or([0.0; 6])),
        "product" => {
            let (a, b) = two(&params.fields)?;
            Ok(MetricField::product(a, b))
        }
        "sum" => {
            let (a, b) = two(&params.fields)?;
            MetricField::sum(a, b)
        }
        "scale" => match params.fields.as_slice() {
            [a] => MetricField::scale(c, a.clone()),
            other => Err(Error::InvalidParameter {
                name: "scale".into(),
                reason: format!("needs one field, got {}", other.len()),
            }),
        },
        _ => Err(Error::UnknownBuiltin {
            name: name.into(),
            catalog: CATALOG.join(", "),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(coords: &[(f64, f64)]) -> ChartPoint {
        ChartPoint::new(coords.iter().map(|&(a, b)| C64::new(a, b)).collect()).unwrap()
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn euclidean_jet_is_flat() {
        let f = MetricField::euclidean(2).unwrap();
        let jet = f.evaluate_jet(&pt(&[(0.3, -1.0), (2.0, 0.5)])).unwrap();
        assert_eq!(jet.value(), &HermitianMatrix::identity(2));
        for k in 0..2 {
            assert_eq!(jet.d(k).max_abs(), 0.0);
            for l in 0..2 {
                assert_eq!(jet.ddbar(k, l).max_abs(), 0.0);
            }
        }
    }

    #[test]
    fn poincare_at_origin_and_half() {
        let f = MetricField::poincare_disk(1.0).unwrap();
        let jet = f.evaluate_jet(&ChartPoint::origin(1)).unwrap();
        assert_eq!(jet.value()[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(jet.d(0)[(0, 0)], C64::new(0.0, 0.0));
        assert_eq!(jet.ddbar(0, 0)[(0, 0)], C64::new(2.0, 0.0));
        let v = f.value_at(&[C64::new(0.5, 0.0)]).unwrap();
        assert!(close(v[(0, 0)], C64::new(16.0 / 9.0, 0.0), 1e-15));
    }

    #[test]
    fn complex_ball_second_derivatives_at_origin() {
        let f = MetricField::complex_ball(2).unwrap();
        let jet = f.evaluate_jet(&ChartPoint::origin(2)).unwrap();
        assert_eq!(jet.value(), &HermitianMatrix::identity(2));
        let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        for k in 0..2 {
            for l in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        let want = delta(i, j) * delta(k, l) + delta(i, l) * delta(k, j);
                        assert_eq!(jet.ddbar(k, l)[(i, j)], C64::new(want, 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn product_value_at_origin() {
        let p = MetricField::product(
            MetricField::poincare_disk(1.0).unwrap(),
            MetricField::poincare_disk(1.0).unwrap(),
        );
        assert_eq!(p.value_at(&[C64::new(0.0, 0.0); 2]).unwrap(), HermitianMatrix::identity(2));
    }

    #[test]
    fn conformal_exp_at_origin() {
        let f = MetricField::conformal(1, Expr::parse("exp(x_1)").unwrap(), Domain::Whole).unwrap();
        let jet = f.evaluate_jet(&ChartPoint::origin(1)).unwrap();
        assert!(close(jet.value()[(0, 0)], C64::new(1.0, 0.0), 1e-15));
        // ∂e^x = e^x/2, ∂∂̄e^x = e^x/4
        assert!(close(jet.d(0)[(0, 0)], C64::new(0.5, 0.0), 1e-10));
        assert!(close(jet.ddbar(0, 0)[(0, 0)], C64::new(0.25, 0.0), 1e-6));
    }

    #[test]
    fn domain_margin_is_enforced() {
        let f = MetricField::poincare_disk(1.0).unwrap();
        assert!(f.evaluate_jet(&pt(&[(0.999, 0.0)])).is_ok());
        assert!(matches!(
            f.evaluate_jet(&pt(&[(1.0, 0.0)])),
            Err(Error::OutsideDomain { .. })
        ));
        let fd = f.clone().with_finite_differences();
        assert!(fd.evaluate_jet(&pt(&[(0.998, 0.0)])).is_err());
        assert!(fd.evaluate_jet(&pt(&[(0.99, 0.0)])).is_ok());
        assert!(f.evaluate_jet(&ChartPoint::origin(2)).is_err());
    }

    #[test]
    fn degenerate_metric_names_point() {
        let f = MetricField::conformal(1, Expr::parse("x_1").unwrap(), Domain::Whole).unwrap();
        match f.evaluate_jet(&pt(&[(-0.5, 0.25)])) {
            Err(Error::DegenerateMetric { point }) => assert_eq!(point, "-0.5+0.25i"),
            other => panic!("unexpected {other:?}"),
        }
        let f = MetricField::potential(1, Expr::parse("-log(1 - r2)").unwrap(), Domain::Whole).unwrap();
        assert!(matches!(
            f.evaluate_jet(&pt(&[(2.0, 0.0)])),
            Err(Error::DegenerateMetric { .. })
        ));
    }

    #[test]
    fn catalog_lookup() {
        assert!(matches!(
            builtin("hyperbolic", &BuiltinParams::default()),
            Err(Error::UnknownBuiltin { .. })
        ));
        let p = BuiltinParams { c: Some(2.0), ..Default::default() };
        let f = builtin("poincare_disk", &p).unwrap();
        assert_eq!(f.backend(), &Backend::PoincareDisk { c: 2.0 });
        let p = BuiltinParams { c: Some(-1.0), ..Default::default() };
        assert!(builtin("poincare_disk", &p).is_err());
        let p = BuiltinParams { fields: vec![MetricField::euclidean(1).unwrap()], ..Default::default() };
        assert!(builtin("sum", &p).is_err());
        assert_eq!(builtin("euclidean", &BuiltinParams::default()).unwrap().n(), 1);
    }

    #[test]
    fn sum_needs_matching_shapes() {
        let a = MetricField::euclidean(1).unwrap();
        let b = MetricField::euclidean(2).unwrap();
        assert!(MetricField::sum(a, b).is_err());
    }

    #[test]
    fn arity_is_checked() {
        let e = Expr::parse("x_2").unwrap();
        assert!(MetricField::potential(1, e, Domain::Whole).is_err());
    }
}
