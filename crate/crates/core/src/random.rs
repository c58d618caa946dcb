//! Seeded random potential-backed metric fields for property suites.

use rand::Rng;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::field::{Backend, Domain, MetricField};
use crate::linalg::{is_positive_definite, Endomorphism, HermitianMatrix, C64};
use crate::sampling::seeded_rng;

const RADIUS: f64 = 0.5;
const COEFF_RANGE: f64 = 0.1;
const MAX_ATTEMPTS: usize = 16;

/// The part of the potential that is not random.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialBase {
    /// `|z|²`, a perturbation of the flat metric.
    Flat,
    /// `−log(1 − |z|²)`, a perturbation of the ball metric (negative HSC).
    Ball,
}

/// `coeff · Π t_a^{exponents[a]}` over interleaved `(x_1, y_1, x_2, ...)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coeff: f64,
}

impl Monomial {
    /// `∂²/∂t_a ∂t_b`.
    fn second_derivative(&self, t: &[f64], a: usize, b: usize) -> f64 {
        let ea = self.exponents[a];
        let eb = if a == b { ea.saturating_sub(1) } else { self.exponents[b] };
        if ea == 0 || eb == 0 {
            return 0.0;
        }
        let mut acc = self.coeff * ea as f64 * eb as f64;
        for (idx, (&e, &v)) in self.exponents.iter().zip(t).enumerate() {
            let drop = (idx == a) as u32 + (idx == b) as u32;
            acc *= v.powi((e - drop) as i32);
        }
        acc
    }

    fn to_expr(&self) -> Expr {
        let mut expr = Expr::Num(self.coeff);
        for (a, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let var = if a % 2 == 0 { Expr::X(a / 2) } else { Expr::Y(a / 2) };
            let factor = if e == 1 { var } else { Expr::Pow(Box::new(var), e as i32) };
            expr = Expr::Mul(Box::new(expr), Box::new(factor));
        }
        expr
    }
}

/// A random field together with the data that generated it.
#[derive(Debug, Clone)]
pub struct RandomPotential {
    pub seed: u64,
    pub n: usize,
    pub degree: u32,
    pub base: PotentialBase,
    pub terms: Vec<Monomial>,
    /// Draws used, including the accepted one.
    pub attempts: usize,
    pub field: MetricField,
}

impl RandomPotential {
    /// Exact metric matrix at interleaved real coordinates `t`.
    pub fn exact_value(&self, t: &[f64]) -> HermitianMatrix {
        exact_value(self.base, &self.terms, t)
    }
}

/// All exponent vectors over `vars` variables with total degree in `1..=degree`.
fn exponent_vectors(vars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(vars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == vars {
            out.push(prefix.clone());
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(vars, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for d in 1..=degree {
        let mut all = Vec::new();
        rec(vars, d, &mut Vec::new(), &mut all);
        out.extend(all.into_iter().filter(|v| v.iter().sum::<u32>() == d));
    }
    out
}

fn exact_value(base: PotentialBase, terms: &[Monomial], t: &[f64]) -> HermitianMatrix {
    let n = t.len() / 2;
    let s: f64 = t.iter().map(|v| v * v).sum();
    let z: Vec<C64> = t.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
    let mut h = vec![vec![0.0; 2 * n]; 2 * n];
    for a in 0..2 * n {
        for b in a..2 * n {
            h[a][b] = terms.iter().map(|m| m.second_derivative(t, a, b)).sum::<f64>();
            h[b][a] = h[a][b];
        }
    }
    let hess = |a: usize, b: usize| h[a][b];
    let g = Endomorphism::from_fn(n, |i, j| {
        let (xi, yi, xj, yj) = (2 * i, 2 * i + 1, 2 * j, 2 * j + 1);
        let pert = C64::new(hess(xi, xj) + hess(yi, yj), hess(xi, yj) - hess(yi, xj)) * 0.25;
        let delta = if i == j { 1.0 } else { 0.0 };
        let base = match base {
            PotentialBase::Flat => C64::new(delta, 0.0),
            PotentialBase::Ball => {
                let u = 1.0 / (1.0 - s);
                z[i].conj() * z[j] * (u * u) + delta * u
            }
        };
        base + pert
    });
    HermitianMatrix::from_endomorphism(&g)
}

/// Grid points of `[−R, R]^{2n}` with 5 nodes per axis that lie in the ball.
fn check_grid(n: usize) -> Vec<Vec<f64>> {
    let nodes = [-RADIUS, -RADIUS / 2.0, 0.0, RADIUS / 2.0, RADIUS];
    let dims = 2 * n;
    let mut out = Vec::new();
    for code in 0..5usize.pow(dims as u32) {
        let mut c = code;
        let t: Vec<f64> = (0..dims)
            .map(|_| {
                let v = nodes[c % 5];
                c /= 5;
                v
            })
            .collect();
        if t.iter().map(|v| v * v).sum::<f64>() <= RADIUS * RADIUS {
            out.push(t);
        }
    }
    out
}

/// Potential `|z|² + P(x, y)` on the ball of radius 0.5 with `P` a random
/// polynomial of degree `≤ degree`, coefficients uniform in `[−0.1, 0.1]`.
pub fn random_metric_field(seed: u64, n: usize, degree: u32) -> Result<RandomPotential> {
    random_potential(seed, n, degree, PotentialBase::Flat)
}

/// Like [`random_metric_field`] with a choice of base potential.
pub fn random_potential(seed: u64, n: usize, degree: u32, base: PotentialBase) -> Result<RandomPotential> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidParameter {
            name: "n".into(),
            reason: format!("must be 1, 2 or 3, got {n}"),
        });
    }
    if degree > 4 {
        return Err(Error::InvalidParameter {
            name: "degree".into(),
            reason: format!("must be at most 4, got {degree}"),
        });
    }
    let domain = Domain::ball(n, RADIUS);
    if degree == 0 {
        let field = match base {
            PotentialBase::Flat => MetricField::euclidean(n)?,
            PotentialBase::Ball => MetricField::complex_ball(n)?,
        }
        .with_domain(domain)?;
        return Ok(RandomPotential {
            seed,
            n,
            degree,
            base,
            terms: Vec::new(),
            attempts: 1,
            field,
        });
    }
    let exponents = exponent_vectors(2 * n, degree);
    let grid = check_grid(n);
    let mut rng = seeded_rng(seed, 0xf1e1d);
    for attempt in 1..=MAX_ATTEMPTS {
        let terms: Vec<Monomial> = exponents
            .iter()
            .map(|e| Monomial {
                exponents: e.clone(),
                coeff: rng.random_range(-COEFF_RANGE..=COEFF_RANGE),
            })
            .collect();
        let positive = grid
            .iter()
            .all(|t| is_positive_definite(&exact_value(base, &terms, t)).unwrap_or(false));
        if !positive {
            continue;
        }
        let base_expr = match base {
            PotentialBase::Flat => Expr::R2,
            PotentialBase::Ball => Expr::Neg(Box::new(Expr::Log(Box::new(Expr::Sub(
                Box::new(Expr::Num(1.0)),
                Box::new(Expr::R2),
            ))))),
        };
        let expr = terms
            .iter()
            .fold(base_expr, |acc, m| Expr::Add(Box::new(acc), Box::new(m.to_expr())));
        let field = MetricField::potential(n, expr, domain)?;
        return Ok(RandomPotential {
            seed,
            n,
            degree,
            base,
            terms,
            attempts: attempt,
            field,
        });
    }
    Err(Error::RetryBudget(MAX_ATTEMPTS))
}

/// The potential field of `φ_a + φ_b`, differentiated as one expression.
pub fn potential_sum(a: &RandomPotential, b: &RandomPotential) -> Result<MetricField> {
    match (a.field.backend(), b.field.backend()) {
        (Backend::Potential(x), Backend::Potential(y)) if a.n == b.n => MetricField::potential(
            a.n,
            Expr::Add(Box::new(x.clone()), Box::new(y.clone())),
            Domain::ball(a.n, RADIUS),
        ),
        _ => Err(Error::InvalidParameter {
            name: "potential_sum".into(),
            reason: "needs two expression potentials of the same dimension".into(),
        }),
    }
}

/// Conformal `exp(a0 + a1 x + a2 y + a3 x² + a4 xy + a5 y²)` with seeded
/// coefficients, linear ones in `[−1, 1]` and quadratic ones in `[−0.5, 0.5]`.
pub fn random_exp_quadratic(seed: u64) -> MetricField {
    let mut rng = seeded_rng(seed, 0xe7);
    let mut coeffs = [0.0; 6];
    for (i, c) in coeffs.iter_mut().enumerate() {
        let r = if i < 3 { 1.0 } else { 0.5 };
        *c = rng.random_range(-r..=r);
    }
    MetricField::exp_quadratic(coeffs).expect("finite coefficients")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::ChartPoint;
    use crate::sampling::{random_point_in_ball, seeded_rng};

    #[test]
    fn same_seed_same_coefficients() {
        let a = random_metric_field(11, 2, 3).unwrap();
        let b = random_metric_field(11, 2, 3).unwrap();
        assert_eq!(a.terms, b.terms);
        assert_eq!(a.field, b.field);
        let c = random_metric_field(12, 2, 3).unwrap();
        assert_ne!(a.terms, c.terms);
    }

    #[test]
    fn degree_zero_is_flat() {
        let f = random_metric_field(5, 2, 0).unwrap();
        assert!(f.terms.is_empty());
        let jet = f.field.evaluate_jet(&ChartPoint::origin(2)).unwrap();
        assert_eq!(jet.value(), &HermitianMatrix::identity(2));
    }

    #[test]
    fn monomial_count() {
        // degree ≤ 2 in 4 variables, constant excluded: 4 + 10
        assert_eq!(exponent_vectors(4, 2).len(), 14);
        assert_eq!(exponent_vectors(2, 4).len(), 14);
    }

    #[test]
    fn parameter_validation() {
        assert!(random_metric_field(0, 4, 2).is_err());
        assert!(random_metric_field(0, 0, 2).is_err());
        assert!(random_metric_field(0, 1, 5).is_err());
    }

    #[test]
    fn accepted_fields_are_positive_definite_off_grid() {
        for (seed, n) in [(1u64, 1usize), (2, 2), (3, 3)] {
            let f = random_metric_field(seed, n, 4).unwrap();
            let mut rng = seeded_rng(seed, 99);
            let center = vec![C64::new(0.0, 0.0); n];
            for _ in 0..100 {
                let p = random_point_in_ball(&mut rng, &center, RADIUS);
                let v = f.exact_value(&p.to_real());
                assert!(is_positive_definite(&v).unwrap());
            }
        }
    }

    #[test]
    fn potential_sum_adds_metrics() {
        let a = random_potential(1, 2, 3, PotentialBase::Ball).unwrap();
        let b = random_potential(2, 2, 3, PotentialBase::Flat).unwrap();
        let s = potential_sum(&a, &b).unwrap();
        let t = [0.1, 0.0, -0.2, 0.1];
        let z: Vec<C64> = t.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
        let want = a.exact_value(&t).add(&b.exact_value(&t));
        assert!(s.value_at(&z).unwrap().sub(&want).max_abs() < 1e-6);
        assert!(potential_sum(&a, &random_potential(1, 1, 2, PotentialBase::Flat).unwrap()).is_err());
    }

    #[test]
    fn exp_quadratic_is_seeded() {
        assert_eq!(random_exp_quadratic(3), random_exp_quadratic(3));
        assert_ne!(random_exp_quadratic(3), random_exp_quadratic(4));
    }

    #[test]
    fn expression_matches_exact_metric() {
        let f = random_potential(4, 2, 4, PotentialBase::Ball).unwrap();
        let t = [0.1, -0.2, 0.15, 0.05];
        let z: Vec<C64> = t.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
        let fd = f.field.value_at(&z).unwrap();
        let exact = f.exact_value(&t);
        assert!(fd.sub(&exact).max_abs() < 1e-6, "{}", fd.sub(&exact).max_abs());
    }
}
