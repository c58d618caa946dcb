//! Second-order jets of Hermitian metrics and the finite-difference
//! machinery that produces them.
//!
//! Wirtinger convention: `∂_k = ½(∂/∂x_k − i ∂/∂y_k)`. Real coordinates are
//! interleaved as `t = (x_1, y_1, x_2, y_2, ...)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{is_positive_definite, Endomorphism, HermitianMatrix, C64};

/// Metric value `h_{i j̄}`, its holomorphic derivatives `∂_k h` and mixed
/// derivatives `∂_k ∂̄_l h` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricJet2 {
    value: HermitianMatrix,
    d: Vec<Endomorphism>,
    ddbar: Vec<Vec<Endomorphism>>,
}

impl MetricJet2 {
    pub fn new(
        value: HermitianMatrix,
        d: Vec<Endomorphism>,
        ddbar: Vec<Vec<Endomorphism>>,
    ) -> Result<Self> {
        let r = value.dim();
        let n = d.len();
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if ddbar.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: ddbar.len() });
        }
        for m in d.iter().chain(ddbar.iter().flatten()) {
            if m.dim() != r {
                return Err(Error::DimensionMismatch { expected: r, found: m.dim() });
            }
            if !m.is_finite() {
                return Err(Error::NonFinite("metric jet"));
            }
        }
        for row in &ddbar {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
        }
        if !value.as_endomorphism().is_finite() {
            return Err(Error::NonFinite("metric jet"));
        }
        Ok(MetricJet2 { value, d, ddbar })
    }

    /// Jet of a constant metric on `C^n`.
    pub fn constant(value: HermitianMatrix, n: usize) -> Self {
        let r = value.dim();
        MetricJet2 {
            value,
            d: vec![Endomorphism::zeros(r); n],
            ddbar: vec![vec![Endomorphism::zeros(r); n]; n],
        }
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn rank(&self) -> usize {
        self.value.dim()
    }

    pub fn value(&self) -> &HermitianMatrix {
        &self.value
    }

    /// `∂_k` of the metric matrix.
    pub fn d(&self, k: usize) -> &Endomorphism {
        &self.d[k]
    }

    /// `∂̄_l` of the metric matrix, which is `(∂_l h)†`.
    pub fn dbar(&self, l: usize) -> Endomorphism {
        self.d[l].adjoint()
    }

    /// `∂_k ∂̄_l` of the metric matrix.
    pub fn ddbar(&self, k: usize, l: usize) -> &Endomorphism {
        &self.ddbar[k][l]
    }

    /// Largest deviation of `ddbar[k][l]` from `ddbar[l][k]†`.
    pub fn conjugation_defect(&self) -> f64 {
        let n = self.n();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            for l in 0..n {
                worst = worst.max(self.ddbar[k][l].sub(&self.ddbar[l][k].adjoint()).max_abs());
            }
        }
        worst
    }

    pub fn is_positive_definite(&self) -> Result<bool> {
        is_positive_definite(&self.value)
    }

    /// Applies `f` to every stored component.
    fn map(&self, f: impl Fn(&Endomorphism) -> Endomorphism) -> Self {
        MetricJet2 {
            value: HermitianMatrix::from_endomorphism(&f(self.value.as_endomorphism())),
            d: self.d.iter().map(&f).collect(),
            ddbar: self
                .ddbar
                .iter()
                .map(|row| row.iter().map(&f).collect())
                .collect(),
        }
    }
}

/// Componentwise sum: the jet of `g + h`.
pub fn jet_sum(a: &MetricJet2, b: &MetricJet2) -> Result<MetricJet2> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), found: b.n() });
    }
    if a.rank() != b.rank() {
        return Err(Error::DimensionMismatch { expected: a.rank(), found: b.rank() });
    }
    Ok(MetricJet2 {
        value: a.value.add(&b.value),
        d: a.d.iter().zip(&b.d).map(|(x, y)| x.add(y)).collect(),
        ddbar: a
            .ddbar
            .iter()
            .zip(&b.ddbar)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.add(y)).collect())
            .collect(),
    })
}

/// Every component multiplied by `c > 0`.
pub fn jet_scale(c: f64, a: &MetricJet2) -> Result<MetricJet2> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter {
            name: "c".into(),
            reason: format!("scale factor must be positive, got {c}"),
        });
    }
    let c = C64::new(c, 0.0);
    Ok(a.map(|m| m.scale(c)))
}

/// Jet of the block-diagonal product metric on `C^{n1} × C^{n2}`.
pub fn jet_product(a: &MetricJet2, b: &MetricJet2) -> MetricJet2 {
    let (n1, n2) = (a.n(), b.n());
    let (r1, r2) = (a.rank(), b.rank());
    let za = Endomorphism::zeros(r1);
    let zb = Endomorphism::zeros(r2);
    let zero = Endomorphism::zeros(r1 + r2);
    let d = (0..n1 + n2)
        .map(|k| {
            if k < n1 {
                a.d[k].block_diag(&zb)
            } else {
                za.block_diag(&b.d[k - n1])
            }
        })
        .collect();
    let ddbar = (0..n1 + n2)
        .map(|k| {
            (0..n1 + n2)
                .map(|l| {
                    if k < n1 && l < n1 {
                        a.ddbar[k][l].block_diag(&zb)
                    } else if k >= n1 && l >= n1 {
                        za.block_diag(&b.ddbar[k - n1][l - n1])
                    } else {
                        zero.clone()
                    }
                })
                .collect()
        })
        .collect();
    MetricJet2 {
        value: a.value.block_diag(&b.value),
        d,
        ddbar,
    }
}

/// Offsets and weights of the 4th-order central first-derivative stencil.
const FIRST_DERIVATIVE: [(f64, f64); 4] = [
    (-2.0, 1.0 / 12.0),
    (-1.0, -8.0 / 12.0),
    (1.0, 8.0 / 12.0),
    (2.0, -1.0 / 12.0),
];

/// 5-point 4th-order second-derivative stencil.
const SECOND_DERIVATIVE: [(f64, f64); 5] = [
    (-2.0, -1.0 / 12.0),
    (-1.0, 16.0 / 12.0),
    (0.0, -30.0 / 12.0),
    (1.0, 16.0 / 12.0),
    (2.0, -1.0 / 12.0),
];

fn shifted(t: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
    let mut s = t.to_vec();
    for &(a, dt) in moves {
        s[a] += dt;
    }
    s
}

/// Real directional derivative `∂/∂t_a` of a matrix-valued function.
fn first_real<F>(value: &F, t: &[f64], a: usize, h: f64) -> Result<Endomorphism>
where
    F: Fn(&[f64]) -> Result<Endomorphism>,
{
    let mut acc: Option<Endomorphism> = None;
    for &(o, w) in &FIRST_DERIVATIVE {
        let v = value(&shifted(t, &[(a, o * h)]))?.scale(C64::new(w / h, 0.0));
        acc = Some(match acc {
            None => v,
            Some(s) => s.add(&v),
        });
    }
    Ok(acc.expect("stencil is non-empty"))
}

/// Nested first-derivative stencils for `∂²/∂t_a ∂t_b`, symmetric in `(a, b)`.
fn mixed_real<F>(value: &F, t: &[f64], a: usize, b: usize, h: f64) -> Result<Endomorphism>
where
    F: Fn(&[f64]) -> Result<Endomorphism>,
{
    let (a, b) = (a.min(b), a.max(b));
    let mut acc: Option<Endomorphism> = None;
    for &(p, wp) in &FIRST_DERIVATIVE {
        for &(q, wq) in &FIRST_DERIVATIVE {
            let v = value(&shifted(t, &[(a, p * h), (b, q * h)]))?
                .scale(C64::new(wp * wq / (h * h), 0.0));
            acc = Some(match acc {
                None => v,
                Some(s) => s.add(&v),
            });
        }
    }
    Ok(acc.expect("stencil is non-empty"))
}

/// Second-order jet of a metric-valued function by finite differences with
/// step `h` in each real coordinate. Reaches at most `2√2·h` from `t`.
pub fn finite_difference_jet<F>(value: F, t: &[f64], h: f64) -> Result<MetricJet2>
where
    F: Fn(&[f64]) -> Result<Endomorphism>,
{
    let n = t.len() / 2;
    let center = HermitianMatrix::from_endomorphism(&value(t)?);
    let half = C64::new(0.5, 0.0);
    let minus_i = C64::new(0.0, -1.0);
    let mut first = Vec::with_capacity(2 * n);
    for a in 0..2 * n {
        first.push(first_real(&value, t, a, h)?);
    }
    let d = (0..n)
        .map(|k| first[2 * k].add(&first[2 * k + 1].scale(minus_i)).scale(half))
        .collect();

    let mut second = vec![vec![None; 2 * n]; 2 * n];
    for a in 0..2 * n {
        for b in a..2 * n {
            let m = mixed_real(&value, t, a, b, h)?;
            second[b][a] = Some(m.clone());
            second[a][b] = Some(m);
        }
    }
    let s = |a: usize, b: usize| second[a][b].as_ref().expect("filled above");
    let quarter = C64::new(0.25, 0.0);
    let i = C64::new(0.0, 1.0);
    let ddbar = (0..n)
        .map(|k| {
            (0..n)
                .map(|l| {
                    let (xk, yk, xl, yl) = (2 * k, 2 * k + 1, 2 * l, 2 * l + 1);
                    let re = s(xk, xl).add(s(yk, yl));
                    let im = s(xk, yl).sub(s(yk, xl));
                    re.add(&im.scale(i)).scale(quarter)
                })
                .collect()
        })
        .collect();
    MetricJet2::new(center, d, ddbar)
}

/// Complex Hessian `∂_i ∂̄_j φ` of a real function by 4th-order differences
/// of its real Hessian. Reaches at most `2√2·h` from `t`.
pub fn levi_matrix<F>(phi: F, t: &[f64], h: f64) -> HermitianMatrix
where
    F: Fn(&[f64]) -> f64,
{
    let m = t.len();
    let mut hess = vec![vec![0.0; m]; m];
    let mut s = t.to_vec();
    for a in 0..m {
        let mut acc = 0.0;
        for &(o, w) in &SECOND_DERIVATIVE {
            s[a] = t[a] + o * h;
            acc += w * phi(&s);
        }
        s[a] = t[a];
        hess[a][a] = acc / (h * h);
        for b in (a + 1)..m {
            let mut acc = 0.0;
            for &(p, wp) in &FIRST_DERIVATIVE {
                s[a] = t[a] + p * h;
                for &(q, wq) in &FIRST_DERIVATIVE {
                    s[b] = t[b] + q * h;
                    acc += wp * wq * phi(&s);
                }
            }
            s[a] = t[a];
            s[b] = t[b];
            hess[a][b] = acc / (h * h);
            hess[b][a] = hess[a][b];
        }
    }
    let n = m / 2;
    let g = Endomorphism::from_fn(n, |i, j| {
        let (xi, yi, xj, yj) = (2 * i, 2 * i + 1, 2 * j, 2 * j + 1);
        Complex64::new(hess[xi][xj] + hess[yi][yj], hess[xi][yj] - hess[yi][xj]) * 0.25
    });
    HermitianMatrix::from_endomorphism(&g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sample_jet() -> MetricJet2 {
        let value = HermitianMatrix::from_rows(&[vec![c(2., 0.), c(0.1, 0.2)], vec![c(0.1, -0.2), c(1., 0.)]])
            .unwrap();
        let d = vec![Endomorphism::from_fn(2, |i, j| c(i as f64 * 0.1, j as f64 * 0.3))];
        let ddbar = vec![vec![HermitianMatrix::diagonal(&[0.5, 0.25]).as_endomorphism().clone()]];
        MetricJet2::new(value, d, ddbar).unwrap()
    }

    #[test]
    fn sum_with_constant_identity_shifts_value_only() {
        let j = sample_jet();
        let id = MetricJet2::constant(HermitianMatrix::identity(2), 1);
        let s = jet_sum(&j, &id).unwrap();
        assert_eq!(s.value(), &j.value().add(&HermitianMatrix::identity(2)));
        assert_eq!(s.d(0), j.d(0));
        assert_eq!(s.ddbar(0, 0), j.ddbar(0, 0));
    }

    #[test]
    fn sum_with_self_doubles_and_matches_scale() {
        let j = sample_jet();
        assert_eq!(jet_sum(&j, &j).unwrap(), jet_scale(2.0, &j).unwrap());
        assert_eq!(jet_scale(1.0, &j).unwrap(), j);
    }

    #[test]
    fn scale_rejects_non_positive() {
        let j = sample_jet();
        assert!(jet_scale(0.0, &j).is_err());
        assert!(jet_scale(-1.0, &j).is_err());
        assert!(jet_scale(f64::NAN, &j).is_err());
    }

    #[test]
    fn shape_mismatch() {
        let j = sample_jet();
        let other = MetricJet2::constant(HermitianMatrix::identity(1), 1);
        assert!(jet_sum(&j, &other).is_err());
        let other = MetricJet2::constant(HermitianMatrix::identity(2), 2);
        assert!(jet_sum(&j, &other).is_err());
    }

    #[test]
    fn finite_differences_of_polynomial_metric() {
        // h(z) = 1 + |z|^2 + x^3: ∂h = z̄ + 3x²/2, ∂∂̄h = 1 + 3x/2
        let value = |t: &[f64]| -> Result<Endomorphism> {
            let (x, y) = (t[0], t[1]);
            Ok(Endomorphism::scalar(1, c(1.0 + x * x + y * y + x * x * x, 0.0)))
        };
        let (x, y) = (0.3, -0.2);
        let jet = finite_difference_jet(value, &[x, y], 1e-3).unwrap();
        let d = jet.d(0)[(0, 0)];
        assert!((d - c(x + 1.5 * x * x, -y)).norm() < 1e-9);
        let dd = jet.ddbar(0, 0)[(0, 0)];
        assert!((dd - c(1.0 + 1.5 * x, 0.0)).norm() < 1e-7);
    }

    #[test]
    fn levi_matrix_of_quadratic() {
        // φ = |z1|^2 + 2|z2|^2 + Re(z1 z̄2) → [[1, 1/2], [1/2, 2]]
        let phi = |t: &[f64]| {
            let (x1, y1, x2, y2) = (t[0], t[1], t[2], t[3]);
            x1 * x1 + y1 * y1 + 2.0 * (x2 * x2 + y2 * y2) + (x1 * x2 + y1 * y2)
        };
        let g = levi_matrix(phi, &[0.1, 0.2, -0.3, 0.05], 1e-2);
        assert!((g[(0, 0)] - c(1.0, 0.0)).norm() < 1e-10);
        assert!((g[(0, 1)] - c(0.5, 0.0)).norm() < 1e-10);
        assert!((g[(1, 1)] - c(2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn product_is_block_diagonal() {
        let a = sample_jet();
        let b = MetricJet2::constant(HermitianMatrix::scalar(1, 3.0), 2);
        let p = jet_product(&a, &b);
        assert_eq!((p.n(), p.rank()), (3, 3));
        assert_eq!(p.value()[(2, 2)], c(3.0, 0.0));
        assert_eq!(p.d(0)[(1, 1)], a.d(0)[(1, 1)]);
        assert_eq!(p.d(1).max_abs(), 0.0);
        assert_eq!(p.ddbar(0, 1).max_abs(), 0.0);
    }
}
