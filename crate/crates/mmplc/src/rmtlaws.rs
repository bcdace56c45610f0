//! Closed-form random-matrix laws: asymptotic edge limits of Gaussian
//! singular values, the least-singular-value survival law for square
//! matrices, the density of the quotient matrix `Q = G H^{-1}` and of the
//! eigenvalues of `Q Q^T`, the Selberg integral, and the beta-prime law of
//! the positive QR diagonals of `Q`.
//!
//! Densities are evaluated in log space throughout; the determinant powers
//! and Vandermonde products overflow doubles well before `n = 50`.

use nalgebra::DMatrix;
use statrs::function::beta::{beta_reg, ln_beta};
use statrs::function::gamma::ln_gamma;

use crate::matcore::{self, Seed};
use crate::{Error, Result};

/// Limits of `sigma_min^2/s` and `sigma_max^2/s` for an `s x t` Gaussian
/// matrix as `s/t -> y`: `((1 - 1/sqrt(y))^2, (1 + 1/sqrt(y))^2)`.
pub fn edge_limits(y: f64) -> Result<(f64, f64)> {
    if y.is_nan() || y < 1.0 {
        return Err(Error::Domain(format!(
            "aspect ratio y must be >= 1, got {y}"
        )));
    }
    if y.is_infinite() {
        return Ok((1.0, 1.0));
    }
    let r = 1.0 / y.sqrt();
    Ok(((1.0 - r).powi(2), (1.0 + r).powi(2)))
}

/// Limiting survival function of the scaled least singular value of a
/// square Gaussian matrix: `P[sqrt(n) sigma_min >= x] -> exp(-x^2/2 - x)`.
pub fn least_sv_survival(x: f64) -> f64 {
    (-x * x / 2.0 - x).exp()
}

/// Unnormalized log-density of the quotient matrix `Q = G H^{-1}` of two
/// square Gaussians: `-n * ln det(I + Q Q^T)`.
pub fn quotient_density_log(q: &DMatrix<f64>) -> Result<f64> {
    let n = q.nrows();
    if q.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "quotient density expects a square matrix, got {}x{}",
            n,
            q.ncols()
        )));
    }
    let gram = DMatrix::identity(n, n) + q * q.transpose();
    let chol = gram.cholesky().expect("I + QQ^T is positive definite");
    let log_det: f64 = chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>() * 2.0;
    Ok(-(n as f64) * log_det)
}

/// Unnormalized log-density of the transformed eigenvalues
/// `w = 1/(1 + lambda)` of `W = Q Q^T`, evaluated on the ordered simplex
/// `0 < w_1 <= ... <= w_n < 1`:
/// `sum_l -ln(w_l)/2 - ln(1-w_l)/2 + sum_{j<k} ln(w_k - w_j)`.
pub fn eigen_density_w_log(w: &[f64]) -> Result<f64> {
    if w.is_empty() {
        return Err(Error::Domain("empty eigenvalue vector".into()));
    }
    for (idx, &v) in w.iter().enumerate() {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::Domain(format!(
                "coordinate {idx} = {v} outside (0,1)"
            )));
        }
    }
    if w.windows(2).any(|p| p[0] > p[1]) {
        return Err(Error::Domain("coordinates must be ascending".into()));
    }
    let mut log_density = 0.0;
    for &v in w {
        log_density -= 0.5 * v.ln() + 0.5 * (1.0 - v).ln();
    }
    for k in 1..w.len() {
        for j in 0..k {
            log_density += (w[k] - w[j]).ln();
        }
    }
    Ok(log_density)
}

/// Log of the Selberg integral
/// `s_n(l1, l2, l) = int_[0,1]^n prod w^l1 (1-w)^l2 prod_{j<k} |w_k-w_j|^{2l} dw`,
/// evaluated through the gamma-product closed form
/// `prod_{j=0}^{n-1} G(l1+1+jl) G(l2+1+jl) G(1+(j+1)l) / (G(l1+l2+2+(n+j-1)l) G(1+l))`.
///
/// The product here starts at `j = 0`; that is the convention whose value
/// agrees with the defining integral (checked against quadrature at
/// `n = 1, 2`), e.g. `s_1(l1, l2, .) = B(l1+1, l2+1)`.
pub fn selberg_log(n: usize, l1: f64, l2: f64, l: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("selberg integral needs n >= 1".into()));
    }
    if l1.is_nan() || l1 <= -1.0 || l2.is_nan() || l2 <= -1.0 || l.is_nan() || l < 0.0 {
        return Err(Error::Domain(format!(
            "selberg parameters outside convergence domain: l1={l1}, l2={l2}, l={l}"
        )));
    }
    let (a, b) = (l1 + 1.0, l2 + 1.0);
    let mut total = 0.0;
    for j in 0..n {
        let jf = j as f64;
        total += ln_gamma(a + jf * l) + ln_gamma(b + jf * l) + ln_gamma(1.0 + (jf + 1.0) * l)
            - ln_gamma(a + b + (n as f64 + jf - 1.0) * l)
            - ln_gamma(1.0 + l);
    }
    Ok(total)
}

/// The Selberg integral itself; overflows to `inf` where the log form does
/// not, so prefer [`selberg_log`] at large `n`.
pub fn selberg(n: usize, l1: f64, l2: f64, l: f64) -> Result<f64> {
    selberg_log(n, l1, l2, l).map(f64::exp)
}

/// Parameters of a beta distribution of the second kind, density
/// `v^(a-1) (1+v)^-(a+b) / B(a,b)` on `v > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaPrimeParams {
    pub a: f64,
    pub b: f64,
}

impl BetaPrimeParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_nan() || a <= 0.0 || b.is_nan() || b <= 0.0 {
            return Err(Error::Domain(format!(
                "beta-prime parameters must be positive, got a={a}, b={b}"
            )));
        }
        Ok(BetaPrimeParams { a, b })
    }

    pub fn ln_pdf(&self, v: f64) -> f64 {
        if v <= 0.0 {
            return f64::NEG_INFINITY;
        }
        (self.a - 1.0) * v.ln() - (self.a + self.b) * v.ln_1p() - ln_beta(self.a, self.b)
    }

    /// Density at `v`; zero off the support.
    pub fn pdf(&self, v: f64) -> f64 {
        self.ln_pdf(v).exp()
    }

    /// `P[V <= v]`, the regularized incomplete beta at `v/(1+v)`.
    pub fn cdf(&self, v: f64) -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        if v.is_infinite() {
            return 1.0;
        }
        beta_reg(self.a, self.b, v / (1.0 + v))
    }

    /// Mean `a/(b-1)`; defined only for `b > 1`.
    pub fn mean(&self) -> Result<f64> {
        if self.b <= 1.0 {
            return Err(Error::Domain(format!(
                "beta-prime mean undefined for b = {} <= 1",
                self.b
            )));
        }
        Ok(self.a / (self.b - 1.0))
    }

    /// Variance `a(a+b-1) / ((b-2)(b-1)^2)`; defined only for `b > 2`.
    pub fn variance(&self) -> Result<f64> {
        if self.b <= 2.0 {
            return Err(Error::Domain(format!(
                "beta-prime variance undefined for b = {} <= 2",
                self.b
            )));
        }
        Ok(self.a * (self.a + self.b - 1.0) / ((self.b - 2.0) * (self.b - 1.0).powi(2)))
    }
}

/// Law of the squared QR diagonal `r_jj^2` of `Q = G H^{-1}` under the
/// positive-diagonal convention: `B'((n-j+1)/2, j/2)`, independently
/// across `j`.
pub fn rjj_params(n: usize, j: usize) -> Result<BetaPrimeParams> {
    if j < 1 || j > n {
        return Err(Error::Domain(format!("j = {j} outside 1..={n}")));
    }
    BetaPrimeParams::new((n - j + 1) as f64 / 2.0, j as f64 / 2.0)
}

/// Draw `Q = G H^{-1}` for two independent `n x n` Gaussians.
pub fn sample_quotient(n: usize, seed: Seed) -> Result<DMatrix<f64>> {
    let h = matcore::sample_gaussian_matrix(n, n, seed.derived(1));
    let g = matcore::sample_gaussian_matrix(n, n, seed.derived(2));
    matcore::right_divide(&g, &h)
}
