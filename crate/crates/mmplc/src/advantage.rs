//! Decoding-advantage ratios of the legitimate receiver over the
//! eavesdropper, their closed-form asymptotes, and the exact tail law for
//! the inverse precoder.
//!
//! `adv_zf` compares the maximum noise power each side's ZF decoder
//! tolerates at matched error probability; `advup_zf` bounds it for every
//! precoder; `adv_sic` is the analogue when E runs successive interference
//! cancellation.

use nalgebra::DMatrix;

use crate::matcore::{self, Seed};
use crate::wiretap::Precoder;
use crate::{Error, Result};

/// One square inverse-precoder draw: the three ratios measured on the same
/// `Q = G H^{-1}`. Satisfies `adv_sic <= adv_zf <= advup_zf`.
#[derive(Debug, Clone, Copy)]
pub struct AdvantageSample {
    pub adv_zf: f64,
    pub advup_zf: f64,
    pub adv_sic: f64,
}

/// Draw `H`, `G` as independent `n x n` Gaussians and evaluate all three
/// ratios under the inverse precoder.
pub fn sample_square_inverse(n: usize, seed: Seed) -> Result<AdvantageSample> {
    let h = matcore::sample_gaussian_matrix(n, n, seed.derived(1));
    let g = matcore::sample_gaussian_matrix(n, n, seed.derived(2));
    let q = matcore::right_divide(&g, &h)?;

    let sv_q = matcore::singular_values(&q)?;
    let adv_zf = 1.0 / (sv_q[n - 1] * sv_q[n - 1]);

    let sv_h = matcore::singular_values(&h)?;
    let sv_g = matcore::singular_values(&g)?;
    let advup_zf = (sv_h[0] * sv_h[0]) / (sv_g[n - 1] * sv_g[n - 1]);

    let r = matcore::qr_decompose(&q)?.r;
    let rnn = r[(n - 1, n - 1)];
    let adv_sic = 1.0 / (rnn * rnn);

    Ok(AdvantageSample {
        adv_zf,
        advup_zf,
        adv_sic,
    })
}

/// `sigma_min(HP)^2 / sigma_min(GP)^2`: the ZF advantage of B over E under
/// precoder `P`. For the SVD precoder this reduces to
/// `sigma_min(H)^2 / sigma_min(G)^2`.
pub fn adv_zf(h: &DMatrix<f64>, g: &DMatrix<f64>, p: &Precoder) -> Result<f64> {
    let hp = h * p.matrix();
    let gp = g * p.matrix();
    let sv_hp = matcore::singular_values(&hp)?;
    let sv_gp = matcore::singular_values(&gp)?;
    let n_t = p.matrix().ncols();
    let denom = sv_gp[n_t - 1] * sv_gp[n_t - 1];
    if denom <= (matcore::SINGULARITY_RTOL * sv_gp[0]).powi(2) {
        return Err(Error::SingularMatrix(
            "effective eavesdropper channel GP is rank deficient".into(),
        ));
    }
    Ok(sv_hp[n_t - 1] * sv_hp[n_t - 1] / denom)
}

/// `sigma_1(H)^2 / sigma_min(G)^2`: dominates [`adv_zf`] for every precoder.
pub fn advup_zf(h: &DMatrix<f64>, g: &DMatrix<f64>) -> Result<f64> {
    let sv_h = matcore::singular_values(h)?;
    let sv_g = matcore::singular_values(g)?;
    let n_t = g.ncols();
    let denom = sv_g[n_t - 1] * sv_g[n_t - 1];
    if denom <= (matcore::SINGULARITY_RTOL * sv_g[0]).powi(2) {
        return Err(Error::SingularMatrix("G is rank deficient".into()));
    }
    Ok(sv_h[0] * sv_h[0] / denom)
}

/// SIC advantage `1 / r_nn(Q)^2` from the positive-diagonal QR of the square
/// effective channel `Q`.
pub fn adv_sic(q: &DMatrix<f64>) -> Result<f64> {
    let n = q.ncols();
    let r = matcore::qr_decompose(q)?.r;
    let rnn = r[(n - 1, n - 1)];
    Ok(1.0 / (rnn * rnn))
}

/// Aspect-ratio limits `y = n_r / n_t` and `y' = n_r' / n_t`, each in
/// `[1, inf]` with `f64::INFINITY` as the infinite case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoteQuery {
    pub y: f64,
    pub y_prime: f64,
}

impl AsymptoteQuery {
    pub fn new(y: f64, y_prime: f64) -> Result<Self> {
        if y.is_nan() || y < 1.0 || y_prime.is_nan() || y_prime < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "aspect ratios must lie in [1, inf], got y={y}, y'={y_prime}"
            )));
        }
        Ok(AsymptoteQuery { y, y_prime })
    }
}

/// Almost-sure limit of the SVD-precoder ZF advantage:
/// `(sqrt(y)-1)^2 / (sqrt(y')-1)^2`, with the limit cases made explicit:
/// 1 when `y = y'`, 0 when `y` is finite and `y' = inf`, and `inf` when the
/// denominator degenerates (`y' = 1 < y`).
pub fn predict_adv_zf_svd(q: AsymptoteQuery) -> f64 {
    let (y, yp) = (q.y, q.y_prime);
    if y == yp {
        return 1.0;
    }
    if yp.is_infinite() {
        return 0.0;
    }
    if y.is_infinite() {
        return f64::INFINITY;
    }
    let denom = (yp.sqrt() - 1.0).powi(2);
    if denom == 0.0 {
        return f64::INFINITY;
    }
    (y.sqrt() - 1.0).powi(2) / denom
}

/// Almost-sure limit of the advantage upper bound:
/// `(sqrt(y)+1)^2 / (sqrt(y')-1)^2`; tends to 1 when `y = y' -> inf`.
pub fn predict_advup(q: AsymptoteQuery) -> f64 {
    let (y, yp) = (q.y, q.y_prime);
    if y.is_infinite() && yp.is_infinite() {
        return 1.0;
    }
    if yp.is_infinite() {
        return 0.0;
    }
    if y.is_infinite() {
        return f64::INFINITY;
    }
    let denom = (yp.sqrt() - 1.0).powi(2);
    if denom == 0.0 {
        return f64::INFINITY;
    }
    (y.sqrt() + 1.0).powi(2) / denom
}

/// If the advantage upper bound stays `>= 1` in the limit, the antenna
/// ratio `rho' = y'/y` obeys `rho' <= 1/(1 - 2/sqrt(y'))^2`. Returns that
/// bound (infinite for `y' <= 4`, where it is vacuous); it is `<= 9` for
/// every `y' >= 9`, which forces `min(y', rho') <= 9`.
pub fn advup_rho_bound(y_prime: f64) -> f64 {
    if y_prime <= 4.0 {
        return f64::INFINITY;
    }
    let d = 1.0 - 2.0 / y_prime.sqrt();
    1.0 / (d * d)
}

/// Closed-form tail of the inverse-precoder ZF advantage:
/// `P[adv_zf < G] = (G/(1+G))^((n^2-n)/2)`.
///
/// The derivation passes through an inequality, so the value is exact only
/// up to the claimed unit constant; Monte Carlo at small `n` shows the true
/// probability falls well below it, so treat it as an upper bound there.
pub fn adv_zf_tail(n: usize, g_of_n: f64) -> f64 {
    assert!(n >= 2, "tail law needs n >= 2");
    assert!(g_of_n > 0.0, "G(n) must be positive");
    let w = g_of_n / (1.0 + g_of_n);
    let exponent = (n * n - n) as f64 / 2.0;
    (exponent * w.ln()).exp()
}

/// Relaxation of [`adv_zf_tail`]: `exp(-(n^2-n)/(4 G))`, valid for
/// `G >= 1`. At `G = (n^2+n)/(4 ln(1/eps))` it is below `eps` for large `n`.
pub fn adv_zf_tail_exp_bound(n: usize, g_of_n: f64) -> f64 {
    (-((n * n - n) as f64) / (4.0 * g_of_n)).exp()
}
