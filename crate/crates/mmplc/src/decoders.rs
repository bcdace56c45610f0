//! The four decoders: B's divide-and-round on the diagonal channel, E's
//! zero-forcing attack, successive interference cancellation, and an
//! exhaustive ML oracle for tiny instances.

use nalgebra::{DMatrix, DVector};

use crate::matcore::{self, SINGULARITY_RTOL};
use crate::wiretap::Message;
use crate::{Error, Result};

/// Candidate budget for the exhaustive ML oracle.
pub const ML_CANDIDATE_GUARD: u64 = 1 << 20;

/// Whether rounded estimates are clamped into the constellation
/// `{0, ..., m-1}`. Clamping never hurts block error; checks of the
/// closed-form error expressions run unclamped, matching how the
/// rounding is written there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clamping {
    Constellation,
    Off,
}

/// Result of one decoding attempt. `success` and `layer_errors` are filled
/// in once the true message is supplied via [`DecodeOutcome::with_truth`].
#[derive(Debug, Clone)]
pub struct DecodeOutcome {
    pub estimate: Vec<i64>,
    pub success: Option<bool>,
    pub layer_errors: Option<usize>,
    /// Number of candidates the ML oracle examined; `None` for the other
    /// decoders.
    pub candidates_examined: Option<u64>,
}

impl DecodeOutcome {
    fn new(estimate: Vec<i64>) -> Self {
        DecodeOutcome {
            estimate,
            success: None,
            layer_errors: None,
            candidates_examined: None,
        }
    }

    /// Score this outcome against the message actually sent.
    pub fn with_truth(mut self, truth: &Message) -> Self {
        let errors = self
            .estimate
            .iter()
            .zip(truth.entries())
            .filter(|&(&est, &tru)| est != tru as i64)
            .count()
            + self.estimate.len().abs_diff(truth.len());
        self.layer_errors = Some(errors);
        self.success = Some(errors == 0);
        self
    }

    pub fn is_success(&self) -> bool {
        self.success == Some(true)
    }
}

/// Half-integer ties round to even; a measure-zero event, fixed for
/// reproducibility.
fn slice_to_symbol(value: f64, m: u64, clamp: Clamping) -> i64 {
    let rounded = value.round_ties_even() as i64;
    match clamp {
        Clamping::Constellation => rounded.clamp(0, m as i64 - 1),
        Clamping::Off => rounded,
    }
}

/// B's decoder on the diagonal channel: divide each filtered coordinate by
/// its singular value and round.
pub fn decode_legitimate_svd(
    y_b: &DVector<f64>,
    sigma: &DVector<f64>,
    m: u64,
    clamp: Clamping,
) -> Result<DecodeOutcome> {
    if y_b.len() != sigma.len() {
        return Err(Error::DimensionMismatch(format!(
            "received length {} != singular value count {}",
            y_b.len(),
            sigma.len()
        )));
    }
    let sigma_max = sigma.iter().fold(0.0f64, |a, &b| a.max(b));
    let estimate = y_b
        .iter()
        .zip(sigma.iter())
        .map(|(&y, &s)| {
            if s <= SINGULARITY_RTOL * sigma_max {
                Err(Error::SingularMatrix(format!(
                    "channel singular value {s:.3e} below tolerance"
                )))
            } else {
                Ok(slice_to_symbol(y / s, m, clamp))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecodeOutcome::new(estimate))
}

/// E's zero-forcing attack: apply the pseudo-inverse of the effective
/// channel, then round per coordinate.
pub fn decode_zf(
    y_e: &DVector<f64>,
    effective_e: &DMatrix<f64>,
    m: u64,
    clamp: Clamping,
) -> Result<DecodeOutcome> {
    if y_e.len() != effective_e.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "received length {} != channel rows {}",
            y_e.len(),
            effective_e.nrows()
        )));
    }
    let pinv = matcore::pseudo_inverse(effective_e)?;
    let equalized = pinv * y_e;
    let estimate = equalized
        .iter()
        .map(|&v| slice_to_symbol(v, m, clamp))
        .collect();
    Ok(DecodeOutcome::new(estimate))
}

/// Successive interference cancellation: QR the effective channel with
/// positive diagonal, filter by `O^T`, then decode the last layer first and
/// back-substitute upward. The sliced (and, under clamping, clamped) symbols
/// feed the cancellation of earlier layers.
pub fn decode_sic(
    y_e: &DVector<f64>,
    effective_e: &DMatrix<f64>,
    m: u64,
    clamp: Clamping,
) -> Result<DecodeOutcome> {
    let n = effective_e.ncols();
    if effective_e.nrows() != n {
        return Err(Error::DimensionMismatch(format!(
            "sic expects a square channel, got {}x{n}",
            effective_e.nrows()
        )));
    }
    if y_e.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "received length {} != channel size {n}",
            y_e.len()
        )));
    }
    let f = matcore::qr_decompose(effective_e)?;
    let filtered = f.o.transpose() * y_e;
    let mut estimate = vec![0i64; n];
    for j in (0..n).rev() {
        let mut residual = filtered[j];
        for (k, &already) in estimate.iter().enumerate().skip(j + 1) {
            residual -= f.r[(j, k)] * already as f64;
        }
        estimate[j] = slice_to_symbol(residual / f.r[(j, j)], m, clamp);
    }
    Ok(DecodeOutcome::new(estimate))
}

/// Exhaustive maximum-likelihood search over the whole constellation,
/// `argmin_x ||y - E x||^2`. Only usable while `m^n_t` stays under
/// [`ML_CANDIDATE_GUARD`]; full ML is exactly what large dimensions rule out.
pub fn decode_ml_bruteforce(
    y_e: &DVector<f64>,
    effective_e: &DMatrix<f64>,
    m: u64,
) -> Result<DecodeOutcome> {
    let n_t = effective_e.ncols();
    if y_e.len() != effective_e.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "received length {} != channel rows {}",
            y_e.len(),
            effective_e.nrows()
        )));
    }
    let total = (m as f64).powi(n_t as i32);
    if total > ML_CANDIDATE_GUARD as f64 {
        return Err(Error::GuardExceeded(format!(
            "ml search space m^n_t = {m}^{n_t} exceeds {ML_CANDIDATE_GUARD}"
        )));
    }
    let total = total as u64;

    // Odometer over candidates; the running E*x vector is updated
    // incrementally as digits change.
    let mut digits = vec![0u64; n_t];
    let mut ex = DVector::<f64>::zeros(y_e.len());
    let mut best = (y_e - &ex).norm_squared();
    let mut best_digits = digits.clone();
    let mut examined = 1u64;

    'outer: loop {
        // advance odometer
        let mut pos = 0;
        loop {
            if pos == n_t {
                break 'outer;
            }
            if digits[pos] + 1 < m {
                digits[pos] += 1;
                ex += effective_e.column(pos);
                break;
            }
            ex -= (digits[pos] as f64) * effective_e.column(pos);
            digits[pos] = 0;
            pos += 1;
        }
        examined += 1;
        let dist = (y_e - &ex).norm_squared();
        if dist < best {
            best = dist;
            best_digits = digits.clone();
        }
    }
    debug_assert_eq!(examined, total);

    let mut outcome = DecodeOutcome::new(best_digits.iter().map(|&d| d as i64).collect());
    outcome.candidates_examined = Some(examined);
    Ok(outcome)
}

/// `||y - E x||^2` for an integer candidate; the objective the ML oracle
/// minimizes, exposed so dominance checks can score other decoders'
/// estimates.
pub fn ml_objective(y_e: &DVector<f64>, effective_e: &DMatrix<f64>, candidate: &[i64]) -> f64 {
    let xv = DVector::from_iterator(candidate.len(), candidate.iter().map(|&v| v as f64));
    (y_e - effective_e * xv).norm_squared()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{sample_gaussian_matrix, sample_gaussian_vector, Seed};
    use crate::wiretap::{
        build_precoder, sample_channels, sample_message, transmit, transmit_noiseless,
        PrecoderKind, WiretapSystem,
    };

    #[test]
    fn legitimate_decoder_noiseless_and_arithmetic() {
        let sigma = DVector::from_vec(vec![2.0, 1.0]);
        let y = DVector::from_vec(vec![4.4, 0.6]);
        let out = decode_legitimate_svd(&y, &sigma, 4, Clamping::Constellation).unwrap();
        assert_eq!(out.estimate, vec![2, 1]);

        let truth = Message::new(vec![2, 1], 4).unwrap();
        let scored = out.with_truth(&truth);
        assert!(scored.is_success());
        assert_eq!(scored.layer_errors, Some(0));
    }

    #[test]
    fn legitimate_decoder_rejects_zero_sigma() {
        let sigma = DVector::from_vec(vec![1.0, 0.0]);
        let y = DVector::from_vec(vec![1.0, 1.0]);
        assert!(matches!(
            decode_legitimate_svd(&y, &sigma, 2, Clamping::Off),
            Err(Error::SingularMatrix(_))
        ));
    }

    #[test]
    fn legitimate_error_rate_below_epsilon_at_threshold_noise() {
        // alpha chosen from the epsilon-threshold formula at eps = 0.1 keeps
        // the block error rate near or below eps.
        let eps = 0.1f64;
        let n_t = 16;
        let (n_r, m) = (32usize, 2u64);
        let trials = 1000u64;
        let mut errors = 0;
        for t in 0..trials {
            let seed = Seed::for_trial(0xB0B, t);
            let h = sample_gaussian_matrix(n_r, n_t, seed.derived(1));
            let f = crate::matcore::svd_decompose(&h).unwrap();
            let sigma_min = f.sigma_min();
            let alpha_sq = sigma_min * sigma_min / (8.0 * (m * m) as f64 * (n_t as f64 / eps).ln());
            let alpha = alpha_sq.sqrt().min(0.999);
            let sys = WiretapSystem::new(n_t, n_r, n_r, m, alpha).unwrap();
            let x = sample_message(&sys, seed);
            let noise = sample_gaussian_vector(n_r, sys.noise_sd_b(), seed.derived(2));
            let filtered = f.u.transpose() * noise;
            let y = DVector::from_fn(n_t, |i, _| f.sigma[i] * x.entries()[i] as f64 + filtered[i]);
            let out = decode_legitimate_svd(&y, &f.sigma, m, Clamping::Off)
                .unwrap()
                .with_truth(&x);
            if !out.is_success() {
                errors += 1;
            }
        }
        let rate = errors as f64 / trials as f64;
        assert!(rate <= eps + 0.05, "block error rate {rate} > eps + 0.05");
    }

    #[test]
    fn zf_identity_and_scaled() {
        let eye = DMatrix::<f64>::identity(2, 2);
        let y = DVector::from_vec(vec![1.2, 2.9]);
        let out = decode_zf(&y, &eye, 4, Clamping::Constellation).unwrap();
        assert_eq!(out.estimate, vec![1, 3]);

        let two_eye = 2.0 * DMatrix::<f64>::identity(2, 2);
        let y = DVector::from_vec(vec![2.2, 3.8]);
        let out = decode_zf(&y, &two_eye, 4, Clamping::Constellation).unwrap();
        assert_eq!(out.estimate, vec![1, 2]);
    }

    #[test]
    fn zf_matches_explicit_svd_route() {
        // The pseudo-inverse route must agree with V' Sigma'^-1 U'^T applied
        // explicitly.
        for t in 0..20 {
            let seed = Seed::for_trial(0x2F, t);
            let g_v = sample_gaussian_matrix(6, 4, seed.derived(1));
            let y = sample_gaussian_vector(6, 1.0, seed.derived(2));
            let out = decode_zf(&y, &g_v, 8, Clamping::Off).unwrap();

            let f = crate::matcore::svd_decompose(&g_v).unwrap();
            let ut_y = f.u.transpose() * &y;
            let scaled = DVector::from_fn(4, |i, _| ut_y[i] / f.sigma[i]);
            let explicit = &f.v * scaled;
            for i in 0..4 {
                let direct = out.estimate[i] as f64;
                let via_svd = explicit[i].round_ties_even();
                assert!(
                    (direct - via_svd).abs() < 1e-9,
                    "trial {t} coord {i}: {direct} vs {via_svd}"
                );
            }
        }
    }

    #[test]
    fn zf_equalized_noise_matches_per_coordinate_law() {
        // Fixed G: the i-th equalized-noise variance must match
        // m^2 alpha^2 sum_j v_ij^2 / sigma_j^2 within 5%, and every
        // coordinate stays below m^2 alpha^2 / sigma_min^2.
        let (n_rp, n_t, m, alpha) = (8usize, 5usize, 4u64, 0.3f64);
        let g_v = sample_gaussian_matrix(n_rp, n_t, Seed::new(0x11, 0));
        let f = crate::matcore::svd_decompose(&g_v).unwrap();
        let m_alpha_sq = (m as f64 * alpha).powi(2);

        let mut predicted = vec![0.0; n_t];
        for (i, slot) in predicted.iter_mut().enumerate() {
            for j in 0..n_t {
                *slot += f.v[(i, j)].powi(2) / f.sigma[j].powi(2);
            }
            *slot *= m_alpha_sq;
        }
        let bound = m_alpha_sq / f.sigma_min().powi(2);
        for &p in &predicted {
            assert!(p <= bound * (1.0 + 1e-12));
        }

        let pinv = crate::matcore::pseudo_inverse(&g_v).unwrap();
        let draws = 10_000u64;
        let mut sumsq = vec![0.0; n_t];
        for t in 0..draws {
            let e = sample_gaussian_vector(n_rp, m as f64 * alpha, Seed::for_trial(0x12, t));
            let eq = &pinv * e;
            for i in 0..n_t {
                sumsq[i] += eq[i] * eq[i];
            }
        }
        for i in 0..n_t {
            let empirical = sumsq[i] / draws as f64;
            let rel = (empirical - predicted[i]).abs() / predicted[i];
            assert!(
                rel < 0.05,
                "coord {i}: empirical {empirical} vs {}",
                predicted[i]
            );
        }
    }

    #[test]
    fn sic_identity_and_hand_backsubstitution() {
        let eye = DMatrix::<f64>::identity(2, 2);
        let y = DVector::from_vec(vec![3.1, 0.8]);
        let out = decode_sic(&y, &eye, 4, Clamping::Constellation).unwrap();
        assert_eq!(out.estimate, vec![3, 1]);

        // R = [[1, 0.5],[0, 1]], O = I: x2 = round(1.1) = 1,
        // x1 = round(2.4 - 0.5*1) = 2.
        let mut r = DMatrix::<f64>::identity(2, 2);
        r[(0, 1)] = 0.5;
        let y = DVector::from_vec(vec![2.4, 1.1]);
        let out = decode_sic(&y, &r, 4, Clamping::Constellation).unwrap();
        assert_eq!(out.estimate, vec![2, 1]);
    }

    #[test]
    fn sic_succeeds_when_noise_under_half_gap() {
        // If every layer's effective noise stays below r_jj / 2 the
        // back-substitution recovers the message exactly. The ML oracle on
        // the same instances always holds an objective at least as small as
        // the recovered candidate's (it may still slice to a closer wrong
        // point: the per-layer box is not contained in the ML decision
        // region).
        use rand::Rng;
        let mut sic_ok = 0;
        let trials = 1000u64;
        for t in 0..trials {
            let seed = Seed::for_trial(0x51C, t);
            let q = sample_gaussian_matrix(3, 3, seed.derived(1));
            let f = crate::matcore::qr_decompose(&q).unwrap();
            let mut rng = seed.derived(2).rng();
            let x = Message::new((0..3).map(|_| rng.random_range(0..4)).collect(), 4).unwrap();
            // per-layer noise strictly inside (-r_jj/2, r_jj/2)
            let w = DVector::from_fn(3, |j, _| 0.49 * f.r[(j, j)] * rng.random_range(-1.0..1.0));
            let y = &f.o * (&f.r * x.to_vector() + w);
            let sic = decode_sic(&y, &q, 4, Clamping::Off).unwrap().with_truth(&x);
            let ml = decode_ml_bruteforce(&y, &q, 4).unwrap();
            assert!(
                ml_objective(&y, &q, &ml.estimate) <= ml_objective(&y, &q, &sic.estimate) + 1e-12,
                "trial {t}: ml objective above sic candidate"
            );
            if sic.is_success() {
                sic_ok += 1;
            }
        }
        assert!(
            sic_ok as f64 / trials as f64 >= 0.99,
            "sic success {sic_ok}/{trials}"
        );
    }

    #[test]
    fn ml_nearest_point_and_exhaustive_count() {
        let eye = DMatrix::<f64>::identity(2, 2);
        let y = DVector::from_vec(vec![0.9, 0.1]);
        let out = decode_ml_bruteforce(&y, &eye, 2).unwrap();
        assert_eq!(out.estimate, vec![1, 0]);
        assert_eq!(out.candidates_examined, Some(4));
    }

    #[test]
    fn ml_noiseless_recovers_exactly() {
        let sys = WiretapSystem::new(4, 4, 4, 2, 0.5).unwrap();
        let c = sample_channels(&sys, Seed::new(0x31, 0));
        let p = build_precoder(PrecoderKind::Identity, &c.h).unwrap();
        let x = sample_message(&sys, Seed::new(0x32, 0));
        let r = transmit_noiseless(&sys, &c, &p, &x).unwrap();
        let out = decode_ml_bruteforce(&r.y_e, &r.effective_e, 2)
            .unwrap()
            .with_truth(&x);
        assert!(out.is_success());
        assert_eq!(out.candidates_examined, Some(16));
    }

    #[test]
    fn ml_guard_refuses_large_spaces() {
        let eye = DMatrix::<f64>::identity(8, 8);
        let y = DVector::zeros(8);
        assert!(matches!(
            decode_ml_bruteforce(&y, &eye, 8), // 8^8 = 2^24
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn ml_dominates_zf_and_sic_objectives() {
        let sys = WiretapSystem::new(4, 4, 4, 2, 0.42).unwrap();
        let mut ml_wins = 0;
        let mut zf_wins = 0;
        let mut sic_wins = 0;
        let trials = 300u64;
        for t in 0..trials {
            let seed = Seed::for_trial(0x41, t);
            let c = sample_channels(&sys, seed);
            let p = build_precoder(PrecoderKind::Identity, &c.h).unwrap();
            let x = sample_message(&sys, seed);
            let r = transmit(&sys, &c, &p, &x, seed).unwrap();

            let ml = decode_ml_bruteforce(&r.y_e, &r.effective_e, 2)
                .unwrap()
                .with_truth(&x);
            let zf = decode_zf(&r.y_e, &r.effective_e, 2, Clamping::Constellation)
                .unwrap()
                .with_truth(&x);
            let sic = decode_sic(&r.y_e, &r.effective_e, 2, Clamping::Constellation)
                .unwrap()
                .with_truth(&x);

            let obj_ml = ml_objective(&r.y_e, &r.effective_e, &ml.estimate);
            assert!(
                obj_ml <= ml_objective(&r.y_e, &r.effective_e, &zf.estimate) + 1e-12,
                "trial {t}: ml objective above zf candidate"
            );
            assert!(
                obj_ml <= ml_objective(&r.y_e, &r.effective_e, &sic.estimate) + 1e-12,
                "trial {t}: ml objective above sic candidate"
            );
            ml_wins += ml.is_success() as u32;
            zf_wins += zf.is_success() as u32;
            sic_wins += sic.is_success() as u32;
        }
        assert!(ml_wins >= zf_wins.max(sic_wins));
    }

    #[test]
    fn clamping_restricts_estimates() {
        let eye = DMatrix::<f64>::identity(2, 2);
        let y = DVector::from_vec(vec![-1.4, 5.2]);
        let clamped = decode_zf(&y, &eye, 4, Clamping::Constellation).unwrap();
        assert_eq!(clamped.estimate, vec![0, 3]);
        let raw = decode_zf(&y, &eye, 4, Clamping::Off).unwrap();
        assert_eq!(raw.estimate, vec![-1, 5]);
    }

    #[test]
    fn ties_round_to_even() {
        let eye = DMatrix::<f64>::identity(2, 2);
        let y = DVector::from_vec(vec![0.5, 1.5]);
        let out = decode_zf(&y, &eye, 4, Clamping::Off).unwrap();
        assert_eq!(out.estimate, vec![0, 2]);
    }
}
