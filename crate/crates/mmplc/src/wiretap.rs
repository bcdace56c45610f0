//! The wiretap system: a sender A talks to receiver B over channel `H`
//! while eavesdropper E listens over channel `G`. Both channels are real
//! i.i.d. standard Gaussian, both receivers see additive Gaussian noise,
//! and A precodes using its knowledge of `H`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::matcore::{self, sample_gaussian_matrix, sample_gaussian_vector, Seed, SvdFactors};
use crate::{Error, Result};

const TAG_CHANNEL_H: u64 = 1;
const TAG_CHANNEL_G: u64 = 2;
const TAG_MESSAGE: u64 = 3;
const TAG_NOISE_B: u64 = 4;
const TAG_NOISE_E: u64 = 5;

/// Full parameterization of the wiretap setup: antenna counts, constellation
/// size, and the noise parameters. Noise standard deviations are `m * alpha`
/// at B and `m * beta` at E; `beta` defaults to `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct WiretapSystem {
    pub n_t: usize,
    pub n_r: usize,
    pub n_r_prime: usize,
    pub m: u64,
    pub alpha: f64,
    pub beta: f64,
    /// Average power constraint. Recorded only; uniform constellation
    /// sampling fixes it implicitly and nothing downstream consumes it.
    pub rho: f64,
}

impl WiretapSystem {
    /// Build a system with `beta = alpha` and `rho` set to the average power
    /// of a uniform message, `n_t * (m-1)(2m-1)/6`.
    pub fn new(n_t: usize, n_r: usize, n_r_prime: usize, m: u64, alpha: f64) -> Result<Self> {
        if n_t < 1 || n_r < 1 || n_r_prime < 1 {
            return Err(Error::InvalidParameter(
                "antenna counts must be positive".into(),
            ));
        }
        if n_r < n_t {
            return Err(Error::InvalidParameter(format!(
                "n_r ({n_r}) must be >= n_t ({n_t}): otherwise sigma_min(H) = 0"
            )));
        }
        if m < 2 {
            return Err(Error::InvalidParameter(format!(
                "constellation size m must be >= 2, got {m}"
            )));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0,1), got {alpha}"
            )));
        }
        let mf = m as f64;
        let rho = n_t as f64 * (mf - 1.0) * (2.0 * mf - 1.0) / 6.0;
        Ok(WiretapSystem {
            n_t,
            n_r,
            n_r_prime,
            m,
            alpha,
            beta: alpha,
            rho,
        })
    }

    /// Override the eavesdropper noise parameter (degraded-eavesdropper
    /// experiments).
    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must lie in (0,1), got {beta}"
            )));
        }
        self.beta = beta;
        Ok(self)
    }

    /// Noise standard deviation at the legitimate receiver: `m * alpha`.
    pub fn noise_sd_b(&self) -> f64 {
        self.m as f64 * self.alpha
    }

    /// Noise standard deviation at the eavesdropper: `m * beta`.
    pub fn noise_sd_e(&self) -> f64 {
        self.m as f64 * self.beta
    }
}

/// The pair of channel realizations for one trial.
#[derive(Debug, Clone)]
pub struct ChannelPair {
    /// Legitimate channel, `n_r x n_t`.
    pub h: DMatrix<f64>,
    /// Eavesdropper channel, `n_r_prime x n_t`.
    pub g: DMatrix<f64>,
}

/// Draw independent Gaussian channels of the system's shapes. `H` and `G`
/// come from distinct sub-streams of `seed`.
pub fn sample_channels(sys: &WiretapSystem, seed: Seed) -> ChannelPair {
    ChannelPair {
        h: sample_gaussian_matrix(sys.n_r, sys.n_t, seed.derived(TAG_CHANNEL_H)),
        g: sample_gaussian_matrix(sys.n_r_prime, sys.n_t, seed.derived(TAG_CHANNEL_G)),
    }
}

/// A message: one constellation point per transmit antenna.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    entries: Vec<u64>,
}

impl Message {
    /// Validates every entry against the constellation `{0, ..., m-1}`.
    pub fn new(entries: Vec<u64>, m: u64) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&x| x >= m) {
            return Err(Error::InvalidParameter(format!(
                "message entry {bad} outside constellation 0..{m}"
            )));
        }
        Ok(Message { entries })
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_vector(&self) -> DVector<f64> {
        DVector::from_iterator(self.entries.len(), self.entries.iter().map(|&x| x as f64))
    }
}

/// Uniform message over the constellation, deterministic in `seed`.
pub fn sample_message(sys: &WiretapSystem, seed: Seed) -> Message {
    let mut rng = seed.derived(TAG_MESSAGE).rng();
    Message {
        entries: (0..sys.n_t).map(|_| rng.random_range(0..sys.m)).collect(),
    }
}

/// How the transmitter shapes the signal from its knowledge of `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecoderKind {
    /// `P = V` from `H = U Sigma V^T`; B sees the diagonal channel `Sigma`.
    Svd,
    /// `P = H^{-1}` (square `H` only); B sees the identity channel.
    Inverse,
    /// `P = I`: no precoding.
    Identity,
    /// Caller-supplied matrix.
    Custom,
}

/// A precoding matrix with its construction kind. For the SVD kind the full
/// factorization of `H` is kept so transmission can apply B's filter `U^T`.
#[derive(Debug, Clone)]
pub struct Precoder {
    pub kind: PrecoderKind,
    matrix: DMatrix<f64>,
    svd: Option<SvdFactors>,
}

impl Precoder {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// The SVD factors of `H`, available for the `Svd` kind.
    pub fn svd_factors(&self) -> Option<&SvdFactors> {
        self.svd.as_ref()
    }

    pub fn custom(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "precoder must be square n_t x n_t, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Precoder {
            kind: PrecoderKind::Custom,
            matrix,
            svd: None,
        })
    }
}

/// Construct the precoder of the requested kind from the channel `h`.
///
/// `Inverse` requires a square full-rank `h`; `Custom` is built through
/// [`Precoder::custom`] instead.
pub fn build_precoder(kind: PrecoderKind, h: &DMatrix<f64>) -> Result<Precoder> {
    let n_t = h.ncols();
    match kind {
        PrecoderKind::Svd => {
            let f = matcore::svd_decompose(h)?;
            Ok(Precoder {
                kind,
                matrix: f.v.clone(),
                svd: Some(f),
            })
        }
        PrecoderKind::Inverse => {
            let p = matcore::inverse(h)?;
            Ok(Precoder {
                kind,
                matrix: p,
                svd: None,
            })
        }
        PrecoderKind::Identity => Ok(Precoder {
            kind,
            matrix: DMatrix::identity(n_t, n_t),
            svd: None,
        }),
        PrecoderKind::Custom => Err(Error::InvalidParameter(
            "custom precoders carry their own matrix; use Precoder::custom".into(),
        )),
    }
}

/// What each receiver observes for one transmitted message, together with
/// the effective channel each decoder works against.
///
/// For the SVD kind `y_b` is the filtered vector `U^T y` of length `n_t`
/// and `effective_b = Sigma`; for the inverse kind `y_b = x + e` and
/// `effective_b` is exactly the identity; otherwise `y_b = H P x + e` with
/// `effective_b = H P`. In every case `y_e = G P x + e'` and
/// `effective_e = G P`.
#[derive(Debug, Clone)]
pub struct ReceivedPair {
    pub y_b: DVector<f64>,
    pub y_e: DVector<f64>,
    pub effective_b: DMatrix<f64>,
    pub effective_e: DMatrix<f64>,
}

/// Transmit `x` through both channels with sampled noise.
pub fn transmit(
    sys: &WiretapSystem,
    chans: &ChannelPair,
    prec: &Precoder,
    x: &Message,
    seed: Seed,
) -> Result<ReceivedPair> {
    let e = sample_gaussian_vector(sys.n_r, sys.noise_sd_b(), seed.derived(TAG_NOISE_B));
    let e_prime =
        sample_gaussian_vector(sys.n_r_prime, sys.noise_sd_e(), seed.derived(TAG_NOISE_E));
    transmit_with_noise(sys, chans, prec, x, &e, &e_prime)
}

/// Transmit `x` with the noise forced to zero; used by exactness tests.
pub fn transmit_noiseless(
    sys: &WiretapSystem,
    chans: &ChannelPair,
    prec: &Precoder,
    x: &Message,
) -> Result<ReceivedPair> {
    let e = DVector::zeros(sys.n_r);
    let e_prime = DVector::zeros(sys.n_r_prime);
    transmit_with_noise(sys, chans, prec, x, &e, &e_prime)
}

fn transmit_with_noise(
    sys: &WiretapSystem,
    chans: &ChannelPair,
    prec: &Precoder,
    x: &Message,
    e: &DVector<f64>,
    e_prime: &DVector<f64>,
) -> Result<ReceivedPair> {
    if x.len() != sys.n_t {
        return Err(Error::DimensionMismatch(format!(
            "message length {} != n_t {}",
            x.len(),
            sys.n_t
        )));
    }
    if chans.h.shape() != (sys.n_r, sys.n_t) || chans.g.shape() != (sys.n_r_prime, sys.n_t) {
        return Err(Error::DimensionMismatch(
            "channel shapes inconsistent with system".into(),
        ));
    }
    if prec.matrix.shape() != (sys.n_t, sys.n_t) {
        return Err(Error::DimensionMismatch(
            "precoder shape inconsistent with system".into(),
        ));
    }

    let xv = x.to_vector();
    let effective_e = &chans.g * prec.matrix();
    let y_e = &effective_e * &xv + e_prime;

    let (y_b, effective_b) = match prec.kind {
        PrecoderKind::Svd => {
            let f = prec
                .svd
                .as_ref()
                .expect("svd precoder carries its factorization");
            let filtered = f.u.transpose() * e;
            let sigma_x = DVector::from_fn(sys.n_t, |i, _| f.sigma[i] * xv[i]);
            (sigma_x + filtered, DMatrix::from_diagonal(&f.sigma))
        }
        PrecoderKind::Inverse => {
            // B's equivalent channel is the identity by construction.
            let y = &xv + DVector::from_fn(sys.n_r, |i, _| e[i]);
            (y, DMatrix::identity(sys.n_t, sys.n_t))
        }
        PrecoderKind::Identity | PrecoderKind::Custom => {
            let hp = &chans.h * prec.matrix();
            let y = &hp * &xv + e;
            (y, hp)
        }
    };

    Ok(ReceivedPair {
        y_b,
        y_e,
        effective_b,
        effective_e,
    })
}
