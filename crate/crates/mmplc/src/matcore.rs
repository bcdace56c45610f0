//! Matrix core: seeded Gaussian sampling and the decompositions (SVD,
//! positive-diagonal QR, pseudo-inverse) everything else consumes.
//!
//! All routines are pure functions of their arguments; RNG state lives
//! entirely inside the [`Seed`] passed in, so trials can run on any number
//! of workers without changing results.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

/// Relative singularity threshold: a matrix is treated as singular when
/// `sigma_min <= SINGULARITY_RTOL * sigma_max`. Scale-free, close to the
/// double-precision noise floor.
pub const SINGULARITY_RTOL: f64 = 1e-12;

/// Reproducible RNG coordinates: a master seed plus a stream index
/// (typically the trial index). The same `(master, stream)` pair always
/// produces the same draws, independent of scheduling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed {
    pub master: u64,
    pub stream: u64,
}

impl Seed {
    pub fn new(master: u64, stream: u64) -> Self {
        Seed { master, stream }
    }

    /// The seed for trial `index` under the same master key.
    pub fn for_trial(master: u64, index: u64) -> Self {
        Seed {
            master,
            stream: index,
        }
    }

    /// A statistically independent sub-seed, keyed by `tag`. Used to give
    /// each component of a trial (channel H, channel G, message, noise)
    /// its own stream.
    pub fn derived(&self, tag: u64) -> Self {
        Seed {
            master: splitmix64(self.master ^ tag.wrapping_mul(0x9e3779b97f4a7c15)),
            stream: self.stream,
        }
    }

    /// Instantiate the generator this seed denotes.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Sample a `rows x cols` matrix with i.i.d. standard normal entries,
/// filled in row-major order. Deterministic in `seed`.
pub fn sample_gaussian_matrix(rows: usize, cols: usize, seed: Seed) -> DMatrix<f64> {
    assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
    let mut rng = seed.rng();
    let mut m = DMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = StandardNormal.sample(&mut rng);
        }
    }
    m
}

/// Sample a length-`n` vector with i.i.d. `N(0, sd^2)` entries.
pub fn sample_gaussian_vector(n: usize, sd: f64, seed: Seed) -> DVector<f64> {
    let mut rng = seed.rng();
    DVector::from_fn(n, |_, _| {
        let z: f64 = StandardNormal.sample(&mut rng);
        sd * z
    })
}

/// Reduced SVD of an `s x t` matrix with `s >= t`: `m = u * diag(sigma) * v^T`
/// with `u` of size `s x t` (orthonormal columns), `v` orthogonal `t x t`,
/// and `sigma` sorted non-increasing.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: DMatrix<f64>,
    pub sigma: DVector<f64>,
    pub v: DMatrix<f64>,
}

impl SvdFactors {
    pub fn sigma_min(&self) -> f64 {
        self.sigma[self.sigma.len() - 1]
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma[0]
    }

    /// `u * diag(sigma) * v^T`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut us = self.u.clone();
        for (j, &s) in self.sigma.iter().enumerate() {
            us.column_mut(j).scale_mut(s);
        }
        us * self.v.transpose()
    }
}

/// Reduced SVD with singular values sorted non-increasing.
///
/// Requires `rows >= cols`; fails with [`Error::DecompositionFailed`] if the
/// underlying iteration does not converge.
pub fn svd_decompose(m: &DMatrix<f64>) -> Result<SvdFactors> {
    let (s, t) = m.shape();
    if s < t {
        return Err(Error::DimensionMismatch(format!(
            "svd_decompose expects rows >= cols, got {s}x{t}"
        )));
    }
    let svd = m
        .clone()
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or(Error::DecompositionFailed)?;
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let sigma = svd.singular_values;

    // Sort descending and permute the factor columns to match.
    let mut order: Vec<usize> = (0..t).collect();
    order.sort_by(|&a, &b| sigma[b].partial_cmp(&sigma[a]).unwrap());
    let mut u_sorted = DMatrix::zeros(s, t);
    let mut v_sorted = DMatrix::zeros(t, t);
    let mut sigma_sorted = DVector::zeros(t);
    for (new_j, &old_j) in order.iter().enumerate() {
        u_sorted.set_column(new_j, &u.column(old_j));
        v_sorted.set_column(new_j, &v_t.row(old_j).transpose());
        sigma_sorted[new_j] = sigma[old_j];
    }
    Ok(SvdFactors {
        u: u_sorted,
        sigma: sigma_sorted,
        v: v_sorted,
    })
}

/// Singular values only (sorted non-increasing), skipping the factors.
pub fn singular_values(m: &DMatrix<f64>) -> Result<DVector<f64>> {
    let mut sv = m
        .clone()
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or(Error::DecompositionFailed)?
        .singular_values;
    sv.as_mut_slice().sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(sv)
}

/// Squared singular values (sorted non-increasing) via the Gram matrix.
///
/// Forms `m^T m` (or `m m^T`, whichever is smaller) and takes symmetric
/// eigenvalues. Absolute error is on the order of `sigma_max^2 * eps`, which
/// is what the Monte Carlo consumers here can tolerate; use
/// [`singular_values`] when small singular values must be resolved to full
/// relative precision.
pub fn singular_values_sq(m: &DMatrix<f64>) -> DVector<f64> {
    let gram = if m.nrows() >= m.ncols() {
        m.transpose() * m
    } else {
        m * m.transpose()
    };
    let mut ev = gram.symmetric_eigenvalues();
    ev.iter_mut().for_each(|x| *x = x.max(0.0));
    ev.as_mut_slice().sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev
}

/// QR factors of a square full-rank matrix with the `r_jj > 0` sign
/// convention enforced.
#[derive(Debug, Clone)]
pub struct QrFactors {
    pub o: DMatrix<f64>,
    pub r: DMatrix<f64>,
}

impl QrFactors {
    pub fn diag(&self) -> DVector<f64> {
        self.r.diagonal()
    }
}

/// QR decomposition `m = o * r` of a square matrix, with column sign flips
/// applied so every diagonal entry of `r` is strictly positive.
///
/// Fails with [`Error::SingularMatrix`] when any `|r_jj|` falls below
/// `SINGULARITY_RTOL` times the largest `|r_jj|`.
pub fn qr_decompose(m: &DMatrix<f64>) -> Result<QrFactors> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(Error::DimensionMismatch(format!(
            "qr_decompose expects a square matrix, got {rows}x{cols}"
        )));
    }
    let qr = m.clone().qr();
    let mut o = qr.q();
    let mut r = qr.r();

    // Flip signs: negating row j of R together with column j of O leaves
    // the product unchanged and makes r_jj positive.
    for j in 0..cols {
        if r[(j, j)] < 0.0 {
            for k in j..cols {
                r[(j, k)] = -r[(j, k)];
            }
            for i in 0..rows {
                o[(i, j)] = -o[(i, j)];
            }
        }
    }

    let diag_max = r.diagonal().iter().fold(0.0f64, |a, &b| a.max(b));
    for j in 0..cols {
        if r[(j, j)] <= SINGULARITY_RTOL * diag_max {
            return Err(Error::SingularMatrix(format!(
                "rank-deficient input: r[{j},{j}] = {:.3e}",
                r[(j, j)]
            )));
        }
    }
    Ok(QrFactors { o, r })
}

/// Moore-Penrose pseudo-inverse `v * sigma^-1 * u^T` of a full-column-rank
/// matrix with `rows >= cols`. Satisfies `pseudo_inverse(m) * m = I`.
pub fn pseudo_inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let f = svd_decompose(m)?;
    if f.sigma_min() <= SINGULARITY_RTOL * f.sigma_max() {
        return Err(Error::SingularMatrix(format!(
            "smallest singular value {:.3e} below tolerance",
            f.sigma_min()
        )));
    }
    let mut v_scaled = f.v.clone();
    for (j, &s) in f.sigma.iter().enumerate() {
        v_scaled.column_mut(j).scale_mut(1.0 / s);
    }
    Ok(v_scaled * f.u.transpose())
}

/// Inverse of a square matrix, with the same singularity test as
/// [`pseudo_inverse`] (for square inputs the two coincide).
pub fn inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "inverse expects a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    pseudo_inverse(m)
}

/// Solve `Q = G H^{-1}` without forming the inverse explicitly: LU-solve
/// `H^T X = G^T` and transpose. Errors if `H` is singular.
pub fn right_divide(g: &DMatrix<f64>, h: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if h.nrows() != h.ncols() || g.ncols() != h.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "right_divide expects g ({}x{}) with square h ({}x{})",
            g.nrows(),
            g.ncols(),
            h.nrows(),
            h.ncols()
        )));
    }
    let lu = h.transpose().lu();
    let x = lu
        .solve(&g.transpose())
        .ok_or_else(|| Error::SingularMatrix("right_divide: singular h".into()))?;
    Ok(x.transpose())
}
