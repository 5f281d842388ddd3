//! Reversible Markov semigroups on finite probability spaces.
//!
//! A generator `L` acts on state functions by `(Lf)(x) = Σ_y L(x,y) f(y)`.
//! With `D = diag(μ)`, reversibility makes `D^{1/2} L D^{-1/2}` symmetric;
//! its eigendecomposition gives the spectrum of `L` on `L²(μ)` and
//! `P_t = e^{-tL}` without a matrix exponential.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cube::check_dim;
use crate::error::{Error, Result};
use crate::norm::{lp_weighted, weighted_mean};

/// Largest state space handled by dense eigendecomposition.
pub const MAX_STATES: usize = 4096;
/// Construction-time tolerance for structural checks.
pub const VALIDATION_TOL: f64 = 1e-10;
/// Eigenvalues at or below this count as zero when locating the gap.
pub const GAP_TOL: f64 = 1e-12;

fn check_states(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param("states", "state space must be nonempty"));
    }
    if n > MAX_STATES {
        return Err(Error::Capacity {
            what: "state space",
            requested: n,
            max: MAX_STATES,
        });
    }
    Ok(())
}

fn check_len(f: &[f64], n: usize) -> Result<()> {
    if f.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f.len(),
        });
    }
    Ok(())
}

/// A finite probability space with optional labels and real positions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteSpace {
    mu: Vec<f64>,
    positions: Vec<f64>,
    labels: Vec<String>,
}

impl FiniteSpace {
    pub fn new(mu: Vec<f64>, positions: Option<Vec<f64>>, labels: Option<Vec<String>>) -> Result<Self> {
        check_states(mu.len())?;
        if let Some((i, &m)) = mu.iter().enumerate().find(|(_, &m)| !(m > 0.0) || !m.is_finite()) {
            return Err(Error::param("mu", format!("weight {m} at state {i} is not strictly positive")));
        }
        let total: f64 = mu.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::param("mu", format!("weights sum to {total}, not 1")));
        }
        let n = mu.len();
        let positions = positions.unwrap_or_else(|| (0..n).map(|i| i as f64).collect());
        check_len(&positions, n)?;
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        if labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: labels.len(),
            });
        }
        Ok(Self { mu, positions, labels })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        check_states(n)?;
        Self::new(vec![1.0 / n as f64; n], None, None)
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mean(&self, f: &[f64]) -> Result<f64> {
        check_len(f, self.len())?;
        Ok(weighted_mean(f, &self.mu))
    }

    pub fn variance(&self, f: &[f64]) -> Result<f64> {
        let m = self.mean(f)?;
        Ok(f.iter().zip(&self.mu).map(|(v, w)| w * (v - m) * (v - m)).sum())
    }

    pub fn lp_norm(&self, f: &[f64], p: f64) -> Result<f64> {
        lp_weighted(f, &self.mu, p)
    }

    /// `E_μ f g`
    pub fn inner(&self, f: &[f64], g: &[f64]) -> Result<f64> {
        check_len(f, self.len())?;
        check_len(g, self.len())?;
        Ok(f.iter().zip(g).zip(&self.mu).map(|((a, b), w)| a * b * w).sum())
    }

    fn sqrt_mu(&self) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.mu.iter().map(|m| m.sqrt()))
    }
}

/// Symmetric eigenpairs of `D^{1/2} A D^{-1/2}`, ascending.
#[derive(Clone, Debug)]
struct Spectral {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
}

fn symmetrize(a: &DMatrix<f64>, mu: &[f64]) -> DMatrix<f64> {
    let n = mu.len();
    let s = DMatrix::from_fn(n, n, |x, y| a[(x, y)] * (mu[x] / mu[y]).sqrt());
    // remove rounding asymmetry before the symmetric solver
    (&s + s.transpose()) * 0.5
}

fn spectral(sym: DMatrix<f64>) -> Spectral {
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    Spectral { values, vectors }
}

/// A `μ`-reversible Markov generator with cached spectral data.
#[derive(Clone, Debug)]
pub struct MarkovGenerator {
    space: FiniteSpace,
    matrix: DMatrix<f64>,
    spectral: Spectral,
}

impl MarkovGenerator {
    /// Validates zero row sums, reversibility, nonpositive off-diagonal
    /// entries and positive semidefiniteness, then diagonalizes.
    pub fn new(space: FiniteSpace, matrix: DMatrix<f64>) -> Result<Self> {
        let n = space.len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: matrix.nrows().max(matrix.ncols()),
            });
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGenerator("matrix has non-finite entries".into()));
        }
        let scale = matrix.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let tol = VALIDATION_TOL * scale;
        let mu = space.mu();
        for x in 0..n {
            let row: f64 = matrix.row(x).iter().sum();
            if row.abs() > tol {
                return Err(Error::InvalidGenerator(format!("row {x} sums to {row:e}, not 0")));
            }
            for y in 0..n {
                if x == y {
                    continue;
                }
                if matrix[(x, y)] > tol {
                    return Err(Error::InvalidGenerator(format!(
                        "negative jump rate {:e} from {x} to {y}",
                        -matrix[(x, y)]
                    )));
                }
                let asym = mu[x] * matrix[(x, y)] - mu[y] * matrix[(y, x)];
                if asym.abs() > tol {
                    return Err(Error::InvalidGenerator(format!(
                        "not reversible at ({x}, {y}): defect {asym:e}"
                    )));
                }
            }
        }
        let spectral = spectral(symmetrize(&matrix, mu));
        if let Some(&low) = spectral.values.first() {
            if low < -tol {
                return Err(Error::InvalidGenerator(format!("negative eigenvalue {low:e}")));
            }
        }
        Ok(Self { space, matrix, spectral })
    }

    pub fn from_rows(mu: Vec<f64>, rows: Vec<Vec<f64>>, labels: Option<Vec<String>>) -> Result<Self> {
        let space = FiniteSpace::new(mu, None, labels)?;
        let n = space.len();
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rows.len(),
            });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: r.len(),
            });
        }
        let matrix = DMatrix::from_fn(n, n, |x, y| rows[x][y]);
        Self::new(space, matrix)
    }

    /// The number operator on `{-1,1}^n` as a matrix on `2^n` states.
    pub fn hypercube(n: usize) -> Result<Self> {
        check_dim(n)?;
        let size = 1usize << n;
        check_states(size)?;
        let mut m = DMatrix::zeros(size, size);
        for x in 0..size {
            m[(x, x)] = n as f64 / 2.0;
            for i in 0..n {
                m[(x, x ^ (1 << i))] = -0.5;
            }
        }
        Self::new(FiniteSpace::uniform(size)?, m)
    }

    /// Two states, uniform measure, jump rate `rate` each way.
    pub fn two_state(rate: f64) -> Result<Self> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::param("rate", format!("must be positive, got {rate}")));
        }
        let m = DMatrix::from_row_slice(2, 2, &[rate, -rate, -rate, rate]);
        Self::new(FiniteSpace::uniform(2)?, m)
    }

    /// Positions `(-α, β)` with weights `(β, α)` and `L = C^{-1}(I - E_μ)`.
    pub fn extremal(alpha: f64, beta: f64, c: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("C", c)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::param(name, format!("must be positive, got {v}")));
            }
        }
        if (alpha + beta - 1.0).abs() > 1e-12 {
            return Err(Error::param("alpha", format!("alpha + beta = {} must equal 1", alpha + beta)));
        }
        let mu = vec![beta, alpha];
        let space = FiniteSpace::new(mu.clone(), Some(vec![-alpha, beta]), Some(vec!["-alpha".into(), "beta".into()]))?;
        let m = DMatrix::from_fn(2, 2, |x, y| (if x == y { 1.0 } else { 0.0 } - mu[y]) / c);
        Self::new(space, m)
    }

    /// Random connected reversible generator: random `μ`, symmetric positive
    /// conductances `w(x,y)` on a random graph containing a spanning path,
    /// and `L(x,y) = -w(x,y)/μ(x)`.
    pub fn random<R: Rng + ?Sized>(states: usize, rng: &mut R) -> Result<Self> {
        check_states(states)?;
        let raw: Vec<f64> = (0..states).map(|_| rng.gen_range(0.1..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let mut mu: Vec<f64> = raw.iter().map(|v| v / total).collect();
        let drift: f64 = 1.0 - mu.iter().sum::<f64>();
        mu[0] += drift;
        let mut m = DMatrix::zeros(states, states);
        for x in 0..states {
            for y in x + 1..states {
                let edge = y == x + 1 || rng.gen_bool(0.5);
                if edge {
                    let w = rng.gen_range(0.05..1.0) * mu[x].min(mu[y]);
                    m[(x, y)] = -w / mu[x];
                    m[(y, x)] = -w / mu[y];
                }
            }
        }
        for x in 0..states {
            let off: f64 = m.row(x).iter().sum();
            m[(x, x)] = -off;
        }
        Self::new(FiniteSpace::new(mu, None, None)?, m)
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Eigenvalues of `L` on `L²(μ)`, ascending; the first is 0.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectral.values
    }

    /// `μ`-orthonormal eigenfunction for the `idx`-th eigenvalue.
    pub fn eigenfunction(&self, idx: usize) -> Vec<f64> {
        let col = self.spectral.vectors.column(idx);
        col.iter()
            .zip(self.space.mu())
            .map(|(v, m)| v / m.sqrt())
            .collect()
    }

    /// Smallest eigenvalue above [`GAP_TOL`], or 0 if there is none.
    pub fn spectral_gap(&self) -> f64 {
        self.spectral.values.iter().copied().find(|&v| v > GAP_TOL).unwrap_or(0.0)
    }

    /// Least `C` with `Var f <= C·E fLf`, i.e. the inverse spectral gap.
    pub fn poincare_constant(&self) -> Result<f64> {
        let connected = self.spectral.values.iter().skip(1).all(|&v| v > GAP_TOL);
        if !connected || self.len() < 2 {
            return Err(Error::Disconnected {
                gap: self.spectral.values.get(1).copied().unwrap_or(0.0),
            });
        }
        Ok(1.0 / self.spectral.values[1])
    }

    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        check_len(f, self.len())?;
        Ok((&self.matrix * DVector::from_column_slice(f)).as_slice().to_vec())
    }

    /// Applies `g(L)` through the spectral decomposition.
    fn spectral_apply(&self, f: &[f64], g: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
        check_len(f, self.len())?;
        let sq = self.space.sqrt_mu();
        let u = &self.spectral.vectors;
        let v = DVector::from_column_slice(f).component_mul(&sq);
        let mut coeffs = u.tr_mul(&v);
        for (c, &lam) in coeffs.iter_mut().zip(&self.spectral.values) {
            *c *= g(lam);
        }
        let out = (u * coeffs).component_div(&sq);
        Ok(out.as_slice().to_vec())
    }

    /// `P_t f = e^{-tL} f`.
    pub fn semigroup_apply(&self, t: f64, f: &[f64]) -> Result<Vec<f64>> {
        if !(t >= 0.0) {
            return Err(Error::param("t", format!("time must be >= 0, got {t}")));
        }
        if t == 0.0 {
            check_len(f, self.len())?;
            return Ok(f.to_vec());
        }
        self.spectral_apply(f, |lam| (-t * lam.max(0.0)).exp())
    }

    /// Dense matrix of `P_t`.
    pub fn semigroup_matrix(&self, t: f64) -> Result<DMatrix<f64>> {
        if !(t >= 0.0) {
            return Err(Error::param("t", format!("time must be >= 0, got {t}")));
        }
        let sq = self.space.sqrt_mu();
        let u = &self.spectral.vectors;
        let decay = DMatrix::from_diagonal(&DVector::from_iterator(
            self.len(),
            self.spectral.values.iter().map(|&l| (-t * l.max(0.0)).exp()),
        ));
        let sym = u * decay * u.transpose();
        let n = self.len();
        Ok(DMatrix::from_fn(n, n, |x, y| sym[(x, y)] * sq[y] / sq[x]))
    }

    /// `E_μ g·Lh`.
    pub fn dirichlet_form(&self, g: &[f64], h: &[f64]) -> Result<f64> {
        let lh = self.apply(h)?;
        self.space.inner(g, &lh)
    }

    /// `½ Σ_{x,y} (-μ(x)L(x,y)) (g(x)-g(y)) (h(x)-h(y))`.
    pub fn dirichlet_edge_form(&self, g: &[f64], h: &[f64]) -> Result<f64> {
        let n = self.len();
        check_len(g, n)?;
        check_len(h, n)?;
        let mu = self.space.mu();
        let mut s = 0.0;
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    s += -mu[x] * self.matrix[(x, y)] * (g[x] - g[y]) * (h[x] - h[y]);
                }
            }
        }
        Ok(s / 2.0)
    }

    pub fn mean(&self, f: &[f64]) -> Result<f64> {
        self.space.mean(f)
    }

    pub fn lp_norm(&self, f: &[f64], p: f64) -> Result<f64> {
        self.space.lp_norm(f, p)
    }
}

/// A `μ`-symmetric stochastic matrix with nonnegative entries.
#[derive(Clone, Debug)]
pub struct MarkovOperator {
    space: FiniteSpace,
    matrix: DMatrix<f64>,
}

impl MarkovOperator {
    pub fn new(space: FiniteSpace, matrix: DMatrix<f64>) -> Result<Self> {
        let n = space.len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: matrix.nrows().max(matrix.ncols()),
            });
        }
        let mu = space.mu();
        for x in 0..n {
            let row: f64 = matrix.row(x).iter().sum();
            if (row - 1.0).abs() > VALIDATION_TOL {
                return Err(Error::InvalidGenerator(format!("row {x} of P sums to {row}, not 1")));
            }
            for y in 0..n {
                let v = matrix[(x, y)];
                if !v.is_finite() || v < -VALIDATION_TOL {
                    return Err(Error::InvalidGenerator(format!("P({x},{y}) = {v:e} is negative")));
                }
                let asym = mu[x] * v - mu[y] * matrix[(y, x)];
                if asym.abs() > VALIDATION_TOL {
                    return Err(Error::InvalidGenerator(format!(
                        "P is not μ-symmetric at ({x}, {y}): defect {asym:e}"
                    )));
                }
            }
        }
        Ok(Self { space, matrix })
    }

    pub fn identity(space: FiniteSpace) -> Self {
        let n = space.len();
        Self {
            space,
            matrix: DMatrix::identity(n, n),
        }
    }

    /// `P f = E_μ f`, the full averaging operator.
    pub fn averaging(space: FiniteSpace) -> Self {
        let n = space.len();
        let mu = space.mu().to_vec();
        Self {
            space,
            matrix: DMatrix::from_fn(n, n, |_, y| mu[y]),
        }
    }

    pub fn from_generator(l: &MarkovGenerator, t: f64) -> Result<Self> {
        let mut m = l.semigroup_matrix(t)?;
        // clamp rounding noise below zero
        m.iter_mut().for_each(|v| {
            if *v < 0.0 && *v > -VALIDATION_TOL {
                *v = 0.0
            }
        });
        Self::new(l.space().clone(), m)
    }

    /// Random `μ`-symmetric operator `P = I - L/r` from a random generator,
    /// where `r` exceeds every exit rate.
    pub fn random<R: Rng + ?Sized>(states: usize, rng: &mut R) -> Result<Self> {
        let l = MarkovGenerator::random(states, rng)?;
        let max_rate = (0..states).map(|x| l.matrix()[(x, x)]).fold(0.0f64, f64::max);
        let r = max_rate * rng.gen_range(1.0..3.0);
        let n = states;
        let m = DMatrix::from_fn(n, n, |x, y| (if x == y { 1.0 } else { 0.0 }) - l.matrix()[(x, y)] / r);
        Self::new(l.space().clone(), m)
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        check_len(f, self.len())?;
        Ok((&self.matrix * DVector::from_column_slice(f)).as_slice().to_vec())
    }

    /// `1 - max λ²` over the spectrum of `P` on mean-zero functions in `L²(μ)`.
    pub fn mean_zero_gap(&self) -> f64 {
        let n = self.len();
        let sq = self.space.sqrt_mu();
        let proj = DMatrix::identity(n, n) - &sq * sq.transpose();
        let s = symmetrize(&self.matrix, self.space.mu());
        let restricted = &proj * s * &proj;
        let eig = SymmetricEigen::new((&restricted + restricted.transpose()) * 0.5);
        let top = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v * v));
        (1.0 - top).clamp(0.0, 1.0)
    }
}
