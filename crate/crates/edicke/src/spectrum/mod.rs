//! Parity-resolved quantum spectra of the extended Dicke Hamiltonian.
//!
//! The Hamiltonian conserves the parity `(-1)^{n + m + j}`, so each spectrum
//! is computed inside one parity block. Two basis families are supported:
//!
//! * [`BasisKind::BareFock`]: the product basis `|n> ⊗ |j, m>` of field Fock
//!   states and `J_z` eigenstates, truncated at `n <= n_max`;
//! * [`BasisKind::DisplacedFock`]: a displaced-oscillator basis adapted to
//!   the superradiant structure of the model, which reaches convergence at
//!   much smaller boson cutoffs for strong coupling (see [`displaced`]).
//!
//! The pipeline is: enumerate a [`BasisSpec`], assemble the sparse
//! Hamiltonian block, [`diagonalize`] it densely, discard states polluted by
//! the cutoff with [`convergence_filter`], and feed the survivors to
//! [`averaged_dos`] or [`peres_lattice`] for comparison with the
//! semiclassical predictions of [`crate::dos`]. [`compute_spectrum`] chains
//! all of those steps.

use crate::eig;
use crate::error::{Error, Result};
use crate::model::ModelParams;

pub mod displaced;
pub mod fock;

pub use displaced::displaced_basis_hamiltonian;
pub use fock::build_hamiltonian;

/// Default cap on the dimension of one parity block; dense diagonalization
/// beyond this needs several gigabytes of workspace.
pub const DEFAULT_MAX_DIM: usize = 10_000;

/// Default threshold for [`convergence_filter`]: maximal admissible weight of
/// an eigenvector on the top boson layer `n = n_max`.
pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-12;

/// Eigenvalue of the parity operator `(-1)^{n + m + j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    /// Parity eigenvalue `+1`.
    Plus,
    /// Parity eigenvalue `-1`.
    Minus,
}

impl Parity {
    /// The parity eigenvalue as an integer, `+1` or `-1`.
    pub fn sign(self) -> i32 {
        match self {
            Parity::Plus => 1,
            Parity::Minus => -1,
        }
    }

    /// Parity of the product state with field quantum `n` and spin index
    /// `k = m + j` (an integer in `0..=2j`).
    pub fn of(n: usize, k: usize) -> Parity {
        if (n + k) % 2 == 0 {
            Parity::Plus
        } else {
            Parity::Minus
        }
    }
}

/// Which basis family a [`BasisSpec`] enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// Bare product basis `|n> ⊗ |j, m>`.
    BareFock,
    /// Parity-adapted displaced-oscillator basis (see [`displaced`]).
    DisplacedFock,
}

/// One basis state label.
///
/// For [`BasisKind::BareFock`] the fields are the Fock quantum number `n` and
/// the `J_z` eigenvalue `m`. For [`BasisKind::DisplacedFock`] they are the
/// displaced-oscillator quantum number `N` and the non-negative label `mu` of
/// the parity-adapted sector pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisState {
    /// Boson quantum number.
    pub n: usize,
    /// Spin label (`m` or `mu`), integer or half-integer.
    pub spin: f64,
}

/// One parity block of the Hilbert space: pseudospin length, boson
/// cutoff, parity, and basis family.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSpec {
    /// Pseudospin length, `j = Nq/2`; must be a positive multiple of `1/2`.
    pub j: f64,
    /// Boson cutoff; states with `n <= n_max` are kept.
    pub n_max: usize,
    /// Parity of the block.
    pub parity: Parity,
    /// Basis family.
    pub kind: BasisKind,
    /// Dimension guard for the dense eigensolver path.
    pub max_dim: usize,
}

impl BasisSpec {
    /// Validates the labels and the dimension guard.
    pub fn new(j: f64, n_max: usize, parity: Parity, kind: BasisKind) -> Result<Self> {
        let spec = Self { j, n_max, parity, kind, max_dim: DEFAULT_MAX_DIM };
        spec.validate()?;
        Ok(spec)
    }

    /// Replaces the dimension guard, revalidating against it.
    pub fn with_max_dim(mut self, max_dim: usize) -> Result<Self> {
        self.max_dim = max_dim;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let two_j = 2.0 * self.j;
        if !(two_j.is_finite() && two_j >= 1.0 && (two_j - two_j.round()).abs() < 1e-9) {
            return Err(Error::InvalidParams(format!(
                "pseudospin j must be a positive multiple of 1/2 (j = {})",
                self.j
            )));
        }
        if self.n_max < 1 {
            return Err(Error::InvalidParams("boson cutoff n_max must be at least 1".into()));
        }
        let dim = self.dim();
        if dim > self.max_dim {
            return Err(Error::DimensionGuard { dim, max: self.max_dim });
        }
        Ok(())
    }

    fn two_j(&self) -> usize {
        (2.0 * self.j).round() as usize
    }

    /// Number of basis states in the block.
    pub fn dim(&self) -> usize {
        self.states().len()
    }

    /// Deterministic enumeration of the block: boson quantum number outer,
    /// spin label inner, both ascending.
    pub fn states(&self) -> Vec<BasisState> {
        let two_j = self.two_j();
        let want = self.parity;
        let mut out = Vec::new();
        match self.kind {
            BasisKind::BareFock => {
                for n in 0..=self.n_max {
                    for k in 0..=two_j {
                        if Parity::of(n, k) == want {
                            out.push(BasisState { n, spin: k as f64 - self.j });
                        }
                    }
                }
            }
            BasisKind::DisplacedFock => {
                // Positive-mu sectors pair with their mirror images; mu = 0
                // (integer j only) is self-paired and enters the block when
                // sigma (-1)^N matches the parity, sigma = (-1)^{2j}.
                let sign = self.parity.sign();
                let sigma = if two_j % 2 == 0 { 1 } else { -1 };
                for n in 0..=self.n_max {
                    let pn = if n % 2 == 0 { 1 } else { -1 };
                    if two_j % 2 == 0 && sigma * pn == sign {
                        out.push(BasisState { n, spin: 0.0 });
                    }
                    let mut two_mu = if two_j % 2 == 0 { 2 } else { 1 };
                    while two_mu <= two_j {
                        out.push(BasisState { n, spin: two_mu as f64 / 2.0 });
                        two_mu += 2;
                    }
                }
            }
        }
        out
    }

    /// Boson quantum number of every basis state, in enumeration order.
    pub fn boson_layers(&self) -> Vec<usize> {
        self.states().iter().map(|s| s.n).collect()
    }
}

pub(crate) fn check_kind(spec: &BasisSpec, kind: BasisKind) -> Result<()> {
    if spec.kind != kind {
        return Err(Error::InvalidParams(format!(
            "basis kind mismatch: builder for {kind:?} called with {:?}",
            spec.kind
        )));
    }
    Ok(())
}

pub(crate) fn check_j(p: &ModelParams, spec: &BasisSpec) -> Result<()> {
    if (p.j - spec.j).abs() > 1e-12 * p.j.max(1.0) {
        return Err(Error::InvalidParams(format!(
            "pseudospin mismatch: model has j = {}, basis has j = {}",
            p.j, spec.j
        )));
    }
    Ok(())
}

/// Sparse symmetric matrix in coordinate form; only the lower triangle
/// (including the diagonal) is stored, in row-major order.
#[derive(Debug, Clone)]
pub struct CooMatrix {
    dim: usize,
    rows: Vec<u32>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl CooMatrix {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new(), cols: Vec::new(), vals: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Appends a lower-triangle entry; exact zeros are skipped.
    pub(crate) fn push(&mut self, row: usize, col: usize, val: f64) {
        debug_assert!(col <= row && row < self.dim);
        if val != 0.0 {
            self.rows.push(row as u32);
            self.cols.push(col as u32);
            self.vals.push(val);
        }
    }

    /// Sorts the entries into row-major order, making the assembly output
    /// independent of the builder's traversal order.
    pub(crate) fn sort_row_major(&mut self) {
        let mut order: Vec<usize> = (0..self.vals.len()).collect();
        order.sort_unstable_by_key(|&i| (self.rows[i], self.cols[i]));
        self.rows = order.iter().map(|&i| self.rows[i]).collect();
        self.cols = order.iter().map(|&i| self.cols[i]).collect();
        self.vals = order.iter().map(|&i| self.vals[i]).collect();
    }

    /// Lower-triangle entries as `(row, col, value)`, row-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.vals.len()).map(|i| (self.rows[i] as usize, self.cols[i] as usize, self.vals[i]))
    }

    /// Dense symmetric matrix, both triangles filled. Row- and column-major
    /// layouts coincide by symmetry.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim;
        let mut a = vec![0.0; n * n];
        for (r, c, v) in self.entries() {
            a[r * n + c] = v;
            a[c * n + r] = v;
        }
        a
    }

    /// Accumulates `y += A x` using the symmetric completion of the stored
    /// lower triangle.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for (r, c, v) in self.entries() {
            y[r] += v * x[c];
            if r != c {
                y[c] += v * x[r];
            }
        }
    }

    /// Quadratic form `v^T A v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        assert_eq!(v.len(), self.dim);
        let mut acc = 0.0;
        for (r, c, val) in self.entries() {
            if r == c {
                acc += val * v[r] * v[c];
            } else {
                acc += 2.0 * val * v[r] * v[c];
            }
        }
        acc
    }
}

/// Full eigendecomposition of one parity block.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    /// Block dimension.
    pub dim: usize,
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, stored contiguously: vector `k` occupies
    /// `vectors[k*dim..(k+1)*dim]`.
    pub vectors: Vec<f64>,
}

impl EigenPairs {
    /// Eigenvector `k` as a slice.
    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.dim..(k + 1) * self.dim]
    }
}

/// Dense symmetric eigendecomposition of a sparse block.
///
/// Eigenvalues come out in ascending order with orthonormal eigenvectors;
/// solver non-convergence is reported as [`Error::Numerical`].
pub fn diagonalize(h: &CooMatrix) -> Result<EigenPairs> {
    let n = h.dim();
    let mut a = h.to_dense();
    let values = eig::eigh_inplace(&mut a, n, true)?;
    Ok(EigenPairs { dim: n, values, vectors: a })
}

/// Residual norms `|H v_k - lambda_k v_k|_2` for every eigenpair, computed
/// against the sparse matrix rather than the dense copy.
pub fn residuals(h: &CooMatrix, pairs: &EigenPairs) -> Vec<f64> {
    let n = pairs.dim;
    assert_eq!(h.dim(), n);
    let mut out = Vec::with_capacity(n);
    let mut hv = vec![0.0; n];
    for k in 0..n {
        let v = pairs.vector(k);
        hv.iter_mut().for_each(|x| *x = 0.0);
        h.matvec(v, &mut hv);
        let lambda = pairs.values[k];
        let mut acc = 0.0;
        for i in 0..n {
            let r = hv[i] - lambda * v[i];
            acc += r * r;
        }
        out.push(acc.sqrt());
    }
    out
}

/// Flags each eigenstate as converged when its weight on the top boson layer
/// `n = n_max` is below `tol`.
///
/// States leaning on the cutoff would move if `n_max` grew, so they are
/// excluded from any physics downstream.
pub fn convergence_filter(pairs: &EigenPairs, spec: &BasisSpec, tol: f64) -> Vec<bool> {
    let layers = spec.boson_layers();
    assert_eq!(layers.len(), pairs.dim);
    let top: Vec<usize> =
        (0..pairs.dim).filter(|&i| layers[i] == spec.n_max).collect();
    (0..pairs.dim)
        .map(|k| {
            let v = pairs.vector(k);
            let w: f64 = top.iter().map(|&i| v[i] * v[i]).sum();
            w < tol
        })
        .collect()
}

/// One bin of the averaged quantum density of states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedDosPoint {
    /// Scaled energy `E/(omega0 j)` at the bin center.
    pub eps_bar: f64,
    /// Scaled level density `omega/(2j) * dN/dE` estimated over the bin.
    pub nu_bar: f64,
}

/// Averaged quantum density of states; directly comparable to
/// [`crate::dos::dos`].
#[derive(Debug, Clone, PartialEq)]
pub struct AveragedDos {
    /// Number of states per window.
    pub window: usize,
    /// Bin centers and densities, ascending in energy.
    pub points: Vec<AveragedDosPoint>,
}

/// Smooths an ascending sequence of eigenvalues into a staircase-free level
/// density.
///
/// The spectrum is partitioned into consecutive windows of `window` states
/// (a trailing partial window is dropped); each adjacent pair of windows
/// contributes one point with density `window / (Ebar_{k+1} - Ebar_k)`,
/// scaled by `omega/(2j)`, at the midpoint of the two window means.
pub fn averaged_dos(eigenvalues: &[f64], p: &ModelParams, window: usize) -> Result<AveragedDos> {
    if window == 0 {
        return Err(Error::InvalidParams("window must be positive".into()));
    }
    if eigenvalues.len() < 2 * window {
        return Err(Error::InsufficientStates(format!(
            "averaging {} states in windows of {} needs at least {}",
            eigenvalues.len(),
            window,
            2 * window
        )));
    }
    if eigenvalues.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParams("eigenvalues must be sorted ascending".into()));
    }
    let k = eigenvalues.len() / window;
    let means: Vec<f64> = (0..k)
        .map(|i| eigenvalues[i * window..(i + 1) * window].iter().sum::<f64>() / window as f64)
        .collect();
    let scale = p.omega / (2.0 * p.j);
    let mut points = Vec::with_capacity(k - 1);
    for i in 0..k - 1 {
        let de = means[i + 1] - means[i];
        if de <= 0.0 {
            return Err(Error::Numerical(format!(
                "window means are not increasing near E = {}; enlarge the window",
                means[i]
            )));
        }
        points.push(AveragedDosPoint {
            eps_bar: p.scaled_energy(0.5 * (means[i] + means[i + 1])),
            nu_bar: scale * window as f64 / de,
        });
    }
    Ok(AveragedDos { window, points })
}

/// One point of the Peres lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeresPoint {
    /// Scaled eigenenergy `E/(omega0 j)`.
    pub eps: f64,
    /// Scaled expectation `<J_z>/j` in the eigenstate.
    pub jz: f64,
    /// Whether the eigenstate passed the convergence filter.
    pub converged: bool,
}

/// Peres lattice of the scaled `J_z` expectation value versus scaled energy.
///
/// Every eigenstate is emitted; downstream consumers should keep only points
/// with `converged == true`.
pub fn peres_lattice(result: &SpectrumResult, p: &ModelParams) -> Vec<PeresPoint> {
    result
        .eigenvalues
        .iter()
        .zip(&result.jz_expect)
        .zip(&result.converged)
        .map(|((&e, &jz), &converged)| PeresPoint {
            eps: p.scaled_energy(e),
            jz: jz / p.j,
            converged,
        })
        .collect()
}

/// Diagonalization summary of one parity block.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Eigenvalues in ascending order (raw energy units).
    pub eigenvalues: Vec<f64>,
    /// `<J_z>` per eigenstate (units of 1, not scaled by `j`).
    pub jz_expect: Vec<f64>,
    /// Residual norms `|H v - lambda v|_2` per eigenpair.
    pub residuals: Vec<f64>,
    /// Convergence flags per eigenstate.
    pub converged: Vec<bool>,
    /// Parity of the block.
    pub parity: Parity,
}

/// Matrix of the observable `J_z` in the same basis block as the
/// Hamiltonian, for Peres-lattice expectation values.
pub fn jz_matrix(p: &ModelParams, spec: &BasisSpec) -> Result<CooMatrix> {
    match spec.kind {
        BasisKind::BareFock => fock::jz_matrix(p, spec),
        BasisKind::DisplacedFock => displaced::jz_matrix(p, spec),
    }
}

/// Assembles, diagonalizes and post-processes one parity block.
///
/// Returns the summary (eigenvalues, `<J_z>`, residuals, convergence flags)
/// together with the raw eigenpairs for callers that need the vectors.
pub fn compute_spectrum(
    p: &ModelParams,
    spec: &BasisSpec,
    conv_tol: f64,
) -> Result<(SpectrumResult, EigenPairs)> {
    if !(conv_tol.is_finite() && conv_tol > 0.0) {
        return Err(Error::InvalidParams(format!(
            "convergence tolerance must be positive and finite (got {conv_tol})"
        )));
    }
    let h = match spec.kind {
        BasisKind::BareFock => fock::build_hamiltonian(p, spec)?,
        BasisKind::DisplacedFock => displaced::displaced_basis_hamiltonian(p, spec)?,
    };
    let pairs = diagonalize(&h)?;
    let res = residuals(&h, &pairs);
    let converged = convergence_filter(&pairs, spec, conv_tol);
    let jzm = jz_matrix(p, spec)?;
    let jz_expect: Vec<f64> = (0..pairs.dim).map(|k| jzm.quadratic_form(pairs.vector(k))).collect();
    let result = SpectrumResult {
        eigenvalues: pairs.values.clone(),
        jz_expect,
        residuals: res,
        converged,
        parity: spec.parity,
    };
    Ok((result, pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(gamma: f64, eta: f64, j: f64) -> ModelParams {
        ModelParams::new(1.0, 1.0, gamma, eta, j).unwrap()
    }

    #[test]
    fn basis_enumeration_partitions_the_product_space() {
        for kind in [BasisKind::BareFock, BasisKind::DisplacedFock] {
            for &j in &[1.0, 1.5, 2.0, 2.5] {
                let n_max = 4;
                let plus = BasisSpec::new(j, n_max, Parity::Plus, kind).unwrap();
                let minus = BasisSpec::new(j, n_max, Parity::Minus, kind).unwrap();
                let total = (n_max + 1) * (2.0 * j + 1.0).round() as usize;
                assert_eq!(plus.dim() + minus.dim(), total, "kind {kind:?}, j = {j}");

                // boson number outer and ascending, spin inner and ascending
                let states = plus.states();
                for w in states.windows(2) {
                    assert!(
                        w[1].n > w[0].n || (w[1].n == w[0].n && w[1].spin > w[0].spin),
                        "enumeration must ascend: {:?} then {:?}",
                        w[0],
                        w[1]
                    );
                }
            }
        }
    }

    #[test]
    fn bare_enumeration_has_uniform_parity() {
        let spec = BasisSpec::new(1.5, 5, Parity::Minus, BasisKind::BareFock).unwrap();
        for s in spec.states() {
            let k = (s.spin + spec.j).round() as usize;
            assert_eq!(Parity::of(s.n, k), Parity::Minus);
        }
    }

    #[test]
    fn basis_spec_rejects_bad_labels() {
        assert!(matches!(
            BasisSpec::new(1.2, 4, Parity::Plus, BasisKind::BareFock),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            BasisSpec::new(-1.0, 4, Parity::Plus, BasisKind::BareFock),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            BasisSpec::new(2.0, 0, Parity::Plus, BasisKind::BareFock),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn dimension_guard_triggers_and_is_configurable() {
        // j = 40, n_max = 300 gives a 12190-state block, above the default cap
        let err = BasisSpec::new(40.0, 300, Parity::Plus, BasisKind::BareFock).unwrap_err();
        match err {
            Error::DimensionGuard { dim, max } => {
                // 301 * 81 = 24381 product states split 12191 / 12190
                assert_eq!(dim, 12191);
                assert_eq!(max, DEFAULT_MAX_DIM);
            }
            other => panic!("expected the dimension guard, got {other:?}"),
        }
        let spec = BasisSpec::new(40.0, 100, Parity::Plus, BasisKind::BareFock)
            .unwrap()
            .with_max_dim(20_000)
            .unwrap();
        assert_eq!(spec.max_dim, 20_000);
    }

    #[test]
    fn coo_matvec_and_quadratic_form_match_the_dense_matrix() {
        // hand-made 4x4 symmetric matrix
        let mut h = CooMatrix::new(4);
        h.push(0, 0, 2.0);
        h.push(1, 0, -1.0);
        h.push(2, 1, 0.5);
        h.push(3, 3, 4.0);
        h.push(3, 0, 0.25);
        h.sort_row_major();
        let dense = h.to_dense();
        let x = [1.0, -2.0, 3.0, 0.5];
        let mut y = vec![0.0; 4];
        h.matvec(&x, &mut y);
        for r in 0..4 {
            let want: f64 = (0..4).map(|c| dense[r * 4 + c] * x[c]).sum();
            assert_abs_diff_eq!(y[r], want, epsilon = 1e-15);
        }
        let q = h.quadratic_form(&x);
        let want: f64 = (0..4).map(|r| y[r] * x[r]).sum();
        assert_abs_diff_eq!(q, want, epsilon = 1e-13);

        // entries are row-major sorted and the triangle constraint held
        let mut last = (0usize, 0usize);
        for (r, c, _) in h.entries() {
            assert!(c <= r);
            assert!((r, c) >= last);
            last = (r, c);
        }
    }

    #[test]
    fn diagonalize_satisfies_the_residual_bound() {
        let p = params(0.8, 0.2, 2.0);
        let spec = BasisSpec::new(2.0, 30, Parity::Plus, BasisKind::BareFock).unwrap();
        let h = build_hamiltonian(&p, &spec).unwrap();
        let pairs = diagonalize(&h).unwrap();
        assert_eq!(pairs.values.len(), spec.dim());
        assert!(pairs.values.windows(2).all(|w| w[1] >= w[0]));

        let max_abs = pairs.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        for (k, r) in residuals(&h, &pairs).iter().enumerate() {
            assert!(
                *r <= 1e-10 * max_abs,
                "pair {k}: residual {r:.3e} above 1e-10 * {max_abs:.3e}"
            );
        }

        // orthonormality spot check
        let dot =
            |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        assert_abs_diff_eq!(dot(pairs.vector(0), pairs.vector(0)), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(dot(pairs.vector(0), pairs.vector(1)), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn convergence_filter_keeps_the_bottom_and_drops_the_top() {
        let p = params(0.8, 0.2, 2.0);
        let spec = BasisSpec::new(2.0, 25, Parity::Plus, BasisKind::BareFock).unwrap();
        let h = build_hamiltonian(&p, &spec).unwrap();
        let pairs = diagonalize(&h).unwrap();
        let conv = convergence_filter(&pairs, &spec, 1e-12);
        assert!(conv[0], "the ground state must be converged at this cutoff");
        assert!(
            !conv[pairs.dim - 1],
            "the top eigenstate of a coupled block must lean on the cutoff"
        );
    }

    #[test]
    fn averaged_dos_recovers_the_uncoupled_level_density() {
        // gamma = eta = 0, omega = omega0: within one parity block the exact
        // spectrum is E = n + m with five states per level (away from the
        // edges, j = 2), i.e. 2.5 states per unit energy; in the bulk,
        // windows of 20 span four levels no matter where they start, so the
        // emitted density equals 2.5 * omega/(2j) exactly. (The
        // semiclassical saturation value 1 corresponds to 2j/omega states
        // per unit energy across both blocks; the ratio (2j+1)/(2j) is a
        // finite-size artifact.)
        let p = params(0.0, 0.0, 2.0);
        let spec = BasisSpec::new(2.0, 60, Parity::Plus, BasisKind::BareFock).unwrap();
        let h = build_hamiltonian(&p, &spec).unwrap();
        let pairs = diagonalize(&h).unwrap();
        let avg = averaged_dos(&pairs.values, &p, 20).unwrap();
        assert!(avg.points.len() > 5);
        // skip the first point (the partial multiplets at the bottom edge,
        // E = -2 and E = 0, distort the lowest window) and the last two
        // (the n <= n_max corner distorts the top)
        for pt in &avg.points[1..avg.points.len() - 2] {
            assert_abs_diff_eq!(pt.nu_bar, 2.5 * p.omega / (2.0 * p.j), epsilon = 1e-10);
        }
        for w in avg.points.windows(2) {
            assert!(w[1].eps_bar > w[0].eps_bar);
        }
    }

    #[test]
    fn averaged_dos_sum_recovers_the_state_count() {
        // The binning is constructed so that nu_bar * dE integrates back to
        // the number of states it consumed; this pins the omega/(2j) scaling
        // convention against the count normalization.
        let p = params(0.8, 0.2, 5.0);
        let spec = BasisSpec::new(5.0, 40, Parity::Plus, BasisKind::BareFock).unwrap();
        let h = build_hamiltonian(&p, &spec).unwrap();
        let pairs = diagonalize(&h).unwrap();
        let window = 20;
        let avg = averaged_dos(&pairs.values, &p, window).unwrap();
        let k = pairs.values.len() / window;
        let means: Vec<f64> = (0..k)
            .map(|i| pairs.values[i * window..(i + 1) * window].iter().sum::<f64>() / window as f64)
            .collect();
        let mut recovered = 0.0;
        for (i, pt) in avg.points.iter().enumerate() {
            let de = means[i + 1] - means[i];
            recovered += pt.nu_bar * de * (2.0 * p.j / p.omega);
        }
        let consumed = (window * (k - 1)) as f64;
        assert!(
            (recovered - consumed).abs() <= 0.02 * consumed,
            "recovered {recovered}, consumed {consumed}"
        );
    }

    #[test]
    fn averaged_dos_rejects_underfilled_input() {
        let p = params(0.3, 0.2, 1.0);
        let eigs: Vec<f64> = (0..30).map(|i| i as f64).collect();
        assert!(matches!(averaged_dos(&eigs, &p, 20), Err(Error::InsufficientStates(_))));
        assert!(matches!(averaged_dos(&eigs, &p, 0), Err(Error::InvalidParams(_))));
        let unsorted = [1.0, 0.5, 2.0, 3.0];
        assert!(matches!(averaged_dos(&unsorted, &p, 2), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn compute_spectrum_is_consistent_end_to_end() {
        let p = params(0.8, 0.2, 5.0);
        let spec = BasisSpec::new(5.0, 60, Parity::Minus, BasisKind::BareFock).unwrap();
        let (result, pairs) = compute_spectrum(&p, &spec, DEFAULT_CONVERGENCE_TOL).unwrap();
        let dim = spec.dim();
        assert_eq!(result.eigenvalues.len(), dim);
        assert_eq!(result.jz_expect.len(), dim);
        assert_eq!(result.residuals.len(), dim);
        assert_eq!(result.converged.len(), dim);
        assert_eq!(result.parity, Parity::Minus);
        assert_eq!(pairs.dim, dim);
        // only the energetic bulk converges in a bare basis: the spectrum
        // must start converged and end cutoff-polluted
        let n_conv = result.converged.iter().filter(|&&c| c).count();
        assert!(n_conv >= 50, "only {n_conv} of {dim} converged");
        assert!(result.converged[..20].iter().all(|&c| c));
        assert!(result.converged[dim - 20..].iter().all(|&c| !c));
        for &jz in &result.jz_expect {
            assert!(jz.abs() <= p.j + 1e-9, "<J_z> = {jz} outside [-j, j]");
        }
        // the ground state of the superradiant phase sits near z = -1/f
        let f = crate::model::auxiliary_f(&p);
        assert_abs_diff_eq!(result.jz_expect[0] / p.j, -1.0 / f, epsilon = 0.05);
    }

    #[test]
    fn peres_lattice_scales_energy_and_spin() {
        let p = params(0.0, 0.0, 1.0);
        let spec = BasisSpec::new(1.0, 8, Parity::Plus, BasisKind::BareFock).unwrap();
        let (result, _) = compute_spectrum(&p, &spec, DEFAULT_CONVERGENCE_TOL).unwrap();
        let lattice = peres_lattice(&result, &p);
        assert_eq!(lattice.len(), result.eigenvalues.len());
        for (pt, (&e, &jz)) in lattice.iter().zip(result.eigenvalues.iter().zip(&result.jz_expect))
        {
            assert_abs_diff_eq!(pt.eps, e / (p.omega0 * p.j), epsilon = 1e-15);
            assert_abs_diff_eq!(pt.jz, jz / p.j, epsilon = 1e-15);
            // at gamma = 0 every eigenstate is a product state, so <J_z> is
            // an exact magnetic quantum number
            let snapped = (jz - jz.round()).abs();
            assert!(snapped < 1e-10, "<J_z> = {jz} is not integral");
        }
    }

    #[test]
    fn compute_spectrum_rejects_mismatched_pseudospin() {
        let p = params(0.3, 0.2, 2.0);
        let spec = BasisSpec::new(3.0, 10, Parity::Plus, BasisKind::BareFock).unwrap();
        assert!(matches!(
            compute_spectrum(&p, &spec, 1e-12),
            Err(Error::InvalidParams(_))
        ));
    }
}
