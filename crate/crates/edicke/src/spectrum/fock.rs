//! Bare Fock ⊗ `J_z` product basis.
//!
//! States are `|n> ⊗ |j, m>` with `n <= n_max`; inside one parity block the
//! Hamiltonian
//!
//! ```text
//! H = omega a'a + omega0 Jz + (gamma/sqrt(Nq)) (a + a')(J+ + J-) + (eta/Nq) Jz^2
//! ```
//!
//! is pentadiagonal-like: diagonal in `(n, m)` plus couplings to
//! `(n ± 1, m ± 1)`. This basis is exact at `gamma = 0` and converges slowly
//! in `n_max` deep in the superradiant phase, where
//! [`super::displaced_basis_hamiltonian`] is preferable.

use std::collections::HashMap;

use super::{check_j, check_kind, BasisKind, BasisSpec, CooMatrix};
use crate::error::Result;
use crate::model::ModelParams;

/// Ladder coefficient `<j, m+1| J+ |j, m> = sqrt(j(j+1) - m(m+1))`.
pub(crate) fn c_plus(j: f64, m: f64) -> f64 {
    (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

fn two_m(spin: f64) -> i64 {
    (2.0 * spin).round() as i64
}

/// Sparse Hamiltonian block in the bare product basis.
///
/// Entries are assembled in a deterministic row-major order; only the lower
/// triangle is stored.
pub fn build_hamiltonian(p: &ModelParams, spec: &BasisSpec) -> Result<CooMatrix> {
    check_kind(spec, BasisKind::BareFock)?;
    check_j(p, spec)?;
    let states = spec.states();
    let index: HashMap<(usize, i64), usize> =
        states.iter().enumerate().map(|(i, s)| ((s.n, two_m(s.spin)), i)).collect();
    let nq = p.nq();
    let coupling = p.gamma / nq.sqrt();
    let mut h = CooMatrix::new(states.len());
    for (i, s) in states.iter().enumerate() {
        let m = s.spin;
        h.push(i, i, p.omega * s.n as f64 + p.omega0 * m + p.eta / nq * m * m);
        if s.n == spec.n_max {
            continue;
        }
        // (a + a')(J+ + J-) reaches (n+1, m+1) and (n+1, m-1); the states
        // with n-1 fill in by symmetry. Out-of-range m simply miss the map.
        let boson = ((s.n + 1) as f64).sqrt();
        for dm in [1.0, -1.0] {
            let m2 = m + dm;
            if let Some(&t) = index.get(&(s.n + 1, two_m(m2))) {
                let ladder = c_plus(spec.j, m.min(m2));
                h.push(t, i, coupling * boson * ladder);
            }
        }
    }
    h.sort_row_major();
    Ok(h)
}

/// `J_z` in the bare product basis: diagonal with entries `m`.
pub fn jz_matrix(p: &ModelParams, spec: &BasisSpec) -> Result<CooMatrix> {
    check_kind(spec, BasisKind::BareFock)?;
    check_j(p, spec)?;
    let states = spec.states();
    let mut jz = CooMatrix::new(states.len());
    for (i, s) in states.iter().enumerate() {
        jz.push(i, i, s.spin);
    }
    jz.sort_row_major();
    Ok(jz)
}
