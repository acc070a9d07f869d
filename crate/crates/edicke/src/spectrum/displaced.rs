//! Displaced-oscillator basis for the superradiant phase.
//!
//! Rotating the collective spin about the y-axis turns the coupling term
//! `(gamma/sqrt(Nq))(a + a')(J+ + J-) = (2 gamma/sqrt(Nq))(a + a') J_x` into
//! an operator that is diagonal in the rotated spin label `mu`, while `J_z`
//! acquires the ladder structure of `J_x`. Writing `X` for that rotated
//! image of `J_z`,
//!
//! ```text
//! H = omega a'a + (2 gamma/sqrt(Nq)) (a + a') diag(mu) + omega0 X + (eta/Nq) X^2 .
//! ```
//!
//! Completing the square sector by sector absorbs the coupling into a
//! displacement of the field mode: with `g = 2 gamma/(omega sqrt(Nq))` the
//! displaced number states `|N; mu>> = D(-g mu)|N>` make the boson part
//! exactly diagonal, `omega N - omega g^2 mu^2`. Sectors communicate only
//! through `X` and `X^2` (so `|mu' - mu| <= 2`), weighted by Franck-Condon
//! overlaps `<M|D(g (mu' - mu))|N>`.
//!
//! Parity maps `(N, mu) -> (N, -mu)` with the sign `sigma (-1)^N`, where
//! `sigma = (-1)^{2j}`, so the block of parity `P` is spanned by
//!
//! ```text
//! |N, mu; P> = (|N, mu>> + P sigma (-1)^N |N, -mu>>) / sqrt(2) ,   mu > 0,
//! ```
//!
//! plus the self-paired `mu = 0` states (integer `j` only), admitted when
//! `sigma (-1)^N = P`. Pairing mirror sectors adds "reflected" couplings
//! proportional to `<M|D(g (mu' + mu))|N>`, and couplings into `mu = 0`
//! carry a factor `sqrt(2)`.
//!
//! Deep in the superradiant phase the displaced vacua already sit at the
//! semiclassical minima of the field, so this basis converges at a far
//! smaller cutoff `n_max` than the bare Fock basis.

use std::f64::consts::SQRT_2;

use super::fock::c_plus;
use super::{check_j, check_kind, BasisKind, BasisSpec, CooMatrix};
use crate::error::Result;
use crate::model::ModelParams;

/// Sector displacement `g = 2 gamma / (omega sqrt(Nq))`.
pub(crate) fn displacement(p: &ModelParams) -> f64 {
    2.0 * p.gamma / (p.omega * p.nq().sqrt())
}

/// Franck-Condon table `t[M (n_max+1) + N] = <M|D(d)|N>` for a real
/// displacement `d`, built from the two-term recurrence
/// `sqrt(N+1) <M|D|N+1> = sqrt(M) <M-1|D|N> - d <M|D|N>` seeded by the
/// coherent-state column `<M|D|0> = e^{-d^2/2} d^M / sqrt(M!)`.
pub(crate) fn displacement_table(d: f64, n_max: usize) -> Vec<f64> {
    let n = n_max + 1;
    let mut t = vec![0.0; n * n];
    t[0] = (-0.5 * d * d).exp();
    for m in 1..n {
        t[m * n] = t[(m - 1) * n] * d / (m as f64).sqrt();
    }
    for col in 0..n - 1 {
        for m in 0..n {
            let lower = if m == 0 { 0.0 } else { (m as f64).sqrt() * t[(m - 1) * n + col] };
            t[m * n + col + 1] = (lower - d * t[m * n + col]) / ((col + 1) as f64).sqrt();
        }
    }
    t
}

/// Rotated-frame matrix element `[omega0 X + (eta/Nq) X^2]_{a b}`.
///
/// `X` carries the standard ladder elements `X_{m+1, m} = c_plus(m)/2` and
/// zero diagonal; `X^2` is pentadiagonal.
fn spin_elem(p: &ModelParams, j: f64, a: f64, b: f64) -> f64 {
    let nq = p.nq();
    let lo = a.min(b);
    match (a - b).abs().round() as i64 {
        0 => {
            let up = c_plus(j, b);
            let dn = c_plus(j, b - 1.0);
            0.25 * p.eta / nq * (up * up + dn * dn)
        }
        1 => 0.5 * p.omega0 * c_plus(j, lo),
        2 => 0.25 * p.eta / nq * c_plus(j, lo) * c_plus(j, lo + 1.0),
        _ => 0.0,
    }
}

/// Rotated-frame matrix element of the bare observable `J_z`, i.e. `X_{a b}`.
fn x_elem(j: f64, a: f64, b: f64) -> f64 {
    if ((a - b).abs() - 1.0).abs() < 0.5 {
        0.5 * c_plus(j, a.min(b))
    } else {
        0.0
    }
}

/// Shared assembly loop for operators of the form
/// `boson-diagonal + spin(mu', mu) ⊗ D(g (mu' - mu))` in the parity-adapted
/// basis; `spin` must vanish for `|mu' - mu| > 2`.
fn assemble<F: Fn(f64, f64) -> f64>(
    p: &ModelParams,
    spec: &BasisSpec,
    spin: F,
    boson_diagonal: bool,
) -> CooMatrix {
    let states = spec.states();
    let two_j = (2.0 * spec.j).round() as i64;
    let sigma = if two_j % 2 == 0 { 1.0 } else { -1.0 };
    let psign = spec.parity.sign() as f64;
    let g = displacement(p);
    let nn = spec.n_max + 1;
    let tab1 = displacement_table(g, spec.n_max);
    let tab2 = displacement_table(2.0 * g, spec.n_max);
    // <M|D(g k)|N> for |k| <= 2, using D(-d)_{MN} = (-1)^{M+N} D(d)_{MN}
    let overlap = |k: i64, m: usize, n: usize| -> f64 {
        let base = match k.abs() {
            0 => return if m == n { 1.0 } else { 0.0 },
            1 => tab1[m * nn + n],
            _ => tab2[m * nn + n],
        };
        if k < 0 && (m + n) % 2 == 1 {
            -base
        } else {
            base
        }
    };

    let mut out = CooMatrix::new(states.len());
    for (c, sc) in states.iter().enumerate() {
        for (r, sr) in states.iter().enumerate().skip(c) {
            let (mu_c, mu_r) = (sc.spin, sr.spin);
            // couplings into a self-paired mu = 0 state pick up sqrt(2)
            let pref = if (mu_c == 0.0) != (mu_r == 0.0) { SQRT_2 } else { 1.0 };
            let mut v = 0.0;
            let diff = (mu_r - mu_c).round() as i64;
            if diff.abs() <= 2 {
                v += spin(mu_r, mu_c) * overlap(diff, sr.n, sc.n);
            }
            if diff == 0 && sr.n == sc.n && boson_diagonal {
                v += p.omega * (sc.n as f64 - g * g * mu_c * mu_c);
            }
            if mu_c > 0.0 && mu_r > 0.0 {
                let sum = (mu_r + mu_c).round() as i64;
                if sum <= 2 {
                    let pn = if sc.n % 2 == 1 { -1.0 } else { 1.0 };
                    v += psign * sigma * pn * spin(mu_r, -mu_c) * overlap(sum, sr.n, sc.n);
                }
            }
            out.push(r, c, pref * v);
        }
    }
    out.sort_row_major();
    out
}

/// Sparse Hamiltonian block in the parity-adapted displaced basis.
pub fn displaced_basis_hamiltonian(p: &ModelParams, spec: &BasisSpec) -> Result<CooMatrix> {
    check_kind(spec, BasisKind::DisplacedFock)?;
    check_j(p, spec)?;
    Ok(assemble(p, spec, |a, b| spin_elem(p, spec.j, a, b), true))
}

/// `J_z` in the parity-adapted displaced basis.
pub fn jz_matrix(p: &ModelParams, spec: &BasisSpec) -> Result<CooMatrix> {
    check_kind(spec, BasisKind::DisplacedFock)?;
    check_j(p, spec)?;
    Ok(assemble(p, spec, |a, b| x_elem(spec.j, a, b), false))
}
