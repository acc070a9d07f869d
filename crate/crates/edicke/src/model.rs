//! Model parameters and the semiclassical energy landscape.
//!
//! The quantum Hamiltonian is
//!
//! ```text
//! H = omega a'a + omega0 Jz + (gamma/sqrt(Nq)) (a + a')(J+ + J-) + (eta/Nq) Jz^2
//! ```
//!
//! with `Nq = 2j` qubits. Replacing the field by the quadratures `(q, p)` and
//! the collective spin by `(phi, jz)` yields the classical Hamiltonian
//!
//! ```text
//! H_cl = omega (q^2 + p^2)/2 + omega0 jz
//!        + 2 gamma q sqrt((j^2 - jz^2)/j) cos(phi) + (eta/2j) jz^2
//! ```
//!
//! All energies in the public interface are scaled, `eps = E/(omega0 j)`, so
//! the spin contribution lies in `[-1, 1]`. This module holds the parameter
//! set, the phase-space diagram (three regions separated by the auxiliary
//! parameter `f` and by `eta = omega0`), the fixed points of the flow with
//! their stability, and the critical energies where the structure of the
//! energy shells changes.

use crate::eig;
use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Parameters of the extended Dicke model.
///
/// Invariants (enforced by [`ModelParams::new`]): `omega > 0`, `omega0 > 0`,
/// `gamma >= 0`, `j > 0`. The qubit-qubit strength `eta` may take any sign,
/// although the region taxonomy below assumes `eta >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Field frequency.
    pub omega: f64,
    /// Qubit level splitting.
    pub omega0: f64,
    /// Field-qubit coupling.
    pub gamma: f64,
    /// Qubit-qubit interaction strength.
    pub eta: f64,
    /// Collective pseudospin length, `j = Nq/2`.
    pub j: f64,
}

impl ModelParams {
    pub fn new(omega: f64, omega0: f64, gamma: f64, eta: f64, j: f64) -> Result<Self> {
        let all_finite =
            omega.is_finite() && omega0.is_finite() && gamma.is_finite() && eta.is_finite() && j.is_finite();
        if !all_finite {
            return Err(Error::InvalidParams("all parameters must be finite".into()));
        }
        if omega <= 0.0 || omega0 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "frequencies must be positive (omega = {omega}, omega0 = {omega0})"
            )));
        }
        if gamma < 0.0 {
            return Err(Error::InvalidParams(format!("coupling must be non-negative (gamma = {gamma})")));
        }
        if j <= 0.0 {
            return Err(Error::InvalidParams(format!("pseudospin length must be positive (j = {j})")));
        }
        Ok(Self { omega, omega0, gamma, eta, j })
    }

    /// Number of qubits, `Nq = 2j`.
    pub fn nq(&self) -> f64 {
        2.0 * self.j
    }

    /// Conversion factor between raw and scaled energies, `omega0 * j`.
    pub fn energy_scale(&self) -> f64 {
        self.omega0 * self.j
    }

    /// Raw energy for a scaled one.
    pub fn raw_energy(&self, eps: f64) -> f64 {
        eps * self.energy_scale()
    }

    /// Scaled energy for a raw one.
    pub fn scaled_energy(&self, e: f64) -> f64 {
        e / self.energy_scale()
    }
}

/// Auxiliary parameter `f = (4 gamma^2 + eta omega) / (omega omega0)`.
///
/// Generalizes the coupling ratio of the ordinary Dicke model: for `eta = 0`
/// it reduces to `(gamma/gamma_c)^2` with `gamma_c = sqrt(omega omega0)/2`.
pub fn auxiliary_f(p: &ModelParams) -> f64 {
    (4.0 * p.gamma * p.gamma + p.eta * p.omega) / (p.omega * p.omega0)
}

/// The three regions of the ground-state phase diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// `f < 1`: the south pole is the global minimum.
    I,
    /// `f >= 1`, `eta < omega0`: a degenerate pair of superradiant minima.
    II,
    /// `f >= 1`, `eta >= omega0`: additionally a pair of saddle points.
    III,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Region::I => write!(f, "I"),
            Region::II => write!(f, "II"),
            Region::III => write!(f, "III"),
        }
    }
}

/// Region taxonomy. Boundary conventions: `f = 1` belongs to II/III and
/// `eta = omega0` to III. Note `eta >= omega0` forces `f >= 1`.
pub fn classify_region(p: &ModelParams) -> Region {
    if auxiliary_f(p) < 1.0 {
        Region::I
    } else if p.eta < p.omega0 {
        Region::II
    } else {
        Region::III
    }
}

/// A point of the classical phase space.
///
/// `q`, `p` are the field quadratures (which grow like `sqrt(j)`), `z = jz/j`
/// is the scaled spin projection and `phi` the azimuth of the spin.
/// Invariants: `|z| <= 1`, `phi` normalized to `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalState {
    pub q: f64,
    pub p: f64,
    pub z: f64,
    pub phi: f64,
}

impl ClassicalState {
    /// Builds a state, normalizing `phi` and rejecting `|z| > 1` beyond a
    /// small rounding allowance (overshoots below `1e-9` are clamped).
    pub fn new(q: f64, p: f64, z: f64, phi: f64) -> Result<Self> {
        if !(q.is_finite() && p.is_finite() && z.is_finite() && phi.is_finite()) {
            return Err(Error::InvalidState("coordinates must be finite".into()));
        }
        if z.abs() > 1.0 + 1e-9 {
            return Err(Error::InvalidState(format!("|z| must not exceed 1 (z = {z})")));
        }
        Ok(Self { q, p, z: z.clamp(-1.0, 1.0), phi: phi.rem_euclid(TWO_PI) })
    }

    pub(crate) fn from_raw(q: f64, p: f64, z: f64, phi: f64) -> Self {
        Self { q, p, z: z.clamp(-1.0, 1.0), phi: phi.rem_euclid(TWO_PI) }
    }
}

/// Scaled classical energy `eps = H_cl/(omega0 j)` of a phase-space point.
pub fn classical_energy(state: &ClassicalState, p: &ModelParams) -> f64 {
    let ClassicalState { q, p: pp, z, phi } = *state;
    let s = (p.j * (1.0 - z * z)).max(0.0).sqrt();
    let raw = 0.5 * p.omega * (q * q + pp * pp)
        + p.omega0 * p.j * z
        + 2.0 * p.gamma * q * s * phi.cos()
        + 0.5 * p.eta * p.j * z * z;
    raw / p.energy_scale()
}

/// Scaled effective energy surface over the sphere,
/// `V_eff(z, phi)/(omega0 j) = z + (eta/2 omega0) z^2
///  - (2 gamma^2/(omega omega0)) (1 - z^2) cos^2(phi)`,
/// obtained by minimizing `H_cl` over the field quadratures at fixed spin.
pub fn effective_energy_surface(z: f64, phi: f64, p: &ModelParams) -> f64 {
    let c = phi.cos();
    z + 0.5 * p.eta / p.omega0 * z * z
        - 2.0 * p.gamma * p.gamma / (p.omega * p.omega0) * (1.0 - z * z) * c * c
}

/// Structural role of a fixed point within its region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixedPointKind {
    /// Non-degenerate global minimum (south pole in region I, or the merged
    /// point at `f = 1`).
    GlobalMinimum,
    /// One of the two symmetry-related superradiant minima.
    DegenerateMinimum,
    LocalMaximum,
    Saddle,
}

/// A stationary point of the classical flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub state: ClassicalState,
    pub kind: FixedPointKind,
    pub stable: bool,
}

/// All fixed points of the classical equations of motion in the current
/// region, ordered: south pole, north pole, superradiant pair (`phi = 0`
/// then `pi`), saddle pair (`phi = pi/2` then `3 pi/2`).
///
/// The poles `(0, 0, z = -1)` and `(0, 0, z = +1)` are always stationary
/// (`phi` is reported as 0 there; it is undefined at the poles). For `f > 1`
/// the superradiant pair sits at `q = -+ q_s`, `z = -1/f`,
/// `q_s = 2 gamma sqrt(j - j/f^2)/omega`; at `f = 1` it merges with the
/// south pole, which is then emitted once as the global minimum. For
/// `eta > omega0` the saddle pair sits at `q = p = 0`, `z = -omega0/eta`,
/// `phi = +-pi/2`; at `eta = omega0` it too coincides with the south pole.
pub fn fixed_points(p: &ModelParams) -> Vec<FixedPoint> {
    let f = auxiliary_f(p);
    let mut out = Vec::with_capacity(6);

    let south_kind = if f < 1.0 {
        FixedPointKind::GlobalMinimum
    } else if f == 1.0 {
        // merged degenerate point
        FixedPointKind::GlobalMinimum
    } else if p.eta < p.omega0 {
        FixedPointKind::Saddle
    } else {
        FixedPointKind::LocalMaximum
    };
    let south_stable = matches!(south_kind, FixedPointKind::GlobalMinimum);
    out.push(FixedPoint {
        state: ClassicalState::from_raw(0.0, 0.0, -1.0, 0.0),
        kind: south_kind,
        stable: south_stable,
    });
    out.push(FixedPoint {
        state: ClassicalState::from_raw(0.0, 0.0, 1.0, 0.0),
        kind: FixedPointKind::LocalMaximum,
        stable: false,
    });

    if f > 1.0 {
        let qs = 2.0 * p.gamma * (p.j - p.j / (f * f)).max(0.0).sqrt() / p.omega;
        let z = -1.0 / f;
        for (q, phi) in [(-qs, 0.0), (qs, std::f64::consts::PI)] {
            out.push(FixedPoint {
                state: ClassicalState::from_raw(q, 0.0, z, phi),
                kind: FixedPointKind::DegenerateMinimum,
                stable: true,
            });
        }
    }

    if p.eta > p.omega0 {
        let z = -p.omega0 / p.eta;
        for phi in [0.5 * std::f64::consts::PI, 1.5 * std::f64::consts::PI] {
            out.push(FixedPoint {
                state: ClassicalState::from_raw(0.0, 0.0, z, phi),
                kind: FixedPointKind::Saddle,
                stable: false,
            });
        }
    }

    out
}

/// Hessian curvature class of a stationary point.
///
/// `Minimum`/`Maximum`/`Saddle` refer to the energy surface over the sphere:
/// the Hessian of `H_cl` in canonical coordinates always carries two positive
/// field directions, so the class is read off the count of negative
/// eigenvalues (0, 2, 1 respectively). `Marginal` flags a zero eigenvalue at
/// a region boundary (`f = 1` or `eta = omega0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Curvature {
    Minimum,
    Maximum,
    Saddle,
    Marginal,
}

/// Stability classification of a fixed point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stability {
    pub curvature: Curvature,
    /// True only for minima; maxima and saddles of the energy surface are
    /// dynamically unstable here, and marginal points are not certified.
    pub stable: bool,
}

/// Gradient of the raw `H_cl` with respect to the canonical coordinates
/// `(q, p, phi, jz)`. The `phi` and `jz` components blow up or lose meaning
/// at the poles; callers must treat `|z| = 1` separately.
pub(crate) fn hamiltonian_gradient(state: &ClassicalState, p: &ModelParams) -> [f64; 4] {
    let ClassicalState { q, p: pp, z, phi } = *state;
    let s = (p.j * (1.0 - z * z)).max(0.0).sqrt();
    let (sin, cos) = phi.sin_cos();
    [
        p.omega * q + 2.0 * p.gamma * s * cos,
        p.omega * pp,
        -2.0 * p.gamma * q * s * sin,
        p.omega0 + p.eta * z - 2.0 * p.gamma * q * cos * z / s,
    ]
}

/// Classifies the curvature of `H_cl` at a claimed fixed point.
///
/// Away from the poles the 4x4 Hessian in `(q, p, phi, jz)` is evaluated
/// analytically; at the poles, where that chart degenerates, the planar
/// chart `X = sqrt(2(j -+ jz)) cos(phi)`, `Y = sqrt(2(j -+ jz)) sin(phi)`
/// is used instead. Errors if the point does not satisfy the stationarity
/// condition to `1e-6`.
pub fn stability_of(state: &ClassicalState, p: &ModelParams) -> Result<Stability> {
    let scale = p.omega0 * (1.0 + p.j.sqrt());
    let pole = 1.0 - state.z * state.z < 1e-12;
    if !pole {
        let g = hamiltonian_gradient(state, p);
        let residual = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if residual > 1e-6 * scale.max(1.0) {
            return Err(Error::NotAFixedPoint { residual });
        }
    } else if state.q.abs().max(state.p.abs()) > 1e-9 {
        return Err(Error::NotAFixedPoint { residual: state.q.abs().max(state.p.abs()) });
    }

    let h = if pole { pole_hessian(state.z > 0.0, p) } else { canonical_hessian(state, p) };
    let w = eig::eigvalsh(&h, 4)?;
    let lmax = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if w.iter().any(|x| x.abs() < 1e-9 * lmax.max(1e-300)) {
        return Ok(Stability { curvature: Curvature::Marginal, stable: false });
    }
    let negatives = w.iter().filter(|x| **x < 0.0).count();
    let curvature = match negatives {
        0 => Curvature::Minimum,
        1 => Curvature::Saddle,
        _ => Curvature::Maximum,
    };
    Ok(Stability { curvature, stable: curvature == Curvature::Minimum })
}

/// Hessian of raw `H_cl` in `(q, p, phi, jz)`, row-major 4x4.
fn canonical_hessian(state: &ClassicalState, p: &ModelParams) -> [f64; 16] {
    let ClassicalState { q, p: _, z, phi } = *state;
    let s = (p.j * (1.0 - z * z)).sqrt();
    let (sin, cos) = phi.sin_cos();
    // s' = ds/djz = -z/s, s'' = -1/(j s) - z^2/s^3
    let sp = -z / s;
    let spp = -1.0 / (p.j * s) - z * z / (s * s * s);
    let g2 = 2.0 * p.gamma;

    let h_qq = p.omega;
    let h_qphi = -g2 * s * sin;
    let h_qjz = g2 * cos * sp;
    let h_pp = p.omega;
    let h_phiphi = -g2 * q * s * cos;
    let h_phijz = -g2 * q * sin * sp;
    let h_jzjz = g2 * q * cos * spp + p.eta / p.j;

    [
        h_qq, 0.0, h_qphi, h_qjz, //
        0.0, h_pp, 0.0, 0.0, //
        h_qphi, 0.0, h_phiphi, h_phijz, //
        h_qjz, 0.0, h_phijz, h_jzjz,
    ]
}

/// Hessian of raw `H_cl` at a pole in the planar chart `(q, p, X, Y)`.
fn pole_hessian(north: bool, p: &ModelParams) -> [f64; 16] {
    let d = if north { -(p.omega0 + p.eta) } else { p.omega0 - p.eta };
    let c = 2.0 * p.gamma;
    [
        p.omega, 0.0, c, 0.0, //
        0.0, p.omega, 0.0, 0.0, //
        c, 0.0, d, 0.0, //
        0.0, 0.0, 0.0, d,
    ]
}

/// The critical scaled energies bounding the phase-space structure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalEnergies {
    /// Ground (global minimum) energy.
    pub eps_min: f64,
    /// South-pole energy `-1 + eta/(2 omega0)`; a saddle level in region II,
    /// a local-maximum level in region III, equal to `eps_min` in region I.
    pub eps_minus: f64,
    /// North-pole energy `1 + eta/(2 omega0)`; the shells saturate above it.
    pub eps_plus: f64,
    /// Saddle-pair energy `-omega0/(2 eta)`, present only in region III.
    pub eps_s: Option<f64>,
}

/// Closed-form critical energies.
///
/// `eps_min = -1 + eta/(2 omega0)` for `f < 1` and
/// `-(f + 1/f)/2 + eta/(2 omega0)` otherwise. Ordering:
/// region I `eps_min = eps_minus < eps_plus`, region II
/// `eps_min < eps_minus < eps_plus`, region III
/// `eps_min <= eps_s < eps_minus < eps_plus` (strict for `gamma > 0`).
pub fn critical_energies(p: &ModelParams) -> CriticalEnergies {
    let f = auxiliary_f(p);
    let shift = 0.5 * p.eta / p.omega0;
    let eps_minus = -1.0 + shift;
    let eps_plus = 1.0 + shift;
    let eps_min = if f < 1.0 { eps_minus } else { -0.5 * (f + 1.0 / f) + shift };
    let eps_s = match classify_region(p) {
        Region::III => Some(-0.5 * p.omega0 / p.eta),
        _ => None,
    };
    CriticalEnergies { eps_min, eps_minus, eps_plus, eps_s }
}
