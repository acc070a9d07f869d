//! Semi-classical dynamics: equations of motion, adaptive trajectories,
//! energy-shell sampling, and Poincare sections at `p = 0`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{
    classical_energy, critical_energies, fixed_points, ClassicalState, FixedPointKind,
    ModelParams,
};
use crate::ode::{self, DenseStep, Y};

/// Trajectories abort with a pole flag when `1 - z^2` drops below this.
const POLE_GAP: f64 = 1e-10;

/// Time derivative of a classical state along the flow.
#[derive(Debug, Clone, Copy)]
pub struct EomRate {
    pub dq: f64,
    pub dp: f64,
    pub dphi: f64,
    pub dz: f64,
}

/// Raw right-hand side on the integration chart `y = [q, p, z, phi]`.
fn rhs_raw(y: &Y, p: &ModelParams) -> Result<Y> {
    let [q, pp, z, phi] = *y;
    let gap = 1.0 - z * z;
    if gap < POLE_GAP {
        return Err(Error::PoleProximity { gap });
    }
    let s = (p.j * gap).sqrt();
    let (sin, cos) = phi.sin_cos();
    let dq = p.omega * pp;
    let dp = -p.omega * q - 2.0 * p.gamma * s * cos;
    let dz = 2.0 * p.gamma * q * sin * (gap / p.j).sqrt();
    let dphi = p.omega0 + p.eta * z - 2.0 * p.gamma * q * z * cos / s;
    Ok([dq, dp, dz, dphi])
}

/// The semi-classical equations of motion at `state`.
///
/// Requires `|z| < 1`; within `1 - z^2 < 1e-10` of a pole the chart
/// degenerates and the call errors with [`Error::PoleProximity`].
pub fn eom_rhs(state: &ClassicalState, p: &ModelParams) -> Result<EomRate> {
    let y = [state.q, state.p, state.z, state.phi];
    let d = rhs_raw(&y, p)?;
    Ok(EomRate {
        dq: d[0],
        dp: d[1],
        dz: d[2],
        dphi: d[3],
    })
}

/// An integrated trajectory sampled at every accepted step.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Time-ordered `(t, state)` samples, starting with the initial state.
    pub samples: Vec<(f64, ClassicalState)>,
    /// Max `|eps(t) - eps(0)|` over the samples, in scaled energy units.
    pub energy_drift: f64,
    /// True when the run was cut short by a close pole approach.
    pub truncated_at_pole: bool,
}

fn check_tol(tol: f64) -> Result<()> {
    if !(1e-12..=1e-6).contains(&tol) {
        return Err(Error::InvalidParams(format!(
            "integration tolerance {tol:.3e} outside [1e-12, 1e-6]"
        )));
    }
    Ok(())
}

/// Integrates the equations of motion from `state0` over `t_end` time units
/// (negative `t_end` runs backwards) with absolute and relative tolerance
/// `tol`.
///
/// A close pole approach truncates the trajectory and sets the flag instead
/// of erroring; every other failure propagates.
pub fn integrate(
    state0: &ClassicalState,
    p: &ModelParams,
    t_end: f64,
    tol: f64,
) -> Result<Trajectory> {
    check_tol(tol)?;
    if !t_end.is_finite() {
        return Err(Error::InvalidParams("t_end must be finite".into()));
    }
    let eps0 = classical_energy(state0, p);
    let y0 = [state0.q, state0.p, state0.z, state0.phi];
    let mut samples = vec![(0.0, *state0)];
    let mut drift = 0.0f64;
    let outcome = ode::integrate(
        |_t, y| rhs_raw(y, p),
        0.0,
        y0,
        t_end,
        tol,
        tol,
        |step| {
            let y = step.eval(step.t1);
            let state = ClassicalState::new(y[0], y[1], y[2], y[3])?;
            drift = drift.max((classical_energy(&state, p) - eps0).abs());
            samples.push((step.t1, state));
            Ok(())
        },
    );
    let truncated_at_pole = match outcome {
        Ok(()) => false,
        Err(Error::PoleProximity { .. }) => true,
        Err(e) => return Err(e),
    };
    Ok(Trajectory {
        samples,
        energy_drift: drift,
        truncated_at_pole,
    })
}

/// Draws `n` initial conditions uniformly from the accessible `(z, phi)` set
/// of the energy shell `eps`, with `p = 0` and `q` solving the energy
/// constraint, alternating between the two quadratic branches.
///
/// At the ground energy itself the shell is the set of global minima, so
/// those fixed points are returned cyclically. Deterministic in `seed`.
pub fn sample_energy_shell(
    eps: f64,
    p: &ModelParams,
    n: usize,
    seed: u64,
) -> Result<Vec<ClassicalState>> {
    let ce = critical_energies(p);
    let scale = 1.0 + eps.abs().max(ce.eps_min.abs());
    if eps < ce.eps_min - 1e-12 * scale {
        return Err(Error::BelowGround {
            eps,
            eps_min: ce.eps_min,
        });
    }
    if eps <= ce.eps_min + 1e-12 * scale {
        let minima: Vec<ClassicalState> = fixed_points(p)
            .into_iter()
            .filter(|fp| {
                matches!(
                    fp.kind,
                    FixedPointKind::GlobalMinimum | FixedPointKind::DegenerateMinimum
                )
            })
            .map(|fp| fp.state)
            .collect();
        return Ok((0..n).map(|i| minima[i % minima.len()]).collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = p.eta / (2.0 * p.omega0);
    let mut states = Vec::with_capacity(n);
    for _draw in 0..1_000_000u64 {
        if states.len() == n {
            break;
        }
        let z: f64 = rng.gen_range(-1.0..=1.0);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let cos = phi.cos();
        if 2.0 * p.gamma * p.gamma * (1.0 - z * z) * cos * cos
            < p.omega * (0.5 * p.eta * z * z + p.omega0 * (z - eps))
        {
            continue;
        }
        // q^2 + b q + c = 0 from the energy constraint at p = 0.
        let b = 4.0 * p.gamma * (p.j * (1.0 - z * z)).sqrt() * cos / p.omega;
        let c = 2.0 * p.omega0 * p.j / p.omega * (a * z * z + z - eps);
        let disc = (b * b - 4.0 * c).max(0.0).sqrt();
        let big = -0.5 * (b + b.signum() * disc);
        let (q_big, q_small) = if big == 0.0 { (0.0, 0.0) } else { (big, c / big) };
        let mut q = if states.len() % 2 == 0 { q_big } else { q_small };
        // Polish against rounding so the shell guarantee holds exactly.
        let state = loop {
            let state = ClassicalState::new(q, 0.0, z, phi)?;
            let defect = classical_energy(&state, p) - eps;
            if defect.abs() < 1e-10 {
                break state;
            }
            let slope = (p.omega * q / p.j
                + 2.0 * p.gamma * ((1.0 - z * z) / p.j).sqrt() * cos)
                / p.omega0;
            if slope.abs() < 1e-12 {
                return Err(Error::Numerical(format!(
                    "cannot place sample on shell at z = {z}, phi = {phi}"
                )));
            }
            q -= defect / slope;
        };
        states.push(state);
    }
    if states.len() < n {
        return Err(Error::EmptyShell(format!(
            "accepted {} of {n} samples at eps = {eps} within the draw budget",
            states.len()
        )));
    }
    Ok(states)
}

/// One Poincare crossing of the `p = 0` plane.
#[derive(Debug, Clone, Copy)]
pub struct SectionPoint {
    /// `1 + z`, in `[0, 2]`.
    pub r: f64,
    /// Azimuth in `[0, 2 pi)`.
    pub phi: f64,
    pub t_cross: f64,
    /// True when `p` crosses zero from below.
    pub upward: bool,
}

/// Section points of one trajectory.
#[derive(Debug, Clone)]
pub struct SectionSeries {
    pub points: Vec<SectionPoint>,
    pub truncated_at_pole: bool,
}

/// Computes the Poincare section at `p = 0` for a set of initial conditions
/// on a common energy shell (checked to 1e-8 in scaled energy), integrating
/// each for `t_end` at tolerance `tol`.
///
/// Both crossing directions are recorded and flagged. Initial conditions
/// already on the section plane contribute their `t = 0` point.
pub fn poincare_section(
    ics: &[ClassicalState],
    p: &ModelParams,
    t_end: f64,
    tol: f64,
) -> Result<Vec<SectionSeries>> {
    check_tol(tol)?;
    if ics.is_empty() {
        return Err(Error::InvalidParams(
            "poincare_section needs at least one initial condition".into(),
        ));
    }
    let energies: Vec<f64> = ics.iter().map(|s| classical_energy(s, p)).collect();
    let (lo, hi) = energies
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| {
            (lo.min(e), hi.max(e))
        });
    if hi - lo > 1e-8 {
        return Err(Error::ShellMismatch(format!(
            "initial energies spread over {:.3e}, more than 1e-8",
            hi - lo
        )));
    }
    ics.par_iter()
        .map(|ic| section_of(ic, p, t_end, tol))
        .collect()
}

fn section_of(
    ic: &ClassicalState,
    p: &ModelParams,
    t_end: f64,
    tol: f64,
) -> Result<SectionSeries> {
    let mut points = Vec::new();
    let mut last_cross = f64::NEG_INFINITY;
    if ic.p.abs() < 1e-10 {
        let upward = match eom_rhs(ic, p) {
            Ok(rate) => rate.dp > 0.0,
            Err(_) => true,
        };
        points.push(SectionPoint {
            r: 1.0 + ic.z,
            phi: ic.phi,
            t_cross: 0.0,
            upward,
        });
        last_cross = 0.0;
    }
    let y0 = [ic.q, ic.p, ic.z, ic.phi];
    let outcome = ode::integrate(
        |_t, y| rhs_raw(y, p),
        0.0,
        y0,
        t_end,
        tol,
        tol,
        |step| {
            scan_step(step, &mut points, &mut last_cross);
            Ok(())
        },
    );
    let truncated_at_pole = match outcome {
        Ok(()) => false,
        Err(Error::PoleProximity { .. }) => true,
        Err(e) => return Err(e),
    };
    Ok(SectionSeries {
        points,
        truncated_at_pole,
    })
}

/// Scans one dense step for `p = 0` crossings, appending polished points.
fn scan_step(step: &DenseStep, points: &mut Vec<SectionPoint>, last_cross: &mut f64) {
    const SUBS: usize = 8;
    let h = step.t1 - step.t0;
    let p_at = |t: f64| step.eval(t)[1];
    let ts: Vec<f64> = (0..=SUBS)
        .map(|i| step.t0 + h * i as f64 / SUBS as f64)
        .collect();
    let ps: Vec<f64> = ts.iter().map(|&t| p_at(t)).collect();
    if ps.iter().all(|&v| v.abs() < 1e-12) {
        // Degenerate case: the trajectory lives on the section plane
        // (a fixed point); record its recurring point once per step.
        emit(step, step.t1, true, points);
        *last_cross = step.t1;
        return;
    }
    for w in 0..SUBS {
        let (pa, pb) = (ps[w], ps[w + 1]);
        if pa == 0.0 && pb == 0.0 {
            continue;
        }
        if pa * pb > 0.0 {
            continue;
        }
        // Bisect the interpolant down to the section tolerance.
        let (mut lo, mut hi) = (ts[w], ts[w + 1]);
        let mut tm = if pa == 0.0 { lo } else { hi };
        if pa != 0.0 && pb != 0.0 {
            for _ in 0..200 {
                tm = 0.5 * (lo + hi);
                let pm = p_at(tm);
                if pm.abs() < 1e-10 {
                    break;
                }
                if (pm > 0.0) == (pa > 0.0) {
                    lo = tm;
                } else {
                    hi = tm;
                }
            }
        }
        if (tm - *last_cross).abs() < 1e-9 * tm.abs().max(1.0) {
            continue;
        }
        emit(step, tm, pb > pa, points);
        *last_cross = tm;
    }
}

fn emit(step: &DenseStep, t: f64, upward: bool, points: &mut Vec<SectionPoint>) {
    let y = step.eval(t);
    points.push(SectionPoint {
        r: 1.0 + y[2].clamp(-1.0, 1.0),
        phi: y[3].rem_euclid(std::f64::consts::TAU),
        t_cross: t,
        upward,
    });
}
