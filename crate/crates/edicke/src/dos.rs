//! Semiclassical density of states on the Bloch sphere.
//!
//! After minimizing the field quadratures out of the classical energy
//! surface, the fraction of the sphere available at scaled energy `eps` is
//!
//! ```text
//! nu(eps) = area{ (z, phi) : 2 gamma^2 (1 - z^2) cos^2(phi)
//!                              >= omega omega0 (a z^2 + z - eps) } / (4 pi)
//! ```
//!
//! with `a = eta / (2 omega0)`. The region decomposes into a band where the
//! azimuth is unrestricted (the "free" zone, where `a z^2 + z <= eps`) plus
//! constrained bands where the admissible azimuth half-width is
//! `phi0 = arccos sqrt(X)` per quadrant. `nu` rises from 0 at the ground
//! energy to exactly 1 at `eps_plus`, where the whole sphere is available.
//!
//! The derivative of `nu` carries the excited-state phase-transition
//! signatures: logarithmic peaks at energies of unstable interior critical
//! points and finite jumps where a pole of the sphere enters or the sphere
//! saturates. [`detect_discontinuities`] recovers this census numerically
//! from the curve alone, without consulting the critical-point analysis.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{classify_region, critical_energies, ModelParams, Region};
use crate::quad;

/// Absolute tolerance used for the band quadratures inside [`dos`].
const QUAD_TOL: f64 = 1e-10;

/// Boundary roots of the accessible band in `z` at a given energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellRoots {
    /// Lower root of the outer-boundary quadratic.
    pub z_minus: f64,
    /// Upper root of the outer-boundary quadratic.
    pub z_plus: f64,
    /// Inner (free-zone) roots `z1 <= z2` when they exist at this energy,
    /// i.e. for `eta > 0` at energies where the free zone is non-empty.
    pub inner: Option<(f64, f64)>,
}

/// Solves the outer-boundary quadratic
/// `(1 + k a) z^2 + k z - (1 + k eps) = 0` with `k = omega omega0 / (2 gamma^2)`
/// and `a = eta / (2 omega0)`, attaching the inner roots when they exist.
///
/// Outside `[z_minus, z_plus]` no azimuth is accessible at energy `eps`.
/// Requires `gamma > 0`; errors with [`Error::NoRealRoots`] below the ground
/// energy where the band is empty.
pub fn shell_roots(eps: f64, p: &ModelParams) -> Result<ShellRoots> {
    if p.gamma <= 0.0 {
        return Err(Error::InvalidParams(
            "shell_roots requires gamma > 0; for gamma = 0 the band is the free zone".into(),
        ));
    }
    let k = p.omega * p.omega0 / (2.0 * p.gamma * p.gamma);
    let a = p.eta / (2.0 * p.omega0);
    let qa = 1.0 + k * a;
    let qb = k;
    let qc = -(1.0 + k * eps);
    let disc = qb * qb - 4.0 * qa * qc;
    // Forgive rounding-level negatives so the degenerate double root at the
    // ground energy itself resolves instead of erroring.
    let scale = qb * qb + (4.0 * qa * qc).abs();
    if disc < -1e-12 * scale {
        return Err(Error::NoRealRoots(format!(
            "outer boundary has no real roots at eps = {eps}"
        )));
    }
    // qb > 0, so the negative root is the numerically stable one.
    let z_minus = -(qb + disc.max(0.0).sqrt()) / (2.0 * qa);
    let z_plus = qc / (qa * z_minus);
    Ok(ShellRoots {
        z_minus,
        z_plus,
        inner: if p.eta > 0.0 {
            inner_roots(eps, p).ok()
        } else {
            None
        },
    })
}

/// Roots of the inner boundary `a z^2 + z - eps = 0` delimiting the
/// free-azimuth zone, returned in ascending order.
///
/// Requires `eta > 0`; with `eta = 0` the boundary degenerates to the linear
/// threshold `z = eps` and has no quadratic roots.
pub fn inner_roots(eps: f64, p: &ModelParams) -> Result<(f64, f64)> {
    if p.eta <= 0.0 {
        return Err(Error::InvalidParams(
            "inner_roots requires eta > 0; for eta = 0 the free zone is z <= eps".into(),
        ));
    }
    let a = p.eta / (2.0 * p.omega0);
    let disc = 1.0 + 4.0 * a * eps;
    if disc < 0.0 {
        return Err(Error::NoRealRoots(format!(
            "inner boundary has no real roots at eps = {eps}"
        )));
    }
    let lower = -(1.0 + disc.sqrt()) / (2.0 * a);
    let upper = -eps / (a * lower);
    Ok((lower, upper))
}

/// Admissible azimuth quarter-width at latitude `z` and scaled energy `eps`.
///
/// Returns `pi/2` where the azimuth is unrestricted and `0` where latitude
/// `z` is inaccessible; in between it is `arccos sqrt(X)` with
/// `X = k (a z^2 + z - eps) / (1 - z^2)` clamped to `[0, 1]`. Requires
/// `|z| < 1`: at the poles the azimuth degenerates.
pub fn phi0(z: f64, eps: f64, p: &ModelParams) -> Result<f64> {
    if z.abs() >= 1.0 {
        return Err(Error::InvalidState(format!(
            "phi0 requires |z| < 1, got z = {z}"
        )));
    }
    Ok(phi0_unchecked(z, eps, p))
}

fn phi0_unchecked(z: f64, eps: f64, p: &ModelParams) -> f64 {
    let a = p.eta / (2.0 * p.omega0);
    let r = a * z * z + z - eps;
    if p.gamma == 0.0 {
        return if r <= 0.0 { 0.5 * PI } else { 0.0 };
    }
    let denom = 1.0 - z * z;
    if denom <= 0.0 {
        return if r > 0.0 { 0.0 } else { 0.5 * PI };
    }
    let k = p.omega * p.omega0 / (2.0 * p.gamma * p.gamma);
    let x = (k * r / denom).clamp(0.0, 1.0);
    x.sqrt().acos()
}

/// Free-azimuth interval in `z`, clipped to `[-1, 1]`; `None` if empty.
fn free_interval(eps: f64, a: f64) -> Option<(f64, f64)> {
    let (lower, upper) = if a == 0.0 {
        if eps < -1.0 {
            return None;
        }
        (f64::NEG_INFINITY, eps)
    } else {
        let disc = 1.0 + 4.0 * a * eps;
        if disc < 0.0 {
            return None;
        }
        let lower = -(1.0 + disc.sqrt()) / (2.0 * a);
        (lower, -eps / (a * lower))
    };
    let lo = lower.max(-1.0);
    let hi = upper.min(1.0);
    if lo > hi {
        None
    } else {
        Some((lo, hi))
    }
}

/// Integrates `phi0` over a constrained band `[lo, hi]`.
///
/// Both endpoints are boundary roots where `phi0` has a square-root cusp, so
/// each half is mapped through `z = endpoint -/+ t^2`, which renders the
/// integrand smooth for the adaptive quadrature.
fn integrate_band(lo: f64, hi: f64, eps: f64, p: &ModelParams) -> Result<f64> {
    if hi - lo <= 1e-14 {
        return Ok(0.0);
    }
    let mid = 0.5 * (lo + hi);
    let f = |z: f64| phi0_unchecked(z, eps, p);
    let left = quad::integrate(|t| 2.0 * t * f(lo + t * t), 0.0, (mid - lo).sqrt(), 0.5 * QUAD_TOL)?;
    let right = quad::integrate(|t| 2.0 * t * f(hi - t * t), 0.0, (hi - mid).sqrt(), 0.5 * QUAD_TOL)?;
    Ok(left + right)
}

/// Scaled density of states `nu(eps)`: the accessible fraction of the Bloch
/// sphere at scaled energy `eps`.
///
/// Exactly `0` at the ground energy and exactly `1` for `eps >= eps_plus`.
/// Errors with [`Error::BelowGround`] below the ground energy and rejects
/// `eta < 0`, for which the region taxonomy does not apply.
pub fn dos(eps: f64, p: &ModelParams) -> Result<f64> {
    if p.eta < 0.0 {
        return Err(Error::InvalidParams(
            "density of states requires eta >= 0".into(),
        ));
    }
    let ce = critical_energies(p);
    if eps < ce.eps_min - 1e-12 * (1.0 + eps.abs().max(ce.eps_min.abs())) {
        return Err(Error::BelowGround {
            eps,
            eps_min: ce.eps_min,
        });
    }
    let eps = eps.max(ce.eps_min);
    if eps >= ce.eps_plus {
        return Ok(1.0);
    }
    let a = p.eta / (2.0 * p.omega0);
    let free = free_interval(eps, a);
    let free_measure = free.map_or(0.0, |(lo, hi)| 0.5 * (hi - lo));
    if p.gamma == 0.0 {
        return Ok(free_measure);
    }
    let shell = match shell_roots(eps, p) {
        Ok(s) => s,
        // Rounding at the ground energy itself can push the discriminant
        // infinitesimally negative; the band is then a single point.
        Err(Error::NoRealRoots(_)) => return Ok(free_measure),
        Err(e) => return Err(e),
    };
    let band_lo = shell.z_minus.max(-1.0);
    let band_hi = shell.z_plus.min(1.0);
    if band_lo >= band_hi {
        return Ok(free_measure);
    }
    let mut nu = free_measure;
    match free {
        None => nu += integrate_band(band_lo, band_hi, eps, p)? / PI,
        Some((flo, fhi)) => {
            // The free zone always lies inside the band, so it splits the
            // band into at most two constrained pieces.
            let cut_lo = flo.max(band_lo);
            let cut_hi = fhi.min(band_hi);
            if band_lo < cut_lo {
                nu += integrate_band(band_lo, cut_lo, eps, p)? / PI;
            }
            if cut_hi < band_hi {
                nu += integrate_band(cut_hi, band_hi, eps, p)? / PI;
            }
        }
    }
    Ok(nu)
}

/// One node of a sampled density-of-states curve.
#[derive(Debug, Clone, Copy)]
pub struct DosPoint {
    pub eps: f64,
    pub nu: f64,
    /// Finite-difference estimate of `d nu / d eps` on the supplied grid.
    pub derivative: f64,
    /// Index of the smooth branch this energy falls on: the number of
    /// critical energies of the region strictly below `eps`.
    pub subregion: usize,
}

/// Kind of non-analyticity of `d nu / d eps` at a critical energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscontinuityKind {
    /// Finite step in the derivative.
    Jump,
    /// Logarithmic divergence of the derivative.
    Logarithmic,
}

/// A detected non-analyticity of the density-of-states derivative.
#[derive(Debug, Clone, Copy)]
pub struct Discontinuity {
    pub eps: f64,
    pub kind: DiscontinuityKind,
}

/// A sampled density-of-states curve plus its discontinuity census.
#[derive(Debug, Clone)]
pub struct DosCurve {
    pub points: Vec<DosPoint>,
    pub discontinuities: Vec<Discontinuity>,
}

/// Branch index for `eps`: how many critical energies lie strictly below it.
pub fn subregion_index(eps: f64, p: &ModelParams) -> usize {
    let ce = critical_energies(p);
    let mut thresholds = Vec::with_capacity(3);
    if let Some(es) = ce.eps_s {
        thresholds.push(es);
    }
    match classify_region(p) {
        Region::I => thresholds.push(ce.eps_plus),
        Region::II | Region::III => {
            thresholds.push(ce.eps_minus);
            thresholds.push(ce.eps_plus);
        }
    }
    thresholds.into_iter().filter(|&c| c < eps).count()
}

/// Default energy grid for curve sampling: 400 uniform nodes over
/// `[eps_min, eps_plus + 0.5]` refined by 40 geometrically clustered nodes
/// around each critical energy in range, where the curve bends fastest.
pub fn default_energy_grid(p: &ModelParams) -> Vec<f64> {
    let ce = critical_energies(p);
    let lo = ce.eps_min;
    let hi = ce.eps_plus + 0.5;
    let span = hi - lo;
    let mut grid: Vec<f64> = (0..400).map(|i| lo + span * i as f64 / 399.0).collect();
    let mut criticals = vec![ce.eps_minus, ce.eps_plus];
    if let Some(es) = ce.eps_s {
        criticals.push(es);
    }
    for c in criticals {
        if c <= lo + 1e-9 || c >= hi - 1e-9 {
            continue;
        }
        for i in 0..20 {
            let offset = 0.05 * span * (1e-5f64).powf(i as f64 / 19.0);
            let left = c - offset;
            let right = c + offset;
            if left > lo {
                grid.push(left);
            }
            if right < hi {
                grid.push(right);
            }
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|b, a| (*b - *a).abs() < 1e-12);
    grid
}

/// Evaluates the density of states on `grid` (strictly increasing, all at or
/// above the ground energy), attaches finite-difference derivatives and
/// branch indices, and runs the discontinuity census over the grid's range.
pub fn dos_curve(grid: &[f64], p: &ModelParams) -> Result<DosCurve> {
    if grid.len() < 2 {
        return Err(Error::InvalidParams(
            "dos_curve needs at least two grid energies".into(),
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParams(
            "dos_curve grid must be strictly increasing".into(),
        ));
    }
    let nu: Vec<f64> = grid
        .par_iter()
        .map(|&eps| dos(eps, p))
        .collect::<Result<_>>()?;
    let n = grid.len();
    let points = (0..n)
        .map(|i| {
            let (il, ih) = (i.saturating_sub(1), (i + 1).min(n - 1));
            DosPoint {
                eps: grid[i],
                nu: nu[i],
                derivative: (nu[ih] - nu[il]) / (grid[ih] - grid[il]),
                subregion: subregion_index(grid[i], p),
            }
        })
        .collect();
    let discontinuities = detect_discontinuities(p, grid[0], grid[n - 1])?;
    Ok(DosCurve {
        points,
        discontinuities,
    })
}

/// Slope of `nu` over `[eps - delta, eps]` (side < 0) or `[eps, eps + delta]`
/// (side > 0), offset half a step from `eps` to stay clear of the kink.
fn one_sided_slope(eps: f64, delta: f64, side: f64, p: &ModelParams) -> Result<f64> {
    let near = dos(eps + side * 0.5 * delta, p)?;
    let far = dos(eps + side * 1.5 * delta, p)?;
    Ok(side * (far - near) / delta)
}

/// Locates and classifies the non-analyticities of `d nu / d eps` on
/// `[eps_lo, eps_hi]` from curve data alone.
///
/// A coarse scan flags cells where the secant slope changes abruptly; each
/// candidate is refined through three levels of ten-fold grid reduction and
/// then classified by how its one-sided slopes behave as the probing scale
/// shrinks a decade at a time: slopes growing on both sides indicate a
/// logarithmic divergence, a scale-independent left/right slope gap a jump.
pub fn detect_discontinuities(
    p: &ModelParams,
    eps_lo: f64,
    eps_hi: f64,
) -> Result<Vec<Discontinuity>> {
    let ce = critical_energies(p);
    let lo = eps_lo.max(ce.eps_min);
    let hi = eps_hi;
    if !(hi > lo) {
        return Err(Error::InvalidParams(
            "discontinuity scan needs eps_hi > max(eps_lo, eps_min)".into(),
        ));
    }
    const N: usize = 481;
    let h0 = (hi - lo) / (N - 1) as f64;
    let nu: Vec<f64> = (0..N)
        .into_par_iter()
        .map(|i| dos(lo + i as f64 * h0, p))
        .collect::<Result<_>>()?;
    // Spike metric: change of secant slope across each interior node.
    let metric: Vec<f64> = (0..N)
        .map(|i| {
            if i == 0 || i == N - 1 {
                0.0
            } else {
                ((nu[i + 1] - nu[i]) - (nu[i] - nu[i - 1])).abs() / h0
            }
        })
        .collect();
    let mut sorted = metric.clone();
    sorted.sort_by(f64::total_cmp);
    let threshold = (10.0 * sorted[N / 2]).max(1e-3);
    // Local maxima above threshold, keeping one node per cluster.
    let mut candidates: Vec<usize> = Vec::new();
    for i in 2..N - 2 {
        if metric[i] > threshold && metric[i] >= metric[i - 1] && metric[i] >= metric[i + 1] {
            match candidates.last() {
                Some(&j) if i - j <= 3 => {
                    if metric[i] > metric[j] {
                        *candidates.last_mut().unwrap() = i;
                    }
                }
                _ => candidates.push(i),
            }
        }
    }
    let mut found: Vec<Discontinuity> = Vec::new();
    for &c in &candidates {
        let mut center = lo + c as f64 * h0;
        let mut step = h0 / 10.0;
        // Three refinement levels, each shrinking the probe step ten-fold.
        for _ in 0..3 {
            let probes: Vec<f64> = (-20..=20)
                .map(|i| (center + i as f64 * step).max(ce.eps_min))
                .collect();
            let vals: Vec<f64> = probes
                .par_iter()
                .map(|&eps| dos(eps, p))
                .collect::<Result<_>>()?;
            let mut best = (0.0, center);
            for i in 1..probes.len() - 1 {
                let spike = ((vals[i + 1] - vals[i]) - (vals[i] - vals[i - 1])).abs();
                if spike > best.0 {
                    best = (spike, probes[i]);
                }
            }
            center = best.1;
            step /= 10.0;
        }
        // One-sided slopes at three probing scales a decade apart.
        let base = h0.min((center - ce.eps_min) / 2.0);
        if base <= 0.0 {
            continue;
        }
        let mut left = [0.0; 3];
        let mut right = [0.0; 3];
        for k in 0..3 {
            let delta = base / 10f64.powi(k as i32);
            left[k] = one_sided_slope(center, delta, -1.0, p)?;
            right[k] = one_sided_slope(center, delta, 1.0, p)?;
        }
        let grow_left = left[2] - left[1];
        let grow_right = right[2] - right[1];
        let noise = 40.0 * QUAD_TOL / (base / 100.0);
        let log_floor = (20.0 * noise).max(0.05);
        let jump_floor = (20.0 * noise).max(0.02);
        let kind = if grow_left > log_floor && grow_right > log_floor {
            Some(DiscontinuityKind::Logarithmic)
        } else if (left[2] - right[2]).abs() > jump_floor {
            Some(DiscontinuityKind::Jump)
        } else {
            None
        };
        if let Some(kind) = kind {
            // Merge with a neighbor if two candidates converged together.
            if found
                .iter()
                .all(|d| (d.eps - center).abs() > 3.0 * h0)
            {
                found.push(Discontinuity { eps: center, kind });
            }
        }
    }
    found.sort_by(|a, b| a.eps.total_cmp(&b.eps));
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::{region_i, region_ii, region_iii};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// Bisection to ~1e-15 of a sign change of `f` on `[lo, hi]`.
    fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
        let flo = f(lo);
        assert!(
            flo * f(hi) < 0.0,
            "oracle bracket [{lo}, {hi}] does not straddle a root"
        );
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if f(mid) * flo <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Outer-boundary defect written directly from the raw parameters, used
    /// as an independent root oracle.
    fn shell_defect(z: f64, eps: f64, p: &ModelParams) -> f64 {
        p.omega * (0.5 * p.eta * z * z + p.omega0 * (z - eps)) / (2.0 * p.gamma * p.gamma)
            - (1.0 - z * z)
    }

    #[test]
    fn shell_roots_frozen_region_ii() {
        // At eps = 0 the quadratic solves by hand: z_minus = -32/23 and
        // z_plus = 2/3 exactly for omega = omega0 = 1, gamma = 0.8, eta = 0.2.
        let p = region_ii();
        let r = shell_roots(0.0, &p).unwrap();
        assert_abs_diff_eq!(r.z_minus, -32.0 / 23.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.z_plus, 2.0 / 3.0, epsilon = 1e-14);
        // Inner roots at eps = 0 factor as z (z + 2 omega0/eta) = 0.
        let (z1, z2) = r.inner.unwrap();
        assert_abs_diff_eq!(z1, -10.0, epsilon = 1e-12);
        assert_eq!(z2, 0.0);
    }

    #[test]
    fn shell_roots_degenerate_at_ground_and_touch_pole_at_saturation() {
        let p = region_ii();
        let ce = critical_energies(&p);
        // The band shrinks to the double root -1/f at the ground energy.
        let r = shell_roots(ce.eps_min, &p).unwrap();
        let f = crate::model::auxiliary_f(&p);
        assert_abs_diff_eq!(r.z_minus, -1.0 / f, epsilon = 1e-6);
        assert_abs_diff_eq!(r.z_plus, -1.0 / f, epsilon = 1e-6);
        // At eps_plus the band touches the north pole.
        let r = shell_roots(ce.eps_plus, &p).unwrap();
        assert_abs_diff_eq!(r.z_plus, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn shell_roots_match_bisection_oracle() {
        for (p, eps, brackets) in [
            (region_i(), -0.3, [(-4.5, -0.9), (-0.9, 1.5)]),
            (region_ii(), -0.2, [(-3.0, -0.9), (-0.9, 1.5)]),
            (region_iii(), -0.1, [(-1.5, -0.5), (-0.5, 1.5)]),
        ] {
            let r = shell_roots(eps, &p).unwrap();
            let zm = bisect(|z| shell_defect(z, eps, &p), brackets[0].0, brackets[0].1);
            let zp = bisect(|z| shell_defect(z, eps, &p), brackets[1].0, brackets[1].1);
            assert_abs_diff_eq!(r.z_minus, zm, epsilon = 1e-12);
            assert_abs_diff_eq!(r.z_plus, zp, epsilon = 1e-12);
        }
    }

    #[test]
    fn inner_roots_frozen_region_iii() {
        // a = 1.05: roots of 1.05 z^2 + z + 0.1 = 0.
        let p = region_iii();
        let (z1, z2) = inner_roots(-0.1, &p).unwrap();
        let disc = (1.0f64 - 4.0 * 1.05 * 0.1).sqrt();
        assert_abs_diff_eq!(z1, (-1.0 - disc) / 2.1, epsilon = 1e-14);
        assert_abs_diff_eq!(z2, (-1.0 + disc) / 2.1, epsilon = 1e-14);
        assert!(z1 < z2);
        // eps = 0 puts the upper root exactly at the equator.
        let (_, z2) = inner_roots(0.0, &p).unwrap();
        assert_eq!(z2, 0.0);
    }

    #[test]
    fn inner_roots_reject_no_real_roots_and_zero_eta() {
        let p = region_iii();
        // Below the vertex of the free-zone parabola: no real roots.
        assert!(matches!(
            inner_roots(-0.5, &p),
            Err(Error::NoRealRoots(_))
        ));
        assert!(matches!(
            inner_roots(0.0, &region_i_eta0()),
            Err(Error::InvalidParams(_))
        ));
    }

    fn region_i_eta0() -> ModelParams {
        ModelParams::new(1.0, 1.0, 0.3, 0.0, 10.0).unwrap()
    }

    #[test]
    fn phi0_limits_and_oracle() {
        let p = region_ii();
        let eps = 0.0;
        let shell = shell_roots(eps, &p).unwrap();
        // Quarter-width vanishes at the outer boundary and is pi/2 on the
        // inner boundary of the free zone (upper inner root is z = 0 here).
        assert_abs_diff_eq!(phi0(shell.z_plus, eps, &p).unwrap(), 0.0, epsilon = 1e-7);
        assert_abs_diff_eq!(phi0(0.0, eps, &p).unwrap(), 0.5 * PI, epsilon = 1e-7);
        // Interior value agrees with a bisection solve of
        // (1 - z^2) cos^2(phi) = k^-1 * shell expression.
        let z = 0.3;
        let r = p.omega * p.omega0 / (2.0 * p.gamma * p.gamma)
            * (p.eta / (2.0 * p.omega0) * z * z + z - eps);
        let oracle = bisect(|phi| (1.0 - z * z) * phi.cos() * phi.cos() - r, 0.0, 0.5 * PI);
        assert_abs_diff_eq!(phi0(z, eps, &p).unwrap(), oracle, epsilon = 1e-10);
        // The poles are rejected.
        assert!(matches!(phi0(1.0, eps, &p), Err(Error::InvalidState(_))));
        assert!(matches!(phi0(-1.0, eps, &p), Err(Error::InvalidState(_))));
    }

    #[test]
    fn dos_vanishes_at_ground_energy() {
        for p in [region_i(), region_ii(), region_iii()] {
            let ce = critical_energies(&p);
            assert!(dos(ce.eps_min, &p).unwrap() < 1e-9);
            assert!(dos(ce.eps_min + 1e-9, &p).unwrap() < 1e-4);
        }
    }

    #[test]
    fn dos_saturates_exactly_above_eps_plus() {
        for p in [region_i(), region_ii(), region_iii()] {
            let ce = critical_energies(&p);
            assert_eq!(dos(ce.eps_plus, &p).unwrap(), 1.0);
            assert_eq!(dos(ce.eps_plus + 5.0, &p).unwrap(), 1.0);
            let just_below = dos(ce.eps_plus - 1e-6, &p).unwrap();
            assert!(just_below < 1.0 && just_below > 0.999);
        }
    }

    #[test]
    fn dos_is_monotone() {
        for p in [region_i(), region_ii(), region_iii()] {
            let ce = critical_energies(&p);
            let grid: Vec<f64> = (0..=60)
                .map(|i| ce.eps_min + (ce.eps_plus + 0.3 - ce.eps_min) * i as f64 / 60.0)
                .collect();
            let mut prev = -1.0;
            for &eps in &grid {
                let nu = dos(eps, &p).unwrap();
                assert!(nu >= prev - 1e-9, "nu decreased at eps = {eps}");
                assert!((-1e-9..=1.0 + 1e-9).contains(&nu));
                prev = nu;
            }
        }
    }

    #[test]
    fn dos_is_continuous_across_critical_energies() {
        for p in [region_i(), region_ii(), region_iii()] {
            let ce = critical_energies(&p);
            let mut criticals = vec![ce.eps_minus, ce.eps_plus];
            if let Some(es) = ce.eps_s {
                criticals.push(es);
            }
            for c in criticals {
                if c <= ce.eps_min {
                    continue;
                }
                let below = dos(c - 1e-7, &p).unwrap();
                let above = dos(c + 1e-7, &p).unwrap();
                assert!(
                    (above - below).abs() < 1e-5,
                    "nu gap {:.2e} across eps = {c}",
                    (above - below).abs()
                );
            }
        }
    }

    /// Density of states with the anisotropy struck out, assembled through an
    /// independent route: bisection roots and inline band formulas.
    fn dicke_reference_dos(eps: f64, p: &ModelParams) -> f64 {
        assert_eq!(p.eta, 0.0);
        if eps >= 1.0 {
            return 1.0;
        }
        let k = p.omega * p.omega0 / (2.0 * p.gamma * p.gamma);
        let band = |z: f64| k * (z - eps) - (1.0 - z * z);
        let phi = |z: f64| ((k * (z - eps) / (1.0 - z * z)).clamp(0.0, 1.0)).sqrt().acos();
        let fold = |lo: f64, hi: f64| -> f64 {
            let mid = 0.5 * (lo + hi);
            let l = quad::integrate(|t| 2.0 * t * phi(lo + t * t), 0.0, (mid - lo).sqrt(), 1e-11)
                .unwrap();
            let r = quad::integrate(|t| 2.0 * t * phi(hi - t * t), 0.0, (hi - mid).sqrt(), 1e-11)
                .unwrap();
            (l + r) / PI
        };
        if eps >= -1.0 {
            // Free zone [-1, eps] plus one constrained band [eps, z_plus].
            let zp = bisect(band, eps, 1.0);
            0.5 * (eps + 1.0) + fold(eps, zp)
        } else {
            // Free zone empty; the whole band between the two outer roots,
            // which straddle the parabola vertex, is constrained.
            let vertex = -0.5 * k;
            let zm = bisect(band, -1.0, vertex);
            let zp = bisect(band, vertex, 1.0);
            fold(zm, zp)
        }
    }

    #[test]
    fn dos_reduces_to_plain_dicke_at_zero_eta() {
        // Both below and above the critical coupling; the 0.004 fraction for
        // the super-critical set lands below the lower pole energy where the
        // free zone is empty.
        for gamma in [0.4, 0.54] {
            let p = ModelParams::new(1.0, 1.0, gamma, 0.0, 10.0).unwrap();
            let ce = critical_energies(&p);
            for frac in [0.004, 0.15, 0.4, 0.7, 0.9, 0.99] {
                let eps = ce.eps_min + frac * (ce.eps_plus - ce.eps_min);
                let ours = dos(eps, &p).unwrap();
                let reference = dicke_reference_dos(eps, &p);
                assert_abs_diff_eq!(ours, reference, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn dos_matches_midpoint_area_oracle() {
        // Direct two-dimensional area fraction on a fine midpoint grid.
        let p = region_iii();
        let eps = -0.3;
        let n = 2000;
        let mut hits = 0u64;
        for i in 0..n {
            let z = -1.0 + 2.0 * (i as f64 + 0.5) / n as f64;
            for k in 0..n {
                let phi = 2.0 * PI * (k as f64 + 0.5) / n as f64;
                let lhs = 2.0 * p.gamma * p.gamma * (1.0 - z * z) * phi.cos() * phi.cos();
                let rhs = p.omega * (0.5 * p.eta * z * z + p.omega0 * (z - eps));
                if lhs >= rhs {
                    hits += 1;
                }
            }
        }
        let fraction = hits as f64 / (n as f64 * n as f64);
        assert_abs_diff_eq!(dos(eps, &p).unwrap(), fraction, epsilon = 2e-3);
    }

    #[test]
    fn dos_rejects_energies_below_ground() {
        let p = region_ii();
        let ce = critical_energies(&p);
        assert!(matches!(
            dos(ce.eps_min - 0.01, &p),
            Err(Error::BelowGround { .. })
        ));
    }

    #[test]
    fn census_region_i() {
        let p = region_i();
        let ce = critical_energies(&p);
        let found = detect_discontinuities(&p, ce.eps_min, ce.eps_plus + 0.4).unwrap();
        assert_eq!(found.len(), 1, "census: {found:?}");
        assert_eq!(found[0].kind, DiscontinuityKind::Jump);
        assert_abs_diff_eq!(found[0].eps, ce.eps_plus, epsilon = 1e-3);
    }

    #[test]
    fn census_region_ii() {
        let p = region_ii();
        let ce = critical_energies(&p);
        let found = detect_discontinuities(&p, ce.eps_min, ce.eps_plus + 0.4).unwrap();
        assert_eq!(found.len(), 2, "census: {found:?}");
        assert_eq!(found[0].kind, DiscontinuityKind::Logarithmic);
        assert_abs_diff_eq!(found[0].eps, ce.eps_minus, epsilon = 1e-3);
        assert_eq!(found[1].kind, DiscontinuityKind::Jump);
        assert_abs_diff_eq!(found[1].eps, ce.eps_plus, epsilon = 1e-3);
    }

    #[test]
    fn census_region_iii() {
        let p = region_iii();
        let ce = critical_energies(&p);
        let found = detect_discontinuities(&p, ce.eps_min, ce.eps_plus + 0.4).unwrap();
        assert_eq!(found.len(), 3, "census: {found:?}");
        assert_eq!(found[0].kind, DiscontinuityKind::Logarithmic);
        assert_abs_diff_eq!(found[0].eps, ce.eps_s.unwrap(), epsilon = 1e-3);
        assert_eq!(found[1].kind, DiscontinuityKind::Jump);
        assert_abs_diff_eq!(found[1].eps, ce.eps_minus, epsilon = 1e-3);
        assert_eq!(found[2].kind, DiscontinuityKind::Jump);
        assert_abs_diff_eq!(found[2].eps, ce.eps_plus, epsilon = 1e-3);
    }

    #[test]
    fn dos_curve_reports_branches_and_census() {
        let p = region_ii();
        let grid = default_energy_grid(&p);
        let curve = dos_curve(&grid, &p).unwrap();
        assert_eq!(curve.points.len(), grid.len());
        assert!(curve.points[0].nu < 1e-6);
        assert_eq!(curve.points.last().unwrap().nu, 1.0);
        let mut prev = 0;
        for pt in &curve.points {
            assert!(pt.nu.is_finite() && pt.derivative.is_finite());
            assert!(pt.subregion >= prev, "branch index went backwards");
            prev = pt.subregion;
        }
        assert_eq!(prev, 2);
        assert_eq!(curve.discontinuities.len(), 2);
    }

    #[test]
    fn dos_curve_rejects_bad_grids() {
        let p = region_ii();
        assert!(dos_curve(&[0.0], &p).is_err());
        assert!(dos_curve(&[0.0, 0.0], &p).is_err());
        assert!(dos_curve(&[0.3, 0.1], &p).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn dos_stays_in_unit_interval_and_monotone(
            omega in 0.5f64..2.0,
            omega0 in 0.5f64..2.0,
            gamma in 0.0f64..1.2,
            eta in 0.0f64..2.5,
            fa in 0.0f64..1.0,
            fb in 0.0f64..1.0,
        ) {
            let p = ModelParams::new(omega, omega0, gamma, eta, 10.0).unwrap();
            let ce = critical_energies(&p);
            let span = ce.eps_plus + 0.5 - ce.eps_min;
            let e1 = ce.eps_min + fa.min(fb) * span;
            let e2 = ce.eps_min + fa.max(fb) * span;
            let n1 = dos(e1, &p).unwrap();
            let n2 = dos(e2, &p).unwrap();
            prop_assert!((-1e-9..=1.0 + 1e-9).contains(&n1));
            prop_assert!((-1e-9..=1.0 + 1e-9).contains(&n2));
            prop_assert!(n2 >= n1 - 1e-7);
        }
    }
}
