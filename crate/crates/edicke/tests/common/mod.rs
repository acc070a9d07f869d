//! Self-contained numerical utilities for the acceptance suite.
//!
//! Everything here is deliberately independent of the library under test:
//! a cyclic Jacobi eigensolver, a Nelder-Mead minimizer, finite-difference
//! derivatives, and a dense product-basis Hamiltonian assembled from
//! explicit operator matrices. They provide second routes to the same
//! numbers so that agreement is meaningful.

pub type Mat = Vec<Vec<f64>>;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(mut a: Mat) -> Vec<f64> {
    let n = a.len();
    if n == 0 {
        return Vec::new();
    }
    let norm: f64 = a
        .iter()
        .flat_map(|row| row.iter())
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    let target = (norm * 1e-15).max(f64::MIN_POSITIVE);
    for _sweep in 0..60 {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= target {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    1.0 / (theta - (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Derivative-free Nelder-Mead minimization from one start point.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: &F,
    x0: &[f64],
    step: f64,
    max_iter: usize,
) -> (Vec<f64>, f64) {
    let d = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.to_vec(), f(x0))];
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += step;
        let fx = f(&x);
        simplex.push((x, fx));
    }
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[d].1;
        if (worst - best).abs() <= 1e-18 * (1.0 + best.abs()) {
            break;
        }
        let centroid: Vec<f64> = (0..d)
            .map(|k| simplex[..d].iter().map(|(x, _)| x[k]).sum::<f64>() / d as f64)
            .collect();
        let through = |coef: f64| -> Vec<f64> {
            (0..d)
                .map(|k| centroid[k] + coef * (centroid[k] - simplex[d].0[k]))
                .collect()
        };
        let reflected = through(1.0);
        let fr = f(&reflected);
        if fr < best {
            let expanded = through(2.0);
            let fe = f(&expanded);
            simplex[d] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[d - 1].1 {
            simplex[d] = (reflected, fr);
        } else {
            let contracted = through(-0.5);
            let fc = f(&contracted);
            if fc < worst {
                simplex[d] = (contracted, fc);
            } else {
                let anchor = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = (0..d)
                        .map(|k| anchor[k] + 0.5 * (entry.0[k] - anchor[k]))
                        .collect();
                    entry.1 = f(&x);
                    entry.0 = x;
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex[0].clone()
}

/// Central-difference gradient.
pub fn fd_gradient<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let mut hi = x.to_vec();
            let mut lo = x.to_vec();
            hi[i] += h;
            lo[i] -= h;
            (f(&hi) - f(&lo)) / (2.0 * h)
        })
        .collect()
}

/// Central-difference Hessian.
pub fn fd_hessian<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], h: f64) -> Mat {
    let d = x.len();
    let f0 = f(x);
    let mut hess = vec![vec![0.0; d]; d];
    let at = |shifts: &[(usize, f64)]| -> f64 {
        let mut y = x.to_vec();
        for &(i, dx) in shifts {
            y[i] += dx;
        }
        f(&y)
    };
    for i in 0..d {
        hess[i][i] = (at(&[(i, h)]) - 2.0 * f0 + at(&[(i, -h)])) / (h * h);
        for j in (i + 1)..d {
            let mixed = (at(&[(i, h), (j, h)]) - at(&[(i, h), (j, -h)])
                - at(&[(i, -h), (j, h)])
                + at(&[(i, -h), (j, -h)]))
                / (4.0 * h * h);
            hess[i][j] = mixed;
            hess[j][i] = mixed;
        }
    }
    hess
}

pub fn zeros(rows: usize, cols: usize) -> Mat {
    vec![vec![0.0; cols]; rows]
}

/// Kronecker product; row/column index of the result is `i_a * dim_b + i_b`.
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ra, ca) = (a.len(), a[0].len());
    let (rb, cb) = (b.len(), b[0].len());
    let mut out = zeros(ra * rb, ca * cb);
    for ia in 0..ra {
        for ja in 0..ca {
            if a[ia][ja] == 0.0 {
                continue;
            }
            for ib in 0..rb {
                for jb in 0..cb {
                    out[ia * rb + ib][ja * cb + jb] = a[ia][ja] * b[ib][jb];
                }
            }
        }
    }
    out
}

pub fn add_scaled(acc: &mut Mat, coeff: f64, m: &Mat) {
    for (ra, rm) in acc.iter_mut().zip(m) {
        for (a, b) in ra.iter_mut().zip(rm) {
            *a += coeff * b;
        }
    }
}

pub fn identity(dim: usize) -> Mat {
    let mut m = zeros(dim, dim);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

/// Boson number operator on `dim` Fock layers.
pub fn boson_number(dim: usize) -> Mat {
    let mut m = zeros(dim, dim);
    for (n, row) in m.iter_mut().enumerate() {
        row[n] = n as f64;
    }
    m
}

/// Position-like ladder sum `a + a'` on `dim` Fock layers.
pub fn boson_ladder_sum(dim: usize) -> Mat {
    let mut m = zeros(dim, dim);
    for n in 0..dim.saturating_sub(1) {
        let v = ((n + 1) as f64).sqrt();
        m[n + 1][n] = v;
        m[n][n + 1] = v;
    }
    m
}

fn ladder_coeff(j: f64, m: f64) -> f64 {
    (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

/// `J_z` for pseudospin length `j`, basis ascending in `m = -j..=j`.
pub fn spin_jz(j: f64) -> Mat {
    let dim = (2.0 * j).round() as usize + 1;
    let mut m = zeros(dim, dim);
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = k as f64 - j;
    }
    m
}

/// `J_+ + J_-` for pseudospin length `j`.
pub fn spin_ladder_sum(j: f64) -> Mat {
    let dim = (2.0 * j).round() as usize + 1;
    let mut m = zeros(dim, dim);
    for k in 0..dim - 1 {
        let v = ladder_coeff(j, k as f64 - j);
        m[k + 1][k] = v;
        m[k][k + 1] = v;
    }
    m
}

/// Full product-basis Hamiltonian assembled from explicit operator
/// matrices; index `i = n * (2j + 1) + k` with `k = m + j`.
pub fn product_hamiltonian(
    omega: f64,
    omega0: f64,
    gamma: f64,
    eta: f64,
    j: f64,
    n_max: usize,
) -> Mat {
    let nb = n_max + 1;
    let ns = (2.0 * j).round() as usize + 1;
    let nq = 2.0 * j;
    let jz = spin_jz(j);
    let mut jz2 = zeros(ns, ns);
    for (k, row) in jz2.iter_mut().enumerate() {
        row[k] = (k as f64 - j) * (k as f64 - j);
    }
    let mut h = zeros(nb * ns, nb * ns);
    add_scaled(&mut h, omega, &kron(&boson_number(nb), &identity(ns)));
    add_scaled(&mut h, omega0, &kron(&identity(nb), &jz));
    add_scaled(
        &mut h,
        gamma / nq.sqrt(),
        &kron(&boson_ladder_sum(nb), &spin_ladder_sum(j)),
    );
    add_scaled(&mut h, eta / nq, &kron(&identity(nb), &jz2));
    h
}
