use std::time::Instant;

use edicke::spectrum::{
    averaged_dos, compute_spectrum, BasisKind, BasisSpec, Parity, SpectrumResult,
    DEFAULT_CONVERGENCE_TOL, DEFAULT_MAX_DIM,
};
use edicke::{Error, ModelParams};
use serde_json::json;

use crate::config::{resolve, FileConfig};
use crate::emit::{config_json, num, write_bytes, write_json, Csv};
use crate::{AppError, Shared};

#[derive(clap::Args)]
pub struct SpectrumArgs {
    /// Boson cutoff: layers n = 0..=n-max are kept (default 300)
    #[arg(long)]
    n_max: Option<usize>,
    /// Parity block to diagonalize: +1, -1 or both (default +1)
    #[arg(long, allow_hyphen_values = true)]
    parity: Option<String>,
    /// Basis: bare or displaced (default bare)
    #[arg(long)]
    basis: Option<String>,
    /// Top-layer weight bound of the convergence filter (default 1e-12)
    #[arg(long)]
    conv_tol: Option<f64>,
    /// Guard on the block dimension (default 10000)
    #[arg(long)]
    max_dim: Option<usize>,
    /// Window size; when set, averaged_dos.csv is written from the
    /// converged states of all requested blocks
    #[arg(long)]
    window: Option<usize>,
    /// Persist eigenvectors as row-major f64 little-endian binaries
    #[arg(long)]
    eigenvectors: bool,
}

pub struct Resolved {
    pub n_max: usize,
    pub parities: Vec<Parity>,
    pub kind: BasisKind,
    pub conv_tol: f64,
    pub max_dim: usize,
}

pub fn resolve_basis(
    shared: &Shared,
    file: &FileConfig,
    sec: &str,
    n_max: Option<usize>,
    parity: Option<&String>,
    basis: Option<&String>,
    conv_tol: Option<f64>,
    max_dim: Option<usize>,
) -> Result<(Resolved, Vec<(String, String)>), AppError> {
    let n_max = resolve(n_max, file, sec, "n-max")?.unwrap_or(300);
    let parity_label =
        resolve(parity.cloned(), file, sec, "parity")?.unwrap_or_else(|| "+1".to_string());
    let basis_label =
        resolve(basis.cloned(), file, sec, "basis")?.unwrap_or_else(|| "bare".to_string());
    let conv_tol = resolve(conv_tol, file, sec, "conv-tol")?.unwrap_or(DEFAULT_CONVERGENCE_TOL);
    let max_dim = resolve(max_dim, file, sec, "max-dim")?.unwrap_or(DEFAULT_MAX_DIM);

    let parities = match parity_label.as_str() {
        "+1" | "1" | "plus" => vec![Parity::Plus],
        "-1" | "minus" => vec![Parity::Minus],
        "both" => vec![Parity::Plus, Parity::Minus],
        other => {
            return Err(AppError::Usage(format!(
                "--parity must be +1, -1 or both, not {other}"
            )))
        }
    };
    let kind = match basis_label.as_str() {
        "bare" => BasisKind::BareFock,
        "displaced" => BasisKind::DisplacedFock,
        other => {
            return Err(AppError::Usage(format!(
                "--basis must be bare or displaced, not {other}"
            )))
        }
    };
    let mut kvs = shared.kvs();
    kvs.extend([
        ("n-max".to_string(), n_max.to_string()),
        ("parity".to_string(), parity_label),
        ("basis".to_string(), basis_label),
        ("conv-tol".to_string(), format!("{conv_tol:e}")),
        ("max-dim".to_string(), max_dim.to_string()),
    ]);
    Ok((
        Resolved {
            n_max,
            parities,
            kind,
            conv_tol,
            max_dim,
        },
        kvs,
    ))
}

/// Builds the block's basis spec, turning the dimension guard into a usage
/// error with an actionable cutoff suggestion.
pub fn guarded_spec(j: f64, res: &Resolved, parity: Parity) -> Result<BasisSpec, AppError> {
    BasisSpec::new(j, res.n_max, parity, res.kind)
        .and_then(|s| s.with_max_dim(res.max_dim))
        .map_err(|e| match e {
            Error::DimensionGuard { dim, max } => {
                let suggestion = (res.n_max * max) / dim;
                AppError::Usage(format!(
                    "{parity:?} block dimension {dim} exceeds the guard {max}; \
                     try --n-max {suggestion} or raise --max-dim"
                ))
            }
            other => other.into(),
        })
}

pub fn parity_label(parity: Parity) -> &'static str {
    match parity {
        Parity::Plus => "+1",
        Parity::Minus => "-1",
    }
}

pub fn run(shared: &Shared, file: &FileConfig, args: &SpectrumArgs) -> Result<(), AppError> {
    let sec = "spectrum";
    let p = shared.params()?;
    let (res, mut kvs) = resolve_basis(
        shared,
        file,
        sec,
        args.n_max,
        args.parity.as_ref(),
        args.basis.as_ref(),
        args.conv_tol,
        args.max_dim,
    )?;
    let window = resolve(args.window, file, sec, "window")?;
    let eigenvectors =
        args.eigenvectors || resolve::<bool>(None, file, sec, "eigenvectors")?.unwrap_or(false);
    if let Some(w) = window {
        kvs.push(("window".to_string(), w.to_string()));
    }

    let started = Instant::now();
    let mut csv = Csv::new("spectrum", &kvs);
    csv.header(&[
        "index",
        "energy",
        "eps_scaled",
        "jz_scaled",
        "converged",
        "residual",
    ]);
    let mut blocks = Vec::new();
    let mut merged_converged = Vec::new();
    let mut start = 0usize;
    for &parity in &res.parities {
        let spec = guarded_spec(shared.j, &res, parity)?;
        let (result, pairs) = compute_spectrum(&p, &spec, res.conv_tol)?;
        append_rows(&mut csv, &result, &p, start);
        if window.is_some() {
            merged_converged.extend(
                result
                    .eigenvalues
                    .iter()
                    .zip(&result.converged)
                    .filter(|(_, &c)| c)
                    .map(|(&e, _)| e),
            );
        }
        let label = parity_label(parity);
        if eigenvectors {
            let tag = match parity {
                Parity::Plus => "plus",
                Parity::Minus => "minus",
            };
            let mut bytes = Vec::with_capacity(pairs.vectors.len() * 8);
            for v in &pairs.vectors {
                bytes.extend_from_slice(&v.to_le_bytes());
            }
            write_bytes(&shared.path(&format!("spectrum_vectors_{tag}.bin")), &bytes)?;
            let sidecar = json!({
                "rows": pairs.dim,
                "cols": pairs.dim,
                "ordering": "row-major, one eigenvector per row, ascending energy, f64 little-endian",
                "parity": label,
                "config": config_json(&kvs),
            });
            write_json(
                &shared.path(&format!("spectrum_vectors_{tag}.json")),
                &sidecar,
            )?;
        }
        let dim = result.eigenvalues.len();
        blocks.push(json!({
            "parity": label,
            "start": start,
            "len": dim,
            "converged": result.converged.iter().filter(|&&c| c).count(),
        }));
        start += dim;
    }
    csv.write(&shared.path("spectrum.csv"))?;

    if let Some(w) = window {
        merged_converged.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let avg = averaged_dos(&merged_converged, &p, w)?;
        let mut csv = Csv::new("spectrum", &kvs);
        csv.header(&["eps_bar", "nu_bar"]);
        for pt in &avg.points {
            csv.row(&[num(pt.eps_bar), num(pt.nu_bar)]);
        }
        csv.write(&shared.path("averaged_dos.csv"))?;
    }

    // wall_time_ms is informational and exempt from byte-identity
    let meta = json!({
        "config": config_json(&kvs),
        "blocks": blocks,
        "wall_time_ms": started.elapsed().as_millis() as u64,
    });
    write_json(&shared.path("spectrum_meta.json"), &meta)
}

pub fn append_rows(csv: &mut Csv, result: &SpectrumResult, p: &ModelParams, start: usize) {
    for (k, &e) in result.eigenvalues.iter().enumerate() {
        csv.row(&[
            (start + k).to_string(),
            num(e),
            num(p.scaled_energy(e)),
            num(result.jz_expect[k] / p.j),
            result.converged[k].to_string(),
            num(result.residuals[k]),
        ]);
    }
}
