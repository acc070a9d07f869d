use std::fs;
use std::path::{Path, PathBuf};

use edicke::spectrum::{compute_spectrum, peres_lattice};

use super::spectrum::{guarded_spec, resolve_basis};
use crate::config::{resolve, FileConfig};
use crate::emit::{num, Csv};
use crate::{AppError, Shared};

#[derive(clap::Args)]
pub struct PeresArgs {
    /// Reuse a completed spectrum.csv instead of diagonalizing inline
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Boson cutoff for the inline diagonalization (default 300)
    #[arg(long)]
    n_max: Option<usize>,
    /// Parity block: +1, -1 or both (default +1)
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
}

pub fn run(shared: &Shared, file: &FileConfig, args: &PeresArgs) -> Result<(), AppError> {
    let sec = "peres";
    let input = resolve(args.input.clone(), file, sec, "input")?;

    let mut rows = Vec::new();
    let mut kvs;
    if let Some(path) = input {
        kvs = shared.kvs();
        kvs.push(("input".to_string(), path.display().to_string()));
        rows = parse_spectrum_csv(&path)?;
    } else {
        let p = shared.params()?;
        let (res, resolved_kvs) = resolve_basis(
            shared,
            file,
            sec,
            args.n_max,
            args.parity.as_ref(),
            args.basis.as_ref(),
            args.conv_tol,
            args.max_dim,
        )?;
        kvs = resolved_kvs;
        for &parity in &res.parities {
            let spec = guarded_spec(shared.j, &res, parity)?;
            let (result, _) = compute_spectrum(&p, &spec, res.conv_tol)?;
            rows.extend(
                peres_lattice(&result, &p)
                    .into_iter()
                    .map(|pt| (pt.eps, pt.jz, pt.converged)),
            );
        }
    }

    let mut csv = Csv::new("peres", &kvs);
    csv.header(&["eps_scaled", "jz_scaled", "converged"]);
    for (eps, jz, converged) in rows {
        csv.row(&[num(eps), num(jz), converged.to_string()]);
    }
    csv.write(&shared.path("peres.csv"))
}

/// Reads `eps_scaled`, `jz_scaled` and `converged` back out of a previously
/// written spectrum.csv, tolerating leading `#` config comments.
fn parse_spectrum_csv(path: &Path) -> Result<Vec<(f64, f64, bool)>, AppError> {
    let text = fs::read_to_string(path).map_err(|e| {
        AppError::Run(format!("missing spectrum input {}: {e}", path.display()))
    })?;
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| AppError::Run(format!("{}: no header row", path.display())))?;
    let cols: Vec<&str> = header.split(',').collect();
    let col = |name: &str| {
        cols.iter().position(|&c| c == name).ok_or_else(|| {
            AppError::Run(format!("{}: no `{name}` column in header", path.display()))
        })
    };
    let (i_eps, i_jz, i_conv) = (col("eps_scaled")?, col("jz_scaled")?, col("converged")?);
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        let field = |i: usize| {
            fields.get(i).copied().ok_or_else(|| {
                AppError::Run(format!("{}: data row {k} is too short", path.display()))
            })
        };
        let parse_err =
            |e| AppError::Run(format!("{}: bad value in data row {k}: {e}", path.display()));
        rows.push((
            field(i_eps)?.parse::<f64>().map_err(|e| parse_err(e.to_string()))?,
            field(i_jz)?.parse::<f64>().map_err(|e| parse_err(e.to_string()))?,
            field(i_conv)?.parse::<bool>().map_err(|e| parse_err(e.to_string()))?,
        ));
    }
    if rows.is_empty() {
        return Err(AppError::Run(format!("{}: no data rows", path.display())));
    }
    Ok(rows)
}
