use edicke::dos::{default_energy_grid, dos_curve, DiscontinuityKind};
use edicke::critical_energies;
use serde_json::json;

use super::linspace;
use crate::config::{resolve, FileConfig};
use crate::emit::{config_json, num, write_json, Csv};
use crate::{AppError, Shared};

#[derive(clap::Args)]
pub struct DosArgs {
    /// Lowest scaled energy of the grid (default: a region-adapted grid)
    #[arg(long, allow_hyphen_values = true)]
    eps_min: Option<f64>,
    /// Highest scaled energy of the grid
    #[arg(long, allow_hyphen_values = true)]
    eps_max: Option<f64>,
    /// Number of grid points (default 400)
    #[arg(long)]
    eps_steps: Option<usize>,
}

pub fn run(shared: &Shared, file: &FileConfig, args: &DosArgs) -> Result<(), AppError> {
    let sec = "dos";
    let p = shared.params()?;
    let eps_min = resolve(args.eps_min, file, sec, "eps-min")?;
    let eps_max = resolve(args.eps_max, file, sec, "eps-max")?;
    let eps_steps = resolve(args.eps_steps, file, sec, "eps-steps")?;

    let mut kvs = shared.kvs();
    let grid = match (eps_min, eps_max) {
        (None, None) => {
            if let Some(n) = eps_steps {
                return Err(AppError::Usage(format!(
                    "--eps-steps {n} needs --eps-min and --eps-max"
                )));
            }
            default_energy_grid(&p)
        }
        (Some(lo), Some(hi)) => {
            let n = eps_steps.unwrap_or(400);
            kvs.extend([
                ("eps-min".to_string(), lo.to_string()),
                ("eps-max".to_string(), hi.to_string()),
                ("eps-steps".to_string(), n.to_string()),
            ]);
            linspace(lo, hi, n)?
        }
        _ => {
            return Err(AppError::Usage(
                "--eps-min and --eps-max must be given together".into(),
            ))
        }
    };

    let curve = dos_curve(&grid, &p)?;

    let mut csv = Csv::new("dos", &kvs);
    csv.header(&["eps", "nu_scaled", "derivative", "subregion"]);
    for pt in &curve.points {
        csv.row(&[
            num(pt.eps),
            num(pt.nu),
            num(pt.derivative),
            pt.subregion.to_string(),
        ]);
    }
    csv.write(&shared.path("dos.csv"))?;

    let ce = critical_energies(&p);
    let discs: Vec<_> = curve
        .discontinuities
        .iter()
        .map(|d| {
            json!({
                "eps": d.eps,
                "kind": match d.kind {
                    DiscontinuityKind::Jump => "jump",
                    DiscontinuityKind::Logarithmic => "logarithmic",
                },
            })
        })
        .collect();
    let report = json!({
        "config": config_json(&kvs),
        "critical_energies": {
            "eps_min": ce.eps_min,
            "eps_minus": ce.eps_minus,
            "eps_plus": ce.eps_plus,
            "eps_s": ce.eps_s,
        },
        "discontinuities": discs,
    });
    write_json(&shared.path("dos_discontinuities.json"), &report)
}
