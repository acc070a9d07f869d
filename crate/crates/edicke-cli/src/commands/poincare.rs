use edicke::dynamics::{poincare_section, sample_energy_shell};

use crate::config::{resolve, FileConfig};
use crate::emit::{num, Csv};
use crate::{AppError, Shared};

#[derive(clap::Args)]
pub struct PoincareArgs {
    /// Scaled energy of the shell (required)
    #[arg(long, allow_hyphen_values = true)]
    energy: Option<f64>,
    /// Number of initial conditions drawn from the shell (default 12)
    #[arg(long)]
    n_ics: Option<usize>,
    /// Integration horizon per trajectory (default 200)
    #[arg(long)]
    t_end: Option<f64>,
    /// Integrator tolerance (default 1e-10)
    #[arg(long)]
    tol: Option<f64>,
}

pub fn run(shared: &Shared, file: &FileConfig, args: &PoincareArgs) -> Result<(), AppError> {
    let sec = "poincare";
    let p = shared.params()?;
    let energy = resolve(args.energy, file, sec, "energy")?
        .ok_or_else(|| AppError::Usage("missing --energy (flag or config)".into()))?;
    let n_ics = resolve(args.n_ics, file, sec, "n-ics")?.unwrap_or(12);
    let t_end = resolve(args.t_end, file, sec, "t-end")?.unwrap_or(200.0);
    let tol = resolve(args.tol, file, sec, "tol")?.unwrap_or(1e-10);

    let ics = sample_energy_shell(energy, &p, n_ics, shared.seed)?;
    let series = poincare_section(&ics, &p, t_end, tol)?;

    let mut kvs = shared.kvs();
    kvs.extend([
        ("energy".to_string(), energy.to_string()),
        ("n-ics".to_string(), n_ics.to_string()),
        ("t-end".to_string(), t_end.to_string()),
        ("tol".to_string(), format!("{tol:e}")),
    ]);
    let mut csv = Csv::new("poincare", &kvs);
    csv.header(&["ic_index", "t_cross", "r", "phi", "direction"]);
    for (ic_index, s) in series.iter().enumerate() {
        for pt in &s.points {
            csv.row(&[
                ic_index.to_string(),
                num(pt.t_cross),
                num(pt.r),
                num(pt.phi),
                if pt.upward { "1" } else { "-1" }.to_string(),
            ]);
        }
    }
    csv.write(&shared.path("poincare.csv"))
}
