use edicke::{auxiliary_f, classify_region, ModelParams};

use super::linspace;
use crate::config::{resolve, FileConfig};
use crate::emit::{num, Csv};
use crate::{AppError, Shared};

#[derive(clap::Args)]
pub struct RegionsArgs {
    /// Smallest coupling of the sweep
    #[arg(long)]
    gamma_min: Option<f64>,
    /// Largest coupling of the sweep
    #[arg(long)]
    gamma_max: Option<f64>,
    /// Number of coupling grid points
    #[arg(long)]
    gamma_steps: Option<usize>,
    /// Smallest interaction strength of the sweep
    #[arg(long, allow_hyphen_values = true)]
    eta_min: Option<f64>,
    /// Largest interaction strength of the sweep
    #[arg(long, allow_hyphen_values = true)]
    eta_max: Option<f64>,
    /// Number of interaction grid points
    #[arg(long)]
    eta_steps: Option<usize>,
}

pub fn run(shared: &Shared, file: &FileConfig, args: &RegionsArgs) -> Result<(), AppError> {
    let sec = "regions";
    let gamma_min = resolve(args.gamma_min, file, sec, "gamma-min")?.unwrap_or(0.0);
    let gamma_max = resolve(args.gamma_max, file, sec, "gamma-max")?.unwrap_or(1.0);
    let gamma_steps = resolve(args.gamma_steps, file, sec, "gamma-steps")?.unwrap_or(51);
    let eta_min = resolve(args.eta_min, file, sec, "eta-min")?.unwrap_or(0.0);
    let eta_max = resolve(args.eta_max, file, sec, "eta-max")?.unwrap_or(3.0);
    let eta_steps = resolve(args.eta_steps, file, sec, "eta-steps")?.unwrap_or(61);

    let gammas = linspace(gamma_min, gamma_max, gamma_steps)?;
    let etas = linspace(eta_min, eta_max, eta_steps)?;

    let mut kvs = shared.kvs();
    kvs.extend([
        ("gamma-min".to_string(), gamma_min.to_string()),
        ("gamma-max".to_string(), gamma_max.to_string()),
        ("gamma-steps".to_string(), gamma_steps.to_string()),
        ("eta-min".to_string(), eta_min.to_string()),
        ("eta-max".to_string(), eta_max.to_string()),
        ("eta-steps".to_string(), eta_steps.to_string()),
    ]);
    let mut csv = Csv::new("regions", &kvs);
    csv.header(&["gamma", "eta", "f", "region"]);
    for &gamma in &gammas {
        for &eta in &etas {
            let p = ModelParams::new(shared.omega, shared.omega0, gamma, eta, shared.j)?;
            let f = auxiliary_f(&p);
            let region = classify_region(&p);
            csv.row(&[num(gamma), num(eta), num(f), region.to_string()]);
        }
    }
    csv.write(&shared.path("regions.csv"))
}
