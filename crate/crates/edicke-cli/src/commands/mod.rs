pub mod dos;
pub mod oracle;
pub mod peres;
pub mod poincare;
pub mod regions;
pub mod spectrum;

use crate::AppError;

/// `n` evenly spaced values from `min` to `max` inclusive; `[min]` for `n = 1`.
pub fn linspace(min: f64, max: f64, n: usize) -> Result<Vec<f64>, AppError> {
    if n == 0 {
        return Err(AppError::Usage("grid needs at least one point".into()));
    }
    if !(min.is_finite() && max.is_finite()) || max < min {
        return Err(AppError::Usage(format!("bad grid range [{min}, {max}]")));
    }
    if n == 1 {
        return Ok(vec![min]);
    }
    let step = (max - min) / (n - 1) as f64;
    Ok((0..n).map(|i| min + step * i as f64).collect())
}
