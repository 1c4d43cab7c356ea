use serde::Serialize;
use sparsefair_core::sparsity::measure_vector;
use sparsefair_core::{Measure, NonNegVector};

use crate::args::{MeasureArg, SurfaceArgs};
use crate::config::measure_from;
use crate::error::{CliError, CliResult};
use crate::output;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub w1: f64,
    pub w2: f64,
    pub value: f64,
}

/// Measure of `[w1, w2, 1 - w1 - w2]`.
pub fn simplex_value(w1: f64, w2: f64, measure: &Measure) -> CliResult<f64> {
    let w3 = (1.0 - w1 - w2).max(0.0);
    Ok(measure_vector(&NonNegVector::new(vec![w1, w2, w3])?, measure)?.value)
}

/// Grid `w1 = i / (r - 1)`, `w2 = j / (r - 1)` over `i + j <= r - 1`.
pub fn surface_grid(resolution: usize, measure: &Measure) -> CliResult<Vec<SurfacePoint>> {
    if resolution < 2 {
        return Err(CliError::Usage(format!("resolution must be >= 2, got {resolution}")));
    }
    let steps = resolution - 1;
    let mut out = Vec::with_capacity(resolution * (resolution + 1) / 2);
    for i in 0..=steps {
        for j in 0..=steps - i {
            let (w1, w2) = (i as f64 / steps as f64, j as f64 / steps as f64);
            out.push(SurfacePoint {
                w1,
                w2,
                value: simplex_value(w1, w2, measure)?,
            });
        }
    }
    Ok(out)
}

pub fn run(args: &SurfaceArgs) -> CliResult<i32> {
    if args.measure == MeasureArg::Mpd {
        return Err(CliError::Usage("surface supports --measure gini or pq".into()));
    }
    let measure = measure_from(args.measure, args.p, args.q)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for point in surface_grid(args.resolution, &measure)? {
        w.serialize(point)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    output::emit(args.output.as_deref(), "surface.csv", &bytes)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchors() {
        let third = 1.0 / 3.0;
        for m in [Measure::Gini, Measure::Pq { p: 1.0, q: 2.0 }] {
            assert!(simplex_value(third, third, &m).unwrap().abs() < 1e-12);
        }
        assert!((simplex_value(1.0, 0.0, &Measure::Gini).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((simplex_value(0.5, 0.3, &Measure::Gini).unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn grid_covers_simplex() {
        let g = surface_grid(4, &Measure::Gini).unwrap();
        assert_eq!(g.len(), 10);
        assert!(g.iter().all(|p| p.w1 + p.w2 <= 1.0 + 1e-15));
        assert!(surface_grid(1, &Measure::Gini).is_err());
    }
}
