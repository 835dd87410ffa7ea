use tmsv_metrology::optimizer::log_grid;
use tmsv_metrology::LossModel;

use crate::args::{FigureArgs, FigureId, Losses};
use crate::record::{evaluate_all, OutputRecord, Point};
use crate::CliError;

const BOTH_MODELS: [LossModel; 2] = [LossModel::TwoArm, LossModel::OneArm];
const FIG4_ETAS: [f64; 4] = [0.99, 0.98, 0.97, 0.96];

pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect()
}

fn point(n: f64, eta: f64, model: LossModel, total: Option<f64>) -> Result<Point, CliError> {
    Ok(Point { n, losses: Losses::from_model(eta, model)?, phi: None, total })
}

/// Rows of the requested figure in a fixed order: outer loop over curves, inner over the axis.
pub fn figure(args: &FigureArgs) -> Result<Vec<OutputRecord>, CliError> {
    let points = args.points.unwrap_or(match args.id {
        FigureId::Fig3Left => 20,
        FigureId::Fig4 => 200,
        _ => 100,
    });
    if points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let mut grid = Vec::new();
    match args.id {
        FigureId::Fig2Left => {
            let eta = args.eta.unwrap_or(0.8);
            for model in BOTH_MODELS {
                for n in log_grid(1.0, 100.0, points) {
                    grid.push(point(n, eta, model, None)?);
                }
            }
        }
        FigureId::Fig2Right => {
            let n = args.n.unwrap_or(10.0);
            for model in BOTH_MODELS {
                for eta in linear_grid(0.01, 1.0, points) {
                    grid.push(point(n, eta, model, None)?);
                }
            }
        }
        FigureId::Fig3Left => {
            for eta in linear_grid(0.9, 0.999, points) {
                for n in linear_grid(1.0, 100.0, points) {
                    grid.push(point(n, eta, LossModel::OneArm, None)?);
                }
            }
        }
        FigureId::Fig3Right => {
            let eta = args.eta.unwrap_or(0.99);
            for n in log_grid(1.0, 100.0, points) {
                grid.push(point(n, eta, LossModel::OneArm, None)?);
            }
        }
        FigureId::Fig4 => {
            let total = args.total.unwrap_or(200.0);
            if !(total > 0.1) {
                return Err(CliError::Usage(format!("--N must exceed 0.1, got {total}")));
            }
            let etas = args.eta.map_or(FIG4_ETAS.to_vec(), |e| vec![e]);
            for eta in etas {
                for n in log_grid(0.1, total, points) {
                    grid.push(point(n, eta, LossModel::OneArm, Some(total))?);
                }
            }
        }
    }
    evaluate_all(&grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(id: FigureId) -> FigureArgs {
        FigureArgs { id, eta: None, n: None, total: None, points: None }
    }

    #[test]
    fn fig4_has_interior_minimum() {
        let rows = figure(&FigureArgs { eta: Some(0.99), ..args(FigureId::Fig4) }).unwrap();
        assert_eq!(rows.len(), 200);
        let best = rows
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.delta_phi_repeated.total_cmp(&b.1.delta_phi_repeated))
            .unwrap()
            .0;
        assert!(best > 0 && best < rows.len() - 1);
    }

    #[test]
    fn fig2_right_covers_both_models() {
        let rows = figure(&FigureArgs { points: Some(5), ..args(FigureId::Fig2Right) }).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows[..5].iter().all(|r| r.eta1 == r.eta2));
        assert!(rows[5..].iter().all(|r| r.eta2 == 1.0));
    }
}
