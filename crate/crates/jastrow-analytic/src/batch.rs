//! CSV batch evaluation: one configuration per row, N*m position columns.

use std::io::{Read, Write};

use crate::checks::finite_diff_laplacian_check;
use crate::error::{JastrowError, Result};
use crate::eval::{dunkl_apply, groundstate_energy, local_energy};
use crate::model::{Domain, JastrowModel, ParticleConfiguration};

#[derive(Debug, Clone, PartialEq)]
pub struct BatchRow {
    pub row: usize,
    pub local_energy: f64,
    /// local energy minus the closed-form ground-state energy.
    pub residual: f64,
    /// max_j |(D_j Omega) / Omega|, periodic model only.
    pub dunkl_max: Option<f64>,
    /// worst relative Laplacian FD error, when the configuration leaves room for the stencil.
    pub laplacian_fd: Option<f64>,
}

fn domain_of(model: &JastrowModel) -> Domain {
    match model {
        JastrowModel::Cms { length, .. } => Domain::Circle(*length),
        _ => Domain::FullLine,
    }
}

pub fn evaluate_configuration(model: &JastrowModel, config: &ParticleConfiguration, row: usize) -> Result<BatchRow> {
    let e = local_energy(model, config)?;
    let dunkl_max = match model {
        JastrowModel::Cms { .. } => {
            let mut worst: f64 = 0.0;
            for j in 0..config.n_particles() {
                worst = worst.max(dunkl_apply(model, config, j)?.abs());
            }
            Some(worst)
        }
        _ => None,
    };
    let laplacian_fd = finite_diff_laplacian_check(model, config).ok().map(|r| r.worst());
    Ok(BatchRow { row, local_energy: e, residual: e - groundstate_energy(model), dunkl_max, laplacian_fd })
}

/// Reads configurations from headerless CSV. Blank lines are skipped.
pub fn read_configurations<R: Read>(model: &JastrowModel, input: R) -> Result<Vec<ParticleConfiguration>> {
    let width = model.n_particles() * model.dim();
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(input);
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != width {
            return Err(JastrowError::Invalid(format!("row {i}: {} columns, expected {width}", record.len())));
        }
        let coords = record
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| JastrowError::Invalid(format!("row {i}: {s:?}: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        out.push(ParticleConfiguration::from_flat(coords, model.dim(), domain_of(model))?);
    }
    Ok(out)
}

pub fn evaluate_batch(model: &JastrowModel, configs: &[ParticleConfiguration]) -> Result<Vec<BatchRow>> {
    configs.iter().enumerate().map(|(i, c)| evaluate_configuration(model, c, i)).collect()
}

pub fn write_batch<W: Write>(rows: &[BatchRow], output: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(output);
    w.write_record(["row", "local_energy", "residual", "dunkl_max", "laplacian_fd"])?;
    let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.row.to_string(),
            format!("{:.17e}", r.local_energy),
            format!("{:e}", r.residual),
            opt(r.dunkl_max),
            opt(r.laplacian_fd),
        ])?;
    }
    w.flush().map_err(|e| JastrowError::Csv(e.to_string()))
}

/// Reads, evaluates and writes in one pass.
pub fn run_batch<R: Read, W: Write>(model: &JastrowModel, input: R, output: W) -> Result<Vec<BatchRow>> {
    let configs = read_configurations(model, input)?;
    let rows = evaluate_batch(model, &configs)?;
    write_batch(&rows, output)?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = JastrowModel::cms(1.0, std::f64::consts::PI, 2).unwrap();
        let input = "0.0, 1.5707963267948966\n\n0.3,2.0\n";
        let mut out = Vec::new();
        let rows = run_batch(&m, input.as_bytes(), &mut out).unwrap();
        assert_eq!(rows.len(), 2);
        for r in &rows {
            assert!(r.residual.abs() < 1e-12);
            assert!(r.dunkl_max.unwrap() < 1e-12);
        }
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("row,local_energy"));
    }

    #[test]
    fn wrong_width_and_garbage() {
        let m = JastrowModel::oscillator_1d(1.0, 2).unwrap();
        assert!(read_configurations(&m, "1,2,3\n".as_bytes()).is_err());
        assert!(read_configurations(&m, "1,abc\n".as_bytes()).is_err());
        let rows = run_batch(&m, "0.5,-0.5\n".as_bytes(), Vec::new()).unwrap();
        assert!(rows[0].dunkl_max.is_none());
    }

    #[test]
    fn coincident_row_is_an_error() {
        let m = JastrowModel::rational(2.0, 2).unwrap();
        assert!(matches!(run_batch(&m, "1.0,1.0\n".as_bytes(), Vec::new()), Err(JastrowError::Singular { .. })));
    }
}
