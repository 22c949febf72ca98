//! CSV writers. Floats are written in Rust's shortest round-trip form, so
//! identical results give byte-identical files.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::Result;
use crate::mesh::{AxiMesh, ScalarField};
use crate::sweep::{FidelityResult, SweepRow};
use crate::thermal::TemperatureHistory;

pub const FIDELITY_HEADER: [&str; 7] = ["P_o_W", "eta_mw", "T_B_K", "T_av_K", "n_bar", "C", "F"];

fn fidelity_fields(r: &FidelityResult) -> [String; 7] {
    [r.p_o, r.eta_mw, r.t_b, r.t_av, r.n_bar_mw, r.c, r.f].map(|v| v.to_string())
}

/// Writes any table of numbers under `header`.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_fidelity_rows(path: &Path, rows: &[FidelityResult]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(FIDELITY_HEADER)?;
    for r in rows {
        w.write_record(fidelity_fields(r))?;
    }
    w.flush()?;
    Ok(())
}

/// Thickness sweeps prepend a `thickness_m` column. Failed rows are skipped.
pub fn write_thickness_rows(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(std::iter::once("thickness_m").chain(FIDELITY_HEADER))?;
    for row in rows {
        if let Ok(r) = &row.result {
            w.write_record(std::iter::once(row.thickness.to_string()).chain(fidelity_fields(r)))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_history(path: &Path, hist: &TemperatureHistory) -> Result<()> {
    let rows: Vec<Vec<f64>> = hist.times.iter().zip(&hist.mode_avg_temperature).map(|(t, v)| vec![*t, *v]).collect();
    write_table(path, &["t_s", "T_av_K"], &rows)
}

pub fn write_field(path: &Path, mesh: &AxiMesh, field: &ScalarField) -> Result<()> {
    let rows: Vec<Vec<f64>> = mesh.cells.iter().zip(field.values()).map(|(c, t)| vec![c.r, c.z, *t]).collect();
    write_table(path, &["r_m", "z_m", "T_K"], &rows)
}

/// Named scalar results as `name,value` rows, sorted by name.
pub fn write_metrics(path: &Path, metrics: &BTreeMap<String, f64>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["name", "value"])?;
    for (k, v) in metrics {
        w.write_record([k.clone(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_mesh(path: &Path, mesh: &AxiMesh) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["r_m", "z_m", "volume_m3", "region"])?;
    for c in &mesh.cells {
        w.write_record([c.r.to_string(), c.z.to_string(), c.volume.to_string(), c.region.name().to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fidelity_csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        let r = FidelityResult { p_o: 1e-3, eta_mw: 0.5, t_b: 0.02, t_av: 0.1, n_bar_mw: 0.01, c: 0.1, f: 0.9 };
        write_fidelity_rows(&p, &[r]).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text, "P_o_W,eta_mw,T_B_K,T_av_K,n_bar,C,F\n0.001,0.5,0.02,0.1,0.01,0.1,0.9\n");
    }

    #[test]
    fn mesh_dump_has_one_line_per_cell() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.csv");
        let m = AxiMesh::slab(1e-3, 8, 1e-3).unwrap();
        write_mesh(&p, &m).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().count(), 9);
        assert!(text.starts_with("r_m,z_m,volume_m3,region\n"));
    }

    #[test]
    fn metrics_sorted_by_name() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.csv");
        let m: BTreeMap<String, f64> = [("b".to_string(), 2.5), ("a".to_string(), 1e-7)].into();
        write_metrics(&p, &m).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "name,value\na,0.0000001\nb,2.5\n");
    }
}
