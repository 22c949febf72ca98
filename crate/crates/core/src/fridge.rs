//! Mixing-chamber temperature as a function of the time-averaged heat load.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::thermal::{PumpMode, PumpSchedule};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FridgeLaw {
    /// Cooling power `κ_f·(T² − T₀²)`, i.e. `T = √(T₀² + P/κ_f)`.
    Quadratic { kappa_f: f64 },
    /// Measured load curve as strictly increasing `(P_W, T_K)` pairs.
    Table(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FridgeModel {
    pub base_temp: f64,
    pub law: FridgeLaw,
}

impl Default for FridgeModel {
    /// Calibrated so that 400 µW is removed at about 100 mK.
    fn default() -> Self {
        FridgeModel { base_temp: 0.02, law: FridgeLaw::Quadratic { kappa_f: 0.04 } }
    }
}

impl FridgeModel {
    /// Table law anchored at `(0, base_temp)`. A leading `P = 0` row, if
    /// present, defines the base temperature instead.
    pub fn from_table(base_temp: f64, mut points: Vec<(f64, f64)>) -> Result<Self> {
        let base = match points.first() {
            Some(&(0.0, t)) => t,
            _ => {
                points.insert(0, (0.0, base_temp));
                base_temp
            }
        };
        let model = FridgeModel { base_temp: base, law: FridgeLaw::Table(points) };
        model.validate()?;
        Ok(model)
    }

    /// Reads a `P_W,T_K` CSV load curve (header required).
    pub fn load_table(path: &Path, base_temp: f64) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path)?;
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "P_W" || &headers[1] != "T_K" {
            return Err(Error::Config(format!("{}: expected header `P_W,T_K`", path.display())));
        }
        let mut points = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let parse = |s: &str| {
                s.trim().parse::<f64>().map_err(|e| Error::Config(format!("{} line {}: {e}", path.display(), line + 2)))
            };
            points.push((parse(&rec[0])?, parse(&rec[1])?));
        }
        Self::from_table(base_temp, points)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.base_temp > 0.0 && self.base_temp.is_finite()) {
            return Err(Error::InvalidParameter("fridge: base_temp must be > 0".into()));
        }
        match &self.law {
            FridgeLaw::Quadratic { kappa_f } if !(*kappa_f > 0.0 && kappa_f.is_finite()) => {
                Err(Error::InvalidParameter("fridge: kappa_f must be > 0".into()))
            }
            FridgeLaw::Quadratic { .. } => Ok(()),
            FridgeLaw::Table(pts) => {
                if pts.len() < 2 {
                    return Err(Error::InvalidParameter("fridge: table needs at least two points".into()));
                }
                if pts[0] != (0.0, self.base_temp) {
                    return Err(Error::InvalidParameter("fridge: table must start at (0, base_temp)".into()));
                }
                if pts.iter().any(|(p, t)| !p.is_finite() || !t.is_finite()) {
                    return Err(Error::InvalidParameter("fridge: non-finite table entry".into()));
                }
                if pts.windows(2).any(|w| !(w[1].0 > w[0].0 && w[1].1 > w[0].1)) {
                    return Err(Error::InvalidParameter("fridge: table must be strictly increasing in P and T".into()));
                }
                Ok(())
            }
        }
    }

    /// Mixing-chamber temperature for a steady heat load `p_diss` (W).
    pub fn boundary_temperature(&self, p_diss: f64) -> Result<f64> {
        if !(p_diss >= 0.0) {
            return Err(Error::NegativePower(p_diss));
        }
        match &self.law {
            FridgeLaw::Quadratic { kappa_f } => Ok((self.base_temp.powi(2) + p_diss / kappa_f).sqrt()),
            FridgeLaw::Table(pts) => {
                let last = pts[pts.len() - 1];
                if p_diss >= last.0 {
                    if p_diss > last.0 {
                        log::warn!("fridge: {p_diss} W beyond load curve (max {} W); clamping", last.0);
                    }
                    return Ok(last.1);
                }
                let k = pts.partition_point(|(p, _)| *p <= p_diss);
                let (p0, t0) = pts[k - 1];
                let (p1, t1) = pts[k];
                Ok(t0 + (t1 - t0) * (p_diss - p0) / (p1 - p0))
            }
        }
    }

    /// Boundary temperature seen by the thermal solve of `sched`: pulsed
    /// pumping keeps the fridge at base temperature.
    pub fn boundary_for(&self, sched: &PumpSchedule) -> Result<f64> {
        match sched.mode {
            PumpMode::Pulsed => Ok(self.base_temp),
            PumpMode::Cw | PumpMode::Instant => self.boundary_temperature(average_heat_load(sched)),
        }
    }
}

/// Time-averaged heat load on the fridge (W).
pub fn average_heat_load(sched: &PumpSchedule) -> f64 {
    match sched.mode {
        PumpMode::Pulsed => sched.duty * sched.dissipated_power(),
        PumpMode::Cw | PumpMode::Instant => sched.dissipated_power(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_law_examples() {
        let f = FridgeModel::default();
        assert_eq!(f.boundary_temperature(0.0).unwrap(), 0.02);
        assert!((f.boundary_temperature(400e-6).unwrap() - 0.10198).abs() < 1e-4);
        assert!((f.boundary_temperature(1e-3).unwrap() - (0.0004f64 + 0.025).sqrt()).abs() < 1e-15);
        assert!((f.boundary_temperature(1e-3).unwrap() - 0.159).abs() < 1e-3);
        assert_eq!(f.boundary_temperature(-1.0), Err(Error::NegativePower(-1.0)));
    }

    #[test]
    fn heat_load_examples() {
        let cw = PumpSchedule::cw(1e-3);
        assert_eq!(average_heat_load(&cw), 1e-3);
        let pulsed = PumpSchedule { mode: PumpMode::Pulsed, ..cw };
        assert!((average_heat_load(&pulsed) - 10e-6).abs() < 1e-18);
        assert_eq!(average_heat_load(&PumpSchedule::cw(0.0)), 0.0);
    }

    #[test]
    fn pulsed_keeps_base_temperature() {
        let f = FridgeModel::default();
        for p in [0.0, 1e-4, 1e-3, 1.0] {
            let s = PumpSchedule { mode: PumpMode::Pulsed, ..PumpSchedule::cw(p) };
            assert_eq!(f.boundary_for(&s).unwrap(), f.base_temp);
        }
    }

    #[test]
    fn table_interpolates_and_clamps() {
        let f = FridgeModel::from_table(0.01, vec![(1e-4, 0.05), (1e-3, 0.15)]).unwrap();
        assert_eq!(f.boundary_temperature(0.0).unwrap(), 0.01);
        assert!((f.boundary_temperature(5e-5).unwrap() - 0.03).abs() < 1e-15);
        assert!((f.boundary_temperature(5.5e-4).unwrap() - 0.10).abs() < 1e-12);
        assert_eq!(f.boundary_temperature(1.0).unwrap(), 0.15);
        assert!(FridgeModel::from_table(0.01, vec![(1e-4, 0.05), (1e-4, 0.06)]).is_err());
        assert!(FridgeModel::from_table(0.01, vec![(1e-4, 0.05), (2e-4, 0.04)]).is_err());
    }

    #[test]
    fn monotone_in_power() {
        let q = FridgeModel::default();
        let t = FridgeModel::from_table(0.02, vec![(1e-4, 0.05), (1e-3, 0.15), (2e-3, 0.2)]).unwrap();
        for f in [q, t] {
            let vals: Vec<f64> = (0..200).map(|k| f.boundary_temperature(k as f64 * 1.5e-5).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[1] >= w[0]));
        }
    }

    #[test]
    fn csv_table() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("load.csv");
        std::fs::write(&path, "P_W,T_K\n0,0.02\n0.0004,0.1\n0.001,0.16\n").unwrap();
        let f = FridgeModel::load_table(&path, 0.5).unwrap();
        assert_eq!(f.base_temp, 0.02);
        assert!((f.boundary_temperature(0.0007).unwrap() - 0.13).abs() < 1e-12);
        std::fs::write(&path, "0,0.02\n1,2\n").unwrap();
        assert!(matches!(FridgeModel::load_table(&path, 0.02), Err(Error::Config(_))));
    }
}
