//! The heating → fridge → occupancy → fidelity chain, parameter sweeps and
//! fidelity maximisation.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::device::DeviceSpec;
use crate::error::{Error, Result};
use crate::fridge::FridgeModel;
use crate::interp::Pchip;
use crate::materials::Materials;
use crate::mesh::{AxiMesh, MeshParams};
use crate::optimize::{maximize, Maximum};
use crate::quantum::{
    bose_occupancy, cooperativity, fidelity, pump_photon_number, total_occupancy, ModeSystem, NoiseInput, QuantumState,
};
use crate::thermal::{solve_steady, PumpMode, PumpSchedule, SolverConfig};

/// Number of thermal solves behind an interpolated `T_av(P_o)` curve.
pub const INTERP_NODES: usize = 16;

/// Everything held fixed while a sweep varies one quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    pub device: DeviceSpec,
    pub mesh: MeshParams,
    pub materials: Materials,
    pub fridge: FridgeModel,
    pub modes: ModeSystem,
    /// Rise time, duty cycle and heat fraction; mode and power are set per evaluation.
    pub pump: PumpSchedule,
    pub solver: SolverConfig,
    /// When false every temperature stays at the fridge base temperature.
    pub heating: bool,
}

impl Default for ChainParams {
    fn default() -> Self {
        ChainParams {
            device: DeviceSpec::default(),
            mesh: MeshParams::default(),
            materials: Materials::default(),
            fridge: FridgeModel::default(),
            modes: ModeSystem::default(),
            pump: PumpSchedule::default(),
            solver: SolverConfig::default(),
            heating: true,
        }
    }
}

/// One row of every emitted table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityResult {
    pub p_o: f64,
    pub eta_mw: f64,
    pub t_b: f64,
    pub t_av: f64,
    pub n_bar_mw: f64,
    pub c: f64,
    pub f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    Power,
    Coupling,
    Thickness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
    pub pump_mode: PumpMode,
    pub state: QuantumState,
    /// Pump power when power is not swept (W).
    pub power: f64,
    /// Microwave coupling when coupling is not swept.
    pub eta_mw: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::InvalidParameter("sweep grid is empty".into()));
        }
        if self.grid.windows(2).any(|w| !(w[1] > w[0])) || self.grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("sweep grid must be finite and strictly increasing".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub thickness: f64,
    pub result: Result<FidelityResult>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct ThermalPoint {
    t_av: f64,
    imbalance: f64,
}

type Key = (u64, u64, u64);

/// A configured chain with its caches. Cheap to share between threads.
#[derive(Debug)]
pub struct Chain {
    pub params: ChainParams,
    caching: bool,
    interp_max_power: Option<f64>,
    meshes: Mutex<HashMap<u64, Arc<AxiMesh>>>,
    thermal: Mutex<HashMap<Key, ThermalPoint>>,
    curves: Mutex<HashMap<(PumpMode, u64), Arc<Pchip>>>,
    solves: Mutex<usize>,
}

impl Chain {
    pub fn new(params: ChainParams) -> Self {
        Chain {
            params,
            caching: true,
            interp_max_power: None,
            meshes: Mutex::default(),
            thermal: Mutex::default(),
            curves: Mutex::default(),
            solves: Mutex::new(0),
        }
    }

    /// Disables the thermal-solve cache (every evaluation solves afresh).
    pub fn without_cache(mut self) -> Self {
        self.caching = false;
        self
    }

    /// Replaces direct thermal solves for `0 ≤ P_o ≤ max_power` by a monotone
    /// cubic through [`INTERP_NODES`] solves.
    pub fn with_interpolation(mut self, max_power: f64) -> Self {
        self.interp_max_power = (max_power > 0.0).then_some(max_power);
        self
    }

    /// The same chain with heating switched off.
    pub fn baseline(&self) -> Chain {
        Chain::new(ChainParams { heating: false, ..self.params.clone() })
    }

    pub fn thermal_solves(&self) -> usize {
        *self.solves.lock().unwrap()
    }

    /// Largest relative energy imbalance over all cached steady solves.
    pub fn max_energy_imbalance(&self) -> f64 {
        self.thermal.lock().unwrap().values().map(|p| p.imbalance).fold(0.0, f64::max)
    }

    fn mesh(&self, thickness: f64) -> Result<Arc<AxiMesh>> {
        if let Some(m) = self.meshes.lock().unwrap().get(&thickness.to_bits()) {
            return Ok(m.clone());
        }
        let spec = self.params.device.with_thickness(thickness);
        let mesh = Arc::new(AxiMesh::build(&spec, &self.params.mesh)?);
        Ok(self.meshes.lock().unwrap().entry(thickness.to_bits()).or_insert(mesh).clone())
    }

    /// Steady microwave-mode temperature for pump power `p_o` (W) against a
    /// fridge at `t_b`, through the cache.
    pub fn steady_mode_temperature(&self, p_o: f64, thickness: f64, t_b: f64) -> Result<f64> {
        let key = (p_o.to_bits(), thickness.to_bits(), t_b.to_bits());
        if self.caching {
            if let Some(p) = self.thermal.lock().unwrap().get(&key) {
                return Ok(p.t_av);
            }
        }
        let mesh = self.mesh(thickness)?;
        let power = p_o * self.params.pump.heat_fraction;
        let s = solve_steady(&mesh, &self.params.materials, t_b, power, &self.params.solver)?;
        let point = ThermalPoint { t_av: s.mode_average(&mesh)?, imbalance: s.energy_imbalance() };
        *self.solves.lock().unwrap() += 1;
        if point.imbalance > 0.01 {
            log::warn!("steady solve at {p_o} W: energy imbalance {:.2e}", point.imbalance);
        }
        self.thermal.lock().unwrap().insert(key, point);
        Ok(point.t_av)
    }

    fn schedule(&self, p_o: f64, mode: PumpMode) -> PumpSchedule {
        PumpSchedule { mode, power: p_o, ..self.params.pump }
    }

    fn boundary_temperature(&self, p_o: f64, mode: PumpMode) -> Result<f64> {
        if !self.params.heating {
            return Ok(self.params.fridge.base_temp);
        }
        self.params.fridge.boundary_for(&self.schedule(p_o, mode))
    }

    fn mode_temperature(&self, p_o: f64, mode: PumpMode, t_b: f64) -> Result<f64> {
        if !self.params.heating {
            return Ok(self.params.fridge.base_temp);
        }
        let thickness = self.params.device.thickness;
        match self.interp_max_power {
            Some(pmax) if p_o <= pmax => {
                let curve = self.curve(mode, thickness, pmax)?;
                Ok(curve.eval(p_o).max(0.0).powf(0.25))
            }
            _ => self.steady_mode_temperature(p_o, thickness, t_b),
        }
    }

    // T_av⁴ against P_o is close to linear, which keeps the interpolant accurate.
    fn curve(&self, mode: PumpMode, thickness: f64, pmax: f64) -> Result<Arc<Pchip>> {
        let key = (mode, thickness.to_bits());
        if let Some(c) = self.curves.lock().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let nodes: Vec<f64> = (0..INTERP_NODES).map(|k| pmax * k as f64 / (INTERP_NODES - 1) as f64).collect();
        let values = nodes
            .par_iter()
            .map(|&p| {
                let t_b = self.boundary_temperature(p, mode)?;
                Ok(self.steady_mode_temperature(p, thickness, t_b)?.powi(4))
            })
            .collect::<Result<Vec<f64>>>()?;
        let curve = Arc::new(Pchip::new(nodes, values)?);
        Ok(self.curves.lock().unwrap().entry(key).or_insert(curve).clone())
    }

    /// Runs the full chain at one operating point.
    pub fn evaluate(&self, p_o: f64, eta_mw: f64, mode: PumpMode, state: &QuantumState) -> Result<FidelityResult> {
        if !(p_o >= 0.0) {
            return Err(Error::NegativePower(p_o).at("pump"));
        }
        let sys = self.params.modes.with_eta_mw(eta_mw).map_err(|e| e.at("modes"))?;
        let t_b = self.boundary_temperature(p_o, mode).map_err(|e| e.at("fridge"))?;
        let t_av = self.mode_temperature(p_o, mode, t_b).map_err(|e| e.at("thermal"))?;
        let base = self.params.fridge.base_temp;
        let t_port = if mode == PumpMode::Pulsed { base } else { t_b };
        let om = sys.omega_mw;
        let mut ports = vec![(sys.kappa_e_mw, bose_occupancy(t_port, om))];
        ports.extend(sys.extra_mw_ports.iter().map(|&(k, t)| (k, bose_occupancy(t, om))));
        let quantum = |e: Error| e.at("quantum");
        let n_bar = total_occupancy(sys.kappa_i_mw, bose_occupancy(t_av, om), &ports).map_err(quantum)?;
        let n_p = pump_photon_number(p_o, &sys).map_err(quantum)?;
        let c = cooperativity(n_p, &sys);
        let f = fidelity(state, c, &sys, &NoiseInput { n_bar_mw: n_bar }).map_err(quantum)?;
        Ok(FidelityResult { p_o, eta_mw, t_b, t_av, n_bar_mw: n_bar, c, f })
    }

    /// One row per grid value, in grid order. Row failures do not stop the sweep.
    pub fn sweep(&self, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
        spec.validate()?;
        let rows = spec
            .grid
            .par_iter()
            .map(|&x| match spec.variable {
                SweepVariable::Power => SweepRow {
                    thickness: self.params.device.thickness,
                    result: self.evaluate(x, spec.eta_mw, spec.pump_mode, &spec.state),
                },
                SweepVariable::Coupling => SweepRow {
                    thickness: self.params.device.thickness,
                    result: self.evaluate(spec.power, x, spec.pump_mode, &spec.state),
                },
                SweepVariable::Thickness => {
                    let sub = self.with_thickness(x);
                    SweepRow {
                        thickness: x,
                        result: sub.evaluate(spec.power, spec.eta_mw, spec.pump_mode, &spec.state),
                    }
                }
            })
            .collect::<Vec<_>>();
        for row in &rows {
            if let Err(e) = &row.result {
                log::warn!("sweep row at thickness {} m failed: {e}", row.thickness);
            }
        }
        Ok(rows)
    }

    /// A chain at another thickness sharing this chain's caches.
    fn with_thickness(&self, thickness: f64) -> ChainView<'_> {
        ChainView { chain: self, thickness }
    }

    /// Maximises F over pump power (fixed `other` = η_Ω) or over coupling
    /// (fixed `other` = P_o).
    pub fn maximize_fidelity(
        &self,
        variable: SweepVariable,
        bounds: (f64, f64),
        mode: PumpMode,
        state: &QuantumState,
        other: f64,
        tol: f64,
    ) -> Result<Optimum> {
        let eval = |x: f64| match variable {
            SweepVariable::Power => self.evaluate(x, other, mode, state),
            SweepVariable::Coupling => self.evaluate(other, x, mode, state),
            SweepVariable::Thickness => {
                Err(Error::InvalidParameter("thickness is not an optimisation variable".into()))
            }
        };
        let max = maximize(|x| eval(x).map(|r| r.f), bounds.0, bounds.1, 33, tol)?;
        if max.at_boundary {
            log::info!("fidelity maximum on the search boundary at {}", max.argmax);
        }
        Ok(Optimum { max, row: eval(max.argmax)? })
    }
}

struct ChainView<'a> {
    chain: &'a Chain,
    thickness: f64,
}

impl ChainView<'_> {
    fn evaluate(&self, p_o: f64, eta: f64, mode: PumpMode, state: &QuantumState) -> Result<FidelityResult> {
        let c = self.chain;
        if !c.params.heating || self.thickness == c.params.device.thickness {
            return c.evaluate(p_o, eta, mode, state);
        }
        // thickness sweeps always solve directly; the interpolant is per thickness
        let sub = Chain {
            params: ChainParams { device: c.params.device.with_thickness(self.thickness), ..c.params.clone() },
            caching: c.caching,
            interp_max_power: None,
            meshes: Mutex::default(),
            thermal: Mutex::default(),
            curves: Mutex::default(),
            solves: Mutex::new(0),
        };
        let out = sub.evaluate(p_o, eta, mode, state);
        // fold the sub-chain's solves into the parent for bookkeeping
        let solved = sub.thermal.into_inner().unwrap();
        *c.solves.lock().unwrap() += solved.len();
        c.thermal.lock().unwrap().extend(solved);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub max: Maximum,
    pub row: FidelityResult,
}
