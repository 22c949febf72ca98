//! Nonlinear heat diffusion on an [`AxiMesh`].
//!
//! Each cell carries the Kirchhoff potential `u = ∫k dT` of its own material.
//! Faces inside one material conduct `G·Δu` exactly; faces between materials
//! solve for the common face temperature. Time integration is backward Euler
//! on the enthalpy, with Newton iterations per step and adaptive steps.

use serde::{Deserialize, Serialize};

use crate::banded::Banded;
use crate::device::Region;
use crate::error::{Error, Result};
use crate::materials::{MaterialModel, Materials};
use crate::mesh::{volume_average, AxiMesh, BoundaryKind, ScalarField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PumpMode {
    Cw,
    Pulsed,
    Instant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpSchedule {
    pub mode: PumpMode,
    /// Pump power P_o (W); the in-pulse power for pulsed operation.
    pub power: f64,
    /// Optical rise time τ (s).
    pub tau: f64,
    pub duty: f64,
    /// Share of the pump power dissipated in the source volume.
    pub heat_fraction: f64,
}

impl Default for PumpSchedule {
    fn default() -> Self {
        PumpSchedule { mode: PumpMode::Cw, power: 1e-3, tau: 1e-6, duty: 0.01, heat_fraction: 1.0 }
    }
}

impl PumpSchedule {
    pub fn cw(power: f64) -> Self {
        PumpSchedule { power, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.power >= 0.0 && self.power.is_finite()) {
            return Err(Error::NegativePower(self.power));
        }
        let ok = self.tau > 0.0
            && self.duty > 0.0
            && self.duty <= 1.0
            && self.heat_fraction > 0.0
            && self.heat_fraction <= 1.0;
        if !ok {
            return Err(Error::InvalidParameter("pump: need tau > 0, duty and heat_fraction in (0, 1]".into()));
        }
        Ok(())
    }

    /// Power dissipated once the cavity has filled (W).
    pub fn dissipated_power(&self) -> f64 {
        self.power * self.heat_fraction
    }
}

/// Pump power reaching the cavity at time `t` (W), before `heat_fraction`.
pub fn source_power(t: f64, sched: &PumpSchedule) -> f64 {
    match sched.mode {
        PumpMode::Instant => sched.power,
        PumpMode::Cw | PumpMode::Pulsed => -sched.power * (-t.max(0.0) / sched.tau).exp_m1(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub dt_initial: f64,
    pub dt_max: f64,
    pub end_time: f64,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub steady_tol: f64,
    /// Times at which full temperature fields are kept.
    pub snapshot_times: Vec<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dt_initial: 1e-9,
            dt_max: 1e-6,
            end_time: 40e-6,
            newton_tol: 1e-10,
            newton_max_iter: 25,
            steady_tol: 1e-4,
            snapshot_times: Vec::new(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let tol_ok = |v: f64| v > 1e-14 && v < 1e-2;
        if !(self.dt_initial > 0.0 && self.dt_max > 0.0 && self.end_time > 0.0 && self.newton_max_iter > 0) {
            return Err(Error::InvalidParameter(
                "solver: dt_initial, dt_max, end_time, newton_max_iter must be > 0".into(),
            ));
        }
        if !(tol_ok(self.newton_tol) && tol_ok(self.steady_tol)) {
            return Err(Error::InvalidParameter("solver: tolerances must lie in (1e-14, 1e-2)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemperatureHistory {
    pub times: Vec<f64>,
    /// Mean temperature of the microwave mode volume (K).
    pub mode_avg_temperature: Vec<f64>,
    pub snapshots: Vec<(f64, ScalarField)>,
    pub final_field: ScalarField,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub temperature: ScalarField,
    /// Heat injected into the domain (W).
    pub source_power: f64,
    /// Heat leaving through the Dirichlet faces (W).
    pub boundary_flux: f64,
    pub newton_iterations: usize,
}

impl SteadyState {
    /// Relative mismatch between injected heat and boundary outflow.
    pub fn energy_imbalance(&self) -> f64 {
        if self.source_power == 0.0 {
            self.boundary_flux.abs()
        } else {
            (self.source_power - self.boundary_flux).abs() / self.source_power
        }
    }

    pub fn mode_average(&self, mesh: &AxiMesh) -> Result<f64> {
        volume_average(&self.temperature, mesh, Region::MicrowaveMode)
    }
}

/// Splits `power` (W) over the source cells in proportion to their volume.
pub fn source_distribution(mesh: &AxiMesh, power: f64) -> Result<Vec<f64>> {
    let vol = mesh.region_volume(Region::Source);
    if vol == 0.0 {
        return Err(Error::EmptyRegion(Region::Source.name()));
    }
    Ok(mesh.cells.iter().map(|c| if c.region == Region::Source { power * c.volume / vol } else { 0.0 }).collect())
}

struct FaceData {
    a: usize,
    b: usize,
    // same material: conductance on Δu; otherwise half-conductances
    g: f64,
    g_a: f64,
    g_b: f64,
    same: bool,
}

struct Problem<'m> {
    n: usize,
    bw: usize,
    mat: Vec<&'m MaterialModel>,
    volume: Vec<f64>,
    faces: Vec<FaceData>,
    // (cell, conductance, potential of the boundary temperature in that cell's material)
    dirichlet: Vec<(usize, f64, f64)>,
}

impl<'m> Problem<'m> {
    fn new(mesh: &AxiMesh, materials: &'m Materials, boundary: &[f64]) -> Result<Self> {
        if mesh.is_empty() {
            return Err(Error::Mesh("empty mesh".into()));
        }
        let groups = mesh.dirichlet_groups();
        if groups == 0 {
            return Err(Error::Mesh("no Dirichlet boundary; steady state is undefined".into()));
        }
        if boundary.len() < groups {
            return Err(Error::InvalidParameter(format!(
                "{groups} boundary temperatures needed, {} given",
                boundary.len()
            )));
        }
        if let Some(t) = boundary.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            return Err(Error::InvalidParameter(format!("boundary temperature must be > 0 K (got {t})")));
        }
        materials.dielectric.validate()?;
        materials.copper.validate()?;
        let mat: Vec<&MaterialModel> = mesh.cells.iter().map(|c| materials.get(c.material)).collect();
        let faces = mesh
            .faces
            .iter()
            .map(|f| {
                let same = mesh.cells[f.a].material == mesh.cells[f.b].material;
                FaceData {
                    a: f.a,
                    b: f.b,
                    g: f.area / (f.dist_a + f.dist_b),
                    g_a: f.area / f.dist_a,
                    g_b: f.area / f.dist_b,
                    same,
                }
            })
            .collect();
        let dirichlet = mesh
            .boundary
            .iter()
            .filter_map(|b| match b.kind {
                BoundaryKind::Dirichlet { group } => {
                    Some((b.cell, b.area / b.dist, mat[b.cell].potential(boundary[group])))
                }
                BoundaryKind::Adiabatic => None,
            })
            .collect();
        Ok(Problem {
            n: mesh.len(),
            bw: mesh.bandwidth(),
            mat,
            volume: mesh.cells.iter().map(|c| c.volume).collect(),
            faces,
            dirichlet,
        })
    }

    fn temperatures(&self, u: &[f64]) -> Vec<f64> {
        u.iter().zip(&self.mat).map(|(&u, m)| m.temperature(u)).collect()
    }

    /// Net heat flow a → b across an interface between two materials, with
    /// its derivatives with respect to u_a and u_b.
    fn interface_flux(&self, f: &FaceData, u: &[f64], t: &[f64]) -> (f64, f64, f64) {
        let (ma, mb) = (self.mat[f.a], self.mat[f.b]);
        let (ua, ub) = (u[f.a], u[f.b]);
        let mismatch = |tf: f64| f.g_a * (ua - ma.potential(tf)) - f.g_b * (mb.potential(tf) - ub);
        let (mut lo, mut hi) = (t[f.a].min(t[f.b]), t[f.a].max(t[f.b]));
        let mut tf = 0.5 * (lo + hi);
        if hi > lo {
            for _ in 0..100 {
                let r = mismatch(tf);
                if r > 0.0 {
                    lo = tf;
                } else {
                    hi = tf;
                }
                let slope = f.g_a * ma.k(tf) + f.g_b * mb.k(tf);
                let mut next = tf + r / slope;
                if !(next > lo && next < hi) {
                    next = 0.5 * (lo + hi);
                }
                if (next - tf).abs() <= 1e-15 * tf || hi - lo <= 1e-15 * hi {
                    tf = next;
                    break;
                }
                tf = next;
            }
        }
        let (ka, kb) = (ma.k(tf), mb.k(tf));
        let s = f.g_a * ka + f.g_b * kb;
        let flux = f.g_a * (ua - ma.potential(tf));
        if s > 0.0 {
            (flux, f.g_a * f.g_b * kb / s, -f.g_a * f.g_b * ka / s)
        } else {
            // both sides at 0 K: fall back to the series conductance
            let g = 1.0 / (1.0 / f.g_a + 1.0 / f.g_b);
            (flux, g, -g)
        }
    }

    /// Residual `R_i = storage + outflow − heat` and a per-cell magnitude
    /// used to judge convergence. Fills the Jacobian when given.
    fn assemble(
        &self,
        u: &[f64],
        heat: &[f64],
        storage: Option<(&[f64], f64)>,
        mut jac: Option<&mut Banded>,
        res: &mut [f64],
        scale: &mut [f64],
    ) {
        let t = self.temperatures(u);
        if let Some(j) = jac.as_deref_mut() {
            j.clear();
        }
        for i in 0..self.n {
            res[i] = -heat[i];
            scale[i] = heat[i].abs();
        }
        if let Some((e_old, dt)) = storage {
            for i in 0..self.n {
                let c = self.volume[i] / dt;
                let de = c * (self.mat[i].enthalpy(t[i]) - e_old[i]);
                res[i] += de;
                scale[i] += c * (self.mat[i].enthalpy(t[i]) + e_old[i]);
                if let Some(j) = jac.as_deref_mut() {
                    j.add(i, i, c * self.mat[i].capacity_per_conductivity(t[i]));
                }
            }
        }
        for f in &self.faces {
            let (flux, da, db, mag) = if f.same {
                let flux = f.g * (u[f.a] - u[f.b]);
                (flux, f.g, -f.g, f.g * (u[f.a] + u[f.b]))
            } else {
                let (flux, da, db) = self.interface_flux(f, u, &t);
                (flux, da, db, f.g_a * u[f.a] + f.g_b * u[f.b])
            };
            res[f.a] += flux;
            res[f.b] -= flux;
            scale[f.a] += mag;
            scale[f.b] += mag;
            if let Some(j) = jac.as_deref_mut() {
                j.add(f.a, f.a, da);
                j.add(f.a, f.b, db);
                j.add(f.b, f.a, -da);
                j.add(f.b, f.b, -db);
            }
        }
        for &(i, g, ub) in &self.dirichlet {
            res[i] += g * (u[i] - ub);
            scale[i] += g * (u[i] + ub);
            if let Some(j) = jac.as_deref_mut() {
                j.add(i, i, g);
            }
        }
    }

    fn boundary_flux(&self, u: &[f64]) -> f64 {
        self.dirichlet.iter().map(|&(i, g, ub)| g * (u[i] - ub)).sum()
    }

    /// Newton solve of `R(u) = 0` starting from `u`. Returns the iteration count.
    fn newton(
        &self,
        u: &mut [f64],
        heat: &[f64],
        storage: Option<(&[f64], f64)>,
        tol: f64,
        max_iter: usize,
    ) -> Result<usize> {
        let n = self.n;
        let mut jac = Banded::new(n, self.bw);
        let (mut res, mut scale) = (vec![0.0; n], vec![0.0; n]);
        let (mut trial_res, mut trial_scale) = (vec![0.0; n], vec![0.0; n]);
        let norm = |r: &[f64], s: &[f64]| {
            r.iter().zip(s).map(|(r, s)| if *s > 0.0 { r.abs() / s } else { r.abs() }).fold(0.0, f64::max)
        };
        let mut last_update = f64::INFINITY;
        self.assemble(u, heat, storage, Some(&mut jac), &mut res, &mut scale);
        let mut current = norm(&res, &scale);
        for iter in 0..max_iter {
            if current <= tol {
                return Ok(iter);
            }
            let mut delta: Vec<f64> = res.iter().map(|r| -r).collect();
            if !jac.solve_in_place(&mut delta) {
                break;
            }
            // damped update; potentials stay positive
            let mut lambda = 1.0;
            let mut trial = vec![0.0; n];
            let mut accepted = false;
            for _ in 0..12 {
                for i in 0..n {
                    trial[i] = (u[i] + lambda * delta[i]).max(0.05 * u[i]);
                }
                self.assemble(&trial, heat, storage, None, &mut trial_res, &mut trial_scale);
                let r = norm(&trial_res, &trial_scale);
                if r.is_finite() && (r < current || r <= tol) {
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
            last_update = (0..n).map(|i| (trial[i] - u[i]).abs() / u[i].max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
            u.copy_from_slice(&trial);
            self.assemble(u, heat, storage, Some(&mut jac), &mut res, &mut scale);
            current = norm(&res, &scale);
        }
        if current <= tol {
            return Ok(max_iter);
        }
        Err(Error::NewtonDivergence { last_update, last_residual: current })
    }

    fn check_positive(&self, u: &[f64]) -> Result<()> {
        match u.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
            Some(cell) => Err(Error::NonPositiveTemperature { cell }),
            None => Ok(()),
        }
    }
}

/// Steady state with `power` watts dissipated in the source region and every
/// Dirichlet face at `boundary_t`.
pub fn solve_steady(
    mesh: &AxiMesh,
    materials: &Materials,
    boundary_t: f64,
    power: f64,
    cfg: &SolverConfig,
) -> Result<SteadyState> {
    if !(power >= 0.0) {
        return Err(Error::NegativePower(power));
    }
    let heat = if power > 0.0 { source_distribution(mesh, power)? } else { vec![0.0; mesh.len()] };
    solve_steady_with(mesh, materials, &[boundary_t; 2], &heat, cfg)
}

/// General steady solve: one temperature per Dirichlet group and an arbitrary
/// heat input per cell (W).
pub fn solve_steady_with(
    mesh: &AxiMesh,
    materials: &Materials,
    boundary: &[f64],
    heat: &[f64],
    cfg: &SolverConfig,
) -> Result<SteadyState> {
    cfg.validate()?;
    if heat.len() != mesh.len() {
        return Err(Error::InvalidParameter("heat vector length differs from cell count".into()));
    }
    let p = Problem::new(mesh, materials, boundary)?;
    let t0 = boundary.iter().copied().fold(f64::INFINITY, f64::min);
    let mut u: Vec<f64> = p.mat.iter().map(|m| m.potential(t0)).collect();
    let iters = p.newton(&mut u, heat, None, cfg.newton_tol, cfg.newton_max_iter.max(50))?;
    p.check_positive(&u)?;
    Ok(SteadyState {
        temperature: ScalarField(p.temperatures(&u)),
        source_power: heat.iter().sum(),
        boundary_flux: p.boundary_flux(&u),
        newton_iterations: iters,
    })
}

/// Transient from a uniform start at `boundary_t`, sampling the
/// microwave-mode average after every accepted step.
pub fn solve_transient(
    mesh: &AxiMesh,
    materials: &Materials,
    boundary_t: f64,
    sched: &PumpSchedule,
    cfg: &SolverConfig,
) -> Result<TemperatureHistory> {
    if !(cfg.end_time > 0.0) {
        return Err(Error::EndTimeBeforeStart { start: 0.0, end: cfg.end_time });
    }
    cfg.validate()?;
    sched.validate()?;
    let p = Problem::new(mesh, materials, &[boundary_t; 2])?;
    let weights = source_distribution(mesh, 1.0)?;
    let dt_cap = match sched.mode {
        PumpMode::Instant => cfg.dt_max,
        PumpMode::Cw | PumpMode::Pulsed => cfg.dt_max.min(sched.tau / 10.0),
    };
    let mut snaps: Vec<f64> = cfg.snapshot_times.iter().copied().filter(|s| *s >= 0.0 && *s <= cfg.end_time).collect();
    snaps.sort_by(f64::total_cmp);
    snaps.dedup();

    let mut u: Vec<f64> = p.mat.iter().map(|m| m.potential(boundary_t)).collect();
    let avg = |u: &[f64]| volume_average(&ScalarField(p.temperatures(u)), mesh, Region::MicrowaveMode);
    let mut hist = TemperatureHistory {
        times: vec![0.0],
        mode_avg_temperature: vec![avg(&u)?],
        snapshots: Vec::new(),
        final_field: ScalarField(Vec::new()),
    };
    let mut next_snap = 0;
    while next_snap < snaps.len() && snaps[next_snap] == 0.0 {
        hist.snapshots.push((0.0, ScalarField(p.temperatures(&u))));
        next_snap += 1;
    }

    let mut t = 0.0;
    let mut dt = cfg.dt_initial.min(dt_cap);
    let mut heat = vec![0.0; p.n];
    let mut trial = u.clone();
    while t < cfg.end_time * (1.0 - 1e-12) {
        // snap to the end time or the next snapshot when within a small slack
        let slack = 1e-6 * dt;
        let mut target = t + dt;
        if target + slack >= cfg.end_time {
            target = cfg.end_time;
        }
        if next_snap < snaps.len() && snaps[next_snap] <= target + slack {
            target = snaps[next_snap];
        }
        let h = target - t;
        let q = source_power(target, sched) * sched.heat_fraction;
        for (hc, w) in heat.iter_mut().zip(&weights) {
            *hc = q * w;
        }
        let t_old = p.temperatures(&u);
        let e_old: Vec<f64> = t_old.iter().zip(&p.mat).map(|(t, m)| m.enthalpy(*t)).collect();
        trial.copy_from_slice(&u);
        match p.newton(&mut trial, &heat, Some((&e_old, h)), cfg.newton_tol, cfg.newton_max_iter) {
            Ok(iters) => {
                p.check_positive(&trial)?;
                u.copy_from_slice(&trial);
                t = target;
                hist.times.push(t);
                hist.mode_avg_temperature.push(avg(&u)?);
                if next_snap < snaps.len() && snaps[next_snap] == t {
                    hist.snapshots.push((t, ScalarField(p.temperatures(&u))));
                    next_snap += 1;
                }
                if iters <= 3 && h >= dt * (1.0 - 1e-12) {
                    dt = (2.0 * dt).min(dt_cap);
                }
            }
            Err(e) => {
                dt = 0.5 * h;
                log::debug!("step at t = {t:.3e} s rejected ({e}); dt -> {dt:.3e} s");
                if dt < 1e-18 {
                    return Err(e);
                }
            }
        }
    }
    hist.final_field = ScalarField(p.temperatures(&u));
    Ok(hist)
}

/// First time at which the history covers `fraction` of its total rise,
/// interpolating linearly between samples.
pub fn rise_time(hist: &TemperatureHistory, fraction: f64, tol: f64) -> Result<f64> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidParameter(format!("rise fraction {fraction} not in (0, 1)")));
    }
    let temps = &hist.mode_avg_temperature;
    let n = temps.len();
    if n < 3 {
        return Err(Error::NotSaturated(f64::INFINITY));
    }
    let change = (temps[n - 1] - temps[n - 2]).abs() / temps[n - 1].abs().max(f64::MIN_POSITIVE);
    if change > tol {
        return Err(Error::NotSaturated(change));
    }
    let (t0, t_max) = (temps[0], temps[n - 1]);
    let level = t0 + fraction * (t_max - t0);
    for k in 1..n {
        if temps[k] >= level {
            let w = (level - temps[k - 1]) / (temps[k] - temps[k - 1]);
            return Ok(hist.times[k - 1] + w * (hist.times[k] - hist.times[k - 1]));
        }
    }
    Ok(hist.times[n - 1])
}

/// Toy-model diffusion time `ρ·c·L²/k`. For laws with equal exponents the
/// ratio is temperature independent and `t_ref` may be omitted.
pub fn characteristic_diffusion_time(material: &MaterialModel, length: f64, t_ref: Option<f64>) -> Result<f64> {
    if !(length > 0.0) {
        return Err(Error::InvalidParameter("length must be > 0".into()));
    }
    let t = match t_ref {
        Some(t) if t > 0.0 => t,
        Some(t) => return Err(Error::NegativeTemperature(t)),
        None if material.conductivity_exp == material.heat_capacity_exp => 1.0,
        None => {
            return Err(Error::InvalidParameter(format!(
                "{}: c/k depends on temperature; a reference temperature is required",
                material.name
            )))
        }
    };
    Ok(material.capacity_per_conductivity(t) * length * length)
}
