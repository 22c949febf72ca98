//! TOML run configuration. Every dimensional key carries its SI unit in the
//! name; rates are given as ordinary frequencies (Hz) and converted to
//! angular rates on load.

// Unit suffixes such as `_K`, `_W` and `_Hz` keep their usual case.
#![allow(non_snake_case)]

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::constants::{C_LIGHT, TWO_PI};
use crate::error::{Error, Result};
use crate::fridge::{FridgeLaw, FridgeModel};
use crate::materials::{MaterialModel, Materials};
use crate::quantum::{QuantumState, StateKind};
use crate::sweep::{ChainParams, SweepVariable};
use crate::thermal::PumpMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    SimulateThermal,
    SweepPower,
    SweepCoupling,
    SweepThickness,
    Optimize,
}

impl Scenario {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "simulate-thermal" => Scenario::SimulateThermal,
            "sweep-power" => Scenario::SweepPower,
            "sweep-coupling" => Scenario::SweepCoupling,
            "sweep-thickness" => Scenario::SweepThickness,
            "optimize" => Scenario::Optimize,
            _ => return None,
        })
    }
}

/// Values of the swept quantity, either listed or evenly spaced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub values: Vec<f64>,
}

impl GridSpec {
    pub fn linspace(start: f64, stop: f64, points: usize) -> Self {
        let values = match points {
            0 => vec![],
            1 => vec![start],
            n => (0..n).map(|k| start + (stop - start) * k as f64 / (n - 1) as f64).collect(),
        };
        GridSpec { values }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeSpec {
    pub variable: SweepVariable,
    pub lower: f64,
    pub upper: f64,
    pub tol: f64,
}

/// Fully validated configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Option<Scenario>,
    pub chain: ChainParams,
    pub state: QuantumState,
    /// Microwave coupling used when it is not the swept variable.
    pub eta_mw: f64,
    pub grid: Option<GridSpec>,
    pub interpolate: bool,
    pub optimize: OptimizeSpec,
    pub output_dir: PathBuf,
    pub dump_mesh: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let chain = ChainParams::default();
        let eta_mw = chain.modes.eta_mw();
        RunConfig {
            scenario: None,
            chain,
            state: QuantumState::reference_cat(),
            eta_mw,
            grid: None,
            interpolate: true,
            optimize: OptimizeSpec { variable: SweepVariable::Power, lower: 0.0, upper: 1.5e-3, tol: 1e-7 },
            output_dir: PathBuf::from("out"),
            dump_mesh: false,
        }
    }
}

// ---- file schema ----------------------------------------------------------

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    scenario: Option<Scenario>,
    output_dir: Option<PathBuf>,
    #[serde(default)]
    device: DeviceFile,
    #[serde(default)]
    mesh: MeshFile,
    #[serde(default)]
    materials: MaterialsFile,
    #[serde(default)]
    fridge: FridgeFile,
    #[serde(default)]
    modes: ModesFile,
    #[serde(default)]
    pump: PumpFile,
    #[serde(default)]
    state: StateFile,
    #[serde(default)]
    solver: SolverFile,
    #[serde(default)]
    sweep: SweepFile,
    #[serde(default)]
    optimize: OptimizeFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeviceFile {
    major_radius_m: Option<f64>,
    side_curvature_m: Option<f64>,
    thickness_m: Option<f64>,
    source_radial_inset_m: Option<f64>,
    source_cross_section_radius_m: Option<f64>,
    mw_annulus_width_m: Option<f64>,
    contact_inner_radius_m: Option<f64>,
    contact_outer_radius_m: Option<f64>,
    include_copper: Option<bool>,
    copper_shell_thickness_m: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeshFile {
    nr: Option<usize>,
    nz: Option<usize>,
    refine_source: Option<f64>,
    dump: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialsFile {
    dielectric: Option<MaterialEntry>,
    copper: Option<MaterialEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MaterialEntry {
    Builtin(String),
    Custom(MaterialFile),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialFile {
    name: String,
    conductivity_coeff: f64,
    conductivity_exp: f64,
    heat_capacity_coeff: f64,
    heat_capacity_exp: f64,
    density_kg_m3: f64,
    valid_max_temp_K: Option<f64>,
    rrr: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FridgeFile {
    base_temp_K: Option<f64>,
    kappa_f_W_per_K2: Option<f64>,
    load_curve_csv: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModesFile {
    pump_wavelength_m: Option<f64>,
    mw_frequency_Hz: Option<f64>,
    kappa_i_o_Hz: Option<f64>,
    kappa_e_o_Hz: Option<f64>,
    kappa_i_mw_Hz: Option<f64>,
    kappa_e_mw_Hz: Option<f64>,
    g_Hz: Option<f64>,
    eta_mw: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PumpFile {
    mode: Option<PumpMode>,
    power_W: Option<f64>,
    tau_s: Option<f64>,
    duty: Option<f64>,
    heat_fraction: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    kind: Option<StateKind>,
    alpha: Option<f64>,
    r: Option<f64>,
    phi_rad: Option<f64>,
    phi_alpha_rad: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolverFile {
    dt_initial_s: Option<f64>,
    dt_max_s: Option<f64>,
    end_time_s: Option<f64>,
    newton_tol: Option<f64>,
    newton_max_iter: Option<usize>,
    steady_tol: Option<f64>,
    snapshot_times_s: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    grid: Option<Vec<f64>>,
    start: Option<f64>,
    stop: Option<f64>,
    points: Option<usize>,
    interpolate: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OptimizeFile {
    variable: Option<SweepVariable>,
    lower: Option<f64>,
    upper: Option<f64>,
    tol: Option<f64>,
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn material(entry: Option<MaterialEntry>, current: MaterialModel) -> Result<MaterialModel> {
    Ok(match entry {
        None => current,
        Some(MaterialEntry::Builtin(name)) => {
            MaterialModel::builtin(&name).ok_or_else(|| Error::Config(format!("unknown built-in material `{name}`")))?
        }
        Some(MaterialEntry::Custom(m)) => MaterialModel {
            name: m.name,
            conductivity_coeff: m.conductivity_coeff,
            conductivity_exp: m.conductivity_exp,
            heat_capacity_coeff: m.heat_capacity_coeff,
            heat_capacity_exp: m.heat_capacity_exp,
            density: m.density_kg_m3,
            valid_max_temp: m.valid_max_temp_K.unwrap_or(1.0),
            rrr: m.rrr,
        },
    })
}

/// Parses and validates a configuration. Relative paths inside the file
/// resolve against `base_dir`.
pub fn parse_config_in(text: &str, base_dir: &Path) -> Result<RunConfig> {
    let file: FileConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let mut cfg = RunConfig { scenario: file.scenario, ..RunConfig::default() };
    set(&mut cfg.output_dir, file.output_dir);

    let d = &mut cfg.chain.device;
    let f = file.device;
    set(&mut d.major_radius, f.major_radius_m);
    set(&mut d.side_curvature, f.side_curvature_m);
    set(&mut d.thickness, f.thickness_m);
    set(&mut d.source_radial_inset, f.source_radial_inset_m);
    set(&mut d.source_cross_section_radius, f.source_cross_section_radius_m);
    set(&mut d.mw_annulus_width, f.mw_annulus_width_m);
    set(&mut d.contact_inner_radius, f.contact_inner_radius_m);
    set(&mut d.contact_outer_radius, f.contact_outer_radius_m);
    set(&mut d.include_copper, f.include_copper);
    set(&mut d.copper_shell_thickness, f.copper_shell_thickness_m);

    let m = &mut cfg.chain.mesh;
    set(&mut m.nr, file.mesh.nr);
    set(&mut m.nz, file.mesh.nz);
    set(&mut m.refine_source, file.mesh.refine_source);
    set(&mut cfg.dump_mesh, file.mesh.dump);

    let mats = &cfg.chain.materials;
    cfg.chain.materials = Materials {
        dielectric: material(file.materials.dielectric, mats.dielectric.clone())?,
        copper: material(file.materials.copper, mats.copper.clone())?,
    };

    let fr = file.fridge;
    let base = fr.base_temp_K.unwrap_or(cfg.chain.fridge.base_temp);
    cfg.chain.fridge = match (fr.load_curve_csv, fr.kappa_f_W_per_K2) {
        (Some(_), Some(_)) => {
            return Err(Error::Config("fridge: give either kappa_f_W_per_K2 or load_curve_csv".into()))
        }
        (Some(path), None) => FridgeModel::load_table(&base_dir.join(path), base)?,
        (None, kappa) => FridgeModel { base_temp: base, law: FridgeLaw::Quadratic { kappa_f: kappa.unwrap_or(0.04) } },
    };

    let md = &mut cfg.chain.modes;
    let mf = file.modes;
    if let Some(l) = mf.pump_wavelength_m {
        if !(l > 0.0) {
            return Err(Error::Config("modes.pump_wavelength_m must be > 0".into()));
        }
        md.omega_p = TWO_PI * C_LIGHT / l;
    }
    let ang = |v: Option<f64>| v.map(|f| TWO_PI * f);
    set(&mut md.omega_mw, ang(mf.mw_frequency_Hz));
    set(&mut md.kappa_i_o, ang(mf.kappa_i_o_Hz));
    set(&mut md.kappa_e_o, ang(mf.kappa_e_o_Hz));
    set(&mut md.kappa_i_mw, ang(mf.kappa_i_mw_Hz));
    set(&mut md.kappa_e_mw, ang(mf.kappa_e_mw_Hz));
    set(&mut md.g, ang(mf.g_Hz));
    cfg.eta_mw = mf.eta_mw.unwrap_or_else(|| md.eta_mw());

    let p = &mut cfg.chain.pump;
    set(&mut p.mode, file.pump.mode);
    set(&mut p.power, file.pump.power_W);
    set(&mut p.tau, file.pump.tau_s);
    set(&mut p.duty, file.pump.duty);
    set(&mut p.heat_fraction, file.pump.heat_fraction);

    let st = file.state;
    let kind = st.kind.unwrap_or(StateKind::Cat);
    let mut state = match kind {
        StateKind::Cat => QuantumState::reference_cat(),
        StateKind::Squeezed => QuantumState::reference_squeezed(),
    };
    set(&mut state.alpha, st.alpha);
    set(&mut state.r, st.r);
    set(&mut state.phi, st.phi_rad);
    set(&mut state.phi_alpha, st.phi_alpha_rad);
    cfg.state = state;

    let s = &mut cfg.chain.solver;
    let sf = file.solver;
    set(&mut s.dt_initial, sf.dt_initial_s);
    set(&mut s.dt_max, sf.dt_max_s);
    set(&mut s.end_time, sf.end_time_s);
    set(&mut s.newton_tol, sf.newton_tol);
    set(&mut s.newton_max_iter, sf.newton_max_iter);
    set(&mut s.steady_tol, sf.steady_tol);
    set(&mut s.snapshot_times, sf.snapshot_times_s);

    let sw = file.sweep;
    cfg.grid = match (sw.grid, sw.start, sw.stop, sw.points) {
        (Some(values), None, None, None) => Some(GridSpec { values }),
        (None, Some(a), Some(b), Some(n)) => Some(GridSpec::linspace(a, b, n)),
        (None, None, None, None) => None,
        _ => return Err(Error::Config("sweep: give either `grid` or all of `start`, `stop`, `points`".into())),
    };
    set(&mut cfg.interpolate, sw.interpolate);

    let o = &mut cfg.optimize;
    set(&mut o.variable, file.optimize.variable);
    if o.variable == SweepVariable::Coupling {
        o.lower = 0.0;
        o.upper = 1.0;
        o.tol = 1e-5;
    }
    set(&mut o.lower, file.optimize.lower);
    set(&mut o.upper, file.optimize.upper);
    set(&mut o.tol, file.optimize.tol);

    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_in(text, Path::new("."))
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config_in(&text, path.parent().unwrap_or(Path::new("."))).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => Error::Config(format!("{}: {other}", path.display())),
    })
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let c = &self.chain;
        c.device.validate()?;
        if c.mesh.nr < 4 || c.mesh.nz < 4 {
            return Err(Error::Config("mesh: nr and nz must be >= 4".into()));
        }
        c.materials.dielectric.validate()?;
        c.materials.copper.validate()?;
        c.fridge.validate()?;
        c.modes.validate()?;
        c.pump.validate()?;
        c.solver.validate()?;
        self.state.validate()?;
        if !(0.0..=1.0).contains(&self.eta_mw) {
            return Err(Error::Config(format!("modes.eta_mw = {} not in [0, 1]", self.eta_mw)));
        }
        if let Some(g) = &self.grid {
            if g.values.is_empty() {
                return Err(Error::Config("sweep grid is empty".into()));
            }
        }
        let o = &self.optimize;
        if o.variable == SweepVariable::Thickness {
            return Err(Error::Config("optimize.variable must be `power` or `coupling`".into()));
        }
        if !(o.lower < o.upper && o.tol > 0.0) {
            return Err(Error::Config("optimize: need lower < upper and tol > 0".into()));
        }
        Ok(())
    }
}
