//! Saturation of the mode temperature when the full pump heat appears at once,
//! compared with the diffusion time across the source region.

use cryo_eo_sim::device::DeviceSpec;
use cryo_eo_sim::materials::{MaterialModel, Materials};
use cryo_eo_sim::mesh::{AxiMesh, MeshParams};
use cryo_eo_sim::thermal::{
    characteristic_diffusion_time, rise_time, solve_transient, PumpMode, PumpSchedule, SolverConfig,
};

fn main() -> cryo_eo_sim::Result<()> {
    let spec = DeviceSpec::default().with_thickness(200e-6);
    let mesh = AxiMesh::build(&spec, &MeshParams::default())?;
    let sched = PumpSchedule { mode: PumpMode::Instant, ..PumpSchedule::cw(1e-3) };
    let cfg = SolverConfig { dt_initial: 1e-11, dt_max: 2e-10, end_time: 100e-9, ..SolverConfig::default() };
    let hist = solve_transient(&mesh, &Materials::default(), 0.02, &sched, &cfg)?;
    println!("final mode temperature {:.2} mK", hist.mode_avg_temperature.last().unwrap() * 1e3);
    println!("t90 = {:.2} ns, t99 = {:.2} ns", rise_time(&hist, 0.9, 1e-3)? * 1e9, rise_time(&hist, 0.99, 1e-3)? * 1e9);
    let tau = characteristic_diffusion_time(&MaterialModel::linbo3(), spec.source_cross_section_radius, None)?;
    println!("diffusion time across the source radius: {:.2} ns", tau * 1e9);
    Ok(())
}
