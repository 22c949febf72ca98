//! Heating of a 200 µm disc by a 1 mW CW pump switched on at t = 0.

use cryo_eo_sim::device::DeviceSpec;
use cryo_eo_sim::materials::Materials;
use cryo_eo_sim::mesh::{AxiMesh, MeshParams};
use cryo_eo_sim::thermal::{rise_time, solve_transient, PumpSchedule, SolverConfig};

fn main() -> cryo_eo_sim::Result<()> {
    let spec = DeviceSpec::default().with_thickness(200e-6);
    let mesh = AxiMesh::build(&spec, &MeshParams::default())?;
    let cfg = SolverConfig { snapshot_times: vec![0.5e-6, 2e-6, 10e-6], ..SolverConfig::default() };
    let hist = solve_transient(&mesh, &Materials::default(), 0.02, &PumpSchedule::cw(1e-3), &cfg)?;
    let stride = (hist.times.len() / 25).max(1);
    for (t, v) in hist.times.iter().zip(&hist.mode_avg_temperature).step_by(stride) {
        println!("{:>10.3} us  {:>8.2} mK", t * 1e6, v * 1e3);
    }
    for (t, field) in &hist.snapshots {
        println!("snapshot {:.1} us: max T = {:.1} mK", t * 1e6, field.max() * 1e3);
    }
    println!("t90 = {:.3} us", rise_time(&hist, 0.9, cfg.steady_tol)? * 1e6);
    println!("t99 = {:.3} us", rise_time(&hist, 0.99, cfg.steady_tol)? * 1e6);
    Ok(())
}
