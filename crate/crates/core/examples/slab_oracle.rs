//! Steady conduction through a slab with k ∝ T³, against the closed form
//! T(x) = (T₁⁴ + (T₂⁴ − T₁⁴)·x/L)^¼.

use cryo_eo_sim::materials::Materials;
use cryo_eo_sim::mesh::AxiMesh;
use cryo_eo_sim::thermal::{solve_steady_with, SolverConfig};

fn main() -> cryo_eo_sim::Result<()> {
    let (l, t1, t2) = (1e-3, 0.02, 0.3);
    let mats = Materials::default();
    for cells in [8, 16, 32, 64] {
        let mesh = AxiMesh::slab(l, cells, 1e-4)?;
        let s = solve_steady_with(&mesh, &mats, &[t1, t2], &vec![0.0; cells], &SolverConfig::default())?;
        let err = mesh
            .cells
            .iter()
            .zip(s.temperature.values())
            .map(|(c, t)| (t / (t1.powi(4) + (t2.powi(4) - t1.powi(4)) * c.z / l).powf(0.25) - 1.0).abs())
            .fold(0.0, f64::max);
        println!("{cells:>4} cells: max relative error {err:.2e}, {} Newton iterations", s.newton_iterations);
    }
    Ok(())
}
