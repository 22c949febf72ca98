//! Conductivity, heat capacity and Kirchhoff potential of the built-in
//! materials over the millikelvin range.

use cryo_eo_sim::materials::MaterialModel;

fn main() -> cryo_eo_sim::Result<()> {
    for m in [MaterialModel::linbo3(), MaterialModel::copper()] {
        println!("# {} (rho = {} kg/m^3)", m.name, m.density);
        println!("{:>8} {:>12} {:>12} {:>12}", "T_K", "k_W/mK", "rho_c_J/m3K", "u_W/m");
        for t in [0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0] {
            println!(
                "{t:>8} {:>12.4e} {:>12.4e} {:>12.4e}",
                m.conductivity(t)?,
                m.volumetric_heat_capacity(t)?,
                m.kirchhoff_potential(t)?
            );
        }
    }
    Ok(())
}
