//! Builds the default graded mesh and writes it as CSV.

use std::path::PathBuf;

use cryo_eo_sim::device::{DeviceSpec, Region};
use cryo_eo_sim::mesh::{AxiMesh, MeshParams};
use cryo_eo_sim::output::write_mesh;

fn main() -> cryo_eo_sim::Result<()> {
    let spec = DeviceSpec::default();
    let mesh = AxiMesh::build(&spec, &MeshParams::default())?;
    println!("{} cells, {} interior faces, bandwidth {}", mesh.len(), mesh.faces.len(), mesh.bandwidth());
    for region in [Region::Source, Region::MicrowaveMode, Region::Dielectric] {
        println!("{:>16}: {:.4e} m^3", region.name(), mesh.region_volume(region));
    }
    println!("clamped area: {:.4e} m^2", mesh.dirichlet_area());
    let path = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "mesh.csv".into()));
    write_mesh(&path, &mesh)?;
    println!("wrote {}", path.display());
    Ok(())
}
