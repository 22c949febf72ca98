//! Prints an ASCII map of the device cross-section regions.

use cryo_eo_sim::device::{DeviceSpec, Region};

fn main() {
    let spec = DeviceSpec::default();
    let (cols, rows) = (100, 20);
    println!("r: 0 .. {:.2} mm, z: 0 .. {:.0} um", spec.major_radius * 1e3, spec.thickness * 1e6);
    for j in (0..rows).rev() {
        let z = (j as f64 + 0.5) / rows as f64 * spec.thickness;
        let line: String = (0..cols)
            .map(|i| {
                let r = (i as f64 + 0.5) / cols as f64 * spec.major_radius;
                match spec.region_of(r, z) {
                    Region::Source => '*',
                    Region::MicrowaveMode => 'm',
                    Region::ContactBoundary => '#',
                    Region::Copper => 'C',
                    Region::Dielectric => '.',
                    Region::Outside => ' ',
                }
            })
            .collect();
        println!("|{line}|");
    }
    println!("* source  m microwave mode  # clamped contact  . dielectric");
    println!("optical mode volume = {:.3e} m^3", spec.optical_mode_volume());
}
