//! Boundary temperature from the default cooling law and from a tabulated
//! load curve.

use cryo_eo_sim::fridge::FridgeModel;
use cryo_eo_sim::thermal::{PumpMode, PumpSchedule};

fn main() -> cryo_eo_sim::Result<()> {
    let law = FridgeModel::default();
    let table = FridgeModel::from_table(0.02, vec![(100e-6, 0.06), (400e-6, 0.1), (1e-3, 0.16), (2e-3, 0.23)])?;
    println!("{:>8} {:>12} {:>12}", "P_mW", "law_mK", "table_mK");
    for k in 0..=8 {
        let p = k as f64 * 0.25e-3;
        println!(
            "{:>8.2} {:>12.1} {:>12.1}",
            p * 1e3,
            law.boundary_temperature(p)? * 1e3,
            table.boundary_temperature(p)? * 1e3
        );
    }
    let pulsed = PumpSchedule { mode: PumpMode::Pulsed, ..PumpSchedule::cw(1e-3) };
    println!("pulsed pumping keeps the plate at {:.0} mK", law.boundary_for(&pulsed)? * 1e3);
    Ok(())
}
