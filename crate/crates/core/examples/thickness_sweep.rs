//! Equilibrium mode temperature at 1 mW against disc thickness.

use cryo_eo_sim::quantum::QuantumState;
use cryo_eo_sim::sweep::{Chain, ChainParams, SweepSpec, SweepVariable};
use cryo_eo_sim::thermal::PumpMode;

fn main() -> cryo_eo_sim::Result<()> {
    let chain = Chain::new(ChainParams::default());
    let spec = SweepSpec {
        variable: SweepVariable::Thickness,
        grid: (1..=10).map(|k| k as f64 * 100e-6).collect(),
        pump_mode: PumpMode::Pulsed,
        state: QuantumState::reference_cat(),
        power: 1e-3,
        eta_mw: 0.5,
    };
    for row in chain.sweep(&spec)? {
        match row.result {
            Ok(r) => {
                println!("{:>6.0} um  T_av = {:>6.1} mK  n_bar = {:.4}", row.thickness * 1e6, r.t_av * 1e3, r.n_bar_mw)
            }
            Err(e) => println!("{:>6.0} um  failed: {e}", row.thickness * 1e6),
        }
    }
    println!("max energy imbalance {:.1e}", chain.max_energy_imbalance());
    Ok(())
}
