//! Optimal microwave coupling at a fixed pump power, for two
//! electro-optic coupling strengths.

use cryo_eo_sim::constants::TWO_PI;
use cryo_eo_sim::quantum::{ModeSystem, QuantumState};
use cryo_eo_sim::sweep::{Chain, ChainParams, SweepVariable};
use cryo_eo_sim::thermal::PumpMode;

fn main() -> cryo_eo_sim::Result<()> {
    let state = QuantumState::reference_squeezed();
    for g_hz in [7.4, 200.0] {
        let params = ChainParams { modes: ModeSystem::default().with_g(TWO_PI * g_hz), ..ChainParams::default() };
        let chain = Chain::new(params).with_interpolation(1e-3);
        for mode in [PumpMode::Cw, PumpMode::Pulsed] {
            let o = chain.maximize_fidelity(SweepVariable::Coupling, (0.0, 1.0), mode, &state, 0.4e-3, 1e-6)?;
            println!(
                "g = 2pi x {g_hz:>5} Hz {mode:?}: eta* = {:.3}, F* = {:.4}, C = {:.4}, n_bar = {:.4}",
                o.max.argmax, o.max.value, o.row.c, o.row.n_bar_mw
            );
        }
    }
    Ok(())
}
