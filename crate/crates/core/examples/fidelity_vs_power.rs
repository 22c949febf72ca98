//! Transfer fidelity of cat and squeezed states against pump power, with the
//! no-heating reference and the CW optimum.

use cryo_eo_sim::constants::TWO_PI;
use cryo_eo_sim::quantum::{ModeSystem, QuantumState};
use cryo_eo_sim::sweep::{Chain, ChainParams, SweepVariable};
use cryo_eo_sim::thermal::PumpMode;

fn main() -> cryo_eo_sim::Result<()> {
    // the stronger-coupling design makes the trade-off visible
    let params = ChainParams { modes: ModeSystem::default().with_g(TWO_PI * 200.0), ..ChainParams::default() };
    let chain = Chain::new(params).with_interpolation(1.5e-3);
    let cold = chain.baseline();
    for (name, state) in [("cat", QuantumState::reference_cat()), ("squeezed", QuantumState::reference_squeezed())] {
        println!("# {name}");
        for k in 0..=6 {
            let p = k as f64 * 0.25e-3;
            let cw = chain.evaluate(p, 0.5, PumpMode::Cw, &state)?;
            let pulsed = chain.evaluate(p, 0.5, PumpMode::Pulsed, &state)?;
            let ideal = cold.evaluate(p, 0.5, PumpMode::Cw, &state)?;
            println!("P = {:.2} mW  F_cw = {:.4}  F_pulsed = {:.4}  F_cold = {:.4}", p * 1e3, cw.f, pulsed.f, ideal.f);
        }
        let best = chain.maximize_fidelity(SweepVariable::Power, (0.0, 1.5e-3), PumpMode::Cw, &state, 0.5, 1e-8)?;
        println!(
            "CW optimum: P* = {:.3} mW, F* = {:.4}{}",
            best.max.argmax * 1e3,
            best.max.value,
            if best.max.at_boundary { " (at bound)" } else { "" }
        );
    }
    Ok(())
}
