//! Mode temperature and thermal occupancy against pump power, CW and pulsed.

use cryo_eo_sim::quantum::QuantumState;
use cryo_eo_sim::sweep::{Chain, ChainParams, SweepSpec, SweepVariable};
use cryo_eo_sim::thermal::PumpMode;

fn main() -> cryo_eo_sim::Result<()> {
    let chain = Chain::new(ChainParams::default()).with_interpolation(1.5e-3);
    let grid: Vec<f64> = (0..=6).map(|k| k as f64 * 0.25e-3).collect();
    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "P_mW", "T_B_mK", "T_cw_mK", "n_cw", "n_pulsed");
    let run = |mode| {
        chain.sweep(&SweepSpec {
            variable: SweepVariable::Power,
            grid: grid.clone(),
            pump_mode: mode,
            state: QuantumState::reference_squeezed(),
            power: 0.0,
            eta_mw: 0.5,
        })
    };
    let (cw, pulsed) = (run(PumpMode::Cw)?, run(PumpMode::Pulsed)?);
    for (a, b) in cw.iter().zip(&pulsed) {
        let (a, b) = (a.result.as_ref().unwrap(), b.result.as_ref().unwrap());
        println!(
            "{:>8.3} {:>10.1} {:>10.1} {:>10.4} {:>10.4}",
            a.p_o * 1e3,
            a.t_b * 1e3,
            a.t_av * 1e3,
            a.n_bar_mw,
            b.n_bar_mw
        );
    }
    println!("{} thermal solves", chain.thermal_solves());
    Ok(())
}
