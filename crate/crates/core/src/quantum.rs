//! Thermal occupancy, cooperativity and transfer fidelities of the
//! microwave → optical conversion channel.
//!
//! With transmissivity `t = ε₃ = 2√(η_o η_Ω C)/(1 + C)` the converter acts on
//! the signal as a beam splitter of amplitude transmission `t` followed by
//! classical Gaussian noise of `N = 4 η_Ω n̄_Ω/(1 + C)²` quanta.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{C_LIGHT, HBAR, K_B, TWO_PI};
use crate::error::{Error, Result};

/// Optical and microwave modes of the transducer. All rates angular (rad/s).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSystem {
    pub omega_p: f64,
    pub omega_mw: f64,
    pub kappa_i_o: f64,
    pub kappa_e_o: f64,
    pub kappa_i_mw: f64,
    /// Extrinsic loss into the microwave signal port.
    pub kappa_e_mw: f64,
    pub g: f64,
    /// Further microwave loss ports as `(κ_e_j, T_j)`.
    pub extra_mw_ports: Vec<(f64, f64)>,
}

impl Default for ModeSystem {
    /// Critically coupled optics, undercoupled 10 GHz microwave mode.
    fn default() -> Self {
        ModeSystem {
            omega_p: TWO_PI * C_LIGHT / 1550e-9,
            omega_mw: TWO_PI * 10e9,
            kappa_i_o: TWO_PI * 0.7e6,
            kappa_e_o: TWO_PI * 0.7e6,
            kappa_i_mw: TWO_PI * 32.4e6,
            kappa_e_mw: TWO_PI * 7.2e6,
            g: TWO_PI * 7.4,
            extra_mw_ports: Vec::new(),
        }
    }
}

impl ModeSystem {
    /// Optical extrinsic loss four times the intrinsic loss.
    pub fn overcoupled_optics() -> Self {
        let d = Self::default();
        ModeSystem { kappa_e_o: 4.0 * d.kappa_i_o, ..d }
    }

    pub fn with_g(&self, g: f64) -> Self {
        ModeSystem { g, ..self.clone() }
    }

    pub fn kappa_o(&self) -> f64 {
        self.kappa_i_o + self.kappa_e_o
    }

    pub fn kappa_mw(&self) -> f64 {
        self.kappa_i_mw + self.kappa_e_mw + self.extra_mw_ports.iter().map(|p| p.0).sum::<f64>()
    }

    pub fn eta_o(&self) -> f64 {
        self.kappa_e_o / self.kappa_o()
    }

    pub fn eta_mw(&self) -> f64 {
        self.kappa_e_mw / self.kappa_mw()
    }

    /// Sets the signal-port coupling `η_Ω = κ_e/κ_Ω` by changing `κ_e` with the
    /// intrinsic loss (and any extra ports) held fixed. `η = 1` is realised as
    /// an extrinsic rate 10¹⁵ times the remaining loss.
    pub fn with_eta_mw(&self, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidParameter(format!("eta_mw = {eta} not in [0, 1]")));
        }
        let other = self.kappa_i_mw + self.extra_mw_ports.iter().map(|p| p.0).sum::<f64>();
        let kappa_e = if other == 0.0 {
            if eta < 1.0 {
                return Err(Error::InvalidParameter("eta_mw < 1 needs a non-zero intrinsic loss".into()));
            }
            self.kappa_e_mw
        } else if eta == 1.0 {
            other * 1e15
        } else {
            other * eta / (1.0 - eta)
        };
        Ok(ModeSystem { kappa_e_mw: kappa_e, ..self.clone() })
    }

    pub fn validate(&self) -> Result<()> {
        let rates = [self.kappa_i_o, self.kappa_e_o, self.kappa_i_mw, self.kappa_e_mw, self.g];
        if rates.iter().chain(self.extra_mw_ports.iter().map(|p| &p.0)).any(|r| !(*r >= 0.0 && r.is_finite())) {
            return Err(Error::InvalidParameter("modes: all rates must be finite and >= 0".into()));
        }
        if self.extra_mw_ports.iter().any(|p| !(p.1 >= 0.0)) {
            return Err(Error::InvalidParameter("modes: port temperatures must be >= 0".into()));
        }
        if !(self.kappa_o() > 0.0 && self.kappa_mw() > 0.0) {
            return Err(Error::InvalidParameter("modes: total optical and microwave linewidths must be > 0".into()));
        }
        if !(self.omega_p > 0.0 && self.omega_mw > 0.0) {
            return Err(Error::InvalidParameter("modes: frequencies must be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Squeezed,
    Cat,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumState {
    pub kind: StateKind,
    pub alpha: f64,
    /// Displacement phase of the squeezed state, measured from the squeezed quadrature.
    pub phi_alpha: f64,
    pub r: f64,
    /// Relative phase of the cat superposition `|α⟩ + e^{iφ}|−α⟩`.
    pub phi: f64,
}

impl QuantumState {
    pub fn squeezed(alpha: f64, r: f64) -> Self {
        QuantumState { kind: StateKind::Squeezed, alpha, phi_alpha: 0.5 * PI, r, phi: 0.0 }
    }

    pub fn cat(alpha: f64, phi: f64) -> Self {
        QuantumState { kind: StateKind::Cat, alpha, phi_alpha: 0.0, r: 0.0, phi }
    }

    /// `|α = 1, r = 0.5⟩`.
    pub fn reference_squeezed() -> Self {
        Self::squeezed(1.0, 0.5)
    }

    /// `|1⟩ − |−1⟩`.
    pub fn reference_cat() -> Self {
        Self::cat(1.0, PI)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite() && self.r >= 0.0 && self.r.is_finite()) {
            return Err(Error::InvalidParameter("state: need finite alpha >= 0 and r >= 0".into()));
        }
        if !(self.phi.is_finite() && self.phi_alpha.is_finite()) {
            return Err(Error::InvalidParameter("state: phases must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseInput {
    pub n_bar_mw: f64,
}

/// Bose–Einstein occupancy `1/(e^{ħω/k_BT} − 1)`; zero for `T ≤ 0`.
pub fn bose_occupancy(t: f64, omega: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    1.0 / (HBAR * omega / (K_B * t)).exp_m1()
}

/// Temperature at which a mode of frequency `omega` holds `n` thermal quanta.
pub fn occupancy_temperature(n: f64, omega: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    HBAR * omega / (K_B * (1.0 / n).ln_1p())
}

/// Loss-rate weighted occupancy `(κ_i n_i + Σ κ_j n_j)/κ`.
pub fn total_occupancy(kappa_i: f64, n_i: f64, ports: &[(f64, f64)]) -> Result<f64> {
    let kappa: f64 = kappa_i + ports.iter().map(|p| p.0).sum::<f64>();
    if !(kappa > 0.0) {
        return Err(Error::InvalidParameter("total loss rate must be > 0".into()));
    }
    if kappa_i < 0.0 || n_i < 0.0 || ports.iter().any(|(k, n)| *k < 0.0 || *n < 0.0) {
        return Err(Error::InvalidParameter("rates and occupancies must be >= 0".into()));
    }
    Ok((kappa_i * n_i + ports.iter().map(|(k, n)| k * n).sum::<f64>()) / kappa)
}

/// Intracavity pump photons `n_p = (4η_o/κ_o)·P/(ħω_p)`.
pub fn pump_photon_number(power: f64, sys: &ModeSystem) -> Result<f64> {
    if !(power >= 0.0) {
        return Err(Error::NegativePower(power));
    }
    let kappa_o = sys.kappa_o();
    if !(kappa_o > 0.0) {
        return Err(Error::InvalidParameter("optical linewidth must be > 0".into()));
    }
    Ok(4.0 * sys.eta_o() / kappa_o * power / (HBAR * sys.omega_p))
}

/// Multi-photon cooperativity `4 n_p g²/(κ_o κ_Ω)`.
pub fn cooperativity(n_p: f64, sys: &ModeSystem) -> f64 {
    4.0 * n_p * sys.g * sys.g / (sys.kappa_o() * sys.kappa_mw())
}

/// Amplitude transmission `ε₃` and added noise `N` of the converter.
pub fn channel(c: f64, sys: &ModeSystem, noise: &NoiseInput) -> Result<(f64, f64)> {
    let (eta_o, eta_mw) = (sys.eta_o(), sys.eta_mw());
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidDomain(format!("cooperativity {c}")));
    }
    if !((0.0..=1.0).contains(&eta_o) && (0.0..=1.0).contains(&eta_mw)) {
        return Err(Error::InvalidDomain("coupling efficiencies must lie in [0, 1]".into()));
    }
    if !(noise.n_bar_mw >= 0.0 && noise.n_bar_mw.is_finite()) {
        return Err(Error::InvalidDomain(format!("thermal occupancy {}", noise.n_bar_mw)));
    }
    let t = 2.0 * (eta_o * eta_mw * c).sqrt() / (1.0 + c);
    let added = 4.0 * eta_mw * noise.n_bar_mw / (1.0 + c).powi(2);
    Ok((t, added))
}

fn check_unit(f: f64, what: &str) -> Result<f64> {
    if !f.is_finite() || !(-1e-9..=1.0 + 1e-9).contains(&f) {
        return Err(Error::InvalidDomain(format!("{what} fidelity {f} outside [0, 1]")));
    }
    Ok(f.clamp(0.0, 1.0))
}

/// Fidelity of a transferred displaced squeezed state.
pub fn fidelity_squeezed(state: &QuantumState, c: f64, sys: &ModeSystem, noise: &NoiseInput) -> Result<f64> {
    state.validate()?;
    let (t, n) = channel(c, sys, noise)?;
    Ok(squeezed_overlap(state.alpha, state.r, state.phi_alpha, t, n)).and_then(|f| check_unit(f, "squeezed"))
}

/// Overlap of `|α e^{iφ_α}, r⟩` with its image under transmission `t` and added noise `n`.
pub(crate) fn squeezed_overlap(alpha: f64, r: f64, phi_alpha: f64, t: f64, n: f64) -> f64 {
    let t2 = t * t;
    let t4 = t2 * t2;
    let e2 = 1.0 + (2.0 * r).cosh();
    let det = 0.5 * e2 * (1.0 - t4) + t4 + n * (e2 * (1.0 + t2) - 2.0 * t2) + n * n;
    let (em, ep) = ((-2.0 * r).exp(), (2.0 * r).exp());
    let v_x = em + 1.0 + t2 * (em - 1.0) + 2.0 * n;
    let v_p = ep + 1.0 + t2 * (ep - 1.0) + 2.0 * n;
    let (s, co) = phi_alpha.sin_cos();
    let exponent = -2.0 * alpha * alpha * (1.0 - t).powi(2) * (co * co / v_x + s * s / v_p);
    exponent.exp() / det.sqrt()
}

/// Fidelity of a transferred cat state `|α⟩ + e^{iφ}|−α⟩`.
pub fn fidelity_cat(state: &QuantumState, c: f64, sys: &ModeSystem, noise: &NoiseInput) -> Result<f64> {
    state.validate()?;
    let (t, n) = channel(c, sys, noise)?;
    cat_overlap(state.alpha, state.phi, t, n).and_then(|f| check_unit(f, "cat"))
}

fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 + x * x / 6.0
    } else {
        x.sinh() / x
    }
}

fn exprel(x: f64) -> f64 {
    if x.abs() < 1e-5 {
        1.0 + 0.5 * x + x * x / 6.0
    } else {
        x.exp_m1() / x
    }
}

/// Overlap of the cat with the cat of amplitude `tα` blurred by `n` quanta of
/// Gaussian noise, arranged so the odd cat stays accurate as `t → 0`.
pub(crate) fn cat_overlap(alpha: f64, phi: f64, t: f64, n: f64) -> Result<f64> {
    let a2 = alpha * alpha;
    let cph = phi.cos();
    let first = 1.0 + cph * (-2.0 * a2).exp();
    if first.abs() < 1e-300 {
        return Err(Error::InvalidDomain("cat normalisation vanishes (even cat with alpha = 0?)".into()));
    }
    let e5 = 1.0 + 2.0 * n;
    let k = 2.0 * a2 / (1.0 + e5);
    let t2 = t * t;
    let odd_part = |scale_t2: bool| -> f64 {
        // S at φ = π, optionally divided by t²
        let (sh, xa, xb) = if scale_t2 {
            let sh = 2.0 * k * k * sinhc(k * t).powi(2);
            let x = k * (e5 - 1.0);
            (sh, x * exprel(x * t2), -x * exprel(-x * t2))
        } else {
            (2.0 * (k * t).sinh().powi(2), (k * (e5 - 1.0) * t2).exp_m1(), (-k * (e5 - 1.0) * t2).exp_m1())
        };
        2.0 * ((-k).exp() * ((-k * t2).exp() * sh + (-k * e5 * t2).exp() * xa)
            + (-k * e5).exp() * ((-k * e5 * t2).exp() * sh + (-k * t2).exp() * xb))
    };
    let q = -(-2.0 * a2 * t2).exp_m1();
    let value = if cph == -1.0 {
        // both numerator and the output normalisation vanish like t²
        let s = odd_part(true);
        let second = 2.0 * a2 * exprel(-2.0 * a2 * t2);
        s / (first * second * (1.0 + e5))
    } else {
        let a1 = 2.0 * ((-k * (1.0 + e5 * t2)).exp() + (-k * (t2 + e5)).exp());
        let a2_term = (-k * (e5 * (1.0 + t2) + 2.0 * t)).exp();
        let s = odd_part(false) + (1.0 + cph) * (a1 + 2.0 * (cph - 1.0) * a2_term);
        let second = (1.0 + cph) - cph * q;
        if second.abs() < 1e-300 {
            return Err(Error::InvalidDomain("output cat normalisation vanishes".into()));
        }
        s / (first * second * (1.0 + e5))
    };
    Ok(value)
}

/// Fidelity for either state kind.
pub fn fidelity(state: &QuantumState, c: f64, sys: &ModeSystem, noise: &NoiseInput) -> Result<f64> {
    match state.kind {
        StateKind::Squeezed => fidelity_squeezed(state, c, sys, noise),
        StateKind::Cat => fidelity_cat(state, c, sys, noise),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ideal() -> ModeSystem {
        ModeSystem { kappa_i_o: 0.0, kappa_i_mw: 0.0, ..ModeSystem::default() }
    }

    const NO_NOISE: NoiseInput = NoiseInput { n_bar_mw: 0.0 };

    #[test]
    fn bose_examples() {
        let om = TWO_PI * 10e9;
        assert_eq!(bose_occupancy(0.0, om), 0.0);
        let t1 = occupancy_temperature(1.0, om);
        assert!((t1 - 0.6925).abs() < 5e-4, "{t1}");
        assert!((bose_occupancy(t1, om) - 1.0).abs() < 1e-12);
        let n = bose_occupancy(0.02, om);
        assert!(n > 3e-11 && n < 4.5e-11);
    }

    #[test]
    fn bose_monotone() {
        let om = TWO_PI * 10e9;
        let v: Vec<f64> = (1..200).map(|k| bose_occupancy(k as f64 * 5e-3, om)).collect();
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        let w: Vec<f64> = (1..200).map(|k| bose_occupancy(0.2, TWO_PI * k as f64 * 1e8)).collect();
        assert!(w.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn occupancy_weights() {
        assert!((total_occupancy(1.0, 0.3, &[(1.0, 0.3)]).unwrap() - 0.3).abs() < 1e-15);
        assert!((total_occupancy(1.0, 0.08, &[(1.0, 0.0)]).unwrap() - 0.04).abs() < 1e-15);
        let n = total_occupancy(TWO_PI * 32.4e6, 0.1, &[(TWO_PI * 7.2e6, 0.0)]).unwrap();
        assert!((n - 0.1 * 32.4 / 39.6).abs() < 1e-12);
        assert!(total_occupancy(0.0, 1.0, &[(0.0, 1.0)]).is_err());
    }

    #[test]
    fn pump_and_cooperativity() {
        let sys = ModeSystem::default();
        assert_eq!(pump_photon_number(0.0, &sys).unwrap(), 0.0);
        let np = pump_photon_number(1e-3, &sys).unwrap();
        assert!((np / 1.78e9 - 1.0).abs() < 0.01, "{np}");
        assert!((pump_photon_number(2e-3, &sys).unwrap() / np - 2.0).abs() < 1e-12);
        assert_eq!(cooperativity(0.0, &sys), 0.0);
        let c = cooperativity(np, &sys);
        assert!((cooperativity(2.0 * np, &sys) / c - 2.0).abs() < 1e-12);
        assert!((cooperativity(np, &sys.with_g(2.0 * sys.g)) / c - 4.0).abs() < 1e-12);
        assert!(c < 1.0);
    }

    #[test]
    fn eta_changes_extrinsic_rate_only() {
        let sys = ModeSystem::default();
        for eta in [0.0, 0.3, 7.2 / 39.6, 0.9, 1.0] {
            let s = sys.with_eta_mw(eta).unwrap();
            assert_eq!(s.kappa_i_mw, sys.kappa_i_mw);
            assert!((s.eta_mw() - eta).abs() < 1e-12);
        }
        let back = sys.with_eta_mw(sys.eta_mw()).unwrap();
        assert!((back.kappa_e_mw / sys.kappa_e_mw - 1.0).abs() < 1e-12);
        assert!(sys.with_eta_mw(1.5).is_err());
        assert!(ideal().with_eta_mw(1.0).is_ok());
    }

    #[test]
    fn ideal_conversion_is_perfect() {
        let sys = ideal();
        for s in [QuantumState::reference_squeezed(), QuantumState::reference_cat(), QuantumState::cat(1.3, 0.4)] {
            let f = fidelity(&s, 1.0, &sys, &NO_NOISE).unwrap();
            assert!((f - 1.0).abs() < 1e-12, "{s:?} {f}");
        }
    }

    #[test]
    fn vacuum_is_transferred_perfectly() {
        let vac = QuantumState::squeezed(0.0, 0.0);
        for c in [0.0, 0.1, 2.0] {
            let f = fidelity_squeezed(&vac, c, &ModeSystem::default(), &NO_NOISE).unwrap();
            assert!((f - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn odd_cat_without_conversion() {
        let f = fidelity_cat(&QuantumState::reference_cat(), 0.0, &ModeSystem::default(), &NO_NOISE).unwrap();
        let a2: f64 = 1.0;
        let expect = 2.0 * a2 * (-a2).exp() / (1.0 - (-2.0 * a2).exp());
        assert!((f - expect).abs() < 1e-12);
        assert!((f - 0.85092).abs() < 1e-5);
        // continuous as t → 0
        let near = cat_overlap(1.0, PI, 1e-7, 0.0).unwrap();
        assert!((near - expect).abs() < 1e-9);
        let almost_odd = cat_overlap(1.0, PI - 1e-9, 1e-3, 0.0).unwrap();
        assert!((almost_odd - cat_overlap(1.0, PI, 1e-3, 0.0).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn degenerate_normalisation() {
        assert!(matches!(cat_overlap(0.0, PI, 0.5, 0.0), Err(Error::InvalidDomain(_))));
        assert!(cat_overlap(0.0, 0.0, 0.5, 0.0).is_ok());
    }

    #[test]
    fn monotone_in_noise() {
        let sys = ModeSystem::default();
        for state in [QuantumState::reference_squeezed(), QuantumState::reference_cat()] {
            for c in [0.0, 0.01, 0.3, 1.0, 3.0] {
                let f: Vec<f64> = (0..=32)
                    .map(|k| fidelity(&state, c, &sys, &NoiseInput { n_bar_mw: k as f64 / 32.0 }).unwrap())
                    .collect();
                assert!(f.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{state:?} C={c} {f:?}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]
        #[test]
        fn fidelities_in_unit_interval(
            alpha in 0.0f64..3.0, r in 0.0f64..1.5, phi in 0.0f64..(2.0 * PI), pa in 0.0f64..(2.0 * PI),
            c in 0.0f64..20.0, eo in 0.0f64..1.0, em in 0.0f64..1.0, nb in 0.0f64..5.0,
        ) {
            let sys = ModeSystem { kappa_i_o: 1.0 - eo, kappa_e_o: eo, kappa_i_mw: 1.0 - em, kappa_e_mw: em, ..ModeSystem::default() };
            let noise = NoiseInput { n_bar_mw: nb };
            let sq = QuantumState { phi_alpha: pa, ..QuantumState::squeezed(alpha, r) };
            let f = fidelity_squeezed(&sq, c, &sys, &noise).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
            if (1.0 + phi.cos() * (-2.0 * alpha * alpha).exp()).abs() > 1e-6 {
                let f = fidelity_cat(&QuantumState::cat(alpha, phi), c, &sys, &noise).unwrap();
                prop_assert!((0.0..=1.0).contains(&f));
            }
        }
    }
}
