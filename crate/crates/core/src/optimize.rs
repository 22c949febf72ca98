//! Bracketed golden-section maximisation of a scalar objective.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub argmax: f64,
    pub value: f64,
    /// The maximum sits on an end of the search interval.
    pub at_boundary: bool,
    /// Number of objective evaluations.
    pub evaluations: usize,
}

const ZOOM_LEVELS: usize = 4;

/// Scans `points` (≥ 17) equally spaced values on `[lo, hi]`, then refines
/// the best grid point by golden-section search to `tol` in x.
pub fn maximize<F>(mut f: F, lo: f64, hi: f64, points: usize, tol: f64) -> Result<Maximum>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidParameter(format!("bounds [{lo}, {hi}] are not a valid interval")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tol must be > 0".into()));
    }
    let points = points.max(17);
    let mut eval = |x: f64| -> Result<f64> {
        let v = f(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteObjective(x))
        }
    };
    let mut xs: Vec<f64> = (0..points).map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64).collect();
    let mut ys = Vec::with_capacity(points);
    for &x in &xs {
        ys.push(eval(x)?);
    }
    let mut evaluations = points;
    let mut best = (0..points).fold(0, |b, k| if ys[k] > ys[b] { k } else { b });
    // A peak narrower than one grid cell can hide next to an end; zoom into
    // the end cell a few times before calling the optimum a boundary one.
    for _ in 0..ZOOM_LEVELS {
        let end = match best {
            0 => 0,
            k if k == points - 1 => k,
            _ => break,
        };
        let (x0, x1) = if end == 0 { (xs[0], xs[1]) } else { (xs[end - 1], xs[end]) };
        let y_end = ys[end];
        xs = (0..points).map(|k| x0 + (x1 - x0) * k as f64 / (points - 1) as f64).collect();
        for k in 0..points {
            ys[k] = if k == end { y_end } else { eval(xs[k])? };
        }
        evaluations += points - 1;
        // ties go to the end point so the scan keeps zooming there
        best = (0..points).fold(end, |b, k| if ys[k] > ys[b] { k } else { b });
    }
    if best == 0 || best == points - 1 {
        return Ok(Maximum { argmax: xs[best], value: ys[best], at_boundary: true, evaluations });
    }
    let local_peaks = (1..points - 1).filter(|&k| ys[k] > ys[k - 1] && ys[k] >= ys[k + 1]).count();
    if local_peaks > 1 {
        log::warn!("objective is not unimodal on the grid ({local_peaks} peaks); refining around the grid maximum");
    }
    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (xs[best - 1], xs[best + 1]);
    let mut c = b - invphi * (b - a);
    let mut d = a + invphi * (b - a);
    let (mut fc, mut fd) = (eval(c)?, eval(d)?);
    evaluations += 2;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = eval(d)?;
        }
        evaluations += 1;
    }
    let (mut argmax, mut value) = if fc >= fd { (c, fc) } else { (d, fd) };
    if ys[best] > value {
        argmax = xs[best];
        value = ys[best];
    }
    Ok(Maximum { argmax, value, at_boundary: false, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_maximum() {
        let m = maximize(|x| Ok(-(x - 0.37).powi(2) + 2.0), 0.0, 1.0, 17, 1e-8).unwrap();
        assert!((m.argmax - 0.37).abs() < 1e-8);
        assert!((m.value - 2.0).abs() < 1e-12);
        assert!(!m.at_boundary);
    }

    #[test]
    fn boundary_optimum_flagged() {
        let m = maximize(|x| Ok(-x), 0.0, 1.5e-3, 17, 1e-9).unwrap();
        assert!(m.at_boundary);
        assert_eq!(m.argmax, 0.0);
    }

    #[test]
    fn narrow_peak_next_to_an_end_is_found() {
        let f = |x: f64| 1.0 - x + 5.0 * x * (-x / 0.005).exp();
        // the same curve mirrored onto the upper end
        for (lo, hi, sign) in [(0.0, 1.0, 1.0), (-1.0, 0.0, -1.0)] {
            let m = maximize(|x| Ok(f(sign * x)), lo, hi, 17, 1e-10).unwrap();
            assert!(!m.at_boundary);
            assert!(m.value > 1.004, "{m:?}");
            assert!((0.002..0.005).contains(&m.argmax.abs()), "{m:?}");
        }
    }

    #[test]
    fn errors() {
        assert!(maximize(Ok, 1.0, 0.0, 17, 1e-6).is_err());
        assert!(maximize(Ok, 0.0, 1.0, 17, 0.0).is_err());
        let e = maximize(|x| Ok(if x > 0.5 { f64::NAN } else { x }), 0.0, 1.0, 17, 1e-6).unwrap_err();
        assert!(matches!(e, Error::NonFiniteObjective(_)));
    }
}
