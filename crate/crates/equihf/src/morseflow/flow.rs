//! Flow lines of `-∇f` for the round metric, where
//! `w(s) = (ν_0, e^{-2s} ν_1, e^{-4s} ν_2, ...) / ‖...‖`.

use serde::Serialize;

use super::strata::Sign;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowPoint {
    pub i: usize,
    pub sigma: Sign,
    /// `(ν_1/ν_0, ..., ν_{i-1}/ν_0)`.
    pub coords: Vec<f64>,
    /// `w(0)`, normalized so that `ν_i = σ ν_0`.
    pub start: Vec<f64>,
}

impl FlowPoint {
    pub fn at(&self, s: f64) -> Vec<f64> {
        let raw: Vec<f64> = self.start.iter().enumerate().map(|(k, v)| v * (-2.0 * k as f64 * s).exp()).collect();
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        raw.into_iter().map(|x| x / norm).collect()
    }

    pub fn sample(&self, from: f64, to: f64, count: usize) -> Vec<Vec<f64>> {
        (0..count).map(|k| self.at(from + (to - from) * k as f64 / (count.max(2) - 1) as f64)).collect()
    }

    /// The unstable end `v^{i,σ}` and the stable end `v^{0,+}`.
    pub fn limits(&self) -> (Vec<f64>, Vec<f64>) {
        let mut minus = vec![0.0; self.i + 1];
        minus[self.i] = self.sigma.as_i8() as f64;
        let mut plus = vec![0.0; self.i + 1];
        plus[0] = 1.0;
        (minus, plus)
    }
}

pub fn flow_chart(i: usize, sigma: Sign, coords: &[f64]) -> Result<FlowPoint> {
    if i == 0 {
        return Err(Error::Range("flow lines need i >= 1".into()));
    }
    if coords.len() + 1 != i {
        return Err(Error::Structure(format!("a chart point of Q^{{{i},{sigma}}} has {} coordinates, got {}", i - 1, coords.len())));
    }
    let mut start = Vec::with_capacity(i + 1);
    start.push(1.0);
    start.extend_from_slice(coords);
    start.push(sigma.as_i8() as f64);
    let norm = start.iter().map(|x| x * x).sum::<f64>().sqrt();
    start.iter_mut().for_each(|x| *x /= norm);
    Ok(FlowPoint { i, sigma, coords: coords.to_vec(), start })
}

/// Recovers `(σ, coords)` from any point `w(s)` of a flow line in `Q^{i,σ}`.
pub fn chart_inverse(w: &[f64]) -> Result<(usize, Sign, Vec<f64>)> {
    let i = w.iter().rposition(|x| x.abs() > 0.0).ok_or_else(|| Error::Precondition("zero vector".into()))?;
    if i == 0 || w[0] <= 0.0 {
        return Err(Error::Precondition("the point is not on a flow line to v^{0,+}".into()));
    }
    let ratio = w[i] / w[0];
    let sigma = if ratio > 0.0 { Sign::Plus } else { Sign::Minus };
    // ratio = σ e^{-2is}, so e^{2s} = |ratio|^{-1/i}.
    let e2s = ratio.abs().powf(-1.0 / i as f64);
    let coords = (1..i).map(|k| w[k] / w[0] * e2s.powi(k as i32)).collect();
    Ok((i, sigma, coords))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_line() {
        let p = flow_chart(1, Sign::Minus, &[]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((p.start[0] - h).abs() < 1e-15 && (p.start[1] + h).abs() < 1e-15);
    }

    #[test]
    fn round_trip_and_limits() {
        let p = flow_chart(3, Sign::Plus, &[0.3, -1.2]).unwrap();
        for s in [-2.0, 0.0, 0.7] {
            let w = p.at(s);
            assert!((w.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
            let (i, sigma, c) = chart_inverse(&w).unwrap();
            assert_eq!((i, sigma), (3, Sign::Plus));
            assert!(c.iter().zip(&p.coords).all(|(a, b)| (a - b).abs() < 1e-9));
        }
        let (minus, plus) = p.limits();
        let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        assert!(dist(&p.at(-20.0), &minus) < 1e-6);
        assert!(dist(&p.at(20.0), &plus) < 1e-6);
        let q = flow_chart(2, Sign::Minus, &[0.0]).unwrap();
        assert!(q.sample(-3.0, 3.0, 9).iter().all(|w| w[1] == 0.0));
    }
}
