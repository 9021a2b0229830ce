//! Replica estimates and exact mass-transport bookkeeping.

use crate::error::{Error, Result};
use crate::graph::{VertexId, Window};

/// Mean and standard error over independent replicas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateReport {
    pub mean: f64,
    /// `None` with a single replica.
    pub se: Option<f64>,
    pub n: usize,
}

impl EstimateReport {
    /// Standard error, or 0 when undefined.
    pub fn se_or_zero(&self) -> f64 {
        self.se.unwrap_or(0.0)
    }
}

pub fn estimate(values: &[f64]) -> Result<EstimateReport> {
    let n = values.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let se = (n >= 2).then(|| {
        let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    });
    Ok(EstimateReport { mean, se, n })
}

/// A configuration-dependent rule saying how much mass each vertex sends
/// to which vertices.
pub trait TransportRule {
    /// Appends `(receiver, mass)` pairs sent by `from`.
    fn sends(&self, w: &Window, from: VertexId, out: &mut Vec<(VertexId, f64)>);
}

/// Each vertex sends 1 to each neighbour.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeighborRule;

impl TransportRule for NeighborRule {
    fn sends(&self, w: &Window, from: VertexId, out: &mut Vec<(VertexId, f64)>) {
        out.extend(w.neighbors(from).iter().map(|&(y, _)| (y, 1.0)));
    }
}

/// Average mass sent and average mass received per vertex. On a finite
/// window both are the same double sum, so they agree up to rounding.
pub fn mtp_check(w: &Window, rule: &dyn TransportRule) -> Result<(f64, f64)> {
    if !w.wrap() {
        return Err(Error::NotTransitive);
    }
    let n = w.len();
    let mut received = vec![0.0f64; n];
    let mut sent = 0.0f64;
    let mut buf = Vec::new();
    for v in 0..n as VertexId {
        buf.clear();
        rule.sends(w, v, &mut buf);
        for &(y, m) in &buf {
            sent += m;
            received[y as usize] += m;
        }
    }
    let got: f64 = received.iter().sum();
    Ok((sent / n as f64, got / n as f64))
}

/// Received mass per vertex under `rule`.
pub fn received_mass(w: &Window, rule: &dyn TransportRule) -> Vec<f64> {
    let mut received = vec![0.0f64; w.len()];
    let mut buf = Vec::new();
    for v in 0..w.len() as VertexId {
        buf.clear();
        rule.sends(w, v, &mut buf);
        for &(y, m) in &buf {
            received[y as usize] += m;
        }
    }
    received
}
