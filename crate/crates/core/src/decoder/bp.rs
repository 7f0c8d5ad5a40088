use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::matrix::BitMatrix;

use super::{prior_llr, DecodeOutcome, DecoderConfig};

/// Stand-in for the empty minimum on degree-1 checks.
const FORCED: f64 = 1e9;

/// Flooding min-sum decoder on the Tanner graph of one check matrix.
#[derive(Clone)]
pub struct BpDecoder {
    h: BitMatrix,
    /// Edges grouped by check: check `j` owns `edge_start[j]..edge_start[j + 1]`.
    edge_start: Vec<usize>,
    edge_var: Vec<usize>,
    var_edges: Vec<Vec<usize>>,
    to_check: Vec<f64>,
    to_var: Vec<f64>,
}

impl BpDecoder {
    pub fn new(h: &BitMatrix) -> Self {
        let mut edge_start = Vec::with_capacity(h.rows() + 1);
        let mut edge_var = Vec::new();
        let mut var_edges = vec![Vec::new(); h.cols()];
        for j in 0..h.rows() {
            edge_start.push(edge_var.len());
            for i in h.row(j).ones_iter() {
                var_edges[i].push(edge_var.len());
                edge_var.push(i);
            }
        }
        edge_start.push(edge_var.len());
        let edges = edge_var.len();
        BpDecoder {
            h: h.clone(),
            edge_start,
            edge_var,
            var_edges,
            to_check: vec![0.0; edges],
            to_var: vec![0.0; edges],
        }
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.h
    }

    pub fn cols(&self) -> usize {
        self.h.cols()
    }

    /// Runs min-sum from per-bit prior LLRs. The estimate is the hard decision
    /// of the last iteration (bit set when its posterior LLR is `<= 0`).
    pub fn run(&mut self, syndrome: &BitVec, prior: &[f64], cfg: &DecoderConfig) -> Result<DecodeOutcome> {
        let (m, n) = (self.h.rows(), self.h.cols());
        if syndrome.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: syndrome.len() });
        }
        if prior.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: prior.len() });
        }
        for (e, &i) in self.edge_var.iter().enumerate() {
            self.to_check[e] = prior[i];
        }
        let mut soft = prior.to_vec();
        let mut hard = BitVec::zeros(n);
        for it in 1..=cfg.max_iter {
            for j in 0..m {
                let (lo, hi) = (self.edge_start[j], self.edge_start[j + 1]);
                let mut negative = syndrome.get(j);
                let (mut min1, mut min2, mut arg) = (f64::INFINITY, f64::INFINITY, usize::MAX);
                for e in lo..hi {
                    let q = self.to_check[e];
                    negative ^= q < 0.0;
                    let a = q.abs();
                    if a < min1 {
                        min2 = min1;
                        min1 = a;
                        arg = e;
                    } else if a < min2 {
                        min2 = a;
                    }
                }
                for e in lo..hi {
                    let q = self.to_check[e];
                    let mag = if e == arg { min2 } else { min1 };
                    let mag = if mag.is_finite() { mag } else { FORCED };
                    let neg = negative ^ (q < 0.0);
                    self.to_var[e] = if neg { -cfg.ms_scale * mag } else { cfg.ms_scale * mag };
                }
            }
            for i in 0..n {
                let total = prior[i] + self.var_edges[i].iter().map(|&e| self.to_var[e]).sum::<f64>();
                soft[i] = total;
                for &e in &self.var_edges[i] {
                    self.to_check[e] = total - self.to_var[e];
                }
                hard.set(i, total <= 0.0);
            }
            if self.satisfies(&hard, syndrome) {
                return Ok(DecodeOutcome {
                    estimate: hard,
                    soft,
                    bp_converged: true,
                    osd_used: false,
                    iterations: it,
                });
            }
        }
        Ok(DecodeOutcome {
            estimate: hard,
            soft,
            bp_converged: false,
            osd_used: false,
            iterations: cfg.max_iter,
        })
    }

    fn satisfies(&self, e: &BitVec, syndrome: &BitVec) -> bool {
        (0..self.h.rows()).all(|j| {
            let parity = self.edge_start[j]..self.edge_start[j + 1];
            parity.fold(false, |acc, k| acc ^ e.get(self.edge_var[k])) == syndrome.get(j)
        })
    }
}

/// One-shot min-sum with per-bit error probabilities `prior`.
pub fn bp_minsum(h: &BitMatrix, syndrome: &BitVec, prior: &[f64], cfg: &DecoderConfig) -> Result<DecodeOutcome> {
    cfg.validate()?;
    let llr: Vec<f64> = prior.iter().map(|&p| prior_llr(p)).collect();
    BpDecoder::new(h).run(syndrome, &llr, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_syndrome_converges_immediately() {
        let h = BitMatrix::from_strs(&["1100", "0110", "0011"]).unwrap();
        let out = bp_minsum(&h, &BitVec::zeros(3), &[0.01; 4], &DecoderConfig::default()).unwrap();
        assert!(out.estimate.is_zero());
        assert!(out.bp_converged);
        assert_eq!(out.iterations, 1);
    }

    #[test]
    fn forced_single_bit() {
        let h = BitMatrix::identity(1);
        let s = BitVec::from_support(1, &[0]);
        let out = bp_minsum(&h, &s, &[0.01], &DecoderConfig::default()).unwrap();
        assert_eq!(out.estimate, s);
        assert!(out.bp_converged);
    }

    #[test]
    fn repetition_code_single_flip() {
        let h = BitMatrix::from_strs(&["11000", "01100", "00110", "00011"]).unwrap();
        let e = BitVec::from_support(5, &[2]);
        let s = h.mul_vec(&e).unwrap();
        let out = bp_minsum(&h, &s, &[0.05; 5], &DecoderConfig::default()).unwrap();
        assert_eq!(out.estimate, e);
    }

    #[test]
    fn rejects_wrong_lengths() {
        let h = BitMatrix::identity(2);
        assert!(bp_minsum(&h, &BitVec::zeros(3), &[0.1; 2], &DecoderConfig::default()).is_err());
        assert!(bp_minsum(&h, &BitVec::zeros(2), &[0.1; 3], &DecoderConfig::default()).is_err());
    }
}
