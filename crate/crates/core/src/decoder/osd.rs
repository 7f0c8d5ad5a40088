use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::matrix::BitMatrix;

use super::{DecodeOutcome, DecoderConfig, OsdMode};

/// Ordered-statistics decoding from posterior LLRs `soft` (lower means more
/// likely flipped).
///
/// Columns are ranked by `soft` ascending (ties by index) and the first
/// independent ones form the information set. Order 0 solves on that set; the
/// sweep also tries every single flip outside it and every pair among its
/// first `osd_order` outside columns, keeping the candidate with the least
/// total LLR. The result always satisfies the syndrome.
pub fn osd_postprocess(h: &BitMatrix, syndrome: &BitVec, soft: &[f64], cfg: &DecoderConfig) -> Result<DecodeOutcome> {
    let (m, n) = (h.rows(), h.cols());
    if syndrome.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: syndrome.len() });
    }
    if soft.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: soft.len() });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| soft[a].total_cmp(&soft[b]).then(a.cmp(&b)));

    let aug = BitMatrix::from_fn(m, n + 1, |i, j| if j < n { h.get(i, j) } else { syndrome.get(i) });
    let ech = aug.echelon_with_order(&order);
    let rank = ech.pivots.len();
    if (rank..m).any(|i| ech.matrix.get(i, n)) {
        return Err(Error::InconsistentSyndrome);
    }
    let reduced_syndrome = ech.matrix.column(n);
    let mut is_pivot = vec![false; n];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = order.iter().copied().filter(|&c| !is_pivot[c]).collect();

    let pivot_cost = |assign: &BitVec| -> f64 { assign.ones_iter().map(|r| soft[ech.pivots[r]]).sum() };
    let mut best_flips: Vec<usize> = Vec::new();
    let mut best_assign = reduced_syndrome.clone();
    let mut best_cost = pivot_cost(&best_assign);

    if cfg.osd_mode == OsdMode::Sweep && !free.is_empty() {
        let cols: Vec<BitVec> = free.iter().map(|&c| ech.matrix.column(c)).collect();
        let mut consider = |flips: &[usize], assign: BitVec| {
            let cost = pivot_cost(&assign) + flips.iter().map(|&f| soft[free[f]]).sum::<f64>();
            if cost < best_cost {
                best_cost = cost;
                best_assign = assign;
                best_flips = flips.iter().map(|&f| free[f]).collect();
            }
        };
        for (a, col) in cols.iter().enumerate() {
            consider(&[a], reduced_syndrome.xor(col));
        }
        let width = cfg.order_or(0).min(free.len());
        for (a, col_a) in cols[..width].iter().enumerate() {
            let base = reduced_syndrome.xor(col_a);
            for (b, col_b) in cols[..width].iter().enumerate().skip(a + 1) {
                consider(&[a, b], base.xor(col_b));
            }
        }
    }

    let mut estimate = BitVec::zeros(n);
    for r in best_assign.ones_iter() {
        estimate.set(ech.pivots[r], true);
    }
    for f in best_flips {
        estimate.set(f, true);
    }
    Ok(DecodeOutcome {
        estimate,
        soft: soft.to_vec(),
        bp_converged: false,
        osd_used: true,
        iterations: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unique_weight_one_solution() {
        let h = BitMatrix::from_strs(&["100", "110", "111"]).unwrap();
        let e = BitVec::from_support(3, &[1]);
        let s = h.mul_vec(&e).unwrap();
        let cfg = DecoderConfig::default().with_osd_order(2);
        for soft in [[5.0, -1.0, 3.0], [-4.0, 9.0, -2.0]] {
            let out = osd_postprocess(&h, &s, &soft, &cfg).unwrap();
            assert_eq!(out.estimate, e);
        }
    }

    #[test]
    fn order0_leaves_free_bits_zero() {
        let h = BitMatrix::from_strs(&["1100", "0110", "0011"]).unwrap();
        let s = BitVec::from_support(3, &[1]);
        let cfg = DecoderConfig { osd_mode: OsdMode::Order0, ..Default::default() };
        let soft = [1.0, 2.0, 3.0, 4.0];
        let out = osd_postprocess(&h, &s, &soft, &cfg).unwrap();
        assert_eq!(h.mul_vec(&out.estimate).unwrap(), s);
        assert!(!out.estimate.get(3));
    }

    #[test]
    fn inconsistent_syndrome_is_reported() {
        let h = BitMatrix::from_strs(&["11", "11"]).unwrap();
        let s = BitVec::from_support(2, &[0]);
        assert_eq!(
            osd_postprocess(&h, &s, &[1.0, 1.0], &DecoderConfig::default()),
            Err(Error::InconsistentSyndrome)
        );
    }
}
