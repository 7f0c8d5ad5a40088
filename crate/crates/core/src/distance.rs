//! Exact CSS minimum distance by enumeration.
//!
//! X-type logicals are vectors of `ker(hz)` outside `rowspace(hx)`; such a
//! vector always pairs to 1 with some Z-logical representative, which is how
//! membership is tested during enumeration (and symmetrically for Z).

use serde::Serialize;

use crate::bits::{words_for, BitVec};
use crate::code::{logical_basis_of, CssCode};
use crate::error::{Error, Result};
use crate::matrix::BitMatrix;
use crate::par::{map_indexed, Execution};

/// Default cap on enumerated vectors per sector.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

const PREFIX_BITS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sector {
    X,
    Z,
}

/// A minimum-weight logical operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub sector: Sector,
    pub support: BitVec,
}

impl Witness {
    /// `2n`-bit symplectic form, X part then Z part.
    pub fn symplectic(&self) -> BitVec {
        let zeros = BitVec::zeros(self.support.len());
        match self.sector {
            Sector::X => self.support.concat(&zeros),
            Sector::Z => zeros.concat(&self.support),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceResult {
    /// The distance when `exact`, otherwise a lower bound.
    pub d: usize,
    pub exact: bool,
    pub witness: Option<Witness>,
    /// Largest kernel dimension fully enumerated (0 for the weight-ordered search).
    pub exhausted_dim: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceOptions {
    /// Only look for logicals of weight below `cap`; report `>= cap` otherwise.
    pub cap: Option<usize>,
    /// Maximum number of vectors examined per sector.
    pub budget: u64,
    pub exec: Execution,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        DistanceOptions {
            cap: None,
            budget: DEFAULT_BUDGET,
            exec: Execution::default(),
        }
    }
}

pub fn min_distance(code: &CssCode, cap: Option<usize>) -> Result<DistanceResult> {
    min_distance_with(
        code,
        &DistanceOptions {
            cap,
            ..DistanceOptions::default()
        },
    )
}

pub fn min_distance_with(code: &CssCode, opts: &DistanceOptions) -> Result<DistanceResult> {
    css_distance(code.hx(), code.hz(), opts)
}

/// Distance of the CSS code with checks `hx`, `hz`.
pub fn css_distance(hx: &BitMatrix, hz: &BitMatrix, opts: &DistanceOptions) -> Result<DistanceResult> {
    let basis = logical_basis_of(hx, hz)?;
    let n = hx.cols();
    let sectors = [
        SectorData::new(Sector::X, hz, &basis.lz),
        SectorData::new(Sector::Z, hx, &basis.lx),
    ];
    if let Some(cap) = opts.cap {
        return weight_ordered(&sectors, cap, opts);
    }
    let dims: Vec<usize> = sectors.iter().map(|s| s.kernel.len()).collect();
    if dims.iter().any(|&k| k >= 64 || (1u64 << k) > opts.budget) {
        return weight_ordered(&sectors, n + 1, opts);
    }
    let mut best: Option<(usize, Witness)> = None;
    for s in &sectors {
        let (w, support) = s.exhaustive(opts.exec);
        if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
            best = Some((w, Witness { sector: s.sector, support }));
        }
    }
    let (d, witness) = best.expect("two sectors");
    Ok(DistanceResult {
        d,
        exact: true,
        witness: Some(witness),
        exhausted_dim: dims.into_iter().max().unwrap_or(0),
    })
}

struct SectorData {
    sector: Sector,
    n: usize,
    vec_words: usize,
    /// Kernel basis rows packed as `[vector words | pairing mask words]`.
    kernel: Vec<Vec<u64>>,
    /// Check columns packed as `[syndrome words | pairing mask words]`.
    columns: Vec<Vec<u64>>,
    syn_words: usize,
}

impl SectorData {
    /// `checks` are the opposite-type checks whose kernel holds the logicals;
    /// `dual` are the opposite-type logical representatives.
    fn new(sector: Sector, checks: &BitMatrix, dual: &BitMatrix) -> Self {
        let n = checks.cols();
        let vec_words = words_for(n);
        let kernel = checks
            .kernel()
            .row_iter()
            .map(|v| {
                let mut w = v.words().to_vec();
                w.extend(pairing_mask(dual, &v));
                w
            })
            .collect();
        let syn_words = words_for(checks.rows());
        let columns = (0..n)
            .map(|j| {
                let mut w = checks.column(j).words().to_vec();
                w.extend(dual.column(j).words());
                w
            })
            .collect();
        SectorData {
            sector,
            n,
            vec_words,
            kernel,
            columns,
            syn_words,
        }
    }

    /// Minimum weight over the whole kernel span, with a deterministic witness.
    fn exhaustive(&self, exec: Execution) -> (usize, BitVec) {
        let dim = self.kernel.len();
        let prefix = dim.min(PREFIX_BITS);
        let low = dim - prefix;
        let row_len = self.kernel.first().map_or(0, Vec::len);
        let results = map_indexed(exec, 1usize << prefix, |chunk| {
            let mut cur = vec![0u64; row_len];
            for b in 0..prefix {
                if chunk >> b & 1 == 1 {
                    xor_into(&mut cur, &self.kernel[low + b]);
                }
            }
            let mut best: Option<(usize, u64)> = None;
            let mut consider = |cur: &[u64], step: u64| {
                if cur[self.vec_words..].iter().any(|&w| w != 0) {
                    let wt = popcount(&cur[..self.vec_words]);
                    if best.is_none_or(|(bw, _)| wt < bw) {
                        best = Some((wt, step));
                    }
                }
            };
            consider(&cur, 0);
            for step in 1..(1u64 << low) {
                xor_into(&mut cur, &self.kernel[step.trailing_zeros() as usize]);
                consider(&cur, step);
            }
            best
        });
        let (chunk, (w, step)) = results
            .into_iter()
            .enumerate()
            .filter_map(|(c, r)| r.map(|r| (c, r)))
            .min_by_key(|&(c, (w, _))| (w, c))
            .expect("a code with k >= 1 has a logical in each sector");
        let gray = step ^ (step >> 1);
        let mut v = vec![0u64; self.vec_words];
        for b in 0..low {
            if gray >> b & 1 == 1 {
                xor_into(&mut v, &self.kernel[b][..self.vec_words]);
            }
        }
        for b in 0..prefix {
            if chunk >> b & 1 == 1 {
                xor_into(&mut v, &self.kernel[low + b][..self.vec_words]);
            }
        }
        (w, BitVec::from_words(self.n, v))
    }

    /// First logical of exactly weight `w` in lexicographic support order.
    fn search_weight(&self, w: usize, exec: Execution) -> Option<BitVec> {
        let n = self.n;
        if w == 0 || w > n {
            return None;
        }
        let row_len = self.columns[0].len();
        let found = map_indexed(exec, n - w + 1, |first| {
            let mut support = vec![first; w];
            let mut acc = vec![vec![0u64; row_len]; w];
            acc[0].copy_from_slice(&self.columns[first]);
            self.dfs(1, &mut support, &mut acc).then_some(support)
        });
        found
            .into_iter()
            .flatten()
            .next()
            .map(|s| BitVec::from_support(n, &s))
    }

    /// Fills `support[depth..]`; `acc[i]` holds the XOR of the first `i + 1` columns.
    fn dfs(&self, depth: usize, support: &mut [usize], acc: &mut [Vec<u64>]) -> bool {
        let w = support.len();
        if depth == w {
            let top = &acc[w - 1];
            let syn_zero = top[..self.syn_words].iter().all(|&x| x == 0);
            return syn_zero && top[self.syn_words..].iter().any(|&x| x != 0);
        }
        let remaining = w - depth;
        for j in support[depth - 1] + 1..=self.n - remaining {
            let (done, rest) = acc.split_at_mut(depth);
            rest[0].copy_from_slice(&done[depth - 1]);
            xor_into(&mut rest[0], &self.columns[j]);
            support[depth] = j;
            if self.dfs(depth + 1, support, acc) {
                return true;
            }
        }
        false
    }
}

/// Searches weights `1..limit` in increasing order across both sectors.
fn weight_ordered(sectors: &[SectorData; 2], limit: usize, opts: &DistanceOptions) -> Result<DistanceResult> {
    let n = sectors[0].n;
    let mut spent = 0u64;
    for w in 1..limit.min(n + 1) {
        spent = spent.saturating_add(binomial(n, w));
        if spent > opts.budget {
            return Err(Error::BudgetExceeded { lower_bound: w });
        }
        for s in sectors {
            if let Some(support) = s.search_weight(w, opts.exec) {
                return Ok(DistanceResult {
                    d: w,
                    exact: true,
                    witness: Some(Witness { sector: s.sector, support }),
                    exhausted_dim: 0,
                });
            }
        }
    }
    Ok(DistanceResult {
        d: limit,
        exact: limit > n,
        witness: None,
        exhausted_dim: 0,
    })
}

fn pairing_mask(dual: &BitMatrix, v: &BitVec) -> Vec<u64> {
    let bits: Vec<bool> = dual.row_iter().map(|r| r.dot(v)).collect();
    BitVec::from_bools(&bits).words().to_vec()
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (a, b) in dst.iter_mut().zip(src) {
        *a ^= *b;
    }
}

#[inline]
fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Whether `v` is a nontrivial logical of the given type for `code`.
pub fn is_logical(code: &CssCode, sector: Sector, v: &BitVec) -> Result<bool> {
    let (checks, stabilizers) = match sector {
        Sector::X => (code.hz(), code.hx()),
        Sector::Z => (code.hx(), code.hz()),
    };
    Ok(checks.mul_vec(v)?.is_zero() && !stabilizers.row_space_contains(v))
}
