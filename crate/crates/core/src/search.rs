//! Exhaustive search over generator pairs of a fixed ring size, and the
//! bundled catalog of base codes.

use serde::Serialize;

use crate::bits::BitVec;
use crate::code::{build_gb, build_gb_str, CssCode};
use crate::decoder::DecoderConfig;
use crate::distance::min_distance;
use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};
use crate::poly::RingPoly;
use crate::sim::{estimate_ler, NoiseModel, SimOptions, StopRule};

/// Largest ring size accepted by the search (`4^12` pairs).
pub const MAX_SEARCH_ELL: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LerScreen {
    pub p: f64,
    pub max_ler: f64,
    pub trials: u64,
}

impl LerScreen {
    pub fn new(p: f64, max_ler: f64) -> Self {
        LerScreen { p, max_ler, trials: 10_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchFilter {
    pub ell: usize,
    /// Cap on `wt a + wt b`.
    pub max_weight: usize,
    pub require_dim: bool,
    pub require_distance: Option<usize>,
    pub ler_screen: Option<LerScreen>,
    pub seed: u64,
    #[serde(skip)]
    pub exec: Execution,
}

impl SearchFilter {
    pub fn new(ell: usize) -> Self {
        SearchFilter {
            ell,
            max_weight: 8,
            require_dim: true,
            require_distance: None,
            ler_screen: None,
            seed: 0,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchHit {
    /// Position in the enumeration: `(a - 1) (2^l - 1) + (b - 1)` over
    /// coefficient masks.
    pub pair_index: u64,
    #[serde(serialize_with = "ser_ring")]
    pub a: RingPoly,
    #[serde(serialize_with = "ser_ring")]
    pub b: RingPoly,
    pub n: usize,
    pub k: usize,
    pub w_r: usize,
    pub d: Option<usize>,
    pub ler: Option<f64>,
}

fn ser_ring<S: serde::Serializer>(p: &RingPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p.poly())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub filter: SearchFilter,
    /// Ordered pairs of nonzero polynomials enumerated.
    pub total_pairs: u64,
    /// Pairs with `k > 0`, before any other screen.
    pub positive_dim: u64,
    pub passed_weight: u64,
    pub passed_distance: u64,
    pub passed_ler: u64,
    /// Survivors ranked by distance (desc), LER, row weight, pair index.
    pub hits: Vec<SearchHit>,
}

fn poly_from_mask(mask: u64, ell: usize) -> RingPoly {
    let bits: Vec<bool> = (0..ell).map(|i| mask >> i & 1 == 1).collect();
    RingPoly::from_coeffs(&BitVec::from_bools(&bits)).expect("mask fits the ring")
}

pub fn search_base_codes(filter: &SearchFilter) -> Result<SearchResult> {
    let ell = filter.ell;
    if ell == 0 || ell > MAX_SEARCH_ELL {
        let pairs = if ell >= 32 { u64::MAX } else { ((1u64 << ell) - 1).pow(2) };
        return Err(Error::EnumerationBudget {
            pairs,
            budget: ((1u64 << MAX_SEARCH_ELL) - 1).pow(2),
        });
    }
    if filter.max_weight < 2 {
        return Err(Error::InvalidConfig("max_weight must be at least 2".into()));
    }
    let side = (1u64 << ell) - 1;
    let total = side * side;

    // Per pair: whether k > 0, how many screens it passed, and the hit.
    let staged = map_indexed(filter.exec, total as usize, |idx| -> Result<(bool, u8, Option<SearchHit>)> {
        let idx = idx as u64;
        let a = poly_from_mask(idx / side + 1, ell);
        let b = poly_from_mask(idx % side + 1, ell);
        let code = build_gb(&a, &b)?;
        let positive = code.k() > 0;
        if filter.require_dim && !positive {
            return Ok((false, 0, None));
        }
        let w_r = a.weight() + b.weight();
        if w_r > filter.max_weight {
            return Ok((positive, 1, None));
        }
        let mut d = None;
        if code.k() > 0 {
            if let Some(req) = filter.require_distance {
                if min_distance(&code, Some(req))?.d < req {
                    return Ok((positive, 2, None));
                }
                d = Some(min_distance(&code, None)?.d);
            }
        }
        Ok((
            positive,
            3,
            Some(SearchHit {
                pair_index: idx,
                n: code.n(),
                k: code.k(),
                w_r,
                d,
                ler: None,
                a,
                b,
            }),
        ))
    });
    let mut counts = [0u64; 4];
    let mut positive_dim = 0u64;
    let mut hits = Vec::new();
    for s in staged {
        let (positive, stage, hit) = s?;
        positive_dim += u64::from(positive);
        for c in counts.iter_mut().take(stage as usize + 1) {
            *c += 1;
        }
        hits.extend(hit);
    }

    if let Some(screen) = filter.ler_screen {
        let noise = NoiseModel::uniform(screen.p)?;
        let opts = SimOptions {
            trials: screen.trials,
            stop: StopRule::Fixed,
            seed: filter.seed,
            exec: filter.exec,
            ..SimOptions::default()
        };
        let mut kept = Vec::with_capacity(hits.len());
        for mut h in hits {
            if h.k == 0 {
                continue;
            }
            let code = build_gb(&h.a, &h.b)?;
            let r = estimate_ler(&code, "search", &noise, &DecoderConfig::default(), &opts)?;
            h.ler = Some(r.point.ler);
            if r.point.ler < screen.max_ler {
                kept.push(h);
            }
        }
        hits = kept;
    }
    let passed_ler = hits.len() as u64;
    hits.sort_by(|x, y| {
        let d = |h: &SearchHit| std::cmp::Reverse(h.d.map(|d| d as i64).unwrap_or(-1));
        let l = |h: &SearchHit| h.ler.unwrap_or(f64::INFINITY);
        d(x).cmp(&d(y))
            .then(l(x).total_cmp(&l(y)))
            .then(x.w_r.cmp(&y.w_r))
            .then(x.pair_index.cmp(&y.pair_index))
    });
    Ok(SearchResult {
        filter: filter.clone(),
        total_pairs: total,
        positive_dim,
        passed_weight: counts[2],
        passed_distance: counts[3],
        passed_ler,
        hits,
    })
}

/// A bundled base code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub id: char,
    pub ell: usize,
    pub a: &'static str,
    pub b: &'static str,
    /// Distance printed alongside the entry, when one is given.
    pub printed_distance: Option<usize>,
}

impl CatalogEntry {
    pub fn build(&self) -> Result<CssCode> {
        build_gb_str(self.a, self.b, self.ell)
    }
}

const CATALOG: [CatalogEntry; 6] = [
    CatalogEntry { id: 'a', ell: 5, a: "1+x^4", b: "1+x+x^2+x^4", printed_distance: Some(3) },
    CatalogEntry { id: 'b', ell: 6, a: "1+x+x^2+x^5", b: "1+x+x^3+x^5", printed_distance: Some(3) },
    CatalogEntry { id: 'c', ell: 7, a: "1+x^3", b: "1+x+x^3+x^6", printed_distance: None },
    CatalogEntry { id: 'd', ell: 8, a: "x+x^3", b: "1+x^5", printed_distance: None },
    CatalogEntry { id: 'e', ell: 9, a: "1+x^2", b: "1+x^5", printed_distance: None },
    CatalogEntry { id: 'f', ell: 10, a: "1+x", b: "1+x^6", printed_distance: None },
];

/// The six base codes with `g(x) = 1 + x`, for ring sizes 5 through 10.
pub fn catalog() -> Vec<CatalogEntry> {
    CATALOG.to_vec()
}

pub fn catalog_entry(ell: usize) -> Option<CatalogEntry> {
    CATALOG.iter().copied().find(|e| e.ell == ell)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_at_small_rings() {
        let r4 = search_base_codes(&SearchFilter { max_weight: 8, ..SearchFilter::new(4) }).unwrap();
        assert_eq!(r4.total_pairs, 225);
        assert_eq!(r4.positive_dim, 49);
        let r5 = search_base_codes(&SearchFilter::new(5)).unwrap();
        assert_eq!(r5.positive_dim, 226);
    }

    #[test]
    fn distance_screen() {
        let f4 = SearchFilter { require_distance: Some(3), ..SearchFilter::new(4) };
        assert!(search_base_codes(&f4).unwrap().hits.is_empty());
        let f5 = SearchFilter { require_distance: Some(3), ..SearchFilter::new(5) };
        let r = search_base_codes(&f5).unwrap();
        assert!(r
            .hits
            .iter()
            .any(|h| h.a.poly().to_string() == "1+x^4" && h.b.poly().to_string() == "1+x+x^2+x^4"));
        assert!(r.hits.iter().all(|h| h.d.unwrap() >= 3));
        let again = search_base_codes(&f5).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn budget_and_filter_errors() {
        assert!(matches!(search_base_codes(&SearchFilter::new(13)), Err(Error::EnumerationBudget { .. })));
        let bad = SearchFilter { max_weight: 1, ..SearchFilter::new(4) };
        assert!(search_base_codes(&bad).is_err());
    }

    #[test]
    fn catalog_entries() {
        let c = catalog();
        assert_eq!(c.len(), 6);
        assert_eq!(catalog_entry(7).unwrap().b, "1+x+x^3+x^6");
        assert_eq!(catalog_entry(9).unwrap().a, "1+x^2");
        for e in c {
            assert_eq!(e.build().unwrap().k(), 2);
        }
    }
}
