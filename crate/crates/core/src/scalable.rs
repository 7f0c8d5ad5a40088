//! Scalable families: the block-tripling map `F(C)` and zero insertion into
//! circulant generators.

use serde::Serialize;

use crate::code::{build_gb, CssCode};
use crate::error::{Error, Result};
use crate::matrix::BitMatrix;
use crate::par::{map_indexed, Execution};
use crate::poly::{Poly, RingPoly};

/// `F(C) = [[L, U, C], [C, L, U], [U, C, L]]` with `L`, `U` the lower (with
/// diagonal) and strictly upper parts of `C`.
pub fn f_triple(c: &BitMatrix) -> Result<BitMatrix> {
    let (l, u) = c.triangular_split()?;
    BitMatrix::block_compose(&[
        vec![l.clone(), u.clone(), c.clone()],
        vec![c.clone(), l.clone(), u.clone()],
        vec![u, c.clone(), l],
    ])
}

fn triple_code(code: &CssCode) -> Result<CssCode> {
    let a = RingPoly::from_circulant(&f_triple(&code.a().circulant())?)?;
    let b = RingPoly::from_circulant(&f_triple(&code.b().circulant())?)?;
    build_gb(&a, &b)
}

/// `levels` codes, each obtained by applying `F` to both circulant blocks of
/// the previous one.
pub fn build_thm3_family(base: &CssCode, levels: usize) -> Result<Vec<CssCode>> {
    let mut family = Vec::with_capacity(levels);
    if levels == 0 {
        return Ok(family);
    }
    family.push(base.clone());
    for _ in 1..levels {
        let next = triple_code(family.last().expect("nonempty"))?;
        family.push(next);
    }
    Ok(family)
}

/// Block-column destinations (0-based) applied to `hx` of the tripled code.
pub const X_BLOCK_PERM: [usize; 6] = [2, 4, 0, 3, 5, 1];
/// Block-column destinations applied to `hz` of the tripled code; block rows
/// 2 and 3 are swapped afterwards.
pub const Z_BLOCK_PERM: [usize; 6] = [2, 0, 4, 3, 1, 5];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EmbeddingMismatch {
    Shape { small_ell: usize, large_ell: usize },
    Entry { sector: char, row: usize, col: usize },
}

/// Witness of the embedding check: the block permutations applied and the
/// first failing coordinate, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingCertificate {
    pub holds: bool,
    pub small_n: usize,
    pub large_n: usize,
    pub block_size: usize,
    pub x_block_perm: Vec<usize>,
    pub z_block_perm: Vec<usize>,
    pub z_row_block_swap: Option<(usize, usize)>,
    pub mismatch: Option<EmbeddingMismatch>,
}

fn expand_blocks(perm: &[usize], size: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(perm.len() * size);
    for &p in perm {
        for t in 0..size {
            out.push(p * size + t);
        }
    }
    out
}

/// First `(row, col)` where `small` has a 1 that `large` lacks.
fn first_uncovered(small: &BitMatrix, large: &BitMatrix) -> Option<(usize, usize)> {
    (0..small.rows()).find_map(|i| small.row(i).ones_iter().find(|&j| !large.get(i, j)).map(|j| (i, j)))
}

/// Checks that every 1 of `small`'s check matrices appears at the same place
/// in `large`'s matrices after the fixed block relabelling of the tripling map.
/// Codes of equal size are compared directly.
pub fn verify_embedding(small: &CssCode, large: &CssCode) -> EmbeddingCertificate {
    let s = small.ell();
    let mut cert = EmbeddingCertificate {
        holds: false,
        small_n: small.n(),
        large_n: large.n(),
        block_size: s,
        x_block_perm: vec![0, 1],
        z_block_perm: vec![0, 1],
        z_row_block_swap: None,
        mismatch: None,
    };
    let (hx, hz) = if large.ell() == s {
        (large.hx().clone(), large.hz().clone())
    } else if large.ell() == 3 * s {
        cert.x_block_perm = X_BLOCK_PERM.to_vec();
        cert.z_block_perm = Z_BLOCK_PERM.to_vec();
        cert.z_row_block_swap = Some((1, 2));
        let hx = large.hx().permute_columns(&expand_blocks(&X_BLOCK_PERM, s));
        let hz = large
            .hz()
            .permute_columns(&expand_blocks(&Z_BLOCK_PERM, s))
            .permute_rows(&expand_blocks(&[0, 2, 1], s));
        (hx, hz)
    } else {
        cert.mismatch = Some(EmbeddingMismatch::Shape {
            small_ell: s,
            large_ell: large.ell(),
        });
        return cert;
    };
    for (sector, sm, lg) in [('X', small.hx(), &hx), ('Z', small.hz(), &hz)] {
        if let Some((row, col)) = first_uncovered(sm, lg) {
            cert.mismatch = Some(EmbeddingMismatch::Entry { sector, row, col });
            return cert;
        }
    }
    cert.holds = true;
    cert
}

fn check_split(ell: usize, j: usize, r: usize) -> Result<()> {
    if j == 0 || j + 1 >= ell || r == 0 {
        return Err(Error::InvalidSplit { j, r, ell });
    }
    Ok(())
}

/// Inserts `r` zero coefficients before index `j`: `f + x^r g` in the ring of
/// dimension `l + r`, where `f` holds the coefficients below `j` and `g` the rest.
pub fn insert_zeros(p: &RingPoly, j: usize, r: usize) -> Result<RingPoly> {
    let ell = p.ring_dim();
    check_split(ell, j, r)?;
    let (low, high): (Vec<usize>, Vec<usize>) = p.poly().exponents().into_iter().partition(|&e| e < j);
    let shifted: Vec<usize> = high.into_iter().map(|e| e + r).collect();
    let f = Poly::from_exponents(&low);
    let g = Poly::from_exponents(&shifted);
    RingPoly::new(f.add(&g), ell + r)
}

/// Matrix form of [`insert_zeros`] on a circulant `C`.
pub fn f_insert(c: &BitMatrix, j: usize, r: usize) -> Result<BitMatrix> {
    let p = RingPoly::from_circulant(c)?;
    Ok(insert_zeros(&p, j, r)?.circulant())
}

/// Zero-insertion family: member `m` (1-based) has ring size `l + r (m - 1)`
/// and generators with `r (m - 1)` zeros inserted at `j`.
pub fn build_thm4_family(base: &CssCode, levels: usize, j: usize, r: usize) -> Result<Vec<CssCode>> {
    build_thm4_family_with(base, levels, j, r, Execution::default())
}

pub fn build_thm4_family_with(
    base: &CssCode,
    levels: usize,
    j: usize,
    r: usize,
    exec: Execution,
) -> Result<Vec<CssCode>> {
    check_split(base.ell(), j, r)?;
    map_indexed(exec, levels, |i| {
        if i == 0 {
            Ok(base.clone())
        } else {
            let a = insert_zeros(base.a(), j, r * i)?;
            let b = insert_zeros(base.b(), j, r * i)?;
            build_gb(&a, &b)
        }
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::build_gb_str;
    use crate::code::weight_profile;

    fn base() -> CssCode {
        build_gb_str("1+x^4", "1+x+x^2+x^4", 5).unwrap()
    }

    #[test]
    fn f_triple_of_scalar_one() {
        let c = BitMatrix::identity(1);
        let f = f_triple(&c).unwrap();
        assert_eq!(f, BitMatrix::from_strs(&["101", "110", "011"]).unwrap());
    }

    #[test]
    fn f_triple_matches_polynomial_path() {
        let p = RingPoly::parse("1+x^4", 5).unwrap();
        let f = f_triple(&p.circulant()).unwrap();
        let expect = RingPoly::reduced(&p.poly().mul(&Poly::x_pow_plus_one(5)), 15).circulant();
        assert_eq!(f, expect);
        assert!(f.row_weights().iter().all(|&w| w == 4));
        let ff = f_triple(&f).unwrap();
        assert!(ff.row_weights().iter().all(|&w| w == 8));
    }

    #[test]
    fn thm3_family_shape_and_embedding() {
        let fam = build_thm3_family(&base(), 3).unwrap();
        let ns: Vec<_> = fam.iter().map(CssCode::n).collect();
        assert_eq!(ns, vec![10, 30, 90]);
        let wr: Vec<_> = fam.iter().map(|c| weight_profile(c).w_r).collect();
        assert_eq!(wr, vec![6, 12, 24]);
        for w in fam.windows(2) {
            let cert = verify_embedding(&w[0], &w[1]);
            assert!(cert.holds, "{cert:?}");
            assert!(w[1].k() >= w[0].k());
        }
        assert!(verify_embedding(&fam[0], &fam[0]).holds);
        let cert = verify_embedding(&fam[0], &fam[2]);
        assert!(matches!(cert.mismatch, Some(EmbeddingMismatch::Shape { .. })));
    }

    #[test]
    fn embedding_rejects_unrelated_code() {
        let other = build_gb_str("1+x^7", "1+x^2+x^11", 15).unwrap();
        let cert = verify_embedding(&base(), &other);
        assert!(!cert.holds);
        assert!(matches!(cert.mismatch, Some(EmbeddingMismatch::Entry { .. })));
    }

    #[test]
    fn insert_examples() {
        let c = RingPoly::parse("1+x", 3).unwrap().circulant();
        assert_eq!(f_insert(&c, 1, 1).unwrap(), RingPoly::parse("1+x^2", 4).unwrap().circulant());
        let c = RingPoly::parse("1+x+x^3", 7).unwrap().circulant();
        assert_eq!(f_insert(&c, 2, 2).unwrap(), RingPoly::parse("1+x+x^5", 9).unwrap().circulant());
        assert!(f_insert(&c, 0, 1).is_err());
        assert!(f_insert(&c, 6, 1).is_err());
        assert!(f_insert(&c, 2, 0).is_err());
    }

    #[test]
    fn thm4_family_shape() {
        let fam = build_thm4_family(&base(), 3, 2, 5).unwrap();
        let ns: Vec<_> = fam.iter().map(CssCode::n).collect();
        assert_eq!(ns, vec![10, 20, 30]);
        for c in &fam {
            assert!(weight_profile(c).per_row.iter().all(|&w| w == 6));
        }
        let ks: Vec<_> = fam.iter().map(CssCode::k).collect();
        assert_eq!(ks, vec![2, 2, 2]);
        assert_eq!(build_thm4_family(&base(), 1, 2, 5).unwrap(), vec![base()]);
    }
}
