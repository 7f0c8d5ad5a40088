//! Generalized-bicycle CSS codes.
//!
//! A GB code over the ring of dimension `l` is defined by two generators
//! `a(x), b(x)` with circulants `A, B`; its checks are `hx = (A | B)` and
//! `hz = (B^T | A^T)`. All `2l` checks are kept, redundant ones included.

use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::matrix::BitMatrix;
use crate::poly::{Poly, RingPoly};

/// A GB code with its check matrices and (optionally) its distance.
#[derive(Clone, Debug, PartialEq)]
pub struct CssCode {
    a: RingPoly,
    b: RingPoly,
    hx: BitMatrix,
    hz: BitMatrix,
    k: usize,
    /// Exact minimum distance, when it has been computed.
    pub d: Option<usize>,
}

/// Logical operator representatives: `lx` spans `ker(hz) / rowspace(hx)` and
/// `lz` spans `ker(hx) / rowspace(hz)`, normalised so that `lx * lz^T = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogicalBasis {
    pub lx: BitMatrix,
    pub lz: BitMatrix,
}

impl LogicalBasis {
    /// The `k x 2n` symplectic forms `(x | z)`: X-logicals then Z-logicals.
    pub fn to_symplectic(&self) -> (BitMatrix, BitMatrix) {
        let zeros = BitMatrix::zeros(self.lx.rows(), self.lx.cols());
        let x = self.lx.hstack(&zeros).expect("equal shapes");
        let z = zeros.hstack(&self.lz).expect("equal shapes");
        (x, z)
    }

    /// `lx * lz^T`.
    pub fn pairing(&self) -> BitMatrix {
        self.lx
            .mul(&self.lz.transpose())
            .expect("logical bases share a length")
    }
}

/// Row/column weights of the full block-diagonal check matrix `H = diag(hx, hz)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightProfile {
    pub w_r: usize,
    pub w_c: usize,
    pub per_row: Vec<usize>,
    pub per_column: Vec<usize>,
}

/// Builds the GB code defined by `a` and `b`.
pub fn build_gb(a: &RingPoly, b: &RingPoly) -> Result<CssCode> {
    if a.ring_dim() != b.ring_dim() {
        return Err(Error::DimensionMismatch {
            expected: a.ring_dim(),
            found: b.ring_dim(),
        });
    }
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroGenerators);
    }
    let ca = a.circulant();
    let cb = b.circulant();
    let hx = ca.hstack(&cb)?;
    let hz = cb.transpose().hstack(&ca.transpose())?;
    check_commutation(&hx, &hz)?;
    let k = hx.cols() - hx.rank() - hz.rank();
    Ok(CssCode {
        a: a.clone(),
        b: b.clone(),
        hx,
        hz,
        k,
        d: None,
    })
}

/// Convenience wrapper parsing both generators in the ring of dimension `ell`.
pub fn build_gb_str(a: &str, b: &str, ell: usize) -> Result<CssCode> {
    build_gb(&RingPoly::parse(a, ell)?, &RingPoly::parse(b, ell)?)
}

fn check_commutation(hx: &BitMatrix, hz: &BitMatrix) -> Result<()> {
    let prod = hx.mul(&hz.transpose())?;
    for i in 0..prod.rows() {
        if let Some(j) = prod.row(i).ones_iter().next() {
            return Err(Error::CommutativityViolation { row: i, col: j });
        }
    }
    Ok(())
}

/// `2 deg gcd(a, b, x^l + 1)`.
pub fn dimension_gcd(a: &RingPoly, b: &RingPoly) -> Result<usize> {
    if a.ring_dim() != b.ring_dim() {
        return Err(Error::DimensionMismatch {
            expected: a.ring_dim(),
            found: b.ring_dim(),
        });
    }
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroGenerators);
    }
    let modulus = Poly::x_pow_plus_one(a.ring_dim());
    let g = Poly::gcd_all(&[a.poly(), b.poly(), &modulus])?;
    Ok(2 * g.degree_or_zero())
}

/// `n - rank(hx) - rank(hz)`.
pub fn dimension_rank(code: &CssCode) -> usize {
    code.n() - code.hx.rank() - code.hz.rank()
}

/// Representatives of the logical X and Z operators.
pub fn logical_basis(code: &CssCode) -> Result<LogicalBasis> {
    logical_basis_of(&code.hx, &code.hz)
}

/// Logical basis of the CSS code with checks `hx`, `hz` (which must commute).
pub fn logical_basis_of(hx: &BitMatrix, hz: &BitMatrix) -> Result<LogicalBasis> {
    if hx.cols() != hz.cols() {
        return Err(Error::DimensionMismatch {
            expected: hx.cols(),
            found: hz.cols(),
        });
    }
    check_commutation(hx, hz)?;
    let k = hx.cols() - hx.rank() - hz.rank();
    if k == 0 {
        return Err(Error::ZeroDimension);
    }
    let lx = quotient_basis(&hz.kernel(), hx, k)?;
    let lz = quotient_basis(&hx.kernel(), hz, k)?;
    normalise_pairing(LogicalBasis { lx, lz })
}

/// Picks kernel vectors that extend `stabilizers` until `k` independent
/// cosets have been collected.
fn quotient_basis(kernel: &BitMatrix, stabilizers: &BitMatrix, k: usize) -> Result<BitMatrix> {
    let n = kernel.cols();
    let mut span: Vec<BitVec> = stabilizers.echelon().matrix.row_iter().filter(|r| !r.is_zero()).collect();
    let mut rank = span.len();
    let mut chosen = Vec::with_capacity(k);
    for v in kernel.row_iter() {
        if chosen.len() == k {
            break;
        }
        span.push(v.clone());
        let r = BitMatrix::from_rows(&span)?.rank();
        if r > rank {
            rank = r;
            chosen.push(v);
        } else {
            span.pop();
        }
    }
    if chosen.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: chosen.len(),
        });
    }
    BitMatrix::from_rows_with_cols(&chosen, n)
}

/// Replaces `lz` by `(P^-1)^T lz` where `P = lx lz^T`, giving `lx lz^T = I`.
fn normalise_pairing(basis: LogicalBasis) -> Result<LogicalBasis> {
    let p = basis.pairing();
    let inv = invert(&p).ok_or(Error::InvalidConfig(
        "logical pairing matrix is singular".into(),
    ))?;
    let lz = inv.transpose().mul(&basis.lz)?;
    Ok(LogicalBasis { lx: basis.lx, lz })
}

/// Inverse over GF(2) by Gauss-Jordan on `[M | I]`.
pub(crate) fn invert(m: &BitMatrix) -> Option<BitMatrix> {
    let n = m.rows();
    if !m.is_square() {
        return None;
    }
    let aug = m.hstack(&BitMatrix::identity(n)).ok()?;
    let order: Vec<usize> = (0..n).collect();
    let ech = aug.echelon_with_order(&order);
    if ech.rank() != n {
        return None;
    }
    Some(BitMatrix::from_fn(n, n, |i, j| ech.matrix.get(i, n + j)))
}

/// Exact row/column weights of the full check matrix.
pub fn weight_profile(code: &CssCode) -> WeightProfile {
    let mut per_row = code.hx.row_weights();
    per_row.extend(code.hz.row_weights());
    let mut per_column = code.hx.col_weights();
    per_column.extend(code.hz.col_weights());
    WeightProfile {
        w_r: per_row.iter().copied().max().unwrap_or(0),
        w_c: per_column.iter().copied().max().unwrap_or(0),
        per_row,
        per_column,
    }
}

impl CssCode {
    pub fn ell(&self) -> usize {
        self.a.ring_dim()
    }

    pub fn n(&self) -> usize {
        2 * self.ell()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn a(&self) -> &RingPoly {
        &self.a
    }

    pub fn b(&self) -> &RingPoly {
        &self.b
    }

    pub fn hx(&self) -> &BitMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &BitMatrix {
        &self.hz
    }

    pub fn logical_basis(&self) -> Result<LogicalBasis> {
        logical_basis(self)
    }

    pub fn weight_profile(&self) -> WeightProfile {
        weight_profile(self)
    }

    /// `[[n,k]]` or `[[n,k,d]]`.
    pub fn params(&self) -> String {
        match self.d {
            Some(d) => format!("[[{},{},{}]]", self.n(), self.k, d),
            None => format!("[[{},{}]]", self.n(), self.k),
        }
    }

    pub fn to_doc(&self, with_matrices: bool) -> CodeDoc {
        CodeDoc {
            ell: self.ell(),
            a: self.a.poly().clone(),
            b: self.b.poly().clone(),
            n: Some(self.n()),
            k: Some(self.k),
            d: self.d,
            hx: with_matrices.then(|| self.hx.to_row_strings()),
            hz: with_matrices.then(|| self.hz.to_row_strings()),
        }
    }
}

/// Serialised code: `{ell, a, b, n, k, d?, hx?, hz?}` with generators in
/// monomial form and matrices as row bit strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeDoc {
    pub ell: usize,
    pub a: Poly,
    pub b: Poly,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hx: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hz: Option<Vec<String>>,
}

impl CodeDoc {
    /// Rebuilds the code and checks any stored fields against the rebuilt one.
    pub fn to_code(&self) -> Result<CssCode> {
        let a = RingPoly::new(self.a.clone(), self.ell)?;
        let b = RingPoly::new(self.b.clone(), self.ell)?;
        let mut code = build_gb(&a, &b)?;
        if let Some(n) = self.n {
            if n != code.n() {
                return Err(Error::DimensionMismatch {
                    expected: code.n(),
                    found: n,
                });
            }
        }
        if let Some(k) = self.k {
            if k != code.k() {
                return Err(Error::Parse(format!(
                    "stored k = {k} disagrees with computed k = {}",
                    code.k()
                )));
            }
        }
        if let Some(hx) = &self.hx {
            if BitMatrix::from_strs(hx)? != code.hx {
                return Err(Error::Parse("stored hx disagrees with generators".into()));
            }
        }
        if let Some(hz) = &self.hz {
            if BitMatrix::from_strs(hz)? != code.hz {
                return Err(Error::Parse("stored hz disagrees with generators".into()));
            }
        }
        code.d = self.d;
        Ok(code)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_code_is_10_2() {
        let c = build_gb_str("1+x^4", "1+x+x^2+x^4", 5).unwrap();
        assert_eq!((c.n(), c.k()), (10, 2));
        assert_eq!(dimension_rank(&c), 2);
        assert_eq!(dimension_gcd(c.a(), c.b()).unwrap(), 2);
    }

    #[test]
    fn unit_generators_have_zero_dimension() {
        let c = build_gb_str("1", "1", 5).unwrap();
        assert_eq!(c.k(), 0);
        let c4 = build_gb_str("1", "1", 4).unwrap();
        assert_eq!(dimension_rank(&c4), 0);
        assert_eq!(c4.hx().rank(), 4);
        assert_eq!(c4.hz().rank(), 4);
        assert_eq!(logical_basis(&c4), Err(Error::ZeroDimension));
    }

    #[test]
    fn dimension_collapses_at_ring_size_eight() {
        let c7 = build_gb_str("1+x+x^3", "1+x^2+x^3+x^4", 7).unwrap();
        assert_eq!(c7.k(), 6);
        let a8 = RingPoly::parse("1+x+x^3", 8).unwrap();
        let b8 = RingPoly::parse("1+x^2+x^3+x^4", 8).unwrap();
        assert_eq!(dimension_gcd(&a8, &b8).unwrap(), 0);
        assert_eq!(build_gb(&a8, &b8).unwrap().k(), 0);
    }

    #[test]
    fn build_rejects_bad_input() {
        let a = RingPoly::parse("1", 5).unwrap();
        let b = RingPoly::parse("1", 6).unwrap();
        assert!(matches!(build_gb(&a, &b), Err(Error::DimensionMismatch { .. })));
        let z = RingPoly::zero(5);
        assert_eq!(build_gb(&z, &z), Err(Error::ZeroGenerators));
    }

    #[test]
    fn weight_profile_examples() {
        let c = build_gb_str("1+x^4", "1+x+x^2+x^4", 5).unwrap();
        let w = weight_profile(&c);
        assert_eq!((w.w_r, w.w_c), (6, 4));
        assert_eq!(w.per_row.len(), 10);
        assert_eq!(w.per_column.len(), 20);
        let u = build_gb_str("1", "1", 5).unwrap();
        let w = weight_profile(&u);
        assert_eq!((w.w_r, w.w_c), (2, 1));
    }

    #[test]
    fn logical_basis_of_14_6() {
        let c = build_gb_str("1+x+x^3", "1+x^2+x^3+x^4", 7).unwrap();
        let lb = logical_basis(&c).unwrap();
        assert_eq!((lb.lx.rows(), lb.lz.rows()), (6, 6));
        assert_eq!(lb.pairing(), BitMatrix::identity(6));
        assert_eq!(lb.pairing().rank(), 6);
        for v in lb.lx.row_iter() {
            assert!(c.hz().mul_vec(&v).unwrap().is_zero());
            assert!(!c.hx().row_space_contains(&v));
        }
        for v in lb.lz.row_iter() {
            assert!(c.hx().mul_vec(&v).unwrap().is_zero());
            assert!(!c.hz().row_space_contains(&v));
        }
    }

    #[test]
    fn symplectic_form_places_parts() {
        let c = build_gb_str("1+x^4", "1+x+x^2+x^4", 5).unwrap();
        let lb = logical_basis(&c).unwrap();
        let (x, z) = lb.to_symplectic();
        assert_eq!(x.cols(), 20);
        for i in 0..2 {
            assert!(x.row(i).ones_iter().all(|j| j < 10));
            assert!(z.row(i).ones_iter().all(|j| j >= 10));
        }
    }

    #[test]
    fn code_doc_round_trip() {
        let mut c = build_gb_str("1+x^4", "1+x+x^2+x^4", 5).unwrap();
        c.d = Some(3);
        let doc = c.to_doc(true);
        let json = serde_json::to_string(&doc).unwrap();
        assert!(json.contains("\"a\":\"1+x^4\""));
        let back: CodeDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_code().unwrap(), c);

        let minimal: CodeDoc = serde_json::from_str(r#"{"ell":5,"a":"10001","b":"1+x+x^2+x^4"}"#).unwrap();
        assert_eq!(minimal.to_code().unwrap().k(), 2);
        let wrong: CodeDoc = serde_json::from_str(r#"{"ell":5,"a":"1+x^4","b":"1+x+x^2+x^4","k":4}"#).unwrap();
        assert!(wrong.to_code().is_err());
    }
}
