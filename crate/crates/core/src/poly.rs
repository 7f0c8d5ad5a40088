//! Polynomials over GF(2), the quotient ring GF(2)[x]/(x^l - 1), and the
//! polynomial <-> circulant matrix correspondence.
//!
//! Text format: a sum of monomials such as `1+x+x^4` (case-insensitive,
//! whitespace ignored), or a bit string such as `11001` where character `i`
//! is the coefficient of `x^i`. Output always uses the monomial form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::{BitVec, WORD};
use crate::error::{Error, Result};
use crate::matrix::BitMatrix;

/// A polynomial in GF(2)[x] with no modular reduction.
///
/// Coefficients are packed little-endian (bit `i` is the coefficient of
/// `x^i`); trailing zero words are always trimmed, so the zero polynomial has
/// no words at all.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    words: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(k: usize) -> Self {
        let mut p = Poly {
            words: vec![0; k / WORD + 1],
        };
        p.words[k / WORD] = 1u64 << (k % WORD);
        p
    }

    /// Sum of `x^e` over `exps`; repeated exponents cancel.
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Poly::zero();
        for &e in exps {
            p.flip(e);
        }
        p
    }

    pub fn from_bitvec(v: &BitVec) -> Self {
        let mut p = Poly {
            words: v.words().to_vec(),
        };
        p.trim();
        p
    }

    /// `x^l + 1`, the modulus of the ring with dimension `l`.
    pub fn x_pow_plus_one(l: usize) -> Self {
        Self::from_exponents(&[0, l])
    }

    /// `sum_{i<count} x^(i*step)`.
    pub fn geometric_sum(step: usize, count: usize) -> Self {
        let exps: Vec<usize> = (0..count).map(|i| i * step).collect();
        Self::from_exponents(&exps)
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    fn flip(&mut self, k: usize) {
        if self.words.len() <= k / WORD {
            self.words.resize(k / WORD + 1, 0);
        }
        self.words[k / WORD] ^= 1u64 << (k % WORD);
        self.trim();
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.words
            .last()
            .map(|&w| (self.words.len() - 1) * WORD + (WORD - 1 - w.leading_zeros() as usize))
    }

    /// Degree with the zero polynomial mapped to 0; used in dimension formulas
    /// where `deg gcd = 0` and "no common factor" coincide.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / WORD)
            .is_some_and(|w| (w >> (i % WORD)) & 1 == 1)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        BitVec::from_words(self.words.len() * WORD, self.words.clone())
            .ones_iter()
            .collect()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(&short.words) {
            *w ^= *s;
        }
        let mut p = Poly { words };
        p.trim();
        p
    }

    /// `self * x^k`.
    pub fn shl(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let (ws, bs) = (k / WORD, k % WORD);
        let mut words = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + ws] ^= w << bs;
            if bs != 0 {
                words[i + ws + 1] ^= w >> (WORD - bs);
            }
        }
        let mut p = Poly { words };
        p.trim();
        p
    }

    fn xor_shifted_in_place(&mut self, other: &Poly, k: usize) {
        let (ws, bs) = (k / WORD, k % WORD);
        let need = other.words.len() + ws + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        for (i, &w) in other.words.iter().enumerate() {
            self.words[i + ws] ^= w << bs;
            if bs != 0 {
                self.words[i + ws + 1] ^= w >> (WORD - bs);
            }
        }
        self.trim();
    }

    /// Plain (carry-less) product.
    pub fn mul(&self, other: &Poly) -> Poly {
        let (sparse, dense) = if self.weight() <= other.weight() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Poly::zero();
        for e in sparse.exponents() {
            acc.xor_shifted_in_place(dense, e);
        }
        acc
    }

    /// Euclidean division; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let dd = divisor.degree().ok_or(Error::ZeroGcd)?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            rem.xor_shifted_in_place(divisor, shift);
            quot.flip(shift);
        }
        Ok((quot, rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Reduction modulo `x^l + 1`: exponents fold cyclically.
    pub fn reduce_cyclic(&self, l: usize) -> Poly {
        assert!(l > 0, "ring dimension must be positive");
        let mut out = Poly::zero();
        for e in self.exponents() {
            out.flip(e % l);
        }
        out
    }

    /// Greatest common divisor by Euclid's algorithm. Over GF(2) every nonzero
    /// polynomial is monic, so no normalisation step is needed.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroGcd);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a)
    }

    /// gcd folded over all arguments (zero arguments are skipped).
    pub fn gcd_all(polys: &[&Poly]) -> Result<Poly> {
        let mut acc = Poly::zero();
        for p in polys {
            if p.is_zero() {
                continue;
            }
            acc = if acc.is_zero() { (*p).clone() } else { acc.gcd(p)? };
        }
        if acc.is_zero() {
            Err(Error::ZeroGcd)
        } else {
            Ok(acc)
        }
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).is_ok_and(|r| r.is_zero())
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    /// Orders by degree, then by coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            })
            .collect();
        f.write_str(&terms.join("+"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_ascii_lowercase();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if compact.chars().all(|c| c == '0' || c == '1') {
            let exps: Vec<usize> = compact
                .chars()
                .enumerate()
                .filter(|&(_, c)| c == '1')
                .map(|(i, _)| i)
                .collect();
            return Ok(Poly::from_exponents(&exps));
        }
        let mut p = Poly::zero();
        for term in compact.split('+') {
            let e = match term {
                "1" => Some(0),
                "0" => None,
                "x" => Some(1),
                t => {
                    let rest = t
                        .strip_prefix("x^")
                        .ok_or_else(|| Error::Parse(format!("invalid monomial {t:?}")))?;
                    let e = rest
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("invalid exponent in {t:?}")))?;
                    Some(e)
                }
            };
            if let Some(e) = e {
                p.flip(e);
            }
        }
        Ok(p)
    }
}

/// An element of GF(2)[x]/(x^l - 1). The stored polynomial always has degree
/// below `ring_dim`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingPoly {
    ring_dim: usize,
    poly: Poly,
}

impl RingPoly {
    /// Wraps `poly`, rejecting degrees at or above `ring_dim`.
    pub fn new(poly: Poly, ring_dim: usize) -> Result<Self> {
        if ring_dim == 0 {
            return Err(Error::InvalidConfig("ring dimension must be positive".into()));
        }
        if let Some(d) = poly.degree() {
            if d >= ring_dim {
                return Err(Error::DimensionMismatch {
                    expected: ring_dim,
                    found: d + 1,
                });
            }
        }
        Ok(RingPoly { ring_dim, poly })
    }

    /// Reduces `poly` modulo `x^ring_dim - 1`.
    pub fn reduced(poly: &Poly, ring_dim: usize) -> Self {
        RingPoly {
            ring_dim,
            poly: poly.reduce_cyclic(ring_dim),
        }
    }

    pub fn zero(ring_dim: usize) -> Self {
        RingPoly {
            ring_dim,
            poly: Poly::zero(),
        }
    }

    pub fn one(ring_dim: usize) -> Self {
        RingPoly {
            ring_dim,
            poly: Poly::one(),
        }
    }

    pub fn parse(s: &str, ring_dim: usize) -> Result<Self> {
        Self::new(s.parse()?, ring_dim)
    }

    /// Builds a ring element from its length-`l` coefficient vector.
    pub fn from_coeffs(coeffs: &BitVec) -> Result<Self> {
        Self::new(Poly::from_bitvec(coeffs), coeffs.len())
    }

    #[inline]
    pub fn ring_dim(&self) -> usize {
        self.ring_dim
    }

    #[inline]
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn coeffs(&self) -> BitVec {
        BitVec::from_support(self.ring_dim, &self.poly.exponents())
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.poly.coeff(i)
    }

    pub fn weight(&self) -> usize {
        self.poly.weight()
    }

    pub fn degree(&self) -> Option<usize> {
        self.poly.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn check_dim(&self, other: &RingPoly) -> Result<()> {
        if self.ring_dim != other.ring_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ring_dim,
                found: other.ring_dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &RingPoly) -> Result<RingPoly> {
        self.check_dim(other)?;
        Ok(RingPoly {
            ring_dim: self.ring_dim,
            poly: self.poly.add(&other.poly),
        })
    }

    /// Product in the quotient ring: cyclic convolution of coefficients.
    pub fn mul(&self, other: &RingPoly) -> Result<RingPoly> {
        self.check_dim(other)?;
        Ok(RingPoly::reduced(&self.poly.mul(&other.poly), self.ring_dim))
    }

    /// The same polynomial viewed in a ring of dimension `ring_dim`
    /// (reducing if the new ring is smaller than the degree).
    pub fn lift(&self, ring_dim: usize) -> RingPoly {
        RingPoly::reduced(&self.poly, ring_dim)
    }

    /// Circulant matrix whose first column is the coefficient vector; column
    /// `j + 1` is column `j` shifted cyclically down by one.
    pub fn circulant(&self) -> BitMatrix {
        let l = self.ring_dim;
        let exps = self.poly.exponents();
        let mut m = BitMatrix::zeros(l, l);
        for j in 0..l {
            for &e in &exps {
                m.set((e + j) % l, j, true);
            }
        }
        m
    }

    /// Inverse of [`circulant`](Self::circulant).
    pub fn from_circulant(m: &BitMatrix) -> Result<RingPoly> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let l = m.rows();
        for j in 1..l {
            for i in 0..l {
                if m.get(i, j) != m.get((i + l - 1) % l, j - 1) {
                    return Err(Error::NotCirculant { column: j });
                }
            }
        }
        RingPoly::from_coeffs(&m.column(0))
    }
}

impl fmt::Display for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.poly, f)
    }
}

impl fmt::Debug for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingPoly({} mod x^{}+1)", self.poly, self.ring_dim)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
