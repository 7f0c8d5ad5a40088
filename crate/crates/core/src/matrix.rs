//! Dense bit-packed matrices over GF(2).

use std::fmt;

use crate::bits::{dot_words, words_for, BitVec, WORD};
use crate::error::{Error, Result};

/// Dense binary matrix stored row-major, each row padded to whole 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: BitMatrix,
    /// Pivot column of each nonzero row, in row order.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from equal-length rows. An empty row list yields a 0x0 matrix.
    pub fn from_rows(rows: &[BitVec]) -> Result<Self> {
        let cols = rows.first().map_or(0, BitVec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    /// Like [`from_rows`](Self::from_rows) but keeps `cols` when `rows` is empty.
    pub fn from_rows_with_cols(rows: &[BitVec], cols: usize) -> Result<Self> {
        if rows.is_empty() {
            return Ok(Self::zeros(0, cols));
        }
        Self::from_rows(rows)
    }

    /// Parses rows given as bit strings, e.g. `["101", "011"]`.
    pub fn from_strs<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|s| s.as_ref().parse::<BitVec>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&parsed)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        (self.data[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(i).to_vec())
    }

    pub fn row_iter(&self) -> impl Iterator<Item = BitVec> + '_ {
        (0..self.rows).map(|i| self.row(i))
    }

    pub fn column(&self, j: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.data.split_at_mut(hi * s);
        head[lo * s..(lo + 1) * s].swap_with_slice(&mut tail[..s]);
    }

    /// `row[dst] ^= row[src]`.
    fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        if src < dst {
            let (head, tail) = self.data.split_at_mut(dst * s);
            for (d, x) in tail[..s].iter_mut().zip(&head[src * s..(src + 1) * s]) {
                *d ^= *x;
            }
        } else {
            let (head, tail) = self.data.split_at_mut(src * s);
            for (d, x) in head[dst * s..(dst + 1) * s].iter_mut().zip(&tail[..s]) {
                *d ^= *x;
            }
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in BitVec::from_words(self.cols, self.row_words(i).to_vec()).ones_iter() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let row = self.row(i);
            for k in row.ones_iter() {
                let (src, dst) = (other.row_words(k).to_vec(), out.row_words_mut(i));
                for (d, s) in dst.iter_mut().zip(src) {
                    *d ^= s;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `M * v` (syndrome map).
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            if dot_words(self.row_words(i), v.words()) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|i| self.row_words(i).iter().map(|w| w.count_ones() as usize).sum())
            .collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for i in 0..self.rows {
            for j in self.row(i).ones_iter() {
                w[j] += 1;
            }
        }
        w
    }

    /// Reduced row echelon form (pivots chosen left to right).
    pub fn echelon(&self) -> Echelon {
        self.echelon_with_order(&(0..self.cols).collect::<Vec<_>>())
    }

    /// Reduced row echelon form where pivot columns are searched in `order`.
    /// Columns absent from `order` are never chosen as pivots.
    pub fn echelon_with_order(&self, order: &[usize]) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for &c in order {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.swap_rows(r, p);
            for i in 0..m.rows {
                if i != r && m.get(i, c) {
                    m.xor_row_into(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    /// Rank over GF(2). The receiver is left untouched.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.swap_rows(r, p);
            for i in r + 1..m.rows {
                if m.get(i, c) {
                    m.xor_row_into(r, i);
                }
            }
            r += 1;
        }
        r
    }

    /// Basis of the right nullspace `{v : M v = 0}`, one vector per row of the result.
    pub fn kernel(&self) -> BitMatrix {
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = BitMatrix::zeros(free.len(), self.cols);
        for (bi, &f) in free.iter().enumerate() {
            basis.set(bi, f, true);
            for (r, &p) in ech.pivots.iter().enumerate() {
                if ech.matrix.get(r, f) {
                    basis.set(bi, p, true);
                }
            }
        }
        basis
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, v: &BitVec) -> bool {
        let mut rows: Vec<BitVec> = self.row_iter().collect();
        let base = self.rank();
        rows.push(v.clone());
        BitMatrix::from_rows(&rows).is_ok_and(|m| m.rank() == base)
    }

    /// Lower-triangular part (`j <= i`) and strictly upper part (`j > i`).
    pub fn triangular_split(&self) -> Result<(BitMatrix, BitMatrix)> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let lower = BitMatrix::from_fn(n, n, |i, j| j <= i && self.get(i, j));
        let upper = BitMatrix::from_fn(n, n, |i, j| j > i && self.get(i, j));
        Ok((lower, upper))
    }

    /// Concatenates a 2-D grid of blocks. Every block in a grid row must share
    /// its height and every block in a grid column its width.
    pub fn block_compose(grid: &[Vec<BitMatrix>]) -> Result<BitMatrix> {
        let Some(first) = grid.first() else {
            return Ok(BitMatrix::zeros(0, 0));
        };
        let widths: Vec<usize> = first.iter().map(BitMatrix::cols).collect();
        let mut heights = Vec::with_capacity(grid.len());
        for (bi, row) in grid.iter().enumerate() {
            if row.len() != widths.len() {
                return Err(Error::RaggedBlocks(format!(
                    "grid row {bi} has {} blocks, expected {}",
                    row.len(),
                    widths.len()
                )));
            }
            let h = row.first().map_or(0, BitMatrix::rows);
            for (bj, blk) in row.iter().enumerate() {
                if blk.rows() != h || blk.cols() != widths[bj] {
                    return Err(Error::RaggedBlocks(format!(
                        "block ({bi}, {bj}) is {}x{}, expected {h}x{}",
                        blk.rows(),
                        blk.cols(),
                        widths[bj]
                    )));
                }
            }
            heights.push(h);
        }
        let total_rows: usize = heights.iter().sum();
        let total_cols: usize = widths.iter().sum();
        let mut out = BitMatrix::zeros(total_rows, total_cols);
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, blk) in row.iter().enumerate() {
                for i in 0..blk.rows() {
                    for j in blk.row(i).ones_iter() {
                        out.set(r0 + i, c0 + j, true);
                    }
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        Ok(out)
    }

    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        Self::block_compose(&[vec![self.clone(), other.clone()]])
    }

    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        Self::block_compose(&[vec![self.clone()], vec![other.clone()]])
    }

    /// Applies a column relabelling: column `j` of the input becomes column `perm[j]`.
    pub fn permute_columns(&self, perm: &[usize]) -> BitMatrix {
        assert_eq!(perm.len(), self.cols);
        let mut out = BitMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in self.row(i).ones_iter() {
                out.set(i, perm[j], true);
            }
        }
        out
    }

    /// Applies a row relabelling: row `i` of the input becomes row `perm[i]`.
    pub fn permute_rows(&self, perm: &[usize]) -> BitMatrix {
        assert_eq!(perm.len(), self.rows);
        let mut out = BitMatrix::zeros(self.rows, self.cols);
        for (i, &dest) in perm.iter().enumerate() {
            out.row_words_mut(dest).copy_from_slice(self.row_words(i));
        }
        out
    }

    /// Row strings, index 0 first, as used by the JSON code documents.
    pub fn to_row_strings(&self) -> Vec<String> {
        self.row_iter().map(|r| r.to_string()).collect()
    }

    /// MacKay "alist" sparse text format (1-based indices, zero padded).
    pub fn to_alist(&self) -> String {
        use std::fmt::Write;
        let cw = self.col_weights();
        let rw = self.row_weights();
        let max_c = cw.iter().copied().max().unwrap_or(0);
        let max_r = rw.iter().copied().max().unwrap_or(0);
        let mut cols_of_row: Vec<Vec<usize>> = vec![Vec::new(); self.rows];
        let mut rows_of_col: Vec<Vec<usize>> = vec![Vec::new(); self.cols];
        for (i, row_cols) in cols_of_row.iter_mut().enumerate() {
            for j in self.row(i).ones_iter() {
                row_cols.push(j + 1);
                rows_of_col[j].push(i + 1);
            }
        }
        let join = |v: &[usize], pad: usize| {
            let mut items: Vec<String> = v.iter().map(usize::to_string).collect();
            items.resize(pad.max(v.len()), "0".to_string());
            items.join(" ")
        };
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.cols, self.rows);
        let _ = writeln!(s, "{max_c} {max_r}");
        let _ = writeln!(s, "{}", join(&cw, 0));
        let _ = writeln!(s, "{}", join(&rw, 0));
        for col in &rows_of_col {
            let _ = writeln!(s, "{}", join(col, max_c));
        }
        for row in &cols_of_row {
            let _ = writeln!(s, "{}", join(row, max_r));
        }
        s
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {}", self.row(i))?;
        }
        write!(f, "]")
    }
}
