//! Dense matrices over GF(2), one bit per entry, rows packed into `u64` words.

use std::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(WORD);
        F2Matrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_bits(cols: usize, rows: &[Vec<bool>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            for (j, &b) in r.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        m
    }

    /// Builds from 0/1 integers; any odd value counts as 1.
    pub fn from_u8(cols: usize, rows: &[Vec<u8>]) -> Self {
        let bits: Vec<Vec<bool>> = rows.iter().map(|r| r.iter().map(|&x| x & 1 == 1).collect()).collect();
        Self::from_bits(cols, &bits)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        (self.data[i * self.words + j / WORD] >> (j % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i * self.words + j / WORD];
        if b {
            *w |= 1 << (j % WORD);
        } else {
            *w &= !(1 << (j % WORD));
        }
    }

    pub fn row_bits(&self, i: usize) -> Vec<bool> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        for w in 0..self.words {
            let s = self.data[src * self.words + w];
            self.data[dst * self.words + w] ^= s;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.words {
            self.data.swap(a * self.words + w, b * self.words + w);
        }
    }

    pub fn push_row(&mut self, bits: &[bool]) {
        assert_eq!(bits.len(), self.cols);
        self.data.extend(std::iter::repeat_n(0, self.words));
        self.rows += 1;
        for (j, &b) in bits.iter().enumerate() {
            if b {
                self.set(self.rows - 1, j, true);
            }
        }
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[bool]) -> Vec<bool> {
        assert_eq!(v.len(), self.cols);
        let packed = pack(v, self.words);
        (0..self.rows)
            .map(|i| self.row_words(i).iter().zip(&packed).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1)
            .collect()
    }

    /// Product with another matrix.
    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = F2Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    for w in 0..other.words {
                        out.data[i * out.words + w] ^= other.data[k * other.words + w];
                    }
                }
            }
        }
        out
    }

    /// Reduced row echelon form; returns the pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else { continue };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row_into(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Basis of the right kernel `{v : self * v = 0}` as the rows of a
    /// matrix, one basis vector per free column in ascending order.
    pub fn nullspace(&self) -> F2Matrix {
        let mut e = self.clone();
        let pivots = e.rref_in_place();
        let mut basis = F2Matrix::zeros(0, self.cols);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![false; self.cols];
            v[f] = true;
            for (r, &p) in pivots.iter().enumerate() {
                if e.get(r, f) {
                    v[p] = true;
                }
            }
            basis.push_row(&v);
        }
        basis
    }
}

fn pack(v: &[bool], words: usize) -> Vec<u64> {
    let mut out = vec![0u64; words];
    for (j, &b) in v.iter().enumerate() {
        if b {
            out[j / WORD] |= 1 << (j % WORD);
        }
    }
    out
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let s: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_examples() {
        assert_eq!(F2Matrix::identity(3).nullspace().nrows(), 0);
        assert_eq!(F2Matrix::zeros(2, 3).nullspace().nrows(), 3);
        let m = F2Matrix::from_u8(3, &[vec![1, 1, 0], vec![0, 1, 1]]);
        let k = m.nullspace();
        assert_eq!(k.nrows(), 1);
        assert_eq!(k.row_bits(0), vec![true, true, true]);
    }

    #[test]
    fn wide_rows_span_words() {
        let cols = 130;
        let mut m = F2Matrix::zeros(2, cols);
        m.set(0, 0, true);
        m.set(0, 129, true);
        m.set(1, 64, true);
        assert_eq!(m.rank(), 2);
        let k = m.nullspace();
        assert_eq!(k.nrows(), cols - 2);
        for i in 0..k.nrows() {
            assert!(m.mul_vec(&k.row_bits(i)).iter().all(|&b| !b));
        }
    }
}
