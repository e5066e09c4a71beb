//! Packed bit vectors and Gaussian elimination over F2.

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        if b {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn into_words(self) -> Vec<u64> {
        self.words
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn bit(row: &[u64], i: usize) -> bool {
    row[i / 64] >> (i % 64) & 1 == 1
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub(crate) fn rref(mut rows: Vec<Vec<u64>>, ncols: usize) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| bit(&rows[i], c)) else { continue };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && bit(row, c) {
                xor_into(row, &pivot);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub(crate) fn rank(rows: Vec<Vec<u64>>, ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of the kernel `{x : M x = 0}` of the matrix with the given rows.
pub(crate) fn kernel_basis(rows: Vec<Vec<u64>>, ncols: usize) -> Vec<BitVec> {
    let (red, pivots) = rref(rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = BitVec::zeros(ncols);
        v.set(free, true);
        for (row, &p) in red.iter().zip(&pivots) {
            if bit(row, free) {
                v.set(p, true);
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_triangle_boundary() {
        // one row: e0 + e1 + e2
        let mut row = BitVec::zeros(3);
        for i in 0..3 {
            row.flip(i);
        }
        let k = kernel_basis(vec![row.into_words()], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v.ones().count() % 2, 0);
        }
    }
}
