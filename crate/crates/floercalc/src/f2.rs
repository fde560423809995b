//! Dense linear algebra over F₂ on packed bit rows.

/// A row vector over F₂ packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        let mask = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    fn lowest_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }
}

/// Rank over F₂ of the matrix whose rows are given.
pub fn rank(rows: &[BitRow]) -> usize {
    let mut pivots: Vec<BitRow> = Vec::new();
    let mut pivot_cols: Vec<usize> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        for (p, &c) in pivots.iter().zip(&pivot_cols) {
            if r.get(c) {
                r.xor_assign(p);
            }
        }
        if let Some(c) = r.lowest_one() {
            // keep pivots reduced against the new column so later rows clear fully
            for p in pivots.iter_mut() {
                if p.get(c) {
                    p.xor_assign(&r);
                }
            }
            pivots.push(r);
            pivot_cols.push(c);
        }
    }
    pivots.len()
}

/// Rank of homology of a square differential `d` (rows are `∂` of each basis element).
///
/// Assumes `d² = 0`; the result is `dim − 2·rank(d)`.
pub fn homology_rank(d: &[BitRow]) -> usize {
    d.len() - 2 * rank(d)
}

/// Multiplies two square matrices given by rows (row i of `a·b` is Σ_j a_ij · row_j(b)).
pub fn mat_mul(a: &[BitRow], b: &[BitRow]) -> Vec<BitRow> {
    let cols = b.first().map_or(0, BitRow::len);
    a.iter()
        .map(|row| {
            let mut out = BitRow::zeros(cols);
            for j in row.ones() {
                out.xor_assign(&b[j]);
            }
            out
        })
        .collect()
}
