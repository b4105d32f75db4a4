//! Dense GF(2) matrices: rank, row-dependency kernel, right null space and
//! row-space membership.

use super::bits::BitVec;

/// Row-major binary matrix. Rows of a stabilizer generator matrix are
/// `x ∥ z` symplectic vectors of length `2n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: Vec<BitVec>,
    ncols: usize,
}

impl BinaryMatrix {
    pub fn new(ncols: usize) -> Self {
        Self {
            rows: Vec::new(),
            ncols,
        }
    }

    pub fn from_rows(ncols: usize, rows: Vec<BitVec>) -> Self {
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "all rows must have length {ncols}"
        );
        Self { rows, ncols }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_rows(n, (0..n).map(|i| BitVec::from_indices(n, [i])).collect())
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.ncols);
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut out: Vec<BitVec> = (0..self.ncols)
            .map(|_| BitVec::zeros(self.rows.len()))
            .collect();
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                out[c].set(r, true);
            }
        }
        BinaryMatrix::from_rows(self.rows.len(), out)
    }

    /// `M v` over GF(2).
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.ncols);
        BitVec::from_bools(&self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>())
    }

    /// `vᵀ M`: XOR of the rows selected by `v`.
    pub fn combine_rows(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.rows.len());
        let mut acc = BitVec::zeros(self.ncols);
        for i in v.iter_ones() {
            acc.xor_assign(&self.rows[i]);
        }
        acc
    }

    pub fn rank(&self) -> usize {
        Echelon::from_rows(self.ncols, self.rows.iter().cloned()).rank()
    }

    /// Basis of `{v : vᵀ M = 0}`, i.e. subsets of rows whose XOR vanishes,
    /// returned in reduced row echelon form.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let m = self.rows.len();
        let mut work: Vec<(BitVec, BitVec)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), BitVec::from_indices(m, [i])))
            .collect();
        let mut rank = 0;
        for col in 0..self.ncols {
            let Some(p) = (rank..m).find(|&r| work[r].0.get(col)) else {
                continue;
            };
            work.swap(rank, p);
            let (head, tail) = work.split_at_mut(rank + 1);
            let pivot = &head[rank];
            for row in tail.iter_mut().filter(|row| row.0.get(col)) {
                row.0.xor_assign(&pivot.0);
                row.1.xor_assign(&pivot.1);
            }
            rank += 1;
            if rank == m {
                break;
            }
        }
        let kernel: Vec<BitVec> = work.into_iter().skip(rank).map(|(_, tag)| tag).collect();
        rref(kernel, m)
    }

    /// Basis of the right null space `{v : M v = 0}`.
    pub fn nullspace(&self) -> Vec<BitVec> {
        let reduced = rref(self.rows.clone(), self.ncols);
        let pivots: Vec<usize> = reduced.iter().map(|r| r.first_one().unwrap()).collect();
        let mut is_pivot = vec![false; self.ncols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVec::from_indices(self.ncols, [free]);
                for (row, &p) in reduced.iter().zip(&pivots) {
                    if row.get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    pub fn row_space_contains(&self, v: &BitVec) -> bool {
        Echelon::from_rows(self.ncols, self.rows.iter().cloned()).contains(v)
    }
}

/// Reduced row echelon form of the span of `rows`; zero rows dropped.
pub fn rref(rows: Vec<BitVec>, ncols: usize) -> Vec<BitVec> {
    let mut rows = rows;
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row.get(col) {
                row.xor_assign(&pivot);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rows
}

/// Incrementally built echelon basis. Row `i` is zero at the pivots of all
/// rows `j < i`, so a single ordered pass reduces any vector.
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
    ncols: usize,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Self {
            rows: Vec::new(),
            pivots: Vec::new(),
            ncols,
        }
    }

    pub fn from_rows(ncols: usize, rows: impl IntoIterator<Item = BitVec>) -> Self {
        let mut e = Self::new(ncols);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.ncols);
        let mut v = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span. Returns `false` when it was already dependent.
    pub fn insert(&mut self, v: BitVec) -> bool {
        let r = self.reduce(&v);
        match r.first_one() {
            Some(p) => {
                self.rows.push(r);
                self.pivots.push(p);
                true
            }
            None => false,
        }
    }
}
