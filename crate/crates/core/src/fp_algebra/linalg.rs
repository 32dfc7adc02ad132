//! Exact linear algebra over `F_p` on sparse vectors.
//!
//! Columns are indexed so that column 0 is the largest monomial of a graded
//! piece; a row's pivot is its smallest column, i.e. its leading monomial.

use std::collections::{BTreeMap, HashMap};

use super::prime::Prime;

/// Sparse vector as `(column, nonzero coefficient)` pairs sorted by column.
pub type SparseVec = Vec<(usize, u32)>;

fn accumulate(p: Prime, acc: &mut BTreeMap<usize, u32>, row: &[(usize, u32)], scale: u32) {
    for &(col, c) in row {
        let add = p.mul(c, scale);
        if add == 0 {
            continue;
        }
        match acc.entry(col) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = p.add(*e.get(), add);
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(add);
            }
        }
    }
}

/// A semi-reduced row echelon form: each stored row has leading coefficient 1
/// at a distinct pivot column. Rows are not reduced against each other below
/// the pivot; full reduction happens in [`SparseEchelon::reduce`].
#[derive(Clone, Debug)]
pub struct SparseEchelon {
    p: Prime,
    pivots: HashMap<usize, SparseVec>,
}

impl SparseEchelon {
    pub fn new(p: Prime) -> Self {
        SparseEchelon {
            p,
            pivots: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    /// Adds a row to the span. Returns `true` if the rank grew.
    pub fn insert(&mut self, row: impl IntoIterator<Item = (usize, u32)>) -> bool {
        let p = self.p;
        let mut acc: BTreeMap<usize, u32> = BTreeMap::new();
        for (col, c) in row {
            accumulate(p, &mut acc, &[(col, c % p.value())], 1);
        }
        while let Some((&lead, &c)) = acc.iter().next() {
            match self.pivots.get(&lead) {
                Some(prow) => {
                    let scale = p.neg(c);
                    accumulate(p, &mut acc, prow, scale);
                }
                None => {
                    let inv = p.inv(c);
                    let row: SparseVec = acc.into_iter().map(|(k, v)| (k, p.mul(v, inv))).collect();
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
        false
    }

    /// Unique representative of `v` modulo the span, supported on non-pivot
    /// columns.
    pub fn reduce(&self, v: impl IntoIterator<Item = (usize, u32)>) -> SparseVec {
        let p = self.p;
        let mut acc: BTreeMap<usize, u32> = BTreeMap::new();
        for (col, c) in v {
            accumulate(p, &mut acc, &[(col, c % p.value())], 1);
        }
        let mut out = Vec::new();
        while let Some((col, c)) = acc.pop_first() {
            match self.pivots.get(&col) {
                Some(prow) => {
                    // prow starts with (col, 1); the leading entry cancels c.
                    accumulate(p, &mut acc, &prow[1..], p.neg(c));
                }
                None => out.push((col, c)),
            }
        }
        out
    }

    pub fn contains(&self, v: impl IntoIterator<Item = (usize, u32)>) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Kernel of the linear map sending source basis vector `k` to `images[k]`.
/// Returns a basis of the kernel as sparse vectors over the source basis, in a
/// deterministic order.
pub fn kernel(p: Prime, images: &[SparseVec]) -> Vec<SparseVec> {
    // Row-reduce [image | e_k]; rows whose image part vanishes give the kernel.
    let n = images.len();
    let width = images
        .iter()
        .flat_map(|r| r.iter().map(|&(c, _)| c + 1))
        .max()
        .unwrap_or(0);
    let mut rows: Vec<(BTreeMap<usize, u32>, BTreeMap<usize, u32>)> = images
        .iter()
        .enumerate()
        .map(|(k, img)| {
            let mut a = BTreeMap::new();
            accumulate(p, &mut a, img, 1);
            let mut b = BTreeMap::new();
            b.insert(k, 1);
            (a, b)
        })
        .collect();
    let mut pivot_rows: Vec<usize> = Vec::new();
    let mut used = vec![false; n];
    for col in 0..width {
        let Some(r) = (0..n).find(|&r| !used[r] && rows[r].0.contains_key(&col)) else {
            continue;
        };
        used[r] = true;
        pivot_rows.push(r);
        let inv = p.inv(rows[r].0[&col]);
        let (pa, pb): (SparseVec, SparseVec) = (
            rows[r].0.iter().map(|(&k, &v)| (k, p.mul(v, inv))).collect(),
            rows[r].1.iter().map(|(&k, &v)| (k, p.mul(v, inv))).collect(),
        );
        for (other, row) in rows.iter_mut().enumerate() {
            if other == r {
                continue;
            }
            if let Some(&c) = row.0.get(&col) {
                let s = p.neg(c);
                accumulate(p, &mut row.0, &pa, s);
                accumulate(p, &mut row.1, &pb, s);
            }
        }
    }
    rows.into_iter()
        .enumerate()
        .filter(|(r, row)| !used[*r] && row.0.is_empty())
        .map(|(_, row)| row.1.into_iter().collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_rank_and_reduce() {
        let p = Prime::new(3).unwrap();
        let mut e = SparseEchelon::new(p);
        assert!(e.insert(vec![(0, 1), (2, 1)]));
        assert!(e.insert(vec![(1, 2), (2, 1)]));
        assert!(!e.insert(vec![(0, 2), (1, 2), (2, 0)])); // 2*(row0) + (row1) = (2,2,0)+... dependent
        assert_eq!(e.rank(), 2);
        // e0 ≡ -e2 modulo the span
        assert_eq!(e.reduce(vec![(0, 1)]), vec![(2, 2)]);
        assert!(e.contains(vec![(0, 1), (2, 1)]));
    }

    #[test]
    fn kernel_small() {
        let p = Prime::new(2).unwrap();
        // f(e0) = v0, f(e1) = v0, f(e2) = v1
        let images = vec![vec![(0, 1)], vec![(0, 1)], vec![(1, 1)]];
        let k = kernel(p, &images);
        assert_eq!(k, vec![vec![(0, 1), (1, 1)]]);
        let zero_map = vec![vec![], vec![]];
        assert_eq!(kernel(p, &zero_map).len(), 2);
    }
}
