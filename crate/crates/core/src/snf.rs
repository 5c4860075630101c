//! Smith normal form of integer matrices and integer lattice membership.

use serde::{Deserialize, Serialize};

/// Invariant factors `d1 | d2 | ... ` of an `rows x cols` integer matrix.
///
/// `factors` has `min(rows, cols)` entries; trailing zeros mark rank deficiency.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    pub factors: Vec<i64>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.factors.iter().filter(|&&d| d != 0).count()
    }

    /// Free rank of `Z^cols / rowspace`.
    pub fn cokernel_free_rank(&self) -> usize {
        self.cols - self.rank()
    }

    /// Invariant factors of the cokernel that are greater than one.
    pub fn torsion(&self) -> Vec<i64> {
        self.factors.iter().copied().filter(|&d| d > 1).collect()
    }
}

/// `a[dst][from..] += q * a[src][from..]`
fn add_row_multiple(a: &mut [Vec<i128>], dst: usize, src: usize, q: i128, from: usize) {
    let src_row = a[src][from..].to_vec();
    for (x, y) in a[dst][from..].iter_mut().zip(src_row) {
        *x += q * y;
    }
}

/// Computes the Smith normal form by repeated pivoting on the entry of least
/// absolute value. Entries are carried as `i128`.
pub fn smith_normal_form(matrix: &[Vec<i64>]) -> SmithForm {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols, "ragged matrix");
            r.iter().map(|&x| x as i128).collect()
        })
        .collect();
    let k = rows.min(cols);
    let mut diag = Vec::with_capacity(k);

    for t in 0..k {
        // pivot: smallest nonzero |entry| in the trailing block
        let Some((pi, pj)) = min_nonzero(&a, t) else {
            diag.extend(std::iter::repeat_n(0, k - t));
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    add_row_multiple(&mut a, i, t, -q, t);
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                dirty |= a[t][j] != 0;
            }
            if !dirty {
                // divisibility of the trailing block
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        add_row_multiple(&mut a, t, i, 1, t);
                        continue;
                    }
                }
            }
            let (pi, pj) = min_nonzero_cross(&a, t);
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
        }
        diag.push(a[t][t].abs());
    }
    SmithForm {
        rows,
        cols,
        factors: diag.into_iter().map(|d| i64::try_from(d).expect("factor overflow")).collect(),
    }
}

fn min_nonzero(a: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(i128, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, &x) in row.iter().enumerate().skip(t) {
            if x != 0 && best.is_none_or(|(b, _, _)| x.abs() < b) {
                best = Some((x.abs(), i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

// smallest nonzero entry in row t / column t beyond the pivot, or the pivot itself
fn min_nonzero_cross(a: &[Vec<i128>], t: usize) -> (usize, usize) {
    let mut best = (a[t][t].abs(), t, t);
    for (i, row) in a.iter().enumerate().skip(t + 1) {
        if row[t] != 0 && row[t].abs() < best.0 {
            best = (row[t].abs(), i, t);
        }
    }
    for (j, &x) in a[t].iter().enumerate().skip(t + 1) {
        if x != 0 && x.abs() < best.0 {
            best = (x.abs(), t, j);
        }
    }
    (best.1, best.2)
}

/// Does `v` lie in the Z-span of `rows`? Decided with the invariant factors:
/// appending `v` leaves the lattice unchanged iff rank and the product of the
/// nonzero factors are both unchanged.
pub fn lattice_contains_by_smith(rows: &[Vec<i64>], v: &[i64]) -> bool {
    if v.iter().all(|&x| x == 0) {
        return true;
    }
    if rows.is_empty() {
        return false;
    }
    let before = smith_normal_form(rows);
    let mut extended = rows.to_vec();
    extended.push(v.to_vec());
    let after = smith_normal_form(&extended);
    let covolume = |s: &SmithForm| -> i128 {
        s.factors.iter().filter(|&&d| d != 0).map(|&d| d as i128).product()
    };
    before.rank() == after.rank() && covolume(&before) == covolume(&after)
}

/// Row-echelon (Hermite-style) basis of an integer lattice, used for membership
/// queries independent of the Smith route.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<i128>>,
}

impl Lattice {
    pub fn from_rows(dim: usize, rows: &[Vec<i64>]) -> Self {
        let mut pending: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), dim);
                r.iter().map(|&x| x as i128).collect()
            })
            .collect();
        let mut basis: Vec<Vec<i128>> = Vec::new();
        let mut col = 0;
        while col < dim && !pending.is_empty() {
            // gcd-combine all pending rows on this column
            loop {
                pending.retain(|r| r.iter().any(|&x| x != 0));
                let mut nz: Vec<usize> = (0..pending.len()).filter(|&i| pending[i][col] != 0).collect();
                if nz.len() <= 1 {
                    if let Some(&i) = nz.first() {
                        let mut row = pending.remove(i);
                        if row[col] < 0 {
                            row.iter_mut().for_each(|x| *x = -*x);
                        }
                        basis.push(row);
                    }
                    break;
                }
                nz.sort_by_key(|&i| pending[i][col].abs());
                let p = nz[0];
                for &i in &nz[1..] {
                    let q = pending[i][col] / pending[p][col];
                    let pivot = pending[p].clone();
                    for (x, y) in pending[i].iter_mut().zip(pivot) {
                        *x -= q * y;
                    }
                }
            }
            col += 1;
        }
        Lattice { dim, basis }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut r: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for row in &self.basis {
            let c = row.iter().position(|&x| x != 0).expect("nonzero basis row");
            if r[c] % row[c] != 0 {
                return false;
            }
            let q = r[c] / row[c];
            for (x, y) in r.iter_mut().zip(row) {
                *x -= q * y;
            }
        }
        r.iter().all(|&x| x == 0)
    }
}
