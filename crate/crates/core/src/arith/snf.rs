//! Integer matrices: Smith and Hermite normal forms, and finite abelian
//! groups presented by generators and relations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, v) in r.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        Self::from_rows(&rows, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        bareiss_det(&self.to_rows())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// Fraction-free determinant.
pub fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Smith normal form: `(U, D, V)` with `U * A * V = D`, `U` and `V`
/// unimodular, `D` diagonal with non-negative entries `d_1 | d_2 | ...`.
pub fn smith_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        // Pivot: smallest nonzero entry of the trailing block.
        let Some((pi, pj)) = smallest_entry(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !d[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !d[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // Divisibility: fold in any row whose block entries are not multiples.
                let piv = d[(t, t)].clone();
                let bad = (t + 1..m)
                    .find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&piv)));
                match bad {
                    None => break,
                    Some(i) => {
                        let one = BigInt::one();
                        d.add_row(t, i, &one);
                        u.add_row(t, i, &one);
                    }
                }
            }
            let (pi, pj) = smallest_entry_cross(&d, t);
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    (u, d, v)
}

fn smallest_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            if d[(i, j)].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smallest nonzero entry in row `t` / column `t` of the trailing block.
fn smallest_entry_cross(d: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let better = |a: &BigInt, b: &BigInt| !a.is_zero() && (b.is_zero() || a.abs() < b.abs());
    for i in t..d.rows {
        if better(&d[(i, t)], &d[best]) {
            best = (i, t);
        }
    }
    for j in t..d.cols {
        if better(&d[(t, j)], &d[best]) {
            best = (t, j);
        }
    }
    best
}

/// Row-style Hermite normal form of the lattice spanned by `rows`
/// (vectors of length `cols`). Returns the nonzero rows: upper echelon,
/// positive pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_rows(rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut col = 0;
    while col < cols && !a.is_empty() {
        // Euclid down column `col` among remaining rows.
        loop {
            let nz: Vec<usize> = (0..a.len()).filter(|&i| !a[i][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| a[i][col].abs()).unwrap();
            for &i in &nz {
                if i == p {
                    continue;
                }
                let q = a[i][col].div_floor(&a[p][col]);
                let pr = a[p].clone();
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
            }
        }
        if let Some(p) = (0..a.len()).find(|&i| !a[i][col].is_zero()) {
            let mut r = a.swap_remove(p);
            if r[col].is_negative() {
                r.iter_mut().for_each(|x| *x = -&*x);
            }
            out.push(r);
        }
        a.retain(|r| r.iter().any(|x| !x.is_zero()));
        col += 1;
    }
    // Reduce above pivots.
    for k in 0..out.len() {
        let pc = out[k].iter().position(|x| !x.is_zero()).unwrap();
        let piv = out[k][pc].clone();
        let pr = out[k].clone();
        for row in out.iter_mut().take(k) {
            let q = row[pc].div_floor(&piv);
            if !q.is_zero() {
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
            }
        }
    }
    out
}

/// Finite (or not) abelian group `Z^n / <relations>` in Smith form.
#[derive(Clone, Debug)]
pub struct AbelianGroup {
    /// Invariant factors including ones; zero marks a free factor.
    diag: Vec<BigInt>,
    /// Column transform: coordinates `x` map to `x * v`.
    v: IntMatrix,
}

impl AbelianGroup {
    /// `relations` are rows of length `ngens`.
    pub fn from_relations(ngens: usize, relations: &[Vec<BigInt>]) -> Self {
        let a = IntMatrix::from_rows(relations, ngens);
        let (_, d, v) = smith_normal_form(&a);
        let diag = (0..ngens)
            .map(|i| if i < d.rows { d[(i, i)].clone() } else { BigInt::zero() })
            .collect();
        AbelianGroup { diag, v }
    }

    pub fn ngens(&self) -> usize {
        self.diag.len()
    }

    /// Smith diagonal, one entry per generator (ones included).
    pub fn diagonal(&self) -> &[BigInt] {
        &self.diag
    }

    /// Nontrivial invariant factors `d_1 | d_2 | ...`; zero is a free factor.
    pub fn invariants(&self) -> Vec<BigInt> {
        self.diag.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    /// `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        let mut o = BigInt::one();
        for d in &self.diag {
            if d.is_zero() {
                return None;
            }
            o *= d;
        }
        Some(o)
    }

    /// Canonical coordinates of an element given on the original generators:
    /// one residue per invariant factor (full length, ones included).
    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.ngens(), "wrong coordinate length");
        (0..self.ngens())
            .map(|j| {
                let mut s = BigInt::zero();
                for (i, xi) in x.iter().enumerate() {
                    s += xi * &self.v[(i, j)];
                }
                if self.diag[j].is_zero() {
                    s
                } else {
                    s.mod_floor(&self.diag[j])
                }
            })
            .collect()
    }

    pub fn is_identity(&self, x: &[BigInt]) -> bool {
        self.reduce(x).iter().all(|c| c.is_zero())
    }

    /// Index of the subgroup generated by `elems` (original coordinates).
    /// `None` if the quotient is infinite.
    pub fn subgroup_index(&self, elems: &[Vec<BigInt>]) -> Option<BigInt> {
        let n = self.ngens();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for (j, d) in self.diag.iter().enumerate() {
            let mut r = vec![BigInt::zero(); n];
            r[j] = d.clone();
            rows.push(r);
        }
        for e in elems {
            rows.push(self.reduce(e));
        }
        let h = hermite_rows(&rows, n);
        if h.len() < n {
            return None;
        }
        Some(h.iter().enumerate().map(|(i, r)| r[i].clone()).product())
    }
}
