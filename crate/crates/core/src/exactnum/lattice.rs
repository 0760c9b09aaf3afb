//! Integer matrices and the lattice computations built on them.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must equal rows*cols");
        Self { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::new(rows.len(), cols, rows.iter().flatten().cloned().collect())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
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
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Exact determinant via fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] += factor * row[source]`
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = factor * &self[(source, j)];
            self[(target, j)] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    /// Replaces rows `(a, b)` by `(x·a + y·b, u·a + v·b)`; unimodular when `x·v - y·u = ±1`.
    fn combine_rows(&mut self, a: usize, b: usize, [x, y, u, v]: [&BigInt; 4]) {
        for j in 0..self.cols {
            let ra = self[(a, j)].clone();
            let rb = self[(b, j)].clone();
            self[(a, j)] = x * &ra + y * &rb;
            self[(b, j)] = u * &ra + v * &rb;
        }
    }

    fn combine_cols(&mut self, a: usize, b: usize, [x, y, u, v]: [&BigInt; 4]) {
        for i in 0..self.rows {
            let ca = self[(i, a)].clone();
            let cb = self[(i, b)].clone();
            self[(i, a)] = x * &ca + y * &cb;
            self[(i, b)] = u * &ca + v * &cb;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let delta = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += delta;
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_vecs()).finish()
    }
}

/// Row-style Hermite normal form `H = U·M`.
///
/// Pivots are positive and entries above each pivot lie in `[0, pivot)`;
/// zero rows sit at the bottom. `U` is unimodular.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut r = 0;
    for c in 0..h.cols {
        if r == h.rows {
            break;
        }
        for i in r + 1..h.rows {
            if h[(i, c)].is_zero() {
                continue;
            }
            let a = h[(r, c)].clone();
            let b = h[(i, c)].clone();
            let [c0, c1, c2, c3] = elimination_coefficients(&a, &b);
            let coeffs = [&c0, &c1, &c2, &c3];
            h.combine_rows(r, i, coeffs);
            u.combine_rows(r, i, coeffs);
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let pivot = h[(r, c)].clone();
        for i in 0..r {
            let q = h[(i, c)].div_floor(&pivot);
            let neg = -q;
            h.add_row_multiple(i, r, &neg);
            u.add_row_multiple(i, r, &neg);
        }
        r += 1;
    }
    (h, u)
}

/// Smith normal form `S = U·M·V` with `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
    /// `d₁ | d₂ | …`, non-negative, zeros trailing; length `min(rows, cols)`.
    pub invariant_factors: Vec<BigInt>,
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);
    for t in 0..n {
        // Move the smallest nonzero entry of the trailing block to (t, t).
        let Some((pi, pj)) = smallest_entry(&s, t) else {
            break;
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..s.rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let a = s[(t, t)].clone();
                let b = s[(i, t)].clone();
                let [c0, c1, c2, c3] = elimination_coefficients(&a, &b);
                let coeffs = [&c0, &c1, &c2, &c3];
                s.combine_rows(t, i, coeffs);
                u.combine_rows(t, i, coeffs);
            }
            for j in t + 1..s.cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                clean = false;
                let a = s[(t, t)].clone();
                let b = s[(t, j)].clone();
                let [c0, c1, c2, c3] = elimination_coefficients(&a, &b);
                let coeffs = [&c0, &c1, &c2, &c3];
                s.combine_cols(t, j, coeffs);
                v.combine_cols(t, j, coeffs);
            }
            if clean && (t + 1..s.rows).all(|i| s[(i, t)].is_zero()) {
                // Enforce divisibility of the trailing block by the pivot.
                let pivot = s[(t, t)].clone();
                let bad = (t + 1..s.rows)
                    .find(|&i| (t + 1..s.cols).any(|j| !s[(i, j)].is_multiple_of(&pivot)));
                match bad {
                    Some(i) => {
                        let one = BigInt::one();
                        s.add_row_multiple(t, i, &one);
                        u.add_row_multiple(t, i, &one);
                    }
                    None => break,
                }
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    let invariant_factors = (0..n).map(|i| s[(i, i)].clone()).collect();
    SmithForm { diagonal: s, left: u, right: v, invariant_factors }
}

/// `[x, y, u, v]` with `x·a + y·b = gcd(a, b)`, `u·a + v·b = 0` and determinant one.
/// When `a | b` the row of `a` is kept as is, so repeated sweeps terminate.
fn elimination_coefficients(a: &BigInt, b: &BigInt) -> [BigInt; 4] {
    if !a.is_zero() && b.is_multiple_of(a) {
        return [BigInt::one(), BigInt::zero(), -(b / a), BigInt::one()];
    }
    let eg = a.extended_gcd(b);
    let (ag, bg) = (a / &eg.gcd, b / &eg.gcd);
    [eg.x, eg.y, -bg, ag]
}

fn smallest_entry(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows {
        for j in t..s.cols {
            let e = &s[(i, j)];
            if e.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| e.abs() < s[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl LatticeIndex {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            LatticeIndex::Finite(i) => Some(i),
            LatticeIndex::Infinite => None,
        }
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(i) => write!(f, "{i}"),
            LatticeIndex::Infinite => f.write_str("infinite"),
        }
    }
}

/// Rank of the subgroup of `ℤ^ambient_rank` generated by `generators`, and its index.
pub fn lattice_rank_and_index(
    generators: &[Vec<BigInt>],
    ambient_rank: usize,
) -> (usize, LatticeIndex) {
    assert!(
        generators.iter().all(|g| g.len() == ambient_rank),
        "generator length must equal the ambient rank"
    );
    if ambient_rank == 0 {
        return (0, LatticeIndex::Finite(BigInt::one()));
    }
    if generators.is_empty() {
        return (0, LatticeIndex::Infinite);
    }
    let m = IntMatrix::from_rows(generators, ambient_rank);
    let snf = smith_normal_form(&m);
    let nonzero: Vec<&BigInt> = snf.invariant_factors.iter().filter(|d| !d.is_zero()).collect();
    let rank = nonzero.len();
    if rank < ambient_rank {
        return (rank, LatticeIndex::Infinite);
    }
    (rank, LatticeIndex::Finite(nonzero.into_iter().product()))
}

pub fn lattice_index(generators: &[Vec<BigInt>], ambient_rank: usize) -> LatticeIndex {
    lattice_rank_and_index(generators, ambient_rank).1
}

/// Nonzero rows of the Hermite normal form: a canonical basis of the generated lattice.
pub fn lattice_basis(generators: &[Vec<BigInt>], ambient_rank: usize) -> Vec<Vec<BigInt>> {
    if generators.is_empty() {
        return Vec::new();
    }
    let (h, _) = hermite_normal_form(&IntMatrix::from_rows(generators, ambient_rank));
    h.row_vecs()
        .into_iter()
        .filter(|r| r.iter().any(|v| !v.is_zero()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn is_hnf(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut zero_seen = false;
        for i in 0..h.rows() {
            let lead = (0..h.cols()).find(|&j| !h[(i, j)].is_zero());
            match lead {
                None => zero_seen = true,
                Some(c) => {
                    if zero_seen || last_pivot.is_some_and(|p| c <= p) {
                        return false;
                    }
                    let p = &h[(i, c)];
                    if !p.is_positive() {
                        return false;
                    }
                    if (0..i).any(|k| h[(k, c)].is_negative() || &h[(k, c)] >= p) {
                        return false;
                    }
                    last_pivot = Some(c);
                }
            }
        }
        true
    }

    #[test]
    fn hnf_identity() {
        let (h, u) = hermite_normal_form(&IntMatrix::identity(2));
        assert_eq!(h, IntMatrix::identity(2));
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_already_reduced() {
        let m = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 2]]);
        let (h, _) = hermite_normal_form(&m);
        assert_eq!(h, m);
    }

    #[test]
    fn hnf_of_plane_example_rows_is_unimodular() {
        let m = IntMatrix::from_i64_rows(&[&[1, 1, 1], &[1, 0, 1], &[0, 2, 1]]);
        let (h, u) = hermite_normal_form(&m);
        assert!(is_hnf(&h));
        assert_eq!(&u * &m, h);
        assert_eq!(h.determinant().abs(), BigInt::one());
        assert_eq!(h, IntMatrix::identity(3));
    }

    #[test]
    fn snf_examples() {
        let snf = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(snf.invariant_factors, ints(&[1, 1, 1]));
        let m = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.invariant_factors, ints(&[1, 6]));
        assert_eq!(&(&snf.left * &m) * &snf.right, snf.diagonal);
        let deficient = IntMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(smith_normal_form(&deficient).invariant_factors, ints(&[1, 0]));
    }

    #[test]
    fn index_examples() {
        assert_eq!(
            lattice_index(&[ints(&[1, 0]), ints(&[0, 1])], 2),
            LatticeIndex::Finite(1.into())
        );
        assert_eq!(
            lattice_index(&[ints(&[2, 0]), ints(&[0, 2])], 2),
            LatticeIndex::Finite(4.into())
        );
        assert_eq!(
            lattice_index(&[ints(&[1, 1, 1]), ints(&[1, 0, 1]), ints(&[0, 2, 1])], 3),
            LatticeIndex::Finite(1.into())
        );
        assert_eq!(lattice_index(&[ints(&[0, 0, 1])], 3), LatticeIndex::Infinite);
    }
}
