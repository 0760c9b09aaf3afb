//! Exact two-phase simplex over an ordered field, Bland's rule throughout.

use num_traits::Zero;

use super::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome<F> {
    Optimal { x: Vec<F>, value: F },
    Infeasible,
    Unbounded,
}

struct Tableau<F> {
    /// `m` constraint rows followed by one objective row; the last column is the right-hand side.
    t: Matrix<F>,
    basis: Vec<usize>,
    m: usize,
    width: usize,
}

impl<F: Scalar> Tableau<F> {
    fn rhs(&self, i: usize) -> F {
        self.t[(i, self.width)].clone()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let cols = self.width + 1;
        let inv = F::one() / self.t[(row, col)].clone();
        for j in 0..cols {
            self.t[(row, j)] = self.t[(row, j)].clone() * inv.clone();
        }
        for i in 0..=self.m {
            if i == row || self.t[(i, col)].is_zero() {
                continue;
            }
            let factor = self.t[(i, col)].clone();
            for j in 0..cols {
                let delta = factor.clone() * self.t[(row, j)].clone();
                self.t[(i, j)] = self.t[(i, j)].clone() - delta;
            }
        }
        self.basis[row] = col;
    }

    /// Minimizes the objective row over columns `< allowed`. Returns false when unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        loop {
            let obj = self.m;
            let Some(col) = (0..allowed).find(|&j| self.t[(obj, j)].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, F)> = None;
            for i in 0..self.m {
                let a = &self.t[(i, col)];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a.clone();
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((row, _)) = best else {
                return false;
            };
            self.pivot(row, col);
        }
    }
}

/// Maximizes `c·x` subject to `A·x = b`, `x ≥ 0`.
pub fn maximize<F: Scalar>(c: &[F], a: &Matrix<F>, b: &[F]) -> LpOutcome<F> {
    let (m, n) = (a.rows(), a.cols());
    assert_eq!(c.len(), n, "objective length mismatch");
    assert_eq!(b.len(), m, "right-hand side length mismatch");

    // Phase one: artificial columns n..n+m, minimize their sum.
    let width = n + m;
    let mut t = Matrix::zeros(m + 1, width + 1);
    for i in 0..m {
        let flip = b[i].is_negative();
        for j in 0..n {
            let v = a[(i, j)].clone();
            t[(i, j)] = if flip { -v } else { v };
        }
        t[(i, n + i)] = F::one();
        t[(i, width)] = if flip { -b[i].clone() } else { b[i].clone() };
    }
    for j in 0..=width {
        if j >= n && j < width {
            continue;
        }
        let s = (0..m).fold(F::zero(), |acc, i| acc + t[(i, j)].clone());
        t[(m, j)] = -s;
    }
    let mut tab = Tableau { t, basis: (n..n + m).collect(), m, width };
    tab.run(width);
    if !tab.rhs(m).is_zero() {
        return LpOutcome::Infeasible;
    }
    // Drive artificial variables out of the basis where possible.
    for i in 0..m {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !tab.t[(i, j)].is_zero()) {
                tab.pivot(i, j);
            }
        }
    }
    let keep: Vec<usize> = (0..m).filter(|&i| tab.basis[i] < n).collect();
    let m2 = keep.len();
    let mut t2 = Matrix::zeros(m2 + 1, n + 1);
    for (r, &i) in keep.iter().enumerate() {
        for j in 0..n {
            t2[(r, j)] = tab.t[(i, j)].clone();
        }
        t2[(r, n)] = tab.rhs(i);
    }
    let basis: Vec<usize> = keep.iter().map(|&i| tab.basis[i]).collect();
    // Phase two objective row: minimize -c·x, expressed in the current basis.
    for j in 0..n {
        t2[(m2, j)] = -c[j].clone();
    }
    for (r, &bj) in basis.iter().enumerate() {
        let coef = t2[(m2, bj)].clone();
        if coef.is_zero() {
            continue;
        }
        for j in 0..=n {
            let delta = coef.clone() * t2[(r, j)].clone();
            t2[(m2, j)] = t2[(m2, j)].clone() - delta;
        }
    }
    let mut tab2 = Tableau { t: t2, basis, m: m2, width: n };
    if !tab2.run(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![F::zero(); n];
    for (r, &bj) in tab2.basis.iter().enumerate() {
        x[bj] = tab2.rhs(r);
    }
    let value = c.iter().zip(&x).fold(F::zero(), |acc, (ci, xi)| acc + ci.clone() * xi.clone());
    LpOutcome::Optimal { x, value }
}

/// Some `x ≥ 0` with `A·x = b`, if one exists.
pub fn feasible_point<F: Scalar>(a: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    match maximize(&vec![F::zero(); a.cols()], a, b) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

/// Whether `target` is a non-negative combination of `generators`.
pub fn in_cone<F: Scalar>(generators: &[Vec<F>], target: &[F]) -> bool {
    cone_coefficients(generators, target).is_some()
}

pub fn cone_coefficients<F: Scalar>(generators: &[Vec<F>], target: &[F]) -> Option<Vec<F>> {
    if generators.is_empty() {
        return target.iter().all(Zero::is_zero).then(Vec::new);
    }
    let a = Matrix::from_rows(generators.to_vec()).transpose();
    feasible_point(&a, target)
}

/// Whether `target` lies in the convex hull of `points`.
pub fn in_convex_hull<F: Scalar>(points: &[Vec<F>], target: &[F]) -> bool {
    if points.is_empty() {
        return false;
    }
    let lifted: Vec<Vec<F>> = points
        .iter()
        .map(|p| p.iter().cloned().chain(std::iter::once(F::one())).collect())
        .collect();
    let goal: Vec<F> = target.iter().cloned().chain(std::iter::once(F::one())).collect();
    in_cone(&lifted, &goal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn small_lp() {
        // max x + y s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = Matrix::from_i64_rows(&[&[1, 2, 1, 0], &[3, 1, 0, 1]]);
        let out = maximize(&[q(1), q(1), q(0), q(0)], &a, &[q(4), q(6)]);
        match out {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, Rational::new(14.into(), 5.into()));
                assert_eq!(x[0], Rational::new(8.into(), 5.into()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = Matrix::<Rational>::from_i64_rows(&[&[1, 1]]);
        assert_eq!(maximize(&[q(0), q(0)], &a, &[q(-1)]), LpOutcome::Infeasible);
        let a = Matrix::<Rational>::from_i64_rows(&[&[1, -1]]);
        assert_eq!(maximize(&[q(1), q(0)], &a, &[q(1)]), LpOutcome::Unbounded);
    }

    #[test]
    fn cone_and_hull_membership() {
        let gens = vec![vec![q(1), q(0)], vec![q(1), q(1)]];
        assert!(in_cone(&gens, &[q(3), q(1)]));
        assert!(!in_cone(&gens, &[q(0), q(1)]));
        let tri = vec![vec![q(0), q(0)], vec![q(2), q(0)], vec![q(0), q(2)]];
        assert!(in_convex_hull(&tri, &[q(1), q(1)]));
        assert!(!in_convex_hull(&tri, &[q(2), q(1)]));
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let a = Matrix::<Rational>::from_i64_rows(&[&[1, 1], &[2, 2]]);
        let out = maximize(&[q(1), q(0)], &a, &[q(3), q(6)]);
        assert_eq!(out, LpOutcome::Optimal { x: vec![q(3), q(0)], value: q(3) });
    }
}
