//! Coordinate flags, the flag valuation and value semigroups.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactnum::{lattice_rank_and_index, LatticeIndex, Matrix};
use crate::glseries::{GradedSeries, SeriesError, TruncationBound};
use crate::polyform::{
    substituted_pivots, Exponent, FormSpan, HomogeneousForm, LinearSubstitution, PivotEnd, PolyError, SpanBuilder,
};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlagError {
    #[error("flag matrix must be square and invertible")]
    Singular,
    #[error("point must have {expected} coordinates, not all zero")]
    BadPoint { expected: usize },
    #[error("valuation of the zero form is undefined")]
    ZeroForm,
}

/// A full flag `Y₁ ⊃ … ⊃ Y_d` that becomes the standard coordinate flag
/// `Y_i = {X₁ = … = X_i = 0}` after the substitution `X ↦ A·X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag<F: Scalar> {
    matrix: Matrix<F>,
    inverse: Matrix<F>,
    label: String,
}

impl<F: Scalar> Flag<F> {
    pub fn standard(ambient_dim: usize) -> Self {
        let id = Matrix::identity(ambient_dim + 1);
        Self { matrix: id.clone(), inverse: id, label: "standard".into() }
    }

    pub fn from_matrix(matrix: Matrix<F>, label: impl Into<String>) -> Result<Self, FlagError> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(FlagError::Singular);
        }
        let inverse = matrix.inverse().ok_or(FlagError::Singular)?;
        Ok(Self { matrix, inverse, label: label.into() })
    }

    /// A flag whose point `Y_d` is `x`, completed by standard basis vectors.
    pub fn centered_at(point: &[F]) -> Result<Self, FlagError> {
        let n = point.len();
        if n == 0 || point.iter().all(Zero::is_zero) {
            return Err(FlagError::BadPoint { expected: n.max(1) });
        }
        let mut columns: Vec<Vec<F>> = Vec::with_capacity(n);
        for i in 0..n {
            if columns.len() == n - 1 {
                break;
            }
            let mut e = vec![F::zero(); n];
            e[i] = F::one();
            let mut trial = columns.clone();
            trial.push(e.clone());
            trial.push(point.to_vec());
            if Matrix::from_rows(trial.clone()).rank() == trial.len() {
                columns.push(e);
            }
        }
        columns.push(point.to_vec());
        let matrix = Matrix::from_rows(columns).transpose();
        let label = format!(
            "centered at [{}]",
            point.iter().map(ToString::to_string).collect::<Vec<_>>().join(":")
        );
        Self::from_matrix(matrix, label)
    }

    /// Deterministic pseudo-random flag with entries in `[-5, 5]`; seed 0 is the standard flag.
    ///
    /// Matrices with a vanishing minor are redrawn, so every flag element meets
    /// every coordinate subspace properly.
    pub fn random(ambient_dim: usize, seed: u64) -> Self {
        if seed == 0 {
            return Self::standard(ambient_dim);
        }
        let n = ambient_dim + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let entries: Vec<F> = (0..n * n).map(|_| F::from_i64(rng.random_range(-5..=5))).collect();
            let m = Matrix::new(n, n, entries);
            if all_minors_nonzero(&m) {
                return Self::from_matrix(m, format!("seed {seed}")).expect("nonzero determinant");
            }
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.matrix.rows() - 1
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_standard(&self) -> bool {
        self.matrix.is_identity()
    }

    /// The point `Y_d` in the original coordinates.
    pub fn point(&self) -> Vec<F> {
        self.matrix.column(self.matrix.cols() - 1)
    }

    /// `f ↦ f(A·X)`.
    pub fn transform(&self, f: &HomogeneousForm<F>) -> HomogeneousForm<F> {
        if self.is_standard() {
            return f.clone();
        }
        f.substitute_linear(&self.matrix).expect("flag matrix is invertible")
    }

    /// `g ↦ g(A⁻¹·X)`.
    pub fn untransform(&self, g: &HomogeneousForm<F>) -> HomogeneousForm<F> {
        if self.is_standard() {
            return g.clone();
        }
        g.substitute_linear(&self.inverse).expect("flag matrix is invertible")
    }

    /// The span in flag coordinates, in RREF.
    pub fn transform_span(&self, span: &FormSpan<F>) -> Result<FormSpan<F>, PolyError> {
        let full = Exponent::all_of_degree(span.nvars(), span.degree()).len();
        if self.is_standard() || span.dim() == full || span.is_zero() {
            return Ok(span.clone());
        }
        let sub = LinearSubstitution::new(&self.matrix)?;
        let mut b = SpanBuilder::new(span.nvars(), span.degree());
        for f in span.basis() {
            b.insert(&sub.apply(f))?;
        }
        Ok(b.finish())
    }
}

impl<F: Scalar> Flag<F> {
    /// The pivots of [`Flag::transform_span`] without building the reduced basis.
    pub fn transform_pivots(&self, span: &FormSpan<F>) -> Result<BTreeSet<Exponent>, PolyError> {
        let all = Exponent::all_of_degree(span.nvars(), span.degree());
        if self.is_standard() || span.dim() == all.len() || span.is_zero() {
            return Ok(span.pivots().cloned().collect());
        }
        let codim = all.len() - span.dim();
        if span.is_monomial() && codim < span.dim() {
            // Leading exponents of a subspace are the complement of the trailing exponents of
            // its orthogonal complement. Under the apolar pairing the complement of a monomial
            // span is spanned by the missing monomials and transforms by the inverse transpose.
            let missing: Vec<HomogeneousForm<F>> = all
                .iter()
                .filter(|e| span.basis_form(e).is_none())
                .map(|e| HomogeneousForm::monomial(e.clone(), F::one()))
                .collect();
            let dual = self.inverse.transpose();
            let trailing = substituted_pivots(&missing, &dual, span.nvars(), span.degree(), PivotEnd::Max)?;
            return Ok(all.into_iter().filter(|e| !trailing.contains(e)).collect());
        }
        substituted_pivots(span.basis(), &self.matrix, span.nvars(), span.degree(), PivotEnd::Min)
    }
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    (size - 1..n)
        .flat_map(|last| {
            subsets(last, size - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

fn all_minors_nonzero<F: Scalar>(m: &Matrix<F>) -> bool {
    let n = m.rows();
    (1..=n).all(|size| {
        let choices = subsets(n, size);
        choices.iter().all(|rows| {
            choices.iter().all(|cols| {
                let sub: Vec<Vec<F>> =
                    rows.iter().map(|&i| cols.iter().map(|&j| m.row(i)[j].clone()).collect()).collect();
                !Matrix::from_rows(sub).determinant().is_zero()
            })
        })
    })
}

/// `ν(f)`: the lex-minimal exponent of `f(A·X)` on the chart `X_{d+1} = 1`.
pub fn valuation<F: Scalar>(f: &HomogeneousForm<F>, flag: &Flag<F>) -> Result<Vec<u32>, FlagError> {
    let g = flag.transform(f);
    let (e, _) = g.leading().ok_or(FlagError::ZeroForm)?;
    Ok(dehomogenize(e))
}

fn dehomogenize(e: &Exponent) -> Vec<u32> {
    let entries = e.entries();
    entries[..entries.len() - 1].to_vec()
}

/// `Γ_k = {ν(s) : s ∈ S_k \ 0}`, read off the RREF pivots in flag coordinates.
pub fn level_valuations<F: Scalar>(
    series: &GradedSeries<F>,
    flag: &Flag<F>,
    k: usize,
    bound: TruncationBound,
) -> Result<BTreeSet<Vec<u32>>, SeriesError> {
    let level = series.level(k, bound)?;
    Ok(flag.transform_pivots(&level)?.iter().map(dehomogenize).collect())
}

/// The points `(ν, k)` of `Γ(S•)` with `k ≤ K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueSemigroup {
    ambient_dim: usize,
    /// `levels[k]` holds `Γ_k`.
    levels: Vec<BTreeSet<Vec<u32>>>,
}

impl ValueSemigroup {
    pub fn from_levels(ambient_dim: usize, levels: Vec<BTreeSet<Vec<u32>>>) -> Self {
        Self { ambient_dim, levels }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn truncation(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn level(&self, k: usize) -> &BTreeSet<Vec<u32>> {
        &self.levels[k]
    }

    pub fn levels(&self) -> &[BTreeSet<Vec<u32>>] {
        &self.levels
    }

    pub fn contains(&self, v: &[u32], k: usize) -> bool {
        self.levels.get(k).is_some_and(|l| l.contains(v))
    }

    /// All `(ν, k)` with `k ≥ 1`, lifted as `(ν₁,…,ν_d,k)`.
    pub fn points(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.levels.iter().enumerate().skip(1).flat_map(|(k, level)| {
            level.iter().map(move |v| {
                let mut p = v.clone();
                p.push(k as u32);
                p
            })
        })
    }

    pub fn is_empty(&self) -> bool {
        self.levels.iter().skip(1).all(BTreeSet::is_empty)
    }

    /// Closure under addition within the truncation.
    pub fn is_closed(&self) -> bool {
        let kk = self.truncation();
        for k1 in 1..=kk {
            for k2 in k1..=kk - k1 {
                for a in &self.levels[k1] {
                    for b in &self.levels[k2] {
                        let s: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        if !self.levels[k1 + k2].contains(&s) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

pub fn semigroup<F: Scalar>(
    series: &GradedSeries<F>,
    flag: &Flag<F>,
    bound: TruncationBound,
) -> Result<ValueSemigroup, SeriesError> {
    let levels = (0..=bound.get())
        .map(|k| level_valuations(series, flag, k, bound))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ValueSemigroup::from_levels(series.ambient_dim(), levels))
}

/// Rank and index in `ℤ^{d+1}` of the group generated by `Γ(S•)` (degree `k ≥ 1` points).
pub fn semigroup_index(gamma: &ValueSemigroup) -> (usize, LatticeIndex) {
    let cols = gamma.ambient_dim() + 1;
    let rows: Vec<Vec<BigInt>> =
        gamma.points().map(|p| p.into_iter().map(BigInt::from).collect()).collect();
    lattice_rank_and_index(&rows, cols)
}

/// `dim {s ∈ S_k : (ν₁,…,ν_r)(s) ≥ σ componentwise}`.
pub fn filtered_dimension<F: Scalar>(
    series: &GradedSeries<F>,
    flag: &Flag<F>,
    k: usize,
    sigma: &[u32],
    bound: TruncationBound,
) -> Result<usize, SeriesError> {
    assert!(sigma.len() <= series.ambient_dim(), "prefix longer than the flag");
    Ok(level_valuations(series, flag, k, bound)?
        .iter()
        .filter(|v| v.iter().zip(sigma).all(|(a, b)| a >= b))
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::Rational;

    type Series = GradedSeries<Rational>;

    fn plane_example() -> Series {
        Series::from_monomials(
            2,
            2,
            &[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2], vec![1, 1, 0], vec![1, 0, 1]],
        )
        .unwrap()
    }

    fn kb(k: usize) -> TruncationBound {
        TruncationBound::new(k).unwrap()
    }

    fn mono(e: &[u32]) -> HomogeneousForm<Rational> {
        HomogeneousForm::monomial(Exponent::new(e.to_vec()), Rational::one())
    }

    #[test]
    fn pivot_shortcuts_match_the_reduced_basis() {
        let s = plane_example();
        let squares = Series::from_monomials(2, 2, &[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]).unwrap();
        let mixed = {
            let x = |e: [u32; 3]| HomogeneousForm::monomial(Exponent::new(e.to_vec()), Rational::one());
            let mut f = x([1, 1, 0]);
            f.add_scaled(&x([0, 1, 1]), &Rational::from_i64(3));
            Series::from_generators(2, 2, [(1, vec![f, x([2, 0, 0]), x([0, 0, 2])])]).unwrap()
        };
        for series in [&s, &squares, &mixed] {
            for seed in 1..4 {
                let flag = Flag::random(2, seed);
                for k in 1..=3 {
                    let level = series.level(k, kb(3)).unwrap();
                    let oracle: BTreeSet<Exponent> = flag.transform_span(&level).unwrap().pivots().cloned().collect();
                    assert_eq!(flag.transform_pivots(&level).unwrap(), oracle, "seed {seed}, k {k}");
                }
            }
        }
    }

    #[test]
    fn valuations_of_monomials() {
        let flag = Flag::standard(2);
        assert_eq!(valuation(&mono(&[1, 1, 0]), &flag).unwrap(), vec![1, 1]);
        assert_eq!(valuation(&mono(&[0, 2, 0]), &flag).unwrap(), vec![0, 2]);
        assert_eq!(valuation(&mono(&[1, 0, 1]), &flag).unwrap(), vec![1, 0]);
        assert_eq!(valuation(&mono(&[0, 0, 0]), &flag).unwrap(), vec![0, 0]);
        assert_eq!(
            valuation(&HomogeneousForm::<Rational>::zero(3, 2), &flag),
            Err(FlagError::ZeroForm)
        );
    }

    #[test]
    fn plane_example_level_one() {
        let got = level_valuations(&plane_example(), &Flag::standard(2), 1, kb(1)).unwrap();
        let want: BTreeSet<Vec<u32>> =
            [[2, 0], [1, 1], [1, 0], [0, 2], [0, 0]].iter().map(|v| v.to_vec()).collect();
        assert_eq!(got, want);
        let lin = level_valuations(&Series::complete(2, 1), &Flag::standard(2), 1, kb(1)).unwrap();
        assert_eq!(lin.len(), 3);
    }

    #[test]
    fn semigroup_points_and_index() {
        let g = semigroup(&plane_example(), &Flag::standard(2), kb(3)).unwrap();
        assert!(g.contains(&[1, 1], 1) && g.contains(&[1, 0], 1) && g.contains(&[0, 2], 1));
        assert!(g.contains(&[1, 3], 2));
        assert!(g.is_closed());
        assert_eq!(semigroup_index(&g), (3, LatticeIndex::Finite(BigInt::one())));
        let z = semigroup(&Series::zero(2, 2), &Flag::standard(2), kb(3)).unwrap();
        assert!(z.is_empty());
    }

    #[test]
    fn even_degree_series_on_the_line_has_index_two() {
        let s = Series::from_monomials(1, 2, &[vec![2, 0], vec![0, 2]]).unwrap();
        let g = semigroup(&s, &Flag::standard(1), kb(4)).unwrap();
        assert_eq!(semigroup_index(&g), (2, LatticeIndex::Finite(BigInt::from(2))));
        let single = ValueSemigroup::from_levels(
            2,
            vec![BTreeSet::from([vec![0, 0]]), BTreeSet::from([vec![0, 0]])],
        );
        assert_eq!(semigroup_index(&single), (1, LatticeIndex::Infinite));
    }

    #[test]
    fn filtered_dimensions() {
        let s = plane_example();
        let flag = Flag::standard(2);
        assert_eq!(filtered_dimension(&s, &flag, 1, &[0, 0], kb(1)).unwrap(), 5);
        assert_eq!(filtered_dimension(&s, &flag, 1, &[1], kb(1)).unwrap(), 3);
        assert_eq!(filtered_dimension(&s, &flag, 1, &[5], kb(1)).unwrap(), 0);
    }

    #[test]
    fn random_flags_are_reproducible_and_invertible() {
        let a = Flag::<Rational>::random(2, 7);
        let b = Flag::<Rational>::random(2, 7);
        assert_eq!(a, b);
        assert!(!a.matrix().determinant().is_zero());
        assert_ne!(a, Flag::random(2, 8));
        assert!(Flag::<Rational>::random(2, 0).is_standard());
    }

    #[test]
    fn random_flags_avoid_coordinate_points() {
        for seed in 1..40 {
            let flag = Flag::<Rational>::random(2, seed);
            assert!(flag.point().iter().all(|c| !c.is_zero()));
            // Y₁ is spanned by the last two columns; it contains e_j iff det[e_j, A₂, A₃] = 0.
            let m = flag.matrix();
            for j in 0..3 {
                let mut e = vec![Rational::zero(); 3];
                e[j] = Rational::one();
                let rows = vec![e, m.column(1), m.column(2)];
                assert!(!Matrix::from_rows(rows).determinant().is_zero(), "seed {seed}");
            }
        }
    }

    #[test]
    fn centered_flag_puts_the_point_last() {
        let q = Rational::from_i64;
        let x = vec![q(1), q(2), q(0)];
        let flag = Flag::centered_at(&x).unwrap();
        assert_eq!(flag.point(), x);
        // X3 vanishes at x, so its valuation is positive in the first coordinate chain.
        let v = valuation(&mono(&[0, 0, 1]), &flag).unwrap();
        assert_ne!(v, vec![0, 0]);
        let nonzero = valuation(&mono(&[1, 0, 0]), &flag).unwrap();
        assert_eq!(nonzero, vec![0, 0]);
    }

    #[test]
    fn transform_roundtrip() {
        let flag = Flag::<Rational>::random(2, 3);
        let f = &mono(&[1, 1, 0]) + &mono(&[0, 0, 2]);
        assert_eq!(flag.untransform(&flag.transform(&f)), f);
    }
}
