//! Monomial ideals: base ideals of monomial series, saturation, the
//! sheafified series, stable base loci and the lattice birationality test.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

use crate::exactnum::{lattice_basis, lattice_rank_and_index, LatticeIndex};
use crate::glseries::{hilbert_data, GradedSeries, SeriesError, TruncationBound};
use crate::polyform::{Exponent, FormSpan};
use crate::scalar::Scalar;

/// A monomial ideal in `nvars` variables, stored by its minimal generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    nvars: usize,
    generators: Vec<Exponent>,
}

impl MonomialIdeal {
    pub fn new(nvars: usize, generators: impl IntoIterator<Item = Exponent>) -> Self {
        let mut all: Vec<Exponent> = generators.into_iter().collect();
        all.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
        all.dedup();
        let mut minimal: Vec<Exponent> = Vec::new();
        for g in all {
            assert_eq!(g.len(), nvars, "exponent length mismatch");
            if !minimal.iter().any(|m| m.divides(&g)) {
                minimal.push(g);
            }
        }
        minimal.sort();
        Self { nvars, generators: minimal }
    }

    pub fn zero(nvars: usize) -> Self {
        Self { nvars, generators: Vec::new() }
    }

    pub fn unit(nvars: usize) -> Self {
        Self { nvars, generators: vec![Exponent::zero(nvars)] }
    }

    /// The ideal generated by the monomials of a monomial span; `None` otherwise.
    pub fn from_span<F: Scalar>(span: &FormSpan<F>) -> Option<Self> {
        span.is_monomial().then(|| Self::new(span.nvars(), span.pivots().cloned()))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Exponent] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.generators.first().is_some_and(|g| g.degree() == 0)
    }

    pub fn contains(&self, e: &Exponent) -> bool {
        self.generators.iter().any(|g| g.divides(e))
    }

    pub fn contains_ideal(&self, other: &MonomialIdeal) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> MonomialIdeal {
        Self::new(self.nvars, self.generators.iter().chain(&other.generators).cloned())
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let gens = self
            .generators
            .iter()
            .flat_map(|a| other.generators.iter().map(move |b| a.lcm(b)));
        Self::new(self.nvars, gens)
    }

    /// `I : X_var^∞`.
    pub fn saturate_variable(&self, var: usize) -> MonomialIdeal {
        let gens = self.generators.iter().map(|g| {
            let mut e = g.entries().to_vec();
            e[var] = 0;
            Exponent::new(e)
        });
        Self::new(self.nvars, gens)
    }

    /// Degree-`degree` monomials in the ideal, ascending lex.
    pub fn monomials_of_degree(&self, degree: u32) -> Vec<Exponent> {
        Exponent::all_of_degree(self.nvars, degree)
            .into_iter()
            .filter(|e| self.contains(e))
            .collect()
    }

    /// Components of `V(I) ⊆ ℙ^{n-1}`, each given by the variables vanishing on it.
    pub fn zero_locus(&self) -> Vec<BTreeSet<usize>> {
        let n = self.nvars;
        if self.is_zero() {
            return vec![BTreeSet::new()];
        }
        let mut covers: Vec<BTreeSet<usize>> = Vec::new();
        // Proper subsets only: the full set of variables cuts out nothing in projective space.
        for size in 1..n {
            for subset in subsets(n, size) {
                if covers.iter().any(|c| c.is_subset(&subset)) {
                    continue;
                }
                let hits = self
                    .generators
                    .iter()
                    .all(|g| subset.iter().any(|&i| g.entries()[i] > 0));
                if hits {
                    covers.push(subset);
                }
            }
        }
        covers
    }

    /// Whether every generator vanishes at the projective point `x`.
    pub fn vanishes_at<F: Scalar>(&self, x: &[F]) -> bool {
        self.generators
            .iter()
            .all(|g| g.entries().iter().zip(x).any(|(&e, v)| e > 0 && v.is_zero()))
    }
}

fn subsets(n: usize, size: usize) -> Vec<BTreeSet<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![(0usize, BTreeSet::new())];
    while let Some((start, cur)) = stack.pop() {
        if cur.len() == size {
            out.push(cur);
            continue;
        }
        for i in (start..n).rev() {
            let mut next = cur.clone();
            next.insert(i);
            stack.push((i + 1, next));
        }
    }
    out
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.generators.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `I : (X₁,…,X_n)^∞ = ⋂_i (I : X_i^∞)`.
pub fn saturate(ideal: &MonomialIdeal) -> MonomialIdeal {
    if ideal.is_zero() || ideal.is_unit() {
        return ideal.clone();
    }
    (1..ideal.nvars())
        .fold(ideal.saturate_variable(0), |acc, i| acc.intersect(&ideal.saturate_variable(i)))
}

/// The base ideal of `|S_k|` for a monomial level.
pub fn base_ideal<F: Scalar>(
    series: &GradedSeries<F>,
    k: usize,
    bound: TruncationBound,
) -> Result<MonomialIdeal, SeriesError> {
    let level = series.level(k, bound)?;
    MonomialIdeal::from_span(&level).ok_or(SeriesError::NotMonomial { k })
}

/// The sheafified series: level `k` is spanned by the degree-`k·m` monomials of the saturated base ideal.
pub fn sheafify<F: Scalar>(
    series: &GradedSeries<F>,
    bound: TruncationBound,
) -> Result<GradedSeries<F>, SeriesError> {
    // Fail early on non-monomial input instead of at first use.
    for k in 1..=bound.get() {
        base_ideal(series, k, bound)?;
    }
    Ok(series.sheafify())
}

/// Stable base locus read off the base ideals in degrees `≤ K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseLocusReport {
    pub truncation: usize,
    /// `ideals[k-1]` is the base ideal of `S_k`.
    pub ideals: Vec<MonomialIdeal>,
    /// Coordinate subspaces, each given by the vanishing variables (0-based).
    pub components: Vec<BTreeSet<usize>>,
    pub empty: bool,
    /// The locus at `⌊K/2⌋` already equals the locus at `K`.
    pub stabilized: bool,
}

impl BaseLocusReport {
    pub fn contains_point<F: Scalar>(&self, x: &[F]) -> bool {
        self.components.iter().any(|c| c.iter().all(|&i| x[i].is_zero()))
    }
}

pub fn base_locus<F: Scalar>(
    series: &GradedSeries<F>,
    bound: TruncationBound,
) -> Result<BaseLocusReport, SeriesError> {
    let n = series.nvars();
    let ideals = (1..=bound.get())
        .map(|k| base_ideal(series, k, bound))
        .collect::<Result<Vec<_>, _>>()?;
    let locus_upto = |kk: usize| {
        let sum = ideals[..kk].iter().fold(MonomialIdeal::zero(n), |acc, i| acc.sum(i));
        sum.zero_locus()
    };
    let components = locus_upto(bound.get());
    let half = bound.get() / 2;
    let stabilized = half >= 1 && locus_upto(half) == components;
    Ok(BaseLocusReport {
        truncation: bound.get(),
        ideals,
        empty: components.is_empty(),
        components,
        stabilized,
    })
}

/// Birationality verdict with the lattice spanned by in-level exponent differences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BirationalityVerdict {
    pub birational: bool,
    /// Hermite basis of the difference lattice in `ℤ^d` (last coordinate dropped).
    pub basis: Vec<Vec<BigInt>>,
    pub index: LatticeIndex,
}

/// Monomial lattice criterion: the differences of exponents within each level `k ≤ K`
/// must generate `ℤ^d`.
pub fn is_birational_monomial<F: Scalar>(
    series: &GradedSeries<F>,
    bound: TruncationBound,
) -> Result<BirationalityVerdict, SeriesError> {
    let d = series.ambient_dim();
    let mut diffs: Vec<Vec<BigInt>> = Vec::new();
    for k in 1..=bound.get() {
        let level = series.level(k, bound)?;
        if !level.is_monomial() {
            return Err(SeriesError::NotMonomial { k });
        }
        let mut pivots = level.pivots();
        let Some(base) = pivots.next() else {
            continue;
        };
        for e in pivots {
            diffs.push(
                (0..d)
                    .map(|i| BigInt::from(e.entries()[i]) - BigInt::from(base.entries()[i]))
                    .collect(),
            );
        }
    }
    let (_, index) = lattice_rank_and_index(&diffs, d);
    let basis = lattice_basis(&diffs, d);
    Ok(BirationalityVerdict {
        birational: index == LatticeIndex::Finite(BigInt::from(1)),
        basis,
        index,
    })
}

/// Both sides of the characterization `vol(S•) = vol(D)` ⇔ (birational and `B(S•) = ∅`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullVolumeReport<F> {
    pub volume: F,
    pub expected_volume: F,
    pub stabilized: bool,
    pub full_volume: bool,
    pub birational: bool,
    pub base_locus_empty: bool,
    pub agree: bool,
}

pub fn full_volume_check<F: Scalar>(
    series: &GradedSeries<F>,
    bound: TruncationBound,
) -> Result<FullVolumeReport<F>, SeriesError> {
    let h = hilbert_data(series, bound)?;
    let m = F::from_i64(i64::from(series.divisor_degree()));
    let expected = (0..series.ambient_dim()).fold(F::from_i64(1), |acc, _| acc * m.clone());
    let full_volume = h.stabilized && h.volume == expected;
    let birational = is_birational_monomial(series, bound)?.birational;
    let locus = base_locus(series, bound)?;
    let structural = birational && locus.empty;
    Ok(FullVolumeReport {
        volume: h.volume,
        expected_volume: expected,
        stabilized: h.stabilized,
        full_volume,
        birational,
        base_locus_empty: locus.empty,
        agree: full_volume == structural,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyform::HomogeneousForm;
    use crate::Rational;
    use num_traits::One;

    type Series = GradedSeries<Rational>;

    fn e(v: &[u32]) -> Exponent {
        Exponent::new(v.to_vec())
    }

    fn kb(k: usize) -> TruncationBound {
        TruncationBound::new(k).unwrap()
    }

    fn plane_example() -> Series {
        Series::from_monomials(
            2,
            2,
            &[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2], vec![1, 1, 0], vec![1, 0, 1]],
        )
        .unwrap()
    }

    fn squares() -> Series {
        Series::from_monomials(2, 2, &[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]).unwrap()
    }

    #[test]
    fn minimal_generators() {
        let i = MonomialIdeal::new(3, [e(&[2, 0, 0]), e(&[1, 1, 0]), e(&[3, 0, 0])]);
        assert_eq!(i.generators(), &[e(&[1, 1, 0]), e(&[2, 0, 0])]);
        let j = MonomialIdeal::new(3, [e(&[1, 0, 0]), e(&[1, 1, 0])]);
        assert_eq!(j.generators(), &[e(&[1, 0, 0])]);
    }

    #[test]
    fn base_ideal_and_saturation_of_the_plane_example() {
        let i = base_ideal(&plane_example(), 1, kb(1)).unwrap();
        assert_eq!(i.generators().len(), 5);
        let sat = saturate(&i);
        assert!(sat.is_unit());
        assert!(sat.contains(&e(&[0, 1, 1])));
    }

    #[test]
    fn saturated_ideals_stay_put() {
        let i = MonomialIdeal::new(3, [e(&[1, 1, 0])]);
        assert_eq!(saturate(&i), i);
        let u = MonomialIdeal::unit(3);
        assert_eq!(saturate(&u), u);
        let z = MonomialIdeal::zero(3);
        assert_eq!(saturate(&z), z);
    }

    #[test]
    fn sheafified_plane_example_is_complete() {
        let s = sheafify(&plane_example(), kb(3)).unwrap();
        let level = s.level(1, kb(3)).unwrap();
        assert_eq!(level.dim(), 6);
        assert!(level.pivots().any(|p| *p == e(&[0, 1, 1])));
        assert_eq!(s.dims(kb(3)).unwrap(), Series::complete(2, 2).dims(kb(3)).unwrap());
    }

    #[test]
    fn non_monomial_levels_are_refused() {
        let f = &HomogeneousForm::variable(3, 0) + &HomogeneousForm::variable(3, 1);
        let s = Series::from_generators(2, 1, [(1, vec![f])]).unwrap();
        assert_eq!(base_ideal(&s, 1, kb(1)).unwrap_err(), SeriesError::NotMonomial { k: 1 });
        assert!(sheafify(&s, kb(2)).is_err());
    }

    #[test]
    fn birationality() {
        assert!(is_birational_monomial(&plane_example(), kb(2)).unwrap().birational);
        let sq = is_birational_monomial(&squares(), kb(2)).unwrap();
        assert!(!sq.birational);
        assert_eq!(sq.index, LatticeIndex::Finite(BigInt::from(4)));
        assert!(is_birational_monomial(&Series::complete(2, 1), kb(1)).unwrap().birational);
    }

    #[test]
    fn full_volume_characterization() {
        let r = full_volume_check(&plane_example(), kb(6)).unwrap();
        assert!(r.full_volume && r.birational && r.base_locus_empty && r.agree);
        let r = full_volume_check(&squares(), kb(6)).unwrap();
        assert_eq!(r.volume, Rational::one());
        assert!(!r.full_volume && !r.birational && r.agree);
        let r = full_volume_check(&Series::complete(2, 3), kb(6)).unwrap();
        assert!(r.full_volume && r.agree);
    }

    #[test]
    fn base_loci_of_coordinate_examples() {
        let line = Series::from_monomials(2, 2, &[vec![2, 0, 0], vec![1, 1, 0], vec![1, 0, 1]]).unwrap();
        let r = base_locus(&line, kb(4)).unwrap();
        assert_eq!(r.components, vec![BTreeSet::from([0])]);
        assert!(r.stabilized);
        let q = Rational::from_i64;
        assert!(r.contains_point(&[q(0), q(1), q(1)]));
        assert!(!r.contains_point(&[q(1), q(0), q(0)]));
        let r = base_locus(&plane_example(), kb(4)).unwrap();
        assert!(r.empty);
    }

    #[test]
    fn zero_locus_of_a_point() {
        let i = MonomialIdeal::new(3, [e(&[1, 0, 0]), e(&[0, 1, 0])]);
        assert_eq!(i.zero_locus(), vec![BTreeSet::from([0, 1])]);
        let q = Rational::from_i64;
        assert!(i.vanishes_at(&[q(0), q(0), q(1)]));
        assert!(!i.vanishes_at(&[q(1), q(0), q(1)]));
    }
}
