//! Newton–Okounkov bodies as exact rational polytopes.

mod polytope;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use polytope::{Halfspace, PolytopeError, RationalPolytope};

use crate::exactnum::{Matrix, Solution};
use crate::flagval::{semigroup, Flag, ValueSemigroup};
use crate::glseries::{GradedSeries, SeriesError, TruncationBound};
use crate::polyform::HomogeneousForm;
use crate::scalar::{numer_denom, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BodyError {
    #[error("every level up to {0} is zero")]
    EmptySeries(usize),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("slice height {0} must be a non-negative rational with small terms")]
    NegativeSlice(String),
}

/// Why a truncated hull is known to be the whole body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    /// Monomial generators under a coordinate flag: `Γ` is generated by the generator exponents.
    MonomialGenerators,
    /// Every `Γ_k` with `k ≤ K` is a sum of points of degree `≤ k₀`, with `2·k₀ ≤ K`.
    TruncatedGeneration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessCertificate {
    pub kind: CertificateKind,
    pub generation_degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BodyReport<F> {
    pub polytope: RationalPolytope<F>,
    pub truncation: usize,
    /// The hull of valuation points up to `K` is always contained in the body.
    pub inner: bool,
    pub certificate: Option<ExactnessCertificate>,
    pub semigroup: ValueSemigroup,
}

impl<F: Scalar> BodyReport<F> {
    pub fn is_exact(&self) -> bool {
        self.certificate.is_some()
    }
}

/// Normalized valuation points `ν/k` for `1 ≤ k ≤ K`.
pub fn normalized_points<F: Scalar>(gamma: &ValueSemigroup) -> Vec<Vec<F>> {
    let mut out: BTreeSet<Vec<F>> = BTreeSet::new();
    for (k, level) in gamma.levels().iter().enumerate().skip(1) {
        let kk = F::from_usize(k);
        for v in level {
            out.insert(v.iter().map(|&e| F::from_i64(i64::from(e)) / kk.clone()).collect());
        }
    }
    out.into_iter().collect()
}

/// Hull of `{ν(s)/k : s ∈ S_k \ 0, k ≤ K}` with an exactness certificate when one applies.
pub fn okounkov_body<F: Scalar>(
    series: &GradedSeries<F>,
    flag: &Flag<F>,
    bound: TruncationBound,
) -> Result<BodyReport<F>, BodyError> {
    let gamma = semigroup(series, flag, bound)?;
    if gamma.is_empty() {
        return Err(BodyError::EmptySeries(bound.get()));
    }
    let polytope = RationalPolytope::hull(series.ambient_dim(), &normalized_points(&gamma))?;
    let certificate = certify(series, flag, &gamma, bound);
    Ok(BodyReport { polytope, truncation: bound.get(), inner: true, certificate, semigroup: gamma })
}

fn is_permutation<F: Scalar>(m: &Matrix<F>) -> bool {
    let n = m.rows();
    (0..n).all(|i| {
        let row_ones = (0..n).filter(|&j| m[(i, j)].is_one()).count();
        let col_ones = (0..n).filter(|&j| m[(j, i)].is_one()).count();
        let zeros = (0..n).filter(|&j| m[(i, j)].is_zero()).count();
        row_ones == 1 && col_ones == 1 && zeros == n - 1
    })
}

fn certify<F: Scalar>(
    series: &GradedSeries<F>,
    flag: &Flag<F>,
    gamma: &ValueSemigroup,
    bound: TruncationBound,
) -> Option<ExactnessCertificate> {
    if series.has_monomial_generators() && is_permutation(flag.matrix()) {
        let k0 = series.generation_degree().unwrap_or(0);
        if k0 <= bound.get() {
            return Some(ExactnessCertificate {
                kind: CertificateKind::MonomialGenerators,
                generation_degree: k0,
            });
        }
    }
    let kk = bound.get();
    (1..=kk / 2).find(|&k0| generated_in_degree(gamma, k0)).map(|k0| ExactnessCertificate {
        kind: CertificateKind::TruncatedGeneration,
        generation_degree: k0,
    })
}

/// Whether every level of `gamma` is a sum of points from levels `1..=k0`.
fn generated_in_degree(gamma: &ValueSemigroup, k0: usize) -> bool {
    let kk = gamma.truncation();
    let d = gamma.ambient_dim();
    let mut sums: Vec<BTreeSet<Vec<u32>>> = vec![BTreeSet::from([vec![0; d]])];
    for k in 1..=kk {
        let mut level: BTreeSet<Vec<u32>> = BTreeSet::new();
        for j in 1..=k0.min(k) {
            for a in gamma.level(j) {
                for b in &sums[k - j] {
                    level.insert(a.iter().zip(b).map(|(x, y)| x + y).collect());
                }
            }
        }
        if level != *gamma.level(k) {
            return false;
        }
        sums.push(level);
    }
    true
}

/// A section realizing a valuation point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<F> {
    pub degree: usize,
    pub valuation: Vec<u32>,
    /// Position of the valuation among the sorted pivots of the level.
    pub section_index: usize,
    pub section: HomogeneousForm<F>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessSearch<F> {
    Found(Witness<F>),
    NotFound { bound: usize },
}

/// `k·P` as a non-negative integer vector, if it is one.
fn scaled_lattice_point<F: Scalar>(point: &[F], k: usize) -> Option<Vec<u32>> {
    let kk = F::from_usize(k);
    point
        .iter()
        .map(|c| {
            let v = c.clone() * kk.clone();
            if !v.is_integral() || v.is_negative() {
                return None;
            }
            let (n, _) = numer_denom(&v);
            u32::try_from(n).ok()
        })
        .collect()
}

/// Smallest `k ≤ K` with `k·P ∈ Γ_k`.
pub fn valuative_witness<F: Scalar>(
    series: &GradedSeries<F>,
    flag: &Flag<F>,
    point: &[F],
    bound: TruncationBound,
) -> Result<WitnessSearch<F>, BodyError> {
    assert_eq!(point.len(), series.ambient_dim(), "point dimension mismatch");
    for k in 1..=bound.get() {
        let Some(target) = scaled_lattice_point(point, k) else {
            continue;
        };
        let level = series.level(k, bound)?;
        let transformed = flag.transform_span(&level).map_err(SeriesError::from)?;
        let found = transformed
            .pivots()
            .enumerate()
            .find(|(_, e)| e.entries()[..target.len()] == target[..]);
        if let Some((index, pivot)) = found {
            let form = transformed.basis_form(pivot).expect("pivot has a basis form");
            return Ok(WitnessSearch::Found(Witness {
                degree: k,
                valuation: target,
                section_index: index,
                section: flag.untransform(form),
            }));
        }
    }
    Ok(WitnessSearch::NotFound { bound: bound.get() })
}

/// A section built from the segment construction, in the flag's coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructedWitness<F> {
    pub degree: usize,
    pub valuation: Vec<u32>,
    /// The section in original coordinates.
    pub section: HomogeneousForm<F>,
}

/// Barycentric coordinates of `point` in the simplex on `corners`, if they are all positive.
fn positive_barycentric<F: Scalar>(corners: &[Vec<F>], point: &[F]) -> Option<Vec<F>> {
    let r = corners.len();
    let d = point.len();
    let mut rows: Vec<Vec<F>> = (0..d).map(|i| corners.iter().map(|c| c[i].clone()).collect()).collect();
    rows.push(vec![F::one(); r]);
    let mut rhs = point.to_vec();
    rhs.push(F::one());
    let m = Matrix::from_rows(rows);
    if m.rank() != r {
        return None;
    }
    match m.solve(&rhs) {
        Solution::Unique(l) if l.iter().all(|x| x.is_positive()) => Some(l),
        _ => None,
    }
}

/// A valuative point `v/m` with a section `s ∈ S_m` (flag coordinates), `ν(s) = v`.
#[derive(Clone, Debug)]
struct Valuative<F> {
    point: Vec<F>,
    degree: usize,
    section: HomogeneousForm<F>,
}

/// Combines valuative corners with positive weights through repeated segment steps.
fn segment_chain<F: Scalar>(corners: &[Valuative<F>], weights: &[F]) -> Valuative<F> {
    if corners.len() == 1 {
        return corners[0].clone();
    }
    let lambda = weights[0].clone();
    let rest_total = F::one() - lambda.clone();
    let rest_weights: Vec<F> = weights[1..].iter().map(|w| w.clone() / rest_total.clone()).collect();
    let rest = segment_chain(&corners[1..], &rest_weights);
    let x = &corners[0];
    let (a, b) = numer_denom(&lambda);
    let a: u32 = a.try_into().expect("small weight");
    let b: u32 = b.try_into().expect("small weight");
    // x^{a·k_rest} · rest^{(b−a)·k_x} lies in degree b·k_x·k_rest.
    let section = x
        .section
        .pow(a * rest.degree as u32)
        .multiply(&rest.section.pow((b - a) * x.degree as u32));
    let point: Vec<F> = x
        .point
        .iter()
        .zip(&rest.point)
        .map(|(p, q)| lambda.clone() * p.clone() + rest_total.clone() * q.clone())
        .collect();
    Valuative { point, degree: b as usize * x.degree * rest.degree, section }
}

/// The witness degree produced by the constructive proof from certified generators.
///
/// Corners are the distinct normalized points of degree `≤ k₀`; among all
/// simplices (of any dimension) containing `P` with positive weights the smallest
/// resulting degree wins.
pub fn constructive_witness<F: Scalar>(
    series: &GradedSeries<F>,
    flag: &Flag<F>,
    report: &BodyReport<F>,
    point: &[F],
) -> Result<Option<ConstructedWitness<F>>, BodyError> {
    let Some(cert) = &report.certificate else {
        return Ok(None);
    };
    let k0 = cert.generation_degree.max(1).min(report.truncation);
    let bound = TruncationBound::new(report.truncation)?;
    let mut corners: BTreeMap<Vec<F>, Valuative<F>> = BTreeMap::new();
    for k in 1..=k0 {
        let level = series.level(k, bound)?;
        let transformed = flag.transform_span(&level).map_err(SeriesError::from)?;
        for pivot in transformed.pivots() {
            let v = &pivot.entries()[..series.ambient_dim()];
            let p: Vec<F> = v.iter().map(|&e| F::from_i64(i64::from(e)) / F::from_usize(k)).collect();
            corners.entry(p.clone()).or_insert_with(|| Valuative {
                point: p,
                degree: k,
                section: transformed.basis_form(pivot).expect("pivot").clone(),
            });
        }
    }
    let corners: Vec<Valuative<F>> = corners.into_values().collect();
    let r = report.polytope.dim().unwrap_or(0);
    let mut best: Option<Valuative<F>> = None;
    // A point on a lower-dimensional face of the corner hull needs a smaller simplex.
    let subsets = (1..=r + 1).flat_map(|size| index_subsets(corners.len(), size));
    for subset in subsets {
        let chosen: Vec<Valuative<F>> = subset.iter().map(|&i| corners[i].clone()).collect();
        let pts: Vec<Vec<F>> = chosen.iter().map(|c| c.point.clone()).collect();
        let Some(weights) = positive_barycentric(&pts, point) else {
            continue;
        };
        let degree_bound = predicted_degree(&chosen, &weights);
        if best.as_ref().is_some_and(|b| b.degree <= degree_bound) {
            continue;
        }
        best = Some(segment_chain(&chosen, &weights));
    }
    let Some(found) = best else {
        return Ok(None);
    };
    let (pivot, _) = found.section.leading().expect("product of nonzero sections");
    let valuation = pivot.entries()[..series.ambient_dim()].to_vec();
    Ok(Some(ConstructedWitness {
        degree: found.degree,
        valuation,
        section: flag.untransform(&found.section),
    }))
}

fn predicted_degree<F: Scalar>(corners: &[Valuative<F>], weights: &[F]) -> usize {
    if corners.len() == 1 {
        return corners[0].degree;
    }
    let lambda = weights[0].clone();
    let rest_total = F::one() - lambda.clone();
    let rest: Vec<F> = weights[1..].iter().map(|w| w.clone() / rest_total.clone()).collect();
    let (_, b) = numer_denom(&lambda);
    let b: usize = b.try_into().expect("small weight");
    b * corners[0].degree * predicted_degree(&corners[1..], &rest)
}

fn index_subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    if size > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..size).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..size).rev().find(|&i| cur[i] < n - size + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..size {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// A slice of the body next to the body of the restricted series that should equal it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceComparison<F> {
    pub t: F,
    /// `t = a/b` in lowest terms.
    pub numerator: u32,
    pub denominator: u32,
    /// `Δ ∩ {ν₁ = t}`, in the remaining `d − 1` coordinates.
    pub direct: RationalPolytope<F>,
    pub direct_exact: bool,
    /// `1/b · Δ(restrict(S^{(b)} − a·Y₁))` under the standard flag on `Y₁`.
    pub formula: RationalPolytope<F>,
    pub formula_exact: bool,
    pub equal: bool,
}

/// Compares both sides of the slice formula at `t ≥ 0`, each computed at truncation `K`.
pub fn slice_comparison<F: Scalar>(
    series: &GradedSeries<F>,
    flag: &Flag<F>,
    t: &F,
    bound: TruncationBound,
) -> Result<SliceComparison<F>, BodyError> {
    let d = series.ambient_dim();
    if d == 0 {
        return Err(SeriesError::RestrictPoint.into());
    }
    if t.is_negative() {
        return Err(BodyError::NegativeSlice(t.to_string()));
    }
    let (a, b) = numer_denom(t);
    let a: u32 = a.try_into().map_err(|_| BodyError::NegativeSlice(t.to_string()))?;
    let b: u32 = b.try_into().map_err(|_| BodyError::NegativeSlice(t.to_string()))?;
    let body = okounkov_body(series, flag, bound)?;
    let direct = body.polytope.slice(t);
    let restricted = series
        .veronese(b as usize)
        .subtract_divisor(a, flag)?
        .restrict_to_flag_divisor(flag)?;
    let (formula, formula_exact) = match okounkov_body(&restricted, &Flag::standard(d - 1), bound) {
        Ok(r) => {
            let exact = r.is_exact();
            (r.polytope.scale(&(F::one() / F::from_i64(i64::from(b))))?, exact)
        }
        Err(BodyError::EmptySeries(_)) => (RationalPolytope::empty(d - 1), false),
        Err(e) => return Err(e),
    };
    let equal = direct.equals(&formula)?;
    Ok(SliceComparison {
        t: t.clone(),
        numerator: a,
        denominator: b,
        direct,
        direct_exact: body.is_exact(),
        formula,
        formula_exact,
        equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flagval::valuation;
    use crate::polyform::Exponent;
    use num_traits::One;
    use crate::Rational;

    type Series = GradedSeries<Rational>;

    fn kb(k: usize) -> TruncationBound {
        TruncationBound::new(k).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn plane_example() -> Series {
        Series::from_monomials(
            2,
            2,
            &[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2], vec![1, 1, 0], vec![1, 0, 1]],
        )
        .unwrap()
    }

    #[test]
    fn plane_example_body_is_the_triangle() {
        let r = okounkov_body(&plane_example(), &Flag::standard(2), kb(4)).unwrap();
        let want: Vec<Vec<Rational>> =
            vec![vec![q(0, 1), q(0, 1)], vec![q(0, 1), q(2, 1)], vec![q(2, 1), q(0, 1)]];
        assert_eq!(r.polytope.vertices(), &want[..]);
        assert_eq!(
            r.certificate,
            Some(ExactnessCertificate { kind: CertificateKind::MonomialGenerators, generation_degree: 1 })
        );
        assert_eq!(r.polytope.volume(), Rational::from_i64(2));
    }

    #[test]
    fn slice_formula_on_the_complete_quadrics() {
        let s = Series::complete(2, 2);
        let flag = Flag::standard(2);
        for t in [q(0, 1), q(1, 2), q(1, 1), q(4, 3)] {
            let c = slice_comparison(&s, &flag, &t, kb(4)).unwrap();
            assert!(c.equal, "t = {t}");
            let (lo, hi) = c.direct.first_coordinate_range().unwrap();
            assert_eq!((lo, hi), (q(0, 1), q(2, 1) - t));
        }
        let c = slice_comparison(&s, &flag, &q(3, 1), kb(4)).unwrap();
        assert!(c.direct.is_empty() && c.formula.is_empty() && c.equal);
    }

    #[test]
    fn complete_series_on_the_line() {
        let r = okounkov_body(&Series::complete(1, 1), &Flag::standard(1), kb(3)).unwrap();
        assert_eq!(r.polytope.vertices(), &[vec![q(0, 1)], vec![q(1, 1)]][..]);
    }

    #[test]
    fn zero_series_has_no_body() {
        let err = okounkov_body(&Series::zero(2, 1), &Flag::standard(2), kb(3)).unwrap_err();
        assert_eq!(err, BodyError::EmptySeries(3));
    }

    #[test]
    fn truncated_certificate_for_derived_series() {
        let v = Series::complete(2, 1).veronese(2);
        let r = okounkov_body(&v, &Flag::standard(2), kb(4)).unwrap();
        assert_eq!(
            r.certificate,
            Some(ExactnessCertificate { kind: CertificateKind::TruncatedGeneration, generation_degree: 1 })
        );
    }

    #[test]
    fn witnesses_in_the_plane_example() {
        let s = plane_example();
        let flag = Flag::standard(2);
        let WitnessSearch::Found(w) = valuative_witness(&s, &flag, &[q(1, 1), q(1, 1)], kb(4)).unwrap() else {
            panic!("expected a witness");
        };
        assert_eq!(w.degree, 1);
        assert_eq!(w.section, HomogeneousForm::monomial(Exponent::new(vec![1, 1, 0]), Rational::one()));
        let WitnessSearch::Found(w) = valuative_witness(&s, &flag, &[q(1, 2), q(1, 2)], kb(4)).unwrap() else {
            panic!("expected a witness");
        };
        assert_eq!(w.degree, 2);
        assert_eq!(w.valuation, vec![1, 1]);
        let outside = [q(3, 1), q(0, 1)];
        assert_eq!(
            valuative_witness(&s, &flag, &outside, kb(4)).unwrap(),
            WitnessSearch::NotFound { bound: 4 }
        );
        let body = okounkov_body(&s, &flag, kb(4)).unwrap();
        assert!(!body.polytope.contains_point(&outside, false).unwrap());
    }

    #[test]
    fn segment_construction_on_the_squares_series() {
        let s = Series::from_monomials(2, 2, &[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]).unwrap();
        let flag = Flag::standard(2);
        let body = okounkov_body(&s, &flag, kb(8)).unwrap();
        let p = [q(1, 4), q(1, 4)];
        let built = constructive_witness(&s, &flag, &body, &p).unwrap().unwrap();
        assert_eq!(built.degree, 8);
        assert_eq!(built.valuation, vec![2, 2]);
        assert_eq!(valuation(&built.section, &flag).unwrap(), vec![2, 2]);
        let WitnessSearch::Found(w) = valuative_witness(&s, &flag, &p, kb(8)).unwrap() else {
            panic!("expected a witness");
        };
        assert!(w.degree <= built.degree);
    }

    #[test]
    fn subsets_enumeration() {
        assert_eq!(index_subsets(4, 2).len(), 6);
        assert_eq!(index_subsets(2, 3).len(), 0);
        assert_eq!(index_subsets(3, 3), vec![vec![0, 1, 2]]);
    }
}
