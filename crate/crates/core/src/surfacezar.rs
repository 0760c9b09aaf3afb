//! Zariski decompositions on a surface given by its intersection form, and
//! the piecewise-linear Newton–Okounkov body of `D` with respect to a curve `C`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::convbody::RationalPolytope;
use crate::exactnum::lp::{in_cone, maximize, LpOutcome};
use crate::exactnum::{IntMatrix, Matrix, Solution};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("intersection form must be square and symmetric")]
    NotSymmetric,
    #[error("class has {found} entries, lattice rank is {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("negative curve {index} has self-intersection {value}, expected < 0")]
    CurveNotNegative { index: usize, value: BigInt },
    #[error("divisor is not pseudo-effective")]
    NotPseudoEffective,
    #[error("negative-curve list insufficient: positive part is not nef against effective generator {index}")]
    CurvesInsufficient { index: usize },
    #[error("negative part has a negative coefficient on curve {index}")]
    NegativeCoefficient { index: usize },
    #[error("Gram matrix of the negative support is not negative definite")]
    NotNegativeDefinite,
    #[error("divisor is not big")]
    NotBig,
    #[error("D - tC stays effective for all t: C is not an effective direction")]
    UnboundedThreshold,
    #[error("the curve C lies in the negative part for t in [{start}, {end}]")]
    CurveInNegativeSupport { start: String, end: String },
    #[error("negative support shrank at t = {at}")]
    SupportNotMonotone { at: String },
    #[error("point multiplicities list {found} entries for {expected} negative curves")]
    MultiplicityCount { expected: usize, found: usize },
}

/// Numerical data of a surface: intersection form, negative curves and effective cone generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceLattice {
    gram: IntMatrix,
    negative_curves: Vec<Vec<BigInt>>,
    effective_generators: Vec<Vec<BigInt>>,
}

impl SurfaceLattice {
    pub fn new(
        gram: IntMatrix,
        negative_curves: Vec<Vec<BigInt>>,
        effective_generators: Vec<Vec<BigInt>>,
    ) -> Result<Self, SurfaceError> {
        if gram.rows() != gram.cols() || !gram.is_symmetric() {
            return Err(SurfaceError::NotSymmetric);
        }
        let rank = gram.rows();
        for class in negative_curves.iter().chain(&effective_generators) {
            if class.len() != rank {
                return Err(SurfaceError::DimensionMismatch { expected: rank, found: class.len() });
            }
        }
        let lattice = Self { gram, negative_curves, effective_generators };
        for (index, c) in lattice.negative_curves.iter().enumerate() {
            let value = lattice.int_product(c, c);
            if value >= BigInt::from(0) {
                return Err(SurfaceError::CurveNotNegative { index, value });
            }
        }
        Ok(lattice)
    }

    pub fn from_i64(gram: &[&[i64]], negative_curves: &[&[i64]], effective_generators: &[&[i64]]) -> Result<Self, SurfaceError> {
        let ints = |rows: &[&[i64]]| -> Vec<Vec<BigInt>> {
            rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
        };
        Self::new(IntMatrix::from_i64_rows(gram), ints(negative_curves), ints(effective_generators))
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn negative_curves(&self) -> &[Vec<BigInt>] {
        &self.negative_curves
    }

    pub fn effective_generators(&self) -> &[Vec<BigInt>] {
        &self.effective_generators
    }

    fn int_product(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        let n = self.rank();
        let mut total = BigInt::from(0);
        for i in 0..n {
            for j in 0..n {
                total += &a[i] * &self.gram.row(i)[j] * &b[j];
            }
        }
        total
    }

    /// `a · b` for rational classes.
    pub fn intersect<F: Scalar>(&self, a: &[F], b: &[F]) -> F {
        let n = self.rank();
        let mut total = F::zero();
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                let g = &self.gram.row(i)[j];
                if g.sign() == num_bigint::Sign::NoSign {
                    continue;
                }
                total = total + a[i].clone() * F::from_bigint(g).expect("integer fits") * b[j].clone();
            }
        }
        total
    }

    fn curve<F: Scalar>(&self, i: usize) -> Vec<F> {
        to_scalars(&self.negative_curves[i])
    }

    fn generators<F: Scalar>(&self) -> Vec<Vec<F>> {
        self.effective_generators.iter().map(|g| to_scalars(g)).collect()
    }

    fn check_class<F: Scalar>(&self, class: &[F]) -> Result<(), SurfaceError> {
        if class.len() != self.rank() {
            return Err(SurfaceError::DimensionMismatch { expected: self.rank(), found: class.len() });
        }
        Ok(())
    }

    pub fn is_pseudo_effective<F: Scalar>(&self, class: &[F]) -> bool {
        in_cone(&self.generators::<F>(), class)
    }
}

fn to_scalars<F: Scalar>(v: &[BigInt]) -> Vec<F> {
    v.iter().map(|x| F::from_bigint(x).expect("integer fits")).collect()
}

fn axpy<F: Scalar>(y: &[F], a: &F, x: &[F]) -> Vec<F> {
    y.iter().zip(x).map(|(yi, xi)| yi.clone() + a.clone() * xi.clone()).collect()
}

/// `D = P + N` with `N = Σ c_Γ · Γ` over the listed negative curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiDecomposition<F> {
    pub positive: Vec<F>,
    /// Curve index to positive coefficient.
    pub negative: BTreeMap<usize, F>,
}

impl<F: Scalar> ZariskiDecomposition<F> {
    pub fn support(&self) -> BTreeSet<usize> {
        self.negative.keys().copied().collect()
    }

    pub fn negative_class(&self, lattice: &SurfaceLattice) -> Vec<F> {
        let mut n = vec![F::zero(); lattice.rank()];
        for (&i, c) in &self.negative {
            n = axpy(&n, c, &lattice.curve(i));
        }
        n
    }
}

/// Solves `(D − Σ_{j∈S} c_j Γ_j) · Γ_i = 0` for `i ∈ S`.
fn solve_support<F: Scalar>(lattice: &SurfaceLattice, d: &[F], support: &[usize]) -> Option<Vec<F>> {
    if support.is_empty() {
        return Some(Vec::new());
    }
    let curves: Vec<Vec<F>> = support.iter().map(|&i| lattice.curve(i)).collect();
    let gram: Vec<Vec<F>> = curves
        .iter()
        .map(|a| curves.iter().map(|b| lattice.intersect(a, b)).collect())
        .collect();
    let rhs: Vec<F> = curves.iter().map(|c| lattice.intersect(d, c)).collect();
    match Matrix::from_rows(gram).solve(&rhs) {
        Solution::Unique(c) => Some(c),
        _ => None,
    }
}

/// Sylvester's criterion on `−G`.
fn is_negative_definite<F: Scalar>(lattice: &SurfaceLattice, support: &[usize]) -> bool {
    let curves: Vec<Vec<F>> = support.iter().map(|&i| lattice.curve(i)).collect();
    (1..=curves.len()).all(|k| {
        let minor: Vec<Vec<F>> = curves[..k]
            .iter()
            .map(|a| curves[..k].iter().map(|b| -lattice.intersect(a, b)).collect())
            .collect();
        Matrix::from_rows(minor).determinant().is_positive()
    })
}

pub fn zariski<F: Scalar>(lattice: &SurfaceLattice, d: &[F]) -> Result<ZariskiDecomposition<F>, SurfaceError> {
    lattice.check_class(d)?;
    if !lattice.is_pseudo_effective(d) {
        return Err(SurfaceError::NotPseudoEffective);
    }
    let count = lattice.negative_curves.len();
    let mut support: BTreeSet<usize> = (0..count)
        .filter(|&i| lattice.intersect(d, &lattice.curve::<F>(i)).is_negative())
        .collect();
    loop {
        let supp: Vec<usize> = support.iter().copied().collect();
        let coeffs = solve_support(lattice, d, &supp).ok_or(SurfaceError::NotNegativeDefinite)?;
        let mut p = d.to_vec();
        for (&i, c) in supp.iter().zip(&coeffs) {
            p = axpy(&p, &-c.clone(), &lattice.curve(i));
        }
        let grow: Vec<usize> = (0..count)
            .filter(|i| !support.contains(i))
            .filter(|&i| lattice.intersect(&p, &lattice.curve::<F>(i)).is_negative())
            .collect();
        if !grow.is_empty() {
            support.extend(grow);
            continue;
        }
        if let Some((&i, _)) = supp.iter().zip(&coeffs).find(|(_, c)| c.is_negative()) {
            return Err(SurfaceError::NegativeCoefficient { index: i });
        }
        if !is_negative_definite::<F>(lattice, &supp) {
            return Err(SurfaceError::NotNegativeDefinite);
        }
        for (index, g) in lattice.generators::<F>().iter().enumerate() {
            if lattice.intersect(&p, g).is_negative() {
                return Err(SurfaceError::CurvesInsufficient { index });
            }
        }
        let negative = supp
            .into_iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        return Ok(ZariskiDecomposition { positive: p, negative });
    }
}

/// Checks the defining properties of a Zariski decomposition of `d`.
pub fn check_zariski<F: Scalar>(lattice: &SurfaceLattice, d: &[F], z: &ZariskiDecomposition<F>) -> bool {
    let sum: Vec<F> = z
        .positive
        .iter()
        .zip(z.negative_class(lattice))
        .map(|(a, b)| a.clone() + b)
        .collect();
    let supp: Vec<usize> = z.support().into_iter().collect();
    let orthogonal = supp.iter().all(|&i| lattice.intersect(&z.positive, &lattice.curve::<F>(i)).is_zero());
    let nef = (0..lattice.negative_curves.len())
        .all(|i| !lattice.intersect(&z.positive, &lattice.curve::<F>(i)).is_negative());
    let positive_coeffs = z.negative.values().all(|c| c.is_positive());
    sum == d && orthogonal && nef && positive_coeffs && is_negative_definite::<F>(lattice, &supp)
}

/// `μ = max { t : D − t·C is pseudo-effective }`.
pub fn mu<F: Scalar>(lattice: &SurfaceLattice, d: &[F], c: &[F]) -> Result<F, SurfaceError> {
    lattice.check_class(d)?;
    lattice.check_class(c)?;
    let gens = lattice.generators::<F>();
    let n = lattice.rank();
    // Variables (t, λ_g); constraints t·C + Σ λ_g·g = D.
    let rows: Vec<Vec<F>> = (0..n)
        .map(|i| std::iter::once(c[i].clone()).chain(gens.iter().map(|g| g[i].clone())).collect())
        .collect();
    let mut objective = vec![F::zero(); gens.len() + 1];
    objective[0] = F::one();
    match maximize(&objective, &Matrix::from_rows(rows), d) {
        LpOutcome::Optimal { value, .. } if value.is_positive() => Ok(value),
        LpOutcome::Optimal { .. } | LpOutcome::Infeasible => Err(SurfaceError::NotBig),
        LpOutcome::Unbounded => Err(SurfaceError::UnboundedThreshold),
    }
}

/// `slope · t + intercept`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Linear<F> {
    pub slope: F,
    pub intercept: F,
}

impl<F: Scalar> Linear<F> {
    pub fn eval(&self, t: &F) -> F {
        self.slope.clone() * t.clone() + self.intercept.clone()
    }
}

impl<F: Scalar> fmt::Display for Linear<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*t + {}", self.slope, self.intercept)
    }
}

/// `Δ = {(t, y) : ν ≤ t ≤ μ, α(t) ≤ y ≤ β(t)}` with `α`, `β` piecewise linear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceBody<F> {
    pub nu: F,
    pub mu: F,
    /// `ν = b₀ < b₁ < … < b_s = μ`.
    pub breakpoints: Vec<F>,
    /// One piece per interval `[b_i, b_{i+1}]`.
    pub alpha: Vec<Linear<F>>,
    pub beta: Vec<Linear<F>>,
    /// Negative support on each interval.
    pub supports: Vec<Vec<usize>>,
    pub point_multiplicities: Vec<u32>,
}

impl<F: Scalar> SurfaceBody<F> {
    fn piece(&self, t: &F) -> usize {
        let last = self.alpha.len().saturating_sub(1);
        (0..self.alpha.len()).find(|&i| *t <= self.breakpoints[i + 1]).unwrap_or(last)
    }

    pub fn alpha_at(&self, t: &F) -> F {
        self.alpha[self.piece(t)].eval(t)
    }

    pub fn beta_at(&self, t: &F) -> F {
        self.beta[self.piece(t)].eval(t)
    }

    pub fn area(&self) -> F {
        let two = F::from_i64(2);
        (0..self.alpha.len()).fold(F::zero(), |acc, i| {
            let (a, b) = (&self.breakpoints[i], &self.breakpoints[i + 1]);
            let width = |t: &F| self.beta[i].eval(t) - self.alpha[i].eval(t);
            acc + (width(a) + width(b)) * (b.clone() - a.clone()) / two.clone()
        })
    }

    /// `α` convex, `β` concave and `α ≤ β` at every breakpoint.
    pub fn is_convex(&self) -> bool {
        let alpha_ok = self.alpha.windows(2).all(|w| w[0].slope <= w[1].slope);
        let beta_ok = self.beta.windows(2).all(|w| w[0].slope >= w[1].slope);
        let ordered = self.breakpoints.iter().all(|t| self.alpha_at(t) <= self.beta_at(t));
        alpha_ok && beta_ok && ordered
    }

    pub fn to_polytope(&self) -> RationalPolytope<F> {
        let mut pts = Vec::new();
        for t in &self.breakpoints {
            pts.push(vec![t.clone(), self.alpha_at(t)]);
            pts.push(vec![t.clone(), self.beta_at(t)]);
        }
        RationalPolytope::hull(2, &pts).expect("planar points")
    }
}

/// Affine-in-`t` data for a fixed negative support.
struct SupportPiece<F> {
    support: Vec<usize>,
    /// `c_j(t) = c0_j + t·c1_j`.
    c0: Vec<F>,
    c1: Vec<F>,
    /// `P_t = p0 + t·p1`.
    p0: Vec<F>,
    p1: Vec<F>,
}

impl<F: Scalar> SupportPiece<F> {
    fn new(lattice: &SurfaceLattice, d: &[F], c: &[F], support: Vec<usize>) -> Option<Self> {
        let c0 = solve_support(lattice, d, &support)?;
        let neg_c: Vec<F> = c.iter().map(|x| -x.clone()).collect();
        let c1 = solve_support(lattice, &neg_c, &support)?;
        let mut p0 = d.to_vec();
        let mut p1 = neg_c;
        for (k, &j) in support.iter().enumerate() {
            let curve = lattice.curve::<F>(j);
            p0 = axpy(&p0, &-c0[k].clone(), &curve);
            p1 = axpy(&p1, &-c1[k].clone(), &curve);
        }
        Some(Self { support, c0, c1, p0, p1 })
    }

    /// Closed interval of `t` on which the support yields a valid decomposition.
    fn validity(&self, lattice: &SurfaceLattice) -> (Option<F>, Option<F>) {
        let mut lo: Option<F> = None;
        let mut hi: Option<F> = None;
        let mut constrain = |a: F, b: F| {
            // a + b·t ≥ 0
            if b.is_zero() {
                if a.is_negative() {
                    lo = Some(F::one());
                    hi = Some(F::zero());
                }
            } else {
                let root = -a / b.clone();
                if b.is_positive() {
                    if lo.as_ref().is_none_or(|l| root > *l) {
                        lo = Some(root);
                    }
                } else if hi.as_ref().is_none_or(|h| root < *h) {
                    hi = Some(root);
                }
            }
        };
        for k in 0..self.support.len() {
            constrain(self.c0[k].clone(), self.c1[k].clone());
        }
        for i in 0..lattice.negative_curves.len() {
            if self.support.contains(&i) {
                continue;
            }
            let curve = lattice.curve::<F>(i);
            constrain(lattice.intersect(&self.p0, &curve), lattice.intersect(&self.p1, &curve));
        }
        (lo, hi)
    }
}

pub fn surface_body<F: Scalar>(
    lattice: &SurfaceLattice,
    d: &[F],
    c: &[F],
    point_multiplicities: &[u32],
) -> Result<SurfaceBody<F>, SurfaceError> {
    let count = lattice.negative_curves.len();
    let mults: Vec<u32> = if point_multiplicities.is_empty() {
        vec![0; count]
    } else if point_multiplicities.len() == count {
        point_multiplicities.to_vec()
    } else {
        return Err(SurfaceError::MultiplicityCount { expected: count, found: point_multiplicities.len() });
    };
    let mu_value = mu(lattice, d, c)?;
    let two = F::from_i64(2);
    let mut t = F::zero();
    let mut breakpoints = vec![t.clone()];
    let mut alpha: Vec<Linear<F>> = Vec::new();
    let mut beta: Vec<Linear<F>> = Vec::new();
    let mut supports: Vec<Vec<usize>> = Vec::new();
    while t < mu_value {
        let mut probe = (t.clone() + mu_value.clone()) / two.clone();
        let (piece, hi) = loop {
            let z = zariski(lattice, &axpy(d, &-probe.clone(), c))?;
            let support: Vec<usize> = z.support().into_iter().collect();
            let piece = SupportPiece::new(lattice, d, c, support).ok_or(SurfaceError::NotNegativeDefinite)?;
            let (lo, hi) = piece.validity(lattice);
            if lo.as_ref().is_none_or(|l| *l <= t) && hi.as_ref().is_none_or(|h| *h > t) {
                break (piece, hi);
            }
            probe = (t.clone() + probe) / two.clone();
        };
        let end = match hi {
            Some(h) if h < mu_value => h,
            _ => mu_value.clone(),
        };
        if let Some(prev) = supports.last() {
            if !prev.iter().all(|i| piece.support.contains(i)) {
                return Err(SurfaceError::SupportNotMonotone { at: t.to_string() });
            }
        }
        if piece.support.iter().any(|&i| lattice.curve::<F>(i) == c) {
            return Err(SurfaceError::CurveInNegativeSupport { start: t.to_string(), end: end.to_string() });
        }
        let mut a = Linear { slope: F::zero(), intercept: F::zero() };
        for (k, &j) in piece.support.iter().enumerate() {
            let m = F::from_i64(i64::from(mults[j]));
            a.slope = a.slope + piece.c1[k].clone() * m.clone();
            a.intercept = a.intercept + piece.c0[k].clone() * m;
        }
        let b = Linear {
            slope: a.slope.clone() + lattice.intersect(c, &piece.p1),
            intercept: a.intercept.clone() + lattice.intersect(c, &piece.p0),
        };
        let merge = alpha.last() == Some(&a) && beta.last() == Some(&b);
        if merge {
            *breakpoints.last_mut().expect("nonempty") = end.clone();
            let last = supports.last_mut().expect("nonempty");
            *last = piece.support.clone();
        } else {
            alpha.push(a);
            beta.push(b);
            supports.push(piece.support.clone());
            breakpoints.push(end.clone());
        }
        t = end;
    }
    Ok(SurfaceBody {
        nu: F::zero(),
        mu: mu_value,
        breakpoints,
        alpha,
        beta,
        supports,
        point_multiplicities: mults,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StratumKind {
    Interior,
    LeftEdge,
    LowerGraph,
    UpperGraph,
    RightEdge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuativity {
    Valuative,
    /// Non-valuative when `x` is very general on a curve `C` of positive genus; unknown otherwise.
    NonValuativeForPositiveGenus,
    Unknown,
}

/// A piece of the body with its valuativity label; `label` matches the figure legend.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryStratum<F> {
    pub kind: StratumKind,
    pub valuativity: Valuativity,
    pub label: &'static str,
    /// Endpoints of the stratum (the interior stratum lists no points).
    pub endpoints: Vec<(F, F)>,
}

pub fn classify_boundary<F: Scalar>(body: &SurfaceBody<F>) -> Vec<BoundaryStratum<F>> {
    let nu = &body.nu;
    let mu = &body.mu;
    let left = vec![(nu.clone(), body.alpha_at(nu)), (nu.clone(), body.beta_at(nu))];
    if nu == mu {
        return vec![BoundaryStratum {
            kind: StratumKind::LeftEdge,
            valuativity: Valuativity::Valuative,
            label: "(b)",
            endpoints: left,
        }];
    }
    let lower: Vec<(F, F)> = body.breakpoints.iter().map(|t| (t.clone(), body.alpha_at(t))).collect();
    let upper: Vec<(F, F)> = body.breakpoints.iter().map(|t| (t.clone(), body.beta_at(t))).collect();
    vec![
        BoundaryStratum {
            kind: StratumKind::Interior,
            valuativity: Valuativity::Valuative,
            label: "(a)",
            endpoints: Vec::new(),
        },
        BoundaryStratum { kind: StratumKind::LeftEdge, valuativity: Valuativity::Valuative, label: "(b)", endpoints: left },
        BoundaryStratum { kind: StratumKind::LowerGraph, valuativity: Valuativity::Valuative, label: "(c)", endpoints: lower },
        BoundaryStratum {
            kind: StratumKind::UpperGraph,
            valuativity: Valuativity::NonValuativeForPositiveGenus,
            label: "upper",
            endpoints: upper,
        },
        BoundaryStratum {
            kind: StratumKind::RightEdge,
            valuativity: Valuativity::Unknown,
            label: "?",
            endpoints: vec![(mu.clone(), body.alpha_at(mu)), (mu.clone(), body.beta_at(mu))],
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn plane() -> SurfaceLattice {
        SurfaceLattice::from_i64(&[&[1]], &[], &[&[1]]).unwrap()
    }

    fn blowup() -> SurfaceLattice {
        SurfaceLattice::from_i64(&[&[1, 0], &[0, -1]], &[&[0, 1]], &[&[0, 1], &[1, -1]]).unwrap()
    }

    #[test]
    fn nef_divisors_have_no_negative_part() {
        let z = zariski(&plane(), &[q(2)]).unwrap();
        assert_eq!(z.positive, vec![q(2)]);
        assert!(z.negative.is_empty());
    }

    #[test]
    fn exceptional_curve_is_split_off() {
        let d = [q(2), q(3)];
        let z = zariski(&blowup(), &d).unwrap();
        assert_eq!(z.negative, BTreeMap::from([(0, q(3))]));
        assert_eq!(z.positive, vec![q(2), q(0)]);
        assert!(check_zariski(&blowup(), &d, &z));
        let nef = [q(2), q(-1)];
        assert!(zariski(&blowup(), &nef).unwrap().negative.is_empty());
    }

    #[test]
    fn non_pseudo_effective_classes_are_rejected() {
        assert_eq!(zariski(&blowup(), &[q(2), q(-3)]), Err(SurfaceError::NotPseudoEffective));
    }

    #[test]
    fn thresholds() {
        assert_eq!(mu(&plane(), &[q(2)], &[q(1)]).unwrap(), q(2));
        assert_eq!(mu(&blowup(), &[q(3), q(-1)], &[q(1), q(-1)]).unwrap(), q(3));
        assert_eq!(mu(&blowup(), &[q(3), q(-1)], &[q(-1), q(0)]), Err(SurfaceError::UnboundedThreshold));
    }

    #[test]
    fn plane_body_is_the_triangle() {
        let body = surface_body(&plane(), &[q(2)], &[q(1)], &[]).unwrap();
        assert_eq!(body.mu, q(2));
        assert_eq!(body.alpha, vec![Linear { slope: q(0), intercept: q(0) }]);
        assert_eq!(body.beta, vec![Linear { slope: q(-1), intercept: q(2) }]);
        assert_eq!(body.area(), q(2));
        assert_eq!(body.to_polytope().volume(), q(2));
    }

    #[test]
    fn blowup_bodies() {
        let body = surface_body(&blowup(), &[q(3), q(-1)], &[q(1), q(0)], &[]).unwrap();
        assert_eq!(body.mu, q(2));
        assert_eq!(body.beta_at(&q(0)), q(3));
        assert_eq!(body.area(), q(4));
        let body = surface_body(&blowup(), &[q(2), q(0)], &[q(1), q(-1)], &[1]).unwrap();
        assert_eq!(body.mu, q(2));
        assert_eq!(body.alpha, vec![Linear { slope: q(1), intercept: q(0) }]);
        assert_eq!(body.beta, vec![Linear { slope: q(0), intercept: q(2) }]);
        assert!(body.is_convex());
    }

    #[test]
    fn support_grows_at_a_breakpoint() {
        let l = SurfaceLattice::from_i64(
            &[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]],
            &[&[0, 1, 0], &[0, 0, 1], &[1, -1, -1]],
            &[&[0, 1, 0], &[0, 0, 1], &[1, -1, -1]],
        )
        .unwrap();
        let body = surface_body(&l, &[q(2), q(0), q(-1)], &[q(0), q(1), q(0)], &[0, 0, 1]).unwrap();
        assert_eq!(body.breakpoints, vec![q(0), q(1), q(2)]);
        assert_eq!(body.supports, vec![vec![], vec![2]]);
        assert_eq!(body.alpha[1], Linear { slope: q(1), intercept: q(-1) });
        assert_eq!(body.beta[0], Linear { slope: q(1), intercept: q(0) });
        assert_eq!(body.area(), Rational::new(3.into(), 2.into()));
        assert!(body.is_convex());
    }

    #[test]
    fn multiplicities_shift_alpha() {
        let generic = surface_body(&blowup(), &[q(2), q(0)], &[q(1), q(-1)], &[0]).unwrap();
        let special = surface_body(&blowup(), &[q(2), q(0)], &[q(1), q(-1)], &[2]).unwrap();
        let t = Rational::new(1.into(), 2.into());
        assert_eq!(special.alpha_at(&t) - generic.alpha_at(&t), q(1));
    }

    #[test]
    fn boundary_strata() {
        let body = surface_body(&plane(), &[q(2)], &[q(1)], &[]).unwrap();
        let strata = classify_boundary(&body);
        assert_eq!(strata.len(), 5);
        assert_eq!(strata[2].kind, StratumKind::LowerGraph);
        assert_eq!(strata[2].valuativity, Valuativity::Valuative);
        assert_eq!(strata[4].label, "?");
        assert_eq!(strata[1].endpoints[0], (q(0), q(0)));
    }

    #[test]
    fn invalid_lattices() {
        assert_eq!(
            SurfaceLattice::from_i64(&[&[1, 2], &[0, 1]], &[], &[]),
            Err(SurfaceError::NotSymmetric)
        );
        assert!(matches!(
            SurfaceLattice::from_i64(&[&[1]], &[&[1]], &[&[1]]),
            Err(SurfaceError::CurveNotNegative { .. })
        ));
    }
}
