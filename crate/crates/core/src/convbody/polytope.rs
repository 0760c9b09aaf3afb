use std::cmp::Ordering;

use num_bigint::BigInt;
use thiserror::Error;

use crate::exactnum::{dot, Matrix};
use crate::scalar::{primitive_integer_vector, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("scale factor must be non-negative")]
    NegativeScale,
}

/// `normal · x ≤ offset` with a primitive integer normal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Halfspace<F> {
    pub normal: Vec<BigInt>,
    pub offset: F,
}

impl<F: Scalar> Halfspace<F> {
    fn from_rational(normal: &[F], offset: &F) -> Self {
        let ints = primitive_integer_vector(normal);
        let (i, a) = normal
            .iter()
            .enumerate()
            .find(|(_, a)| !a.is_zero())
            .expect("nonzero normal");
        let factor = F::from_bigint(&ints[i]).expect("integer fits") / a.clone();
        Self { normal: ints, offset: offset.clone() * factor }
    }

    pub fn evaluate(&self, x: &[F]) -> F {
        self.normal
            .iter()
            .zip(x)
            .fold(F::zero(), |acc, (a, v)| acc + F::from_bigint(a).expect("integer fits") * v.clone())
    }

    pub fn slack(&self, x: &[F]) -> F {
        self.offset.clone() - self.evaluate(x)
    }

    fn negated(&self) -> Self {
        Self { normal: self.normal.iter().map(|a| -a).collect(), offset: -self.offset.clone() }
    }
}

impl<F: Scalar> PartialOrd for Halfspace<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Scalar> Ord for Halfspace<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.normal.cmp(&other.normal).then_with(|| self.offset.cmp(&other.offset))
    }
}

/// A convex polytope with exact rational vertices.
///
/// The H-representation is split into the affine-hull equations and the
/// facet inequalities; both are canonical for full-dimensional polytopes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalPolytope<F> {
    ambient: usize,
    vertices: Vec<Vec<F>>,
    equations: Vec<Halfspace<F>>,
    facets: Vec<Halfspace<F>>,
    dim: Option<usize>,
}

impl<F: Scalar> RationalPolytope<F> {
    pub fn empty(ambient: usize) -> Self {
        Self { ambient, vertices: Vec::new(), equations: Vec::new(), facets: Vec::new(), dim: None }
    }

    /// Convex hull of `points` in `ℝ^ambient`.
    pub fn hull(ambient: usize, points: &[Vec<F>]) -> Result<Self, PolytopeError> {
        for p in points {
            if p.len() != ambient {
                return Err(PolytopeError::DimensionMismatch { expected: ambient, found: p.len() });
            }
        }
        let mut pts: Vec<Vec<F>> = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.is_empty() {
            return Ok(Self::empty(ambient));
        }
        let frame = AffineFrame::new(&pts);
        let r = frame.rank();
        let local: Vec<Vec<F>> = pts.iter().map(|p| frame.local(p)).collect();
        let (vertex_ids, local_facets) = hull_full_dimensional(&local, r);
        let mut vertices: Vec<Vec<F>> = vertex_ids.iter().map(|&i| pts[i].clone()).collect();
        vertices.sort();
        let facets = local_facets
            .iter()
            .map(|(a, b)| {
                let normal = frame.lift_normal(a);
                let offset = b.clone() + dot(&normal, &frame.origin);
                Halfspace::from_rational(&normal, &offset)
            })
            .collect::<Vec<_>>();
        let equations = frame
            .equations()
            .into_iter()
            .map(|n| {
                let offset = dot(&n, &frame.origin);
                Halfspace::from_rational(&n, &offset)
            })
            .collect();
        let mut out = Self { ambient, vertices, equations, facets, dim: Some(r) };
        out.canonicalize();
        Ok(out)
    }

    fn canonicalize(&mut self) {
        // Equations are only determined up to their span; keep a reduced basis.
        if !self.equations.is_empty() {
            let rows: Vec<Vec<F>> = self
                .equations
                .iter()
                .map(|h| {
                    let mut row: Vec<F> =
                        h.normal.iter().map(|a| F::from_bigint(a).expect("integer fits")).collect();
                    row.push(h.offset.clone());
                    row
                })
                .collect();
            let (rref, pivots) = Matrix::from_rows(rows).rref();
            self.equations = (0..pivots.len())
                .map(|i| {
                    let row = rref.row(i);
                    Halfspace::from_rational(&row[..self.ambient], &row[self.ambient])
                })
                .collect();
        }
        self.equations.sort();
        self.facets.sort();
        self.facets.dedup();
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Affine dimension, `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.dim.is_none()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == Some(self.ambient)
    }

    /// Vertices in ascending lex order.
    pub fn vertices(&self) -> &[Vec<F>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace<F>] {
        &self.facets
    }

    pub fn equations(&self) -> &[Halfspace<F>] {
        &self.equations
    }

    /// All inequalities, with each equation contributing `≤` in both directions.
    pub fn halfspaces(&self) -> Vec<Halfspace<F>> {
        let mut all: Vec<Halfspace<F>> = self.facets.clone();
        for e in &self.equations {
            all.push(e.clone());
            all.push(e.negated());
        }
        all.sort();
        all
    }

    fn check_dim(&self, found: usize) -> Result<(), PolytopeError> {
        if found != self.ambient {
            return Err(PolytopeError::DimensionMismatch { expected: self.ambient, found });
        }
        Ok(())
    }

    /// Membership; with `strictly`, every inequality must hold strictly.
    pub fn contains_point(&self, x: &[F], strictly: bool) -> Result<bool, PolytopeError> {
        self.check_dim(x.len())?;
        if self.is_empty() {
            return Ok(false);
        }
        if strictly {
            return Ok(self.halfspaces().iter().all(|h| h.slack(x).is_positive()));
        }
        Ok(self.equations.iter().all(|h| h.slack(x).is_zero())
            && self.facets.iter().all(|h| !h.slack(x).is_negative()))
    }

    /// Membership in the relative interior.
    pub fn contains_relative_interior(&self, x: &[F]) -> Result<bool, PolytopeError> {
        self.check_dim(x.len())?;
        if self.is_empty() {
            return Ok(false);
        }
        Ok(self.equations.iter().all(|h| h.slack(x).is_zero())
            && self.facets.iter().all(|h| h.slack(x).is_positive()))
    }

    pub fn is_subset_of(&self, other: &Self) -> Result<bool, PolytopeError> {
        other.check_dim(self.ambient)?;
        for v in &self.vertices {
            if !other.contains_point(v, false)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Set equality: identical ambient space and vertex sets.
    pub fn equals(&self, other: &Self) -> Result<bool, PolytopeError> {
        other.check_dim(self.ambient)?;
        Ok(self.vertices == other.vertices)
    }

    pub fn translate(&self, v: &[F]) -> Result<Self, PolytopeError> {
        self.check_dim(v.len())?;
        let pts: Vec<Vec<F>> = self
            .vertices
            .iter()
            .map(|p| p.iter().zip(v).map(|(a, b)| a.clone() + b.clone()).collect())
            .collect();
        Self::hull(self.ambient, &pts)
    }

    pub fn scale(&self, c: &F) -> Result<Self, PolytopeError> {
        if c.is_negative() {
            return Err(PolytopeError::NegativeScale);
        }
        let pts: Vec<Vec<F>> = self
            .vertices
            .iter()
            .map(|p| p.iter().map(|a| a.clone() * c.clone()).collect())
            .collect();
        Self::hull(self.ambient, &pts)
    }

    /// Euclidean volume in `ℝ^ambient`; zero unless full-dimensional.
    pub fn volume(&self) -> F {
        if !self.is_full_dimensional() {
            return F::zero();
        }
        if self.ambient == 0 {
            return F::one();
        }
        let mut factorial = F::one();
        for i in 2..=self.ambient {
            factorial = factorial * F::from_usize(i);
        }
        let total = simplices(&self.vertices).into_iter().fold(F::zero(), |acc, s| {
            let rows: Vec<Vec<F>> = s[1..]
                .iter()
                .map(|p| p.iter().zip(&s[0]).map(|(a, b)| a.clone() - b.clone()).collect())
                .collect();
            acc + Matrix::from_rows(rows).determinant().abs()
        });
        total / factorial
    }

    /// `P ∩ {x₁ = t}`, projected by dropping the first coordinate.
    pub fn slice(&self, t: &F) -> Self {
        assert!(self.ambient >= 1, "cannot slice a point");
        let mut pts: Vec<Vec<F>> = Vec::new();
        for (i, u) in self.vertices.iter().enumerate() {
            if u[0] == *t {
                pts.push(u[1..].to_vec());
            }
            for w in &self.vertices[i + 1..] {
                let (lo, hi) = if u[0] < w[0] { (u, w) } else { (w, u) };
                if lo[0] < *t && *t < hi[0] {
                    let lambda = (t.clone() - lo[0].clone()) / (hi[0].clone() - lo[0].clone());
                    pts.push(
                        lo[1..]
                            .iter()
                            .zip(&hi[1..])
                            .map(|(a, b)| a.clone() + lambda.clone() * (b.clone() - a.clone()))
                            .collect(),
                    );
                }
            }
        }
        Self::hull(self.ambient - 1, &pts).expect("consistent dimensions")
    }

    /// The part with `x₁ ≥ t`.
    pub fn cut_below(&self, t: &F) -> Self {
        let mut pts: Vec<Vec<F>> = self.vertices.iter().filter(|v| v[0] >= *t).cloned().collect();
        let s = self.slice(t);
        pts.extend(s.vertices.iter().map(|v| std::iter::once(t.clone()).chain(v.iter().cloned()).collect()));
        Self::hull(self.ambient, &pts).expect("consistent dimensions")
    }

    /// `[min, max]` of the first coordinate, `None` when empty.
    pub fn first_coordinate_range(&self) -> Option<(F, F)> {
        let lo = self.vertices.iter().map(|v| v[0].clone()).min()?;
        let hi = self.vertices.iter().map(|v| v[0].clone()).max()?;
        Some((lo, hi))
    }

    /// Checks that the two representations agree on the vertices.
    pub fn check_representation(&self) -> bool {
        if self.is_empty() {
            return self.vertices.is_empty();
        }
        let r = self.dim.expect("nonempty");
        let on_all = self.vertices.iter().all(|v| {
            self.equations.iter().all(|h| h.slack(v).is_zero())
                && self.facets.iter().all(|h| !h.slack(v).is_negative())
        });
        let facets_tight = self.facets.iter().all(|h| {
            let tight: Vec<Vec<F>> =
                self.vertices.iter().filter(|v| h.slack(v).is_zero()).cloned().collect();
            affine_rank(&tight).is_some_and(|k| k + 1 == r)
        });
        on_all && facets_tight && self.equations.len() == self.ambient - r
    }
}

/// Affine dimension of a point set, `None` when empty.
pub(crate) fn affine_rank<F: Scalar>(points: &[Vec<F>]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    if rest.is_empty() {
        return Some(0);
    }
    let rows: Vec<Vec<F>> = rest
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a.clone() - b.clone()).collect())
        .collect();
    Some(Matrix::from_rows(rows).rank())
}

/// Coordinates on the affine hull of a point set.
struct AffineFrame<F> {
    origin: Vec<F>,
    /// RREF basis of the direction space, one row per direction.
    basis: Matrix<F>,
    pivots: Vec<usize>,
    ambient: usize,
}

impl<F: Scalar> AffineFrame<F> {
    fn new(points: &[Vec<F>]) -> Self {
        let origin = points[0].clone();
        let ambient = origin.len();
        let rows: Vec<Vec<F>> = points[1..]
            .iter()
            .map(|p| p.iter().zip(&origin).map(|(a, b)| a.clone() - b.clone()).collect())
            .collect();
        if rows.is_empty() || ambient == 0 {
            return Self { origin, basis: Matrix::zeros(0, ambient), pivots: Vec::new(), ambient };
        }
        let (rref, pivots) = Matrix::from_rows(rows).rref();
        let basis = Matrix::from_rows((0..pivots.len()).map(|i| rref.row(i).to_vec()).collect());
        Self { origin, basis, pivots, ambient }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// For `p` in the affine hull, `p - origin = Σ c_i · basis_i` with `c_i` read at the pivots.
    fn local(&self, p: &[F]) -> Vec<F> {
        self.pivots.iter().map(|&j| p[j].clone() - self.origin[j].clone()).collect()
    }

    /// The ambient functional `x ↦ a · local(x)` up to the constant `a · local(0)`.
    fn lift_normal(&self, a: &[F]) -> Vec<F> {
        let mut n = vec![F::zero(); self.ambient];
        for (i, &j) in self.pivots.iter().enumerate() {
            n[j] = a[i].clone();
        }
        n
    }

    /// Normals of the affine hull: the kernel of the direction basis.
    fn equations(&self) -> Vec<Vec<F>> {
        if self.rank() == 0 {
            return (0..self.ambient)
                .map(|i| {
                    let mut e = vec![F::zero(); self.ambient];
                    e[i] = F::one();
                    e
                })
                .collect();
        }
        self.basis.kernel()
    }
}

struct Facet<F> {
    normal: Vec<F>,
    offset: F,
}

impl<F: Scalar> Facet<F> {
    fn height(&self, p: &[F]) -> Ordering {
        dot(&self.normal, p).cmp(&self.offset)
    }
}

/// Hyperplane through `points` (affinely spanning a hyperplane of `ℝ^r`), with `interior` beneath.
fn hyperplane_through<F: Scalar>(points: &[&Vec<F>], interior: &[F]) -> Facet<F> {
    let base = points[0];
    let rows: Vec<Vec<F>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a.clone() - b.clone()).collect())
        .collect();
    let mut normal = Matrix::from_rows(rows).kernel().into_iter().next().expect("one-dimensional kernel");
    let mut offset = dot(&normal, base);
    if dot(&normal, interior) > offset {
        normal = normal.into_iter().map(|a| -a).collect();
        offset = -offset;
    }
    // Scale to a canonical representative so duplicate hyperplanes compare equal.
    let lead = normal.iter().find(|a| !a.is_zero()).expect("nonzero normal").abs();
    normal = normal.into_iter().map(|a| a / lead.clone()).collect();
    Facet { normal, offset: offset / lead }
}

/// Beneath-beyond hull of points affinely spanning `ℝ^r`; returns vertex indices and facets.
fn hull_full_dimensional<F: Scalar>(points: &[Vec<F>], r: usize) -> (Vec<usize>, Vec<(Vec<F>, F)>) {
    if r == 0 {
        return (vec![0], Vec::new());
    }
    if r == 1 {
        let (mut lo, mut hi) = (0, 0);
        for (i, p) in points.iter().enumerate() {
            if p[0] < points[lo][0] {
                lo = i;
            }
            if p[0] > points[hi][0] {
                hi = i;
            }
        }
        let facets = vec![
            (vec![-F::one()], -points[lo][0].clone()),
            (vec![F::one()], points[hi][0].clone()),
        ];
        return (vec![lo, hi], facets);
    }
    // Initial simplex, greedily.
    let mut simplex: Vec<usize> = vec![0];
    for i in 1..points.len() {
        if simplex.len() == r + 1 {
            break;
        }
        let mut trial: Vec<Vec<F>> = simplex.iter().map(|&j| points[j].clone()).collect();
        trial.push(points[i].clone());
        if affine_rank(&trial) == Some(simplex.len()) {
            simplex.push(i);
        }
    }
    debug_assert_eq!(simplex.len(), r + 1);
    let count = F::from_usize(r + 1);
    let interior: Vec<F> = (0..r)
        .map(|c| simplex.iter().fold(F::zero(), |acc, &j| acc + points[j][c].clone()) / count.clone())
        .collect();
    let mut facets: Vec<Facet<F>> = (0..=r)
        .map(|skip| {
            let on: Vec<&Vec<F>> =
                simplex.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &j)| &points[j]).collect();
            hyperplane_through(&on, &interior)
        })
        .collect();
    let mut vertices = simplex.clone();
    for idx in 0..points.len() {
        if simplex.contains(&idx) {
            continue;
        }
        let p = &points[idx];
        let heights: Vec<Ordering> = facets.iter().map(|f| f.height(p)).collect();
        if heights.iter().all(|h| *h != Ordering::Greater) {
            continue;
        }
        let mut fresh: Vec<Facet<F>> = Vec::new();
        for (i, fv) in facets.iter().enumerate() {
            if heights[i] != Ordering::Greater {
                continue;
            }
            for (j, fb) in facets.iter().enumerate() {
                if heights[j] != Ordering::Less {
                    continue;
                }
                let common: Vec<&Vec<F>> = vertices
                    .iter()
                    .map(|&v| &points[v])
                    .filter(|v| fv.height(v) == Ordering::Equal && fb.height(v) == Ordering::Equal)
                    .collect();
                let owned: Vec<Vec<F>> = common.iter().map(|v| (*v).clone()).collect();
                if affine_rank(&owned) != Some(r - 2) {
                    continue;
                }
                let mut spanning: Vec<&Vec<F>> = vec![p];
                let mut acc: Vec<Vec<F>> = vec![p.clone()];
                for c in &common {
                    acc.push((*c).clone());
                    if affine_rank(&acc) == Some(spanning.len()) {
                        spanning.push(c);
                    } else {
                        acc.pop();
                    }
                    if spanning.len() == r {
                        break;
                    }
                }
                let f = hyperplane_through(&spanning, &interior);
                if !fresh.iter().any(|g| g.normal == f.normal && g.offset == f.offset) {
                    fresh.push(f);
                }
            }
        }
        let mut kept: Vec<Facet<F>> = facets
            .into_iter()
            .zip(&heights)
            .filter(|(_, h)| **h != Ordering::Greater)
            .map(|(f, _)| f)
            .collect();
        kept.extend(fresh);
        facets = kept;
        vertices.push(idx);
        vertices.retain(|&v| {
            let normals: Vec<Vec<F>> = facets
                .iter()
                .filter(|f| f.height(&points[v]) == Ordering::Equal)
                .map(|f| f.normal.clone())
                .collect();
            !normals.is_empty() && Matrix::from_rows(normals).rank() == r
        });
    }
    vertices.sort();
    (vertices, facets.into_iter().map(|f| (f.normal, f.offset)).collect())
}

/// A triangulation of the convex hull of `vertices` into simplices of its affine dimension.
pub(crate) fn simplices<F: Scalar>(vertices: &[Vec<F>]) -> Vec<Vec<Vec<F>>> {
    let Some(r) = affine_rank(vertices) else {
        return Vec::new();
    };
    if r == 0 {
        return vec![vec![vertices[0].clone()]];
    }
    let ambient = vertices[0].len();
    let poly = RationalPolytope::hull(ambient, vertices).expect("consistent dimensions");
    let apex = poly.vertices[0].clone();
    let mut out = Vec::new();
    for facet in &poly.facets {
        if facet.slack(&apex).is_zero() {
            continue;
        }
        let on: Vec<Vec<F>> = poly.vertices.iter().filter(|v| facet.slack(v).is_zero()).cloned().collect();
        for mut s in simplices(&on) {
            s.insert(0, apex.clone());
            out.push(s);
        }
    }
    out
}
