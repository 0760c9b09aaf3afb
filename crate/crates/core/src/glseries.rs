//! Graded linear series `S• = {S_k}` on `ℙ^d` with `D = m·H`.
//!
//! A series is a lazily materialized description: generators, or a
//! derivation from another series (Veronese, subtraction of the flag
//! divisor, restriction, puncture, sheafification). Levels are cached and
//! every asymptotic query takes an explicit [`TruncationBound`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::Zero;
use thiserror::Error;

use crate::flagval::Flag;
use crate::monideal;
use crate::polyform::{FormSpan, HomogeneousForm, PolyError, SpanBuilder};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("level {k} requested beyond truncation bound {bound}")]
    BeyondTruncation { k: usize, bound: usize },
    #[error("truncation bound must be at least 1")]
    ZeroTruncation,
    #[error("generator in degree {k} has polynomial degree {found}, expected {expected}")]
    GeneratorDegree { k: usize, found: u32, expected: u32 },
    #[error("generators must have positive degree")]
    ZeroDegreeGenerator,
    #[error("form has {found} variables, expected {expected}")]
    VariableCount { expected: usize, found: usize },
    #[error("point must have {expected} coordinates, not all zero")]
    BadPoint { expected: usize },
    #[error("flag has ambient dimension {found}, series has {expected}")]
    FlagDimension { expected: usize, found: usize },
    #[error("unsupported: base ideal computed only for monomial series (level {k} is not monomial)")]
    NotMonomial { k: usize },
    #[error("cannot restrict a series on a point")]
    RestrictPoint,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Largest degree up to which levels are materialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruncationBound(usize);

impl TruncationBound {
    pub fn new(k: usize) -> Result<Self, SeriesError> {
        if k == 0 {
            return Err(SeriesError::ZeroTruncation);
        }
        Ok(Self(k))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for TruncationBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug)]
enum Source<F: Scalar> {
    Generated { generators: BTreeMap<usize, Vec<HomogeneousForm<F>>> },
    Veronese { base: GradedSeries<F>, factor: usize },
    Subtract { base: GradedSeries<F>, amount: u32, flag: Flag<F> },
    Restrict { base: GradedSeries<F>, flag: Flag<F> },
    Puncture { base: GradedSeries<F>, point: Vec<F> },
    Sheafified { base: GradedSeries<F> },
}

#[derive(Debug)]
struct Inner<F: Scalar> {
    ambient_dim: usize,
    divisor_degree: u32,
    source: Source<F>,
    cache: RwLock<BTreeMap<usize, Arc<FormSpan<F>>>>,
}

/// A graded linear series; cloning shares the level cache.
#[derive(Clone, Debug)]
pub struct GradedSeries<F: Scalar> {
    inner: Arc<Inner<F>>,
}

impl<F: Scalar> GradedSeries<F> {
    fn with_source(ambient_dim: usize, divisor_degree: u32, source: Source<F>) -> Self {
        Self {
            inner: Arc::new(Inner {
                ambient_dim,
                divisor_degree,
                source,
                cache: RwLock::new(BTreeMap::new()),
            }),
        }
    }

    /// The series generated by the given `(degree, forms)` pairs.
    pub fn from_generators(
        ambient_dim: usize,
        divisor_degree: u32,
        generators: impl IntoIterator<Item = (usize, Vec<HomogeneousForm<F>>)>,
    ) -> Result<Self, SeriesError> {
        let mut map: BTreeMap<usize, Vec<HomogeneousForm<F>>> = BTreeMap::new();
        for (k, forms) in generators {
            if k == 0 {
                return Err(SeriesError::ZeroDegreeGenerator);
            }
            let expected = k as u32 * divisor_degree;
            for f in &forms {
                if f.nvars() != ambient_dim + 1 {
                    return Err(SeriesError::VariableCount {
                        expected: ambient_dim + 1,
                        found: f.nvars(),
                    });
                }
                if f.degree() != expected {
                    return Err(SeriesError::GeneratorDegree { k, found: f.degree(), expected });
                }
            }
            let forms: Vec<_> = forms.into_iter().filter(|f| !f.is_zero()).collect();
            if !forms.is_empty() {
                map.entry(k).or_default().extend(forms);
            }
        }
        Ok(Self::with_source(ambient_dim, divisor_degree, Source::Generated { generators: map }))
    }

    /// The complete series `H⁰(ℙ^d, O(k·m))`, generated in degree one.
    pub fn complete(ambient_dim: usize, divisor_degree: u32) -> Self {
        let gens = FormSpan::<F>::complete(ambient_dim + 1, divisor_degree).basis_vec();
        Self::from_generators(ambient_dim, divisor_degree, [(1, gens)]).expect("valid generators")
    }

    /// The series with `S_k = 0` for all `k ≥ 1`.
    pub fn zero(ambient_dim: usize, divisor_degree: u32) -> Self {
        Self::from_generators(ambient_dim, divisor_degree, []).expect("valid generators")
    }

    /// Series generated in degree one by monomials.
    pub fn from_monomials(
        ambient_dim: usize,
        divisor_degree: u32,
        exponents: &[Vec<u32>],
    ) -> Result<Self, SeriesError> {
        let forms = exponents
            .iter()
            .map(|e| {
                HomogeneousForm::from_terms(
                    ambient_dim + 1,
                    divisor_degree,
                    [(crate::polyform::Exponent::new(e.clone()), F::one())],
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_generators(ambient_dim, divisor_degree, [(1, forms)])
    }

    pub fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim
    }

    pub fn nvars(&self) -> usize {
        self.inner.ambient_dim + 1
    }

    pub fn divisor_degree(&self) -> u32 {
        self.inner.divisor_degree
    }

    /// Generators, when the series was built from them.
    pub fn generators(&self) -> Option<&BTreeMap<usize, Vec<HomogeneousForm<F>>>> {
        match &self.inner.source {
            Source::Generated { generators } => Some(generators),
            _ => None,
        }
    }

    /// Largest generator degree, when the series was built from generators.
    pub fn generation_degree(&self) -> Option<usize> {
        self.generators().map(|g| g.keys().next_back().copied().unwrap_or(0))
    }

    /// Whether every generator is a monomial (only known for generated series).
    pub fn has_monomial_generators(&self) -> bool {
        self.generators()
            .is_some_and(|g| g.values().flatten().all(HomogeneousForm::is_monomial))
    }

    pub fn level_degree(&self, k: usize) -> u32 {
        k as u32 * self.inner.divisor_degree
    }

    /// `S_k`, for `k ≤ K`.
    pub fn level(&self, k: usize, bound: TruncationBound) -> Result<Arc<FormSpan<F>>, SeriesError> {
        if k > bound.get() {
            return Err(SeriesError::BeyondTruncation { k, bound: bound.get() });
        }
        self.level_unbounded(k)
    }

    pub(crate) fn level_unbounded(&self, k: usize) -> Result<Arc<FormSpan<F>>, SeriesError> {
        if let Some(hit) = self.inner.cache.read().expect("cache lock").get(&k) {
            return Ok(hit.clone());
        }
        let span = Arc::new(self.compute_level(k)?);
        self.inner.cache.write().expect("cache lock").insert(k, span.clone());
        Ok(span)
    }

    fn compute_level(&self, k: usize) -> Result<FormSpan<F>, SeriesError> {
        let n = self.nvars();
        if k == 0 {
            return Ok(FormSpan::constants(n));
        }
        let degree = self.level_degree(k);
        match &self.inner.source {
            Source::Generated { generators } => {
                let mut b = SpanBuilder::new(n, degree);
                for (&j, gens) in generators.range(1..=k) {
                    let lower = self.level_unbounded(k - j)?;
                    for s in lower.basis() {
                        for g in gens {
                            b.insert(&s.multiply(g))?;
                        }
                    }
                }
                Ok(b.finish())
            }
            Source::Veronese { base, factor } => {
                let span = base.level_unbounded(k * factor)?;
                Ok((*span).clone())
            }
            Source::Subtract { base, amount, flag } => {
                let need = amount * k as u32;
                let transformed = flag.transform_span(&*base.level_unbounded(k)?)?;
                let mut quotients = Vec::new();
                for (pivot, form) in transformed.pivots().zip(transformed.basis()) {
                    if pivot.entries()[0] >= need {
                        let q = form
                            .divide_by_variable_power(0, need)
                            .expect("every term lies above the pivot");
                        quotients.push(flag.untransform(&q));
                    }
                }
                let mut b = SpanBuilder::new(n, degree);
                for q in &quotients {
                    b.insert(q)?;
                }
                Ok(b.finish())
            }
            Source::Restrict { base, flag } => {
                let transformed = flag.transform_span(&*base.level_unbounded(k)?)?;
                let mut b = SpanBuilder::new(n, degree);
                for f in transformed.basis() {
                    b.insert(&f.set_variable_zero(0)?)?;
                }
                Ok(b.finish())
            }
            Source::Puncture { base, point } => {
                let span = base.level_unbounded(k)?;
                let values: Vec<(HomogeneousForm<F>, F)> =
                    span.basis().map(|f| (f.clone(), f.evaluate(point))).collect();
                let Some((anchor, anchor_value)) =
                    values.iter().find(|(_, v)| !v.is_zero()).cloned()
                else {
                    return Ok((*span).clone());
                };
                let mut b = SpanBuilder::new(n, degree);
                for (f, v) in &values {
                    if *f == anchor {
                        continue;
                    }
                    let mut g = f.clone();
                    g.add_scaled(&anchor, &-(v.clone() / anchor_value.clone()));
                    b.insert(&g)?;
                }
                Ok(b.finish())
            }
            Source::Sheafified { base } => {
                let span = base.level_unbounded(k)?;
                let ideal = monideal::MonomialIdeal::from_span(&span)
                    .ok_or(SeriesError::NotMonomial { k })?;
                let sat = monideal::saturate(&ideal);
                Ok(FormSpan::from_monomials(n, degree, sat.monomials_of_degree(degree)))
            }
        }
    }

    pub fn dims(&self, bound: TruncationBound) -> Result<Vec<usize>, SeriesError> {
        (0..=bound.get()).map(|k| Ok(self.level(k, bound)?.dim())).collect()
    }

    /// `S^{(b)}_l = S_{l·b}`.
    pub fn veronese(&self, factor: usize) -> Self {
        assert!(factor >= 1, "Veronese factor must be positive");
        if factor == 1 {
            return self.clone();
        }
        Self::with_source(
            self.ambient_dim(),
            self.divisor_degree() * factor as u32,
            Source::Veronese { base: self.clone(), factor },
        )
    }

    /// `(S − a·Y₁)_k = { s / ℓ^{a·k} : s ∈ S_k, ν₁(s) ≥ a·k }` where `ℓ` cuts out `Y₁`.
    pub fn subtract_divisor(&self, amount: u32, flag: &Flag<F>) -> Result<Self, SeriesError> {
        self.check_flag(flag)?;
        if amount == 0 {
            return Ok(self.clone());
        }
        if amount > self.divisor_degree() {
            return Ok(Self::zero(self.ambient_dim(), 0));
        }
        Ok(Self::with_source(
            self.ambient_dim(),
            self.divisor_degree() - amount,
            Source::Subtract { base: self.clone(), amount, flag: flag.clone() },
        ))
    }

    /// Images of the levels under restriction to `Y₁`, in the flag's coordinates on `Y₁`.
    pub fn restrict_to_flag_divisor(&self, flag: &Flag<F>) -> Result<Self, SeriesError> {
        self.check_flag(flag)?;
        if self.ambient_dim() == 0 {
            return Err(SeriesError::RestrictPoint);
        }
        Ok(Self::with_source(
            self.ambient_dim() - 1,
            self.divisor_degree(),
            Source::Restrict { base: self.clone(), flag: flag.clone() },
        ))
    }

    /// `S^x_k = { s ∈ S_k : s(x) = 0 }` for `k ≥ 1`.
    pub fn puncture(&self, point: &[F]) -> Result<Self, SeriesError> {
        if point.len() != self.nvars() || point.iter().all(Zero::is_zero) {
            return Err(SeriesError::BadPoint { expected: self.nvars() });
        }
        Ok(Self::with_source(
            self.ambient_dim(),
            self.divisor_degree(),
            Source::Puncture { base: self.clone(), point: point.to_vec() },
        ))
    }

    /// `V_{k,p} = Im(Sym^k S_p → S_{kp})`: the series generated in degree one by `S_p`.
    pub fn fujita_subseries(&self, p: usize) -> Result<Self, SeriesError> {
        assert!(p >= 1, "Fujita degree must be positive");
        let gens = self.level_unbounded(p)?.basis_vec();
        Self::from_generators(self.ambient_dim(), self.divisor_degree() * p as u32, [(1, gens)])
    }

    /// Levels spanned by the monomials of the saturated base ideals (monomial series only).
    pub fn sheafify(&self) -> Self {
        Self::with_source(
            self.ambient_dim(),
            self.divisor_degree(),
            Source::Sheafified { base: self.clone() },
        )
    }

    fn check_flag(&self, flag: &Flag<F>) -> Result<(), SeriesError> {
        if flag.ambient_dim() != self.ambient_dim() {
            return Err(SeriesError::FlagDimension {
                expected: self.ambient_dim(),
                found: flag.ambient_dim(),
            });
        }
        Ok(())
    }

    /// Whether every level up to `K` is spanned by monomials.
    pub fn is_monomial(&self, bound: TruncationBound) -> Result<bool, SeriesError> {
        for k in 1..=bound.get() {
            if !self.level(k, bound)?.is_monomial() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `S_k ⊆ T_k` for all `k ≤ K`.
    pub fn is_subseries_of(&self, other: &Self, bound: TruncationBound) -> Result<bool, SeriesError> {
        for k in 1..=bound.get() {
            if !other.level(k, bound)?.contains_span(&*self.level(k, bound)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Smallest `k₀` such that every level `k ≤ K` is spanned by products of levels `≤ k₀`.
    pub fn detect_generation_degree(&self, bound: TruncationBound) -> Result<usize, SeriesError> {
        if let Some(g) = self.generation_degree() {
            return Ok(g.min(bound.get()));
        }
        let mut k0 = 0;
        for k in 1..=bound.get() {
            let level = self.level(k, bound)?;
            if level.is_zero() {
                continue;
            }
            let mut b = SpanBuilder::new(self.nvars(), self.level_degree(k));
            for j in 1..=k0.min(k) {
                let lower = self.level(k - j, bound)?;
                for g in self.level(j, bound)?.basis() {
                    for s in lower.basis() {
                        b.insert(&s.multiply(g))?;
                    }
                }
            }
            if b.dim() < level.dim() {
                k0 = k;
            }
        }
        Ok(k0)
    }

    /// Whether `S_k · S_l ⊆ S_{k+l}` for all `k + l ≤ K`.
    pub fn check_multiplicative(&self, bound: TruncationBound) -> Result<bool, SeriesError> {
        let kk = bound.get();
        for k in 1..=kk {
            for l in k..=kk - k.min(kk) {
                if k + l > kk {
                    break;
                }
                let target = self.level(k + l, bound)?;
                for a in self.level(k, bound)?.basis() {
                    for b in self.level(l, bound)?.basis() {
                        if !target.contains(&a.multiply(b)) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Dimensions of the levels and a volume read off the Hilbert function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData<F> {
    pub truncation: usize,
    /// `dims[k] = dim S_k` for `0 ≤ k ≤ K`.
    pub dims: Vec<usize>,
    pub volume: F,
    /// The `d`-th difference was constant on the last three entries.
    pub stabilized: bool,
}

/// Number of trailing equal `d`-th differences required before trusting the volume.
pub const HILBERT_WINDOW: usize = 3;

pub fn hilbert_data<F: Scalar>(
    series: &GradedSeries<F>,
    bound: TruncationBound,
) -> Result<HilbertData<F>, SeriesError> {
    let dims = series.dims(bound)?;
    let d = series.ambient_dim();
    let mut diffs: Vec<F> = dims.iter().map(|&v| F::from_usize(v)).collect();
    for _ in 0..d {
        diffs = diffs.windows(2).map(|w| w[1].clone() - w[0].clone()).collect();
    }
    // Level zero is S₀ = constants, which need not sit on the Hilbert polynomial.
    let usable = diffs.len().saturating_sub(1);
    if usable >= HILBERT_WINDOW {
        let tail = &diffs[diffs.len() - HILBERT_WINDOW..];
        if tail.iter().all(|v| *v == tail[0]) {
            return Ok(HilbertData {
                truncation: bound.get(),
                dims,
                volume: tail[0].clone(),
                stabilized: true,
            });
        }
    }
    let kk = F::from_usize(bound.get());
    let mut denom = F::one();
    let mut fact = F::one();
    for i in 1..=d {
        denom = denom * kk.clone();
        fact = fact * F::from_usize(i);
    }
    let volume = fact * F::from_usize(dims[bound.get()]) / denom;
    Ok(HilbertData { truncation: bound.get(), dims, volume, stabilized: false })
}
