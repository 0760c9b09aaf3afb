use std::collections::{BTreeMap, BTreeSet};
use std::ops::Bound;

use super::{Exponent, HomogeneousForm, PolyError};
use crate::scalar::Scalar;

/// A subspace of forms of one degree, held in reduced row echelon form.
///
/// The pivot of each basis form is its lex-minimal monomial with coefficient
/// one, and no pivot monomial appears in any other basis form. The pivot set
/// is therefore the set of lex-minimal exponents of all nonzero elements.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormSpan<F> {
    nvars: usize,
    degree: u32,
    basis: BTreeMap<Exponent, HomogeneousForm<F>>,
}

impl<F: Scalar> FormSpan<F> {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        Self { nvars, degree, basis: BTreeMap::new() }
    }

    /// The span of all monomials of the given exponents.
    pub fn from_monomials(nvars: usize, degree: u32, exps: impl IntoIterator<Item = Exponent>) -> Self {
        let basis = exps
            .into_iter()
            .map(|e| {
                debug_assert_eq!(e.degree(), degree);
                (e.clone(), HomogeneousForm::monomial(e, F::one()))
            })
            .collect();
        Self { nvars, degree, basis }
    }

    pub fn complete(nvars: usize, degree: u32) -> Self {
        Self::from_monomials(nvars, degree, Exponent::all_of_degree(nvars, degree))
    }

    pub fn constants(nvars: usize) -> Self {
        Self::from_monomials(nvars, 0, [Exponent::zero(nvars)])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> impl Iterator<Item = &HomogeneousForm<F>> {
        self.basis.values()
    }

    pub fn basis_vec(&self) -> Vec<HomogeneousForm<F>> {
        self.basis.values().cloned().collect()
    }

    /// Pivot exponents in ascending lex order.
    pub fn pivots(&self) -> impl Iterator<Item = &Exponent> {
        self.basis.keys()
    }

    pub fn basis_form(&self, pivot: &Exponent) -> Option<&HomogeneousForm<F>> {
        self.basis.get(pivot)
    }

    pub fn is_monomial(&self) -> bool {
        self.basis.values().all(HomogeneousForm::is_monomial)
    }

    pub fn contains(&self, f: &HomogeneousForm<F>) -> bool {
        f.degree() == self.degree && reduce(&self.basis, f.clone()).is_zero()
    }

    pub fn contains_span(&self, other: &FormSpan<F>) -> bool {
        other.basis().all(|f| self.contains(f))
    }

    pub fn into_builder(self) -> SpanBuilder<F> {
        let all_monomial = self.is_monomial();
        SpanBuilder { nvars: self.nvars, degree: self.degree, basis: self.basis, all_monomial }
    }
}

/// Fully reduces `f` modulo the pivots of `basis`.
fn reduce<F: Scalar>(
    basis: &BTreeMap<Exponent, HomogeneousForm<F>>,
    mut f: HomogeneousForm<F>,
) -> HomogeneousForm<F> {
    if basis.is_empty() {
        return f;
    }
    let mut cursor: Option<Exponent> = None;
    loop {
        let lower = match &cursor {
            Some(c) => Bound::Excluded(c.clone()),
            None => Bound::Unbounded,
        };
        let next = f
            .terms
            .range((lower, Bound::Unbounded))
            .find(|(e, _)| basis.contains_key(*e))
            .map(|(e, c)| (e.clone(), c.clone()));
        let Some((e, c)) = next else {
            return f;
        };
        // Subtracting a basis form only introduces monomials above its pivot.
        f.add_scaled(&basis[&e], &-c);
        cursor = Some(e);
    }
}

/// Incremental RREF construction.
#[derive(Clone, Debug)]
pub struct SpanBuilder<F> {
    nvars: usize,
    degree: u32,
    basis: BTreeMap<Exponent, HomogeneousForm<F>>,
    all_monomial: bool,
}

impl<F: Scalar> SpanBuilder<F> {
    pub fn new(nvars: usize, degree: u32) -> Self {
        Self { nvars, degree, basis: BTreeMap::new(), all_monomial: true }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Adds `f` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, f: &HomogeneousForm<F>) -> Result<bool, PolyError> {
        if f.nvars() != self.nvars {
            return Err(PolyError::VariableMismatch { expected: self.nvars, found: f.nvars() });
        }
        if f.degree() != self.degree {
            return Err(PolyError::DegreeMismatch { expected: self.degree, found: f.degree() });
        }
        if f.is_zero() {
            return Ok(false);
        }
        if self.all_monomial && f.is_monomial() {
            let (e, _) = f.leading().expect("monomial");
            if self.basis.contains_key(e) {
                return Ok(false);
            }
            self.basis.insert(e.clone(), HomogeneousForm::monomial(e.clone(), F::one()));
            return Ok(true);
        }
        let r = reduce(&self.basis, f.clone());
        if r.is_zero() {
            return Ok(false);
        }
        let (pivot, lead) = r.leading().map(|(e, c)| (e.clone(), c.clone())).expect("nonzero");
        let r = r.scale(&(F::one() / lead));
        for b in self.basis.values_mut() {
            let c = b.coefficient(&pivot);
            if !c.is_zero() {
                b.add_scaled(&r, &-c);
            }
        }
        self.all_monomial &= r.is_monomial();
        self.basis.insert(pivot, r);
        Ok(true)
    }

    pub fn finish(self) -> FormSpan<F> {
        FormSpan { nvars: self.nvars, degree: self.degree, basis: self.basis }
    }
}

/// Canonical RREF basis of the span of `forms`, all of one degree.
pub fn span_reduce<F: Scalar>(
    nvars: usize,
    degree: u32,
    forms: &[HomogeneousForm<F>],
) -> Result<FormSpan<F>, PolyError> {
    let mut b = SpanBuilder::new(nvars, degree);
    for f in forms {
        b.insert(f)?;
    }
    Ok(b.finish())
}

/// Which end of the lex order a pivot is read from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotEnd {
    Min,
    Max,
}

/// Lex-minimal (or lex-maximal) exponents of the nonzero elements of the span of `forms`.
///
/// Only a row echelon form is built: rows are reduced at their pivot and nowhere else.
pub fn pivot_exponents<F: Scalar>(
    forms: impl IntoIterator<Item = HomogeneousForm<F>>,
    end: PivotEnd,
) -> BTreeSet<Exponent> {
    let mut rows: BTreeMap<Exponent, HomogeneousForm<F>> = BTreeMap::new();
    for mut f in forms {
        loop {
            let lead = match end {
                PivotEnd::Min => f.terms.iter().next(),
                PivotEnd::Max => f.terms.iter().next_back(),
            };
            let Some((e, c)) = lead.map(|(e, c)| (e.clone(), c.clone())) else {
                break;
            };
            match rows.get(&e) {
                Some(row) => f.add_scaled(row, &-c),
                None => {
                    rows.insert(e, f.scale(&(F::one() / c)));
                    break;
                }
            }
        }
    }
    rows.into_keys().collect()
}
