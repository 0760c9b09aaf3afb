//! Homogeneous polynomials over an exact field and their linear spans.
//!
//! Sections of `O(k·m)` on `ℙ^d` are forms of degree `k·m` in `d + 1`
//! variables. Monomials are ordered by ascending lexicographic order on the
//! exponent vector, which is the order the flag valuation minimizes.

mod dense;
mod span;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use thiserror::Error;

use crate::exactnum::Matrix;
use crate::scalar::Scalar;

pub use dense::substituted_pivots;
pub use span::{pivot_exponents, span_reduce, FormSpan, PivotEnd, SpanBuilder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("forms have degrees {expected} and {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("forms live in {expected} and {found} variables")]
    VariableMismatch { expected: usize, found: usize },
    #[error("exponent {exponent} does not have total degree {degree} in {nvars} variables")]
    BadExponent { exponent: Exponent, degree: u32, nvars: usize },
    #[error("substitution matrix is singular or has the wrong shape")]
    SingularMatrix,
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
}

/// Exponent vector of a monomial `X₁^{e₁}⋯X_{d+1}^{e_{d+1}}`; `Ord` is lexicographic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zero(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        Self(e)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise maximum (the lcm of the two monomials).
    pub fn lcm(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// `self - other`, or `None` if `other` does not divide `self`.
    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }

    pub fn without(&self, var: usize) -> Exponent {
        let mut e = self.0.clone();
        e.remove(var);
        Exponent(e)
    }

    /// All exponents of total degree `degree` in `nvars` variables, ascending lex.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Exponent> {
        fn rec(nvars: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
            if nvars == 1 {
                prefix.push(degree);
                out.push(Exponent(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in 0..=degree {
                prefix.push(e);
                rec(nvars - 1, degree - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if degree == 0 {
                out.push(Exponent(Vec::new()));
            }
            return out;
        }
        rec(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
        out
    }
}

impl Add for &Exponent {
    type Output = Exponent;
    fn add(self, rhs: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A homogeneous polynomial; the zero form keeps its declared degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomogeneousForm<F> {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Exponent, F>,
}

impl<F: Scalar> HomogeneousForm<F> {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        Self { nvars, degree, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, value: F) -> Self {
        let mut f = Self::zero(nvars, 0);
        if !value.is_zero() {
            f.terms.insert(Exponent::zero(nvars), value);
        }
        f
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn monomial(exponent: Exponent, coefficient: F) -> Self {
        let nvars = exponent.len();
        let degree = exponent.degree();
        let mut f = Self::zero(nvars, degree);
        if !coefficient.is_zero() {
            f.terms.insert(exponent, coefficient);
        }
        f
    }

    pub fn variable(nvars: usize, var: usize) -> Self {
        Self::monomial(Exponent::unit(nvars, var), F::one())
    }

    /// Builds a form from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms(
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Exponent, F)>,
    ) -> Result<Self, PolyError> {
        let mut f = Self::zero(nvars, degree);
        for (e, c) in terms {
            if e.len() != nvars || e.degree() != degree {
                return Err(PolyError::BadExponent { exponent: e, degree, nvars });
            }
            f.add_term(e, c);
        }
        Ok(f)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &Exponent) -> F {
        self.terms.get(e).cloned().unwrap_or_else(F::zero)
    }

    /// The lex-minimal exponent with nonzero coefficient.
    pub fn leading(&self) -> Option<(&Exponent, &F)> {
        self.terms.iter().next()
    }

    pub(crate) fn add_term(&mut self, e: Exponent, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.degree);
        }
        Self {
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c.clone())).collect(),
        }
    }

    /// `self + c·other`, in place.
    pub fn add_scaled(&mut self, other: &Self, c: &F) {
        debug_assert_eq!(self.degree, other.degree);
        for (e, v) in &other.terms {
            self.add_term(e.clone(), v.clone() * c.clone());
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.compatible(other)?;
        let mut out = self.clone();
        out.add_scaled(other, &F::one());
        Ok(out)
    }

    fn compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VariableMismatch { expected: self.nvars, found: other.nvars });
        }
        if self.degree != other.degree {
            return Err(PolyError::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        Ok(())
    }

    /// Product of two forms; degrees add.
    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "forms live in different rings");
        let mut out = Self::zero(self.nvars, self.degree + other.degree);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea + eb, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = out.multiply(self);
        }
        out
    }

    /// Multiplies by a monomial.
    pub fn shift(&self, e: &Exponent) -> Self {
        Self {
            nvars: self.nvars,
            degree: self.degree + e.degree(),
            terms: self.terms.iter().map(|(x, c)| (x + e, c.clone())).collect(),
        }
    }

    /// Exact quotient by `X_var^power`, or `None` when some term is not divisible.
    pub fn divide_by_variable_power(&self, var: usize, power: u32) -> Option<Self> {
        if power > self.degree {
            return None;
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut v = e.0.clone();
            v[var] = v[var].checked_sub(power)?;
            terms.insert(Exponent(v), c.clone());
        }
        Some(Self { nvars: self.nvars, degree: self.degree - power, terms })
    }

    pub fn evaluate(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let mut sum = F::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e.entries()) {
                for _ in 0..k {
                    term = term * x.clone();
                }
            }
            sum = sum + term;
        }
        sum
    }

    /// `f(A·X)`: each variable `X_i` becomes the linear form `Σ_j A_ij X_j`.
    pub fn substitute_linear(&self, a: &Matrix<F>) -> Result<Self, PolyError> {
        let sub = LinearSubstitution::new(a)?;
        Ok(sub.apply(self))
    }

    /// Restriction to the hyperplane `X_var = 0`, as a form in one fewer variable.
    pub fn set_variable_zero(&self, var: usize) -> Result<Self, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::VariableOutOfRange { index: var, nvars: self.nvars });
        }
        Ok(Self {
            nvars: self.nvars - 1,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.entries()[var] == 0)
                .map(|(e, c)| (e.without(var), c.clone()))
                .collect(),
        })
    }

    pub fn map_coefficients<G: Scalar>(&self, f: impl Fn(&F) -> G) -> HomogeneousForm<G> {
        let mut out = HomogeneousForm::zero(self.nvars, self.degree);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }
}

/// A linear change of variables with cached powers of the image linear forms.
#[derive(Clone, Debug)]
pub struct LinearSubstitution<F> {
    images: Vec<HomogeneousForm<F>>,
    powers: Vec<std::cell::RefCell<Vec<HomogeneousForm<F>>>>,
}

impl<F: Scalar> LinearSubstitution<F> {
    pub fn new(a: &Matrix<F>) -> Result<Self, PolyError> {
        if !a.is_square() || a.determinant().is_zero() {
            return Err(PolyError::SingularMatrix);
        }
        let n = a.rows();
        let images: Vec<HomogeneousForm<F>> = (0..n)
            .map(|i| {
                let mut f = HomogeneousForm::zero(n, 1);
                for j in 0..n {
                    f.add_term(Exponent::unit(n, j), a[(i, j)].clone());
                }
                f
            })
            .collect();
        let powers = (0..n)
            .map(|_| std::cell::RefCell::new(vec![HomogeneousForm::one(n)]))
            .collect();
        Ok(Self { images, powers })
    }

    fn power(&self, var: usize, k: u32) -> HomogeneousForm<F> {
        let mut cache = self.powers[var].borrow_mut();
        while cache.len() <= k as usize {
            let next = cache.last().expect("nonempty").multiply(&self.images[var]);
            cache.push(next);
        }
        cache[k as usize].clone()
    }

    pub fn apply(&self, f: &HomogeneousForm<F>) -> HomogeneousForm<F> {
        assert_eq!(f.nvars, self.images.len(), "substitution size mismatch");
        let mut out = HomogeneousForm::zero(f.nvars, f.degree);
        for (e, c) in &f.terms {
            let mut img = HomogeneousForm::constant(f.nvars, c.clone());
            for (var, &k) in e.entries().iter().enumerate() {
                if k > 0 {
                    img = img.multiply(&self.power(var, k));
                }
            }
            out.add_scaled(&img, &F::one());
        }
        out
    }
}

pub fn multiply<F: Scalar>(f: &HomogeneousForm<F>, g: &HomogeneousForm<F>) -> HomogeneousForm<F> {
    f.multiply(g)
}

pub fn substitute_linear<F: Scalar>(
    f: &HomogeneousForm<F>,
    a: &Matrix<F>,
) -> Result<HomogeneousForm<F>, PolyError> {
    f.substitute_linear(a)
}

pub fn set_variable_zero<F: Scalar>(
    f: &HomogeneousForm<F>,
    var: usize,
) -> Result<HomogeneousForm<F>, PolyError> {
    f.set_variable_zero(var)
}

impl<F: Scalar> Add for &HomogeneousForm<F> {
    type Output = HomogeneousForm<F>;
    fn add(self, rhs: &HomogeneousForm<F>) -> HomogeneousForm<F> {
        self.checked_add(rhs).expect("incompatible forms")
    }
}

impl<F: Scalar> Sub for &HomogeneousForm<F> {
    type Output = HomogeneousForm<F>;
    fn sub(self, rhs: &HomogeneousForm<F>) -> HomogeneousForm<F> {
        self.compatible(rhs).expect("incompatible forms");
        let mut out = self.clone();
        out.add_scaled(rhs, &-F::one());
        out
    }
}

impl<F: Scalar> Neg for &HomogeneousForm<F> {
    type Output = HomogeneousForm<F>;
    fn neg(self) -> HomogeneousForm<F> {
        self.scale(&-F::one())
    }
}

impl<F: Scalar> Mul for &HomogeneousForm<F> {
    type Output = HomogeneousForm<F>;
    fn mul(self, rhs: &HomogeneousForm<F>) -> HomogeneousForm<F> {
        self.multiply(rhs)
    }
}

impl<F: fmt::Debug> fmt::Debug for HomogeneousForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<F: Scalar> fmt::Display for HomogeneousForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let mono: Vec<String> = e
                .entries()
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { format!("X{}", v + 1) } else { format!("X{}^{k}", v + 1) })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({c})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type Form = HomogeneousForm<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn mono(e: &[u32]) -> Form {
        Form::monomial(Exponent::new(e.to_vec()), q(1))
    }

    #[test]
    fn monomial_products() {
        assert_eq!(mono(&[1, 1, 0]).multiply(&mono(&[1, 0, 1])), mono(&[2, 1, 1]));
        let a = &mono(&[1, 0, 0]) + &mono(&[0, 1, 0]);
        let b = &mono(&[1, 0, 0]) - &mono(&[0, 1, 0]);
        assert_eq!(a.multiply(&b), &mono(&[2, 0, 0]) - &mono(&[0, 2, 0]));
    }

    #[test]
    fn identity_and_swap_substitutions() {
        let f = &mono(&[2, 0, 1]) + &mono(&[0, 1, 2]);
        assert_eq!(f.substitute_linear(&Matrix::identity(3)).unwrap(), f);
        let swap = Matrix::from_i64_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert_eq!(mono(&[1, 0, 0]).substitute_linear(&swap).unwrap(), mono(&[0, 1, 0]));
        let singular = Matrix::from_i64_rows(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        assert_eq!(f.substitute_linear(&singular), Err(PolyError::SingularMatrix));
    }

    #[test]
    fn restriction_to_coordinate_hyperplane() {
        assert!(mono(&[1, 1, 0]).set_variable_zero(0).unwrap().is_zero());
        let f = &mono(&[0, 2, 0]) + &mono(&[1, 0, 1]);
        assert_eq!(
            f.set_variable_zero(0).unwrap(),
            Form::monomial(Exponent::new(vec![2, 0]), q(1))
        );
    }

    #[test]
    fn exponents_of_degree_are_ascending_lex() {
        let all = Exponent::all_of_degree(3, 2);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[0], Exponent::new(vec![0, 0, 2]));
    }

    #[test]
    fn zero_form_keeps_degree() {
        let z = Form::zero(3, 4);
        assert!(z.is_zero());
        assert_eq!(z.degree(), 4);
        assert_eq!(z.multiply(&mono(&[1, 0, 0])).degree(), 5);
    }
}
