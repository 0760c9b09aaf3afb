//! Pivots of substituted spans, computed fraction-free over ℤ on dense coefficient vectors.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Exponent, HomogeneousForm, PivotEnd, PolyError};
use crate::exactnum::Matrix;
use crate::scalar::{numer_denom, Scalar};

/// Dense positions of the monomials of each degree, in ascending lex order.
struct Monomials {
    nvars: usize,
    lists: Vec<Vec<Exponent>>,
    positions: Vec<HashMap<Exponent, usize>>,
}

impl Monomials {
    fn new(nvars: usize) -> Self {
        Self { nvars, lists: Vec::new(), positions: Vec::new() }
    }

    fn ensure(&mut self, degree: u32) {
        while self.lists.len() <= degree as usize {
            let list = Exponent::all_of_degree(self.nvars, self.lists.len() as u32);
            self.positions.push(list.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect());
            self.lists.push(list);
        }
    }
}

/// Images `∏ ℓ_i^{e_i}` of monomials under an integer substitution, memoized along a chain.
struct Images {
    rows: Vec<Vec<BigInt>>,
    monomials: Monomials,
    memo: HashMap<Exponent, Vec<BigInt>>,
}

impl Images {
    fn image(&mut self, e: &Exponent) -> Vec<BigInt> {
        if let Some(v) = self.memo.get(e) {
            return v.clone();
        }
        let degree = e.degree();
        self.monomials.ensure(degree);
        let out = match e.entries().iter().rposition(|&k| k > 0) {
            None => vec![BigInt::one()],
            Some(var) => {
                let mut lower = e.entries().to_vec();
                lower[var] -= 1;
                let prev = self.image(&Exponent::new(lower));
                self.times_linear(&prev, degree - 1, var)
            }
        };
        self.memo.insert(e.clone(), out.clone());
        out
    }

    fn times_linear(&self, v: &[BigInt], degree: u32, var: usize) -> Vec<BigInt> {
        let source = &self.monomials.lists[degree as usize];
        let target = &self.monomials.positions[degree as usize + 1];
        let mut out = vec![BigInt::zero(); target.len()];
        let n = self.monomials.nvars;
        for (c, e) in v.iter().zip(source) {
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                let a = &self.rows[var][j];
                if a.is_zero() {
                    continue;
                }
                let mut shifted = e.entries().to_vec();
                shifted[j] += 1;
                out[target[&Exponent::new(shifted)]] += c * a;
            }
        }
        out
    }
}

fn content_normalize(row: &mut [BigInt], lead: usize) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
    if row[lead].is_negative() {
        for x in row.iter_mut() {
            *x = -&*x;
        }
    }
}

/// Pivot exponents of `span{ f(A·X) : f ∈ forms }`, the same set
/// [`super::pivot_exponents`] returns for the substituted forms.
pub fn substituted_pivots<'a, F: Scalar>(
    forms: impl IntoIterator<Item = &'a HomogeneousForm<F>>,
    a: &Matrix<F>,
    nvars: usize,
    degree: u32,
    end: PivotEnd,
) -> Result<BTreeSet<Exponent>, PolyError> {
    if !a.is_square() || a.rows() != nvars || a.determinant().is_zero() {
        return Err(PolyError::SingularMatrix);
    }
    // Scaling A by a constant scales each substituted form of one degree uniformly.
    let denominators = a.entries().iter().map(|x| numer_denom(x).1);
    let scale = denominators.fold(BigInt::one(), |l, d| l.lcm(&d));
    let rows: Vec<Vec<BigInt>> = (0..nvars)
        .map(|i| {
            a.row(i)
                .iter()
                .map(|x| {
                    let (n, d) = numer_denom(x);
                    n * (&scale / d)
                })
                .collect()
        })
        .collect();
    let mut images = Images { rows, monomials: Monomials::new(nvars), memo: HashMap::new() };
    images.monomials.ensure(degree);
    let width = images.monomials.lists[degree as usize].len();
    let lead_of = |row: &[BigInt]| match end {
        PivotEnd::Min => row.iter().position(|x| !x.is_zero()),
        PivotEnd::Max => row.iter().rposition(|x| !x.is_zero()),
    };

    let mut pivots: HashMap<usize, Vec<BigInt>> = HashMap::new();
    for f in forms {
        if f.nvars() != nvars {
            return Err(PolyError::VariableMismatch { expected: nvars, found: f.nvars() });
        }
        if f.degree() != degree {
            return Err(PolyError::DegreeMismatch { expected: degree, found: f.degree() });
        }
        let common = f.terms().fold(BigInt::one(), |l, (_, c)| l.lcm(&numer_denom(c).1));
        let mut row = vec![BigInt::zero(); width];
        for (e, c) in f.terms() {
            let (n, d) = numer_denom(c);
            let weight = n * (&common / d);
            for (slot, x) in row.iter_mut().zip(images.image(e)) {
                if !x.is_zero() {
                    *slot += &weight * x;
                }
            }
        }
        while let Some(lead) = lead_of(&row) {
            let Some(pivot) = pivots.get(&lead) else {
                content_normalize(&mut row, lead);
                pivots.insert(lead, row);
                break;
            };
            let g = row[lead].gcd(&pivot[lead]);
            let (p, c) = (&pivot[lead] / &g, &row[lead] / &g);
            for (x, y) in row.iter_mut().zip(pivot) {
                if !y.is_zero() {
                    *x = &*x * &p - &c * y;
                } else if !p.is_one() {
                    *x *= &p;
                }
            }
            if let Some(next) = lead_of(&row) {
                content_normalize(&mut row, next);
            }
        }
    }
    let list = &images.monomials.lists[degree as usize];
    Ok(pivots.into_keys().map(|i| list[i].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyform::{pivot_exponents, LinearSubstitution};
    use crate::Rational;

    #[test]
    fn agrees_with_rational_elimination_for_fractional_matrices() {
        let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
        let a = Matrix::from_rows(vec![
            vec![q(1, 2), q(-3, 1), q(2, 3)],
            vec![q(0, 1), q(5, 4), q(-1, 1)],
            vec![q(7, 1), q(1, 1), q(1, 5)],
        ]);
        let sub = LinearSubstitution::new(&a).unwrap();
        let forms: Vec<HomogeneousForm<Rational>> = Exponent::all_of_degree(3, 4)
            .into_iter()
            .step_by(3)
            .map(|e| HomogeneousForm::monomial(e, q(2, 7)))
            .collect();
        for end in [PivotEnd::Min, PivotEnd::Max] {
            let expected = pivot_exponents(forms.iter().map(|f| sub.apply(f)), end);
            assert_eq!(substituted_pivots(&forms, &a, 3, 4, end).unwrap(), expected);
        }
    }
}
