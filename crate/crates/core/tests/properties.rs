//! Randomized invariants, 200 cases per property with fixed seeds.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use okounkov::exactnum::lp::in_convex_hull;
use okounkov::exactnum::{hermite_normal_form, lattice_index, smith_normal_form, IntMatrix, LatticeIndex};
use okounkov::flagval::valuation;
use okounkov::monideal::{saturate, MonomialIdeal};
use okounkov::polyform::{Exponent, SpanBuilder};
use okounkov::{Flag, Form, Polytope, Rational, Scalar};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(seed: u64) -> Config {
    Config { cases: 200, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

/// A nonzero ternary form of the given degree with small integer coefficients.
fn form(degree: u32) -> impl Strategy<Value = Form> {
    let monomials = Exponent::all_of_degree(3, degree);
    let n = monomials.len();
    prop::collection::vec(-3i64..=3, n)
        .prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
        .prop_map(move |coeffs| {
            Form::from_terms(
                3,
                degree,
                monomials.iter().cloned().zip(coeffs.into_iter().map(q)).filter(|(_, c)| !c.is_zero()),
            )
            .unwrap()
        })
}

fn point(range: i64) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(-range..=range, 3).prop_map(|v| v.into_iter().map(q).collect())
}

proptest! {
    #![proptest_config(config(0x0a11))]

    #[test]
    fn valuation_is_additive(f in form(2), g in form(1), seed in 0u64..50) {
        let flag = Flag::random(2, seed);
        let nf = valuation(&f, &flag).unwrap();
        let ng = valuation(&g, &flag).unwrap();
        let nfg = valuation(&f.multiply(&g), &flag).unwrap();
        let sum: Vec<u32> = nf.iter().zip(&ng).map(|(a, b)| a + b).collect();
        prop_assert_eq!(nfg, sum);
    }

    #[test]
    fn substitution_matches_pointwise_evaluation(f in form(3), seed in 0u64..50, x in point(4)) {
        // Oracle: (f∘A)(x) = f(A·x).
        let flag = Flag::random(2, seed);
        let g = f.substitute_linear(flag.matrix()).unwrap();
        prop_assert_eq!(g.evaluate(&x), f.evaluate(&flag.matrix().mul_vec(&x)));
    }

    #[test]
    fn transformed_pivots_are_the_valuations(forms in prop::collection::vec(form(2), 1..5),
                                             mix in prop::collection::vec(-2i64..=2, 4),
                                             seed in 0u64..50) {
        let flag = Flag::random(2, seed);
        let mut builder = SpanBuilder::new(3, 2);
        for f in &forms {
            builder.insert(f).unwrap();
        }
        let span = builder.finish();
        let transformed = flag.transform_span(&span).unwrap();
        let pivots: BTreeSet<Vec<u32>> =
            transformed.pivots().map(|e| e.entries()[..2].to_vec()).collect();
        // One valuation per dimension.
        prop_assert_eq!(pivots.len(), span.dim());
        // Oracle: every nonzero combination has its valuation among the pivots.
        let mut combo = Form::zero(3, 2);
        for (f, c) in forms.iter().zip(&mix) {
            combo.add_scaled(f, &q(*c));
        }
        if !combo.is_zero() {
            prop_assert!(pivots.contains(&valuation(&combo, &flag).unwrap()));
        }
    }

    #[test]
    fn hull_agrees_with_lp_oracle(pts in prop::collection::vec(prop::collection::vec(-4i64..=4, 2), 1..9),
                                  probes in prop::collection::vec(prop::collection::vec(-5i64..=5, 2), 5)) {
        let pts: Vec<Vec<Rational>> = pts.into_iter().map(|p| p.into_iter().map(q).collect()).collect();
        let hull = Polytope::hull(2, &pts).unwrap();
        prop_assert!(hull.check_representation());
        for v in hull.vertices() {
            prop_assert!(pts.contains(v));
            let others: Vec<Vec<Rational>> = pts.iter().filter(|p| *p != v).cloned().collect();
            prop_assert!(!in_convex_hull(&others, v));
        }
        for p in pts.iter().chain(&probes.iter().map(|p| p.iter().map(|&x| q(x)).collect()).collect::<Vec<_>>()) {
            prop_assert_eq!(hull.contains_point(p, false).unwrap(), in_convex_hull(hull.vertices(), p));
        }
        let doubled = hull.scale(&q(2)).unwrap();
        prop_assert_eq!(doubled.volume(), q(4) * hull.volume());
    }

    #[test]
    fn hull_in_three_dimensions(pts in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..9),
                                probe in prop::collection::vec(-3i64..=3, 3)) {
        let pts: Vec<Vec<Rational>> = pts.into_iter().map(|p| p.into_iter().map(q).collect()).collect();
        let hull = Polytope::hull(3, &pts).unwrap();
        prop_assert!(hull.check_representation());
        let probe: Vec<Rational> = probe.into_iter().map(q).collect();
        prop_assert_eq!(hull.contains_point(&probe, false).unwrap(), in_convex_hull(&pts, &probe));
        for v in hull.vertices() {
            let others: Vec<Vec<Rational>> = pts.iter().filter(|p| *p != v).cloned().collect();
            prop_assert!(!in_convex_hull(&others, v));
        }
    }
}

fn ideal() -> impl Strategy<Value = MonomialIdeal> {
    prop::collection::vec(prop::collection::vec(0u32..=3, 3), 1..5)
        .prop_map(|gens| MonomialIdeal::new(3, gens.into_iter().map(Exponent::new)))
}

/// Brute force: `x^a` lies in the saturation iff `x^a·u ∈ I` for every monomial `u` of degree `n·max_deg`.
fn in_saturation_oracle(ideal: &MonomialIdeal, a: &Exponent) -> bool {
    let max_deg = ideal.generators().iter().map(Exponent::degree).max().unwrap_or(0);
    let big = 3 * max_deg;
    Exponent::all_of_degree(3, big).iter().all(|u| {
        let prod: Vec<u32> = a.entries().iter().zip(u.entries()).map(|(x, y)| x + y).collect();
        ideal.contains(&Exponent::new(prod))
    })
}

proptest! {
    #![proptest_config(config(0x5a7))]

    #[test]
    fn saturation_is_idempotent_and_matches_brute_force(i in ideal()) {
        let sat = saturate(&i);
        prop_assert_eq!(saturate(&sat), sat.clone());
        prop_assert!(sat.contains_ideal(&i));
        for deg in 0..=4 {
            for a in Exponent::all_of_degree(3, deg) {
                prop_assert_eq!(sat.contains(&a), in_saturation_oracle(&i, &a), "monomial {:?}", a);
            }
        }
    }
}

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-6i64..=6, rows * cols)
        .prop_map(move |v| IntMatrix::new(rows, cols, v.into_iter().map(BigInt::from).collect()))
}

fn is_unimodular(m: &IntMatrix) -> bool {
    m.determinant().abs().is_one()
}

/// gcd of all `r × r` minors of a `r × c` matrix with `r ≤ c`.
fn maximal_minor_gcd(m: &IntMatrix) -> BigInt {
    use num_integer::Integer;
    let (r, c) = (m.rows(), m.cols());
    let mut g = BigInt::zero();
    let mut cols: Vec<usize> = (0..r).collect();
    loop {
        let sub: Vec<Vec<BigInt>> = (0..r).map(|i| cols.iter().map(|&j| m[(i, j)].clone()).collect()).collect();
        g = g.gcd(&IntMatrix::from_rows(&sub, r).determinant());
        let Some(pos) = (0..r).rev().find(|&i| cols[i] < c - r + i) else {
            return g;
        };
        cols[pos] += 1;
        for i in pos + 1..r {
            cols[i] = cols[i - 1] + 1;
        }
    }
}

proptest! {
    #![proptest_config(config(0x4e7f))]

    #[test]
    fn hermite_form_is_unimodular_and_echelon(m in int_matrix(3, 4)) {
        let (h, u) = hermite_normal_form(&m);
        prop_assert!(is_unimodular(&u));
        prop_assert_eq!(&u * &m, h.clone());
        let mut last_pivot: Option<usize> = None;
        for i in 0..h.rows() {
            match (0..h.cols()).find(|&j| !h[(i, j)].is_zero()) {
                Some(j) => {
                    prop_assert!(last_pivot.is_none_or(|p| j > p));
                    prop_assert!(h[(i, j)].is_positive());
                    for k in 0..i {
                        prop_assert!(!h[(k, j)].is_negative() && h[(k, j)] < h[(i, j)]);
                    }
                    last_pivot = Some(j);
                }
                None => last_pivot = Some(usize::MAX - 1),
            }
        }
    }

    #[test]
    fn smith_form_is_unimodular_and_divisible(m in int_matrix(3, 4)) {
        let snf = smith_normal_form(&m);
        prop_assert!(is_unimodular(&snf.left));
        prop_assert!(is_unimodular(&snf.right));
        prop_assert_eq!(&(&snf.left * &m) * &snf.right, snf.diagonal.clone());
        for w in snf.invariant_factors.windows(2) {
            prop_assert!(w[1].is_zero() || (&w[1] % &w[0]).is_zero());
        }
        // Oracle: the product of the invariant factors is the gcd of the maximal minors.
        let product: BigInt = snf.invariant_factors.iter().product();
        prop_assert_eq!(product, maximal_minor_gcd(&m));
    }

    #[test]
    fn lattice_index_of_a_square_basis_is_its_determinant(m in int_matrix(3, 3)) {
        let rows = m.row_vecs();
        let det = m.determinant().abs();
        let expected = if det.is_zero() { LatticeIndex::Infinite } else { LatticeIndex::Finite(det) };
        prop_assert_eq!(lattice_index(&rows, 3), expected);
    }
}
