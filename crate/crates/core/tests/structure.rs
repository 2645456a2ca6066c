use gkdim::arith::{int, Rational};
use gkdim::fdalg::{close_to_fdalg, decompose_element, wedderburn_complement, FiniteDimAlgebra};
use gkdim::matrix::Matrix;
use gkdim::pipeline::{enumerate_words, run_pipeline, PipelineConfig};
use gkdim::presentation::AlgebraPresentation;
use proptest::prelude::*;

fn upper(d: usize, v: &[i64]) -> Matrix<Rational> {
    let mut k = 0;
    let rows = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if j < i {
                        int(0)
                    } else {
                        k += 1;
                        int(v[k - 1])
                    }
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows).unwrap()
}

/// Unipotent lower-triangular conjugator and its inverse.
fn conjugator(d: usize, v: &[i64]) -> (Matrix<Rational>, Matrix<Rational>) {
    let ring = ();
    let mut p = Matrix::identity(d, &ring);
    let mut k = 0;
    for i in 0..d {
        for j in 0..i {
            p.set(i, j, int(v[k]));
            k += 1;
        }
    }
    let inv = p.inverse(&ring).unwrap();
    (p, inv)
}

fn conjugated_upper_triangular() -> impl Strategy<Value = AlgebraPresentation<Rational>> {
    (2usize..=3).prop_flat_map(|d| {
        let n = d * (d + 1) / 2;
        (
            prop::collection::vec(prop::collection::vec(-2i64..=2, n), 1..=3),
            prop::collection::vec(-2i64..=2, d * (d - 1) / 2),
        )
            .prop_map(move |(gens, c)| {
                let (p, pi) = conjugator(d, &c);
                let gens = gens.iter().map(|g| p.mul(&upper(d, g)).mul(&pi)).collect();
                AlgebraPresentation::new("A", (), d, gens).unwrap()
            })
    })
}

fn in_span(basis: &[Matrix<Rational>], x: &Matrix<Rational>) -> bool {
    if x.is_zero() {
        return true;
    }
    let mut all = basis.to_vec();
    all.push(x.clone());
    gkdim::span::independent_subset(&all).unwrap().len() == gkdim::span::independent_subset(basis).unwrap().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decomposition_invariants(p in conjugated_upper_triangular()) {
        let a = close_to_fdalg(&p, 10).unwrap();
        let w = wedderburn_complement(&a, 0).unwrap();
        prop_assert_eq!(w.complement.len() + w.radical.len(), a.dim());
        for g in &p.generators {
            let (b, n) = decompose_element(&a, &w, g).unwrap();
            prop_assert_eq!(b.add(&n), g.clone());
            prop_assert!(in_span(&w.complement, &b));
            prop_assert!(in_span(&w.radical, &n));
        }
        let one = w.idempotents.iter().fold(Matrix::zero(p.size, &()), |acc, e| acc.add(e));
        prop_assert_eq!(one, Matrix::identity(p.size, &()));
        for e in &w.idempotents {
            prop_assert!(w.complement.iter().all(|b| b.commutes_with(e)));
        }
    }

    #[test]
    fn pipeline_over_rationals_gives_finite_d(p in conjugated_upper_triangular()) {
        let run = run_pipeline(&p, &PipelineConfig::default()).unwrap();
        prop_assert!(run.stage2.t_generators.is_empty());
        prop_assert_eq!(run.report.d_estimate.integer_value(), Some(0));
        prop_assert!(run.report.integral);
        prop_assert!(run.report.exact_checks_pass());
    }
}

#[test]
fn single_idempotent_without_radical_gives_one_word() {
    let id = Matrix::<Rational>::identity(2, &());
    let words = enumerate_words::<Rational>(&[], &[id], 1, 10).unwrap();
    assert_eq!(words.len(), 1);
    assert_eq!(words[0].text(), "e0");
}

#[test]
fn word_cap_is_enforced() {
    let ring = ();
    let e = Matrix::<Rational>::identity(4, &ring);
    let nil: Vec<Matrix<Rational>> = (0..3).map(|i| Matrix::unit(4, i, i + 1, &ring)).collect();
    assert!(enumerate_words(&nil, &[e], 4, 5).is_err());
}

#[test]
fn fdalg_from_spanning_set_requires_identity() {
    let e12 = Matrix::<Rational>::unit(2, 0, 1, &());
    assert!(FiniteDimAlgebra::from_spanning_set("n", (), 2, &[e12]).is_err());
}
