use motivic_core::arrangements::{
    complement_decomposition, dual_decomposition, flats, infinity_decomposition, multiplicities, Arrangement,
    ArrangementError, Hyperplane,
};
use motivic_core::mumford::{Atom, MotiveExpression};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use std::collections::BTreeMap;

const CASES: u32 = 1000;

/// Oracle: rank over `ℚ` by plain Gaussian elimination.
fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for k in 0..cols {
                    let v = &m[i][k] - &(&f * &m[r][k]);
                    m[i][k] = v;
                }
            }
        }
        r += 1;
    }
    r
}

fn oracle_codim(a: &Arrangement, subset: &[usize]) -> Option<usize> {
    let normals: Vec<Vec<BigInt>> = subset.iter().map(|&i| a.hyperplanes[i].normal.clone()).collect();
    let augmented: Vec<Vec<BigInt>> = subset
        .iter()
        .map(|&i| a.hyperplanes[i].normal.iter().chain([&a.hyperplanes[i].offset]).cloned().collect())
        .collect();
    let (r, ra) = (rank(&normals), rank(&augmented));
    (r == ra).then_some(r)
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

fn arrangement() -> impl Strategy<Value = Arrangement> {
    (1usize..=4, 0usize..=6).prop_flat_map(|(d, n)| {
        prop::collection::vec((prop::collection::vec(-2i64..=2, d), -2i64..=2), n).prop_map(move |hs| {
            let mut kept: Vec<Hyperplane> = Vec::new();
            for (normal, b) in hs {
                let h = Hyperplane::new(&normal, b);
                let mut trial = kept.clone();
                trial.push(h);
                if Arrangement::new(d, trial.clone()).is_ok() {
                    kept = trial;
                }
            }
            Arrangement::new(d, kept).unwrap()
        })
    })
}

fn permuted(a: &Arrangement, hyper: &[usize], coords: &[usize], scale: &[i64]) -> Arrangement {
    let hyperplanes = hyper
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let h = &a.hyperplanes[i];
            let s = BigInt::from(scale[k % scale.len()]);
            Hyperplane { normal: coords.iter().map(|&c| &h.normal[c] * &s).collect(), offset: &h.offset * &s }
        })
        .collect();
    Arrangement::new(a.dimension, hyperplanes).unwrap()
}

fn negated(e: &MotiveExpression) -> MotiveExpression {
    let mut out = MotiveExpression::zero();
    for (a, m) in e.atoms() {
        out.push(Atom::tate(-a.q, -a.p), m);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn codimensions_match_rank_oracle(a in arrangement()) {
        let f = flats(&a).unwrap();
        let n = a.len();
        for mask in 0usize..1 << n {
            let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            prop_assert_eq!(f.codim(&subset), oracle_codim(&a, &subset), "subset {:?}", subset);
        }
    }

    #[test]
    fn outputs_are_permutation_invariant(
        (a, hyper, coords) in arrangement().prop_flat_map(|a| {
            let (n, d) = (a.len(), a.dimension);
            (Just(a), Just((0..n).collect::<Vec<_>>()).prop_shuffle(), Just((0..d).collect::<Vec<_>>()).prop_shuffle())
        }),
        scale in prop::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 1..4),
    ) {
        let b = permuted(&a, &hyper, &coords, &scale);
        prop_assert_eq!(multiplicities(&a).unwrap(), multiplicities(&b).unwrap());
        // error payloads name hyperplanes by index, so only success is compared
        prop_assert_eq!(complement_decomposition(&a).ok(), complement_decomposition(&b).ok());
        prop_assert_eq!(infinity_decomposition(&a).ok(), infinity_decomposition(&b).ok());
        prop_assert_eq!(dual_decomposition(&a).ok(), dual_decomposition(&b).ok());
    }

    #[test]
    fn dual_negates_complement(a in arrangement()) {
        if let Ok(dual) = dual_decomposition(&a) {
            prop_assert_eq!(negated(&dual), complement_decomposition(&a).unwrap());
        }
    }

    #[test]
    fn multiplicities_count_consistent_subsets(a in arrangement()) {
        let m = multiplicities(&a).unwrap();
        prop_assert_eq!(m.get(&0), Some(&1));
        let total: u64 = m.values().sum();
        prop_assert_eq!(total as usize, flats(&a).unwrap().consistent().count());
        prop_assert!(m.keys().all(|&c| c <= a.dimension));
    }
}

#[test]
fn coordinate_arrangements() {
    for d in 0..=6 {
        for e in 0..=d {
            let a = Arrangement::coordinate(e, d);
            let m = multiplicities(&a).unwrap();
            let expected: BTreeMap<usize, u64> = (0..=e).map(|n| (n, binomial(e, n))).collect();
            assert_eq!(m, expected, "e = {e}, d = {d}");
        }
    }
}

#[test]
fn non_nowhere_dense_is_rejected() {
    let a = Arrangement::new(2, vec![Hyperplane::new(&[1, 0], 0), Hyperplane::new(&[0, 1], 0), Hyperplane::new(&[1, 1], 0)])
        .unwrap();
    assert_eq!(
        complement_decomposition(&a),
        Err(ArrangementError::NotNowhereDense { smaller: vec![0, 1], larger: vec![0, 1, 2] })
    );
    assert!(matches!(infinity_decomposition(&a), Err(ArrangementError::NotNormalCrossing { .. })));
    assert_eq!(oracle_codim(&a, &[0, 1, 2]), Some(2));
}
