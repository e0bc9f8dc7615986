use proptest::prelude::*;

use magnus_core::aut::FreeGroupEndo;
use magnus_core::johnson::Johnson;
use magnus_core::json::{SeriesJson, TensorJson};
use magnus_core::random::{library, random_expansion, random_product, trial_rng};
use magnus_core::{AlgebraMap, Letter, MagnusExpansion, Scalar, Tensor, TruncatedSeries, Word};

const RANK: usize = 3;

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..RANK, any::<bool>()), 0..max_len).prop_map(|ls| {
        Word::from_letters(RANK, ls.into_iter().map(|(g, inv)| Letter::new(g, inv))).unwrap()
    })
}

fn tensor(degree: usize) -> impl Strategy<Value = Tensor> {
    prop::collection::vec(
        (prop::collection::vec(0..RANK, degree), -5i64..=5, 1i64..=4),
        0..5,
    )
    .prop_map(move |terms| {
        let terms = terms
            .into_iter()
            .map(|(idx, p, q)| (idx, Scalar::ratio(p, q).unwrap()));
        Tensor::from_terms(RANK, degree, terms).unwrap()
    })
}

fn series(trunc: usize, constant: i64) -> impl Strategy<Value = TruncatedSeries> {
    let parts: Vec<_> = (1..=trunc).map(tensor).collect();
    parts.prop_map(move |mut ts| {
        ts.push(Tensor::scalar(RANK, Scalar::from_int(constant)));
        TruncatedSeries::from_tensors(RANK, trunc, ts).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_product_is_associative(a in series(4, 2), b in series(4, -1), c in series(4, 0)) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn series_distributes(a in series(3, 1), b in series(3, 3), c in series(3, 0)) {
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn series_inverse(a in series(4, 1)) {
        let inv = a.invert().unwrap();
        prop_assert!(a.mul(&inv).unwrap().is_one());
        prop_assert!(inv.mul(&a).unwrap().is_one());
    }

    #[test]
    fn word_group_laws(a in word(12), b in word(12), c in word(12)) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(a.mul(&a.inv()).unwrap().is_identity());
        prop_assert_eq!(a.inv().inv(), a);
    }

    #[test]
    fn words_stay_reduced(a in word(20)) {
        for pair in a.letters().windows(2) {
            prop_assert_ne!(pair[0], pair[1].inv());
        }
    }

    #[test]
    fn word_text_roundtrip(a in word(15)) {
        prop_assert_eq!(Word::parse(&a.render(), RANK).unwrap(), a);
    }

    #[test]
    fn scalar_text_roundtrip(p in -1000i64..1000, q in 1i64..50) {
        let s = Scalar::ratio(p, q).unwrap();
        prop_assert_eq!(s.to_string().parse::<Scalar>().unwrap(), s);
    }

    #[test]
    fn tensor_json_roundtrip(t in tensor(3)) {
        let text = serde_json::to_string(&TensorJson::from(&t)).unwrap();
        let back: TensorJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(Tensor::try_from(&back).unwrap(), t);
    }

    #[test]
    fn series_json_roundtrip(s in series(3, 1)) {
        let j = SeriesJson::from(&s);
        prop_assert_eq!(TruncatedSeries::try_from(&j).unwrap(), s);
    }

    #[test]
    fn expansion_is_multiplicative(seed in any::<u64>(), a in word(8), b in word(8)) {
        let theta = random_expansion(&mut trial_rng(seed, 0), RANK, 4, 2).unwrap();
        let ab = a.mul(&b).unwrap();
        let lhs = theta.evaluate(&ab).unwrap();
        let rhs = theta.evaluate(&a).unwrap().mul(&theta.evaluate(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(theta.evaluate(&a.mul(&a.inv()).unwrap()).unwrap().is_one());
    }

    #[test]
    fn transition_inverts(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 1);
        let a = random_expansion(&mut rng, RANK, 4, 2).unwrap();
        let b = random_expansion(&mut rng, RANK, 4, 2).unwrap();
        let u = MagnusExpansion::transition(&a, &b).unwrap();
        let v = MagnusExpansion::transition(&b, &a).unwrap();
        prop_assert_eq!(u.invert().unwrap(), v.clone());
        prop_assert!(u.compose(&v).unwrap().is_identity());
        let id = AlgebraMap::identity(RANK, 4).unwrap();
        prop_assert_eq!(u.compose(&u.invert().unwrap()).unwrap(), id);
    }

    #[test]
    fn automorphism_inverse_roundtrip(seed in any::<u64>(), g in word(10)) {
        let lib = library(&["nielsen", "magnus-K"], RANK).unwrap();
        let phi = random_product(&mut trial_rng(seed, 2), &lib, 4).unwrap();
        let inv = phi.inverse().unwrap();
        prop_assert_eq!(inv.apply(&phi.apply(&g).unwrap()).unwrap(), g.clone());
        prop_assert!(phi.compose(&inv).unwrap().is_identity());
        prop_assert_eq!(phi.apply(&g.inv()).unwrap(), phi.apply(&g).unwrap().inv());
    }

    #[test]
    fn johnson_of_identity_vanishes(seed in any::<u64>()) {
        let theta = random_expansion(&mut trial_rng(seed, 3), RANK, 4, 2).unwrap();
        let j = Johnson::new(&theta).unwrap();
        prop_assert!(j.total(&FreeGroupEndo::identity(RANK)).unwrap().is_identity());
    }
}
