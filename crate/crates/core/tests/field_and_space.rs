use proptest::prelude::*;
use wonderful::counting;
use wonderful::projspace::enumerate_subspaces;
use wonderful::{Ambient, Field, FieldEmbedding, Lattice, Linear};

const ORDERS: [u64; 9] = [2, 3, 4, 5, 7, 8, 9, 16, 27];

fn gauss_pascal(m: u64, k: u64, q: u64) -> u64 {
    if k == 0 || k == m {
        return 1;
    }
    if k > m {
        return 0;
    }
    gauss_pascal(m - 1, k - 1, q) + q.pow(k as u32) * gauss_pascal(m - 1, k, q)
}

fn field_and_triple() -> impl Strategy<Value = (Field, u32, u32, u32)> {
    prop::sample::select(ORDERS.to_vec()).prop_flat_map(|q| {
        let f = Field::with_order(q).unwrap();
        (Just(f), 0..q as u32, 0..q as u32, 0..q as u32)
    })
}

proptest! {
    #[test]
    fn field_axioms((f, a, b, c) in field_and_triple()) {
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        } else {
            prop_assert_eq!(f.inv(a), None);
        }
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative((f, a, b, _c) in field_and_triple()) {
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
    }

    #[test]
    fn meet_and_join_dimensions(q in prop::sample::select(vec![2u64, 3]), i in 0usize..10_000, j in 0usize..10_000) {
        let lat = Lattice::for_params(q, 3).unwrap();
        let (a, b) = (lat.get(i % lat.len()), lat.get(j % lat.len()));
        // vector-space dimensions, one more than projective ones
        let vdim = |l: &Linear| match l {
            Linear::Empty => 0,
            Linear::Proper(s) => s.dim() + 1,
            Linear::Whole => 4,
        };
        let m = a.meet(b).unwrap();
        let s = a.join(b).unwrap();
        prop_assert_eq!(vdim(&m) + vdim(&s), a.dim() + b.dim() + 2);
        if let Linear::Proper(m) = &m {
            prop_assert!(m.is_contained_in(a).unwrap() && m.is_contained_in(b).unwrap());
        }
    }

    #[test]
    fn duality_reverses_containment(i in 0usize..10_000, j in 0usize..10_000) {
        let lat = Lattice::for_params(3, 3).unwrap();
        let (a, b) = (lat.get(i % lat.len()), lat.get(j % lat.len()));
        prop_assert_eq!(a.is_contained_in(b).unwrap(), b.dual().is_contained_in(&a.dual()).unwrap());
        prop_assert_eq!(a.dual().dual(), a.clone());
        prop_assert_eq!(a.dual().dim(), 3 - 1 - a.dim());
    }
}

#[test]
fn subspace_counts_match_q_pascal() {
    for n in 1..=3usize {
        for q in [2u64, 3, 4, 5] {
            let amb = Ambient::new(n, Field::with_order(q).unwrap()).unwrap();
            for d in 0..n {
                let got = enumerate_subspaces(&amb, d).unwrap().len() as u64;
                let want = gauss_pascal(n as u64 + 1, d as u64 + 1, q);
                assert_eq!(got, want, "n={n} q={q} d={d}");
                assert_eq!(counting::gaussian_count(n as u64, d as u64, q), want.into());
            }
        }
    }
}

#[test]
fn lattice_is_sorted_by_dimension_and_closed_under_duality() {
    let lat = Lattice::for_params(2, 3).unwrap();
    assert_eq!(lat.len(), 15 + 35 + 15);
    let dims: Vec<usize> = lat.subspaces().iter().map(|s| s.dim()).collect();
    assert!(dims.windows(2).all(|w| w[0] <= w[1]));
    for s in lat.subspaces() {
        assert!(lat.index_of(&s.dual()).is_some());
    }
}

#[test]
fn embedding_is_a_ring_homomorphism() {
    for (q, m) in [(2u64, 4u32), (3, 2), (5, 2), (2, 6)] {
        let k = Field::with_order(q).unwrap();
        let big = Field::new(u64::from(k.characteristic()), k.degree() * m).unwrap();
        let emb = FieldEmbedding::new(&k, &big).unwrap();
        for a in 0..k.order() {
            for b in 0..k.order() {
                assert_eq!(
                    emb.embed_raw(k.add(a, b)),
                    big.add(emb.embed_raw(a), emb.embed_raw(b))
                );
                assert_eq!(
                    emb.embed_raw(k.mul(a, b)),
                    big.mul(emb.embed_raw(a), emb.embed_raw(b))
                );
            }
        }
    }
}

#[test]
fn embedding_needs_a_prime_source() {
    let k = Field::with_order(4).unwrap();
    let big = Field::with_order(16).unwrap();
    assert!(FieldEmbedding::new(&k, &big).is_err());
    let three = Field::with_order(3).unwrap();
    assert!(FieldEmbedding::new(&three, &big).is_err());
}
