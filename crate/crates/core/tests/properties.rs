use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use hassett_lab::arith;
use hassett_lab::conditions::{self, PellKind, DEFAULT_A_BOUND};
use hassett_lab::family::{self, FamilyWitness};
use hassett_lab::lattice::{self, GramMatrix};
use hassett_lab::motive;

/// Exact rational LDLᵀ: positive definite iff every pivot is positive.
fn ldl_positive_definite(m: &[Vec<i64>]) -> bool {
    #[derive(Clone)]
    struct Q(BigInt, BigInt);
    fn norm(n: BigInt, d: BigInt) -> Q {
        let g = n.gcd(&d);
        let (mut n, mut d) = (n / &g, d / g);
        if d < BigInt::from(0) {
            n = -n;
            d = -d;
        }
        Q(n, d)
    }
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .map(|r| r.iter().map(|&x| Q(BigInt::from(x), BigInt::from(1))).collect())
        .collect();
    for k in 0..n {
        let p = a[k][k].clone();
        if p.0 <= BigInt::from(0) {
            return false;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                // a[i][j] -= a[i][k] * a[k][j] / p
                let Q(ref an, ref ad) = a[i][j];
                let Q(ref xn, ref xd) = a[i][k];
                let Q(ref yn, ref yd) = a[k][j];
                let num = xn * yn * &p.1;
                let den = xd * yd * &p.0;
                a[i][j] = norm(an * &den - &num * ad, ad * den);
            }
        }
    }
    true
}

fn symmetric(max_rank: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rank).prop_flat_map(move |n| {
        prop::collection::vec(-bound..=bound, n * (n + 1) / 2).prop_map(move |vals| {
            let mut m = vec![vec![0; n]; n];
            let mut it = vals.into_iter();
            for i in 0..n {
                for j in i..n {
                    let v = it.next().unwrap();
                    m[i][j] = v;
                    m[j][i] = v;
                }
            }
            m
        })
    })
}

fn near_positive(max_rank: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    // AᵀA + small perturbation lands near the positive definite boundary often
    (1..=max_rank).prop_flat_map(|n| {
        (prop::collection::vec(-3i64..=3, n * n), prop::collection::vec(-1i64..=1, n)).prop_map(move |(a, eps)| {
            let mut m = vec![vec![0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    m[i][j] = (0..n).map(|k| a[k * n + i] * a[k * n + j]).sum();
                }
                m[i][i] += eps[i];
            }
            m
        })
    })
}

fn admissible() -> impl Strategy<Value = u64> {
    (2u64..100_000).prop_flat_map(|k| prop::sample::select(vec![6 * k, 6 * k + 2]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn factorization_round_trips(n in 1u64..(1u64 << 63)) {
        let f = arith::factorize(n).unwrap();
        prop_assert!(f.is_valid());
        prop_assert_eq!(f.product(), Some(n));
        for p in f.primes() {
            prop_assert!(arith::is_prime(p));
        }
    }

    #[test]
    fn factorization_of_products(a in 2u64..(1 << 31), b in 2u64..(1 << 31)) {
        let fa = arith::factorize(a).unwrap();
        let fb = arith::factorize(b).unwrap();
        let fab = arith::factorize(a * b).unwrap();
        for p in fab.primes() {
            prop_assert_eq!(fab.exponent_of(p), fa.exponent_of(p) + fb.exponent_of(p));
        }
    }

    #[test]
    fn sylvester_matches_rational_ldl(m in symmetric(6, 6)) {
        let g = GramMatrix::new(m.clone()).unwrap();
        prop_assert_eq!(lattice::is_positive_definite(&g), ldl_positive_definite(&m));
    }

    #[test]
    fn sylvester_matches_rational_ldl_near_boundary(m in near_positive(5)) {
        let g = GramMatrix::new(m.clone()).unwrap();
        prop_assert_eq!(lattice::is_positive_definite(&g), ldl_positive_definite(&m));
    }

    #[test]
    fn det_is_multiplicative_on_direct_sums(a in symmetric(4, 9), b in symmetric(4, 9)) {
        let ga = GramMatrix::new(a).unwrap();
        let gb = GramMatrix::new(b).unwrap();
        let s = ga.direct_sum(&gb);
        prop_assert_eq!(lattice::det(&s), lattice::det(&ga) * lattice::det(&gb));
        prop_assert_eq!(
            lattice::is_positive_definite(&s),
            lattice::is_positive_definite(&ga) && lattice::is_positive_definite(&gb)
        );
    }

    #[test]
    fn simultaneous_gram_of_tail_multisets(picks in prop::collection::vec(0usize..40, 0..19)) {
        let tails: Vec<u64> = family::tail_stream().take(40).collect();
        let mut discs = vec![14];
        discs.extend(picks.iter().map(|&i| tails[i]));
        let g = lattice::simultaneous_gram(&discs).unwrap();
        prop_assert_eq!(g.rank(), discs.len() + 1);
        prop_assert!(lattice::is_positive_definite(&g));
        for (i, &d) in discs.iter().enumerate() {
            prop_assert_eq!(lattice::sublattice_discriminant(&g, i + 1).unwrap(), BigInt::from(d));
        }
    }

    #[test]
    fn profiles_are_coherent(d in 1u64..200_000) {
        let p = conditions::profile(d, 20).unwrap();
        prop_assert!(p.certificates_verify());
        prop_assert_eq!(p.admissible, d >= 8 && (d % 6 == 0 || d % 6 == 2));
        if p.has_associated_k3 || p.tail.is_some() || p.bulles.is_some() {
            prop_assert!(p.admissible);
        }
        if let Some(t) = p.tail {
            prop_assert_eq!(6 * t.m * t.m + t.offset, d);
        }
        if let Some(f) = p.fano_hilb2 {
            let a1 = conditions::addington_certificate(d, 1).unwrap();
            prop_assert_eq!(a1.certificate().map(|c| (c.kind, c.n, c.a)), Some((PellKind::Addington, f.n, 1)));
        }
        prop_assert_eq!(p.bulles_with_k3, p.has_associated_k3);
    }

    #[test]
    fn profile_json_round_trip(d in 8u64..100_000) {
        let p = conditions::profile(d, DEFAULT_A_BOUND).unwrap();
        let back: conditions::DiscriminantProfile = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn witnesses_verify_and_classify(d in admissible(), dual in any::<bool>()) {
        let k3 = if dual { family::DUAL_K3_DISC } else { family::DEFAULT_K3_DISC };
        let w = family::build_witness(d, k3).unwrap();
        prop_assert_eq!(w.all_discs.len(), family::WITNESS_SIZE);
        prop_assert_eq!(family::verify_witness(&w).unwrap().len(), 6);
        prop_assert_eq!(&family::build_witness(d, k3).unwrap(), &w);
        let p = conditions::profile(d, DEFAULT_A_BOUND).unwrap();
        let (status, trace) = motive::classify(&p, Some(&w)).unwrap();
        prop_assert!(status.is_proven());
        prop_assert_eq!(trace.len(), 6);
    }

    #[test]
    fn adding_a_labelling_keeps_proven(d in 8u64..3000) {
        prop_assume!(d % 6 == 0 || d % 6 == 2);
        let w = family::build_witness(d, 14).unwrap();
        let extra = family::tail_stream().find(|t| !w.all_discs.contains(t)).unwrap();
        let mut tails = w.tail_discs.clone();
        tails.push(extra);
        let bigger = FamilyWitness::new(d, 14, tails);
        prop_assert_eq!(bigger.all_discs.len(), 20);
        let p = conditions::profile(d, DEFAULT_A_BOUND).unwrap();
        prop_assert!(motive::classify(&p, Some(&bigger)).unwrap().0.is_proven());
    }
}

#[test]
fn certificates_sound_up_to_5000() {
    for d in (8..=5000u64).filter(|d| d % 6 == 0 || d % 6 == 2) {
        let p = conditions::profile(d, DEFAULT_A_BOUND).unwrap();
        assert!(p.certificates_verify(), "{d}");
        if let Some(b) = p.bulles {
            assert_eq!(b.f * b.f * b.g, d);
            assert_eq!((2 * b.n * b.n + 2 * b.n + 2) % b.g, 0);
        }
    }
}

#[test]
fn witnesses_self_verify_up_to_1000() {
    for d in (8..=1000u64).filter(|d| d % 6 == 0 || d % 6 == 2) {
        for k3 in [14, 182] {
            let w = family::build_witness(d, k3).unwrap();
            assert_eq!(w.all_discs.len(), 19, "{d}/{k3}");
            family::verify_witness(&w).unwrap();
        }
    }
}

#[test]
fn motive_dimensions_are_conserved() {
    for rho2 in 1..=23 {
        let e = motive::chow_kunneth_cubic(rho2).unwrap();
        assert_eq!(e.total_dimension(), 27);
        let summed: u32 = e.summands.iter().map(|s| s.dimension()).sum();
        assert_eq!(summed, 27);
    }
    for rho in 1..=22 {
        assert_eq!(motive::chow_kunneth_k3(rho).unwrap().total_dimension(), 24);
    }
    assert!(motive::chow_kunneth_cubic(0).is_err());
    assert!(motive::chow_kunneth_cubic(24).is_err());
    assert!(motive::chow_kunneth_k3(23).is_err());
}

#[test]
fn ldl_oracle_sanity() {
    assert!(ldl_positive_definite(&[vec![3, 1], vec![1, 5]]));
    assert!(!ldl_positive_definite(&[vec![5, 3, -2], vec![3, 5, -2], vec![-2, -2, 1]]));
    assert!(!ldl_positive_definite(&[vec![1, 2], vec![2, 1]]));
}
