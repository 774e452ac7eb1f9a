#![allow(clippy::needless_range_loop)]

//! Property tests over randomized posets, link systems, functions, and
//! kernels. Instances are drawn from the crate's seeded generators; proptest
//! shrinks over the seed.

use std::collections::BTreeMap;

use num::rational::Ratio;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stratachi_core::constructible::{hat_closed, hat_function, ConstrFn};
use stratachi_core::hom::{HomSpec, IcHomSpec};
use stratachi_core::ic::{
    decompose_ic, decompose_ic_pure, hat_ic_function, ic_function, ic_transition_matrix,
    k_decompose, k_stalk, k_stalks, verify_ic_decomposition,
};
use stratachi_core::matrix::TriangularMatrix;
use stratachi_core::pushforward::{
    decompose_pushforward_hat, pushforward, verify_chi_mult, verify_compare,
    verify_ic_pushforward, verify_ichi_mult, ProperMapKernel,
};
use stratachi_core::random;
use stratachi_core::report::Formula;
use stratachi_core::hom::{verify_class_pushforward_hat, verify_class_pushforward_ic};

type Q = Ratio<i128>;

/// Generic Gauss-Jordan elimination over the rationals; independent of the
/// triangular recursion it cross-checks. The result must land in integers.
fn invert_by_elimination(m: &TriangularMatrix) -> Vec<Vec<i128>> {
    let n = m.len();
    let q = |x: i64| Q::from_integer(x as i128);
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| q(m.get_idx(i, j))).collect())
        .collect();
    let mut inv: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| q(i64::from(i == j))).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| a[r][col] != q(0))
            .expect("unipotent matrices are invertible");
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && a[r][col] != q(0) {
                let f = a[r][col];
                for j in 0..n {
                    let ac = a[col][j];
                    let ic = inv[col][j];
                    a[r][j] -= f * ac;
                    inv[r][j] -= f * ic;
                }
            }
        }
    }
    inv.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| {
                    assert!(x.is_integer(), "inverse of a unipotent matrix is integral");
                    x.to_integer()
                })
                .collect()
        })
        .collect()
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #[test]
    fn unipotent_inverse_multiplies_to_identity(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let space = random::poset(&mut rng, 12, false);
        let m = random::unipotent(&mut rng, &space, 9);
        let inv = m.inverse().unwrap();
        prop_assert!(m.mul(&inv).unwrap().is_identity());
        prop_assert!(inv.mul(&m).unwrap().is_identity());
        prop_assert_eq!(inv.inverse().unwrap(), m);
    }

    #[test]
    fn unipotent_inverse_matches_rational_elimination(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let space = random::poset(&mut rng, 10, false);
        let m = random::unipotent(&mut rng, &space, 9);
        let inv = m.inverse().unwrap();
        let oracle = invert_by_elimination(&m);
        for w in 0..space.len() {
            for v in 0..space.len() {
                prop_assert_eq!(inv.get_idx(w, v) as i128, oracle[w][v]);
            }
        }
    }

    #[test]
    fn transitive_closure_is_idempotent(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let space = random::poset(&mut rng, 12, false);
        // Rebuild from the full closed relation; nothing may change.
        let strata = space
            .strata()
            .map(|s| (s.id.clone(), s.complex_dim, s.chi_c))
            .collect();
        let mut pairs = Vec::new();
        for a in space.strata() {
            for b in space.strata() {
                if a.id != b.id && space.leq(&a.id, &b.id).unwrap() {
                    pairs.push((a.id.clone(), b.id.clone()));
                }
            }
        }
        let rebuilt = stratachi_core::poset::StratPoset::build(strata, &pairs, None).unwrap();
        prop_assert_eq!(&rebuilt, &*space);
    }

    #[test]
    fn down_sets_are_monotone(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let space = random::poset(&mut rng, 12, false);
        for a in space.strata() {
            for b in space.strata() {
                if space.leq(&a.id, &b.id).unwrap() {
                    let da = space.down_set(&a.id).unwrap();
                    let db = space.down_set(&b.id).unwrap();
                    prop_assert!(da.is_subset(&db));
                }
            }
        }
    }

    #[test]
    fn hat_functions_are_open_indicators(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let (space, links) = random::linked_space(&mut rng, 12, false);
        for s in space.strata() {
            let ind = ConstrFn::indicator(&space, &s.id).unwrap();
            prop_assert_eq!(hat_function(&space, &s.id).unwrap(), ind.clone());
            prop_assert_eq!(hat_ic_function(&links, &s.id).unwrap(), ind);
        }
    }

    #[test]
    fn hat_coefficients_are_inverse_columns(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let (space, links) = random::linked_space(&mut rng, 10, false);
        let closure_inv = TriangularMatrix::closure(&space).inverse().unwrap();
        let ic_inv = ic_transition_matrix(&links).inverse().unwrap();
        for s in space.strata() {
            let v = space.index_of(&s.id).unwrap();
            let hc = hat_closed(&space, &s.id).unwrap();
            prop_assert_eq!(hc.raw_coeffs().to_vec(), closure_inv.column(v));
            let hi = stratachi_core::ic::hat_ic(&links, &s.id).unwrap();
            prop_assert_eq!(hi.raw_coeffs().to_vec(), ic_inv.column(v));
        }
    }

    #[test]
    fn decompositions_round_trip(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let (space, links) = random::linked_space(&mut rng, 10, true);
        let alpha = random::function(&mut rng, &space);
        prop_assert_eq!(alpha.decompose_hat().recompose(None).unwrap(), alpha.clone());
        prop_assert_eq!(alpha.decompose_closed().unwrap().recompose(None).unwrap(), alpha.clone());
        prop_assert_eq!(alpha.decompose_hat_dense().unwrap().recompose(None).unwrap(), alpha.clone());
        prop_assert_eq!(decompose_ic(&links, &alpha).unwrap().recompose(Some(&links)).unwrap(), alpha.clone());
        prop_assert_eq!(decompose_ic_pure(&links, &alpha).unwrap().recompose(Some(&links)).unwrap(), alpha.clone());
        prop_assert!(verify_ic_decomposition(&links, &alpha).unwrap().pass);
    }

    #[test]
    fn decompose_hat_is_linear_and_euler_is_additive(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let space = random::poset(&mut rng, 10, false);
        let alpha = random::function(&mut rng, &space);
        let beta = random::function(&mut rng, &space);
        let sum = alpha.add(&beta).unwrap();
        prop_assert_eq!(
            sum.decompose_hat().raw_coeffs().to_vec(),
            alpha
                .decompose_hat()
                .add(&beta.decompose_hat())
                .unwrap()
                .raw_coeffs()
                .to_vec()
        );
        prop_assert_eq!(
            sum.euler().unwrap(),
            alpha.euler().unwrap() + beta.euler().unwrap()
        );
    }

    #[test]
    fn dense_ic_coefficients_match_the_matrix_route(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let (space, links) = random::linked_space(&mut rng, 9, true);
        let alpha = random::function(&mut rng, &space);
        let dc = decompose_ic(&links, &alpha).unwrap();
        let s = space.dense_index().unwrap();
        prop_assert_eq!(dc.coeff_at(s), alpha.value_at(s));

        // Oracle: pure ic coefficients d by inverting the transition matrix,
        // then the dense expansion via the forward matrix restricted below
        // the dense stratum: c_V = Σ_{V ≤ U < S} a_{V,U} · d_U.
        let matrix = ic_transition_matrix(&links);
        let d = matrix.inverse().unwrap().apply(alpha.raw_values()).unwrap();
        for v in 0..space.len() {
            if v == s {
                continue;
            }
            let mut c = 0i64;
            for u in 0..space.len() {
                if u != s && space.leq_idx(v, u) {
                    c += matrix.get_idx(v, u) * d[u];
                }
            }
            prop_assert_eq!(dc.coeff_at(v), c);
        }
    }

    #[test]
    fn k_round_trips_and_stalk_compatibility(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let (space, links) = random::linked_space(&mut rng, 10, true);
        let class = random::kclass(&mut rng, &space);
        let stalks = k_stalks(&class, &links).unwrap();
        let stalk_map: BTreeMap<_, _> = space
            .strata()
            .zip(stalks.iter())
            .map(|(s, v)| (s.id.clone(), *v))
            .collect();
        prop_assert_eq!(k_decompose(&stalk_map, &links).unwrap(), class.clone());

        // Conversely, starting from arbitrary stalk data.
        let arbitrary: BTreeMap<_, _> = space
            .strata()
            .map(|s| (s.id.clone(), random::function(&mut rng, &space).value(&s.id).unwrap()))
            .collect();
        let cls = k_decompose(&arbitrary, &links).unwrap();
        for s in space.strata() {
            prop_assert_eq!(k_stalk(&cls, &links, &s.id).unwrap(), arbitrary[&s.id]);
        }

        // The function of the class has the stalks as its values.
        let f = class.to_fn(&links).unwrap();
        for s in space.strata() {
            prop_assert_eq!(f.value(&s.id).unwrap(), k_stalk(&class, &links, &s.id).unwrap());
        }
    }

    #[test]
    fn pushforward_preserves_euler_and_composes(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let target = random::poset(&mut rng, 8, true);
        let (source, _, kernel) = random::map_onto(&mut rng, &target, 8);
        let alpha = random::function(&mut rng, &source);
        let pf = pushforward(&kernel, &alpha).unwrap();
        prop_assert_eq!(pf.euler().unwrap(), alpha.euler().unwrap());

        let (pre_source, _, inner) = random::map_onto(&mut rng, &source, 6);
        let beta = random::function(&mut rng, &pre_source);
        let composite = ProperMapKernel::compose(&kernel, &inner).unwrap();
        prop_assert_eq!(
            pushforward(&composite, &beta).unwrap(),
            pushforward(&kernel, &pushforward(&inner, &beta).unwrap()).unwrap()
        );
    }

    #[test]
    fn every_identity_passes_on_random_instances(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let (target, links) = random::linked_space(&mut rng, 8, true);
        let (source, source_links, kernel) = random::map_onto(&mut rng, &target, 8);
        let alpha = random::function(&mut rng, &source);
        let total = ConstrFn::constant(&source, 1);
        let ic_x = ic_function(&source_links, &source.stratum_at(source.dense_index().unwrap()).id).unwrap();

        prop_assert!(decompose_pushforward_hat(&kernel, &alpha).unwrap().pass);
        prop_assert!(verify_chi_mult(&kernel, &alpha, Formula::Eq4).unwrap().pass);
        prop_assert!(verify_chi_mult(&kernel, &total, Formula::Eq6).unwrap().pass);
        prop_assert!(verify_ic_pushforward(&kernel, &alpha, &links).unwrap().pass);
        prop_assert!(verify_ichi_mult(&kernel, &alpha, &links, Formula::Eq13).unwrap().pass);
        prop_assert!(verify_ichi_mult(&kernel, &total, &links, Formula::Eq15).unwrap().pass);
        prop_assert!(verify_ichi_mult(&kernel, &ic_x, &links, Formula::Eq17).unwrap().pass);
        prop_assert!(verify_compare(&links).unwrap().pass);

        prop_assert!(verify_class_pushforward_hat(&kernel, &alpha, Formula::Eq5).unwrap().pass);
        prop_assert!(verify_class_pushforward_hat(&kernel, &total, Formula::Eq7).unwrap().pass);
        prop_assert!(verify_class_pushforward_ic(&kernel, &alpha, &links, Formula::Eq14).unwrap().pass);
        prop_assert!(verify_class_pushforward_ic(&kernel, &total, &links, Formula::Eq16).unwrap().pass);
        prop_assert!(verify_class_pushforward_ic(&kernel, &ic_x, &links, Formula::Eq18).unwrap().pass);
        let id = ProperMapKernel::identity(&target);
        let one = ConstrFn::constant(&target, 1);
        prop_assert!(verify_class_pushforward_ic(&id, &one, &links, Formula::C2).unwrap().pass);
    }

    #[test]
    fn identity_specialization_reproduces_the_comparison(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let (space, links) = random::linked_space(&mut rng, 8, true);
        let id = ProperMapKernel::identity(&space);
        let one = ConstrFn::constant(&space, 1);
        let via_mult = verify_ichi_mult(&id, &one, &links, Formula::Eq13).unwrap();
        let compare = verify_compare(&links).unwrap();
        prop_assert_eq!(via_mult.lhs, compare.lhs);
        prop_assert_eq!(via_mult.rhs, compare.rhs);
        prop_assert_eq!(via_mult.terms, compare.terms);
    }

    #[test]
    fn hom_evaluation_is_route_independent(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let (space, links) = random::linked_space(&mut rng, 10, false);
        let alpha = random::function(&mut rng, &space);
        let chi = HomSpec::chi(&space).unwrap();
        // Closed-basis expansion versus the hat expansion α = Σ α(V)·ĥ1(V̄).
        let via_closed = chi.evaluate(&alpha).unwrap();
        let mut via_hat = 0i64;
        for s in space.strata() {
            via_hat += alpha.value(&s.id).unwrap() * chi.hat_value(&s.id).unwrap();
        }
        prop_assert_eq!(via_closed, via_hat);
        prop_assert_eq!(via_closed, alpha.euler().unwrap());

        // Hat values collapse to the χ_c weight of the top stratum.
        let ichi = IcHomSpec::ichi(&links).unwrap();
        for s in space.strata() {
            prop_assert_eq!(chi.hat_value(&s.id).unwrap(), s.chi_c);
            prop_assert_eq!(ichi.ichat_value(&links, &s.id).unwrap(), s.chi_c);
        }
    }

    #[test]
    fn class_identities_specialize_to_numeric_ones(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let (space, links) = random::linked_space(&mut rng, 9, false);
        let alpha = random::function(&mut rng, &space);
        let chi = HomSpec::chi(&space).unwrap();
        let universal = HomSpec::universal(&space);
        let realized = universal
            .evaluate(&alpha)
            .unwrap()
            .realize(|sym| {
                let v = space.index_of(&sym.0).unwrap();
                space.closure_chi(v).unwrap()
            })
            .unwrap();
        prop_assert_eq!(realized, chi.evaluate(&alpha).unwrap());

        let ichi = IcHomSpec::ichi(&links).unwrap();
        let ic_universal = IcHomSpec::universal(&space);
        let realized = ic_universal
            .evaluate(&links, &alpha)
            .unwrap()
            .realize(|sym| {
                ic_function(&links, &sym.0).unwrap().euler().unwrap()
            })
            .unwrap();
        prop_assert_eq!(realized, ichi.evaluate(&links, &alpha).unwrap());

        for s in space.strata() {
            let hat = universal.hat_value(&s.id).unwrap();
            let num = hat
                .realize(|sym| {
                    let v = space.index_of(&sym.0).unwrap();
                    space.closure_chi(v).unwrap()
                })
                .unwrap();
            prop_assert_eq!(num, chi.hat_value(&s.id).unwrap());

            let ic_hat = ic_universal.ichat_value(&links, &s.id).unwrap();
            let num = ic_hat
                .realize(|sym| ic_function(&links, &sym.0).unwrap().euler().unwrap())
                .unwrap();
            prop_assert_eq!(num, ichi.ichat_value(&links, &s.id).unwrap());
        }
    }
}
