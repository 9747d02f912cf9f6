mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use quiverhorn::augment::{augment, lift_family, satisfies_jump_condition};
use quiverhorn::brute::count_stable_points;
use quiverhorn::catalog;
use quiverhorn::family::{
    dim_filtered_hom, edim, filtered_euler, quotient_profile, schubert_dim, sub_profile, FiltrationProfile, Subset,
};
use quiverhorn::horn::{horn_member, schofield_member, HornQuery};
use quiverhorn::quiver::{euler_form, quiver_automorphisms};
use quiverhorn::{DimensionVector, Quiver, SubsetFamily};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{all_subfamilies, fam, random_dims, random_quiver};

/// A random ambient `J` (elements from `1..=6`) and a nested chain `L ⊆ K ⊆ J`.
fn random_chain(rng: &mut ChaCha8Rng, dims: &DimensionVector) -> (SubsetFamily, SubsetFamily, SubsetFamily) {
    let mut j = Vec::new();
    let mut k = Vec::new();
    let mut l = Vec::new();
    for &d in dims.as_slice() {
        let mut pool: Vec<u32> = (1..=6).collect();
        let mut chosen = Vec::new();
        for _ in 0..d {
            chosen.push(pool.remove(rng.gen_range(0..pool.len())));
        }
        let mut kx = Vec::new();
        let mut lx = Vec::new();
        for &e in &chosen {
            match rng.gen_range(0..3) {
                0 => {}
                1 => kx.push(e),
                _ => {
                    kx.push(e);
                    lx.push(e);
                }
            }
        }
        j.push(Subset::from_unsorted(chosen).unwrap());
        k.push(Subset::from_unsorted(kx).unwrap());
        l.push(Subset::from_unsorted(lx).unwrap());
    }
    (SubsetFamily::new(l), SubsetFamily::new(k), SubsetFamily::new(j))
}

fn setup(seed: u64) -> (ChaCha8Rng, Quiver, DimensionVector) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = random_quiver(&mut rng, 4, 6, false);
    let n = random_dims(&mut rng, q.vertex_count(), 4, 10);
    (rng, q, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn eul_of_subquotient_is_edim(seed in any::<u64>()) {
        let (mut rng, q, n) = setup(seed);
        let (_, k, j) = random_chain(&mut rng, &n);
        let f = sub_profile(&k, &j).unwrap();
        let g = quotient_profile(&k, &j).unwrap();
        prop_assert_eq!(filtered_euler(&q, &f, &g, &f.dims(), &g.dims()).unwrap(), edim(&q, &k, &j).unwrap());
    }

    #[test]
    fn eul_is_additive_along_a_chain(seed in any::<u64>()) {
        let (mut rng, q, n) = setup(seed);
        let (l, k, j) = random_chain(&mut rng, &n);
        // V = V(J), S = V(K), W = V(K ∖ L), all filtered by positions in J
        let full = sub_profile(&j, &j).unwrap();
        let sub = sub_profile(&k, &j).unwrap();
        let quot = quotient_profile(&k, &j).unwrap();
        let w = sub_profile(&l.complement_in(&k), &j).unwrap();
        let eul = |f: &FiltrationProfile| filtered_euler(&q, f, &w, &f.dims(), &w.dims()).unwrap();
        prop_assert_eq!(eul(&full), eul(&sub) + eul(&quot));
    }

    #[test]
    fn euler_form_from_unconstrained_profiles(seed in any::<u64>()) {
        let (mut rng, q, alpha) = setup(seed);
        let beta = DimensionVector::new(alpha.as_slice().iter().map(|_| rng.gen_range(0..=4)).collect());
        // V jumps only after W is complete, so every morphism is filtered
        let f = FiltrationProfile::new(alpha.as_slice().iter().zip(beta.as_slice())
            .map(|(&a, &b)| (0..=a + b).map(|i| i.saturating_sub(b)).collect()).collect()).unwrap();
        let g = FiltrationProfile::new(alpha.as_slice().iter().zip(beta.as_slice())
            .map(|(&a, &b)| (0..=a + b).map(|i| i.min(b)).collect()).collect()).unwrap();
        let pairing: i64 = alpha.as_slice().iter().zip(beta.as_slice()).map(|(&a, &b)| (a * b) as i64).sum();
        prop_assert_eq!(dim_filtered_hom(&f, &g).unwrap(), pairing);
        prop_assert_eq!(filtered_euler(&q, &f, &g, &alpha, &beta).unwrap(), euler_form(&q, &alpha, &beta).unwrap());
    }

    #[test]
    fn schubert_dim_is_nonnegative_and_edim_without_arrows(seed in any::<u64>()) {
        let (mut rng, q, n) = setup(seed);
        let (_, k, j) = random_chain(&mut rng, &n);
        prop_assert!(schubert_dim(&k, &j).unwrap() >= 0);
        let bare = Quiver::from_indices(q.vertices().iter().cloned(), Vec::new()).unwrap();
        prop_assert_eq!(edim(&bare, &k, &j).unwrap(), schubert_dim(&k, &j).unwrap());
    }
}

#[test]
fn edim_and_membership_are_automorphism_invariant() {
    for (q, j) in [(catalog::square(), fam("12;123;123;12")), (catalog::sun(), fam("12;12;12;12;12;12"))] {
        let autos = quiver_automorphisms(&q).unwrap();
        for k in all_subfamilies(&j) {
            let e = edim(&q, &k, &j).unwrap();
            let m = horn_member(&HornQuery::new(&q, j.clone(), k.clone()).unwrap());
            for g in &autos {
                let (gk, gj) = (k.permuted(g), j.permuted(g));
                assert_eq!(edim(&q, &gk, &gj).unwrap(), e);
                assert_eq!(horn_member(&HornQuery::new(&q, gj, gk).unwrap()), m);
            }
        }
    }
}

#[test]
fn rejected_families_have_no_points_most_often() {
    for (q, j) in
        [(catalog::single_arrow(), fam("123;12")), (catalog::w2(), fam("12;12")), (catalog::horn(2), fam("12;12;12"))]
    {
        for k in all_subfamilies(&j) {
            if !horn_member(&HornQuery::new(&q, j.clone(), k.clone()).unwrap()) {
                let report = count_stable_points(&q, &k, &j, 11, 25, 3).unwrap();
                assert_eq!(report.mode, 0, "{k} in {j}: {:?}", report.counts);
            }
        }
    }
}

#[test]
fn point_count_modes_are_symmetric() {
    let q = catalog::square();
    let j = fam("12;12;12;12");
    let autos = quiver_automorphisms(&q).unwrap();
    for k in ["1;2;1;2", "2;1;2;12", "1;12;2;2", "2;2;1;1"].map(fam) {
        let mode = count_stable_points(&q, &k, &j, 11, 60, 1).unwrap().mode;
        for g in &autos {
            let image = count_stable_points(&q, &k.permuted(g), &j.permuted(g), 11, 60, 2).unwrap();
            assert_eq!(image.mode, mode, "{k} under {:?}", g.images());
        }
    }
}

#[test]
fn jump_filtered_schofield_vectors_are_lifts() {
    let q = catalog::single_arrow();
    for j in ["12;12", "123;12", "12;123"].map(fam) {
        let aug = augment(&q, &j.cardinalities()).unwrap();
        let lifts: BTreeSet<Vec<u32>> = all_subfamilies(&j)
            .into_iter()
            .filter(|k| horn_member(&HornQuery::new(&q, j.clone(), k.clone()).unwrap()))
            .map(|k| lift_family(&aug, &k, &j).unwrap().0)
            .collect();
        let n = aug.dims().as_slice().to_vec();
        let mut found = BTreeSet::new();
        let mut beta = vec![0u32; n.len()];
        loop {
            let b = DimensionVector::new(beta.clone());
            if satisfies_jump_condition(&aug, &b) && schofield_member(aug.quiver(), &b, aug.dims()).unwrap() {
                found.insert(beta.clone());
            }
            let Some(i) = (0..n.len()).find(|&i| beta[i] < n[i]) else {
                break;
            };
            beta[i] += 1;
            beta[..i].iter_mut().for_each(|v| *v = 0);
        }
        assert_eq!(found, lifts, "J = {j}");
    }
}
