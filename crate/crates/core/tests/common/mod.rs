#![allow(dead_code)]

use quiverhorn::family::{FiltrationProfile, Subset, SubsetFamily};
use quiverhorn::{DimensionVector, Quiver};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fam(s: &str) -> SubsetFamily {
    SubsetFamily::parse_shorthand(s).unwrap()
}

/// A quiver on 1..=max_vertices vertices with up to `max_arrows` arrows
/// (no loops; parallel arrows and cycles allowed unless `acyclic`).
pub fn random_quiver(rng: &mut ChaCha8Rng, max_vertices: usize, max_arrows: usize, acyclic: bool) -> Quiver {
    let n = rng.gen_range(1..=max_vertices);
    let mut arrows = Vec::new();
    if n > 1 {
        for _ in 0..rng.gen_range(0..=max_arrows) {
            let x = rng.gen_range(0..n);
            let mut y = rng.gen_range(0..n - 1);
            if y >= x {
                y += 1;
            }
            arrows.push(if acyclic && x > y { (y, x) } else { (x, y) });
        }
    }
    Quiver::from_indices((1..=n).map(|i| i.to_string()), arrows).unwrap()
}

/// Per-vertex dims in `0..=max_entry` with the given total bound.
pub fn random_dims(rng: &mut ChaCha8Rng, vertices: usize, max_entry: u32, max_total: u32) -> DimensionVector {
    loop {
        let dims: Vec<u32> = (0..vertices).map(|_| rng.gen_range(0..=max_entry)).collect();
        let total: u32 = dims.iter().sum();
        if total <= max_total && total > 0 {
            return DimensionVector::new(dims);
        }
    }
}

/// A random profile of dimension `dim` and length `len ≥ dim`.
pub fn random_profile_levels(rng: &mut ChaCha8Rng, dim: u32, len: usize) -> Vec<u32> {
    let mut steps: Vec<u32> = (0..len).map(|i| (i < dim as usize) as u32).collect();
    steps.shuffle(rng);
    let mut levels = vec![0];
    for s in steps {
        levels.push(levels.last().unwrap() + s);
    }
    levels
}

pub fn random_profile(rng: &mut ChaCha8Rng, dims: &[u32], lens: &[usize]) -> FiltrationProfile {
    FiltrationProfile::new(dims.iter().zip(lens).map(|(&d, &l)| random_profile_levels(rng, d, l)).collect()).unwrap()
}

/// Every subfamily of `j`, in mask order.
pub fn all_subfamilies(j: &SubsetFamily) -> Vec<SubsetFamily> {
    let mut out = vec![Vec::new()];
    for part in j.parts() {
        let e = part.elements();
        let mut next = Vec::new();
        for prefix in &out {
            for mask in 0u32..(1 << e.len()) {
                let chosen: Vec<u32> = (0..e.len()).filter(|i| mask >> i & 1 == 1).map(|i| e[i]).collect();
                let mut p: Vec<Subset> = prefix.clone();
                p.push(Subset::new(chosen).unwrap());
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter().map(SubsetFamily::new).collect()
}

/// Value-indexed profile of `V(K)` inside a space whose jumps sit at `J_x ⊆ {1..ℓ_x}`:
/// `d(i) = |K_x ∩ {1..i}|`.
pub fn value_profile(k: &SubsetFamily, lens: &[usize]) -> FiltrationProfile {
    FiltrationProfile::new(
        k.parts()
            .iter()
            .zip(lens)
            .map(|(kx, &l)| (0..=l as u32).map(|i| kx.elements().iter().filter(|&&e| e <= i).count() as u32).collect())
            .collect(),
    )
    .unwrap()
}

/// Jump indices of a profile as a subset family (values in `1..=ℓ_x`).
pub fn jump_family(f: &FiltrationProfile) -> SubsetFamily {
    SubsetFamily::new(
        (0..f.vertex_count())
            .map(|x| Subset::new(f.jump_indices(x).into_iter().map(|i| i as u32).collect()).unwrap())
            .collect(),
    )
}
