//! The highest-weight cone as an exact polyhedral cone.
//!
//! Coordinates are `λ_x(i)` for vertices `x` in order and `i = 1..=n_x`.
//! Inequalities are stored as rows `a` meaning `a · λ ≤ 0`.

pub mod dd;
pub mod linalg;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::family::SubsetFamily;
use crate::horn::{enumerate_intersecting, enumerate_schofield};
use crate::quiver::{DimensionVector, Quiver, QuiverAutomorphism};

pub use dd::{double_description, Generators};
pub use linalg::ExactInteger;
use linalg::{canonical_direction, dot, from_i64, make_primitive, rank};

/// Largest supported number of coordinates.
pub const MAX_COORDINATES: usize = 16;
/// Largest supported number of inequality rows.
pub const MAX_ROWS: usize = 2000;

/// `{λ : E λ = 0, A λ ≤ 0}` with named coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeDescription<T> {
    /// `(vertex label, index)` per coordinate; the index is 0 for per-vertex weights.
    pub coordinates: Vec<(String, u32)>,
    pub equalities: Vec<Vec<T>>,
    pub inequalities: Vec<Vec<T>>,
    pub rays: Option<Vec<Vec<T>>>,
}

impl<T: ExactInteger> ConeDescription<T> {
    /// Normalizes and deduplicates rows; zero inequalities are dropped.
    pub fn new(coordinates: Vec<(String, u32)>, equalities: Vec<Vec<T>>, inequalities: Vec<Vec<T>>) -> Result<Self> {
        let n = coordinates.len();
        if equalities.iter().chain(&inequalities).any(|r| r.len() != n) {
            return Err(Error::Domain(format!("every row must have {n} entries")));
        }
        let mut eqs: Vec<Vec<T>> = equalities
            .into_iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .map(|mut r| {
                canonical_direction(&mut r);
                r
            })
            .collect();
        dedup_keep_order(&mut eqs);
        let mut ineqs: Vec<Vec<T>> = inequalities
            .into_iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .map(|mut r| {
                make_primitive(&mut r);
                r
            })
            .collect();
        dedup_keep_order(&mut ineqs);
        Ok(Self { coordinates, equalities: eqs, inequalities: ineqs, rays: None })
    }

    pub fn dimension(&self) -> usize {
        self.coordinates.len()
    }

    fn check_capacity(&self) -> Result<()> {
        if self.dimension() > MAX_COORDINATES {
            return Err(Error::Capacity(format!(
                "{} coordinates exceed the limit of {MAX_COORDINATES}",
                self.dimension()
            )));
        }
        if self.inequalities.len() > MAX_ROWS {
            return Err(Error::Capacity(format!(
                "{} inequalities exceed the limit of {MAX_ROWS}",
                self.inequalities.len()
            )));
        }
        Ok(())
    }

    pub fn satisfies(&self, point: &[T]) -> bool {
        self.equalities.iter().all(|e| dot(e, point).is_zero())
            && self.inequalities.iter().all(|a| !dot(a, point).is_positive())
    }

    /// Plain-text listing, one row per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.equalities {
            out.push_str(&format!("{} = 0\n", join(e)));
        }
        for a in &self.inequalities {
            out.push_str(&format!("{} <= 0\n", join(a)));
        }
        out
    }
}

fn join<T: ExactInteger>(row: &[T]) -> String {
    row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn dedup_keep_order<T: ExactInteger>(rows: &mut Vec<Vec<T>>) {
    let mut seen = BTreeSet::new();
    rows.retain(|r| seen.insert(r.clone()));
}

/// `(label, i)` for `i = 1..=n_x`, vertex by vertex.
pub fn weight_coordinates(quiver: &Quiver, n: &DimensionVector) -> Vec<(String, u32)> {
    (0..quiver.vertex_count()).flat_map(|x| (1..=n[x]).map(move |i| (quiver.label(x).to_string(), i))).collect()
}

fn offsets(n: &DimensionVector) -> Vec<usize> {
    let mut acc = 0usize;
    n.as_slice()
        .iter()
        .map(|&d| {
            let o = acc;
            acc += d as usize;
            o
        })
        .collect()
}

/// Indicator row `Σ_x Σ_{k ∈ K_x} λ_x(k)`.
pub fn family_row<T: ExactInteger>(n: &DimensionVector, k: &SubsetFamily) -> Vec<T> {
    let off = offsets(n);
    let mut row = vec![T::zero(); n.total() as usize];
    for (x, kx) in k.parts().iter().enumerate() {
        for &e in kx.elements() {
            row[off[x] + e as usize - 1] = T::one();
        }
    }
    row
}

/// Weyl chamber rows `λ_x(i + 1) − λ_x(i) ≤ 0`.
pub fn chamber_rows<T: ExactInteger>(n: &DimensionVector) -> Vec<Vec<T>> {
    let off = offsets(n);
    let total = n.total() as usize;
    let mut rows = Vec::new();
    for (x, &d) in n.as_slice().iter().enumerate() {
        for i in 0..(d as usize).saturating_sub(1) {
            let mut row = vec![T::zero(); total];
            row[off[x] + i] = -T::one();
            row[off[x] + i + 1] = T::one();
            rows.push(row);
        }
    }
    rows
}

/// Trace equality, chamber rows and one row per intersecting family of expected dimension zero.
pub fn generate_system<T: ExactInteger>(quiver: &Quiver, n: &DimensionVector) -> Result<ConeDescription<T>> {
    n.check_domain(quiver, "n")?;
    if n.total() as usize > MAX_COORDINATES {
        return Err(Error::Capacity(format!("{} coordinates exceed the limit of {MAX_COORDINATES}", n.total())));
    }
    let ambient = SubsetFamily::standard(n);
    let families = enumerate_intersecting(quiver, &ambient, true, false)?;
    let mut rows = chamber_rows(n);
    rows.extend(families.iter().map(|k| family_row(n, k)));
    let trace = vec![T::one(); n.total() as usize];
    ConeDescription::new(weight_coordinates(quiver, n), vec![trace], rows)
}

/// One row `α · ω ≤ 0` per nonzero Schofield vector `α`, plus `n · ω = 0`.
pub fn sigma_restriction<T: ExactInteger>(quiver: &Quiver, n: &DimensionVector) -> Result<ConeDescription<T>> {
    let vectors = enumerate_schofield(quiver, n, false)?;
    let rows = vectors.iter().map(|a| a.as_slice().iter().map(|&v| from_i64(v as i64)).collect()).collect();
    let eq = n.as_slice().iter().map(|&v| from_i64(v as i64)).collect();
    let coords = quiver.vertices().iter().map(|l| (l.clone(), 0)).collect();
    ConeDescription::new(coords, vec![eq], rows)
}

pub fn extreme_rays<T: ExactInteger>(desc: &ConeDescription<T>) -> Result<Generators<T>> {
    desc.check_capacity()?;
    Ok(double_description(desc.dimension(), &desc.equalities, &desc.inequalities))
}

fn tight_set<T: ExactInteger>(row: &[T], rays: &[Vec<T>]) -> Vec<bool> {
    rays.iter().map(|r| dot(row, r).is_zero()).collect()
}

/// Input rows that define facets, one per facet.
///
/// A row is kept when its tight rays together with the lineality space span a
/// hyperplane of the cone. Rows cutting out the same facet are merged, keeping
/// the one with fewest nonzero entries (then the lexicographically least).
pub fn irredundant_facets<T: ExactInteger>(desc: &ConeDescription<T>, gens: &Generators<T>) -> Vec<Vec<T>> {
    let dim = gens.dimension();
    if dim == 0 {
        return Vec::new();
    }
    let mut chosen: HashMap<Vec<bool>, Vec<T>> = HashMap::new();
    for a in &desc.inequalities {
        let tight = tight_set(a, &gens.rays);
        let mut span: Vec<Vec<T>> = gens.rays.iter().zip(&tight).filter(|(_, &t)| t).map(|(r, _)| r.clone()).collect();
        span.extend(gens.lines.iter().cloned());
        if rank(&span) + 1 != dim {
            continue;
        }
        let weight = |r: &Vec<T>| r.iter().filter(|x| !x.is_zero()).count();
        chosen
            .entry(tight)
            .and_modify(|cur| {
                if (weight(a), a) < (weight(cur), &*cur) {
                    *cur = a.clone();
                }
            })
            .or_insert_with(|| a.clone());
    }
    let mut facets: Vec<Vec<T>> = chosen.into_values().collect();
    facets.sort();
    facets
}

/// A ray of the cone cut out by `facets` without `facets[index]` that violates it.
pub fn minimality_witness<T: ExactInteger>(equalities: &[Vec<T>], facets: &[Vec<T>], index: usize) -> Option<Vec<T>> {
    let dimension = facets.first().map_or(0, Vec::len);
    let rest: Vec<Vec<T>> = facets.iter().enumerate().filter(|&(i, _)| i != index).map(|(_, r)| r.clone()).collect();
    let gens = double_description(dimension, equalities, &rest);
    let removed = &facets[index];
    gens.rays
        .into_iter()
        .find(|r| dot(removed, r).is_positive())
        .or_else(|| gens.lines.into_iter().find(|l| !dot(removed, l).is_zero()))
}

/// Checks that every ray and line satisfies the system and every inequality is
/// tight somewhere or strictly redundant; then compares membership of random
/// integer points in the original system and in the facet system.
pub fn soundness_report<T: ExactInteger>(
    desc: &ConeDescription<T>,
    gens: &Generators<T>,
    facets: &[Vec<T>],
    samples: usize,
    seed: u64,
) -> SoundnessReport {
    let rays_feasible = gens.rays.iter().all(|r| desc.satisfies(r))
        && gens.lines.iter().all(|l| {
            desc.equalities.iter().all(|e| dot(e, l).is_zero()) && desc.inequalities.iter().all(|a| dot(a, l).is_zero())
        });
    let untouched_rows = desc.inequalities.iter().filter(|a| gens.rays.iter().all(|r| !dot(a, r).is_zero())).count();
    let reduced = ConeDescription {
        coordinates: desc.coordinates.clone(),
        equalities: desc.equalities.clone(),
        inequalities: facets.to_vec(),
        rays: None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis: Vec<Vec<T>> = gens.rays.iter().chain(&gens.lines).cloned().collect();
    let mut mismatches = 0;
    let mut inside = 0;
    for _ in 0..samples {
        let mut point = vec![T::zero(); desc.dimension()];
        for b in &basis {
            let c: T = from_i64(rng.gen_range(-2..=6));
            for (p, x) in point.iter_mut().zip(b) {
                *p = p.clone() + c.clone() * x.clone();
            }
        }
        let original = desc.satisfies(&point);
        inside += original as usize;
        if original != reduced.satisfies(&point) {
            mismatches += 1;
        }
    }
    SoundnessReport { rays_feasible, untouched_rows, samples, inside, mismatches }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SoundnessReport {
    pub rays_feasible: bool,
    /// Inequalities not tight on any ray; each is strictly redundant.
    pub untouched_rows: usize,
    pub samples: usize,
    /// Samples inside the cone.
    pub inside: usize,
    /// Samples on which the original and facet systems disagree.
    pub mismatches: usize,
}

/// Induced permutation of weight coordinates: `(x, i) ↦ (σ(x), i)`.
pub fn coordinate_permutation(sigma: &QuiverAutomorphism, n: &DimensionVector) -> Result<Vec<usize>> {
    if sigma.permute(n.as_slice()) != n.as_slice() {
        return Err(Error::Domain(format!("automorphism {:?} does not preserve {n}", sigma.images())));
    }
    let off = offsets(n);
    let mut image = Vec::with_capacity(n.total() as usize);
    for (x, &d) in n.as_slice().iter().enumerate() {
        for i in 0..d as usize {
            image.push(off[sigma.image(x)] + i);
        }
    }
    Ok(image)
}

/// An orbit representative (lexicographically least member) and the orbit size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit<T> {
    pub representative: Vec<T>,
    pub size: usize,
}

pub fn orbit_reduce<T: ExactInteger>(
    items: &[Vec<T>],
    autos: &[QuiverAutomorphism],
    n: &DimensionVector,
) -> Result<Vec<Orbit<T>>> {
    let perms = autos.iter().map(|g| coordinate_permutation(g, n)).collect::<Result<Vec<_>>>()?;
    let mut orbits: BTreeMap<Vec<T>, usize> = BTreeMap::new();
    for item in items {
        let images: BTreeSet<Vec<T>> = perms
            .iter()
            .map(|p| {
                let mut out = vec![T::zero(); item.len()];
                for (i, v) in item.iter().enumerate() {
                    out[p[i]] = v.clone();
                }
                out
            })
            .chain(std::iter::once(item.clone()))
            .collect();
        let rep = images.iter().next().expect("nonempty").clone();
        orbits.insert(rep, images.len());
    }
    Ok(orbits.into_iter().map(|(representative, size)| Orbit { representative, size }).collect())
}

/// Full computation for the reports: system, generators and facets.
#[derive(Clone, Debug)]
pub struct ConeComputation<T> {
    pub system: ConeDescription<T>,
    pub generators: Generators<T>,
    pub facets: Vec<Vec<T>>,
}

pub fn compute_cone<T: ExactInteger>(quiver: &Quiver, n: &DimensionVector) -> Result<ConeComputation<T>> {
    let mut system = generate_system::<T>(quiver, n)?;
    let generators = extreme_rays(&system)?;
    let facets = irredundant_facets(&system, &generators);
    system.rays = Some(generators.rays.clone());
    Ok(ConeComputation { system, generators, facets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use num_bigint::BigInt;

    #[test]
    fn single_vertex_cone_is_zero() {
        let q = Quiver::new(["v"], Vec::<(&str, &str)>::new()).unwrap();
        let n = DimensionVector::new(vec![1]);
        let sys = generate_system::<i128>(&q, &n).unwrap();
        assert_eq!(sys.equalities, vec![vec![1]]);
        assert_eq!(sys.inequalities, vec![vec![1]]);
        let gens = extreme_rays(&sys).unwrap();
        assert!(gens.rays.is_empty() && gens.lines.is_empty());
    }

    #[test]
    fn dominant_line_has_one_facet() {
        let q = Quiver::new(["v"], Vec::<(&str, &str)>::new()).unwrap();
        let n = DimensionVector::new(vec![2]);
        let sys = ConeDescription::new(weight_coordinates(&q, &n), vec![vec![1i128, 1]], chamber_rows(&n)).unwrap();
        let gens = extreme_rays(&sys).unwrap();
        assert_eq!(gens.rays, vec![vec![1, -1]]);
        assert_eq!(irredundant_facets(&sys, &gens), vec![vec![-1, 1]]);
    }

    #[test]
    fn duplicate_rows_do_not_change_facets() {
        let q = catalog::single_arrow();
        let n = DimensionVector::new(vec![2, 1]);
        let sys = generate_system::<BigInt>(&q, &n).unwrap();
        let gens = extreme_rays(&sys).unwrap();
        let facets = irredundant_facets(&sys, &gens);
        let mut doubled = sys.clone();
        doubled.inequalities.extend(sys.inequalities.iter().cloned());
        doubled.inequalities.push(sys.inequalities[0].iter().map(|x| x * 3).collect());
        let gens2 = extreme_rays(&doubled).unwrap();
        assert_eq!(gens, gens2);
        assert_eq!(irredundant_facets(&doubled, &gens2), facets);
    }

    #[test]
    fn sun_system_shape() {
        let q = catalog::sun();
        let n = DimensionVector::new(vec![2; 6]);
        let sys = generate_system::<i128>(&q, &n).unwrap();
        assert_eq!(sys.dimension(), 12);
        assert_eq!(sys.equalities.len(), 1);
        assert_eq!(chamber_rows::<i128>(&n).len(), 6);
        let k = SubsetFamily::parse_shorthand(";;;1;;1").unwrap();
        let row = family_row::<i128>(&n, &k);
        assert_eq!(row, [0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0]);
        assert!(sys.inequalities.contains(&row));
    }

    #[test]
    fn sigma_restriction_of_a_vertex() {
        let q = Quiver::new(["v"], Vec::<(&str, &str)>::new()).unwrap();
        let n = DimensionVector::new(vec![3]);
        let sys = sigma_restriction::<i128>(&q, &n).unwrap();
        assert_eq!(sys.equalities, vec![vec![1]]);
        assert_eq!(sys.inequalities, vec![vec![1]]);
        let gens = extreme_rays(&sys).unwrap();
        assert!(gens.rays.is_empty() && gens.lines.is_empty());
    }

    #[test]
    fn sigma_cone_is_the_diagonal_slice() {
        let q = catalog::sun();
        let n = DimensionVector::new(vec![2; 6]);
        let full = generate_system::<BigInt>(&q, &n).unwrap();
        let sigma = sigma_restriction::<BigInt>(&q, &n).unwrap();
        // restrict every row of the full system to λ_x(1) = λ_x(2) = ω_x
        let squash = |row: &Vec<BigInt>| row.chunks(2).map(|c| &c[0] + &c[1]).collect::<Vec<_>>();
        let sliced = ConeDescription::new(
            sigma.coordinates.clone(),
            full.equalities.iter().map(squash).collect(),
            full.inequalities.iter().map(squash).collect(),
        )
        .unwrap();
        let a = extreme_rays(&sliced).unwrap();
        let b = extreme_rays(&sigma).unwrap();
        assert_eq!(a.rays, b.rays);
        assert_eq!(a.lines, b.lines);
        assert_eq!(irredundant_facets(&sliced, &a), irredundant_facets(&sigma, &b));
    }

    #[test]
    fn orbit_reduction() {
        let q = catalog::sun();
        let n = DimensionVector::new(vec![2; 6]);
        let autos = crate::quiver::quiver_automorphisms(&q).unwrap();
        let mut row = vec![0i128; 12];
        row[0] = 1;
        let rotated = coordinate_permutation(&autos[1], &n).unwrap();
        let mut image = vec![0i128; 12];
        image[rotated[0]] = 1;
        let orbits = orbit_reduce(&[row.clone(), image], &autos, &n).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].size, 3);
        let identity = [QuiverAutomorphism::identity(6)];
        assert_eq!(orbit_reduce(&[row.clone()], &identity, &n).unwrap()[0].representative, row);
        let lopsided = DimensionVector::new(vec![2, 2, 2, 2, 2, 1]);
        assert!(matches!(orbit_reduce(&[vec![0i128; 11]], &autos, &lopsided), Err(Error::Domain(_))));
    }

    #[test]
    fn capacity_is_enforced() {
        let q = catalog::single_arrow();
        let n = DimensionVector::new(vec![9, 9]);
        assert!(matches!(generate_system::<i128>(&q, &n), Err(Error::Capacity(_))));
    }

    #[test]
    fn square_cone_is_sound_and_minimal() {
        let q = catalog::square();
        let n = DimensionVector::new(vec![2, 3, 3, 2]);
        let cone = compute_cone::<BigInt>(&q, &n).unwrap();
        let report = soundness_report(&cone.system, &cone.generators, &cone.facets, 300, 0);
        assert!(report.rays_feasible);
        assert_eq!(report.mismatches, 0);
        for i in 0..cone.facets.len() {
            assert!(minimality_witness(&cone.system.equalities, &cone.facets, i).is_some());
        }
    }
}
