//! Exhaustive point counts over small prime fields.
//!
//! Subspaces of `F_q^n` are stored in reduced row echelon form, which makes
//! them canonical and cheap to enumerate. Counting the families inside a
//! closed Schubert variety that are stable under a random representation
//! gives ground truth for tiny instances.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{check_containment, Subset, SubsetFamily};
use crate::horn::{horn_member, HornQuery};
use crate::quiver::Quiver;

pub const MAX_AMBIENT_DIM: usize = 4;
pub const MAX_FIELD_SIZE: u32 = 13;
pub const DEFAULT_FIELD_SIZE: u32 = 11;
/// Cap on the product of per-vertex Grassmannian sizes.
pub const MAX_SEARCH_SPACE: u64 = 10_000_000;

/// A subspace of `F_q^n` given by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmallFieldSubspace {
    q: u32,
    n: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl SmallFieldSubspace {
    /// Row-reduces the span of `vectors`.
    pub fn span(q: u32, n: usize, vectors: &[Vec<u32>]) -> Result<Self> {
        check_field(q)?;
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::Domain(format!("vectors must have length {n}")));
        }
        let mut rows: Vec<Vec<u32>> = vectors.iter().map(|v| v.iter().map(|&e| e % q).collect()).collect();
        let pivots = rref(&mut rows, q);
        rows.truncate(pivots.len());
        Ok(Self { q, n, basis: rows, pivots })
    }

    pub fn field_size(&self) -> u32 {
        self.q
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn contains_vector(&self, v: &[u32]) -> bool {
        let q = self.q as u64;
        let mut rest: Vec<u64> = v.iter().map(|&e| e as u64 % q).collect();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let factor = rest[p];
            if factor != 0 {
                for (r, &b) in rest.iter_mut().zip(row) {
                    *r = (*r + q - factor * b as u64 % q) % q;
                }
            }
        }
        rest.iter().all(|&e| e == 0)
    }

    /// `dim(S ∩ span(e_1, …, e_p))`.
    pub fn dim_meet_prefix(&self, p: usize) -> usize {
        let tail: Vec<Vec<u32>> = self.basis.iter().map(|row| row[p..].to_vec()).collect();
        self.rank() - rank_mod(tail, self.q)
    }
}

fn check_field(q: u32) -> Result<()> {
    if q > MAX_FIELD_SIZE || !crate::ext_oracle::is_prime(q as u64) {
        return Err(Error::Capacity(format!("field size {q} must be a prime at most {MAX_FIELD_SIZE}")));
    }
    Ok(())
}

fn inverse_mod(a: u32, q: u32) -> u32 {
    (1..q).find(|&b| (a as u64 * b as u64) % q as u64 == 1).expect("nonzero in a field")
}

/// Brings `rows` into reduced row echelon form; returns the pivot columns.
fn rref(rows: &mut [Vec<u32>], q: u32) -> Vec<usize> {
    let qq = q as u64;
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = inverse_mod(rows[rank][c], q) as u64;
        for e in rows[rank].iter_mut() {
            *e = (*e as u64 * inv % qq) as u32;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[c] == 0 {
                continue;
            }
            let factor = row[c] as u64;
            for (e, &b) in row.iter_mut().zip(&pivot_row) {
                *e = ((*e as u64 + qq - factor * b as u64 % qq) % qq) as u32;
            }
        }
        pivots.push(c);
        rank += 1;
    }
    pivots
}

fn rank_mod(mut rows: Vec<Vec<u32>>, q: u32) -> usize {
    rref(&mut rows, q).len()
}

/// Every `r`-dimensional subspace of `F_q^n`, each once.
pub fn enumerate_subspaces(n: usize, r: usize, q: u32) -> Result<Vec<SmallFieldSubspace>> {
    if n > MAX_AMBIENT_DIM || r > n {
        return Err(Error::Capacity(format!("need 0 ≤ r ≤ n ≤ {MAX_AMBIENT_DIM}, got r = {r}, n = {n}")));
    }
    check_field(q)?;
    let mut out = Vec::new();
    for pivots in combinations(n, r) {
        // free entries: row i, columns after its pivot that are not pivots
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (p + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
            .collect();
        let total = (q as u64).pow(free.len() as u32);
        for code in 0..total {
            let mut basis = vec![vec![0u32; n]; r];
            for (i, &p) in pivots.iter().enumerate() {
                basis[i][p] = 1;
            }
            let mut rest = code;
            for &(i, c) in &free {
                basis[i][c] = (rest % q as u64) as u32;
                rest /= q as u64;
            }
            out.push(SmallFieldSubspace { q, n, basis, pivots: pivots.clone() });
        }
    }
    Ok(out)
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// Gaussian binomial coefficient `[n choose r]_q`.
pub fn gaussian_binomial(n: u32, r: u32, q: u64) -> u64 {
    if r > n {
        return 0;
    }
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..r {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// `dim(S ∩ F(p(K_x(a)))) ≥ a` for every `a`, with coordinates ordered by `J_x`.
pub fn schubert_contains(s: &SmallFieldSubspace, k_x: &Subset, j_x: &Subset) -> Result<bool> {
    if s.rank() != k_x.len() || s.ambient_dim() != j_x.len() {
        return Err(Error::Domain(format!(
            "subspace of rank {} in dimension {} does not match {k_x} ⊆ {j_x}",
            s.rank(),
            s.ambient_dim()
        )));
    }
    let positions =
        k_x.positions_in(j_x).ok_or_else(|| Error::Containment(format!("{k_x} is not contained in {j_x}")))?;
    Ok(positions.elements().iter().enumerate().all(|(a, &p)| s.dim_meet_prefix(p as usize) > a))
}

/// Point counts across trials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub counts: Vec<u64>,
    pub mode: u64,
    pub min: u64,
    pub trials: usize,
    pub q: u32,
    pub seed: u64,
}

impl CountReport {
    fn from_counts(counts: Vec<u64>, q: u32, seed: u64) -> Self {
        let mut freq: BTreeMap<u64, usize> = BTreeMap::new();
        for &c in &counts {
            *freq.entry(c).or_default() += 1;
        }
        // ties go to the smaller count since BTreeMap iterates in ascending order
        let mode = freq.iter().fold((0u64, 0usize), |best, (&c, &n)| if n > best.1 { (c, n) } else { best }).0;
        let min = counts.iter().copied().min().unwrap_or(0);
        Self { trials: counts.len(), counts, mode, min, q, seed }
    }

    /// Number of trials that produced `count`.
    pub fn frequency(&self, count: u64) -> usize {
        self.counts.iter().filter(|&&c| c == count).count()
    }
}

/// Counts the families `S ∈ Ω(K)` with `v_a S_x ⊆ S_y` for random `v` over `F_q`.
pub fn count_stable_points(
    quiver: &Quiver,
    k: &SubsetFamily,
    j: &SubsetFamily,
    field_q: u32,
    trials: usize,
    seed: u64,
) -> Result<CountReport> {
    check_field(field_q)?;
    k.check_domain(quiver, "K")?;
    j.check_domain(quiver, "J")?;
    check_containment(k, j)?;
    let mut space = 1u64;
    for (kx, jx) in k.parts().iter().zip(j.parts()) {
        if jx.len() > MAX_AMBIENT_DIM {
            return Err(Error::Capacity(format!("ambient dimension {} exceeds {MAX_AMBIENT_DIM}", jx.len())));
        }
        space = space.saturating_mul(gaussian_binomial(jx.len() as u32, kx.len() as u32, field_q as u64));
    }
    if space > MAX_SEARCH_SPACE {
        return Err(Error::Capacity(format!("{space} candidate families exceed {MAX_SEARCH_SPACE}")));
    }
    let candidates: Vec<Vec<SmallFieldSubspace>> = k
        .parts()
        .iter()
        .zip(j.parts())
        .map(|(kx, jx)| {
            let all = enumerate_subspaces(jx.len(), kx.len(), field_q)?;
            let mut kept = Vec::new();
            for s in all {
                if schubert_contains(&s, kx, jx)? {
                    kept.push(s);
                }
            }
            Ok(kept)
        })
        .collect::<Result<_>>()?;
    let dims: Vec<usize> = j.parts().iter().map(Subset::len).collect();
    let counts = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let maps = sample_maps(quiver, &dims, field_q, seed, t);
            count_one(quiver, &candidates, &maps, field_q)
        })
        .collect();
    Ok(CountReport::from_counts(counts, field_q, seed))
}

/// Uniform matrices `v_a` of shape `dims[y] × dims[x]`, row-major.
fn sample_maps(quiver: &Quiver, dims: &[usize], q: u32, seed: u64, trial: u64) -> Vec<Vec<Vec<u32>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    quiver
        .arrows()
        .iter()
        .map(|&(x, y)| (0..dims[y]).map(|_| (0..dims[x]).map(|_| rng.gen_range(0..q)).collect()).collect())
        .collect()
}

fn apply(m: &[Vec<u32>], v: &[u32], q: u32) -> Vec<u32> {
    m.iter().map(|row| (row.iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % q as u64) as u32).collect()
}

fn count_one(quiver: &Quiver, candidates: &[Vec<SmallFieldSubspace>], maps: &[Vec<Vec<u32>>], q: u32) -> u64 {
    let n = candidates.len();
    // arrows checked once both endpoints are assigned, at the later vertex
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, &(x, y)) in quiver.arrows().iter().enumerate() {
        checks[x.max(y)].push(a);
    }
    let mut chosen = vec![0usize; n];
    fn rec(
        x: usize,
        quiver: &Quiver,
        candidates: &[Vec<SmallFieldSubspace>],
        maps: &[Vec<Vec<u32>>],
        checks: &[Vec<usize>],
        chosen: &mut [usize],
        q: u32,
    ) -> u64 {
        if x == candidates.len() {
            return 1;
        }
        let mut total = 0;
        'next: for i in 0..candidates[x].len() {
            chosen[x] = i;
            for &a in &checks[x] {
                let (s, t) = quiver.arrows()[a];
                let source = &candidates[s][chosen[s]];
                let target = &candidates[t][chosen[t]];
                if !source.basis().iter().all(|b| target.contains_vector(&apply(&maps[a], b, q))) {
                    continue 'next;
                }
            }
            total += rec(x + 1, quiver, candidates, maps, checks, chosen, q);
        }
        total
    }
    rec(0, quiver, candidates, maps, &checks, &mut chosen, q)
}

/// Heuristic: the point count is most often exactly one and `K` is intersecting.
pub fn estimate_p_membership(
    quiver: &Quiver,
    k: &SubsetFamily,
    j: &SubsetFamily,
    field_q: u32,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    let report = count_stable_points(quiver, k, j, field_q, trials, seed)?;
    if report.mode != 1 {
        return Ok(false);
    }
    let query = HornQuery::new(quiver, j.clone(), k.clone())?;
    Ok(horn_member(&query))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn fam(s: &str) -> SubsetFamily {
        SubsetFamily::parse_shorthand(s).unwrap()
    }

    fn set(s: &str) -> Subset {
        Subset::parse_shorthand(s).unwrap()
    }

    #[test]
    fn small_grassmannians() {
        assert_eq!(enumerate_subspaces(2, 1, 2).unwrap().len(), 3);
        assert_eq!(enumerate_subspaces(2, 1, 3).unwrap().len(), 4);
        assert_eq!(enumerate_subspaces(3, 1, 2).unwrap().len(), 7);
        assert_eq!(enumerate_subspaces(4, 0, 5).unwrap().len(), 1);
        assert!(matches!(enumerate_subspaces(5, 1, 2), Err(Error::Capacity(_))));
        assert!(matches!(enumerate_subspaces(2, 1, 17), Err(Error::Capacity(_))));
        assert!(matches!(enumerate_subspaces(2, 1, 4), Err(Error::Capacity(_))));
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        for q in [2u32, 3, 5] {
            for n in 0..=4usize {
                for r in 0..=n {
                    let subs = enumerate_subspaces(n, r, q).unwrap();
                    // independent count: number of r-frames divided by |GL_r|
                    let qq = q as u64;
                    let frames: u64 = (0..r as u32).map(|i| qq.pow(n as u32) - qq.pow(i)).product();
                    let group: u64 = (0..r as u32).map(|i| qq.pow(r as u32) - qq.pow(i)).product();
                    assert_eq!(subs.len() as u64, frames / group, "n={n} r={r} q={q}");
                    assert_eq!(subs.len() as u64, gaussian_binomial(n as u32, r as u32, qq));
                    let distinct: std::collections::HashSet<_> = subs.iter().collect();
                    assert_eq!(distinct.len(), subs.len());
                }
            }
        }
    }

    #[test]
    fn rref_is_canonical() {
        let a = SmallFieldSubspace::span(5, 3, &[vec![1, 2, 3], vec![0, 1, 1]]).unwrap();
        let b = SmallFieldSubspace::span(5, 3, &[vec![1, 3, 4], vec![2, 4, 1]]).unwrap();
        assert_eq!(a, b);
        assert!(a.contains_vector(&[2, 4, 1]));
        assert!(!a.contains_vector(&[0, 0, 1]));
    }

    #[test]
    fn schubert_membership() {
        let e1 = SmallFieldSubspace::span(11, 2, &[vec![1, 0]]).unwrap();
        let e2 = SmallFieldSubspace::span(11, 2, &[vec![0, 1]]).unwrap();
        assert!(schubert_contains(&e1, &set("1"), &set("12")).unwrap());
        assert!(!schubert_contains(&e2, &set("1"), &set("12")).unwrap());
        for s in enumerate_subspaces(3, 2, 3).unwrap() {
            assert!(schubert_contains(&s, &set("23"), &set("123")).unwrap());
        }
        assert!(matches!(schubert_contains(&e1, &set("12"), &set("12")), Err(Error::Domain(_))));
    }

    #[test]
    fn full_family_has_one_point() {
        let q = catalog::square();
        let j = fam("12;12;1;1");
        let report = count_stable_points(&q, &j, &j, 5, 6, 1).unwrap();
        assert!(report.counts.iter().all(|&c| c == 1));
        assert_eq!(report.mode, 1);
        assert!(estimate_p_membership(&q, &j, &j, 5, 6, 1).unwrap());
    }

    #[test]
    fn non_intersecting_family_has_no_points() {
        let q = catalog::square();
        let j = fam("12;123;123;12");
        let report = count_stable_points(&q, &fam("1;23;12;12"), &j, 11, 8, 0).unwrap();
        assert_eq!(report.mode, 0);
    }

    #[test]
    fn w2_has_two_points_most_often() {
        let q = catalog::w2();
        let report = count_stable_points(&q, &fam("2;2"), &fam("12;12"), 11, 1000, 0).unwrap();
        assert_eq!(report.mode, 2);
        assert!(!estimate_p_membership(&q, &fam("2;2"), &fam("12;12"), 11, 1000, 0).unwrap());
    }

    #[test]
    fn finite_fields_can_miss_generic_points() {
        // Horn-intersecting, yet the characteristic polynomial of a random
        // pencil is often irreducible over F_11 and then no line is stable.
        let q = catalog::w2();
        let report = count_stable_points(&q, &fam("2;2"), &fam("12;12"), 11, 200, 0).unwrap();
        assert_eq!(report.min, 0);
        assert!(report.frequency(0) > 0 && report.frequency(2) > 0);
    }

    #[test]
    fn mode_prefers_smaller_count_on_ties() {
        let r = CountReport::from_counts(vec![2, 0, 2, 0, 1], 11, 0);
        assert_eq!(r.mode, 0);
        assert_eq!(r.min, 0);
    }

    #[test]
    fn capacity_limits() {
        let q = catalog::single_arrow();
        let big = SubsetFamily::new(vec![Subset::full(5), Subset::full(1)]);
        assert!(matches!(count_stable_points(&q, &big, &big, 11, 1, 0), Err(Error::Capacity(_))));
    }
}
