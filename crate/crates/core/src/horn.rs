//! Recursive decision procedure for intersecting subset families.
//!
//! Everything here works on positions: a family `K ⊆ J` is stored as one
//! bitmask per vertex, bit `i` set when the `(i + 1)`-th element of `J_x`
//! lies in `K_x`. Membership only depends on these masks and on `|J_x|`, so
//! answers are cached on that data alone.

use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{check_containment, Subset, SubsetFamily};
use crate::quiver::{quiver_automorphisms, DimensionVector, Fingerprint, Quiver, QuiverAutomorphism};

/// Default cap on `Π_x 2^{|J_x|}` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_BOUND: u64 = 1 << 20;

/// Largest supported `|J_x|`.
pub const MAX_AMBIENT_SIZE: usize = 32;

/// A membership question `K ∈ Horn(J)`, optionally restricted to arrows along
/// which subfamilies must keep equal cardinalities at both ends.
#[derive(Clone, Debug)]
pub struct HornQuery<'q> {
    quiver: &'q Quiver,
    ambient: SubsetFamily,
    candidate: SubsetFamily,
    restricted: Vec<usize>,
}

impl<'q> HornQuery<'q> {
    pub fn new(quiver: &'q Quiver, ambient: SubsetFamily, candidate: SubsetFamily) -> Result<Self> {
        Self::restricted(quiver, ambient, candidate, Vec::new())
    }

    /// Query with a set of restricted arrow indices.
    pub fn restricted(
        quiver: &'q Quiver,
        ambient: SubsetFamily,
        candidate: SubsetFamily,
        mut restricted: Vec<usize>,
    ) -> Result<Self> {
        let n = quiver.vertex_count();
        if ambient.len() != n || candidate.len() != n {
            return Err(Error::Query(format!(
                "families have {} and {} components but the quiver has {n} vertices",
                ambient.len(),
                candidate.len()
            )));
        }
        check_containment(&candidate, &ambient).map_err(|e| Error::Query(e.to_string()))?;
        if let Some(big) = ambient.parts().iter().find(|j| j.len() > MAX_AMBIENT_SIZE) {
            return Err(Error::Capacity(format!("ambient set {big} has more than {MAX_AMBIENT_SIZE} elements")));
        }
        restricted.sort_unstable();
        restricted.dedup();
        for &a in &restricted {
            let Some(&(x, y)) = quiver.arrows().get(a) else {
                return Err(Error::Query(format!("arrow index {a} is out of range")));
            };
            if ambient.parts()[x].len() != ambient.parts()[y].len() {
                return Err(Error::Query(format!(
                    "restricted arrow {a} joins ambient sets of sizes {} and {}",
                    ambient.parts()[x].len(),
                    ambient.parts()[y].len()
                )));
            }
        }
        Ok(Self { quiver, ambient, candidate, restricted })
    }

    pub fn quiver(&self) -> &Quiver {
        self.quiver
    }

    pub fn ambient(&self) -> &SubsetFamily {
        &self.ambient
    }

    pub fn candidate(&self) -> &SubsetFamily {
        &self.candidate
    }

    pub fn restricted_arrows(&self) -> &[usize] {
        &self.restricted
    }

    fn context(&self) -> Context {
        Context::new(self.quiver, &self.restricted)
    }

    fn masks(&self) -> (Vec<u32>, Vec<u32>) {
        let cards = self.ambient.parts().iter().map(|j| j.len() as u32).collect();
        let masks = self
            .candidate
            .parts()
            .iter()
            .zip(self.ambient.parts())
            .map(|(k, j)| k.elements().iter().map(|&e| 1u32 << (j.position(e).expect("contained") - 1)).sum())
            .collect();
        (cards, masks)
    }
}

/// Positions-only memo key.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalKey {
    pub fingerprint: Fingerprint,
    pub ambient_sizes: Vec<u32>,
    pub positions: Vec<u32>,
    pub restricted: Arc<[(u32, u32)]>,
}

pub fn canonicalize(query: &HornQuery<'_>) -> CanonicalKey {
    let ctx = query.context();
    let (cards, masks) = query.masks();
    ctx.key(&cards, &masks)
}

/// Outcome of a membership test with a reason when it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornVerdict {
    pub member: bool,
    pub edim: i64,
    /// A proper subfamily `L ⊊ K` with `L ∈ Horn(K)`, `edim(L, K) = 0` and
    /// `edim(L, J) < 0`, given by its elements. `None` when the rejection is
    /// due to `edim(K, J) < 0`, or when the family is accepted.
    pub witness: Option<SubsetFamily>,
}

/// Quiver data needed by the recursion.
struct Context {
    fingerprint: Fingerprint,
    vertices: usize,
    arrows: Vec<(usize, usize)>,
    restricted_pairs: Arc<[(u32, u32)]>,
}

impl Context {
    fn new(quiver: &Quiver, restricted: &[usize]) -> Self {
        let mut pairs: Vec<(u32, u32)> =
            restricted.iter().map(|&a| quiver.arrows()[a]).map(|(x, y)| (x as u32, y as u32)).collect();
        pairs.sort_unstable();
        pairs.dedup();
        Self {
            fingerprint: quiver.fingerprint(),
            vertices: quiver.vertex_count(),
            arrows: quiver.arrows().to_vec(),
            restricted_pairs: pairs.into(),
        }
    }

    fn key(&self, cards: &[u32], masks: &[u32]) -> CanonicalKey {
        CanonicalKey {
            fingerprint: self.fingerprint.clone(),
            ambient_sizes: cards.to_vec(),
            positions: masks.to_vec(),
            restricted: self.restricted_pairs.clone(),
        }
    }

    /// `edim` of the subfamily with position masks `masks` inside ambient sets of sizes `cards`.
    fn edim(&self, cards: &[u32], masks: &[u32]) -> i64 {
        let mut total = 0i64;
        for &m in masks {
            total += position_sum(m) - triangular(m.count_ones());
        }
        for &(x, y) in &self.arrows {
            let kx = masks[x].count_ones() as i64;
            let ky = masks[y].count_ones() as i64;
            total -= kx * (cards[y] as i64 - ky);
        }
        total
    }

    fn respects_restriction(&self, masks: &[u32]) -> bool {
        self.restricted_pairs.iter().all(|&(x, y)| masks[x as usize].count_ones() == masks[y as usize].count_ones())
    }
}

fn position_sum(mut m: u32) -> i64 {
    let mut s = 0i64;
    while m != 0 {
        s += m.trailing_zeros() as i64 + 1;
        m &= m - 1;
    }
    s
}

fn triangular(c: u32) -> i64 {
    let c = c as i64;
    c * (c + 1) / 2
}

/// Positions of the set bits of `sub` among the set bits of `within`.
fn compress(sub: u32, within: u32) -> u32 {
    let mut out = 0u32;
    let mut rank = 0;
    let mut w = within;
    while w != 0 {
        let bit = w & w.wrapping_neg();
        if sub & bit != 0 {
            out |= 1 << rank;
        }
        rank += 1;
        w &= w - 1;
    }
    out
}

fn full_mask(card: u32) -> u32 {
    if card >= 32 {
        u32::MAX
    } else {
        (1u32 << card) - 1
    }
}

/// Steps `sub` to the next submask tuple of `within` in descending order,
/// returning `false` once every tuple has been produced.
fn next_submask(sub: &mut [u32], within: &[u32]) -> bool {
    for x in 0..sub.len() {
        if sub[x] != 0 {
            sub[x] = (sub[x] - 1) & within[x];
            return true;
        }
        sub[x] = within[x];
    }
    false
}

/// Membership engine with a concurrent memo table.
pub struct HornEngine {
    cache: DashMap<CanonicalKey, bool>,
    enumeration_bound: u64,
    use_cache: bool,
}

impl Default for HornEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl HornEngine {
    pub fn new() -> Self {
        Self { cache: DashMap::new(), enumeration_bound: DEFAULT_ENUMERATION_BOUND, use_cache: true }
    }

    /// Engine that recomputes every subproblem.
    pub fn uncached() -> Self {
        Self { use_cache: false, ..Self::new() }
    }

    pub fn with_enumeration_bound(mut self, bound: u64) -> Self {
        self.enumeration_bound = bound;
        self
    }

    /// Process-wide engine shared by the free functions in this module.
    pub fn global() -> &'static HornEngine {
        static ENGINE: OnceLock<HornEngine> = OnceLock::new();
        ENGINE.get_or_init(HornEngine::new)
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    pub fn clear_cache(&self) {
        self.cache.clear();
    }

    pub fn member(&self, query: &HornQuery<'_>) -> bool {
        let ctx = query.context();
        let (cards, masks) = query.masks();
        self.decide(&ctx, &cards, &masks)
    }

    pub fn verdict(&self, query: &HornQuery<'_>) -> HornVerdict {
        let ctx = query.context();
        let (cards, masks) = query.masks();
        let edim = ctx.edim(&cards, &masks);
        let full = cards.iter().zip(&masks).all(|(&c, &m)| m == full_mask(c));
        if full {
            return HornVerdict { member: true, edim, witness: None };
        }
        if edim < 0 {
            return HornVerdict { member: false, edim, witness: None };
        }
        match self.find_witness(&ctx, &cards, &masks) {
            None => HornVerdict { member: true, edim, witness: None },
            Some(l) => {
                let parts = query
                    .ambient
                    .parts()
                    .iter()
                    .zip(&l)
                    .map(|(j, &m)| mask_to_subset(m).select_from(j).expect("positions within ambient"))
                    .collect();
                HornVerdict { member: false, edim, witness: Some(SubsetFamily::new(parts)) }
            }
        }
    }

    fn decide(&self, ctx: &Context, cards: &[u32], masks: &[u32]) -> bool {
        if cards.iter().zip(masks).all(|(&c, &m)| m == full_mask(c)) {
            return true;
        }
        if ctx.edim(cards, masks) < 0 {
            return false;
        }
        if !self.use_cache {
            return self.find_witness(ctx, cards, masks).is_none();
        }
        let key = ctx.key(cards, masks);
        if let Some(hit) = self.cache.get(&key) {
            return *hit;
        }
        let answer = self.find_witness(ctx, cards, masks).is_none();
        self.cache.insert(key, answer);
        answer
    }

    /// Searches for a proper subfamily of `masks` that violates the recursive
    /// condition; returns its positions inside the ambient sets.
    fn find_witness(&self, ctx: &Context, cards: &[u32], masks: &[u32]) -> Option<Vec<u32>> {
        let sub_cards: Vec<u32> = masks.iter().map(|m| m.count_ones()).collect();
        let mut sub = masks.to_vec();
        let mut inner = vec![0u32; masks.len()];
        // skip L = K itself
        while next_submask(&mut sub, masks) {
            if ctx.edim(cards, &sub) >= 0 {
                continue;
            }
            if !ctx.respects_restriction(&sub) {
                continue;
            }
            for x in 0..ctx.vertices {
                inner[x] = compress(sub[x], masks[x]);
            }
            if ctx.edim(&sub_cards, &inner) != 0 {
                continue;
            }
            if self.decide(ctx, &sub_cards, &inner) {
                return Some(sub);
            }
        }
        None
    }

    /// All `K ⊆ J` in `Horn(J)`, sorted.
    pub fn enumerate_intersecting(
        &self,
        quiver: &Quiver,
        ambient: &SubsetFamily,
        edim_zero_only: bool,
        up_to_symmetry: bool,
    ) -> Result<Vec<SubsetFamily>> {
        let probe = HornQuery::new(quiver, ambient.clone(), ambient.clone())?;
        let ctx = probe.context();
        let cards: Vec<u32> = ambient.parts().iter().map(|j| j.len() as u32).collect();
        let bits: u32 = cards.iter().sum();
        if bits >= 64 || (1u64 << bits) > self.enumeration_bound {
            return Err(Error::Capacity(format!(
                "enumeration universe 2^{bits} exceeds the bound {}",
                self.enumeration_bound
            )));
        }
        let universe = 1u64 << bits;
        let mut found: Vec<SubsetFamily> = (0..universe)
            .into_par_iter()
            .filter_map(|code| {
                let masks = split_code(code, &cards);
                if edim_zero_only && ctx.edim(&cards, &masks) != 0 {
                    return None;
                }
                self.decide(&ctx, &cards, &masks).then(|| masks_to_family(&masks, ambient))
            })
            .collect();
        if up_to_symmetry {
            let group = stabilizer(quiver, ambient.parts())?;
            found.retain(|k| is_orbit_representative(k, &group));
        }
        found.sort();
        Ok(found)
    }

    pub fn schofield_member(&self, quiver: &Quiver, alpha: &DimensionVector, n: &DimensionVector) -> Result<bool> {
        let (ambient, candidate) = schofield_families(quiver, alpha, n)?;
        let query = HornQuery::new(quiver, ambient, candidate)?;
        Ok(self.member(&query))
    }

    /// All Schofield subdimension vectors `0 ≤ α ≤ n`, sorted lexicographically.
    pub fn enumerate_schofield(
        &self,
        quiver: &Quiver,
        n: &DimensionVector,
        up_to_symmetry: bool,
    ) -> Result<Vec<DimensionVector>> {
        n.check_domain(quiver, "n")?;
        let candidates: u64 = n.as_slice().iter().map(|&d| d as u64 + 1).product();
        if candidates > self.enumeration_bound {
            return Err(Error::Capacity(format!(
                "{candidates} candidate vectors exceed the bound {}",
                self.enumeration_bound
            )));
        }
        let mut found: Vec<DimensionVector> = (0..candidates)
            .into_par_iter()
            .map(|code| {
                let mut rest = code;
                let alpha: Vec<u32> = n
                    .as_slice()
                    .iter()
                    .map(|&d| {
                        let v = (rest % (d as u64 + 1)) as u32;
                        rest /= d as u64 + 1;
                        v
                    })
                    .collect();
                let alpha = DimensionVector::new(alpha);
                self.schofield_member(quiver, &alpha, n).map(|ok| ok.then_some(alpha))
            })
            .filter_map(|r| r.transpose())
            .collect::<Result<_>>()?;
        if up_to_symmetry {
            let group = stabilizer(quiver, n.as_slice())?;
            found.retain(|a| group.iter().all(|g| DimensionVector::new(g.permute(a.as_slice())) >= *a));
        }
        found.sort();
        Ok(found)
    }

    pub fn belkale_member(&self, s: usize, r: u32, n: u32, k: &SubsetFamily) -> Result<bool> {
        let quiver = crate::catalog::horn(s);
        if k.len() != s + 1 {
            return Err(Error::Query(format!("expected {} subsets, got {}", s + 1, k.len())));
        }
        if let Some(bad) = k.parts().iter().find(|kx| kx.len() != r as usize) {
            return Err(Error::Query(format!("subset {bad} does not have {r} elements")));
        }
        if r > n {
            return Err(Error::Query(format!("rank {r} exceeds the ambient dimension {n}")));
        }
        let ambient = SubsetFamily::new(vec![Subset::full(n); s + 1]);
        let all: Vec<usize> = (0..quiver.arrow_count()).collect();
        let query = HornQuery::restricted(&quiver, ambient, k.clone(), all)?;
        Ok(self.member(&query))
    }
}

/// Membership through the shared engine.
pub fn horn_member(query: &HornQuery<'_>) -> bool {
    HornEngine::global().member(query)
}

pub fn horn_verdict(query: &HornQuery<'_>) -> HornVerdict {
    HornEngine::global().verdict(query)
}

pub fn enumerate_intersecting(
    quiver: &Quiver,
    ambient: &SubsetFamily,
    edim_zero_only: bool,
    up_to_symmetry: bool,
) -> Result<Vec<SubsetFamily>> {
    HornEngine::global().enumerate_intersecting(quiver, ambient, edim_zero_only, up_to_symmetry)
}

pub fn schofield_member(quiver: &Quiver, alpha: &DimensionVector, n: &DimensionVector) -> Result<bool> {
    HornEngine::global().schofield_member(quiver, alpha, n)
}

pub fn enumerate_schofield(quiver: &Quiver, n: &DimensionVector, up_to_symmetry: bool) -> Result<Vec<DimensionVector>> {
    HornEngine::global().enumerate_schofield(quiver, n, up_to_symmetry)
}

pub fn belkale_member(s: usize, r: u32, n: u32, k: &SubsetFamily) -> Result<bool> {
    HornEngine::global().belkale_member(s, r, n, k)
}

/// `J_x = {1..n_x}` and `K_x` the top `α_x` elements of `J_x`.
pub fn schofield_families(
    quiver: &Quiver,
    alpha: &DimensionVector,
    n: &DimensionVector,
) -> Result<(SubsetFamily, SubsetFamily)> {
    alpha.check_domain(quiver, "alpha")?;
    n.check_domain(quiver, "n")?;
    if !alpha.le(n) {
        return Err(Error::Domain(format!("{alpha} is not bounded by {n}")));
    }
    let ambient = SubsetFamily::standard(n);
    let candidate =
        SubsetFamily::new(alpha.as_slice().iter().zip(n.as_slice()).map(|(&a, &d)| Subset::top(d, a)).collect());
    Ok((ambient, candidate))
}

/// Automorphisms of `quiver` that fix the per-vertex data.
pub fn stabilizer<T: PartialEq + Clone>(quiver: &Quiver, data: &[T]) -> Result<Vec<QuiverAutomorphism>> {
    Ok(quiver_automorphisms(quiver)?.into_iter().filter(|g| g.permute(data) == data).collect())
}

/// True if `family` is the least element of its orbit.
pub fn is_orbit_representative(family: &SubsetFamily, group: &[QuiverAutomorphism]) -> bool {
    group.iter().all(|g| family.permuted(g) >= *family)
}

pub fn orbit_representative(family: &SubsetFamily, group: &[QuiverAutomorphism]) -> SubsetFamily {
    group.iter().map(|g| family.permuted(g)).min().unwrap_or_else(|| family.clone())
}

fn split_code(mut code: u64, cards: &[u32]) -> Vec<u32> {
    cards
        .iter()
        .map(|&c| {
            let m = (code & ((1u64 << c) - 1)) as u32;
            code >>= c;
            m
        })
        .collect()
}

fn mask_to_subset(mask: u32) -> Subset {
    Subset::new((0..32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()).expect("increasing")
}

fn masks_to_family(masks: &[u32], ambient: &SubsetFamily) -> SubsetFamily {
    SubsetFamily::new(
        masks
            .iter()
            .zip(ambient.parts())
            .map(|(&m, j)| mask_to_subset(m).select_from(j).expect("within ambient"))
            .collect(),
    )
}
