//! Quivers, dimension vectors and quiver automorphisms.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on the vertex count for exhaustive automorphism search.
pub const DEFAULT_AUTOMORPHISM_BOUND: usize = 10;

/// A finite directed multigraph. Loops, cycles and parallel arrows are allowed.
///
/// Vertices are identified by opaque string labels; internally everything is
/// indexed by the position of the vertex in the declared order. The order of
/// arrows is stable and fixes the basis order of downstream matrices.
#[derive(Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<(usize, usize)>,
    index: HashMap<String, usize>,
}

/// Sorted arrow list over vertex indices together with the vertex count.
///
/// Two quivers with equal fingerprints are identical up to renaming vertices.
pub type Fingerprint = Arc<[u32]>;

impl Quiver {
    /// Builds a quiver from vertex labels and arrows given as `(source, target)` labels.
    pub fn new<V, A, S, T>(vertices: V, arrows: A) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        A: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let index = Self::build_index(&vertices)?;
        let arrows = arrows
            .into_iter()
            .map(|(s, t)| {
                let (s, t): (String, String) = (s.into(), t.into());
                let si = *index.get(&s).ok_or_else(|| Error::Quiver(format!("arrow source `{s}` is not a vertex")))?;
                let ti = *index.get(&t).ok_or_else(|| Error::Quiver(format!("arrow target `{t}` is not a vertex")))?;
                Ok((si, ti))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { vertices, arrows, index })
    }

    /// Builds a quiver from vertex labels and arrows given as index pairs.
    pub fn from_indices<V>(vertices: V, arrows: Vec<(usize, usize)>) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let index = Self::build_index(&vertices)?;
        if let Some(&(s, t)) = arrows.iter().find(|&&(s, t)| s >= vertices.len() || t >= vertices.len()) {
            return Err(Error::Quiver(format!("arrow ({s}, {t}) refers to a missing vertex")));
        }
        Ok(Self { vertices, arrows, index })
    }

    /// Quiver on vertices labeled `1..=n`.
    pub fn numbered(n: usize, arrows: &[(usize, usize)]) -> Result<Self> {
        Self::from_indices((1..=n).map(|i| i.to_string()), arrows.iter().map(|&(s, t)| (s - 1, t - 1)).collect())
    }

    fn build_index(vertices: &[String]) -> Result<HashMap<String, usize>> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::Quiver(format!("duplicate vertex `{v}`")));
            }
        }
        Ok(index)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn label(&self, vertex: usize) -> &str {
        &self.vertices[vertex]
    }

    /// Number of arrows from `source` to `target`.
    pub fn multiplicity(&self, source: usize, target: usize) -> usize {
        self.arrows.iter().filter(|&&a| a == (source, target)).count()
    }

    /// True if the quiver has no oriented cycle (loops count as cycles).
    pub fn is_acyclic(&self) -> bool {
        let n = self.vertex_count();
        let mut indegree = vec![0usize; n];
        for &(_, t) in &self.arrows {
            indegree[t] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &(s, t) in &self.arrows {
                if s == v {
                    indegree[t] -= 1;
                    if indegree[t] == 0 {
                        stack.push(t);
                    }
                }
            }
        }
        seen == n
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let mut arrows: Vec<(u32, u32)> = self.arrows.iter().map(|&(s, t)| (s as u32, t as u32)).collect();
        arrows.sort_unstable();
        let mut out = Vec::with_capacity(1 + 2 * arrows.len());
        out.push(self.vertex_count() as u32);
        for (s, t) in arrows {
            out.push(s);
            out.push(t);
        }
        out.into()
    }
}

impl fmt::Debug for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrows: Vec<String> =
            self.arrows.iter().map(|&(s, t)| format!("{}->{}", self.vertices[s], self.vertices[t])).collect();
        f.debug_struct("Quiver").field("vertices", &self.vertices).field("arrows", &arrows).finish()
    }
}

/// Per-vertex nonnegative integers, stored in the quiver's vertex order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DimensionVector(pub Vec<u32>);

impl DimensionVector {
    pub fn new(values: Vec<u32>) -> Self {
        Self(values)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&d| d as u64).sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub(crate) fn check_domain(&self, quiver: &Quiver, what: &str) -> Result<()> {
        if self.0.len() != quiver.vertex_count() {
            return Err(Error::Domain(format!(
                "{what} has {} entries but the quiver has {} vertices",
                self.0.len(),
                quiver.vertex_count()
            )));
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for DimensionVector {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// `⟨α, β⟩ = Σ_x α_x β_x − Σ_{a: x→y} α_x β_y`.
pub fn euler_form(quiver: &Quiver, alpha: &DimensionVector, beta: &DimensionVector) -> Result<i64> {
    alpha.check_domain(quiver, "alpha")?;
    beta.check_domain(quiver, "beta")?;
    let diagonal: i64 = alpha.0.iter().zip(&beta.0).map(|(&a, &b)| a as i64 * b as i64).sum();
    Ok(diagonal - arrow_pairing(quiver, alpha.as_slice(), beta.as_slice()))
}

/// `Σ_{a: x→y} α_x β_y`, the dimension of `H_Q(α, β)`.
pub(crate) fn arrow_pairing(quiver: &Quiver, alpha: &[u32], beta: &[u32]) -> i64 {
    quiver.arrows().iter().map(|&(x, y)| alpha[x] as i64 * beta[y] as i64).sum()
}

/// A vertex permutation `σ` preserving the arrow multiset; `σ(x) = image[x]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuiverAutomorphism {
    image: Vec<usize>,
}

impl QuiverAutomorphism {
    pub fn identity(n: usize) -> Self {
        Self { image: (0..n).collect() }
    }

    /// Wraps a permutation without checking that it is an automorphism.
    pub fn from_images(image: Vec<usize>) -> Self {
        Self { image }
    }

    pub fn image(&self, vertex: usize) -> usize {
        self.image[vertex]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        Self { image: inv }
    }

    /// Transports per-vertex data: the value at `x` moves to `σ(x)`.
    pub fn permute<T: Clone>(&self, data: &[T]) -> Vec<T> {
        let mut out = data.to_vec();
        for (x, value) in data.iter().enumerate() {
            out[self.image[x]] = value.clone();
        }
        out
    }

    pub fn is_automorphism_of(&self, quiver: &Quiver) -> bool {
        let n = quiver.vertex_count();
        if self.image.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &j in &self.image {
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return false;
            }
        }
        let mut original: Vec<(usize, usize)> = quiver.arrows().to_vec();
        let mut moved: Vec<(usize, usize)> =
            quiver.arrows().iter().map(|&(s, t)| (self.image[s], self.image[t])).collect();
        original.sort_unstable();
        moved.sort_unstable();
        original == moved
    }
}

/// All automorphisms of `quiver`, sorted, identity first.
pub fn quiver_automorphisms(quiver: &Quiver) -> Result<Vec<QuiverAutomorphism>> {
    quiver_automorphisms_bounded(quiver, DEFAULT_AUTOMORPHISM_BOUND)
}

pub fn quiver_automorphisms_bounded(quiver: &Quiver, max_vertices: usize) -> Result<Vec<QuiverAutomorphism>> {
    let n = quiver.vertex_count();
    if n > max_vertices {
        return Err(Error::Capacity(format!("automorphism search over {n} vertices exceeds the bound {max_vertices}")));
    }
    let mut mult = vec![vec![0usize; n]; n];
    for &(s, t) in quiver.arrows() {
        mult[s][t] += 1;
    }
    let mut found = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend_partial(0, &mult, &mut image, &mut used, &mut found);
    found.sort();
    Ok(found)
}

// Depth-first over all injective assignments; a branch is cut as soon as an
// arrow multiplicity between assigned vertices disagrees.
fn extend_partial(
    depth: usize,
    mult: &[Vec<usize>],
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    found: &mut Vec<QuiverAutomorphism>,
) {
    let n = mult.len();
    if depth == n {
        found.push(QuiverAutomorphism { image: image.clone() });
        return;
    }
    for candidate in 0..n {
        if used[candidate] {
            continue;
        }
        image[depth] = candidate;
        let consistent = (0..=depth)
            .all(|u| mult[depth][u] == mult[candidate][image[u]] && mult[u][depth] == mult[image[u]][candidate]);
        if consistent {
            used[candidate] = true;
            extend_partial(depth + 1, mult, image, used, found);
            used[candidate] = false;
        }
    }
    image[depth] = usize::MAX;
}
