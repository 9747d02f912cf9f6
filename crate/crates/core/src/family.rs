//! Subset families, filtration profiles and the closed-form dimension counts
//! built from them.
//!
//! A finite set `J = {j_1 < … < j_ℓ}` of positive integers stands for the
//! coordinate space `V(J)` with its standard filtration; a subfamily `K ⊆ J`
//! stands for the coordinate subspaces `V(K)` and hence for the Schubert
//! variety they generate. All quantities below depend only on the positions
//! of `K` inside `J`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::{arrow_pairing, DimensionVector, Quiver, QuiverAutomorphism};

/// Strictly increasing list of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Subset(Vec<u32>);

impl Subset {
    pub fn new(elements: Vec<u32>) -> Result<Self> {
        if elements.first() == Some(&0) {
            return Err(Error::Domain("subset elements must be positive".into()));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(format!("subset {elements:?} is not strictly increasing")));
        }
        Ok(Self(elements))
    }

    /// Sorts and deduplicates.
    pub fn from_unsorted(mut elements: Vec<u32>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        Self::new(elements)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// `{1, …, n}`.
    pub fn full(n: u32) -> Self {
        Self((1..=n).collect())
    }

    /// The top `k` elements `{n − k + 1, …, n}` of `{1, …, n}`.
    pub fn top(n: u32, k: u32) -> Self {
        Self((n - k + 1..=n).collect())
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: u32) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    /// 1-based rank of `e` in the set.
    pub fn position(&self, e: u32) -> Option<usize> {
        self.0.binary_search(&e).ok().map(|i| i + 1)
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.0.iter().all(|&e| other.contains(e))
    }

    /// True if the set is `{1, …, len}`.
    pub fn is_standard(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &e)| e as usize == i + 1)
    }

    /// Elements of `ambient` not in `self`.
    pub fn complement_in(&self, ambient: &Subset) -> Subset {
        Subset(ambient.0.iter().copied().filter(|&e| !self.contains(e)).collect())
    }

    /// Positions of the elements of `self` inside `ambient`, as a subset of `{1, …, |ambient|}`.
    pub fn positions_in(&self, ambient: &Subset) -> Option<Subset> {
        self.0.iter().map(|&e| ambient.position(e).map(|p| p as u32)).collect::<Option<Vec<_>>>().map(Subset)
    }

    /// Inverse of [`Subset::positions_in`]: picks the elements of `ambient` at the given positions.
    pub fn select_from(&self, ambient: &Subset) -> Option<Subset> {
        self.0
            .iter()
            .map(|&p| ambient.0.get((p as usize).checked_sub(1)?).copied())
            .collect::<Option<Vec<_>>>()
            .map(Subset)
    }

    /// Compact notation: `12` for `{1, 2}`, empty string for `∅`.
    /// Elements above 9 are written comma separated.
    pub fn shorthand(&self) -> String {
        if self.0.iter().all(|&e| e < 10) {
            self.0.iter().map(|e| e.to_string()).collect()
        } else {
            self.0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
        }
    }

    pub fn parse_shorthand(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" || s == "∅" {
            return Ok(Self::empty());
        }
        let elements: Vec<u32> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Domain(format!("bad element `{t}`: {e}"))))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| Error::Domain(format!("bad digit `{c}` in subset `{s}`"))))
                .collect::<Result<_>>()?
        };
        Self::new(elements)
    }
}

impl TryFrom<Vec<u32>> for Subset {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Subset> for Vec<u32> {
    fn from(s: Subset) -> Self {
        s.0
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "{}", self.shorthand())
        }
    }
}

/// One subset per vertex, in the quiver's vertex order.
///
/// Families are totally ordered by their cardinality vector first and then
/// lexicographically by the per-vertex element lists; orbit representatives
/// are the least elements in this order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetFamily(pub Vec<Subset>);

impl SubsetFamily {
    pub fn new(parts: Vec<Subset>) -> Self {
        Self(parts)
    }

    /// Builds a family from raw element lists.
    pub fn from_lists<I, L>(lists: I) -> Result<Self>
    where
        I: IntoIterator<Item = L>,
        L: AsRef<[u32]>,
    {
        lists.into_iter().map(|l| Subset::new(l.as_ref().to_vec())).collect::<Result<Vec<_>>>().map(Self)
    }

    /// `J_x = {1, …, n_x}`.
    pub fn standard(dims: &DimensionVector) -> Self {
        Self(dims.as_slice().iter().map(|&n| Subset::full(n)).collect())
    }

    pub fn empty(vertices: usize) -> Self {
        Self(vec![Subset::empty(); vertices])
    }

    /// Parses the `;`-separated shorthand, e.g. `"1;23;23;12"`.
    pub fn parse_shorthand(s: &str) -> Result<Self> {
        s.split(';').map(Subset::parse_shorthand).collect::<Result<Vec<_>>>().map(Self)
    }

    pub fn shorthand(&self) -> String {
        self.0.iter().map(Subset::shorthand).collect::<Vec<_>>().join(";")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parts(&self) -> &[Subset] {
        &self.0
    }

    pub fn cardinalities(&self) -> DimensionVector {
        DimensionVector::new(self.0.iter().map(|s| s.len() as u32).collect())
    }

    pub fn is_subfamily_of(&self, other: &SubsetFamily) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(k, j)| k.is_subset_of(j))
    }

    /// Per-vertex positions of `self` inside `ambient`.
    pub fn positions_in(&self, ambient: &SubsetFamily) -> Result<SubsetFamily> {
        check_containment(self, ambient)?;
        Ok(Self(self.0.iter().zip(&ambient.0).map(|(k, j)| k.positions_in(j).expect("containment checked")).collect()))
    }

    pub fn complement_in(&self, ambient: &SubsetFamily) -> SubsetFamily {
        Self(self.0.iter().zip(&ambient.0).map(|(k, j)| k.complement_in(j)).collect())
    }

    /// The family moved along a vertex permutation: `K_x` is placed at `σ(x)`.
    pub fn permuted(&self, sigma: &QuiverAutomorphism) -> SubsetFamily {
        Self(sigma.permute(&self.0))
    }

    pub(crate) fn check_domain(&self, quiver: &Quiver, what: &str) -> Result<()> {
        if self.len() != quiver.vertex_count() {
            return Err(Error::Domain(format!(
                "{what} has {} components but the quiver has {} vertices",
                self.len(),
                quiver.vertex_count()
            )));
        }
        Ok(())
    }
}

impl Ord for SubsetFamily {
    fn cmp(&self, other: &Self) -> Ordering {
        let sizes = |f: &SubsetFamily| f.0.iter().map(Subset::len).collect::<Vec<_>>();
        sizes(self).cmp(&sizes(other)).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for SubsetFamily {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SubsetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn check_containment(k: &SubsetFamily, j: &SubsetFamily) -> Result<()> {
    if k.len() != j.len() {
        return Err(Error::Domain(format!("families have {} and {} components", k.len(), j.len())));
    }
    for (x, (kx, jx)) in k.0.iter().zip(&j.0).enumerate() {
        if !kx.is_subset_of(jx) {
            return Err(Error::Containment(format!("component {x}: {kx} is not contained in {jx}")));
        }
    }
    Ok(())
}

/// Per-vertex dimension sequences `d(0) = 0 ≤ d(1) ≤ … ≤ d(ℓ_x)` with unit steps.
///
/// Lengths may differ between vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiltrationProfile {
    levels: Vec<Vec<u32>>,
}

impl FiltrationProfile {
    pub fn new(levels: Vec<Vec<u32>>) -> Result<Self> {
        for (x, seq) in levels.iter().enumerate() {
            if seq.first() != Some(&0) {
                return Err(Error::Profile(format!("vertex {x}: profile must start at 0")));
            }
            if seq.windows(2).any(|w| w[1] < w[0] || w[1] > w[0] + 1) {
                return Err(Error::Profile(format!("vertex {x}: steps must be 0 or 1, got {seq:?}")));
            }
        }
        Ok(Self { levels })
    }

    /// Complete flag `(0, 1, …, n_x)` at every vertex.
    pub fn standard(dims: &DimensionVector) -> Self {
        Self { levels: dims.as_slice().iter().map(|&n| (0..=n).collect()).collect() }
    }

    /// The zero space filtered with the given lengths.
    pub fn zero(lengths: &[usize]) -> Self {
        Self { levels: lengths.iter().map(|&l| vec![0; l + 1]).collect() }
    }

    pub fn vertex_count(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self, vertex: usize) -> &[u32] {
        &self.levels[vertex]
    }

    pub fn length(&self, vertex: usize) -> usize {
        self.levels[vertex].len() - 1
    }

    pub fn lengths(&self) -> Vec<usize> {
        (0..self.vertex_count()).map(|x| self.length(x)).collect()
    }

    /// Dimension of the filtered space at each vertex (the final level).
    pub fn dims(&self) -> DimensionVector {
        DimensionVector::new(self.levels.iter().map(|l| *l.last().expect("nonempty")).collect())
    }

    /// Smallest index `i` with `d(i) = a`, for `a = 1..=d(ℓ)`.
    pub fn jump_indices(&self, vertex: usize) -> Vec<usize> {
        let seq = &self.levels[vertex];
        (1..seq.len()).filter(|&i| seq[i] > seq[i - 1]).collect()
    }
}

/// `Σ_x Σ_a (p(K_x(a), J_x) − a)`: the dimension of the Schubert variety of `K` inside `V(J)`.
pub fn schubert_dim(k: &SubsetFamily, j: &SubsetFamily) -> Result<i64> {
    check_containment(k, j)?;
    Ok(k.0
        .iter()
        .zip(&j.0)
        .map(|(kx, jx)| {
            kx.elements()
                .iter()
                .enumerate()
                .map(|(a, &e)| jx.position(e).expect("contained") as i64 - (a as i64 + 1))
                .sum::<i64>()
        })
        .sum())
}

/// Expected dimension `schubert_dim(K, J) − Σ_{a: x→y} |K_x| (|J_y| − |K_y|)`.
pub fn edim(quiver: &Quiver, k: &SubsetFamily, j: &SubsetFamily) -> Result<i64> {
    k.check_domain(quiver, "K")?;
    j.check_domain(quiver, "J")?;
    let dim = schubert_dim(k, j)?;
    let sub = k.cardinalities();
    let quotient: Vec<u32> = k.0.iter().zip(&j.0).map(|(kx, jx)| (jx.len() - kx.len()) as u32).collect();
    Ok(dim - arrow_pairing(quiver, sub.as_slice(), &quotient))
}

/// Profile of `V(K)` with the filtration induced from `F(J)`.
pub fn sub_profile(k: &SubsetFamily, j: &SubsetFamily) -> Result<FiltrationProfile> {
    check_containment(k, j)?;
    let levels =
        k.0.iter()
            .zip(&j.0)
            .map(|(kx, jx)| {
                let mut seq = Vec::with_capacity(jx.len() + 1);
                seq.push(0);
                let mut count = 0;
                for &e in jx.elements() {
                    if kx.contains(e) {
                        count += 1;
                    }
                    seq.push(count);
                }
                seq
            })
            .collect();
    Ok(FiltrationProfile { levels })
}

/// Profile of `V(J)/V(K)` with the induced quotient filtration.
pub fn quotient_profile(k: &SubsetFamily, j: &SubsetFamily) -> Result<FiltrationProfile> {
    let sub = sub_profile(k, j)?;
    let levels =
        sub.levels.into_iter().map(|seq| seq.into_iter().enumerate().map(|(i, d)| i as u32 - d).collect()).collect();
    Ok(FiltrationProfile { levels })
}

/// Dimension of the space of filtration-preserving maps `(V, F) → (W, G)`,
/// summed over vertices: `Σ_a dim G(i_a)` where `i_a` is the first index with
/// `dim F(i_a) = a`.
pub fn dim_filtered_hom(f: &FiltrationProfile, g: &FiltrationProfile) -> Result<i64> {
    if f.vertex_count() != g.vertex_count() {
        return Err(Error::Profile(format!("profiles cover {} and {} vertices", f.vertex_count(), g.vertex_count())));
    }
    let mut total = 0i64;
    for x in 0..f.vertex_count() {
        if f.length(x) != g.length(x) {
            return Err(Error::Profile(format!(
                "vertex {x}: filtration lengths {} and {} differ",
                f.length(x),
                g.length(x)
            )));
        }
        let gx = g.levels(x);
        total += f.jump_indices(x).into_iter().map(|i| gx[i] as i64).sum::<i64>();
    }
    Ok(total)
}

/// `dim g_{Q,F,G}(V, W) − dim H_Q(V, W)`.
pub fn filtered_euler(
    quiver: &Quiver,
    f: &FiltrationProfile,
    g: &FiltrationProfile,
    dim_v: &DimensionVector,
    dim_w: &DimensionVector,
) -> Result<i64> {
    dim_v.check_domain(quiver, "dim V")?;
    dim_w.check_domain(quiver, "dim W")?;
    if f.vertex_count() != quiver.vertex_count() || g.vertex_count() != quiver.vertex_count() {
        return Err(Error::Domain("profiles do not cover the quiver's vertices".into()));
    }
    if &f.dims() != dim_v || &g.dims() != dim_w {
        return Err(Error::Domain(format!(
            "profiles end at {} and {} but the dimensions are {} and {}",
            f.dims(),
            g.dims(),
            dim_v,
            dim_w
        )));
    }
    Ok(dim_filtered_hom(f, g)? - arrow_pairing(quiver, dim_v.as_slice(), dim_w.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn fam(s: &str) -> SubsetFamily {
        SubsetFamily::parse_shorthand(s).unwrap()
    }

    fn profile(levels: &[&[u32]]) -> FiltrationProfile {
        FiltrationProfile::new(levels.iter().map(|l| l.to_vec()).collect()).unwrap()
    }

    const SQUARE_J: &str = "12;123;123;12";

    #[test]
    fn square_quiver_worked_example() {
        let q = catalog::square();
        let j = fam(SQUARE_J);
        let s = fam("1;23;23;12");
        let s_hat = fam("1;23;12;12");
        assert_eq!(schubert_dim(&s, &j).unwrap(), 4);
        assert_eq!(edim(&q, &s, &j).unwrap(), 2);
        assert_eq!(schubert_dim(&s_hat, &j).unwrap(), 2);
        assert_eq!(edim(&q, &s_hat, &j).unwrap(), 0);
    }

    #[test]
    fn w2_edim() {
        let q = catalog::w2();
        assert_eq!(edim(&q, &fam("2;2"), &fam("12;12")).unwrap(), 0);
    }

    #[test]
    fn schubert_dim_trivial_cases() {
        let j = fam(SQUARE_J);
        assert_eq!(schubert_dim(&j, &j).unwrap(), 0);
        assert_eq!(schubert_dim(&SubsetFamily::empty(4), &j).unwrap(), 0);
    }

    #[test]
    fn containment_is_checked() {
        let q = catalog::square();
        let err = edim(&q, &fam("3;;;"), &fam(SQUARE_J)).unwrap_err();
        assert!(matches!(err, Error::Containment(_)));
        assert!(matches!(sub_profile(&fam("3"), &fam("12")), Err(Error::Containment(_))));
    }

    #[test]
    fn profiles_of_subspaces_and_quotients() {
        let j = fam("12");
        assert_eq!(sub_profile(&fam("2"), &j).unwrap(), profile(&[&[0, 0, 1]]));
        assert_eq!(sub_profile(&j, &j).unwrap(), profile(&[&[0, 1, 2]]));
        assert_eq!(sub_profile(&fam("23"), &fam("123")).unwrap(), profile(&[&[0, 0, 1, 2]]));
        assert_eq!(quotient_profile(&fam("2"), &j).unwrap(), profile(&[&[0, 1, 1]]));
        assert_eq!(quotient_profile(&j, &j).unwrap(), profile(&[&[0, 0, 0]]));
        assert_eq!(quotient_profile(&fam(""), &j).unwrap(), profile(&[&[0, 1, 2]]));
    }

    #[test]
    fn filtered_hom_dimensions() {
        let flag = profile(&[&[0, 1, 2]]);
        assert_eq!(dim_filtered_hom(&flag, &flag).unwrap(), 3);
        let f = profile(&[&[0, 0, 1]]);
        let g = profile(&[&[0, 1, 1]]);
        assert_eq!(dim_filtered_hom(&f, &g).unwrap(), 1);
        assert_eq!(dim_filtered_hom(&f, &g).unwrap(), schubert_dim(&fam("2"), &fam("12")).unwrap());
        let zero = profile(&[&[0, 0, 0]]);
        assert_eq!(dim_filtered_hom(&zero, &flag).unwrap(), 0);
        assert!(matches!(dim_filtered_hom(&flag, &profile(&[&[0, 1]])), Err(Error::Profile(_))));
    }

    #[test]
    fn profile_validation() {
        assert!(FiltrationProfile::new(vec![vec![0, 2]]).is_err());
        assert!(FiltrationProfile::new(vec![vec![1, 1]]).is_err());
        assert!(FiltrationProfile::new(vec![vec![0, 1, 0]]).is_err());
        assert!(FiltrationProfile::new(vec![vec![0, 0, 1, 1, 2]]).is_ok());
    }

    #[test]
    fn filtered_euler_of_sub_and_quotient_is_edim() {
        let q = catalog::square();
        let j = fam(SQUARE_J);
        for k in [fam("1;23;23;12"), fam("1;23;12;12"), fam(";;;"), j.clone()] {
            let f = sub_profile(&k, &j).unwrap();
            let g = quotient_profile(&k, &j).unwrap();
            let eul = filtered_euler(&q, &f, &g, &f.dims(), &g.dims()).unwrap();
            assert_eq!(eul, edim(&q, &k, &j).unwrap());
        }
    }

    #[test]
    fn filtered_euler_with_zero_target() {
        let q = catalog::w2();
        let f = FiltrationProfile::standard(&DimensionVector::new(vec![2, 2]));
        let g = FiltrationProfile::zero(&[2, 2]);
        let eul = filtered_euler(&q, &f, &g, &f.dims(), &g.dims()).unwrap();
        assert_eq!(eul, 0);
        let wrong = DimensionVector::new(vec![1, 2]);
        assert!(matches!(filtered_euler(&q, &f, &g, &wrong, &g.dims()), Err(Error::Domain(_))));
    }

    #[test]
    fn shorthand_round_trip() {
        let k = fam(";1;;12;2;");
        assert_eq!(k.len(), 6);
        assert_eq!(k.shorthand(), ";1;;12;2;");
        assert_eq!(k.to_string(), "(∅,1,∅,12,2,∅)");
        assert!(SubsetFamily::parse_shorthand("21").is_err());
        let wide = SubsetFamily::from_lists([vec![3, 11]]).unwrap();
        assert_eq!(SubsetFamily::parse_shorthand(&wide.shorthand()).unwrap(), wide);
    }

    #[test]
    fn family_order_compares_cardinalities_first() {
        // (∅,…,2) has smaller cardinality vector than (1,∅,…)
        assert!(fam(";2") < fam("1;"));
        assert!(fam("1;") < fam("2;"));
        assert!(fam("2;1") < fam("12;"));
    }

    #[test]
    fn positions_and_selection() {
        let j = fam("135;24");
        let k = fam("35;4");
        let p = k.positions_in(&j).unwrap();
        assert_eq!(p, fam("23;2"));
        let back: Vec<Subset> = p.0.iter().zip(&j.0).map(|(pp, jj)| pp.select_from(jj).unwrap()).collect();
        assert_eq!(SubsetFamily(back), k);
    }
}
