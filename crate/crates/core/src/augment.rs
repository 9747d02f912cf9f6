//! The augmented quiver: each vertex `x` grows a chain
//! `(x,1) → … → (x,n_x − 1) → x`, turning filtered dimension vectors into
//! ordinary ones.

use crate::error::{Error, Result};
use crate::family::SubsetFamily;
use crate::horn::HornEngine;
use crate::quiver::{DimensionVector, Quiver};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedQuiver {
    quiver: Quiver,
    dims: DimensionVector,
    /// `(original vertex, level)` for each augmented vertex.
    origin: Vec<(usize, u32)>,
}

impl AugmentedQuiver {
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    /// `ñ_{x,i} = i`.
    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn origin(&self, vertex: usize) -> (usize, u32) {
        self.origin[vertex]
    }

    /// Index of the augmented vertex `(x, i)`; `i = n_x` gives `x` itself.
    pub fn vertex_of(&self, x: usize, level: u32) -> Option<usize> {
        self.origin.iter().position(|&o| o == (x, level))
    }
}

/// Builds `Q̃` and `ñ`. Vertex order is the original order with each chain
/// inserted just before its terminal vertex, which keeps the original label.
pub fn augment(quiver: &Quiver, n: &DimensionVector) -> Result<AugmentedQuiver> {
    n.check_domain(quiver, "n")?;
    let mut labels = Vec::new();
    let mut origin = Vec::new();
    let mut terminal = Vec::with_capacity(quiver.vertex_count());
    let mut arrows = Vec::new();
    for x in 0..quiver.vertex_count() {
        let nx = n[x];
        for i in 1..nx {
            if i > 1 {
                arrows.push((labels.len() - 1, labels.len()));
            }
            labels.push(format!("({},{i})", quiver.label(x)));
            origin.push((x, i));
        }
        if nx > 1 {
            arrows.push((labels.len() - 1, labels.len()));
        }
        terminal.push(labels.len());
        labels.push(quiver.label(x).to_string());
        origin.push((x, nx));
    }
    arrows.extend(quiver.arrows().iter().map(|&(x, y)| (terminal[x], terminal[y])));
    let dims = DimensionVector::new(origin.iter().map(|&(_, i)| i).collect());
    Ok(AugmentedQuiver { quiver: Quiver::from_indices(labels, arrows)?, dims, origin })
}

fn standard_dims(j: &SubsetFamily) -> Result<DimensionVector> {
    if let Some(bad) = j.parts().iter().find(|jx| !jx.is_standard()) {
        return Err(Error::Domain(format!("ambient set {bad} is not of the form {{1, …, n}}; pass positions instead")));
    }
    Ok(j.cardinalities())
}

/// `α̃_{x,i} = |K_x ∩ {1, …, i}|` on the augmented quiver of `(Q, |J|)`.
pub fn lift_family(aug: &AugmentedQuiver, k: &SubsetFamily, j: &SubsetFamily) -> Result<DimensionVector> {
    let n = standard_dims(j)?;
    crate::family::check_containment(k, j)?;
    let expected: Vec<u32> =
        (0..k.len()).map(|x| aug.origin.iter().filter(|o| o.0 == x).map(|o| o.1).max().unwrap_or(0)).collect();
    if aug.origin.iter().map(|o| o.0).max().map_or(0, |m| m + 1) != k.len() || expected != n.0 {
        return Err(Error::Domain(format!("augmented quiver was built for other dimensions than {n}")));
    }
    Ok(DimensionVector::new(
        aug.origin.iter().map(|&(x, i)| k.parts()[x].elements().iter().filter(|&&e| e <= i).count() as u32).collect(),
    ))
}

/// `β̃_{x,i} ≤ β̃_{x,i+1} ≤ β̃_{x,i} + 1` along every chain, with `β̃_{x,0} = 0`.
pub fn satisfies_jump_condition(aug: &AugmentedQuiver, beta: &DimensionVector) -> bool {
    let vertices = aug.origin.iter().map(|o| o.0).max().map_or(0, |m| m + 1);
    (0..vertices).all(|x| {
        let mut chain: Vec<(u32, u32)> =
            aug.origin.iter().zip(beta.as_slice()).filter(|(o, _)| o.0 == x).map(|(o, &b)| (o.1, b)).collect();
        chain.sort_unstable();
        let mut prev = 0u32;
        chain.iter().filter(|(i, _)| *i > 0).all(|&(_, b)| {
            let ok = b >= prev && b <= prev + 1;
            prev = b;
            ok
        })
    })
}

/// Schofield membership of the lifted vector on the augmented quiver.
pub fn cross_check(quiver: &Quiver, k: &SubsetFamily, j: &SubsetFamily) -> Result<bool> {
    cross_check_with(HornEngine::global(), quiver, k, j)
}

pub fn cross_check_with(engine: &HornEngine, quiver: &Quiver, k: &SubsetFamily, j: &SubsetFamily) -> Result<bool> {
    k.check_domain(quiver, "K")?;
    let n = standard_dims(j)?;
    let aug = augment(quiver, &n)?;
    let alpha = lift_family(&aug, k, j)?;
    engine.schofield_member(aug.quiver(), &alpha, aug.dims())
}
