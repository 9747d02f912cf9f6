//! Incremental double description for `{x : E x = 0, A x ≤ 0}`.
//!
//! The iteration starts from the linear space `ker E` (all lines, no rays).
//! A constraint that is not orthogonal to some line cuts that line into a ray;
//! otherwise the usual ray splitting applies, keeping only pairs that pass the
//! combinatorial adjacency test.

use fixedbitset::FixedBitSet;

use super::linalg::{canonical_direction, combine, dot, kernel_basis, make_primitive, rank, ExactInteger};

/// Generators of a polyhedral cone: `cone(rays) + span(lines)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generators<T> {
    pub rays: Vec<Vec<T>>,
    pub lines: Vec<Vec<T>>,
}

impl<T: ExactInteger> Generators<T> {
    /// Dimension of the cone.
    pub fn dimension(&self) -> usize {
        let all: Vec<Vec<T>> = self.rays.iter().chain(&self.lines).cloned().collect();
        rank(&all)
    }

    pub fn is_pointed(&self) -> bool {
        self.lines.is_empty()
    }
}

struct Ray<T> {
    v: Vec<T>,
    zeros: FixedBitSet,
}

/// Runs the double description method; `inequalities` are rows `a` with `a · x ≤ 0`.
pub fn double_description<T: ExactInteger>(
    dimension: usize,
    equalities: &[Vec<T>],
    inequalities: &[Vec<T>],
) -> Generators<T> {
    let mut order: Vec<usize> = (0..inequalities.len()).collect();
    order.sort_by_key(|&i| inequalities[i].iter().filter(|x| !x.is_zero()).count());
    let rank_e = rank(equalities);
    let m = inequalities.len();

    let mut lines = kernel_basis(equalities, dimension);
    let mut rays: Vec<Ray<T>> = Vec::new();

    for (step, &ci) in order.iter().enumerate() {
        let a = &inequalities[ci];
        if let Some(li) = lines.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lines.swap_remove(li);
            let mut s = dot(a, &l0);
            if s.is_positive() {
                for x in l0.iter_mut() {
                    *x = -x.clone();
                }
                s = -s;
            }
            // s < 0 from here on
            for l in lines.iter_mut() {
                let t = dot(a, l);
                if !t.is_zero() {
                    *l = combine(&s, l, &-t, &l0);
                    canonical_direction(l);
                }
            }
            for r in rays.iter_mut() {
                let t = dot(a, &r.v);
                if !t.is_zero() {
                    r.v = combine(&-s.clone(), &r.v, &t, &l0);
                    make_primitive(&mut r.v);
                }
                r.zeros.insert(step);
            }
            let mut zeros = FixedBitSet::with_capacity(m);
            zeros.insert_range(..step);
            make_primitive(&mut l0);
            rays.push(Ray { v: l0, zeros });
            continue;
        }

        let values: Vec<T> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let positive: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        if positive.is_empty() {
            for (r, val) in rays.iter_mut().zip(&values) {
                if val.is_zero() {
                    r.zeros.insert(step);
                }
            }
            continue;
        }
        let negative: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        let threshold = (dimension as isize) - (rank_e as isize) - (lines.len() as isize) - 2;
        let mut created = Vec::new();
        for &p in &positive {
            for &n in &negative {
                let mut common = rays[p].zeros.clone();
                common.intersect_with(&rays[n].zeros);
                if (common.count_ones(..) as isize) < threshold {
                    continue;
                }
                let blocked = rays.iter().enumerate().any(|(i, r)| i != p && i != n && common.is_subset(&r.zeros));
                if blocked {
                    continue;
                }
                let mut v = combine(&values[p], &rays[n].v, &-values[n].clone(), &rays[p].v);
                make_primitive(&mut v);
                common.insert(step);
                created.push(Ray { v, zeros: common });
            }
        }
        let mut next: Vec<Ray<T>> = Vec::with_capacity(rays.len() - positive.len() + created.len());
        for (r, val) in rays.into_iter().zip(values) {
            if val.is_positive() {
                continue;
            }
            let mut r = r;
            if val.is_zero() {
                r.zeros.insert(step);
            }
            next.push(r);
        }
        next.extend(created);
        rays = next;
    }

    let mut rays: Vec<Vec<T>> = rays.into_iter().map(|r| r.v).filter(|v| v.iter().any(|x| !x.is_zero())).collect();
    rays.sort();
    rays.dedup();
    for l in lines.iter_mut() {
        canonical_direction(l);
    }
    lines.sort();
    Generators { rays, lines }
}
