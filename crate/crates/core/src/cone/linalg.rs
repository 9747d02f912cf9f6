//! Fraction-free linear algebra over exact integers.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

/// Exact signed integers usable by the polyhedral code.
pub trait ExactInteger:
    Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

impl<T> ExactInteger for T where
    T: Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

pub fn from_i64<T: ExactInteger>(v: i64) -> T {
    T::from_i64(v).expect("fits")
}

pub fn dot<T: ExactInteger>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn is_zero_vec<T: ExactInteger>(v: &[T]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Divides by the gcd of the entries; zero vectors are left alone.
pub fn make_primitive<T: ExactInteger>(v: &mut [T]) {
    let g = v.iter().fold(T::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = x.clone() / g.clone();
        }
    }
}

/// Primitive with first nonzero entry positive.
pub fn canonical_direction<T: ExactInteger>(v: &mut [T]) {
    make_primitive(v);
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -x.clone();
        }
    }
}

/// `c_a · a + c_b · b`.
pub fn combine<T: ExactInteger>(ca: &T, a: &[T], cb: &T, b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| ca.clone() * x.clone() + cb.clone() * y.clone()).collect()
}

/// Reduced echelon form: each pivot row has zeros in every other pivot column.
/// Returns the nonzero rows and their pivot columns.
pub fn reduced_echelon<T: ExactInteger>(rows: &[Vec<T>]) -> (Vec<Vec<T>>, Vec<usize>) {
    let mut m: Vec<Vec<T>> = rows.iter().filter(|r| !is_zero_vec(r)).cloned().collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot_row = m[rank].clone();
        let pv = pivot_row[c].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == rank || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            *row = combine(&pv, row, &-f, &pivot_row);
            make_primitive(row);
        }
        pivots.push(c);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    m.truncate(rank);
    (m, pivots)
}

pub fn rank<T: ExactInteger>(rows: &[Vec<T>]) -> usize {
    reduced_echelon(rows).1.len()
}

/// Integer basis of `{x : rows · x = 0}` in dimension `n`, canonical directions.
pub fn kernel_basis<T: ExactInteger>(rows: &[Vec<T>], n: usize) -> Vec<Vec<T>> {
    let (m, pivots) = reduced_echelon(rows);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let scale = m.iter().zip(&pivots).fold(T::one(), |l, (row, &c)| l.lcm(&row[c]));
            let mut x = vec![T::zero(); n];
            x[f] = scale.clone();
            for (row, &c) in m.iter().zip(&pivots) {
                x[c] = -(scale.clone() / row[c].clone()) * row[f].clone();
            }
            canonical_direction(&mut x);
            x
        })
        .collect()
}
