//! Randomized generic-rank oracle for filtered hom and ext dimensions.
//!
//! For filtered dimension vectors `(V, F)`, `(W, G)` and random
//! representations `v`, `w` the map `Φ ↦ (Φ_y v_a − w_a Φ_x)_a` from filtered
//! morphisms to `H_Q(V, W)` is assembled over a prime field; its rank at a
//! random point equals the generic rank with high probability.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{check_containment, quotient_profile, sub_profile, FiltrationProfile, SubsetFamily};
use crate::quiver::{DimensionVector, Quiver};

/// Largest prime below `2^31 − 1`.
pub const DEFAULT_PRIME: u64 = 2_147_483_629;
pub const DEFAULT_TRIALS: usize = 5;

/// Dense matrix over `Z/p`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeFieldMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl PrimeFieldMatrix {
    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Self { modulus, rows, cols, data: vec![0; rows * cols] })
    }

    /// Reduces every entry modulo `modulus`.
    pub fn from_rows(modulus: u64, rows: &[Vec<i64>]) -> Result<Self> {
        check_modulus(modulus)?;
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Domain("ragged matrix rows".into()));
        }
        let data = rows.iter().flatten().map(|&v| v.rem_euclid(modulus as i64) as u64).collect();
        Ok(Self { modulus, rows: rows.len(), cols, data })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: u64) {
        self.data[r * self.cols + c] = value % self.modulus;
    }

    fn add_to(&mut self, r: usize, c: usize, value: u64) {
        let i = r * self.cols + c;
        self.data[i] = (self.data[i] + value) % self.modulus;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Rank by Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let p = self.modulus;
        let mut m = self.data.clone();
        let cols = self.cols;
        let mut rank = 0;
        for c in 0..cols {
            let Some(pivot) = (rank..self.rows).find(|&r| m[r * cols + c] != 0) else {
                continue;
            };
            if pivot != rank {
                for k in 0..cols {
                    m.swap(pivot * cols + k, rank * cols + k);
                }
            }
            let inv = pow_mod(m[rank * cols + c], p - 2, p);
            for k in c..cols {
                m[rank * cols + k] = m[rank * cols + k] * inv % p;
            }
            for r in rank + 1..self.rows {
                let factor = m[r * cols + c];
                if factor == 0 {
                    continue;
                }
                for k in c..cols {
                    let sub = factor * m[rank * cols + k] % p;
                    m[r * cols + k] = (m[r * cols + k] + p - sub) % p;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_modulus(p: u64) -> Result<()> {
    if p >= 1 << 32 {
        return Err(Error::Domain(format!("modulus {p} does not fit in 32 bits")));
    }
    if !is_prime(p) {
        return Err(Error::Domain(format!("modulus {p} is not prime")));
    }
    Ok(())
}

/// Random per-arrow matrices `v_a : V_x → V_y` and `w_a : W_x → W_y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationSample {
    pub v: Vec<PrimeFieldMatrix>,
    pub w: Vec<PrimeFieldMatrix>,
    pub seed: u64,
}

impl RepresentationSample {
    /// Uniform entries from the stream `trial` of a generator seeded with `seed`.
    pub fn random(
        quiver: &Quiver,
        dim_v: &DimensionVector,
        dim_w: &DimensionVector,
        modulus: u64,
        seed: u64,
        trial: u64,
    ) -> Result<Self> {
        check_modulus(modulus)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let draw = |dims: &DimensionVector, rng: &mut ChaCha8Rng| {
            quiver
                .arrows()
                .iter()
                .map(|&(x, y)| {
                    let (rows, cols) = (dims[y] as usize, dims[x] as usize);
                    let data = (0..rows * cols).map(|_| rng.gen_range(0..modulus)).collect();
                    PrimeFieldMatrix { modulus, rows, cols, data }
                })
                .collect::<Vec<_>>()
        };
        let v = draw(dim_v, &mut rng);
        let w = draw(dim_w, &mut rng);
        Ok(Self { v, w, seed })
    }

    pub fn zero(quiver: &Quiver, dim_v: &DimensionVector, dim_w: &DimensionVector, modulus: u64) -> Result<Self> {
        let blocks = |dims: &DimensionVector| {
            quiver
                .arrows()
                .iter()
                .map(|&(x, y)| PrimeFieldMatrix::zeros(modulus, dims[y] as usize, dims[x] as usize))
                .collect::<Result<Vec<_>>>()
        };
        Ok(Self { v: blocks(dim_v)?, w: blocks(dim_w)?, seed: 0 })
    }

    fn check_shapes(
        &self,
        quiver: &Quiver,
        dim_v: &DimensionVector,
        dim_w: &DimensionVector,
        modulus: u64,
    ) -> Result<()> {
        if self.v.len() != quiver.arrow_count() || self.w.len() != quiver.arrow_count() {
            return Err(Error::Domain("sample does not have one matrix per arrow".into()));
        }
        for (a, &(x, y)) in quiver.arrows().iter().enumerate() {
            for (m, dims, name) in [(&self.v[a], dim_v, "v"), (&self.w[a], dim_w, "w")] {
                if m.rows != dims[y] as usize || m.cols != dims[x] as usize || m.modulus != modulus {
                    return Err(Error::Domain(format!(
                        "{name}[{a}] is {}x{} mod {} but {}x{} mod {modulus} is required",
                        m.rows, m.cols, m.modulus, dims[y], dims[x]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Parameters shared by the oracle entry points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleParams {
    pub trials: usize,
    pub seed: u64,
    pub prime: u64,
}

impl Default for OracleParams {
    fn default() -> Self {
        Self { trials: DEFAULT_TRIALS, seed: 0, prime: DEFAULT_PRIME }
    }
}

impl OracleParams {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self { trials, seed, ..Self::default() }
    }
}

fn check_profiles(
    quiver: &Quiver,
    f: &FiltrationProfile,
    g: &FiltrationProfile,
    dim_v: &DimensionVector,
    dim_w: &DimensionVector,
) -> Result<()> {
    dim_v.check_domain(quiver, "dim V")?;
    dim_w.check_domain(quiver, "dim W")?;
    if f.vertex_count() != quiver.vertex_count() || g.vertex_count() != quiver.vertex_count() {
        return Err(Error::Domain("profiles do not cover the quiver's vertices".into()));
    }
    if f.lengths() != g.lengths() {
        return Err(Error::Domain("profiles have different lengths".into()));
    }
    if &f.dims() != dim_v || &g.dims() != dim_w {
        return Err(Error::Domain(format!(
            "profiles end at {} and {} but the dimensions are {dim_v} and {dim_w}",
            f.dims(),
            g.dims()
        )));
    }
    Ok(())
}

/// Free coordinates `(vertex, row, column)` of a filtered morphism, in basis order.
fn filtered_coordinates(f: &FiltrationProfile, g: &FiltrationProfile) -> Vec<(usize, usize, usize)> {
    let mut coords = Vec::new();
    for x in 0..f.vertex_count() {
        let jumps = f.jump_indices(x);
        let gx = g.levels(x);
        let height = *gx.last().expect("nonempty") as usize;
        for r in 0..height {
            for (c, &i) in jumps.iter().enumerate() {
                if r < gx[i] as usize {
                    coords.push((x, r, c));
                }
            }
        }
    }
    coords
}

/// Matrix of `Φ ↦ (Φ_y v_a − w_a Φ_x)_a`.
///
/// Columns follow the free entries of `Φ` by vertex, row, column; rows follow
/// the arrow blocks `dim W_y × dim V_x`, each row-major.
pub fn build_delta(
    quiver: &Quiver,
    f: &FiltrationProfile,
    g: &FiltrationProfile,
    dim_v: &DimensionVector,
    dim_w: &DimensionVector,
    sample: &RepresentationSample,
) -> Result<PrimeFieldMatrix> {
    check_profiles(quiver, f, g, dim_v, dim_w)?;
    let modulus = sample.v.first().or(sample.w.first()).map_or(DEFAULT_PRIME, |m| m.modulus);
    sample.check_shapes(quiver, dim_v, dim_w, modulus)?;
    let coords = filtered_coordinates(f, g);
    let mut block_start = Vec::with_capacity(quiver.arrow_count());
    let mut rows = 0usize;
    for &(x, y) in quiver.arrows() {
        block_start.push(rows);
        rows += dim_w[y] as usize * dim_v[x] as usize;
    }
    let mut delta = PrimeFieldMatrix::zeros(modulus, rows, coords.len())?;
    for (col, &(z, r, k)) in coords.iter().enumerate() {
        for (a, &(x, y)) in quiver.arrows().iter().enumerate() {
            let width = dim_v[x] as usize;
            let start = block_start[a];
            // unit at Φ_y[r][k]: row r of Φ_y v_a is row k of v_a
            if z == y {
                for c in 0..width {
                    delta.add_to(start + r * width + c, col, sample.v[a].get(k, c));
                }
            }
            // unit at Φ_x[r][k]: column k of w_a Φ_x is column r of w_a
            if z == x {
                for rr in 0..dim_w[y] as usize {
                    let entry = sample.w[a].get(rr, r);
                    delta.add_to(start + rr * width + k, col, (modulus - entry) % modulus);
                }
            }
        }
    }
    Ok(delta)
}

/// Kernel and cokernel dimensions of the generic `δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenericDims {
    pub hom: i64,
    pub ext: i64,
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
}

/// Best rank over `params.trials` independent samples.
pub fn generic_dims(
    quiver: &Quiver,
    f: &FiltrationProfile,
    g: &FiltrationProfile,
    dim_v: &DimensionVector,
    dim_w: &DimensionVector,
    params: &OracleParams,
) -> Result<GenericDims> {
    if params.trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    check_profiles(quiver, f, g, dim_v, dim_w)?;
    let ranks = (0..params.trials as u64)
        .into_par_iter()
        .map(|t| {
            let sample = RepresentationSample::random(quiver, dim_v, dim_w, params.prime, params.seed, t)?;
            build_delta(quiver, f, g, dim_v, dim_w, &sample).map(|m| (m.rank(), m.rows, m.cols))
        })
        .collect::<Result<Vec<_>>>()?;
    let (rank, rows, cols) = ranks.into_iter().max().expect("at least one trial");
    Ok(GenericDims { hom: (cols - rank) as i64, ext: (rows - rank) as i64, rank, rows, cols })
}

pub fn generic_ext(
    quiver: &Quiver,
    f: &FiltrationProfile,
    g: &FiltrationProfile,
    dim_v: &DimensionVector,
    dim_w: &DimensionVector,
    params: &OracleParams,
) -> Result<i64> {
    generic_dims(quiver, f, g, dim_v, dim_w, params).map(|d| d.ext)
}

pub fn generic_hom(
    quiver: &Quiver,
    f: &FiltrationProfile,
    g: &FiltrationProfile,
    dim_v: &DimensionVector,
    dim_w: &DimensionVector,
    params: &OracleParams,
) -> Result<i64> {
    generic_dims(quiver, f, g, dim_v, dim_w, params).map(|d| d.hom)
}

/// Generic dimensions for the pair `(V(K), V(J)/V(K))` with induced filtrations.
pub fn subquotient_dims(
    quiver: &Quiver,
    k: &SubsetFamily,
    j: &SubsetFamily,
    params: &OracleParams,
) -> Result<GenericDims> {
    check_containment(k, j)?;
    k.check_domain(quiver, "K")?;
    let f = sub_profile(k, j)?;
    let g = quotient_profile(k, j)?;
    generic_dims(quiver, &f, &g, &f.dims(), &g.dims(), params)
}

/// True iff the generic ext of `(V(K), V(J)/V(K))` vanishes.
pub fn oracle_is_intersecting(
    quiver: &Quiver,
    k: &SubsetFamily,
    j: &SubsetFamily,
    params: &OracleParams,
) -> Result<bool> {
    subquotient_dims(quiver, k, j, params).map(|d| d.ext == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::family::{dim_filtered_hom, filtered_euler};
    use crate::quiver::arrow_pairing;
    use proptest::prelude::*;

    fn fam(s: &str) -> SubsetFamily {
        SubsetFamily::parse_shorthand(s).unwrap()
    }

    fn profile(levels: &[&[u32]]) -> FiltrationProfile {
        FiltrationProfile::new(levels.iter().map(|l| l.to_vec()).collect()).unwrap()
    }

    #[test]
    fn w2_subquotient_has_vanishing_ext() {
        let q = catalog::w2();
        let f = profile(&[&[0, 0, 1], &[0, 0, 1]]);
        let g = profile(&[&[0, 1, 1], &[0, 1, 1]]);
        assert_eq!(f, sub_profile(&fam("2;2"), &fam("12;12")).unwrap());
        assert_eq!(g, quotient_profile(&fam("2;2"), &fam("12;12")).unwrap());
        let one = DimensionVector::new(vec![1, 1]);
        let sample = RepresentationSample::random(&q, &one, &one, DEFAULT_PRIME, 0, 0).unwrap();
        let delta = build_delta(&q, &f, &g, &one, &one, &sample).unwrap();
        assert_eq!(delta.cols(), 2);
        assert_eq!(delta.rows(), 2);
        assert_eq!(dim_filtered_hom(&f, &g).unwrap(), 2);
        let dims = generic_dims(&q, &f, &g, &one, &one, &OracleParams::default()).unwrap();
        assert_eq!((dims.hom, dims.ext), (0, 0));
        assert_eq!(filtered_euler(&q, &f, &g, &one, &one).unwrap(), 0);
    }

    #[test]
    fn zero_sample_gives_zero_matrix() {
        let q = catalog::square();
        let k = fam("1;23;23;12");
        let j = fam("12;123;123;12");
        let f = sub_profile(&k, &j).unwrap();
        let g = quotient_profile(&k, &j).unwrap();
        let sample = RepresentationSample::zero(&q, &f.dims(), &g.dims(), DEFAULT_PRIME).unwrap();
        let delta = build_delta(&q, &f, &g, &f.dims(), &g.dims(), &sample).unwrap();
        assert!(delta.is_zero());
        assert_eq!(delta.cols() as i64, dim_filtered_hom(&f, &g).unwrap());
        assert_eq!(delta.rows() as i64, arrow_pairing(&q, f.dims().as_slice(), g.dims().as_slice()));
    }

    #[test]
    fn square_worked_example() {
        let q = catalog::square();
        let j = fam("12;123;123;12");
        let p = OracleParams::default();
        assert!(oracle_is_intersecting(&q, &fam("1;23;23;12"), &j, &p).unwrap());
        assert!(subquotient_dims(&q, &fam("1;23;12;12"), &j, &p).unwrap().ext >= 1);
        assert!(oracle_is_intersecting(&q, &j, &j, &p).unwrap());
    }

    #[test]
    fn zero_target_has_no_ext() {
        let q = catalog::square();
        let dims = DimensionVector::new(vec![2, 3, 3, 2]);
        let f = FiltrationProfile::standard(&dims);
        let g = FiltrationProfile::zero(&f.lengths());
        assert_eq!(generic_ext(&q, &f, &g, &dims, &g.dims(), &OracleParams::default()).unwrap(), 0);
    }

    #[test]
    fn shape_and_modulus_errors() {
        let q = catalog::w2();
        let one = DimensionVector::new(vec![1, 1]);
        let f = profile(&[&[0, 0, 1], &[0, 0, 1]]);
        let g = profile(&[&[0, 1, 1], &[0, 1, 1]]);
        let two = DimensionVector::new(vec![2, 1]);
        let bad = RepresentationSample::random(&q, &two, &one, DEFAULT_PRIME, 0, 0).unwrap();
        assert!(matches!(build_delta(&q, &f, &g, &one, &one, &bad), Err(Error::Domain(_))));
        assert!(matches!(build_delta(&q, &f, &g, &two, &one, &bad), Err(Error::Domain(_))));
        assert!(PrimeFieldMatrix::zeros(15, 1, 1).is_err());
        assert!(matches!(
            oracle_is_intersecting(&q, &fam("3;"), &fam("12;12"), &OracleParams::default()),
            Err(Error::Containment(_)) | Err(Error::Domain(_))
        ));
    }

    #[test]
    fn rank_over_small_field() {
        let m = PrimeFieldMatrix::from_rows(7, &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, -1]]).unwrap();
        assert_eq!(m.rank(), 2);
        let m = PrimeFieldMatrix::from_rows(7, &[vec![1, 1], vec![1, 8]]).unwrap();
        assert_eq!(m.rank(), 1);
        assert!(is_prime(DEFAULT_PRIME));
        assert!(!is_prime((1 << 31) - 3));
    }

    #[test]
    fn deterministic_under_fixed_seed() {
        let q = catalog::square();
        let one = DimensionVector::new(vec![1, 2, 1, 1]);
        let a = RepresentationSample::random(&q, &one, &one, DEFAULT_PRIME, 7, 3).unwrap();
        let b = RepresentationSample::random(&q, &one, &one, DEFAULT_PRIME, 7, 3).unwrap();
        let c = RepresentationSample::random(&q, &one, &one, DEFAULT_PRIME, 7, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    fn arb_profile(max_len: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
        proptest::collection::vec(proptest::collection::vec(any::<bool>(), 0..=max_len), 2..=3).prop_map(|steps| {
            steps
                .into_iter()
                .map(|s| {
                    let mut level = vec![0u32];
                    for up in s {
                        level.push(level.last().unwrap() + up as u32);
                    }
                    level
                })
                .collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn hom_minus_ext_is_filtered_euler(
            f in arb_profile(3),
            g_bits in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 3), 3),
            arrows in proptest::collection::vec((0usize..3, 0usize..3), 0..5),
            seed in any::<u64>(),
        ) {
            let n = f.len();
            let g: Vec<Vec<u32>> = f.iter().zip(&g_bits).map(|(fl, bits)| {
                let mut level = vec![0u32];
                for i in 1..fl.len() {
                    level.push(level.last().unwrap() + bits[i - 1] as u32);
                }
                level
            }).collect();
            let arrows: Vec<(usize, usize)> = arrows.into_iter().map(|(a, b)| (a % n, b % n)).collect();
            let q = Quiver::from_indices((0..n).map(|i| i.to_string()), arrows).unwrap();
            let f = FiltrationProfile::new(f).unwrap();
            let g = FiltrationProfile::new(g).unwrap();
            let sample = RepresentationSample::random(&q, &f.dims(), &g.dims(), DEFAULT_PRIME, seed, 0).unwrap();
            let delta = build_delta(&q, &f, &g, &f.dims(), &g.dims(), &sample).unwrap();
            let rank = delta.rank() as i64;
            let hom = delta.cols() as i64 - rank;
            let ext = delta.rows() as i64 - rank;
            prop_assert_eq!(hom - ext, filtered_euler(&q, &f, &g, &f.dims(), &g.dims()).unwrap());
        }
    }
}
