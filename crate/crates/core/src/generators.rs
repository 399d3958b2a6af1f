//! Classical constructions and the permutations they induce.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::pointset::{extract_permutation, Permutation, PointSet, Provenance};
use crate::rational::Ratio;

/// Golden ratio `(1 + √5)/2`.
pub fn golden_ratio() -> f64 {
    (1.0 + libm::sqrt(5.0)) / 2.0
}

/// Fractional part of `k·r` for `k < 2^53`.
///
/// The product is split into its rounded value and the exact rounding error
/// (one fused multiply-add), so the result is accurate to about one ulp of
/// the fractional part rather than one ulp of `k·r`.
pub fn frac_mul(k: u64, r: f64) -> f64 {
    let kf = k as f64;
    let p = kf * r;
    let err = libm::fma(kf, r, -p);
    let mut f = (p - libm::floor(p)) + err;
    if f < 0.0 {
        f += 1.0;
    }
    if f >= 1.0 {
        f -= 1.0;
    }
    f
}

/// Number of sequence elements skipped before the first point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ShiftSpec(pub u64);

/// `{(i/n, {(i+s)φ}) : i = 0..n-1}`.
///
/// With `s = 0` the first point is the origin; `s = 1` starts at `(0, {φ})`.
pub fn fibonacci_set(n: usize, shift: ShiftSpec) -> Result<PointSet> {
    if n == 0 {
        return Err(crate::error::invalid!("n must be at least 1"));
    }
    let phi = golden_ratio();
    let nf = n as f64;
    let mut coords = Vec::with_capacity(2 * n);
    for i in 0..n {
        coords.push(i as f64 / nf);
        coords.push(frac_mul(i as u64 + shift.0, phi));
    }
    PointSet::new(
        2,
        coords,
        Provenance::Generated {
            name: "fibonacci".into(),
            params: format!("n={n},shift={}", shift.0),
        },
    )
}

/// Parameter `r` of a rank-one lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KroneckerParam {
    /// A Farey fraction `p/q` with `q ≤ n`; several lattice points tie.
    Fraction(Ratio),
    /// An exact interior point of an open interval between consecutive
    /// Farey fractions. Its denominator exceeds `n`, so no ties occur.
    Interior(Ratio),
    /// Any real parameter, e.g. `{φ}`.
    Real(f64),
}

impl KroneckerParam {
    pub fn value(&self) -> f64 {
        match *self {
            KroneckerParam::Fraction(r) | KroneckerParam::Interior(r) => r.to_f64(),
            KroneckerParam::Real(r) => r,
        }
    }

    fn exact(&self) -> Option<Ratio> {
        match *self {
            KroneckerParam::Fraction(r) | KroneckerParam::Interior(r) => Some(r),
            KroneckerParam::Real(_) => None,
        }
    }

    /// Total order by value; exact parameters compare exactly.
    pub fn cmp_value(&self, other: &Self) -> core::cmp::Ordering {
        match (self.exact(), other.exact()) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => self.value().total_cmp(&other.value()),
        }
    }
}

impl core::fmt::Display for KroneckerParam {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            KroneckerParam::Fraction(r) | KroneckerParam::Interior(r) => write!(f, "{r}"),
            KroneckerParam::Real(r) => write!(f, "{r:.17}"),
        }
    }
}

/// How a generator was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorOrigin {
    FareyFraction,
    /// Midpoint of the open interval `(left, right)`.
    IntervalMidpoint {
        left: Ratio,
        right: Ratio,
    },
    User,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KroneckerGenerator {
    pub n: usize,
    pub param: KroneckerParam,
    pub origin: GeneratorOrigin,
}

impl KroneckerGenerator {
    /// A user-supplied fraction; requires `0 < p/q ≤ 1` and `q ≤ n`.
    pub fn rational(n: usize, r: Ratio) -> Result<Self> {
        if r.num() == 0 || r > Ratio::new(1, 1) {
            return Err(crate::error::invalid!(
                "rational parameter {r} is not in (0,1]"
            ));
        }
        if r.den() as usize > n {
            return Err(crate::error::invalid!("denominator of {r} exceeds n = {n}"));
        }
        Ok(KroneckerGenerator {
            n,
            param: KroneckerParam::Fraction(r),
            origin: GeneratorOrigin::User,
        })
    }

    pub fn real(n: usize, r: f64) -> Result<Self> {
        if !r.is_finite() {
            return Err(crate::error::invalid!("lattice parameter must be finite"));
        }
        Ok(KroneckerGenerator {
            n,
            param: KroneckerParam::Real(r),
            origin: GeneratorOrigin::User,
        })
    }

    /// Induced rank permutation.
    pub fn permutation(&self) -> Result<Permutation> {
        extract_permutation(&kronecker_lattice(self)?)
    }
}

/// Second coordinates `{i·r}`, `i = 0..n-1`.
fn lattice_values(g: &KroneckerGenerator) -> Vec<f64> {
    match g.param.exact() {
        // identical residues map to identical doubles, so ties stay exact
        Some(r) => (0..g.n as u64)
            .map(|i| ((i as u128 * r.num() as u128) % r.den() as u128) as f64 / r.den() as f64)
            .collect(),
        None => {
            let r = g.param.value();
            let r = r - libm::floor(r);
            (0..g.n as u64).map(|i| frac_mul(i, r)).collect()
        }
    }
}

/// Rank-one lattice `{(i/n, {i·r}) : i = 0..n-1}`.
pub fn kronecker_lattice(g: &KroneckerGenerator) -> Result<PointSet> {
    if g.n == 0 {
        return Err(crate::error::invalid!("n must be at least 1"));
    }
    let nf = g.n as f64;
    let mut coords = Vec::with_capacity(2 * g.n);
    for (i, v) in lattice_values(g).into_iter().enumerate() {
        coords.push(i as f64 / nf);
        coords.push(v);
    }
    PointSet::new(
        2,
        coords,
        Provenance::Generated {
            name: "kronecker".into(),
            params: format!("n={},r={}", g.n, g.param),
        },
    )
}

/// Base-2 radical inverse, exact for `i < 2^53`.
pub fn radical_inverse_base2(i: u64) -> f64 {
    i.reverse_bits() as f64 * (1.0 / 18_446_744_073_709_551_616.0)
}

/// Lifted van der Corput set `{(i/n, v(s+i)) : i = 0..n-1}`.
pub fn van_der_corput_lifted(n: usize, shift: ShiftSpec) -> Result<PointSet> {
    if n == 0 {
        return Err(crate::error::invalid!("n must be at least 1"));
    }
    let nf = n as f64;
    let mut coords = Vec::with_capacity(2 * n);
    for i in 0..n {
        coords.push(i as f64 / nf);
        coords.push(radical_inverse_base2(shift.0 + i as u64));
    }
    PointSet::new(
        2,
        coords,
        Provenance::Generated {
            name: "vdc".into(),
            params: format!("n={n},shift={}", shift.0),
        },
    )
}

const SOBOL_BITS: usize = 32;

/// Direction numbers `v_k = m_k · 2^(32-k)` from primitive polynomial data
/// (degree `s`, inner coefficients `a`, initial `m_1..m_s`).
fn sobol_directions(s: usize, a: u32, m_init: &[u32]) -> [u32; SOBOL_BITS] {
    let mut m = [0u32; SOBOL_BITS];
    m[..s].copy_from_slice(m_init);
    for k in s..SOBOL_BITS {
        let mut next = m[k - s] ^ (m[k - s] << s);
        for j in 1..s {
            if (a >> (s - 1 - j)) & 1 == 1 {
                next ^= m[k - j] << j;
            }
        }
        m[k] = next;
    }
    let mut v = [0u32; SOBOL_BITS];
    for k in 0..SOBOL_BITS {
        v[k] = m[k] << (SOBOL_BITS - 1 - k);
    }
    v
}

fn sobol_tables() -> [[u32; SOBOL_BITS]; 3] {
    let mut first = [0u32; SOBOL_BITS];
    for (k, v) in first.iter_mut().enumerate() {
        *v = 1 << (SOBOL_BITS - 1 - k);
    }
    [
        first,
        // x + 1
        sobol_directions(1, 0, &[1]),
        // x^2 + x + 1
        sobol_directions(2, 1, &[1, 3]),
    ]
}

/// The first `n` points of the unscrambled Sobol' sequence in `d ∈ {2,3}`
/// dimensions after `skip` points, in Gray-code order.
pub fn sobol(n: usize, d: usize, skip: u64) -> Result<PointSet> {
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if n == 0 {
        return Err(crate::error::invalid!("n must be at least 1"));
    }
    if skip + n as u64 > 1 << SOBOL_BITS {
        return Err(crate::error::invalid!("Sobol' index range exceeds 2^32"));
    }
    let dirs = sobol_tables();
    let scale = 1.0 / (1u64 << SOBOL_BITS) as f64;
    let mut coords = Vec::with_capacity(d * n);
    for idx in skip..skip + n as u64 {
        let gray = idx ^ (idx >> 1);
        for table in dirs.iter().take(d) {
            let mut x = 0u32;
            for (bit, v) in table.iter().enumerate() {
                if (gray >> bit) & 1 == 1 {
                    x ^= v;
                }
            }
            coords.push(x as f64 * scale);
        }
    }
    PointSet::new(
        d,
        coords,
        Provenance::Generated {
            name: "sobol".into(),
            params: format!("n={n},d={d},skip={skip}"),
        },
    )
}

/// Uniform integer below `bound` by Lemire's multiply-and-reject.
fn bounded(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    let threshold = bound.wrapping_neg() % bound;
    loop {
        let m = rng.next_u64() as u128 * bound as u128;
        if (m as u64) >= threshold {
            return (m >> 64) as u64;
        }
    }
}

/// Seeded uniform permutation (Fisher–Yates over ChaCha8).
pub fn random_permutation(n: usize, seed: u64) -> Permutation {
    random_permutation_stream(n, seed, 0)
}

/// Like [`random_permutation`], drawing from an independent ChaCha stream so
/// that batch draw `k` does not depend on draws `0..k`.
pub fn random_permutation_stream(n: usize, seed: u64, stream: u64) -> Permutation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut map: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        let j = bounded(&mut rng, i as u64 + 1) as usize;
        map.swap(i, j);
    }
    Permutation::from_zero_based_unchecked(map)
}

/// Farey fractions of order `n` in `(0,1]`, ascending.
pub fn farey_fractions(n: usize) -> Vec<Ratio> {
    let n = n as u64;
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    // next-term recurrence starting from 0/1, 1/n
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, n);
    while c <= n {
        out.push(Ratio::new(c, d));
        let k = (n + b) / d;
        let (nc, nd) = (k * c - a, k * d - b);
        a = c;
        b = d;
        c = nc;
        d = nd;
        if a == 1 && b == 1 {
            break;
        }
    }
    out
}

/// Every lattice parameter needed to realise all Kronecker permutations of
/// size `n`: each Farey fraction in `(0,1]` and the midpoint of each open
/// interval between consecutive fractions (starting from 0), in increasing
/// order.
pub fn enumerate_kronecker_generators(n: usize) -> Result<Vec<KroneckerGenerator>> {
    if n < 2 {
        return Err(crate::error::invalid!("n must be at least 2"));
    }
    let fractions = farey_fractions(n);
    let mut out = Vec::with_capacity(2 * fractions.len());
    let mut left = Ratio::new(0, 1);
    for f in fractions {
        out.push(KroneckerGenerator {
            n,
            param: KroneckerParam::Interior(Ratio::midpoint(left, f)),
            origin: GeneratorOrigin::IntervalMidpoint { left, right: f },
        });
        out.push(KroneckerGenerator {
            n,
            param: KroneckerParam::Fraction(f),
            origin: GeneratorOrigin::FareyFraction,
        });
        left = f;
    }
    Ok(out)
}

/// Distinct induced permutations, each with its smallest generator, sorted
/// by the generator parameter.
pub fn dedupe_permutations(
    gens: &[KroneckerGenerator],
) -> Result<Vec<(Permutation, KroneckerGenerator)>> {
    if let Some(g) = gens.iter().find(|g| g.n != gens[0].n) {
        return Err(Error::DimensionMismatch {
            expected: gens[0].n,
            got: g.n,
        });
    }
    let mut order: Vec<&KroneckerGenerator> = gens.iter().collect();
    order.sort_by(|a, b| a.param.cmp_value(&b.param));
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for g in order {
        let p = g.permutation()?;
        if seen.insert(p.clone()) {
            out.push((p, g.clone()));
        }
    }
    Ok(out)
}

/// Consecutive-difference structure of a permutation.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeValueReport {
    /// At most three distinct differences modulo n.
    pub passes: bool,
    /// Distinct `(π(i+1) − π(i)) mod n`, ascending.
    pub observed: Vec<usize>,
    /// Distinct signed differences `π(i+1) − π(i)`, ascending.
    pub observed_signed: Vec<i64>,
    /// The literal value set `{π(2), π(2)+1, n−π(2)}`.
    pub reference: [i64; 3],
    /// Whether every signed difference lies in `reference`.
    pub literal_match: bool,
}

pub fn three_value_check(p: &Permutation) -> Result<ThreeValueReport> {
    let n = p.len();
    if n < 3 {
        return Err(crate::error::invalid!("three-value check needs n ≥ 3"));
    }
    let v = p.to_one_based();
    let signed: BTreeSet<i64> = v.windows(2).map(|w| w[1] as i64 - w[0] as i64).collect();
    let modular: BTreeSet<usize> = signed
        .iter()
        .map(|&d| d.rem_euclid(n as i64) as usize)
        .collect();
    let p2 = v[1] as i64;
    let reference = [p2, p2 + 1, n as i64 - p2];
    Ok(ThreeValueReport {
        passes: modular.len() <= 3,
        literal_match: signed.iter().all(|d| reference.contains(d)),
        observed: modular.into_iter().collect(),
        observed_signed: signed.into_iter().collect(),
        reference,
    })
}

/// Short generator label used in descriptors.
pub fn describe(g: &KroneckerGenerator) -> String {
    format!("kronecker(n={},r={})", g.n, g.param)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn second_coords(ps: &PointSet) -> Vec<f64> {
        ps.axis(1).collect()
    }

    #[test]
    fn fibonacci_first_points() {
        let ps = fibonacci_set(5, ShiftSpec(0)).unwrap();
        assert_eq!(ps.point(0), &[0.0, 0.0]);
        assert_eq!(ps.point(1)[0], 0.2);
        assert!((ps.point(1)[1] - 0.618_033_988_749_895).abs() < 1e-15);
        let ps = fibonacci_set(100, ShiftSpec(1)).unwrap();
        assert_eq!(ps.point(0)[0], 0.0);
        assert!((ps.point(0)[1] - 0.618_033_988_749_895).abs() < 1e-15);
    }

    #[test]
    fn fibonacci_permutation_n5() {
        let p = extract_permutation(&fibonacci_set(5, ShiftSpec(0)).unwrap()).unwrap();
        assert_eq!(p.to_one_based(), vec![1, 4, 2, 5, 3]);
    }

    #[test]
    fn frac_mul_matches_naive_for_small_k() {
        let phi = golden_ratio();
        for k in 0..50u64 {
            let naive = k as f64 * phi - libm::floor(k as f64 * phi);
            assert!((frac_mul(k, phi) - naive).abs() < 1e-13);
        }
    }

    #[test]
    fn kronecker_examples() {
        let g = KroneckerGenerator::rational(4, Ratio::new(1, 2)).unwrap();
        assert_eq!(
            second_coords(&kronecker_lattice(&g).unwrap()),
            vec![0.0, 0.5, 0.0, 0.5]
        );

        let g = KroneckerGenerator::real(5, golden_ratio() - 1.0).unwrap();
        let a = second_coords(&kronecker_lattice(&g).unwrap());
        let b = second_coords(&fibonacci_set(5, ShiftSpec(0)).unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-15);
        }

        let g = KroneckerGenerator::rational(6, Ratio::new(1, 6)).unwrap();
        assert!(g.permutation().unwrap().is_identity());
        assert_eq!(second_coords(&kronecker_lattice(&g).unwrap())[2], 2.0 / 6.0);

        assert!(KroneckerGenerator::rational(4, Ratio::new(1, 5)).is_err());
        assert!(KroneckerGenerator::rational(4, Ratio::new(0, 1)).is_err());
    }

    #[test]
    fn vdc_examples() {
        let ps = van_der_corput_lifted(4, ShiftSpec(0)).unwrap();
        assert_eq!(second_coords(&ps), vec![0.0, 0.5, 0.25, 0.75]);
        let p = extract_permutation(&van_der_corput_lifted(8, ShiftSpec(0)).unwrap()).unwrap();
        assert_eq!(p.to_one_based(), vec![1, 5, 3, 7, 2, 6, 4, 8]);
    }

    #[test]
    fn sobol_first_points() {
        let ps = sobol(4, 2, 0).unwrap();
        assert_eq!(ps.coords(), &[0.0, 0.0, 0.5, 0.5, 0.75, 0.25, 0.25, 0.75]);
        let ps = sobol(4, 3, 0).unwrap();
        // third axis: v1 = 1/2, v2 = 3/4 → 0, 1/2, 1/4, 3/4
        let z: Vec<f64> = ps.axis(2).collect();
        assert_eq!(z, vec![0.0, 0.5, 0.25, 0.75]);
        assert_eq!(sobol(4, 4, 0).unwrap_err(), Error::UnsupportedDimension(4));
    }

    #[test]
    fn sobol_is_a_net() {
        // the first 2^m points stratify every elementary interval of volume 2^-m
        let m = 6;
        let ps = sobol(1 << m, 3, 0).unwrap();
        for a in 0..=m {
            let b = m - a;
            let mut seen = BTreeSet::new();
            for p in ps.points() {
                let cx = libm::floor(p[0] * (1u64 << a) as f64) as u64;
                let cy = libm::floor(p[1] * (1u64 << b) as f64) as u64;
                seen.insert((cx, cy));
            }
            assert_eq!(seen.len(), 1 << m);
        }
    }

    #[test]
    fn random_permutation_is_reproducible() {
        assert_eq!(random_permutation(1, 99).to_one_based(), vec![1]);
        let a = random_permutation(3, 42);
        assert_eq!(a, random_permutation(3, 42));
        assert_ne!(
            random_permutation_stream(20, 42, 0),
            random_permutation_stream(20, 42, 1)
        );
    }

    #[test]
    fn farey_order_three() {
        let gens = enumerate_kronecker_generators(3).unwrap();
        assert_eq!(gens.len(), 8);
        let fractions: Vec<Ratio> = gens
            .iter()
            .filter_map(|g| match g.param {
                KroneckerParam::Fraction(r) => Some(r),
                _ => None,
            })
            .collect();
        assert_eq!(
            fractions,
            vec![
                Ratio::new(1, 3),
                Ratio::new(1, 2),
                Ratio::new(2, 3),
                Ratio::new(1, 1)
            ]
        );
        assert!(gens
            .windows(2)
            .all(|w| w[0].param.cmp_value(&w[1].param).is_lt()));
        assert_eq!(gens[0].param, KroneckerParam::Interior(Ratio::new(1, 6)));
    }

    #[test]
    fn dedupe_small() {
        let gens = enumerate_kronecker_generators(3).unwrap();
        let d = dedupe_permutations(&gens).unwrap();
        assert!(d.len() <= 8);
        assert!(d[0].0.is_identity());
        let set: BTreeSet<_> = d.iter().map(|(p, _)| p.clone()).collect();
        assert_eq!(set.len(), d.len());
    }

    #[test]
    fn three_value_examples() {
        let r = three_value_check(&Permutation::from_one_based(&[1, 4, 2, 5, 3]).unwrap()).unwrap();
        assert!(r.passes);
        assert_eq!(r.observed, vec![3]);
        assert_eq!(r.observed_signed, vec![-2, 3]);
        assert_eq!(r.reference, [4, 5, 1]);
        assert!(!r.literal_match);

        let r = three_value_check(&Permutation::identity(6)).unwrap();
        assert!(r.passes);
        assert_eq!(r.observed, vec![1]);

        let r = three_value_check(&Permutation::from_one_based(&[1, 3, 2, 4]).unwrap()).unwrap();
        assert_eq!(r.observed_signed, vec![-1, 2]);
        assert_eq!(r.observed, vec![2, 3]);
        assert!(r.passes);

        assert!(three_value_check(&Permutation::identity(2)).is_err());
    }
}
