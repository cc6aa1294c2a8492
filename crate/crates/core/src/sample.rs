//! Random sampling of rings, bundles and integrands for the randomized
//! verification suites. All generators take the RNG explicitly so runs
//! are reproducible from a seed.

use crate::bundle::VectorBundleData;
use crate::laurent::LaurentPoly;
use crate::ring::{RingDescriptor, RingElement};
use crate::schur::elementary_symmetric;
use num_bigint::BigInt;
use rand::Rng;
use std::sync::Arc;

/// All exponent vectors of the given weighted degree.
fn monomials_of_degree(ring: &Arc<RingDescriptor>, degree: u32) -> Vec<Vec<u32>> {
    fn walk(
        weights: &[u32],
        var: usize,
        remaining: u32,
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if var == weights.len() {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        let weight = weights[var];
        let mut exponent = 0u32;
        while exponent * weight <= remaining {
            current.push(exponent);
            walk(
                weights,
                var + 1,
                remaining - exponent * weight,
                current,
                out,
            );
            current.pop();
            exponent += 1;
        }
    }
    let weights: Vec<u32> = ring.generators().iter().map(|(_, w)| *w).collect();
    if weights.is_empty() {
        return if degree == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    walk(&weights, 0, degree, &mut Vec::new(), &mut out);
    out
}

/// A random homogeneous element of the given degree with small integer
/// coefficients (possibly zero).
pub fn random_homogeneous(
    ring: &Arc<RingDescriptor>,
    degree: u32,
    max_terms: usize,
    rng: &mut impl Rng,
) -> RingElement {
    if degree > ring.truncation() {
        return RingElement::zero(ring);
    }
    let pool = monomials_of_degree(ring, degree);
    if pool.is_empty() {
        return RingElement::zero(ring);
    }
    let mut out = RingElement::zero(ring);
    for _ in 0..rng.gen_range(0..=max_terms) {
        let exponents = &pool[rng.gen_range(0..pool.len())];
        let coefficient = rng.gen_range(-3i64..=3);
        out = &out + &RingElement::monomial(ring, exponents, BigInt::from(coefficient));
    }
    out
}

/// A random element with terms spread over degrees `0..=D`.
pub fn random_element(
    ring: &Arc<RingDescriptor>,
    max_terms: usize,
    rng: &mut impl Rng,
) -> RingElement {
    let mut out = RingElement::zero(ring);
    for _ in 0..rng.gen_range(0..=max_terms) {
        let degree = rng.gen_range(0..=ring.truncation());
        out = &out + &random_homogeneous(ring, degree, 1, rng);
    }
    out
}

/// A random bundle: homogeneous Chern classes up to the rank, some zero.
pub fn random_bundle(
    ring: &Arc<RingDescriptor>,
    name: &str,
    rank: u32,
    rng: &mut impl Rng,
) -> VectorBundleData {
    let chern: Vec<RingElement> = (1..=rank.min(ring.truncation()))
        .map(|i| random_homogeneous(ring, i, 2, rng))
        .collect();
    VectorBundleData::new(name, rank, chern).expect("homogeneous by construction")
}

/// A random bundle with vanishing odd Chern classes, as for orthogonal or
/// symplectic bundles with values in the trivial line bundle.
pub fn random_self_dual_bundle(
    ring: &Arc<RingDescriptor>,
    name: &str,
    rank: u32,
    rng: &mut impl Rng,
) -> VectorBundleData {
    let chern: Vec<RingElement> = (1..=rank.min(ring.truncation()))
        .map(|i| {
            if i % 2 == 0 {
                random_homogeneous(ring, i, 2, rng)
            } else {
                RingElement::zero(ring)
            }
        })
        .collect();
    VectorBundleData::new(name, rank, chern).expect("homogeneous by construction")
}

/// Random sparse monomial terms `(coefficient, exponent sequence)` with
/// non-negative exponents bounded by `max_exp`.
pub fn random_monomial_terms(
    ring: &Arc<RingDescriptor>,
    d: usize,
    count: usize,
    max_exp: i64,
    rng: &mut impl Rng,
) -> Vec<(RingElement, Vec<i64>)> {
    (0..count)
        .map(|_| {
            let coefficient = if rng.gen_bool(0.3) {
                random_element(ring, 2, rng)
            } else {
                RingElement::constant(ring, rng.gen_range(-4i64..=4))
            };
            let lambda: Vec<i64> = (0..d).map(|_| rng.gen_range(0..=max_exp)).collect();
            (coefficient, lambda)
        })
        .collect()
}

/// Assembles monomial terms into an integrand polynomial.
pub fn monomials_to_poly(
    ring: &Arc<RingDescriptor>,
    d: usize,
    terms: &[(RingElement, Vec<i64>)],
) -> LaurentPoly {
    let mut out = LaurentPoly::zero(ring, d);
    for (coefficient, lambda) in terms {
        let exponents: Vec<i32> = lambda.iter().map(|&x| x as i32).collect();
        out = &out + &LaurentPoly::monomial(coefficient.clone(), &exponents);
    }
    out
}

/// A random symmetric polynomial: an integer combination of products of
/// elementary symmetric polynomials, of total degree at most `max_degree`.
pub fn random_symmetric_poly(
    ring: &Arc<RingDescriptor>,
    d: usize,
    max_degree: u32,
    rng: &mut impl Rng,
) -> LaurentPoly {
    let mut out = LaurentPoly::zero(ring, d);
    for _ in 0..rng.gen_range(1..=3usize) {
        let mut degree_left = max_degree;
        let mut product =
            LaurentPoly::constant(RingElement::constant(ring, rng.gen_range(-3i64..=3)), d);
        while degree_left > 0 && rng.gen_bool(0.7) {
            let k = rng.gen_range(1..=(d as u32).min(degree_left));
            product = &product * &elementary_symmetric(ring, d, k);
            degree_left -= k;
        }
        out = &out + &product;
    }
    out
}

/// A random Laurent polynomial (exponents possibly negative), for
/// extraction-versus-brute-force checks.
pub fn random_laurent(
    ring: &Arc<RingDescriptor>,
    d: usize,
    max_terms: usize,
    exponent_range: std::ops::RangeInclusive<i32>,
    rng: &mut impl Rng,
) -> LaurentPoly {
    let mut out = LaurentPoly::zero(ring, d);
    for _ in 0..rng.gen_range(1..=max_terms) {
        let exponents: Vec<i32> = (0..d)
            .map(|_| rng.gen_range(exponent_range.clone()))
            .collect();
        let coefficient = if rng.gen_bool(0.3) {
            random_element(ring, 2, rng)
        } else {
            RingElement::constant(ring, rng.gen_range(-3i64..=3))
        };
        out = &out + &LaurentPoly::monomial(coefficient, &exponents);
    }
    out
}

/// Antisymmetrization `sum_sigma sign(sigma) sigma(m)` of a random
/// monomial with distinct exponents; vanishes only if the coefficient
/// sampled to zero.
pub fn random_antisymmetric(
    ring: &Arc<RingDescriptor>,
    d: usize,
    max_exp: i32,
    rng: &mut impl Rng,
) -> LaurentPoly {
    use itertools::Itertools;
    // distinct exponents guarantee the orbit sum does not cancel
    let mut exponents: Vec<i32> = (0..d as i32).collect();
    let spread = rng.gen_range(0..=max_exp.saturating_sub(d as i32).max(0));
    for e in exponents.iter_mut() {
        *e += spread;
    }
    if rng.gen_bool(0.5) && exponents.len() > 1 {
        exponents[0] += rng.gen_range(1..=2);
    }
    let coefficient = RingElement::constant(ring, rng.gen_range(1i64..=3));
    let mut out = LaurentPoly::zero(ring, d);
    for permutation in (0..d).permutations(d) {
        let permuted: Vec<i32> = (0..d).map(|i| exponents[permutation[i]]).collect();
        let sign = permutation_sign(&permutation);
        let term = LaurentPoly::monomial(coefficient.scale(&BigInt::from(sign)), &permuted);
        out = &out + &term;
    }
    out
}

fn permutation_sign(permutation: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for i in 0..permutation.len() {
        for j in (i + 1)..permutation.len() {
            if permutation[i] > permutation[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// A weakly decreasing sequence (partition, possibly with zero parts).
pub fn random_partition(length: usize, max_part: i64, rng: &mut impl Rng) -> Vec<i64> {
    let mut parts: Vec<i64> = (0..length).map(|_| rng.gen_range(0..=max_part)).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}
