//! Independent verification: fixed-point localization on split bundles,
//! brute-force coefficient extraction, and closed-form classical degrees.
//!
//! The localization oracle evaluates the type-A Grassmann push-forward by
//! summing `f(-y_K) / prod_{k in K, j notin K} (y_j - y_k)` over d-element
//! subsets `K` of the Chern roots. The sum is a polynomial for symmetric
//! `f`; it is computed by clearing the full Vandermonde denominator and
//! dividing exactly, in a ring with enough degree headroom that no
//! intermediate truncation can corrupt the quotient.

use crate::bundle::VectorBundleData;
use crate::laurent::LaurentPoly;
use crate::ring::{RingDescriptor, RingElement};
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::One;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("localization requires a symmetric integrand")]
    NotSymmetric,
    #[error("localization requires 1 <= d <= n, got d = {d} with n = {n}")]
    SubsetSizeOutOfRange { d: usize, n: usize },
    #[error("inexact division while clearing the localization denominator; this is a bug")]
    InexactDivision,
}

/// A bundle split into formal degree-1 root generators `y_1 .. y_n` of a
/// dedicated base ring; the Chern classes of the modeled bundle are the
/// elementary symmetric functions of the roots.
#[derive(Debug, Clone)]
pub struct SplitBundle {
    ring: Arc<RingDescriptor>,
    n: usize,
}

impl SplitBundle {
    pub fn new(n: usize, truncation: u32) -> SplitBundle {
        let generators = (1..=n).map(|i| (format!("y_{i}"), 1)).collect();
        let ring = RingDescriptor::new(generators, truncation).expect("distinct root names");
        SplitBundle { ring, n }
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self, index: usize) -> RingElement {
        RingElement::generator(&self.ring, index)
    }

    /// The modeled bundle: rank `n`, `c_i = e_i(y_1 .. y_n)`.
    pub fn bundle(&self) -> VectorBundleData {
        let chern: Vec<RingElement> = (1..=self.n as u32)
            .map(|k| {
                crate::schur::elementary_symmetric(&self.ring, self.n, k)
                    .eval_at(&(0..self.n).map(|i| self.root(i)).collect::<Vec<_>>())
            })
            .collect();
        VectorBundleData::new("E", self.n as u32, chern).expect("roots are degree 1")
    }
}

/// Exact division of `p` by `(g_a - g_b)` for two degree-1 generators, by
/// Horner evaluation in `g_a`. The ring must have enough headroom that `p`
/// is untruncated.
fn divide_by_generator_difference(
    p: &RingElement,
    a: usize,
    b: usize,
) -> Result<RingElement, OracleError> {
    let ring = p.ring().clone();
    if p.is_zero() {
        return Ok(p.clone());
    }
    // split by the exponent of generator a
    let mut pieces: std::collections::BTreeMap<u32, RingElement> =
        std::collections::BTreeMap::new();
    for (exponents, coefficient) in p.terms() {
        let k = exponents[a];
        let mut stripped = exponents.to_vec();
        stripped[a] = 0;
        let term = RingElement::monomial(&ring, &stripped, coefficient.clone());
        let entry = pieces.entry(k).or_insert_with(|| RingElement::zero(&ring));
        *entry = &*entry + &term;
    }
    let top = *pieces.keys().next_back().expect("nonzero");
    let gb = RingElement::generator(&ring, b);
    let ga = RingElement::generator(&ring, a);
    let mut carry = RingElement::zero(&ring);
    let mut quotient = RingElement::zero(&ring);
    for k in (0..=top).rev() {
        let ck = pieces
            .get(&k)
            .cloned()
            .unwrap_or_else(|| RingElement::zero(&ring));
        let rk = &ck + &(&gb * &carry);
        if k > 0 {
            quotient = &quotient + &(&rk * &ga.pow(k - 1));
            carry = rk;
        } else if !rk.is_zero() {
            return Err(OracleError::InexactDivision);
        }
    }
    Ok(quotient)
}

/// Fixed-point localization for the type-A Grassmann push-forward on a
/// split bundle: the sum over d-subsets `K` of the roots of
/// `f(-y_K) / prod_{k in K, j notin K}(y_j - y_k)`.
///
/// `f` must be a symmetric polynomial in `d` variables over the split
/// ring. The result lives back in the split ring (truncated as usual).
pub fn localization_push_grassmann(
    split: &SplitBundle,
    d: usize,
    f: &LaurentPoly,
) -> Result<RingElement, OracleError> {
    let n = split.n();
    if d == 0 || d > n {
        return Err(OracleError::SubsetSizeOutOfRange { d, n });
    }
    assert_eq!(f.arity(), d, "integrand arity must equal the subset size");
    assert!(f.is_polynomial(), "integrand must be a polynomial");
    assert_eq!(
        f.ring().generators(),
        split.ring().generators(),
        "integrand must live over the split ring"
    );
    if !f.is_symmetric() {
        return Err(OracleError::NotSymmetric);
    }

    // headroom: nothing in the numerator may be truncated before division
    let pair_count = (n * (n - 1) / 2) as u32;
    let f_degree = f
        .terms()
        .map(|(e, c)| {
            c.max_degree().expect("nonzero coefficient") as i64
                + e.iter().map(|&k| k as i64).sum::<i64>()
        })
        .max()
        .unwrap_or(0)
        .max(0) as u32;
    let work = split.ring().with_truncation(f_degree + pair_count);
    let roots: Vec<RingElement> = (0..n).map(|i| RingElement::generator(&work, i)).collect();

    let f_work = {
        // re-type the coefficients into the work ring
        let mut lifted = LaurentPoly::zero(&work, d);
        for (exponents, coefficient) in f.terms() {
            lifted = &lifted + &LaurentPoly::monomial(coefficient.map_to(&work), exponents);
        }
        lifted
    };

    let mut numerator = RingElement::zero(&work);
    for subset in (0..n).combinations(d) {
        // f(-y_K)
        let values: Vec<RingElement> = subset.iter().map(|&k| -&roots[k]).collect();
        let mut contribution = f_work.eval_at(&values);
        if contribution.is_zero() {
            continue;
        }
        // V / D_K: the non-cut pairs, with the sign of the cut pairs that
        // the subset orientation flips
        let in_subset = |i: usize| subset.binary_search(&i).is_ok();
        let mut flips = 0usize;
        for i in 0..n {
            for j in (i + 1)..n {
                match (in_subset(i), in_subset(j)) {
                    (true, false) => flips += 1,
                    (true, true) | (false, false) => {
                        contribution = &contribution * &(&roots[i] - &roots[j]);
                    }
                    (false, true) => {}
                }
            }
        }
        if flips % 2 == 1 {
            contribution = -&contribution;
        }
        numerator = &numerator + &contribution;
    }

    let mut quotient = numerator;
    for a in 0..n {
        for b in (a + 1)..n {
            quotient = divide_by_generator_difference(&quotient, a, b)?;
        }
    }
    Ok(quotient.map_to(split.ring()))
}

/// Coefficient of the target in the fully expanded product; the oracle
/// counterpart of `staged_extract`, for small instances only.
pub fn brute_force_coeff(factors: &[&LaurentPoly], target: &[i32]) -> RingElement {
    assert!(!factors.is_empty(), "need at least one factor");
    let mut product = factors[0].clone();
    for factor in &factors[1..] {
        product = &product * factor;
    }
    product.coeff(target)
}

/// Classical spaces with known closed-form degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// `G(d, n)`, d-planes in n-space, in its Pluecker embedding.
    Grassmann { d: u32, n: u32 },
    /// Lagrangian Grassmannian `LG(n)` of a 2n-dimensional symplectic space.
    Lagrangian { n: u32 },
    /// Projective space `P^n`.
    Projective { n: u32 },
    /// A smooth quadric hypersurface in `P(E)` for a rank-`rank` bundle.
    Quadric { rank: u32 },
}

/// Closed-form degree of a classical space:
///
/// * `G(d, n)`: `(d(n-d))! * prod_{i=0}^{d-1} i! / (n-d+i)!`;
/// * `LG(n)`: `(n(n+1)/2)! / prod_{i=1}^{n} (2i-1)!!`;
/// * `P^n`: 1; quadric: 2.
pub fn classical_degree(space: Space) -> BigInt {
    fn factorial(k: u64) -> BigInt {
        let mut out = BigInt::one();
        for i in 2..=k {
            out *= i;
        }
        out
    }
    fn double_factorial_odd(i: u64) -> BigInt {
        // (2i - 1)!! = 1 * 3 * ... * (2i - 1)
        let mut out = BigInt::one();
        let mut k = 1u64;
        while k < 2 * i {
            out *= k;
            k += 2;
        }
        out
    }
    match space {
        Space::Projective { .. } => BigInt::one(),
        Space::Quadric { .. } => BigInt::from(2),
        Space::Grassmann { d, n } => {
            assert!(d >= 1 && d < n, "grassmannian needs 1 <= d < n");
            let (d, n) = (d as u64, n as u64);
            let mut out = factorial(d * (n - d));
            for i in 0..d {
                out *= factorial(i);
            }
            let mut denominator = BigInt::one();
            for i in 0..d {
                denominator *= factorial(n - d + i);
            }
            out / denominator
        }
        Space::Lagrangian { n } => {
            assert!(n >= 1, "lagrangian grassmannian needs n >= 1");
            let n = n as u64;
            let mut out = factorial(n * (n + 1) / 2);
            for i in 1..=n {
                out /= double_factorial_odd(i);
            }
            out
        }
    }
}
