//! Exact arithmetic in a truncated graded commutative polynomial ring.
//!
//! The ring is `Z[g_1, ..., g_m]` with each generator carrying a positive
//! degree, truncated so that every monomial of weighted degree above the
//! descriptor's `truncation` is identically zero. This models the even
//! cohomology / Chow ring of a base of bounded dimension: products are
//! truncated eagerly, which is sound because no downstream extraction ever
//! needs a coefficient of degree above the truncation bound.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("generator `{0}` has degree 0; degrees must be >= 1")]
    ZeroDegree(String),
}

/// A named graded polynomial ring with degree truncation.
///
/// Elements are shared via `Arc`; two descriptors compare equal when their
/// generator lists and truncation agree, so rings defined independently but
/// identically are interchangeable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingDescriptor {
    generators: Vec<(String, u32)>,
    truncation: u32,
}

impl RingDescriptor {
    /// Defines a ring from `(name, degree)` pairs and a truncation bound.
    pub fn new(
        generators: Vec<(String, u32)>,
        truncation: u32,
    ) -> Result<Arc<RingDescriptor>, RingError> {
        let mut seen = std::collections::BTreeSet::new();
        for (name, degree) in &generators {
            if *degree == 0 {
                return Err(RingError::ZeroDegree(name.clone()));
            }
            if !seen.insert(name.clone()) {
                return Err(RingError::DuplicateName(name.clone()));
            }
        }
        Ok(Arc::new(RingDescriptor {
            generators,
            truncation,
        }))
    }

    /// A ring with no generators: elements are plain integers, degree 0.
    pub fn integers() -> Arc<RingDescriptor> {
        Arc::new(RingDescriptor {
            generators: Vec::new(),
            truncation: 0,
        })
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[(String, u32)] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|(n, _)| n == name)
    }

    pub fn generator_degree(&self, index: usize) -> u32 {
        self.generators[index].1
    }

    /// Weighted degree of an exponent vector.
    pub fn weighted_degree(&self, exponents: &[u32]) -> u32 {
        exponents
            .iter()
            .zip(&self.generators)
            .map(|(e, (_, d))| e * d)
            .sum()
    }

    /// Same generators, different truncation. Used by oracles that need
    /// headroom above the base truncation to divide exactly.
    pub fn with_truncation(&self, truncation: u32) -> Arc<RingDescriptor> {
        Arc::new(RingDescriptor {
            generators: self.generators.clone(),
            truncation,
        })
    }
}

/// A monomial in the generators, ordered by (weighted degree, exponents).
///
/// The derived order is the canonical term order used everywhere: ascending
/// total degree, then lexicographic on the exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Monomial {
    degree: u32,
    exponents: Box<[u32]>,
}

/// Homogeneity classification of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Homogeneous(u32),
    Mixed,
}

/// An element of a truncated graded polynomial ring.
///
/// Canonical form: no zero coefficients, no terms above the truncation
/// bound, terms ordered by (degree, exponents). Values are immutable and
/// freely shareable between threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingElement {
    ring: Arc<RingDescriptor>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl RingElement {
    pub fn zero(ring: &Arc<RingDescriptor>) -> RingElement {
        RingElement {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<RingDescriptor>) -> RingElement {
        RingElement::constant(ring, BigInt::one())
    }

    pub fn constant(ring: &Arc<RingDescriptor>, value: impl Into<BigInt>) -> RingElement {
        let value = value.into();
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(
                Monomial {
                    degree: 0,
                    exponents: vec![0; ring.generator_count()].into(),
                },
                value,
            );
        }
        RingElement {
            ring: ring.clone(),
            terms,
        }
    }

    /// The generator with the given index, or zero if its degree exceeds
    /// the truncation bound.
    pub fn generator(ring: &Arc<RingDescriptor>, index: usize) -> RingElement {
        let mut exponents = vec![0u32; ring.generator_count()];
        exponents[index] = 1;
        RingElement::monomial(ring, &exponents, BigInt::one())
    }

    pub fn generator_by_name(ring: &Arc<RingDescriptor>, name: &str) -> Option<RingElement> {
        ring.generator_index(name)
            .map(|i| RingElement::generator(ring, i))
    }

    /// A single term `coefficient * prod g_i^{exponents[i]}`, truncated.
    pub fn monomial(
        ring: &Arc<RingDescriptor>,
        exponents: &[u32],
        coefficient: impl Into<BigInt>,
    ) -> RingElement {
        assert_eq!(
            exponents.len(),
            ring.generator_count(),
            "exponent vector length must match generator count"
        );
        let coefficient = coefficient.into();
        let degree = ring.weighted_degree(exponents);
        let mut terms = BTreeMap::new();
        if !coefficient.is_zero() && degree <= ring.truncation() {
            terms.insert(
                Monomial {
                    degree,
                    exponents: exponents.to_vec().into(),
                },
                coefficient,
            );
        }
        RingElement {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(m, c)| m.degree == 0 && c.is_one())
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterates `(exponents, coefficient)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(m, c)| (&m.exponents[..], c))
    }

    /// The constant (degree 0) coefficient.
    pub fn constant_coefficient(&self) -> BigInt {
        self.terms
            .iter()
            .find(|(m, _)| m.degree == 0)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigInt::zero)
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree)
    }

    pub fn homogeneity(&self) -> Homogeneity {
        match (self.min_degree(), self.max_degree()) {
            (None, _) => Homogeneity::Zero,
            (Some(lo), Some(hi)) if lo == hi => Homogeneity::Homogeneous(lo),
            _ => Homogeneity::Mixed,
        }
    }

    /// True if the element is zero or concentrated in one degree.
    pub fn is_homogeneous_of(&self, degree: u32) -> bool {
        match self.homogeneity() {
            Homogeneity::Zero => true,
            Homogeneity::Homogeneous(d) => d == degree,
            Homogeneity::Mixed => false,
        }
    }

    /// Drops every term of weighted degree above `bound`.
    pub fn truncate_above(&self, bound: u32) -> RingElement {
        if self.max_degree().is_none_or(|d| d <= bound) {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree <= bound)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        RingElement {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Sum of the terms of weighted degree exactly `k`.
    pub fn grade_component(&self, k: u32) -> RingElement {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree == k)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        RingElement {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Re-interprets the element in `target`, dropping terms above the
    /// target's truncation. The generator lists must agree.
    pub fn map_to(&self, target: &Arc<RingDescriptor>) -> RingElement {
        assert_eq!(
            self.ring.generators(),
            target.generators(),
            "rings must share generators"
        );
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree <= target.truncation())
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        RingElement {
            ring: target.clone(),
            terms,
        }
    }

    pub fn scale(&self, factor: &BigInt) -> RingElement {
        if factor.is_zero() {
            return RingElement::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c * factor))
            .collect();
        RingElement {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Divides every coefficient by two. `None` if any coefficient is odd.
    pub fn try_halve(&self) -> Option<RingElement> {
        let two = BigInt::from(2);
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if (c % &two).is_zero() {
                terms.insert(m.clone(), c / &two);
            } else {
                return None;
            }
        }
        Some(RingElement {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn pow(&self, exponent: u32) -> RingElement {
        let mut result = RingElement::one(&self.ring);
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    fn assert_same_ring(&self, other: &RingElement) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "ring descriptor mismatch"
        );
    }
}

impl Add for &RingElement {
    type Output = RingElement;

    fn add(self, other: &RingElement) -> RingElement {
        self.assert_same_ring(other);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.entry(m.clone()) {
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c.clone());
                }
            }
        }
        RingElement {
            ring: self.ring.clone(),
            terms,
        }
    }
}

impl Sub for &RingElement {
    type Output = RingElement;

    fn sub(self, other: &RingElement) -> RingElement {
        self + &(-other)
    }
}

impl Neg for &RingElement {
    type Output = RingElement;

    fn neg(self) -> RingElement {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        RingElement {
            ring: self.ring.clone(),
            terms,
        }
    }
}

impl Mul for &RingElement {
    type Output = RingElement;

    fn mul(self, other: &RingElement) -> RingElement {
        self.assert_same_ring(other);
        let bound = self.ring.truncation();
        let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            if ma.degree > bound {
                continue;
            }
            for (mb, cb) in &other.terms {
                let degree = ma.degree + mb.degree;
                if degree > bound {
                    continue;
                }
                let exponents: Box<[u32]> = ma
                    .exponents
                    .iter()
                    .zip(mb.exponents.iter())
                    .map(|(a, b)| a + b)
                    .collect();
                let key = Monomial { degree, exponents };
                let coeff = ca * cb;
                match terms.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += coeff;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(coeff);
                    }
                }
            }
        }
        RingElement {
            ring: self.ring.clone(),
            terms,
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts = Vec::new();
            if !magnitude.is_one() || m.degree == 0 {
                parts.push(magnitude.to_string());
            }
            for (k, (name, _)) in m.exponents.iter().zip(self.ring.generators()) {
                match k {
                    0 => {}
                    1 => parts.push(name.clone()),
                    _ => parts.push(format!("{name}^{k}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
