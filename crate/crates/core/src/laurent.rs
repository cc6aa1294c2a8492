//! Laurent polynomials in auxiliary variables `t_1..t_d` over ring
//! coefficients, and the coefficient-extraction operator `[m](f)`.
//!
//! Push-forwards are evaluated as a single extraction from a product of
//! factors. [`staged_extract`] multiplies the factors one at a time and
//! prunes every intermediate term that can no longer reach the target
//! monomial, which keeps the product sparse even though the Segre factors
//! carry negative exponents down to `-D`.

use crate::det::{determinant, DetRing};
use crate::ring::{RingDescriptor, RingElement};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaurentError {
    #[error("matrix entry ({row},{col}) involves variable t_{var} but may only involve t_{col}")]
    ForeignVariable { row: usize, col: usize, var: usize },
}

/// A sparse Laurent polynomial in `arity` variables with [`RingElement`]
/// coefficients. Exponents may be negative; no zero coefficient is stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    ring: Arc<RingDescriptor>,
    arity: usize,
    terms: BTreeMap<Vec<i32>, RingElement>,
}

impl LaurentPoly {
    pub fn zero(ring: &Arc<RingDescriptor>, arity: usize) -> LaurentPoly {
        LaurentPoly {
            ring: ring.clone(),
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<RingDescriptor>, arity: usize) -> LaurentPoly {
        LaurentPoly::constant(RingElement::one(ring), arity)
    }

    /// A degree-zero term in the `t` variables.
    pub fn constant(value: RingElement, arity: usize) -> LaurentPoly {
        LaurentPoly::monomial(value, &vec![0; arity])
    }

    /// The variable `t_{index+1}` (indices are 0-based in code).
    pub fn variable(ring: &Arc<RingDescriptor>, arity: usize, index: usize) -> LaurentPoly {
        LaurentPoly::variable_pow(ring, arity, index, 1)
    }

    pub fn variable_pow(
        ring: &Arc<RingDescriptor>,
        arity: usize,
        index: usize,
        exponent: i32,
    ) -> LaurentPoly {
        assert!(index < arity, "variable index out of range");
        let mut exponents = vec![0i32; arity];
        exponents[index] = exponent;
        LaurentPoly::monomial(RingElement::one(ring), &exponents)
    }

    pub fn monomial(coefficient: RingElement, exponents: &[i32]) -> LaurentPoly {
        let ring = coefficient.ring().clone();
        let arity = exponents.len();
        let mut terms = BTreeMap::new();
        if !coefficient.is_zero() {
            terms.insert(exponents.to_vec(), coefficient);
        }
        LaurentPoly { ring, arity, terms }
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        &self.ring
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32], &RingElement)> {
        self.terms.iter().map(|(e, c)| (&e[..], c))
    }

    /// True when every exponent is non-negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k >= 0))
    }

    /// The coefficient of `t_1^{m_1} ... t_d^{m_d}`; zero if absent.
    pub fn coeff(&self, monomial: &[i32]) -> RingElement {
        assert_eq!(
            monomial.len(),
            self.arity,
            "extraction target arity mismatch"
        );
        self.terms
            .get(monomial)
            .cloned()
            .unwrap_or_else(|| RingElement::zero(&self.ring))
    }

    pub fn scale(&self, factor: &BigInt) -> LaurentPoly {
        self.map_coefficients(|c| c.scale(factor))
    }

    pub fn mul_coefficient(&self, factor: &RingElement) -> LaurentPoly {
        self.map_coefficients(|c| c * factor)
    }

    fn map_coefficients(&self, f: impl Fn(&RingElement) -> RingElement) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mapped = f(c);
            if !mapped.is_zero() {
                terms.insert(e.clone(), mapped);
            }
        }
        LaurentPoly {
            ring: self.ring.clone(),
            arity: self.arity,
            terms,
        }
    }

    pub fn pow(&self, exponent: u32) -> LaurentPoly {
        let mut result = LaurentPoly::one(&self.ring, self.arity);
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

    /// Multiplies by the monomial `prod t_i^{shift_i}`.
    pub fn shift(&self, shift: &[i32]) -> LaurentPoly {
        assert_eq!(shift.len(), self.arity);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let shifted: Vec<i32> = e.iter().zip(shift).map(|(a, b)| a + b).collect();
                (shifted, c.clone())
            })
            .collect();
        LaurentPoly {
            ring: self.ring.clone(),
            arity: self.arity,
            terms,
        }
    }

    /// Renames variable `i` to `map[i]`; unmapped target slots get exponent
    /// zero. `map` must be injective into `0..new_arity`.
    pub fn rename_vars(&self, map: &[usize], new_arity: usize) -> LaurentPoly {
        assert_eq!(map.len(), self.arity);
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut renamed = vec![0i32; new_arity];
            for (i, &k) in e.iter().enumerate() {
                assert!(map[i] < new_arity, "rename target out of range");
                renamed[map[i]] += k;
            }
            assert!(
                terms.insert(renamed, c.clone()).is_none(),
                "rename map must be injective"
            );
        }
        LaurentPoly {
            ring: self.ring.clone(),
            arity: new_arity,
            terms,
        }
    }

    pub fn swap_vars(&self, i: usize, j: usize) -> LaurentPoly {
        let mut map: Vec<usize> = (0..self.arity).collect();
        map.swap(i, j);
        self.rename_vars(&map, self.arity)
    }

    /// Invariance under every permutation of all variables (checked on the
    /// adjacent transpositions, which generate the symmetric group).
    pub fn is_symmetric(&self) -> bool {
        (1..self.arity).all(|i| self.swap_vars(i - 1, i) == *self)
    }

    /// Negates under every adjacent transposition.
    pub fn is_antisymmetric(&self) -> bool {
        (1..self.arity).all(|i| self.swap_vars(i - 1, i) == -self)
    }

    /// Substitutes ring values for the variables; requires a polynomial.
    pub fn eval_at(&self, values: &[RingElement]) -> RingElement {
        assert_eq!(values.len(), self.arity);
        assert!(self.is_polynomial(), "cannot evaluate negative exponents");
        // power cache per variable
        let mut powers: Vec<Vec<RingElement>> = values
            .iter()
            .map(|v| vec![RingElement::one(&self.ring), v.clone()])
            .collect();
        let mut result = RingElement::zero(&self.ring);
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = &powers[i][powers[i].len() - 1] * &values[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    term = &term * &powers[i][k];
                }
            }
            result = &result + &term;
        }
        result
    }

    /// Decomposes by the exponent of one variable: the returned pieces have
    /// exponent zero in `var` and satisfy `self = sum piece_k * t_var^k`.
    pub fn by_var_exponent(&self, var: usize) -> BTreeMap<i32, LaurentPoly> {
        assert!(var < self.arity);
        let mut out: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[var];
            let mut stripped = e.clone();
            stripped[var] = 0;
            out.entry(k)
                .or_insert_with(|| LaurentPoly::zero(&self.ring, self.arity))
                .terms
                .insert(stripped, c.clone());
        }
        out
    }

    /// `(min, max)` exponent per variable over all stored terms.
    pub fn exponent_ranges(&self) -> Vec<(i64, i64)> {
        let mut ranges = vec![(i64::MAX, i64::MIN); self.arity];
        for e in self.terms.keys() {
            for (j, &k) in e.iter().enumerate() {
                ranges[j].0 = ranges[j].0.min(k as i64);
                ranges[j].1 = ranges[j].1.max(k as i64);
            }
        }
        ranges
    }

    /// Minimum over terms of (coefficient min degree + sum of exponents),
    /// counting each `t` variable with degree one. `None` for zero.
    pub fn min_total_degree(&self) -> Option<i64> {
        self.terms
            .iter()
            .map(|(e, c)| {
                c.min_degree().expect("nonzero coefficient") as i64
                    + e.iter().map(|&k| k as i64).sum::<i64>()
            })
            .min()
    }

    /// Total-degree classification with `deg t_i = 1`.
    pub fn homogeneity(&self) -> crate::ring::Homogeneity {
        use crate::ring::Homogeneity;
        let mut degree: Option<i64> = None;
        for (e, c) in &self.terms {
            let t_part: i64 = e.iter().map(|&k| k as i64).sum();
            match c.homogeneity() {
                Homogeneity::Zero => unreachable!("stored coefficients are nonzero"),
                Homogeneity::Mixed => return Homogeneity::Mixed,
                Homogeneity::Homogeneous(d) => {
                    let total = d as i64 + t_part;
                    match degree {
                        None => degree = Some(total),
                        Some(existing) if existing == total => {}
                        Some(_) => return Homogeneity::Mixed,
                    }
                }
            }
        }
        match degree {
            None => Homogeneity::Zero,
            // negative totals cannot arise from polynomial integrands, but
            // Laurent terms allow them; clamp is fine for reporting
            Some(d) => Homogeneity::Homogeneous(d.max(0) as u32),
        }
    }

    fn assert_compatible(&self, other: &LaurentPoly) {
        assert_eq!(self.arity, other.arity, "laurent arity mismatch");
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "ring descriptor mismatch"
        );
    }

    fn insert_term(
        terms: &mut BTreeMap<Vec<i32>, RingElement>,
        exponents: Vec<i32>,
        value: RingElement,
    ) {
        if value.is_zero() {
            return;
        }
        match terms.entry(exponents) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &value;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value);
            }
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, other: &LaurentPoly) -> LaurentPoly {
        self.assert_compatible(other);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            LaurentPoly::insert_term(&mut terms, e.clone(), c.clone());
        }
        LaurentPoly {
            ring: self.ring.clone(),
            arity: self.arity,
            terms,
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, other: &LaurentPoly) -> LaurentPoly {
        self + &(-other)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        self.map_coefficients(|c| -c)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    // convolution: exponents add while coefficients multiply
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: &LaurentPoly) -> LaurentPoly {
        self.assert_compatible(other);
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let product = ca * cb;
                if product.is_zero() {
                    continue;
                }
                let exponents: Vec<i32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                LaurentPoly::insert_term(&mut terms, exponents, product);
            }
        }
        LaurentPoly {
            ring: self.ring.clone(),
            arity: self.arity,
            terms,
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let coeff = if c.term_count() > 1 {
                    format!("({c})")
                } else {
                    c.to_string()
                };
                let mut parts = Vec::new();
                for (i, &k) in e.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => parts.push(format!("t_{}", i + 1)),
                        _ => parts.push(format!("t_{}^{}", i + 1, k)),
                    }
                }
                if parts.is_empty() {
                    coeff
                } else if c.is_one() {
                    parts.join("*")
                } else {
                    format!("{coeff}*{}", parts.join("*"))
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + ").replace("+ -", "- "))
    }
}

impl DetRing for RingElement {
    fn zero_like(&self) -> Self {
        RingElement::zero(self.ring())
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
}

impl DetRing for LaurentPoly {
    fn zero_like(&self) -> Self {
        LaurentPoly::zero(&self.ring, self.arity)
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
}

/// Division-free determinant of a matrix of ring elements.
pub fn ring_determinant(matrix: &[Vec<RingElement>]) -> RingElement {
    determinant(matrix)
}

/// Division-free determinant of a matrix of Laurent polynomials.
pub fn laurent_determinant(matrix: &[Vec<LaurentPoly>]) -> LaurentPoly {
    determinant(matrix)
}

/// Coefficient of the target monomial in the product of `factors`,
/// computed without ever expanding the full product.
///
/// Factors are multiplied left to right; a partial term survives only if
/// every variable exponent can still be steered into the target by the
/// factors not yet multiplied, and only if its total degree can still lead
/// to a ring coefficient within the truncation bound.
pub fn staged_extract(factors: &[&LaurentPoly], target: &[u32]) -> RingElement {
    assert!(
        !factors.is_empty(),
        "staged_extract needs at least one factor"
    );
    let first = factors[0];
    let ring = first.ring().clone();
    let arity = first.arity();
    for f in factors {
        first.assert_compatible(f);
    }
    assert_eq!(target.len(), arity, "extraction target arity mismatch");

    if factors.iter().any(|f| f.is_zero()) {
        return RingElement::zero(&ring);
    }

    let n = factors.len();
    let ranges: Vec<Vec<(i64, i64)>> = factors.iter().map(|f| f.exponent_ranges()).collect();
    let min_totals: Vec<i64> = factors
        .iter()
        .map(|f| f.min_total_degree().expect("nonzero factor"))
        .collect();

    // suffix[k] bounds the joint contribution of factors k..n
    let mut suffix_min = vec![vec![0i64; arity]; n + 1];
    let mut suffix_max = vec![vec![0i64; arity]; n + 1];
    let mut suffix_min_total = vec![0i64; n + 1];
    for k in (0..n).rev() {
        for j in 0..arity {
            suffix_min[k][j] = suffix_min[k + 1][j] + ranges[k][j].0;
            suffix_max[k][j] = suffix_max[k + 1][j] + ranges[k][j].1;
        }
        suffix_min_total[k] = suffix_min_total[k + 1] + min_totals[k];
    }

    let target_sum: i64 = target.iter().map(|&e| e as i64).sum();
    let cap = ring.truncation() as i64 + target_sum;

    let prune =
        |exponents: &[i32], coefficient: &RingElement, next: usize| -> Option<RingElement> {
            for j in 0..arity {
                let v = exponents[j] as i64;
                let e = target[j] as i64;
                if v + suffix_max[next][j] < e || v + suffix_min[next][j] > e {
                    return None;
                }
            }
            let t_part: i64 = exponents.iter().map(|&k| k as i64).sum();
            let degree_room = cap - suffix_min_total[next] - t_part;
            if degree_room < 0 {
                return None;
            }
            let kept = coefficient.truncate_above(degree_room as u32);
            if kept.is_zero() {
                None
            } else {
                Some(kept)
            }
        };

    let mut acc = LaurentPoly::zero(&ring, arity);
    for (e, c) in &first.terms {
        if let Some(kept) = prune(e, c, 1) {
            acc.terms.insert(e.clone(), kept);
        }
    }

    for (k, factor) in factors.iter().enumerate().skip(1) {
        if acc.is_zero() {
            return RingElement::zero(&ring);
        }
        let mut next = BTreeMap::new();
        for (ea, ca) in &acc.terms {
            for (eb, cb) in &factor.terms {
                let exponents: Vec<i32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                // cheap exponent-window reject before the coefficient product
                let window_ok = (0..arity).all(|j| {
                    let v = exponents[j] as i64;
                    let e = target[j] as i64;
                    v + suffix_max[k + 1][j] >= e && v + suffix_min[k + 1][j] <= e
                });
                if !window_ok {
                    continue;
                }
                let product = ca * cb;
                if product.is_zero() {
                    continue;
                }
                if let Some(kept) = prune(&exponents, &product, k + 1) {
                    LaurentPoly::insert_term(&mut next, exponents, kept);
                }
            }
        }
        acc.terms = next;
    }

    let signed: Vec<i32> = target.iter().map(|&e| e as i32).collect();
    acc.coeff(&signed)
}

/// Extraction through a determinant whose `(i, j)` entry involves only the
/// variable `t_j`: the coefficient of the target in `det F` equals the
/// determinant of the per-entry extractions.
pub fn det_extract(
    matrix: &[Vec<LaurentPoly>],
    target: &[u32],
) -> Result<RingElement, LaurentError> {
    let n = matrix.len();
    assert!(
        n >= 1 && matrix.iter().all(|row| row.len() == n),
        "matrix must be square"
    );
    assert_eq!(target.len(), n, "extraction target arity mismatch");
    let mut extracted: Vec<Vec<RingElement>> = Vec::with_capacity(n);
    for (i, row) in matrix.iter().enumerate() {
        let mut out_row = Vec::with_capacity(n);
        for (j, entry) in row.iter().enumerate() {
            for (e, _) in entry.terms() {
                for (var, &k) in e.iter().enumerate() {
                    if var != j && k != 0 {
                        return Err(LaurentError::ForeignVariable {
                            row: i,
                            col: j,
                            var,
                        });
                    }
                }
            }
            // the coefficient of t_j^{target_j}, other variables absent
            let mut coeff = RingElement::zero(entry.ring());
            for (e, c) in entry.terms() {
                if e[j] == target[j] as i32 {
                    coeff = &coeff + c;
                }
            }
            out_row.push(coeff);
        }
        extracted.push(out_row);
    }
    Ok(ring_determinant(&extracted))
}
