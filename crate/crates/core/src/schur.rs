//! Schur-function machinery and determinantal push-forward fast paths.
//!
//! Sequences `lambda` live in `Z^d` and are not assumed to be partitions:
//! the determinants straighten them (or vanish) on their own. Generalized
//! Segre classes are `s_lambda(E) = det(s_{lambda_i + (j-i)}(E))` and their
//! quadratic variant doubles the off-diagonal index step,
//! `s^(2)_lambda(E) = det(s_{lambda_i + 2(j-i)}(E))`; the latter appears in
//! the isotropic push-forward formulas.

use crate::bundle::SegreTable;
use crate::flag::{Family, FlagSpec};
use crate::laurent::{laurent_determinant, ring_determinant, LaurentPoly};
use crate::ring::{RingDescriptor, RingElement};
use num_bigint::BigInt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchurError {
    #[error("bialternant requires lambda_i >= i - d; entry {index} violates it")]
    BialternantPrecondition { index: usize },
    #[error("sequence length {got} does not match the required length {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("determinantal paths for families C/BD require a trivial line class")]
    NontrivialLine,
    #[error("operation requires a single-step flag")]
    NotSingleStep,
    #[error("operation does not apply to family {family}")]
    WrongFamily { family: &'static str },
    #[error("grassmann schur push requires 1 <= d <= rank - 1, got d = {d}")]
    DimOutOfRange { d: usize },
    #[error("input polynomial is not antisymmetric")]
    NotAntisymmetric,
    #[error("inexact division while forming the bialternant; this is a bug")]
    InexactDivision,
}

/// Complete homogeneous symmetric polynomial `h_k(t_1..t_d)`.
pub fn complete_homogeneous(ring: &Arc<RingDescriptor>, d: usize, k: u32) -> LaurentPoly {
    let mut out = LaurentPoly::zero(ring, d);
    let mut exponents = vec![0i32; d];
    fn walk(
        ring: &Arc<RingDescriptor>,
        out: &mut LaurentPoly,
        exponents: &mut Vec<i32>,
        var: usize,
        remaining: i32,
    ) {
        if var + 1 == exponents.len() {
            exponents[var] = remaining;
            *out = &*out + &LaurentPoly::monomial(RingElement::one(ring), exponents);
            exponents[var] = 0;
            return;
        }
        for k in 0..=remaining {
            exponents[var] = k;
            walk(ring, out, exponents, var + 1, remaining - k);
        }
        exponents[var] = 0;
    }
    walk(ring, &mut out, &mut exponents, 0, k as i32);
    out
}

/// Elementary symmetric polynomial `e_k(t_1..t_d)`; zero for `k > d`.
pub fn elementary_symmetric(ring: &Arc<RingDescriptor>, d: usize, k: u32) -> LaurentPoly {
    use itertools::Itertools;
    let k = k as usize;
    if k == 0 {
        return LaurentPoly::one(ring, d);
    }
    if k > d {
        return LaurentPoly::zero(ring, d);
    }
    let mut out = LaurentPoly::zero(ring, d);
    for subset in (0..d).combinations(k) {
        let mut exponents = vec![0i32; d];
        for &i in &subset {
            exponents[i] = 1;
        }
        out = &out + &LaurentPoly::monomial(RingElement::one(ring), &exponents);
    }
    out
}

/// Exact division of `p` by `(t_i - t_j)` via Horner evaluation in `t_i`.
/// Errors if the remainder `p|_{t_i = t_j}` is nonzero.
fn divide_by_var_difference(
    p: &LaurentPoly,
    i: usize,
    j: usize,
) -> Result<LaurentPoly, SchurError> {
    let ring = p.ring().clone();
    let arity = p.arity();
    if p.is_zero() {
        return Ok(LaurentPoly::zero(&ring, arity));
    }
    let pieces = p.by_var_exponent(i);
    let top = *pieces.keys().next_back().expect("nonzero");
    let bottom = *pieces.keys().next().expect("nonzero");
    assert!(bottom >= 0, "division expects a polynomial in t_i");
    let tj = LaurentPoly::variable(&ring, arity, j);
    let zero = LaurentPoly::zero(&ring, arity);
    let mut carry = zero.clone();
    let mut quotient = zero.clone();
    for k in (0..=top).rev() {
        let ck = pieces.get(&k).cloned().unwrap_or_else(|| zero.clone());
        let rk = &ck + &(&tj * &carry);
        if k > 0 {
            let mut shift = vec![0i32; arity];
            shift[i] = k - 1;
            quotient = &quotient + &rk.shift(&shift);
            carry = rk;
        } else if !rk.is_zero() {
            return Err(SchurError::InexactDivision);
        }
    }
    Ok(quotient)
}

/// Schur polynomial of an integer sequence, straight from the bialternant:
/// `det(t_j^{lambda_i + d - i}) / prod_{i<j} (t_i - t_j)`.
///
/// Requires `lambda_i >= i - d` so the numerator is a genuine polynomial
/// matrix and the division is exact.
pub fn schur_bialternant(
    ring: &Arc<RingDescriptor>,
    lambda: &[i64],
) -> Result<LaurentPoly, SchurError> {
    let d = lambda.len();
    assert!(d >= 1, "empty sequence");
    for (index, &entry) in lambda.iter().enumerate() {
        if entry < (index as i64 + 1) - d as i64 {
            return Err(SchurError::BialternantPrecondition { index: index + 1 });
        }
    }
    let matrix: Vec<Vec<LaurentPoly>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let exponent = lambda[i] + d as i64 - (i as i64 + 1);
                    LaurentPoly::variable_pow(ring, d, j, exponent as i32)
                })
                .collect()
        })
        .collect();
    let mut numerator = laurent_determinant(&matrix);
    for i in 0..d {
        for j in (i + 1)..d {
            numerator = divide_by_var_difference(&numerator, i, j)?;
        }
    }
    Ok(numerator)
}

/// Jacobi-Trudi determinant `det(h(lambda_i - i + j))` for an arbitrary
/// indexed family. The family must satisfy `h(0) = 1` and `h(k) = 0` for
/// `k < 0` to represent complete homogeneous functions.
pub fn jacobi_trudi(lambda: &[i64], h: impl Fn(i64) -> RingElement) -> RingElement {
    let d = lambda.len();
    assert!(d >= 1, "empty sequence");
    let matrix: Vec<Vec<RingElement>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| h(lambda[i] - (i as i64 + 1) + (j as i64 + 1)))
                .collect()
        })
        .collect();
    ring_determinant(&matrix)
}

/// Generalized Segre class `s_lambda(E) = det(s_{lambda_i + (j-i)}(E))`.
pub fn segre_schur(segre: &SegreTable, lambda: &[i64]) -> RingElement {
    let d = lambda.len() as i64;
    // dichotomy: an entry below the staircase forces a zero row
    if lambda
        .iter()
        .enumerate()
        .any(|(i, &entry)| entry < (i as i64 + 1) - d)
    {
        return RingElement::zero(segre.ring());
    }
    jacobi_trudi(lambda, |k| segre.get(k))
}

/// Quadratic Schur class `s^(2)_lambda(E) = det(s_{lambda_i + 2(j-i)}(E))`.
pub fn segre_schur_quadratic(segre: &SegreTable, lambda: &[i64]) -> RingElement {
    let d = lambda.len();
    // a row is identically zero when even its rightmost index is negative
    if lambda
        .iter()
        .enumerate()
        .any(|(i, &entry)| entry + 2 * (d as i64 - (i as i64 + 1)) < 0)
    {
        return RingElement::zero(segre.ring());
    }
    let matrix: Vec<Vec<RingElement>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| segre.get(lambda[i] + 2 * (j as i64 - i as i64)))
                .collect()
        })
        .collect();
    ring_determinant(&matrix)
}

fn check_length(expected: usize, got: usize) -> Result<(), SchurError> {
    if expected != got {
        return Err(SchurError::LengthMismatch { expected, got });
    }
    Ok(())
}

/// The shift sequence `nu` of the monomial push-forward formulas. It
/// relates to the extraction exponents of the variant used by
/// [`push_monomials`] through `nu_j = e_j - step (d - j)`.
pub fn monomial_shift(spec: &FlagSpec) -> Vec<i64> {
    let d = spec.d() as i64;
    let rank = spec.bundle().rank() as i64;
    let mut nu = vec![0i64; d as usize];
    let mut previous = 0i64;
    for &dk in spec.dims() {
        let dk = dk as i64;
        // block d - d_k < i <= d - d_{k-1}, 1-based
        for i in (d - dk + 1)..=(d - previous) {
            nu[(i - 1) as usize] = match spec.family() {
                Family::A => rank - dk,
                Family::C => rank - d - dk + i,
                Family::BD => (rank - 1) - d - dk + i,
            };
        }
        previous = dk;
    }
    nu
}

fn sub_sequence(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Determinantal push-forward of a sum of monomials
/// `sum alpha_lambda xi^lambda`, with `2^d` in front for family BD.
///
/// Writing the kernel as a Vandermonde-type determinant and extracting
/// column by column gives, for each monomial,
/// `det( s_{lambda_j + step (d - i) - e_j}(E) )` with `step = 1` for
/// family A and `step = 2` for C/BD. The columns carry the sequence
/// entries, so the identity holds termwise for arbitrary exponent
/// sequences; on a single-block flag with a symmetric integrand the sum
/// collapses to the row-indexed classes `s_{lambda - nu}(E)` (resp. their
/// quadratic analogues).
///
/// Families C and BD require `c_1(L) = 0`.
pub fn push_monomials(
    spec: &FlagSpec,
    terms: &[(RingElement, Vec<i64>)],
) -> Result<RingElement, SchurError> {
    let d = spec.d();
    let ring = spec.ring();
    if spec.family() != Family::A && !spec.has_trivial_line() {
        return Err(SchurError::NontrivialLine);
    }
    for (_, lambda) in terms {
        check_length(d, lambda.len())?;
    }
    let (step, variant) = match spec.family() {
        Family::A => (1i64, crate::flag::Variant::Standard),
        Family::C => (2, crate::flag::Variant::Standard),
        Family::BD => (2, crate::flag::Variant::OrthogonalTrivialLine),
    };
    let exponents = spec
        .exponents(variant)
        .expect("validated spec admits its own variant");
    let segre = spec.bundle().segre(ring);
    let mut total = RingElement::zero(ring);
    'term: for (coefficient, lambda) in terms {
        // a column whose topmost index is already negative is zero
        for j in 0..d {
            if lambda[j] + step * (d as i64 - 1) - (exponents[j] as i64) < 0 {
                continue 'term;
            }
        }
        let matrix: Vec<Vec<RingElement>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        segre.get(
                            lambda[j] + step * (d as i64 - (i as i64 + 1)) - exponents[j] as i64,
                        )
                    })
                    .collect()
            })
            .collect();
        total = &total + &(coefficient * &ring_determinant(&matrix));
    }
    if spec.family() == Family::BD {
        total = total.scale(&BigInt::from(2).pow(d as u32));
    }
    Ok(total)
}

/// Push-forward of a Schur class along a type-A Grassmann bundle:
/// `s_lambda(xi)` goes to `s_{lambda - (n-d)^d}(E)`.
pub fn push_schur_grassmann_a(
    bundle: &crate::bundle::VectorBundleData,
    ring: &Arc<RingDescriptor>,
    d: usize,
    lambda: &[i64],
) -> Result<RingElement, SchurError> {
    let n = bundle.rank() as usize;
    if d == 0 || d > n.saturating_sub(1) {
        return Err(SchurError::DimOutOfRange { d });
    }
    check_length(d, lambda.len())?;
    let nu = vec![(n - d) as i64; d];
    let segre = bundle.segre(ring);
    Ok(segre_schur(&segre, &sub_sequence(lambda, &nu)))
}

/// Push-forward of a Schur class along a single-step isotropic Grassmann
/// bundle with trivial line class:
///
/// * family C: `s^(2)_{lambda - mu}(E)` with `mu_i = 2n - d + 1 - i`;
/// * family BD: `2^d s^(2)_{lambda - mu}(E)` with `mu_i = rk(E) - d - i`.
pub fn push_schur_isotropic(spec: &FlagSpec, lambda: &[i64]) -> Result<RingElement, SchurError> {
    if spec.family() == Family::A {
        return Err(SchurError::WrongFamily { family: "A" });
    }
    if spec.dims().len() != 1 {
        return Err(SchurError::NotSingleStep);
    }
    if !spec.has_trivial_line() {
        return Err(SchurError::NontrivialLine);
    }
    let d = spec.d();
    check_length(d, lambda.len())?;
    let rank = spec.bundle().rank() as i64;
    let mu: Vec<i64> = (1..=d as i64)
        .map(|i| match spec.family() {
            Family::C => rank - d as i64 + 1 - i,
            Family::BD => rank - d as i64 - i,
            Family::A => unreachable!(),
        })
        .collect();
    let segre = spec.bundle().segre(spec.ring());
    let mut result = segre_schur_quadratic(&segre, &sub_sequence(lambda, &mu));
    if spec.family() == Family::BD {
        result = result.scale(&BigInt::from(2).pow(d as u32));
    }
    Ok(result)
}

/// Both sides of the antisymmetric extraction identity at the staircase
/// target `prod_j t_j^{e-j}`: the extraction of
/// `Lambda * prod_{i<j} (t_i + t_j)` and of `Lambda * prod_j t_j^{j-1}`.
/// Their equality for antisymmetric `Lambda` underlies the isotropic
/// Schur formulas.
pub fn antisym_extract_lemma_check(
    antisymmetric: &LaurentPoly,
    e: i64,
) -> Result<(RingElement, RingElement), SchurError> {
    if !antisymmetric.is_antisymmetric() {
        return Err(SchurError::NotAntisymmetric);
    }
    let ring = antisymmetric.ring().clone();
    let d = antisymmetric.arity();
    let target: Vec<i32> = (1..=d as i64).map(|j| (e - j) as i32).collect();

    let mut plus_product = LaurentPoly::one(&ring, d);
    for i in 0..d {
        for j in (i + 1)..d {
            let ti = LaurentPoly::variable(&ring, d, i);
            let tj = LaurentPoly::variable(&ring, d, j);
            plus_product = &plus_product * &(&ti + &tj);
        }
    }
    let staircase: Vec<i32> = (0..d as i32).collect();
    let staircase = LaurentPoly::monomial(RingElement::one(&ring), &staircase);

    let lhs = (antisymmetric * &plus_product).coeff(&target);
    let rhs = (antisymmetric * &staircase).coeff(&target);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::VectorBundleData;
    use crate::flag::{push, push_with_variant, PushOptions, Variant};
    use crate::laurent::staged_extract;

    fn ring_ab(d: u32) -> Arc<RingDescriptor> {
        RingDescriptor::new(vec![("a".into(), 1), ("b".into(), 2)], d).unwrap()
    }

    fn point_ring() -> Arc<RingDescriptor> {
        RingDescriptor::new(vec![], 0).unwrap()
    }

    fn bundle_ab(ring: &Arc<RingDescriptor>, rank: u32) -> VectorBundleData {
        let a = RingElement::generator(ring, 0);
        let b = RingElement::generator(ring, 1);
        VectorBundleData::new("E", rank, vec![a, b]).unwrap()
    }

    #[test]
    fn bialternant_basics() {
        let r = ring_ab(3);
        let t1 = LaurentPoly::variable(&r, 2, 0);
        let t2 = LaurentPoly::variable(&r, 2, 1);
        assert_eq!(schur_bialternant(&r, &[1, 0]).unwrap(), &t1 + &t2);
        assert_eq!(
            schur_bialternant(&r, &[0, 0, 0]).unwrap(),
            LaurentPoly::one(&r, 3)
        );
        let expected = &(&t1.pow(2) * &t2) + &(&t1 * &t2.pow(2));
        assert_eq!(schur_bialternant(&r, &[2, 1]).unwrap(), expected);
        assert_eq!(
            schur_bialternant(&r, &[0, -2]).unwrap_err(),
            SchurError::BialternantPrecondition { index: 2 }
        );
    }

    #[test]
    fn bialternant_matches_jacobi_trudi_in_t_variables() {
        let r = ring_ab(2);
        for lambda in [
            vec![1i64, 0],
            vec![2, 1],
            vec![3, 0],
            vec![2, 2],
            vec![4, 2],
        ] {
            let d = lambda.len();
            let direct = schur_bialternant(&r, &lambda).unwrap();
            // build the Jacobi-Trudi determinant over Laurent h_k
            let matrix: Vec<Vec<LaurentPoly>> = (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| {
                            let index = lambda[i] - (i as i64 + 1) + (j as i64 + 1);
                            if index < 0 {
                                LaurentPoly::zero(&r, d)
                            } else {
                                complete_homogeneous(&r, d, index as u32)
                            }
                        })
                        .collect()
                })
                .collect();
            let via_jt = laurent_determinant(&matrix);
            assert_eq!(direct, via_jt, "lambda {lambda:?}");
        }
    }

    #[test]
    fn jacobi_trudi_basics() {
        let r = ring_ab(4);
        let e = bundle_ab(&r, 2);
        let s = e.segre(&r);
        // 1x1 determinant is the class itself
        assert_eq!(jacobi_trudi(&[2], |k| s.get(k)), s.get(2));
        // lambda = (1,1): det [[s1, s2], [s0, s1]] = s1^2 - s2
        let expected = &(&s.get(1) * &s.get(1)) - &s.get(2);
        assert_eq!(jacobi_trudi(&[1, 1], |k| s.get(k)), expected);
        // a sufficiently negative entry makes a zero row
        assert!(jacobi_trudi(&[-3, 0], |k| s.get(k)).is_zero());
    }

    #[test]
    fn segre_schur_basics() {
        let r = ring_ab(4);
        let e = bundle_ab(&r, 3);
        let s = e.segre(&r);
        assert_eq!(segre_schur(&s, &[0, 0]), RingElement::one(&r));
        assert_eq!(segre_schur(&s, &[1]), s.get(1));
        assert!(segre_schur(&s, &[0, -2]).is_zero());
    }

    #[test]
    fn quadratic_schur_basics() {
        let r = ring_ab(4);
        let e = bundle_ab(&r, 4);
        let s = e.segre(&r);
        assert_eq!(segre_schur_quadratic(&s, &[0, 0]), RingElement::one(&r));
        assert_eq!(segre_schur_quadratic(&s, &[1]), s.get(1));
        // d=2, lambda=(2,0): det [[s2, s4], [s_{-2}, s0]] = s2
        assert_eq!(segre_schur_quadratic(&s, &[2, 0]), s.get(2));
    }

    #[test]
    fn monomial_shift_sequences() {
        let r = ring_ab(3);
        // A Grassmann: nu = (n-d)^d
        let spec = FlagSpec::new(r.clone(), Family::A, bundle_ab(&r, 5), None, vec![2]).unwrap();
        assert_eq!(monomial_shift(&spec), vec![3, 3]);
        // A complete flag rank 3: dims (1,2), nu = (1, 2)
        let spec = FlagSpec::new(r.clone(), Family::A, bundle_ab(&r, 3), None, vec![1, 2]).unwrap();
        assert_eq!(monomial_shift(&spec), vec![1, 2]);
        // C rank 2, dims (1): nu = (1)
        let spec = FlagSpec::new(r.clone(), Family::C, bundle_ab(&r, 2), None, vec![1]).unwrap();
        assert_eq!(monomial_shift(&spec), vec![1]);
        // BD rank r, dims (1): nu = (r - 2)
        let spec = FlagSpec::new(r.clone(), Family::BD, bundle_ab(&r, 6), None, vec![1]).unwrap();
        assert_eq!(monomial_shift(&spec), vec![4]);
    }

    #[test]
    fn push_monomials_unit_case() {
        let r = ring_ab(3);
        let spec = FlagSpec::new(r.clone(), Family::A, bundle_ab(&r, 4), None, vec![2]).unwrap();
        let nu = monomial_shift(&spec);
        let coefficient = RingElement::generator(&r, 0);
        let result = push_monomials(&spec, &[(coefficient.clone(), nu)]).unwrap();
        assert_eq!(result, coefficient);
    }

    #[test]
    fn push_monomials_matches_extraction_termwise() {
        // the column-indexed determinant agrees with the extraction engine
        // for every single monomial, symmetric or not
        let r = ring_ab(3);
        for (family, rank) in [(Family::A, 4u32), (Family::C, 4), (Family::BD, 5)] {
            let e = bundle_ab(&r, rank);
            for dims in [vec![2u32], vec![1, 2]] {
                let spec = FlagSpec::new(r.clone(), family, e.clone(), None, dims).unwrap();
                for (c, lam) in [
                    (RingElement::constant(&r, 3), vec![4i64, 1]),
                    (RingElement::generator(&r, 0), vec![2, 2]),
                    (RingElement::one(&r), vec![5, 0]),
                    (RingElement::one(&r), vec![0, 5]),
                    (RingElement::constant(&r, -2), vec![3, 3]),
                ] {
                    let determinantal = push_monomials(&spec, &[(c.clone(), lam.clone())]).unwrap();
                    let exponents: Vec<i32> = lam.iter().map(|&x| x as i32).collect();
                    let f = LaurentPoly::monomial(c, &exponents);
                    let extracted = push(&spec, &f, &PushOptions::default()).unwrap();
                    assert_eq!(
                        determinantal, extracted,
                        "family {:?} lambda {lam:?}",
                        family
                    );
                }
            }
        }
    }

    #[test]
    fn push_monomials_collapses_to_row_classes_on_symmetric_input() {
        // single-block flag, integrand symmetrized: the column-indexed sum
        // equals the row-indexed sum of s_{lambda - nu} classes
        let r = ring_ab(3);
        let e = bundle_ab(&r, 5);
        let spec = FlagSpec::new(r.clone(), Family::A, e.clone(), None, vec![2]).unwrap();
        let nu = monomial_shift(&spec);
        let segre = e.segre(&r);
        for lam in [vec![4i64, 1], vec![5, 0], vec![3, 3]] {
            let mut orbit = vec![lam.clone()];
            let swapped = vec![lam[1], lam[0]];
            if swapped != lam {
                orbit.push(swapped);
            }
            let terms: Vec<(RingElement, Vec<i64>)> = orbit
                .iter()
                .map(|l| (RingElement::one(&r), l.clone()))
                .collect();
            let column_sum = push_monomials(&spec, &terms).unwrap();
            let mut row_sum = RingElement::zero(&r);
            for l in &orbit {
                row_sum = &row_sum + &segre_schur(&segre, &sub_sequence(l, &nu));
            }
            assert_eq!(column_sum, row_sum, "lambda {lam:?}");
        }
    }

    #[test]
    fn push_monomials_rejects_nontrivial_line() {
        let r = ring_ab(3);
        let line = crate::bundle::LineBundleClass::new(RingElement::generator(&r, 0)).unwrap();
        let spec =
            FlagSpec::new(r.clone(), Family::C, bundle_ab(&r, 4), Some(line), vec![1]).unwrap();
        assert_eq!(
            push_monomials(&spec, &[(RingElement::one(&r), vec![3])]).unwrap_err(),
            SchurError::NontrivialLine
        );
    }

    #[test]
    fn grassmann_schur_push_cases() {
        let r = ring_ab(4);
        let e = bundle_ab(&r, 5);
        let s = e.segre(&r);
        let n = 5usize;
        let d = 2usize;
        // lambda = (n-d)^d integrates to 1
        let nu = vec![(n - d) as i64; d];
        assert_eq!(
            push_schur_grassmann_a(&e, &r, d, &nu).unwrap(),
            RingElement::one(&r)
        );
        // below the staircase: zero
        assert!(push_schur_grassmann_a(&e, &r, d, &[0, -2])
            .unwrap()
            .is_zero());
        // lambda = (n-d+1, n-d, ...) integrates to s_1
        let mut lambda = nu.clone();
        lambda[0] += 1;
        assert_eq!(
            push_schur_grassmann_a(&e, &r, d, &lambda).unwrap(),
            s.get(1)
        );
        // d out of range
        assert_eq!(
            push_schur_grassmann_a(&e, &r, 5, &[0i64; 5]).unwrap_err(),
            SchurError::DimOutOfRange { d: 5 }
        );
    }

    #[test]
    fn grassmann_schur_push_matches_extraction() {
        let r = ring_ab(4);
        let e = bundle_ab(&r, 4);
        let d = 2usize;
        let spec = FlagSpec::new(r.clone(), Family::A, e.clone(), None, vec![d as u32]).unwrap();
        for lambda in [vec![2i64, 0], vec![2, 1], vec![3, 2], vec![1, 1]] {
            let f = schur_bialternant(&r, &lambda).unwrap();
            let via_extraction = push(&spec, &f, &PushOptions::default()).unwrap();
            let via_determinant = push_schur_grassmann_a(&e, &r, d, &lambda).unwrap();
            assert_eq!(via_extraction, via_determinant, "lambda {lambda:?}");
        }
    }

    #[test]
    fn isotropic_schur_push_unit_and_degree_cases() {
        let r = point_ring();
        // LG(2,4): s_1^3 = s_(3) + 2 s_(2,1) pushes to 2
        let e = VectorBundleData::trivial("E", 4);
        let spec = FlagSpec::new(r.clone(), Family::C, e, None, vec![2]).unwrap();
        let s3 = push_schur_isotropic(&spec, &[3, 0]).unwrap();
        let s21 = push_schur_isotropic(&spec, &[2, 1]).unwrap();
        let total = &s3 + &s21.scale(&BigInt::from(2));
        assert_eq!(total, RingElement::constant(&r, 2));

        // lambda = mu integrates to 1 (and 2^d for BD)
        let rb = ring_ab(4);
        let spec = FlagSpec::new(rb.clone(), Family::C, bundle_ab(&rb, 6), None, vec![2]).unwrap();
        let mu: Vec<i64> = vec![4, 3]; // 2n - d + 1 - i with n = 3, d = 2
        assert_eq!(
            push_schur_isotropic(&spec, &mu).unwrap(),
            RingElement::one(&rb)
        );
        let spec = FlagSpec::new(rb.clone(), Family::BD, bundle_ab(&rb, 6), None, vec![2]).unwrap();
        let mu: Vec<i64> = vec![3, 2]; // rk - d - i
        assert_eq!(
            push_schur_isotropic(&spec, &mu).unwrap(),
            RingElement::constant(&rb, 4)
        );
    }

    #[test]
    fn isotropic_schur_push_matches_extraction() {
        let r = ring_ab(3);
        for (family, rank) in [(Family::C, 6u32), (Family::BD, 6), (Family::BD, 7)] {
            let e = bundle_ab(&r, rank);
            let spec = FlagSpec::new(r.clone(), family, e, None, vec![2]).unwrap();
            for lambda in [vec![5i64, 4], vec![6, 3], vec![4, 4], vec![7, 2]] {
                let f = schur_bialternant(&r, &lambda).unwrap();
                let via_extraction = push(&spec, &f, &PushOptions::default()).unwrap();
                let via_determinant = push_schur_isotropic(&spec, &lambda).unwrap();
                assert_eq!(
                    via_extraction, via_determinant,
                    "family {:?} rank {rank} lambda {lambda:?}",
                    family
                );
            }
        }
    }

    #[test]
    fn self_dual_odd_entries_vanish() {
        let r = ring_ab(4);
        let b = RingElement::generator(&r, 1);
        // self-dual: odd chern classes vanish
        let e = VectorBundleData::new(
            "E",
            4,
            vec![
                RingElement::zero(&r),
                b.clone(),
                RingElement::zero(&r),
                b.pow(2),
            ],
        )
        .unwrap();
        let spec = FlagSpec::new(r.clone(), Family::C, e, None, vec![2]).unwrap();
        // mu = (4 - 2 + 1 - i) = (3, 2); pick lambda with lambda_1 - mu_1 odd
        let lambda = vec![4i64, 2];
        assert!(push_schur_isotropic(&spec, &lambda).unwrap().is_zero());
    }

    #[test]
    fn lemma_check_base_cases() {
        let r = ring_ab(3);
        // d = 1: both sides are the same extraction by construction
        let t = LaurentPoly::variable(&r, 1, 0);
        let (lhs, rhs) = antisym_extract_lemma_check(&t.pow(3), 4).unwrap();
        assert_eq!(lhs, rhs);

        // d = 2, Lambda = t1 - t2, e = 3
        let t1 = LaurentPoly::variable(&r, 2, 0);
        let t2 = LaurentPoly::variable(&r, 2, 1);
        let lambda = &t1 - &t2;
        let (lhs, rhs) = antisym_extract_lemma_check(&lambda, 3).unwrap();
        assert_eq!(lhs, rhs);
        assert!(lhs.is_zero());

        // a nonzero instance: Lambda = t1^3 t2 - t1 t2^3, e = 4
        let lambda = &(&t1.pow(3) * &t2) - &(&t1 * &t2.pow(3));
        let (lhs, rhs) = antisym_extract_lemma_check(&lambda, 4).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, RingElement::one(&r));

        assert_eq!(
            antisym_extract_lemma_check(&t1, 2).unwrap_err(),
            SchurError::NotAntisymmetric
        );
    }

    #[test]
    fn lemma_check_agrees_with_bd_variants() {
        // the identity bridges the two B/D kernel forms; spot-check it
        // together with a staged extraction
        let r = ring_ab(3);
        let t1 = LaurentPoly::variable(&r, 2, 0);
        let t2 = LaurentPoly::variable(&r, 2, 1);
        let a = RingElement::generator(&r, 0);
        let lambda = (&t1 - &t2).mul_coefficient(&a);
        let (lhs, rhs) = antisym_extract_lemma_check(&lambda, 5).unwrap();
        assert_eq!(lhs, rhs);
        // and the staged engine agrees with the direct product route
        let mut plus = LaurentPoly::one(&r, 2);
        plus = &plus * &(&t1 + &t2);
        let target = [4u32, 3u32];
        assert_eq!(
            staged_extract(&[&lambda, &plus], &target),
            (&lambda * &plus).coeff(&[4, 3])
        );
    }

    #[test]
    fn variant_consistency_via_schur_path() {
        // determinantal BD path agrees with both kernel forms
        let r = ring_ab(3);
        let e = bundle_ab(&r, 6);
        let spec = FlagSpec::new(r.clone(), Family::BD, e, None, vec![2]).unwrap();
        let lambda = vec![5i64, 3];
        let f = schur_bialternant(&r, &lambda).unwrap();
        let standard = push_with_variant(&spec, &f, Variant::Standard).unwrap();
        let reduced = push_with_variant(&spec, &f, Variant::OrthogonalTrivialLine).unwrap();
        let determinantal = push_schur_isotropic(&spec, &lambda).unwrap();
        assert_eq!(standard, reduced);
        assert_eq!(standard, determinantal);
    }

    #[test]
    fn symmetric_function_helpers() {
        let r = ring_ab(2);
        let t1 = LaurentPoly::variable(&r, 2, 0);
        let t2 = LaurentPoly::variable(&r, 2, 1);
        assert_eq!(complete_homogeneous(&r, 2, 0), LaurentPoly::one(&r, 2));
        assert_eq!(complete_homogeneous(&r, 2, 1), &t1 + &t2);
        let h2 = &(&t1.pow(2) + &(&t1 * &t2)) + &t2.pow(2);
        assert_eq!(complete_homogeneous(&r, 2, 2), h2);
        assert_eq!(elementary_symmetric(&r, 2, 1), &t1 + &t2);
        assert_eq!(elementary_symmetric(&r, 2, 2), &t1 * &t2);
        assert!(elementary_symmetric(&r, 2, 3).is_zero());
    }
}
