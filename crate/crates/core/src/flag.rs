//! The Gysin engine: flag-bundle data, universal kernel polynomials,
//! exponent sequences, and push-forward via coefficient extraction.
//!
//! For a flag bundle with `d = d_m` steps over a bundle `E`, the
//! push-forward of `f(xi_1, .., xi_d)` is the coefficient of
//! `t_1^{e_1} ... t_d^{e_d}` in `f(t) * kernel * prod_i s_{1/t_i}(E)`,
//! where kernel and exponents depend on the family:
//!
//! * type A: `prod (t_i - t_j)`, `e_j = n - i`;
//! * type C: `prod (t_i - t_j)(t_i + t_j + c_1(L))`, `e_j = 2n - i`;
//! * types B/D: additionally `prod (2 t_i + c_1(L))`, `e_j = rk(E) - i`;
//! * types B/D with trivial L: `2^d prod (t_i^2 - t_j^2)`,
//!   `e_j = rk(E) - 1 - i`.
//!
//! In the even-rank maximal isotropic case the B/D formula counts both
//! connected components; halving is an explicit option with an exactness
//! check.

use crate::bundle::{segre_laurent, LineBundleClass, VectorBundleData};
use crate::laurent::{staged_extract, LaurentPoly};
use crate::ring::{RingDescriptor, RingElement};
use num_bigint::BigInt;
use num_traits::One;
use std::ops::RangeInclusive;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Ordinary flag bundles.
    A,
    /// Isotropic flag bundles of a symplectic bundle.
    C,
    /// Isotropic flag bundles of an orthogonal bundle (types B and D).
    BD,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::A => "A",
            Family::C => "C",
            Family::BD => "BD",
        }
    }
}

/// Which form of the extraction formula to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Standard,
    /// The reduced family-BD form for `c_1(L) = 0`: squared-difference
    /// kernel, exponents shifted down by one, scalar factor `2^d`.
    OrthogonalTrivialLine,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlagError {
    #[error("dimension sequence is empty")]
    EmptyDims,
    #[error("dimension sequence must be strictly increasing and positive")]
    DimsNotIncreasing,
    #[error("family {family}: largest flag dimension {got} exceeds bound {max}")]
    DimTooLarge {
        family: &'static str,
        max: u32,
        got: u32,
    },
    #[error("family C requires even rank, got {rank}")]
    OddSymplecticRank { rank: u32 },
    #[error("family A does not admit a twisting line bundle")]
    LineBundleWithTypeA,
    #[error("bundle classes do not live in the declared base ring")]
    RingMismatch,
    #[error("variant requires family BD with trivial line class")]
    InvalidVariant,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PushError {
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error("integrand has arity {got}, flag data requires {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("integrand must be a polynomial (no negative exponents)")]
    NotPolynomial,
    #[error("halving applies only to family BD with even rank and maximal isotropic dimension")]
    HalveNotApplicable,
    #[error("the all-roots form applies to family A only")]
    FullRootsFamilyA,
    #[error("halving failed: a coefficient is odd, the single-component class is not integral")]
    NonIntegralHalving,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PushOptions {
    /// Divide the B/D result by two to pick one of the two connected
    /// components in the even-rank maximal case.
    pub halve_maximal_orthogonal: bool,
}

/// A flag bundle: family, base bundle, optional twisting line class, and
/// the strictly increasing sequence of isotropic/flag dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagSpec {
    ring: Arc<RingDescriptor>,
    family: Family,
    bundle: VectorBundleData,
    line: Option<LineBundleClass>,
    dims: Vec<u32>,
}

impl FlagSpec {
    pub fn new(
        ring: Arc<RingDescriptor>,
        family: Family,
        bundle: VectorBundleData,
        line: Option<LineBundleClass>,
        dims: Vec<u32>,
    ) -> Result<FlagSpec, FlagError> {
        if dims.is_empty() {
            return Err(FlagError::EmptyDims);
        }
        if dims[0] == 0 || dims.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FlagError::DimsNotIncreasing);
        }
        let rank = bundle.rank();
        let d_max = *dims.last().expect("nonempty");
        match family {
            Family::A => {
                if line.is_some() {
                    return Err(FlagError::LineBundleWithTypeA);
                }
                if d_max > rank.saturating_sub(1) {
                    return Err(FlagError::DimTooLarge {
                        family: "A",
                        max: rank.saturating_sub(1),
                        got: d_max,
                    });
                }
            }
            Family::C => {
                if !rank.is_multiple_of(2) {
                    return Err(FlagError::OddSymplecticRank { rank });
                }
                if d_max > rank / 2 {
                    return Err(FlagError::DimTooLarge {
                        family: "C",
                        max: rank / 2,
                        got: d_max,
                    });
                }
            }
            Family::BD => {
                if d_max > rank / 2 {
                    return Err(FlagError::DimTooLarge {
                        family: "BD",
                        max: rank / 2,
                        got: d_max,
                    });
                }
            }
        }
        for i in 1..=rank as i64 {
            if bundle.chern_class(&ring, i).ring() != &ring {
                return Err(FlagError::RingMismatch);
            }
        }
        if let Some(line) = &line {
            if line.c1().ring() != &ring {
                return Err(FlagError::RingMismatch);
            }
        }
        Ok(FlagSpec {
            ring,
            family,
            bundle,
            line,
            dims,
        })
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        &self.ring
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn bundle(&self) -> &VectorBundleData {
        &self.bundle
    }

    pub fn line(&self) -> Option<&LineBundleClass> {
        self.line.as_ref()
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    /// Number of extraction variables, `d = d_m`.
    pub fn d(&self) -> usize {
        *self.dims.last().expect("nonempty") as usize
    }

    pub fn line_class(&self) -> RingElement {
        match &self.line {
            Some(line) => line.c1().clone(),
            None => RingElement::zero(&self.ring),
        }
    }

    pub fn has_trivial_line(&self) -> bool {
        self.line_class().is_zero()
    }

    /// The variant the push path uses: the reduced trivial-line form when
    /// it applies (family BD, `c_1(L) = 0`), the standard form otherwise.
    pub fn auto_variant(&self) -> Variant {
        if self.family == Family::BD && self.has_trivial_line() {
            Variant::OrthogonalTrivialLine
        } else {
            Variant::Standard
        }
    }

    fn check_variant(&self, variant: Variant) -> Result<(), FlagError> {
        if variant == Variant::OrthogonalTrivialLine
            && (self.family != Family::BD || !self.has_trivial_line())
        {
            return Err(FlagError::InvalidVariant);
        }
        Ok(())
    }

    /// Extraction exponents `e_j`, indexed `j = 1..d` (0-based in the
    /// returned vector): for `j = d - d_k + i` with `i = 1..r_k`,
    /// `e_j = base - i` with `base` as in the module docs.
    pub fn exponents(&self, variant: Variant) -> Result<Vec<u32>, FlagError> {
        self.check_variant(variant)?;
        let base = match (self.family, variant) {
            (Family::A, _) => self.bundle.rank(),
            (Family::C, _) => self.bundle.rank(),
            (Family::BD, Variant::Standard) => self.bundle.rank(),
            (Family::BD, Variant::OrthogonalTrivialLine) => self.bundle.rank() - 1,
        };
        let d = self.d();
        let mut exponents = vec![0u32; d];
        let mut previous = 0u32;
        for &dk in &self.dims {
            let rk = dk - previous;
            for i in 1..=rk {
                let j = d as u32 - dk + i;
                exponents[(j - 1) as usize] = base - i;
            }
            previous = dk;
        }
        Ok(exponents)
    }

    /// The universal kernel polynomial and its scalar prefactor.
    pub fn kernel(&self, variant: Variant) -> Result<Kernel, FlagError> {
        self.check_variant(variant)?;
        let d = self.d();
        let ring = &self.ring;
        let ell = LaurentPoly::constant(self.line_class(), d);
        let mut poly = LaurentPoly::one(ring, d);
        match (self.family, variant) {
            (Family::A, _) => {
                for i in 0..d {
                    for j in (i + 1)..d {
                        let ti = LaurentPoly::variable(ring, d, i);
                        let tj = LaurentPoly::variable(ring, d, j);
                        poly = &poly * &(&ti - &tj);
                    }
                }
            }
            (Family::C, _) | (Family::BD, Variant::Standard) => {
                for i in 0..d {
                    for j in (i + 1)..d {
                        let ti = LaurentPoly::variable(ring, d, i);
                        let tj = LaurentPoly::variable(ring, d, j);
                        poly = &poly * &(&ti - &tj);
                        poly = &poly * &(&(&ti + &tj) + &ell);
                    }
                }
                if self.family == Family::BD {
                    for i in 0..d {
                        let ti = LaurentPoly::variable(ring, d, i);
                        poly = &poly * &(&ti.scale(&BigInt::from(2)) + &ell);
                    }
                }
            }
            (Family::BD, Variant::OrthogonalTrivialLine) => {
                for i in 0..d {
                    for j in (i + 1)..d {
                        let ti2 = LaurentPoly::variable_pow(ring, d, i, 2);
                        let tj2 = LaurentPoly::variable_pow(ring, d, j, 2);
                        poly = &poly * &(&ti2 - &tj2);
                    }
                }
            }
        }
        let scalar = match (self.family, variant) {
            (Family::BD, Variant::OrthogonalTrivialLine) => BigInt::from(2).pow(d as u32),
            _ => BigInt::one(),
        };
        Ok(Kernel { poly, scalar })
    }

    /// Relative dimension of the flag bundle over the base: the sum of the
    /// extraction exponents minus the kernel degree (and independent of
    /// the variant).
    pub fn fiber_dimension(&self, variant: Variant) -> Result<u32, FlagError> {
        let exponents = self.exponents(variant)?;
        let sum: i64 = exponents.iter().map(|&e| e as i64).sum();
        let d = self.d() as i64;
        let kernel_degree = match (self.family, variant) {
            (Family::A, _) => d * (d - 1) / 2,
            (Family::C, _) => d * (d - 1),
            (Family::BD, Variant::Standard) => d * (d - 1) + d,
            (Family::BD, Variant::OrthogonalTrivialLine) => d * (d - 1),
        };
        Ok((sum - kernel_degree) as u32)
    }

    /// 1-based variable ranges within which the integrand is expected to
    /// be symmetric: `{d - d_k + 1, ..., d - d_{k-1}}` for each step `k`.
    pub fn blocks(&self) -> Vec<RangeInclusive<usize>> {
        let d = self.d();
        let mut blocks = Vec::with_capacity(self.dims.len());
        let mut previous = 0usize;
        for &dk in &self.dims {
            let lo = d - dk as usize + 1;
            let hi = d - previous;
            blocks.push(lo..=hi);
            previous = dk as usize;
        }
        blocks
    }
}

/// Kernel polynomial together with the scalar prefactor of its variant.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub poly: LaurentPoly,
    pub scalar: BigInt,
}

/// Push-forward along a projective bundle of a rank-`n` bundle:
/// the coefficient of `t^{n-1}` in `f(t) s_{1/t}(E)`.
pub fn push_projective(
    f: &LaurentPoly,
    bundle: &VectorBundleData,
    ring: &Arc<RingDescriptor>,
) -> RingElement {
    assert_eq!(
        f.arity(),
        1,
        "projective push takes a one-variable integrand"
    );
    assert!(f.is_polynomial(), "integrand must be a polynomial");
    let series = segre_laurent(bundle, ring, 0, 1);
    (f * &series).coeff(&[bundle.rank() as i32 - 1])
}

/// Push-forward along a quadric bundle of isotropic lines: the coefficient
/// of `t^{r-1}` in `f(t) (2t + c_1(L)) s_{1/t}(E)`.
pub fn push_quadric(
    f: &LaurentPoly,
    bundle: &VectorBundleData,
    line: &LineBundleClass,
    ring: &Arc<RingDescriptor>,
) -> RingElement {
    assert_eq!(f.arity(), 1, "quadric push takes a one-variable integrand");
    assert!(f.is_polynomial(), "integrand must be a polynomial");
    let t = LaurentPoly::variable(ring, 1, 0);
    let hyperplane = &t.scale(&BigInt::from(2)) + &LaurentPoly::constant(line.c1().clone(), 1);
    let series = segre_laurent(bundle, ring, 0, 1);
    (&(f * &hyperplane) * &series).coeff(&[bundle.rank() as i32 - 1])
}

/// Gysin push-forward of `f(xi_1, .., xi_d)` to the base.
///
/// Selects the reduced trivial-line form automatically for family BD with
/// `c_1(L) = 0`; both routes agree and are cross-checked in the test
/// suites.
pub fn push(
    spec: &FlagSpec,
    f: &LaurentPoly,
    options: &PushOptions,
) -> Result<RingElement, PushError> {
    let result = push_with_variant(spec, f, spec.auto_variant())?;
    if options.halve_maximal_orthogonal {
        let rank = spec.bundle().rank();
        let applicable =
            spec.family() == Family::BD && rank.is_multiple_of(2) && spec.d() as u32 == rank / 2;
        if !applicable {
            return Err(PushError::HalveNotApplicable);
        }
        return result.try_halve().ok_or(PushError::NonIntegralHalving);
    }
    Ok(result)
}

/// Push-forward through an explicitly chosen formula variant.
pub fn push_with_variant(
    spec: &FlagSpec,
    f: &LaurentPoly,
    variant: Variant,
) -> Result<RingElement, PushError> {
    let d = spec.d();
    if f.arity() != d {
        return Err(PushError::ArityMismatch {
            expected: d,
            got: f.arity(),
        });
    }
    if !f.is_polynomial() {
        return Err(PushError::NotPolynomial);
    }
    let kernel = spec.kernel(variant)?;
    let exponents = spec.exponents(variant)?;
    let segre: Vec<LaurentPoly> = (0..d)
        .map(|i| segre_laurent(spec.bundle(), spec.ring(), i, d))
        .collect();
    let mut factors: Vec<&LaurentPoly> = vec![f, &kernel.poly];
    factors.extend(segre.iter());
    let extracted = staged_extract(&factors, &exponents);
    Ok(extracted.scale(&kernel.scalar))
}

/// Type-A push-forward using all `n` Chern roots: extraction over `n`
/// variables with the full Vandermonde kernel, exponents obtained from the
/// flag data extended by the quotient block `d_{m+1} = n`.
pub fn push_full_roots_a(spec: &FlagSpec, f: &LaurentPoly) -> Result<RingElement, PushError> {
    if spec.family() != Family::A {
        return Err(PushError::FullRootsFamilyA);
    }
    let n = spec.bundle().rank() as usize;
    if f.arity() != n {
        return Err(PushError::ArityMismatch {
            expected: n,
            got: f.arity(),
        });
    }
    if !f.is_polynomial() {
        return Err(PushError::NotPolynomial);
    }
    let ring = spec.ring();
    let rank = spec.bundle().rank();

    // blocks of the extended sequence d_1 < .. < d_m < d_{m+1} = n
    let mut dims: Vec<u32> = spec.dims().to_vec();
    if *dims.last().expect("nonempty") < rank {
        dims.push(rank);
    }
    let mut exponents = vec![0u32; n];
    let mut previous = 0u32;
    for &dk in &dims {
        let rk = dk - previous;
        for i in 1..=rk {
            let j = rank - dk + i;
            exponents[(j - 1) as usize] = rank - i;
        }
        previous = dk;
    }

    let mut kernel = LaurentPoly::one(ring, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let ti = LaurentPoly::variable(ring, n, i);
            let tj = LaurentPoly::variable(ring, n, j);
            kernel = &kernel * &(&ti - &tj);
        }
    }
    let segre: Vec<LaurentPoly> = (0..n)
        .map(|i| segre_laurent(spec.bundle(), ring, i, n))
        .collect();
    let mut factors: Vec<&LaurentPoly> = vec![f, &kernel];
    factors.extend(segre.iter());
    Ok(staged_extract(&factors, &exponents))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::segre_laurent;

    fn point_ring() -> Arc<RingDescriptor> {
        RingDescriptor::new(vec![], 0).unwrap()
    }

    fn ring_ab(d: u32) -> Arc<RingDescriptor> {
        RingDescriptor::new(vec![("a".into(), 1), ("b".into(), 2)], d).unwrap()
    }

    fn bundle_ab(ring: &Arc<RingDescriptor>, rank: u32) -> VectorBundleData {
        let a = RingElement::generator(ring, 0);
        let b = RingElement::generator(ring, 1);
        VectorBundleData::new("E", rank, vec![a, b]).unwrap()
    }

    fn xi_power_product(ring: &Arc<RingDescriptor>, exponents: &[i32]) -> LaurentPoly {
        LaurentPoly::monomial(RingElement::one(ring), exponents)
    }

    #[test]
    fn spec_validation() {
        let r = ring_ab(3);
        let e = bundle_ab(&r, 4);
        assert!(FlagSpec::new(r.clone(), Family::A, e.clone(), None, vec![2]).is_ok());
        assert_eq!(
            FlagSpec::new(r.clone(), Family::A, e.clone(), None, vec![4]).unwrap_err(),
            FlagError::DimTooLarge {
                family: "A",
                max: 3,
                got: 4
            }
        );
        assert_eq!(
            FlagSpec::new(r.clone(), Family::A, e.clone(), None, vec![]).unwrap_err(),
            FlagError::EmptyDims
        );
        assert_eq!(
            FlagSpec::new(r.clone(), Family::A, e.clone(), None, vec![2, 2]).unwrap_err(),
            FlagError::DimsNotIncreasing
        );
        let line = LineBundleClass::new(RingElement::generator(&r, 0)).unwrap();
        assert_eq!(
            FlagSpec::new(r.clone(), Family::A, e.clone(), Some(line.clone()), vec![1])
                .unwrap_err(),
            FlagError::LineBundleWithTypeA
        );
        let odd = bundle_ab(&r, 5);
        assert_eq!(
            FlagSpec::new(r.clone(), Family::C, odd, None, vec![1]).unwrap_err(),
            FlagError::OddSymplecticRank { rank: 5 }
        );
        assert!(
            FlagSpec::new(r.clone(), Family::C, e.clone(), Some(line.clone()), vec![2]).is_ok()
        );
        assert_eq!(
            FlagSpec::new(r.clone(), Family::BD, e, Some(line), vec![3]).unwrap_err(),
            FlagError::DimTooLarge {
                family: "BD",
                max: 2,
                got: 3
            }
        );
    }

    #[test]
    fn exponent_sequences() {
        let r = ring_ab(3);
        let spec = FlagSpec::new(r.clone(), Family::A, bundle_ab(&r, 4), None, vec![2]).unwrap();
        assert_eq!(spec.exponents(Variant::Standard).unwrap(), vec![3, 2]);

        let spec = FlagSpec::new(r.clone(), Family::C, bundle_ab(&r, 6), None, vec![2]).unwrap();
        assert_eq!(spec.exponents(Variant::Standard).unwrap(), vec![5, 4]);

        // two blocks: dims (1, 3) on rank 4, d = 3
        let spec = FlagSpec::new(r.clone(), Family::A, bundle_ab(&r, 4), None, vec![1, 3]).unwrap();
        // k=1 (d_1=1): j=3, e=3; k=2 (d_2=3): j=1,2 with e=3,2
        assert_eq!(spec.exponents(Variant::Standard).unwrap(), vec![3, 2, 3]);

        let spec = FlagSpec::new(r.clone(), Family::BD, bundle_ab(&r, 6), None, vec![1]).unwrap();
        assert_eq!(
            spec.exponents(Variant::OrthogonalTrivialLine).unwrap(),
            vec![4]
        );
        assert_eq!(spec.exponents(Variant::Standard).unwrap(), vec![5]);
    }

    #[test]
    fn variant_pairing_is_validated() {
        let r = ring_ab(3);
        let spec = FlagSpec::new(r.clone(), Family::A, bundle_ab(&r, 4), None, vec![2]).unwrap();
        assert_eq!(
            spec.exponents(Variant::OrthogonalTrivialLine).unwrap_err(),
            FlagError::InvalidVariant
        );
        let line = LineBundleClass::new(RingElement::generator(&r, 0)).unwrap();
        let spec =
            FlagSpec::new(r.clone(), Family::BD, bundle_ab(&r, 4), Some(line), vec![1]).unwrap();
        assert_eq!(
            spec.kernel(Variant::OrthogonalTrivialLine).unwrap_err(),
            FlagError::InvalidVariant
        );
    }

    #[test]
    fn kernels() {
        let r = ring_ab(3);
        let t1 = LaurentPoly::variable(&r, 2, 0);
        let t2 = LaurentPoly::variable(&r, 2, 1);

        let spec = FlagSpec::new(r.clone(), Family::A, bundle_ab(&r, 4), None, vec![2]).unwrap();
        let kernel = spec.kernel(Variant::Standard).unwrap();
        assert_eq!(kernel.poly, &t1 - &t2);
        assert_eq!(kernel.scalar, BigInt::one());

        let ell = RingElement::generator(&r, 0);
        let line = LineBundleClass::new(ell.clone()).unwrap();
        let spec = FlagSpec::new(
            r.clone(),
            Family::C,
            bundle_ab(&r, 4),
            Some(line.clone()),
            vec![2],
        )
        .unwrap();
        let kernel = spec.kernel(Variant::Standard).unwrap();
        let expected = &(&t1 - &t2) * &(&(&t1 + &t2) + &LaurentPoly::constant(ell.clone(), 2));
        assert_eq!(kernel.poly, expected);

        let spec =
            FlagSpec::new(r.clone(), Family::BD, bundle_ab(&r, 4), Some(line), vec![1]).unwrap();
        let kernel = spec.kernel(Variant::Standard).unwrap();
        let t = LaurentPoly::variable(&r, 1, 0);
        assert_eq!(
            kernel.poly,
            &t.scale(&BigInt::from(2)) + &LaurentPoly::constant(ell, 1)
        );

        let spec = FlagSpec::new(r.clone(), Family::BD, bundle_ab(&r, 6), None, vec![2]).unwrap();
        let kernel = spec.kernel(Variant::OrthogonalTrivialLine).unwrap();
        assert_eq!(kernel.poly, &t1.pow(2) - &t2.pow(2));
        assert_eq!(kernel.scalar, BigInt::from(4));
    }

    #[test]
    fn projective_push_basics() {
        let r = ring_ab(4);
        let e = bundle_ab(&r, 3);
        let n = 3i32;
        let s = e.segre(&r);
        // f = t^{n-1} integrates to 1
        let f = xi_power_product(&r, &[n - 1]);
        assert_eq!(push_projective(&f, &e, &r), RingElement::one(&r));
        // f = t^{i+n-1} integrates to s_i
        for i in 0..=r.truncation() as i32 {
            let f = xi_power_product(&r, &[i + n - 1]);
            assert_eq!(push_projective(&f, &e, &r), s.get(i as i64));
        }
        // degree below the fiber dimension vanishes
        let rank2 = bundle_ab(&r, 2);
        let one = LaurentPoly::one(&r, 1);
        assert!(push_projective(&one, &rank2, &r).is_zero());
    }

    #[test]
    fn quadric_push_basics() {
        let r = ring_ab(4);
        let e = bundle_ab(&r, 4);
        let ell = RingElement::generator(&r, 0);
        let line = LineBundleClass::new(ell.clone()).unwrap();
        let rank = 4i32;
        let s = e.segre(&r);

        let f = xi_power_product(&r, &[rank - 2]);
        assert_eq!(
            push_quadric(&f, &e, &line, &r),
            RingElement::constant(&r, 2)
        );

        let one = LaurentPoly::one(&r, 1);
        assert!(push_quadric(&one, &e, &line, &r).is_zero());

        let f = xi_power_product(&r, &[rank - 1]);
        let expected = &s.get(1).scale(&BigInt::from(2)) + &ell;
        assert_eq!(push_quadric(&f, &e, &line, &r), expected);
    }

    #[test]
    fn complete_flag_identity_rank_four() {
        let r = ring_ab(3);
        let e = bundle_ab(&r, 4);
        let spec = FlagSpec::new(r.clone(), Family::A, e, None, vec![1, 2, 3]).unwrap();
        let g = xi_power_product(&r, &[1, 2, 3]);
        assert_eq!(
            push(&spec, &g, &PushOptions::default()).unwrap(),
            RingElement::one(&r)
        );
    }

    #[test]
    fn grassmannian_degree_two_four() {
        let r = point_ring();
        let e = VectorBundleData::trivial("E", 4);
        let spec = FlagSpec::new(r.clone(), Family::A, e, None, vec![2]).unwrap();
        let t1 = LaurentPoly::variable(&r, 2, 0);
        let t2 = LaurentPoly::variable(&r, 2, 1);
        let f = (&t1 + &t2).pow(4);
        assert_eq!(
            push(&spec, &f, &PushOptions::default()).unwrap(),
            RingElement::constant(&r, 2)
        );
    }

    #[test]
    fn lagrangian_degree_two_four() {
        let r = point_ring();
        let e = VectorBundleData::trivial("E", 4);
        let spec = FlagSpec::new(r.clone(), Family::C, e, None, vec![2]).unwrap();
        let t1 = LaurentPoly::variable(&r, 2, 0);
        let t2 = LaurentPoly::variable(&r, 2, 1);
        let f = (&t1 + &t2).pow(3);
        assert_eq!(
            push(&spec, &f, &PushOptions::default()).unwrap(),
            RingElement::constant(&r, 2)
        );
    }

    #[test]
    fn quadric_hypersurface_degree() {
        let r = point_ring();
        for rank in [4u32, 5, 6, 7] {
            let e = VectorBundleData::trivial("E", rank);
            let spec = FlagSpec::new(r.clone(), Family::BD, e, None, vec![1]).unwrap();
            let f = xi_power_product(&r, &[rank as i32 - 2]);
            assert_eq!(
                push(&spec, &f, &PushOptions::default()).unwrap(),
                RingElement::constant(&r, 2),
                "rank {rank}"
            );
        }
    }

    #[test]
    fn type_c_single_step_is_projective_push() {
        let r = ring_ab(4);
        let e = bundle_ab(&r, 6);
        let spec = FlagSpec::new(r.clone(), Family::C, e.clone(), None, vec![1]).unwrap();
        for k in 0..=6 {
            let f = xi_power_product(&r, &[k]);
            assert_eq!(
                push(&spec, &f, &PushOptions::default()).unwrap(),
                push_projective(&f, &e, &r)
            );
        }
    }

    #[test]
    fn bd_single_step_is_quadric_push() {
        let r = ring_ab(4);
        let e = bundle_ab(&r, 5);
        let ell = RingElement::generator(&r, 0);
        let line = LineBundleClass::new(ell).unwrap();
        let spec = FlagSpec::new(
            r.clone(),
            Family::BD,
            e.clone(),
            Some(line.clone()),
            vec![1],
        )
        .unwrap();
        for k in 0..=6 {
            let f = xi_power_product(&r, &[k]);
            assert_eq!(
                push(&spec, &f, &PushOptions::default()).unwrap(),
                push_quadric(&f, &e, &line, &r)
            );
        }
    }

    #[test]
    fn trivial_line_form_agrees_with_standard_form() {
        let r = ring_ab(3);
        let e = bundle_ab(&r, 6);
        let spec = FlagSpec::new(r.clone(), Family::BD, e, None, vec![2]).unwrap();
        let t1 = LaurentPoly::variable(&r, 2, 0);
        let t2 = LaurentPoly::variable(&r, 2, 1);
        for f in [
            (&t1 + &t2).pow(5),
            &t1.pow(7) * &t2.pow(2),
            (&t1.pow(2) + &(&t2 * &t1)).pow(3),
        ] {
            let standard = push_with_variant(&spec, &f, Variant::Standard).unwrap();
            let reduced = push_with_variant(&spec, &f, Variant::OrthogonalTrivialLine).unwrap();
            assert_eq!(standard, reduced);
        }
    }

    #[test]
    fn full_roots_vanishing_cases() {
        let r = ring_ab(4);
        let e = bundle_ab(&r, 2);
        let spec = FlagSpec::new(r.clone(), Family::A, e, None, vec![1]).unwrap();
        let one = LaurentPoly::one(&r, 2);
        assert!(push_full_roots_a(&spec, &one).unwrap().is_zero());
        let t1 = LaurentPoly::variable(&r, 2, 0);
        let t2 = LaurentPoly::variable(&r, 2, 1);
        assert!(push_full_roots_a(&spec, &(&t1 + &t2)).unwrap().is_zero());
    }

    #[test]
    fn full_roots_agrees_with_standard_push_on_shifted_integrands() {
        let r = ring_ab(3);
        let e = bundle_ab(&r, 4);
        let n = 4usize;
        let d = 2usize;
        let spec = FlagSpec::new(r.clone(), Family::A, e, None, vec![d as u32]).unwrap();
        let t1 = LaurentPoly::variable(&r, d, 0);
        let t2 = LaurentPoly::variable(&r, d, 1);
        let a = RingElement::generator(&r, 0);
        for f in [
            (&t1 + &t2).pow(4),
            &t1.pow(3) * &t2.pow(2),
            (&(&t1 * &t2) + &LaurentPoly::constant(a, d)).pow(2),
        ] {
            // same integrand seen in the last d of the n root variables
            let map: Vec<usize> = (0..d).map(|i| n - d + i).collect();
            let lifted = f.rename_vars(&map, n);
            assert_eq!(
                push_full_roots_a(&spec, &lifted).unwrap(),
                push(&spec, &f, &PushOptions::default()).unwrap()
            );
        }
    }

    #[test]
    fn fiber_dimensions() {
        let r = ring_ab(3);
        // A: Grassmann bundle, d(n - d)
        for (n, d) in [(4u32, 1u32), (4, 2), (5, 3), (6, 2)] {
            let spec =
                FlagSpec::new(r.clone(), Family::A, bundle_ab(&r, n), None, vec![d]).unwrap();
            assert_eq!(
                spec.fiber_dimension(Variant::Standard).unwrap(),
                d * (n - d)
            );
        }
        // C: Lagrangian Grassmannian, n(n+1)/2
        for n in [1u32, 2, 3] {
            let spec =
                FlagSpec::new(r.clone(), Family::C, bundle_ab(&r, 2 * n), None, vec![n]).unwrap();
            assert_eq!(
                spec.fiber_dimension(Variant::Standard).unwrap(),
                n * (n + 1) / 2
            );
        }
        // BD maximal even case, n(n-1)/2; both variants agree
        for n in [2u32, 3] {
            let spec =
                FlagSpec::new(r.clone(), Family::BD, bundle_ab(&r, 2 * n), None, vec![n]).unwrap();
            assert_eq!(
                spec.fiber_dimension(Variant::Standard).unwrap(),
                n * (n - 1) / 2
            );
            assert_eq!(
                spec.fiber_dimension(Variant::OrthogonalTrivialLine)
                    .unwrap(),
                n * (n - 1) / 2
            );
        }
        // full symplectic flag: dims (1, .., n) has relative dimension n^2
        let spec =
            FlagSpec::new(r.clone(), Family::C, bundle_ab(&r, 6), None, vec![1, 2, 3]).unwrap();
        assert_eq!(spec.fiber_dimension(Variant::Standard).unwrap(), 9);
    }

    #[test]
    fn blocks_follow_dimension_steps() {
        let r = ring_ab(3);
        let spec = FlagSpec::new(r.clone(), Family::A, bundle_ab(&r, 6), None, vec![2]).unwrap();
        assert_eq!(spec.blocks(), vec![1..=2]);
        let spec = FlagSpec::new(r.clone(), Family::A, bundle_ab(&r, 6), None, vec![1, 2]).unwrap();
        assert_eq!(spec.blocks(), vec![2..=2, 1..=1]);
        let spec = FlagSpec::new(r.clone(), Family::A, bundle_ab(&r, 6), None, vec![2, 5]).unwrap();
        assert_eq!(spec.blocks(), vec![4..=5, 1..=3]);
    }

    #[test]
    fn halving_picks_one_component() {
        let r = point_ring();
        let e = VectorBundleData::trivial("E", 4);
        let spec = FlagSpec::new(r.clone(), Family::BD, e, None, vec![2]).unwrap();
        let t1 = LaurentPoly::variable(&r, 2, 0);
        let t2 = LaurentPoly::variable(&r, 2, 1);
        let f = &t1 + &t2;
        let both = push(&spec, &f, &PushOptions::default()).unwrap();
        assert_eq!(both, RingElement::constant(&r, 4));
        let halved = push(
            &spec,
            &f,
            &PushOptions {
                halve_maximal_orthogonal: true,
            },
        )
        .unwrap();
        assert_eq!(halved, RingElement::constant(&r, 2));
    }

    #[test]
    fn halving_rejects_inapplicable_cases() {
        let r = ring_ab(3);
        let options = PushOptions {
            halve_maximal_orthogonal: true,
        };
        // family C
        let spec = FlagSpec::new(r.clone(), Family::C, bundle_ab(&r, 4), None, vec![2]).unwrap();
        let f = LaurentPoly::one(&r, 2);
        assert_eq!(
            push(&spec, &f, &options).unwrap_err(),
            PushError::HalveNotApplicable
        );
        // odd rank (type B)
        let spec = FlagSpec::new(r.clone(), Family::BD, bundle_ab(&r, 5), None, vec![2]).unwrap();
        assert_eq!(
            push(&spec, &f, &options).unwrap_err(),
            PushError::HalveNotApplicable
        );
        // even rank but non-maximal step
        let spec = FlagSpec::new(r.clone(), Family::BD, bundle_ab(&r, 6), None, vec![2]).unwrap();
        assert_eq!(
            push(&spec, &f, &options).unwrap_err(),
            PushError::HalveNotApplicable
        );
    }

    #[test]
    fn halving_detects_odd_coefficients() {
        let r = RingDescriptor::new(vec![("h".into(), 1)], 1).unwrap();
        let e = VectorBundleData::trivial("E", 2);
        let line = LineBundleClass::new(RingElement::generator(&r, 0)).unwrap();
        let spec = FlagSpec::new(r.clone(), Family::BD, e, Some(line), vec![1]).unwrap();
        let f = LaurentPoly::variable(&r, 1, 0);
        // 2 s_1 + c_1(L) = h, which is not divisible by two
        assert_eq!(
            push(
                &spec,
                &f,
                &PushOptions {
                    halve_maximal_orthogonal: true
                }
            )
            .unwrap_err(),
            PushError::NonIntegralHalving
        );
    }

    #[test]
    fn degree_law_on_samples() {
        use crate::ring::Homogeneity;
        let r = ring_ab(4);
        let e = bundle_ab(&r, 4);
        let spec = FlagSpec::new(r.clone(), Family::A, e, None, vec![2]).unwrap();
        let fiber = spec.fiber_dimension(Variant::Standard).unwrap();
        let t1 = LaurentPoly::variable(&r, 2, 0);
        let t2 = LaurentPoly::variable(&r, 2, 1);
        for (f, degree) in [
            ((&t1 + &t2).pow(5), 5u32),
            (&(&t1 * &t2) * &(&t1 + &t2).pow(4), 6),
        ] {
            let result = push(&spec, &f, &PushOptions::default()).unwrap();
            match result.homogeneity() {
                Homogeneity::Zero => {}
                Homogeneity::Homogeneous(got) => assert_eq!(got, degree - fiber),
                Homogeneity::Mixed => panic!("push of homogeneous input must be homogeneous"),
            }
        }
    }

    #[test]
    fn push_checks_integrand_shape() {
        let r = ring_ab(3);
        let spec = FlagSpec::new(r.clone(), Family::A, bundle_ab(&r, 4), None, vec![2]).unwrap();
        let wrong_arity = LaurentPoly::one(&r, 3);
        assert_eq!(
            push(&spec, &wrong_arity, &PushOptions::default()).unwrap_err(),
            PushError::ArityMismatch {
                expected: 2,
                got: 3
            }
        );
        let laurent = LaurentPoly::variable_pow(&r, 2, 0, -1);
        assert_eq!(
            push(&spec, &laurent, &PushOptions::default()).unwrap_err(),
            PushError::NotPolynomial
        );
    }

    #[test]
    fn stepwise_tower_matches_one_shot_kernels() {
        // integrate one variable at a time against the Segre series of the
        // isotropic subquotient, with the not-yet-integrated root kept as a
        // formal degree-1 generator; this must reproduce the closed
        // two-variable kernel extraction for both isotropic families
        use crate::bundle::isotropic_quotient_segre_laurent;

        let base = RingDescriptor::new(vec![("a".into(), 1), ("b".into(), 2)], 3).unwrap();
        // headroom: the intermediate x-powers become t-exponents later
        let ext = RingDescriptor::new(vec![("a".into(), 1), ("b".into(), 2), ("x".into(), 1)], 12)
            .unwrap();
        let reinterpret = |inner: &RingElement| -> LaurentPoly {
            // x-exponent becomes the Laurent exponent of the second step
            let mut out = LaurentPoly::zero(&base, 1);
            for (exponents, coefficient) in inner.terms() {
                let monomial = RingElement::monomial(&base, &exponents[..2], coefficient.clone());
                out = &out + &LaurentPoly::monomial(monomial, &[exponents[2] as i32]);
            }
            out
        };

        for family in [Family::C, Family::BD] {
            let rank = 4u32;
            let chern_base = vec![
                RingElement::generator(&base, 0),
                RingElement::generator(&base, 1),
            ];
            let chern_ext = vec![
                RingElement::generator(&ext, 0),
                RingElement::generator(&ext, 1),
            ];
            let e_base = VectorBundleData::new("E", rank, chern_base).unwrap();
            let e_ext = VectorBundleData::new("E", rank, chern_ext).unwrap();
            let ell_base = RingElement::generator(&base, 0);
            let ell_ext = RingElement::generator(&ext, 0);
            let line_base = LineBundleClass::new(ell_base).unwrap();
            let line_ext = LineBundleClass::new(ell_ext.clone()).unwrap();
            let x = RingElement::generator(&ext, 2);

            let spec = FlagSpec::new(
                base.clone(),
                family,
                e_base.clone(),
                Some(line_base.clone()),
                vec![1, 2],
            )
            .unwrap();

            let t = LaurentPoly::variable(&ext, 1, 0);
            let x_const = LaurentPoly::constant(x.clone(), 1);
            for f in [
                &t.pow(3) * &x_const.pow(2),
                &(&t + &x_const).pow(4) * &t,
                (&(&t * &x_const) + &LaurentPoly::constant(RingElement::generator(&ext, 0), 1))
                    .pow(2),
            ] {
                // step 1: integrate t against s(U_1-perp / U_1), target
                // exponent rank - 2(d-1) - 1 = rank - 3
                let quotient = isotropic_quotient_segre_laurent(
                    &e_ext,
                    &line_ext,
                    std::slice::from_ref(&x),
                    &ext,
                    0,
                    1,
                );
                let step = match family {
                    Family::C => f.clone(),
                    Family::BD => {
                        let hyperplane = &LaurentPoly::variable(&ext, 1, 0).scale(&BigInt::from(2))
                            + &LaurentPoly::constant(ell_ext.clone(), 1);
                        &f * &hyperplane
                    }
                    Family::A => unreachable!(),
                };
                let inner = (&step * &quotient).coeff(&[rank as i32 - 3]);

                // step 2: the surviving root integrates against s(E)
                let g = reinterpret(&inner);
                let outer = match family {
                    Family::C => push_projective(&g, &e_base, &base),
                    Family::BD => push_quadric(&g, &e_base, &line_base, &base),
                    Family::A => unreachable!(),
                };

                // one-shot engine on f with (t, x) -> (t_1, t_2)
                let mut lifted = LaurentPoly::zero(&base, 2);
                for (exponents, coefficient) in f.terms() {
                    let mut split = LaurentPoly::zero(&base, 2);
                    for (ring_exps, value) in coefficient.terms() {
                        let monomial = RingElement::monomial(&base, &ring_exps[..2], value.clone());
                        split = &split
                            + &LaurentPoly::monomial(
                                monomial,
                                &[exponents[0], ring_exps[2] as i32],
                            );
                    }
                    lifted = &lifted + &split;
                }
                let one_shot = push(&spec, &lifted, &PushOptions::default()).unwrap();
                assert_eq!(outer, one_shot, "family {:?}", family);
            }
        }
    }

    #[test]
    fn engine_reduces_to_projective_formula_for_single_steps() {
        // push of xi_1^a for the projective case through the full engine
        let r = ring_ab(4);
        let e = bundle_ab(&r, 3);
        let spec = FlagSpec::new(r.clone(), Family::A, e.clone(), None, vec![1]).unwrap();
        let s = segre_laurent(&e, &r, 0, 1);
        for a in 0..=6i32 {
            let f = xi_power_product(&r, &[a]);
            let expected = (&f * &s).coeff(&[2]);
            assert_eq!(push(&spec, &f, &PushOptions::default()).unwrap(), expected);
        }
    }
}
