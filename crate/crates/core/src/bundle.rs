//! Vector-bundle data, Segre classes, and the Segre Laurent series
//! `s_{1/t}(E) = sum_i s_i(E) t^{-i}`.
//!
//! Bundles are specified by their Chern classes; Segre classes come from
//! inverting the total Chern class degree by degree, so that
//! `s(E) * c(E) = 1` holds exactly up to the truncation bound.

use crate::laurent::LaurentPoly;
use crate::ring::{RingDescriptor, RingElement};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BundleError {
    #[error("chern class c_{index} of `{bundle}` is not homogeneous of degree {index}")]
    InhomogeneousChern { bundle: String, index: usize },
    #[error("bundle `{bundle}` of rank {rank} given {given} chern classes")]
    TooManyChern {
        bundle: String,
        rank: u32,
        given: usize,
    },
    #[error("line-bundle class is not homogeneous of degree 1")]
    InhomogeneousLineClass,
}

/// A vector bundle presented by rank and Chern classes `c_1..c_r`
/// (`c_0 = 1` implicit; trailing zero classes may be omitted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorBundleData {
    name: String,
    rank: u32,
    chern: Vec<RingElement>,
}

impl VectorBundleData {
    pub fn new(
        name: impl Into<String>,
        rank: u32,
        chern: Vec<RingElement>,
    ) -> Result<VectorBundleData, BundleError> {
        let name = name.into();
        if chern.len() > rank as usize {
            return Err(BundleError::TooManyChern {
                bundle: name,
                rank,
                given: chern.len(),
            });
        }
        for (i, class) in chern.iter().enumerate() {
            if !class.is_homogeneous_of((i + 1) as u32) {
                return Err(BundleError::InhomogeneousChern {
                    bundle: name,
                    index: i + 1,
                });
            }
        }
        Ok(VectorBundleData { name, rank, chern })
    }

    /// Rank-`rank` bundle with all Chern classes zero.
    pub fn trivial(name: impl Into<String>, rank: u32) -> VectorBundleData {
        VectorBundleData {
            name: name.into(),
            rank,
            chern: Vec::new(),
        }
    }

    /// Builds a bundle from its Segre classes `s_1, s_2, ...` by inverting
    /// the other way: `c_k = -(s_1 c_{k-1} + ... + s_k c_0)`. Errors if
    /// the recovered `c_k` is nonzero for some `k` above the rank.
    pub fn from_segre(
        ring: &Arc<RingDescriptor>,
        name: impl Into<String>,
        rank: u32,
        segre: &[RingElement],
    ) -> Result<VectorBundleData, BundleError> {
        let name = name.into();
        let get = |i: u32| -> RingElement {
            segre
                .get((i - 1) as usize)
                .cloned()
                .unwrap_or_else(|| RingElement::zero(ring))
        };
        let mut chern: Vec<RingElement> = Vec::new();
        for k in 1..=ring.truncation() {
            let mut sum = get(k);
            for i in 1..k {
                sum = &sum + &(&get(i) * &chern[(k - i - 1) as usize]);
            }
            chern.push(-&sum);
        }
        for (i, class) in chern.iter().enumerate() {
            if i as u32 >= rank && !class.is_zero() {
                return Err(BundleError::TooManyChern {
                    bundle: name,
                    rank,
                    given: i + 1,
                });
            }
        }
        chern.truncate(rank as usize);
        while chern.last().is_some_and(|c| c.is_zero()) {
            chern.pop();
        }
        VectorBundleData::new(name, rank, chern)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// `c_i(E)`: 1 for `i = 0`, zero above the rank or below zero.
    pub fn chern_class(&self, ring: &Arc<RingDescriptor>, i: i64) -> RingElement {
        if i == 0 {
            return RingElement::one(ring);
        }
        if i < 0 || i > self.rank as i64 {
            return RingElement::zero(ring);
        }
        self.chern
            .get((i - 1) as usize)
            .cloned()
            .unwrap_or_else(|| RingElement::zero(ring))
    }

    pub fn segre(&self, ring: &Arc<RingDescriptor>) -> SegreTable {
        SegreTable::from_chern(self, ring)
    }
}

/// First Chern class of a line bundle; must be homogeneous of degree 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineBundleClass {
    c1: RingElement,
}

impl LineBundleClass {
    pub fn new(c1: RingElement) -> Result<LineBundleClass, BundleError> {
        if !c1.is_homogeneous_of(1) {
            return Err(BundleError::InhomogeneousLineClass);
        }
        Ok(LineBundleClass { c1 })
    }

    pub fn trivial(ring: &Arc<RingDescriptor>) -> LineBundleClass {
        LineBundleClass {
            c1: RingElement::zero(ring),
        }
    }

    pub fn c1(&self) -> &RingElement {
        &self.c1
    }

    pub fn is_trivial(&self) -> bool {
        self.c1.is_zero()
    }
}

/// Segre classes `s_0..s_D` of a bundle, with `s_i = 0` outside that range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegreTable {
    ring: Arc<RingDescriptor>,
    classes: Vec<RingElement>,
}

impl SegreTable {
    /// Inverts the total Chern class degree by degree:
    /// `s_0 = 1`, `s_k = -(c_1 s_{k-1} + ... + c_k s_0)`.
    pub fn from_chern(bundle: &VectorBundleData, ring: &Arc<RingDescriptor>) -> SegreTable {
        let bound = ring.truncation();
        let mut classes = Vec::with_capacity(bound as usize + 1);
        classes.push(RingElement::one(ring));
        for k in 1..=bound {
            let mut sum = RingElement::zero(ring);
            for i in 1..=k.min(bundle.rank) {
                let c = bundle.chern_class(ring, i as i64);
                if !c.is_zero() {
                    sum = &sum + &(&c * &classes[(k - i) as usize]);
                }
            }
            classes.push(-&sum);
        }
        SegreTable {
            ring: ring.clone(),
            classes,
        }
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        &self.ring
    }

    /// `s_i(E)`; zero for `i < 0` and for `i` above the truncation bound.
    pub fn get(&self, i: i64) -> RingElement {
        if i < 0 || i as usize >= self.classes.len() {
            RingElement::zero(&self.ring)
        } else {
            self.classes[i as usize].clone()
        }
    }

    /// The Laurent series `s_{1/t_j}(E) = sum_i s_i(E) t_j^{-i}` in the
    /// single variable of the given index, embedded at the given arity.
    pub fn laurent(&self, var: usize, arity: usize) -> LaurentPoly {
        let mut out = LaurentPoly::zero(&self.ring, arity);
        for (i, class) in self.classes.iter().enumerate() {
            if !class.is_zero() {
                let mut exponents = vec![0i32; arity];
                exponents[var] = -(i as i32);
                out = &out + &LaurentPoly::monomial(class.clone(), &exponents);
            }
        }
        out
    }
}

/// Shorthand for `bundle.segre(ring).laurent(var, arity)`.
pub fn segre_laurent(
    bundle: &VectorBundleData,
    ring: &Arc<RingDescriptor>,
    var: usize,
    arity: usize,
) -> LaurentPoly {
    bundle.segre(ring).laurent(var, arity)
}

/// Segre Laurent series of the subquotient `U_j^perp / U_j` of an
/// isotropic flag, expressed through the degree-1 classes `xi` of the
/// lines already split off:
/// `prod_i (t - xi_i)(t + xi_i + c_1(L)) * s_{1/t}(E) * t^{-2(j-1)}`.
///
/// Used to cross-validate the kernel polynomials, not on the push path.
pub fn isotropic_quotient_segre_laurent(
    bundle: &VectorBundleData,
    line: &LineBundleClass,
    xi_values: &[RingElement],
    ring: &Arc<RingDescriptor>,
    var: usize,
    arity: usize,
) -> LaurentPoly {
    for xi in xi_values {
        assert!(
            xi.is_homogeneous_of(1),
            "xi values must be homogeneous of degree 1"
        );
    }
    let t = LaurentPoly::variable(ring, arity, var);
    let ell = LaurentPoly::constant(line.c1().clone(), arity);
    let mut out = segre_laurent(bundle, ring, var, arity);
    for xi in xi_values {
        let xi_poly = LaurentPoly::constant(xi.clone(), arity);
        let factor = &(&t - &xi_poly) * &(&(&t + &xi_poly) + &ell);
        out = &out * &factor;
    }
    let mut shift = vec![0i32; arity];
    shift[var] = -2 * xi_values.len() as i32;
    out.shift(&shift)
}
