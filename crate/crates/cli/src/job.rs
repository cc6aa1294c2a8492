//! Job-file schema and construction of engine objects from it.
//!
//! A job is a single JSON document; unknown fields are rejected so that
//! runs are machine-auditable. Chern classes, line classes and monomial
//! coefficients are expression strings over the base-ring generators.

use anyhow::{anyhow, bail, Context, Result};
use gysin_core::bundle::{LineBundleClass, VectorBundleData};
use gysin_core::expr::{self, Bindings};
use gysin_core::flag::{Family, FlagSpec};
use gysin_core::laurent::LaurentPoly;
use gysin_core::ring::{RingDescriptor, RingElement};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub ring: RingSection,
    pub bundles: Vec<BundleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line_bundle: Option<LineSection>,
    pub flag: FlagSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrand: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schur: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monomials: Option<Vec<(String, Vec<i64>)>>,
    #[serde(default)]
    pub options: JobOptions,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSection {
    pub generators: Vec<(String, u32)>,
    pub truncation: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSection {
    pub name: String,
    pub rank: u32,
    #[serde(default)]
    pub chern: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSection {
    pub name: String,
    pub c1: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagSection {
    pub family: String,
    pub dims: Vec<u32>,
    pub bundle: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line_bundle: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JobOptions {
    pub halve_maximal_orthogonal: bool,
    pub check_symmetry: bool,
    pub basis: Basis,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    #[default]
    Monomial,
    Segre,
}

/// Engine objects assembled from a job file.
pub struct Prepared {
    pub ring: Arc<RingDescriptor>,
    pub bindings: Bindings,
    pub spec: FlagSpec,
    pub bundle: VectorBundleData,
}

/// Evaluates an expression string to a base-ring element (no `xi`
/// variables allowed).
fn eval_base(text: &str, bindings: &Bindings, what: &str) -> Result<RingElement> {
    let parsed = expr::parse(text).map_err(|e| anyhow!("{what}: in `{text}`: {e}"))?;
    let value =
        expr::eval(&parsed, bindings, 0).map_err(|e| anyhow!("{what}: in `{text}`: {e}"))?;
    Ok(value.coeff(&[]))
}

impl JobFile {
    pub fn from_path(path: &std::path::Path) -> Result<JobFile> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read job file {}", path.display()))?;
        let job: JobFile = serde_json::from_str(&text)
            .with_context(|| format!("cannot parse job file {}", path.display()))?;
        Ok(job)
    }

    pub fn family(&self) -> Result<Family> {
        match self.flag.family.as_str() {
            "A" => Ok(Family::A),
            "C" => Ok(Family::C),
            "BD" | "B" | "D" => Ok(Family::BD),
            other => bail!("unknown family `{other}` (expected A, C, or BD)"),
        }
    }

    /// Builds the ring, bundles, line classes and flag data.
    pub fn prepare(&self) -> Result<Prepared> {
        let ring = RingDescriptor::new(self.ring.generators.clone(), self.ring.truncation)
            .map_err(|e| anyhow!("ring definition: {e}"))?;
        let mut bindings = Bindings::new(ring.clone());

        let mut flag_bundle = None;
        for section in &self.bundles {
            let chern: Vec<RingElement> = section
                .chern
                .iter()
                .enumerate()
                .map(|(i, text)| {
                    eval_base(
                        text,
                        &bindings,
                        &format!("chern class c_{} of `{}`", i + 1, section.name),
                    )
                })
                .collect::<Result<_>>()?;
            let bundle = VectorBundleData::new(section.name.clone(), section.rank, chern)
                .map_err(|e| anyhow!("bundle `{}`: {e}", section.name))?;
            if section.name == self.flag.bundle {
                flag_bundle = Some(bundle.clone());
            }
            bindings.add_bundle(bundle);
        }
        let bundle = flag_bundle
            .ok_or_else(|| anyhow!("flag references unknown bundle `{}`", self.flag.bundle))?;

        let mut flag_line = None;
        if let Some(section) = &self.line_bundle {
            let c1 = eval_base(
                &section.c1,
                &bindings,
                &format!("line bundle `{}`", section.name),
            )?;
            let line = LineBundleClass::new(c1)
                .map_err(|e| anyhow!("line bundle `{}`: {e}", section.name))?;
            bindings.add_line(section.name.clone(), line.clone());
            if self.flag.line_bundle.as_deref() == Some(section.name.as_str()) {
                flag_line = Some(line);
            }
        }
        if let Some(wanted) = &self.flag.line_bundle {
            if flag_line.is_none() {
                bail!("flag references unknown line bundle `{wanted}`");
            }
        }

        let spec = FlagSpec::new(
            ring.clone(),
            self.family()?,
            bundle.clone(),
            flag_line,
            self.flag.dims.clone(),
        )
        .map_err(|e| anyhow!("flag data: {e}"))?;

        Ok(Prepared {
            ring,
            bindings,
            spec,
            bundle,
        })
    }

    /// Parses and evaluates the monomial shortcut terms.
    pub fn monomial_terms(&self, prepared: &Prepared) -> Result<Vec<(RingElement, Vec<i64>)>> {
        let terms = self
            .monomials
            .as_ref()
            .ok_or_else(|| anyhow!("job has no `monomials` section"))?;
        terms
            .iter()
            .map(|(coefficient, lambda)| {
                let value = eval_base(coefficient, &prepared.bindings, "monomial coefficient")?;
                Ok((value, lambda.clone()))
            })
            .collect()
    }

    /// Assembles the extraction-path integrand from whichever form the job
    /// provides. Returns the polynomial and a short label of its origin.
    pub fn integrand_poly(&self, prepared: &Prepared) -> Result<(LaurentPoly, &'static str)> {
        let d = prepared.spec.d();
        let provided = [
            self.integrand.is_some(),
            self.schur.is_some(),
            self.monomials.is_some(),
        ]
        .iter()
        .filter(|&&x| x)
        .count();
        if provided != 1 {
            bail!("job must provide exactly one of `integrand`, `schur`, `monomials`");
        }
        if let Some(text) = &self.integrand {
            let parsed = expr::parse(text).map_err(|e| anyhow!("integrand: in `{text}`: {e}"))?;
            match expr::eval(&parsed, &prepared.bindings, d) {
                Ok(f) => return Ok((f, "expression")),
                Err(expr::EvalError::XiIndexOutOfRange { index, arity })
                    if prepared.spec.family() == Family::A
                        && index <= prepared.bundle.rank() as usize =>
                {
                    // all-Chern-roots mode: variables beyond d refer to the
                    // quotient roots
                    let n = prepared.bundle.rank() as usize;
                    let f = expr::eval(&parsed, &prepared.bindings, n).map_err(|e| {
                        anyhow!("integrand: in `{text}`: {e} (arity {arity} and {n} both tried)")
                    })?;
                    return Ok((f, "expression-full-roots"));
                }
                Err(e) => bail!("integrand: in `{text}`: {e}"),
            }
        }
        if let Some(lambda) = &self.schur {
            if lambda.len() != d {
                bail!(
                    "schur sequence length {} does not match flag arity {d}",
                    lambda.len()
                );
            }
            let f = gysin_core::schur::schur_bialternant(&prepared.ring, lambda)
                .map_err(|e| anyhow!("schur integrand: {e}"))?;
            return Ok((f, "schur"));
        }
        let terms = self.monomial_terms(prepared)?;
        for (_, lambda) in &terms {
            if lambda.len() != d {
                bail!(
                    "monomial sequence length {} does not match flag arity {d}",
                    lambda.len()
                );
            }
            if lambda.iter().any(|&x| x < 0) {
                bail!("extraction-path monomials need non-negative exponents");
            }
        }
        Ok((
            gysin_core::sample::monomials_to_poly(&prepared.ring, d, &terms),
            "monomials",
        ))
    }
}
