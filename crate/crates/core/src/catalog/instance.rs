use serde::{Deserialize, Serialize};

use super::entry::{compile, CatalogEntry, InstanceParams};
use super::profile::NuClass;
use super::superpotential::{check_k, Superpotential};
use crate::error::{Error, Result};
use crate::hermitian::Hermitian3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndKind {
    /// A pole of a profile or envelope.
    Singular,
    /// Cut at `±L_cut` on an unbounded side.
    Truncated,
    /// Chosen by the caller.
    Fixed,
}

/// Open interval `(a, b)` with the nature of each end.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub a: f64,
    pub b: f64,
    pub left: EndKind,
    pub right: EndKind,
}

impl Domain {
    pub fn contains(&self, x: f64) -> bool {
        x > self.a && x < self.b
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSource {
    Entry {
        entry: CatalogEntry,
        params: InstanceParams,
    },
    FreeForm,
}

/// A superpotential with its numbers bound, a value of k and a regularity window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuperpotentialInstance {
    pub source: InstanceSource,
    pub k: f64,
    pub domain: Domain,
    pub superpotential: Superpotential,
}

/// Half-width of the numeric window on unbounded sides.
pub fn l_cut(sp: &Superpotential) -> f64 {
    match sp.nu_class() {
        NuClass::Zero => 40.0,
        _ => 12.0 / sp.lambda(),
    }
}

fn regular_at(sp: &Superpotential, x: f64) -> bool {
    sp.p(x).is_ok() && sp.q(x).max_abs().is_finite()
}

/// The singularity-free interval of `sp` containing `anchor`, or, without an anchor,
/// the candidate interval on which all envelopes are real: the one containing 0 if
/// there is one, else the widest.
pub fn default_domain(sp: &Superpotential, anchor: Option<f64>) -> Result<Domain> {
    let cut = l_cut(sp);
    let sing = sp.singularities(-cut, cut);
    let mut breaks = Vec::with_capacity(sing.len() + 2);
    breaks.push((-cut, EndKind::Truncated));
    for s in &sing {
        breaks.push((*s, EndKind::Singular));
    }
    breaks.push((cut, EndKind::Truncated));
    // a pole exactly at ±cut replaces the truncation
    breaks.dedup_by(|b, a| {
        if (a.0 - b.0).abs() <= 1e-12 * cut {
            a.1 = EndKind::Singular;
            true
        } else {
            false
        }
    });
    let intervals: Vec<Domain> = breaks
        .windows(2)
        .filter(|w| w[1].0 > w[0].0)
        .map(|w| Domain {
            a: w[0].0,
            b: w[1].0,
            left: w[0].1,
            right: w[1].1,
        })
        .collect();

    if let Some(x) = anchor {
        if !x.is_finite() || x <= -cut || x >= cut {
            return Err(Error::Argument(format!(
                "anchor {x} outside the numeric window (−{cut}, {cut})"
            )));
        }
        if sing.iter().any(|s| (s - x).abs() <= 1e-12 * s.abs().max(1.0)) {
            return Err(Error::Argument(format!("anchor {x} is a singular point")));
        }
        return intervals
            .into_iter()
            .find(|d| d.contains(x))
            .ok_or_else(|| Error::Argument(format!("anchor {x} is a singular point")));
    }

    let candidates: Vec<Domain> = intervals
        .into_iter()
        .filter(|d| regular_at(sp, d.midpoint()))
        .collect();
    if let Some(d) = candidates.iter().find(|d| d.contains(0.0)) {
        return Ok(*d);
    }
    candidates
        .into_iter()
        .max_by(|a, b| a.width().total_cmp(&b.width()))
        .ok_or_else(|| Error::Domain("no interval on which every envelope is real".into()))
}

impl SuperpotentialInstance {
    /// Catalog instance on its default domain.
    pub fn from_entry(entry: &CatalogEntry, params: &InstanceParams, k: f64) -> Result<Self> {
        let sp = compile(entry, params)?;
        Self::from_parts(
            InstanceSource::Entry {
                entry: entry.clone(),
                params: *params,
            },
            sp,
            k,
        )
    }

    /// Catalog instance with default parameters.
    pub fn with_defaults(entry: &CatalogEntry, k: f64) -> Result<Self> {
        Self::from_entry(entry, &InstanceParams::defaults_for(entry), k)
    }

    pub fn free_form(sp: Superpotential, k: f64) -> Result<Self> {
        Self::from_parts(InstanceSource::FreeForm, sp, k)
    }

    /// Instance from prebuilt parts on the default domain.
    pub fn from_parts(source: InstanceSource, sp: Superpotential, k: f64) -> Result<Self> {
        check_k(k)?;
        let domain = default_domain(&sp, None)?;
        Ok(Self {
            source,
            k,
            domain,
            superpotential: sp,
        })
    }

    pub fn entry_id(&self) -> String {
        match &self.source {
            InstanceSource::Entry { entry, .. } => entry.id.clone(),
            InstanceSource::FreeForm => "free-form".into(),
        }
    }

    pub fn with_k(&self, k: f64) -> Result<Self> {
        check_k(k)?;
        Ok(Self { k, ..self.clone() })
    }

    /// Restricts to the caller's interval, which must be free of singular points.
    pub fn with_domain(&self, a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Argument(format!("invalid interval ({a}, {b})")));
        }
        let sing = self.superpotential.singularities(a, b);
        let tol = 1e-12 * (b - a).max(1.0);
        if sing.iter().any(|s| *s > a + tol && *s < b - tol) {
            return Err(Error::Domain(format!(
                "interval ({a}, {b}) contains singular points {sing:?}"
            )));
        }
        let kind = |x: f64| {
            if sing.iter().any(|s| (s - x).abs() <= tol) {
                EndKind::Singular
            } else {
                EndKind::Fixed
            }
        };
        let domain = Domain {
            a,
            b,
            left: kind(a),
            right: kind(b),
        };
        if !regular_at(&self.superpotential, domain.midpoint()) {
            return Err(Error::Domain(format!(
                "an envelope is not real on ({a}, {b})"
            )));
        }
        Ok(Self {
            domain,
            ..self.clone()
        })
    }

    fn guard(&self, x: f64) -> Result<()> {
        if self.domain.contains(x) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "x = {x} outside ({}, {})",
                self.domain.a, self.domain.b
            )))
        }
    }

    pub fn evaluate_q(&self, x: f64) -> Result<Hermitian3> {
        self.guard(x)?;
        Ok(self.superpotential.q(x))
    }

    pub fn evaluate_q_derivative(&self, x: f64) -> Result<Hermitian3> {
        self.guard(x)?;
        Ok(self.superpotential.q_prime(x))
    }

    pub fn evaluate_r(&self) -> Hermitian3 {
        self.superpotential.r
    }

    pub fn evaluate_p(&self, x: f64) -> Result<Hermitian3> {
        self.guard(x)?;
        self.superpotential.p(x)
    }

    pub fn evaluate_p_derivative(&self, x: f64) -> Result<Hermitian3> {
        self.guard(x)?;
        self.superpotential.p_prime(x)
    }

    /// `W_k(x)` at the instance's k.
    pub fn superpotential(&self, x: f64) -> Result<Hermitian3> {
        self.w_at(self.k, x)
    }

    pub fn superpotential_derivative(&self, x: f64) -> Result<Hermitian3> {
        self.w_prime_at(self.k, x)
    }

    /// `W_j(x)` for another value of the shape parameter.
    pub fn w_at(&self, k: f64, x: f64) -> Result<Hermitian3> {
        self.guard(x)?;
        self.superpotential.w(k, x)
    }

    pub fn w_prime_at(&self, k: f64, x: f64) -> Result<Hermitian3> {
        self.guard(x)?;
        self.superpotential.w_prime(k, x)
    }

    /// Singular points in `[lo, hi]`.
    pub fn singularities(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.superpotential.singularities(lo, hi)
    }

    pub fn nu(&self) -> f64 {
        self.superpotential.nu
    }

    pub fn omega(&self) -> f64 {
        self.superpotential.omega
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
