use serde::{Deserialize, Serialize};

use super::envelope::Envelope;
use super::profile::{NuClass, ProfileKind, ScalarProfile};
use crate::error::{Error, Result};
use crate::hermitian::Hermitian3;

/// One term `c · M · envelope(x)` of `P`, with `M` a constant Hermitian matrix
/// (a basis element or a fixed combination of them).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PTerm {
    pub coeff: f64,
    pub matrix: Hermitian3,
    pub envelope: Envelope,
}

/// The k-independent parts `Q(x)`, `P(x)`, `R` of `W_k = kQ + P + R/k`, plus the
/// constants ν and ω they are meant to satisfy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Superpotential {
    pub q: [ScalarProfile; 3],
    pub p: Vec<PTerm>,
    pub r: Hermitian3,
    pub nu: f64,
    pub omega: f64,
}

impl Superpotential {
    /// Assembles parts. ν is read off the profiles, which must agree on it.
    pub fn new(q: [ScalarProfile; 3], p: Vec<PTerm>, r: Hermitian3, omega: f64) -> Result<Self> {
        let nu = common_nu(&q)?;
        if !omega.is_finite() || omega < 0.0 {
            return Err(Error::Argument(format!("ω must be finite and ≥ 0, got {omega}")));
        }
        Ok(Self { q, p, r, nu, omega })
    }

    /// Like [`Superpotential::new`], with ω taken from `R² ≈ ω² I` as `sqrt(tr(R²)/3)`.
    pub fn with_inferred_omega(q: [ScalarProfile; 3], p: Vec<PTerm>, r: Hermitian3) -> Result<Self> {
        let omega = (r.square().trace() / 3.0).max(0.0).sqrt();
        Self::new(q, p, r, omega)
    }

    pub fn nu_class(&self) -> NuClass {
        self.q
            .iter()
            .map(|p| p.kind.nu_class())
            .find(|c| *c != NuClass::Zero)
            .unwrap_or(NuClass::Zero)
    }

    /// The λ shared by the non-rational profiles (1 when there are none).
    pub fn lambda(&self) -> f64 {
        self.q
            .iter()
            .find(|p| !matches!(p.kind, ProfileKind::NegReciprocal | ProfileKind::Zero))
            .map(|p| p.lambda)
            .unwrap_or(1.0)
    }

    pub fn q(&self, x: f64) -> Hermitian3 {
        Hermitian3::from_diagonal([self.q[0].value(x), self.q[1].value(x), self.q[2].value(x)])
    }

    pub fn q_prime(&self, x: f64) -> Hermitian3 {
        Hermitian3::from_diagonal([
            self.q[0].derivative(x),
            self.q[1].derivative(x),
            self.q[2].derivative(x),
        ])
    }

    pub fn p(&self, x: f64) -> Result<Hermitian3> {
        let mut acc = Hermitian3::zero();
        for t in &self.p {
            acc = acc + t.matrix.scale(t.coeff * t.envelope.value(x)?);
        }
        Ok(acc)
    }

    pub fn p_prime(&self, x: f64) -> Result<Hermitian3> {
        let mut acc = Hermitian3::zero();
        for t in &self.p {
            acc = acc + t.matrix.scale(t.coeff * t.envelope.derivative(x)?);
        }
        Ok(acc)
    }

    /// `W_k(x) = kQ(x) + P(x) + R/k`.
    pub fn w(&self, k: f64, x: f64) -> Result<Hermitian3> {
        check_k(k)?;
        Ok(self.q(x).scale(k) + self.p(x)? + self.r.scale(1.0 / k))
    }

    /// `W_k'(x) = kQ'(x) + P'(x)`.
    pub fn w_prime(&self, k: f64, x: f64) -> Result<Hermitian3> {
        check_k(k)?;
        Ok(self.q_prime(x).scale(k) + self.p_prime(x)?)
    }

    /// Poles of all profiles and envelope factors in `[lo, hi]`, sorted and deduplicated.
    pub fn singularities(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut s: Vec<f64> = self
            .q
            .iter()
            .flat_map(|p| p.singularities(lo, hi))
            .chain(self.p.iter().flat_map(|t| t.envelope.singularities(lo, hi)))
            .collect();
        s.sort_by(f64::total_cmp);
        s.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(1.0));
        s
    }

    /// Conjugation of every part by the permutation matrix relabeling component `i` as `perm[i]`'s.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        Self {
            q: [self.q[perm[0]], self.q[perm[1]], self.q[perm[2]]],
            p: self
                .p
                .iter()
                .map(|t| PTerm {
                    matrix: t.matrix.permuted(perm),
                    ..t.clone()
                })
                .collect(),
            r: self.r.permuted(perm),
            nu: self.nu,
            omega: self.omega,
        }
    }
}

pub(crate) fn check_k(k: f64) -> Result<()> {
    if k == 0.0 || !k.is_finite() {
        return Err(Error::Argument(format!("k must be finite and nonzero, got {k}")));
    }
    Ok(())
}

fn common_nu(q: &[ScalarProfile; 3]) -> Result<f64> {
    let mut nu: Option<f64> = None;
    let mut class: Option<NuClass> = None;
    for p in q {
        // Zero is compatible with the ν = 0 rational family only, but a lone
        // Zero next to hyperbolic entries never occurs in the catalog; treat it as ν-neutral.
        if p.kind == ProfileKind::Zero {
            continue;
        }
        let c = p.kind.nu_class();
        let v = p.nu();
        match (class, nu) {
            (Some(c0), Some(v0)) if c0 != c || (v0 - v).abs() > 1e-12 * v0.abs().max(1.0) => {
                return Err(Error::Argument(format!(
                    "diagonal profiles disagree on ν ({c0} vs {c})"
                )));
            }
            _ => {
                class = Some(c);
                nu = Some(v);
            }
        }
    }
    Ok(nu.unwrap_or(0.0))
}
