use serde::{Deserialize, Serialize};

use super::envelope::{EnvFactor, Envelope};
use super::forms::{self, Coef, Env, Fac, GammaPattern, Mat, PFormula, QForm, RForm, P_BLOCKS};
use super::profile::{NuClass, ScalarProfile};
use super::superpotential::{PTerm, Superpotential};
use crate::error::{Error, Result};
use crate::hermitian::e;

/// One (P, Q, R) pairing with all of its sign choices fixed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    /// `"P.block{b}.{i}"`.
    pub p_form: String,
    pub p_block: usize,
    pub p_index: usize,
    /// `"Q.tan"`, `"Q.h5"`, ...
    pub q_form: String,
    /// Sign of the `±λ` diagonal slots, when the Q form has them.
    pub q_sign: Option<i8>,
    pub gamma_pattern: GammaPattern,
    /// `"R.11"`, ...
    pub r_form: String,
    pub r_signs: Vec<i8>,
    pub nu_class: NuClass,
}

impl CatalogEntry {
    pub fn q(&self) -> QForm {
        QForm::from_short(self.q_form.trim_start_matches("Q.")).expect("catalog q id")
    }

    pub fn r(&self) -> RForm {
        RForm::from_number(self.r_form.trim_start_matches("R.")).expect("catalog r id")
    }

    pub(crate) fn p_formula(&self) -> &'static PFormula {
        &forms::block(self.p_block).expect("catalog block").formulas[self.p_index - 1]
    }

    /// Whether this is one of the ν = λ² (tangent) families.
    pub fn is_tan_family(&self) -> bool {
        self.nu_class == NuClass::PlusLambdaSq
    }

    pub fn q_formula(&self) -> String {
        let s = self.q().formula();
        match self.q_sign {
            Some(1) => s.replace('±', ""),
            Some(_) => s.replace('±', "−"),
            None => s,
        }
    }

    pub fn r_formula(&self) -> String {
        self.r().formula().to_string()
    }

    pub fn p_formula_text(&self) -> String {
        let e8 = if self.r() == RForm::R21 { self.r_signs[1] } else { 1 };
        forms::p_text(self.p_formula(), self.q_sign.unwrap_or(1), e8)
    }

    /// Parameter constraints in words.
    pub fn constraints(&self) -> Vec<String> {
        let mut c = vec!["p ≠ 0".to_string(), "ω > 0".to_string()];
        if !matches!(self.nu_class, NuClass::Zero) {
            c.push("λ > 0".into());
        }
        if self.r().uses_r_eps() {
            c.push("r² + ε² = ω²".into());
        }
        c.push(match self.gamma_pattern {
            GammaPattern::AllDistinct => "γ₁, γ₂, γ₃ distinct".into(),
            GammaPattern::FirstTwoEqual => "γ₁ = γ₂ ≠ γ₃".into(),
        });
        c
    }
}

fn sign_char(s: i8) -> char {
    if s > 0 {
        'p'
    } else {
        'm'
    }
}

fn make_id(block: usize, index: usize, q: QForm, q_sign: Option<i8>, pattern: GammaPattern, r: RForm, r_signs: &[i8]) -> String {
    let qs = q_sign.map(sign_char).map(String::from).unwrap_or_default();
    let rs: String = r_signs.iter().map(|s| sign_char(*s)).collect();
    format!(
        "P.b{block}.{index:02}+Q.{}{qs}.{}+R.{}{rs}",
        q.short(),
        pattern.tag(),
        r.number()
    )
}

/// Every catalog pairing, one entry per sign variant, sorted by id.
pub fn enumerate_catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for b in &P_BLOCKS {
        for (i, (formula, &q)) in b.formulas.iter().zip(b.q_forms).enumerate() {
            let index = i + 1;
            let q_signs: Vec<Option<i8>> = if !q.has_sign() {
                vec![None]
            } else if formula.plus_only {
                vec![Some(1)]
            } else {
                vec![Some(1), Some(-1)]
            };
            let r_signs: Vec<Vec<i8>> = if b.r_form.sign_count() == 2 {
                vec![vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]]
            } else {
                vec![vec![1], vec![-1]]
            };
            let nu_class = q
                .kinds(1)
                .iter()
                .map(|k| k.nu_class())
                .find(|c| *c != NuClass::Zero)
                .unwrap_or(NuClass::Zero);
            for qs in &q_signs {
                for rs in &r_signs {
                    out.push(CatalogEntry {
                        id: make_id(b.number, index, q, *qs, b.pattern, b.r_form, rs),
                        p_form: format!("P.block{}.{index}", b.number),
                        p_block: b.number,
                        p_index: index,
                        q_form: q.id(),
                        q_sign: *qs,
                        gamma_pattern: b.pattern,
                        r_form: b.r_form.id(),
                        r_signs: rs.clone(),
                        nu_class,
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

/// Looks an entry up by its full id.
pub fn find_entry(id: &str) -> Result<CatalogEntry> {
    enumerate_catalog()
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownId(id.to_string()))
}

/// Number of distinct P formulas, ignoring sign variants.
pub fn formula_count(entries: &[CatalogEntry]) -> usize {
    let mut ids: Vec<&str> = entries.iter().map(|e| e.p_form.as_str()).collect();
    ids.sort_unstable();
    ids.dedup();
    ids.len()
}

/// Numeric constants bound to a catalog entry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceParams {
    pub lambda: f64,
    pub gammas: [f64; 3],
    pub p: f64,
    pub phi: f64,
    pub omega: f64,
    pub r: f64,
    pub eps: f64,
}

impl InstanceParams {
    /// Generic defaults avoiding accidental symmetries.
    pub fn defaults(pattern: GammaPattern) -> Self {
        let gammas = match pattern {
            GammaPattern::AllDistinct => [0.0, 0.7, 1.3],
            GammaPattern::FirstTwoEqual => [0.0, 0.0, 1.0],
        };
        InstanceParams {
            lambda: 1.0,
            gammas,
            p: 1.0,
            phi: 0.5,
            omega: 1.0,
            r: 0.6,
            eps: 0.8,
        }
    }

    pub fn defaults_for(entry: &CatalogEntry) -> Self {
        Self::defaults(entry.gamma_pattern)
    }
}

const R_EPS_TOLERANCE: f64 = 1e-12;

/// Checks the constraints of `entry` against `params`.
pub fn validate(entry: &CatalogEntry, params: &InstanceParams) -> Result<()> {
    let all = [
        params.lambda,
        params.p,
        params.phi,
        params.omega,
        params.r,
        params.eps,
    ];
    if all.iter().chain(params.gammas.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Argument("parameters must be finite".into()));
    }
    if params.p == 0.0 {
        return Err(Error::Argument("p must be nonzero".into()));
    }
    if !(params.omega > 0.0) {
        return Err(Error::Argument(format!("ω must be > 0, got {}", params.omega)));
    }
    if entry.nu_class != NuClass::Zero && !(params.lambda > 0.0) {
        return Err(Error::Argument(format!("λ must be > 0, got {}", params.lambda)));
    }
    if entry.r().uses_r_eps() {
        let defect = params.r * params.r + params.eps * params.eps - params.omega * params.omega;
        if defect.abs() > R_EPS_TOLERANCE * params.omega.powi(2).max(1.0) {
            return Err(Error::Argument(format!(
                "r² + ε² = ω² violated by {defect:e} (r = {}, ε = {}, ω = {})",
                params.r, params.eps, params.omega
            )));
        }
    }
    if entry.gamma_pattern == GammaPattern::FirstTwoEqual && params.gammas[0] != params.gammas[1] {
        return Err(Error::Argument(format!(
            "{} needs γ₁ = γ₂, got {} and {}",
            entry.id, params.gammas[0], params.gammas[1]
        )));
    }
    Ok(())
}

/// Builds the superpotential parts after validating `params`.
pub fn compile(entry: &CatalogEntry, params: &InstanceParams) -> Result<Superpotential> {
    validate(entry, params)?;
    compile_unchecked(entry, params)
}

/// Builds the parts without the constraint checks (for negative controls).
pub fn compile_unchecked(entry: &CatalogEntry, params: &InstanceParams) -> Result<Superpotential> {
    let q_sign = entry.q_sign.unwrap_or(1);
    let kinds = entry.q().kinds(q_sign);
    let mut q = Vec::with_capacity(3);
    for (i, kind) in kinds.iter().enumerate() {
        q.push(ScalarProfile::new(*kind, params.lambda, params.gammas[i])?);
    }
    let q: [ScalarProfile; 3] = [q[0], q[1], q[2]];

    let e8_sign = if entry.r() == RForm::R21 { entry.r_signs[1] } else { 1 };
    let p = entry
        .p_formula()
        .terms
        .iter()
        .map(|term| {
            let coeff = match term.coef {
                Coef::Phi => params.phi,
                Coef::P => params.p,
            };
            let matrix = match term.mat {
                Mat::E(i) => e(i),
                Mat::E4E6 => e(4) - f64::from(e8_sign) * e(6),
            };
            let fac = |f: &Fac| match *f {
                Fac::Sec(i) => EnvFactor::Sec(params.gammas[i - 1]),
                Fac::Sech(i) => EnvFactor::Sech(params.gammas[i - 1]),
                Fac::Csch(i) => EnvFactor::Csch(params.gammas[i - 1]),
                Fac::Inv(i) => EnvFactor::Inverse(params.gammas[i - 1]),
                Fac::ExpQ => EnvFactor::Exp(q_sign),
                Fac::ExpPlus => EnvFactor::Exp(1),
                Fac::ExpMinus => EnvFactor::Exp(-1),
            };
            let (factors, root) = match term.env {
                Env::One => (Vec::new(), false),
                Env::Sq(fs) => (fs.iter().map(fac).collect(), true),
                Env::Lin(fs) => (fs.iter().map(fac).collect(), false),
            };
            PTerm {
                coeff,
                matrix,
                envelope: Envelope {
                    lambda: params.lambda,
                    factors,
                    root,
                },
            }
        })
        .collect();

    let r = entry
        .r()
        .build(params.omega, params.r, params.eps, &entry.r_signs)?;
    Superpotential::new(q, p, r, params.omega)
}
