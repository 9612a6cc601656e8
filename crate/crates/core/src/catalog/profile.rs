use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::envelope::EnvFactor;
use crate::error::{Error, Result};

/// Closed-form solutions of `q' = q² + ν` used on the diagonal of `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProfileKind {
    /// `λ tan(λx + γ)`, ν = λ².
    Tan,
    /// `−λ tanh(λx + γ)`, ν = −λ².
    NegTanh,
    /// `−λ coth(λx + γ)`, ν = −λ².
    NegCoth,
    /// `+λ`, ν = −λ².
    ConstPlus,
    /// `−λ`, ν = −λ².
    ConstMinus,
    /// `−1/(x + γ)`, ν = 0.
    NegReciprocal,
    /// `0`, ν = 0.
    Zero,
}

/// The three possible values of ν, as multiples of λ².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NuClass {
    #[serde(rename = "+lambda^2")]
    PlusLambdaSq,
    #[serde(rename = "-lambda^2")]
    MinusLambdaSq,
    #[serde(rename = "0")]
    Zero,
}

impl NuClass {
    pub fn value(self, lambda: f64) -> f64 {
        match self {
            NuClass::PlusLambdaSq => lambda * lambda,
            NuClass::MinusLambdaSq => -lambda * lambda,
            NuClass::Zero => 0.0,
        }
    }
}

impl fmt::Display for NuClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NuClass::PlusLambdaSq => "ν = λ²",
            NuClass::MinusLambdaSq => "ν = −λ²",
            NuClass::Zero => "ν = 0",
        })
    }
}

impl ProfileKind {
    pub fn nu_class(self) -> NuClass {
        match self {
            ProfileKind::Tan => NuClass::PlusLambdaSq,
            ProfileKind::NegTanh
            | ProfileKind::NegCoth
            | ProfileKind::ConstPlus
            | ProfileKind::ConstMinus => NuClass::MinusLambdaSq,
            ProfileKind::NegReciprocal | ProfileKind::Zero => NuClass::Zero,
        }
    }

    fn uses_lambda(self) -> bool {
        !matches!(self, ProfileKind::NegReciprocal | ProfileKind::Zero)
    }

    pub fn uses_gamma(self) -> bool {
        matches!(
            self,
            ProfileKind::Tan | ProfileKind::NegTanh | ProfileKind::NegCoth | ProfileKind::NegReciprocal
        )
    }
}

/// One diagonal entry `q_i(x)` of `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarProfile {
    pub kind: ProfileKind,
    pub lambda: f64,
    pub gamma: f64,
}

impl ScalarProfile {
    pub fn new(kind: ProfileKind, lambda: f64, gamma: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::Argument("profile γ must be finite".into()));
        }
        if kind.uses_lambda() && !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Argument(format!(
                "profile {kind:?} needs λ > 0, got {lambda}"
            )));
        }
        Ok(Self { kind, lambda, gamma })
    }

    #[inline]
    fn arg(&self, x: f64) -> f64 {
        self.lambda * x + self.gamma
    }

    pub fn value(&self, x: f64) -> f64 {
        let l = self.lambda;
        match self.kind {
            ProfileKind::Tan => l * self.arg(x).tan(),
            ProfileKind::NegTanh => -l * self.arg(x).tanh(),
            ProfileKind::NegCoth => -l / self.arg(x).tanh(),
            ProfileKind::ConstPlus => l,
            ProfileKind::ConstMinus => -l,
            ProfileKind::NegReciprocal => -1.0 / (x + self.gamma),
            ProfileKind::Zero => 0.0,
        }
    }

    /// Closed-form `dq/dx`.
    pub fn derivative(&self, x: f64) -> f64 {
        let l2 = self.lambda * self.lambda;
        match self.kind {
            ProfileKind::Tan => {
                let c = self.arg(x).cos();
                l2 / (c * c)
            }
            ProfileKind::NegTanh => {
                let c = self.arg(x).cosh();
                -l2 / (c * c)
            }
            ProfileKind::NegCoth => {
                let s = self.arg(x).sinh();
                l2 / (s * s)
            }
            ProfileKind::ConstPlus | ProfileKind::ConstMinus | ProfileKind::Zero => 0.0,
            ProfileKind::NegReciprocal => {
                let d = x + self.gamma;
                1.0 / (d * d)
            }
        }
    }

    pub fn nu(&self) -> f64 {
        self.kind.nu_class().value(self.lambda)
    }

    /// Poles in the closed window `[lo, hi]`, ascending.
    pub fn singularities(&self, lo: f64, hi: f64) -> Vec<f64> {
        match self.kind {
            ProfileKind::Tan => tan_poles(self.lambda, self.gamma, lo, hi),
            ProfileKind::NegCoth => single_pole(-self.gamma / self.lambda, lo, hi),
            ProfileKind::NegReciprocal => single_pole(-self.gamma, lo, hi),
            _ => Vec::new(),
        }
    }

    /// The positive solution `f` of `f' = q f` (up to a constant), the building block of `P` envelopes.
    pub fn envelope_factor(&self) -> Option<EnvFactor> {
        match self.kind {
            ProfileKind::Tan => Some(EnvFactor::Sec(self.gamma)),
            ProfileKind::NegTanh => Some(EnvFactor::Sech(self.gamma)),
            ProfileKind::NegCoth => Some(EnvFactor::Csch(self.gamma)),
            ProfileKind::ConstPlus => Some(EnvFactor::Exp(1)),
            ProfileKind::ConstMinus => Some(EnvFactor::Exp(-1)),
            ProfileKind::NegReciprocal => Some(EnvFactor::Inverse(self.gamma)),
            ProfileKind::Zero => None,
        }
    }
}

/// Points `x` in `[lo, hi]` with `λx + γ = π/2 + nπ`.
pub(crate) fn tan_poles(lambda: f64, gamma: f64, lo: f64, hi: f64) -> Vec<f64> {
    let first = ((lambda * lo + gamma - PI / 2.0) / PI).ceil() as i64;
    let last = ((lambda * hi + gamma - PI / 2.0) / PI).floor() as i64;
    (first..=last)
        .map(|n| (PI / 2.0 + n as f64 * PI - gamma) / lambda)
        .filter(|x| *x >= lo && *x <= hi)
        .collect()
}

fn single_pole(x: f64, lo: f64, hi: f64) -> Vec<f64> {
    if x >= lo && x <= hi {
        vec![x]
    } else {
        Vec::new()
    }
}
