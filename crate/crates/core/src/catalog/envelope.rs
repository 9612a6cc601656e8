use serde::{Deserialize, Serialize};

use super::profile::tan_poles;
use crate::error::{Error, Result};

/// Scalar factor of a `P` envelope. Trigonometric/hyperbolic arguments are `λx + γ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum EnvFactor {
    Sec(f64),
    Sech(f64),
    Csch(f64),
    /// `exp(±λx)` with the given sign.
    Exp(i8),
    /// `1/(x + γ)`.
    Inverse(f64),
}

impl EnvFactor {
    fn value_and_derivative(&self, lambda: f64, x: f64) -> (f64, f64) {
        match *self {
            EnvFactor::Sec(g) => {
                let u = lambda * x + g;
                let s = 1.0 / u.cos();
                (s, lambda * s * u.tan())
            }
            EnvFactor::Sech(g) => {
                let u = lambda * x + g;
                let s = 1.0 / u.cosh();
                (s, -lambda * s * u.tanh())
            }
            EnvFactor::Csch(g) => {
                let u = lambda * x + g;
                let s = 1.0 / u.sinh();
                (s, -lambda * s / u.tanh())
            }
            EnvFactor::Exp(sign) => {
                let rate = f64::from(sign) * lambda;
                let v = (rate * x).exp();
                (v, rate * v)
            }
            EnvFactor::Inverse(g) => {
                let v = 1.0 / (x + g);
                (v, -v * v)
            }
        }
    }

    fn singularities(&self, lambda: f64, lo: f64, hi: f64) -> Vec<f64> {
        let pole = match *self {
            EnvFactor::Sec(g) => return tan_poles(lambda, g, lo, hi),
            EnvFactor::Csch(g) => -g / lambda,
            EnvFactor::Inverse(g) => -g,
            EnvFactor::Sech(_) | EnvFactor::Exp(_) => return Vec::new(),
        };
        if pole >= lo && pole <= hi {
            vec![pole]
        } else {
            Vec::new()
        }
    }
}

/// Product of factors, optionally under a square root: `(Π f_i)^{1/2}` or `Π f_i`.
///
/// The empty product is the constant 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub lambda: f64,
    pub factors: Vec<EnvFactor>,
    pub root: bool,
}

impl Envelope {
    pub fn constant() -> Self {
        Envelope {
            lambda: 1.0,
            factors: Vec::new(),
            root: false,
        }
    }

    fn product(&self, x: f64) -> (f64, f64) {
        // (Π f, d/dx Π f) by the product rule
        let mut value = 1.0;
        let mut deriv = 0.0;
        for f in &self.factors {
            let (v, d) = f.value_and_derivative(self.lambda, x);
            deriv = deriv * v + value * d;
            value *= v;
        }
        (value, deriv)
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        let (v, _) = self.product(x);
        self.finish(v, x)
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        let (v, d) = self.product(x);
        let outer = self.finish(v, x)?;
        Ok(if self.root { 0.5 * d / outer } else { d })
    }

    fn finish(&self, v: f64, x: f64) -> Result<f64> {
        if !v.is_finite() {
            return Err(Error::Domain(format!("envelope not finite at x = {x}")));
        }
        if self.root {
            if v <= 0.0 {
                return Err(Error::Domain(format!(
                    "square-root envelope has nonpositive radicand {v:e} at x = {x}"
                )));
            }
            Ok(v.sqrt())
        } else {
            Ok(v)
        }
    }

    pub fn singularities(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.factors
            .iter()
            .flat_map(|f| f.singularities(self.lambda, lo, hi))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(factors: Vec<EnvFactor>, root: bool) -> Envelope {
        Envelope {
            lambda: 1.3,
            factors,
            root,
        }
    }

    #[test]
    fn closed_form_derivative_matches_central_difference() {
        let cases = [
            env(vec![EnvFactor::Sec(0.1), EnvFactor::Sec(0.4)], true),
            env(vec![EnvFactor::Sech(0.1), EnvFactor::Csch(0.9)], true),
            env(vec![EnvFactor::Exp(-1), EnvFactor::Csch(0.9)], true),
            env(vec![EnvFactor::Exp(1)], false),
            env(vec![EnvFactor::Inverse(0.7), EnvFactor::Inverse(1.3)], true),
            env(vec![EnvFactor::Inverse(0.7)], true),
            env(vec![EnvFactor::Csch(0.2)], false),
        ];
        let x = 0.3;
        let h = 1e-5;
        for e in &cases {
            let fd = (e.value(x + h).unwrap() - e.value(x - h).unwrap()) / (2.0 * h);
            let d = e.derivative(x).unwrap();
            assert!((fd - d).abs() < 1e-8 * d.abs().max(1.0), "{e:?}: {fd} vs {d}");
        }
    }

    #[test]
    fn constant_envelope() {
        let c = Envelope::constant();
        assert_eq!(c.value(3.0).unwrap(), 1.0);
        assert_eq!(c.derivative(3.0).unwrap(), 0.0);
    }

    #[test]
    fn negative_radicand_is_a_domain_error() {
        // csch(λx + γ) < 0 left of its pole
        let e = env(vec![EnvFactor::Csch(0.0)], true);
        assert!(matches!(e.value(-1.0), Err(Error::Domain(_))));
        assert!(e.value(1.0).is_ok());
    }

    #[test]
    fn singularities_of_factors() {
        let e = Envelope {
            lambda: 1.0,
            factors: vec![EnvFactor::Csch(0.5), EnvFactor::Inverse(2.0), EnvFactor::Sech(0.0)],
            root: true,
        };
        let mut s = e.singularities(-5.0, 5.0);
        s.sort_by(f64::total_cmp);
        assert_eq!(s, vec![-2.0, -0.5]);
    }
}
