use std::io::Write;

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::Domain;
use crate::error::{Error, Result};

pub type Vector3c = Vector3<Complex64>;

/// `n` equally spaced interior points of the domain; the endpoints carry the Dirichlet zeros.
pub fn uniform_grid(domain: &Domain, n: usize) -> Vec<f64> {
    let h = domain.width() / (n + 1) as f64;
    (1..=n).map(|i| domain.a + i as f64 * h).collect()
}

/// Samples of a 3-component wave function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunction3 {
    pub xs: Vec<f64>,
    pub values: Vec<Vector3c>,
    pub normalized: bool,
}

fn trapezoid(xs: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    xs.windows(2)
        .enumerate()
        .map(|(i, w)| 0.5 * (w[1] - w[0]) * (f(i) + f(i + 1)))
        .sum()
}

impl GridFunction3 {
    pub fn new(xs: Vec<f64>, values: Vec<Vector3c>) -> Result<Self> {
        if xs.len() != values.len() {
            return Err(Error::Argument(format!(
                "{} samples for {} points",
                values.len(),
                xs.len()
            )));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Argument("grid must be strictly increasing".into()));
        }
        if values.iter().flat_map(|v| v.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric("wave function has non-finite samples".into()));
        }
        Ok(Self {
            xs,
            values,
            normalized: false,
        })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Trapezoid `⟨self, other⟩ = ∫ self† other`.
    pub fn inner(&self, other: &GridFunction3) -> Complex64 {
        let re = trapezoid(&self.xs, |i| self.values[i].dotc(&other.values[i]).re);
        let im = trapezoid(&self.xs, |i| self.values[i].dotc(&other.values[i]).im);
        Complex64::new(re, im)
    }

    pub fn norm(&self) -> f64 {
        trapezoid(&self.xs, |i| self.values[i].norm_squared()).sqrt()
    }

    pub fn max_amplitude(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Numeric(format!("cannot normalize state of norm {n}")));
        }
        for v in &mut self.values {
            *v /= Complex64::from(n);
        }
        self.normalized = true;
        Ok(())
    }

    /// CSV with columns `x, re1, im1, re2, im2, re3, im3`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "re1", "im1", "re2", "im2", "re3", "im3"])?;
        for (x, v) in self.xs.iter().zip(&self.values) {
            let mut rec = vec![x.to_string()];
            for z in v.iter() {
                rec.push(z.re.to_string());
                rec.push(z.im.to_string());
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::EndKind;

    #[test]
    fn normalization_and_csv() {
        let d = Domain {
            a: 0.0,
            b: std::f64::consts::PI,
            left: EndKind::Fixed,
            right: EndKind::Fixed,
        };
        let xs = uniform_grid(&d, 400);
        let values = xs
            .iter()
            .map(|x| Vector3c::new(Complex64::new(x.sin(), 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)))
            .collect();
        let mut f = GridFunction3::new(xs, values).unwrap();
        assert!((f.norm() - (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-4);
        f.normalize().unwrap();
        assert!((f.norm() - 1.0).abs() < 1e-12);
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,re1,im1,re2,im2,re3,im3\n"));
        assert_eq!(text.lines().count(), 401);
    }

    #[test]
    fn rejects_mismatched_lengths() {
        assert!(GridFunction3::new(vec![0.0, 1.0], vec![Vector3c::zeros()]).is_err());
    }
}
