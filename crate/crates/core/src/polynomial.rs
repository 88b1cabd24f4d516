//! Polynomial nonlinearities with no constant or linear part.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_TERMS: usize = 256;

/// `c · x_1^{e_1} ⋯ x_d^{e_d}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub c: f64,
    pub e: Vec<u32>,
}

impl Term {
    pub fn degree(&self) -> u32 {
        self.e.iter().sum()
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.e
            .iter()
            .zip(x)
            .fold(self.c, |acc, (&k, &xi)| acc * xi.powi(k as i32))
    }
}

/// One list of terms per output component.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(into = "Vec<Vec<Term>>")]
pub struct PolynomialMap {
    dim: usize,
    components: Vec<Vec<Term>>,
}

impl From<PolynomialMap> for Vec<Vec<Term>> {
    fn from(p: PolynomialMap) -> Self {
        p.components
    }
}

impl PolynomialMap {
    pub fn new(dim: usize, components: Vec<Vec<Term>>) -> Result<Self> {
        if components.len() != dim {
            return Err(Error::InvalidInput(format!(
                "nonlinearity has {} components for dimension {dim}",
                components.len()
            )));
        }
        for (i, comp) in components.iter().enumerate() {
            if comp.len() > MAX_TERMS {
                return Err(Error::InvalidInput(format!(
                    "component {i} has {} terms (limit {MAX_TERMS})",
                    comp.len()
                )));
            }
            for t in comp {
                if t.e.len() != dim {
                    return Err(Error::InvalidInput(format!(
                        "term exponents {:?} do not match dimension {dim}",
                        t.e
                    )));
                }
                if !t.c.is_finite() {
                    return Err(Error::InvalidInput("non-finite coefficient".into()));
                }
                if t.degree() < 2 {
                    return Err(Error::InvalidInput(format!(
                        "term {:?} has degree {} < 2; constant and linear parts belong in A",
                        t.e,
                        t.degree()
                    )));
                }
            }
        }
        Ok(PolynomialMap { dim, components })
    }

    pub fn zero(dim: usize) -> Self {
        PolynomialMap { dim, components: vec![Vec::new(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Vec<Term>] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.iter().all(|t| t.c == 0.0))
    }

    pub fn eval(&self, x: &DVector<f64>) -> DVector<f64> {
        let xs = x.as_slice();
        DVector::from_iterator(
            self.dim,
            self.components
                .iter()
                .map(|comp| comp.iter().map(|t| t.eval(xs)).sum::<f64>()),
        )
    }

    /// Upper bound on the Lipschitz constant of `f` on the max-norm ball of
    /// radius `r`: max over components of Σ |c| · deg · r^{deg−1}.
    pub fn lipschitz_bound(&self, r: f64) -> f64 {
        self.components
            .iter()
            .map(|comp| {
                comp.iter()
                    .map(|t| {
                        let k = t.degree() as i32;
                        t.c.abs() * k as f64 * r.powi(k - 1)
                    })
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

pub fn lipschitz_bound(f: &PolynomialMap, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {r}")));
    }
    Ok(f.lipschitz_bound(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(c: f64, e: &[u32]) -> Term {
        Term { c, e: e.to_vec() }
    }

    #[test]
    fn square_bound() {
        let f = PolynomialMap::new(1, vec![vec![t(1.0, &[2])]]).unwrap();
        assert!((lipschitz_bound(&f, 0.1).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(lipschitz_bound(&PolynomialMap::zero(3), 0.7).unwrap(), 0.0);
    }

    #[test]
    fn product_bound_and_value() {
        let f = PolynomialMap::new(2, vec![vec![t(1.0, &[1, 1])], vec![]]).unwrap();
        assert_eq!(f.lipschitz_bound(0.5), 1.0);
        let v = f.eval(&DVector::from_vec(vec![3.0, -2.0]));
        assert_eq!(v.as_slice(), &[-6.0, 0.0]);
    }

    #[test]
    fn linear_terms_rejected() {
        assert!(PolynomialMap::new(1, vec![vec![t(1.0, &[1])]]).is_err());
        assert!(PolynomialMap::new(2, vec![vec![t(1.0, &[2])], vec![]]).is_err());
        assert!(PolynomialMap::new(1, vec![vec![]; 2]).is_err());
    }
}
