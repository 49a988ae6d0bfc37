use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{digits, dim, index_of};
use crate::error::{Error, Result};

/// Amplitudes on `C^{d^m}` in row-major digit order.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub d: u32,
    pub m: usize,
    pub amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(d: u32, m: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != dim(d, m) {
            return Err(Error::Dimension(format!(
                "{} amplitudes for {m} wires of order {d}",
                amplitudes.len()
            )));
        }
        Ok(StateVector { d, m, amplitudes })
    }

    pub fn zeros(d: u32, m: usize) -> Self {
        StateVector {
            d,
            m,
            amplitudes: vec![C64::new(0.0, 0.0); dim(d, m)],
        }
    }

    pub fn basis(d: u32, m: usize, labels: &[u32]) -> Result<Self> {
        if labels.len() != m || labels.iter().any(|&l| l >= d) {
            return Err(Error::Range(format!(
                "basis labels {labels:?} for d={d}, m={m}"
            )));
        }
        let mut s = Self::zeros(d, m);
        s.amplitudes[index_of(labels, d)] = C64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn labels_of(&self, index: usize) -> Vec<u32> {
        digits(index, self.d, self.m)
    }

    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::Dimension(format!(
                "inner product of lengths {} and {}",
                self.amplitudes.len(),
                other.amplitudes.len()
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalized(&self) -> StateVector {
        let n = self.norm();
        StateVector {
            amplitudes: self.amplitudes.iter().map(|a| a / n).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, s: C64) -> StateVector {
        StateVector {
            amplitudes: self.amplitudes.iter().map(|a| a * s).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &StateVector) -> Result<StateVector> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension("state sum of different lengths".into()));
        }
        Ok(StateVector {
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
            ..self.clone()
        })
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(
                "state comparison of different lengths".into(),
            ));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Tensor product, `self` on the leftmost wires.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        StateVector {
            d: self.d,
            m: self.m + other.m,
            amplitudes: amps,
        }
    }

    /// Amplitudes as `[re, im]` pairs.
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.amplitudes.iter().map(|a| [a.re, a.im]).collect()
    }

    pub fn from_pairs(d: u32, m: usize, pairs: &[[f64; 2]]) -> Result<Self> {
        Self::new(d, m, pairs.iter().map(|p| C64::new(p[0], p[1])).collect())
    }
}

/// Serialized state: order, wire count and `[re, im]` amplitudes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDoc {
    pub amplitudes: Vec<[f64; 2]>,
    pub d: u32,
    pub m: usize,
}

impl From<&StateVector> for StateDoc {
    fn from(s: &StateVector) -> Self {
        StateDoc {
            amplitudes: s.to_pairs(),
            d: s.d,
            m: s.m,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_orthonormal() {
        let a = StateVector::basis(3, 2, &[1, 2]).unwrap();
        let b = StateVector::basis(3, 2, &[2, 1]).unwrap();
        assert_eq!(a.inner(&a).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(a.inner(&b).unwrap(), C64::new(0.0, 0.0));
        assert!(StateVector::basis(3, 2, &[3, 0]).is_err());
    }

    #[test]
    fn pair_round_trip() {
        let s = StateVector::new(2, 1, vec![C64::new(0.5, -0.5), C64::new(0.0, 1.0)]).unwrap();
        let back = StateVector::from_pairs(2, 1, &s.to_pairs()).unwrap();
        assert_eq!(back, s);
    }
}
