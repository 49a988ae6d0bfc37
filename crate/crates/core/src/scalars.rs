//! Roots of unity, the circle constant δ and the Gauss-sum phase ω.
//!
//! Every phase that appears in the algebra, the braid and the diagram
//! calculus is a power of ζ, a power of δ = √d, or a residual complex factor.
//! [`ExactScalar`] keeps the first two as integer exponents so they compose
//! without rounding.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numeric constants attached to a given order `d`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootData {
    pub d: u32,
    pub zeta: C64,
    pub q: C64,
    pub delta: f64,
    pub omega: C64,
    pub omega_sqrt: C64,
}

/// Builds the constants for order `d`.
pub fn make_roots(d: u32) -> Result<RootData> {
    RootData::new(d)
}

/// Numerator `t` of ζ = exp(iπ t / d).
fn zeta_numerator(d: u32) -> u64 {
    if d.is_multiple_of(2) {
        1
    } else {
        d as u64 + 1
    }
}

/// exp(iπ·k/d) for an exact integer k, reduced mod 2d before the float step.
fn half_turns(k: i64, d: u32) -> C64 {
    let r = k.rem_euclid(2 * d as i64);
    C64::from_polar(1.0, PI * r as f64 / d as f64)
}

/// ζ^e for order `d`, reduced exactly before evaluation.
pub fn zeta_pow(d: u32, e: i64) -> C64 {
    let t = zeta_numerator(d) as i64;
    half_turns((t * e.rem_euclid(2 * d as i64)).rem_euclid(2 * d as i64), d)
}

/// q^e = ζ^{2e}.
pub fn q_pow(d: u32, e: i64) -> C64 {
    half_turns(2 * e.rem_euclid(d as i64), d)
}

impl RootData {
    pub fn new(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!(
                "order d must be at least 2, got {d}"
            )));
        }
        let zeta = zeta_pow(d, 1);
        let q = q_pow(d, 1);
        let delta = (d as f64).sqrt();
        let gauss: C64 = (0..d as i64).map(|j| zeta_pow(d, j * j)).sum();
        let omega = gauss / delta;
        let omega_sqrt = omega.sqrt();
        Ok(RootData {
            d,
            zeta,
            q,
            delta,
            omega,
            omega_sqrt,
        })
    }

    pub fn zeta_pow(&self, e: i64) -> C64 {
        zeta_pow(self.d, e)
    }

    pub fn q_pow(&self, e: i64) -> C64 {
        q_pow(self.d, e)
    }

    pub fn delta_pow(&self, e: i32) -> f64 {
        delta_pow(self.d, e)
    }

    /// ω^{s/2} for a signed half-integer exponent `s/2`.
    pub fn omega_half_pow(&self, s: i32) -> C64 {
        self.omega_sqrt.powi(s)
    }
}

/// δ^e = d^{e/2}, computed with integer powers of d where possible.
pub fn delta_pow(d: u32, e: i32) -> f64 {
    let whole = (d as f64).powi(e.div_euclid(2));
    if e.rem_euclid(2) == 1 {
        whole * (d as f64).sqrt()
    } else {
        whole
    }
}

/// ζ^a · δ^b · c with exact integer exponents.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactScalar {
    pub d: u32,
    pub zeta_exp: u32,
    pub delta_exp: i32,
    pub coeff: C64,
}

impl ExactScalar {
    pub fn new(d: u32, zeta_exp: i64, delta_exp: i32, coeff: C64) -> Self {
        let modulus = (d as i64) * (d as i64);
        ExactScalar {
            d,
            zeta_exp: zeta_exp.rem_euclid(modulus) as u32,
            delta_exp,
            coeff,
        }
    }

    pub fn one(d: u32) -> Self {
        Self::new(d, 0, 0, C64::new(1.0, 0.0))
    }

    pub fn zero(d: u32) -> Self {
        Self::new(d, 0, 0, C64::new(0.0, 0.0))
    }

    pub fn zeta(d: u32, e: i64) -> Self {
        Self::new(d, e, 0, C64::new(1.0, 0.0))
    }

    pub fn q(d: u32, e: i64) -> Self {
        Self::new(d, 2 * e, 0, C64::new(1.0, 0.0))
    }

    pub fn delta(d: u32, e: i32) -> Self {
        Self::new(d, 0, e, C64::new(1.0, 0.0))
    }

    pub fn complex(d: u32, c: C64) -> Self {
        Self::new(d, 0, 0, c)
    }

    pub fn value(&self) -> C64 {
        self.coeff * zeta_pow(self.d, self.zeta_exp as i64) * delta_pow(self.d, self.delta_exp)
    }

    pub fn conj(&self) -> Self {
        Self::new(
            self.d,
            -(self.zeta_exp as i64),
            self.delta_exp,
            self.coeff.conj(),
        )
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.value().norm() <= tol
    }

    pub fn is_one(&self) -> bool {
        self.zeta_exp == 0 && self.delta_exp == 0 && self.coeff == C64::new(1.0, 0.0)
    }

    /// Folds the exponents of `self` relative to `base` into a plain complex
    /// factor, so that `base.with_coeff(c)` evaluates to `self`.
    pub fn relative_to(&self, base: &ExactScalar) -> C64 {
        let dz = self.zeta_exp as i64 - base.zeta_exp as i64;
        let dd = self.delta_exp - base.delta_exp;
        self.coeff * zeta_pow(self.d, dz) * delta_pow(self.d, dd)
    }

    /// Sum of two scalars, keeping the exponents of `self`.
    pub fn add(&self, other: &ExactScalar) -> ExactScalar {
        assert_eq!(self.d, other.d, "scalar order mismatch");
        ExactScalar {
            coeff: self.coeff + other.relative_to(self),
            ..*self
        }
    }

    pub fn scale(&self, c: C64) -> ExactScalar {
        ExactScalar {
            coeff: self.coeff * c,
            ..*self
        }
    }
}

/// Evaluates `s` with precomputed roots.
pub fn scalar_eval(s: &ExactScalar, r: &RootData) -> Result<C64> {
    if s.d != r.d {
        return Err(Error::Domain(format!(
            "scalar of order {} evaluated with roots of order {}",
            s.d, r.d
        )));
    }
    Ok(s.coeff * r.zeta_pow(s.zeta_exp as i64) * r.delta_pow(s.delta_exp))
}

impl Mul for ExactScalar {
    type Output = ExactScalar;

    fn mul(self, rhs: ExactScalar) -> ExactScalar {
        assert_eq!(self.d, rhs.d, "scalar order mismatch");
        ExactScalar::new(
            self.d,
            self.zeta_exp as i64 + rhs.zeta_exp as i64,
            self.delta_exp + rhs.delta_exp,
            self.coeff * rhs.coeff,
        )
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.zeta_exp != 0 {
            if self.zeta_exp.is_multiple_of(2) {
                parts.push(format!("q^{}", self.zeta_exp / 2));
            } else {
                parts.push(format!("zeta^{}", self.zeta_exp));
            }
        }
        if self.delta_exp != 0 {
            parts.push(format!("delta^{}", self.delta_exp));
        }
        if (self.coeff - C64::new(1.0, 0.0)).norm() > 1e-12 {
            parts.push(format_rounded(self.coeff));
        } else if parts.is_empty() {
            parts.push("1".to_string());
        }
        write!(f, "{}", parts.join("·"))
    }
}

/// Renders a complex number as `(re+imi)` using shortest round-trip floats.
pub fn format_complex(c: C64) -> String {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("({}{}{}i)", c.re, sign, c.im.abs())
}

/// Renders a complex number to 12 significant digits, dropping parts below 1e-12.
pub fn format_rounded(c: C64) -> String {
    let r = |x: f64| -> f64 {
        if x.abs() < 1e-12 {
            0.0
        } else {
            format!("{x:.11e}").parse().unwrap_or(x)
        }
    };
    let (re, im) = (r(c.re), r(c.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => format!("{re}"),
        (true, false) => format!("{im}i"),
        _ => format!("({}{}{}i)", re, if im < 0.0 { '-' } else { '+' }, im.abs()),
    }
}

/// Serialized form `{zeta_exp, delta_exp, coeff: [re, im]}`; the order is
/// carried by the enclosing document.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarDoc {
    pub coeff: [f64; 2],
    pub delta_exp: i32,
    pub zeta_exp: i64,
}

impl From<&ExactScalar> for ScalarDoc {
    fn from(s: &ExactScalar) -> Self {
        ScalarDoc {
            coeff: [s.coeff.re, s.coeff.im],
            delta_exp: s.delta_exp,
            zeta_exp: s.zeta_exp as i64,
        }
    }
}

impl ScalarDoc {
    pub fn to_scalar(&self, d: u32) -> ExactScalar {
        ExactScalar::new(
            d,
            self.zeta_exp,
            self.delta_exp,
            C64::new(self.coeff[0], self.coeff[1]),
        )
    }
}
