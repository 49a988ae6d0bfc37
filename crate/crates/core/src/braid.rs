//! The entangling braid `B = (ω^{-1/2}/√d) Σ_k c_{i+1}^{-k} c_i^k` and braid words.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::fock::{
    apply_local, digits, embed_local, index_of, represent, LinearOp, RepConfig, StateVector,
};
use crate::report::{Check, Report};
use crate::scalars::{q_pow, ExactScalar, RootData};

/// One letter `b_pos^{sign}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(usize, i8)", into = "(usize, i8)")]
pub struct Letter {
    pub pos: usize,
    pub sign: i8,
}

impl From<(usize, i8)> for Letter {
    fn from((pos, sign): (usize, i8)) -> Self {
        Letter { pos, sign }
    }
}

impl From<Letter> for (usize, i8) {
    fn from(l: Letter) -> Self {
        (l.pos, l.sign)
    }
}

/// A braid word on `m` strands; the first letter acts first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidWord {
    pub m: usize,
    pub letters: Vec<Letter>,
}

impl BraidWord {
    pub fn new(m: usize, letters: &[(usize, i8)]) -> Result<Self> {
        let letters: Vec<Letter> = letters.iter().map(|&l| l.into()).collect();
        for l in &letters {
            if l.pos == 0 || l.pos >= m || (l.sign != 1 && l.sign != -1) {
                return Err(Error::Range(format!(
                    "letter ({}, {}) on {m} strands",
                    l.pos, l.sign
                )));
            }
        }
        Ok(BraidWord { m, letters })
    }

    pub fn identity(m: usize) -> Self {
        BraidWord {
            m,
            letters: Vec::new(),
        }
    }

    pub fn inverse(&self) -> Self {
        BraidWord {
            m: self.m,
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    pos: l.pos,
                    sign: -l.sign,
                })
                .collect(),
        }
    }

    pub fn then(&self, other: &BraidWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord {
            m: self.m.max(other.m),
            letters,
        }
    }

    /// JSON form `[[i, sign], …]`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.letters).expect("letters serialize")
    }

    pub fn from_json(m: usize, text: &str) -> Result<Self> {
        let raw: Vec<(usize, i8)> = serde_json::from_str(text).map_err(|e| Error::Parse {
            position: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        Self::new(m, &raw)
    }
}

/// The two-wire braid from its basis action
/// `B|i₁,i₂⟩ = (ω^{-1/2}/√d) Σ_k q^{(k+i₁)k} |k+i₁, i₂−k⟩`; `sign = -1` gives the adjoint.
pub fn braid_local(roots: &RootData, sign: i8) -> LinearOp {
    let d = roots.d;
    let n = (d * d) as usize;
    let pref = roots.omega_half_pow(-1) / roots.delta;
    let b = LinearOp::from_fn(n, n, |col| {
        let ij = digits(col, d, 2);
        (0..d)
            .map(|k| {
                let a = (k + ij[0]) % d;
                let b = (ij[1] + d - k) % d;
                let phase = q_pow(d, ((k + ij[0]) * k) as i64);
                (index_of(&[a, b], d), pref * phase)
            })
            .collect()
    });
    if sign >= 0 {
        b
    } else {
        b.adjoint()
    }
}

/// `b_i^{sign}` on `cfg.m` wires.
pub fn braid_generator(i: usize, sign: i8, cfg: &RepConfig) -> Result<LinearOp> {
    if i == 0 || i >= cfg.m {
        return Err(Error::Range(format!(
            "braid position {i} on {} strands",
            cfg.m
        )));
    }
    embed_local(&braid_local(&cfg.roots, sign), cfg.d, cfg.m, i)
}

/// The braid as an algebra element: `(ω^{-1/2}/√d) Σ_k c_{i+1}^{-k} c_i^k`, or its
/// inverse `(ω^{1/2}/√d) Σ_k c_i^{-k} c_{i+1}^k`.
pub fn braid_element(i: usize, sign: i8, d: u32, m: usize) -> Result<AlgebraElement> {
    let roots = RootData::new(d)?;
    if i == 0 || i >= m {
        return Err(Error::Range(format!("braid position {i} on {m} strands")));
    }
    let pref = ExactScalar::new(d, 0, -1, roots.omega_half_pow(-(sign as i32)));
    let mut acc = AlgebraElement::zero(d, m);
    for k in 0..d as i64 {
        let term = if sign >= 0 {
            AlgebraElement::word(d, m, &[(i + 1, -k), (i, k)])?
        } else {
            AlgebraElement::word(d, m, &[(i, -k), (i + 1, k)])?
        };
        acc = acc.add(&term)?;
    }
    Ok(acc.scale(pref))
}

/// Deviation between the basis-action matrix and the algebraic form.
pub fn algebraic_form_defect(i: usize, sign: i8, cfg: &RepConfig) -> Result<f64> {
    let alg = represent(&braid_element(i, sign, cfg.d, cfg.m)?, cfg)?;
    alg.max_abs_diff(&braid_generator(i, sign, cfg)?)
}

/// Ordered product of the generators; the first letter acts first.
pub fn eval_word(w: &BraidWord, cfg: &RepConfig) -> Result<LinearOp> {
    let mut acc = LinearOp::identity(cfg.dim());
    for l in &w.letters {
        acc = braid_generator(l.pos, l.sign, cfg)?.mul(&acc)?;
    }
    Ok(acc)
}

/// Applies a word to a vector through local two-wire updates.
pub fn apply_word(w: &BraidWord, cfg: &RepConfig, v: &[C64]) -> Result<Vec<C64>> {
    let plus = braid_local(&cfg.roots, 1);
    let minus = braid_local(&cfg.roots, -1);
    let mut out = v.to_vec();
    for l in &w.letters {
        if l.pos == 0 || l.pos >= cfg.m {
            return Err(Error::Range(format!(
                "braid position {} on {} strands",
                l.pos, cfg.m
            )));
        }
        let local = if l.sign >= 0 { &plus } else { &minus };
        out = apply_local(local, cfg.d, cfg.m, l.pos, &out)?;
    }
    Ok(out)
}

/// Which way a label passes through a positive crossing.
pub const INTERTWINER_ORIENTATION: &str =
    "c_i^k below b_i equals c_{i+1}^k above b_i; inverse crossing carries c_{i+1}^k below to c_i^k above";

/// Checks `c_{i+1}^k b_i = b_i c_i^k` and `c_i^k b_i^{-1} = b_i^{-1} c_{i+1}^k` for all `i`, `k`.
pub fn qudit_braid_check(cfg: &RepConfig, tol: f64) -> Result<Report> {
    let mut report = Report::new("qudit-braid relation");
    report.note("orientation", INTERTWINER_ORIENTATION);
    for i in 1..cfg.m {
        let b = braid_generator(i, 1, cfg)?;
        let bi = braid_generator(i, -1, cfg)?;
        for k in 0..cfg.d as i64 {
            let ci = crate::fock::generator_power(i, k, cfg)?;
            let cj = crate::fock::generator_power(i + 1, k, cfg)?;
            let fwd = cj.mul(&b)?.max_abs_diff(&b.mul(&ci)?)?;
            let back = ci.mul(&bi)?.max_abs_diff(&bi.mul(&cj)?)?;
            report.push(Check::within(
                format!("c{}^{k} b{i} = b{i} c{i}^{k}", i + 1),
                fwd,
                tol,
            ));
            report.push(Check::within(
                format!("c{i}^{k} b{i}^-1 = b{i}^-1 c{}^{k}", i + 1),
                back,
                tol,
            ));
        }
    }
    Ok(report)
}

/// Singular values of the amplitude matrix split after `cut` wires, descending.
pub fn schmidt_spectrum(s: &StateVector, cut: usize, tol: f64) -> Result<Vec<f64>> {
    if cut == 0 || cut >= s.m {
        return Err(Error::Range(format!("cut {cut} on {} wires", s.m)));
    }
    let norm = s.norm();
    if (norm - 1.0).abs() > tol {
        return Err(Error::Domain(format!("state has norm {norm}, expected 1")));
    }
    let rows = (s.d as usize).pow(cut as u32);
    let cols = s.dim() / rows;
    let m = DMatrix::from_fn(rows, cols, |i, j| s.amplitudes[i * cols + j]);
    let mut sv: Vec<f64> = m
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(sv)
}

/// Von Neumann entropy of a Schmidt spectrum (natural log).
pub fn entanglement_entropy(spectrum: &[f64]) -> f64 {
    spectrum
        .iter()
        .map(|s| s * s)
        .filter(|p| *p > 1e-300)
        .map(|p| -p * p.ln())
        .sum()
}

pub fn schmidt_rank(spectrum: &[f64], tol: f64) -> usize {
    spectrum.iter().filter(|s| **s > tol).count()
}

/// True iff some product basis state is mapped to Schmidt rank above one.
pub fn is_entangling(g: &LinearOp, d: u32, tol: f64) -> Result<bool> {
    let n = (d * d) as usize;
    if g.rows != n || g.cols != n {
        return Err(Error::Dimension(format!("two-qudit gate must be {n}x{n}")));
    }
    if !g.is_unitary(tol.max(crate::fock::PRECONDITION_TOL)) {
        return Err(Error::Domain("gate is not unitary".into()));
    }
    for col in 0..n {
        let mut v = vec![C64::new(0.0, 0.0); n];
        v[col] = C64::new(1.0, 0.0);
        let out = StateVector::new(d, 2, g.apply(&v)?)?;
        if schmidt_rank(&schmidt_spectrum(&out, 1, tol)?, tol) > 1 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `|ij⟩ ↦ |ji⟩`.
pub fn swap_gate(d: u32) -> LinearOp {
    let n = (d * d) as usize;
    LinearOp::from_fn(n, n, |col| {
        let ij = digits(col, d, 2);
        vec![(index_of(&[ij[1], ij[0]], d), C64::new(1.0, 0.0))]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn amp(op: &LinearOp, d: u32, out: [u32; 2], inp: [u32; 2]) -> C64 {
        op.get(index_of(&out, d), index_of(&inp, d))
    }

    #[test]
    fn d2_basis_actions() {
        let r = RootData::new(2).unwrap();
        let b = braid_local(&r, 1);
        let p = C64::from_polar(1.0, -PI / 8.0) / 2f64.sqrt();
        let cases = [
            ([0, 0], [([0, 0], p), ([1, 1], -p)]),
            ([0, 1], [([0, 1], p), ([1, 0], -p)]),
            ([1, 0], [([1, 0], p), ([0, 1], p)]),
            ([1, 1], [([1, 1], p), ([0, 0], p)]),
        ];
        for (inp, outs) in cases {
            for (out, val) in outs {
                assert!(
                    (amp(&b, 2, out, inp) - val).norm() < 1e-12,
                    "{inp:?} -> {out:?}"
                );
            }
        }
    }

    #[test]
    fn d3_vacuum_action() {
        let r = RootData::new(3).unwrap();
        let b = braid_local(&r, 1);
        let p = r.omega_half_pow(-1) / 3f64.sqrt();
        assert!((amp(&b, 3, [0, 0], [0, 0]) - p).norm() < 1e-12);
        assert!((amp(&b, 3, [1, 2], [0, 0]) - p * r.q).norm() < 1e-12);
        assert!((amp(&b, 3, [2, 1], [0, 0]) - p * r.q).norm() < 1e-12);
    }

    #[test]
    fn algebraic_form() {
        for d in [2, 3, 5] {
            let cfg = RepConfig::new(d, 2).unwrap();
            assert!(algebraic_form_defect(1, 1, &cfg).unwrap() < 1e-12);
            assert!(algebraic_form_defect(1, -1, &cfg).unwrap() < 1e-12);
        }
    }

    #[test]
    fn word_examples() {
        let cfg = RepConfig::new(3, 3).unwrap();
        let id = LinearOp::identity(27);
        assert!(
            eval_word(&BraidWord::identity(3), &cfg)
                .unwrap()
                .max_abs_diff(&id)
                .unwrap()
                < 1e-15
        );
        let w = BraidWord::new(3, &[(1, 1), (1, -1)]).unwrap();
        assert!(eval_word(&w, &cfg).unwrap().max_abs_diff(&id).unwrap() < 1e-12);
        let l = BraidWord::new(3, &[(1, 1), (2, 1), (1, 1)]).unwrap();
        let r = BraidWord::new(3, &[(2, 1), (1, 1), (2, 1)]).unwrap();
        let dev = eval_word(&l, &cfg)
            .unwrap()
            .max_abs_diff(&eval_word(&r, &cfg).unwrap())
            .unwrap();
        assert!(dev < 1e-12);
        assert!(BraidWord::new(3, &[(3, 1)]).is_err());
    }

    #[test]
    fn word_json() {
        let w = BraidWord::new(4, &[(1, 1), (3, -1)]).unwrap();
        assert_eq!(w.to_json(), "[[1,1],[3,-1]]");
        assert_eq!(BraidWord::from_json(4, "[[1,1],[3,-1]]").unwrap(), w);
    }

    #[test]
    fn sparse_application_matches_matrix() {
        let cfg = RepConfig::new(3, 4).unwrap();
        let w = BraidWord::new(4, &[(2, 1), (1, -1), (3, 1)]).unwrap();
        let v: Vec<C64> = (0..81)
            .map(|i| C64::new((i as f64).sin(), (i as f64).cos()))
            .collect();
        let a = eval_word(&w, &cfg).unwrap().apply(&v).unwrap();
        let b = apply_word(&w, &cfg, &v).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).norm() < 1e-12));
    }

    #[test]
    fn intertwiner() {
        let rep = qudit_braid_check(&RepConfig::new(3, 3).unwrap(), 1e-9).unwrap();
        assert!(rep.all_pass());
    }

    #[test]
    fn schmidt_examples() {
        let d = 3;
        let r = RootData::new(d).unwrap();
        let b = braid_local(&r, 1);
        let prod = StateVector::basis(d, 2, &[1, 2]).unwrap();
        let sp = schmidt_spectrum(&prod, 1, 1e-9).unwrap();
        assert!((sp[0] - 1.0).abs() < 1e-12 && sp[1].abs() < 1e-12);
        let ent = StateVector::new(d, 2, b.apply(&prod.amplitudes).unwrap()).unwrap();
        let sp = schmidt_spectrum(&ent, 1, 1e-9).unwrap();
        assert!(sp.iter().all(|s| (s - 1.0 / 3f64.sqrt()).abs() < 1e-12));
        assert!((entanglement_entropy(&sp) - 3f64.ln()).abs() < 1e-12);
        assert!(schmidt_spectrum(&ent.scale(C64::new(2.0, 0.0)), 1, 1e-9).is_err());
    }

    #[test]
    fn entangling_examples() {
        let r = RootData::new(2).unwrap();
        assert!(!is_entangling(&LinearOp::identity(4), 2, 1e-9).unwrap());
        assert!(is_entangling(&braid_local(&r, 1), 2, 1e-9).unwrap());
        assert!(!is_entangling(&swap_gate(2), 2, 1e-9).unwrap());
        assert!(is_entangling(&LinearOp::identity(4).scale(C64::new(2.0, 0.0)), 2, 1e-9).is_err());
    }
}
