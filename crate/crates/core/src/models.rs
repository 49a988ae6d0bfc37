//! Qudit encodings by one, two or four strings per qudit.
//!
//! Every encoded basis state is the evaluation of a cap diagram, so the
//! encodings carry the same Jordan–Wigner phases as the diagram evaluator.

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::diagram::{evaluate, Diagram, Evaluation};
use crate::error::{Error, Result};
use crate::fock::{
    digits, dim, index_of, leakage, monomial_image, orthonormalize_into, represent, LinearOp,
    RepConfig, StateDoc, StateVector,
};
use crate::scalars::q_pow;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModelTag {
    OneString,
    TwoStringI,
    TwoStringII,
    FourStringI,
    FourStringII,
}

impl ModelTag {
    pub const ALL: [ModelTag; 5] = [
        ModelTag::OneString,
        ModelTag::TwoStringI,
        ModelTag::TwoStringII,
        ModelTag::FourStringI,
        ModelTag::FourStringII,
    ];

    pub fn strings_per_qudit(&self) -> usize {
        match self {
            ModelTag::OneString => 1,
            ModelTag::TwoStringI | ModelTag::TwoStringII => 2,
            ModelTag::FourStringI | ModelTag::FourStringII => 4,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelTag::OneString => "one-string",
            ModelTag::TwoStringI => "two-string-i",
            ModelTag::TwoStringII => "two-string-ii",
            ModelTag::FourStringI => "four-string-i",
            ModelTag::FourStringII => "four-string-ii",
        }
    }
}

impl std::str::FromStr for ModelTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelTag::ALL
            .iter()
            .find(|t| t.name() == s)
            .copied()
            .ok_or_else(|| Error::Domain(format!("unknown model '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EncodedState {
    pub model: ModelTag,
    pub m: usize,
    /// Basis labels when the state is an encoded basis state.
    pub labels: Option<Vec<u32>>,
    pub vector: StateVector,
}

#[derive(Serialize)]
struct EncodedDoc<'a> {
    labels: &'a Option<Vec<u32>>,
    m: usize,
    model: &'static str,
    state: StateDoc,
}

impl EncodedState {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(EncodedDoc {
            labels: &self.labels,
            m: self.m,
            model: self.model.name(),
            state: StateDoc::from(&self.vector),
        })
        .expect("state serializes")
    }
}

fn check_labels(d: u32, labels: &[u32]) -> Result<()> {
    if let Some(k) = labels.iter().find(|&&k| k >= d) {
        return Err(Error::Range(format!("label {k} outside 0..{d}")));
    }
    Ok(())
}

/// Cap diagram whose evaluation is the encoded basis state.
pub fn encode_diagram(model: ModelTag, d: u32, labels: &[u32]) -> Result<Diagram> {
    check_labels(d, labels)?;
    let m = labels.len();
    let k = |i: usize| labels[i] as i64;
    let mut dg = Diagram::new(d, 0);
    match model {
        ModelTag::OneString => {
            return Err(Error::Unsupported(
                "one-string states have no cap diagram".into(),
            ))
        }
        ModelTag::TwoStringI => {
            for i in 0..m {
                dg = dg.cap(2 * i + 1, 0)?;
            }
            for i in (0..m).rev() {
                dg = dg.label(2 * i + 1, k(i))?;
            }
        }
        ModelTag::TwoStringII => {
            for i in 0..m {
                dg = dg.cap(i + 1, 0)?;
            }
            for i in (0..m).rev() {
                dg = dg.label(i + 1, k(i))?;
            }
        }
        ModelTag::FourStringI => {
            for i in 0..m {
                dg = dg.cap(4 * i + 1, k(i))?.cap(4 * i + 3, -k(i))?;
            }
        }
        ModelTag::FourStringII => {
            for i in 0..m {
                let o = 4 * i;
                dg = dg
                    .cap(o + 1, 0)?
                    .cap(o + 2, 0)?
                    .label(o + 2, -k(i))?
                    .label(o + 1, k(i))?;
            }
        }
    }
    Ok(dg)
}

pub fn encode(model: ModelTag, d: u32, labels: &[u32]) -> Result<EncodedState> {
    check_labels(d, labels)?;
    let m = labels.len();
    let vector = if model == ModelTag::OneString {
        StateVector::basis(d, m, labels)?
    } else {
        match evaluate(&encode_diagram(model, d, labels)?)? {
            Evaluation::State(s) => s,
            _ => unreachable!("cap diagrams evaluate to states"),
        }
    };
    Ok(EncodedState {
        model,
        m,
        labels: Some(labels.to_vec()),
        vector,
    })
}

/// All label vectors of `m` qudits in row-major order.
pub fn all_labels(d: u32, m: usize) -> Vec<Vec<u32>> {
    (0..dim(d, m)).map(|i| digits(i, d, m)).collect()
}

/// Orthonormalized span of the encoded basis states, built in label order.
pub fn qudit_span(model: ModelTag, d: u32, m: usize) -> Result<Vec<Vec<C64>>> {
    let mut basis = Vec::new();
    for ls in all_labels(d, m) {
        orthonormalize_into(&mut basis, encode(model, d, &ls)?.vector.amplitudes, 1e-10);
    }
    Ok(basis)
}

/// Ratio `⟨embed x, embed y⟩ / ⟨x, y⟩`; unit-norm caps make it 1 for both two-string types.
pub const EMBEDDING_NORMALIZATION: f64 = 1.0;

/// Linear extension of `|k⟩ ↦ encode(target, k)` from the one-string model.
pub fn embed(state: &EncodedState, target: ModelTag) -> Result<EncodedState> {
    if state.model != ModelTag::OneString
        || !matches!(target, ModelTag::TwoStringI | ModelTag::TwoStringII)
    {
        return Err(Error::Unsupported(format!(
            "embedding from {} into {}",
            state.model.name(),
            target.name()
        )));
    }
    let d = state.vector.d;
    let m = state.m;
    let mut out = StateVector::zeros(d, 2 * m);
    for (i, a) in state.vector.amplitudes.iter().enumerate() {
        if a.norm() == 0.0 {
            continue;
        }
        let e = encode(target, d, &digits(i, d, m))?;
        out = out.add(&e.vector.scale(*a))?;
    }
    Ok(EncodedState {
        model: target,
        m,
        labels: state.labels.clone(),
        vector: out,
    })
}

/// Exponent vector and coefficient of each monomial in an expansion.
pub type MonomialExpansion = Vec<(Vec<u32>, C64)>;

/// Coefficients of `t` in the monomial basis `c^a`, with the residual of the expansion.
pub fn decompose(t: &LinearOp, d: u32, m: usize) -> Result<(MonomialExpansion, f64)> {
    let n = dim(d, m);
    if t.rows != n || t.cols != n {
        return Err(Error::Dimension(format!("expected a {n}x{n} operator")));
    }
    let mut coeffs = Vec::new();
    let mut rebuilt = LinearOp::zeros(n, n);
    for a in all_labels(d, m) {
        let cfg_cols: Vec<(usize, C64)> = (0..n)
            .map(|col| {
                let (e, out) = monomial_image(d, &a, &digits(col, d, m));
                (index_of(&out, d), q_pow(d, e))
            })
            .collect();
        let tr: C64 = cfg_cols
            .iter()
            .enumerate()
            .map(|(col, (row, ph))| ph.conj() * t.get(*row, col))
            .sum::<C64>()
            / n as f64;
        if tr.norm() > 1e-13 {
            let mono = LinearOp::from_fn(n, n, |col| vec![(cfg_cols[col].0, cfg_cols[col].1 * tr)]);
            rebuilt = rebuilt.add(&mono)?;
            coeffs.push((a, tr));
        }
    }
    let residual = rebuilt.max_abs_diff(t)?;
    Ok((coeffs, residual))
}

/// Transformation on the two-string space matching `t` on the one-string space.
///
/// Type I sends `c_j` to `c_{2j-1}`; type II acts on the left legs of the nested caps.
/// `t` must lie in the span of the parafermion monomials.
pub fn lift_transform(t: &LinearOp, d: u32, m: usize, target: ModelTag) -> Result<LinearOp> {
    let (coeffs, residual) = decompose(t, d, m)?;
    if residual > 1e-9 {
        return Err(Error::Domain(format!(
            "operator is not a parafermion polynomial (residual {residual:.3e})"
        )));
    }
    match target {
        ModelTag::TwoStringI => {
            let cfg = RepConfig::new(d, 2 * m)?;
            let n = cfg.dim();
            let mut out = LinearOp::zeros(n, n);
            for (a, c) in coeffs {
                let mut exps = vec![0u32; 2 * m];
                for (j, x) in a.iter().enumerate() {
                    exps[2 * j] = *x;
                }
                out = out.add(&crate::fock::monomial_op(&exps, &cfg).scale(c))?;
            }
            Ok(out)
        }
        ModelTag::TwoStringII => Ok(t.kron(&LinearOp::identity(dim(d, m)))),
        other => Err(Error::Unsupported(format!("lifting into {}", other.name()))),
    }
}

/// Amplitude of `outcome`: the one-string meter for the vacuum, and in
/// general the pairing with the encoded outcome (cups on the two-string side).
pub fn measure(state: &EncodedState, outcome: &[u32]) -> Result<C64> {
    if outcome.len() != state.m {
        return Err(Error::Dimension(
            "outcome length differs from qudit count".into(),
        ));
    }
    let d = state.vector.d;
    encode(state.model, d, outcome)?.vector.inner(&state.vector)
}

/// Largest component of `T·(encoded basis)` outside the encoded four-string span.
pub fn qudit_space_leakage(t: &LinearOp, d: u32, m: usize) -> Result<f64> {
    let n = dim(d, 4 * m);
    if t.rows != n || t.cols != n {
        return Err(Error::Dimension(format!(
            "expected an operator on {} wires",
            4 * m
        )));
    }
    leakage(t, &qudit_span(ModelTag::FourStringI, d, m)?)
}

pub fn preserves_qudit_space(t: &LinearOp, d: u32, m: usize) -> Result<bool> {
    Ok(qudit_space_leakage(t, d, m)? < 1e-9)
}

/// Product of random zero-graded elements, one per four-wire block.
pub fn random_zero_graded_blocks<R: Rng + ?Sized>(
    rng: &mut R,
    d: u32,
    m: usize,
    terms: usize,
) -> Result<LinearOp> {
    let total = 4 * m;
    let mut prod = AlgebraElement::one(d, total);
    for q in 0..m {
        let block = AlgebraElement::random(rng, d, 4, terms, Some(0));
        let map: Vec<usize> = (1..=4).map(|j| 4 * q + j).collect();
        prod = prod.mul(&block.reindex(total, &map)?)?;
    }
    represent(&prod, &RepConfig::new(d, total)?)
}
