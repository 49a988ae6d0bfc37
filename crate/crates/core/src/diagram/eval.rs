use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use super::{Diagram, Slice};
use crate::braid::braid_local;
use crate::error::{Error, Result};
use crate::fock::{
    clock_shift, digits, dim, index_of, monomial_image, represent, wires_for, LinearOp, SparseVec,
    StateVector,
};
use crate::pauli::{build_solution, Variant};
use crate::scalars::{q_pow, zeta_pow, RootData};

/// Value of a diagram: an operator, a state (no input wires) or a number.
#[derive(Clone, Debug)]
pub enum Evaluation {
    Op(LinearOp),
    State(StateVector),
    Scalar(C64),
}

impl Evaluation {
    /// Matrix form: states become a single column, numbers a 1x1 matrix.
    pub fn to_op(&self) -> LinearOp {
        match self {
            Evaluation::Op(op) => op.clone(),
            Evaluation::State(s) => LinearOp::from_columns(
                s.dim(),
                1,
                vec![s.amplitudes.iter().copied().enumerate().collect()],
            ),
            Evaluation::Scalar(c) => LinearOp::from_columns(1, 1, vec![vec![(0, *c)]]),
        }
    }

    pub fn max_abs_diff(&self, other: &Evaluation) -> Result<f64> {
        self.to_op().max_abs_diff(&other.to_op())
    }
}

/// Named operators available to `box` slices.
#[derive(Clone, Debug, Default)]
pub struct BoxRegistry {
    pub boxes: BTreeMap<String, LinearOp>,
}

impl BoxRegistry {
    /// `clock`, `shift` (one wire), `braid` (two wires) and `pauli_x/y/z`
    /// (the four-wire operators of the first solution).
    pub fn builtin(d: u32) -> Result<Self> {
        let roots = RootData::new(d)?;
        let (u, v) = clock_shift(d);
        let mut boxes = BTreeMap::new();
        boxes.insert("clock".to_string(), u);
        boxes.insert("shift".to_string(), v);
        boxes.insert("braid".to_string(), braid_local(&roots, 1));
        let sol = build_solution(Variant::I, d)?;
        let cfg = crate::fock::RepConfig::new(d, 4)?;
        boxes.insert("pauli_x".to_string(), represent(&sol.x, &cfg)?);
        boxes.insert("pauli_y".to_string(), represent(&sol.y, &cfg)?);
        boxes.insert("pauli_z".to_string(), represent(&sol.z, &cfg)?);
        Ok(BoxRegistry { boxes })
    }

    pub fn insert(&mut self, name: &str, op: LinearOp) {
        self.boxes.insert(name.to_string(), op);
    }
}

/// True iff every nonzero entry connects basis states of equal grade.
pub fn is_zero_graded(op: &LinearOp, d: u32) -> Result<bool> {
    let m = wires_for(op.rows, d)?;
    let grade = |i: usize| digits(i, d, m).iter().sum::<u32>() % d;
    for j in 0..op.cols {
        let g = grade(j);
        if op.column(j).iter().any(|(i, _)| grade(*i) != g) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn evaluate(dg: &Diagram) -> Result<Evaluation> {
    evaluate_with(dg, &BoxRegistry::builtin(dg.d)?)
}

fn basis_map<F: FnMut(&[u32]) -> Vec<(Vec<u32>, C64)>>(
    col: &SparseVec,
    d: u32,
    n_before: usize,
    n_after: usize,
    mut image: F,
) -> SparseVec {
    let mut out: SparseVec = Vec::new();
    for &(idx, amp) in col {
        let basis = digits(idx, d, n_before);
        for (b, x) in image(&basis) {
            debug_assert_eq!(b.len(), n_after);
            out.push((index_of(&b, d), amp * x));
        }
    }
    crate::fock::compact(out)
}

fn label_image(d: u32, pos: usize, charge: u32, basis: &[u32]) -> (Vec<u32>, C64) {
    let mut exps = vec![0u32; basis.len()];
    exps[pos - 1] = charge;
    let (e, out) = monomial_image(d, &exps, basis);
    (out, q_pow(d, e))
}

pub fn evaluate_with(dg: &Diagram, registry: &BoxRegistry) -> Result<Evaluation> {
    let counts = dg.wire_counts()?;
    let d = dg.d;
    let roots = RootData::new(d)?;
    let plus = braid_local(&roots, 1);
    let minus = braid_local(&roots, -1);
    let kappa_amp = |j: u32| zeta_pow(d, (j * j) as i64) / roots.delta;
    let n_cols = dim(d, dg.wires_in);
    let mut cols: Vec<SparseVec> = (0..n_cols).map(|j| vec![(j, C64::new(1.0, 0.0))]).collect();
    let mut in_keep: Option<Vec<usize>> = None;
    let mut n = dg.wires_in;

    for (idx, s) in dg.slices.iter().enumerate() {
        let n_next = counts[idx + 1];
        match s {
            Slice::Label { pos, charge } => {
                for c in cols.iter_mut() {
                    *c = basis_map(c, d, n, n_next, |b| vec![label_image(d, *pos, *charge, b)]);
                }
            }
            Slice::Crossing { pos, sign } => {
                let local = if *sign > 0 { &plus } else { &minus };
                let p = pos - 1;
                for c in cols.iter_mut() {
                    *c = basis_map(c, d, n, n_next, |b| {
                        local
                            .column(index_of(&b[p..p + 2], d))
                            .into_iter()
                            .map(|(r, x)| {
                                let mut o = b.to_vec();
                                let rd = digits(r, d, 2);
                                o[p] = rd[0];
                                o[p + 1] = rd[1];
                                (o, x)
                            })
                            .collect()
                    });
                }
            }
            Slice::Cap { pos, charge } => {
                let p = pos - 1;
                for c in cols.iter_mut() {
                    *c = basis_map(c, d, n, n_next, |b| {
                        (0..d)
                            .map(|j| {
                                let mut o = Vec::with_capacity(b.len() + 2);
                                o.extend_from_slice(&b[..p]);
                                o.push(j);
                                o.push((d - j) % d);
                                o.extend_from_slice(&b[p..]);
                                let (o, ph) = label_image(d, *pos, *charge, &o);
                                (o, kappa_amp(j) * ph)
                            })
                            .collect()
                    });
                }
            }
            Slice::Cup { pos, charge } => {
                let p = pos - 1;
                for c in cols.iter_mut() {
                    *c = basis_map(c, d, n, n_next, |b| {
                        let (b, ph) = label_image(d, *pos, *charge, b);
                        if (b[p] + b[p + 1]) % d != 0 {
                            return Vec::new();
                        }
                        let mut o = b[..p].to_vec();
                        o.extend_from_slice(&b[p + 2..]);
                        let j = b[p];
                        vec![(o, ph * zeta_pow(d, -((j * j) as i64)))]
                    });
                }
            }
            Slice::Box { name, pos, span } => {
                let op = registry.boxes.get(name).ok_or_else(|| Error::Arity {
                    slice: idx,
                    message: format!("unknown box '{name}'"),
                })?;
                if op.rows != op.cols || op.rows != dim(d, *span) {
                    return Err(Error::Arity {
                        slice: idx,
                        message: format!("box '{name}' does not act on {span} wires"),
                    });
                }
                if *pos != 1 && !is_zero_graded(op, d)? {
                    return Err(Error::GradedInsertion {
                        slice: idx,
                        message: format!("graded box '{name}' at wire {pos}; only zero-graded boxes or boxes at wire 1 are supported"),
                    });
                }
                let p = pos - 1;
                let k = *span;
                for c in cols.iter_mut() {
                    *c = basis_map(c, d, n, n_next, |b| {
                        op.column(index_of(&b[p..p + k], d))
                            .into_iter()
                            .map(|(r, x)| {
                                let mut o = b.to_vec();
                                o[p..p + k].copy_from_slice(&digits(r, d, k));
                                (o, x)
                            })
                            .collect()
                    });
                }
            }
            Slice::Meter { positions } | Slice::Closure { positions } => {
                let scale = if matches!(s, Slice::Closure { .. }) {
                    roots.delta_pow(positions.len() as i32)
                } else {
                    1.0
                };
                let closed: Vec<usize> = positions.iter().map(|p| p - 1).collect();
                let keep = |b: &[u32]| closed.iter().all(|&p| b[p] == 0);
                let drop = |b: &[u32]| -> Vec<u32> {
                    b.iter()
                        .enumerate()
                        .filter(|(i, _)| !closed.contains(i))
                        .map(|(_, x)| *x)
                        .collect()
                };
                if dg.wires_in != 0 {
                    if dg.wires_in != n {
                        return Err(Error::Unsupported(format!(
                            "meter on an operator from {} to {n} wires",
                            dg.wires_in
                        )));
                    }
                    let kept: Vec<usize> =
                        (0..n_cols).filter(|&j| keep(&digits(j, d, n))).collect();
                    cols = kept.iter().map(|&j| cols[j].clone()).collect();
                    in_keep = Some(kept);
                }
                for c in cols.iter_mut() {
                    *c = basis_map(c, d, n, n_next, |b| {
                        if keep(b) {
                            vec![(drop(b), C64::new(scale, 0.0))]
                        } else {
                            Vec::new()
                        }
                    });
                }
            }
        }
        n = n_next;
    }

    let pref = dg.prefactor.value();
    let rows = dim(d, n);
    let n_in = in_keep.as_ref().map(|k| k.len()).unwrap_or(n_cols);
    let cols: Vec<SparseVec> = cols
        .into_iter()
        .map(|c| c.into_iter().map(|(i, x)| (i, x * pref)).collect())
        .collect();
    if dg.wires_in == 0 {
        let mut amps = vec![C64::new(0.0, 0.0); rows];
        for (i, x) in &cols[0] {
            amps[*i] = *x;
        }
        if n == 0 {
            return Ok(Evaluation::Scalar(amps[0]));
        }
        return Ok(Evaluation::State(StateVector::new(d, n, amps)?));
    }
    Ok(Evaluation::Op(LinearOp::from_columns(rows, n_in, cols)))
}
