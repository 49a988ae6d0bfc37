//! Clock/shift representation of the parafermion algebra on `C^{d^m}`.
//!
//! `U|i⟩ = q^{-i}|i⟩`, `V|i⟩ = |i+1⟩` and `c_j = U⊗⋯⊗U⊗V⊗1⊗⋯⊗1` with the
//! clock tails on the left. With these choices `c^a|0…0⟩ = |a⟩` exactly.

mod linop;
mod state;

pub use linop::{compact, LinearOp, SparseVec, Storage, DENSE_LIMIT, DROP_TOL};
pub use state::{StateDoc, StateVector};

/// Floor on the tolerance used for precondition guards, so a strict comparison
/// tolerance does not turn rounding noise into a domain error.
pub const PRECONDITION_TOL: f64 = 1e-9;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::algebra::{AlgebraElement, Monomial};
use crate::error::{Error, Result};
use crate::scalars::{q_pow, RootData};

/// Sign and placement choices of the representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Conventions {
    /// `U|i⟩ = q^{clock_sign · i}|i⟩`.
    pub clock_sign: i8,
    /// `V|i⟩ = |i + shift_direction⟩`.
    pub shift_direction: i8,
    /// Clock tails sit on wires left of the generator.
    pub tails_left: bool,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            clock_sign: -1,
            shift_direction: 1,
            tails_left: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RepConfig {
    pub d: u32,
    pub m: usize,
    pub roots: RootData,
    pub conventions: Conventions,
}

impl RepConfig {
    /// Builds the configuration and checks the defining relations on up to three wires.
    pub fn new(d: u32, m: usize) -> Result<Self> {
        let roots = RootData::new(d)?;
        let cfg = RepConfig {
            d,
            m,
            roots,
            conventions: Conventions::default(),
        };
        let probe = RepConfig {
            m: m.clamp(1, 3),
            ..cfg.clone()
        };
        let dev = relation_defect(&probe)?;
        if dev > 1e-10 {
            return Err(Error::Domain(format!(
                "representation self-check failed with deviation {dev:e}"
            )));
        }
        Ok(cfg)
    }

    pub fn dim(&self) -> usize {
        dim(self.d, self.m)
    }

    pub fn with_m(&self, m: usize) -> RepConfig {
        RepConfig { m, ..self.clone() }
    }
}

pub fn dim(d: u32, m: usize) -> usize {
    (d as usize).pow(m as u32)
}

/// Digits `i_1 … i_m` of a basis index, most significant first.
pub fn digits(index: usize, d: u32, m: usize) -> Vec<u32> {
    let mut out = vec![0u32; m];
    let mut x = index;
    for k in (0..m).rev() {
        out[k] = (x % d as usize) as u32;
        x /= d as usize;
    }
    out
}

pub fn index_of(digits: &[u32], d: u32) -> usize {
    digits
        .iter()
        .fold(0usize, |acc, &i| acc * d as usize + i as usize)
}

/// `m` such that `d^m = n`.
pub fn wires_for(n: usize, d: u32) -> Result<usize> {
    let mut m = 0;
    let mut p = 1usize;
    while p < n {
        p *= d as usize;
        m += 1;
    }
    if p != n {
        return Err(Error::Dimension(format!("{n} is not a power of {d}")));
    }
    Ok(m)
}

/// The single-qudit clock and shift pair `(U, V)`.
pub fn clock_shift(d: u32) -> (LinearOp, LinearOp) {
    let n = d as usize;
    let u = LinearOp::from_fn(n, n, |i| vec![(i, q_pow(d, -(i as i64)))]);
    let v = LinearOp::from_fn(n, n, |i| vec![((i + 1) % n, C64::new(1.0, 0.0))]);
    (u, v)
}

/// Image of a basis state under a monomial: `c^a|i⟩ = q^{e}|i'⟩`, returning `(e, i')`.
pub fn monomial_image(d: u32, exps: &[u32], basis: &[u32]) -> (i64, Vec<u32>) {
    let mut e = 0i64;
    let mut prefix = 0i64;
    let mut out = basis.to_vec();
    for j in 0..exps.len() {
        e -= exps[j] as i64 * prefix;
        prefix += basis[j] as i64;
        out[j] = (basis[j] + exps[j]) % d;
    }
    (e, out)
}

/// The generator `c_j` (1-based).
pub fn c_op(j: usize, cfg: &RepConfig) -> Result<LinearOp> {
    generator_power(j, 1, cfg)
}

/// `c_j^p` as a generalized permutation.
pub fn generator_power(j: usize, p: i64, cfg: &RepConfig) -> Result<LinearOp> {
    if j == 0 || j > cfg.m {
        return Err(Error::Range(format!("c{j} outside 1..={}", cfg.m)));
    }
    let mut exps = vec![0u32; cfg.m];
    exps[j - 1] = p.rem_euclid(cfg.d as i64) as u32;
    Ok(monomial_op(&exps, cfg))
}

pub fn monomial_op(exps: &[u32], cfg: &RepConfig) -> LinearOp {
    let (d, m) = (cfg.d, cfg.m);
    let n = cfg.dim();
    LinearOp::from_fn(n, n, |col| {
        let (e, out) = monomial_image(d, exps, &digits(col, d, m));
        vec![(index_of(&out, d), q_pow(d, e))]
    })
}

/// Matrix of an algebra element.
pub fn represent(a: &AlgebraElement, cfg: &RepConfig) -> Result<LinearOp> {
    if a.d != cfg.d || a.m != cfg.m {
        return Err(Error::Domain(format!(
            "element of (d={}, m={}) represented on (d={}, m={})",
            a.d, a.m, cfg.d, cfg.m
        )));
    }
    let (d, m) = (cfg.d, cfg.m);
    let n = cfg.dim();
    let terms: Vec<(&Monomial, C64)> = a.terms.iter().map(|(k, c)| (k, c.value())).collect();
    Ok(LinearOp::from_fn(n, n, |col| {
        let basis = digits(col, d, m);
        terms
            .iter()
            .map(|(mono, c)| {
                let (e, out) = monomial_image(d, &mono.exponents, &basis);
                (index_of(&out, d), c * q_pow(d, e))
            })
            .collect()
    }))
}

/// Largest deviation of `c_j^d = 1`, unitarity and `c_j c_k = q c_k c_j` over all pairs.
pub fn relation_defect(cfg: &RepConfig) -> Result<f64> {
    let n = cfg.dim();
    let id = LinearOp::identity(n);
    let gens: Vec<LinearOp> = (1..=cfg.m).map(|j| c_op(j, cfg)).collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for (j, cj) in gens.iter().enumerate() {
        worst = worst.max(cj.pow(cfg.d)?.max_abs_diff(&id)?);
        worst = worst.max(cj.unitarity_defect()?);
        for ck in &gens[j + 1..] {
            let lhs = cj.mul(ck)?;
            let rhs = ck.mul(cj)?.scale(cfg.roots.q);
            worst = worst.max(lhs.max_abs_diff(&rhs)?);
        }
    }
    Ok(worst)
}

pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<C64> {
    a.inner(b)
}

fn check_positions(positions: &[usize], m: usize) -> Result<Vec<bool>> {
    let mut closed = vec![false; m];
    for &p in positions {
        if p == 0 || p > m {
            return Err(Error::Range(format!(
                "closure position {p} outside 1..={m}"
            )));
        }
        if closed[p - 1] {
            return Err(Error::Domain(format!("closure position {p} repeated")));
        }
        closed[p - 1] = true;
    }
    Ok(closed)
}

/// Map from reduced basis indices to full indices with zeros on the closed wires.
fn vacuum_insertion(d: u32, closed: &[bool]) -> Vec<usize> {
    let open = closed.iter().filter(|c| !**c).count();
    (0..dim(d, open))
        .map(|r| {
            let small = digits(r, d, open);
            let mut it = small.into_iter();
            let full: Vec<u32> = closed
                .iter()
                .map(|&c| if c { 0 } else { it.next().unwrap() })
                .collect();
            index_of(&full, d)
        })
        .collect()
}

/// Normalized closure of the listed wires of an operator on `m` wires.
///
/// Each closed wire is compressed to the vacuum on both sides, which is the
/// closure in which open strings pass under the closing arcs. Closing an
/// untouched wire gives exactly 1.
pub fn close_wires(x: &LinearOp, d: u32, positions: &[usize]) -> Result<LinearOp> {
    if x.rows != x.cols {
        return Err(Error::Dimension("closure needs a square operator".into()));
    }
    let m = wires_for(x.rows, d)?;
    let closed = check_positions(positions, m)?;
    let ins = vacuum_insertion(d, &closed);
    let mut back = vec![usize::MAX; x.rows];
    for (r, &f) in ins.iter().enumerate() {
        back[f] = r;
    }
    let n = ins.len();
    Ok(LinearOp::from_fn(n, n, |r| {
        x.column(ins[r])
            .into_iter()
            .filter(|(i, _)| back[*i] != usize::MAX)
            .map(|(i, v)| (back[i], v))
            .collect()
    }))
}

/// Closure of ket wires: each is paired with `τ = δ⟨0|`, then scaled by `δ^{-k}`.
pub fn close_state_wires(s: &StateVector, positions: &[usize]) -> Result<StateVector> {
    let closed = check_positions(positions, s.m)?;
    let ins = vacuum_insertion(s.d, &closed);
    Ok(StateVector {
        d: s.d,
        m: s.m - positions.len(),
        amplitudes: ins.iter().map(|&i| s.amplitudes[i]).collect(),
    })
}

/// Tensor embedding `1 ⊗ T ⊗ 1` of an operator on `k` wires at wires `pos..pos+k-1`.
pub fn embed_local(local: &LinearOp, d: u32, m: usize, pos: usize) -> Result<LinearOp> {
    let k = wires_for(local.rows, d)?;
    if local.rows != local.cols || pos == 0 || pos + k - 1 > m {
        return Err(Error::Range(format!(
            "local operator on {k} wires at {pos} of {m}"
        )));
    }
    let left = LinearOp::identity(dim(d, pos - 1));
    let right = LinearOp::identity(dim(d, m - (pos + k - 1)));
    Ok(left.kron(local).kron(&right))
}

/// Applies `1 ⊗ T ⊗ 1` to a dense vector without forming the full operator.
pub fn apply_local(local: &LinearOp, d: u32, m: usize, pos: usize, v: &[C64]) -> Result<Vec<C64>> {
    let k = wires_for(local.rows, d)?;
    if pos == 0 || pos + k - 1 > m || v.len() != dim(d, m) {
        return Err(Error::Range(format!(
            "local operator on {k} wires at {pos} of {m}"
        )));
    }
    let right = dim(d, m - (pos + k - 1));
    let block = local.rows;
    let cols: Vec<SparseVec> = (0..block).map(|j| local.column(j)).collect();
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for (idx, &x) in v.iter().enumerate() {
        if x == C64::new(0.0, 0.0) {
            continue;
        }
        let r = idx % right;
        let mid = (idx / right) % block;
        let l = idx / (right * block);
        for &(i, y) in &cols[mid] {
            out[(l * block + i) * right + r] += x * y;
        }
    }
    Ok(out)
}

/// Orthogonal projector onto the `q^k` eigenspace of a unitary with `γ^d = 1`.
pub fn charge_sector(gamma: &LinearOp, d: u32, k: i64, tol: f64) -> Result<LinearOp> {
    let defect = gamma.unitarity_defect()?;
    let order = gamma
        .pow(d)?
        .max_abs_diff(&LinearOp::identity(gamma.rows))?;
    let guard = tol.max(PRECONDITION_TOL);
    if defect > guard || order > guard {
        return Err(Error::Domain(format!(
            "charge operator is not a unitary of order {d} (defects {defect:e}, {order:e})"
        )));
    }
    let mut acc = LinearOp::zeros(gamma.rows, gamma.cols);
    let mut power = LinearOp::identity(gamma.rows);
    for t in 0..d as i64 {
        acc = acc.add(&power.scale(q_pow(d, -k * t)))?;
        power = gamma.mul(&power)?;
    }
    Ok(acc.scale(C64::new(1.0 / d as f64, 0.0)))
}

/// Orthonormal basis of the range of a projector, by Gram–Schmidt on its columns in index order.
pub fn range_basis(projector: &LinearOp, tol: f64) -> Vec<Vec<C64>> {
    let n = projector.rows;
    let rank = projector.normalized_trace().re * n as f64;
    let rank = rank.round() as usize;
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(rank);
    for j in 0..projector.cols {
        if basis.len() == rank {
            break;
        }
        let mut v = vec![C64::new(0.0, 0.0); n];
        for (i, x) in projector.column(j) {
            v[i] = x;
        }
        orthonormalize_into(&mut basis, v, tol);
    }
    basis
}

/// Appends `v` to `basis` after Gram–Schmidt, if it has a component outside the span.
pub fn orthonormalize_into(basis: &mut Vec<Vec<C64>>, mut v: Vec<C64>, tol: f64) -> bool {
    for _ in 0..2 {
        for b in basis.iter() {
            let ov: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= ov * bi;
            }
        }
    }
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm <= tol {
        return false;
    }
    basis.push(v.into_iter().map(|x| x / norm).collect());
    true
}

/// `B† A B` for an orthonormal column set `B`.
pub fn compress(op: &LinearOp, basis: &[Vec<C64>]) -> Result<DMatrix<C64>> {
    let images: Vec<Vec<C64>> = basis.iter().map(|b| op.apply(b)).collect::<Result<_>>()?;
    let r = basis.len();
    Ok(DMatrix::from_fn(r, r, |i, j| {
        basis[i]
            .iter()
            .zip(&images[j])
            .map(|(x, y)| x.conj() * y)
            .sum()
    }))
}

/// Residual norm of `A b` outside the span of `basis`, maximized over the basis.
pub fn leakage(op: &LinearOp, basis: &[Vec<C64>]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for b in basis {
        let img = op.apply(b)?;
        worst = worst.max(residual_outside(&img, basis));
    }
    Ok(worst)
}

pub fn residual_outside(v: &[C64], basis: &[Vec<C64>]) -> f64 {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for b in basis {
            let ov: C64 = b.iter().zip(&r).map(|(x, y)| x.conj() * y).sum();
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= ov * bi;
            }
        }
    }
    r.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Projector onto basis states of total grade `g`.
pub fn grade_projector(d: u32, m: usize, g: u32) -> LinearOp {
    let n = dim(d, m);
    LinearOp::from_fn(n, n, |i| {
        let s: u32 = digits(i, d, m).iter().sum();
        if s % d == g % d {
            vec![(i, C64::new(1.0, 0.0))]
        } else {
            Vec::new()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::ExactScalar;

    fn cfg(d: u32, m: usize) -> RepConfig {
        RepConfig::new(d, m).unwrap()
    }

    #[test]
    fn clock_shift_matrices() {
        let (u, v) = clock_shift(2);
        assert!((u.get(1, 1) + 1.0).norm() < 1e-15);
        assert!((v.get(0, 1) - 1.0).norm() < 1e-15);
        let (u, _) = clock_shift(3);
        let q = q_pow(3, 1);
        assert!((u.get(1, 1) - q.inv()).norm() < 1e-15);
        assert!((u.get(2, 2) - q.inv() * q.inv()).norm() < 1e-15);
        let (u, v) = clock_shift(5);
        let lhs = v.mul(&u).unwrap();
        let rhs = u.mul(&v).unwrap().scale(q_pow(5, 1));
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn generators_as_tensors() {
        let c = cfg(2, 2);
        let (u, v) = clock_shift(2);
        let id = LinearOp::identity(2);
        assert!(c_op(1, &c).unwrap().max_abs_diff(&v.kron(&id)).unwrap() < 1e-15);
        assert!(c_op(2, &c).unwrap().max_abs_diff(&u.kron(&v)).unwrap() < 1e-15);
        assert!(c_op(3, &c).is_err());
    }

    #[test]
    fn monomials_create_basis_states_without_phase() {
        let c = cfg(3, 3);
        let vac = StateVector::basis(3, 3, &[0, 0, 0]).unwrap();
        for idx in 0..27 {
            let a = digits(idx, 3, 3);
            let op = monomial_op(&a, &c);
            let out = op.apply(&vac.amplitudes).unwrap();
            assert!((out[idx] - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn represent_is_multiplicative_on_a_pair() {
        let c = cfg(3, 2);
        let a = AlgebraElement::word(3, 2, &[(2, 1), (1, 2)]).unwrap();
        let b = AlgebraElement::word(3, 2, &[(1, 1), (2, 2)])
            .unwrap()
            .add(&AlgebraElement::one(3, 2))
            .unwrap();
        let lhs = represent(&a.mul(&b).unwrap(), &c).unwrap();
        let rhs = represent(&a, &c)
            .unwrap()
            .mul(&represent(&b, &c).unwrap())
            .unwrap();
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
        let c1d = AlgebraElement::generator(3, 2, 1, 3).unwrap();
        assert!(
            represent(&c1d, &c)
                .unwrap()
                .max_abs_diff(&LinearOp::identity(9))
                .unwrap()
                < 1e-15
        );
    }

    #[test]
    fn state_closure_example() {
        for idx in 0..27 {
            let dg = digits(idx, 3, 3);
            let s = StateVector::basis(3, 3, &dg).unwrap();
            let out = close_state_wires(&s, &[1, 2]).unwrap();
            let expect = if dg[0] == 0 && dg[1] == 0 {
                StateVector::basis(3, 1, &[dg[2]]).unwrap()
            } else {
                StateVector::zeros(3, 1)
            };
            assert_eq!(out.amplitudes, expect.amplitudes);
        }
    }

    #[test]
    fn closing_identity_wire() {
        let out = close_wires(&LinearOp::identity(9), 3, &[1]).unwrap();
        assert!(out.max_abs_diff(&LinearOp::identity(3)).unwrap() < 1e-15);
        assert!(close_wires(&LinearOp::identity(9), 3, &[3]).is_err());
    }

    #[test]
    fn closure_keeps_tails_consistent() {
        let d = 3;
        let c = cfg(d, 3);
        let x = AlgebraElement::word(d, 3, &[(1, 1), (3, 2)]).unwrap();
        let closed = close_wires(&represent(&x, &c).unwrap(), d, &[2]).unwrap();
        let y = AlgebraElement::word(d, 2, &[(1, 1), (2, 2)]).unwrap();
        let expect = represent(&y, &c.with_m(2)).unwrap();
        assert!(closed.max_abs_diff(&expect).unwrap() < 1e-15);
    }

    #[test]
    fn sector_projectors() {
        let d = 2;
        let c = cfg(d, 4);
        let gamma = AlgebraElement::word(d, 4, &[(1, -1), (2, 1), (3, -1), (4, 1)])
            .unwrap()
            .scale(ExactScalar::q(d, 1));
        let g = represent(&gamma, &c).unwrap();
        let p0 = charge_sector(&g, d, 0, 1e-9).unwrap();
        let p1 = charge_sector(&g, d, 1, 1e-9).unwrap();
        assert!((p0.normalized_trace().re * 16.0 - 8.0).abs() < 1e-12);
        assert!(p0.mul(&p0).unwrap().max_abs_diff(&p0).unwrap() < 1e-12);
        let sum = p0.add(&p1).unwrap();
        assert!(sum.max_abs_diff(&LinearOp::identity(16)).unwrap() < 1e-12);
        assert_eq!(range_basis(&p0, 1e-9).len(), 8);
        assert!(charge_sector(&g.scale(C64::new(2.0, 0.0)), d, 0, 1e-9).is_err());
    }

    #[test]
    fn local_application_matches_embedding() {
        let d = 3;
        let (u, v) = clock_shift(d);
        let local = u.kron(&v).add(&v.kron(&v)).unwrap();
        let full = embed_local(&local, d, 4, 2).unwrap();
        let vec: Vec<C64> = (0..81)
            .map(|i| C64::new(i as f64, -(i as f64) / 3.0))
            .collect();
        let a = full.apply(&vec).unwrap();
        let b = apply_local(&local, d, 4, 2, &vec).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}
