//! The parafermion ∗-algebra on `m` generators.
//!
//! Generators satisfy `c_j^d = 1` and `c_j c_k = q c_k c_j` for `j < k`.
//! Elements are sums of normal-ordered monomials `c_1^{a_1}⋯c_m^{a_m}`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalars::{format_complex, ExactScalar};

/// Coefficients at or below this magnitude are dropped.
pub const PRUNE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn identity(m: usize) -> Self {
        Monomial {
            exponents: vec![0; m],
        }
    }

    pub fn from_signed(d: u32, exps: &[i64]) -> Self {
        Monomial {
            exponents: exps
                .iter()
                .map(|&e| e.rem_euclid(d as i64) as u32)
                .collect(),
        }
    }

    pub fn grade(&self, d: u32) -> u32 {
        (self.exponents.iter().map(|&e| e as u64).sum::<u64>() % d as u64) as u32
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// ζ-exponent `e` with `c^a c^b = ζ^e c^{a+b}`.
    pub fn product_phase(a: &Monomial, b: &Monomial) -> i64 {
        let mut acc = 0i64;
        let mut prefix_b = 0i64;
        for k in 0..a.exponents.len() {
            acc += a.exponents[k] as i64 * prefix_b;
            prefix_b += b.exponents[k] as i64;
        }
        -2 * acc
    }

    pub fn product(d: u32, a: &Monomial, b: &Monomial) -> (i64, Monomial) {
        let phase = Self::product_phase(a, b);
        let exps = a
            .exponents
            .iter()
            .zip(&b.exponents)
            .map(|(x, y)| (x + y) % d)
            .collect();
        (phase, Monomial { exponents: exps })
    }

    /// ζ-exponent `e` with `(c^a)* = ζ^e c^{-a}`.
    pub fn adjoint_phase(&self) -> i64 {
        let mut acc = 0i64;
        let mut prefix = 0i64;
        for &e in &self.exponents {
            acc += e as i64 * prefix;
            prefix += e as i64;
        }
        -2 * acc
    }
}

/// Grade of an element: a common value mod d, or mixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grade {
    Pure(u32),
    Mixed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    pub d: u32,
    pub m: usize,
    pub terms: BTreeMap<Monomial, ExactScalar>,
}

impl AlgebraElement {
    pub fn zero(d: u32, m: usize) -> Self {
        AlgebraElement {
            d,
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(d: u32, m: usize) -> Self {
        Self::monomial(d, m, Monomial::identity(m), ExactScalar::one(d))
    }

    pub fn monomial(d: u32, m: usize, mono: Monomial, coeff: ExactScalar) -> Self {
        let mut out = Self::zero(d, m);
        out.insert(mono, coeff);
        out
    }

    /// `c_j^power` with `j` counted from 1.
    pub fn generator(d: u32, m: usize, j: usize, power: i64) -> Result<Self> {
        if j == 0 || j > m {
            return Err(Error::Range(format!("generator c{j} outside 1..={m}")));
        }
        let mut exps = vec![0i64; m];
        exps[j - 1] = power;
        Ok(Self::monomial(
            d,
            m,
            Monomial::from_signed(d, &exps),
            ExactScalar::one(d),
        ))
    }

    /// Product of generator powers in the given (not necessarily normal) order.
    pub fn word(d: u32, m: usize, factors: &[(usize, i64)]) -> Result<Self> {
        let mut acc = Self::one(d, m);
        for &(j, p) in factors {
            acc = acc.mul(&Self::generator(d, m, j, p)?)?;
        }
        Ok(acc)
    }

    fn insert(&mut self, mono: Monomial, coeff: ExactScalar) {
        let merged = match self.terms.get(&mono) {
            Some(existing) => existing.add(&coeff),
            None => coeff,
        };
        if merged.is_zero(PRUNE_TOL) {
            self.terms.remove(&mono);
        } else {
            self.terms.insert(mono, merged);
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.m != other.m {
            return Err(Error::Domain(format!(
                "algebra mismatch: (d={}, m={}) vs (d={}, m={})",
                self.d, self.m, other.d, other.m
            )));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.insert(mono.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(ExactScalar::complex(self.d, C64::new(-1.0, 0.0))))
    }

    pub fn scale(&self, s: ExactScalar) -> Self {
        let mut out = Self::zero(self.d, self.m);
        for (mono, c) in &self.terms {
            out.insert(mono.clone(), *c * s);
        }
        out
    }

    /// Normal-ordered product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.d, self.m);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let (phase, mono) = Monomial::product(self.d, ma, mb);
                out.insert(mono, *ca * *cb * ExactScalar::zeta(self.d, phase));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.d, self.m);
        for _ in 0..n {
            acc = acc.mul(self).expect("same algebra");
        }
        acc
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.d, self.m);
        for (mono, c) in &self.terms {
            let inv = Monomial::from_signed(
                self.d,
                &mono
                    .exponents
                    .iter()
                    .map(|&e| -(e as i64))
                    .collect::<Vec<_>>(),
            );
            out.insert(
                inv,
                c.conj() * ExactScalar::zeta(self.d, mono.adjoint_phase()),
            );
        }
        out
    }

    pub fn grade(&self) -> Grade {
        let mut grades = self.terms.keys().map(|m| m.grade(self.d));
        match grades.next() {
            None => Grade::Pure(0),
            Some(g) => {
                if grades.all(|h| h == g) {
                    Grade::Pure(g)
                } else {
                    Grade::Mixed
                }
            }
        }
    }

    /// Normalized trace: the identity coefficient.
    pub fn trace(&self) -> ExactScalar {
        self.terms
            .get(&Monomial::identity(self.m))
            .copied()
            .unwrap_or_else(|| ExactScalar::zero(self.d))
    }

    /// `ζ^{|A||B|} A B` for pure-grade inputs.
    pub fn twisted_product(&self, other: &Self) -> Result<Self> {
        match (self.grade(), other.grade()) {
            (Grade::Pure(a), Grade::Pure(b)) => Ok(self
                .mul(other)?
                .scale(ExactScalar::zeta(self.d, a as i64 * b as i64))),
            _ => Err(Error::Domain(
                "twisted product needs pure-grade factors".into(),
            )),
        }
    }

    /// Re-indexes generators: `c_j ↦ c_{map[j-1]}` in an algebra with `m_new` generators.
    /// The image must preserve the relative order of generators.
    pub fn reindex(&self, m_new: usize, map: &[usize]) -> Result<Self> {
        if map.len() != self.m || map.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(
                "reindex map must be strictly increasing".into(),
            ));
        }
        if map.iter().any(|&j| j == 0 || j > m_new) {
            return Err(Error::Range(
                "reindex target outside the new algebra".into(),
            ));
        }
        let mut out = Self::zero(self.d, m_new);
        for (mono, c) in &self.terms {
            let mut exps = vec![0u32; m_new];
            for (j, &e) in mono.exponents.iter().enumerate() {
                exps[map[j] - 1] = e;
            }
            out.insert(Monomial { exponents: exps }, *c);
        }
        Ok(out)
    }

    /// Largest coefficient difference, evaluated numerically.
    pub fn max_deviation(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        let diff = self.sub(other)?;
        Ok(diff
            .terms
            .values()
            .map(|c| c.value().norm())
            .fold(0.0, f64::max))
    }

    /// Random element with `n_terms` monomials and complex coefficients in the unit box.
    /// With `grade = Some(g)` all monomials have grade `g`.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        d: u32,
        m: usize,
        n_terms: usize,
        grade: Option<u32>,
    ) -> Self {
        let mut out = Self::zero(d, m);
        for _ in 0..n_terms {
            let mut exps: Vec<u32> = (0..m).map(|_| rng.random_range(0..d)).collect();
            if let Some(g) = grade {
                let others: u32 = exps[1..].iter().sum::<u32>() % d;
                exps[0] = (g % d + d - others) % d;
            }
            let c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            out.insert(Monomial { exponents: exps }, ExactScalar::complex(d, c));
        }
        out
    }

    /// Parses the rendering produced by `Display`, e.g. `q^2·c1^1·c3^2 + (0.5+0i)·c2^1`.
    pub fn parse(text: &str, d: u32, m: usize) -> Result<Self> {
        let text = text.trim();
        let mut out = Self::zero(d, m);
        if text == "0" {
            return Ok(out);
        }
        for (t_idx, term) in text.split(" + ").enumerate() {
            let mut coeff = ExactScalar::one(d);
            let mut exps = vec![0i64; m];
            for factor in term.split(['·', '*']) {
                let factor = factor.trim();
                let err = |msg: &str| Error::Parse {
                    position: format!("term {}, factor '{}'", t_idx + 1, factor),
                    message: msg.to_string(),
                };
                if factor == "1" {
                    continue;
                }
                if let Some(inner) = factor.strip_prefix('(').and_then(|f| f.strip_suffix("i)")) {
                    let split = inner
                        .char_indices()
                        .skip(1)
                        .filter(|(_, ch)| *ch == '+' || *ch == '-')
                        .filter(|(i, _)| !inner[..*i].ends_with(['e', 'E']))
                        .last()
                        .map(|(i, _)| i)
                        .ok_or_else(|| err("complex literal needs re±im"))?;
                    let re: f64 = inner[..split].parse().map_err(|_| err("bad real part"))?;
                    let im: f64 = inner[split..]
                        .parse()
                        .map_err(|_| err("bad imaginary part"))?;
                    coeff = coeff * ExactScalar::complex(d, C64::new(re, im));
                    continue;
                }
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<i64>().map_err(|_| err("bad exponent"))?),
                    None => (factor, 1),
                };
                match base {
                    "q" => coeff = coeff * ExactScalar::q(d, exp),
                    "zeta" | "ζ" => coeff = coeff * ExactScalar::zeta(d, exp),
                    "delta" | "δ" => {
                        let e = i32::try_from(exp).map_err(|_| err("delta exponent too large"))?;
                        coeff = coeff * ExactScalar::delta(d, e)
                    }
                    _ => {
                        let j: usize = base
                            .strip_prefix('c')
                            .and_then(|s| s.parse().ok())
                            .ok_or_else(|| err("unknown factor"))?;
                        if j == 0 || j > m {
                            return Err(err("generator index out of range"));
                        }
                        if exps[j..].iter().any(|&e| e != 0) {
                            return Err(err("generators must appear in ascending order"));
                        }
                        exps[j - 1] += exp;
                    }
                }
            }
            out.insert(Monomial::from_signed(d, &exps), coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(mono, c)| {
                let mut parts = Vec::new();
                if !c.is_one() {
                    if c.zeta_exp != 0 {
                        if c.zeta_exp % 2 == 0 {
                            parts.push(format!("q^{}", c.zeta_exp / 2));
                        } else {
                            parts.push(format!("zeta^{}", c.zeta_exp));
                        }
                    }
                    if c.delta_exp != 0 {
                        parts.push(format!("delta^{}", c.delta_exp));
                    }
                    if c.coeff != C64::new(1.0, 0.0) {
                        parts.push(format_complex(c.coeff));
                    }
                }
                for (j, &e) in mono.exponents.iter().enumerate() {
                    if e != 0 {
                        parts.push(format!("c{}^{}", j + 1, e));
                    }
                }
                if parts.is_empty() {
                    "1".to_string()
                } else {
                    parts.join("·")
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(d: u32, m: usize, j: usize, p: i64) -> AlgebraElement {
        AlgebraElement::generator(d, m, j, p).unwrap()
    }

    #[test]
    fn swap_of_generators() {
        let d = 3;
        let lhs = gen(d, 2, 2, 1).mul(&gen(d, 2, 1, 1)).unwrap();
        let rhs = AlgebraElement::word(d, 2, &[(1, 1), (2, 1)])
            .unwrap()
            .scale(ExactScalar::q(d, -1));
        assert!(lhs.max_deviation(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn order_d() {
        for d in 2..=5 {
            let p = gen(d, 1, 1, d as i64 - 1).mul(&gen(d, 1, 1, 1)).unwrap();
            assert_eq!(p, AlgebraElement::one(d, 1));
        }
    }

    #[test]
    fn product_of_pairs_d3() {
        let d = 3;
        let c12 = AlgebraElement::word(d, 2, &[(1, 1), (2, 1)]).unwrap();
        let sq = c12.mul(&c12).unwrap();
        let mono = Monomial::from_signed(d, &[2, 2]);
        assert_eq!(sq.terms.len(), 1);
        let c = sq.terms[&mono];
        assert!((c.value() - ExactScalar::q(d, -1).value()).norm() < 1e-12);
    }

    #[test]
    fn adjoint_examples() {
        let d = 4;
        assert_eq!(gen(d, 1, 1, 1).adjoint(), gen(d, 1, 1, 3));
        assert_eq!(
            AlgebraElement::one(d, 2).adjoint(),
            AlgebraElement::one(d, 2)
        );
        let c12 = AlgebraElement::word(2, 2, &[(1, 1), (2, 1)]).unwrap();
        let minus = c12.scale(ExactScalar::complex(2, C64::new(-1.0, 0.0)));
        assert!(c12.adjoint().max_deviation(&minus).unwrap() < 1e-12);
    }

    #[test]
    fn grades() {
        let d = 3;
        let c12 = AlgebraElement::word(d, 2, &[(1, 1), (2, 1)]).unwrap();
        assert_eq!(c12.grade(), Grade::Pure(2));
        assert_eq!(AlgebraElement::one(d, 2).grade(), Grade::Pure(0));
        let mixed = gen(d, 1, 1, 1).add(&gen(d, 1, 1, 2)).unwrap();
        assert_eq!(mixed.grade(), Grade::Mixed);
    }

    #[test]
    fn traces() {
        let d = 3;
        assert!(AlgebraElement::one(d, 2).trace().is_one());
        for k in 1..d as i64 {
            assert!(gen(d, 2, 1, k).trace().is_zero(1e-15));
        }
        let x = AlgebraElement::word(d, 2, &[(1, 1), (2, d as i64 - 1)]).unwrap();
        assert!(x.trace().is_zero(1e-15));
    }

    #[test]
    fn twisted_examples() {
        let d = 3;
        let t = gen(d, 2, 1, 1).twisted_product(&gen(d, 2, 2, 1)).unwrap();
        let expect = AlgebraElement::word(d, 2, &[(1, 1), (2, 1)])
            .unwrap()
            .scale(ExactScalar::zeta(d, 1));
        assert!(t.max_deviation(&expect).unwrap() < 1e-12);
        let a = gen(d, 2, 2, 2);
        assert_eq!(a.twisted_product(&AlgebraElement::one(d, 2)).unwrap(), a);
        let t = gen(d, 2, 1, 1).twisted_product(&gen(d, 2, 1, 1)).unwrap();
        assert!(
            t.max_deviation(&gen(d, 2, 1, 2).scale(ExactScalar::zeta(d, 1)))
                .unwrap()
                < 1e-12
        );
        let mixed = gen(d, 1, 1, 1).add(&gen(d, 1, 1, 2)).unwrap();
        assert!(mixed.twisted_product(&mixed).is_err());
    }

    #[test]
    fn render_and_parse() {
        let d = 3;
        let x = AlgebraElement::word(d, 3, &[(1, 1), (3, 2)])
            .unwrap()
            .scale(ExactScalar::q(d, 2));
        assert_eq!(x.to_string(), "q^2·c1^1·c3^2");
        assert_eq!(AlgebraElement::parse("q^2·c1^1·c3^2", d, 3).unwrap(), x);
        let y = x
            .add(&AlgebraElement::one(d, 3).scale(ExactScalar::complex(d, C64::new(0.5, -0.25))))
            .unwrap();
        let back = AlgebraElement::parse(&y.to_string(), d, 3).unwrap();
        assert!(back.max_deviation(&y).unwrap() < 1e-15);
        assert!(AlgebraElement::parse("c3·c1", d, 3).is_err());
        assert!(AlgebraElement::parse("c4", d, 3).is_err());
    }
}
