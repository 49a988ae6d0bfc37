//! Sliced planar diagrams: labels, crossings, caps, cups, boxes and meters,
//! read bottom to top.
//!
//! A cap `Cap(p, α)` creates the pair state `κ_0` on wires `(p, p+1)` and then
//! applies the label `c_p^α` to its left leg; a cup `Cup(p, α)` applies `c_p^α`
//! to its left leg and then pairs the two legs with `δ⟨κ_0|`. A meter closes the
//! listed wires with the normalization that makes a closed plain wire equal 1.
//! `Closure` is the unnormalized closure produced when a meter is expanded.

mod eval;
pub mod figures;
mod json;
mod rewrite;
pub mod sample;

use std::fmt;

pub use eval::{evaluate, evaluate_with, is_zero_graded, BoxRegistry, Evaluation};
pub use json::{parse, parse_value, serialize, serialize_value};
pub use rewrite::{
    apply_rule, complexity, equivalent, find_matches, normalize, replay, Equivalence, Location,
    Measure, RewriteStep, Rule, AUTOMATIC_RULES,
};

pub(crate) use rewrite::touches as rewrite_touches;

use crate::error::{Error, Result};
use crate::scalars::ExactScalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Slice {
    Label {
        pos: usize,
        charge: u32,
    },
    Crossing {
        pos: usize,
        sign: i8,
    },
    Cap {
        pos: usize,
        charge: u32,
    },
    Cup {
        pos: usize,
        charge: u32,
    },
    Box {
        name: String,
        pos: usize,
        span: usize,
    },
    Meter {
        positions: Vec<usize>,
    },
    Closure {
        positions: Vec<usize>,
    },
}

impl Slice {
    pub fn kind(&self) -> &'static str {
        match self {
            Slice::Label { .. } => "label",
            Slice::Crossing { .. } => "crossing",
            Slice::Cap { .. } => "cap",
            Slice::Cup { .. } => "cup",
            Slice::Box { .. } => "box",
            Slice::Meter { .. } => "meter",
            Slice::Closure { .. } => "closure",
        }
    }

    /// Wire count after this slice, given the count before it.
    pub fn output_wires(&self, n: usize) -> usize {
        match self {
            Slice::Cap { .. } => n + 2,
            Slice::Cup { .. } => n - 2,
            Slice::Meter { positions } | Slice::Closure { positions } => n - positions.len(),
            _ => n,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagram {
    pub d: u32,
    pub wires_in: usize,
    pub prefactor: ExactScalar,
    pub slices: Vec<Slice>,
}

impl Diagram {
    pub fn new(d: u32, wires_in: usize) -> Self {
        Diagram {
            d,
            wires_in,
            prefactor: ExactScalar::one(d),
            slices: Vec::new(),
        }
    }

    pub fn with_slices(d: u32, wires_in: usize, slices: Vec<Slice>) -> Result<Self> {
        let out = Diagram {
            slices,
            ..Diagram::new(d, wires_in)
        };
        out.validate()?;
        Ok(out)
    }

    pub fn push(mut self, s: Slice) -> Result<Self> {
        self.slices.push(s);
        self.validate()?;
        Ok(self)
    }

    pub fn label(self, pos: usize, charge: i64) -> Result<Self> {
        let d = self.d;
        self.push(Slice::Label {
            pos,
            charge: charge.rem_euclid(d as i64) as u32,
        })
    }

    pub fn crossing(self, pos: usize, sign: i8) -> Result<Self> {
        self.push(Slice::Crossing { pos, sign })
    }

    pub fn cap(self, pos: usize, charge: i64) -> Result<Self> {
        let d = self.d;
        self.push(Slice::Cap {
            pos,
            charge: charge.rem_euclid(d as i64) as u32,
        })
    }

    pub fn cup(self, pos: usize, charge: i64) -> Result<Self> {
        let d = self.d;
        self.push(Slice::Cup {
            pos,
            charge: charge.rem_euclid(d as i64) as u32,
        })
    }

    pub fn meter(self, positions: &[usize]) -> Result<Self> {
        self.push(Slice::Meter {
            positions: positions.to_vec(),
        })
    }

    pub fn boxed(self, name: &str, pos: usize, span: usize) -> Result<Self> {
        self.push(Slice::Box {
            name: name.to_string(),
            pos,
            span,
        })
    }

    pub fn scaled(mut self, s: ExactScalar) -> Self {
        self.prefactor = self.prefactor * s;
        self
    }

    /// Wire counts before each slice, followed by the output count.
    pub fn wire_counts(&self) -> Result<Vec<usize>> {
        let mut counts = Vec::with_capacity(self.slices.len() + 1);
        let mut n = self.wires_in;
        counts.push(n);
        for (idx, s) in self.slices.iter().enumerate() {
            let bad = |message: String| Error::Arity {
                slice: idx,
                message,
            };
            match s {
                Slice::Label { pos, charge } => {
                    if *pos == 0 || *pos > n {
                        return Err(bad(format!("label at wire {pos} of {n}")));
                    }
                    if *charge >= self.d {
                        return Err(bad(format!(
                            "label charge {charge} not reduced mod {}",
                            self.d
                        )));
                    }
                }
                Slice::Crossing { pos, sign } => {
                    if *pos == 0 || *pos >= n {
                        return Err(bad(format!(
                            "crossing at {pos} needs wires {pos}, {} of {n}",
                            pos + 1
                        )));
                    }
                    if *sign != 1 && *sign != -1 {
                        return Err(bad(format!("crossing sign {sign}")));
                    }
                }
                Slice::Cap { pos, charge } => {
                    if *pos == 0 || *pos > n + 1 {
                        return Err(bad(format!("cap at {pos} with {n} wires")));
                    }
                    if *charge >= self.d {
                        return Err(bad(format!(
                            "cap charge {charge} not reduced mod {}",
                            self.d
                        )));
                    }
                }
                Slice::Cup { pos, charge } => {
                    if *pos == 0 || *pos >= n {
                        return Err(bad(format!(
                            "cup at {pos} needs wires {pos}, {} of {n}",
                            pos + 1
                        )));
                    }
                    if *charge >= self.d {
                        return Err(bad(format!(
                            "cup charge {charge} not reduced mod {}",
                            self.d
                        )));
                    }
                }
                Slice::Box { pos, span, .. } => {
                    if *span == 0 || *pos == 0 || pos + span - 1 > n {
                        return Err(bad(format!(
                            "box on wires {pos}..{} of {n}",
                            pos + span - 1
                        )));
                    }
                }
                Slice::Meter { positions } | Slice::Closure { positions } => {
                    if idx + 1 != self.slices.len() {
                        return Err(bad(format!("{} must be the last slice", s.kind())));
                    }
                    let mut seen = vec![false; n + 1];
                    for &p in positions {
                        if p == 0 || p > n || seen[p] {
                            return Err(bad(format!("closure position {p} invalid for {n} wires")));
                        }
                        seen[p] = true;
                    }
                }
            }
            n = s.output_wires(n);
            counts.push(n);
        }
        Ok(counts)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::Domain(format!(
                "order d must be at least 2, got {}",
                self.d
            )));
        }
        if self.prefactor.d != self.d {
            return Err(Error::Domain(
                "prefactor order differs from diagram order".into(),
            ));
        }
        self.wire_counts().map(|_| ())
    }

    pub fn wires_out(&self) -> usize {
        *self.wire_counts().expect("valid diagram").last().unwrap()
    }

    /// Wires removed by a terminal meter or closure, counted on the input side as well.
    pub fn closed_wires(&self) -> usize {
        match self.slices.last() {
            Some(Slice::Meter { positions }) | Some(Slice::Closure { positions }) => {
                positions.len()
            }
            _ => 0,
        }
    }

    pub fn count(&self, kind: &str) -> usize {
        self.slices.iter().filter(|s| s.kind() == kind).count()
    }

    /// `self` followed by `other` on top.
    pub fn then(&self, other: &Diagram) -> Result<Diagram> {
        if other.d != self.d || other.wires_in != self.wires_out() {
            return Err(Error::Dimension(format!(
                "cannot stack a {}-wire input on a {}-wire output",
                other.wires_in,
                self.wires_out()
            )));
        }
        let mut slices = self.slices.clone();
        slices.extend(other.slices.iter().cloned());
        let out = Diagram {
            d: self.d,
            wires_in: self.wires_in,
            prefactor: self.prefactor * other.prefactor,
            slices,
        };
        out.validate()?;
        Ok(out)
    }

    /// Vertical reflection with conjugated prefactor.
    pub fn adjoint(&self) -> Result<Diagram> {
        let d = self.d;
        let neg = |c: u32| (d - c) % d;
        let mut pref = self.prefactor.conj();
        let mut slices = Vec::with_capacity(self.slices.len());
        for s in self.slices.iter().rev() {
            slices.push(match s {
                Slice::Label { pos, charge } => Slice::Label {
                    pos: *pos,
                    charge: neg(*charge),
                },
                Slice::Crossing { pos, sign } => Slice::Crossing {
                    pos: *pos,
                    sign: -sign,
                },
                Slice::Cap { pos, charge } => {
                    pref = pref * ExactScalar::delta(d, -1);
                    Slice::Cup {
                        pos: *pos,
                        charge: neg(*charge),
                    }
                }
                Slice::Cup { pos, charge } => {
                    pref = pref * ExactScalar::delta(d, 1);
                    Slice::Cap {
                        pos: *pos,
                        charge: neg(*charge),
                    }
                }
                other => {
                    return Err(Error::Unsupported(format!(
                        "adjoint of a {} slice",
                        other.kind()
                    )))
                }
            });
        }
        Ok(Diagram {
            d,
            wires_in: self.wires_out(),
            prefactor: pref,
            slices,
        })
    }
}

impl fmt::Display for Slice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |p: &[usize]| {
            p.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            Slice::Label { pos, charge } => write!(f, "L{pos}^{charge}"),
            Slice::Crossing { pos, sign } => {
                write!(f, "X{pos}{}", if *sign > 0 { "+" } else { "-" })
            }
            Slice::Cap { pos, charge } => write!(f, "Cap{pos}^{charge}"),
            Slice::Cup { pos, charge } => write!(f, "Cup{pos}^{charge}"),
            Slice::Box { name, pos, span } => write!(f, "[{name}]{pos}..{}", pos + span - 1),
            Slice::Meter { positions } => write!(f, "M{{{}}}", list(positions)),
            Slice::Closure { positions } => write!(f, "C{{{}}}", list(positions)),
        }
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.slices.iter().map(|s| s.to_string()).collect();
        write!(
            f,
            "d={} wires={} prefactor={} [{}]",
            self.d,
            self.wires_in,
            self.prefactor,
            body.join(" ")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_is_checked() {
        let err =
            Diagram::with_slices(2, 2, vec![Slice::Crossing { pos: 2, sign: 1 }]).unwrap_err();
        assert!(matches!(err, Error::Arity { slice: 0, .. }));
        let ok = Diagram::new(2, 0).cap(1, 0).unwrap().cup(1, 0).unwrap();
        assert_eq!(ok.wires_out(), 0);
        let err = Diagram::new(2, 2)
            .meter(&[1])
            .unwrap()
            .label(1, 1)
            .unwrap_err();
        assert!(matches!(err, Error::Arity { slice: 0, .. }));
    }

    #[test]
    fn adjoint_reverses() {
        let dg = Diagram::new(3, 2)
            .label(1, 1)
            .unwrap()
            .crossing(1, 1)
            .unwrap();
        let adj = dg.adjoint().unwrap();
        assert_eq!(
            adj.slices,
            vec![
                Slice::Crossing { pos: 1, sign: -1 },
                Slice::Label { pos: 1, charge: 2 }
            ]
        );
    }
}
