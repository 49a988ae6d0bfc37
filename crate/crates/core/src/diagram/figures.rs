//! Builders for the standard diagrams used by the protocols and tests.

use super::{Diagram, Slice};
use crate::error::{Error, Result};
use crate::scalars::ExactScalar;

/// Identity on `n` wires.
pub fn wires(d: u32, n: usize) -> Diagram {
    Diagram::new(d, n)
}

/// Braids on (1,2) and (3,4), the inverse braid on (2,3), then a meter on wires 2 and 3.
pub fn swap_diagram(d: u32) -> Result<Diagram> {
    Diagram::new(d, 4)
        .crossing(1, 1)?
        .crossing(3, 1)?
        .crossing(2, -1)?
        .meter(&[2, 3])
}

/// Chain of `helpers + 1` braids on odd positions of `2·helpers + 4` wires,
/// disentangling inverse braids on the even positions, and a meter on every inner wire.
pub fn relay_diagram(d: u32, helpers: usize) -> Result<Diagram> {
    if helpers == 0 {
        return Err(Error::Domain("relay needs at least one helper".into()));
    }
    let n = 2 * helpers + 4;
    let mut dg = Diagram::new(d, n);
    for p in (1..n).step_by(2) {
        dg = dg.crossing(p, 1)?;
    }
    for p in (2..n - 1).step_by(2) {
        dg = dg.crossing(p, -1)?;
    }
    let inner: Vec<usize> = (2..n).collect();
    dg.meter(&inner)
}

/// One-wire curl: a cap to the right of the wire, a crossing of sign `sign`, a cup.
pub fn curl(d: u32, sign: i8) -> Result<Diagram> {
    Diagram::new(d, 1).cap(2, 0)?.crossing(1, sign)?.cup(2, 0)
}

/// Closed loop carrying `charge`.
pub fn circle(d: u32, charge: i64) -> Result<Diagram> {
    Diagram::new(d, 0).cap(1, charge)?.cup(1, 0)
}

/// Zig-zag on one wire: a cap on the right, then a cup on the left.
pub fn snake(d: u32) -> Result<Diagram> {
    Diagram::new(d, 1).cap(2, 0)?.cup(1, 0)
}

/// Both sides of the label slide through a positive crossing.
pub fn qudit_braid_sides(d: u32, k: i64) -> Result<(Diagram, Diagram)> {
    let before = Diagram::new(d, 2).label(1, k)?.crossing(1, 1)?;
    let after = Diagram::new(d, 2).crossing(1, 1)?.label(2, k)?;
    Ok((before, after))
}

/// The 2-cable double crossing on wires 3..6 of eight.
pub const DOUBLE_BRAID_WORD: [(usize, i8); 8] = [
    (4, 1),
    (3, 1),
    (5, 1),
    (4, 1),
    (4, 1),
    (3, 1),
    (5, 1),
    (4, 1),
];

/// Two qudits as cap pairs `(i, -i)`, `(j, -j)`, then the double braid on
/// the inner caps; the right side is the same caps scaled by `q^{2ij}`.
pub fn double_braid_sides(d: u32, i: i64, j: i64) -> Result<(Diagram, Diagram)> {
    let caps = Diagram::new(d, 0)
        .cap(1, i)?
        .cap(3, -i)?
        .cap(5, j)?
        .cap(7, -j)?;
    let mut lhs = caps.clone();
    for (p, s) in DOUBLE_BRAID_WORD {
        lhs = lhs.crossing(p, s)?;
    }
    let rhs = caps.scaled(ExactScalar::q(d, 2 * i * j));
    Ok((lhs, rhs))
}

/// Basis state `|b⟩` built from labels, followed by the reflection of `|a⟩`,
/// with every wire closed; the value is `⟨a|b⟩`.
pub fn inner_product_picture(d: u32, a: &[u32], b: &[u32]) -> Result<Diagram> {
    if a.len() != b.len() {
        return Err(Error::Dimension("label vectors differ in length".into()));
    }
    let m = a.len();
    let labels = |x: &[u32]| -> Result<Diagram> {
        let mut dg = Diagram::new(d, m);
        for (w, &k) in x.iter().enumerate() {
            dg = dg.label(w + 1, k as i64)?;
        }
        Ok(dg)
    };
    let mut dg = labels(b)?.then(&labels(a)?.adjoint()?)?;
    dg.slices.push(Slice::Meter {
        positions: (1..=m).collect(),
    });
    dg.validate()?;
    Ok(dg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{equivalent, evaluate, Evaluation};

    #[test]
    fn shapes() {
        let r = relay_diagram(2, 3).unwrap();
        assert_eq!(r.wires_in, 10);
        assert_eq!(r.count("crossing"), 9);
        assert_eq!(r.wires_out(), 2);
        assert_eq!(
            swap_diagram(3).unwrap().to_string(),
            "d=3 wires=4 prefactor=1 [X1+ X3+ X2- M{2,3}]"
        );
    }

    #[test]
    fn slide_sides_agree() {
        for d in [2, 3, 5] {
            for k in 0..d as i64 {
                let (a, b) = qudit_braid_sides(d, k).unwrap();
                assert!(equivalent(&a, &b, 1e-9).unwrap().equal);
            }
        }
    }

    #[test]
    fn double_braid_d2() {
        for i in 0..2 {
            for j in 0..2 {
                let (a, b) = double_braid_sides(2, -i, j).unwrap();
                assert!(equivalent(&a, &b, 1e-9).unwrap().equal, "i={i} j={j}");
            }
        }
    }

    #[test]
    fn inner_product_on_basis() {
        let d = 3;
        for a in 0..9u32 {
            for b in 0..9u32 {
                let la = [a / 3, a % 3];
                let lb = [b / 3, b % 3];
                let dg = inner_product_picture(d, &la, &lb).unwrap();
                let Evaluation::Op(op) = evaluate(&dg).unwrap() else {
                    panic!()
                };
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((op.get(0, 0).re - expect).abs() < 1e-12 && op.get(0, 0).im.abs() < 1e-12);
            }
        }
    }
}
