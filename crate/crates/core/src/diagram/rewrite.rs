use serde::Serialize;

use super::{evaluate_with, BoxRegistry, Diagram, Slice};
use crate::error::{Error, Result};
use crate::scalars::{ExactScalar, RootData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Rule {
    MeterExpansion,
    ReidemeisterII,
    QuditBraidSlide,
    CapTransport,
    CupTransport,
    LabelFusion,
    CircleRemoval,
    ReidemeisterI,
    ClosureContraction,
    ReidemeisterIII,
    Twist,
    Interchange,
}

/// Rules used by [`normalize`], in priority order.
pub const AUTOMATIC_RULES: [Rule; 9] = [
    Rule::MeterExpansion,
    Rule::ReidemeisterII,
    Rule::QuditBraidSlide,
    Rule::CapTransport,
    Rule::CupTransport,
    Rule::LabelFusion,
    Rule::CircleRemoval,
    Rule::ReidemeisterI,
    Rule::ClosureContraction,
];

impl Rule {
    pub const ALL: [Rule; 12] = [
        Rule::MeterExpansion,
        Rule::ReidemeisterII,
        Rule::QuditBraidSlide,
        Rule::CapTransport,
        Rule::CupTransport,
        Rule::LabelFusion,
        Rule::CircleRemoval,
        Rule::ReidemeisterI,
        Rule::ClosureContraction,
        Rule::ReidemeisterIII,
        Rule::Twist,
        Rule::Interchange,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Rule::MeterExpansion => "meter-expansion",
            Rule::ReidemeisterII => "reidemeister-2",
            Rule::QuditBraidSlide => "qudit-braid-slide",
            Rule::CapTransport => "cap-transport",
            Rule::CupTransport => "cup-transport",
            Rule::LabelFusion => "label-fusion",
            Rule::CircleRemoval => "circle-removal",
            Rule::ReidemeisterI => "reidemeister-1",
            Rule::ClosureContraction => "closure-contraction",
            Rule::ReidemeisterIII => "reidemeister-3",
            Rule::Twist => "twist",
            Rule::Interchange => "interchange",
        }
    }

    /// Rules whose location names a closed wire.
    fn acts_on_closure(&self) -> bool {
        matches!(
            self,
            Rule::CircleRemoval | Rule::ReidemeisterI | Rule::ClosureContraction
        )
    }
}

impl std::str::FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL
            .iter()
            .find(|r| r.name() == s)
            .copied()
            .ok_or_else(|| Error::Domain(format!("unknown rule '{s}'")))
    }
}

/// Slice index of a match; `wire` is the closed wire for closure moves and 0 otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Location {
    pub slice: usize,
    pub wire: usize,
}

impl Location {
    pub fn at(slice: usize) -> Self {
        Location { slice, wire: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RewriteStep {
    pub rule: Rule,
    pub location: Location,
    #[serde(serialize_with = "ser_scalar")]
    pub scalar: ExactScalar,
}

fn ser_scalar<S: serde::Serializer>(
    s: &ExactScalar,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    crate::scalars::ScalarDoc::from(s).serialize(ser)
}

/// Lexicographic complexity; every automatic rule strictly decreases it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Measure {
    pub meters: usize,
    pub closed_wires: usize,
    pub crossings: usize,
    pub caps_and_cups: usize,
    pub charged_caps_and_cups: usize,
    pub labels: usize,
    /// Pairs (label, crossing) with the crossing above the label.
    pub label_depth: usize,
}

pub fn complexity(dg: &Diagram) -> Measure {
    let mut m = Measure {
        meters: 0,
        closed_wires: 0,
        crossings: 0,
        caps_and_cups: 0,
        charged_caps_and_cups: 0,
        labels: 0,
        label_depth: 0,
    };
    let mut crossings_above = dg.count("crossing");
    for s in &dg.slices {
        match s {
            Slice::Meter { .. } => m.meters += 1,
            Slice::Closure { positions } => m.closed_wires += positions.len(),
            Slice::Crossing { .. } => {
                m.crossings += 1;
                crossings_above -= 1;
            }
            Slice::Cap { charge, .. } | Slice::Cup { charge, .. } => {
                m.caps_and_cups += 1;
                if *charge != 0 {
                    m.charged_caps_and_cups += 1;
                }
            }
            Slice::Label { .. } => {
                m.labels += 1;
                m.label_depth += crossings_above;
            }
            Slice::Box { .. } => {}
        }
    }
    m
}

fn mismatch(rule: Rule, loc: Location, why: &str) -> Error {
    Error::Pattern(format!(
        "{} at slice {}, wire {}: {why}",
        rule.name(),
        loc.slice,
        loc.wire
    ))
}

fn wires_of(s: &Slice) -> Option<(usize, usize)> {
    match s {
        Slice::Label { pos, .. } => Some((*pos, *pos)),
        Slice::Crossing { pos, .. } => Some((*pos, pos + 1)),
        _ => None,
    }
}

pub(crate) fn touches(s: &Slice, w: usize) -> bool {
    wires_of(s).map(|(a, b)| a <= w && w <= b).unwrap_or(true)
}

/// Adjacent slices that commute without a scalar.
fn commute(a: &Slice, b: &Slice) -> bool {
    match (a, b) {
        (Slice::Label { .. }, Slice::Label { .. }) => false,
        (
            Slice::Crossing { .. } | Slice::Label { .. },
            Slice::Crossing { .. } | Slice::Label { .. },
        ) => {
            let (a0, a1) = wires_of(a).unwrap();
            let (b0, b1) = wires_of(b).unwrap();
            a1 < b0 || b1 < a0
        }
        _ => false,
    }
}

/// When every slice but a final closure is a label or crossing, the closure's positions.
fn pure_closure(dg: &Diagram) -> Option<Vec<usize>> {
    match dg.slices.last() {
        Some(Slice::Closure { positions }) => {
            let body = &dg.slices[..dg.slices.len() - 1];
            if body
                .iter()
                .all(|s| matches!(s, Slice::Label { .. } | Slice::Crossing { .. }))
            {
                Some(positions.clone())
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Removes closed wire `w` from a pure closure diagram.
fn remove_closed_wire(dg: &mut Diagram, w: usize) {
    let shift = |p: &mut usize| {
        if *p > w {
            *p -= 1
        }
    };
    let last = dg.slices.len() - 1;
    for s in dg.slices[..last].iter_mut() {
        match s {
            Slice::Label { pos, .. } | Slice::Crossing { pos, .. } => shift(pos),
            _ => unreachable!("pure closure body"),
        }
    }
    if let Slice::Closure { positions } = &mut dg.slices[last] {
        positions.retain(|&p| p != w);
        positions.iter_mut().for_each(shift);
        if positions.is_empty() {
            dg.slices.pop();
        }
    }
    dg.wires_in -= 1;
}

fn touching(dg: &Diagram, w: usize) -> Vec<usize> {
    let last = dg.slices.len() - 1;
    (0..last).filter(|&i| touches(&dg.slices[i], w)).collect()
}

/// ω^{h/2} as a residual coefficient.
fn omega_half(d: u32, h: i32) -> ExactScalar {
    let r = RootData::new(d).expect("valid order");
    ExactScalar::complex(d, r.omega_half_pow(h))
}

pub fn apply_rule(dg: &Diagram, rule: Rule, loc: Location) -> Result<(Diagram, RewriteStep)> {
    let d = dg.d;
    let mut out = dg.clone();
    let s = loc.slice;
    let fail = |why: &str| mismatch(rule, loc, why);
    let get = |i: usize| dg.slices.get(i);
    let one = ExactScalar::one(d);

    let scalar = match rule {
        Rule::MeterExpansion => match get(s) {
            Some(Slice::Meter { positions }) => {
                out.slices[s] = Slice::Closure {
                    positions: positions.clone(),
                };
                ExactScalar::delta(d, -(positions.len() as i32))
            }
            _ => return Err(fail("no meter")),
        },
        Rule::ReidemeisterII => match (get(s), get(s + 1)) {
            (
                Some(Slice::Crossing { pos: a, sign: x }),
                Some(Slice::Crossing { pos: b, sign: y }),
            ) if a == b && x == &-y => {
                out.slices.drain(s..s + 2);
                one
            }
            _ => return Err(fail("needs a crossing followed by its inverse")),
        },
        Rule::QuditBraidSlide => match (get(s), get(s + 1)) {
            (Some(Slice::Label { pos: l, charge }), Some(Slice::Crossing { pos: c, sign }))
                if *charge != 0 =>
            {
                let new_pos = if *sign > 0 && l == c {
                    c + 1
                } else if *sign < 0 && *l == c + 1 {
                    *c
                } else {
                    return Err(fail("label is not on the sliding strand"));
                };
                out.slices[s] = Slice::Crossing {
                    pos: *c,
                    sign: *sign,
                };
                out.slices[s + 1] = Slice::Label {
                    pos: new_pos,
                    charge: *charge,
                };
                one
            }
            _ => return Err(fail("needs a charged label followed by a crossing")),
        },
        Rule::CapTransport => match get(s) {
            Some(Slice::Cap { pos, charge }) if *charge != 0 => {
                out.slices[s] = Slice::Cap {
                    pos: *pos,
                    charge: 0,
                };
                out.slices.insert(
                    s + 1,
                    Slice::Label {
                        pos: pos + 1,
                        charge: *charge,
                    },
                );
                ExactScalar::zeta(d, (*charge as i64).pow(2))
            }
            _ => return Err(fail("needs a charged cap")),
        },
        Rule::CupTransport => match get(s) {
            Some(Slice::Cup { pos, charge }) if *charge != 0 => {
                out.slices[s] = Slice::Cup {
                    pos: *pos,
                    charge: 0,
                };
                out.slices.insert(
                    s,
                    Slice::Label {
                        pos: pos + 1,
                        charge: *charge,
                    },
                );
                ExactScalar::zeta(d, -(*charge as i64).pow(2))
            }
            _ => return Err(fail("needs a charged cup")),
        },
        Rule::LabelFusion => {
            label_fusion(dg, &mut out, s).ok_or_else(|| fail("no label to fuse"))?
        }
        Rule::CircleRemoval => {
            if loc.wire == 0 {
                match (get(s), get(s + 1)) {
                    (
                        Some(Slice::Cap { pos: a, charge: x }),
                        Some(Slice::Cup { pos: b, charge: y }),
                    ) if a == b => {
                        out.slices.drain(s..s + 2);
                        if (x + y) % d == 0 {
                            ExactScalar::delta(d, 1)
                        } else {
                            ExactScalar::zero(d)
                        }
                    }
                    _ => return Err(fail("needs a cap closed by a cup")),
                }
            } else {
                let (low, _) =
                    closure_site(dg, loc.wire).ok_or_else(|| fail("wire is not closed"))?;
                if low != s {
                    return Err(fail("location is not the lowest slice on the wire"));
                }
                let t = touching(dg, loc.wire);
                let scalar = match t.as_slice() {
                    [] => ExactScalar::delta(d, 1),
                    [i] => match &dg.slices[*i] {
                        Slice::Label { charge, .. } => {
                            out.slices.remove(*i);
                            if *charge == 0 {
                                ExactScalar::delta(d, 1)
                            } else {
                                ExactScalar::zero(d)
                            }
                        }
                        _ => return Err(fail("closed wire carries a crossing")),
                    },
                    _ => return Err(fail("closed wire is not a free circle")),
                };
                remove_closed_wire(&mut out, loc.wire);
                scalar
            }
        }
        Rule::ReidemeisterI => {
            if loc.wire == 0 {
                reidemeister_one(dg, &mut out, s).ok_or_else(|| fail("no curl or twist"))?
            } else {
                let (low, _) =
                    closure_site(dg, loc.wire).ok_or_else(|| fail("wire is not closed"))?;
                if low != s {
                    return Err(fail("location is not the lowest slice on the wire"));
                }
                match touching(dg, loc.wire).as_slice() {
                    [i] => match &dg.slices[*i] {
                        Slice::Crossing { sign, .. } => {
                            let sign = *sign;
                            out.slices.remove(*i);
                            remove_closed_wire(&mut out, loc.wire);
                            omega_half(d, -(sign as i32))
                        }
                        _ => return Err(fail("closed wire carries a label")),
                    },
                    _ => return Err(fail("closed wire needs exactly one crossing")),
                }
            }
        }
        Rule::ClosureContraction => {
            let (low, _) = closure_site(dg, loc.wire).ok_or_else(|| fail("wire is not closed"))?;
            if low != s || loc.wire == 0 {
                return Err(fail("location is not the lowest slice on the wire"));
            }
            closure_contraction(dg, &mut out, loc.wire)
                .ok_or_else(|| fail("no contractible crossing pair"))?
        }
        Rule::ReidemeisterIII => match (get(s), get(s + 1), get(s + 2)) {
            (
                Some(Slice::Crossing { pos: p1, sign: a }),
                Some(Slice::Crossing { pos: p2, sign: b }),
                Some(Slice::Crossing { pos: p3, sign: c }),
            ) if p1 == p3
                && (p1 + 1 == *p2 || p2 + 1 == *p1)
                && ((a == b && b == c) || a == &-c) =>
            {
                out.slices[s] = Slice::Crossing { pos: *p2, sign: *c };
                out.slices[s + 1] = Slice::Crossing { pos: *p1, sign: *b };
                out.slices[s + 2] = Slice::Crossing { pos: *p2, sign: *a };
                one
            }
            _ => return Err(fail("needs a braid triangle")),
        },
        Rule::Twist => match (get(s), get(s + 1)) {
            (
                Some(Slice::Label { pos: w, charge: a }),
                Some(Slice::Label { pos: u, charge: b }),
            ) if w != u => {
                out.slices.swap(s, s + 1);
                let e = (*a as i64) * (*b as i64);
                ExactScalar::q(d, if u < w { e } else { -e })
            }
            _ => return Err(fail("needs labels on two different wires")),
        },
        Rule::Interchange => match (get(s), get(s + 1)) {
            (Some(a), Some(b)) if commute(a, b) => {
                out.slices.swap(s, s + 1);
                one
            }
            _ => return Err(fail("slices do not commute")),
        },
    };
    out.prefactor = out.prefactor * scalar;
    Ok((
        out,
        RewriteStep {
            rule,
            location: loc,
            scalar,
        },
    ))
}

/// For a closed wire of a pure closure diagram: its lowest touching slice
/// (or the closure index when untouched) and the touching slices.
fn closure_site(dg: &Diagram, w: usize) -> Option<(usize, Vec<usize>)> {
    let positions = pure_closure(dg)?;
    if !positions.contains(&w) {
        return None;
    }
    let t = touching(dg, w);
    Some((t.first().copied().unwrap_or(dg.slices.len() - 1), t))
}

fn label_fusion(dg: &Diagram, out: &mut Diagram, s: usize) -> Option<ExactScalar> {
    let d = dg.d;
    let Slice::Label { pos: w0, charge: a } = dg.slices.get(s)? else {
        return None;
    };
    if *a == 0 {
        out.slices.remove(s);
        return Some(ExactScalar::one(d));
    }
    let mut w = *w0;
    let mut passed: Vec<(bool, u32)> = Vec::new();
    for t in s + 1..dg.slices.len() {
        match &dg.slices[t] {
            Slice::Label { pos, charge } if *pos == w => {
                let b = *charge as i64;
                let e: i64 = passed
                    .iter()
                    .map(|&(below, g)| if below { b * g as i64 } else { -b * g as i64 })
                    .sum();
                out.slices[s] = Slice::Label {
                    pos: *w0,
                    charge: (a + charge) % d,
                };
                out.slices.remove(t);
                return Some(ExactScalar::q(d, e));
            }
            Slice::Label { pos, charge } => passed.push((w < *pos, *charge)),
            Slice::Crossing { pos, .. } => {
                if *pos == w || pos + 1 == w {
                    return None;
                }
            }
            Slice::Cap { pos, charge } => {
                passed.push((w < *pos, *charge));
                if w >= *pos {
                    w += 2;
                }
            }
            Slice::Cup { pos, charge } => {
                if w == *pos || w == pos + 1 {
                    return None;
                }
                passed.push((w < *pos, *charge));
                if w > pos + 1 {
                    w -= 2;
                }
            }
            Slice::Box { .. } | Slice::Meter { .. } | Slice::Closure { .. } => return None,
        }
    }
    None
}

fn reidemeister_one(dg: &Diagram, out: &mut Diagram, s: usize) -> Option<ExactScalar> {
    let d = dg.d;
    let get = |i: usize| dg.slices.get(i);
    if let (
        Some(Slice::Cap { pos: c, charge: 0 }),
        Some(Slice::Crossing { pos: x, sign }),
        Some(Slice::Cup { pos: u, charge: 0 }),
    ) = (get(s), get(s + 1), get(s + 2))
    {
        if c == u && (*x + 1 == *c || *x == c + 1) {
            out.slices.drain(s..s + 3);
            return Some(omega_half(d, -(*sign as i32)));
        }
    }
    if let (Some(Slice::Cap { pos: c, charge: 0 }), Some(Slice::Crossing { pos: x, sign })) =
        (get(s), get(s + 1))
    {
        if c == x {
            out.slices.remove(s + 1);
            return Some(omega_half(d, *sign as i32));
        }
    }
    if let (Some(Slice::Crossing { pos: x, sign }), Some(Slice::Cup { pos: u, charge: 0 })) =
        (get(s), get(s + 1))
    {
        if x == u {
            out.slices.remove(s);
            return Some(omega_half(d, *sign as i32));
        }
    }
    None
}

/// Closing a wire shared by two crossings leaves one crossing on its neighbours.
fn closure_contraction(dg: &Diagram, out: &mut Diagram, w: usize) -> Option<ExactScalar> {
    let d = dg.d;
    let t = touching(dg, w);
    let [a, b] = t.as_slice() else {
        return None;
    };
    let (a, b) = (*a, *b);
    let sign_at = |i: usize, p: usize| match &dg.slices[i] {
        Slice::Crossing { pos, sign } if *pos == p => Some(*sign),
        _ => None,
    };
    let (lower_is_left, s_left, s_right) = match (
        sign_at(a, w - 1),
        sign_at(b, w),
        sign_at(a, w),
        sign_at(b, w - 1),
    ) {
        (Some(l), Some(r), _, _) => (true, l, r),
        (_, _, Some(r), Some(l)) => (false, l, r),
        _ => return None,
    };
    let (new_sign, half) = match (lower_is_left, s_left, s_right) {
        (true, 1, 1) => (1, -1),
        (true, 1, -1) | (true, -1, 1) => (-1, -1),
        (false, 1, -1) | (false, -1, 1) => (1, 1),
        (false, -1, -1) => (-1, 1),
        _ => return None,
    };
    let mut slices = dg.slices.clone();
    let between = a + 1..b;
    let at = if between
        .clone()
        .all(|i| commute(&dg.slices[a], &dg.slices[i]))
    {
        let x = slices.remove(a);
        slices.insert(b - 1, x);
        b - 1
    } else if between
        .clone()
        .all(|i| commute(&dg.slices[b], &dg.slices[i]))
    {
        let x = slices.remove(b);
        slices.insert(a + 1, x);
        a
    } else {
        return None;
    };
    slices[at] = Slice::Crossing {
        pos: w - 1,
        sign: new_sign,
    };
    slices.remove(at + 1);
    out.slices = slices;
    remove_closed_wire(out, w);
    Some(omega_half(d, half))
}

/// Matches of `rule`, ordered lowest slice first, then leftmost wire.
pub fn find_matches(dg: &Diagram, rule: Rule) -> Vec<Location> {
    let mut locs = Vec::new();
    for s in 0..dg.slices.len() {
        let loc = Location::at(s);
        if apply_rule(dg, rule, loc).is_ok() {
            locs.push(loc);
        }
    }
    if rule.acts_on_closure() {
        if let Some(positions) = pure_closure(dg) {
            for w in positions {
                if let Some((low, _)) = closure_site(dg, w) {
                    let loc = Location {
                        slice: low,
                        wire: w,
                    };
                    if apply_rule(dg, rule, loc).is_ok() {
                        locs.push(loc);
                    }
                }
            }
        }
    }
    locs.sort();
    locs
}

/// Step cap for [`normalize`]; far above the measure-based bound for practical inputs.
const MAX_STEPS: usize = 100_000;

/// Applies the automatic rules to a fixed point: the first rule in priority
/// order with a match fires at its lowest, leftmost location.
pub fn normalize(dg: &Diagram) -> (Diagram, Vec<RewriteStep>) {
    let mut cur = dg.clone();
    let mut steps = Vec::new();
    'outer: while steps.len() < MAX_STEPS {
        for rule in AUTOMATIC_RULES {
            if let Some(loc) = find_matches(&cur, rule).first() {
                let (next, step) = apply_rule(&cur, rule, *loc).expect("matched location applies");
                debug_assert!(
                    complexity(&next) < complexity(&cur),
                    "{} did not reduce",
                    rule.name()
                );
                cur = next;
                steps.push(step);
                continue 'outer;
            }
        }
        break;
    }
    (cur, steps)
}

/// Re-applies recorded steps and checks each emitted scalar.
pub fn replay(dg: &Diagram, steps: &[RewriteStep]) -> Result<Diagram> {
    let mut cur = dg.clone();
    for (i, st) in steps.iter().enumerate() {
        let (next, again) = apply_rule(&cur, st.rule, st.location)?;
        if again.scalar != st.scalar {
            return Err(Error::Pattern(format!(
                "step {i} emitted a different scalar on replay"
            )));
        }
        cur = next;
    }
    Ok(cur)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Equivalence {
    pub equal: bool,
    pub deviation: f64,
    /// Row and column of the largest deviation when not equal.
    pub witness: Option<(usize, usize)>,
}

pub fn equivalent(a: &Diagram, b: &Diagram, tol: f64) -> Result<Equivalence> {
    if a.d != b.d
        || a.wires_in - a.closed_wires() != b.wires_in - b.closed_wires()
        || a.wires_out() != b.wires_out()
    {
        return Err(Error::Dimension(
            "diagrams have different signatures".into(),
        ));
    }
    let ea = evaluate_with(a, &BoxRegistry::builtin(a.d)?)?.to_op();
    let eb = evaluate_with(b, &BoxRegistry::builtin(b.d)?)?.to_op();
    let (i, j, dev) = ea.max_abs_diff_at(&eb)?;
    let equal = dev < tol;
    Ok(Equivalence {
        equal,
        deviation: dev,
        witness: if equal { None } else { Some((i, j)) },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::evaluate;

    fn sound(before: &Diagram, after: &Diagram) -> f64 {
        evaluate(before)
            .unwrap()
            .max_abs_diff(&evaluate(after).unwrap())
            .unwrap()
    }

    #[test]
    fn fusion_example() {
        let dg = Diagram::new(3, 1).label(1, 1).unwrap().label(1, 2).unwrap();
        let (out, step) = apply_rule(&dg, Rule::LabelFusion, Location::at(0)).unwrap();
        assert_eq!(out.slices, vec![Slice::Label { pos: 1, charge: 0 }]);
        assert!(step.scalar.is_one());
    }

    #[test]
    fn fusion_across_charged_cap_and_cup() {
        for d in [2, 3, 5] {
            let dg = Diagram::new(d, 4)
                .cap(5, 1)
                .unwrap()
                .label(6, 1)
                .unwrap()
                .cup(1, 1)
                .unwrap()
                .label(3, 2)
                .unwrap()
                .label(4, 1)
                .unwrap();
            let (out, _) = apply_rule(&dg, Rule::LabelFusion, Location::at(1)).unwrap();
            assert!(sound(&dg, &out) < 1e-9, "d={d}");
        }
    }

    #[test]
    fn transport_example() {
        for d in [2, 3, 5] {
            for a in 1..d as i64 {
                let dg = Diagram::new(d, 0).cap(1, a).unwrap();
                let (out, step) = apply_rule(&dg, Rule::CapTransport, Location::at(0)).unwrap();
                assert_eq!(step.scalar.zeta_exp as i64, (a * a) % (d * d) as i64);
                assert!(sound(&dg, &out) < 1e-12);
            }
        }
    }

    #[test]
    fn curl_example() {
        let dg = Diagram::new(3, 1)
            .cap(2, 0)
            .unwrap()
            .crossing(1, 1)
            .unwrap()
            .cup(2, 0)
            .unwrap();
        let (out, step) = apply_rule(&dg, Rule::ReidemeisterI, Location::at(0)).unwrap();
        assert!(out.slices.is_empty());
        let r = RootData::new(3).unwrap();
        assert!((step.scalar.value() - r.omega_half_pow(-1)).norm() < 1e-12);
        assert!(sound(&dg, &out) < 1e-12);
    }

    #[test]
    fn normal_form_is_fixed() {
        let dg = Diagram::new(2, 2).crossing(1, 1).unwrap();
        let (out, steps) = normalize(&dg);
        assert_eq!(out, dg);
        assert!(steps.is_empty());
    }

    #[test]
    fn one_reidemeister_two() {
        let dg = Diagram::new(2, 2)
            .crossing(1, 1)
            .unwrap()
            .crossing(1, -1)
            .unwrap()
            .crossing(1, 1)
            .unwrap();
        let (out, steps) = normalize(&dg);
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].rule, Rule::ReidemeisterII);
        assert_eq!(out.slices, vec![Slice::Crossing { pos: 1, sign: 1 }]);
    }

    #[test]
    fn swap_reduces_to_one_crossing() {
        for d in [2, 3, 5] {
            let dg = super::super::figures::swap_diagram(d).unwrap();
            let (out, steps) = normalize(&dg);
            assert_eq!(
                out.slices,
                vec![Slice::Crossing { pos: 1, sign: 1 }],
                "d={d}"
            );
            assert_eq!(out.prefactor.delta_exp, -2);
            assert!((out.prefactor.coeff - 1.0).norm() < 1e-12);
            assert!(sound(&dg, &out) < 1e-12);
            assert_eq!(replay(&dg, &steps).unwrap(), out);
        }
    }

    #[test]
    fn relay_reduces_to_one_crossing() {
        for h in 1..=3 {
            let dg = super::super::figures::relay_diagram(2, h).unwrap();
            let (out, _) = normalize(&dg);
            assert_eq!(
                out.slices,
                vec![Slice::Crossing { pos: 1, sign: 1 }],
                "h={h}"
            );
            assert_eq!(out.prefactor.delta_exp, -2 * (h as i32 + 1));
            assert!(
                (out.prefactor.value() - crate::scalars::delta_pow(2, -2 * (h as i32 + 1))).norm()
                    < 1e-12
            );
        }
    }
}
