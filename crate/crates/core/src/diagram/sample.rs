//! Random diagrams with a planted match for a chosen rule.

use rand::seq::IndexedRandom;
use rand::Rng;

use super::{find_matches, Diagram, Location, Rule, Slice};

pub const MAX_WIRES: usize = 6;

fn charge<R: Rng + ?Sized>(rng: &mut R, d: u32) -> u32 {
    rng.random_range(0..d)
}

fn nonzero<R: Rng + ?Sized>(rng: &mut R, d: u32) -> u32 {
    rng.random_range(1..d)
}

fn sign<R: Rng + ?Sized>(rng: &mut R) -> i8 {
    if rng.random_bool(0.5) {
        1
    } else {
        -1
    }
}

/// Random labels and crossings on `n` wires.
pub fn pure_slices<R: Rng + ?Sized>(rng: &mut R, d: u32, n: usize, len: usize) -> Vec<Slice> {
    if n == 0 {
        return Vec::new();
    }
    (0..len)
        .map(|_| {
            if n >= 2 && rng.random_bool(0.5) {
                Slice::Crossing {
                    pos: rng.random_range(1..n),
                    sign: sign(rng),
                }
            } else {
                Slice::Label {
                    pos: rng.random_range(1..=n),
                    charge: charge(rng, d),
                }
            }
        })
        .collect()
}

/// Random slices that start and end on `n` wires, never exceeding [`MAX_WIRES`].
pub fn balanced_slices<R: Rng + ?Sized>(rng: &mut R, d: u32, n: usize, len: usize) -> Vec<Slice> {
    let mut out = Vec::new();
    let mut cur = n;
    for i in 0..len {
        let left = len - i;
        let must_close = cur > n && (cur - n) / 2 >= left;
        let roll: f64 = rng.random();
        if must_close || (cur > n && roll < 0.2) {
            out.push(Slice::Cup {
                pos: rng.random_range(1..cur),
                charge: charge(rng, d),
            });
            cur -= 2;
        } else if cur + 2 <= MAX_WIRES && (cur - n) / 2 + 1 < left && roll < 0.4 {
            out.push(Slice::Cap {
                pos: rng.random_range(1..=cur + 1),
                charge: charge(rng, d),
            });
            cur += 2;
        } else {
            out.extend(pure_slices(rng, d, cur, 1));
        }
    }
    while cur > n {
        out.push(Slice::Cup {
            pos: rng.random_range(1..cur),
            charge: charge(rng, d),
        });
        cur -= 2;
    }
    out
}

fn framed<R: Rng + ?Sized>(rng: &mut R, d: u32, n: usize, pattern: Vec<Slice>) -> Diagram {
    let (a, b) = (rng.random_range(0..4), rng.random_range(0..4));
    let n_after = pattern.iter().fold(n, |k, s| s.output_wires(k));
    let mut slices = balanced_slices(rng, d, n, a);
    slices.extend(pattern);
    slices.extend(balanced_slices(rng, d, n_after, b));
    Diagram::with_slices(d, n, slices).expect("sampled diagram is valid")
}

/// A closure of wire `w` appended to a pure body.
fn closed(d: u32, n: usize, mut body: Vec<Slice>, positions: Vec<usize>) -> Diagram {
    body.push(Slice::Closure { positions });
    Diagram::with_slices(d, n, body).expect("sampled closure is valid")
}

/// A random diagram on at most [`MAX_WIRES`] wires in which `rule` has at least one match.
pub fn planted<R: Rng + ?Sized>(rng: &mut R, d: u32, rule: Rule) -> Diagram {
    loop {
        let dg = attempt(rng, d, rule);
        if !find_matches(&dg, rule).is_empty() {
            return dg;
        }
    }
}

fn attempt<R: Rng + ?Sized>(rng: &mut R, d: u32, rule: Rule) -> Diagram {
    let n = rng.random_range(2..=4);
    let p = rng.random_range(1..n);
    match rule {
        Rule::MeterExpansion => {
            let len = rng.random_range(0..6);
            let body = pure_slices(rng, d, n, len);
            let k = rng.random_range(1..=n);
            let mut all: Vec<usize> = (1..=n).collect();
            let mut positions = Vec::new();
            for _ in 0..k {
                let i = rng.random_range(0..all.len());
                positions.push(all.remove(i));
            }
            let mut slices = body;
            slices.push(Slice::Meter { positions });
            Diagram::with_slices(d, n, slices).expect("valid")
        }
        Rule::ReidemeisterII => {
            let s = sign(rng);
            framed(
                rng,
                d,
                n,
                vec![
                    Slice::Crossing { pos: p, sign: s },
                    Slice::Crossing { pos: p, sign: -s },
                ],
            )
        }
        Rule::QuditBraidSlide => {
            let s = sign(rng);
            let l = if s > 0 { p } else { p + 1 };
            {
                let pat = vec![
                    Slice::Label {
                        pos: l,
                        charge: nonzero(rng, d),
                    },
                    Slice::Crossing { pos: p, sign: s },
                ];
                framed(rng, d, n, pat)
            }
        }
        Rule::CapTransport => {
            let pat = vec![Slice::Cap {
                pos: rng.random_range(1..=n + 1),
                charge: nonzero(rng, d),
            }];
            framed(rng, d, n, pat)
        }
        Rule::CupTransport => {
            let pat = vec![Slice::Cup {
                pos: p,
                charge: nonzero(rng, d),
            }];
            framed(rng, d, n, pat)
        }
        Rule::LabelFusion => {
            let w = rng.random_range(1..=n);
            let mut mid = Vec::new();
            for _ in 0..rng.random_range(0..3) {
                let u = rng.random_range(1..=n);
                if u != w {
                    mid.push(Slice::Label {
                        pos: u,
                        charge: charge(rng, d),
                    });
                }
            }
            let mut pat = vec![Slice::Label {
                pos: w,
                charge: charge(rng, d),
            }];
            pat.extend(mid);
            pat.push(Slice::Label {
                pos: w,
                charge: charge(rng, d),
            });
            framed(rng, d, n, pat)
        }
        Rule::CircleRemoval => {
            if rng.random_bool(0.5) {
                let c = rng.random_range(1..=n + 1);
                {
                    let pat = vec![
                        Slice::Cap {
                            pos: c,
                            charge: charge(rng, d),
                        },
                        Slice::Cup {
                            pos: c,
                            charge: charge(rng, d),
                        },
                    ];
                    framed(rng, d, n, pat)
                }
            } else {
                let w = rng.random_range(1..=n);
                let mut body: Vec<Slice> = {
                    let len = rng.random_range(0..5);
                    pure_slices(rng, d, n, len)
                }
                .into_iter()
                .filter(|s| !super::rewrite_touches(s, w))
                .collect();
                if rng.random_bool(0.5) {
                    let at = rng.random_range(0..=body.len());
                    body.insert(
                        at,
                        Slice::Label {
                            pos: w,
                            charge: charge(rng, d),
                        },
                    );
                }
                closed(d, n, body, vec![w])
            }
        }
        Rule::ReidemeisterI => match rng.random_range(0..4) {
            0 => {
                let c = rng.random_range(2..=n + 1);
                let x = if c > n || rng.random_bool(0.5) {
                    c - 1
                } else {
                    c + 1
                };
                {
                    let pat = vec![
                        Slice::Cap { pos: c, charge: 0 },
                        Slice::Crossing {
                            pos: x,
                            sign: sign(rng),
                        },
                        Slice::Cup { pos: c, charge: 0 },
                    ];
                    framed(rng, d, n, pat)
                }
            }
            1 => {
                let c = rng.random_range(1..=n + 1);
                {
                    let pat = vec![
                        Slice::Cap { pos: c, charge: 0 },
                        Slice::Crossing {
                            pos: c,
                            sign: sign(rng),
                        },
                    ];
                    framed(rng, d, n, pat)
                }
            }
            2 => {
                let pat = vec![
                    Slice::Crossing {
                        pos: p,
                        sign: sign(rng),
                    },
                    Slice::Cup { pos: p, charge: 0 },
                ];
                framed(rng, d, n, pat)
            }
            _ => {
                let n = n + 1;
                let w = rng.random_range(1..=n);
                let x = if w == 1 {
                    1
                } else if w == n || rng.random_bool(0.5) {
                    w - 1
                } else {
                    w
                };
                let mut body: Vec<Slice> = {
                    let len = rng.random_range(0..5);
                    pure_slices(rng, d, n, len)
                }
                .into_iter()
                .filter(|s| !super::rewrite_touches(s, w))
                .collect();
                let at = rng.random_range(0..=body.len());
                body.insert(
                    at,
                    Slice::Crossing {
                        pos: x,
                        sign: sign(rng),
                    },
                );
                closed(d, n, body, vec![w])
            }
        },
        Rule::ClosureContraction => {
            let n = rng.random_range(3..=5);
            let w = rng.random_range(2..n);
            let lower_left = rng.random_bool(0.5);
            let signs = if lower_left {
                [(1, 1), (1, -1), (-1, 1)]
            } else {
                [(1, -1), (-1, 1), (-1, -1)]
            };
            let (s, t) = *signs.choose(rng).expect("nonempty");
            let left = Slice::Crossing {
                pos: w - 1,
                sign: s,
            };
            let right = Slice::Crossing { pos: w, sign: t };
            let mut body: Vec<Slice> = {
                let len = rng.random_range(0..5);
                pure_slices(rng, d, n, len)
            }
            .into_iter()
            .filter(|s| !super::rewrite_touches(s, w))
            .collect();
            let a = rng.random_range(0..=body.len());
            let b = rng.random_range(a..=body.len());
            let (first, second) = if lower_left {
                (left, right)
            } else {
                (right, left)
            };
            body.insert(b, second);
            body.insert(a, first);
            closed(d, n, body, vec![w])
        }
        Rule::ReidemeisterIII => {
            let n = rng.random_range(3..=5);
            let p = rng.random_range(1..n - 1);
            let (p1, p2) = if rng.random_bool(0.5) {
                (p, p + 1)
            } else {
                (p + 1, p)
            };
            let a = sign(rng);
            let b = sign(rng);
            let c = if rng.random_bool(0.5) {
                -a
            } else if a == b {
                a
            } else {
                -a
            };
            framed(
                rng,
                d,
                n,
                vec![
                    Slice::Crossing { pos: p1, sign: a },
                    Slice::Crossing { pos: p2, sign: b },
                    Slice::Crossing { pos: p1, sign: c },
                ],
            )
        }
        Rule::Twist => {
            let w = rng.random_range(1..=n);
            let mut u = rng.random_range(1..=n);
            if u == w {
                u = if w == n { 1 } else { w + 1 };
            }
            {
                let pat = vec![
                    Slice::Label {
                        pos: w,
                        charge: charge(rng, d),
                    },
                    Slice::Label {
                        pos: u,
                        charge: charge(rng, d),
                    },
                ];
                framed(rng, d, n, pat)
            }
        }
        Rule::Interchange => {
            let n = rng.random_range(3..=5);
            let a = Slice::Crossing {
                pos: 1,
                sign: sign(rng),
            };
            let b = if n >= 4 && rng.random_bool(0.5) {
                Slice::Crossing {
                    pos: rng.random_range(3..n),
                    sign: sign(rng),
                }
            } else {
                Slice::Label {
                    pos: rng.random_range(3..=n),
                    charge: charge(rng, d),
                }
            };
            let pat = if rng.random_bool(0.5) {
                vec![a, b]
            } else {
                vec![b, a]
            };
            framed(rng, d, n, pat)
        }
    }
}

/// A random match site for `rule` in a freshly planted diagram.
pub fn planted_site<R: Rng + ?Sized>(rng: &mut R, d: u32, rule: Rule) -> (Diagram, Location) {
    let dg = planted(rng, d, rule);
    let sites = find_matches(&dg, rule);
    let loc = *sites.choose(rng).expect("planted diagrams match");
    (dg, loc)
}
