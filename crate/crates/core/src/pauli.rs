//! Qudit Pauli operators as quadratics in four parafermions.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::algebra::{AlgebraElement, Grade};
use crate::error::{Error, Result};
use crate::fock::{charge_sector, compress, range_basis, represent, LinearOp, RepConfig};
use crate::report::{Check, Report};
use crate::scalars::{ExactScalar, RootData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    I,
    II,
    KitaevD2,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "1" | "one" => Ok(Variant::I),
            "ii" | "2" | "two" => Ok(Variant::II),
            "kitaev" | "kitaevd2" => Ok(Variant::KitaevD2),
            _ => Err(Error::Domain(format!("unknown Pauli variant '{s}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PauliSolution {
    pub variant: Variant,
    pub d: u32,
    pub x: AlgebraElement,
    pub y: AlgebraElement,
    pub z: AlgebraElement,
    pub gamma: AlgebraElement,
}

fn quad(d: u32, pre: ExactScalar, a: (usize, i64), b: (usize, i64)) -> Result<AlgebraElement> {
    Ok(AlgebraElement::word(d, 4, &[a, b])?.scale(pre))
}

/// The charge operator `γ = q c_1^{-1} c_2 c_3^{-1} c_4`.
pub fn gamma(d: u32) -> Result<AlgebraElement> {
    Ok(
        AlgebraElement::word(d, 4, &[(1, -1), (2, 1), (3, -1), (4, 1)])?
            .scale(ExactScalar::q(d, 1)),
    )
}

pub fn build_solution(variant: Variant, d: u32) -> Result<PauliSolution> {
    RootData::new(d)?;
    let z1 = ExactScalar::zeta(d, 1);
    let (x, y, z) = match variant {
        Variant::I => (
            quad(d, z1, (1, -1), (4, 1))?,
            quad(d, z1, (2, 1), (4, -1))?,
            quad(d, z1, (3, -1), (4, 1))?,
        ),
        Variant::II => (
            quad(d, z1, (1, -1), (2, 1))?,
            quad(d, z1, (1, 1), (3, -1))?,
            quad(d, z1, (1, -1), (4, 1))?,
        ),
        Variant::KitaevD2 => {
            if d != 2 {
                return Err(Error::Domain(format!(
                    "the Kitaev variant needs d = 2, got {d}"
                )));
            }
            let i = ExactScalar::complex(2, C64::i());
            (
                quad(d, i, (1, 1), (4, 1))?,
                quad(d, i, (2, 1), (4, 1))?,
                quad(d, i, (3, 1), (4, 1))?,
            )
        }
    };
    Ok(PauliSolution {
        variant,
        d,
        x,
        y,
        z,
        gamma: gamma(d)?,
    })
}

impl PauliSolution {
    /// `(X, Y, Z)` moved onto generators `offset+1 … offset+4` of an algebra with `m` generators.
    pub fn placed(&self, m: usize, offset: usize) -> Result<[AlgebraElement; 3]> {
        let map: Vec<usize> = (1..=4).map(|j| j + offset).collect();
        Ok([
            self.x.reindex(m, &map)?,
            self.y.reindex(m, &map)?,
            self.z.reindex(m, &map)?,
        ])
    }

    pub fn triple(&self) -> AlgebraElement {
        self.x
            .mul(&self.y)
            .and_then(|xy| xy.mul(&self.z))
            .expect("same algebra")
    }
}

fn op_dev(a: &LinearOp, b: &LinearOp) -> Result<f64> {
    a.max_abs_diff(b)
}

/// Order-d, q-commutation, triple-product and sector relations as matrices on `C^{d^4}`.
pub fn verify_relations(sol: &PauliSolution, tol: f64) -> Result<Report> {
    let d = sol.d;
    let cfg = RepConfig::new(d, 4)?;
    let roots = &cfg.roots;
    let mut rep = Report::new(format!("pauli {:?} d={d}", sol.variant));
    let x = represent(&sol.x, &cfg)?;
    let y = represent(&sol.y, &cfg)?;
    let z = represent(&sol.z, &cfg)?;
    let g = represent(&sol.gamma, &cfg)?;
    let id = LinearOp::identity(cfg.dim());
    let q = roots.q;

    for (name, p) in [("X", &x), ("Y", &y), ("Z", &z)] {
        rep.push(Check::within(
            format!("{name}^d = 1"),
            op_dev(&p.pow(d)?, &id)?,
            tol,
        ));
    }
    rep.push(Check::within(
        "YX = qXY",
        op_dev(&y.mul(&x)?, &x.mul(&y)?.scale(q))?,
        tol,
    ));
    rep.push(Check::within(
        "ZY = qYZ",
        op_dev(&z.mul(&y)?, &y.mul(&z)?.scale(q))?,
        tol,
    ));
    rep.push(Check::within(
        "XZ = qZX",
        op_dev(&x.mul(&z)?, &z.mul(&x)?.scale(q))?,
        tol,
    ));

    let xyz = x.mul(&y)?.mul(&z)?;
    let yzx = y.mul(&z)?.mul(&x)?;
    let zxy = z.mul(&x)?.mul(&y)?;
    let target = g.scale(roots.zeta.inv());
    rep.push(Check::within(
        "XYZ = zeta^-1 gamma",
        op_dev(&xyz, &target)?,
        tol,
    ));
    rep.push(Check::within(
        "YZX = zeta^-1 gamma",
        op_dev(&yzx, &target)?,
        tol,
    ));
    rep.push(Check::within(
        "ZXY = zeta^-1 gamma",
        op_dev(&zxy, &target)?,
        tol,
    ));

    for (name, p) in [("X", &x), ("Y", &y), ("Z", &z)] {
        rep.push(Check::within(
            format!("[{name}, gamma] = 0"),
            op_dev(&p.mul(&g)?, &g.mul(p)?)?,
            tol,
        ));
    }
    rep.push(Check::within("gamma unitary", g.unitarity_defect()?, tol));
    rep.push(Check::holds(
        "gamma zero-graded",
        sol.gamma.grade() == Grade::Pure(0),
    ));

    for k in 0..d as i64 {
        let p = charge_sector(&g, d, k, tol)?;
        let basis = range_basis(&p, 1e-9);
        let c = compress(&xyz, &basis)?;
        let expect = roots.zeta.inv() * roots.q_pow(k);
        let dev = (0..c.nrows())
            .flat_map(|i| (0..c.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| {
                let e = if i == j { expect } else { C64::new(0.0, 0.0) };
                (c[(i, j)] - e).norm()
            })
            .fold(0.0, f64::max);
        rep.push(Check::within(
            format!("XYZ = zeta^-1 q^{k} on the gamma = q^{k} sector"),
            dev,
            tol,
        ));
    }

    if sol.variant == Variant::KitaevD2 {
        let c1234 = represent(
            &AlgebraElement::word(2, 4, &[(1, 1), (2, 1), (3, 1), (4, 1)])?,
            &cfg,
        )?;
        rep.push(Check::within(
            "XYZ = i c1c2c3c4",
            op_dev(&xyz, &c1234.scale(C64::i()))?,
            tol,
        ));
        let p = charge_sector(&c1234, 2, 0, tol)?;
        let basis = range_basis(&p, 1e-9);
        let c = compress(&xyz, &basis)?;
        let dev = (0..c.nrows())
            .flat_map(|i| (0..c.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| {
                let e = if i == j { C64::i() } else { C64::new(0.0, 0.0) };
                (c[(i, j)] - e).norm()
            })
            .fold(0.0, f64::max);
        rep.push(Check::within(
            "XYZ = i on the c1c2c3c4 = +1 sector",
            dev,
            tol,
        ));
    } else {
        for (name, p) in [("X", &sol.x), ("Y", &sol.y), ("Z", &sol.z)] {
            rep.push(Check::holds(
                format!("{name} zero-graded"),
                p.grade() == Grade::Pure(0),
            ));
        }
    }
    Ok(rep)
}

/// Pauli operators on disjoint four-generator blocks commute.
pub fn multi_site_commutation(d: u32, sites: usize, variant: Variant, tol: f64) -> Result<Report> {
    if sites < 2 {
        return Err(Error::Domain("need at least two sites".into()));
    }
    let m = 4 * sites;
    let cfg = RepConfig::new(d, m)?;
    let sol = build_solution(variant, d)?;
    let names = ["X", "Y", "Z"];
    let mut ops = Vec::with_capacity(sites);
    for s in 0..sites {
        let placed = sol.placed(m, 4 * s)?;
        ops.push(
            placed
                .iter()
                .map(|p| represent(p, &cfg))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let mut rep = Report::new(format!("multi-site commutation d={d} sites={sites}"));
    for j in 0..sites {
        for k in 0..sites {
            if j >= k {
                continue;
            }
            for a in 0..3 {
                for b in 0..3 {
                    let lhs = ops[j][a].mul(&ops[k][b])?;
                    let rhs = ops[k][b].mul(&ops[j][a])?;
                    rep.push(Check::within(
                        format!("[{}_{}, {}_{}] = 0", names[a], j + 1, names[b], k + 1),
                        lhs.max_abs_diff(&rhs)?,
                        tol,
                    ));
                }
            }
        }
    }
    let q = cfg.roots.q;
    let yx = ops[0][1].mul(&ops[0][0])?;
    let xy = ops[0][0].mul(&ops[0][1])?;
    rep.push(Check::within(
        "same site: YX = qXY",
        yx.max_abs_diff(&xy.scale(q))?,
        tol,
    ));
    rep.push(Check::holds(
        "same site: YX != XY",
        yx.max_abs_diff(&xy)? > 1e-3,
    ));
    Ok(rep)
}
