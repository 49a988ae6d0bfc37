//! Verification suites driven by `parafermion verify`.

use parafermion::algebra::AlgebraElement;
use parafermion::braid::{
    algebraic_form_defect, braid_generator, entanglement_entropy, eval_word, is_entangling,
    qudit_braid_check, schmidt_spectrum, swap_gate, BraidWord,
};
use parafermion::diagram::{
    self, apply_rule, equivalent, evaluate, figures, normalize, parse, sample, serialize,
    Evaluation, Rule, Slice,
};
use parafermion::fock::{
    close_state_wires, close_wires, dim, grade_projector, represent, LinearOp, RepConfig,
    StateVector,
};
use parafermion::models::{
    all_labels, embed, encode, lift_transform, measure, preserves_qudit_space, qudit_space_leakage,
    random_zero_graded_blocks, EncodedState, ModelTag,
};
use parafermion::pauli::{build_solution, multi_site_commutation, verify_relations, Variant};
use parafermion::report::{Check, Report};
use parafermion::scalars::{ExactScalar, RootData};
use parafermion::{Error, Result, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SUITES: [&str; 7] = [
    "all", "algebra", "fock", "braid", "pauli", "diagram", "models",
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub d: u32,
    pub m: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub budget: usize,
    pub variant: Variant,
}

impl SuiteConfig {
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<Report>> {
    RootData::new(cfg.d)?;
    let all = name == "all";
    let mut out = Vec::new();
    if all || name == "algebra" {
        out.push(algebra(cfg)?);
    }
    if all || name == "fock" {
        out.push(fock(cfg)?);
    }
    if all || name == "braid" {
        out.push(braid(cfg)?);
    }
    if all || name == "pauli" {
        out.push(pauli(cfg)?);
    }
    if all || name == "diagram" {
        out.push(diagrams(cfg)?);
    }
    if all || name == "models" {
        out.push(models(cfg)?);
    }
    if out.is_empty() {
        return Err(Error::Domain(format!("unknown suite '{name}'")));
    }
    Ok(out)
}

fn algebra(cfg: &SuiteConfig) -> Result<Report> {
    let (d, m, tol) = (cfg.d, cfg.m.clamp(1, 4), cfg.tolerance);
    let mut rep = Report::new(format!("algebra d={d} m={m}"));
    let mut rng = cfg.rng(1);
    let rand = |rng: &mut ChaCha8Rng| AlgebraElement::random(rng, d, m, 4, None);
    let (mut assoc, mut invol, mut anti, mut tr): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..20 {
        let (a, b, c) = (rand(&mut rng), rand(&mut rng), rand(&mut rng));
        assoc = assoc.max(a.mul(&b)?.mul(&c)?.max_deviation(&a.mul(&b.mul(&c)?)?)?);
        invol = invol.max(a.adjoint().adjoint().max_deviation(&a)?);
        anti = anti.max(
            a.mul(&b)?
                .adjoint()
                .max_deviation(&b.adjoint().mul(&a.adjoint())?)?,
        );
        tr = tr.max((a.mul(&b)?.trace().value() - b.mul(&a)?.trace().value()).norm());
    }
    rep.push(Check::within("normal product is associative", assoc, tol));
    rep.push(Check::within("adjoint is an involution", invol, tol));
    rep.push(Check::within("(AB)* = B*A*", anti, tol));
    rep.push(Check::within("Tr(AB) = Tr(BA)", tr, tol));
    if m >= 2 {
        let c21 = AlgebraElement::word(d, m, &[(2, 1), (1, 1)])?;
        let expect = AlgebraElement::word(d, m, &[(1, 1), (2, 1)])?.scale(ExactScalar::q(d, -1));
        rep.push(Check::within(
            "c2 c1 = q^-1 c1 c2",
            c21.max_deviation(&expect)?,
            tol,
        ));
    }
    let cd = AlgebraElement::generator(d, m, 1, d as i64 - 1)?
        .mul(&AlgebraElement::generator(d, m, 1, 1)?)?;
    rep.push(Check::within(
        "c1^(d-1) c1 = 1",
        cd.max_deviation(&AlgebraElement::one(d, m))?,
        tol,
    ));
    let x = AlgebraElement::generator(d, m, 1, 1)?;
    let tw = x.twisted_product(&x)?;
    let expect = AlgebraElement::generator(d, m, 1, 2)?.scale(ExactScalar::zeta(d, 1));
    rep.push(Check::within(
        "c1 o c1 = zeta c1^2",
        tw.max_deviation(&expect)?,
        tol,
    ));
    Ok(rep)
}

fn fock(cfg: &SuiteConfig) -> Result<Report> {
    let (d, m, tol) = (cfg.d, cfg.m.clamp(1, 4), cfg.tolerance);
    let rc = RepConfig::new(d, m)?;
    let mut rep = Report::new(format!("fock d={d} m={m}"));
    rep.push(Check::within(
        "c_j^d = 1, c_j c_k = q c_k c_j, unitary",
        parafermion::fock::relation_defect(&rc)?,
        tol,
    ));
    let mut rng = cfg.rng(2);
    let (mut hom, mut star, mut trace): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..20 {
        let a = AlgebraElement::random(&mut rng, d, m, 3, None);
        let b = AlgebraElement::random(&mut rng, d, m, 3, None);
        let (ra, rb) = (represent(&a, &rc)?, represent(&b, &rc)?);
        hom = hom.max(represent(&a.mul(&b)?, &rc)?.max_abs_diff(&ra.mul(&rb)?)?);
        star = star.max(represent(&a.adjoint(), &rc)?.max_abs_diff(&ra.adjoint())?);
        trace = trace.max((a.trace().value() - ra.normalized_trace()).norm());
    }
    rep.push(Check::within("represent is multiplicative", hom, tol));
    rep.push(Check::within("represent preserves adjoints", star, tol));
    rep.push(Check::within(
        "algebra trace = normalized matrix trace",
        trace,
        tol,
    ));

    let mut grading = true;
    for j in 1..=m {
        let c = represent(&AlgebraElement::generator(d, m, j, 1)?, &rc)?;
        for g in 0..d {
            let into = grade_projector(d, m, (g + 1) % d)
                .mul(&c)?
                .mul(&grade_projector(d, m, g))?;
            let all = c.mul(&grade_projector(d, m, g))?;
            grading &= into.max_abs_diff(&all)? < tol;
        }
    }
    rep.push(Check::holds("generators raise the grade by one", grading));

    let mut meter: f64 = 0.0;
    for i1 in 0..d {
        for i2 in 0..d {
            for i3 in 0..d {
                let s = StateVector::basis(d, 3, &[i1, i2, i3])?;
                let closed = close_state_wires(&s, &[1, 2])?;
                let expect = if i1 == 0 && i2 == 0 {
                    StateVector::basis(d, 1, &[i3])?
                } else {
                    StateVector::zeros(d, 1)
                };
                meter = meter.max(closed.max_abs_diff(&expect)?);
            }
        }
    }
    rep.push(Check::within(
        "meter on wires 1,2 of |i1 i2 i3> gives [i1=0][i2=0]|i3>",
        meter,
        tol,
    ));
    let id = close_wires(&LinearOp::identity(dim(d, 2)), d, &[1])?;
    rep.push(Check::within(
        "closing an identity wire gives 1",
        id.max_abs_diff(&LinearOp::identity(dim(d, 1)))?,
        tol,
    ));
    Ok(rep)
}

fn braid(cfg: &SuiteConfig) -> Result<Report> {
    let (d, tol) = (cfg.d, cfg.tolerance);
    let m = cfg.m.clamp(3, 4);
    let rc = RepConfig::new(d, m)?;
    let roots = RootData::new(d)?;
    let mut rep = Report::new(format!("braid d={d} m={m}"));
    let id = LinearOp::identity(rc.dim());
    let mut unit: f64 = 0.0;
    let mut inv: f64 = 0.0;
    for i in 1..m {
        let b = braid_generator(i, 1, &rc)?;
        unit = unit.max(b.unitarity_defect()?);
        inv = inv.max(b.mul(&braid_generator(i, -1, &rc)?)?.max_abs_diff(&id)?);
    }
    rep.push(Check::within("braid generators unitary", unit, tol));
    rep.push(Check::within("b b^-1 = 1", inv, tol));
    let ybe = eval_word(&BraidWord::new(m, &[(1, 1), (2, 1), (1, 1)])?, &rc)?.max_abs_diff(
        &eval_word(&BraidWord::new(m, &[(2, 1), (1, 1), (2, 1)])?, &rc)?,
    )?;
    rep.push(Check::within("b1 b2 b1 = b2 b1 b2", ybe, tol));
    if m >= 4 {
        let b1 = braid_generator(1, 1, &rc)?;
        let b3 = braid_generator(3, 1, &rc)?;
        rep.push(Check::within(
            "b1 b3 = b3 b1",
            b1.mul(&b3)?.max_abs_diff(&b3.mul(&b1)?)?,
            tol,
        ));
    }
    let mut alg: f64 = 0.0;
    for i in 1..m {
        for s in [1, -1] {
            alg = alg.max(algebraic_form_defect(i, s, &rc)?);
        }
    }
    rep.push(Check::within(
        "matrix equals the parafermion sum form",
        alg,
        tol,
    ));

    let r2 = RepConfig::new(d, 2)?;
    let b = braid_generator(1, 1, &r2)?;
    let pre = roots.omega_half_pow(-1) / roots.delta;
    let (mut chan, mut flat, mut ent, mut undo): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for i1 in 0..d {
        for i2 in 0..d {
            let v = StateVector::basis(d, 2, &[i1, i2])?;
            let out = StateVector::new(d, 2, b.apply(&v.amplitudes)?)?;
            let mut expect = StateVector::zeros(d, 2);
            for k in 0..d {
                let idx = parafermion::fock::index_of(&[(k + i1) % d, (i2 + d - k) % d], d);
                expect.amplitudes[idx] += pre * roots.q_pow(((k + i1) * k) as i64);
            }
            chan = chan.max(out.max_abs_diff(&expect)?);
            let spec = schmidt_spectrum(&out, 1, tol)?;
            let f = 1.0 / (d as f64).sqrt();
            flat = flat.max(spec.iter().map(|s| (s - f).abs()).fold(0.0, f64::max));
            ent = ent.max((entanglement_entropy(&spec) - (d as f64).ln()).abs());
            let back =
                StateVector::new(d, 2, braid_generator(1, -1, &r2)?.apply(&out.amplitudes)?)?;
            undo = undo.max(back.max_abs_diff(&v)?);
        }
    }
    rep.push(Check::within(
        "braid action equals the closed-form channel sum",
        chan,
        tol,
    ));
    rep.push(Check::within(
        "Schmidt spectrum of b|i1 i2> flat at 1/sqrt(d)",
        flat,
        tol,
    ));
    rep.push(Check::within("entanglement entropy ln d", ent, tol));
    rep.push(Check::within("inverse braid disentangles", undo, tol));
    rep.push(Check::holds(
        "braid is entangling",
        is_entangling(&b, d, tol)?,
    ));
    rep.push(Check::holds(
        "swap is not entangling",
        !is_entangling(&swap_gate(d), d, tol)?,
    ));
    rep.push(Check::holds(
        "identity is not entangling",
        !is_entangling(&LinearOp::identity(dim(d, 2)), d, tol)?,
    ));
    rep.extend(qudit_braid_check(&rc, tol)?);
    Ok(rep)
}

fn pauli(cfg: &SuiteConfig) -> Result<Report> {
    let (d, tol) = (cfg.d, cfg.tolerance);
    let sol = build_solution(cfg.variant, d)?;
    let mut rep = Report::new(format!("pauli {:?} d={d}", cfg.variant));
    rep.extend(verify_relations(&sol, tol)?);
    if dim(d, 8) <= cfg.budget {
        rep.extend(multi_site_commutation(d, 2, cfg.variant, tol)?);
    } else {
        rep.note(
            "multi_site",
            format!("skipped: dimension {} exceeds the budget", dim(d, 8)),
        );
    }
    Ok(rep)
}

fn scalar_of(e: Evaluation) -> C64 {
    match e {
        Evaluation::Scalar(c) => c,
        Evaluation::Op(op) if op.rows == 1 && op.cols == 1 => op.get(0, 0),
        Evaluation::State(s) if s.dim() == 1 => s.amplitudes[0],
        other => panic!("expected a number, got {other:?}"),
    }
}

fn diagrams(cfg: &SuiteConfig) -> Result<Report> {
    let (d, tol) = (cfg.d, cfg.tolerance);
    let roots = RootData::new(d)?;
    let mut rep = Report::new(format!("diagram d={d}"));
    let mut rng = cfg.rng(3);
    let sites = match d {
        2 | 3 => 100,
        4 => 20,
        _ => 5,
    };
    for rule in Rule::ALL {
        let mut worst: f64 = 0.0;
        for _ in 0..sites {
            let (dg, loc) = sample::planted_site(&mut rng, d, rule);
            let (after, _) = apply_rule(&dg, rule, loc)?;
            worst = worst.max(evaluate(&dg)?.max_abs_diff(&evaluate(&after)?)?);
        }
        rep.push(Check::within(
            format!("{} sound on {sites} sites", rule.name()),
            worst,
            tol,
        ));
    }
    let one_wire = LinearOp::identity(d as usize);
    for s in [1i8, -1] {
        let v = evaluate(&figures::curl(d, s)?)?.to_op();
        let b = braid_generator(1, s, &RepConfig::new(d, 2)?)?;
        let closed = close_wires(&b, d, &[2])?.scale(C64::new(roots.delta, 0.0));
        rep.push(Check::within(
            format!("curl of sign {s} equals delta times the closed braid"),
            v.max_abs_diff(&closed)?,
            tol,
        ));
        let expect = one_wire.scale(roots.omega_half_pow(-(s as i32)));
        rep.push(Check::within(
            format!(
                "curl of sign {s} equals omega^({}1/2)",
                if s > 0 { "-" } else { "+" }
            ),
            v.max_abs_diff(&expect)?,
            tol,
        ));
    }
    let plain = scalar_of(evaluate(&figures::circle(d, 0)?)?);
    rep.push(Check::within(
        "plain circle = delta",
        (plain - roots.delta).norm(),
        tol,
    ));
    let mut charged: f64 = 0.0;
    for k in 1..d as i64 {
        charged = charged.max(scalar_of(evaluate(&figures::circle(d, k)?)?).norm());
    }
    rep.push(Check::within("charged circle = 0", charged, tol));

    let swap = figures::swap_diagram(d)?;
    let (out, steps) = normalize(&swap);
    rep.push(Check::holds(
        "swap diagram normalizes to one crossing",
        out.slices == vec![Slice::Crossing { pos: 1, sign: 1 }],
    ));
    rep.push(Check::holds(
        "swap normal form carries delta^-2",
        out.prefactor.delta_exp == -2,
    ));
    rep.push(Check::within(
        "swap normal form is sound",
        evaluate(&swap)?.max_abs_diff(&evaluate(&out)?)?,
        tol,
    ));
    rep.push(Check::holds(
        "rewrite trace replays",
        diagram::replay(&swap, &steps)
            .map(|r| r == out)
            .unwrap_or(false),
    ));
    for k in 0..d as i64 {
        let (a, b) = figures::qudit_braid_sides(d, k)?;
        let eq = equivalent(&a, &b, tol)?;
        rep.push(Check::within(
            format!("label {k} slides through the crossing"),
            eq.deviation,
            tol,
        ));
    }
    if dim(d, 8) <= cfg.budget && d <= 3 {
        let mut worst: f64 = 0.0;
        for i in 0..d as i64 {
            for j in 0..d as i64 {
                let (a, b) = figures::double_braid_sides(d, -i, j)?;
                worst = worst.max(equivalent(&a, &b, tol)?.deviation);
            }
        }
        rep.push(Check::within(
            "double braid relation with prefactor q^{2ij}",
            worst,
            tol,
        ));
    }
    let mut round = true;
    for dg in [
        swap.clone(),
        figures::relay_diagram(d, 1)?,
        figures::curl(d, 1)?,
        figures::circle(d, 1)?,
    ] {
        round &= parse(&serialize(&dg)).map(|p| p == dg).unwrap_or(false);
    }
    rep.push(Check::holds("serialize then parse is the identity", round));
    Ok(rep)
}

fn models(cfg: &SuiteConfig) -> Result<Report> {
    let (d, tol) = (cfg.d, cfg.tolerance);
    let mut rep = Report::new(format!("models d={d}"));
    let mut rng = cfg.rng(4);
    for model in ModelTag::ALL {
        let span = parafermion::models::qudit_span(model, d, 1)?;
        rep.push(Check::holds(
            format!("{} encodes d independent states", model.name()),
            span.len() == d as usize,
        ));
    }
    let m = 2usize;
    let random_state = |rng: &mut ChaCha8Rng| -> Result<EncodedState> {
        use rand::Rng;
        let amps: Vec<C64> = (0..dim(d, m))
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        Ok(EncodedState {
            model: ModelTag::OneString,
            m,
            labels: None,
            vector: StateVector::new(d, m, amps)?,
        })
    };
    for target in [ModelTag::TwoStringI, ModelTag::TwoStringII] {
        let mut worst: f64 = 0.0;
        let mut meas: f64 = 0.0;
        for _ in 0..20 {
            let (x, y) = (random_state(&mut rng)?, random_state(&mut rng)?);
            let (ex, ey) = (embed(&x, target)?, embed(&y, target)?);
            let ratio = ex.vector.inner(&ey.vector)?
                - x.vector.inner(&y.vector)? * parafermion::models::EMBEDDING_NORMALIZATION;
            worst = worst.max(ratio.norm());
            for ls in all_labels(d, m) {
                meas = meas.max((measure(&ex, &ls)? - measure(&x, &ls)?).norm());
            }
        }
        rep.push(Check::within(
            format!("embedding into {} preserves inner products", target.name()),
            worst,
            tol,
        ));
        rep.push(Check::within(
            format!("measurement commutes with embedding into {}", target.name()),
            meas,
            tol,
        ));

        let rc = RepConfig::new(d, m)?;
        for (name, t) in [
            ("braid b1", braid_generator(1, 1, &rc)?),
            (
                "label c1",
                represent(&AlgebraElement::generator(d, m, 1, 1)?, &rc)?,
            ),
        ] {
            let lt = lift_transform(&t, d, m, target)?;
            let mut dev: f64 = 0.0;
            for ls in all_labels(d, m) {
                let x = encode(ModelTag::OneString, d, &ls)?;
                let lhs = lt.apply(&embed(&x, target)?.vector.amplitudes)?;
                let tx = EncodedState {
                    vector: StateVector::new(d, m, t.apply(&x.vector.amplitudes)?)?,
                    labels: None,
                    ..x
                };
                let rhs = embed(&tx, target)?.vector.amplitudes;
                dev = dev.max(
                    lhs.iter()
                        .zip(&rhs)
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0, f64::max),
                );
            }
            rep.push(Check::within(
                format!("lift of {name} into {} intertwines", target.name()),
                dev,
                tol,
            ));
        }
    }
    if dim(d, 8) <= cfg.budget {
        let rc8 = RepConfig::new(d, 8)?;
        rep.push(Check::holds(
            "identity preserves the four-string span",
            preserves_qudit_space(&LinearOp::identity(rc8.dim()), d, 2)?,
        ));
        let straddle = braid_generator(4, 1, &rc8)?;
        let leak = qudit_space_leakage(&straddle, d, 2)?;
        rep.push(Check::holds(
            "crossing on wires 4,5 leaves the four-string span",
            leak > tol,
        ));
        let mut ok = true;
        for _ in 0..5 {
            ok &= preserves_qudit_space(&random_zero_graded_blocks(&mut rng, d, 2, 3)?, d, 2)?;
        }
        rep.push(Check::holds(
            "zero-graded block products preserve the four-string span",
            ok,
        ));
    }
    let sol = build_solution(Variant::I, d)?;
    let rc4 = RepConfig::new(d, 4)?;
    let span = parafermion::models::qudit_span(ModelTag::FourStringI, d, 1)?;
    let mut leak: f64 = 0.0;
    for p in [&sol.x, &sol.y, &sol.z] {
        leak = leak.max(parafermion::fock::leakage(&represent(p, &rc4)?, &span)?);
    }
    rep.push(Check::within(
        "Pauli operators preserve the encoded qudit",
        leak,
        tol,
    ));
    Ok(rep)
}
