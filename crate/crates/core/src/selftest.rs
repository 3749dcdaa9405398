//! Deterministic golden checks behind `abconn selftest`.

use crate::algebra::{linear_factor_product, shift_identity_check, ABElement, HomogeneousPart};
use crate::asymptotics::{propagate, verify_table, ExpansionSpec, LogPoly, Seed};
use crate::connection::{nabla_formula, sigma_tau, uniform_shift_coefficient, MonomialMu};
use crate::exact::{LaurentPoly, Rat};
use crate::exponent::{
    dependency, det_identity_check, validate_hypotheses, CaseTag, ExponentData,
};
use crate::families::{cross_validate, family_a, family_b, FamilyResult};
use crate::parse::parse_element;

pub struct Outcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn outcome(name: &'static str, result: Result<String, String>) -> Outcome {
    match result {
        Ok(detail) => Outcome { name, pass: true, detail },
        Err(detail) => Outcome { name, pass: false, detail },
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_a() -> Result<String, String> {
    let fr = family_a(2, 2, 1).map_err(|e| e.to_string())?;
    let expected = parse_element("(a - 5/2*b)*[(a - 7/4*b)*(a - 3/4*b) - 4*lam^-2*(a - b)]")
        .map_err(|e| e.to_string())?;
    ensure(fr.p == expected, || format!("P = {}", fr.p))?;
    let nabla = parse_element("2*(a - b)").expect("literal");
    ensure(fr.nabla_one == nabla, || format!("lam*nabla[1] = {}", fr.nabla_one))?;
    Ok(fr.p.to_string())
}

fn golden_b() -> Result<String, String> {
    let fr = family_b(2, 2, 1, 1).map_err(|e| e.to_string())?;
    let expected = parse_element("(a - 5/2*b)*(a - 5/4*b)*(a - 3/4*b) - 4*lam^2*(a - 2*b)*(a - b)")
        .map_err(|e| e.to_string())?;
    ensure(fr.p == expected, || format!("P = {}", fr.p))?;
    let nabla = parse_element("-2*(a - 3/4*b)").expect("literal");
    ensure(fr.nabla_one == nabla, || format!("lam*nabla[1] = {}", fr.nabla_one))?;
    Ok(fr.p.to_string())
}

fn case_sigma() -> Result<String, String> {
    let fa = family_a(2, 2, 1).map_err(|e| e.to_string())?;
    let da = dependency(&fa.exponents).map_err(|e| e.to_string())?;
    ensure(
        (da.r, da.d, da.h, da.case_tag) == (2, 2, 1, CaseTag::CaseII) && da.sigma == Rat::int(-2),
        || format!("family A: {da:?}"),
    )?;
    let fb = family_b(2, 2, 1, 1).map_err(|e| e.to_string())?;
    let db = dependency(&fb.exponents).map_err(|e| e.to_string())?;
    ensure(
        (db.r, db.d, db.h, db.case_tag) == (2, 2, 1, CaseTag::CaseI)
            && db.p == [1, 1, -1]
            && db.sigma == Rat::int(2),
        || format!("family B: {db:?}"),
    )?;
    Ok("A: II, sigma=-2; B: I, sigma=2".into())
}

/// Every valid exponent matrix for `n = 1` with entries in `0..=3`, plus a
/// strided sample for `n = 2` with entries in `0..=2`.
fn corpus() -> Vec<ExponentData> {
    let mut out = Vec::new();
    let vecs1: Vec<Vec<i64>> = (0..=3).flat_map(|x| (0..=3).map(move |y| vec![x, y])).collect();
    for a in &vecs1 {
        for b in &vecs1 {
            for c in &vecs1 {
                if let Ok(e) = ExponentData::new(1, vec![a.clone(), b.clone(), c.clone()]) {
                    if validate_hypotheses(&e).passes {
                        out.push(e);
                    }
                }
            }
        }
    }
    let vecs2: Vec<Vec<i64>> = (0..27).map(|v| vec![v / 9, (v / 3) % 3, v % 3]).collect();
    let mut counter = 0usize;
    for a in &vecs2 {
        for b in &vecs2 {
            for c in &vecs2 {
                for d in &vecs2 {
                    counter += 1;
                    if !counter.is_multiple_of(97) {
                        continue;
                    }
                    let alphas = vec![a.clone(), b.clone(), c.clone(), d.clone()];
                    if let Ok(e) = ExponentData::new(2, alphas) {
                        if validate_hypotheses(&e).passes {
                            out.push(e);
                        }
                    }
                }
            }
        }
    }
    out
}

fn sigma_routes(corpus: &[ExponentData]) -> Result<String, String> {
    for e in corpus {
        let dep = dependency(e).map_err(|err| format!("{e:?}: {err}"))?;
        let det = det_identity_check(e, &dep.relation());
        let st = sigma_tau(e, &MonomialMu::one(e.n() + 1)).map_err(|err| err.to_string())?;
        let rel = Rat::frac(dep.r, dep.r - dep.sum_p);
        ensure(
            det.sigma_from_dets.as_ref() == Some(&st.sigma) && st.sigma == rel && det.identity_holds,
            || format!("{e:?}: cramer {} dets {:?} relation {rel}", st.sigma, det.sigma_from_dets),
        )?;
    }
    Ok(format!("{} matrices", corpus.len()))
}

fn shift_identity() -> Result<String, String> {
    let mus = [Rat::zero(), Rat::frac(-3, 2), Rat::frac(7, 3), Rat::int(5)];
    let roots = [Rat::zero(), Rat::one(), Rat::frac(5, 4), Rat::frac(-2, 3)];
    let mut count = 0;
    let mut qs = Vec::new();
    for deg in 0..=4u32 {
        for j in 0..=deg {
            qs.push(ABElement::monomial(LaurentPoly::one(), deg - j, j));
        }
    }
    for x in &roots {
        for y in &roots {
            qs.push(linear_factor_product(&[x.clone(), y.clone()]));
            qs.push(&linear_factor_product(&[x.clone(), y.clone(), Rat::one()])
                + &ABElement::monomial(LaurentPoly::constant(x.clone()), 0, 3));
        }
    }
    for q in qs {
        let h = HomogeneousPart::new(q).map_err(|e| e.to_string())?;
        for mu in &mus {
            let (l, r) = shift_identity_check(&h, mu);
            ensure(l == r, || format!("Q = {}, mu = {mu}", h.element()))?;
            count += 1;
        }
    }
    Ok(format!("{count} cases"))
}

fn family_instances(max_a: i64, max_b: i64) -> Vec<FamilyResult> {
    let mut out = Vec::new();
    for u in 1..=max_a {
        for v in 1..=max_a {
            for w in 1..=max_a {
                out.push(family_a(u, v, w).expect("valid parameters"));
            }
        }
    }
    for p in 1..=max_b {
        for q in 1..=max_b {
            for u in 1..=max_b {
                for v in 1..=max_b {
                    out.push(family_b(p, q, u, v).expect("valid parameters"));
                }
            }
        }
    }
    out
}

fn uniform_shift() -> Result<String, String> {
    let instances = family_instances(4, 4);
    for fr in &instances {
        let dep = dependency(&fr.exponents).map_err(|e| e.to_string())?;
        for beta in [vec![0, 0, 0], vec![1, 0, 2]] {
            let st = sigma_tau(&fr.exponents, &MonomialMu::new(beta).expect("valid"))
                .map_err(|e| e.to_string())?;
            let expected = &st.tau - Rat::int(st.mu.k() + dep.d + dep.h) * &st.sigma;
            let got = uniform_shift_coefficient(&fr.p, &st);
            ensure(got.as_ref() == Some(&expected), || {
                format!("{}: C = {got:?}, expected {expected}", fr.params)
            })?;
        }
    }
    Ok(format!("{} instances", instances.len()))
}

fn family_grid() -> Result<String, String> {
    let instances = family_instances(4, 3);
    for fr in &instances {
        let cv = cross_validate(fr);
        ensure(cv.passed, || {
            let names: Vec<_> = cv.failures().map(|c| c.name.clone()).collect();
            format!("{}: {}", fr.params, names.join(", "))
        })?;
        let st = sigma_tau(&fr.exponents, &MonomialMu::one(3)).map_err(|e| e.to_string())?;
        ensure(nabla_formula(&st) == fr.nabla_one, || fr.params.to_string())?;
    }
    Ok(format!("{} instances", instances.len()))
}

fn asymptotic_sequence() -> Result<String, String> {
    let spec = ExpansionSpec {
        rhos: vec![Rat::frac(1, 2)],
        max_log_power: 0,
        order: 4,
        alpha: Rat::one(),
        beta: Rat::zero(),
    };
    let seed: Seed = [((0, 0, 0), Rat::one())].into_iter().collect();
    let t = propagate(&spec, &seed).map_err(|e| e.to_string())?;
    ensure(t.get(&(0, 0, 1)) == LogPoly::from_coeffs([(1, Rat::frac(1, 3))]), || {
        format!("c1 = {:?}", t.get(&(0, 0, 1)))
    })?;
    ensure(t.get(&(0, 0, 2)) == LogPoly::from_coeffs([(2, Rat::frac(1, 10))]), || {
        format!("c2 = {:?}", t.get(&(0, 0, 2)))
    })?;
    ensure(verify_table(&spec, &t).passes(), || "nonzero residual".into())?;
    for (idx, p) in &t.entries {
        ensure(p.degree().unwrap_or(0) as usize <= idx.2, || format!("degree at {idx:?}"))?;
    }
    Ok("c1 = l/3, c2 = l^2/10".into())
}

fn hypothesis_gate() -> Result<String, String> {
    let e = ExponentData::new(2, vec![vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 3], vec![1, 1, 1]])
        .map_err(|e| e.to_string())?;
    let rep = validate_hypotheses(&e);
    ensure(!rep.hypothesis_i && rep.rank_bordered == 3, || format!("{rep:?}"))?;
    Ok(rep.messages.join("; "))
}

fn monodromy() -> Result<String, String> {
    let c = family_a(2, 2, 1).map_err(|e| e.to_string())?.monodromy_candidates();
    ensure(c == [Rat::frac(1, 2), Rat::zero()], || format!("{c:?}"))?;
    Ok("{1/2, 0}".into())
}

pub fn run_all() -> Vec<Outcome> {
    let corpus = corpus();
    vec![
        outcome("golden family A(2,2,1)", golden_a()),
        outcome("golden family B(2,2,1,1)", golden_b()),
        outcome("case and sigma of both families", case_sigma()),
        outcome("sigma by three routes + determinant identity", sigma_routes(&corpus)),
        outcome("shift identity", shift_identity()),
        outcome("uniform shift of lam*nabla through P", uniform_shift()),
        outcome("family parameter grid", family_grid()),
        outcome("log-polynomial propagation", asymptotic_sequence()),
        outcome("non-quasi-homogeneity gate", hypothesis_gate()),
        outcome("monodromy candidates A(2,2,1)", monodromy()),
    ]
}
