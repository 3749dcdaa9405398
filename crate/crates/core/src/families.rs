//! Two explicit families with `d = 2`, `h = 1`:
//!
//! - A: `x^{2u} + y^{2v} + z^{2w} + lam·x^u·y^v·z^w`, `u, v, w ≥ 1`;
//! - B: `x^{2p}·z^u + y^{2q}·z^v + z^{u+v} + lam·x^p·y^q`, `p, q ≥ 1`, `u+v ≥ 1`.
//!
//! The annihilator of `[1]` is `P = P_top + c·lam^{±2}·P_low` with both parts
//! given as ordered products of linear factors `(a − r·b)`. The root lists
//! are the source of truth; expanded operators are derived from them.

use serde::{Deserialize, Serialize};

use crate::algebra::{linear_factor_product, ABElement};
use crate::connection::{
    nabla_formula, sigma_tau, uniform_shift_coefficient, MonomialMu,
};
use crate::error::{Error, Result};
use crate::exact::{LaurentPoly, Rat};
use crate::exponent::{
    dependency, det_identity_check, validate_hypotheses, CaseTag, ExponentData,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum FamilyParams {
    A { u: i64, v: i64, w: i64 },
    B { p: i64, q: i64, u: i64, v: i64 },
}

impl std::fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyParams::A { u, v, w } => write!(f, "A(u={u}, v={v}, w={w})"),
            FamilyParams::B { p, q, u, v } => write!(f, "B(p={p}, q={q}, u={u}, v={v})"),
        }
    }
}

/// Values the family formulas predict, to be matched by the general machinery.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedForm {
    pub r: i64,
    pub d: i64,
    pub h: i64,
    #[serde(rename = "case")]
    pub case_tag: CaseTag,
    pub sigma: Rat,
    pub tau: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyResult {
    pub params: FamilyParams,
    pub exponents: ExponentData,
    pub p: ABElement,
    pub p_top: ABElement,
    pub p_low: ABElement,
    pub roots_top: Vec<Rat>,
    pub roots_low: Vec<Rat>,
    pub c_coeff: Rat,
    pub lambda_exponent: i64,
    pub nabla_one: ABElement,
    pub closed_form: ClosedForm,
}

fn q(num: i64, den: i64) -> Rat {
    Rat::frac(num, den)
}

fn assemble(
    params: FamilyParams,
    exponents: ExponentData,
    roots_top: Vec<Rat>,
    roots_low: Vec<Rat>,
    lambda_exponent: i64,
    nabla_one: ABElement,
    closed_form: ClosedForm,
) -> FamilyResult {
    // Read off the displayed operators; not derived from a general rule.
    let c_coeff = Rat::int(-4);
    let p_top = linear_factor_product(&roots_top);
    let p_low = linear_factor_product(&roots_low);
    let lam_part = LaurentPoly::monomial(c_coeff.clone(), lambda_exponent);
    let p = &p_top + &p_low.scale_laurent(&lam_part);
    FamilyResult {
        params,
        exponents,
        p,
        p_top,
        p_low,
        roots_top,
        roots_low,
        c_coeff,
        lambda_exponent,
        nabla_one,
        closed_form,
    }
}

pub fn family_a(u: i64, v: i64, w: i64) -> Result<FamilyResult> {
    if u < 1 || v < 1 || w < 1 {
        return Err(Error::Input(format!(
            "family A needs u, v, w >= 1, got ({u}, {v}, {w})"
        )));
    }
    let exponents = ExponentData::new(
        2,
        vec![vec![2 * u, 0, 0], vec![0, 2 * v, 0], vec![0, 0, 2 * w], vec![u, v, w]],
    )?;
    let s = q(u * v + v * w + w * u, 2 * u * v * w);
    let roots_top = vec![
        Rat::int(2) + q(u + v, 2 * u * v),
        Rat::one() + q(u + w, 2 * u * w),
        q(v + w, 2 * v * w),
    ];
    let roots_low = vec![q(3, 2) + &s, s.clone()];
    let nabla_one = ABElement::linear(&s).scale(&Rat::int(2));
    let closed_form = ClosedForm {
        r: 2,
        d: 2,
        h: 1,
        case_tag: CaseTag::CaseII,
        sigma: Rat::int(-2),
        tau: &s * Rat::int(2),
    };
    Ok(assemble(
        FamilyParams::A { u, v, w },
        exponents,
        roots_top,
        roots_low,
        -2,
        nabla_one,
        closed_form,
    ))
}

pub fn family_b(p: i64, q_: i64, u: i64, v: i64) -> Result<FamilyResult> {
    if p < 1 || q_ < 1 || u < 0 || v < 0 || u + v < 1 {
        return Err(Error::Input(format!(
            "family B needs p, q >= 1, u, v >= 0 and u + v >= 1, got ({p}, {q_}, {u}, {v})"
        )));
    }
    let exponents = ExponentData::new(
        2,
        vec![vec![2 * p, 0, u], vec![0, 2 * q_, v], vec![0, 0, u + v], vec![p, q_, 0]],
    )?;
    let base = p * u + q_ * v + 2 * p * q_;
    let den = 2 * p * q_ * (u + v);
    let t = q(base, den);
    let roots_top = vec![
        Rat::int(2) + q(p + q_, 2 * p * q_),
        q(1, 2) + &t,
        t.clone(),
    ];
    let roots_low = vec![
        Rat::one() + q(base + p * (u + v), den),
        q(base + q_ * (u + v), den),
    ];
    let two = Rat::int(2);
    let nabla_one = -&ABElement::linear(&t).scale(&two);
    let closed_form = ClosedForm {
        r: 2,
        d: 2,
        h: 1,
        case_tag: CaseTag::CaseI,
        sigma: two.clone(),
        tau: -(&t * &two),
    };
    Ok(assemble(
        FamilyParams::B { p, q: q_, u, v },
        exponents,
        roots_top,
        roots_low,
        2,
        nabla_one,
        closed_form,
    ))
}

pub fn build(params: FamilyParams) -> Result<FamilyResult> {
    match params {
        FamilyParams::A { u, v, w } => family_a(u, v, w),
        FamilyParams::B { p, q, u, v } => family_b(p, q, u, v),
    }
}

/// Recognizes exponent data of either family (with `n = 2`).
pub fn detect_family(e: &ExponentData) -> Option<FamilyParams> {
    if e.n() != 2 {
        return None;
    }
    let al = e.alphas();
    let (x, y, z) = (&al[0], &al[1], &al[2]);
    let last = &al[3];
    let (u, v, w) = (last[0], last[1], last[2]);
    if u >= 1 && v >= 1 && w >= 1
        && x[..] == [2 * u, 0, 0]
        && y[..] == [0, 2 * v, 0]
        && z[..] == [0, 0, 2 * w]
    {
        return Some(FamilyParams::A { u, v, w });
    }
    let (p, q_) = (last[0], last[1]);
    let (bu, bv) = (x[2], y[2]);
    if last[2] == 0
        && p >= 1
        && q_ >= 1
        && bu + bv >= 1
        && x[..2] == [2 * p, 0]
        && y[..2] == [0, 2 * q_]
        && z[..] == [0, 0, bu + bv]
    {
        return Some(FamilyParams::B { p, q: q_, u: bu, v: bv });
    }
    None
}

fn factor_text(r: &Rat) -> String {
    if r.is_zero() {
        "a".to_string()
    } else {
        let coeff = ABElement::linear(r);
        format!("({coeff})")
    }
}

fn product_text(roots: &[Rat]) -> String {
    if roots.is_empty() {
        return "1".into();
    }
    roots.iter().map(factor_text).collect::<Vec<_>>().join("*")
}

fn lam_text(c: &Rat, exp: i64) -> (bool, String) {
    let lam = LaurentPoly::monomial(c.abs(), exp).to_string();
    (c.is_negative(), lam)
}

impl FamilyResult {
    /// The factored display, pulling out a common leftmost factor when
    /// `P_top` and `P_low` share one.
    pub fn factored_display(&self) -> String {
        let (negative, lam) = lam_text(&self.c_coeff, self.lambda_exponent);
        let op = if negative { "-" } else { "+" };
        match (self.roots_top.first(), self.roots_low.first()) {
            (Some(t), Some(l)) if t == l => format!(
                "{}*[{} {op} {lam}*{}]",
                factor_text(t),
                product_text(&self.roots_top[1..]),
                product_text(&self.roots_low[1..])
            ),
            _ => format!(
                "{} {op} {lam}*{}",
                product_text(&self.roots_top),
                product_text(&self.roots_low)
            ),
        }
    }

    /// Candidate monodromy rotation numbers: the roots of `P_low` mod 1.
    pub fn monodromy_candidates(&self) -> Vec<Rat> {
        monodromy_candidates(&self.roots_low)
    }
}

/// Each root reduced into `[0, 1)`; multiplicities kept.
pub fn monodromy_candidates(roots: &[Rat]) -> Vec<Rat> {
    roots.iter().map(Rat::fract_floor).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, expected: impl ToString, actual: impl ToString) -> Self {
        let expected = expected.to_string();
        let actual = actual.to_string();
        Check {
            name: name.into(),
            pass: expected == actual,
            expected,
            actual,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossValidation {
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl CrossValidation {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Recomputes everything the family formulas claim through the general
/// exponent and connection machinery and lists each comparison.
pub fn cross_validate(fr: &FamilyResult) -> CrossValidation {
    let mut checks = Vec::new();
    let cf = &fr.closed_form;
    let hyp = validate_hypotheses(&fr.exponents);
    checks.push(Check::new("hypotheses", true, hyp.passes));

    match dependency(&fr.exponents) {
        Ok(dep) => {
            checks.push(Check::new("r", cf.r, dep.r));
            checks.push(Check::new("d", cf.d, dep.d));
            checks.push(Check::new("h", cf.h, dep.h));
            checks.push(Check::new("case", cf.case_tag, dep.case_tag));
            checks.push(Check::new("sigma (relation)", &cf.sigma, &dep.sigma));
            checks.push(Check::new(
                "lambda exponent",
                fr.lambda_exponent,
                dep.lambda_exponent,
            ));
            checks.push(Check::new(
                "deg P_top = d + h",
                dep.d + dep.h,
                fr.p_top.homogeneous_degree().map_or(-1, i64::from),
            ));
            checks.push(Check::new(
                "deg P_low = d",
                dep.d,
                fr.p_low.homogeneous_degree().map_or(-1, i64::from),
            ));
            let det = det_identity_check(&fr.exponents, &dep.relation());
            checks.push(Check::new("det identity", true, det.passes));
        }
        Err(err) => checks.push(Check::new("dependency", "ok", err)),
    }

    checks.push(Check::new("P_top monic in a", true, fr.p_top.is_monic_in_a()));
    checks.push(Check::new("P_low monic in a", true, fr.p_low.is_monic_in_a()));
    let lam = LaurentPoly::monomial(fr.c_coeff.clone(), fr.lambda_exponent);
    let rebuilt = &fr.p_top + &fr.p_low.scale_laurent(&lam);
    checks.push(Check::new("P = P_top + c*lam^e*P_low", &rebuilt, &fr.p));

    match sigma_tau(&fr.exponents, &MonomialMu::one(fr.exponents.n() + 1)) {
        Ok(st) => {
            checks.push(Check::new("sigma (Cramer)", &cf.sigma, &st.sigma));
            checks.push(Check::new("tau (Cramer)", &cf.tau, &st.tau));
            checks.push(Check::new("lam*nabla[1]", &fr.nabla_one, nabla_formula(&st)));
            if let Ok(dep) = dependency(&fr.exponents) {
                let expected_c = &st.tau - Rat::int(dep.d + dep.h) * &st.sigma;
                let got = uniform_shift_coefficient(&fr.p, &st)
                    .map_or_else(|| "none".to_string(), |c| c.to_string());
                checks.push(Check::new("uniform shift C", expected_c, got));
            }
        }
        Err(err) => checks.push(Check::new("sigma_tau", "ok", err)),
    }

    let passed = checks.iter().all(|c| c.pass);
    CrossValidation { checks, passed }
}

/// JSON-facing summary of a family instance.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub params: FamilyParams,
    pub alphas: Vec<Vec<i64>>,
    pub factored: String,
    pub expanded: String,
    pub p_top: String,
    pub p_low: String,
    pub roots_top: Vec<Rat>,
    pub roots_low: Vec<Rat>,
    pub c: Rat,
    pub lambda_exponent: i64,
    pub nabla_one: String,
    pub monodromy_candidates: Vec<Rat>,
    pub closed_form: ClosedForm,
    pub cross_validation: CrossValidation,
}

impl FamilyReport {
    pub fn new(fr: &FamilyResult) -> Self {
        FamilyReport {
            params: fr.params,
            alphas: fr.exponents.alphas().to_vec(),
            factored: fr.factored_display(),
            expanded: fr.p.to_string(),
            p_top: fr.p_top.to_string(),
            p_low: fr.p_low.to_string(),
            roots_top: fr.roots_top.clone(),
            roots_low: fr.roots_low.clone(),
            c: fr.c_coeff.clone(),
            lambda_exponent: fr.lambda_exponent,
            nabla_one: fr.nabla_one.to_string(),
            monodromy_candidates: fr.monodromy_candidates(),
            closed_form: fr.closed_form.clone(),
            cross_validation: cross_validate(fr),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_element;

    fn el(s: &str) -> ABElement {
        parse_element(s).unwrap()
    }

    fn rats(v: &[(i64, i64)]) -> Vec<Rat> {
        v.iter().map(|&(a, b)| Rat::frac(a, b)).collect()
    }

    #[test]
    fn family_a_221() {
        let fr = family_a(2, 2, 1).unwrap();
        let expected = el("(a - 5/2*b)*[(a - 7/4*b)*(a - 3/4*b) - 4*lam^-2*(a - b)]");
        assert_eq!(fr.p, expected);
        assert_eq!(fr.nabla_one, el("2*(a - b)"));
        assert_eq!(
            fr.factored_display(),
            "(a - 5/2*b)*[(a - 7/4*b)*(a - 3/4*b) - 4*lam^-2*(a - b)]"
        );
        assert_eq!(fr.roots_low, rats(&[(5, 2), (1, 1)]));
        let parts = fr.p.homogeneous_components();
        assert_eq!(parts.iter().map(|p| p.degree()).collect::<Vec<_>>(), vec![3, 2]);
        assert!(parts[1].element().terms().all(|(_, c)| c.terms().all(|(t, _)| t == -2)));
        assert!(cross_validate(&fr).passed);
    }

    #[test]
    fn family_a_111() {
        let fr = family_a(1, 1, 1).unwrap();
        assert_eq!(fr.roots_top, rats(&[(3, 1), (2, 1), (1, 1)]));
        assert_eq!(fr.roots_low, rats(&[(3, 1), (3, 2)]));
        assert_eq!(fr.nabla_one, el("2*(a - 3/2*b)"));
        assert!(cross_validate(&fr).passed);
    }

    #[test]
    fn family_b_2211() {
        let fr = family_b(2, 2, 1, 1).unwrap();
        let expected = el("(a - 5/2*b)*(a - 5/4*b)*(a - 3/4*b) - 4*lam^2*(a - 2*b)*(a - b)");
        assert_eq!(fr.p, expected);
        assert_eq!(fr.nabla_one, el("-2*(a - 3/4*b)"));
        assert_eq!(
            fr.factored_display(),
            "(a - 5/2*b)*(a - 5/4*b)*(a - 3/4*b) - 4*lam^2*(a - 2*b)*(a - b)"
        );
        let cv = cross_validate(&fr);
        assert!(cv.passed, "{:?}", cv.failures().collect::<Vec<_>>());
    }

    #[test]
    fn family_b_1111() {
        let fr = family_b(1, 1, 1, 1).unwrap();
        assert_eq!(fr.roots_top, rats(&[(3, 1), (3, 2), (1, 1)]));
        assert_eq!(fr.roots_low, rats(&[(5, 2), (3, 2)]));
        assert!(cross_validate(&fr).passed);
    }

    #[test]
    fn family_a_312() {
        let cv = cross_validate(&family_a(3, 1, 2).unwrap());
        assert!(cv.passed, "{:?}", cv.failures().collect::<Vec<_>>());
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(family_a(0, 1, 1), Err(Error::Input(_))));
        assert!(matches!(family_a(1, -1, 1), Err(Error::Input(_))));
        assert!(matches!(family_b(0, 1, 1, 1), Err(Error::Input(_))));
        assert!(matches!(family_b(1, 1, 0, 0), Err(Error::Input(_))));
        assert!(family_b(1, 1, 0, 1).is_ok());
    }

    #[test]
    fn candidates() {
        assert_eq!(family_a(2, 2, 1).unwrap().monodromy_candidates(), rats(&[(1, 2), (0, 1)]));
        assert_eq!(family_b(2, 2, 1, 1).unwrap().monodromy_candidates(), rats(&[(0, 1), (0, 1)]));
        assert!(monodromy_candidates(&[]).is_empty());
    }

    #[test]
    fn detection_roundtrip() {
        for params in [
            FamilyParams::A { u: 2, v: 2, w: 1 },
            FamilyParams::A { u: 3, v: 1, w: 4 },
            FamilyParams::B { p: 2, q: 2, u: 1, v: 1 },
            FamilyParams::B { p: 1, q: 3, u: 0, v: 2 },
        ] {
            let fr = build(params).unwrap();
            assert_eq!(detect_family(&fr.exponents), Some(params));
        }
        let e = ExponentData::new(1, vec![vec![3, 0], vec![0, 2], vec![1, 1]]).unwrap();
        assert_eq!(detect_family(&e), None);
    }

    #[test]
    fn mismatch_is_reported() {
        let mut fr = family_a(2, 2, 1).unwrap();
        fr.nabla_one = el("2*a");
        let cv = cross_validate(&fr);
        assert!(!cv.passed);
        let names: Vec<_> = cv.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(names, vec!["lam*nabla[1]"]);
    }
}
