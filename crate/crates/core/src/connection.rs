//! The `lam`-connection on the cyclic module generated by a monomial `[μ]`.
//!
//! For `μ = x^β` of total degree `k`, `(σ, τ)` are read off the last row of
//! `M̃⁻¹`, giving `lam·∇[μ] = −(σ·a + (τ − k·σ)·b)[μ]`. Moving `lam·∇` past an
//! operator uses `∇·b = b·∇`, `∇·a = (a − b)·∇` and the Leibniz rule
//! `∇(φ·ω) = φ′·b·ω + φ·∇ω` for `φ ∈ Q[lam, lam⁻¹]`.

use serde::{Deserialize, Serialize};

use crate::algebra::ABElement;
use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::exponent::{validate_hypotheses, ExponentData};

/// `μ = x^β`; `k` is the total degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct MonomialMu {
    beta: Vec<i64>,
    k: i64,
}

impl MonomialMu {
    pub fn new(beta: Vec<i64>) -> Result<Self> {
        if beta.is_empty() {
            return Err(Error::Input("monomial needs at least one variable".into()));
        }
        if beta.iter().any(|&v| v < 0) {
            return Err(Error::Input("monomial exponents must be nonnegative".into()));
        }
        let k = beta.iter().sum();
        Ok(MonomialMu { beta, k })
    }

    /// The monomial `1` in `vars` variables.
    pub fn one(vars: usize) -> Self {
        MonomialMu {
            beta: vec![0; vars.max(1)],
            k: 0,
        }
    }

    pub fn beta(&self) -> &[i64] {
        &self.beta
    }

    pub fn k(&self) -> i64 {
        self.k
    }
}

impl TryFrom<Vec<i64>> for MonomialMu {
    type Error = Error;
    fn try_from(beta: Vec<i64>) -> Result<Self> {
        MonomialMu::new(beta)
    }
}

impl From<MonomialMu> for Vec<i64> {
    fn from(mu: MonomialMu) -> Self {
        mu.beta
    }
}

/// `m_{n+2}·[μ] = (σ·a + τ·b)[μ]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaTau {
    pub sigma: Rat,
    pub tau: Rat,
    pub mu: MonomialMu,
}

pub fn sigma_tau(e: &ExponentData, mu: &MonomialMu) -> Result<SigmaTau> {
    let n = e.n();
    if mu.beta().len() != n + 1 {
        return Err(Error::Input(format!(
            "monomial has {} exponents, expected {}",
            mu.beta().len(),
            n + 1
        )));
    }
    let report = validate_hypotheses(e);
    if !report.passes {
        return Err(Error::Hypothesis(report.messages.join("; ")));
    }
    let inv = e.bordered_matrix().invert().map_err(|err| match err {
        Error::Singular => Error::Hypothesis("bordered exponent matrix is singular".into()),
        other => other,
    })?;
    let last = inv.row(n + 1);
    let sigma = last[0].clone();
    let tau = mu
        .beta()
        .iter()
        .zip(&last[1..])
        .map(|(&b, w)| w * Rat::int(b + 1))
        .sum();
    Ok(SigmaTau {
        sigma,
        tau,
        mu: mu.clone(),
    })
}

/// `N` with `lam·∇[μ] = N[μ]`, i.e. `N = −(σ·a + (τ − k·σ)·b)`.
pub fn nabla_formula(st: &SigmaTau) -> ABElement {
    let k = Rat::int(st.mu.k());
    let b_coeff = &st.tau - &k * &st.sigma;
    let inner = &ABElement::a().scale(&st.sigma) + &ABElement::b().scale(&b_coeff);
    -&inner
}

/// `R` with `lam·∇(Q[μ]) = R[μ]`, by conjugating each monomial past `∇`.
pub fn push_nabla(q: &ABElement, st: &SigmaTau) -> ABElement {
    let nabla = nabla_formula(st);
    let b = ABElement::b();
    let mut out = b.ab_mul(&q.euler_derivative());
    for ((i, j), c) in q.terms() {
        let monomial = ABElement::monomial(c.clone(), i, j);
        out = &out + &monomial.conj_b().ab_mul(&nabla);
    }
    out
}

/// Same as [`push_nabla`] but through the shift identity: a degree-`q`
/// monomial `T` contributes `−(σ·a + (τ − (k+q)·σ)·b)·T`.
pub fn push_nabla_closed_form(q: &ABElement, st: &SigmaTau) -> ABElement {
    let b = ABElement::b();
    let mut out = b.ab_mul(&q.euler_derivative());
    for part in q.homogeneous_components() {
        let shift = Rat::int(st.mu.k() + i64::from(part.degree()));
        let b_coeff = &st.tau - &shift * &st.sigma;
        let factor = &ABElement::a().scale(&st.sigma) + &ABElement::b().scale(&b_coeff);
        out = &out - &factor.ab_mul(part.element());
    }
    out
}

/// The scalar `C` with `push_nabla(P) = −(σ·a + C·b)·P`, when one exists.
pub fn uniform_shift_coefficient(p: &ABElement, st: &SigmaTau) -> Option<Rat> {
    let pushed = push_nabla(p, st);
    let remainder = &pushed + &ABElement::a().scale(&st.sigma).ab_mul(p);
    let bp = ABElement::b().ab_mul(p);
    if remainder.is_zero() {
        return Some(Rat::zero());
    }
    let ((i, j), lead) = bp.terms().next()?;
    let minus_c = remainder.coeff(i, j).constant_ratio(lead)?;
    (bp.scale(&minus_c) == remainder).then(|| -minus_c)
}

/// Coefficients of the period-integral PDE
/// `−lam·∂lam ∂s φ = σ·∂s(s·φ) + (τ − k)·φ`, also written as
/// `lam·∂lam ∂s φ = α·s·∂s φ + β·φ` with `α = −σ`, `β = k − σ − τ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PDECoeffs {
    pub sigma: Rat,
    pub tau: Rat,
    pub k: i64,
    #[serde(rename = "alpha")]
    pub alpha_norm: Rat,
    #[serde(rename = "beta")]
    pub beta_norm: Rat,
}

pub const PDE_TEMPLATE: &str =
    "-lam*d/dlam d/ds phi = sigma*d(s*phi)/ds + (tau - k)*phi";

impl PDECoeffs {
    /// The PDE with σ, τ, k substituted.
    pub fn instantiated(&self) -> String {
        let tau_minus_k = &self.tau - Rat::int(self.k);
        format!(
            "-lam*d/dlam d/ds phi = ({})*d(s*phi)/ds + ({})*phi",
            self.sigma, tau_minus_k
        )
    }

    pub fn normalized(&self) -> String {
        format!(
            "lam*d/dlam d/ds phi = ({})*s*d/ds phi + ({})*phi",
            self.alpha_norm, self.beta_norm
        )
    }
}

pub fn pde_coefficients(st: &SigmaTau) -> PDECoeffs {
    let k = st.mu.k();
    PDECoeffs {
        sigma: st.sigma.clone(),
        tau: st.tau.clone(),
        k,
        alpha_norm: -&st.sigma,
        beta_norm: Rat::int(k) - &st.sigma - &st.tau,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PdeReport {
    pub raw: &'static str,
    pub instantiated: String,
    pub normalized: String,
    pub alpha: Rat,
    pub beta: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectionReport {
    pub sigma: Rat,
    pub tau: Rat,
    pub k: i64,
    pub mu: Vec<i64>,
    pub nabla: String,
    pub pde: PdeReport,
}

impl ConnectionReport {
    pub fn new(st: &SigmaTau) -> Self {
        let pde = pde_coefficients(st);
        ConnectionReport {
            sigma: st.sigma.clone(),
            tau: st.tau.clone(),
            k: st.mu.k(),
            mu: st.mu.beta().to_vec(),
            nabla: nabla_formula(st).to_string(),
            pde: PdeReport {
                raw: PDE_TEMPLATE,
                instantiated: pde.instantiated(),
                normalized: pde.normalized(),
                alpha: pde.alpha_norm,
                beta: pde.beta_norm,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{linear_factor_product, HomogeneousPart};
    use crate::exact::LaurentPoly;
    use crate::parse::parse_element;
    use proptest::prelude::*;

    fn family_a() -> ExponentData {
        ExponentData::new(2, vec![vec![4, 0, 0], vec![0, 4, 0], vec![0, 0, 2], vec![2, 2, 1]])
            .unwrap()
    }

    fn family_b() -> ExponentData {
        ExponentData::new(2, vec![vec![4, 0, 1], vec![0, 4, 1], vec![0, 0, 2], vec![2, 2, 0]])
            .unwrap()
    }

    fn st(e: &ExponentData, beta: &[i64]) -> SigmaTau {
        sigma_tau(e, &MonomialMu::new(beta.to_vec()).unwrap()).unwrap()
    }

    fn el(s: &str) -> ABElement {
        parse_element(s).unwrap()
    }

    #[test]
    fn sigma_tau_examples() {
        let x = st(&family_a(), &[0, 0, 0]);
        assert_eq!((x.sigma, x.tau), (Rat::int(-2), Rat::int(2)));
        let x = st(&family_b(), &[0, 0, 0]);
        assert_eq!((x.sigma, x.tau), (Rat::int(2), Rat::frac(-3, 2)));
        let x = st(&family_a(), &[1, 0, 0]);
        assert_eq!((x.sigma, x.tau), (Rat::int(-2), Rat::frac(5, 2)));
    }

    #[test]
    fn sigma_tau_errors() {
        let mu = MonomialMu::new(vec![0, 0]).unwrap();
        assert!(matches!(sigma_tau(&family_a(), &mu), Err(Error::Input(_))));
        let fermat =
            ExponentData::new(2, vec![vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 3], vec![1, 1, 1]])
                .unwrap();
        assert!(matches!(
            sigma_tau(&fermat, &MonomialMu::one(3)),
            Err(Error::Hypothesis(_))
        ));
        assert!(MonomialMu::new(vec![1, -1]).is_err());
    }

    #[test]
    fn nabla_examples() {
        assert_eq!(nabla_formula(&st(&family_a(), &[0, 0, 0])), el("2*a - 2*b"));
        assert_eq!(nabla_formula(&st(&family_b(), &[0, 0, 0])), el("-2*a + 3/2*b"));
        assert_eq!(nabla_formula(&st(&family_a(), &[1, 0, 0])), el("2*a - 9/2*b"));
    }

    #[test]
    fn push_examples() {
        let s = st(&family_a(), &[0, 0, 0]);
        assert_eq!(push_nabla(&ABElement::one(), &s), nabla_formula(&s));
        assert_eq!(push_nabla(&ABElement::b(), &s), el("2*a*b - 4*b^2"));

        let p = el("(a - 5/2*b)*[(a - 7/4*b)*(a - 3/4*b) - 4*lam^-2*(a - b)]");
        let pushed = push_nabla(&p, &s);
        assert_eq!(pushed, el("2*a - 8*b").ab_mul(&p));
        assert_eq!(pushed, push_nabla_closed_form(&p, &s));
        assert_eq!(uniform_shift_coefficient(&p, &s), Some(Rat::int(8)));
    }

    #[test]
    fn lambda_dependence_follows_leibniz() {
        // lam·∇(lam^t·[μ]) = t·lam^t·b[μ] + lam^t·N[μ]
        let s = st(&family_b(), &[0, 1, 0]);
        let t = 3;
        let q = ABElement::laurent(LaurentPoly::monomial(Rat::one(), t));
        let expected = &ABElement::monomial(LaurentPoly::monomial(Rat::int(t), t), 0, 1)
            + &nabla_formula(&s).scale_laurent(&LaurentPoly::monomial(Rat::one(), t));
        assert_eq!(push_nabla(&q, &s), expected);
    }

    #[test]
    fn no_uniform_shift_for_mismatched_degrees() {
        // lam^0 on the lower piece breaks the (d+h)·σ = d·σ ± r balance.
        let s = st(&family_a(), &[0, 0, 0]);
        let p = &linear_factor_product(&[Rat::one(), Rat::one(), Rat::one()])
            + &linear_factor_product(&[Rat::one(), Rat::one()]);
        assert_eq!(uniform_shift_coefficient(&p, &s), None);
    }

    #[test]
    fn pde_examples() {
        let c = pde_coefficients(&st(&family_a(), &[0, 0, 0]));
        assert_eq!((c.alpha_norm.clone(), c.beta_norm.clone()), (Rat::int(2), Rat::zero()));
        let c = pde_coefficients(&st(&family_b(), &[0, 0, 0]));
        assert_eq!((c.alpha_norm, c.beta_norm), (Rat::int(-2), Rat::frac(-1, 2)));
        let c = pde_coefficients(&st(&family_a(), &[1, 0, 0]));
        assert_eq!((c.alpha_norm, c.beta_norm), (Rat::int(2), Rat::frac(1, 2)));
    }

    #[test]
    fn report_json_shape() {
        let v = serde_json::to_value(ConnectionReport::new(&st(&family_a(), &[0, 0, 0]))).unwrap();
        assert_eq!(v["sigma"], "-2");
        assert_eq!(v["tau"], "2");
        assert_eq!(v["k"], 0);
        assert_eq!(v["nabla"], "2*a - 2*b");
        assert_eq!(v["pde"]["raw"], PDE_TEMPLATE);
        assert_eq!(v["pde"]["alpha"], "2");
        assert_eq!(v["pde"]["beta"], "0");
    }

    fn rat() -> impl Strategy<Value = Rat> {
        (-6i64..=6, 1i64..=4).prop_map(|(p, d)| Rat::frac(p, d))
    }

    fn homogeneous(max_deg: u32) -> impl Strategy<Value = ABElement> {
        (0..=max_deg).prop_flat_map(|k| {
            proptest::collection::vec((rat(), -2i64..=2), (k + 1) as usize).prop_map(move |cs| {
                cs.into_iter().enumerate().fold(ABElement::zero(), |acc, (j, (c, t))| {
                    &acc + &ABElement::monomial(LaurentPoly::monomial(c, t), k - j as u32, j as u32)
                })
            })
        })
    }

    fn lambda_free(max_deg: u32) -> impl Strategy<Value = ABElement> {
        proptest::collection::vec((0..=max_deg, 0..=max_deg, rat()), 0..5).prop_map(|ts| {
            ts.into_iter().fold(ABElement::zero(), |acc, (i, j, c)| {
                &acc + &ABElement::monomial(LaurentPoly::constant(c), i, j)
            })
        })
    }

    fn any_st() -> impl Strategy<Value = SigmaTau> {
        (rat(), rat(), proptest::collection::vec(0i64..4, 3)).prop_map(|(sigma, tau, beta)| {
            SigmaTau {
                sigma,
                tau,
                mu: MonomialMu::new(beta).unwrap(),
            }
        })
    }

    proptest! {
        #[test]
        fn two_routes_agree(q in homogeneous(4), s in any_st()) {
            prop_assert!(HomogeneousPart::new(q.clone()).is_ok());
            prop_assert_eq!(push_nabla(&q, &s), push_nabla_closed_form(&q, &s));
        }

        #[test]
        fn nabla_commutes_with_b(q in lambda_free(3), s in any_st()) {
            let bq = ABElement::b().ab_mul(&q);
            prop_assert_eq!(push_nabla(&bq, &s), ABElement::b().ab_mul(&push_nabla(&q, &s)));
        }

        #[test]
        fn nabla_twists_a(q in lambda_free(3), s in any_st()) {
            let aq = ABElement::a().ab_mul(&q);
            let a_minus_b = &ABElement::a() - &ABElement::b();
            prop_assert_eq!(push_nabla(&aq, &s), a_minus_b.ab_mul(&push_nabla(&q, &s)));
        }
    }
}
