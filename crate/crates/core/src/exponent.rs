//! Exponent data `α₁, …, α_{n+2}` of `f = Σ_{j≤n+1} x^{α_j} + lam·x^{α_{n+2}}`.
//!
//! Two rank conditions are required: the bordered matrix `M̃` (a row of ones
//! above `M = (α₁ … α_{n+2})`) has full rank `n+2`, which is the
//! non-quasi-homogeneity of `f`, and the first `n+1` exponents form a basis,
//! i.e. the square matrix `M′ = (α₁ … α_{n+1})` is invertible.

use std::collections::HashSet;

use num::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{lcm_denominators, Rat, RatMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawExponentData")]
pub struct ExponentData {
    n: usize,
    alphas: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct RawExponentData {
    n: usize,
    alphas: Vec<Vec<i64>>,
}

impl TryFrom<RawExponentData> for ExponentData {
    type Error = Error;
    fn try_from(raw: RawExponentData) -> Result<Self> {
        ExponentData::new(raw.n, raw.alphas)
    }
}

impl ExponentData {
    /// `n ≥ 1`, exactly `n+2` pairwise distinct vectors of `n+1`
    /// nonnegative entries; the last one is the exponent of the `lam` term.
    pub fn new(n: usize, alphas: Vec<Vec<i64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("n must be at least 1".into()));
        }
        if alphas.len() != n + 2 {
            return Err(Error::Input(format!(
                "expected {} exponent vectors for n = {n}, got {}",
                n + 2,
                alphas.len()
            )));
        }
        for (j, alpha) in alphas.iter().enumerate() {
            if alpha.len() != n + 1 {
                return Err(Error::Input(format!(
                    "alpha_{} has {} entries, expected {}",
                    j + 1,
                    alpha.len(),
                    n + 1
                )));
            }
            if alpha.iter().any(|&v| v < 0) {
                return Err(Error::Input(format!("alpha_{} has a negative entry", j + 1)));
            }
        }
        let mut seen = HashSet::new();
        for (j, alpha) in alphas.iter().enumerate() {
            if !seen.insert(alpha) {
                return Err(Error::Input(format!("alpha_{} repeats an earlier exponent", j + 1)));
            }
        }
        Ok(ExponentData { n, alphas })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphas(&self) -> &[Vec<i64>] {
        &self.alphas
    }

    /// Exponent of the `lam`-monomial.
    pub fn lambda_alpha(&self) -> &[i64] {
        &self.alphas[self.n + 1]
    }

    /// `M′`: columns `α₁ … α_{n+1}`.
    pub fn base_matrix(&self) -> RatMatrix {
        let rows = (0..=self.n)
            .map(|coord| self.alphas[..=self.n].iter().map(|a| Rat::int(a[coord])).collect())
            .collect();
        RatMatrix::from_rows(rows).expect("n >= 1")
    }

    /// `M̃`: a row of ones above the columns `α₁ … α_{n+2}`.
    pub fn bordered_matrix(&self) -> RatMatrix {
        let mut rows = vec![vec![Rat::one(); self.n + 2]];
        rows.extend(
            (0..=self.n).map(|coord| self.alphas.iter().map(|a| Rat::int(a[coord])).collect()),
        );
        RatMatrix::from_rows(rows).expect("n >= 1")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub rank_bordered: usize,
    pub rank_base: usize,
    pub hypothesis_i: bool,
    pub hypothesis_ii: bool,
    pub passes: bool,
    pub messages: Vec<String>,
}

pub fn validate_hypotheses(e: &ExponentData) -> HypothesisReport {
    let n = e.n();
    let rank_bordered = e.bordered_matrix().rank();
    let rank_base = e.base_matrix().rank();
    let hypothesis_i = rank_bordered == n + 2;
    let hypothesis_ii = rank_base == n + 1;
    let mut messages = Vec::new();
    if !hypothesis_i {
        messages.push(format!(
            "hypothesis i) fails: rank {rank_bordered} < {}",
            n + 2
        ));
    }
    if !hypothesis_ii {
        messages.push(format!("hypothesis ii) fails: rank {rank_base} < {}", n + 1));
        if hypothesis_i {
            messages.push(
                "hypothesis i) holds: some reordering of the monomials satisfies ii), \
                 at the cost of replacing lam by c*lam^m"
                    .into(),
            );
        }
    }
    HypothesisReport {
        rank_bordered,
        rank_base,
        hypothesis_i,
        hypothesis_ii,
        passes: hypothesis_i && hypothesis_ii,
        messages,
    }
}

/// The primitive integral relation `r·α_{n+2} = Σ p_j·α_j`, `r > 0` minimal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub r: i64,
    pub p: Vec<i64>,
}

impl Relation {
    pub fn sum_p(&self) -> i64 {
        self.p.iter().sum()
    }
}

/// Needs only hypothesis ii); the quasi-homogeneous case still has a relation.
pub fn linear_relation(e: &ExponentData) -> Result<Relation> {
    let rhs: Vec<Rat> = e.lambda_alpha().iter().map(|&v| Rat::int(v)).collect();
    let q = e.base_matrix().solve(&rhs).map_err(|err| match err {
        Error::Singular => Error::Hypothesis(format!(
            "hypothesis ii) fails: rank {} < {}",
            e.base_matrix().rank(),
            e.n() + 1
        )),
        other => other,
    })?;
    let r_big = lcm_denominators(&q);
    let too_big = || Error::Input("dependency coefficients overflow i64".into());
    let r = r_big.to_i64().ok_or_else(too_big)?;
    let r_rat = Rat::int(r_big);
    let p = q
        .iter()
        .map(|qj| (qj * &r_rat).to_i64().ok_or_else(too_big))
        .collect::<Result<Vec<_>>>()?;
    Ok(Relation { r, p })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    /// `r − Σ_{p_j<0} p_j > Σ_{p_j>0} p_j`: σ = r/h, `lam^r` in P.
    #[serde(rename = "I")]
    CaseI,
    /// The opposite inequality: σ = −r/h, `lam^-r` in P.
    #[serde(rename = "II")]
    CaseII,
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CaseTag::CaseI => "I",
            CaseTag::CaseII => "II",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DependencyData {
    pub r: i64,
    pub p: Vec<i64>,
    pub sum_p: i64,
    pub d: i64,
    pub h: i64,
    #[serde(rename = "case")]
    pub case_tag: CaseTag,
    pub sigma: Rat,
    pub lambda_exponent: i64,
}

impl DependencyData {
    pub fn relation(&self) -> Relation {
        Relation {
            r: self.r,
            p: self.p.clone(),
        }
    }
}

pub fn dependency(e: &ExponentData) -> Result<DependencyData> {
    let report = validate_hypotheses(e);
    if !report.passes {
        return Err(Error::Hypothesis(report.messages.join("; ")));
    }
    let Relation { r, p } = linear_relation(e)?;
    let sum_p: i64 = p.iter().sum();
    let nonpositive: i64 = p.iter().filter(|&&v| v <= 0).sum();
    let positive: i64 = p.iter().filter(|&&v| v > 0).sum();
    let first = r - nonpositive;
    if first == positive {
        // Equality means Σp = r, which makes det(M̃) vanish.
        return Err(Error::Contract(format!(
            "r - sum(p_j <= 0) = sum(p_j > 0) = {positive} although hypothesis i) holds"
        )));
    }
    let d = first.min(positive);
    let h = first.max(positive) - d;
    let case_tag = if first > positive {
        CaseTag::CaseI
    } else {
        CaseTag::CaseII
    };
    let sigma = Rat::frac(r, r - sum_p);
    let (expected, lambda_exponent) = match case_tag {
        CaseTag::CaseI => (Rat::frac(r, h), r),
        CaseTag::CaseII => (Rat::frac(-r, h), -r),
    };
    if sigma != expected {
        return Err(Error::Contract(format!(
            "sigma = {sigma} disagrees with the case rule value {expected}"
        )));
    }
    Ok(DependencyData {
        r,
        p,
        sum_p,
        d,
        h,
        case_tag,
        sigma,
        lambda_exponent,
    })
}

/// Both sides of `det M̃ = (−1)^{n+1}·(1 − Σp_j/r)·det M′`, and σ from the
/// determinant ratio against σ from the relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetIdentityReport {
    pub det_base: Rat,
    pub det_bordered: Rat,
    pub factor: Rat,
    pub rhs: Rat,
    pub identity_holds: bool,
    pub sigma_from_dets: Option<Rat>,
    pub sigma_from_relation: Option<Rat>,
    pub sigma_agrees: bool,
    pub passes: bool,
}

fn sign_n_plus_1(n: usize) -> Rat {
    if (n + 1).is_multiple_of(2) {
        Rat::one()
    } else {
        -Rat::one()
    }
}

pub fn det_identity_check(e: &ExponentData, rel: &Relation) -> DetIdentityReport {
    let det_base = e.base_matrix().det().expect("square");
    let det_bordered = e.bordered_matrix().det().expect("square");
    let sign = sign_n_plus_1(e.n());
    let factor = &sign * (Rat::one() - Rat::frac(rel.sum_p(), rel.r));
    let rhs = &factor * &det_base;
    let identity_holds = rhs == det_bordered;
    let sigma_from_dets = (!det_bordered.is_zero()).then(|| &sign * &det_base / &det_bordered);
    let denom = rel.r - rel.sum_p();
    let sigma_from_relation = (denom != 0).then(|| Rat::frac(rel.r, denom));
    let sigma_agrees = sigma_from_dets == sigma_from_relation;
    DetIdentityReport {
        det_base,
        det_bordered,
        factor,
        rhs,
        identity_holds,
        sigma_from_dets,
        sigma_from_relation,
        sigma_agrees,
        passes: identity_holds && sigma_agrees,
    }
}
