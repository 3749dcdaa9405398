//! Propagation of formal expansion coefficients in the parameter.
//!
//! A solution `Σ_{k≤N} Σ_i Σ_m c_m^{i,k}(lam)·s^{m+ρ_i}·(Log s)^k/k!` of
//! `lam·∂lam ∂s φ = α·s·∂s φ + β·φ` has coefficients that are polynomials of
//! degree `≤ m` in `ℓ = Log(lam/lam₀)`, determined by their values at `ℓ = 0`
//! through
//!
//! ```text
//! (m+ρ_i+1)·D c_{m+1}^{i,k} + D c_{m+1}^{i,k+1} = (α(m+ρ_i)+β)·c_m^{i,k} + α·c_m^{i,k+1}
//! ```
//!
//! with `D = d/dℓ` and `c^{i,N+1} = 0`. Derivatives are solved for by
//! descending `k`, then integrated with the seed value as constant term.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rat;

/// `Σ coeffs[e]·ℓ^e`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LogPoly {
    coeffs: BTreeMap<u32, Rat>,
}

impl LogPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs([(0, c)])
    }

    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (u32, Rat)>) -> Self {
        let mut out = Self::zero();
        for (e, c) in coeffs {
            out.add_term(e, &c);
        }
        out
    }

    fn add_term(&mut self, e: u32, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, e: u32) -> Rat {
        self.coeffs.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &Rat)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    /// Value at `ℓ = 0`.
    pub fn at_zero(&self) -> Rat {
        self.coeff(0)
    }

    pub fn eval(&self, ell: &Rat) -> Rat {
        self.coeffs
            .iter()
            .map(|(&e, c)| c * ell.pow(e as i32).expect("nonnegative power"))
            .sum()
    }

    pub fn derivative(&self) -> LogPoly {
        LogPoly::from_coeffs(
            self.coeffs
                .iter()
                .filter(|(&e, _)| e > 0)
                .map(|(&e, c)| (e - 1, c * Rat::int(e))),
        )
    }

    pub fn scale(&self, c: &Rat) -> LogPoly {
        LogPoly::from_coeffs(self.coeffs.iter().map(|(&e, v)| (e, v * c)))
    }

    pub fn add(&self, rhs: &LogPoly) -> LogPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.coeffs {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, rhs: &LogPoly) -> LogPoly {
        self.add(&rhs.scale(&-Rat::one()))
    }
}

impl fmt::Debug for LogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}

/// Ascending powers, e.g. `2 - 1/3*l + l^2`.
impl fmt::Display for LogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (n, (&e, c)) in self.coeffs.iter().enumerate() {
            let mag = c.abs();
            match (n, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let var = match e {
                0 => String::new(),
                1 => "l".into(),
                _ => format!("l^{e}"),
            };
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "{var}")?,
                _ => write!(f, "{mag}*{var}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for LogPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<String, &Rat> = self.coeffs.iter().map(|(e, c)| (e.to_string(), c)).collect();
        m.serialize(serializer)
    }
}

/// The antiderivative under `d/dℓ` with zero constant term.
pub fn integrate_log(d: &LogPoly) -> LogPoly {
    LogPoly::from_coeffs(
        d.coeffs
            .iter()
            .map(|(&e, c)| (e + 1, c / Rat::int(i64::from(e) + 1))),
    )
}

/// `(i, k, m)`: exponent index, log-power in `s`, order in `s`.
pub type Index = (usize, usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionSpec {
    pub rhos: Vec<Rat>,
    #[serde(rename = "N")]
    pub max_log_power: usize,
    #[serde(rename = "M")]
    pub order: usize,
    pub alpha: Rat,
    pub beta: Rat,
}

impl ExpansionSpec {
    /// Every `ρ_i > −1`, and no two differ by an integer (which includes
    /// equality): buckets `s^{m+ρ_i}` would otherwise overlap.
    pub fn validate(&self) -> Result<()> {
        for (i, rho) in self.rhos.iter().enumerate() {
            if !(rho > &Rat::int(-1)) {
                return Err(Error::Spec(format!("rho_{i} = {rho} is not > -1")));
            }
        }
        for (i, a) in self.rhos.iter().enumerate() {
            for (j, b) in self.rhos.iter().enumerate().skip(i + 1) {
                if (a - b).is_integer() {
                    return Err(Error::Spec(format!(
                        "rho_{i} = {a} and rho_{j} = {b} differ by an integer"
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_index(&self, &(i, k, m): &Index) -> Result<()> {
        if i >= self.rhos.len() || k > self.max_log_power || m > self.order {
            return Err(Error::Spec(format!(
                "seed index ({i},{k},{m}) outside i < {}, k <= {}, m <= {}",
                self.rhos.len(),
                self.max_log_power,
                self.order
            )));
        }
        Ok(())
    }
}

/// Values `c_m^{i,k}(lam₀)`; missing entries are zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Seed(BTreeMap<Index, Rat>);

impl Seed {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, idx: Index, value: Rat) {
        if value.is_zero() {
            self.0.remove(&idx);
        } else {
            self.0.insert(idx, value);
        }
    }

    pub fn get(&self, idx: &Index) -> Rat {
        self.0.get(idx).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Index, &Rat)> {
        self.0.iter()
    }

    pub fn add(&self, other: &Seed) -> Seed {
        let mut out = self.clone();
        for (idx, v) in &other.0 {
            let sum = out.get(idx) + v;
            out.set(*idx, sum);
        }
        out
    }
}

impl FromIterator<(Index, Rat)> for Seed {
    fn from_iter<T: IntoIterator<Item = (Index, Rat)>>(iter: T) -> Self {
        let mut s = Seed::new();
        for (idx, v) in iter {
            s.set(idx, v);
        }
        s
    }
}

/// Parses keys of the form `"i,k,m"`.
pub fn parse_index(key: &str) -> Result<Index> {
    let parts: Vec<&str> = key.split(',').map(str::trim).collect();
    let bad = || Error::Input(format!("seed key {key:?} is not \"i,k,m\""));
    if parts.len() != 3 {
        return Err(bad());
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    Ok((num(parts[0])?, num(parts[1])?, num(parts[2])?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionTable {
    pub entries: BTreeMap<Index, LogPoly>,
}

impl ExpansionTable {
    pub fn get(&self, idx: &Index) -> LogPoly {
        self.entries.get(idx).cloned().unwrap_or_default()
    }

    /// Keyed `"i,k,m"` with each polynomial as `{"degree": "coeff"}`.
    pub fn to_json(&self) -> serde_json::Value {
        let m: serde_json::Map<String, serde_json::Value> = self
            .entries
            .iter()
            .map(|(&(i, k, m), p)| {
                (format!("{i},{k},{m}"), serde_json::to_value(p).expect("serializable"))
            })
            .collect();
        serde_json::Value::Object(m)
    }

    /// One row per `(i,k,m)`; columns hold the `ℓ^0 … ℓ^M` coefficients.
    pub fn to_csv(&self, order: usize) -> String {
        let mut out = String::from("i,k,m");
        for e in 0..=order {
            out.push_str(&format!(",l^{e}"));
        }
        out.push('\n');
        for (&(i, k, m), p) in &self.entries {
            out.push_str(&format!("{i},{k},{m}"));
            for e in 0..=order as u32 {
                out.push_str(&format!(",{}", p.coeff(e)));
            }
            out.push('\n');
        }
        out
    }
}

pub fn propagate(spec: &ExpansionSpec, seed: &Seed) -> Result<ExpansionTable> {
    spec.validate()?;
    for (idx, _) in seed.entries() {
        spec.check_index(idx)?;
    }
    let n = spec.max_log_power;
    let mut entries = BTreeMap::new();
    for (i, rho) in spec.rhos.iter().enumerate() {
        // column[k] holds c_m^{i,k} for the current m; slot N+1 stays zero.
        let mut column: Vec<LogPoly> = (0..=n + 1)
            .map(|k| {
                if k <= n {
                    LogPoly::constant(seed.get(&(i, k, 0)))
                } else {
                    LogPoly::zero()
                }
            })
            .collect();
        for (k, c) in column.iter().enumerate().take(n + 1) {
            entries.insert((i, k, 0), c.clone());
        }
        for m in 0..spec.order {
            let mr = Rat::int(m as i64) + rho;
            let lead = &mr + Rat::one();
            let weight = &spec.alpha * &mr + &spec.beta;
            let mut next_derivative = LogPoly::zero();
            let mut next = vec![LogPoly::zero(); n + 2];
            for k in (0..=n).rev() {
                let rhs = column[k]
                    .scale(&weight)
                    .add(&column[k + 1].scale(&spec.alpha))
                    .sub(&next_derivative);
                let derivative = rhs.scale(&lead.recip().expect("rho > -1"));
                next[k] = LogPoly::constant(seed.get(&(i, k, m + 1))).add(&integrate_log(&derivative));
                next_derivative = derivative;
            }
            for (k, c) in next.iter().enumerate().take(n + 1) {
                entries.insert((i, k, m + 1), c.clone());
            }
            column = next;
        }
    }
    Ok(ExpansionTable { entries })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualReport {
    /// Nonzero residuals only.
    pub residuals: BTreeMap<Index, LogPoly>,
    pub checked: usize,
}

impl ResidualReport {
    pub fn passes(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// Substitutes the table into the recursion at every `(i, k, m)` with
/// `m < M`; missing entries count as zero.
pub fn verify_table(spec: &ExpansionSpec, table: &ExpansionTable) -> ResidualReport {
    let n = spec.max_log_power;
    let at = |i, k, m| {
        if k > n {
            LogPoly::zero()
        } else {
            table.get(&(i, k, m))
        }
    };
    let mut residuals = BTreeMap::new();
    let mut checked = 0;
    for (i, rho) in spec.rhos.iter().enumerate() {
        for m in 0..spec.order {
            let mr = Rat::int(m as i64) + rho;
            let lead = &mr + Rat::one();
            let weight = &spec.alpha * &mr + &spec.beta;
            for k in 0..=n {
                let lhs = at(i, k, m + 1)
                    .derivative()
                    .scale(&lead)
                    .add(&at(i, k + 1, m + 1).derivative());
                let rhs = at(i, k, m)
                    .scale(&weight)
                    .add(&at(i, k + 1, m).scale(&spec.alpha));
                let r = lhs.sub(&rhs);
                checked += 1;
                if !r.is_zero() {
                    residuals.insert((i, k, m), r);
                }
            }
        }
    }
    ResidualReport { residuals, checked }
}
