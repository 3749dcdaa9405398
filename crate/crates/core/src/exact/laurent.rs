//! Sparse Laurent polynomials in `lam` with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::Rat;

/// `Σ c_t · lam^t` with only nonzero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, 0)
    }

    /// `c · lam^exp`
    pub fn monomial(c: Rat, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Rat)>) -> Self {
        let mut out = LaurentPoly::zero();
        for (t, c) in terms {
            out.add_term(t, &c);
        }
        out
    }

    fn add_term(&mut self, exp: i64, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The coefficient when the polynomial is `lam`-free.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn coeff(&self, exp: i64) -> Rat {
        self.terms.get(&exp).cloned().unwrap_or_else(Rat::zero)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.terms.iter().map(|(&t, c)| (t, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(&t, v)| (t, v * c)).collect(),
        }
    }

    /// `lam · d/dlam`, i.e. `lam^t ↦ t · lam^t`.
    pub fn euler_derivative(&self) -> Self {
        LaurentPoly::from_terms(self.terms.iter().map(|(&t, c)| (t, c * Rat::int(t))))
    }

    /// Exact ratio `self / other` when it is a rational constant.
    pub fn constant_ratio(&self, other: &LaurentPoly) -> Option<Rat> {
        let (&t0, c0) = other.terms.iter().next()?;
        let ratio = self.coeff(t0).checked_div(c0).ok()?;
        (other.scale(&ratio) == *self).then_some(ratio)
    }
}

impl From<Rat> for LaurentPoly {
    fn from(c: Rat) -> Self {
        LaurentPoly::constant(c)
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&t, c) in &rhs.terms {
            out.add_term(t, c);
        }
        out
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&t, c) in &rhs.terms {
            out.add_term(t, &-c);
        }
        out
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&s, c) in &self.terms {
            for (&t, d) in &rhs.terms {
                out.add_term(s + t, &(c * d));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&t, c)| (t, -c)).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (&t, c)) in self.terms.iter().enumerate() {
            let magnitude = if idx == 0 {
                c.clone()
            } else if c.is_negative() {
                write!(f, " - ")?;
                -c
            } else {
                write!(f, " + ")?;
                c.clone()
            };
            if t == 0 {
                write!(f, "{magnitude}")?;
                continue;
            }
            if magnitude.is_one() {
            } else if magnitude == -1 {
                write!(f, "-")?;
            } else {
                write!(f, "{magnitude}*")?;
            }
            if t == 1 {
                write!(f, "lam")?;
            } else {
                write!(f, "lam^{t}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(t, p, q)| (t, Rat::frac(p, q))))
    }

    #[test]
    fn display_ascending() {
        assert_eq!(lp(&[(0, 1, 1), (-2, -4, 1)]).to_string(), "-4*lam^-2 + 1");
        assert_eq!(lp(&[(1, 1, 1), (2, -1, 1)]).to_string(), "lam - lam^2");
        assert_eq!(lp(&[(3, -7, 4)]).to_string(), "-7/4*lam^3");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn arithmetic_prunes_zeros() {
        let x = lp(&[(0, 1, 1), (1, 1, 1)]);
        let y = lp(&[(1, -1, 1)]);
        assert_eq!(&x + &y, LaurentPoly::one());
        assert!((&x - &x).is_zero());
        // (1 + lam)(1 - lam) = 1 - lam^2
        let z = lp(&[(0, 1, 1), (1, -1, 1)]);
        assert_eq!(&x * &z, lp(&[(0, 1, 1), (2, -1, 1)]));
        // lam^-1 * lam = 1
        assert_eq!(&lp(&[(-1, 1, 1)]) * &lp(&[(1, 1, 1)]), LaurentPoly::one());
    }

    #[test]
    fn euler_derivative_and_ratio() {
        let x = lp(&[(-2, 3, 1), (0, 5, 1), (1, 1, 2)]);
        assert_eq!(x.euler_derivative(), lp(&[(-2, -6, 1), (1, 1, 2)]));
        assert_eq!(x.scale(&Rat::frac(-2, 3)).constant_ratio(&x), Some(Rat::frac(-2, 3)));
        assert_eq!(lp(&[(0, 1, 1)]).constant_ratio(&lp(&[(1, 1, 1)])), None);
    }
}
