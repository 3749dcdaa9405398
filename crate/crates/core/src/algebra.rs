//! The algebra generated by `a` and `b` with `a·b − b·a = b²`, extended by
//! central Laurent coefficients in `lam`.
//!
//! Elements are kept in a-left normal form `Σ c_{ij}(lam)·aⁱ·bʲ`. The only
//! rewriting needed is `bʲ·a = (a − j·b)·bʲ`: right multiplication by `a`
//! sends `aⁱbʲ` to `aⁱ⁺¹bʲ − j·aⁱbʲ⁺¹`, and right multiplication by `b`
//! just raises the b-power.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exact::{LaurentPoly, Rat};

/// Exponent pair `(i, j)` of the normal-form monomial `aⁱ·bʲ`.
pub type Key = (u32, u32);

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ABElement {
    terms: BTreeMap<Key, LaurentPoly>,
}

impl ABElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(Rat::one())
    }

    pub fn a() -> Self {
        Self::monomial(LaurentPoly::one(), 1, 0)
    }

    pub fn b() -> Self {
        Self::monomial(LaurentPoly::one(), 0, 1)
    }

    pub fn scalar(c: Rat) -> Self {
        Self::monomial(LaurentPoly::constant(c), 0, 0)
    }

    pub fn laurent(c: LaurentPoly) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// `c(lam)·aⁱ·bʲ`
    pub fn monomial(c: LaurentPoly, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        ABElement { terms }
    }

    /// `a − c·b`
    pub fn linear(c: &Rat) -> Self {
        &Self::a() - &Self::b().scale(c)
    }

    fn add_term(&mut self, key: Key, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(slot) => {
                *slot = &*slot + c;
                if slot.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> LaurentPoly {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Terms in ascending `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Key, &LaurentPoly)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest `i + j` over the stored terms.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// The common total degree when every term has the same one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|&(i, j)| i + j);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Homogeneous of degree `k` with `aᵏ` carrying coefficient 1.
    pub fn is_monic_in_a(&self) -> bool {
        self.homogeneous_degree()
            .is_some_and(|k| self.coeff(k, 0).is_one())
    }

    pub fn is_lambda_free(&self) -> bool {
        self.terms.values().all(|c| c.as_constant().is_some())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ABElement {
            terms: self.terms.iter().map(|(&k, v)| (k, v.scale(c))).collect(),
        }
    }

    pub fn scale_laurent(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        for (&k, v) in &self.terms {
            out.add_term(k, &(v * c));
        }
        out
    }

    /// Applies `lam·d/dlam` to every coefficient.
    pub fn euler_derivative(&self) -> Self {
        let mut out = Self::zero();
        for (&k, v) in &self.terms {
            out.add_term(k, &v.euler_derivative());
        }
        out
    }

    fn mul_right_a(&self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            out.add_term((i + 1, j), c);
            if j > 0 {
                out.add_term((i, j + 1), &c.scale(&-Rat::int(j)));
            }
        }
        out
    }

    fn mul_right_b_pow(&self, l: u32) -> Self {
        ABElement {
            terms: self.terms.iter().map(|(&(i, j), c)| ((i, j + l), c.clone())).collect(),
        }
    }

    /// Normal-form product `self · rhs`.
    pub fn ab_mul(&self, rhs: &ABElement) -> ABElement {
        let max_a = rhs.terms.keys().map(|&(k, _)| k).max().unwrap_or(0);
        let mut right_a_powers = Vec::with_capacity(max_a as usize + 1);
        right_a_powers.push(self.clone());
        for k in 1..=max_a as usize {
            let next = right_a_powers[k - 1].mul_right_a();
            right_a_powers.push(next);
        }
        let mut out = Self::zero();
        for (&(k, l), c) in &rhs.terms {
            let piece = right_a_powers[k as usize].mul_right_b_pow(l);
            for (&key, v) in &piece.terms {
                out.add_term(key, &(v * c));
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> ABElement {
        (0..exp).fold(Self::one(), |acc, _| acc.ab_mul(self))
    }

    /// `b·Q·b⁻¹`, computed on generators as `a ↦ a − b`, `b ↦ b`.
    pub fn conj_b(&self) -> ABElement {
        let max_a = self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0);
        let shifted_a = &Self::a() - &Self::b();
        let mut powers = vec![Self::one()];
        for i in 1..=max_a as usize {
            let next = powers[i - 1].ab_mul(&shifted_a);
            powers.push(next);
        }
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            let piece = powers[i as usize].mul_right_b_pow(j);
            for (&key, v) in &piece.terms {
                out.add_term(key, &(v * c));
            }
        }
        out
    }

    /// Splits into homogeneous parts, highest degree first.
    pub fn homogeneous_components(&self) -> Vec<HomogeneousPart> {
        let mut parts: BTreeMap<u32, ABElement> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            parts
                .entry(i + j)
                .or_default()
                .terms
                .insert((i, j), c.clone());
        }
        parts
            .into_iter()
            .rev()
            .map(|(degree, element)| HomogeneousPart { degree, element })
            .collect()
    }

    /// Terms in display order: descending total degree, then descending a-power.
    fn display_order(&self) -> Vec<(Key, &LaurentPoly)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by_key(|&((i, j), _)| std::cmp::Reverse((i + j, i)));
        v
    }
}

fn monomial_text(i: u32, j: u32) -> String {
    let mut parts = Vec::new();
    match i {
        0 => {}
        1 => parts.push("a".to_string()),
        _ => parts.push(format!("a^{i}")),
    }
    match j {
        0 => {}
        1 => parts.push("b".to_string()),
        _ => parts.push(format!("b^{j}")),
    }
    parts.join("*")
}

impl fmt::Display for ABElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, ((i, j), c)) in self.display_order().into_iter().enumerate() {
            let mono = monomial_text(i, j);
            match c.as_constant() {
                Some(value) => {
                    let mag = if value.is_negative() {
                        write!(f, "{}", if idx == 0 { "-" } else { " - " })?;
                        -value
                    } else {
                        if idx > 0 {
                            write!(f, " + ")?;
                        }
                        value
                    };
                    if mono.is_empty() {
                        write!(f, "{mag}")?;
                    } else if mag.is_one() {
                        write!(f, "{mono}")?;
                    } else {
                        write!(f, "{mag}*{mono}")?;
                    }
                }
                None => {
                    if idx > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "({c})")?;
                    if !mono.is_empty() {
                        write!(f, "*{mono}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ABElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add<&ABElement> for &ABElement {
    type Output = ABElement;
    fn add(self, rhs: &ABElement) -> ABElement {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c);
        }
        out
    }
}

impl Sub<&ABElement> for &ABElement {
    type Output = ABElement;
    fn sub(self, rhs: &ABElement) -> ABElement {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, &-c);
        }
        out
    }
}

impl Neg for &ABElement {
    type Output = ABElement;
    fn neg(self) -> ABElement {
        ABElement {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

impl Mul<&ABElement> for &ABElement {
    type Output = ABElement;
    fn mul(self, rhs: &ABElement) -> ABElement {
        self.ab_mul(rhs)
    }
}

/// An element all of whose terms have total degree `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousPart {
    degree: u32,
    element: ABElement,
}

impl HomogeneousPart {
    /// Fails with a contract error when the terms have mixed degrees. The
    /// zero element is taken to have degree 0.
    pub fn new(element: ABElement) -> Result<Self> {
        if element.is_zero() {
            return Ok(HomogeneousPart { degree: 0, element });
        }
        match element.homogeneous_degree() {
            Some(degree) => Ok(HomogeneousPart { degree, element }),
            None => Err(Error::Contract(format!("{element} is not homogeneous"))),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn element(&self) -> &ABElement {
        &self.element
    }

    pub fn into_element(self) -> ABElement {
        self.element
    }
}

/// Ordered product `(a − r₁·b)(a − r₂·b)…`, leftmost factor first.
pub fn linear_factor_product(roots: &[Rat]) -> ABElement {
    roots
        .iter()
        .fold(ABElement::one(), |acc, r| acc.ab_mul(&ABElement::linear(r)))
}

/// Both sides of `b·Q·b⁻¹·(a − μ·b) = (a − (μ+k)·b)·Q` for `Q` of degree `k`.
pub fn shift_identity_check(q: &HomogeneousPart, mu: &Rat) -> (ABElement, ABElement) {
    let lhs = q.element.conj_b().ab_mul(&ABElement::linear(mu));
    let shifted = mu + Rat::int(q.degree);
    let rhs = ABElement::linear(&shifted).ab_mul(&q.element);
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a() -> ABElement {
        ABElement::a()
    }

    fn b() -> ABElement {
        ABElement::b()
    }

    fn q(p: i64, d: i64) -> Rat {
        Rat::frac(p, d)
    }

    fn mono(c: Rat, i: u32, j: u32) -> ABElement {
        ABElement::monomial(LaurentPoly::constant(c), i, j)
    }

    #[test]
    fn commutation_relation() {
        assert_eq!(&b() * &a(), &mono(Rat::one(), 1, 1) - &mono(Rat::one(), 0, 2));
        assert_eq!(&(&a() * &b()) - &(&b() * &a()), b().pow(2));
        let b2a = &b().pow(2) * &a();
        assert_eq!(b2a, &mono(Rat::one(), 1, 2) - &mono(Rat::int(2), 0, 3));
    }

    #[test]
    fn b_power_past_a() {
        // bʲ·a = (a − j·b)·bʲ, checked against the repeated product.
        for j in 0..=6u32 {
            let lhs = &b().pow(j) * &a();
            let rhs = &ABElement::linear(&Rat::int(j)) * &b().pow(j);
            assert_eq!(lhs, rhs, "j = {j}");
        }
    }

    #[test]
    fn unit_is_neutral() {
        let x = &(&a().pow(2) * &b()) + &mono(q(3, 4), 0, 1);
        assert_eq!(&ABElement::one() * &x, x);
        assert_eq!(&x * &ABElement::one(), x);
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(b().conj_b(), b());
        assert_eq!(a().conj_b(), &a() - &b());
        let expected = &(&a().pow(2) - &mono(Rat::int(2), 1, 1)) + &mono(Rat::int(2), 0, 2);
        assert_eq!(a().pow(2).conj_b(), expected);
    }

    #[test]
    fn linear_products() {
        assert_eq!(linear_factor_product(&[]), ABElement::one());
        assert_eq!(linear_factor_product(&[q(5, 2)]), &a() - &mono(q(5, 2), 0, 1));
        let expected = &(&a().pow(2) - &mono(q(7, 2), 1, 1)) + &mono(Rat::int(5), 0, 2);
        let got = linear_factor_product(&[q(5, 2), Rat::one()]);
        assert_eq!(got, expected);
        assert!(got.is_monic_in_a());
        assert_eq!(got.homogeneous_degree(), Some(2));
    }

    #[test]
    fn shift_identity_examples() {
        let one = HomogeneousPart::new(ABElement::one()).unwrap();
        let (l, r) = shift_identity_check(&one, &Rat::int(3));
        assert_eq!(l, ABElement::linear(&Rat::int(3)));
        assert_eq!(l, r);

        let hb = HomogeneousPart::new(b()).unwrap();
        let (l, r) = shift_identity_check(&hb, &Rat::zero());
        assert_eq!(l, &mono(Rat::one(), 1, 1) - &mono(Rat::one(), 0, 2));
        assert_eq!(l, r);

        let ha = HomogeneousPart::new(a()).unwrap();
        let mu = q(-2, 7);
        let m1 = &mu + &Rat::one();
        let expected = &(&a().pow(2) - &mono(m1.clone(), 1, 1)) + &mono(m1, 0, 2);
        let (l, r) = shift_identity_check(&ha, &mu);
        assert_eq!(l, expected);
        assert_eq!(r, expected);
    }

    #[test]
    fn non_homogeneous_is_rejected() {
        let x = &a().pow(2) + &b();
        assert!(matches!(HomogeneousPart::new(x), Err(Error::Contract(_))));
    }

    #[test]
    fn components() {
        let x = &a().pow(2) + &b();
        let parts = x.homogeneous_components();
        assert_eq!(parts.iter().map(HomogeneousPart::degree).collect::<Vec<_>>(), vec![2, 1]);
        let sum = parts.iter().fold(ABElement::zero(), |acc, p| &acc + p.element());
        assert_eq!(sum, x);
        assert!(ABElement::zero().homogeneous_components().is_empty());
    }

    #[test]
    fn display_canonical() {
        let x = &(&(&a().pow(3) - &mono(Rat::int(5), 2, 1))
            + &ABElement::monomial(LaurentPoly::monomial(Rat::int(-4), -2), 1, 1))
            + &mono(q(7, 2), 0, 2);
        assert_eq!(x.to_string(), "a^3 - 5*a^2*b + (-4*lam^-2)*a*b + 7/2*b^2");
        assert_eq!((-&ABElement::linear(&q(-3, 4))).scale(&Rat::int(2)).to_string(), "-2*a - 3/2*b");
        assert_eq!(ABElement::scalar(Rat::int(-3)).to_string(), "-3");
        assert_eq!(ABElement::zero().to_string(), "0");
    }

    fn rat() -> impl Strategy<Value = Rat> {
        (-6i64..=6, 1i64..=4).prop_map(|(p, d)| Rat::frac(p, d))
    }

    fn coeff() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-2i64..=2, rat()), 0..3).prop_map(LaurentPoly::from_terms)
    }

    fn element(max_deg: u32) -> impl Strategy<Value = ABElement> {
        proptest::collection::vec(((0..=max_deg), (0..=max_deg), coeff()), 0..5).prop_map(
            move |ts| {
                ts.into_iter()
                    .filter(|(i, j, _)| i + j <= max_deg)
                    .fold(ABElement::zero(), |acc, (i, j, c)| &acc + &ABElement::monomial(c, i, j))
            },
        )
    }

    pub(crate) fn homogeneous(max_deg: u32) -> impl Strategy<Value = HomogeneousPart> {
        (0..=max_deg).prop_flat_map(|k| {
            proptest::collection::vec(rat(), (k + 1) as usize).prop_map(move |cs| {
                let x = cs.into_iter().enumerate().fold(ABElement::zero(), |acc, (j, c)| {
                    &acc + &mono(c, k - j as u32, j as u32)
                });
                HomogeneousPart::new(x).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn associative(x in element(3), y in element(3), z in element(3)) {
            prop_assert_eq!((&x * &y).ab_mul(&z), x.ab_mul(&(&y * &z)));
        }

        #[test]
        fn distributive(x in element(3), y in element(3), z in element(3)) {
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        }

        #[test]
        fn conj_is_multiplicative(x in element(3), y in element(3)) {
            prop_assert_eq!((&x * &y).conj_b(), &x.conj_b() * &y.conj_b());
        }

        #[test]
        fn conj_preserves_degree(h in homogeneous(4)) {
            let c = h.element().conj_b();
            if !c.is_zero() {
                prop_assert_eq!(c.homogeneous_degree(), Some(h.degree()));
            }
        }

        #[test]
        fn degree_is_additive(x in homogeneous(3), y in homogeneous(3)) {
            let p = x.element() * y.element();
            if !p.is_zero() {
                prop_assert_eq!(p.homogeneous_degree(), Some(x.degree() + y.degree()));
            }
        }

        #[test]
        fn shift_identity_holds(h in homogeneous(4), mu in rat()) {
            let (l, r) = shift_identity_check(&h, &mu);
            prop_assert_eq!(l, r);
        }

        #[test]
        fn conj_matches_b_sandwich(x in element(3)) {
            // b·x = conj_b(x)·b, the defining property of b·x·b⁻¹.
            prop_assert_eq!(&ABElement::b() * &x, &x.conj_b() * &ABElement::b());
        }
    }
}
