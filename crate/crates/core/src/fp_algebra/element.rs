use std::collections::BTreeMap;
use std::fmt;

use super::monomial::Monomial;
use super::presentation::{add_term, GradedPresentation};
use crate::error::{Error, Result};

/// Monomial → nonzero coefficient in `[1, p)`.
pub type Poly = BTreeMap<Monomial, u32>;

/// An `F_p`-linear combination of monomials in a presentation.
///
/// Elements produced by arithmetic are in normal form; elements built with
/// [`Element::from_terms_unreduced`] may not be until [`Element::normal_form`]
/// is applied.
#[derive(Clone)]
pub struct Element {
    pres: GradedPresentation,
    terms: Poly,
}

impl Element {
    pub fn from_terms_unreduced(pres: GradedPresentation, terms: Poly) -> Self {
        let p = pres.prime().value();
        let terms = terms
            .into_iter()
            .filter_map(|(m, c)| {
                let c = c % p;
                (c != 0).then_some((m, c))
            })
            .collect();
        Element { pres, terms }
    }

    pub fn presentation(&self) -> &GradedPresentation {
        &self.pres
    }

    pub fn terms(&self) -> &Poly {
        &self.terms
    }

    pub(crate) fn into_terms(self) -> Poly {
        self.terms
    }

    pub fn is_zero_raw(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common degree of all terms; `None` for zero or mixed degrees.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.is_empty() || self.degree().is_some()
    }

    pub fn homogeneous_parts(&self) -> BTreeMap<u32, Poly> {
        let mut parts: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, &c) in &self.terms {
            parts.entry(m.degree()).or_default().insert(m.clone(), c);
        }
        parts
    }

    /// Leading monomial in the graded-lexicographic order.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn normal_form(&self) -> Result<Element> {
        let mut out = Poly::new();
        for (d, part) in self.homogeneous_parts() {
            out.extend(self.pres.reduce_homogeneous(d, part)?);
        }
        Ok(Element {
            pres: self.pres.clone(),
            terms: out,
        })
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.normal_form()?.terms.is_empty())
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.pres.check_same(&other.pres)?;
        let p = self.pres.prime();
        let mut terms = self.terms.clone();
        for (m, &c) in &other.terms {
            add_term(p, &mut terms, m.clone(), c);
        }
        Element {
            pres: self.pres.clone(),
            terms,
        }
        .normal_form()
    }

    pub fn scale(&self, c: i64) -> Element {
        let p = self.pres.prime();
        let c = p.reduce(c);
        let terms = if c == 0 {
            Poly::new()
        } else {
            self.terms.iter().map(|(m, &v)| (m.clone(), p.mul(v, c))).collect()
        };
        Element {
            pres: self.pres.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Element {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    /// Graded-commutative product, reduced modulo the relations. Products
    /// landing above the degree cap are an error, never truncated.
    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.pres.check_same(&other.pres)?;
        if let (Some(a), Some(b)) = (self.max_degree(), other.max_degree()) {
            self.pres.check_cap(a + b)?;
        }
        let prod = self.pres.mul_free(&self.terms, &other.terms);
        Element {
            pres: self.pres.clone(),
            terms: prod,
        }
        .normal_form()
    }

    pub fn pow(&self, k: u32) -> Result<Element> {
        let mut acc = self.pres.one();
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Equality after normal form.
    pub fn equals(&self, other: &Element) -> Result<bool> {
        Ok(self.sub(other)?.terms.is_empty())
    }

    pub fn require_homogeneous(&self) -> Result<Option<u32>> {
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        Ok(self.degree())
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.pres == other.pres && self.terms == other.terms
    }
}

impl Eq for Element {}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

impl fmt::Display for Element {
    /// Terms in descending monomial order; coefficients shown with their
    /// signed representative, so `2*x` over `F_3` prints as `-x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let p = self.pres.prime();
        for (k, (m, &c)) in self.terms.iter().rev().enumerate() {
            let s = p.signed(c);
            let (neg, mag) = (s < 0, s.unsigned_abs());
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = self.pres.format_monomial(m);
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::prime::Prime;
    use super::*;

    fn lambda4(p: u32) -> GradedPresentation {
        GradedPresentation::builder(Prime::new(p).unwrap(), 8)
            .generator("x1", 1)
            .generator("x2", 1)
            .generator("x3", 1)
            .generator("x4", 1)
            .build()
            .unwrap()
    }

    #[test]
    fn add_examples() {
        let a = GradedPresentation::builder(Prime::new(2).unwrap(), 6)
            .generator("x1", 1)
            .build()
            .unwrap();
        let x = a.gen("x1").unwrap();
        assert!(x.add(&x).unwrap().is_zero().unwrap());

        let b = GradedPresentation::builder(Prime::new(3).unwrap(), 6)
            .generator("y1", 2)
            .generator("y2", 2)
            .build()
            .unwrap();
        let (y1, y2) = (b.gen("y1").unwrap(), b.gen("y2").unwrap());
        assert_eq!(y1.add(&y2).unwrap().to_string(), "y1 + y2");
        let lhs = y1.add(&y2.scale(2)).unwrap().add(&y2).unwrap();
        assert_eq!(lhs, y1);
    }

    #[test]
    fn koszul_signs() {
        let a = lambda4(3);
        let (x1, x2) = (a.gen("x1").unwrap(), a.gen("x2").unwrap());
        assert!(x1.mul(&x1).unwrap().is_zero().unwrap());
        let x2x1 = x2.mul(&x1).unwrap();
        assert_eq!(x2x1.to_string(), "-x1*x2");
        assert_eq!(x2x1, x1.mul(&x2).unwrap().neg());
    }

    #[test]
    fn frobenius_in_char_two() {
        let a = GradedPresentation::builder(Prime::new(2).unwrap(), 8)
            .generator("y1", 2)
            .generator("y2", 2)
            .build()
            .unwrap();
        let s = a.gen("y1").unwrap().add(&a.gen("y2").unwrap()).unwrap();
        assert_eq!(s.mul(&s).unwrap().to_string(), "y1^2 + y2^2");
    }

    #[test]
    fn cap_overflow_is_an_error() {
        let a = GradedPresentation::builder(Prime::new(3).unwrap(), 4)
            .generator("y", 2)
            .build()
            .unwrap();
        let y = a.gen("y").unwrap();
        let y2 = y.mul(&y).unwrap();
        assert_eq!(y2.mul(&y), Err(Error::DegreeCap { degree: 6, cap: 4 }));
    }

    #[test]
    fn mismatch_detected() {
        let a = lambda4(3);
        let b = lambda4(5);
        assert_eq!(
            a.gen("x1").unwrap().add(&b.gen("x1").unwrap()),
            Err(Error::PresentationMismatch)
        );
    }
}
