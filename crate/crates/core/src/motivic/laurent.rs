//! The truncated Laurent ring `F_2[ρ, τ, τ^{-1}]/(ρ^{2^{n+1}-1})` and the
//! Rost-motive subalgebra inside it.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// An `F_2`-combination of monomials `ρ^a τ^b`. A term has degree `a` and
/// weight `a + b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentElement {
    n: u32,
    terms: BTreeSet<(u32, i32)>,
}

/// Exponent bound: `ρ^{2^{n+1}-1} = 0`.
pub fn rho_truncation(n: u32) -> u32 {
    (1u32 << (n + 1)) - 1
}

impl LaurentElement {
    pub fn zero(n: u32) -> Self {
        LaurentElement {
            n,
            terms: BTreeSet::new(),
        }
    }

    /// `ρ^a τ^b`, or zero past the truncation.
    pub fn monomial(n: u32, a: u32, b: i32) -> Self {
        let mut e = Self::zero(n);
        if a < rho_truncation(n) {
            e.terms.insert((a, b));
        }
        e
    }

    pub fn one(n: u32) -> Self {
        Self::monomial(n, 0, 0)
    }

    pub fn rho(n: u32) -> Self {
        Self::monomial(n, 1, 0)
    }

    pub fn tau(n: u32) -> Self {
        Self::monomial(n, 0, 1)
    }

    pub fn tau_inv(n: u32) -> Self {
        Self::monomial(n, 0, -1)
    }

    /// `a = ρ^{n+1}`.
    pub fn a(n: u32) -> Self {
        Self::monomial(n, n + 1, 0)
    }

    /// `a' = a τ^{-1}`.
    pub fn a_prime(n: u32) -> Self {
        Self::monomial(n, n + 1, -1)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, i32)> + '_ {
        self.terms.iter().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(degree, weight)` when all terms share it.
    pub fn bidegree(&self) -> Option<(i32, i32)> {
        let mut it = self.terms.iter().map(|&(a, b)| (a as i32, a as i32 + b));
        let first = it.next()?;
        it.all(|x| x == first).then_some(first)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::PresentationMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(LaurentElement {
            n: self.n,
            terms: self.terms.symmetric_difference(&other.terms).copied().collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let trunc = rho_truncation(self.n);
        let mut terms = BTreeSet::new();
        for &(a1, b1) in &self.terms {
            for &(a2, b2) in &other.terms {
                let a = a1 + a2;
                if a >= trunc {
                    continue;
                }
                let t = (a, b1 + b2);
                if !terms.remove(&t) {
                    terms.insert(t);
                }
            }
        }
        Ok(LaurentElement { n: self.n, terms })
    }

    /// `Q_0` as the derivation with `Q_0(ρ) = 0`, `Q_0(τ) = ρ`, hence
    /// `Q_0(ρ^a τ^b) = b ρ^{a+1} τ^{b-1}`.
    pub fn q0(&self) -> Self {
        let trunc = rho_truncation(self.n);
        let mut terms = BTreeSet::new();
        for &(a, b) in &self.terms {
            if b.rem_euclid(2) == 0 || a + 1 >= trunc {
                continue;
            }
            let t = (a + 1, b - 1);
            if !terms.remove(&t) {
                terms.insert(t);
            }
        }
        LaurentElement { n: self.n, terms }
    }
}

impl fmt::Display for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|&(a, b)| format_monomial(a, b)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentElement[n={}]({self})", self.n)
    }
}

pub(crate) fn format_monomial(a: u32, b: i32) -> String {
    let rho = match a {
        0 => None,
        1 => Some("rho".to_string()),
        _ => Some(format!("rho^{a}")),
    };
    let tau = match b {
        0 => None,
        1 => Some("tau".to_string()),
        _ => Some(format!("tau^{b}")),
    };
    match (rho, tau) {
        (None, None) => "1".into(),
        (Some(r), None) => r,
        (None, Some(t)) => t,
        (Some(r), Some(t)) => format!("{r}*{t}"),
    }
}

pub fn laurent_mul(a: &LaurentElement, b: &LaurentElement) -> Result<LaurentElement> {
    a.mul(b)
}

pub fn laurent_q0(e: &LaurentElement) -> LaurentElement {
    e.q0()
}

/// A named generator of the Rost subalgebra: `ρ^a τ^b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RostGenerator {
    pub label: String,
    pub rho: u32,
    pub tau: i32,
}

/// Generators `ρ, τ, a, a'` and `Q_I(a')` of the motivic cohomology of the
/// Rost motive `M_n`, with an exact per-bidegree membership test.
#[derive(Clone, Debug)]
pub struct RostBasis {
    n: u32,
    generators: Vec<RostGenerator>,
}

impl RostBasis {
    /// `Q_I(a')` for `I ⊆ {0..n-1}` is the monomial of bidegree
    /// `(n+1, n) + Σ_{i∈I} (2^{i+1}-1, 2^i-1)`, namely
    /// `ρ^{n+1+Σ(2^{i+1}-1)} τ^{-1-Σ2^i}`; those past the truncation vanish.
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > 20 {
            return Err(Error::OutOfRange(format!("Rost motive parameter n = {n}")));
        }
        let trunc = rho_truncation(n);
        let mut generators = vec![
            RostGenerator {
                label: "rho".into(),
                rho: 1,
                tau: 0,
            },
            RostGenerator {
                label: "tau".into(),
                rho: 0,
                tau: 1,
            },
            RostGenerator {
                label: "a".into(),
                rho: n + 1,
                tau: 0,
            },
            RostGenerator {
                label: "a'".into(),
                rho: n + 1,
                tau: -1,
            },
        ];
        for mask in 1u32..(1 << n) {
            let idx: Vec<u32> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let rho = n + 1 + idx.iter().map(|i| (1u32 << (i + 1)) - 1).sum::<u32>();
            let tau = -1 - idx.iter().map(|i| 1i32 << i).sum::<i32>();
            if rho >= trunc {
                continue;
            }
            let label = format!(
                "{}(a')",
                idx.iter().rev().map(|i| format!("Q{i}")).collect::<String>()
            );
            generators.push(RostGenerator { label, rho, tau });
        }
        Ok(RostBasis { n, generators })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn generators(&self) -> &[RostGenerator] {
        &self.generators
    }

    /// Whether `ρ^a τ^b` is a product of subalgebra generators. Generators
    /// with a negative `τ`-exponent must supply at least `-b` of it, using at
    /// most `a` powers of `ρ`; the rest is made up by `ρ` and `τ`.
    pub fn contains_monomial(&self, a: u32, b: i32) -> bool {
        if a >= rho_truncation(self.n) {
            return false;
        }
        if b >= 0 {
            return true;
        }
        let need = (-b) as usize;
        // min_rho[k]: least ρ-exponent of a product supplying τ^{-k'} with k' ≥ k.
        let mut min_rho = vec![u32::MAX; need + 1];
        min_rho[0] = 0;
        for k in 1..=need {
            for g in self.generators.iter().filter(|g| g.tau < 0) {
                let supply = (-g.tau) as usize;
                let prev = min_rho[k.saturating_sub(supply)];
                if prev != u32::MAX {
                    min_rho[k] = min_rho[k].min(prev + g.rho);
                }
            }
        }
        min_rho[need] <= a
    }

    /// Membership of a bihomogeneous element: every monomial must be in the
    /// span, since products of monomial generators are monomials.
    pub fn contains(&self, e: &LaurentElement) -> Result<bool> {
        if e.n() != self.n {
            return Err(Error::PresentationMismatch);
        }
        if !e.is_zero() && e.bidegree().is_none() {
            return Err(Error::NotHomogeneous);
        }
        Ok(e.terms().all(|(a, b)| self.contains_monomial(a, b)))
    }
}

pub fn rost_membership(e: &LaurentElement, basis: &RostBasis) -> Result<bool> {
    basis.contains(e)
}

/// Why `ρ^s` does or does not lift to an integral class of weight one less.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum N1Obstruction {
    /// Nothing in bidegree `(s, s-1)` maps to `ρ^s`, modulo the ideal `(h)`.
    NoPreimage { bidegree: (i32, i32), reason: String },
    /// The unique candidate preimage has nonzero `Q_0`, so it is not the
    /// reduction of an integral class.
    NonIntegral { candidate: String, q0_value: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct N1Verdict {
    pub n: u32,
    pub s: u32,
    pub in_n1: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidate: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<N1Obstruction>,
}

/// Decides whether `ρ^s` admits a `τ`-preimage `x` in the Rost subalgebra
/// with `Q_0(x) = 0`.
pub fn n1_membership(s: u32, basis: &RostBasis) -> Result<N1Verdict> {
    let n = basis.n();
    if s == 0 || s > rho_truncation(n) - 1 {
        return Err(Error::OutOfRange(format!(
            "s = {s} outside 1..={}",
            rho_truncation(n) - 1
        )));
    }
    // In bidegree (s, s-1) the only Laurent monomial is ρ^s τ^{-1}.
    let candidate = LaurentElement::monomial(n, s, -1);
    if !basis.contains(&candidate)? {
        let reason = if s <= n {
            format!("H^{{{s},{}}}(M_{n}) vanishes modulo (h) in degrees at most {n}", s as i32 - 1)
        } else {
            format!("{candidate} is not in the Rost subalgebra")
        };
        return Ok(N1Verdict {
            n,
            s,
            in_n1: false,
            candidate: None,
            obstruction: Some(N1Obstruction::NoPreimage {
                bidegree: (s as i32, s as i32 - 1),
                reason,
            }),
        });
    }
    let q0 = candidate.q0();
    if q0.is_zero() {
        return Ok(N1Verdict {
            n,
            s,
            in_n1: true,
            candidate: Some(candidate.to_string()),
            obstruction: None,
        });
    }
    Ok(N1Verdict {
        n,
        s,
        in_n1: false,
        candidate: Some(candidate.to_string()),
        obstruction: Some(N1Obstruction::NonIntegral {
            candidate: candidate.to_string(),
            q0_value: q0.to_string(),
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_examples() {
        let n = 2;
        let one = LaurentElement::one(n);
        assert_eq!(LaurentElement::tau(n).mul(&LaurentElement::tau_inv(n)).unwrap(), one);
        let top = LaurentElement::monomial(n, rho_truncation(n) - 1, 0);
        assert!(top.mul(&LaurentElement::rho(n)).unwrap().is_zero());
        assert_eq!(
            LaurentElement::a(n).mul(&LaurentElement::tau_inv(n)).unwrap(),
            LaurentElement::a_prime(n)
        );
    }

    #[test]
    fn q0_rules() {
        for n in 1..=4 {
            assert_eq!(
                LaurentElement::tau_inv(n).q0(),
                LaurentElement::monomial(n, 1, -2)
            );
            assert!(LaurentElement::a(n).q0().is_zero());
            assert_eq!(
                LaurentElement::a_prime(n).q0(),
                LaurentElement::monomial(n, n + 2, -2)
            );
        }
    }

    #[test]
    fn membership_examples() {
        let b = RostBasis::new(3).unwrap();
        assert!(b.contains(&LaurentElement::a_prime(3)).unwrap());
        assert!(b.contains(&LaurentElement::monomial(3, 0, 5)).unwrap());
        assert!(!b.contains(&LaurentElement::monomial(3, 1, -1)).unwrap());
    }

    #[test]
    fn obstruction_cases() {
        let n = 3;
        let b = RostBasis::new(n).unwrap();
        let v = n1_membership(2, &b).unwrap();
        assert!(matches!(v.obstruction, Some(N1Obstruction::NoPreimage { .. })));
        let v = n1_membership(n + 1, &b).unwrap();
        assert_eq!(
            v.obstruction,
            Some(N1Obstruction::NonIntegral {
                candidate: "rho^4*tau^-1".into(),
                q0_value: "rho^5*tau^-2".into(),
            })
        );
        let v = n1_membership(n + 2, &b).unwrap();
        assert_eq!(v.candidate.as_deref(), Some("rho^5*tau^-1"));
        assert!(!v.in_n1);
        assert!(n1_membership(0, &b).is_err());
        assert!(n1_membership(15, &b).is_err());
    }
}
