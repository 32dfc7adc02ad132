//! Milnor operations on Stiefel–Whitney classes through the splitting
//! principle: `w_i` becomes the `i`-th elementary symmetric polynomial in
//! degree-one classes `t_1, ..., t_n`, on which `Q_j(t) = t^{2^{j+1}}`.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::fp_algebra::{AlgebraMorphism, Element, GradedPresentation, Monomial, Poly, Prime};
use crate::milnor::QAction;

/// `F_2[t_1..t_n]` with the symmetric-function dictionary to `w`-classes.
#[derive(Debug)]
pub struct SplitRing {
    n: usize,
    so_flag: bool,
    t_ring: GradedPresentation,
    /// `F_2[w_1..w_n]`, where symmetrization lands.
    bo_ring: GradedPresentation,
    /// `F_2[w_2..w_n]` when `so_flag`, otherwise the same as `bo_ring`.
    w_ring: GradedPresentation,
    expand: AlgebraMorphism,
    t_action: QAction,
    /// Expansions of `e_i^k` in the `t`-ring.
    powers: Mutex<HashMap<(usize, u32), Element>>,
}

impl SplitRing {
    pub fn new(n: usize, so_flag: bool, cap: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("rank must be positive".into()));
        }
        let p = Prime::new(2)?;
        let mut tb = GradedPresentation::builder(p, cap);
        let mut wb = GradedPresentation::builder(p, cap);
        let mut sb = GradedPresentation::builder(p, cap);
        for k in 1..=n {
            tb = tb.generator(format!("t{k}"), 1);
            wb = wb.generator(format!("w{k}"), k as u32);
            if k >= 2 {
                sb = sb.generator(format!("w{k}"), k as u32);
            }
        }
        let t_ring = tb.build()?;
        let bo_ring = wb.build()?;
        let w_ring = if so_flag { sb.build()? } else { bo_ring.clone() };

        let mut images = Vec::new();
        for g in w_ring.generators() {
            let k: usize = g.name[1..].parse().unwrap();
            images.push(elementary(&t_ring, k)?);
        }
        let expand = AlgebraMorphism::new(w_ring.clone(), t_ring.clone(), images)?;

        let mut entries = Vec::new();
        let mut max_index = 0;
        while 1 + p.q_degree(max_index + 1) <= cap {
            max_index += 1;
        }
        for j in 0..=max_index {
            for k in 0..n {
                let t = t_ring.generator_element(k);
                entries.push((j, k, t.pow(1 << (j + 1))?));
            }
        }
        let t_action = QAction::new(t_ring.clone(), max_index, entries)?;
        Ok(SplitRing {
            n,
            so_flag,
            t_ring,
            bo_ring,
            w_ring,
            expand,
            t_action,
            powers: Mutex::new(HashMap::new()),
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn so_flag(&self) -> bool {
        self.so_flag
    }

    pub fn t_ring(&self) -> &GradedPresentation {
        &self.t_ring
    }

    /// The ring of `w`-polynomials: `F_2[w_2..w_n]` for `SO`, else
    /// `F_2[w_1..w_n]`.
    pub fn w_ring(&self) -> &GradedPresentation {
        &self.w_ring
    }

    pub fn max_index(&self) -> u32 {
        self.t_action.max_index()
    }

    /// Substitutes `w_i ↦ e_i(t_1..t_n)`.
    pub fn expand_w(&self, e: &Element) -> Result<Element> {
        self.expand.apply(e)
    }

    /// Inverse of [`Self::expand_w`] on symmetric polynomials, by greedy
    /// elimination of leading terms. With `so_flag` the result is taken
    /// modulo `w_1`.
    pub fn symmetrize_to_w(&self, e: &Element) -> Result<Element> {
        self.t_ring.check_same(e.presentation())?;
        self.check_symmetric(e)?;
        let mut rest = e.terms().clone();
        let mut out = Poly::new();
        let degrees: Vec<u32> = (1..=self.n as u32).collect();
        while let Some(lead) = rest.keys().next_back().cloned() {
            let a = lead.exponents();
            let mut w_exps = vec![0u32; self.n];
            for i in 0..self.n {
                let next = if i + 1 < self.n { a[i + 1] } else { 0 };
                w_exps[i] = a[i] - next;
            }
            let product = self.e_product(&w_exps)?;
            debug_assert_eq!(product.leading_monomial(), Some(&lead));
            for (m, _) in product.terms() {
                match rest.get_mut(m) {
                    Some(_) => {
                        rest.remove(m);
                    }
                    None => {
                        rest.insert(m.clone(), 1);
                    }
                }
            }
            out.insert(Monomial::from_exponents(w_exps, &degrees), 1);
        }
        let bo = Element::from_terms_unreduced(self.bo_ring.clone(), out);
        if !self.so_flag {
            return Ok(bo);
        }
        // Drop every term divisible by w_1 and re-index onto w_2..w_n.
        let so_degrees: Vec<u32> = (2..=self.n as u32).collect();
        let terms: Poly = bo
            .terms()
            .iter()
            .filter(|(m, _)| m.exponent(0) == 0)
            .map(|(m, &c)| (Monomial::from_exponents(m.exponents()[1..].to_vec(), &so_degrees), c))
            .collect();
        Ok(Element::from_terms_unreduced(self.w_ring.clone(), terms))
    }

    /// `Q_j` on a `w`-polynomial: expand, differentiate, symmetrize.
    pub fn q_on_w(&self, j: u32, e: &Element) -> Result<Element> {
        let t = self.expand_w(e)?;
        let qt = self.t_action.apply(j, &t)?;
        self.symmetrize_to_w(&qt)
    }

    /// The table `Q_j(w_i)` for all generators of the `w`-ring and all `j`
    /// up to `max_index` whose target degree fits under the cap.
    pub fn q_action(&self, max_index: u32) -> Result<QAction> {
        let p = self.w_ring.prime();
        let mut entries = Vec::new();
        for j in 0..=max_index {
            for (g, gen) in self.w_ring.generators().iter().enumerate() {
                if gen.degree + p.q_degree(j) > self.w_ring.degree_cap() {
                    continue;
                }
                let value = self.q_on_w(j, &self.w_ring.generator_element(g))?;
                entries.push((j, g, value));
            }
        }
        QAction::new(self.w_ring.clone(), max_index, entries)
    }

    fn check_symmetric(&self, e: &Element) -> Result<()> {
        for k in 0..self.n.saturating_sub(1) {
            for (m, &c) in e.terms() {
                let mut exps = m.exponents().to_vec();
                exps.swap(k, k + 1);
                let swapped = self.t_ring.monomial_from_exponents(exps);
                if e.coefficient(&swapped) != c {
                    return Err(Error::NotSymmetric(format!(
                        "coefficient of {} differs after swapping t{} and t{}",
                        self.t_ring.format_monomial(m),
                        k + 1,
                        k + 2
                    )));
                }
            }
        }
        Ok(())
    }

    fn e_product(&self, exps: &[u32]) -> Result<Element> {
        let mut acc = self.t_ring.one();
        for (i, &k) in exps.iter().enumerate() {
            if k > 0 {
                acc = acc.mul(&self.e_power(i + 1, k)?)?;
            }
        }
        Ok(acc)
    }

    fn e_power(&self, i: usize, k: u32) -> Result<Element> {
        if let Some(e) = self.powers.lock().unwrap().get(&(i, k)) {
            return Ok(e.clone());
        }
        let value = if k == 1 {
            elementary(&self.t_ring, i)?
        } else {
            self.e_power(i, k - 1)?.mul(&elementary(&self.t_ring, i)?)?
        };
        self.powers.lock().unwrap().insert((i, k), value.clone());
        Ok(value)
    }
}

/// `e_k(t_1..t_n)` in a ring whose generators are the `t`'s.
fn elementary(t_ring: &GradedPresentation, k: usize) -> Result<Element> {
    let n = t_ring.ngens();
    let mut terms = Poly::new();
    let mut choose = vec![0u32; n];
    subsets(n, k, 0, &mut choose, &mut |exps| {
        terms.insert(t_ring.monomial_from_exponents(exps.to_vec()), 1);
    });
    Element::from_terms_unreduced(t_ring.clone(), terms).normal_form()
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if k == 0 {
        f(cur);
        return;
    }
    for i in start..n {
        if n - i < k {
            break;
        }
        cur[i] = 1;
        subsets(n, k - 1, i + 1, cur, f);
        cur[i] = 0;
    }
}

pub fn expand_w(ring: &SplitRing, e: &Element) -> Result<Element> {
    ring.expand_w(e)
}

pub fn symmetrize_to_w(ring: &SplitRing, e: &Element) -> Result<Element> {
    ring.symmetrize_to_w(e)
}

pub fn q_on_w(j: u32, e: &Element, ring: &SplitRing) -> Result<Element> {
    ring.q_on_w(j, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_examples() {
        let r = SplitRing::new(2, false, 8).unwrap();
        let w2 = r.w_ring().gen("w2").unwrap();
        assert_eq!(r.expand_w(&w2).unwrap().to_string(), "t1*t2");
        let r3 = SplitRing::new(3, false, 8).unwrap();
        let w1 = r3.w_ring().gen("w1").unwrap();
        assert_eq!(r3.expand_w(&w1).unwrap().to_string(), "t1 + t2 + t3");
    }

    #[test]
    fn symmetrize_examples() {
        let r = SplitRing::new(2, false, 8).unwrap();
        let t = r.t_ring();
        let sq = t.parse_element("t1^2 + t2^2").unwrap();
        assert_eq!(r.symmetrize_to_w(&sq).unwrap().to_string(), "w1^2");
        let t12 = t.parse_element("t1*t2").unwrap();
        assert_eq!(r.symmetrize_to_w(&t12).unwrap().to_string(), "w2");
        let bad = t.parse_element("t1^2").unwrap();
        assert!(matches!(r.symmetrize_to_w(&bad), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn power_sum_three_variables() {
        // Newton: p_3 = e_1^3 - 3 e_1 e_2 + 3 e_3, i.e. w1^3 + w1w2 + w3 mod 2.
        let r = SplitRing::new(3, false, 8).unwrap();
        let p3 = r.t_ring().parse_element("t1^3 + t2^3 + t3^3").unwrap();
        let expected = r.w_ring().parse_element("w1^3 + w1*w2 + w3").unwrap();
        assert_eq!(r.symmetrize_to_w(&p3).unwrap(), expected);
    }

    #[test]
    fn wu_formula_for_q0() {
        let r = SplitRing::new(3, true, 16).unwrap();
        let w2 = r.w_ring().gen("w2").unwrap();
        assert_eq!(r.q_on_w(0, &w2).unwrap().to_string(), "w3");
        let r = SplitRing::new(5, true, 16).unwrap();
        let w4 = r.w_ring().gen("w4").unwrap();
        assert_eq!(r.q_on_w(0, &w4).unwrap().to_string(), "w5");
    }
}
