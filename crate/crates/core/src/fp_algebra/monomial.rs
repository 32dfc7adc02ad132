use std::cmp::Ordering;

/// A monomial in the generators of a presentation, stored as a dense exponent
/// vector in generator order together with its total degree.
///
/// Monomials are ordered graded-lexicographically: first by total degree, then
/// lexicographically on the exponent vector, so a larger exponent on an earlier
/// generator makes the monomial larger.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    exps: Box<[u32]>,
}

impl Monomial {
    pub fn one(ngens: usize) -> Self {
        Monomial {
            degree: 0,
            exps: vec![0; ngens].into_boxed_slice(),
        }
    }

    pub fn from_exponents(exps: Vec<u32>, degrees: &[u32]) -> Self {
        debug_assert_eq!(exps.len(), degrees.len());
        let degree = exps.iter().zip(degrees).map(|(e, d)| e * d).sum();
        Monomial {
            degree,
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn generator(index: usize, ngens: usize, degree: u32) -> Self {
        let mut exps = vec![0; ngens];
        exps[index] = 1;
        Monomial {
            degree,
            exps: exps.into_boxed_slice(),
        }
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    #[inline]
    pub fn exponent(&self, gen: usize) -> u32 {
        self.exps[gen]
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0 && self.exps.iter().all(|&e| e == 0)
    }

    /// Raw exponent sum, no sign or exterior handling.
    pub(crate) fn times_unchecked(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Whether `other` divides `self` as exponent vectors.
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a >= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let degs = [2, 3];
        let w2_cubed = Monomial::from_exponents(vec![3, 0], &degs);
        let w3_squared = Monomial::from_exponents(vec![0, 2], &degs);
        let w2w3 = Monomial::from_exponents(vec![1, 1], &degs);
        assert!(w2_cubed > w3_squared);
        assert!(w3_squared > w2w3, "higher degree wins");
        assert_eq!(w2_cubed.degree(), 6);
    }

    #[test]
    fn divisibility() {
        let degs = [1, 1, 2];
        let m = Monomial::from_exponents(vec![1, 2, 3], &degs);
        let g = Monomial::generator(2, 3, 2);
        assert!(m.divisible_by(&g));
        assert!(!g.divisible_by(&m));
        assert_eq!(m.degree(), 9);
        assert!(m.divisible_by(&Monomial::one(3)));
    }
}
