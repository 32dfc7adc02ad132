//! Hilbert series and the degreewise regular-sequence test.

use serde::Serialize;

use super::element::Element;
use super::presentation::{GradedPresentation, Parity};
use crate::error::{Error, Result};

/// Number of monomials of degree `d` in the free graded-commutative algebra on
/// the generators of `pres`, by dynamic programming over generators.
pub fn free_dimension(pres: &GradedPresentation, d: u32) -> usize {
    free_series(pres, d)[d as usize] as usize
}

/// Dimensions of the free algebra on the generators of `pres` in degrees
/// `0..=cap`.
pub fn free_series(pres: &GradedPresentation, cap: u32) -> Vec<i64> {
    let len = cap as usize + 1;
    let mut series = vec![0i64; len];
    series[0] = 1;
    for g in pres.generators() {
        let k = g.degree as usize;
        match g.parity {
            // Multiply by 1 + t^k.
            Parity::Odd => {
                for d in (k..len).rev() {
                    series[d] += series[d - k];
                }
            }
            // Multiply by 1 / (1 - t^k).
            Parity::Even => {
                for d in k..len {
                    series[d] += series[d - k];
                }
            }
        }
    }
    series
}

/// Dimensions of the graded pieces of `pres` in degrees `0..=cap`.
pub fn hilbert_series(pres: &GradedPresentation, cap: u32) -> Result<Vec<usize>> {
    pres.check_cap(cap)?;
    (0..=cap).map(|d| pres.dimension(d)).collect()
}

/// Coefficientwise product of two truncated power series.
pub fn convolution(a: &[usize], b: &[usize]) -> Vec<usize> {
    let len = a.len().min(b.len());
    (0..len)
        .map(|d| (0..=d).map(|i| a[i] * b[d - i]).sum())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityVerdict {
    pub regular: bool,
    pub cap: u32,
    pub sequence_degrees: Vec<u32>,
    /// Koszul prediction `Π(1 - t^{d_i})` times the free series.
    pub predicted: Vec<i64>,
    pub observed: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<u32>,
}

/// Tests whether `seq` is a regular sequence in the free polynomial algebra
/// `pres` through degree `cap`, by comparing the Hilbert series of the
/// quotient with the Koszul prediction degree by degree.
pub fn regular_sequence_check(
    pres: &GradedPresentation,
    seq: &[Element],
    cap: u32,
) -> Result<RegularityVerdict> {
    if !pres.is_free_polynomial() {
        return Err(Error::Unsupported(
            "regular-sequence check needs a free polynomial algebra".into(),
        ));
    }
    let mut degrees = Vec::with_capacity(seq.len());
    for e in seq {
        pres.check_same(e.presentation())?;
        match e.require_homogeneous()? {
            Some(d) => degrees.push(d),
            None => {
                return Err(Error::InvalidPresentation(
                    "zero element in a regular-sequence check".into(),
                ))
            }
        }
    }
    let mut predicted = free_series(pres, cap);
    for &k in &degrees {
        let k = k as usize;
        for d in (k..predicted.len()).rev() {
            predicted[d] -= predicted[d - k];
        }
    }
    let quotient = pres.quotient(seq, cap)?;
    let observed = hilbert_series(&quotient, cap)?;
    let first_mismatch = predicted
        .iter()
        .zip(&observed)
        .position(|(&a, &b)| a != b as i64)
        .map(|d| d as u32);
    Ok(RegularityVerdict {
        regular: first_mismatch.is_none(),
        cap,
        sequence_degrees: degrees,
        predicted,
        observed,
        first_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::super::prime::Prime;
    use super::*;

    fn exterior(n: usize) -> GradedPresentation {
        let mut b = GradedPresentation::builder(Prime::new(3).unwrap(), 8);
        for i in 1..=n {
            b = b.generator(format!("x{i}"), 1);
        }
        b.build().unwrap()
    }

    #[test]
    fn exterior_series() {
        assert_eq!(hilbert_series(&exterior(2), 4).unwrap(), vec![1, 2, 1, 0, 0]);
    }

    #[test]
    fn polynomial_count() {
        let a = GradedPresentation::builder(Prime::new(5).unwrap(), 6)
            .generator("y1", 2)
            .generator("y2", 2)
            .build()
            .unwrap();
        assert_eq!(a.dimension(6).unwrap(), 4);
        assert_eq!(hilbert_series(&a, 6).unwrap(), vec![1, 0, 2, 0, 3, 0, 4]);
    }

    #[test]
    fn repeated_element_is_not_regular() {
        let a = GradedPresentation::builder(Prime::new(3).unwrap(), 10)
            .generator("y", 2)
            .build()
            .unwrap();
        let y = a.gen("y").unwrap();
        let v = regular_sequence_check(&a, &[y.clone(), y], 10).unwrap();
        assert!(!v.regular);
        assert_eq!(v.first_mismatch, Some(2));
    }

    #[test]
    fn variables_are_regular() {
        let a = GradedPresentation::builder(Prime::new(3).unwrap(), 10)
            .generator("y1", 2)
            .generator("y2", 2)
            .build()
            .unwrap();
        let seq = [a.gen("y1").unwrap(), a.gen("y2").unwrap()];
        let v = regular_sequence_check(&a, &seq, 10).unwrap();
        assert!(v.regular);
        assert_eq!(v.observed, vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn convolution_small() {
        assert_eq!(convolution(&[1, 2, 1], &[1, 1, 0]), vec![1, 3, 3]);
    }
}
