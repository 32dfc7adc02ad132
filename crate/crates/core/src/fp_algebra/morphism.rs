use super::element::Element;
use super::presentation::GradedPresentation;
use crate::error::{Error, Result};

/// A degree-preserving algebra map given by generator images. Construction
/// checks that every source relation maps to zero.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    source: GradedPresentation,
    target: GradedPresentation,
    images: Vec<Element>,
}

impl AlgebraMorphism {
    pub fn new(
        source: GradedPresentation,
        target: GradedPresentation,
        images: Vec<Element>,
    ) -> Result<Self> {
        if source.prime() != target.prime() {
            return Err(Error::InvalidMorphism("primes differ".into()));
        }
        if images.len() != source.ngens() {
            return Err(Error::InvalidMorphism(format!(
                "expected {} generator images, got {}",
                source.ngens(),
                images.len()
            )));
        }
        let mut normalized = Vec::with_capacity(images.len());
        for (g, img) in source.generators().iter().zip(images) {
            target
                .check_same(img.presentation())
                .map_err(|_| Error::InvalidMorphism(format!("image of {} is not in the target", g.name)))?;
            let img = img.normal_form()?;
            if let Some(d) = img.degree() {
                if d != g.degree {
                    return Err(Error::InvalidMorphism(format!(
                        "image of {} has degree {d}, expected {}",
                        g.name, g.degree
                    )));
                }
            } else if !img.is_zero_raw() {
                return Err(Error::InvalidMorphism(format!(
                    "image of {} is not homogeneous",
                    g.name
                )));
            }
            normalized.push(img);
        }
        let m = AlgebraMorphism {
            source,
            target,
            images: normalized,
        };
        for r in m.source.relations() {
            let d = r.degree().unwrap_or(0);
            if d > m.target.degree_cap() {
                continue;
            }
            let image = m.apply(&r)?;
            if !image.is_zero_raw() {
                return Err(Error::InvalidMorphism(format!(
                    "relation {r} maps to {image}"
                )));
            }
        }
        Ok(m)
    }

    /// Builds a morphism from `(generator name, expression in the target)`
    /// pairs; generators not listed map to zero.
    pub fn from_assignments(
        source: GradedPresentation,
        target: GradedPresentation,
        assignments: &[(&str, &str)],
    ) -> Result<Self> {
        let mut images = vec![target.zero(); source.ngens()];
        for (name, expr) in assignments {
            let i = source
                .generator_index(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            images[i] = target.parse_element(expr)?;
        }
        Self::new(source, target, images)
    }

    pub fn identity(pres: &GradedPresentation) -> Self {
        let images = (0..pres.ngens()).map(|i| pres.generator_element(i)).collect();
        AlgebraMorphism {
            source: pres.clone(),
            target: pres.clone(),
            images,
        }
    }

    pub fn source(&self) -> &GradedPresentation {
        &self.source
    }

    pub fn target(&self) -> &GradedPresentation {
        &self.target
    }

    pub fn image_of_generator(&self, i: usize) -> &Element {
        &self.images[i]
    }

    /// Multiplicative extension of the generator assignment.
    pub fn apply(&self, e: &Element) -> Result<Element> {
        self.source.check_same(e.presentation())?;
        let mut acc = self.target.zero();
        for (m, &c) in e.terms() {
            let mut term = self.target.constant(c as i64);
            for (g, &k) in m.exponents().iter().enumerate() {
                for _ in 0..k {
                    term = term.mul(&self.images[g])?;
                    if term.is_zero_raw() {
                        break;
                    }
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

pub fn apply_morphism(m: &AlgebraMorphism, e: &Element) -> Result<Element> {
    m.apply(e)
}
