use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use super::element::{Element, Poly};
use super::linalg::SparseEchelon;
use super::monomial::Monomial;
use super::prime::Prime;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// Polynomial generator.
    Even,
    /// Exterior generator (`p` odd only): squares to zero and anticommutes.
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    pub parity: Parity,
    /// Motivic weight, when the presentation is bigraded.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<i32>,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32, parity: Parity) -> Self {
        Generator {
            name: name.into(),
            degree,
            parity,
            weight: None,
        }
    }

    pub fn with_weight(mut self, weight: i32) -> Self {
        self.weight = Some(weight);
        self
    }
}

/// Reduction data for a single degree: the monomial basis of the free piece
/// (descending order) and an echelon form of the relation-ideal subspace.
#[derive(Debug)]
pub(crate) struct DegreeReduction {
    pub monomials: Vec<Monomial>,
    pub index: HashMap<Monomial, usize>,
    pub echelon: SparseEchelon,
}

impl DegreeReduction {
    pub fn basis(&self) -> impl Iterator<Item = &Monomial> {
        self.monomials
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.echelon.is_pivot(*i))
            .map(|(_, m)| m)
    }
}

pub(crate) struct PresentationInner {
    pub prime: Prime,
    pub generators: Vec<Generator>,
    pub degrees: Vec<u32>,
    pub relations: Vec<Poly>,
    pub aliases: BTreeMap<String, Poly>,
    pub degree_cap: u32,
    min_relation_degree: Option<u32>,
    cache: Mutex<HashMap<u32, Arc<DegreeReduction>>>,
}

/// A finitely presented graded-commutative algebra over `F_p`, truncated at a
/// degree cap. Cheap to clone; clones share the per-degree reduction cache.
#[derive(Clone)]
pub struct GradedPresentation(pub(crate) Arc<PresentationInner>);

impl fmt::Debug for GradedPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedPresentation")
            .field("prime", &self.0.prime)
            .field("generators", &self.0.generators)
            .field("relations", &self.0.relations.len())
            .field("degree_cap", &self.0.degree_cap)
            .finish()
    }
}

impl PartialEq for GradedPresentation {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.prime == other.0.prime
                && self.0.generators == other.0.generators
                && self.0.relations == other.0.relations
                && self.0.degree_cap == other.0.degree_cap)
    }
}

impl Eq for GradedPresentation {}

/// Accumulates generators, aliases and relations before validation.
#[derive(Clone)]
pub struct PresentationBuilder {
    prime: Prime,
    generators: Vec<Generator>,
    relations: Vec<RelationSource>,
    aliases: Vec<(String, String)>,
    degree_cap: u32,
}

#[derive(Clone)]
enum RelationSource {
    Text(String),
    Poly(Poly),
}

impl PresentationBuilder {
    pub fn new(prime: Prime, degree_cap: u32) -> Self {
        PresentationBuilder {
            prime,
            generators: Vec::new(),
            relations: Vec::new(),
            aliases: Vec::new(),
            degree_cap,
        }
    }

    /// Adds a generator whose parity follows the convention for the prime:
    /// exterior for odd degree when `p` is odd, polynomial otherwise.
    pub fn generator(mut self, name: impl Into<String>, degree: u32) -> Self {
        let parity = if !self.prime.is_two() && degree % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        };
        self.generators.push(Generator::new(name, degree, parity));
        self
    }

    pub fn push_generator(mut self, gen: Generator) -> Self {
        self.generators.push(gen);
        self
    }

    pub fn alias(mut self, name: impl Into<String>, expr: impl Into<String>) -> Self {
        self.aliases.push((name.into(), expr.into()));
        self
    }

    pub fn relation(mut self, expr: impl Into<String>) -> Self {
        self.relations.push(RelationSource::Text(expr.into()));
        self
    }

    pub(crate) fn relation_poly(mut self, poly: Poly) -> Self {
        self.relations.push(RelationSource::Poly(poly));
        self
    }

    pub fn build(self) -> Result<GradedPresentation> {
        let PresentationBuilder {
            prime,
            generators,
            relations,
            aliases,
            degree_cap,
        } = self;
        let mut seen = std::collections::HashSet::new();
        for g in &generators {
            if !super::parse::is_identifier(&g.name) {
                return Err(Error::InvalidGenerator {
                    name: g.name.clone(),
                    reason: "not an identifier".into(),
                });
            }
            if !seen.insert(g.name.clone()) {
                return Err(Error::InvalidGenerator {
                    name: g.name.clone(),
                    reason: "duplicate name".into(),
                });
            }
            if g.degree == 0 {
                return Err(Error::InvalidGenerator {
                    name: g.name.clone(),
                    reason: "degree must be positive".into(),
                });
            }
            if prime.is_two() && g.parity == Parity::Odd {
                return Err(Error::InvalidGenerator {
                    name: g.name.clone(),
                    reason: "for p = 2 all generators are polynomial".into(),
                });
            }
            if !prime.is_two() && (g.degree % 2 == 1) != (g.parity == Parity::Odd) {
                return Err(Error::InvalidGenerator {
                    name: g.name.clone(),
                    reason: format!("parity must match degree {} mod 2 for p odd", g.degree),
                });
            }
        }
        let degrees: Vec<u32> = generators.iter().map(|g| g.degree).collect();
        let free = GradedPresentation(Arc::new(PresentationInner {
            prime,
            generators: generators.clone(),
            degrees: degrees.clone(),
            relations: Vec::new(),
            aliases: BTreeMap::new(),
            degree_cap,
            min_relation_degree: None,
            cache: Mutex::new(HashMap::new()),
        }));
        let mut alias_polys = BTreeMap::new();
        for (name, expr) in &aliases {
            if seen.contains(name) || alias_polys.contains_key(name) {
                return Err(Error::InvalidGenerator {
                    name: name.clone(),
                    reason: "alias clashes with an existing name".into(),
                });
            }
            let with_aliases = free.with_aliases(alias_polys.clone());
            let e = with_aliases.parse_element(expr)?;
            alias_polys.insert(name.clone(), e.into_terms());
        }
        let free = free.with_aliases(alias_polys.clone());
        let mut rels = Vec::new();
        for src in relations {
            let poly = match src {
                RelationSource::Text(t) => free.parse_element(&t)?.into_terms(),
                RelationSource::Poly(p) => p,
            };
            if poly.is_empty() {
                continue;
            }
            let d = poly.keys().next().unwrap().degree();
            if poly.keys().any(|m| m.degree() != d) {
                return Err(Error::InvalidPresentation(
                    "relations must be homogeneous".into(),
                ));
            }
            if d > degree_cap {
                return Err(Error::InvalidPresentation(format!(
                    "relation of degree {d} exceeds the degree cap {degree_cap}"
                )));
            }
            rels.push(poly);
        }
        let min_relation_degree = rels.iter().map(|r| r.keys().next().unwrap().degree()).min();
        Ok(GradedPresentation(Arc::new(PresentationInner {
            prime,
            generators,
            degrees,
            relations: rels,
            aliases: alias_polys,
            degree_cap,
            min_relation_degree,
            cache: Mutex::new(HashMap::new()),
        })))
    }
}

impl GradedPresentation {
    pub fn builder(prime: Prime, degree_cap: u32) -> PresentationBuilder {
        PresentationBuilder::new(prime, degree_cap)
    }

    fn with_aliases(&self, aliases: BTreeMap<String, Poly>) -> GradedPresentation {
        GradedPresentation(Arc::new(PresentationInner {
            prime: self.0.prime,
            generators: self.0.generators.clone(),
            degrees: self.0.degrees.clone(),
            relations: self.0.relations.clone(),
            aliases,
            degree_cap: self.0.degree_cap,
            min_relation_degree: self.0.min_relation_degree,
            cache: Mutex::new(HashMap::new()),
        }))
    }

    /// Same generators, extra relations, possibly different cap.
    pub fn quotient(&self, extra: &[Element], degree_cap: u32) -> Result<GradedPresentation> {
        let mut b = PresentationBuilder::new(self.prime(), degree_cap);
        for g in &self.0.generators {
            b = b.push_generator(g.clone());
        }
        for r in &self.0.relations {
            if r.keys().next().unwrap().degree() <= degree_cap {
                b = b.relation_poly(r.clone());
            }
        }
        for e in extra {
            self.check_same(e.presentation())?;
            for (_, part) in e.homogeneous_parts() {
                b = b.relation_poly(part);
            }
        }
        let mut out = b.build()?;
        Arc::get_mut(&mut out.0).unwrap().aliases = self.0.aliases.clone();
        Ok(out)
    }

    /// The free graded-commutative algebra on the same generators.
    pub fn free_part(&self) -> Result<GradedPresentation> {
        let mut b = PresentationBuilder::new(self.prime(), self.degree_cap());
        for g in &self.0.generators {
            b = b.push_generator(g.clone());
        }
        let mut out = b.build()?;
        Arc::get_mut(&mut out.0).unwrap().aliases = self.0.aliases.clone();
        Ok(out)
    }

    /// Tensor product; generator names of the second factor get `suffix`
    /// appended when they clash.
    pub fn tensor(&self, other: &GradedPresentation, degree_cap: u32) -> Result<GradedPresentation> {
        if self.prime() != other.prime() {
            return Err(Error::PresentationMismatch);
        }
        let n1 = self.ngens();
        let n = n1 + other.ngens();
        let mut b = PresentationBuilder::new(self.prime(), degree_cap);
        let names: std::collections::HashSet<&str> =
            self.0.generators.iter().map(|g| g.name.as_str()).collect();
        for g in &self.0.generators {
            b = b.push_generator(g.clone());
        }
        for g in &other.0.generators {
            let mut g = g.clone();
            while names.contains(g.name.as_str()) {
                g.name.push('\'');
            }
            b = b.push_generator(g);
        }
        let degrees: Vec<u32> = self
            .0
            .degrees
            .iter()
            .chain(other.0.degrees.iter())
            .copied()
            .collect();
        let embed = |m: &Monomial, offset: usize| {
            let mut exps = vec![0; n];
            exps[offset..offset + m.exponents().len()].copy_from_slice(m.exponents());
            Monomial::from_exponents(exps, &degrees)
        };
        for (rels, offset) in [(&self.0.relations, 0), (&other.0.relations, n1)] {
            for r in rels.iter() {
                if r.keys().next().unwrap().degree() > degree_cap {
                    continue;
                }
                let poly: Poly = r.iter().map(|(m, &c)| (embed(m, offset), c)).collect();
                b = b.relation_poly(poly);
            }
        }
        b.build()
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.0.prime
    }

    #[inline]
    pub fn degree_cap(&self) -> u32 {
        self.0.degree_cap
    }

    #[inline]
    pub fn ngens(&self) -> usize {
        self.0.generators.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0.generators
    }

    pub fn relations(&self) -> Vec<Element> {
        self.0
            .relations
            .iter()
            .map(|r| Element::from_terms_unreduced(self.clone(), r.clone()))
            .collect()
    }

    pub fn has_relations(&self) -> bool {
        !self.0.relations.is_empty()
    }

    /// Free polynomial algebra: no relations and no exterior generators.
    pub fn is_free_polynomial(&self) -> bool {
        !self.has_relations() && self.0.generators.iter().all(|g| g.parity == Parity::Even)
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.0.generators.iter().position(|g| g.name == name)
    }

    pub(crate) fn alias(&self, name: &str) -> Option<&Poly> {
        self.0.aliases.get(name)
    }

    pub fn gen(&self, name: &str) -> Result<Element> {
        let i = self
            .generator_index(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(self.generator_element(i))
    }

    pub fn generator_element(&self, i: usize) -> Element {
        let m = Monomial::generator(i, self.ngens(), self.0.degrees[i]);
        let mut t = Poly::new();
        t.insert(m, 1);
        Element::from_terms_unreduced(self.clone(), t)
    }

    pub fn one(&self) -> Element {
        self.constant(1)
    }

    pub fn zero(&self) -> Element {
        Element::from_terms_unreduced(self.clone(), Poly::new())
    }

    pub fn constant(&self, c: i64) -> Element {
        let c = self.prime().reduce(c);
        let mut t = Poly::new();
        if c != 0 {
            t.insert(Monomial::one(self.ngens()), c);
        }
        Element::from_terms_unreduced(self.clone(), t)
    }

    pub fn monomial_element(&self, m: Monomial) -> Result<Element> {
        let mut t = Poly::new();
        t.insert(m, 1);
        Element::from_terms_unreduced(self.clone(), t).normal_form()
    }

    pub(crate) fn check_same(&self, other: &GradedPresentation) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::PresentationMismatch)
        }
    }

    pub(crate) fn check_cap(&self, degree: u32) -> Result<()> {
        if degree > self.0.degree_cap {
            Err(Error::DegreeCap {
                degree,
                cap: self.0.degree_cap,
            })
        } else {
            Ok(())
        }
    }

    pub fn monomial_from_exponents(&self, exps: Vec<u32>) -> Monomial {
        Monomial::from_exponents(exps, &self.0.degrees)
    }

    /// Product of two monomials in the free graded-commutative algebra:
    /// `None` if an exterior generator repeats, otherwise the monomial and
    /// whether the Koszul sign is negative.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        if self.prime().is_two() {
            return Some((a.times_unchecked(b), false));
        }
        let mut swaps = 0u32;
        let mut odd_in_a_after = 0u32;
        // Walk generators from last to first, counting odd generators of `a`
        // at larger indices that each odd generator of `b` must cross.
        for g in (0..self.ngens()).rev() {
            if self.0.generators[g].parity != Parity::Odd {
                continue;
            }
            let (ea, eb) = (a.exponent(g), b.exponent(g));
            if ea > 0 && eb > 0 {
                return None;
            }
            if eb > 0 {
                swaps += odd_in_a_after;
            }
            if ea > 0 {
                odd_in_a_after += 1;
            }
        }
        Some((a.times_unchecked(b), swaps % 2 == 1))
    }

    /// Product of polynomials in the free algebra, no relation reduction.
    pub(crate) fn mul_free(&self, a: &Poly, b: &Poly) -> Poly {
        let p = self.prime();
        let mut out = Poly::new();
        for (ma, &ca) in a {
            for (mb, &cb) in b {
                let Some((m, neg)) = self.mul_monomials(ma, mb) else {
                    continue;
                };
                let mut c = p.mul(ca, cb);
                if neg {
                    c = p.neg(c);
                }
                add_term(p, &mut out, m, c);
            }
        }
        out
    }

    /// All monomials of degree `d` in the free algebra, in descending order.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Monomial> {
        let n = self.ngens();
        let mut out = Vec::new();
        let mut exps = vec![0u32; n];
        self.enumerate(0, d, &mut exps, &mut out);
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    fn enumerate(&self, g: usize, remaining: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if g == self.ngens() {
            if remaining == 0 {
                out.push(Monomial::from_exponents(exps.clone(), &self.0.degrees));
            }
            return;
        }
        let deg = self.0.degrees[g];
        let max = if self.0.generators[g].parity == Parity::Odd {
            1.min(remaining / deg)
        } else {
            remaining / deg
        };
        for e in (0..=max).rev() {
            exps[g] = e;
            self.enumerate(g + 1, remaining - e * deg, exps, out);
        }
        exps[g] = 0;
    }

    /// Whether elements of degree `d` may need reduction.
    fn needs_reduction(&self, d: u32) -> bool {
        matches!(self.0.min_relation_degree, Some(m) if m <= d)
    }

    pub(crate) fn reduction(&self, d: u32) -> Result<Arc<DegreeReduction>> {
        self.check_cap(d)?;
        if let Some(r) = self.0.cache.lock().unwrap().get(&d) {
            return Ok(r.clone());
        }
        let built = Arc::new(self.build_reduction(d));
        let mut cache = self.0.cache.lock().unwrap();
        Ok(cache.entry(d).or_insert(built).clone())
    }

    fn build_reduction(&self, d: u32) -> DegreeReduction {
        let monomials = self.monomials_of_degree(d);
        let index: HashMap<Monomial, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let p = self.prime();
        let mut echelon = SparseEchelon::new(p);
        for r in &self.0.relations {
            let rd = r.keys().next().unwrap().degree();
            if rd > d {
                continue;
            }
            for m in self.monomials_of_degree(d - rd) {
                let mut row = Vec::with_capacity(r.len());
                for (rm, &c) in r {
                    if let Some((prod, neg)) = self.mul_monomials(&m, rm) {
                        let c = if neg { p.neg(c) } else { c };
                        row.push((index[&prod], c));
                    }
                }
                echelon.insert(row);
            }
        }
        DegreeReduction {
            monomials,
            index,
            echelon,
        }
    }

    /// Canonical representative of a homogeneous polynomial of degree `d`.
    pub(crate) fn reduce_homogeneous(&self, d: u32, poly: Poly) -> Result<Poly> {
        self.check_cap(d)?;
        if !self.needs_reduction(d) {
            return Ok(poly);
        }
        let red = self.reduction(d)?;
        let v: Vec<(usize, u32)> = poly.iter().map(|(m, &c)| (red.index[m], c)).collect();
        Ok(red
            .echelon
            .reduce(v)
            .into_iter()
            .map(|(i, c)| (red.monomials[i].clone(), c))
            .collect())
    }

    /// Deterministic ordered basis of the degree-`d` piece of the quotient,
    /// as standard (non-leading) monomials in descending order.
    pub fn graded_basis_monomials(&self, d: u32) -> Result<Vec<Monomial>> {
        self.check_cap(d)?;
        if !self.needs_reduction(d) {
            return Ok(self.monomials_of_degree(d));
        }
        let red = self.reduction(d)?;
        Ok(red.basis().cloned().collect())
    }

    pub fn graded_basis(&self, d: u32) -> Result<Vec<Element>> {
        Ok(self
            .graded_basis_monomials(d)?
            .into_iter()
            .map(|m| {
                let mut t = Poly::new();
                t.insert(m, 1);
                Element::from_terms_unreduced(self.clone(), t)
            })
            .collect())
    }

    /// Dimension of the degree-`d` piece.
    pub fn dimension(&self, d: u32) -> Result<usize> {
        self.check_cap(d)?;
        if !self.needs_reduction(d) {
            return Ok(super::hilbert::free_dimension(self, d));
        }
        let red = self.reduction(d)?;
        Ok(red.monomials.len() - red.echelon.rank())
    }

    /// Coordinates of a homogeneous element on [`Self::graded_basis`].
    pub fn coordinates(&self, e: &Element) -> Result<(u32, Vec<(usize, u32)>)> {
        self.check_same(e.presentation())?;
        let nf = e.normal_form()?;
        let Some(d) = nf.degree() else {
            return Ok((0, Vec::new()));
        };
        let basis = self.graded_basis_monomials(d)?;
        let pos: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut v: Vec<(usize, u32)> = nf.terms().iter().map(|(m, &c)| (pos[m], c)).collect();
        v.sort_unstable();
        Ok((d, v))
    }

    pub fn generator_name(&self, i: usize) -> &str {
        &self.0.generators[i].name
    }

    /// Monomial as text, generators in order, e.g. `x1*y2^3`.
    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.0.generators[i].name.clone()),
                _ => parts.push(format!("{}^{}", self.0.generators[i].name, e)),
            }
        }
        parts.join("*")
    }

    /// Total weight of a monomial; `None` unless every generator carries one.
    pub fn monomial_weight(&self, m: &Monomial) -> Option<i32> {
        let mut w = 0i32;
        for (g, &e) in self.0.generators.iter().zip(m.exponents()) {
            if e > 0 {
                w += g.weight? * e as i32;
            }
        }
        Some(w)
    }

    /// Canonical text form, used for content hashing.
    pub fn canonical_text(&self) -> String {
        let mut s = format!("prime {}\ncap {}\n", self.prime(), self.degree_cap());
        for g in &self.0.generators {
            s.push_str(&format!(
                "gen {} {} {}",
                g.name,
                g.degree,
                match g.parity {
                    Parity::Even => "even",
                    Parity::Odd => "odd",
                }
            ));
            if let Some(w) = g.weight {
                s.push_str(&format!(" weight {w}"));
            }
            s.push('\n');
        }
        for r in self.relations() {
            s.push_str(&format!("rel {r}\n"));
        }
        s
    }
}

pub(crate) fn add_term(p: Prime, poly: &mut Poly, m: Monomial, c: u32) {
    if c == 0 {
        return;
    }
    match poly.entry(m) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let v = p.add(*e.get(), c);
            if v == 0 {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}
