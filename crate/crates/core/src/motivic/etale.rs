//! Integral `Z_2` étale rings `H^{2*}(X; Z_2(*))` of Rost motives and norm
//! quadrics, encoded as free `Z_2` ranks plus `F_2` torsion.

use std::collections::BTreeMap;

use serde::Serialize;

use super::laurent::{n1_membership, N1Verdict, RostBasis};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaleClass {
    pub label: String,
    pub degree: u32,
    /// `true` for an `F_2` class with `2x = 0`, `false` for a free `Z_2` class.
    pub torsion: bool,
    /// Galois twist of the coefficients: `Z_2(0)` for degrees `0 mod 4`,
    /// `Z_2(1)` for `2 mod 4`.
    pub twist: u32,
    /// In the image of the cycle map.
    pub algebraic: bool,
    /// In the ideal flagged as strong coniveau by reciprocity.
    pub strong_coniveau: bool,
    /// `(h-exponent, ρ̄_4-exponent)` for classes of the quadric ring.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponents: Option<(u32, u32)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaleKind {
    Rost,
    Quadric,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaleRing {
    pub kind: EtaleKind,
    pub n: u32,
    pub generators: Vec<String>,
    pub relations: Vec<String>,
    pub classes: Vec<EtaleClass>,
    /// Classes singled out by name, e.g. `pi` or `c_1`.
    pub named: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankRecord {
    pub degree: u32,
    pub free_rank: usize,
    pub torsion_dim: usize,
    /// `label:algebraic` and `label:strong-coniveau` tags for the classes of
    /// this degree.
    pub flags: Vec<String>,
}

impl EtaleRing {
    pub fn top_degree(&self) -> u32 {
        self.classes.iter().map(|c| c.degree).max().unwrap_or(0)
    }

    pub fn ranks(&self, d: u32) -> (usize, usize) {
        let free = self.classes.iter().filter(|c| c.degree == d && !c.torsion).count();
        let tors = self.classes.iter().filter(|c| c.degree == d && c.torsion).count();
        (free, tors)
    }

    pub fn rank_table(&self) -> Vec<RankRecord> {
        (0..=self.top_degree())
            .step_by(2)
            .map(|d| {
                let (free_rank, torsion_dim) = self.ranks(d);
                let mut flags = Vec::new();
                for c in self.classes.iter().filter(|c| c.degree == d) {
                    if c.algebraic {
                        flags.push(format!("{}:algebraic", c.label));
                    }
                    if c.strong_coniveau {
                        flags.push(format!("{}:strong-coniveau", c.label));
                    }
                }
                RankRecord {
                    degree: d,
                    free_rank,
                    torsion_dim,
                    flags,
                }
            })
            .collect()
    }

    pub fn class(&self, label: &str) -> Option<&EtaleClass> {
        self.classes.iter().find(|c| c.label == label)
    }

    /// Torsion classes outside the image of the cycle map.
    pub fn non_algebraic_torsion(&self) -> Vec<&EtaleClass> {
        self.classes
            .iter()
            .filter(|c| c.torsion && !c.algebraic)
            .collect()
    }
}

fn twist(degree: u32) -> u32 {
    (degree / 2) % 2
}

/// Degrees `2^{n+1} - 2^{i+1}`, `1 ≤ i ≤ n-1`, of the algebraic torsion
/// classes of `M_n`.
fn rost_algebraic_degrees(n: u32) -> Vec<u32> {
    (1..n).map(|i| (1 << (n + 1)) - (1 << (i + 1))).collect()
}

/// `H^{2*}(M_n; Z_2(*)) = Z_2{1, π} ⊕ Z/2{ρ̄_4, ..., ρ̄_{2^{n+1}-4}}`.
pub fn rost_etale_ring(n: u32) -> Result<EtaleRing> {
    if n == 0 || n > 16 {
        return Err(Error::OutOfRange(format!("Rost motive parameter n = {n}")));
    }
    let top = (1u32 << (n + 1)) - 2;
    let algebraic = rost_algebraic_degrees(n);
    let mut classes = vec![EtaleClass {
        label: "1".into(),
        degree: 0,
        torsion: false,
        twist: 0,
        algebraic: true,
        strong_coniveau: false,
        exponents: None,
    }];
    for m in 1.. {
        let d = 4 * m;
        if d > top - 2 {
            break;
        }
        classes.push(EtaleClass {
            label: format!("rhobar_{d}"),
            degree: d,
            torsion: true,
            twist: twist(d),
            algebraic: algebraic.contains(&d),
            strong_coniveau: false,
            exponents: None,
        });
    }
    classes.push(EtaleClass {
        label: "pi".into(),
        degree: top,
        torsion: false,
        twist: twist(top),
        algebraic: true,
        strong_coniveau: false,
        exponents: None,
    });
    classes.sort_by_key(|c| c.degree);
    let mut named = BTreeMap::new();
    named.insert("pi".into(), "pi".into());
    Ok(EtaleRing {
        kind: EtaleKind::Rost,
        n,
        generators: vec!["pi".into(), "rhobar_4".into()],
        relations: vec![
            "2*rhobar_4".into(),
            format!("rhobar_4^{}", 1u32 << (n - 1)),
            "rhobar_4^m = rhobar_{4m}".into(),
        ],
        classes,
        named,
    })
}

/// Additive ranks of `H^{2*}(Q^{2^n-1}; Z_2(*))` in degree `d` from the
/// motivic decomposition `M_n ⊕ M_{n-1} ⊗ (T ⊕ ... ⊕ T^{⊗(2^{n-1}-1)})`.
pub fn decomposition_ranks(n: u32, d: u32) -> Result<(usize, usize)> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("decomposition needs n ≥ 2, got {n}")));
    }
    let top = rost_etale_ring(n)?;
    let lower = rost_etale_ring(n - 1)?;
    let (mut free, mut tors) = top.ranks(d);
    for k in 1..(1u32 << (n - 1)) {
        if 2 * k > d {
            break;
        }
        let (f, t) = lower.ranks(d - 2 * k);
        free += f;
        tors += t;
    }
    Ok((free, tors))
}

/// `Z_2[h, ρ̄_4]/(h^{2^n}, 2ρ̄_4, hρ̄_4^{2^{n-2}}, ρ̄_4h^{2^{n-1}}, ρ̄_4^{2^{n-1}})`,
/// checked degree by degree against [`decomposition_ranks`].
pub fn quadric_etale_ring(n: u32) -> Result<EtaleRing> {
    if !(2..=12).contains(&n) {
        return Err(Error::OutOfRange(format!("quadric ring needs 2 ≤ n ≤ 12, got {n}")));
    }
    let h_top = 1u32 << n;
    let r_top = 1u32 << (n - 1);
    let h_rho_bound = 1u32 << (n - 2);
    let rho_h_bound = 1u32 << (n - 1);
    let upper = rost_algebraic_degrees(n);
    let lower = rost_algebraic_degrees(n - 1);

    let mut classes = Vec::new();
    for b in 0..r_top {
        for a in 0..h_top {
            if b >= 1 && (a >= rho_h_bound || (a >= 1 && b >= h_rho_bound)) {
                continue;
            }
            let degree = 2 * a + 4 * b;
            let torsion = b >= 1;
            let algebraic = if !torsion {
                true
            } else if a == 0 {
                upper.contains(&(4 * b))
            } else {
                lower.contains(&(4 * b))
            };
            classes.push(EtaleClass {
                label: quadric_label(a, b),
                degree,
                torsion,
                twist: twist(degree),
                algebraic,
                strong_coniveau: a >= 1,
                exponents: Some((a, b)),
            });
        }
    }
    classes.sort_by(|x, y| x.degree.cmp(&y.degree).then(x.exponents.cmp(&y.exponents)));

    let mut relations = vec![
        format!("h^{h_top}"),
        "2*rhobar_4".into(),
        format!("h*rhobar_4^{h_rho_bound}"),
        format!("rhobar_4*h^{rho_h_bound}"),
        format!("rhobar_4^{r_top}"),
    ];
    // Drop generators of the relation ideal implied by the others.
    if h_rho_bound == 1 {
        relations.retain(|r| r != &format!("rhobar_4*h^{rho_h_bound}"));
    }
    let mut named = BTreeMap::new();
    named.insert("pi".into(), quadric_label(h_top - 1, 0));
    named.insert("c_0".into(), quadric_label(h_top - 1, 0));
    for i in 1..n {
        // c_i has degree 2^{n+1} - 2^{i+1}, i.e. ρ̄_4^{2^{n-1} - 2^{i-1}}.
        named.insert(format!("c_{i}"), quadric_label(0, r_top - (1 << (i - 1))));
    }
    let ring = EtaleRing {
        kind: EtaleKind::Quadric,
        n,
        generators: vec!["h".into(), "rhobar_4".into()],
        relations,
        classes,
        named,
    };
    let mut diffs = Vec::new();
    for d in (0..=ring.top_degree()).step_by(2) {
        let got = ring.ranks(d);
        let want = decomposition_ranks(n, d)?;
        if got != want {
            diffs.push(format!("degree {d}: ring {got:?}, decomposition {want:?}"));
        }
    }
    if !diffs.is_empty() {
        return Err(Error::RankMismatch(diffs.join("; ")));
    }
    Ok(ring)
}

fn quadric_label(a: u32, b: u32) -> String {
    let h = match a {
        0 => None,
        1 => Some("h".to_string()),
        _ => Some(format!("h^{a}")),
    };
    let r = match b {
        0 => None,
        1 => Some("rhobar_4".to_string()),
        _ => Some(format!("rhobar_4^{b}")),
    };
    match (h, r) {
        (None, None) => "1".into(),
        (Some(h), None) => h,
        (None, Some(r)) => r,
        (Some(h), Some(r)) => format!("{h}*{r}"),
    }
}

/// The quotient of the quadric ring by `(h)`: `{1; ρ̄_4^i, 1 ≤ i < 2^{n-1}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnramifiedQuotient {
    pub n: u32,
    pub free: Vec<String>,
    pub torsion: Vec<String>,
}

pub fn unramified_quotient_quadric(n: u32) -> Result<UnramifiedQuotient> {
    if n == 1 {
        // X_1 is a conic without points over R, stably birational to P^1.
        return Ok(UnramifiedQuotient {
            n,
            free: vec!["1".into()],
            torsion: Vec::new(),
        });
    }
    let ring = quadric_etale_ring(n)?;
    let keep = |c: &&EtaleClass| !c.strong_coniveau;
    Ok(UnramifiedQuotient {
        n,
        free: ring
            .classes
            .iter()
            .filter(keep)
            .filter(|c| !c.torsion)
            .map(|c| c.label.clone())
            .collect(),
        torsion: ring
            .classes
            .iter()
            .filter(keep)
            .filter(|c| c.torsion)
            .map(|c| c.label.clone())
            .collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadricVerdict {
    DhZero,
    CannotConclude,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionCheck {
    pub class: String,
    pub s: u32,
    /// `true` when membership was imposed rather than computed.
    pub forced: bool,
    pub n1: N1Verdict,
    pub strong_coniveau: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadricDhCertificate {
    pub n: u32,
    pub verdict: QuadricVerdict,
    pub torsion_checks: Vec<TorsionCheck>,
    /// Classes in the ideal `(h)`, flagged strong coniveau since `h` is a
    /// first Chern class.
    pub h_ideal_flagged: Vec<String>,
    pub reciprocity_ok: bool,
    pub reasons: Vec<String>,
}

/// `DH^{2*}(X_n; Z_2(*)) = 0` from two sub-checks: no power `ρ̄_4^i` lies in
/// `N^1`, and every class of `(h)` is flagged strong coniveau. Exponents in
/// `forced_n1` are treated as lying in `N^1` regardless of the computation.
pub fn dh_quadric_check(n: u32, forced_n1: &[u32]) -> Result<QuadricDhCertificate> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("dh_quadric_check needs n ≥ 2, got {n}")));
    }
    let ring = quadric_etale_ring(n)?;
    let basis = RostBasis::new(n)?;
    let mut reasons = Vec::new();
    let mut torsion_checks = Vec::new();
    for i in 1..(1u32 << (n - 1)) {
        let s = 4 * i;
        let label = quadric_label(0, i);
        let class = ring
            .class(&label)
            .ok_or_else(|| Error::RankMismatch(format!("missing class {label}")))?;
        let mut n1 = n1_membership(s, &basis)?;
        let forced = forced_n1.contains(&i);
        if forced {
            n1.in_n1 = true;
        }
        if n1.in_n1 && !class.strong_coniveau {
            reasons.push(format!(
                "{label} lies in N^1 but is not flagged strong coniveau"
            ));
        }
        torsion_checks.push(TorsionCheck {
            class: label,
            s,
            forced,
            n1,
            strong_coniveau: class.strong_coniveau,
        });
    }
    let mut h_ideal_flagged = Vec::new();
    let mut reciprocity_ok = true;
    for c in &ring.classes {
        let (a, _) = c.exponents.unwrap_or((0, 0));
        if a >= 1 {
            if c.strong_coniveau {
                h_ideal_flagged.push(c.label.clone());
            } else {
                reciprocity_ok = false;
                reasons.push(format!("{} is in (h) but not flagged", c.label));
            }
        }
    }
    let verdict = if reasons.is_empty() && reciprocity_ok {
        QuadricVerdict::DhZero
    } else {
        QuadricVerdict::CannotConclude
    };
    Ok(QuadricDhCertificate {
        n,
        verdict,
        torsion_checks,
        h_ideal_flagged,
        reciprocity_ok,
        reasons,
    })
}
