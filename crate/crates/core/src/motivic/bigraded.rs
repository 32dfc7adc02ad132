//! Bigraded rings with a `τ` action, and the stable quotient
//! `H^{m,m}/τ H^{m,m-1}` together with `Ker(τ: H^{m+1,m-1} → H^{m+1,m})`.

use serde::Serialize;

use super::laurent::{format_monomial, rho_truncation, RostBasis};
use crate::error::{Error, Result};
use crate::fp_algebra::linalg::{kernel, SparseEchelon, SparseVec};
use crate::fp_algebra::Prime;

/// A bigraded `F_p`-algebra given by an explicit basis in each bidegree and
/// the matrix of multiplication by `τ`.
pub trait BigradedRing {
    fn name(&self) -> String;
    fn prime(&self) -> Prime;
    /// Basis labels of `H^{d,w}`.
    fn basis(&self, d: i32, w: i32) -> Vec<String>;
    /// Images of the basis of `H^{d,w}` in the basis of `H^{d,w+1}`.
    fn tau(&self, d: i32, w: i32) -> Vec<SparseVec>;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauQuotient {
    pub ring: String,
    pub m: i32,
    /// Basis of `H^{m,m}/τH^{m,m-1}`.
    pub quotient: Vec<String>,
    /// Basis of `Ker(τ)` on `H^{m+1,m-1}`.
    pub kernel: Vec<String>,
}

pub fn tau_quotient_kernel(ring: &dyn BigradedRing, m: i32) -> Result<TauQuotient> {
    let p = ring.prime();
    let target = ring.basis(m, m);
    let mut image = SparseEchelon::new(p);
    for v in ring.tau(m, m - 1) {
        image.insert(v);
    }
    let quotient = (0..target.len())
        .filter(|&i| !image.is_pivot(i))
        .map(|i| target[i].clone())
        .collect();
    let source = ring.basis(m + 1, m - 1);
    let ker = kernel(p, &ring.tau(m + 1, m - 1));
    let kernel = ker
        .iter()
        .map(|v| {
            v.iter()
                .map(|&(i, c)| if c == 1 { source[i].clone() } else { format!("{c}*{}", source[i]) })
                .collect::<Vec<_>>()
                .join(" + ")
        })
        .collect();
    Ok(TauQuotient {
        ring: ring.name(),
        m,
        quotient,
        kernel,
    })
}

/// `H^{*,*'}` of a point over an algebraically closed field: `F_p[τ]`.
pub struct MotivicPoint {
    pub p: Prime,
}

impl BigradedRing for MotivicPoint {
    fn name(&self) -> String {
        format!("point(p={})", self.p)
    }

    fn prime(&self) -> Prime {
        self.p
    }

    fn basis(&self, d: i32, w: i32) -> Vec<String> {
        if d == 0 && w >= 0 {
            vec![format_tau(w)]
        } else {
            Vec::new()
        }
    }

    fn tau(&self, d: i32, w: i32) -> Vec<SparseVec> {
        self.basis(d, w).iter().map(|_| vec![(0, 1)]).collect()
    }
}

fn format_tau(k: i32) -> String {
    match k {
        0 => "1".into(),
        1 => "tau".into(),
        _ => format!("tau^{k}"),
    }
}

/// `H^{*,*'}(B(Z/p)^n) = F_p[τ] ⊗ F_p[y_1..y_n] ⊗ Λ(x_1..x_n)` additively,
/// with `|x_i| = (1,1)`, `|y_i| = (2,1)`; for `p = 2`, `x_i^2 = τ y_i`, so the
/// same monomials form a basis.
pub struct MotivicElementaryAbelian {
    pub p: Prime,
    pub n: usize,
}

impl MotivicElementaryAbelian {
    /// `(τ-exponent, y-exponents, x-subset)` spanning `H^{d,w}`.
    fn monomials(&self, d: i32, w: i32) -> Vec<(i32, Vec<u32>, u32)> {
        let mut out = Vec::new();
        if d < 0 {
            return out;
        }
        for s in 0u32..(1 << self.n) {
            let size = s.count_ones() as i32;
            let rest = d - size;
            if rest < 0 || rest % 2 != 0 {
                continue;
            }
            let a = rest / 2;
            let k = w - a - size;
            if k < 0 {
                continue;
            }
            let mut ys = Vec::new();
            compositions(a as u32, self.n, &mut vec![0; self.n], 0, &mut ys);
            for y in ys {
                out.push((k, y, s));
            }
        }
        let n = self.n;
        out.sort_by_key(|(k, y, s)| {
            let xs: Vec<usize> = (0..n).filter(|i| s & (1 << i) != 0).collect();
            (*k, std::cmp::Reverse(y.clone()), xs)
        });
        out
    }

    fn label(&self, (k, y, s): &(i32, Vec<u32>, u32)) -> String {
        let mut parts = Vec::new();
        if *k > 0 {
            parts.push(format_tau(*k));
        }
        for (i, &e) in y.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("y{}", i + 1)),
                _ => parts.push(format!("y{}^{e}", i + 1)),
            }
        }
        for i in 0..self.n {
            if s & (1 << i) != 0 {
                parts.push(format!("x{}", i + 1));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

fn compositions(total: u32, parts: usize, cur: &mut Vec<u32>, at: usize, out: &mut Vec<Vec<u32>>) {
    if at + 1 == parts {
        cur[at] = total;
        out.push(cur.clone());
        return;
    }
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for e in 0..=total {
        cur[at] = e;
        compositions(total - e, parts, cur, at + 1, out);
    }
}

impl BigradedRing for MotivicElementaryAbelian {
    fn name(&self) -> String {
        format!("elementary_abelian(p={}, n={})", self.p, self.n)
    }

    fn prime(&self) -> Prime {
        self.p
    }

    fn basis(&self, d: i32, w: i32) -> Vec<String> {
        self.monomials(d, w).iter().map(|m| self.label(m)).collect()
    }

    fn tau(&self, d: i32, w: i32) -> Vec<SparseVec> {
        let target = self.monomials(d, w + 1);
        self.monomials(d, w)
            .into_iter()
            .map(|(k, y, s)| {
                let img = (k + 1, y, s);
                let i = target.iter().position(|t| *t == img).expect("τ maps basis to basis");
                vec![(i, 1)]
            })
            .collect()
    }
}

/// `H^{*,*'}(M_n; Z/2)` inside the truncated Laurent ring: in bidegree
/// `(d, w)` it is spanned by `ρ^d τ^{w-d}` when that monomial is in the Rost
/// subalgebra.
pub struct RostMotive {
    basis: RostBasis,
}

impl RostMotive {
    pub fn new(n: u32) -> Result<Self> {
        Ok(RostMotive {
            basis: RostBasis::new(n)?,
        })
    }
}

impl BigradedRing for RostMotive {
    fn name(&self) -> String {
        format!("rost_motive(n={})", self.basis.n())
    }

    fn prime(&self) -> Prime {
        Prime::new(2).unwrap()
    }

    fn basis(&self, d: i32, w: i32) -> Vec<String> {
        if d < 0 || d as u32 >= rho_truncation(self.basis.n()) {
            return Vec::new();
        }
        if self.basis.contains_monomial(d as u32, w - d) {
            vec![format_monomial(d as u32, w - d)]
        } else {
            Vec::new()
        }
    }

    fn tau(&self, d: i32, w: i32) -> Vec<SparseVec> {
        // τ is injective on the Laurent ring and the subalgebra is closed
        // under it.
        self.basis(d, w).iter().map(|_| vec![(0, 1)]).collect()
    }
}

/// Dispatches the bigraded scenarios by name.
pub fn bigraded_scenario(name: &str, p: u32, n: u32) -> Result<Box<dyn BigradedRing>> {
    match name {
        "point" => Ok(Box::new(MotivicPoint { p: Prime::new(p)? })),
        "elementary" | "elementary_abelian" => Ok(Box::new(MotivicElementaryAbelian {
            p: Prime::new(p)?,
            n: n as usize,
        })),
        "rost" | "rost_motive" => Ok(Box::new(RostMotive::new(n)?)),
        other => Err(Error::Unsupported(format!(
            "scenario `{other}` has no bigrading"
        ))),
    }
}
