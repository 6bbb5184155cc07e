use std::fmt;

use serde::Serialize;

use super::{ALine3, Meet, Plane3};
use crate::error::{Error, Result};
use crate::field::{Elem, PrimeField};
use crate::linalg::{kernel, rref, Vec3};

/// `Σ c_i m_i` over the monomials `1, x, y, z, x², y², z², xy, xz, yz`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Quadric {
    #[serde(skip_serializing)]
    f: PrimeField,
    pub coeffs: [Elem; 10],
}

pub const MONOMIALS: [&str; 10] = ["1", "x", "y", "z", "x^2", "y^2", "z^2", "xy", "xz", "yz"];

fn monomials(f: PrimeField, [x, y, z]: Vec3) -> [Elem; 10] {
    let m = |a, b| f.mul(a, b);
    [1, x, y, z, m(x, x), m(y, y), m(z, z), m(x, y), m(x, z), m(y, z)]
}

impl Quadric {
    pub fn new(f: PrimeField, coeffs: [i64; 10]) -> Self {
        Quadric { f, coeffs: coeffs.map(|c| f.reduce(c)) }
    }

    pub fn eval(&self, p: Vec3) -> Elem {
        let f = self.f;
        monomials(f, p).iter().zip(&self.coeffs).fold(0, |acc, (&m, &c)| f.add(acc, f.mul(m, c)))
    }

    pub fn contains_line(&self, l: &ALine3) -> bool {
        l.points().into_iter().all(|p| self.eval(p) == 0)
    }
}

impl fmt::Display for Quadric {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .zip(MONOMIALS)
            .filter(|(&c, _)| c != 0)
            .map(|(&c, m)| match (c, m) {
                (_, "1") => c.to_string(),
                (1, _) => m.to_string(),
                _ => format!("{c}{m}"),
            })
            .collect();
        if terms.is_empty() {
            fm.write_str("0")
        } else {
            fm.write_str(&terms.join(" + "))
        }
    }
}

/// Zero set fitted through three disjoint lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Surface {
    Quadric(Quadric),
    Plane(Plane3),
}

impl Surface {
    pub fn contains_line(&self, l: &ALine3) -> bool {
        match self {
            Surface::Quadric(q) => q.contains_line(l),
            Surface::Plane(p) => p.contains_line(l),
        }
    }
}

fn check_same_field(ls: &[&ALine3]) -> Result<PrimeField> {
    let f = ls[0].field();
    for l in &ls[1..] {
        if l.field() != f {
            return Err(Error::FieldMismatch { left: f.order(), right: l.field().order() });
        }
    }
    Ok(f)
}

/// All lines meeting each of three pairwise disjoint lines, sorted.
pub fn lines_meeting_three(l1: &ALine3, l2: &ALine3, l3: &ALine3) -> Result<Vec<ALine3>> {
    let f = check_same_field(&[l1, l2, l3])?;
    if l1.intersects(l2) || l1.intersects(l3) || l2.intersects(l3) {
        return Err(Error::NotDisjoint);
    }
    let mut out = Vec::new();
    for p in l1.points() {
        for r in l2.points() {
            let l = ALine3::through(f, p, r)?;
            if l.intersects(l3) {
                out.push(l);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Least-degree surface through three pairwise disjoint lines.
///
/// Skew triples give the lexicographically least nonzero coefficient vector
/// of a quadric vanishing on all three lines. When two of the lines are
/// parallel every transversal lies in their common plane, which is returned
/// instead.
pub fn regulus_fit(l1: &ALine3, l2: &ALine3, l3: &ALine3) -> Result<Surface> {
    let f = check_same_field(&[l1, l2, l3])?;
    let ls = [l1, l2, l3];
    for i in 0..3 {
        for j in i + 1..3 {
            if ls[i].meet(ls[j]) != Meet::Disjoint {
                return Err(Error::NotSkew);
            }
        }
    }
    for i in 0..3 {
        for j in i + 1..3 {
            if ls[i].is_parallel(ls[j]) {
                return Ok(Surface::Plane(Plane3::spanned(ls[i], ls[j])?));
            }
        }
    }
    let rows: Vec<Vec<Elem>> = ls.iter().flat_map(|l| l.points()).map(|p| monomials(f, p).to_vec()).collect();
    let mut basis = kernel(f, &rows, 10);
    if basis.is_empty() {
        return Err(Error::NoNonzeroSolution);
    }
    // In reduced echelon form the last row is the unique kernel vector with
    // the rightmost leading entry equal to 1, i.e. the lex-least one.
    rref(f, &mut basis);
    let last = basis.iter().rev().find(|r| r.iter().any(|&x| x != 0)).expect("kernel basis is nonzero");
    let mut coeffs = [0; 10];
    coeffs.copy_from_slice(last);
    Ok(Surface::Quadric(Quadric { f, coeffs }))
}

/// Lines of `lines` other than `stem` that meet `stem` in a point different
/// from where `excluded[0]` and `excluded[1]` meet it.
pub fn hairbrush(stem: &ALine3, lines: &[ALine3], excluded: [&ALine3; 2]) -> Result<Vec<ALine3>> {
    let mut banned = Vec::with_capacity(2);
    for e in excluded {
        match stem.meet(e) {
            Meet::Point(p) => banned.push(p),
            _ => return Err(Error::ExcludedNotMeetingStem),
        }
    }
    Ok(lines
        .iter()
        .filter(|l| matches!(stem.meet(l), Meet::Point(p) if !banned.contains(&p)))
        .copied()
        .collect())
}
