//! Points and lines of the projective plane over `F_q`, and incidence counts.
//!
//! The affine point `(x, y)` is `[x : y : 1]`; the line `[a : b : c]` is
//! `ax + by + cz = 0`. Both are stored normalized so that the first nonzero
//! coordinate is `1`, which makes equality and hashing canonical.

mod bounds;
mod experiment;

pub use bounds::{cs_count, easy_bound_check, popular_restrict, CsReport, EasyBoundReport, Popular, Relation};
pub use experiment::{elekes_construct, st_experiment, ElekesInstance, Generator, StReport};

use std::fmt;

use serde::ser::SerializeTuple;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, PrimeField};
use crate::linalg::{cross, dot, Mat3, Vec3};
use crate::par;

/// Scales a nonzero triple so its first nonzero entry is `1`.
pub fn normalize(f: PrimeField, v: Vec3) -> Result<Vec3> {
    let lead = v.iter().copied().find(|&x| x != 0).ok_or(Error::ZeroTriple)?;
    let inv = f.inv(lead)?;
    Ok(v.map(|x| f.mul(x, inv)))
}

fn reduce_triple(f: PrimeField, v: [i64; 3]) -> Vec3 {
    v.map(|x| f.reduce(x))
}

macro_rules! projective_type {
    ($name:ident) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name {
            f: PrimeField,
            c: Vec3,
        }

        impl $name {
            /// Normalizes an arbitrary integer triple.
            pub fn new(f: PrimeField, v: [i64; 3]) -> Result<Self> {
                Ok($name { f, c: normalize(f, reduce_triple(f, v))? })
            }

            pub fn from_elems(f: PrimeField, v: Vec3) -> Result<Self> {
                for &x in &v {
                    f.elem(x as u64)?;
                }
                Ok($name { f, c: normalize(f, v)? })
            }

            pub fn field(&self) -> PrimeField {
                self.f
            }

            pub fn coords(&self) -> Vec3 {
                self.c
            }

            /// Index in `0..q²+q+1` of the normalized triple.
            pub fn index(&self) -> usize {
                let q = self.f.order() as usize;
                let [a, b, c] = self.c.map(|x| x as usize);
                if a == 1 {
                    b * q + c
                } else if b == 1 {
                    q * q + c
                } else {
                    q * q + q
                }
            }

            /// Inverse of [`Self::index`].
            pub fn from_index(f: PrimeField, i: usize) -> Self {
                let q = f.order() as usize;
                let c = if i < q * q {
                    [1, (i / q) as Elem, (i % q) as Elem]
                } else if i < q * q + q {
                    [0, 1, (i - q * q) as Elem]
                } else {
                    [0, 0, 1]
                };
                $name { f, c }
            }

            /// All `q² + q + 1` elements in index order.
            pub fn all(f: PrimeField) -> Vec<Self> {
                let q = f.order() as usize;
                (0..q * q + q + 1).map(|i| Self::from_index(f, i)).collect()
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(fm, "[{}:{}:{}]", self.c[0], self.c[1], self.c[2])
            }
        }

        impl Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut t = s.serialize_tuple(3)?;
                for x in &self.c {
                    t.serialize_element(x)?;
                }
                t.end()
            }
        }
    };
}

projective_type!(PPoint);
projective_type!(PLine);

impl PPoint {
    pub fn affine(f: PrimeField, x: Elem, y: Elem) -> Self {
        let c = normalize(f, [x % f.order(), y % f.order(), 1]).expect("z = 1");
        PPoint { f, c }
    }

    /// `(x, y)` when the point is not at infinity.
    pub fn to_affine(&self) -> Option<(Elem, Elem)> {
        let [x, y, z] = self.c;
        if z == 0 {
            return None;
        }
        let inv = self.f.inv(z).ok()?;
        Some((self.f.mul(x, inv), self.f.mul(y, inv)))
    }

    pub fn is_at_infinity(&self) -> bool {
        self.c[2] == 0
    }

    /// The common point of two distinct lines.
    pub fn meet(l1: &PLine, l2: &PLine) -> Result<Self> {
        same_field(l1.f, l2.f)?;
        if l1 == l2 {
            return Err(Error::EqualPoints);
        }
        PPoint::from_elems(l1.f, cross(l1.f, l1.c, l2.c))
    }

    /// The `q + 1` lines through this point.
    pub fn pencil(&self) -> Vec<PLine> {
        let f = self.f;
        let (u, v) = perp_basis(f, self.c);
        let mut out: Vec<PLine> = f
            .elements()
            .map(|t| {
                let w = [0, 1, 2].map(|i| f.add(u[i], f.mul(t, v[i])));
                PLine { f, c: normalize(f, w).expect("basis vectors independent") }
            })
            .collect();
        out.push(PLine { f, c: normalize(f, v).expect("nonzero") });
        out
    }

    /// All `q²` affine points, ordered by `(x, y)`.
    pub fn affine_plane(f: PrimeField) -> Vec<Self> {
        f.elements()
            .flat_map(|x| f.elements().map(move |y| PPoint::affine(f, x, y)))
            .collect()
    }
}

impl PLine {
    /// `y = m x + k`.
    pub fn affine(f: PrimeField, m: Elem, k: Elem) -> Self {
        let c = normalize(f, [m % f.order(), f.order() - 1, k % f.order()]).expect("b = -1");
        PLine { f, c }
    }

    /// `x = x0`.
    pub fn vertical(f: PrimeField, x0: Elem) -> Self {
        PLine { f, c: [1, 0, f.neg(x0 % f.order())] }
    }

    pub fn at_infinity(f: PrimeField) -> Self {
        PLine { f, c: [0, 0, 1] }
    }

    /// `(m, k)` for a non-vertical affine line `y = m x + k`.
    pub fn slope_intercept(&self) -> Option<(Elem, Elem)> {
        let f = self.f;
        let [a, b, c] = self.c;
        if b == 0 {
            return None;
        }
        let nb = f.inv(f.neg(b)).ok()?;
        Some((f.mul(a, nb), f.mul(c, nb)))
    }

    /// The line through two distinct points.
    pub fn through(p1: &PPoint, p2: &PPoint) -> Result<Self> {
        same_field(p1.f, p2.f)?;
        if p1 == p2 {
            return Err(Error::EqualPoints);
        }
        PLine::from_elems(p1.f, cross(p1.f, p1.c, p2.c))
    }

    /// All `q² + q` affine lines: the `q²` non-vertical ones ordered by
    /// `(m, k)`, then the verticals.
    pub fn affine_lines(f: PrimeField) -> Vec<Self> {
        let mut out: Vec<PLine> = f
            .elements()
            .flat_map(|m| f.elements().map(move |k| PLine::affine(f, m, k)))
            .collect();
        out.extend(f.elements().map(|x| PLine::vertical(f, x)));
        out
    }
}

/// Two independent vectors spanning `{w : w·p = 0}` for normalized `p`.
fn perp_basis(f: PrimeField, p: Vec3) -> (Vec3, Vec3) {
    let i = p.iter().position(|&x| x != 0).expect("normalized triple");
    let mut basis = (0..3).filter(|&j| j != i).map(|j| {
        let mut w = [0; 3];
        w[j] = 1;
        w[i] = f.neg(p[j]);
        w
    });
    let u = basis.next().unwrap();
    let v = basis.next().unwrap();
    (u, v)
}

fn same_field(a: PrimeField, b: PrimeField) -> Result<()> {
    if a != b {
        return Err(Error::FieldMismatch { left: a.order(), right: b.order() });
    }
    Ok(())
}

pub fn incident(p: &PPoint, l: &PLine) -> Result<bool> {
    same_field(p.f, l.f)?;
    Ok(dot(p.f, p.c, l.c) == 0)
}

fn check_fields(points: &[PPoint], lines: &[PLine]) -> Result<Option<PrimeField>> {
    let f = points.first().map(|p| p.f).or_else(|| lines.first().map(|l| l.f));
    if let Some(f) = f {
        for p in points {
            same_field(f, p.f)?;
        }
        for l in lines {
            same_field(f, l.f)?;
        }
    }
    Ok(f)
}

const SHARD: usize = 4096;

/// `|{(p, l) ∈ P × L : p ∈ l}|` by testing every pair. Repeated entries
/// count with multiplicity.
pub fn count_incidences_naive(points: &[PPoint], lines: &[PLine]) -> Result<u64> {
    let Some(f) = check_fields(points, lines)? else { return Ok(0) };
    let shards: Vec<&[PPoint]> = points.chunks(SHARD).collect();
    let counts = par::map(shards, |chunk| {
        let mut n = 0u64;
        for p in chunk {
            for l in lines {
                n += (dot(f, p.c, l.c) == 0) as u64;
            }
        }
        n
    });
    Ok(counts.into_iter().sum())
}

/// Same count, walking the `q + 1` lines through each point and looking them
/// up in a dense table of `L`.
pub fn count_incidences_bucketed(points: &[PPoint], lines: &[PLine]) -> Result<u64> {
    let Some(f) = check_fields(points, lines)? else { return Ok(0) };
    let q = f.order() as usize;
    let mut mult = vec![0u32; q * q + q + 1];
    for l in lines {
        mult[l.index()] += 1;
    }
    let shards: Vec<&[PPoint]> = points.chunks(SHARD).collect();
    let counts = par::map(shards, |chunk| {
        chunk
            .iter()
            .map(|p| p.pencil().iter().map(|l| mult[l.index()] as u64).sum::<u64>())
            .sum::<u64>()
    });
    Ok(counts.into_iter().sum())
}

/// Exact incidence count; uses the pencil walk once `|L|` exceeds `q + 1`.
pub fn count_incidences(points: &[PPoint], lines: &[PLine]) -> Result<u64> {
    let Some(f) = check_fields(points, lines)? else { return Ok(0) };
    if lines.len() > f.order() as usize + 1 {
        count_incidences_bucketed(points, lines)
    } else {
        count_incidences_naive(points, lines)
    }
}

/// Maps points by `M` and lines by `(M⁻¹)ᵀ`, which preserves incidence.
pub fn apply_proj(m: &Mat3, points: &[PPoint], lines: &[PLine]) -> Result<(Vec<PPoint>, Vec<PLine>)> {
    let f = m.field();
    if let Some(g) = check_fields(points, lines)? {
        same_field(f, g)?;
    }
    let dual = m.inverse()?.transpose();
    let ps = points
        .iter()
        .map(|p| PPoint::from_elems(f, m.apply(p.c)))
        .collect::<Result<_>>()?;
    let ls = lines
        .iter()
        .map(|l| PLine::from_elems(f, dual.apply(l.c)))
        .collect::<Result<_>>()?;
    Ok((ps, ls))
}

/// An invertible `M` with `M p0 = [1:0:0]` and `M p1 = [0:1:0]`.
pub fn frame_to_infinity(p0: &PPoint, p1: &PPoint) -> Result<Mat3> {
    same_field(p0.f, p1.f)?;
    if p0 == p1 {
        return Err(Error::EqualPoints);
    }
    let f = p0.f;
    for j in 0..3 {
        let mut e = [0; 3];
        e[j] = 1;
        let b = Mat3::from_cols(f, [p0.c, p1.c, e])?;
        if b.det() != 0 {
            return b.inverse();
        }
    }
    unreachable!("two independent vectors extend to a basis")
}

/// Writes `p x y z` / `l a b c` records.
pub fn write_instance(points: &[PPoint], lines: &[PLine]) -> String {
    let mut out = String::new();
    for p in points {
        let [x, y, z] = p.c;
        out.push_str(&format!("p {x} {y} {z}\n"));
    }
    for l in lines {
        let [a, b, c] = l.c;
        out.push_str(&format!("l {a} {b} {c}\n"));
    }
    out
}

/// Parses `p x y z` / `l a b c` records; blank lines and `#` comments are
/// skipped. Triples are normalized on read.
pub fn parse_instance(f: PrimeField, text: &str) -> Result<(Vec<PPoint>, Vec<PLine>)> {
    let mut points = Vec::new();
    let mut lines = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let tag = it.next().unwrap_or("");
        let nums: Vec<i64> = it
            .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("line {}: bad number '{t}'", no + 1))))
            .collect::<Result<_>>()?;
        let [a, b, c]: [i64; 3] = nums
            .try_into()
            .map_err(|_| Error::Parse(format!("line {}: expected three coordinates", no + 1)))?;
        match tag {
            "p" => points.push(PPoint::new(f, [a, b, c])?),
            "l" => lines.push(PLine::new(f, [a, b, c])?),
            _ => return Err(Error::Parse(format!("line {}: unknown record '{tag}'", no + 1))),
        }
    }
    Ok((points, lines))
}
