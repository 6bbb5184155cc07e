//! Lines, planes and Besicovitch sets in `F_q³`.

mod frame;
mod regulus;
mod search;

pub use frame::{lambda_coeffs, lambda_map, normalize_frame, pi_map, FrameMap};
pub use regulus::{hairbrush, lines_meeting_three, regulus_fit, Quadric, Surface};
pub use search::{cs_lower_bound, kakeya_min_search, KakeyaReport, KAKEYA_MAX_Q};

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, PrimeField};
use crate::linalg::{add3, cross, dot, scale3, sub3, Vec3};

fn normalize(f: PrimeField, v: Vec3) -> Result<Vec3> {
    crate::incidence::normalize(f, v)
}

fn check3(f: PrimeField, v: Vec3) -> Result<Vec3> {
    for &x in &v {
        f.elem(x as u64)?;
    }
    Ok(v)
}

/// A direction class: nonzero triple with first nonzero coordinate `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Direction(pub Vec3);

impl Direction {
    pub fn new(f: PrimeField, v: [i64; 3]) -> Result<Self> {
        Ok(Direction(normalize(f, v.map(|x| f.reduce(x)))?))
    }

    fn lead(&self) -> usize {
        self.0.iter().position(|&x| x != 0).expect("nonzero")
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} {} {}>", self.0[0], self.0[1], self.0[2])
    }
}

/// The `q² + q + 1` directions: `(1, b, c)`, then `(0, 1, c)`, then `(0, 0, 1)`.
pub fn enumerate_directions(f: PrimeField) -> Vec<Direction> {
    let mut out: Vec<Direction> = f
        .elements()
        .flat_map(|b| f.elements().map(move |c| Direction([1, b, c])))
        .collect();
    out.extend(f.elements().map(|c| Direction([0, 1, c])));
    out.push(Direction([0, 0, 1]));
    out
}

/// How two lines meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Meet {
    Same,
    Point(Vec3),
    Disjoint,
}

/// An affine line `{base + t·dir}`, stored with its lexicographically least
/// point as base (the point whose coordinate at the direction's leading
/// index is `0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ALine3 {
    #[serde(skip_serializing)]
    f: PrimeField,
    pub dir: Direction,
    pub base: Vec3,
}

impl ALine3 {
    pub fn new(f: PrimeField, dir: [i64; 3], point: [i64; 3]) -> Result<Self> {
        let d = Direction::new(f, dir)?;
        Ok(Self::canonical(f, d, point.map(|x| f.reduce(x))))
    }

    pub fn from_parts(f: PrimeField, dir: Direction, point: Vec3) -> Result<Self> {
        check3(f, dir.0)?;
        let d = Direction(normalize(f, dir.0)?);
        Ok(Self::canonical(f, d, check3(f, point)?))
    }

    fn canonical(f: PrimeField, d: Direction, p: Vec3) -> Self {
        let t = p[d.lead()];
        ALine3 { f, dir: d, base: sub3(f, p, scale3(f, t, d.0)) }
    }

    /// The line through two distinct points.
    pub fn through(f: PrimeField, p: Vec3, r: Vec3) -> Result<Self> {
        if p == r {
            return Err(Error::EqualPoints);
        }
        let d = Direction(normalize(f, sub3(f, r, check3(f, p)?))?);
        Ok(Self::canonical(f, d, p))
    }

    pub fn field(&self) -> PrimeField {
        self.f
    }

    pub fn point_at(&self, t: Elem) -> Vec3 {
        let f = self.field();
        add3(f, self.base, scale3(f, t, self.dir.0))
    }

    /// The `q` points, ordered by parameter.
    pub fn points(&self) -> Vec<Vec3> {
        self.field().elements().map(|t| self.point_at(t)).collect()
    }

    pub fn contains(&self, p: Vec3) -> bool {
        let f = self.field();
        let v = sub3(f, p, self.base);
        let t = v[self.dir.lead()];
        v == scale3(f, t, self.dir.0)
    }

    pub fn is_parallel(&self, other: &ALine3) -> bool {
        self.dir == other.dir
    }

    pub fn meet(&self, other: &ALine3) -> Meet {
        if self == other {
            return Meet::Same;
        }
        if self.is_parallel(other) {
            return Meet::Disjoint;
        }
        let f = self.field();
        // Non-parallel lines meet iff base difference lies in span(d1, d2).
        let n = cross(f, self.dir.0, other.dir.0);
        if dot(f, n, sub3(f, other.base, self.base)) != 0 {
            return Meet::Disjoint;
        }
        for t in f.elements() {
            let p = self.point_at(t);
            if other.contains(p) {
                return Meet::Point(p);
            }
        }
        unreachable!("coplanar non-parallel lines meet")
    }

    pub fn intersects(&self, other: &ALine3) -> bool {
        self.meet(other) != Meet::Disjoint
    }

    /// Disjoint and not parallel.
    pub fn is_skew(&self, other: &ALine3) -> bool {
        !self.is_parallel(other) && self.meet(other) == Meet::Disjoint
    }
}

impl fmt::Display for ALine3 {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [b0, b1, b2] = self.base;
        write!(fm, "{} + t{}", format_args!("({b0}, {b1}, {b2})"), self.dir)
    }
}

/// All `q²(q² + q + 1)` lines of `F_q³`.
pub fn all_lines(f: PrimeField) -> Vec<ALine3> {
    let mut out = Vec::new();
    for d in enumerate_directions(f) {
        out.extend(parallel_class(f, d));
    }
    out
}

/// The `q²` lines with direction `d`, in base order.
pub fn parallel_class(f: PrimeField, d: Direction) -> Vec<ALine3> {
    let i = d.lead();
    let others: Vec<usize> = (0..3).filter(|&j| j != i).collect();
    let mut out = Vec::with_capacity((f.order() * f.order()) as usize);
    for u in f.elements() {
        for v in f.elements() {
            let mut b = [0; 3];
            b[others[0]] = u;
            b[others[1]] = v;
            out.push(ALine3 { f, dir: d, base: b });
        }
    }
    out
}

/// The plane `n·x = c` with `n` normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Plane3 {
    pub normal: Vec3,
    pub offset: Elem,
}

impl Plane3 {
    pub fn new(f: PrimeField, normal: Vec3, offset: Elem) -> Result<Self> {
        let lead = normal.iter().copied().find(|&x| x != 0).ok_or(Error::ZeroTriple)?;
        let inv = f.inv(lead)?;
        Ok(Plane3 { normal: scale3(f, inv, normal), offset: f.mul(inv, offset) })
    }

    pub fn contains(&self, f: PrimeField, p: Vec3) -> bool {
        dot(f, self.normal, p) == self.offset
    }

    pub fn contains_line(&self, l: &ALine3) -> bool {
        let f = l.field();
        dot(f, self.normal, l.dir.0) == 0 && self.contains(f, l.base)
    }

    /// The plane spanned by two distinct lines that meet or are parallel.
    pub fn spanned(a: &ALine3, b: &ALine3) -> Result<Self> {
        let f = a.field();
        let n = match a.meet(b) {
            Meet::Same => return Err(Error::EqualPoints),
            Meet::Point(_) => cross(f, a.dir.0, b.dir.0),
            Meet::Disjoint if a.is_parallel(b) => cross(f, a.dir.0, sub3(f, b.base, a.base)),
            Meet::Disjoint => return Err(Error::NotDisjoint),
        };
        Plane3::new(f, n, dot(f, n, a.base))
    }

    /// The `q + 1` planes containing `l`.
    pub fn containing(l: &ALine3) -> Vec<Plane3> {
        let f = l.field();
        let d = l.dir.0;
        let i = l.dir.lead();
        let basis: Vec<Vec3> = (0..3)
            .filter(|&j| j != i)
            .map(|j| {
                let mut w = [0; 3];
                w[j] = 1;
                w[i] = f.neg(d[j]);
                w
            })
            .collect();
        let (u, v) = (basis[0], basis[1]);
        let mut normals: Vec<Vec3> = f.elements().map(|t| add3(f, u, scale3(f, t, v))).collect();
        normals.push(v);
        normals
            .into_iter()
            .map(|n| Plane3::new(f, n, dot(f, n, l.base)).expect("nonzero normal"))
            .collect()
    }
}

/// Union of one line per direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BesicovitchSet {
    f: PrimeField,
    present: Vec<bool>,
    size: usize,
    pub lines: Vec<ALine3>,
}

impl BesicovitchSet {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, p: Vec3) -> bool {
        self.present[point_index(self.f, p)]
    }
}

pub(crate) fn point_index(f: PrimeField, p: Vec3) -> usize {
    let q = f.order() as usize;
    (p[0] as usize * q + p[1] as usize) * q + p[2] as usize
}

/// Builds the union of the lines `{base(d) + t·d}` for every direction `d`.
pub fn besicovitch_build(f: PrimeField, assignment: &BTreeMap<Direction, Vec3>) -> Result<BesicovitchSet> {
    let q = f.order() as usize;
    let mut present = vec![false; q * q * q];
    let mut lines = Vec::new();
    for d in enumerate_directions(f) {
        let base = *assignment.get(&d).ok_or(Error::MissingDirection(d.0))?;
        let l = ALine3::from_parts(f, d, base)?;
        for p in l.points() {
            present[point_index(f, p)] = true;
        }
        lines.push(l);
    }
    let size = present.iter().filter(|&&b| b).count();
    let set = BesicovitchSet { f, present, size, lines };
    debug_assert!(set.lines.iter().all(|l| l.points().into_iter().all(|p| set.contains(p))));
    Ok(set)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WolffReport {
    #[serde(rename = "maxPerPlane")]
    pub max_per_plane: usize,
    pub argmax: Option<Plane3>,
}

/// Largest number of lines of `L` contained in a single plane.
pub fn wolff_axiom_check(lines: &[ALine3]) -> WolffReport {
    let mut counts: HashMap<Plane3, usize> = HashMap::new();
    for l in lines {
        for p in Plane3::containing(l) {
            *counts.entry(p).or_default() += 1;
        }
    }
    let best = counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)));
    match best {
        Some((plane, n)) => WolffReport { max_per_plane: n, argmax: Some(plane) },
        None => WolffReport { max_per_plane: 0, argmax: None },
    }
}

/// Writes `d1 d2 d3 b1 b2 b3` records.
pub fn write_lines(lines: &[ALine3]) -> String {
    lines
        .iter()
        .map(|l| {
            let [d1, d2, d3] = l.dir.0;
            let [b1, b2, b3] = l.base;
            format!("{d1} {d2} {d3} {b1} {b2} {b3}\n")
        })
        .collect()
}

/// Parses `d1 d2 d3 b1 b2 b3` records into canonical lines; blank lines and
/// `#` comments are skipped.
pub fn parse_lines(f: PrimeField, text: &str) -> Result<Vec<ALine3>> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<i64> = line
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("line {}: bad number '{t}'", no + 1))))
            .collect::<Result<_>>()?;
        match nums[..] {
            [d1, d2, d3, b1, b2, b3] => out.push(ALine3::new(f, [d1, d2, d3], [b1, b2, b3])?),
            _ => return Err(Error::Parse(format!("line {}: expected six numbers", no + 1))),
        }
    }
    Ok(out)
}

/// Assignment `direction -> base` read from a line file; later records for
/// the same direction replace earlier ones.
pub fn assignment_from_lines(lines: &[ALine3]) -> BTreeMap<Direction, Vec3> {
    lines.iter().map(|l| (l.dir, l.base)).collect()
}
