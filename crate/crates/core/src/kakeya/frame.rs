//! The normalized frame `l0 = {(x,0,0)}`, `l* = {(0,0,z)}`, `l1 = {(0,y,1)}`
//! and the maps `Π` (lines meeting `l0` and `l1`) and `Λ` (lines meeting `l*`).

use super::{ALine3, Meet};
use crate::error::{Error, Result};
use crate::field::{Elem, PrimeField};
use crate::incidence::{PLine, PPoint};
use crate::linalg::{add3, scale3, sub3, Mat3, Vec3};

/// The affine map `x ↦ Mx + t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameMap {
    m: Mat3,
    t: Vec3,
}

impl FrameMap {
    pub fn field(&self) -> PrimeField {
        self.m.field()
    }

    pub fn apply(&self, p: Vec3) -> Vec3 {
        add3(self.field(), self.m.apply(p), self.t)
    }

    pub fn apply_line(&self, l: &ALine3) -> ALine3 {
        let f = self.field();
        let d = super::Direction(self.m.apply(l.dir.0));
        ALine3::from_parts(f, d, self.apply(l.base)).expect("invertible map keeps lines")
    }

    pub fn inverse(&self) -> FrameMap {
        let f = self.field();
        let mi = self.m.inverse().expect("frame maps are invertible");
        FrameMap { m: mi, t: scale3(f, f.neg(1), mi.apply(self.t)) }
    }
}

fn meet_point(a: &ALine3, b: &ALine3, what: &str) -> Result<Vec3> {
    match a.meet(b) {
        Meet::Point(p) => Ok(p),
        _ => Err(Error::BadConfiguration(format!("{what} must meet in exactly one point"))),
    }
}

/// An invertible affine map sending skew `l0`, `l1` and a common transversal
/// `l*` to the normalized frame.
pub fn normalize_frame(l0: &ALine3, lstar: &ALine3, l1: &ALine3) -> Result<FrameMap> {
    let f = l0.field();
    if !l0.is_skew(l1) {
        return Err(Error::BadConfiguration("l0 and l1 must be skew".into()));
    }
    let p0 = meet_point(l0, lstar, "l0 and l*")?;
    let p1 = meet_point(l1, lstar, "l1 and l*")?;
    let g = Mat3::from_cols(f, [l0.dir.0, l1.dir.0, sub3(f, p1, p0)])?;
    let m = g.inverse().map_err(|_| Error::BadConfiguration("frame vectors are dependent".into()))?;
    Ok(FrameMap { m, t: scale3(f, f.neg(1), m.apply(p0)) })
}

fn frame_lines(f: PrimeField) -> (ALine3, ALine3) {
    let l0 = ALine3::new(f, [1, 0, 0], [0, 0, 0]).expect("valid");
    let l1 = ALine3::new(f, [0, 1, 0], [0, 0, 1]).expect("valid");
    (l0, l1)
}

/// For a line through `(x, 0, 0)` and `(0, y, 1)` with `x, y ≠ 0`, the
/// point `(1/x, 1/y)`.
pub fn pi_map(l: &ALine3) -> Result<PPoint> {
    let f = l.field();
    let (l0, l1) = frame_lines(f);
    let (Meet::Point(a), Meet::Point(b)) = (l.meet(&l0), l.meet(&l1)) else {
        return Err(Error::DegenerateIntersection);
    };
    let (x, y) = (a[0], b[1]);
    if x == 0 || y == 0 {
        return Err(Error::DegenerateIntersection);
    }
    Ok(PPoint::affine(f, f.inv(x)?, f.inv(y)?))
}

/// Writes `l` as `{(a(t - z), b(t - z), t)}` and returns
/// `(α, β) = (az, bz - b)`.
pub fn lambda_coeffs(l: &ALine3) -> Result<(Elem, Elem)> {
    let f = l.field();
    let d = l.dir.0;
    if d[2] == 0 {
        return Err(Error::DegenerateLine("direction has zero z-component".into()));
    }
    let d = scale3(f, f.inv(d[2])?, d);
    let (a, b) = (d[0], d[1]);
    if a == 0 || b == 0 {
        return Err(Error::DegenerateLine("a and b must be nonzero".into()));
    }
    // Point of l in the plane z = 0 is (-az, -bz, 0).
    let q0 = sub3(f, l.base, scale3(f, l.base[2], d));
    let z = f.div(f.neg(q0[0]), a)?;
    if f.add(q0[1], f.mul(b, z)) != 0 {
        return Err(Error::DegenerateLine("line does not meet l*".into()));
    }
    if z == 0 || z == 1 {
        return Err(Error::DegenerateLine(format!("meets l* at z = {z}")));
    }
    Ok((f.mul(a, z), f.sub(f.mul(b, z), b)))
}

/// The line `1 + βY + αX = 0`.
pub fn lambda_map(l: &ALine3) -> Result<PLine> {
    let (alpha, beta) = lambda_coeffs(l)?;
    PLine::from_elems(l.field(), [alpha, beta, 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::incidence::incident;
    use crate::kakeya::all_lines;
    use std::collections::{BTreeMap, BTreeSet};

    #[test]
    fn pi_example() {
        let f = make_field(7).unwrap();
        let l = ALine3::through(f, [2, 0, 0], [0, 3, 1]).unwrap();
        assert_eq!(pi_map(&l).unwrap(), PPoint::affine(f, 4, 5));
        let bad = ALine3::through(f, [0, 0, 0], [0, 3, 1]).unwrap();
        assert_eq!(pi_map(&bad), Err(Error::DegenerateIntersection));
    }

    #[test]
    fn lambda_example() {
        let f = make_field(7).unwrap();
        // a = b = 1, z = 2: {(t - 2, t - 2, t)}.
        let l = ALine3::new(f, [1, 1, 1], [-2, -2, 0]).unwrap();
        assert_eq!(lambda_coeffs(&l).unwrap(), (2, 1));
        assert_eq!(lambda_map(&l).unwrap(), PLine::new(f, [2, 1, 1]).unwrap());
        let at_one = ALine3::new(f, [1, 1, 1], [-1, -1, 0]).unwrap();
        assert!(matches!(lambda_map(&at_one), Err(Error::DegenerateLine(_))));
        let flat = ALine3::new(f, [1, 1, 0], [0, 0, 2]).unwrap();
        assert!(matches!(lambda_map(&flat), Err(Error::DegenerateLine(_))));
    }

    #[test]
    fn pi_and_lambda_preserve_incidence() {
        for q in [5u64, 7] {
            let f = make_field(q).unwrap();
            let lines = all_lines(f);
            let pis: Vec<(ALine3, PPoint)> = lines.iter().filter_map(|l| pi_map(l).ok().map(|p| (*l, p))).collect();
            let lams: Vec<(ALine3, PLine)> = lines.iter().filter_map(|l| lambda_map(l).ok().map(|m| (*l, m))).collect();
            assert_eq!(pis.len() as u64, (q - 1) * (q - 1));
            assert_eq!(lams.len() as u64, (q - 1) * (q - 1) * (q - 2));
            let distinct: BTreeSet<PPoint> = pis.iter().map(|x| x.1).collect();
            assert_eq!(distinct.len(), pis.len());
            for (ls, p) in &pis {
                for (l, m) in &lams {
                    if ls.intersects(l) {
                        assert!(incident(p, m).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn lambda_fibers_meet_three_lines() {
        let f = make_field(7).unwrap();
        let lstar = ALine3::new(f, [0, 0, 1], [0, 0, 0]).unwrap();
        let mut fibers: BTreeMap<(Elem, Elem), Vec<ALine3>> = BTreeMap::new();
        for l in all_lines(f) {
            if let Ok(k) = lambda_coeffs(&l) {
                fibers.entry(k).or_default().push(l);
            }
        }
        for ((alpha, beta), ls) in fibers {
            let u = ALine3::new(f, [0, 1, 0], [-(alpha as i64), 0, 0]).unwrap();
            let v = ALine3::new(f, [1, 0, 0], [0, -(beta as i64), 1]).unwrap();
            for l in ls {
                assert!(l.intersects(&lstar) && l.intersects(&u) && l.intersects(&v));
            }
        }
    }

    #[test]
    fn frame_sends_configuration_to_axes() {
        let f = make_field(11).unwrap();
        let l0 = ALine3::new(f, [1, 2, 3], [1, 0, 5]).unwrap();
        let l1 = ALine3::new(f, [4, 0, 1], [2, 7, 3]).unwrap();
        let p0 = l0.point_at(3);
        let p1 = l1.point_at(8);
        let lstar = ALine3::through(f, p0, p1).unwrap();
        let g = normalize_frame(&l0, &lstar, &l1).unwrap();
        let (x0, y1) = frame_lines(f);
        assert_eq!(g.apply_line(&l0), x0);
        assert_eq!(g.apply_line(&l1), y1);
        assert_eq!(g.apply_line(&lstar), ALine3::new(f, [0, 0, 1], [0, 0, 0]).unwrap());
        let back = g.inverse();
        for p in [[1, 2, 3], [0, 0, 0], [10, 4, 9]] {
            assert_eq!(back.apply(g.apply(p)), p);
        }
        assert!(matches!(normalize_frame(&l0, &l0, &l1), Err(Error::BadConfiguration(_))));
        assert!(matches!(normalize_frame(&l0, &lstar, &lstar), Err(Error::BadConfiguration(_))));
    }
}
