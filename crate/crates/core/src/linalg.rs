//! Small dense linear algebra over `F_q`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, PrimeField};

pub type Vec3 = [Elem; 3];

pub fn dot(f: PrimeField, a: Vec3, b: Vec3) -> Elem {
    (0..3).fold(0, |acc, i| f.add(acc, f.mul(a[i], b[i])))
}

pub fn cross(f: PrimeField, a: Vec3, b: Vec3) -> Vec3 {
    let m = |x, y| f.mul(x, y);
    [
        f.sub(m(a[1], b[2]), m(a[2], b[1])),
        f.sub(m(a[2], b[0]), m(a[0], b[2])),
        f.sub(m(a[0], b[1]), m(a[1], b[0])),
    ]
}

pub fn scale3(f: PrimeField, s: Elem, v: Vec3) -> Vec3 {
    v.map(|x| f.mul(s, x))
}

pub fn add3(f: PrimeField, a: Vec3, b: Vec3) -> Vec3 {
    [f.add(a[0], b[0]), f.add(a[1], b[1]), f.add(a[2], b[2])]
}

pub fn sub3(f: PrimeField, a: Vec3, b: Vec3) -> Vec3 {
    [f.sub(a[0], b[0]), f.sub(a[1], b[1]), f.sub(a[2], b[2])]
}

/// A 3×3 matrix over `F_q`, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Mat3 {
    #[serde(skip)]
    f: PrimeField,
    rows: [[Elem; 3]; 3],
}

impl Mat3 {
    /// Reduces arbitrary integer entries.
    pub fn new(f: PrimeField, rows: [[i64; 3]; 3]) -> Self {
        Mat3 { f, rows: rows.map(|r| r.map(|x| f.reduce(x))) }
    }

    pub fn from_rows(f: PrimeField, rows: [Vec3; 3]) -> Result<Self> {
        for r in &rows {
            for &x in r {
                f.elem(x as u64)?;
            }
        }
        Ok(Mat3 { f, rows })
    }

    pub fn from_cols(f: PrimeField, cols: [Vec3; 3]) -> Result<Self> {
        Ok(Mat3::from_rows(f, cols)?.transpose())
    }

    pub fn identity(f: PrimeField) -> Self {
        Mat3::new(f, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn field(&self) -> PrimeField {
        self.f
    }

    pub fn rows(&self) -> [Vec3; 3] {
        self.rows
    }

    pub fn transpose(&self) -> Self {
        let r = self.rows;
        Mat3 {
            f: self.f,
            rows: [
                [r[0][0], r[1][0], r[2][0]],
                [r[0][1], r[1][1], r[2][1]],
                [r[0][2], r[1][2], r[2][2]],
            ],
        }
    }

    pub fn det(&self) -> Elem {
        let r = self.rows;
        dot(self.f, r[0], cross(self.f, r[1], r[2]))
    }

    /// Inverse via the adjugate.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        if d == 0 {
            return Err(Error::SingularMatrix);
        }
        let f = self.f;
        let r = self.rows;
        // Columns of the adjugate are the cross products of row pairs.
        let c0 = cross(f, r[1], r[2]);
        let c1 = cross(f, r[2], r[0]);
        let c2 = cross(f, r[0], r[1]);
        let inv = f.inv(d)?;
        let adj = Mat3::from_cols(f, [c0, c1, c2])?;
        Ok(Mat3 { f, rows: adj.rows.map(|row| scale3(f, inv, row)) })
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        self.rows.map(|r| dot(self.f, r, v))
    }

    pub fn mul(&self, other: &Mat3) -> Result<Mat3> {
        if self.f != other.f {
            return Err(Error::FieldMismatch { left: self.f.order(), right: other.f.order() });
        }
        let t = other.transpose();
        Ok(Mat3 { f: self.f, rows: self.rows.map(|r| t.rows.map(|c| dot(self.f, r, c))) })
    }
}

/// Row-reduces `rows` in place to reduced echelon form and returns the pivot
/// columns.
pub fn rref(f: PrimeField, rows: &mut [Vec<Elem>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let s = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = f.sub(*x, f.mul(s, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : rows · x = 0}`, one vector per free column, in increasing
/// order of that column.
pub fn kernel(f: PrimeField, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut m: Vec<Vec<Elem>> = rows.to_vec();
    let pivots = rref(f, &mut m);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; ncols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(m[i][free]);
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inverse_round_trip() {
        let f = make_field(31).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut invertible = 0;
        for _ in 0..200 {
            let rows = [(); 3].map(|_| [(); 3].map(|_| rng.gen_range(0..31)));
            let m = Mat3::from_rows(f, rows).unwrap();
            match m.inverse() {
                Ok(inv) => {
                    invertible += 1;
                    assert_eq!(m.mul(&inv).unwrap(), Mat3::identity(f));
                    assert_eq!(inv.mul(&m).unwrap(), Mat3::identity(f));
                }
                Err(e) => {
                    assert_eq!(e, Error::SingularMatrix);
                    assert_eq!(m.det(), 0);
                }
            }
        }
        assert!(invertible > 150);
    }

    #[test]
    fn kernel_vectors_are_solutions() {
        let f = make_field(7).unwrap();
        let rows = vec![vec![1, 2, 3, 4], vec![2, 4, 6, 2]];
        let k = kernel(f, &rows, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            for r in &rows {
                let s = r.iter().zip(v).fold(0, |a, (&x, &y)| f.add(a, f.mul(x, y)));
                assert_eq!(s, 0);
            }
        }
        assert!(kernel(f, &[vec![1, 0], vec![0, 1]], 2).is_empty());
    }

    #[test]
    fn cross_is_orthogonal() {
        let f = make_field(13).unwrap();
        let (a, b) = ([1, 5, 7], [3, 0, 12]);
        let c = cross(f, a, b);
        assert_eq!(dot(f, a, c), 0);
        assert_eq!(dot(f, b, c), 0);
    }
}
