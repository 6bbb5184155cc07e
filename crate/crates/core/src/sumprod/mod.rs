//! Linear surjections `B^k -> F`, rank reduction, and extremal sum-product
//! search.

mod search;

pub use search::{
    sum_only_min_search, sumprod_min_search, ExponentRow, SearchMode, SumOnlyResult,
    EXHAUSTIVE_LIMIT,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, FSet, PrimeField};
use crate::setops::{diffset, prodset, sumset};

/// `(ξ, |A + Bξ|)` for the smallest nonzero `ξ` maximizing the size.
pub fn boost_xi(a: &FSet, b: &FSet) -> Result<(Elem, usize)> {
    a.same_field(b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    let f = a.field();
    let q = f.order() as usize;
    let mut best = (1, 0);
    for xi in f.nonzero() {
        let size = sumset(a, &b.scale(xi))?.len();
        if size > best.1 {
            best = (xi, size);
            if size == q {
                break;
            }
        }
    }
    Ok(best)
}

/// `Bξ_1 + ... + Bξ_k`.
pub fn linear_image(b: &FSet, coeffs: &[Elem]) -> Result<FSet> {
    let (first, rest) = coeffs.split_first().ok_or(Error::EmptyInput)?;
    let mut acc = b.scale(*first);
    for &xi in rest {
        if acc.is_full() {
            break;
        }
        acc = sumset(&acc, &b.scale(xi))?;
    }
    Ok(acc)
}

/// The linear map `(b_1, ..., b_k) -> Σ b_j ξ_j` restricted to `source^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Surjection {
    pub coeffs: Vec<Elem>,
    #[serde(serialize_with = "crate::setops::ser_set")]
    pub source: FSet,
    pub cover_size: usize,
}

impl Surjection {
    pub fn new(source: FSet, coeffs: Vec<Elem>) -> Result<Self> {
        let f = source.field();
        for &xi in &coeffs {
            if f.elem(xi as u64)? == 0 {
                return Err(Error::ZeroDilation);
            }
        }
        let cover_size = if source.is_empty() { 0 } else { linear_image(&source, &coeffs)?.len() };
        Ok(Surjection { coeffs, source, cover_size })
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_surjective(&self) -> bool {
        self.cover_size == self.source.field().order() as usize
    }

    pub fn eval(&self, tuple: &[Elem]) -> Elem {
        let f = self.source.field();
        tuple
            .iter()
            .zip(&self.coeffs)
            .fold(0, |acc, (&b, &xi)| f.add(acc, f.mul(b, xi)))
    }
}

/// Guard on the number of coefficients `build_surjection` may use.
pub fn surjection_cap(q: u32, n: usize) -> usize {
    let ratio = (q as f64).ln() / (n as f64).ln();
    2 * ratio.ceil() as usize + 12
}

/// Grows `Aξ_1 + ... + Aξ_k` one boosted dilate at a time until it is all of
/// `F`. `ξ_1 = 1`; each later `ξ` comes from [`boost_xi`] against the running
/// sum, which picks `1` whenever `1` is a maximizer.
pub fn build_surjection(a: &FSet) -> Result<Surjection> {
    let f = a.field();
    let q = f.order() as usize;
    if a.is_full() {
        return Surjection::new(a.clone(), vec![1]);
    }
    if a.len() <= 1 {
        return Err(Error::TooSmall(format!("|A| = {} but need at least 2", a.len())));
    }
    let cap = surjection_cap(f.order(), a.len());
    let mut coeffs = vec![1];
    let mut running = a.clone();
    while running.len() < q {
        if coeffs.len() >= cap {
            return Err(Error::IterationCap { cap });
        }
        let (xi, _) = boost_xi(&running, a)?;
        running = sumset(&running, &a.scale(xi))?;
        coeffs.push(xi);
    }
    Ok(Surjection { coeffs, source: a.clone(), cover_size: q })
}

/// Two distinct tuples over `B` with the same image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub tuple_a: Vec<Elem>,
    pub tuple_b: Vec<Elem>,
}

impl Collision {
    /// Checks `Σ (a_j - b_j) ξ_j = 0` and `a ≠ b`.
    pub fn holds(&self, f: PrimeField, coeffs: &[Elem]) -> bool {
        if self.tuple_a == self.tuple_b || self.tuple_a.len() != coeffs.len() {
            return false;
        }
        let s = self
            .tuple_a
            .iter()
            .zip(&self.tuple_b)
            .zip(coeffs)
            .fold(0, |acc, ((&x, &y), &xi)| f.add(acc, f.mul(f.sub(x, y), xi)));
        s == 0
    }

    /// Last coordinate where the tuples differ.
    pub fn pivot(&self) -> Option<usize> {
        (0..self.tuple_a.len()).rev().find(|&j| self.tuple_a[j] != self.tuple_b[j])
    }
}

/// First repeated value while scanning `B^k` in lexicographic order; the
/// earlier tuple is `tuple_a`.
pub fn find_collision(b: &FSet, s: &Surjection) -> Result<Collision> {
    let f = b.field();
    let k = s.rank();
    let tuples = (b.len() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if tuples <= f.order() as u128 {
        return Err(Error::NoCollisionInBudget { tuples, q: f.order() });
    }
    let elems = b.to_vec();
    let mut first: Vec<Option<Vec<Elem>>> = vec![None; f.order() as usize];
    let mut idx = vec![0usize; k];
    loop {
        let tuple: Vec<Elem> = idx.iter().map(|&i| elems[i]).collect();
        let v = tuple
            .iter()
            .zip(&s.coeffs)
            .fold(0, |acc, (&x, &xi)| f.add(acc, f.mul(x, xi)));
        match &first[v as usize] {
            Some(prev) => {
                return Ok(Collision { tuple_a: prev.clone(), tuple_b: tuple });
            }
            None => first[v as usize] = Some(tuple),
        }
        // Pigeonhole guarantees a hit before the odometer wraps.
        let mut j = k;
        loop {
            j -= 1;
            idx[j] += 1;
            if idx[j] < elems.len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// `B·(B-B) + B·(B-B)`.
pub fn b_tilde(b: &FSet) -> Result<FSet> {
    let d = diffset(b, b)?;
    let bd = prodset(b, &d)?;
    sumset(&bd, &bd)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankReduction {
    pub collision: Collision,
    /// Coordinate moved to the last position before dropping it.
    pub pivot: usize,
    /// Surjection over `B̃` with one coefficient fewer.
    pub reduced: Surjection,
}

/// One rank-reduction step for a surjection `B^k -> F`: find a collision,
/// move a differing coordinate last, and keep the other `k-1` coefficients
/// over `B̃`. The result is re-verified by computing its image.
pub fn reduce_rank(b: &FSet, s: &Surjection) -> Result<RankReduction> {
    b.same_field(&s.source)?;
    let q = b.field().order();
    let k = s.rank();
    if k < 2 {
        return Err(Error::TooSmall(format!("rank {k} cannot be reduced")));
    }
    let covered = linear_image(b, &s.coeffs)?.len();
    if covered != q as usize {
        return Err(Error::NotSurjective { covered, q });
    }
    let collision = find_collision(b, s)?;
    let pivot = collision.pivot().expect("collision tuples differ");
    let mut coeffs = s.coeffs.clone();
    coeffs.swap(pivot, k - 1);
    coeffs.pop();
    let reduced = Surjection::new(b_tilde(b)?, coeffs)?;
    if !reduced.is_surjective() {
        return Err(Error::NotSurjective { covered: reduced.cover_size, q });
    }
    Ok(RankReduction { collision, pivot, reduced })
}

/// `build_surjection(A)` followed by `reduce_rank` down to rank 1. Entry `0`
/// is the initial surjection.
pub fn surjection_chain(a: &FSet) -> Result<Vec<Surjection>> {
    let mut chain = vec![build_surjection(a)?];
    loop {
        let cur = chain.last().unwrap();
        if cur.rank() == 1 {
            return Ok(chain);
        }
        let step = reduce_rank(&cur.source, cur)?;
        chain.push(step.reduced);
    }
}
