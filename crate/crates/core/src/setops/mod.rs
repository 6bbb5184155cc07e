//! Sum and product set algebra over `Z/qZ`, plus the covering and
//! refinement machinery built on top of it.

mod bsg;
mod cover;
mod kt;
mod poly;

pub use bsg::{bsg_extract, count_bsg_paths, BsgCertificate, EdgeSet, GroupLaw};
pub(crate) use cover::ser_set;
pub use cover::{goodness_cover, ruzsa_cover, Cover};
pub use kt::{kt_refine, KtRefinement};
pub use poly::{polynomial_image, PolyExpr};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{or_rotated_into, Elem, FSet};

/// `A + B`, word-parallel: one rotated OR per element of the smaller operand.
pub fn sumset(a: &FSet, b: &FSet) -> Result<FSet> {
    a.same_field(b)?;
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let f = a.field();
    let mut acc = vec![0u64; large.words().len()];
    for s in small.iter() {
        or_rotated_into(&mut acc, large.words(), s, f.order());
    }
    Ok(FSet::from_words(f, acc))
}

/// `A - B`.
pub fn diffset(a: &FSet, b: &FSet) -> Result<FSet> {
    a.same_field(b)?;
    sumset(a, &b.negate())
}

/// `A · B`.
pub fn prodset(a: &FSet, b: &FSet) -> Result<FSet> {
    a.same_field(b)?;
    let f = a.field();
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut out = FSet::empty(f);
    for s in small.iter() {
        for x in large.iter() {
            out.insert(f.mul(s, x));
        }
        if out.is_full() {
            break;
        }
    }
    Ok(out)
}

/// `A / B`, with `0` silently dropped from the divisor.
pub fn quotset(a: &FSet, b: &FSet) -> Result<FSet> {
    a.same_field(b)?;
    let f = a.field();
    let mut inv = FSet::empty(f);
    for x in b.iter().filter(|&x| x != 0) {
        inv.insert(f.inv(x)?);
    }
    if inv.is_empty() {
        return Err(Error::EmptyDivisor);
    }
    prodset(a, &inv)
}

/// The dilate `ξ·A` for `ξ ≠ 0`.
pub fn dilate(a: &FSet, xi: Elem) -> Result<FSet> {
    let xi = a.field().elem(xi as u64)?;
    if xi == 0 {
        return Err(Error::ZeroDilation);
    }
    Ok(a.scale(xi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CauchyDavenport {
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
}

/// Checks `|A+B| >= min(|A|+|B|-1, q)`.
pub fn verify_cauchy_davenport(a: &FSet, b: &FSet) -> Result<CauchyDavenport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    let lhs = sumset(a, b)?.len();
    let rhs = (a.len() + b.len() - 1).min(a.field().order() as usize);
    Ok(CauchyDavenport {
        lhs,
        rhs,
        holds: lhs >= rhs,
    })
}

/// `±A ± A ± ... ± A`, one term per sign (`+1` or `-1`).
pub fn iterated_combination(signs: &[i8], a: &FSet) -> Result<FSet> {
    let (first, rest) = signs.split_first().ok_or(Error::EmptyInput)?;
    let neg = a.negate();
    let pick = |s: i8| if s < 0 { &neg } else { a };
    let mut acc = pick(*first).clone();
    for &s in rest {
        acc = sumset(&acc, pick(s))?;
    }
    Ok(acc)
}

/// `hA - kA`. With `h = k = 0` the result is `{0}`.
pub fn h_minus_k(a: &FSet, h: usize, k: usize) -> Result<FSet> {
    let mut signs = vec![1i8; h];
    signs.extend(std::iter::repeat_n(-1i8, k));
    if signs.is_empty() {
        return FSet::singleton(a.field(), 0);
    }
    iterated_combination(&signs, a)
}
