//! Refinement to a subset with small `A'·A' - A'·A'`.
//!
//! Pipeline: additive refinement on the popular-sum graph, multiplicative
//! refinement on the popular-product graph, then the largest fiber of the
//! quotient map `(c, d) -> c/d`. No a-priori constant is asserted; the
//! measured doubling of the output is reported instead.

use serde::Serialize;

use super::bsg::{bsg_core, popular_graph, GroupLaw};
use super::cover::ser_set;
use super::{diffset, prodset, sumset};
use crate::error::{Error, Result};
use crate::field::{Elem, FSet};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KtRefinement {
    #[serde(serialize_with = "ser_set")]
    pub a_prime: FSet,
    /// `|A'·A' - A'·A'| / |A'|`.
    pub measured_k: f64,
    /// `max(2, |A+A|/|A|, |A·A|/|A|)` for the zero-stripped input.
    pub input_k: f64,
    #[serde(serialize_with = "ser_set")]
    pub c: FSet,
    #[serde(serialize_with = "ser_set")]
    pub d: FSet,
    #[serde(serialize_with = "ser_set")]
    pub c_prime: FSet,
    #[serde(serialize_with = "ser_set")]
    pub d_prime: FSet,
    /// Chosen fiber of the quotient map.
    pub fiber: Elem,
    /// Set when the best fiber had fewer than two points and the stripped
    /// input was returned instead.
    pub fallback: bool,
}

/// `|S·S - S·S| / |S|`.
pub fn product_difference_ratio(s: &FSet) -> Result<f64> {
    let p = prodset(s, s)?;
    Ok(diffset(&p, &p)?.len() as f64 / s.len() as f64)
}

/// Runs the refinement pipeline. `budget` bounds the `|A|³` path-count work.
pub fn kt_refine(a: &FSet, budget: u128) -> Result<KtRefinement> {
    let f = a.field();
    let mut a0 = a.clone();
    a0.remove(0);
    let n = a0.len();
    if n < 3 {
        return Err(Error::TooSmall(format!("|A \\ {{0}}| = {n}, need at least 3")));
    }
    let work = (n as u128).pow(3);
    if work > budget {
        return Err(Error::BudgetExceeded { needed: work, budget });
    }
    let sums = sumset(&a0, &a0)?.len() as f64;
    let prods = prodset(&a0, &a0)?.len() as f64;
    let input_k = (sums / n as f64).max(prods / n as f64).max(2.0);

    let g_add = popular_graph(GroupLaw::Additive, &a0, &a0);
    let add = bsg_core(GroupLaw::Additive, &a0, &a0, &g_add)?;
    let (c, d) = (add.a_prime, add.b_prime);

    let g_mul = popular_graph(GroupLaw::Multiplicative, &c, &d);
    let mul = bsg_core(GroupLaw::Multiplicative, &c, &d, &g_mul)?;
    let (c_prime, d_prime) = (mul.a_prime, mul.b_prime);

    // Largest fiber |C' ∩ D'x| of (c, d) -> c/d; smallest x on ties.
    let mut fibers = vec![0usize; f.order() as usize];
    for x in c_prime.iter() {
        for y in d_prime.iter() {
            fibers[f.div(x, y)? as usize] += 1;
        }
    }
    let (fiber, best) = fibers
        .iter()
        .enumerate()
        .skip(1)
        .fold((1usize, 0usize), |acc, (x, &cnt)| if cnt > acc.1 { (x, cnt) } else { acc });
    let fiber = fiber as Elem;
    let (a_prime, fallback) = if best >= 2 {
        (c_prime.intersection(&d_prime.scale(fiber))?, false)
    } else {
        (a0.clone(), true)
    };
    Ok(KtRefinement {
        measured_k: product_difference_ratio(&a_prime)?,
        input_k,
        a_prime,
        c,
        d,
        c_prime,
        d_prime,
        fiber,
        fallback,
    })
}
