use serde::Serialize;

use super::{count_incidences, PLine, PPoint};
use crate::error::{Error, Result};

/// Incidence count against the elementary bounds, in exact integer form.
///
/// With `μ(p)` the number of lines through `p`, Cauchy–Schwarz gives
/// `Σ μ(μ-1) >= I²/|P| - I`, and two distinct lines share at most one point,
/// so `Σ μ(μ-1) <= |L|(|L|-1)`. Hence `I² <= |P||L|(|L|-1) + I|P|`, which
/// implies `I <= |P|^{1/2}|L| + |P|`. The dual statements swap `P` and `L`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EasyBoundReport {
    pub incidences: u64,
    pub points: u64,
    pub lines: u64,
    /// `I² <= 2|L|²|P| + I|P|`.
    pub chain: bool,
    /// `I² <= |P||L|(|L|-1) + I|P|`.
    pub chain_tight: bool,
    /// `I² <= |L||P|(|P|-1) + I|L|`.
    pub dual_chain_tight: bool,
    /// `I <= |P|^{1/2}|L| + |P|`.
    pub primal: bool,
    /// `I <= |L|^{1/2}|P| + |L|`.
    pub dual: bool,
    /// `|P|^{1/2}|L| + |P| - I`.
    pub primal_slack: f64,
    /// `|L|^{1/2}|P| + |L| - I`.
    pub dual_slack: f64,
}

impl EasyBoundReport {
    pub fn holds(&self) -> bool {
        self.chain && self.chain_tight && self.dual_chain_tight && self.primal && self.dual
    }
}

/// `i <= sqrt(a)·b + c`, decided exactly.
fn sqrt_bound(i: u128, a: u128, b: u128, c: u128) -> bool {
    i <= c || (i - c) * (i - c) <= a * b * b
}

/// Counts incidences and evaluates the elementary bounds. Assumes `P` and
/// `L` have no repeated entries.
pub fn easy_bound_check(points: &[PPoint], lines: &[PLine]) -> Result<EasyBoundReport> {
    let i = count_incidences(points, lines)?;
    Ok(bound_report(i, points.len() as u64, lines.len() as u64))
}

pub(crate) fn bound_report(incidences: u64, np: u64, nl: u64) -> EasyBoundReport {
    let (i, p, l) = (incidences as u128, np as u128, nl as u128);
    let sq = |x: u64| (x as f64).sqrt();
    EasyBoundReport {
        incidences,
        points: np,
        lines: nl,
        chain: i * i <= 2 * l * l * p + i * p,
        chain_tight: i * i <= p * l * l.saturating_sub(1) + i * p,
        dual_chain_tight: i * i <= l * p * p.saturating_sub(1) + i * l,
        primal: sqrt_bound(i, p, l, p),
        dual: sqrt_bound(i, l, p, l),
        primal_slack: sq(np) * nl as f64 + np as f64 - incidences as f64,
        dual_slack: sq(nl) * np as f64 + nl as f64 - incidences as f64,
    }
}

/// A relation between `0..left` and `0..right`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub left: usize,
    pub right: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Relation {
    pub fn new(left: usize, right: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(a, b) in &edges {
            if a >= left || b >= right {
                return Err(Error::InvalidEdge(a as u32, b as u32));
            }
        }
        Ok(Relation { left, right, edges })
    }

    /// Lines on the left, points on the right, one edge per incidence.
    pub fn from_incidences(points: &[PPoint], lines: &[PLine]) -> Result<Self> {
        let mut edges = Vec::new();
        for (li, l) in lines.iter().enumerate() {
            for (pi, p) in points.iter().enumerate() {
                if super::incident(p, l)? {
                    edges.push((li, pi));
                }
            }
        }
        Ok(Relation { left: lines.len(), right: points.len(), edges })
    }

    /// `μ(b)`: number of left elements related to each right element.
    pub fn right_multiplicities(&self) -> Vec<u64> {
        let mut mu = vec![0u64; self.right];
        for &(_, b) in &self.edges {
            mu[b] += 1;
        }
        mu
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CsReport {
    /// `Σ_b μ(b)`.
    pub pairs: u64,
    /// `Σ_b μ(b)(μ(b) - 1)`: triples `(a, a', b)` with `a ≠ a'`, both related to `b`.
    pub paths: u64,
    pub right: usize,
    /// `|B|·paths >= pairs² - pairs·|B|`.
    pub holds: bool,
}

pub fn cs_count(r: &Relation) -> CsReport {
    let mu = r.right_multiplicities();
    let pairs: u64 = mu.iter().sum();
    let paths: u64 = mu.iter().map(|&m| m * m.saturating_sub(1)).sum();
    let b = r.right as i128;
    let holds = b * paths as i128 >= (pairs as i128) * (pairs as i128) - (pairs as i128) * b;
    CsReport { pairs, paths, right: r.right, holds }
}

/// Elements whose weight reaches half the average `X / |B|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Popular {
    pub kept: Vec<usize>,
    pub mass: u64,
    pub requested: u64,
}

impl Popular {
    /// Retained mass is at least `X / 2`.
    pub fn holds(&self) -> bool {
        2 * self.mass as u128 >= self.requested as u128
    }
}

/// Keeps `{b : μ(b) >= X / (2|B|)}`; requires `Σ μ >= X`.
pub fn popular_restrict(weights: &[u64], x: u64) -> Result<Popular> {
    let total: u128 = weights.iter().map(|&w| w as u128).sum();
    if total < x as u128 {
        return Err(Error::MassTooSmall { total: total.min(u64::MAX as u128) as u64, requested: x });
    }
    let nb = weights.len() as u128;
    let kept: Vec<usize> = (0..weights.len())
        .filter(|&b| 2 * nb * weights[b] as u128 >= x as u128)
        .collect();
    let mass = kept.iter().map(|&b| weights[b]).sum();
    Ok(Popular { kept, mass, requested: x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn popular_examples() {
        let p = popular_restrict(&[3, 1], 4).unwrap();
        assert_eq!((p.kept.clone(), p.mass), (vec![0, 1], 4));
        let p = popular_restrict(&[5; 6], 30).unwrap();
        assert_eq!(p.kept.len(), 6);
        let p = popular_restrict(&[10, 0, 0, 0], 10).unwrap();
        assert_eq!((p.kept.clone(), p.mass), (vec![0], 10));
        assert!(p.holds());
        assert_eq!(
            popular_restrict(&[1, 1], 3),
            Err(Error::MassTooSmall { total: 2, requested: 3 })
        );
    }

    #[test]
    fn cs_examples() {
        let complete: Vec<_> = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).collect();
        let r = cs_count(&Relation::new(3, 3, complete).unwrap());
        assert_eq!((r.pairs, r.paths), (9, 18));
        assert!(r.holds);
        let r = cs_count(&Relation::new(4, 4, vec![]).unwrap());
        assert_eq!((r.pairs, r.paths), (0, 0));
        let matching: Vec<_> = (0..5).map(|i| (i, i)).collect();
        let r = cs_count(&Relation::new(5, 5, matching).unwrap());
        assert_eq!((r.pairs, r.paths), (5, 0));
        assert!(r.holds);
        assert!(Relation::new(2, 2, vec![(2, 0)]).is_err());
    }

    #[test]
    fn bounds_on_small_instances() {
        let f = make_field(5).unwrap();
        let full = easy_bound_check(&PPoint::affine_plane(f), &PLine::affine_lines(f)).unwrap();
        assert_eq!(full.incidences, 150);
        assert!(full.holds());
        let one = easy_bound_check(&[PPoint::affine(f, 0, 0)], &[PLine::affine(f, 1, 0)]).unwrap();
        assert_eq!(one.incidences, 1);
        assert!(one.holds());
    }

    #[test]
    fn relation_from_incidences_matches_count() {
        let f = make_field(7).unwrap();
        let points: Vec<_> = PPoint::affine_plane(f).into_iter().step_by(2).collect();
        let lines: Vec<_> = PLine::affine_lines(f).into_iter().step_by(3).collect();
        let r = Relation::from_incidences(&points, &lines).unwrap();
        assert_eq!(r.edges.len() as u64, count_incidences(&points, &lines).unwrap());
        assert!(cs_count(&r).holds);
        // Two lines share at most one point.
        assert!(cs_count(&r).paths <= (lines.len() * (lines.len() - 1)) as u64);
    }
}
