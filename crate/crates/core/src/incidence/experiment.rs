use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{count_incidences, incident, PLine, PPoint};
use crate::error::{Error, Result};
use crate::field::{FSet, PrimeField};
use crate::par;
use crate::setops::{prodset, sumset};

/// Points `(A+A) × (A·A)` and lines `y = b(x - a)` for `a, b ∈ A`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElekesInstance {
    pub points: Vec<PPoint>,
    pub lines: Vec<PLine>,
    /// Set when `0 ∈ A`, so that slope-zero lines collapse.
    pub degenerate: bool,
}

pub fn elekes_construct(a: &FSet) -> Result<ElekesInstance> {
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    let f = a.field();
    let sums = sumset(a, a)?;
    let prods = prodset(a, a)?;
    let points = sums
        .iter()
        .flat_map(|x| prods.iter().map(move |y| PPoint::affine(f, x, y)))
        .collect();
    let mut lines = BTreeSet::new();
    for x in a.iter() {
        for b in a.iter() {
            // y = b(x - a)  <=>  b·X - Y - ab = 0
            lines.insert(PLine::from_elems(f, [b, f.neg(1), f.neg(f.mul(x, b))])?);
        }
    }
    Ok(ElekesInstance { points, lines: lines.into_iter().collect(), degenerate: a.contains(0) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    /// `N` distinct affine points and `N` distinct affine lines, uniformly.
    Uniform,
    /// An Elekes instance on a random `A ⊆ F^*` with `|A|² <= N`, points
    /// ranked by how many of its lines they meet, padded uniformly.
    Elekes,
    /// `G × G` with lines of slope and intercept in `G = {0, ..., k-1}`,
    /// `k² <= N`, padded uniformly.
    Grid,
    /// The first `N` affine points by `(x, y)` and the first `N`
    /// non-vertical lines by `(m, k)`.
    FullPlane,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::Uniform => "uniform",
            Generator::Elekes => "elekes",
            Generator::Grid => "grid",
            Generator::FullPlane => "full-plane",
        })
    }
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Generator::Uniform),
            "elekes" => Ok(Generator::Elekes),
            "grid" => Ok(Generator::Grid),
            "full-plane" => Ok(Generator::FullPlane),
            _ => Err(Error::Parse(format!("unknown generator '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StReport {
    pub q: u32,
    pub n: usize,
    pub generator: Generator,
    pub trials: u64,
    pub seed: u64,
    #[serde(rename = "maxI")]
    pub max_incidences: u64,
    /// `3/2 - log(maxI)/log(N)`; undefined for `N = 1`.
    #[serde(rename = "empiricalEps")]
    pub empirical_eps: Option<f64>,
}

impl StReport {
    pub const CSV_HEADER: &'static str = "q,N,generator,trials,seed,maxI,empiricalEps";

    pub fn csv_record(&self) -> String {
        let eps = self.empirical_eps.map(|e| format!("{e:.6}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.q, self.n, self.generator, self.trials, self.seed, self.max_incidences, eps
        )
    }
}

/// Work cap for `trials · N · (q + 1)` pencil lookups.
pub const ST_BUDGET: u128 = 20_000_000_000;

/// Largest incidence count over `trials` seeded instances with
/// `|P| = |L| = N`.
pub fn st_experiment(q: u64, n: usize, generator: Generator, trials: u64, seed: u64) -> Result<StReport> {
    let f = PrimeField::new(q)?;
    let qq = f.order() as usize;
    if n == 0 || n > qq * qq {
        return Err(Error::SizeOutOfRange { n, q: f.order() });
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let work = trials as u128 * n as u128 * (qq as u128 + 1);
    if work > ST_BUDGET {
        return Err(Error::BudgetExceeded { needed: work, budget: ST_BUDGET });
    }
    let counts = par::map((0..trials).collect(), |t| -> Result<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t);
        let (points, lines) = generate(f, n, generator, &mut rng)?;
        count_incidences(&points, &lines)
    });
    let mut max_incidences = 0;
    for c in counts {
        max_incidences = max_incidences.max(c?);
    }
    let empirical_eps = (n > 1).then(|| 1.5 - (max_incidences as f64).ln() / (n as f64).ln());
    Ok(StReport { q: f.order(), n, generator, trials, seed, max_incidences, empirical_eps })
}

fn affine_point(f: PrimeField, i: usize) -> PPoint {
    let q = f.order() as usize;
    PPoint::affine(f, (i / q) as u32, (i % q) as u32)
}

/// Index `< q²` is the non-vertical line `(m, k) = (i / q, i % q)`; the
/// remaining `q` indices are verticals.
fn affine_line(f: PrimeField, i: usize) -> PLine {
    let q = f.order() as usize;
    if i < q * q {
        PLine::affine(f, (i / q) as u32, (i % q) as u32)
    } else {
        PLine::vertical(f, (i - q * q) as u32)
    }
}

/// Tops `set` up to `n` entries with distinct uniform draws from `0..total`.
fn pad<T: Ord + Copy>(set: &mut BTreeSet<T>, n: usize, total: usize, make: impl Fn(usize) -> T, rng: &mut ChaCha8Rng) {
    if set.len() >= n {
        return;
    }
    for i in index::sample(rng, total, total.min(n + set.len())).into_iter() {
        if set.len() >= n {
            break;
        }
        set.insert(make(i));
    }
}

fn generate(f: PrimeField, n: usize, g: Generator, rng: &mut ChaCha8Rng) -> Result<(Vec<PPoint>, Vec<PLine>)> {
    let q = f.order() as usize;
    let (np, nl) = (q * q, q * q + q);
    let mut points = BTreeSet::new();
    let mut lines = BTreeSet::new();
    match g {
        Generator::Uniform => {}
        Generator::FullPlane => {
            points.extend((0..n).map(|i| affine_point(f, i)));
            lines.extend((0..n).map(|i| affine_line(f, i)));
        }
        Generator::Grid => {
            let k = ((n as f64).sqrt() as usize).min(q);
            for x in 0..k as u32 {
                for y in 0..k as u32 {
                    points.insert(PPoint::affine(f, x, y));
                    lines.insert(PLine::affine(f, x, y));
                }
            }
        }
        Generator::Elekes => {
            let s = ((n as f64).sqrt() as usize).clamp(1, q - 1);
            let mut a = FSet::random_with(f, s, rng)?;
            if a.contains(0) {
                a.remove(0);
                let fresh = (1..f.order()).find(|&x| !a.contains(x)).expect("s <= q - 1");
                a.insert(fresh);
            }
            let inst = elekes_construct(&a)?;
            lines.extend(inst.lines.iter().copied().take(n));
            let mut ranked: Vec<(usize, PPoint)> = inst
                .points
                .iter()
                .map(|p| (inst.lines.iter().filter(|l| incident(p, l).unwrap_or(false)).count(), *p))
                .collect();
            ranked.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
            points.extend(ranked.into_iter().take(n).map(|(_, p)| p));
        }
    }
    pad(&mut points, n, np, |i| affine_point(f, i), rng);
    pad(&mut lines, n, nl, |i| affine_line(f, i), rng);
    Ok((points.into_iter().collect(), lines.into_iter().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn set(q: u64, xs: &[u32]) -> FSet {
        FSet::from_elems(make_field(q).unwrap(), xs.iter().copied()).unwrap()
    }

    #[test]
    fn elekes_examples() {
        let e = elekes_construct(&set(7, &[1, 2])).unwrap();
        assert_eq!((e.points.len(), e.lines.len()), (9, 4));
        assert!(count_incidences(&e.points, &e.lines).unwrap() >= 8);
        let e = elekes_construct(&set(7, &[1])).unwrap();
        assert_eq!((e.points.len(), e.lines.len()), (1, 1));
        assert_eq!(count_incidences(&e.points, &e.lines).unwrap(), 1);
        let e = elekes_construct(&set(13, &[1, 2, 3])).unwrap();
        assert!(count_incidences(&e.points, &e.lines).unwrap() >= 27);
        let e = elekes_construct(&set(13, &[0, 2, 3])).unwrap();
        assert!(e.degenerate);
        assert!(e.lines.len() < 9);
    }

    #[test]
    fn witness_points_lie_on_their_lines() {
        let f = make_field(11).unwrap();
        let (a, b, c) = (3, 5, 7);
        let l = PLine::from_elems(f, [b, f.neg(1), f.neg(f.mul(a, b))]).unwrap();
        assert!(incident(&PPoint::affine(f, f.add(a, c), f.mul(b, c)), &l).unwrap());
    }

    #[test]
    fn full_plane_is_sharp() {
        for q in [5u64, 7, 11] {
            let r = st_experiment(q, (q * q) as usize, Generator::FullPlane, 1, 0).unwrap();
            assert_eq!(r.max_incidences, q * q * q);
            assert!(r.empirical_eps.unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn generators_produce_n_by_n_instances() {
        let f = make_field(31).unwrap();
        for g in [Generator::Uniform, Generator::Elekes, Generator::Grid, Generator::FullPlane] {
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let (p, l) = generate(f, 64, g, &mut rng).unwrap();
            assert_eq!((p.len(), l.len()), (64, 64), "{g}");
        }
    }

    #[test]
    fn single_point_and_replay() {
        let r = st_experiment(7, 1, Generator::Uniform, 10, 3).unwrap();
        assert!(r.max_incidences <= 1);
        assert!(r.empirical_eps.is_none());
        let a = st_experiment(31, 64, Generator::Uniform, 20, 5).unwrap();
        assert_eq!(a, st_experiment(31, 64, Generator::Uniform, 20, 5).unwrap());
        assert!(st_experiment(7, 50, Generator::Uniform, 1, 0).is_err());
    }

    #[test]
    fn generator_names_round_trip() {
        for g in [Generator::Uniform, Generator::Elekes, Generator::Grid, Generator::FullPlane] {
            assert_eq!(g.to_string().parse::<Generator>().unwrap(), g);
        }
    }
}
