//! Squared distances in `F_q²`, perpendicular bisectors, and extremal
//! distance-set search.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FSet, PrimeField};
use crate::incidence::PLine;
use crate::par::{self, Stamp};
use crate::subsets::{binomial, for_each_extension, prefixes};
use crate::sumprod::{SearchMode, EXHAUSTIVE_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct APoint2 {
    pub x: Elem,
    pub y: Elem,
}

impl APoint2 {
    pub fn new(f: PrimeField, x: i64, y: i64) -> Self {
        APoint2 { x: f.reduce(x), y: f.reduce(y) }
    }

    fn from_index(i: u32, q: u32) -> Self {
        APoint2 { x: i / q, y: i % q }
    }
}

impl fmt::Display for APoint2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

fn check_point(f: PrimeField, p: APoint2) -> Result<()> {
    f.elem(p.x as u64)?;
    f.elem(p.y as u64)?;
    Ok(())
}

/// `(x - x')² + (y - y')²`.
pub fn dist(f: PrimeField, p: APoint2, r: APoint2) -> Result<Elem> {
    check_point(f, p)?;
    check_point(f, r)?;
    Ok(dist_unchecked(f, p, r))
}

#[inline]
fn dist_unchecked(f: PrimeField, p: APoint2, r: APoint2) -> Elem {
    let dx = f.sub(p.x, r.x);
    let dy = f.sub(p.y, r.y);
    f.add(f.mul(dx, dx), f.mul(dy, dy))
}

/// `{d(p, p') : p, p' ∈ P}`, including `0`.
pub fn distance_set(f: PrimeField, points: &[APoint2]) -> Result<FSet> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut out = FSet::empty(f);
    for (i, &p) in points.iter().enumerate() {
        check_point(f, p)?;
        for &r in &points[i..] {
            out.insert(dist_unchecked(f, p, r));
        }
    }
    Ok(out)
}

/// The isotropic line `{(x, ix)}` with `i² = -1`, when `-1` is a square.
pub fn isotropic_line(f: PrimeField) -> Option<Vec<APoint2>> {
    let i = f.sqrt(f.neg(1))?;
    Some(f.elements().map(|x| APoint2 { x, y: f.mul(i, x) }).collect())
}

/// True iff `-1` is a non-square, i.e. `q ≡ 3 (mod 4)`. When false, the
/// isotropic line is built and checked to have distance set `{0}`.
pub fn nonsquare_gate(f: PrimeField) -> bool {
    match isotropic_line(f) {
        None => true,
        Some(line) => {
            let delta = distance_set(f, &line).expect("line is nonempty");
            assert_eq!(delta.to_vec(), vec![0], "isotropic line has a nonzero distance");
            false
        }
    }
}

/// `{p : d(p, p0) = d(p, p1)}` as the line
/// `2(a1-a0)x + 2(b1-b0)y - ((a1²+b1²) - (a0²+b0²)) = 0`.
pub fn bisector(f: PrimeField, p0: APoint2, p1: APoint2) -> Result<PLine> {
    check_point(f, p0)?;
    check_point(f, p1)?;
    if f.order() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if p0 == p1 {
        return Err(Error::EqualPoints);
    }
    let sq = |p: APoint2| f.add(f.mul(p.x, p.x), f.mul(p.y, p.y));
    let a = f.mul(2, f.sub(p1.x, p0.x));
    let b = f.mul(2, f.sub(p1.y, p0.y));
    let c = f.neg(f.sub(sq(p1), sq(p0)));
    PLine::from_elems(f, [a, b, c])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub q: u32,
    pub n: usize,
    /// Smallest `|Δ(P)|` found (without `0` when `exclude_zero`).
    #[serde(rename = "minDelta")]
    pub min_delta: usize,
    pub witness: Vec<APoint2>,
    pub mode: SearchMode,
    /// Subsets enumerated (exhaustive) or hill-climb restarts (randomized).
    pub trials: u64,
    pub seed: Option<u64>,
    #[serde(rename = "excludeZero")]
    pub exclude_zero: bool,
}

impl DistanceReport {
    pub const CSV_HEADER: &'static str = "q,N,minDelta,mode,trials,seed,excludeZero,witness";

    pub fn csv_record(&self) -> String {
        let seed = self.seed.map(|s| s.to_string()).unwrap_or_default();
        let w: Vec<String> = self.witness.iter().map(|p| format!("{}:{}", p.x, p.y)).collect();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.q,
            self.n,
            self.min_delta,
            self.mode,
            self.trials,
            seed,
            self.exclude_zero,
            w.join(" ")
        )
    }
}

fn delta_size(f: PrimeField, pts: &[APoint2], exclude_zero: bool, stamp: &mut Stamp) -> usize {
    stamp.next();
    let mut n = 0;
    if !exclude_zero {
        n += stamp.mark(0) as usize;
    }
    for (i, &p) in pts.iter().enumerate() {
        for &r in &pts[i + 1..] {
            let d = dist_unchecked(f, p, r);
            if d != 0 || !exclude_zero {
                n += stamp.mark(d) as usize;
            }
        }
    }
    n
}

/// Smallest `|Δ(P)|` over `N`-point sets `P ⊆ F_q²`. Exhaustive mode needs
/// `C(q², N) <= 10^8`; randomized mode runs seeded hill-climbs that move one
/// point at a time.
pub fn distance_min_search(
    q: u64,
    n: usize,
    mode: SearchMode,
    trials: u64,
    seed: u64,
    exclude_zero: bool,
) -> Result<DistanceReport> {
    let f = PrimeField::new(q)?;
    let q = f.order();
    if !nonsquare_gate(f) {
        return Err(Error::DegenerateField(q));
    }
    let total = q * q;
    if n == 0 || n > total as usize {
        return Err(Error::SizeOutOfRange { n, q });
    }
    match mode {
        SearchMode::Exhaustive => {
            let count = binomial(total as u64, n as u64);
            if count > EXHAUSTIVE_LIMIT {
                return Err(Error::BudgetExceeded { needed: count, budget: EXHAUSTIVE_LIMIT });
            }
            let parts = par::map(prefixes(total, n), |prefix| {
                let mut stamp = Stamp::new(q);
                let mut pts = Vec::with_capacity(n);
                let mut best: Option<(usize, Vec<Elem>)> = None;
                for_each_extension(total, n, &prefix, |idx| {
                    pts.clear();
                    pts.extend(idx.iter().map(|&i| APoint2::from_index(i, q)));
                    let s = delta_size(f, &pts, exclude_zero, &mut stamp);
                    if best.as_ref().is_none_or(|(b, _)| s < *b) {
                        best = Some((s, idx.to_vec()));
                    }
                });
                best
            });
            let (min_delta, idx) = parts
                .into_iter()
                .flatten()
                .reduce(|acc, x| if x.0 < acc.0 { x } else { acc })
                .expect("at least one subset");
            Ok(DistanceReport {
                q,
                n,
                min_delta,
                witness: idx.into_iter().map(|i| APoint2::from_index(i, q)).collect(),
                mode,
                trials: count as u64,
                seed: None,
                exclude_zero,
            })
        }
        SearchMode::Randomized => {
            if trials == 0 {
                return Err(Error::InvalidArgument("randomized search needs trials >= 1".into()));
            }
            let stall = (n * (total as usize - n)).clamp(32, 4096);
            let runs = par::map((0..trials).collect(), |t| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(t);
                climb(f, n, stall, exclude_zero, &mut rng)
            });
            let (min_delta, idx) = runs
                .into_iter()
                .reduce(|acc, x| if (x.0, &x.1) < (acc.0, &acc.1) { x } else { acc })
                .expect("trials >= 1");
            Ok(DistanceReport {
                q,
                n,
                min_delta,
                witness: idx.into_iter().map(|i| APoint2::from_index(i, q)).collect(),
                mode,
                trials,
                seed: Some(seed),
                exclude_zero,
            })
        }
    }
}

fn climb(f: PrimeField, n: usize, stall: usize, exclude_zero: bool, rng: &mut ChaCha8Rng) -> (usize, Vec<u32>) {
    let q = f.order();
    let total = q * q;
    let mut stamp = Stamp::new(q);
    let mut inside = vec![false; total as usize];
    let mut cur: Vec<u32> = rand::seq::index::sample(rng, total as usize, n)
        .into_iter()
        .map(|i| i as u32)
        .collect();
    for &i in &cur {
        inside[i as usize] = true;
    }
    let eval = |idx: &[u32], stamp: &mut Stamp| {
        let pts: Vec<APoint2> = idx.iter().map(|&i| APoint2::from_index(i, q)).collect();
        delta_size(f, &pts, exclude_zero, stamp)
    };
    let mut cur_val = eval(&cur, &mut stamp);
    let mut fails = 0;
    while fails < stall && n < total as usize {
        let slot = rng.gen_range(0..n);
        let mut inn = rng.gen_range(0..total);
        while inside[inn as usize] {
            inn = rng.gen_range(0..total);
        }
        let old = cur[slot];
        cur[slot] = inn;
        let v = eval(&cur, &mut stamp);
        if v < cur_val {
            inside[old as usize] = false;
            inside[inn as usize] = true;
            cur_val = v;
            fails = 0;
        } else {
            cur[slot] = old;
            fails += 1;
        }
    }
    cur.sort_unstable();
    (cur_val, cur)
}

/// Writes one `x y` record per point.
pub fn write_points(points: &[APoint2]) -> String {
    points.iter().map(|p| format!("{} {}\n", p.x, p.y)).collect()
}

/// Parses `x y` records; blank lines and `#` comments are skipped.
pub fn parse_points(f: PrimeField, text: &str) -> Result<Vec<APoint2>> {
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
            [x, y] => out.push(APoint2::new(f, x, y)),
            _ => return Err(Error::Parse(format!("line {}: expected two coordinates", no + 1))),
        }
    }
    Ok(out)
}
