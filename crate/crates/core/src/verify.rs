//! Invariant suites behind `verify-all`.
//!
//! Each suite checks one family of properties at a single `q`, exhaustively
//! when the input space is small and on a seeded sample otherwise. Sampling
//! is split into fixed-size chunks with one ChaCha stream per chunk, so the
//! counts do not depend on the number of worker threads.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distance::{bisector, dist, distance_set, APoint2};
use crate::error::{Error, Result};
use crate::field::{Elem, FSet, PrimeField};
use crate::incidence::{
    count_incidences, count_incidences_naive, cs_count, easy_bound_check, elekes_construct, incident,
    popular_restrict, PLine, PPoint, Relation,
};
use crate::kakeya::{
    enumerate_directions, hairbrush, lambda_coeffs, lambda_map, lines_meeting_three, normalize_frame, pi_map,
    regulus_fit, ALine3, Meet, Quadric, Surface,
};
use crate::par;
use crate::setops::{h_minus_k, ruzsa_cover, sumset, verify_cauchy_davenport};
use crate::subsets::binomial;
use crate::sumprod::{boost_xi, build_surjection, reduce_rank, Surjection};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coverage {
    Exhaustive,
    Sampled,
}

impl fmt::Display for Coverage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coverage::Exhaustive => "exhaustive",
            Coverage::Sampled => "sampled",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteRow {
    pub suite: &'static str,
    pub q: u32,
    pub mode: Coverage,
    pub cases: u64,
    pub violations: u64,
}

impl SuiteRow {
    pub const CSV_HEADER: &'static str = "suite,q,mode,cases,violations,status";

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn csv_record(&self) -> String {
        let status = if self.passed() { "pass" } else { "fail" };
        format!("{},{},{},{},{},{}", self.suite, self.q, self.mode, self.cases, self.violations, status)
    }
}

/// Case and violation counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub cases: u64,
    pub violations: u64,
}

impl Tally {
    fn check(&mut self, ok: bool) {
        self.cases += 1;
        self.violations += (!ok) as u64;
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.violations += other.violations;
        self
    }

    fn row(self, suite: &'static str, f: PrimeField, mode: Coverage) -> SuiteRow {
        SuiteRow { suite, q: f.order(), mode, cases: self.cases, violations: self.violations }
    }
}

fn sum_tallies(ts: Vec<Tally>) -> Tally {
    ts.into_iter().fold(Tally::default(), Tally::merge)
}

const CHUNK: u64 = 512;

/// Runs `check` on `count` seeded draws; stream `tag << 32 | chunk`.
fn sampled<F>(count: u64, seed: u64, tag: u64, check: F) -> Tally
where
    F: Fn(&mut ChaCha8Rng, &mut Tally) + Sync + Send,
{
    let chunks: Vec<u64> = (0..count.div_ceil(CHUNK)).collect();
    sum_tallies(par::map(chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream((tag << 32) | c);
        let mut t = Tally::default();
        for _ in 0..CHUNK.min(count - c * CHUNK) {
            check(&mut rng, &mut t);
        }
        t
    }))
}

fn mask_set(f: PrimeField, mask: u64) -> FSet {
    FSet::from_elems(f, (0..f.order()).filter(|&i| mask >> i & 1 == 1)).expect("bits below q")
}

/// All nonempty subsets when `q <= 16`.
fn all_nonempty(f: PrimeField) -> Vec<FSet> {
    (1..1u64 << f.order()).map(|m| mask_set(f, m)).collect()
}

fn random_nonempty(f: PrimeField, rng: &mut ChaCha8Rng) -> FSet {
    let n = rng.gen_range(1..=f.order() as usize);
    FSet::random_with(f, n, rng).expect("n <= q")
}

fn exhaustive_pairs<F>(sets: &[FSet], check: F) -> Tally
where
    F: Fn(&FSet, &FSet, &mut Tally) + Sync + Send,
{
    sum_tallies(par::map((0..sets.len()).collect(), |i| {
        let mut t = Tally::default();
        for b in sets {
            check(&sets[i], b, &mut t);
        }
        t
    }))
}

pub const SUITES: [&str; 15] = [
    "cauchy-davenport",
    "cauchy-davenport-ap",
    "boost",
    "ruzsa",
    "plunnecke",
    "surjection",
    "elekes",
    "incidence",
    "popular",
    "bisector",
    "grid",
    "kakeya-directions",
    "kakeya-regulus",
    "kakeya-lemma2d",
    "kakeya-frame",
];

/// Runs every suite at `q`. Requires an odd prime.
pub fn verify_all(q: u64, seed: u64) -> Result<Vec<SuiteRow>> {
    let f = PrimeField::new(q)?;
    if f.order() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    SUITES.iter().map(|s| run_suite(s, f, seed)).collect()
}

/// Runs one named suite with default sizes: exhaustive where the list
/// below allows it, sampled otherwise.
pub fn run_suite(name: &str, f: PrimeField, seed: u64) -> Result<SuiteRow> {
    let q = f.order();
    Ok(match name {
        "cauchy-davenport" if q <= 7 => cauchy_davenport_exhaustive(f),
        "cauchy-davenport" => cauchy_davenport_sampled(f, 100_000, seed),
        "cauchy-davenport-ap" => cauchy_davenport_ap(f),
        "boost" if q <= 7 => boost_exhaustive(f),
        "boost" => boost_sampled(f, 2_000, seed),
        "ruzsa" if q <= 7 => ruzsa_exhaustive(f),
        "ruzsa" => ruzsa_sampled(f, 20_000, seed),
        "plunnecke" if q <= 11 => plunnecke_exhaustive(f),
        "plunnecke" => plunnecke_sampled(f, 2_000, seed),
        "surjection" => surjection_suite(f, 200, seed),
        "elekes" => elekes_suite(f, 5, 2_000, seed),
        "incidence" => incidence_suite(f, 200, seed),
        "popular" => popular_suite(f, 1_000, seed),
        "bisector" if q <= 11 => bisector_exhaustive(f)?,
        "bisector" => bisector_sampled(f, 200_000, seed)?,
        "grid" if q <= 13 => grid_exhaustive(f),
        "grid" => grid_sampled(f, 300, seed),
        "kakeya-directions" => kakeya_directions(f),
        "kakeya-regulus" => kakeya_regulus(f, 100, seed)?,
        "kakeya-lemma2d" => kakeya_lemma2d(f, seed)?,
        "kakeya-frame" => kakeya_frame(f, 100, seed)?,
        _ => return Err(Error::InvalidArgument(format!("unknown suite '{name}'"))),
    })
}

fn cd_check(a: &FSet, b: &FSet, t: &mut Tally) {
    t.check(verify_cauchy_davenport(a, b).map(|r| r.holds).unwrap_or(false));
}

pub fn cauchy_davenport_exhaustive(f: PrimeField) -> SuiteRow {
    exhaustive_pairs(&all_nonempty(f), cd_check).row("cauchy-davenport", f, Coverage::Exhaustive)
}

pub fn cauchy_davenport_sampled(f: PrimeField, pairs: u64, seed: u64) -> SuiteRow {
    sampled(pairs, seed, 1, |rng, t| {
        let (a, b) = (random_nonempty(f, rng), random_nonempty(f, rng));
        cd_check(&a, &b, t)
    })
    .row("cauchy-davenport", f, Coverage::Sampled)
}

/// Arithmetic progressions with a common difference attain equality.
pub fn cauchy_davenport_ap(f: PrimeField) -> SuiteRow {
    let q = f.order();
    let ap = |start: Elem, d: Elem, len: u32| {
        FSet::from_elems(f, (0..len).map(|i| f.add(start, f.mul(i, d)))).expect("reduced")
    };
    let ds: Vec<Elem> = f.nonzero().collect();
    sum_tallies(par::map(ds, |d| {
        let mut t = Tally::default();
        for m in 1..=q {
            let a = ap(0, d, m);
            for n in 1..=q {
                let b = ap(f.mul(n, d), d, n);
                let s = sumset(&a, &b).map(|s| s.len()).unwrap_or(0);
                t.check(s == (m + n - 1).min(q) as usize);
            }
        }
        t
    }))
    .row("cauchy-davenport-ap", f, Coverage::Exhaustive)
}

/// `20·size >= min(10|A||B|, 2q)`, and the size is that of `A + ξB`.
fn boost_check(a: &FSet, b: &FSet, t: &mut Tally) {
    let q = a.field().order() as u64;
    let ok = match boost_xi(a, b) {
        Ok((xi, size)) => {
            let bound = (10 * a.len() as u64 * b.len() as u64).min(2 * q);
            xi != 0 && 20 * size as u64 >= bound && sumset(a, &b.scale(xi)).map(|s| s.len()) == Ok(size)
        }
        Err(_) => false,
    };
    t.check(ok);
}

pub fn boost_exhaustive(f: PrimeField) -> SuiteRow {
    exhaustive_pairs(&all_nonempty(f), boost_check).row("boost", f, Coverage::Exhaustive)
}

pub fn boost_sampled(f: PrimeField, pairs: u64, seed: u64) -> SuiteRow {
    sampled(pairs, seed, 2, |rng, t| {
        let (a, b) = (random_nonempty(f, rng), random_nonempty(f, rng));
        boost_check(&a, &b, t)
    })
    .row("boost", f, Coverage::Sampled)
}

fn ruzsa_check(a: &FSet, b: &FSet, t: &mut Tally) {
    t.check(ruzsa_cover(a, b).map(|c| c.is_valid()).unwrap_or(false));
}

pub fn ruzsa_exhaustive(f: PrimeField) -> SuiteRow {
    exhaustive_pairs(&all_nonempty(f), ruzsa_check).row("ruzsa", f, Coverage::Exhaustive)
}

pub fn ruzsa_sampled(f: PrimeField, pairs: u64, seed: u64) -> SuiteRow {
    sampled(pairs, seed, 3, |rng, t| {
        let (a, b) = (random_nonempty(f, rng), random_nonempty(f, rng));
        ruzsa_check(&a, &b, t)
    })
    .row("ruzsa", f, Coverage::Sampled)
}

/// `|hA - kA|·|A|^{h+k-1} <= |A+A|^{h+k}` for `1 <= h + k <= 4`.
fn plunnecke_check(a: &FSet, t: &mut Tally) {
    let n = a.len() as u128;
    let doubled = sumset(a, a).map(|s| s.len() as u128).unwrap_or(0);
    for h in 0..=4usize {
        for k in 0..=4 - h {
            if h + k == 0 {
                continue;
            }
            let e = (h + k) as u32;
            let size = h_minus_k(a, h, k).map(|s| s.len() as u128).unwrap_or(u128::MAX);
            t.check(size * n.pow(e - 1) <= doubled.pow(e));
        }
    }
}

pub fn plunnecke_exhaustive(f: PrimeField) -> SuiteRow {
    let sets = all_nonempty(f);
    sum_tallies(par::map(sets, |a| {
        let mut t = Tally::default();
        plunnecke_check(&a, &mut t);
        t
    }))
    .row("plunnecke", f, Coverage::Exhaustive)
}

pub fn plunnecke_sampled(f: PrimeField, sets: u64, seed: u64) -> SuiteRow {
    sampled(sets, seed, 4, |rng, t| plunnecke_check(&random_nonempty(f, rng), t)).row("plunnecke", f, Coverage::Sampled)
}

/// `|{Σ b_j ξ_j : b ∈ B^k}|` by growing a reachability table one
/// coefficient at a time.
pub fn image_size_direct(s: &Surjection) -> usize {
    let f = s.source.field();
    let q = f.order() as usize;
    let elems = s.source.to_vec();
    let mut reach = vec![false; q];
    reach[0] = true;
    for &xi in &s.coeffs {
        let mut next = vec![false; q];
        for (x, _) in reach.iter().enumerate().filter(|(_, &r)| r) {
            for &b in &elems {
                next[f.add(x as Elem, f.mul(b, xi)) as usize] = true;
            }
        }
        reach = next;
    }
    reach.iter().filter(|&&r| r).count()
}

/// Outcome of one seeded surjection pipeline run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PipelineOutcome {
    /// Build plus every reduction step that was attempted.
    pub steps: u64,
    pub failures: u64,
    /// Set when the chain reached rank 1.
    pub completed: bool,
}

/// `build_surjection` followed by `reduce_rank` to rank 1. Every surjection
/// is re-checked with [`image_size_direct`]; a step whose collision
/// precondition cannot be met ends the run without counting as a failure.
pub fn surjection_pipeline(a: &FSet) -> PipelineOutcome {
    let q = a.field().order() as usize;
    let mut out = PipelineOutcome { steps: 1, ..Default::default() };
    let mut cur = match build_surjection(a) {
        Ok(s) if s.cover_size == q && image_size_direct(&s) == q => s,
        Ok(_) | Err(_) => {
            out.failures = 1;
            return out;
        }
    };
    while cur.rank() > 1 {
        match reduce_rank(&cur.source, &cur) {
            Ok(step) => {
                out.steps += 1;
                let f = a.field();
                let ok = step.collision.holds(f, &cur.coeffs)
                    && step.reduced.rank() + 1 == cur.rank()
                    && image_size_direct(&step.reduced) == q;
                if !ok {
                    out.failures += 1;
                    return out;
                }
                cur = step.reduced;
            }
            Err(Error::NoCollisionInBudget { .. }) => return out,
            Err(_) => {
                out.steps += 1;
                out.failures += 1;
                return out;
            }
        }
    }
    out.completed = true;
    out
}

pub fn surjection_suite(f: PrimeField, count: u64, seed: u64) -> SuiteRow {
    let q = f.order() as usize;
    sampled(count, seed, 5, |rng, t| {
        let n = rng.gen_range(2..=q);
        let a = FSet::random_with(f, n, rng).expect("n <= q");
        let r = surjection_pipeline(&a);
        t.cases += r.steps;
        t.violations += r.failures;
    })
    .row("surjection", f, Coverage::Sampled)
}

fn elekes_check(a: &FSet, t: &mut Tally) {
    let ok = (|| -> Result<bool> {
        let inst = elekes_construct(a)?;
        let n = a.len();
        let i = count_incidences(&inst.points, &inst.lines)?;
        let sums = sumset(a, a)?.len();
        let prods = crate::setops::prodset(a, a)?.len();
        Ok(i >= (n * n * n) as u64 && inst.points.len() == sums * prods && inst.lines.len() == n * n)
    })();
    t.check(ok.unwrap_or(false));
}

/// Subsets of `F^*` of size at most `max_size`, exhaustively when there
/// are at most `10^5` of them.
pub fn elekes_suite(f: PrimeField, max_size: usize, samples: u64, seed: u64) -> SuiteRow {
    let q = f.order() as u64;
    let total: u128 = (1..=max_size as u64).map(|k| binomial(q - 1, k)).sum();
    if total <= 100_000 {
        let mut sets = Vec::new();
        for k in 1..=max_size.min(q as usize - 1) {
            let mut c: Vec<Elem> = (1..=k as Elem).collect();
            loop {
                sets.push(FSet::from_elems(f, c.iter().copied()).expect("reduced"));
                let Some(i) = (0..k).rev().find(|&i| c[i] < f.order() - (k - i) as Elem) else { break };
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
            }
        }
        return sum_tallies(par::map(sets, |a| {
            let mut t = Tally::default();
            elekes_check(&a, &mut t);
            t
        }))
        .row("elekes", f, Coverage::Exhaustive);
    }
    sampled(samples, seed, 6, |rng, t| {
        let n = rng.gen_range(1..=max_size);
        let picks = rand::seq::index::sample(rng, q as usize - 1, n);
        let a = FSet::from_elems(f, picks.into_iter().map(|i| i as Elem + 1)).expect("reduced");
        elekes_check(&a, t)
    })
    .row("elekes", f, Coverage::Sampled)
}

/// Random projective instances against the elementary bound chain and the
/// Cauchy–Schwarz path count, plus the full affine plane at `q <= 31`.
pub fn incidence_suite(f: PrimeField, count: u64, seed: u64) -> SuiteRow {
    let q = f.order() as usize;
    let total = q * q + q + 1;
    let mut tally = sampled(count, seed, 7, |rng, t| {
        let np = rng.gen_range(1..=total);
        let nl = rng.gen_range(1..=total);
        let points: Vec<PPoint> = rand::seq::index::sample(rng, total, np)
            .into_iter()
            .map(|i| PPoint::from_index(f, i))
            .collect();
        let lines: Vec<PLine> = rand::seq::index::sample(rng, total, nl)
            .into_iter()
            .map(|i| PLine::from_index(f, i))
            .collect();
        let ok = (|| -> Result<bool> {
            let rep = easy_bound_check(&points, &lines)?;
            let cs = cs_count(&Relation::from_incidences(&points, &lines)?);
            let naive = count_incidences_naive(&points, &lines)?;
            Ok(rep.holds() && cs.holds && cs.pairs == rep.incidences && naive == rep.incidences)
        })();
        t.check(ok.unwrap_or(false));
    });
    if q <= 31 {
        let points = PPoint::affine_plane(f);
        let lines = PLine::affine_lines(f);
        let i = count_incidences(&points, &lines).unwrap_or(0);
        tally.check(i == (q * (q * q + q)) as u64);
    }
    tally.row("incidence", f, Coverage::Sampled)
}

pub fn popular_suite(f: PrimeField, count: u64, seed: u64) -> SuiteRow {
    sampled(count, seed, 8, |rng, t| {
        let len = rng.gen_range(1..=64);
        let mut w: Vec<u64> = (0..len).map(|_| rng.gen_range(0..=1000)).collect();
        if w.iter().all(|&x| x == 0) {
            w[0] = 1;
        }
        let total: u64 = w.iter().sum();
        let x = rng.gen_range(1..=total);
        t.check(popular_restrict(&w, x).map(|p| p.holds()).unwrap_or(false));
    })
    .row("popular", f, Coverage::Sampled)
}

fn bisector_check(f: PrimeField, p0: APoint2, p1: APoint2, p: APoint2) -> Result<bool> {
    let l = bisector(f, p0, p1)?;
    let on = incident(&PPoint::affine(f, p.x, p.y), &l)?;
    Ok(on == (dist(f, p, p0)? == dist(f, p, p1)?))
}

fn grid_points(f: PrimeField) -> Vec<APoint2> {
    f.elements().flat_map(|x| f.elements().map(move |y| APoint2 { x, y })).collect()
}

/// Every `p0 ≠ p1` and `p`; when `q ≡ 3 (mod 4)`, also `d(p, r) = 0 ⇒ p = r`.
pub fn bisector_exhaustive(f: PrimeField) -> Result<SuiteRow> {
    if f.order() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let pts = grid_points(f);
    let gate = f.order() % 4 == 3;
    let t = sum_tallies(par::map((0..pts.len()).collect(), |i| {
        let mut t = Tally::default();
        let p0 = pts[i];
        for &p1 in &pts {
            if gate {
                t.check(dist(f, p0, p1).map(|d| (d == 0) == (p0 == p1)).unwrap_or(false));
            }
            if p1 == p0 {
                continue;
            }
            for &p in &pts {
                t.check(bisector_check(f, p0, p1, p).unwrap_or(false));
            }
        }
        t
    }));
    Ok(t.row("bisector", f, Coverage::Exhaustive))
}

pub fn bisector_sampled(f: PrimeField, count: u64, seed: u64) -> Result<SuiteRow> {
    if f.order() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let q = f.order();
    let gate = q % 4 == 3;
    let t = sampled(count, seed, 9, |rng, t| {
        let mut pt = || APoint2 { x: rng.gen_range(0..q), y: rng.gen_range(0..q) };
        let (p0, p1, p) = (pt(), pt(), pt());
        if gate {
            t.check(dist(f, p0, p).map(|d| (d == 0) == (p0 == p)).unwrap_or(false));
        }
        if p0 != p1 {
            t.check(bisector_check(f, p0, p1, p).unwrap_or(false));
        }
    });
    Ok(t.row("bisector", f, Coverage::Sampled))
}

/// `Δ(A×A)` against `{x² + y² : x, y ∈ A - A}` built from plain loops.
fn grid_check(a: &FSet, t: &mut Tally) {
    let f = a.field();
    let pts: Vec<APoint2> = a.iter().flat_map(|x| a.iter().map(move |y| APoint2 { x, y })).collect();
    let delta = match distance_set(f, &pts) {
        Ok(d) => d.to_vec(),
        Err(_) => return t.check(false),
    };
    let mut squares = BTreeSet::new();
    for x in a.iter() {
        for y in a.iter() {
            let d = f.sub(x, y);
            squares.insert(f.mul(d, d));
        }
    }
    let mut expected = BTreeSet::new();
    for &u in &squares {
        for &v in &squares {
            expected.insert(f.add(u, v));
        }
    }
    t.check(delta == expected.into_iter().collect::<Vec<_>>());
}

pub fn grid_exhaustive(f: PrimeField) -> SuiteRow {
    sum_tallies(par::map(all_nonempty(f), |a| {
        let mut t = Tally::default();
        grid_check(&a, &mut t);
        t
    }))
    .row("grid", f, Coverage::Exhaustive)
}

pub fn grid_sampled(f: PrimeField, count: u64, seed: u64) -> SuiteRow {
    let cap = (f.order() as usize).min(40);
    sampled(count, seed, 10, |rng, t| {
        let n = rng.gen_range(1..=cap);
        grid_check(&FSet::random_with(f, n, rng).expect("n <= q"), t)
    })
    .row("grid", f, Coverage::Sampled)
}

/// Exactly `q² + q + 1` pairwise distinct normalized directions.
pub fn kakeya_directions(f: PrimeField) -> SuiteRow {
    let q = f.order() as u64;
    let dirs = enumerate_directions(f);
    let mut t = Tally::default();
    t.check(dirs.len() as u64 == q * q + q + 1);
    let mut seen = HashSet::new();
    for d in &dirs {
        let lead = d.0.iter().copied().find(|&x| x != 0);
        t.check(lead == Some(1) && seen.insert(d.0));
    }
    t.row("kakeya-directions", f, Coverage::Exhaustive)
}

pub fn random_line(f: PrimeField, rng: &mut ChaCha8Rng) -> ALine3 {
    let q = f.order() as i64;
    loop {
        let d = [(); 3].map(|_| rng.gen_range(0..q));
        let b = [(); 3].map(|_| rng.gen_range(0..q));
        if let Ok(l) = ALine3::new(f, d, b) {
            return l;
        }
    }
}

/// Three random pairwise skew lines.
pub fn random_skew_triple(f: PrimeField, rng: &mut ChaCha8Rng) -> [ALine3; 3] {
    loop {
        let ls = [(); 3].map(|_| random_line(f, rng));
        if ls[0].is_skew(&ls[1]) && ls[0].is_skew(&ls[2]) && ls[1].is_skew(&ls[2]) {
            return ls;
        }
    }
}

/// The fitted quadric vanishes on the generators and on every transversal.
pub fn regulus_check(ls: &[ALine3; 3]) -> bool {
    let Ok(Surface::Quadric(quad)) = regulus_fit(&ls[0], &ls[1], &ls[2]) else { return false };
    let Ok(through) = lines_meeting_three(&ls[0], &ls[1], &ls[2]) else { return false };
    ls.iter().chain(&through).all(|l| l.points().into_iter().all(|p| quad.eval(p) == 0))
}

/// `l^j = {(x_j, y, x_j·y)}` for `x_j = 0, 1, 2`; the fit is `z - xy`.
pub fn footnote_model_check(f: PrimeField) -> bool {
    let ls = [0, 1, 2].map(|x| ALine3::new(f, [0, 1, x], [x, 0, 0]).expect("valid line"));
    regulus_fit(&ls[0], &ls[1], &ls[2]) == Ok(Surface::Quadric(Quadric::new(f, [0, 0, 0, 1, 0, 0, 0, -1, 0, 0])))
}

pub fn kakeya_regulus(f: PrimeField, count: u64, seed: u64) -> Result<SuiteRow> {
    if f.order() < 3 {
        return Err(Error::DegenerateField(f.order()));
    }
    let mut t = sampled(count, seed, 11, |rng, t| t.check(regulus_check(&random_skew_triple(f, rng))));
    t.check(footnote_model_check(f));
    Ok(t.row("kakeya-regulus", f, Coverage::Sampled))
}

/// Lines through `(x, 0, 0)` and `(0, y, 1)` with `x, y ≠ 0`.
pub fn pi_domain(f: PrimeField) -> Vec<ALine3> {
    f.nonzero()
        .flat_map(|x| f.nonzero().map(move |y| ALine3::through(f, [x, 0, 0], [0, y, 1]).expect("distinct")))
        .collect()
}

/// Lines `{(a(t - z), b(t - z), t)}` with `a, b ≠ 0`, `z ∉ {0, 1}`.
pub fn lambda_domain(f: PrimeField) -> Vec<ALine3> {
    let mut out = Vec::new();
    for a in f.nonzero() {
        for b in f.nonzero() {
            for z in (2..f.order()).map(|z| z as i64) {
                let (a, b) = (a as i64, b as i64);
                out.push(ALine3::new(f, [a, b, 1], [-a * z, -b * z, 0]).expect("valid"));
            }
        }
    }
    out
}

const LEMMA2D_EXHAUSTIVE: u128 = 50_000_000;

/// Forward incidence property over meeting pairs, injectivity of `Π`, and
/// the three-line containment of each `Λ` fiber.
pub fn kakeya_lemma2d(f: PrimeField, seed: u64) -> Result<SuiteRow> {
    if f.order() < 3 {
        return Err(Error::DegenerateField(f.order()));
    }
    let pis = pi_domain(f);
    let lams = lambda_domain(f);
    let exhaustive = (pis.len() as u128) * (lams.len() as u128) <= LEMMA2D_EXHAUSTIVE;
    let pi_img: Vec<Option<PPoint>> = pis.iter().map(|l| pi_map(l).ok()).collect();
    let lam_img: Vec<Option<PLine>> = lams.iter().map(|l| lambda_map(l).ok()).collect();
    let pair = |i: usize, j: usize, t: &mut Tally| {
        if pis[i].intersects(&lams[j]) {
            let ok = match (pi_img[i], lam_img[j]) {
                (Some(p), Some(l)) => incident(&p, &l).unwrap_or(false),
                _ => false,
            };
            t.check(ok);
        }
    };
    let mut t = if exhaustive {
        sum_tallies(par::map((0..pis.len()).collect(), |i| {
            let mut t = Tally::default();
            for j in 0..lams.len() {
                pair(i, j, &mut t);
            }
            t
        }))
    } else {
        // Sample l'_* and force a meeting by picking l through one of its points.
        sampled(100_000, seed, 12, |rng, t| {
            let i = rng.gen_range(0..pis.len());
            let j = rng.gen_range(0..lams.len());
            pair(i, j, t);
            let s = rng.gen_range(0..f.order());
            let p = pis[i].point_at(s);
            let (a, b) = (rng.gen_range(1..f.order()), rng.gen_range(1..f.order()));
            if let Ok(l) = ALine3::from_parts(f, crate::kakeya::Direction([a, b, 1]), p) {
                if let (Some(pp), Ok(ll)) = (pi_img[i], lambda_map(&l)) {
                    t.check(incident(&pp, &ll).unwrap_or(false));
                }
            }
        })
    };
    let mut seen = HashSet::new();
    for img in &pi_img {
        t.check(img.is_some_and(|p| seen.insert(p)));
    }
    let lstar = ALine3::new(f, [0, 0, 1], [0, 0, 0])?;
    let step = if exhaustive { 1 } else { (lams.len() / 20_000).max(1) };
    for l in lams.iter().step_by(step) {
        let ok = lambda_coeffs(l).is_ok_and(|(alpha, beta)| {
            let u = ALine3::from_parts(f, crate::kakeya::Direction([0, 1, 0]), [f.neg(alpha), 0, 0]);
            let v = ALine3::from_parts(f, crate::kakeya::Direction([1, 0, 0]), [0, f.neg(beta), 1]);
            match (u, v) {
                (Ok(u), Ok(v)) => l.intersects(&lstar) && l.intersects(&u) && l.intersects(&v),
                _ => false,
            }
        });
        t.check(ok);
    }
    let mode = if exhaustive { Coverage::Exhaustive } else { Coverage::Sampled };
    Ok(t.row("kakeya-lemma2d", f, mode))
}

/// Random skew `l0, l1` with a transversal `l*`, plus up to 40 random
/// lines. The frame map must send the three lines to the axes and keep the
/// hairbrush and the set of meeting pairs.
pub fn kakeya_frame(f: PrimeField, count: u64, seed: u64) -> Result<SuiteRow> {
    if f.order() < 3 {
        return Err(Error::DegenerateField(f.order()));
    }
    let x_axis = ALine3::new(f, [1, 0, 0], [0, 0, 0])?;
    let z_axis = ALine3::new(f, [0, 0, 1], [0, 0, 0])?;
    let y_one = ALine3::new(f, [0, 1, 0], [0, 0, 1])?;
    let t = sampled(count, seed, 13, |rng, t| {
        let (l0, l1) = loop {
            let (a, b) = (random_line(f, rng), random_line(f, rng));
            if a.is_skew(&b) {
                break (a, b);
            }
        };
        let q = f.order();
        let p0 = l0.point_at(rng.gen_range(0..q));
        let p1 = l1.point_at(rng.gen_range(0..q));
        let lstar = ALine3::through(f, p0, p1).expect("disjoint lines give distinct points");
        let Ok(g) = normalize_frame(&l0, &lstar, &l1) else { return t.check(false) };
        t.check(g.apply_line(&l0) == x_axis && g.apply_line(&lstar) == z_axis && g.apply_line(&l1) == y_one);
        let n = rng.gen_range(1..=40);
        let family: Vec<ALine3> = (0..n).map(|_| random_line(f, rng)).collect();
        let mapped: Vec<ALine3> = family.iter().map(|l| g.apply_line(l)).collect();
        let before = hairbrush(&lstar, &family, [&l0, &l1]).map(|h| h.len());
        let after = hairbrush(&z_axis, &mapped, [&x_axis, &y_one]).map(|h| h.len());
        t.check(before.is_ok() && before == after);
        let meets = |ls: &[ALine3]| {
            let mut c = 0u64;
            for (i, a) in ls.iter().enumerate() {
                for b in &ls[i + 1..] {
                    c += matches!(a.meet(b), Meet::Point(_)) as u64;
                }
            }
            c
        };
        t.check(meets(&family) == meets(&mapped));
    });
    Ok(t.row("kakeya-frame", f, Coverage::Sampled))
}

/// Rows for the full sweep as CSV, header first.
pub fn rows_to_csv(rows: &[SuiteRow]) -> String {
    let mut out = String::from(SuiteRow::CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_record());
        out.push('\n');
    }
    out
}
