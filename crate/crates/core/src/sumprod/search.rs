use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, PrimeField};
use crate::par::{self, Stamp};
use crate::subsets::{binomial, for_each_extension, prefixes};

/// Largest `C(q, n)` the exhaustive searches will enumerate.
pub const EXHAUSTIVE_LIMIT: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Randomized,
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::Exhaustive => "exhaustive",
            SearchMode::Randomized => "randomized",
        })
    }
}

impl FromStr for SearchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(SearchMode::Exhaustive),
            "randomized" => Ok(SearchMode::Randomized),
            _ => Err(Error::Parse(format!("unknown search mode '{s}'"))),
        }
    }
}

/// Smallest `max(|A+A|, |A·A|)` found over `n`-subsets of `F_q`.
///
/// Exhaustive rows are exact minima; randomized rows are upper bounds.
/// For exhaustive rows `trials` is the number of subsets enumerated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentRow {
    pub q: u32,
    pub n: usize,
    #[serde(rename = "minMax")]
    pub min_max: usize,
    pub mode: SearchMode,
    pub trials: u64,
    pub seed: Option<u64>,
    pub argmin: Vec<Elem>,
}

impl ExponentRow {
    pub const CSV_HEADER: &'static str = "q,n,minMax,mode,trials,seed,argmin";

    pub fn is_exact(&self) -> bool {
        self.mode == SearchMode::Exhaustive
    }

    pub fn csv_record(&self) -> String {
        let seed = self.seed.map(|s| s.to_string()).unwrap_or_default();
        let argmin: Vec<String> = self.argmin.iter().map(|x| x.to_string()).collect();
        format!(
            "{},{},{},{},{},{},{}",
            self.q,
            self.n,
            self.min_max,
            self.mode,
            self.trials,
            seed,
            argmin.join(" ")
        )
    }

    /// `log(minMax)/log(n) - 1`, the measured exponent gain over `|A|`.
    pub fn measured_eps(&self) -> Option<f64> {
        (self.n >= 2).then(|| (self.min_max as f64).ln() / (self.n as f64).ln() - 1.0)
    }
}

/// `(|A+A|, |A·A|)` for a sorted element list.
fn stats(f: PrimeField, a: &[Elem], stamp: &mut Stamp) -> (usize, usize) {
    stamp.next();
    let mut sums = 0;
    for (i, &x) in a.iter().enumerate() {
        for &y in &a[i..] {
            sums += stamp.mark(f.add(x, y)) as usize;
        }
    }
    stamp.next();
    let mut prods = 0;
    for (i, &x) in a.iter().enumerate() {
        for &y in &a[i..] {
            prods += stamp.mark(f.mul(x, y)) as usize;
        }
    }
    (sums, prods)
}

fn sum_count(f: PrimeField, a: &[Elem], stamp: &mut Stamp) -> usize {
    stamp.next();
    let mut sums = 0;
    for (i, &x) in a.iter().enumerate() {
        for &y in &a[i..] {
            sums += stamp.mark(f.add(x, y)) as usize;
        }
    }
    sums
}

fn check_size(q: u32, n: usize) -> Result<()> {
    if n < 2 || n > q as usize {
        return Err(Error::SizeOutOfRange { n, q });
    }
    Ok(())
}

fn check_budget(q: u32, n: usize) -> Result<u128> {
    let count = binomial(q as u64, n as u64);
    if count > EXHAUSTIVE_LIMIT {
        return Err(Error::BudgetExceeded { needed: count, budget: EXHAUSTIVE_LIMIT });
    }
    Ok(count)
}

/// Minimum of `max(|A+A|, |A·A|)` over `n`-subsets `A` of `F_q`.
///
/// Exhaustive mode walks subsets in lexicographic order and reports the first
/// minimizer. Randomized mode runs `trials` seeded hill-climbs that swap one
/// element at a time, minimizing `(max, |A+A| + |A·A|)` lexicographically and
/// restarting on stall.
pub fn sumprod_min_search(
    q: u64,
    n: usize,
    mode: SearchMode,
    trials: u64,
    seed: u64,
) -> Result<ExponentRow> {
    let f = PrimeField::new(q)?;
    let q = f.order();
    check_size(q, n)?;
    if n == q as usize {
        return Ok(ExponentRow {
            q,
            n,
            min_max: q as usize,
            mode,
            trials: 1,
            seed: (mode == SearchMode::Randomized).then_some(seed),
            argmin: f.elements().collect(),
        });
    }
    match mode {
        SearchMode::Exhaustive => exhaustive(f, n),
        SearchMode::Randomized => randomized(f, n, trials, seed),
    }
}

fn exhaustive(f: PrimeField, n: usize) -> Result<ExponentRow> {
    let q = f.order();
    let count = check_budget(q, n)?;
    let parts = par::map(prefixes(q, n), |prefix| {
        let mut stamp = Stamp::new(q);
        let mut best: Option<(usize, Vec<Elem>)> = None;
        for_each_extension(q, n, &prefix, |a| {
            let (s, p) = stats(f, a, &mut stamp);
            let m = s.max(p);
            if best.as_ref().is_none_or(|(b, _)| m < *b) {
                best = Some((m, a.to_vec()));
            }
        });
        best
    });
    let (min_max, argmin) = parts
        .into_iter()
        .flatten()
        .reduce(|acc, x| if x.0 < acc.0 { x } else { acc })
        .expect("at least one subset");
    Ok(ExponentRow {
        q,
        n,
        min_max,
        mode: SearchMode::Exhaustive,
        trials: count as u64,
        seed: None,
        argmin,
    })
}

fn randomized(f: PrimeField, n: usize, trials: u64, seed: u64) -> Result<ExponentRow> {
    let q = f.order();
    if trials == 0 {
        return Err(Error::InvalidArgument("randomized search needs trials >= 1".into()));
    }
    let stall = (n * (q as usize - n)).clamp(32, 4096);
    let results = par::map((0..trials).collect(), |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t);
        climb(f, n, stall, &mut rng)
    });
    let (key, mut argmin) = results
        .into_iter()
        .reduce(|acc, x| if (x.0, &x.1) < (acc.0, &acc.1) { x } else { acc })
        .expect("trials >= 1");
    argmin.sort_unstable();
    Ok(ExponentRow {
        q,
        n,
        min_max: key.0,
        mode: SearchMode::Randomized,
        trials,
        seed: Some(seed),
        argmin,
    })
}

/// One hill-climb from a random start; returns `((max, total), sorted set)`.
fn climb(f: PrimeField, n: usize, stall: usize, rng: &mut ChaCha8Rng) -> ((usize, usize), Vec<Elem>) {
    let q = f.order();
    let mut stamp = Stamp::new(q);
    let mut inside = vec![false; q as usize];
    let mut cur: Vec<Elem> = rand::seq::index::sample(rng, q as usize, n)
        .into_iter()
        .map(|x| x as Elem)
        .collect();
    cur.sort_unstable();
    for &x in &cur {
        inside[x as usize] = true;
    }
    let key = |a: &[Elem], stamp: &mut Stamp| {
        let (s, p) = stats(f, a, stamp);
        (s.max(p), s + p)
    };
    let mut cur_key = key(&cur, &mut stamp);
    let mut fails = 0;
    let mut cand = cur.clone();
    while fails < stall {
        let out = rng.gen_range(0..n);
        let mut inn = rng.gen_range(0..q);
        while inside[inn as usize] {
            inn = rng.gen_range(0..q);
        }
        cand.copy_from_slice(&cur);
        cand[out] = inn;
        cand.sort_unstable();
        let k = key(&cand, &mut stamp);
        if k < cur_key {
            inside[cur[out] as usize] = false;
            inside[inn as usize] = true;
            std::mem::swap(&mut cur, &mut cand);
            cand.resize(n, 0);
            cur_key = k;
            fails = 0;
        } else {
            fails += 1;
        }
    }
    (cur_key, cur)
}

/// Minimum of `|A+A|` alone over `n`-subsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumOnlyResult {
    pub q: u32,
    pub n: usize,
    pub min_sum: usize,
    pub argmin: Vec<Elem>,
    pub enumerated: u64,
    pub affine_reduced: bool,
}

/// Exhaustive minimum of `|A+A|`. With `affine_reduce`, only subsets
/// containing `{0, 1}` are visited: every `A` with `|A| >= 2` has an affine
/// image `uA + v` of that form, and `|A+A|` is affine invariant.
pub fn sum_only_min_search(q: u64, n: usize, affine_reduce: bool) -> Result<SumOnlyResult> {
    let f = PrimeField::new(q)?;
    let q = f.order();
    check_size(q, n)?;
    let roots: Vec<Vec<Elem>> = if affine_reduce {
        check_budget(q - 2, n - 2)?;
        vec![vec![0, 1]]
    } else {
        check_budget(q, n)?;
        prefixes(q, n)
    };
    let parts = par::map(roots, |prefix| {
        let mut stamp = Stamp::new(q);
        let mut best: Option<(usize, Vec<Elem>)> = None;
        let mut seen = 0u64;
        for_each_extension(q, n, &prefix, |a| {
            seen += 1;
            let s = sum_count(f, a, &mut stamp);
            if best.as_ref().is_none_or(|(b, _)| s < *b) {
                best = Some((s, a.to_vec()));
            }
        });
        (best, seen)
    });
    let enumerated = parts.iter().map(|p| p.1).sum();
    let (min_sum, argmin) = parts
        .into_iter()
        .filter_map(|p| p.0)
        .reduce(|acc, x| if x.0 < acc.0 { x } else { acc })
        .expect("at least one subset");
    Ok(SumOnlyResult { q, n, min_sum, argmin, enumerated, affine_reduced: affine_reduce })
}
