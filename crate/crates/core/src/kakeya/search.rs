use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{enumerate_directions, parallel_class, point_index, ALine3};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::par;

pub const KAKEYA_MAX_Q: u32 = 13;

const MAX_SWEEPS: usize = 64;
const PLATEAU_SWEEPS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KakeyaReport {
    pub q: u32,
    pub trials: u64,
    pub seed: u64,
    /// Smallest union found; an upper bound on the true minimum.
    #[serde(rename = "minSize")]
    pub min_size: usize,
    #[serde(rename = "bestAssignment")]
    pub best_assignment: Vec<ALine3>,
    #[serde(rename = "qPow52")]
    pub q_pow_52: f64,
    /// Counting lower bound valid for every Besicovitch set.
    #[serde(rename = "csLowerBound")]
    pub cs_lower_bound: u64,
}

impl KakeyaReport {
    pub const CSV_HEADER: &'static str = "q,trials,seed,minSize,qPow52,csLowerBound";

    pub fn csv_record(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{}",
            self.q, self.trials, self.seed, self.min_size, self.q_pow_52, self.cs_lower_bound
        )
    }
}

/// `⌈N q² / (N - 1 + q)⌉` with `N = q² + q + 1`: the union of `N` lines of
/// `q` points, pairwise meeting at most once, has at least this many points.
pub fn cs_lower_bound(q: u64) -> u64 {
    let n = q * q + q + 1;
    (n * q * q).div_ceil(n - 1 + q)
}

/// Randomized best-response descent over one-line-per-direction
/// assignments, minimizing the size of the union.
pub fn kakeya_min_search(q: u64, trials: u64, seed: u64) -> Result<KakeyaReport> {
    let f = PrimeField::new(q)?;
    if f.order() > KAKEYA_MAX_Q {
        let per_sweep = |q: u128| q.pow(5);
        return Err(Error::BudgetExceeded { needed: per_sweep(q as u128), budget: per_sweep(KAKEYA_MAX_Q as u128) });
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let classes: Vec<Vec<ALine3>> = enumerate_directions(f).into_iter().map(|d| parallel_class(f, d)).collect();
    let pts: Vec<Vec<Vec<u32>>> = classes
        .iter()
        .map(|c| c.iter().map(|l| l.points().into_iter().map(|p| point_index(f, p) as u32).collect()).collect())
        .collect();
    let results = par::map((0..trials).collect(), |t| climb(f, &pts, seed, t));
    let (min_size, choice) = results
        .into_iter()
        .enumerate()
        .min_by_key(|(i, (size, _))| (*size, *i))
        .map(|(_, r)| r)
        .expect("trials >= 1");
    let best_assignment = choice.iter().zip(&classes).map(|(&i, c)| c[i]).collect();
    Ok(KakeyaReport {
        q: f.order(),
        trials,
        seed,
        min_size,
        best_assignment,
        q_pow_52: (q as f64).powf(2.5),
        cs_lower_bound: cs_lower_bound(q),
    })
}

fn climb(f: PrimeField, pts: &[Vec<Vec<u32>>], seed: u64, trial: u64) -> (usize, Vec<usize>) {
    let q = f.order() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut counts = vec![0u16; q * q * q];
    let mut cur: Vec<usize> = pts.iter().map(|c| rng.gen_range(0..c.len())).collect();
    let mut size = 0;
    for (d, &i) in cur.iter().enumerate() {
        for &p in &pts[d][i] {
            size += (counts[p as usize] == 0) as usize;
            counts[p as usize] += 1;
        }
    }
    let mut best = (size, cur.clone());
    let mut order: Vec<usize> = (0..pts.len()).collect();
    let mut ties = Vec::new();
    let mut flat = 0;
    for _ in 0..MAX_SWEEPS {
        order.shuffle(&mut rng);
        for &d in &order {
            for &p in &pts[d][cur[d]] {
                counts[p as usize] -= 1;
                size -= (counts[p as usize] == 0) as usize;
            }
            let mut low = usize::MAX;
            ties.clear();
            for (i, line) in pts[d].iter().enumerate() {
                let cost = line.iter().filter(|&&p| counts[p as usize] == 0).count();
                if cost < low {
                    low = cost;
                    ties.clear();
                }
                if cost == low {
                    ties.push(i);
                }
            }
            let pick = *ties.choose(&mut rng).expect("nonempty class");
            cur[d] = pick;
            for &p in &pts[d][pick] {
                size += (counts[p as usize] == 0) as usize;
                counts[p as usize] += 1;
            }
        }
        if size < best.0 {
            best = (size, cur.clone());
            flat = 0;
        } else {
            flat += 1;
            if flat >= PLATEAU_SWEEPS {
                break;
            }
        }
    }
    best
}
