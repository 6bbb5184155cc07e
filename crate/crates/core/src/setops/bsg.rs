//! Constructive Balog–Szemerédi–Gowers refinement.
//!
//! Path convention: a representation of `a' ⊖ b'` is an ordered triple of
//! graph edges `((a1,b1), (a2,b2), (a3,b3)) ∈ G³` with
//! `a' ⊖ b' = (a1 ⊖ b1) ⊖ (a2 ⊖ b2) ⊕ (a3 ⊖ b3)`. Each of the six tuple slots
//! is therefore pinned to one endpoint of one G-edge. A length-3 path
//! `a – b1 – a2 – b` in G is one source of such triples: its three edges
//! satisfy the identity with `a' = a`, `b' = b`.

use serde::Serialize;

use super::cover::ser_set;
use crate::error::{Error, Result};
use crate::field::{Elem, FSet, PrimeField};

/// Which group structure of the field the refinement runs in. The
/// multiplicative law lives on `F^*`; zero must not appear in its inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GroupLaw {
    Additive,
    Multiplicative,
}

impl GroupLaw {
    #[inline]
    pub fn op(self, f: PrimeField, x: Elem, y: Elem) -> Elem {
        match self {
            GroupLaw::Additive => f.add(x, y),
            GroupLaw::Multiplicative => f.mul(x, y),
        }
    }

    /// `x ⊖ y`: `x - y` or `x / y`.
    #[inline]
    pub fn diff(self, f: PrimeField, x: Elem, y: Elem) -> Elem {
        match self {
            GroupLaw::Additive => f.sub(x, y),
            GroupLaw::Multiplicative => f.mul(x, f.inv(y).expect("multiplicative law on zero")),
        }
    }

    fn diff_set(self, a: &FSet, b: &FSet) -> FSet {
        let f = a.field();
        let mut out = FSet::empty(f);
        for x in a {
            for y in b {
                out.insert(self.diff(f, x, y));
            }
        }
        out
    }
}

/// Bipartite edge set `G ⊆ A × B`, sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeSet {
    edges: Vec<(Elem, Elem)>,
}

impl EdgeSet {
    pub fn new<I: IntoIterator<Item = (Elem, Elem)>>(a: &FSet, b: &FSet, edges: I) -> Result<Self> {
        let mut edges: Vec<_> = edges.into_iter().collect();
        for &(x, y) in &edges {
            if !a.contains(x) || !b.contains(y) {
                return Err(Error::InvalidEdge(x, y));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(EdgeSet { edges })
    }

    pub fn complete(a: &FSet, b: &FSet) -> Self {
        let edges = a.iter().flat_map(|x| b.iter().map(move |y| (x, y))).collect();
        EdgeSet { edges }
    }

    pub fn empty() -> Self {
        EdgeSet { edges: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Elem, Elem)> + '_ {
        self.edges.iter().copied()
    }

    pub fn contains(&self, e: (Elem, Elem)) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    fn check_within(&self, a: &FSet, b: &FSet) -> Result<()> {
        match self.iter().find(|&(x, y)| !a.contains(x) || !b.contains(y)) {
            Some((x, y)) => Err(Error::InvalidEdge(x, y)),
            None => Ok(()),
        }
    }
}

/// `table[t]` = number of edge triples representing `t` under the path
/// convention. Built by two convolutions of the edge-difference histogram.
fn representation_table(law: GroupLaw, f: PrimeField, g: &EdgeSet) -> Vec<u64> {
    let q = f.order() as usize;
    let mut hist = vec![0u64; q];
    for (x, y) in g.iter() {
        hist[law.diff(f, x, y) as usize] += 1;
    }
    let support: Vec<(Elem, u64)> = hist
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(d, &c)| (d as Elem, c))
        .collect();
    let mut pair = vec![0u64; q];
    for &(x, cx) in &support {
        for &(y, cy) in &support {
            pair[law.diff(f, x, y) as usize] += cx * cy;
        }
    }
    let mut triple = vec![0u64; q];
    for (u, &cu) in pair.iter().enumerate() {
        if cu == 0 {
            continue;
        }
        for &(z, cz) in &support {
            triple[law.op(f, u as Elem, z) as usize] += cu * cz;
        }
    }
    triple
}

/// Number of edge triples representing `a' - b'` (additive law).
pub fn count_bsg_paths(a_prime: Elem, b_prime: Elem, a: &FSet, b: &FSet, g: &EdgeSet) -> Result<u64> {
    a.same_field(b)?;
    g.check_within(a, b)?;
    let f = a.field();
    let t = f.sub(f.elem(a_prime as u64)?, f.elem(b_prime as u64)?);
    Ok(representation_table(GroupLaw::Additive, f, g)[t as usize])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BsgCertificate {
    pub law: GroupLaw,
    #[serde(serialize_with = "ser_set")]
    pub a_prime: FSet,
    #[serde(serialize_with = "ser_set")]
    pub b_prime: FSet,
    /// Minimum over `A' × B'` of the representation count.
    pub min_reps: u64,
    pub ratio_a: f64,
    pub ratio_b: f64,
    /// `|A' ⊖ B'| / |A|`.
    pub diff_ratio: f64,
}

impl BsgCertificate {
    /// Recomputes `min_reps` by enumerating `G³` directly.
    pub fn recount_brute_force(&self, g: &EdgeSet) -> u64 {
        let f = self.a_prime.field();
        let law = self.law;
        let edges: Vec<Elem> = g.iter().map(|(x, y)| law.diff(f, x, y)).collect();
        let mut counts = vec![0u64; f.order() as usize];
        for &d1 in &edges {
            for &d2 in &edges {
                let u = law.diff(f, d1, d2);
                for &d3 in &edges {
                    counts[law.op(f, u, d3) as usize] += 1;
                }
            }
        }
        self.a_prime
            .iter()
            .flat_map(|x| self.b_prime.iter().map(move |y| (x, y)))
            .map(|(x, y)| counts[law.diff(f, x, y) as usize])
            .min()
            .unwrap_or(0)
    }
}

/// Degree-threshold plus popular-path refinement. No hypothesis checks;
/// `A` and `B` may differ in size here.
pub(crate) fn bsg_core(law: GroupLaw, a: &FSet, b: &FSet, g: &EdgeSet) -> Result<BsgCertificate> {
    a.same_field(b)?;
    g.check_within(a, b)?;
    if g.is_empty() {
        return Err(Error::EmptyInput);
    }
    let f = a.field();
    let av = a.to_vec();
    let bv = b.to_vec();
    let (na, nb, ne) = (av.len(), bv.len(), g.len() as u64);
    let ai = |x: Elem| av.binary_search(&x).expect("edge endpoint in A");
    let bi = |y: Elem| bv.binary_search(&y).expect("edge endpoint in B");

    let mut adj = vec![vec![0u64; nb]; na];
    let mut deg_a = vec![0u64; na];
    let mut deg_b = vec![0u64; nb];
    for (x, y) in g.iter() {
        let (i, j) = (ai(x), bi(y));
        adj[i][j] = 1;
        deg_a[i] += 1;
        deg_b[j] += 1;
    }
    // Keep vertices with degree >= |G| / (2|side|).
    let rows: Vec<usize> = (0..na).filter(|&i| 2 * na as u64 * deg_a[i] >= ne).collect();
    let cols: Vec<usize> = (0..nb).filter(|&j| 2 * nb as u64 * deg_b[j] >= ne).collect();

    // paths[i][j] = #(b1, a2) with a_i ~ b1 ~ a2 ~ b_j.
    let mut aa = vec![vec![0u64; na]; na];
    for &i in &rows {
        for k in 0..na {
            aa[i][k] = (0..nb).map(|j| adj[i][j] * adj[k][j]).sum();
        }
    }
    let paths: Vec<Vec<u64>> = rows
        .iter()
        .map(|&i| {
            cols.iter()
                .map(|&j| (0..na).map(|k| aa[i][k] * adj[k][j]).sum())
                .collect()
        })
        .collect();
    let total: u64 = paths.iter().flatten().sum();
    let cells = (rows.len() * cols.len()) as u64;
    // Popular pairs: at least half the mean path count.
    let good: Vec<Vec<usize>> = paths
        .iter()
        .map(|row| {
            (0..cols.len())
                .filter(|&c| 2 * cells * row[c] >= total)
                .collect()
        })
        .collect();
    let best = (0..rows.len())
        .max_by(|&x, &y| good[x].len().cmp(&good[y].len()).then(y.cmp(&x)))
        .expect("rows nonempty");
    let chosen_cols = &good[best];
    let chosen_rows: Vec<usize> = (0..rows.len())
        .filter(|&r| chosen_cols.iter().all(|c| good[r].binary_search(c).is_ok()))
        .collect();

    let a_prime = FSet::from_elems(f, chosen_rows.iter().map(|&r| av[rows[r]]))?;
    let b_prime = FSet::from_elems(f, chosen_cols.iter().map(|&c| bv[cols[c]]))?;
    let table = representation_table(law, f, g);
    let min_reps = a_prime
        .iter()
        .flat_map(|x| b_prime.iter().map(move |y| (x, y)))
        .map(|(x, y)| table[law.diff(f, x, y) as usize])
        .min()
        .unwrap_or(0);
    let diff = law.diff_set(&a_prime, &b_prime);
    Ok(BsgCertificate {
        law,
        ratio_a: a_prime.len() as f64 / na as f64,
        ratio_b: b_prime.len() as f64 / nb as f64,
        diff_ratio: diff.len() as f64 / na as f64,
        a_prime,
        b_prime,
        min_reps,
    })
}

/// Additive refinement under the hypotheses `|A| = |B|`, `|G| >= |A||B|/K`,
/// `|{a+b : (a,b) ∈ G}| <= K|A|`.
pub fn bsg_extract(a: &FSet, b: &FSet, g: &EdgeSet, k: f64) -> Result<BsgCertificate> {
    a.same_field(b)?;
    let fail = |reason: String| Err(Error::HypothesisFailed { k, reason });
    if a.len() != b.len() {
        return fail(format!("|A| = {} differs from |B| = {}", a.len(), b.len()));
    }
    g.check_within(a, b)?;
    if g.is_empty() || (g.len() as f64) * k < (a.len() * b.len()) as f64 {
        return fail(format!("|G| = {} below |A||B|/K", g.len()));
    }
    let f = a.field();
    let mut sums = FSet::empty(f);
    for (x, y) in g.iter() {
        sums.insert(f.add(x, y));
    }
    if sums.len() as f64 > k * a.len() as f64 {
        return fail(format!("restricted sumset has {} elements", sums.len()));
    }
    bsg_core(GroupLaw::Additive, a, b, g)
}

/// Edges `(a, b)` whose combination `a ⊕ b` has at least half the mean
/// representation count in `A ⊕ B`.
pub(crate) fn popular_graph(law: GroupLaw, a: &FSet, b: &FSet) -> EdgeSet {
    let f = a.field();
    let mut reps = vec![0u64; f.order() as usize];
    for x in a {
        for y in b {
            reps[law.op(f, x, y) as usize] += 1;
        }
    }
    let distinct = reps.iter().filter(|&&c| c > 0).count() as u64;
    let pairs = (a.len() * b.len()) as u64;
    let edges = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| (x, y)))
        .filter(|&(x, y)| 2 * distinct * reps[law.op(f, x, y) as usize] >= pairs)
        .collect();
    EdgeSet { edges }
}
