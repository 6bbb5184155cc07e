//! Prime field arithmetic and the dense subset type used by every other module.
//!
//! Field elements are plain `u32` residues. Every value handed out by this
//! module is fully reduced into `[0, q)`.

use std::fmt;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Residue of `Z/qZ`, always reduced.
pub type Elem = u32;

/// The prime field `Z/qZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeField {
    q: u32,
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self> {
        if q > u32::MAX as u64 || !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(PrimeField { q: q as u32 })
    }

    #[inline]
    pub fn order(self) -> u32 {
        self.q
    }

    /// Checks that `x` is a reduced residue.
    pub fn elem(self, x: u64) -> Result<Elem> {
        if x < self.q as u64 {
            Ok(x as Elem)
        } else {
            Err(Error::NotReduced { value: x, q: self.q })
        }
    }

    /// Reduces an arbitrary signed integer.
    #[inline]
    pub fn reduce(self, x: i64) -> Elem {
        x.rem_euclid(self.q as i64) as Elem
    }

    #[inline]
    pub fn add(self, a: Elem, b: Elem) -> Elem {
        let s = a as u64 + b as u64;
        let q = self.q as u64;
        (if s >= q { s - q } else { s }) as Elem
    }

    #[inline]
    pub fn sub(self, a: Elem, b: Elem) -> Elem {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.q as u64 - b as u64) as Elem
        }
    }

    #[inline]
    pub fn neg(self, a: Elem) -> Elem {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: Elem, b: Elem) -> Elem {
        ((a as u64 * b as u64) % self.q as u64) as Elem
    }

    pub fn pow(self, base: Elem, mut exp: u64) -> Elem {
        let q = self.q as u64;
        let mut b = base as u64 % q;
        let mut acc = 1 % q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % q;
            }
            b = b * b % q;
            exp >>= 1;
        }
        acc as Elem
    }

    pub fn inv(self, x: Elem) -> Result<Elem> {
        if x.is_multiple_of(self.q) {
            return Err(Error::ZeroInverse);
        }
        // Extended Euclid on (x, q).
        let (mut r0, mut r1) = (self.q as i64, x as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let k = r0 / r1;
            (r0, r1) = (r1, r0 - k * r1);
            (t0, t1) = (t1, t0 - k * t1);
        }
        Ok(self.reduce(t0))
    }

    pub fn div(self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Euler criterion: `x^((q-1)/2)` mapped to {-1, 0, +1}.
    pub fn legendre(self, x: Elem) -> i8 {
        let x = x % self.q;
        if x == 0 {
            return 0;
        }
        if self.q == 2 {
            return 1;
        }
        let e = self.pow(x, (self.q as u64 - 1) / 2);
        if e == 1 {
            1
        } else {
            -1
        }
    }

    pub fn is_square(self, x: Elem) -> bool {
        self.legendre(x) >= 0
    }

    /// A square root of `x`, if one exists (brute force; desk-scale fields only).
    pub fn sqrt(self, x: Elem) -> Option<Elem> {
        (0..self.q).find(|&r| self.mul(r, r) == x % self.q)
    }

    pub fn elements(self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    pub fn nonzero(self) -> impl Iterator<Item = Elem> {
        1..self.q
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

/// Alias for [`PrimeField::new`].
pub fn make_field(q: u64) -> Result<PrimeField> {
    PrimeField::new(q)
}

const WORD: usize = 64;

#[inline]
fn words_for(q: u32) -> usize {
    (q as usize).div_ceil(WORD)
}

/// Dense subset of `Z/qZ` backed by 64-bit blocks, with a cached cardinality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FSet {
    field: PrimeField,
    words: Vec<u64>,
    card: usize,
}

impl fmt::Debug for FSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FSet(q={}, ", self.field.q)?;
        f.debug_set().entries(self.iter()).finish()?;
        write!(f, ")")
    }
}

impl PartialOrd for FSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by field, then lexicographically on the ascending element lists.
impl Ord for FSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.field
            .cmp(&other.field)
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl FSet {
    pub fn empty(field: PrimeField) -> Self {
        FSet {
            field,
            words: vec![0; words_for(field.q)],
            card: 0,
        }
    }

    pub fn full(field: PrimeField) -> Self {
        let mut s = Self::empty(field);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.mask_tail();
        s.card = field.q as usize;
        s
    }

    pub fn singleton(field: PrimeField, x: Elem) -> Result<Self> {
        Self::from_elems(field, [x])
    }

    /// Builds a set from residues, rejecting unreduced values.
    pub fn from_elems<I: IntoIterator<Item = Elem>>(field: PrimeField, elems: I) -> Result<Self> {
        let mut s = Self::empty(field);
        for x in elems {
            field.elem(x as u64)?;
            s.insert(x);
        }
        Ok(s)
    }

    /// Builds a set from arbitrary integers, reducing each one.
    pub fn from_integers<I: IntoIterator<Item = i64>>(field: PrimeField, elems: I) -> Self {
        let mut s = Self::empty(field);
        for x in elems {
            s.insert(field.reduce(x));
        }
        s
    }

    pub(crate) fn from_words(field: PrimeField, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(field.q));
        let mut s = FSet {
            field,
            words,
            card: 0,
        };
        s.mask_tail();
        s.recount();
        s
    }

    /// Uniform `n`-subset drawn from a seeded ChaCha stream.
    pub fn random(field: PrimeField, n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(field, n, &mut rng)
    }

    pub fn random_with<R: Rng + ?Sized>(field: PrimeField, n: usize, rng: &mut R) -> Result<Self> {
        let q = field.q as usize;
        if n > q {
            return Err(Error::SizeOutOfRange { n, q: field.q });
        }
        let picks = index::sample(rng, q, n);
        Ok(Self::from_elems(field, picks.into_iter().map(|i| i as Elem)).expect("indices are reduced"))
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.card
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    pub fn is_full(&self) -> bool {
        self.card == self.field.q as usize
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        x < self.field.q && (self.words[x as usize / WORD] >> (x as usize % WORD)) & 1 == 1
    }

    /// Inserts a reduced element; returns whether it was new.
    pub fn insert(&mut self, x: Elem) -> bool {
        assert!(x < self.field.q, "element {x} not reduced mod {}", self.field.q);
        let (w, b) = (x as usize / WORD, x as usize % WORD);
        let fresh = (self.words[w] >> b) & 1 == 0;
        if fresh {
            self.words[w] |= 1 << b;
            self.card += 1;
        }
        fresh
    }

    pub fn remove(&mut self, x: Elem) -> bool {
        if !self.contains(x) {
            return false;
        }
        self.words[x as usize / WORD] &= !(1 << (x as usize % WORD));
        self.card -= 1;
        true
    }

    /// Ascending iteration.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<Elem> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<Elem> {
        self.iter().next()
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn popcount(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn recount(&mut self) {
        self.card = self.popcount();
    }

    fn mask_tail(&mut self) {
        let rem = self.field.q as usize % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn same_field(&self, other: &FSet) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field.q,
                right: other.field.q,
            })
        }
    }

    pub fn union(&self, other: &FSet) -> Result<FSet> {
        self.same_field(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        Ok(FSet::from_words(self.field, words))
    }

    pub fn intersection(&self, other: &FSet) -> Result<FSet> {
        self.same_field(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        Ok(FSet::from_words(self.field, words))
    }

    pub fn is_subset(&self, other: &FSet) -> bool {
        self.field == other.field && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &FSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// The translate `{a + s}`.
    pub fn translate(&self, s: Elem) -> FSet {
        let mut words = vec![0; self.words.len()];
        or_rotated_into(&mut words, &self.words, s % self.field.q, self.field.q);
        FSet {
            field: self.field,
            words,
            card: self.card,
        }
    }

    /// The reflection `{-a}`.
    pub fn negate(&self) -> FSet {
        let f = self.field;
        let mut out = FSet::empty(f);
        for x in self.iter() {
            out.insert(f.neg(x));
        }
        out
    }

    /// `{s * a}` for any scalar, including zero.
    pub fn scale(&self, s: Elem) -> FSet {
        let f = self.field;
        let mut out = FSet::empty(f);
        for x in self.iter() {
            out.insert(f.mul(s, x));
        }
        out
    }
}

impl<'a> IntoIterator for &'a FSet {
    type Item = Elem;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = Elem;
    fn next(&mut self) -> Option<Elem> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some((self.idx * WORD + b) as Elem);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// `dst |= src` cyclically rotated up by `s` within `q` bits. `src` must have
/// no bits at or above `q`.
pub(crate) fn or_rotated_into(dst: &mut [u64], src: &[u64], s: u32, q: u32) {
    if s == 0 {
        for (d, w) in dst.iter_mut().zip(src) {
            *d |= w;
        }
        return;
    }
    or_shift_up(dst, src, s as usize);
    or_shift_down(dst, src, (q - s) as usize);
    let rem = q as usize % WORD;
    if rem != 0 {
        if let Some(last) = dst.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
}

/// Bit `i` of `src` lands on bit `i + s` (bits past the end are dropped).
fn or_shift_up(dst: &mut [u64], src: &[u64], s: usize) {
    let (ws, bs) = (s / WORD, s % WORD);
    let n = dst.len();
    for j in ws..n {
        let lo = src[j - ws];
        let mut v = lo << bs;
        if bs != 0 && j > ws {
            v |= src[j - ws - 1] >> (WORD - bs);
        }
        dst[j] |= v;
    }
}

/// Bit `i` of `src` lands on bit `i - r` (bits below `r` are dropped).
fn or_shift_down(dst: &mut [u64], src: &[u64], r: usize) {
    let (ws, bs) = (r / WORD, r % WORD);
    let n = dst.len();
    for j in 0..n.saturating_sub(ws) {
        let mut v = src[j + ws] >> bs;
        if bs != 0 && j + ws + 1 < n {
            v |= src[j + ws + 1] << (WORD - bs);
        }
        dst[j] |= v;
    }
}
