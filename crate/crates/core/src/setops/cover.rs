use serde::Serialize;

use super::{diffset, sumset};
use crate::error::{Error, Result};
use crate::field::{Elem, FSet};

/// A certificate that `target ⊆ translates + base`.
///
/// For covers built by [`ruzsa_cover`], `body` is the set whose disjoint
/// translates were packed and `base = body - body`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cover {
    #[serde(serialize_with = "ser_set")]
    pub translates: FSet,
    #[serde(serialize_with = "ser_set")]
    pub base: FSet,
    #[serde(serialize_with = "ser_set")]
    pub target: FSet,
    #[serde(serialize_with = "ser_set")]
    pub body: FSet,
}

pub(crate) fn ser_set<S: serde::Serializer>(s: &FSet, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq(s.iter())
}

impl Cover {
    /// Pointwise check of `target ⊆ translates + base`.
    pub fn covers(&self) -> bool {
        match sumset(&self.translates, &self.base) {
            Ok(span) => self.target.is_subset(&span),
            Err(_) => false,
        }
    }

    /// `|X|·|body| <= |body + target|`.
    pub fn packing_bound_holds(&self) -> bool {
        match sumset(&self.body, &self.target) {
            Ok(s) => self.translates.len() * self.body.len() <= s.len(),
            Err(_) => false,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.covers() && self.packing_bound_holds()
    }
}

/// Greedy maximal packing of disjoint translates `x + A`, `x ∈ B`, scanning
/// `B` in ascending order. Maximality gives `B ⊆ X + (A - A)`.
pub fn ruzsa_cover(a: &FSet, b: &FSet) -> Result<Cover> {
    a.same_field(b)?;
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    let f = a.field();
    let mut occupied = FSet::empty(f);
    let mut translates = FSet::empty(f);
    for x in b.iter() {
        let shifted = a.translate(x);
        if shifted.is_disjoint(&occupied) {
            occupied = occupied.union(&shifted)?;
            translates.insert(x);
        }
    }
    Ok(Cover {
        translates,
        base: diffset(a, a)?,
        target: b.clone(),
        body: a.clone(),
    })
}

/// Cover witnessing `x·A ⋐ A - A`, built as `ruzsa_cover(A, x·A)`.
pub fn goodness_cover(x: Elem, a: &FSet) -> Result<Cover> {
    let x = a.field().elem(x as u64)?;
    ruzsa_cover(a, &a.scale(x))
}
