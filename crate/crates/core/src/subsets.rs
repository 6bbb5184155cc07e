//! Lexicographic enumeration of `n`-subsets of `0..q`.

use crate::field::Elem;

/// `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Advances the increasing sequence `c` to the next combination below `hi`.
fn next_combination(c: &mut [Elem], hi: Elem) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < hi - (k - i) as Elem {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Calls `visit` on every sorted `n`-subset of `0..q` that starts with
/// `prefix`, with all other elements above `prefix`'s last entry.
pub(crate) fn for_each_extension(q: u32, n: usize, prefix: &[Elem], mut visit: impl FnMut(&[Elem])) {
    let start = prefix.last().map_or(0, |&x| x + 1);
    let rest = n - prefix.len();
    if (q - start) < rest as u32 {
        return;
    }
    let mut a: Vec<Elem> = prefix.to_vec();
    a.extend((0..rest as u32).map(|i| start + i));
    loop {
        visit(&a);
        if !next_combination(&mut a[prefix.len()..], q) {
            return;
        }
    }
}

/// Prefixes of length `min(2, n)` in lexicographic order.
pub(crate) fn prefixes(q: u32, n: usize) -> Vec<Vec<Elem>> {
    match n {
        0 => vec![vec![]],
        1 => (0..q).map(|x| vec![x]).collect(),
        _ => (0..q)
            .flat_map(|x| (x + 1..q).map(move |y| vec![x, y]))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(13, 2), 78);
        assert_eq!(binomial(17, 4), 2380);
        assert_eq!(binomial(5, 7), 0);
        assert_eq!(binomial(60, 30), 118264581564861424);
    }

    #[test]
    fn extension_walk_is_lexicographic_and_complete() {
        let mut all = Vec::new();
        for p in prefixes(7, 3) {
            for_each_extension(7, 3, &p, |a| all.push(a.to_vec()));
        }
        assert_eq!(all.len(), 35);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}
