//! Canonical vertex orderings for small complete edge-coloured structures.
//!
//! A structure on `n` points is given by a symmetric colour function. Its
//! key under an ordering `π` is the upper triangle read column by column:
//! `c(π0,π1), c(π0,π2), c(π1,π2), c(π0,π3), …`. Placing points one at a time
//! fixes the key one column at a time, which is what lets branch and bound
//! prune. The canonical ordering minimises the key, with the first `fixed`
//! points pinned in place.

/// Result of canonicalisation: the minimal key and an ordering realising it
/// (`order[pos]` is the original point placed at `pos`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub key: Vec<u32>,
    pub order: Vec<usize>,
}

pub fn canonical_order<F>(n: usize, fixed: usize, colour: F) -> Canonical
where
    F: Fn(usize, usize) -> u32,
{
    assert!(fixed <= n);
    let mut order: Vec<usize> = (0..fixed).collect();
    let mut key: Vec<u32> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 1..fixed {
        for i in 0..j {
            key.push(colour(i, j));
        }
    }
    let mut used = vec![false; n];
    used[..fixed].fill(true);
    let mut best: Option<Canonical> = None;
    descend(n, &colour, &mut used, &mut order, &mut key, &mut best);
    best.expect("at least one ordering exists")
}

fn descend<F: Fn(usize, usize) -> u32>(
    n: usize,
    colour: &F,
    used: &mut [bool],
    order: &mut Vec<usize>,
    key: &mut Vec<u32>,
    best: &mut Option<Canonical>,
) {
    if order.len() == n {
        if best.as_ref().is_none_or(|b| *key < b.key) {
            *best = Some(Canonical {
                key: key.clone(),
                order: order.clone(),
            });
        }
        return;
    }
    for p in 0..n {
        if used[p] {
            continue;
        }
        let start = key.len();
        key.extend(order.iter().map(|&q| colour(q, p)));
        let promising = best
            .as_ref()
            .is_none_or(|b| key[..] <= b.key[..key.len()]);
        if promising {
            used[p] = true;
            order.push(p);
            descend(n, colour, used, order, key, best);
            order.pop();
            used[p] = false;
        }
        key.truncate(start);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: usize, fixed: usize, c: &dyn Fn(usize, usize) -> u32) -> Vec<u32> {
        fn perms(items: Vec<usize>) -> Vec<Vec<usize>> {
            if items.is_empty() {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for i in 0..items.len() {
                let mut rest = items.clone();
                let x = rest.remove(i);
                for mut p in perms(rest) {
                    p.insert(0, x);
                    out.push(p);
                }
            }
            out
        }
        perms((fixed..n).collect())
            .into_iter()
            .map(|tail| {
                let order: Vec<usize> = (0..fixed).chain(tail).collect();
                let mut key = Vec::new();
                for j in 1..n {
                    for i in 0..j {
                        key.push(c(order[i], order[j]));
                    }
                }
                key
            })
            .min()
            .unwrap()
    }

    #[test]
    fn matches_exhaustive_minimum() {
        // Deterministic pseudo-random symmetric colourings.
        let mut state = 12345u64;
        for trial in 0..200 {
            let n = 1 + trial % 6;
            let fixed = trial % (n + 1);
            let mut m = vec![vec![0u32; n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let v = ((state >> 33) % 3) as u32 + 1;
                    m[i][j] = v;
                    m[j][i] = v;
                }
            }
            let c = |i: usize, j: usize| m[i][j];
            let got = canonical_order(n, fixed, c);
            assert_eq!(got.key, brute(n, fixed, &c), "n={n} fixed={fixed}");
            let mut key = Vec::new();
            for j in 1..n {
                for i in 0..j {
                    key.push(c(got.order[i], got.order[j]));
                }
            }
            assert_eq!(key, got.key);
            assert_eq!(&got.order[..fixed], &(0..fixed).collect::<Vec<_>>()[..]);
        }
    }
}
