//! Partitions, subsets, multiset permutations and Kostka numbers.

use std::collections::HashMap;

/// Partitions of `total` with at most `max_len` parts, each at most `max_part`,
/// as weakly decreasing vectors padded with zeros to `max_len`.
pub fn partitions_in_box(total: usize, max_len: usize, max_part: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, len: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let slots = len - cur.len();
        if rem > slots * cap {
            return;
        }
        for p in (0..=cap.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, len, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, max_len, max_part, &mut Vec::with_capacity(max_len), &mut out);
    out
}

/// All partitions fitting in a `max_len x max_part` box, any size.
pub fn all_partitions_in_box(max_len: usize, max_part: usize) -> Vec<Vec<usize>> {
    (0..=max_len * max_part)
        .flat_map(|s| partitions_in_box(s, max_len, max_part))
        .collect()
}

/// Strictly decreasing sequences of length `len` with entries in `0..=max_entry`.
pub fn strict_sequences(len: usize, max_entry: usize) -> Vec<Vec<usize>> {
    subsets(max_entry + 1, len)
        .into_iter()
        .map(|s| s.into_iter().rev().collect())
        .collect()
}

/// Increasing `k`-subsets of `0..n`, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Distinct permutations of a multiset, in lexicographic order.
pub fn multiset_permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = items.to_vec();
    cur.sort_unstable();
    let n = cur.len();
    let mut out = vec![cur.clone()];
    while let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) {
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

/// Compositions of length `len` with entries in `0..=max_entry`.
pub fn compositions(len: usize, max_entry: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max_entry).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

/// Binomial coefficient.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Memoised Kostka numbers `K_{shape, content}`: the number of semistandard
/// tableaux of the given shape whose content is the given weak composition.
#[derive(Default)]
pub struct Kostka {
    memo: HashMap<(Vec<usize>, Vec<usize>), u64>,
}

impl Kostka {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, shape: &[usize], content: &[usize]) -> u64 {
        let shape: Vec<usize> = shape.iter().copied().filter(|&p| p > 0).collect();
        let content: Vec<usize> = content.iter().copied().filter(|&c| c > 0).collect();
        if shape.iter().sum::<usize>() != content.iter().sum::<usize>() {
            return 0;
        }
        self.rec(shape, content)
    }

    fn rec(&mut self, shape: Vec<usize>, mut content: Vec<usize>) -> u64 {
        let Some(last) = content.pop() else {
            return u64::from(shape.is_empty());
        };
        if shape.len() > content.len() + 1 {
            return 0;
        }
        let key = (shape.clone(), {
            let mut c = content.clone();
            c.push(last);
            c
        });
        if let Some(v) = self.memo.get(&key) {
            return *v;
        }
        // remove a horizontal strip of size `last` holding the largest entry
        let mut total = 0;
        let mut inner = vec![0usize; shape.len()];
        fn strips(shape: &[usize], row: usize, rem: usize, inner: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if row == shape.len() {
                if rem == 0 {
                    out.push(inner.iter().copied().filter(|&p| p > 0).collect());
                }
                return;
            }
            let lower = shape.get(row + 1).copied().unwrap_or(0);
            for take in 0..=(shape[row] - lower).min(rem) {
                inner[row] = shape[row] - take;
                strips(shape, row + 1, rem - take, inner, out);
            }
        }
        let mut cands = Vec::new();
        strips(&shape, 0, last, &mut inner, &mut cands);
        for c in cands {
            total += self.rec(c, content.clone());
        }
        self.memo.insert(key, total);
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(partitions_in_box(4, 4, 4).len(), 5);
        assert_eq!(partitions_in_box(4, 2, 3).len(), 2);
        assert_eq!(subsets(5, 2).len(), 10);
        assert_eq!(multiset_permutations(&[0, 1, 1]).len(), 3);
        assert_eq!(strict_sequences(2, 2), vec![vec![1, 0], vec![2, 0], vec![2, 1]]);
        assert_eq!(binomial(6, 3), 20);
    }

    #[test]
    fn kostka_values() {
        let mut k = Kostka::new();
        assert_eq!(k.get(&[2, 1], &[1, 1, 1]), 2);
        assert_eq!(k.get(&[3], &[1, 1, 1]), 1);
        assert_eq!(k.get(&[1, 1, 1], &[1, 1, 1]), 1);
        assert_eq!(k.get(&[2, 2], &[2, 1, 1]), 1);
        assert_eq!(k.get(&[2, 1, 1], &[2, 2]), 0);
        assert_eq!(k.get(&[3, 2], &[1, 2, 2]), 2);
        assert_eq!(k.get(&[], &[0, 0]), 1);
    }
}
