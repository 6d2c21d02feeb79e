//! Paths in tensor powers of the level-zero fundamental crystal `{z^mu v_eps}`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The element `z^mu v_eps`.
pub type Letter = (i32, i8);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PathElement {
    pub entries: Vec<Letter>,
}

impl PathElement {
    pub fn new(entries: Vec<Letter>) -> Self {
        PathElement { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn eps_sum(&self) -> i32 {
        self.entries.iter().map(|&(_, e)| e as i32).sum()
    }

    pub fn mu_sum(&self) -> i32 {
        self.entries.iter().map(|&(m, _)| m).sum()
    }

    /// Whether consecutive shifts differ by 1 after `(+, -)` and by 0 otherwise.
    pub fn is_adjacent(&self) -> bool {
        self.entries.windows(2).all(|w| {
            let step = if (w[0].1, w[1].1) == (1, -1) { 1 } else { 0 };
            w[1].0 - w[0].0 == step
        })
    }
}

/// `(h_1`-weight, `delta`-degree`)`.
pub fn path_weight(p: &PathElement) -> (i32, i32) {
    (-p.eps_sum(), p.mu_sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    E,
    F,
}

/// Which end of a tensor word the bracketing rule treats as the first factor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorRule {
    /// `f` acts on the leftmost unbracketed `+`.
    #[default]
    LeftFirst,
    /// The mirror image.
    RightFirst,
}

/// `(epsilon_i, phi_i)` of a single letter.
fn letter_string(i: u8, l: Letter) -> (u32, u32) {
    match (i, l.1) {
        (1, 1) | (0, -1) => (0, 1),
        _ => (1, 0),
    }
}

fn letter_op(i: u8, dir: Direction, l: Letter) -> Option<Letter> {
    match (i, dir, l.1) {
        (1, Direction::F, 1) => Some((l.0, -1)),
        (1, Direction::E, -1) => Some((l.0, 1)),
        (0, Direction::E, 1) => Some((l.0 + 1, -1)),
        (0, Direction::F, -1) => Some((l.0 - 1, 1)),
        _ => None,
    }
}

fn act_left_first(i: u8, dir: Direction, word: &[Letter]) -> Option<Vec<Letter>> {
    // unmatched '-' to the left, unmatched '+' to the right after cancelling "+-" pairs
    let mut open_plus: Vec<usize> = Vec::new();
    let mut free_minus: Vec<usize> = Vec::new();
    for (k, &l) in word.iter().enumerate() {
        let (eps, phi) = letter_string(i, l);
        for _ in 0..eps {
            if open_plus.pop().is_none() {
                free_minus.push(k);
            }
        }
        for _ in 0..phi {
            open_plus.push(k);
        }
    }
    let target = match dir {
        Direction::F => *open_plus.first()?,
        Direction::E => *free_minus.last()?,
    };
    let mut out = word.to_vec();
    out[target] = letter_op(i, dir, word[target])?;
    Some(out)
}

/// Kashiwara operator `e_i` or `f_i` on a word; `None` when the word is killed.
pub fn crystal_op(i: u8, dir: Direction, word: &PathElement, rule: TensorRule) -> Option<PathElement> {
    match rule {
        TensorRule::LeftFirst => act_left_first(i, dir, &word.entries).map(PathElement::new),
        TensorRule::RightFirst => {
            let rev: Vec<Letter> = word.entries.iter().rev().copied().collect();
            act_left_first(i, dir, &rev).map(|mut w| {
                w.reverse();
                PathElement::new(w)
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelData {
    pub xi0: u32,
    pub xi1: u32,
    pub eta1: u32,
    pub n: u32,
    pub m: i32,
}

impl LevelData {
    pub fn eps_target(&self) -> i32 {
        self.eta1 as i32 - self.xi1 as i32
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.xi1 as i64 - self.eta1 as i64;
        if self.n == 0 || d.abs() > self.n as i64 || (d - self.n as i64).rem_euclid(2) != 0 {
            return Err(Error::InvalidArgument(format!(
                "need n > 0, |xi1 - eta1| <= n and xi1 - eta1 = n mod 2, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// All paths with the adjacency rule, `sum mu = m` and `sum eps = eta1 - xi1`, in lexicographic order.
pub fn enumerate_paths(data: &LevelData) -> Result<Vec<PathElement>> {
    data.validate()?;
    let n = data.n as usize;
    let patterns: Vec<Vec<i8>> = (0..1u32 << n)
        .map(|bits| (0..n).map(|k| if bits >> k & 1 == 1 { -1 } else { 1 }).collect())
        .collect();
    let mut out: Vec<PathElement> = patterns
        .into_par_iter()
        .filter(|eps| eps.iter().map(|&e| e as i32).sum::<i32>() == data.eps_target())
        .filter_map(|eps| {
            // offsets of mu_l relative to mu_1
            let mut off = vec![0i32; n];
            for k in 1..n {
                off[k] = off[k - 1] + i32::from((eps[k - 1], eps[k]) == (1, -1));
            }
            let rest = data.m - off.iter().sum::<i32>();
            (rest.rem_euclid(n as i32) == 0).then(|| {
                let mu1 = rest / n as i32;
                PathElement::new(off.iter().zip(&eps).map(|(o, &e)| (mu1 + o, e)).collect())
            })
        })
        .collect();
    out.sort();
    debug_assert!(out.iter().all(|p| p
        .entries
        .iter()
        .all(|&(mu, _)| mu.abs() <= data.m.abs() + data.n as i32)));
    Ok(out)
}

/// Sign convention for the lower bound of the level restriction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBound {
    /// `min partial sum >= -xi1`.
    #[default]
    Negated,
    /// `min partial sum >= xi1`.
    AsPrinted,
}

pub fn passes_level_restriction(p: &PathElement, xi0: u32, xi1: u32, bound: LowerBound) -> bool {
    let mut s = 0;
    let mut hi = i32::MIN;
    let mut lo = i32::MAX;
    for &(_, e) in &p.entries {
        s += e as i32;
        hi = hi.max(s);
        lo = lo.min(s);
    }
    if p.entries.is_empty() {
        return true;
    }
    let floor = match bound {
        LowerBound::Negated => -(xi1 as i32),
        LowerBound::AsPrinted => xi1 as i32,
    };
    hi <= xi0 as i32 && lo >= floor
}

pub fn level_restrict(paths: &[PathElement], data: &LevelData, bound: LowerBound) -> Vec<PathElement> {
    paths
        .iter()
        .filter(|p| passes_level_restriction(p, data.xi0, data.xi1, bound))
        .cloned()
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Escapee {
    pub word: PathElement,
    pub op: String,
    pub image: PathElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub checked: usize,
    /// Images whose degree lies outside `degree_window`, which are not required to be members.
    pub left_window: usize,
    pub escapees: Vec<Escapee>,
    pub closed: bool,
}

/// Applies every `e_i`, `f_i` to every member. An image is an escapee when it is not null,
/// its degree lies in `degree_window`, and it is not a member.
pub fn closure_check(words: &BTreeSet<PathElement>, degree_window: (i32, i32), rule: TensorRule) -> ClosureReport {
    let mut checked = 0;
    let mut left_window = 0;
    let mut escapees = Vec::new();
    for w in words {
        for i in 0..=1u8 {
            for dir in [Direction::E, Direction::F] {
                checked += 1;
                let Some(img) = crystal_op(i, dir, w, rule) else {
                    continue;
                };
                let d = img.mu_sum();
                if d < degree_window.0 || d > degree_window.1 {
                    left_window += 1;
                } else if !words.contains(&img) {
                    let name = format!("{}{}", if dir == Direction::E { 'e' } else { 'f' }, i);
                    escapees.push(Escapee {
                        word: w.clone(),
                        op: name,
                        image: img,
                    });
                }
            }
        }
    }
    ClosureReport {
        checked,
        left_window,
        closed: escapees.is_empty(),
        escapees,
    }
}

/// All paths of length `n` with any sign pattern and total shift in `degree_window`.
pub fn path_set(n: u32, degree_window: (i32, i32)) -> Result<BTreeSet<PathElement>> {
    let mut out = BTreeSet::new();
    for m in degree_window.0..=degree_window.1 {
        for neg in 0..=n {
            let target = n as i32 - 2 * neg as i32;
            let data = LevelData {
                xi0: 0,
                xi1: if target < 0 { (-target) as u32 } else { 0 },
                eta1: target.max(0) as u32,
                n,
                m,
            };
            out.extend(enumerate_paths(&data)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[Letter]) -> PathElement {
        PathElement::new(v.to_vec())
    }

    #[test]
    fn single_letter_and_tensor_rules() {
        let r = TensorRule::LeftFirst;
        assert_eq!(
            crystal_op(1, Direction::F, &p(&[(0, 1), (0, 1)]), r),
            Some(p(&[(0, -1), (0, 1)]))
        );
        assert_eq!(crystal_op(1, Direction::E, &p(&[(0, 1), (0, 1)]), r), None);
        assert_eq!(crystal_op(0, Direction::F, &p(&[(0, -1)]), r), Some(p(&[(-1, 1)])));
        assert_eq!(crystal_op(0, Direction::E, &p(&[(0, 1)]), r), Some(p(&[(1, -1)])));
    }

    #[test]
    fn e_and_f_are_inverse() {
        let letters: Vec<Letter> = (-2..=2).flat_map(|m| [(m, 1i8), (m, -1i8)]).collect();
        let mut words: Vec<Vec<Letter>> = vec![vec![]];
        for _ in 0..3 {
            words = words
                .into_iter()
                .flat_map(|w| letters.iter().map(move |&l| [w.clone(), vec![l]].concat()))
                .collect();
            for w in &words {
                let w = PathElement::new(w.clone());
                for i in 0..=1 {
                    for rule in [TensorRule::LeftFirst, TensorRule::RightFirst] {
                        if let Some(f) = crystal_op(i, Direction::F, &w, rule) {
                            assert_eq!(crystal_op(i, Direction::E, &f, rule), Some(w.clone()));
                        }
                        if let Some(e) = crystal_op(i, Direction::E, &w, rule) {
                            assert_eq!(crystal_op(i, Direction::F, &e, rule), Some(w.clone()));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        let d = LevelData {
            xi0: 0,
            xi1: 1,
            eta1: 0,
            n: 1,
            m: 0,
        };
        assert_eq!(enumerate_paths(&d).unwrap(), vec![p(&[(0, -1)])]);
        let d = LevelData {
            xi0: 0,
            xi1: 0,
            eta1: 2,
            n: 2,
            m: 1,
        };
        assert!(enumerate_paths(&d).unwrap().is_empty());
        let d = LevelData {
            xi0: 0,
            xi1: 0,
            eta1: 0,
            n: 2,
            m: 0,
        };
        assert_eq!(enumerate_paths(&d).unwrap(), vec![p(&[(0, -1), (0, 1)])]);
        assert!(enumerate_paths(&LevelData {
            xi0: 0,
            xi1: 3,
            eta1: 0,
            n: 1,
            m: 0
        })
        .is_err());
    }

    #[test]
    fn restriction_examples() {
        let d = LevelData {
            xi0: 0,
            xi1: 1,
            eta1: 0,
            n: 1,
            m: 0,
        };
        let paths = enumerate_paths(&d).unwrap();
        assert_eq!(level_restrict(&paths, &d, LowerBound::Negated).len(), 1);
        let d0 = LevelData { xi1: 0, ..d };
        assert!(level_restrict(&paths, &d0, LowerBound::Negated).is_empty());
        assert!(level_restrict(&[], &d, LowerBound::Negated).is_empty());
    }

    #[test]
    fn weights() {
        assert_eq!(path_weight(&p(&[(0, -1)])), (1, 0));
        assert_eq!(path_weight(&p(&[(0, 1), (1, -1)])), (0, 1));
        assert_eq!(path_weight(&p(&[])), (0, 0));
    }

    #[test]
    fn path_sets_are_closed() {
        for n in 1..=3 {
            let set = path_set(n, (-3, 3)).unwrap();
            let r = closure_check(&set, (-3, 3), TensorRule::LeftFirst);
            assert!(r.closed, "{:?}", r.escapees.first());
            assert!(closure_check(&BTreeSet::new(), (0, 0), TensorRule::LeftFirst).closed);
        }
        let mut set = path_set(2, (-3, 3)).unwrap();
        set.remove(&p(&[(0, -1), (0, 1)]));
        assert!(!closure_check(&set, (-3, 3), TensorRule::LeftFirst).closed);
        let set = path_set(2, (-3, 3)).unwrap();
        assert!(!closure_check(&set, (-3, 3), TensorRule::RightFirst).closed);
    }
}
