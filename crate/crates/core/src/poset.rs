//! Finite posets on dense element ids.
//!
//! A [`FinitePoset`] stores its cover relation in both directions together with
//! the full order relation as bit rows, so comparability queries are O(1).
//! Elements are `0..len()`; every element also carries a display name.
//!
//! The rectangle `[a]x[b]` is built by [`product_of_chains`]. Its element ids are
//! column-major: `(i, j)` has id `(j - 1) * a + (i - 1)`, so the id order
//! `(1,1), (2,1), ..., (a,1), (1,2), ...` is itself a linear extension.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of a rectangle poset `[a]x[b]` with 1-based coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    pub a: usize,
    pub b: usize,
}

impl Grid {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::EmptyChain { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn len(&self) -> usize {
        self.a * self.b
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Length of a Stanley-Thomas word on this rectangle.
    pub fn word_len(&self) -> usize {
        self.a + self.b
    }

    /// Element id of `(i, j)`, `1 <= i <= a`, `1 <= j <= b`.
    pub fn id(&self, i: usize, j: usize) -> usize {
        debug_assert!((1..=self.a).contains(&i) && (1..=self.b).contains(&j));
        (j - 1) * self.a + (i - 1)
    }

    pub fn coords(&self, id: usize) -> (usize, usize) {
        (id % self.a + 1, id / self.a + 1)
    }

    /// The `k`th positive fiber `{(k, l) : 1 <= l <= b}`, ordered by `l`.
    pub fn positive_fiber(&self, k: usize) -> Vec<usize> {
        (1..=self.b).map(|l| self.id(k, l)).collect()
    }

    /// The `l`th negative fiber `{(k, l) : 1 <= k <= a}`, ordered by `k`.
    pub fn negative_fiber(&self, l: usize) -> Vec<usize> {
        (1..=self.a).map(|k| self.id(k, l)).collect()
    }
}

/// Positive fibers, then negative fibers, as lists of element ids.
pub type FiberLists = (Vec<Vec<usize>>, Vec<Vec<usize>>);

/// All positive fibers (rows) and all negative fibers (columns) of `[a]x[b]`.
pub fn fibers(a: usize, b: usize) -> Result<FiberLists> {
    let grid = Grid::new(a, b)?;
    let pos = (1..=a).map(|k| grid.positive_fiber(k)).collect();
    let neg = (1..=b).map(|l| grid.negative_fiber(l)).collect();
    Ok((pos, neg))
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct BitRows {
    words: usize,
    bits: Vec<u64>,
}

impl BitRows {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self { words, bits: vec![0; n * words] }
    }

    fn set(&mut self, row: usize, col: usize) {
        self.bits[row * self.words + col / 64] |= 1 << (col % 64);
    }

    fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.words + col / 64] >> (col % 64) & 1 == 1
    }

    fn or_row(&mut self, dst: usize, src: usize) {
        for w in 0..self.words {
            let v = self.bits[src * self.words + w];
            self.bits[dst * self.words + w] |= v;
        }
    }
}

/// A finite poset, immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    names: Vec<String>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    // leq.get(x, y) iff x <= y
    leq: BitRows,
    extension: Vec<usize>,
    grid: Option<Grid>,
}

/// Builds a poset on elements `0..n` from cover pairs `(lower, upper)`.
///
/// Redundant pairs (implied by transitivity) are dropped.
pub fn build_poset(n: usize, covers: &[(usize, usize)]) -> Result<FinitePoset> {
    let names = (0..n).map(|i| i.to_string()).collect();
    FinitePoset::from_parts(names, covers, None)
}

/// Like [`build_poset`] but with named elements.
pub fn build_named_poset<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<FinitePoset> {
    let mut index = HashMap::new();
    for (i, e) in elements.iter().enumerate() {
        if index.insert(e.as_ref().to_string(), i).is_some() {
            return Err(Error::DuplicateElement { name: e.as_ref().to_string() });
        }
    }
    let lookup =
        |s: &S| index.get(s.as_ref()).copied().ok_or_else(|| Error::DanglingElement { name: s.as_ref().to_string() });
    let pairs = covers.iter().map(|(lo, hi)| Ok((lookup(lo)?, lookup(hi)?))).collect::<Result<Vec<_>>>()?;
    let names = elements.iter().map(|e| e.as_ref().to_string()).collect();
    FinitePoset::from_parts(names, &pairs, None)
}

/// The rectangle poset `[a]x[b]` with componentwise order.
pub fn product_of_chains(a: usize, b: usize) -> Result<RectanglePoset> {
    let grid = Grid::new(a, b)?;
    let mut covers = Vec::with_capacity(2 * a * b);
    for j in 1..=b {
        for i in 1..=a {
            if i < a {
                covers.push((grid.id(i, j), grid.id(i + 1, j)));
            }
            if j < b {
                covers.push((grid.id(i, j), grid.id(i, j + 1)));
            }
        }
    }
    let names = (0..grid.len())
        .map(|id| {
            let (i, j) = grid.coords(id);
            format!("({i},{j})")
        })
        .collect();
    let poset = FinitePoset::from_parts(names, &covers, Some(grid))?;
    Ok(RectanglePoset { grid, poset })
}

impl FinitePoset {
    fn from_parts(names: Vec<String>, covers: &[(usize, usize)], grid: Option<Grid>) -> Result<Self> {
        let n = names.len();
        let mut seen = HashSet::new();
        let mut succ = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for &(lo, hi) in covers {
            for id in [lo, hi] {
                if id >= n {
                    return Err(Error::DanglingElement { name: id.to_string() });
                }
            }
            if lo == hi {
                return Err(Error::Cycle { element: lo });
            }
            if !seen.insert((lo, hi)) {
                return Err(Error::DuplicateCover { lower: lo, upper: hi });
            }
            succ[lo].push(hi);
            indegree[hi] += 1;
        }

        // Kahn's algorithm, smallest ready id first.
        let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&x| indegree[x] == 0).map(Reverse).collect();
        let mut extension = Vec::with_capacity(n);
        while let Some(Reverse(x)) = ready.pop() {
            extension.push(x);
            for &y in &succ[x] {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    ready.push(Reverse(y));
                }
            }
        }
        if extension.len() < n {
            let element = (0..n).find(|&x| indegree[x] > 0).unwrap_or(0);
            return Err(Error::Cycle { element });
        }

        let mut leq = BitRows::new(n);
        for &x in extension.iter().rev() {
            leq.set(x, x);
            for &y in &succ[x] {
                leq.or_row(x, y);
            }
        }

        let mut lower = vec![Vec::new(); n];
        let mut upper = vec![Vec::new(); n];
        for x in 0..n {
            for &y in &succ[x] {
                let implied = succ[x].iter().any(|&z| z != y && leq.get(z, y));
                if !implied {
                    upper[x].push(y);
                    lower[y].push(x);
                }
            }
        }
        for v in lower.iter_mut().chain(upper.iter_mut()) {
            v.sort_unstable();
        }

        Ok(Self { names, lower, upper, leq, extension, grid })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Rectangle shape, when the poset was built by [`product_of_chains`].
    pub fn grid(&self) -> Option<Grid> {
        self.grid
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq.get(x, y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// Elements covered by `x`.
    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    /// Elements covering `x`.
    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    /// All cover pairs `(lower, upper)` of the transitively reduced relation.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = (0..self.len()).flat_map(|x| self.upper[x].iter().map(move |&y| (x, y))).collect();
        out.sort_unstable();
        out
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.lower[x].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.upper[x].is_empty()).collect()
    }

    /// The deterministic linear extension: topological order, ties broken by id.
    pub fn linear_extension(&self) -> &[usize] {
        &self.extension
    }

    /// A uniformly chosen next element at each step of a topological sort.
    pub fn random_linear_extension<G: Rng + ?Sized>(&self, rng: &mut G) -> Vec<usize> {
        let mut indegree: Vec<usize> = self.lower.iter().map(Vec::len).collect();
        let mut ready: Vec<usize> = (0..self.len()).filter(|&x| indegree[x] == 0).collect();
        let mut out = Vec::with_capacity(self.len());
        while !ready.is_empty() {
            ready.shuffle(rng);
            let x = ready.pop().expect("nonempty");
            out.push(x);
            for &y in &self.upper[x] {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    ready.push(y);
                }
            }
        }
        out
    }

    pub fn is_linear_extension(&self, order: &[usize]) -> bool {
        if order.len() != self.len() {
            return false;
        }
        let mut pos = vec![usize::MAX; self.len()];
        for (k, &x) in order.iter().enumerate() {
            if x >= self.len() || pos[x] != usize::MAX {
                return false;
            }
            pos[x] = k;
        }
        self.covers().iter().all(|&(x, y)| pos[x] < pos[y])
    }

    pub fn is_antichain(&self, set: &[usize]) -> bool {
        self.antichain_witness(set).is_none()
    }

    fn antichain_witness(&self, set: &[usize]) -> Option<(usize, usize)> {
        for (k, &x) in set.iter().enumerate() {
            for &y in &set[k + 1..] {
                if self.comparable(x, y) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Every antichain exactly once, sorted by size then lexicographically.
    pub fn antichains(&self) -> Vec<Antichain> {
        fn extend(p: &FinitePoset, next: usize, current: &mut Vec<usize>, out: &mut Vec<Antichain>) {
            out.push(Antichain(current.clone()));
            for x in next..p.len() {
                if current.iter().all(|&y| !p.comparable(x, y)) {
                    current.push(x);
                    extend(p, x + 1, current, out);
                    current.pop();
                }
            }
        }
        let mut out = Vec::new();
        extend(self, 0, &mut Vec::new(), &mut out);
        out.sort_by(|s, t| s.0.len().cmp(&t.0.len()).then_with(|| s.0.cmp(&t.0)));
        out
    }

    /// All maximal chains of the poset, each listed bottom to top.
    pub fn maximal_chains(&self) -> Vec<Vec<usize>> {
        self.minimal_elements().into_iter().flat_map(|m| self.chains_up_from(m)).collect()
    }

    /// Saturated chains from a minimal element up to `x`, listed bottom to top.
    pub fn chains_down_to(&self, x: usize) -> Vec<Vec<usize>> {
        if self.lower[x].is_empty() {
            return vec![vec![x]];
        }
        let mut out = Vec::new();
        for &y in &self.lower[x] {
            for mut c in self.chains_down_to(y) {
                c.push(x);
                out.push(c);
            }
        }
        out
    }

    /// Saturated chains from `x` up to a maximal element, listed bottom to top.
    pub fn chains_up_from(&self, x: usize) -> Vec<Vec<usize>> {
        if self.upper[x].is_empty() {
            return vec![vec![x]];
        }
        let mut out = Vec::new();
        for &y in &self.upper[x] {
            for c in self.chains_up_from(y) {
                let mut chain = Vec::with_capacity(c.len() + 1);
                chain.push(x);
                chain.extend(c);
                out.push(chain);
            }
        }
        out
    }

    fn check_ids(&self, set: &[usize]) -> Result<()> {
        match set.iter().find(|&&x| x >= self.len()) {
            Some(&id) => Err(Error::ElementOutOfRange { id, len: self.len() }),
            None => Ok(()),
        }
    }
}

/// The rectangle poset `[a]x[b]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectanglePoset {
    grid: Grid,
    poset: FinitePoset,
}

impl RectanglePoset {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn a(&self) -> usize {
        self.grid.a
    }

    pub fn b(&self) -> usize {
        self.grid.b
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn id(&self, i: usize, j: usize) -> usize {
        self.grid.id(i, j)
    }

    pub fn coords(&self, id: usize) -> (usize, usize) {
        self.grid.coords(id)
    }

    pub fn into_poset(self) -> FinitePoset {
        self.poset
    }
}

impl AsRef<FinitePoset> for RectanglePoset {
    fn as_ref(&self) -> &FinitePoset {
        &self.poset
    }
}

macro_rules! subset_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub struct $name(Vec<usize>);

        impl $name {
            pub fn members(&self) -> &[usize] {
                &self.0
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn contains(&self, x: usize) -> bool {
                self.0.binary_search(&x).is_ok()
            }

            pub(crate) fn from_sorted(v: Vec<usize>) -> Self {
                debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
                Self(v)
            }

            fn normalized(mut v: Vec<usize>) -> Vec<usize> {
                v.sort_unstable();
                v.dedup();
                v
            }
        }
    };
}

subset_type!(
    /// A set of pairwise incomparable elements.
    Antichain
);
subset_type!(
    /// A downward-closed set.
    OrderIdeal
);
subset_type!(
    /// An upward-closed set.
    OrderFilter
);

impl Antichain {
    pub fn new(poset: &FinitePoset, members: Vec<usize>) -> Result<Self> {
        let v = Self::normalized(members);
        poset.check_ids(&v)?;
        if let Some((x, y)) = poset.antichain_witness(&v) {
            return Err(Error::NotAntichain { x, y });
        }
        Ok(Self(v))
    }

    /// Indicator vector over all elements.
    pub fn indicator(&self, len: usize) -> Vec<bool> {
        let mut v = vec![false; len];
        for &x in &self.0 {
            v[x] = true;
        }
        v
    }
}

impl OrderIdeal {
    pub fn new(poset: &FinitePoset, members: Vec<usize>) -> Result<Self> {
        let v = Self::normalized(members);
        poset.check_ids(&v)?;
        for &m in &v {
            for &below in poset.lower_covers(m) {
                if v.binary_search(&below).is_err() {
                    return Err(Error::NotIdeal { member: m, below });
                }
            }
        }
        Ok(Self(v))
    }
}

impl OrderFilter {
    pub fn new(poset: &FinitePoset, members: Vec<usize>) -> Result<Self> {
        let v = Self::normalized(members);
        poset.check_ids(&v)?;
        for &m in &v {
            for &above in poset.upper_covers(m) {
                if v.binary_search(&above).is_err() {
                    return Err(Error::NotFilter { member: m, above });
                }
            }
        }
        Ok(Self(v))
    }
}
