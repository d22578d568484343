//! Integer partitions, permutations with their cycle structure, and set partitions.
//!
//! Enumeration orders are fixed so streamed output is reproducible:
//! partitions are lexicographic on their sorted parts, permutations are
//! lexicographic on their image sequences, and set partitions follow
//! restricted-growth-string order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::BigInt;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::rational::factorial;

/// A non-ordered tuple of positive integers, stored sorted non-decreasing.
///
/// `Ord` is the canonical total order used when sorting term keys: first by
/// sum, then by length, then lexicographically on the parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::invalid("partition parts must be positive"));
        }
        parts.sort_unstable();
        Ok(Partition { parts })
    }

    /// Caller guarantees every part is positive.
    pub(crate) fn from_parts_unchecked(mut parts: Vec<usize>) -> Self {
        debug_assert!(!parts.contains(&0));
        parts.sort_unstable();
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn max_part(&self) -> Option<usize> {
        self.parts.last().copied()
    }

    /// Multiplicity of each distinct part, in increasing part order.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for &p in &self.parts {
            *out.entry(p).or_insert(0) += 1;
        }
        out
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sum()
            .cmp(&other.sum())
            .then(self.parts.len().cmp(&other.parts.len()))
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Every partition of `k`, lexicographic on the sorted parts.
pub fn partitions_of(k: usize) -> Result<Vec<Partition>> {
    if k == 0 {
        return Err(Error::invalid("partitions_of requires k >= 1"));
    }
    fn extend(remaining: usize, min_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for part in min_part..=remaining {
            // the tail must still be able to hold parts >= `part`
            if remaining != part && remaining - part < part {
                continue;
            }
            prefix.push(part);
            extend(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(k, 1, &mut Vec::with_capacity(k), &mut out);
    Ok(out)
}

/// Order of the stabilizer of any ordering of `l` under coordinate permutation:
/// the product of the factorials of the part multiplicities.
pub fn stabilizer_count(l: &Partition) -> Result<BigInt> {
    if l.is_empty() {
        return Err(Error::invalid("stabilizer_count of an empty partition"));
    }
    Ok(l.multiplicities()
        .values()
        .map(|&m| factorial(m))
        .product())
}

pub fn length(l: &Partition) -> usize {
    l.len()
}

/// A bijection on `{0, .., m-1}`; `images[i]` is the image of `i`.
///
/// Displayed and constructed from one-based images to match cycle notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation {
            images: (0..m).collect(),
        }
    }

    /// Builds from zero-based images.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &i in &images {
            if i >= m || seen[i] {
                return Err(Error::invalid(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds from one-based images, e.g. `[2, 1]` for the transposition `(1 2)`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::invalid("one-based images must be positive"));
        }
        Self::new(images.iter().map(|i| i - 1).collect())
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based_images(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }

    pub fn cycles(&self) -> CycleDecomposition {
        cycle_decomposition(self)
    }

    pub fn sign(&self) -> i32 {
        sign(self)
    }
}

/// Lexicographic stream over `S_m`.
#[derive(Debug, Clone)]
pub struct Permutations {
    current: Option<Vec<usize>>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.current.as_mut()?;
        let out = Permutation {
            images: current.clone(),
        };
        if !next_lex_permutation(current) {
            self.current = None;
        }
        Some(out)
    }
}

/// Advances `v` to its lexicographic successor; false when `v` was the last one.
pub(crate) fn next_lex_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn permutations_of(m: usize, limits: &Limits) -> Result<Permutations> {
    if m == 0 {
        return Err(Error::invalid("permutations_of requires m >= 1"));
    }
    limits.check_permutations(m)?;
    Ok(Permutations {
        current: Some((0..m).collect()),
    })
}

/// Disjoint cycles of a permutation, fixed points included.
///
/// Canonical form: every cycle starts at its smallest element and cycles are
/// ordered by that element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleDecomposition {
    m: usize,
    cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    /// Builds from zero-based cycles; fixed points may be omitted.
    pub fn new(m: usize, cycles: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; m];
        for c in &cycles {
            if c.is_empty() {
                return Err(Error::invalid("empty cycle"));
            }
            for &i in c {
                if i >= m || seen[i] {
                    return Err(Error::invalid(format!("cycles {cycles:?} are not disjoint on {m} points")));
                }
                seen[i] = true;
            }
        }
        let mut all = cycles;
        all.extend((0..m).filter(|&i| !seen[i]).map(|i| vec![i]));
        Ok(Self::canonical(m, all))
    }

    fn canonical(m: usize, mut cycles: Vec<Vec<usize>>) -> Self {
        for c in &mut cycles {
            let pos = c
                .iter()
                .enumerate()
                .min_by_key(|(_, &v)| v)
                .map(|(i, _)| i)
                .unwrap_or(0);
            c.rotate_left(pos);
        }
        cycles.sort_unstable_by_key(|c| c[0]);
        CycleDecomposition { m, cycles }
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn num_cycles(&self) -> usize {
        self.cycles.len()
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn to_permutation(&self) -> Permutation {
        let mut images = vec![0; self.m];
        for c in &self.cycles {
            for (idx, &from) in c.iter().enumerate() {
                images[from] = c[(idx + 1) % c.len()];
            }
        }
        Permutation { images }
    }

    /// Set partition formed by the supports of the cycles.
    pub fn support_partition(&self) -> SetPartition {
        let mut blocks: Vec<Vec<usize>> = self
            .cycles
            .iter()
            .map(|c| {
                let mut b = c.clone();
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort_unstable_by_key(|b| b[0]);
        SetPartition { m: self.m, blocks }
    }
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cycles {
            write!(f, "(")?;
            for (i, v) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", v + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

pub fn cycle_decomposition(p: &Permutation) -> CycleDecomposition {
    let m = p.len();
    let mut seen = vec![false; m];
    let mut cycles = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i);
            i = p.images[i];
        }
        cycles.push(cycle);
    }
    // starting each cycle at its first unseen point already yields canonical form
    CycleDecomposition { m, cycles }
}

/// `(-1)^(m - number of cycles)`.
pub fn sign(p: &Permutation) -> i32 {
    let cycles = cycle_decomposition(p).num_cycles();
    if (p.len() - cycles) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A partition of `{0, .., m-1}` into non-empty blocks, each sorted, ordered by
/// smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    m: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(m: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; m];
        let mut blocks = blocks;
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::invalid("empty block"));
            }
            b.sort_unstable();
            for &i in b.iter() {
                if i >= m || seen[i] {
                    return Err(Error::invalid("blocks are not disjoint subsets of the ground set"));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::invalid("blocks do not cover the ground set"));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { m, blocks })
    }

    /// Builds from a restricted growth string: element `i` lies in block `rgs[i]`.
    fn from_rgs(rgs: &[usize]) -> Self {
        let count = rgs.iter().max().map_or(0, |&x| x + 1);
        let mut blocks = vec![Vec::new(); count];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        SetPartition {
            m: rgs.len(),
            blocks,
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn ground_size(&self) -> usize {
        self.m
    }
}

/// Stream over set partitions in restricted-growth-string order.
#[derive(Debug, Clone)]
pub struct SetPartitions {
    rgs: Vec<usize>,
    // prefix_max[i] = max(rgs[0..=i])
    prefix_max: Vec<usize>,
    done: bool,
}

impl Iterator for SetPartitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let out = SetPartition::from_rgs(&self.rgs);
        let n = self.rgs.len();
        let mut i = n - 1;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            if self.rgs[i] <= self.prefix_max[i - 1] {
                self.rgs[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.rgs[i]);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                break;
            }
            i -= 1;
        }
        Some(out)
    }
}

pub fn set_partitions_of(m: usize, limits: &Limits) -> Result<SetPartitions> {
    if m == 0 {
        return Err(Error::invalid("set_partitions_of requires m >= 1"));
    }
    limits.check_set_partitions(m)?;
    Ok(SetPartitions {
        rgs: vec![0; m],
        prefix_max: vec![0; m],
        done: false,
    })
}
