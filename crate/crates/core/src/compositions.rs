//! Ribbon-diagram combinatorics.
//!
//! A composition is stored bottom row first. Subsets of `[n]` are sorted
//! vectors of 1-based indices; enumeration order is a binary counter on the
//! characteristic vector with index 1 least significant.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};

/// Sorted 1-based index set.
pub type IndexSet = Vec<usize>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Composition {
    parts: Vec<usize>,
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Composition {
    type Err = EngineError;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Composition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| EngineError::Parse(format!("bad composition part {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Composition::new(parts)
    }
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(EngineError::Argument(format!("composition parts must be positive: {parts:?}")));
        }
        Ok(Composition { parts })
    }

    pub fn empty() -> Self {
        Composition { parts: Vec::new() }
    }

    /// `(1^n)`.
    pub fn ones(n: usize) -> Self {
        Composition { parts: vec![1; n] }
    }

    /// `(n)`, or the empty composition for `n = 0`.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Composition { parts: vec![n] }
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn concat(&self, other: &Composition) -> Composition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Composition { parts }
    }

    pub fn near_concat(&self, other: &Composition) -> Result<Composition> {
        if self.is_empty() || other.is_empty() {
            return Err(EngineError::Argument("near-concatenation needs nonempty compositions".into()));
        }
        let mut parts = self.parts.clone();
        *parts.last_mut().expect("nonempty") += other.parts[0];
        parts.extend_from_slice(&other.parts[1..]);
        Ok(Composition { parts })
    }

    pub fn reversed(&self) -> Composition {
        Composition { parts: self.parts.iter().rev().copied().collect() }
    }

    /// The merged cut positions `φ⁻¹(α) ⊆ [|α|−1]`.
    pub fn phi_inverse(&self) -> IndexSet {
        let mut out = Vec::new();
        let mut pos = 0;
        for &p in &self.parts {
            out.extend(pos + 1..pos + p);
            pos += p;
        }
        out
    }

    /// Kept cut positions, the complement of [`Composition::phi_inverse`].
    pub fn cuts(&self) -> IndexSet {
        let mut out = Vec::new();
        let mut pos = 0;
        for &p in &self.parts[..self.parts.len().saturating_sub(1)] {
            pos += p;
            out.push(pos);
        }
        out
    }

    /// Composition with merged cuts complementary to those of `self`:
    /// `φ([n−1] ∖ φ⁻¹(α))`. This is the index-level transpose used by duality.
    pub fn complement(&self) -> Composition {
        let n = self.weight();
        if n == 0 {
            return Composition::empty();
        }
        phi(&self.cuts(), n).expect("cuts lie in [n-1]")
    }

    /// Transpose of the ribbon diagram, read bottom to top.
    pub fn transpose(&self) -> Composition {
        self.complement().reversed()
    }

    pub fn rescale(&self, d: usize) -> Result<Composition> {
        if d == 0 {
            return Err(EngineError::Argument("rescaling factor must be positive".into()));
        }
        Ok(Composition { parts: self.parts.iter().map(|p| p * d).collect() })
    }

    /// All coarsenings with sign `(−1)^{ℓ(α)−ℓ(β)}`, in binary-counter order
    /// of the added merges.
    pub fn coarsenings(&self) -> Vec<(Composition, i64)> {
        let cuts = self.cuts();
        let base = self.phi_inverse();
        let n = self.weight();
        subsets_of(&cuts)
            .map(|extra| {
                let mut merged = base.clone();
                merged.extend_from_slice(&extra);
                merged.sort_unstable();
                let sign = if extra.len() % 2 == 0 { 1 } else { -1 };
                (phi(&merged, n).expect("valid merge set"), sign)
            })
            .collect()
    }

    /// Single-merge coarsenings, in order of the merged cut.
    pub fn covers(&self) -> Vec<Composition> {
        (1..self.len())
            .map(|i| {
                let mut parts = self.parts[..i - 1].to_vec();
                parts.push(self.parts[i - 1] + self.parts[i]);
                parts.extend_from_slice(&self.parts[i + 1..]);
                Composition { parts }
            })
            .collect()
    }

    /// All compositions of `n`, in binary-counter order of `φ⁻¹`.
    pub fn all_of(n: usize) -> Vec<Composition> {
        if n == 0 {
            return vec![Composition::empty()];
        }
        subsets(n - 1).map(|i| phi(&i, n).expect("valid")).collect()
    }
}

/// `φ(I)` for `I ⊆ [n−1]`: merge positions `i, i+1` for every `i ∈ I`.
pub fn phi(merged: &[usize], n: usize) -> Result<Composition> {
    if n == 0 {
        if merged.is_empty() {
            return Ok(Composition::empty());
        }
        return Err(EngineError::Argument("nonempty merge set for n = 0".into()));
    }
    let mut is_merged = vec![false; n];
    for &i in merged {
        if i == 0 || i >= n {
            return Err(EngineError::Argument(format!("index {i} outside [1, {}]", n - 1)));
        }
        is_merged[i] = true;
    }
    let mut parts = Vec::new();
    let mut cur = 1;
    for &m in &is_merged[1..] {
        if m {
            cur += 1;
        } else {
            parts.push(cur);
            cur = 1;
        }
    }
    parts.push(cur);
    Ok(Composition { parts })
}

/// Iterator over all subsets of `[n]`, binary counter with index 1 least significant.
pub fn subsets(n: usize) -> impl Iterator<Item = IndexSet> {
    assert!(n < 63, "subset enumeration limited to n < 63");
    (0u64..(1u64 << n)).map(move |mask| (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect())
}

/// Subsets of an explicit index list, in the same counter order.
pub fn subsets_of(items: &[usize]) -> impl Iterator<Item = IndexSet> + '_ {
    let k = items.len();
    assert!(k < 63, "subset enumeration limited to 63 items");
    (0u64..(1u64 << k)).map(move |mask| {
        (0..k).filter(|i| mask >> i & 1 == 1).map(|i| items[i]).collect()
    })
}

pub fn mask_of(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &i| m | 1 << (i - 1))
}

pub fn set_of_mask(mask: u64) -> IndexSet {
    (1..=64).filter(|i| mask >> (i - 1) & 1 == 1).collect()
}

/// `(−1)^{#{i ∈ I : i < j}}`.
pub fn sign(j: usize, set: &[usize]) -> Result<i64> {
    if set.contains(&j) {
        return Err(EngineError::Argument(format!("sign({j}, I) needs {j} ∉ I")));
    }
    let below = set.iter().filter(|&&i| i < j).count();
    Ok(if below % 2 == 0 { 1 } else { -1 })
}

/// The `j`-th degeneracy `s_j : [n] → [n−1]`.
pub fn degeneracy(j: usize, i: usize) -> usize {
    if i <= j {
        i
    } else {
        i - 1
    }
}

/// The `j`-th face `d_j : [n−1] → [n]`.
pub fn face(j: usize, i: usize) -> usize {
    if i < j {
        i
    } else {
        i + 1
    }
}

/// Image of an index set under `s_j` (for sets not containing `j+1`-collisions
/// this is injective).
pub fn degeneracy_set(j: usize, set: &[usize]) -> IndexSet {
    let mut out: IndexSet = set.iter().map(|&i| degeneracy(j, i)).collect();
    out.dedup();
    out
}

pub fn face_set(j: usize, set: &[usize]) -> IndexSet {
    set.iter().map(|&i| face(j, i)).collect()
}

/// A composition split into consecutive nonempty blocks.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartitionedComposition {
    blocks: Vec<Composition>,
}

impl fmt::Debug for PartitionedComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl fmt::Display for PartitionedComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", s.join("|"))
    }
}

impl FromStr for PartitionedComposition {
    type Err = EngineError;
    fn from_str(s: &str) -> Result<Self> {
        let blocks = s.split('|').map(Composition::from_str).collect::<Result<Vec<_>>>()?;
        PartitionedComposition::new(blocks)
    }
}

impl PartitionedComposition {
    pub fn new(blocks: Vec<Composition>) -> Result<Self> {
        if blocks.is_empty() || blocks.iter().any(|b| b.is_empty()) {
            return Err(EngineError::Argument("partitioned composition needs nonempty blocks".into()));
        }
        Ok(PartitionedComposition { blocks })
    }

    /// Every part its own block.
    pub fn singletons(alpha: &Composition) -> Result<Self> {
        Self::new(alpha.parts().iter().map(|&p| Composition::row(p)).collect())
    }

    pub fn single(alpha: Composition) -> Result<Self> {
        Self::new(vec![alpha])
    }

    pub fn blocks(&self) -> &[Composition] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn underlying(&self) -> Composition {
        self.blocks.iter().fold(Composition::empty(), |acc, b| acc.concat(b))
    }

    pub fn weight(&self) -> usize {
        self.blocks.iter().map(|b| b.weight()).sum()
    }

    fn check_cuts(&self, set: &[usize]) -> Result<()> {
        let l = self.blocks.len();
        match set.iter().find(|&&j| j == 0 || j >= l) {
            Some(j) => Err(EngineError::Argument(format!("block cut {j} outside [1, {}]", l - 1))),
            None => Ok(()),
        }
    }

    /// Near-concatenate across every block cut in `set`.
    pub fn sigma(&self, set: &[usize]) -> Result<PartitionedComposition> {
        self.check_cuts(set)?;
        let mut blocks = vec![self.blocks[0].clone()];
        for (j, b) in self.blocks.iter().enumerate().skip(1) {
            if set.contains(&j) {
                let last = blocks.pop().expect("nonempty");
                blocks.push(last.near_concat(b)?);
            } else {
                blocks.push(b.clone());
            }
        }
        Ok(PartitionedComposition { blocks })
    }

    /// Split at every block cut in `set`, concatenating blocks in between.
    pub fn nu(&self, set: &[usize]) -> Result<RibbonDiagramList> {
        self.check_cuts(set)?;
        let mut comps = vec![self.blocks[0].clone()];
        for (j, b) in self.blocks.iter().enumerate().skip(1) {
            if set.contains(&j) {
                comps.push(b.clone());
            } else {
                let last = comps.pop().expect("nonempty");
                comps.push(last.concat(b));
            }
        }
        Ok(RibbonDiagramList { components: comps })
    }

    /// `σ_I` followed by disconnecting at all remaining cuts.
    pub fn mu(&self, set: &[usize]) -> Result<RibbonDiagramList> {
        Ok(RibbonDiagramList { components: self.sigma(set)?.blocks })
    }

    /// Block index (0-based) of each block boundary, as a cut position in the
    /// underlying composition's `[n−1]`.
    pub fn boundary_positions(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut pos = 0;
        for b in &self.blocks[..self.blocks.len() - 1] {
            pos += b.weight();
            out.push(pos);
        }
        out
    }
}

/// A possibly disconnected ribbon: tensor product of its components.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RibbonDiagramList {
    pub components: Vec<Composition>,
}

impl fmt::Debug for RibbonDiagramList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.components.iter().map(|c| format!("({c})")).collect();
        write!(f, "[{}]", s.join(" "))
    }
}

impl RibbonDiagramList {
    pub fn weight(&self) -> usize {
        self.components.iter().map(|c| c.weight()).sum()
    }
}

/// All `(I₁,…,I_n)` with `I_k ⊆ [ℓ−1]` and empty common intersection.
///
/// Order: the tuple of masks counts in mixed radix with `I₁` fastest; tuples
/// with a common element are skipped.
pub fn empty_intersection_tuples(n: usize, l: usize) -> Vec<Vec<IndexSet>> {
    assert!(n >= 1 && l >= 1);
    let k = l - 1;
    let per = 1u64 << k;
    let total = per.checked_pow(n as u32).expect("tuple count overflow");
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut masks = Vec::with_capacity(n);
        for _ in 0..n {
            masks.push(c % per);
            c /= per;
        }
        let common = masks.iter().fold(per - 1, |a, &m| a & m);
        if common == 0 {
            out.push(masks.into_iter().map(set_of_mask).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    #[test]
    fn concatenations() {
        assert_eq!(c("1,1,2").concat(&c("2,3,1")), c("1,1,2,2,3,1"));
        assert_eq!(c("1,1,2").near_concat(&c("2,3,1")).unwrap(), c("1,1,4,3,1"));
        assert_eq!(c("3,1").concat(&Composition::empty()), c("3,1"));
        assert!(c("3").near_concat(&Composition::empty()).is_err());
    }

    #[test]
    fn transposes() {
        assert_eq!(c("3,1,1,2,4").transpose(), c("1,1,1,2,4,1,1"));
        assert_eq!(Composition::ones(4).transpose(), c("4"));
        assert_eq!(c("2,1").complement(), c("1,2"));
        assert_eq!(c("2,1").transpose(), c("2,1"));
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&[], 4).unwrap(), c("1,1,1,1"));
        assert_eq!(phi(&[1], 4).unwrap(), c("2,1,1"));
        assert_eq!(phi(&[1, 2], 4).unwrap(), c("3,1"));
        assert_eq!(phi(&[1, 2, 3], 4).unwrap(), c("4"));
        assert!(phi(&[4], 4).is_err());
    }

    #[test]
    fn covers_and_coarsenings() {
        assert_eq!(c("3,2,1,3").covers(), vec![c("5,1,3"), c("3,3,3"), c("3,2,4")]);
        assert!(c("5").covers().is_empty());
        let co = c("1,2,1").coarsenings();
        assert_eq!(co.len(), 4);
        assert_eq!(co[0], (c("1,2,1"), 1));
        assert_eq!(co[3], (c("4"), 1));
    }

    #[test]
    fn rescaling() {
        assert_eq!(c("1,1").rescale(2).unwrap(), c("2,2"));
        assert_eq!(c("2,1").rescale(3).unwrap(), c("6,3"));
        assert_eq!(c("2,1").rescale(1).unwrap(), c("2,1"));
        assert!(c("2").rescale(0).is_err());
    }

    #[test]
    fn partitioned_operations() {
        let s = PartitionedComposition::singletons(&c("2,1,3,5,3,6,5,3")).unwrap();
        assert_eq!(s.sigma(&[1, 2, 4, 6, 7]).unwrap().underlying(), c("6,8,14"));
        let a: PartitionedComposition = "2|2,1|4|3".parse().unwrap();
        let sg = a.sigma(&[1, 3]).unwrap();
        assert_eq!(sg.to_string(), "4,1|7");
        assert_eq!(a.mu(&[1, 3]).unwrap().components, vec![c("4,1"), c("7")]);
        assert_eq!(a.nu(&[1, 3]).unwrap().components, vec![c("2"), c("2,1,4"), c("3")]);
        assert_eq!(a.sigma(&[]).unwrap(), a);
        assert_eq!(a.mu(&[]).unwrap(), a.nu(&[1, 2, 3]).unwrap());
        assert!(a.sigma(&[4]).is_err());
    }

    #[test]
    fn signs() {
        assert_eq!(sign(1, &[]).unwrap(), 1);
        assert_eq!(sign(2, &[1, 3]).unwrap(), -1);
        assert_eq!(sign(4, &[1, 2, 3]).unwrap(), -1);
        assert!(sign(2, &[2]).is_err());
        assert_eq!(degeneracy_set(2, &[1, 3, 4]), vec![1, 2, 3]);
        assert_eq!(face_set(2, &[1, 2, 3]), vec![1, 3, 4]);
    }

    #[test]
    fn tuple_counts() {
        assert_eq!(empty_intersection_tuples(2, 3).len(), 9);
        assert_eq!(empty_intersection_tuples(1, 4), vec![vec![Vec::<usize>::new()]]);
        assert_eq!(empty_intersection_tuples(3, 2).len(), 7);
    }

    #[test]
    fn parsing_round_trip() {
        assert_eq!(c("3,1,2").to_string(), "3,1,2");
        assert!("3,0".parse::<Composition>().is_err());
        assert!("x".parse::<Composition>().is_err());
        let p: PartitionedComposition = "2|2,1|4|3".parse().unwrap();
        assert_eq!(p.to_string(), "2|2,1|4|3");
        assert!("2||3".parse::<PartitionedComposition>().is_err());
    }
}
