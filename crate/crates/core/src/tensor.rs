//! Tensor products of coordinate spaces, split into torus weight blocks.
//!
//! Basis vectors of `W₁ ⊗ ⋯ ⊗ W_k` are ordered lexicographically with the
//! leftmost factor most significant. When the factors carry weights, every
//! weight-homogeneous subspace is the direct sum of its pieces in the weight
//! blocks, so all lattice computations run block by block.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{mismatch, EngineError, Result};
use crate::field::Field;
use crate::lattice::{cube_complex, ComplexOfSpaces, CubeMaps, SubspaceCollection};
use crate::linalg::{Matrix, Subquotient, Subspace};

/// One tensor factor with a weight vector per basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub dim: usize,
    pub weights: Vec<Vec<i64>>,
}

impl Slot {
    /// Unweighted factor (all weights empty).
    pub fn plain(dim: usize) -> Self {
        Slot { dim, weights: vec![Vec::new(); dim] }
    }

    pub fn weighted(weights: Vec<Vec<i64>>) -> Result<Self> {
        let len = weights.first().map_or(0, |w| w.len());
        if weights.iter().any(|w| w.len() != len) {
            return Err(EngineError::Argument("slot weights have unequal lengths".into()));
        }
        Ok(Slot { dim: weights.len(), weights })
    }

    pub fn weight_len(&self) -> usize {
        self.weights.first().map_or(0, |w| w.len())
    }

    /// Pads every weight with zeros so it occupies `[offset, offset+len)` of
    /// a weight vector of length `total`.
    pub fn embed(&self, offset: usize, total: usize) -> Self {
        let weights = self
            .weights
            .iter()
            .map(|w| {
                let mut v = vec![0; total];
                v[offset..offset + w.len()].copy_from_slice(w);
                v
            })
            .collect();
        Slot { dim: self.dim, weights }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightBlock {
    pub weight: Vec<i64>,
    /// Global basis indices in increasing order.
    pub indices: Vec<usize>,
}

/// `W₁ ⊗ ⋯ ⊗ W_k` with its weight-block decomposition.
#[derive(Clone, Debug)]
pub struct TensorSpace {
    slots: Vec<Slot>,
    strides: Vec<usize>,
    dim: usize,
    blocks: Vec<WeightBlock>,
    block_of: Vec<u32>,
    local: Vec<u32>,
}

impl TensorSpace {
    pub fn new(slots: Vec<Slot>) -> Result<Self> {
        let len = slots.first().map_or(0, |s| s.weight_len());
        if slots.iter().any(|s| s.weight_len() != len) {
            return Err(EngineError::Argument("slots carry weights of different lengths".into()));
        }
        let dim: usize = slots.iter().map(|s| s.dim).product();
        let mut strides = vec![1; slots.len()];
        for k in (0..slots.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * slots[k + 1].dim;
        }
        let mut weights: Vec<Vec<i64>> = vec![vec![0; len]];
        for s in &slots {
            let mut next = Vec::with_capacity(weights.len() * s.dim);
            for w in &weights {
                for sw in &s.weights {
                    next.push(w.iter().zip(sw).map(|(a, b)| a + b).collect());
                }
            }
            weights = next;
        }
        if dim == 0 {
            weights.clear();
        }
        let mut grouped: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for (g, w) in weights.into_iter().enumerate() {
            grouped.entry(w).or_default().push(g);
        }
        let mut block_of = vec![0u32; dim];
        let mut local = vec![0u32; dim];
        let blocks: Vec<WeightBlock> = grouped
            .into_iter()
            .enumerate()
            .map(|(b, (weight, indices))| {
                for (l, &g) in indices.iter().enumerate() {
                    block_of[g] = b as u32;
                    local[g] = l as u32;
                }
                WeightBlock { weight, indices }
            })
            .collect();
        Ok(TensorSpace { slots, strides, dim, blocks, block_of, local })
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[WeightBlock] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block and position inside the block of a global basis index.
    pub fn locate(&self, g: usize) -> (usize, usize) {
        (self.block_of[g] as usize, self.local[g] as usize)
    }

    /// Global index of a multi-index (one basis index per slot).
    pub fn index(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    /// Per-slot indices of a global index.
    pub fn multi_index(&self, mut g: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|&s| {
                let i = g / s;
                g %= s;
                i
            })
            .collect()
    }

    /// `1 ⊗ ⋯ ⊗ Q ⊗ ⋯ ⊗ 1` with `Q ⊂ W_c ⊗ W_{c+1}` (slots 0-based).
    pub fn place<F: Field>(&self, rel: &Subspace<F>, cut: usize) -> Result<BlockedSubspace<F>> {
        if cut + 1 >= self.slots.len() {
            return Err(EngineError::Argument(format!("cut {cut} outside {} slots", self.slots.len())));
        }
        let mid = self.slots[cut].dim * self.slots[cut + 1].dim;
        if rel.ambient_dim() != mid {
            return Err(mismatch("placed relation ambient", rel.ambient_dim(), mid));
        }
        let right = self.strides[cut + 1];
        let left: usize = self.slots[..cut].iter().map(|s| s.dim).product();
        let support: Vec<Vec<(usize, F)>> = rel
            .basis()
            .row_iter()
            .map(|r| r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (c, x.clone())).collect())
            .collect();
        let mut rows: Vec<Vec<Vec<(usize, F)>>> = vec![Vec::new(); self.blocks.len()];
        for a in 0..left {
            for q in &support {
                for b in 0..right {
                    let base = a * mid * right + b;
                    let (blk, _) = self.locate(base + q[0].0 * right);
                    let mut row = Vec::with_capacity(q.len());
                    for (c, x) in q {
                        let (bb, l) = self.locate(base + c * right);
                        if bb != blk {
                            return Err(EngineError::InvariantViolation(
                                "relation is not weight-homogeneous".into(),
                            ));
                        }
                        row.push((l, x.clone()));
                    }
                    rows[blk].push(row);
                }
            }
        }
        let parts = rows
            .into_par_iter()
            .zip(self.blocks.par_iter())
            .map(|(rs, blk)| {
                let n = blk.indices.len();
                let mut m = Matrix::zeros(rs.len(), n);
                let mut pivots = Vec::with_capacity(rs.len());
                for (r, row) in rs.into_iter().enumerate() {
                    pivots.push(row[0].0);
                    for (l, x) in row {
                        m.set(r, l, x);
                    }
                }
                Subspace::from_rref_unchecked(m, pivots)
            })
            .collect();
        Ok(BlockedSubspace { parts })
    }

    /// Splits a global vector into its block components.
    pub fn split<F: Field>(&self, v: &[F]) -> Vec<Vec<F>> {
        let mut out: Vec<Vec<F>> = self.blocks.iter().map(|b| vec![F::zero(); b.indices.len()]).collect();
        for (g, x) in v.iter().enumerate() {
            if !x.is_zero() {
                let (b, l) = self.locate(g);
                out[b][l] = x.clone();
            }
        }
        out
    }

    /// Global vector of a vector supported in one block.
    pub fn embed<F: Field>(&self, block: usize, v: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim];
        for (l, x) in v.iter().enumerate() {
            out[self.blocks[block].indices[l]] = x.clone();
        }
        out
    }

    /// Per-block pieces of an arbitrary weight-homogeneous subspace.
    pub fn restrict<F: Field>(&self, sub: &Subspace<F>) -> Result<BlockedSubspace<F>> {
        if sub.ambient_dim() != self.dim {
            return Err(mismatch("restricted subspace ambient", sub.ambient_dim(), self.dim));
        }
        let mut rows: Vec<Vec<Vec<F>>> = vec![Vec::new(); self.blocks.len()];
        for r in sub.basis().row_iter() {
            let pieces = self.split(r);
            let mut hit = None;
            for (b, p) in pieces.into_iter().enumerate() {
                if p.iter().any(|x| !x.is_zero()) {
                    if hit.is_some() {
                        return Err(EngineError::InvariantViolation("subspace is not weight-homogeneous".into()));
                    }
                    hit = Some(b);
                    rows[b].push(p);
                }
            }
        }
        let parts = rows
            .into_iter()
            .zip(&self.blocks)
            .map(|(rs, b)| Subspace::from_rows(b.indices.len(), rs))
            .collect::<Result<_>>()?;
        Ok(BlockedSubspace { parts })
    }
}

/// A weight-homogeneous subspace as one subspace per block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockedSubspace<F: Field> {
    pub parts: Vec<Subspace<F>>,
}

impl<F: Field> BlockedSubspace<F> {
    pub fn zero(space: &TensorSpace) -> Self {
        BlockedSubspace { parts: space.blocks.iter().map(|b| Subspace::zero(b.indices.len())).collect() }
    }

    pub fn full(space: &TensorSpace) -> Self {
        BlockedSubspace { parts: space.blocks.iter().map(|b| Subspace::full(b.indices.len())).collect() }
    }

    pub fn dim(&self) -> usize {
        self.parts.iter().map(|p| p.dim()).sum()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Subspace<F>, &Subspace<F>) -> Result<Subspace<F>> + Sync) -> Result<Self> {
        if self.parts.len() != other.parts.len() {
            return Err(mismatch("block count", self.parts.len(), other.parts.len()));
        }
        let parts = self.parts.par_iter().zip(&other.parts).map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        Ok(BlockedSubspace { parts })
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.sum(b))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.intersect(b))
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        self.parts.len() == other.parts.len() && self.parts.iter().zip(&other.parts).all(|(a, b)| a.contains_subspace(b))
    }

    pub fn annihilator(&self) -> Self {
        BlockedSubspace { parts: self.parts.iter().map(|p| p.annihilator()).collect() }
    }

    /// Reassembles the global subspace.
    pub fn to_global(&self, space: &TensorSpace) -> Subspace<F> {
        let mut m = Matrix::zeros(0, space.dim());
        for (b, p) in self.parts.iter().enumerate() {
            for r in p.basis().row_iter() {
                m.push_row(&space.embed(b, r));
            }
        }
        Subspace::from_matrix(m)
    }
}

/// A weight-homogeneous subquotient as one subquotient per block.
#[derive(Clone, Debug)]
pub struct BlockedSubquotient<F: Field> {
    pub parts: Vec<Subquotient<F>>,
}

impl<F: Field> BlockedSubquotient<F> {
    pub fn dim(&self) -> usize {
        self.parts.iter().map(|p| p.dim()).sum()
    }

    /// `(block weight, dim)` for every block of nonzero dimension.
    pub fn weight_dims(&self, space: &TensorSpace) -> Vec<(Vec<i64>, usize)> {
        self.parts
            .iter()
            .zip(space.blocks())
            .filter(|(p, _)| p.dim() > 0)
            .map(|(p, b)| (b.weight.clone(), p.dim()))
            .collect()
    }
}

/// Role of one member of a [`Layout`] when realizing a module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutState {
    /// Contributes to the numerator: the relation is imposed as a kernel.
    Kept,
    /// Contributes to the denominator: the factors are multiplied.
    Merged,
    /// Ignored: the factors are tensored.
    Detached,
}

/// A tensor space with an ordered list of relation members.
///
/// For a single algebra or module, member `c` is the relation placed at the
/// `c`-th slot boundary; for multi-Schur modules members are sums of such
/// placements across factors. `None` marks a boundary with no multiplication,
/// which is always detached.
#[derive(Clone, Debug)]
pub struct Layout<F: Field> {
    space: Arc<TensorSpace>,
    members: Vec<Option<BlockedSubspace<F>>>,
}

impl<F: Field> Layout<F> {
    pub fn new(space: Arc<TensorSpace>, members: Vec<Option<BlockedSubspace<F>>>) -> Result<Self> {
        for m in members.iter().flatten() {
            if m.parts.len() != space.block_count() {
                return Err(mismatch("member block count", m.parts.len(), space.block_count()));
            }
        }
        Ok(Layout { space, members })
    }

    /// Members placed at each slot boundary in turn.
    pub fn chain(slots: Vec<Slot>, relations: &[Option<&Subspace<F>>]) -> Result<Self> {
        if relations.len() + 1 != slots.len().max(1) {
            return Err(mismatch("relations per slot boundary", relations.len(), slots.len().saturating_sub(1)));
        }
        let space = Arc::new(TensorSpace::new(slots)?);
        let members = relations
            .par_iter()
            .enumerate()
            .map(|(c, r)| r.map(|q| space.place(q, c)).transpose())
            .collect::<Result<_>>()?;
        Ok(Layout { space, members })
    }

    pub fn space(&self) -> &Arc<TensorSpace> {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, c: usize) -> Option<&BlockedSubspace<F>> {
        self.members[c].as_ref()
    }

    /// Whether member `c` can be kept or merged.
    pub fn is_active(&self, c: usize) -> bool {
        self.members[c].is_some()
    }

    fn check_states(&self, states: &[CutState]) -> Result<()> {
        if states.len() != self.members.len() {
            return Err(mismatch("cut states", states.len(), self.members.len()));
        }
        for (c, s) in states.iter().enumerate() {
            if self.members[c].is_none() && *s != CutState::Detached {
                return Err(EngineError::Argument(format!("boundary {c} has no multiplication")));
            }
        }
        Ok(())
    }

    fn gather(&self, states: &[CutState], want: CutState, block: usize) -> Vec<&Subspace<F>> {
        states
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == want)
            .filter_map(|(c, _)| self.members[c].as_ref().map(|m| &m.parts[block]))
            .collect()
    }

    fn block_dim(&self, b: usize) -> usize {
        self.space.blocks()[b].indices.len()
    }

    /// Numerator `∩ kept`, denominator `Σ merged`, in one block.
    pub fn realize_block(&self, states: &[CutState], block: usize) -> Result<Subquotient<F>> {
        let n = self.block_dim(block);
        let num = Subspace::intersect_all(n, self.gather(states, CutState::Kept, block))?;
        let den = Subspace::sum_all(n, self.gather(states, CutState::Merged, block))?;
        Subquotient::new(num, den)
    }

    /// The module `(∩ kept) / (Σ merged)`.
    pub fn realize(&self, states: &[CutState]) -> Result<BlockedSubquotient<F>> {
        self.check_states(states)?;
        let parts = (0..self.space.block_count())
            .into_par_iter()
            .map(|b| self.realize_block(states, b))
            .collect::<Result<_>>()?;
        Ok(BlockedSubquotient { parts })
    }

    /// Kernel form `(∩_kept (K + Σ merged)) / (Σ merged)`, the kernel of the
    /// map from the merged tensor product to every single further merge.
    pub fn realize_kernel(&self, states: &[CutState]) -> Result<BlockedSubquotient<F>> {
        self.check_states(states)?;
        let parts = (0..self.space.block_count())
            .into_par_iter()
            .map(|b| {
                let n = self.block_dim(b);
                let den = Subspace::sum_all(n, self.gather(states, CutState::Merged, b))?;
                let mut num = Subspace::full(n);
                for k in self.gather(states, CutState::Kept, b) {
                    num = num.intersect(&k.sum(&den)?)?;
                }
                Subquotient::new(num, den)
            })
            .collect::<Result<_>>()?;
        Ok(BlockedSubquotient { parts })
    }

    /// The members listed in `cuts`, restricted to one block.
    pub fn collection(&self, block: usize, cuts: &[usize]) -> Result<SubspaceCollection<F>> {
        let members = cuts
            .iter()
            .map(|&c| {
                self.members[c]
                    .as_ref()
                    .map(|m| m.parts[block].clone())
                    .ok_or_else(|| EngineError::Argument(format!("boundary {c} has no multiplication")))
            })
            .collect::<Result<_>>()?;
        SubspaceCollection::new(self.block_dim(block), members)
    }

    /// Cube complex over the members in `free`, all other members fixed by
    /// `base`. A free member in `J` takes state `on`, otherwise `off`.
    /// With `CubeMaps::Up` the complex maps `J → J ∪ j`.
    pub fn cube(
        &self,
        base: &[CutState],
        free: &[usize],
        on: CutState,
        off: CutState,
        include: &(dyn Fn(&[usize]) -> bool + Sync),
        maps: CubeMaps,
    ) -> Result<BlockedComplex<F>> {
        self.check_states(base)?;
        let labels: Vec<usize> = free.iter().map(|c| c + 1).collect();
        let blocks = (0..self.space.block_count())
            .into_par_iter()
            .map(|b| {
                let term = |j: &Vec<usize>| {
                    let mut states = base.to_vec();
                    for &c in free {
                        states[c] = if j.contains(&(c + 1)) { on } else { off };
                    }
                    self.realize_block(&states, b)
                };
                let inc = |j: &Vec<usize>| {
                    let cuts: Vec<usize> = j.iter().map(|c| c - 1).collect();
                    include(&cuts)
                };
                cube_complex(self.block_dim(b), &[], &labels, &inc, maps, &term)
            })
            .collect::<Result<_>>()?;
        Ok(BlockedComplex { blocks })
    }
}

/// A complex split into independent weight-block complexes of equal shape.
#[derive(Clone, Debug)]
pub struct BlockedComplex<F: Field> {
    pub blocks: Vec<ComplexOfSpaces<F>>,
}

impl<F: Field> BlockedComplex<F> {
    pub fn offset(&self) -> i64 {
        self.blocks.first().map_or(0, |c| c.offset)
    }

    pub fn summands(&self) -> Vec<usize> {
        self.blocks.first().map(|c| c.summands.clone()).unwrap_or_default()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.sum_over(|c| Ok(c.dims.clone())).expect("dims are infallible")
    }

    pub fn homology_dims(&self) -> Result<Vec<usize>> {
        self.sum_over(|c| c.homology_dims())
    }

    fn sum_over(&self, f: impl Fn(&ComplexOfSpaces<F>) -> Result<Vec<usize>> + Sync) -> Result<Vec<usize>> {
        let per: Vec<Vec<usize>> = self.blocks.par_iter().map(&f).collect::<Result<_>>()?;
        let len = per.first().map_or(0, |v| v.len());
        let mut out = vec![0; len];
        for v in per {
            if v.len() != len {
                return Err(EngineError::InvariantViolation("block complexes differ in length".into()));
            }
            for (o, x) in out.iter_mut().zip(v) {
                *o += x;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    type Q = Rational;

    fn std_slot(m: usize) -> Slot {
        Slot::weighted((0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect()).unwrap()
    }

    fn wedge2(m: usize) -> Subspace<Q> {
        let mut rows = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let mut v = vec![Q::from(0); m * m];
                v[i * m + j] = Q::from(1);
                v[j * m + i] = Q::from(-1);
                rows.push(v);
            }
        }
        Subspace::from_rows(m * m, rows).unwrap()
    }

    #[test]
    fn blocks_partition_the_basis() {
        let s = TensorSpace::new(vec![std_slot(2); 3]).unwrap();
        assert_eq!(s.dim(), 8);
        assert_eq!(s.block_count(), 4);
        let total: usize = s.blocks().iter().map(|b| b.indices.len()).sum();
        assert_eq!(total, 8);
        assert_eq!(s.multi_index(5), vec![1, 0, 1]);
        assert_eq!(s.index(&[1, 0, 1]), 5);
        let plain = TensorSpace::new(vec![Slot::plain(3), Slot::plain(2)]).unwrap();
        assert_eq!(plain.block_count(), 1);
    }

    #[test]
    fn placement_matches_kronecker() {
        let m = 2;
        let q = wedge2(m);
        for weighted in [false, true] {
            let slot = if weighted { std_slot(m) } else { Slot::plain(m) };
            let s = TensorSpace::new(vec![slot; 3]).unwrap();
            for cut in 0..2 {
                let placed = s.place(&q, cut).unwrap().to_global(&s);
                let id = Matrix::<Q>::identity(m);
                let kron = if cut == 0 { q.basis().kron(&id) } else { id.kron(q.basis()) };
                assert_eq!(placed, Subspace::from_matrix(kron));
                assert_eq!(placed.dim(), 2);
            }
        }
    }

    #[test]
    fn inhomogeneous_relation_is_rejected() {
        let s = TensorSpace::new(vec![std_slot(2); 2]).unwrap();
        let q = Subspace::<Q>::from_matrix(Matrix::from_i64(&[&[1, 0, 0, 1]]));
        assert!(s.place(&q, 0).is_err());
    }

    #[test]
    fn layout_realizations() {
        let q = wedge2(2);
        let layout = Layout::chain(vec![std_slot(2); 3], &[Some(&q), Some(&q)]).unwrap();
        use CutState::*;
        // S^{(1,1,1)} of the symmetric algebra on two variables vanishes.
        assert_eq!(layout.realize(&[Kept, Kept]).unwrap().dim(), 0);
        assert_eq!(layout.realize(&[Merged, Merged]).unwrap().dim(), 4);
        assert_eq!(layout.realize(&[Kept, Merged]).unwrap().dim(), 2);
        assert_eq!(layout.realize(&[Detached, Kept]).unwrap().dim(), 2);
        assert_eq!(layout.realize_kernel(&[Kept, Merged]).unwrap().dim(), 2);
        let c = layout.cube(&[Merged, Merged], &[0, 1], Merged, Detached, &|_| true, CubeMaps::Up).unwrap();
        assert_eq!(c.summands(), vec![1, 2, 1]);
    }
}
