//! Collections of subspaces: the modules `L^I`, the distributivity complexes,
//! the three-term distributivity criterion and duality.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compositions::{sign, subsets_of, IndexSet};
use crate::error::{mismatch, EngineError, Result};
use crate::field::Field;
use crate::linalg::{induced_map, Matrix, Subquotient, Subspace};

/// Ordered subspaces `M₁,…,M_n` of a common coordinate space.
#[derive(Clone, Debug)]
pub struct SubspaceCollection<F: Field> {
    ambient_dim: usize,
    members: Vec<Subspace<F>>,
}

impl<F: Field> SubspaceCollection<F> {
    pub fn new(ambient_dim: usize, members: Vec<Subspace<F>>) -> Result<Self> {
        for m in &members {
            if m.ambient_dim() != ambient_dim {
                return Err(mismatch("collection member ambient", m.ambient_dim(), ambient_dim));
            }
        }
        Ok(SubspaceCollection { ambient_dim, members })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subspace<F>] {
        &self.members
    }

    /// Member `i` (1-based).
    pub fn member(&self, i: usize) -> &Subspace<F> {
        &self.members[i - 1]
    }

    pub fn all_indices(&self) -> IndexSet {
        (1..=self.len()).collect()
    }

    fn check_set(&self, set: &[usize]) -> Result<()> {
        match set.iter().find(|&&i| i == 0 || i > self.len()) {
            Some(i) => Err(EngineError::Argument(format!("index {i} outside [1, {}]", self.len()))),
            None => Ok(()),
        }
    }

    /// Intersection of the members indexed by `set` (ambient if empty).
    pub fn meet(&self, set: &[usize]) -> Result<Subspace<F>> {
        self.check_set(set)?;
        Subspace::intersect_all(self.ambient_dim, set.iter().map(|&i| self.member(i)))
    }

    /// Sum of the members indexed by `set` (zero if empty).
    pub fn join(&self, set: &[usize]) -> Result<Subspace<F>> {
        self.check_set(set)?;
        Subspace::sum_all(self.ambient_dim, set.iter().map(|&i| self.member(i)))
    }

    pub fn complement(&self, set: &[usize]) -> IndexSet {
        (1..=self.len()).filter(|i| !set.contains(i)).collect()
    }

    /// The collection with member `j` removed.
    pub fn delete(&self, j: usize) -> Result<Self> {
        self.check_set(&[j])?;
        let mut members = self.members.clone();
        members.remove(j - 1);
        Self::new(self.ambient_dim, members)
    }

    /// `L^I = (∩_{i∉I} M_i) / (Σ_{i∈I} M_i)`.
    pub fn l_module(&self, set: &[usize]) -> Result<Subquotient<F>> {
        let num = self.meet(&self.complement(set))?;
        let den = self.join(set)?;
        Subquotient::new(num, den)
    }

    /// Annihilators of the members in the dual coordinate space.
    pub fn dual(&self) -> Self {
        SubspaceCollection {
            ambient_dim: self.ambient_dim,
            members: self.members.iter().map(|m| m.annihilator()).collect(),
        }
    }

    /// Cochain complex `C^•_I`: terms `M / Σ_J` for `J ⊇ I` in degree `|J|−|I|`,
    /// differential `Σ_{j∉J} sign(j,J) ρ_{J,J∪j}`.
    pub fn cochain_complex(&self, set: &[usize]) -> Result<ComplexOfSpaces<F>> {
        self.check_set(set)?;
        let free = self.complement(set);
        cube_complex(self.ambient_dim, set, &free, &|_| true, CubeMaps::Up, &|j| {
            Ok(Subquotient::quotient(self.join(j)?))
        })
    }

    /// Chain complex `C_•^I`: terms `∩_J M_j` for `J ⊇ I` in degree `|J|−|I|`,
    /// differential the signed inclusions `∩_{J∪j} → ∩_J`.
    pub fn chain_complex(&self, set: &[usize]) -> Result<ComplexOfSpaces<F>> {
        self.check_set(set)?;
        let free = self.complement(set);
        cube_complex(self.ambient_dim, set, &free, &|_| true, CubeMaps::Down, &|j| {
            Ok(Subquotient::sub(self.meet(j)?))
        })
    }

    /// Middle homology of `0 → L^{I∖j} → L^{s_j(I∖j)}_{M∖M_j} → L^I → 0`.
    pub fn three_term_defect(&self, set: &[usize], j: usize) -> Result<usize> {
        self.check_set(set)?;
        if !set.contains(&j) {
            return Err(EngineError::Argument(format!("{j} must lie in I")));
        }
        let n = self.meet(&self.complement(set))?;
        let rest: IndexSet = set.iter().copied().filter(|&i| i != j).collect();
        let sigma = self.join(&rest)?;
        let mj = self.member(j);
        three_term(&n, &sigma, mj)
    }

    /// Production distributivity test: every nonempty `I` and every `j ∈ I`.
    pub fn check_distributive(&self) -> Result<DistributivityCertificate> {
        let all = self.all_indices();
        let cases: Vec<(IndexSet, usize)> = subsets_of(&all)
            .filter(|s| !s.is_empty())
            .flat_map(|s| s.clone().into_iter().map(move |j| (s.clone(), j)))
            .collect();
        let found = cases
            .par_iter()
            .map(|(s, j)| self.three_term_defect(s, *j).map(|d| (s, *j, d)))
            .find_first(|r| !matches!(r, Ok((_, _, 0))));
        Ok(match found {
            None => DistributivityCertificate::pass(),
            Some(Err(e)) => return Err(e),
            Some(Ok((s, j, d))) => DistributivityCertificate {
                status: Verdict::Fail,
                failing_i: Some(s.clone()),
                failing_j: Some(j),
                homology_dim: Some(d),
            },
        })
    }

    /// Exactness in positive degrees of `C^•_I` for every `I`.
    pub fn all_cochain_exact(&self) -> Result<bool> {
        let all = self.all_indices();
        for s in subsets_of(&all) {
            if self.cochain_complex(&s)?.homology_dims()?.iter().skip(1).any(|&h| h != 0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exactness in positive degrees of `C_•^I` for every `I`.
    pub fn all_chain_exact(&self) -> Result<bool> {
        let all = self.all_indices();
        for s in subsets_of(&all) {
            if self.chain_complex(&s)?.homology_dims()?.iter().skip(1).any(|&h| h != 0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Counts `c(T)` of a basis adapted to every member at once, indexed by
    /// the set `T` of members containing the basis vector, or `None` when the
    /// certificate fails (which happens exactly for non-distributive input).
    ///
    /// Returned as `(T, c(T))` for every `T ⊆ [n]` in counter order.
    pub fn adapted_type_counts(&self) -> Result<Option<Vec<(IndexSet, usize)>>> {
        let n = self.len();
        let ambient = self.ambient_dim;
        let all = self.all_indices();
        let sets: Vec<IndexSet> = subsets_of(&all).collect();
        // Z_T by mask, built from the set with its largest element removed.
        let mut z: Vec<Subspace<F>> = Vec::with_capacity(sets.len());
        for (mask, s) in sets.iter().enumerate() {
            if s.is_empty() {
                z.push(Subspace::full(ambient));
            } else {
                let top = *s.last().expect("nonempty");
                let prev = mask & !(1 << (top - 1));
                let zt = z[prev].intersect(self.member(top))?;
                z.push(zt);
            }
        }
        let mut counts = Vec::with_capacity(sets.len());
        let mut basis = Matrix::zeros(0, ambient);
        for (mask, s) in sets.iter().enumerate() {
            let mut w = Subspace::zero(ambient);
            for j in 1..=n {
                if mask >> (j - 1) & 1 == 0 {
                    w = w.sum(&z[mask | 1 << (j - 1)])?;
                }
            }
            if !z[mask].contains_subspace(&w) {
                return Err(EngineError::InvariantViolation("adapted basis: W_T ⊄ Z_T".into()));
            }
            let comp = Subquotient::new(z[mask].clone(), w)?;
            let reps = comp.representatives();
            for r in reps.row_iter() {
                basis.push_row(r);
            }
            counts.push((s.clone(), reps.rows()));
        }
        if basis.rows() != ambient || basis.rank() != ambient {
            return Ok(None);
        }
        for j in 1..=n {
            let c: usize = counts.iter().filter(|(t, _)| t.contains(&j)).map(|(_, c)| c).sum();
            if c != self.member(j).dim() {
                return Ok(None);
            }
        }
        Ok(Some(counts))
    }
}

/// `dim(N ∩ (Σ + M)) − dim(N∩M + N∩Σ)`.
pub fn three_term<F: Field>(n: &Subspace<F>, sigma: &Subspace<F>, m: &Subspace<F>) -> Result<usize> {
    let top = n.intersect(&sigma.sum(m)?)?;
    let bottom = n.intersect(m)?.sum(&n.intersect(sigma)?)?;
    top.dim()
        .checked_sub(bottom.dim())
        .ok_or_else(|| EngineError::InvariantViolation("three-term bottom exceeds top".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributivityCertificate {
    pub status: Verdict,
    #[serde(rename = "failing_I")]
    pub failing_i: Option<IndexSet>,
    pub failing_j: Option<usize>,
    pub homology_dim: Option<usize>,
}

impl DistributivityCertificate {
    pub fn pass() -> Self {
        DistributivityCertificate { status: Verdict::Pass, failing_i: None, failing_j: None, homology_dim: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Chain,
    Cochain,
}

/// Finite complex of coordinate spaces.
///
/// Position `k` carries degree `offset + k`. `differentials[k]` joins
/// positions `k` and `k+1`: it maps `k → k+1` for a cochain complex and
/// `k+1 → k` for a chain complex, stored as (target dim × source dim).
#[derive(Clone, Debug)]
pub struct ComplexOfSpaces<F: Field> {
    pub offset: i64,
    pub dims: Vec<usize>,
    /// Number of direct summands in each term, for shape reporting.
    pub summands: Vec<usize>,
    pub differentials: Vec<Matrix<F>>,
    pub direction: Direction,
}

impl<F: Field> ComplexOfSpaces<F> {
    pub fn new(
        offset: i64,
        dims: Vec<usize>,
        summands: Vec<usize>,
        differentials: Vec<Matrix<F>>,
        direction: Direction,
    ) -> Result<Self> {
        if dims.len() != summands.len() || differentials.len() + 1 != dims.len().max(1) {
            return Err(EngineError::Argument("complex term/differential counts disagree".into()));
        }
        for (k, d) in differentials.iter().enumerate() {
            let (src, tgt) = match direction {
                Direction::Cochain => (dims[k], dims[k + 1]),
                Direction::Chain => (dims[k + 1], dims[k]),
            };
            if d.cols() != src || d.rows() != tgt {
                return Err(mismatch("differential shape", d.cols(), src));
            }
        }
        for k in 0..differentials.len().saturating_sub(1) {
            let comp = match direction {
                Direction::Cochain => differentials[k + 1].mul(&differentials[k])?,
                Direction::Chain => differentials[k].mul(&differentials[k + 1])?,
            };
            if !comp.is_zero() {
                return Err(EngineError::InvariantViolation(format!("d∘d ≠ 0 at position {k}")));
            }
        }
        Ok(ComplexOfSpaces { offset, dims, summands, differentials, direction })
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Homology dimension at each position.
    pub fn homology_dims(&self) -> Result<Vec<usize>> {
        let ranks: Vec<usize> = self.differentials.par_iter().map(|d| d.rank()).collect();
        let mut out = Vec::with_capacity(self.dims.len());
        for (k, &d) in self.dims.iter().enumerate() {
            let left = if k > 0 { ranks[k - 1] } else { 0 };
            let right = ranks.get(k).copied().unwrap_or(0);
            out.push(d.checked_sub(left + right).ok_or_else(|| {
                EngineError::InvariantViolation(format!("negative homology at position {k}"))
            })?);
        }
        Ok(out)
    }

    /// Positions in reverse order, as a complex of the other direction.
    pub fn reversed(&self, offset: i64) -> Self {
        let mut dims = self.dims.clone();
        dims.reverse();
        let mut summands = self.summands.clone();
        summands.reverse();
        let mut differentials = self.differentials.clone();
        differentials.reverse();
        let direction = match self.direction {
            Direction::Chain => Direction::Cochain,
            Direction::Cochain => Direction::Chain,
        };
        ComplexOfSpaces { offset, dims, summands, differentials, direction }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }
}

/// Direction of the maps in a cube complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubeMaps {
    /// `J → J ∪ j`, a cochain complex graded by `|J ∖ base|`.
    Up,
    /// `J ∪ j → J`, a chain complex graded by `|J ∖ base|`.
    Down,
}

/// Complex on the index sets `base ∪ K`, `K ⊆ free`, kept by `include`, with
/// terms given by `term` and components `sign(j, J)` times the map induced by
/// the identity of the ambient space.
pub fn cube_complex<F: Field>(
    ambient: usize,
    base: &[usize],
    free: &[usize],
    include: &(dyn Fn(&IndexSet) -> bool + Sync),
    maps: CubeMaps,
    term: &(dyn Fn(&IndexSet) -> Result<Subquotient<F>> + Sync),
) -> Result<ComplexOfSpaces<F>> {
    let k = free.len();
    let mut by_degree: Vec<Vec<IndexSet>> = vec![Vec::new(); k + 1];
    for extra in subsets_of(free) {
        let mut j: IndexSet = base.to_vec();
        j.extend_from_slice(&extra);
        j.sort_unstable();
        if include(&j) {
            by_degree[extra.len()].push(j);
        }
    }
    // Trim empty degrees at both ends so the complex has no padding.
    let first = by_degree.iter().position(|v| !v.is_empty()).unwrap_or(0);
    let last = by_degree.iter().rposition(|v| !v.is_empty()).unwrap_or(0);
    let by_degree: Vec<Vec<IndexSet>> = by_degree[first..=last].to_vec();
    let terms: Vec<Vec<Subquotient<F>>> = by_degree
        .iter()
        .map(|sets| sets.par_iter().map(term).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    for t in terms.iter().flatten() {
        if t.ambient_dim() != ambient {
            return Err(mismatch("cube term ambient", t.ambient_dim(), ambient));
        }
    }
    let dims: Vec<usize> = terms.iter().map(|ts| ts.iter().map(|t| t.dim()).sum()).collect();
    let summands: Vec<usize> = by_degree.iter().map(|v| v.len()).collect();
    let mut differentials = Vec::new();
    for g in 0..by_degree.len().saturating_sub(1) {
        let (lo_sets, hi_sets) = (&by_degree[g], &by_degree[g + 1]);
        let (lo_terms, hi_terms) = (&terms[g], &terms[g + 1]);
        let lo_off: Vec<usize> = offsets(lo_terms);
        let hi_off: Vec<usize> = offsets(hi_terms);
        let (rows, cols) = match maps {
            CubeMaps::Up => (dims[g + 1], dims[g]),
            CubeMaps::Down => (dims[g], dims[g + 1]),
        };
        let blocks: Vec<(usize, usize, Matrix<F>)> = lo_sets
            .par_iter()
            .enumerate()
            .map(|(a, small)| {
                let mut out = Vec::new();
                for (b, big) in hi_sets.iter().enumerate() {
                    if big.len() != small.len() + 1 || !small.iter().all(|x| big.contains(x)) {
                        continue;
                    }
                    let j = *big.iter().find(|x| !small.contains(x)).expect("one extra index");
                    let s = sign(j, small)?;
                    let (src, tgt) = match maps {
                        CubeMaps::Up => (&lo_terms[a], &hi_terms[b]),
                        CubeMaps::Down => (&hi_terms[b], &lo_terms[a]),
                    };
                    if src.dim() == 0 || tgt.dim() == 0 {
                        continue;
                    }
                    let mut m = induced_map(src, tgt, None)?;
                    if s < 0 {
                        for r in 0..m.rows() {
                            for x in m.row_mut(r) {
                                *x = -x.clone();
                            }
                        }
                    }
                    out.push((a, b, m));
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let mut d = Matrix::zeros(rows, cols);
        for (a, b, m) in blocks {
            let (r0, c0) = match maps {
                CubeMaps::Up => (hi_off[b], lo_off[a]),
                CubeMaps::Down => (lo_off[a], hi_off[b]),
            };
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    let x = m.get(r, c);
                    if !x.is_zero() {
                        d.set(r0 + r, c0 + c, x.clone());
                    }
                }
            }
        }
        differentials.push(d);
    }
    let direction = match maps {
        CubeMaps::Up => Direction::Cochain,
        CubeMaps::Down => Direction::Chain,
    };
    ComplexOfSpaces::new(first as i64, dims, summands, differentials, direction)
}

fn offsets<F: Field>(terms: &[Subquotient<F>]) -> Vec<usize> {
    let mut acc = 0;
    terms
        .iter()
        .map(|t| {
            let o = acc;
            acc += t.dim();
            o
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    type Q = Rational;

    fn line(v: &[i64]) -> Subspace<Q> {
        Subspace::from_matrix(Matrix::from_i64(&[v]))
    }

    fn coll(members: Vec<Subspace<Q>>) -> SubspaceCollection<Q> {
        let n = members[0].ambient_dim();
        SubspaceCollection::new(n, members).unwrap()
    }

    #[test]
    fn l_modules() {
        let c = coll(vec![line(&[1, 0]), line(&[0, 1])]);
        let l = c.l_module(&[1]).unwrap();
        assert_eq!(l.dim(), 1);
        assert_eq!(l.numerator(), &line(&[0, 1]));
        // Empty I: intersection of everything, nothing divided out.
        assert_eq!(c.l_module(&[]).unwrap().dim(), 0);
        assert_eq!(c.l_module(&[1, 2]).unwrap().dim(), 0);
        let single = coll(vec![line(&[1, 0])]);
        assert_eq!(single.l_module(&[1]).unwrap().dim(), 1);
    }

    #[test]
    fn three_lines_fail() {
        let c = coll(vec![line(&[1, 0]), line(&[0, 1]), line(&[1, 1])]);
        let cert = c.check_distributive().unwrap();
        assert_eq!(cert.status, Verdict::Fail);
        assert!(cert.homology_dim.unwrap() > 0);
        assert!(!c.all_cochain_exact().unwrap());
        assert!(!c.all_chain_exact().unwrap());
        assert!(c.adapted_type_counts().unwrap().is_none());
    }

    #[test]
    fn coordinate_pair_passes() {
        let c = coll(vec![line(&[1, 0]), line(&[0, 1])]);
        assert_eq!(c.check_distributive().unwrap(), DistributivityCertificate::pass());
        for s in subsets_of(&[1, 2]) {
            let h = c.cochain_complex(&s).unwrap().homology_dims().unwrap();
            assert!(h.iter().skip(1).all(|&x| x == 0));
        }
        let counts = c.adapted_type_counts().unwrap().unwrap();
        assert_eq!(counts, vec![(vec![], 0), (vec![1], 1), (vec![2], 1), (vec![1, 2], 0)]);
    }

    #[test]
    fn cube_shapes() {
        let c = coll(vec![line(&[1, 0, 0]), line(&[0, 1, 0]), line(&[0, 0, 1])]);
        let full = c.cochain_complex(&[]).unwrap();
        assert_eq!(full.summands, vec![1, 3, 3, 1]);
        let chain = c.chain_complex(&[]).unwrap();
        assert_eq!(chain.summands, vec![1, 3, 3, 1]);
        assert_eq!(c.cochain_complex(&[1, 2, 3]).unwrap().summands, vec![1]);
        let one = coll(vec![line(&[1, 1])]);
        let h = one.cochain_complex(&[]).unwrap().homology_dims().unwrap();
        assert_eq!(h, vec![1, 0]);
    }

    #[test]
    fn zero_differential_homology() {
        let cx = ComplexOfSpaces::<Q>::new(
            0,
            vec![2, 3],
            vec![1, 1],
            vec![Matrix::zeros(3, 2)],
            Direction::Cochain,
        )
        .unwrap();
        assert_eq!(cx.homology_dims().unwrap(), vec![2, 3]);
        let iso = ComplexOfSpaces::<Q>::new(0, vec![2, 2], vec![1, 1], vec![Matrix::identity(2)], Direction::Chain)
            .unwrap();
        assert_eq!(iso.homology_dims().unwrap(), vec![0, 0]);
        assert!(ComplexOfSpaces::<Q>::new(
            0,
            vec![1, 1, 1],
            vec![1, 1, 1],
            vec![Matrix::identity(1), Matrix::identity(1)],
            Direction::Cochain
        )
        .is_err());
    }

    #[test]
    fn dual_examples() {
        let c = coll(vec![line(&[1, 0]), Subspace::full(2)]);
        let d = c.dual();
        assert_eq!(d.member(1), &line(&[0, 1]));
        assert!(d.member(2).is_zero());
    }
}
