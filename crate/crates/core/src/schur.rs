//! Ribbon Schur modules and the complexes built from them.
//!
//! Every module here lives in the layout `[M_t] V^{⊗n} [N_s]` of a
//! [`GradedContext`]. A cut inside a part is merged, a cut between parts is
//! kept, and a tensor product of Schur modules leaves the cut between the
//! factors detached. All maps between such modules are induced by the
//! identity of the ambient space.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compositions::{Composition, PartitionedComposition, RibbonDiagramList};
use crate::error::{EngineError, Result};
use crate::field::Field;
use crate::lattice::{CubeMaps, Direction, Verdict};
use crate::linalg::{induced_map, Matrix, Subquotient};
use crate::quadratic::{GradedContext, Variant};
use crate::tensor::{BlockedComplex, BlockedSubquotient, CutState, Layout};

/// A realized ribbon Schur module.
#[derive(Clone, Debug)]
pub struct SchurModule<F: Field> {
    pub variant: Variant,
    pub components: Vec<Composition>,
    pub states: Vec<CutState>,
    pub layout: Arc<Layout<F>>,
    pub realization: Arc<BlockedSubquotient<F>>,
}

impl<F: Field> SchurModule<F> {
    pub fn dim(&self) -> usize {
        self.realization.dim()
    }

    /// `(weight, dim)` of every nonzero weight block; empty weights when the
    /// context is unweighted.
    pub fn weight_dims(&self) -> Vec<(Vec<i64>, usize)> {
        self.realization.weight_dims(self.layout.space())
    }

    pub fn is_weighted(&self) -> bool {
        self.layout.space().blocks().first().is_some_and(|b| !b.weight.is_empty())
    }
}

/// Layout index of the cut after algebra slot `p` (`1 ≤ p < n`, or `p = n`
/// for the junction with a left module), and of the junction with a right
/// module for `p = 0`.
pub fn layout_cut(variant: Variant, n: usize, p: usize) -> Result<usize> {
    let r = usize::from(variant.has_right());
    let ok = match p {
        0 => variant.has_right(),
        p if p < n => true,
        p if p == n => variant.has_left(),
        _ => false,
    };
    if !ok {
        return Err(EngineError::Argument(format!("no boundary after slot {p} of {n} for variant {variant}")));
    }
    Ok(if p == 0 { 0 } else { r + p - 1 })
}

/// Cut states of the tensor product of the Schur modules of `components`:
/// merged inside parts, kept between parts and at the module junctions,
/// detached between components.
pub fn diagram_states<F: Field>(
    ctx: &GradedContext<F>,
    variant: Variant,
    components: &[Composition],
) -> Result<(usize, Vec<CutState>)> {
    if components.iter().any(|c| c.is_empty()) && components.len() > 1 {
        return Err(EngineError::Argument("disconnected ribbon with an empty component".into()));
    }
    let whole = components.iter().fold(Composition::empty(), |a, c| a.concat(c));
    let n = whole.weight();
    let mut states = ctx.schur_states(variant, &whole);
    let mut pos = 0;
    for c in &components[..components.len().saturating_sub(1)] {
        pos += c.weight();
        states[layout_cut(variant, n, pos)?] = CutState::Detached;
    }
    Ok((n, states))
}

/// `S^α` for a connected ribbon, through the lattice realization.
pub fn schur<F: Field>(ctx: &GradedContext<F>, variant: Variant, alpha: &Composition) -> Result<SchurModule<F>> {
    schur_diagram(ctx, variant, std::slice::from_ref(alpha))
}

/// Tensor product of the Schur modules of the components of a disconnected
/// ribbon. A right module attaches to the first component and a left module
/// to the last.
pub fn schur_diagram<F: Field>(
    ctx: &GradedContext<F>,
    variant: Variant,
    components: &[Composition],
) -> Result<SchurModule<F>> {
    let (n, states) = diagram_states(ctx, variant, components)?;
    let layout = ctx.layout(variant, n)?;
    let realization = ctx.realize(variant, n, &states)?;
    Ok(SchurModule { variant, components: components.to_vec(), states, layout, realization })
}

pub fn schur_list<F: Field>(
    ctx: &GradedContext<F>,
    variant: Variant,
    list: &RibbonDiagramList,
) -> Result<SchurModule<F>> {
    schur_diagram(ctx, variant, &list.components)
}

/// `S^α` as the kernel of the merge map into all single-merge coarsenings.
pub fn schur_kernel<F: Field>(
    ctx: &GradedContext<F>,
    variant: Variant,
    alpha: &Composition,
) -> Result<BlockedSubquotient<F>> {
    let states = ctx.schur_states(variant, alpha);
    ctx.layout(variant, alpha.weight())?.realize_kernel(&states)
}

/// Outcome of checking `0 → S^{α·β} → S^α ⊗ S^β → S^{α⊙β} → 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SESReport {
    pub alpha: String,
    pub beta: String,
    pub variant: Variant,
    /// Dimensions of the left, middle and right terms.
    pub dims: [usize; 3],
    /// Ranks of the inclusion and of the merge map.
    pub ranks: [usize; 2],
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_position: Option<String>,
}

/// Builds the sequence block by block in the layout of `α·β`, with the cut
/// between `α` and `β` kept, detached and merged in turn.
///
/// For the module variants an empty `β` (resp. `α`) puts the cut at the
/// junction with the left (resp. right) module, which gives the truncated
/// form of the sequence.
pub fn verify_ses<F: Field>(
    ctx: &GradedContext<F>,
    variant: Variant,
    alpha: &Composition,
    beta: &Composition,
) -> Result<SESReport> {
    let whole = alpha.concat(beta);
    let n = whole.weight();
    let junction = layout_cut(variant, n, alpha.weight())?;
    if n == 0 {
        return Err(EngineError::Argument("the sequence needs a nonempty composition".into()));
    }
    let layout = ctx.layout(variant, n)?;
    let mut states = ctx.schur_states(variant, &whole);
    let with = |s: CutState| {
        let mut v = states.clone();
        v[junction] = s;
        v
    };
    let (kept, detached, merged) = (with(CutState::Kept), with(CutState::Detached), with(CutState::Merged));
    states.clear();
    let per_block: Vec<[usize; 6]> = (0..layout.space().block_count())
        .into_par_iter()
        .map(|b| {
            let l = layout.realize_block(&kept, b)?;
            let m = layout.realize_block(&detached, b)?;
            let r = layout.realize_block(&merged, b)?;
            let f = induced_map(&l, &m, None)?;
            let g = induced_map(&m, &r, None)?;
            let gf_zero = if f.cols() == 0 || g.rows() == 0 { true } else { g.mul(&f)?.is_zero() };
            Ok([l.dim(), m.dim(), r.dim(), f.rank(), g.rank(), usize::from(!gf_zero)])
        })
        .collect::<Result<_>>()?;
    let mut t = [0usize; 6];
    for row in per_block {
        for (a, b) in t.iter_mut().zip(row) {
            *a += b;
        }
    }
    let [dl, dm, dr, rf, rg, bad] = t;
    let failure = if rf < dl {
        Some("left")
    } else if bad > 0 || dm - rg != rf {
        Some("middle")
    } else if rg < dr {
        Some("right")
    } else {
        None
    };
    Ok(SESReport {
        alpha: alpha.to_string(),
        beta: beta.to_string(),
        variant,
        dims: [dl, dm, dr],
        ranks: [rf, rg],
        exact: failure.is_none(),
        failure_position: failure.map(String::from),
    })
}

/// Dimension comparison between a Schur module and its dual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub alpha: String,
    pub variant: Variant,
    /// `α^t`, reported for the algebra variant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transpose: Option<String>,
    pub dim: usize,
    pub dual_dim: usize,
    /// For the algebra variant: `dim S^{φ-complement of α}` over `A^!` itself.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complement_dim: Option<usize>,
    pub equal: bool,
}

/// Compares `dim S^α` with the dual side computed independently from the
/// dual presentations: over `(A^!)^op` with `N^!` and `M^!` exchanged, every
/// kept cut merged and every merged cut kept, read in reverse order.
pub fn verify_duality<F: Field>(ctx: &GradedContext<F>, variant: Variant, alpha: &Composition) -> Result<DualityReport> {
    let module = schur(ctx, variant, alpha)?;
    let n = alpha.weight();
    let dual_ctx = ctx.dual()?;
    let dual_variant = match variant {
        Variant::LeftModule => Variant::RightModule,
        Variant::RightModule => Variant::LeftModule,
        v => v,
    };
    let dual_states: Vec<CutState> = module
        .states
        .iter()
        .rev()
        .map(|s| match s {
            CutState::Kept => CutState::Merged,
            CutState::Merged => CutState::Kept,
            CutState::Detached => CutState::Detached,
        })
        .collect();
    let dual_dim = dual_ctx.realize(dual_variant, n, &dual_states)?.dim();
    let (transpose, complement_dim) = if variant == Variant::Algebra {
        let plain = GradedContext::new(ctx.algebra().quadratic_dual()).with_degree_bound(ctx.degree_bound())?;
        let c = schur(&plain, Variant::Algebra, &alpha.complement())?.dim();
        (Some(alpha.transpose().to_string()), Some(c))
    } else {
        (None, None)
    };
    let dim = module.dim();
    Ok(DualityReport {
        alpha: alpha.to_string(),
        variant,
        transpose,
        dim,
        dual_dim,
        complement_dim,
        equal: dim == dual_dim && complement_dim.is_none_or(|c| c == dim),
    })
}

/// The cuts of the layout of `α` that sit between parts or at a junction.
fn boundary_cuts<F: Field>(ctx: &GradedContext<F>, variant: Variant, alpha: &Composition) -> Vec<usize> {
    ctx.schur_states(variant, alpha)
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == CutState::Kept)
        .map(|(c, _)| c)
        .collect()
}

/// The refinement complexes of `α`.
///
/// Cochain: the graded pieces `A_β` over all coarsenings `β` of `α`, graded
/// by the number of extra merges, with the signed merge maps. Its `H⁰` is
/// the kernel realization of `S^α`.
///
/// Chain: the intersections over the boundaries of `α` that are kept,
/// with the merged cuts of `α` detached, graded by the number of kept
/// boundaries, with the signed inclusions.
pub fn refinement_complex<F: Field>(
    ctx: &GradedContext<F>,
    variant: Variant,
    alpha: &Composition,
    direction: Direction,
) -> Result<BlockedComplex<F>> {
    let n = alpha.weight();
    let layout = ctx.layout(variant, n)?;
    let free = boundary_cuts(ctx, variant, alpha);
    match direction {
        Direction::Cochain => {
            let base = ctx.states_with(variant, alpha, CutState::Detached, CutState::Detached);
            layout.cube(&base, &free, CutState::Merged, CutState::Detached, &|_| true, CubeMaps::Up)
        }
        Direction::Chain => {
            let base: Vec<CutState> = ctx
                .schur_states(variant, alpha)
                .into_iter()
                .map(|s| if s == CutState::Merged { CutState::Kept } else { CutState::Detached })
                .collect();
            let base: Vec<CutState> = base
                .iter()
                .enumerate()
                .map(|(c, s)| if free.contains(&c) { CutState::Detached } else { *s })
                .collect();
            layout.cube(&base, &free, CutState::Kept, CutState::Detached, &|_| true, CubeMaps::Down)
        }
    }
}

/// Outcome of building a Hamel–Goulden complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamelGouldenReport {
    pub alpha: String,
    pub variant: Variant,
    pub summands: Vec<usize>,
    pub dims: Vec<usize>,
    pub homology: Vec<usize>,
    pub schur_dim: usize,
    /// Rank of the canonical map from `S^α` into the degree-zero term.
    pub canonical_rank: usize,
    /// Whether the canonical map lands in the kernel of the differential.
    pub canonical_is_cycle: bool,
    pub verdict: Verdict,
}

/// The complex whose degree-`i` term is `⊕_{|I|=i} S^{μ_I(α)}`, with the
/// check that it is exact in positive degrees and that `S^α` maps
/// isomorphically onto `H⁰`.
pub fn hamel_goulden<F: Field>(
    ctx: &GradedContext<F>,
    variant: Variant,
    alpha: &PartitionedComposition,
) -> Result<(BlockedComplex<F>, HamelGouldenReport)> {
    let whole = alpha.underlying();
    let n = whole.weight();
    let layout = ctx.layout(variant, n)?;
    let free = alpha
        .boundary_positions()
        .into_iter()
        .map(|p| layout_cut(variant, n, p))
        .collect::<Result<Vec<_>>>()?;
    let target = ctx.schur_states(variant, &whole);
    let mut base = target.clone();
    for &c in &free {
        base[c] = CutState::Detached;
    }
    let complex = layout.cube(&base, &free, CutState::Merged, CutState::Detached, &|_| true, CubeMaps::Up)?;
    let homology = complex.homology_dims()?;
    let checks: Vec<(usize, usize, bool)> = (0..layout.space().block_count())
        .into_par_iter()
        .map(|b| {
            let s = layout.realize_block(&target, b)?;
            let t0 = layout.realize_block(&base, b)?;
            let map = induced_map(&s, &t0, None)?;
            let cycle = match complex.blocks[b].differentials.first() {
                Some(d) if d.rows() > 0 && map.cols() > 0 => d.mul(&map)?.is_zero(),
                _ => true,
            };
            Ok((s.dim(), map.rank(), cycle))
        })
        .collect::<Result<_>>()?;
    let schur_dim = checks.iter().map(|c| c.0).sum();
    let canonical_rank = checks.iter().map(|c| c.1).sum();
    let canonical_is_cycle = checks.iter().all(|c| c.2);
    let exact_above = homology.iter().skip(1).all(|&h| h == 0);
    let h0 = homology.first().copied().unwrap_or(0);
    let ok = exact_above && canonical_is_cycle && canonical_rank == schur_dim && h0 == schur_dim;
    let report = HamelGouldenReport {
        alpha: alpha.to_string(),
        variant,
        summands: complex.summands(),
        dims: complex.dims(),
        homology,
        schur_dim,
        canonical_rank,
        canonical_is_cycle,
        verdict: Verdict::from_bool(ok),
    };
    Ok((complex, report))
}

/// Rank of the map induced on `S^α` by a change of coordinates `g` of the
/// whole ambient space (for example `g^{⊗n}` for `g ∈ GL(V)`). Works on the
/// unsplit realization, so `g` need not respect weights.
pub fn induced_rank<F: Field>(module: &SchurModule<F>, ambient_map: &Matrix<F>) -> Result<usize> {
    let space = module.layout.space();
    let gather = |want: CutState| {
        module
            .states
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == want)
            .filter_map(|(c, _)| module.layout.member(c).map(|m| m.to_global(space)))
            .collect::<Vec<_>>()
    };
    let num = crate::linalg::Subspace::intersect_all(space.dim(), gather(CutState::Kept).iter())?;
    let den = crate::linalg::Subspace::sum_all(space.dim(), gather(CutState::Merged).iter())?;
    let sq = Subquotient::new(num, den)?;
    Ok(induced_map(&sq, &sq, Some(ambient_map))?.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::quadratic::{QuadraticAlgebra, QuadraticModule, Side};

    type Q = Rational;

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    fn sym(m: usize) -> GradedContext<Q> {
        GradedContext::new(QuadraticAlgebra::symmetric(m))
    }

    #[test]
    fn small_schur_dims() {
        let ctx = sym(2);
        assert_eq!(schur(&ctx, Variant::Algebra, &c("1,1")).unwrap().dim(), 1);
        assert_eq!(schur(&ctx, Variant::Algebra, &c("2,1")).unwrap().dim(), 2);
        assert_eq!(schur(&ctx, Variant::Algebra, &c("1,2,1")).unwrap().dim(), 1);
        assert_eq!(schur(&ctx, Variant::Algebra, &c("1,1,1")).unwrap().dim(), 0);
        assert_eq!(schur_kernel(&ctx, Variant::Algebra, &c("2,1")).unwrap().dim(), 2);
        let t = GradedContext::<Q>::new(QuadraticAlgebra::tensor(2));
        assert_eq!(schur(&t, Variant::Algebra, &c("1,1")).unwrap().dim(), 0);
        assert_eq!(schur(&t, Variant::Algebra, &c("3")).unwrap().dim(), 8);
    }

    #[test]
    fn ses_examples() {
        let ctx = sym(2);
        let r = verify_ses(&ctx, Variant::Algebra, &c("1,1"), &c("1,1")).unwrap();
        assert_eq!(r.dims, [0, 1, 1]);
        assert!(r.exact);
        let e = GradedContext::<Q>::new(QuadraticAlgebra::exterior(3));
        let r = verify_ses(&e, Variant::Algebra, &c("2"), &c("1")).unwrap();
        assert_eq!(r.dims, [8, 9, 1]);
        assert!(r.exact);
    }

    #[test]
    fn module_conventions() {
        let s = QuadraticAlgebra::<Q>::symmetric(2);
        let k = QuadraticModule::trivial(&s, Side::Left, 0);
        let ctx = GradedContext::new(s.clone())
            .with_left(k)
            .unwrap()
            .with_right(QuadraticModule::trivial(&s, Side::Right, 0))
            .unwrap();
        assert_eq!(schur(&ctx, Variant::LeftModule, &Composition::empty()).unwrap().dim(), 1);
        assert_eq!(schur(&ctx, Variant::Double, &Composition::empty()).unwrap().dim(), 1);
        for i in 1..=3 {
            let d = schur(&ctx, Variant::Double, &Composition::ones(i)).unwrap().dim();
            assert_eq!(d, [0, 2, 1, 0][i]);
        }
        let r = verify_ses(&ctx, Variant::LeftModule, &c("1,1"), &Composition::empty()).unwrap();
        assert!(r.exact);
    }

    #[test]
    fn refinement_shapes() {
        let ctx = sym(2).with_degree_bound(12).unwrap();
        let cx = refinement_complex(&ctx, Variant::Algebra, &c("3,2,4,3"), Direction::Cochain).unwrap();
        assert_eq!(cx.summands(), vec![1, 3, 3, 1]);
        let ch = refinement_complex(&ctx, Variant::Algebra, &c("3,2,4"), Direction::Chain).unwrap();
        assert_eq!(ch.summands(), vec![1, 2, 1]);
        let small = refinement_complex(&sym(2), Variant::Algebra, &c("1,1,1"), Direction::Cochain).unwrap();
        let h = small.homology_dims().unwrap();
        assert!(h.iter().all(|&x| x == 0));
    }

    #[test]
    fn hamel_goulden_small() {
        let ctx = sym(2);
        let a: PartitionedComposition = "1|1|1".parse().unwrap();
        let (_, rep) = hamel_goulden(&ctx, Variant::Algebra, &a).unwrap();
        assert_eq!(rep.schur_dim, 0);
        assert!(rep.verdict.is_pass());
    }

    #[test]
    fn duality_small() {
        let ctx = sym(2);
        let r = verify_duality(&ctx, Variant::Algebra, &c("2,1")).unwrap();
        assert_eq!((r.dim, r.dual_dim), (2, 2));
        assert!(r.equal);
    }
}
