//! Bar-complex strands and the Tor/Ext tables and Koszulness certificates
//! built from them.
//!
//! The degree-`w` strand of `M ⊗_A Bar(A) ⊗_A N` lives in the layout
//! `[M_t] V^{⊗k} [N_s]` with `k = w − t − s`: a term is a choice of detached
//! cuts, every other cut merged, and its homological degree is the number of
//! detached cuts minus one.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compositions::Composition;
use crate::error::{EngineError, Result};
use crate::field::Field;
use crate::lattice::{ComplexOfSpaces, CubeMaps, DistributivityCertificate, Direction, Verdict};
use crate::linalg::induced_map;
use crate::quadratic::{GradedContext, QuadraticModule, Side, Variant};
use crate::schur::schur;
use crate::tensor::{BlockedComplex, CutState};

/// The internal-degree-`w` strand of the bar complex computing
/// `Tor^A(M, N)`; position `i` is homological degree `i`.
pub fn bar_strand<F: Field>(ctx: &GradedContext<F>, w: usize) -> Result<BlockedComplex<F>> {
    let base = ctx.internal_degree(Variant::Double, 0);
    if w < base {
        return Err(EngineError::Argument(format!("strand {w} lies below the generators in degree {base}")));
    }
    let layout = ctx.layout(Variant::Double, w - base)?;
    let free: Vec<usize> = (0..layout.len()).collect();
    let states = vec![CutState::Merged; layout.len()];
    let states: Vec<CutState> =
        states.iter().enumerate().map(|(c, s)| if layout.is_active(c) { *s } else { CutState::Detached }).collect();
    layout.cube(&states, &free, CutState::Detached, CutState::Merged, &|j| !j.is_empty(), CubeMaps::Down)
}

/// A context over the same algebra with the residue field at both ends.
pub fn residue_context<F: Field>(ctx: &GradedContext<F>) -> Result<GradedContext<F>> {
    let a = ctx.algebra().clone();
    GradedContext::new(a.clone())
        .with_degree_bound(ctx.degree_bound())?
        .with_right(QuadraticModule::trivial(&a, Side::Right, 0))?
        .with_left(QuadraticModule::trivial(&a, Side::Left, 0))
}

/// Degree-`w` strand of the augmented Priddy complex `A ⊗ S^{(1^i)}_{A,M} → M`
/// for the left module of `ctx`. Position 0 is the augmentation target
/// `M_w`; position `i + 1` is `A_{w−t−i} ⊗ S^{(1^i)}_{A,M}`.
pub fn priddy_strand<F: Field>(ctx: &GradedContext<F>, w: usize) -> Result<BlockedComplex<F>> {
    let t = ctx.internal_degree(Variant::LeftModule, 0);
    if w < t {
        return Err(EngineError::Argument(format!("strand {w} lies below the generators in degree {t}")));
    }
    let k = w - t;
    let layout = ctx.layout(Variant::LeftModule, k)?;
    // Term for S^{(1^i)}: the last i cuts kept, the cut before them detached,
    // everything to the left merged.
    let term = |i: usize| -> Vec<CutState> {
        (0..k)
            .map(|c| {
                if c + i >= k {
                    CutState::Kept
                } else if c + i + 1 == k {
                    CutState::Detached
                } else {
                    CutState::Merged
                }
            })
            .collect()
    };
    let mut states = vec![vec![CutState::Merged; k]];
    states.extend((0..=k).map(term));
    let blocks = (0..layout.space().block_count())
        .into_par_iter()
        .map(|b| {
            let terms = states.iter().map(|s| layout.realize_block(s, b)).collect::<Result<Vec<_>>>()?;
            let diffs = (0..terms.len() - 1)
                .map(|p| induced_map(&terms[p + 1], &terms[p], None))
                .collect::<Result<Vec<_>>>()?;
            let dims = terms.iter().map(|t| t.dim()).collect();
            ComplexOfSpaces::new(-1, dims, vec![1; terms.len()], diffs, Direction::Chain)
        })
        .collect::<Result<_>>()?;
    Ok(BlockedComplex { blocks })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrandSummary {
    pub degree: usize,
    pub dims: Vec<usize>,
    pub homology: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriddyReport {
    /// `dim S^{(1^i)}_{A,M}` for `i = 0..=max_i`.
    pub generator_dims: Vec<usize>,
    pub strands: Vec<StrandSummary>,
    pub exact: bool,
}

/// Priddy strands of degrees `t ..= t + max_i` for the left module of `ctx`.
pub fn priddy<F: Field>(ctx: &GradedContext<F>, max_i: usize) -> Result<PriddyReport> {
    let t = ctx.internal_degree(Variant::LeftModule, 0);
    let generator_dims = (0..=max_i)
        .map(|i| Ok(schur(ctx, Variant::LeftModule, &Composition::ones(i))?.dim()))
        .collect::<Result<Vec<_>>>()?;
    let mut strands = Vec::new();
    for w in t..=t + max_i {
        let c = priddy_strand(ctx, w)?;
        strands.push(StrandSummary { degree: w, dims: c.dims(), homology: c.homology_dims()? });
    }
    let exact = strands.iter().all(|s| s.homology.iter().all(|&h| h == 0));
    Ok(PriddyReport { generator_dims, strands, exact })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    BarStrand,
    SchurClosedForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorEntry {
    /// Homological degree.
    pub i: usize,
    /// Internal degree.
    pub j: usize,
    pub bar_strand: Option<usize>,
    pub closed_form: Option<usize>,
}

impl TorEntry {
    pub fn dim(&self) -> Option<usize> {
        self.bar_strand.or(self.closed_form)
    }

    pub fn provenance(&self) -> Vec<Provenance> {
        let mut p = Vec::new();
        if self.bar_strand.is_some() {
            p.push(Provenance::BarStrand);
        }
        if self.closed_form.is_some() {
            p.push(Provenance::SchurClosedForm);
        }
        p
    }
}

/// Graded Tor (or Ext) dimensions with the path each entry came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorTable {
    pub entries: Vec<TorEntry>,
    /// Set when the closed form was skipped for lack of a Koszul certificate.
    pub uncertified: bool,
    /// Whether every entry computed both ways agrees.
    pub consistent: bool,
}

impl TorTable {
    pub fn get(&self, i: usize, j: usize) -> Option<&TorEntry> {
        self.entries.iter().find(|e| e.i == i && e.j == j)
    }

    /// Total dimension in homological degree `i` over all internal degrees.
    pub fn total(&self, i: usize) -> usize {
        self.entries.iter().filter(|e| e.i == i).filter_map(|e| e.dim()).sum()
    }

    fn finish(mut entries: Vec<TorEntry>, uncertified: bool) -> Self {
        entries.sort_by_key(|e| (e.i, e.j));
        let consistent = entries.iter().all(|e| match (e.bar_strand, e.closed_form) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        });
        TorTable { entries, uncertified, consistent }
    }
}

fn merge_entry(entries: &mut Vec<TorEntry>, i: usize, j: usize, bar: Option<usize>, closed: Option<usize>) {
    if let Some(e) = entries.iter_mut().find(|e| e.i == i && e.j == j) {
        e.bar_strand = e.bar_strand.or(bar);
        e.closed_form = e.closed_form.or(closed);
    } else {
        entries.push(TorEntry { i, j, bar_strand: bar, closed_form: closed });
    }
}

/// `Tor_i^A(M, N)_j` for `i ≤ max_i` from bar strands of degrees up to
/// `t + s + max_i` (capped by the degree bound), plus the closed form
/// `dim S^{(1^i)}_{M,A,N}` in degree `t + s + i` when `certified`.
pub fn tor_dims<F: Field>(ctx: &GradedContext<F>, max_i: usize, certified: bool) -> Result<TorTable> {
    let base = ctx.internal_degree(Variant::Double, 0);
    let top = (base + max_i).min(ctx.degree_bound());
    let mut entries = Vec::new();
    for w in base..=top {
        let h = bar_strand(ctx, w)?.homology_dims()?;
        for (i, d) in h.into_iter().enumerate().take(max_i + 1) {
            merge_entry(&mut entries, i, w, Some(d), None);
        }
    }
    if certified {
        for i in 0..=max_i {
            if base + i > ctx.degree_bound() {
                break;
            }
            let d = schur(ctx, Variant::Double, &Composition::ones(i))?.dim();
            merge_entry(&mut entries, i, base + i, None, Some(d));
        }
    }
    Ok(TorTable::finish(entries, !certified))
}

/// `Ext^i_A(M, k)_j` for the left module `M` of `ctx` and the residue field.
///
/// The bar path dualizes `Tor_i(k, M)_j`; the closed form is
/// `dim (M^!)_{t+i}`, a graded piece of the dual module over `(A^!)^op`.
pub fn ext_dims<F: Field>(ctx: &GradedContext<F>, max_i: usize, certified: bool) -> Result<TorTable> {
    let m = ctx.left().ok_or_else(|| EngineError::Argument("Ext needs a left module".into()))?.clone();
    let a = ctx.algebra().clone();
    let bar_ctx = GradedContext::new(a.clone())
        .with_degree_bound(ctx.degree_bound())?
        .with_right(QuadraticModule::trivial(&a, Side::Right, 0))?
        .with_left(m.clone())?;
    let tor = tor_dims(&bar_ctx, max_i, false)?;
    let mut entries: Vec<TorEntry> =
        tor.entries.iter().map(|e| TorEntry { i: e.i, j: e.j, bar_strand: e.bar_strand, closed_form: None }).collect();
    if certified {
        let dual = m.module_dual();
        let dual_alg = a.quadratic_dual().opposite();
        let t = m.initial_degree();
        for i in 0..=max_i {
            if t + i > ctx.degree_bound() {
                break;
            }
            let d = dual.piece(&dual_alg, i)?.dim();
            merge_entry(&mut entries, i, t + i, None, Some(d));
        }
    }
    Ok(TorTable::finish(entries, !certified))
}

/// What a Koszulness certificate is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KoszulTarget {
    Algebra,
    /// The left module of the context.
    Module,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KoszulMethod {
    Distributive,
    StrandHomology,
    Both,
}

impl std::str::FromStr for KoszulMethod {
    type Err = EngineError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "distributive" => Ok(KoszulMethod::Distributive),
            "strand-homology" | "strand" => Ok(KoszulMethod::StrandHomology),
            "both" => Ok(KoszulMethod::Both),
            _ => Err(EngineError::Argument(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeVerdict {
    /// Number of tensor factors of the collection (internal degree for an
    /// algebra, `t` plus algebra slots for a module).
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distributive: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strand: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<DistributivityCertificate>,
    /// Largest off-diagonal Tor dimension found in this strand.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub off_diagonal: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulCertificate {
    pub target: KoszulTarget,
    pub name: String,
    pub method: KoszulMethod,
    pub max_degree: usize,
    pub degrees: Vec<DegreeVerdict>,
    /// Largest degree through which every requested check passes.
    pub certified_through: usize,
    /// For `both`: whether the cumulative verdicts agree in every degree.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agree: Option<bool>,
    pub verdict: Verdict,
}

impl KoszulCertificate {
    /// Cumulative verdict of one method: degree `n` passes when every degree
    /// up to `n` passes.
    pub fn cumulative(&self, strand: bool) -> Vec<bool> {
        let mut ok = true;
        self.degrees
            .iter()
            .map(|d| {
                let v = if strand { d.strand } else { d.distributive };
                ok &= v.is_none_or(Verdict::is_pass);
                ok
            })
            .collect()
    }
}

/// Distributivity of the relation collection in the layout with `n`
/// algebra slots, checked weight block by weight block.
fn distributive_at<F: Field>(ctx: &GradedContext<F>, variant: Variant, n: usize) -> Result<DistributivityCertificate> {
    let layout = ctx.layout(variant, n)?;
    let cuts: Vec<usize> = (0..layout.len()).filter(|&c| layout.is_active(c)).collect();
    let found = (0..layout.space().block_count())
        .into_par_iter()
        .map(|b| layout.collection(b, &cuts)?.check_distributive())
        .find_first(|r| !matches!(r, Ok(c) if c.status.is_pass()));
    match found {
        None => Ok(DistributivityCertificate::pass()),
        Some(r) => r,
    }
}

/// Certifies Koszulness of the algebra (or of the left module) of `ctx`
/// through `max_degree`.
pub fn certify_koszul<F: Field>(
    ctx: &GradedContext<F>,
    target: KoszulTarget,
    max_degree: usize,
    method: KoszulMethod,
) -> Result<KoszulCertificate> {
    let a = ctx.algebra().clone();
    let (variant, t, name, strand_ctx) = match target {
        KoszulTarget::Algebra => (Variant::Algebra, 0, a.name().to_string(), residue_context(ctx)?),
        KoszulTarget::Module => {
            let m = ctx.left().ok_or_else(|| EngineError::Argument("no left module to certify".into()))?.clone();
            let sctx = GradedContext::new(a.clone())
                .with_degree_bound(ctx.degree_bound())?
                .with_right(QuadraticModule::trivial(&a, Side::Right, 0))?
                .with_left(m.clone())?;
            (Variant::LeftModule, m.initial_degree(), m.name().to_string(), sctx)
        }
    };
    let run_dist = method != KoszulMethod::StrandHomology;
    let run_strand = method != KoszulMethod::Distributive;
    let first = t + usize::from(target == KoszulTarget::Algebra);
    let mut degrees = Vec::new();
    for degree in first..=max_degree {
        let n = degree - t;
        let mut dv = DegreeVerdict { degree, distributive: None, strand: None, witness: None, off_diagonal: None };
        if run_dist {
            let cert = distributive_at(ctx, variant, n)?;
            dv.distributive = Some(cert.status);
            if !cert.status.is_pass() {
                dv.witness = Some(cert);
            }
        }
        if run_strand {
            // Tor_i(k, X)_degree for i below the diagonal value n.
            let h = bar_strand(&strand_ctx, degree)?.homology_dims()?;
            let off = h.iter().take(n).copied().max().unwrap_or(0);
            dv.strand = Some(Verdict::from_bool(off == 0));
            dv.off_diagonal = Some(off);
        }
        degrees.push(dv);
    }
    let mut cert = KoszulCertificate {
        target,
        name,
        method,
        max_degree,
        degrees,
        certified_through: 0,
        agree: None,
        verdict: Verdict::Pass,
    };
    let dist = cert.cumulative(false);
    let strand = cert.cumulative(true);
    if method == KoszulMethod::Both {
        cert.agree = Some(dist == strand);
    }
    let passing = dist.iter().zip(&strand).take_while(|(a, b)| **a && **b).count();
    cert.certified_through = if passing == 0 { first.saturating_sub(1) } else { cert.degrees[passing - 1].degree };
    let all = passing == cert.degrees.len();
    cert.verdict = Verdict::from_bool(all && cert.agree != Some(false));
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::quadratic::QuadraticAlgebra;

    type Q = Rational;

    fn residue(a: QuadraticAlgebra<Q>) -> GradedContext<Q> {
        residue_context(&GradedContext::new(a)).unwrap()
    }

    #[test]
    fn koszul_complex_strands() {
        let ctx = residue(QuadraticAlgebra::symmetric(2));
        assert_eq!(bar_strand(&ctx, 2).unwrap().homology_dims().unwrap(), vec![0, 0, 1]);
        assert_eq!(bar_strand(&ctx, 0).unwrap().dims(), vec![1]);
        let four = bar_strand(&ctx, 4).unwrap();
        assert_eq!(four.summands(), vec![5, 10, 10, 5, 1]);
        assert_eq!(four.homology_dims().unwrap(), vec![0; 5]);
    }

    #[test]
    fn tor_of_residue_field() {
        let ctx = residue(QuadraticAlgebra::symmetric(3));
        let t = tor_dims(&ctx, 3, true).unwrap();
        assert!(t.consistent);
        for i in 0..=3 {
            assert_eq!(t.get(i, i).unwrap().bar_strand, Some([1, 3, 3, 1][i]));
        }
    }

    #[test]
    fn priddy_resolves_residue_field() {
        let a = QuadraticAlgebra::<Q>::symmetric(2);
        let ctx = GradedContext::new(a.clone()).with_left(QuadraticModule::trivial(&a, Side::Left, 0)).unwrap();
        let r = priddy(&ctx, 3).unwrap();
        assert_eq!(r.generator_dims, vec![1, 2, 1, 0]);
        assert!(r.exact);
    }

    #[test]
    fn certificates() {
        let ctx = GradedContext::<Q>::new(QuadraticAlgebra::symmetric(2));
        let c = certify_koszul(&ctx, KoszulTarget::Algebra, 4, KoszulMethod::Both).unwrap();
        assert!(c.verdict.is_pass());
        assert_eq!(c.agree, Some(true));
        let a = QuadraticAlgebra::<Q>::symmetric(2);
        let mctx = ctx.with_left(QuadraticModule::truncation(&a, Side::Left, 1).unwrap()).unwrap();
        let c = certify_koszul(&mctx, KoszulTarget::Module, 4, KoszulMethod::Both).unwrap();
        assert!(c.verdict.is_pass());
    }

    #[test]
    fn ext_of_residue_field() {
        let a = QuadraticAlgebra::<Q>::symmetric(3);
        let ctx = GradedContext::new(a.clone()).with_left(QuadraticModule::trivial(&a, Side::Left, 0)).unwrap();
        let e = ext_dims(&ctx, 3, true).unwrap();
        assert!(e.consistent);
        for i in 0..=3 {
            assert_eq!(e.get(i, i).unwrap().closed_form, Some([1, 3, 3, 1][i]));
        }
    }
}
