//! Quadratic algebras and modules, their graded pieces, and the contexts in
//! which Schur modules are realized.
//!
//! A graded piece is the quotient of a tensor power of the generator space
//! by the sum of all relation placements. A [`GradedContext`] fixes an
//! algebra with optional modules at either end and hands out the relation
//! [`Layout`] for each number of algebra slots.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::compositions::Composition;
use crate::error::{mismatch, EngineError, Result};
use crate::field::{Field, FieldKind};
use crate::lattice::SubspaceCollection;
use crate::linalg::{Matrix, Subspace};
use crate::tensor::{BlockedSubquotient, CutState, Layout, Slot, TensorSpace};

/// Default bound on internal degrees.
pub const DEFAULT_DEGREE_BOUND: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Permutes `W₁ ⊗ W₂` to `W₂ ⊗ W₁` (`a` and `b` are the factor dims).
fn swap_factors<F: Field>(sub: &Subspace<F>, a: usize, b: usize) -> Subspace<F> {
    let rows = sub
        .basis()
        .row_iter()
        .map(|r| {
            let mut out = vec![F::zero(); a * b];
            for i in 0..a {
                for j in 0..b {
                    out[j * a + i] = r[i * b + j].clone();
                }
            }
            out
        })
        .collect();
    Subspace::from_rows(a * b, rows).expect("rows have ambient length")
}

/// `{x : Σ x_r · rows[r] = 0}`.
fn left_kernel<F: Field>(cols: usize, rows: Vec<Vec<F>>) -> Result<Subspace<F>> {
    Ok(Matrix::from_rows(cols, rows)?.transpose().kernel())
}

fn kron_vec<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.clone() * y.clone());
        }
    }
    out
}

fn standard_weights(m: usize) -> Vec<Vec<i64>> {
    (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect()
}

fn slot_of(dim: usize, weights: Option<&Vec<Vec<i64>>>) -> Result<Slot> {
    match weights {
        Some(w) => {
            if w.len() != dim {
                return Err(mismatch("weights per generator", w.len(), dim));
            }
            Slot::weighted(w.clone())
        }
        None => Ok(Slot::plain(dim)),
    }
}

/// `T(V)/(Q₂)` with `Q₂ ⊂ V ⊗ V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticAlgebra<F: Field> {
    name: String,
    generators: Vec<String>,
    weights: Option<Vec<Vec<i64>>>,
    relations: Subspace<F>,
}

impl<F: Field> QuadraticAlgebra<F> {
    pub fn new(
        name: impl Into<String>,
        generators: Vec<String>,
        weights: Option<Vec<Vec<i64>>>,
        relations: Subspace<F>,
    ) -> Result<Self> {
        let m = generators.len();
        if relations.ambient_dim() != m * m {
            return Err(mismatch("relation ambient", relations.ambient_dim(), m * m));
        }
        let alg = QuadraticAlgebra { name: name.into(), generators, weights, relations };
        if alg.weights.is_some() {
            let slot = alg.slot()?;
            TensorSpace::new(vec![slot.clone(), slot])?.restrict(&alg.relations)?;
        }
        Ok(alg)
    }

    fn named(prefix: &str, m: usize) -> Vec<String> {
        (1..=m).map(|i| format!("{prefix}{i}")).collect()
    }

    /// `S(V)` on `m` variables with the standard torus weights.
    pub fn symmetric(m: usize) -> Self {
        let mut rows = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let mut v = vec![F::zero(); m * m];
                v[i * m + j] = F::one();
                v[j * m + i] = -F::one();
                rows.push(v);
            }
        }
        let q = Subspace::from_rows(m * m, rows).expect("rows have ambient length");
        QuadraticAlgebra::new(format!("sym{m}"), Self::named("x", m), Some(standard_weights(m)), q)
            .expect("built-in is homogeneous")
    }

    /// `∧V` on `m` variables with the standard torus weights.
    pub fn exterior(m: usize) -> Self {
        let mut rows = Vec::new();
        for i in 0..m {
            for j in i..m {
                let mut v = vec![F::zero(); m * m];
                v[i * m + j] = F::one();
                v[j * m + i] = F::one();
                rows.push(v);
            }
        }
        let q = Subspace::from_rows(m * m, rows).expect("rows have ambient length");
        QuadraticAlgebra::new(format!("ext{m}"), Self::named("x", m), Some(standard_weights(m)), q)
            .expect("built-in is homogeneous")
    }

    /// `T(V)` on `m` variables with the standard torus weights.
    pub fn tensor(m: usize) -> Self {
        QuadraticAlgebra::new(format!("tensor{m}"), Self::named("x", m), Some(standard_weights(m)), Subspace::zero(m * m))
            .expect("built-in is homogeneous")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn gen_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn weights(&self) -> Option<&Vec<Vec<i64>>> {
        self.weights.as_ref()
    }

    /// Drops the multigrading.
    pub fn unweighted(mut self) -> Self {
        self.weights = None;
        self
    }

    pub fn relations(&self) -> &Subspace<F> {
        &self.relations
    }

    pub fn slot(&self) -> Result<Slot> {
        slot_of(self.gen_count(), self.weights.as_ref())
    }

    /// `A^!`: annihilator relations on the dual generators, weights negated.
    pub fn quadratic_dual(&self) -> Self {
        QuadraticAlgebra {
            name: format!("{}^!", self.name),
            generators: self.generators.iter().map(|g| format!("{g}*")).collect(),
            weights: self.weights.as_ref().map(|w| w.iter().map(|v| v.iter().map(|x| -x).collect()).collect()),
            relations: self.relations.annihilator(),
        }
    }

    /// The opposite algebra: relations with the two tensor factors swapped.
    pub fn opposite(&self) -> Self {
        let m = self.gen_count();
        QuadraticAlgebra {
            name: format!("{}^op", self.name),
            generators: self.generators.clone(),
            weights: self.weights.clone(),
            relations: swap_factors(&self.relations, m, m),
        }
    }

    /// The graded piece `A_d`.
    pub fn piece(&self, d: usize) -> Result<Piece<F>> {
        let slot = self.slot()?;
        let layout = Layout::chain(vec![slot; d], &vec![Some(&self.relations); d.saturating_sub(1)])?;
        Piece::merged(Arc::new(layout))
    }

    /// `dim A_d` for `d = 0..=max`.
    pub fn hilbert(&self, max: usize) -> Result<Vec<usize>> {
        (0..=max).map(|d| Ok(self.piece(d)?.dim())).collect()
    }

    /// The `d`-th Veronese power with its degree-two relations
    /// `ker(A_d ⊗ A_d → A_{2d})`. Whether these generate all relations is
    /// not checked.
    pub fn veronese(&self, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(EngineError::Argument("Veronese degree must be positive".into()));
        }
        if d == 1 {
            return Ok(self.clone());
        }
        let low = self.piece(d)?;
        let high = self.piece(2 * d)?;
        let basis = low.basis();
        let k = basis.len();
        let mut rows = Vec::with_capacity(k * k);
        for (a, _) in &basis {
            for (b, _) in &basis {
                rows.push(high.coordinates(&kron_vec(a, b))?);
            }
        }
        let relations = left_kernel(high.dim(), rows)?;
        let weights = self.weights.as_ref().map(|_| basis.iter().map(|(_, w)| w.clone()).collect());
        QuadraticAlgebra::new(format!("{}^({d})", self.name), Self::named("v", k), weights, relations)
    }

    /// The Segre product `A ∘ B` on generators `V ⊗ W`. Weights are
    /// concatenated when both factors carry them.
    pub fn segre(&self, other: &Self) -> Result<Self> {
        let (ma, mb) = (self.gen_count(), other.gen_count());
        let (a2, b2) = (self.piece(2)?, other.piece(2)?);
        let m = ma * mb;
        let mut rows = Vec::with_capacity(m * m);
        let unit = |n: usize, i: usize, j: usize| {
            let mut v = vec![F::zero(); n * n];
            v[i * n + j] = F::one();
            v
        };
        for i in 0..ma {
            for j in 0..mb {
                for k in 0..ma {
                    for l in 0..mb {
                        let x = a2.coordinates(&unit(ma, i, k))?;
                        let y = b2.coordinates(&unit(mb, j, l))?;
                        rows.push(kron_vec(&x, &y));
                    }
                }
            }
        }
        let relations = left_kernel(a2.dim() * b2.dim(), rows)?;
        let generators = self
            .generators
            .iter()
            .flat_map(|g| other.generators.iter().map(move |h| format!("{g}.{h}")))
            .collect();
        let weights = match (&self.weights, &other.weights) {
            (Some(wa), Some(wb)) => Some(
                wa.iter().flat_map(|x| wb.iter().map(move |y| x.iter().chain(y).copied().collect())).collect(),
            ),
            _ => None,
        };
        QuadraticAlgebra::new(format!("{}∘{}", self.name, other.name), generators, weights, relations)
    }
}

/// A module generated in degree `t` with relations in degree `t + 1`:
/// `Q ⊂ V ⊗ M_t` for a left module, `Q ⊂ M_t ⊗ V` for a right module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticModule<F: Field> {
    name: String,
    side: Side,
    initial_degree: usize,
    generators: Vec<String>,
    weights: Option<Vec<Vec<i64>>>,
    relations: Subspace<F>,
    algebra_gens: usize,
}

impl<F: Field> QuadraticModule<F> {
    pub fn new(
        name: impl Into<String>,
        side: Side,
        initial_degree: usize,
        generators: Vec<String>,
        weights: Option<Vec<Vec<i64>>>,
        relations: Subspace<F>,
        algebra_gens: usize,
    ) -> Result<Self> {
        let g = generators.len();
        if relations.ambient_dim() != g * algebra_gens {
            return Err(mismatch("module relation ambient", relations.ambient_dim(), g * algebra_gens));
        }
        if let Some(w) = &weights {
            if w.len() != g {
                return Err(mismatch("module weights", w.len(), g));
            }
        }
        Ok(QuadraticModule { name: name.into(), side, initial_degree, generators, weights, relations, algebra_gens })
    }

    /// The residue field concentrated in degree `t`.
    pub fn trivial(algebra: &QuadraticAlgebra<F>, side: Side, t: usize) -> Self {
        let m = algebra.gen_count();
        let weights = algebra.weights.as_ref().map(|w| vec![vec![0; w.first().map_or(0, |v| v.len())]]);
        QuadraticModule {
            name: "k".into(),
            side,
            initial_degree: t,
            generators: vec!["1".into()],
            weights,
            relations: Subspace::full(m),
            algebra_gens: m,
        }
    }

    /// The algebra as a module over itself.
    pub fn free(algebra: &QuadraticAlgebra<F>, side: Side) -> Self {
        let m = algebra.gen_count();
        let weights = algebra.weights.as_ref().map(|w| vec![vec![0; w.first().map_or(0, |v| v.len())]]);
        QuadraticModule {
            name: algebra.name.clone(),
            side,
            initial_degree: 0,
            generators: vec!["1".into()],
            weights,
            relations: Subspace::zero(m),
            algebra_gens: m,
        }
    }

    /// `A_+^r = A_{≥ r}`, generated by `A_r` with relations
    /// `ker(V ⊗ A_r → A_{r+1})` (or the mirror for a right module).
    pub fn truncation(algebra: &QuadraticAlgebra<F>, side: Side, r: usize) -> Result<Self> {
        if r == 0 {
            return Ok(Self::free(algebra, side));
        }
        let m = algebra.gen_count();
        let low = algebra.piece(r)?;
        let high = algebra.piece(r + 1)?;
        let basis = low.basis();
        let g = basis.len();
        let unit = |i: usize| {
            let mut v = vec![F::zero(); m];
            v[i] = F::one();
            v
        };
        let mut rows = Vec::with_capacity(m * g);
        match side {
            Side::Left => {
                for i in 0..m {
                    for (b, _) in &basis {
                        rows.push(high.coordinates(&kron_vec(&unit(i), b))?);
                    }
                }
            }
            Side::Right => {
                for (b, _) in &basis {
                    for i in 0..m {
                        rows.push(high.coordinates(&kron_vec(b, &unit(i)))?);
                    }
                }
            }
        }
        let relations = left_kernel(high.dim(), rows)?;
        let weights = algebra.weights.as_ref().map(|_| basis.iter().map(|(_, w)| w.clone()).collect());
        let generators = (1..=g).map(|i| format!("b{i}")).collect();
        Self::new(format!("{}_+^{r}", algebra.name), side, r, generators, weights, relations, m)
    }

    /// The Segre product `M ∘ M'` of two modules on the same side, generated
    /// by `M_t ⊗ M'_{t'}` over `A ∘ B`. Its relations are the kernel of the
    /// multiplication into `M_{t+1} ⊗ M'_{t'+1}`. The result is placed in
    /// degree `max(t, t')`, which regrades the factor that starts lower.
    pub fn segre(&self, other: &Self) -> Result<Self> {
        if self.side != other.side {
            return Err(EngineError::Argument("Segre product of modules on different sides".into()));
        }
        let (g1, g2) = (self.gen_count(), other.gen_count());
        let (ma, mb) = (self.algebra_gens, other.algebra_gens);
        let full1 = Subspace::<F>::full(g2 * mb);
        let full2 = Subspace::<F>::full(g1 * ma);
        let a = Matrix::kron(self.relations.basis(), full1.basis());
        let b = Matrix::kron(full2.basis(), other.relations.basis());
        let (_, right1, left2, right2) = match self.side {
            Side::Right => (g1, ma, g2, mb),
            Side::Left => (ma, g1, mb, g2),
        };
        // (x1 ⊗ y1) ⊗ (x2 ⊗ y2) ↦ (x1 ⊗ x2) ⊗ (y1 ⊗ y2)
        let target = |i: usize| {
            let (first, second) = (i / (left2 * right2), i % (left2 * right2));
            let (x1, y1) = (first / right1, first % right1);
            let (x2, y2) = (second / right2, second % right2);
            (x1 * left2 + x2) * (right1 * right2) + y1 * right2 + y2
        };
        let n = g1 * g2 * ma * mb;
        let rows = a
            .row_iter()
            .chain(b.row_iter())
            .map(|r| {
                let mut v = vec![F::zero(); n];
                for (i, x) in r.iter().enumerate() {
                    v[target(i)] = x.clone();
                }
                v
            })
            .collect();
        let relations = Subspace::from_rows(n, rows)?;
        let generators = self
            .generators
            .iter()
            .flat_map(|g| other.generators.iter().map(move |h| format!("{g}.{h}")))
            .collect();
        let weights = match (&self.weights, &other.weights) {
            (Some(wa), Some(wb)) => Some(
                wa.iter().flat_map(|x| wb.iter().map(move |y| x.iter().chain(y).copied().collect())).collect(),
            ),
            _ => None,
        };
        Self::new(
            format!("{}∘{}", self.name, other.name),
            self.side,
            self.initial_degree.max(other.initial_degree),
            generators,
            weights,
            relations,
            ma * mb,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn initial_degree(&self) -> usize {
        self.initial_degree
    }

    pub fn gen_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn weights(&self) -> Option<&Vec<Vec<i64>>> {
        self.weights.as_ref()
    }

    pub fn unweighted(mut self) -> Self {
        self.weights = None;
        self
    }

    pub fn relations(&self) -> &Subspace<F> {
        &self.relations
    }

    pub fn algebra_gens(&self) -> usize {
        self.algebra_gens
    }

    pub fn slot(&self) -> Result<Slot> {
        slot_of(self.gen_count(), self.weights.as_ref())
    }

    /// Relations transported to the other side by swapping the factors.
    fn swapped_relations(&self, rel: &Subspace<F>) -> Subspace<F> {
        let (m, g) = (self.algebra_gens, self.gen_count());
        match self.side {
            Side::Left => swap_factors(rel, m, g),
            Side::Right => swap_factors(rel, g, m),
        }
    }

    fn negated_weights(&self) -> Option<Vec<Vec<i64>>> {
        self.weights.as_ref().map(|w| w.iter().map(|v| v.iter().map(|x| -x).collect()).collect())
    }

    /// `M^!`: annihilator relations on `M_t*`, moved to the other side.
    /// Over `A^!` read in reversed tensor order, i.e. over `(A^!)^op` in
    /// this engine's fixed order.
    pub fn module_dual(&self) -> Self {
        QuadraticModule {
            name: format!("{}^!", self.name),
            side: self.side.flip(),
            initial_degree: self.initial_degree,
            generators: self.generators.iter().map(|g| format!("{g}*")).collect(),
            weights: self.negated_weights(),
            relations: self.swapped_relations(&self.relations.annihilator()),
            algebra_gens: self.algebra_gens,
        }
    }

    /// The graded dual as a module on the other side: relations are carried
    /// over unchanged by swapping the factors. Exact for modules concentrated
    /// in their generating degree, such as the residue field.
    pub fn graded_dual_module(&self) -> Self {
        QuadraticModule {
            name: format!("{}^*", self.name),
            side: self.side.flip(),
            initial_degree: self.initial_degree,
            generators: self.generators.iter().map(|g| format!("{g}*")).collect(),
            weights: self.negated_weights(),
            relations: self.swapped_relations(&self.relations),
            algebra_gens: self.algebra_gens,
        }
    }

    /// The graded piece `M_{t+d}` over `algebra`.
    pub fn piece(&self, algebra: &QuadraticAlgebra<F>, d: usize) -> Result<Piece<F>> {
        let ctx = match self.side {
            Side::Left => GradedContext::new(algebra.clone()).with_left(self.clone())?,
            Side::Right => GradedContext::new(algebra.clone()).with_right(self.clone())?,
        };
        let variant = match self.side {
            Side::Left => Variant::LeftModule,
            Side::Right => Variant::RightModule,
        };
        Piece::merged(ctx.layout(variant, d)?)
    }
}

/// A graded piece realized as a quotient of a tensor space by a sum of
/// relation placements.
#[derive(Clone, Debug)]
pub struct Piece<F: Field> {
    layout: Arc<Layout<F>>,
    quotient: BlockedSubquotient<F>,
}

impl<F: Field> Piece<F> {
    /// Quotient of the layout's ambient space by all of its members.
    pub fn merged(layout: Arc<Layout<F>>) -> Result<Self> {
        let states = vec![CutState::Merged; layout.len()];
        let quotient = layout.realize(&states)?;
        Ok(Piece { layout, quotient })
    }

    pub fn layout(&self) -> &Arc<Layout<F>> {
        &self.layout
    }

    pub fn quotient(&self) -> &BlockedSubquotient<F> {
        &self.quotient
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Coset representatives as global vectors with their weights, block by
    /// block.
    pub fn basis(&self) -> Vec<(Vec<F>, Vec<i64>)> {
        let space = self.layout.space();
        let mut out = Vec::with_capacity(self.dim());
        for (b, part) in self.quotient.parts.iter().enumerate() {
            for r in part.representatives().row_iter() {
                out.push((space.embed(b, r), space.blocks()[b].weight.clone()));
            }
        }
        out
    }

    /// Coordinates of the class of a global vector in the basis of
    /// [`Piece::basis`].
    pub fn coordinates(&self, v: &[F]) -> Result<Vec<F>> {
        let space = self.layout.space();
        if v.len() != space.dim() {
            return Err(mismatch("piece vector", v.len(), space.dim()));
        }
        let mut out = Vec::with_capacity(self.dim());
        for (part, local) in self.quotient.parts.iter().zip(space.split(v)) {
            out.extend(part.coordinates(&local)?);
        }
        Ok(out)
    }
}

/// Which modules sit at the ends of the tensor products.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    /// `A` alone.
    #[serde(rename = "A")]
    Algebra,
    /// `A, N` with a left module on the right end.
    #[serde(rename = "A,M")]
    LeftModule,
    /// `M, A` with a right module on the left end.
    #[serde(rename = "M,A")]
    RightModule,
    /// `M, A, N`.
    #[serde(rename = "M,A,N")]
    Double,
}

impl Variant {
    pub fn has_right(self) -> bool {
        matches!(self, Variant::RightModule | Variant::Double)
    }

    pub fn has_left(self) -> bool {
        matches!(self, Variant::LeftModule | Variant::Double)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variant::Algebra => "A",
            Variant::LeftModule => "A,M",
            Variant::RightModule => "M,A",
            Variant::Double => "M,A,N",
        };
        write!(f, "{s}")
    }
}

type LayoutCache<F> = RwLock<HashMap<(Variant, usize), Arc<Layout<F>>>>;
type PieceCache<F> = RwLock<HashMap<(Variant, usize, Vec<CutState>), Arc<BlockedSubquotient<F>>>>;

/// An algebra with an optional right module `M` on the left end and an
/// optional left module `N` on the right end.
///
/// The layout for `n` algebra slots is `[M_t] V^{⊗n} [N_s]`, with the module
/// relations at the junctions and `Q₂` at every internal boundary. With no
/// algebra slots between the two modules the junction carries no
/// multiplication.
pub struct GradedContext<F: Field> {
    algebra: Arc<QuadraticAlgebra<F>>,
    right: Option<Arc<QuadraticModule<F>>>,
    left: Option<Arc<QuadraticModule<F>>>,
    degree_bound: usize,
    layouts: LayoutCache<F>,
    pieces: PieceCache<F>,
}

impl<F: Field> fmt::Debug for GradedContext<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedContext")
            .field("algebra", &self.algebra.name)
            .field("right", &self.right.as_ref().map(|m| m.name.clone()))
            .field("left", &self.left.as_ref().map(|m| m.name.clone()))
            .field("degree_bound", &self.degree_bound)
            .finish()
    }
}

impl<F: Field> Clone for GradedContext<F> {
    fn clone(&self) -> Self {
        GradedContext {
            algebra: self.algebra.clone(),
            right: self.right.clone(),
            left: self.left.clone(),
            degree_bound: self.degree_bound,
            layouts: RwLock::new(self.layouts.read().expect("cache lock").clone()),
            pieces: RwLock::new(self.pieces.read().expect("cache lock").clone()),
        }
    }
}

impl<F: Field> GradedContext<F> {
    pub fn new(algebra: QuadraticAlgebra<F>) -> Self {
        GradedContext {
            algebra: Arc::new(algebra),
            right: None,
            left: None,
            degree_bound: DEFAULT_DEGREE_BOUND,
            layouts: RwLock::new(HashMap::new()),
            pieces: RwLock::new(HashMap::new()),
        }
    }

    fn check_module(&self, module: &QuadraticModule<F>, side: Side) -> Result<()> {
        if module.side != side {
            return Err(EngineError::Argument(format!("module {} is on the wrong side", module.name)));
        }
        if module.algebra_gens != self.algebra.gen_count() {
            return Err(mismatch("module algebra generators", module.algebra_gens, self.algebra.gen_count()));
        }
        Ok(())
    }

    fn reset(mut self) -> Self {
        self.layouts = RwLock::new(HashMap::new());
        self.pieces = RwLock::new(HashMap::new());
        self
    }

    /// Attaches a left module `N` at the right end.
    pub fn with_left(mut self, module: QuadraticModule<F>) -> Result<Self> {
        self.check_module(&module, Side::Left)?;
        self.left = Some(Arc::new(module));
        let ctx = self.reset();
        ctx.layout(Variant::LeftModule, 1)?;
        Ok(ctx)
    }

    /// Attaches a right module `M` at the left end.
    pub fn with_right(mut self, module: QuadraticModule<F>) -> Result<Self> {
        self.check_module(&module, Side::Right)?;
        self.right = Some(Arc::new(module));
        let ctx = self.reset();
        ctx.layout(Variant::RightModule, 1)?;
        Ok(ctx)
    }

    pub fn with_degree_bound(mut self, bound: usize) -> Result<Self> {
        if bound == 0 {
            return Err(EngineError::Config("degree bound must be at least 1".into()));
        }
        self.degree_bound = bound;
        Ok(self)
    }

    pub fn algebra(&self) -> &QuadraticAlgebra<F> {
        &self.algebra
    }

    pub fn left(&self) -> Option<&QuadraticModule<F>> {
        self.left.as_deref()
    }

    pub fn right(&self) -> Option<&QuadraticModule<F>> {
        self.right.as_deref()
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// Whether the modules needed by `variant` are attached.
    pub fn supports(&self, variant: Variant) -> bool {
        (!variant.has_right() || self.right.is_some()) && (!variant.has_left() || self.left.is_some())
    }

    fn require(&self, variant: Variant) -> Result<()> {
        if self.supports(variant) {
            Ok(())
        } else {
            Err(EngineError::Argument(format!("context has no modules for variant {variant}")))
        }
    }

    /// `t`, or 0 without a right module.
    pub fn right_degree(&self, variant: Variant) -> usize {
        if variant.has_right() {
            self.right.as_ref().map_or(0, |m| m.initial_degree)
        } else {
            0
        }
    }

    /// `s`, or 0 without a left module.
    pub fn left_degree(&self, variant: Variant) -> usize {
        if variant.has_left() {
            self.left.as_ref().map_or(0, |m| m.initial_degree)
        } else {
            0
        }
    }

    /// Internal degree of the layout with `n` algebra slots.
    pub fn internal_degree(&self, variant: Variant, n: usize) -> usize {
        self.right_degree(variant) + n + self.left_degree(variant)
    }

    pub fn check_degree(&self, degree: usize) -> Result<()> {
        if degree > self.degree_bound {
            return Err(EngineError::Config(format!(
                "internal degree {degree} exceeds the degree bound {}",
                self.degree_bound
            )));
        }
        Ok(())
    }

    fn weighted(&self, variant: Variant) -> bool {
        self.algebra.weights.is_some()
            && (!variant.has_right() || self.right.as_ref().is_some_and(|m| m.weights.is_some()))
            && (!variant.has_left() || self.left.as_ref().is_some_and(|m| m.weights.is_some()))
    }

    /// Slot list `[M_t] V^{⊗n} [N_s]`; weights are dropped unless every
    /// factor carries them.
    pub fn slots(&self, variant: Variant, n: usize) -> Result<Vec<Slot>> {
        self.require(variant)?;
        let w = self.weighted(variant);
        let pick = |dim: usize, weights: Option<&Vec<Vec<i64>>>| slot_of(dim, if w { weights } else { None });
        let mut slots = Vec::with_capacity(n + 2);
        if variant.has_right() {
            let m = self.right.as_ref().expect("required");
            slots.push(pick(m.gen_count(), m.weights.as_ref())?);
        }
        let v = pick(self.algebra.gen_count(), self.algebra.weights.as_ref())?;
        slots.extend(std::iter::repeat_n(v, n));
        if variant.has_left() {
            let m = self.left.as_ref().expect("required");
            slots.push(pick(m.gen_count(), m.weights.as_ref())?);
        }
        Ok(slots)
    }

    /// The relation layout with `n` algebra slots (cached).
    pub fn layout(&self, variant: Variant, n: usize) -> Result<Arc<Layout<F>>> {
        self.require(variant)?;
        self.check_degree(self.internal_degree(variant, n))?;
        if let Some(l) = self.layouts.read().expect("cache lock").get(&(variant, n)) {
            return Ok(l.clone());
        }
        let slots = self.slots(variant, n)?;
        let rels = self.cut_relations(variant, n)?;
        let layout = Arc::new(Layout::chain(slots, &rels)?);
        let mut cache = self.layouts.write().expect("cache lock");
        Ok(cache.entry((variant, n)).or_insert(layout).clone())
    }

    /// The relation sitting at each slot boundary of the layout with `n`
    /// algebra slots; `None` where two modules meet directly.
    pub fn cut_relations(&self, variant: Variant, n: usize) -> Result<Vec<Option<&Subspace<F>>>> {
        self.require(variant)?;
        let mut rels = Vec::with_capacity(n + 1);
        if variant.has_right() && n > 0 {
            rels.push(Some(&self.right.as_ref().expect("required").relations));
        }
        rels.extend(std::iter::repeat_n(Some(&self.algebra.relations), n.saturating_sub(1)));
        if variant.has_left() {
            if n > 0 {
                rels.push(Some(&self.left.as_ref().expect("required").relations));
            } else if variant.has_right() {
                rels.push(None);
            }
        }
        Ok(rels)
    }

    /// Index of the first algebra-algebra boundary in the layout.
    pub fn first_internal_cut(&self, variant: Variant) -> usize {
        usize::from(variant.has_right())
    }

    /// Cut states of `S^α`: cuts inside parts merged, all other boundaries
    /// (including both junctions) kept.
    pub fn schur_states(&self, variant: Variant, alpha: &Composition) -> Vec<CutState> {
        self.states_with(variant, alpha, CutState::Kept, CutState::Kept)
    }

    /// Cut states with the given states at the part boundaries and at the
    /// module junctions; cuts inside parts are merged.
    pub fn states_with(
        &self,
        variant: Variant,
        alpha: &Composition,
        boundary: CutState,
        junction: CutState,
    ) -> Vec<CutState> {
        let n = alpha.weight();
        let mut states = Vec::with_capacity(n + 1);
        if n == 0 {
            if variant == Variant::Double {
                states.push(CutState::Detached);
            }
            return states;
        }
        if variant.has_right() {
            states.push(junction);
        }
        let merged = alpha.phi_inverse();
        for c in 1..n {
            states.push(if merged.binary_search(&c).is_ok() { CutState::Merged } else { boundary });
        }
        if variant.has_left() {
            states.push(junction);
        }
        states
    }

    /// The relation collection on `n` tensor factors, each module generator
    /// space counting as one factor; member `i` is the relation placed at
    /// boundary `i`. Boundaries without multiplication are omitted.
    pub fn relation_collection(&self, variant: Variant, n: usize) -> Result<SubspaceCollection<F>> {
        let ends = usize::from(variant.has_right()) + usize::from(variant.has_left());
        if n < ends.max(1) {
            return Err(EngineError::Argument(format!("{n} factors cannot hold variant {variant}")));
        }
        let layout = self.layout(variant, n - ends)?;
        let space = layout.space();
        let members = (0..layout.len())
            .filter_map(|c| layout.member(c).map(|m| m.to_global(space)))
            .collect();
        SubspaceCollection::new(space.dim(), members)
    }

    /// `(A ⊗ N)_α` and its variants: parts merged, part boundaries and
    /// module junctions tensored.
    pub fn graded_piece(&self, variant: Variant, alpha: &Composition) -> Result<Arc<BlockedSubquotient<F>>> {
        let states = self.states_with(variant, alpha, CutState::Detached, CutState::Detached);
        self.realize(variant, alpha.weight(), &states)
    }

    /// `(∩ kept) / (Σ merged)` in the layout with `n` algebra slots (cached).
    pub fn realize(&self, variant: Variant, n: usize, states: &[CutState]) -> Result<Arc<BlockedSubquotient<F>>> {
        let key = (variant, n, states.to_vec());
        if let Some(p) = self.pieces.read().expect("cache lock").get(&key) {
            return Ok(p.clone());
        }
        let sq = Arc::new(self.layout(variant, n)?.realize(states)?);
        let mut cache = self.pieces.write().expect("cache lock");
        Ok(cache.entry(key).or_insert(sq).clone())
    }

    /// The dual context: `(A^!)^op` with `N^!` as the new right module and
    /// `M^!` as the new left module. Its layouts are the reversed
    /// annihilator layouts of this context.
    pub fn dual(&self) -> Result<Self> {
        let algebra = self.algebra.quadratic_dual().opposite();
        let mut ctx = GradedContext::new(algebra).with_degree_bound(self.degree_bound)?;
        if let Some(n) = &self.left {
            ctx = ctx.with_right(n.module_dual())?;
        }
        if let Some(m) = &self.right {
            ctx = ctx.with_left(m.module_dual())?;
        }
        Ok(ctx)
    }
}

// ---------------------------------------------------------------------------
// Presentation files

type SparseRelation = Vec<((usize, usize), String)>;

/// The JSON form of an algebra, optionally with one module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub name: String,
    pub field: FieldKind,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Vec<i64>>>,
    pub relations: Vec<SparseRelation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module_generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module_weights: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module_relations: Option<Vec<SparseRelation>>,
}

fn sparse_rows<F: Field>(sub: &Subspace<F>, right_dim: usize) -> Vec<SparseRelation> {
    sub.basis()
        .row_iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(c, x)| ((c / right_dim, c % right_dim), x.to_string()))
                .collect()
        })
        .collect()
}

fn dense_rows<F: Field>(rows: &[SparseRelation], left_dim: usize, right_dim: usize, what: &str) -> Result<Subspace<F>> {
    let n = left_dim * right_dim;
    let mut out = Vec::with_capacity(rows.len());
    for (k, row) in rows.iter().enumerate() {
        let mut v = vec![F::zero(); n];
        for ((i, j), c) in row {
            if *i >= left_dim || *j >= right_dim {
                return Err(EngineError::Parse(format!(
                    "{what}[{k}]: index pair ({i}, {j}) outside {left_dim} x {right_dim}"
                )));
            }
            let x = F::parse_coeff(c).map_err(|e| EngineError::Parse(format!("{what}[{k}]: {e}")))?;
            v[i * right_dim + j] = v[i * right_dim + j].clone() + x;
        }
        out.push(v);
    }
    Subspace::from_rows(n, out)
}

impl PresentationFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| EngineError::Parse(format!("presentation: {e}")))
    }

    pub fn from_algebra<F: Field>(alg: &QuadraticAlgebra<F>) -> Self {
        let m = alg.gen_count();
        PresentationFile {
            name: alg.name.clone(),
            field: F::kind(),
            generators: alg.generators.clone(),
            weights: alg.weights.clone(),
            relations: sparse_rows(&alg.relations, m),
            side: None,
            initial_degree: None,
            module_name: None,
            module_generators: None,
            module_weights: None,
            module_relations: None,
        }
    }

    pub fn with_module<F: Field>(mut self, module: &QuadraticModule<F>) -> Self {
        let right_dim = match module.side {
            Side::Left => module.gen_count(),
            Side::Right => module.algebra_gens,
        };
        self.side = Some(module.side);
        self.initial_degree = Some(module.initial_degree);
        self.module_name = Some(module.name.clone());
        self.module_generators = Some(module.generators.clone());
        self.module_weights = module.weights.clone();
        self.module_relations = Some(sparse_rows(&module.relations, right_dim));
        self
    }

    pub fn algebra<F: Field>(&self) -> Result<QuadraticAlgebra<F>> {
        if self.field != F::kind() {
            return Err(EngineError::Config(format!("file is over {}, engine runs over {}", self.field, F::kind())));
        }
        let m = self.generators.len();
        let relations = dense_rows(&self.relations, m, m, "relations")?;
        QuadraticAlgebra::new(self.name.clone(), self.generators.clone(), self.weights.clone(), relations)
    }

    pub fn has_module(&self) -> bool {
        self.module_generators.is_some()
    }

    pub fn module<F: Field>(&self) -> Result<QuadraticModule<F>> {
        let missing = |f: &str| EngineError::Parse(format!("module field {f:?} missing"));
        let gens = self.module_generators.clone().ok_or_else(|| missing("module_generators"))?;
        let side = self.side.ok_or_else(|| missing("side"))?;
        let t = self.initial_degree.ok_or_else(|| missing("initial_degree"))?;
        let rows = self.module_relations.as_deref().unwrap_or(&[]);
        let (m, g) = (self.generators.len(), gens.len());
        let relations = match side {
            Side::Left => dense_rows(rows, m, g, "module_relations")?,
            Side::Right => dense_rows(rows, g, m, "module_relations")?,
        };
        let name = self.module_name.clone().unwrap_or_else(|| format!("{}-module", self.name));
        QuadraticModule::new(name, side, t, gens, self.module_weights.clone(), relations, m)
    }

    /// Sorted-key JSON with coefficients in lowest terms.
    pub fn canonical_json(&self) -> String {
        let v = serde_json::to_value(self).expect("presentation serializes");
        serde_json::to_string(&v).expect("value serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    type Q = Rational;

    #[test]
    fn builtin_hilbert_series() {
        assert_eq!(QuadraticAlgebra::<Q>::symmetric(2).hilbert(4).unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(QuadraticAlgebra::<Q>::exterior(3).hilbert(4).unwrap(), vec![1, 3, 3, 1, 0]);
        assert_eq!(QuadraticAlgebra::<Q>::tensor(2).hilbert(3).unwrap(), vec![1, 2, 4, 8]);
    }

    #[test]
    fn duals() {
        let s = QuadraticAlgebra::<Q>::symmetric(3);
        let d = s.quadratic_dual();
        assert_eq!(d.relations(), QuadraticAlgebra::<Q>::exterior(3).relations());
        assert_eq!(d.quadratic_dual().relations(), s.relations());
        let t = QuadraticAlgebra::<Q>::tensor(2).quadratic_dual();
        assert_eq!(t.hilbert(2).unwrap(), vec![1, 2, 0]);
    }

    #[test]
    fn veronese_and_segre() {
        let s = QuadraticAlgebra::<Q>::symmetric(2);
        let v = s.veronese(2).unwrap();
        assert_eq!(v.gen_count(), 3);
        assert_eq!(v.relations().dim(), 9 - 5);
        assert_eq!(v.hilbert(3).unwrap(), vec![1, 3, 5, 7]);
        let sg = s.segre(&s).unwrap();
        assert_eq!(sg.gen_count(), 4);
        assert_eq!(sg.hilbert(3).unwrap(), vec![1, 4, 9, 16]);
    }

    #[test]
    fn truncation_presentation() {
        let s = QuadraticAlgebra::<Q>::symmetric(2);
        let t1 = QuadraticModule::truncation(&s, Side::Left, 1).unwrap();
        assert_eq!(t1.gen_count(), 2);
        assert_eq!(t1.relations().dim(), 1);
        let t2 = QuadraticModule::truncation(&s, Side::Right, 2).unwrap();
        assert_eq!(t2.gen_count(), 3);
        for d in 0..3 {
            assert_eq!(t2.piece(&s, d).unwrap().dim(), d + 3);
        }
        let k = QuadraticModule::trivial(&s, Side::Left, 0);
        let kd = k.graded_dual_module();
        assert_eq!(kd.side(), Side::Right);
        assert!(kd.relations().is_full());
    }

    #[test]
    fn context_layouts() {
        let s = QuadraticAlgebra::<Q>::symmetric(2);
        let k = QuadraticModule::trivial(&s, Side::Left, 0);
        let ctx = GradedContext::new(s.clone()).with_left(k).unwrap();
        let c = ctx.relation_collection(Variant::Algebra, 3).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.members().iter().all(|m| m.dim() == 2));
        let alpha: Composition = "2,1".parse().unwrap();
        assert_eq!(ctx.graded_piece(Variant::Algebra, &alpha).unwrap().dim(), 6);
        assert!(ctx.layout(Variant::Algebra, 8).is_err());
        assert!(ctx.layout(Variant::Double, 1).is_err());
    }

    #[test]
    fn presentation_round_trip() {
        let s = QuadraticAlgebra::<Q>::exterior(2);
        let m = QuadraticModule::truncation(&s, Side::Left, 1).unwrap();
        let file = PresentationFile::from_algebra(&s).with_module(&m);
        let text = file.canonical_json();
        let back = PresentationFile::parse(&text).unwrap();
        assert_eq!(back.algebra::<Q>().unwrap(), s);
        assert_eq!(back.module::<Q>().unwrap(), m);
        assert_eq!(back.canonical_json(), text);
        assert!(PresentationFile::parse("{\"name\": 3}").is_err());
    }
}
