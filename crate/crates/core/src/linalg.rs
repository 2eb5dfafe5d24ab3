//! Dense exact linear algebra: matrices, reduced row echelon form, kernels,
//! the subspace lattice and subquotients with canonical coset bases.

use std::fmt;
use std::sync::OnceLock;


use crate::error::{mismatch, EngineError, Result};
use crate::field::Field;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Display> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> =
                self.data[r * self.cols..(r + 1) * self.cols].iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(mismatch("matrix entry count", data.len(), rows * cols));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Build from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<F>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(mismatch("row length", r.len(), cols));
            }
            data.extend(r);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged integer matrix");
                r.iter().map(|&x| F::from_i64(x))
            })
            .collect();
        Matrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [F] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[F]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn push_row(&mut self, row: &[F]) {
        assert_eq!(row.len(), self.cols, "row length");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    t.data[c * self.rows + r] = v.clone();
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix<F>) -> Result<Self> {
        if self.cols != other.rows {
            return Err(mismatch("matrix product", self.cols, other.rows));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    if !b.is_zero() {
                        d.sub_mul_assign(&-a.clone(), b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|r| {
                let mut acc = F::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc.sub_mul_assign(&-a.clone(), b);
                    }
                }
                acc
            })
            .collect()
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Matrix<F>) -> Result<Self> {
        if self.cols != other.cols {
            return Err(mismatch("vstack columns", self.cols, other.cols));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Kronecker product `self ⊗ other` in the leftmost-most-significant order.
    pub fn kron(&self, other: &Matrix<F>) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a.clone() * b.clone());
                        }
                    }
                }
            }
        }
        out
    }

    /// Reduce to RREF in place, dropping zero rows; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        let mut nz: Vec<usize> = Vec::with_capacity(cols);
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self.data[i * cols + c].is_zero()) else {
                continue;
            };
            if p != r {
                for k in c..cols {
                    self.data.swap(p * cols + k, r * cols + k);
                }
            }
            let inv = self.data[r * cols + c].inv();
            nz.clear();
            for k in c..cols {
                let x = &mut self.data[r * cols + k];
                if !x.is_zero() {
                    *x = x.clone() * inv.clone();
                    nz.push(k);
                }
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = self.data[i * cols + c].clone();
                if f.is_zero() {
                    continue;
                }
                for &k in &nz {
                    let (src, dst) = if i < r {
                        let (lo, hi) = self.data.split_at_mut(r * cols);
                        (&hi[k], &mut lo[i * cols + k])
                    } else {
                        let (lo, hi) = self.data.split_at_mut(i * cols);
                        (&lo[r * cols + k], &mut hi[k])
                    };
                    dst.sub_mul_assign(&f, src);
                }
            }
            pivots.push(c);
            r += 1;
        }
        self.rows = r;
        self.data.truncate(r * cols);
        pivots
    }

    /// The unique RREF (zero rows removed) and the rank.
    pub fn rref(&self) -> (Matrix<F>, usize) {
        let mut m = self.clone();
        let piv = m.rref_in_place();
        (m, piv.len())
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().1
    }

    /// Right kernel `{v : self · vᵀ = 0}` as a subspace of `F^cols`.
    pub fn kernel(&self) -> Subspace<F> {
        let (r, piv) = {
            let mut m = self.clone();
            let p = m.rref_in_place();
            (m, p)
        };
        let n = self.cols;
        let mut is_pivot = vec![false; n];
        for &p in &piv {
            is_pivot[p] = true;
        }
        let mut rows = Vec::new();
        for f in (0..n).filter(|&c| !is_pivot[c]) {
            let mut v = vec![F::zero(); n];
            v[f] = F::one();
            for (k, &p) in piv.iter().enumerate() {
                let x = r.get(k, f);
                if !x.is_zero() {
                    v[p] = -x.clone();
                }
            }
            rows.push(v);
        }
        Subspace::from_rows(n, rows).expect("kernel rows have ambient length")
    }
}

/// Subtract multiples of the RREF rows of `s` from `v` so that `v` vanishes
/// on every pivot column of `s`.
fn reduce_against<F: Field>(v: &mut [F], basis: &Matrix<F>, pivots: &[usize]) {
    for (k, &p) in pivots.iter().enumerate() {
        if v[p].is_zero() {
            continue;
        }
        let f = v[p].clone();
        for (x, b) in v.iter_mut().zip(basis.row(k)) {
            if !b.is_zero() {
                x.sub_mul_assign(&f, b);
            }
        }
    }
}

/// A subspace of `F^n`, stored by its canonical RREF basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace<F> {
    ambient_dim: usize,
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: fmt::Display> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) {:?}", self.basis.rows, self.ambient_dim, self.basis)
    }
}

impl<F: Field> Subspace<F> {
    pub fn zero(n: usize) -> Self {
        Subspace { ambient_dim: n, basis: Matrix::zeros(0, n), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Subspace { ambient_dim: n, basis: Matrix::identity(n), pivots: (0..n).collect() }
    }

    /// Row space of `m`.
    pub fn from_matrix(mut m: Matrix<F>) -> Self {
        let pivots = m.rref_in_place();
        Subspace { ambient_dim: m.cols, basis: m, pivots }
    }

    pub fn from_rows(n: usize, rows: Vec<Vec<F>>) -> Result<Self> {
        Ok(Self::from_matrix(Matrix::from_rows(n, rows)?))
    }

    /// Wraps a basis the caller guarantees is already in RREF with the given pivots.
    pub(crate) fn from_rref_unchecked(basis: Matrix<F>, pivots: Vec<usize>) -> Self {
        debug_assert_eq!(basis.rows, pivots.len());
        debug_assert!(pivots.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(pivots.iter().enumerate().all(|(r, &p)| *basis.get(r, p) == F::one()));
        Subspace { ambient_dim: basis.cols, basis, pivots }
    }

    /// Span of standard basis vectors.
    pub fn coordinate(n: usize, indices: &[usize]) -> Self {
        let mut idx: Vec<usize> = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        let mut m = Matrix::zeros(idx.len(), n);
        for (r, &c) in idx.iter().enumerate() {
            m.set(r, c, F::one());
        }
        Subspace { ambient_dim: n, basis: m, pivots: idx }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(mismatch("subspace ambient", self.ambient_dim, other.ambient_dim));
        }
        Ok(())
    }

    /// `v` minus its projection along this subspace onto the pivot-free complement.
    pub fn reduce(&self, v: &mut [F]) {
        reduce_against(v, &self.basis, &self.pivots);
    }

    pub fn contains(&self, v: &[F]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.ambient_dim == self.ambient_dim
            && other.dim() <= self.dim()
            && other.basis.row_iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if other.dim() == 0 || self.is_full() {
            return Ok(self.clone());
        }
        if self.dim() == 0 || other.is_full() {
            return Ok(other.clone());
        }
        let mut extra = Vec::new();
        for r in other.basis.row_iter() {
            let mut w = r.to_vec();
            self.reduce(&mut w);
            if w.iter().any(|x| !x.is_zero()) {
                extra.push(w);
            }
        }
        if extra.is_empty() {
            return Ok(self.clone());
        }
        let mut m = self.basis.clone();
        for w in &extra {
            m.push_row(w);
        }
        Ok(Self::from_matrix(m))
    }

    /// Sum of many subspaces of a common ambient space of dimension `n`.
    pub fn sum_all<'a>(n: usize, parts: impl IntoIterator<Item = &'a Self>) -> Result<Self> {
        let mut acc = Self::zero(n);
        for p in parts {
            acc = acc.sum(p)?;
        }
        Ok(acc)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.ambient_dim;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Self::zero(n));
        }
        if other.is_full() {
            return Ok(self.clone());
        }
        if self.is_full() {
            return Ok(other.clone());
        }
        // Work from the smaller side: x = c·A lies in B iff c·(A mod B) = 0.
        let (a, b) = if self.dim() <= other.dim() { (self, other) } else { (other, self) };
        let mut is_piv = vec![false; n];
        for &p in &b.pivots {
            is_piv[p] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_piv[c]).collect();
        let k = a.dim();
        let width = free.len() + k;
        let mut aug = Matrix::zeros(k, width);
        for i in 0..k {
            let mut w = a.basis.row(i).to_vec();
            b.reduce(&mut w);
            let row = aug.row_mut(i);
            for (j, &c) in free.iter().enumerate() {
                row[j] = std::mem::replace(&mut w[c], F::zero());
            }
            row[free.len() + i] = F::one();
        }
        aug.rref_in_place();
        let mut rows = Vec::new();
        for r in aug.row_iter() {
            if r[..free.len()].iter().all(|x| x.is_zero()) {
                let mut v = vec![F::zero(); n];
                for (i, c) in r[free.len()..].iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(a.basis.row(i)) {
                        if !y.is_zero() {
                            x.sub_mul_assign(&-c.clone(), y);
                        }
                    }
                }
                rows.push(v);
            }
        }
        Self::from_rows(n, rows)
    }

    pub fn intersect_all<'a>(n: usize, parts: impl IntoIterator<Item = &'a Self>) -> Result<Self> {
        let mut acc = Self::full(n);
        for p in parts {
            acc = acc.intersect(p)?;
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    /// Annihilator in the dual coordinate space under the standard pairing.
    pub fn annihilator(&self) -> Self {
        self.basis.kernel()
    }

    /// Image under a linear map given as a `(target × ambient)` matrix.
    pub fn image(&self, map: &Matrix<F>) -> Result<Self> {
        if map.cols() != self.ambient_dim {
            return Err(mismatch("map domain", map.cols(), self.ambient_dim));
        }
        let rows = self.basis.row_iter().map(|r| map.apply(r)).collect();
        Self::from_rows(map.rows(), rows)
    }
}

/// Coordinates with respect to a basis of a quotient `W / D`, where the basis
/// vectors are given modulo `D`.
#[derive(Clone)]
struct CosetCoords<F> {
    /// Basis vectors already reduced against the denominator, in RREF.
    reduced: Matrix<F>,
    pivots: Vec<usize>,
    /// `transform · basis ≡ reduced (mod D)`.
    transform: Option<Matrix<F>>,
}

/// A subquotient `N / (N ∩ D)` of a fixed coordinate space.
#[derive(Clone)]
pub struct Subquotient<F> {
    numerator: Subspace<F>,
    denominator: Subspace<F>,
    reps: OnceLock<Matrix<F>>,
    coords: OnceLock<CosetCoords<F>>,
}

impl<F: Field> fmt::Debug for Subquotient<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subquotient(num dim {}, den dim {}, ambient {})",
            self.numerator.dim(),
            self.denominator.dim(),
            self.ambient_dim()
        )
    }
}

impl<F: Field> Subquotient<F> {
    pub fn new(numerator: Subspace<F>, denominator: Subspace<F>) -> Result<Self> {
        numerator.check(&denominator)?;
        Ok(Subquotient { numerator, denominator, reps: OnceLock::new(), coords: OnceLock::new() })
    }

    /// `ambient / denominator`.
    pub fn quotient(denominator: Subspace<F>) -> Self {
        let n = denominator.ambient_dim();
        Self::new(Subspace::full(n), denominator).expect("same ambient")
    }

    /// A subspace viewed as a subquotient with zero denominator.
    pub fn sub(numerator: Subspace<F>) -> Self {
        let n = numerator.ambient_dim();
        Self::new(numerator, Subspace::zero(n)).expect("same ambient")
    }

    pub fn ambient_dim(&self) -> usize {
        self.numerator.ambient_dim()
    }

    pub fn numerator(&self) -> &Subspace<F> {
        &self.numerator
    }

    pub fn denominator(&self) -> &Subspace<F> {
        &self.denominator
    }

    /// Coset representatives (rows, ambient coordinates), spanning a canonical
    /// complement of `N ∩ D` inside `N`.
    pub fn representatives(&self) -> &Matrix<F> {
        self.reps.get_or_init(|| {
            let n = self.ambient_dim();
            if self.denominator.is_zero() {
                return self.numerator.basis.clone();
            }
            if self.numerator.is_full() {
                // Canonical complement of D: unit vectors off its pivots.
                let mut is_piv = vec![false; n];
                for &p in self.denominator.pivots() {
                    is_piv[p] = true;
                }
                let free: Vec<usize> = (0..n).filter(|&c| !is_piv[c]).collect();
                return Subspace::<F>::coordinate(n, &free).basis;
            }
            let k = self.numerator.intersect(&self.denominator).expect("same ambient");
            let rows: Vec<Vec<F>> = self
                .numerator
                .basis
                .row_iter()
                .map(|r| {
                    let mut w = r.to_vec();
                    k.reduce(&mut w);
                    w
                })
                .collect();
            Subspace::from_rows(n, rows).expect("rows have ambient length").basis
        })
    }

    pub fn dim(&self) -> usize {
        if self.denominator.is_zero() {
            return self.numerator.dim();
        }
        if self.numerator.is_full() {
            return self.ambient_dim() - self.denominator.dim();
        }
        self.representatives().rows()
    }

    fn coset_coords(&self) -> &CosetCoords<F> {
        self.coords.get_or_init(|| {
            let reps = self.representatives();
            let q = reps.rows();
            if self.numerator.is_full() || self.denominator.is_zero() {
                // Representatives are already in RREF and vanish on the
                // denominator pivots.
                let mut m = reps.clone();
                let piv = m.rref_in_place();
                return CosetCoords { reduced: m, pivots: piv, transform: None };
            }
            let n = self.ambient_dim();
            let mut aug = Matrix::zeros(q, n + q);
            for i in 0..q {
                let mut w = reps.row(i).to_vec();
                self.denominator.reduce(&mut w);
                let row = aug.row_mut(i);
                for (d, x) in row[..n].iter_mut().zip(w) {
                    *d = x;
                }
                row[n + i] = F::one();
            }
            aug.rref_in_place();
            let mut reduced = Matrix::zeros(0, n);
            let mut transform = Matrix::zeros(0, q);
            let mut pivots = Vec::with_capacity(q);
            for r in aug.row_iter() {
                let p = r[..n].iter().position(|x| !x.is_zero()).expect("independent representatives");
                pivots.push(p);
                reduced.push_row(&r[..n]);
                transform.push_row(&r[n..]);
            }
            CosetCoords { reduced, pivots, transform: Some(transform) }
        })
    }

    /// Coordinates of the class of `w` in the coset basis; `w` must lie in `N + D`.
    pub fn coordinates(&self, w: &[F]) -> Result<Vec<F>> {
        if w.len() != self.ambient_dim() {
            return Err(mismatch("vector length", w.len(), self.ambient_dim()));
        }
        let cc = self.coset_coords();
        let mut v = w.to_vec();
        self.denominator.reduce(&mut v);
        let q = cc.reduced.rows();
        let mut c = vec![F::zero(); q];
        for (k, &p) in cc.pivots.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            let x = v[p].clone();
            for (y, b) in v.iter_mut().zip(cc.reduced.row(k)) {
                if !b.is_zero() {
                    y.sub_mul_assign(&x, b);
                }
            }
            c[k] = x;
        }
        if v.iter().any(|x| !x.is_zero()) {
            return Err(EngineError::InvariantViolation(
                "vector escapes numerator + denominator of the codomain".into(),
            ));
        }
        Ok(match &cc.transform {
            None => c,
            Some(t) => {
                let mut out = vec![F::zero(); q];
                for (k, ck) in c.iter().enumerate() {
                    if ck.is_zero() {
                        continue;
                    }
                    for (o, tv) in out.iter_mut().zip(t.row(k)) {
                        if !tv.is_zero() {
                            o.sub_mul_assign(&-ck.clone(), tv);
                        }
                    }
                }
                out
            }
        })
    }
}

/// Matrix (codomain dim × domain dim) of the map induced on subquotients by
/// `ambient_map` (`None` means the identity of a shared ambient space).
pub fn induced_map<F: Field>(
    domain: &Subquotient<F>,
    codomain: &Subquotient<F>,
    ambient_map: Option<&Matrix<F>>,
) -> Result<Matrix<F>> {
    let reps = domain.representatives();
    let (dd, cd) = (domain.dim(), codomain.dim());
    match ambient_map {
        None if domain.ambient_dim() != codomain.ambient_dim() => {
            return Err(mismatch("identity-induced map ambient", domain.ambient_dim(), codomain.ambient_dim()))
        }
        Some(m) if m.cols() != domain.ambient_dim() || m.rows() != codomain.ambient_dim() => {
            return Err(mismatch("ambient map shape", m.cols(), domain.ambient_dim()))
        }
        _ => {}
    }
    let mut out = Matrix::zeros(cd, dd);
    for j in 0..dd {
        let img = match ambient_map {
            None => reps.row(j).to_vec(),
            Some(m) => m.apply(reps.row(j)),
        };
        let c = codomain.coordinates(&img)?;
        for (i, x) in c.into_iter().enumerate() {
            if !x.is_zero() {
                out.set(i, j, x);
            }
        }
    }
    Ok(out)
}
