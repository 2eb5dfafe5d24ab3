//! Truncated polynomials in several alphabets, complete homogeneous and
//! ribbon Schur polynomials, and characters of weight-graded modules.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::compositions::{subsets_of, Composition, PartitionedComposition};
use crate::error::{mismatch, EngineError, Result};
use crate::field::Field;

/// The variables `x^1, …, x^n` with a total-degree cap per alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabets {
    pub sizes: Vec<usize>,
    pub caps: Vec<usize>,
}

impl Alphabets {
    pub fn new(sizes: Vec<usize>, caps: Vec<usize>) -> Result<Self> {
        if sizes.len() != caps.len() || sizes.is_empty() {
            return Err(mismatch("alphabet caps", caps.len(), sizes.len()));
        }
        Ok(Alphabets { sizes, caps })
    }

    /// `n` alphabets of `size` variables, each capped at `cap`.
    pub fn uniform(n: usize, size: usize, cap: usize) -> Self {
        Alphabets { sizes: vec![size; n], caps: vec![cap; n] }
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Total number of variables.
    pub fn width(&self) -> usize {
        self.sizes.iter().sum()
    }

    fn offset(&self, k: usize) -> usize {
        self.sizes[..k].iter().sum()
    }

    fn within_caps(&self, exps: &[u32]) -> bool {
        let mut at = 0;
        self.sizes.iter().zip(&self.caps).all(|(&s, &c)| {
            let d: u32 = exps[at..at + s].iter().sum();
            at += s;
            d as usize <= c
        })
    }

    fn check_alphabet(&self, k: usize) -> Result<()> {
        if k >= self.count() {
            return Err(EngineError::Argument(format!("alphabet {k} out of {}", self.count())));
        }
        Ok(())
    }
}

/// A polynomial with every monomial inside the caps; products drop the
/// monomials that exceed them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPoly<F: Field> {
    alphabets: Alphabets,
    terms: BTreeMap<Vec<u32>, F>,
}

impl<F: Field> TruncatedPoly<F> {
    pub fn zero(alphabets: &Alphabets) -> Self {
        TruncatedPoly { alphabets: alphabets.clone(), terms: BTreeMap::new() }
    }

    pub fn one(alphabets: &Alphabets) -> Self {
        Self::monomial(alphabets, vec![0; alphabets.width()], F::one()).expect("constant fits")
    }

    pub fn monomial(alphabets: &Alphabets, exps: Vec<u32>, c: F) -> Result<Self> {
        if exps.len() != alphabets.width() {
            return Err(mismatch("exponent vector", exps.len(), alphabets.width()));
        }
        if !alphabets.within_caps(&exps) {
            return Err(EngineError::Argument(format!("monomial {exps:?} exceeds the caps")));
        }
        let mut p = Self::zero(alphabets);
        p.add_term(exps, c);
        Ok(p)
    }

    pub fn alphabets(&self) -> &Alphabets {
        &self.alphabets
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, F> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> F {
        self.terms.get(exps).cloned().unwrap_or_else(F::zero)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: F) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exps.clone()).or_insert_with(F::zero);
        *e = e.clone() + c;
        if e.is_zero() {
            self.terms.remove(&exps);
        }
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.alphabets != other.alphabets {
            return Err(EngineError::Argument("polynomials over different alphabets".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let v = out.terms.entry(e.clone()).or_insert_with(F::zero);
            *v = v.clone() + c.clone();
        }
        out.terms.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(&self.alphabets);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-F::one()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut acc: BTreeMap<Vec<u32>, F> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                if !self.alphabets.within_caps(&e) {
                    continue;
                }
                let v = acc.entry(e).or_insert_with(F::zero);
                *v = v.clone() + x.clone() * y.clone();
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(TruncatedPoly { alphabets: self.alphabets.clone(), terms: acc })
    }

    pub fn product<'a>(alphabets: &Alphabets, factors: impl IntoIterator<Item = &'a Self>) -> Result<Self> {
        factors.into_iter().try_fold(Self::one(alphabets), |acc, f| acc.mul(f))
    }

    /// Value at the all-ones point.
    pub fn at_ones(&self) -> F {
        self.terms.values().fold(F::zero(), |a, c| a + c.clone())
    }
}

impl<F: Field> fmt::Display for TruncatedPoly<F> {
    /// Terms by descending total degree, then descending exponent vector.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Vec<u32>, &F)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let names = self.variable_names();
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(&names)
                .filter(|(p, _)| **p > 0)
                .map(|(p, n)| if *p == 1 { n.clone() } else { format!("{n}^{p}") })
                .collect();
            let mut coeff = c.to_string();
            let negative = coeff.starts_with('-');
            if negative {
                coeff.remove(0);
            }
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mono.is_empty() {
                write!(f, "{coeff}")?;
            } else if coeff == "1" {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{coeff}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<F: Field> TruncatedPoly<F> {
    fn variable_names(&self) -> Vec<String> {
        let a = &self.alphabets;
        let mut names = Vec::with_capacity(a.width());
        for (k, &s) in a.sizes.iter().enumerate() {
            for i in 1..=s {
                names.push(if a.count() == 1 { format!("x{i}") } else { format!("x{}_{i}", k + 1) });
            }
        }
        names
    }
}

/// All exponent vectors of total degree `d` in `size` variables.
fn compositions_of_degree(d: u32, size: usize) -> Vec<Vec<u32>> {
    if size == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in compositions_of_degree(d - first, size - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn check_cap(alphabets: &Alphabets, k: usize, d: usize) -> Result<()> {
    alphabets.check_alphabet(k)?;
    if d > alphabets.caps[k] {
        return Err(EngineError::Argument(format!("degree {d} exceeds cap {} of alphabet {}", alphabets.caps[k], k + 1)));
    }
    Ok(())
}

fn embed(alphabets: &Alphabets, k: usize, local: &[u32]) -> Vec<u32> {
    let mut e = vec![0; alphabets.width()];
    let off = alphabets.offset(k);
    e[off..off + local.len()].copy_from_slice(local);
    e
}

/// `h_d(x^k)`, the sum of all degree-`d` monomials in alphabet `k`.
pub fn h<F: Field>(alphabets: &Alphabets, k: usize, d: usize) -> Result<TruncatedPoly<F>> {
    check_cap(alphabets, k, d)?;
    let mut p = TruncatedPoly::zero(alphabets);
    for local in compositions_of_degree(d as u32, alphabets.sizes[k]) {
        p.add_term(embed(alphabets, k, &local), F::one());
    }
    Ok(p)
}

/// `e_d(x^k)`, the sum of all squarefree degree-`d` monomials.
pub fn e<F: Field>(alphabets: &Alphabets, k: usize, d: usize) -> Result<TruncatedPoly<F>> {
    check_cap(alphabets, k, d)?;
    let mut p = TruncatedPoly::zero(alphabets);
    for local in compositions_of_degree(d as u32, alphabets.sizes[k]) {
        if local.iter().all(|&x| x <= 1) {
            p.add_term(embed(alphabets, k, &local), F::one());
        }
    }
    Ok(p)
}

/// `h_α(x^k) = ∏ h_{α_i}(x^k)`.
pub fn h_comp<F: Field>(alphabets: &Alphabets, k: usize, alpha: &Composition) -> Result<TruncatedPoly<F>> {
    let hs = alpha.parts().iter().map(|&p| h(alphabets, k, p)).collect::<Result<Vec<_>>>()?;
    TruncatedPoly::product(alphabets, &hs)
}

/// Ribbon Schur polynomial `r_α(x^k) = Σ_β (−1)^{ℓ(α)−ℓ(β)} h_β` over the
/// coarsenings `β` of `α`.
pub fn ribbon<F: Field>(alphabets: &Alphabets, k: usize, alpha: &Composition) -> Result<TruncatedPoly<F>> {
    check_cap(alphabets, k, alpha.weight())?;
    let mut out = TruncatedPoly::zero(alphabets);
    for (beta, sign) in alpha.coarsenings() {
        out = out.add(&h_comp(alphabets, k, &beta)?.scale(&F::from_i64(sign)))?;
    }
    Ok(out)
}

/// Ribbon Schur polynomial by enumerating semistandard fillings: rows weakly
/// increase, and the last entry of each row is larger than the first entry
/// of the row above it.
pub fn ribbon_ssyt<F: Field>(alphabets: &Alphabets, k: usize, alpha: &Composition) -> Result<TruncatedPoly<F>> {
    check_cap(alphabets, k, alpha.weight())?;
    let m = alphabets.sizes[k];
    let n = alpha.weight();
    let starts: Vec<bool> = {
        let mut s = vec![false; n];
        let mut pos = 0;
        for &p in alpha.parts() {
            if pos > 0 {
                s[pos] = true;
            }
            pos += p;
        }
        s
    };
    let mut out = TruncatedPoly::zero(alphabets);
    let mut word = vec![0usize; n];
    fn rec<F: Field>(
        i: usize,
        word: &mut Vec<usize>,
        starts: &[bool],
        m: usize,
        out: &mut TruncatedPoly<F>,
        alphabets: &Alphabets,
        k: usize,
    ) {
        if i == word.len() {
            let mut local = vec![0u32; m];
            for &x in word.iter() {
                local[x] += 1;
            }
            out.add_term(embed(alphabets, k, &local), F::one());
            return;
        }
        for x in 0..m {
            if i > 0 {
                let prev = word[i - 1];
                if starts[i] && x >= prev {
                    continue;
                }
                if !starts[i] && x < prev {
                    continue;
                }
            }
            word[i] = x;
            rec(i + 1, word, starts, m, out, alphabets, k);
        }
    }
    if n == 0 {
        return Ok(TruncatedPoly::one(alphabets));
    }
    rec(0, &mut word, &starts, m, &mut out, alphabets, k);
    Ok(out)
}

/// Generating function of `(weight, dim)` pairs, weights read as exponent
/// vectors across all alphabets.
pub fn character_from_weights<F: Field>(
    alphabets: &Alphabets,
    weight_dims: &[(Vec<i64>, usize)],
) -> Result<TruncatedPoly<F>> {
    let mut p = TruncatedPoly::zero(alphabets);
    for (w, d) in weight_dims {
        if *d == 0 {
            continue;
        }
        if w.len() != alphabets.width() {
            return Err(EngineError::Config(format!(
                "weights of length {} do not match {} variables",
                w.len(),
                alphabets.width()
            )));
        }
        let exps = w
            .iter()
            .map(|&x| u32::try_from(x).map_err(|_| EngineError::Config(format!("negative weight {w:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if !alphabets.within_caps(&exps) {
            return Err(EngineError::Argument(format!("weight {w:?} exceeds the caps")));
        }
        p.add_term(exps, F::from_i64(*d as i64));
    }
    Ok(p)
}

/// Character of a realized single Schur module.
pub fn schur_character<F: Field>(module: &crate::schur::SchurModule<F>, alphabets: &Alphabets) -> Result<TruncatedPoly<F>> {
    if !module.is_weighted() {
        return Err(EngineError::Config("the module carries no weights".into()));
    }
    character_from_weights(alphabets, &module.weight_dims())
}

/// Character of a realized multi-Schur module.
pub fn multischur_character<F: Field>(
    module: &crate::multischur::MultiSchurModule<F>,
    alphabets: &Alphabets,
) -> Result<TruncatedPoly<F>> {
    let w = module.weight_dims();
    if w.first().is_some_and(|(x, _)| x.is_empty()) {
        return Err(EngineError::Config("the module carries no weights".into()));
    }
    character_from_weights(alphabets, &w)
}

/// `T_i = Σ s_{β¹·(α₁)}(x¹) ⋯ s_{βⁿ·(αₙ)}(xⁿ)` over tuples of compositions of
/// `i` whose meet is `(1^i)`; `T_0 = h_α`.
pub fn segre_tor_character<F: Field>(alphabets: &Alphabets, alpha: &[usize], i: usize) -> Result<TruncatedPoly<F>> {
    let n = alpha.len();
    let comps = Composition::all_of(i);
    let mut out = TruncatedPoly::zero(alphabets);
    let mut idx = vec![0usize; n];
    loop {
        let tuple: Vec<&Composition> = idx.iter().map(|&j| &comps[j]).collect();
        let meet_is_finest = if i == 0 {
            true
        } else {
            let sets: Vec<_> = tuple.iter().map(|c| c.phi_inverse()).collect();
            (1..i).all(|c| sets.iter().any(|s| !s.contains(&c)))
        };
        if meet_is_finest {
            let factors = tuple
                .iter()
                .zip(alpha)
                .enumerate()
                .map(|(k, (b, &a))| ribbon(alphabets, k, &b.concat(&Composition::row(a))))
                .collect::<Result<Vec<_>>>()?;
            out = out.add(&TruncatedPoly::product(alphabets, &factors)?)?;
        }
        let mut p = 0;
        loop {
            if p == n {
                return Ok(out);
            }
            idx[p] += 1;
            if idx[p] < comps.len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

/// Character of `Tor_i` of the Segre product `A_+^{α₁} ∘ ⋯ ∘ A_+^{αₙ}` of
/// polynomial rings: factor `k` contributes the ribbon of `(1^i, α_k)` with
/// the cuts of `J_k ⊆ [i]` merged, over tuples with `J₁ ∩ ⋯ ∩ Jₙ = ∅`. The
/// junction cut `i` is one of the diagonal cuts, so it may be merged in some
/// factors.
pub fn segre_module_tor_character<F: Field>(alphabets: &Alphabets, alpha: &[usize], i: usize) -> Result<TruncatedPoly<F>> {
    let n = alpha.len();
    let mut out = TruncatedPoly::zero(alphabets);
    for tuple in crate::compositions::empty_intersection_tuples(n, i + 1) {
        let factors = tuple
            .iter()
            .zip(alpha)
            .enumerate()
            .map(|(k, (set, &a))| {
                // Cut c sits after the c-th part of (1^i, a); cut i is the junction.
                let mut merged = vec![if i == 0 { a } else { 1 }];
                for c in 1..=i {
                    let next = if c < i { 1 } else { a };
                    match merged.last_mut() {
                        Some(last) if set.contains(&c) => *last += next,
                        _ => merged.push(next),
                    }
                }
                ribbon(alphabets, k, &Composition::new(merged)?)
            })
            .collect::<Result<Vec<_>>>()?;
        out = out.add(&TruncatedPoly::product(alphabets, &factors)?)?;
    }
    Ok(out)
}

fn h_power<F: Field>(alphabets: &Alphabets, degrees: impl Iterator<Item = usize>) -> Result<TruncatedPoly<F>> {
    let hs = degrees.enumerate().map(|(k, d)| h(alphabets, k, d)).collect::<Result<Vec<_>>>()?;
    TruncatedPoly::product(alphabets, &hs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegreIdentityReport {
    pub n: usize,
    pub d: usize,
    pub alpha: Vec<usize>,
    pub lhs: String,
    /// `Σ_{i=1}^{d} (−1)^{i+1} h_{(d−i)^n} T_i`, the identity as printed.
    pub literal_rhs: String,
    pub literal_holds: bool,
    /// `Σ_{i=0}^{d} (−1)^i h_{(d−i)^n} T'_i`, the Euler characteristic of
    /// the minimal resolution, with `T'_i` counting junction merges too.
    pub corrected_rhs: String,
    pub corrected_holds: bool,
    /// For `n = d = 2`: whether the four-term displayed expansion equals the
    /// literal right-hand side.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub displayed_matches_literal: Option<bool>,
}

/// Checks the Segre character identity for `h_{d^n + α}` in both forms.
pub fn verify_segre_identity<F: Field>(
    d: usize,
    alpha: &[usize],
    alphabets: &Alphabets,
) -> Result<SegreIdentityReport> {
    let n = alpha.len();
    if n == 0 || alphabets.count() != n {
        return Err(mismatch("alphabets", alphabets.count(), n));
    }
    if alpha.contains(&0) {
        return Err(EngineError::Argument("the parts of α must be positive".into()));
    }
    let lhs = h_power::<F>(alphabets, alpha.iter().map(|a| d + a))?;
    let mut literal = TruncatedPoly::zero(alphabets);
    let mut corrected = TruncatedPoly::zero(alphabets);
    for i in 0..=d {
        let hs = h_power::<F>(alphabets, std::iter::repeat_n(d - i, n))?;
        let sign = if i % 2 == 0 { F::one() } else { -F::one() };
        let full = hs.mul(&segre_module_tor_character(alphabets, alpha, i)?)?;
        corrected = corrected.add(&full.scale(&sign))?;
        if i >= 1 {
            let printed = hs.mul(&segre_tor_character(alphabets, alpha, i)?)?;
            literal = literal.add(&printed.scale(&-sign))?;
        }
    }
    let displayed = if n == 2 && d == 2 { Some(displayed_expansion::<F>(alpha, alphabets)? == literal) } else { None };
    Ok(SegreIdentityReport {
        n,
        d,
        alpha: alpha.to_vec(),
        lhs: lhs.to_string(),
        literal_rhs: literal.to_string(),
        literal_holds: literal == lhs,
        corrected_rhs: corrected.to_string(),
        corrected_holds: corrected == lhs,
        displayed_matches_literal: displayed,
    })
}

/// The printed expansion for `n = d = 2`:
/// `h₁h₁ s_{(1,a₁)} s_{(1,a₂)} − s_{(1²,a₁)} s_{(1²,a₂)} − s_{(1²,a₁)} s_{(2,a₂)} − s_{(2,a₁)} s_{(1²,a₂)}`.
pub fn displayed_expansion<F: Field>(alpha: &[usize], alphabets: &Alphabets) -> Result<TruncatedPoly<F>> {
    let s = |k: usize, head: &[usize]| -> Result<TruncatedPoly<F>> {
        let mut parts = head.to_vec();
        parts.push(alpha[k]);
        ribbon(alphabets, k, &Composition::new(parts)?)
    };
    let t1 = TruncatedPoly::product(alphabets, &[h(alphabets, 0, 1)?, h(alphabets, 1, 1)?, s(0, &[1])?, s(1, &[1])?])?;
    let a = s(0, &[1, 1])?.mul(&s(1, &[1, 1])?)?;
    let b = s(0, &[1, 1])?.mul(&s(1, &[2])?)?;
    let c = s(0, &[2])?.mul(&s(1, &[1, 1])?)?;
    t1.sub(&a)?.sub(&b)?.sub(&c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HGIdentityReport {
    pub alpha: String,
    pub ribbon: String,
    pub alternating_sum: String,
    pub holds: bool,
}

/// `r_α = Σ_{I ⊆ [ℓ−1]} (−1)^{|I|} ∏_{γ ∈ μ_I(α)} r_γ`, the polynomial
/// shadow of the exactness of the Hamel–Goulden complex.
pub fn verify_hg_identity<F: Field>(alpha: &PartitionedComposition, alphabets: &Alphabets) -> Result<HGIdentityReport> {
    let r = ribbon::<F>(alphabets, 0, &alpha.underlying())?;
    let cuts: Vec<usize> = (1..alpha.block_count()).collect();
    let mut sum = TruncatedPoly::zero(alphabets);
    for set in subsets_of(&cuts) {
        let comps = alpha.mu(&set)?.components;
        let factors = comps.iter().map(|c| ribbon(alphabets, 0, c)).collect::<Result<Vec<_>>>()?;
        let term = TruncatedPoly::product(alphabets, &factors)?;
        let sign = if set.len() % 2 == 0 { F::one() } else { -F::one() };
        sum = sum.add(&term.scale(&sign))?;
    }
    Ok(HGIdentityReport {
        alpha: alpha.to_string(),
        ribbon: r.to_string(),
        alternating_sum: sum.to_string(),
        holds: sum == r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    type Q = Rational;

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    #[test]
    fn basic_polynomials() {
        let a = Alphabets::uniform(1, 2, 6);
        assert_eq!(h::<Q>(&a, 0, 2).unwrap().to_string(), "x1^2 + x1*x2 + x2^2");
        let r = ribbon::<Q>(&a, 0, &c("2,1")).unwrap();
        assert_eq!(r.at_ones(), Q::from_i64(2));
        assert_eq!(r, ribbon_ssyt(&a, 0, &c("2,1")).unwrap());
        assert_eq!(ribbon::<Q>(&a, 0, &c("1,1")).unwrap(), e(&a, 0, 2).unwrap());
        assert!(h::<Q>(&a, 0, 7).is_err());
    }

    #[test]
    fn printing_signs() {
        let a = Alphabets::uniform(2, 1, 4);
        let p = h::<Q>(&a, 0, 1).unwrap().sub(&h(&a, 1, 2).unwrap()).unwrap();
        assert_eq!(p.to_string(), "-x2_1^2 + x1_1");
    }

    #[test]
    fn segre_identity_forms() {
        let a = Alphabets::uniform(1, 2, 10);
        let r = verify_segre_identity::<Q>(1, &[1], &a).unwrap();
        assert!(r.corrected_holds);
        assert!(!r.literal_holds);
        let a = Alphabets::uniform(2, 2, 10);
        let r = verify_segre_identity::<Q>(2, &[1, 2], &a).unwrap();
        assert!(r.corrected_holds);
        assert_eq!(r.displayed_matches_literal, Some(true));
    }

    #[test]
    fn hg_identity() {
        let a = Alphabets::uniform(1, 2, 8);
        for s in ["2|1", "1,1|2|1", "3|1,2"] {
            let p: PartitionedComposition = s.parse().unwrap();
            assert!(verify_hg_identity::<Q>(&p, &a).unwrap().holds, "{s}");
        }
    }
}
