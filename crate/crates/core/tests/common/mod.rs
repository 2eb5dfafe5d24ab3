#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ribbon_koszul::compositions::{Composition, PartitionedComposition};
use ribbon_koszul::linalg::Subspace;
use ribbon_koszul::quadratic::QuadraticAlgebra;
use ribbon_koszul::Field;

/// A quadratic algebra on `m` generators with `r` random relations whose
/// coefficients lie in `-2..=2`. No weights, so every tensor power is one block.
pub fn random_algebra<F: Field>(seed: u64, m: usize, r: usize) -> QuadraticAlgebra<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..r).map(|_| (0..m * m).map(|_| F::from_i64(rng.gen_range(-2..=2))).collect()).collect();
    let q = Subspace::from_rows(m * m, rows).expect("rows have ambient length");
    let gens = (1..=m).map(|i| format!("g{i}")).collect();
    QuadraticAlgebra::new(format!("random{seed}"), gens, None, q).expect("unweighted presentation")
}

/// A relation count for seed `seed`, spread over `0..=m*m`.
pub fn relation_count(seed: u64, m: usize) -> usize {
    ChaCha8Rng::seed_from_u64(seed ^ 0x5eed).gen_range(0..=m * m)
}

/// All nonempty compositions of weight at most `n`.
pub fn compositions_up_to(n: usize) -> Vec<Composition> {
    (1..=n).flat_map(Composition::all_of).collect()
}

/// Every way of grouping the parts of `alpha` into at most `max_blocks`
/// consecutive blocks.
pub fn partitions_of(alpha: &Composition, max_blocks: usize) -> Vec<PartitionedComposition> {
    let parts = alpha.parts();
    let l = parts.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << l.saturating_sub(1)) {
        if mask.count_ones() as usize + 1 > max_blocks {
            continue;
        }
        let mut blocks = vec![vec![parts[0]]];
        for (i, &p) in parts.iter().enumerate().skip(1) {
            if mask & (1 << (i - 1)) != 0 {
                blocks.push(vec![p]);
            } else {
                blocks.last_mut().unwrap().push(p);
            }
        }
        let blocks = blocks.into_iter().map(|b| Composition::new(b).unwrap()).collect();
        out.push(PartitionedComposition::new(blocks).unwrap());
    }
    out
}

/// Coefficients of `(1+t)^3 / (1-t^2)` up to `t^n`.
pub fn veronese_poincare(n: usize) -> Vec<i64> {
    let num = [1i64, 3, 3, 1];
    (0..=n).map(|k| (0..=k).filter(|j| (k - j) % 2 == 0).map(|j| num.get(j).copied().unwrap_or(0)).sum()).collect()
}
