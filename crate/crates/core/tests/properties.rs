mod common;

use proptest::prelude::*;
use ribbon_koszul::compositions::{empty_intersection_tuples, phi, subsets, Composition, PartitionedComposition};
use ribbon_koszul::homology::{certify_koszul, ext_dims, tor_dims, KoszulMethod, KoszulTarget};
use ribbon_koszul::lattice::SubspaceCollection;
use ribbon_koszul::linalg::{Matrix, Subspace};
use ribbon_koszul::multischur::{filtration_ledger, multischur_with, MultiContext, MultiPath};
use ribbon_koszul::quadratic::{QuadraticAlgebra, QuadraticModule, Side, Variant};
use ribbon_koszul::schur::{induced_rank, schur, schur_kernel, verify_ses};
use ribbon_koszul::symfunc::{self, Alphabets};
use ribbon_koszul::{Field, Gf32003, QAlgebra, QContext, Rational};

type Q = Rational;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn qmatrix(rows: usize, cols: usize, entries: &[i64]) -> Matrix<Q> {
    Matrix::from_vec(rows, cols, entries.iter().map(|&x| Q::from_i64(x)).collect()).unwrap()
}

fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-3i64..=3, r * c)))
}

/// A subspace of `Q^n` spanned by up to `n` rows with entries in `-1..=1`.
fn subspace(n: usize) -> impl Strategy<Value = Subspace<Q>> {
    prop::collection::vec(prop::collection::vec(-1i64..=1, n), 0..=n)
        .prop_map(move |rows| Subspace::from_rows(n, rows.into_iter().map(|r| r.into_iter().map(Q::from_i64).collect()).collect()).unwrap())
}

fn collection() -> impl Strategy<Value = SubspaceCollection<Q>> {
    (2usize..=4)
        .prop_flat_map(|n| prop::collection::vec(subspace(4), n))
        .prop_map(|members| SubspaceCollection::new(4, members).unwrap())
}

fn builtins(m: usize) -> Vec<QAlgebra> {
    vec![QuadraticAlgebra::symmetric(m), QuadraticAlgebra::exterior(m), QuadraticAlgebra::tensor(m)]
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

// Linear algebra.

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn rank_nullity_and_transpose((r, c, e) in small_matrix()) {
        let m = qmatrix(r, c, &e);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.kernel().dim() + m.rank(), c);
    }

    #[test]
    fn sum_and_intersection_laws(a in subspace(6), b in subspace(6), c in subspace(6)) {
        prop_assert_eq!(a.sum(&b).unwrap(), b.sum(&a).unwrap());
        prop_assert_eq!(a.intersect(&b).unwrap(), b.intersect(&a).unwrap());
        prop_assert_eq!(a.sum(&b).unwrap().sum(&c).unwrap(), a.sum(&b.sum(&c).unwrap()).unwrap());
        prop_assert_eq!(a.intersect(&b).unwrap().intersect(&c).unwrap(), a.intersect(&b.intersect(&c).unwrap()).unwrap());
        prop_assert_eq!(a.sum(&a).unwrap(), a.clone());
        prop_assert_eq!(a.intersect(&a).unwrap(), a.clone());
        prop_assert_eq!(a.sum(&b).unwrap().dim() + a.intersect(&b).unwrap().dim(), a.dim() + b.dim());
    }

    // Entries in -3..=3 and at most 4 rows bound every minor by 3^4 * 4^2 < 32003,
    // so no nonzero minor vanishes modulo p.
    #[test]
    fn ranks_agree_over_q_and_gf_p(r in 1usize..=4, c in 1usize..=5, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let e: Vec<i64> = (0..r * c).map(|_| rng.gen_range(-3..=3)).collect();
        let p = Matrix::<Gf32003>::from_vec(r, c, e.iter().map(|&x| Gf32003::from_i64(x)).collect()).unwrap();
        prop_assert_eq!(qmatrix(r, c, &e).rank(), p.rank());
    }
}

// Compositions.

#[test]
fn phi_is_inverse_to_phi_inverse() {
    for n in 1..=8 {
        for set in subsets(n - 1) {
            let alpha = phi(&set, n).unwrap();
            assert_eq!(alpha.phi_inverse(), set);
        }
        for alpha in Composition::all_of(n) {
            assert_eq!(phi(&alpha.phi_inverse(), n).unwrap(), alpha);
        }
    }
}

#[test]
fn transpose_laws() {
    let all = common::compositions_up_to(5);
    for a in &all {
        assert_eq!(a.transpose().transpose(), *a);
        for b in &all {
            assert_eq!(a.concat(b).transpose(), b.transpose().near_concat(&a.transpose()).unwrap());
            assert_eq!(a.near_concat(b).unwrap().transpose(), b.transpose().concat(&a.transpose()));
        }
    }
}

#[test]
fn sigma_is_independent_of_step_order() {
    for n in 1..=5 {
        for alpha in Composition::all_of(n) {
            let pc = PartitionedComposition::singletons(&alpha).unwrap();
            let cuts: Vec<usize> = (1..pc.block_count()).collect();
            for set in ribbon_koszul::compositions::subsets_of(&cuts) {
                let at_once = pc.sigma(&set).unwrap();
                let forward = set.iter().fold(pc.clone(), |acc, &j| {
                    let shift = set.iter().filter(|&&k| k < j).count();
                    acc.sigma(&[j - shift]).unwrap()
                });
                let backward = set.iter().rev().fold(pc.clone(), |acc, &j| acc.sigma(&[j]).unwrap());
                assert_eq!(at_once, forward);
                assert_eq!(at_once, backward);
            }
        }
    }
}

#[test]
fn tuple_count_law() {
    for n in 1..=4usize {
        for l in 1..=5usize {
            assert_eq!(empty_intersection_tuples(n, l).len(), (2usize.pow(n as u32) - 1).pow(l as u32 - 1));
        }
    }
}

// Subspace lattices.

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn zeroth_homology_is_the_l_module(c in collection()) {
        // In general L^I only embeds in the zeroth homology.
        let distributive = c.check_distributive().unwrap().status.is_pass();
        for set in subsets(c.len()) {
            let co = c.cochain_complex(&set).unwrap().homology_dims().unwrap()[0];
            let ch = c.chain_complex(&set).unwrap().homology_dims().unwrap()[0];
            let l = c.l_module(&set).unwrap().dim();
            let l_co = c.l_module(&c.complement(&set)).unwrap().dim();
            prop_assert!(co >= l && ch >= l_co);
            if distributive {
                prop_assert_eq!(co, l);
                prop_assert_eq!(ch, l_co);
            }
        }
    }

    #[test]
    fn distributivity_criteria_agree(c in collection()) {
        let three_term = c.check_distributive().unwrap().status.is_pass();
        prop_assert_eq!(three_term, c.all_chain_exact().unwrap());
        prop_assert_eq!(three_term, c.all_cochain_exact().unwrap());
        let dual = c.dual();
        prop_assert_eq!(three_term, dual.check_distributive().unwrap().status.is_pass());
        for set in subsets(c.len()) {
            prop_assert_eq!(c.l_module(&set).unwrap().dim(), dual.l_module(&c.complement(&set)).unwrap().dim());
        }
        if three_term {
            for j in 1..=c.len() {
                prop_assert!(c.delete(j).unwrap().check_distributive().unwrap().status.is_pass());
            }
        }
    }
}

// Quadratic algebras.

#[test]
fn graded_pieces_of_builtins() {
    for m in 1..=3usize {
        for alg in builtins(m) {
            let ctx = QContext::new(alg.clone());
            let known = |d: usize| match alg.name().chars().next() {
                Some('s') => binomial(m + d - 1, d),
                Some('e') => binomial(m, d),
                _ => m.pow(d as u32),
            };
            for alpha in common::compositions_up_to(if m == 3 { 5 } else { 6 }) {
                let want: usize = alpha.parts().iter().map(|&p| known(p)).product();
                assert_eq!(ctx.graded_piece(Variant::Algebra, &alpha).unwrap().dim(), want, "{} {alpha}", alg.name());
            }
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn double_dual_is_identity(seed in any::<u64>(), m in 1usize..=3) {
        let r = common::relation_count(seed, m);
        let a = common::random_algebra::<Q>(seed, m, r);
        let back = a.quadratic_dual().quadratic_dual();
        prop_assert_eq!(back.relations(), a.relations());
    }
}

#[test]
fn veronese_rescaling() {
    let a = QuadraticAlgebra::<Q>::symmetric(2);
    let ctx = QContext::new(a.clone());
    let vctx = QContext::new(a.veronese(2).unwrap());
    for alpha in common::compositions_up_to(3) {
        let direct = schur(&vctx, Variant::Algebra, &alpha).unwrap().dim();
        let rescaled = schur(&ctx, Variant::Algebra, &alpha.rescale(2).unwrap()).unwrap().dim();
        assert_eq!(direct, rescaled, "{alpha}");
    }
}

// Schur modules.

#[test]
fn schur_paths_agree_and_weights_add_up() {
    for m in 1..=3usize {
        for alg in builtins(m) {
            let ctx = QContext::new(alg);
            for alpha in common::compositions_up_to(if m == 3 { 5 } else { 6 }) {
                let module = schur(&ctx, Variant::Algebra, &alpha).unwrap();
                let kernel = schur_kernel(&ctx, Variant::Algebra, &alpha).unwrap();
                assert_eq!(module.dim(), kernel.dim());
                assert_eq!(module.weight_dims().iter().map(|w| w.1).sum::<usize>(), module.dim());
            }
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn ses_dimension_law(split in 1usize..6, total in 2usize..=6, m in 2usize..=3, pick in any::<prop::sample::Index>(), which in 0usize..3) {
        prop_assume!(split < total);
        let alg = builtins(m).swap_remove(which);
        let ctx = QContext::new(alg);
        let alphas = Composition::all_of(split);
        let betas = Composition::all_of(total - split);
        let alpha = pick.get(&alphas);
        let beta = pick.get(&betas);
        let r = verify_ses(&ctx, Variant::Algebra, alpha, beta).unwrap();
        let d = |c: &Composition| schur(&ctx, Variant::Algebra, c).unwrap().dim();
        prop_assert!(r.exact);
        prop_assert_eq!(d(alpha) * d(beta), d(&alpha.concat(beta)) + d(&alpha.near_concat(beta).unwrap()));
    }

    #[test]
    fn change_of_basis_preserves_dimension(entries in prop::collection::vec(-2i64..=2, 4), n in 1usize..=4, pick in any::<prop::sample::Index>()) {
        let g = qmatrix(2, 2, &entries);
        prop_assume!(g.rank() == 2);
        let ctx = QContext::new(QuadraticAlgebra::symmetric(2));
        let alphas = Composition::all_of(n);
        let alpha = pick.get(&alphas);
        let module = schur(&ctx, Variant::Algebra, alpha).unwrap();
        let power = (1..n).fold(g.clone(), |acc, _| acc.kron(&g));
        prop_assert_eq!(induced_rank(&module, &power).unwrap(), module.dim());
    }
}

// Homology.

#[test]
fn koszul_builtins_have_diagonal_tor() {
    for m in 1..=2usize {
        for alg in builtins(m) {
            let ctx = QContext::new(alg.clone())
                .with_degree_bound(6)
                .unwrap()
                .with_right(QuadraticModule::trivial(&alg, Side::Right, 0))
                .unwrap()
                .with_left(QuadraticModule::trivial(&alg, Side::Left, 0))
                .unwrap();
            let t = tor_dims(&ctx, 6, true).unwrap();
            assert!(t.consistent, "{}", alg.name());
            for e in &t.entries {
                if e.i != e.j {
                    assert_eq!(e.dim(), Some(0), "{} Tor_{}({})", alg.name(), e.i, e.j);
                }
            }
        }
    }
}

#[test]
fn ext_matches_tor_against_residue_field() {
    let alg = QuadraticAlgebra::<Q>::symmetric(2);
    for r in 0..=2 {
        let m = if r == 0 {
            QuadraticModule::trivial(&alg, Side::Left, 0)
        } else {
            QuadraticModule::truncation(&alg, Side::Left, r).unwrap()
        };
        let ctx = QContext::new(alg.clone()).with_left(m.clone()).unwrap();
        let ext = ext_dims(&ctx, 3, true).unwrap();
        assert!(ext.consistent);
        let tor_ctx = QContext::new(alg.clone())
            .with_right(QuadraticModule::trivial(&alg, Side::Right, 0))
            .unwrap()
            .with_left(m)
            .unwrap();
        let tor = tor_dims(&tor_ctx, 3, false).unwrap();
        for i in 0..=3 {
            assert_eq!(ext.total(i), tor.total(i), "r={r} i={i}");
        }
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn certificates_are_monotone(seed in any::<u64>()) {
        let a = common::random_algebra::<Gf32003>(seed, 2, common::relation_count(seed, 2));
        let ctx = ribbon_koszul::PContext::new(a);
        let cert = certify_koszul(&ctx, KoszulTarget::Algebra, 5, KoszulMethod::Both).unwrap();
        for strand in [false, true] {
            let c = cert.cumulative(strand);
            prop_assert!(c.windows(2).all(|w| w[0] || !w[1]));
        }
        let shorter = certify_koszul(&ctx, KoszulTarget::Algebra, 4, KoszulMethod::Both).unwrap();
        prop_assert_eq!(&cert.cumulative(true)[..4], &shorter.cumulative(true)[..]);
    }
}

// Multi-Schur modules.

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn multischur_paths_and_weighted_ledger(
        which in prop::collection::vec(0usize..3, 2),
        parts in prop::collection::vec(prop::collection::vec(1usize..=2, 1..=3), 2),
    ) {
        let ell = parts.iter().map(Vec::len).min().unwrap();
        let factors: Vec<QContext> = which.iter().map(|&w| QContext::new(builtins(2).swap_remove(w))).collect();
        let mctx = MultiContext::new(factors, Variant::Algebra).unwrap();
        let tuple: Vec<PartitionedComposition> = parts
            .iter()
            .map(|p| PartitionedComposition::singletons(&Composition::new(p[..ell].to_vec()).unwrap()).unwrap())
            .collect();
        let lattice = multischur_with(&mctx, &tuple, MultiPath::Lattice).unwrap().dim();
        let kernel = multischur_with(&mctx, &tuple, MultiPath::Kernel).unwrap().dim();
        prop_assert_eq!(lattice, kernel);
        let ledger = filtration_ledger(&mctx, &tuple).unwrap();
        prop_assert!(ledger.balanced);
        prop_assert_eq!(ledger.target_dim, lattice);
        prop_assert_eq!(ledger.weights_balanced, Some(true));
    }
}

// Symmetric functions.

#[test]
fn ribbon_formulas_agree() {
    for m in 1..=3 {
        for alpha in common::compositions_up_to(5) {
            let a = Alphabets::uniform(1, m, alpha.weight());
            assert_eq!(symfunc::ribbon::<Q>(&a, 0, &alpha).unwrap(), symfunc::ribbon_ssyt::<Q>(&a, 0, &alpha).unwrap());
        }
    }
}

#[test]
fn column_ribbon_is_elementary() {
    let a = Alphabets::uniform(1, 3, 4);
    for i in 1..=4 {
        assert_eq!(symfunc::ribbon::<Q>(&a, 0, &Composition::ones(i)).unwrap(), symfunc::e::<Q>(&a, 0, i).unwrap());
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn hamel_goulden_polynomial_identity(parts in prop::collection::vec(1usize..=2, 1..=4), mask in 0u32..8) {
        let alpha = Composition::new(parts).unwrap();
        let pc = common::partitions_of(&alpha, 3);
        let pc = &pc[mask as usize % pc.len()];
        let a = Alphabets::uniform(1, 2, alpha.weight());
        prop_assert!(symfunc::verify_hg_identity::<Q>(pc, &a).unwrap().holds);
    }
}
