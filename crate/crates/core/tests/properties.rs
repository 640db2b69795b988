mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use qmip::bitset::BitSet;
use qmip::cones::{generate_inequalities, Cone, InequalityFamily};
use qmip::entropy_space::{EntropyVector, PartyCount, Permutation};
use qmip::gset::compute_g;
use qmip::mia::{compare, enumerate_mia, pattern_of_vector, PatternOrder};
use qmip::states::{stabilizer_entropy_vector, CheckMatrix};

use InequalityFamily::*;

fn n(k: usize) -> PartyCount {
    PartyCount::new(k).unwrap()
}

fn int_rows(k: usize, fams: &[InequalityFamily]) -> Vec<Vec<i64>> {
    generate_inequalities(n(k), fams)
        .iter()
        .map(|f| f.to_i64().unwrap())
        .collect()
}

fn ray_set(k: usize, fams: &[InequalityFamily]) -> BTreeSet<Vec<i64>> {
    let cone = Cone::from_families(n(k), fams).unwrap();
    cone.rays().unwrap().iter().map(|r| r.point().to_vec()).collect()
}

#[test]
fn double_description_matches_exhaustive_search() {
    for (k, fams) in [(2, &[Sa][..]), (2, &[Sa, Ssa]), (3, &[Sa, Ssa]), (3, &[Sa, Ssa, Mmi])] {
        let oracle = common::brute_force_rays(&int_rows(k, fams), n(k).dim());
        assert_eq!(ray_set(k, fams), oracle, "n={k} {fams:?}");
    }
}

#[test]
fn stirling_recurrence_values() {
    assert_eq!(common::stirling2(3, 3), 1);
    assert_eq!(common::stirling2(4, 3), 6);
    assert_eq!(common::stirling2(5, 3), 25);
    assert_eq!(common::stirling2(6, 3), 90);
}

#[test]
fn closure_agrees_with_reference_span() {
    let ctx = enumerate_mia(n(3));
    let mut seed = 0x9e37_79b9_u64;
    for _ in 0..300 {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        let members: BTreeSet<usize> = (0..ctx.len()).filter(|i| seed >> (i % 64) & 7 == 0).collect();
        let raw = BitSet::from_indices(ctx.len(), members.iter().copied());
        let got: BTreeSet<usize> = ctx.closure(&raw).members().iter().collect();
        assert_eq!(got, common::span_closure(ctx.int_normals(), &members));
    }
}

#[test]
fn adding_monotonicity_only_removes_patterns() {
    let plain = compute_g(n(2), &[Sa]).unwrap();
    let mono = compute_g(n(2), &[Sa, Mono]).unwrap();
    assert!(mono.iter().all(|p| plain.contains(p)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_idempotent_and_extensive(k in 2usize..=4, bits in proptest::collection::vec(any::<bool>(), 270)) {
        let ctx = enumerate_mia(n(k));
        let raw = BitSet::from_indices(ctx.len(), (0..ctx.len()).filter(|&i| bits[i] && i % 3 == 0));
        let once = ctx.closure(&raw);
        prop_assert!(raw.is_subset(once.members()));
        prop_assert_eq!(ctx.closure(once.members()), once);
    }

    #[test]
    fn sums_of_cone_points_meet_their_patterns(
        k in 2usize..=4,
        wa in proptest::collection::vec(0i64..4, 76),
        wb in proptest::collection::vec(0i64..4, 76),
    ) {
        let ctx = enumerate_mia(n(k));
        let cone = Cone::from_families(n(k), &[Sa, Ssa]).unwrap();
        let rays = cone.rays().unwrap();
        let combo = |w: &[i64]| {
            let mut v = vec![0i64; ctx.dim()];
            for (r, &c) in rays.iter().zip(w) {
                for (x, y) in v.iter_mut().zip(r.point()) {
                    *x += c * y;
                }
            }
            v
        };
        let (a, b) = (combo(&wa), combo(&wb));
        let (pa, pb) = (ctx.pattern_of_point(&a), ctx.pattern_of_point(&b));
        prop_assert!(ctx.is_closed(pa.members()));
        let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let ps = ctx.pattern_of_point(&sum);
        prop_assert_eq!(&ps, &ctx.meet(&pa, &pb).unwrap());
        prop_assert!(matches!(compare(&ps, &pa).unwrap(), PatternOrder::Equal | PatternOrder::Precedes));
        if k <= 3 {
            prop_assert!(compute_g(n(k), &[Sa, Ssa]).unwrap().contains(&ps));
        }
    }

    #[test]
    fn patterns_are_permutation_equivariant(
        k in 2usize..=3,
        coords in proptest::collection::vec(0i64..5, 7),
        perm_seed in 0usize..24,
    ) {
        let ctx = enumerate_mia(n(k));
        let v = EntropyVector::from_integers(n(k), &coords[..n(k).dim()]).unwrap();
        let perms = Permutation::all(k + 1);
        let perm = &perms[perm_seed % perms.len()];
        let moved = pattern_of_vector(&ctx, &v.permute(perm).unwrap()).unwrap();
        let expected = ctx.permute_pattern(&pattern_of_vector(&ctx, &v).unwrap(), perm);
        prop_assert_eq!(moved, expected);
    }

    #[test]
    fn stabilizer_and_closed_forms_agree_on_bell_pairs(a in 1usize..=4, b in 1usize..=4) {
        prop_assume!(a != b);
        let k = n(3);
        let cm = CheckMatrix::from_paulis(k, &["XX", "ZZ"], vec![a, b]).unwrap();
        let via_matrix = stabilizer_entropy_vector(&cm, k).unwrap();
        prop_assert_eq!(via_matrix, qmip::states::bell_vector(k, a, b).unwrap());
    }
}
