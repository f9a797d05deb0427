mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::{Kind, Rows};
use fock::conditions::{check_c, companion_track, marked_pair_moves, Strategy as Search, Verdict};
use fock::crystal::{self, e_tilde, f_tilde, Structure};
use fock::hierarchy::{family_of, sigma_a_inv};
use fock::k0::{operator_matrix, Operator};
use fock::multipartition::multipartitions_up_to;
use fock::order::{mp_lt, mp_preceq};
use fock::virtual_mp::{descent_step, from_virtual, to_virtual, truncation_embed, virtual_preceq, Root, ZsElement};
use fock::weyl::{apply_word, special_nu, ReducedWord};
use fock::{Multicharge, Multipartition};

fn lib(r: &Rows) -> Multipartition {
    common::from_rows(r)
}

fn rows(m: &Multipartition) -> Rows {
    common::rows_of(m)
}

#[test]
fn order_matches_oracle_for_e4() {
    for s in common::random_multicharges(4, 1..=2, 3) {
        let ctx = common::ctx(4, &s);
        for n in 0..=5 {
            let layer: Vec<Rows> = common::all_of_size(s.len(), n).into_iter().collect();
            for a in &layer {
                assert!(mp_preceq(&lib(a), &lib(a), &ctx));
                for b in &layer {
                    assert_eq!(
                        mp_preceq(&lib(a), &lib(b), &ctx),
                        common::preceq(a, b, &s, 4),
                        "s={s:?} {a:?} {b:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn dagger_reverses_order() {
    for e in [2, 3] {
        for s in [vec![0], vec![0, 1], vec![2, -1]] {
            let ctx = common::ctx(e, &s);
            let dctx = ctx.dagger();
            for n in 0..=5 {
                let layer = fock::multipartition::multipartitions_of(s.len(), n);
                for a in &layer {
                    for b in &layer {
                        assert_eq!(
                            mp_preceq(a, b, &ctx),
                            mp_preceq(&b.dagger_shape(), &a.dagger_shape(), &dctx),
                            "e={e} s={s:?}: {a} vs {b}"
                        );
                    }
                }
            }
        }
    }
}

fn zs_strategy() -> impl Strategy<Value = (i64, Vec<i64>, Vec<i64>)> {
    (2i64..=3, prop::collection::vec(0i64..=2, 1..=3))
        .prop_filter("at least one row", |(_, s)| s.iter().sum::<i64>() >= 1)
        .prop_flat_map(|(e, s)| {
            let blocks: Vec<_> = s
                .iter()
                .map(|&k| prop::collection::btree_set(-6i64..=6, k as usize).prop_map(|b| b.into_iter().rev().collect::<Vec<_>>()))
                .collect();
            (Just(e), Just(s), blocks)
        })
        .prop_map(|(e, s, blocks)| (e, s, blocks.concat()))
}

fn block_of(s: &[i64], k: usize) -> usize {
    let mut acc = 0;
    s.iter()
        .position(|&x| {
            acc += x as usize;
            k <= acc
        })
        .expect("index inside the element")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn virtual_round_trip((e, s, a) in zs_strategy()) {
        let ctx = common::ctx(e, &s);
        let z = ZsElement::new(a, &ctx).unwrap();
        let v = to_virtual(&z, &ctx).unwrap();
        prop_assert_eq!(from_virtual(&v, &ctx).unwrap(), z);
    }

    #[test]
    fn descent_keeps_residues_and_lowers_within_components_or_by_delta((e, s, a) in zs_strategy()) {
        let ctx = common::ctx(e, &s);
        let z = ZsElement::new(a, &ctx).unwrap();
        let v = to_virtual(&z, &ctx).unwrap();
        let m = z.entries().len();
        for i in 1..=m {
            for j in 1..=m {
                for n in -3..=3 {
                    let beta = Root { i, j, n };
                    if !beta.is_positive() {
                        continue;
                    }
                    if let Some(out) = descent_step(&z, beta, &ctx).unwrap() {
                        prop_assert_eq!(out.residue_multiset(e), z.residue_multiset(e));
                        prop_assert!(z.entries()[i - 1] - z.entries()[j - 1] - n * e > 0);
                        if n > 0 || block_of(&s, i) == block_of(&s, j) {
                            let w = to_virtual(&out, &ctx).unwrap();
                            prop_assert!(common::virtual_preceq(&w.rows, &v.rows, &s, e));
                            prop_assert!(virtual_preceq(&w, &v, &ctx).unwrap());
                        }
                    }
                }
            }
        }
    }
}

/// With this box order, a zero-δ reflection across components moves boxes
/// of equal content to a later component, which is larger.
#[test]
fn zero_delta_descent_across_components_goes_up() {
    let ctx = common::ctx(2, &[1, 2]);
    let z = ZsElement::new(vec![-1, 4, -3], &ctx).unwrap();
    let out = descent_step(&z, Root { i: 1, j: 3, n: 0 }, &ctx).unwrap().unwrap();
    assert_eq!(out.entries(), &[-3, 4, -1]);
    let (v, w) = (to_virtual(&z, &ctx).unwrap(), to_virtual(&out, &ctx).unwrap());
    assert!(virtual_preceq(&v, &w, &ctx).unwrap());
    assert!(!virtual_preceq(&w, &v, &ctx).unwrap());
}

#[test]
fn truncation_is_injective_and_order_compatible() {
    for e in [2, 3] {
        for s in [vec![5], vec![5, 6], vec![6, 5]] {
            let ctx = common::ctx(e, &s);
            for n in 0..=3 {
                let items = multipartitions_up_to(s.len(), n);
                let images: Vec<_> = items
                    .iter()
                    .map(|m| to_virtual(&truncation_embed(m, &ctx, n).unwrap(), &ctx).unwrap())
                    .collect();
                let distinct: BTreeSet<String> = images.iter().map(|v| format!("{:?}", v.rows)).collect();
                assert_eq!(distinct.len(), items.len());
                for (a, va) in items.iter().zip(&images) {
                    for (b, vb) in items.iter().zip(&images) {
                        let strict = va != vb && virtual_preceq(va, vb, &ctx).unwrap();
                        assert_eq!(mp_lt(a, b, &ctx), strict, "e={e} s={s:?} n={n}: {a} vs {b}");
                    }
                }
            }
        }
    }
}

#[test]
fn crystal_moves_one_box_of_the_right_residue() {
    for e in [2, 3] {
        for s in common::random_multicharges(9, 1..=3, 3) {
            let ctx = common::ctx(e, &s);
            for m in multipartitions_up_to(s.len(), 5) {
                let counts = m.residue_counts(&ctx);
                for i in 0..e {
                    let unit = |other: &Multipartition, sign: i64| {
                        let c = other.residue_counts(&ctx);
                        (0..e as usize).all(|k| c[k] as i64 - counts[k] as i64 == if k as i64 == i { sign } else { 0 })
                    };
                    for which in [Structure::Usual, Structure::Dual] {
                        if let Some(up) = crystal::f_op(&m, &ctx, i, which) {
                            assert!(unit(&up, 1));
                        }
                        if let Some(down) = crystal::e_op(&m, &ctx, i, which) {
                            assert!(unit(&down, -1));
                        }
                    }
                    assert_eq!(
                        crystal::string_lengths(&m, &ctx, i, Structure::Usual).0 as i64
                            - crystal::string_lengths(&m, &ctx, i, Structure::Usual).1 as i64,
                        crystal::string_lengths(&m, &ctx, i, Structure::Dual).0 as i64
                            - crystal::string_lengths(&m, &ctx, i, Structure::Dual).1 as i64,
                    );
                }
            }
        }
    }
}

#[test]
fn cycles_produce_the_expected_row_counts() {
    for e in 2..=4 {
        let ctx = common::ctx(e, &[0]);
        for r in common::all_up_to(1, 10) {
            let m = lib(&r);
            if common::is_singular(&r, &[0], e) {
                for n in r[0].len()..=r[0].len() + 4 {
                    let out = apply_word(&ReducedWord::cycle(0, n, e), &m, &ctx, false, 64).unwrap().unwrap();
                    assert_eq!(out.component(0).len(), n, "e={e} {m} n={n}");
                }
            }
            if common::is_cosingular(&r, &[0], e) {
                let cols = r[0].first().copied().unwrap_or(0) as usize;
                for n in cols..=cols + 4 {
                    let out = apply_word(&ReducedWord::cycle(0, n, e), &m, &ctx, true, 64).unwrap().unwrap();
                    assert_eq!(out.component(0).len(), r[0].len() + n, "e={e} {m} n={n}");
                }
            }
        }
    }
}

fn words(e: i64, max_len: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<i64>| (0..e).map(move |i| [w.as_slice(), &[i]].concat()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Length check through the window of an affine permutation.
fn is_reduced(w: &[i64], e: i64) -> bool {
    let mut f: Vec<i64> = (0..e).collect();
    for &a in w {
        let a = a as usize;
        let n = e as usize;
        let next = if a + 1 == n { f[0] + e } else { f[a + 1] };
        if f[a] > next {
            return false;
        }
        if a + 1 == n {
            let last = f[n - 1];
            f[n - 1] = f[0] + e;
            f[0] = last - e;
        } else {
            f.swap(a, a + 1);
        }
    }
    true
}

#[test]
fn reflections_are_defined_along_singular_orbits() {
    for e in [2, 3] {
        let ctx = common::ctx(e, &[0]);
        for r in common::all_up_to(1, 8).into_iter().filter(|r| common::is_singular(r, &[0], e)) {
            for w in words(e, 4).into_iter().filter(|w| is_reduced(w, e)) {
                let got = apply_word(&ReducedWord::new(w.clone(), e), &lib(&r), &ctx, false, 200).unwrap();
                let oracle = common::apply_letters(&w, &r, &[0], e, Kind::Usual);
                assert!(got.is_some(), "e={e} {r:?} {w:?}");
                assert_eq!(got.map(|m| rows(&m)), oracle);
            }
        }
    }
}

#[test]
fn special_nu_is_singular_and_not_a_column() {
    for s in common::random_multicharges(31, 1..=4, 25) {
        let ctx = common::ctx(2, &s);
        let nu = special_nu(&ctx).unwrap();
        assert_eq!(nu.size(), 2);
        assert!(crystal::is_singular(&nu, &ctx), "s={s:?}: {nu}");
        assert!(nu.components().iter().all(|p| p.parts() != [1, 1]), "s={s:?}: {nu}");
    }
}

#[test]
fn signature_map_is_increasing_on_families() {
    for e in [2, 3] {
        for s in [vec![0], vec![1, 0], vec![0, 2]] {
            let ctx = common::ctx(e, &s);
            let mut seen = BTreeSet::new();
            for m in multipartitions_up_to(s.len(), 6) {
                for i in 0..e {
                    let fam = family_of(&m, &ctx, i);
                    if !seen.insert(fam.clone()) {
                        continue;
                    }
                    let members = fam.members(6);
                    for a in &members {
                        for b in &members {
                            if mp_preceq(a, b, &ctx) {
                                assert!(
                                    sigma_a_inv(a, &ctx, i).preceq(&sigma_a_inv(b, &ctx, i)),
                                    "e={e} s={s:?} i={i}: {a} {b}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn stripping_removable_boxes_is_one_pass() {
    for e in [2, 3] {
        for s in [vec![0], vec![0, 1], vec![3, 1]] {
            let ctx = common::ctx(e, &s);
            for r in common::all_up_to(s.len(), 7) {
                for i in 0..e {
                    let strip: Vec<_> = common::removable(&r)
                        .into_iter()
                        .filter(|&b| common::residue(common::content(b, &s), e) == i)
                        .collect();
                    let mut skel = r.clone();
                    for b in strip {
                        skel = common::without_box(&skel, b);
                    }
                    assert!(common::removable(&skel)
                        .iter()
                        .all(|&b| common::residue(common::content(b, &s), e) != i));
                    assert_eq!(rows(&family_of(&lib(&r), &ctx, i).skeleton), skel);
                }
            }
        }
    }
}

#[test]
fn companions_stay_below_the_track() {
    for e in [2, 3] {
        let ctx = common::ctx(e, &[0]);
        for r in common::all_up_to(1, 8).into_iter().filter(|r| common::is_singular(r, &[0], e)) {
            let m = lib(&r);
            for c in 0..e {
                for n in 1..=6 {
                    let track = companion_track(&ReducedWord::cycle(c, n, e), &m, &ctx, 200).unwrap();
                    for (nu, comps) in &track {
                        for x in comps.multipartitions() {
                            assert!(mp_lt(x, nu, &ctx), "e={e} λ={m} C_{c},{n}: {x} not below {nu}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn marked_pairs_along_level_one_cycles() {
    for e in [2, 3] {
        let ctx = common::ctx(e, &[0]);
        for r in common::all_up_to(1, 8).into_iter().filter(|r| common::is_singular(r, &[0], e)) {
            let original: BTreeSet<(i64, i64)> = common::boxes(&r).into_iter().map(|b| (b.0, b.1)).collect();
            for n in 1..=8usize {
                let image = apply_word(&ReducedWord::cycle(0, n, e), &lib(&r), &ctx, false, 200)
                    .unwrap()
                    .unwrap();
                let img = rows(&image);
                for i in 0..e {
                    let got: BTreeSet<((i64, i64), (i64, i64))> = marked_pair_moves(&image, &ctx, i)
                        .into_iter()
                        .map(|(_, b, b2)| ((b.row, b.col), (b2.row, b2.col)))
                        .collect();
                    let adds = common::addable(&img);
                    let want: BTreeSet<((i64, i64), (i64, i64))> = common::removable(&img)
                        .into_iter()
                        .filter(|&b| common::residue(common::content(b, &[0]), e) == i && b.0 > n as i64 && original.contains(&(b.0, b.1)))
                        .filter_map(|b| adds.iter().find(|a| a.0 == b.0 + 1).map(|a| ((b.0, b.1), (a.0, a.1))))
                        .collect();
                    assert!(got.iter().all(|(b, b2)| b2.0 == b.0 + 1), "e={e} λ={r:?} n={n} i={i}");
                    if e == 2 {
                        assert_eq!(got, want, "e={e} λ={r:?} n={n} i={i}");
                    } else {
                        assert!(want.is_subset(&got), "e={e} λ={r:?} n={n} i={i}");
                    }
                }
            }
        }
    }
}

/// For `e > 2` a row of length divisible by `e` picks up an extra pair:
/// the box added at the end of row one is paired with row two.
#[test]
fn extra_marked_pair_above_the_cycle_rows() {
    let ctx = common::ctx(3, &[0]);
    let image = apply_word(&ReducedWord::cycle(0, 2, 3), &lib(&vec![vec![3]]), &ctx, false, 200)
        .unwrap()
        .unwrap();
    assert_eq!(rows(&image), vec![vec![4, 1]]);
    let pairs: Vec<_> = marked_pair_moves(&image, &ctx, 0)
        .into_iter()
        .map(|(_, b, b2)| ((b.row, b.col), (b2.row, b2.col)))
        .collect();
    assert_eq!(pairs, vec![((1, 4), (2, 2))]);
}

#[test]
fn condition_verdicts_are_sound_and_stable() {
    for e in [2, 3] {
        let ctx = common::ctx(e, &[0]);
        for size in 1..=6 {
            let layer: Vec<Rows> = common::all_of_size(1, size).into_iter().collect();
            for l in layer.iter().filter(|x| common::is_singular(x, &[0], e)) {
                for m in layer.iter().filter(|x| common::is_cosingular(x, &[0], e)) {
                    let (lm, mm) = (lib(l), lib(m));
                    if !crystal::same_block(&lm, &mm, &ctx) {
                        continue;
                    }
                    let small = check_c(
                        &lm,
                        &mm,
                        &ctx,
                        Search {
                            max_cycle: 4,
                            bfs_len: 3,
                            allow_bfs: true,
                            cap: 200,
                        },
                    )
                    .unwrap();
                    let large = check_c(&lm, &mm, &ctx, Search::default()).unwrap();
                    if small.holds() {
                        assert!(large.holds());
                    }
                    if let Verdict::Holds { word, .. } = &large {
                        let a = common::apply_letters(word.letters(), l, &[0], e, Kind::Usual).unwrap();
                        let b = common::apply_letters(word.letters(), m, &[0], e, Kind::Dual).unwrap();
                        assert!(!common::preceq(&a, &b, &[0], e));
                    }
                }
            }
        }
    }
}

#[test]
fn fock_operators_follow_the_crystal_and_blocks() {
    for e in [2, 3] {
        let ctx: Multicharge = common::ctx(e, &[0, 1]);
        for degree in 0..=4 {
            for i in 0..e {
                let f = operator_matrix(&ctx, Operator::F, i, degree);
                for m in fock::multipartition::multipartitions_of(2, degree) {
                    if let Some(t) = f_tilde(&m, &ctx, i) {
                        let entry = f.iter().find(|x| x.col == m.to_string() && x.row == t.to_string());
                        assert_eq!(entry.map(|x| x.value), Some(1));
                    }
                }
                for t in f.iter().chain(&operator_matrix(&ctx, Operator::E, i, degree)) {
                    let (a, b): (Multipartition, Multipartition) = (t.row.parse().unwrap(), t.col.parse().unwrap());
                    let (ca, cb) = (a.residue_counts(&ctx), b.residue_counts(&ctx));
                    let diff: i64 = (0..e as usize).map(|k| (ca[k] as i64 - cb[k] as i64).abs()).sum();
                    assert_eq!(diff, 1);
                    assert_eq!((ca[i as usize] as i64 - cb[i as usize] as i64).abs(), 1);
                }
                let _ = e_tilde(&Multipartition::empty(2), &ctx, i);
            }
        }
    }
}
