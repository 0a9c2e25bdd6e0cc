use ibuild::building::decomp::in_iwahori;
use ibuild::building::*;
use ibuild::coxeter::TypeSet;
use ibuild::matrix::Mat;
use ibuild::padic::INF;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn in_k(m: &Mat) -> bool {
    m.min_val() >= 0 && m.det().agreement(&m.field().one()) >= m.field().cap as i64 - 4
}

fn round_trips(p: u32, n: usize, seed: u64) {
    let g = Group::new(p, n, 32).unwrap();
    let mut r = rng(seed);
    for _ in 0..1000 {
        let x = g.random_element(&mut r, -3, 3);
        let c = g.cartan_decompose(&x).unwrap();
        assert!(x.relative_agreement(&c.recompose()) >= 30);
        assert!(in_k(&c.k1) && in_k(&c.k2));
        assert!(c.exps.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(c.exps.iter().sum::<i64>(), 0);
        for dir in [Direction::Plus, Direction::Minus] {
            let iw = g.iwasawa_decompose(&x, dir).unwrap();
            assert!(x.relative_agreement(&iw.recompose()) >= 30);
            assert!(in_k(&iw.k));
            for i in 0..n {
                assert!(iw.u.get(i, i).agreement(&g.field().one()) >= 30);
                for j in 0..n {
                    let zero_side = if dir == Direction::Plus { i > j } else { i < j };
                    if zero_side {
                        assert!(iw.u.get(i, j).is_zero());
                    }
                }
            }
        }
        let w = g.iwahori_coset(&x).unwrap();
        assert!(x.relative_agreement(&w.recompose()) >= 30);
        assert!(in_iwahori(&w.left) && in_iwahori(&w.right));
    }
}

#[test]
fn decompositions_round_trip_sl2_q3() {
    round_trips(3, 2, 11);
}

#[test]
fn decompositions_round_trip_sl3_q5() {
    round_trips(5, 3, 12);
}

#[test]
fn cartan_exponents_are_bi_k_invariant() {
    let g = Group::new(3, 3, 32).unwrap();
    let mut r = rng(3);
    for _ in 0..200 {
        let x = g.random_element(&mut r, -2, 2);
        let y = &(&g.random_k(&mut r) * &x) * &g.random_k(&mut r);
        assert_eq!(g.cartan_decompose(&x).unwrap().exps, g.cartan_decompose(&y).unwrap().exps);
    }
}

/// Affine Weyl generators of SL_n: the finite simple reflections and
/// `s0`, which swaps the first and last coordinates with `p^-1, -p`.
fn affine_generators(g: &Group) -> Vec<Mat> {
    let f = g.field();
    let n = g.n();
    let mut gens: Vec<Mat> = (0..n - 1).map(|i| g.weyl_matrix(&g.weyl().generator(i))).collect();
    let mut s0 = g.identity();
    s0.set(0, 0, f.zero());
    s0.set(n - 1, n - 1, f.zero());
    s0.set(0, n - 1, f.pow_p(-1));
    s0.set(n - 1, 0, -f.pow_p(1));
    gens.push(s0);
    gens
}

fn words(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for s in 0..k {
                if w.last() != Some(&s) {
                    let mut v: Vec<usize> = w.clone();
                    v.push(s);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[test]
fn iwahori_coset_recovers_affine_words() {
    for (n, len) in [(2usize, 4usize), (3, 3)] {
        let g = Group::new(3, n, 32).unwrap();
        let gens = affine_generators(&g);
        let mut r = rng(5);
        for word in words(gens.len(), len) {
            let w = word.iter().fold(g.identity(), |acc, &s| &acc * &gens[s]);
            let want = AffineWeylCoset::from_monomial(&w).unwrap();
            for _ in 0..4 {
                let x = &(&g.random_iwahori(&mut r) * &w) * &g.random_iwahori(&mut r);
                assert_eq!(g.iwahori_coset(&x).unwrap().coset, want, "word {word:?}");
            }
        }
    }
}

#[test]
fn iwahori_identity_and_translation() {
    let g = Group::new(3, 2, 32).unwrap();
    let mut r = rng(6);
    let i = g.random_iwahori(&mut r);
    assert_eq!(g.iwahori_coset(&i).unwrap().coset, AffineWeylCoset { perm: vec![0, 1], exps: vec![0, 0] });
}

#[test]
fn finite_part_of_iwahori_coset_matches_bruhat_cell() {
    let g = Group::new(3, 3, 32).unwrap();
    let f = g.field();
    let mut r = rng(7);
    for w in g.weyl().enumerate().unwrap() {
        let e: Vec<i64> = (0..3).map(|_| r.gen_range(-2..=2)).collect();
        let shift = Mat::diag_pow(f, &[e[0], e[1], -e[0] - e[1]]);
        let upper = |r: &mut ChaCha8Rng| {
            let params: Vec<_> = (0..3).map(|_| f.random_integer(r, 2)).collect();
            g.unipotent_radical_element(TypeSet::EMPTY, true, &params).unwrap()
        };
        let x = &(&(&upper(&mut r) * &g.weyl_matrix(&w)) * &shift) * &upper(&mut r);
        let iw = g.iwahori_coset(&x).unwrap();
        assert_eq!(iw.coset.perm, g.perm_of(&w));
        assert_eq!(g.bruhat(&x, Direction::Plus).unwrap().perm, g.perm_of(&w));
    }
}

#[test]
fn canonical_form_is_coset_invariant() {
    let g = Group::new(3, 3, 32).unwrap();
    let mut r = rng(8);
    for ty in TypeSet::all(2) {
        for _ in 0..250 {
            let x = g.random_element(&mut r, -2, 2);
            let s = g.boundary_simplex(&x, ty).unwrap();
            let q = g.random_parabolic(&mut r, ty, -1, 2);
            let t = g.boundary_simplex(&(&x * &q), ty).unwrap();
            assert!(g.same(&s, &t), "type {ty}");
            assert!(g.same(&g.boundary_simplex(s.rep(), ty).unwrap(), &s));
            assert!(s.rep().min_val() >= 0);
        }
    }
}

#[test]
fn standard_chambers() {
    let g = Group::new(3, 3, 32).unwrap();
    let cp = g.boundary_simplex(&g.identity(), TypeSet::EMPTY).unwrap();
    assert!(g.same(&cp, &g.standard_simplex(TypeSet::EMPTY)));
    let cm = g.boundary_simplex(&g.longest_matrix(), TypeSet::EMPTY).unwrap();
    assert!(g.same(&cm, &g.standard_opposite(TypeSet::EMPTY)));
    assert!(!g.same(&cp, &cm));
}

#[test]
fn unipotent_translates_of_c_minus_are_opposite_c_plus() {
    for n in [2, 3, 4] {
        let g = Group::new(5, n, 24).unwrap();
        let mut r = rng(9);
        let cp = g.standard_simplex(TypeSet::EMPTY);
        let cm = g.standard_opposite(TypeSet::EMPTY);
        for _ in 0..100 {
            let u = g.random_unipotent(&mut r, TypeSet::EMPTY, true, -3, 3);
            assert!(g.opposite(&cp, &g.act(&u, &cm).unwrap()).unwrap());
            if n > 2 {
                // a chamber sharing a panel with c+ is never opposite it
                let near = g.act(&u, &g.chamber(&g.weyl().generator(0))).unwrap();
                assert!(!g.opposite(&cp, &near).unwrap());
            }
        }
    }
}

#[test]
fn opposite_faces_have_twisted_type() {
    let g = Group::new(3, 4, 24).unwrap();
    for ty in TypeSet::all(3) {
        let s = g.standard_simplex(ty);
        let o = g.standard_opposite(ty);
        assert_eq!(o.ty(), g.opposite_type(ty));
        assert!(g.opposite(&s, &o).unwrap());
        if g.opposite_type(ty) != ty {
            assert!(!g.opposite(&s, &g.boundary_simplex(o.rep(), ty).unwrap()).unwrap());
        }
    }
}

#[test]
fn retraction_basics() {
    let g = Group::new(3, 3, 32).unwrap();
    let id = g.identity();
    let cm = g.standard_opposite(TypeSet::EMPTY);
    for w in g.weyl().enumerate().unwrap() {
        let c = g.chamber(&w);
        assert_eq!(g.retraction(&id, &cm, &c).unwrap().w, w);
    }
    let mut r = rng(10);
    for _ in 0..20 {
        let u = g.random_unipotent(&mut r, TypeSet::EMPTY, false, -2, 2);
        let x = g.act(&u, &g.standard_simplex(TypeSet::EMPTY)).unwrap();
        assert!(g.retraction(&id, &cm, &x).unwrap().w.is_identity());
    }
}

#[test]
fn retraction_routes_agree_and_are_idempotent() {
    let g = Group::new(3, 3, 32).unwrap();
    let mut r = rng(11);
    let cm = g.standard_opposite(TypeSet::EMPTY);
    for _ in 0..100 {
        let frame = g.random_element(&mut r, -1, 1);
        let center = g.act(&frame, &cm).unwrap();
        let x = g.boundary_simplex(&g.random_element(&mut r, -2, 2), TypeSet::EMPTY).unwrap();
        let a = g.retraction(&frame, &center, &x).unwrap();
        let b = g.retraction_from_opposite(&frame, &x).unwrap();
        assert_eq!(a.w, b.w);
        assert!(g.same(&a.chamber, &b.chamber));
        let again = g.retraction(&frame, &center, &a.chamber).unwrap();
        assert!(g.same(&again.chamber, &a.chamber));
        // the image is at the same Weyl distance from the centre
        assert_eq!(g.relative_position(&center, &a.chamber).unwrap(), g.relative_position(&center, &x).unwrap());
    }
}

#[test]
fn retraction_from_any_apartment_chamber() {
    let g = Group::new(5, 3, 24).unwrap();
    let mut r = rng(12);
    let id = g.identity();
    for v in g.weyl().enumerate().unwrap() {
        let center = g.chamber(&v);
        for _ in 0..10 {
            let x = g.boundary_simplex(&g.random_element(&mut r, -2, 2), TypeSet::EMPTY).unwrap();
            let rho = g.retraction(&id, &center, &x).unwrap();
            assert_eq!(g.relative_position(&center, &rho.chamber).unwrap(), g.relative_position(&center, &x).unwrap());
        }
    }
}

#[test]
fn parabolics_are_subgroups_and_contain_radicals() {
    let g = Group::new(3, 3, 32).unwrap();
    let mut r = rng(13);
    for ty in TypeSet::all(2).filter(|t| t.len() < 2) {
        for _ in 0..50 {
            let h = g.random_element(&mut r, -1, 1);
            let sigma = g.act(&h, &g.standard_simplex(ty)).unwrap();
            let hi = h.inverse().unwrap();
            let a = &(&h * &g.random_parabolic(&mut r, ty, 0, 2)) * &hi;
            let b = &(&h * &g.random_parabolic(&mut r, ty, 0, 2)) * &hi;
            assert!(g.parabolic_membership(&a, &sigma).unwrap());
            assert!(g.parabolic_membership(&(&a * &b), &sigma).unwrap());
            let u = g.random_unipotent(&mut r, ty, true, -3, 3);
            assert!(g.parabolic_membership(&u, &g.standard_simplex(ty)).unwrap());
        }
    }
}

#[test]
fn radical_acts_simply_transitively_on_opposites() {
    let g = Group::new(3, 3, 24).unwrap();
    let f = g.field();
    let ty = TypeSet::from_indices(&[0]);
    let sm = g.standard_opposite(ty);
    let grid: Vec<_> = (-2..=2).map(|k| f.int(k)).chain([f.ratio(1, 3), f.int(9)]).collect();
    let mut elems = Vec::new();
    for a in &grid {
        for b in &grid {
            elems.push(g.unipotent_radical_element(ty, true, &[a.clone(), b.clone()]).unwrap());
        }
    }
    let images: Vec<_> = elems.iter().map(|u| g.act(u, &sm).unwrap()).collect();
    for target in &images {
        assert!(g.opposite(&g.standard_simplex(ty), target).unwrap());
        assert_eq!(images.iter().filter(|s| g.same(s, target)).count(), 1);
    }
    let fixed: Vec<_> = images.iter().zip(&elems).filter(|(s, _)| g.same(s, &sm)).collect();
    assert_eq!(fixed.len(), 1);
    assert_eq!(fixed[0].1, &g.identity());
}

#[test]
fn gate_of_rank_one_unipotents_grows_with_valuation() {
    let g = Group::new(3, 2, 32).unwrap();
    let f = g.field();
    let cm = g.standard_opposite(TypeSet::EMPTY);
    let mut last = -1;
    for v in 0..10 {
        let u = g.unipotent_radical_element(TypeSet::EMPTY, true, &[f.pow_p(v) * f.int(2)]).unwrap();
        let r = g.gate(&cm, &g.act(&u, &cm).unwrap()).unwrap();
        assert_eq!(r, v);
        assert!(r > last);
        last = r;
    }
    assert_eq!(g.gate(&cm, &cm).unwrap(), INF);
}

#[test]
fn projection_type_matches_coxeter() {
    let g = Group::new(3, 4, 24).unwrap();
    let mut r = rng(14);
    for _ in 0..300 {
        let i = TypeSet(r.gen_range(0..7));
        let j = TypeSet(r.gen_range(0..8));
        let center = g.boundary_simplex(&g.random_element(&mut r, -1, 1), i).unwrap();
        // mix generic and apartment-related positions
        let x = if r.gen_bool(0.5) {
            g.boundary_simplex(&g.random_element(&mut r, -1, 1), j).unwrap()
        } else {
            let w = &g.weyl().enumerate().unwrap()[r.gen_range(0..24)];
            g.boundary_simplex(&(center.rep() * &g.weyl_matrix(w)), j).unwrap()
        };
        let proj = g.project(&center, &x).unwrap();
        let w1 = g.relative_position(&center, &x).unwrap();
        let want = g.weyl().residue_projection_type(i, j, &w1).unwrap().ty;
        assert_eq!(proj.ty(), want);
        assert!(g.same(&g.face(&proj, i).unwrap(), &center));
    }
}

#[test]
fn projection_satisfies_gate_identity() {
    let g = Group::new(3, 3, 24).unwrap();
    let mut r = rng(15);
    let dist = |a: &IdealSimplex, b: &IdealSimplex| g.relative_position(a, b).unwrap().length();
    for ty in [TypeSet::from_indices(&[0]), TypeSet::from_indices(&[1])] {
        for _ in 0..60 {
            let h = g.random_element(&mut r, -1, 1);
            let center = g.act(&h, &g.standard_simplex(ty)).unwrap();
            let x = g.boundary_simplex(&g.random_element(&mut r, -1, 1), TypeSet::EMPTY).unwrap();
            let proj = g.project(&center, &x).unwrap();
            assert!(proj.ty().is_empty());
            for _ in 0..5 {
                let q = g.random_parabolic(&mut r, ty, 0, 1);
                let c = g.boundary_simplex(&(&h * &q), TypeSet::EMPTY).unwrap();
                assert_eq!(dist(&x, &c), dist(&x, &proj) + dist(&proj, &c));
            }
        }
    }
}

#[test]
fn hermite_form_names_the_vertex() {
    let g = Group::new(3, 3, 32).unwrap();
    let mut r = rng(16);
    for _ in 0..100 {
        let x = g.random_element(&mut r, -2, 2);
        let h1 = g.vertex(&x).unwrap();
        let h2 = g.vertex(&(&x * &g.random_k(&mut r))).unwrap();
        assert!(h1.agreement(&h2) >= 20, "{h1:?} vs {h2:?}");
    }
}

#[test]
fn neighbouring_vertices_shift_gates_by_at_most_one() {
    let g = Group::new(3, 3, 32).unwrap();
    let mut r = rng(17);
    let step = Mat::diag_pow(g.field(), &[1, 0, -1]);
    let cm = g.standard_opposite(TypeSet::EMPTY);
    for _ in 0..100 {
        let u = g.random_unipotent(&mut r, TypeSet::EMPTY, true, 0, 6);
        let x = g.act(&u, &cm).unwrap();
        let here = g.gate(&cm, &x).unwrap();
        let there = g.gate_at(&step, &cm, &x).unwrap();
        if here != INF && there != INF {
            assert!((here - there).abs() <= 2, "{here} vs {there}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gate_is_symmetric_and_k_invariant(seed in any::<u64>()) {
        let g = Group::new(3, 3, 32).unwrap();
        let mut r = rng(seed);
        let cm = g.standard_opposite(TypeSet::EMPTY);
        let a = g.act(&g.random_unipotent(&mut r, TypeSet::EMPTY, true, 0, 5), &cm).unwrap();
        let b = g.act(&g.random_unipotent(&mut r, TypeSet::EMPTY, true, 0, 5), &cm).unwrap();
        let r0 = g.gate(&a, &b).unwrap();
        prop_assert_eq!(r0, g.gate(&b, &a).unwrap());
        let k = g.random_k(&mut r);
        prop_assert_eq!(r0, g.gate(&g.act(&k, &a).unwrap(), &g.act(&k, &b).unwrap()).unwrap());
    }

    #[test]
    fn faces_converge_at_least_as_fast(seed in any::<u64>()) {
        let g = Group::new(3, 3, 32).unwrap();
        let mut r = rng(seed);
        let x = g.boundary_simplex(&g.random_element(&mut r, -1, 1), TypeSet::EMPTY).unwrap();
        let u = g.random_unipotent(&mut r, TypeSet::EMPTY, false, 1, 6);
        let y = g.act(&(&(x.rep() * &u) * &x.rep().inverse().unwrap()), &x).unwrap();
        let whole = g.gate(&x, &y).unwrap();
        for i in 0..2 {
            let ty = TypeSet::from_indices(&[i]);
            prop_assert!(g.gate(&g.face(&x, ty).unwrap(), &g.face(&y, ty).unwrap()).unwrap() >= whole);
        }
    }
}
