//! Property tests for the engine invariants: exact bilinearity,
//! quotient-ring laws for the graded product, engine/closed-formula
//! agreement, twist behavior per convention mode, the splitting recipe,
//! and curve-side dualities.

use proptest::prelude::*;

use fanoforge_core::bundles::{
    ext_space_dim, locally_free_check, recipe_length, whitney_chern, ExtensionData,
};
use fanoforge_core::chow::{
    anticanonical_cube, closed_degree_formula, integrate, multiply, reduced_h_square, BundleData,
    ChowClass, ConventionMode, HPoly,
};
use fanoforge_core::construction::{choose_splitting, cyclic_cover, unbounded_search};
use fanoforge_core::curves::riemann_roch;
use fanoforge_core::lattice::{DivisorClass, SurfaceModel};
use fanoforge_core::rat::{rat, rat_i, Rat};

const MODES: [ConventionMode; 2] = [ConventionMode::Geometric, ConventionMode::PaperFormal];

fn rank1_model() -> impl Strategy<Value = SurfaceModel> {
    (1i64..=9, -5i64..=5).prop_map(|(g, k)| {
        SurfaceModel::new("r1", vec![vec![g]], vec![k], vec![vec![1]], 0).unwrap()
    })
}

fn rank2_model() -> impl Strategy<Value = SurfaceModel> {
    (
        1i64..=4,
        1i64..=4,
        -2i64..=2,
        -2i64..=2,
        -4i64..=4,
        -4i64..=4,
    )
        .prop_map(|(u, w, s, t, k1, k2)| {
            let (s11, s12, s21, s22) = (1i64, s, t, 1 + s * t);
            let g11 = u * s11 * s11 - w * s21 * s21;
            let g12 = u * s11 * s12 - w * s21 * s22;
            let g22 = u * s12 * s12 - w * s22 * s22;
            SurfaceModel::new(
                "r2",
                vec![vec![g11, g12], vec![g12, g22]],
                vec![k1, k2],
                vec![vec![s22, -s21]],
                0,
            )
            .unwrap()
        })
}

fn any_model() -> impl Strategy<Value = SurfaceModel> {
    prop_oneof![rank1_model(), rank2_model()]
}

fn rat_coeff() -> impl Strategy<Value = Rat> {
    (-12i64..=12, prop_oneof![Just(1i64), Just(2), Just(3)]).prop_map(|(n, d)| rat(n, d))
}

fn random_class(rng: &mut rand_chacha::ChaCha8Rng, rank: usize) -> ChowClass {
    use fanoforge_core::sampling::{random_divisor, random_rat};
    ChowClass::from_parts(
        random_rat(rng),
        random_divisor(rng, rank),
        random_rat(rng),
        random_rat(rng),
        random_divisor(rng, rank),
        random_rat(rng),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn intersect_symmetric_bilinear(
        m in any_model(),
        seed_x in prop::collection::vec(rat_coeff(), 2),
        seed_y in prop::collection::vec(rat_coeff(), 2),
        seed_z in prop::collection::vec(rat_coeff(), 2),
        a in rat_coeff(),
        b in rat_coeff(),
    ) {
        let rank = m.rank();
        let x = DivisorClass::new(seed_x[..rank].to_vec());
        let y = DivisorClass::new(seed_y[..rank].to_vec());
        let z = DivisorClass::new(seed_z[..rank].to_vec());
        prop_assert_eq!(m.intersect(&x, &y).unwrap(), m.intersect(&y, &x).unwrap());
        let lhs = m.intersect(&x.scale(&a).add(&y.scale(&b)), &z).unwrap();
        let rhs = a * m.intersect(&x, &z).unwrap() + b * m.intersect(&y, &z).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn h0_vanishing_monotone(
        g in 1i64..=9,
        k in -5i64..=5,
        x0 in -8i64..=8,
        t in 0i64..=10,
    ) {
        let m = SurfaceModel::new("r1", vec![vec![g]], vec![k], vec![vec![1]], 0).unwrap();
        let x = DivisorClass::from_ints(&[x0]);
        if m.h0_vanishes(&x) {
            let shifted = x.add(&m.ample_gens()[0].scale(&rat_i(t)));
            prop_assert!(m.h0_vanishes(&shifted));
        }
    }

    #[test]
    fn engine_matches_closed_formula(m in any_model(), seed in 0u64..1u64.wrapping_neg()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let e = fanoforge_core::sampling::random_bundle(&mut rng, &m);
        let ks2 = m.ks2();
        let c1sq = m.intersect(e.c1(), e.c1()).unwrap();
        let ksc1 = m.intersect(m.canonical(), e.c1()).unwrap();
        for mode in MODES {
            let engine = anticanonical_cube(&m, &e, mode).unwrap();
            let formula = closed_degree_formula(&ks2, &c1sq, &ksc1, e.c2(), mode);
            prop_assert_eq!(engine, formula, "mode {:?}", mode);
        }
    }

    #[test]
    fn twist_invariance_geometric_only(m in any_model(), seed in 0u64..1u64.wrapping_neg()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let e = fanoforge_core::sampling::random_bundle(&mut rng, &m);
        let twist = fanoforge_core::sampling::random_divisor(&mut rng, m.rank());
        let twisted = e.twist(&m, &twist).unwrap();
        let before = anticanonical_cube(&m, &e, ConventionMode::Geometric).unwrap();
        let after = anticanonical_cube(&m, &twisted, ConventionMode::Geometric).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn parity_in_c1_geometric(m in any_model(), seed in 0u64..1u64.wrapping_neg()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let e = fanoforge_core::sampling::random_bundle(&mut rng, &m);
        let flipped = BundleData::new(e.c1().neg(), e.c2().clone());
        let a = anticanonical_cube(&m, &e, ConventionMode::Geometric).unwrap();
        let b = anticanonical_cube(&m, &flipped, ConventionMode::Geometric).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn hirsch_rewrite_consistency(m in any_model(), seed in 0u64..1u64.wrapping_neg()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let e = fanoforge_core::sampling::random_bundle(&mut rng, &m);
        let h = ChowClass::h(m.rank());
        for mode in MODES {
            let engine = multiply(&m, &e, &h, &h, mode).unwrap();
            let direct = reduced_h_square(&m, &e, mode);
            prop_assert_eq!(engine.clone(), direct.clone());
            let diff = engine.sub(&direct);
            let prod = HPoly::from(&h).mul(&HPoly::from(&diff), &m).unwrap();
            prop_assert_eq!(integrate(&m, &e, &prod, mode).unwrap(), rat_i(0));
        }
    }

    #[test]
    fn splitting_recipe_produces_prescribed_cherns(
        g in 1i64..=6,
        kmul in 1i64..=4,
        n in 1u64..=8,
        k in 1u64..=6,
    ) {
        // rank-1 model with ample K = kmul * A
        let m = SurfaceModel::new("r1", vec![vec![g]], vec![kmul], vec![vec![1]], 0).unwrap();
        let a = m.ample_gens()[0].clone();
        let l = a.scale(&rat_i(k as i64));
        let d = recipe_length(&m, &l, n).unwrap();
        prop_assert!(d > rat_i(0), "L ample and K ample pair positively");
        let d_int = u64::try_from(d.to_integer()).unwrap();
        let ext = choose_splitting(&m, n, d_int).unwrap();
        let e = whitney_chern(&m, &ext).unwrap();
        prop_assert_eq!(e.c1(), &m.canonical().scale(&rat_i(-(n as i64))));
        prop_assert!(e.c2() == &rat_i(0));
        prop_assert_eq!(ext.len_z(), d_int);
        prop_assert!(locally_free_check(&m, &ext));
        prop_assert_eq!(ext_space_dim(&ext).unwrap(), d_int - 1);
    }

    #[test]
    fn rank2_splitting_recipe(
        u in 1i64..=3,
        w in 1i64..=3,
        s in -1i64..=1,
        t in -1i64..=1,
        c in 1i64..=3,
        n in 1u64..=5,
        k in 1u64..=4,
    ) {
        // rank-2 model with K = c * (ample generator)
        let (s11, s12, s21, s22) = (1i64, s, t, 1 + s * t);
        let g11 = u * s11 * s11 - w * s21 * s21;
        let g12 = u * s11 * s12 - w * s21 * s22;
        let g22 = u * s12 * s12 - w * s22 * s22;
        let amp = [s22, -s21];
        let kvec = [c * amp[0], c * amp[1]];
        let m = SurfaceModel::new(
            "r2",
            vec![vec![g11, g12], vec![g12, g22]],
            kvec.to_vec(),
            vec![amp.to_vec()],
            0,
        ).unwrap();
        let l = m.ample_gens()[0].scale(&rat_i(k as i64));
        let d = recipe_length(&m, &l, n).unwrap();
        prop_assert!(d > rat_i(0));
        let d_int = u64::try_from(d.to_integer()).unwrap();
        let ext = choose_splitting(&m, n, d_int).unwrap();
        let e = whitney_chern(&m, &ext).unwrap();
        prop_assert_eq!(e.c1(), &m.canonical().scale(&rat_i(-(n as i64))));
        prop_assert!(e.c2() == &rat_i(0));
        prop_assert!(locally_free_check(&m, &ext));
    }

    #[test]
    fn search_monotone_in_target(n1 in 1i64..=100_000, n2 in 1i64..=100_000) {
        let m = SurfaceModel::ample_k(9).unwrap();
        let (lo, hi) = if n1 <= n2 { (n1, n2) } else { (n2, n1) };
        for mode in MODES {
            let (a, _) = unbounded_search(&m, &rat_i(lo), mode).unwrap();
            let (b, deg_b) = unbounded_search(&m, &rat_i(hi), mode).unwrap();
            prop_assert!(a <= b);
            prop_assert!(deg_b >= rat_i(hi));
        }
    }

    #[test]
    fn cyclic_cover_nef_for_positive_degrees(x in 1i64..=100_000, m in 2u64..=40) {
        let r = cyclic_cover(&rat_i(x), m, None).unwrap();
        prop_assert!(r.k_nef);
        prop_assert_eq!(r.degree == rat_i(0), m == 2);
    }

    #[test]
    fn riemann_roch_identity_and_duality(g in 0i64..=50, deg in -200i64..=200) {
        if let Ok((h0, h1)) = riemann_roch(g, deg) {
            prop_assert_eq!(h0 - h1, deg - g + 1);
            prop_assert!(h0 >= 0 && h1 >= 0);
            if let Ok((h0_dual, _)) = riemann_roch(g, 2 * g - 2 - deg) {
                prop_assert_eq!(h1, h0_dual);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn multiply_commutative_associative(
        m in any_model(),
        seed in 0u64..1u64.wrapping_neg(),
    ) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let e = fanoforge_core::sampling::random_bundle(&mut rng, &m);
        let rank = m.rank();
        let x = random_class(&mut rng, rank);
        let y = random_class(&mut rng, rank);
        let z = random_class(&mut rng, rank);
        for mode in MODES {
            let xy = multiply(&m, &e, &x, &y, mode).unwrap();
            let yx = multiply(&m, &e, &y, &x, mode).unwrap();
            prop_assert_eq!(&xy, &yx);
            let xy_z = multiply(&m, &e, &xy, &z, mode).unwrap();
            let yz = multiply(&m, &e, &y, &z, mode).unwrap();
            let x_yz = multiply(&m, &e, &x, &yz, mode).unwrap();
            prop_assert_eq!(xy_z, x_yz, "mode {:?}", mode);
        }
    }

    #[test]
    fn normal_form_idempotent(m in any_model(), seed in 0u64..1u64.wrapping_neg()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let e = fanoforge_core::sampling::random_bundle(&mut rng, &m);
        let rank = m.rank();
        let mut c = ChowClass::from_divisor(fanoforge_core::sampling::random_divisor(&mut rng, rank));
        c = c.add(&ChowClass::h(rank).scale(&rat(3, 2)));
        c = c.add(&ChowClass::fiber_point(rank).scale(&rat_i(-2)));
        for mode in MODES {
            let once = c.to_formal().reduce(&m, &e, mode).unwrap();
            let twice = once.to_formal().reduce(&m, &e, mode).unwrap();
            prop_assert_eq!(&once, &twice);
            prop_assert_eq!(&once, &c);
        }
    }
}

#[test]
fn paper_twist_witness_discrepancy() {
    // P^2, E with c1 = h, c2 = 0, twisted by m = h: the paper-formal
    // degree moves by exactly -80 while the geometric one is unchanged.
    let m = SurfaceModel::p2();
    let e = BundleData::new(DivisorClass::from_ints(&[1]), rat_i(0));
    let twist = DivisorClass::from_ints(&[1]);
    let twisted = e.twist(&m, &twist).unwrap();

    let before = anticanonical_cube(&m, &e, ConventionMode::PaperFormal).unwrap();
    let after = anticanonical_cube(&m, &twisted, ConventionMode::PaperFormal).unwrap();
    assert_eq!(before, rat_i(-8));
    assert_eq!(after, rat_i(-88));
    assert_eq!(after - before, rat_i(-80));

    let g_before = anticanonical_cube(&m, &e, ConventionMode::Geometric).unwrap();
    let g_after = anticanonical_cube(&m, &twisted, ConventionMode::Geometric).unwrap();
    assert_eq!(g_before, g_after);
}

#[test]
fn paper_parity_witness() {
    // K.c1 != 0 breaks the c1 -> -c1 symmetry in paper-formal mode only
    let m = SurfaceModel::p2();
    let e = BundleData::new(DivisorClass::from_ints(&[1]), rat_i(0));
    let flipped = BundleData::new(e.c1().neg(), e.c2().clone());
    let plus = anticanonical_cube(&m, &e, ConventionMode::PaperFormal).unwrap();
    let minus = anticanonical_cube(&m, &flipped, ConventionMode::PaperFormal).unwrap();
    assert_eq!(plus, rat_i(-8));
    assert_eq!(minus, rat_i(136));
    assert_ne!(plus, minus);
}

#[test]
fn whitney_symmetric_random() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let m = fanoforge_core::sampling::random_model(&mut rng);
        let l = fanoforge_core::sampling::random_divisor(&mut rng, m.rank());
        let lp = fanoforge_core::sampling::random_divisor(&mut rng, m.rank());
        let a = whitney_chern(&m, &ExtensionData::new(l.clone(), lp.clone(), 5).unwrap()).unwrap();
        let b = whitney_chern(&m, &ExtensionData::new(lp, l, 5).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
