//! The built-in verification suite: closed-formula reproduction on
//! random models, the geometric sanity oracles, twist/parity behavior in
//! both sign conventions, the splitting-recipe grid, cover and curve
//! worked values, and the bidegree truth table. Deterministic from the
//! seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fanoforge_core::bundles::{locally_free_check, whitney_chern};
use fanoforge_core::chow::{
    anticanonical_cube, canonical_class, closed_degree_formula, integrate, multiply,
    reduced_h_square, BundleData, ChowClass, ConventionMode, HPoly,
};
use fanoforge_core::construction::{
    choose_splitting, cyclic_cover, degree_for_n, family_distinctness, fano_bidegree_check,
    p_cover, unbounded_search,
};
use fanoforge_core::curves::{kernel_dim_lower_bound, raynaud_canonical, tate_genus};
use fanoforge_core::lattice::{DivisorClass, SurfaceModel};
use fanoforge_core::rat::{rat_i, Rat};
use fanoforge_core::sampling;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Paper,
    Geom,
    Any,
}

impl CheckMode {
    pub fn label(self) -> &'static str {
        match self {
            CheckMode::Paper => "paper",
            CheckMode::Geom => "geom",
            CheckMode::Any => "both",
        }
    }
}

pub struct CheckResult {
    pub name: &'static str,
    pub mode: CheckMode,
    pub pass: bool,
    pub detail: String,
}

fn check(
    out: &mut Vec<CheckResult>,
    name: &'static str,
    mode: CheckMode,
    body: impl FnOnce() -> Result<(), String>,
) {
    let (pass, detail) = match body() {
        Ok(()) => (true, String::new()),
        Err(d) => (false, d),
    };
    out.push(CheckResult {
        name,
        mode,
        pass,
        detail,
    });
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(got: T, want: T, what: &str) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: expected {want:?}, got {got:?}"))
    }
}

/// Runs all checks matching `filter` (Paper/Geom restrict to that
/// convention plus the mode-independent checks).
pub fn run_suite(filter: CheckMode, seed: u64, cases: usize) -> Vec<CheckResult> {
    let mut all = Vec::new();
    suite(&mut all, seed, cases);
    all.into_iter()
        .filter(|c| match filter {
            CheckMode::Any => true,
            f => c.mode == f || c.mode == CheckMode::Any,
        })
        .collect()
}

fn suite(out: &mut Vec<CheckResult>, seed: u64, cases: usize) {
    check(out, "hodge index on bundled presets", CheckMode::Any, || {
        for m in [
            SurfaceModel::p2(),
            SurfaceModel::ample_k(9).map_err(|e| e.to_string())?,
            SurfaceModel::raynaud(9, 3).map_err(|e| e.to_string())?,
        ] {
            if !m.hodge_index_check() {
                return Err(format!("preset {} fails the signature check", m.name()));
            }
        }
        Ok(())
    });

    check(
        out,
        "closed-degree formula reproduction (paper-formal)",
        CheckMode::Paper,
        || formula_reproduction(ConventionMode::PaperFormal, seed, cases),
    );

    check(
        out,
        "closed-degree formula reproduction (geometric)",
        CheckMode::Geom,
        || formula_reproduction(ConventionMode::Geometric, seed ^ 0x9e3779b9, cases),
    );

    check(out, "oracle: P2 x P1 anticanonical degree 54", CheckMode::Geom, || {
        let m = SurfaceModel::p2();
        let e = BundleData::new(DivisorClass::zero(1), Rat::from_integer(0.into()));
        let got = anticanonical_cube(&m, &e, ConventionMode::Geometric).map_err(|e| e.to_string())?;
        expect_eq(got, rat_i(54), "deg(-K)^3 of P(O+O) over P2")
    });

    check(
        out,
        "oracle: blow-up of P3 anticanonical degree 56",
        CheckMode::Geom,
        || {
            let m = SurfaceModel::p2();
            let e = BundleData::new(DivisorClass::from_ints(&[1]), Rat::from_integer(0.into()));
            let got =
                anticanonical_cube(&m, &e, ConventionMode::Geometric).map_err(|e| e.to_string())?;
            expect_eq(got, rat_i(56), "deg(-K)^3 of P(O+O(1)) over P2")
        },
    );

    check(out, "twist invariance (geometric)", CheckMode::Geom, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
        for i in 0..100 {
            let m = sampling::random_model(&mut rng);
            let e = sampling::random_bundle(&mut rng, &m);
            let t = sampling::random_divisor(&mut rng, m.rank());
            let twisted = e.twist(&m, &t).map_err(|e| e.to_string())?;
            let a = anticanonical_cube(&m, &e, ConventionMode::Geometric).map_err(|e| e.to_string())?;
            let b = anticanonical_cube(&m, &twisted, ConventionMode::Geometric)
                .map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!("twist {i}: {a} != {b}"));
            }
        }
        Ok(())
    });

    check(out, "twist witness discrepancy (paper-formal)", CheckMode::Paper, || {
        let m = SurfaceModel::p2();
        let e = BundleData::new(DivisorClass::from_ints(&[1]), Rat::from_integer(0.into()));
        let twisted = e
            .twist(&m, &DivisorClass::from_ints(&[1]))
            .map_err(|e| e.to_string())?;
        let before =
            anticanonical_cube(&m, &e, ConventionMode::PaperFormal).map_err(|e| e.to_string())?;
        let after = anticanonical_cube(&m, &twisted, ConventionMode::PaperFormal)
            .map_err(|e| e.to_string())?;
        expect_eq(after - before, rat_i(-80), "paper-formal twist shift on the witness")
    });

    check(out, "parity asymmetry witness (paper-formal)", CheckMode::Paper, || {
        let m = SurfaceModel::p2();
        let e = BundleData::new(DivisorClass::from_ints(&[1]), Rat::from_integer(0.into()));
        let f = BundleData::new(e.c1().neg(), e.c2().clone());
        let plus =
            anticanonical_cube(&m, &e, ConventionMode::PaperFormal).map_err(|e| e.to_string())?;
        let minus =
            anticanonical_cube(&m, &f, ConventionMode::PaperFormal).map_err(|e| e.to_string())?;
        expect_eq(plus.clone(), rat_i(-8), "witness degree")?;
        expect_eq(minus.clone(), rat_i(136), "flipped witness degree")?;
        if plus == minus {
            return Err("paper-formal degree unexpectedly even in c1".into());
        }
        Ok(())
    });

    check(out, "hirsch rewrite consistency (both modes)", CheckMode::Any, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7777);
        for _ in 0..50 {
            let m = sampling::random_model(&mut rng);
            let e = sampling::random_bundle(&mut rng, &m);
            let h = ChowClass::h(m.rank());
            for mode in [ConventionMode::Geometric, ConventionMode::PaperFormal] {
                let engine = multiply(&m, &e, &h, &h, mode).map_err(|e| e.to_string())?;
                let direct = reduced_h_square(&m, &e, mode);
                if engine != direct {
                    return Err(format!("H*H != reduced(H^2) in {mode:?}"));
                }
                let diff = engine.sub(&direct);
                let prod = HPoly::from(&h)
                    .mul(&HPoly::from(&diff), &m)
                    .map_err(|e| e.to_string())?;
                let deg = integrate(&m, &e, &prod, mode).map_err(|e| e.to_string())?;
                if !deg.eq(&rat_i(0)) {
                    return Err(format!("H*(H^2 - reduced) integrates to {deg} in {mode:?}"));
                }
            }
        }
        Ok(())
    });

    check(out, "splitting recipe grid (n <= 10, d <= 200)", CheckMode::Any, || {
        let m = SurfaceModel::ample_k(9).map_err(|e| e.to_string())?;
        let mut feasible = 0u32;
        for n in 1..=10u64 {
            for d in 1..=200u64 {
                match choose_splitting(&m, n, d) {
                    Ok(ext) => {
                        feasible += 1;
                        let e = whitney_chern(&m, &ext).map_err(|e| e.to_string())?;
                        let want = m.canonical().scale(&rat_i(-(n as i64)));
                        if e.c1() != &want {
                            return Err(format!("c1 != -{n}K at (n,d)=({n},{d})"));
                        }
                        if !e.c2().eq(&rat_i(0)) {
                            return Err(format!("c2 != 0 at (n,d)=({n},{d})"));
                        }
                        if ext.len_z() != d {
                            return Err(format!("l(Z) != d at (n,d)=({n},{d})"));
                        }
                        if !locally_free_check(&m, &ext) {
                            return Err(format!("not locally free at (n,d)=({n},{d})"));
                        }
                    }
                    Err(fanoforge_core::EngineError::Infeasible(_)) => {}
                    Err(e) => return Err(e.to_string()),
                }
            }
        }
        if feasible == 0 {
            return Err("no feasible (n, d) found in the grid".into());
        }
        Ok(())
    });

    check(
        out,
        "anticanonical class structure -K_W = 2H + pi*(n-1)K_S",
        CheckMode::Any,
        || {
            let m = SurfaceModel::ample_k(9).map_err(|e| e.to_string())?;
            for n in 1..=10i64 {
                let e = BundleData::new(m.canonical().scale(&rat_i(-n)), Rat::from_integer(0.into()));
                let anti = canonical_class(&m, &e).map_err(|e| e.to_string())?.neg();
                expect_eq(anti.h1().clone(), rat_i(2), "H coefficient")?;
                expect_eq(
                    anti.a1().clone(),
                    m.canonical().scale(&rat_i(n - 1)),
                    "base divisor part",
                )?;
            }
            Ok(())
        },
    );

    check(out, "worked degrees on K_S^2 = 9 (paper-formal)", CheckMode::Paper, || {
        let ks2 = rat_i(9);
        expect_eq(degree_for_n(&ks2, 3, ConventionMode::PaperFormal), rat_i(216), "n=3")?;
        expect_eq(degree_for_n(&ks2, 4, ConventionMode::PaperFormal), rat_i(630), "n=4")?;
        expect_eq(degree_for_n(&ks2, 5, ConventionMode::PaperFormal), rat_i(1224), "n=5")
    });

    check(out, "unbounded search worked value and monotonicity", CheckMode::Any, || {
        let m = SurfaceModel::ample_k(9).map_err(|e| e.to_string())?;
        let got = unbounded_search(&m, &rat_i(1000), ConventionMode::PaperFormal)
            .map_err(|e| e.to_string())?;
        expect_eq(got, (5, rat_i(1224)), "N = 1000")?;
        for mode in [ConventionMode::Geometric, ConventionMode::PaperFormal] {
            let mut last_n = 0u64;
            for target in [100i64, 1_000, 10_000, 1_000_000] {
                let (n, deg) =
                    unbounded_search(&m, &rat_i(target), mode).map_err(|e| e.to_string())?;
                if deg < rat_i(target) {
                    return Err(format!("degree {deg} below target {target}"));
                }
                if n > 3 && degree_for_n(&m.ks2(), n - 1, mode) >= rat_i(target) {
                    return Err(format!("n = {n} not minimal for target {target}"));
                }
                if n < last_n {
                    return Err("search not monotone in the target".into());
                }
                last_n = n;
            }
        }
        Ok(())
    });

    check(out, "family bookkeeping and distinctness", CheckMode::Any, || {
        let m = SurfaceModel::ample_k(9).map_err(|e| e.to_string())?;
        for d in [1u64, 10, 22, 50] {
            if let Ok(ext) = choose_splitting(&m, 3, d) {
                let dim = fanoforge_core::bundles::ext_space_dim(&ext).map_err(|e| e.to_string())?;
                expect_eq(dim, d - 1, "extension space dim")?;
            }
        }
        if !family_distinctness(10, 22) || family_distinctness(10, 10) {
            return Err("distinctness predicate wrong on (10, 22) / (10, 10)".into());
        }
        Ok(())
    });

    check(out, "p-cover worked degrees 504 (geom) / 1800 (paper)", CheckMode::Any, || {
        let m = SurfaceModel::ample_k(9).map_err(|e| e.to_string())?;
        let e = BundleData::new(m.canonical().scale(&rat_i(-3)), Rat::from_integer(0.into()));
        let d = DivisorClass::from_ints(&[1]);
        let geom = p_cover(&m, &e, 3, &d, ConventionMode::Geometric).map_err(|e| e.to_string())?;
        expect_eq(geom.degree, rat_i(504), "geometric cover degree")?;
        let paper = p_cover(&m, &e, 3, &d, ConventionMode::PaperFormal).map_err(|e| e.to_string())?;
        expect_eq(paper.degree, rat_i(1800), "paper-formal cover degree")
    });

    check(out, "cyclic cover worked values", CheckMode::Any, || {
        let r = cyclic_cover(&rat_i(504), 3, None).map_err(|e| e.to_string())?;
        expect_eq(r.degree, rat_i(1512), "m = 3 degree")?;
        if !r.k_nef {
            return Err("K_(X_3) not flagged nef".into());
        }
        let r = cyclic_cover(&rat_i(504), 2, None).map_err(|e| e.to_string())?;
        expect_eq(r.degree, rat_i(0), "m = 2 degree")
    });

    check(out, "curve suite worked values", CheckMode::Any, || {
        expect_eq(tate_genus(3).map_err(|e| e.to_string())?, 1, "tate p=3")?;
        expect_eq(tate_genus(5).map_err(|e| e.to_string())?, 2, "tate p=5")?;
        expect_eq(tate_genus(7).map_err(|e| e.to_string())?, 3, "tate p=7")?;
        let (dz, g) = raynaud_canonical(3, 2).map_err(|e| e.to_string())?;
        expect_eq(dz.mult, 18, "(dz) coefficient")?;
        expect_eq(g, 10, "raynaud genus")?;
        let b = kernel_dim_lower_bound(3, 2).map_err(|e| e.to_string())?;
        expect_eq(b.h1, 12, "ambient h^1")?;
        if !b.meets_paper_bound {
            return Err("h^1 >= 2 bound not met".into());
        }
        Ok(())
    });

    check(out, "fano bidegree truth table", CheckMode::Any, || {
        for p in [2u64, 3, 5, 7] {
            for n in 1..=8u64 {
                let got = fano_bidegree_check(p, n).map_err(|e| e.to_string())?;
                if got != (p <= n) {
                    return Err(format!("(p, n) = ({p}, {n}): got {got}"));
                }
            }
        }
        Ok(())
    });
}

fn formula_reproduction(mode: ConventionMode, seed: u64, cases: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..cases {
        let m = sampling::random_model(&mut rng);
        let e = sampling::random_bundle(&mut rng, &m);
        let ks2 = m.ks2();
        let c1sq = m.intersect(e.c1(), e.c1()).map_err(|e| e.to_string())?;
        let ksc1 = m
            .intersect(m.canonical(), e.c1())
            .map_err(|e| e.to_string())?;
        let engine = anticanonical_cube(&m, &e, mode).map_err(|e| e.to_string())?;
        let formula = closed_degree_formula(&ks2, &c1sq, &ksc1, e.c2(), mode);
        if engine != formula {
            return Err(format!(
                "case {i}: engine {engine} != formula {formula} on {}",
                m.name()
            ));
        }
    }
    Ok(())
}
