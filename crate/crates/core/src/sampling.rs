//! Deterministic random generators for models, bundles and expressions.
//! Used by the verification suite, the acceptance tests and the
//! benchmarks; everything is driven by a caller-supplied RNG so runs
//! are reproducible from a seed.

use rand::Rng;

use crate::chow::BundleData;
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::rat::{rat, rat_i, Rat};

/// A random surface model of rank 1 or 2 with a valid (1, rank-1)
/// intersection form and one ample generator.
pub fn random_model(rng: &mut impl Rng) -> SurfaceModel {
    if rng.gen_bool(0.5) {
        random_model_rank1(rng)
    } else {
        random_model_rank2(rng)
    }
}

pub fn random_model_rank1(rng: &mut impl Rng) -> SurfaceModel {
    let g: i64 = rng.gen_range(1..=9);
    let k: i64 = rng.gen_range(-5..=5);
    SurfaceModel::new("rand-r1", vec![vec![g]], vec![k], vec![vec![1]], 0)
        .expect("rank-1 form with positive entry is valid")
}

/// Rank-2 model built as S^T diag(u, -w) S for a unimodular S, so the
/// signature is (1, 1) by construction and S^{-1} e1 is a vector of
/// positive square.
pub fn random_model_rank2(rng: &mut impl Rng) -> SurfaceModel {
    let u: i64 = rng.gen_range(1..=4);
    let w: i64 = rng.gen_range(1..=4);
    let s: i64 = rng.gen_range(-2..=2);
    let t: i64 = rng.gen_range(-2..=2);
    // S = [[1, s], [t, 1 + s*t]], det S = 1
    let s11 = 1i64;
    let s12 = s;
    let s21 = t;
    let s22 = 1 + s * t;
    // gram = S^T D S with D = diag(u, -w)
    let g11 = u * s11 * s11 - w * s21 * s21;
    let g12 = u * s11 * s12 - w * s21 * s22;
    let g22 = u * s12 * s12 - w * s22 * s22;
    // ample generator: S^{-1} e1 = (s22, -s21)
    let a = vec![s22, -s21];
    let k1: i64 = rng.gen_range(-4..=4);
    let k2: i64 = rng.gen_range(-4..=4);
    SurfaceModel::new(
        "rand-r2",
        vec![vec![g11, g12], vec![g12, g22]],
        vec![k1, k2],
        vec![a],
        0,
    )
    .expect("congruent image of diag(u, -w) is valid")
}

/// Random small rational, occasionally with denominator 2 or 3.
pub fn random_rat(rng: &mut impl Rng) -> Rat {
    match rng.gen_range(0..5) {
        0 => rat(rng.gen_range(-12..=12), 2),
        1 => rat(rng.gen_range(-12..=12), 3),
        _ => rat_i(rng.gen_range(-6..=6)),
    }
}

/// Random divisor class with small integer or half-integer entries.
pub fn random_divisor(rng: &mut impl Rng, rank: usize) -> DivisorClass {
    let coeffs: Vec<Rat> = (0..rank)
        .map(|_| {
            if rng.gen_bool(0.2) {
                rat(rng.gen_range(-12..=12), 2)
            } else {
                rat_i(rng.gen_range(-6..=6))
            }
        })
        .collect();
    DivisorClass::new(coeffs)
}

/// Random rank-2 Chern data over the model.
pub fn random_bundle(rng: &mut impl Rng, model: &SurfaceModel) -> BundleData {
    let c1 = random_divisor(rng, model.rank());
    let c2 = if rng.gen_bool(0.2) {
        rat(rng.gen_range(-20..=20), 2)
    } else {
        rat_i(rng.gen_range(-10..=10))
    };
    BundleData::new(c1, c2)
}

/// Random source text in the expression grammar, built over the model's
/// names plus H, pt and K.
pub fn random_expr_string(rng: &mut impl Rng, model: &SurfaceModel, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.3) {
        return random_atom(rng, model);
    }
    match rng.gen_range(0..5) {
        0 => format!(
            "{} + {}",
            random_expr_string(rng, model, depth - 1),
            random_expr_string(rng, model, depth - 1)
        ),
        1 => format!(
            "{} - {}",
            random_expr_string(rng, model, depth - 1),
            random_expr_string(rng, model, depth - 1)
        ),
        2 => format!(
            "{}*{}",
            random_factor(rng, model, depth - 1),
            random_factor(rng, model, depth - 1)
        ),
        3 => format!("{}^{}", random_factor(rng, model, depth - 1), rng.gen_range(0..=3)),
        _ => format!("({})", random_expr_string(rng, model, depth - 1)),
    }
}

fn random_factor(rng: &mut impl Rng, model: &SurfaceModel, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.5) {
        random_atom(rng, model)
    } else {
        format!("({})", random_expr_string(rng, model, depth - 1))
    }
}

fn random_atom(rng: &mut impl Rng, model: &SurfaceModel) -> String {
    match rng.gen_range(0..6) {
        0 => "H".to_string(),
        1 => "pt".to_string(),
        2 => "K".to_string(),
        3 => {
            let i = rng.gen_range(0..model.rank());
            model.basis_names()[i].clone()
        }
        4 => format!("{}", rng.gen_range(0..=9)),
        _ => format!("{}/{}", rng.gen_range(1..=9), rng.gen_range(2..=5)),
    }
}
