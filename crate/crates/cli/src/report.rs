//! Report assembly for the construct/table pipelines. Every number is an
//! exact rational string; nothing here ever formats a float.

use serde_json::{json, Value};

use fanoforge_core::chow::{BundleData, ConventionMode};
use fanoforge_core::construction::{
    cyclic_cover, p_cover, ConstructionInput, CoverReport, CyclicReport, ThreefoldReport,
};
use fanoforge_core::lattice::DivisorClass;
use fanoforge_core::rat::{gcd, rat_str};
use fanoforge_core::{Result, SurfaceModel};

pub struct ConstructOutcome {
    pub report: ThreefoldReport,
    pub cover_paper: CoverReport,
    pub cover_geom: CoverReport,
    pub cyclic_paper: CyclicReport,
    pub cyclic_geom: CyclicReport,
    pub m: u64,
}

/// Smallest m >= 3 coprime to p; the default ramification order for the
/// cyclic cover stage.
pub fn default_cyclic_m(p: u64) -> u64 {
    let mut m = 3;
    while gcd(m, p) != 1 {
        m += 1;
    }
    m
}

pub fn run_construction(input: &ConstructionInput, m: Option<u64>) -> Result<ConstructOutcome> {
    let report = fanoforge_core::construction::build_threefold(input)?;
    let divisor = input.cover_divisor();
    let cover_paper = p_cover(
        &input.model,
        &report.chern,
        input.p,
        &divisor,
        ConventionMode::PaperFormal,
    )?;
    let cover_geom = p_cover(
        &input.model,
        &report.chern,
        input.p,
        &divisor,
        ConventionMode::Geometric,
    )?;
    let m = m.unwrap_or_else(|| default_cyclic_m(input.p));
    let cyclic_paper = cyclic_cover(&cover_paper.degree, m, Some(input.p))?;
    let cyclic_geom = cyclic_cover(&cover_geom.degree, m, Some(input.p))?;
    Ok(ConstructOutcome {
        report,
        cover_paper,
        cover_geom,
        cyclic_paper,
        cyclic_geom,
        m,
    })
}

fn divisor_strings(d: &DivisorClass) -> Vec<String> {
    d.coeffs().iter().map(rat_str).collect()
}

pub fn construct_json(
    input: &ConstructionInput,
    outcome: &ConstructOutcome,
    surface_arg: &str,
) -> Value {
    let model: &SurfaceModel = &input.model;
    let r = &outcome.report;
    let divisor = input.cover_divisor();
    let certificates = certificates_json(outcome);
    json!({
        "input": {
            "surface": surface_arg,
            "model": model.name(),
            "ks2": rat_str(&model.ks2()),
            "ks2_param": model.ks2_param(),
            "char_p": model.char_p(),
            "p": input.p,
            "n": input.n,
            "d": input.d,
            "cover_divisor": fanoforge_core::chow::divisor_string(&divisor, model),
            "m": outcome.m,
            "mode": input.mode.label(),
        },
        "extension": {
            "L": divisor_strings(r.extension.sub_bundle()),
            "Lp": divisor_strings(r.extension.quotient()),
            "lenZ": r.extension.len_z(),
        },
        "chern": {
            "c1": divisor_strings(r.chern.c1()),
            "c2": rat_str(r.chern.c2()),
        },
        "antiK": r.anti_k.display_with(model),
        "deg_paper": rat_str(&r.deg_paper),
        "deg_geom": rat_str(&r.deg_geom),
        "family_dim": r.family_dim,
        "ext_space_dim": r.extension_space_dim,
        "locally_free": r.locally_free,
        "cover": {
            "class": outcome.cover_paper.cover_class.display_with(model),
            "multiplier": outcome.cover_paper.multiplier,
            "degree_paper": rat_str(&outcome.cover_paper.degree),
            "degree_geom": rat_str(&outcome.cover_geom.degree),
            "ample_certified": outcome.cover_paper.ample_certified,
            "certified_by": outcome.cover_paper.certified_by,
        },
        "cyclic": {
            "m": outcome.m,
            "canonical_multiple": rat_str(&outcome.cyclic_paper.canonical_multiple),
            "degree_paper": rat_str(&outcome.cyclic_paper.degree),
            "degree_geom": rat_str(&outcome.cyclic_geom.degree),
            "k_nef": outcome.cyclic_paper.k_nef && outcome.cyclic_geom.k_nef,
        },
        "certificates": certificates,
        "notes": [
            "family_dim counts the Hilbert scheme of d points (dimension 2d); \
             the extension fiber P(O_Z) contributes ext_space_dim = d - 1 further \
             directions not included in that count",
        ],
    })
}

fn certificates_json(outcome: &ConstructOutcome) -> Vec<Value> {
    let mut certs = vec![json!({
        "claim": "E is locally free",
        "certified_by": "H^2(L'^-1 (x) L) = 0 via pairing negativity of K_S - (L - L') \
                         against a declared ample generator",
        "holds": outcome.report.locally_free,
    })];
    for by in &outcome.cover_paper.certified_by {
        certs.push(json!({
            "claim": "-K_X ample",
            "certified_by": by,
            "holds": outcome.cover_paper.ample_certified,
        }));
    }
    certs
}

pub fn construct_text(
    input: &ConstructionInput,
    outcome: &ConstructOutcome,
    _surface_arg: &str,
) -> String {
    let model = &input.model;
    let r = &outcome.report;
    let divisor = input.cover_divisor();
    let mut out = String::new();
    out.push_str(&format!(
        "construction report — surface {} (K_S^2 = {}, char p = {})\n",
        model.name(),
        rat_str(&model.ks2()),
        input.p
    ));
    out.push_str(&format!(
        "  splitting: L = {}, L' = {}, l(Z) = {}\n",
        fanoforge_core::chow::divisor_string(r.extension.sub_bundle(), model),
        fanoforge_core::chow::divisor_string(r.extension.quotient(), model),
        r.extension.len_z()
    ));
    out.push_str(&format!(
        "  chern:     c1 = {}, c2 = {}\n",
        fanoforge_core::chow::divisor_string(r.chern.c1(), model),
        rat_str(r.chern.c2())
    ));
    out.push_str(&format!("  -K_W = {}\n", r.anti_k.display_with(model)));
    out.push_str(&format!(
        "  degree (paper-formal): {}\n  degree (geometric):    {}\n",
        rat_str(&r.deg_paper),
        rat_str(&r.deg_geom)
    ));
    out.push_str(&format!(
        "  family dim (Hilb^d): {}   extension space dim: {}\n",
        r.family_dim, r.extension_space_dim
    ));
    out.push_str(&format!(
        "  locally free: {}\n",
        if r.locally_free { "certified" } else { "inconclusive" }
    ));
    out.push_str(&format!(
        "  p-cover (p = {}, D = {}): class = {}\n",
        input.p,
        fanoforge_core::chow::divisor_string(&divisor, model),
        outcome.cover_paper.cover_class.display_with(model)
    ));
    out.push_str(&format!(
        "    degree (paper-formal): {}\n    degree (geometric):    {}\n",
        rat_str(&outcome.cover_paper.degree),
        rat_str(&outcome.cover_geom.degree)
    ));
    out.push_str(&format!(
        "    -K_X ample: {} ({})\n",
        if outcome.cover_paper.ample_certified { "certified" } else { "not certified" },
        outcome.cover_paper.certified_by.join("; ")
    ));
    out.push_str(&format!(
        "  cyclic cover (m = {}): K multiple = {}, degree (paper) = {}, degree (geom) = {}, K nef: {}\n",
        outcome.m,
        rat_str(&outcome.cyclic_paper.canonical_multiple),
        rat_str(&outcome.cyclic_paper.degree),
        rat_str(&outcome.cyclic_geom.degree),
        if outcome.cyclic_paper.k_nef { "yes" } else { "no" }
    ));
    out.push_str(
        "  note: family_dim counts Hilb^d (2d); the extension fiber adds d-1 \
         directions reported separately\n",
    );
    out
}

/// One row of the (n, d) table.
pub struct TableRow {
    pub n: u64,
    pub d: u64,
    pub feasible: bool,
    pub deg_paper: Option<String>,
    pub deg_geom: Option<String>,
    pub family_dim: u64,
    pub ext_space_dim: Option<u64>,
}

pub fn table_rows(
    model: &SurfaceModel,
    n_range: (u64, u64),
    d_range: (u64, u64),
) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for n in n_range.0..=n_range.1 {
        for d in d_range.0..=d_range.1 {
            let ks2 = model.ks2();
            match fanoforge_core::construction::choose_splitting(model, n, d) {
                Ok(ext) => {
                    let chern = fanoforge_core::bundles::whitney_chern(model, &ext)?;
                    let c1sq = model.intersect(chern.c1(), chern.c1())?;
                    let ksc1 = model.intersect(model.canonical(), chern.c1())?;
                    let paper = fanoforge_core::chow::closed_degree_formula(
                        &ks2,
                        &c1sq,
                        &ksc1,
                        chern.c2(),
                        ConventionMode::PaperFormal,
                    );
                    let geom = fanoforge_core::chow::closed_degree_formula(
                        &ks2,
                        &c1sq,
                        &ksc1,
                        chern.c2(),
                        ConventionMode::Geometric,
                    );
                    rows.push(TableRow {
                        n,
                        d,
                        feasible: true,
                        deg_paper: Some(rat_str(&paper)),
                        deg_geom: Some(rat_str(&geom)),
                        family_dim: 2 * d,
                        ext_space_dim: Some(d - 1),
                    });
                }
                Err(fanoforge_core::EngineError::Infeasible(_)) => rows.push(TableRow {
                    n,
                    d,
                    feasible: false,
                    deg_paper: None,
                    deg_geom: None,
                    family_dim: 2 * d,
                    ext_space_dim: None,
                }),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(rows)
}

pub fn table_json(rows: &[TableRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "d": r.d,
                    "feasible": r.feasible,
                    "deg_paper": r.deg_paper,
                    "deg_geom": r.deg_geom,
                    "family_dim": r.family_dim,
                    "ext_space_dim": r.ext_space_dim,
                })
            })
            .collect(),
    )
}

pub fn table_text(rows: &[TableRow]) -> String {
    let mut out = String::from("    n     d  feasible  deg_paper  deg_geom  family_dim  ext_dim\n");
    for r in rows {
        out.push_str(&format!(
            "{:>5} {:>5}  {:<8}  {:>9}  {:>8}  {:>10}  {:>7}\n",
            r.n,
            r.d,
            r.feasible,
            r.deg_paper.as_deref().unwrap_or("-"),
            r.deg_geom.as_deref().unwrap_or("-"),
            r.family_dim,
            r.ext_space_dim.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
        ));
    }
    out
}

/// Bundle for `eval`: parse the c1 expression and c2 rational.
pub fn bundle_from_flags(model: &SurfaceModel, c1: &str, c2: &str) -> Result<BundleData> {
    let c1 = fanoforge_core::expr::eval_divisor(c1, model)?;
    let c2 = fanoforge_core::rat::parse_rat(c2).ok_or_else(|| {
        fanoforge_core::EngineError::invalid(format!("--c2 expects an exact rational, got `{c2}`"))
    })?;
    Ok(BundleData::new(c1, c2))
}
