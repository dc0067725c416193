//! The graded ring A*(W) for W = P(E), E of rank 2 over a surface model.
//!
//! Classes are kept in a normal form with no power of H above 1:
//! `a0 + pi*(a1) + h1*H + a2*pi*(pt) + H*pi*(h2) + a3*H*pi*(pt)`. Binary
//! products rewrite H^2 through the bundle relation of the active
//! convention mode and are honest quotient-ring products (commutative,
//! associative). Degree-3 evaluation of powers goes through an
//! *unreduced* polynomial in H ([`HPoly`]) and applies the mode's
//! monomial rules once at the end; in [`ConventionMode::PaperFormal`]
//! those rules postulate `H^3 = -c1^2 - c2` exactly as printed, which is
//! *not* what iterated rewriting yields. The two routes agree everywhere
//! in [`ConventionMode::Geometric`].

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{EngineError, Result};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::rat::{rat_i, Rat};

/// Sign convention for the bundle relation and the degree-3 monomial
/// rules.
///
/// `Geometric` is the self-consistent quotient convention
/// (`H^2 = H*pi*c1 - pi*c2`, `H^3 = c1^2 - c2`); `PaperFormal` keeps the
/// relation and the degree values with the printed signs
/// (`H^2 + H*c1 + c2 = 0`, `H^3 = -c1^2 - c2`), which are only mutually
/// consistent under the formal evaluation route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConventionMode {
    Geometric,
    PaperFormal,
}

impl ConventionMode {
    pub fn label(self) -> &'static str {
        match self {
            ConventionMode::Geometric => "geometric",
            ConventionMode::PaperFormal => "paper-formal",
        }
    }

    /// Sign of the H*pi*c1 term in the rewritten H^2.
    fn h2_sign(self) -> Rat {
        match self {
            ConventionMode::Geometric => rat_i(1),
            ConventionMode::PaperFormal => rat_i(-1),
        }
    }
}

impl std::str::FromStr for ConventionMode {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "geom" | "geometric" => Ok(ConventionMode::Geometric),
            "paper" | "paper-formal" | "paper_formal" | "paperformal" => {
                Ok(ConventionMode::PaperFormal)
            }
            other => Err(EngineError::invalid(format!(
                "unknown convention mode `{other}` (expected paper or geom)"
            ))),
        }
    }
}

/// Chern data of a rank-2 bundle on a surface model: c1 as a divisor
/// class and c2 as the degree of its A^2 component.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleData {
    c1: DivisorClass,
    c2: Rat,
}

impl BundleData {
    pub fn new(c1: DivisorClass, c2: Rat) -> Self {
        BundleData { c1, c2 }
    }

    pub const fn rank(&self) -> u32 {
        2
    }

    pub fn c1(&self) -> &DivisorClass {
        &self.c1
    }

    pub fn c2(&self) -> &Rat {
        &self.c2
    }

    /// Chern data of E tensored by the line bundle with class `m`:
    /// c1 + 2m and c2 + c1.m + m^2.
    pub fn twist(&self, model: &SurfaceModel, m: &DivisorClass) -> Result<BundleData> {
        let c1m = model.intersect(&self.c1, m)?;
        let msq = model.intersect(m, m)?;
        Ok(BundleData {
            c1: self.c1.add(&m.scale(&rat_i(2))),
            c2: &self.c2 + c1m + msq,
        })
    }
}

/// An element of A*(S) = Q + Pic_Q + Q*pt, the coefficient ring of the
/// H-polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceClass {
    pub s0: Rat,
    pub s1: DivisorClass,
    pub s2: Rat,
}

impl SurfaceClass {
    pub fn zero(rank: usize) -> Self {
        SurfaceClass {
            s0: Rat::zero(),
            s1: DivisorClass::zero(rank),
            s2: Rat::zero(),
        }
    }

    pub fn scalar(q: Rat, rank: usize) -> Self {
        SurfaceClass {
            s0: q,
            s1: DivisorClass::zero(rank),
            s2: Rat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.s0.is_zero() && self.s1.is_zero() && self.s2.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        SurfaceClass {
            s0: &self.s0 + &other.s0,
            s1: self.s1.add(&other.s1),
            s2: &self.s2 + &other.s2,
        }
    }

    /// Full product in A*(S). Divisor-times-point terms land in degree 3
    /// of the surface and vanish identically; the boolean reports a
    /// dropped nonzero pt*pt term (degree 4, a genuine truncation).
    fn mul_full(&self, other: &Self, model: &SurfaceModel) -> Result<(SurfaceClass, bool)> {
        let s0 = &self.s0 * &other.s0;
        let s1 = other.s1.scale(&self.s0).add(&self.s1.scale(&other.s0));
        let s2 = &self.s0 * &other.s2
            + &self.s2 * &other.s0
            + model.intersect(&self.s1, &other.s1)?;
        let dropped = !self.s2.is_zero() && !other.s2.is_zero();
        Ok((SurfaceClass { s0, s1, s2 }, dropped))
    }

    /// Drops components of degree above `max_deg`; reports whether
    /// anything nonzero was discarded.
    fn truncate(mut self, max_deg: i32) -> (SurfaceClass, bool) {
        let mut dropped = false;
        if max_deg < 2 && !self.s2.is_zero() {
            self.s2 = Rat::zero();
            dropped = true;
        }
        if max_deg < 1 && !self.s1.is_zero() {
            self.s1 = DivisorClass::zero(self.s1.rank());
            dropped = true;
        }
        if max_deg < 0 && !self.s0.is_zero() {
            self.s0 = Rat::zero();
            dropped = true;
        }
        (self, dropped)
    }
}

/// An unreduced polynomial in H with A*(S) coefficients, truncated to
/// total degree 3. Products here are associative and commutative; no
/// bundle relation is applied until [`HPoly::reduce`].
#[derive(Debug, Clone, PartialEq)]
pub struct HPoly {
    coeffs: [SurfaceClass; 4],
}

impl HPoly {
    pub fn zero(rank: usize) -> Self {
        HPoly {
            coeffs: [
                SurfaceClass::zero(rank),
                SurfaceClass::zero(rank),
                SurfaceClass::zero(rank),
                SurfaceClass::zero(rank),
            ],
        }
    }

    pub fn one(rank: usize) -> Self {
        HPoly::scalar(Rat::one(), rank)
    }

    pub fn scalar(q: Rat, rank: usize) -> Self {
        let mut p = HPoly::zero(rank);
        p.coeffs[0].s0 = q;
        p
    }

    pub fn h(rank: usize) -> Self {
        let mut p = HPoly::zero(rank);
        p.coeffs[1].s0 = Rat::one();
        p
    }

    pub fn pt(rank: usize) -> Self {
        let mut p = HPoly::zero(rank);
        p.coeffs[0].s2 = Rat::one();
        p
    }

    pub fn divisor(d: DivisorClass) -> Self {
        let rank = d.rank();
        let mut p = HPoly::zero(rank);
        p.coeffs[0].s1 = d;
        p
    }

    pub fn rank(&self) -> usize {
        self.coeffs[0].s1.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(SurfaceClass::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        HPoly {
            coeffs: [
                self.coeffs[0].add(&other.coeffs[0]),
                self.coeffs[1].add(&other.coeffs[1]),
                self.coeffs[2].add(&other.coeffs[2]),
                self.coeffs[3].add(&other.coeffs[3]),
            ],
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&rat_i(-1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &Rat) -> Self {
        let sc = |c: &SurfaceClass| SurfaceClass {
            s0: &c.s0 * q,
            s1: c.s1.scale(q),
            s2: &c.s2 * q,
        };
        HPoly {
            coeffs: [
                sc(&self.coeffs[0]),
                sc(&self.coeffs[1]),
                sc(&self.coeffs[2]),
                sc(&self.coeffs[3]),
            ],
        }
    }

    /// Formal product; the boolean reports discarded nonzero content of
    /// total degree above 3.
    pub fn mul_tracked(&self, other: &Self, model: &SurfaceModel) -> Result<(HPoly, bool)> {
        if self.rank() != model.rank() || other.rank() != model.rank() {
            return Err(EngineError::invalid(
                "class rank does not match the surface model",
            ));
        }
        let mut out = HPoly::zero(model.rank());
        let mut overflow = false;
        for i in 0..4 {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let (p, ptpt) = self.coeffs[i].mul_full(&other.coeffs[j], model)?;
                overflow |= ptpt;
                let k = i + j;
                if k > 3 {
                    overflow |= !p.is_zero();
                } else {
                    let (t, dropped) = p.truncate(3 - k as i32);
                    overflow |= dropped;
                    out.coeffs[k] = out.coeffs[k].add(&t);
                }
            }
        }
        Ok((out, overflow))
    }

    pub fn mul(&self, other: &Self, model: &SurfaceModel) -> Result<HPoly> {
        Ok(self.mul_tracked(other, model)?.0)
    }

    pub fn pow_tracked(&self, k: u32, model: &SurfaceModel) -> Result<(HPoly, bool)> {
        let mut acc = HPoly::one(self.rank());
        let mut overflow = false;
        for _ in 0..k {
            let (next, o) = acc.mul_tracked(self, model)?;
            acc = next;
            overflow |= o;
        }
        Ok((acc, overflow))
    }

    pub fn pow(&self, k: u32, model: &SurfaceModel) -> Result<HPoly> {
        Ok(self.pow_tracked(k, model)?.0)
    }

    /// Eliminates H^2 and H^3 monomials through the mode's rules and
    /// returns the normal form. This is the single point where the sign
    /// convention enters.
    pub fn reduce(&self, model: &SurfaceModel, bundle: &BundleData, mode: ConventionMode) -> Result<ChowClass> {
        if self.rank() != model.rank() || bundle.c1.rank() != model.rank() {
            return Err(EngineError::invalid(
                "class rank does not match the surface model",
            ));
        }
        let sign = mode.h2_sign();
        let mut out = ChowClass {
            a0: self.coeffs[0].s0.clone(),
            a1: self.coeffs[0].s1.clone(),
            a2: self.coeffs[0].s2.clone(),
            h1: self.coeffs[1].s0.clone(),
            h2: self.coeffs[1].s1.clone(),
            a3: self.coeffs[1].s2.clone(),
        };
        // H^2 * scalar u:  u*(sign*H*pi*c1 - c2*pt)
        let u0 = &self.coeffs[2].s0;
        if !u0.is_zero() {
            out.h2 = out.h2.add(&bundle.c1.scale(&(&sign * u0)));
            out.a2 -= u0 * &bundle.c2;
        }
        // H^2 * pi*(alpha):  sign*(c1.alpha) * H*pt
        let u1 = &self.coeffs[2].s1;
        if !u1.is_zero() {
            out.a3 += &sign * model.intersect(&bundle.c1, u1)?;
        }
        // H^3 * scalar t:  t * (sign*c1^2 - c2) * H*pt
        let t = &self.coeffs[3].s0;
        if !t.is_zero() {
            let c1sq = model.intersect(&bundle.c1, &bundle.c1)?;
            out.a3 += t * (&sign * c1sq - &bundle.c2);
        }
        Ok(out)
    }
}

impl From<&ChowClass> for HPoly {
    fn from(c: &ChowClass) -> Self {
        let rank = c.rank();
        let mut p = HPoly::zero(rank);
        p.coeffs[0] = SurfaceClass {
            s0: c.a0.clone(),
            s1: c.a1.clone(),
            s2: c.a2.clone(),
        };
        p.coeffs[1] = SurfaceClass {
            s0: c.h1.clone(),
            s1: c.h2.clone(),
            s2: c.a3.clone(),
        };
        p
    }
}

/// A class of A*(W) in normal form:
/// `a0 + pi*(a1) + h1*H + a2*pi*(pt) + H*pi*(h2) + a3*H*pi*(pt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChowClass {
    a0: Rat,
    a1: DivisorClass,
    h1: Rat,
    a2: Rat,
    h2: DivisorClass,
    a3: Rat,
}

impl ChowClass {
    pub fn zero(rank: usize) -> Self {
        ChowClass {
            a0: Rat::zero(),
            a1: DivisorClass::zero(rank),
            h1: Rat::zero(),
            a2: Rat::zero(),
            h2: DivisorClass::zero(rank),
            a3: Rat::zero(),
        }
    }

    pub fn one(rank: usize) -> Self {
        let mut c = Self::zero(rank);
        c.a0 = Rat::one();
        c
    }

    pub fn h(rank: usize) -> Self {
        let mut c = Self::zero(rank);
        c.h1 = Rat::one();
        c
    }

    pub fn pt(rank: usize) -> Self {
        let mut c = Self::zero(rank);
        c.a2 = Rat::one();
        c
    }

    /// H * pi*(pt), the degree-3 basis class.
    pub fn fiber_point(rank: usize) -> Self {
        let mut c = Self::zero(rank);
        c.a3 = Rat::one();
        c
    }

    pub fn from_divisor(d: DivisorClass) -> Self {
        let rank = d.rank();
        let mut c = Self::zero(rank);
        c.a1 = d;
        c
    }

    /// Assembles a class from its six normal-form components. `a1` and
    /// `h2` must have equal rank.
    pub fn from_parts(
        a0: Rat,
        a1: DivisorClass,
        h1: Rat,
        a2: Rat,
        h2: DivisorClass,
        a3: Rat,
    ) -> Result<Self> {
        if a1.rank() != h2.rank() {
            return Err(EngineError::invalid(
                "a1 and h2 must live in the same Picard lattice",
            ));
        }
        Ok(ChowClass {
            a0,
            a1,
            h1,
            a2,
            h2,
            a3,
        })
    }

    pub fn rank(&self) -> usize {
        self.a1.rank()
    }

    pub fn a0(&self) -> &Rat {
        &self.a0
    }

    pub fn a1(&self) -> &DivisorClass {
        &self.a1
    }

    pub fn h1(&self) -> &Rat {
        &self.h1
    }

    pub fn a2(&self) -> &Rat {
        &self.a2
    }

    pub fn h2(&self) -> &DivisorClass {
        &self.h2
    }

    pub fn a3(&self) -> &Rat {
        &self.a3
    }

    pub fn is_zero(&self) -> bool {
        self.a0.is_zero()
            && self.a1.is_zero()
            && self.h1.is_zero()
            && self.a2.is_zero()
            && self.h2.is_zero()
            && self.a3.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        ChowClass {
            a0: &self.a0 + &other.a0,
            a1: self.a1.add(&other.a1),
            h1: &self.h1 + &other.h1,
            a2: &self.a2 + &other.a2,
            h2: self.h2.add(&other.h2),
            a3: &self.a3 + &other.a3,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&rat_i(-1))
    }

    pub fn scale(&self, q: &Rat) -> Self {
        ChowClass {
            a0: &self.a0 * q,
            a1: self.a1.scale(q),
            h1: &self.h1 * q,
            a2: &self.a2 * q,
            h2: self.h2.scale(q),
            a3: &self.a3 * q,
        }
    }

    pub fn to_formal(&self) -> HPoly {
        HPoly::from(self)
    }

    /// Renders the class in the grammar the expression parser accepts,
    /// in the fixed order a0, a1, h1*H, a2*pt, H*(h2), a3*H*pt.
    pub fn display_with(&self, model: &SurfaceModel) -> String {
        let mut terms: Vec<(bool, String)> = Vec::new();
        push_rat_term(&mut terms, &self.a0, None);
        push_divisor_terms(&mut terms, &self.a1, model, None);
        push_rat_term(&mut terms, &self.h1, Some("H"));
        push_rat_term(&mut terms, &self.a2, Some("pt"));
        if !self.h2.is_zero() {
            terms.push((false, format!("H*({})", divisor_string(&self.h2, model))));
        }
        push_rat_term(&mut terms, &self.a3, Some("H*pt"));
        join_terms(&terms)
    }
}

/// Renders a divisor class over the model's basis names.
pub fn divisor_string(d: &DivisorClass, model: &SurfaceModel) -> String {
    let mut terms: Vec<(bool, String)> = Vec::new();
    push_divisor_terms(&mut terms, d, model, None);
    join_terms(&terms)
}

fn push_divisor_terms(
    terms: &mut Vec<(bool, String)>,
    d: &DivisorClass,
    model: &SurfaceModel,
    _suffix: Option<&str>,
) {
    for (i, c) in d.coeffs().iter().enumerate() {
        push_rat_term(terms, c, Some(&model.basis_names()[i]));
    }
}

fn push_rat_term(terms: &mut Vec<(bool, String)>, q: &Rat, symbol: Option<&str>) {
    if q.is_zero() {
        return;
    }
    let neg = q.is_negative();
    let mag = q.abs();
    let body = match symbol {
        None => mag.to_string(),
        Some(sym) => {
            if mag.is_one() {
                sym.to_string()
            } else {
                format!("{mag}*{sym}")
            }
        }
    };
    terms.push((neg, body));
}

fn join_terms(terms: &[(bool, String)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (neg, body)) in terms.iter().enumerate() {
        if i == 0 {
            if *neg {
                out.push('-');
            }
            out.push_str(body);
        } else {
            out.push_str(if *neg { " - " } else { " + " });
            out.push_str(body);
        }
    }
    out
}

impl fmt::Display for ChowClass {
    /// Basis-name-free rendering (uses e1..e_rho); prefer
    /// [`ChowClass::display_with`] when a model is at hand.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.rank()).map(|i| format!("e{i}")).collect();
        let mut terms: Vec<(bool, String)> = Vec::new();
        push_rat_term(&mut terms, &self.a0, None);
        for (i, c) in self.a1.coeffs().iter().enumerate() {
            push_rat_term(&mut terms, c, Some(&names[i]));
        }
        push_rat_term(&mut terms, &self.h1, Some("H"));
        push_rat_term(&mut terms, &self.a2, Some("pt"));
        for (i, c) in self.h2.coeffs().iter().enumerate() {
            push_rat_term(&mut terms, c, Some(&format!("H*{}", names[i])));
        }
        push_rat_term(&mut terms, &self.a3, Some("H*pt"));
        write!(f, "{}", join_terms(&terms))
    }
}

/// Graded product of normal-form classes: formal expansion followed by a
/// single rewrite pass. A genuine (associative, commutative) quotient
/// product in both modes.
pub fn multiply(
    model: &SurfaceModel,
    bundle: &BundleData,
    x: &ChowClass,
    y: &ChowClass,
    mode: ConventionMode,
) -> Result<ChowClass> {
    let p = HPoly::from(x).mul(&HPoly::from(y), model)?;
    p.reduce(model, bundle, mode)
}

/// Formal k-th power reduced once at the end. For k >= 3 in
/// `PaperFormal` mode this is *not* the iterated binary product; it is
/// the evaluation route that reproduces the printed degree identities.
pub fn power(
    model: &SurfaceModel,
    bundle: &BundleData,
    x: &ChowClass,
    k: u32,
    mode: ConventionMode,
) -> Result<ChowClass> {
    HPoly::from(x).pow(k, model)?.reduce(model, bundle, mode)
}

/// Degree of the A^3 component after full reduction. Linear.
pub fn integrate(
    model: &SurfaceModel,
    bundle: &BundleData,
    x: &HPoly,
    mode: ConventionMode,
) -> Result<Rat> {
    Ok(x.reduce(model, bundle, mode)?.a3)
}

/// K_W = -2H + pi*(K_S + c1) for rank-2 E.
pub fn canonical_class(model: &SurfaceModel, bundle: &BundleData) -> Result<ChowClass> {
    if bundle.c1.rank() != model.rank() {
        return Err(EngineError::invalid(
            "bundle c1 rank does not match the surface model",
        ));
    }
    let mut c = ChowClass::zero(model.rank());
    c.h1 = rat_i(-2);
    c.a1 = model.canonical().add(&bundle.c1);
    Ok(c)
}

/// deg (-K_W)^3 by engine expansion (formal cube, then one reduction).
pub fn anticanonical_cube(
    model: &SurfaceModel,
    bundle: &BundleData,
    mode: ConventionMode,
) -> Result<Rat> {
    let anti_k = canonical_class(model, bundle)?.neg();
    integrate(model, bundle, &anti_k.to_formal().pow(3, model)?, mode)
}

/// The closed anticanonical-degree formula on the Chern numbers.
pub fn closed_degree_formula(
    ks2: &Rat,
    c1sq: &Rat,
    ksc1: &Rat,
    c2: &Rat,
    mode: ConventionMode,
) -> Rat {
    match mode {
        ConventionMode::PaperFormal => {
            rat_i(6) * ks2 + rat_i(10) * c1sq + rat_i(24) * ksc1 - rat_i(8) * c2
        }
        ConventionMode::Geometric => rat_i(6) * ks2 + rat_i(2) * c1sq - rat_i(8) * c2,
    }
}

/// The normal form of H^2 written directly from the mode's relation
/// (for consistency checks against the engine's rewrite path).
pub fn reduced_h_square(
    model: &SurfaceModel,
    bundle: &BundleData,
    mode: ConventionMode,
) -> ChowClass {
    let mut c = ChowClass::zero(model.rank());
    c.h2 = bundle.c1.scale(&mode.h2_sign());
    c.a2 = -bundle.c2.clone();
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn p2_bundle(c1: i64, c2: i64) -> (SurfaceModel, BundleData) {
        let m = SurfaceModel::p2();
        let b = BundleData::new(DivisorClass::from_ints(&[c1]), rat_i(c2));
        (m, b)
    }

    #[test]
    fn multiply_identity() {
        let (m, e) = p2_bundle(1, 0);
        let one = ChowClass::one(1);
        let y = ChowClass::h(1).add(&ChowClass::pt(1).scale(&rat(3, 2)));
        for mode in [ConventionMode::Geometric, ConventionMode::PaperFormal] {
            assert_eq!(multiply(&m, &e, &one, &y, mode).unwrap(), y);
        }
    }

    #[test]
    fn h_squared_rewrites_per_mode() {
        let (m, e) = p2_bundle(1, 0);
        let h = ChowClass::h(1);
        let paper = multiply(&m, &e, &h, &h, ConventionMode::PaperFormal).unwrap();
        assert_eq!(paper.h2(), &DivisorClass::from_ints(&[-1]));
        assert!(paper.a2().is_zero());
        let geom = multiply(&m, &e, &h, &h, ConventionMode::Geometric).unwrap();
        assert_eq!(geom.h2(), &DivisorClass::from_ints(&[1]));
        assert!(geom.a2().is_zero());
    }

    #[test]
    fn rewrite_matches_direct_relation() {
        let (m, e) = p2_bundle(2, 3);
        let h = ChowClass::h(1);
        for mode in [ConventionMode::Geometric, ConventionMode::PaperFormal] {
            let engine = multiply(&m, &e, &h, &h, mode).unwrap();
            let direct = reduced_h_square(&m, &e, mode);
            assert_eq!(engine, direct);
            // H * (H^2 - reduced(H^2)) integrates to 0 identically
            let diff = engine.sub(&direct);
            let prod = multiply(&m, &e, &h, &diff, mode).unwrap();
            assert!(prod.a3().is_zero());
        }
    }

    #[test]
    fn integrate_h_cubed() {
        let (m, e0) = p2_bundle(0, 0);
        let h3 = HPoly::h(1).pow(3, &m).unwrap();
        assert_eq!(integrate(&m, &e0, &h3, ConventionMode::Geometric).unwrap(), rat_i(0));
        assert_eq!(integrate(&m, &e0, &h3, ConventionMode::PaperFormal).unwrap(), rat_i(0));

        let (_, e1) = p2_bundle(1, 0);
        assert_eq!(integrate(&m, &e1, &h3, ConventionMode::PaperFormal).unwrap(), rat_i(-1));
        assert_eq!(integrate(&m, &e1, &h3, ConventionMode::Geometric).unwrap(), rat_i(1));
    }

    #[test]
    fn canonical_class_examples() {
        // P2, E = O + O
        let (m, e) = p2_bundle(0, 0);
        let k_w = canonical_class(&m, &e).unwrap();
        assert_eq!(k_w.h1(), &rat_i(-2));
        assert_eq!(k_w.a1(), &DivisorClass::from_ints(&[-3]));

        // K = 3A, c1 = -3K: -K_W = 2H + pi*(2K)
        let m = SurfaceModel::ample_k(9).unwrap();
        let c1 = m.canonical().scale(&rat_i(-3));
        let e = BundleData::new(c1, Rat::zero());
        let anti = canonical_class(&m, &e).unwrap().neg();
        assert_eq!(anti.h1(), &rat_i(2));
        assert_eq!(anti.a1(), &m.canonical().scale(&rat_i(2)));
        assert_eq!(anti.a1(), &DivisorClass::from_ints(&[6]));

        // c1 = -K_S: K_W = -2H
        let p2 = SurfaceModel::p2();
        let e = BundleData::new(p2.canonical().neg(), Rat::zero());
        let k_w = canonical_class(&p2, &e).unwrap();
        assert_eq!(k_w.h1(), &rat_i(-2));
        assert!(k_w.a1().is_zero());
    }

    #[test]
    fn anticanonical_cube_oracles() {
        // P2 x P1
        let (m, e) = p2_bundle(0, 0);
        assert_eq!(anticanonical_cube(&m, &e, ConventionMode::Geometric).unwrap(), rat_i(54));
        assert_eq!(anticanonical_cube(&m, &e, ConventionMode::PaperFormal).unwrap(), rat_i(54));

        // blow-up of P3 at a point
        let (m, e) = p2_bundle(1, 0);
        assert_eq!(anticanonical_cube(&m, &e, ConventionMode::Geometric).unwrap(), rat_i(56));

        // K_S^2 = 9, c1 = -3K, c2 = 0
        let m = SurfaceModel::ample_k(9).unwrap();
        let e = BundleData::new(m.canonical().scale(&rat_i(-3)), Rat::zero());
        assert_eq!(anticanonical_cube(&m, &e, ConventionMode::PaperFormal).unwrap(), rat_i(216));
        assert_eq!(anticanonical_cube(&m, &e, ConventionMode::Geometric).unwrap(), rat_i(216));
    }

    #[test]
    fn closed_formula_examples() {
        for mode in [ConventionMode::Geometric, ConventionMode::PaperFormal] {
            assert_eq!(
                closed_degree_formula(&rat_i(9), &rat_i(0), &rat_i(0), &rat_i(0), mode),
                rat_i(54)
            );
        }
        assert_eq!(
            closed_degree_formula(
                &rat_i(9),
                &rat_i(81),
                &rat_i(-27),
                &rat_i(0),
                ConventionMode::PaperFormal
            ),
            rat_i(216)
        );
        for k in [-2i64, 0, 1, 7] {
            for mode in [ConventionMode::Geometric, ConventionMode::PaperFormal] {
                assert_eq!(
                    closed_degree_formula(&rat_i(k), &rat_i(0), &rat_i(0), &rat_i(0), mode),
                    rat_i(6 * k)
                );
            }
        }
    }

    #[test]
    fn normal_form_reduction_is_idempotent() {
        let m = SurfaceModel::ample_k(4).unwrap();
        let e = BundleData::new(DivisorClass::from_ints(&[3]), rat(1, 2));
        let mut x = ChowClass::h(1).scale(&rat_i(2));
        x = x.add(&ChowClass::from_divisor(DivisorClass::from_ints(&[5])));
        x = x.add(&ChowClass::pt(1).scale(&rat(7, 3)));
        x = x.add(&ChowClass::fiber_point(1).scale(&rat_i(-4)));
        for mode in [ConventionMode::Geometric, ConventionMode::PaperFormal] {
            let once = x.to_formal().reduce(&m, &e, mode).unwrap();
            let twice = once.to_formal().reduce(&m, &e, mode).unwrap();
            assert_eq!(once, twice);
            assert_eq!(once, x, "normal forms are fixed by reduction");
        }
    }

    #[test]
    fn degree_truncation_is_silent_but_tracked() {
        let (m, e) = p2_bundle(1, 1);
        let pt = ChowClass::pt(1);
        let prod = multiply(&m, &e, &pt, &pt, ConventionMode::Geometric).unwrap();
        assert!(prod.is_zero());
        let (_, overflow) = HPoly::from(&pt)
            .mul_tracked(&HPoly::from(&pt), &m)
            .unwrap();
        assert!(overflow);
        // divisor * pt is a genuine surface-degree-3 zero, not an overflow
        let d = ChowClass::from_divisor(DivisorClass::from_ints(&[2]));
        let (z, overflow) = HPoly::from(&d).mul_tracked(&HPoly::from(&pt), &m).unwrap();
        assert!(z.is_zero());
        assert!(!overflow);
    }

    #[test]
    fn rank_mismatch_rejected() {
        let m = SurfaceModel::p2();
        let e = BundleData::new(DivisorClass::from_ints(&[1, 0]), Rat::zero());
        let x = ChowClass::h(2);
        assert!(matches!(
            multiply(&m, &e, &x, &x, ConventionMode::Geometric),
            Err(EngineError::InvalidInput(_))
        ));
        assert!(canonical_class(&m, &e).is_err());
    }

    #[test]
    fn display_formats() {
        let m = SurfaceModel::ample_k(9).unwrap();
        let mut c = ChowClass::h(1).scale(&rat_i(2));
        c = c.add(&ChowClass::from_divisor(DivisorClass::from_ints(&[6])));
        assert_eq!(c.display_with(&m), "6*A + 2*H");
        assert_eq!(ChowClass::zero(1).display_with(&m), "0");
        let mut d = ChowClass::from_divisor(DivisorClass::from_ints(&[-1]));
        d = d.add(&ChowClass::fiber_point(1).scale(&rat(1, 2)));
        assert_eq!(d.display_with(&m), "-A + 1/2*H*pt");
    }
}
