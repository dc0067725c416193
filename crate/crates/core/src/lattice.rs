//! Picard-lattice arithmetic for surface models: exact intersection
//! numbers, positivity predicates against declared ample generators, and
//! the certified-vanishing predicate behind the local-freeness criterion.
//!
//! A [`SurfaceModel`] is the numeric avatar of a projective surface: a
//! Gram matrix for the intersection pairing on a chosen basis of the
//! Picard group, the canonical class in that basis, a non-empty list of
//! declared ample classes, and the field characteristic. Ampleness is
//! declared, not derived; the predicates here only ever consume pairing
//! positivity against those generators.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};
use crate::rat::{is_prime, perfect_sqrt, rat_i, Rat};

/// A divisor class: a rational vector in the owning model's basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClass {
    coeffs: Vec<Rat>,
}

impl DivisorClass {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        DivisorClass { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        DivisorClass {
            coeffs: coeffs.iter().map(|&c| rat_i(c)).collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass {
            coeffs: vec![Rat::zero(); rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, t: &Rat) -> Self {
        DivisorClass {
            coeffs: self.coeffs.iter().map(|c| c * t).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.rank(), other.rank());
        DivisorClass {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.rank(), other.rank());
        DivisorClass {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        DivisorClass {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// On-disk schema for surface models.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct ModelDoc {
    name: String,
    rank: usize,
    gram: Vec<Vec<i64>>,
    canonical: Vec<i64>,
    ample_gens: Vec<Vec<i64>>,
    #[serde(default)]
    char_p: u64,
    #[serde(default)]
    params: ParamsDoc,
    #[serde(default)]
    basis_names: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct ParamsDoc {
    #[serde(rename = "KS2")]
    ks2: Option<i64>,
}

/// A surface model: Picard lattice, canonical class, declared ample
/// generators and characteristic.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceModel {
    name: String,
    rank: usize,
    gram: Vec<Vec<Rat>>,
    canonical: DivisorClass,
    ample_gens: Vec<DivisorClass>,
    char_p: u64,
    ks2_param: Option<i64>,
    basis_names: Vec<String>,
}

impl SurfaceModel {
    pub fn new(
        name: impl Into<String>,
        gram: Vec<Vec<i64>>,
        canonical: Vec<i64>,
        ample_gens: Vec<Vec<i64>>,
        char_p: u64,
    ) -> Result<Self> {
        Self::with_names(name, gram, canonical, ample_gens, char_p, None, None)
    }

    fn with_names(
        name: impl Into<String>,
        gram: Vec<Vec<i64>>,
        canonical: Vec<i64>,
        ample_gens: Vec<Vec<i64>>,
        char_p: u64,
        basis_names: Option<Vec<String>>,
        ks2_param: Option<i64>,
    ) -> Result<Self> {
        let name = name.into();
        let rank = gram.len();
        if rank == 0 {
            return Err(EngineError::invalid("gram matrix must be non-empty"));
        }
        if gram.iter().any(|row| row.len() != rank) {
            return Err(EngineError::invalid("gram matrix must be square"));
        }
        for i in 0..rank {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(EngineError::invalid("gram matrix must be symmetric"));
                }
            }
        }
        let gram_q: Vec<Vec<Rat>> = gram
            .iter()
            .map(|row| row.iter().map(|&e| rat_i(e)).collect())
            .collect();
        let (pos, _neg, zero) = signature_of(&gram_q);
        if pos != 1 || zero != 0 {
            return Err(EngineError::invalid(format!(
                "gram matrix of `{name}` violates the Hodge index signature (1, {}): \
                 found {pos} positive and {zero} zero eigenvalues",
                rank - 1
            )));
        }
        if canonical.len() != rank {
            return Err(EngineError::invalid(
                "canonical vector length must equal the rank",
            ));
        }
        if ample_gens.is_empty() {
            return Err(EngineError::invalid("at least one ample generator required"));
        }
        if ample_gens.iter().any(|a| a.len() != rank) {
            return Err(EngineError::invalid(
                "ample generator length must equal the rank",
            ));
        }
        if char_p != 0 && (char_p < 3 || !is_prime(char_p)) {
            return Err(EngineError::invalid(
                "char_p must be 0 or a prime >= 3",
            ));
        }
        let canonical = DivisorClass::from_ints(&canonical);
        let ample_gens: Vec<DivisorClass> =
            ample_gens.iter().map(|a| DivisorClass::from_ints(a)).collect();
        let basis_names = match basis_names {
            Some(names) => {
                if names.len() != rank {
                    return Err(EngineError::invalid(
                        "basis_names length must equal the rank",
                    ));
                }
                for n in &names {
                    let valid_ident = !n.is_empty()
                        && n.chars().next().map(|c| c.is_ascii_alphabetic() || c == '_').unwrap_or(false)
                        && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !valid_ident || n == "H" || n == "pt" || n == "K" {
                        return Err(EngineError::invalid(format!(
                            "basis name `{n}` is reserved or not a valid identifier"
                        )));
                    }
                }
                names
            }
            None => (1..=rank).map(|i| format!("e{i}")).collect(),
        };
        let model = SurfaceModel {
            name,
            rank,
            gram: gram_q,
            canonical,
            ample_gens,
            char_p,
            ks2_param,
            basis_names,
        };
        for (i, a) in model.ample_gens.iter().enumerate() {
            for b in &model.ample_gens[i..] {
                let v = model.pair(a, b).expect("validated lengths");
                if !v.is_positive() {
                    return Err(EngineError::invalid(
                        "declared ample generators must pair strictly positively \
                         (with themselves and with each other)",
                    ));
                }
            }
        }
        Ok(model)
    }

    /// The projective plane: rank 1, gram [1], K = -3h.
    pub fn p2() -> Self {
        Self::with_names(
            "p2",
            vec![vec![1]],
            vec![-3],
            vec![vec![1]],
            0,
            Some(vec!["h".into()]),
            None,
        )
        .expect("builtin preset is valid")
    }

    /// Rank-1 model with ample canonical class: gram [1], K = kappa*A
    /// where kappa^2 = `ks2`. `ks2` must be a positive perfect square in
    /// this normalized realization.
    pub fn ample_k(ks2: i64) -> Result<Self> {
        Self::ample_k_named("ample-K", ks2, 0)
    }

    /// `ample_k` with the characteristic recorded; the numeric stand-in
    /// for the Raynaud surface, whose invariants enter only through
    /// K_S^2 and p.
    pub fn raynaud(ks2: i64, p: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(EngineError::invalid(
                "raynaud preset requires a prime characteristic p >= 3",
            ));
        }
        Self::ample_k_named("raynaud", ks2, p)
    }

    fn ample_k_named(name: &str, ks2: i64, char_p: u64) -> Result<Self> {
        if ks2 < 1 {
            return Err(EngineError::invalid("KS2 must be >= 1"));
        }
        let kappa = perfect_sqrt(ks2).ok_or_else(|| {
            EngineError::invalid(format!(
                "KS2 = {ks2} is not a perfect square; the normalized rank-1 preset \
                 realizes K = kappa*A with kappa^2 = KS2. Supply a custom model JSON \
                 for non-square values."
            ))
        })?;
        Self::with_names(
            name,
            vec![vec![1]],
            vec![kappa],
            vec![vec![1]],
            char_p,
            Some(vec!["A".into()]),
            Some(ks2),
        )
    }

    /// Loads a model from its JSON document. `ks2_override` takes
    /// precedence over `params.KS2`; when either is present the model is
    /// rebuilt in the normalized rank-1 form (gram [1], K = kappa*A).
    /// The `ample-K` and `raynaud` documents require a KS2 value.
    pub fn from_json(src: &str, ks2_override: Option<i64>) -> Result<Self> {
        let doc: ModelDoc = serde_json::from_str(src)
            .map_err(|e| EngineError::invalid(format!("model JSON: {e}")))?;
        let ks2 = ks2_override.or(doc.params.ks2);
        match ks2 {
            Some(k) => {
                if doc.rank != 1 || doc.gram != vec![vec![1]] {
                    return Err(EngineError::invalid(
                        "KS2 normalization requires rank 1 and gram [[1]]",
                    ));
                }
                if k < 1 {
                    return Err(EngineError::invalid("KS2 must be >= 1"));
                }
                let kappa = perfect_sqrt(k).ok_or_else(|| {
                    EngineError::invalid(format!(
                        "KS2 = {k} is not a perfect square; supply a custom model JSON"
                    ))
                })?;
                Self::with_names(
                    doc.name,
                    doc.gram,
                    vec![kappa],
                    doc.ample_gens,
                    doc.char_p,
                    doc.basis_names,
                    Some(k),
                )
            }
            None => {
                if doc.name == "ample-K" || doc.name == "raynaud" {
                    return Err(EngineError::invalid(format!(
                        "preset `{}` requires a KS2 value (params.KS2 or --ks2)",
                        doc.name
                    )));
                }
                Self::with_names(
                    doc.name,
                    doc.gram,
                    doc.canonical,
                    doc.ample_gens,
                    doc.char_p,
                    doc.basis_names,
                    None,
                )
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    pub fn ample_gens(&self) -> &[DivisorClass] {
        &self.ample_gens
    }

    pub fn char_p(&self) -> u64 {
        self.char_p
    }

    pub fn ks2_param(&self) -> Option<i64> {
        self.ks2_param
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    /// K_S . K_S.
    pub fn ks2(&self) -> Rat {
        self.pair(&self.canonical, &self.canonical)
            .expect("canonical class has the model rank")
    }

    /// Basis vector `i` as a divisor class.
    pub fn basis_divisor(&self, i: usize) -> DivisorClass {
        let mut coeffs = vec![Rat::zero(); self.rank];
        coeffs[i] = Rat::one();
        DivisorClass::new(coeffs)
    }

    fn pair(&self, x: &DivisorClass, y: &DivisorClass) -> Option<Rat> {
        if x.rank() != self.rank || y.rank() != self.rank {
            return None;
        }
        let mut acc = Rat::zero();
        for (i, xi) in x.coeffs.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coeffs.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                acc += xi * &self.gram[i][j] * yj;
            }
        }
        Some(acc)
    }

    /// Intersection number x . y = x^T G y. Symmetric and bilinear.
    pub fn intersect(&self, x: &DivisorClass, y: &DivisorClass) -> Result<Rat> {
        self.pair(x, y).ok_or_else(|| {
            EngineError::invalid(format!(
                "divisor length mismatch: model rank {} vs {} and {}",
                self.rank,
                x.rank(),
                y.rank()
            ))
        })
    }

    /// Kleiman-style positivity against the declared ample generators:
    /// x . a > 0 for every generator a, and x . x > 0.
    pub fn is_positive_on_ample(&self, x: &DivisorClass) -> bool {
        let self_sq = match self.pair(x, x) {
            Some(v) => v,
            None => return false,
        };
        if !self_sq.is_positive() {
            return false;
        }
        self.ample_gens.iter().all(|a| {
            self.pair(x, a)
                .map(|v| v.is_positive())
                .unwrap_or(false)
        })
    }

    /// Certified vanishing of H^2(x): by duality H^2(x) is dual to
    /// H^0(K_S - x), and a class pairing strictly negatively with an
    /// ample generator has no sections. One-sided: `false` means the
    /// test is inconclusive, never that H^2 is nonzero.
    pub fn h0_vanishes(&self, x: &DivisorClass) -> bool {
        let residual = self.canonical.sub(x);
        if residual.rank() != self.rank {
            return false;
        }
        self.ample_gens.iter().any(|a| {
            self.pair(&residual, a)
                .map(|v| v.is_negative())
                .unwrap_or(false)
        })
    }

    /// Re-validates the Hodge index condition on this model's Gram
    /// matrix: exactly one positive eigenvalue.
    pub fn hodge_index_check(&self) -> bool {
        signature_of(&self.gram).0 == 1
    }

    /// Serializes the model back to the JSON document schema.
    pub fn to_json(&self) -> serde_json::Value {
        let as_i64 = |r: &Rat| -> i64 {
            // models are constructed from integer data
            r.to_integer().try_into().unwrap_or(0)
        };
        serde_json::json!({
            "name": self.name,
            "rank": self.rank,
            "gram": self.gram.iter().map(|row| row.iter().map(as_i64).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "canonical": self.canonical.coeffs().iter().map(as_i64).collect::<Vec<_>>(),
            "ample_gens": self.ample_gens.iter().map(|a| a.coeffs().iter().map(as_i64).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "char_p": self.char_p,
            "params": { "KS2": self.ks2_param },
            "basis_names": self.basis_names,
        })
    }
}

/// Exact inertia of a symmetric rational matrix: (positive, negative,
/// zero) eigenvalue counts. Errors on a non-square or asymmetric input.
pub fn gram_signature(gram: &[Vec<i64>]) -> Result<(usize, usize, usize)> {
    let n = gram.len();
    if gram.iter().any(|row| row.len() != n) {
        return Err(EngineError::invalid("matrix must be square"));
    }
    for i in 0..n {
        for j in 0..i {
            if gram[i][j] != gram[j][i] {
                return Err(EngineError::invalid("matrix must be symmetric"));
            }
        }
    }
    let q: Vec<Vec<Rat>> = gram
        .iter()
        .map(|row| row.iter().map(|&e| rat_i(e)).collect())
        .collect();
    Ok(signature_of(&q))
}

/// `true` iff the symmetric matrix has exactly one positive eigenvalue.
pub fn hodge_index_ok(gram: &[Vec<i64>]) -> Result<bool> {
    Ok(gram_signature(gram)?.0 == 1)
}

/// Inertia via the characteristic polynomial and Descartes' rule of
/// signs, which is exact on real-rooted polynomials; symmetric matrices
/// only ever reach this point.
fn signature_of(gram: &[Vec<Rat>]) -> (usize, usize, usize) {
    let n = gram.len();
    let coeffs = char_poly(gram);
    // coeffs[k] multiplies lambda^(n-k); coeffs[0] = 1
    let zero = coeffs.iter().rev().take_while(|c| c.is_zero()).count();
    let pos = descartes_sign_changes(coeffs.iter());
    // p(-lambda): flip the sign of odd-degree coefficients
    let neg = descartes_sign_changes(
        coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if (n - k) % 2 == 1 { -c } else { c.clone() })
            .collect::<Vec<_>>()
            .iter(),
    );
    debug_assert_eq!(pos + neg + zero, n);
    (pos, neg, zero)
}

fn descartes_sign_changes<'a>(coeffs: impl Iterator<Item = &'a Rat>) -> usize {
    let mut changes = 0;
    let mut last: Option<bool> = None;
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        let s = c.is_positive();
        if let Some(prev) = last {
            if prev != s {
                changes += 1;
            }
        }
        last = Some(s);
    }
    changes
}

/// Characteristic polynomial det(lambda*I - A) by the Faddeev-LeVerrier
/// recurrence, exact over the rationals. Returns [1, c1, ..., cn] with
/// p(lambda) = sum c_k lambda^(n-k).
fn char_poly(a: &[Vec<Rat>]) -> Vec<Rat> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    let mut coeffs = vec![Rat::one()];
    for k in 1..=n {
        // M <- A * M
        let mut am = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rat::zero();
                for l in 0..n {
                    acc += &a[i][l] * &m[l][j];
                }
                am[i][j] = acc;
            }
        }
        let trace: Rat = (0..n).map(|i| am[i][i].clone()).sum();
        let ck = -trace / rat_i(k as i64);
        for (i, row) in am.iter_mut().enumerate() {
            row[i] += &ck;
        }
        m = am;
        coeffs.push(ck);
    }
    coeffs
}
