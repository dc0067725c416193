//! Rank-2 bundle calculus via extensions
//! `0 -> L -> E -> L' (x) I_Z -> 0`: Whitney Chern classes, length
//! bookkeeping for the zero-dimensional subscheme Z, the dimension of
//! the classifying projective space, and the certified local-freeness
//! check. Z enters only through its length; point positions never
//! appear in any formula downstream.

use num_traits::Signed;

use crate::chow::BundleData;
use crate::error::{EngineError, Result};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::rat::{rat_i, Rat};

/// The splitting data (L, L', l(Z)).
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionData {
    sub_bundle: DivisorClass,
    quotient: DivisorClass,
    len_z: u64,
}

impl ExtensionData {
    pub fn new(sub_bundle: DivisorClass, quotient: DivisorClass, len_z: u64) -> Result<Self> {
        if sub_bundle.rank() != quotient.rank() {
            return Err(EngineError::invalid(
                "L and L' must live in the same Picard lattice",
            ));
        }
        Ok(ExtensionData {
            sub_bundle,
            quotient,
            len_z,
        })
    }

    /// c1 of the sub line bundle L.
    pub fn sub_bundle(&self) -> &DivisorClass {
        &self.sub_bundle
    }

    /// c1 of the quotient line bundle L'.
    pub fn quotient(&self) -> &DivisorClass {
        &self.quotient
    }

    /// l(Z), the length of the twisting subscheme.
    pub fn len_z(&self) -> u64 {
        self.len_z
    }
}

/// Whitney: c1 = L + L', c2 = L.L' + l(Z).
pub fn whitney_chern(model: &SurfaceModel, ext: &ExtensionData) -> Result<BundleData> {
    let pairing = model.intersect(&ext.sub_bundle, &ext.quotient)?;
    Ok(BundleData::new(
        ext.sub_bundle.add(&ext.quotient),
        pairing + rat_i(ext.len_z as i64),
    ))
}

/// Length of the zero locus of a section with codimension-2 zeros: with
/// L = O_S the Whitney identities force l((s)_0) = c2(E).
pub fn section_zero_locus_length(model: &SurfaceModel, bundle: &BundleData) -> Result<u64> {
    if bundle.c1().rank() != model.rank() {
        return Err(EngineError::invalid(
            "bundle c1 rank does not match the surface model",
        ));
    }
    let c2 = bundle.c2();
    if !c2.is_integer() {
        return Err(EngineError::invalid(format!(
            "c2 = {c2} is not an integer; no zero-scheme length is defined"
        )));
    }
    if c2.is_negative() {
        return Err(EngineError::infeasible(format!(
            "c2 = {c2} < 0: no section with codimension-2 zero locus exists \
             in this bookkeeping"
        )));
    }
    Ok(u64::try_from(c2.to_integer()).expect("checked non-negative integer"))
}

/// dim P(Ext^1(L' (x) I_Z, L)) = dim P(O_Z) = l(Z) - 1.
pub fn ext_space_dim(ext: &ExtensionData) -> Result<u64> {
    if ext.len_z == 0 {
        return Err(EngineError::infeasible(
            "l(Z) = 0: the extension locus P(O_Z) is empty",
        ));
    }
    Ok(ext.len_z - 1)
}

/// Certified vanishing of H^2(L'^{-1} (x) L): dual to H^0(K_S - (L - L'))
/// which is zero as soon as K_S - (L - L') pairs negatively with an
/// ample generator. `false` means inconclusive.
pub fn locally_free_check(model: &SurfaceModel, ext: &ExtensionData) -> bool {
    model.h0_vanishes(&ext.sub_bundle.sub(&ext.quotient))
}

/// l(Z) in the splitting recipe L' = -L - n*K_S, namely L^2 + n*(L.K_S).
pub fn recipe_length(model: &SurfaceModel, ample: &DivisorClass, n: u64) -> Result<Rat> {
    let l_sq = model.intersect(ample, ample)?;
    let l_k = model.intersect(ample, model.canonical())?;
    Ok(l_sq + rat_i(n as i64) * l_k)
}
