//! Characteristic-p curve arithmetic at the bookkeeping level: genus and
//! canonical-degree identities for the one-pointed curves entering the
//! construction, Riemann-Roch for one-point divisors, and the dimension
//! bound for the kernel of the Frobenius pullback on H^1.

use std::collections::BTreeMap;

use crate::error::{EngineError, Result};
use crate::rat::is_prime;

/// A one-pointed curve: genus, the label of the distinguished place,
/// the characteristic, and (for the Raynaud family) its (p, e)
/// parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveModel {
    pub genus: u64,
    pub place_name: String,
    pub char_p: u64,
    pub params: Option<(u64, u64)>,
}

/// r * (infinity) on a one-pointed curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OnePointDivisor {
    pub mult: i64,
}

impl OnePointDivisor {
    pub fn degree(&self) -> i64 {
        self.mult
    }
}

/// Genus (p-1)/2 of the hyperelliptic curve y^2 = x^p - a.
pub fn tate_genus(p: u64) -> Result<u64> {
    if p == 2 || !is_prime(p) {
        return Err(EngineError::invalid(format!(
            "tate genus requires an odd prime, got {p}"
        )));
    }
    Ok((p - 1) / 2)
}

/// Canonical data of the plane curve P(y^p) - y = z^(pe-1):
/// (dz) = pe(pe-3)(infinity) and hence g = pe(pe-3)/2 + 1.
pub fn raynaud_canonical(p: u64, e: u64) -> Result<(OnePointDivisor, u64)> {
    if p < 3 || !is_prime(p) {
        return Err(EngineError::invalid(format!(
            "raynaud curve requires a prime p >= 3, got {p}"
        )));
    }
    if e < 1 {
        return Err(EngineError::invalid("raynaud curve requires e >= 1"));
    }
    let pe = p
        .checked_mul(e)
        .ok_or_else(|| EngineError::invalid("p*e overflows"))?;
    if pe <= 3 {
        return Err(EngineError::infeasible(format!(
            "pe = {pe} <= 3: the canonical degree pe(pe-3) is not positive"
        )));
    }
    let deg = pe
        .checked_mul(pe - 3)
        .ok_or_else(|| EngineError::invalid("canonical degree overflows"))?;
    let genus = deg / 2 + 1;
    Ok((
        OnePointDivisor {
            mult: i64::try_from(deg)
                .map_err(|_| EngineError::invalid("canonical degree overflows"))?,
        },
        genus,
    ))
}

/// Riemann-Roch for a one-point divisor of the given degree on a genus-g
/// curve. Only the degree ranges forced by Riemann-Roch and duality are
/// answered:
///
/// * deg < 0        -> (0, g - 1 - deg)
/// * deg = 0        -> (1, g)             (the zero divisor)
/// * deg > 2g - 2   -> (deg - g + 1, 0)
/// * deg = 2g - 2   -> (g, 1)             (the canonical class)
///
/// Inside 0 < deg < 2g - 2 the pair is not determined by the degree
/// alone and the engine refuses to guess.
pub fn riemann_roch(genus: i64, deg: i64) -> Result<(i64, i64)> {
    if genus < 0 {
        return Err(EngineError::invalid("genus must be non-negative"));
    }
    let canonical_deg = 2 * genus - 2;
    if deg < 0 {
        Ok((0, genus - 1 - deg))
    } else if deg == 0 {
        Ok((1, genus))
    } else if deg > canonical_deg {
        Ok((deg - genus + 1, 0))
    } else if deg == canonical_deg {
        Ok((genus, 1))
    } else {
        Err(EngineError::AmbiguousRange(format!(
            "h^0 of a degree-{deg} divisor on a genus-{genus} curve is not \
             determined by the degree alone (window 0 < deg < {canonical_deg})"
        )))
    }
}

/// Output of [`kernel_dim_lower_bound`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelBound {
    /// h^1(C, (3-pe)(infinity)) = g - 1 + (pe - 3), the ambient space
    /// containing Ker F*.
    pub h1: i64,
    /// Whether D = (pe-3)(infinity) has positive degree.
    pub d_ample: bool,
    /// Whether the ambient h^1 meets the >= 2 target.
    pub meets_paper_bound: bool,
    pub genus: u64,
    pub divisor: OnePointDivisor,
}

/// The h^1 that contains Ker F* on the Raynaud curve with parameters
/// (p, e), for D = (pe-3)(infinity). The value bounds the kernel
/// dimension from above; the report names it "ambient h^1".
pub fn kernel_dim_lower_bound(p: u64, e: u64) -> Result<KernelBound> {
    let (_dz, genus) = raynaud_canonical(p, e)?;
    let pe = (p * e) as i64;
    let d_mult = pe - 3;
    let (_h0, h1) = riemann_roch(genus as i64, -d_mult)?;
    Ok(KernelBound {
        h1,
        d_ample: d_mult > 0,
        meets_paper_bound: h1 >= 2,
        genus,
        divisor: OnePointDivisor { mult: d_mult },
    })
}

/// Checks the witness inequality (df) >= pD at the distinguished place,
/// given the valuations the caller supplies (the engine is an inequality
/// checker, not a valuation engine). Required table keys: `y` (the
/// valuation of y at infinity) and `dz` (the coefficient of (dz) at
/// infinity). Since (df) and (dz) are both canonical divisors and (dz)
/// is supported entirely at infinity, `df_deg` must equal the `dz`
/// entry; a mismatch is rejected before the inequality is evaluated.
pub fn kernel_witness_check(
    p: u64,
    df_deg: i64,
    d: &OnePointDivisor,
    val_table: &BTreeMap<String, i64>,
) -> Result<bool> {
    if p < 3 || !is_prime(p) {
        return Err(EngineError::invalid(format!(
            "witness check requires a prime p >= 3, got {p}"
        )));
    }
    let val_y = *val_table
        .get("y")
        .ok_or_else(|| EngineError::invalid("missing valuation val_inf(y) (key `y`)"))?;
    let val_dz = *val_table
        .get("dz")
        .ok_or_else(|| EngineError::invalid("missing (dz) coefficient at infinity (key `dz`)"))?;
    if df_deg != val_dz {
        return Err(EngineError::Inconsistent(format!(
            "deg(df) = {df_deg} does not match the canonical degree {val_dz} \
             carried by (dz)"
        )));
    }
    let p = p as i64;
    Ok(p * val_y + val_dz >= p * d.mult)
}
