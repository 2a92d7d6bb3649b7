//! Hodge duality against the Euclidean volume element `Ω_V = e₁e₂e₃`.
//!
//! The star is defined on wedges of sector generators `x = e_i^σ`:
//!
//! ```text
//! ⋆1 = Ω_V
//! ⋆(x₁ ∧ … ∧ x_k) = 2^k σ₁⋯σ_k  x_k · ( … (x₁ · Ω_V))      k = 1, 2, 3
//! ```
//!
//! and extended linearly. Every element of grade at most three is a sum of
//! such wedges, so the star is defined there; higher grades are rejected.
//! On the exterior algebra of V₃ it maps grade `k` to grade `3 - k` and is
//! its own inverse.

use once_cell::sync::Lazy;

use crate::blade::{BladeMask, BLADES};
use crate::error::{Error, Result};
use crate::euclid::{omega_v, pseudoscalar, star_conjugate};
use crate::multivector::{Multivector, ABS_TOL, REL_TOL};

/// Grade inside Λ(V₃).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EuclidGrade(u8);

impl EuclidGrade {
    pub fn new(k: usize) -> Option<Self> {
        (k <= 3).then_some(EuclidGrade(k as u8))
    }

    pub fn get(self) -> usize {
        usize::from(self.0)
    }

    /// Grade of the Hodge dual.
    pub fn dual(self) -> Self {
        EuclidGrade(3 - self.0)
    }
}

static STAR_OF_BLADE: Lazy<Vec<Option<Multivector>>> = Lazy::new(|| {
    let omega = omega_v();
    BladeMask::iter_all()
        .map(|mask| {
            let k = mask.grade();
            if k > 3 {
                return None;
            }
            let mut acc = omega;
            let mut factor = 1.0;
            for bit in 0..6 {
                if mask.bits() & (1 << bit) == 0 {
                    continue;
                }
                let generator = Multivector::blade(BladeMask::new(1 << bit).unwrap(), 1.0);
                let sigma = if bit < 3 { 1.0 } else { -1.0 };
                acc = Multivector::contract_unchecked(&generator, &acc);
                factor *= 2.0 * sigma;
            }
            Some(acc * factor)
        })
        .collect()
});

/// Hodge star. Fails when `a` carries grades 4 to 6.
pub fn hodge_star(a: &Multivector) -> Result<Multivector> {
    let residue = a.grades(&[4, 5, 6]).max_abs();
    if residue > ABS_TOL + REL_TOL * a.max_abs() {
        return Err(Error::HodgeDomain { residue });
    }
    let table = &*STAR_OF_BLADE;
    let mut out = Multivector::zero();
    for (i, &c) in a.coeffs().iter().enumerate().take(BLADES) {
        if c == 0.0 {
            continue;
        }
        if let Some(image) = &table[i] {
            out += *image * c;
        }
    }
    Ok(out)
}

/// Inverse star; `(-1)^{k(3-k)} = 1` for every `k`, so it equals the star.
pub fn hodge_star_inverse(a: &Multivector) -> Result<Multivector> {
    hodge_star(a)
}

/// `✠A_k = ⟨Ã_k I⟩_{6-k}` for homogeneous `A_k`.
pub fn maltese_dual(a: &Multivector) -> Result<Multivector> {
    let k = a.homogeneous_grade().ok_or(Error::NotHomogeneous { expected: "k" })?;
    Ok((a.reversion() * pseudoscalar()).grade(6 - k))
}

/// The single-expression form `⟨Ã*_k Ω_V⟩_{3-k}` for homogeneous `A_k`.
///
/// Every contraction against a null `e_i` contributes ½, so this equals
/// `2^{-k} ⋆A_k`.
pub fn hodge_star_collected(a: &Multivector) -> Result<Multivector> {
    let k = a.homogeneous_grade().ok_or(Error::NotHomogeneous { expected: "k" })?;
    if k > 3 {
        return Err(Error::HodgeDomain { residue: a.max_abs() });
    }
    Ok((star_conjugate(a).reversion() * omega_v()).grade(3 - k))
}

/// `2³ (⋆A)^* ∧ Ω_V` with the collected star; equals `✠A` when `A` has no
/// covector factors.
pub fn maltese_via_star(a: &Multivector) -> Result<Multivector> {
    let star = hodge_star_collected(a)?;
    Ok(star_conjugate(&star).outer_product(&omega_v()) * 8.0)
}
