//! Versors `U` acting on points by the sandwich `P' = ε U P Ũ`, their
//! hodge-conjugate forms, and the sector analysis of their action.

use crate::error::{Error, Result};
use crate::euclid::{
    embed_paravector, embed_vector, extract_paravector, omega_v, sector_minus, sector_plus, star_conjugate,
    EuclidVector, Paravector,
};
use crate::hodge::{hodge_star, hodge_star_inverse};
use crate::multivector::{Multivector, ABS_TOL, REL_TOL};

/// Tolerance for unit-length and orthogonality preconditions.
pub const PRECONDITION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VersorKind {
    Reflection,
    Rotation,
    Hyperbolic,
    Shear,
    Scale,
    Translation,
    Composite,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Versor {
    pub u: Multivector,
    /// Sandwich sign, `-1` only for reflections and their odd compositions.
    pub epsilon: f64,
    pub kind: VersorKind,
}

fn require_unit(name: &str, v: &EuclidVector) -> Result<()> {
    if (v.norm() - 1.0).abs() > PRECONDITION_TOL {
        return Err(Error::Domain(format!("{name} = {v} is not a unit vector")));
    }
    Ok(())
}

fn require_orthogonal(u: &EuclidVector, v: &EuclidVector) -> Result<()> {
    let g = u.dot(v);
    if g.abs() > PRECONDITION_TOL * (1.0 + u.norm() * v.norm()) {
        return Err(Error::Domain(format!(
            "u = {u} and v = {v} are not orthogonal (g(u, v) = {g})"
        )));
    }
    Ok(())
}

fn require_orthonormal(u: &EuclidVector, v: &EuclidVector) -> Result<()> {
    require_unit("u", u)?;
    require_unit("v", v)?;
    require_orthogonal(u, v)
}

/// Exponent of the rotation versor, `θ(u⁺v⁺ - u⁻v⁻)/2`.
pub fn rotation_generator(u: &EuclidVector, v: &EuclidVector, theta: f64) -> Multivector {
    (sector_plus(u) * sector_plus(v) - sector_minus(u) * sector_minus(v)) * (theta / 2.0)
}

/// Exponent of the hyperbolic rotation, `η(u⁻v⁺ + v⁻u⁺)/2`.
pub fn hyperbolic_generator(u: &EuclidVector, v: &EuclidVector, eta: f64) -> Multivector {
    (sector_minus(u) * sector_plus(v) + sector_minus(v) * sector_plus(u)) * (eta / 2.0)
}

/// Exponent of the shear, `t(u⁺ + u⁻)(v⁺ - v⁻)/4`.
pub fn shear_generator(u: &EuclidVector, v: &EuclidVector, t: f64) -> Multivector {
    (sector_plus(u) + sector_minus(u)) * (sector_plus(v) - sector_minus(v)) * (t / 4.0)
}

/// Exponent of the non-uniform scale, `t u⁻u⁺/2`.
pub fn scale_generator(u: &EuclidVector, t: f64) -> Multivector {
    sector_minus(u) * sector_plus(u) * (t / 2.0)
}

/// Exponent of the translation, `v/2`.
pub fn translation_generator(v: &EuclidVector) -> Multivector {
    embed_vector(v) * 0.5
}

impl Versor {
    pub fn identity() -> Self {
        Versor {
            u: Multivector::one(),
            epsilon: 1.0,
            kind: VersorKind::Composite,
        }
    }

    /// Reflection in the plane through the origin with unit normal `n`:
    /// `N = n⁺n⁻`, `ε = -1`.
    pub fn reflection(n: &EuclidVector) -> Result<Self> {
        require_unit("n", n)?;
        Ok(Versor {
            u: sector_plus(n) * sector_minus(n),
            epsilon: -1.0,
            kind: VersorKind::Reflection,
        })
    }

    /// Rotation by `theta` in the plane of the orthonormal pair `u, v`.
    ///
    /// `(u⁺v⁺)² = (u⁻v⁻)² = -1` and the two factors commute, so the
    /// exponential splits into two circular half-angle factors. The
    /// resulting matrix maps `u ↦ cos θ u - sin θ v`.
    pub fn rotation(u: &EuclidVector, v: &EuclidVector, theta: f64) -> Result<Self> {
        require_orthonormal(u, v)?;
        let (s, c) = (theta / 2.0).sin_cos();
        let plus = sector_plus(u) * sector_plus(v) * s + c;
        let minus = sector_minus(u) * sector_minus(v) * (-s) + c;
        Ok(Versor {
            u: plus * minus,
            epsilon: 1.0,
            kind: VersorKind::Rotation,
        })
    }

    /// Hyperbolic rotation by `eta` in the plane of `u, v`; both factors
    /// square to `+1`.
    pub fn hyperbolic(u: &EuclidVector, v: &EuclidVector, eta: f64) -> Result<Self> {
        require_orthonormal(u, v)?;
        let (s, c) = ((eta / 2.0).sinh(), (eta / 2.0).cosh());
        let first = sector_minus(u) * sector_plus(v) * s + c;
        let second = sector_minus(v) * sector_plus(u) * s + c;
        Ok(Versor {
            u: first * second,
            epsilon: 1.0,
            kind: VersorKind::Hyperbolic,
        })
    }

    /// Shear `p ↦ p + t p_v u`. The generator is nilpotent, so the
    /// exponential truncates after the linear term.
    pub fn shear(u: &EuclidVector, v: &EuclidVector, t: f64) -> Result<Self> {
        require_orthogonal(u, v)?;
        Ok(Versor {
            u: shear_generator(u, v, t) + 1.0,
            epsilon: 1.0,
            kind: VersorKind::Shear,
        })
    }

    /// Scale by `e^t` along the unit vector `u`; `(u⁻u⁺)² = 1`.
    pub fn scale(u: &EuclidVector, t: f64) -> Result<Self> {
        require_unit("u", u)?;
        let (s, c) = ((t / 2.0).sinh(), (t / 2.0).cosh());
        Ok(Versor {
            u: sector_minus(u) * sector_plus(u) * s + c,
            epsilon: 1.0,
            kind: VersorKind::Scale,
        })
    }

    /// Translation by `v`: `T = 1 + v/2` since `v² = 0`.
    pub fn translation(v: &EuclidVector) -> Self {
        Versor {
            u: translation_generator(v) + 1.0,
            epsilon: 1.0,
            kind: VersorKind::Translation,
        }
    }

    /// `Ũ`.
    pub fn reverse(&self) -> Multivector {
        self.u.reversion()
    }

    /// `ε U A Ũ` on an arbitrary multivector.
    pub fn sandwich(&self, a: &Multivector) -> Multivector {
        self.u * *a * self.reverse() * self.epsilon
    }

    /// Apply `other` first, then `self`.
    pub fn then_after(&self, other: &Versor) -> Versor {
        Versor {
            u: self.u * other.u,
            epsilon: self.epsilon * other.epsilon,
            kind: VersorKind::Composite,
        }
    }

    /// `U Ũ`. Equals `ε` for reflections, rotations, hyperbolic rotations,
    /// shears and scales; `1 + v` for a translation by `v`.
    pub fn norm_product(&self) -> Multivector {
        self.u * self.reverse()
    }
}

/// `ε U P Ũ`, read back as a paravector.
pub fn apply_sandwich(versor: &Versor, p: &Paravector) -> Result<Paravector> {
    extract_paravector(&versor.sandwich(&embed_paravector(p)))
}

/// Hodge-conjugate form `U' = λ U*` of a versor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HodgeVersor {
    pub u_prime: Multivector,
    pub lambda: f64,
}

impl HodgeVersor {
    pub fn identity() -> Self {
        HodgeVersor {
            u_prime: Multivector::one(),
            lambda: 1.0,
        }
    }

    /// Cotranslation operator `T = exp(v/2)` used as a hodge versor.
    pub fn cotranslation(v: &EuclidVector) -> Self {
        HodgeVersor {
            u_prime: translation_generator(v) + 1.0,
            lambda: 1.0,
        }
    }

    /// `⋆⁻¹[U' A Ũ']`.
    pub fn hodge_sandwich(&self, a: &Multivector) -> Result<Multivector> {
        let starred = hodge_star(a)?;
        hodge_star_inverse(&(self.u_prime * starred * self.u_prime.reversion()))
    }

    /// Apply `other` first, then `self`.
    pub fn then_after(&self, other: &HodgeVersor) -> HodgeVersor {
        HodgeVersor {
            u_prime: self.u_prime * other.u_prime,
            lambda: self.lambda * other.lambda,
        }
    }
}

/// `⋆⁻¹[U'(⋆P)Ũ']`, read back as a paravector.
pub fn apply_hodge_sandwich(h: &HodgeVersor, p: &Paravector) -> Result<Paravector> {
    extract_paravector(&h.hodge_sandwich(&embed_paravector(p))?)
}

/// Residual and scale of `Ũ* Ω_V U* = λ² Ω_V`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeCondition {
    pub lambda_squared: f64,
    pub residual: f64,
}

/// Evaluate `Ũ* Ω_V U*` against the best multiple of `Ω_V`.
pub fn volume_condition(u: &Multivector) -> VolumeCondition {
    let us = star_conjugate(u);
    let omega = omega_v();
    let image = us.reversion() * omega * us;
    let dot = |a: &Multivector, b: &Multivector| a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x * y).sum::<f64>();
    let lambda_squared = dot(&image, &omega) / dot(&omega, &omega);
    let residual = (image - omega * lambda_squared).max_abs();
    VolumeCondition {
        lambda_squared,
        residual,
    }
}

/// `U' = λ U*` with `λ > 0` fixed by `Ũ* Ω_V U* = λ² Ω_V`.
pub fn hodge_conjugate_versor(versor: &Versor) -> Result<HodgeVersor> {
    let cond = volume_condition(&versor.u);
    let tol = ABS_TOL + REL_TOL * versor.u.max_abs().powi(2);
    if cond.residual > tol || cond.lambda_squared <= 0.0 {
        return Err(Error::NotHodgeCompatible {
            residual: cond.residual,
        });
    }
    let lambda = cond.lambda_squared.sqrt();
    Ok(HodgeVersor {
        u_prime: star_conjugate(&versor.u) * lambda,
        lambda,
    })
}

/// How a versor treats points whose vector part lies in one sector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorReport {
    /// Largest coefficient outside `span{1, e_i^+}` over the `𝒫⁺` probes.
    pub plus_leak: f64,
    /// Largest coefficient outside `span{1, e_i^-}` over the `𝒫⁻` probes.
    pub minus_leak: f64,
}

impl SectorReport {
    pub fn preserves_sectors(&self, tol: f64) -> bool {
        self.plus_leak <= tol && self.minus_leak <= tol
    }
}

fn sector_probes() -> [EuclidVector; 4] {
    [
        EuclidVector::new(1.0, 0.0, 0.0),
        EuclidVector::new(0.0, 1.0, 0.0),
        EuclidVector::new(0.0, 0.0, 1.0),
        EuclidVector::new(0.37, -0.81, 0.52),
    ]
}

pub fn sector_image(versor: &Versor) -> SectorReport {
    let leak = |sector: fn(&EuclidVector) -> Multivector, keep: fn(usize) -> Multivector| {
        sector_probes()
            .iter()
            .map(|p| {
                let image = versor.sandwich(&(sector(p) + 1.0));
                let mut off = image - Multivector::scalar(image.scalar_part());
                for i in 1..=3 {
                    let basis = keep(i);
                    let c = image.coeffs()[basis.homogeneous_index()];
                    off -= basis * c;
                }
                off.max_abs()
            })
            .fold(0.0, f64::max)
    };
    SectorReport {
        plus_leak: leak(sector_plus, Multivector::e_plus),
        minus_leak: leak(sector_minus, Multivector::e_minus),
    }
}

impl Multivector {
    // Index of the single nonzero coefficient of a basis blade.
    fn homogeneous_index(&self) -> usize {
        self.coeffs().iter().position(|&c| c != 0.0).unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64, z: f64) -> Paravector {
        Paravector::affine(EuclidVector::new(x, y, z))
    }

    fn close(a: &Paravector, b: &Paravector) -> bool {
        a.to_array()
            .iter()
            .zip(b.to_array())
            .all(|(x, y)| (x - y).abs() <= 1e-12 + 1e-9 * x.abs().max(y.abs()))
    }

    const X: EuclidVector = EuclidVector::new(1.0, 0.0, 0.0);
    const Y: EuclidVector = EuclidVector::new(0.0, 1.0, 0.0);
    const Z: EuclidVector = EuclidVector::new(0.0, 0.0, 1.0);

    #[test]
    fn reflection_examples() {
        let n = Versor::reflection(&Z).unwrap();
        assert!(close(
            &apply_sandwich(&n, &pt(0.0, 0.0, 1.0)).unwrap(),
            &pt(0.0, 0.0, -1.0)
        ));
        assert!(close(
            &apply_sandwich(&n, &pt(1.0, 0.0, 0.0)).unwrap(),
            &pt(1.0, 0.0, 0.0)
        ));
        assert!(n.sandwich(&Multivector::one()).approx_eq(&Multivector::one()));
        assert!(Versor::reflection(&EuclidVector::new(0.0, 0.0, 2.0)).is_err());
    }

    #[test]
    fn rotation_examples() {
        let r = Versor::rotation(&X, &Y, 0.83).unwrap();
        assert!(close(
            &apply_sandwich(&r, &pt(0.0, 0.0, 1.0)).unwrap(),
            &pt(0.0, 0.0, 1.0)
        ));
        let id = Versor::rotation(&X, &Y, 0.0).unwrap();
        assert!(close(
            &apply_sandwich(&id, &pt(0.3, 2.0, -1.0)).unwrap(),
            &pt(0.3, 2.0, -1.0)
        ));
        let half = Versor::rotation(&X, &Y, std::f64::consts::PI).unwrap();
        let got = apply_sandwich(&half, &pt(1.0, 0.0, 0.0)).unwrap();
        assert!((got.vector - EuclidVector::new(-1.0, 0.0, 0.0)).norm() < 1e-12);
        assert!(Versor::rotation(&X, &X, 1.0).is_err());
    }

    #[test]
    fn hyperbolic_examples() {
        let eta = 0.6;
        let h = Versor::hyperbolic(&X, &Y, eta).unwrap();
        let got = apply_sandwich(&h, &pt(1.0, 0.0, 0.0)).unwrap();
        assert!(close(&got, &pt(eta.cosh(), eta.sinh(), 0.0)), "{got}");
        assert!(close(
            &apply_sandwich(&h, &pt(0.0, 0.0, 1.0)).unwrap(),
            &pt(0.0, 0.0, 1.0)
        ));
    }

    #[test]
    fn shear_examples() {
        let s = Versor::shear(&X, &Y, 2.0).unwrap();
        assert!(close(
            &apply_sandwich(&s, &pt(0.0, 1.0, 0.0)).unwrap(),
            &pt(2.0, 1.0, 0.0)
        ));
        assert!(close(
            &apply_sandwich(&s, &pt(0.0, 0.0, 1.0)).unwrap(),
            &pt(0.0, 0.0, 1.0)
        ));
        assert!(Versor::shear(&X, &EuclidVector::new(1.0, 1.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn scale_examples() {
        let d = Versor::scale(&X, 2f64.ln()).unwrap();
        assert!(close(
            &apply_sandwich(&d, &pt(1.0, 1.0, 0.0)).unwrap(),
            &pt(2.0, 1.0, 0.0)
        ));
        let id = Versor::scale(&X, 0.0).unwrap();
        assert!(close(
            &apply_sandwich(&id, &pt(1.0, 1.0, 0.0)).unwrap(),
            &pt(1.0, 1.0, 0.0)
        ));
    }

    #[test]
    fn translation_examples() {
        let v = EuclidVector::new(1.0, 2.0, 3.0);
        let t = Versor::translation(&v);
        assert!(close(
            &apply_sandwich(&t, &Paravector::origin()).unwrap(),
            &pt(1.0, 2.0, 3.0)
        ));
        let half = Versor::translation(&(v * 1.0));
        assert!((half.u * half.u).approx_eq(&embed_paravector(&pt(1.0, 2.0, 3.0))));
    }

    #[test]
    fn closed_forms_match_series() {
        let u = EuclidVector::new(0.6, 0.8, 0.0);
        let v = EuclidVector::new(-0.8, 0.6, 0.0);
        let cases = [
            (Versor::rotation(&u, &v, 1.1).unwrap(), rotation_generator(&u, &v, 1.1)),
            (
                Versor::hyperbolic(&u, &v, 0.4).unwrap(),
                hyperbolic_generator(&u, &v, 0.4),
            ),
            (Versor::shear(&u, &v, -1.3).unwrap(), shear_generator(&u, &v, -1.3)),
            (Versor::scale(&u, 0.9).unwrap(), scale_generator(&u, 0.9)),
            (Versor::translation(&u), translation_generator(&u)),
        ];
        for (versor, generator) in cases {
            let series = generator.exp_series(1e-17, 80).unwrap();
            assert!(versor.u.approx_eq(&series), "{:?}", versor.kind);
        }
    }

    #[test]
    fn signed_norm_is_one() {
        let u = EuclidVector::new(0.6, 0.8, 0.0);
        let v = EuclidVector::new(-0.8, 0.6, 0.0);
        for versor in [
            Versor::reflection(&u).unwrap(),
            Versor::rotation(&u, &v, 1.1).unwrap(),
            Versor::hyperbolic(&u, &v, 0.4).unwrap(),
            Versor::shear(&u, &v, -1.3).unwrap(),
            Versor::scale(&u, 0.9).unwrap(),
        ] {
            let n = versor.norm_product() * versor.epsilon;
            assert!(n.approx_eq(&Multivector::one()), "{:?}", versor.kind);
        }
        // N Ñ = n⁺(n⁻n⁻)n⁺ = -1
        let n = Versor::reflection(&u).unwrap();
        assert!(n.norm_product().approx_eq(&Multivector::scalar(-1.0)));
        // T T̃ = (1 + v/2)² = 1 + v
        let t = Versor::translation(&u);
        assert!(t.norm_product().approx_eq(&(embed_vector(&u) + 1.0)));
    }

    #[test]
    fn hodge_form_matches_sandwich() {
        let u = EuclidVector::new(0.0, 0.6, 0.8);
        let v = EuclidVector::new(1.0, 0.0, 0.0);
        let versors = [
            Versor::reflection(&u).unwrap(),
            Versor::rotation(&u, &v, 0.9).unwrap(),
            Versor::hyperbolic(&u, &v, -0.5).unwrap(),
            Versor::shear(&u, &v, 1.7).unwrap(),
            Versor::scale(&u, 0.8).unwrap(),
        ];
        let p = Paravector::new(1.3, EuclidVector::new(0.2, -1.1, 2.4));
        for versor in versors {
            let h = hodge_conjugate_versor(&versor).unwrap();
            let direct = apply_sandwich(&versor, &p).unwrap();
            let dual = apply_hodge_sandwich(&h, &p).unwrap();
            assert!(close(&direct, &dual), "{:?}: {direct} vs {dual}", versor.kind);
        }
    }

    #[test]
    fn sector_behaviour() {
        let u = X;
        let v = Y;
        assert!(sector_image(&Versor::reflection(&Z).unwrap()).preserves_sectors(1e-12));
        assert!(sector_image(&Versor::rotation(&u, &v, 0.4).unwrap()).preserves_sectors(1e-12));
        assert!(sector_image(&Versor::identity()).preserves_sectors(1e-12));
        for versor in [
            Versor::hyperbolic(&u, &v, 0.4).unwrap(),
            Versor::shear(&u, &v, 0.4).unwrap(),
            Versor::scale(&u, 0.4).unwrap(),
            Versor::translation(&u),
        ] {
            let report = sector_image(&versor);
            assert!(report.plus_leak > 1e-6 && report.minus_leak > 1e-6, "{:?}", versor.kind);
        }
    }
}
