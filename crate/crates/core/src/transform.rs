//! Cotranslation, perspective projections and composed transforms.

use crate::error::{Error, Result};
use crate::euclid::{paravector_sub, EuclidVector, Paravector};
use crate::versor::{apply_hodge_sandwich, apply_sandwich, HodgeVersor, Versor, PRECONDITION_TOL};

/// `⋆⁻¹[T(⋆P)T̃]` with `T = exp(v/2)`; adds `g(p, v)` to the weight.
pub fn apply_cotranslation(v: &EuclidVector, p: &Paravector) -> Result<Paravector> {
    apply_hodge_sandwich(&HodgeVersor::cotranslation(v), p)
}

/// Central projection onto the plane `x · n = c` from an eye point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Perspective {
    pub eye: EuclidVector,
    pub normal: EuclidVector,
    pub offset: f64,
}

impl Perspective {
    pub fn new(eye: EuclidVector, normal: EuclidVector, offset: f64) -> Result<Self> {
        if normal.norm() == 0.0 || !normal.is_finite() {
            return Err(Error::Domain(format!("plane normal {normal} is zero")));
        }
        let persp = Perspective { eye, normal, offset };
        let a = persp.eye_distance();
        let scale = offset.abs() + normal.norm() * eye.norm();
        if a.abs() <= 1e-12 * scale.max(1.0) {
            return Err(Error::Degenerate(format!("eye {eye} lies on the plane x·n = {offset}")));
        }
        Ok(persp)
    }

    /// `a = c - n·e`, the signed offset of the plane from the eye.
    pub fn eye_distance(&self) -> f64 {
        self.offset - self.normal.dot(&self.eye)
    }

    /// `(T_e ∘ W_{n/a} ∘ T_e⁻¹)(P - w E)`.
    ///
    /// The eye is subtracted with the point's own weight, so the map is
    /// linear in `(w, p)` and agrees with `P - E` on affine points.
    pub fn apply(&self, p: &Paravector) -> Result<Paravector> {
        let eye = Paravector::affine(self.eye);
        let relative = paravector_sub(p, &eye.scaled(p.weight));
        let a = self.eye_distance();
        let shifted = apply_sandwich(&Versor::translation(&-self.eye), &relative)?;
        let projected = apply_cotranslation(&(self.normal * (1.0 / a)), &shifted)?;
        apply_sandwich(&Versor::translation(&self.eye), &projected)
    }
}

/// Weighted image of `p` on the plane `x · n = c` seen from `eye`.
///
/// Points in front of the eye get a positive weight. Points behind it get
/// a negative weight; use [`perspective_image`] for a paravector whose
/// location is the projected point in both cases.
pub fn perspective_project(eye: &Paravector, n: &EuclidVector, c: f64, p: &Paravector) -> Result<Paravector> {
    if (eye.weight - 1.0).abs() > PRECONDITION_TOL {
        return Err(Error::Domain(format!("eye {eye} is not an affine point")));
    }
    Perspective::new(eye.vector, *n, c)?.apply(p)
}

/// Like [`perspective_project`], but returns the conjugate `P̄₀` when the
/// raw weight is negative.
pub fn perspective_image(eye: &Paravector, n: &EuclidVector, c: f64, p: &Paravector) -> Result<Paravector> {
    let raw = perspective_project(eye, n, c, p)?;
    Ok(if raw.weight < 0.0 { raw.conjugate() } else { raw })
}

/// Cotranslation by the unit view direction `n`: the eye `1 - n` goes to
/// the point at infinity `-n` and the viewing frustum to a box.
pub fn pseudo_perspective(n: &EuclidVector, p: &Paravector) -> Result<Paravector> {
    if (n.norm() - 1.0).abs() > PRECONDITION_TOL {
        return Err(Error::Domain(format!("view direction {n} is not a unit vector")));
    }
    apply_cotranslation(n, p)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Transform {
    /// `ε U P Ũ`.
    Sandwich(Versor),
    /// `⋆⁻¹[T(⋆P)T̃]` with `T = exp(v/2)`.
    Cotranslation(EuclidVector),
    /// `⋆⁻¹[U'(⋆P)Ũ']`.
    HodgeSandwich(HodgeVersor),
    Perspective(Perspective),
    /// Applied in order, first element first.
    Stages(Vec<Transform>),
}

impl Transform {
    pub fn identity() -> Self {
        Transform::Sandwich(Versor::identity())
    }

    pub fn apply(&self, p: &Paravector) -> Result<Paravector> {
        match self {
            Transform::Sandwich(v) => apply_sandwich(v, p),
            Transform::Cotranslation(v) => apply_cotranslation(v, p),
            Transform::HodgeSandwich(h) => apply_hodge_sandwich(h, p),
            Transform::Perspective(persp) => persp.apply(p),
            Transform::Stages(stages) => stages.iter().try_fold(*p, |acc, t| t.apply(&acc)),
        }
    }

    /// Stage list, one element for a single transform.
    pub fn stages(&self) -> Vec<&Transform> {
        match self {
            Transform::Stages(s) => s.iter().flat_map(Transform::stages).collect(),
            other => vec![other],
        }
    }

    fn as_hodge(&self) -> Option<HodgeVersor> {
        match self {
            Transform::Cotranslation(v) => Some(HodgeVersor::cotranslation(v)),
            Transform::HodgeSandwich(h) => Some(*h),
            _ => None,
        }
    }
}

/// Fuse adjacent transforms of the same form. Sandwiches compose as
/// `U₂₁ = U₂U₁`; cotranslations and hodge sandwiches as `T₂₁ = T₂T₁`.
/// Mixed sequences stay as a stage list.
pub fn compose(transforms: &[Transform]) -> Transform {
    let mut out: Vec<Transform> = Vec::new();
    let flat = transforms.iter().flat_map(Transform::stages).cloned();
    for next in flat {
        let fused = match (out.last(), &next) {
            (Some(Transform::Sandwich(first)), Transform::Sandwich(second)) => {
                Some(Transform::Sandwich(second.then_after(first)))
            }
            (Some(prev), _) => match (prev.as_hodge(), next.as_hodge()) {
                (Some(first), Some(second)) => Some(Transform::HodgeSandwich(second.then_after(&first))),
                _ => None,
            },
            (None, _) => None,
        };
        match fused {
            Some(t) => {
                out.pop();
                out.push(t);
            }
            None => out.push(next),
        }
    }
    match out.len() {
        0 => Transform::identity(),
        1 => out.pop().unwrap(),
        _ => Transform::Stages(out),
    }
}
