//! The Euclidean model inside Cl(3,3): null vectors `e_i = ½(e_i^+ + e_i^-)`,
//! covectors `e_i^* = ½(e_i^+ - e_i^-)`, weighted points as paravectors and
//! the pseudoscalars used for duality.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::blade::BladeMask;
use crate::error::{Error, Result};
use crate::multivector::{Multivector, ABS_TOL, REL_TOL};

/// Components `(v¹, v², v³)` of a vector of V₃ in the orthonormal basis.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct EuclidVector(pub [f64; 3]);

impl EuclidVector {
    pub const ZERO: EuclidVector = EuclidVector([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        EuclidVector([x, y, z])
    }

    /// Unit vector along axis `i` in 1..=3.
    pub fn axis(i: usize) -> Self {
        let mut v = [0.0; 3];
        v[i - 1] = 1.0;
        EuclidVector(v)
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn cross(&self, other: &Self) -> Self {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        EuclidVector([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn normalized(&self) -> Self {
        *self * (1.0 / self.norm())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl Index<usize> for EuclidVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for EuclidVector {
    type Output = EuclidVector;

    fn add(self, rhs: Self) -> Self {
        EuclidVector([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for EuclidVector {
    type Output = EuclidVector;

    fn sub(self, rhs: Self) -> Self {
        EuclidVector([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl Neg for EuclidVector {
    type Output = EuclidVector;

    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Mul<f64> for EuclidVector {
    type Output = EuclidVector;

    fn mul(self, s: f64) -> Self {
        EuclidVector(self.0.map(|c| c * s))
    }
}

impl fmt::Display for EuclidVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// Weighted point `w + p⃗`. Affine points have `w = 1`; `w = 0` is a
/// direction (point at infinity).
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Paravector {
    pub weight: f64,
    pub vector: EuclidVector,
}

impl Paravector {
    pub const fn new(weight: f64, vector: EuclidVector) -> Self {
        Paravector { weight, vector }
    }

    pub const fn affine(vector: EuclidVector) -> Self {
        Paravector { weight: 1.0, vector }
    }

    pub const fn origin() -> Self {
        Paravector::affine(EuclidVector::ZERO)
    }

    /// `(w, x, y, z)`.
    pub fn to_array(&self) -> [f64; 4] {
        let [x, y, z] = self.vector.0;
        [self.weight, x, y, z]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Paravector::new(a[0], EuclidVector([a[1], a[2], a[3]]))
    }

    /// Clifford conjugate `w - p⃗`.
    pub fn conjugate(&self) -> Self {
        Paravector::new(self.weight, -self.vector)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Paravector::new(self.weight * s, self.vector * s)
    }

    /// Location of the weighted point: `p⃗ / |w|`, or `None` at infinity.
    pub fn location(&self) -> Option<EuclidVector> {
        (self.weight != 0.0).then(|| self.vector * (1.0 / self.weight.abs()))
    }
}

impl fmt::Display for Paravector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}", self.weight, self.vector)
    }
}

/// Componentwise `(w_P - w_Q, p⃗ - q⃗)`.
pub fn paravector_sub(p: &Paravector, q: &Paravector) -> Paravector {
    Paravector::new(p.weight - q.weight, p.vector - q.vector)
}

/// Result of [`normalize_point`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormalizedPoint {
    /// `(sign(w), p⃗ / |w|)`.
    Finite(Paravector),
    /// Weight zero: the point at infinity in this direction.
    AtInfinity(EuclidVector),
}

impl NormalizedPoint {
    pub fn finite(self) -> Option<Paravector> {
        match self {
            NormalizedPoint::Finite(p) => Some(p),
            NormalizedPoint::AtInfinity(_) => None,
        }
    }
}

pub fn normalize_point(p: &Paravector) -> NormalizedPoint {
    if p.weight == 0.0 {
        return NormalizedPoint::AtInfinity(p.vector);
    }
    let scale = p.weight.abs();
    NormalizedPoint::Finite(Paravector::new(p.weight.signum(), p.vector * (1.0 / scale)))
}

/// `Σ vⁱ e_i` with `e_i = ½(e_i^+ + e_i^-)`.
pub fn embed_vector(v: &EuclidVector) -> Multivector {
    let mut m = Multivector::zero();
    for i in 0..3 {
        m.set(BladeMask::plus(i + 1), 0.5 * v.0[i]);
        m.set(BladeMask::minus(i + 1), 0.5 * v.0[i]);
    }
    m
}

/// `Σ vᵢ e_i^*` with `e_i^* = ½(e_i^+ - e_i^-)`.
pub fn embed_covector(v: &EuclidVector) -> Multivector {
    let mut m = Multivector::zero();
    for i in 0..3 {
        m.set(BladeMask::plus(i + 1), 0.5 * v.0[i]);
        m.set(BladeMask::minus(i + 1), -0.5 * v.0[i]);
    }
    m
}

/// Positive-sector copy `v⁺ = vⁱ e_i^+`.
pub fn sector_plus(v: &EuclidVector) -> Multivector {
    let mut m = Multivector::zero();
    for i in 0..3 {
        m.set(BladeMask::plus(i + 1), v.0[i]);
    }
    m
}

/// Negative-sector copy `v⁻ = vⁱ e_i^-`.
pub fn sector_minus(v: &EuclidVector) -> Multivector {
    let mut m = Multivector::zero();
    for i in 0..3 {
        m.set(BladeMask::minus(i + 1), v.0[i]);
    }
    m
}

/// `I⁺ = e₁⁺e₂⁺e₃⁺`.
pub fn i_plus() -> Multivector {
    Multivector::e_plus(1) * Multivector::e_plus(2) * Multivector::e_plus(3)
}

/// `I⁻ = e₁⁻e₂⁻e₃⁻`.
pub fn i_minus() -> Multivector {
    Multivector::e_minus(1) * Multivector::e_minus(2) * Multivector::e_minus(3)
}

/// `I = I⁺I⁻`, the volume element of `V₃ ⊕ V₃*`.
pub fn pseudoscalar() -> Multivector {
    i_plus() * i_minus()
}

/// Volume element of V₃, `Ω_V = e₁e₂e₃`.
pub fn omega_v() -> Multivector {
    let e = |i| embed_vector(&EuclidVector::axis(i));
    e(1) * e(2) * e(3)
}

/// `Ω_{V*} = e₁^* e₂^* e₃^*`.
pub fn omega_v_star() -> Multivector {
    let e = |i| embed_covector(&EuclidVector::axis(i));
    e(1) * e(2) * e(3)
}

/// `I⁺ A (I⁺)⁻¹`; sends embedded vectors to covectors. `(I⁺)⁻¹ = -I⁺`.
pub fn star_conjugate(a: &Multivector) -> Multivector {
    let ip = i_plus();
    -(ip * *a * ip)
}

/// `w + Σ pⁱ e_i`.
pub fn embed_paravector(p: &Paravector) -> Multivector {
    embed_vector(&p.vector) + p.weight
}

fn residue_tolerance(a: &Multivector) -> f64 {
    ABS_TOL + REL_TOL * a.max_abs()
}

/// Read back a weighted point. Every direction except the scalar and the
/// embedded vectors `e_i` must vanish.
pub fn extract_paravector(a: &Multivector) -> Result<Paravector> {
    // overflowed products leave NaN behind, which max_abs would skip
    if !a.is_finite() {
        return Err(Error::NonParavectorResidue { residue: f64::INFINITY });
    }
    let tol = residue_tolerance(a);
    let residue = a.grades(&[2, 3, 4, 5, 6]).max_abs();
    if residue > tol {
        return Err(Error::NonParavectorResidue { residue });
    }
    let mut v = [0.0; 3];
    let mut covector = 0.0f64;
    for i in 0..3 {
        let plus = a.get(BladeMask::plus(i + 1));
        let minus = a.get(BladeMask::minus(i + 1));
        covector = covector.max((plus - minus).abs());
        v[i] = 2.0 * plus;
    }
    if covector > tol {
        return Err(Error::CovectorResidue { residue: covector });
    }
    let v = EuclidVector(v);
    if !v.is_finite() {
        return Err(Error::NonParavectorResidue { residue: f64::INFINITY });
    }
    Ok(Paravector::new(a.scalar_part(), v))
}
