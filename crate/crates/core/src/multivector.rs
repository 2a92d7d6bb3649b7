//! Dense multivectors of Cl(3,3) and the basic products on them.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};

use once_cell::sync::Lazy;

use crate::blade::{blade_product_in, BladeMask, Signature, BLADES};
use crate::error::{Error, Result};

/// Highest grade in the algebra.
pub const MAX_GRADE: usize = 6;

/// Absolute part of the coefficient tolerance.
pub const ABS_TOL: f64 = 1e-12;
/// Relative part of the coefficient tolerance.
pub const REL_TOL: f64 = 1e-9;

/// `|a - b| <= 1e-12 + 1e-9 * max(|a|, |b|)`.
pub fn coeff_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= ABS_TOL + REL_TOL * a.abs().max(b.abs())
}

static CAYLEY: Lazy<Vec<(i8, u8)>> = Lazy::new(|| {
    let sig = Signature::CL33;
    let mut table = Vec::with_capacity(BLADES * BLADES);
    for a in BladeMask::iter_all() {
        for b in BladeMask::iter_all() {
            let (s, c) = blade_product_in(&sig, a, b);
            table.push((s, c.bits()));
        }
    }
    table
});

#[derive(Clone, Copy, PartialEq)]
pub struct Multivector {
    coeffs: [f64; BLADES],
}

impl Default for Multivector {
    fn default() -> Self {
        Self::zero()
    }
}

impl Multivector {
    pub const fn zero() -> Self {
        Multivector { coeffs: [0.0; BLADES] }
    }

    pub fn one() -> Self {
        Self::scalar(1.0)
    }

    pub fn scalar(s: f64) -> Self {
        Self::blade(BladeMask::SCALAR, s)
    }

    pub fn blade(mask: BladeMask, coeff: f64) -> Self {
        let mut m = Self::zero();
        m.coeffs[mask.index()] = coeff;
        m
    }

    pub fn from_coeffs(coeffs: [f64; BLADES]) -> Self {
        Multivector { coeffs }
    }

    /// `e_i^+` for `i` in 1..=3.
    pub fn e_plus(i: usize) -> Self {
        Self::blade(BladeMask::plus(i), 1.0)
    }

    /// `e_i^-` for `i` in 1..=3.
    pub fn e_minus(i: usize) -> Self {
        Self::blade(BladeMask::minus(i), 1.0)
    }

    pub fn coeffs(&self) -> &[f64; BLADES] {
        &self.coeffs
    }

    pub fn get(&self, mask: BladeMask) -> f64 {
        self.coeffs[mask.index()]
    }

    pub fn set(&mut self, mask: BladeMask, value: f64) {
        self.coeffs[mask.index()] = value;
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    fn map_by_grade(&self, f: impl Fn(usize) -> f64) -> Self {
        let mut out = *self;
        for mask in BladeMask::iter_all() {
            out.coeffs[mask.index()] *= f(mask.grade());
        }
        out
    }

    /// `⟨A⟩_k`, with `k` checked.
    pub fn grade_project(&self, k: usize) -> Result<Self> {
        if k > MAX_GRADE {
            return Err(Error::GradeOutOfRange(k));
        }
        Ok(self.grade(k))
    }

    /// `⟨A⟩_k`. Grades above 6 are empty.
    pub fn grade(&self, k: usize) -> Self {
        self.map_by_grade(|g| if g == k { 1.0 } else { 0.0 })
    }

    /// Sum of the listed grade parts.
    pub fn grades(&self, ks: &[usize]) -> Self {
        self.map_by_grade(|g| if ks.contains(&g) { 1.0 } else { 0.0 })
    }

    /// Grades carrying a coefficient whose magnitude exceeds `tol`.
    pub fn grades_present(&self, tol: f64) -> Vec<usize> {
        let mut seen = [false; MAX_GRADE + 1];
        for mask in BladeMask::iter_all() {
            if self.coeffs[mask.index()].abs() > tol {
                seen[mask.grade()] = true;
            }
        }
        (0..=MAX_GRADE).filter(|&k| seen[k]).collect()
    }

    /// The single grade of a homogeneous element; `None` for mixed input.
    /// Zero reports grade 0.
    pub fn homogeneous_grade(&self) -> Option<usize> {
        match self.grades_present(0.0).as_slice() {
            [] => Some(0),
            [k] => Some(*k),
            _ => None,
        }
    }

    /// `(-1)^k` on grade `k`.
    pub fn grade_involution(&self) -> Self {
        self.map_by_grade(|k| if k % 2 == 0 { 1.0 } else { -1.0 })
    }

    /// `(-1)^{k(k-1)/2}` on grade `k`.
    pub fn reversion(&self) -> Self {
        self.map_by_grade(|k| {
            if (k * (k.saturating_sub(1)) / 2) % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        })
    }

    /// Composition of grade involution and reversion.
    pub fn conjugation(&self) -> Self {
        self.reversion().grade_involution()
    }

    pub fn geometric_product(&self, other: &Self) -> Self {
        let table = &*CAYLEY;
        let mut out = [0.0; BLADES];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let row = &table[i * BLADES..(i + 1) * BLADES];
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                let (s, c) = row[j];
                out[usize::from(c)] += f64::from(s) * a * b;
            }
        }
        Multivector { coeffs: out }
    }

    /// Geometric product under an arbitrary signature. Slow; used to check
    /// the defining relations against perturbed signatures.
    pub fn geometric_product_in(&self, other: &Self, sig: &Signature) -> Self {
        let mut out = [0.0; BLADES];
        for a in BladeMask::iter_all() {
            let ca = self.coeffs[a.index()];
            if ca == 0.0 {
                continue;
            }
            for b in BladeMask::iter_all() {
                let cb = other.coeffs[b.index()];
                if cb == 0.0 {
                    continue;
                }
                let (s, c) = blade_product_in(sig, a, b);
                out[c.index()] += f64::from(s) * ca * cb;
            }
        }
        Multivector { coeffs: out }
    }

    /// `Σ_{r,s} ⟨A_r B_s⟩_{r+s}`.
    pub fn outer_product(&self, other: &Self) -> Self {
        let table = &*CAYLEY;
        let mut out = [0.0; BLADES];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                // Blades with a shared generator contribute nothing of grade r + s.
                if b == 0.0 || i & j != 0 {
                    continue;
                }
                let (s, c) = table[i * BLADES + j];
                out[usize::from(c)] += f64::from(s) * a * b;
            }
        }
        Multivector { coeffs: out }
    }

    /// `v · A = Σ_k ½(v A_k - (-1)^k A_k v)` for a grade-1 `v`.
    pub fn vector_contract(v: &Self, a: &Self) -> Result<Self> {
        if !matches!(v.homogeneous_grade(), Some(0 | 1)) || v.grade(0).norm() != 0.0 {
            return Err(Error::NotHomogeneous { expected: "1" });
        }
        Ok(Self::contract_unchecked(v, a))
    }

    pub(crate) fn contract_unchecked(v: &Self, a: &Self) -> Self {
        let mut out = Self::zero();
        for k in 0..=MAX_GRADE {
            let ak = a.grade(k);
            if ak.is_exactly_zero() {
                continue;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            out += (v * &ak - ak * *v * sign) * 0.5;
        }
        out
    }

    /// Power series `Σ Aⁿ/n!`, stopped once a term's norm drops below `tol`.
    pub fn exp_series(&self, tol: f64, max_terms: usize) -> Result<Self> {
        let mut sum = Self::one();
        let mut term = Self::one();
        for n in 1..=max_terms {
            term = term.geometric_product(self) * (1.0 / n as f64);
            sum += term;
            if term.norm() < tol {
                return Ok(sum);
            }
        }
        Err(Error::NoConvergence { max_terms })
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Per-coefficient comparison at the crate tolerance.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .all(|(&a, &b)| coeff_close(a, b))
    }

    /// Comparison with an explicit absolute tolerance.
    pub fn approx_eq_abs(&self, other: &Self, tol: f64) -> bool {
        (*self - *other).max_abs() <= tol
    }

    /// Zero every coefficient whose magnitude is at most `tol`.
    pub fn chop(&self, tol: f64) -> Self {
        let mut out = *self;
        for c in out.coeffs.iter_mut() {
            if c.abs() <= tol {
                *c = 0.0;
            }
        }
        out
    }
}

impl Index<BladeMask> for Multivector {
    type Output = f64;

    fn index(&self, mask: BladeMask) -> &f64 {
        &self.coeffs[mask.index()]
    }
}

impl Add for Multivector {
    type Output = Multivector;

    fn add(mut self, rhs: Multivector) -> Multivector {
        self += rhs;
        self
    }
}

impl AddAssign for Multivector {
    fn add_assign(&mut self, rhs: Multivector) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += b;
        }
    }
}

impl Sub for Multivector {
    type Output = Multivector;

    fn sub(mut self, rhs: Multivector) -> Multivector {
        self -= rhs;
        self
    }
}

impl SubAssign for Multivector {
    fn sub_assign(&mut self, rhs: Multivector) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= b;
        }
    }
}

impl Neg for Multivector {
    type Output = Multivector;

    fn neg(self) -> Multivector {
        self * -1.0
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;

    fn mul(mut self, rhs: f64) -> Multivector {
        for c in self.coeffs.iter_mut() {
            *c *= rhs;
        }
        self
    }
}

impl Mul<Multivector> for f64 {
    type Output = Multivector;

    fn mul(self, rhs: Multivector) -> Multivector {
        rhs * self
    }
}

impl Mul for Multivector {
    type Output = Multivector;

    fn mul(self, rhs: Multivector) -> Multivector {
        self.geometric_product(&rhs)
    }
}

impl Mul<&Multivector> for &Multivector {
    type Output = Multivector;

    fn mul(self, rhs: &Multivector) -> Multivector {
        self.geometric_product(rhs)
    }
}

impl Add<f64> for Multivector {
    type Output = Multivector;

    fn add(mut self, rhs: f64) -> Multivector {
        self.coeffs[0] += rhs;
        self
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for mask in BladeMask::iter_all() {
            let c = self.coeffs[mask.index()];
            if c == 0.0 {
                continue;
            }
            if wrote {
                f.write_str(" + ")?;
            }
            if mask == BladeMask::SCALAR {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{mask}")?;
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}
