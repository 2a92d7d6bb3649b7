//! Conditions under which a general sandwich `Ψ P Ψ̃` stays a paravector,
//! classification of infinitesimal generators, and 4×4 matrix forms.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::euclid::{embed_covector, embed_paravector, embed_vector, EuclidVector, Paravector};
use crate::multivector::{Multivector, MAX_GRADE};
use crate::transform::Transform;

/// Seed of the fixed probe set.
pub const PROBE_SEED: u64 = 0x5eed_c133;

/// Classification thresholds, relative to the input scale.
pub const ACCEPT_TOL: f64 = 1e-12;
pub const REJECT_TOL: f64 = 1e-6;

/// `Ψ = Ψ₀ + … + Ψ₆`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradeParts(pub [Multivector; MAX_GRADE + 1]);

impl GradeParts {
    pub fn part(&self, k: usize) -> &Multivector {
        &self.0[k]
    }

    pub fn sum(&self) -> Multivector {
        self.0.iter().fold(Multivector::zero(), |acc, m| acc + *m)
    }
}

pub fn grade_parts(psi: &Multivector) -> GradeParts {
    GradeParts(std::array::from_fn(|k| psi.grade(k)))
}

/// `(Δ₁, Δ₂, Δ₃, Δ₄)`, summed term by term.
pub fn delta_terms(g: &GradeParts, p: &Multivector) -> [Multivector; 4] {
    let [_, p1, p2, p3, p4, p5, p6] = g.0;
    let p = *p;
    let d46 = p4 - p6;
    let d35 = p5 * 2.0 - p3;
    let d53 = p5 - p3;
    let d1 = (p1 * p5).grade(4) * 2.0 + (p2 * d46).grade(4) * 2.0 + (p3 * d35).grade(4) + (p4 * p4).grade(4);
    let d2 = (p1 * d46).grade(5) * 2.0 + (p2 * d53).grade(5) * 2.0 + (p3 * p4).grade(5) * 2.0;
    let d3 = (p1 * p * d46).grade(4) * 2.0
        + (p2 * p * d53).grade(4) * 2.0
        + (p3 * p * d46).grade(4) * 2.0
        + (p4 * p * p5).grade(4) * 2.0;
    let d4 =
        (p1 * p * p5).grade(5) * 2.0 + (p2 * p * d46).grade(5) * 2.0 + (p3 * p * d35).grade(5) + (p4 * p * p4).grade(5);
    [d1, d2, d3, d4]
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    /// Left-hand sides of the four preservation conditions.
    pub residuals: [Multivector; 4],
    /// Covector part of `⟨Ψ P Ψ̃⟩₁`.
    pub covector_residual: Multivector,
    pub direct4: Multivector,
    pub direct5: Multivector,
}

impl ConditionReport {
    pub fn condition_max(&self) -> f64 {
        self.residuals.iter().map(Multivector::max_abs).fold(0.0, f64::max)
    }

    pub fn direct_max(&self) -> f64 {
        self.direct4
            .max_abs()
            .max(self.direct5.max_abs())
            .max(self.covector_residual.max_abs())
    }

    pub fn max_residual(&self) -> f64 {
        self.condition_max().max(self.direct_max())
    }
}

/// Covector component of the grade-1 part, `Σ (c_i⁺ - c_i⁻) e_i^*`.
pub fn covector_part(a: &Multivector) -> Multivector {
    let mut c = [0.0; 3];
    for (i, ci) in c.iter_mut().enumerate() {
        *ci = a.get(crate::BladeMask::plus(i + 1)) - a.get(crate::BladeMask::minus(i + 1));
    }
    embed_covector(&EuclidVector(c))
}

/// Evaluate the preservation conditions of `Ψ` at `P = 1 + p`.
pub fn paravector_conditions(psi: &Multivector, p: &EuclidVector) -> ConditionReport {
    let g = grade_parts(psi);
    let [p0, p1, p2, p3, p4, p5, p6] = g.0;
    let pv = embed_vector(p);
    let [d1, d2, d3, d4] = delta_terms(&g, &pv);
    let w = |a: Multivector, b: Multivector| a.outer_product(&b);
    let r1 = p0 * p4 * 2.0 - w(p2, p2) - w(p1, p3) * 2.0 + d1;
    let r2 = p0 * p5 * 2.0 + d2;
    // the (0, 5) pair of ⟨Ψ p Ψ̃⟩₄, the counterpart of the p·Ψ₆ term below
    let p_dot_5 = Multivector::contract_unchecked(&pv, &p5);
    let r3 = w(p0 * p3, pv) * 2.0 - w(w(p1, p2), pv) * 2.0 + p0 * p_dot_5 * 2.0 + d3;
    let p_dot_6 = Multivector::contract_unchecked(&pv, &p6);
    let r4 = w(p0 * p4, pv) * 2.0 - w(w(p2, p2), pv) + w(w(p1, p3), pv) * 2.0 - p0 * p_dot_6 * 2.0 + d4;
    let out = *psi * embed_paravector(&Paravector::affine(*p)) * psi.reversion();
    ConditionReport {
        residuals: [r1, r2, r3, r4],
        covector_residual: covector_part(&out.grade(1)),
        direct4: out.grade(4),
        direct5: out.grade(5),
    }
}

/// Eight seeded points in `[-1, 1]³` followed by `0, e₁, e₂, e₃`.
pub fn probe_points() -> Vec<EuclidVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let mut pts: Vec<EuclidVector> = (0..8)
        .map(|_| {
            EuclidVector::new(
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-1.0..=1.0),
            )
        })
        .collect();
    pts.push(EuclidVector::ZERO);
    pts.extend((1..=3).map(EuclidVector::axis));
    pts
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Verdict {
    Accept,
    /// Accepted, and the transformation only rescales points.
    AcceptNull,
    Reject {
        residual: f64,
    },
    /// Residual between the two thresholds.
    Diagnostic {
        residual: f64,
    },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept | Verdict::AcceptNull)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => write!(f, "ACCEPT"),
            Verdict::AcceptNull => write!(f, "ACCEPT (null)"),
            Verdict::Reject { residual } => write!(f, "REJECT (residual {residual:.3e})"),
            Verdict::Diagnostic { residual } => write!(f, "UNDECIDED (residual {residual:.3e})"),
        }
    }
}

/// Decide whether `Φ = 1 + ε ψ_k` maps points to points, over the probe set.
pub fn classify_infinitesimal(k: usize, psi: &Multivector, eps: f64) -> Result<Verdict> {
    if k > MAX_GRADE {
        return Err(Error::GradeOutOfRange(k));
    }
    if !psi.is_exactly_zero() && psi.homogeneous_grade() != Some(k) {
        return Err(Error::NotHomogeneous { expected: "grade k" });
    }
    let phi = Multivector::one() + *psi * eps;
    let scale = phi.max_abs().max(1.0);
    let mut residual = 0.0f64;
    let mut null = true;
    let ref_weight = (phi * phi.reversion()).scalar_part();
    for p in probe_points() {
        residual = residual.max(paravector_conditions(&phi, &p).max_residual());
        let pm = embed_paravector(&Paravector::affine(p));
        let out = phi * pm * phi.reversion();
        if (out - pm * ref_weight).max_abs() > ACCEPT_TOL * scale {
            null = false;
        }
    }
    Ok(if residual > REJECT_TOL * scale * scale {
        Verdict::Reject { residual }
    } else if residual <= ACCEPT_TOL * scale {
        if null {
            Verdict::AcceptNull
        } else {
            Verdict::Accept
        }
    } else {
        Verdict::Diagnostic { residual }
    })
}

/// Linear map on `(w, p¹, p², p³)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjMatrix(pub [[f64; 4]; 4]);

impl ProjMatrix {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        ProjMatrix(m)
    }

    pub fn apply(&self, p: &Paravector) -> Paravector {
        let x = p.to_array();
        Paravector::from_array(std::array::from_fn(|i| (0..4).map(|j| self.0[i][j] * x[j]).sum()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ProjMatrix) -> ProjMatrix {
        ProjMatrix(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..4).map(|k| self.0[i][k] * other.0[k][j]).sum())
        }))
    }

    pub fn max_abs_diff(&self, other: &ProjMatrix) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|a| a.abs()).fold(0.0, f64::max)
    }
}

impl fmt::Display for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.0 {
            let cells: Vec<String> = row.iter().map(|c| format!("{c:.17e}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// First-order matrix of `Ψ P Ψ̃` with `Ψ = (1 + ε v)(1 + ε a∧b^*)`.
pub fn affine_matrix(v: &EuclidVector, a: &EuclidVector, b: &EuclidVector, eps: f64) -> ProjMatrix {
    let mut m = ProjMatrix::identity().0;
    for i in 0..3 {
        m[i + 1][0] = 2.0 * eps * v[i];
        for j in 0..3 {
            m[i + 1][j + 1] += eps * a[i] * b[j];
        }
    }
    ProjMatrix(m)
}

/// First-order matrix of `⋆[Ψ(⋆P)Ψ̃]` with `Ψ = (1 + ε v)(1 + ε a∧b^*)`.
///
/// `1 + ε v = exp(ε v)` is the translator for `2ε v`, so the weight row
/// carries `2ε v`.
pub fn cotranslation_matrix(v: &EuclidVector, a: &EuclidVector, b: &EuclidVector, eps: f64) -> ProjMatrix {
    let g = a.dot(b);
    let mut m = ProjMatrix::identity().0;
    for i in 0..4 {
        m[i][i] += eps * g;
    }
    for j in 0..3 {
        m[0][j + 1] = 2.0 * eps * v[j];
    }
    for i in 0..3 {
        for j in 0..3 {
            m[i + 1][j + 1] -= eps * a[j] * b[i];
        }
    }
    ProjMatrix(m)
}

/// Read the matrix of `t` off the probes `(1, 0)` and `(0, e_i)`, then
/// check it against `t` on ten seeded random paravectors.
pub fn projective_matrix_probe(t: &Transform) -> Result<ProjMatrix> {
    let mut m = [[0.0; 4]; 4];
    for j in 0..4 {
        let mut x = [0.0; 4];
        x[j] = 1.0;
        let col = t.apply(&Paravector::from_array(x))?.to_array();
        for i in 0..4 {
            m[i][j] = col[i];
        }
    }
    let m = ProjMatrix(m);
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED ^ 0x4d);
    let mut mismatch = 0.0f64;
    let mut tol = 0.0f64;
    for _ in 0..10 {
        let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..=2.0));
        let p = Paravector::from_array(x);
        let direct = t.apply(&p)?.to_array();
        let via = m.apply(&p).to_array();
        for (d, v) in direct.iter().zip(via) {
            mismatch = mismatch.max((d - v).abs());
            tol = tol.max(d.abs());
        }
    }
    if mismatch > 1e-12 + 1e-9 * tol.max(m.max_abs()) {
        return Err(Error::NotLinear { mismatch });
    }
    Ok(m)
}

/// One composed generator family with its condition report.
#[derive(Clone, Debug)]
pub struct FixtureReport {
    pub name: &'static str,
    pub eps: f64,
    pub eta: f64,
    pub psi: Multivector,
    /// Largest residual over the probe set, divided by `max(1, |Ψ|²)`.
    pub residual: f64,
}

impl FixtureReport {
    pub fn passes(&self) -> bool {
        self.residual <= ACCEPT_TOL
    }
}

fn random_vector(rng: &mut ChaCha8Rng) -> EuclidVector {
    EuclidVector::new(
        rng.gen_range(-1.0..=1.0),
        rng.gen_range(-1.0..=1.0),
        rng.gen_range(-1.0..=1.0),
    )
}

/// `a ∧ b^*`.
pub fn mixed_bivector(a: &EuclidVector, b: &EuclidVector) -> Multivector {
    embed_vector(a).outer_product(&embed_covector(b))
}

/// Composed generators `(1+εv)(1+ηu)`, `(1+εv)(1+η a∧b^*)` and
/// `(1+ε u∧v^*)(1+η a∧b^*)` for `ε, η ∈ {10⁻¹, 10⁻²}` and seeded vectors.
pub fn first_order_fixtures(seed: u64) -> Vec<FixtureReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let steps = [1e-1, 1e-2];
    for &eps in &steps {
        for &eta in &steps {
            let v = random_vector(&mut rng);
            let u = random_vector(&mut rng);
            let a = random_vector(&mut rng);
            let b = random_vector(&mut rng);
            let one = Multivector::one();
            let families = [
                (
                    "vector-vector",
                    (one + embed_vector(&v) * eps) * (one + embed_vector(&u) * eta),
                ),
                (
                    "vector-mixed",
                    (one + embed_vector(&v) * eps) * (one + mixed_bivector(&a, &b) * eta),
                ),
                (
                    "mixed-mixed",
                    (one + mixed_bivector(&u, &v) * eps) * (one + mixed_bivector(&a, &b) * eta),
                ),
            ];
            for (name, psi) in families {
                let scale = psi.max_abs().max(1.0);
                let residual = probe_points()
                    .iter()
                    .map(|p| paravector_conditions(&psi, p).max_residual())
                    .fold(0.0, f64::max)
                    / (scale * scale);
                out.push(FixtureReport {
                    name,
                    eps,
                    eta,
                    psi,
                    residual,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euclid::{pseudoscalar, Paravector};
    use crate::hodge::hodge_star;
    use crate::transform::{apply_cotranslation, Perspective};
    use crate::versor::{apply_hodge_sandwich, apply_sandwich, HodgeVersor, Versor};

    fn e(i: usize) -> Multivector {
        embed_vector(&EuclidVector::axis(i))
    }

    fn es(i: usize) -> Multivector {
        embed_covector(&EuclidVector::axis(i))
    }

    const A: EuclidVector = EuclidVector::new(0.9, 0.2, -0.4);
    const B: EuclidVector = EuclidVector::new(-0.1, 0.6, 0.8);
    const V: EuclidVector = EuclidVector::new(0.3, -0.7, 0.5);
    const U: EuclidVector = EuclidVector::new(-0.6, 0.1, 0.25);

    fn ev(i: usize) -> Multivector {
        e(i)
    }

    #[test]
    fn grade_parts_examples() {
        let g = grade_parts(&(Multivector::one() + ev(1)));
        assert_eq!(*g.part(0), Multivector::one());
        assert_eq!(*g.part(1), ev(1));
        assert!((2..=6).all(|k| g.part(k).is_exactly_zero()));

        let t = Versor::translation(&V);
        let g = grade_parts(&t.u);
        assert!(g.part(1).approx_eq(&(embed_vector(&V) * 0.5)));
        assert_eq!(g.sum(), t.u);

        let n = Versor::reflection(&A.normalized()).unwrap();
        // n⁺ and n⁻ anticommute, so the scalar part is zero
        let present = n.u.grades_present(1e-12);
        assert_eq!(present, vec![2]);
        assert_eq!(grade_parts(&n.u).part(0).scalar_part(), 0.0);
    }

    #[test]
    fn deltas_vanish_below_grade_two() {
        let g = grade_parts(&(Multivector::scalar(2.0) + embed_vector(&V)));
        for d in delta_terms(&g, &embed_vector(&A)) {
            assert!(d.is_exactly_zero());
        }
    }

    #[test]
    fn vector_then_mixed_parts() {
        let (eps, eta) = (0.1, 0.01);
        let one = Multivector::one();
        let psi = (one + embed_vector(&V) * eps) * (one + mixed_bivector(&A, &B) * eta);
        let g = grade_parts(&psi);
        assert!(g.part(0).approx_eq(&one));
        let psi1 = embed_vector(&V) * eps - embed_vector(&A) * (0.5 * eps * eta * V.dot(&B));
        assert!(g.part(1).approx_eq(&psi1));
        assert!(g.part(2).approx_eq(&(mixed_bivector(&A, &B) * eta)));
        let psi3 = embed_vector(&V).outer_product(&mixed_bivector(&A, &B)) * (eps * eta);
        assert!(g.part(3).approx_eq(&psi3));
        assert!((*g.part(0) * *g.part(3)).approx_eq(&g.part(1).outer_product(g.part(2))));
        for p in probe_points() {
            let pv = embed_vector(&p);
            assert!((*g.part(2) * pv * *g.part(3)).grade(4).approx_eq(&Multivector::zero()));
            assert!((*g.part(3) * pv * *g.part(3)).grade(5).approx_eq(&Multivector::zero()));
        }
    }

    #[test]
    fn mixed_then_mixed_parts() {
        let (eps, eta) = (0.1, 0.1);
        let one = Multivector::one();
        let uv = mixed_bivector(&U, &V);
        let ab = mixed_bivector(&A, &B);
        let psi = (one + uv * eps) * (one + ab * eta);
        let g = grade_parts(&psi);
        let psi0 = 1.0 + 0.25 * eps * eta * U.dot(&B) * V.dot(&A);
        assert!(g.part(0).approx_eq(&Multivector::scalar(psi0)));
        let psi4 = uv.outer_product(&ab) * (eps * eta);
        assert!(g.part(4).approx_eq(&psi4));
        let zero = Multivector::zero();
        assert!((*g.part(2) * *g.part(4)).grade(4).approx_eq(&zero));
        assert!((*g.part(4) * *g.part(4)).grade(4).approx_eq(&zero));
        let lhs = *g.part(0) * *g.part(4) * 2.0 - g.part(2).outer_product(g.part(2));
        assert!(lhs.approx_eq(&zero));
    }

    #[test]
    fn condition_examples() {
        let p = EuclidVector::new(0.4, -0.3, 1.2);
        let r = paravector_conditions(&Versor::translation(&V).u, &p);
        assert_eq!(r.max_residual(), 0.0);

        let bad = Multivector::one() + es(1).outer_product(&es(2)) * 0.01;
        let r = paravector_conditions(&bad, &p);
        assert!(r.covector_residual.max_abs() > 1e-6);

        let good = Multivector::one() + mixed_bivector(&A, &B) * 0.01;
        let r = paravector_conditions(&good, &p);
        assert!(r.condition_max() <= 1e-15, "{}", r.condition_max());
    }

    #[test]
    fn conditions_and_direct_residuals_vanish_together() {
        let one = Multivector::one();
        let gens = [
            embed_vector(&V),
            mixed_bivector(&A, &B),
            ev(1).outer_product(&es(2)).outer_product(&es(3)),
            mixed_bivector(&A, &B) + mixed_bivector(&B, &A),
            ev(1).outer_product(&ev(2)).outer_product(&es(1)).outer_product(&es(3)),
            pseudoscalar(),
        ];
        for gen in gens {
            let phi = one + gen * 0.01;
            for p in probe_points() {
                let r = paravector_conditions(&phi, &p);
                let cond_zero = r.condition_max() <= 1e-12;
                let direct_zero = r.direct4.max_abs().max(r.direct5.max_abs()) <= 1e-12;
                assert_eq!(cond_zero, direct_zero, "{gen} at {p}");
            }
        }
    }

    #[test]
    fn conditions_are_the_grade_projections() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let psi = Multivector::from_coeffs(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
            let p = random_vector(&mut rng);
            let r = paravector_conditions(&psi, &p);
            let pv = embed_vector(&p);
            let n = psi * psi.reversion();
            let m = psi * pv * psi.reversion();
            let expect = [n.grade(4), n.grade(5), m.grade(4), m.grade(5)];
            for (got, want) in r.residuals.iter().zip(expect) {
                assert!(got.approx_eq_abs(&want, 1e-12), "{got} vs {want}");
            }
        }
    }

    #[test]
    fn classification_examples() {
        let c = |k, m: Multivector| classify_infinitesimal(k, &m, 1e-2).unwrap();
        assert_eq!(c(0, Multivector::scalar(3.0)), Verdict::AcceptNull);
        assert_eq!(c(1, embed_vector(&V)), Verdict::Accept);
        assert_eq!(c(2, mixed_bivector(&A, &B)), Verdict::Accept);
        assert_eq!(c(2, ev(1).outer_product(&ev(2))), Verdict::AcceptNull);
        let five = Multivector::e_plus(1)
            * Multivector::e_plus(2)
            * Multivector::e_plus(3)
            * Multivector::e_minus(1)
            * Multivector::e_minus(3);
        assert!(matches!(c(5, five), Verdict::Reject { .. }));
        assert!(matches!(c(2, es(1).outer_product(&es(2))), Verdict::Reject { .. }));
        assert!(matches!(c(1, embed_covector(&V)), Verdict::Reject { .. }));
        assert!(classify_infinitesimal(2, &ev(1), 1e-2).is_err());
    }

    #[test]
    fn zero_parameters_give_identity_matrices() {
        let z = EuclidVector::ZERO;
        assert_eq!(affine_matrix(&z, &z, &z, 0.3), ProjMatrix::identity());
        assert_eq!(cotranslation_matrix(&z, &z, &z, 0.3), ProjMatrix::identity());
    }

    #[test]
    fn affine_matrix_is_first_order_sandwich() {
        let eps = 1e-4;
        let one = Multivector::one();
        let psi = (one + embed_vector(&V) * eps) * (one + mixed_bivector(&A, &B) * eps);
        let m = affine_matrix(&V, &A, &B, eps);
        for p in probe_points() {
            let pm = embed_paravector(&Paravector::affine(p));
            let direct = crate::euclid::extract_paravector(&(psi * pm * psi.reversion())).unwrap();
            let via = m.apply(&Paravector::affine(p));
            let dev = direct
                .to_array()
                .iter()
                .zip(via.to_array())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            assert!(dev <= 1e-6, "{dev}");
        }
    }

    #[test]
    fn cotranslation_matrix_is_first_order_hodge_sandwich() {
        let eps = 1e-4;
        let one = Multivector::one();
        let psi = (one + embed_vector(&V) * eps) * (one + mixed_bivector(&A, &B) * eps);
        let h = HodgeVersor {
            u_prime: psi,
            lambda: 1.0,
        };
        let m = cotranslation_matrix(&V, &A, &B, eps);
        for p in probe_points() {
            let p = Paravector::new(0.7, p);
            let direct = apply_hodge_sandwich(&h, &p).unwrap();
            let via = m.apply(&p);
            let dev = direct
                .to_array()
                .iter()
                .zip(via.to_array())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            assert!(dev <= 1e-6, "{dev}");
        }
    }

    #[test]
    fn star_commutator_identities() {
        let star = |m: &Multivector| hodge_star(m).unwrap();
        let s1 = star(&Multivector::one());
        let p = EuclidVector::new(0.2, -1.1, 2.4);
        let sp = star(&embed_vector(&p));
        let v = embed_vector(&V);
        let ab = mixed_bivector(&A, &B);
        assert!(star(&(v * s1 + s1 * v)).approx_eq(&Multivector::zero()));
        // the itemized star doubles the vector-point bracket
        assert!(star(&(v * sp + sp * v)).approx_eq(&Multivector::scalar(2.0 * V.dot(&p))));
        assert!(star(&(ab * s1 - s1 * ab)).approx_eq(&Multivector::scalar(A.dot(&B))));
        let expect = embed_vector(&p) * A.dot(&B) - embed_vector(&B) * A.dot(&p);
        assert!(star(&(ab * sp - sp * ab)).approx_eq(&expect));
    }

    #[test]
    fn probe_matrices() {
        let t = Transform::Sandwich(Versor::translation(&V));
        let m = projective_matrix_probe(&t).unwrap();
        let mut expect = ProjMatrix::identity();
        for i in 0..3 {
            expect.0[i + 1][0] = V[i];
        }
        assert!(m.max_abs_diff(&expect) < 1e-15);

        let m = projective_matrix_probe(&Transform::Cotranslation(V)).unwrap();
        let mut expect = ProjMatrix::identity();
        for j in 0..3 {
            expect.0[0][j + 1] = V[j];
        }
        assert!(m.max_abs_diff(&expect) < 1e-15);

        let z = EuclidVector::axis(3);
        let persp = Perspective::new(EuclidVector::ZERO, z, 1.0).unwrap();
        let m = projective_matrix_probe(&Transform::Perspective(persp)).unwrap();
        let expect = ProjMatrix([
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]);
        assert!(m.max_abs_diff(&expect) < 1e-15);
        let eye = m.apply(&Paravector::origin());
        assert_eq!(eye.weight, 0.0);
    }

    #[test]
    fn probe_of_stages_composes() {
        let rot = Versor::rotation(&A.normalized(), &A.cross(&B).normalized(), 0.4).unwrap();
        let t1 = Transform::Sandwich(rot);
        let t2 = Transform::Cotranslation(U);
        let m1 = projective_matrix_probe(&t1).unwrap();
        let m2 = projective_matrix_probe(&t2).unwrap();
        let m = projective_matrix_probe(&Transform::Stages(vec![t1, t2])).unwrap();
        assert!(m.max_abs_diff(&m2.compose(&m1)) < 1e-12);
        let p = Paravector::new(1.0, B);
        let direct = apply_cotranslation(&U, &apply_sandwich(&rot, &p).unwrap()).unwrap();
        assert!((m.apply(&p).weight - direct.weight).abs() < 1e-12);
    }

    #[test]
    fn first_order_fixtures_hold() {
        for f in first_order_fixtures(11) {
            assert!(f.passes(), "{} ε={} η={}: {:e}", f.name, f.eps, f.eta, f.residual);
        }
    }
}
