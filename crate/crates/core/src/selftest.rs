//! Property suites over seeded random inputs, checked against independent
//! oracles (Householder and rotation matrices, ray-plane intersection, the
//! homogeneous perspective matrix, series exponentials).

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blade::{BladeMask, Signature};
use crate::error::Error;
use crate::euclid::{
    embed_covector, embed_paravector, embed_vector, normalize_point, omega_v, EuclidVector, NormalizedPoint, Paravector,
};
use crate::hodge::hodge_star;
use crate::multivector::Multivector;
use crate::pipeline::{parse_pipeline, Pipeline, Step};
use crate::projective::{
    affine_matrix, classify_infinitesimal, cotranslation_matrix, first_order_fixtures, mixed_bivector,
    paravector_conditions, probe_points, projective_matrix_probe, Verdict,
};
use crate::transform::{apply_cotranslation, perspective_project, pseudo_perspective, Transform};
use crate::versor::{
    apply_hodge_sandwich, apply_sandwich, hodge_conjugate_versor, rotation_generator, sector_image, HodgeVersor, Versor,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Random inputs per property.
    pub samples: usize,
    /// Signature used by the defining-relations suite.
    pub signature: Signature,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0xc1_33,
            samples: 1000,
            signature: Signature::CL33,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    /// Largest observed error relative to its tolerance.
    pub worst_ratio: f64,
    pub first_failure: Option<String>,
    pub elapsed: Duration,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checks > 0
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {:<28} {:>6}/{:<6} worst {:.2e} ({:.2?})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.checks - self.failures,
            self.checks,
            self.worst_ratio,
            self.elapsed
        )?;
        if let Some(msg) = &self.first_failure {
            write!(f, "\n     first failure: {msg}")?;
        }
        Ok(())
    }
}

/// Counts checks for one suite.
pub struct Tally {
    name: &'static str,
    checks: usize,
    failures: usize,
    worst_ratio: f64,
    first_failure: Option<String>,
    start: Instant,
}

impl Tally {
    pub fn new(name: &'static str) -> Self {
        Tally {
            name,
            checks: 0,
            failures: 0,
            worst_ratio: 0.0,
            first_failure: None,
            start: Instant::now(),
        }
    }

    /// Record `err <= tol`.
    pub fn within(&mut self, err: f64, tol: f64, what: impl FnOnce() -> String) {
        self.checks += 1;
        let ratio = if tol > 0.0 {
            err / tol
        } else if err == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        let ratio = if ratio.is_nan() { f64::INFINITY } else { ratio };
        self.worst_ratio = self.worst_ratio.max(ratio);
        // NaN errors must fail too
        if err.partial_cmp(&tol).is_none_or(|o| o.is_gt()) {
            self.fail(|| format!("{}: error {err:.3e} > {tol:.3e}", what()));
        }
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(what);
        }
    }

    fn fail(&mut self, what: impl FnOnce() -> String) {
        self.failures += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(what());
        }
    }

    pub fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            checks: self.checks,
            failures: self.failures,
            worst_ratio: self.worst_ratio,
            first_failure: self.first_failure,
            elapsed: self.start.elapsed(),
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(rng: &mut impl Rng, r: f64) -> EuclidVector {
    EuclidVector::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r), rng.gen_range(-r..=r))
}

pub fn random_unit(rng: &mut impl Rng) -> EuclidVector {
    loop {
        let v = random_vector(rng, 1.0);
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v * (1.0 / n);
        }
    }
}

pub fn random_orthonormal_pair(rng: &mut impl Rng) -> (EuclidVector, EuclidVector) {
    let u = random_unit(rng);
    loop {
        let w = random_vector(rng, 1.0);
        let perp = w - u * u.dot(&w);
        if perp.norm() > 0.1 {
            return (u, perp.normalized());
        }
    }
}

pub fn random_paravector(rng: &mut impl Rng) -> Paravector {
    Paravector::new(rng.gen_range(-2.0..=2.0), random_vector(rng, 2.0))
}

pub fn random_multivector(rng: &mut impl Rng) -> Multivector {
    Multivector::from_coeffs(std::array::from_fn(|_| rng.gen_range(-1.0..=1.0)))
}

pub fn random_homogeneous(rng: &mut impl Rng, k: usize) -> Multivector {
    let mut m = Multivector::zero();
    for mask in BladeMask::iter_all().filter(|m| m.grade() == k) {
        m.set(mask, rng.gen_range(-1.0..=1.0));
    }
    m
}

/// Random element of the exterior algebra of V₃.
pub fn random_euclid_form(rng: &mut impl Rng) -> Multivector {
    let e = |i| embed_vector(&EuclidVector::axis(i));
    let basis = [
        Multivector::one(),
        e(1),
        e(2),
        e(3),
        e(1).outer_product(&e(2)),
        e(1).outer_product(&e(3)),
        e(2).outer_product(&e(3)),
        omega_v(),
    ];
    basis
        .iter()
        .fold(Multivector::zero(), |acc, b| acc + *b * rng.gen_range(-2.0..=2.0))
}

/// Random invertible pipeline of one to five steps.
pub fn random_pipeline(rng: &mut impl Rng) -> Pipeline {
    let len = rng.gen_range(1..=5);
    let steps = (0..len)
        .map(|_| {
            let (u, v) = random_orthonormal_pair(rng);
            let t = rng.gen_range(-1.0..=1.0);
            match rng.gen_range(0..7) {
                0 => Step::Reflect { n: u },
                1 => Step::Rotate { u, v, theta: 3.0 * t },
                2 => Step::HRotate { u, v, eta: t },
                3 => Step::Shear { u, v: v * 1.5, t },
                4 => Step::Scale { u, t },
                5 => Step::Translate {
                    v: random_vector(rng, 2.0),
                },
                _ => Step::Cotranslate {
                    v: random_vector(rng, 0.5),
                },
            }
        })
        .collect();
    Pipeline { steps }
}

fn max_diff(a: [f64; 4], b: [f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn max_abs4(a: [f64; 4]) -> f64 {
    a.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Relative-error tolerance `rel · max(1, |expected|)`.
fn rel_tol(expected: [f64; 4], rel: f64) -> f64 {
    rel * max_abs4(expected).max(1.0)
}

fn check_para(t: &mut Tally, got: crate::Result<Paravector>, expect: Paravector, rel: f64, what: &str) {
    match got {
        Ok(g) => {
            let e = expect.to_array();
            t.within(max_diff(g.to_array(), e), rel_tol(e, rel), || {
                format!("{what}: got {g}, expected {expect}")
            });
        }
        Err(err) => t.check(false, || format!("{what}: {err}")),
    }
}

/// Generator anticommutators and the derived relations of `e_i`, `e_i^*`,
/// computed with the configured signature.
pub fn suite_defining_relations(cfg: &SelftestConfig) -> SuiteResult {
    let mut t = Tally::new("defining relations");
    let sig = &cfg.signature;
    let gen = |b: usize| Multivector::blade(BladeMask::new(1 << b).unwrap(), 1.0);
    let expected = Signature::CL33.squares;
    for i in 0..6 {
        for j in 0..6 {
            let (a, b) = (gen(i), gen(j));
            let anti = a.geometric_product_in(&b, sig) + b.geometric_product_in(&a, sig);
            let want = if i == j { 2.0 * f64::from(expected[i]) } else { 0.0 };
            t.check(anti == Multivector::scalar(want), || {
                format!("generators {i},{j}: anticommutator {anti}, expected {want}")
            });
        }
    }
    let e = |i| embed_vector(&EuclidVector::axis(i));
    let es = |i| embed_covector(&EuclidVector::axis(i));
    for i in 1..=3 {
        for j in 1..=3 {
            let prod = |a: &Multivector, b: &Multivector| a.geometric_product_in(b, sig);
            let ee = prod(&e(i), &e(j)) + prod(&e(j), &e(i));
            let ss = prod(&es(i), &es(j)) + prod(&es(j), &es(i));
            let es_ = prod(&e(i), &es(j)) + prod(&es(j), &e(i));
            let delta = if i == j { 1.0 } else { 0.0 };
            t.check(ee.approx_eq(&Multivector::zero()), || {
                format!("e{i}e{j} + e{j}e{i} = {ee}")
            });
            t.check(ss.approx_eq(&Multivector::zero()), || {
                format!("e{i}*e{j}* + e{j}*e{i}* = {ss}")
            });
            t.check(es_.approx_eq(&Multivector::scalar(delta)), || {
                format!("e{i}e{j}* + e{j}*e{i} = {es_}")
            });
        }
    }
    t.finish()
}

/// Associativity, involution (anti)automorphisms, `vA = v·A + v∧A` and the
/// Leibniz rule on random inputs.
pub fn suite_algebra_properties(cfg: &SelftestConfig) -> SuiteResult {
    let mut t = Tally::new("algebra properties");
    let mut rng = rng(cfg.seed ^ 0xa1);
    for _ in 0..cfg.samples {
        let (a, b, c) = (
            random_multivector(&mut rng),
            random_multivector(&mut rng),
            random_multivector(&mut rng),
        );
        let left = (a * b) * c;
        let right = a * (b * c);
        let scale = left.max_abs().max(right.max_abs());
        t.within((left - right).max_abs(), 1e-12 + 1e-9 * scale, || {
            "associativity".into()
        });

        let ab = a * b;
        let rev = (ab.reversion() - b.reversion() * a.reversion()).max_abs();
        t.within(rev, 1e-12 + 1e-9 * ab.max_abs(), || {
            "reversion anti-automorphism".into()
        });
        let inv = (ab.grade_involution() - a.grade_involution() * b.grade_involution()).max_abs();
        t.within(inv, 1e-12 + 1e-9 * ab.max_abs(), || {
            "grade involution automorphism".into()
        });

        let v = random_homogeneous(&mut rng, 1);
        let k = rng.gen_range(0..=5);
        let j = rng.gen_range(0..=(5 - k));
        let ak = random_homogeneous(&mut rng, k);
        let bj = random_homogeneous(&mut rng, j);
        let split = Multivector::vector_contract(&v, &ak).unwrap() + v.outer_product(&ak);
        t.within((v * ak - split).max_abs(), 1e-12 + 1e-9 * (v * ak).max_abs(), || {
            format!("v A_{k} = v·A + v∧A")
        });
        let lhs = Multivector::vector_contract(&v, &ak.outer_product(&bj)).unwrap();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let rhs = Multivector::vector_contract(&v, &ak).unwrap().outer_product(&bj)
            + ak.outer_product(&Multivector::vector_contract(&v, &bj).unwrap()) * sign;
        t.within(
            (lhs - rhs).max_abs(),
            1e-12 + 1e-9 * lhs.max_abs().max(rhs.max_abs()),
            || format!("Leibniz rule k={k} j={j}"),
        );
    }
    t.finish()
}

/// Rotation of `p` by `theta` in the oriented `u, v` plane, mapping
/// `u ↦ cos θ u - sin θ v`.
fn rotate_oracle(p: &EuclidVector, u: &EuclidVector, v: &EuclidVector, theta: f64) -> EuclidVector {
    let (pu, pv) = (p.dot(u), p.dot(v));
    let perp = *p - *u * pu - *v * pv;
    let (s, c) = theta.sin_cos();
    perp + *u * (pu * c + pv * s) + *v * (pv * c - pu * s)
}

/// Every closed-form transformation against its oracle.
pub fn suite_closed_forms(cfg: &SelftestConfig) -> SuiteResult {
    let mut t = Tally::new("closed forms");
    let mut rng = rng(cfg.seed ^ 0x7e);
    let rel = 1e-9;
    for _ in 0..cfg.samples {
        let p = random_paravector(&mut rng);
        let (w, pv) = (p.weight, p.vector);
        let (u, v) = random_orthonormal_pair(&mut rng);

        // Householder reflection
        let n = random_unit(&mut rng);
        let expect = Paravector::new(w, pv - n * (2.0 * pv.dot(&n)));
        check_para(
            &mut t,
            apply_sandwich(&Versor::reflection(&n).unwrap(), &p),
            expect,
            rel,
            "reflection",
        );

        // rotation: rotation matrix and the series exponential of the generator
        let theta = rng.gen_range(-std::f64::consts::PI..=std::f64::consts::PI);
        let r = Versor::rotation(&u, &v, theta).unwrap();
        let expect = Paravector::new(w, rotate_oracle(&pv, &u, &v, theta));
        check_para(&mut t, apply_sandwich(&r, &p), expect, rel, "rotation");
        let series = Versor {
            u: rotation_generator(&u, &v, theta).exp_series(1e-17, 80).unwrap(),
            ..r
        };
        check_para(&mut t, apply_sandwich(&series, &p), expect, rel, "rotation (series)");

        let eta: f64 = rng.gen_range(-1.5..=1.5);
        let (pu, pvv) = (pv.dot(&u), pv.dot(&v));
        let perp = pv - u * pu - v * pvv;
        let expect = Paravector::new(
            w,
            perp + u * (pu * eta.cosh() + pvv * eta.sinh()) + v * (pvv * eta.cosh() + pu * eta.sinh()),
        );
        check_para(
            &mut t,
            apply_sandwich(&Versor::hyperbolic(&u, &v, eta).unwrap(), &p),
            expect,
            rel,
            "hyperbolic",
        );

        let s = rng.gen_range(-2.0..=2.0);
        let vv = v * rng.gen_range(0.2..=2.0);
        let expect = Paravector::new(w, pv + u * (s * pv.dot(&vv)));
        check_para(
            &mut t,
            apply_sandwich(&Versor::shear(&u, &vv, s).unwrap(), &p),
            expect,
            rel,
            "shear",
        );

        let ts: f64 = rng.gen_range(-1.5..=1.5);
        let par = u * pu;
        let expect = Paravector::new(w, pv - par + par * ts.exp());
        check_para(
            &mut t,
            apply_sandwich(&Versor::scale(&u, ts).unwrap(), &p),
            expect,
            rel,
            "scale",
        );

        let d = random_vector(&mut rng, 3.0);
        let expect = Paravector::new(w, pv + d * w);
        check_para(
            &mut t,
            apply_sandwich(&Versor::translation(&d), &p),
            expect,
            rel,
            "translation",
        );

        let expect = Paravector::new(w + pv.dot(&d), pv);
        check_para(&mut t, apply_cotranslation(&d, &p), expect, rel, "cotranslation");
    }

    // two reflections make a rotation by twice the angle between the normals
    for _ in 0..cfg.samples / 10 {
        let (a, b) = random_orthonormal_pair(&mut rng);
        let phi: f64 = rng.gen_range(0.1..=3.0);
        let n1 = a;
        let n2 = a * phi.cos() + b * phi.sin();
        let fused = Versor::reflection(&n2)
            .unwrap()
            .then_after(&Versor::reflection(&n1).unwrap());
        let m = projective_matrix_probe(&Transform::Sandwich(fused)).unwrap();
        let p = random_paravector(&mut rng);
        let expect = Paravector::new(p.weight, rotate_oracle(&p.vector, &a, &b, -2.0 * phi));
        check_para(&mut t, Ok(m.apply(&p)), expect, rel, "reflection pair");
    }
    t.finish()
}

/// `⋆⋆ = 1` on random forms and the worked values.
pub fn suite_hodge(cfg: &SelftestConfig) -> SuiteResult {
    let mut t = Tally::new("hodge star");
    let mut rng = rng(cfg.seed ^ 0x40);
    for _ in 0..cfg.samples {
        let a = random_euclid_form(&mut rng);
        let back = hodge_star(&hodge_star(&a).unwrap()).unwrap();
        t.within((back - a).max_abs(), 1e-12 + 1e-9 * a.max_abs(), || {
            "star of star".into()
        });
    }
    let sector_sum = |i: usize, j: usize| {
        let s = |k| [Multivector::e_plus(k), Multivector::e_minus(k)];
        s(i).iter()
            .flat_map(|a| s(j).map(|b| a.outer_product(&b)))
            .fold(Multivector::zero(), |acc, m| acc + m)
    };
    let star1 = hodge_star(&Multivector::one()).unwrap();
    t.within((star1 - omega_v()).max_abs(), 1e-15, || "star of one".into());
    let s12 = hodge_star(&sector_sum(1, 2)).unwrap();
    let want = (Multivector::e_plus(3) + Multivector::e_minus(3)) * 2.0;
    t.within((s12 - want).max_abs(), 1e-15, || format!("star of sector sum: {s12}"));
    for _ in 0..10 {
        let v = random_vector(&mut rng, 2.0);
        let tri = sector_sum(1, 2).outer_product(&embed_vector(&v));
        let got = hodge_star(&tri).unwrap();
        t.within((got - Multivector::scalar(4.0 * v[2])).max_abs(), 1e-14, || {
            format!("star of trivector: {got}")
        });
    }
    t.finish()
}

/// Homogeneous 4×4 matrix projecting from `eye` onto `x·n = c`, in
/// `(x, y, z, w)` order: `M = (π·Ê) I - Ê πᵀ` with `π = (n, -c)`.
pub fn perspective_matrix_oracle(eye: &EuclidVector, n: &EuclidVector, c: f64) -> [[f64; 4]; 4] {
    let e = [eye[0], eye[1], eye[2], 1.0];
    let pi = [n[0], n[1], n[2], -c];
    let pe: f64 = (0..4).map(|i| pi[i] * e[i]).sum();
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { pe } else { 0.0 } - e[i] * pi[j]))
}

fn location(p: &Paravector) -> Option<EuclidVector> {
    match normalize_point(p) {
        NormalizedPoint::Finite(q) => Some(q.vector),
        NormalizedPoint::AtInfinity(_) => None,
    }
}

/// Perspective and pseudo-perspective against homogeneous-matrix oracles.
pub fn suite_perspective(cfg: &SelftestConfig) -> SuiteResult {
    let mut t = Tally::new("perspective");
    let mut rng = rng(cfg.seed ^ 0x9e);
    let configs = (cfg.samples / 10).max(100);
    let mut accepted = 0;
    while accepted < configs {
        let eye = random_vector(&mut rng, 2.0);
        let n = random_vector(&mut rng, 1.0);
        if n.norm() < 0.2 {
            continue;
        }
        let c = rng.gen_range(-2.0..=2.0);
        let a = c - n.dot(&eye);
        if a.abs() < 0.05 {
            continue;
        }
        let mut p = random_vector(&mut rng, 3.0);
        let mut denom = n.dot(&(p - eye));
        if denom.abs() < 0.1 {
            continue;
        }
        if a / denom < 0.0 {
            p = eye * 2.0 - p;
            denom = -denom;
        }
        accepted += 1;
        let m = perspective_matrix_oracle(&eye, &n, c);
        let x = [p[0], p[1], p[2], 1.0];
        let y: [f64; 4] = std::array::from_fn(|i| (0..4).map(|j| m[i][j] * x[j]).sum());
        let oracle = EuclidVector::new(y[0] / y[3], y[1] / y[3], y[2] / y[3]);
        let ray = eye + (p - eye) * (a / denom);
        t.within((oracle - ray).norm(), 1e-9 * ray.norm().max(1.0), || {
            "matrix oracle vs ray".into()
        });
        match perspective_project(&Paravector::affine(eye), &n, c, &Paravector::affine(p)) {
            Ok(img) => {
                t.check(img.weight > 0.0, || format!("front point got weight {}", img.weight));
                match location(&img) {
                    Some(loc) => t.within((loc - oracle).norm(), 1e-9 * oracle.norm().max(1.0), || {
                        format!("perspective of {p} from {eye} onto {n}·x = {c}: {loc} vs {oracle}")
                    }),
                    None => t.check(false, || "image at infinity".into()),
                }
            }
            Err(e) => t.check(false, || format!("perspective failed: {e}")),
        }
        // eye moved onto the plane
        let on_plane = eye + n * (a / n.dot(&n));
        let res = perspective_project(&Paravector::affine(on_plane), &n, c, &Paravector::affine(p));
        t.check(matches!(res, Err(Error::Degenerate(_))), || {
            format!("eye on plane gave {res:?}")
        });
    }
    for _ in 0..configs {
        let n = random_unit(&mut rng);
        let eye = Paravector::new(1.0, -n);
        match pseudo_perspective(&n, &eye) {
            Ok(img) => {
                let expect = Paravector::new(0.0, -n);
                t.within(max_diff(img.to_array(), expect.to_array()), 1e-15, || {
                    format!("eye maps to {img}")
                });
            }
            Err(e) => t.check(false, || e.to_string()),
        }
        let p = random_paravector(&mut rng);
        let x = p.to_array();
        // [[1, nᵀ], [0, I]] on (w, p)
        let expect = Paravector::new(x[0] + n.dot(&p.vector), p.vector);
        check_para(
            &mut t,
            pseudo_perspective(&n, &p),
            expect,
            1e-9,
            "pseudo-perspective matrix",
        );
    }
    t.finish()
}

/// The five hodge-equivalent rows with `λ` from the volume condition.
pub fn suite_hodge_equivalence(cfg: &SelftestConfig) -> SuiteResult {
    let mut t = Tally::new("hodge equivalence");
    let mut rng = rng(cfg.seed ^ 0x10);
    for (row, versor) in sample_hodge_rows(&mut rng) {
        match hodge_conjugate_versor(&versor) {
            Ok(h) => {
                for _ in 0..100 {
                    let p = random_paravector(&mut rng);
                    let direct = apply_sandwich(&versor, &p).unwrap();
                    check_para(&mut t, apply_hodge_sandwich(&h, &p), direct, 1e-9, row);
                }
            }
            Err(e) => t.check(false, || format!("{row}: {e}")),
        }
    }
    for _ in 0..100 {
        let v = random_vector(&mut rng, 2.0);
        if v.norm() < 0.1 {
            continue;
        }
        match hodge_conjugate_versor(&Versor::translation(&v)) {
            Err(Error::NotHodgeCompatible { residual }) => {
                t.check(residual > 1e-6, || format!("translation residual {residual:.3e}"))
            }
            other => t.check(false, || format!("translation by {v} gave {other:?}")),
        }
    }
    t.finish()
}

/// One random versor per row of the hodge table: N, R, H, S, D.
pub fn sample_hodge_rows(rng: &mut impl Rng) -> Vec<(&'static str, Versor)> {
    let (u, v) = random_orthonormal_pair(rng);
    let s = rng.gen_range(-1.0..=1.0);
    vec![
        ("N", Versor::reflection(&u).unwrap()),
        ("R", Versor::rotation(&u, &v, 2.0 * s).unwrap()),
        ("H", Versor::hyperbolic(&u, &v, s).unwrap()),
        ("S", Versor::shear(&u, &v, s).unwrap()),
        ("D", Versor::scale(&u, s).unwrap()),
    ]
}

/// First-order families vanish; generators outside the allowed classes are
/// rejected; conditions and direct residuals vanish together.
pub fn suite_classification(cfg: &SelftestConfig) -> SuiteResult {
    let mut t = Tally::new("paravector conditions");
    let mut rng = rng(cfg.seed ^ 0x61);
    for seed in 0..4 {
        for f in first_order_fixtures(cfg.seed.wrapping_add(seed)) {
            t.within(f.residual, 1e-12, || format!("{} ε={} η={}", f.name, f.eps, f.eta));
        }
    }
    let eps = 1e-2;
    let rounds = (cfg.samples / 50).max(5);
    for _ in 0..rounds {
        for k in 3..=6 {
            let psi = random_homogeneous(&mut rng, k);
            let verdict = classify_infinitesimal(k, &psi, eps).unwrap();
            t.check(
                matches!(verdict, Verdict::Reject { residual } if residual > 1e-6),
                || format!("grade {k} generator: {verdict}"),
            );
        }
        let a = random_vector(&mut rng, 1.0);
        let b = random_vector(&mut rng, 1.0);
        let cov = embed_covector(&a).outer_product(&embed_covector(&b));
        let verdict = classify_infinitesimal(2, &cov, eps).unwrap();
        t.check(
            matches!(verdict, Verdict::Reject { residual } if residual > 1e-6),
            || format!("covector bivector: {verdict}"),
        );

        let accepts = [
            (0, Multivector::scalar(rng.gen_range(-1.0..=1.0))),
            (1, embed_vector(&a)),
            (2, mixed_bivector(&a, &b)),
        ];
        for (k, psi) in accepts {
            let verdict = classify_infinitesimal(k, &psi, eps).unwrap();
            t.check(verdict.is_accept(), || format!("grade {k} generator {psi}: {verdict}"));
        }

        let gens = [
            embed_vector(&a),
            mixed_bivector(&a, &b),
            random_homogeneous(&mut rng, 3),
            random_homogeneous(&mut rng, 4),
            mixed_bivector(&a, &b) + mixed_bivector(&b, &a),
        ];
        for g in gens {
            let phi = Multivector::one() + g * eps;
            for p in probe_points() {
                let r = paravector_conditions(&phi, &p);
                let cond_zero = r.condition_max() <= 1e-12;
                let direct_zero = r.direct4.max_abs().max(r.direct5.max_abs()) <= 1e-12;
                t.check(cond_zero == direct_zero, || format!("co-vanishing for {g} at {p}"));
            }
        }
    }
    t.finish()
}

/// First-order matrices against direct evaluation, and probed matrices
/// against pipelines.
pub fn suite_matrices(cfg: &SelftestConfig) -> SuiteResult {
    let mut t = Tally::new("matrices");
    let mut rng = rng(cfg.seed ^ 0x33);
    let eps = 1e-4;
    let one = Multivector::one();
    for _ in 0..100 {
        let v = random_vector(&mut rng, 1.0);
        let a = random_vector(&mut rng, 1.0);
        let b = random_vector(&mut rng, 1.0);
        let psi = (one + embed_vector(&v) * eps) * (one + mixed_bivector(&a, &b) * eps);
        let aff = affine_matrix(&v, &a, &b, eps);
        let cot = cotranslation_matrix(&v, &a, &b, eps);
        let h = HodgeVersor {
            u_prime: psi,
            lambda: 1.0,
        };
        for _ in 0..4 {
            let p = Paravector::new(rng.gen_range(0.5..=1.5), random_vector(&mut rng, 1.0));
            let direct = crate::euclid::extract_paravector(&(psi * embed_paravector(&p) * psi.reversion()));
            match direct {
                Ok(d) => t.within(max_diff(d.to_array(), aff.apply(&p).to_array()), 1e-6, || {
                    "affine matrix".into()
                }),
                Err(e) => t.check(false, || format!("affine direct: {e}")),
            }
            match apply_hodge_sandwich(&h, &p) {
                Ok(d) => t.within(max_diff(d.to_array(), cot.apply(&p).to_array()), 1e-6, || {
                    "cotranslation matrix".into()
                }),
                Err(e) => t.check(false, || format!("cotranslation direct: {e}")),
            }
        }
    }
    let pipelines = 10;
    let mut configs: Vec<Pipeline> = (0..pipelines).map(|_| random_pipeline(&mut rng)).collect();
    configs.push(parse_pipeline("perspective eye=(0,0,0) n=(0,0,1) c=1").unwrap());
    configs.push(parse_pipeline("rotate u=(1,0,0) v=(0,1,0) theta=0.3\npseudo n=(0,0,1)").unwrap());
    let per = cfg.samples.max(100);
    for pl in &configs {
        let tr = pl.transform().unwrap();
        let m = match projective_matrix_probe(&tr) {
            Ok(m) => m,
            Err(e) => {
                t.check(false, || format!("probe of\n{pl}: {e}"));
                continue;
            }
        };
        for _ in 0..per {
            let p = random_paravector(&mut rng);
            let direct = tr.apply(&p).unwrap().to_array();
            let via = m.apply(&p).to_array();
            t.within(max_diff(direct, via), rel_tol(direct, 1e-9), || {
                format!("matrix vs apply for\n{pl}")
            });
        }
    }
    t.finish()
}

/// N and R keep both sectors; H, S, D, T mix them.
pub fn suite_sectors(cfg: &SelftestConfig) -> SuiteResult {
    let mut t = Tally::new("sector behaviour");
    let mut rng = rng(cfg.seed ^ 0x5c);
    for _ in 0..(cfg.samples / 10).max(10) {
        let (u, v) = random_orthonormal_pair(&mut rng);
        let s = rng.gen_range(0.2..=1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        for (name, versor) in [
            ("N", Versor::reflection(&u).unwrap()),
            ("R", Versor::rotation(&u, &v, 2.0 * s).unwrap()),
        ] {
            let r = sector_image(&versor);
            t.within(r.plus_leak.max(r.minus_leak), 1e-12, || format!("{name} leaks"));
        }
        let d = random_vector(&mut rng, 2.0);
        if d.norm() < 0.2 {
            continue;
        }
        let mixing = [
            ("H", Versor::hyperbolic(&u, &v, s).unwrap()),
            ("S", Versor::shear(&u, &v, s).unwrap()),
            ("D", Versor::scale(&u, s).unwrap()),
            ("T", Versor::translation(&d)),
        ];
        for (name, versor) in mixing {
            let r = sector_image(&versor);
            t.check(r.plus_leak > 1e-6 && r.minus_leak > 1e-6, || {
                format!("{name} keeps sectors: {r:?}")
            });
        }
    }
    t.finish()
}

/// Pipeline inverse round trips, matrix-vs-apply and the DSL round trip.
pub fn suite_pipelines(cfg: &SelftestConfig) -> SuiteResult {
    let mut t = Tally::new("pipelines");
    let mut rng = rng(cfg.seed ^ 0x77);
    for _ in 0..(cfg.samples / 10).max(20) {
        let pl = random_pipeline(&mut rng);
        let text = pl.to_string();
        t.check(parse_pipeline(&text).as_ref() == Ok(&pl), || {
            format!("DSL round trip of\n{text}")
        });
        let fwd = pl.transform().unwrap();
        let back = pl.inverse().unwrap().transform().unwrap();
        for _ in 0..10 {
            let p = random_paravector(&mut rng);
            let r = back.apply(&fwd.apply(&p).unwrap()).unwrap();
            let e = p.to_array();
            t.within(max_diff(r.to_array(), e), rel_tol(e, 1e-9), || {
                format!("inverse round trip of\n{text}")
            });
        }
    }
    t.finish()
}

pub type Suite = fn(&SelftestConfig) -> SuiteResult;

pub const SUITES: &[Suite] = &[
    suite_defining_relations,
    suite_algebra_properties,
    suite_closed_forms,
    suite_hodge,
    suite_perspective,
    suite_hodge_equivalence,
    suite_classification,
    suite_matrices,
    suite_sectors,
    suite_pipelines,
];

pub fn run_all(cfg: &SelftestConfig) -> Vec<SuiteResult> {
    SUITES.iter().map(|suite| suite(cfg)).collect()
}
