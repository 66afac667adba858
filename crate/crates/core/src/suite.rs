//! The acceptance suite: eleven criteria, each a list of check records.
//!
//! The same functions back the `selftest` subcommand, the individual CLI
//! subcommands and the `acceptance` test target.

use std::f64::consts::PI;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::operators::{
    build_classical, build_g, build_gcal, build_j, build_jcal, build_tilde_h, g_combination_residual,
    jcal_inverse_matrix, quantum_hilbert_trace, ClassicalBuilder, QuantumHilbertParams,
};
use crate::polyfam::{AscParams, PolynomialFamily};
use crate::qcore::{sample_identity_params, verify_identity, IdentityId, IdentityParams, QBase};
use crate::report::{CheckRecord, CheckStatus};
use crate::spectral::{
    commutator_interior_max, induced_multiplier, interlacing_violation, spectral_theorem_report, SpectralFamily,
};
use crate::verify::{integral_identity_grid, orthonormality_check, IntegralIdentity};

/// Knobs shared by the criteria; the defaults are the acceptance settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteOptions {
    /// Seed of the ChaCha8 stream that draws identity parameters.
    pub seed: u64,
    pub identity_points: usize,
    pub identity_tol: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 42, identity_points: 100, identity_tol: 1e-10 }
    }
}

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub records: Vec<CheckRecord>,
    pub seconds: f64,
    pub runtime_limit_seconds: Option<f64>,
}

impl CriterionResult {
    /// `Fail` if any record failed, else `Inconclusive` if any was, else `Pass`.
    pub fn status(&self) -> CheckStatus {
        let mut status = CheckStatus::Pass;
        for r in &self.records {
            match r.status {
                CheckStatus::Fail => return CheckStatus::Fail,
                CheckStatus::Inconclusive => status = CheckStatus::Inconclusive,
                CheckStatus::Pass => {}
            }
        }
        status
    }
}

pub const CRITERIA: [(u8, &str, Option<f64>); 11] = [
    (1, "q-series identity suite on seeded random points", Some(30.0)),
    (2, "J(a,b) commutes with H(a,b)", Some(10.0)),
    (3, "quantum Jacobi matrix commutes with the reciprocal q-integers matrix", Some(5.0)),
    (4, "B(a,b,c) commutes with its Jacobi matrix and reduces to Hilbert", None),
    (5, "G as a combination of two H; G(q^(a+1/2); q^2) = tilde H", None),
    (6, "induced multipliers match the closed forms", None),
    (7, "truncation spectra inside the closed-form interval", Some(60.0)),
    (8, "orthonormality of the polynomial families", None),
    (9, "integral identities for the Hankel entries", None),
    (10, "quantum Jacobi inverse and trace estimate", None),
    (11, "eigenvalue interlacing of truncations", None),
];

fn record<T>(name: &str, r: Result<T>, f: impl FnOnce(T) -> CheckRecord) -> CheckRecord {
    match r {
        Ok(v) => f(v),
        Err(e) => CheckRecord::failed(name, &e),
    }
}

fn asc(a: f64, b: f64, q: f64) -> Result<AscParams> {
    AscParams::new(a, b, q)
}

fn qb(q: f64) -> QBase {
    QBase::new(q).expect("fixed base lies in (0,1)")
}

/// Summary of one identity over a random grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityBlock {
    pub identity: IdentityId,
    pub description: &'static str,
    pub points: usize,
    pub max_residual: f64,
    pub worst_parameters: Option<IdentityParams>,
    pub errors: Vec<String>,
    pub tolerance: f64,
    pub status: CheckStatus,
}

/// Evaluates every identity at `points` parameter draws. Identity `i` uses
/// stream `i` of a ChaCha8 generator seeded with `seed`, so blocks are
/// reproducible and independent of scheduling. `q` fixes the base if given.
pub fn identity_suite(q: Option<QBase>, points: usize, tol: f64, seed: u64) -> Vec<IdentityBlock> {
    IdentityId::ALL
        .par_iter()
        .enumerate()
        .map(|(i, &id)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut max_residual: f64 = 0.0;
            let mut worst_parameters = None;
            let mut errors = Vec::new();
            for _ in 0..points {
                let params = sample_identity_params(id, q, &mut rng);
                match verify_identity(id, &params, tol) {
                    Ok(case) if case.residual.is_finite() => {
                        if case.residual >= max_residual {
                            max_residual = case.residual;
                            worst_parameters = Some(params);
                        }
                    }
                    Ok(_) => errors.push(format!("non-finite residual at {params:?}")),
                    Err(e) => errors.push(format!("{e} at {params:?}")),
                }
            }
            let status = CheckStatus::from_bool(errors.is_empty() && max_residual < tol);
            IdentityBlock {
                identity: id,
                description: id.description(),
                points,
                max_residual,
                worst_parameters,
                errors,
                tolerance: tol,
                status,
            }
        })
        .collect()
}

impl IdentityBlock {
    pub fn to_record(&self) -> CheckRecord {
        let mut r = CheckRecord::with_outcome(
            format!("identity {}", self.identity),
            self.max_residual,
            self.tolerance,
            self.status,
        )
        .input("points", self.points);
        if let Some(first) = self.errors.first() {
            r = r.detail(format!("{} errors, first: {first}", self.errors.len()));
        }
        r
    }
}

/// `[J(a,b), H(a,b)]` interior maximum relative to `max |H|`.
pub fn asc_commutator(p: &AscParams, order: usize, margin: usize, tol: f64) -> CheckRecord {
    let name = "commutator J(a,b) H(a,b)";
    let r = (|| {
        let h = crate::operators::build_h(p, order)?;
        let j = build_j(p, order)?;
        Ok(commutator_interior_max(&j, &h, margin)? / h.max_abs())
    })();
    record(name, r, |v| CheckRecord::below(name, v, tol))
        .input("a", p.a)
        .input("b", p.b)
        .input("q", p.q.value())
        .input("N", order)
}

/// `[𝒥, 𝒢]` interior maximum relative to `max |𝒢|`.
pub fn gcal_commutator(q: QBase, order: usize, margin: usize, tol: f64) -> CheckRecord {
    let name = "commutator Jcal Gcal";
    let r = (|| {
        let g = build_gcal(q, order)?;
        Ok(commutator_interior_max(&build_jcal(q, order)?, &g, margin)? / g.max_abs())
    })();
    record(name, r, |v| CheckRecord::below(name, v, tol)).input("q", q.value()).input("N", order)
}

/// `[B_jacobi, B]` interior maximum relative to `max |B|`.
pub fn classical_commutator(a: f64, b: f64, c: f64, order: usize, margin: usize, tol: f64) -> CheckRecord {
    let name = "commutator B-Jacobi B";
    let r = (|| {
        let m = build_classical(ClassicalBuilder::B { a, b, c }, order)?;
        let j = build_classical(ClassicalBuilder::BJacobi { a, b, c }, order)?;
        Ok(commutator_interior_max(&j, &m, margin)? / m.max_abs())
    })();
    record(name, r, |v| CheckRecord::below(name, v, tol)).input("a", a).input("b", b).input("c", c).input("N", order)
}

/// `[J(a, a q^{1/2}), G(a;q)]` interior maximum relative to `max |G|`.
pub fn g_commutator(a: f64, q: QBase, order: usize, margin: usize, tol: f64) -> CheckRecord {
    let name = "commutator J(a,a sqrt q) G(a)";
    let r = (|| {
        let g = build_g(a, q, order)?;
        let j = build_j(&asc(a, a * q.pow(0.5), q.value())?, order)?;
        Ok(commutator_interior_max(&j, &g, margin)? / g.max_abs())
    })();
    record(name, r, |v| CheckRecord::below(name, v, tol)).input("a", a).input("q", q.value()).input("N", order)
}

fn max_abs_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
}

fn criterion_1(opts: &SuiteOptions) -> Vec<CheckRecord> {
    identity_suite(None, opts.identity_points, opts.identity_tol, opts.seed)
        .iter()
        .map(|b| b.to_record().input("seed", opts.seed))
        .collect()
}

fn criterion_2() -> Vec<CheckRecord> {
    let points = [(0.3, 0.2, 0.5), (-0.5, 0.3, 0.6), (0.4, 0.0, 0.5), (0.6, -0.3, 0.4), (0.8, 0.5, 0.7)];
    points
        .iter()
        .map(|&(a, b, q)| match asc(a, b, q) {
            Ok(p) => asc_commutator(&p, 40, 1, 1e-11),
            Err(e) => CheckRecord::failed("commutator J(a,b) H(a,b)", &e),
        })
        .collect()
}

fn criterion_3() -> Vec<CheckRecord> {
    [0.3, 0.5, 0.7].iter().map(|&q| gcal_commutator(qb(q), 40, 1, 1e-9)).collect()
}

fn criterion_4() -> Vec<CheckRecord> {
    let name = "B(1.5,1.5,1) equals Hilbert(1.5)";
    let diff = (|| {
        let b = build_classical(ClassicalBuilder::B { a: 1.5, b: 1.5, c: 1.0 }, 8)?;
        let h = build_classical(ClassicalBuilder::Hilbert { nu: 1.5 }, 8)?;
        Ok(max_abs_diff(b.as_slice(), h.as_slice()))
    })();
    vec![
        classical_commutator(1.2, 0.8, 1.5, 30, 1, 1e-9),
        record(name, diff, |v| CheckRecord::below(name, v, 1e-12)).input("N", 8),
    ]
}

fn criterion_5() -> Vec<CheckRecord> {
    let name = "G - A H(a,a sqrt q) - B H(a sqrt q,a)";
    let r = g_combination_residual(0.5, qb(0.5), 10).map(|m| m.max_abs());
    let comb = record(name, r, |v| CheckRecord::below(name, v, 1e-10)).input("a", 0.5).input("q", 0.5).input("N", 10);
    let name = "G(q^(alpha+1/2); q^2) equals tilde H(alpha; q)";
    let (alpha, q) = (0.5, qb(0.5));
    let diff = (|| {
        let g = build_g(q.pow(alpha + 0.5), q.squared(), 8)?;
        let t = build_tilde_h(alpha, q, 8)?;
        Ok(max_abs_diff(g.as_slice(), t.as_slice()))
    })();
    let sub =
        record(name, diff, |v| CheckRecord::below(name, v, 1e-13)).input("alpha", alpha).input("q", 0.5).input("N", 8);
    vec![comb, sub]
}

/// `max_θ |Σ_{n<N} M_{0,n} φ_n(2cos θ) - f(θ)|` over `thetas`.
pub fn induced_multiplier_residual(family: &SpectralFamily, order: usize, thetas: &[f64]) -> Result<f64> {
    let m = family.build(order)?;
    let poly = family.polynomials()?;
    let mut worst: f64 = 0.0;
    for &t in thetas {
        worst = worst.max((induced_multiplier(&m, &poly, t)? - family.multiplier(t)?).abs());
    }
    Ok(worst)
}

fn criterion_6() -> Vec<CheckRecord> {
    let thetas: Vec<f64> = (0..10).map(|i| PI * (i as f64 + 0.5) / 10.0).collect();
    let families = [
        asc(0.3, 0.2, 0.5).map(SpectralFamily::Asc),
        Ok(SpectralFamily::G { a: 0.4, q: qb(0.36) }),
        Ok(SpectralFamily::TildeH { alpha: 0.5, q: qb(0.5) }),
    ];
    families
        .into_iter()
        .map(|f| {
            let name = "induced multiplier";
            match f {
                Ok(f) => {
                    record(name, induced_multiplier_residual(&f, 81, &thetas), |v| CheckRecord::below(name, v, 1e-8))
                        .input("family", f.name())
                        .inputs_from(&f.parameters())
                        .input("N", 81)
                        .input("thetas", thetas.len())
                }
                Err(e) => CheckRecord::failed(name, &e),
            }
        })
        .collect()
}

/// Records for one spectral report: interval membership, monotone extremes,
/// norm consistency and (if `gap_tol` is given) the gap to the norm at the
/// largest `N`, relative to the norm.
pub fn spectrum_records(family: &SpectralFamily, orders: &[usize], gap_tol: Option<f64>) -> Vec<CheckRecord> {
    let rep = match spectral_theorem_report(family, orders) {
        Ok(r) => r,
        Err(e) => return vec![CheckRecord::failed("spectrum", &e).input("family", family.name())],
    };
    let [lo, hi] = rep.interval;
    let tag = |r: CheckRecord| r.input("family", family.name()).inputs_from(&rep.parameters);
    let mut out = Vec::new();
    for t in &rep.truncations {
        let excess = (lo - t.min_eigenvalue).max(t.max_eigenvalue - hi).max(0.0);
        out.push(tag(CheckRecord::with_outcome(
            "spectrum inside closed-form interval",
            excess,
            rep.tol_outer,
            CheckStatus::from_bool(t.inside_interval && t.within_norm),
        )
        .input("N", t.order)
        .detail(format!("[{:e}, {:e}] in [{lo:e}, {hi:e}]", t.min_eigenvalue, t.max_eigenvalue))));
    }
    out.push(tag(CheckRecord::with_outcome(
        "spectrum extremes monotone in N",
        0.0,
        1e-12,
        CheckStatus::from_bool(rep.monotone),
    )));
    out.push(tag(CheckRecord::with_outcome(
        "norm equals largest interval endpoint",
        0.0,
        1e-12,
        CheckStatus::from_bool(rep.norm_consistent),
    )));
    if let (Some(tol), Some(last)) = (gap_tol, rep.truncations.last()) {
        out.push(tag(CheckRecord::below(
            "largest eigenvalue gap to norm (relative)",
            last.gap_to_norm / rep.norm,
            tol,
        )
        .input("N", last.order)
        .detail(format!("absolute gap {:e}, norm {:e}", last.gap_to_norm, rep.norm))));
    }
    out
}

fn criterion_7() -> Vec<CheckRecord> {
    let orders = [50, 100, 200];
    let mut out = match asc(0.3, 0.2, 0.5) {
        Ok(p) => spectrum_records(&SpectralFamily::Asc(p), &orders, Some(1e-3)),
        Err(e) => vec![CheckRecord::failed("spectrum", &e)],
    };
    out.extend(spectrum_records(&SpectralFamily::TildeH { alpha: 0.0, q: qb(0.5) }, &orders, Some(1e-3)));
    out
}

/// Orthonormality of `φ_0 … φ_nmax` as a record.
pub fn orthonormality_record(family: &PolynomialFamily, nmax: usize, tol: f64) -> CheckRecord {
    let name = "orthonormality";
    let rec = record(name, orthonormality_check(family, nmax, tol), |c| {
        CheckRecord::with_outcome(name, c.max_residual, tol, c.status)
            .detail(format!("worst (m,n) = {:?}, nodes {:?}", c.worst, c.orders))
    })
    .input("family", family.name())
    .input("nmax", nmax);
    match family {
        PolynomialFamily::AlSalamChihara(p) => rec.input("a", p.a).input("b", p.b).input("q", p.q.value()),
        PolynomialFamily::ContinuousQLaguerre { alpha, q } => rec.input("alpha", alpha).input("q", q.value()),
        PolynomialFamily::BigQHermite { a, q } => rec.input("a", a).input("q", q.value()),
    }
}

fn criterion_8() -> Vec<CheckRecord> {
    let mut families = Vec::new();
    for (a, b, q) in [(0.3, 0.2, 0.5), (-0.5, 0.4, 0.6)] {
        match asc(a, b, q) {
            Ok(p) => families.push(PolynomialFamily::AlSalamChihara(p)),
            Err(e) => return vec![CheckRecord::failed("orthonormality", &e)],
        }
    }
    families.push(PolynomialFamily::ContinuousQLaguerre { alpha: 0.5, q: qb(0.5) });
    families.push(PolynomialFamily::ContinuousQLaguerre { alpha: -0.3, q: qb(0.4) });
    families.par_iter().map(|f| orthonormality_record(f, 20, 1e-8)).collect()
}

/// Records for one integral identity over `0 <= m, n <= nmax`: the largest
/// relative residual, and for the Al-Salam--Chihara display the largest
/// mismatch with the matrix entries.
pub fn integral_records(id: &IntegralIdentity, nmax: usize, tol: f64) -> Vec<CheckRecord> {
    let name = "integral identity";
    let checks = match integral_identity_grid(id, nmax, tol) {
        Ok(c) => c,
        Err(e) => return vec![CheckRecord::failed(name, &e).input("identity", id.tag())],
    };
    let status = |ok: bool| {
        if checks.iter().any(|c| c.status == CheckStatus::Inconclusive) {
            CheckStatus::Inconclusive
        } else {
            CheckStatus::from_bool(ok)
        }
    };
    let worst = checks.iter().map(|c| c.relative_residual).fold(0.0, f64::max);
    let nodes = checks.first().map(|c| c.orders.clone()).unwrap_or_default();
    let tag = |r: CheckRecord| r.input("identity", id.tag()).inputs_from(&id.parameters()).input("nmax", nmax);
    let mut out =
        vec![tag(CheckRecord::with_outcome(name, worst, tol, status(worst < tol))).detail(format!("nodes {nodes:?}"))];
    if matches!(id, IntegralIdentity::Asc(_)) {
        let m = checks.iter().filter_map(|c| c.matrix_residual).fold(0.0, f64::max);
        out.push(tag(CheckRecord::with_outcome("integral identity vs H entry", m, 1e-8, status(m < 1e-8))));
    }
    out
}

fn criterion_9() -> Vec<CheckRecord> {
    let mut ids = Vec::new();
    match asc(0.3, 0.2, 0.5) {
        Ok(p) => ids.push(IntegralIdentity::Asc(p)),
        Err(e) => return vec![CheckRecord::failed("integral identity", &e)],
    }
    ids.push(IntegralIdentity::QlagBar { alpha: 0.5, q: qb(0.5) });
    ids.push(IntegralIdentity::QlagSemi { alpha: 0.5, q: qb(0.5) });
    ids.push(IntegralIdentity::BigHermite { a: 0.5, q: qb(0.5) });
    ids.par_iter().flat_map(|id| integral_records(id, 5, 1e-7)).collect()
}

/// `max |(𝒥 M - I)_{m,n}|` over the interior `m, n < N - margin`.
pub fn jcal_inverse_residual(q: QBase, order: usize, margin: usize) -> Result<f64> {
    let j = build_jcal(q, order)?;
    let m = jcal_inverse_matrix(q, order, 1e-16)?;
    let prod = j.matmul(&m)?;
    let inner = order.saturating_sub(margin);
    let mut worst: f64 = 0.0;
    for r in 0..inner {
        for c in 0..inner {
            worst = worst.max((prod[r * order + c] - if r == c { 1.0 } else { 0.0 }).abs());
        }
    }
    Ok(worst)
}

/// `|trace_{N+20} - trace_N|` for `ℋ_ν(q;ε)`.
pub fn trace_stability(p: &QuantumHilbertParams, terms: usize) -> Result<f64> {
    Ok((quantum_hilbert_trace(p, terms + 20)?.value() - quantum_hilbert_trace(p, terms)?.value()).abs())
}

fn criterion_10() -> Vec<CheckRecord> {
    let q = qb(0.5);
    let name = "Jcal times inverse entries equals identity";
    let inv = record(name, jcal_inverse_residual(q, 60, 2), |v| CheckRecord::below(name, v, 1e-8))
        .input("q", 0.5)
        .input("N", 60)
        .input("margin", 2);
    let name = "trace estimate stable under N -> N+20";
    let tr = record(name, QuantumHilbertParams::gcal(0.5).and_then(|p| trace_stability(&p, 60)), |v| {
        CheckRecord::below(name, v, 1e-12)
    })
    .input("q", 0.5)
    .input("N", 60);
    vec![inv, tr]
}

fn criterion_11() -> Vec<CheckRecord> {
    let name = "eigenvalue interlacing";
    let matrices = [
        ("asc", asc(0.3, 0.2, 0.5).and_then(|p| crate::operators::build_h(&p, 61))),
        ("tildeh", build_tilde_h(0.0, qb(0.5), 61)),
        ("gcal", build_gcal(qb(0.5), 61)),
    ];
    matrices
        .into_par_iter()
        .map(|(fam, m)| {
            record(name, m.and_then(|m| interlacing_violation(&m)), |v| CheckRecord::below(name, v.max(0.0), 1e-12))
                .input("family", fam)
                .input("N", 60)
        })
        .collect()
}

/// Runs criterion `id` (1–11).
pub fn run_criterion(id: u8, opts: &SuiteOptions) -> Option<CriterionResult> {
    let &(_, title, limit) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let records = match id {
        1 => criterion_1(opts),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        11 => criterion_11(),
        _ => unreachable!("criterion ids are 1..=11"),
    };
    Some(CriterionResult { id, title, records, seconds: start.elapsed().as_secs_f64(), runtime_limit_seconds: limit })
}

/// Runs all criteria in order.
pub fn run_all(opts: &SuiteOptions) -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.0, opts)).collect()
}
