//! Command-line front end. `run` parses arguments, dispatches a subcommand and
//! returns the process exit code: 0 when every check passes, 1 when any check
//! fails, 2 on usage or parameter-domain errors.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{
    build_classical, build_gcal, build_j, build_jcal, build_quantum_hilbert, ClassicalBuilder, DenseSymmetricMatrix,
    QuantumHilbertParams,
};
use crate::polyfam::{qlaguerre_params, AscParams};
use crate::qcore::QBase;
use crate::report::{CheckRecord, Report};
use crate::spectral::{commutator_interior_max, eigenvalues, SpectralFamily};
use crate::suite::{
    identity_suite, jcal_inverse_residual, run_all, run_criterion, spectrum_records, trace_stability, SuiteOptions,
};
use crate::verify::{integral_identity_grid, IntegralIdentity};

/// Environment variable consulted when `--tol` is not given.
pub const TOL_ENV: &str = "QHANKEL_TOL";

#[derive(Debug, Parser)]
#[command(name = "qhankel", version, about = "Quantum weighted Hankel matrices and their spectral checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Emit a matrix truncation
    Build,
    /// Check that a matrix commutes with its Jacobi matrix
    Commute,
    /// Compare truncation spectra with the closed-form interval and norm
    Spectrum,
    /// Evaluate the q-series identities on a seeded random grid
    Identities,
    /// Check the integral identities for the Hankel entries over an (m,n) grid
    Integrals,
    /// Eigenvalues, inverse and trace of the quantum Hilbert matrices
    HilbertExplore,
    /// Run the full acceptance suite
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Asc,
    G,
    Tildeh,
    QuantumHilbert,
    Gcal,
    Hilbert,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityKind {
    Asc,
    QlagBar,
    QlagSemi,
    BigHermite,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Options {
    /// Matrix family
    #[arg(long, global = true, value_enum)]
    pub family: Option<Family>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Base q in (0, 1)
    #[arg(long, global = true)]
    pub q: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Truncation order(s), comma separated
    #[arg(long = "N", global = true, value_delimiter = ',')]
    pub orders: Vec<usize>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub out: Format,
    /// Write the output to this file instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Tolerance override (falls back to QHANKEL_TOL, then the check's default)
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Number of random points per identity
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Seed of the ChaCha8 generator for random grids
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Largest polynomial index for integral checks
    #[arg(long, global = true)]
    pub mmax: Option<usize>,
    /// Integral identity to check (default: all four)
    #[arg(long, global = true, value_enum)]
    pub identity: Option<IdentityKind>,
    /// Acceptance criteria to run (default: all)
    #[arg(long, global = true, value_delimiter = ',')]
    pub criterion: Vec<u8>,
    /// Hexadecimal floats in matrix CSV output
    #[arg(long, global = true)]
    pub hex: bool,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn need(v: Option<f64>, flag: &str, family: &str) -> Result<f64> {
    v.ok_or_else(|| usage(format!("family {family} requires --{flag}")))
}

/// A validated family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilySpec {
    Spectral(SpectralFamily),
    QuantumHilbert(QuantumHilbertParams),
    Gcal(QBase),
    Hilbert { nu: f64 },
    B { a: f64, b: f64, c: f64 },
}

impl FamilySpec {
    pub fn from_options(o: &Options) -> Result<Self> {
        let family = o.family.ok_or_else(|| usage("--family is required"))?;
        let name = format!("{family:?}").to_lowercase();
        let q = || QBase::new(need(o.q, "q", &name)?);
        Ok(match family {
            Family::Asc => FamilySpec::Spectral(SpectralFamily::Asc(AscParams::new(
                need(o.a, "a", &name)?,
                need(o.b, "b", &name)?,
                need(o.q, "q", &name)?,
            )?)),
            Family::G => {
                let a = need(o.a, "a", &name)?;
                let q = q()?;
                AscParams::new(a, a * q.pow(0.5), q.value())?;
                FamilySpec::Spectral(SpectralFamily::G { a, q })
            }
            Family::Tildeh => {
                let alpha = need(o.alpha, "alpha", &name)?;
                let q = q()?;
                qlaguerre_params(alpha, q.squared())?;
                FamilySpec::Spectral(SpectralFamily::TildeH { alpha, q })
            }
            Family::QuantumHilbert => FamilySpec::QuantumHilbert(QuantumHilbertParams::new(
                need(o.nu, "nu", &name)?,
                need(o.q, "q", &name)?,
                need(o.eps, "eps", &name)?,
            )?),
            Family::Gcal => FamilySpec::Gcal(q()?),
            Family::Hilbert => {
                let nu = need(o.nu, "nu", &name)?;
                build_classical(ClassicalBuilder::Hilbert { nu }, 1)?;
                FamilySpec::Hilbert { nu }
            }
            Family::B => {
                let (a, b, c) = (need(o.a, "a", &name)?, need(o.b, "b", &name)?, need(o.c, "c", &name)?);
                build_classical(ClassicalBuilder::B { a, b, c }, 1)?;
                FamilySpec::B { a, b, c }
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Spectral(f) => f.name(),
            FamilySpec::QuantumHilbert(_) => "quantum-hilbert",
            FamilySpec::Gcal(_) => "gcal",
            FamilySpec::Hilbert { .. } => "hilbert",
            FamilySpec::B { .. } => "b",
        }
    }

    pub fn build(&self, order: usize) -> Result<DenseSymmetricMatrix> {
        match *self {
            FamilySpec::Spectral(f) => f.build(order),
            FamilySpec::QuantumHilbert(p) => build_quantum_hilbert(&p, order),
            FamilySpec::Gcal(q) => build_gcal(q, order),
            FamilySpec::Hilbert { nu } => build_classical(ClassicalBuilder::Hilbert { nu }, order),
            FamilySpec::B { a, b, c } => build_classical(ClassicalBuilder::B { a, b, c }, order),
        }
    }

    /// Jacobi matrix expected to commute with the family.
    pub fn jacobi(&self, order: usize) -> Result<DenseSymmetricMatrix> {
        match *self {
            FamilySpec::Spectral(SpectralFamily::Asc(p)) => build_j(&p, order),
            FamilySpec::Spectral(SpectralFamily::G { a, q }) => {
                build_j(&AscParams::new(a, a * q.pow(0.5), q.value())?, order)
            }
            FamilySpec::Spectral(SpectralFamily::TildeH { alpha, q }) => {
                build_j(&qlaguerre_params(alpha, q.squared())?, order)
            }
            FamilySpec::QuantumHilbert(p) => build_jcal(p.q, order),
            FamilySpec::Gcal(q) => build_jcal(q, order),
            FamilySpec::Hilbert { nu } => build_classical(ClassicalBuilder::BJacobi { a: nu, b: nu, c: 1.0 }, order),
            FamilySpec::B { a, b, c } => build_classical(ClassicalBuilder::BJacobi { a, b, c }, order),
        }
    }

    fn default_commute_tol(&self) -> f64 {
        match self {
            FamilySpec::Spectral(SpectralFamily::Asc(_)) => 1e-11,
            _ => 1e-9,
        }
    }
}

fn tolerance(o: &Options, default: f64) -> Result<f64> {
    let tol = match o.tol {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s.trim().parse().map_err(|_| usage(format!("{TOL_ENV}={s} is not a number")))?,
            Err(_) => default,
        },
    };
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(usage(format!("tolerance must be positive, got {tol}")))
    }
}

fn orders(o: &Options, default: &[usize]) -> Result<Vec<usize>> {
    let v = if o.orders.is_empty() { default.to_vec() } else { o.orders.clone() };
    if v.contains(&0) {
        return Err(usage("--N values must be at least 1"));
    }
    Ok(v)
}

/// Output of a subcommand: a report, or a bare matrix for `build`.
enum Output {
    Report(Box<Report>),
    Matrix(DenseSymmetricMatrix),
}

fn execute(command: Command, o: &Options) -> Result<Output> {
    let mut report =
        Report::new(serde_json::to_value(command)?.as_str().unwrap_or_default(), ConfigEcho { command, options: o });
    let start = Instant::now();
    match command {
        Command::Build => {
            let spec = FamilySpec::from_options(o)?;
            let n = orders(o, &[])?;
            let &[n] = n.as_slice() else {
                return Err(usage("build needs exactly one --N"));
            };
            return Ok(Output::Matrix(spec.build(n)?));
        }
        Command::Commute => {
            let spec = FamilySpec::from_options(o)?;
            let tol = tolerance(o, spec.default_commute_tol())?;
            for n in orders(o, &[40])? {
                let name = format!("commutator {}", spec.name());
                let r = (|| {
                    let m = spec.build(n)?;
                    Ok(commutator_interior_max(&spec.jacobi(n)?, &m, 1)? / m.max_abs())
                })();
                report.records.push(
                    match r {
                        Ok(v) => CheckRecord::below(&name, v, tol),
                        Err(e) => CheckRecord::failed(&name, &e),
                    }
                    .input("N", n)
                    .input("margin", 1),
                );
            }
        }
        Command::Spectrum => {
            let FamilySpec::Spectral(f) = FamilySpec::from_options(o)? else {
                return Err(usage("spectrum needs a family with a closed-form multiplier: asc, g or tildeh"));
            };
            let ns = orders(o, &[50, 100, 200])?;
            report.extend(spectrum_records(&f, &ns, o.tol));
            report.set_data(crate::spectral::spectral_theorem_report(&f, &ns)?)?;
        }
        Command::Identities => {
            let q = o.q.map(QBase::new).transpose()?;
            let tol = tolerance(o, 1e-10)?;
            let blocks = identity_suite(q, o.grid.unwrap_or(100), tol, o.seed);
            report.extend(blocks.iter().map(|b| b.to_record().input("seed", o.seed)));
            report.set_data(&blocks)?;
        }
        Command::Integrals => {
            let tol = tolerance(o, 1e-7)?;
            let mmax = o.mmax.unwrap_or(5);
            let mut checks = Vec::new();
            for id in integral_identities(o)? {
                for c in integral_identity_grid(&id, mmax, tol)? {
                    let mut r = CheckRecord::with_outcome("integral identity", c.relative_residual, tol, c.status)
                        .input("identity", &c.identity)
                        .input("m", c.m)
                        .input("n", c.n)
                        .inputs_from(&c.parameters);
                    if let Some(mr) = c.matrix_residual {
                        r = r.detail(format!("matrix entry residual {mr:e}"));
                    }
                    report.records.push(r);
                    checks.push(c);
                }
            }
            report.set_data(&checks)?;
        }
        Command::HilbertExplore => {
            let q = QBase::new(o.q.unwrap_or(0.5))?;
            let tol = tolerance(o, 1e-8)?;
            let mut records = Vec::new();
            let rows = hilbert_explore(q, &orders(o, &[20, 40, 60])?, tol, &mut records)?;
            report.extend(records);
            report.set_data(rows)?;
        }
        Command::Selftest => {
            let opts = SuiteOptions { seed: o.seed, ..SuiteOptions::default() };
            let results = if o.criterion.is_empty() {
                run_all(&opts)
            } else {
                o.criterion
                    .iter()
                    .map(|&c| run_criterion(c, &opts).ok_or_else(|| usage(format!("no criterion {c}"))))
                    .collect::<Result<_>>()?
            };
            for c in &results {
                report.extend(
                    c.records
                        .iter()
                        .cloned()
                        .map(|r| CheckRecord { name: format!("criterion {:02}: {}", c.id, r.name), ..r }),
                );
                if let Some(limit) = c.runtime_limit_seconds {
                    report.records.push(
                        CheckRecord::below(format!("criterion {:02}: runtime seconds", c.id), c.seconds, limit)
                            .detail("wall time"),
                    );
                }
            }
        }
    }
    report.finalize(start.elapsed().as_secs_f64());
    Ok(Output::Report(Box::new(report)))
}

#[derive(Serialize)]
struct ConfigEcho<'a> {
    command: Command,
    options: &'a Options,
}

fn integral_identities(o: &Options) -> Result<Vec<IntegralIdentity>> {
    let kinds = match o.identity {
        Some(k) => vec![k],
        None => vec![IdentityKind::Asc, IdentityKind::QlagBar, IdentityKind::QlagSemi, IdentityKind::BigHermite],
    };
    let q = QBase::new(o.q.unwrap_or(0.5))?;
    kinds
        .into_iter()
        .map(|k| {
            Ok(match k {
                IdentityKind::Asc => {
                    IntegralIdentity::Asc(AscParams::new(o.a.unwrap_or(0.3), o.b.unwrap_or(0.2), q.value())?)
                }
                IdentityKind::QlagBar => IntegralIdentity::QlagBar { alpha: o.alpha.unwrap_or(0.5), q },
                IdentityKind::QlagSemi => IntegralIdentity::QlagSemi { alpha: o.alpha.unwrap_or(0.5), q },
                IdentityKind::BigHermite => {
                    let a = o.a.unwrap_or(0.5);
                    AscParams::new(a, 0.0, q.value())?;
                    IntegralIdentity::BigHermite { a, q }
                }
            })
        })
        .collect()
}

/// Per-order data of the quantum Hilbert study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HilbertExploreRow {
    pub order: usize,
    pub gcal_max_eigenvalue: f64,
    pub gcal_eigenvalue_sum: f64,
    pub jcal_min_eigenvalue: f64,
    pub jcal_inverse_residual: f64,
    pub trace_estimate: f64,
    pub trace_tail_bound: f64,
}

fn hilbert_explore(q: QBase, ns: &[usize], tol: f64, records: &mut Vec<CheckRecord>) -> Result<Vec<HilbertExploreRow>> {
    let mut rows = Vec::new();
    let p = QuantumHilbertParams::gcal(q.value())?;
    for &n in ns {
        let g = build_gcal(q, n)?;
        let ge = eigenvalues(&g)?;
        let je = eigenvalues(&build_jcal(q, n)?)?;
        let comm = commutator_interior_max(&build_jcal(q, n)?, &g, 1)? / g.max_abs();
        let inv = if n > 2 { jcal_inverse_residual(q, n, 2)? } else { 0.0 };
        let trace = crate::operators::quantum_hilbert_trace(&p, n)?;
        records.push(CheckRecord::below("commutator Jcal Gcal", comm, 1e-9).input("q", q.value()).input("N", n));
        records.push(CheckRecord::below("Jcal inverse residual", inv, tol).input("q", q.value()).input("N", n));
        let stab = trace_stability(&p, n)?;
        // the difference of two partial sums carries a few ulps of the sum on top of the tail
        let allowed = (trace.tail_bound + 8.0 * f64::EPSILON * trace.value()).max(1e-12);
        records.push(
            CheckRecord::below("trace stable under N -> N+20", stab, allowed).input("q", q.value()).input("N", n),
        );
        rows.push(HilbertExploreRow {
            order: n,
            gcal_max_eigenvalue: *ge.last().unwrap_or(&f64::NAN),
            gcal_eigenvalue_sum: ge.iter().sum(),
            jcal_min_eigenvalue: je[0],
            jcal_inverse_residual: inv,
            trace_estimate: trace.value(),
            trace_tail_bound: trace.tail_bound,
        });
    }
    Ok(rows)
}

fn emit(text: &str, o: &Options) -> Result<()> {
    match &o.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.options.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("qhankel: cannot configure {n} threads: {e}");
            return 2;
        }
    }
    let o = &cli.options;
    let result = execute(cli.command, o).and_then(|out| match out {
        Output::Matrix(m) => {
            let text = match o.out {
                Format::Json => m.to_json()? + "\n",
                Format::Csv => m.to_csv(o.hex),
            };
            emit(&text, o).map(|_| 0)
        }
        Output::Report(r) => {
            let text = match o.out {
                Format::Json => r.to_json()? + "\n",
                Format::Csv => r.to_csv()?,
            };
            emit(&text, o)?;
            let s = r.summary;
            eprintln!("qhankel: {} pass, {} fail, {} inconclusive", s.pass, s.fail, s.inconclusive);
            Ok(r.exit_code())
        }
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qhankel: {e}");
            match e {
                Error::Io(_) | Error::Json(_) => 1,
                _ => 2,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("qhankel").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_after_subcommand() {
        let c = parse(&["spectrum", "--family", "asc", "--a", "-0.3", "--b", "0.2", "--q", "0.5", "--N", "50,100"]);
        assert_eq!(c.command, Command::Spectrum);
        assert_eq!(c.options.a, Some(-0.3));
        assert_eq!(c.options.orders, vec![50, 100]);
        assert_eq!(c.options.seed, 42);
    }

    #[test]
    fn family_validation() {
        let c = parse(&["build", "--family", "asc", "--a", "1.5", "--b", "0.2", "--q", "0.5"]);
        assert!(matches!(FamilySpec::from_options(&c.options), Err(Error::Domain(_))));
        let c = parse(&["build", "--family", "g", "--q", "0.5"]);
        assert!(FamilySpec::from_options(&c.options).is_err());
        let c = parse(&["build", "--family", "gcal", "--q", "0.5"]);
        assert_eq!(FamilySpec::from_options(&c.options).unwrap().name(), "gcal");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["qhankel", "frobnicate"]), 2);
        assert_eq!(run(["qhankel", "build", "--family", "asc", "--N", "4"]), 2);
        assert_eq!(run(["qhankel", "build", "--family", "tildeh", "--alpha", "0", "--q", "1.5", "--N", "4"]), 2);
    }

    #[test]
    fn commute_every_family() {
        let cases: [&[&str]; 7] = [
            &["--family", "asc", "--a", "0.3", "--b", "0.2", "--q", "0.5"],
            &["--family", "g", "--a", "0.4", "--q", "0.36"],
            &["--family", "tildeh", "--alpha", "0.5", "--q", "0.5"],
            &["--family", "quantum-hilbert", "--nu", "1", "--eps", "1", "--q", "0.5"],
            &["--family", "gcal", "--q", "0.7"],
            &["--family", "hilbert", "--nu", "1.5"],
            &["--family", "b", "--a", "1.2", "--b", "0.8", "--c", "1.5"],
        ];
        for args in cases {
            let c = parse(&[&["commute", "--N", "30"], args].concat());
            let Output::Report(r) = execute(c.command, &c.options).unwrap() else { panic!() };
            assert_eq!(r.exit_code(), 0, "{args:?}: {:?}", r.records);
        }
    }
}
