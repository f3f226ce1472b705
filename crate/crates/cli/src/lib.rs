//! The `limitcoh` command line.

mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use limitcoh_core::complexes::koszul::DEFAULT_NMAX;
use limitcoh_core::complexes::koszul_selftest;
use limitcoh_core::degeneration::{
    builtin_spec, chi_report, clemens_schmid, limit_cohomology, validate_fiber, ChiReport, FiberSpec, SemistableFiber,
    BUILTIN_NAMES,
};
use limitcoh_core::phimod::{hom_ext_phi, hom_ext_phin, wm_check, PhiNModule};
use limitcoh_core::{io, Error, Field, Scalar};
use serde_json::Value;

pub use report::{sha256_hex, Table, SIGN_CONVENTION};
use report::{weight_list, Report};

pub const DEFAULT_PRIME: u64 = 3;

const LIMIT_TSV: &str = "TSV columns (limit): degree, dim, weights, n_rank, phi_weight_basis, n_weight_basis";
const CS_TSV: &str = "TSV columns (cs): thread, position, node, degree, dim, image, kernel, exact";
const WM_TSV: &str = "TSV columns (wm): degree, center, k, source_dim, target_dim, rank, pass";
const CHI_TSV: &str = "TSV columns (chi): degree, weight, fiber_dim, splice_dim";
const EXT_TSV: &str = "TSV columns (ext): category, degree, dim";
const SELFTEST_TSV: &str = "TSV columns (selftest): check, pass, detail";

#[derive(Parser, Debug)]
#[command(name = "limitcoh", version, about = "Exact limit cohomology of semistable degenerations")]
struct Cli {
    /// Residue characteristic for examples and module files; falls back to
    /// LIMITCOH_PRIME, then 3. Description files carry their own prime.
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Tab-separated output.
    #[arg(long, global = true)]
    tsv: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Input {
    /// Degeneration description (JSON).
    file: Option<PathBuf>,
    /// Built-in example instead of a file.
    #[arg(long)]
    example: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Limit cohomology with Frobenius weights and monodromy.
    #[command(after_help = LIMIT_TSV)]
    Limit {
        #[command(flatten)]
        input: Input,
        /// Multiply N by this rational, e.g. for another uniformizer.
        #[arg(long, allow_hyphen_values = true)]
        rescale: Option<String>,
    },
    /// Clemens-Schmid threads with exactness per node.
    #[command(after_help = CS_TSV)]
    Cs {
        #[command(flatten)]
        input: Input,
    },
    /// Weight-monodromy check, on a module file or on limit cohomology.
    #[command(after_help = WM_TSV)]
    Wm {
        #[command(flatten)]
        input: Input,
        /// Center of symmetry for a module file (default: its degree, 0).
        #[arg(long, allow_hyphen_values = true)]
        center: Option<i64>,
    },
    /// Nearby fixed part, computed as the fiber of N and by splicing.
    #[command(after_help = CHI_TSV)]
    Chi {
        #[command(flatten)]
        input: Input,
    },
    /// Hom and Ext between two module files.
    #[command(after_help = EXT_TSV)]
    Ext { source: PathBuf, target: PathBuf },
    /// List built-in examples, or print one as a description file.
    Example { name: Option<String> },
    /// Internal identity checks.
    #[command(after_help = SELFTEST_TSV)]
    Selftest {
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_NMAX)]
        nmax: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Suite {
    Koszul,
}

/// Exit status and everything written to standard output and error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String, pass: bool) -> Self {
        Outcome { status: if pass { 0 } else { 1 }, stdout, stderr: String::new() }
    }

    fn error(e: &Error) -> Self {
        let status = match e {
            Error::NotAComplex { .. } | Error::Mismatch { .. } => 1,
            _ => 2,
        };
        Outcome { status, stdout: String::new(), stderr: format!("error: {e}\n") }
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { status: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { status: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => Outcome::error(&e),
    }
}

fn input_error(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))
}

pub const PRIME_ENV: &str = "LIMITCOH_PRIME";

/// `--prime`, else the environment, else the default.
fn prime(cli: &Cli) -> Result<u64, Error> {
    if let Some(p) = cli.prime {
        return Ok(p);
    }
    match std::env::var(PRIME_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| input_error(format!("{PRIME_ENV}={s:?} is not a number"))),
        Err(_) => Ok(DEFAULT_PRIME),
    }
}

fn field(cli: &Cli) -> Result<Field, Error> {
    Field::new(prime(cli)?)
}

/// A loaded fiber with the bytes that identify it.
struct Loaded {
    fiber: SemistableFiber,
    name: String,
    hash: String,
}

fn load_fiber(cli: &Cli, input: &Input) -> Result<Loaded, Error> {
    if let Some(name) = &input.example {
        let p = prime(cli)?;
        let spec = builtin_spec(name, p)?;
        let hash = sha256_hex(&[b"example", name.as_bytes(), p.to_string().as_bytes()]);
        return Ok(Loaded { fiber: validate_fiber(&spec)?, name: name.clone(), hash });
    }
    let path = input.file.as_ref().expect("clap requires an input");
    let text = read(path)?;
    let spec = io::parse_fiber_spec(&text)?;
    check_prime(cli, &spec)?;
    Ok(Loaded { fiber: validate_fiber(&spec)?, name: path.display().to_string(), hash: sha256_hex(&[text.as_bytes()]) })
}

fn check_prime(cli: &Cli, spec: &FiberSpec) -> Result<(), Error> {
    match cli.prime {
        Some(p) if p != spec.prime => {
            Err(input_error(format!("--prime {p} conflicts with prime {} in the description file", spec.prime)))
        }
        _ => Ok(()),
    }
}

fn parse_rescale(s: &str) -> Result<Scalar, Error> {
    io::rational_from_str(s)
        .map(Scalar::rational)
        .ok_or_else(|| input_error(format!("--rescale expects a rational like 2 or -1/3, got {s:?}")))
}

fn header(report: &mut Report, what: &str, loaded: &Loaded) {
    let fiber = &loaded.fiber;
    report.note(format!(
        "{what} of {} (p = {}, relative dimension {}, {} components)",
        loaded.name,
        fiber.prime(),
        fiber.relative_dimension(),
        fiber.components().len()
    ));
    if fiber.components().len() > 2 {
        report.note("conjectural normalization: bicomplex used as a definition for more than two components");
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.verb {
        Verb::Limit { input, rescale } => limit(cli, input, rescale.as_deref()),
        Verb::Cs { input } => cs(cli, input),
        Verb::Wm { input, center } => wm(cli, input, *center),
        Verb::Chi { input } => chi(cli, input),
        Verb::Ext { source, target } => ext(cli, source, target),
        Verb::Example { name } => example(cli, name.as_deref()),
        Verb::Selftest { suite: Suite::Koszul, nmax } => selftest(cli, *nmax),
    }
}

fn limit(cli: &Cli, input: &Input, rescale: Option<&str>) -> Result<Outcome, Error> {
    let loaded = load_fiber(cli, input)?;
    let scale = rescale.map(parse_rescale).transpose()?;
    let lc = limit_cohomology(&loaded.fiber, scale.as_ref())?;
    let f = loaded.fiber.field();
    let mut r = Report::new(cli.tsv);
    header(&mut r, "limit cohomology", &loaded);
    if let Some(s) = &scale {
        r.note(format!("monodromy rescaled by {s}"));
    }
    let mut t = Table::new(&["degree", "dim", "weights", "n_rank", "phi_weight_basis", "n_weight_basis"]);
    for (n, d) in &lc.degrees {
        t.row(vec![
            n.to_string(),
            d.dim().to_string(),
            weight_list(&d.weights),
            d.n_rank.to_string(),
            d.phi_weight_basis.to_string(),
            d.n_weight_basis.to_string(),
        ]);
    }
    r.table(&t);
    r.blank();
    for (n, d) in &lc.degrees {
        if d.n_rank > 0 {
            r.note(format!("degree {n}: N in the weight basis, first nonzero entry scaled to 1: {}", d.normalized_n(f)));
        }
    }
    r.note(format!("weight spectral sequence: stable from E{}", lc.weight_ss.degeneration_page.max(1)));
    r.verdict("E2 degeneration", lc.weight_ss.degenerates_at_e2);
    r.verdict("weight filtration equals Frobenius filtration", lc.filtration_matches_frobenius);
    r.verdict("N lowers weight by exactly two", lc.only_lowers_by_two);
    let pass = r.passed();
    Ok(Outcome::ok(r.finish(&loaded.hash), pass))
}

fn cs(cli: &Cli, input: &Input) -> Result<Outcome, Error> {
    let loaded = load_fiber(cli, input)?;
    let rep = clemens_schmid(&loaded.fiber)?;
    let mut r = Report::new(cli.tsv);
    header(&mut r, "Clemens-Schmid sequence", &loaded);
    r.note("threads by parity: H^n(X_k) -> H^n_lim -> H^n_lim(-1) -> H_{2d-n}(X_k)(-d-1) -> H^{n+2}(X_k) -> ...");
    let mut t = Table::new(&["thread", "position", "node", "degree", "dim", "image", "kernel", "exact"]);
    for th in &rep.threads {
        let name = if th.parity == 0 { "even" } else { "odd" };
        for (i, node) in th.nodes.iter().enumerate() {
            t.row(vec![
                name.into(),
                i.to_string(),
                node.label.clone(),
                node.degree.to_string(),
                node.dim.to_string(),
                node.image.to_string(),
                node.kernel.to_string(),
                if node.exact() { "yes" } else { "no" }.into(),
            ]);
        }
    }
    r.table(&t);
    if rep.monodromy_zero {
        r.note(format!(
            "N = 0: specialization and the map to homology are {}isomorphisms",
            if rep.duality_isomorphisms { "" } else { "not " }
        ));
    }
    r.verdict("consecutive composites vanish", true);
    r.verdict("exact at every node", rep.all_exact());
    r.verdict("weight-monodromy at every degree", rep.wm_pass());
    let pass = r.passed();
    Ok(Outcome::ok(r.finish(&loaded.hash), pass))
}

fn wm_table(reports: &[(i64, limitcoh_core::phimod::WmReport)], r: &mut Report) {
    let mut t = Table::new(&["degree", "center", "k", "source_dim", "target_dim", "rank", "pass"]);
    for (n, w) in reports {
        for b in &w.blocks {
            let ok = b.source_dim == b.target_dim && b.rank == b.source_dim;
            t.row(vec![
                n.to_string(),
                w.center.to_string(),
                b.k.to_string(),
                b.source_dim.to_string(),
                b.target_dim.to_string(),
                b.rank.to_string(),
                if ok { "yes" } else { "no" }.into(),
            ]);
        }
    }
    r.table(&t);
    for (n, w) in reports {
        r.verdict(format!("weight-monodromy in degree {n}"), w.pass);
    }
}

fn is_module_file(v: &Value) -> bool {
    v.get("dim").is_some() && v.get("strata").is_none()
}

fn wm(cli: &Cli, input: &Input, center: Option<i64>) -> Result<Outcome, Error> {
    if let Some(path) = &input.file {
        let text = read(path)?;
        let v = io::parse_json(&text)?;
        if is_module_file(&v) {
            let f = field(cli)?;
            let d = io::module_from_value(&v, &f)?;
            let c = center.unwrap_or(0);
            let rep = wm_check(&d, c, &f)?;
            let mut r = Report::new(cli.tsv);
            r.note(format!("weight-monodromy of {} (p = {}, center {c})", path.display(), f.p()));
            wm_table(&[(0, rep)], &mut r);
            let pass = r.passed();
            return Ok(Outcome::ok(r.finish(&sha256_hex(&[text.as_bytes()])), pass));
        }
    }
    let loaded = load_fiber(cli, input)?;
    let lc = limit_cohomology(&loaded.fiber, None)?;
    let f = loaded.fiber.field();
    let mut r = Report::new(cli.tsv);
    header(&mut r, "weight-monodromy of limit cohomology", &loaded);
    let mut reps = Vec::new();
    for (&n, d) in &lc.degrees {
        reps.push((n, wm_check(&d.module, center.unwrap_or(n), f)?));
    }
    wm_table(&reps, &mut r);
    let pass = r.passed();
    Ok(Outcome::ok(r.finish(&loaded.hash), pass))
}

fn chi(cli: &Cli, input: &Input) -> Result<Outcome, Error> {
    let loaded = load_fiber(cli, input)?;
    let rep = chi_report(&loaded.fiber)?;
    let mut r = Report::new(cli.tsv);
    header(&mut r, "nearby fixed part", &loaded);
    r.note("fiber_dim: homology of the fiber of N; splice_dim: special-fiber complexes spliced along the cycle class");
    let mut t = Table::new(&["degree", "weight", "fiber_dim", "splice_dim"]);
    let mut keys = std::collections::BTreeSet::new();
    for prof in [&rep.fiber_profile, &rep.splice_profile] {
        for (&n, ws) in prof {
            for &w in ws.keys() {
                keys.insert((n, w));
            }
        }
    }
    let get = |p: &limitcoh_core::degeneration::Profile, n: i64, w: i64| p.get(&n).and_then(|x| x.get(&w)).copied().unwrap_or(0);
    for (n, w) in keys {
        t.row(vec![
            n.to_string(),
            w.to_string(),
            get(&rep.fiber_profile, n, w).to_string(),
            get(&rep.splice_profile, n, w).to_string(),
        ]);
    }
    r.table(&t);
    r.blank();
    r.note(format!("dims per degree: {:?}", ChiReport::dims(&rep.fiber_profile)));
    if let Some(n) = rep.first_mismatch {
        r.note(format!("first mismatch in degree {n}"));
    }
    r.verdict("both routes agree", rep.pass());
    let pass = r.passed();
    Ok(Outcome::ok(r.finish(&loaded.hash), pass))
}

fn load_module(path: &Path, f: &Field) -> Result<(PhiNModule, String), Error> {
    let text = read(path)?;
    let d = io::parse_module(&text, f).map_err(|e| match e {
        Error::Parse { location, message } => Error::Parse { location: format!("{}: {location}", path.display()), message },
        other => other,
    })?;
    Ok((d, text))
}

fn ext(cli: &Cli, source: &Path, target: &Path) -> Result<Outcome, Error> {
    let f = field(cli)?;
    let (d, td) = load_module(source, &f)?;
    let (e, te) = load_module(target, &f)?;
    let phi = hom_ext_phi(d.base(), e.base(), &f);
    let phin = hom_ext_phin(&d, &e, &f)?;
    let mut r = Report::new(cli.tsv);
    r.note(format!("Hom and Ext from {} to {} (p = {})", source.display(), target.display(), f.p()));
    let mut t = Table::new(&["category", "degree", "dim"]);
    t.row(vec!["phi".into(), "0".into(), phi.hom_dim.to_string()]);
    t.row(vec!["phi".into(), "1".into(), phi.ext1_dim.to_string()]);
    t.row(vec!["phi-N".into(), "0".into(), phin.ext0_dim.to_string()]);
    t.row(vec!["phi-N".into(), "1".into(), phin.ext1_dim.to_string()]);
    t.row(vec!["phi-N".into(), "2".into(), phin.ext2_dim.to_string()]);
    r.table(&t);
    r.blank();
    r.note(format!("phi-modules: hom {}, ext1 {}", phi.hom_dim, phi.ext1_dim));
    Ok(Outcome::ok(r.finish(&sha256_hex(&[td.as_bytes(), te.as_bytes()])), true))
}

fn example(cli: &Cli, name: Option<&str>) -> Result<Outcome, Error> {
    match name {
        None => {
            let mut out = String::new();
            for n in BUILTIN_NAMES {
                out.push_str(n);
                out.push('\n');
            }
            Ok(Outcome::ok(out, true))
        }
        Some(name) => {
            let spec = builtin_spec(name, prime(cli)?)?;
            let mut out = serde_json::to_string_pretty(&io::fiber_spec_value(&spec)).expect("plain JSON");
            out.push('\n');
            Ok(Outcome::ok(out, true))
        }
    }
}

fn selftest(cli: &Cli, nmax: usize) -> Result<Outcome, Error> {
    if nmax == 0 {
        return Err(input_error("--nmax must be at least 1"));
    }
    let f = field(cli)?;
    let checks = koszul_selftest(nmax, &f)?;
    let mut r = Report::new(cli.tsv);
    r.note(format!("Koszul identities up to n = {nmax} (p = {})", f.p()));
    let mut t = Table::new(&["check", "pass", "detail"]);
    for c in &checks {
        t.row(vec![c.name.clone(), if c.pass { "yes" } else { "no" }.into(), c.detail.clone()]);
    }
    r.table(&t);
    r.verdict(format!("{} identities hold", checks.len()), checks.iter().all(|c| c.pass));
    let pass = r.passed();
    let hash = sha256_hex(&[b"selftest koszul", nmax.to_string().as_bytes(), f.p().to_string().as_bytes()]);
    Ok(Outcome::ok(r.finish(&hash), pass))
}
