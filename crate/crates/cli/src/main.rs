use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use matsusy::catalog::{enumerate_catalog, find_entry, CatalogEntry, InstanceParams, QForm, RForm, SuperpotentialInstance};
use matsusy::spectral::{compare_spectra, excited_state, uniform_grid};
use matsusy::verifier::{check_determining, check_shape_invariance, ResidualReport};
use matsusy::Error;

#[derive(Parser, Debug)]
#[command(name = "matsusy", version, about = "Shape-invariant 3×3 matrix superpotentials: catalog, checks and spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print every entry id with its formula references.
    List(Common),
    /// Print the Q, R and P formulas and constraints of an entry, or the pairings of a formula id.
    Describe {
        /// Entry id or formula id (`Q.tan`, `R.11`, `P.block1.3`).
        id: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Residuals of the determining equations and of shape invariance.
    Check(Common),
    /// Algebraic against finite-difference energies.
    Spectrum(Common),
    /// Ground state (or ladder level `--levels n`) sampled on a uniform grid.
    GroundState(Common),
    /// The whole catalog as JSON.
    Export(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Entry id, or `all` where a sweep makes sense.
    #[arg(long)]
    entry: Option<String>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    k: f64,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// `g1,g2,g3`
    #[arg(long, allow_hyphen_values = true)]
    gammas: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// `a:b:N`; the interval replaces the default domain and N sets the number of points.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Highest ladder level (3 for `spectrum`, 0 for `ground-state`).
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

/// Failure of a command, with its exit status.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Argument(_) | Error::Domain(_) | Error::UnknownId(_) | Error::Io(_) => Failure::Usage(e.to_string()),
            Error::Numeric(_) | Error::Precondition(_) | Error::LadderTruncated { .. } => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(format!("serialization: {e}"))
    }
}

type Outcome = Result<(), Failure>;

#[derive(Clone, Copy, Debug)]
struct GridArg {
    a: f64,
    b: f64,
    n: usize,
}

fn parse_grid(s: &str) -> Result<GridArg, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Failure::Usage(format!("--grid expects a:b:N, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Failure::Usage(format!("--grid needs a < b, got {a}:{b}")));
    }
    if n < 16 {
        return Err(Failure::Usage(format!("--grid needs N ≥ 16, got {n}")));
    }
    Ok(GridArg { a, b, n })
}

fn parse_gammas(s: &str) -> Result<[f64; 3], Failure> {
    let bad = || Failure::Usage(format!("--gammas expects g1,g2,g3, got `{s}`"));
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    if v.len() != 3 {
        return Err(bad());
    }
    Ok([v[0], v[1], v[2]])
}

impl Common {
    fn grid(&self) -> Result<Option<GridArg>, Failure> {
        self.grid.as_deref().map(parse_grid).transpose()
    }

    fn tol(&self, default: f64) -> Result<f64, Failure> {
        let t = self.tol.unwrap_or(default);
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::Usage(format!("--tol must be > 0, got {t}")));
        }
        Ok(t)
    }

    fn params(&self, entry: &CatalogEntry) -> Result<InstanceParams, Failure> {
        let mut p = InstanceParams::defaults_for(entry);
        if let Some(v) = self.lambda {
            p.lambda = v;
        }
        if let Some(g) = &self.gammas {
            p.gammas = parse_gammas(g)?;
        }
        if let Some(v) = self.p {
            p.p = v;
        }
        if let Some(v) = self.phi {
            p.phi = v;
        }
        if let Some(v) = self.omega {
            p.omega = v;
        }
        if let Some(v) = self.r {
            p.r = v;
        }
        if let Some(v) = self.eps {
            p.eps = v;
        }
        Ok(p)
    }

    fn instance(&self, entry: &CatalogEntry) -> Result<SuperpotentialInstance, Failure> {
        let inst = SuperpotentialInstance::from_entry(entry, &self.params(entry)?, self.k)?;
        Ok(match self.grid()? {
            Some(g) => inst.with_domain(g.a, g.b)?,
            None => inst,
        })
    }

    fn single_entry(&self) -> Result<CatalogEntry, Failure> {
        match self.entry.as_deref() {
            None => Err(Failure::Usage("--entry is required".into())),
            Some("all") => Err(Failure::Usage("this command takes a single --entry".into())),
            Some(id) => Ok(find_entry(id)?),
        }
    }

    fn entries(&self) -> Result<Vec<CatalogEntry>, Failure> {
        match self.entry.as_deref() {
            None | Some("all") => Ok(enumerate_catalog()),
            Some(id) => Ok(vec![find_entry(id)?]),
        }
    }

    fn sink(&self) -> Result<Box<dyn Write>, Failure> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

fn write_json<T: Serialize + ?Sized>(common: &Common, value: &T) -> Outcome {
    let mut w = common.sink()?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ListRow<'a> {
    id: &'a str,
    p_form: &'a str,
    q_form: &'a str,
    r_form: &'a str,
}

fn list(common: &Common) -> Outcome {
    let entries = enumerate_catalog();
    if common.format == Some(Format::Json) {
        let rows: Vec<ListRow> = entries
            .iter()
            .map(|e| ListRow {
                id: &e.id,
                p_form: &e.p_form,
                q_form: &e.q_form,
                r_form: &e.r_form,
            })
            .collect();
        return write_json(common, &rows);
    }
    let mut w = common.sink()?;
    for e in &entries {
        writeln!(w, "{}\t{}\t{}\t{}", e.id, e.p_form, e.q_form, e.r_form)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct EntryDescription {
    id: String,
    q: String,
    r: String,
    p: String,
    gamma_pattern: String,
    constraints: Vec<String>,
}

fn describe_entry(e: &CatalogEntry) -> EntryDescription {
    EntryDescription {
        id: e.id.clone(),
        q: format!("{} = {}", e.q_form, e.q_formula()),
        r: format!("{} = {}", e.r_form, e.r_formula()),
        p: format!("{} = {}", e.p_form, e.p_formula_text()),
        gamma_pattern: e.gamma_pattern.tag().into(),
        constraints: e.constraints(),
    }
}

#[derive(Serialize)]
struct FormulaDescription {
    id: String,
    formula: String,
    pairings: Vec<String>,
}

fn describe_formula(id: &str) -> Result<FormulaDescription, Failure> {
    let entries = enumerate_catalog();
    let (formula, pairings): (String, Vec<&CatalogEntry>) = if let Some(short) = id.strip_prefix("Q.") {
        let q = QForm::from_short(short).ok_or_else(|| Error::UnknownId(id.into()))?;
        (q.formula(), entries.iter().filter(|e| e.q() == q).collect())
    } else if let Some(num) = id.strip_prefix("R.") {
        let r = RForm::from_number(num).ok_or_else(|| Error::UnknownId(id.into()))?;
        (r.formula().to_string(), entries.iter().filter(|e| e.r() == r).collect())
    } else if id.starts_with("P.") {
        let hits: Vec<&CatalogEntry> = entries.iter().filter(|e| e.p_form == id).collect();
        let first = hits.first().ok_or_else(|| Error::UnknownId(id.into()))?;
        (first.p_formula_text(), hits)
    } else {
        return Err(Error::UnknownId(id.into()).into());
    };
    Ok(FormulaDescription {
        id: id.into(),
        formula,
        pairings: pairings.iter().map(|e| e.id.clone()).collect(),
    })
}

fn describe(id: Option<&str>, common: &Common) -> Outcome {
    let id = id
        .or(common.entry.as_deref())
        .ok_or_else(|| Failure::Usage("describe needs an id".into()))?;
    let json = common.format == Some(Format::Json);
    if id.contains('+') {
        let d = describe_entry(&find_entry(id)?);
        if json {
            return write_json(common, &d);
        }
        let mut w = common.sink()?;
        writeln!(w, "{}", d.id)?;
        writeln!(w, "  Q: {}", d.q)?;
        writeln!(w, "  R: {}", d.r)?;
        writeln!(w, "  P: {}", d.p)?;
        writeln!(w, "  gammas: {}", d.gamma_pattern)?;
        writeln!(w, "  constraints: {}", d.constraints.join("; "))?;
        w.flush()?;
        return Ok(());
    }
    let d = describe_formula(id)?;
    if json {
        return write_json(common, &d);
    }
    let mut w = common.sink()?;
    writeln!(w, "{} = {}", d.id, d.formula)?;
    writeln!(w, "pairings ({}):", d.pairings.len())?;
    for p in &d.pairings {
        writeln!(w, "  {p}")?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CheckOutput {
    k: f64,
    tol: f64,
    pass: bool,
    reports: Vec<ResidualReport>,
}

const CHECK_POINTS: usize = 200;

fn check(common: &Common) -> Outcome {
    let tol = common.tol(1e-9)?;
    let grid = common.grid()?;
    let points = grid.map_or(CHECK_POINTS, |g| g.n);
    let entries = common.entries()?;
    // one result per entry, collected in catalog order whatever the scheduling
    let results: Vec<Result<Vec<ResidualReport>, Failure>> = entries
        .par_iter()
        .map(|e| {
            let inst = common.instance(e)?;
            let mut r = check_determining(&inst, points, tol)?;
            r.push(check_shape_invariance(&inst, points, tol)?);
            Ok(r)
        })
        .collect();
    let mut reports = Vec::new();
    for r in results {
        reports.extend(r?);
    }
    let pass = reports.iter().all(|r| r.pass);
    if common.format == Some(Format::Csv) {
        let mut w = common.sink()?;
        writeln!(w, "entry_id,k,equation_id,sup_norm,tol,pass")?;
        for r in &reports {
            writeln!(
                w,
                "{},{},{:?},{},{},{}",
                r.entry_id, r.k, r.equation_id, r.sup_norm, r.tol, r.pass
            )?;
        }
        w.flush()?;
    } else {
        write_json(
            common,
            &CheckOutput {
                k: common.k,
                tol,
                pass,
                reports,
            },
        )?;
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Numeric("some residuals exceed the tolerance".into()))
    }
}

const SPECTRUM_POINTS: usize = 4000;
const STATE_POINTS: usize = 2000;

fn spectrum(common: &Common) -> Outcome {
    let entry = common.single_entry()?;
    let inst = common.instance(&entry)?;
    let n = common.grid()?.map_or(SPECTRUM_POINTS, |g| g.n);
    let cmp = compare_spectra(&inst, common.levels.unwrap_or(3), n, common.tol(5e-3)?)?;
    if common.format == Some(Format::Json) {
        write_json(common, &cmp)?;
    } else {
        cmp.write_csv(common.sink()?)?;
    }
    if cmp.pass {
        Ok(())
    } else {
        Err(Failure::Numeric(format!(
            "finite-difference levels differ from the ladder by more than {} of the first gap",
            cmp.tol
        )))
    }
}

fn ground_state(common: &Common) -> Outcome {
    let entry = common.single_entry()?;
    let inst = common.instance(&entry)?;
    let n = common.grid()?.map_or(STATE_POINTS, |g| g.n);
    let xs = uniform_grid(&inst.domain, n);
    let level = common.levels.unwrap_or(0);
    let result = excited_state(&inst, level, &xs)?;
    if !result.normalizable {
        eprintln!(
            "warning: no normalizable ground state at k = {}; writing the least-growing solution",
            inst.k
        );
    }
    if common.format == Some(Format::Json) {
        write_json(common, &result)
    } else {
        Ok(result.state.write_csv(common.sink()?)?)
    }
}

fn export(common: &Common) -> Outcome {
    write_json(common, &enumerate_catalog())
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::List(c) => list(c),
        Command::Describe { id, common } => describe(id.as_deref(), common),
        Command::Check(c) => check(c),
        Command::Spectrum(c) => spectrum(c),
        Command::GroundState(c) => ground_state(c),
        Command::Export(c) => export(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
