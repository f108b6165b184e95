use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use econ_complexity::ingest::{self, chain_concordances, Counting};
use econ_complexity::model::IndexPanel;
use econ_complexity::pipeline::{bipartite_index, tripartite_index, BipartiteRun};
use econ_complexity::reflections::Side;
use econ_complexity::reproduce::{load_appendix, run_checks};
use econ_complexity::spectral::{EigenRule, SpectralResult};
use econ_complexity::stats::{correlation_series, cross_section_correlate, lagged_correlate, Method};
use econ_complexity::triple_helix::RemovedLabels;
use econ_complexity::{ComplexityIndex, Error};

const EXIT_REPRODUCE_FAILED: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "complexity", version, about = "Economic, patent and triple-helix complexity indices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Economic complexity of countries from a trade file.
    Eci(EciArgs),
    /// Patent complexity of countries from a patent file.
    Patci(PatciArgs),
    /// Triple-helix complexity from trade, patents and a concordance chain.
    Thci(ThciArgs),
    /// Correlations between index panels.
    Correlate(CorrelateArgs),
    /// Check the reference values against the bundled appendix panels.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug)]
struct IndexOpts {
    #[arg(long)]
    year: i32,
    /// Eigenvalue selection rule.
    #[arg(long)]
    rule: Option<EigenRule>,
    /// RCA cutoff; values at or above it count as a specialization.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    threshold: f64,
    /// Output CSV; the report goes to `<out>.report`. Without it both go to the terminal.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EciArgs {
    #[arg(long)]
    trade: PathBuf,
    /// Product code digit level.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    digits: u8,
    #[command(flatten)]
    opts: IndexOpts,
}

#[derive(Args, Debug)]
struct PatciArgs {
    #[arg(long)]
    patents: PathBuf,
    #[arg(long, default_value = "fractional")]
    counting: Counting,
    #[command(flatten)]
    opts: IndexOpts,
}

#[derive(Args, Debug)]
struct ThciArgs {
    #[arg(long)]
    trade: PathBuf,
    #[arg(long)]
    patents: PathBuf,
    /// One link of the technology to product chain as SOURCE:TARGET:PATH, in order.
    #[arg(long = "concordance", required = true)]
    concordances: Vec<String>,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    digits: u8,
    #[arg(long, default_value = "fractional")]
    counting: Counting,
    #[command(flatten)]
    opts: IndexOpts,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true).args(["cross_section", "lagged", "series"])))]
struct CorrelateArgs {
    /// Index panel CSV; the file stem names the panel.
    #[arg(long = "panel", required = true, num_args = 1)]
    panels: Vec<PathBuf>,
    #[arg(long, default_value = "pearson")]
    method: Method,
    /// Correlate every pair of panels across entities in one year.
    #[arg(long, value_name = "YEAR")]
    cross_section: Option<i32>,
    /// Correlate one entity's series, the first panel leading the others.
    #[arg(long, requires_all = ["entity", "lag"])]
    lagged: bool,
    #[arg(long)]
    entity: Option<String>,
    /// Years by which the other panels trail the first; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    lag: Vec<i32>,
    /// One cross-sectional coefficient per shared year for every pair.
    #[arg(long)]
    series: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    /// Directory holding eci.csv, patci.csv and thci.csv.
    #[arg(long, default_value = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/appendix"))]
    fixtures: PathBuf,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Compute(e) if e.is_degenerate() => EXIT_DEGENERATE,
            _ => EXIT_DATA,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Compute(e) => write!(f, "{e}"),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn require_file(p: &Path) -> Outcome<()> {
    if p.is_file() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("input file {} not found", p.display())))
    }
}

fn require_out_dir(out: &Option<PathBuf>) -> Outcome<()> {
    let Some(out) = out else { return Ok(()) };
    match out.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => {
            Err(Failure::Usage(format!("output directory {} not found", dir.display())))
        }
        _ => Ok(()),
    }
}

fn validate_opts(o: &IndexOpts) -> Outcome<()> {
    if !(o.threshold.is_finite() && o.threshold > 0.0) {
        return Err(Failure::Usage(format!("threshold must be a positive number, got {}", o.threshold)));
    }
    require_out_dir(&o.out)
}

struct Link {
    source: String,
    target: String,
    path: PathBuf,
}

fn parse_link(s: &str) -> Outcome<Link> {
    let mut parts = s.splitn(3, ':');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(a), Some(b), Some(p)) if !a.is_empty() && !b.is_empty() && !p.is_empty() => {
            Ok(Link { source: a.into(), target: b.into(), path: p.into() })
        }
        _ => Err(Failure::Usage(format!("concordance `{s}` is not SOURCE:TARGET:PATH"))),
    }
}

/// The command line as recorded in output headers.
fn invocation() -> String {
    let args: Vec<String> = std::env::args().skip(1).collect();
    format!("complexity {}", args.join(" "))
}

fn header(lines: &[(&str, String)]) -> String {
    let mut s = format!("# complexity {}\n# command: {}\n", env!("CARGO_PKG_VERSION"), invocation());
    for (k, v) in lines {
        let _ = writeln!(s, "# {k}: {v}");
    }
    s
}

fn index_csv(idx: &ComplexityIndex) -> String {
    let mut s = String::from("entity,value\n");
    for (label, v) in idx.iter() {
        let _ = writeln!(s, "{},{v}", csv_field(label));
    }
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn list(labels: &[String]) -> String {
    if labels.is_empty() {
        "none".into()
    } else {
        labels.join(", ")
    }
}

fn spectrum_report(name: &str, s: &SpectralResult, report: &mut String) {
    let _ = writeln!(report, "{name} selected eigenvalue: {}", s.selected);
    let shown: Vec<String> = s
        .eigenvalues
        .iter()
        .take(6)
        .map(|z| if z.im.abs() > 1e-12 { format!("{:.6}{:+.6}i", z.re, z.im) } else { format!("{:.9}", z.re) })
        .collect();
    let _ = writeln!(report, "{name} leading eigenvalues: {}", shown.join(", "));
    for w in &s.warnings {
        let _ = writeln!(report, "warning: {w}");
    }
}

/// Writes the CSV to `out` and the report beside it, or both to the terminal.
fn emit(out: &Option<PathBuf>, csv: &str, report: &str) -> Outcome<()> {
    match out {
        Some(path) => {
            let io = |e: std::io::Error| Failure::Compute(Error::Io(format!("{}: {e}", path.display())));
            fs::write(path, csv).map_err(io)?;
            let mut report_path = path.clone().into_os_string();
            report_path.push(".report");
            fs::write(PathBuf::from(report_path), report).map_err(io)?;
        }
        None => {
            print!("{csv}");
            eprint!("{report}");
        }
    }
    Ok(())
}

fn bipartite_output(run: &BipartiteRun, rule: EigenRule, opts: &IndexOpts) -> Outcome<()> {
    let spectrum = &run.outcome.spectrum;
    let csv = header(&[
        ("index", run.outcome.index.kind().to_string()),
        ("year", opts.year.to_string()),
        ("rule", rule.to_string()),
        ("eigenvalue", spectrum.selected.to_string()),
    ]) + &index_csv(&run.outcome.index);
    let mut report = String::new();
    let _ = writeln!(
        report,
        "incidence: {} x {} with {} ones",
        run.incidence.nrows(),
        run.incidence.ncols(),
        run.incidence.ones()
    );
    let _ = writeln!(report, "pruned rows: {}", list(&run.removed_rows));
    let _ = writeln!(report, "pruned columns: {}", list(&run.removed_cols));
    spectrum_report("W", spectrum, &mut report);
    emit(&opts.out, &csv, &report)
}

fn cmd_eci(a: &EciArgs) -> Outcome<()> {
    validate_opts(&a.opts)?;
    require_file(&a.trade)?;
    let rule = a.opts.rule.unwrap_or(EigenRule::SecondLargest);
    let trade = ingest::load_trade(&a.trade, a.opts.year, a.digits.into())?;
    let run = bipartite_index(&trade, a.opts.threshold, Side::Rows, rule)?;
    bipartite_output(&run, rule, &a.opts)
}

fn cmd_patci(a: &PatciArgs) -> Outcome<()> {
    validate_opts(&a.opts)?;
    require_file(&a.patents)?;
    let rule = a.opts.rule.unwrap_or(EigenRule::SecondLargest);
    let patents = ingest::load_patents(&a.patents, a.opts.year, a.counting)?;
    let run = bipartite_index(&patents, a.opts.threshold, Side::Rows, rule)?;
    bipartite_output(&run, rule, &a.opts)
}

fn removed_report(title: &str, r: &RemovedLabels, report: &mut String) {
    let _ = writeln!(report, "{title} countries: {}", list(&r.countries));
    let _ = writeln!(report, "{title} products: {}", list(&r.products));
    let _ = writeln!(report, "{title} technologies: {}", list(&r.technologies));
}

fn cmd_thci(a: &ThciArgs) -> Outcome<()> {
    validate_opts(&a.opts)?;
    require_file(&a.trade)?;
    require_file(&a.patents)?;
    let links = a.concordances.iter().map(|s| parse_link(s)).collect::<Outcome<Vec<_>>>()?;
    for l in &links {
        require_file(&l.path)?;
    }
    let rule = a.opts.rule.unwrap_or(EigenRule::LargestBelowOne);

    let trade = ingest::load_trade(&a.trade, a.opts.year, a.digits.into())?;
    let patents = ingest::load_patents(&a.patents, a.opts.year, a.counting)?;
    let tables = links
        .iter()
        .map(|l| ingest::load_concordance(&l.path, &l.source, &l.target))
        .collect::<Result<Vec<_>, _>>()?;
    let chain = chain_concordances(&tables)?.truncate_targets(a.digits.into());
    let run = tripartite_index(&trade, &patents, &chain, a.opts.threshold, rule)?;
    let o = &run.outcome;

    let csv = header(&[
        ("index", "THCI".into()),
        ("year", a.opts.year.to_string()),
        ("rule", rule.to_string()),
        ("eigenvalue clockwise", o.clockwise.selected.to_string()),
        ("eigenvalue counterclockwise", o.counterclockwise.selected.to_string()),
    ]) + &index_csv(&o.index);

    let mut report = String::new();
    let chain_names: Vec<&str> =
        std::iter::once(tables[0].source_scheme.as_str()).chain(tables.iter().map(|t| t.target_scheme.as_str())).collect();
    let _ = writeln!(report, "concordance chain: {} ({} pairs)", chain_names.join(" -> "), chain.pairs.len());
    let s = &run.system;
    let _ = writeln!(
        report,
        "system: {} countries, {} products, {} technologies",
        s.countries().len(),
        s.country_product().ncols(),
        s.country_technology().ncols()
    );
    removed_report("below threshold", &run.below_threshold, &mut report);
    removed_report("pruned jointly", &run.removed, &mut report);
    spectrum_report("clockwise W", &o.clockwise, &mut report);
    spectrum_report("counterclockwise V", &o.counterclockwise, &mut report);
    let _ = writeln!(report, "entity,k_plus,k_minus");
    for (i, c) in s.countries().iter().enumerate() {
        let _ = writeln!(report, "{},{},{}", csv_field(c), o.k_plus[i], o.k_minus[i]);
    }
    emit(&a.opts.out, &csv, &report)
}

fn panel_name(p: &Path) -> String {
    p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn cmd_correlate(a: &CorrelateArgs) -> Outcome<()> {
    if a.panels.len() < 2 {
        return Err(Failure::Usage("correlate needs at least two --panel files".into()));
    }
    for p in &a.panels {
        require_file(p)?;
    }
    require_out_dir(&a.out)?;

    let panels = a
        .panels
        .iter()
        .map(|p| ingest::load_panel(p, &panel_name(p)))
        .collect::<Result<Vec<IndexPanel>, _>>()?;
    let mut rows = Vec::new();
    let mut report = String::new();
    let mode;
    if let Some(year) = a.cross_section {
        mode = format!("cross-section {year}");
        let refs: Vec<&IndexPanel> = panels.iter().collect();
        let m = cross_section_correlate(&refs, year, a.method)?;
        for i in 0..panels.len() {
            for j in i + 1..panels.len() {
                let r = &m[i][j];
                rows.push(format!("{}~{},{year},{},{}", panels[i].kind(), panels[j].kind(), r.n_pairs, r.coefficient));
            }
        }
    } else if a.lagged {
        let entity = a.entity.as_deref().expect("clap requires --entity");
        mode = format!("lagged, entity {entity}");
        let lead = panels[0]
            .series(entity)
            .ok_or_else(|| Failure::Usage(format!("entity `{entity}` not in panel {}", panels[0].kind())))?;
        for follow in &panels[1..] {
            let series = follow
                .series(entity)
                .ok_or_else(|| Failure::Usage(format!("entity `{entity}` not in panel {}", follow.kind())))?;
            for &lag in &a.lag {
                let r = lagged_correlate(&lead, &series, a.method, lag)?;
                rows.push(format!("{}~{},{lag},{},{}", panels[0].kind(), follow.kind(), r.n_pairs, r.coefficient));
            }
        }
    } else {
        mode = "series".into();
        for i in 0..panels.len() {
            for j in i + 1..panels.len() {
                for y in correlation_series(&panels[i], &panels[j], a.method) {
                    let pair = format!("{}~{}", panels[i].kind(), panels[j].kind());
                    match y.report {
                        Ok(r) => rows.push(format!("{pair},{},{},{}", y.year, r.n_pairs, r.coefficient)),
                        Err(e) => {
                            rows.push(format!("{pair},{},0,", y.year));
                            let _ = writeln!(report, "{pair} {}: {e}", y.year);
                        }
                    }
                }
            }
        }
    }
    let column = if a.lagged { "lag" } else { "year" };
    let mut csv = header(&[("mode", mode), ("method", a.method.to_string())]);
    let _ = writeln!(csv, "pair,{column},n,coefficient");
    for r in rows {
        let _ = writeln!(csv, "{r}");
    }
    emit(&a.out, &csv, &report)
}

fn cmd_reproduce(a: &ReproduceArgs) -> Outcome<bool> {
    if !a.fixtures.is_dir() {
        return Err(Failure::Usage(format!("fixture directory {} not found", a.fixtures.display())));
    }
    let app = load_appendix(&a.fixtures)?;
    let checks = run_checks(&app);
    let failed = checks.iter().filter(|c| !c.passed()).count();
    for c in &checks {
        println!("{c}");
    }
    println!("{} checks, {} passed, {failed} failed", checks.len(), checks.len() - failed);
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eci(a) => cmd_eci(a).map(|()| true),
        Command::Patci(a) => cmd_patci(a).map(|()| true),
        Command::Thci(a) => cmd_thci(a).map(|()| true),
        Command::Correlate(a) => cmd_correlate(a).map(|()| true),
        Command::Reproduce(a) => cmd_reproduce(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_REPRODUCE_FAILED),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
