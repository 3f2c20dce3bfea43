mod config;

use std::path::{Path, PathBuf};
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sasaki_core::catalog::{
    enumerate_bp, export_table, run_batch, run_pipeline, BpBounds, BpFilters, Catalog,
    CatalogRecord,
};
use sasaki_core::dimension::{
    casson, milnor_signature, moduli_dimension, negative_continued_fraction, smale_name,
    table1_lookup, tight_contact_count, CassonInput,
};
use sasaki_core::existence::{verdict, SeStatus};
use sasaki_core::toric::{
    cone_from_weights, gorenstein_gamma, minimize_volume, volume, MomentCone, ReebVector,
    WeightMatrix,
};
use sasaki_core::{homology, Error, ErrorKind, PolynomialClass, Presentation, TrichotomyType};
use serde::Deserialize;

use config::Config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// Human-readable lines.
    Text,
    /// One JSON object per line.
    Records,
    /// Tab-separated with a header row.
    Table,
}

#[derive(Parser)]
#[command(name = "sasaki", version, about = "Links of weighted-homogeneous singularities and Sasaki-Einstein geometry")]
struct Cli {
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for batch runs.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// A link written as `w=1,1,1,4,6 d=12` or `bp=2,3,5`; the tokens may be
/// passed as one argument or several.
#[derive(Args)]
struct LinkArg {
    #[arg(required = true, num_args = 1..)]
    link: Vec<String>,
}

impl LinkArg {
    fn parse(&self) -> Result<Presentation, Error> {
        self.link.join(" ").parse()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Index and positive/negative/null type.
    Classify(LinkArg),
    /// Middle homology: Betti number and torsion.
    Homology {
        #[command(flatten)]
        link: LinkArg,
        /// Polynomial class; defaults to bp for `bp=` input, generic otherwise.
        #[arg(long = "class")]
        class: Option<PolynomialClass>,
    },
    /// Sasaki-Einstein existence verdict.
    Verdict(LinkArg),
    /// Smale manifold of a 5-dimensional link and its table status.
    #[command(name = "dim5-name")]
    Dim5Name(LinkArg),
    /// Casson invariant of the Brieskorn sphere Σ(a0,a1,a2).
    Casson { a0: u64, a1: u64, a2: u64 },
    /// Number of tight contact structures on the lens space L(p,q).
    #[command(name = "tight-count")]
    TightCount { p: u64, q: u64 },
    /// Naive monomial count of the moduli dimension.
    Moduli(LinkArg),
    #[command(subcommand)]
    Toric(ToricCommand),
    /// Run the full pipeline over an enumeration or a list of links.
    Batch(BatchArgs),
    /// Delimiter-separated table from a catalog file.
    #[command(name = "export-table")]
    ExportTable {
        catalog: PathBuf,
        #[arg(long, value_enum, default_value_t = Delimiter::Tab)]
        delimiter: Delimiter,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Delimiter {
    Tab,
    Comma,
}

#[derive(Args)]
struct ConeInput {
    /// Facet normals, one per line; with --weights, a `k n` header then k rows.
    file: PathBuf,
    /// Read a weight matrix and build the quotient cone.
    #[arg(long)]
    weights: bool,
}

#[derive(Subcommand)]
enum ToricCommand {
    /// Gorenstein vector γ with <λ_j, γ> = -1.
    Gamma(ConeInput),
    /// Normalized volume at a Reeb vector.
    Volume {
        #[command(flatten)]
        input: ConeInput,
        /// Comma-separated components.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        xi: Vec<f64>,
    },
    /// Minimize the volume over the Reeb slice.
    Minimize(ConeInput),
}

#[derive(Args)]
struct BatchArgs {
    /// File of links, one per line. Without it, BP exponents are enumerated.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    max_exponent: Option<u64>,
    #[arg(long)]
    length: Option<usize>,
    #[arg(long = "type", value_enum)]
    trichotomy: Option<TypeArg>,
    #[arg(long)]
    coprime: bool,
    #[arg(long, value_enum)]
    status: Option<StatusArg>,
    /// Append to this catalog file instead of printing.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Leave the timestamp out so runs compare byte for byte.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum TypeArg {
    Positive,
    Negative,
    Null,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatusArg {
    Exists,
    Obstructed,
    Unknown,
    EtaEinstein,
}

struct Settings {
    format: Format,
    jobs: usize,
    config: Config,
}

/// A flat result: text for humans, fields for the other formats.
struct Report {
    text: String,
    fields: Vec<(&'static str, String)>,
}

impl Report {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Records => {
                let map: serde_json::Map<String, serde_json::Value> = self
                    .fields
                    .iter()
                    .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
                    .collect();
                serde_json::Value::Object(map).to_string()
            }
            Format::Table => {
                let keys: Vec<&str> = self.fields.iter().map(|(k, _)| *k).collect();
                let values: Vec<&str> = self.fields.iter().map(|(_, v)| v.as_str()).collect();
                format!("{}\n{}", keys.join("\t"), values.join("\t"))
            }
        }
    }
}

fn pipeline_output(p: &Presentation, format: Format) -> Result<Option<String>, Error> {
    match format {
        Format::Text => Ok(None),
        Format::Records => Ok(Some(run_pipeline(p).to_line())),
        Format::Table => Ok(Some(
            export_table(&[run_pipeline(p)], b'\t')?.trim_end().to_string(),
        )),
    }
}

fn link_command(p: &Presentation, s: &Settings, text: impl FnOnce() -> Result<String, Error>) -> Result<String, Error> {
    match pipeline_output(p, s.format)? {
        Some(out) => Ok(out),
        None => text(),
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))
}

fn load_cone(input: &ConeInput) -> Result<MomentCone, Error> {
    let text = read(&input.file)?;
    if input.weights {
        let q = cone_from_weights(&WeightMatrix::parse(&text)?)?;
        if q.is_orbifold_lattice() {
            eprintln!(
                "warning: quotient lattice has torsion {:?}; the quotient is an orbifold",
                q.torsion
            );
        }
        Ok(q.cone)
    } else {
        MomentCone::parse(&text)
    }
}

fn tuple<T: ToString>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn gamma_of(cone: &MomentCone) -> Result<Vec<i64>, Error> {
    gorenstein_gamma(cone).map_err(|r| Error::Domain(format!("no Gorenstein vector: {r}")))
}

fn run_toric(cmd: &ToricCommand, s: &Settings) -> Result<String, Error> {
    let report = match cmd {
        ToricCommand::Gamma(input) => {
            let g = gamma_of(&load_cone(input)?)?;
            Report {
                text: format!("gamma={}", tuple(&g)),
                fields: vec![("gamma", tuple(&g))],
            }
        }
        ToricCommand::Volume { input, xi } => {
            let cone = load_cone(input)?;
            if xi.len() != cone.dim() {
                return Err(Error::Domain(format!(
                    "--xi has {} components, the cone lives in dimension {}",
                    xi.len(),
                    cone.dim()
                )));
            }
            let v = volume(&cone, &ReebVector(xi.clone()))?;
            Report {
                text: format!("volume={v}"),
                fields: vec![("xi", tuple(xi)), ("volume", v.to_string())],
            }
        }
        ToricCommand::Minimize(input) => {
            let cone = load_cone(input)?;
            let g = gamma_of(&cone)?;
            let m = minimize_volume(&cone, &g)?;
            Report {
                text: format!(
                    "xi={} volume={} iterations={} grad_norm={:e}",
                    tuple(&m.xi.0),
                    m.volume,
                    m.iterations,
                    m.grad_norm
                ),
                fields: vec![
                    ("gamma", tuple(&g)),
                    ("xi", tuple(&m.xi.0)),
                    ("volume", m.volume.to_string()),
                    ("iterations", m.iterations.to_string()),
                    ("grad_norm", format!("{:e}", m.grad_norm)),
                ],
            }
        }
    };
    Ok(report.render(s.format))
}

fn read_presentations(path: &Path) -> Result<Vec<Presentation>, Error> {
    read(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect()
}

fn run_batch_command(args: &BatchArgs, s: &Settings) -> Result<String, Error> {
    let cfg = &s.config.batch;
    let items = match &args.input {
        Some(path) => read_presentations(path)?,
        None => {
            let mut filters: BpFilters = cfg.filters.clone();
            if let Some(t) = args.trichotomy {
                filters.trichotomy = Some(match t {
                    TypeArg::Positive => TrichotomyType::Positive,
                    TypeArg::Negative => TrichotomyType::Negative,
                    TypeArg::Null => TrichotomyType::Null,
                });
            }
            if args.coprime {
                filters.pairwise_coprime = true;
            }
            if let Some(st) = args.status {
                filters.status = Some(match st {
                    StatusArg::Exists => SeStatus::Exists,
                    StatusArg::Obstructed => SeStatus::Obstructed,
                    StatusArg::Unknown => SeStatus::Unknown,
                    StatusArg::EtaEinstein => SeStatus::EtaEinstein,
                });
            }
            let bounds = BpBounds {
                max_exponent: args
                    .max_exponent
                    .or(cfg.max_exponent)
                    .ok_or_else(|| Error::Domain("batch needs --input or --max-exponent".into()))?,
                length: args
                    .length
                    .or(cfg.length)
                    .ok_or_else(|| Error::Domain("batch needs --length".into()))?,
                filters,
            };
            enumerate_bp(&bounds)?.map(Presentation::Bp).collect()
        }
    };

    let stamp = !args.no_timestamp && cfg.timestamp.unwrap_or(true);
    let records: Vec<CatalogRecord> = run_batch(&items, s.jobs)?
        .into_iter()
        .map(|r| if stamp { r.stamped() } else { r })
        .collect();

    if let Some(path) = args.output.as_ref().or(cfg.output.as_ref()) {
        let written = Catalog::append_to_file(path, &records)?;
        return Ok(format!(
            "wrote {written} new records to {} ({} already present)",
            path.display(),
            records.len() - written
        ));
    }

    let mut catalog = Catalog::new();
    for r in records {
        catalog.insert(r);
    }
    match s.format {
        Format::Records => {
            let mut buf = Vec::new();
            catalog.write(&mut buf)?;
            Ok(String::from_utf8_lossy(&buf).trim_end().to_string())
        }
        Format::Table => Ok(export_table(catalog.records(), b'\t')?.trim_end().to_string()),
        Format::Text => Ok(catalog
            .records()
            .iter()
            .map(record_summary)
            .collect::<Vec<_>>()
            .join("\n")),
    }
}

fn record_summary(r: &CatalogRecord) -> String {
    let mut line = format!("{} type={}", r.presentation, r.kind);
    if let (Some(b), Some(t)) = (&r.betti, &r.torsion) {
        let t = if t.is_empty() {
            "0".to_string()
        } else {
            t.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" ⊕ ")
        };
        line += &format!(" b={b} torsion={t}");
    }
    if let (Some(st), Some(rule)) = (r.status, r.rule) {
        line += &format!(" status={st} rule={rule}");
    }
    if let Some(m) = &r.smale {
        line += &format!(" smale={m}");
    }
    if let Some(c) = r.casson {
        line += &format!(" casson={c}");
    }
    if !r.errors.is_empty() {
        line += &format!(" errors=\"{}\"", r.errors.join("; "));
    }
    line
}

fn run(cli: &Cli, s: &Settings) -> Result<String, Error> {
    match &cli.command {
        Command::Classify(arg) => {
            let p = arg.parse()?;
            link_command(&p, s, || {
                let l = p.link();
                Ok(format!("{l} type={} index={}", l.classify_type(), l.index()))
            })
        }
        Command::Homology { link, class } => {
            let p = link.parse()?;
            let class = class.unwrap_or_else(|| p.class());
            if class != p.class() || s.format == Format::Text {
                return Ok(homology(&p.link(), class)?.to_string());
            }
            link_command(&p, s, || unreachable!())
        }
        Command::Verdict(arg) => {
            let p = arg.parse()?;
            link_command(&p, s, || Ok(verdict(&p.link(), p.bp()).to_string()))
        }
        Command::Dim5Name(arg) => {
            let p = arg.parse()?;
            let l = p.link();
            if l.n() != 3 {
                return Err(Error::Domain(format!(
                    "dim5-name needs a link in C^4 (4 weights), got {}",
                    l.weights().len()
                )));
            }
            link_command(&p, s, || {
                let m = smale_name(&homology(&l, p.class())?)?;
                Ok(format!("{m} table1={}", table1_lookup(&m)))
            })
        }
        Command::Casson { a0, a1, a2 } => {
            let input = CassonInput::new(*a0, *a1, *a2)?;
            let lambda = casson(&input)?;
            let tau = milnor_signature(&input);
            Ok(Report {
                text: format!("lambda={lambda} signature={tau}"),
                fields: vec![("lambda", lambda.to_string()), ("signature", tau.to_string())],
            }
            .render(s.format))
        }
        Command::TightCount { p, q } => {
            let count = tight_contact_count(*p, *q)?;
            let r = negative_continued_fraction(*p, *q)?;
            Ok(Report {
                text: format!("count={count} continued_fraction={r:?}"),
                fields: vec![("count", count.to_string()), ("continued_fraction", format!("{r:?}"))],
            }
            .render(s.format))
        }
        Command::Moduli(arg) => {
            let p = arg.parse()?;
            let m = moduli_dimension(&p.link())?;
            let mut fields = vec![
                ("moduli", m.value.to_string()),
                ("h0_degree", m.h0_degree.to_string()),
                ("h0_weights", m.h0_weights.to_string()),
            ];
            if let (Some(r), Some(d)) = (m.reference, m.delta()) {
                fields.push(("reference", r.to_string()));
                fields.push(("delta", d.to_string()));
            }
            Ok(Report {
                text: m.to_string(),
                fields,
            }
            .render(s.format))
        }
        Command::Toric(cmd) => run_toric(cmd, s),
        Command::Batch(args) => run_batch_command(args, s),
        Command::ExportTable { catalog, delimiter } => {
            let cat = Catalog::load(catalog)?;
            let d = match delimiter {
                Delimiter::Tab => b'\t',
                Delimiter::Comma => b',',
            };
            Ok(export_table(cat.records(), d)?.trim_end().to_string())
        }
    }
}

fn exit_code(e: &Error) -> ExitCode {
    match e.kind() {
        ErrorKind::Domain => ExitCode::from(1),
        ErrorKind::Internal => ExitCode::from(2),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            // Bad usage is a domain error, not an internal one.
            return if usage { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let config = match &cli.config {
        Some(path) => match Config::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return exit_code(&e);
            }
        },
        None => Config::default(),
    };
    let settings = Settings {
        format: cli.format.or(config.format).unwrap_or(Format::Text),
        jobs: cli
            .jobs
            .or(config.jobs)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
        config,
    };
    match run(&cli, &settings) {
        Ok(out) => {
            if !out.is_empty() {
                // A closed pipe (e.g. `| head`) is not an error worth reporting.
                let _ = writeln!(std::io::stdout().lock(), "{out}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
