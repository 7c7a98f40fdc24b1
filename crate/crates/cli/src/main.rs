//! `dgt`: batch front end for the diagram-group library.
//!
//! One logical computation per invocation; artifacts are read from files
//! (one per file) and results stream to stdout in the canonical text
//! serializations of the owning modules. Exit codes: `0` success, `1`
//! negative verdict (an equality or membership that came out false), `2`
//! usage or input error, `3` a bounded search was exhausted.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use diagram_groups::abelian::{self, MonoidOracle};
use diagram_groups::diagram::Diagram;
use diagram_groups::pl;
use diagram_groups::presentation::{Presentation, SearchLimits, Word};
use diagram_groups::squier::{self, BuilderKind};
use diagram_groups::subgroup::{self, ThompsonOps, WitnessSearchBounds, WreathOps};
use diagram_groups::thompson::{self, NormalForm};
use diagram_groups::wreath::{self, WreathElement};
use diagram_groups::{
    AbelianError, DiagramError, Dyadic, DyadicParseError, PlError, PresentationError, SquierError,
    SubgroupError, ThompsonError, WreathError,
};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Message(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Thompson(#[from] ThompsonError),
    #[error(transparent)]
    Pl(#[from] PlError),
    #[error(transparent)]
    Dyadic(#[from] DyadicParseError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error(transparent)]
    Squier(#[from] SquierError),
    #[error(transparent)]
    Subgroup(#[from] SubgroupError),
    #[error(transparent)]
    Wreath(#[from] WreathError),
}

fn message(text: impl Into<String>) -> CliError {
    CliError::Message(text.into())
}

const EXIT_NEGATIVE: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_BOUND: i32 = 3;

#[derive(Parser)]
#[command(
    name = "dgt",
    version,
    about = "Exact computation in diagram groups over semigroup presentations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Presentation source shared by the diagram-level subcommands.
#[derive(Args, Clone)]
struct PresentationOpts {
    /// Presentation: a builtin name (thompson, thompson_sq, q_t26,
    /// wreath_z, big_o, bullet, direct_power) or a file in the
    /// `letters | u = v , ...` grammar.
    #[arg(long, default_value = "thompson")]
    presentation: String,
    /// Base word; defaults to the builtin's base where one exists.
    #[arg(long)]
    base: Option<String>,
}

/// Bounds for breadth-first searches.
#[derive(Args, Clone, Copy)]
struct BoundOpts {
    /// Longest word admitted during searches.
    #[arg(long = "max-len", default_value_t = 64)]
    max_len: usize,
    /// Most words visited during searches.
    #[arg(long = "max-visited", default_value_t = 100_000)]
    max_visited: usize,
}

impl BoundOpts {
    fn limits(self) -> SearchLimits {
        SearchLimits {
            max_word_len: self.max_len,
            max_visited: self.max_visited,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Dot,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a diagram file to its unique reduced form.
    Reduce {
        file: PathBuf,
        #[command(flatten)]
        pres: PresentationOpts,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Multiply two diagrams: compose bottom-to-top, then reduce.
    Mul {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        pres: PresentationOpts,
    },
    /// Invert a diagram: mirror top and bottom, then reduce.
    Inv {
        file: PathBuf,
        #[command(flatten)]
        pres: PresentationOpts,
    },
    /// Compare two diagrams after reduction; exit 1 if they differ.
    Eq {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        pres: PresentationOpts,
    },
    /// Split a spherical diagram into its finest sum of spherical parts.
    Comp {
        file: PathBuf,
        #[command(flatten)]
        pres: PresentationOpts,
    },
    /// Convert between normal forms and diagrams.
    Nf {
        #[command(subcommand)]
        op: NfCommand,
    },
    /// Normal forms as piecewise-linear maps of the unit interval.
    Pl {
        #[command(subcommand)]
        op: PlCommand,
    },
    /// Abelianization vector of a spherical diagram.
    Rho {
        /// Diagram file, or an inline normal form with --nf.
        input: String,
        /// Treat the input as a normal form instead of a file.
        #[arg(long)]
        nf: bool,
        #[command(flatten)]
        pres: PresentationOpts,
    },
    /// Derived-subgroup membership of a normal form; exit 1 if outside.
    Fprime {
        nf: String,
    },
    /// Bounded rewriting complexes and their fundamental groups.
    Squier {
        #[command(subcommand)]
        op: SquierCommand,
    },
    /// Scaffold presentations and attached-group combination.
    Build {
        #[command(subcommand)]
        kind: BuildCommand,
    },
    /// Wreath-product generating pairs: assembly, certificates, search.
    Zwrz {
        #[command(subcommand)]
        op: ZwrzCommand,
    },
    /// Iterated wreath-product computations.
    Wreath {
        #[command(subcommand)]
        op: WreathCommand,
    },
    /// Distortion profile of a finitely generated subgroup.
    Distort(DistortArgs),
    /// DOT rendering of a diagram's plane graph.
    Dot {
        file: PathBuf,
        #[command(flatten)]
        pres: PresentationOpts,
    },
}

#[derive(Subcommand)]
enum NfCommand {
    /// The reduced diagram of a normal form on a base of the given width.
    ToDiagram {
        nf: String,
        /// Base word width (number of letters).
        #[arg(long, default_value_t = 1)]
        width: usize,
    },
    /// The normal form of a spherical diagram over the one-relation
    /// presentation.
    FromDiagram {
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum PlCommand {
    /// Breakpoint table of the map of a normal form.
    Map {
        nf: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Sampling resolution for CSV output: 2^level + 1 points.
        #[arg(long, default_value_t = 6)]
        level: u32,
    },
    /// Maximal intervals moved by the map.
    Support {
        nf: String,
    },
    /// Value of the map at a dyadic rational (`p` or `p/2^q`).
    Eval {
        nf: String,
        at: String,
    },
}

#[derive(Subcommand)]
enum SquierCommand {
    /// Build the component of the base word and print it.
    Build {
        #[command(flatten)]
        pres: PresentationOpts,
        #[command(flatten)]
        bounds: BoundOpts,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Present the fundamental group of the component.
    Pi1 {
        #[command(flatten)]
        pres: PresentationOpts,
        #[command(flatten)]
        bounds: BoundOpts,
        /// Apply the limited simplification pass to the presentation.
        #[arg(long)]
        tietze: bool,
    },
}

#[derive(Subcommand)]
enum BuildCommand {
    /// `x1 ... xn |` with base `x1 ... xn`.
    DirectProduct {
        #[arg(long)]
        n: usize,
    },
    /// `x x1 ... xn | x = x1 , ...` with base `x`.
    FreeProduct {
        #[arg(long)]
        n: usize,
    },
    /// `x y z | x = x y , z = y z` with base `x z`.
    Bullet,
    /// `x y | x = x y` with base `x`.
    DirectPower,
    /// The bullet scaffold, used for the wreath product with Z.
    WreathWithZ,
    /// The sandwich scaffold for subnormal embeddings.
    BigO,
    /// Combine a scaffold with attached group presentations.
    Product {
        #[command(flatten)]
        pres: PresentationOpts,
        /// Attachment `letter=file:base-word` (repeatable).
        #[arg(long = "attach", required = true)]
        attach: Vec<String>,
    },
}

#[derive(Subcommand)]
enum ZwrzCommand {
    /// Assemble the generating pair from words and diagram files.
    Gens {
        #[command(flatten)]
        pres: PresentationOpts,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
        /// A nontrivial (y, y)-diagram file.
        #[arg(long)]
        delta: PathBuf,
        /// An (xy, x)-diagram file.
        #[arg(long)]
        gamma1: PathBuf,
        /// A (z, yz)-diagram file.
        #[arg(long)]
        gamma2: PathBuf,
    },
    /// Check the wreath-product identities for a diagram pair; exit 1 on
    /// failure.
    Verify {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        pres: PresentationOpts,
        /// Depth of the conjugate family checked.
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Search for witness data over the base word; exit 3 if none within
    /// bounds.
    Search {
        #[command(flatten)]
        pres: PresentationOpts,
        /// Longest candidate word in the witness triple.
        #[arg(long = "max-triple-len", default_value_t = 2)]
        max_triple_len: usize,
        #[command(flatten)]
        bounds: BoundOpts,
    },
}

#[derive(Subcommand)]
enum WreathCommand {
    /// Value of the counting homomorphism on the tower element g_k(n).
    Phi {
        #[arg(long)]
        k: usize,
        /// The exponent n of g_k(n).
        #[arg(long)]
        g: i64,
    },
    /// The tower element g_k(n), optionally with its generator word.
    Gk {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: i64,
        /// Also print the explicit generator word.
        #[arg(long)]
        word: bool,
    },
    /// Cost of [a^n, b^n] in conjugates of [a, b] at level 2.
    Cost {
        #[arg(long)]
        n: i64,
    },
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Backend {
    Thompson,
    Wreath,
}

#[derive(Args)]
struct DistortArgs {
    /// Element backend: normal forms, or wreath elements at --level.
    #[arg(long, value_enum, default_value_t = Backend::Thompson)]
    backend: Backend,
    /// Wreath level for the wreath backend.
    #[arg(long, default_value_t = 2)]
    level: usize,
    /// Comma-separated subgroup generators.
    #[arg(long)]
    x: String,
    /// Comma-separated ambient generators.
    #[arg(long)]
    y: String,
    /// Largest ambient radius profiled.
    #[arg(long = "n-max", default_value_t = 6)]
    n_max: usize,
    /// Subgroup enumeration radius.
    #[arg(long = "m-max", default_value_t = 8)]
    m_max: usize,
    /// Cap on enumerated ball sizes.
    #[arg(long = "max-ball", default_value_t = 100_000)]
    max_ball: usize,
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(EXIT_USAGE);
        }
    }
}

/// Resolves a `--presentation` value to a presentation and, for builtins,
/// its default base word.
fn load_presentation(source: &str) -> Result<(Presentation, Option<String>), CliError> {
    let named = |kind: BuilderKind| -> Result<(Presentation, Option<String>), CliError> {
        let (p, base) = squier::named_builder(kind)?;
        let base_text = p.display_word(&base);
        Ok((p, Some(base_text)))
    };
    match source {
        "thompson" => Ok((thompson::presentation(), Some("x".to_string()))),
        "thompson_sq" => Ok((thompson::presentation(), Some("x x".to_string()))),
        "q_t26" => Ok((
            abelian::derived_subgroup_presentation(16),
            Some("a0 b0".to_string()),
        )),
        "wreath_z" => named(BuilderKind::WreathWithZ),
        "big_o" => named(BuilderKind::BigO),
        "bullet" => named(BuilderKind::Bullet),
        "direct_power" => named(BuilderKind::DirectPower),
        path => {
            let text = fs::read_to_string(path)?;
            let name = Path::new(path)
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("file");
            Ok((Presentation::parse(name, &text)?, None))
        }
    }
}

fn presentation_of(opts: &PresentationOpts) -> Result<Presentation, CliError> {
    Ok(load_presentation(&opts.presentation)?.0)
}

fn presentation_and_base(opts: &PresentationOpts) -> Result<(Presentation, Word), CliError> {
    let (p, default_base) = load_presentation(&opts.presentation)?;
    let base_text = opts
        .base
        .clone()
        .or(default_base)
        .ok_or_else(|| message("--base is required with a file presentation"))?;
    let base = p.parse_word(&base_text)?;
    Ok((p, base))
}

fn read_diagram(p: &Presentation, path: &Path) -> Result<Diagram, CliError> {
    let text = fs::read_to_string(path)?;
    Ok(Diagram::parse(p, &text)?)
}

fn parse_nf(text: &str) -> Result<NormalForm, CliError> {
    Ok(NormalForm::parse(text)?)
}

fn run(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Reduce { file, pres, format } => {
            let p = presentation_of(&pres)?;
            let d = read_diagram(&p, &file)?.reduce();
            match format {
                Format::Text => print!("{}", d.to_text()),
                Format::Dot => print!("{}", d.to_dot()),
                Format::Csv => return Err(message("diagrams have no CSV form")),
            }
            Ok(0)
        }
        Command::Mul { a, b, pres } => {
            let p = presentation_of(&pres)?;
            let product = read_diagram(&p, &a)?.compose(&read_diagram(&p, &b)?)?;
            print!("{}", product.reduce().to_text());
            Ok(0)
        }
        Command::Inv { file, pres } => {
            let p = presentation_of(&pres)?;
            print!("{}", read_diagram(&p, &file)?.inverse().reduce().to_text());
            Ok(0)
        }
        Command::Eq { a, b, pres } => {
            let p = presentation_of(&pres)?;
            let equal = read_diagram(&p, &a)?.reduce() == read_diagram(&p, &b)?.reduce();
            println!("{}", if equal { "equal" } else { "not equal" });
            Ok(if equal { 0 } else { EXIT_NEGATIVE })
        }
        Command::Comp { file, pres } => {
            let p = presentation_of(&pres)?;
            let d = read_diagram(&p, &file)?;
            let decomposition = d.decompose_components()?;
            println!("comp: {}", d.comp()?);
            for part in &decomposition.parts {
                print!("{}", part.to_text());
            }
            Ok(0)
        }
        Command::Nf { op } => match op {
            NfCommand::ToDiagram { nf, width } => {
                let d = thompson::nf_to_diagram(&parse_nf(&nf)?, width)?;
                print!("{}", d.to_text());
                Ok(0)
            }
            NfCommand::FromDiagram { file } => {
                let p = thompson::presentation();
                let f = thompson::diagram_to_nf(&read_diagram(&p, &file)?)?;
                println!("{f}");
                Ok(0)
            }
        },
        Command::Pl { op } => match op {
            PlCommand::Map { nf, format, level } => {
                let map = pl::pl_from_nf(&parse_nf(&nf)?);
                match format {
                    Format::Text => println!("{map}"),
                    Format::Csv => print!("{}", map.sample_csv(level)),
                    Format::Dot => return Err(message("PL maps have no DOT form")),
                }
                Ok(0)
            }
            PlCommand::Support { nf } => {
                let map = pl::pl_from_nf(&parse_nf(&nf)?);
                for (a, b) in map.support() {
                    println!("[{a}, {b}]");
                }
                Ok(0)
            }
            PlCommand::Eval { nf, at } => {
                let map = pl::pl_from_nf(&parse_nf(&nf)?);
                let t: Dyadic = at.parse()?;
                println!("{}", map.eval(&t)?);
                Ok(0)
            }
        },
        Command::Rho { input, nf, pres } => {
            let d = if nf {
                thompson::nf_to_diagram(&parse_nf(&input)?, 1)?
            } else {
                let p = presentation_of(&pres)?;
                read_diagram(&p, Path::new(&input))?
            };
            println!("{}", abelian::rho(&d, &MonoidOracle::thompson())?);
            Ok(0)
        }
        Command::Fprime { nf } => {
            let inside = abelian::in_derived_subgroup(&parse_nf(&nf)?);
            println!("{}", if inside { "in F'" } else { "not in F'" });
            Ok(if inside { 0 } else { EXIT_NEGATIVE })
        }
        Command::Squier { op } => match op {
            SquierCommand::Build {
                pres,
                bounds,
                format,
            } => {
                let (p, base) = presentation_and_base(&pres)?;
                let k = squier::build_component(&p, &base, bounds.limits());
                match format {
                    Format::Text => println!("{}", k.to_text()),
                    Format::Dot => print!("{}", k.to_dot()),
                    Format::Csv => return Err(message("complexes have no CSV form")),
                }
                Ok(0)
            }
            SquierCommand::Pi1 {
                pres,
                bounds,
                tietze,
            } => {
                let (p, base) = presentation_and_base(&pres)?;
                let k = squier::build_component(&p, &base, bounds.limits());
                println!("{}", k.pi1_presentation(tietze).to_text());
                Ok(0)
            }
        },
        Command::Build { kind } => {
            let (p, base) = match kind {
                BuildCommand::DirectProduct { n } => {
                    squier::named_builder(BuilderKind::DirectProduct(n))?
                }
                BuildCommand::FreeProduct { n } => {
                    squier::named_builder(BuilderKind::FreeProduct(n))?
                }
                BuildCommand::Bullet => squier::named_builder(BuilderKind::Bullet)?,
                BuildCommand::DirectPower => squier::named_builder(BuilderKind::DirectPower)?,
                BuildCommand::WreathWithZ => squier::named_builder(BuilderKind::WreathWithZ)?,
                BuildCommand::BigO => squier::named_builder(BuilderKind::BigO)?,
                BuildCommand::Product { pres, attach } => {
                    let (q, base) = presentation_and_base(&pres)?;
                    let mut family = Vec::with_capacity(attach.len());
                    for entry in &attach {
                        family.push(parse_attachment(entry)?);
                    }
                    let combined = squier::diagram_product_presentation(&q, &family)?;
                    let base = combined.parse_word(&q.display_word(&base))?;
                    (combined, base)
                }
            };
            println!("{}", p.to_text());
            println!("base: {}", p.display_word(&base));
            Ok(0)
        }
        Command::Zwrz { op } => match op {
            ZwrzCommand::Gens {
                pres,
                x,
                y,
                z,
                delta,
                gamma1,
                gamma2,
            } => {
                let p = presentation_of(&pres)?;
                let (x, y, z) = (p.parse_word(&x)?, p.parse_word(&y)?, p.parse_word(&z)?);
                let (a, b) = subgroup::zwrz_generators(
                    &p,
                    &x,
                    &y,
                    &z,
                    &read_diagram(&p, &delta)?,
                    &read_diagram(&p, &gamma1)?,
                    &read_diagram(&p, &gamma2)?,
                )?;
                print!("{}{}", a.to_text(), b.to_text());
                Ok(0)
            }
            ZwrzCommand::Verify { a, b, pres, depth } => {
                let p = presentation_of(&pres)?;
                let report =
                    subgroup::verify_zwrz(&read_diagram(&p, &a)?, &read_diagram(&p, &b)?, depth)?;
                println!("{report}");
                Ok(if report.passed() { 0 } else { EXIT_NEGATIVE })
            }
            ZwrzCommand::Search {
                pres,
                max_triple_len,
                bounds,
            } => {
                let (p, base) = presentation_and_base(&pres)?;
                let search_bounds = WitnessSearchBounds {
                    max_triple_len,
                    equality: bounds.limits(),
                    diagram: bounds.limits(),
                };
                match subgroup::zwrz_witness_search(&p, &base, &search_bounds) {
                    Some(w) => {
                        println!("x: {}", p.display_word(&w.x));
                        println!("y: {}", p.display_word(&w.y));
                        println!("z: {}", p.display_word(&w.z));
                        print!("{}", w.delta.to_text());
                        Ok(0)
                    }
                    None => {
                        eprintln!("no witness within bounds");
                        Ok(EXIT_BOUND)
                    }
                }
            }
        },
        Command::Wreath { op } => match op {
            WreathCommand::Phi { k, g } => {
                let element = wreath::g_k_n(k, g)?;
                println!("{}", wreath::phi_k(&element)?);
                Ok(0)
            }
            WreathCommand::Gk { k, n, word } => {
                println!("{}", wreath::g_k_n(k, n)?);
                if word {
                    let rendered: Vec<String> = wreath::g_k_word(k, n)
                        .into_iter()
                        .map(|(i, inverted)| {
                            if inverted {
                                format!("a{i}^-1")
                            } else {
                                format!("a{i}")
                            }
                        })
                        .collect();
                    println!("{}", rendered.join(" "));
                }
                Ok(0)
            }
            WreathCommand::Cost { n } => {
                let a = WreathElement::generator(2, 1)?;
                let b = WreathElement::generator(2, 2)?;
                let g = wreath::commutator(&a.pow(n), &b.pow(n))?;
                println!("{}", wreath::relator_cost_zwrz(&g)?);
                Ok(0)
            }
        },
        Command::Distort(args) => {
            let csv = match args.backend {
                Backend::Thompson => {
                    let parse_list = |text: &str| -> Result<Vec<NormalForm>, CliError> {
                        text.split(',').map(|t| parse_nf(t.trim())).collect()
                    };
                    subgroup::distortion_profile(
                        &ThompsonOps,
                        &parse_list(&args.x)?,
                        &parse_list(&args.y)?,
                        args.n_max,
                        args.m_max,
                        args.max_ball,
                    )
                    .to_csv()
                }
                Backend::Wreath => {
                    let ops = WreathOps { level: args.level };
                    let parse_list = |text: &str| -> Result<Vec<WreathElement>, CliError> {
                        text.split(',')
                            .map(|t| parse_wreath_generator(t.trim(), args.level))
                            .collect()
                    };
                    subgroup::distortion_profile(
                        &ops,
                        &parse_list(&args.x)?,
                        &parse_list(&args.y)?,
                        args.n_max,
                        args.m_max,
                        args.max_ball,
                    )
                    .to_csv()
                }
            };
            print!("{csv}");
            Ok(0)
        }
        Command::Dot { file, pres } => {
            let p = presentation_of(&pres)?;
            print!("{}", read_diagram(&p, &file)?.to_dot());
            Ok(0)
        }
    }
}

/// Parses `letter=file:base-word` into a combination-family entry.
fn parse_attachment(raw: &str) -> Result<(String, Presentation, Word), CliError> {
    let (letter, rest) = raw
        .split_once('=')
        .ok_or_else(|| message(format!("attachment `{raw}` is missing `=`")))?;
    let (file, base_text) = rest
        .rsplit_once(':')
        .ok_or_else(|| message(format!("attachment `{raw}` is missing `:base-word`")))?;
    let text = fs::read_to_string(file)?;
    let name = Path::new(file)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("attached");
    let p = Presentation::parse(name, &text)?;
    let base = p.parse_word(base_text)?;
    Ok((letter.to_string(), p, base))
}

/// Parses a wreath generator token `a<i>`.
fn parse_wreath_generator(token: &str, level: usize) -> Result<WreathElement, CliError> {
    let index: usize = token
        .strip_prefix('a')
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| message(format!("expected a generator token like `a1`, got `{token}`")))?;
    Ok(WreathElement::generator(level, index)?)
}
