use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use takiff_core::algebra::{bracket_generators, casimir, commutator_with_generator, Expression, Straightener};
use takiff_core::conformance;
use takiff_core::ext::{block_of, ext1, offset_label, quiver, stabilize_ext, BlockId, DEFAULT_DEPTH_CAP};
use takiff_core::module::{depth_from_i64, simple_module, verma};
use takiff_core::rational::{fmt_q, parse_q};
use takiff_core::structure::{
    describe_verma_vector, hasse_diagram, mn_filtration, multiplicities, singular_vectors, DEFAULT_GUARD,
};
use takiff_core::{CategoryFlag, Error, Generator, TruncatedModule, Weight, Q};

#[derive(Parser)]
#[command(name = "takiff", version, about = "Exact computations in category O for sl2 ⊗ C[x]/(x²)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Verma,
    Simple,
}

#[derive(clap::Args, Clone)]
struct WeightArgs {
    /// Value of the weight on h, as p/q or an integer.
    #[arg(long = "h", value_parser = rational, allow_hyphen_values = true)]
    h: Q,
    /// Value of the weight on h̄.
    #[arg(long = "hbar", value_parser = rational, allow_hyphen_values = true)]
    hbar: Q,
}

impl WeightArgs {
    fn weight(&self) -> Weight {
        Weight::new(self.h.clone(), self.hbar.clone())
    }
}

#[derive(clap::Args, Clone)]
struct TargetArgs {
    #[arg(long = "mu-h", value_parser = rational, allow_hyphen_values = true)]
    mu_h: Q,
    #[arg(long = "mu-hbar", value_parser = rational, allow_hyphen_values = true)]
    mu_hbar: Q,
}

#[derive(Subcommand)]
enum Command {
    /// Bracket of two generators.
    Bracket {
        x: String,
        y: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// PBW normal form of an expression such as "e*fbar^2 - 2 h".
    Straighten {
        expr: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Commutators of the Casimir element with every generator.
    CasimirCheck {
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Truncated Verma module.
    Verma {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long, allow_hyphen_values = true)]
        depth: i64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Truncated simple module.
    Simple {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long, allow_hyphen_values = true)]
        depth: i64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Character of a Verma or simple module.
    Character {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long, allow_hyphen_values = true)]
        depth: i64,
        #[arg(long, value_enum, default_value = "verma")]
        module: Kind,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Composition multiplicities by character peeling.
    Multiplicities {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long, allow_hyphen_values = true)]
        depth: i64,
        #[arg(long, value_enum, default_value = "verma")]
        module: Kind,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Singular vectors of a Verma module at a weight below its top.
    Singular {
        #[command(flatten)]
        weight: WeightArgs,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, allow_hyphen_values = true)]
        depth: i64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Socle layers of Δ(n)/K_n.
    Filtration {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long, allow_hyphen_values = true)]
        depth: i64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Inclusion diagram of the named submodules of Δ(n).
    Hasse {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long, allow_hyphen_values = true)]
        depth: i64,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Block containing a weight.
    Block {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// dim Ext¹(L(λ), L(μ)); stabilized over depths unless --depth is given.
    Ext {
        #[command(flatten)]
        weight: WeightArgs,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value = "O")]
        cat: CategoryFlag,
        #[arg(long, allow_hyphen_values = true)]
        depth: Option<i64>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Ext quiver on the weights λ − kα for k in --from..=--to.
    Quiver {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        to: i64,
        #[arg(long, default_value = "O")]
        cat: CategoryFlag,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Runs the built-in conformance checks.
    PaperCheck {
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn rational(s: &str) -> Result<Q, String> {
    parse_q(s).map_err(|e| e.to_string())
}

fn depth_cap() -> Result<usize, Error> {
    match std::env::var("TAKIFF_DEPTH_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("TAKIFF_DEPTH_CAP must be a nonnegative integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_DEPTH_CAP),
    }
}

enum Output {
    Text(String),
    Json(Value),
}

fn unsupported(format: Format, cmd: &str) -> Error {
    let name = match format {
        Format::Json => "json",
        Format::Dot => "dot",
        Format::Table => "table",
    };
    Error::Invalid(format!("{cmd} does not support --format {name}"))
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn dims_table(dims: &[usize]) -> String {
    let width = dims.iter().map(|d| d.to_string().len()).chain([dims.len().to_string().len()]).max().unwrap_or(1);
    let depth: Vec<String> = (0..dims.len()).map(|n| format!("{n:>width$}")).collect();
    let dim: Vec<String> = dims.iter().map(|d| format!("{d:>width$}")).collect();
    format!("depth {}\ndim   {}\n", depth.join(" "), dim.join(" "))
}

fn module_output(m: &TruncatedModule, format: Format, cmd: &str) -> Result<Output, Error> {
    match format {
        Format::Json => Ok(Output::Json(serde_json::to_value(m).expect("modules serialize"))),
        Format::Table => Ok(Output::Text(dims_table(m.dims()))),
        Format::Dot => Err(unsupported(format, cmd)),
    }
}

fn build(kind: Kind, w: &Weight, depth: usize) -> TruncatedModule {
    match kind {
        Kind::Verma => verma(w, depth),
        Kind::Simple => simple_module(w, depth),
    }
}

fn run(cmd: Command) -> Result<(Output, bool), Error> {
    let ok = |o| Ok((o, true));
    match cmd {
        Command::Bracket { x, y, format } => {
            let (gx, gy): (Generator, Generator) = (x.parse()?, y.parse()?);
            let b = bracket_generators(gx, gy);
            match format {
                Format::Table => ok(Output::Text(format!("[{}, {}] = {}\n", gx.symbol(), gy.symbol(), b))),
                Format::Json => {
                    let terms: serde_json::Map<String, Value> =
                        b.terms().map(|(g, c)| (g.name().to_string(), json!(fmt_q(c)))).collect();
                    ok(Output::Json(json!({"x": gx.name(), "y": gy.name(), "bracket": terms})))
                }
                Format::Dot => Err(unsupported(format, "bracket")),
            }
        }
        Command::Straighten { expr, format } => {
            let e: Expression = expr.parse()?;
            let u = Straightener::new().straighten(&e);
            match format {
                Format::Table => ok(Output::Text(format!("{u}\n"))),
                Format::Json => ok(Output::Json(serde_json::to_value(&u).expect("elements serialize"))),
                Format::Dot => Err(unsupported(format, "straighten")),
            }
        }
        Command::CasimirCheck { format } => {
            let c = casimir();
            let rows: Vec<(Generator, bool)> =
                Generator::ALL.iter().map(|&g| (g, commutator_with_generator(&c, g).is_zero())).collect();
            let all = rows.iter().all(|r| r.1);
            let out = match format {
                Format::Table => {
                    let mut s = format!("c = {c}\n");
                    for (g, z) in &rows {
                        s += &format!("[c, {}] {}\n", g.symbol(), if *z { "= 0" } else { "≠ 0" });
                    }
                    Output::Text(s)
                }
                Format::Json => {
                    let m: serde_json::Map<String, Value> =
                        rows.iter().map(|(g, z)| (g.name().to_string(), json!(z))).collect();
                    Output::Json(json!({"casimir": c, "commutes": m}))
                }
                Format::Dot => return Err(unsupported(format, "casimir-check")),
            };
            Ok((out, all))
        }
        Command::Verma { weight, depth, format } => {
            ok(module_output(&verma(&weight.weight(), depth_from_i64(depth)?), format, "verma")?)
        }
        Command::Simple { weight, depth, format } => {
            ok(module_output(&simple_module(&weight.weight(), depth_from_i64(depth)?), format, "simple")?)
        }
        Command::Character { weight, depth, module, format } => {
            let ch = build(module, &weight.weight(), depth_from_i64(depth)?).character();
            match format {
                Format::Json => ok(Output::Json(serde_json::to_value(&ch).expect("characters serialize"))),
                Format::Table => ok(Output::Text(dims_table(&ch.padded()))),
                Format::Dot => Err(unsupported(format, "character")),
            }
        }
        Command::Multiplicities { weight, depth, module, guard, format } => {
            let w = weight.weight();
            let t = multiplicities(&build(module, &w, depth_from_i64(depth)?).character(), guard)?;
            match format {
                Format::Json => ok(Output::Json(serde_json::to_value(&t).expect("tables serialize"))),
                Format::Table => {
                    let mut s = String::new();
                    for k in 0..=t.trusted_depth {
                        s += &format!("{:<8} {}\n", offset_label(k as i64), t.get(k));
                    }
                    ok(Output::Text(s))
                }
                Format::Dot => Err(unsupported(format, "multiplicities")),
            }
        }
        Command::Singular { weight, target, depth, format } => {
            let m = verma(&weight.weight(), depth_from_i64(depth)?);
            let mu = Weight::new(target.mu_h, target.mu_hbar);
            let s = singular_vectors(&m, &mu)?;
            match format {
                Format::Table => {
                    let mut out = format!("weight {} depth {} dim {}\n", s.weight, s.depth, s.dim());
                    for v in &s.basis {
                        out += &format!("  {}\n", describe_verma_vector(s.depth, v));
                    }
                    ok(Output::Text(out))
                }
                Format::Json => {
                    let basis: Vec<Vec<String>> =
                        s.basis.iter().map(|v| v.to_dense(m.dims()[s.depth]).iter().map(fmt_q).collect()).collect();
                    ok(Output::Json(json!({"weight": s.weight, "depth": s.depth, "dim": s.dim(), "basis": basis})))
                }
                Format::Dot => Err(unsupported(format, "singular")),
            }
        }
        Command::Filtration { weight, depth, format } => {
            let f = mn_filtration(&weight.weight(), depth_from_i64(depth)?)?;
            match format {
                Format::Json => ok(Output::Json(json!({"layers": f.layers}))),
                Format::Table => {
                    let mut s = String::new();
                    for (i, layer) in f.layers.iter().enumerate() {
                        s += &format!(
                            "{:<8} L{} dims {}\n",
                            offset_label(i as i64),
                            layer.weight,
                            join(layer.character.dims())
                        );
                    }
                    ok(Output::Text(s))
                }
                Format::Dot => Err(unsupported(format, "filtration")),
            }
        }
        Command::Hasse { weight, depth, format } => {
            let p = hasse_diagram(&weight.weight(), depth_from_i64(depth)?)?;
            match format {
                Format::Dot => ok(Output::Text(p.to_dot())),
                Format::Json => ok(Output::Json(serde_json::to_value(&p).expect("posets serialize"))),
                Format::Table => {
                    let s: String = p.label_edges().iter().map(|(a, b)| format!("{a} ⊃ {b}\n")).collect();
                    ok(Output::Text(s))
                }
            }
        }
        Command::Block { weight, format } => {
            let b = block_of(&weight.weight());
            match format {
                Format::Json => ok(Output::Json(serde_json::to_value(&b).expect("blocks serialize"))),
                Format::Table => ok(Output::Text(match &b {
                    BlockId::Nondegenerate { weight } => format!("nondegenerate {weight}\n"),
                    BlockId::Coset { representative } => format!("coset representative {representative}\n"),
                })),
                Format::Dot => Err(unsupported(format, "block")),
            }
        }
        Command::Ext { weight, target, cat, depth, format } => {
            let (l, mu) = (weight.weight(), Weight::new(target.mu_h, target.mu_hbar));
            let r = match depth {
                Some(d) => ext1(&l, &mu, cat, depth_from_i64(d)?)?,
                None => stabilize_ext(&l, &mu, cat, depth_cap()?)?,
            };
            match format {
                Format::Json => ok(Output::Json(serde_json::to_value(&r).expect("results serialize"))),
                Format::Table => ok(Output::Text(format!(
                    "dim = {}\ndepths {}\ndims   {}\nstabilized {}\n",
                    r.dimension,
                    join(&r.depths_checked),
                    join(&r.dims_by_depth),
                    r.stabilized
                ))),
                Format::Dot => Err(unsupported(format, "ext")),
            }
        }
        Command::Quiver { weight, from, to, cat, format } => {
            let l = weight.weight();
            if from > to {
                return Err(Error::Invalid("--from must not exceed --to".into()));
            }
            let window: Vec<Weight> = (from..=to).map(|k| l.lowered(k)).collect();
            let qv = quiver(&block_of(&l), &window, cat, depth_cap()?)?;
            match format {
                Format::Dot => ok(Output::Text(qv.to_dot())),
                Format::Json => ok(Output::Json(serde_json::to_value(&qv).expect("quivers serialize"))),
                Format::Table => {
                    let labels: Vec<String> = (0..qv.vertices.len()).map(|i| qv.label(i)).collect();
                    let width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(1);
                    let pad = |s: &str| format!("{s}{}", " ".repeat(width - s.chars().count()));
                    let mut s =
                        format!("{} {}\n", pad(""), labels.iter().map(|l| pad(l)).collect::<Vec<_>>().join(" "));
                    for (a, la) in labels.iter().enumerate() {
                        let row: Vec<String> = (0..labels.len()).map(|b| pad(&qv.arrow(a, b).to_string())).collect();
                        s += &format!("{} {}\n", pad(la), row.join(" "));
                    }
                    ok(Output::Text(s))
                }
            }
        }
        Command::PaperCheck { report } => {
            let r = conformance::run(depth_cap()?);
            if let Some(path) = report {
                let body = serde_json::to_string_pretty(&r).expect("reports serialize");
                fs::write(&path, body + "\n")
                    .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?;
            }
            let width = r.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
            let mut s = String::new();
            for c in &r.checks {
                let status = if c.passed { "pass" } else { "FAIL" };
                s += &format!(
                    "{status}  {:<width$}  expected {:<6} observed {:<6} {}\n",
                    c.id, c.expected, c.observed, c.claim
                );
            }
            s += &format!("{} passed, {} failed\n", r.passed, r.failed);
            Ok((Output::Text(s), r.all_passed()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, success)) => {
            let text = match out {
                Output::Text(s) => s,
                Output::Json(v) => serde_json::to_string_pretty(&v).expect("values serialize") + "\n",
            };
            // a closed pipe (e.g. `| head`) is not an error
            let mut stdout = io::stdout().lock();
            if let Err(e) = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::FAILURE;
                }
            }
            if success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
