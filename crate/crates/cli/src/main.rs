//! `utk`: command-line front end for utk-core.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use utk_core::bounds::{BoundTable, BoundInt};
use utk_core::constructions::TraceEntry;
use utk_core::search::SearchConfig;
use utk_core::{
    build_redleaf_comb, build_universal_tanglegram, enumerate_shapes, enumerate_tanglegrams, find_min_universal,
    is_universal, is_universal_tanglegram, jellyfish_mast, mast, parse_code, parse_newick, JellyfishSpec, Shape,
    Tanglegram, UniversalBuilder,
};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(name = "utk", version, about = "Universal tree shapes and tanglegrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "UTK_THREADS")]
    threads: Option<usize>,

    /// Output format; each command accepts a subset.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,

    /// Write output to a file instead of stdout.
    #[arg(short = 'o', long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Newick,
    Dot,
    Code,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Universal,
    Redleaf,
    Comb,
    Tanglegram,
}

#[derive(Subcommand)]
enum Command {
    /// List every shape with n white leaves, one per line in code order.
    Enumerate {
        #[arg(short)]
        n: usize,
        #[arg(short, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        redleaf: bool,
        /// Print only the number of shapes.
        #[arg(long)]
        count: bool,
    },
    /// Check whether the shape in FILE is n-universal.
    Check {
        file: PathBuf,
        #[arg(short)]
        n: usize,
        #[arg(short, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        redleaf: bool,
    },
    /// Build a universal shape, redleaf comb or universal tanglegram.
    Build {
        #[arg(short)]
        n: usize,
        #[arg(long, value_enum, default_value = "universal")]
        kind: Kind,
        #[arg(short, default_value_t = 2)]
        d: usize,
        /// Use searched minimal shapes for all sizes up to n.
        #[arg(long)]
        minimal: bool,
        /// Print the construction trace as JSON instead of the shape.
        #[arg(long)]
        trace: bool,
    },
    /// Find u(n) and all minimal n-universal shapes.
    Search {
        #[arg(short)]
        n: usize,
        #[arg(short, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        redleaf: bool,
        #[arg(long)]
        max_candidates: Option<u64>,
        #[arg(long)]
        max_seconds: Option<f64>,
        /// Plain enumeration with a full check per shape.
        #[arg(long)]
        no_prune: bool,
        /// Include wall time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Maximum agreement subtree size of two shapes, or of two jellyfish.
    Mast {
        /// Two shape codes, or two `h,l` jellyfish parameters with --jelly.
        #[arg(num_args = 2)]
        trees: Vec<String>,
        #[arg(long)]
        jelly: bool,
    },
    /// Table of bounds on u(n).
    Bounds {
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long, default_value_t = 12)]
        to: usize,
        /// Use arbitrary-precision integers.
        #[arg(long)]
        big: bool,
    },
    /// List all tanglegrams of size n up to isomorphism.
    TangleEnumerate {
        #[arg(short)]
        n: usize,
        #[arg(short, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        count: bool,
    },
    /// Check whether the tanglegram in FILE is n-universal.
    TangleCheck {
        file: PathBuf,
        #[arg(short)]
        n: usize,
        #[arg(short, default_value_t = 2)]
        d: usize,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

fn usage(msg: impl ToString) -> Failure {
    Failure { code: EXIT_USAGE, msg: msg.to_string() }
}

struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let format = if cli.json { Some(Format::Json) } else { cli.format };
    match run(cli.command, format) {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, &out.text),
                None => std::io::stdout().write_all(out.text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn pick(format: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(usage("output format not supported by this command"))
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn read_shape(path: &PathBuf, d: usize) -> Result<Shape, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let text = text.trim();
    let parsed = if text.contains(['x', ',', ';', 'R']) { parse_newick(text, d) } else { parse_code(text, d) };
    parsed.map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn render_shape(s: &Shape, format: Format) -> String {
    match format {
        Format::Newick => format!("{}\n", s.to_newick()),
        Format::Dot => s.to_dot("shape"),
        Format::Json => to_json(&json!({
            "code": s.code(),
            "white_leaves": s.white_leaves(),
            "height": s.height(),
            "redleaf": s.has_red(),
            "d": s.arity(),
        })),
        _ => format!("{}\n", s.code()),
    }
}

fn run(command: Command, format: Option<Format>) -> Result<Output, Failure> {
    use Format::*;
    let core = |e: utk_core::Error| usage(e);
    match command {
        Command::Enumerate { n, d, redleaf, count } => {
            let shapes: Vec<Shape> = enumerate_shapes(n, d, redleaf).map_err(core)?.collect();
            let f = pick(format, Code, &[Text, Code, Newick, Json])?;
            let text = match (count, f) {
                (true, Json) => to_json(&json!({ "n": n, "d": d, "redleaf": redleaf, "count": shapes.len() })),
                (true, _) => format!("{}\n", shapes.len()),
                (false, Json) => {
                    let codes: Vec<&str> = shapes.iter().map(Shape::code).collect();
                    to_json(&json!({ "n": n, "d": d, "redleaf": redleaf, "count": codes.len(), "shapes": codes }))
                }
                (false, Newick) => shapes.iter().map(|s| s.to_newick() + "\n").collect(),
                (false, _) => shapes.iter().map(|s| format!("{s}\n")).collect(),
            };
            Ok(Output::ok(text))
        }
        Command::Check { file, n, d, redleaf } => {
            let s = read_shape(&file, d)?;
            let ok = is_universal(&s, n, redleaf).map_err(core)?;
            let text = match pick(format, Text, &[Text, Json])? {
                Json => to_json(&json!({
                    "shape": s.code(), "n": n, "d": d, "redleaf": redleaf,
                    "white_leaves": s.white_leaves(), "universal": ok,
                })),
                _ => format!(
                    "{} ({} white leaves) is {}{}-universal\n",
                    s.code(),
                    s.white_leaves(),
                    if ok { "" } else { "not " },
                    n
                ),
            };
            Ok(Output { text, code: if ok { 0 } else { EXIT_FAILED } })
        }
        Command::Build { n, kind, d, minimal, trace } => build(n, kind, d, minimal, trace, format),
        Command::Search { n, d, redleaf, max_candidates, max_seconds, no_prune, timing } => {
            if max_candidates == Some(0) || max_seconds.is_some_and(|s| s.is_nan() || s <= 0.0) {
                return Err(usage("limits must be positive"));
            }
            let cfg = SearchConfig { max_candidates, max_seconds, prune: !no_prune };
            let mut r = find_min_universal(n, d, redleaf, &cfg).map_err(core)?;
            if !timing {
                r.wall_time_ms = None;
            }
            let code = if r.authoritative { 0 } else { EXIT_LIMIT };
            let text = match pick(format, Text, &[Text, Json, Code])? {
                Json => to_json(&r),
                Code => r.minimal_shapes.iter().map(|c| format!("{c}\n")).collect(),
                _ => {
                    let name = if redleaf { "u1" } else { "u" };
                    let mut t = match r.u_value {
                        Some(u) => format!("{name}({n}) = {u} (d = {d}), {} minimal shapes\n", r.minimal_shapes.len()),
                        None => format!("{name}({n}) unresolved (d = {d}): resource limit reached\n"),
                    };
                    t += &format!("candidates examined: {}\n", r.candidates_examined);
                    if let Some(ms) = r.wall_time_ms {
                        t += &format!("wall time: {ms} ms\n");
                    }
                    for c in &r.minimal_shapes {
                        t += &format!("{c}\n");
                    }
                    t
                }
            };
            Ok(Output { text, code })
        }
        Command::Mast { trees, jelly } => {
            let value = if jelly {
                let spec = |s: &str| -> Result<JellyfishSpec, Failure> {
                    let (h, l) = s.split_once(',').ok_or_else(|| usage(format!("expected h,l but got {s:?}")))?;
                    let h = h.trim().parse().map_err(usage)?;
                    let l = l.trim().parse().map_err(usage)?;
                    JellyfishSpec::new(h, l).map_err(core)
                };
                jellyfish_mast(spec(&trees[0])?, spec(&trees[1])?).map_err(core)?
            } else {
                let a = parse_code(&trees[0], 2).map_err(core)?;
                let b = parse_code(&trees[1], 2).map_err(core)?;
                mast(&a, &b).map_err(core)? as u64
            };
            let text = match pick(format, Text, &[Text, Json])? {
                Json => to_json(&json!({ "a": trees[0], "b": trees[1], "jellyfish": jelly, "mast": value })),
                _ => format!("{value}\n"),
            };
            Ok(Output::ok(text))
        }
        Command::Bounds { from, to, big } => {
            let f = pick(format, Text, &[Text, Csv, Json])?;
            if big {
                bounds_table::<utk_core::BigUint>(from, to, f, |t| to_json(&t.to_decimal()))
            } else {
                bounds_table::<u64>(from, to, f, to_json)
            }
        }
        Command::TangleEnumerate { n, d, count } => {
            let all = enumerate_tanglegrams(n, d).map_err(core)?;
            let text = match (count, pick(format, Text, &[Text, Json])?) {
                (true, Json) => to_json(&json!({ "n": n, "d": d, "count": all.len() })),
                (true, _) => format!("{}\n", all.len()),
                (false, Json) => {
                    let items: Vec<String> = all.iter().map(Tanglegram::to_text).collect();
                    to_json(&json!({ "n": n, "d": d, "count": items.len(), "tanglegrams": items }))
                }
                (false, _) => all.iter().map(|t| t.to_text() + "\n").collect(),
            };
            Ok(Output::ok(text))
        }
        Command::TangleCheck { file, n, d } => {
            let text = fs::read_to_string(&file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let t = Tanglegram::parse_text(&text, d).map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let ok = is_universal_tanglegram(&t, n).map_err(core)?;
            let out = match pick(format, Text, &[Text, Json])? {
                Json => to_json(&json!({ "tanglegram": t.to_text(), "size": t.size(), "n": n, "universal": ok })),
                _ => format!("size-{} tanglegram is {}{}-universal\n", t.size(), if ok { "" } else { "not " }, n),
            };
            Ok(Output { text: out, code: if ok { 0 } else { EXIT_FAILED } })
        }
    }
}

fn bounds_table<T: BoundInt>(
    from: usize,
    to: usize,
    f: Format,
    json: impl FnOnce(&BoundTable<T>) -> String,
) -> Result<Output, Failure> {
    let table = BoundTable::<T>::new(from, to).map_err(usage)?;
    Ok(Output::ok(match f {
        Format::Csv => table.to_csv(),
        Format::Json => json(&table),
        _ => table.to_text(),
    }))
}

fn builder(n: usize, d: usize, minimal: bool) -> Result<UniversalBuilder, Failure> {
    let b = UniversalBuilder::new(d).map_err(usage)?;
    if minimal {
        for m in 2..=n {
            let r = find_min_universal(m, d, false, &SearchConfig::default()).map_err(usage)?;
            let code = r.minimal_shapes.first().ok_or_else(|| usage("search found no shape"))?;
            b.inject(m, false, code.to_shape(d).map_err(usage)?).map_err(usage)?;
        }
    }
    Ok(b)
}

fn build(n: usize, kind: Kind, d: usize, minimal: bool, trace: bool, format: Option<Format>) -> Result<Output, Failure> {
    use Format::*;
    if n == 0 {
        return Err(usage("n must be at least 1"));
    }
    match kind {
        Kind::Universal | Kind::Redleaf => {
            let b = builder(n, d, minimal)?;
            let redleaf = kind == Kind::Redleaf;
            if trace {
                let t: Vec<TraceEntry> = b.trace(n, redleaf).map_err(usage)?;
                return Ok(Output::ok(to_json(&t)));
            }
            let s = if redleaf { b.redleaf(n) } else { b.universal(n) }.map_err(usage)?;
            Ok(Output::ok(render_shape(&s, pick(format, Code, &[Text, Code, Newick, Dot, Json])?)))
        }
        Kind::Comb => {
            if !n.is_power_of_two() {
                return Err(usage("comb needs n = 2^k"));
            }
            let b = builder(n, d, minimal)?;
            let s = build_redleaf_comb(n.ilog2() as usize, &b).map_err(usage)?;
            Ok(Output::ok(render_shape(&s, pick(format, Code, &[Text, Code, Newick, Dot, Json])?)))
        }
        Kind::Tanglegram => {
            let b = builder(n, d, minimal)?;
            let u = b.universal(n).map_err(usage)?;
            let t = build_universal_tanglegram(&u).map_err(usage)?;
            Ok(Output::ok(match pick(format, Text, &[Text, Dot, Json])? {
                Dot => t.to_dot("tanglegram"),
                Json => to_json(&json!({
                    "n": n, "size": t.size(), "universal_shape": u.code(), "tanglegram": t.to_text(),
                })),
                _ => t.to_text() + "\n",
            }))
        }
    }
}
