use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fock_duality::decompose::{decompose, eigenvalue, reflection_analysis};
use fock_duality::diagram::{
    fmt_rows, o_group_to_algebra, pairing_table, render_gl, render_rows, rowe_w_from_lambda, side_by_side,
    GLDiagram, OGroupDiagram, PairType,
};
use fock_duality::dual_pairs::{build_pair, phi_hw};
use fock_duality::rational::{fmt_q, parse_q};
use fock_duality::verify::{run_verify, Bounds, Suite};
use fock_duality::{Error, HalfInt};
use serde_json::json;

#[derive(Parser)]
#[command(name = "fock-duality", version, about = "Skew Howe duality on fermionic Fock space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairArg {
    #[value(name = "gl-gl")]
    GlGl,
    #[value(name = "sp-sp")]
    SpSp,
    #[value(name = "o-o")]
    OO,
}

impl From<PairArg> for PairType {
    fn from(p: PairArg) -> Self {
        match p {
            PairArg::GlGl => PairType::GlGl,
            PairArg::SpSp => PairType::SpSp,
            PairArg::OO => PairType::OO,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Car,
    Involutions,
    Hw,
    Tensor,
    Quasispin,
    Commutant,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Car => Suite::Car,
            SuiteArg::Involutions => Suite::Involutions,
            SuiteArg::Hw => Suite::Hw,
            SuiteArg::Tensor => Suite::Tensor,
            SuiteArg::Quasispin => Suite::Quasispin,
            SuiteArg::Commutant => Suite::Commutant,
        }
    }
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Write to FILE instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Dims {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "o-o")]
    pair: PairArg,
}

#[derive(Subcommand)]
enum Command {
    /// Diagram-level pairing table.
    Pairs {
        #[command(flatten)]
        dims: Dims,
        #[command(flatten)]
        output: Output,
    },
    /// Brute-force decomposition of the Fock space.
    Decompose {
        #[command(flatten)]
        dims: Dims,
        #[command(flatten)]
        output: Output,
    },
    /// The highest-weight state of an O(d) diagram, or the generators of a pair.
    Hw {
        #[command(flatten)]
        dims: Dims,
        /// Rows of λ, e.g. "2,1".
        #[arg(long)]
        lambda: Option<String>,
        /// Dump the generators of both sides instead.
        #[arg(long)]
        generators: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Property suites over a bounded (d, k) grid.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 10)]
        max_dk: usize,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// ASCII diagram of λ, or of half-integral rows w.
    Render {
        #[arg(long, conflicts_with = "w", required_unless_present = "w")]
        lambda: Option<String>,
        /// Comma-separated rows such as "11/2,7/2,-3/2".
        #[arg(long)]
        w: Option<String>,
        /// Also show the o(d) diagrams of λ read as an O(d) diagram.
        #[arg(long)]
        d: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
}

enum Failure {
    Usage(String),
    Guard(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::GuardExceeded { .. } | Error::TooManyModes { .. } | Error::TensorGuard { .. } => {
                Failure::Guard(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Rendered text plus whether every check passed.
struct Rendered {
    text: String,
    pass: bool,
}

fn emit(output: &Output, table: String, value: serde_json::Value, pass: bool) -> Rendered {
    let text = match output.format {
        Format::Table => table,
        Format::Json => serde_json::to_string_pretty(&value).expect("json") + "\n",
    };
    Rendered { text, pass }
}

fn check_dims(d: usize, k: usize) -> Result<(), Failure> {
    if d == 0 || k == 0 {
        return Err(Error::EmptyDimension { d, k }.into());
    }
    Ok(())
}

fn parse_halfs(s: &str) -> Result<Vec<HalfInt>, Failure> {
    s.trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| Ok(HalfInt::try_from_rational(&parse_q(t.trim())?)?))
        .collect()
}

fn run_pairs(dims: &Dims, output: &Output) -> Result<Rendered, Failure> {
    check_dims(dims.d, dims.k)?;
    let table = pairing_table(dims.pair.into(), dims.d, dims.k)?;
    let value = serde_json::to_value(&table).expect("json");
    Ok(emit(output, table.render_table(), value, true))
}

fn run_decompose(dims: &Dims, output: &Output) -> Result<Rendered, Failure> {
    check_dims(dims.d, dims.k)?;
    let pair: PairType = dims.pair.into();
    let mut report = decompose(pair, dims.d, dims.k)?;
    if pair == PairType::OO {
        reflection_analysis(&mut report)?;
    }
    let pass = report.all_pass();
    Ok(emit(output, report.render_table(), report.to_json(), pass))
}

fn run_hw(dims: &Dims, lambda: Option<&str>, generators: bool, output: &Output) -> Result<Rendered, Failure> {
    check_dims(dims.d, dims.k)?;
    let pair_type: PairType = dims.pair.into();
    let pair = build_pair(pair_type, dims.d, dims.k)?;
    if generators {
        let mut table = String::new();
        for (side, gens) in [("A", pair.side_a()), ("B", pair.side_b())] {
            table.push_str(&format!("side {side}: {} generators\n", gens.len()));
            for g in gens {
                table.push_str(&format!("  {:<10} {:?}\n", g.label, g.role));
            }
        }
        return Ok(emit(output, table, pair.to_json(), true));
    }
    if pair_type != PairType::OO {
        return Err(Failure::Usage("hw --lambda needs --pair o-o".into()));
    }
    let lambda: GLDiagram = lambda
        .ok_or_else(|| Failure::Usage("hw needs --lambda or --generators".into()))?
        .parse()?;
    let og = OGroupDiagram::new(lambda, dims.d)?;
    let phi = phi_hw(&og, dims.k)?;
    let w = rowe_w_from_lambda(&og, dims.k)?;
    let v = phi.to_sparse();
    let measured: Vec<String> = pair
        .cartan_b()
        .iter()
        .map(|c| eigenvalue(c, &v).map(|e| fmt_q(&e)).unwrap_or_else(|| "?".into()))
        .collect();
    let killed = pair.raising_b().iter().all(|x| x.apply_sparse(&v).is_zero());
    let pass = killed && measured == w.rows().iter().map(|h| h.to_string()).collect::<Vec<_>>();

    let mut table = format!("λ={}  d={}  k={}\n", og.lambda(), dims.d, dims.k);
    for (s, c) in phi.iter() {
        table.push_str(&format!("  {:>4} {s}\n", fmt_q(c)));
    }
    table.push_str(&format!("w(λ) = {}\nside B Cartan eigenvalues = ({})\n", fmt_rows(w.rows()), measured.join(",")));
    table.push_str(&format!("side B raising annihilates: {killed}\n"));
    let value = json!({
        "lambda": og.lambda(),
        "d": dims.d,
        "k": dims.k,
        "state": phi.to_json(),
        "w": w,
        "cartan_b": measured,
        "raising_b_annihilates": killed,
    });
    Ok(emit(output, table, value, pass))
}

fn run_render(lambda: Option<&str>, w: Option<&str>, d: Option<usize>, output: &Output) -> Result<Rendered, Failure> {
    if let Some(w) = w {
        let rows = parse_halfs(w)?;
        let value = json!({ "w": rows.iter().map(|h| h.to_string()).collect::<Vec<_>>() });
        return Ok(emit(output, render_rows(&rows), value, true));
    }
    let lambda: GLDiagram = lambda.expect("clap enforces one of --lambda, --w").parse()?;
    let Some(d) = d else {
        return Ok(emit(output, render_gl(&lambda), json!({ "lambda": lambda }), true));
    };
    let og = OGroupDiagram::new(lambda.clone(), d)?;
    let ws = o_group_to_algebra(&og)?;
    let mut table = render_gl(&lambda);
    for a in &ws {
        table.push_str(&format!("\no({d}) w={a}\n"));
        table.push_str(&side_by_side(&render_gl(&lambda), &render_rows(a.rows())));
    }
    Ok(emit(output, table, json!({ "lambda": lambda, "d": d, "o_algebra": ws }), true))
}

fn run(cli: Cli) -> Result<(Rendered, Option<PathBuf>), Failure> {
    let (rendered, out) = match &cli.command {
        Command::Pairs { dims, output } => (run_pairs(dims, output)?, &output.out),
        Command::Decompose { dims, output } => (run_decompose(dims, output)?, &output.out),
        Command::Hw { dims, lambda, generators, output } => {
            (run_hw(dims, lambda.as_deref(), *generators, output)?, &output.out)
        }
        Command::Verify { suite, max_dk, d, k, output } => {
            if *d == Some(0) || *k == Some(0) {
                return Err(Error::EmptyDimension { d: d.unwrap_or(0), k: k.unwrap_or(0) }.into());
            }
            let bounds = Bounds { max_dk: *max_dk, d: *d, k: *k, ..Bounds::default() };
            let summary = run_verify((*suite).into(), &bounds)?;
            let pass = summary.all_pass();
            (emit(output, summary.render_table(), summary.to_json(), pass), &output.out)
        }
        Command::Render { lambda, w, d, output } => {
            (run_render(lambda.as_deref(), w.as_deref(), *d, output)?, &output.out)
        }
    };
    Ok((rendered, out.clone()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((rendered, out)) => {
            match out {
                Some(path) => {
                    if let Err(e) = fs::write(&path, &rendered.text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{}", rendered.text),
            }
            if rendered.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
