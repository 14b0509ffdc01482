//! `kkt`: exact computations with Jacobi diagrams, clover contractions,
//! linking forms and lens-space realizations.
//!
//! Output is a single document per run, byte-deterministic for fixed inputs;
//! rationals are printed as `p/q`, never as decimals. Exit codes: 0 success,
//! 1 validation error, 2 resource cap, 3 internal consistency failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kkt_core::algebra::compute_basis_with_cap;
use kkt_core::casson::{lambda_closed_form, lambda_via_theta};
use kkt_core::diagram::{
    automorphism_count, enumerate_diagrams_with_cap, DEFAULT_DEGREE_CAP,
};
use kkt_core::error::Error;
use kkt_core::files;
use kkt_core::lens::{linking_matrix_of, realize_linking_matrix, KnotClass};
use kkt_core::linkform::{classify_odd, classify_two, nondegenerate, primary_decompose};
use kkt_core::rat::{format_rational, rat_int, Rational};
use kkt_core::splitting::z_n;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "kkt",
    version,
    about = "Splitting formulas for the Kontsevich-Kuperberg-Thurston invariant: \
             diagram spaces, clover contractions, linking forms, lens realizations"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Override the enumeration degree cap (also: KKT_DEGREE_CAP).
    #[arg(long, global = true)]
    degree_cap: Option<usize>,

    /// Parallelism hint; accepted for compatibility, evaluation is
    /// single-threaded.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate the isomorphism classes of degree-N Jacobi diagrams.
    Diagrams {
        #[arg(long)]
        degree: usize,
        /// Print only the class count.
        #[arg(long)]
        count_only: bool,
    },
    /// Basis of the diagram space A_N modulo AS and IHX.
    Basis {
        #[arg(long)]
        degree: usize,
    },
    /// Splitting value Z_N of a clover file in basis coordinates.
    Split {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        clover: PathBuf,
    },
    /// Casson-Walker value of a complementary clover file.
    Casson {
        #[arg(long)]
        clover: PathBuf,
    },
    /// Linking-form operations.
    Linkform {
        #[command(subcommand)]
        command: LinkformCommand,
    },
    /// Realize a symmetric rational matrix as a linking matrix.
    Realize { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum LinkformCommand {
    /// Classify a linking form into cyclic blocks per prime.
    Classify { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let first_line = e.to_string();
            let first_line = first_line.lines().next().unwrap_or("bad arguments");
            eprintln!("error: {first_line}");
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(output) => {
            println!("{output}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::DegreeCap { .. } => 2,
                Error::Internal(_) => 3,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn degree_cap(cli: &Cli) -> Result<usize, Error> {
    if let Some(cap) = cli.degree_cap {
        return Ok(cap);
    }
    match std::env::var("KKT_DEGREE_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::validation(format!("KKT_DEGREE_CAP='{v}' is not a number"))),
        Err(_) => Ok(DEFAULT_DEGREE_CAP),
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::validation(format!("cannot read {}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<String, Error> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Error::validation("--jobs must be at least 1".to_string()));
        }
    }
    let cap = degree_cap(cli)?;
    match &cli.command {
        Command::Diagrams { degree, count_only } => diagrams(cli, cap, *degree, *count_only),
        Command::Basis { degree } => basis(cli, cap, *degree),
        Command::Split { degree, clover } => split(cli, cap, *degree, clover),
        Command::Casson { clover } => casson(cli, clover),
        Command::Linkform {
            command: LinkformCommand::Classify { file },
        } => linkform_classify(cli, file),
        Command::Realize { file } => realize(cli, file),
    }
}

fn render(cli: &Cli, value: &Value, text: String) -> String {
    match cli.format {
        Format::Json => serde_json::to_string_pretty(value).expect("valid json"),
        Format::Text => text,
    }
}

fn diagrams(cli: &Cli, cap: usize, degree: usize, count_only: bool) -> Result<String, Error> {
    let classes = enumerate_diagrams_with_cap(degree, cap)?;
    let mut rows = Vec::new();
    let mut lines = vec![format!("degree: {degree}"), format!("count: {}", classes.len())];
    for class in &classes {
        let aut = automorphism_count(class);
        rows.push(json!({
            "encoding": class.encoding(),
            "automorphisms": aut,
            "zero": class.is_zero(),
        }));
        if !count_only {
            lines.push(format!(
                "{} aut={} zero={}",
                class.encoding(),
                aut,
                class.is_zero()
            ));
        }
    }
    let mut doc = json!({
        "degree": degree,
        "count": classes.len(),
    });
    if !count_only {
        doc["diagrams"] = Value::Array(rows);
    }
    Ok(render(cli, &doc, lines.join("\n")))
}

fn basis(cli: &Cli, cap: usize, degree: usize) -> Result<String, Error> {
    let b = compute_basis_with_cap(degree, cap)?;
    let encodings: Vec<String> = b.basis().iter().map(|c| c.encoding()).collect();
    let doc = json!({
        "degree": degree,
        "dimension": b.dimension(),
        "basis": encodings,
    });
    let mut lines = vec![
        format!("degree: {degree}"),
        format!("dimension: {}", b.dimension()),
    ];
    lines.extend(encodings.iter().cloned());
    Ok(render(cli, &doc, lines.join("\n")))
}

fn split(cli: &Cli, cap: usize, degree: usize, clover: &Path) -> Result<String, Error> {
    let c = files::parse_clover(&read_file(clover)?)?;
    let b = compute_basis_with_cap(degree, cap)?;
    let coords = z_n(&c, degree, &b)?;
    let note = (c.piece_count() > 2 * degree).then(|| "k > 2n".to_string());
    let encodings: Vec<String> = b.basis().iter().map(|x| x.encoding()).collect();
    let coord_strings: Vec<String> = coords.iter().map(format_rational).collect();
    let mut doc = json!({
        "degree": degree,
        "k": c.piece_count(),
        "dimension": b.dimension(),
        "basis": encodings,
        "coordinates": coord_strings,
    });
    let mut lines = vec![
        format!("degree: {degree}"),
        format!("k: {}", c.piece_count()),
    ];
    if let Some(n) = &note {
        doc["note"] = json!(n);
        lines.push(format!("note: {n}"));
    }
    lines.push(format!("dimension: {}", b.dimension()));
    for (enc, coeff) in encodings.iter().zip(&coord_strings) {
        lines.push(format!("{enc} : {coeff}"));
    }
    Ok(render(cli, &doc, lines.join("\n")))
}

fn casson(cli: &Cli, clover: &Path) -> Result<String, Error> {
    let cc = files::parse_complementary(&read_file(clover)?)?;
    let lambda = lambda_via_theta(&cc)?;
    let closed = lambda_closed_form(&cc);
    if lambda != closed {
        return Err(Error::internal(format!(
            "lambda mismatch: theta route {} vs closed form {}",
            format_rational(&lambda),
            format_rational(&closed)
        )));
    }
    let z1: Rational = &lambda / rat_int(2);
    let doc = json!({
        "genus": cc.genus(),
        "lambda": format_rational(&lambda),
        "z1_theta_coefficient": format_rational(&z1),
    });
    let text = format!(
        "lambda = {}\nz1 theta coefficient = {}",
        format_rational(&lambda),
        format_rational(&z1)
    );
    Ok(render(cli, &doc, text))
}

fn block_text(prime: u64, exponent: u32, unit: i64) -> String {
    format!("{prime}^{exponent}[{unit}]")
}

fn linkform_classify(cli: &Cli, file: &Path) -> Result<String, Error> {
    let f = files::parse_linkform(&read_file(file)?)?;
    if !nondegenerate(&f)? {
        let doc = json!({ "nondegenerate": false });
        return Ok(render(cli, &doc, "nondegenerate: false".to_string()));
    }
    let parts = primary_decompose(&f)?;
    let mut primes = Vec::new();
    let mut lines = vec!["nondegenerate: true".to_string()];
    for (&p, part) in &parts {
        let (stabilizers, blocks) = if p == 2 {
            let c = classify_two(part)?;
            (c.stabilizers_added(), c.blocks)
        } else {
            (0, classify_odd(part, p)?)
        };
        let block_values: Vec<Value> = blocks
            .iter()
            .map(|b| {
                json!({
                    "prime": b.prime,
                    "exponent": b.exponent,
                    "unit": b.unit,
                })
            })
            .collect();
        primes.push(json!({
            "prime": p,
            "stabilizers": stabilizers,
            "blocks": block_values,
        }));
        let rendered: Vec<String> = blocks
            .iter()
            .map(|b| block_text(b.prime, b.exponent, b.unit))
            .collect();
        lines.push(format!(
            "p={p}: stabilizers={stabilizers} blocks: {}",
            rendered.join(", ")
        ));
    }
    let doc = json!({
        "nondegenerate": true,
        "primes": primes,
    });
    Ok(render(cli, &doc, lines.join("\n")))
}

fn knot_class_text(kc: &KnotClass) -> String {
    if kc.terms.is_empty() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (g, coeff) in &kc.terms {
        let c = coeff.to_string();
        if c == "1" {
            parts.push(format!("{g}"));
        } else if c == "-1" {
            parts.push(format!("-{g}"));
        } else {
            parts.push(format!("{c}*{g}"));
        }
    }
    parts.join(" + ")
}

fn realize(cli: &Cli, file: &Path) -> Result<String, Error> {
    let a = files::parse_matrix(&read_file(file)?)?;
    let r = realize_linking_matrix(&a)?;
    let verification = linking_matrix_of(&r)?;
    if verification != a {
        return Err(Error::internal(
            "realized linking matrix does not reproduce the input".to_string(),
        ));
    }
    let lens: Vec<Value> = r
        .lens_factors
        .iter()
        .enumerate()
        .map(|(i, (p, q))| {
            json!({
                "knot": i + 1,
                "p": p.to_string(),
                "q": q.to_string(),
            })
        })
        .collect();
    let blocks: Vec<Value> = r
        .m_blocks
        .iter()
        .map(|(&(i, j), (d, k))| {
            json!({
                "i": i + 1,
                "j": j + 1,
                "d": d.to_string(),
                "k": k.to_string(),
            })
        })
        .collect();
    let knots: Vec<Value> = r
        .knot_classes
        .iter()
        .enumerate()
        .map(|(i, kc)| {
            json!({
                "knot": i + 1,
                "class": knot_class_text(kc),
            })
        })
        .collect();
    let correction: Vec<Vec<String>> = r
        .correction
        .iter()
        .map(|row| row.iter().map(|x| x.to_string()).collect())
        .collect();
    let verified: Vec<Vec<String>> = verification
        .iter()
        .map(|row| row.iter().map(format_rational).collect())
        .collect();
    let doc = json!({
        "size": a.len(),
        "lens_factors": lens,
        "m_blocks": blocks,
        "knot_classes": knots,
        "correction": correction,
        "verification": verified,
    });
    let mut lines = vec![format!("size: {}", a.len())];
    for (i, (p, q)) in r.lens_factors.iter().enumerate() {
        lines.push(format!("lens factor {}: L({p},-({q}))", i + 1));
    }
    for (&(i, j), (d, k)) in &r.m_blocks {
        lines.push(format!("block ({},{}): M({d}) with k={k}", i + 1, j + 1));
    }
    for (i, kc) in r.knot_classes.iter().enumerate() {
        lines.push(format!("knot {}: {}", i + 1, knot_class_text(kc)));
    }
    lines.push("correction:".to_string());
    for row in &correction {
        lines.push(format!("  {}", row.join(" ")));
    }
    lines.push("verification:".to_string());
    for row in &verified {
        lines.push(format!("  {}", row.join(" ")));
    }
    Ok(render(cli, &doc, lines.join("\n")))
}
