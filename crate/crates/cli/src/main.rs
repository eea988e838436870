//! `gac`: classify elements of GA_n(q) and GL_n(q), list conjugacy classes,
//! compute class-algebra structure constants and run the verification suite.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gaclass::algebra::{
    class_labels, multiplication_table, multiplication_table_cached, ClassLabel, Engine,
    MultiplicationTable,
};
use gaclass::classify::{
    affine_length, affine_reflection_length, is_hyperbolic, reflection_length, type_of_ga,
    type_of_gl, GroupId, GroupKind,
};
use gaclass::error::{Budget, Error, DEFAULT_MAX_ELEMENTS, DEFAULT_MAX_SECONDS};
use gaclass::field::{field_make, is_prime, Field};
use gaclass::matrix::MatFq;
use gaclass::poly::irreducibles_up_to;
use gaclass::types::{inflate_type, modify_type, Flavor, GAType, GLType};
use gaclass::verify::{check_affine_reflection_oracle, run_suite, summary_table};
use rayon::prelude::*;
use serde_json::{json, Value};

const INPUT_HELP: &str = "\
Matrix input:
  Entries are field codes: the base-p digits of a code are the coefficients
  of the element as a polynomial in the field generator. Rows are separated
  by ';' and entries by ',' or spaces, e.g. \"1,0,0;1,1,0;0,0,1\". The JSON
  forms [[1,0],[0,1]] and {\"rows\":2,\"cols\":2,\"entries\":[1,0,0,1]} are
  accepted too.

Class labels (structconst):
  Labels are modified types. Shorthand is a comma-separated list of
  part:poly items, e.g. \"1:t-1,2:t-1\" or \"1:t^2+t+1\"; '-' or an empty
  string is the empty type. For GA append ';k' for the shift: \";1\" is
  (∅,1) and \"1:t-1;0\" is ((1)_{t-1},0). JSON labels use the schema of
  --format json output: {\"t-1\":[2,1]} for GL and
  {\"base\":{\"t-1\":[1]},\"k\":0} for GA.

Exit codes:
  0 ok, 1 a verification check failed, 2 parse error, 3 not a group element,
  4 budget exceeded, 5 class undefined at this n.";

#[derive(Parser)]
#[command(name = "gac", version, about, after_help = INPUT_HELP)]
struct Cli {
    #[command(flatten)]
    field: FieldArgs,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    parallelism: Option<u16>,

    /// Maximum number of group elements one enumeration may materialize.
    #[arg(long, env = "GAC_BUDGET_ELEMENTS", default_value_t = DEFAULT_MAX_ELEMENTS, global = true)]
    budget_elements: u64,

    /// Time limit in seconds for each computation.
    #[arg(long, default_value_t = DEFAULT_MAX_SECONDS, global = true)]
    budget_seconds: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FieldArgs {
    /// Field size as a prime power.
    #[arg(long, global = true, conflicts_with_all = ["p", "k"])]
    q: Option<u64>,

    /// Characteristic.
    #[arg(long, global = true)]
    p: Option<u64>,

    /// Extension degree.
    #[arg(long, global = true)]
    k: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Group {
    #[value(name = "GA", alias = "ga")]
    Ga,
    #[value(name = "GL", alias = "gl")]
    Gl,
}

impl From<Group> for GroupKind {
    fn from(g: Group) -> Self {
        match g {
            Group::Ga => GroupKind::GA,
            Group::Gl => GroupKind::GL,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Type, modified type and reflection lengths of a matrix.
    Classify {
        #[arg(long, value_enum)]
        group: Group,
        /// The matrix; its size fixes n.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// One row per conjugacy class with its size and canonical representative.
    Classes {
        #[arg(long, value_enum)]
        group: Group,
        #[arg(long)]
        n: usize,
    },
    /// Coefficient of the class sum C in the product A * B.
    Structconst {
        #[arg(long, value_enum)]
        group: Group,
        #[arg(long)]
        n: usize,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
    },
    /// Full multiplication table of the class algebra.
    Table {
        #[arg(long, value_enum)]
        group: Group,
        #[arg(long)]
        n: usize,
        /// Directory for cached tables.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Run the verification suite for all n up to --n-max.
    Verify {
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        /// Also compare affine-reflection lengths with breadth-first word lengths in GA_3.
        #[arg(long)]
        stretch: bool,
    },
    /// Monic irreducible polynomials other than t, up to a degree.
    Irreducibles {
        #[arg(long)]
        degree: usize,
    },
}

enum Failure {
    Lib(Error),
    ChecksFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        _ if e.is_budget() => 4,
        Error::UndefinedAtN { .. } => 5,
        Error::NotAffine | Error::NotInvertible => 3,
        Error::ClassificationBug(_) => 1,
        _ => 2,
    }
}

fn field_from(args: &FieldArgs) -> Result<Field, Error> {
    match (args.q, args.p) {
        (Some(q), _) => {
            let p = (2..=q).find(|d| q % d == 0).ok_or(Error::NotPrime(q))?;
            let mut k = 0;
            let mut rest = q;
            while rest % p == 0 {
                rest /= p;
                k += 1;
            }
            if rest != 1 || !is_prime(p) {
                return Err(Error::Parse(format!("{q} is not a prime power")));
            }
            field_make(p, k)
        }
        (None, Some(p)) => field_make(p, args.k.unwrap_or(1)),
        (None, None) => Err(Error::Parse("give the field as --q or --p [--k]".into())),
    }
}

fn parse_matrix(field: &Field, s: &str) -> Result<MatFq, Error> {
    let s = s.trim();
    if s.starts_with('{') {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        return MatFq::from_json(field, &v);
    }
    let rows: Vec<Vec<u32>> = if s.starts_with('[') {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?
    } else {
        s.split(';')
            .map(|row| {
                row.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.parse()
                            .map_err(|_| Error::Parse(format!("bad matrix entry '{t}'")))
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?
    };
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Error::Parse(
            "matrix rows must be nonempty and equally long".into(),
        ));
    }
    MatFq::from_rows(field, &rows)
}

fn parse_label(kind: GroupKind, field: &Field, s: &str) -> Result<ClassLabel, Error> {
    let s = s.trim();
    if s.starts_with('{') {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        return ClassLabel::from_json(kind, field, &v);
    }
    Ok(match kind {
        GroupKind::GL => ClassLabel::GL(GLType::parse_shorthand(field, s)?),
        GroupKind::GA => ClassLabel::ga(GAType::parse_shorthand(field, s)?),
    })
}

fn matrix_shorthand(m: &MatFq) -> String {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

fn csv_rows(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 input")
}

fn text_rows(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

fn tabulate(format: Format, header: &[&str], rows: &[Vec<String>], json: Value) -> String {
    match format {
        Format::Json => format!("{json:#}\n"),
        Format::Csv => csv_rows(header, rows),
        Format::Text => text_rows(header, rows),
    }
}

fn classify(field: &Field, group: GroupKind, matrix: &str) -> Result<(Value, String), Error> {
    let m = parse_matrix(field, matrix)?;
    if !m.is_square() {
        return Err(Error::Parse(format!(
            "matrix is {}x{}, not square",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let ell = reflection_length(&m)?;
    let v = match group {
        GroupKind::GL => {
            let t = type_of_gl(&m)?;
            json!({
                "group": "GL", "n": n, "q": field.q(),
                "type": t.to_json(),
                "modified": modify_type(&t).to_json(),
                "length": ell,
                "reflection_length": ell,
                "ll_a": null,
            })
        }
        GroupKind::GA => {
            let plain = type_of_ga(&m, Flavor::Plain)?;
            json!({
                "group": "GA", "n": n, "q": field.q(),
                "type": plain.to_json(),
                "modified": plain.to_modified().to_json(),
                "length": affine_length(&m)?,
                "reflection_length": ell,
                "ll_a": affine_reflection_length(&m)?,
                "hyperbolic": is_hyperbolic(&m)?,
            })
        }
    };
    let text = match group {
        GroupKind::GL => {
            let t = type_of_gl(&m)?;
            format!(
                "group     GL_{n}({q})\ntype      {t}\nmodified  {}\nℓ         {ell}\n",
                modify_type(&t),
                q = field.q()
            )
        }
        GroupKind::GA => {
            let plain = type_of_ga(&m, Flavor::Plain)?;
            format!(
                "group     GA_{n}({q})\ntype      {plain}\nmodified  {}\nℓ         {ell}\nℓᵃ        {}\nℓℓᵃ       {}\n",
                plain.to_modified(),
                v["length"],
                v["ll_a"],
                q = field.q()
            )
        }
    };
    Ok((v, text))
}

fn plain_label(label: &ClassLabel, n: usize) -> Result<String, Error> {
    Ok(match label {
        ClassLabel::GL(t) => inflate_type(t, n)?.to_string(),
        ClassLabel::GA(t) => t.plain_at(n)?.to_string(),
    })
}

fn plain_label_json(label: &ClassLabel, n: usize) -> Result<Value, Error> {
    Ok(match label {
        ClassLabel::GL(t) => inflate_type(t, n)?.to_json(),
        ClassLabel::GA(t) => t.plain_at(n)?.to_json(),
    })
}

fn classes(gid: &GroupId, engine: &Engine, format: Format) -> Result<String, Error> {
    let labels = class_labels(gid);
    let sizes: Vec<usize> = labels
        .par_iter()
        .map(|l| engine.class_elements(gid, l).map(|c| c.len()))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for (i, (label, size)) in labels.iter().zip(&sizes).enumerate() {
        let rep = label.rep_at(gid.n)?;
        rows.push(vec![
            i.to_string(),
            plain_label(label, gid.n)?,
            label.to_string(),
            label.degree().to_string(),
            size.to_string(),
            matrix_shorthand(&rep),
        ]);
        json_rows.push(json!({
            "index": i,
            "type": plain_label_json(label, gid.n)?,
            "modified": label.to_json(),
            "degree": label.degree(),
            "size": size,
            "rep": rep.to_json(),
        }));
    }
    let header = ["index", "type", "modified", "degree", "size", "rep"];
    Ok(tabulate(format, &header, &rows, Value::Array(json_rows)))
}

fn table_text(t: &MultiplicationTable) -> String {
    let mut out = String::new();
    for (i, c) in t.classes.iter().enumerate() {
        out.push_str(&format!("K{i}  {}  size {}\n", c.label, c.size));
    }
    out.push('\n');
    for a in 0..t.len() {
        for b in 0..t.len() {
            let terms: Vec<String> = t
                .terms(a, b)
                .iter()
                .map(|(c, v)| format!("{v} K{c}"))
                .collect();
            out.push_str(&format!("K{a} * K{b} = {}\n", terms.join(" + ")));
        }
    }
    out
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let field = field_from(&cli.field)?;
    let budget = Budget::new(
        cli.budget_elements,
        Some(Duration::from_secs(cli.budget_seconds)),
    );
    let format = cli.format;
    let output = match &cli.command {
        Command::Classify { group, matrix } => {
            let (v, text) = classify(&field, (*group).into(), matrix)?;
            match format {
                Format::Json => format!("{v:#}\n"),
                Format::Csv => {
                    let keys = [
                        "group",
                        "n",
                        "q",
                        "type",
                        "modified",
                        "length",
                        "reflection_length",
                        "ll_a",
                    ];
                    let row: Vec<String> = keys
                        .iter()
                        .map(|k| match &v[k] {
                            Value::String(s) => s.clone(),
                            Value::Null => String::new(),
                            other => other.to_string(),
                        })
                        .collect();
                    csv_rows(&keys, &[row])
                }
                Format::Text => text,
            }
        }
        Command::Classes { group, n } => {
            let gid = GroupId::new((*group).into(), *n, &field)?;
            classes(&gid, &Engine::new(&field, budget), format)?
        }
        Command::Structconst { group, n, a, b, c } => {
            let kind: GroupKind = (*group).into();
            let gid = GroupId::new(kind, *n, &field)?;
            let [a, b, c] = [a, b, c].map(|s| parse_label(kind, &field, s));
            let engine = Engine::new(&field, budget);
            let r = engine.struct_const(&gid, &a?, &b?, &c?)?;
            let row = vec![
                gid.to_string(),
                r.lhs.0.to_string(),
                r.lhs.1.to_string(),
                r.rhs.to_string(),
                r.value.to_string(),
            ];
            match format {
                Format::Json => format!("{:#}\n", r.to_json()),
                Format::Csv => csv_rows(&["group", "a", "b", "c", "value"], &[row]),
                Format::Text => format!(
                    "{}: coefficient of {} in {} * {} is {}\n",
                    row[0], row[3], row[1], row[2], row[4]
                ),
            }
        }
        Command::Table {
            group,
            n,
            cache_dir,
        } => {
            let gid = GroupId::new((*group).into(), *n, &field)?;
            let t = match cache_dir {
                Some(dir) => multiplication_table_cached(&gid, &budget, dir)?,
                None => multiplication_table(&gid, &budget)?,
            };
            match format {
                Format::Json => format!("{:#}\n", t.to_json()),
                Format::Csv => t.to_csv(),
                Format::Text => table_text(&t),
            }
        }
        Command::Verify { n_max, stretch } => {
            let mut reports = run_suite(&field, *n_max, &budget);
            if *stretch {
                reports.push(check_affine_reflection_oracle(&field, 3, &budget));
            }
            let out = match format {
                Format::Json => {
                    let arr: Vec<Value> = reports.iter().map(|r| r.to_json()).collect();
                    eprint!("{}", summary_table(&reports));
                    format!("{:#}\n", Value::Array(arr))
                }
                Format::Csv => {
                    let rows: Vec<Vec<String>> = reports
                        .iter()
                        .map(|r| {
                            vec![
                                r.id.clone(),
                                r.status.to_string(),
                                r.params.to_string(),
                                r.expected.to_string(),
                                r.observed.to_string(),
                                r.reason.clone().unwrap_or_default(),
                            ]
                        })
                        .collect();
                    csv_rows(
                        &[
                            "check", "status", "params", "expected", "observed", "reason",
                        ],
                        &rows,
                    )
                }
                Format::Text => summary_table(&reports),
            };
            print!("{out}");
            if reports.iter().any(|r| r.failed()) {
                return Err(Failure::ChecksFailed);
            }
            return Ok(());
        }
        Command::Irreducibles { degree } => {
            let polys = irreducibles_up_to(&field, *degree);
            let rows: Vec<Vec<String>> = polys
                .iter()
                .map(|f| vec![f.degree().unwrap_or(0).to_string(), f.to_string()])
                .collect();
            let json_rows: Vec<Value> = polys
                .iter()
                .map(|f| json!({ "degree": f.degree(), "poly": f.to_string(), "coeffs": f.coeffs() }))
                .collect();
            tabulate(format, &["degree", "poly"], &rows, Value::Array(json_rows))
        }
    };
    print!("{output}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.parallelism {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads as usize)
            .build_global()
            .expect("thread pool is configured once");
    }
    let result = run(&cli);
    std::io::stdout().flush().ok();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::ChecksFailed) => ExitCode::from(1),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
