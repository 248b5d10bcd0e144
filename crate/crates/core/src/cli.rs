//! Command-line front end.
//!
//! Exit codes: 0 on success or a clean report, 1 when a validation fails
//! (the report goes to standard output), 2 on usage or I/O errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::coord::generate_groupoid;
use crate::coordinatize::{coordinatize, write_projectivity, CoordinatizeError};
use crate::field::{field_iso_check, make_prime_field, read_field, validate_field, write_field, FieldError, FieldTable};
use crate::groupoid::{check_axioms, read_groupoid, validate_structure, write_groupoid, GroupoidError, ProjGroupoid};
use crate::rapport::{RapportEngine, RapportError};
use crate::report::{Check, ValidationReport, WitnessItem};
use crate::search::{enumerate_models, export_results, iso_check, MinusOneFilter, SearchConfig, SearchError};

#[derive(Parser)]
#[command(name = "projline")]
#[command(about = "Projective lines over finite fields as groupoids with projection structure")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the projective line over a field as a groupoid file
    Gen {
        /// prime:<p> or file:<path>
        #[arg(long)]
        field: String,
        /// Output path (standard output if omitted)
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Check a groupoid file against the structure laws and the four axioms
    Check { file: PathBuf },
    /// Check a field file against the field axioms
    FieldCheck { file: PathBuf },
    /// Reconstruct the scalar field of a groupoid and an isomorphism onto its coordinate model
    Coordinatize {
        file: PathBuf,
        /// Field output path
        #[arg(short)]
        o: PathBuf,
        /// Projectivity output path
        #[arg(long)]
        proj: PathBuf,
        /// Also write the coordinate model
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Enumerate small groupoids with projection structure up to isomorphism
    Search(SearchArgs),
    /// Rapport queries on a groupoid file; points and scalars by id
    #[command(subcommand)]
    Rapport(RapportCommand),
    /// Decide whether two files are isomorphic
    #[command(subcommand)]
    Iso(IsoCommand),
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    points: usize,
    /// Comma-separated subset of 1,2,3,4
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
    axioms: Vec<u8>,
    /// Keep only models with -1 != 1
    #[arg(long, conflicts_with = "require_minus_one_trivial")]
    require_minus_one_distinct: bool,
    /// Keep only models with -1 = 1
    #[arg(long)]
    require_minus_one_trivial: bool,
    /// Permit six points
    #[arg(long)]
    allow_large: bool,
    /// Export directory for class representatives and summary.json
    #[arg(short)]
    o: Option<PathBuf>,
}

#[derive(Subcommand)]
enum RapportCommand {
    /// (A,B;C,D)
    Cross {
        file: PathBuf,
        #[arg(num_args = 4, required = true)]
        points: Vec<String>,
    },
    /// (A,B,C;X,Y,Z)
    Tri {
        file: PathBuf,
        #[arg(num_args = 6, required = true)]
        points: Vec<String>,
    },
    /// The six classical values of (A,B;C,D) and their negatives as tri-rapports
    Twelve {
        file: PathBuf,
        #[arg(num_args = 4, required = true)]
        points: Vec<String>,
    },
    /// The harmonic conjugate of C with respect to A, B
    Harmonic {
        file: PathBuf,
        #[arg(long, num_args = 3, required = true)]
        triple: Vec<String>,
    },
    /// The D with (A,B;C,D) = mu
    Solve {
        file: PathBuf,
        #[arg(long)]
        mu: String,
        #[arg(long, num_args = 3, required = true)]
        triple: Vec<String>,
    },
    /// The middle-four involution on scalars
    Phi { file: PathBuf },
    /// The scalar -1
    MinusOne { file: PathBuf },
    /// Descent of the 24 permutations of a 4-tuple
    Descent { file: PathBuf },
}

#[derive(Subcommand)]
enum IsoCommand {
    Field { a: PathBuf, b: PathBuf },
    Groupoid { a: PathBuf, b: PathBuf },
}

/// A failure that ends the command with exit code 2.
struct Fatal(String);

impl<E: std::error::Error> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

type Outcome = Result<i32, Fatal>;

/// Runs the command line `argv` (including the program name).
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Fatal(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Gen { field, o } => gen(&field, o.as_deref(), out),
        Command::Check { file } => check(&file, out),
        Command::FieldCheck { file } => field_check(&file, out),
        Command::Coordinatize { file, o, proj, model } => coordinatize_cmd(&file, &o, &proj, model.as_deref(), out),
        Command::Search(args) => search(args, out, err),
        Command::Rapport(r) => rapport(r, out),
        Command::Iso(i) => iso(i, out),
    }
}

fn parse_field_spec(spec: &str) -> Result<FieldTable, Fatal> {
    if let Some(p) = spec.strip_prefix("prime:") {
        let p: u64 = p.parse().map_err(|_| Fatal(format!("not a number: {p:?}")))?;
        Ok(make_prime_field(p)?)
    } else if let Some(path) = spec.strip_prefix("file:") {
        Ok(read_field(path)?)
    } else {
        Err(Fatal(format!("field must be prime:<p> or file:<path>, got {spec:?}")))
    }
}

fn print_report(out: &mut dyn Write, r: &ValidationReport) -> Result<(), Fatal> {
    write!(out, "{r}")?;
    Ok(())
}

fn gen(spec: &str, o: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let f = parse_field_spec(spec)?;
    let g = generate_groupoid(&f)?;
    match o {
        Some(path) => write_groupoid(&g, path)?,
        None => out.write_all(g.to_json().as_bytes())?,
    }
    Ok(0)
}

fn load_groupoid(path: &Path) -> Result<ProjGroupoid, Fatal> {
    Ok(read_groupoid(path)?)
}

fn check(path: &Path, out: &mut dyn Write) -> Outcome {
    let g = match read_groupoid(path) {
        Ok(g) => g,
        Err(GroupoidError::Malformed(msg)) => {
            writeln!(out, "{}", Check::fail("well_formed", vec![WitnessItem::Note(msg)]))?;
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    writeln!(out, "{}", Check::pass("well_formed"))?;
    let structure = validate_structure(&g);
    print_report(out, &structure)?;
    if !structure.is_clean() {
        return Ok(1);
    }
    let axioms = check_axioms(&g)?;
    print_report(out, &axioms)?;
    Ok(if axioms.is_clean() { 0 } else { 1 })
}

fn field_check(path: &Path, out: &mut dyn Write) -> Outcome {
    let f = match read_field(path) {
        Ok(f) => f,
        Err(FieldError::MalformedTable(msg)) => {
            writeln!(out, "{}", Check::fail("well_formed", vec![WitnessItem::Note(msg)]))?;
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    writeln!(out, "{}", Check::pass("well_formed"))?;
    let r = validate_field(&f);
    print_report(out, &r)?;
    Ok(if r.is_clean() { 0 } else { 1 })
}

fn coordinatize_cmd(path: &Path, o: &Path, proj: &Path, model: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let g = load_groupoid(path)?;
    let c = match coordinatize(&g) {
        Ok(c) => c,
        Err(
            CoordinatizeError::StructurallyInvalid(r)
            | CoordinatizeError::AxiomViolation(r)
            | CoordinatizeError::NotAField(r)
            | CoordinatizeError::VerificationFailure(r),
        ) => {
            print_report(out, &r)?;
            return Ok(1);
        }
        Err(e @ (CoordinatizeError::UnsupportedFourPoint | CoordinatizeError::Rapport(_))) => {
            writeln!(out, "{}", Check::fail("coordinatize", vec![WitnessItem::Note(e.to_string())]))?;
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    write_field(&c.field, o)?;
    write_projectivity(&c.projectivity, &g, &c.model, proj)?;
    if let Some(m) = model {
        write_groupoid(&c.model, m)?;
    }
    writeln!(out, "field order {}", c.field.order())?;
    Ok(0)
}

fn search(args: SearchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    if let Some(a) = args.axioms.iter().find(|a| !(1..=4).contains(*a)) {
        return Err(Fatal(format!("no axiom {a}")));
    }
    let mut config = SearchConfig::new(args.points, &args.axioms);
    config.allow_large = args.allow_large;
    config.minus_one = if args.require_minus_one_distinct {
        MinusOneFilter::Distinct
    } else if args.require_minus_one_trivial {
        MinusOneFilter::Trivial
    } else {
        MinusOneFilter::Any
    };
    if config.allow_large && config.points > 5 {
        writeln!(err, "warning: searching {} points; this may take a long time", config.points)?;
    }
    let result = enumerate_models(&config).map_err(|e| match e {
        SearchError::Io(e) => Fatal(e.to_string()),
        other => Fatal(other.to_string()),
    })?;
    writeln!(out, "points {}", result.point_count)?;
    writeln!(out, "labeled {}", result.labeled_count)?;
    writeln!(out, "classes {}", result.classes.len())?;
    for (i, c) in result.classes.iter().enumerate() {
        writeln!(
            out,
            "class {i} group={} members={} minus_one={}",
            c.group,
            c.member_count,
            c.minus_one.as_deref().unwrap_or("undefined")
        )?;
    }
    if let Some(dir) = args.o {
        export_results(&result, &config, dir)?;
    }
    Ok(0)
}

fn point(g: &ProjGroupoid, id: &str) -> Result<usize, Fatal> {
    g.point_index(id).ok_or_else(|| Fatal(format!("unknown point {id:?}")))
}

fn points(g: &ProjGroupoid, ids: &[String]) -> Result<Vec<usize>, Fatal> {
    ids.iter().map(|id| point(g, id)).collect()
}

/// Rapport errors that describe the input rather than the invocation.
fn rapport_failure(out: &mut dyn Write, e: RapportError) -> Outcome {
    match e {
        RapportError::AxiomViolation { what, mut witness } => {
            witness.insert(0, WitnessItem::Note(what));
            writeln!(out, "{}", Check::fail("rapport", witness))?;
            Ok(1)
        }
        RapportError::NoSolution(w) => {
            writeln!(out, "{}", Check::fail("rapport", w))?;
            Ok(1)
        }
        other => Err(Fatal(other.to_string())),
    }
}

fn rapport(cmd: RapportCommand, out: &mut dyn Write) -> Outcome {
    let file = match &cmd {
        RapportCommand::Cross { file, .. }
        | RapportCommand::Tri { file, .. }
        | RapportCommand::Twelve { file, .. }
        | RapportCommand::Harmonic { file, .. }
        | RapportCommand::Solve { file, .. }
        | RapportCommand::Phi { file }
        | RapportCommand::MinusOne { file }
        | RapportCommand::Descent { file } => file.clone(),
    };
    let g = load_groupoid(&file)?;
    let structure = validate_structure(&g);
    if !structure.is_clean() {
        print_report(out, &structure)?;
        return Ok(1);
    }
    let e = RapportEngine::new(&g);
    let result = rapport_query(&g, &e, cmd, out);
    match result {
        Ok(code) => Ok(code),
        Err(QueryError::Rapport(r)) => rapport_failure(out, r),
        Err(QueryError::Fatal(f)) => Err(f),
    }
}

enum QueryError {
    Rapport(RapportError),
    Fatal(Fatal),
}

impl From<RapportError> for QueryError {
    fn from(e: RapportError) -> Self {
        QueryError::Rapport(e)
    }
}

impl From<Fatal> for QueryError {
    fn from(e: Fatal) -> Self {
        QueryError::Fatal(e)
    }
}

impl From<std::io::Error> for QueryError {
    fn from(e: std::io::Error) -> Self {
        QueryError::Fatal(e.into())
    }
}

fn rapport_query(
    g: &ProjGroupoid,
    e: &RapportEngine,
    cmd: RapportCommand,
    out: &mut dyn Write,
) -> Result<i32, QueryError> {
    match cmd {
        RapportCommand::Cross { points: ids, .. } => {
            let p = points(g, &ids)?;
            writeln!(out, "{}", g.scalar_id(e.cross_ratio(p[0], p[1], p[2], p[3])?))?;
        }
        RapportCommand::Tri { points: ids, .. } => {
            let p = points(g, &ids)?;
            writeln!(out, "{}", g.scalar_id(e.tri_rapport(p[0], p[1], p[2], p[3], p[4], p[5])?))?;
        }
        RapportCommand::Twelve { points: ids, .. } => {
            let p = points(g, &ids)?;
            for t in e.twelve_scalars(p[0], p[1], p[2], p[3])? {
                let [a, b, c, x, y, z] = t.tri.map(|i| g.point_id(i));
                writeln!(out, "{} ({a},{b},{c};{x},{y},{z}) {}", t.name, g.scalar_id(t.value))?;
            }
        }
        RapportCommand::Harmonic { triple, .. } => {
            let p = points(g, &triple)?;
            writeln!(out, "{}", g.point_id(e.harmonic_conjugate(p[0], p[1], p[2])?))?;
        }
        RapportCommand::Solve { mu, triple, .. } => {
            let p = points(g, &triple)?;
            let s = g
                .scalar_index(&mu)
                .ok_or_else(|| Fatal(format!("unknown scalar {mu:?}")))?;
            writeln!(out, "{}", g.point_id(e.solve_fourth_point(s, p[0], p[1], p[2])?))?;
        }
        RapportCommand::Phi { .. } => {
            let phi = e.phi()?;
            for s in 0..g.n_scalars() {
                if let Some(t) = phi.get(s) {
                    writeln!(out, "{} {}", g.scalar_id(s), g.scalar_id(t))?;
                }
            }
        }
        RapportCommand::MinusOne { .. } => {
            writeln!(out, "{}", g.scalar_id(e.minus_one()?))?;
        }
        RapportCommand::Descent { .. } => {
            let r = e.permutation_descent_report()?;
            print_report(out, &r)?;
            return Ok(if r.is_clean() { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn iso(cmd: IsoCommand, out: &mut dyn Write) -> Outcome {
    match cmd {
        IsoCommand::Field { a, b } => {
            let (fa, fb) = (read_field(&a)?, read_field(&b)?);
            match field_iso_check(&fa, &fb) {
                Ok(Some(iso)) => {
                    for x in 0..fa.order() {
                        writeln!(out, "{} {}", fa.id(x), fb.id(iso.apply(x)))?;
                    }
                    Ok(0)
                }
                Ok(None) => {
                    writeln!(out, "no isomorphism")?;
                    Ok(1)
                }
                Err(FieldError::InvalidField(r)) => {
                    print_report(out, &r)?;
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        IsoCommand::Groupoid { a, b } => {
            let (ga, gb) = (load_groupoid(&a)?, load_groupoid(&b)?);
            for g in [&ga, &gb] {
                let r = validate_structure(g);
                if !r.is_clean() {
                    print_report(out, &r)?;
                    return Ok(1);
                }
            }
            match iso_check(&ga, &gb) {
                Some(pr) => {
                    for (x, &y) in pr.point_map.iter().enumerate() {
                        writeln!(out, "point {} {}", ga.point_id(x), gb.point_id(y))?;
                    }
                    for (s, &t) in pr.scalar_map.iter().enumerate() {
                        writeln!(out, "scalar {} {}", ga.scalar_id(s), gb.scalar_id(t))?;
                    }
                    Ok(0)
                }
                None => {
                    writeln!(out, "no isomorphism")?;
                    Ok(1)
                }
            }
        }
    }
}
