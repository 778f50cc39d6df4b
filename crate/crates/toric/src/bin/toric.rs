//! Command-line front end: polytope file I/O, class-expression evaluation,
//! genus tables, and detection-rank reports.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use toric::charclass::{self, ClassError};
use toric::detection::{self, DetectionClass};
use toric::exactalg::{parse_rat, rat_to_string};
use toric::expr::parse_class_expr;
use toric::families::{self, FamilyError, ParamValue};
use toric::genera;
use toric::localization::{self, LocError};
use toric::polytope::{point_string, DelzantPolytope};
use toric::render::{poly_to_json, render_polynomial};

#[derive(Parser)]
#[command(
    name = "toric",
    version,
    about = "Exact fiber integrals of characteristic classes on symplectic toric varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Delzant conditions of a polytope file
    Validate {
        file: PathBuf,
        /// Divide non-primitive normals by their gcd (rescaling offsets)
        /// and emit the normalized polytope
        #[arg(long)]
        normalize: bool,
        /// Where to write the normalized polytope (stdout when omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print vertices, Euler classes, volume, and the genus table
    Info { file: PathBuf },
    /// Build a polytope from a named family (ruled, blowup, projbundle, simplex)
    Build {
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        nu: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        l: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        size: Option<String>,
        /// Output file (stdout when omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fiber-integrate a class expression (no I[...] atoms)
    Integrate {
        file: PathBuf,
        #[arg(long)]
        expr: String,
        /// Emit the result as structured JSON
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a genus; optionally check strict multiplicativity
    Genus {
        file: PathBuf,
        #[arg(long, value_parser = genera::SERIES_NAMES)]
        series: String,
        /// Also integrate the sequence classes above the fiber dimension
        #[arg(long)]
        check_strict: bool,
        /// Largest order checked (defaults to dim + 3)
        #[arg(long)]
        max_order: Option<usize>,
    },
    /// Assemble the detection matrix of several actions and report its rank
    Detect {
        /// File with one detection class per line (# starts a comment)
        #[arg(long)]
        classes: PathBuf,
        /// Required homogeneous degree of the classes in the base cohomology
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        /// Polytope files, one per torus action
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

/// Error with the exit code demanded by the command contract:
/// 2 validation failure, 3 parse failure, 4 internal consistency failure.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
    fn parse(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            message: message.into(),
        }
    }
    fn internal(message: impl Into<String>) -> Self {
        CliError {
            code: 4,
            message: message.into(),
        }
    }
    fn io(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<LocError> for CliError {
    fn from(e: LocError) -> Self {
        match e {
            LocError::NotPolynomial => CliError::internal(e.to_string()),
            other => CliError::validation(other.to_string()),
        }
    }
}

impl From<ClassError> for CliError {
    fn from(e: ClassError) -> Self {
        match e {
            ClassError::MalformedExpression(_) => CliError::parse(e.to_string()),
            ClassError::IndexOutOfRange(_) => CliError::validation(e.to_string()),
            ClassError::Localization(inner) => inner.into(),
        }
    }
}

impl From<genera::GenusError> for CliError {
    fn from(e: genera::GenusError) -> Self {
        match e {
            genera::GenusError::Localization(inner) => inner.into(),
            other => CliError::validation(other.to_string()),
        }
    }
}

impl From<detection::DetError> for CliError {
    fn from(e: detection::DetError) -> Self {
        match e {
            detection::DetError::NotDetectionClass(_) => CliError::parse(e.to_string()),
            detection::DetError::Class(inner) => inner.into(),
            detection::DetError::Localization(inner) => inner.into(),
            other => CliError::validation(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn read_polytope(path: &Path) -> Result<DelzantPolytope, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    DelzantPolytope::from_json(&text)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

fn validated(path: &Path) -> Result<DelzantPolytope, CliError> {
    let polytope = read_polytope(path)?;
    polytope
        .validate_delzant()
        .map_err(|issue| CliError::validation(format!("{}: {issue}", path.display())))?;
    Ok(polytope)
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            std::fs::write(p, content).map_err(|e| CliError::io(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Validate {
            file,
            normalize,
            output,
        } => {
            let mut polytope = read_polytope(&file)?;
            if normalize {
                polytope = polytope.normalized();
            }
            polytope
                .validate_delzant()
                .map_err(|issue| CliError::validation(issue.to_string()))?;
            let vertices = polytope.enumerate_vertices().expect("validated");
            eprintln!(
                "ok: {} satisfies the Delzant conditions ({} facets, {} vertices)",
                polytope.name(),
                polytope.num_facets(),
                vertices.len()
            );
            if normalize {
                write_or_print(&output, &polytope.to_json())?;
            }
            Ok(())
        }
        Command::Info { file } => info(&validated(&file)?),
        Command::Build {
            family,
            k,
            lambda,
            nu,
            mu,
            l,
            n,
            size,
            output,
        } => {
            let family = families::lookup(&family).ok_or_else(|| {
                let names: Vec<&str> = families::families().iter().map(|f| f.name()).collect();
                CliError::validation(format!(
                    "unknown family `{family}`; available: {}",
                    names.join(", ")
                ))
            })?;
            let mut values = families::ParamMap::new();
            for (name, value) in [("k", k), ("l", l), ("n", n)] {
                if let Some(v) = value {
                    values.insert(name.to_string(), ParamValue::Int(v));
                }
            }
            for (name, value) in [("lambda", lambda), ("nu", nu), ("mu", mu), ("size", size)] {
                if let Some(v) = value {
                    let r =
                        parse_rat(&v).map_err(|e| CliError::parse(format!("--{name}: {e}")))?;
                    values.insert(name.to_string(), ParamValue::Rational(r));
                }
            }
            let polytope = family.build(&values).map_err(|e| match e {
                FamilyError::ParameterOutOfRange(_) => CliError::validation(e.to_string()),
                other => CliError::validation(other.to_string()),
            })?;
            write_or_print(&output, &polytope.to_json())
        }
        Command::Integrate { file, expr, json } => {
            let polytope = validated(&file)?;
            let parsed = parse_class_expr(&expr).map_err(|e| CliError::parse(e.to_string()))?;
            let class = charclass::evaluate_class_expr(&polytope, &parsed)?;
            let integral = localization::fiber_integrate(&polytope, &class)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&poly_to_json(&integral)).expect("serializable")
                );
            } else {
                println!("{}", render_polynomial(&integral));
            }
            Ok(())
        }
        Command::Genus {
            file,
            series,
            check_strict,
            max_order,
        } => {
            let polytope = validated(&file)?;
            let n = polytope.dim();
            let order = max_order.unwrap_or(n + 3);
            if order <= n {
                return Err(CliError::validation(format!(
                    "--max-order must exceed the fiber dimension {n}"
                )));
            }
            let sequence =
                genera::named_series(&series, order).expect("series name checked by clap");
            let value = genera::genus_value(&polytope, &sequence)?;
            println!("{} genus: {}", sequence.name(), render_polynomial(&value));
            if check_strict {
                let entries = genera::strict_mult_check(&polytope, &sequence, order)?;
                let mut all_zero = true;
                for (r, poly) in &entries {
                    println!("r={r}: {}", render_polynomial(poly));
                    all_zero &= poly.is_zero();
                }
                if all_zero {
                    println!(
                        "strict multiplicativity: all integrals vanish for r in ({n}, {order}]"
                    );
                } else {
                    println!("strict multiplicativity FAILS in ({n}, {order}]");
                }
            }
            Ok(())
        }
        Command::Detect {
            classes,
            degree,
            files,
        } => {
            let text = std::fs::read_to_string(&classes)
                .map_err(|e| CliError::io(format!("{}: {e}", classes.display())))?;
            let mut parsed = Vec::new();
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let class = DetectionClass::parse(line).map_err(|e| {
                    CliError::parse(format!("{}:{}: {e}", classes.display(), lineno + 1))
                })?;
                parsed.push(class);
            }
            if parsed.is_empty() {
                return Err(CliError::validation("no detection classes given"));
            }
            let mut actions = Vec::new();
            for path in &files {
                actions.push(validated(path)?);
            }
            let n = actions[0].dim();
            for (i, class) in parsed.iter().enumerate() {
                for atom in class.constant_atoms(n) {
                    eprintln!(
                        "note: class {} integrates I[{atom}] to a constant (inner degree <= 2*dim)",
                        i + 1
                    );
                }
                match class.degree(n) {
                    Some(d) if d == degree => {}
                    Some(d) => {
                        return Err(CliError::validation(format!(
                            "class {} has degree {d}, expected {degree}",
                            i + 1
                        )))
                    }
                    None => {
                        return Err(CliError::validation(format!(
                            "class {} is not homogeneous",
                            i + 1
                        )))
                    }
                }
            }
            if actions.len() > 1 {
                eprintln!(
                    "warning: rank bounds assume all listed actions live on one symplectic manifold;\n\
                     this is family-specific knowledge the tool does not verify.\n\
                     ruled(k, lambda) ~ ruled(K, Lambda) iff k = K (mod 2) and lambda = Lambda;\n\
                     blowup(nu, k) ~ blowup(nu', k') iff nu = nu';\n\
                     projbundle(mu, k, l) ~ projbundle(mu', k', l') iff k+l = k'+l' (mod 3) and 3mu-(k+l) = 3mu'-(k'+l')."
                );
            }
            detection_report(&actions, &parsed)
        }
    }
}

fn detection_report(
    actions: &[DelzantPolytope],
    classes: &[DetectionClass],
) -> Result<(), CliError> {
    let set = detection::detection_matrix(actions, classes)?;
    let report = detection::betti_lower_bound(&set);
    println!(
        "actions: {}  classes: {}  degree: {}",
        set.action_names.len(),
        set.class_sources.len(),
        set.degree
    );
    println!("group: {}", report.group.cohomology_name());
    println!("rank: {}", report.rank);
    if report.degree >= 0 {
        println!(
            "dim H^{}({}) >= {}",
            report.degree,
            report.group.cohomology_name(),
            report.rank
        );
    }
    let basis: Vec<String> = report.basis.iter().map(|i| (i + 1).to_string()).collect();
    println!("basis: classes {{{}}}", basis.join(", "));
    for (row, combo) in &report.dependencies {
        if combo.is_empty() {
            println!("class {} = 0", row + 1);
            continue;
        }
        let parts: Vec<String> = combo
            .iter()
            .map(|(i, c)| format!("{} * class {}", rat_to_string(c), i + 1))
            .collect();
        println!("class {} = {}", row + 1, parts.join(" + "));
    }
    Ok(())
}

fn info(polytope: &DelzantPolytope) -> Result<(), CliError> {
    let n = polytope.dim();
    println!("name: {}", polytope.name());
    println!("dim: {n}");
    println!("facets: {}", polytope.num_facets());
    for (i, facet) in polytope.facets().iter().enumerate() {
        let u: Vec<String> = facet.normal.iter().map(|x| x.to_string()).collect();
        println!(
            "  F{}: u = ({}), lambda = {}",
            i + 1,
            u.join(", "),
            rat_to_string(&facet.offset)
        );
    }
    let fps = localization::fixed_point_data(polytope)?;
    println!("vertices: {}", fps.len());
    for fp in &fps {
        let active: Vec<String> = fp
            .vertex
            .active
            .iter()
            .map(|i| format!("F{}", i + 1))
            .collect();
        println!(
            "  {}  active {{{}}}  euler {}",
            point_string(&fp.vertex.point),
            active.join(", "),
            render_polynomial(&fp.euler)
        );
    }
    let volume = polytope
        .euclidean_volume()
        .map_err(|issue| CliError::validation(issue.to_string()))?;
    println!("euclidean volume: {}", rat_to_string(&volume));
    let sym = charclass::symplectic_volume(polytope)?;
    println!("symplectic volume: {}", rat_to_string(&sym));

    let order = n + 3;
    let chi = genera::chi_y_series(order);
    let chi_value = genera::genus_value(polytope, &chi)?;
    println!("chi-y genus: {}", render_polynomial(&chi_value));
    for name in ["todd", "signature", "euler"] {
        let sequence = genera::named_series(name, order).expect("known series");
        let value = genera::genus_value(polytope, &sequence)?;
        let label = match name {
            "euler" => "euler characteristic",
            "todd" => "todd genus",
            other => other,
        };
        println!("{label}: {}", render_polynomial(&value));
    }
    Ok(())
}
