use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use annihil_core::annihilator::{
    build_corollary_element, build_theorem_element, verify_annihilation, AnnihilatorElement, ClassGroupData,
    ElementFile, FieldDatum, FieldDatumFile,
};
use annihil_core::cyclotomic::{parse_rational, CyclotomicElement};
use annihil_core::fixtures::{
    form_class_group, load_dir, load_fixtures, quadratic_field_datum, quadratic_sweep, quadratic_table, run_fixture,
};
use annihil_core::groups::{catalog_group, MatrixRep, RealizationFile};
use annihil_core::lvalues::{LValueFile, LValueTable};

#[derive(Parser)]
#[command(name = "annihil", version, about = "Class-group annihilators from L-values at s = 0")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the character table of a catalog group.
    Table {
        group: String,
        #[arg(long)]
        json: bool,
    },
    /// Build a Theorem or Corollary element and print it as JSON.
    Construct(ConstructArgs),
    /// Apply an element to a class group; exit 1 when it does not annihilate.
    Verify {
        #[arg(long)]
        element: PathBuf,
        #[arg(long)]
        classgroup: PathBuf,
        /// Defaults to the prime recorded in the element.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Theorem elements for Q(sqrt(-d)) against the forms class group.
    Sweep {
        #[arg(long, required = true)]
        quadratic: bool,
        #[arg(long, default_value_t = 500)]
        dmax: u64,
        /// Only this prime.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Run the checks recorded in the fixtures.
    Report {
        /// Fixture directory; defaults to ANNIHIL_FIXTURE_DIR, then the bundled set.
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Only these fixtures.
        #[arg(long = "fixture")]
        fixtures: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Write field, L-value and class group files for Q(sqrt(-d)).
    Quadratic {
        d: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    field: PathBuf,
    #[arg(long)]
    values: PathBuf,
    #[arg(long)]
    p: u64,
    /// Character key such as chi3; omit with --corollary.
    #[arg(long, required_unless_present = "corollary", conflicts_with = "corollary")]
    chi: Option<String>,
    #[arg(long)]
    corollary: bool,
    /// A rational number, or a cyclotomic element as JSON.
    #[arg(long, default_value = "1")]
    x: String,
    /// Matrices realizing the character on its faithful quotient.
    #[arg(long)]
    realization: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

macro_rules! read_json {
    ($path:expr, $ty:ty) => {{
        let path: &Path = $path;
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str::<$ty>(&text).with_context(|| format!("parsing {}", path.display()))?
    }};
}

macro_rules! to_json {
    ($t:expr) => {
        serde_json::to_string_pretty($t)? + "\n"
    };
}

fn parse_x(s: &str) -> Result<CyclotomicElement> {
    if s.trim_start().starts_with('{') {
        return Ok(serde_json::from_str(s).context("parsing --x")?);
    }
    let q = parse_rational(s).map_err(|e| anyhow::anyhow!("--x: {e}"))?;
    Ok(CyclotomicElement::from_rational(1, &q))
}

fn table(name: &str, json: bool) -> Result<String> {
    let g = catalog_group(name)?;
    let irr = g.irreducibles();
    if json {
        let rows: Vec<serde_json::Value> = irr
            .iter()
            .enumerate()
            .map(|(i, c)| {
                serde_json::json!({
                    "key": LValueTable::key(i),
                    "values": c.values().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let classes: Vec<serde_json::Value> = g
            .classes()
            .iter()
            .map(|c| serde_json::json!({"representative": c[0], "size": c.len(), "order": g.elem_order(c[0])}))
            .collect();
        return Ok(to_json!(&serde_json::json!({"group": g.name(), "order": g.order(), "classes": classes, "characters": rows})));
    }
    let cells: Vec<Vec<String>> = irr.iter().map(|c| c.values().iter().map(|v| v.to_string()).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1).max(6);
    let mut s = String::new();
    writeln!(s, "{} (order {}, {} classes)", g.name(), g.order(), g.num_classes())?;
    write!(s, "{:<8}", "rep")?;
    for c in g.classes() {
        write!(s, " {:>width$}", c[0])?;
    }
    write!(s, "\n{:<8}", "size")?;
    for c in g.classes() {
        write!(s, " {:>width$}", c.len())?;
    }
    writeln!(s)?;
    for (i, row) in cells.iter().enumerate() {
        write!(s, "{:<8}", LValueTable::key(i))?;
        for v in row {
            write!(s, " {v:>width$}")?;
        }
        writeln!(s)?;
    }
    Ok(s)
}

fn construct(a: &ConstructArgs) -> Result<AnnihilatorElement> {
    let field = FieldDatum::from_file(&read_json!(&a.field, FieldDatumFile))?;
    let values = read_json!(&a.values, LValueFile);
    let table = LValueTable::from_file(&field.group, &values)?;
    if a.corollary {
        return Ok(build_corollary_element(&field, &[], a.p, &table)?);
    }
    let key = a.chi.as_deref().expect("clap requires --chi without --corollary");
    let chi = field.group.irreducibles()[table.parse_key(key)?].clone();
    let x = parse_x(&a.x)?;
    let rep = match &a.realization {
        Some(path) => {
            let f = read_json!(path, RealizationFile);
            let cut = annihil_core::annihilator::reduce_to_cut_field(&chi, &field)?;
            Some(MatrixRep::from_file(&cut.quotient.group, &f)?)
        }
        None => None,
    };
    Ok(build_theorem_element(&chi, &field, a.p, &x, &table, rep.as_ref())?)
}

fn quadratic(d: u64, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let field = quadratic_field_datum(d)?;
    let cl = form_class_group(d)?.class_group_data()?;
    let table = quadratic_table(d)?;
    std::fs::write(dir.join("field.json"), to_json!(&field.to_file()))?;
    std::fs::write(dir.join("values.json"), to_json!(&table.to_file()))?;
    std::fs::write(dir.join("classgroup.json"), to_json!(&cl.to_file()))?;
    Ok(())
}

/// Ok(true) when everything passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Table { group, json } => {
            print!("{}", table(&group, json)?);
            Ok(true)
        }
        Command::Construct(a) => {
            let el = construct(&a)?;
            for w in &el.provenance.warnings {
                eprintln!("warning: {w}");
            }
            let text = to_json!(&el.to_file());
            match &a.out {
                Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        Command::Verify {
            element,
            classgroup,
            p,
            json,
        } => {
            let el = AnnihilatorElement::from_file(&read_json!(&element, ElementFile))?;
            let cl = ClassGroupData::from_file(&read_json!(&classgroup, annihil_core::annihilator::ClassGroupFile))?;
            let report = verify_annihilation(&el, &cl, p.unwrap_or(el.provenance.p))?;
            if json {
                print!("{}", to_json!(&report));
            } else {
                print!("{}", report.to_text());
            }
            Ok(report.passed())
        }
        Command::Sweep { dmax, p, json, .. } => {
            let r = quadratic_sweep(dmax, p)?;
            if json {
                print!("{}", to_json!(&r));
            } else {
                for c in &r.cases {
                    println!(
                        "d={:<5} h={:<3} p={:<3} cl={:?} element=[{}] {}",
                        c.d,
                        c.h,
                        c.p,
                        c.invariants,
                        c.element.join(", "),
                        if c.passed() { "PASS" } else { "FAIL" }
                    );
                }
                println!(
                    "{} discriminants, {} cases, {} failures",
                    r.discriminants,
                    r.cases.len(),
                    r.failures
                );
            }
            Ok(r.failures == 0)
        }
        Command::Report { dir, fixtures, json } => {
            let mut all = match dir {
                Some(d) => load_dir(&d)?,
                None => load_fixtures()?,
            };
            if !fixtures.is_empty() {
                for f in &fixtures {
                    if !all.iter().any(|x| &x.name == f) {
                        bail!("no fixture named {f}");
                    }
                }
                all.retain(|x| fixtures.contains(&x.name));
            }
            let reports: Vec<_> = all.iter().map(run_fixture).collect();
            if json {
                print!("{}", to_json!(&reports));
            } else {
                for r in &reports {
                    for c in &r.checks {
                        println!(
                            "{:<16} {:<28} expected {:<16} observed {:<16} {}",
                            r.fixture,
                            c.check,
                            c.expected,
                            c.observed,
                            if c.ok { "ok" } else { "MISMATCH" }
                        );
                    }
                }
            }
            Ok(reports.iter().all(|r| r.ok))
        }
        Command::Quadratic { d, out_dir } => {
            quadratic(d, &out_dir)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
