//! `ultralat`: validate, convert and analyse lattices, lattice-valued
//! ultrametric spaces and structures with lattice-indexed equivalence
//! relations.
//!
//! Exit codes: 0 success, 1 invalid input or witness found (details on
//! stdout), 2 usage, read or parse error (details on stderr).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use ultralat::correspondence::{finite_view, from_finite_view, to_eq, to_metric};
use ultralat::definability::{invariant_eq_lattice, realizes};
use ultralat::filter::phi;
use ultralat::format::{
    blocks_text, first_keyword, parse_eqs, parse_lat, parse_ums, print_eqs, print_lat, print_ums, read_file,
    render_dot, resolve_finite, LatticeRef, ParseContext, Parsed, ParsedSpace,
};
use ultralat::homogeneity::{
    amalgamate, automorphisms, check_amalgamation_property_with, is_homogeneous, AmalgamInstance, Enumeration,
    Relational, DEFAULT_AMALGAM_CAP, DEFAULT_POINT_CAP,
};
use ultralat::lattice::{catalog, lattice_isomorphic, CatalogCaps, CatalogKind, FiniteLattice};
use ultralat::structures::{EqStructure, UltrametricSpace, ValidationReport, Violation};
use ultralat::{Error, Result};

#[derive(Parser)]
#[command(name = "ultralat", version, about = "Lattices, filter lattices, lattice-valued ultrametrics and equivalence structures")]
struct Cli {
    /// Override the size caps: the point count for automorphism,
    /// homogeneity and invariant-lattice searches, and the extension size
    /// for amalgamation searches.
    #[arg(long, global = true, value_name = "N")]
    cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

/// Wherever a LATTICE is expected, give a `.lat` path, `catalog:<kind>`
/// (chain<n>, boolean<n>, m3, n5, product(<kind>,<kind>)) or
/// `phi(<lattice>)`.
#[derive(Subcommand)]
enum Command {
    /// Check a .lat, .ums or .eqs file against its axioms.
    Validate { file: PathBuf },
    /// Print the filter lattice of LATTICE as .lat, labels `^<element>`.
    Phi {
        lattice: String,
        /// Emit the Hasse diagram in DOT instead.
        #[arg(long)]
        dot: bool,
    },
    /// Print the ultrametric space over phi(<lattice>) of a structure.
    ToMetric { file: PathBuf },
    /// Print the structure of a space over phi(<lattice>).
    ToEq { file: PathBuf },
    /// Check that every isomorphism between induced substructures extends
    /// to an automorphism.
    CheckHomogeneous { file: PathBuf },
    /// List the automorphisms of a structure or space.
    Aut { file: PathBuf },
    /// Amalgamate B and C over A; the base is identified by shared point
    /// names.
    Amalgamate {
        #[arg(value_name = "A.ums")]
        base: PathBuf,
        #[arg(value_name = "B.ums")]
        left: PathBuf,
        #[arg(value_name = "C.ums")]
        right: PathBuf,
    },
    /// Search for amalgamation instances over LATTICE whose amalgam breaks
    /// the triangle inequality.
    SearchFailure {
        lattice: String,
        /// Largest extension size.
        #[arg(long, value_name = "N")]
        max_size: usize,
        /// Visit every pair of extensions instead of the reduced shapes.
        #[arg(long)]
        full: bool,
    },
    /// Print the lattice of equivalence relations invariant under all
    /// automorphisms, with one `rel` line per element.
    InvLattice {
        file: PathBuf,
        /// Exit 0 iff the invariant lattice is isomorphic to this lattice.
        #[arg(long, value_name = "LATTICE")]
        expect: Option<String>,
    },
    /// List the catalog kinds, or print one as .lat.
    Catalog { kind: Option<String> },
    /// Print the Hasse diagram of LATTICE in DOT.
    Dot { lattice: String },
}

struct Caps {
    points: usize,
    amalgam: usize,
    catalog: CatalogCaps,
}

/// Text for stdout and the exit code.
struct Outcome {
    out: String,
    failed: bool,
}

impl Outcome {
    fn ok(out: String) -> Self {
        Outcome { out, failed: false }
    }

    fn fail(out: String) -> Self {
        Outcome { out, failed: true }
    }
}

enum Loaded {
    Space(Parsed<ParsedSpace>),
    Structure(Parsed<EqStructure>),
}

fn load(path: &Path, caps: &Caps) -> Result<Loaded> {
    let text = read_file(path)?;
    let ctx = ParseContext::beside(path, caps.catalog);
    match first_keyword(&text) {
        Some("lattice") => Err(Error::Invalid(format!(
            "{} is a lattice, expected a space or structure",
            path.display()
        ))),
        Some("space") => parse_ums(&text, &ctx).map(Loaded::Space),
        Some("structure") => parse_eqs(&text, &ctx).map(Loaded::Structure),
        _ => Err(Error::Parse {
            line: 1,
            msg: "expected `lattice`, `space` or `structure`".into(),
        }),
    }
}

fn resolve(lattice: &str, caps: &Caps) -> Result<(LatticeRef, FiniteLattice)> {
    let r: LatticeRef = lattice.parse()?;
    let ctx = ParseContext {
        base_dir: PathBuf::from("."),
        caps: caps.catalog,
    };
    let l = resolve_finite(&r, &ctx)?;
    Ok((r, l))
}

/// The violations of an input, as a failed outcome, if there are any.
fn invalid(report: ValidationReport) -> Option<Outcome> {
    (!report.is_valid()).then(|| Outcome::fail(report.to_string()))
}

fn validate(file: &Path, caps: &Caps) -> Result<Outcome> {
    let text = read_file(file)?;
    if first_keyword(&text) == Some("lattice") {
        let violation = match parse_lat(&text) {
            Ok(l) => {
                return Ok(Outcome::ok(format!("valid lattice {} ({} elements)\n", l.name(), l.len())));
            }
            Err(Error::Cycle(a, b)) => format!("cycle {a} {b}"),
            Err(Error::NoBottom(a, b)) => format!("no-bottom {a} {b}"),
            Err(Error::NoTop(a, b)) => format!("no-top {a} {b}"),
            Err(Error::NotALattice(a, b, op)) => format!("no-{op} {a} {b}"),
            Err(e) => return Err(e),
        };
        return Ok(Outcome::fail(format!("VIOLATION {violation}\n")));
    }
    let (kind, name, len, report) = match load(file, caps)? {
        Loaded::Space(p) => match p.value {
            ParsedSpace::Finite(m) => ("space", m.name().to_string(), m.len(), m.validate()),
            ParsedSpace::Phi(m) => ("space", m.name().to_string(), m.len(), m.validate()),
        },
        Loaded::Structure(p) => ("structure", p.value.name().to_string(), p.value.len(), p.value.validate()),
    };
    Ok(invalid(report).unwrap_or_else(|| Outcome::ok(format!("valid {kind} {name} ({len} points)\n"))))
}

fn expect_structure(file: &Path, caps: &Caps) -> Result<Parsed<EqStructure>> {
    match load(file, caps)? {
        Loaded::Structure(p) => Ok(p),
        Loaded::Space(_) => Err(Error::Invalid(format!("{} is not a structure file", file.display()))),
    }
}

fn expect_space(file: &Path, caps: &Caps) -> Result<Parsed<ParsedSpace>> {
    match load(file, caps)? {
        Loaded::Space(p) => Ok(p),
        Loaded::Structure(_) => Err(Error::Invalid(format!("{} is not a space file", file.display()))),
    }
}

fn to_metric_cmd(file: &Path, caps: &Caps) -> Result<Outcome> {
    let parsed = expect_structure(file, caps)?;
    if let Some(bad) = invalid(parsed.value.validate()) {
        return Ok(bad);
    }
    let m = to_metric(&parsed.value)?;
    Ok(Outcome::ok(print_ums(&m, &LatticeRef::Phi(Box::new(parsed.lattice)))))
}

fn to_eq_cmd(file: &Path, caps: &Caps) -> Result<Outcome> {
    let parsed = expect_space(file, caps)?;
    let (ParsedSpace::Phi(m), LatticeRef::Phi(inner)) = (&parsed.value, &parsed.lattice) else {
        return Err(Error::Invalid("to-eq needs a space over phi(<lattice>)".into()));
    };
    if let Some(bad) = invalid(m.validate()) {
        return Ok(bad);
    }
    Ok(Outcome::ok(print_eqs(&to_eq(m)?, inner)))
}

/// Runs `f` on whichever object a structure or space file holds, after
/// checking its axioms.
fn with_relational(file: &Path, caps: &Caps, f: &dyn Fn(&dyn RelationalObject) -> Result<Outcome>) -> Result<Outcome> {
    match load(file, caps)? {
        Loaded::Structure(p) => invalid(p.value.validate()).map_or_else(|| f(&p.value), Ok),
        Loaded::Space(p) => match &p.value {
            ParsedSpace::Finite(m) => invalid(m.validate()).map_or_else(|| f(m), Ok),
            ParsedSpace::Phi(m) => invalid(m.validate()).map_or_else(|| f(m), Ok),
        },
    }
}

/// The searches the CLI runs on a structure or a space.
trait RelationalObject {
    fn name(&self) -> &str;
    fn points(&self) -> &[String];
    fn homogeneity(&self, cap: usize) -> Result<ultralat::homogeneity::HomogeneityVerdict>;
    fn automorphisms(&self, cap: usize) -> Result<Vec<ultralat::structures::PartialMap>>;
    fn invariant(&self, cap: usize) -> Result<ultralat::definability::InvariantLattice>;
    /// For structures, whether the label map realizes the invariant
    /// lattice.
    fn realizes(&self, _cap: usize) -> Result<Option<bool>> {
        Ok(None)
    }
}

macro_rules! relational_object {
    ($t:ty $(, { $($extra:tt)* })?) => {
        impl RelationalObject for $t {
            fn name(&self) -> &str {
                Relational::name(self)
            }

            fn points(&self) -> &[String] {
                self.point_labels()
            }

            fn homogeneity(&self, cap: usize) -> Result<ultralat::homogeneity::HomogeneityVerdict> {
                is_homogeneous(self, cap)
            }

            fn automorphisms(&self, cap: usize) -> Result<Vec<ultralat::structures::PartialMap>> {
                automorphisms(self, cap)
            }

            fn invariant(&self, cap: usize) -> Result<ultralat::definability::InvariantLattice> {
                invariant_eq_lattice(self, cap)
            }

            $($($extra)*)?
        }
    };
}

relational_object!(EqStructure, {
    fn realizes(&self, cap: usize) -> Result<Option<bool>> {
        Ok(Some(realizes(self, cap)?.realizes()))
    }
});
relational_object!(UltrametricSpace<FiniteLattice>);
relational_object!(ultralat::correspondence::PhiSpace);

fn map_text(pairs: &[(String, String)]) -> String {
    pairs.iter().map(|(x, y)| format!("{x}->{y}")).collect::<Vec<_>>().join(" ")
}

fn check_homogeneous_cmd(file: &Path, caps: &Caps) -> Result<Outcome> {
    with_relational(file, caps, &|x| {
        let v = x.homogeneity(caps.points)?;
        match &v.witness {
            None => Ok(Outcome::ok(format!(
                "homogeneous {} ({} automorphisms, {} partial isomorphisms checked)\n",
                x.name(),
                v.automorphism_count,
                v.partial_isos_checked
            ))),
            Some(w) => Ok(Outcome::fail(format!(
                "VIOLATION non-extendable {}\n",
                map_text(&w.to_labels(x.points(), x.points()))
            ))),
        }
    })
}

fn aut_cmd(file: &Path, caps: &Caps) -> Result<Outcome> {
    with_relational(file, caps, &|x| {
        let auts = x.automorphisms(caps.points)?;
        let mut out = format!("automorphisms {} {}\n", x.name(), auts.len());
        for f in &auts {
            writeln!(out, "{}", map_text(&f.to_labels(x.points(), x.points()))).unwrap();
        }
        Ok(Outcome::ok(out))
    })
}

fn inv_lattice_cmd(file: &Path, expect: Option<&str>, caps: &Caps) -> Result<Outcome> {
    let expected = expect.map(|e| resolve(e, caps)).transpose()?;
    with_relational(file, caps, &|x| {
        let inv = x.invariant(caps.points)?;
        let mut out = String::from("# equivalence relations invariant under every automorphism\n");
        out.push_str(&print_lat(&inv.lattice));
        for (el, p) in inv.relations.iter().enumerate() {
            writeln!(out, "rel {} : {}", inv.lattice.name_of(el), blocks_text(p, x.points())).unwrap();
        }
        if let Some(r) = x.realizes(caps.points)? {
            writeln!(out, "realizes {r}").unwrap();
        }
        match &expected {
            None => Ok(Outcome::ok(out)),
            Some((r, l)) if lattice_isomorphic(&inv.lattice, l).is_some() => {
                writeln!(out, "invariant lattice is isomorphic to {r}").unwrap();
                Ok(Outcome::ok(out))
            }
            Some((r, _)) => {
                writeln!(out, "VIOLATION not-isomorphic {} {r}", inv.lattice.name()).unwrap();
                Ok(Outcome::fail(out))
            }
        }
    })
}

/// A space over a finite lattice, and how to print results over the
/// lattice it came from.
fn finite_space(p: Parsed<ParsedSpace>) -> (UltrametricSpace<FiniteLattice>, LatticeRef, bool) {
    match p.value {
        ParsedSpace::Finite(m) => (m, p.lattice, false),
        ParsedSpace::Phi(m) => (finite_view(&m), p.lattice, true),
    }
}

fn amalgamate_cmd(base: &Path, left: &Path, right: &Path, caps: &Caps) -> Result<Outcome> {
    let mut spaces = Vec::new();
    for file in [base, left, right] {
        let (m, r, via_phi) = finite_space(expect_space(file, caps)?);
        if let Some(bad) = invalid(m.validate()) {
            return Ok(Outcome::fail(format!("# {}\n{}", file.display(), bad.out)));
        }
        spaces.push((m, r, via_phi));
    }
    let (lref, via_phi) = (spaces[0].1.clone(), spaces[0].2);
    let mut it = spaces.into_iter().map(|s| s.0);
    let (a, b, c) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
    let inst = AmalgamInstance::new(Some(a), b, c)?;
    let am = amalgamate(&inst);
    let mut out = if via_phi {
        print_ums(&from_finite_view(&am), &lref)
    } else {
        print_ums(&am, &lref)
    };
    let report = am.validate();
    for v in &report.violations {
        match v {
            Violation::ZeroDistance { x, y } => writeln!(out, "# {x} and {y} are identified").unwrap(),
            other => writeln!(out, "{other}").unwrap(),
        }
    }
    let failed = report.violations.iter().any(|v| !matches!(v, Violation::ZeroDistance { .. }));
    Ok(Outcome { out, failed })
}

fn search_failure_cmd(lattice: &str, max_size: usize, full: bool, caps: &Caps) -> Result<Outcome> {
    let (r, l) = resolve(lattice, caps)?;
    let enumeration = if full { Enumeration::Full } else { Enumeration::Reduced };
    let report = check_amalgamation_property_with(&Arc::new(l), max_size, caps.amalgam, enumeration)?;
    let Some(w) = &report.witness else {
        return Ok(Outcome::ok(format!(
            "no failure over {} up to size {max_size} ({} instances)\n",
            report.lattice, report.instances
        )));
    };
    let mut out = format!("failure over {} after {} instances\n", report.lattice, report.instances);
    let inst = &w.instance;
    for m in inst.base().into_iter().chain([inst.left(), inst.right(), &w.amalgam]) {
        out.push_str(&print_ums(m, &r));
    }
    writeln!(out, "{}", w.violation).unwrap();
    Ok(Outcome::fail(out))
}

const CATALOG_KINDS: &str = "chain<n>\nboolean<n>\nm3\nn5\nproduct(<kind>,<kind>)\n";

fn run(cli: Cli) -> Result<Outcome> {
    let caps = Caps {
        points: cli.cap.unwrap_or(DEFAULT_POINT_CAP),
        amalgam: cli.cap.unwrap_or(DEFAULT_AMALGAM_CAP),
        catalog: CatalogCaps::default(),
    };
    match cli.command {
        Command::Validate { file } => validate(&file, &caps),
        Command::Phi { lattice, dot } => {
            let (_, l) = resolve(&lattice, &caps)?;
            let table = phi(Arc::new(l)).table;
            Ok(Outcome::ok(if dot { render_dot(&table) } else { print_lat(&table) }))
        }
        Command::ToMetric { file } => to_metric_cmd(&file, &caps),
        Command::ToEq { file } => to_eq_cmd(&file, &caps),
        Command::CheckHomogeneous { file } => check_homogeneous_cmd(&file, &caps),
        Command::Aut { file } => aut_cmd(&file, &caps),
        Command::Amalgamate { base, left, right } => amalgamate_cmd(&base, &left, &right, &caps),
        Command::SearchFailure { lattice, max_size, full } => search_failure_cmd(&lattice, max_size, full, &caps),
        Command::InvLattice { file, expect } => inv_lattice_cmd(&file, expect.as_deref(), &caps),
        Command::Catalog { kind: None } => Ok(Outcome::ok(CATALOG_KINDS.to_string())),
        Command::Catalog { kind: Some(kind) } => {
            let kind: CatalogKind = kind.parse()?;
            Ok(Outcome::ok(print_lat(&catalog(&kind, &caps.catalog)?)))
        }
        Command::Dot { lattice } => Ok(Outcome::ok(render_dot(&resolve(&lattice, &caps)?.1))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.out);
            ExitCode::from(u8::from(outcome.failed))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
