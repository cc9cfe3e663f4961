//! Line-oriented text formats: `.lat` lattices, `.ums` spaces, `.eqs`
//! structures, and DOT export of Hasse diagrams.
//!
//! Every format ignores blank lines and `#` comments. Spaces and structures
//! name their value lattice with a reference: `catalog:<kind>`, a path to a
//! `.lat` file (relative to the referring file), or `phi(<reference>)`.

use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use crate::correspondence::PhiSpace;
use crate::error::{Error, Result};
use crate::filter::{phi, PhiLattice};
use crate::lattice::{catalog, CatalogCaps, CatalogKind, FiniteLattice, LatticeProvider};
use crate::partition::Partition;
use crate::structures::{EqStructure, UltrametricSpace};

/// Where a value lattice comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeRef {
    Catalog(CatalogKind),
    Path(PathBuf),
    Phi(Box<LatticeRef>),
}

impl fmt::Display for LatticeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeRef::Catalog(kind) => write!(f, "catalog:{kind}"),
            LatticeRef::Path(p) => write!(f, "{}", p.display()),
            LatticeRef::Phi(inner) => write!(f, "phi({inner})"),
        }
    }
}

impl FromStr for LatticeRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("phi(").and_then(|r| r.strip_suffix(')')) {
            return Ok(LatticeRef::Phi(Box::new(inner.parse()?)));
        }
        if let Some(kind) = s.strip_prefix("catalog:") {
            return Ok(LatticeRef::Catalog(kind.parse()?));
        }
        if s.is_empty() {
            return Err(Error::Invalid("empty lattice reference".into()));
        }
        Ok(LatticeRef::Path(PathBuf::from(s)))
    }
}

/// Settings for resolving lattice references.
#[derive(Debug, Clone)]
pub struct ParseContext {
    /// Directory against which relative paths are resolved.
    pub base_dir: PathBuf,
    pub caps: CatalogCaps,
}

impl Default for ParseContext {
    fn default() -> Self {
        ParseContext {
            base_dir: PathBuf::from("."),
            caps: CatalogCaps::default(),
        }
    }
}

impl ParseContext {
    /// A context resolving paths next to `file`.
    pub fn beside(file: &Path, caps: CatalogCaps) -> Self {
        ParseContext {
            base_dir: file.parent().map(Path::to_path_buf).unwrap_or_default(),
            caps,
        }
    }
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

/// Resolves a reference to a finite lattice; `phi(L)` yields the
/// materialized filter lattice of `L` with labels `^<element>`.
pub fn resolve_finite(r: &LatticeRef, ctx: &ParseContext) -> Result<FiniteLattice> {
    match r {
        LatticeRef::Catalog(kind) => catalog(kind, &ctx.caps),
        LatticeRef::Path(p) => parse_lat(&read_file(&ctx.base_dir.join(p))?),
        LatticeRef::Phi(inner) => Ok(phi(Arc::new(resolve_finite(inner, ctx)?)).table),
    }
}

/// The first keyword of a file (`lattice`, `space` or `structure`).
pub fn first_keyword(text: &str) -> Option<&str> {
    lines(text).next().map(|l| l.keyword)
}

/// A parsed value together with the lattice reference it was read against.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed<T> {
    pub value: T,
    pub lattice: LatticeRef,
}

/// One significant line: its 1-based number, keyword and the rest.
struct Line<'a> {
    no: usize,
    keyword: &'a str,
    rest: &'a str,
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            return None;
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .map_or((content, ""), |(k, r)| (k, r.trim()));
        Some(Line {
            no: i + 1,
            keyword,
            rest,
        })
    })
}

fn last_line(text: &str) -> usize {
    text.lines().count().max(1)
}

/// Reads a header line `<keyword> <value>`.
fn expect_header<'a>(it: &mut impl Iterator<Item = Line<'a>>, keyword: &str, eof: usize) -> Result<Line<'a>> {
    match it.next() {
        Some(line) if line.keyword == keyword && !line.rest.is_empty() => Ok(line),
        Some(line) => Err(Error::parse(line.no, format!("expected `{keyword} <value>`"))),
        None => Err(Error::parse(eof, format!("expected `{keyword} <value>`"))),
    }
}

fn finish<'a>(it: &mut impl Iterator<Item = Line<'a>>) -> Result<()> {
    match it.next() {
        Some(line) => Err(Error::parse(line.no, "unexpected content after `end`")),
        None => Ok(()),
    }
}

pub fn parse_lat(text: &str) -> Result<FiniteLattice> {
    let eof = last_line(text);
    let mut it = lines(text);
    let name = expect_header(&mut it, "lattice", eof)?.rest.to_string();
    let elements_line = expect_header(&mut it, "elements", eof)?;
    let elements: Vec<&str> = elements_line.rest.split_whitespace().collect();
    let mut covers: Vec<(&str, &str)> = Vec::new();
    loop {
        let Some(line) = it.next() else {
            return Err(Error::parse(eof, "missing `end`"));
        };
        match line.keyword {
            "end" => break,
            "cover" => {
                let parts: Vec<&str> = line.rest.split_whitespace().collect();
                let [lo, hi] = parts[..] else {
                    return Err(Error::parse(line.no, "expected `cover <lower> <upper>`"));
                };
                for label in [lo, hi] {
                    if !elements.contains(&label) {
                        return Err(Error::parse(line.no, format!("unknown element `{label}`")));
                    }
                }
                if !covers.contains(&(lo, hi)) {
                    covers.push((lo, hi));
                }
            }
            other => return Err(Error::parse(line.no, format!("unexpected `{other}`"))),
        }
    }
    finish(&mut it)?;
    // Order-theoretic failures (cycles, missing bounds) are reported as is,
    // with their witnesses, rather than as syntax errors.
    FiniteLattice::from_covers(&name, &elements, &covers)
}

pub fn print_lat(l: &FiniteLattice) -> String {
    let mut out = format!("lattice {}\nelements {}\n", l.name(), l.names().join(" "));
    for (a, b) in l.covers() {
        writeln!(out, "cover {} {}", l.name_of(a), l.name_of(b)).unwrap();
    }
    out.push_str("end\n");
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Hasse diagram: one node per element in id order and one edge per
/// covering pair, lower to upper.
pub fn render_dot(l: &FiniteLattice) -> String {
    let mut out = format!("digraph \"{}\" {{\n  rankdir=BT;\n", dot_escape(l.name()));
    for x in l.elements() {
        writeln!(out, "  n{x} [label=\"{}\"];", dot_escape(l.name_of(x))).unwrap();
    }
    for (a, b) in l.covers() {
        writeln!(out, "  n{a} -> n{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Shared header of `.ums` and `.eqs`: name, lattice reference, points.
struct Header {
    name: String,
    lattice: LatticeRef,
    lattice_line: usize,
    points: Vec<String>,
    points_line: usize,
}

fn parse_header<'a>(it: &mut impl Iterator<Item = Line<'a>>, keyword: &str, eof: usize) -> Result<Header> {
    let name = expect_header(it, keyword, eof)?.rest.to_string();
    let lattice_line = expect_header(it, "lattice", eof)?;
    let lattice = lattice_line
        .rest
        .parse()
        .map_err(|e: Error| Error::parse(lattice_line.no, e.to_string()))?;
    let points_line = expect_header(it, "points", eof)?;
    let points: Vec<String> = points_line.rest.split_whitespace().map(String::from).collect();
    Ok(Header {
        name,
        lattice,
        lattice_line: lattice_line.no,
        points,
        points_line: points_line.no,
    })
}

fn point_index(points: &[String], label: &str, line: usize) -> Result<usize> {
    points
        .iter()
        .position(|p| p == label)
        .ok_or_else(|| Error::parse(line, format!("unknown point `{label}`")))
}

/// A parsed `.ums` file.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedSpace {
    Finite(UltrametricSpace<FiniteLattice>),
    /// A space over `phi(<reference>)`, with filter labels `^<element>`.
    Phi(PhiSpace),
}

impl ParsedSpace {
    pub fn name(&self) -> &str {
        match self {
            ParsedSpace::Finite(m) => m.name(),
            ParsedSpace::Phi(m) => m.name(),
        }
    }
}

/// Distance lines as `(x, y, label, line)` with `x < y`, one per pair.
fn parse_distances<'a>(
    it: &mut impl Iterator<Item = Line<'a>>,
    points: &[String],
    eof: usize,
) -> Result<Vec<Option<(&'a str, usize)>>> {
    let n = points.len();
    let mut entries: Vec<Option<(&str, usize)>> = vec![None; n * n];
    let end_line = loop {
        let Some(line) = it.next() else {
            return Err(Error::parse(eof, "missing `end`"));
        };
        match line.keyword {
            "end" => break line.no,
            "d" => {
                let parts: Vec<&str> = line.rest.split_whitespace().collect();
                let [p, q, el] = parts[..] else {
                    return Err(Error::parse(line.no, "expected `d <point> <point> <element>`"));
                };
                let (x, y) = (point_index(points, p, line.no)?, point_index(points, q, line.no)?);
                if x == y {
                    return Err(Error::parse(line.no, "diagonal distances are implicit"));
                }
                let (x, y) = (x.min(y), x.max(y));
                if entries[x * n + y].is_some() {
                    return Err(Error::parse(line.no, format!("distance {p} {q} given twice")));
                }
                entries[x * n + y] = Some((el, line.no));
            }
            other => return Err(Error::parse(line.no, format!("unexpected `{other}`"))),
        }
    };
    for x in 0..n {
        for y in x + 1..n {
            if entries[x * n + y].is_none() {
                return Err(Error::parse(
                    end_line,
                    format!("missing distance for {} {}", points[x], points[y]),
                ));
            }
        }
    }
    finish(it)?;
    Ok(entries)
}

fn build_space<P: LatticeProvider>(
    header: &Header,
    lattice: Arc<P>,
    entries: &[Option<(&str, usize)>],
) -> Result<UltrametricSpace<P>> {
    let n = header.points.len();
    let mut dist = vec![lattice.bottom(); n * n];
    for x in 0..n {
        for y in x + 1..n {
            let (label, line) = entries[x * n + y].expect("checked");
            let v = lattice
                .parse_element(label)
                .ok_or_else(|| Error::parse(line, format!("unknown element `{label}`")))?;
            dist[x * n + y] = v.clone();
            dist[y * n + x] = v;
        }
    }
    UltrametricSpace::new(&header.name, lattice, header.points.clone(), dist)
        .map_err(|e| Error::parse(header.points_line, e.to_string()))
}

pub fn parse_ums(text: &str, ctx: &ParseContext) -> Result<Parsed<ParsedSpace>> {
    let eof = last_line(text);
    let mut it = lines(text);
    let header = parse_header(&mut it, "space", eof)?;
    let entries = parse_distances(&mut it, &header.points, eof)?;
    let at_lattice = |e: Error| match e {
        Error::Parse { .. } => e,
        other => Error::parse(header.lattice_line, other.to_string()),
    };
    let value = match &header.lattice {
        LatticeRef::Phi(inner) => {
            let base = Arc::new(resolve_finite(inner, ctx).map_err(at_lattice)?);
            let phi = Arc::new(PhiLattice::new(base));
            ParsedSpace::Phi(build_space(&header, phi, &entries)?)
        }
        r => {
            let l = Arc::new(resolve_finite(r, ctx).map_err(at_lattice)?);
            ParsedSpace::Finite(build_space(&header, l, &entries)?)
        }
    };
    Ok(Parsed {
        value,
        lattice: header.lattice,
    })
}

pub fn print_ums<P: LatticeProvider>(m: &UltrametricSpace<P>, lattice: &LatticeRef) -> String {
    let mut out = format!(
        "space {}\nlattice {lattice}\npoints {}\n",
        m.name(),
        m.points().join(" ")
    );
    let l = m.lattice();
    for x in 0..m.len() {
        for y in x + 1..m.len() {
            writeln!(out, "d {} {} {}", m.points()[x], m.points()[y], l.label(m.d(x, y))).unwrap();
        }
    }
    out.push_str("end\n");
    out
}

pub fn parse_eqs(text: &str, ctx: &ParseContext) -> Result<Parsed<EqStructure>> {
    let eof = last_line(text);
    let mut it = lines(text);
    let header = parse_header(&mut it, "structure", eof)?;
    let l = Arc::new(
        resolve_finite(&header.lattice, ctx).map_err(|e| match e {
            Error::Parse { .. } => e,
            other => Error::parse(header.lattice_line, other.to_string()),
        })?,
    );
    let n = header.points.len();
    let mut explicit: Vec<(usize, Partition)> = Vec::new();
    let end_line = loop {
        let Some(line) = it.next() else {
            return Err(Error::parse(eof, "missing `end`"));
        };
        match line.keyword {
            "end" => break line.no,
            "rel" => {
                let (el, blocks) = line
                    .rest
                    .split_once(':')
                    .ok_or_else(|| Error::parse(line.no, "expected `rel <element> : <blocks>`"))?;
                let el = el.trim();
                let id = l
                    .index_of(el)
                    .ok_or_else(|| Error::parse(line.no, format!("unknown element `{el}`")))?;
                if explicit.iter().any(|(e, _)| *e == id) {
                    return Err(Error::parse(line.no, format!("relation for `{el}` given twice")));
                }
                let blocks = blocks
                    .split('|')
                    .map(|b| {
                        b.split_whitespace()
                            .map(|p| point_index(&header.points, p, line.no))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                let p = Partition::from_blocks(n, &blocks).map_err(|e| {
                    let labelled = match e {
                        Error::MalformedPartition(msg) => format!("relation for `{el}`: {msg}"),
                        other => other.to_string(),
                    };
                    Error::parse(line.no, labelled)
                })?;
                explicit.push((id, p));
            }
            other => return Err(Error::parse(line.no, format!("unexpected `{other}`"))),
        }
    };
    finish(&mut it)?;
    let value = EqStructure::new(&header.name, l, header.points, explicit).map_err(|e| match e {
        Error::MissingRelation(el) => Error::parse(end_line, format!("missing relation for element `{el}`")),
        other => Error::parse(header.points_line, other.to_string()),
    })?;
    Ok(Parsed {
        value,
        lattice: header.lattice,
    })
}

/// Prints every relation except a bottom equal to equality and a top equal
/// to the trivial relation, which are the defaults.
pub fn print_eqs(a: &EqStructure, lattice: &LatticeRef) -> String {
    let mut out = format!(
        "structure {}\nlattice {lattice}\npoints {}\n",
        a.name(),
        a.points().join(" ")
    );
    let l = a.lattice();
    for el in l.elements() {
        let p = a.relation(el);
        if (el == l.bottom() && p.is_discrete()) || (el == l.top() && p.is_trivial()) {
            continue;
        }
        writeln!(out, "rel {} : {}", l.name_of(el), blocks_text(p, a.points())).unwrap();
    }
    out.push_str("end\n");
    out
}

/// Blocks as `p q | r`, in block order.
pub fn blocks_text(p: &Partition, points: &[String]) -> String {
    p.blocks()
        .iter()
        .map(|b| b.iter().map(|&x| points[x].as_str()).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(" | ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::to_metric;
    use crate::structures::gen_affine_m3;

    fn ctx() -> ParseContext {
        ParseContext::default()
    }

    #[test]
    fn lat_round_trip() {
        let text = "# comment\nlattice diamond\nelements 0 a b 1\ncover 0 a\ncover 0 b\ncover a 1\ncover b 1 # edge\ncover b 1\nend\n";
        let l = parse_lat(text).unwrap();
        assert_eq!(l.len(), 4);
        assert_eq!(parse_lat(&print_lat(&l)).unwrap(), l);
        assert_eq!(print_lat(&parse_lat(&print_lat(&l)).unwrap()), print_lat(&l));
    }

    #[test]
    fn lat_errors_cite_lines() {
        let err = parse_lat("lattice x\nelements a b\ncover a c\nend\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_lat("lattice x\nelements a b\ncover a b\ncover b a\nend\n").unwrap_err();
        assert!(err.to_string().contains("cycle"), "{err}");
        assert!(matches!(parse_lat("lattice x\nelements a\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn dot_counts() {
        let m3 = catalog(&CatalogKind::M3, &CatalogCaps::default()).unwrap();
        let dot = render_dot(&m3);
        assert_eq!(dot.matches("[label=").count(), 5);
        assert_eq!(dot.matches("->").count(), 6);
    }

    #[test]
    fn refs_parse() {
        let r: LatticeRef = "phi(catalog:product(chain2,chain3))".parse().unwrap();
        assert_eq!(r.to_string(), "phi(catalog:product(chain2,chain3))");
        assert_eq!(resolve_finite(&r, &ctx()).unwrap().len(), 6);
    }

    #[test]
    fn eqs_and_ums_round_trip() {
        let a = gen_affine_m3();
        let r: LatticeRef = "catalog:m3".parse().unwrap();
        let text = print_eqs(&a, &r);
        assert_eq!(parse_eqs(&text, &ctx()).unwrap().value, a);
        let m = to_metric(&a).unwrap();
        let pr = LatticeRef::Phi(Box::new(r));
        let text = print_ums(&m, &pr);
        assert!(text.contains("d 00 01 ^a"));
        assert_eq!(parse_ums(&text, &ctx()).unwrap().value, ParsedSpace::Phi(m));
    }

    #[test]
    fn missing_entries_are_named() {
        let err = parse_ums(
            "space s\nlattice catalog:chain3\npoints x y z\nd x y 1\nd y z 2\nend\n",
            &ctx(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("x z"), "{err}");
        let err = parse_eqs(
            "structure s\nlattice catalog:m3\npoints x y\nrel a : x | y\nrel b : x y\nend\n",
            &ctx(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("`c`"), "{err}");
        let err = parse_eqs(
            "structure s\nlattice catalog:chain3\npoints x y\nrel 1 : x\nend\n",
            &ctx(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
    }
}
