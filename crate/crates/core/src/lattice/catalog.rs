use std::fmt;
use std::str::FromStr;

use super::FiniteLattice;
use crate::error::{Error, Result};

/// Size caps applied when building catalog lattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogCaps {
    pub max_boolean_atoms: usize,
    pub max_elements: usize,
}

impl Default for CatalogCaps {
    fn default() -> Self {
        CatalogCaps {
            max_boolean_atoms: 12,
            max_elements: 4096,
        }
    }
}

/// A named lattice from the built-in catalog.
///
/// The textual form is `chain<n>`, `boolean<n>`, `m3`, `n5` or
/// `product(<kind>,<kind>)`; it doubles as the lattice name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CatalogKind {
    Chain(usize),
    Boolean(usize),
    M3,
    N5,
    Product(Box<CatalogKind>, Box<CatalogKind>),
}

impl fmt::Display for CatalogKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogKind::Chain(n) => write!(f, "chain{n}"),
            CatalogKind::Boolean(n) => write!(f, "boolean{n}"),
            CatalogKind::M3 => f.write_str("m3"),
            CatalogKind::N5 => f.write_str("n5"),
            CatalogKind::Product(a, b) => write!(f, "product({a},{b})"),
        }
    }
}

impl FromStr for CatalogKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let unknown = || Error::UnknownCatalog(s.to_string());
        if s == "m3" {
            return Ok(CatalogKind::M3);
        }
        if s == "n5" {
            return Ok(CatalogKind::N5);
        }
        if let Some(inner) = s.strip_prefix("product(").and_then(|r| r.strip_suffix(')')) {
            let mut depth = 0usize;
            for (i, ch) in inner.char_indices() {
                match ch {
                    '(' => depth += 1,
                    ')' => depth = depth.checked_sub(1).ok_or_else(unknown)?,
                    ',' if depth == 0 => {
                        let left = inner[..i].parse()?;
                        let right = inner[i + 1..].parse()?;
                        return Ok(CatalogKind::Product(Box::new(left), Box::new(right)));
                    }
                    _ => {}
                }
            }
            return Err(unknown());
        }
        for (prefix, ctor) in [
            ("chain", CatalogKind::Chain as fn(usize) -> CatalogKind),
            ("boolean", CatalogKind::Boolean),
        ] {
            if let Some(rest) = s.strip_prefix(prefix) {
                let n: usize = rest.trim().parse().map_err(|_| unknown())?;
                return Ok(ctor(n));
            }
        }
        Err(unknown())
    }
}

/// Builds a catalog lattice with canonical labels.
///
/// Chains are labelled `0..n-1`. Boolean lattices are labelled by bit
/// strings whose `i`-th character is `1` iff atom `i+1` is in the set, so
/// `boolean2` has bottom `00`, atoms `10`, `01` and top `11`. `m3` and `n5`
/// use `0 a b c 1` (in `n5`, `a < b`). Products label pairs `(x,y)`.
pub fn catalog(kind: &CatalogKind, caps: &CatalogCaps) -> Result<FiniteLattice> {
    let size = expected_size(kind, caps)?;
    if size > caps.max_elements {
        return Err(Error::CapExceeded {
            what: "lattice size",
            value: size,
            cap: caps.max_elements,
        });
    }
    let name = kind.to_string();
    match kind {
        CatalogKind::Chain(n) => {
            let names = (0..*n).map(|i| i.to_string()).collect();
            FiniteLattice::from_closed_forms(
                name,
                names,
                |a, b| a <= b,
                usize::min,
                usize::max,
                0,
                n - 1,
            )
        }
        CatalogKind::Boolean(n) => {
            let n = *n;
            let names = (0..1usize << n)
                .map(|mask| {
                    (0..n)
                        .map(|i| if mask >> i & 1 == 1 { '1' } else { '0' })
                        .collect()
                })
                .collect();
            FiniteLattice::from_closed_forms(
                name,
                names,
                |a, b| a & b == a,
                |a, b| a & b,
                |a, b| a | b,
                0,
                (1 << n) - 1,
            )
        }
        CatalogKind::M3 => FiniteLattice::from_covers(
            &name,
            &["0", "a", "b", "c", "1"],
            &[
                ("0", "a"),
                ("0", "b"),
                ("0", "c"),
                ("a", "1"),
                ("b", "1"),
                ("c", "1"),
            ],
        ),
        CatalogKind::N5 => FiniteLattice::from_covers(
            &name,
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")],
        ),
        CatalogKind::Product(l, r) => {
            let left = catalog(l, caps)?;
            let right = catalog(r, caps)?;
            Ok(product(&left, &right).with_name(&name))
        }
    }
}

fn expected_size(kind: &CatalogKind, caps: &CatalogCaps) -> Result<usize> {
    Ok(match kind {
        CatalogKind::Chain(n) => {
            if *n == 0 {
                return Err(Error::OutOfRange("chain length 0".into()));
            }
            *n
        }
        CatalogKind::Boolean(n) => {
            if *n == 0 {
                return Err(Error::OutOfRange("boolean atom count 0".into()));
            }
            if *n > caps.max_boolean_atoms {
                return Err(Error::CapExceeded {
                    what: "boolean atoms",
                    value: *n,
                    cap: caps.max_boolean_atoms,
                });
            }
            1 << n
        }
        CatalogKind::M3 | CatalogKind::N5 => 5,
        CatalogKind::Product(a, b) => {
            expected_size(a, caps)?.saturating_mul(expected_size(b, caps)?)
        }
    })
}

/// Componentwise product; element `(x, y)` has id `x * |right| + y`.
pub fn product(left: &FiniteLattice, right: &FiniteLattice) -> FiniteLattice {
    let m = right.len();
    let names = left
        .elements()
        .flat_map(|x| right.elements().map(move |y| (x, y)))
        .map(|(x, y)| format!("({},{})", left.name_of(x), right.name_of(y)))
        .collect();
    FiniteLattice::from_closed_forms(
        format!("product({},{})", left.name(), right.name()),
        names,
        |a, b| left.leq(a / m, b / m) && right.leq(a % m, b % m),
        |a, b| left.meet(a / m, b / m) * m + right.meet(a % m, b % m),
        |a, b| left.join(a / m, b / m) * m + right.join(a % m, b % m),
        left.bottom() * m + right.bottom(),
        left.top() * m + right.top(),
    )
    .expect("labels of a product are distinct")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(s: &str) -> FiniteLattice {
        catalog(&s.parse().unwrap(), &CatalogCaps::default()).unwrap()
    }

    #[test]
    fn kinds_parse_and_print() {
        for s in ["chain3", "boolean2", "m3", "n5", "product(chain2,product(m3,chain2))"] {
            assert_eq!(s.parse::<CatalogKind>().unwrap().to_string(), s);
        }
        assert!("pentagon".parse::<CatalogKind>().is_err());
        assert!("product(chain2)".parse::<CatalogKind>().is_err());
        assert!("chainx".parse::<CatalogKind>().is_err());
    }

    #[test]
    fn chain3_is_total() {
        let l = build("chain3");
        assert_eq!(l.len(), 3);
        for x in l.elements() {
            for y in l.elements() {
                assert!(l.leq(x, y) || l.leq(y, x));
            }
        }
    }

    #[test]
    fn boolean2_is_a_diamond() {
        let l = build("boolean2");
        assert_eq!(l.len(), 4);
        let (a, b) = (l.elem("10").unwrap(), l.elem("01").unwrap());
        assert_eq!(l.meet(a, b), l.elem("00").unwrap());
        assert_eq!(l.join(a, b), l.elem("11").unwrap());
        assert_eq!(l.covers().len(), 4);
    }

    #[test]
    fn m3_has_three_incomparable_atoms() {
        let l = build("m3");
        let atoms: Vec<_> = ["a", "b", "c"].iter().map(|s| l.elem(s).unwrap()).collect();
        for &x in &atoms {
            for &y in &atoms {
                assert_eq!(x == y, l.leq(x, y));
            }
        }
    }

    #[test]
    fn caps_are_enforced() {
        let err = catalog(&CatalogKind::Boolean(13), &CatalogCaps::default()).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { what: "boolean atoms", .. }));
        let tight = CatalogCaps {
            max_boolean_atoms: 12,
            max_elements: 10,
        };
        assert!(catalog(&"product(chain4,chain3)".parse().unwrap(), &tight).is_err());
        assert!(catalog(&CatalogKind::Chain(0), &CatalogCaps::default()).is_err());
    }

    #[test]
    fn product_of_chains() {
        let l = build("product(chain2,chain2)");
        assert_eq!(l.name(), "product(chain2,chain2)");
        assert_eq!(l.names(), ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]);
        assert_eq!(l.meet(1, 2), 0);
        assert_eq!(l.join(1, 2), 3);
    }
}
