use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};
use crate::structures::{UltrametricSpace, Violation};

type Space = UltrametricSpace<FiniteLattice>;

/// Default largest `|B|` and `|C|` in amalgamation searches.
pub const DEFAULT_AMALGAM_CAP: usize = 4;

/// Two extensions `B` and `C` of a common base `A`, sharing exactly the base
/// points by name. An empty base is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmalgamInstance {
    base: Option<Space>,
    left: Space,
    right: Space,
}

impl AmalgamInstance {
    pub fn new(base: Option<Space>, left: Space, right: Space) -> Result<Self> {
        if left.lattice() != right.lattice()
            || base.as_ref().is_some_and(|a| a.lattice() != left.lattice())
        {
            return Err(Error::LatticeMismatch);
        }
        for space in base.iter().chain([&left, &right]) {
            space.validate().into_result()?;
        }
        let base_points: &[String] = base.as_ref().map_or(&[], |a| a.points());
        if let Some(p) = left
            .points()
            .iter()
            .find(|p| right.points().contains(p) && !base_points.contains(p))
        {
            return Err(Error::Invalid(format!(
                "point `{p}` lies in both extensions but not in the base"
            )));
        }
        if let Some(a) = &base {
            for x in 0..a.len() {
                let (lx, rx) = (left.point(&a.points()[x])?, right.point(&a.points()[x])?);
                for y in x + 1..a.len() {
                    let (ly, ry) = (left.point(&a.points()[y])?, right.point(&a.points()[y])?);
                    if left.d(lx, ly) != a.d(x, y) || right.d(rx, ry) != a.d(x, y) {
                        return Err(Error::Invalid(format!(
                            "base distance {} {} differs in an extension",
                            a.points()[x],
                            a.points()[y]
                        )));
                    }
                }
            }
        }
        Ok(AmalgamInstance { base, left, right })
    }

    pub fn base(&self) -> Option<&Space> {
        self.base.as_ref()
    }

    pub fn left(&self) -> &Space {
        &self.left
    }

    pub fn right(&self) -> &Space {
        &self.right
    }
}

/// The candidate amalgam over `B ∪ C`: distances inside `B` and `C` are
/// kept, and for `b ∈ B∖A`, `c ∈ C∖A`
/// `d(b, c) = ⋀_{a ∈ A} (d(b, a) ∨ d(a, c))`, or top when `A` is empty.
///
/// A cross distance may come out as bottom; the two points are then meant
/// to be identified, which is consistent exactly when the triangle
/// inequality holds. The result need not satisfy the triangle inequality,
/// and a search counts only triangle violations as failures.
pub fn amalgamate(inst: &AmalgamInstance) -> Space {
    let (left, right) = (&inst.left, &inst.right);
    let l = &**left.lattice();
    let right_only: Vec<usize> = (0..right.len())
        .filter(|&i| !left.points().contains(&right.points()[i]))
        .collect();
    let nl = left.len();
    let n = nl + right_only.len();
    let mut points = left.points().to_vec();
    points.extend(right_only.iter().map(|&i| right.points()[i].clone()));
    let in_right: Vec<Option<usize>> = (0..n)
        .map(|i| {
            if i < nl {
                right.point(&left.points()[i]).ok()
            } else {
                Some(right_only[i - nl])
            }
        })
        .collect();
    let base: Vec<(usize, usize)> = inst.base.as_ref().map_or(Vec::new(), |a| {
        a.points()
            .iter()
            .map(|p| (left.point(p).unwrap(), right.point(p).unwrap()))
            .collect()
    });
    let mut d = vec![l.bottom(); n * n];
    for x in 0..n {
        for y in 0..n {
            d[x * n + y] = match (x < nl, y < nl, in_right[x], in_right[y]) {
                (true, true, _, _) => *left.d(x, y),
                (_, _, Some(rx), Some(ry)) => *right.d(rx, ry),
                (true, false, None, Some(ry)) => cross(l, &base, |a| *left.d(x, a.0), |a| *right.d(a.1, ry)),
                (false, true, Some(rx), None) => cross(l, &base, |a| *left.d(y, a.0), |a| *right.d(a.1, rx)),
                _ => unreachable!("every point lies in the left or the right space"),
            };
        }
    }
    UltrametricSpace::new("amalgam", Arc::clone(left.lattice()), points, d)
        .expect("entries come from the lattice")
}

fn cross(
    l: &FiniteLattice,
    base: &[(usize, usize)],
    to_left: impl Fn(&(usize, usize)) -> Elem,
    to_right: impl Fn(&(usize, usize)) -> Elem,
) -> Elem {
    l.meet_all(base.iter().map(|a| l.join(to_left(a), to_right(a))))
}

/// Which instances an amalgamation search visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Enumeration {
    /// Only extensions adding one point on one side and one or two on the
    /// other. A failed triangle has three vertices and a cross distance
    /// depends only on its two endpoints and the base, so every failing
    /// instance restricts to a failing one of this shape; the verdict is the
    /// same as for [`Enumeration::Full`].
    Reduced,
    /// Every pair of extensions up to the size bound.
    Full,
}

/// The first failing instance, its amalgam and the violated triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct AmalgamWitness {
    pub instance: AmalgamInstance,
    pub amalgam: Space,
    pub violation: Violation,
}

/// Outcome of an amalgamation search.
#[derive(Debug, Clone, PartialEq)]
pub struct AmalgamReport {
    pub lattice: String,
    pub max_size: usize,
    pub enumeration: Enumeration,
    /// Instances in every stage visited, including the failing one.
    pub instances: u64,
    pub witness: Option<AmalgamWitness>,
}

impl AmalgamReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Searches every instance with `|B|, |C| <= max_size` (reduced as described
/// under [`Enumeration::Reduced`]) for one whose amalgam is not a
/// Λ-ultrametric space.
pub fn check_amalgamation_property(
    l: &Arc<FiniteLattice>,
    max_size: usize,
    cap: usize,
) -> Result<AmalgamReport> {
    check_amalgamation_property_with(l, max_size, cap, Enumeration::Reduced)
}

/// The witness of [`check_amalgamation_property`], if any.
pub fn search_amalgam_failure(
    l: &Arc<FiniteLattice>,
    max_size: usize,
    cap: usize,
) -> Result<Option<AmalgamWitness>> {
    Ok(check_amalgamation_property(l, max_size, cap)?.witness)
}

/// Bases are enumerated up to isomorphism (lexicographically least distance
/// vector over all relabelings) and extensions up to relabeling of the new
/// points. Stages run by base size, then by the numbers of new points; the
/// reported failure is the first in this order regardless of scheduling,
/// and is re-validated through [`amalgamate`] before it is returned.
pub fn check_amalgamation_property_with(
    l: &Arc<FiniteLattice>,
    max_size: usize,
    cap: usize,
    enumeration: Enumeration,
) -> Result<AmalgamReport> {
    if max_size > cap {
        return Err(Error::CapExceeded {
            what: "amalgam size",
            value: max_size,
            cap,
        });
    }
    let vals: Vec<Elem> = l.elements().filter(|&x| x != l.bottom()).collect();
    let mut instances = 0u64;
    for k in 0..max_size {
        let shapes: Vec<(usize, usize)> = match enumeration {
            Enumeration::Reduced => vec![(1, 1), (1, 2)],
            Enumeration::Full => (1..=max_size)
                .flat_map(|p| (p..=max_size).map(move |q| (p, q)))
                .collect(),
        };
        let shapes: Vec<_> = shapes.into_iter().filter(|&(_, q)| k + q <= max_size).collect();
        if shapes.is_empty() {
            continue;
        }
        let bases = canonical_spaces(l, &vals, k);
        for &(p, q) in &shapes {
            for base in &bases {
                let left = extensions(l, &vals, base, k, p);
                let right = if p == q { left.clone() } else { extensions(l, &vals, base, k, q) };
                instances += if p == q {
                    (left.len() * (left.len() + 1) / 2) as u64
                } else {
                    (left.len() * right.len()) as u64
                };
                let found = left.par_iter().enumerate().find_map_first(|(bi, b)| {
                    let start = if p == q { bi } else { 0 };
                    right[start..].iter().find_map(|c| {
                        let (d, n) = fast_amalgam(l, k, b, p, c, q);
                        first_cross_violation(l, &d, n, k, p).map(|_| c.clone())
                    })
                    .map(|c| (b.clone(), c))
                });
                if let Some((b, c)) = found {
                    let witness = build_witness(l, base, k, &b, p, &c, q);
                    return Ok(AmalgamReport {
                        lattice: l.name().to_string(),
                        max_size,
                        enumeration,
                        instances,
                        witness: Some(witness),
                    });
                }
            }
        }
    }
    Ok(AmalgamReport {
        lattice: l.name().to_string(),
        max_size,
        enumeration,
        instances,
        witness: None,
    })
}

fn valid_from(l: &FiniteLattice, d: &[Elem], n: usize, first_new: usize) -> bool {
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if x < first_new && y < first_new && z < first_new {
                    continue;
                }
                if !l.leq(d[x * n + y], l.join(d[x * n + z], d[y * n + z])) {
                    return false;
                }
            }
        }
    }
    true
}

/// Calls `f` with every assignment of `len` values from `vals`, in
/// lexicographic order.
fn for_each_tuple(vals: &[Elem], len: usize, mut f: impl FnMut(&[Elem])) {
    if vals.is_empty() && len > 0 {
        return;
    }
    let mut idx = vec![0usize; len];
    let mut tuple: Vec<Elem> = vec![vals.first().copied().unwrap_or(0); len];
    loop {
        f(&tuple);
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < vals.len() {
                tuple[pos] = vals[idx[pos]];
                break;
            }
            idx[pos] = 0;
            tuple[pos] = vals[0];
        }
    }
}

/// Valid `k`-point spaces, one per isomorphism class, as row-major matrices
/// in lexicographic order of their upper triangles.
fn canonical_spaces(l: &FiniteLattice, vals: &[Elem], k: usize) -> Vec<Vec<Elem>> {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|x| (x + 1..k).map(move |y| (x, y))).collect();
    let perms: Vec<Vec<usize>> = (0..k).permutations(k).collect();
    let mut out = Vec::new();
    for_each_tuple(vals, pairs.len(), |tuple| {
        let mut d = vec![l.bottom(); k * k];
        for (&(x, y), &v) in pairs.iter().zip(tuple) {
            d[x * k + y] = v;
            d[y * k + x] = v;
        }
        if !valid_from(l, &d, k, 0) {
            return;
        }
        let minimal = perms.iter().all(|pi| {
            let relabeled = pairs.iter().map(|&(x, y)| d[pi[x] * k + pi[y]]);
            relabeled.cmp(tuple.iter().copied()) != std::cmp::Ordering::Less
        });
        if minimal {
            out.push(d);
        }
    });
    out
}

/// Valid one-sided extensions of `base` by `p` new points (indices
/// `k..k+p`), one per relabeling class of the new points.
fn extensions(l: &FiniteLattice, vals: &[Elem], base: &[Elem], k: usize, p: usize) -> Vec<Vec<Elem>> {
    let n = k + p;
    let slots: Vec<(usize, usize)> = (0..p)
        .flat_map(|i| (0..k).map(move |a| (k + i, a)))
        .chain((0..p).flat_map(|i| (i + 1..p).map(move |j| (k + i, k + j))))
        .collect();
    let perms: Vec<Vec<usize>> = (0..p).permutations(p).collect();
    let mut out = Vec::new();
    for_each_tuple(vals, slots.len(), |tuple| {
        let mut d = vec![l.bottom(); n * n];
        for a in 0..k {
            for b in 0..k {
                d[a * n + b] = base[a * k + b];
            }
        }
        for (&(x, y), &v) in slots.iter().zip(tuple) {
            d[x * n + y] = v;
            d[y * n + x] = v;
        }
        if !valid_from(l, &d, n, k) {
            return;
        }
        let map = |pi: &[usize], x: usize| if x < k { x } else { k + pi[x - k] };
        let minimal = perms.iter().all(|pi| {
            let relabeled = slots.iter().map(|&(x, y)| d[map(pi, x) * n + map(pi, y)]);
            relabeled.cmp(tuple.iter().copied()) != std::cmp::Ordering::Less
        });
        if minimal {
            out.push(d);
        }
    });
    out
}

/// The amalgam matrix on `base, left-new, right-new` points.
fn fast_amalgam(l: &FiniteLattice, k: usize, b: &[Elem], p: usize, c: &[Elem], q: usize) -> (Vec<Elem>, usize) {
    let n = k + p + q;
    let (nb, nc) = (k + p, k + q);
    // Position in the right extension of each amalgam index, if any.
    let right_pos = |x: usize| if x < k { Some(x) } else if x >= k + p { Some(x - p) } else { None };
    let mut d = vec![l.bottom(); n * n];
    for x in 0..n {
        for y in 0..n {
            d[x * n + y] = if x < nb && y < nb {
                b[x * nb + y]
            } else if let (Some(rx), Some(ry)) = (right_pos(x), right_pos(y)) {
                c[rx * nc + ry]
            } else {
                let (bx, cy) = if x < nb { (x, right_pos(y).unwrap()) } else { (y, right_pos(x).unwrap()) };
                if k == 0 {
                    l.top()
                } else {
                    l.meet_all((0..k).map(|a| l.join(b[bx * nb + a], c[a * nc + cy])))
                }
            };
        }
    }
    (d, n)
}

/// First triangle `(x, y, z)` in lexicographic order that fails, among those
/// touching both sides; the others lie inside `B` or `C`.
fn first_cross_violation(l: &FiniteLattice, d: &[Elem], n: usize, k: usize, p: usize) -> Option<(usize, usize, usize)> {
    let is_left = |x: usize| x >= k && x < k + p;
    let is_right = |x: usize| x >= k + p;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let touches_left = is_left(x) || is_left(y) || is_left(z);
                let touches_right = is_right(x) || is_right(y) || is_right(z);
                if !(touches_left && touches_right) {
                    continue;
                }
                if !l.leq(d[x * n + y], l.join(d[x * n + z], d[y * n + z])) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

fn space_from(l: &Arc<FiniteLattice>, name: &str, points: Vec<String>, d: &[Elem]) -> Space {
    UltrametricSpace::new(name, Arc::clone(l), points, d.to_vec()).expect("entries come from the lattice")
}

/// Names the points `a*`, `b*`, `c*`, rebuilds the instance, and confirms
/// the failure through [`amalgamate`] and full validation.
fn build_witness(
    l: &Arc<FiniteLattice>,
    base: &[Elem],
    k: usize,
    b: &[Elem],
    p: usize,
    c: &[Elem],
    q: usize,
) -> AmalgamWitness {
    let a_pts: Vec<String> = (0..k).map(|i| format!("a{i}")).collect();
    let b_pts: Vec<String> = (0..p).map(|i| format!("b{i}")).collect();
    let c_pts: Vec<String> = (0..q).map(|i| format!("c{i}")).collect();
    let base_space = (k > 0).then(|| space_from(l, "A", a_pts.clone(), base));
    let left = space_from(l, "B", [a_pts.clone(), b_pts].concat(), b);
    let right = space_from(l, "C", [a_pts, c_pts].concat(), c);
    let instance = AmalgamInstance::new(base_space, left, right).expect("enumerated instances are well formed");
    let amalgam = amalgamate(&instance);
    let (fast, _) = fast_amalgam(l, k, b, p, c, q);
    assert_eq!(amalgam.matrix(), &fast[..], "amalgam computations disagree");
    let violation = amalgam
        .validate()
        .violations
        .into_iter()
        .find(|v| matches!(v, Violation::Triangle { .. }))
        .expect("a reported failure violates the triangle inequality");
    AmalgamWitness {
        instance,
        amalgam,
        violation,
    }
}
