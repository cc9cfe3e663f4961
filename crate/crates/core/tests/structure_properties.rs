mod common;

use std::sync::Arc;

use common::*;
use itertools::Itertools;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use ultralat::correspondence::{from_finite_view, random_eq_structure, random_finite_space, to_eq, to_metric};
use ultralat::definability::{invariant_eq_lattice, orbitals};
use ultralat::format::{
    parse_eqs, parse_lat, parse_ums, print_eqs, print_lat, print_ums, LatticeRef, ParseContext, ParsedSpace,
};
use ultralat::homogeneity::{automorphisms, check_amalgamation_property_with, index_profile, Enumeration};
use ultralat::lattice::{lattice_isomorphic, FiniteLattice};
use ultralat::partition::Partition;
use ultralat::structures::PartialMap;

fn small_lattice() -> impl Strategy<Value = Arc<FiniteLattice>> {
    let all: Vec<_> = catalog_upto(8).into_iter().filter(|l| l.len() > 1).collect();
    (0..all.len()).prop_map(move |i| Arc::clone(&all[i]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn induced_substructures_validate(l in small_lattice(), n in 1usize..=6, seed in any::<u64>(), mask in any::<u8>()) {
        let a = random_eq_structure(&l, n, &mut rng(seed)).unwrap();
        let subset: Vec<&String> = a.points().iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p).collect();
        prop_assume!(!subset.is_empty());
        let sub = a.induced(&subset).unwrap();
        prop_assert!(sub.validate().is_valid());
        prop_assert_eq!(to_metric(&sub).unwrap(), to_metric(&a).unwrap().induced(&subset).unwrap());
    }

    #[test]
    fn automorphisms_form_a_group(l in small_lattice(), n in 1usize..=6, seed in any::<u64>()) {
        let a = random_eq_structure(&l, n, &mut rng(seed)).unwrap();
        let auts = automorphisms(&a, 10).unwrap();
        let perms: Vec<Vec<usize>> = auts.iter().map(|f| f.as_permutation(n).unwrap()).collect();
        prop_assert!(perms.contains(&(0..n).collect()));
        for f in &auts {
            prop_assert!(perms.contains(&f.inverse().as_permutation(n).unwrap()));
            for g in &auts {
                prop_assert!(perms.contains(&f.then(g).as_permutation(n).unwrap()));
            }
        }
        // and nothing is missing
        let brute = (0..n).permutations(n).filter(|p| {
            preserves_relations(&a, &a, &p.iter().copied().enumerate().collect::<Vec<_>>())
        }).count();
        prop_assert_eq!(brute, auts.len());
    }

    #[test]
    fn m_is_injective_on_valid_spaces(l in small_lattice(), n in 2usize..=5, seed in any::<u64>(), x in any::<prop::sample::Index>(), y in any::<prop::sample::Index>(), v in any::<prop::sample::Index>()) {
        let a = random_eq_structure(&l, n, &mut rng(seed)).unwrap();
        let m = to_metric(&a).unwrap();
        let (x, y) = (x.index(n), y.index(n));
        prop_assume!(x != y);
        let values = m.lattice().base().elements().collect::<Vec<_>>();
        let new = m.lattice().principal(values[v.index(values.len())]);
        prop_assume!(new != *m.d(x, y));
        let mut changed = m.clone();
        changed.set_entry(x, y, new.clone()).unwrap();
        changed.set_entry(y, x, new).unwrap();
        if changed.validate().is_valid() {
            let b = to_eq(&changed).unwrap();
            prop_assert!(b != a);
            prop_assert_eq!(to_metric(&b).unwrap(), changed);
        } else {
            prop_assert!(to_eq(&changed).is_err());
        }
    }

    #[test]
    fn invariant_lattice_ignores_labels(l in small_lattice(), n in 1usize..=6, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_eq_structure(&l, n, &mut r).unwrap();
        let mut labels = a.points().to_vec();
        labels.shuffle(&mut r);
        let relabeled = a.relabel(labels.iter().map(|p| format!("{p}'")).collect()).unwrap();
        let (i1, i2) = (invariant_eq_lattice(&a, 10).unwrap(), invariant_eq_lattice(&relabeled, 10).unwrap());
        prop_assert_eq!(i1.relations.clone(), i2.relations.clone());
        prop_assert!(lattice_isomorphic(&i1.lattice, &i2.lattice).is_some());
        prop_assert_eq!(orbitals(&a, 10).unwrap().len(), orbitals(&relabeled, 10).unwrap().len());
        prop_assert_eq!(i1.relations.first().map(|p| p.is_discrete()), Some(true));
        prop_assert_eq!(i1.relations.last().map(|p| p.is_trivial()), Some(true));
    }

    #[test]
    fn invariant_relations_are_the_equivalence_unions_of_orbitals(l in small_lattice(), n in 1usize..=5, seed in any::<u64>()) {
        let a = random_eq_structure(&l, n, &mut rng(seed)).unwrap();
        let orb = orbitals(&a, 10).unwrap();
        prop_assume!(orb.len() <= 14);
        let orbits = orb.orbits();
        let mut brute: Vec<Partition> = (0u32..1 << orbits.len())
            .filter_map(|mask| {
                let member = |x: usize, y: usize| mask >> orb.orbit_of(x, y) & 1 == 1;
                Partition::from_relation(n, member)
            })
            .collect();
        brute.sort();
        let mut ours = invariant_eq_lattice(&a, 10).unwrap().relations;
        ours.sort();
        prop_assert_eq!(ours, brute);
    }

    #[test]
    fn text_formats_round_trip(l in small_lattice(), n in 1usize..=5, seed in any::<u64>()) {
        let kind = l.name().parse().unwrap();
        let lref = LatticeRef::Catalog(kind);
        let ctx = ParseContext::default();
        let a = random_eq_structure(&l, n, &mut rng(seed)).unwrap().with_name("rt");
        let text = print_eqs(&a, &lref);
        let back = parse_eqs(&text, &ctx).unwrap();
        prop_assert_eq!(&back.value, &a);
        prop_assert_eq!(print_eqs(&back.value, &back.lattice), text);

        let m = random_finite_space(&l, n, &mut rng(seed)).unwrap();
        let text = print_ums(&m, &lref);
        let back = parse_ums(&text, &ctx).unwrap();
        prop_assert_eq!(back.value, ParsedSpace::Finite(m));

        let phi_ref = LatticeRef::Phi(Box::new(lref));
        let pm = to_metric(&a).unwrap();
        let text = print_ums(&pm, &phi_ref);
        prop_assert_eq!(parse_ums(&text, &ctx).unwrap().value, ParsedSpace::Phi(pm));

        let lat_text = print_lat(&l);
        let parsed = parse_lat(&lat_text).unwrap();
        prop_assert_eq!(print_lat(&parsed), lat_text);
        prop_assert_eq!(&parsed, &*l);
    }
}

#[test]
fn full_and_reduced_searches_agree() {
    for k in ["chain3", "boolean2", "m3", "n5"] {
        let l = lat(k);
        let max = if k == "boolean2" { 3 } else { 4 };
        let reduced = check_amalgamation_property_with(&l, max, 4, Enumeration::Reduced).unwrap();
        let full = check_amalgamation_property_with(&l, max, 4, Enumeration::Full).unwrap();
        assert_eq!(reduced.passed(), full.passed(), "{k}");
        assert_eq!(reduced.witness, full.witness, "{k}");
        assert!(full.instances >= reduced.instances);
    }
}

#[test]
fn index_profile_counts_block_splits() {
    let a = ultralat::structures::gen_affine_m3();
    for e in index_profile(&a).unwrap() {
        let (lo, hi) = (a.relation(e.lower), a.relation(e.upper));
        assert!(lo.refines(hi));
        assert_eq!(e.splits.iter().sum::<usize>(), lo.num_blocks());
    }
}

#[test]
fn random_spaces_are_valid_and_round_trip() {
    let mut r = rng(11);
    for l in catalog_upto(8).into_iter().filter(|l| l.len() > 1) {
        for n in 1..=6 {
            let m = from_finite_view(&random_finite_space(&l, n, &mut r).unwrap());
            assert!(m.validate().is_valid());
            assert_eq!(to_metric(&to_eq(&m).unwrap()).unwrap(), m);
        }
    }
    // identity maps are isometries of every space
    let a = random_eq_structure(&lat("n5"), 4, &mut r).unwrap();
    let id = PartialMap::identity(4);
    assert!(ultralat::structures::is_embedding(&id, &a, &a).unwrap());
}
