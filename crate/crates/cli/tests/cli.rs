use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ultralat"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_in(&fixtures(), args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32, &str)] = &[
        (&["validate", "affine_m3.eqs"], 0, "valid structure affine_m3"),
        (&["validate", "degenerate_m3.eqs"], 0, "valid structure"),
        (&["validate", "m3.lat"], 0, "valid lattice m3"),
        (&["validate", "equilateral.ums"], 0, "valid space"),
        (&["validate", "bad_meet.eqs"], 1, "VIOLATION meet-not-preserved 10 01 x y"),
        (&["validate", "cycle.lat"], 1, "VIOLATION cycle"),
        (&["validate", "no_join.lat"], 1, "VIOLATION no-join a b"),
        (&["validate", "triangle.ums"], 1, "VIOLATION triangle x0 x2 x1"),
        (&["validate", "missing_distance.ums"], 2, "line 6"),
        (&["validate", "unknown_point.eqs"], 2, "line 4"),
        (&["validate", "unknown_catalog.ums"], 2, "m7"),
        (&["to-metric", "missing.eqs"], 2, "cannot read"),
        (&["to-metric", "bad_meet.eqs"], 1, "VIOLATION"),
        (&["to-eq", "lopsided.ums"], 2, "phi("),
        (&["check-homogeneous", "affine_m3.eqs"], 0, "homogeneous affine_m3 (4 automorphisms"),
        (&["check-homogeneous", "equilateral.ums"], 0, "homogeneous"),
        (&["check-homogeneous", "lopsided.ums"], 1, "VIOLATION non-extendable x0->x2"),
        (&["check-homogeneous", "triangle.ums"], 1, "VIOLATION triangle"),
        (&["aut", "affine_m3.eqs"], 0, "automorphisms affine_m3 4"),
        (&["inv-lattice", "affine_m3.eqs", "--expect", "catalog:m3"], 0, "isomorphic to catalog:m3"),
        (&["inv-lattice", "affine_m3.eqs", "--expect", "m3.lat"], 0, "realizes true"),
        (&["inv-lattice", "degenerate_m3.eqs", "--expect", "catalog:m3"], 1, "VIOLATION not-isomorphic"),
        (&["inv-lattice", "degenerate_m3.eqs", "--expect", "catalog:chain2"], 0, "realizes false"),
        (&["amalgamate", "m3_a.ums", "m3_b.ums", "m3_c.ums"], 1, "VIOLATION triangle b0 c1 c0"),
        (&["amalgamate", "m3_a.ums", "m3_b.ums", "m3_b.ums"], 2, "b0"),
        (&["search-failure", "catalog:boolean2", "--max-size", "3"], 0, "no failure over boolean2"),
        (&["search-failure", "m3.lat", "--max-size", "4"], 1, "VIOLATION triangle b0 c1 c0"),
        (&["search-failure", "catalog:m3", "--max-size", "5"], 2, "cap 4"),
        (&["--cap", "3", "aut", "affine_m3.eqs"], 2, "cap 3"),
        (&["catalog"], 0, "product(<kind>,<kind>)"),
        (&["catalog", "boolean2"], 0, "lattice boolean2"),
        (&["catalog", "lattice7"], 2, "lattice7"),
        (&["dot", "catalog:chain2"], 0, "n0 -> n1;"),
        (&["phi", "catalog:m3"], 0, "lattice phi(m3)"),
        (&["validate"], 2, "Usage"),
        (&["phi", "catalog:m3", "--bogus"], 2, "--bogus"),
        (&["frobnicate"], 2, "frobnicate"),
    ];
    for (args, code, needle) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(*code), "{args:?}: {}{}", stdout(&o), stderr(&o));
        let text = if *code == 2 { stderr(&o) } else { stdout(&o) };
        assert!(text.contains(needle), "{args:?}: `{needle}` not in\n{text}");
        if *code == 2 {
            assert!(stdout(&o).is_empty(), "{args:?} wrote to stdout");
        }
    }
}

#[test]
fn help_lists_every_subcommand() {
    let help = stdout(&run(&["--help"]));
    for sub in [
        "validate",
        "phi",
        "to-metric",
        "to-eq",
        "check-homogeneous",
        "aut",
        "amalgamate",
        "search-failure",
        "inv-lattice",
        "catalog",
        "dot",
    ] {
        assert!(help.contains(sub), "{sub} missing from --help");
    }
    assert!(help.contains("--cap"));
}

/// Nodes and edges in DOT output.
fn dot_counts(dot: &str) -> (usize, usize) {
    let nodes = dot.lines().filter(|l| l.contains("[label=")).count();
    let edges = dot.lines().filter(|l| l.contains("->")).count();
    (nodes, edges)
}

#[test]
fn hasse_diagrams() {
    assert_eq!(dot_counts(&stdout(&run(&["phi", "catalog:m3", "--dot"]))), (5, 6));
    assert_eq!(dot_counts(&stdout(&run(&["dot", "catalog:chain2"]))), (2, 1));
    assert_eq!(dot_counts(&stdout(&run(&["dot", "catalog:boolean2"]))), (4, 4));
    assert_eq!(dot_counts(&stdout(&run(&["dot", "catalog:boolean3"]))), (8, 12));
    let phi = stdout(&run(&["phi", "catalog:n5"]));
    for label in ["^0", "^a", "^b", "^c", "^1"] {
        assert!(phi.split_whitespace().any(|w| w == label), "{label} missing");
    }
}

#[test]
fn conversions_round_trip_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["affine_m3.eqs", "boolean_example2.eqs", "degenerate_m3.eqs", "m3.lat"] {
        fs::copy(fixtures().join(name), dir.path().join(name)).unwrap();
    }
    for name in ["affine_m3.eqs", "boolean_example2.eqs", "degenerate_m3.eqs"] {
        let o = run_in(dir.path(), &["to-metric", name]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let ums = stdout(&o);
        assert!(ums.contains("lattice phi("));
        fs::write(dir.path().join("m.ums"), &ums).unwrap();
        assert_eq!(run_in(dir.path(), &["validate", "m.ums"]).status.code(), Some(0));
        let back = run_in(dir.path(), &["to-eq", "m.ums"]);
        assert_eq!(back.status.code(), Some(0), "{}", stderr(&back));
        fs::write(dir.path().join("back.eqs"), stdout(&back)).unwrap();
        let again = stdout(&run_in(dir.path(), &["to-metric", "back.eqs"]));
        assert_eq!(again, ums, "{name}");
        // the fixtures are in canonical form except for comments
        let original = fs::read_to_string(dir.path().join(name)).unwrap();
        let canonical: String = original.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
        assert_eq!(stdout(&back), canonical, "{name}");
    }
}

#[test]
fn printed_lattices_reparse() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["catalog", "product(m3,chain2)"][..], &["phi", "catalog:boolean3"], &["catalog", "n5"]] {
        let text = stdout(&run(args));
        fs::write(dir.path().join("l.lat"), &text).unwrap();
        assert_eq!(run_in(dir.path(), &["validate", "l.lat"]).status.code(), Some(0));
        assert_eq!(stdout(&run_in(dir.path(), &["catalog", "n5"])), stdout(&run(&["catalog", "n5"])));
        let phi = stdout(&run_in(dir.path(), &["phi", "l.lat"]));
        assert!(phi.starts_with("lattice phi("), "{phi}");
    }

    // the lattice part of inv-lattice output is itself a .lat file
    let inv = stdout(&run(&["inv-lattice", "affine_m3.eqs"]));
    let lat: String = inv.lines().take_while(|l| *l != "end").map(|l| format!("{l}\n")).collect::<String>() + "end\n";
    fs::write(dir.path().join("inv.lat"), lat).unwrap();
    assert_eq!(run_in(dir.path(), &["validate", "inv.lat"]).status.code(), Some(0));
    assert_eq!(inv.lines().filter(|l| l.starts_with("rel ")).count(), 5);
    assert!(inv.contains("invariant"));
}

/// Splits concatenated `.ums` blocks.
fn blocks(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for line in text.lines() {
        if line.starts_with("space ") {
            cur.clear();
        }
        cur.push_str(line);
        cur.push('\n');
        if line == "end" {
            out.push(cur.clone());
        }
    }
    out
}

#[test]
fn search_witness_replays_through_amalgamate() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["search-failure", "catalog:m3", "--max-size", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let parts = blocks(&text);
    assert_eq!(parts.len(), 4);
    for (name, part) in ["a.ums", "b.ums", "c.ums", "amalgam.ums"].iter().zip(&parts) {
        fs::write(dir.path().join(name), part).unwrap();
    }
    let replay = run_in(dir.path(), &["amalgamate", "a.ums", "b.ums", "c.ums"]);
    assert_eq!(replay.status.code(), Some(1));
    assert!(stdout(&replay).starts_with(&parts[3]));
    let violation = text.lines().last().unwrap();
    assert!(stdout(&replay).contains(violation), "{violation}");
    let check = run_in(dir.path(), &["validate", "amalgam.ums"]);
    assert_eq!(check.status.code(), Some(1));
    assert!(stdout(&check).contains(violation));

    let full = run(&["search-failure", "catalog:m3", "--max-size", "4", "--full"]);
    assert_eq!(full.status.code(), Some(1));
    assert_eq!(blocks(&stdout(&full)), parts);
}
