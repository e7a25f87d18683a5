//! Acceptance suite: runs every verification row at its pinned tolerance and
//! prints one line per criterion.

use std::collections::BTreeMap;

use kstab_core::verify::{run, Row};

const CRITERIA: [(u32, &str); 15] = [
    (1, "Okounkov body volume"),
    (2, "S-invariants by exact integration"),
    (3, "delta map values, minimum and property suite"),
    (4, "intersection expansions as polynomial identities"),
    (5, "step S-invariants, exact"),
    (6, "chain bounds and the parametric family, exact"),
    (7, "walls and semistable domains, exact"),
    (8, "cone-construction intervals, exact"),
    (9, "beta invariant signs"),
    (10, "constrained symmetry-algebra dimensions"),
    (11, "soliton candidates and derivative vanishing"),
    (12, "weighted volumes"),
    (13, "weighted S-invariants"),
    (14, "weighted chain minima"),
    (15, "property suites (splits, quadrature, weight one, chambers)"),
];

#[test]
fn acceptance_criteria() {
    let rows = run(None, None, 30).expect("verification suite runs");
    let mut by_criterion: BTreeMap<u32, Vec<&Row>> = BTreeMap::new();
    for row in &rows {
        by_criterion.entry(row.criterion).or_default().push(row);
    }
    let mut all_ok = true;
    for (num, label) in CRITERIA {
        let rows = by_criterion.get(&num).map(Vec::as_slice).unwrap_or(&[]);
        let ok = !rows.is_empty() && rows.iter().all(|r| r.passed);
        println!(
            "criterion {num:>2}: {} — {label} ({} rows)",
            if ok { "PASS" } else { "FAIL" },
            rows.len(),
        );
        for r in rows.iter().filter(|r| !r.passed) {
            println!("    failed row {}: expected {}, computed {}", r.id, r.expected, r.computed);
        }
        all_ok &= ok;
    }
    assert!(all_ok, "at least one acceptance criterion failed");
}
