//! Acceptance criteria at full sample sizes. Prints one line per criterion,
//! written straight to stdout so it shows up without `--nocapture`.

use std::collections::HashMap;
use std::io::Write;

use cyclicpoly::claims::{run_all, ClaimResult, RunOptions};

struct Criterion {
    number: u32,
    title: &'static str,
    claims: &'static [&'static str],
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        number: 1,
        title: "side mean",
        claims: &["SIDE_MEAN"],
    },
    Criterion {
        number: 2,
        title: "side and diagonal moments",
        claims: &["SIDE_M2", "DIAG_MEAN", "DIAG_M2"],
    },
    Criterion {
        number: 3,
        title: "adjacent and opposite side products",
        claims: &["SIDE_ADJ_PRODUCT", "SIDE_OPP_PRODUCT"],
    },
    Criterion {
        number: 4,
        title: "adjacent side correlation",
        claims: &["SIDE_ADJ_CORR"],
    },
    Criterion {
        number: 5,
        title: "one-dimensional KS suite",
        claims: &[
            "SIDE_KS",
            "DIAG_KS",
            "ANGLE_KS",
            "GAP21_KS",
            "GAP31_KS",
            "GAP41_KS",
            "TRI_SIDE_MARGINAL_KS",
        ],
    },
    Criterion {
        number: 6,
        title: "adjacent angles uncorrelated yet dependent",
        claims: &["TENT_RHO_ZERO", "TENT_DEPENDENCE"],
    },
    Criterion {
        number: 7,
        title: "triangle angle correlation and side independence",
        claims: &["TRI_ANGLE_RHO", "TRI_SIDE_INDEP_CHI2"],
    },
    Criterion {
        number: 8,
        title: "triangle area moments",
        claims: &["TRI_AREA_MEAN", "TRI_AREA_M2"],
    },
    Criterion {
        number: 9,
        title: "triangle area law",
        claims: &["TRI_AREA_KS"],
    },
    Criterion {
        number: 10,
        title: "quadrilateral angle triple",
        claims: &["QUAD_F_SUPPORT_CHI2", "QUAD_F_MARGINAL_TENT"],
    },
    Criterion {
        number: 11,
        title: "quadrilateral area",
        claims: &["QUAD_AREA_MEAN", "QUAD_AREA_M2", "QUAD_AREA_TWICE_TRI"],
    },
    Criterion {
        number: 12,
        title: "pentagon and hexagon angle correlations",
        claims: &[
            "PENT_RHO_ADJ",
            "PENT_RHO_NONADJ",
            "HEX_RHO_ADJ",
            "HEX_RHO_GAMMA",
            "HEX_RHO_DELTA",
        ],
    },
    Criterion {
        number: 13,
        title: "identity suite",
        claims: &[
            "OPP_ANGLES_SUPPLEMENTARY",
            "ANGLE_SUM_IDENTITY",
            "AREA_TRIG_VS_SHOELACE",
            "DIAGONAL_SINE_IDENTITY",
            "TRI_THIRD_SIDE_IDENTITY",
            "TAN_HALF_ANGLE_IDENTITY",
        ],
    },
];

fn options() -> RunOptions {
    RunOptions {
        seed: 20_161_003,
        workers: 4,
        record_timing: false,
        ..RunOptions::default()
    }
}

fn describe(r: &ClaimResult) -> String {
    let num = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.6e}"));
    match &r.error {
        Some(e) => format!("{} error: {e}", r.claim_id),
        None => format!(
            "{}{} est={} target={} stat={} n={}",
            r.claim_id,
            if r.pass { "" } else { " FAILED" },
            num(r.estimate),
            num(r.analytic),
            num(r.statistic),
            r.n_samples
        ),
    }
}

#[test]
fn acceptance_criteria() {
    let opts = options();
    let results = run_all(None, &opts);
    let by_id: HashMap<&str, &ClaimResult> = results.iter().map(|r| (r.claim_id.as_str(), r)).collect();

    let mut out = std::io::stdout().lock();
    let mut failures = Vec::new();
    for c in CRITERIA {
        let rows: Vec<&ClaimResult> = c
            .claims
            .iter()
            .map(|id| {
                *by_id
                    .get(id)
                    .unwrap_or_else(|| panic!("claim {id} missing from run_all"))
            })
            .collect();
        let pass = rows.iter().all(|r| r.pass && r.error.is_none());
        let detail: Vec<String> = rows.iter().map(|r| describe(r)).collect();
        writeln!(
            out,
            "criterion {:>2} [{}] {}: {}",
            c.number,
            if pass { "PASS" } else { "FAIL" },
            c.title,
            detail.join("; ")
        )
        .unwrap();
        if !pass {
            failures.push(c.number);
        }
    }

    let first = serde_json::to_string_pretty(&results).unwrap();
    let second = serde_json::to_string_pretty(&run_all(None, &opts)).unwrap();
    let identical = first == second;
    writeln!(
        out,
        "criterion 14 [{}] determinism: two full runs at seed {} with {} workers give {} JSON ({} bytes)",
        if identical { "PASS" } else { "FAIL" },
        opts.seed,
        opts.workers,
        if identical { "byte-identical" } else { "different" },
        first.len()
    )
    .unwrap();
    if !identical {
        failures.push(14);
    }

    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
