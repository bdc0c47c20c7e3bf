//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines are always printed; exits nonzero if any criterion fails.

use std::collections::BTreeMap;

use indyn::report::{run_suite, Report, RunStatus, ScenarioReport};
use indyn_core::par::Exec;

struct Criterion {
    label: &'static str,
    scenarios: &'static [&'static str],
    /// Wall-clock budget in seconds over the listed scenarios.
    budget_s: Option<u64>,
    /// Extra checks that must be present and passing.
    checks: &'static [(&'static str, &'static str)],
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        label: "1 Prohorov min-cut equals the subset oracle on 3 x 200 pairs",
        scenarios: &["prohorov_oracle"],
        budget_s: Some(30),
        checks: &[
            ("prohorov_oracle", "fast_equals_oracle_finite5"),
            ("prohorov_oracle", "fast_equals_oracle_interval_q16"),
            ("prohorov_oracle", "fast_equals_oracle_zint_n5"),
        ],
    },
    Criterion {
        label: "2 Dirac identity, pushforward linearity, convexity bound and tight case",
        scenarios: &["lemma21"],
        budget_s: None,
        checks: &[
            ("lemma21", "dirac_identity"),
            ("lemma21", "pushforward_linear"),
            ("lemma21", "convexity_bound"),
            ("lemma21", "convexity_tight_case"),
        ],
    },
    Criterion {
        label: "3 constructive measure chains for every k in [N, N+6] and fig1 pairs",
        scenarios: &["thm33_chains"],
        budget_s: Some(10),
        checks: &[],
    },
    Criterion {
        label: "4 swap pseudo-orbit not shadowed; induced M_20 shadowing fails with witness",
        scenarios: &["thm38_nonshadowing"],
        budget_s: None,
        checks: &[
            ("thm38_nonshadowing", "closed_form_non_shadowing"),
            ("thm38_nonshadowing", "induced_shadowing"),
            ("thm38_nonshadowing", "induced_witness_revalidates"),
        ],
    },
    Criterion {
        label: "5 certified chain absence on both interval maps; swap2 transitive not mixing",
        scenarios: &["ex34_no_chain", "ex35_no_chain", "swap2_transitivity"],
        budget_s: Some(5),
        checks: &[
            ("ex34_no_chain", "q16_absent_with_closure"),
            ("ex34_no_chain", "q64_absent_with_closure"),
            ("ex35_no_chain", "q16_absent_with_closure"),
            ("ex35_no_chain", "q64_absent_with_closure"),
            ("swap2_transitivity", "transitive"),
            ("swap2_transitivity", "mixing"),
        ],
    },
    Criterion {
        label: "6 ball around delta_{-1/2} stays separated from the two-point measure",
        scenarios: &["thm22_separation"],
        budget_s: Some(60),
        checks: &[
            ("thm22_separation", "separation"),
            ("thm22_separation", "ball_mass_on_right_half"),
        ],
    },
    Criterion {
        label: "7 measure sensitivity times inside base times at half separation",
        scenarios: &["lemma41_inclusion"],
        budget_s: None,
        checks: &[
            ("lemma41_inclusion", "fig1_inclusion"),
            ("lemma41_inclusion", "swap2_inclusion"),
        ],
    },
    Criterion {
        label: "8 entropy zero on finite maps, fig1 in [0.28, 0.42], Dirac embedding",
        scenarios: &["entropy"],
        budget_s: Some(120),
        checks: &[
            ("entropy", "identity_zero"),
            ("entropy", "swap2_zero"),
            ("entropy", "fig1_estimate_in_window"),
            ("entropy", "swap2_embedding"),
        ],
    },
    Criterion {
        label: "9 shift on compactified integers settles at delta_infinity",
        scenarios: &["ex56_convergence"],
        budget_s: Some(5),
        checks: &[("ex56_convergence", "settles_at_infinity")],
    },
];

fn find<'a>(report: &'a Report, name: &str) -> &'a ScenarioReport {
    report
        .scenarios
        .iter()
        .find(|s| s.name == name)
        .unwrap_or_else(|| panic!("scenario {name} missing from the report"))
}

fn judge(report: &Report, c: &Criterion) -> (bool, String) {
    let mut problems = Vec::new();
    let mut ms = 0u128;
    for name in c.scenarios {
        let s = find(report, name);
        ms += report.timings_ms[*name];
        if s.status != RunStatus::Pass {
            let failed: Vec<&str> = s.checks.iter().filter(|k| !k.passed).map(|k| k.name.as_str()).collect();
            problems.push(format!(
                "{name}: {:?} {failed:?} {}",
                s.status,
                s.error.clone().unwrap_or_default()
            ));
        }
    }
    for (scenario, check) in c.checks {
        let s = find(report, scenario);
        match s.checks.iter().find(|k| k.name == *check) {
            Some(k) if k.passed => {}
            Some(k) => problems.push(format!("{check}: {}", k.detail)),
            None => problems.push(format!("{check}: not reported")),
        }
    }
    if let Some(b) = c.budget_s {
        if ms > u128::from(b) * 1000 {
            problems.push(format!("{ms} ms exceeds {b} s"));
        }
    }
    let detail = if problems.is_empty() {
        format!("{ms} ms")
    } else {
        problems.join("; ")
    };
    (problems.is_empty(), detail)
}

fn main() {
    let none = BTreeMap::new();
    let first = run_suite(&[], &none, 0, 1, Exec::default()).expect("suite runs");
    let mut all = true;
    for c in CRITERIA {
        let (ok, detail) = judge(&first, c);
        all &= ok;
        println!("{} criterion {} ({detail})", if ok { "PASS" } else { "FAIL" }, c.label);
    }
    // second run uses a different job count: ordering and content must not move
    let second = run_suite(&[], &none, 0, 2, Exec::default()).expect("suite runs");
    let same = first.verdict_json() == second.verdict_json();
    all &= same;
    println!(
        "{} criterion 10 full suite twice at seed 0 gives byte-identical verdict JSON ({} bytes)",
        if same { "PASS" } else { "FAIL" },
        first.verdict_json().len()
    );
    if !all {
        std::process::exit(1);
    }
}
