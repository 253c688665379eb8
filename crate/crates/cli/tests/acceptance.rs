//! Every acceptance criterion at its stated tolerance, one PASS/FAIL line
//! each, with the individual checks underneath. Exits nonzero on any FAIL.

use std::process::ExitCode;
use std::time::Instant;

use wigner_weyl::laws::{Conventions, VERDICT_JSON};
use wigner_weyl_cli::checks::{self, Outcome};
use wigner_weyl_cli::conventions::resolve_conventions;
use wigner_weyl_cli::spec::Grid;
use wigner_weyl_cli::Check;

const E: f64 = 0.5;
const SEED: u64 = 20_240_601;

type Criterion = (&'static str, f64, fn() -> anyhow::Result<Outcome>);

fn oracle_equivalence() -> anyhow::Result<Outcome> {
    checks::oracle_equivalence(100, SEED, 1e-8)
}

fn norm_identities() -> anyhow::Result<Outcome> {
    let levels = [0, 1, 2, 5, 10, 20, 40, 60];
    Ok(checks::norm_identities(&[1, 2, 3], &[1.0, 0.1], &levels, true)?.0)
}

fn scaled_single_level_profile() -> anyhow::Result<Outcome> {
    let cfg = checks::snapped(E, 0.01, 1)?;
    let grid = Grid {
        variable: "rho",
        min: 0.0,
        max: 1.4,
        count: 2000,
    };
    Ok(checks::fig1_checks(&checks::fig1_table(&cfg, E, &grid)?, E))
}

fn sharp_bulk_across_surface() -> anyhow::Result<Outcome> {
    checks::fig2_refinement(E, 0.02, 1)
}

fn individual_airy() -> anyhow::Result<Outcome> {
    checks::individual_airy_rate(E, &[1, 2], [1e-2, 1e-3])
}

fn bulk_interior_exterior() -> anyhow::Result<Outcome> {
    checks::bulk_interior_exterior(E, &[1, 2], &[0.02, 0.005])
}

fn level_localized() -> anyhow::Result<Outcome> {
    checks::localized_law(E, &[1, 2], 5e-3, Conventions::resolved().localized_form)
}

fn smoothed_interface() -> anyhow::Result<Outcome> {
    checks::smoothed_interface(E, &[1, 2], [1e-2, 1e-3], Conventions::resolved().airy_scale)
}

fn sharp_interface() -> anyhow::Result<Outcome> {
    let mut out =
        checks::sharp_interface(E, &[1, 2], [1e-2, 1e-3], Conventions::resolved().airy_scale)?;
    let a = resolve_conventions()?.artifact.unwrap_or_default();
    let b = resolve_conventions()?.artifact.unwrap_or_default();
    let differs = |x: &str, y: &str| if x == y { 0.0 } else { 1.0 };
    out.checks.push(Check::at_most(
        "verdict reruns differ",
        differs(&a, &b),
        0.0,
    ));
    out.checks.push(Check::at_most(
        "verdict differs from the archived file",
        differs(&a, VERDICT_JSON),
        0.0,
    ));
    Ok(out)
}

fn empirical_measure() -> anyhow::Result<Outcome> {
    let mut out = checks::abel_mass(&[1, 2, 3], 0.1, 1.0, 1e-5, true)?;
    for d in 1..=3 {
        let cfg = wigner_weyl::Oscillator::new(0.1, d)?;
        out.extend(checks::envelope_fit(&cfg, 1.0, (1000, 10000))?.0);
    }
    Ok(out)
}

fn special_functions() -> anyhow::Result<Outcome> {
    Ok(checks::special_functions(SEED))
}

fn stationary_phase() -> anyhow::Result<Outcome> {
    checks::stationary_phase_model()
}

const CRITERIA: [Criterion; 12] = [
    ("oracle equivalence", 60.0, oracle_equivalence),
    ("norm identities", 120.0, norm_identities),
    (
        "scaled single-level profile",
        30.0,
        scaled_single_level_profile,
    ),
    (
        "sharp bulk sum across the surface",
        120.0,
        sharp_bulk_across_surface,
    ),
    ("individual Airy interface", 60.0, individual_airy),
    ("bulk interior and exterior", 60.0, bulk_interior_exterior),
    ("level-localized law", 120.0, level_localized),
    ("smoothed 2/3 interface", 120.0, smoothed_interface),
    ("sharp 2/3 interface", 180.0, sharp_interface),
    ("empirical measure", 120.0, empirical_measure),
    ("special functions", 30.0, special_functions),
    ("stationary phase", 10.0, stationary_phase),
];

fn main() -> ExitCode {
    let mut failed = 0;
    for (i, (name, budget, f)) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        let (passed, lines) = match result {
            Ok(mut o) => {
                o.checks.push(Check::at_most("runtime (s)", secs, *budget));
                (o.passed(), o.checks.iter().map(Check::line).collect())
            }
            Err(e) => (false, vec![format!("ERROR {e:#}")]),
        };
        if !passed {
            failed += 1;
        }
        println!(
            "{} {:>2} {name} ({secs:.1} s)",
            if passed { "PASS" } else { "FAIL" },
            i + 1
        );
        for l in lines {
            println!("       {l}");
        }
    }
    println!(
        "\nacceptance: {} passed, {failed} failed",
        CRITERIA.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
