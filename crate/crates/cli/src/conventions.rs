//! Chooses between competing closed forms by which one's error against the
//! exact sums decays at the expected rate.

use serde_json::json;

use wigner_weyl::laws::{AiryScale, CellDensity, Conventions, LocalizedForm, VERDICT_JSON};
use wigner_weyl::numerics::fit::rate_exponent;
use wigner_weyl::Weight;

use crate::checks::{localized_error, smoothed_bulk_error, smoothed_interface_error, snapped};
use crate::report::{Check, RunReport, Table};

const ENERGY: f64 = 0.5;
const HBARS: [f64; 2] = [1e-2, 1e-3];

/// Error curve of one candidate: errors at two `hbar` and the observed rate.
#[derive(Clone, Debug, PartialEq)]
pub struct Trial {
    pub quantity: usize,
    pub candidate: usize,
    pub dim: u32,
    pub hbar: [f64; 2],
    pub error: [f64; 2],
    pub rate: f64,
    pub accepted: bool,
}

fn trial(
    quantity: usize,
    candidate: usize,
    dim: u32,
    hbar: [f64; 2],
    error: [f64; 2],
    band: (f64, f64),
) -> Trial {
    let rate = rate_exponent(hbar[0], error[0], hbar[1], error[1]);
    Trial {
        quantity,
        candidate,
        dim,
        hbar,
        error,
        rate,
        accepted: rate >= band.0 && rate <= band.1,
    }
}

const QUANTITIES: [&str; 3] = ["airy_scale", "smoothed_bulk_density", "localized_form"];

fn airy_trials() -> anyhow::Result<Vec<Trial>> {
    let f = Weight::fejer(1.0)?;
    let us = [-2.0, 0.0, 2.0];
    let mut out = Vec::new();
    for (k, scale) in [AiryScale::FourOverE, AiryScale::EOverFour]
        .into_iter()
        .enumerate()
    {
        for d in [1u32, 2] {
            let c0 = snapped(ENERGY, HBARS[0], d)?;
            let c1 = snapped(ENERGY, HBARS[1], d)?;
            let e = [
                smoothed_interface_error(&c0, ENERGY, &f, &us, scale)?,
                smoothed_interface_error(&c1, ENERGY, &f, &us, scale)?,
            ];
            out.push(trial(
                0,
                k,
                d,
                [c0.hbar(), c1.hbar()],
                e,
                (2.0 / 3.0 - 0.25, 2.0 / 3.0 + 0.25),
            ));
        }
    }
    Ok(out)
}

fn density_trials() -> anyhow::Result<Vec<Trial>> {
    let f = Weight::gaussian(0.25)?;
    let mut out = Vec::new();
    for (k, density) in [CellDensity::TwoPiHbar, CellDensity::PiHbar]
        .into_iter()
        .enumerate()
    {
        for d in [1u32, 2] {
            let mut e = [0.0; 2];
            for (j, &hb) in HBARS.iter().enumerate() {
                let cfg = wigner_weyl::Oscillator::new(hb, d)?;
                e[j] = smoothed_bulk_error(&cfg, &f, 0.2, density)?;
            }
            out.push(trial(1, k, d, HBARS, e, (1.5, 2.5)));
        }
    }
    Ok(out)
}

fn localized_trials() -> anyhow::Result<Vec<Trial>> {
    let f = Weight::gaussian(1.0)?;
    let hs = [5e-3, 5e-3 / 8.0];
    let mut out = Vec::new();
    for (k, form) in [LocalizedForm::StationaryPhase, LocalizedForm::AsDisplayed]
        .into_iter()
        .enumerate()
    {
        for d in [1u32, 2] {
            let mut e = [0.0; 2];
            for (j, &hb) in hs.iter().enumerate() {
                let cfg = wigner_weyl::Oscillator::new(hb, d)?;
                e[j] = localized_error(&cfg, ENERGY, &f, 0.5 * ENERGY, form)?;
            }
            out.push(trial(2, k, d, hs, e, (0.9 - 0.25, 0.9 + 0.25)));
        }
    }
    Ok(out)
}

/// The candidate accepted in every dimension, if exactly one is.
fn pick(trials: &[Trial], quantity: usize) -> anyhow::Result<usize> {
    let winners: Vec<usize> = (0..2)
        .filter(|&k| {
            trials
                .iter()
                .filter(|t| t.quantity == quantity && t.candidate == k)
                .all(|t| t.accepted)
        })
        .collect();
    match winners.as_slice() {
        [k] => Ok(*k),
        _ => anyhow::bail!(
            "{}: {} candidates reach the expected rate; error curves: {:?}",
            QUANTITIES[quantity],
            winners.len(),
            trials
                .iter()
                .filter(|t| t.quantity == quantity)
                .collect::<Vec<_>>()
        ),
    }
}

pub fn verdict_json(c: &Conventions) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(c)? + "\n")
}

pub struct Resolution {
    pub conventions: Conventions,
    pub trials: Vec<Trial>,
}

pub fn resolve() -> anyhow::Result<Resolution> {
    let mut trials = airy_trials()?;
    trials.extend(density_trials()?);
    trials.extend(localized_trials()?);
    let conventions = Conventions {
        airy_scale: [AiryScale::FourOverE, AiryScale::EOverFour][pick(&trials, 0)?],
        smoothed_bulk_density: [CellDensity::TwoPiHbar, CellDensity::PiHbar][pick(&trials, 1)?],
        localized_form: [LocalizedForm::StationaryPhase, LocalizedForm::AsDisplayed]
            [pick(&trials, 2)?],
    };
    Ok(Resolution {
        conventions,
        trials,
    })
}

pub fn resolve_conventions() -> anyhow::Result<RunReport> {
    let r = resolve()?;
    let verdict = verdict_json(&r.conventions)?;
    let mut report = RunReport::new(
        "resolve-conventions",
        json!({
            "energy": ENERGY,
            "quantities": QUANTITIES,
            "candidates": {
                "airy_scale": ["(4/E)^(1/3)", "(E/4)^(1/3)"],
                "smoothed_bulk_density": ["(2 pi hbar)^-d", "(pi hbar)^-d"],
                "localized_form": ["stationary-phase", "as-displayed"],
            },
        }),
    );
    let mut t = Table::new(&[
        "quantity",
        "candidate",
        "dim",
        "hbar_0",
        "error_0",
        "hbar_1",
        "error_1",
        "rate",
        "accepted",
    ]);
    for tr in &r.trials {
        t.rows.push(vec![
            tr.quantity as f64,
            tr.candidate as f64,
            tr.dim as f64,
            tr.hbar[0],
            tr.error[0],
            tr.hbar[1],
            tr.error[1],
            tr.rate,
            if tr.accepted { 1.0 } else { 0.0 },
        ]);
    }
    report.set_table(t);
    report.table = None;
    report.push(Check::at_most(
        "mismatch with the archived verdict",
        if verdict == VERDICT_JSON { 0.0 } else { 1.0 },
        0.0,
    ));
    report.artifact = Some(verdict);
    Ok(report)
}
