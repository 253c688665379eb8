use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wigner_weyl_cli::{run, ExperimentKind, ExperimentSpec, Settings, SpecError};

/// Wigner-Weyl sums of the isotropic harmonic oscillator: scans, figure
/// data, verification suites.
#[derive(Parser)]
#[command(name = "wwsum", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Window sum at one classical energy (--hamiltonian).
    Eval(Settings),
    /// Scaled window sums against their Airy-type law across the surface.
    ScanInterface(Settings),
    /// Scaled window sums against their bulk leading term over H.
    ScanBulk(Settings),
    /// Phase-space integrals of W_N, W_N^2 and W_N W_M.
    VerifyNorms(Settings),
    /// Oracle equivalence and the asymptotic-law rate checks.
    VerifyLaws(Settings),
    /// Scaled single-level profile along a ray (rho in [0, 1.4]).
    Fig1(Settings),
    /// Scaled sharp bulk sum against its integrated Airy limit.
    Fig2(Settings),
    /// Pick between competing constants and write the verdict file.
    ResolveConventions(Settings),
    /// Growth exponent of the level envelope and the Abel total mass.
    EnvelopeFit(Settings),
}

impl Command {
    fn split(self) -> (ExperimentKind, Settings) {
        use ExperimentKind as K;
        match self {
            Self::Eval(s) => (K::Eval, s),
            Self::ScanInterface(s) => (K::ScanInterface, s),
            Self::ScanBulk(s) => (K::ScanBulk, s),
            Self::VerifyNorms(s) => (K::VerifyNorms, s),
            Self::VerifyLaws(s) => (K::VerifyLaws, s),
            Self::Fig1(s) => (K::Fig1, s),
            Self::Fig2(s) => (K::Fig2, s),
            Self::ResolveConventions(s) => (K::ResolveConventions, s),
            Self::EnvelopeFit(s) => (K::EnvelopeFit, s),
        }
    }
}

fn main() -> ExitCode {
    let (kind, settings) = Cli::parse().command.split();
    let spec = match settings
        .resolve()
        .and_then(|s| ExperimentSpec::from_settings(kind, &s))
    {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let report = match run(&spec) {
        Ok(r) => r,
        Err(e) => {
            if e.to_string().starts_with("invalid --") {
                eprintln!("wwsum: {e}");
                return ExitCode::from(2);
            }
            eprintln!("wwsum {}: {e:#}", kind.name());
            return ExitCode::FAILURE;
        }
    };
    for c in &report.summary.checks {
        eprintln!("{}", c.line());
    }
    let written = (|| -> anyhow::Result<()> {
        if let Some(p) = &spec.out {
            report.write_csv(p)?;
        } else if let Some(t) = &report.table {
            print!("{}", t.to_csv()?);
        } else if let Some(a) = &report.artifact {
            print!("{a}");
        }
        if let Some(p) = &spec.json_report {
            report.write_json(p)?;
        }
        Ok(())
    })();
    if let Err(e) = written {
        eprintln!("wwsum: {e:#}");
        return ExitCode::FAILURE;
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn usage(e: SpecError) -> ExitCode {
    eprintln!("wwsum: {e}");
    ExitCode::from(2)
}
