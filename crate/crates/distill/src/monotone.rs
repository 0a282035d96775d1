//! Monotone evaluation on state and mixture files.

use std::path::Path;
use std::str::FromStr;

use gaussmix::io::{read_mixture, read_state};
use gaussmix::mixture::GaussianMixture;
use gaussmix::monotones::{
    kappa_ent, kappa_squeeze, kappa_tilde_ub, m_var, m_var_bar, FreeSetSpec, MonotoneReport,
};
use nalgebra::DMatrix;

use crate::csvio::fmt9;
use crate::CliError;

/// The measures the `monotone` subcommand can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    KappaSqueeze,
    KappaEnt,
    KappaTildeSqueeze,
    KappaTildeEnt,
    MVar,
    MVarBar,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::KappaSqueeze,
        Measure::KappaEnt,
        Measure::KappaTildeSqueeze,
        Measure::KappaTildeEnt,
        Measure::MVar,
        Measure::MVarBar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::KappaSqueeze => "kappa_squeeze",
            Measure::KappaEnt => "kappa_ent",
            Measure::KappaTildeSqueeze => "kappa_tilde_squeeze",
            Measure::KappaTildeEnt => "kappa_tilde_ent",
            Measure::MVar => "m_var",
            Measure::MVarBar => "m_var_bar",
        }
    }
}

impl FromStr for Measure {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Measure::ALL.iter().map(|m| m.name()).collect();
                CliError::Config(format!(
                    "unknown measure \"{s}\"; choose one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// A parsed input file: either a single state or a mixture.
enum LoadedInput {
    State(gaussmix::symplectic::GaussianState),
    Mixture(GaussianMixture),
}

fn load_input(path: &Path) -> Result<LoadedInput, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| CliError::Config(format!("cannot read {}: {err}", path.display())))?;
    let first_word = text
        .lines()
        .map(str::trim)
        .find(|line| !line.is_empty())
        .and_then(|line| line.split_whitespace().next())
        .unwrap_or("");
    match first_word {
        "n_modes" => read_state(text.as_bytes())
            .map(LoadedInput::State)
            .map_err(|err| CliError::Config(format!("{}: {err}", path.display()))),
        "branches" => read_mixture(text.as_bytes())
            .map(LoadedInput::Mixture)
            .map_err(|err| CliError::Config(format!("{}: {err}", path.display()))),
        _ => Err(CliError::Config(format!(
            "{}: not a state file (\"n_modes …\") or mixture file (\"branches …\")",
            path.display()
        ))),
    }
}

/// Extract the single covariance a non-convex measure needs.
fn single_covariance(input: &LoadedInput, measure: Measure) -> Result<DMatrix<f64>, CliError> {
    match input {
        LoadedInput::State(state) => Ok(state.cov().clone()),
        LoadedInput::Mixture(mix) => {
            let branches = mix.branches();
            if branches.len() == 1 {
                Ok(branches[0].1.cov().clone())
            } else {
                Err(CliError::Config(format!(
                    "measure {} needs a single state, but the file holds a {}-branch mixture; use kappa_tilde_squeeze or kappa_tilde_ent",
                    measure.name(),
                    branches.len()
                )))
            }
        }
    }
}

fn as_mixture(input: LoadedInput) -> GaussianMixture {
    match input {
        LoadedInput::State(state) => GaussianMixture::from_state(state),
        LoadedInput::Mixture(mix) => mix,
    }
}

fn report_line(measure: Measure, report: &MonotoneReport) -> String {
    format!(
        "measure={} value={} witness={}",
        measure.name(),
        fmt9(report.value),
        report.witness
    )
}

/// Evaluate `measure` on the state or mixture stored at `path` and return
/// the one-line report.
pub fn evaluate_file(measure: Measure, path: &Path) -> Result<String, CliError> {
    let input = load_input(path)?;
    let engine = |err: gaussmix::Error| CliError::Engine(err.to_string());
    let report = match measure {
        Measure::KappaSqueeze => {
            kappa_squeeze(&single_covariance(&input, measure)?).map_err(engine)?
        }
        Measure::KappaEnt => kappa_ent(&single_covariance(&input, measure)?).map_err(engine)?,
        Measure::KappaTildeSqueeze => {
            kappa_tilde_ub(&as_mixture(input), FreeSetSpec::Squeezing).map_err(engine)?
        }
        Measure::KappaTildeEnt => {
            kappa_tilde_ub(&as_mixture(input), FreeSetSpec::Entanglement1x1).map_err(engine)?
        }
        Measure::MVar => m_var(&as_mixture(input)).map_err(engine)?,
        Measure::MVarBar => m_var_bar(&as_mixture(input)).map_err(engine)?,
    };
    Ok(report_line(measure, &report))
}
