//! JSON experiment configuration and its validation.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use smoothcal::confidence::CiMethod;
use smoothcal::estimate::{sigma_for_problem, SigmaParams};
use smoothcal::fit::{Family, RhoModel};
use smoothcal::fourier::{CoefficientModel, SignPattern};
use smoothcal::simulate::{
    gen_regression, spectral_from_rho_model, spectral_target, DataSet, DensitySampler, NoiseKind, NoiseSpec,
    Problem, Seed, StationaryGaussianSampler, MAX_STATIONARY_LEN,
};

use crate::error::{CliError, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub problem: ProblemName,
    pub model: ModelSpec,
    #[serde(default)]
    pub noise: Option<NoiseConfig>,
    pub n: usize,
    pub replications: usize,
    pub seed: u64,
    pub alpha: f64,
    pub n_range: [usize; 2],
    #[serde(default)]
    pub ci_method: CiMethodName,
    #[serde(default)]
    pub fit_family: Option<FamilyName>,
    pub output: PathBuf,
    #[serde(default)]
    pub tailcheck: Option<TailcheckConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemName {
    Regression,
    Density,
    Spectral,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    #[serde(default)]
    pub coefficients: Option<Vec<f64>>,
    #[serde(default)]
    pub rho_model: Option<RhoModelSpec>,
    /// Number of generated coefficients (regression, density) or lags (spectral).
    #[serde(default)]
    pub terms: Option<usize>,
    #[serde(default)]
    pub leading: Option<f64>,
    #[serde(default)]
    pub signs: Option<SignName>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RhoModelSpec {
    QuasiPower { c1: f64, alpha: f64, gamma: f64 },
    QuasiExp { c2: f64, kappa: f64, q: f64 },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignName {
    Positive,
    Alternating,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub kind: NoiseName,
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseName {
    Gaussian,
    Rademacher,
    Uniform,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CiMethodName {
    #[default]
    PlugIn,
    QuadraticSolve,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    QuasiPower,
    QuasiExp,
}

impl FamilyName {
    pub fn family(self) -> Family {
        match self {
            Self::QuasiPower => Family::QuasiPower,
            Self::QuasiExp => Family::QuasiExp,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailcheckConfig {
    /// Truncation level N at which deviations are checked.
    #[serde(rename = "N")]
    pub big_n: usize,
    pub t_grid: Vec<f64>,
}

/// A validated experiment.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub problem: Problem,
    /// f: regression function, density or spectral density.
    pub model: CoefficientModel,
    pub generator: Generator,
    /// The coefficient sequence estimated by ĉ; its tail energy is the true ρ.
    pub target: CoefficientModel,
    pub noise: NoiseSpec,
    pub sigma_sq: f64,
    pub n: usize,
    pub replications: usize,
    pub seed: u64,
    pub alpha: f64,
    pub n_lo: usize,
    pub n_hi: usize,
    pub ci_method: CiMethod,
    pub fit_family: Option<Family>,
    pub output: PathBuf,
    pub tail_n: usize,
    pub t_grid: Vec<f64>,
}

/// Command-line values that override the document.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub replications: Option<usize>,
}

pub fn load(path: &Path, overrides: Overrides) -> CliResult<Experiment> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    let raw: RawConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = match e.path().to_string() {
            p if p == "." => "(document)".to_string(),
            p => p,
        };
        CliError::config(field, e.into_inner().to_string())
    })?;
    de.end().map_err(|e| CliError::config("(document)", e.to_string()))?;
    validate(raw, overrides)
}

fn default_t_grid() -> Vec<f64> {
    (1..=16).map(|i| 0.25 * i as f64).collect()
}

pub fn validate(raw: RawConfig, overrides: Overrides) -> CliResult<Experiment> {
    let problem = match raw.problem {
        ProblemName::Regression => Problem::A,
        ProblemName::Density => Problem::B,
        ProblemName::Spectral => Problem::C,
    };
    let n = raw.n;
    if n < 4 {
        return Err(CliError::config("n", format!("must be at least 4, got {n}")));
    }
    if problem == Problem::C && n > MAX_STATIONARY_LEN {
        return Err(CliError::config("n", format!("spectral paths are limited to {MAX_STATIONARY_LEN}, got {n}")));
    }
    let replications = overrides.replications.unwrap_or(raw.replications);
    if replications < 1 {
        return Err(CliError::config("replications", "must be at least 1"));
    }
    let seed = overrides.seed.unwrap_or(raw.seed);
    if !(raw.alpha > 0.0 && raw.alpha < 1.0) {
        return Err(CliError::config("alpha", format!("must lie in (0, 1), got {}", raw.alpha)));
    }
    let k_max = if problem == Problem::C { n - 1 } else { n };
    let [n_lo, n_hi] = raw.n_range;
    if n_lo < 1 || n_lo > n_hi || n_hi > k_max / 2 {
        return Err(CliError::config(
            "n_range",
            format!("must satisfy 1 <= lo <= hi <= {}, got [{n_lo}, {n_hi}]", k_max / 2),
        ));
    }
    let noise = match (problem, raw.noise) {
        (Problem::A, None) => NoiseSpec::gaussian(1.0).expect("unit scale is valid"),
        (Problem::A, Some(cfg)) => {
            let kind = match cfg.kind {
                NoiseName::Gaussian => NoiseKind::Gaussian,
                NoiseName::Rademacher => NoiseKind::Rademacher,
                NoiseName::Uniform => NoiseKind::UniformCentered,
            };
            NoiseSpec::new(kind, cfg.sigma).map_err(|e| CliError::config("noise.sigma", e.to_string()))?
        }
        (_, Some(_)) => return Err(CliError::config("noise", "only the regression problem takes a noise model")),
        (_, None) => NoiseSpec::gaussian(0.0).expect("zero scale is valid"),
    };
    let model = build_model(problem, &raw.model, n)?;
    let generator = build_generator(problem, &model, n)?;
    let target = match problem {
        Problem::C => spectral_target(&model, k_max)?,
        _ => model.clone(),
    };
    let sigma_sq = match problem {
        Problem::A => noise.variance(),
        Problem::B => 1.0,
        Problem::C => sigma_for_problem(Problem::C, SigmaParams { spectral_model: Some(&model), ..Default::default() })?
            .powi(2),
    };
    let (tail_n, t_grid) = match raw.tailcheck {
        Some(t) => (t.big_n, t.t_grid),
        None => (n_hi, default_t_grid()),
    };
    if tail_n < 1 || tail_n > k_max / 2 {
        return Err(CliError::config("tailcheck.N", format!("must lie in [1, {}], got {tail_n}", k_max / 2)));
    }
    if t_grid.is_empty() || t_grid.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(CliError::config("tailcheck.t_grid", "must be a nonempty list of positive numbers"));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(CliError::config("tailcheck.t_grid", "must be strictly increasing"));
    }
    Ok(Experiment {
        problem,
        model,
        generator,
        target,
        noise,
        sigma_sq,
        n,
        replications,
        seed,
        alpha: raw.alpha,
        n_lo,
        n_hi,
        ci_method: match raw.ci_method {
            CiMethodName::PlugIn => CiMethod::PlugIn,
            CiMethodName::QuadraticSolve => CiMethod::QuadraticSolve,
        },
        fit_family: raw.fit_family.map(FamilyName::family),
        output: raw.output,
        tail_n,
        t_grid,
    })
}

fn build_model(problem: Problem, spec: &ModelSpec, n: usize) -> CliResult<CoefficientModel> {
    let bad = |field: &str, e: smoothcal::Error| CliError::config(field, e.to_string());
    let model = match (&spec.coefficients, &spec.rho_model) {
        (Some(c), None) => {
            if spec.terms.is_some() || spec.leading.is_some() || spec.signs.is_some() {
                return Err(CliError::config("model", "terms, leading and signs apply to rho_model only"));
            }
            if c.is_empty() || c.iter().any(|v| !v.is_finite()) {
                return Err(CliError::config("model.coefficients", "must be a nonempty list of finite numbers"));
            }
            CoefficientModel::new(c.clone()).map_err(|e| bad("model.coefficients", e))?
        }
        (None, Some(r)) => {
            let rho = match *r {
                RhoModelSpec::QuasiPower { c1, alpha, gamma } => RhoModel::quasi_power(c1, alpha, gamma),
                RhoModelSpec::QuasiExp { c2, kappa, q } => RhoModel::quasi_exp(c2, kappa, q),
            }
            .map_err(|e| bad("model.rho_model", e))?;
            let leading = spec.leading.unwrap_or(1.0);
            if problem == Problem::C {
                if spec.signs.is_some() {
                    return Err(CliError::config("model.signs", "spectral models are cosine-only with positive signs"));
                }
                let lags = spec.terms.unwrap_or(64);
                if lags < 1 || lags >= n {
                    return Err(CliError::config("model.terms", format!("lags must lie in [1, {}], got {lags}", n - 1)));
                }
                spectral_from_rho_model(&rho, lags, leading).map_err(|e| bad("model.rho_model", e))?
            } else {
                let terms = spec.terms.unwrap_or(n);
                if terms < 1 {
                    return Err(CliError::config("model.terms", "must be at least 1"));
                }
                let signs = match spec.signs.unwrap_or(SignName::Positive) {
                    SignName::Positive => SignPattern::Positive,
                    SignName::Alternating => SignPattern::Alternating,
                };
                CoefficientModel::from_rho_model(rho, terms, leading, signs).map_err(|e| bad("model.rho_model", e))?
            }
        }
        _ => return Err(CliError::config("model", "give exactly one of `coefficients` and `rho_model`")),
    };
    Ok(model)
}

fn build_generator(problem: Problem, model: &CoefficientModel, n: usize) -> CliResult<Generator> {
    let bad = |e: smoothcal::Error| CliError::config("model", e.to_string());
    Ok(match problem {
        Problem::A => Generator::Regression,
        Problem::B => Generator::Density(DensitySampler::new(model).map_err(bad)?),
        Problem::C => Generator::Stationary(StationaryGaussianSampler::new(model, n).map_err(bad)?),
    })
}

/// Prepared sampler for the configured observation scheme.
#[derive(Debug, Clone)]
pub enum Generator {
    Regression,
    Density(DensitySampler),
    Stationary(StationaryGaussianSampler),
}

impl Experiment {
    /// The data set of replication `rep`.
    pub fn draw(&self, rep: usize) -> smoothcal::Result<DataSet> {
        let seed = Seed::new(self.seed, rep as u64);
        match &self.generator {
            Generator::Regression => gen_regression(&self.model, self.n, &self.noise, seed),
            Generator::Density(s) => s.sample(self.n, seed),
            Generator::Stationary(s) => s.sample(seed),
        }
    }
}
