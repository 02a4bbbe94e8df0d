use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fpsearch::{FpConfig, EXHAUSTIVE_BINARY_MAX_LEN};
use crate::model::SystemConfig;
use crate::quaternary::EXHAUSTIVE_QUATERNARY_MAX_LEN;

pub const USER_ENERGY_DB: f64 = 10.0;
pub const INTERFERER_ENERGY_DB: (f64, f64) = (8.0, 11.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    SingleUserSweep,
    MultiuserAdaptation,
    ComplexityTable,
}

impl Scenario {
    pub fn label(self) -> &'static str {
        match self {
            Scenario::SingleUserSweep => "sweep",
            Scenario::MultiuserAdaptation => "adapt",
            Scenario::ComplexityTable => "complexity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alphabet {
    Binary,
    Quaternary,
}

impl Alphabet {
    pub fn label(self) -> &'static str {
        match self {
            Alphabet::Binary => "binary",
            Alphabet::Quaternary => "quaternary",
        }
    }

    pub fn exhaustive_max_len(self) -> usize {
        match self {
            Alphabet::Binary => EXHAUSTIVE_BINARY_MAX_LEN,
            Alphabet::Quaternary => EXHAUSTIVE_QUATERNARY_MAX_LEN,
        }
    }
}

impl FromStr for Alphabet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" => Ok(Alphabet::Binary),
            "quaternary" => Ok(Alphabet::Quaternary),
            other => Err(Error::Parse(format!("unknown alphabet '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Dominant eigenvector of `Q_R`, scaled to signature energy.
    RealMaxEv,
    /// Dominant eigenvector of `Q`, scaled to signature energy.
    ComplexMaxEv,
    Exhaustive,
    Quantized,
    FpSearch,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::RealMaxEv => "real-max-ev",
            Algorithm::ComplexMaxEv => "complex-max-ev",
            Algorithm::Exhaustive => "exhaustive",
            Algorithm::Quantized => "quantized",
            Algorithm::FpSearch => "fp",
        }
    }

    pub fn is_finite_alphabet(self) -> bool {
        !matches!(self, Algorithm::RealMaxEv | Algorithm::ComplexMaxEv)
    }

    /// The unconstrained benchmark that losses are measured against.
    pub fn benchmark_for(alphabet: Alphabet) -> Self {
        match alphabet {
            Alphabet::Binary => Algorithm::RealMaxEv,
            Alphabet::Quaternary => Algorithm::ComplexMaxEv,
        }
    }

    pub fn parse_list(list: &str) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        for token in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let alg: Algorithm = token.parse()?;
            if !out.contains(&alg) {
                out.push(alg);
            }
        }
        if out.is_empty() {
            return Err(Error::Parse("empty algorithm list".into()));
        }
        Ok(out)
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "real-max-ev" | "realmaxev" => Ok(Algorithm::RealMaxEv),
            "complex-max-ev" | "complexmaxev" => Ok(Algorithm::ComplexMaxEv),
            "exhaustive" => Ok(Algorithm::Exhaustive),
            "quantized" => Ok(Algorithm::Quantized),
            "fp" | "fpsearch" | "fp-search" => Ok(Algorithm::FpSearch),
            other => Err(Error::Parse(format!("unknown algorithm '{other}'"))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    /// `L`, `N`, `σ²`; `users` and `energies_db` drive the adaptation
    /// scenario, the sweeps rebuild them per point.
    pub system: SystemConfig,
    pub user_energy_db: f64,
    pub interferer_energy_db: (f64, f64),
    pub alphabet: Alphabet,
    pub algorithms: Vec<Algorithm>,
    pub trials: usize,
    pub seed: u64,
    /// Interferer counts for the sweep, user counts `K` for the complexity
    /// table. Ignored by the adaptation scenario.
    pub sweep: Vec<usize>,
    pub cycles: usize,
    pub fp: FpConfig,
    /// Evaluate designs against a covariance that also carries the user's
    /// own inter-symbol interference. Design always ignores it.
    pub include_isi: bool,
    /// Worker cap; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    /// Defaults: `L = 16`, `N = 3`, `σ² = 1`, `E₁ = 10` dB, interferers over
    /// `[8, 11]` dB, 1000 trials, seed 42.
    pub fn new(scenario: Scenario, alphabet: Alphabet) -> Self {
        let (users, sweep) = match scenario {
            Scenario::SingleUserSweep => (1, (4..=20).collect()),
            Scenario::MultiuserAdaptation => (8, Vec::new()),
            Scenario::ComplexityTable => (1, (4..=20).step_by(2).collect()),
        };
        let len = 16;
        let algorithms = match scenario {
            Scenario::ComplexityTable => vec![Algorithm::FpSearch],
            _ => {
                let mut algs = vec![
                    Algorithm::benchmark_for(alphabet),
                    Algorithm::Quantized,
                    Algorithm::FpSearch,
                ];
                if len <= alphabet.exhaustive_max_len() {
                    algs.push(Algorithm::Exhaustive);
                }
                algs
            }
        };
        Self {
            scenario,
            system: SystemConfig::with_spaced_energies(len, 3, users, USER_ENERGY_DB, INTERFERER_ENERGY_DB, 1.0),
            user_energy_db: USER_ENERGY_DB,
            interferer_energy_db: INTERFERER_ENERGY_DB,
            alphabet,
            algorithms,
            trials: 1000,
            seed: 42,
            sweep,
            cycles: 5,
            fp: FpConfig::default(),
            include_isi: false,
            threads: None,
        }
    }

    /// Sets `L` and `N` (and `K` for adaptation), rebuilding energies.
    pub fn with_dimensions(mut self, len: usize, paths: usize, users: usize) -> Self {
        self.system = SystemConfig::with_spaced_energies(
            len,
            paths,
            users,
            self.user_energy_db,
            self.interferer_energy_db,
            self.system.noise_variance,
        );
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.system.validate()?;
        self.fp.validate()?;
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::InvalidConfig("no algorithms selected".into()));
        }
        let len = self.system.signature_len;
        if self.algorithms.contains(&Algorithm::Exhaustive) && len > self.alphabet.exhaustive_max_len() {
            return Err(Error::InvalidConfig(format!(
                "exhaustive {} search limited to L <= {}, got L = {len}",
                self.alphabet.label(),
                self.alphabet.exhaustive_max_len()
            )));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidConfig("thread cap must be at least 1".into()));
        }
        match self.scenario {
            Scenario::SingleUserSweep => {
                if self.sweep.is_empty() {
                    return Err(Error::InvalidConfig("empty interferer sweep".into()));
                }
            }
            Scenario::ComplexityTable => {
                if self.alphabet != Alphabet::Binary {
                    return Err(Error::InvalidConfig("complexity table is binary only".into()));
                }
                if self.sweep.is_empty() || self.sweep.contains(&0) {
                    return Err(Error::InvalidConfig("user counts must be at least 1".into()));
                }
            }
            Scenario::MultiuserAdaptation => {
                if self.cycles == 0 {
                    return Err(Error::InvalidConfig("cycles must be at least 1".into()));
                }
            }
        }
        Ok(())
    }
}
