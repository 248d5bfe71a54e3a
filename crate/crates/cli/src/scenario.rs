//! Scenario files: a JSON document describing the four links, the power
//! ratios in dB, the numerical settings and an optional sweep axis.
//!
//! ```json
//! {
//!   "hop1": {
//!     "data":         { "k": 1, "m": 1, "d_km": 0.5, "alpha": 4 },
//!     "interference": { "k": 4, "m": 3, "d_km": 0.5, "alpha": 4 }
//!   },
//!   "hop2": { "data": { ... }, "interference": { ... } },
//!   "w_over_n0_db": 10,
//!   "pmax_over_n0_db": 20,
//!   "quadrature_order": 60,
//!   "regime": "auto",
//!   "cross_term": "gauss_chebyshev",
//!   "sweep": { "variable": "w_over_n0_db", "start": 0, "stop": 15, "points": 16 }
//! }
//! ```
//!
//! `quadrature_order`, `regime`, `cross_term` and `sweep` are optional.
//! Unknown keys are rejected. Power ratios are converted to linear scale once,
//! when the scenario is built.

use gkrelay::capacity::{CrossTermRule, RegimeMode, Scenario, DEFAULT_QUADRATURE_ORDER};
use gkrelay::channel::{GKLink, HopChannels, SystemParams};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSpec {
    /// Shadowing shape.
    pub k: f64,
    /// Multipath shape.
    pub m: f64,
    pub d_km: f64,
    /// Path-loss exponent.
    pub alpha: f64,
}

impl LinkSpec {
    fn build(&self) -> gkrelay::Result<GKLink> {
        GKLink::new(self.k, self.m, self.d_km, self.alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopSpec {
    /// Transmitter to receiver of the hop.
    pub data: LinkSpec,
    /// Transmitter of the hop to the primary receiver.
    pub interference: LinkSpec,
}

impl HopSpec {
    fn build(&self) -> gkrelay::Result<HopChannels> {
        Ok(HopChannels::new(self.data.build()?, self.interference.build()?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum RegimeSetting {
    #[default]
    Auto,
    Interference,
    Pmax,
}

impl From<RegimeSetting> for RegimeMode {
    fn from(r: RegimeSetting) -> Self {
        match r {
            RegimeSetting::Auto => RegimeMode::Auto,
            RegimeSetting::Interference => RegimeMode::InterferenceLimited,
            RegimeSetting::Pmax => RegimeMode::PmaxLimited,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CrossTermSetting {
    #[default]
    GaussChebyshev,
    Adaptive,
}

impl From<CrossTermSetting> for CrossTermRule {
    fn from(c: CrossTermSetting) -> Self {
        match c {
            CrossTermSetting::GaussChebyshev => CrossTermRule::GaussChebyshev,
            CrossTermSetting::Adaptive => CrossTermRule::Adaptive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Interference temperature, dB.
    WOverN0Db,
    /// Maximum transmit power, dB.
    PmaxOverN0Db,
    /// Distance of both interference links, km.
    InterferenceDistanceKm,
    /// Relay position `d` on a unit source–destination line: the first data
    /// link spans `d` km and the second `1 - d` km.
    RelayPosition,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl SweepSpec {
    /// Evenly spaced axis values, `start` and `stop` included. Values are
    /// rounded to 12 significant digits so that decimal grids come out
    /// exact (`0.4`, not `0.39999999999999997`).
    pub fn values(&self) -> Vec<f64> {
        let snap = |v: f64| format!("{v:.11e}").parse().expect("formatted float parses");
        match self.points {
            1 => vec![self.start],
            n => {
                let step = (self.stop - self.start) / (n - 1) as f64;
                (0..n).map(|i| snap(self.start + step * i as f64)).collect()
            }
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.points == 0 {
            return Err(CliError::Input("sweep.points must be at least 1".into()));
        }
        for (key, v) in [("sweep.start", self.start), ("sweep.stop", self.stop)] {
            if !v.is_finite() {
                return Err(CliError::Input(format!("{key} must be finite, got {v}")));
            }
            if self.variable == SweepVariable::RelayPosition && !(v > 0.0 && v < 1.0) {
                return Err(CliError::Input(format!(
                    "{key} must lie in (0, 1) for relay_position, got {v}"
                )));
            }
        }
        Ok(())
    }
}

fn default_quadrature_order() -> usize {
    DEFAULT_QUADRATURE_ORDER
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub hop1: HopSpec,
    pub hop2: HopSpec,
    pub w_over_n0_db: f64,
    pub pmax_over_n0_db: f64,
    #[serde(default = "default_quadrature_order")]
    pub quadrature_order: usize,
    #[serde(default)]
    pub regime: RegimeSetting,
    #[serde(default)]
    pub cross_term: CrossTermSetting,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: Self = serde_json::from_str(text).map_err(|e| CliError::Input(format!("scenario: {e}")))?;
        if let Some(sweep) = &file.sweep {
            sweep.validate()?;
        }
        Ok(file)
    }

    pub fn read(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes") + "\n"
    }

    /// The numerical scenario described by the file.
    pub fn build(&self) -> Result<Scenario, CliError> {
        let sys = SystemParams::from_db(self.w_over_n0_db, self.pmax_over_n0_db)?;
        let scn = Scenario::new(self.hop1.build()?, self.hop2.build()?, sys)
            .with_quadrature_order(self.quadrature_order)
            .with_regime(self.regime.into())
            .with_cross_term(self.cross_term.into());
        scn.validate()?;
        Ok(scn)
    }

    /// Copy of the file with the sweep variable set to `value`.
    pub fn at(&self, variable: SweepVariable, value: f64) -> Self {
        let mut out = *self;
        match variable {
            SweepVariable::WOverN0Db => out.w_over_n0_db = value,
            SweepVariable::PmaxOverN0Db => out.pmax_over_n0_db = value,
            SweepVariable::InterferenceDistanceKm => {
                out.hop1.interference.d_km = value;
                out.hop2.interference.d_km = value;
            }
            SweepVariable::RelayPosition => {
                out.hop1.data.d_km = value;
                out.hop2.data.d_km = 1.0 - value;
            }
        }
        out
    }
}
