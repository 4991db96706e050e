//! Regulatory bands, LV/MV cable presets, table reproduction and the
//! bandwidth sweeps.

mod sweep;
mod tables;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use sweep::{sweep, write_sweep_csv, SweepConfig, SweepRange, SweepRow, DEFAULT_REPETITION_INTERVALS};
pub use tables::{
    reproduce_table, CellResult, Expectation, Expectations, ReproductionOptions, TableReport, Tolerance, TABLE_IDS,
};

use crate::channel::{CableLibrary, CableParams};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Occupied bandwidth shared by the HS-OFDM and CSS table entries.
pub const TABLE_SUBCARRIERS: usize = 512;

pub const LV_PHASE_VELOCITY: f64 = 1.50e8;
pub const MV_PHASE_VELOCITY: f64 = 2.56e8;
/// Placeholder characteristic impedances of the lossless presets.
pub const LV_IMPEDANCE: f64 = 50.0;
pub const MV_IMPEDANCE: f64 = 400.0;

/// Unambiguous ranges behind the repetition-interval table.
pub const LV_TABLE_RANGE: f64 = 1_000.0;
pub const MV_TABLE_RANGE: f64 = 10_000.0;

/// Frequency limits of the PLC regulations, each taken as `[0, B]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RegulatoryBand {
    Cenelec,
    Arib,
    Fcc,
    EuBb,
    BrBb,
    HomeplugAv2,
}

impl RegulatoryBand {
    pub const ALL: [RegulatoryBand; 6] = [
        RegulatoryBand::Cenelec,
        RegulatoryBand::Arib,
        RegulatoryBand::Fcc,
        RegulatoryBand::EuBb,
        RegulatoryBand::BrBb,
        RegulatoryBand::HomeplugAv2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RegulatoryBand::Cenelec => "CENELEC",
            RegulatoryBand::Arib => "ARIB",
            RegulatoryBand::Fcc => "FCC",
            RegulatoryBand::EuBb => "EU_BB",
            RegulatoryBand::BrBb => "BR_BB",
            RegulatoryBand::HomeplugAv2 => "HOMEPLUG_AV2",
        }
    }

    /// Upper band edge in Hz.
    pub fn bandwidth(self) -> f64 {
        match self {
            RegulatoryBand::Cenelec => 148.5e3,
            RegulatoryBand::Arib => 450e3,
            RegulatoryBand::Fcc => 490e3,
            RegulatoryBand::EuBb => 30e6,
            RegulatoryBand::BrBb => 50e6,
            RegulatoryBand::HomeplugAv2 => 86e6,
        }
    }

    pub fn is_narrowband(self) -> bool {
        self.bandwidth() < 1e6
    }
}

impl fmt::Display for RegulatoryBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RegulatoryBand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_uppercase();
        Ok(match key.as_str() {
            "CENELEC" | "CENELECA" => RegulatoryBand::Cenelec,
            "ARIB" => RegulatoryBand::Arib,
            "FCC" => RegulatoryBand::Fcc,
            "EUBB" | "EU" | "EUROPEAN" => RegulatoryBand::EuBb,
            "BRBB" | "BR" | "BRAZILIAN" => RegulatoryBand::BrBb,
            "HOMEPLUGAV2" | "HOMEPLUG" => RegulatoryBand::HomeplugAv2,
            _ => {
                return Err(Error::Unknown {
                    kind: "band",
                    name: s.to_string(),
                })
            }
        })
    }
}

pub fn preset_band(name: &str) -> Result<RegulatoryBand> {
    name.parse()
}

/// The two distribution-network scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Lv,
    Mv,
}

impl Scenario {
    pub const ALL: [Scenario; 2] = [Scenario::Lv, Scenario::Mv];

    pub fn key(self) -> &'static str {
        match self {
            Scenario::Lv => "lv",
            Scenario::Mv => "mv",
        }
    }

    pub fn phase_velocity(self) -> f64 {
        match self {
            Scenario::Lv => LV_PHASE_VELOCITY,
            Scenario::Mv => MV_PHASE_VELOCITY,
        }
    }

    pub fn impedance(self) -> f64 {
        match self {
            Scenario::Lv => LV_IMPEDANCE,
            Scenario::Mv => MV_IMPEDANCE,
        }
    }

    /// Range used for the repetition-interval table.
    pub fn table_range(self) -> f64 {
        match self {
            Scenario::Lv => LV_TABLE_RANGE,
            Scenario::Mv => MV_TABLE_RANGE,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lv" | "low-voltage" => Ok(Scenario::Lv),
            "mv" | "medium-voltage" => Ok(Scenario::Mv),
            _ => Err(Error::Unknown {
                kind: "cable",
                name: s.to_string(),
            }),
        }
    }
}

/// Lossless line matching a scenario's phase velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct CablePreset<T> {
    pub name: &'static str,
    pub params: CableParams<T>,
    pub v_p: T,
    pub z0: T,
}

impl<T: Real> CablePreset<T> {
    pub fn for_scenario(scenario: Scenario) -> Self {
        let v_p = lit(scenario.phase_velocity());
        let z0 = lit(scenario.impedance());
        Self {
            name: scenario.key(),
            params: CableParams::lossless(z0, v_p).expect("preset constants are positive"),
            v_p,
            z0,
        }
    }
}

pub fn preset_cable<T: Real>(name: &str) -> Result<CablePreset<T>> {
    Ok(CablePreset::for_scenario(name.parse()?))
}

/// Library holding the `lv` and `mv` presets, for topology documents.
pub fn cable_library<T: Real>() -> CableLibrary<T> {
    let mut lib = CableLibrary::new();
    for s in Scenario::ALL {
        lib.insert(s.key(), CablePreset::<T>::for_scenario(s).params);
    }
    lib
}
