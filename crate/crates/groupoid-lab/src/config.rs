//! Experiment configuration: one TOML file per run, sections per auditor,
//! all randomness flowing from a single seed.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::twisted::Truncation;
use crate::words::{FiniteSubset, GroupElement, GroupSpec};

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub scale: ScaleSection,
    pub group: GroupSection,
    pub measure: MeasureSection,
    pub folner: FolnerSection,
    pub audit: AuditSection,
    pub pi: PiSection,
    pub witness: WitnessSection,
    pub odometer: OdometerSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 0,
            scale: ScaleSection::default(),
            group: GroupSection::default(),
            measure: MeasureSection::default(),
            folner: FolnerSection::default(),
            audit: AuditSection::default(),
            pi: PiSection::default(),
            witness: WitnessSection::default(),
            odometer: OdometerSection::default(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScaleSection {
    pub alphabet: u8,
    pub depth: usize,
    pub window_radius: u32,
    pub twist_radius: u32,
}

impl Default for ScaleSection {
    fn default() -> Self {
        ScaleSection {
            alphabet: 2,
            depth: 2,
            window_radius: 2,
            twist_radius: 1,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GroupSection {
    /// "free" or "integers"
    pub kind: String,
    pub rank: u8,
}

impl Default for GroupSection {
    fn default() -> Self {
        GroupSection {
            kind: "free".to_string(),
            rank: 2,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeasureSection {
    /// use the full pairwise σ_{u,v} family instead of the reduced chain
    pub all_pairs: bool,
    /// constrained-coordinate cap for invariance-check enumeration
    pub max_constraints: usize,
    /// window coordinates for the twisted solve, as group tokens
    pub window: Vec<String>,
}

impl Default for MeasureSection {
    fn default() -> Self {
        MeasureSection {
            all_pairs: false,
            max_constraints: 3,
            window: vec!["e".to_string(), "a".to_string()],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FolnerSection {
    pub radius: u32,
    pub max_size: usize,
    /// interval lengths tested for the integer control
    pub interval_max: i64,
}

impl Default for FolnerSection {
    fn default() -> Self {
        FolnerSection {
            radius: 2,
            max_size: 6,
            interval_max: 50,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuditSection {
    /// tokens for B; empty means generators and inverses
    pub test_set: Vec<String>,
    /// "random", "en-product", or "shift-orbit"
    pub fiber_family: String,
    pub fiber_count: usize,
    /// largest orbit-label size certified by the Følner stage
    pub max_label: usize,
    /// shift-orbit lengths 2..=interval_max for the integer control
    pub interval_max: i64,
    /// tail bound for en-product fibers
    pub en_k: usize,
    /// coordinates for en-product fibers, as group tokens
    pub en_indices: Vec<String>,
    /// Følner lower bound to assert, as "p/q"; omitted = no bound check
    pub delta: Option<String>,
}

impl Default for AuditSection {
    fn default() -> Self {
        AuditSection {
            test_set: Vec::new(),
            fiber_family: "random".to_string(),
            fiber_count: 100,
            max_label: 6,
            interval_max: 50,
            en_k: 2,
            en_indices: vec!["e".to_string()],
            delta: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PiSection {
    /// cylinder prefixes for U; empty = the full unit space
    pub u: Vec<String>,
    /// cylinder prefixes for V
    pub v: Vec<String>,
}

impl Default for PiSection {
    fn default() -> Self {
        PiSection {
            u: Vec::new(),
            v: vec!["0".to_string()],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WitnessSection {
    pub count: usize,
}

impl Default for WitnessSection {
    fn default() -> Self {
        WitnessSection { count: 100 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OdometerSection {
    /// "dyadic" or "f2-s3"
    pub chain: String,
    pub moduli: Vec<usize>,
    pub fault_inject: bool,
}

impl Default for OdometerSection {
    fn default() -> Self {
        OdometerSection {
            chain: "dyadic".to_string(),
            moduli: vec![2, 4, 8, 16],
            fault_inject: false,
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("config parse: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("reading {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn validate(&self) -> Result<()> {
        if self.scale.alphabet < 2 {
            return Err(Error::Config("scale.alphabet must be >= 2".to_string()));
        }
        if self.scale.depth == 0 {
            return Err(Error::Config("scale.depth must be >= 1".to_string()));
        }
        match self.group.kind.as_str() {
            "free" => {
                if self.group.rank == 0 || self.group.rank > 26 {
                    return Err(Error::Config("group.rank must be in 1..=26".to_string()));
                }
            }
            "integers" => {}
            other => {
                return Err(Error::Config(format!(
                    "group.kind must be \"free\" or \"integers\", got {other:?}"
                )))
            }
        }
        match self.audit.fiber_family.as_str() {
            "random" | "en-product" | "shift-orbit" => {}
            other => {
                return Err(Error::Config(format!(
                    "audit.fiber_family {other:?} unknown"
                )))
            }
        }
        match self.odometer.chain.as_str() {
            "dyadic" | "f2-s3" => {}
            other => return Err(Error::Config(format!("odometer.chain {other:?} unknown"))),
        }
        Ok(())
    }

    pub fn group_spec(&self) -> GroupSpec {
        match self.group.kind.as_str() {
            "integers" => GroupSpec::Integers,
            _ => GroupSpec::Free(self.group.rank),
        }
    }

    pub fn truncation(&self) -> Result<Truncation> {
        Truncation::new(
            self.scale.alphabet,
            self.scale.depth,
            self.scale.window_radius,
            self.scale.twist_radius,
            self.group_spec(),
        )
    }

    pub fn test_set(&self) -> Result<FiniteSubset> {
        let spec = self.group_spec();
        if self.audit.test_set.is_empty() {
            return Ok(spec.symmetric_generators().into_iter().collect());
        }
        self.audit
            .test_set
            .iter()
            .map(|t| GroupElement::parse(spec, t))
            .collect()
    }

    pub fn measure_window(&self) -> Result<Vec<GroupElement>> {
        let spec = self.group_spec();
        self.measure
            .window
            .iter()
            .map(|t| GroupElement::parse(spec, t))
            .collect()
    }

    pub fn delta(&self) -> Result<Option<Rational>> {
        self.audit
            .delta
            .as_deref()
            .map(rational::parse)
            .transpose()
    }
}
