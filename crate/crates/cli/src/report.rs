//! JSON shapes printed by the subcommands. Every type parses back into
//! itself; `schemas/report.schema.json` describes the same shapes.

use std::collections::BTreeMap;

use cmrank::oracle::OracleReport;
use cmrank::rim::canonical_rotation;
use cmrank::structure::StructureReport;
use cmrank::Rank2Module;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleOut {
    pub n: usize,
    pub k: usize,
    pub profile: String,
    pub b_tuple: Vec<String>,
    pub trunc_order: usize,
    /// Rotation of `profile` whose label sequence is smallest.
    pub canonical_profile: String,
    /// Every label of `profile` minus this shift (mod n) gives `canonical_profile`.
    pub rotation: usize,
}

impl ModuleOut {
    pub fn new(m: &Rank2Module) -> Self {
        let (canonical, shift) = canonical_rotation(m.profile());
        ModuleOut {
            n: m.n(),
            k: m.k(),
            profile: m.profile().to_string(),
            b_tuple: m.b().to_literals(),
            trunc_order: m.order(),
            canonical_profile: canonical.to_string(),
            rotation: shift,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessOut {
    Idempotent { family: Vec<Vec<Vec<String>>> },
    Theorem { name: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureOut {
    pub verdict: String,
    pub case: String,
    pub summands: Option<[String; 2]>,
    pub s_vector: Option<Vec<usize>>,
    pub iso_key: String,
    pub witness: WitnessOut,
    pub theorem: String,
}

impl From<&StructureReport> for StructureOut {
    fn from(r: &StructureReport) -> Self {
        let value = serde_json::to_value(r).expect("report serializes");
        serde_json::from_value(value).expect("report matches StructureOut")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Agreement {
    #[serde(rename = "AGREE")]
    Agree,
    #[serde(rename = "DISAGREE")]
    Disagree,
}

impl Agreement {
    pub fn from_bool(same: bool) -> Self {
        if same {
            Agreement::Agree
        } else {
            Agreement::Disagree
        }
    }
}

impl std::fmt::Display for Agreement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Agreement::Agree => "AGREE",
            Agreement::Disagree => "DISAGREE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOut {
    pub command: String,
    pub module: ModuleOut,
    pub structure: Option<StructureOut>,
    /// Why the box-sum criteria did not apply, when they did not.
    pub not_applicable: Option<String>,
    pub oracle: Option<OracleReport>,
    pub verdict: String,
    pub summands: Option<[String; 2]>,
    pub agreement: Option<Agreement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoOut {
    pub command: String,
    pub module_1: ModuleOut,
    pub module_2: ModuleOut,
    pub verdict: String,
    /// `explicit`, `iso-keys` or `oracle`.
    pub method: String,
    pub key_1: Option<String>,
    pub key_2: Option<String>,
    pub not_applicable: Option<String>,
    pub base_vertex: Option<usize>,
    pub family: Option<Vec<Vec<Vec<String>>>>,
    pub commutes: Option<bool>,
    pub oracle_isomorphic: Option<bool>,
    pub agreement: Option<Agreement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub profile: String,
    pub box_sizes: Vec<usize>,
    pub tuples: usize,
    pub sampled: bool,
    pub indecomposable: usize,
    pub decomposable: usize,
    /// Theorem keys of the indecomposable tuples, with multiplicities.
    pub keys: BTreeMap<String, usize>,
    /// Indecomposables whose class the oracle had to decide.
    pub oracle_keyed: usize,
    pub classes: usize,
    pub expected_classes: Option<usize>,
    pub disagreements: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateOut {
    pub command: String,
    pub k: usize,
    pub n: usize,
    pub range: [i64; 2],
    pub seed: Option<u64>,
    pub trunc_order: usize,
    pub profiles: Vec<CensusRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountOut {
    pub command: String,
    pub sizes: [usize; 3],
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleOut {
    pub command: String,
    pub module: ModuleOut,
    pub oracle: OracleReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteLine {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteOut {
    pub command: String,
    pub trunc_order: Option<usize>,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<SuiteLine>,
}
