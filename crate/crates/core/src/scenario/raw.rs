//! Serde schema for scenario bundles.
//!
//! Scenario files are strict JSON with a mandatory `schema_version`. Every
//! number that is not a structural integer (dimension, degree, exponents) is
//! written as a string — `"p/q"` or `"p"` — so no precision is lost and no
//! floating-point literal can sneak in. Unknown fields are rejected.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScenario {
    pub schema_version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub dimension: u32,
    pub total_volume: String,
    pub polarization: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinate_system: Option<RawCoordinateSystem>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weight_vectors: Vec<RawWeightVector>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub charts: Vec<RawChart>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub intersection_forms: Vec<RawForm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub volumes: Vec<RawVolume>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chains: Vec<RawChain>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_map: Option<RawDeltaMap>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ratio_functions: Vec<RawRatio>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kss_range: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone_bound: Option<RawConeBound>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub soliton: Option<RawSoliton>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automorphism: Option<RawAutomorphism>,
    /// Name of the degree-4 form the parametric divisor family contracts
    /// against, when the scenario supports it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parametric_form: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCoordinateSystem {
    pub names: Vec<String>,
    /// Coordinate whose image is the origin.
    pub origin: String,
    /// Coordinates mapping to the standard basis vectors, in order.
    pub basis: Vec<String>,
    /// Images of the remaining coordinates.
    pub images: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_volume: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawWeightVector {
    pub name: String,
    pub weights: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawChart {
    pub name: String,
    pub denominator: String,
    pub coords: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawForm {
    pub name: String,
    pub degree: u32,
    pub basis: Vec<String>,
    pub entries: Vec<RawFormEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFormEntry {
    pub classes: Vec<String>,
    pub value: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A polynomial as a list of `{coeff, exps}` terms.
pub type RawPoly = Vec<RawTerm>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTerm {
    pub coeff: String,
    pub exps: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawHalfspace {
    pub normal: Vec<String>,
    pub offset: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawVolume {
    pub name: String,
    pub parameters: Vec<String>,
    pub piece_dim: u32,
    pub pieces: Vec<RawPiece>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPiece {
    pub cell: Vec<RawHalfspace>,
    pub vol: RawPoly,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivation: Option<RawDerivation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDerivation {
    pub form: String,
    pub expr: BTreeMap<String, RawPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<BTreeMap<String, RawPoly>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawChain {
    pub name: String,
    pub scale: String,
    pub steps: Vec<RawStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawStep {
    pub name: String,
    pub kind: String,
    pub log_discrepancy: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary: Vec<RawBoundary>,
    pub volume: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBoundary {
    pub coeff: String,
    pub ord: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDeltaMap {
    pub scale: String,
    pub regions: Vec<RawDeltaRegion>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDeltaRegion {
    pub label: String,
    pub cone: Vec<RawHalfspace>,
    /// Homogeneous numerator coefficients on (a, b).
    pub a: [String; 2],
    /// Homogeneous denominator coefficients on (a, b).
    pub s: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRatio {
    pub name: String,
    pub numerator: RawPoly,
    pub denominator: RawPoly,
    pub interval: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConeBound {
    pub r: String,
    pub n: u32,
    pub delta_x: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_v: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSoliton {
    pub volume: String,
    pub alpha: String,
    pub beta: String,
    pub moment: [String; 2],
    pub constant: String,
    pub chain: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAutomorphism {
    pub size: u32,
    pub j: Vec<Vec<String>>,
    pub j2: Vec<Vec<String>>,
    pub expected_dimension: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}
