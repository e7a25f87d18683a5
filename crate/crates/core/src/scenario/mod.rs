//! Declarative scenario bundles: coordinate systems, Okounkov data,
//! intersection tables, piecewise volumes, chains, ratio functions and
//! soliton configuration, with schema validation and builtin bundles.
//!
//! Loading is double-entry bookkeeping: every stored volume polynomial is
//! re-derived from its intersection-table record and compared exactly, the
//! delta map is cross-checked against chart/weight computations at interior
//! sample points, cells are checked pairwise interior-disjoint, and the
//! Okounkov body volume is compared against the bundle's expected value.
//! A bundle loads iff every mandatory check passes.

pub mod raw;

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::azchain::{
    adjusted_log_discrepancy, BoundaryAdjustment, Chain, FiltrationStep, PiecewiseVolume,
    StepKind, VolumePiece,
};
use crate::exact::linalg::Mat;
use crate::exact::poly::Poly;
use crate::exact::rational::{parse_rat, rat_str, Rat};
use crate::exact::{constrained_matrix_space, AffineFunction};
use crate::intersect::{restricted_volume_from_table, DivisorExpression, IntersectionForm};
use crate::polytope::{
    convex_hull, validate_cell_union, CellUnion, Halfspace, Polytope,
};
use crate::soliton::DHMeasure;
use crate::stability::{ConeBoundInput, RatioFunction};
use crate::valuation::{
    g_function, log_discrepancy, s_invariant, shift_weight, Chart, CoordinateSystem, DeltaMap,
    DeltaRegion, WeightVector,
};

use raw::*;

const M4_JSON: &str = include_str!("builtin/m4.json");
const M5_JSON: &str = include_str!("builtin/m5.json");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    fn pass(&mut self, name: &str, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed: true,
            detail: detail.into(),
        });
    }

    fn fail(&mut self, name: &str, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed: false,
            detail: detail.into(),
        });
    }

    fn check(&mut self, name: &str, result: Result<String, String>) {
        match result {
            Ok(d) => self.pass(name, d),
            Err(d) => self.fail(name, d),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {} — {}",
                if c.passed { "ok  " } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    /// Malformed JSON or schema mismatch.
    Parse(String),
    /// A floating-point literal appeared (exactness forbids them).
    FloatLiteral { path: String },
    /// A field failed to convert (bad rational, missing reference, …).
    Field { path: String, message: String },
    /// All mandatory validation checks, at least one failed.
    Validation(ValidationReport),
    UnknownSource(String),
    Io(String),
}

impl std::fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScenarioError::Parse(m) => write!(f, "parse error: {m}"),
            ScenarioError::FloatLiteral { path } => {
                write!(f, "floating-point literal at {path}; write numbers as \"p/q\" strings")
            }
            ScenarioError::Field { path, message } => write!(f, "{path}: {message}"),
            ScenarioError::Validation(report) => {
                write!(f, "scenario validation failed:\n{report}")
            }
            ScenarioError::UnknownSource(s) => {
                write!(f, "`{s}` is neither a builtin scenario nor a readable file")
            }
            ScenarioError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for ScenarioError {}

/// Soliton configuration resolved against the scenario's chains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolitonConfig {
    pub measure: DHMeasure,
    pub chain: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismData {
    pub j: Mat,
    pub j2: Mat,
    pub expected_dimension: usize,
}

/// A fully validated scenario bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub dimension: u32,
    pub total_volume: Rat,
    pub polarization: Rat,
    pub coordinate_system: Option<CoordinateSystem>,
    pub weight_vectors: BTreeMap<String, WeightVector>,
    pub charts: Vec<Chart>,
    pub forms: BTreeMap<String, IntersectionForm>,
    pub volumes: BTreeMap<String, PiecewiseVolume>,
    pub chains: BTreeMap<String, Chain>,
    pub delta_map: Option<DeltaMap>,
    pub ratios: Vec<RatioFunction>,
    pub kss_range: Option<(Rat, Rat)>,
    pub cone_bound: Option<ConeBoundInput>,
    pub soliton: Option<SolitonConfig>,
    pub automorphism: Option<AutomorphismData>,
    pub parametric_form: Option<String>,
    raw: RawScenario,
    report: ValidationReport,
}

impl Scenario {
    pub fn validation(&self) -> &ValidationReport {
        &self.report
    }

    /// Serialize back to the on-disk JSON form.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.raw).expect("raw scenario serializes")
    }
}

/// Builtin scenario names, sorted.
pub fn builtin_names() -> Vec<&'static str> {
    vec!["m4", "m5"]
}

fn builtin_source(name: &str) -> Option<&'static str> {
    match name {
        "m4" => Some(M4_JSON),
        "m5" => Some(M5_JSON),
        _ => None,
    }
}

/// A name-to-source table holding the builtins plus user registrations.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    user: BTreeMap<String, String>,
}

impl Registry {
    pub fn with_builtins() -> Self {
        Registry::default()
    }

    pub fn register(&mut self, name: &str, json: String) {
        self.user.insert(name.to_string(), json);
    }

    /// Sorted, stable listing of every registered scenario name.
    pub fn list(&self) -> Vec<String> {
        let mut names: Vec<String> = builtin_names().iter().map(|s| s.to_string()).collect();
        names.extend(self.user.keys().cloned());
        names.sort();
        names.dedup();
        names
    }

    pub fn load(&self, name: &str) -> Result<Scenario, ScenarioError> {
        if let Some(src) = self.user.get(name) {
            return load_str(src);
        }
        if let Some(src) = builtin_source(name) {
            return load_str(src);
        }
        Err(ScenarioError::UnknownSource(name.to_string()))
    }
}

/// Load a builtin by name, or a bundle from a file path.
pub fn load_scenario(source: &str) -> Result<Scenario, ScenarioError> {
    if let Some(src) = builtin_source(source) {
        return load_str(src);
    }
    match std::fs::read_to_string(source) {
        Ok(text) => load_str(&text),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            Err(ScenarioError::UnknownSource(source.to_string()))
        }
        Err(e) => Err(ScenarioError::Io(e.to_string())),
    }
}

/// Parse and validate a scenario bundle from JSON text.
pub fn load_str(text: &str) -> Result<Scenario, ScenarioError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
    scan_for_floats(&value, "$")?;
    let raw: RawScenario =
        serde_json::from_value(value).map_err(|e| ScenarioError::Parse(e.to_string()))?;
    build(raw)
}

fn scan_for_floats(v: &serde_json::Value, path: &str) -> Result<(), ScenarioError> {
    match v {
        serde_json::Value::Number(n) => {
            if !n.is_u64() && !n.is_i64() {
                return Err(ScenarioError::FloatLiteral { path: path.into() });
            }
            Ok(())
        }
        serde_json::Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                scan_for_floats(item, &format!("{path}[{i}]"))?;
            }
            Ok(())
        }
        serde_json::Value::Object(map) => {
            for (k, item) in map {
                scan_for_floats(item, &format!("{path}.{k}"))?;
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

fn field_err(path: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Field {
        path: path.to_string(),
        message: message.into(),
    }
}

fn rat_field(s: &str, path: &str) -> Result<Rat, ScenarioError> {
    parse_rat(s).map_err(|e| field_err(path, e.to_string()))
}

fn poly_field(terms: &RawPoly, vars: &[&str], path: &str) -> Result<Poly, ScenarioError> {
    let mut converted = Vec::new();
    for (i, t) in terms.iter().enumerate() {
        if t.exps.len() != vars.len() {
            return Err(field_err(
                &format!("{path}[{i}]"),
                format!("expected {} exponents, got {}", vars.len(), t.exps.len()),
            ));
        }
        converted.push((rat_field(&t.coeff, &format!("{path}[{i}].coeff"))?, t.exps.clone()));
    }
    Ok(Poly::from_terms(vars, &converted))
}

fn halfspace_field(h: &RawHalfspace, dim: usize, path: &str) -> Result<Halfspace, ScenarioError> {
    if h.normal.len() != dim {
        return Err(field_err(
            path,
            format!("normal has {} entries in dimension {dim}", h.normal.len()),
        ));
    }
    let normal = h
        .normal
        .iter()
        .enumerate()
        .map(|(i, s)| rat_field(s, &format!("{path}.normal[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Halfspace::new(normal, rat_field(&h.offset, &format!("{path}.offset"))?))
}

fn build(raw: RawScenario) -> Result<Scenario, ScenarioError> {
    let mut report = ValidationReport::default();
    if raw.schema_version != 1 {
        return Err(field_err(
            "$.schema_version",
            format!("unsupported schema version {}", raw.schema_version),
        ));
    }
    report.pass("schema-version", "version 1");

    let dimension = raw.dimension;
    let total_volume = rat_field(&raw.total_volume, "$.total_volume")?;
    let polarization = rat_field(&raw.polarization, "$.polarization")?;

    // ---- intersection forms ----
    let mut forms: BTreeMap<String, IntersectionForm> = BTreeMap::new();
    for f in &raw.intersection_forms {
        let path = format!("$.intersection_forms[{}]", f.name);
        let basis: Vec<&str> = f.basis.iter().map(|s| s.as_str()).collect();
        let mut entries = Vec::new();
        for e in &f.entries {
            entries.push((
                e.classes.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
                rat_field(&e.value, &format!("{path}.entries.value"))?,
            ));
        }
        match IntersectionForm::new(f.degree, &basis, &entries) {
            Ok(form) => {
                report.pass(
                    &format!("form:{}", f.name),
                    format!("degree {} table on {} classes complete", f.degree, basis.len()),
                );
                forms.insert(f.name.clone(), form);
            }
            Err(e) => {
                report.fail(&format!("form:{}", f.name), e.to_string());
            }
        }
    }

    // ---- piecewise volumes ----
    let mut volumes: BTreeMap<String, PiecewiseVolume> = BTreeMap::new();
    for v in &raw.volumes {
        let path = format!("$.volumes[{}]", v.name);
        let vars: Vec<&str> = v.parameters.iter().map(|s| s.as_str()).collect();
        let mut pieces = Vec::new();
        let mut broken = false;
        for (pi, p) in v.pieces.iter().enumerate() {
            let ppath = format!("{path}.pieces[{pi}]");
            let hs = p
                .cell
                .iter()
                .enumerate()
                .map(|(hi, h)| halfspace_field(h, vars.len(), &format!("{ppath}.cell[{hi}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let cell = match Polytope::from_halfspaces(vars.len(), &hs) {
                Ok(c) => c,
                Err(e) => {
                    report.fail(&format!("volume:{}:cells", v.name), format!("piece {pi}: {e}"));
                    broken = true;
                    continue;
                }
            };
            let vol = poly_field(&p.vol, &vars, &format!("{ppath}.vol"))?;
            pieces.push(VolumePiece { cell, vol });
        }
        if broken {
            continue;
        }
        let pv = PiecewiseVolume {
            params: v.parameters.clone(),
            piece_dim: v.piece_dim,
            pieces,
        };

        // interior disjointness
        let union = CellUnion {
            cells: pv.pieces.iter().map(|p| p.cell.clone()).collect(),
        };
        match validate_cell_union(&union) {
            Ok(r) if r.passes() => report.pass(
                &format!("volume:{}:cells-disjoint", v.name),
                format!("{} cells, total volume {}", pv.pieces.len(), rat_str(&r.total_volume)),
            ),
            Ok(r) => report.fail(
                &format!("volume:{}:cells-disjoint", v.name),
                format!("max pairwise overlap {}", rat_str(&r.max_overlap)),
            ),
            Err(e) => report.fail(&format!("volume:{}:cells-disjoint", v.name), e.to_string()),
        }

        // nonnegativity spot check at vertices and vertex centroids
        let mut neg_spot = None;
        for (pi, piece) in pv.pieces.iter().enumerate() {
            let mut centroid = vec![Rat::zero(); vars.len()];
            for vert in piece.cell.vertices() {
                if piece.vol.eval(vert).is_negative() {
                    neg_spot = Some(format!("piece {pi} at a cell vertex"));
                }
                for (k, c) in vert.iter().enumerate() {
                    centroid[k] += c.clone();
                }
            }
            let count = Rat::from_integer((piece.cell.vertices().len() as i64).into());
            for c in centroid.iter_mut() {
                *c /= count.clone();
            }
            if piece.vol.eval(&centroid).is_negative() {
                neg_spot = Some(format!("piece {pi} at the vertex centroid"));
            }
        }
        match neg_spot {
            None => report.pass(
                &format!("volume:{}:nonnegative", v.name),
                "no negative density at any vertex or centroid",
            ),
            Some(d) => report.fail(&format!("volume:{}:nonnegative", v.name), d),
        }

        // derivation double-entry: expansion against the table must equal
        // the stored polynomial exactly
        for (pi, p) in v.pieces.iter().enumerate() {
            let Some(d) = &p.derivation else { continue };
            let check_name = format!("volume:{}:derivation[{pi}]", v.name);
            let Some(form) = forms.get(&d.form) else {
                report.fail(&check_name, format!("unknown form `{}`", d.form));
                continue;
            };
            let mut expr_coeffs = Vec::new();
            for (class, terms) in &d.expr {
                expr_coeffs.push((
                    class.as_str(),
                    poly_field(terms, &vars, &format!("{path}.derivation.expr.{class}"))?,
                ));
            }
            let expr = DivisorExpression::new(&expr_coeffs);
            let fixed = match &d.fixed {
                None => None,
                Some(fixed_map) => {
                    let mut coeffs = Vec::new();
                    for (class, terms) in fixed_map {
                        coeffs.push((
                            class.as_str(),
                            poly_field(terms, &vars, &format!("{path}.derivation.fixed.{class}"))?,
                        ));
                    }
                    Some(DivisorExpression::new(&coeffs))
                }
            };
            match restricted_volume_from_table(form, &expr, fixed.as_ref()) {
                Ok(expanded) => {
                    if expanded == pv.pieces[pi].vol {
                        report.pass(&check_name, format!("matches expansion over `{}`", d.form));
                    } else {
                        report.fail(
                            &check_name,
                            format!("stored polynomial differs from the `{}` expansion", d.form),
                        );
                    }
                }
                Err(e) => report.fail(&check_name, e.to_string()),
            }
        }

        volumes.insert(v.name.clone(), pv);
    }

    // ---- chains ----
    let mut chains: BTreeMap<String, Chain> = BTreeMap::new();
    for c in &raw.chains {
        let check_name = format!("chain:{}:structure", c.name);
        let scale = rat_field(&c.scale, &format!("$.chains[{}].scale", c.name))?;
        let mut steps = Vec::new();
        let mut prev_params: Option<Vec<String>> = None;
        let mut problem: Option<String> = None;
        for (si, s) in c.steps.iter().enumerate() {
            let kind = match s.kind.as_str() {
                "first" => StepKind::First,
                "refine" => StepKind::Refinement,
                other => {
                    problem = Some(format!("step `{}` has unknown kind `{other}`", s.name));
                    break;
                }
            };
            let Some(volume) = volumes.get(&s.volume) else {
                problem = Some(format!("step `{}` references unknown volume `{}`", s.name, s.volume));
                break;
            };
            if si == 0 && kind != StepKind::First {
                problem = Some("a chain starts with a first-kind step".into());
                break;
            }
            if si > 0 && kind != StepKind::Refinement {
                problem = Some("later chain steps are refinements".into());
                break;
            }
            // parameter lists extend by exactly one variable
            if let Some(prev) = &prev_params {
                let p = &volume.params;
                if p.len() != prev.len() + 1 || &p[..prev.len()] != prev.as_slice() {
                    problem = Some(format!(
                        "step `{}` parameters {:?} do not extend {:?}",
                        s.name, p, prev
                    ));
                    break;
                }
            }
            prev_params = Some(volume.params.clone());
            // first steps carry the parameter weight and volume a cycle of
            // dimension n-1; refinements volume k = n - m + 1
            let expected_k = match kind {
                StepKind::First => dimension - 1,
                StepKind::Refinement => dimension + 1 - volume.params.len() as u32,
            };
            if volume.piece_dim != expected_k {
                problem = Some(format!(
                    "step `{}`: piece_dim {} but n - m + 1 = {expected_k}",
                    s.name, volume.piece_dim
                ));
                break;
            }
            let boundary = s
                .boundary
                .iter()
                .enumerate()
                .map(|(bi, b)| {
                    Ok(BoundaryAdjustment {
                        coeff: rat_field(&b.coeff, &format!("boundary[{bi}].coeff"))?,
                        ord: rat_field(&b.ord, &format!("boundary[{bi}].ord"))?,
                    })
                })
                .collect::<Result<Vec<_>, ScenarioError>>()?;
            let step = FiltrationStep {
                name: s.name.clone(),
                kind,
                log_discrepancy: rat_field(
                    &s.log_discrepancy,
                    &format!("$.chains[{}].steps[{si}].log_discrepancy", c.name),
                )?,
                boundary,
                volume: volume.clone(),
            };
            if let Err(e) = adjusted_log_discrepancy(&step) {
                problem = Some(e.to_string());
                break;
            }
            steps.push(step);
        }
        match problem {
            None => {
                report.pass(&check_name, format!("{} steps", steps.len()));
                chains.insert(
                    c.name.clone(),
                    Chain {
                        name: c.name.clone(),
                        ambient_dim: dimension,
                        total_volume: total_volume.clone(),
                        scale,
                        steps,
                    },
                );
            }
            Some(p) => report.fail(&check_name, p),
        }
    }

    // ---- coordinate system ----
    let coordinate_system = match &raw.coordinate_system {
        None => None,
        Some(rcs) => {
            let dim = dimension as usize;
            let mut images: Vec<Vec<Rat>> = Vec::new();
            let mut ok = true;
            for n in &rcs.names {
                if n == &rcs.origin {
                    images.push(vec![Rat::zero(); dim]);
                } else if let Some(k) = rcs.basis.iter().position(|b| b == n) {
                    let mut e = vec![Rat::zero(); dim];
                    if k >= dim {
                        report.fail("coordinate-images", "more basis coordinates than dimensions");
                        ok = false;
                        break;
                    }
                    e[k] = Rat::one();
                    images.push(e);
                } else if let Some(raw_img) = rcs.images.get(n) {
                    let img = raw_img
                        .iter()
                        .enumerate()
                        .map(|(i, s)| rat_field(s, &format!("$.coordinate_system.images.{n}[{i}]")))
                        .collect::<Result<Vec<_>, _>>()?;
                    images.push(img);
                } else {
                    report.fail(
                        "coordinate-images",
                        format!("coordinate `{n}` has no image"),
                    );
                    ok = false;
                    break;
                }
            }
            if ok {
                match convex_hull(&images) {
                    Ok(body) => {
                        let vol = body.volume();
                        match CoordinateSystem::new(
                            rcs.names.clone(),
                            images,
                            body,
                            polarization.clone(),
                        ) {
                            Ok(cs) => {
                                report.pass(
                                    "coordinate-images",
                                    format!("{} coordinates, body volume {}", rcs.names.len(), rat_str(&vol)),
                                );
                                if let Some(expected) = &rcs.expected_volume {
                                    let expected = rat_field(expected, "$.coordinate_system.expected_volume")?;
                                    if expected == vol {
                                        report.pass(
                                            "okounkov-volume",
                                            format!("volume {}", rat_str(&vol)),
                                        );
                                    } else {
                                        report.fail(
                                            "okounkov-volume",
                                            format!(
                                                "expected {}, computed {}",
                                                rat_str(&expected),
                                                rat_str(&vol)
                                            ),
                                        );
                                    }
                                }
                                Some(cs)
                            }
                            Err(e) => {
                                report.fail("coordinate-images", e.to_string());
                                None
                            }
                        }
                    }
                    Err(e) => {
                        report.fail("coordinate-images", format!("hull: {e}"));
                        None
                    }
                }
            } else {
                None
            }
        }
    };

    // ---- weight vectors ----
    let mut weight_vectors: BTreeMap<String, WeightVector> = BTreeMap::new();
    for w in &raw.weight_vectors {
        let weights = w
            .weights
            .iter()
            .enumerate()
            .map(|(i, s)| rat_field(s, &format!("$.weight_vectors[{}][{i}]", w.name)))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(cs) = &coordinate_system {
            if weights.len() != cs.names().len() {
                report.fail(
                    "weight-arity",
                    format!(
                        "`{}` has {} weights for {} coordinates",
                        w.name,
                        weights.len(),
                        cs.names().len()
                    ),
                );
                continue;
            }
        }
        let lattice = match &w.lattice {
            None => None,
            Some([a, b]) => Some((
                rat_field(a, &format!("$.weight_vectors[{}].lattice[0]", w.name))?,
                rat_field(b, &format!("$.weight_vectors[{}].lattice[1]", w.name))?,
            )),
        };
        weight_vectors.insert(w.name.clone(), WeightVector { weights, lattice });
    }
    if !raw.weight_vectors.is_empty() {
        report.pass("weight-arity", format!("{} weight vectors", weight_vectors.len()));
    }

    // ---- charts ----
    let mut charts: Vec<Chart> = Vec::new();
    if let Some(cs) = &coordinate_system {
        let mut ok = true;
        for ch in &raw.charts {
            let Some(denominator) = cs.index_of(&ch.denominator) else {
                report.fail("chart-coords", format!("chart `{}`: unknown coordinate `{}`", ch.name, ch.denominator));
                ok = false;
                continue;
            };
            let mut coords = Vec::new();
            for c in &ch.coords {
                match cs.index_of(c) {
                    Some(i) => coords.push(i),
                    None => {
                        report.fail("chart-coords", format!("chart `{}`: unknown coordinate `{c}`", ch.name));
                        ok = false;
                    }
                }
            }
            if coords.len() != dimension as usize {
                report.fail(
                    "chart-coords",
                    format!("chart `{}` has {} coordinates in dimension {}", ch.name, coords.len(), dimension),
                );
                ok = false;
                continue;
            }
            charts.push(Chart {
                name: ch.name.clone(),
                denominator,
                coords,
            });
        }
        if ok && !raw.charts.is_empty() {
            report.pass("chart-coords", format!("{} charts resolved", charts.len()));
        }

        // G-function consistency for every named weight vector
        for (name, w) in &weight_vectors {
            let shifted = shift_weight(&w.weights);
            match g_function(&shifted, cs) {
                Ok(_) => report.pass(
                    &format!("g-function:{name}"),
                    "consistent on all coordinate images",
                ),
                Err(e) => report.fail(&format!("g-function:{name}"), e.to_string()),
            }
        }
    }

    // ---- delta map ----
    let delta_map = match &raw.delta_map {
        None => None,
        Some(rm) => {
            let scale = rat_field(&rm.scale, "$.delta_map.scale")?;
            let mut regions = Vec::new();
            for (ri, r) in rm.regions.iter().enumerate() {
                let cone = r
                    .cone
                    .iter()
                    .enumerate()
                    .map(|(hi, h)| {
                        halfspace_field(h, 2, &format!("$.delta_map.regions[{ri}].cone[{hi}]"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                regions.push(DeltaRegion {
                    label: r.label.clone(),
                    cone,
                    a_form: (
                        rat_field(&r.a[0], &format!("$.delta_map.regions[{ri}].a[0]"))?,
                        rat_field(&r.a[1], &format!("$.delta_map.regions[{ri}].a[1]"))?,
                    ),
                    s_form: (
                        rat_field(&r.s[0], &format!("$.delta_map.regions[{ri}].s[0]"))?,
                        rat_field(&r.s[1], &format!("$.delta_map.regions[{ri}].s[1]"))?,
                    ),
                });
            }
            let map = DeltaMap { regions, scale };
            match map.validate() {
                Ok(()) => report.pass(
                    "delta-map:structure",
                    format!("{} regions cover the plane and agree on boundaries", map.regions.len()),
                ),
                Err(e) => report.fail("delta-map:structure", e.to_string()),
            }
            Some(map)
        }
    };

    // cross-check the delta map against chart/weight computations
    if let (Some(map), Some(cs)) = (&delta_map, &coordinate_system) {
        let basis_10 = weight_vectors
            .values()
            .find(|w| w.lattice == Some((Rat::one(), Rat::zero())));
        let basis_01 = weight_vectors
            .values()
            .find(|w| w.lattice == Some((Rat::zero(), Rat::one())));
        match (basis_10, basis_01) {
            (Some(w10), Some(w01)) => {
                let mut detail = Vec::new();
                let mut failure = None;
                'regions: for (ri, samples) in map.region_interior_samples().iter().enumerate() {
                    for p in samples {
                        let weights: Vec<Rat> = w10
                            .weights
                            .iter()
                            .zip(&w01.weights)
                            .map(|(x, y)| p.0.clone() * x.clone() + p.1.clone() * y.clone())
                            .collect();
                        let shifted = shift_weight(&weights);
                        let Some(chart) = charts
                            .iter()
                            .find(|c| shifted.minimizers.contains(&c.denominator))
                        else {
                            failure = Some(format!(
                                "no chart centered for the sample ({}, {})",
                                rat_str(&p.0),
                                rat_str(&p.1)
                            ));
                            break 'regions;
                        };
                        let a = match log_discrepancy(&shifted, chart, cs.names()) {
                            Ok(a) => a,
                            Err(e) => {
                                failure = Some(e.to_string());
                                break 'regions;
                            }
                        };
                        let g = match g_function(&shifted, cs) {
                            Ok(g) => g,
                            Err(e) => {
                                failure = Some(e.to_string());
                                break 'regions;
                            }
                        };
                        let s = match s_invariant(&g, cs) {
                            Ok(s) => s,
                            Err(e) => {
                                failure = Some(e.to_string());
                                break 'regions;
                            }
                        };
                        let from_weights = a / s;
                        let from_map = match map.delta_at(p) {
                            Ok(v) => v,
                            Err(e) => {
                                failure = Some(e.to_string());
                                break 'regions;
                            }
                        };
                        if from_weights != from_map {
                            failure = Some(format!(
                                "region {ri} sample ({}, {}): weights give {}, map gives {}",
                                rat_str(&p.0),
                                rat_str(&p.1),
                                rat_str(&from_weights),
                                rat_str(&from_map)
                            ));
                            break 'regions;
                        }
                    }
                    detail.push(format!("region {ri}: {} samples", samples.len()));
                }
                match failure {
                    None => report.pass("delta-map:weight-crosscheck", detail.join(", ")),
                    Some(f) => report.fail("delta-map:weight-crosscheck", f),
                }
            }
            _ => report.fail(
                "delta-map:weight-crosscheck",
                "need weight vectors tagged with lattice coordinates (1,0) and (0,1)",
            ),
        }
    }

    // ---- ratio functions ----
    let mut ratios = Vec::new();
    for r in &raw.ratio_functions {
        let interval = (
            rat_field(&r.interval[0], &format!("$.ratio_functions[{}].interval[0]", r.name))?,
            rat_field(&r.interval[1], &format!("$.ratio_functions[{}].interval[1]", r.name))?,
        );
        let ratio = RatioFunction {
            name: r.name.clone(),
            numerator: poly_field(&r.numerator, &["c"], &format!("$.ratio_functions[{}].numerator", r.name))?,
            denominator: poly_field(
                &r.denominator,
                &["c"],
                &format!("$.ratio_functions[{}].denominator", r.name),
            )?,
            interval,
        };
        match ratio.validate() {
            Ok(()) => report.pass(
                &format!("ratio:{}", r.name),
                "denominator sign is constant on the interval",
            ),
            Err(e) => report.fail(&format!("ratio:{}", r.name), e.to_string()),
        }
        ratios.push(ratio);
    }

    let kss_range = match &raw.kss_range {
        None => None,
        Some([lo, hi]) => Some((
            rat_field(lo, "$.kss_range[0]")?,
            rat_field(hi, "$.kss_range[1]")?,
        )),
    };

    let cone_bound = match &raw.cone_bound {
        None => None,
        Some(cb) => Some(ConeBoundInput {
            r: rat_field(&cb.r, "$.cone_bound.r")?,
            n: cb.n,
            delta_x: rat_field(&cb.delta_x, "$.cone_bound.delta_x")?,
            delta_v: match &cb.delta_v {
                None => None,
                Some(dv) => Some(rat_field(dv, "$.cone_bound.delta_v")?),
            },
        }),
    };

    // ---- soliton ----
    let soliton = match &raw.soliton {
        None => None,
        Some(rs) => {
            let measure_check = (|| -> Result<DHMeasure, String> {
                let base = volumes
                    .get(&rs.volume)
                    .ok_or_else(|| format!("unknown volume `{}`", rs.volume))?
                    .clone();
                if !chains.contains_key(&rs.chain) {
                    return Err(format!("unknown chain `{}`", rs.chain));
                }
                let m = DHMeasure {
                    base,
                    alpha: rat_field(&rs.alpha, "$.soliton.alpha").map_err(|e| e.to_string())?,
                    beta: rat_field(&rs.beta, "$.soliton.beta").map_err(|e| e.to_string())?,
                    moment: (
                        rat_field(&rs.moment[0], "$.soliton.moment[0]").map_err(|e| e.to_string())?,
                        rat_field(&rs.moment[1], "$.soliton.moment[1]").map_err(|e| e.to_string())?,
                    ),
                    constant: rat_field(&rs.constant, "$.soliton.constant").map_err(|e| e.to_string())?,
                };
                m.validate().map_err(|e| e.to_string())?;
                if !m.constant.is_positive() {
                    return Err("normalization constant must be positive".into());
                }
                Ok(m)
            })();
            match measure_check {
                Ok(measure) => {
                    report.pass(
                        "soliton:measure",
                        format!(
                            "moment interval [{}, {}] matches the support image",
                            rat_str(&measure.moment.0),
                            rat_str(&measure.moment.1)
                        ),
                    );
                    Some(SolitonConfig {
                        measure,
                        chain: rs.chain.clone(),
                    })
                }
                Err(e) => {
                    report.fail("soliton:measure", e);
                    None
                }
            }
        }
    };

    // ---- automorphism data ----
    let automorphism = match &raw.automorphism {
        None => None,
        Some(ra) => {
            let n = ra.size as usize;
            let parse_mat = |rows: &Vec<Vec<String>>, which: &str| -> Result<Mat, ScenarioError> {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(field_err(
                        &format!("$.automorphism.{which}"),
                        format!("expected a {n}×{n} matrix"),
                    ));
                }
                let mut m = Mat::zero(n, n);
                for (i, row) in rows.iter().enumerate() {
                    for (j, s) in row.iter().enumerate() {
                        m[(i, j)] = rat_field(s, &format!("$.automorphism.{which}[{i}][{j}]"))?;
                    }
                }
                Ok(m)
            };
            let j = parse_mat(&ra.j, "j")?;
            let j2 = parse_mat(&ra.j2, "j2")?;
            match constrained_matrix_space(&j, &j2) {
                Ok(basis) => {
                    if basis.len() == ra.expected_dimension as usize {
                        report.pass(
                            "automorphism:dimension",
                            format!("constraint space has dimension {}", basis.len()),
                        );
                    } else {
                        report.fail(
                            "automorphism:dimension",
                            format!(
                                "computed dimension {}, bundle records {}",
                                basis.len(),
                                ra.expected_dimension
                            ),
                        );
                    }
                }
                Err(e) => report.fail("automorphism:dimension", e.to_string()),
            }
            Some(AutomorphismData {
                j,
                j2,
                expected_dimension: ra.expected_dimension as usize,
            })
        }
    };

    // ---- parametric family hook ----
    if let Some(fname) = &raw.parametric_form {
        let result: Result<String, String> = match forms.get(fname) {
            None => Err(format!("unknown form `{fname}`")),
            Some(f) if f.degree() != 4 || f.basis().len() != 2 => Err(format!(
                "form `{fname}` must be a degree-4 table on two classes"
            )),
            Some(_) => Ok(format!("uses form `{fname}`")),
        };
        report.check("parametric-form", result);
    }

    // soliton config cross-reference: the weighted pipeline needs the chain's
    // first step to share the measure's base volume
    if let Some(cfg) = &soliton {
        if let Some(chain) = chains.get(&cfg.chain) {
            match chain.steps.first() {
                Some(first) if first.volume == cfg.measure.base => {
                    report.pass("soliton:chain", "measure base equals the chain's first volume")
                }
                Some(first) => report.fail(
                    "soliton:chain",
                    format!("measure base differs from step `{}` volume", first.name),
                ),
                None => report.fail("soliton:chain", "chain has no steps"),
            }
        }
    }

    if !report.passed() {
        return Err(ScenarioError::Validation(report));
    }

    Ok(Scenario {
        name: raw.name.clone(),
        dimension,
        total_volume,
        polarization,
        coordinate_system,
        weight_vectors,
        charts,
        forms,
        volumes,
        chains,
        delta_map,
        ratios,
        kss_range,
        cone_bound,
        soliton,
        automorphism,
        parametric_form: raw.parametric_form.clone(),
        raw,
        report,
    })
}

/// Re-export for callers that need an affine G-function type.
pub type GFunction = AffineFunction;
