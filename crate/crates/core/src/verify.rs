//! The end-to-end verification suite: one row per reproduced quantity, with
//! pinned expectations and tolerances. The CLI `verify` subcommand and the
//! acceptance test suite both run these rows.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::azchain::{chain_bound, parametric_z_s, s_first, s_refine};
use crate::exact::decimal::Decimal;
use crate::exact::exppoly::integrate_poly_exp;
use crate::exact::poly::Poly;
use crate::exact::rational::{rat, rat_i, rat_str, Rat};
use crate::intersect::{expand_power, DivisorExpression};
use crate::polytope::{validate_cell_union, CellUnion, Halfspace, Polytope};
use crate::scenario::{load_scenario, Scenario, ScenarioError};
use crate::soliton::{
    h_derivative, solve_soliton_candidate, weighted_chain_bound, weighted_s_at_zero,
    weighted_volume, SolitonError,
};
use crate::stability::{beta, cone_bound, kss_domain, wall_of, Wall};
use crate::valuation::{g_function, s_invariant, shift_weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Value printed in the source computation for this geometry.
    Reported,
    /// Value pinned from an independent oracle in this artifact.
    Derived,
    /// Hand-checkable value.
    Elementary,
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::Reported => "reported",
            Provenance::Derived => "derived",
            Provenance::Elementary => "elementary",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Row {
    pub id: String,
    pub criterion: u32,
    pub scenario: String,
    pub description: String,
    pub provenance: Provenance,
    pub expected: String,
    pub computed: String,
    pub passed: bool,
}

#[derive(Debug)]
pub enum VerifyError {
    Scenario(ScenarioError),
    Soliton(SolitonError),
    UnknownRow(String),
    Internal(String),
}

impl std::fmt::Display for VerifyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyError::Scenario(e) => write!(f, "{e}"),
            VerifyError::Soliton(e) => write!(f, "{e}"),
            VerifyError::UnknownRow(id) => write!(f, "no verification row named `{id}`"),
            VerifyError::Internal(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for VerifyError {}

impl From<ScenarioError> for VerifyError {
    fn from(e: ScenarioError) -> Self {
        VerifyError::Scenario(e)
    }
}

impl From<SolitonError> for VerifyError {
    fn from(e: SolitonError) -> Self {
        VerifyError::Soliton(e)
    }
}

/// Lazily computed per-scenario soliton quantities.
struct SolitonData {
    candidate: Decimal,
    weighted_total: Decimal,
    step_s: BTreeMap<String, Decimal>,
    chain_bound: Decimal,
}

pub struct VerifyContext {
    pub m4: Scenario,
    pub m5: Scenario,
    pub precision: u32,
    /// Replaces every approximate row tolerance when set.
    pub tol_override: Option<Decimal>,
    soliton: BTreeMap<String, SolitonData>,
}

impl VerifyContext {
    pub fn new(precision: u32) -> Result<Self, VerifyError> {
        Ok(VerifyContext {
            m4: load_scenario("m4")?,
            m5: load_scenario("m5")?,
            precision,
            tol_override: None,
            soliton: BTreeMap::new(),
        })
    }

    /// |got - expected| ≤ tol (or the override), formatted for the report.
    fn approx(&self, got: &Decimal, expected: &str, tol: &str) -> (String, String, bool) {
        let tolerance = match &self.tol_override {
            Some(t) => t.clone(),
            None => dec(tol),
        };
        let want = dec(expected);
        let diff = got.sub(&want).abs();
        let passed = diff.cmp(&tolerance) != std::cmp::Ordering::Greater;
        (
            format!("{expected} ± {}", tolerance.to_plain_string()),
            got.to_sig_string(17),
            passed,
        )
    }

    fn scenario(&self, name: &str) -> &Scenario {
        match name {
            "m4" => &self.m4,
            _ => &self.m5,
        }
    }

    fn soliton_data(&mut self, name: &str) -> Result<&SolitonData, VerifyError> {
        if !self.soliton.contains_key(name) {
            let scenario = self.scenario(name).clone();
            let cfg = scenario
                .soliton
                .as_ref()
                .ok_or_else(|| VerifyError::Internal(format!("{name} has no soliton data")))?;
            let chain = scenario
                .chains
                .get(&cfg.chain)
                .ok_or_else(|| VerifyError::Internal("missing soliton chain".into()))?;
            let candidate = solve_soliton_candidate(&cfg.measure, self.precision)?;
            let bound =
                weighted_chain_bound(chain, &cfg.measure, &scenario.polarization, &candidate)?;
            let first = chain.steps.first().expect("chain steps");
            let weighted_total = weighted_volume(
                &cfg.measure,
                &first.volume,
                &candidate,
                chain.ambient_dim - 1,
            )?;
            let mut step_s = BTreeMap::new();
            for (step, (sname, ratio)) in chain.steps.iter().zip(&bound.ratios) {
                // ratio = (A / r) / S^g, so recover S^g = (A / r) / ratio
                let a = crate::azchain::adjusted_log_discrepancy(step)
                    .map_err(SolitonError::from)?;
                let a_over_r = Decimal::from_rat(
                    &(a / scenario.polarization.clone()),
                    candidate.scale(),
                );
                step_s.insert(sname.clone(), a_over_r.div(ratio));
            }
            self.soliton.insert(
                name.to_string(),
                SolitonData {
                    candidate,
                    weighted_total,
                    step_s,
                    chain_bound: bound.bound,
                },
            );
        }
        Ok(&self.soliton[name])
    }
}

fn dec(s: &str) -> Decimal {
    Decimal::parse(s).expect("literal decimal")
}

fn exact_row(got: &Rat, expected: &Rat) -> (String, String, bool) {
    (rat_str(expected), rat_str(got), got == expected)
}

struct RowSpec {
    id: &'static str,
    criterion: u32,
    scenario: &'static str,
    description: &'static str,
    provenance: Provenance,
    run: fn(&mut VerifyContext) -> Result<(String, String, bool), VerifyError>,
}

fn negated(w: &[Rat]) -> Vec<Rat> {
    w.iter().map(|x| -x.clone()).collect()
}

fn s_of_weights(ctx: &VerifyContext, weights: &[Rat]) -> Result<Rat, VerifyError> {
    let cs = ctx
        .m4
        .coordinate_system
        .as_ref()
        .ok_or_else(|| VerifyError::Internal("m4 coordinate system missing".into()))?;
    let shifted = shift_weight(weights);
    let g = g_function(&shifted, cs).map_err(|e| VerifyError::Internal(e.to_string()))?;
    s_invariant(&g, cs).map_err(|e| VerifyError::Internal(e.to_string()))
}

fn rows() -> Vec<RowSpec> {
    vec![
        RowSpec {
            id: "okounkov-volume",
            criterion: 1,
            scenario: "m4",
            description: "volume of the Okounkov body",
            provenance: Provenance::Reported,
            run: |ctx| {
                let cs = ctx.m4.coordinate_system.as_ref().unwrap();
                Ok(exact_row(cs.body_volume(), &rat(5, 24)))
            },
        },
        RowSpec {
            id: "s-invariant-zeta",
            criterion: 2,
            scenario: "m4",
            description: "anticanonical S-invariant of the second torus weight",
            provenance: Provenance::Reported,
            run: |ctx| {
                let w = ctx.m4.weight_vectors["zeta"].weights.clone();
                Ok(exact_row(&s_of_weights(ctx, &w)?, &rat(48, 5)))
            },
        },
        RowSpec {
            id: "s-invariant-neg-zeta",
            criterion: 2,
            scenario: "m4",
            description: "anticanonical S-invariant of the opposite weight",
            provenance: Provenance::Reported,
            run: |ctx| {
                let w = negated(&ctx.m4.weight_vectors["zeta"].weights);
                Ok(exact_row(&s_of_weights(ctx, &w)?, &rat(42, 5)))
            },
        },
        RowSpec {
            id: "s-complement-identity",
            criterion: 2,
            scenario: "m4",
            description: "complementary weights sum to the degree in the base polarization",
            provenance: Provenance::Reported,
            run: |ctx| {
                let w = ctx.m4.weight_vectors["zeta"].weights.clone();
                let r = ctx.m4.polarization.clone();
                let sum = s_of_weights(ctx, &w)? / r.clone()
                    + s_of_weights(ctx, &negated(&w))? / r;
                Ok(exact_row(&sum, &rat_i(6)))
            },
        },
        RowSpec {
            id: "delta-at-zeta",
            criterion: 3,
            scenario: "m4",
            description: "delta at the ray (0, 1)",
            provenance: Provenance::Reported,
            run: |ctx| {
                let map = ctx.m4.delta_map.as_ref().unwrap();
                let got = map
                    .delta_at(&(Rat::zero(), Rat::one()))
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                Ok(exact_row(&got, &rat(25, 24)))
            },
        },
        RowSpec {
            id: "delta-at-neg-zeta",
            criterion: 3,
            scenario: "m4",
            description: "delta at the ray (0, -1)",
            provenance: Provenance::Reported,
            run: |ctx| {
                let map = ctx.m4.delta_map.as_ref().unwrap();
                let got = map
                    .delta_at(&(Rat::zero(), -Rat::one()))
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                Ok(exact_row(&got, &rat(20, 21)))
            },
        },
        RowSpec {
            id: "delta-at-diagonal",
            criterion: 3,
            scenario: "m4",
            description: "delta at the ray (-1, -1)",
            provenance: Provenance::Reported,
            run: |ctx| {
                let map = ctx.m4.delta_map.as_ref().unwrap();
                let got = map
                    .delta_at(&(-Rat::one(), -Rat::one()))
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                Ok(exact_row(&got, &rat(25, 27)))
            },
        },
        RowSpec {
            id: "delta-minimum",
            criterion: 3,
            scenario: "m4",
            description: "global minimum over rays, with its minimizer",
            provenance: Provenance::Reported,
            run: |ctx| {
                let map = ctx.m4.delta_map.as_ref().unwrap();
                let (value, rays) = map
                    .minimize()
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                let got = format!(
                    "{} at {}",
                    rat_str(&value),
                    rays.iter()
                        .map(|(a, b)| format!("({a}, {b})"))
                        .collect::<Vec<_>>()
                        .join(", ")
                );
                let passed = value == rat(25, 27)
                    && rays == vec![((-1).into(), (-1).into())];
                Ok(("25/27 at (-1, -1)".into(), got, passed))
            },
        },
        RowSpec {
            id: "delta-homogeneity",
            criterion: 3,
            scenario: "m4",
            description: "delta is invariant under positive rescaling of rays",
            provenance: Provenance::Elementary,
            run: |ctx| {
                let map = ctx.m4.delta_map.as_ref().unwrap();
                let points = [
                    (rat_i(1), rat_i(2)),
                    (rat_i(-3), rat_i(1)),
                    (rat_i(2), rat_i(-3)),
                    (rat_i(-1), rat_i(-5)),
                ];
                let scales = [rat(1, 2), rat(7, 3), rat_i(11)];
                let mut ok = true;
                for p in &points {
                    let base = map
                        .delta_at(p)
                        .map_err(|e| VerifyError::Internal(e.to_string()))?;
                    for k in &scales {
                        let q = (p.0.clone() * k.clone(), p.1.clone() * k.clone());
                        let scaled = map
                            .delta_at(&q)
                            .map_err(|e| VerifyError::Internal(e.to_string()))?;
                        ok &= scaled == base;
                    }
                }
                Ok((
                    "equal at every sampled rescaling".into(),
                    if ok { "equal".into() } else { "mismatch".into() },
                    ok,
                ))
            },
        },
        RowSpec {
            id: "delta-boundary-consistency",
            criterion: 3,
            scenario: "m4",
            description: "adjacent regions agree exactly on shared extreme rays",
            provenance: Provenance::Derived,
            run: |ctx| {
                let map = ctx.m4.delta_map.as_ref().unwrap();
                let ok = map.validate().is_ok();
                Ok((
                    "coverage and boundary agreement".into(),
                    if ok { "validated".into() } else { "violated".into() },
                    ok,
                ))
            },
        },
        RowSpec {
            id: "delta-submap-minimum",
            criterion: 3,
            scenario: "m4",
            description: "minimum over the two regions adjacent to the first lattice ray",
            provenance: Provenance::Derived,
            run: |ctx| {
                let map = ctx.m4.delta_map.as_ref().unwrap();
                let ray = (Rat::one(), Rat::zero());
                let idx: Vec<usize> = map
                    .regions
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| r.contains(&ray))
                    .map(|(i, _)| i)
                    .collect();
                let two_regions = idx.len() == 2;
                let (value, _) = map
                    .minimize_over(&idx)
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                Ok((
                    "25/24 over exactly two regions".into(),
                    format!("{} over {} regions", rat_str(&value), idx.len()),
                    two_regions && value == rat(25, 24),
                ))
            },
        },
        RowSpec {
            id: "expand-blowup-cubic",
            criterion: 4,
            scenario: "m4",
            description: "cubic expansion over the exceptional-threefold table",
            provenance: Provenance::Reported,
            run: |ctx| {
                let form = &ctx.m4.forms["ES"];
                let vars = ["u", "v"];
                let u = Poly::var(&vars, "u");
                let v = Poly::var(&vars, "v");
                let one = Poly::constant(&vars, Rat::one());
                let a = one.scale(&rat_i(2)).sub(&u);
                let b = one.sub(&u).add(&v);
                let expr = DivisorExpression::new(&[("H", a.clone()), ("F", b.neg())]);
                let got = expand_power(form, &expr)
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                let want = a
                    .pow(3)
                    .sub(&a.mul(&b.pow(2)).scale(&rat_i(9)))
                    .add(&b.pow(3).scale(&rat_i(10)));
                Ok((
                    "(2-u)^3 - 9(2-u)(1-u+v)^2 + 10(1-u+v)^3".into(),
                    if got == want { "identical polynomial".into() } else { format!("{got:?}") },
                    got == want,
                ))
            },
        },
        RowSpec {
            id: "expand-quartic",
            criterion: 4,
            scenario: "m5",
            description: "quartic self-intersection over the exceptional-fourfold table",
            provenance: Provenance::Reported,
            run: |ctx| {
                let form = &ctx.m5.forms["EW"];
                let t = Poly::var(&["t"], "t");
                let one = Poly::constant(&["t"], Rat::one());
                let expr = DivisorExpression::new(&[("s1", one), ("h", t.clone())]);
                let got = expand_power(form, &expr)
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                let want = t.scale(&rat_i(4)).sub(&t.pow(3).scale(&rat_i(4)));
                Ok((
                    "4t - 4t^3".into(),
                    if got == want { "identical polynomial".into() } else { format!("{got:?}") },
                    got == want,
                ))
            },
        },
        RowSpec {
            id: "expand-chain-displays",
            criterion: 4,
            scenario: "m5",
            description: "every stored chain volume equals its table expansion",
            provenance: Provenance::Reported,
            run: |ctx| {
                // the loader has verified each piece; re-assert via the reports
                let mut checked = 0usize;
                for scenario in [&ctx.m4, &ctx.m5] {
                    for c in &scenario.validation().checks {
                        if c.name.contains(":derivation[") {
                            if !c.passed {
                                return Ok((
                                    "all derivations match".into(),
                                    format!("{} failed", c.name),
                                    false,
                                ));
                            }
                            checked += 1;
                        }
                    }
                }
                Ok((
                    "all derivations match".into(),
                    format!("{checked} piece expansions match"),
                    checked >= 16,
                ))
            },
        },
        RowSpec {
            id: "s-first-plane",
            criterion: 5,
            scenario: "m4",
            description: "first-step S-invariant over the plane blowup",
            provenance: Provenance::Reported,
            run: |ctx| {
                let pv = &ctx.m4.volumes["W_ES"];
                let got = s_first(pv, &ctx.m4.total_volume, ctx.m4.dimension)
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                Ok(exact_row(&got, &rat(18, 25)))
            },
        },
        RowSpec {
            id: "s-refine-cubic-divisor",
            criterion: 5,
            scenario: "m4",
            description: "refinement S-invariant over the cubic-curve divisor",
            provenance: Provenance::Reported,
            run: |ctx| {
                let pv = &ctx.m4.volumes["W_ES_F"];
                let got = s_refine(pv, &ctx.m4.total_volume, ctx.m4.dimension)
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                Ok(exact_row(&got, &rat(1, 5)))
            },
        },
        RowSpec {
            id: "s-refine-tangency-curve",
            criterion: 5,
            scenario: "m4",
            description: "refinement S-invariant over the tangency curve",
            provenance: Provenance::Reported,
            run: |ctx| {
                let pv = &ctx.m4.volumes["W_F_C"];
                let got = s_refine(pv, &ctx.m4.total_volume, ctx.m4.dimension)
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                Ok(exact_row(&got, &rat(1, 5)))
            },
        },
        RowSpec {
            id: "s-first-threespace",
            criterion: 5,
            scenario: "m5",
            description: "first-step S-invariant over the 3-space blowup",
            provenance: Provenance::Reported,
            run: |ctx| {
                let pv = &ctx.m5.volumes["W_EW"];
                let got = s_first(pv, &ctx.m5.total_volume, ctx.m5.dimension)
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                Ok(exact_row(&got, &rat(8, 15)))
            },
        },
        RowSpec {
            id: "s-refine-line",
            criterion: 5,
            scenario: "m5",
            description: "refinement S-invariant over the contracted line",
            provenance: Provenance::Reported,
            run: |ctx| {
                let pv = &ctx.m5.volumes["W_EW_El"];
                let got = s_refine(pv, &ctx.m5.total_volume, ctx.m5.dimension)
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                Ok(exact_row(&got, &rat(23, 30)))
            },
        },
        RowSpec {
            id: "s-refine-curve",
            criterion: 5,
            scenario: "m5",
            description: "refinement S-invariant over the exceptional curve",
            provenance: Provenance::Reported,
            run: |ctx| {
                let pv = &ctx.m5.volumes["W_El_EC"];
                let got = s_refine(pv, &ctx.m5.total_volume, ctx.m5.dimension)
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                Ok(exact_row(&got, &rat(154, 405)))
            },
        },
        RowSpec {
            id: "s-refine-final-curve",
            criterion: 5,
            scenario: "m5",
            description: "refinement S-invariant over the final curve",
            provenance: Provenance::Reported,
            run: |ctx| {
                let pv = &ctx.m5.volumes["W_EC_Ct"];
                let got = s_refine(pv, &ctx.m5.total_volume, ctx.m5.dimension)
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                Ok(exact_row(&got, &rat(221, 2430)))
            },
        },
        RowSpec {
            id: "chain-plain-m4",
            criterion: 6,
            scenario: "m4",
            description: "plain chain lower bound and per-step ratios",
            provenance: Provenance::Reported,
            run: |ctx| {
                let b = chain_bound(&ctx.m4.chains["plain"])
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                let want = [rat(25, 9), rat_i(5), rat_i(5)];
                let passed = b.bound == rat(25, 9)
                    && b.ratios.iter().map(|(_, r)| r.clone()).collect::<Vec<_>>() == want;
                Ok((
                    "min{25/9, 5, 5} = 25/9".into(),
                    format!(
                        "min{{{}}} = {}",
                        b.ratios.iter().map(|(_, r)| rat_str(r)).collect::<Vec<_>>().join(", "),
                        rat_str(&b.bound)
                    ),
                    passed,
                ))
            },
        },
        RowSpec {
            id: "chain-pair-m4",
            criterion: 6,
            scenario: "m4",
            description: "chain bound with the invariant quadric at 1/9",
            provenance: Provenance::Reported,
            run: |ctx| {
                let b = chain_bound(&ctx.m4.chains["q0"])
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                let want = [rat_i(1), rat(9, 5), rat(7, 5)];
                let passed = b.bound == rat_i(1)
                    && b.ratios.iter().map(|(_, r)| r.clone()).collect::<Vec<_>>() == want;
                Ok((
                    "min{1, 9/5, 7/5} = 1".into(),
                    format!(
                        "min{{{}}} = {}",
                        b.ratios.iter().map(|(_, r)| rat_str(r)).collect::<Vec<_>>().join(", "),
                        rat_str(&b.bound)
                    ),
                    passed,
                ))
            },
        },
        RowSpec {
            id: "chain-pair-m5",
            criterion: 6,
            scenario: "m5",
            description: "chain bound with the invariant quadric at 1/8",
            provenance: Provenance::Reported,
            run: |ctx| {
                let b = chain_bound(&ctx.m5.chains["q0"])
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                let want = [rat_i(1), rat_i(1), rat(405, 308), rat(567, 221)];
                let passed = b.bound == rat_i(1)
                    && b.ratios.iter().map(|(_, r)| r.clone()).collect::<Vec<_>>() == want;
                Ok((
                    "min{1, 1, 405/308, 567/221} = 1".into(),
                    format!(
                        "min{{{}}} = {}",
                        b.ratios.iter().map(|(_, r)| rat_str(r)).collect::<Vec<_>>().join(", "),
                        rat_str(&b.bound)
                    ),
                    passed,
                ))
            },
        },
        RowSpec {
            id: "parametric-family",
            criterion: 6,
            scenario: "m5",
            description: "parametric S-invariant closed form over the sample pairs",
            provenance: Provenance::Reported,
            run: |ctx| {
                let form = &ctx.m5.forms[ctx.m5.parametric_form.as_deref().unwrap_or("EW")];
                let mut got = Vec::new();
                let mut passed = true;
                for (a, b) in [(1i64, 1i64), (2, 1), (3, 2), (5, 3)] {
                    let v = parametric_z_s(form, &rat_i(a), &rat_i(b))
                        .map_err(|e| VerifyError::Internal(e.to_string()))?;
                    passed &= v == rat(1, 6 * a);
                    got.push(format!("({a},{b})→{}", rat_str(&v)));
                }
                Ok((
                    "1/(6a) at (1,1), (2,1), (3,2), (5,3)".into(),
                    got.join("  "),
                    passed,
                ))
            },
        },
        RowSpec {
            id: "walls-m4",
            criterion: 7,
            scenario: "m4",
            description: "coefficient walls of the two ratio functions",
            provenance: Provenance::Reported,
            run: |ctx| {
                let walls: Vec<Option<Wall>> = ctx
                    .m4
                    .ratios
                    .iter()
                    .map(wall_of)
                    .collect::<Result<_, _>>()
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                let want = vec![
                    Some(Wall::Exact(rat(1, 9))),
                    Some(Wall::Exact(rat(7, 8))),
                ];
                let got = format!("{walls:?}");
                Ok(("1/9 and 7/8".into(), got, walls == want))
            },
        },
        RowSpec {
            id: "walls-m5",
            criterion: 7,
            scenario: "m5",
            description: "coefficient walls of the two ratio functions",
            provenance: Provenance::Reported,
            run: |ctx| {
                let walls: Vec<Option<Wall>> = ctx
                    .m5
                    .ratios
                    .iter()
                    .map(wall_of)
                    .collect::<Result<_, _>>()
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                let want = vec![
                    Some(Wall::Exact(rat(1, 8))),
                    Some(Wall::Exact(rat(4, 5))),
                ];
                let got = format!("{walls:?}");
                Ok(("1/8 and 4/5".into(), got, walls == want))
            },
        },
        RowSpec {
            id: "kss-domain-m4",
            criterion: 7,
            scenario: "m4",
            description: "semistable coefficient domain",
            provenance: Provenance::Reported,
            run: |ctx| {
                let range = ctx.m4.kss_range.clone().unwrap();
                let dom = kss_domain(&ctx.m4.ratios, &range)
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                let want = Some((rat(1, 9), rat(7, 8)));
                Ok((
                    "[1/9, 7/8]".into(),
                    match &dom {
                        Some((a, b)) => format!("[{}, {}]", rat_str(a), rat_str(b)),
                        None => "empty".into(),
                    },
                    dom == want,
                ))
            },
        },
        RowSpec {
            id: "kss-domain-m5",
            criterion: 7,
            scenario: "m5",
            description: "semistable coefficient domain",
            provenance: Provenance::Reported,
            run: |ctx| {
                let range = ctx.m5.kss_range.clone().unwrap();
                let dom = kss_domain(&ctx.m5.ratios, &range)
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                let want = Some((rat(1, 8), rat(4, 5)));
                Ok((
                    "[1/8, 4/5]".into(),
                    match &dom {
                        Some((a, b)) => format!("[{}, {}]", rat_str(a), rat_str(b)),
                        None => "empty".into(),
                    },
                    dom == want,
                ))
            },
        },
        RowSpec {
            id: "cone-bound-m4",
            criterion: 8,
            scenario: "m4",
            description: "cone-construction coefficient interval",
            provenance: Provenance::Reported,
            run: |ctx| {
                let got = cone_bound(ctx.m4.cone_bound.as_ref().unwrap());
                let want = Some((rat(1, 9), rat(7, 8)));
                Ok((
                    "(1/9, 7/8)".into(),
                    format!("{got:?}"),
                    got == want,
                ))
            },
        },
        RowSpec {
            id: "cone-bound-m5",
            criterion: 8,
            scenario: "m5",
            description: "cone-construction coefficient interval",
            provenance: Provenance::Reported,
            run: |ctx| {
                let got = cone_bound(ctx.m5.cone_bound.as_ref().unwrap());
                let want = Some((rat(1, 8), rat(4, 5)));
                Ok((
                    "(1/8, 4/5)".into(),
                    format!("{got:?}"),
                    got == want,
                ))
            },
        },
        RowSpec {
            id: "beta-plane",
            criterion: 9,
            scenario: "m4",
            description: "beta invariant of the plane blowup is negative",
            provenance: Provenance::Derived,
            run: |ctx| {
                let s = s_first(&ctx.m4.volumes["W_ES"], &ctx.m4.total_volume, ctx.m4.dimension)
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                let got = beta(&rat_i(2), &(s * ctx.m4.polarization.clone()));
                let passed = got == rat(-4, 25) && got.is_negative();
                Ok(("-4/25 (negative)".into(), rat_str(&got), passed))
            },
        },
        RowSpec {
            id: "beta-threespace",
            criterion: 9,
            scenario: "m5",
            description: "beta invariant of the 3-space blowup is negative",
            provenance: Provenance::Derived,
            run: |ctx| {
                let s = s_first(&ctx.m5.volumes["W_EW"], &ctx.m5.total_volume, ctx.m5.dimension)
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                let got = beta(&rat_i(2), &(s * ctx.m5.polarization.clone()));
                let passed = got == rat(-2, 15) && got.is_negative();
                Ok(("-2/15 (negative)".into(), rat_str(&got), passed))
            },
        },
        RowSpec {
            id: "aut-dim-m4",
            criterion: 10,
            scenario: "m4",
            description: "dimension of the constrained symmetry algebra",
            provenance: Provenance::Reported,
            run: |ctx| {
                let a = ctx.m4.automorphism.as_ref().unwrap();
                let basis = crate::exact::constrained_matrix_space(&a.j, &a.j2)
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                Ok(("8".into(), basis.len().to_string(), basis.len() == 8))
            },
        },
        RowSpec {
            id: "aut-dim-m5",
            criterion: 10,
            scenario: "m5",
            description: "dimension of the constrained symmetry algebra",
            provenance: Provenance::Derived,
            run: |ctx| {
                let a = ctx.m5.automorphism.as_ref().unwrap();
                let basis = crate::exact::constrained_matrix_space(&a.j, &a.j2)
                    .map_err(|e| VerifyError::Internal(e.to_string()))?;
                Ok(("15".into(), basis.len().to_string(), basis.len() == 15))
            },
        },
        RowSpec {
            id: "soliton-candidate-m4",
            criterion: 11,
            scenario: "m4",
            description: "minimizer of the H-functional (the recorded reference value satisfies \
                          the defining equation only to ~2e-7, so this pinned tolerance cannot \
                          be met by any faithful solver; see the solver-residual row)",
            provenance: Provenance::Reported,
            run: |ctx| {
                let xi = ctx.soliton_data("m4")?.candidate.clone();
                Ok(ctx.approx(&xi, "0.16838665311714196", "0.00000000001"))
            },
        },
        RowSpec {
            id: "soliton-candidate-m5",
            criterion: 11,
            scenario: "m5",
            description: "minimizer of the H-functional (the recorded reference value satisfies \
                          the defining equation only to ~2.5e-8, so this pinned tolerance cannot \
                          be met by any faithful solver; see the solver-residual row)",
            provenance: Provenance::Reported,
            run: |ctx| {
                let xi = ctx.soliton_data("m5")?.candidate.clone();
                Ok(ctx.approx(&xi, "0.1693945440748772", "0.000000000001"))
            },
        },
        RowSpec {
            id: "candidate-residual-comparison",
            criterion: 11,
            scenario: "m4",
            description: "the returned candidates solve the defining equations far more \
                          accurately than the recorded reference values do",
            provenance: Provenance::Derived,
            run: |ctx| {
                let mut ok = true;
                let mut notes = Vec::new();
                for (name, reference) in [
                    ("m4", "0.16838665311714196"),
                    ("m5", "0.1693945440748772"),
                ] {
                    let mine = ctx.soliton_data(name)?.candidate.clone();
                    let measure = ctx.scenario(name).soliton.as_ref().unwrap().measure.clone();
                    let eq = measure.candidate_equation();
                    let at_mine = eq.eval(&mine).abs();
                    let at_reference = eq.eval(&dec(reference).rescale(40)).abs();
                    // the solver's residual must beat the reference's by far
                    ok &= at_mine.cmp(&dec("0.0000000000001")) != std::cmp::Ordering::Greater;
                    ok &= at_reference.cmp(&dec("0.000000001")) == std::cmp::Ordering::Greater;
                    notes.push(format!(
                        "{name}: |eq| = {} at the solver output, {} at the reference",
                        at_mine.to_sig_string(2),
                        at_reference.to_sig_string(2)
                    ));
                }
                Ok((
                    "solver residual ≤ 1e-13; reference residual > 1e-9".into(),
                    notes.join("; "),
                    ok,
                ))
            },
        },
        RowSpec {
            id: "h-derivative-vanishes",
            criterion: 11,
            scenario: "m4",
            description: "H-functional derivative at the returned candidates",
            provenance: Provenance::Derived,
            run: |ctx| {
                let tol = dec("0.000000000001");
                let xi4 = ctx.soliton_data("m4")?.candidate.clone();
                let d4 = h_derivative(&ctx.m4.soliton.as_ref().unwrap().measure, &xi4).abs();
                let xi5 = ctx.soliton_data("m5")?.candidate.clone();
                let d5 = h_derivative(&ctx.m5.soliton.as_ref().unwrap().measure, &xi5).abs();
                let passed = d4.cmp(&tol) != std::cmp::Ordering::Greater
                    && d5.cmp(&tol) != std::cmp::Ordering::Greater;
                Ok((
                    "|H'| ≤ 1e-12 at both candidates".into(),
                    format!("{}, {}", d4.to_sig_string(3), d5.to_sig_string(3)),
                    passed,
                ))
            },
        },
        RowSpec {
            id: "normalization-invariance",
            criterion: 11,
            scenario: "m4",
            description: "candidate is bit-identical under rescaling the measure constant",
            provenance: Provenance::Elementary,
            run: |ctx| {
                let mut m = ctx.m4.soliton.as_ref().unwrap().measure.clone();
                let a = solve_soliton_candidate(&m, ctx.precision)?;
                m.constant = m.constant.clone() * rat(7, 3);
                let b = solve_soliton_candidate(&m, ctx.precision)?;
                Ok((
                    "identical decimals".into(),
                    if a == b { "identical".into() } else { "differ".into() },
                    a == b,
                ))
            },
        },
        RowSpec {
            id: "weighted-volume-m4",
            criterion: 12,
            scenario: "m4",
            description: "weighted total volume at the candidate",
            provenance: Provenance::Reported,
            run: |ctx| {
                let v = ctx.soliton_data("m4")?.weighted_total.clone();
                Ok(ctx.approx(&v, "0.2055698662861948", "0.000000000001"))
            },
        },
        RowSpec {
            id: "weighted-volume-m5",
            criterion: 12,
            scenario: "m5",
            description: "weighted total volume at the candidate",
            provenance: Provenance::Reported,
            run: |ctx| {
                let v = ctx.soliton_data("m5")?.weighted_total.clone();
                Ok(ctx.approx(&v, "0.04119805228615477", "0.000000000001"))
            },
        },
        RowSpec {
            id: "weighted-s-plane",
            criterion: 13,
            scenario: "m4",
            description: "weighted S of the first step",
            provenance: Provenance::Reported,
            run: |ctx| {
                let s = ctx.soliton_data("m4")?.step_s["E_S"].clone();
                Ok(ctx.approx(&s, "0.666666666666666666666666666667", "0.000000001"))
            },
        },
        RowSpec {
            id: "weighted-s-cubic-divisor",
            criterion: 13,
            scenario: "m4",
            description: "weighted S of the second step",
            provenance: Provenance::Reported,
            run: |ctx| {
                let s = ctx.soliton_data("m4")?.step_s["F"].clone();
                Ok(ctx.approx(&s, "0.179638", "0.000001"))
            },
        },
        RowSpec {
            id: "weighted-s-tangency-curve",
            criterion: 13,
            scenario: "m4",
            description: "weighted S of the third step",
            provenance: Provenance::Reported,
            run: |ctx| {
                let s = ctx.soliton_data("m4")?.step_s["C"].clone();
                Ok(ctx.approx(&s, "0.211933", "0.000001"))
            },
        },
        RowSpec {
            id: "weighted-s-threespace",
            criterion: 13,
            scenario: "m5",
            description: "weighted S of the first step",
            provenance: Provenance::Reported,
            run: |ctx| {
                let s = ctx.soliton_data("m5")?.step_s["E_W"].clone();
                Ok(ctx.approx(&s, "0.5", "0.000000001"))
            },
        },
        RowSpec {
            id: "weighted-s-line",
            criterion: 13,
            scenario: "m5",
            description: "weighted S of the second step",
            provenance: Provenance::Reported,
            run: |ctx| {
                let s = ctx.soliton_data("m5")?.step_s["E_l"].clone();
                Ok(ctx.approx(&s, "0.75", "0.000000001"))
            },
        },
        RowSpec {
            id: "weighted-s-curve",
            criterion: 13,
            scenario: "m5",
            description: "weighted S of the third step",
            provenance: Provenance::Reported,
            run: |ctx| {
                let s = ctx.soliton_data("m5")?.step_s["E_C"].clone();
                Ok(ctx.approx(&s, "0.390484", "0.000001"))
            },
        },
        RowSpec {
            id: "weighted-s-final-curve",
            criterion: 13,
            scenario: "m5",
            description: "weighted S of the fourth step; the recorded reference number for this \
                          one entry is normalized by the weight-one total volume rather than the \
                          weighted one, and is reproduced under that same convention here",
            provenance: Provenance::Reported,
            run: |ctx| {
                let data = ctx.soliton_data("m5")?;
                let sg = data.step_s["Ct"].clone();
                let vg = data.weighted_total.clone();
                // source convention: divide the weighted integral by V/n! = 1/24
                let source_convention = sg
                    .mul(&vg)
                    .mul(&Decimal::from_rat(&rat_i(24), vg.scale()));
                let (expected, _, passed) = ctx.approx(&source_convention, "0.089469", "0.000001");
                Ok((
                    expected,
                    format!(
                        "{} under the weight-one normalization ({} under the weighted one)",
                        source_convention.to_sig_string(17),
                        sg.to_sig_string(17)
                    ),
                    passed,
                ))
            },
        },
        RowSpec {
            id: "weighted-chain-m4",
            criterion: 14,
            scenario: "m4",
            description: "weighted chain minimum",
            provenance: Provenance::Reported,
            run: |ctx| {
                let b = ctx.soliton_data("m4")?.chain_bound.clone();
                Ok(ctx.approx(&b, "1", "0.000000001"))
            },
        },
        RowSpec {
            id: "weighted-chain-m5",
            criterion: 14,
            scenario: "m5",
            description: "weighted chain minimum",
            provenance: Provenance::Reported,
            run: |ctx| {
                let b = ctx.soliton_data("m5")?.chain_bound.clone();
                Ok(ctx.approx(&b, "1", "0.000000001"))
            },
        },
        RowSpec {
            id: "split-additivity",
            criterion: 15,
            scenario: "m4",
            description: "integrals add exactly across 100 random hyperplane splits",
            provenance: Provenance::Derived,
            run: |_| {
                let (ok, count) = split_additivity_suite(100);
                Ok((
                    "100 exact splits".into(),
                    format!("{count} splits, all exact: {ok}"),
                    ok,
                ))
            },
        },
        RowSpec {
            id: "quadrature-agreement",
            criterion: 15,
            scenario: "m4",
            description: "closed-form integrals match adaptive quadrature to 1e-12 relative",
            provenance: Provenance::Derived,
            run: |_| {
                let (ok, worst) = quadrature_suite(100, 20);
                Ok((
                    "relative error ≤ 1e-12 on 100 cases".into(),
                    format!("worst relative error {worst:.3e}"),
                    ok,
                ))
            },
        },
        RowSpec {
            id: "weighted-unweighted-zero",
            criterion: 15,
            scenario: "m4",
            description: "weight one collapses every weighted S to the unweighted value exactly",
            provenance: Provenance::Elementary,
            run: |ctx| {
                let mut ok = true;
                for name in ["m4", "m5"] {
                    let scenario = ctx.scenario(name);
                    let cfg = scenario.soliton.as_ref().unwrap();
                    let chain = &scenario.chains[&cfg.chain];
                    for step in &chain.steps {
                        let weighted = weighted_s_at_zero(chain, step)
                            .map_err(|e| VerifyError::Internal(e.to_string()))?;
                        let unweighted = chain
                            .step_s(step)
                            .map_err(|e| VerifyError::Internal(e.to_string()))?;
                        ok &= weighted == unweighted;
                    }
                }
                Ok((
                    "exact rational equality on every step".into(),
                    if ok { "equal".into() } else { "differ".into() },
                    ok,
                ))
            },
        },
        RowSpec {
            id: "region-disjointness",
            criterion: 15,
            scenario: "m4",
            description: "every encoded chamber union has exactly zero pairwise overlap",
            provenance: Provenance::Derived,
            run: |ctx| {
                let mut max = Rat::zero();
                let mut count = 0usize;
                for scenario in [&ctx.m4, &ctx.m5] {
                    for pv in scenario.volumes.values() {
                        let union = CellUnion {
                            cells: pv.pieces.iter().map(|p| p.cell.clone()).collect(),
                        };
                        let r = validate_cell_union(&union)
                            .map_err(|e| VerifyError::Internal(e.to_string()))?;
                        if r.max_overlap > max {
                            max = r.max_overlap.clone();
                        }
                        count += union.cells.len();
                    }
                }
                Ok((
                    "0".into(),
                    format!("max overlap {} across {count} cells", rat_str(&max)),
                    max.is_zero(),
                ))
            },
        },
    ]
}

/// Deterministic xorshift-style generator for the property suites.
struct Lcg(u64);

impl Lcg {
    fn new(seed: u64) -> Self {
        Lcg(seed.max(1))
    }

    fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next_u64() % ((hi - lo + 1) as u64)) as i64
    }

    fn rat(&mut self, num_range: i64, den_range: i64) -> Rat {
        rat(self.int(-num_range, num_range), self.int(1, den_range))
    }
}

/// Split random low-dimensional polytopes by random hyperplanes and check
/// that integrals add exactly.
fn split_additivity_suite(cases: usize) -> (bool, usize) {
    let mut rng = Lcg::new(0x5eed_1234_dead_beef);
    let mut done = 0usize;
    while done < cases {
        let dim = rng.int(2, 3) as usize;
        // random box [0, a_i] sheared by a random hull point set is overkill;
        // a box plus two random cuts already exercises every code path
        let mut hs = Vec::new();
        for i in 0..dim {
            let mut lo = vec![Rat::zero(); dim];
            lo[i] = rat_i(-1);
            hs.push(Halfspace::new(lo, Rat::zero()));
            let mut hi = vec![Rat::zero(); dim];
            hi[i] = Rat::one();
            hs.push(Halfspace::new(hi, rat(rng.int(1, 3), 1)));
        }
        let extra_normal: Vec<Rat> = (0..dim).map(|_| rng.rat(2, 2)).collect();
        if extra_normal.iter().any(|c| !c.is_zero()) {
            hs.push(Halfspace::new(extra_normal, rat(rng.int(1, 4), 1)));
        }
        let Ok(p) = Polytope::from_halfspaces(dim, &hs) else {
            continue;
        };
        // random polynomial of total degree ≤ 2
        let vars: Vec<String> = (0..dim).map(|i| format!("x{i}")).collect();
        let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let mut f = Poly::zero(&var_refs);
        for _ in 0..4 {
            let mut e = vec![0u32; dim];
            let v = rng.int(0, dim as i64 - 1) as usize;
            e[v] = rng.int(0, 2) as u32;
            f = f.add(&Poly::from_terms(&var_refs, &[(rng.rat(3, 3), e)]));
        }
        // hyperplane through an interior-ish point
        let normal: Vec<Rat> = (0..dim).map(|_| rng.rat(2, 2)).collect();
        if normal.iter().all(|c| c.is_zero()) {
            continue;
        }
        let centroid: Vec<Rat> = {
            let verts = p.vertices();
            let mut c = vec![Rat::zero(); dim];
            for v in verts {
                for (k, x) in v.iter().enumerate() {
                    c[k] += x.clone();
                }
            }
            let n = rat_i(verts.len() as i64);
            c.into_iter().map(|x| x / n.clone()).collect()
        };
        let offset: Rat = normal
            .iter()
            .zip(&centroid)
            .map(|(a, b)| a.clone() * b.clone())
            .sum();
        let left = Halfspace::new(normal.clone(), offset.clone());
        let right = Halfspace::new(normal.iter().map(|c| -c.clone()).collect(), -offset);
        let total = p.integrate(&f).expect("integrates");
        let mut sum = Rat::zero();
        for side in [left, right] {
            if let Ok(Some(piece)) = p.intersect_halfspace(&side) {
                sum += piece.integrate(&f).expect("integrates");
            }
        }
        if sum != total {
            return (false, done);
        }
        done += 1;
    }
    (true, done)
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let c = 0.5 * (a + b);
    let h = b - a;
    let (fa, fb, fc) = (f(a), f(b), f(c));
    let s = h / 6.0 * (fa + 4.0 * fc + fb);
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fb: f64,
        fc: f64,
        s: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let c = 0.5 * (a + b);
        let d = 0.5 * (a + c);
        let e = 0.5 * (c + b);
        let (fd, fe) = (f(d), f(e));
        let sl = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
        let sr = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
        let s2 = sl + sr;
        if depth == 0 || (s2 - s).abs() <= 15.0 * tol {
            s2 + (s2 - s) / 15.0
        } else {
            rec(f, a, c, fa, fc, fd, sl, tol / 2.0, depth - 1)
                + rec(f, c, b, fc, fb, fe, sr, tol / 2.0, depth - 1)
        }
    }
    rec(f, a, b, fa, fb, fc, s, tol, depth)
}

/// Random polynomial-times-exponential integrals against f64 quadrature.
fn quadrature_suite(cases: usize, evals_per_case: usize) -> (bool, f64) {
    let mut rng = Lcg::new(0xabcdef01_2345_6789);
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let deg = rng.int(0, 5) as usize;
        let coeffs: Vec<Rat> = (0..=deg).map(|_| rng.rat(3, 4)).collect();
        let q = Poly::from_terms(
            &["u"],
            &coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (c.clone(), vec![k as u32]))
                .collect::<Vec<_>>(),
        );
        let slope = if rng.int(0, 4) == 0 {
            Rat::zero()
        } else {
            rng.rat(2, 3)
        };
        let a = rng.rat(2, 2);
        let b = a.clone() + rat(rng.int(1, 4), rng.int(1, 2));
        let carrier = integrate_poly_exp(&q, &slope, (&a, &b));
        for _ in 0..evals_per_case {
            let xi_num = rng.int(-10, 10);
            if xi_num == 0 && !slope.is_zero() {
                continue;
            }
            let xi_rat = rat(xi_num, 10);
            let xi = Decimal::from_rat(&xi_rat, 40);
            let exact = if slope.is_zero() {
                carrier.as_rat().map(|r| Decimal::from_rat(&r, 40)).unwrap()
            } else if xi.is_zero() {
                continue;
            } else {
                carrier.eval(&xi)
            };
            let exact_f = exact.to_f64();
            let quad_tol = 1e-14 * exact_f.abs().max(1.0);
            let qf = {
                let coeffs_f: Vec<f64> = coeffs
                    .iter()
                    .map(|c| c.numer().to_string().parse::<f64>().unwrap()
                        / c.denom().to_string().parse::<f64>().unwrap())
                    .collect();
                let slope_f = slope.numer().to_string().parse::<f64>().unwrap()
                    / slope.denom().to_string().parse::<f64>().unwrap();
                let xi_f = xi_num as f64 / 10.0;
                let af = a.numer().to_string().parse::<f64>().unwrap()
                    / a.denom().to_string().parse::<f64>().unwrap();
                let bf = b.numer().to_string().parse::<f64>().unwrap()
                    / b.denom().to_string().parse::<f64>().unwrap();
                let f = move |u: f64| -> f64 {
                    let mut p = 0.0;
                    for c in coeffs_f.iter().rev() {
                        p = p * u + c;
                    }
                    p * (slope_f * u * xi_f).exp()
                };
                adaptive_simpson(&f, af, bf, quad_tol, 16)
            };
            let err = (exact_f - qf).abs() / exact_f.abs().max(1.0);
            if err > worst {
                worst = err;
            }
        }
    }
    (worst <= 1e-12, worst)
}

/// Run the verification rows, optionally filtered by scenario or row id.
pub fn run(
    scenario_filter: Option<&str>,
    only: Option<&str>,
    precision: u32,
) -> Result<Vec<Row>, VerifyError> {
    run_with_tolerance(scenario_filter, only, precision, None)
}

/// Like [`run`] with every approximate tolerance replaced by `tol_override`.
pub fn run_with_tolerance(
    scenario_filter: Option<&str>,
    only: Option<&str>,
    precision: u32,
    tol_override: Option<Decimal>,
) -> Result<Vec<Row>, VerifyError> {
    let mut ctx = VerifyContext::new(precision)?;
    ctx.tol_override = tol_override;
    let specs = rows();
    if let Some(id) = only {
        if !specs.iter().any(|s| s.id == id) {
            return Err(VerifyError::UnknownRow(id.to_string()));
        }
    }
    let mut out = Vec::new();
    for spec in specs {
        if let Some(filter) = scenario_filter {
            if filter != "all" && spec.scenario != filter {
                continue;
            }
        }
        if let Some(id) = only {
            if spec.id != id {
                continue;
            }
        }
        let (expected, computed, passed) = (spec.run)(&mut ctx)?;
        out.push(Row {
            id: spec.id.to_string(),
            criterion: spec.criterion,
            scenario: spec.scenario.to_string(),
            description: spec.description.to_string(),
            provenance: spec.provenance,
            expected,
            computed,
            passed,
        });
    }
    Ok(out)
}

/// All row ids, in suite order.
pub fn row_ids() -> Vec<&'static str> {
    rows().iter().map(|r| r.id).collect()
}
