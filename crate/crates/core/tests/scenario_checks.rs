//! Scenario-level checks that exercise the builtin bundles end to end:
//! shifted weights, G-functions, charts, the Okounkov hull, symmetry-algebra
//! shape, soliton reparameterization and convexity.

use std::cmp::Ordering;

use num_traits::Zero;

use kstab_core::azchain::{PiecewiseVolume, VolumePiece};
use kstab_core::exact::decimal::Decimal;
use kstab_core::exact::poly::Poly;
use kstab_core::exact::rational::{rat, rat_i, Rat};
use kstab_core::exact::{constrained_matrix_space, AffineFunction};
use kstab_core::intersect::{expand_power, DivisorExpression};
use kstab_core::polytope::convex_hull;
use kstab_core::scenario::load_scenario;
use kstab_core::soliton::{h_functional, solve_soliton_candidate, weighted_volume, DHMeasure};
use kstab_core::valuation::{g_function, log_discrepancy, s_invariant, shift_weight};

fn weights_of(s: &kstab_core::scenario::Scenario, name: &str) -> Vec<Rat> {
    s.weight_vectors[name].weights.clone()
}

#[test]
fn shifted_weights_match_the_recorded_values() {
    let s = load_scenario("m4").unwrap();
    let zeta = shift_weight(&weights_of(&s, "zeta"));
    assert_eq!(
        zeta.values,
        [6, 5, 3, 4, 4, 1, 2, 0].map(rat_i).to_vec()
    );
    let eta = shift_weight(&weights_of(&s, "eta"));
    assert_eq!(
        eta.values,
        [4, 5, 2, 1, 6, 4, 3, 0].map(rat_i).to_vec()
    );
    // both minimized exactly at the chart denominator coordinate
    let cs = s.coordinate_system.as_ref().unwrap();
    let x9 = cs.index_of("X9").unwrap();
    assert_eq!(zeta.minimizers.iter().copied().collect::<Vec<_>>(), vec![x9]);
    assert_eq!(eta.minimizers.iter().copied().collect::<Vec<_>>(), vec![x9]);
}

#[test]
fn g_functions_and_log_discrepancies() {
    let s = load_scenario("m4").unwrap();
    let cs = s.coordinate_system.as_ref().unwrap();
    let zeta = shift_weight(&weights_of(&s, "zeta"));
    let eta = shift_weight(&weights_of(&s, "eta"));

    let g_zeta = g_function(&zeta, cs).unwrap();
    assert_eq!(
        g_zeta,
        AffineFunction::new(vec![rat_i(3), rat_i(4), rat_i(1), rat_i(2)], rat_i(0))
    );
    let g_eta = g_function(&eta, cs).unwrap();
    assert_eq!(
        g_eta,
        AffineFunction::new(vec![rat_i(2), rat_i(1), rat_i(4), rat_i(3)], rat_i(0))
    );

    // log discrepancy over the central chart
    let u9 = s.charts.iter().find(|c| c.name == "U9").unwrap();
    assert_eq!(log_discrepancy(&zeta, u9, cs.names()).unwrap(), rat_i(10));

    // the combination 2·eta - zeta is centered in another chart with A = 16,
    // and its G-function is the matching combination plus a shift constant
    let combo: Vec<Rat> = weights_of(&s, "eta")
        .iter()
        .zip(&weights_of(&s, "zeta"))
        .map(|(e, z)| rat_i(2) * e.clone() - z.clone())
        .collect();
    let shifted = shift_weight(&combo);
    let u3 = s.charts.iter().find(|c| c.name == "U3").unwrap();
    assert_eq!(log_discrepancy(&shifted, u3, cs.names()).unwrap(), rat_i(16));
    let g_combo = g_function(&shifted, cs).unwrap();
    let expected = g_eta
        .scale(&rat_i(2))
        .add(&g_zeta.scale(&rat_i(-1)))
        .add_constant(&rat_i(2));
    assert_eq!(g_combo, expected);

    // complementary weights: G + G(-) is the constant 6, so the S-invariants
    // in the base polarization sum to 6
    let neg: Vec<Rat> = weights_of(&s, "zeta").iter().map(|w| -w.clone()).collect();
    let g_neg = g_function(&shift_weight(&neg), cs).unwrap();
    let sum = g_zeta.add(&g_neg);
    assert_eq!(
        sum,
        AffineFunction::new(vec![Rat::zero(); 4], rat_i(6))
    );
    // zero G-function integrates to zero
    let zero_g = AffineFunction::zero(4);
    assert!(s_invariant(&zero_g, cs).unwrap().is_zero());
}

#[test]
fn okounkov_hull_needs_the_origin() {
    let s = load_scenario("m4").unwrap();
    let cs = s.coordinate_system.as_ref().unwrap();
    assert_eq!(cs.body_volume(), &rat(5, 24));
    // dropping the origin leaves a strictly smaller hull
    let origin = vec![Rat::zero(); 4];
    let without: Vec<Vec<Rat>> = cs
        .images()
        .iter()
        .filter(|img| **img != origin)
        .cloned()
        .collect();
    assert_eq!(without.len(), 7);
    let smaller = convex_hull(&without).unwrap().volume();
    assert!(smaller < rat(5, 24));
    assert_eq!(smaller, rat(1, 6));
}

#[test]
fn first_regime_specialization_matches() {
    // the two-parameter moving-regime expansion at v = 0 is the univariate
    // first-step volume on the ample range
    let s = load_scenario("m4").unwrap();
    let form = &s.forms["ES"];
    let vars = ["u"];
    let u = Poly::var(&vars, "u");
    let one = Poly::constant(&vars, rat_i(1));
    let expr = DivisorExpression::new(&[
        ("H", one.scale(&rat_i(2)).sub(&u)),
        ("F", u.sub(&one)),
    ]);
    let got = expand_power(form, &expr).unwrap();
    let want = Poly::from_terms(&vars, &[(rat_i(3), vec![1]), (rat_i(-2), vec![3])]);
    assert_eq!(got, want);
}

#[test]
fn symmetry_algebra_shape_m4() {
    let s = load_scenario("m4").unwrap();
    let a = s.automorphism.as_ref().unwrap();
    let basis = constrained_matrix_space(&a.j, &a.j2).unwrap();
    assert_eq!(basis.len(), 8);
    for q in &basis {
        // every solution satisfies both span-membership constraints exactly
        assert!(kstab_core::exact::autspace::satisfies_span_constraint(q, &a.j, &a.j, &a.j2));
        assert!(kstab_core::exact::autspace::satisfies_span_constraint(q, &a.j2, &a.j, &a.j2));
        // the solved family keeps a zero lower-left block and tied entries
        for i in 3..5 {
            for j in 0..3 {
                assert!(q[(i, j)].is_zero(), "lower-left block must vanish");
            }
        }
        assert!(q[(0, 2)].is_zero());
        assert!(q[(2, 0)].is_zero());
        assert_eq!(q[(0, 3)], q[(0, 3)].clone());
        assert_eq!(q[(1, 3)], q[(0, 4)].clone(), "repeated free parameter");
        assert_eq!(q[(2, 3)], q[(1, 4)].clone(), "repeated free parameter");
        // diagonal relations against the lower-right 2x2 block
        let a_param = (rat_i(2) * q[(4, 4)].clone() - q[(3, 3)].clone()) / rat_i(3);
        let d_param = (rat_i(2) * q[(3, 3)].clone() - q[(4, 4)].clone()) / rat_i(3);
        assert_eq!(q[(0, 0)], -rat_i(2) * d_param.clone());
        assert_eq!(q[(1, 1)], -a_param.clone() - d_param);
        assert_eq!(q[(2, 2)], -rat_i(2) * a_param);
    }
}

#[test]
fn symmetry_algebra_shape_m5() {
    let s = load_scenario("m5").unwrap();
    let a = s.automorphism.as_ref().unwrap();
    let basis = constrained_matrix_space(&a.j, &a.j2).unwrap();
    assert_eq!(basis.len(), 15);
    for q in &basis {
        assert!(kstab_core::exact::autspace::satisfies_span_constraint(q, &a.j, &a.j, &a.j2));
        // first column below the corner vanishes
        for i in 1..5 {
            assert!(q[(i, 0)].is_zero());
        }
        // tied parameters across the blocks
        assert_eq!(q[(1, 4)], q[(2, 3)].clone());
        assert_eq!(q[(3, 2)], q[(4, 1)].clone());
        assert_eq!(q[(3, 4)], -q[(2, 1)].clone());
        assert_eq!(q[(4, 3)], -q[(1, 2)].clone());
        // lower-right diagonal ties to the corner and the middle block
        let lam = -q[(0, 0)].clone() / rat_i(2);
        assert_eq!(q[(3, 3)], lam.clone() - q[(1, 1)].clone());
        assert_eq!(q[(4, 4)], lam - q[(2, 2)].clone());
    }
}

#[test]
fn weighted_volume_at_zero_matches_the_exact_value() {
    let s = load_scenario("m4").unwrap();
    let cfg = s.soliton.as_ref().unwrap();
    let v = weighted_volume(&cfg.measure, &s.volumes["W_ES"], &Decimal::zero(30), 3).unwrap();
    assert_eq!(v, Decimal::from_rat(&rat(5, 24), 30));
    // and the H-functional at zero is the log of the full constant-scaled mass
    let h = h_functional(&cfg.measure, &Decimal::zero(30));
    let want = Decimal::from_rat(&(rat_i(81) * rat(5, 4)), 30).ln();
    assert_eq!(h, want);
}

#[test]
fn soliton_candidate_is_reparameterization_invariant() {
    // solving in the moment variable directly gives the identical bracket
    // function, hence the identical decimal output
    let s = load_scenario("m4").unwrap();
    let m = &s.soliton.as_ref().unwrap().measure;
    let direct = solve_soliton_candidate(m, 30).unwrap();

    // substitute w = 3u - 2 exactly: cells map through the affine change and
    // the density picks up the constant Jacobian (which cancels)
    let wvar = ["w"];
    let w = Poly::var(&wvar, "w");
    let u_of_w = w
        .add(&Poly::constant(&wvar, rat_i(2)))
        .scale(&rat(1, 3));
    let mapped_pieces: Vec<VolumePiece> = m
        .base
        .pieces
        .iter()
        .map(|piece| {
            let (lo, hi) = piece.cell.axis_range(0);
            let cell = kstab_core::polytope::Polytope::from_halfspaces(
                1,
                &[
                    kstab_core::polytope::Halfspace::new(
                        vec![rat_i(-1)],
                        -(lo * rat_i(3) - rat_i(2)),
                    ),
                    kstab_core::polytope::Halfspace::new(
                        vec![rat_i(1)],
                        hi * rat_i(3) - rat_i(2),
                    ),
                ],
            )
            .unwrap();
            VolumePiece {
                cell,
                // pushforward density: substitute and multiply the Jacobian
                vol: piece
                    .vol
                    .substitute(&wvar, &[u_of_w.clone()])
                    .scale(&rat(1, 3)),
            }
        })
        .collect();
    let transformed = DHMeasure {
        base: PiecewiseVolume {
            params: vec!["w".into()],
            piece_dim: m.base.piece_dim,
            pieces: mapped_pieces,
        },
        alpha: rat_i(1),
        beta: rat_i(0),
        moment: m.moment.clone(),
        constant: m.constant.clone(),
    };
    transformed.validate().unwrap();
    let via_moment = solve_soliton_candidate(&transformed, 30).unwrap();
    assert_eq!(direct, via_moment);
}

#[test]
fn h_functional_is_convex_near_the_candidate() {
    for name in ["m4", "m5"] {
        let s = load_scenario(name).unwrap();
        let m = &s.soliton.as_ref().unwrap().measure;
        let xi = solve_soliton_candidate(m, 30).unwrap();
        let h = Decimal::parse("0.01").unwrap().rescale(xi.scale());
        let grid: Vec<Decimal> = (-2i64..=2)
            .map(|k| xi.add(&h.mul(&Decimal::from_i64(k, xi.scale()))))
            .collect();
        let values: Vec<Decimal> = grid.iter().map(|x| h_functional(m, x)).collect();
        for w in values.windows(3) {
            let second = w[2].sub(&w[1]).sub(&w[1].sub(&w[0]));
            assert_eq!(second.is_negative(), false, "{name}: second difference");
            assert!(second.cmp(&Decimal::zero(second.scale())) == Ordering::Greater);
        }
        // the candidate sits at the minimum of the grid
        let center = &values[2];
        for v in [&values[0], &values[1], &values[3], &values[4]] {
            assert!(v.cmp(center) != Ordering::Less, "{name}: grid minimum");
        }
    }
}

#[test]
fn monte_carlo_oracle_for_the_g_integral() {
    // seeded rejection sampling over the bounding box pins the exact value
    // of the body integral of the first G-function
    let s = load_scenario("m4").unwrap();
    let cs = s.coordinate_system.as_ref().unwrap();
    let g = g_function(&shift_weight(&weights_of(&s, "zeta")), cs).unwrap();
    // exact value: S·vol/r = (48/5)·(5/24)/3
    let exact = s_invariant(&g, cs).unwrap() * cs.body_volume().clone() / s.polarization.clone();
    assert_eq!(exact, rat(2, 3));

    let mut state = 0x00c0ffee_u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let body = cs.body();
    let gf = |p: &[f64]| 3.0 * p[0] + 4.0 * p[1] + p[2] + 2.0 * p[3];
    let inside = |p: &[f64]| {
        body.halfspaces().iter().all(|h| {
            let dot: f64 = h
                .normal
                .iter()
                .zip(p)
                .map(|(n, x)| {
                    let nf = n.numer().to_string().parse::<f64>().unwrap()
                        / n.denom().to_string().parse::<f64>().unwrap();
                    nf * x
                })
                .sum();
            let off = h.offset.numer().to_string().parse::<f64>().unwrap()
                / h.offset.denom().to_string().parse::<f64>().unwrap();
            dot <= off + 1e-12
        })
    };
    let n = 2_000_000usize;
    let mut acc = 0.0;
    for _ in 0..n {
        let p = [next(), next(), next(), 2.0 * next()];
        if inside(&p) {
            acc += gf(&p);
        }
    }
    let estimate = acc * 2.0 / n as f64; // box volume 1·1·1·2
    assert!(
        (estimate - 2.0 / 3.0).abs() < 0.01,
        "Monte-Carlo estimate {estimate} strayed from 2/3"
    );
}

#[test]
fn g_function_validation_names_the_offender() {
    let s = load_scenario("m4").unwrap();
    let cs = s.coordinate_system.as_ref().unwrap();
    // a weight vector breaking the linear relation at the first coordinate
    let mut w = vec![Rat::zero(); cs.names().len()];
    w[cs.index_of("X0").unwrap()] = rat_i(1);
    let err = g_function(&shift_weight(&w), cs).unwrap_err();
    match err {
        kstab_core::valuation::ValuationError::GFunctionMismatch { coordinate, .. } => {
            assert_eq!(coordinate, "X0");
        }
        other => panic!("expected a G-function mismatch, got {other:?}"),
    }
}
