//! Independent chamber oracle: the refinement-step integrals recomputed
//! from hand-built region data, entirely separate from the bundled JSON
//! encodings. Agreement of the two transcriptions pins the cell data.

use kstab_core::azchain::{s_refine, PiecewiseVolume, VolumePiece};
use kstab_core::exact::poly::Poly;
use kstab_core::exact::rational::{rat, rat_i, rat_str, Rat};

use kstab_core::polytope::{validate_cell_union, CellUnion, Halfspace, Polytope};

fn hs(normal: &[i64], offset: i64) -> Halfspace {
    Halfspace::new(normal.iter().map(|&c| rat_i(c)).collect(), rat_i(offset))
}

fn cell(dim: usize, rows: &[(&[i64], i64)]) -> Polytope {
    let hs: Vec<Halfspace> = rows.iter().map(|(n, o)| hs(n, *o)).collect();
    Polytope::from_halfspaces(dim, &hs).unwrap()
}

fn poly(vars: &[&str], terms: &[(i64, &[u32])]) -> Poly {
    Poly::from_terms(
        vars,
        &terms
            .iter()
            .map(|&(c, e)| (rat_i(c), e.to_vec()))
            .collect::<Vec<_>>(),
    )
}

/// base cells of the 3-parameter step in (t, s, r)
fn ec_cells() -> (Vec<Polytope>, Vec<Polytope>, Polytope, Polytope) {
    let a11 = cell(
        3,
        &[
            (&[0, 0, -1], 0),
            (&[0, -1, 1], 0),
            (&[-1, 1, 0], 0),
            (&[1, 1, 0], 1),
        ],
    );
    let a12 = cell(
        3,
        &[
            (&[0, 0, -1], 0),
            (&[-1, 1, 0], 0),
            (&[-1, -1, 0], -1),
            (&[1, 0, 1], 1),
            (&[0, 1, 0], 1),
            (&[1, 0, 0], 1),
        ],
    );
    let a21 = cell(
        3,
        &[
            (&[1, -1, 0], 0),
            (&[-1, 1, -1], 0),
            (&[1, 1, 0], 1),
            (&[0, -1, 1], 0),
            (&[-1, 0, 0], 0),
        ],
    );
    let a22 = cell(
        3,
        &[
            (&[1, -1, 0], 0),
            (&[-1, 1, -1], 0),
            (&[-1, -1, 0], -1),
            (&[1, 0, 1], 1),
            (&[0, 1, 0], 1),
        ],
    );
    let b1 = cell(
        3,
        &[
            (&[0, 1, 0], 1),
            (&[-1, -1, 0], -1),
            (&[-1, 0, -1], -1),
            (&[-1, -1, 2], -1),
            (&[1, 0, 0], 1),
        ],
    );
    let b2 = cell(
        3,
        &[
            (&[0, -1, 0], -1),
            (&[-1, 1, 0], 1),
            (&[-1, 1, -1], 0),
            (&[-1, -1, 2], -1),
            (&[1, 0, 0], 1),
        ],
    );
    let c1 = cell(
        3,
        &[
            (&[1, -1, 0], 0),
            (&[0, 1, 0], 1),
            (&[0, 0, -1], 0),
            (&[1, -1, 1], 0),
            (&[-1, 0, 0], 0),
        ],
    );
    let c2 = cell(
        3,
        &[
            (&[0, -1, 0], -1),
            (&[-1, 1, 0], 1),
            (&[0, 0, -1], 0),
            (&[1, -1, 1], 0),
            (&[1, 0, 0], 1),
        ],
    );
    (vec![a11, a12, a21, a22], vec![b1, b2], c1, c2)
}

#[test]
fn three_parameter_step_value() {
    let vars = ["t", "s", "r"];
    // vol on the A cells: 6r(1-t-r)(s-r) + 3(1-t)(s-r)^2
    let r = poly(&vars, &[(1, &[0, 0, 1])]);
    let s = poly(&vars, &[(1, &[0, 1, 0])]);
    let t = poly(&vars, &[(1, &[1, 0, 0])]);
    let one = poly(&vars, &[(1, &[0, 0, 0])]);
    let vol_a = r
        .scale(&rat_i(6))
        .mul(&one.sub(&t).sub(&r))
        .mul(&s.sub(&r))
        .add(&one.sub(&t).scale(&rat_i(3)).mul(&s.sub(&r).pow(2)));
    // vol on the B cells: 3(1-t)(1-t+s-2r)^2
    let vol_b = one
        .sub(&t)
        .scale(&rat_i(3))
        .mul(&one.sub(&t).add(&s).sub(&r.scale(&rat_i(2))).pow(2));
    // vol on C1: 6(s-t)(1-s)t + 3(1-t)t^2
    let vol_c1 = s
        .sub(&t)
        .scale(&rat_i(6))
        .mul(&one.sub(&s))
        .mul(&t)
        .add(&one.sub(&t).scale(&rat_i(3)).mul(&t.pow(2)));
    // vol on C2: 3(1-t)(1+t-s)^2
    let vol_c2 = one
        .sub(&t)
        .scale(&rat_i(3))
        .mul(&one.add(&t).sub(&s).pow(2));

    let (a_cells, b_cells, c1, c2) = ec_cells();
    let mut pieces = Vec::new();
    for c in &a_cells {
        pieces.push(VolumePiece { cell: c.clone(), vol: vol_a.clone() });
    }
    for c in &b_cells {
        pieces.push(VolumePiece { cell: c.clone(), vol: vol_b.clone() });
    }
    pieces.push(VolumePiece { cell: c1, vol: vol_c1 });
    pieces.push(VolumePiece { cell: c2, vol: vol_c2 });

    let union = CellUnion {
        cells: pieces.iter().map(|p| p.cell.clone()).collect(),
    };
    let report = validate_cell_union(&union).unwrap();
    println!("3-parameter step union: total {}, overlap {}", rat_str(&report.total_volume), rat_str(&report.max_overlap));
    assert!(report.passes());

    let pv = PiecewiseVolume {
        params: vec!["t".into(), "s".into(), "r".into()],
        piece_dim: 3,
        pieces,
    };
    let value = s_refine(&pv, &rat_i(5), 5).unwrap();
    println!("3-parameter step S = {}", rat_str(&value));
    assert_eq!(value, rat(154, 405));
}

#[test]
fn two_parameter_m5_step_value() {
    // (t, s) plane, three regimes
    let vars = ["t", "s"];
    let t = poly(&vars, &[(1, &[1, 0])]);
    let s = poly(&vars, &[(1, &[0, 1])]);
    let one = poly(&vars, &[(1, &[0, 0])]);
    let a = one.sub(&t);
    // regime 1: 4(1-t)((1-t)^2 t + 3(1-t)t^2 + 2t^3 - s^3)
    let v1 = a
        .scale(&rat_i(4))
        .mul(
            &a.pow(2)
                .mul(&t)
                .add(&a.mul(&t.pow(2)).scale(&rat_i(3)))
                .add(&t.pow(3).scale(&rat_i(2)))
                .sub(&s.pow(3)),
        );
    // regime 2: 4(s-t)(3(1-s)^2 t + 3(1-s)t^2 + t^3) + 4(1-s)t((1-s)^2 + 3(1-s)t + t^2)
    let b = one.sub(&s);
    let v2 = s
        .sub(&t)
        .scale(&rat_i(4))
        .mul(
            &b.pow(2)
                .mul(&t)
                .scale(&rat_i(3))
                .add(&b.mul(&t.pow(2)).scale(&rat_i(3)))
                .add(&t.pow(3)),
        )
        .add(
            &b.mul(&t)
                .scale(&rat_i(4))
                .mul(&b.pow(2).add(&b.mul(&t).scale(&rat_i(3))).add(&t.pow(2))),
        );
    // regime 3: 4(1-t)(1+t-s)^3
    let v3 = a.scale(&rat_i(4)).mul(&one.add(&t).sub(&s).pow(3));

    let r1 = cell(2, &[(&[0, -1], 0), (&[-1, 1], 0), (&[1, 0], 1)]);
    let r2 = cell(2, &[(&[1, -1], 0), (&[0, 1], 1), (&[-1, 0], 0)]);
    let r3 = cell(2, &[(&[0, -1], -1), (&[-1, 1], 1), (&[1, 0], 1)]);
    let pv = PiecewiseVolume {
        params: vec!["t".into(), "s".into()],
        piece_dim: 4,
        pieces: vec![
            VolumePiece { cell: r1, vol: v1 },
            VolumePiece { cell: r2, vol: v2 },
            VolumePiece { cell: r3, vol: v3 },
        ],
    };
    let v = s_refine(&pv, &rat_i(5), 5).unwrap();
    println!("2-parameter step S = {}", rat_str(&v));
    assert_eq!(v, rat(23, 30));
}

#[test]
fn m4_refinement_step_values() {
    // step over (u, v): regime 1 vol (2-u)^3 - 9(2-u)(1-u+v)^2 + 10(1-u+v)^3,
    // regime 2 vol (2-u)^3
    let vars = ["u", "v"];
    let u = poly(&vars, &[(1, &[1, 0])]);
    let v = poly(&vars, &[(1, &[0, 1])]);
    let one = poly(&vars, &[(1, &[0, 0])]);
    let a = one.scale(&rat_i(2)).sub(&u);
    let b = one.sub(&u).add(&v);
    let vol1 = a
        .pow(3)
        .sub(&a.mul(&b.pow(2)).scale(&rat_i(9)))
        .add(&b.pow(3).scale(&rat_i(10)));
    let vol2 = a.pow(3);
    let d1 = cell(2, &[(&[0, -1], 0), (&[-1, 2], 0), (&[1, -1], 1)]);
    let d2 = cell(2, &[(&[0, -1], 0), (&[-1, 1], -1), (&[1, 0], 2)]);
    let pv = PiecewiseVolume {
        params: vec!["u".into(), "v".into()],
        piece_dim: 3,
        pieces: vec![
            VolumePiece { cell: d1, vol: vol1 },
            VolumePiece { cell: d2, vol: vol2 },
        ],
    };
    let got = s_refine(&pv, &rat_i(5), 4).unwrap();
    println!("M4 2-parameter step S = {}", rat_str(&got));
    assert_eq!(got, rat(1, 5));

    // step over (u, v, w): vol 2(1-u+v-w)(1+2u-5v-w)
    let vars3 = ["u", "v", "w"];
    let u3 = poly(&vars3, &[(1, &[1, 0, 0])]);
    let v3 = poly(&vars3, &[(1, &[0, 1, 0])]);
    let w3 = poly(&vars3, &[(1, &[0, 0, 1])]);
    let one3 = poly(&vars3, &[(1, &[0, 0, 0])]);
    let f1 = one3.sub(&u3).add(&v3).sub(&w3);
    let f2 = one3
        .add(&u3.scale(&rat_i(2)))
        .sub(&v3.scale(&rat_i(5)))
        .sub(&w3);
    let vol = f1.mul(&f2).scale(&rat_i(2));
    let dc = cell(
        3,
        &[
            (&[0, -1, 0], 0),
            (&[-1, 2, 0], 0),
            (&[0, 0, -1], 0),
            (&[1, -1, 1], 1),
            (&[-2, 5, 1], 1),
        ],
    );
    let pv = PiecewiseVolume {
        params: vec!["u".into(), "v".into(), "w".into()],
        piece_dim: 2,
        pieces: vec![VolumePiece { cell: dc, vol }],
    };
    let got = s_refine(&pv, &rat_i(5), 4).unwrap();
    println!("M4 3-parameter step S = {}", rat_str(&got));
    assert_eq!(got, rat(1, 5));
}

#[test]
fn parametric_family_samples() {
    use kstab_core::azchain::parametric_z_s;
    use kstab_core::intersect::IntersectionForm;
    let form = IntersectionForm::new(
        4,
        &["s1", "h"],
        &[
            (vec!["s1", "s1", "s1", "s1"], rat_i(0)),
            (vec!["s1", "s1", "s1", "h"], rat_i(1)),
            (vec!["s1", "s1", "h", "h"], rat_i(0)),
            (vec!["s1", "h", "h", "h"], rat_i(-1)),
            (vec!["h", "h", "h", "h"], rat_i(0)),
        ],
    )
    .unwrap();
    for (a, b) in [(1i64, 1i64), (2, 1), (3, 2), (5, 3)] {
        let v = parametric_z_s(&form, &rat_i(a), &rat_i(b)).unwrap();
        println!("Z({a},{b}) -> {}", rat_str(&v));
        assert_eq!(v, rat(1, 6 * a));
    }
}


#[test]
fn four_parameter_step_value() {
    let vars = ["t", "s", "r", "u"];
    let r = poly(&vars, &[(1, &[0, 0, 1, 0])]);
    let s = poly(&vars, &[(1, &[0, 1, 0, 0])]);
    let t = poly(&vars, &[(1, &[1, 0, 0, 0])]);
    let u = poly(&vars, &[(1, &[0, 0, 0, 1])]);
    let one = poly(&vars, &[(1, &[0, 0, 0, 0])]);
    // 2(r-u)(1-t+2s-3r-u) over the chambers where the series still moves
    let ell = one
        .sub(&t)
        .add(&s.scale(&rat_i(2)))
        .sub(&r.scale(&rat_i(3)))
        .sub(&u);
    let vol_aa = r.sub(&u).scale(&rat_i(2)).mul(&ell);
    // 4(1-t)(1-t+s-2r) where the fixed part is still being absorbed
    let vol_bb = one
        .sub(&t)
        .scale(&rat_i(4))
        .mul(&one.sub(&t).add(&s).sub(&r.scale(&rat_i(2))));

    let (a_cells, b_cells, _, _) = ec_cells();
    let lift = |base: &Polytope, extra: &[(&[i64], i64)]| -> Polytope {
        let mut rows: Vec<Halfspace> = base
            .halfspaces()
            .iter()
            .map(|h| {
                let mut n: Vec<Rat> = h.normal.clone();
                n.push(rat_i(0));
                Halfspace::new(n, h.offset.clone())
            })
            .collect();
        for (n, o) in extra {
            rows.push(hs(n, *o));
        }
        Polytope::from_halfspaces(4, &rows).unwrap()
    };

    let mut pieces = Vec::new();
    for c in &a_cells {
        let cell = lift(c, &[(&[0, 0, 0, -1], 0), (&[0, 0, -1, 1], 0), (&[1, -2, 2, 0], 1)]);
        pieces.push(VolumePiece { cell, vol: vol_aa.clone() });
    }
    for c in &b_cells {
        let cell = lift(c, &[(&[1, 0, 1, -1], 1), (&[0, 0, -1, 1], 0), (&[1, -2, 2, 0], 1)]);
        pieces.push(VolumePiece { cell, vol: vol_aa.clone() });
        let cell = lift(c, &[(&[0, 0, 0, -1], 0), (&[-1, 0, -1, 1], -1)]);
        pieces.push(VolumePiece { cell, vol: vol_bb.clone() });
    }
    let union = CellUnion {
        cells: pieces.iter().map(|p| p.cell.clone()).collect(),
    };
    assert!(validate_cell_union(&union).unwrap().passes());
    let pv = PiecewiseVolume {
        params: vec!["t".into(), "s".into(), "r".into(), "u".into()],
        piece_dim: 2,
        pieces,
    };
    let value = s_refine(&pv, &rat_i(5), 5).unwrap();
    println!("4-parameter step S = {}", rat_str(&value));
    assert_eq!(value, rat(221, 2430));
}

#[test]
fn oracle_matches_the_bundled_encoding() {
    // the hand-built chambers above and the shipped bundle data must be the
    // same piecewise volumes up to cell order
    let scenario = kstab_core::scenario::load_scenario("m5").unwrap();
    let bundled = &scenario.volumes["W_El_EC"];
    let (a_cells, b_cells, c1, c2) = ec_cells();
    let mut cells: Vec<Polytope> = Vec::new();
    cells.extend(a_cells);
    cells.extend(b_cells);
    cells.push(c1);
    cells.push(c2);
    assert_eq!(bundled.pieces.len(), cells.len());
    for cell in &cells {
        assert!(
            bundled.pieces.iter().any(|p| p.cell == *cell),
            "hand-built cell missing from the bundle"
        );
    }
}
