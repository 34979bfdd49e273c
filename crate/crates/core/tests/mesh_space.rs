use hpdg::mesh::*;
use hpdg::space::*;
use proptest::prelude::*;

const SQUARE: [f64; 4] = [-1.0, 1.0, -1.0, 1.0];

fn meshes() -> Vec<Mesh> {
    vec![
        cartesian_mesh(3, 2, SQUARE).unwrap(),
        triangulated_square(2, 3, SQUARE).unwrap(),
        lshape_mesh(),
        refine_uniform(&lshape_mesh()),
    ]
}

#[test]
fn counts_and_areas() {
    let q = cartesian_mesh(3, 2, SQUARE).unwrap();
    assert_eq!(q.num_elements(), 6);
    assert_eq!(q.faces.len(), 3 * 3 + 2 * 4);
    assert_eq!(q.boundary_faces().count(), 10);
    let t = triangulated_square(2, 3, SQUARE).unwrap();
    assert_eq!(t.num_elements(), 12);
    let l = lshape_mesh();
    assert_eq!(l.num_elements(), 6);
    let mut m = l;
    for level in 1..=3 {
        m = refine_uniform(&m);
        assert_eq!(m.num_elements(), 6 * 4usize.pow(level));
        assert!((m.total_area() - 3.0).abs() < 1e-12);
        assert!(validate(&m).passed());
    }
    for m in meshes() {
        assert!(validate(&m).passed(), "{:?}", validate(&m).violation);
        let sum: f64 = (0..m.num_elements()).map(|e| m.element_area(e)).sum();
        assert!((sum - m.total_area()).abs() < 1e-12);
    }
}

#[test]
fn interior_normals_point_from_plus_to_minus() {
    for m in meshes() {
        for (_, f) in m.interior_faces() {
            let (a, b) = (m.centroid(f.plus), m.centroid(f.minus.unwrap()));
            assert!((b[0] - a[0]) * f.normal[0] + (b[1] - a[1]) * f.normal[1] > 0.0);
        }
    }
}

#[test]
fn element_mass_matrices_are_scaled_identities() {
    for m in [
        cartesian_mesh(2, 2, SQUARE).unwrap(),
        triangulated_square(1, 1, SQUARE).unwrap(),
    ] {
        let space = build_dg_space(&m, 10).unwrap();
        for e in 0..m.num_elements() {
            let (tab, _, w) = space.core.volume_tabulation(e);
            let nb = tab.nb;
            let diag = (0..tab.npts).map(|q| w[q] * tab.at(q)[0][0].powi(2)).sum::<f64>();
            for i in 0..nb {
                for j in 0..nb {
                    let mij: f64 = (0..tab.npts).map(|q| w[q] * tab.at(q)[i][0] * tab.at(q)[j][0]).sum();
                    let expected = if i == j { diag } else { 0.0 };
                    assert!((mij - expected).abs() < 1e-11 * diag, "e={e} i={i} j={j}");
                }
            }
        }
    }
}

#[test]
fn derivatives_match_finite_differences() {
    for m in [
        cartesian_mesh(1, 1, [0.0, 2.0, -1.0, 0.5]).unwrap(),
        triangulated_square(1, 1, SQUARE).unwrap(),
    ] {
        let space = build_dg_space(&m, 6).unwrap();
        let x = space.core.maps[0].to_physical([0.2, -0.1]);
        let h = 1e-4;
        let at = |dx: f64, dy: f64| space.core.eval_basis_physical(0, &[[x[0] + dx, x[1] + dy]]).data;
        let c = at(0.0, 0.0);
        let (xp, xm, yp, ym) = (at(h, 0.0), at(-h, 0.0), at(0.0, h), at(0.0, -h));
        for k in 0..c.len() {
            let fd = [
                (1, (xp[k][0] - xm[k][0]) / (2.0 * h)),
                (2, (yp[k][0] - ym[k][0]) / (2.0 * h)),
                (3, (xp[k][1] - xm[k][1]) / (2.0 * h)),
                (4, (yp[k][1] - ym[k][1]) / (2.0 * h)),
                (5, (yp[k][2] - ym[k][2]) / (2.0 * h)),
                (6, (xp[k][3] - xm[k][3]) / (2.0 * h)),
                (9, (yp[k][5] - ym[k][5]) / (2.0 * h)),
            ];
            for (comp, v) in fd {
                assert!(
                    (c[k][comp] - v).abs() < 1e-5 * (1.0 + v.abs()),
                    "basis {k} component {comp}"
                );
            }
        }
    }
}

#[test]
fn affine_fields_are_reproduced() {
    for m in meshes() {
        let space = build_dg_space(&m, 2).unwrap();
        let f = |x: Point| 0.3 + 2.0 * x[0] - x[1] + x[0] * x[1];
        let c = space.l2_project(f, 0);
        for e in 0..m.num_elements() {
            let x = m.centroid(e);
            let t = space.eval_field(e, &c, x);
            assert!((t[0] - f(x)).abs() < 1e-12);
            assert!((t[1] - (2.0 + x[1])).abs() < 1e-11);
            assert!((t[4] - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn c0_space_dimension_and_boundary() {
    for (nx, ny, p) in [(1, 1, 2), (2, 3, 4), (3, 2, 5)] {
        let m = cartesian_mesh(nx, ny, SQUARE).unwrap();
        let s = build_c0_space(&m, p).unwrap();
        assert_eq!(s.ndofs(), (nx * p + 1) * (ny * p + 1));
        assert_eq!(s.interior_dofs().len(), (nx * p - 1) * (ny * p - 1));
    }
    assert!(build_c0_space(&lshape_mesh(), 3).is_err());
    assert!(build_dg_space(&lshape_mesh(), 1).is_err());
}

proptest! {
    #[test]
    fn c0_fields_are_continuous(seed in prop::collection::vec(-1.0f64..1.0, 7 * 7 * 4), t in -1.0f64..1.0) {
        let m = cartesian_mesh(2, 2, SQUARE).unwrap();
        let s = build_c0_space(&m, 3).unwrap();
        let u = &seed[..s.ndofs()];
        for (_, f) in m.interior_faces() {
            let a = m.vertices[f.vertices[0]];
            let b = m.vertices[f.vertices[1]];
            let r = 0.5 * (1.0 + t);
            let x = [a[0] + r * (b[0] - a[0]), a[1] + r * (b[1] - a[1])];
            let plus = s.eval_field(f.plus, u, x)[0];
            let minus = s.eval_field(f.minus.unwrap(), u, x)[0];
            prop_assert!((plus - minus).abs() < 1e-12);
        }
    }

    #[test]
    fn reference_maps_invert(xi in prop::array::uniform2(0.0f64..1.0)) {
        for m in meshes() {
            let map = &build_dg_space(&m, 2).unwrap().core.maps[m.num_elements() - 1];
            let back = map.to_reference(map.to_physical(xi));
            prop_assert!((back[0] - xi[0]).abs() < 1e-12 && (back[1] - xi[1]).abs() < 1e-12);
        }
    }
}
