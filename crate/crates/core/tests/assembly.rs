use hpdg::assembly::*;
use hpdg::linalg::{cholesky_solve, dot, relative_residual, SymMatrix};
use hpdg::mesh::{cartesian_mesh, lshape_mesh, refine_uniform, triangulated_square};
use hpdg::polylib::gauss_legendre_rule;
use hpdg::solutions::make_case;
use hpdg::space::{build_c0_space, build_dg_space, DGSpace, FeSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SQUARE: [f64; 4] = [-1.0, 1.0, -1.0, 1.0];

fn random_vectors(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect()
}

fn quad_space(p: usize) -> DGSpace {
    build_dg_space(&cartesian_mesh(2, 2, SQUARE).unwrap(), p).unwrap()
}

#[test]
fn form_splits_into_norm_and_consistency() {
    let pen = PenaltyConfig::default();
    for space in [
        quad_space(3),
        build_dg_space(&triangulated_square(2, 1, SQUARE).unwrap(), 3).unwrap(),
    ] {
        let a = assemble_ipdg(&space, &pen);
        let sum =
            assemble_dg_norm(&space, &pen).add_scaled(1.0, &assemble_form(&space, &pen, FormTerms::CONSISTENCY_ONLY));
        for i in 0..a.order() {
            for j in 0..a.order() {
                assert!((a.get(i, j) - sum.get(i, j)).abs() < 1e-9 * a.max_abs());
                assert_eq!(a.get(i, j), a.get(j, i));
            }
        }
    }
}

#[test]
fn random_vectors_see_a_coercive_form() {
    let pen = PenaltyConfig::default();
    let mesh = cartesian_mesh(2, 2, SQUARE).unwrap();
    for p in [3, 6, 9] {
        let space = build_dg_space(&mesh, p).unwrap();
        let (a, n) = (assemble_ipdg(&space, &pen), assemble_dg_norm(&space, &pen));
        for v in random_vectors(space.ndofs(), 200, p as u64) {
            assert!(a.quadratic_form(&v) >= 0.5 * n.quadratic_form(&v), "ipdg p={p}");
        }
        let c0 = build_c0_space(&mesh, p).unwrap();
        let keep = c0.interior_dofs();
        let a = assemble_c0ipdg(&c0, &pen).submatrix(&keep);
        let n = assemble_c0_norm(&c0, &pen).submatrix(&keep);
        for v in random_vectors(keep.len(), 200, 100 + p as u64) {
            assert!(a.quadratic_form(&v) >= 0.5 * n.quadratic_form(&v), "c0 p={p}");
        }
    }
}

#[test]
fn indicator_energy_is_the_value_penalty() {
    let pen = PenaltyConfig::default();
    let p = 4;
    let space = quad_space(p);
    let mut u = vec![0.0; space.ndofs()];
    u[0] = 1.0;
    let mesh = space.mesh();
    let phi0 = space.eval_field(0, &u, mesh.centroid(0))[0];
    let expected: f64 = mesh.element_faces[0]
        .iter()
        .map(|&f| {
            let len = mesh.faces[f].length;
            pen.sigma(p, len) * len * phi0 * phi0
        })
        .sum();
    let energy = assemble_dg_norm(&space, &pen).quadratic_form(&u);
    assert!((energy - expected).abs() < 1e-10 * expected, "{energy} vs {expected}");
    assert!((assemble_ipdg(&space, &pen).quadratic_form(&u) - energy).abs() < 1e-10 * expected);
}

#[test]
fn lifting_vanishes_on_smooth_fields_and_stays_local() {
    let space = quad_space(4);
    let poly = make_case("poly").unwrap();
    let u = space.l2_project(|x| poly.value(x[0], x[1]), 4);
    assert!(apply_lifting(&space, &u).max_abs() < 1e-10);

    let fine = build_dg_space(&cartesian_mesh(3, 3, SQUARE).unwrap(), 3).unwrap();
    let mut ind = vec![0.0; fine.ndofs()];
    let centre = 4;
    ind[centre * fine.local_dim()] = 1.0;
    let l = apply_lifting(&fine, &ind);
    let support: Vec<usize> = (0..9).filter(|&e| l.is_supported_on(e, 1e-12)).collect();
    let mut near = fine.mesh().neighbours(centre);
    near.push(centre);
    near.sort();
    assert_eq!(support, near);
}

#[test]
fn harmonic_data_load_comes_from_the_boundary_only() {
    let case = make_case("u4").unwrap();
    assert!(case.biharmonic_free);
    let mesh = refine_uniform(&refine_uniform(&lshape_mesh()));
    let space = build_dg_space(&mesh, 3).unwrap();
    let b = assemble_load(
        &space,
        &case,
        &BoundaryData::from_case(&case),
        &PenaltyConfig::default(),
        &LoadOptions::default(),
    );
    let nb = space.local_dim();
    let mut interior = 0;
    for e in 0..mesh.num_elements() {
        let on_boundary = mesh.element_faces[e].iter().any(|&f| mesh.faces[f].is_boundary());
        if !on_boundary {
            interior += 1;
            assert!(b[e * nb..(e + 1) * nb].iter().all(|v| *v == 0.0), "element {e}");
        }
    }
    assert!(interior > 0);
    assert!(b.iter().any(|v| *v != 0.0));
}

#[test]
fn zero_field_error_is_the_exact_dg_norm() {
    let p = 4;
    let pen = PenaltyConfig::default();
    let case = make_case("u1").unwrap();
    let space = quad_space(p);
    let report = compute_errors(&space, &vec![0.0; space.ndofs()], &case, &pen, &ErrorOptions::default());

    // Composite Gauss quadrature on a 64×64 grid; u1 vanishes on ∂Ω so only
    // the gradient penalty contributes on boundary faces (h_F = 1).
    let g = gauss_legendre_rule(8).unwrap();
    let cells = 64;
    let w = 2.0 / cells as f64;
    let (mut vol, mut bnd) = (0.0, 0.0);
    for i in 0..cells {
        let x0 = -1.0 + i as f64 * w;
        for (s, ws) in g.nodes.iter().zip(&g.weights) {
            let x = x0 + 0.5 * w * (s + 1.0);
            for t in [-1.0, 1.0] {
                for [a, b] in [[x, t], [t, x]] {
                    let d = case.gradient(a, b);
                    bnd += 0.5 * w * ws * (d[0] * d[0] + d[1] * d[1]);
                }
            }
            for j in 0..cells {
                let y0 = -1.0 + j as f64 * w;
                for (r, wr) in g.nodes.iter().zip(&g.weights) {
                    let y = y0 + 0.5 * w * (r + 1.0);
                    let [hxx, hxy, hyy] = case.hessian(x, y);
                    vol += 0.25 * w * w * ws * wr * (hxx * hxx + 2.0 * hxy * hxy + hyy * hyy);
                }
            }
        }
    }
    let exact = (vol + pen.tau(p, 1.0) * bnd).sqrt();
    assert!(
        (report.dg_error - exact).abs() < 1e-6 * exact,
        "{} vs {exact}",
        report.dg_error
    );
}

fn solve(space: &DGSpace, name: &str) -> (SymMatrix, Vec<f64>, Vec<f64>) {
    let case = make_case(name).unwrap();
    let pen = PenaltyConfig::default();
    let a = assemble_ipdg(space, &pen);
    let b = assemble_load(
        space,
        &case,
        &BoundaryData::from_case(&case),
        &pen,
        &LoadOptions::default(),
    );
    let x = cholesky_solve(&a, &b).unwrap();
    (a, b, x)
}

#[test]
fn galerkin_residual_is_small() {
    let (a, b, x) = solve(&quad_space(6), "u2");
    assert!(relative_residual(&a, &x, &b) < 1e-9);
    assert!(dot(&x, &b) > 0.0);
}

#[test]
fn polynomial_solution_is_reproduced_at_high_degree() {
    let case = make_case("poly").unwrap();
    for p in [4, 12, 20] {
        let space = quad_space(p);
        let (_, _, x) = solve(&space, "poly");
        let e = compute_errors(&space, &x, &case, &PenaltyConfig::default(), &ErrorOptions::default());
        let zero = compute_errors(
            &space,
            &vec![0.0; x.len()],
            &case,
            &PenaltyConfig::default(),
            &ErrorOptions::default(),
        );
        assert!(e.dg_error < 1e-6 * zero.dg_error, "p={p}: {}", e.dg_error);
    }
}

#[test]
fn graded_quadrature_is_converged_in_the_level_count() {
    let pen = PenaltyConfig::default();
    for name in ["u1", "u3"] {
        let case = make_case(name).unwrap();
        let space = quad_space(10);
        let (_, _, x) = solve(&space, name);
        let at = |levels: usize| {
            let opts = ErrorOptions {
                quadrature: LoadOptions {
                    grading_levels: levels,
                    ..LoadOptions::default()
                },
                ..ErrorOptions::default()
            };
            compute_errors(&space, &x, &case, &pen, &opts).dg_error
        };
        let (a, b) = (at(13), at(14));
        assert!((a - b).abs() < 1e-3 * b, "{name}: {a} vs {b}");
        let bc = BoundaryData::from_case(&case);
        let load = |levels: usize| {
            let opts = LoadOptions {
                grading_levels: levels,
                ..LoadOptions::default()
            };
            assemble_load(&space, &case, &bc, &pen, &opts)
        };
        let (la, lb) = (load(13), load(14));
        let diff = la.iter().zip(&lb).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        let scale = lb.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(diff < 1e-3 * scale, "{name}: load moved by {diff:e}");
    }
}
