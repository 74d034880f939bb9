use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use swft_core::mesh::{
    build_jittered_mesh, build_structured_mesh_with, classify_boundaries, BoundaryTag, BoxSide, Diagonal, Rect, TriMesh,
};
use swft_core::reconstruction::{evaluate_midpoint_states, green_gauss_gradients, minmod_limit};
use swft_core::simulation::{RunState, Solver};
use swft_core::sources::{friction_factor, friction_implicit_update, topography_source, SteadyProfile};
use swft_core::state::{build_bathymetry, BathymetrySpec, PhysParams, StateVec};

/// Root of `m + k m² = m*` in `[0, m*]` by bisection.
fn bisect(m_star: f64, k: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, m_star);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if mid + k * mid * mid > m_star {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn friction_matches_bisection_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let p = PhysParams { manning_n: 0.05, ..PhysParams::default() };
    for _ in 0..10_000 {
        let m_star: f64 = rng.gen_range(f64::MIN_POSITIVE..=10.0);
        let k: f64 = rng.gen_range(f64::MIN_POSITIVE..=10.0);
        let m = m_star * friction_factor(m_star, k);
        assert!((m - bisect(m_star, k)).abs() <= 1e-12, "m* {m_star} k {k}");
        assert!(m <= m_star && m >= 0.0);

        // Same root through the full update: choose dt so the update sees k.
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        let q = [m_star * angle.cos(), m_star * angle.sin()];
        let (h, r) = (rng.gen_range(0.01..3.0), rng.gen_range(1.0..1.5));
        let dt = k * r * r / (p.g * p.manning_n * p.manning_n * libm::pow(h, -7.0 / 3.0));
        let out = friction_implicit_update(q, h, r, dt, &p);
        assert!(out[0] * q[0] >= 0.0 && out[1] * q[1] >= 0.0, "direction reversed");
        assert!(libm::hypot(out[0], out[1]) <= m_star * (1.0 + 1e-15));
        assert!((libm::hypot(out[0], out[1]) - bisect(m_star, k)).abs() <= 1e-12 * m_star.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn friction_never_reverses(q2 in -10.0..10.0f64, q3 in -10.0..10.0f64, h in 0.0..3.0f64, dt in 0.0..100.0f64, n in 0.0..0.2f64) {
        let p = PhysParams { manning_n: n, ..PhysParams::default() };
        let q = friction_implicit_update([q2, q3], h, 1.05, dt, &p);
        let scale = if q2 != 0.0 { q[0] / q2 } else { q[1] / q3.max(f64::MIN_POSITIVE) };
        prop_assert!((0.0..=1.0).contains(&scale) || q2 == 0.0 && q3 == 0.0);
        prop_assert!((q[0] - scale * q2).abs() <= 1e-15 * q2.abs() + 1e-300);
        prop_assert!((q[1] - scale * q3).abs() <= 1e-15 * q3.abs() + 1e-300);
        if dt * n == 0.0 && h > p.h_dry {
            prop_assert_eq!(q, [q2, q3]);
        }
    }
}

fn sloped(mesh: &TriMesh, prof: &SteadyProfile) -> swft_core::Bathymetry {
    build_bathymetry(mesh, &BathymetrySpec::Plane { zx: -prof.slope, zy: 0.0, z0: 3.0 }).unwrap()
}

fn open_channel(mesh: TriMesh) -> TriMesh {
    classify_boundaries(
        &mesh,
        &[
            (BoxSide::XMin, BoundaryTag::Outflow),
            (BoxSide::XMax, BoundaryTag::Outflow),
            (BoxSide::YMin, BoundaryTag::Wall),
            (BoxSide::YMax, BoundaryTag::Wall),
        ],
        None,
    )
    .unwrap()
}

#[test]
fn topography_source_of_steady_profile() {
    let prof = SteadyProfile::new(0.1, 0.1, 0.01, 0.0, 0.0).unwrap();
    let mesh =
        open_channel(build_jittered_mesh(10, 5, Rect::new(0.0, 10.0, 0.0, 5.0), Diagonal::Mirrored, 0.2, 3).unwrap());
    let bathy = sloped(&mesh, &prof);
    let p = PhysParams { manning_n: 0.1, ..PhysParams::default() };
    let values = vec![prof.conserved(); mesh.num_cells()];
    let g = minmod_limit(&green_gauss_gradients(&values, &mesh), &mesh);
    let ms = evaluate_midpoint_states(&values, &g, &mesh);
    for j in 0..mesh.num_cells() {
        let s = topography_source(j, &values, &ms, &g, &bathy, &mesh, &p);
        assert!((s[0] - 0.0246417).abs() < 1e-7, "cell {j}: {}", s[0]);
        assert!((s[0] - p.g * prof.h0 * prof.slope).abs() < 1e-12 * s[0], "{} vs {}", s[0], p.g * prof.h0 * prof.slope);
        assert!(s[1].abs() < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    /// One forward-Euler step of the full pipeline on the balance profile.
    #[test]
    fn steady_profile_survives_one_step(
        q0 in 0.01..1.0f64,
        n in 0.01..0.2f64,
        slope in 0.001..0.05f64,
        c0 in 0.0..1.0f64,
        delta in 0.0..0.5f64,
        nx in 2usize..12,
        ny in 1usize..8,
        jitter in 0.0..0.3f64,
        seed in any::<u64>(),
        dt_fraction in 0.01..1.0f64,
    ) {
        let prof = SteadyProfile::new(q0, n, slope, c0, delta).unwrap();
        let mesh = open_channel(build_jittered_mesh(nx, ny, Rect::new(0.0, 4.0, 0.0, 2.0), Diagonal::Mirrored, jitter, seed).unwrap());
        let bathy = sloped(&mesh, &prof);
        let p = PhysParams { manning_n: n, delta, ..PhysParams::default() };
        let u0 = prof.conserved();
        let values = vec![u0; mesh.num_cells()];
        let mut solver = Solver::new(&mesh, &bathy, p, 1e3).unwrap();

        // Decomposition: the flux part vanishes, the source is g r0 h0 C.
        let rhs = solver.explicit_rhs(&values).unwrap();
        let s_expected = p.g * prof.r0 * prof.h0 * prof.slope;
        // Round-off scale of the pressure sums around one cell.
        let tol = 1e-13 * p.g * u0[0] * prof.h0 / mesh.min_height();
        for r in &rhs {
            prop_assert!(r[0].abs() <= 1e-13 * u0[0] && r[3].abs() <= 1e-13 * u0[0]);
            prop_assert!((r[1] - s_expected).abs() <= tol, "{} vs {s_expected}", r[1]);
            prop_assert!(r[2].abs() <= tol);
        }

        let dt = dt_fraction * solver.stable_dt(&values).unwrap();
        let mut state = RunState::new(swft_core::ConservedField::new(values));
        let report = solver.step(&mut state, dt).unwrap();
        prop_assert!((report.dt - dt).abs() <= 1e-15 * dt);
        for q in &state.field.values {
            for i in 0..4 {
                let scale = if i == 2 { 1.0 } else { u0[i].abs().max(1e-12) };
                prop_assert!((q[i] - u0[i]).abs() <= 1e-12 * scale, "component {i}: {} vs {}", q[i], u0[i]);
            }
        }
    }
}

#[test]
fn flat_bottom_constant_depth_is_neutral() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..100 {
        let mesh = build_jittered_mesh(8, 6, Rect::new(-1.0, 3.0, 0.0, 2.0), Diagonal::Uniform, 0.25, trial).unwrap();
        let bathy = build_bathymetry(&mesh, &BathymetrySpec::Flat(rng.gen_range(-2.0..2.0))).unwrap();
        let delta = rng.gen_range(0.0..0.5);
        let p = PhysParams { delta, ..PhysParams::default() };
        let (h, c) = (rng.gen_range(0.05..5.0), rng.gen_range(0.0..1.0));
        let values = vec![[h * (1.0 + delta * c), 0.3, -0.1, h * c]; mesh.num_cells()];
        let g = minmod_limit(&green_gauss_gradients(&values, &mesh), &mesh);
        let ms = evaluate_midpoint_states(&values, &g, &mesh);
        let min_edge = mesh.all_sides().iter().flatten().map(|s| s.length).fold(f64::INFINITY, f64::min);
        for j in 0..mesh.num_cells() {
            let s = topography_source(j, &values, &ms, &g, &bathy, &mesh, &p);
            assert!(s[0].abs() + s[1].abs() <= 1e-12 * p.g * h * h / min_edge, "trial {trial} cell {j}: {s:?}");
        }
    }
}

/// Max source error against `−g h r ∂x Z` (and its y analogue) over cells
/// away from the boundary, on smooth monotone data.
fn source_consistency_error(n: usize, varying_bottom: bool) -> f64 {
    let domain = Rect::new(1.0, 2.0, 1.0, 2.0);
    let mesh = build_jittered_mesh(n, n, domain, Diagonal::Mirrored, 0.15, 11).unwrap();
    let delta = 0.2;
    let p = PhysParams { delta, ..PhysParams::default() };
    let depth = |x: f64, y: f64| 0.5 + 0.2 * x * x + 0.1 * y;
    let conc = |x: f64, y: f64| 0.3 + 0.1 * x + 0.05 * y * y;
    let bottom = |x: f64, y: f64| if varying_bottom { 0.3 * x * x + 0.2 * x * y } else { 0.0 };
    let z: Vec<f64> = mesh.vertices().iter().map(|v| bottom(v[0], v[1])).collect();
    let bathy = build_bathymetry(&mesh, &BathymetrySpec::Vertex(z)).unwrap();
    let values: Vec<StateVec> = mesh
        .centroids()
        .iter()
        .map(|c| {
            let (h, cc) = (depth(c[0], c[1]), conc(c[0], c[1]));
            [h * (1.0 + delta * cc), 0.0, 0.0, h * cc]
        })
        .collect();
    let g = minmod_limit(&green_gauss_gradients(&values, &mesh), &mesh);
    let ms = evaluate_midpoint_states(&values, &g, &mesh);
    let margin = 2.5 / n as f64;
    let mut err: f64 = 0.0;
    for j in 0..mesh.num_cells() {
        let c = mesh.centroid(j);
        if c[0] < 1.0 + margin || c[0] > 2.0 - margin || c[1] < 1.0 + margin || c[1] > 2.0 - margin {
            continue;
        }
        let s = topography_source(j, &values, &ms, &g, &bathy, &mesh, &p);
        let (h, r) = (depth(c[0], c[1]), 1.0 + delta * conc(c[0], c[1]));
        let dz = if varying_bottom { [0.6 * c[0] + 0.2 * c[1], 0.2 * c[0]] } else { [0.0, 0.0] };
        err = err.max((s[0] + p.g * h * r * dz[0]).abs()).max((s[1] + p.g * h * r * dz[1]).abs());
    }
    err
}

#[test]
fn topography_source_converges_to_the_slope_term() {
    let levels = [16usize, 32, 64, 128, 256];
    for varying in [true, false] {
        let errs: Vec<f64> = levels.iter().map(|&n| source_consistency_error(n, varying)).collect();
        // Least-squares slope of log(error) against log(mesh size).
        let xs: Vec<f64> = levels.iter().map(|&n| -(n as f64).ln()).collect();
        let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
        let (mx, my) = (xs.iter().sum::<f64>() / 5.0, ys.iter().sum::<f64>() / 5.0);
        let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let order = num / den;
        assert!(order >= 0.9, "bottom varying {varying}: errors {errs:?}, order {order}");
    }
}

#[test]
fn uniform_mesh_keeps_the_profile_for_many_steps() {
    // Accumulated drift over 10⁴ steps on a small mesh.
    let prof = SteadyProfile::new(0.1, 0.1, 0.01, 1.0, 0.1).unwrap();
    let mesh =
        open_channel(build_structured_mesh_with(10, 4, Rect::new(0.0, 10.0, 0.0, 5.0), Diagonal::Uniform).unwrap());
    let bathy = sloped(&mesh, &prof);
    let p = PhysParams { manning_n: 0.1, delta: 0.1, ..PhysParams::default() };
    let u0 = prof.conserved();
    let mut solver = Solver::new(&mesh, &bathy, p, 1.0).unwrap();
    let mut state = RunState::new(swft_core::ConservedField::new(vec![u0; mesh.num_cells()]));
    for _ in 0..10_000 {
        solver.step(&mut state, f64::INFINITY).unwrap();
    }
    let norm = u0.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for q in &state.field.values {
        for i in 0..4 {
            assert!((q[i] - u0[i]).abs() <= 1e-9 * norm);
        }
    }
}
