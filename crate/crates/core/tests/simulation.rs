use swft_core::mesh::{build_jittered_mesh, classify_boundaries, BoundaryTag, BoxSide, Diagonal, Rect};
use swft_core::scenarios::{
    make_example1, make_example2, make_lake_at_rest, make_scenario, Example1Mode, InitialCondition, MeshSpec,
    ScenarioKind,
};
use swft_core::simulation::{error_norms, RunControls, RunState, Solver};
use swft_core::state::{build_bathymetry, BathymetrySpec, ConservedField, PhysParams, StateVec};

fn controls(t_end: f64) -> RunControls {
    RunControls { t_end, dt_max: 1.0, snapshot_every: None, snapshot_times: vec![] }
}

#[test]
fn closed_basin_conserves_mass_and_solute() {
    let mesh = classify_boundaries(
        &build_jittered_mesh(16, 10, Rect::new(0.0, 4.0, 0.0, 2.5), Diagonal::Mirrored, 0.25, 17).unwrap(),
        &[(BoxSide::All, BoundaryTag::Wall)],
        None,
    )
    .unwrap();
    let z: Vec<f64> = mesh.vertices().iter().map(|v| 0.3 * (2.0 * v[0]).sin() * v[1].cos() + 0.05 * v[1]).collect();
    let bathy = build_bathymetry(&mesh, &BathymetrySpec::Vertex(z)).unwrap();
    let p = PhysParams { manning_n: 0.03, delta: 0.2, ..PhysParams::default() };
    // A raised, denser column in one corner with some dry bump tops around.
    let values: Vec<StateVec> = (0..mesh.num_cells())
        .map(|j| {
            let c = mesh.centroid(j);
            let w: f64 = if c[0] < 1.2 && c[1] < 1.2 { 1.0 } else { 0.5 };
            let h = (w - bathy.center(j)).max(0.0);
            let conc = if c[0] < 1.2 { 1.0 } else { 0.2 };
            [h * (1.0 + p.delta * conc), 0.0, 0.0, h * conc]
        })
        .collect();
    let mut solver = Solver::new(&mesh, &bathy, p, 1.0).unwrap();
    let mut state = RunState::new(ConservedField::new(values));
    let t0 = state.field.totals(&mesh);
    for _ in 0..1500 {
        solver.step(&mut state, f64::INFINITY).unwrap();
        assert!(state.field.values.iter().all(|q| q[0] - p.delta * q[3] >= 0.0));
    }
    let t1 = state.field.totals(&mesh);
    assert!((t1[0] - t0[0]).abs() <= 1e-10 * t0[0], "mass drift {}", (t1[0] - t0[0]) / t0[0]);
    assert!((t1[3] - t0[3]).abs() <= 1e-10 * t0[3], "solute drift {}", (t1[3] - t0[3]) / t0[3]);
}

#[test]
fn still_lake_on_flat_bottom_is_untouched() {
    let mut s = make_lake_at_rest(0.0).unwrap();
    s.controls = controls(2.0);
    s.params.manning_n = 0.05;
    s.initial = InitialCondition::Surface { w: 1.0, c: 1.0 };
    let (setup, out, _) = s.run().unwrap();
    for (q, q0) in out.final_state.field.values.iter().zip(&setup.field.values) {
        for i in 0..4 {
            assert!((q[i] - q0[i]).abs() <= 1e-13, "{q:?} vs {q0:?}");
        }
        let h = q[0] - setup.params.delta * q[3];
        assert!((q[3] / h - 1.0).abs() <= 1e-13);
    }
}

struct FrontRun {
    worst_c: f64,
    min_depth: f64,
    asymmetry: f64,
}

/// Coarse closed dam break; tracks the exact ratio `q4 / h` on wet cells,
/// the minimum depth and the mirror asymmetry of `h` at every output time.
fn small_dam_break() -> FrontRun {
    let mut s = make_example2(64.0).unwrap();
    s.controls = RunControls { t_end: 10.0, dt_max: 1.0, snapshot_every: Some(1.0), snapshot_times: vec![] };
    let setup = s.instantiate().unwrap();
    let partners = setup.mesh.mirror_partners(150.0).expect("mirror-symmetric mesh");
    let p = setup.params;
    let mut run = FrontRun { worst_c: 0.0, min_depth: f64::INFINITY, asymmetry: 0.0 };
    let mut solver = Solver::new(&setup.mesh, &setup.bathy, p, s.controls.dt_max).unwrap();
    let mut state = RunState::new(setup.field.clone());
    for stop in s.controls.output_times() {
        while state.t < stop {
            solver.step(&mut state, stop).unwrap();
            for q in &state.field.values {
                let h = q[0] - p.delta * q[3];
                run.min_depth = run.min_depth.min(h);
                if h > 100.0 * p.h_dry {
                    run.worst_c = run.worst_c.max((q[3] / h - 1.0).abs());
                }
            }
        }
        let depth = |j: usize| state.field.depth(j, &p);
        for (j, &k) in partners.iter().enumerate() {
            run.asymmetry = run.asymmetry.max((depth(j) - depth(k)).abs());
        }
    }
    run
}

#[test]
fn dam_break_keeps_concentration_positivity_and_symmetry() {
    let run = small_dam_break();
    assert!(run.worst_c <= 1e-8, "concentration deviation {}", run.worst_c);
    assert!(run.min_depth >= 0.0, "negative depth {}", run.min_depth);
    assert!(run.asymmetry <= 1e-6, "asymmetry {}", run.asymmetry);
}

#[test]
fn example2_initial_data() {
    let s = make_example2(16.0).unwrap();
    let setup = s.instantiate().unwrap();
    let partners = setup.mesh.mirror_partners(150.0).unwrap();
    for (j, &k) in partners.iter().enumerate() {
        assert_eq!(setup.field.values[j], setup.field.values[k]);
        assert_eq!(setup.mesh.area(j), setup.mesh.area(k));
    }
    let upstream: f64 =
        (0..setup.mesh.num_cells()).filter(|&j| setup.mesh.centroid(j)[0] < 250.0).map(|j| setup.mesh.area(j)).sum();
    let totals = setup.field.totals(&setup.mesh);
    // q1 = h r = 11, q4 = h c = 10 on the upstream side, zero downstream.
    assert!((totals[3] - 10.0 * upstream).abs() <= 1e-12 * totals[3]);
    assert!((totals[0] - 11.0 * upstream).abs() <= 1e-12 * totals[0]);
}

#[test]
fn every_generator_runs_a_step() {
    for kind in [ScenarioKind::Example1, ScenarioKind::Example2, ScenarioKind::LakeAtRest, ScenarioKind::SteadyCustom] {
        for scale in [10.0, 40.0] {
            for mode in [Example1Mode::PaperValue, Example1Mode::Consistent] {
                let s = make_scenario(kind, scale, mode).unwrap();
                let setup = s.instantiate().unwrap();
                let mut solver = Solver::new(&setup.mesh, &setup.bathy, setup.params, s.controls.dt_max).unwrap();
                let mut state = RunState::new(setup.field.clone());
                let report = solver.step(&mut state, s.controls.t_end).unwrap();
                assert!(report.dt > 0.0 && state.t > 0.0, "{kind:?} at scale {scale}");
            }
        }
    }
}

/// Largest of the `(h, q2, c)` error norms of a short Example-1 style run.
fn steady_errors(cfl: f64) -> [f64; 9] {
    let mut s = make_example1(40.0, Example1Mode::Consistent).unwrap();
    s.params.cfl = cfl;
    s.controls = controls(5.0);
    let prof = s.steady.unwrap();
    let (setup, out, _) = s.run().unwrap();
    let p = setup.params;
    let f = &out.final_state.field.values;
    let h: Vec<f64> = f.iter().map(|q| q[0] - p.delta * q[3]).collect();
    let q2: Vec<f64> = f.iter().map(|q| q[1]).collect();
    let c: Vec<f64> = f.iter().zip(&h).map(|(q, h)| q[3] / h).collect();
    let n = setup.mesh.num_cells();
    let e = |a: &[f64], v: f64| error_norms(a, &vec![v; n], &setup.mesh).unwrap();
    let (eh, eq, ec) = (e(&h, prof.h0), e(&q2, prof.q0), e(&c, prof.c0));
    [eh.l1, eh.l2, eh.linf, eq.l1, eq.l2, eq.linf, ec.l1, ec.l2, ec.linf]
}

#[test]
fn halving_cfl_does_not_inflate_steady_errors() {
    let full = steady_errors(0.8);
    let half = steady_errors(0.4);
    for (a, b) in full.iter().zip(&half) {
        // Both runs sit at round-off; the comparison carries a floor of a
        // few ulps of the state so that it tests growth rather than noise.
        assert!(*b <= 1.05 * a + 1e-14, "{full:?} vs {half:?}");
    }
}

#[test]
fn example1_mesh_is_jittered_and_sized() {
    let s = make_example1(10.0, Example1Mode::PaperValue).unwrap();
    let MeshSpec::Structured { jitter, .. } = s.mesh else { panic!("structured mesh expected") };
    assert!(jitter > 0.0);
    let setup = s.instantiate().unwrap();
    assert_eq!(setup.mesh.num_cells(), 2500);
    let r = swft_core::mesh::validate_mesh(&setup.mesh);
    assert_eq!((r.untagged_edges, r.negative_area_cells), (0, 0));
}
