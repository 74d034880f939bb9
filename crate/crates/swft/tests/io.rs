use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use swft::output::{cell_csv, cell_vtk, field_from_rows, parse_cell_csv, parse_vtk_cell_data};
use swft::RunConfig;
use swft_core::mesh::{build_jittered_mesh, Diagonal};
use swft_core::state::{build_bathymetry, BathymetrySpec};
use swft_core::{ConservedField, PhysParams, Rect};

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn cell_tables_round_trip_bit_exactly(seed in any::<u64>(), nx in 1usize..6, ny in 1usize..6, delta in 0.0..2.0f64) {
        let mesh = build_jittered_mesh(nx, ny, Rect::new(-1.0, 2.0, 0.0, 1.5), Diagonal::Mirrored, 0.2, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z: Vec<f64> = (0..mesh.num_vertices()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let bathy = build_bathymetry(&mesh, &BathymetrySpec::Vertex(z)).unwrap();
        let p = PhysParams { delta, ..PhysParams::default() };
        let field = ConservedField::new(
            (0..mesh.num_cells())
                .map(|_| {
                    let h: f64 = if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..3.0) };
                    let c: f64 = rng.gen_range(0.0..1.0);
                    let r = 1.0 + delta * c;
                    [h * r, h * r * rng.gen_range(-2.0..2.0), h * r * rng.gen_range(-2.0..2.0), h * c]
                })
                .collect(),
        );
        let rows = parse_cell_csv(&cell_csv(&mesh, &bathy, &p, &field).unwrap()).unwrap();
        prop_assert_eq!(&field_from_rows(&rows), &field);
        let prims = field.primitives(&bathy, &p).unwrap();
        let vtk = parse_vtk_cell_data(&cell_vtk(&mesh, &bathy, &p, &field, "t").unwrap()).unwrap();
        for (j, (row, s)) in rows.iter().zip(&prims).enumerate() {
            prop_assert_eq!(row.prim, *s);
            prop_assert_eq!(row.area, mesh.area(j));
            prop_assert_eq!(vtk[0].1[j], s.h);
            prop_assert_eq!(vtk[1].1[j], s.w);
        }
    }

    #[test]
    fn dump_is_a_fixed_point(cfl in 0.01..=1.0f64, n in 0.0..0.3f64, t_end in 0.0..1e3f64, nx in 1usize..200, jitter in 0.0..0.45f64) {
        let text = format!(
            "[run]\nscenario = example1\n[mesh]\nnx = {nx}\njitter = {jitter}\n[physics]\ncfl = {cfl}\nmanning_n = {n}\n[time]\nt_end = {t_end}\n"
        );
        let cfg = RunConfig::parse(&text, PathBuf::new()).unwrap();
        prop_assert_eq!(cfg.params.cfl, cfl);
        let dumped = cfg.dump();
        let again = RunConfig::parse(&dumped, PathBuf::new()).unwrap();
        prop_assert_eq!(&again, &cfg);
        prop_assert_eq!(again.dump(), dumped);
    }
}
