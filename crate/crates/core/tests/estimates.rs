use vortinv::field::{mean, Grid};
use vortinv::fixtures::Fixture;
use vortinv::forward::SolverConfig;
use vortinv::harness::{elliptic_constant_probe, lemma_bounds_check, BoundKind, LemmaReport};
use vortinv::inverse::recover_projection;

fn reports(n: usize) -> Vec<LemmaReport> {
    let g = Grid::unit_square(n).unwrap();
    let c = SolverConfig::new(g, 1e-3 * 64.0 / (n - 1) as f64, 0.5);
    [
        Fixture::Taylor,
        Fixture::Mode { m: 1, n: 2, amp: 1.0 },
        Fixture::RandomStream { seed: 1, modes: 4 },
        Fixture::RandomStream { seed: 7, modes: 3 },
        Fixture::Constant(2.0),
    ]
    .iter()
    .map(|f| {
        let w = f.vorticity(g).unwrap();
        lemma_bounds_check(&recover_projection(&w, mean(&w), &c).unwrap().trajectory)
    })
    .collect()
}

#[test]
fn empirical_constants_are_grid_stable() {
    let (coarse, fine) = (reports(33), reports(65));
    for (a, b) in coarse.iter().zip(&fine) {
        assert!(a.passed() && b.passed());
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            if ra.kind != BoundKind::Empirical || rb.ratio < 1e-6 {
                continue;
            }
            let change = (ra.ratio / rb.ratio - 1.0).abs();
            assert!(change <= 0.10, "{}: {} vs {}", ra.name, ra.ratio, rb.ratio);
        }
    }
}

#[test]
fn elliptic_probe_maximum_is_grid_stable() {
    let a = elliptic_constant_probe(&Grid::unit_square(33).unwrap(), 100, 42).unwrap();
    let b = elliptic_constant_probe(&Grid::unit_square(65).unwrap(), 100, 42).unwrap();
    assert!((a.h1_over_l2.max / b.h1_over_l2.max - 1.0).abs() <= 0.10);
    assert!((a.h2_over_h1.max / b.h2_over_h1.max - 1.0).abs() <= 0.10);
}
