mod common;
use std::time::Instant;
use carnot_ineq::fields::make_rellich_extremizer;
use carnot_ineq::ineq::{gaussian_equality_report, rellich_report, sharpness_sweep, sweep_cutoff_radius, SweepInequality, RELLICH_SWEEP_DELTA, RELLICH_SWEEP_EPS};
use carnot_ineq::{GroupSpec, IntegrationConfig};
use common::rellich_quotient_oracle;

#[test]
fn probe_rellich_point() {
    let g = GroupSpec::heisenberg(2).unwrap();
    let eps = 0.04;
    let field = make_rellich_extremizer(&g, 0.0, eps, RELLICH_SWEEP_DELTA, sweep_cutoff_radius(eps)).unwrap();
    let oracle = rellich_quotient_oracle(6.0, 0.0, field.profile());
    let t0 = Instant::now();
    let mut cfg = IntegrationConfig::mc(8_000, 32, 3);
    let sup = carnot_ineq::fields::ScalarField::support(&field);
    cfg.shells = (f64::ln(sup.outer/sup.inner)/0.35).ceil() as u32;
    let rep = rellich_report(&g, 0.0, &field, &cfg).unwrap();
    println!("rellich eps={eps}: mc={:.4} ± {:.4} oracle={oracle:.4} shells={} t={:?}", rep.quotient, rep.sigma, cfg.shells, t0.elapsed());
}

#[test]
fn probe_rellich_sweep() {
    let g = GroupSpec::heisenberg(2).unwrap();
    let t0 = Instant::now();
    let cfg = IntegrationConfig::mc(8_000, 32, 5);
    let sw = sharpness_sweep(&g, SweepInequality::Rellich { alpha: 0.0 }, &RELLICH_SWEEP_EPS, &cfg).unwrap();
    println!("rellich sweep: limit={:.4} ± {:.4} residual={:.3} pts={:?} t={:?}", sw.limit, sw.limit_sigma, sw.residual, sw.points.iter().map(|p|(p.eps, p.quotient)).collect::<Vec<_>>(), t0.elapsed());
}

#[test]
fn probe_gaussian_equality() {
    let g = GroupSpec::heisenberg(1).unwrap();
    for samples in [100_000u64, 1_000_000] {
        let t0 = Instant::now();
        let cfg = IntegrationConfig::mc(samples, 32, 11);
        let rep = gaussian_equality_report(&g, 1.0, &cfg).unwrap();
        println!("gauss beta=1 samples={samples}: q={:.6} target={:.1} ratio={:.6} ± {:.6} t={:?}",
            rep.quotient, rep.sharp_constant.unwrap(), rep.quotient/rep.sharp_constant.unwrap(), rep.sigma/rep.sharp_constant.unwrap(), t0.elapsed());
    }
}
