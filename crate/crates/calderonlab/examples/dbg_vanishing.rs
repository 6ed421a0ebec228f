use calderonlab::geometry::{make_domain, ShapeSpec};
use calderonlab::pairing::PotentialGrid;
use calderonlab::watermelon::*;
use calderonlab::{C64, Pt2};
use std::sync::Arc;
use std::time::Instant;

fn main() {
    // toy propagation at the standard configuration
    let c = 0.2;
    let h = 0.3;
    let log_f = move |s: C64| {
        let s_sq = s * s;
        (-s_sq.re - c) / (2.0 * h)
    };
    let t0 = Instant::now();
    let params = PropagateParams::standard(0.05, h);
    let prop = propagate_decay(&log_f, &params).unwrap();
    println!(
        "toy: delta_used={} c'={:.6e} slack={:.3e} pass={} [{:?}]",
        prop.delta_used, prop.c_prime, prop.verdict.max_slack, prop.verdict.pass, t0.elapsed()
    );

    // vanishing configuration: bump supported away from the strip
    let d = Arc::new(
        make_domain(ShapeSpec::Circle { center: [-1.0, 0.0], radius: 1.0 }, 256).unwrap(),
    );
    let q = Arc::new(d.interior_quadrature(160, 320));
    let f_van = PotentialGrid::bump(d.clone(), q.clone(), Pt2::new(-1.0, 0.0), 0.45, 1.0);
    let cfg = VanishingConfig::standard(vec![0.02, 0.01, 0.005]);
    let t1 = Instant::now();
    let rep = run_vanishing_pipeline(&f_van, &cfg).unwrap();
    println!(
        "vanishing: c_data={:.4} certified={} delta_used={} c'={:.6e} limit={:.3e} sup_f={} strip_f={:.3e} pass={} [{:?}]",
        rep.c_data, rep.certified, rep.delta_used, rep.c_prime,
        rep.conclusion.extrapolated_limit, rep.sup_f, rep.strip_max_f_direct, rep.pass, t1.elapsed()
    );

    // contrapositive: bump overlapping the strip
    let f_bad = PotentialGrid::bump(d.clone(), q.clone(), Pt2::new(-0.15, 0.0), 0.3, 1.0);
    let t2 = Instant::now();
    let rep2 = run_vanishing_pipeline(&f_bad, &cfg).unwrap();
    println!(
        "contrapositive: c_data={:.4} certified={} limit={:.3e} max_f={:.3} strip_f={:.3} [{:?}]",
        rep2.c_data, rep2.certified, rep2.conclusion.extrapolated_limit,
        rep2.sup_f, rep2.strip_max_f_direct, t2.elapsed()
    );
}
