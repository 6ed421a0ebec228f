use calderonlab::laplace::GreenKernel;
use calderonlab::runge::*;
use calderonlab::C64;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let pair = NestedPair::dented_disc(1.5, 0.3, [0.35, 0.65], 384, 384, 800, 11).unwrap();
    let green = GreenKernel::new(pair.omega2.clone());
    let target = windowed_polynomial_target(
        &pair,
        &green,
        vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.5), C64::new(0.3, 0.0)],
    )
    .unwrap();
    let quad = pair.omega1.interior_quadrature(48, 96);
    println!("setup [{:?}]", t0.elapsed());
    let mut prev = f64::INFINITY;
    for &n in &[200usize, 400, 800] {
        let t1 = Instant::now();
        let approx = runge_approximate(&pair, &green, &target, &quad, 0.0, n).unwrap();
        println!(
            "n={n}: rel_l2={:.4e} abs={:.4e} monotone={} [{:?}]",
            approx.relative_l2_error,
            approx.l2_error,
            approx.relative_l2_error <= prev * 1.0001,
            t1.elapsed()
        );
        prev = approx.relative_l2_error;
    }
    println!("total [{:?}]", t0.elapsed());
}
