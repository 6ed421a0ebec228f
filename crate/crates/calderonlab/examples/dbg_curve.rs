use calderonlab::watermelon::BarrierRegion;

fn main() {
    let region = BarrierRegion::new(0.05, 10.0, 2.0, 0.5).unwrap();
    for m in [1024usize, 1536, 2048] {
        let curve = region.outer_curve(m);
        let min_re = curve.pos.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
        let central: f64 = curve.pos.iter().filter(|p| p.y.abs() <= 2.0 && p.x < 0.0)
            .map(|p| (p.x - region.cut_abscissa).abs()).fold(0.0, f64::max);
        let mid: f64 = curve.pos.iter().filter(|p| p.y.abs() > 2.0 && p.y.abs() <= 6.0 && p.x < 0.0)
            .map(|p| (p.x - region.cut_abscissa).abs()).fold(0.0, f64::max);
        println!("m={m} min_re-cut={:.3e} central_defect={central:.3e} mid_defect={mid:.3e} len={:.4}", min_re - region.cut_abscissa, curve.length);
    }
}
