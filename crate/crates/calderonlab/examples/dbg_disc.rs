use calderonlab::geometry::{make_domain, ShapeSpec};
use calderonlab::laplace::{solve_dirichlet, DirichletProblem};
use calderonlab::{C64, Pt2};
use std::sync::Arc;

fn main() {
    let d = Arc::new(
        make_domain(ShapeSpec::Circle { center: [0.0, 0.0], radius: 1.0 }, 64).unwrap(),
    );
    let g: Vec<C64> = d.boundary_nodes().iter().map(|p| C64::new(p.x, 0.0)).collect();
    let u = solve_dirichlet(&DirichletProblem::new(d.clone(), g).unwrap()).unwrap();
    for &r in &[0.2, 0.5, 0.7, 0.85, 0.9, 0.95, 0.99] {
        let x = Pt2::new(r * 0.6_f64.cos(), r * 0.6_f64.sin());
        let v = u.evaluate(x);
        println!("r={r:.3} x1={:+.6} u={:+.6}{:+.6}i  err={:.3e}", x.x, v.re, v.im, (v - C64::new(x.x,0.0)).norm());
    }
    // spacing info
    println!("spacing = {}", d.curve.node_spacing());
}
