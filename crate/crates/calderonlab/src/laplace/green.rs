//! Dirichlet Green kernel of a domain: fundamental solution plus a harmonic
//! corrector solved per source point (correctors share one factorization and
//! are cached).

use super::field::LayerField;
use super::nystrom::{fundamental, fundamental_grad_x, NystromSolver};
use crate::error::Result;
use crate::geometry::Domain2D;
use crate::{C64, Pt2};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

pub struct GreenEval {
    pub value: f64,
    /// Set when the source or target is within two boundary-node spacings of
    /// the boundary, where accuracy degrades.
    pub degraded: bool,
}

pub struct GreenKernel {
    pub domain: Arc<Domain2D>,
    solver: Arc<NystromSolver>,
    correctors: Mutex<HashMap<(u64, u64), Arc<LayerField>>>,
}

impl GreenKernel {
    pub fn new(domain: Arc<Domain2D>) -> Self {
        let solver = Arc::new(NystromSolver::new(domain.curve.clone()));
        Self {
            domain,
            solver,
            correctors: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_solver(domain: Arc<Domain2D>, solver: Arc<NystromSolver>) -> Self {
        Self {
            domain,
            solver,
            correctors: Mutex::new(HashMap::new()),
        }
    }

    /// Harmonic corrector h(., y) with boundary data -Phi(. - y).
    pub fn corrector(&self, y: Pt2) -> Result<Arc<LayerField>> {
        let key = (y.x.to_bits(), y.y.to_bits());
        if let Some(c) = self.correctors.lock().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let data: Vec<C64> = self
            .domain
            .boundary_nodes()
            .iter()
            .map(|&p| C64::new(-fundamental(p, y), 0.0))
            .collect();
        let density = self.solver.solve(&data)?;
        let layer = Arc::new(LayerField::new(self.solver.clone(), density, data));
        self.correctors.lock().unwrap().insert(key, layer.clone());
        Ok(layer)
    }

    pub fn eval(&self, x: Pt2, y: Pt2) -> Result<GreenEval> {
        let corrector = self.corrector(y)?;
        let value = fundamental(x, y) + corrector.evaluate(x).re;
        let cut = 2.0 * self.domain.curve.node_spacing();
        let degraded =
            self.domain.boundary_distance(x) < cut || self.domain.boundary_distance(y) < cut;
        Ok(GreenEval { value, degraded })
    }

    pub fn value(&self, x: Pt2, y: Pt2) -> Result<f64> {
        Ok(self.eval(x, y)?.value)
    }

    /// Gradient of G(., y) in the first argument.
    pub fn grad_x(&self, x: Pt2, y: Pt2) -> Result<[f64; 2]> {
        let corrector = self.corrector(y)?;
        let g0 = fundamental_grad_x(x, y);
        let gc = corrector.gradient(x);
        Ok([g0[0] + gc[0].re, g0[1] + gc[1].re])
    }
}
