//! Derivative-free Nelder–Mead minimization.

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub initial_step: f64,
    pub max_evaluations: usize,
    /// Stop once the spread of simplex values falls below this (absolute).
    pub f_tol: f64,
    /// Coordinates are clamped to `[-bound, bound]`.
    pub bound: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            initial_step: 1.0,
            max_evaluations: 2_000,
            f_tol: 1e-15,
            bound: f64::INFINITY,
        }
    }
}

impl NelderMead {
    /// Minimizes `f` from `x0`. Non-finite values are treated as `+∞`.
    /// The returned point is never worse than `x0`.
    pub fn minimize<F>(&self, mut f: F, x0: &[f64]) -> NelderMeadResult
    where
        F: FnMut(&[f64]) -> f64,
    {
        let dim = x0.len();
        let bound = self.bound;
        let clamp = |v: Vec<f64>| -> Vec<f64> { v.into_iter().map(|c| c.clamp(-bound, bound)).collect() };
        let mut evals = 0;
        let mut eval = |x: &[f64], evals: &mut usize| {
            *evals += 1;
            let v = f(x);
            if v.is_nan() { f64::INFINITY } else { v }
        };

        let start = clamp(x0.to_vec());
        if dim == 0 {
            let value = eval(&start, &mut evals);
            return NelderMeadResult { x: start, value, evaluations: evals };
        }

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        let v0 = eval(&start, &mut evals);
        simplex.push((start.clone(), v0));
        for i in 0..dim {
            let mut p = start.clone();
            p[i] += if p[i] + self.initial_step > bound { -self.initial_step } else { self.initial_step };
            let p = clamp(p);
            let v = eval(&p, &mut evals);
            simplex.push((p, v));
        }

        let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
        while evals < self.max_evaluations {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let (best, worst) = (simplex[0].1, simplex[dim].1);
            if worst.is_finite() && (worst - best).abs() <= self.f_tol * best.abs().max(1.0) {
                let diam = simplex
                    .iter()
                    .map(|(p, _)| p.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
                    .fold(0.0, f64::max);
                if diam < 1e-10 {
                    break;
                }
            }

            let centroid: Vec<f64> = (0..dim)
                .map(|c| simplex[..dim].iter().map(|(p, _)| p[c]).sum::<f64>() / dim as f64)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                clamp(centroid.iter().zip(&simplex[dim].0).map(|(c, w)| c + t * (c - w)).collect())
            };

            let xr = along(alpha);
            let fr = eval(&xr, &mut evals);
            if fr < simplex[0].1 {
                let xe = along(gamma);
                let fe = eval(&xe, &mut evals);
                simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[dim - 1].1 {
                simplex[dim] = (xr, fr);
            } else {
                let (xc, fc) = if fr < simplex[dim].1 {
                    let xc = along(rho);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                } else {
                    let xc = along(-rho);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                };
                if fc < simplex[dim].1.min(fr) {
                    simplex[dim] = (xc, fc);
                } else {
                    let b = simplex[0].0.clone();
                    for entry in simplex.iter_mut().skip(1) {
                        let p = clamp(b.iter().zip(&entry.0).map(|(a, q)| a + sigma * (q - a)).collect());
                        let v = eval(&p, &mut evals);
                        *entry = (p, v);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, value) = simplex.swap_remove(0);
        NelderMeadResult { x, value, evaluations: evals }
    }
}
