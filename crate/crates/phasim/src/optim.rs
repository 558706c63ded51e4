//! Derivative-free simplex minimization (Nelder-Mead).
//!
//! Small, deterministic implementation tuned for smooth low-dimensional
//! objectives: standard reflection/expansion/contraction/shrink moves,
//! termination on simplex diameter and objective spread. Ties in the
//! vertex ordering are broken by insertion order so runs are bit-stable.

/// Nelder-Mead settings. Defaults terminate when the simplex diameter
/// falls below 1e-12 and the objective spread below 1e-13.
#[derive(Debug, Clone)]
pub struct NelderMead {
    pub max_evaluations: usize,
    /// Convergence threshold on the simplex ∞-norm diameter.
    pub x_tolerance: f64,
    /// Convergence threshold on max − min objective value over vertices.
    pub f_tolerance: f64,
    /// Initial simplex step along each coordinate.
    pub initial_step: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_evaluations: 40_000,
            x_tolerance: 1e-12,
            f_tolerance: 1e-13,
            initial_step: 0.5,
        }
    }
}

/// Result of one minimization run.
#[derive(Debug, Clone)]
pub struct MinimizeOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECTION: f64 = 1.0;
const EXPANSION: f64 = 2.0;
const CONTRACTION: f64 = 0.5;
const SHRINK: f64 = 0.5;

impl NelderMead {
    pub fn minimize<F: Fn(&[f64]) -> f64>(&self, objective: F, start: &[f64]) -> MinimizeOutcome {
        let dim = start.len();
        assert!(dim > 0, "cannot minimize over zero parameters");
        let mut evaluations = 0usize;
        let eval = |x: &[f64], evaluations: &mut usize| {
            *evaluations += 1;
            let v = objective(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
        simplex.push(start.to_vec());
        for i in 0..dim {
            let mut vertex = start.to_vec();
            vertex[i] += self.initial_step;
            simplex.push(vertex);
        }
        let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evaluations)).collect();

        let mut converged = false;
        while evaluations < self.max_evaluations {
            // Order vertices best-first; stable sort keeps ties deterministic.
            let mut order: Vec<usize> = (0..=dim).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            let reordered: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
            let revalued: Vec<f64> = order.iter().map(|&i| values[i]).collect();
            simplex = reordered;
            values = revalued;

            if self.has_converged(&simplex, &values) {
                converged = true;
                break;
            }

            let centroid: Vec<f64> = (0..dim)
                .map(|j| simplex[..dim].iter().map(|v| v[j]).sum::<f64>() / dim as f64)
                .collect();
            let worst = simplex[dim].clone();
            let reflected: Vec<f64> = (0..dim)
                .map(|j| centroid[j] + REFLECTION * (centroid[j] - worst[j]))
                .collect();
            let f_reflected = eval(&reflected, &mut evaluations);

            if f_reflected < values[0] {
                let expanded: Vec<f64> = (0..dim)
                    .map(|j| centroid[j] + EXPANSION * (reflected[j] - centroid[j]))
                    .collect();
                let f_expanded = eval(&expanded, &mut evaluations);
                if f_expanded < f_reflected {
                    simplex[dim] = expanded;
                    values[dim] = f_expanded;
                } else {
                    simplex[dim] = reflected;
                    values[dim] = f_reflected;
                }
            } else if f_reflected < values[dim - 1] {
                simplex[dim] = reflected;
                values[dim] = f_reflected;
            } else {
                let (base, f_base) = if f_reflected < values[dim] {
                    (reflected.clone(), f_reflected)
                } else {
                    (worst.clone(), values[dim])
                };
                let contracted: Vec<f64> = (0..dim)
                    .map(|j| centroid[j] + CONTRACTION * (base[j] - centroid[j]))
                    .collect();
                let f_contracted = eval(&contracted, &mut evaluations);
                if f_contracted < f_base {
                    simplex[dim] = contracted;
                    values[dim] = f_contracted;
                } else {
                    // Shrink toward the best vertex.
                    let best_vertex = simplex[0].clone();
                    for i in 1..=dim {
                        for (coord, &anchor) in simplex[i].iter_mut().zip(&best_vertex) {
                            *coord = anchor + SHRINK * (*coord - anchor);
                        }
                        values[i] = eval(&simplex[i].clone(), &mut evaluations);
                    }
                }
            }
        }

        let mut best = 0usize;
        for i in 1..=dim {
            if values[i] < values[best] {
                best = i;
            }
        }
        MinimizeOutcome {
            x: simplex[best].clone(),
            value: values[best],
            evaluations,
            converged,
        }
    }

    fn has_converged(&self, simplex: &[Vec<f64>], values: &[f64]) -> bool {
        let dim = simplex[0].len();
        let mut diameter = 0.0f64;
        for vertex in &simplex[1..] {
            for j in 0..dim {
                diameter = diameter.max((vertex[j] - simplex[0][j]).abs());
            }
        }
        let spread = match (
            values.iter().cloned().reduce(f64::max),
            values.iter().cloned().reduce(f64::min),
        ) {
            (Some(max), Some(min)) if max.is_finite() => max - min,
            // All-infinite objectives (e.g. schemes with no phase
            // sensitivity anywhere) have nothing left to improve.
            (Some(max), _) if max.is_infinite() => return true,
            _ => f64::INFINITY,
        };
        diameter < self.x_tolerance && spread < self.f_tolerance
    }
}
