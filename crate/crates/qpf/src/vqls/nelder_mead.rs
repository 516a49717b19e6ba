//! Derivative-free Nelder-Mead simplex minimizer used for the circuit
//! parameter search.

/// Outcome of one simplex run.
#[derive(Debug, Clone)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub evaluations: usize,
}

/// Minimizes `f` starting from `x0` with an axis-aligned initial simplex of
/// the given step. Stops when the best value drops to `target`, the simplex
/// collapses, or `max_evals` evaluations are spent.
pub fn minimize<F>(
    f: &mut F,
    x0: &[f64],
    step: f64,
    max_evals: usize,
    target: f64,
) -> SimplexOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    // Initial simplex: x0 plus one vertex per axis.
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let f0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), f0));
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += step;
        let fv = eval(&v, &mut evals);
        simplex.push((v, fv));
    }

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

    loop {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let best = simplex[0].1;
        let worst = simplex[dim].1;
        if best <= target
            || evals >= max_evals
            || (worst - best).abs() <= 1e-16 * (1.0 + best.abs())
        {
            return SimplexOutcome {
                x: simplex[0].0.clone(),
                f: best,
                evaluations: evals,
            };
        }

        // Centroid of all vertices but the worst.
        let mut centroid = vec![0.0; dim];
        for (v, _) in simplex.iter().take(dim) {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / dim as f64;
            }
        }

        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&simplex[dim].0)
            .map(|(c, w)| c + alpha * (c - w))
            .collect();
        let f_reflect = eval(&reflect, &mut evals);

        if f_reflect < simplex[0].1 {
            // Try expanding further along the same direction.
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&simplex[dim].0)
                .map(|(c, w)| c + gamma * (c - w))
                .collect();
            let f_expand = eval(&expand, &mut evals);
            simplex[dim] = if f_expand < f_reflect {
                (expand, f_expand)
            } else {
                (reflect, f_reflect)
            };
            continue;
        }
        if f_reflect < simplex[dim - 1].1 {
            simplex[dim] = (reflect, f_reflect);
            continue;
        }

        // Contract toward the better of worst/reflected.
        let (anchor, f_anchor) = if f_reflect < simplex[dim].1 {
            (&reflect, f_reflect)
        } else {
            (&simplex[dim].0, simplex[dim].1)
        };
        let contract: Vec<f64> = centroid
            .iter()
            .zip(anchor)
            .map(|(c, a)| c + rho * (a - c))
            .collect();
        let f_contract = eval(&contract, &mut evals);
        if f_contract < f_anchor {
            simplex[dim] = (contract, f_contract);
            continue;
        }

        // Shrink everything toward the best vertex.
        let best_v = simplex[0].0.clone();
        for entry in simplex.iter_mut().skip(1) {
            let v: Vec<f64> = best_v
                .iter()
                .zip(&entry.0)
                .map(|(b, x)| b + sigma * (x - b))
                .collect();
            let fv = eval(&v, &mut evals);
            *entry = (v, fv);
        }
    }
}
