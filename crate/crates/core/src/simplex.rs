//! Nelder-Mead simplex minimization.

#[derive(Clone, Debug)]
pub(crate) struct SimplexResult {
    pub point: Vec<f64>,
    pub value: f64,
    pub converged: bool,
}

/// Minimizes `f` from `start` with an initial simplex of edge `step`. Stops
/// when every vertex lies within `xtol` of the best one (max norm) and the
/// values agree to `ftol`, or after `max_iter` iterations.
pub(crate) fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    step: f64,
    xtol: f64,
    ftol: f64,
    max_iter: usize,
) -> SimplexResult {
    let d = start.len();
    let mut pts: Vec<Vec<f64>> = vec![start.to_vec()];
    for i in 0..d {
        let mut p = start.to_vec();
        p[i] += step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        let mut order: Vec<usize> = (0..=d).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let spread = pts[1..]
            .iter()
            .flat_map(|p| p.iter().zip(&pts[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        let fspread = (vals[d] - vals[0]).abs();
        if spread <= xtol && (fspread <= ftol || !vals[d].is_finite()) {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..d).map(|k| pts[..d].iter().map(|p| p[k]).sum::<f64>() / d as f64).collect();
        let along = |t: f64| -> Vec<f64> { (0..d).map(|k| centroid[k] + t * (pts[d][k] - centroid[k])).collect() };

        let refl = along(-1.0);
        let fr = f(&refl);
        if fr < vals[0] {
            let exp = along(-2.0);
            let fe = f(&exp);
            if fe < fr {
                pts[d] = exp;
                vals[d] = fe;
            } else {
                pts[d] = refl;
                vals[d] = fr;
            }
            continue;
        }
        if fr < vals[d - 1] {
            pts[d] = refl;
            vals[d] = fr;
            continue;
        }
        let (con, fc) = if fr < vals[d] {
            let c = along(-0.5);
            let v = f(&c);
            (c, v)
        } else {
            let c = along(0.5);
            let v = f(&c);
            (c, v)
        };
        if fc < vals[d].min(fr) {
            pts[d] = con;
            vals[d] = fc;
            continue;
        }
        // Shrink toward the best vertex.
        for i in 1..=d {
            let p: Vec<f64> = (0..d).map(|k| pts[0][k] + 0.5 * (pts[i][k] - pts[0][k])).collect();
            vals[i] = f(&p);
            pts[i] = p;
        }
    }
    let best = (0..=d).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    SimplexResult {
        point: pts[best].clone(),
        value: vals[best],
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let r = nelder_mead(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2) + (x[2] - 0.2).powi(2),
            &[0.0, 0.0, 0.0],
            0.3,
            1e-7,
            1e-14,
            2000,
        );
        assert!(r.converged);
        assert!((r.point[0] - 1.0).abs() < 1e-6 && (r.point[1] + 0.5).abs() < 1e-6);
    }

    #[test]
    fn rosenbrock_and_iteration_cap() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(rosen, &[-1.2, 1.0], 0.5, 1e-8, 1e-16, 5000);
        assert!(r.converged && (r.point[0] - 1.0).abs() < 1e-5);
        let capped = nelder_mead(rosen, &[-1.2, 1.0], 0.5, 1e-8, 1e-16, 5);
        assert!(!capped.converged);
    }

    #[test]
    fn infinite_values_are_avoided() {
        let r = nelder_mead(
            |x| if x[0] > 2.0 { f64::INFINITY } else { (x[0] - 1.9).powi(2) },
            &[0.0],
            1.0,
            1e-8,
            1e-14,
            500,
        );
        assert!((r.point[0] - 1.9).abs() < 1e-6);
    }
}
