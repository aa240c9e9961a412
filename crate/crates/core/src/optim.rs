//! Derivative-free Nelder–Mead minimization on small fixed dimensions.

/// Stopping and scale parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexConfig {
    /// Edge length of the initial simplex.
    pub initial_step: f64,
    /// Converged once every vertex lies within this distance of the best one.
    pub diameter_tol: f64,
    pub max_evals: usize,
}

impl Default for SimplexConfig {
    fn default() -> Self {
        Self {
            initial_step: 0.2,
            diameter_tol: 1e-4,
            max_evals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

fn dist<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn lerp<const N: usize>(from: &[f64; N], to: &[f64; N], t: f64) -> [f64; N] {
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = from[i] + t * (to[i] - from[i]);
    }
    out
}

/// Standard Nelder–Mead (reflection 1, expansion 2, contraction ½, shrink ½).
/// Ties keep the earlier vertex, so the result is deterministic.
pub fn minimize<const N: usize, F>(mut f: F, x0: [f64; N], cfg: &SimplexConfig) -> Minimum<N>
where
    F: FnMut(&[f64; N]) -> f64,
{
    let mut evals = 0usize;
    let mut eval = |x: &[f64; N], evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    let mut pts: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    let v0 = eval(&x0, &mut evals);
    pts.push((x0, v0));
    for i in 0..N {
        let mut x = x0;
        x[i] += cfg.initial_step;
        let v = eval(&x, &mut evals);
        pts.push((x, v));
    }

    let mut converged = false;
    loop {
        pts.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = pts[1..]
            .iter()
            .map(|(x, _)| dist(x, &pts[0].0))
            .fold(0.0, f64::max);
        if diameter < cfg.diameter_tol {
            converged = true;
            break;
        }
        if evals >= cfg.max_evals {
            break;
        }

        let mut centroid = [0.0; N];
        for (x, _) in &pts[..N] {
            for i in 0..N {
                centroid[i] += x[i] / N as f64;
            }
        }
        let (worst, f_worst) = pts[N];
        let f_best = pts[0].1;
        let f_second = pts[N - 1].1;

        let xr = lerp(&centroid, &worst, -1.0);
        let fr = eval(&xr, &mut evals);
        if fr < f_best {
            let xe = lerp(&centroid, &worst, -2.0);
            let fe = eval(&xe, &mut evals);
            pts[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < f_second {
            pts[N] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < f_worst {
            let xc = lerp(&centroid, &xr, 0.5);
            (xc, eval(&xc, &mut evals))
        } else {
            let xc = lerp(&centroid, &worst, 0.5);
            (xc, eval(&xc, &mut evals))
        };
        if fc < fr.min(f_worst) {
            pts[N] = (xc, fc);
            continue;
        }
        let best = pts[0].0;
        for p in pts.iter_mut().skip(1) {
            let x = lerp(&best, &p.0, 0.5);
            *p = (x, eval(&x, &mut evals));
        }
    }

    Minimum {
        x: pts[0].0,
        value: pts[0].1,
        evals,
        converged,
    }
}
