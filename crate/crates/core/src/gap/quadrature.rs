//! Gauss–Legendre rules.

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_and_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let p = if n == 0 { 1.0 } else { p1 };
    (p, nf * (z * p - p0) / (z * z - 1.0))
}

/// Composite rule: `∫ f` over consecutive panels `edges[i]..edges[i+1]`.
pub fn integrate_panels(f: impl Fn(f64) -> f64, edges: &[f64], rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let (x, w) = rule;
    edges
        .windows(2)
        .map(|e| {
            let half = 0.5 * (e[1] - e[0]);
            let mid = 0.5 * (e[1] + e[0]);
            half * x.iter().zip(w).map(|(xi, wi)| wi * f(mid + half * xi)).sum::<f64>()
        })
        .sum()
}

/// Panel edges on `[0, hi]` refined geometrically toward `0`.
pub fn graded_edges(hi: f64, levels: usize) -> Vec<f64> {
    let mut edges: Vec<f64> = (0..=levels).map(|k| hi * 0.5f64.powi((levels - k) as i32)).collect();
    edges.insert(0, 0.0);
    edges
}
