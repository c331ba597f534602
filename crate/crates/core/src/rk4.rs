//! Classical fixed-step fourth-order Runge-Kutta integration.
//!
//! Deliberately kept free of any code shared with the adaptive integrator so
//! the two can serve as independent cross-checks of each other.

/// Advances `y' = f(t, y)` by `n` steps of size `h`, returning every node.
pub fn rk4_path<F>(f: F, t0: f64, y0: [f64; 2], h: f64, n: usize) -> Vec<(f64, [f64; 2])>
where
    F: Fn(f64, [f64; 2]) -> [f64; 2],
{
    let mut out = Vec::with_capacity(n + 1);
    let mut y = y0;
    out.push((t0, y));
    for k in 0..n {
        let t = t0 + h * k as f64;
        let k1 = f(t, y);
        let k2 = f(
            t + 0.5 * h,
            [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]],
        );
        let k3 = f(
            t + 0.5 * h,
            [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]],
        );
        let k4 = f(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        y = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        out.push((t0 + h * (k + 1) as f64, y));
    }
    out
}
