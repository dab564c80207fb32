//! Frequency and revival estimates for oscillating series.

use std::f64::consts::PI;

/// Angular frequency maximizing the discrete-time Fourier power of the
/// mean-removed samples, searched on `[ω_min, ω_max]` with `grid` points.
pub fn dominant_frequency(
    times: &[f64],
    values: &[f64],
    omega_min: f64,
    omega_max: f64,
    grid: usize,
) -> f64 {
    let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
    let power = |w: f64| {
        let (mut re, mut im) = (0.0, 0.0);
        for (t, v) in times.iter().zip(values) {
            re += (v - mean) * (w * t).cos();
            im += (v - mean) * (w * t).sin();
        }
        re * re + im * im
    };
    let grid = grid.max(2);
    (0..grid)
        .map(|k| omega_min + (omega_max - omega_min) * k as f64 / (grid - 1) as f64)
        .map(|w| (w, power(w)))
        .fold((omega_min, f64::MIN), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        })
        .0
}

/// Index of the largest local maximum after the series first dips below
/// `floor`, i.e. the first revival. `None` when the series never dips.
pub fn first_revival(values: &[f64], floor: f64) -> Option<usize> {
    let dip = values.iter().position(|&v| v < floor)?;
    (dip + 1..values.len())
        .filter(|&k| k + 1 >= values.len() || values[k] >= values[k + 1])
        .filter(|&k| values[k] >= values[k - 1])
        .max_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap().then(b.cmp(&a)))
}

/// Period `2π/ω`.
pub fn period(omega: f64) -> f64 {
    2.0 * PI / omega
}
