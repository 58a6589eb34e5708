//! Small numeric helpers: log-spaced grids, bisection brackets, compensated
//! summation.

/// Log-spaced grid `base^k` for `k` from `lo` to `hi` with `per_octave`
/// points per doubling (base 2 octaves).
pub fn log2_grid(lo_exp: f64, hi_exp: f64, per_octave: usize) -> Vec<f64> {
    assert!(hi_exp > lo_exp && per_octave >= 1);
    let steps = ((hi_exp - lo_exp) * per_octave as f64).round() as usize;
    (0..=steps)
        .map(|i| {
            let e = lo_exp + i as f64 / per_octave as f64;
            e.exp2()
        })
        .collect()
}

/// Neumaier compensated summation; the accumulation order is the iteration
/// order, so results are reproducible across thread counts as long as each
/// sum is performed on one thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Relative difference `|a-b| / max(|a|,|b|,floor)`.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    (a - b).abs() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = log2_grid(-2.0, 2.0, 2);
        assert_eq!(g.len(), 9);
        assert!((g[0] - 0.25).abs() < 1e-15);
        assert!((g[8] - 4.0).abs() < 1e-15);
    }

    #[test]
    fn compensated_beats_naive() {
        let vals: Vec<f64> = (0..100_000).map(|i| 1e-3 + (i as f64) * 1e-12).collect();
        let naive: f64 = vals.iter().sum();
        let comp = compensated_sum(vals.iter().copied());
        let exact = 1e-3 * 1e5 + 1e-12 * (99_999.0 * 100_000.0 / 2.0);
        assert!((comp - exact).abs() <= (naive - exact).abs());
    }
}
