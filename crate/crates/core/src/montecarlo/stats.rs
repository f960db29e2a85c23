//! Running mean and variance with an order-stable merge.

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct RunningStats {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub(crate) fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Chan et al. pairwise combination.
    pub(crate) fn merge(&mut self, other: &RunningStats) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let frac = other.n as f64 / n as f64;
        self.mean += delta * frac;
        self.m2 += other.m2 + delta * delta * self.n as f64 * frac;
        self.n = n;
    }

    pub(crate) fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample standard deviation; zero for fewer than two observations.
    pub(crate) fn sd(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2.max(0.0) / (self.n - 1) as f64).sqrt()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000)
            .map(|i| ((i * 37) % 101) as f64 * 0.3 - 4.0)
            .collect();
        let mut whole = RunningStats::default();
        xs.iter().for_each(|x| whole.push(*x));

        let mut merged = RunningStats::default();
        for chunk in xs.chunks(77) {
            let mut part = RunningStats::default();
            chunk.iter().for_each(|x| part.push(*x));
            merged.merge(&part);
        }
        assert!((whole.mean() - merged.mean()).abs() < 1e-12);
        assert!((whole.sd() - merged.sd()).abs() < 1e-12);

        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 999.0).sqrt();
        assert!((whole.sd() - sd).abs() < 1e-12);
    }

    #[test]
    fn constant_input_keeps_exact_mean() {
        let mut a = RunningStats::default();
        (0..10).for_each(|_| a.push(32.0));
        let mut b = RunningStats::default();
        (0..5).for_each(|_| b.push(32.0));
        a.merge(&b);
        assert_eq!(a.mean(), 32.0);
        assert_eq!(a.sd(), 0.0);
        assert_eq!(RunningStats::default().sd(), 0.0);
    }
}
