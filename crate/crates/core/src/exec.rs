//! Indexed task execution, data-parallel with the `parallel` feature and
//! sequential otherwise.
//!
//! Every trial loop in the crate goes through [`Exec::map`]: task `i` gets
//! its own derived random stream and results come back in index order, so the
//! output is identical for any thread count and for either backend.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[derive(Default)]
pub enum Exec {
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}


impl Exec {
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
        }
    }

    pub fn map_slice<'a, S, T, F>(self, items: &'a [S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&'a S) -> T + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
        }
    }
}

/// Neumaier-compensated sum, evaluated in slice order.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Mean and sample standard deviation.
pub fn mean_and_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = compensated_sum(values.iter().copied()) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean)));
    (mean, (ss / (n - 1) as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backends_agree() {
        let f = |i: usize| (i * i) as u64 % 17;
        let seq = Exec::Sequential.map(1000, f);
        assert_eq!(Exec::default().map(1000, f), seq);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let values = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(values), 2.0);
    }

    #[test]
    fn mean_and_sd_of_constant() {
        assert_eq!(mean_and_sd(&[3.0, 3.0, 3.0]), (3.0, 0.0));
        let (m, s) = mean_and_sd(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 2f64.sqrt()).abs() < 1e-15);
    }
}
