//! Streaming moments and the small statistical helpers used by the
//! Monte-Carlo checks.

/// Per-component running mean and variance (Welford).
#[derive(Clone, Debug)]
pub struct MomentAccumulator {
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl MomentAccumulator {
    pub fn new(width: usize) -> Self {
        MomentAccumulator {
            count: 0,
            mean: vec![0.0; width],
            m2: vec![0.0; width],
        }
    }

    pub fn push(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.mean.len());
        self.count += 1;
        let n = self.count as f64;
        for ((m, s), &v) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(values) {
            let delta = v - *m;
            *m += delta / n;
            *s += delta * (v - *m);
        }
    }

    /// Combines two accumulators (parallel reduction).
    pub fn merge(&mut self, other: &MomentAccumulator) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        for k in 0..self.mean.len() {
            let delta = other.mean[k] - self.mean[k];
            self.mean[k] += delta * nb / n;
            self.m2[k] += other.m2[k] + delta * delta * na * nb / n;
        }
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Unbiased sample variance per component.
    pub fn variance(&self) -> Vec<f64> {
        let denom = (self.count.max(2) - 1) as f64;
        self.m2.iter().map(|s| s / denom).collect()
    }

    /// Standard error of the mean, `sd / sqrt(K)`.
    pub fn stderr(&self) -> Vec<f64> {
        let n = self.count.max(1) as f64;
        self.variance()
            .into_iter()
            .map(|v| (v / n).sqrt())
            .collect()
    }
}

/// Scalar mean and unbiased sample standard deviation.
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let mut acc = MomentAccumulator::new(1);
    values.iter().for_each(|v| acc.push(&[*v]));
    let sd = if values.len() > 1 {
        acc.variance()[0].sqrt()
    } else {
        0.0
    };
    (acc.mean()[0], sd)
}

/// Area under the ROC curve of `scores` against binary `labels`
/// (Mann-Whitney statistic, ties counted one half).
pub fn auc(scores: &[f64], labels: &[bool]) -> Option<f64> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let positives = labels.iter().filter(|&&l| l).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return None;
    }
    // average ranks over tied groups
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && scores[idx[j + 1]] == scores[idx[i]] {
            j += 1;
        }
        let avg_rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            if labels[k] {
                rank_sum_pos += avg_rank;
            }
        }
        i = j + 1;
    }
    let p = positives as f64;
    Some((rank_sum_pos - p * (p + 1.0) / 2.0) / (p * negatives as f64))
}
