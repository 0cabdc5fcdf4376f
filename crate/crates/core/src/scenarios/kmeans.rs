use super::{FeatureMatrix, ScenarioError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KMeansOptions {
    pub k: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Convergence threshold on the largest centroid move (Euclidean).
    pub tol: f64,
    pub restarts: usize,
}

impl KMeansOptions {
    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            seed,
            max_iter: 300,
            tol: 1e-10,
            restarts: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub k: usize,
    /// Cluster index per row.
    pub assignments: Vec<usize>,
    /// `k` rows of `n_cols` values.
    pub centroids: Vec<Vec<f64>>,
    pub wcss: f64,
    pub rng_seed: u64,
    /// Restart that produced this result.
    pub restart: usize,
    pub iterations: usize,
    /// wcss after each Lloyd iteration of the winning restart.
    pub wcss_history: Vec<f64>,
}

impl Clustering {
    pub fn members(&self, cluster: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] == cluster)
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        for &a in &self.assignments {
            s[a] += 1;
        }
        s
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Seed for restart `r`; restarts draw from independent ChaCha streams.
fn restart_rng(seed: u64, r: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r as u64);
    rng
}

fn plus_plus_init(m: &FeatureMatrix, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = m.n_rows;
    let mut centroids = vec![m.row(rng.random_range(0..n)).to_vec()];
    let mut d2: Vec<f64> = (0..n).map(|i| dist2(m.row(i), &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, &d) in d2.iter().enumerate() {
                acc += d;
                if acc > target && d > 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        let c = m.row(pick).to_vec();
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(dist2(m.row(i), &c));
        }
        centroids.push(c);
    }
    centroids
}

fn assign(m: &FeatureMatrix, centroids: &[Vec<f64>], assignments: &mut [usize]) -> f64 {
    let mut total = 0.0;
    for (i, a) in assignments.iter_mut().enumerate() {
        let row = m.row(i);
        let mut best = (f64::INFINITY, 0);
        for (c, cen) in centroids.iter().enumerate() {
            let d = dist2(row, cen);
            if d < best.0 {
                best = (d, c);
            }
        }
        *a = best.1;
        total += best.0;
    }
    total
}

/// Gives every empty cluster the point farthest from its current centroid.
fn repair_empty(m: &FeatureMatrix, centroids: &mut [Vec<f64>], assignments: &mut [usize]) {
    let k = centroids.len();
    loop {
        let mut sizes = vec![0usize; k];
        for &a in assignments.iter() {
            sizes[a] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let mut far = (-1.0, usize::MAX);
        for i in 0..m.n_rows {
            if sizes[assignments[i]] < 2 {
                continue;
            }
            let d = dist2(m.row(i), &centroids[assignments[i]]);
            if d > far.0 {
                far = (d, i);
            }
        }
        if far.1 == usize::MAX {
            return;
        }
        assignments[far.1] = empty;
        centroids[empty] = m.row(far.1).to_vec();
    }
}

fn update_centroids(m: &FeatureMatrix, assignments: &[usize], centroids: &mut [Vec<f64>]) -> f64 {
    let k = centroids.len();
    let mut sums = vec![vec![0.0; m.n_cols]; k];
    let mut counts = vec![0usize; k];
    for (i, &a) in assignments.iter().enumerate() {
        counts[a] += 1;
        for (s, v) in sums[a].iter_mut().zip(m.row(i)) {
            *s += v;
        }
    }
    let mut shift: f64 = 0.0;
    for c in 0..k {
        if counts[c] == 0 {
            continue;
        }
        let inv = 1.0 / counts[c] as f64;
        let new: Vec<f64> = sums[c].iter().map(|s| s * inv).collect();
        shift = shift.max(dist2(&new, &centroids[c]).sqrt());
        centroids[c] = new;
    }
    shift
}

fn wcss_of(m: &FeatureMatrix, centroids: &[Vec<f64>], assignments: &[usize]) -> f64 {
    assignments
        .iter()
        .enumerate()
        .map(|(i, &a)| dist2(m.row(i), &centroids[a]))
        .sum()
}

fn lloyd(
    m: &FeatureMatrix,
    mut centroids: Vec<Vec<f64>>,
    opts: &KMeansOptions,
    restart: usize,
) -> Clustering {
    let mut assignments = vec![0; m.n_rows];
    assign(m, &centroids, &mut assignments);
    repair_empty(m, &mut centroids, &mut assignments);
    let mut history = Vec::new();
    let mut iterations = 0;
    loop {
        let shift = update_centroids(m, &assignments, &mut centroids);
        history.push(wcss_of(m, &centroids, &assignments));
        iterations += 1;
        if shift < opts.tol || iterations >= opts.max_iter {
            break;
        }
        let prev = assignments.clone();
        assign(m, &centroids, &mut assignments);
        repair_empty(m, &mut centroids, &mut assignments);
        if assignments == prev {
            break;
        }
    }
    let wcss = wcss_of(m, &centroids, &assignments);
    Clustering {
        k: centroids.len(),
        assignments,
        centroids,
        wcss,
        rng_seed: opts.seed,
        restart,
        iterations,
        wcss_history: history,
    }
}

fn best(results: Vec<Clustering>) -> Clustering {
    // Lowest wcss, ties to the lowest restart index.
    results
        .into_iter()
        .min_by(|a, b| a.wcss.total_cmp(&b.wcss).then(a.restart.cmp(&b.restart)))
        .expect("at least one restart")
}

/// k-means with the default options (10 restarts).
pub fn kmeans(m: &FeatureMatrix, k: usize, seed: u64) -> Result<Clustering, ScenarioError> {
    kmeans_with(m, &KMeansOptions::new(k, seed))
}

/// Best of `opts.restarts` k-means++ seeded Lloyd runs. Restarts run in
/// parallel; the result does not depend on scheduling.
pub fn kmeans_with(m: &FeatureMatrix, opts: &KMeansOptions) -> Result<Clustering, ScenarioError> {
    if opts.k == 0 || opts.k > m.n_rows {
        return Err(ScenarioError::InvalidK {
            k: opts.k,
            days: m.n_rows,
        });
    }
    let restarts = opts.restarts.max(1);
    let results: Vec<Clustering> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = restart_rng(opts.seed, r);
            let init = plus_plus_init(m, opts.k, &mut rng);
            lloyd(m, init, opts, r)
        })
        .collect();
    Ok(best(results))
}

/// wcss for each `k` (processed in ascending order). Besides the regular
/// restarts, each `k` also runs one restart started from the previous
/// solution plus the farthest points, so the curve never increases in `k`.
pub fn wcss_curve(
    m: &FeatureMatrix,
    k_values: &[usize],
    seed: u64,
) -> Result<Vec<(usize, f64)>, ScenarioError> {
    let mut ks = k_values.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let mut prev: Option<Clustering> = None;
    let mut out = Vec::with_capacity(ks.len());
    for k in ks {
        let opts = KMeansOptions::new(k, seed);
        let mut c = kmeans_with(m, &opts)?;
        if let Some(p) = &prev {
            let mut centroids = p.centroids.clone();
            let mut assignments = p.assignments.clone();
            while centroids.len() < k {
                let far = (0..m.n_rows)
                    .map(|i| (dist2(m.row(i), &centroids[assignments[i]]), i))
                    .fold((-1.0, 0), |a, b| if b.0 > a.0 { b } else { a });
                assignments[far.1] = centroids.len();
                centroids.push(m.row(far.1).to_vec());
            }
            let nested = lloyd(m, centroids, &opts, opts.restarts);
            if nested.wcss < c.wcss {
                c = nested;
            }
        }
        out.push((k, c.wcss));
        prev = Some(c);
    }
    Ok(out)
}
