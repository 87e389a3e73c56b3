use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::GraphError;

/// Master seed plus stream index; together they fix every random draw of a
/// trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngSeed { seed, stream }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// A derived seed for a sub-task, so one trial can draw several
    /// independent objects.
    pub fn child(&self, tag: u64) -> RngSeed {
        let mixed = self
            .seed
            .rotate_left(17)
            .wrapping_add(tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
            ^ 0xD1B5_4A32_D192_ED03;
        RngSeed::new(mixed, self.stream)
    }
}

/// Erdős–Rényi random graph G(n, p).
///
/// Dense regimes flip a coin per pair; below p = 0.1 the gaps between
/// successive edges are drawn from the geometric distribution instead, so
/// the cost is proportional to n + m.
pub fn gnp(n: usize, p: f64, seed: RngSeed) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidProbability(p));
    }
    if n > u32::MAX as usize {
        return Err(GraphError::TooLarge { n });
    }
    let mut rng = seed.rng();
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); n];
    if p == 0.0 || n < 2 {
        return Ok(Graph::from_sorted_rows(rows));
    }
    if p >= 0.1 {
        for v in 1..n {
            for u in 0..v {
                if p >= 1.0 || rng.gen::<f64>() < p {
                    rows[u].push(v as u32);
                    rows[v].push(u as u32);
                }
            }
        }
    } else {
        // Pairs are enumerated as (u, v) with u < v, ordered by v then u.
        let log_q = (1.0 - p).ln();
        let mut v: usize = 1;
        let mut u: i64 = -1;
        loop {
            let r: f64 = rng.gen();
            let skip = ((1.0 - r).ln() / log_q).floor();
            if !skip.is_finite() || skip > (n * n) as f64 {
                break;
            }
            u += 1 + skip as i64;
            while v < n && u >= v as i64 {
                u -= v as i64;
                v += 1;
            }
            if v >= n {
                break;
            }
            rows[u as usize].push(v as u32);
            rows[v].push(u as u32);
        }
    }
    // Rows receive neighbours in increasing order of the larger endpoint for
    // the smaller vertex, but the larger vertex sees its smaller neighbours
    // first and its larger ones later, so every row is already sorted.
    Ok(Graph::from_sorted_rows(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        let s = RngSeed::new(1, 0);
        assert_eq!(gnp(5, 0.0, s).unwrap().m(), 0);
        assert_eq!(gnp(5, 1.0, s).unwrap(), Graph::complete(5));
        assert_eq!(gnp(0, 0.5, s).unwrap().n(), 0);
        assert!(gnp(5, 1.5, s).is_err());
        assert!(gnp(5, -0.1, s).is_err());
    }

    #[test]
    fn deterministic_per_stream() {
        let a = gnp(300, 0.02, RngSeed::new(7, 3)).unwrap();
        let b = gnp(300, 0.02, RngSeed::new(7, 3)).unwrap();
        let c = gnp(300, 0.02, RngSeed::new(7, 4)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    fn within_sigmas(n: usize, p: f64, seed: u64, sigmas: f64) {
        let g = gnp(n, p, RngSeed::new(seed, 0)).unwrap();
        let pairs = (n * (n - 1) / 2) as f64;
        let mean = pairs * p;
        let sd = (pairs * p * (1.0 - p)).sqrt();
        let dev = (g.m() as f64 - mean).abs();
        assert!(dev <= sigmas * sd, "n={n} p={p}: m={} mean={mean} sd={sd}", g.m());
    }

    #[test]
    fn edge_count_near_mean() {
        within_sigmas(10_000, 0.5, 11, 5.0);
        within_sigmas(2_000, 0.01, 12, 5.0);
        within_sigmas(2_000, 0.099, 13, 5.0);
        within_sigmas(50_000, 3e-4, 14, 5.0);
    }

    #[test]
    fn sparse_sampler_is_uniform_over_pairs() {
        // Each pair of a 6-vertex graph should appear with frequency close to p.
        let n = 6;
        let p = 0.05;
        let trials = 40_000;
        let mut hits = vec![0usize; n * n];
        for t in 0..trials {
            let g = gnp(n, p, RngSeed::new(99, t)).unwrap();
            for (u, v) in g.edges() {
                hits[u * n + v] += 1;
            }
        }
        let sd = (trials as f64 * p * (1.0 - p)).sqrt();
        for v in 1..n {
            for u in 0..v {
                let dev = (hits[u * n + v] as f64 - trials as f64 * p).abs();
                assert!(dev < 5.0 * sd, "pair {u}-{v} count {}", hits[u * n + v]);
            }
        }
    }
}
