//! Random hypergraph generators for tests, benchmarks and self-checks.

use rand::Rng as _;

use crate::hypercore::{DirectedHypergraph, Hyperedge, UndirectedEdge, UndirectedHypergraph};
use crate::rng::Rng;

/// Distribution of a side size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SizeDistribution {
    Fixed(usize),
    /// Uniform on `lo..=hi`.
    Uniform(usize, usize),
    /// `min` plus a geometric variable, truncated at `max`, with untruncated
    /// mean `mean`.
    Geometric {
        min: usize,
        mean: f64,
        max: usize,
    },
    /// Explicit probabilities for sizes `0, 1, 2, …`.
    Table(&'static [f64]),
}

impl SizeDistribution {
    pub fn draw(&self, rng: &mut Rng) -> usize {
        match *self {
            SizeDistribution::Fixed(k) => k,
            SizeDistribution::Uniform(lo, hi) => rng.random_range(lo..=hi),
            SizeDistribution::Geometric { min, mean, max } => {
                let excess = (mean - min as f64).max(0.0);
                let p = 1.0 / (1.0 + excess);
                let mut k = min;
                while k < max && !rng.random_bool(p) {
                    k += 1;
                }
                k
            }
            SizeDistribution::Table(probs) => {
                let mut x: f64 = rng.random();
                for (k, &p) in probs.iter().enumerate() {
                    if x < p {
                        return k;
                    }
                    x -= p;
                }
                probs.len() - 1
            }
        }
    }
}

/// Draws `k` distinct nodes from `0..n`, with probability proportional to
/// `weights` when given.
fn pick_nodes(rng: &mut Rng, n: usize, k: usize, weights: Option<&[f64]>) -> Vec<u32> {
    let k = k.min(n);
    let mut out: Vec<u32> = match weights {
        None => rand::seq::index::sample(rng, n, k).into_iter().map(|v| v as u32).collect(),
        Some(w) => {
            let total: f64 = w.iter().sum();
            let mut chosen = Vec::with_capacity(k);
            while chosen.len() < k {
                let mut x = rng.random::<f64>() * total;
                let mut v = n - 1;
                for (i, &wi) in w.iter().enumerate() {
                    if x < wi {
                        v = i;
                        break;
                    }
                    x -= wi;
                }
                if !chosen.contains(&(v as u32)) {
                    chosen.push(v as u32);
                }
            }
            chosen
        }
    };
    out.sort_unstable();
    out
}

/// A directed hypergraph on nodes `0..n` with `m` hyperedge draws. Draws
/// with both sides empty are redrawn.
pub fn random_directed(
    rng: &mut Rng,
    n: usize,
    m: usize,
    head: SizeDistribution,
    tail: SizeDistribution,
) -> DirectedHypergraph {
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let (hs, ts) = (head.draw(rng), tail.draw(rng));
        if hs + ts == 0 || n == 0 {
            if n == 0 {
                break;
            }
            continue;
        }
        let h = pick_nodes(rng, n, hs, None);
        let t = pick_nodes(rng, n, ts, None);
        edges.push(Hyperedge::new(h, t, 1).expect("distinct picks"));
    }
    DirectedHypergraph::from_dense((0..n as u64).collect(), edges).expect("valid by construction")
}

/// Shape of the bundled metabolic-scale test graph: 702 nodes, 923
/// reactions, mean head size ≈ 2.02 and mean tail size ≈ 2.26.
pub fn ecoli_scale(rng: &mut Rng) -> DirectedHypergraph {
    random_directed(
        rng,
        702,
        923,
        SizeDistribution::Geometric { min: 1, mean: 2.02, max: 9 },
        SizeDistribution::Geometric { min: 1, mean: 2.26, max: 9 },
    )
}

/// An undirected hypergraph on `0..n`; node participation is proportional to
/// `weights` when given.
pub fn random_undirected(
    rng: &mut Rng,
    n: usize,
    m: usize,
    sizes: SizeDistribution,
    weights: Option<&[f64]>,
) -> UndirectedHypergraph {
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m && n > 0 {
        let s = sizes.draw(rng);
        if s == 0 {
            continue;
        }
        edges.push(UndirectedEdge { members: pick_nodes(rng, n, s, weights), multiplicity: 1 });
    }
    UndirectedHypergraph::from_dense((0..n as u64).collect(), edges).expect("valid by construction")
}

/// Face-to-face contact surrogate matching the scale of the primary-school
/// data: 243 nodes, 1188 hyperedges of size 2–5 (mean ≈ 2.4) and node
/// degrees with mean ≈ 11.8 and coefficient of variation ≈ 0.47.
pub fn contact_surrogate(rng: &mut Rng) -> UndirectedHypergraph {
    const SIZES: &[f64] = &[0.0, 0.0, 0.62, 0.36, 0.015, 0.005];
    // Gamma(shape 4.5) weights give the target degree dispersion.
    let weights: Vec<f64> = (0..243).map(|_| gamma(rng, 4.5)).collect();
    random_undirected(rng, 243, 1188, SizeDistribution::Table(SIZES), Some(&weights))
}

/// Marsaglia-Tsang gamma variate with unit scale, `shape ≥ 1`.
fn gamma(rng: &mut Rng, shape: f64) -> f64 {
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let (mut x, mut v);
        loop {
            let u1: f64 = rng.random();
            let u2: f64 = rng.random();
            x = (-2.0 * (1.0 - u1).ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
            v = 1.0 + c * x;
            if v > 0.0 {
                break;
            }
        }
        v = v * v * v;
        let u: f64 = rng.random();
        if u < 1.0 - 0.0331 * x.powi(4) || u.ln() < 0.5 * x * x + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}
