//! Multi-order Laplacian of an undirected hypergraph and spectral distance.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::hypercore::UndirectedHypergraph;
use crate::{Error, Result};

/// How a hyperedge's size maps to the order `d` of its Laplacian term.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum LaplacianOrder {
    /// `d` is the hyperedge size.
    #[default]
    Size,
    /// `d` is the hyperedge size minus one.
    SizeMinusOne,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumConfig {
    /// Number of smallest eigenvalues kept.
    pub k: usize,
    /// Largest hyperedge size considered; `None` means `min(8, max size)`.
    pub max_size: Option<usize>,
    pub order: LaplacianOrder,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig { k: 6, max_size: None, order: LaplacianOrder::Size }
    }
}

/// `Σ_s ω(s) / ⟨K^(s)⟩ · (d·K^(s) − A^(s))` over sizes `s = 2..=max_size`,
/// where `K^(s)` counts each node's size-`s` memberships, `A^(s)` counts
/// co-memberships and `d` follows `order`. Sizes without hyperedges are
/// skipped.
pub fn multi_order_laplacian(
    u: &UndirectedHypergraph,
    max_size: usize,
    order: LaplacianOrder,
    weight: impl Fn(usize) -> f64,
) -> Result<DMatrix<f64>> {
    if max_size < 2 {
        return Err(Error::InvalidArgument("maximum size must be at least 2".into()));
    }
    let n = u.node_count();
    let mut total = DMatrix::<f64>::zeros(n, n);
    let mut used = false;
    for s in 2..=max_size {
        let mut k = vec![0.0; n];
        let mut a = DMatrix::<f64>::zeros(n, n);
        for e in u.edges().iter().filter(|e| e.members.len() == s) {
            let w = e.multiplicity as f64;
            for (i, &x) in e.members.iter().enumerate() {
                k[x as usize] += w;
                for &y in &e.members[i + 1..] {
                    a[(x as usize, y as usize)] += w;
                    a[(y as usize, x as usize)] += w;
                }
            }
        }
        let mean_k = k.iter().sum::<f64>() / n as f64;
        if mean_k == 0.0 {
            continue;
        }
        used = true;
        let d = match order {
            LaplacianOrder::Size => s,
            LaplacianOrder::SizeMinusOne => s - 1,
        } as f64;
        let mut l = -a;
        for (i, &ki) in k.iter().enumerate() {
            l[(i, i)] += d * ki;
        }
        total += l * (weight(s) / mean_k);
    }
    if !used {
        return Err(Error::InvalidArgument(format!("no hyperedge with size in 2..={max_size}")));
    }
    Ok(total)
}

/// The `k` smallest Laplacian eigenvalues, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSummary {
    pub eigenvalues: Vec<f64>,
}

pub fn spectrum(u: &UndirectedHypergraph, cfg: &SpectrumConfig) -> Result<SpectrumSummary> {
    let max_size = cfg.max_size.unwrap_or_else(|| u.max_edge_size().min(8));
    let l = multi_order_laplacian(u, max_size, cfg.order, |_| 1.0)?;
    let eig = SymmetricEigen::try_new(l, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numeric("symmetric eigensolver did not converge".into()))?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric("non-finite eigenvalue".into()));
    }
    values.sort_by(f64::total_cmp);
    values.truncate(cfg.k);
    Ok(SpectrumSummary { eigenvalues: values })
}

/// `(1/k) · ‖Λ₁ − Λ₂‖₂` over the kept eigenvalues.
pub fn spectral_distance(a: &SpectrumSummary, b: &SpectrumSummary) -> Result<f64> {
    if a.eigenvalues.len() != b.eigenvalues.len() || a.eigenvalues.is_empty() {
        return Err(Error::InvalidArgument("spectra of different lengths".into()));
    }
    let sq: f64 = a.eigenvalues.iter().zip(&b.eigenvalues).map(|(x, y)| (x - y).powi(2)).sum();
    Ok(sq.sqrt() / a.eigenvalues.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::parse_undirected;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_pair() {
        let u = parse_undirected("1,2\n").unwrap();
        let l = multi_order_laplacian(&u, 2, LaplacianOrder::Size, |_| 1.0).unwrap();
        assert_eq!(l, DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]));
        let l1 = multi_order_laplacian(&u, 2, LaplacianOrder::SizeMinusOne, |_| 1.0).unwrap();
        assert_eq!(l1, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
        assert!(multi_order_laplacian(&u, 1, LaplacianOrder::Size, |_| 1.0).is_err());
        let long = parse_undirected("1,2,3\n").unwrap();
        assert!(multi_order_laplacian(&long, 2, LaplacianOrder::Size, |_| 1.0).is_err());
    }

    #[test]
    fn sizes_two_and_three_by_hand() {
        // Nodes 1..4. Size 2: {1,2} twice, {3,4}. Size 3: {1,2,3}.
        let u = parse_undirected("1,2\n1,2\n3,4\n1,2,3\n").unwrap();
        let l = multi_order_laplacian(&u, 3, LaplacianOrder::Size, |_| 1.0).unwrap();
        // K2 = (2,2,1,1), <K2> = 1.5; K3 = (1,1,1,0), <K3> = 0.75.
        let l2 = DMatrix::from_row_slice(
            4,
            4,
            &[4.0, -2.0, 0.0, 0.0, -2.0, 4.0, 0.0, 0.0, 0.0, 0.0, 2.0, -1.0, 0.0, 0.0, -1.0, 2.0],
        ) / 1.5;
        let l3 = DMatrix::from_row_slice(
            4,
            4,
            &[3.0, -1.0, -1.0, 0.0, -1.0, 3.0, -1.0, 0.0, -1.0, -1.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        ) / 0.75;
        assert_abs_diff_eq!(l, l2 + l3, epsilon = 1e-12);
        assert_eq!(l, l.transpose());
    }

    #[test]
    fn triangle_eigenvalues() {
        // 4I - J on three nodes has eigenvalues 1, 4, 4.
        let u = parse_undirected("1,2,3\n").unwrap();
        let s = spectrum(&u, &SpectrumConfig::default()).unwrap();
        assert_eq!(s.eigenvalues.len(), 3);
        for (x, y) in s.eigenvalues.iter().zip([1.0, 4.0, 4.0]) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-10);
        }
    }

    #[test]
    fn six_node_roots() {
        // Path 1-2-3-4-5-6 of pairs: L = 6 / 10 · ... with <K2> = 10/6, so the
        // spectrum is (6/10)·eig(2K − A). For the path, 2K − A = D + (D − A)
        // is tridiagonal; compare with roots found by bisection on its
        // characteristic polynomial via Sturm counts.
        let u = parse_undirected("1,2\n2,3\n3,4\n4,5\n5,6\n").unwrap();
        let s = spectrum(&u, &SpectrumConfig::default()).unwrap();
        let diag = [2.0, 4.0, 4.0, 4.0, 4.0, 2.0].map(|x| x * 0.6);
        let off = -0.6;
        let count_below = |x: f64| {
            let mut c = 0;
            let mut q = diag[0] - x;
            if q < 0.0 {
                c += 1;
            }
            for &d in &diag[1..] {
                q = d - x - off * off / q;
                if q < 0.0 {
                    c += 1;
                }
            }
            c
        };
        for (i, &lam) in s.eigenvalues.iter().enumerate() {
            let (mut lo, mut hi) = (-1.0, 10.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(mid) > i {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            assert_abs_diff_eq!(lam, 0.5 * (lo + hi), epsilon = 1e-9);
        }
        assert!(s.eigenvalues[0] >= -1e-9);
    }

    #[test]
    fn distance_properties() {
        let a = spectrum(&parse_undirected("1,2\n2,3\n1,3,4\n").unwrap(), &SpectrumConfig::default()).unwrap();
        let b = spectrum(&parse_undirected("1,4\n2,3\n1,2,3\n").unwrap(), &SpectrumConfig::default()).unwrap();
        assert_eq!(spectral_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(spectral_distance(&a, &b).unwrap(), spectral_distance(&b, &a).unwrap());
        assert!(spectral_distance(&a, &b).unwrap() > 0.0);
    }
}
