use rand::seq::index::sample;

use crate::hypercore::{DirectedHypergraph, Hyperedge};
use crate::rng::Rng;
use crate::{Error, Result};

/// Keeps every head and tail size and fills each side with nodes drawn
/// uniformly without replacement from the node set.
pub fn null_sample(h: &DirectedHypergraph, rng: &mut Rng) -> Result<DirectedHypergraph> {
    let n = h.node_count();
    let mut edges = Vec::with_capacity(h.edge_count());
    for e in h.copies() {
        if e.head.len() > n || e.tail.len() > n {
            return Err(Error::InvalidArgument(format!("side of size {} exceeds {n} nodes", e.size())));
        }
        let head: Vec<u32> = sample(rng, n, e.head.len()).into_iter().map(|v| v as u32).collect();
        let tail: Vec<u32> = sample(rng, n, e.tail.len()).into_iter().map(|v| v as u32).collect();
        edges.push(Hyperedge::new(head, tail, 1)?);
    }
    DirectedHypergraph::from_dense(h.nodes().to_vec(), edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn sizes(h: &DirectedHypergraph) -> (Vec<usize>, Vec<usize>) {
        let mut a: Vec<usize> = h.copies().map(|e| e.head.len()).collect();
        let mut b: Vec<usize> = h.copies().map(|e| e.tail.len()).collect();
        a.sort();
        b.sort();
        (a, b)
    }

    #[test]
    fn full_head_is_forced() {
        let h = DirectedHypergraph::from_ids([], vec![(vec![1, 2, 3], vec![], 1)]).unwrap();
        let s = null_sample(&h, &mut Rng::seed_from_u64(1)).unwrap();
        assert_eq!(s, h);
    }

    #[test]
    fn preserves_sizes() {
        let h = crate::hypercore::toy::fig1();
        for seed in 0..100 {
            let s = null_sample(&h, &mut Rng::seed_from_u64(seed)).unwrap();
            assert_eq!(sizes(&s), sizes(&h));
            assert_eq!(s.nodes(), h.nodes());
        }
    }

    #[test]
    fn oversized_side_errors() {
        let h = DirectedHypergraph::from_ids([], vec![(vec![1, 2], vec![], 1)]).unwrap();
        let g = DirectedHypergraph::from_dense(vec![1, 2], h.edges().to_vec()).unwrap();
        assert!(null_sample(&g, &mut Rng::seed_from_u64(0)).is_ok());
        let bad = Hyperedge { head: vec![0, 1, 2], tail: vec![], multiplicity: 1 };
        assert!(DirectedHypergraph::from_dense(vec![1, 2], vec![bad]).is_err());
    }
}
