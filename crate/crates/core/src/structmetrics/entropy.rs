//! Structural entropy of head and tail groups across samples.

use std::collections::HashMap;

use crate::diagnostics::Side;
use crate::hypercore::{DirectedHypergraph, NodeId};
use crate::{Error, Result};

/// Binary entropy in bits, with `0 · log 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let t = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    t(p) + t(1.0 - p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupEntropy {
    pub group: Vec<NodeId>,
    /// Fraction of samples in which some head (or tail) contains the group.
    pub probability: f64,
    pub entropy: f64,
}

fn for_each_subset(items: &[u32], k: usize, buf: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if buf.len() == k {
        f(buf);
        return;
    }
    let need = k - buf.len();
    for i in 0..items.len() {
        if items.len() - i < need {
            break;
        }
        buf.push(items[i]);
        for_each_subset(&items[i + 1..], k, buf, f);
        buf.pop();
    }
}

fn side_of(e: &crate::hypercore::Hyperedge, side: Side) -> &[u32] {
    match side {
        Side::Head => &e.head,
        Side::Tail => &e.tail,
    }
}

/// Entropy of every `k`-subset of an observed head (or tail), sorted by group.
pub fn structural_entropy(
    observed: &DirectedHypergraph,
    samples: &[DirectedHypergraph],
    k: usize,
    side: Side,
) -> Result<Vec<GroupEntropy>> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("structural entropy needs at least one sample".into()));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("group size must be positive".into()));
    }
    if samples.iter().any(|s| s.nodes() != observed.nodes()) {
        return Err(Error::InvalidArgument("samples have a different node set".into()));
    }
    let mut groups: HashMap<Vec<u32>, (u32, usize)> = HashMap::new();
    let mut buf = Vec::with_capacity(k);
    for e in observed.edges() {
        for_each_subset(side_of(e, side), k, &mut buf, &mut |s| {
            groups.entry(s.to_vec()).or_insert((0, usize::MAX));
        });
    }
    for (si, s) in samples.iter().enumerate() {
        for e in s.edges() {
            for_each_subset(side_of(e, side), k, &mut buf, &mut |g| {
                if let Some(entry) = groups.get_mut(g) {
                    if entry.1 != si {
                        entry.0 += 1;
                        entry.1 = si;
                    }
                }
            });
        }
    }
    let mut out: Vec<GroupEntropy> = groups
        .into_iter()
        .map(|(g, (hits, _))| {
            let p = hits as f64 / samples.len() as f64;
            GroupEntropy {
                group: g.iter().map(|&v| observed.node_id(v)).collect(),
                probability: p,
                entropy: binary_entropy(p),
            }
        })
        .collect();
    out.sort_by(|a, b| a.group.cmp(&b.group));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::parse_hypergraph;
    use approx::assert_abs_diff_eq;

    #[test]
    fn certainty_threshold() {
        assert_abs_diff_eq!(binary_entropy(0.1), 0.4690, epsilon = 1e-4);
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert_abs_diff_eq!(binary_entropy(0.5), 1.0);
        for p in [0.01, 0.2, 0.37] {
            assert_abs_diff_eq!(binary_entropy(p), binary_entropy(1.0 - p), epsilon = 1e-15);
        }
    }

    #[test]
    fn group_frequencies() {
        let obs = parse_hypergraph("1,2|3\n2,3|1\n").unwrap();
        let s1 = parse_hypergraph("1,2|3\n3|1,2\n").unwrap();
        let s2 = parse_hypergraph("1,2,3|\n").unwrap();
        let r = structural_entropy(&obs, &[s1, s2], 2, Side::Head).unwrap();
        let groups: Vec<(Vec<u64>, f64)> = r.iter().map(|g| (g.group.clone(), g.probability)).collect();
        assert_eq!(groups, vec![(vec![1, 2], 1.0), (vec![2, 3], 0.5)]);
        assert_abs_diff_eq!(r[1].entropy, 1.0);
        let singles = structural_entropy(&obs, std::slice::from_ref(&obs), 1, Side::Tail).unwrap();
        assert!(singles.iter().all(|g| g.probability == 1.0 && g.entropy == 0.0));
        assert!(structural_entropy(&obs, &[], 1, Side::Head).is_err());
    }
}
