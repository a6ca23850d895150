//! Directed group affinity and homophily for labeled hypergraphs.
//!
//! For a class `Xi` and a hyperedge size `k`, the `(α, β, k)`-affinity is the
//! share of tail memberships of `Xi` nodes, among size-`k` hyperedges with `β`
//! head nodes, that fall in hyperedges whose head has exactly `α` nodes of
//! `Xi`. All tallies count hyperedges with their multiplicity.

use std::collections::BTreeMap;

use statrs::function::factorial::ln_binomial;

use crate::hypercore::{DirectedHypergraph, Hyperedge, NodeId};
use crate::{Error, Result};

/// One label per node of a hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryPartition {
    labels: Vec<u32>,
    names: Vec<String>,
    sizes: Vec<usize>,
}

impl CategoryPartition {
    /// Every node of `h` must be labeled; labels of other ids are ignored.
    pub fn new(h: &DirectedHypergraph, labels: &[(NodeId, String)]) -> Result<Self> {
        let map: BTreeMap<NodeId, &str> = labels.iter().map(|(v, c)| (*v, c.as_str())).collect();
        let mut names: Vec<String> = labels.iter().map(|(_, c)| c.clone()).collect();
        names.sort();
        names.dedup();
        let mut out = Vec::with_capacity(h.node_count());
        for &id in h.nodes() {
            let c = map.get(&id).ok_or_else(|| Error::InvalidArgument(format!("node {id} has no label")))?;
            out.push(names.binary_search_by(|n| n.as_str().cmp(c)).expect("collected") as u32);
        }
        let mut sizes = vec![0; names.len()];
        for &c in &out {
            sizes[c as usize] += 1;
        }
        Ok(CategoryPartition { labels: out, names, sizes })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn category(&self, name: &str) -> Result<u32> {
        self.names
            .binary_search_by(|n| n.as_str().cmp(name))
            .map(|i| i as u32)
            .map_err(|_| Error::UnknownCategory(name.to_string()))
    }

    pub fn size(&self, category: u32) -> usize {
        self.sizes[category as usize]
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, node: u32) -> u32 {
        self.labels[node as usize]
    }

    fn count_in(&self, nodes: &[u32], category: u32) -> usize {
        nodes.iter().filter(|&&v| self.labels[v as usize] == category).count()
    }
}

fn check_partition(h: &DirectedHypergraph, p: &CategoryPartition) -> Result<()> {
    if h.node_count() != p.node_count() {
        return Err(Error::InvalidArgument("partition was built for a different node set".into()));
    }
    Ok(())
}

/// `(α, β, k)`-affinity of class `xi`; `None` when no `Xi` node sits in the
/// tail of a size-`k` hyperedge with `β` head nodes.
pub fn affinity(
    h: &DirectedHypergraph,
    p: &CategoryPartition,
    xi: &str,
    alpha: usize,
    beta: usize,
    k: usize,
) -> Result<Option<f64>> {
    if alpha > beta || beta > k {
        return Err(Error::InvalidArgument(format!("need α ≤ β ≤ k, got ({alpha}, {beta}, {k})")));
    }
    check_partition(h, p)?;
    let c = p.category(xi)?;
    let (mut num, mut den) = (0u64, 0u64);
    for e in h.edges().iter().filter(|e| e.size() == k && e.head.len() == beta) {
        let w = e.multiplicity as u64 * p.count_in(&e.tail, c) as u64;
        den += w;
        if p.count_in(&e.head, c) == alpha {
            num += w;
        }
    }
    Ok((den > 0).then(|| num as f64 / den as f64))
}

/// Affinity when every size-`k` hyperedge has a single head node.
pub fn affinity_head1(h: &DirectedHypergraph, p: &CategoryPartition, xi: &str, k: usize) -> Result<Option<f64>> {
    check_partition(h, p)?;
    let c = p.category(xi)?;
    let (mut num, mut den) = (0u64, 0u64);
    for e in h.edges().iter().filter(|e| e.size() == k) {
        if e.head.len() != 1 {
            return Err(Error::InvalidArgument(format!(
                "hyperedge of size {k} has head of size {}; use the general affinity",
                e.head.len()
            )));
        }
        let w = e.multiplicity as u64 * p.count_in(&e.tail, c) as u64;
        den += w;
        if p.label(e.head[0]) == c {
            num += w;
        }
    }
    Ok((den > 0).then(|| num as f64 / den as f64))
}

/// Probability that `α` of `β` nodes drawn without replacement belong to
/// `xi`. Does not depend on `k`.
pub fn affinity_baseline(p: &CategoryPartition, xi: &str, alpha: usize, beta: usize, _k: usize) -> Result<f64> {
    let c = p.category(xi)?;
    let (n, s) = (p.node_count() as u64, p.size(c) as u64);
    let (a, b) = (alpha as u64, beta as u64);
    if a > b {
        return Err(Error::InvalidArgument("α exceeds β".into()));
    }
    if b > n {
        return Err(Error::InvalidArgument(format!("β = {b} exceeds {n} nodes")));
    }
    if a > s || b - a > n - s {
        return Ok(0.0);
    }
    Ok((ln_binomial(s, a) + ln_binomial(n - s, b - a) - ln_binomial(n, b)).exp())
}

/// What observed affinities are divided by.
#[derive(Debug, Clone, Copy)]
pub enum Reference<'a> {
    /// Mean affinity over sampled hypergraphs.
    Samples(&'a [DirectedHypergraph]),
    /// The combinatorial baseline with `α = β = 1`.
    Baseline,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AffinityRatio {
    pub mean: f64,
    /// `(k, ratio)` for every `k` in range; `None` where undefined.
    pub per_k: Vec<(usize, Option<f64>)>,
}

/// Reference value for one `k`, or `None` when undefined.
pub fn reference_affinity(p: &CategoryPartition, xi: &str, k: usize, reference: Reference<'_>) -> Result<Option<f64>> {
    match reference {
        Reference::Baseline => affinity_baseline(p, xi, 1, 1, k).map(Some),
        Reference::Samples(samples) => {
            let vals = samples.iter().map(|s| affinity(s, p, xi, 1, 1, k)).collect::<Result<Vec<_>>>()?;
            let defined: Vec<f64> = vals.into_iter().flatten().collect();
            Ok((!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64))
        }
    }
}

/// Mean over `k` of observed affinity divided by the reference, with
/// `α = β = 1`. Values of `k` where either side is undefined or the
/// reference is zero are skipped.
pub fn mean_affinity_ratio(
    h: &DirectedHypergraph,
    p: &CategoryPartition,
    xi: &str,
    reference: Reference<'_>,
    ks: std::ops::RangeInclusive<usize>,
) -> Result<AffinityRatio> {
    let mut per_k = Vec::new();
    for k in ks {
        let obs = affinity(h, p, xi, 1, 1, k)?;
        let r = reference_affinity(p, xi, k, reference)?;
        let ratio = match (obs, r) {
            (Some(o), Some(r)) if r > 0.0 => Some(o / r),
            _ => None,
        };
        per_k.push((k, ratio));
    }
    let defined: Vec<f64> = per_k.iter().filter_map(|(_, r)| *r).collect();
    if defined.is_empty() {
        return Err(Error::Undefined(format!("affinity ratio of '{xi}' undefined for every k")));
    }
    Ok(AffinityRatio { mean: defined.iter().sum::<f64>() / defined.len() as f64, per_k })
}

fn same_class_mass(h: &DirectedHypergraph, p: &CategoryPartition, c: u32) -> Result<f64> {
    let mut m = 0.0;
    for e in h.edges() {
        if e.head.len() != 1 {
            return Err(Error::InvalidArgument("homophily requires single-node heads".into()));
        }
        if p.label(e.head[0]) == c && !e.tail.is_empty() {
            m += e.multiplicity as f64 * p.count_in(&e.tail, c) as f64 / e.tail.len() as f64;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Homophily {
    pub observed: f64,
    pub sample_mean: f64,
    /// `observed / sample_mean`; `None` when the sample mean is 0.
    pub ratio: Option<f64>,
}

/// Same-class fraction of tails in hyperedges headed by `xi`, summed over
/// hyperedges, relative to its mean over samples.
pub fn homophily(
    h: &DirectedHypergraph,
    p: &CategoryPartition,
    xi: &str,
    samples: &[DirectedHypergraph],
) -> Result<Homophily> {
    check_partition(h, p)?;
    let c = p.category(xi)?;
    let observed = same_class_mass(h, p, c)?;
    if samples.is_empty() {
        return Err(Error::InvalidArgument("homophily needs at least one sample".into()));
    }
    let mut total = 0.0;
    for s in samples {
        total += same_class_mass(s, p, c)?;
    }
    let sample_mean = total / samples.len() as f64;
    Ok(Homophily { observed, sample_mean, ratio: (sample_mean > 0.0).then(|| observed / sample_mean) })
}

/// One output row per (category, k).
#[derive(Debug, Clone, PartialEq)]
pub struct AffinityRow {
    pub category: String,
    pub k: usize,
    pub observed: Option<f64>,
    pub baseline: f64,
    pub mean_degs: Option<f64>,
    pub mean_joint: Option<f64>,
    pub ratio_degs: Option<f64>,
    pub ratio_joint: Option<f64>,
}

fn ratio(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(a), Some(b)) if b > 0.0 => Some(a / b),
        _ => None,
    }
}

pub fn affinity_table(
    h: &DirectedHypergraph,
    p: &CategoryPartition,
    ks: std::ops::RangeInclusive<usize>,
    degs: &[DirectedHypergraph],
    joint: &[DirectedHypergraph],
) -> Result<Vec<AffinityRow>> {
    let mut rows = Vec::new();
    for name in p.names() {
        for k in ks.clone() {
            let observed = affinity(h, p, name, 1, 1, k)?;
            let mean_degs = reference_affinity(p, name, k, Reference::Samples(degs))?;
            let mean_joint = reference_affinity(p, name, k, Reference::Samples(joint))?;
            rows.push(AffinityRow {
                category: name.clone(),
                k,
                observed,
                baseline: affinity_baseline(p, name, 1, 1, k)?,
                mean_degs,
                mean_joint,
                ratio_degs: ratio(observed, mean_degs),
                ratio_joint: ratio(observed, mean_joint),
            });
        }
    }
    Ok(rows)
}

/// Number of `xi` nodes in `e`'s head and tail.
pub fn class_counts(p: &CategoryPartition, e: &Hyperedge, category: u32) -> (usize, usize) {
    (p.count_in(&e.head, category), p.count_in(&e.tail, category))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::parse_hypergraph;
    use approx::assert_abs_diff_eq;

    fn labels(pairs: &[(u64, &str)]) -> Vec<(NodeId, String)> {
        pairs.iter().map(|(v, c)| (*v, c.to_string())).collect()
    }

    #[test]
    fn pure_class_gives_one() {
        let h = parse_hypergraph("1|2\n2|1\n").unwrap();
        let p = CategoryPartition::new(&h, &labels(&[(1, "D"), (2, "D")])).unwrap();
        assert_eq!(affinity(&h, &p, "D", 1, 1, 2).unwrap(), Some(1.0));
        assert_eq!(affinity(&h, &p, "D", 1, 1, 3).unwrap(), None);
        assert!(matches!(affinity(&h, &p, "X", 1, 1, 2), Err(Error::UnknownCategory(_))));
    }

    #[test]
    fn baseline_values() {
        let ids: Vec<(u64, &str)> = (0..101).map(|i| (i, if i < 54 { "D" } else { "R" })).collect();
        let text: String = (0..101).map(|i| format!("{i}|\n")).collect();
        let h = parse_hypergraph(&text).unwrap();
        let p = CategoryPartition::new(&h, &labels(&ids)).unwrap();
        assert_abs_diff_eq!(affinity_baseline(&p, "D", 1, 1, 5).unwrap(), 54.0 / 101.0, epsilon = 1e-12);
        assert_abs_diff_eq!(54.0 / 101.0, 0.5347, epsilon = 1e-4);
        for beta in 0..6 {
            let s: f64 = (0..=beta).map(|a| affinity_baseline(&p, "D", a, beta, 8).unwrap()).sum();
            assert_abs_diff_eq!(s, 1.0, epsilon = 1e-10);
        }
        assert_eq!(affinity_baseline(&p, "D", 55, 60, 60).unwrap(), 0.0);
    }

    #[test]
    fn head1_matches_general_form() {
        let h = parse_hypergraph("1|2,3\n1|2,4\n4|1,3\n3|4,2\n").unwrap();
        let p = CategoryPartition::new(&h, &labels(&[(1, "A"), (2, "A"), (3, "B"), (4, "B")])).unwrap();
        for c in ["A", "B"] {
            assert_eq!(affinity_head1(&h, &p, c, 3).unwrap(), affinity(&h, &p, c, 1, 1, 3).unwrap());
        }
        // One A tail membership per size-3 edge; two of them under an A head.
        assert_abs_diff_eq!(affinity_head1(&h, &p, "A", 3).unwrap().unwrap(), 2.0 / 4.0);
        let bad = parse_hypergraph("1,2|3\n").unwrap();
        let pb = CategoryPartition::new(&bad, &labels(&[(1, "A"), (2, "A"), (3, "B")])).unwrap();
        assert!(affinity_head1(&bad, &pb, "A", 3).is_err());
    }

    #[test]
    fn ratio_against_identical_samples_is_one() {
        let h = parse_hypergraph("1|2,3\n1|2\n3|1,2\n2|3\n").unwrap();
        let p = CategoryPartition::new(&h, &labels(&[(1, "A"), (2, "A"), (3, "B")])).unwrap();
        let samples = vec![h.clone(), h.clone()];
        let r = mean_affinity_ratio(&h, &p, "A", Reference::Samples(&samples), 2..=14).unwrap();
        assert_abs_diff_eq!(r.mean, 1.0);
        assert!(r.per_k.iter().all(|(k, v)| (*k <= 3) == v.is_some()));
        let hb = homophily(&h, &p, "A", &samples).unwrap();
        assert_eq!(hb.ratio, Some(1.0));
    }

    #[test]
    fn two_category_ratio_by_hand() {
        // Observed: 1->2 (A->A), 3->1 (B->A), 1->3 (no A tail): 1/2.
        // Sample: 3->2, 1->2, 3->1: 1/3. Baseline: 2/3.
        let h = parse_hypergraph("1|2\n3|1\n1|3\n").unwrap();
        let p = CategoryPartition::new(&h, &labels(&[(1, "A"), (2, "A"), (3, "B")])).unwrap();
        let s = parse_hypergraph("3|2\n1|2\n3|1\n").unwrap();
        assert_abs_diff_eq!(affinity(&s, &p, "A", 1, 1, 2).unwrap().unwrap(), 1.0 / 3.0);
        let r = mean_affinity_ratio(&h, &p, "A", Reference::Samples(std::slice::from_ref(&s)), 2..=2).unwrap();
        assert_abs_diff_eq!(r.mean, 0.5 / (1.0 / 3.0), epsilon = 1e-12);
        let b = mean_affinity_ratio(&h, &p, "A", Reference::Baseline, 2..=2).unwrap();
        assert_abs_diff_eq!(b.mean, 0.5 / (2.0 / 3.0), epsilon = 1e-12);
    }

    #[test]
    fn homophily_by_hand() {
        // A-headed edges: 1->{2,3}: 1/2 ; 2->{1}: 1 ; 1->{3}: 0  => m = 1.5
        let h = parse_hypergraph("1|2,3\n2|1\n1|3\n3|1\n").unwrap();
        let p = CategoryPartition::new(&h, &labels(&[(1, "A"), (2, "A"), (3, "B")])).unwrap();
        let s = parse_hypergraph("1|3,2\n2|3\n1|2\n3|1\n").unwrap(); // 1/2 + 0 + 1 = 1.5
        let r = homophily(&h, &p, "A", &[s]).unwrap();
        assert_abs_diff_eq!(r.observed, 1.5);
        assert_abs_diff_eq!(r.sample_mean, 1.5);
        let t = parse_hypergraph("1|2\n2|1\n").unwrap();
        let pt = CategoryPartition::new(&t, &labels(&[(1, "A"), (2, "A")])).unwrap();
        assert_abs_diff_eq!(homophily(&t, &pt, "A", std::slice::from_ref(&t)).unwrap().observed, 2.0);
    }
}
