use crate::{Error, Result};

/// External node identifier as it appears in input files.
pub type NodeId = u64;

/// A directed hyperedge over dense node indices. Both sides are sorted and
/// duplicate-free; at least one side is non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperedge {
    pub head: Vec<u32>,
    pub tail: Vec<u32>,
    pub multiplicity: u32,
}

impl Hyperedge {
    pub fn new(mut head: Vec<u32>, mut tail: Vec<u32>, multiplicity: u32) -> Result<Self> {
        normalize_side(&mut head, "head")?;
        normalize_side(&mut tail, "tail")?;
        if head.is_empty() && tail.is_empty() {
            return Err(Error::InvalidHypergraph("hyperedge with empty head and tail".into()));
        }
        if multiplicity == 0 {
            return Err(Error::InvalidHypergraph("hyperedge with multiplicity 0".into()));
        }
        Ok(Hyperedge { head, tail, multiplicity })
    }

    pub fn size(&self) -> usize {
        self.head.len() + self.tail.len()
    }

    pub fn in_head(&self, v: u32) -> bool {
        self.head.binary_search(&v).is_ok()
    }

    pub fn in_tail(&self, v: u32) -> bool {
        self.tail.binary_search(&v).is_ok()
    }
}

fn normalize_side(side: &mut [u32], name: &str) -> Result<()> {
    side.sort_unstable();
    if let Some(w) = side.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidHypergraph(format!("node {} repeated in {name}", w[0])));
    }
    Ok(())
}

/// A weighted directed hypergraph in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectedHypergraph {
    nodes: Vec<NodeId>,
    edges: Vec<Hyperedge>,
}

impl DirectedHypergraph {
    /// Builds from external ids. `nodes` may list isolated nodes; every id
    /// referenced by an edge is added automatically.
    pub fn from_ids<N, E>(nodes: N, edges: E) -> Result<Self>
    where
        N: IntoIterator<Item = NodeId>,
        E: IntoIterator<Item = (Vec<NodeId>, Vec<NodeId>, u32)>,
    {
        let edges: Vec<_> = edges.into_iter().collect();
        let mut ids: Vec<NodeId> = nodes.into_iter().collect();
        for (h, t, _) in &edges {
            ids.extend_from_slice(h);
            ids.extend_from_slice(t);
        }
        ids.sort_unstable();
        ids.dedup();
        let idx = |v: &NodeId| ids.binary_search(v).expect("id collected") as u32;
        let dense = edges
            .iter()
            .map(|(h, t, m)| Hyperedge::new(h.iter().map(idx).collect(), t.iter().map(idx).collect(), *m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::canonical(ids, dense))
    }

    /// Builds from dense indices into `nodes`, which must be sorted and
    /// duplicate-free.
    pub fn from_dense(nodes: Vec<NodeId>, edges: Vec<Hyperedge>) -> Result<Self> {
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidHypergraph("node ids must be strictly increasing".into()));
        }
        let n = nodes.len() as u32;
        let mut checked = Vec::with_capacity(edges.len());
        for e in edges {
            let e = Hyperedge::new(e.head, e.tail, e.multiplicity)?;
            if e.head.iter().chain(&e.tail).any(|&v| v >= n) {
                return Err(Error::InvalidHypergraph("edge references unknown node".into()));
            }
            checked.push(e);
        }
        Ok(Self::canonical(nodes, checked))
    }

    fn canonical(nodes: Vec<NodeId>, edges: Vec<Hyperedge>) -> Self {
        let mut keyed: Vec<(Vec<u32>, Vec<u32>, u32)> =
            edges.into_iter().map(|e| (e.head, e.tail, e.multiplicity)).collect();
        let mut folded: Vec<(Vec<u32>, Vec<u32>, u32)> = Vec::with_capacity(keyed.len());
        keyed.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        for (h, t, m) in keyed {
            match folded.last_mut() {
                Some(last) if last.0 == h && last.1 == t => last.2 += m,
                _ => folded.push((h, t, m)),
            }
        }
        let edges =
            folded.into_iter().map(|(head, tail, multiplicity)| Hyperedge { head, tail, multiplicity }).collect();
        DirectedHypergraph { nodes, edges }
    }

    pub fn empty() -> Self {
        DirectedHypergraph { nodes: Vec::new(), edges: Vec::new() }
    }

    /// External ids, ascending; position is the dense index.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_id(&self, index: u32) -> NodeId {
        self.nodes[index as usize]
    }

    pub fn index_of(&self, id: NodeId) -> Option<u32> {
        self.nodes.binary_search(&id).ok().map(|i| i as u32)
    }

    /// Distinct hyperedges with their multiplicities.
    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    /// Number of hyperedges counted with multiplicity.
    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(|e| e.multiplicity as usize).sum()
    }

    /// Every hyperedge copy, repeated according to its multiplicity.
    pub fn copies(&self) -> impl Iterator<Item = &Hyperedge> + '_ {
        self.edges.iter().flat_map(|e| std::iter::repeat_n(e, e.multiplicity as usize))
    }

    pub fn max_edge_size(&self) -> usize {
        self.edges.iter().map(Hyperedge::size).max().unwrap_or(0)
    }

    /// Total number of head and tail memberships (bipartite edge count).
    pub fn incidence_count(&self) -> usize {
        self.edges.iter().map(|e| e.size() * e.multiplicity as usize).sum()
    }

    /// Nodes that occur in no hyperedge.
    pub fn isolated_nodes(&self) -> Vec<u32> {
        let mut used = vec![false; self.nodes.len()];
        for e in &self.edges {
            for &v in e.head.iter().chain(&e.tail) {
                used[v as usize] = true;
            }
        }
        (0..self.nodes.len() as u32).filter(|&v| !used[v as usize]).collect()
    }
}

/// An undirected hyperedge over dense node indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UndirectedEdge {
    pub members: Vec<u32>,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UndirectedHypergraph {
    nodes: Vec<NodeId>,
    edges: Vec<UndirectedEdge>,
}

impl UndirectedHypergraph {
    pub fn from_ids<N, E>(nodes: N, edges: E) -> Result<Self>
    where
        N: IntoIterator<Item = NodeId>,
        E: IntoIterator<Item = (Vec<NodeId>, u32)>,
    {
        let edges: Vec<_> = edges.into_iter().collect();
        let mut ids: Vec<NodeId> = nodes.into_iter().collect();
        for (m, _) in &edges {
            ids.extend_from_slice(m);
        }
        ids.sort_unstable();
        ids.dedup();
        let mut dense = Vec::with_capacity(edges.len());
        for (m, w) in &edges {
            let mut members: Vec<u32> = m.iter().map(|v| ids.binary_search(v).expect("id collected") as u32).collect();
            normalize_side(&mut members, "hyperedge")?;
            dense.push(UndirectedEdge { members, multiplicity: *w });
        }
        Self::from_dense(ids, dense)
    }

    pub fn from_dense(nodes: Vec<NodeId>, edges: Vec<UndirectedEdge>) -> Result<Self> {
        let n = nodes.len() as u32;
        let mut keyed = Vec::with_capacity(edges.len());
        for mut e in edges {
            normalize_side(&mut e.members, "hyperedge")?;
            if e.members.is_empty() || e.multiplicity == 0 {
                return Err(Error::InvalidHypergraph("empty undirected hyperedge".into()));
            }
            if e.members.iter().any(|&v| v >= n) {
                return Err(Error::InvalidHypergraph("edge references unknown node".into()));
            }
            keyed.push(e);
        }
        keyed.sort_by(|a, b| a.members.cmp(&b.members));
        Ok(UndirectedHypergraph { nodes, edges: merge_multiplicities(keyed) })
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> &[UndirectedEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(|e| e.multiplicity as usize).sum()
    }

    pub fn max_edge_size(&self) -> usize {
        self.edges.iter().map(|e| e.members.len()).max().unwrap_or(0)
    }
}

/// Merges adjacent entries with identical member sets.
fn merge_multiplicities(edges: Vec<UndirectedEdge>) -> Vec<UndirectedEdge> {
    let mut out: Vec<UndirectedEdge> = Vec::with_capacity(edges.len());
    for e in edges {
        match out.last_mut() {
            Some(last) if last.members == e.members => last.multiplicity += e.multiplicity,
            _ => out.push(e),
        }
    }
    out
}

/// Each undirected hyperedge `S` becomes the directed hyperedge `(S, S)`.
pub fn undirected_to_directed(u: &UndirectedHypergraph) -> DirectedHypergraph {
    let edges = u
        .edges
        .iter()
        .map(|e| Hyperedge { head: e.members.clone(), tail: e.members.clone(), multiplicity: e.multiplicity })
        .collect();
    DirectedHypergraph::canonical(u.nodes.clone(), edges)
}

/// Each directed hyperedge `(h, t)` becomes `h ∪ t`.
pub fn merge_to_undirected(h: &DirectedHypergraph) -> UndirectedHypergraph {
    let edges = h
        .edges
        .iter()
        .map(|e| {
            let mut members: Vec<u32> = e.head.iter().chain(&e.tail).copied().collect();
            members.sort_unstable();
            members.dedup();
            UndirectedEdge { members, multiplicity: e.multiplicity }
        })
        .collect();
    UndirectedHypergraph::from_dense(h.nodes.clone(), edges).expect("union of a valid hyperedge is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folds_duplicates_and_sorts() {
        let h = DirectedHypergraph::from_ids(
            [],
            vec![(vec![3, 1], vec![2], 1), (vec![1, 3], vec![2], 2), (vec![2], vec![], 1)],
        )
        .unwrap();
        assert_eq!(h.nodes(), &[1, 2, 3]);
        assert_eq!(h.edges().len(), 2);
        assert_eq!(h.edge_count(), 4);
        assert_eq!(h.edges()[0].head, vec![0, 2]);
        assert_eq!(h.edges()[0].multiplicity, 3);
    }

    #[test]
    fn rejects_invalid_edges() {
        assert!(DirectedHypergraph::from_ids([], vec![(vec![], vec![], 1)]).is_err());
        assert!(DirectedHypergraph::from_ids([], vec![(vec![1, 1], vec![2], 1)]).is_err());
        assert!(DirectedHypergraph::from_ids([], vec![(vec![1], vec![2], 0)]).is_err());
    }

    #[test]
    fn isolated_nodes_are_kept() {
        let h = DirectedHypergraph::from_ids([9], vec![(vec![1], vec![2], 1)]).unwrap();
        assert_eq!(h.node_count(), 3);
        assert_eq!(h.isolated_nodes(), vec![2]);
    }

    #[test]
    fn lift_then_merge_is_identity() {
        let u = UndirectedHypergraph::from_ids([], vec![(vec![1, 2], 1), (vec![2, 3, 4], 2)]).unwrap();
        let d = undirected_to_directed(&u);
        assert_eq!(d.edges()[0].head, d.edges()[0].tail);
        assert_eq!(merge_to_undirected(&d), u);
    }

    #[test]
    fn merge_unions_sides() {
        let h = DirectedHypergraph::from_ids([], vec![(vec![1], vec![2, 3], 1)]).unwrap();
        let u = merge_to_undirected(&h);
        assert_eq!(u.edges()[0].members, vec![0, 1, 2]);
    }

    #[test]
    fn fig1_merged_sizes() {
        let u = merge_to_undirected(&crate::hypercore::toy::fig1());
        let mut sizes: Vec<usize> = u.edges().iter().map(|e| e.members.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 3, 3]);
    }

    #[test]
    fn undirected_duplicates_fold() {
        let u = UndirectedHypergraph::from_ids([], vec![(vec![1, 2], 1), (vec![2, 1], 3)]).unwrap();
        assert_eq!(u.edges().len(), 1);
        assert_eq!(u.edges()[0].multiplicity, 4);
    }
}
