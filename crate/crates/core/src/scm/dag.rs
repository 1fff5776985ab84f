use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeId {
    pub index: usize,
    pub name: String,
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Directed graph over densely indexed nodes. Acyclicity is checked by
/// [`topological_order`], not at construction, so invalid graphs can still be
/// described and reported on.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalDag {
    nodes: Vec<NodeId>,
    edges: BTreeSet<(usize, usize)>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

impl CausalDag {
    /// Panics if an edge references an index outside `0..names.len()`.
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let nodes: Vec<NodeId> = names
            .into_iter()
            .enumerate()
            .map(|(index, n)| NodeId { index, name: n.into() })
            .collect();
        let n = nodes.len();
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for &(p, c) in &edges {
            assert!(p < n && c < n, "edge ({p}, {c}) out of range for {n} nodes");
            parents[c].push(p);
            children[p].push(c);
        }
        CausalDag { nodes, edges, parents, children }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn name(&self, i: usize) -> &str {
        &self.nodes[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.contains(&(from, to))
    }

    /// Sorted parent indices.
    pub fn parents(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    fn reach<'a>(&'a self, start: usize, next: impl Fn(usize) -> &'a [usize]) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack: Vec<usize> = next(start).to_vec();
        while let Some(v) = stack.pop() {
            if !seen[v] {
                seen[v] = true;
                stack.extend_from_slice(next(v));
            }
        }
        seen
    }

    /// Strict ancestors of `i` as a membership mask.
    pub fn ancestors(&self, i: usize) -> Vec<bool> {
        self.reach(i, |v| self.parents(v))
    }

    /// Strict descendants of `i` as a membership mask.
    pub fn descendants(&self, i: usize) -> Vec<bool> {
        self.reach(i, |v| self.children(v))
    }

    /// Strict ancestors of `target` in the graph with `removed` deleted.
    pub fn ancestors_avoiding(&self, target: usize, removed: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack: Vec<usize> = self.parents(target).iter().copied().filter(|&p| p != removed).collect();
        while let Some(v) = stack.pop() {
            if !seen[v] {
                seen[v] = true;
                stack.extend(self.parents(v).iter().copied().filter(|&p| p != removed));
            }
        }
        seen
    }

    /// Same nodes, edges replaced.
    pub fn with_edges(&self, edges: impl IntoIterator<Item = (usize, usize)>) -> CausalDag {
        CausalDag::new(self.nodes.iter().map(|n| n.name.clone()), edges)
    }
}

/// Kahn's algorithm with a min-heap, so ties resolve by ascending node index.
pub fn topological_order(dag: &CausalDag) -> Result<Vec<usize>> {
    let n = dag.len();
    let mut indegree: Vec<usize> = (0..n).map(|i| dag.parents(i).len()).collect();
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &c in dag.children(v) {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.push(Reverse(c));
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err(Error::CyclicGraph)
    }
}

/// Undirected version of a graph; each edge is stored as `(lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    pub nodes: Vec<NodeId>,
    pub undirected_edges: BTreeSet<(usize, usize)>,
}

impl Skeleton {
    pub fn new(nodes: Vec<NodeId>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let undirected_edges = edges
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        Skeleton { nodes, undirected_edges }
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.undirected_edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn len(&self) -> usize {
        self.undirected_edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.undirected_edges.is_empty()
    }
}

pub fn skeleton_of(dag: &CausalDag) -> Skeleton {
    Skeleton::new(dag.nodes().to_vec(), dag.edges().iter().copied())
}
