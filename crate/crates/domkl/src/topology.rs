//! Undirected, connected communication graphs over learners.
//!
//! Learners are indexed 0..J. Edges are unordered pairs; the graph
//! must be connected so that consensus constraints couple every
//! learner. Acyclicity matters only for the message-passing weight
//! scheme, which double-counts losses on cycles.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated undirected graph. Construction enforces: indices in
/// range, no self-loops, no duplicate edges, connected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    /// adjacency[j] is sorted ascending.
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Topology {
    /// Builds a graph on `num_learners` nodes from an edge list.
    /// Edges may be given in either orientation.
    pub fn new(num_learners: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if num_learners == 0 {
            return Err(Error::Config("topology needs at least one learner".into()));
        }
        let mut adjacency = vec![Vec::new(); num_learners];
        let mut normalized = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= num_learners || b >= num_learners {
                return Err(Error::Config(format!(
                    "edge ({a}, {b}) out of range for {num_learners} learners"
                )));
            }
            if a == b {
                return Err(Error::Config(format!("self-loop at learner {a}")));
            }
            let e = (a.min(b), a.max(b));
            if normalized.contains(&e) {
                return Err(Error::Config(format!(
                    "duplicate edge ({}, {})",
                    e.0, e.1
                )));
            }
            normalized.push(e);
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let topology = Topology {
            adjacency,
            edges: normalized,
        };
        if !topology.is_connected() {
            return Err(Error::Config("topology is not connected".into()));
        }
        Ok(topology)
    }

    pub fn num_learners(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Normalized edge list, each pair with the smaller index first.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbours of learner `j`, sorted ascending.
    pub fn neighbors(&self, j: usize) -> Result<&[usize]> {
        self.adjacency
            .get(j)
            .map(|v| v.as_slice())
            .ok_or_else(|| {
                Error::Input(format!(
                    "learner index {j} out of range for {} learners",
                    self.adjacency.len()
                ))
            })
    }

    pub fn degree(&self, j: usize) -> Result<usize> {
        Ok(self.neighbors(j)?.len())
    }

    fn is_connected(&self) -> bool {
        let n = self.adjacency.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(j) = stack.pop() {
            for &i in &self.adjacency[j] {
                if !seen[i] {
                    seen[i] = true;
                    count += 1;
                    stack.push(i);
                }
            }
        }
        count == n
    }

    /// A connected graph is a tree iff it has exactly J − 1 edges.
    pub fn is_acyclic(&self) -> bool {
        self.edges.len() == self.adjacency.len().saturating_sub(1)
    }
}

/// Built-in graph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Every pair connected.
    Complete,
    /// A single cycle 0 — 1 — … — (J−1) — 0. With J = 2 the two
    /// orientations coincide, leaving a single edge.
    Ring,
    /// A chain 0 — 1 — … — (J−1).
    Path,
    /// Learner 0 connected to all others.
    Star,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "complete" => Ok(Preset::Complete),
            "ring" => Ok(Preset::Ring),
            "path" => Ok(Preset::Path),
            "star" => Ok(Preset::Star),
            other => Err(Error::Config(format!(
                "unknown topology preset '{other}' (expected complete, ring, path, or star)"
            ))),
        }
    }
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Complete => "complete",
            Preset::Ring => "ring",
            Preset::Path => "path",
            Preset::Star => "star",
        }
    }
}

/// Instantiates a preset on `num_learners` nodes. Presets require at
/// least two learners.
pub fn preset(kind: Preset, num_learners: usize) -> Result<Topology> {
    if num_learners < 2 {
        return Err(Error::Config(format!(
            "preset '{}' needs at least 2 learners, got {num_learners}",
            kind.name()
        )));
    }
    let mut edges = Vec::new();
    match kind {
        Preset::Complete => {
            for a in 0..num_learners {
                for b in (a + 1)..num_learners {
                    edges.push((a, b));
                }
            }
        }
        Preset::Ring => {
            for a in 0..num_learners - 1 {
                edges.push((a, a + 1));
            }
            if num_learners > 2 {
                edges.push((num_learners - 1, 0));
            }
        }
        Preset::Path => {
            for a in 0..num_learners - 1 {
                edges.push((a, a + 1));
            }
        }
        Preset::Star => {
            for b in 1..num_learners {
                edges.push((0, b));
            }
        }
    }
    Topology::new(num_learners, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent cycle detection by DFS with parent tracking.
    fn has_cycle_dfs(topology: &Topology) -> bool {
        let n = topology.num_learners();
        let mut seen = vec![false; n];
        let mut stack: Vec<(usize, usize)> = vec![(0, usize::MAX)];
        seen[0] = true;
        while let Some((j, parent)) = stack.pop() {
            for &i in topology.neighbors(j).unwrap() {
                if i == parent {
                    continue;
                }
                if seen[i] {
                    return true;
                }
                seen[i] = true;
                stack.push((i, j));
            }
        }
        false
    }

    #[test]
    fn triangle_adjacency() {
        let t = Topology::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(t.neighbors(0).unwrap(), &[1, 2]);
        assert_eq!(t.neighbors(1).unwrap(), &[0, 2]);
        assert_eq!(t.neighbors(2).unwrap(), &[0, 1]);
        assert!(!t.is_acyclic());
    }

    #[test]
    fn rejects_disconnected() {
        let err = Topology::new(4, &[(0, 1), (2, 3)]).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn rejects_self_loop_and_duplicates() {
        assert!(Topology::new(2, &[(0, 0)]).is_err());
        assert!(Topology::new(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Topology::new(3, &[(0, 1), (0, 1), (1, 2)]).is_err());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(Topology::new(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn single_learner_graph_is_valid() {
        let t = Topology::new(1, &[]).unwrap();
        assert!(t.neighbors(0).unwrap().is_empty());
        assert!(t.is_acyclic());
    }

    #[test]
    fn presets_match_expected_shapes() {
        let complete = preset(Preset::Complete, 4).unwrap();
        assert_eq!(complete.num_edges(), 6);
        assert!(!complete.is_acyclic());

        let ring = preset(Preset::Ring, 5).unwrap();
        assert_eq!(ring.num_edges(), 5);
        assert_eq!(ring.neighbors(0).unwrap(), &[1, 4]);
        assert!(!ring.is_acyclic());

        let path = preset(Preset::Path, 5).unwrap();
        assert_eq!(path.num_edges(), 4);
        assert!(path.is_acyclic());

        let star = preset(Preset::Star, 5).unwrap();
        assert_eq!(star.degree(0).unwrap(), 4);
        assert!(star.is_acyclic());
    }

    #[test]
    fn ring_of_two_collapses_to_single_edge() {
        let ring = preset(Preset::Ring, 2).unwrap();
        assert_eq!(ring.num_edges(), 1);
    }

    #[test]
    fn presets_reject_single_learner() {
        assert!(preset(Preset::Complete, 1).is_err());
    }

    #[test]
    fn is_acyclic_agrees_with_dfs_on_presets() {
        for kind in [Preset::Complete, Preset::Ring, Preset::Path, Preset::Star] {
            for j in 2..8 {
                let t = preset(kind, j).unwrap();
                assert_eq!(t.is_acyclic(), !has_cycle_dfs(&t), "{kind:?} J={j}");
            }
        }
    }

    #[test]
    fn is_acyclic_agrees_with_dfs_on_ad_hoc_graphs() {
        let cases: Vec<(usize, Vec<(usize, usize)>)> = vec![
            (4, vec![(0, 1), (1, 2), (1, 3)]),
            (4, vec![(0, 1), (1, 2), (2, 3), (3, 1)]),
            (6, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]),
            (2, vec![(0, 1)]),
        ];
        for (n, edges) in cases {
            let t = Topology::new(n, &edges).unwrap();
            assert_eq!(t.is_acyclic(), !has_cycle_dfs(&t));
        }
    }
}
