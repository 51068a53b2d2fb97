//! Maximum bipartite matching (Hopcroft-Karp) and Hall-violator extraction.

use std::collections::VecDeque;

use super::SupportError;

const UNREACHED: usize = usize::MAX;

/// A bipartite graph given by adjacency lists from left to right vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left_count: usize,
    right_count: usize,
    adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(left_count: usize, right_count: usize) -> Self {
        Self {
            left_count,
            right_count,
            adj: vec![Vec::new(); left_count],
        }
    }

    pub fn from_edges(
        left_count: usize,
        right_count: usize,
        edges: &[(usize, usize)],
    ) -> Result<Self, SupportError> {
        let mut g = Self::new(left_count, right_count);
        for &(l, r) in edges {
            g.add_edge(l, r)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, left: usize, right: usize) -> Result<(), SupportError> {
        if left >= self.left_count || right >= self.right_count {
            return Err(SupportError::EdgeOutOfRange {
                left,
                right,
                left_count: self.left_count,
                right_count: self.right_count,
            });
        }
        self.adj[left].push(right);
        Ok(())
    }

    pub fn left_count(&self) -> usize {
        self.left_count
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }

    pub fn neighbors(&self, left: usize) -> &[usize] {
        &self.adj[left]
    }

    /// Given a maximum matching, returns a left set `S` with `|N(S)| < |S|`,
    /// or `None` when the matching saturates the left side.
    ///
    /// `S` is the set of left vertices reachable by alternating paths from
    /// the first unmatched left vertex; its neighborhood is exactly the
    /// reached right vertices, all matched back into `S`.
    pub fn hall_violator(&self, matching: &Matching) -> Option<Vec<usize>> {
        let start = (0..self.left_count).find(|&l| matching.left_mate[l].is_none())?;
        let mut seen_left = vec![false; self.left_count];
        let mut seen_right = vec![false; self.right_count];
        let mut queue = VecDeque::from([start]);
        seen_left[start] = true;
        while let Some(l) = queue.pop_front() {
            for &r in &self.adj[l] {
                if seen_right[r] {
                    continue;
                }
                seen_right[r] = true;
                let mate = matching.right_mate[r]
                    .expect("matching is maximum, so every reachable right vertex is matched");
                if !seen_left[mate] {
                    seen_left[mate] = true;
                    queue.push_back(mate);
                }
            }
        }
        Some((0..self.left_count).filter(|&l| seen_left[l]).collect())
    }
}

/// A matching, stored as mates on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub size: usize,
    pub left_mate: Vec<Option<usize>>,
    pub right_mate: Vec<Option<usize>>,
}

impl Matching {
    /// Matched `(left, right)` pairs in left order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.left_mate
            .iter()
            .enumerate()
            .filter_map(|(l, r)| r.map(|r| (l, r)))
            .collect()
    }

    pub fn saturates_left(&self) -> bool {
        self.left_mate.iter().all(Option::is_some)
    }
}

/// Maximum-cardinality matching by Hopcroft-Karp.
pub fn max_bipartite_matching(graph: &BipartiteGraph) -> Matching {
    let mut left_mate = vec![None; graph.left_count];
    let mut right_mate = vec![None; graph.right_count];
    let mut dist = vec![UNREACHED; graph.left_count];
    let mut size = 0;

    loop {
        // BFS layering from all free left vertices
        let mut queue = VecDeque::new();
        for l in 0..graph.left_count {
            if left_mate[l].is_none() {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = UNREACHED;
            }
        }
        let mut found_free = false;
        while let Some(l) = queue.pop_front() {
            for &r in &graph.adj[l] {
                match right_mate[r] {
                    None => found_free = true,
                    Some(m) if dist[m] == UNREACHED => {
                        dist[m] = dist[l] + 1;
                        queue.push_back(m);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found_free {
            break;
        }
        for l in 0..graph.left_count {
            if left_mate[l].is_none() && augment(graph, l, &mut dist, &mut left_mate, &mut right_mate) {
                size += 1;
            }
        }
    }

    Matching {
        size,
        left_mate,
        right_mate,
    }
}

fn augment(
    graph: &BipartiteGraph,
    l: usize,
    dist: &mut [usize],
    left_mate: &mut [Option<usize>],
    right_mate: &mut [Option<usize>],
) -> bool {
    let d = dist[l];
    dist[l] = UNREACHED;
    for &r in &graph.adj[l] {
        let ok = match right_mate[r] {
            None => true,
            Some(m) => dist[m] == d + 1 && augment(graph, m, dist, left_mate, right_mate),
        };
        if ok {
            left_mate[l] = Some(r);
            right_mate[r] = Some(l);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Maximum matching by exhaustive search over left assignments.
    fn brute_max_matching(g: &BipartiteGraph) -> usize {
        fn go(g: &BipartiteGraph, l: usize, used: &mut Vec<bool>) -> usize {
            if l == g.left_count() {
                return 0;
            }
            let mut best = go(g, l + 1, used);
            for &r in g.neighbors(l) {
                if !used[r] {
                    used[r] = true;
                    best = best.max(1 + go(g, l + 1, used));
                    used[r] = false;
                }
            }
            best
        }
        go(g, 0, &mut vec![false; g.right_count()])
    }

    #[test]
    fn examples() {
        let k22 = BipartiteGraph::from_edges(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        assert_eq!(max_bipartite_matching(&k22).size, 2);
        let star = BipartiteGraph::from_edges(1, 3, &[(0, 0), (0, 1), (0, 2)]).unwrap();
        assert_eq!(max_bipartite_matching(&star).size, 1);
        let shared = BipartiteGraph::from_edges(2, 1, &[(0, 0), (1, 0)]).unwrap();
        let m = max_bipartite_matching(&shared);
        assert_eq!(m.size, 1);
        assert_eq!(shared.hall_violator(&m), Some(vec![0, 1]));
    }

    #[test]
    fn empty_graphs() {
        let g = BipartiteGraph::new(0, 0);
        let m = max_bipartite_matching(&g);
        assert_eq!(m.size, 0);
        assert!(m.saturates_left());
        assert_eq!(g.hall_violator(&m), None);
        let lonely = BipartiteGraph::new(2, 0);
        let m = max_bipartite_matching(&lonely);
        assert_eq!(lonely.hall_violator(&m), Some(vec![0]));
    }

    #[test]
    fn out_of_range_edges_rejected() {
        assert!(matches!(
            BipartiteGraph::from_edges(2, 2, &[(2, 0)]),
            Err(SupportError::EdgeOutOfRange { .. })
        ));
    }

    fn graph() -> impl Strategy<Value = BipartiteGraph> {
        (0usize..7, 0usize..7).prop_flat_map(|(l, r)| {
            prop::collection::vec(prop::collection::vec(any::<bool>(), r), l).prop_map(move |bits| {
                let mut g = BipartiteGraph::new(l, r);
                for (i, row) in bits.iter().enumerate() {
                    for (j, &b) in row.iter().enumerate() {
                        if b {
                            g.add_edge(i, j).unwrap();
                        }
                    }
                }
                g
            })
        })
    }

    proptest! {
        #[test]
        fn matches_brute_force(g in graph()) {
            let m = max_bipartite_matching(&g);
            prop_assert_eq!(m.size, brute_max_matching(&g));
            prop_assert_eq!(m.pairs().len(), m.size);
            for (l, r) in m.pairs() {
                prop_assert!(g.neighbors(l).contains(&r));
                prop_assert_eq!(m.right_mate[r], Some(l));
            }
        }

        #[test]
        fn violator_is_deficient(g in graph()) {
            let m = max_bipartite_matching(&g);
            match g.hall_violator(&m) {
                None => prop_assert!(m.saturates_left()),
                Some(s) => {
                    let mut nbrs: Vec<usize> = s.iter().flat_map(|&l| g.neighbors(l).to_vec()).collect();
                    nbrs.sort_unstable();
                    nbrs.dedup();
                    prop_assert!(nbrs.len() < s.len());
                }
            }
        }
    }
}
