//! Small undirected-graph utilities: the structural checks used on links
//! (bipartiteness, regularity, girth) and BFS machinery shared by the
//! T-join decoder.

use serde::{Deserialize, Serialize};

/// Simple undirected graph on `0..n`. Edges are stored once, endpoints
/// sorted; adjacency lists are sorted so traversals are deterministic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>, // (neighbour, edge index)
}

impl Graph {
    pub fn new(n: usize, mut edges: Vec<(usize, usize)>) -> Self {
        for e in edges.iter_mut() {
            assert!(e.0 < n && e.1 < n && e.0 != e.1, "bad edge {e:?}");
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(u, _)| u)
    }

    pub fn incident_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(_, e)| e)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Connected component id per vertex, numbered by discovery order.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        for start in 0..self.n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = next;
            next += 1;
            let mut queue = std::collections::VecDeque::from([start]);
            comp[start] = id;
            while let Some(u) = queue.pop_front() {
                for (w, _) in &self.adj[u] {
                    if comp[*w] == usize::MAX {
                        comp[*w] = id;
                        queue.push_back(*w);
                    }
                }
            }
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().iter().all(|&c| c == 0)
    }

    /// BFS distances and parent edges from `source`; unreachable = usize::MAX.
    pub fn bfs(&self, source: usize) -> (Vec<usize>, Vec<Option<(usize, usize)>>) {
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![None; self.n]; // (parent vertex, edge index)
        dist[source] = 0;
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = Some((u, e));
                    queue.push_back(w);
                }
            }
        }
        (dist, parent)
    }

    /// 2-colouring if one exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut colour = vec![None; self.n];
        for start in 0..self.n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = colour[u].unwrap();
                for &(w, _) in &self.adj[u] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(colour.into_iter().map(Option::unwrap).collect())
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        if self.n == 0 {
            return None;
        }
        let d = self.degree(0);
        (0..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Length of a shortest cycle, None for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best = usize::MAX;
        for source in 0..self.n {
            let mut dist = vec![usize::MAX; self.n];
            let mut parent_edge = vec![usize::MAX; self.n];
            dist[source] = 0;
            let mut queue = std::collections::VecDeque::from([source]);
            while let Some(u) = queue.pop_front() {
                for &(w, e) in &self.adj[u] {
                    if e == parent_edge[u] {
                        continue;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent_edge[w] = e;
                        queue.push_back(w);
                    } else {
                        best = best.min(dist[u] + dist[w] + 1);
                    }
                }
            }
        }
        (best != usize::MAX).then_some(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    #[test]
    fn cycle_properties() {
        let g = cycle(6);
        assert!(g.is_connected());
        assert_eq!(g.regular_degree(), Some(2));
        assert_eq!(g.girth(), Some(6));
        assert!(g.bipartition().is_some());
        let g5 = cycle(5);
        assert!(g5.bipartition().is_none());
        assert_eq!(g5.girth(), Some(5));
    }

    #[test]
    fn path_has_no_cycle() {
        let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(g.girth(), None);
        let (dist, _) = g.bfs(0);
        assert_eq!(dist, vec![0, 1, 2, 3]);
    }

    #[test]
    fn components_split() {
        let g = Graph::new(5, vec![(0, 1), (2, 3)]);
        let comp = g.components();
        assert_eq!(comp[0], comp[1]);
        assert_eq!(comp[2], comp[3]);
        assert_ne!(comp[0], comp[2]);
        assert_ne!(comp[4], comp[0]);
        assert!(!g.is_connected());
    }
}
