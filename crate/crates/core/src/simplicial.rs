//! Simplicial complexes as a specialisation of [`ChainComplex`]: faces are
//! sorted vertex tuples, boundary matrices are derived from subset
//! incidence. Includes clique closure of graphs, links, skeletons and the
//! triangulated-torus test fixture.

use crate::chain::{ChainComplex, ChainError};
use crate::gf2::BinaryMatrix;
use crate::graph::Graph;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimplicialError {
    #[error("face {0:?} is not strictly sorted")]
    UnsortedFace(Vec<u32>),
    #[error("face {0:?} references vertex out of range {1}")]
    VertexOutOfRange(Vec<u32>, usize),
    #[error("face {0:?} is missing its subface {1:?} (complex not downward closed)")]
    NotClosed(Vec<u32>, Vec<u32>),
    #[error("duplicate face {0:?}")]
    DuplicateFace(Vec<u32>),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("torus fixture needs r, c >= 3, got ({0}, {1})")]
    TorusTooSmall(usize, usize),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("bad simplicial file: {0}")]
    BadFile(String),
}

/// A simplicial complex: `faces_by_dim[p]` lists the p-faces as strictly
/// sorted (p+1)-vertex tuples, the face lists themselves sorted
/// lexicographically so derived boundary matrices are reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    faces_by_dim: Vec<Vec<Vec<u32>>>,
    complex: ChainComplex,
}

impl SimplicialComplex {
    /// Builds and validates: tuples strictly sorted, in range, no
    /// duplicates, downward closed. `faces[p]` holds the (p+1)-faces for
    /// p >= 1; vertices are implicit as 0..vertex_count.
    pub fn new(
        vertex_count: usize,
        mut faces: Vec<Vec<Vec<u32>>>,
    ) -> Result<Self, SimplicialError> {
        // Drop trailing empty grades.
        while faces.last().is_some_and(Vec::is_empty) {
            faces.pop();
        }
        for level in faces.iter_mut() {
            for face in level.iter_mut() {
                face.sort_unstable();
            }
            level.sort();
        }
        let mut faces_by_dim = Vec::with_capacity(faces.len() + 1);
        faces_by_dim.push(
            (0..vertex_count as u32)
                .map(|v| vec![v])
                .collect::<Vec<_>>(),
        );
        faces_by_dim.extend(faces);
        for (p, level) in faces_by_dim.iter().enumerate() {
            for (i, face) in level.iter().enumerate() {
                if face.len() != p + 1 || face.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(SimplicialError::UnsortedFace(face.clone()));
                }
                if face.last().is_some_and(|&v| v as usize >= vertex_count) {
                    return Err(SimplicialError::VertexOutOfRange(
                        face.clone(),
                        vertex_count,
                    ));
                }
                if i > 0 && level[i - 1] == *face {
                    return Err(SimplicialError::DuplicateFace(face.clone()));
                }
            }
        }
        // Downward closure + boundary assembly in one pass.
        let mut interior = Vec::new();
        for p in 1..faces_by_dim.len() {
            let (lower, upper) = {
                let (a, b) = faces_by_dim.split_at(p);
                (&a[p - 1], &b[0])
            };
            let mut entries = Vec::with_capacity(upper.len() * (p + 1));
            for (col, face) in upper.iter().enumerate() {
                for skip in 0..face.len() {
                    let sub: Vec<u32> = face
                        .iter()
                        .enumerate()
                        .filter_map(|(i, &v)| (i != skip).then_some(v))
                        .collect();
                    let row = lower
                        .binary_search(&sub)
                        .map_err(|_| SimplicialError::NotClosed(face.clone(), sub.clone()))?;
                    entries.push((row, col));
                }
            }
            interior.push(
                BinaryMatrix::from_entries(lower.len(), upper.len(), entries)
                    .expect("subset incidence entries are in range and distinct"),
            );
        }
        let face_counts: Vec<usize> = faces_by_dim.iter().map(Vec::len).collect();
        let complex = ChainComplex::new(face_counts, interior)?;
        Ok(SimplicialComplex {
            vertex_count,
            faces_by_dim,
            complex,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn dimension(&self) -> usize {
        self.faces_by_dim.len() - 1
    }

    /// The p-faces; empty above the complex dimension.
    pub fn faces(&self, p: usize) -> &[Vec<u32>] {
        self.faces_by_dim.get(p).map_or(&[], Vec::as_slice)
    }

    pub fn face_count(&self, p: usize) -> usize {
        self.faces_by_dim.get(p).map_or(0, Vec::len)
    }

    pub fn chain(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn into_chain(self) -> ChainComplex {
        self.complex
    }

    /// The 1-skeleton as a graph.
    pub fn graph(&self) -> Graph {
        let edges = self
            .faces_by_dim
            .get(1)
            .map(|edges| {
                edges
                    .iter()
                    .map(|e| (e[0] as usize, e[1] as usize))
                    .collect()
            })
            .unwrap_or_default();
        Graph::new(self.vertex_count, edges)
    }

    /// The link of v: vertices are the neighbours of v, connected when they
    /// form a triangle with v. Returned with original vertex ids.
    pub fn link(&self, v: usize) -> Result<LinkGraph, SimplicialError> {
        if v >= self.vertex_count {
            return Err(SimplicialError::UnknownVertex(v));
        }
        let v = v as u32;
        let mut vertices: Vec<u32> = Vec::new();
        if let Some(edges) = self.faces_by_dim.get(1) {
            for e in edges {
                if e[0] == v {
                    vertices.push(e[1]);
                } else if e[1] == v {
                    vertices.push(e[0]);
                }
            }
        }
        vertices.sort_unstable();
        let index: BTreeMap<u32, usize> =
            vertices.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let mut edges = Vec::new();
        if let Some(triangles) = self.faces_by_dim.get(2) {
            for t in triangles {
                if let Some(pos) = t.iter().position(|&u| u == v) {
                    let others: Vec<u32> = t
                        .iter()
                        .enumerate()
                        .filter_map(|(i, &u)| (i != pos).then_some(u))
                        .collect();
                    edges.push((index[&others[0]], index[&others[1]]));
                }
            }
        }
        let n = vertices.len();
        Ok(LinkGraph {
            vertices,
            graph: Graph::new(n, edges),
        })
    }

    /// Faces of dimension <= k; boundary maps ∂_1..∂_k are bit-identical to
    /// the input's.
    pub fn skeleton(&self, k: usize) -> SimplicialComplex {
        assert!(k <= self.dimension());
        let faces = self.faces_by_dim[1..=k].to_vec();
        SimplicialComplex::new(self.vertex_count, faces)
            .expect("a skeleton of a valid complex is valid")
    }

    /// Per-grade (min, max) incidence degrees: for each p < d, the number of
    /// (p+1)-faces containing a p-face.
    pub fn degree_stats(&self) -> Vec<(usize, usize)> {
        (0..self.dimension())
            .map(|p| {
                let upper = self.complex.boundary(p + 1);
                let mut min = usize::MAX;
                let mut max = 0;
                for r in 0..upper.n_rows() {
                    let w = upper.row_weight(r);
                    min = min.min(w);
                    max = max.max(w);
                }
                if upper.n_rows() == 0 {
                    (0, 0)
                } else {
                    (min, max)
                }
            })
            .collect()
    }
}

/// A link, carrying the original vertex ids alongside the reindexed graph.
#[derive(Debug, Clone)]
pub struct LinkGraph {
    pub vertices: Vec<u32>,
    pub graph: Graph,
}

/// All cliques of size <= max_dim+1 of a simple graph, as a complex.
///
/// Cliques are enumerated level by level: a (k+1)-clique is a k-clique
/// extended by a common neighbour larger than its last vertex.
pub fn clique_complex(graph: &Graph, max_dim: usize) -> SimplicialComplex {
    let n = graph.n_vertices();
    let adj: Vec<Vec<u32>> = (0..n)
        .map(|v| graph.neighbours(v).map(|u| u as u32).collect())
        .collect();
    let mut levels: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut current: Vec<Vec<u32>> = graph
        .edges()
        .iter()
        .map(|&(u, v)| vec![u as u32, v as u32])
        .collect();
    let mut dim = 1;
    while !current.is_empty() && dim <= max_dim {
        levels.push(current.clone());
        if dim == max_dim {
            break;
        }
        let mut next = Vec::new();
        for clique in &current {
            let mut common: Vec<u32> = adj[clique[0] as usize]
                .iter()
                .copied()
                .filter(|&w| w > *clique.last().unwrap())
                .collect();
            for &v in &clique[1..] {
                common.retain(|w| adj[v as usize].binary_search(w).is_ok());
            }
            for w in common {
                let mut bigger = clique.clone();
                bigger.push(w);
                next.push(bigger);
            }
        }
        current = next;
        dim += 1;
    }
    SimplicialComplex::new(n, levels).expect("cliques are downward closed")
}

/// Triangulated r x c grid torus: rc vertices, 3rc edges, 2rc triangles.
/// Each grid square splits along its diagonal. H_1 has dimension 2.
pub fn fixture_torus(r: usize, c: usize) -> Result<SimplicialComplex, SimplicialError> {
    if r < 3 || c < 3 {
        return Err(SimplicialError::TorusTooSmall(r, c));
    }
    let id = |i: usize, j: usize| -> u32 { ((i % r) * c + (j % c)) as u32 };
    let mut edges = Vec::with_capacity(3 * r * c);
    let mut triangles = Vec::with_capacity(2 * r * c);
    for i in 0..r {
        for j in 0..c {
            let right = vec![id(i, j), id(i, j + 1)];
            let down = vec![id(i, j), id(i + 1, j)];
            let diag = vec![id(i, j), id(i + 1, j + 1)];
            edges.push(right);
            edges.push(down);
            edges.push(diag);
            triangles.push(vec![id(i, j), id(i, j + 1), id(i + 1, j + 1)]);
            triangles.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
        }
    }
    SimplicialComplex::new(r * c, vec![edges, triangles])
}

// ---------------------------------------------------------------------------
// File format

#[derive(Serialize, Deserialize)]
struct SimplicialFile {
    vertices: usize,
    /// Keyed by face dimension as a string ("1" = edges, "2" = triangles).
    faces: BTreeMap<String, Vec<Vec<u32>>>,
}

pub fn simplicial_to_json(x: &SimplicialComplex) -> String {
    let faces: BTreeMap<String, Vec<Vec<u32>>> = (1..=x.dimension())
        .map(|p| (p.to_string(), x.faces(p).to_vec()))
        .collect();
    serde_json::to_string(&SimplicialFile {
        vertices: x.vertex_count(),
        faces,
    })
    .expect("simplicial serialization cannot fail")
}

pub fn simplicial_from_json(text: &str) -> Result<SimplicialComplex, SimplicialError> {
    let file: SimplicialFile =
        serde_json::from_str(text).map_err(|e| SimplicialError::BadFile(e.to_string()))?;
    let mut by_dim: Vec<Vec<Vec<u32>>> = Vec::new();
    for (key, faces) in file.faces {
        let p: usize = key
            .parse()
            .map_err(|_| SimplicialError::BadFile(format!("bad face dimension key `{key}`")))?;
        if p == 0 {
            continue;
        }
        if by_dim.len() < p {
            by_dim.resize(p, Vec::new());
        }
        by_dim[p - 1] = faces;
    }
    SimplicialComplex::new(file.vertices, by_dim)
}
