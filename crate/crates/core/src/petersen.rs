//! The Petersen graph of `-1` curves on a quintic del Pezzo surface, its
//! twelve five-cycles, and the automorphisms that move them around.
//!
//! Vertices are the 2-element subsets of `{1..5}`, adjacent when disjoint.

use crate::dihedral::{from_permutation, DihedralElement};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use thiserror::Error;

pub const VERTEX_COUNT: usize = 10;

/// A vertex permutation, `perm[v]` is the image of `v`.
pub type Perm = [usize; VERTEX_COUNT];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PetersenError {
    #[error("vertex {0} is out of range")]
    BadVertex(usize),
    #[error("cycle repeats a vertex")]
    RepeatedVertex,
    #[error("{0} and {1} are consecutive on the cycle but not adjacent")]
    NotAdjacent(usize, usize),
    #[error("no automorphism extends the identification")]
    NoExtension,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PetersenGraph {
    labels: Vec<[u8; 2]>,
    adj: [[bool; VERTEX_COUNT]; VERTEX_COUNT],
}

impl Default for PetersenGraph {
    fn default() -> Self {
        Self::new()
    }
}

impl PetersenGraph {
    pub fn new() -> Self {
        let mut labels = Vec::with_capacity(VERTEX_COUNT);
        for i in 1..=5u8 {
            for j in i + 1..=5 {
                labels.push([i, j]);
            }
        }
        let mut adj = [[false; VERTEX_COUNT]; VERTEX_COUNT];
        for u in 0..VERTEX_COUNT {
            for v in 0..VERTEX_COUNT {
                let [a, b] = labels[u];
                adj[u][v] = !labels[v].contains(&a) && !labels[v].contains(&b);
            }
        }
        PetersenGraph { labels, adj }
    }

    pub fn label(&self, v: usize) -> [u8; 2] {
        self.labels[v]
    }

    /// Vertex named by a 2-subset, in either order.
    pub fn vertex(&self, a: u8, b: u8) -> Option<usize> {
        let key = [a.min(b), a.max(b)];
        self.labels.iter().position(|&l| l == key)
    }

    pub fn label_string(&self, v: usize) -> String {
        let [a, b] = self.labels[v];
        format!("{a}{b}")
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u][v]
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        (0..VERTEX_COUNT).filter(|&u| self.adj[v][u]).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..VERTEX_COUNT {
            for v in u + 1..VERTEX_COUNT {
                if self.adj[u][v] {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Length of the shortest cycle, by BFS from every vertex.
    pub fn girth(&self) -> usize {
        let mut best = usize::MAX;
        for root in 0..VERTEX_COUNT {
            let mut dist = [usize::MAX; VERTEX_COUNT];
            let mut parent = [usize::MAX; VERTEX_COUNT];
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbours(u) {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if parent[u] != v {
                        best = best.min(dist[u] + dist[v] + 1);
                    }
                }
            }
        }
        best
    }

    pub fn is_automorphism(&self, p: &Perm) -> bool {
        let mut seen = [false; VERTEX_COUNT];
        for &x in p {
            if x >= VERTEX_COUNT || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        (0..VERTEX_COUNT).all(|u| (0..VERTEX_COUNT).all(|v| self.adj[u][v] == self.adj[p[u]][p[v]]))
    }

    /// The automorphism induced by a permutation of `{1..5}` (given 0-based).
    pub fn from_s5(&self, sigma: [usize; 5]) -> Perm {
        let mut p = [0; VERTEX_COUNT];
        for (v, slot) in p.iter_mut().enumerate() {
            let [a, b] = self.labels[v];
            let (x, y) = (sigma[a as usize - 1] as u8 + 1, sigma[b as usize - 1] as u8 + 1);
            *slot = self.vertex(x, y).expect("image is a 2-subset");
        }
        p
    }

    /// The neighbour of `c[i]` that is not on the cycle.
    fn outside_neighbour(&self, c: &FiveCycle, i: usize) -> usize {
        self.neighbours(c.0[i])
            .into_iter()
            .find(|v| !c.0.contains(v))
            .expect("a cycle vertex has exactly one neighbour off the cycle")
    }
}

/// Five distinct vertices, each adjacent to the next and the last to the first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiveCycle(pub [usize; 5]);

impl FiveCycle {
    pub fn new(g: &PetersenGraph, vertices: [usize; 5]) -> Result<Self, PetersenError> {
        let c = FiveCycle(vertices);
        c.validate(g)?;
        Ok(c)
    }

    pub fn validate(&self, g: &PetersenGraph) -> Result<(), PetersenError> {
        if let Some(&v) = self.0.iter().find(|&&v| v >= VERTEX_COUNT) {
            return Err(PetersenError::BadVertex(v));
        }
        let distinct: BTreeSet<_> = self.0.iter().collect();
        if distinct.len() != 5 {
            return Err(PetersenError::RepeatedVertex);
        }
        for i in 0..5 {
            let (u, v) = (self.0[i], self.0[(i + 1) % 5]);
            if !g.adjacent(u, v) {
                return Err(PetersenError::NotAdjacent(u, v));
            }
        }
        Ok(())
    }

    /// Vertex `i` of the cycle is `c[i]`; the element `g` relabels it `g(i)`.
    pub fn relabel(&self, g: DihedralElement) -> Self {
        let mut out = [0; 5];
        for i in 0..5 {
            out[g.apply(i, 5)] = self.0[i];
        }
        FiveCycle(out)
    }

    /// Lexicographically least of the ten dihedral rewritings.
    pub fn canonical(&self) -> Self {
        crate::dihedral::dihedral_elements(5)
            .into_iter()
            .map(|g| self.relabel(g))
            .min()
            .expect("nonempty")
    }

    pub fn vertex_set(&self) -> BTreeSet<usize> {
        self.0.iter().copied().collect()
    }

    pub fn map(&self, p: &Perm) -> Self {
        FiveCycle(self.0.map(|v| p[v]))
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.0.iter().position(|&x| x == v)
    }
}

impl fmt::Display for FiveCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = PetersenGraph::new();
        let names: Vec<String> = self.0.iter().map(|&v| g.label_string(v)).collect();
        write!(f, "({})", names.join(" "))
    }
}

/// The pentagon 12-34-15-23-45.
pub fn external_pentagon(g: &PetersenGraph) -> FiveCycle {
    let v = |a, b| g.vertex(a, b).expect("valid label");
    FiveCycle([v(1, 2), v(3, 4), v(1, 5), v(2, 3), v(4, 5)])
}

/// All five-cycles, in canonical form and sorted.
pub fn enumerate_five_cycles(g: &PetersenGraph) -> Vec<FiveCycle> {
    let mut found = BTreeSet::new();
    fn extend(g: &PetersenGraph, path: &mut Vec<usize>, found: &mut BTreeSet<FiveCycle>) {
        if path.len() == 5 {
            if g.adjacent(path[4], path[0]) {
                let c = FiveCycle([path[0], path[1], path[2], path[3], path[4]]);
                found.insert(c.canonical());
            }
            return;
        }
        let last = *path.last().expect("nonempty path");
        for v in g.neighbours(last) {
            // The first vertex is the smallest, which avoids most duplicates.
            if v > path[0] && !path.contains(&v) {
                path.push(v);
                extend(g, path, found);
                path.pop();
            }
        }
    }
    for start in 0..VERTEX_COUNT {
        extend(g, &mut vec![start], &mut found);
    }
    found.into_iter().collect()
}

/// All adjacency-preserving vertex permutations, by backtracking.
pub fn automorphism_group(g: &PetersenGraph) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut p = [usize::MAX; VERTEX_COUNT];
    let mut used = [false; VERTEX_COUNT];
    fn rec(g: &PetersenGraph, k: usize, p: &mut Perm, used: &mut [bool; VERTEX_COUNT], out: &mut Vec<Perm>) {
        if k == VERTEX_COUNT {
            out.push(*p);
            return;
        }
        for image in 0..VERTEX_COUNT {
            if used[image] {
                continue;
            }
            if (0..k).all(|u| g.adjacent(u, k) == g.adjacent(p[u], image)) {
                p[k] = image;
                used[image] = true;
                rec(g, k + 1, p, used, out);
                used[image] = false;
            }
        }
        p[k] = usize::MAX;
    }
    rec(g, 0, &mut p, &mut used, &mut out);
    out
}

/// Automorphisms mapping the vertex set of `c` to itself.
pub fn cycle_stabilizer(g: &PetersenGraph, c: &FiveCycle) -> Result<Vec<Perm>, PetersenError> {
    c.validate(g)?;
    let set = c.vertex_set();
    Ok(automorphism_group(g)
        .into_iter()
        .filter(|p| c.0.iter().all(|v| set.contains(&p[*v])))
        .collect())
}

/// How a stabilizing automorphism moves the positions of `c`.
pub fn restrict_to_cycle(c: &FiveCycle, p: &Perm) -> Option<DihedralElement> {
    let perm: Option<Vec<usize>> = c.0.iter().map(|&v| c.position(p[v])).collect();
    from_permutation(&perm?, None)
}

/// The five vertices off `c`, ordered so that `c[i]` meets `c'[2i mod 5]`,
/// together with the incidence pairs `(i, j)`.
pub fn complement_cycle(
    g: &PetersenGraph,
    c: &FiveCycle,
) -> Result<(FiveCycle, Vec<(usize, usize)>), PetersenError> {
    c.validate(g)?;
    let mut out = [0; 5];
    for i in 0..5 {
        out[(2 * i) % 5] = g.outside_neighbour(c, i);
    }
    let complement = FiveCycle::new(g, out)?;
    let mut incidence = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            if g.adjacent(c.0[i], complement.0[j]) {
                incidence.push((i, j));
            }
        }
    }
    Ok((complement, incidence))
}

/// The automorphism sending `c1[i]` to `c2[phi(i)]`, determined on the rest of
/// the graph by the outside-neighbour matching.
pub fn extend_cycle_iso_to_graph(
    g: &PetersenGraph,
    c1: &FiveCycle,
    c2: &FiveCycle,
    phi: DihedralElement,
) -> Result<Perm, PetersenError> {
    c1.validate(g)?;
    c2.validate(g)?;
    let mut p = [usize::MAX; VERTEX_COUNT];
    for i in 0..5 {
        let j = phi.apply(i, 5);
        p[c1.0[i]] = c2.0[j];
        p[g.outside_neighbour(c1, i)] = g.outside_neighbour(c2, j);
    }
    if g.is_automorphism(&p) {
        Ok(p)
    } else {
        Err(PetersenError::NoExtension)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PetersenReport {
    pub five_cycles: usize,
    pub aut_order: usize,
    pub stabilizer_order: usize,
    pub incidence_rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycles: Option<Vec<Vec<String>>>,
}

/// Recomputes every count from scratch. Panics only if the Petersen graph
/// facts themselves fail, which the tests rule out.
pub fn petersen_report(with_listing: bool) -> PetersenReport {
    let g = PetersenGraph::new();
    let cycles = enumerate_five_cycles(&g);
    let aut = automorphism_group(&g);
    let stab = cycle_stabilizer(&g, &cycles[0]).expect("enumerated cycles are valid");
    let rule_holds = cycles.iter().all(|c| {
        complement_cycle(&g, c)
            .map(|(_, inc)| inc.len() == 5 && inc.iter().all(|&(i, j)| j == (2 * i) % 5))
            .unwrap_or(false)
    });
    PetersenReport {
        five_cycles: cycles.len(),
        aut_order: aut.len(),
        stabilizer_order: stab.len(),
        incidence_rule: if rule_holds { "j=2i mod 5" } else { "violated" }.to_string(),
        cycles: with_listing.then(|| {
            cycles
                .iter()
                .map(|c| c.0.iter().map(|&v| g.label_string(v)).collect())
                .collect()
        }),
    }
}
