use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n`. Edges are stored as `(u, v)`
/// with `u < v`, in input order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(edges.len());
        let mut seen = std::collections::HashSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidReductionInput(format!("edge ({u}, {v}) leaves the vertex range 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidReductionInput(format!("self-loop at vertex {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidReductionInput(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
            normalized.push(e);
        }
        Ok(Graph { n, edges: normalized })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph { n, edges }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Indices of the edges incident to `u`, ascending.
    pub fn incident_edges(&self, u: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].0 == u || self.edges[i].1 == u).collect()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == u || b == u).count()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        (0..self.n).all(|u| self.degree(u) == d)
    }

    fn membership(&self, vertices: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.n];
        for &u in vertices {
            if u < self.n {
                inside[u] = true;
            }
        }
        inside
    }

    /// Indices of the edges with both ends in `vertices`.
    pub fn induced_edges(&self, vertices: &[usize]) -> Vec<usize> {
        let inside = self.membership(vertices);
        (0..self.edges.len()).filter(|&i| inside[self.edges[i].0] && inside[self.edges[i].1]).collect()
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        let k = vertices.len();
        self.induced_edges(vertices).len() == k * k.saturating_sub(1) / 2
    }

    pub fn is_vertex_cover(&self, vertices: &[usize]) -> bool {
        let inside = self.membership(vertices);
        self.edges.iter().all(|&(u, v)| inside[u] || inside[v])
    }
}

/// Universe `0..N` and a list of subsets, each stored sorted and
/// deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoverInstance {
    universe: usize,
    sets: Vec<Vec<usize>>,
}

impl SetCoverInstance {
    pub fn new(universe: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(sets.len());
        for (i, mut set) in sets.into_iter().enumerate() {
            if let Some(&x) = set.iter().find(|&&x| x >= universe) {
                return Err(Error::InvalidReductionInput(format!("set {i} contains {x}, outside 0..{universe}")));
            }
            set.sort_unstable();
            set.dedup();
            normalized.push(set);
        }
        Ok(SetCoverInstance { universe, sets: normalized })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Largest set size.
    pub fn max_set_size(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_cover(&self, chosen: &[usize]) -> bool {
        let mut covered = vec![false; self.universe];
        for &i in chosen {
            for &x in &self.sets[i] {
                covered[x] = true;
            }
        }
        covered.into_iter().all(|c| c)
    }
}

/// Calls `visit` on every `k`-subset of `0..n` in lexicographic order until
/// it returns `true`.
pub(crate) fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    if k > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if visit(&idx) {
            return true;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else { return false };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Lexicographically first `k`-subset inducing at least `t` edges.
pub fn find_dense_subgraph(graph: &Graph, k: usize, t: usize, budget: u128) -> Result<Option<Vec<usize>>> {
    let size = binomial(graph.num_vertices(), k);
    if size > budget {
        return Err(Error::BudgetExceeded { size, budget });
    }
    let mut found = None;
    for_each_subset(graph.num_vertices(), k, |s| {
        let hit = graph.induced_edges(s).len() >= t;
        if hit {
            found = Some(s.to_vec());
        }
        hit
    });
    Ok(found)
}

pub fn find_clique(graph: &Graph, k: usize, budget: u128) -> Result<Option<Vec<usize>>> {
    find_dense_subgraph(graph, k, k * k.saturating_sub(1) / 2, budget)
}

/// A smallest vertex cover of size at most `k`, if one exists.
pub fn find_vertex_cover(graph: &Graph, k: usize, budget: u128) -> Result<Option<Vec<usize>>> {
    let size: u128 = (0..=k.min(graph.num_vertices())).map(|s| binomial(graph.num_vertices(), s)).sum();
    if size > budget {
        return Err(Error::BudgetExceeded { size, budget });
    }
    for s in 0..=k.min(graph.num_vertices()) {
        let mut found = None;
        for_each_subset(graph.num_vertices(), s, |c| {
            let hit = graph.is_vertex_cover(c);
            if hit {
                found = Some(c.to_vec());
            }
            hit
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// A minimum set cover, lexicographically first among those of least size;
/// `None` if the sets do not cover the universe.
pub fn find_min_set_cover(sc: &SetCoverInstance, budget: u128) -> Result<Option<Vec<usize>>> {
    let m = sc.sets().len();
    let size = 1u128.checked_shl(m as u32).unwrap_or(u128::MAX);
    if size > budget {
        return Err(Error::BudgetExceeded { size, budget });
    }
    for s in 0..=m {
        let mut found = None;
        for_each_subset(m, s, |c| {
            let hit = sc.is_cover(c);
            if hit {
                found = Some(c.to_vec());
            }
            hit
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}
