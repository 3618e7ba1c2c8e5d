//! Dense small-graph machinery: clique checks and enumeration, exact
//! maximum independent set, disjunctive products, clique partitions.
//!
//! Vertices are indices 0..n with adjacency stored as one u64 bitset
//! per vertex, so everything here is limited to n <= 64.

use crate::error::Error;
use crate::scenario::{are_exclusive, Event, Scenario};

pub const MAX_VERTICES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
    labels: Vec<String>,
}

impl Graph {
    pub fn new(n: usize) -> Graph {
        assert!(n <= MAX_VERTICES, "graph too large: {n} vertices");
        Graph {
            n,
            adj: vec![0; n],
            labels: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert!(i < self.n && j < self.n && i != j, "bad edge ({i},{j})");
        self.adj[i] |= 1 << j;
        self.adj[j] |= 1 << i;
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.adj[i] >> j & 1 == 1
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn neighbors_mask(&self, i: usize) -> u64 {
        self.adj[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn set_label(&mut self, i: usize, label: String) {
        self.labels[i] = label;
    }

    /// Edge complement on the same vertex set.
    pub fn complement(&self) -> Graph {
        let mut g = Graph::new(self.n);
        g.labels = self.labels.clone();
        let all = mask_all(self.n);
        for i in 0..self.n {
            g.adj[i] = !self.adj[i] & all & !(1u64 << i);
        }
        g
    }

    /// Parses the graph file format: `n <count>`, `e <i> <j>`, `#` comments.
    pub fn parse(text: &str) -> Result<Graph, Error> {
        let mut g: Option<Graph> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| Error::Parse {
                line: lineno + 1,
                message: msg,
            };
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("n") => {
                    let n: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| bad("expected `n <count>`".into()))?;
                    if n > MAX_VERTICES {
                        return Err(Error::SizeLimit(format!(
                            "graph has {n} vertices; limit is {MAX_VERTICES}"
                        )));
                    }
                    g = Some(Graph::new(n));
                }
                Some("e") => {
                    let g = g.as_mut().ok_or_else(|| bad("`e` before `n`".into()))?;
                    let i: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| bad("expected `e <i> <j>`".into()))?;
                    let j: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| bad("expected `e <i> <j>`".into()))?;
                    if i >= g.len() || j >= g.len() || i == j {
                        return Err(bad(format!("bad edge ({i},{j})")));
                    }
                    g.add_edge(i, j);
                }
                _ => return Err(bad("expected `n`, `e` or a comment".into())),
            }
        }
        g.ok_or(Error::Parse {
            line: 0,
            message: "no `n <count>` line".into(),
        })
    }
}

fn mask_all(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn mask_to_vec(mut m: u64) -> Vec<usize> {
    let mut out = Vec::new();
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        out.push(i);
        m &= m - 1;
    }
    out
}

/// i ~ j iff (i-j) mod n is one of the offsets (or its negation).
pub fn circulant(n: usize, offsets: &[usize]) -> Graph {
    let mut g = Graph::new(n);
    for &o in offsets {
        assert!(o >= 1 && 2 * o <= n, "offset {o} out of range for n={n}");
        for i in 0..n {
            let j = (i + o) % n;
            if i != j {
                g.add_edge(i, j);
            }
        }
    }
    g
}

pub fn cycle(n: usize) -> Graph {
    circulant(n, &[1])
}

pub fn complete(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            g.add_edge(i, j);
        }
    }
    g
}

/// Edge (i,j) iff events i and j are exclusive. Rejects duplicate events.
pub fn build_exclusivity_graph(events: &[Event], scenario: &Scenario) -> Result<Graph, Error> {
    if events.len() > MAX_VERTICES {
        return Err(Error::SizeLimit(format!(
            "{} events; limit is {MAX_VERTICES}",
            events.len()
        )));
    }
    for i in 0..events.len() {
        for j in i + 1..events.len() {
            if events[i] == events[j] {
                return Err(Error::DuplicateEvent(i, j));
            }
        }
    }
    let mut g = Graph::new(events.len());
    for (i, e) in events.iter().enumerate() {
        g.set_label(i, e.to_string());
    }
    for i in 0..events.len() {
        for j in i + 1..events.len() {
            if are_exclusive(&events[i], &events[j], scenario)? {
                g.add_edge(i, j);
            }
        }
    }
    Ok(g)
}

pub fn is_clique(g: &Graph, s: &[usize]) -> bool {
    for (a, &i) in s.iter().enumerate() {
        for &j in &s[a + 1..] {
            if !g.has_edge(i, j) {
                return false;
            }
        }
    }
    true
}

pub fn is_independent(g: &Graph, s: &[usize]) -> bool {
    for (a, &i) in s.iter().enumerate() {
        for &j in &s[a + 1..] {
            if g.has_edge(i, j) {
                return false;
            }
        }
    }
    true
}

/// All maximal cliques, each sorted, in lexicographic order.
/// Bron-Kerbosch with pivoting.
pub fn enumerate_maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    bron_kerbosch(g, 0, mask_all(g.len()), 0, &mut out);
    let mut cliques: Vec<Vec<usize>> = out.into_iter().map(mask_to_vec).collect();
    cliques.sort();
    cliques
}

fn bron_kerbosch(g: &Graph, r: u64, p: u64, x: u64, out: &mut Vec<u64>) {
    if p == 0 && x == 0 {
        out.push(r);
        return;
    }
    // pivot: vertex of p|x with most neighbors in p
    let mut pivot = usize::MAX;
    let mut best = usize::MAX;
    let mut px = p | x;
    while px != 0 {
        let u = px.trailing_zeros() as usize;
        px &= px - 1;
        let missed = (p & !g.neighbors_mask(u)).count_ones() as usize;
        if missed < best {
            best = missed;
            pivot = u;
        }
    }
    let mut candidates = p & !g.neighbors_mask(pivot);
    let mut p = p;
    let mut x = x;
    while candidates != 0 {
        let v = candidates.trailing_zeros() as usize;
        candidates &= candidates - 1;
        let nv = g.neighbors_mask(v);
        bron_kerbosch(g, r | 1 << v, p & nv, x & nv, out);
        p &= !(1u64 << v);
        x |= 1 << v;
    }
}

/// Exact maximum independent set: branch-and-bound max clique on the
/// complement with a greedy-coloring upper bound. Deterministic.
pub fn max_independent_set(g: &Graph) -> (usize, Vec<usize>) {
    let comp = g.complement();
    let mut best_mask = 0u64;
    let mut best = 0usize;
    max_clique_search(&comp, 0, mask_all(comp.len()), 0, &mut best, &mut best_mask);
    (best, mask_to_vec(best_mask))
}

fn greedy_color_bound(g: &Graph, p: u64) -> usize {
    let mut colors = 0;
    let mut remaining = p;
    while remaining != 0 {
        colors += 1;
        let mut avail = remaining;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            avail &= avail - 1;
            remaining &= !(1u64 << v);
            avail &= !g.neighbors_mask(v);
        }
    }
    colors
}

fn max_clique_search(g: &Graph, r: u64, p: u64, size: usize, best: &mut usize, best_mask: &mut u64) {
    if p == 0 {
        if size > *best {
            *best = size;
            *best_mask = r;
        }
        return;
    }
    if size + greedy_color_bound(g, p) <= *best {
        return;
    }
    let mut candidates = p;
    let mut p = p;
    while candidates != 0 {
        let v = candidates.trailing_zeros() as usize;
        candidates &= candidates - 1;
        if size + p.count_ones() as usize <= *best {
            return;
        }
        let nv = g.neighbors_mask(v);
        max_clique_search(g, r | 1 << v, p & nv, size + 1, best, best_mask);
        p &= !(1u64 << v);
    }
}

/// OR product: (i,j) ~ (i',j') iff i~i' in g or j~j' in h.
/// Vertex (i,j) gets index i*h.len() + j.
pub fn disjunctive_product(g: &Graph, h: &Graph) -> Graph {
    let (ng, nh) = (g.len(), h.len());
    assert!(ng * nh <= MAX_VERTICES, "product too large");
    let mut p = Graph::new(ng * nh);
    for i in 0..ng {
        for j in 0..nh {
            p.set_label(i * nh + j, format!("({},{})", g.label(i), h.label(j)));
        }
    }
    for i1 in 0..ng {
        for j1 in 0..nh {
            for i2 in 0..ng {
                for j2 in 0..nh {
                    let (u, v) = (i1 * nh + j1, i2 * nh + j2);
                    if u < v && (g.has_edge(i1, i2) || h.has_edge(j1, j2)) {
                        p.add_edge(u, v);
                    }
                }
            }
        }
    }
    p
}

/// Partitions the vertices into `parts` disjoint cliques of cardinality
/// `size`, or returns None. First solution in lexicographic branch order.
pub fn clique_partition_search(g: &Graph, parts: usize, size: usize) -> Option<Vec<Vec<usize>>> {
    assert_eq!(parts * size, g.len(), "parts*size must equal vertex count");
    let mut partition = Vec::with_capacity(parts);
    if partition_rec(g, mask_all(g.len()), size, &mut partition) {
        Some(partition)
    } else {
        None
    }
}

fn partition_rec(g: &Graph, remaining: u64, size: usize, partition: &mut Vec<Vec<usize>>) -> bool {
    if remaining == 0 {
        return true;
    }
    // the lowest remaining vertex must be in some part; extend around it
    let v = remaining.trailing_zeros() as usize;
    let mut clique = vec![v];
    extend_clique(g, remaining & !(1u64 << v) & g.neighbors_mask(v), size, &mut clique, remaining, partition)
}

fn extend_clique(
    g: &Graph,
    candidates: u64,
    size: usize,
    clique: &mut Vec<usize>,
    remaining: u64,
    partition: &mut Vec<Vec<usize>>,
) -> bool {
    if clique.len() == size {
        let mask = clique.iter().fold(0u64, |m, &v| m | 1 << v);
        partition.push(clique.clone());
        if partition_rec(g, remaining & !mask, size, partition) {
            return true;
        }
        partition.pop();
        return false;
    }
    if (candidates.count_ones() as usize) < size - clique.len() {
        return false;
    }
    let mut cands = candidates;
    while cands != 0 {
        let v = cands.trailing_zeros() as usize;
        cands &= cands - 1;
        clique.push(v);
        if extend_clique(g, cands & g.neighbors_mask(v), size, clique, remaining, partition) {
            return true;
        }
        clique.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{chsh_events, chsh_scenario, kcbs_events, kcbs_scenario, specker_scenario, specker_triangle_events};

    #[test]
    fn kcbs_graph_is_c5() {
        let g = build_exclusivity_graph(&kcbs_events(), &kcbs_scenario()).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g.edge_count(), 5);
        for i in 0..5 {
            assert_eq!(g.degree(i), 2);
            assert!(g.has_edge(i, (i + 1) % 5));
        }
    }

    #[test]
    fn specker_graph_is_k3() {
        let g = build_exclusivity_graph(&specker_triangle_events(), &specker_scenario()).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(is_clique(&g, &[0, 1, 2]));
    }

    #[test]
    fn chsh_graph_is_circulant_8_1_4() {
        let g = build_exclusivity_graph(&chsh_events(), &chsh_scenario()).unwrap();
        assert_eq!(g.len(), 8);
        for i in 0..8 {
            assert_eq!(g.degree(i), 3);
        }
        // (A1+,A2+) is exclusive with exactly (A1-,A2-), (A2-,A3-), (A4+,A1-)
        assert!(g.has_edge(0, 1) && g.has_edge(0, 3) && g.has_edge(0, 6));
        // explicit isomorphism with circulant(8,{1,4}) under the order
        // e1,e4,e5,e8,e2,e3,e6,e7
        let c = circulant(8, &[1, 4]);
        let order = [0usize, 3, 4, 7, 1, 2, 5, 6];
        for a in 0..8 {
            for b in 0..8 {
                if a != b {
                    assert_eq!(c.has_edge(a, b), g.has_edge(order[a], order[b]));
                }
            }
        }
    }

    #[test]
    fn clique_checks() {
        let c5 = cycle(5);
        assert!(is_clique(&c5, &[0, 1]));
        assert!(!is_clique(&c5, &[0, 1, 2]));
        assert!(is_clique(&complete(3), &[0, 1, 2]));
    }

    #[test]
    fn mis_small_graphs() {
        assert_eq!(max_independent_set(&cycle(5)).0, 2);
        assert_eq!(max_independent_set(&complete(3)).0, 1);
        let (size, witness) = max_independent_set(&circulant(8, &[1, 4]));
        assert_eq!(size, 3);
        assert!(is_independent(&circulant(8, &[1, 4]), &witness));
    }

    #[test]
    fn maximal_cliques() {
        assert_eq!(enumerate_maximal_cliques(&complete(3)), vec![vec![0, 1, 2]]);
        let c5_cliques = enumerate_maximal_cliques(&cycle(5));
        assert_eq!(c5_cliques.len(), 5);
        for c in &c5_cliques {
            assert_eq!(c.len(), 2);
        }
        let empty = Graph::new(4);
        assert_eq!(enumerate_maximal_cliques(&empty).len(), 4);
    }

    #[test]
    fn product_degree_and_independence() {
        let c5 = cycle(5);
        let p = disjunctive_product(&c5, &c5);
        assert_eq!(p.len(), 25);
        for i in 0..25 {
            assert_eq!(p.degree(i), 16);
        }
        assert_eq!(max_independent_set(&p).0, 4);
        // K1 x g = g
        let k1 = complete(1);
        let q = disjunctive_product(&k1, &c5);
        assert_eq!(q.len(), 5);
        assert_eq!(q.edges(), c5.edges());
    }

    #[test]
    fn partition_searches() {
        let p = disjunctive_product(&cycle(5), &cycle(5));
        let parts = clique_partition_search(&p, 5, 5).unwrap();
        assert_eq!(parts.len(), 5);
        let mut seen = vec![false; 25];
        for c in &parts {
            assert_eq!(c.len(), 5);
            assert!(is_clique(&p, c));
            for &v in c {
                assert!(!seen[v]);
                seen[v] = true;
            }
        }
        assert!(clique_partition_search(&complete(4), 2, 2).is_some());
        assert!(clique_partition_search(&cycle(5), 1, 5).is_none());
    }

    #[test]
    fn circulant_shapes() {
        assert_eq!(cycle(5).edge_count(), 5);
        assert_eq!(circulant(8, &[1, 4]).edge_count(), 12);
        assert_eq!(circulant(3, &[1]), complete(3));
    }

    #[test]
    fn graph_file_round_trip() {
        let g = Graph::parse("# a path\nn 3\ne 0 1\ne 1 2\n").unwrap();
        assert_eq!(g.len(), 3);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));
        assert!(Graph::parse("e 0 1\n").is_err());
    }
}
