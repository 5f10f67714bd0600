use super::{ConfusabilityGraph, GraphError, VertexSet};

pub const DEFAULT_VERTEX_LIMIT: usize = 40;
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// Exact independence number, refusing graphs above [`DEFAULT_VERTEX_LIMIT`].
pub fn independence_number(g: &ConfusabilityGraph) -> Result<usize, GraphError> {
    independence_number_with_limit(g, DEFAULT_VERTEX_LIMIT)
}

pub fn independence_number_with_limit(
    g: &ConfusabilityGraph,
    limit: usize,
) -> Result<usize, GraphError> {
    Ok(max_independent(g, limit)?.len())
}

/// A maximum independent set, in increasing vertex order.
pub fn maximum_independent_set(g: &ConfusabilityGraph) -> Result<Vec<usize>, GraphError> {
    max_independent(g, DEFAULT_VERTEX_LIMIT)
}

/// Maximum clique of the complement by branch and bound, with greedy
/// colouring as the upper bound (Tomita-style).
fn max_independent(g: &ConfusabilityGraph, limit: usize) -> Result<Vec<usize>, GraphError> {
    let n = g.vertex_count();
    if n > limit {
        return Err(GraphError::LimitExceeded { vertices: n, limit });
    }
    // Low-degree vertices of g first: they are the likeliest clique members
    // in the complement and get coloured early.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let comp: Vec<VertexSet> = order
        .iter()
        .map(|&v| {
            VertexSet::from_iter(
                n,
                (0..n).filter(|&u| u != v && !g.has_edge(u, v)).map(|u| position[u]),
            )
        })
        .collect();

    let mut search = CliqueSearch {
        comp: &comp,
        best: Vec::new(),
        current: Vec::new(),
    };
    search.expand(VertexSet::full(n));
    let mut set: Vec<usize> = search.best.iter().map(|&i| order[i]).collect();
    set.sort_unstable();
    Ok(set)
}

struct CliqueSearch<'a> {
    comp: &'a [VertexSet],
    best: Vec<usize>,
    current: Vec<usize>,
}

impl CliqueSearch<'_> {
    fn expand(&mut self, mut cand: VertexSet) {
        let (verts, colors) = self.color(&cand);
        for i in (0..verts.len()).rev() {
            if self.current.len() + colors[i] <= self.best.len() {
                return;
            }
            let v = verts[i];
            self.current.push(v);
            let next = cand.intersection(&self.comp[v]);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            cand.remove(v);
        }
    }

    /// Vertices sorted by greedy colour class; `colors[i]` bounds the clique
    /// size available among `verts[..=i]`.
    fn color(&self, cand: &VertexSet) -> (Vec<usize>, Vec<usize>) {
        let mut verts = Vec::with_capacity(cand.len());
        let mut colors = Vec::with_capacity(cand.len());
        let mut uncolored = cand.clone();
        let mut k = 0;
        while !uncolored.is_empty() {
            k += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                uncolored.remove(v);
                q.remove(v);
                q = q.difference(&self.comp[v]);
                verts.push(v);
                colors.push(k);
            }
        }
        (verts, colors)
    }
}

/// Exhaustive check of all `2^n` vertex subsets, for `n <= 24`.
pub fn independence_number_brute(g: &ConfusabilityGraph) -> Result<usize, GraphError> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(GraphError::LimitExceeded {
            vertices: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).word(0) as u32).collect();
    let mut independent = vec![false; 1 << n];
    independent[0] = true;
    let mut best = 0;
    for mask in 1u32..(1u32 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        if independent[rest as usize] && adj[low] & rest == 0 {
            independent[mask as usize] = true;
            best = best.max(mask.count_ones() as usize);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph_from_bits(n: usize, bits: &[bool]) -> ConfusabilityGraph {
        let mut g = ConfusabilityGraph::new(n);
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if bits[k % bits.len()] {
                    g.add_edge(u, v).unwrap();
                }
                k += 1;
            }
        }
        g
    }

    #[test]
    fn small_values() {
        assert_eq!(independence_number(&ConfusabilityGraph::complete(6)).unwrap(), 1);
        assert_eq!(independence_number(&ConfusabilityGraph::new(7)).unwrap(), 7);
        assert_eq!(independence_number(&ConfusabilityGraph::new(0)).unwrap(), 0);
        let c5 = ConfusabilityGraph::cycle(5);
        assert_eq!(independence_number(&c5).unwrap(), 2);
        assert_eq!(independence_number_brute(&c5).unwrap(), 2);
        let c55 = c5.strong_product(&c5);
        assert_eq!(c55.vertex_count(), 25);
        assert_eq!(independence_number(&c55).unwrap(), 5);
    }

    #[test]
    fn c5_squared_minus_a_vertex_by_brute_force() {
        // 25 vertices is one over the brute-force cap. Dropping (4,4) keeps
        // the independent set {(i, 2i mod 5)}.
        let c55 = ConfusabilityGraph::cycle(5).strong_product(&ConfusabilityGraph::cycle(5));
        let keep: Vec<usize> = (0..24).collect();
        let mut sub = ConfusabilityGraph::new(24);
        for &u in &keep {
            for &v in &keep {
                if u < v && c55.has_edge(u, v) {
                    sub.add_edge(u, v).unwrap();
                }
            }
        }
        assert_eq!(independence_number_brute(&sub).unwrap(), 5);
    }

    #[test]
    fn witness_is_independent() {
        let g = ConfusabilityGraph::cycle(9);
        let set = maximum_independent_set(&g).unwrap();
        assert_eq!(set.len(), 4);
        for &u in &set {
            for &v in &set {
                assert!(!g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn limits_are_enforced() {
        let big = ConfusabilityGraph::new(41);
        assert!(matches!(
            independence_number(&big),
            Err(GraphError::LimitExceeded { vertices: 41, limit: 40 })
        ));
        assert_eq!(independence_number_with_limit(&big, 64).unwrap(), 41);
        assert!(independence_number_brute(&ConfusabilityGraph::new(25)).is_err());
    }

    #[test]
    fn forty_vertex_instance() {
        // Disjoint union of eight 5-cycles: alpha = 16.
        let mut g = ConfusabilityGraph::new(40);
        for c in 0..8 {
            for i in 0..5 {
                g.add_edge(5 * c + i, 5 * c + (i + 1) % 5).unwrap();
            }
        }
        assert_eq!(independence_number(&g).unwrap(), 16);
    }

    proptest! {
        #[test]
        fn branch_and_bound_matches_brute_force(n in 0usize..=16, bits in prop::collection::vec(any::<bool>(), 1..140)) {
            let g = graph_from_bits(n, &bits);
            prop_assert_eq!(independence_number(&g).unwrap(), independence_number_brute(&g).unwrap());
        }

        #[test]
        fn adding_edges_never_raises_alpha(n in 2usize..=14, bits in prop::collection::vec(any::<bool>(), 1..100), extra in prop::collection::vec((0usize..14, 0usize..14), 1..10)) {
            let mut g = graph_from_bits(n, &bits);
            let mut prev = independence_number(&g).unwrap();
            for (u, v) in extra {
                let (u, v) = (u % n, v % n);
                if u != v {
                    g.add_edge(u, v).unwrap();
                }
                let a = independence_number(&g).unwrap();
                prop_assert!(a <= prev);
                prev = a;
            }
        }

        #[test]
        fn strong_product_is_supermultiplicative(n1 in 1usize..=6, n2 in 1usize..=6, b1 in prop::collection::vec(any::<bool>(), 1..20), b2 in prop::collection::vec(any::<bool>(), 1..20)) {
            let (g1, g2) = (graph_from_bits(n1, &b1), graph_from_bits(n2, &b2));
            let a1 = independence_number(&g1).unwrap();
            let a2 = independence_number(&g2).unwrap();
            prop_assert!(independence_number(&g1.strong_product(&g2)).unwrap() >= a1 * a2);
        }
    }
}
