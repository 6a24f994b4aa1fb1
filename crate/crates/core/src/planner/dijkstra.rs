//! Dijkstra over the directed steered-edge graph.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::real::Real;

use super::knn::OrdF;

/// Edges as `adjacency[from] = [(edge_index, to, weight)]`. Returns the edge
/// indices of a minimum-cost path and its total cost.
pub fn shortest_path_edges<T: Real>(
    adjacency: &[Vec<(usize, usize, T)>],
    start: usize,
    goal: usize,
) -> Option<(T, Vec<usize>)> {
    let n = adjacency.len();
    let mut dist: Vec<Option<T>> = vec![None; n];
    let mut via: Vec<Option<(usize, usize)>> = vec![None; n]; // (prev node, edge idx)
    let mut heap = BinaryHeap::new();
    dist[start] = Some(T::zero());
    // ties break on node index for reproducibility
    heap.push(Reverse((OrdF(T::zero()), start)));
    while let Some(Reverse((OrdF(cost), node))) = heap.pop() {
        match dist[node] {
            Some(best) if cost > best => continue,
            _ => {}
        }
        if node == goal {
            let mut edges = Vec::new();
            let mut cur = goal;
            while cur != start {
                let (prev, edge) = via[cur].expect("path reconstruction");
                edges.push(edge);
                cur = prev;
            }
            edges.reverse();
            return Some((cost, edges));
        }
        for &(edge, to, w) in &adjacency[node] {
            let next = cost + w;
            let better = match dist[to] {
                Some(best) => next < best,
                None => true,
            };
            if better {
                dist[to] = Some(next);
                via[to] = Some((node, edge));
                heap.push(Reverse((OrdF(next), to)));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let adj = vec![vec![(0, 1, 2.5)], vec![]];
        let (cost, edges) = shortest_path_edges(&adj, 0, 1).unwrap();
        assert_eq!(cost, 2.5);
        assert_eq!(edges, vec![0]);
    }

    #[test]
    fn triangle_prefers_two_hops() {
        // 0 -> 1 -> 2 costs 1 + 1, direct 0 -> 2 costs 3
        let adj = vec![vec![(0, 1, 1.0), (1, 2, 3.0)], vec![(2, 2, 1.0)], vec![]];
        let (cost, edges) = shortest_path_edges(&adj, 0, 2).unwrap();
        assert_eq!(cost, 2.0);
        assert_eq!(edges, vec![0, 2]);
    }

    #[test]
    fn unreachable_goal() {
        let adj = vec![vec![], vec![(0, 0, 1.0)]];
        assert!(shortest_path_edges::<f64>(&adj, 0, 1).is_none());
    }

    #[test]
    fn respects_direction() {
        let adj = vec![vec![], vec![(0, 0, 1.0)]];
        assert!(shortest_path_edges::<f64>(&adj, 1, 0).is_some());
        assert!(shortest_path_edges::<f64>(&adj, 0, 1).is_none());
    }
}
