//! Small kd-tree for k-nearest-neighbour queries over the sampled positions.
//!
//! Ties in distance break toward the smaller node index, so neighbour sets
//! are reproducible on the highly symmetric lattices the planner uses.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::geom::Position3;
use crate::real::Real;

/// Total order on finite floats; panics on NaN by construction of the inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct OrdF<T>(pub T);

impl<T: Real> Eq for OrdF<T> {}

impl<T: Real> PartialOrd for OrdF<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for OrdF<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).expect("finite costs")
    }
}

struct Node {
    point: usize,
    axis: u8,
    left: Option<Box<Node>>,
    right: Option<Box<Node>>,
}

pub struct KdTree<T> {
    points: Vec<Position3<T>>,
    root: Option<Box<Node>>,
}

fn coord<T: Real>(p: &Position3<T>, axis: u8) -> T {
    match axis {
        0 => p.x,
        1 => p.y,
        _ => p.z,
    }
}

impl<T: Real> KdTree<T> {
    pub fn build(points: Vec<Position3<T>>) -> Self {
        let mut indices: Vec<usize> = (0..points.len()).collect();
        let root = Self::build_node(&points, &mut indices, 0);
        Self { points, root }
    }

    fn build_node(points: &[Position3<T>], indices: &mut [usize], depth: u8) -> Option<Box<Node>> {
        if indices.is_empty() {
            return None;
        }
        let axis = depth % 3;
        indices.sort_unstable_by(|&a, &b| {
            coord(&points[a], axis)
                .partial_cmp(&coord(&points[b], axis))
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        let mid = indices.len() / 2;
        let point = indices[mid];
        let (left, rest) = indices.split_at_mut(mid);
        let right = &mut rest[1..];
        Some(Box::new(Node {
            point,
            axis,
            left: Self::build_node(points, left, depth + 1),
            right: Self::build_node(points, right, depth + 1),
        }))
    }

    /// Indices of the `k` nearest points to `points[query]`, excluding the
    /// query itself, ordered by (distance, index).
    pub fn k_nearest(&self, query: usize, k: usize) -> Vec<usize> {
        let q = self.points[query];
        let mut heap: BinaryHeap<(OrdF<T>, usize)> = BinaryHeap::with_capacity(k + 1);
        self.search(self.root.as_deref(), &q, query, k, &mut heap);
        let mut out: Vec<(OrdF<T>, usize)> = heap.into_vec();
        out.sort_unstable();
        out.into_iter().map(|(_, i)| i).collect()
    }

    fn search(
        &self,
        node: Option<&Node>,
        q: &Position3<T>,
        skip: usize,
        k: usize,
        heap: &mut BinaryHeap<(OrdF<T>, usize)>,
    ) {
        let Some(node) = node else { return };
        if node.point != skip {
            let d2 = q.distance_sq(&self.points[node.point]);
            let cand = (OrdF(d2), node.point);
            if heap.len() < k {
                heap.push(cand);
            } else if let Some(worst) = heap.peek() {
                if cand < *worst {
                    heap.pop();
                    heap.push(cand);
                }
            }
        }
        let delta = coord(q, node.axis) - coord(&self.points[node.point], node.axis);
        let (near, far) = if delta <= T::zero() {
            (node.left.as_deref(), node.right.as_deref())
        } else {
            (node.right.as_deref(), node.left.as_deref())
        };
        self.search(near, q, skip, k, heap);
        // visit the far side when it could still hold an equal-or-better hit
        let cross = delta * delta;
        let must_visit = heap.len() < k || heap.peek().is_none_or(|(d2, _)| cross <= d2.0);
        if must_visit {
            self.search(far, q, skip, k, heap);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_knn(points: &[Position3<f64>], query: usize, k: usize) -> Vec<usize> {
        let mut all: Vec<(OrdF<f64>, usize)> = points
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != query)
            .map(|(i, p)| (OrdF(points[query].distance_sq(p)), i))
            .collect();
        all.sort_unstable();
        all.truncate(k);
        all.into_iter().map(|(_, i)| i).collect()
    }

    #[test]
    fn matches_brute_force_with_ties() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        // a lattice gives plenty of exact distance ties
        let mut pts = Vec::new();
        for x in 0..5 {
            for y in 0..4 {
                for z in 0..3 {
                    pts.push(Position3::new(x as f64, y as f64, z as f64));
                }
            }
        }
        for _ in 0..20 {
            pts.push(Position3::new(
                rng.gen_range(0.0..5.0),
                rng.gen_range(0.0..4.0),
                rng.gen_range(0.0..3.0),
            ));
        }
        let tree = KdTree::build(pts.clone());
        for q in 0..pts.len() {
            assert_eq!(tree.k_nearest(q, 7), brute_knn(&pts, q, 7), "query {q}");
        }
    }

    #[test]
    fn k_larger_than_population() {
        let pts = vec![
            Position3::new(0.0, 0.0, 0.0),
            Position3::new(1.0, 0.0, 0.0),
            Position3::new(2.0, 0.0, 0.0),
        ];
        let tree = KdTree::build(pts);
        assert_eq!(tree.k_nearest(0, 10), vec![1, 2]);
    }
}
