//! Hopcroft–Karp maximum bipartite matching.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

const FREE: usize = usize::MAX;

/// Maximum matching of a bipartite graph given as adjacency lists from left
/// vertices to right vertices `0..right`. Returns `mate[left] = Some(right)`.
///
/// Left vertices are first matched greedily in index order to the lowest
/// free neighbour, then augmented along shortest paths, so instances where
/// the greedy pass succeeds come out as an ascending pairing.
pub fn maximum_matching(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    let left = adj.len();
    let mut mate_l = vec![FREE; left];
    let mut mate_r = vec![FREE; right];

    for (l, nbrs) in adj.iter().enumerate() {
        if let Some(&r) = nbrs.iter().find(|&&r| mate_r[r] == FREE) {
            mate_l[l] = r;
            mate_r[r] = l;
        }
    }

    let mut dist = vec![0usize; left];
    loop {
        // BFS layers from free left vertices
        let mut queue = VecDeque::new();
        for l in 0..left {
            if mate_l[l] == FREE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let next = mate_r[r];
                if next == FREE {
                    found = true;
                } else if dist[next] == usize::MAX {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            break;
        }
        let mut it = vec![0usize; left];
        for l in 0..left {
            if mate_l[l] == FREE {
                augment(l, adj, &mut mate_l, &mut mate_r, &mut dist, &mut it);
            }
        }
    }
    mate_l.into_iter().map(|r| (r != FREE).then_some(r)).collect()
}

// Iterative DFS along the BFS layering.
fn augment(
    root: usize,
    adj: &[Vec<usize>],
    mate_l: &mut [usize],
    mate_r: &mut [usize],
    dist: &mut [usize],
    it: &mut [usize],
) -> bool {
    let mut stack = vec![root];
    while let Some(&l) = stack.last() {
        if it[l] == adj[l].len() {
            dist[l] = usize::MAX;
            stack.pop();
            continue;
        }
        let r = adj[l][it[l]];
        let next = mate_r[r];
        if next == FREE {
            // flip the path recorded on the stack
            for &sl in stack.iter().rev() {
                let sr = adj[sl][it[sl]];
                mate_l[sl] = sr;
                mate_r[sr] = sl;
            }
            return true;
        }
        if dist[next] != usize::MAX && dist[next] == dist[l] + 1 {
            stack.push(next);
        } else {
            it[l] += 1;
        }
    }
    false
}
