//! Maximum-cardinality matching in general graphs (Edmonds' blossom
//! algorithm, O(V^3) variant) plus an exhaustive reference used by tests.

const NONE: usize = usize::MAX;

/// `mate[v] == Some(u)` iff vertices `u` and `v` are matched together.
pub fn max_matching(n: usize, edges: &[(usize, usize)]) -> Vec<Option<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        assert!(u < n && v < n && u != v, "simple graph expected");
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut mate = vec![NONE; n];
    for root in 0..n {
        if mate[root] == NONE {
            augment_from(root, n, &adj, &mut mate);
        }
    }
    mate.into_iter()
        .map(|m| if m == NONE { None } else { Some(m) })
        .collect()
}

struct Search {
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
}

impl Search {
    // Least common ancestor of a and b in the alternating tree, walking
    // through blossom bases.
    fn lca(&self, n: usize, mut a: usize, mut b: usize) -> usize {
        let mut on_path = vec![false; n];
        loop {
            a = self.base[a];
            on_path[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if on_path[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, base: usize, mut child: usize) {
        while self.base[v] != base {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }
}

fn augment_from(root: usize, n: usize, adj: &[Vec<usize>], mate: &mut [usize]) -> bool {
    let mut s = Search {
        mate: mate.to_vec(),
        parent: vec![NONE; n],
        base: (0..n).collect(),
        used: vec![false; n],
        blossom: vec![false; n],
    };
    s.used[root] = true;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(root);
    let mut finish = NONE;
    'bfs: while let Some(v) = queue.pop_front() {
        for &to in &adj[v] {
            if s.base[v] == s.base[to] || s.mate[v] == to {
                continue;
            }
            if to == root || (s.mate[to] != NONE && s.parent[s.mate[to]] != NONE) {
                // Odd cycle: contract the blossom down to its base.
                let cur_base = s.lca(n, v, to);
                s.blossom.iter_mut().for_each(|b| *b = false);
                s.mark_path(v, cur_base, to);
                s.mark_path(to, cur_base, v);
                for i in 0..n {
                    if s.blossom[s.base[i]] {
                        s.base[i] = cur_base;
                        if !s.used[i] {
                            s.used[i] = true;
                            queue.push_back(i);
                        }
                    }
                }
            } else if s.parent[to] == NONE {
                s.parent[to] = v;
                if s.mate[to] == NONE {
                    finish = to;
                    break 'bfs;
                }
                s.used[s.mate[to]] = true;
                queue.push_back(s.mate[to]);
            }
        }
    }
    if finish == NONE {
        return false;
    }
    // Flip matched/unmatched edges along the alternating path to the root.
    let mut v = finish;
    while v != NONE {
        let pv = s.parent[v];
        let ppv = s.mate[pv];
        s.mate[v] = pv;
        s.mate[pv] = v;
        v = ppv;
    }
    mate.copy_from_slice(&s.mate);
    true
}

/// Matching size (count of matched pairs).
pub fn matching_size(mate: &[Option<usize>]) -> usize {
    mate.iter().flatten().count() / 2
}

/// Exhaustive maximum matching size by DP over vertex subsets. Reference
/// implementation for verifying the blossom search on small graphs.
pub fn max_matching_exhaustive(n: usize, edges: &[(usize, usize)]) -> usize {
    assert!(n <= 20, "exhaustive matching is for small graphs only");
    let full = 1usize << n;
    let mut best = vec![0u8; full];
    for mask in (0..full).rev() {
        for &(u, v) in edges {
            if mask & (1 << u) == 0 && mask & (1 << v) == 0 {
                let next = mask | (1 << u) | (1 << v);
                best[mask] = best[mask].max(1 + best[next]);
            }
        }
    }
    best[0] as usize
}
