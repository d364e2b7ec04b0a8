//! Row-compressed sparse kernels and strongly connected components.

#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl Csr {
    pub fn new(row_ptr: Vec<usize>, cols: Vec<u32>, vals: Vec<f64>) -> Self {
        assert_eq!(cols.len(), vals.len());
        assert_eq!(*row_ptr.last().expect("row_ptr starts with 0"), cols.len());
        Self { row_ptr, cols, vals }
    }

    pub fn rows(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[span.clone()]
            .iter()
            .zip(&self.vals[span])
            .map(|(&c, &v)| (c as usize, v))
    }

    /// `x P` for a row vector `x`.
    pub fn left_multiply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows()];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, p) in self.row(i) {
                out[j] += xi * p;
            }
        }
        out
    }

    /// Sub-kernel on `keep` (ascending indices), renumbered in that order.
    /// Entries leaving the subset are dropped.
    pub fn restrict(&self, keep: &[usize]) -> Csr {
        let mut map = vec![u32::MAX; self.rows()];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new as u32;
        }
        let mut row_ptr = Vec::with_capacity(keep.len() + 1);
        row_ptr.push(0);
        let (mut cols, mut vals) = (Vec::new(), Vec::new());
        for &old in keep {
            for (j, p) in self.row(old) {
                if map[j] != u32::MAX {
                    cols.push(map[j]);
                    vals.push(p);
                }
            }
            row_ptr.push(cols.len());
        }
        Csr::new(row_ptr, cols, vals)
    }
}

#[derive(Debug, Clone)]
pub struct Components {
    /// Component id of each node.
    component: Vec<u32>,
    count: usize,
    closed: Vec<bool>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn component_of(&self, node: usize) -> usize {
        self.component[node] as usize
    }

    /// Components with no positive-probability edge leaving them.
    pub fn bottom_components(&self) -> Vec<usize> {
        (0..self.count).filter(|&c| self.closed[c]).collect()
    }

    pub fn members(&self, c: usize) -> Vec<usize> {
        self.component
            .iter()
            .enumerate()
            .filter(|&(_, &k)| k as usize == c)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Iterative Tarjan over edges with positive weight.
pub fn strongly_connected_components(g: &Csr) -> Components {
    const UNSEEN: u32 = u32::MAX;
    let n = g.rows();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut component = vec![UNSEEN; n];
    let mut count = 0u32;
    let mut next_index = 0u32;
    // (node, next edge offset)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, g.row_ptr[root]));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root as u32);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut edge)) = call.last_mut() {
            if *edge < g.row_ptr[v + 1] {
                let w = g.cols[*edge] as usize;
                let p = g.vals[*edge];
                *edge += 1;
                if p <= 0.0 {
                    continue;
                }
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    call.push((w, g.row_ptr[w]));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow") as usize;
                    on_stack[w] = false;
                    component[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }

    let count = count as usize;
    let mut closed = vec![true; count];
    for v in 0..n {
        let cv = component[v];
        if g.row(v).any(|(w, p)| p > 0.0 && component[w] != cv) {
            closed[cv as usize] = false;
        }
    }
    Components {
        component,
        count,
        closed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Csr {
        let mut rows = vec![Vec::new(); n];
        for &(a, b) in edges {
            rows[a].push(b as u32);
        }
        let mut row_ptr = vec![0];
        let mut cols = Vec::new();
        for mut r in rows {
            r.sort_unstable();
            r.dedup();
            cols.extend(r);
            row_ptr.push(cols.len());
        }
        let vals = vec![1.0; cols.len()];
        Csr::new(row_ptr, cols, vals)
    }

    #[test]
    fn finds_components_and_bottoms() {
        // 0 -> {1,2} cycle -> {3} self-loop; 4 -> 3
        let g = graph(5, &[(0, 1), (1, 2), (2, 1), (2, 3), (3, 3), (4, 3)]);
        let c = strongly_connected_components(&g);
        assert_eq!(c.count(), 4);
        assert_eq!(c.component_of(1), c.component_of(2));
        let bottoms = c.bottom_components();
        assert_eq!(bottoms.len(), 1);
        assert_eq!(c.members(bottoms[0]), vec![3]);
    }

    #[test]
    fn two_closed_classes() {
        let g = graph(3, &[(0, 1), (0, 2), (1, 1), (2, 2)]);
        assert_eq!(strongly_connected_components(&g).bottom_components().len(), 2);
    }

    #[test]
    fn zero_weight_edges_are_ignored() {
        let g = Csr::new(vec![0, 2, 3], vec![0, 1, 1], vec![1.0, 0.0, 1.0]);
        let c = strongly_connected_components(&g);
        assert_eq!(c.bottom_components().len(), 2);
    }

    #[test]
    fn restrict_and_multiply() {
        let g = Csr::new(vec![0, 2, 3, 4], vec![0, 2, 2, 1], vec![0.5, 0.5, 1.0, 1.0]);
        let sub = g.restrict(&[1, 2]);
        assert_eq!(sub.rows(), 2);
        assert_eq!(sub.row(0).collect::<Vec<_>>(), vec![(1, 1.0)]);
        assert_eq!(g.left_multiply(&[1.0, 0.0, 0.0]), vec![0.5, 0.0, 0.5]);
    }

    /// Reachability closure by repeated BFS; independent of Tarjan.
    fn reach(n: usize, adj: &[Vec<usize>]) -> Vec<Vec<bool>> {
        (0..n)
            .map(|s| {
                let mut seen = vec![false; n];
                let mut todo = vec![s];
                seen[s] = true;
                while let Some(v) = todo.pop() {
                    for &w in &adj[v] {
                        if !seen[w] {
                            seen[w] = true;
                            todo.push(w);
                        }
                    }
                }
                seen
            })
            .collect()
    }

    proptest! {
        #[test]
        fn agrees_with_mutual_reachability(n in 1usize..25, raw in prop::collection::vec((0usize..25, 0usize..25), 0..80)) {
            let edges: Vec<_> = raw.into_iter().map(|(a, b)| (a % n, b % n)).collect();
            let g = graph(n, &edges);
            let c = strongly_connected_components(&g);
            let mut adj = vec![Vec::new(); n];
            for &(a, b) in &edges { adj[a].push(b); }
            let r = reach(n, &adj);
            for a in 0..n {
                for b in 0..n {
                    prop_assert_eq!(c.component_of(a) == c.component_of(b), r[a][b] && r[b][a]);
                }
            }
            for comp in c.bottom_components() {
                let m = c.members(comp);
                for &v in &m {
                    for b in 0..n {
                        if r[v][b] { prop_assert_eq!(c.component_of(b), comp); }
                    }
                }
            }
        }
    }
}
