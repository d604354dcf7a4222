//! Small numeric and graph helpers shared by the chain code.

use nalgebra::{DMatrix, DVector};

/// Sparse stochastic rows: `rows[i]` lists `(j, p_ij)` with `p_ij > 0`.
pub(crate) type SparseRows = Vec<Vec<(usize, f64)>>;

/// Solves `a x = b` by LU with partial pivoting.
pub(crate) fn solve(a: DMatrix<f64>, b: DVector<f64>) -> Option<DVector<f64>> {
    a.lu().solve(&b)
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Strongly connected components (iterative Tarjan). Components are
/// returned in reverse topological order: a component only has edges into
/// components listed before it.
pub(crate) fn strongly_connected_components(rows: &SparseRows) -> Vec<Vec<usize>> {
    let n = rows.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < rows[v].len() {
                let w = rows[v][*next].0;
                *next += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    components.push(comp);
                }
            }
        }
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scc_of_small_graph() {
        // 0 -> 1 <-> 2, 2 -> 3, 3 -> 3
        let rows: SparseRows = vec![vec![(1, 1.0)], vec![(2, 1.0)], vec![(1, 0.5), (3, 0.5)], vec![(3, 1.0)]];
        let comps = strongly_connected_components(&rows);
        assert_eq!(comps, vec![vec![3], vec![1, 2], vec![0]]);
    }

    #[test]
    fn gcd_basics() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(0, 5), 5);
        assert_eq!(gcd(7, 0), 7);
    }
}
