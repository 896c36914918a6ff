//! Strongly connected components of small directed graphs.

/// Result of an SCC decomposition.
///
/// Components are numbered in the order Tarjan's algorithm completes them,
/// which is a reverse topological order of the condensation: every edge
/// between distinct components goes from a higher to a lower number.
#[derive(Debug, Clone)]
pub struct Sccs {
    pub component: Vec<usize>,
    pub count: usize,
}

impl Sccs {
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.count];
        for (v, &c) in self.component.iter().enumerate() {
            members[c].push(v);
        }
        members
    }
}

/// Iterative Tarjan over an adjacency list.
pub fn tarjan(adjacency: &[Vec<usize>]) -> Sccs {
    const UNSEEN: usize = usize::MAX;
    let n = adjacency.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut component = vec![UNSEEN; n];
    let mut count = 0;
    let mut next_index = 0;
    // (vertex, position of the next neighbour to visit)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for start in 0..n {
        if index[start] != UNSEEN {
            continue;
        }
        call.push((start, 0));
        while let Some(&(v, pos)) = call.last() {
            if pos == 0 && index[v] == UNSEEN {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = adjacency[v].get(pos) {
                call.last_mut().expect("nonempty").1 += 1;
                if index[w] == UNSEEN {
                    call.push((w, 0));
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
                    let w = stack.pop().expect("tarjan stack");
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
    Sccs { component, count }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycles_and_a_bridge() {
        // 0 <-> 1 -> 2 <-> 3, 4 isolated
        let adj = vec![vec![1], vec![0, 2], vec![3], vec![2], vec![]];
        let s = tarjan(&adj);
        assert_eq!(s.count, 3);
        assert_eq!(s.component[0], s.component[1]);
        assert_eq!(s.component[2], s.component[3]);
        assert!(s.component[2] < s.component[0]);
    }

    #[test]
    fn edges_go_downhill() {
        let adj = vec![vec![1, 2], vec![3], vec![3], vec![1], vec![0]];
        let s = tarjan(&adj);
        for (v, out) in adj.iter().enumerate() {
            for &w in out {
                assert!(s.component[w] <= s.component[v]);
            }
        }
    }

    #[test]
    fn long_path_does_not_recurse() {
        let n = 200_000;
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|v| if v + 1 < n { vec![v + 1] } else { vec![0] })
            .collect();
        assert_eq!(tarjan(&adj).count, 1);
    }
}
