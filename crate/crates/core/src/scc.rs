//! Strongly connected components (iterative Tarjan) and condensation sinks.

/// Strongly connected components of the digraph given by adjacency lists.
/// Components come out in reverse topological order of the condensation;
/// vertices inside a component are sorted.
pub fn tarjan_scc(graph: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = graph.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0usize;
    // (vertex, next child position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < graph[v].len() {
                let w = graph[v][top.1];
                top.1 += 1;
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
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Components with no edge leaving them, sorted by their smallest vertex.
pub fn sink_components(graph: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let comps = tarjan_scc(graph);
    let mut comp_of = vec![0usize; graph.len()];
    for (k, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = k;
        }
    }
    let mut sinks: Vec<Vec<usize>> = comps
        .iter()
        .enumerate()
        .filter(|(k, c)| {
            c.iter()
                .all(|&v| graph[v].iter().all(|&w| comp_of[w] == *k))
        })
        .map(|(_, c)| c.clone())
        .collect();
    sinks.sort_by_key(|c| c[0]);
    sinks
}

/// Vertices reachable from `start`, including `start`, in increasing order.
pub fn reachable(graph: &[Vec<usize>], start: usize) -> Vec<usize> {
    let mut seen = vec![false; graph.len()];
    let mut todo = vec![start];
    seen[start] = true;
    while let Some(v) = todo.pop() {
        for &w in &graph[v] {
            if !seen[w] {
                seen[w] = true;
                todo.push(w);
            }
        }
    }
    (0..graph.len()).filter(|&v| seen[v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycles_and_a_bridge() {
        // 0 ⇄ 1 → 2 ⇄ 3, 4 alone pointing into 0
        let g = vec![vec![1], vec![0, 2], vec![3], vec![2], vec![0]];
        let mut comps = tarjan_scc(&g);
        comps.sort();
        assert_eq!(comps, vec![vec![0, 1], vec![2, 3], vec![4]]);
        assert_eq!(sink_components(&g), vec![vec![2, 3]]);
        assert_eq!(reachable(&g, 4), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn isolated_vertices_are_sinks() {
        let g = vec![vec![], vec![0], vec![2]];
        assert_eq!(sink_components(&g), vec![vec![0], vec![2]]);
    }

    #[test]
    fn long_path_does_not_overflow() {
        let n = 200_000;
        let g: Vec<Vec<usize>> = (0..n).map(|i| vec![(i + 1) % n]).collect();
        assert_eq!(tarjan_scc(&g).len(), 1);
    }
}
