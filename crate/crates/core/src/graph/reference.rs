use super::Graph;

/// Star `S_d`: vertex 0 is the center, vertices `1..=d` are leaves.
pub fn make_star(d: usize) -> Graph {
    assert!(d >= 1, "a star needs at least one leaf");
    let edges: Vec<_> = (1..=d).map(|leaf| (0, leaf)).collect();
    Graph::from_edges(d + 1, &edges).expect("star edges are valid")
}

/// Truncated half-line of stars: spine vertices `0..m` form a path and each
/// spine vertex `i` owns `d` private leaves with ids `m + i*d .. m + (i+1)*d`.
pub fn make_star_halfline(d: usize, m: usize) -> Graph {
    assert!(d >= 1 && m >= 1, "need d >= 1 and m >= 1");
    let mut edges: Vec<_> = (1..m).map(|i| (i - 1, i)).collect();
    for i in 0..m {
        for j in 0..d {
            edges.push((i, m + i * d + j));
        }
    }
    Graph::from_edges(m * (d + 1), &edges).expect("half-line edges are valid")
}

pub fn complete_graph(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Graph::from_edges(n, &edges).expect("complete graph edges are valid")
}

pub fn path_graph(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_edges(n, &edges).expect("path edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stars() {
        let s1 = make_star(1);
        assert_eq!((s1.vertex_count(), s1.edge_count()), (2, 1));
        let s5 = make_star(5);
        assert_eq!((s5.vertex_count(), s5.edge_count(), s5.degree(0)), (6, 5, 5));
        for d in [1, 3, 17] {
            let s = make_star(d);
            assert!((1..=d).all(|leaf| s.degree(leaf) == 1));
        }
    }

    #[test]
    fn halflines() {
        let g = make_star_halfline(1, 1);
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        let g = make_star_halfline(2, 3);
        assert_eq!((g.vertex_count(), g.edge_count()), (9, 8));
        let g = make_star_halfline(4, 5);
        assert_eq!(g.edge_count(), 4 + 5 * 4);
        assert_eq!(g.degree(0), 4 + 1);
        assert!((1..4).all(|i| g.degree(i) == 4 + 2));
        assert_eq!(g.degree(4), 4 + 1);
        g.validate().unwrap();
    }
}
