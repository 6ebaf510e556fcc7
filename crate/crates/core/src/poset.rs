//! Finite posets given by Hasse diagrams, with reachability and DOT export.

use std::fmt::Write;

/// A finite DAG over named nodes whose reflexive-transitive closure is the
/// order.
#[derive(Clone, Debug)]
pub struct Hasse {
    name: &'static str,
    nodes: Vec<&'static str>,
    edges: Vec<(usize, usize)>,
    reach: Vec<Vec<bool>>,
}

impl Hasse {
    /// Panics on an unknown node name or a cycle, both of which are bugs in
    /// embedded data.
    pub fn new(name: &'static str, nodes: &[&'static str], edges: &[(&str, &str)]) -> Hasse {
        let index = |n: &str| {
            nodes
                .iter()
                .position(|m| *m == n)
                .unwrap_or_else(|| panic!("unknown node {n} in {name}"))
        };
        let edges: Vec<(usize, usize)> = edges.iter().map(|(a, b)| (index(a), index(b))).collect();
        let k = nodes.len();
        let mut reach = vec![vec![false; k]; k];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in &edges {
            reach[a][b] = true;
        }
        for m in 0..k {
            for i in 0..k {
                if reach[i][m] {
                    for j in 0..k {
                        if reach[m][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                assert!(
                    i == j || !(reach[i][j] && reach[j][i]),
                    "cycle through {} in {name}",
                    nodes[i]
                );
            }
        }
        Hasse {
            name,
            nodes: nodes.to_vec(),
            edges,
            reach,
        }
    }

    pub fn nodes(&self) -> &[&'static str] {
        &self.nodes
    }

    pub fn index(&self, node: &str) -> Option<usize> {
        self.nodes.iter().position(|n| *n == node)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&'static str, &'static str)> + '_ {
        self.edges.iter().map(|&(a, b)| (self.nodes[a], self.nodes[b]))
    }

    /// `a ≤ b`: `b` is reachable from `a`.
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.reach[a][b]
    }

    pub fn le_by_name(&self, a: &str, b: &str) -> Option<bool> {
        Some(self.le(self.index(a)?, self.index(b)?))
    }

    /// Whether every edge is a cover relation (no edge is implied by others).
    pub fn is_reduced(&self) -> bool {
        self.edges
            .iter()
            .all(|&(a, b)| !(0..self.nodes.len()).any(|m| m != a && m != b && self.reach[a][m] && self.reach[m][b]))
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        writeln!(out, "digraph \"{}\" {{", self.name).unwrap();
        writeln!(out, "  rankdir=TB;").unwrap();
        for n in &self.nodes {
            writeln!(out, "  \"{n}\";").unwrap();
        }
        for (a, b) in self.edges() {
            writeln!(out, "  \"{a}\" -> \"{b}\";").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond() {
        let h = Hasse::new(
            "diamond",
            &["top", "l", "r", "bot"],
            &[("top", "l"), ("top", "r"), ("l", "bot"), ("r", "bot")],
        );
        assert_eq!(h.le_by_name("top", "bot"), Some(true));
        assert_eq!(h.le_by_name("l", "r"), Some(false));
        assert_eq!(h.le_by_name("bot", "bot"), Some(true));
        assert!(h.is_reduced());
        let dot = h.to_dot();
        assert!(dot.contains("\"top\" -> \"l\";"));
        assert!(dot.starts_with("digraph \"diamond\""));
    }

    #[test]
    #[should_panic(expected = "cycle")]
    fn cycles_are_rejected() {
        Hasse::new("bad", &["a", "b"], &[("a", "b"), ("b", "a")]);
    }
}
