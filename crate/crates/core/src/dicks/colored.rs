//! Three-edge-colored loopless multigraphs and the Σ-function.

use std::fmt;
use std::str::FromStr;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    Magenta,
    Yellow,
    Cyan,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Magenta, Color::Yellow, Color::Cyan];

    pub fn name(self) -> &'static str {
        match self {
            Color::Magenta => "magenta",
            Color::Yellow => "yellow",
            Color::Cyan => "cyan",
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Color {
    type Err = ColoredError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "magenta" => Ok(Color::Magenta),
            "yellow" => Ok(Color::Yellow),
            "cyan" => Ok(Color::Cyan),
            _ => Err(ColoredError::UnknownColor(s.to_string())),
        }
    }
}

/// The two-color subgraphs: magenta+yellow, yellow+cyan, magenta+cyan.
pub const COLOR_PAIRS: [[Color; 2]; 3] = [
    [Color::Magenta, Color::Yellow],
    [Color::Yellow, Color::Cyan],
    [Color::Magenta, Color::Cyan],
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoredError {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("second {color} edge between {p} and {q}")]
    DuplicateColor { p: usize, q: usize, color: Color },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexRange { vertex: usize, n: usize },
    #[error("unknown color {0:?}")]
    UnknownColor(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A loopless multigraph with at most one edge of each color per vertex pair.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ColoredMultigraph {
    n: usize,
    edges: Vec<(usize, usize, Color)>,
}

/// How adding one edge changes Σ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IncrementalCase {
    /// The endpoints lie in different components.
    JoinsComponents,
    /// The endpoints are joined by a path in the new edge's color.
    MonochromaticCycle,
    /// Joined in both two-color subgraphs containing the color, not monochromatically.
    BothConnected,
    /// Joined in exactly one of them.
    OneConnected,
    /// Joined in neither.
    NeitherConnected,
}

impl IncrementalCase {
    pub fn predicted_delta(self) -> i64 {
        match self {
            IncrementalCase::JoinsComponents
            | IncrementalCase::MonochromaticCycle
            | IncrementalCase::BothConnected => 0,
            IncrementalCase::OneConnected => -1,
            IncrementalCase::NeitherConnected => -2,
        }
    }
}

impl ColoredMultigraph {
    pub fn new(n: usize) -> ColoredMultigraph {
        ColoredMultigraph { n, edges: Vec::new() }
    }

    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, Color)>,
    ) -> Result<ColoredMultigraph, ColoredError> {
        let mut g = ColoredMultigraph::new(n);
        for (p, q, c) in edges {
            g.add_edge(p, q, c)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, Color)] {
        &self.edges
    }

    pub fn has_edge(&self, p: usize, q: usize, color: Color) -> bool {
        let key = (p.min(q), p.max(q));
        self.edges
            .iter()
            .any(|&(a, b, c)| (a.min(b), a.max(b)) == key && c == color)
    }

    pub fn add_edge(&mut self, p: usize, q: usize, color: Color) -> Result<(), ColoredError> {
        for v in [p, q] {
            if v >= self.n {
                return Err(ColoredError::VertexRange { vertex: v, n: self.n });
            }
        }
        if p == q {
            return Err(ColoredError::Loop(p));
        }
        if self.has_edge(p, q, color) {
            return Err(ColoredError::DuplicateColor { p, q, color });
        }
        self.edges.push((p, q, color));
        Ok(())
    }

    fn component_count(&self, colors: &[Color]) -> usize {
        let mut uf = UnionFind::<usize>::new(self.n);
        let mut count = self.n;
        for &(p, q, c) in &self.edges {
            if (colors.is_empty() || colors.contains(&c)) && uf.union(p, q) {
                count -= 1;
            }
        }
        count
    }

    fn connected_in(&self, colors: &[Color], p: usize, q: usize) -> bool {
        let mut uf = UnionFind::<usize>::new(self.n);
        for &(a, b, c) in &self.edges {
            if colors.contains(&c) {
                uf.union(a, b);
            }
        }
        uf.equiv(p, q)
    }

    /// Σ: the sum over components of the three two-color component counts
    /// minus two.
    pub fn sigma(&self) -> usize {
        let two_color: usize = COLOR_PAIRS.iter().map(|pair| self.component_count(pair)).sum();
        two_color - 2 * self.component_count(&[])
    }

    /// Whether some cycle uses at least two colors; a pair of parallel edges
    /// of different colors counts.
    pub fn has_nonmonochromatic_cycle(&self) -> bool {
        let pairs: Vec<(usize, usize)> = self.edges.iter().map(|&(p, q, _)| (p, q)).collect();
        let block = blocks(self.n, &pairs);
        let mut first_color: Vec<Option<Color>> = vec![None; self.edges.len()];
        for (i, &(_, _, c)) in self.edges.iter().enumerate() {
            match first_color[block[i]] {
                None => first_color[block[i]] = Some(c),
                Some(c0) if c0 != c => return true,
                _ => {}
            }
        }
        false
    }

    /// Classifies the effect of adding the edge `p–q` of color `color`.
    pub fn incremental_case(&self, p: usize, q: usize, color: Color) -> IncrementalCase {
        if !self.connected_in(&Color::ALL, p, q) {
            return IncrementalCase::JoinsComponents;
        }
        if self.connected_in(&[color], p, q) {
            return IncrementalCase::MonochromaticCycle;
        }
        let connected = COLOR_PAIRS
            .iter()
            .filter(|pair| pair.contains(&color))
            .filter(|pair| self.connected_in(&pair[..], p, q))
            .count();
        match connected {
            2 => IncrementalCase::BothConnected,
            1 => IncrementalCase::OneConnected,
            _ => IncrementalCase::NeitherConnected,
        }
    }

    /// Reads `edge <u> <v> <color>` lines and an optional `vertices <n>` line.
    pub fn parse(text: &str) -> Result<ColoredMultigraph, ColoredError> {
        let mut declared = 0;
        let mut edges = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| ColoredError::Parse {
                line: line_no,
                message,
            };
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let int = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| err(format!("expected a vertex number, found {s:?}")))
            };
            match f.as_slice() {
                ["vertices", n] => declared = int(n)?,
                ["edge", p, q, c] => {
                    let color = c.parse().map_err(|e: ColoredError| err(e.to_string()))?;
                    edges.push((int(p)?, int(q)?, color, line_no));
                }
                _ => return Err(err(format!("malformed record {line:?}"))),
            }
        }
        let n = edges
            .iter()
            .map(|&(p, q, _, _)| p.max(q) + 1)
            .max()
            .unwrap_or(0)
            .max(declared);
        let mut g = ColoredMultigraph::new(n);
        for (p, q, c, line) in edges {
            g.add_edge(p, q, c).map_err(|e| ColoredError::Parse {
                line,
                message: e.to_string(),
            })?;
        }
        Ok(g)
    }
}

/// Biconnected component index of each edge of an undirected multigraph.
/// Parallel edges share a block.
pub(crate) fn blocks(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(p, q)) in edges.iter().enumerate() {
        adj[p].push((q, i));
        if p != q {
            adj[q].push((p, i));
        }
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut block = vec![usize::MAX; edges.len()];
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut next_block = 0;
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, edge used to enter it, next adjacency index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, parent_edge) = (top.0, top.1);
            if top.2 < adj[v].len() {
                let (w, e) = adj[v][top.2];
                top.2 += 1;
                if e == parent_edge {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edge_stack.push(e);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, e, 0));
                } else if disc[w] < disc[v] || w == v {
                    edge_stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        while let Some(e) = edge_stack.pop() {
                            block[e] = next_block;
                            if e == parent_edge {
                                break;
                            }
                        }
                        next_block += 1;
                    }
                }
            }
        }
    }
    for b in &mut block {
        if *b == usize::MAX {
            *b = next_block;
            next_block += 1;
        }
    }
    block
}

#[cfg(test)]
mod tests {
    use super::*;
    use Color::*;

    #[test]
    fn sigma_examples() {
        assert_eq!(ColoredMultigraph::new(5).sigma(), 5);
        let mixed =
            ColoredMultigraph::from_edges(3, [(0, 1, Magenta), (1, 2, Yellow), (2, 0, Cyan)]).unwrap();
        assert_eq!(mixed.sigma(), 1);
        assert!(mixed.has_nonmonochromatic_cycle());
        let mono =
            ColoredMultigraph::from_edges(3, [(0, 1, Magenta), (1, 2, Magenta), (2, 0, Magenta)]).unwrap();
        assert_eq!(mono.sigma(), 3);
        assert!(!mono.has_nonmonochromatic_cycle());
        let path = ColoredMultigraph::from_edges(4, [(0, 1, Magenta), (1, 2, Cyan), (2, 3, Yellow)]).unwrap();
        assert!(!path.has_nonmonochromatic_cycle());
        assert_eq!(path.sigma(), 4);
    }

    #[test]
    fn parallel_edges_of_two_colors_form_a_cycle() {
        let g = ColoredMultigraph::from_edges(2, [(0, 1, Magenta), (1, 0, Cyan)]).unwrap();
        assert!(g.has_nonmonochromatic_cycle());
        assert_eq!(g.sigma(), 1);
    }

    #[test]
    fn rejects_loops_and_repeated_colors() {
        let mut g = ColoredMultigraph::new(2);
        assert_eq!(g.add_edge(1, 1, Cyan), Err(ColoredError::Loop(1)));
        g.add_edge(0, 1, Cyan).unwrap();
        assert!(g.add_edge(1, 0, Cyan).is_err());
    }

    #[test]
    fn parse_format() {
        let g = ColoredMultigraph::parse("edge 0 1 magenta\nedge 1 2 yellow\nedge 2 0 cyan\n").unwrap();
        assert_eq!(g.sigma(), 1);
        let g = ColoredMultigraph::parse("vertices 4\n").unwrap();
        assert_eq!(g.sigma(), 4);
        assert!(matches!(
            ColoredMultigraph::parse("edge 0 1 red\n"),
            Err(ColoredError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn blocks_of_two_triangles_sharing_a_vertex() {
        let b = blocks(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        assert_eq!(b[0], b[1]);
        assert_eq!(b[1], b[2]);
        assert_eq!(b[3], b[4]);
        assert_ne!(b[0], b[3]);
        let bridge = blocks(3, &[(0, 1), (1, 2)]);
        assert_ne!(bridge[0], bridge[1]);
    }
}
