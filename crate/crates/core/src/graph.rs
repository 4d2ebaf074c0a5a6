//! Labeled graphs, Stallings folding and core graphs.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::words::{Alphabet, Letter, Syllable, Word, WordError};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("vertex {vertex} has two {direction} edges labeled {label}")]
    NotFolded {
        vertex: VertexId,
        label: Letter,
        direction: &'static str,
    },
    #[error("vertex {vertex} has valence {valence} but is not the basepoint")]
    NotCore { vertex: VertexId, valence: usize },
    #[error("edge {edge} references vertex {vertex}, graph has {count} vertices")]
    UnknownVertex {
        edge: EdgeId,
        vertex: VertexId,
        count: usize,
    },
    #[error("label {label} is not in the alphabet {{{alphabet}}}")]
    LabelOutsideAlphabet { label: Letter, alphabet: String },
    #[error("graph has no vertices")]
    Empty,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub origin: VertexId,
    pub terminus: VertexId,
    pub label: Letter,
}

/// A directed graph with labeled edges. Each stored edge is the positively
/// oriented member of its inverse pair.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabeledGraph {
    pub vertex_count: usize,
    pub edges: Vec<Edge>,
}

/// One end of an edge as seen from a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfEdge {
    pub edge: EdgeId,
    pub label: Letter,
    pub outgoing: bool,
    pub other: VertexId,
}

impl HalfEdge {
    /// The syllable read when leaving the vertex along this half-edge.
    pub fn syllable(&self) -> Syllable {
        Syllable::new(self.label, !self.outgoing)
    }
}

/// Result of renumbering a graph.
#[derive(Debug, Clone)]
pub struct Renumbering {
    pub graph: LabeledGraph,
    /// New id of each old vertex.
    pub vertex_map: Vec<VertexId>,
    /// Old id of each new edge.
    pub edge_origin: Vec<EdgeId>,
}

impl LabeledGraph {
    pub fn new(vertex_count: usize) -> LabeledGraph {
        LabeledGraph {
            vertex_count,
            edges: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub fn add_edge(&mut self, origin: VertexId, terminus: VertexId, label: Letter) -> EdgeId {
        self.edges.push(Edge {
            origin,
            terminus,
            label,
        });
        self.edges.len() - 1
    }

    pub fn check_endpoints(&self) -> Result<(), GraphError> {
        for (id, e) in self.edges.iter().enumerate() {
            for v in [e.origin, e.terminus] {
                if v >= self.vertex_count {
                    return Err(GraphError::UnknownVertex {
                        edge: id,
                        vertex: v,
                        count: self.vertex_count,
                    });
                }
            }
        }
        Ok(())
    }

    /// Valence of each vertex; a loop contributes 2.
    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.vertex_count];
        for e in &self.edges {
            val[e.origin] += 1;
            val[e.terminus] += 1;
        }
        val
    }

    /// Stars of all vertices, half-edges ordered by (label, outgoing first, edge id).
    pub fn stars(&self) -> Vec<Vec<HalfEdge>> {
        let mut stars = vec![Vec::new(); self.vertex_count];
        for (id, e) in self.edges.iter().enumerate() {
            stars[e.origin].push(HalfEdge {
                edge: id,
                label: e.label,
                outgoing: true,
                other: e.terminus,
            });
            stars[e.terminus].push(HalfEdge {
                edge: id,
                label: e.label,
                outgoing: false,
                other: e.origin,
            });
        }
        for s in &mut stars {
            s.sort_by_key(|h| (h.label, !h.outgoing, h.edge));
        }
        stars
    }

    /// Component index per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut uf = UnionFind::<usize>::new(self.vertex_count);
        for e in &self.edges {
            uf.union(e.origin, e.terminus);
        }
        dense_labels(&uf.into_labeling())
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count > 0 && self.components().1 == 1
    }

    /// `#E − #V + 1`, defined for connected graphs.
    pub fn rank(&self) -> Result<usize, GraphError> {
        if self.vertex_count == 0 {
            return Err(GraphError::Empty);
        }
        let (_, count) = self.components();
        if count != 1 {
            return Err(GraphError::Disconnected { components: count });
        }
        Ok(self.edges.len() + 1 - self.vertex_count)
    }

    /// Renumbers vertices breadth-first from `basepoint`, visiting each star
    /// ordered by label with outgoing half-edges first; unreached vertices
    /// follow in their old order. Edges are sorted by (origin, label, terminus).
    pub fn canonicalize(&self, basepoint: VertexId) -> Renumbering {
        let stars = self.stars();
        let mut vertex_map = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        let mut queue = VecDeque::new();
        let mut seeds = std::iter::once(basepoint).chain(0..self.vertex_count);
        loop {
            if queue.is_empty() {
                match seeds.find(|&s| s < self.vertex_count && vertex_map[s] == usize::MAX) {
                    Some(s) => {
                        vertex_map[s] = next;
                        next += 1;
                        queue.push_back(s);
                    }
                    None => break,
                }
            }
            let v = queue.pop_front().unwrap();
            for h in &stars[v] {
                if vertex_map[h.other] == usize::MAX {
                    vertex_map[h.other] = next;
                    next += 1;
                    queue.push_back(h.other);
                }
            }
        }
        self.renumber(&vertex_map, self.vertex_count)
    }

    /// Applies a vertex renaming and sorts edges.
    pub fn renumber(&self, vertex_map: &[VertexId], vertex_count: usize) -> Renumbering {
        let mut order: Vec<(Edge, EdgeId)> = self
            .edges
            .iter()
            .enumerate()
            .map(|(id, e)| {
                (
                    Edge {
                        origin: vertex_map[e.origin],
                        terminus: vertex_map[e.terminus],
                        label: e.label,
                    },
                    id,
                )
            })
            .collect();
        order.sort_by_key(|(e, id)| (e.origin, e.label, e.terminus, *id));
        Renumbering {
            graph: LabeledGraph {
                vertex_count,
                edges: order.iter().map(|(e, _)| *e).collect(),
            },
            vertex_map: vertex_map.to_vec(),
            edge_origin: order.iter().map(|(_, id)| *id).collect(),
        }
    }

    pub fn labels(&self) -> Alphabet {
        Alphabet::from_letters(self.edges.iter().map(|e| e.label))
    }
}

pub(crate) fn dense_labels(labeling: &[usize]) -> (Vec<usize>, usize) {
    let mut ids = HashMap::new();
    let out = labeling
        .iter()
        .map(|&r| {
            let n = ids.len();
            *ids.entry(r).or_insert(n)
        })
        .collect();
    (out, ids.len())
}

/// Output of [`fold`].
#[derive(Debug, Clone)]
pub struct Folding {
    pub graph: LabeledGraph,
    pub basepoint: VertexId,
    /// Image of each input vertex.
    pub vertex_map: Vec<VertexId>,
}

/// Identifies edges sharing a label and an origin (or a terminus) until the
/// labeling is proper.
pub fn fold(g: &LabeledGraph, basepoint: VertexId) -> Folding {
    let mut uf = UnionFind::<usize>::new(g.vertex_count);
    loop {
        let mut changed = false;
        let mut by_origin: HashMap<(usize, Letter), usize> = HashMap::new();
        let mut by_terminus: HashMap<(usize, Letter), usize> = HashMap::new();
        for e in &g.edges {
            let (o, t) = (uf.find_mut(e.origin), uf.find_mut(e.terminus));
            if let Some(&t2) = by_origin.get(&(o, e.label)) {
                changed |= uf.union(t, t2);
            } else {
                by_origin.insert((o, e.label), t);
            }
            let (o, t) = (uf.find_mut(e.origin), uf.find_mut(e.terminus));
            if let Some(&o2) = by_terminus.get(&(t, e.label)) {
                changed |= uf.union(o, o2);
            } else {
                by_terminus.insert((t, e.label), o);
            }
        }
        if !changed {
            break;
        }
    }
    let (vertex_map, count) = dense_labels(&uf.into_labeling());
    let mut edges: Vec<Edge> = g
        .edges
        .iter()
        .map(|e| Edge {
            origin: vertex_map[e.origin],
            terminus: vertex_map[e.terminus],
            label: e.label,
        })
        .collect();
    edges.sort();
    edges.dedup();
    Folding {
        graph: LabeledGraph {
            vertex_count: count,
            edges,
        },
        basepoint: vertex_map[basepoint],
        vertex_map,
    }
}

/// Output of [`trim`]: the basepoint component with hanging trees removed.
#[derive(Debug, Clone)]
pub struct Trimmed {
    pub graph: LabeledGraph,
    pub basepoint: VertexId,
    pub vertex_map: Vec<Option<VertexId>>,
    pub edge_map: Vec<Option<EdgeId>>,
}

/// Keeps the component of `basepoint` and repeatedly deletes non-basepoint
/// vertices of valence at most one.
pub fn trim(g: &LabeledGraph, basepoint: VertexId) -> Trimmed {
    let (comp, _) = g.components();
    let mut alive_v: Vec<bool> = comp.iter().map(|&c| c == comp[basepoint]).collect();
    let mut alive_e: Vec<bool> = g.edges.iter().map(|e| alive_v[e.origin]).collect();
    let stars = g.stars();
    let mut val = g.valences();
    let mut queue: Vec<VertexId> = (0..g.vertex_count)
        .filter(|&v| alive_v[v] && v != basepoint && val[v] <= 1)
        .collect();
    while let Some(v) = queue.pop() {
        if !alive_v[v] {
            continue;
        }
        alive_v[v] = false;
        for h in &stars[v] {
            if alive_e[h.edge] {
                alive_e[h.edge] = false;
                let w = h.other;
                val[w] -= 1;
                if alive_v[w] && w != basepoint && val[w] <= 1 {
                    queue.push(w);
                }
            }
        }
    }
    let mut vertex_map = vec![None; g.vertex_count];
    let mut count = 0;
    for v in 0..g.vertex_count {
        if alive_v[v] {
            vertex_map[v] = Some(count);
            count += 1;
        }
    }
    let mut graph = LabeledGraph::new(count);
    let mut edge_map = vec![None; g.edges.len()];
    for (id, e) in g.edges.iter().enumerate() {
        if alive_e[id] {
            edge_map[id] = Some(graph.add_edge(
                vertex_map[e.origin].unwrap(),
                vertex_map[e.terminus].unwrap(),
                e.label,
            ));
        }
    }
    Trimmed {
        graph,
        basepoint: vertex_map[basepoint].unwrap(),
        vertex_map,
        edge_map,
    }
}

/// Side of a vertex in the two-vertex base graph with edges `u → v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    U,
    V,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::U => "u",
            Side::V => "v",
        }
    }
}

/// A folded, connected graph with a basepoint in which only the basepoint may
/// have valence one. Vertices are numbered canonically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreGraph {
    graph: LabeledGraph,
    basepoint: VertexId,
    alphabet: Alphabet,
    stars: Vec<Vec<HalfEdge>>,
}

/// A core graph together with the renumbering that produced it.
#[derive(Debug, Clone)]
pub struct Canonical {
    pub core: CoreGraph,
    pub vertex_map: Vec<VertexId>,
    pub edge_origin: Vec<EdgeId>,
}

impl CoreGraph {
    /// Validates the core-graph invariants and renumbers canonically.
    pub fn new(
        graph: LabeledGraph,
        basepoint: VertexId,
        alphabet: Alphabet,
    ) -> Result<CoreGraph, GraphError> {
        Ok(CoreGraph::canonical(graph, basepoint, alphabet)?.core)
    }

    pub fn canonical(
        graph: LabeledGraph,
        basepoint: VertexId,
        alphabet: Alphabet,
    ) -> Result<Canonical, GraphError> {
        if graph.vertex_count == 0 {
            return Err(GraphError::Empty);
        }
        if basepoint >= graph.vertex_count {
            return Err(GraphError::UnknownVertex {
                edge: usize::MAX,
                vertex: basepoint,
                count: graph.vertex_count,
            });
        }
        graph.check_endpoints()?;
        for e in &graph.edges {
            if !alphabet.contains(e.label) {
                return Err(GraphError::LabelOutsideAlphabet {
                    label: e.label,
                    alphabet: alphabet.to_string(),
                });
            }
        }
        graph.rank()?;
        let stars = graph.stars();
        for (v, star) in stars.iter().enumerate() {
            for pair in star.windows(2) {
                if pair[0].label == pair[1].label && pair[0].outgoing == pair[1].outgoing {
                    return Err(GraphError::NotFolded {
                        vertex: v,
                        label: pair[0].label,
                        direction: if pair[0].outgoing { "outgoing" } else { "incoming" },
                    });
                }
            }
            if v != basepoint && star.len() < 2 {
                return Err(GraphError::NotCore {
                    vertex: v,
                    valence: star.len(),
                });
            }
        }
        let r = graph.canonicalize(basepoint);
        let stars = r.graph.stars();
        Ok(Canonical {
            core: CoreGraph {
                graph: r.graph,
                basepoint: 0,
                alphabet,
                stars,
            },
            vertex_map: r.vertex_map,
            edge_origin: r.edge_origin,
        })
    }

    /// The core graph of the trivial subgroup.
    pub fn trivial(alphabet: Alphabet) -> CoreGraph {
        CoreGraph::new(LabeledGraph::new(1), 0, alphabet).unwrap()
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn edges(&self) -> &[Edge] {
        &self.graph.edges
    }

    pub fn basepoint(&self) -> VertexId {
        self.basepoint
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edges.len()
    }

    pub fn star(&self, v: VertexId) -> &[HalfEdge] {
        &self.stars[v]
    }

    pub fn valence(&self, v: VertexId) -> usize {
        self.stars[v].len()
    }

    pub fn min_valence(&self) -> usize {
        self.stars.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    /// Reduced rank `max(0, rank − 1)`.
    pub fn reduced_rank(&self) -> usize {
        self.rank().saturating_sub(1)
    }

    /// The half-edge leaving `v` that reads `s`, if any.
    pub fn follow(&self, v: VertexId, s: Syllable) -> Option<&HalfEdge> {
        self.stars[v]
            .iter()
            .find(|h| h.label == s.letter && h.outgoing != s.inverse)
    }

    /// End of the path from `v` reading `w`, if the path exists.
    pub fn trace(&self, v: VertexId, w: &Word) -> Option<VertexId> {
        w.syllables()
            .iter()
            .try_fold(v, |at, &s| self.follow(at, s).map(|h| h.other))
    }

    /// Whether `w` labels a closed path at the basepoint.
    pub fn contains(&self, w: &Word) -> bool {
        self.trace(self.basepoint, w) == Some(self.basepoint)
    }

    /// Labels of breadth-first tree paths from the basepoint to every vertex.
    pub fn tree_words(&self) -> (Vec<Word>, Vec<bool>) {
        let n = self.vertex_count();
        let mut words: Vec<Option<Word>> = vec![None; n];
        let mut tree_edge = vec![false; self.edge_count()];
        words[self.basepoint] = Some(Word::empty());
        let mut queue = VecDeque::from([self.basepoint]);
        while let Some(v) = queue.pop_front() {
            for h in &self.stars[v] {
                if words[h.other].is_none() {
                    let w = words[v].as_ref().unwrap().concat(&Word::reduce([h.syllable()]));
                    words[h.other] = Some(w);
                    tree_edge[h.edge] = true;
                    queue.push_back(h.other);
                }
            }
        }
        (words.into_iter().map(Option::unwrap).collect(), tree_edge)
    }

    /// A free basis read off a breadth-first spanning tree.
    pub fn basis(&self) -> Vec<Word> {
        let (words, tree_edge) = self.tree_words();
        self.graph
            .edges
            .iter()
            .enumerate()
            .filter(|(id, _)| !tree_edge[*id])
            .map(|(_, e)| {
                words[e.origin]
                    .concat(&Word::letter(e.label))
                    .concat(&words[e.terminus].inverse())
            })
            .collect()
    }

    /// Moves the basepoint to `v` and trims. Returns the new graph and the
    /// label `p` of a path from the old basepoint to `v`; the new graph
    /// represents `p⁻¹ H p`.
    pub fn rebased(&self, v: VertexId) -> (CoreGraph, Word) {
        let (words, _) = self.tree_words();
        let t = trim(&self.graph, v);
        let core = CoreGraph::new(t.graph, t.basepoint, self.alphabet.clone())
            .expect("rebasing a core graph yields a core graph");
        (core, words[v].clone())
    }

    /// Side of every vertex if all edges run from a `u` vertex to a `v` vertex.
    pub fn bipartite_sides(&self) -> Option<Vec<Side>> {
        let mut side: Vec<Option<Side>> = vec![None; self.vertex_count()];
        for e in &self.graph.edges {
            for (v, s) in [(e.origin, Side::U), (e.terminus, Side::V)] {
                match side[v] {
                    Some(existing) if existing != s => return None,
                    _ => side[v] = Some(s),
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap_or(Side::U)).collect())
    }

    /// Which base vertex the basepoint covers, if the graph is bipartite.
    pub fn basepoint_side(&self) -> Option<Side> {
        self.bipartite_sides().map(|s| s[self.basepoint])
    }

    pub fn serialize(&self) -> String {
        serialize_graph(&self.graph, self.basepoint, &self.alphabet)
    }

    pub fn deserialize(text: &str) -> Result<CoreGraph, GraphError> {
        let parsed = deserialize_graph(text)?;
        CoreGraph::new(parsed.graph, parsed.basepoint, parsed.alphabet)
    }
}

/// Core graph of the subgroup generated by `generators`, based at the wedge
/// point.
pub fn build_core_graph(generators: &[Word], alphabet: &Alphabet) -> Result<CoreGraph, GraphError> {
    let mut g = LabeledGraph::new(1);
    for w in generators {
        let n = w.len();
        if n == 0 {
            continue;
        }
        let mut prev = 0;
        for (i, s) in w.syllables().iter().enumerate() {
            if !alphabet.contains(s.letter) {
                return Err(GraphError::LabelOutsideAlphabet {
                    label: s.letter,
                    alphabet: alphabet.to_string(),
                });
            }
            let next = if i + 1 == n { 0 } else { g.add_vertex() };
            if s.inverse {
                g.add_edge(next, prev, s.letter);
            } else {
                g.add_edge(prev, next, s.letter);
            }
            prev = next;
        }
    }
    Ok(fold_and_trim(&g, 0, alphabet.clone()))
}

/// Folds, trims and canonicalizes a graph whose basepoint component carries
/// the subgroup of interest.
pub fn fold_and_trim(g: &LabeledGraph, basepoint: VertexId, alphabet: Alphabet) -> CoreGraph {
    let f = fold(g, basepoint);
    let t = trim(&f.graph, f.basepoint);
    CoreGraph::new(t.graph, t.basepoint, alphabet).expect("folded and trimmed graph is a core graph")
}

pub fn serialize_graph(g: &LabeledGraph, basepoint: VertexId, alphabet: &Alphabet) -> String {
    let mut out = String::new();
    writeln!(out, "alphabet: {alphabet}").unwrap();
    writeln!(out, "basepoint {basepoint}").unwrap();
    let mut edges = g.edges.clone();
    edges.sort_by_key(|e| (e.origin, e.label, e.terminus));
    for e in edges {
        writeln!(out, "edge {} {} {}", e.origin, e.terminus, e.label).unwrap();
    }
    out
}

/// A parsed graph file.
#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: LabeledGraph,
    pub basepoint: VertexId,
    pub alphabet: Alphabet,
    /// Original integer id of each dense vertex.
    pub original_ids: Vec<i64>,
    /// Lines not understood by the graph parser, with their line numbers.
    pub extra: Vec<(usize, String)>,
}

/// Reads the graph file format. Vertex ids are renumbered densely in
/// increasing order. `rank` lines are ignored; other unknown records are
/// returned in [`ParsedGraph::extra`] if they start with `class` or
/// `eclass`, and rejected otherwise.
pub fn deserialize_graph(text: &str) -> Result<ParsedGraph, GraphError> {
    let mut alphabet = None;
    let mut basepoint = None;
    let mut raw_edges: Vec<(i64, i64, Letter)> = Vec::new();
    let mut extra = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| GraphError::Parse {
            line: line_no,
            message,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("alphabet:") {
            alphabet = Some(Alphabet::parse(rest).map_err(|e| err(e.to_string()))?);
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let int = |s: &str| {
            s.parse::<i64>()
                .map_err(|_| err(format!("expected an integer, found {s:?}")))
        };
        match fields[0] {
            "basepoint" if fields.len() == 2 => {
                if basepoint.is_some() {
                    return Err(err("second basepoint record".into()));
                }
                basepoint = Some(int(fields[1])?);
            }
            "edge" if fields.len() == 4 => {
                let label: Letter = fields[3].parse().map_err(|e: WordError| err(e.to_string()))?;
                raw_edges.push((int(fields[1])?, int(fields[2])?, label));
            }
            "rank" if fields.len() == 2 => {
                int(fields[1])?;
            }
            "class" | "eclass" => extra.push((line_no, trimmed.to_string())),
            _ => return Err(err(format!("malformed record {trimmed:?}"))),
        }
    }
    let basepoint = basepoint.ok_or(GraphError::Parse {
        line: text.lines().count().max(1),
        message: "missing basepoint record".into(),
    })?;
    let mut ids: BTreeMap<i64, usize> = BTreeMap::new();
    ids.insert(basepoint, 0);
    for &(o, t, _) in &raw_edges {
        ids.insert(o, 0);
        ids.insert(t, 0);
    }
    let original_ids: Vec<i64> = ids.keys().copied().collect();
    for (i, v) in ids.values_mut().enumerate() {
        *v = i;
    }
    let mut graph = LabeledGraph::new(ids.len());
    for (o, t, l) in &raw_edges {
        graph.add_edge(ids[o], ids[t], *l);
    }
    let inferred = graph.labels();
    let alphabet = match alphabet {
        Some(a) => {
            if let Some(e) = graph.edges.iter().find(|e| !a.contains(e.label)) {
                return Err(GraphError::LabelOutsideAlphabet {
                    label: e.label,
                    alphabet: a.to_string(),
                });
            }
            a
        }
        None => inferred,
    };
    Ok(ParsedGraph {
        basepoint: ids[&basepoint],
        graph,
        alphabet,
        original_ids,
        extra,
    })
}

/// Whether two based labeled graphs, not necessarily folded, are isomorphic
/// by a label- and direction-preserving bijection fixing basepoints.
pub fn based_isomorphic(g1: &LabeledGraph, bp1: VertexId, g2: &LabeledGraph, bp2: VertexId) -> bool {
    if g1.vertex_count != g2.vertex_count || g1.edges.len() != g2.edges.len() {
        return false;
    }
    let profile = |g: &LabeledGraph| {
        let mut p: Vec<Vec<(Letter, bool)>> = vec![Vec::new(); g.vertex_count];
        for e in &g.edges {
            p[e.origin].push((e.label, true));
            p[e.terminus].push((e.label, false));
        }
        for s in &mut p {
            s.sort();
        }
        p
    };
    let (p1, p2) = (profile(g1), profile(g2));
    let mults = |g: &LabeledGraph| {
        let mut m: HashMap<(VertexId, VertexId, Letter), usize> = HashMap::new();
        for e in &g.edges {
            *m.entry((e.origin, e.terminus, e.label)).or_default() += 1;
        }
        m
    };
    let (m1, m2) = (mults(g1), mults(g2));
    let mut s1 = p1.clone();
    let mut s2 = p2.clone();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return false;
    }
    // Order g1's vertices so each one after the first in its component is
    // adjacent to an earlier vertex.
    let order = g1.canonicalize(bp1).vertex_map;
    let mut seq = vec![0; g1.vertex_count];
    for (old, &new) in order.iter().enumerate() {
        seq[new] = old;
    }
    let adj1 = g1.stars();
    let mut f = vec![usize::MAX; g1.vertex_count];
    let mut used = vec![false; g2.vertex_count];

    fn consistent(
        v: usize,
        w: usize,
        f: &[usize],
        adj1: &[Vec<HalfEdge>],
        m1: &HashMap<(usize, usize, Letter), usize>,
        m2: &HashMap<(usize, usize, Letter), usize>,
    ) -> bool {
        for h in &adj1[v] {
            let x = h.other;
            let fx = if x == v { w } else { f[x] };
            if fx == usize::MAX {
                continue;
            }
            let (a, b, fa, fb) = if h.outgoing { (v, x, w, fx) } else { (x, v, fx, w) };
            if m1.get(&(a, b, h.label)) != m2.get(&(fa, fb, h.label)) {
                return false;
            }
        }
        true
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        depth: usize,
        seq: &[usize],
        f: &mut Vec<usize>,
        used: &mut Vec<bool>,
        p1: &[Vec<(Letter, bool)>],
        p2: &[Vec<(Letter, bool)>],
        adj1: &[Vec<HalfEdge>],
        m1: &HashMap<(usize, usize, Letter), usize>,
        m2: &HashMap<(usize, usize, Letter), usize>,
        forced: Option<usize>,
    ) -> bool {
        if depth == seq.len() {
            return true;
        }
        let v = seq[depth];
        let candidates: Vec<usize> = match forced {
            Some(w) => vec![w],
            None => (0..p2.len()).collect(),
        };
        for w in candidates {
            if used[w] || p1[v] != p2[w] || !consistent(v, w, f, adj1, m1, m2) {
                continue;
            }
            f[v] = w;
            used[w] = true;
            if extend(depth + 1, seq, f, used, p1, p2, adj1, m1, m2, None) {
                return true;
            }
            f[v] = usize::MAX;
            used[w] = false;
        }
        false
    }

    extend(0, &seq, &mut f, &mut used, &p1, &p2, &adj1, &m1, &m2, Some(bp2))
}
