//! Dicks graphs of a pair of subgroups of `F(a, b, c)` whose core graphs
//! cover the two-vertex graph with edges `a, b, c : u → v`.
//!
//! For core graphs `Γ_H`, `Γ_K` and the intersection core `Γ_{H∩K}`:
//!
//! * `Ω_u` (`Ω_v`) has a node for each vertex of `Γ_H ⊔ Γ_K` over `u` (`v`)
//!   and an edge `p–q` for each meet vertex `(p, q)` over `u` (`v`).
//! * `Ω_x` for `x ∈ {a, b, c}` has a node for each `x`-edge of
//!   `Γ_H ⊔ Γ_K` and an edge for each meet `x`-edge.
//!
//! Taking origins and termini embeds `Ω_x` into `Ω_u` and `Ω_v`. Every node
//! and edge of `Ω = Ω_u ⊔ Ω_v` carries the set of labels incident to it,
//! which decides its membership in `Ω_ab`, `Ω_ac`, `Ω_bc` and `Ω_abc`.

mod analysis;
pub mod colored;
mod report;
mod sig;

use thiserror::Error;

use crate::graph::{CoreGraph, EdgeId, Side, VertexId};
use crate::lattice::{pullback, PullbackResult};
use crate::words::Letter;

pub use analysis::{
    abc_report, build_ccg, check_duality, cycles_confined, pushout_from_dicks, AbcReport, ComponentGraph,
    DualPair, DualityReport,
};
pub use colored::{Color, ColoredMultigraph, IncrementalCase};
pub use report::{dicks_report, DicksReport};
pub use sig::{build_sig, build_sig_oriented, SigGraph, SigVertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DicksError {
    #[error("{graph} is not bipartite over u → v; embed {{x, y}} words with theta_embed first")]
    NotBipartite { graph: &'static str },
    #[error("{graph} uses label {label}; Dicks graphs need labels a, b, c")]
    ForeignLabel { graph: &'static str, label: Letter },
    #[error(
        "{graph} has a vertex of valence {valence}; normalize the pair first so that no core graph has valence-one vertices"
    )]
    NotNormalized { graph: &'static str, valence: usize },
    #[error("the intersection is trivial; normalization needs H∩K ≠ 1")]
    TrivialIntersection,
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// A set of labels among `a, b, c`, as bits 0, 1, 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LabelSet(pub u8);

impl LabelSet {
    pub const ABC: LabelSet = LabelSet(0b111);
    pub const AB: LabelSet = LabelSet(0b011);
    pub const AC: LabelSet = LabelSet(0b101);
    pub const BC: LabelSet = LabelSet(0b110);

    pub fn single(x: usize) -> LabelSet {
        LabelSet(1 << x)
    }

    pub fn contains(self, x: usize) -> bool {
        self.0 & (1 << x) != 0
    }

    pub fn contains_all(self, other: LabelSet) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn insert(&mut self, x: usize) {
        self.0 |= 1 << x;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn name(self) -> String {
        (0..3).filter(|&x| self.contains(x)).map(|x| LETTERS[x]).collect()
    }
}

pub(crate) const LETTERS: [char; 3] = ['a', 'b', 'c'];

/// Which factor a node of a Dicks graph comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    H,
    K,
}

/// Vertices and edges of the five Dicks graphs.
///
/// `Ω` nodes are indexed `0..nh` for `Γ_H` vertices followed by `Γ_K`
/// vertices; `Ω` edges are meet vertices. `Ω_x` nodes are indexed `0..eh`
/// for `Γ_H` edges followed by `Γ_K` edges; `Ω_x` edges are meet edges.
#[derive(Debug, Clone)]
pub struct DicksBundle {
    pub h: CoreGraph,
    pub k: CoreGraph,
    pub pullback: PullbackResult,
    /// Side of each `Ω` node.
    pub node_side: Vec<Side>,
    pub node_part: Vec<Part>,
    pub node_labels: Vec<LabelSet>,
    /// Endpoints `(H node, K node)` of each `Ω` edge.
    pub omega_edges: Vec<(usize, usize)>,
    pub edge_side: Vec<Side>,
    pub edge_labels: Vec<LabelSet>,
    /// Label index of each `Ω_x` node.
    pub xnode_label: Vec<usize>,
    /// Endpoints of each `Ω_x` edge, indexed by meet edge.
    pub xedges: Vec<(usize, usize)>,
    /// `õ` and `t̃` on `Ω_x` nodes.
    pub o_embed: Vec<usize>,
    pub t_embed: Vec<usize>,
    /// `õ` and `t̃` on `Ω_x` edges (meet edges to meet vertices).
    pub o_embed_edge: Vec<usize>,
    pub t_embed_edge: Vec<usize>,
}

pub(crate) fn label_index(l: Letter) -> Option<usize> {
    l.as_char().and_then(|c| LETTERS.iter().position(|&x| x == c))
}

fn check_graph(g: &CoreGraph, name: &'static str) -> Result<Vec<Side>, DicksError> {
    if let Some(e) = g.edges().iter().find(|e| label_index(e.label).is_none()) {
        return Err(DicksError::ForeignLabel {
            graph: name,
            label: e.label,
        });
    }
    let sides = g
        .bipartite_sides()
        .ok_or(DicksError::NotBipartite { graph: name })?;
    let min = g.min_valence();
    if min < 2 {
        return Err(DicksError::NotNormalized {
            graph: name,
            valence: min,
        });
    }
    Ok(sides)
}

impl DicksBundle {
    pub fn nh(&self) -> usize {
        self.h.vertex_count()
    }

    pub fn node_count(&self) -> usize {
        self.node_side.len()
    }

    pub fn xnode_count(&self) -> usize {
        self.xnode_label.len()
    }

    /// Ω node of a vertex of `Γ_H` or `Γ_K`.
    pub fn node(&self, part: Part, v: VertexId) -> usize {
        match part {
            Part::H => v,
            Part::K => self.nh() + v,
        }
    }

    pub fn node_vertex(&self, node: usize) -> (Part, VertexId) {
        if node < self.nh() {
            (Part::H, node)
        } else {
            (Part::K, node - self.nh())
        }
    }

    pub fn xnode(&self, part: Part, e: EdgeId) -> usize {
        match part {
            Part::H => e,
            Part::K => self.h.edge_count() + e,
        }
    }

    pub fn xnode_edge(&self, xnode: usize) -> (Part, EdgeId) {
        if xnode < self.h.edge_count() {
            (Part::H, xnode)
        } else {
            (Part::K, xnode - self.h.edge_count())
        }
    }

    /// `h3` or `k0`.
    pub fn node_name(&self, node: usize) -> String {
        match self.node_vertex(node) {
            (Part::H, v) => format!("h{v}"),
            (Part::K, v) => format!("k{v}"),
        }
    }

    /// `(h1,h2)` style name of an edge node: its `Γ` origin and terminus.
    pub fn xnode_name(&self, xnode: usize) -> String {
        format!(
            "({},{})",
            self.node_name(self.o_embed[xnode]),
            self.node_name(self.t_embed[xnode])
        )
    }

    /// The `Ω_x` node of the `x`-edge at `node` (outgoing on the `u` side,
    /// incoming on the `v` side).
    pub fn xnode_at(&self, node: usize, x: usize) -> Option<usize> {
        let (part, v) = self.node_vertex(node);
        let g = match part {
            Part::H => &self.h,
            Part::K => &self.k,
        };
        g.star(v)
            .iter()
            .find(|half| label_index(half.label) == Some(x))
            .map(|half| self.xnode(part, half.edge))
    }

    pub fn is_abc_node(&self, node: usize) -> bool {
        self.node_labels[node] == LabelSet::ABC
    }

    pub fn is_abc_edge(&self, edge: usize) -> bool {
        self.edge_labels[edge] == LabelSet::ABC
    }
}

/// Builds the Dicks graphs of a normalized pair of θ-image core graphs.
pub fn build_dicks(h: &CoreGraph, k: &CoreGraph) -> Result<DicksBundle, DicksError> {
    build_dicks_with(h, k, pullback(h, k))
}

pub fn build_dicks_with(h: &CoreGraph, k: &CoreGraph, pb: PullbackResult) -> Result<DicksBundle, DicksError> {
    let sides_h = check_graph(h, "Γ_H")?;
    let sides_k = check_graph(k, "Γ_K")?;
    if pb.meet.rank() == 0 {
        return Err(DicksError::TrivialIntersection);
    }
    check_graph(&pb.meet, "Γ_{H∩K}")?;
    let nh = h.vertex_count();
    let eh = h.edge_count();
    let star_labels = |g: &CoreGraph, v: VertexId| {
        let mut s = LabelSet::default();
        for half in g.star(v) {
            s.insert(label_index(half.label).unwrap());
        }
        s
    };
    let mut node_side = sides_h.clone();
    node_side.extend(&sides_k);
    let mut node_part = vec![Part::H; nh];
    node_part.extend(vec![Part::K; k.vertex_count()]);
    let node_labels: Vec<LabelSet> = (0..nh)
        .map(|v| star_labels(h, v))
        .chain((0..k.vertex_count()).map(|v| star_labels(k, v)))
        .collect();
    let omega_edges: Vec<(usize, usize)> = pb.vertex_pairs.iter().map(|&(p, q)| (p, nh + q)).collect();
    let edge_side: Vec<Side> = pb.vertex_pairs.iter().map(|&(p, _)| sides_h[p]).collect();
    let edge_labels: Vec<LabelSet> = (0..pb.meet.vertex_count())
        .map(|z| star_labels(&pb.meet, z))
        .collect();
    let mut xnode_label = Vec::new();
    let mut o_embed = Vec::new();
    let mut t_embed = Vec::new();
    for (g, offset) in [(h, 0), (k, nh)] {
        for e in g.edges() {
            xnode_label.push(label_index(e.label).unwrap());
            o_embed.push(offset + e.origin);
            t_embed.push(offset + e.terminus);
        }
    }
    let xedges = pb.edge_pairs.iter().map(|&(e, f)| (e, eh + f)).collect();
    let o_embed_edge = pb.meet.edges().iter().map(|e| e.origin).collect();
    let t_embed_edge = pb.meet.edges().iter().map(|e| e.terminus).collect();
    let bundle = DicksBundle {
        h: h.clone(),
        k: k.clone(),
        node_side,
        node_part,
        node_labels,
        omega_edges,
        edge_side,
        edge_labels,
        xnode_label,
        xedges,
        o_embed,
        t_embed,
        o_embed_edge,
        t_embed_edge,
        pullback: pb,
    };
    check_bundle(&bundle)?;
    Ok(bundle)
}

fn check_bundle(b: &DicksBundle) -> Result<(), DicksError> {
    let fail = |m: String| Err(DicksError::Invariant(m));
    for (z, &(p, q)) in b.omega_edges.iter().enumerate() {
        if b.node_side[p] != b.node_side[q] || b.node_side[p] != b.edge_side[z] {
            return fail(format!("Ω edge {z} crosses sides"));
        }
        if !b.node_labels[p].contains_all(b.edge_labels[z])
            || !b.node_labels[q].contains_all(b.edge_labels[z])
        {
            return fail(format!("Ω edge {z} has a label missing at an endpoint"));
        }
        if b.edge_labels[z].len() < 2 {
            return fail(format!("Ω edge {z} lies in none of Ω_ab, Ω_ac, Ω_bc"));
        }
    }
    for (node, l) in b.node_labels.iter().enumerate() {
        if l.len() < 2 {
            return fail(format!(
                "Ω node {} lies in none of Ω_ab, Ω_ac, Ω_bc",
                b.node_name(node)
            ));
        }
    }
    for (e, &(x1, x2)) in b.xedges.iter().enumerate() {
        let z = b.omega_edges[b.o_embed_edge[e]];
        let w = b.omega_edges[b.t_embed_edge[e]];
        if (b.o_embed[x1], b.o_embed[x2]) != z || (b.t_embed[x1], b.t_embed[x2]) != w {
            return fail(format!("õ or t̃ is not a graph map on Ω_x edge {e}"));
        }
        if b.xnode_label[x1] != b.xnode_label[x2] {
            return fail(format!("Ω_x edge {e} joins different labels"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_core_graph;
    use crate::words::{parse_words, Alphabet};

    fn core(words: &[&str]) -> CoreGraph {
        build_core_graph(&parse_words(words).unwrap(), &Alphabet::abc()).unwrap()
    }

    #[test]
    fn rejects_bad_inputs() {
        let xy = build_core_graph(&parse_words(&["xy"]).unwrap(), &Alphabet::xy()).unwrap();
        assert!(matches!(
            build_dicks(&xy, &xy),
            Err(DicksError::ForeignLabel { .. })
        ));
        let odd = core(&["ab"]);
        assert!(matches!(
            build_dicks(&odd, &odd),
            Err(DicksError::NotBipartite { .. })
        ));
        let hanging = core(&["cAcBaC"]);
        assert!(matches!(
            build_dicks(&hanging, &hanging),
            Err(DicksError::NotNormalized { .. })
        ));
    }

    #[test]
    fn diagonal_bundle() {
        let x = core(&["cA", "cB"]);
        let b = build_dicks(&x, &x).unwrap();
        let abc_nodes = (0..b.node_count()).filter(|&n| b.is_abc_node(n)).count();
        let abc_edges = (0..b.omega_edges.len()).filter(|&z| b.is_abc_edge(z)).count();
        assert_eq!((abc_nodes, abc_edges), (4, 2));
    }
}
