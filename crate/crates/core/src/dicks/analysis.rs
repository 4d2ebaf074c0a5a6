use std::collections::{BTreeMap, BTreeSet, VecDeque};

use petgraph::unionfind::UnionFind;

use super::colored::{blocks, Color, ColoredMultigraph};
use super::{DicksBundle, DicksError, LabelSet, LETTERS};
use crate::graph::{dense_labels, LabeledGraph, Side};
use crate::lattice::{pushout, rr, PushoutGraph, RankProfile};
use crate::words::Letter;

fn letter(x: usize) -> Letter {
    Letter::from_char(LETTERS[x]).unwrap()
}

/// One component `Q` of `Ω_x` with its two images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualPair {
    pub label: char,
    pub u_nodes: Vec<usize>,
    pub u_edges: Vec<usize>,
    pub v_nodes: Vec<usize>,
    pub v_edges: Vec<usize>,
    /// `t̃ ∘ õ⁻¹` on nodes, sorted by source node.
    pub node_map: Vec<(usize, usize)>,
}

/// Component pairings of `A`, `B` and `C`, one list per label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityReport {
    pub pairs: [Vec<DualPair>; 3],
}

impl DualityReport {
    /// Number of components of `A`, `B` or `C`.
    pub fn component_count(&self, x: usize) -> usize {
        2 * self.pairs[x].len()
    }
}

fn xnode_components(b: &DicksBundle, x: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut uf = UnionFind::<usize>::new(b.xnode_count());
    for &(p, q) in &b.xedges {
        if b.xnode_label[p] == x {
            uf.union(p, q);
        }
    }
    let mut comps: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for n in 0..b.xnode_count() {
        if b.xnode_label[n] == x {
            comps.entry(uf.find(n)).or_default().0.push(n);
        }
    }
    for (e, &(p, _)) in b.xedges.iter().enumerate() {
        if b.xnode_label[p] == x {
            comps.get_mut(&uf.find(p)).unwrap().1.push(e);
        }
    }
    comps.into_values().collect()
}

/// Components of the subgraph of `Ω` on one side whose nodes and edges all
/// carry label `x`, as (sorted nodes, sorted edges).
fn image_components(b: &DicksBundle, x: usize, side: Side) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    let mut uf = UnionFind::<usize>::new(b.node_count());
    let edges: Vec<usize> = (0..b.omega_edges.len())
        .filter(|&z| b.edge_side[z] == side && b.edge_labels[z].contains(x))
        .collect();
    for &z in &edges {
        let (p, q) = b.omega_edges[z];
        uf.union(p, q);
    }
    let mut comps: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for n in 0..b.node_count() {
        if b.node_side[n] == side && b.node_labels[n].contains(x) {
            comps.entry(uf.find(n)).or_default().0.push(n);
        }
    }
    for z in edges {
        comps.get_mut(&uf.find(b.omega_edges[z].0)).unwrap().1.push(z);
    }
    comps.into_values().collect()
}

/// Pairs the `u`-side and `v`-side components of `A`, `B` and `C` through
/// the components of `Ω_a`, `Ω_b`, `Ω_c`, verifying each pairing is an
/// isomorphism of bipartite graphs.
pub fn check_duality(b: &DicksBundle) -> Result<DualityReport, DicksError> {
    let fail = |m: String| DicksError::Invariant(format!("duality: {m}"));
    let mut pairs: [Vec<DualPair>; 3] = Default::default();
    for x in 0..3 {
        let mut u_expected = image_components(b, x, Side::U);
        let mut v_expected = image_components(b, x, Side::V);
        for (nodes, edges) in xnode_components(b, x) {
            let mut node_map: Vec<(usize, usize)> =
                nodes.iter().map(|&n| (b.o_embed[n], b.t_embed[n])).collect();
            node_map.sort();
            let mut u_nodes: Vec<usize> = node_map.iter().map(|m| m.0).collect();
            let mut v_nodes: Vec<usize> = node_map.iter().map(|m| m.1).collect();
            let mut u_edges: Vec<usize> = edges.iter().map(|&e| b.o_embed_edge[e]).collect();
            let mut v_edges: Vec<usize> = edges.iter().map(|&e| b.t_embed_edge[e]).collect();
            for &(p, q) in &node_map {
                if b.node_part[p] != b.node_part[q] {
                    return Err(fail(format!(
                        "{} and {} lie in different parts",
                        b.node_name(p),
                        b.node_name(q)
                    )));
                }
            }
            for &e in &edges {
                let (z, w) = (b.o_embed_edge[e], b.t_embed_edge[e]);
                let image = |(p, q): (usize, usize)| {
                    let find = |n| node_map.iter().find(|m| m.0 == n).map(|m| m.1);
                    (find(p), find(q))
                };
                let (p, q) = b.omega_edges[z];
                if image((p, q)) != (Some(b.omega_edges[w].0), Some(b.omega_edges[w].1)) {
                    return Err(fail(format!("edge {z} is not carried to edge {w}")));
                }
            }
            u_nodes.sort();
            v_nodes.sort();
            u_edges.sort();
            v_edges.sort();
            for (list, what) in [
                (&u_nodes, "u nodes"),
                (&v_nodes, "v nodes"),
                (&u_edges, "u edges"),
                (&v_edges, "v edges"),
            ] {
                if list.windows(2).any(|w| w[0] == w[1]) {
                    return Err(fail(format!("õ or t̃ is not injective on {what}")));
                }
            }
            if !u_expected.remove(&(u_nodes.clone(), u_edges.clone())) {
                return Err(fail(format!(
                    "õ image of an Ω_{} component is not a component of the u side",
                    LETTERS[x]
                )));
            }
            if !v_expected.remove(&(v_nodes.clone(), v_edges.clone())) {
                return Err(fail(format!(
                    "t̃ image of an Ω_{} component is not a component of the v side",
                    LETTERS[x]
                )));
            }
            pairs[x].push(DualPair {
                label: LETTERS[x],
                u_nodes,
                u_edges,
                v_nodes,
                v_edges,
                node_map,
            });
        }
        if !u_expected.is_empty() || !v_expected.is_empty() {
            return Err(fail(format!("unpaired components for label {}", LETTERS[x])));
        }
        pairs[x].sort_by(|p, q| p.u_nodes.cmp(&q.u_nodes));
    }
    Ok(DualityReport { pairs })
}

/// Components of `Ω` as a vertex labeling of the nodes.
fn omega_components(b: &DicksBundle) -> (Vec<usize>, usize) {
    let mut uf = UnionFind::<usize>::new(b.node_count());
    for &(p, q) in &b.omega_edges {
        uf.union(p, q);
    }
    dense_labels(&uf.into_labeling())
}

/// The topological pushout with vertices the components of `Ω` and edges the
/// components of `Ω_a ⊔ Ω_b ⊔ Ω_c`.
pub fn pushout_from_dicks(b: &DicksBundle) -> PushoutGraph {
    let (vlab, vcount) = omega_components(b);
    let mut euf = UnionFind::<usize>::new(b.xnode_count());
    for &(p, q) in &b.xedges {
        euf.union(p, q);
    }
    let (elab, ecount) = dense_labels(&euf.into_labeling());
    let mut edges = vec![None; ecount];
    for n in 0..b.xnode_count() {
        edges[elab[n]] = Some((vlab[b.o_embed[n]], vlab[b.t_embed[n]], letter(b.xnode_label[n])));
    }
    let mut g = LabeledGraph::new(vcount);
    for (o, t, l) in edges.into_iter().map(Option::unwrap) {
        g.add_edge(o, t, l);
    }
    let bp = vlab[b.h.basepoint()];
    let r = g.canonicalize(bp);
    let mut new_edge = vec![0; ecount];
    for (new, &old) in r.edge_origin.iter().enumerate() {
        new_edge[old] = new;
    }
    let nh = b.nh();
    let eh = b.h.edge_count();
    PushoutGraph {
        basepoint: r.vertex_map[bp],
        alphabet: b.h.alphabet().union(b.k.alphabet()),
        vclass_h: (0..nh).map(|p| r.vertex_map[vlab[p]]).collect(),
        vclass_k: (nh..b.node_count()).map(|q| r.vertex_map[vlab[q]]).collect(),
        eclass_h: (0..eh).map(|e| new_edge[elab[e]]).collect(),
        eclass_k: (eh..b.xnode_count()).map(|f| new_edge[elab[f]]).collect(),
        graph: r.graph,
    }
}

pub(crate) fn color_labels(c: Color) -> LabelSet {
    match c {
        Color::Magenta => LabelSet::AB,
        Color::Yellow => LabelSet::AC,
        Color::Cyan => LabelSet::BC,
    }
}

/// The component connectivity graph and the `Ω_abc` nodes behind each of
/// its vertices.
#[derive(Debug, Clone)]
pub struct ComponentGraph {
    pub graph: ColoredMultigraph,
    pub members: Vec<Vec<usize>>,
}

fn omega_adjacency(b: &DicksBundle) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); b.node_count()];
    for (z, &(p, q)) in b.omega_edges.iter().enumerate() {
        adj[p].push((q, z));
        adj[q].push((p, z));
    }
    adj
}

/// Components of `Ω_abc` joined by colored edges for each `Ω_abc`-avoidant
/// path through `Ω_ab` (magenta), `Ω_ac` (yellow) or `Ω_bc` (cyan).
pub fn build_ccg(b: &DicksBundle) -> ComponentGraph {
    let abc: Vec<usize> = (0..b.node_count()).filter(|&n| b.is_abc_node(n)).collect();
    let mut uf = UnionFind::<usize>::new(b.node_count());
    for (z, &(p, q)) in b.omega_edges.iter().enumerate() {
        if b.is_abc_edge(z) {
            uf.union(p, q);
        }
    }
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut comp_of = vec![usize::MAX; b.node_count()];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for &n in &abc {
        let next = index.len();
        let c = *index.entry(uf.find(n)).or_insert(next);
        if c == members.len() {
            members.push(Vec::new());
        }
        members[c].push(n);
        comp_of[n] = c;
    }
    let adj = omega_adjacency(b);
    let mut found: BTreeSet<(usize, usize, Color)> = BTreeSet::new();
    for color in Color::ALL {
        let pair = color_labels(color);
        for (c, start) in members.iter().enumerate() {
            let mut seen = vec![false; b.node_count()];
            let mut queue: VecDeque<usize> = start.iter().copied().collect();
            for &s in start {
                seen[s] = true;
            }
            while let Some(n) = queue.pop_front() {
                for &(m, z) in &adj[n] {
                    if b.edge_labels[z] != pair || seen[m] {
                        continue;
                    }
                    seen[m] = true;
                    if b.is_abc_node(m) {
                        if comp_of[m] != c {
                            found.insert((c.min(comp_of[m]), c.max(comp_of[m]), color));
                        }
                    } else {
                        queue.push_back(m);
                    }
                }
            }
        }
    }
    let graph = ColoredMultigraph::from_edges(members.len(), found)
        .expect("component pairs are distinct and colors deduplicated");
    ComponentGraph { graph, members }
}

/// Counts behind the rank statements for `Ω_abc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbcReport {
    pub h_abc_nodes: usize,
    pub k_abc_nodes: usize,
    pub abc_edges: usize,
    pub expected_h_nodes: usize,
    pub expected_k_nodes: usize,
    pub expected_edges: usize,
    pub abc_components: usize,
    pub two_rr_t: usize,
    pub sigma_ccg: usize,
    /// Every cycle of `Ω` lies in one of `Ω_ab`, `Ω_ac`, `Ω_bc`.
    pub cycles_confined: bool,
}

impl AbcReport {
    pub fn equality(&self) -> bool {
        self.abc_components == self.two_rr_t
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.h_abc_nodes != self.expected_h_nodes || self.k_abc_nodes != self.expected_k_nodes {
            v.push(format!(
                "part 1: Ω_abc has {}+{} nodes, expected {}+{}",
                self.h_abc_nodes, self.k_abc_nodes, self.expected_h_nodes, self.expected_k_nodes
            ));
        }
        if self.abc_edges != self.expected_edges {
            v.push(format!(
                "part 2: Ω_abc has {} edges, expected {}",
                self.abc_edges, self.expected_edges
            ));
        }
        if self.abc_components < self.two_rr_t {
            v.push(format!(
                "part 3: {} components of Ω_abc is below 2rr(T) = {}",
                self.abc_components, self.two_rr_t
            ));
        }
        if self.equality() != self.cycles_confined {
            v.push(format!(
                "part 3: equality is {} but cycle confinement is {}",
                self.equality(),
                self.cycles_confined
            ));
        }
        if self.sigma_ccg != self.two_rr_t {
            v.push(format!(
                "Σ(CCG) = {} differs from 2rr(T) = {}",
                self.sigma_ccg, self.two_rr_t
            ));
        }
        v
    }

    pub fn holds(&self) -> bool {
        self.violations().is_empty()
    }
}

/// Whether every cycle of `Ω`, with each component of `Ω_abc` collapsed to a
/// point, lies in one of `Ω_ab`, `Ω_ac`, `Ω_bc`: every block of the collapsed
/// graph uses a single label set. Two edges share a block exactly when a
/// cycle passes through both; loops are cycles of one edge and never mix.
pub fn cycles_confined(b: &DicksBundle) -> bool {
    let n = b.node_count();
    let mut uf = UnionFind::<usize>::new(n);
    for (z, &(p, q)) in b.omega_edges.iter().enumerate() {
        if b.is_abc_edge(z) {
            uf.union(p, q);
        }
    }
    let (class, count) = dense_labels(&uf.into_labeling());
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    for (z, &(p, q)) in b.omega_edges.iter().enumerate() {
        let (p, q) = (class[p], class[q]);
        if !b.is_abc_edge(z) && p != q {
            edges.push((p, q));
            labels.push(b.edge_labels[z]);
        }
    }
    let block = blocks(count, &edges);
    let mut kind: BTreeMap<usize, LabelSet> = BTreeMap::new();
    block
        .iter()
        .zip(&labels)
        .all(|(&bl, &l)| *kind.entry(bl).or_insert(l) == l)
}

pub fn abc_report(b: &DicksBundle, profile: &RankProfile) -> AbcReport {
    let count_abc = |part| {
        (0..b.node_count())
            .filter(|&n| b.node_part[n] == part && b.is_abc_node(n))
            .count()
    };
    let ccg = build_ccg(b);
    let t = pushout(&b.h, &b.k, &b.pullback);
    AbcReport {
        h_abc_nodes: count_abc(super::Part::H),
        k_abc_nodes: count_abc(super::Part::K),
        abc_edges: (0..b.omega_edges.len()).filter(|&z| b.is_abc_edge(z)).count(),
        expected_h_nodes: 2 * rr(profile.h),
        expected_k_nodes: 2 * rr(profile.k),
        expected_edges: 2 * rr(profile.c),
        abc_components: ccg.graph.n(),
        two_rr_t: 2 * t.reduced_rank(),
        sigma_ccg: ccg.graph.sigma(),
        cycles_confined: cycles_confined(b),
    }
}
