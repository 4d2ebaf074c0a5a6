//! Intersections, joins, topological pushouts and rank profiles.

use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Write as _};

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::graph::{
    based_isomorphic, dense_labels, fold_and_trim, serialize_graph, trim, CoreGraph, EdgeId, GraphError,
    LabeledGraph, VertexId,
};
use crate::words::{Alphabet, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("precondition failed: normalization needs H∩K ≠ 1, but the intersection is trivial")]
    TrivialIntersection,
    #[error("Hanna Neumann bound violated by {profile}: H = {h:?}, K = {k:?}")]
    HannaNeumann {
        profile: RankProfile,
        h: Vec<String>,
        k: Vec<String>,
    },
}

/// The core graph of `H∩K` with its projections to `Γ_H` and `Γ_K`.
#[derive(Debug, Clone)]
pub struct PullbackResult {
    pub meet: CoreGraph,
    /// `(Π_H(z), Π_K(z))` for each meet vertex `z`.
    pub vertex_pairs: Vec<(VertexId, VertexId)>,
    /// `(Π_H(e), Π_K(e))` for each meet edge `e`.
    pub edge_pairs: Vec<(EdgeId, EdgeId)>,
}

impl PullbackResult {
    pub fn proj_h_vertex(&self, z: VertexId) -> VertexId {
        self.vertex_pairs[z].0
    }

    pub fn proj_k_vertex(&self, z: VertexId) -> VertexId {
        self.vertex_pairs[z].1
    }

    pub fn proj_h_edge(&self, e: EdgeId) -> EdgeId {
        self.edge_pairs[e].0
    }

    pub fn proj_k_edge(&self, e: EdgeId) -> EdgeId {
        self.edge_pairs[e].1
    }
}

/// Explores the basepoint component of the product graph breadth-first and
/// trims it to its core.
pub fn pullback(h: &CoreGraph, k: &CoreGraph) -> PullbackResult {
    let mut ids: HashMap<(VertexId, VertexId), VertexId> = HashMap::new();
    let mut pairs = vec![(h.basepoint(), k.basepoint())];
    ids.insert(pairs[0], 0);
    let mut g = LabeledGraph::new(1);
    let mut edge_pairs = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(z) = queue.pop_front() {
        let (p, q) = pairs[z];
        for hh in h.star(p) {
            let Some(kk) = k.follow(q, hh.syllable()) else {
                continue;
            };
            let target = (hh.other, kk.other);
            let w = *ids.entry(target).or_insert_with(|| {
                pairs.push(target);
                queue.push_back(pairs.len() - 1);
                g.add_vertex()
            });
            if hh.outgoing {
                g.add_edge(z, w, hh.label);
                edge_pairs.push((hh.edge, kk.edge));
            }
        }
    }
    let t = trim(&g, 0);
    let mut kept_pairs = vec![(0, 0); t.graph.vertex_count];
    for (old, new) in t.vertex_map.iter().enumerate() {
        if let Some(n) = new {
            kept_pairs[*n] = pairs[old];
        }
    }
    let mut kept_edges = vec![(0, 0); t.graph.edges.len()];
    for (old, new) in t.edge_map.iter().enumerate() {
        if let Some(n) = new {
            kept_edges[*n] = edge_pairs[old];
        }
    }
    let alphabet = h.alphabet().union(k.alphabet());
    let c = CoreGraph::canonical(t.graph, t.basepoint, alphabet)
        .expect("trimmed pullback component is a core graph");
    let mut vertex_pairs = vec![(0, 0); kept_pairs.len()];
    for (old, &new) in c.vertex_map.iter().enumerate() {
        vertex_pairs[new] = kept_pairs[old];
    }
    PullbackResult {
        meet: c.core,
        vertex_pairs,
        edge_pairs: c.edge_origin.iter().map(|&old| kept_edges[old]).collect(),
    }
}

/// Core graph of `H∨K`: the wedge of the two graphs at their basepoints,
/// folded.
pub fn join(h: &CoreGraph, k: &CoreGraph) -> CoreGraph {
    let (g, _) = wedge(h, k);
    fold_and_trim(&g, h.basepoint(), h.alphabet().union(k.alphabet()))
}

/// Disjoint union of the two graphs with basepoints identified; returns the
/// new id of each vertex of `k`.
fn wedge(h: &CoreGraph, k: &CoreGraph) -> (LabeledGraph, Vec<VertexId>) {
    let mut g = h.graph().clone();
    let kmap: Vec<VertexId> = (0..k.vertex_count())
        .map(|q| {
            if q == k.basepoint() {
                h.basepoint()
            } else {
                g.add_vertex()
            }
        })
        .collect();
    for e in k.edges() {
        g.add_edge(kmap[e.origin], kmap[e.terminus], e.label);
    }
    (g, kmap)
}

/// The quotient of `Γ_H ⊔ Γ_K` identifying the two projections of every
/// cell of `Γ_{H∩K}`. Generally not folded.
#[derive(Debug, Clone)]
pub struct PushoutGraph {
    pub graph: LabeledGraph,
    pub basepoint: VertexId,
    pub alphabet: Alphabet,
    pub vclass_h: Vec<VertexId>,
    pub vclass_k: Vec<VertexId>,
    pub eclass_h: Vec<EdgeId>,
    pub eclass_k: Vec<EdgeId>,
}

impl PushoutGraph {
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edges.len()
    }

    pub fn rank(&self) -> usize {
        self.graph.rank().expect("pushout is connected")
    }

    pub fn reduced_rank(&self) -> usize {
        self.rank().saturating_sub(1)
    }

    pub fn is_isomorphic(&self, other: &PushoutGraph) -> bool {
        based_isomorphic(&self.graph, self.basepoint, &other.graph, other.basepoint)
    }

    /// Members of every vertex class, `h<id>` and `k<id>`.
    pub fn vertex_classes(&self) -> Vec<Vec<String>> {
        members(self.vertex_count(), &self.vclass_h, &self.vclass_k)
    }

    pub fn edge_classes(&self) -> Vec<Vec<String>> {
        members(self.edge_count(), &self.eclass_h, &self.eclass_k)
    }

    /// The graph file followed by `class` and `eclass` records.
    pub fn serialize(&self) -> String {
        let mut out = serialize_graph(&self.graph, self.basepoint, &self.alphabet);
        for (i, m) in self.vertex_classes().iter().enumerate() {
            writeln!(out, "class {i} {}", m.join(" ")).unwrap();
        }
        for (i, m) in self.edge_classes().iter().enumerate() {
            writeln!(out, "eclass {i} {}", m.join(" ")).unwrap();
        }
        out
    }
}

fn members(count: usize, h: &[usize], k: &[usize]) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new(); count];
    for (i, &c) in h.iter().enumerate() {
        out[c].push(format!("h{i}"));
    }
    for (i, &c) in k.iter().enumerate() {
        out[c].push(format!("k{i}"));
    }
    out
}

pub fn pushout(h: &CoreGraph, k: &CoreGraph, pb: &PullbackResult) -> PushoutGraph {
    let (nh, nk) = (h.vertex_count(), k.vertex_count());
    let (eh, ek) = (h.edge_count(), k.edge_count());
    let mut vuf = UnionFind::<usize>::new(nh + nk);
    for &(p, q) in &pb.vertex_pairs {
        vuf.union(p, nh + q);
    }
    let mut euf = UnionFind::<usize>::new(eh + ek);
    for &(e, f) in &pb.edge_pairs {
        euf.union(e, eh + f);
    }
    let (vlab, vcount) = dense_labels(&vuf.into_labeling());
    let (elab, ecount) = dense_labels(&euf.into_labeling());
    let mut edges = vec![None; ecount];
    for (i, e) in h.edges().iter().enumerate() {
        edges[elab[i]] = Some((vlab[e.origin], vlab[e.terminus], e.label));
    }
    for (i, e) in k.edges().iter().enumerate() {
        edges[elab[eh + i]] = Some((vlab[nh + e.origin], vlab[nh + e.terminus], e.label));
    }
    let mut g = LabeledGraph::new(vcount);
    for (o, t, l) in edges.into_iter().map(Option::unwrap) {
        g.add_edge(o, t, l);
    }
    let r = g.canonicalize(vlab[h.basepoint()]);
    let mut new_edge = vec![0; ecount];
    for (new, &old) in r.edge_origin.iter().enumerate() {
        new_edge[old] = new;
    }
    PushoutGraph {
        basepoint: r.vertex_map[vlab[h.basepoint()]],
        alphabet: h.alphabet().union(k.alphabet()),
        vclass_h: (0..nh).map(|p| r.vertex_map[vlab[p]]).collect(),
        vclass_k: (0..nk).map(|q| r.vertex_map[vlab[nh + q]]).collect(),
        eclass_h: (0..eh).map(|e| new_edge[elab[e]]).collect(),
        eclass_k: (0..ek).map(|f| new_edge[elab[eh + f]]).collect(),
        graph: r.graph,
    }
}

/// The ranks `(h, k, v, c)` of `H`, `K`, `H∨K` and `H∩K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RankProfile {
    pub h: usize,
    pub k: usize,
    pub v: usize,
    pub c: usize,
}

pub fn rr(rank: usize) -> usize {
    rank.saturating_sub(1)
}

impl RankProfile {
    pub fn new(h: usize, k: usize, v: usize, c: usize) -> RankProfile {
        RankProfile { h, k, v, c }
    }

    /// `i = h + k − v`; negative values are clamped to zero.
    pub fn i(&self) -> usize {
        (self.h + self.k).saturating_sub(self.v)
    }

    /// Swaps `H` and `K` so that `h ≤ k`.
    pub fn oriented(self) -> RankProfile {
        if self.h <= self.k {
            self
        } else {
            RankProfile {
                h: self.k,
                k: self.h,
                ..self
            }
        }
    }

    pub fn satisfies_hanna_neumann(&self) -> bool {
        rr(self.c) <= rr(self.h) * rr(self.k)
    }

    /// A join of rank `h + k` forces a trivial intersection.
    pub fn satisfies_hopfian(&self) -> bool {
        self.v != self.h + self.k || self.c == 0
    }
}

impl fmt::Display for RankProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.h, self.k, self.v, self.c)
    }
}

/// Ranks of a pair of core graphs.
pub fn profile_of(h: &CoreGraph, k: &CoreGraph) -> RankProfile {
    let pb = pullback(h, k);
    RankProfile {
        h: h.rank(),
        k: k.rank(),
        v: join(h, k).rank(),
        c: pb.meet.rank(),
    }
}

/// End-to-end ranks of the subgroups generated by two word lists, over the
/// union of the letters they use. Fails if the Hanna Neumann bound is
/// violated, which would indicate a bug.
pub fn rank_profile(h_gens: &[Word], k_gens: &[Word]) -> Result<RankProfile, LatticeError> {
    let alphabet = Alphabet::from_letters(
        h_gens
            .iter()
            .chain(k_gens)
            .flat_map(|w| w.letters().collect::<Vec<_>>()),
    );
    let h = crate::graph::build_core_graph(h_gens, &alphabet)?;
    let k = crate::graph::build_core_graph(k_gens, &alphabet)?;
    let profile = profile_of(&h, &k);
    if !profile.satisfies_hanna_neumann() {
        return Err(LatticeError::HannaNeumann {
            profile,
            h: h_gens.iter().map(Word::to_string).collect(),
            k: k_gens.iter().map(Word::to_string).collect(),
        });
    }
    Ok(profile)
}

/// A simultaneously conjugated pair `H' = g H g⁻¹`, `K' = g K g⁻¹` whose core
/// graphs and intersection core graph have no vertex of valence one.
#[derive(Debug, Clone)]
pub struct NormalizedPair {
    pub h: CoreGraph,
    pub k: CoreGraph,
    pub conjugator: Word,
}

/// Moves all three basepoints along the shortest meet path from the meet
/// basepoint to a vertex of valence at least three, when the meet basepoint
/// has valence one.
pub fn normalize_pair(h: &CoreGraph, k: &CoreGraph) -> Result<NormalizedPair, LatticeError> {
    let pb = pullback(h, k);
    let meet = &pb.meet;
    if meet.rank() == 0 {
        return Err(LatticeError::TrivialIntersection);
    }
    if meet.valence(meet.basepoint()) >= 2 {
        return Ok(NormalizedPair {
            h: h.clone(),
            k: k.clone(),
            conjugator: Word::empty(),
        });
    }
    let mut prev = vec![None; meet.vertex_count()];
    let mut seen = vec![false; meet.vertex_count()];
    seen[meet.basepoint()] = true;
    let mut queue = VecDeque::from([meet.basepoint()]);
    let mut target = None;
    while let Some(z) = queue.pop_front() {
        if meet.valence(z) >= 3 {
            target = Some(z);
            break;
        }
        for half in meet.star(z) {
            if !seen[half.other] {
                seen[half.other] = true;
                prev[half.other] = Some((z, half.syllable()));
                queue.push_back(half.other);
            }
        }
    }
    let target = target.expect("a core graph of positive rank with a leaf basepoint has a branch vertex");
    let mut syllables = Vec::new();
    let mut at = target;
    while let Some((p, s)) = prev[at] {
        syllables.push(s);
        at = p;
    }
    syllables.reverse();
    let path = Word::reduce(syllables);
    let (p, q) = pb.vertex_pairs[target];
    let (h2, ph) = h.rebased(p);
    let (k2, pk) = k.rebased(q);
    debug_assert!(h.trace(h.basepoint(), &path) == Some(p) && h2.contains(&ph.inverse().concat(&path)));
    debug_assert!(k.trace(k.basepoint(), &path) == Some(q) && k2.contains(&pk.inverse().concat(&path)));
    Ok(NormalizedPair {
        h: h2,
        k: k2,
        conjugator: path.inverse(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_core_graph;
    use crate::words::parse_words;

    fn core(words: &[&str]) -> CoreGraph {
        build_core_graph(&parse_words(words).unwrap(), &Alphabet::abc()).unwrap()
    }

    fn xy(words: &[&str]) -> CoreGraph {
        build_core_graph(&parse_words(words).unwrap(), &Alphabet::xy()).unwrap()
    }

    #[test]
    fn example_pipeline() {
        let h = core(&["cA", "cBcAbC"]);
        let k = core(&["bA", "cBcA"]);
        let pb = pullback(&h, &k);
        assert_eq!(
            (pb.meet.vertex_count(), pb.meet.edge_count(), pb.meet.rank()),
            (6, 6, 1)
        );
        assert!(pb.meet.contains(&"cBcAbA".parse().unwrap()));
        let j = join(&h, &k);
        assert_eq!(j, core(&["cA", "cB"]));
        let t = pushout(&h, &k, &pb);
        assert_eq!((t.vertex_count(), t.edge_count(), t.rank()), (2, 4, 3));
        let p = profile_of(&h, &k);
        assert_eq!(p, RankProfile::new(2, 2, 2, 1));
    }

    #[test]
    fn diagonal_and_trivial_cases() {
        let h = xy(&["xy", "yx"]);
        let pb = pullback(&h, &h);
        assert_eq!(pb.meet, h);
        assert_eq!(join(&h, &h), h);
        let t = pushout(&h, &h, &pb);
        assert!(based_isomorphic(&t.graph, t.basepoint, h.graph(), h.basepoint()));

        let (x, y) = (xy(&["x"]), xy(&["y"]));
        let pb = pullback(&x, &y);
        assert_eq!(pb.meet.rank(), 0);
        assert_eq!(join(&x, &y).rank(), 2);
        let t = pushout(&x, &y, &pb);
        assert_eq!((t.vertex_count(), t.edge_count()), (1, 2));
        assert_eq!(
            rank_profile(&parse_words(&["x"]).unwrap(), &parse_words(&["y"]).unwrap()).unwrap(),
            RankProfile::new(1, 1, 2, 0)
        );
    }

    #[test]
    fn normalization() {
        let h = core(&["cA", "cBcAbC"]);
        let k = core(&["bA", "cBcA"]);
        let n = normalize_pair(&h, &k).unwrap();
        assert!(n.conjugator.is_empty());
        assert_eq!(n.h, h);

        let n = normalize_pair(&xy(&["xyX"]), &xy(&["xyyX"])).unwrap();
        assert_eq!(n.h, xy(&["y"]));
        assert_eq!(n.k, xy(&["yy"]));
        assert_eq!(n.conjugator.to_string(), "X");
        assert_eq!(
            "xyX"
                .parse::<Word>()
                .unwrap()
                .conjugate_by(&n.conjugator)
                .to_string(),
            "y"
        );

        assert_eq!(
            normalize_pair(&xy(&["x"]), &xy(&["y"])).unwrap_err(),
            LatticeError::TrivialIntersection
        );
    }
}
