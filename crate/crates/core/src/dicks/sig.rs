use std::collections::{BTreeMap, BTreeSet};

use super::{DicksBundle, DicksError, LabelSet, Part, LETTERS};
use crate::graph::Side;

/// A complete bipartite subgraph of `Ω` on one side: every node of
/// `h_nodes` is adjacent to every node of `k_nodes`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SigVertex {
    pub side: Side,
    pub h_nodes: Vec<usize>,
    pub k_nodes: Vec<usize>,
    /// Labels `x` such that the copy lies in the `x`-image (`A`, `B`, `C`).
    pub sets: LabelSet,
}

/// Copies of `K_{s,t}` inside `A`, `B` or `C`, with an `x`-edge from each
/// `u`-side copy in the `x`-image to its transport on the `v` side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigGraph {
    pub s: usize,
    pub t: usize,
    pub vertices: Vec<SigVertex>,
    pub edges: Vec<(usize, usize, char)>,
}

impl SigGraph {
    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(o, t, _)| o == v || t == v).count()
    }

    pub fn valences(&self) -> Vec<usize> {
        (0..self.vertices.len()).map(|v| self.valence(v)).collect()
    }

    pub fn odd_valence_count(&self) -> usize {
        self.valences().iter().filter(|&&d| d % 2 == 1).count()
    }

    /// The number of odd-valence vertices is even.
    pub fn parity_holds(&self) -> bool {
        self.odd_valence_count().is_multiple_of(2)
    }

    pub fn label_count(&self, label: char) -> usize {
        self.edges.iter().filter(|e| e.2 == label).count()
    }

    /// Histogram of valences, index = valence.
    pub fn valence_histogram(&self) -> [usize; 4] {
        let mut h = [0; 4];
        for d in self.valences() {
            h[d.min(3)] += 1;
        }
        h
    }

    /// Whether the graph is one cycle through every vertex.
    pub fn is_single_cycle(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 || self.edges.len() != n || self.valences().iter().any(|&d| d != 2) {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(o, t, _) in &self.edges {
                for (a, b) in [(o, t), (t, o)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

fn combinations(items: &[usize], r: usize, out: &mut Vec<Vec<usize>>) {
    fn go(items: &[usize], r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < r - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, r, i + 1, cur, out);
            cur.pop();
        }
    }
    go(items, r, 0, &mut Vec::new(), out);
}

fn collect_copies(
    b: &DicksBundle,
    h_size: usize,
    k_size: usize,
    copies: &mut BTreeMap<(Side, Vec<usize>, Vec<usize>), LabelSet>,
) {
    for side in [Side::U, Side::V] {
        for x in 0..3 {
            let mut nbrs: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
            for (z, &(p, q)) in b.omega_edges.iter().enumerate() {
                if b.edge_side[z] == side && b.edge_labels[z].contains(x) {
                    nbrs.entry(p).or_default().insert(q);
                }
            }
            let hs: Vec<usize> = nbrs
                .iter()
                .filter(|(_, n)| n.len() >= k_size)
                .map(|(&p, _)| p)
                .collect();
            let mut subsets = Vec::new();
            combinations(&hs, h_size, &mut subsets);
            for hset in subsets {
                let common: Vec<usize> = hset[1..]
                    .iter()
                    .fold(nbrs[&hset[0]].clone(), |acc, p| {
                        acc.intersection(&nbrs[p]).copied().collect()
                    })
                    .into_iter()
                    .collect();
                let mut ksets = Vec::new();
                combinations(&common, k_size, &mut ksets);
                for kset in ksets {
                    copies.entry((side, hset.clone(), kset)).or_default().insert(x);
                }
            }
        }
    }
}

/// `SIG(K_{s,t})`, counting copies of `K_{s,t}` whose larger or smaller part
/// may come from either factor.
pub fn build_sig(b: &DicksBundle, s: usize, t: usize) -> Result<SigGraph, DicksError> {
    let mut orientations = vec![(s, t)];
    if s != t {
        orientations.push((t, s));
    }
    sig_from(b, s, t, &orientations)
}

/// `SIG(K_{s,t})` with exactly `h_size` nodes from `Γ_H` and `k_size` from `Γ_K`.
pub fn build_sig_oriented(b: &DicksBundle, h_size: usize, k_size: usize) -> Result<SigGraph, DicksError> {
    sig_from(b, h_size, k_size, &[(h_size, k_size)])
}

fn sig_from(
    b: &DicksBundle,
    s: usize,
    t: usize,
    orientations: &[(usize, usize)],
) -> Result<SigGraph, DicksError> {
    let mut copies: BTreeMap<(Side, Vec<usize>, Vec<usize>), LabelSet> = BTreeMap::new();
    if s >= 1 && t >= 1 {
        for &(hs, ks) in orientations {
            collect_copies(b, hs, ks, &mut copies);
        }
    }
    let vertices: Vec<SigVertex> = copies
        .into_iter()
        .map(|((side, h_nodes, k_nodes), sets)| SigVertex {
            side,
            h_nodes,
            k_nodes,
            sets,
        })
        .collect();
    let index: BTreeMap<(Side, &[usize], &[usize]), usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| ((v.side, &v.h_nodes[..], &v.k_nodes[..]), i))
        .collect();
    let mut edges = Vec::new();
    for (i, v) in vertices.iter().enumerate() {
        if v.side != Side::U {
            continue;
        }
        for x in (0..3).filter(|&x| v.sets.contains(x)) {
            let transport = |nodes: &[usize]| -> Result<Vec<usize>, DicksError> {
                let mut out = nodes
                    .iter()
                    .map(|&n| {
                        b.xnode_at(n, x).map(|e| b.t_embed[e]).ok_or_else(|| {
                            DicksError::Invariant(format!("{} has no {}-edge", b.node_name(n), LETTERS[x]))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                out.sort();
                Ok(out)
            };
            let (hs, ks) = (transport(&v.h_nodes)?, transport(&v.k_nodes)?);
            debug_assert!(hs.iter().all(|&n| b.node_part[n] == Part::H));
            match index.get(&(Side::V, &hs[..], &ks[..])) {
                Some(&j) if vertices[j].sets.contains(x) => edges.push((i, j, LETTERS[x])),
                _ => {
                    return Err(DicksError::Invariant(format!(
                        "SIG: transport of a copy along {} is not a copy in the {}-image",
                        LETTERS[x], LETTERS[x]
                    )))
                }
            }
        }
    }
    let sig = SigGraph {
        s,
        t,
        vertices,
        edges,
    };
    for (i, v) in sig.vertices.iter().enumerate() {
        if sig.valence(i) != v.sets.len() {
            return Err(DicksError::Invariant(format!(
                "SIG vertex {i} has valence {} but lies in {} of A, B, C",
                sig.valence(i),
                v.sets.len()
            )));
        }
    }
    Ok(sig)
}
