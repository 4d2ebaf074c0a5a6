//! Independent oracles shared by the integration tests. None of these call
//! into the library code they are used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use stallings::dicks::{Color, ColoredMultigraph};

pub const COLORS: [Color; 3] = [Color::Magenta, Color::Yellow, Color::Cyan];

/// Connected components of `0..n` under `edges`, by depth-first search.
pub fn dfs_components(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(p, q) in edges {
        adj[p].push(q);
        adj[q].push(p);
    }
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = next;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

fn edges_in(g: &ColoredMultigraph, colors: &[Color]) -> Vec<(usize, usize)> {
    g.edges()
        .iter()
        .filter(|e| colors.contains(&e.2))
        .map(|&(p, q, _)| (p, q))
        .collect()
}

/// Σ evaluated component by component.
pub fn sigma_oracle(g: &ColoredMultigraph) -> i64 {
    let n = g.n();
    let comp = dfs_components(n, &edges_in(g, &COLORS));
    let count = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut total = 0i64;
    for c in 0..count {
        let members: Vec<usize> = (0..n).filter(|&v| comp[v] == c).collect();
        let mut s = -2i64;
        for pair in [
            [COLORS[0], COLORS[1]],
            [COLORS[1], COLORS[2]],
            [COLORS[0], COLORS[2]],
        ] {
            let sub = dfs_components(n, &edges_in(g, &pair));
            let distinct: BTreeSet<usize> = members.iter().map(|&v| sub[v]).collect();
            s += distinct.len() as i64;
        }
        total += s;
    }
    total
}

/// All cycles are monochromatic iff the incidence graph between vertices and
/// monochromatic components (with an edge) is a forest.
pub fn nonmonochromatic_oracle(g: &ColoredMultigraph) -> bool {
    let n = g.n();
    let mut nodes = n;
    let mut incidence = Vec::new();
    for color in COLORS {
        let es = edges_in(g, &[color]);
        let comp = dfs_components(n, &es);
        let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
        for &(p, _) in &es {
            ids.entry(comp[p]).or_insert_with(|| {
                nodes += 1;
                nodes - 1
            });
        }
        for (v, c) in comp.iter().enumerate() {
            if let Some(&m) = ids.get(c) {
                incidence.push((v, m));
            }
        }
    }
    let comp = dfs_components(nodes, &incidence);
    let components = comp.iter().copied().max().map_or(0, |m| m + 1);
    // A forest has exactly nodes − components edges.
    incidence.len() + components != nodes
}

/// Whether `p` and `q` are joined by edges of the given colors.
pub fn joined(g: &ColoredMultigraph, colors: &[Color], p: usize, q: usize) -> bool {
    let comp = dfs_components(g.n(), &edges_in(g, colors));
    comp[p] == comp[q]
}

/// The change of Σ predicted by counting the two-color subgraphs containing
/// the new color in which the endpoints are not yet joined.
pub fn predicted_delta(g: &ColoredMultigraph, p: usize, q: usize, color: Color) -> i64 {
    if !joined(g, &COLORS, p, q) {
        return 0;
    }
    let pairs = COLORS.iter().filter(|&&c| c != color).map(|&c| [color, c]);
    -(pairs.filter(|pair| !joined(g, pair, p, q)).count() as i64)
}

/// Every possible edge of a class-C_n graph on `n` vertices.
pub fn all_slots(n: usize) -> Vec<(usize, usize, Color)> {
    let mut out = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            for c in COLORS {
                out.push((p, q, c));
            }
        }
    }
    out
}

/// Checks one graph; returns a description of the first failure.
pub fn check_sigma(g: &ColoredMultigraph) -> Result<(), String> {
    let s = g.sigma() as i64;
    let oracle = sigma_oracle(g);
    if s != oracle {
        return Err(format!(
            "Σ = {s} but the oracle gives {oracle} for {:?}",
            g.edges()
        ));
    }
    if s > g.n() as i64 {
        return Err(format!("Σ = {s} exceeds n = {} for {:?}", g.n(), g.edges()));
    }
    let mixed = g.has_nonmonochromatic_cycle();
    if mixed != nonmonochromatic_oracle(g) {
        return Err(format!(
            "cycle test disagrees with the forest oracle for {:?}",
            g.edges()
        ));
    }
    if (s == g.n() as i64) == mixed {
        return Err(format!(
            "Σ = n is {} but a mixed cycle exists is {mixed} for {:?}",
            s == g.n() as i64,
            g.edges()
        ));
    }
    Ok(())
}

/// Checks adding the edge `(p, q, color)` to `g` against the case analysis.
pub fn check_increment(g: &ColoredMultigraph, p: usize, q: usize, color: Color) -> Result<(), String> {
    let mut h = g.clone();
    h.add_edge(p, q, color).map_err(|e| e.to_string())?;
    let delta = h.sigma() as i64 - g.sigma() as i64;
    let predicted = predicted_delta(g, p, q, color);
    let case = g.incremental_case(p, q, color);
    if !(-2..=0).contains(&delta) || delta != predicted || case.predicted_delta() != delta {
        return Err(format!(
            "adding {p}-{q} {color} to {:?}: Δ = {delta}, oracle {predicted}, case {case:?}",
            g.edges()
        ));
    }
    Ok(())
}

/// Exhaustive checks over every class-C_n graph with `n ≤ max_n`; returns the
/// number of graphs and of incremental steps checked.
pub fn exhaustive_sigma(max_n: usize) -> Result<(usize, usize), String> {
    let mut graphs = 0;
    let mut steps = 0;
    for n in 1..=max_n {
        let slots = all_slots(n);
        for mask in 0u64..(1 << slots.len()) {
            let g = ColoredMultigraph::from_edges(
                n,
                slots
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &s)| s),
            )
            .unwrap();
            check_sigma(&g)?;
            graphs += 1;
            for (i, &(p, q, c)) in slots.iter().enumerate() {
                if mask >> i & 1 == 0 {
                    check_increment(&g, p, q, c)?;
                    steps += 1;
                }
            }
        }
    }
    Ok((graphs, steps))
}

/// A small deterministic generator, so the oracles do not depend on the
/// library's sampler.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }
}

/// `count` random class-C_n graphs with `2 ≤ n ≤ max_n`, each followed by
/// one random incremental step when a free slot exists.
pub fn random_sigma(count: usize, max_n: usize, seed: u64) -> Result<usize, String> {
    let mut rng = SplitMix(seed);
    let mut steps = 0;
    for _ in 0..count {
        let n = 2 + rng.below(max_n - 1);
        let slots = all_slots(n);
        let density = 1 + rng.below(8);
        let chosen: Vec<bool> = slots.iter().map(|_| rng.below(16) < density).collect();
        let g =
            ColoredMultigraph::from_edges(n, slots.iter().zip(&chosen).filter(|(_, &c)| c).map(|(&s, _)| s))
                .unwrap();
        check_sigma(&g)?;
        let free: Vec<_> = slots
            .iter()
            .zip(&chosen)
            .filter(|(_, &c)| !c)
            .map(|(&s, _)| s)
            .collect();
        if !free.is_empty() {
            let (p, q, c) = free[rng.below(free.len())];
            check_increment(&g, p, q, c)?;
            steps += 1;
        }
    }
    Ok(steps)
}

/// Largest edge count of a connected spanning subgraph of `K_{s,t}`, and
/// whether only the complete graph attains it. Brute force over edge sets.
pub fn connected_bipartite_max(s: usize, t: usize) -> (usize, bool) {
    let n = s + t;
    let all: Vec<(usize, usize)> = (0..s).flat_map(|i| (0..t).map(move |j| (i, s + j))).collect();
    let mut best = 0;
    let mut attained = 0;
    for mask in 0u64..(1 << all.len()) {
        let es: Vec<(usize, usize)> = all
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        if n > 1 && dfs_components(n, &es).iter().any(|&c| c != 0) {
            continue;
        }
        match es.len().cmp(&best) {
            std::cmp::Ordering::Greater => {
                best = es.len();
                attained = 1;
            }
            std::cmp::Ordering::Equal => attained += 1,
            _ => {}
        }
    }
    (best, attained == 1)
}

/// Every multiset of nontrivial component shapes `(s, t)` whose spanning
/// trees have at most `budget` edges in total, with the maximal edge count
/// of the whole graph and the multisets attaining it.
pub fn forest_maximizers(budget: usize) -> (usize, Vec<Vec<(usize, usize)>>, bool) {
    let mut shapes = Vec::new();
    let mut unique_complete = true;
    for s in 1..=budget {
        for t in 1..=budget {
            if s + t - 1 <= budget {
                let (max, unique) = connected_bipartite_max(s, t);
                assert_eq!(max, s * t);
                unique_complete &= unique;
                shapes.push((s, t, max));
            }
        }
    }
    let mut best = 0;
    let mut winners: Vec<Vec<(usize, usize)>> = Vec::new();
    fn go(
        shapes: &[(usize, usize, usize)],
        from: usize,
        left: usize,
        cur: &mut Vec<(usize, usize)>,
        edges: usize,
        best: &mut usize,
        winners: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if !cur.is_empty() {
            if edges > *best {
                *best = edges;
                winners.clear();
            }
            if edges == *best {
                winners.push(cur.clone());
            }
        }
        for i in from..shapes.len() {
            let (s, t, m) = shapes[i];
            if s + t - 1 <= left {
                cur.push((s, t));
                go(shapes, i, left - (s + t - 1), cur, edges + m, best, winners);
                cur.pop();
            }
        }
    }
    go(&shapes, 0, budget, &mut Vec::new(), 0, &mut best, &mut winners);
    (best, winners, unique_complete)
}

/// The best sequence reachable from page `(2, 2)` by operations adding a
/// generator to one side, each followed by appending the top value
/// `(h−1)(k−1)+1` of the new page.
pub fn schedule_maximum(h: usize, k: usize) -> Vec<usize> {
    fn go(h: usize, k: usize, th: usize, tk: usize, seq: &mut Vec<usize>, best: &mut Option<Vec<usize>>) {
        if (h, k) == (th, tk) {
            match best {
                Some(b) => {
                    for (x, y) in b.iter_mut().zip(seq.iter()) {
                        *x = (*x).max(*y);
                    }
                }
                None => *best = Some(seq.clone()),
            }
            return;
        }
        for (nh, nk) in [(h + 1, k), (h, k + 1)] {
            if nh <= th && nk <= tk {
                seq.push((nh - 1) * (nk - 1) + 1);
                go(nh, nk, th, tk, seq, best);
                seq.pop();
            }
        }
    }
    let mut best = None;
    go(2, 2, h, k, &mut vec![0, 1, 2], &mut best);
    best.unwrap()
}
