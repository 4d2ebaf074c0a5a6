use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::analysis::{abc_report, build_ccg, check_duality, pushout_from_dicks};
use super::{DicksBundle, DicksError, LabelSet, LETTERS};
use crate::graph::Side;
use crate::lattice::{join, pushout, RankProfile};

/// The plain-text report and its machine-readable key/value section.
#[derive(Debug, Clone)]
pub struct DicksReport {
    pub text: String,
    pub values: BTreeMap<String, String>,
}

impl DicksReport {
    pub fn render(&self) -> String {
        let mut out = self.text.clone();
        out.push_str("[values]\n");
        for (k, v) in &self.values {
            writeln!(out, "{k}={v}").unwrap();
        }
        out
    }
}

fn list(items: impl IntoIterator<Item = String>) -> String {
    let v: Vec<String> = items.into_iter().collect();
    if v.is_empty() {
        "-".into()
    } else {
        v.join(" ")
    }
}

pub fn dicks_report(b: &DicksBundle) -> Result<DicksReport, DicksError> {
    let profile = RankProfile::new(
        b.h.rank(),
        b.k.rank(),
        join(&b.h, &b.k).rank(),
        b.pullback.meet.rank(),
    );
    let duality = check_duality(b)?;
    let ccg = build_ccg(b);
    let thm = abc_report(b, &profile);
    let t = pushout(&b.h, &b.k, &b.pullback);
    let t_dicks = pushout_from_dicks(b);
    let edge_name = |z: usize| {
        let (p, q) = b.omega_edges[z];
        format!("{}-{}", b.node_name(p), b.node_name(q))
    };
    let mut out = String::new();
    let mut values = BTreeMap::new();
    writeln!(
        out,
        "profile h={} k={} v={} c={}",
        profile.h, profile.k, profile.v, profile.c
    )
    .unwrap();
    for side in [Side::U, Side::V] {
        let nodes = (0..b.node_count())
            .filter(|&n| b.node_side[n] == side)
            .map(|n| format!("{}[{}]", b.node_name(n), b.node_labels[n].name()));
        let edges = (0..b.omega_edges.len())
            .filter(|&z| b.edge_side[z] == side)
            .map(|z| format!("{}[{}]", edge_name(z), b.edge_labels[z].name()));
        writeln!(out, "omega_{} nodes: {}", side.name(), list(nodes)).unwrap();
        writeln!(out, "omega_{} edges: {}", side.name(), list(edges)).unwrap();
    }
    for (x, letter) in LETTERS.iter().enumerate() {
        let nodes: Vec<usize> = (0..b.xnode_count()).filter(|&n| b.xnode_label[n] == x).collect();
        let edges: Vec<String> = b
            .xedges
            .iter()
            .filter(|&&(p, _)| b.xnode_label[p] == x)
            .map(|&(p, q)| format!("{}-{}", b.xnode_name(p), b.xnode_name(q)))
            .collect();
        values.insert(format!("omega_{}.nodes", letter), nodes.len().to_string());
        values.insert(format!("omega_{}.edges", letter), edges.len().to_string());
        writeln!(
            out,
            "omega_{} nodes: {}",
            letter,
            list(nodes.iter().map(|&n| b.xnode_name(n)))
        )
        .unwrap();
        writeln!(out, "omega_{} edges: {}", letter, list(edges)).unwrap();
    }
    for (set, name) in [
        (LabelSet::AB, "ab"),
        (LabelSet::AC, "ac"),
        (LabelSet::BC, "bc"),
        (LabelSet::ABC, "abc"),
    ] {
        let nodes: Vec<String> = (0..b.node_count())
            .filter(|&n| b.node_labels[n].contains_all(set))
            .map(|n| b.node_name(n))
            .collect();
        let edges: Vec<String> = (0..b.omega_edges.len())
            .filter(|&z| b.edge_labels[z].contains_all(set))
            .map(edge_name)
            .collect();
        values.insert(format!("omega_{name}.nodes"), nodes.len().to_string());
        values.insert(format!("omega_{name}.edges"), edges.len().to_string());
        writeln!(out, "omega_{name}: nodes {} | edges {}", list(nodes), list(edges)).unwrap();
    }
    for (x, set) in ["A", "B", "C"].iter().enumerate() {
        values.insert(
            format!("{set}.components"),
            duality.component_count(x).to_string(),
        );
        for p in &duality.pairs[x] {
            writeln!(
                out,
                "pair {set}: {{{}}} <-> {{{}}}",
                list(p.u_nodes.iter().map(|&n| b.node_name(n))),
                list(p.v_nodes.iter().map(|&n| b.node_name(n)))
            )
            .unwrap();
        }
    }
    writeln!(
        out,
        "omega_abc: {}+{} nodes, {} edges, {} components",
        thm.h_abc_nodes, thm.k_abc_nodes, thm.abc_edges, thm.abc_components
    )
    .unwrap();
    for (i, m) in ccg.members.iter().enumerate() {
        writeln!(out, "ccg vertex {i}: {}", list(m.iter().map(|&n| b.node_name(n)))).unwrap();
    }
    for &(p, q, c) in ccg.graph.edges() {
        writeln!(out, "ccg edge {p} {q} {c}").unwrap();
    }
    writeln!(out, "sigma {}", thm.sigma_ccg).unwrap();
    writeln!(
        out,
        "pushout vertices={} edges={} rank={}",
        t.vertex_count(),
        t.edge_count(),
        t.rank()
    )
    .unwrap();
    let iso = t.is_isomorphic(&t_dicks);
    let verdict = |ok: bool| if ok { "holds" } else { "FAILS" };
    writeln!(
        out,
        "theorem part1 {}",
        verdict(thm.h_abc_nodes == thm.expected_h_nodes && thm.k_abc_nodes == thm.expected_k_nodes)
    )
    .unwrap();
    writeln!(
        out,
        "theorem part2 {}",
        verdict(thm.abc_edges == thm.expected_edges)
    )
    .unwrap();
    writeln!(
        out,
        "theorem part3 {} ({} {} {}, cycles confined: {})",
        verdict(thm.abc_components >= thm.two_rr_t && thm.equality() == thm.cycles_confined),
        thm.abc_components,
        if thm.equality() { "=" } else { ">" },
        thm.two_rr_t,
        thm.cycles_confined
    )
    .unwrap();
    writeln!(out, "sigma identity {}", verdict(thm.sigma_ccg == thm.two_rr_t)).unwrap();
    writeln!(out, "pushout model {}", verdict(iso)).unwrap();
    for (k, v) in [
        ("profile.h", profile.h.to_string()),
        ("profile.k", profile.k.to_string()),
        ("profile.v", profile.v.to_string()),
        ("profile.c", profile.c.to_string()),
        (
            "omega_u.edges",
            (0..b.omega_edges.len())
                .filter(|&z| b.edge_side[z] == Side::U)
                .count()
                .to_string(),
        ),
        (
            "omega_v.edges",
            (0..b.omega_edges.len())
                .filter(|&z| b.edge_side[z] == Side::V)
                .count()
                .to_string(),
        ),
        ("omega_abc.components", thm.abc_components.to_string()),
        ("omega_abc.h_nodes", thm.h_abc_nodes.to_string()),
        ("omega_abc.k_nodes", thm.k_abc_nodes.to_string()),
        ("ccg.vertices", ccg.graph.n().to_string()),
        ("ccg.edges", ccg.graph.edges().len().to_string()),
        ("sigma", thm.sigma_ccg.to_string()),
        ("two_rr_t", thm.two_rr_t.to_string()),
        ("cycles_confined", thm.cycles_confined.to_string()),
        ("pushout_model", iso.to_string()),
        ("theorem.holds", thm.holds().to_string()),
    ] {
        values.insert(k.to_string(), v);
    }
    Ok(DicksReport { text: out, values })
}
