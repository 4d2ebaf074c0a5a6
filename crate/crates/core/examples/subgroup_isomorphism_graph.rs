//! SIG(K_{s,t}): copies of a complete bipartite graph inside A, B, C and
//! their transports between the u and v sides.

use stallings::dicks::{build_dicks, build_sig};
use stallings::lattice::normalize_pair;
use stallings::words::{parse_words, theta_embed};
use stallings::{build_core_graph, Alphabet, CoreGraph};

fn theta(words: &[&str]) -> CoreGraph {
    let gens: Vec<_> = parse_words(words)
        .unwrap()
        .iter()
        .map(|w| theta_embed(w, &Alphabet::xy()).unwrap())
        .collect();
    build_core_graph(&gens, &Alphabet::abc()).unwrap()
}

fn main() {
    let n = normalize_pair(&theta(&["y", "xxx", "xYx", "xyyX"]), &theta(&["Xy", "YYxyy"])).unwrap();
    let b = build_dicks(&n.h, &n.k).unwrap();
    for (s, t) in [(1, 1), (1, 2), (2, 3)] {
        let sig = build_sig(&b, s, t).unwrap();
        println!(
            "SIG({s},{t}): {} vertices, {} edges, valences {:?}, odd-valence vertices {}",
            sig.vertices.len(),
            sig.edges.len(),
            sig.valence_histogram(),
            sig.odd_valence_count()
        );
        for (i, v) in sig.vertices.iter().enumerate() {
            let names = |ns: &[usize]| ns.iter().map(|&x| b.node_name(x)).collect::<Vec<_>>().join(" ");
            println!(
                "  {i}: {} | {} in {}",
                names(&v.h_nodes),
                names(&v.k_nodes),
                v.sets.name()
            );
        }
    }
}
