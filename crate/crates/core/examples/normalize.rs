//! Conjugating a pair so that neither core graph nor their intersection has
//! a vertex of valence one.

use stallings::lattice::normalize_pair;
use stallings::words::{parse_words, theta_embed};
use stallings::{build_core_graph, pullback, Alphabet, CoreGraph};

fn theta(words: &[&str]) -> CoreGraph {
    let gens: Vec<_> = parse_words(words)
        .unwrap()
        .iter()
        .map(|w| theta_embed(w, &Alphabet::xy()).unwrap())
        .collect();
    build_core_graph(&gens, &Alphabet::abc()).unwrap()
}

fn main() {
    let h = theta(&["xyX", "xyyxX"]);
    let k = theta(&["xyyX"]);
    let before = pullback(&h, &k).meet;
    println!(
        "before: meet basepoint valence {}",
        before.valence(before.basepoint())
    );

    let n = normalize_pair(&h, &k).unwrap();
    println!("conjugator g = {}", n.conjugator);
    let after = pullback(&n.h, &n.k).meet;
    println!(
        "after: min valences H {} K {} meet {}",
        n.h.min_valence(),
        n.k.min_valence(),
        after.min_valence()
    );
    print!("gHg⁻¹:\n{}", n.h.serialize());
    print!("gKg⁻¹:\n{}", n.k.serialize());
}
