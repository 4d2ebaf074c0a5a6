//! The five Dicks graphs of a normalized pair with the duality pairing, the
//! component connectivity graph and the rank statements for Ω_abc.
//!
//! Run with `--` followed by H words and K words separated by `/` to use
//! another pair in F(x, y), e.g. `-- y xxx xYx xyyX / Xy YYxyy`.

use stallings::dicks::{build_dicks, dicks_report};
use stallings::lattice::normalize_pair;
use stallings::words::{parse_words, theta_embed};
use stallings::{build_core_graph, Alphabet, CoreGraph};

fn theta(words: &[String]) -> CoreGraph {
    let gens: Vec<_> = parse_words(words)
        .unwrap()
        .iter()
        .map(|w| theta_embed(w, &Alphabet::xy()).unwrap())
        .collect();
    build_core_graph(&gens, &Alphabet::abc()).unwrap()
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (hw, kw) = match args.iter().position(|a| a == "/") {
        Some(i) => (args[..i].to_vec(), args[i + 1..].to_vec()),
        None => (
            ["y", "xxx", "xYx", "xyyX"].map(String::from).to_vec(),
            ["Xy", "YYxyy"].map(String::from).to_vec(),
        ),
    };
    let n = normalize_pair(&theta(&hw), &theta(&kw)).expect("H ∩ K must be nontrivial");
    let b = build_dicks(&n.h, &n.k).unwrap();
    print!("{}", dicks_report(&b).unwrap().render());
}
