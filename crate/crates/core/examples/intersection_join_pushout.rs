//! Intersection, join and topological pushout of two rank-2 subgroups of
//! F(a, b, c) lying in the image of the bipartite embedding.

use stallings::words::parse_words;
use stallings::{build_core_graph, join, pullback, pushout, Alphabet};

fn main() {
    let abc = Alphabet::abc();
    let h = build_core_graph(&parse_words(&["cA", "cBcAbC"]).unwrap(), &abc).unwrap();
    let k = build_core_graph(&parse_words(&["bA", "cBcA"]).unwrap(), &abc).unwrap();
    println!("rk H = {}, rk K = {}", h.rank(), k.rank());

    let pb = pullback(&h, &k);
    println!("\nH ∩ K (rank {}):", pb.meet.rank());
    print!("{}", pb.meet.serialize());
    println!(
        "basis: {}",
        pb.meet
            .basis()
            .iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );

    let j = join(&h, &k);
    println!("\nH ∨ K (rank {}):", j.rank());
    print!("{}", j.serialize());

    let t = pushout(&h, &k, &pb);
    println!("\ntopological pushout (rank {}):", t.rank());
    print!("{}", t.serialize());
    println!("vertex classes: {:?}", t.vertex_classes());
}
