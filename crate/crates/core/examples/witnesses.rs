//! Explicit generator pairs for every realizable cell of a page, built from
//! fixtures, base-row search and generator-adding operations.

use stallings::locus::{classify, construct_witness, locus_table, BaseSearchConfig, Verdict, WitnessStore};
use stallings::RankProfile;

fn main() {
    let (h, k) = (3, 4);
    let store = WitnessStore::in_memory();
    let cfg = BaseSearchConfig::default();
    for v in 2..=h + k {
        for c in 0..=(h - 1) * (k - 1) + 1 {
            let p = RankProfile::new(h, k, v, c);
            if classify(p).unwrap().verdict != Verdict::Realizable {
                continue;
            }
            let w = construct_witness(p, &store, &cfg).unwrap();
            println!(
                "{p} {:<11} H = <{}> K = <{}>",
                w.provenance.name(),
                w.h_words().join(", "),
                w.k_words().join(", ")
            );
        }
    }
    print!("\n{}", locus_table(h, k, Some(&store)).unwrap().to_ascii());
}
