//! Verdict tables for pages (h, k): which pairs (rk(H∨K), rk(H∩K)) occur.

use stallings::locus::{a_sequence, classify, locus_table};
use stallings::RankProfile;

fn main() {
    for (h, k) in [(2, 4), (4, 4), (6, 6)] {
        print!("{}", locus_table(h, k, None).unwrap().to_ascii());
        println!("a = {:?}\n", a_sequence(h, k).unwrap());
    }
    for p in [
        RankProfile::new(6, 6, 7, 6),
        RankProfile::new(6, 6, 8, 7),
        RankProfile::new(4, 4, 3, 10),
    ] {
        let cls = classify(p).unwrap();
        println!("{p}: {cls}");
        for r in &cls.rules {
            println!("  {}: {}", r.id(), r.citation());
        }
    }
}
