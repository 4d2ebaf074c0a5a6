//! Seeded Monte-Carlo search for rank tuples outside the known locus.
//! Pass a pair count as the first argument (default 20000).

use stallings::sampler::{search, Mode, SampleConfig};

fn main() {
    let pairs = std::env::args()
        .nth(1)
        .map_or(20_000, |s| s.parse().expect("pair count"));
    for mode in [Mode::Rose, Mode::BipartiteTheta] {
        let cfg = SampleConfig {
            seed: 11,
            pairs,
            max_vertices: 8,
            mode,
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            ..SampleConfig::default()
        };
        let report = search(&cfg).unwrap();
        println!("{}: {}", mode.name(), report.summary());
        println!("  {}", report.timing_line());
        let mut common: Vec<_> = report.tuples.iter().collect();
        common.sort_by(|a, b| b.1.cmp(a.1));
        for (p, n) in common.iter().take(5) {
            println!("  {p} x{n}");
        }
        for v in &report.violations {
            println!("  outside the locus: {} at pair {}", v.record.profile, v.index);
        }
    }
}
