//! Seeded random core graphs and the Monte-Carlo search for rank tuples
//! outside the known realizable locus.
//!
//! Each letter of a random graph is a uniformly random partial injection of
//! the vertex set; a draw is rejected unless it is connected and every vertex
//! except the basepoint `0` has valence at least two. This is not the exact
//! uniform distribution on core graphs, only an approximation of it.
//!
//! Pair `i` of a search draws from its own ChaCha stream `(seed, i)`, so a
//! report does not depend on the number of worker threads.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::dicks::{abc_report, build_dicks, check_duality, pushout_from_dicks};
use crate::graph::{fold_and_trim, CoreGraph, LabeledGraph};
use crate::lattice::{join, normalize_pair, pullback, pushout, rank_profile, RankProfile};
use crate::locus::{classify, Provenance, Verdict, WitnessRecord};
use crate::words::{Alphabet, Letter};

pub const DEFAULT_MAX_ATTEMPTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error(
        "no core graph on {n} vertices over {{{alphabet}}} after {attempts} attempts; try more vertices or letters"
    )]
    RejectionBudget {
        n: usize,
        alphabet: String,
        attempts: usize,
    },
    #[error("invalid sampler configuration: {0}")]
    Config(String),
}

/// A uniformly random partial injection of `0..n`, as `(i, σ(i))` pairs.
pub fn random_partial_injection<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<(usize, usize)> {
    // There are C(n, m)² m! partial injections with m pairs.
    let mut weights = Vec::with_capacity(n + 1);
    let mut binom = 1.0f64;
    let mut fact = 1.0f64;
    for m in 0..=n {
        if m > 0 {
            binom = binom * (n + 1 - m) as f64 / m as f64;
            fact *= m as f64;
        }
        weights.push(binom * binom * fact);
    }
    let m = WeightedIndex::new(&weights)
        .expect("positive weights")
        .sample(rng);
    let mut domain = rand::seq::index::sample(rng, n, m).into_vec();
    domain.sort_unstable();
    let range = rand::seq::index::sample(rng, n, m).into_vec();
    domain.into_iter().zip(range).collect()
}

fn is_accepted(g: &LabeledGraph) -> bool {
    let valences = g.valences();
    if valences.iter().skip(1).any(|&d| d < 2) || !g.is_connected() {
        return false;
    }
    g.edges.len() >= g.vertex_count
}

/// A random core graph on exactly `n` vertices, based at a vertex of the
/// rejection-sampled graph; see the module documentation for the model.
pub fn random_core_graph<R: Rng + ?Sized>(
    n: usize,
    alphabet: &Alphabet,
    rng: &mut R,
) -> Result<CoreGraph, SampleError> {
    random_core_graph_with(n, alphabet, rng, DEFAULT_MAX_ATTEMPTS)
}

pub fn random_core_graph_with<R: Rng + ?Sized>(
    n: usize,
    alphabet: &Alphabet,
    rng: &mut R,
    max_attempts: usize,
) -> Result<CoreGraph, SampleError> {
    if n == 0 || alphabet.is_empty() {
        return Err(SampleError::Config("need n ≥ 1 and a nonempty alphabet".into()));
    }
    for _ in 0..max_attempts {
        let mut g = LabeledGraph::new(n);
        for &l in alphabet.letters() {
            for (p, q) in random_partial_injection(n, rng) {
                g.add_edge(p, q, l);
            }
        }
        if is_accepted(&g) {
            return Ok(CoreGraph::new(g, 0, alphabet.clone()).expect("accepted draws are core graphs"));
        }
    }
    Err(SampleError::RejectionBudget {
        n,
        alphabet: alphabet.to_string(),
        attempts: max_attempts,
    })
}

/// The core graph of the image of `H ≤ F(x, y)` under `x ↦ ca⁻¹`, `y ↦ cb⁻¹`,
/// obtained by subdividing every edge of `Γ_H` and folding.
pub fn theta_graph(g: &CoreGraph) -> CoreGraph {
    let [first, second] = match g.alphabet().letters() {
        [f, s] => [*f, *s],
        _ => panic!("theta_graph needs a 2-letter alphabet, got {{{}}}", g.alphabet()),
    };
    let [a, b, c] = ['a', 'b', 'c'].map(|ch| Letter::from_char(ch).unwrap());
    let mut out = LabeledGraph::new(g.vertex_count());
    for e in g.edges() {
        let mid = out.add_vertex();
        out.add_edge(e.origin, mid, c);
        let side = if e.label == first {
            a
        } else {
            assert_eq!(e.label, second);
            b
        };
        out.add_edge(e.terminus, mid, side);
    }
    fold_and_trim(&out, g.basepoint(), Alphabet::abc())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Graphs over `alphabet_size` letters.
    Rose,
    /// Graphs over `{x, y}` carried into `F(a, b, c)` by the θ-embedding.
    BipartiteTheta,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Rose => "rose",
            Mode::BipartiteTheta => "bipartite-theta",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "rose" => Some(Mode::Rose),
            "bipartite-theta" | "theta" | "bipartite" => Some(Mode::BipartiteTheta),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SampleConfig {
    pub seed: u64,
    pub pairs: usize,
    /// The vertex count of each graph is uniform in `[1, max_vertices]`.
    pub max_vertices: usize,
    pub alphabet_size: usize,
    pub mode: Mode,
    /// Worker threads; `0` uses the rayon default.
    pub jobs: usize,
    /// Fraction of bipartite pairs with nontrivial intersection that also get
    /// the Dicks-graph checks.
    pub dicks_fraction: f64,
    pub max_attempts: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: 1,
            pairs: 1000,
            max_vertices: 6,
            alphabet_size: 2,
            mode: Mode::Rose,
            jobs: 1,
            dicks_fraction: 0.1,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }
}

impl SampleConfig {
    pub fn validate(&self) -> Result<(), SampleError> {
        if self.max_vertices == 0 {
            return Err(SampleError::Config("max_vertices must be at least 1".into()));
        }
        if self.alphabet_size < 2 {
            return Err(SampleError::Config("alphabet_size must be at least 2".into()));
        }
        if self.mode == Mode::BipartiteTheta && self.alphabet_size != 2 {
            return Err(SampleError::Config(
                "bipartite-theta mode samples over 2 letters".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.dicks_fraction) {
            return Err(SampleError::Config("dicks_fraction must lie in [0, 1]".into()));
        }
        Ok(())
    }

    fn alphabet(&self) -> Alphabet {
        Alphabet::standard(self.alphabet_size)
    }
}

/// A pair whose tuple lies outside the known locus.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub index: usize,
    pub record: WitnessRecord,
}

/// A broken invariant; always a bug.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub index: usize,
    pub message: String,
    pub h: Vec<String>,
    pub k: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct SearchReport {
    pub config_line: String,
    pub pairs: usize,
    pub tuples: BTreeMap<RankProfile, u64>,
    pub violations: Vec<Violation>,
    pub failures: Vec<Failure>,
    /// Pairs dropped because a graph could not be sampled.
    pub skipped: usize,
    /// Pairs that also went through the Dicks-graph checks.
    pub dicks_checked: usize,
    pub seed: u64,
    pub elapsed: Duration,
}

impl SearchReport {
    fn merge(mut self, other: SearchReport) -> SearchReport {
        self.pairs += other.pairs;
        for (p, n) in other.tuples {
            *self.tuples.entry(p).or_default() += n;
        }
        self.violations.extend(other.violations);
        self.failures.extend(other.failures);
        self.skipped += other.skipped;
        self.dicks_checked += other.dicks_checked;
        self
    }

    pub fn throughput(&self) -> f64 {
        self.pairs as f64 / self.elapsed.as_secs_f64().max(1e-9)
    }

    pub fn summary(&self) -> String {
        format!(
            "pairs={} violations={} failures={} seed={}",
            self.pairs,
            self.violations.len(),
            self.failures.len(),
            self.seed
        )
    }

    /// The deterministic report: tuple counts, then violation and failure
    /// records as JSON lines, then the summary line. Timing is left out so
    /// that the output depends on the configuration alone.
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# {}", self.config_line).unwrap();
        writeln!(
            out,
            "# the vertex count of each graph is drawn uniformly from [1, max_vertices]; this distribution is a modelling choice"
        )
        .unwrap();
        writeln!(
            out,
            "# skipped={} dicks_checked={}",
            self.skipped, self.dicks_checked
        )
        .unwrap();
        writeln!(out, "h\tk\tv\tc\tcount").unwrap();
        for (p, n) in &self.tuples {
            writeln!(out, "{}\t{}\t{}\t{}\t{n}", p.h, p.k, p.v, p.c).unwrap();
        }
        for v in &self.violations {
            let r = &v.record;
            let line = json!({
                "kind": "violation",
                "index": v.index,
                "profile": [r.profile.h, r.profile.k, r.profile.v, r.profile.c],
                "H": r.h_words(),
                "K": r.k_words(),
                "verified": r.verified,
            });
            writeln!(out, "{line}").unwrap();
        }
        for f in &self.failures {
            let line = json!({
                "kind": "failure",
                "index": f.index,
                "message": f.message,
                "H": f.h,
                "K": f.k,
            });
            writeln!(out, "{line}").unwrap();
        }
        writeln!(out, "{}", self.summary()).unwrap();
        out
    }

    pub fn timing_line(&self) -> String {
        format!(
            "elapsed={:.3}s throughput={:.0} pairs/s",
            self.elapsed.as_secs_f64(),
            self.throughput()
        )
    }
}

fn words(g: &CoreGraph) -> Vec<String> {
    g.basis().iter().map(ToString::to_string).collect()
}

/// The two graphs of pair `index`.
pub fn sample_pair(
    cfg: &SampleConfig,
    index: usize,
) -> Result<(CoreGraph, CoreGraph, ChaCha8Rng), SampleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let alphabet = cfg.alphabet();
    let draw = |rng: &mut ChaCha8Rng| {
        let n = rng.gen_range(1..=cfg.max_vertices);
        random_core_graph_with(n, &alphabet, rng, cfg.max_attempts)
    };
    let h = draw(&mut rng)?;
    let k = draw(&mut rng)?;
    Ok(match cfg.mode {
        Mode::Rose => (h, k, rng),
        Mode::BipartiteTheta => (theta_graph(&h), theta_graph(&k), rng),
    })
}

fn dicks_checks(h: &CoreGraph, k: &CoreGraph, profile: &RankProfile) -> Vec<String> {
    let pair = match normalize_pair(h, k) {
        Ok(p) => p,
        Err(e) => return vec![format!("normalization: {e}")],
    };
    let b = match build_dicks(&pair.h, &pair.k) {
        Ok(b) => b,
        Err(e) => return vec![format!("Dicks graphs: {e}")],
    };
    let mut out = Vec::new();
    if let Err(e) = check_duality(&b) {
        out.push(format!("duality: {e}"));
    }
    out.extend(abc_report(&b, profile).violations());
    if !pushout(&b.h, &b.k, &b.pullback).is_isomorphic(&pushout_from_dicks(&b)) {
        out.push("the Dicks pushout model is not isomorphic to the pushout".into());
    }
    out
}

fn evaluate(cfg: &SampleConfig, index: usize) -> SearchReport {
    let mut report = SearchReport {
        pairs: 1,
        ..SearchReport::default()
    };
    let (h, k, mut rng) = match sample_pair(cfg, index) {
        Ok(x) => x,
        Err(_) => {
            report.skipped = 1;
            return report;
        }
    };
    let pb = pullback(&h, &k);
    let profile = RankProfile::new(h.rank(), k.rank(), join(&h, &k).rank(), pb.meet.rank());
    let fail = |message: String| Failure {
        index,
        message,
        h: words(&h),
        k: words(&k),
    };
    let mut failures = Vec::new();
    if !profile.satisfies_hanna_neumann() {
        failures.push(fail(format!("Hanna Neumann bound violated by {profile}")));
    }
    if !profile.satisfies_hopfian() {
        failures.push(fail(format!("Hopfian rule violated by {profile}")));
    }
    let oriented = profile.oriented();
    *report.tuples.entry(oriented).or_default() += 1;
    if oriented.h >= 2 {
        match classify(oriented) {
            Ok(cls) if cls.verdict == Verdict::Nonrealizable => failures.push(fail(format!(
                "theorem violation: {profile} is excluded by {}",
                cls.code()
            ))),
            Ok(cls) if cls.verdict == Verdict::Unknown => {
                let record = WitnessRecord::new(profile, h.basis(), k.basis(), Provenance::Search);
                match record.verify() {
                    Ok(r) => report.violations.push(Violation { index, record: r }),
                    Err(e) => failures.push(fail(format!("violation candidate failed to verify: {e}"))),
                }
            }
            Ok(_) => {}
            Err(e) => failures.push(fail(format!("classification: {e}"))),
        }
    }
    if cfg.mode == Mode::BipartiteTheta && profile.c >= 1 && rng.gen_bool(cfg.dicks_fraction) {
        report.dicks_checked = 1;
        for m in dicks_checks(&h, &k, &profile) {
            failures.push(fail(m));
        }
    }
    report.failures = failures;
    report
}

/// Runs the search; pair evaluations fan out over `cfg.jobs` threads and
/// merge into the same report for any thread count.
pub fn search(cfg: &SampleConfig) -> Result<SearchReport, SampleError> {
    cfg.validate()?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| SampleError::Config(e.to_string()))?;
    let mut report = pool.install(|| {
        (0..cfg.pairs)
            .into_par_iter()
            .fold(SearchReport::default, |acc, i| acc.merge(evaluate(cfg, i)))
            .reduce(SearchReport::default, SearchReport::merge)
    });
    report.violations.sort_by_key(|v| v.index);
    report.failures.sort_by_key(|f| f.index);
    report.seed = cfg.seed;
    report.config_line = format!(
        "stallings search seed={} pairs={} max_vertices={} alphabet_size={} mode={} dicks_fraction={}",
        cfg.seed,
        cfg.pairs,
        cfg.max_vertices,
        cfg.alphabet_size,
        cfg.mode.name(),
        cfg.dicks_fraction
    );
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Re-derives the profile of a violation through the word pipeline.
pub fn reverify(v: &Violation) -> bool {
    rank_profile(&v.record.h_gens, &v.record.k_gens).is_ok_and(|p| p == v.record.profile)
}
