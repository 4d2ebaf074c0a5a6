use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::{self, Write as _};
use std::fs::OpenOptions;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::{classify, LocusError, Verdict};
use crate::graph::{CoreGraph, LabeledGraph};
use crate::lattice::{profile_of, rank_profile, RankProfile};
use crate::sampler::random_core_graph;
use crate::words::{parse_words, Alphabet, Word};

pub const DEFAULT_STORE_PATH: &str = "witnesses.tsv";
pub const STORE_ENV_VAR: &str = "STALLINGS_WITNESS_DB";

const HEADER: &str = "h\tk\tv\tc\tH\tK\tprovenance\tverified";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    BaseSearch,
    Ia,
    Ib,
    II,
    Fixture,
    /// Found by the random conjecture search rather than constructed.
    Search,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::BaseSearch => "base-search",
            Provenance::Ia => "Ia",
            Provenance::Ib => "Ib",
            Provenance::II => "II",
            Provenance::Fixture => "fixture",
            Provenance::Search => "search",
        }
    }

    pub fn parse(s: &str) -> Option<Provenance> {
        [
            Provenance::BaseSearch,
            Provenance::Ia,
            Provenance::Ib,
            Provenance::II,
            Provenance::Fixture,
            Provenance::Search,
        ]
        .into_iter()
        .find(|p| p.name() == s)
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Generators of a pair `H`, `K` claimed to have ranks `profile`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessRecord {
    pub profile: RankProfile,
    pub h_gens: Vec<Word>,
    pub k_gens: Vec<Word>,
    pub provenance: Provenance,
    /// Set only by [`WitnessRecord::verify`].
    pub verified: bool,
}

impl WitnessRecord {
    pub fn new(profile: RankProfile, h_gens: Vec<Word>, k_gens: Vec<Word>, provenance: Provenance) -> Self {
        WitnessRecord {
            profile,
            h_gens,
            k_gens,
            provenance,
            verified: false,
        }
    }

    /// Recomputes the ranks from the words and marks the record verified if
    /// they match.
    pub fn verify(mut self) -> Result<WitnessRecord, LocusError> {
        let actual = rank_profile(&self.h_gens, &self.k_gens)?;
        if actual != self.profile {
            return Err(LocusError::Mismatch {
                expected: self.profile,
                actual,
            });
        }
        self.verified = true;
        Ok(self)
    }

    /// Swaps `H` and `K` if `h > k`.
    pub fn oriented(self) -> WitnessRecord {
        if self.profile.h <= self.profile.k {
            return self;
        }
        WitnessRecord {
            profile: self.profile.oriented(),
            h_gens: self.k_gens,
            k_gens: self.h_gens,
            ..self
        }
    }

    pub fn h_words(&self) -> Vec<String> {
        self.h_gens.iter().map(ToString::to_string).collect()
    }

    pub fn k_words(&self) -> Vec<String> {
        self.k_gens.iter().map(ToString::to_string).collect()
    }

    fn alphabet(&self) -> Alphabet {
        Alphabet::from_letters(
            self.h_gens
                .iter()
                .chain(&self.k_gens)
                .flat_map(|w| w.letters().collect::<Vec<_>>()),
        )
    }

    fn to_tsv(&self) -> String {
        let p = self.profile;
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            p.h,
            p.k,
            p.v,
            p.c,
            self.h_words().join(";"),
            self.k_words().join(";"),
            self.provenance,
            self.verified
        )
    }

    fn from_tsv(line: &str) -> Result<WitnessRecord, String> {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 8 {
            return Err(format!("expected 8 tab-separated columns, found {}", cols.len()));
        }
        let num = |i: usize| {
            cols[i]
                .trim()
                .parse::<usize>()
                .map_err(|e| format!("column {}: {e}", i + 1))
        };
        let profile = RankProfile::new(num(0)?, num(1)?, num(2)?, num(3)?);
        let gens = |s: &str| -> Result<Vec<Word>, String> {
            let parts: Vec<&str> = s.split(';').map(str::trim).filter(|w| !w.is_empty()).collect();
            parse_words(&parts).map_err(|e| e.to_string())
        };
        Ok(WitnessRecord {
            profile,
            h_gens: gens(cols[4])?,
            k_gens: gens(cols[5])?,
            provenance: Provenance::parse(cols[6].trim())
                .ok_or_else(|| format!("unknown provenance {:?}", cols[6]))?,
            verified: match cols[7].trim() {
                "true" => true,
                "false" => false,
                other => return Err(format!("verified must be true or false, got {other:?}")),
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operation {
    /// Adds a fresh generator to `H`.
    Ia,
    /// Adds a fresh generator to `K`.
    Ib,
    /// Adds the same fresh generator to both.
    II,
}

impl Operation {
    fn provenance(self) -> Provenance {
        match self {
            Operation::Ia => Provenance::Ia,
            Operation::Ib => Provenance::Ib,
            Operation::II => Provenance::II,
        }
    }

    fn swapped(self) -> Operation {
        match self {
            Operation::Ia => Operation::Ib,
            Operation::Ib => Operation::Ia,
            Operation::II => Operation::II,
        }
    }

    pub fn predict(self, p: RankProfile) -> RankProfile {
        let RankProfile { h, k, v, c } = p;
        match self {
            Operation::Ia => RankProfile::new(h + 1, k, v + 1, c),
            Operation::Ib => RankProfile::new(h, k + 1, v + 1, c),
            Operation::II => RankProfile::new(h + 1, k + 1, v + 1, c + 1),
        }
    }
}

/// Extends a verified witness by a letter it does not use and re-verifies
/// the result.
pub fn apply_operation(w: &WitnessRecord, op: Operation) -> Result<WitnessRecord, LocusError> {
    if !w.verified {
        return Err(LocusError::Domain(format!(
            "witness for {} is not verified",
            w.profile
        )));
    }
    let t = Word::letter(w.alphabet().fresh_letter());
    let mut h = w.h_gens.clone();
    let mut k = w.k_gens.clone();
    if op != Operation::Ib {
        h.push(t.clone());
    }
    if op != Operation::Ia {
        k.push(t);
    }
    WitnessRecord::new(op.predict(w.profile), h, k, op.provenance()).verify()
}

/// Hand-written witnesses for the page `(2, 2)`.
pub fn fixture(p: RankProfile) -> Option<WitnessRecord> {
    let (h, k): (&[&str], &[&str]) = match (p.h, p.k, p.v, p.c) {
        (2, 2, 2, 2) => (&["x", "y"], &["x", "y"]),
        (2, 2, 2, 1) => (&["cA", "cBcAbC"], &["bA", "cBcA"]),
        (2, 2, 3, 1) => (&["x1", "x2"], &["x1", "x3"]),
        (2, 2, 3, 0) => (&["x1", "x2"], &["x3", "x1x3X1"]),
        (2, 2, 4, 0) => (&["x1", "x2"], &["x3", "x4"]),
        _ => return None,
    };
    Some(WitnessRecord::new(
        p,
        parse_words(h).expect("fixture words parse"),
        parse_words(k).expect("fixture words parse"),
        Provenance::Fixture,
    ))
}

/// An append-only TSV of witnesses keyed by oriented profile.
#[derive(Debug)]
pub struct WitnessStore {
    path: Option<PathBuf>,
    records: RwLock<BTreeMap<RankProfile, WitnessRecord>>,
    writer: Mutex<()>,
}

impl WitnessStore {
    pub fn in_memory() -> WitnessStore {
        WitnessStore {
            path: None,
            records: RwLock::new(BTreeMap::new()),
            writer: Mutex::new(()),
        }
    }

    /// `$STALLINGS_WITNESS_DB`, or `witnesses.tsv` in the working directory.
    pub fn default_path() -> PathBuf {
        std::env::var_os(STORE_ENV_VAR)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_STORE_PATH))
    }

    /// Loads the store at `path`, which need not exist yet. Later lines win.
    pub fn open(path: impl AsRef<Path>) -> Result<WitnessStore, LocusError> {
        let path = path.as_ref().to_path_buf();
        let mut records = BTreeMap::new();
        if path.exists() {
            let text = std::fs::read_to_string(&path)?;
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() || line.starts_with('#') || line == HEADER {
                    continue;
                }
                let r = WitnessRecord::from_tsv(line).map_err(|message| LocusError::Store {
                    path: path.display().to_string(),
                    line: i + 1,
                    message,
                })?;
                records.insert(r.profile.oriented(), r.oriented());
            }
        }
        Ok(WitnessStore {
            path: Some(path),
            records: RwLock::new(records),
            writer: Mutex::new(()),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn get(&self, p: RankProfile) -> Option<WitnessRecord> {
        self.records.read().unwrap().get(&p.oriented()).cloned()
    }

    pub fn contains(&self, p: RankProfile) -> bool {
        self.records.read().unwrap().contains_key(&p.oriented())
    }

    pub fn len(&self) -> usize {
        self.records.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn records(&self) -> Vec<WitnessRecord> {
        self.records.read().unwrap().values().cloned().collect()
    }

    /// Adds a record and appends it to the backing file.
    pub fn insert(&self, record: WitnessRecord) -> Result<(), LocusError> {
        let record = record.oriented();
        let _guard = self.writer.lock().unwrap();
        if let Some(path) = &self.path {
            let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
            let mut f = OpenOptions::new().create(true).append(true).open(path)?;
            let mut text = String::new();
            if fresh {
                writeln!(text, "{HEADER}").unwrap();
            }
            writeln!(text, "{}", record.to_tsv()).unwrap();
            f.write_all(text.as_bytes())?;
        }
        self.records.write().unwrap().insert(record.profile, record);
        Ok(())
    }
}

/// Parameters of the search for `v = 2` witnesses over `{x, y}`.
#[derive(Debug, Clone)]
pub struct BaseSearchConfig {
    pub seed: u64,
    /// Number of `(H, K)` pairs tried per page.
    pub budget: usize,
    /// Random core graphs kept per rank.
    pub pool_size: usize,
    pub max_vertices: usize,
    /// Largest index of the finite-index subgroups added to the pools.
    pub max_index: usize,
}

impl Default for BaseSearchConfig {
    fn default() -> Self {
        BaseSearchConfig {
            seed: 0x5eed,
            budget: 200_000,
            pool_size: 300,
            max_vertices: 7,
            max_index: 4,
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Core graphs of the finite-index subgroups of `F(x, y)` of index `n`: one per
/// transitive pair of permutations, up to based isomorphism.
fn finite_index_graphs(n: usize) -> Vec<CoreGraph> {
    let ab = Alphabet::xy();
    let [x, y] = [ab.letters()[0], ab.letters()[1]];
    let perms = permutations(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in &perms {
        for q in &perms {
            let mut g = LabeledGraph::new(n);
            for i in 0..n {
                g.add_edge(i, p[i], x);
                g.add_edge(i, q[i], y);
            }
            if !g.is_connected() {
                continue;
            }
            let core = CoreGraph::new(g, 0, ab.clone()).expect("permutation graphs are cores");
            if seen.insert(core.serialize()) {
                out.push(core);
            }
        }
    }
    out
}

fn rank_pools(
    h: usize,
    k: usize,
    cfg: &BaseSearchConfig,
    rng: &mut ChaCha8Rng,
) -> BTreeMap<usize, Vec<CoreGraph>> {
    let wanted: BTreeSet<usize> = [h, k].into();
    let mut pools: BTreeMap<usize, Vec<CoreGraph>> = wanted.iter().map(|&r| (r, Vec::new())).collect();
    let mut seen = HashSet::new();
    for n in 1..=cfg.max_index {
        if let Some(pool) = pools.get_mut(&(n + 1)) {
            for g in finite_index_graphs(n) {
                seen.insert(g.serialize());
                pool.push(g);
            }
        }
    }
    let ab = Alphabet::xy();
    let attempts = cfg.pool_size * 200;
    for _ in 0..attempts {
        if pools.values().all(|p| p.len() >= cfg.pool_size) {
            break;
        }
        let n = rng.gen_range(1..=cfg.max_vertices);
        let Ok(g) = random_core_graph(n, &ab, rng) else {
            continue;
        };
        if let Some(pool) = pools.get_mut(&g.rank()) {
            if pool.len() < cfg.pool_size && seen.insert(g.serialize()) {
                pool.push(g);
            }
        }
    }
    pools
}

/// Searches pairs of subgroups of `F(x, y)` with ranks `h` and `k` and
/// returns a verified witness for every realizable `(h, k, 2, c)` it finds.
pub fn base_search(
    h: usize,
    k: usize,
    cfg: &BaseSearchConfig,
) -> Result<BTreeMap<usize, WitnessRecord>, LocusError> {
    let (h, k) = (h.min(k), h.max(k));
    let mut wanted: BTreeSet<usize> = (0..=(h - 1) * (k - 1) + 1)
        .filter(|&c| {
            classify(RankProfile::new(h, k, 2, c)).is_ok_and(|cls| cls.verdict == Verdict::Realizable)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ ((h as u64) << 32) ^ (k as u64) << 40);
    let pools = rank_pools(h, k, cfg, &mut rng);
    let (hp, kp) = (&pools[&h], &pools[&k]);
    let mut found = BTreeMap::new();
    if hp.is_empty() || kp.is_empty() {
        return Ok(found);
    }
    for _ in 0..cfg.budget {
        if wanted.is_empty() {
            break;
        }
        let gh = &hp[rng.gen_range(0..hp.len())];
        let gk = &kp[rng.gen_range(0..kp.len())];
        let p = profile_of(gh, gk);
        if p.v == 2 && wanted.contains(&p.c) {
            let record = WitnessRecord::new(p, gh.basis(), gk.basis(), Provenance::BaseSearch).verify()?;
            wanted.remove(&p.c);
            found.insert(p.c, record);
        }
    }
    Ok(found)
}

/// A verified witness for a tuple the classifier marks realizable: from the
/// store, a fixture, the base-row search, or an operation applied to a
/// witness of a smaller tuple. New witnesses are added to the store.
pub fn construct_witness(
    p: RankProfile,
    store: &WitnessStore,
    cfg: &BaseSearchConfig,
) -> Result<WitnessRecord, LocusError> {
    let p = p.oriented();
    let cls = classify(p)?;
    if cls.verdict != Verdict::Realizable {
        return Err(LocusError::NotRealizable(p, cls.to_string()));
    }
    if let Some(r) = store.get(p) {
        return r.verify();
    }
    if let Some(r) = fixture(p) {
        let r = r.verify()?;
        store.insert(r.clone())?;
        return Ok(r);
    }
    if p.v == 2 {
        let found = base_search(p.h, p.k, cfg)?;
        for r in found.values() {
            if !store.contains(r.profile) {
                store.insert(r.clone())?;
            }
        }
        return found.get(&p.c).cloned().ok_or(LocusError::BudgetExhausted {
            profile: p,
            budget: cfg.budget,
        });
    }
    let RankProfile { h, k, v, c } = p;
    let mut candidates = vec![(Operation::Ib, RankProfile::new(h, k - 1, v - 1, c))];
    candidates.push((Operation::Ia, RankProfile::new(h - 1, k, v - 1, c)));
    if c >= 1 {
        candidates.push((Operation::II, RankProfile::new(h - 1, k - 1, v - 1, c - 1)));
    }
    let mut last = None;
    for (op, q) in candidates {
        if q.h.min(q.k) < 2 || !classify(q).is_ok_and(|c| c.verdict == Verdict::Realizable) {
            continue;
        }
        let op = if q.h > q.k { op.swapped() } else { op };
        match construct_witness(q, store, cfg).and_then(|w| apply_operation(&w, op)) {
            Ok(r) => {
                let r = r.oriented();
                store.insert(r.clone())?;
                return Ok(r);
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or(LocusError::BudgetExhausted {
        profile: p,
        budget: cfg.budget,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(p: (usize, usize, usize, usize)) -> WitnessRecord {
        fixture(RankProfile::new(p.0, p.1, p.2, p.3))
            .unwrap()
            .verify()
            .unwrap()
    }

    #[test]
    fn fixtures_verify() {
        for c in [
            (2, 2, 2, 2),
            (2, 2, 2, 1),
            (2, 2, 3, 1),
            (2, 2, 3, 0),
            (2, 2, 4, 0),
        ] {
            assert!(rec(c).verified);
        }
    }

    #[test]
    fn operations_follow_predictions() {
        let base = rec((2, 2, 2, 2));
        let a = apply_operation(&base, Operation::Ia).unwrap();
        assert_eq!(a.profile, RankProfile::new(3, 2, 3, 2));
        let two = apply_operation(&base, Operation::II).unwrap();
        assert_eq!(two.profile, RankProfile::new(3, 3, 3, 3));
        let ex = rec((2, 2, 2, 1));
        let b = apply_operation(&ex, Operation::Ib).unwrap();
        assert_eq!(b.profile, RankProfile::new(2, 3, 3, 1));
        assert!(b.verified);
        let unverified = fixture(RankProfile::new(2, 2, 2, 2)).unwrap();
        assert!(apply_operation(&unverified, Operation::Ia).is_err());
    }

    #[test]
    fn mismatched_records_fail() {
        let mut r = fixture(RankProfile::new(2, 2, 2, 2)).unwrap();
        r.profile.c = 1;
        assert!(matches!(r.verify(), Err(LocusError::Mismatch { .. })));
    }

    #[test]
    fn finite_index_counts() {
        // Subgroups of index n in F2: 1, 3, 13, 71.
        let counts: Vec<usize> = (1..=4).map(|n| finite_index_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 3, 13, 71]);
        assert!(finite_index_graphs(3).iter().all(|g| g.rank() == 4));
    }

    #[test]
    fn tsv_round_trip() {
        let dir = std::env::temp_dir().join(format!("stallings-store-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("w.tsv");
        let _ = std::fs::remove_file(&path);
        let store = WitnessStore::open(&path).unwrap();
        let r = apply_operation(&rec((2, 2, 2, 1)), Operation::Ia).unwrap();
        store.insert(r.clone()).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(HEADER));
        let again = WitnessStore::open(&path).unwrap();
        assert_eq!(again.get(RankProfile::new(2, 3, 3, 1)), Some(r.oriented()));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn trivial_meet_base_row_is_found() {
        let store = WitnessStore::in_memory();
        let w =
            construct_witness(RankProfile::new(2, 2, 2, 0), &store, &BaseSearchConfig::default()).unwrap();
        assert_eq!(w.provenance, Provenance::BaseSearch);
        assert!(w.verified);
        assert_eq!(
            rank_profile(&w.h_gens, &w.k_gens).unwrap(),
            RankProfile::new(2, 2, 2, 0)
        );
    }

    #[test]
    fn schedule_reaches_larger_pages() {
        let store = WitnessStore::in_memory();
        let cfg = BaseSearchConfig::default();
        let w = construct_witness(RankProfile::new(4, 3, 4, 3), &store, &cfg).unwrap();
        assert_eq!(w.profile, RankProfile::new(3, 4, 4, 3));
        assert!(construct_witness(RankProfile::new(4, 4, 5, 4), &store, &cfg).is_err());
    }
}
