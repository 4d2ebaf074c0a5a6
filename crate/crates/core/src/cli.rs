//! The `stallings` command line. Exit status 0 on success, 1 on a usage or
//! input error, 2 when an invariant or theorem check fails.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};

use crate::dicks::{build_dicks, build_sig, build_sig_oriented, dicks_report, ColoredMultigraph};
use crate::graph::{deserialize_graph, fold_and_trim, CoreGraph};
use crate::lattice::{join, normalize_pair, pullback, pushout, LatticeError, RankProfile};
use crate::locus::{classify, construct_witness, locus_table, BaseSearchConfig, LocusError, WitnessStore};
use crate::sampler::{search, Mode, SampleConfig};
use crate::words::{parse_words, theta_embed, Alphabet, SubgroupInput, Word};

#[derive(Debug, Parser)]
#[command(
    name = "stallings",
    version,
    about = "Core graphs of subgroups of free groups"
)]
#[command(disable_help_flag = true)]
struct Cli {
    #[arg(long, action = ArgAction::Help, global = true, help = "Print help")]
    help: Option<bool>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct PairArgs {
    /// Subgroup file for H (`-` for standard input).
    #[arg(short = 'H', value_name = "FILE")]
    h_file: Option<String>,
    /// Subgroup file for K.
    #[arg(short = 'K', value_name = "FILE")]
    k_file: Option<String>,
    /// Comma-separated generators of H instead of a file.
    #[arg(long, value_name = "WORDS")]
    h_words: Option<String>,
    /// Comma-separated generators of K instead of a file.
    #[arg(long, value_name = "WORDS")]
    k_words: Option<String>,
    /// Map {x, y} generators into F(a, b, c) by x ↦ cA, y ↦ cB first.
    #[arg(long)]
    theta: bool,
}

#[derive(Debug, Args)]
struct ProfileArgs {
    #[arg(short = 'h', value_name = "RANK")]
    h: usize,
    #[arg(short = 'k', value_name = "RANK")]
    k: usize,
    #[arg(short = 'v', value_name = "RANK")]
    v: usize,
    #[arg(short = 'c', value_name = "RANK")]
    c: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Core graph and rank of H, or the rank of a graph file.
    Rank {
        #[command(flatten)]
        pair: PairArgs,
        /// Graph file (`-` for standard input).
        #[arg(long, value_name = "FILE")]
        graph: Option<String>,
    },
    /// Core graph of H∩K.
    Meet {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Core graph of H∨K.
    Join {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Topological pushout of Γ_H and Γ_K over the intersection.
    Pushout {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Conjugates H and K so that no core graph has a valence-one vertex.
    Normalize {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Dicks graphs, duality pairs, Σ and the rank checks of a pair over {a, b, c}.
    Dicks {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Σ of a colored multigraph given as `edge <u> <v> <color>` lines.
    Sigma {
        #[arg(value_name = "FILE", default_value = "-")]
        file: String,
    },
    /// The subgroup isomorphism graph SIG(K_{s,t}).
    Sig {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        /// Take exactly s nodes from Γ_H and t from Γ_K.
        #[arg(long)]
        oriented: bool,
    },
    /// Verdict of the rule list for a tuple (h, k; v, c).
    Classify {
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// Verdict table of a page (h, k).
    Locus {
        #[arg(short = 'h', value_name = "RANK")]
        h: usize,
        #[arg(short = 'k', value_name = "RANK")]
        k: usize,
        #[arg(long, default_value = "csv", value_parser = ["csv", "ascii"])]
        format: String,
        /// Witness store, for availability marks.
        #[arg(long, value_name = "FILE")]
        db: Option<PathBuf>,
    },
    /// Builds and verifies a witness pair for a realizable tuple.
    Witness {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, value_name = "FILE")]
        db: Option<PathBuf>,
        #[arg(long, default_value_t = BaseSearchConfig::default().budget)]
        budget: usize,
        #[arg(long, default_value_t = BaseSearchConfig::default().seed)]
        seed: u64,
    },
    /// Seeded random search for tuples outside the known locus.
    Search {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 6)]
        max_vertices: usize,
        #[arg(long, default_value = "rose", value_parser = ["rose", "bipartite-theta"])]
        mode: String,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 2)]
        alphabet_size: usize,
        #[arg(long, default_value_t = 0.1)]
        dicks_fraction: f64,
    },
}

enum Failure {
    Usage(String),
    Violation(String),
}

type Outcome = Result<String, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::HannaNeumann { .. } => Failure::Violation(e.to_string()),
            other => usage(other),
        }
    }
}

impl From<LocusError> for Failure {
    fn from(e: LocusError) -> Self {
        match e {
            LocusError::Mismatch { .. } => Failure::Violation(e.to_string()),
            LocusError::Lattice(l) => l.into(),
            other => usage(other),
        }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
}

impl Io<'_> {
    fn read(&mut self, path: &str) -> Result<String, Failure> {
        if path == "-" {
            if self.stdin_used {
                return Err(usage("standard input can be read only once"));
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).map_err(usage)?;
            Ok(s)
        } else {
            std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))
        }
    }
}

struct Subgroup {
    alphabet: Alphabet,
    generators: Vec<Word>,
}

fn read_subgroup(
    io: &mut Io,
    file: &Option<String>,
    inline: &Option<String>,
    name: &str,
) -> Result<Subgroup, Failure> {
    match (file, inline) {
        (Some(_), Some(_)) => Err(usage(format!(
            "give either -{name} or --{}-words, not both",
            name.to_lowercase()
        ))),
        (Some(path), None) => {
            let input = SubgroupInput::parse(&io.read(path)?).map_err(|e| usage(format!("{path}: {e}")))?;
            Ok(Subgroup {
                alphabet: input.alphabet,
                generators: input.generators,
            })
        }
        (None, Some(list)) => {
            let words: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let generators = parse_words(&words).map_err(usage)?;
            let alphabet =
                Alphabet::from_letters(generators.iter().flat_map(|w| w.letters().collect::<Vec<_>>()));
            Ok(Subgroup { alphabet, generators })
        }
        (None, None) => Err(usage(format!(
            "missing generators for {name}: pass -{name} FILE or --{}-words",
            name.to_lowercase()
        ))),
    }
}

fn theta(s: Subgroup) -> Result<Subgroup, Failure> {
    let domain = if s.alphabet.len() == 2 {
        s.alphabet.clone()
    } else {
        Alphabet::xy()
    };
    let generators = s
        .generators
        .iter()
        .map(|w| theta_embed(w, &domain))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    Ok(Subgroup {
        alphabet: Alphabet::abc(),
        generators,
    })
}

fn core(s: &Subgroup, alphabet: &Alphabet) -> Result<CoreGraph, Failure> {
    crate::graph::build_core_graph(&s.generators, alphabet).map_err(usage)
}

fn read_one(io: &mut Io, p: &PairArgs) -> Result<CoreGraph, Failure> {
    let mut h = read_subgroup(io, &p.h_file, &p.h_words, "H")?;
    if p.theta {
        h = theta(h)?;
    }
    core(&h, &h.alphabet.clone())
}

fn read_pair(io: &mut Io, p: &PairArgs) -> Result<(CoreGraph, CoreGraph), Failure> {
    let mut h = read_subgroup(io, &p.h_file, &p.h_words, "H")?;
    let mut k = read_subgroup(io, &p.k_file, &p.k_words, "K")?;
    if p.theta {
        h = theta(h)?;
        k = theta(k)?;
    }
    let alphabet = h.alphabet.union(&k.alphabet);
    if alphabet.is_empty() {
        return Err(usage("both subgroups are trivial and no alphabet was declared"));
    }
    Ok((core(&h, &alphabet)?, core(&k, &alphabet)?))
}

fn graph_with_rank(g: &CoreGraph) -> String {
    format!("{}rank {}\n", g.serialize(), g.rank())
}

fn dicks_pair(io: &mut Io, p: &PairArgs) -> Result<(CoreGraph, CoreGraph, Word), Failure> {
    let (h, k) = read_pair(io, p)?;
    let n = normalize_pair(&h, &k)?;
    Ok((n.h, n.k, n.conjugator))
}

fn execute(cmd: Command, io: &mut Io, stderr: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Rank { pair, graph } => match graph {
            Some(path) => {
                let parsed =
                    deserialize_graph(&io.read(&path)?).map_err(|e| usage(format!("{path}: {e}")))?;
                if !parsed.graph.is_connected() {
                    return Err(usage(format!("{path}: the graph is not connected")));
                }
                let g = fold_and_trim(&parsed.graph, parsed.basepoint, parsed.alphabet);
                Ok(format!("rank {}\n", g.rank()))
            }
            None => Ok(graph_with_rank(&read_one(io, &pair)?)),
        },
        Command::Meet { pair } => {
            let (h, k) = read_pair(io, &pair)?;
            Ok(graph_with_rank(&pullback(&h, &k).meet))
        }
        Command::Join { pair } => {
            let (h, k) = read_pair(io, &pair)?;
            Ok(graph_with_rank(&join(&h, &k)))
        }
        Command::Pushout { pair } => {
            let (h, k) = read_pair(io, &pair)?;
            let t = pushout(&h, &k, &pullback(&h, &k));
            Ok(format!("{}rank {}\n", t.serialize(), t.rank()))
        }
        Command::Normalize { pair } => {
            let (h, k, g) = dicks_pair(io, &pair)?;
            let mut out = String::new();
            writeln!(
                out,
                "# conjugator {}",
                if g.is_empty() { "1".into() } else { g.to_string() }
            )
            .unwrap();
            writeln!(out, "# H").unwrap();
            out.push_str(&graph_with_rank(&h));
            writeln!(out, "# K").unwrap();
            out.push_str(&graph_with_rank(&k));
            Ok(out)
        }
        Command::Dicks { pair } => {
            let (h, k, g) = dicks_pair(io, &pair)?;
            let b = build_dicks(&h, &k).map_err(usage)?;
            let report = dicks_report(&b).map_err(|e| Failure::Violation(e.to_string()))?;
            let mut out = String::new();
            if !g.is_empty() {
                writeln!(out, "normalized by conjugation with {g}").unwrap();
            }
            out.push_str(&report.render());
            if report.values.get("theorem.holds").map(String::as_str) != Some("true")
                || report.values.get("pushout_model").map(String::as_str) != Some("true")
            {
                return Err(Failure::Violation(out));
            }
            Ok(out)
        }
        Command::Sigma { file } => {
            let g = ColoredMultigraph::parse(&io.read(&file)?).map_err(usage)?;
            Ok(format!(
                "sigma {}\nnonmonochromatic-cycle {}\n",
                g.sigma(),
                g.has_nonmonochromatic_cycle()
            ))
        }
        Command::Sig { pair, s, t, oriented } => {
            let (h, k, _) = dicks_pair(io, &pair)?;
            let b = build_dicks(&h, &k).map_err(usage)?;
            let sig = if oriented {
                build_sig_oriented(&b, s, t)
            } else {
                build_sig(&b, s, t)
            }
            .map_err(|e| Failure::Violation(e.to_string()))?;
            let mut out = String::new();
            writeln!(
                out,
                "sig K_{{{s},{t}}} vertices {} edges {}",
                sig.vertices.len(),
                sig.edges.len()
            )
            .unwrap();
            for (i, v) in sig.vertices.iter().enumerate() {
                let nodes: Vec<String> = v
                    .h_nodes
                    .iter()
                    .chain(&v.k_nodes)
                    .map(|&n| b.node_name(n))
                    .collect();
                writeln!(
                    out,
                    "vertex {i} {} {{{}}} in {}",
                    v.side.name(),
                    nodes.join(" "),
                    v.sets.name()
                )
                .unwrap();
            }
            for &(p, q, l) in &sig.edges {
                writeln!(out, "edge {p} {q} {l}").unwrap();
            }
            for l in ['a', 'b', 'c'] {
                writeln!(out, "label {l} edges {}", sig.label_count(l)).unwrap();
            }
            let hist = sig.valence_histogram();
            writeln!(
                out,
                "valences 0:{} 1:{} 2:{} 3:{}",
                hist[0], hist[1], hist[2], hist[3]
            )
            .unwrap();
            writeln!(
                out,
                "odd-valence {} parity {}",
                sig.odd_valence_count(),
                sig.parity_holds()
            )
            .unwrap();
            if !sig.parity_holds() {
                return Err(Failure::Violation(out));
            }
            Ok(out)
        }
        Command::Classify { profile: p } => {
            let cls = classify(RankProfile::new(p.h, p.k, p.v, p.c))?;
            let mut out = format!("{cls}\n");
            for r in &cls.rules {
                writeln!(out, "# {r}: {}", r.citation()).unwrap();
            }
            if let Some(note) = cls.note() {
                writeln!(out, "# {note}").unwrap();
            }
            Ok(out)
        }
        Command::Locus { h, k, format, db } => {
            let store = WitnessStore::open(db.unwrap_or_else(WitnessStore::default_path))?;
            let t = locus_table(h, k, Some(&store))?;
            Ok(if format == "ascii" {
                t.to_ascii()
            } else {
                t.to_csv()
            })
        }
        Command::Witness {
            profile: p,
            db,
            budget,
            seed,
        } => {
            let store = WitnessStore::open(db.unwrap_or_else(WitnessStore::default_path))?;
            let cfg = BaseSearchConfig {
                budget,
                seed,
                ..BaseSearchConfig::default()
            };
            let w = construct_witness(RankProfile::new(p.h, p.k, p.v, p.c), &store, &cfg)?;
            Ok(format!(
                "profile {}\nH {}\nK {}\nprovenance {}\nverified {}\n",
                w.profile,
                w.h_words().join(";"),
                w.k_words().join(";"),
                w.provenance,
                w.verified
            ))
        }
        Command::Search {
            seed,
            pairs,
            max_vertices,
            mode,
            jobs,
            alphabet_size,
            dicks_fraction,
        } => {
            let cfg = SampleConfig {
                seed,
                pairs,
                max_vertices,
                mode: Mode::parse(&mode).expect("validated by clap"),
                jobs,
                alphabet_size,
                dicks_fraction,
                ..SampleConfig::default()
            };
            let report = search(&cfg).map_err(usage)?;
            let out = report.render();
            let _ = writeln!(stderr, "{}", report.timing_line());
            if !report.failures.is_empty() {
                return Err(Failure::Violation(out));
            }
            Ok(out)
        }
    }
}

/// Runs one invocation; returns the exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut io = Io {
        stdin,
        stdin_used: false,
    };
    match execute(cli.command, &mut io, stderr) {
        Ok(out) => {
            let _ = stdout.write_all(out.as_bytes());
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Violation(msg)) => {
            let _ = stdout.write_all(msg.as_bytes());
            let _ = writeln!(
                stderr,
                "invariant violation: this is a bug, please report it with the input above"
            );
            2
        }
    }
}
