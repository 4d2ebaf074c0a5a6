use std::fmt;

use super::LocusError;
use crate::lattice::{rr, RankProfile};

/// The sequence `a_0, …, a_{h+k−2}` bounding the known-realizable values of
/// `rk(H∩K)` for `i = h + k − rk(H∨K)`. Arguments are swapped if `h > k`.
pub fn a_sequence(h: usize, k: usize) -> Result<Vec<usize>, LocusError> {
    let (h, k) = (h.min(k), h.max(k));
    if h < 2 {
        return Err(LocusError::Domain(format!("ranks must be at least 2, got {h}")));
    }
    Ok((0..=h + k - 2).map(|i| a_term(h, i)).collect())
}

fn a_term(h: usize, i: usize) -> usize {
    if i == 0 {
        0
    } else if i <= 2 * (h - 1) {
        i * i / 4 + 1
    } else {
        (h - 1) * (i + 1 - h) + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Realizable,
    Nonrealizable,
    Unknown,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Realizable => "REALIZABLE",
            Verdict::Nonrealizable => "NONREALIZABLE",
            Verdict::Unknown => "UNKNOWN",
        }
    }

    pub fn code(self) -> char {
        match self {
            Verdict::Realizable => 'R',
            Verdict::Nonrealizable => 'N',
            Verdict::Unknown => 'U',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// `c ≤ (h−1)(k−1)+1`.
    R1,
    /// `v = h + k` forces `c = 0`.
    R2,
    /// `rr(c) ≤ i(i−1)/2`.
    R3,
    /// `c ≠ i(i−1)/2 + 1` when `i ≥ 3`.
    R4,
    /// For `h = 2`: realizable iff `c + v ≤ k + 2`.
    R5,
    /// `c ≤ a_i` is realizable.
    R6,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::R4 => "R4",
            Rule::R5 => "R5",
            Rule::R6 => "R6",
        }
    }

    pub fn citation(self) -> &'static str {
        match self {
            Rule::R1 => "Hanna Neumann bound rr(H∩K) ≤ rr(H)rr(K)",
            Rule::R2 => "Hopfian property: rk(H∨K) = rk H + rk K forces H∩K = 1",
            Rule::R3 => "Ivanov-Dicks inequality rr(H∩K) ≤ i(i−1)/2",
            Rule::R4 => "the value rk(H∩K) = i(i−1)/2 + 1 is excluded for i ≥ 3",
            Rule::R5 => "for rk H = 2: realizable iff c + v ≤ k + 2",
            Rule::R6 => "c ≤ a_i is realized by the operation schedule",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub profile: RankProfile,
    pub verdict: Verdict,
    /// For `NONREALIZABLE`, every failing rule in precedence order (the first
    /// one decides). For `REALIZABLE`, the construction rule.
    pub rules: Vec<Rule>,
    /// `c` is the Hanna Neumann maximum with `v > 2`, an open case.
    pub ivanov_open_question: bool,
}

impl Classification {
    pub fn decisive_rule(&self) -> Option<Rule> {
        self.rules.first().copied()
    }

    /// `R:R6`, `N:R4` or `U`.
    pub fn code(&self) -> String {
        match self.decisive_rule() {
            Some(r) => format!("{}:{}", self.verdict.code(), r),
            None => self.verdict.code().to_string(),
        }
    }

    pub fn note(&self) -> Option<&'static str> {
        (self.verdict == Verdict::Unknown)
            .then_some("conjecturally nonrealizable: the known locus is believed complete")
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.verdict.name())?;
        if let Some(r) = self.decisive_rule() {
            write!(f, " rule={r}")?;
        }
        if self.ivanov_open_question {
            write!(f, " ivanov-open-question")?;
        }
        Ok(())
    }
}

/// The fixed precedence R1 → R6. `H` and `K` are swapped if `h > k`.
pub fn classify(p: RankProfile) -> Result<Classification, LocusError> {
    let p = p.oriented();
    let RankProfile { h, k, v, c } = p;
    if h < 2 {
        return Err(LocusError::Domain(format!("ranks must be at least 2, got {p}")));
    }
    if v < 2 || v > h + k {
        return Err(LocusError::Domain(format!(
            "join rank must lie in [2, {}], got {p}",
            h + k
        )));
    }
    let i = h + k - v;
    let tri = i * i.saturating_sub(1) / 2;
    let mut failing = Vec::new();
    if c > (h - 1) * (k - 1) + 1 {
        failing.push(Rule::R1);
    }
    if v == h + k && c != 0 {
        failing.push(Rule::R2);
    }
    if rr(c) > tri {
        failing.push(Rule::R3);
    }
    if i >= 3 && c == tri + 1 {
        failing.push(Rule::R4);
    }
    if h == 2 && c + v > k + 2 {
        failing.push(Rule::R5);
    }
    let (verdict, rules) = if !failing.is_empty() {
        (Verdict::Nonrealizable, failing)
    } else if h == 2 {
        (Verdict::Realizable, vec![Rule::R5])
    } else if c <= a_term(h, i) {
        (Verdict::Realizable, vec![Rule::R6])
    } else {
        (Verdict::Unknown, Vec::new())
    };
    Ok(Classification {
        profile: p,
        verdict,
        rules,
        ivanov_open_question: verdict == Verdict::Unknown && c == (h - 1) * (k - 1) + 1 && v > 2,
    })
}
