use std::fmt::Write as _;

use super::{classify, Classification, LocusError, WitnessStore};
use crate::lattice::RankProfile;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocusCell {
    pub classification: Classification,
    pub has_witness: bool,
}

impl LocusCell {
    /// `R:R6`, `N:R4` or `U`, with `*` when a witness is stored.
    pub fn code(&self) -> String {
        let mut s = self.classification.code();
        if self.has_witness {
            s.push('*');
        }
        s
    }
}

/// Verdicts over `v ∈ [2, h+k]` and `c ∈ [0, (h−1)(k−1)+1]`.
#[derive(Debug, Clone)]
pub struct LocusTable {
    pub h: usize,
    pub k: usize,
    /// `rows[v - 2][c]`.
    pub rows: Vec<Vec<LocusCell>>,
}

impl LocusTable {
    pub fn max_c(&self) -> usize {
        (self.h - 1) * (self.k - 1) + 1
    }

    pub fn cell(&self, v: usize, c: usize) -> Option<&LocusCell> {
        self.rows.get(v.checked_sub(2)?)?.get(c)
    }

    pub fn cells(&self) -> impl Iterator<Item = &LocusCell> {
        self.rows.iter().flatten()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("v\\c");
        for c in 0..=self.max_c() {
            write!(out, ",{c}").unwrap();
        }
        out.push('\n');
        for (r, row) in self.rows.iter().enumerate() {
            write!(out, "{}", r + 2).unwrap();
            for cell in row {
                write!(out, ",{}", cell.code()).unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// One character per cell, `v` decreasing downwards; `*` marks stored
    /// witnesses of realizable cells.
    pub fn to_ascii(&self) -> String {
        let width = self.max_c().to_string().len().max(1) + 1;
        let vw = (self.h + self.k).to_string().len();
        let mut out = String::new();
        writeln!(out, "(h,k) = ({},{})", self.h, self.k).unwrap();
        for (r, row) in self.rows.iter().enumerate().rev() {
            write!(out, "{:>vw$} |", r + 2).unwrap();
            for cell in row {
                let mut mark = cell.classification.verdict.code().to_string();
                if cell.has_witness {
                    mark.push('*');
                }
                write!(out, "{mark:>width$}").unwrap();
            }
            out.push('\n');
        }
        write!(out, "{:>vw$} +", "").unwrap();
        out.push_str(&"-".repeat(width * (self.max_c() + 1)));
        out.push('\n');
        write!(out, "{:>vw$}  ", "").unwrap();
        for c in 0..=self.max_c() {
            write!(out, "{c:>width$}").unwrap();
        }
        out.push('\n');
        out
    }
}

pub fn locus_table(h: usize, k: usize, store: Option<&WitnessStore>) -> Result<LocusTable, LocusError> {
    let (h, k) = (h.min(k), h.max(k));
    if h < 2 {
        return Err(LocusError::Domain(format!(
            "ranks must be at least 2, got ({h},{k})"
        )));
    }
    let max_c = (h - 1) * (k - 1) + 1;
    let rows = (2..=h + k)
        .map(|v| {
            (0..=max_c)
                .map(|c| {
                    let p = RankProfile::new(h, k, v, c);
                    Ok(LocusCell {
                        classification: classify(p)?,
                        has_witness: store.is_some_and(|s| s.contains(p)),
                    })
                })
                .collect::<Result<Vec<_>, LocusError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LocusTable { h, k, rows })
}
