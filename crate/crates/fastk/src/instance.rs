//! Text instance format and seeded generators.
//!
//! An instance file is a decimal vertex count on the first line followed by
//! an `n x n` 0/1 matrix, one row per line: character `j` of row `i` is `1`
//! iff the arc `i -> j` is present. The diagonal must be zero and exactly
//! one of the two cells of every off-diagonal pair must be `1`, which makes
//! the format self-validating. All lines are newline-terminated ASCII.

use crate::tournament::{Tournament, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line 1: expected a decimal vertex count, got '{0}'")]
    BadHeader(String),
    #[error("line {line}: expected {expected} characters, got {got}")]
    BadRowLength { line: usize, expected: usize, got: usize },
    #[error("line {line}, column {column}: expected '0' or '1'")]
    BadChar { line: usize, column: usize },
    #[error("line {line}: vertex {vertex} has a self-loop")]
    Diagonal { line: usize, vertex: usize },
    #[error("line {line}: pair {{{u}, {v}}} must have exactly one arc")]
    Antisymmetry { line: usize, u: usize, v: usize },
    #[error("expected {expected} rows, got {got}")]
    MissingRows { expected: usize, got: usize },
    #[error("line {line}: unexpected trailing content")]
    TrailingContent { line: usize },
}

/// Parses the matrix format, reporting the first offending line/column.
pub fn parse_instance(text: &str) -> Result<Tournament, ParseError> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    let n: usize = header
        .trim_end()
        .parse()
        .map_err(|_| ParseError::BadHeader(header.to_string()))?;

    let mut matrix = vec![vec![false; n]; n];
    let mut rows_seen = 0;
    for (idx, raw) in lines.enumerate() {
        let line = idx + 2;
        if rows_seen == n {
            if raw.trim().is_empty() {
                continue;
            }
            return Err(ParseError::TrailingContent { line });
        }
        let row = raw.trim_end_matches(['\r']);
        if row.len() != n {
            return Err(ParseError::BadRowLength { line, expected: n, got: row.len() });
        }
        for (j, ch) in row.chars().enumerate() {
            matrix[rows_seen][j] = match ch {
                '0' => false,
                '1' => true,
                _ => return Err(ParseError::BadChar { line, column: j + 1 }),
            };
        }
        rows_seen += 1;
    }
    if rows_seen != n {
        return Err(ParseError::MissingRows { expected: n, got: rows_seen });
    }

    let mut arcs = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for i in 0..n {
        if matrix[i][i] {
            return Err(ParseError::Diagonal { line: i + 2, vertex: i });
        }
        for j in i + 1..n {
            match (matrix[i][j], matrix[j][i]) {
                (true, false) => arcs.push((i, j)),
                (false, true) => arcs.push((j, i)),
                _ => return Err(ParseError::Antisymmetry { line: i + 2, u: i, v: j }),
            }
        }
    }
    Ok(Tournament::from_arcs(n, arcs).expect("validated above"))
}

/// Serializes in the same matrix format, newline-terminated.
pub fn serialize_instance(t: &Tournament) -> String {
    let n = t.n();
    let mut out = String::with_capacity(n * (n + 1) + 8);
    out.push_str(&format!("{n}\n"));
    for i in 0..n {
        for j in 0..n {
            out.push(if i != j && t.has_arc(i, j) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Every pair oriented by a fair coin.
    Uniform,
    /// Transitive tournament with `reversals` distinct arcs flipped, so the
    /// optimum is at most `reversals`.
    Planted { reversals: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("cannot plant {requested} reversals: only {available} arcs exist")]
    TooManyReversals { requested: usize, available: usize },
}

/// Deterministic under the seed.
pub fn generate(spec: &GeneratorSpec) -> Result<Tournament, GeneratorError> {
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.kind {
        GeneratorKind::Uniform => {
            let mut arcs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random_bool(0.5) {
                        arcs.push((i, j));
                    } else {
                        arcs.push((j, i));
                    }
                }
            }
            Ok(Tournament::from_arcs(n, arcs).expect("complete by construction"))
        }
        GeneratorKind::Planted { reversals } => {
            let available = n * n.saturating_sub(1) / 2;
            if reversals > available {
                return Err(GeneratorError::TooManyReversals { requested: reversals, available });
            }
            let mut t = Tournament::new_transitive(n);
            let mut chosen = std::collections::HashSet::new();
            while chosen.len() < reversals {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                if i < j && chosen.insert((i, j)) {
                    t.reverse_arc(i, j).expect("forward in transitive base");
                }
            }
            Ok(t)
        }
    }
}

/// Labels are not part of the file format; comparisons of serialized
/// kernels therefore ignore them.
pub fn same_structure(a: &Tournament, b: &Tournament) -> bool {
    serialize_instance(a) == serialize_instance(b)
}

/// Convenience: arcs as label pairs, for printing solutions.
pub fn arcs_as_labels(t: &Tournament, arcs: &[(usize, usize)]) -> Vec<(VertexId, VertexId)> {
    arcs.iter().map(|&(u, v)| (t.label(u), t.label(v))).collect()
}
