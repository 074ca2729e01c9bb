//! Reduction traces: an ordered, replayable log of rule applications.
//!
//! Each entry records the rule, the affected vertices or arcs by stable
//! label, and the amount the parameter decreased. Applying a trace to the
//! instance it was produced from reproduces the kernel bit-exactly, and the
//! recorded reversals are what a yes-answer on the kernel gets lifted
//! through.
//!
//! Text form, one line per application:
//!
//! ```text
//! rule=1 vertex=7 kdelta=0
//! rule=2 arc=4->1 kdelta=1
//! rule=3 cuts=2,5 arcs=7->0,6->2 kdelta=2
//! rule=4 module=1,2 arcs=5->0 kdelta=1
//! ```

use crate::tournament::{Tournament, VertexId};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceOp {
    /// Rule 1: a triangle-free vertex was deleted.
    DeleteVertex { vertex: VertexId },
    /// Rule 2: an arc in too many triangles was reversed.
    ReverseArc { tail: VertexId, head: VertexId },
    /// Rule 3: the between-interval backward arcs of a safe partition were
    /// reversed; `cuts` are the partition's cut positions at that point.
    SafePartition { cuts: Vec<usize>, arcs: Vec<(VertexId, VertexId)>, k_delta: u64 },
    /// Rule 4: the out-to-in arcs around a transitive module were reversed.
    ModuleArcs { module: Vec<VertexId>, arcs: Vec<(VertexId, VertexId)>, k_delta: u64 },
}

impl TraceOp {
    pub fn rule_id(&self) -> u8 {
        match self {
            TraceOp::DeleteVertex { .. } => 1,
            TraceOp::ReverseArc { .. } => 2,
            TraceOp::SafePartition { .. } => 3,
            TraceOp::ModuleArcs { .. } => 4,
        }
    }

    pub fn k_delta(&self) -> u64 {
        match self {
            TraceOp::DeleteVertex { .. } => 0,
            TraceOp::ReverseArc { .. } => 1,
            TraceOp::SafePartition { k_delta, .. } | TraceOp::ModuleArcs { k_delta, .. } => *k_delta,
        }
    }

}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub ops: Vec<TraceOp>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceParseError {
    #[error("line {0}: {1}")]
    Bad(usize, String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("vertex {0} not present in the instance")]
    MissingVertex(VertexId),
    #[error("arc {0} -> {1} not present with the recorded orientation")]
    ArcMismatch(VertexId, VertexId),
}

fn write_arc_list(out: &mut String, arcs: &[(VertexId, VertexId)]) {
    for (idx, (tail, head)) in arcs.iter().enumerate() {
        if idx > 0 {
            out.push(',');
        }
        out.push_str(&format!("{tail}->{head}"));
    }
}

fn parse_arc_list(s: &str, line: usize) -> Result<Vec<(VertexId, VertexId)>, TraceParseError> {
    s.split(',')
        .map(|part| {
            let (tail, head) = part
                .split_once("->")
                .ok_or_else(|| TraceParseError::Bad(line, format!("bad arc '{part}'")))?;
            let tail = tail.parse().map_err(|_| TraceParseError::Bad(line, format!("bad arc '{part}'")))?;
            let head = head.parse().map_err(|_| TraceParseError::Bad(line, format!("bad arc '{part}'")))?;
            Ok((tail, head))
        })
        .collect()
}

fn parse_num_list<T: std::str::FromStr>(s: &str, line: usize) -> Result<Vec<T>, TraceParseError> {
    s.split(',')
        .map(|part| part.parse::<T>().map_err(|_| TraceParseError::Bad(line, format!("bad number '{part}'"))))
        .collect()
}

impl ReductionTrace {
    pub fn push(&mut self, op: TraceOp) {
        self.ops.push(op);
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Sum of parameter decrements over the whole trace.
    pub fn total_k_delta(&self) -> u64 {
        self.ops.iter().map(|op| op.k_delta()).sum()
    }

    /// All arcs reversed across the trace, in application order.
    pub fn reversed_arcs(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for op in &self.ops {
            match op {
                TraceOp::DeleteVertex { .. } => {}
                TraceOp::ReverseArc { tail, head } => out.push((*tail, *head)),
                TraceOp::SafePartition { arcs, .. } | TraceOp::ModuleArcs { arcs, .. } => {
                    out.extend_from_slice(arcs)
                }
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for op in &self.ops {
            match op {
                TraceOp::DeleteVertex { vertex } => {
                    out.push_str(&format!("rule=1 vertex={vertex} kdelta=0\n"));
                }
                TraceOp::ReverseArc { tail, head } => {
                    out.push_str(&format!("rule=2 arc={tail}->{head} kdelta=1\n"));
                }
                TraceOp::SafePartition { cuts, arcs, k_delta } => {
                    out.push_str("rule=3 cuts=");
                    out.push_str(&cuts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
                    out.push_str(" arcs=");
                    write_arc_list(&mut out, arcs);
                    out.push_str(&format!(" kdelta={k_delta}\n"));
                }
                TraceOp::ModuleArcs { module, arcs, k_delta } => {
                    out.push_str("rule=4 module=");
                    out.push_str(&module.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
                    out.push_str(" arcs=");
                    write_arc_list(&mut out, arcs);
                    out.push_str(&format!(" kdelta={k_delta}\n"));
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<ReductionTrace, TraceParseError> {
        let mut ops = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let mut fields = std::collections::HashMap::new();
            for token in raw.split_whitespace() {
                let (key, value) = token
                    .split_once('=')
                    .ok_or_else(|| TraceParseError::Bad(line, format!("bad token '{token}'")))?;
                fields.insert(key, value);
            }
            let get = |key: &str| {
                fields
                    .get(key)
                    .copied()
                    .ok_or_else(|| TraceParseError::Bad(line, format!("missing field '{key}'")))
            };
            let rule = get("rule")?;
            let op = match rule {
                "1" => TraceOp::DeleteVertex {
                    vertex: get("vertex")?
                        .parse()
                        .map_err(|_| TraceParseError::Bad(line, "bad vertex".into()))?,
                },
                "2" => {
                    let arcs = parse_arc_list(get("arc")?, line)?;
                    if arcs.len() != 1 {
                        return Err(TraceParseError::Bad(line, "rule 2 reverses one arc".into()));
                    }
                    TraceOp::ReverseArc { tail: arcs[0].0, head: arcs[0].1 }
                }
                "3" => TraceOp::SafePartition {
                    cuts: parse_num_list(get("cuts")?, line)?,
                    arcs: parse_arc_list(get("arcs")?, line)?,
                    k_delta: get("kdelta")?
                        .parse()
                        .map_err(|_| TraceParseError::Bad(line, "bad kdelta".into()))?,
                },
                "4" => TraceOp::ModuleArcs {
                    module: parse_num_list(get("module")?, line)?,
                    arcs: parse_arc_list(get("arcs")?, line)?,
                    k_delta: get("kdelta")?
                        .parse()
                        .map_err(|_| TraceParseError::Bad(line, "bad kdelta".into()))?,
                },
                other => return Err(TraceParseError::Bad(line, format!("unknown rule '{other}'"))),
            };
            ops.push(op);
        }
        Ok(ReductionTrace { ops })
    }
}

/// Applies a trace to the instance it was recorded from, reproducing the
/// kernel bit-exactly. Labels or arc orientations that fail to line up
/// signal a trace/instance mismatch.
pub fn replay_trace(t: &Tournament, trace: &ReductionTrace) -> Result<Tournament, ReplayError> {
    let mut current = t.clone();
    for op in &trace.ops {
        match op {
            TraceOp::DeleteVertex { vertex } => {
                let idx = current
                    .index_of_label(*vertex)
                    .ok_or(ReplayError::MissingVertex(*vertex))?;
                current = current.delete_vertices(&[idx]);
            }
            TraceOp::ReverseArc { tail, head } => {
                reverse_by_label(&mut current, *tail, *head)?;
            }
            TraceOp::SafePartition { arcs, .. } | TraceOp::ModuleArcs { arcs, .. } => {
                for &(tail, head) in arcs {
                    reverse_by_label(&mut current, tail, head)?;
                }
            }
        }
    }
    Ok(current)
}

fn reverse_by_label(t: &mut Tournament, tail: VertexId, head: VertexId) -> Result<(), ReplayError> {
    let u = t.index_of_label(tail).ok_or(ReplayError::MissingVertex(tail))?;
    let v = t.index_of_label(head).ok_or(ReplayError::MissingVertex(head))?;
    if !t.has_arc(u, v) {
        return Err(ReplayError::ArcMismatch(tail, head));
    }
    t.reverse_arc(u, v).expect("checked above");
    Ok(())
}
