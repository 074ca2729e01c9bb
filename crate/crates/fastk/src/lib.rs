//! Kernelization toolkit for the feedback arc set problem on tournaments.
//!
//! A tournament is a complete oriented graph: every pair of vertices is
//! joined by exactly one directed arc. Given a tournament and a budget `k`,
//! the decision problem asks whether reversing (equivalently, removing) at
//! most `k` arcs makes the tournament acyclic. This crate provides:
//!
//! * [`tournament`] — bit-matrix tournaments, orderings, interval partitions;
//! * [`exact`] — an exact minimum feedback arc set solver (subset DP);
//! * [`heuristics`] — cheap orderings (in-degree sort, randomized pivot
//!   partition, single-vertex local search) that stand in for an
//!   approximation scheme;
//! * [`rules`] — the triangle-free-vertex, heavy-arc and transitive-module
//!   reduction rules;
//! * [`certify`] — backward-weighted orderings, interval contraction, and
//!   arc-disjoint certificate families for backward arcs;
//! * [`safepart`] — safe interval partitions and the reduction that reverses
//!   all between-interval backward arcs;
//! * [`kernelize`] — the two kernelization drivers, the end-to-end decision
//!   procedure, and trace replay;
//! * [`instance`] — the text instance format and seeded generators.
//!
//! The `fastk` binary exposes `gen`, `kernelize`, `solve` and `verify`
//! subcommands on top of these modules.

pub mod certify;
pub mod exact;
pub mod heuristics;
pub mod instance;
pub mod kernelize;
pub mod rules;
pub mod safepart;
pub mod tournament;
pub mod trace;

pub use certify::{BackwardWeightedTournament, CertificateFamily, IntervalClass, OmegaCertificate};
pub use exact::{fas_at_most, fas_exact, verify_reversal_acyclic, ExactResult};
pub use heuristics::{best_feedback_ordering, HeuristicConfig, HeuristicKind, HeuristicOrdering};
pub use instance::{generate, parse_instance, serialize_instance, GeneratorKind, GeneratorSpec};
pub use kernelize::{decide, kernel_linear, kernel_subquadratic, Decision, KernelResult, Verdict};
pub use safepart::{apply_rule3, find_safe_partition, SafePartition};
pub use tournament::{IntervalPartition, OrderedTournament, Tournament, VertexId};
pub use trace::{replay_trace, ReductionTrace, TraceOp};
