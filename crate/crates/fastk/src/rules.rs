//! Reduction rules on unweighted tournaments.
//!
//! * Rule 1 deletes vertices contained in no triangle; such a vertex lies on
//!   no cycle, so the optimum is unchanged.
//! * Rule 2 reverses an arc lying in more than `k` distinct triangles (the
//!   triangles pairwise share only that arc, so every small feedback arc set
//!   must contain it) and decreases `k` by one.
//! * Rule 4 looks at a maximal transitive module `M` with in-neighbor set `I`
//!   and out-neighbor set `O`; if the arcs `Z` from `O` to `I` number fewer
//!   than `|M|`, they can all be certified through distinct module vertices,
//!   so reversing `Z` and decreasing `k` by `|Z|` is exact.
//!
//! Rule functions return the reduced tournament plus enough detail to record
//! trace entries; a parameter that went negative signals a no-instance.

use crate::tournament::{Tournament, VertexId};

/// Outcome of running rule 2 to its fixpoint. `k_remaining < 0` marks a
/// no-instance.
#[derive(Clone, Debug)]
pub struct Rule2Outcome {
    pub tournament: Tournament,
    pub k_remaining: i64,
    /// Reversed arcs in application order, as labels with the orientation
    /// they had before reversal.
    pub reversed: Vec<(VertexId, VertexId)>,
}

/// One rule 4 firing: the module it used and the arcs it reversed.
#[derive(Clone, Debug)]
pub struct Rule4Application {
    pub module: Vec<VertexId>,
    pub reversed: Vec<(VertexId, VertexId)>,
}

#[derive(Clone, Debug)]
pub struct Rule4Outcome {
    pub tournament: Tournament,
    pub k_remaining: i64,
    pub applications: Vec<Rule4Application>,
}

/// Deletes every vertex contained in no triangle. Removing such a vertex
/// cannot create or destroy triangles among the others, so one batch per
/// scan suffices; the loop re-scans until stable anyway.
pub fn apply_rule1(t: &Tournament) -> (Tournament, Vec<VertexId>) {
    let mut current = t.clone();
    let mut deleted = Vec::new();
    loop {
        let free: Vec<usize> = (0..current.n()).filter(|&v| !current.vertex_in_triangle(v)).collect();
        if free.is_empty() {
            return (current, deleted);
        }
        deleted.extend(free.iter().map(|&v| current.label(v)));
        current = current.delete_vertices(&free);
    }
}

/// Reverses arcs lying in more than `k` triangles while any exist, reading
/// the threshold from the decremented parameter after each reversal.
pub fn apply_rule2(t: &Tournament, k: u64) -> Rule2Outcome {
    let mut current = t.clone();
    let mut k_remaining = k as i64;
    let mut reversed = Vec::new();
    'scan: loop {
        if k_remaining < 0 {
            break;
        }
        let n = current.n();
        for u in 0..n {
            for v in 0..n {
                if u == v || !current.has_arc(u, v) {
                    continue;
                }
                let triangles = current.triangles_through_arc(u, v).expect("arc present") as i64;
                if triangles > k_remaining {
                    reversed.push((current.label(u), current.label(v)));
                    current.reverse_arc(u, v).expect("arc present");
                    k_remaining -= 1;
                    continue 'scan;
                }
            }
        }
        break;
    }
    Rule2Outcome { tournament: current, k_remaining, reversed }
}

/// All inclusion-maximal vertex sets that are modules (every outside vertex
/// sees all members uniformly) and induce an acyclic subtournament.
///
/// Two vertices u, v lie in a common transitive module iff {u, v} is itself a
/// module: consecutive vertices of a transitive module's ordering form such
/// pairs, and overlapping transitive modules merge into transitive modules.
/// The maximal transitive modules are therefore exactly the connected
/// components of the pairwise-module relation, computed here by signature
/// comparison of out-neighborhoods.
pub fn find_maximal_transitive_modules(t: &Tournament) -> Vec<Vec<usize>> {
    let n = t.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, v: usize) -> usize {
        if parent[v] != v {
            let root = find(parent, parent[v]);
            parent[v] = root;
        }
        parent[v]
    }

    for u in 0..n {
        for v in u + 1..n {
            // {u, v} is a module iff their out-neighborhoods agree outside
            // the pair.
            let twins = (0..n)
                .filter(|&w| w != u && w != v)
                .all(|w| t.has_arc(u, w) == t.has_arc(v, w));
            if twins {
                let ru = find(&mut parent, u);
                let rv = find(&mut parent, v);
                if ru != rv {
                    parent[ru.max(rv)] = ru.min(rv);
                }
            }
        }
    }

    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for v in 0..n {
        let root = find(&mut parent, v);
        groups.entry(root).or_default().push(v);
    }
    let modules: Vec<Vec<usize>> = groups.into_values().collect();

    #[cfg(debug_assertions)]
    for module in &modules {
        debug_assert!(is_module(t, module));
        debug_assert!(t.delete_vertices(&complement(t.n(), module)).is_acyclic());
    }
    modules
}

#[cfg(debug_assertions)]
fn is_module(t: &Tournament, module: &[usize]) -> bool {
    let inside: std::collections::HashSet<usize> = module.iter().copied().collect();
    (0..t.n()).filter(|w| !inside.contains(w)).all(|w| {
        let first = t.has_arc(w, module[0]);
        module.iter().all(|&m| t.has_arc(w, m) == first)
    })
}

#[cfg(debug_assertions)]
fn complement(n: usize, module: &[usize]) -> Vec<usize> {
    let inside: std::collections::HashSet<usize> = module.iter().copied().collect();
    (0..n).filter(|v| !inside.contains(v)).collect()
}

/// Applies the transitive-module rule until no module yields a nonempty arc
/// set to reverse or the parameter runs out.
pub fn apply_rule4(t: &Tournament, k: u64) -> Rule4Outcome {
    let mut current = t.clone();
    let mut k_remaining = k as i64;
    let mut applications = Vec::new();
    'scan: loop {
        if k_remaining < 0 {
            break;
        }
        let modules = find_maximal_transitive_modules(&current);
        for module in &modules {
            if module.len() == current.n() {
                continue;
            }
            let inside: Vec<bool> = {
                let mut m = vec![false; current.n()];
                for &v in module {
                    m[v] = true;
                }
                m
            };
            // Outside vertices see the whole module uniformly.
            let rep = module[0];
            let (in_side, out_side): (Vec<usize>, Vec<usize>) = (0..current.n())
                .filter(|&w| !inside[w])
                .partition(|&w| current.has_arc(w, rep));
            let mut z = Vec::new();
            for &u in &out_side {
                for &v in &in_side {
                    if current.has_arc(u, v) {
                        z.push((u, v));
                    }
                }
            }
            if !z.is_empty() && z.len() < module.len() {
                let app = Rule4Application {
                    module: module.iter().map(|&v| current.label(v)).collect(),
                    reversed: z.iter().map(|&(u, v)| (current.label(u), current.label(v))).collect(),
                };
                for &(u, v) in &z {
                    current.reverse_arc(u, v).expect("arc present");
                }
                k_remaining -= z.len() as i64;
                applications.push(app);
                continue 'scan;
            }
        }
        break;
    }
    Rule4Outcome { tournament: current, k_remaining, applications }
}
