//! Acceptance suite: end-to-end guarantees checked against independent
//! oracles at desk scale. Each test prints one pass line with its timing;
//! run with `cargo test --test acceptance -- --nocapture` to see them.

use fastk::certify::{certify_all, validate_family, validate_family_for, BackwardWeightedTournament};
use fastk::exact::{fas_exact, verify_reversal_acyclic};
use fastk::heuristics::{HeuristicConfig, HeuristicKind};
use fastk::kernelize::{
    decide, kernel_linear, kernel_subquadratic, DecideConfig, Decision, KernelMode, KernelResult,
    Verdict,
};
use fastk::safepart::{family_uses_only_between_arcs, find_safe_partition};
use fastk::tournament::Tournament;
use fastk::trace::replay_trace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn random_tournament(rng: &mut ChaCha8Rng, n: usize) -> Tournament {
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(0.5) {
                arcs.push((i, j));
            } else {
                arcs.push((j, i));
            }
        }
    }
    Tournament::from_arcs(n, arcs).unwrap()
}

fn planted_tournament(rng: &mut ChaCha8Rng, n: usize, reversals: usize) -> Tournament {
    let mut t = Tournament::new_transitive(n);
    let mut chosen = std::collections::HashSet::new();
    while chosen.len() < reversals {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i < j && chosen.insert((i, j)) {
            t.reverse_arc(i, j).unwrap();
        }
    }
    t
}

/// Independent oracle: minimum feedback arc set size of an arbitrary digraph
/// by subset DP (vertex placed last pays its out-arcs into the rest).
fn digraph_fas(n: usize, arcs: &[(usize, usize)]) -> usize {
    assert!(n <= 20);
    let mut masks = vec![0u64; n];
    for &(u, v) in arcs {
        masks[u] |= 1 << v;
    }
    let full = (1usize << n) - 1;
    let mut dp = vec![u32::MAX; full + 1];
    dp[0] = 0;
    for set in 1..=full {
        let mut best = u32::MAX;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = set & !(1 << v);
            let cost = dp[without] + (masks[v] & without as u64).count_ones();
            best = best.min(cost);
        }
        dp[set] = best;
    }
    dp[full] as usize
}

/// Brute-force oracle: minimum backward arcs over all orderings.
fn permutation_fas(t: &Tournament) -> usize {
    fn rec(t: &Tournament, prefix: &mut Vec<usize>, used: &mut Vec<bool>, backward: usize, best: &mut usize) {
        let n = t.n();
        if backward >= *best {
            return;
        }
        if prefix.len() == n {
            *best = backward;
            return;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            let extra = prefix.iter().filter(|&&w| t.has_arc(v, w)).count();
            used[v] = true;
            prefix.push(v);
            rec(t, prefix, used, backward + extra, best);
            prefix.pop();
            used[v] = false;
        }
    }
    let mut best = usize::MAX;
    rec(t, &mut Vec::new(), &mut vec![false; t.n()], 0, &mut best);
    best
}

/// Instance on 2p+1 positions with total backward weight exactly p: a
/// full-span anchor arc of weight one plus p-1 units on interior pairs.
/// A smallest dense interval never contains an extreme position, so the
/// anchor survives every contraction of the partition search.
fn anchored_instance(rng: &mut ChaCha8Rng, p: u64) -> BackwardWeightedTournament {
    let n = (2 * p + 1) as usize;
    let mut cells: std::collections::BTreeMap<(usize, usize), u32> = Default::default();
    cells.insert((0, n - 1), 1);
    let mut remaining = p - 1;
    while remaining > 0 {
        let i = rng.random_range(1..n - 1);
        let j = rng.random_range(1..n - 1);
        if i >= j {
            continue;
        }
        let cell = cells.entry((i, j)).or_insert(0);
        if *cell >= 3 {
            continue;
        }
        *cell += 1;
        remaining -= 1;
    }
    let backward: Vec<(usize, usize, u32)> = cells.into_iter().map(|((i, j), w)| (i, j, w)).collect();
    BackwardWeightedTournament::from_backward_weights(n, &backward)
}

fn exact_heuristic() -> HeuristicConfig {
    HeuristicConfig { kind: HeuristicKind::Exact, ..Default::default() }
}

/// Shared check for criterion 9 hooks inside criteria 1-3.
fn assert_replay_matches(original: &Tournament, result: &KernelResult, context: &str) {
    let replayed = replay_trace(original, &result.trace)
        .unwrap_or_else(|e| panic!("{context}: replay failed: {e}"));
    assert!(replayed == result.kernel, "{context}: replay does not reproduce the kernel");
}

fn assert_lift_sound(original: &Tournament, k: u64, decision: &Decision, context: &str) {
    if let Decision::Yes { feedback_arcs } = decision {
        assert!(feedback_arcs.len() as u64 <= k, "{context}: lifted set exceeds k");
        let arcs: Vec<(usize, usize)> = feedback_arcs
            .iter()
            .map(|&(a, b)| {
                (
                    original.index_of_label(a).expect("label exists"),
                    original.index_of_label(b).expect("label exists"),
                )
            })
            .collect();
        assert!(
            verify_reversal_acyclic(original, &arcs).expect("arcs exist"),
            "{context}: lifted set does not acyclify under reversal"
        );
    }
}

/// Criterion 1: on 500 random tournaments with n in [4, 12], `decide` under
/// both drivers matches the exact oracle for k in {fas-1, fas, fas+1}.
#[test]
fn criterion_1_oracle_agreement() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    let mut runs = 0usize;
    for case in 0..500 {
        let n = rng.random_range(4..=12usize);
        let t = random_tournament(&mut rng, n);
        let fas = fas_exact(&t).unwrap().fas_size as i64;
        for delta in [-1i64, 0, 1] {
            let k = fas + delta;
            if k < 0 {
                continue;
            }
            let expect_yes = fas <= k;
            for mode in [KernelMode::Subquadratic, KernelMode::Linear { epsilon: 0.5 }] {
                let cfg = DecideConfig { mode, ..Default::default() };
                let decision = decide(&t, k as u64, &cfg).unwrap();
                let got_yes = matches!(decision, Decision::Yes { .. });
                assert_eq!(got_yes, expect_yes, "case {case} mode {mode:?} k {k} fas {fas}");
                assert_lift_sound(&t, k as u64, &decision, &format!("case {case} mode {mode:?}"));
                runs += 1;
            }
        }
    }
    println!(
        "criterion 1 (oracle agreement, 500 instances, {runs} decisions): PASS in {:.1?}",
        start.elapsed()
    );
}

/// Criterion 2: on 200 planted yes-instances with the exact oracle supplying
/// the feedback set, the linear driver ends with at most 2k vertices.
#[test]
fn criterion_2_linear_kernel_bound() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC2);
    for case in 0..200 {
        let n = rng.random_range(4..=12usize);
        let reversals = rng.random_range(0..=5usize).min(n * (n - 1) / 2);
        let t = planted_tournament(&mut rng, n, reversals);
        let k = fas_exact(&t).unwrap().fas_size as u64;
        let result = kernel_linear(&t, k, 0.5, &exact_heuristic(), &Default::default()).unwrap();
        assert_eq!(result.verdict, Verdict::Kernel, "case {case}");
        assert!(
            result.kernel.n() as u64 <= 2 * k,
            "case {case}: kernel has {} vertices, k = {k}",
            result.kernel.n()
        );
        assert_replay_matches(&t, &result, &format!("case {case}"));
    }
    println!("criterion 2 (linear kernel <= 2k on 200 planted yes-instances): PASS in {:.1?}", start.elapsed());
}

/// Criterion 3: on the same family, the subquadratic driver meets the
/// sqrt(4k^3 + 2k^2 - k) + 2k vertex bound and no backward arc of an optimal
/// kernel ordering is longer than 2k + 2.
#[test]
fn criterion_3_subquadratic_kernel_bound() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    for case in 0..200 {
        let n = rng.random_range(4..=12usize);
        let reversals = rng.random_range(0..=5usize).min(n * (n - 1) / 2);
        let t = planted_tournament(&mut rng, n, reversals);
        let k = fas_exact(&t).unwrap().fas_size as u64;
        let result = kernel_subquadratic(&t, k);
        assert_eq!(result.verdict, Verdict::Kernel, "case {case}");
        let k_rem = result.k_remaining as u64;
        let n_after = result.kernel.n() as u64;
        // n <= sqrt(4k^3 + 2k^2 - k) + 2k, compared integer-exactly
        let vertex_bound_ok =
            n_after <= 2 * k_rem || (n_after - 2 * k_rem).pow(2) <= 4 * k_rem.pow(3) + 2 * k_rem.pow(2) - k_rem;
        assert!(vertex_bound_ok, "case {case}: n={n_after} k={k_rem}");
        let max_len = result.stats.max_backward_len.expect("kernel fits the exact solver");
        assert!(
            max_len as u64 <= 2 * k_rem + 2,
            "case {case}: backward arc of length {max_len} with k={k_rem}"
        );
        assert_replay_matches(&t, &result, &format!("case {case}"));
    }
    println!(
        "criterion 3 (subquadratic bound + backward length <= 2k+2 on 200 instances): PASS in {:.1?}",
        start.elapsed()
    );
}

/// Criterion 4: rule exactness on every firing across 300 random instances.
/// Rule 1 preserves the optimum; rules 3 and 4 decrease it by exactly the
/// reversed weight; rule 2 decreases it by exactly 1 while the instance
/// stays feasible, and keeps no-instances infeasible.
#[test]
fn criterion_4_rule_exactness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
    let mut firings = 0usize;
    for case in 0..300 {
        let n = rng.random_range(4..=12usize);
        let t = if case % 3 == 0 {
            let reversals = rng.random_range(0..=5usize);
            planted_tournament(&mut rng, n, reversals)
        } else {
            random_tournament(&mut rng, n)
        };
        let fas = fas_exact(&t).unwrap().fas_size;

        // Rule 1 exactness.
        let (reduced, _) = fastk::rules::apply_rule1(&t);
        assert_eq!(fas_exact(&reduced).unwrap().fas_size, fas, "case {case}: rule 1 changed fas");

        // Rule 2 with k = fas: every firing removes exactly one unit.
        let out = fastk::rules::apply_rule2(&t, fas as u64);
        let mut step = t.clone();
        let mut prev = fas;
        for &(lu, lv) in &out.reversed {
            let u = step.index_of_label(lu).unwrap();
            let v = step.index_of_label(lv).unwrap();
            step.reverse_arc(u, v).unwrap();
            let now = fas_exact(&step).unwrap().fas_size;
            assert_eq!(now, prev - 1, "case {case}: rule 2 firing not exact");
            prev = now;
            firings += 1;
        }

        // Rule 2 on an infeasible budget must leave the instance infeasible.
        if fas > 0 {
            let out = fastk::rules::apply_rule2(&t, fas as u64 - 1);
            if out.k_remaining >= 0 {
                let after = fas_exact(&out.tournament).unwrap().fas_size as i64;
                assert!(after > out.k_remaining, "case {case}: no-instance became feasible");
            }
        }

        // Rule 4: every application removes exactly the reversed count.
        let out = fastk::rules::apply_rule4(&t, fas as u64 + 3);
        let mut step = t.clone();
        for app in &out.applications {
            let before = fas_exact(&step).unwrap().fas_size;
            for &(lu, lv) in &app.reversed {
                let u = step.index_of_label(lu).unwrap();
                let v = step.index_of_label(lv).unwrap();
                step.reverse_arc(u, v).unwrap();
            }
            let after = fas_exact(&step).unwrap().fas_size;
            assert_eq!(before - after, app.reversed.len(), "case {case}: rule 4 firing not exact");
            firings += 1;
        }

        // Rule 3 firings inside the linear driver, replayed step by step.
        let k = fas as u64;
        let result = kernel_linear(&t, k, 0.5, &exact_heuristic(), &Default::default()).unwrap();
        let mut step = t.clone();
        for op in &result.trace.ops {
            let before = fas_exact(&step).unwrap().fas_size as u64;
            step = replay_trace(&step, &fastk::trace::ReductionTrace { ops: vec![op.clone()] }).unwrap();
            let after = fas_exact(&step).unwrap().fas_size as u64;
            match op {
                fastk::trace::TraceOp::DeleteVertex { .. } => {
                    assert_eq!(before, after, "case {case}: deletion changed fas")
                }
                fastk::trace::TraceOp::SafePartition { k_delta, .. } => {
                    assert_eq!(before - after, *k_delta, "case {case}: rule 3 firing not exact");
                    firings += 1;
                }
                _ => {}
            }
        }
    }
    println!("criterion 4 (rule exactness, 300 instances, {firings} checked firings): PASS in {:.1?}", start.elapsed());
}

/// Criterion 5: 100 random backward-weighted instances (n <= 12, weights
/// <= 3) filtered to the density bound all certify and validate.
#[test]
fn criterion_5_certification() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC5);
    let mut accepted = 0;
    while accepted < 100 {
        let n = rng.random_range(3..=12usize);
        let mut backward = Vec::new();
        for i in 0..n {
            for j in i + 2..n {
                if rng.random_bool(1.0 / n as f64) {
                    backward.push((i, j, rng.random_range(1..=3u32)));
                }
            }
        }
        let tw = BackwardWeightedTournament::from_backward_weights(n, &backward);
        if tw.total_weight() == 0 {
            continue;
        }
        if certify_all(&tw).is_err() && tw.classify_interval(0..n).is_ok() {
            // density bound violated somewhere: filtered out
            let violated = (0..n).any(|s| {
                (s + 1..=n).any(|e| {
                    let w = tw.interval_weight(s..e).unwrap();
                    2 * w > (e - s - 1) as u64
                })
            });
            assert!(violated, "certification refused a bounded instance: {tw:?}");
            continue;
        }
        let family = certify_all(&tw).unwrap_or_else(|e| panic!("bounded instance rejected: {e}: {tw:?}"));
        assert!(validate_family(&tw, &family), "invalid family for {tw:?}");
        accepted += 1;
    }
    println!("criterion 5 (certification on 100 bounded weighted instances): PASS in {:.1?}", start.elapsed());
}

/// Criterion 6: 100 instances with |V| = 2p+1 and total weight exactly
/// p >= 1 yield a safe partition with a between-interval backward arc and a
/// family confined to between-interval arcs.
#[test]
fn criterion_6_safe_partition_guarantee() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC6);
    for case in 0..100 {
        let p = rng.random_range(1..=5u64);
        let tw = anchored_instance(&mut rng, p);
        assert_eq!(tw.n() as u64, 2 * p + 1);
        assert_eq!(tw.total_weight(), p);
        let sp = find_safe_partition(&tw, p).unwrap_or_else(|e| panic!("case {case}: {e}: {tw:?}"));
        assert!(!sp.between_backward.is_empty(), "case {case}");
        assert!(
            validate_family_for(&tw, &sp.family, &sp.between_backward),
            "case {case}: family invalid for {tw:?}"
        );
        assert!(family_uses_only_between_arcs(&tw, &sp), "case {case}: family leaves the between arcs");
    }
    println!("criterion 6 (safe partition guarantee on 100 instances): PASS in {:.1?}", start.elapsed());
}

/// Criterion 7: for every safe partition of criterion 6's family, the
/// optimum splits exactly across within-interval and between-interval arcs.
#[test]
fn criterion_7_fas_decomposition() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC6); // same family as criterion 6
    for case in 0..100 {
        let p = rng.random_range(1..=5u64);
        let tw = anchored_instance(&mut rng, p);
        let sp = find_safe_partition(&tw, p).unwrap();
        let t = tw.underlying_tournament();
        let n = t.n();
        let intervals = sp.partition.intervals();
        let interval_of = |pos: usize| intervals.iter().position(|r| r.contains(&pos)).unwrap();
        let mut within = Vec::new();
        let mut between = Vec::new();
        for (u, v) in t.arcs() {
            if interval_of(u) == interval_of(v) {
                within.push((u, v));
            } else {
                between.push((u, v));
            }
        }
        let total = digraph_fas(n, &within.iter().chain(between.iter()).copied().collect::<Vec<_>>());
        let inner = digraph_fas(n, &within);
        let outer = digraph_fas(n, &between);
        assert_eq!(total, inner + outer, "case {case}: decomposition fails on {tw:?}");
    }
    println!("criterion 7 (optimum decomposition across 100 safe partitions): PASS in {:.1?}", start.elapsed());
}

/// Criterion 8: the subset DP agrees with full permutation enumeration on 50
/// random instances with n <= 8.
#[test]
fn criterion_8_dp_self_check() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC8);
    for case in 0..50 {
        let n = rng.random_range(2..=8usize);
        let t = random_tournament(&mut rng, n);
        let dp = fas_exact(&t).unwrap().fas_size;
        assert_eq!(dp, permutation_fas(&t), "case {case}");
    }
    println!("criterion 8 (DP vs permutation enumeration, 50 instances): PASS in {:.1?}", start.elapsed());
}

/// Criterion 9: replay reproduces kernels bit-exactly and lifted yes-answers
/// acyclify the original instance within budget, across a fresh sample of
/// runs from both drivers. (Criteria 1-3 also perform these checks inline on
/// every run they make.)
#[test]
fn criterion_9_replay_and_lift_integrity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC9);
    for case in 0..200 {
        let n = rng.random_range(4..=12usize);
        let t = if case % 2 == 0 {
            random_tournament(&mut rng, n)
        } else {
            let reversals = rng.random_range(0..=5usize);
            planted_tournament(&mut rng, n, reversals)
        };
        let fas = fas_exact(&t).unwrap().fas_size as u64;

        let sub = kernel_subquadratic(&t, fas);
        assert_replay_matches(&t, &sub, &format!("case {case} subquadratic"));
        let lin = kernel_linear(&t, fas, 0.5, &exact_heuristic(), &Default::default()).unwrap();
        assert_replay_matches(&t, &lin, &format!("case {case} linear"));

        for mode in [KernelMode::Subquadratic, KernelMode::Linear { epsilon: 0.5 }] {
            let cfg = DecideConfig { mode, ..Default::default() };
            let decision = decide(&t, fas, &cfg).unwrap();
            assert!(matches!(decision, Decision::Yes { .. }), "case {case}: k = fas must be yes");
            assert_lift_sound(&t, fas, &decision, &format!("case {case} mode {mode:?}"));
        }
    }
    println!("criterion 9 (replay + lift integrity on 200 fresh runs): PASS in {:.1?}", start.elapsed());
}
