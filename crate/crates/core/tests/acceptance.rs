//! Acceptance suite. Each criterion runs in sequence inside one test so the
//! timing-sensitive scaling check is not disturbed by sibling tests; one
//! PASS/FAIL line is printed per criterion (`cargo test --test acceptance --
//! --nocapture` to see them).

mod common;

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sepool::bench::run_bench;
use sepool::entropy::{delta_merge, delta_remove, one_dimensional_entropy, structural_entropy};
use sepool::graph::{make_grid, make_ring, FeatureMatrix, Graph};
use sepool::pooling::{
    assignments_from_tree, pool, round_trip_mse, Aggregation, ClusterAssignment, PoolingLevel,
};
use sepool::tree::{
    brute_force_optimal, build_coding_tree, build_coding_tree_traced, BuildOptions, CodingTree,
    NodeId, Stage, Step, TreeBuilder,
};

use common::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Criterion 1: Entropy matches a naive summation on 1000 random (graph, tree) pairs.
fn entropy_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for trial in 0..1000 {
        let n = rng.gen_range(2..=30);
        let p = rng.gen_range(0.05..0.6);
        let g = random_small_graph(&mut rng, n, p, trial % 2 == 0);
        let t = random_tree(&g, &mut rng);
        let fast = structural_entropy(&g, &t).map_err(|e| e.to_string())?.total;
        let slow = naive_entropy(&g, &t);
        let err = (fast - slow).abs();
        worst = worst.max(err);
        ensure(err < 1e-9, || format!("trial {trial}: {fast} vs naive {slow}"))?;
    }
    Ok(format!("1000 pairs, max |diff| = {worst:.2e}"))
}

/// Criterion 2: Every FILL leaves the entropy unchanged to 1e-12.
fn fill_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut fills = 0usize;
    let mut worst: f64 = 0.0;
    for trial in 0..200 {
        let n = rng.gen_range(4..=40);
        let g = random_connected_graph(&mut rng, n, 0.12, |r| if trial % 2 == 0 { 1.0 } else { r.gen_range(0.5..3.0) });
        let k = rng.gen_range(2..=5);
        let mut b = TreeBuilder::new(&g, k, BuildOptions::default()).map_err(|e| e.to_string())?;
        loop {
            let before = if b.stage() == Stage::Merge && b.tree().child_count(b.tree().root()) > 2 {
                None
            } else {
                Some(structural_entropy(&g, b.tree()).unwrap().total)
            };
            let Some(step) = b.step() else { break };
            if let (Step::Fill { .. }, Some(before)) = (step, before) {
                let after = structural_entropy(&g, b.tree()).unwrap().total;
                let d = (after - before).abs();
                worst = worst.max(d);
                fills += 1;
                ensure(d < 1e-12, || format!("trial {trial}: fill changed entropy by {d:e}"))?;
            }
        }
    }
    ensure(fills > 0, || "no FILL was exercised".into())?;
    Ok(format!("{fills} fills, max |dH| = {worst:.2e}"))
}

/// Criterion 3: Greedy is never below the exhaustive optimum and matches it often.
fn greedy_vs_optimal() -> Outcome {
    let mut instances = 0usize;
    let mut exact = 0usize;
    let (mut k2_instances, mut k2_exact) = (0usize, 0usize);
    let mut worst_gap: f64 = 0.0;
    for n in 2..=5 {
        for g in connected_graphs(n) {
            for k in [1usize, 2] {
                let greedy = if k == 1 {
                    one_dimensional_entropy(&g).unwrap()
                } else {
                    let t = build_coding_tree(&g, k).unwrap();
                    structural_entropy(&g, &t).unwrap().total
                };
                let (_, optimal) = brute_force_optimal(&g, k).unwrap();
                let gap = greedy - optimal;
                ensure(gap >= -1e-9, || format!("greedy {greedy} below optimum {optimal} (n={n}, k={k})"))?;
                instances += 1;
                worst_gap = worst_gap.max(gap);
                if gap < 1e-9 {
                    exact += 1;
                }
                if k == 2 {
                    k2_instances += 1;
                    k2_exact += usize::from(gap < 1e-9);
                }
            }
        }
    }
    let ratio = exact as f64 / instances as f64;
    ensure(ratio >= 0.6, || format!("greedy optimal on only {:.1}% of instances", 100.0 * ratio))?;
    Ok(format!(
        "{instances} instances, optimal on {:.1}% (k=2: {k2_exact}/{k2_instances}), max gap {worst_gap:.4}",
        100.0 * ratio
    ))
}

fn exhaustive_merge(g: &Graph, t: &CodingTree) -> (NodeId, NodeId) {
    let kids: Vec<NodeId> = t.children(t.root()).collect();
    let mut best: Option<(f64, (usize, usize), NodeId, NodeId)> = None;
    for i in 0..kids.len() {
        for j in i + 1..kids.len() {
            let d = delta_merge(g, t, kids[i], kids[j]).unwrap();
            let key = (t.min_leaf(kids[i]), t.min_leaf(kids[j]));
            let better = match best {
                None => true,
                Some((bd, bk, _, _)) => d > bd || (d == bd && key < bk),
            };
            if better {
                best = Some((d, key, kids[i], kids[j]));
            }
        }
    }
    let (_, _, a, b) = best.unwrap();
    (a, b)
}

fn exhaustive_remove(g: &Graph, t: &CodingTree) -> NodeId {
    t.internal_nodes()
        .map(|v| (delta_remove(g, t, v).unwrap(), t.min_leaf(v), v))
        .min_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)))
        .unwrap()
        .2
}

/// Criterion 4: Each stage-1 merge is the exhaustive argmax and each stage-2 removal
/// the exhaustive argmin, under the documented tie-breaks.
fn stage_optimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let (mut merges, mut removes) = (0usize, 0usize);
    for trial in 0..100 {
        let n = rng.gen_range(3..=30);
        let g = if trial % 4 == 3 {
            random_small_graph(&mut rng, n, 0.08, false)
        } else {
            let p = rng.gen_range(0.0..0.3);
            random_connected_graph(&mut rng, n, p, |_| 1.0)
        };
        let k = rng.gen_range(2..=4);
        let mut b = TreeBuilder::new(&g, k, BuildOptions::default()).map_err(|e| e.to_string())?;
        loop {
            let t = b.tree();
            let expect_merge = b.stage() == Stage::Merge && t.child_count(t.root()) > 2;
            let expect_remove = !expect_merge
                && matches!(b.stage(), Stage::Merge | Stage::Remove)
                && t.height() > k;
            let want_merge = expect_merge.then(|| exhaustive_merge(&g, t));
            let want_remove = expect_remove.then(|| exhaustive_remove(&g, t));
            match b.step() {
                None => break,
                Some(Step::Merge { a, b: bb, .. }) => {
                    let (wa, wb) = want_merge.ok_or("unexpected merge")?;
                    let got = (a.min(bb), a.max(bb));
                    ensure(got == (wa.min(wb), wa.max(wb)), || {
                        format!("trial {trial}: merged {got:?}, exhaustive argmax {wa:?},{wb:?}")
                    })?;
                    merges += 1;
                }
                Some(Step::Remove { node, .. }) => {
                    let want = want_remove.ok_or("unexpected remove")?;
                    ensure(node == want, || format!("trial {trial}: removed {node}, exhaustive argmin {want}"))?;
                    removes += 1;
                }
                Some(_) => {
                    ensure(want_merge.is_none() && want_remove.is_none(), || {
                        format!("trial {trial}: expected a merge/remove step")
                    })?;
                }
            }
        }
        let trace = b.trace().clone();
        ensure(trace.removes <= trace.internal_after_merge, || {
            format!("trial {trial}: {} removals from {} internal nodes", trace.removes, trace.internal_after_merge)
        })?;
    }
    Ok(format!("{merges} merges and {removes} removals checked"))
}

/// Criterion 5: Building a relabeled graph yields the relabeled partitions at every
/// level when the build had no ties.
fn permutation_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut levels_checked = 0usize;
    for trial in 0..100 {
        let n = rng.gen_range(6..=40);
        let g = random_connected_graph(&mut rng, n, 0.1, |r| r.gen_range(0.5..2.0));
        let k = rng.gen_range(2..=4);
        let (t, trace) = build_coding_tree_traced(&g, k).unwrap();
        ensure(trace.tie_free(), || format!("trial {trial}: continuous weights produced {} ties", trace.ties))?;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let gp = g.relabeled(&perm).unwrap();
        let (tp, trace_p) = build_coding_tree_traced(&gp, k).unwrap();
        ensure(trace_p.tie_free(), || format!("trial {trial}: permuted build had ties"))?;
        for depth in 1..k {
            let mut mapped: Vec<Vec<usize>> = t
                .partition_at_depth(depth)
                .into_iter()
                .map(|b| {
                    let mut b: Vec<usize> = b.into_iter().map(|v| perm[v]).collect();
                    b.sort_unstable();
                    b
                })
                .collect();
            mapped.sort();
            ensure(mapped == tp.partition_at_depth(depth), || {
                format!("trial {trial}: depth {depth} partitions differ after relabeling")
            })?;
            levels_checked += 1;
        }
    }
    Ok(format!("100 graphs, {levels_checked} levels matched"))
}

fn check_pooling(g: &Graph, t: &CodingTree, integer: bool) -> Result<(), String> {
    let s = assignments_from_tree(t).map_err(|e| e.to_string())?;
    let mut level = PoolingLevel::from_graph(g, None).unwrap();
    let total = level.adjacency.sum();
    for si in &s {
        let dense = si.to_dense();
        for j in 0..si.cols() {
            let col: f64 = dense.iter().map(|r| r[j]).sum();
            ensure(col == 1.0, || format!("column {j} of S_{} is not one-hot", si.level()))?;
        }
        // S^T S is the same-cluster indicator
        for a in 0..si.cols() {
            for b in 0..si.cols() {
                let v: f64 = dense.iter().map(|r| r[a] * r[b]).sum();
                let want = if si.cluster_of(a) == si.cluster_of(b) { 1.0 } else { 0.0 };
                ensure(v == want, || "S^T S entry mismatch".into())?;
            }
        }
        // S S^T = diag(cluster sizes)
        let sizes = si.cluster_sizes();
        for p in 0..si.rows() {
            for q in 0..si.rows() {
                let v: f64 = (0..si.cols()).map(|j| dense[p][j] * dense[q][j]).sum();
                let want = if p == q { sizes[p] as f64 } else { 0.0 };
                ensure(v == want, || "S S^T is not diagonal".into())?;
            }
        }
        level = pool(&level, si).map_err(|e| e.to_string())?;
        let sum = level.adjacency.sum();
        if integer {
            ensure(sum == total, || format!("volume {sum} != {total}"))?;
        } else {
            ensure((sum - total).abs() <= 1e-9 * total, || format!("volume {sum} != {total}"))?;
        }
        ensure(level.adjacency.max_asymmetry() <= 1e-12, || "pooled adjacency not symmetric".into())?;
    }
    let mut all = s[0].clone();
    for si in &s[1..] {
        all = si.compose(&all).unwrap();
    }
    ensure(all.rows() == 1 && all.cols() == g.node_count(), || "composition is not 1 x n".into())
}

/// Criterion 6: Volume conservation, symmetry, one-hot columns and the S^T S / S S^T
/// structure across every build below.
fn pooling_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut checked = 0;
    for trial in 0..60 {
        let n = rng.gen_range(3..=30);
        let g = random_connected_graph(&mut rng, n, 0.15, |r| r.gen_range(1..=5) as f64);
        for k in 2..=4 {
            let t = build_coding_tree(&g, k).unwrap();
            check_pooling(&g, &t, true).map_err(|e| format!("trial {trial}, k={k}: {e}"))?;
            checked += 1;
        }
    }
    for (g, _) in [make_ring(64).unwrap(), make_grid(8, 8).unwrap(), make_grid(5, 4).unwrap()] {
        for k in 2..=3 {
            check_pooling(&g, &build_coding_tree(&g, k).unwrap(), true)?;
            checked += 1;
        }
    }
    for trial in 0..20 {
        let g = random_connected_graph(&mut rng, 25, 0.1, |r| r.gen_range(0.1..3.0));
        check_pooling(&g, &build_coding_tree(&g, 3).unwrap(), false)
            .map_err(|e| format!("real-weighted trial {trial}: {e}"))?;
        checked += 1;
    }
    Ok(format!("{checked} hierarchies checked"))
}

fn random_like(s: &ClusterAssignment, rng: &mut ChaCha8Rng) -> ClusterAssignment {
    let mut order: Vec<usize> = (0..s.cols()).collect();
    order.shuffle(rng);
    let mut assign = vec![0; s.cols()];
    let mut it = order.into_iter();
    for (c, size) in s.cluster_sizes().into_iter().enumerate() {
        for v in it.by_ref().take(size) {
            assign[v] = c;
        }
    }
    ClusterAssignment::new(s.level(), s.rows(), assign).unwrap()
}

fn dominance(name: &str, g: &Graph, x: &FeatureMatrix, rng: &mut ChaCha8Rng) -> Outcome {
    let k = 2;
    let t = build_coding_tree(g, k).unwrap();
    let s = assignments_from_tree(&t).unwrap();
    let sep = sepool::pooling::reconstruct_metric(g, x, k, Aggregation::Mean).unwrap();
    let direct = round_trip_mse(x, &s[..1], Aggregation::Mean).unwrap();
    ensure((sep - direct).abs() < 1e-15, || "reconstruct_metric disagrees with its tree".into())?;
    let mut baseline: Vec<f64> = (0..100)
        .map(|_| round_trip_mse(x, &[random_like(&s[0], rng)], Aggregation::Mean).unwrap())
        .collect();
    baseline.sort_by(f64::total_cmp);
    let med = median(&baseline);
    let iqr = quantile(&baseline, 0.75) - quantile(&baseline, 0.25);
    ensure(med - sep >= 2.0 * iqr && sep < med, || {
        format!("{name}: SEP mse {sep:.4}, random median {med:.4}, IQR {iqr:.4}")
    })?;
    Ok(format!("{name}: {} clusters, SEP {sep:.4} vs median {med:.4} (IQR {iqr:.4})", s[0].rows()))
}

/// Criterion 7: Centroid reconstruction through the SEP hierarchy beats random
/// partitions with the same cluster sizes by at least two IQRs.
fn reconstruction_dominance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let (ring, rx) = make_ring(64).unwrap();
    let (grid, gx) = make_grid(8, 8).unwrap();
    let a = dominance("ring-64", &ring, &rx, &mut rng)?;
    let b = dominance("grid-8x8", &grid, &gx, &mut rng)?;
    Ok(format!("{a}; {b}"))
}

/// Criterion 8: Build time grows near-linearly in the edge count.
fn scaling() -> Outcome {
    let report = run_bench(&[1000, 2000, 4000, 8000, 16000], 8.0, 2024, 3, 3).map_err(|e| e.to_string())?;
    let table: Vec<String> = report
        .rows
        .iter()
        .map(|r| format!("n={} m={} {:.1}ms", r.n, r.m, 1e3 * r.seconds))
        .collect();
    ensure((0.8..=1.5).contains(&report.slope), || {
        format!("slope {:.3} outside [0.8, 1.5]: {}", report.slope, table.join(", "))
    })?;
    Ok(format!("slope {:.3}; {}", report.slope, table.join(", ")))
}

/// Criterion 9: Tree JSON is byte-identical across repeated builds.
fn determinism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut inputs: Vec<Graph> = vec![make_ring(64).unwrap().0, make_grid(8, 8).unwrap().0];
    inputs.push(Graph::from_edges(7, [(0, 1, 1.0), (2, 3, 1.0), (4, 5, 1.0), (5, 6, 1.0)]).unwrap());
    for _ in 0..30 {
        let n = rng.gen_range(3..=60);
        let weighted = rng.gen_bool(0.5);
        inputs.push(random_small_graph(&mut rng, n, 0.1, weighted));
    }
    for (i, g) in inputs.iter().enumerate() {
        for k in 2..=4 {
            let a = build_coding_tree(g, k).unwrap().to_json().unwrap();
            let b = build_coding_tree(g, k).unwrap().to_json().unwrap();
            ensure(a == b, || format!("input {i}, k={k}: JSON differs between runs"))?;
        }
    }
    Ok(format!("{} inputs x 3 heights identical", inputs.len()))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 entropy oracle equivalence", entropy_oracle_equivalence, Duration::from_secs(10)),
        ("2 fill leaves entropy unchanged", fill_invariance, Duration::from_secs(10)),
        ("3 greedy vs exhaustive optimum", greedy_vs_optimal, Duration::from_secs(120)),
        ("4 stage-1/stage-2 selection optimality", stage_optimality, Duration::from_secs(60)),
        ("5 permutation invariance (tie-free)", permutation_invariance, Duration::from_secs(60)),
        ("6 pooling algebra", pooling_algebra, Duration::from_secs(60)),
        ("7 reconstruction dominance", reconstruction_dominance, Duration::from_secs(30)),
        ("8 near-linear scaling", scaling, Duration::from_secs(120)),
        ("9 deterministic tree JSON", determinism, Duration::from_secs(60)),
    ];
    let mut failed = Vec::new();
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= limit {
                Ok(msg)
            } else {
                Err(format!("{msg}; took {elapsed:.1?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(msg) => println!("PASS [{name}] ({elapsed:.2?}) {msg}"),
            Err(msg) => {
                println!("FAIL [{name}] ({elapsed:.2?}) {msg}");
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
