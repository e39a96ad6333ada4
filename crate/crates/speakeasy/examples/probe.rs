//! Scratch probe for convergence behavior (not part of the deliverable).

use speakeasy::benchgen::*;
use speakeasy::graph::{Edge, Graph, Partition};
use speakeasy::labelprop::*;
use speakeasy::metrics::nmi;

fn graph(n: usize, edges: &[(usize, usize, f64)]) -> Graph {
    Graph::new(
        n,
        edges
            .iter()
            .map(|&(src, dst, weight)| Edge { src, dst, weight })
            .collect(),
        false,
    )
    .unwrap()
}

fn two_cliques(k: usize, bridge: bool) -> Graph {
    let mut edges = Vec::new();
    for base in [0, k] {
        for i in 0..k {
            for j in (i + 1)..k {
                edges.push((base + i, base + j, 1.0));
            }
        }
    }
    if bridge {
        edges.push((0, k, 1.0));
    }
    graph(2 * k, &edges)
}

fn main() {
    // triangles
    let g = two_cliques(3, false);
    let mut ok = 0;
    let mut fail_seeds = Vec::new();
    for seed in 0..100 {
        let p = run(&g, &EngineParams::default().with_seed(seed)).unwrap();
        let want: Vec<usize> = vec![0, 0, 0, 1, 1, 1];
        if p.assignment() == want.as_slice() {
            ok += 1;
        } else {
            fail_seeds.push(seed);
        }
    }
    println!("triangles: {ok}/100; failing seeds: {:?}", &fail_seeds[..fail_seeds.len().min(5)]);

    // trace one failing seed
    if let Some(&seed) = fail_seeds.first() {
        let p = EngineParams::default().with_seed(seed);
        let mut s = init_state(&g, &p).unwrap();
        for it in 0..50 {
            let changed = step(&mut s, &g);
            if it >= 40 || it < 6 {
                let latests: Vec<u32> = (0..6).map(|v| s.latest_label(v)).collect();
                let bufs: Vec<Vec<u32>> = (0..6).map(|v| s.buffer(v).to_vec()).collect();
                println!("it {it:2} changed {changed} latest {latests:?} bufs {bufs:?}");
            }
        }
    }

    // 10-cliques with bridge
    let g = two_cliques(10, true);
    let mut ok = 0;
    for seed in 0..100 {
        let p = run(&g, &EngineParams::default().with_seed(seed)).unwrap();
        let want: Vec<usize> = (0..20).map(|v| v / 10).collect();
        if p.assignment() == want.as_slice() {
            ok += 1;
        }
    }
    println!("10-cliques+bridge: {ok}/100");

    // K4 any H: how long until all buffers share one label, if ever?
    let g4 = {
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in (i + 1)..4 {
                edges.push((i, j, 1.0));
            }
        }
        graph(4, &edges)
    };
    for h in [1, 3, 5] {
        let mut iters: Vec<i64> = Vec::new();
        for seed in 0..20 {
            let p = EngineParams {
                num_history_labels: h,
                ..EngineParams::default()
            }
            .with_seed(seed);
            let mut s = init_state(&g4, &p).unwrap();
            let mut hit = -1i64;
            for it in 0..3000 {
                step(&mut s, &g4);
                let first = s.buffer(0)[0];
                let same = (0..4).all(|v| s.buffer(v).iter().all(|&l| l == first));
                if same {
                    hit = it + 1;
                    break;
                }
            }
            iters.push(hit);
        }
        println!("K4 h={h} first all-same-buffer iter: {iters:?}");
    }

    // triangles: when does each failing seed first reach the ideal latest?
    let g = two_cliques(3, false);
    let mut firsts: Vec<i64> = Vec::new();
    for seed in 0..100 {
        let p = EngineParams::default().with_seed(seed);
        let mut s = init_state(&g, &p).unwrap();
        let mut hit = -1i64;
        for it in 0..3000 {
            step(&mut s, &g);
            let a = s.latest_label(0);
            let b = s.latest_label(3);
            let ok = (0..3).all(|v| s.latest_label(v) == a)
                && (3..6).all(|v| s.latest_label(v) == b)
                && a != b;
            if ok {
                hit = it + 1;
                break;
            }
        }
        firsts.push(hit);
    }
    let never = firsts.iter().filter(|&&x| x < 0).count();
    let late = firsts.iter().filter(|&&x| x > 45).count();
    println!("triangles: never-ideal {never}/100, ideal-after-45 {late}, max {:?}", firsts.iter().max());

    // K10 alone
    let k10 = two_cliques(10, false);
    let k10 = {
        let sel: std::collections::BTreeSet<usize> = (0..10).collect();
        k10.induced_subgraph(&sel).unwrap().0
    };
    let mut ok = 0;
    for seed in 0..50 {
        let part = run(&k10, &EngineParams::default().with_seed(seed)).unwrap();
        if part.num_communities() == 1 {
            ok += 1;
        }
    }
    println!("K10 alone: {ok}/50 single community");

    // acceptance 5 regime: 20 master seeds x R=100 replicates
    use speakeasy::consensus::*;
    let g = two_cliques(10, true);
    let want: Vec<usize> = (0..20).map(|v| v / 10).collect();
    let mut bad_master = 0;
    let mut min_within = u32::MAX;
    let mut max_cross = 0u32;
    for master in 0..20u64 {
        let e = replicate(&g, &EngineParams::default().with_seed(master), 100).unwrap();
        let rep = representative_partition(&e);
        if rep.assignment() != want.as_slice() {
            bad_master += 1;
        }
        let co = co_occurrence(&e);
        for i in 0..20 {
            for j in 0..20 {
                if i == j {
                    continue;
                }
                if want[i] == want[j] {
                    min_within = min_within.min(co.count(i, j));
                } else {
                    max_cross = max_cross.max(co.count(i, j));
                }
            }
        }
    }
    println!("acc5: bad representative {bad_master}/20, min within-clique co-occ {min_within}/100, max cross {max_cross}/100");

    // acceptance 9 regime: signed cross-clique edges, never merged
    let mut edges = Vec::new();
    for base in [0, 8] {
        for i in 0..8 {
            for j in (i + 1)..8 {
                edges.push((base + i, base + j, 1.0));
            }
        }
    }
    for i in 0..8 {
        edges.push((i, 8 + i, -1.0));
        edges.push((i, 8 + (i + 3) % 8, -1.0));
    }
    let g = graph(16, &edges);
    let mut merged = 0;
    for seed in 0..50 {
        let part = run(&g, &EngineParams::default().with_seed(seed)).unwrap();
        let mixed = (0..8).any(|i| (8..16).any(|j| part.community_of(i) == part.community_of(j)));
        if mixed {
            merged += 1;
        }
    }
    println!("acc9: merged-cliques runs {merged}/50");

    // locate the criterion-5 wandering replicate
    let g5 = two_cliques(10, true);
    let want: Vec<usize> = (0..20).map(|v| v / 10).collect();
    for master in 0..20u64 {
        for idx in 0..100 {
            let seed = replicate_seed(master, idx);
            let p = EngineParams::default().with_seed(seed);
            let part = run(&g5, &p).unwrap();
            let ok = (0..20).all(|v| {
                (0..20).all(|u| (part.community_of(u) == part.community_of(v)) == (want[u] == want[v]))
            });
            if !ok {
                println!(
                    "wanderer: master {master} idx {idx} seed {seed} -> {:?}",
                    part.assignment()
                );
                // does it resolve with more iterations?
                for t in [100, 200, 400] {
                    let p2 = EngineParams {
                        max_iterations: t,
                        ..p
                    };
                    let part2 = run(&g5, &p2).unwrap();
                    println!("  T={t}: {:?}", part2.assignment());
                }
            }
        }
    }

    // mu=0 exact recovery diagnosis
    use speakeasy::consensus::{co_occurrence, multi_community_nodes, replicate, representative_partition};
    let mut mu0_ok = 0;
    for seed in 0..20u64 {
        let spec = BenchmarkSpec {
            n: 250,
            avg_degree: 12.0,
            max_degree: 24,
            mu: 0.0,
            om: 1,
            min_community_size: 10,
            max_community_size: 30,
            seed,
            ..BenchmarkSpec::default()
        };
        let (g, truth, stats) = generate_with_stats(&spec).unwrap();
        let truth_part = Partition::from_labels(
            &(0..spec.n)
                .map(|v| truth.memberships_of(v)[0])
                .collect::<Vec<_>>(),
        );
        let params = EngineParams::default().with_seed(seed);
        let e = replicate(&g, &params, 20).unwrap();
        let rep = representative_partition(&e);
        let score = nmi(rep, &truth_part).unwrap();
        if (score - 1.0).abs() < 1e-12 {
            mu0_ok += 1;
        }
        if (score - 1.0).abs() > 1e-12 {
            println!(
                "mu0 seed {seed}: nmi {:.4}, true comms {}, found {}, sizes true {:?}",
                score,
                truth_part.num_communities(),
                rep.num_communities(),
                {
                    let mut s: Vec<usize> =
                        truth_part.communities().iter().map(|m| m.len()).collect();
                    s.sort_unstable();
                    s
                }
            );
            // which true communities shatter?
            for (c, members) in truth_part.communities().iter().enumerate() {
                let found: std::collections::BTreeSet<usize> =
                    members.iter().map(|&v| rep.community_of(v)).collect();
                if found.len() > 1 {
                    let deg: Vec<usize> = members.iter().map(|&v| g.degree(v)).collect();
                    println!(
                        "  true comm {c} (size {}, mean deg {:.1}) split into {} parts",
                        members.len(),
                        deg.iter().sum::<usize>() as f64 / deg.len() as f64,
                        found.len()
                    );
                }
            }
            let _ = stats;
        }
    }
    println!("mu0 exact recovery: {mu0_ok}/20");

    // acceptance 1 preview: paper LFR regime, consensus R=20
    let t0 = std::time::Instant::now();
    for mu in [0.1, 0.2, 0.3, 0.4, 0.5] {
        let mut scores = Vec::new();
        for inst in 0..10u64 {
            let spec = BenchmarkSpec {
                mu,
                om: 1,
                seed: 1000 + inst,
                ..BenchmarkSpec::default()
            };
            let (g, truth, _) = generate_with_stats(&spec).unwrap();
            let truth_part = Partition::from_labels(
                &(0..spec.n)
                    .map(|v| truth.memberships_of(v)[0])
                    .collect::<Vec<_>>(),
            );
            let params = EngineParams::default().with_seed(inst);
            let e = replicate(&g, &params, 20).unwrap();
            let rep = representative_partition(&e);
            scores.push(nmi(rep, &truth_part).unwrap());
        }
        let mean: f64 = scores.iter().sum::<f64>() / scores.len() as f64;
        let min = scores.iter().cloned().fold(f64::INFINITY, f64::min);
        println!("acc1 mu={mu}: mean nmi {mean:.4} min {min:.4}");
    }
    println!("acc1 preview took {:?}", t0.elapsed());

    // acceptance 2 preview: overlap regime
    use speakeasy::metrics::{f_multi, overlapping_nmi};
    let t0 = std::time::Instant::now();
    let mut onmis = Vec::new();
    let mut fmultis = Vec::new();
    let mut bridge_rates = Vec::new();
    for inst in 0..5u64 {
        let spec = BenchmarkSpec {
            mu: 0.1,
            om: 2,
            overlap_fraction: 0.1,
            avg_degree: 20.0,
            seed: 2000 + inst,
            ..BenchmarkSpec::default()
        };
        let (g, truth, _) = generate_with_stats(&spec).unwrap();
        let params = EngineParams::default().with_seed(inst);
        let e = replicate(&g, &params, 20).unwrap();
        let rep = representative_partition(&e);
        let co = co_occurrence(&e);
        let cover = multi_community_nodes(&co, rep, 5).unwrap();
        onmis.push(overlapping_nmi(&cover, &truth).unwrap());
        fmultis.push(f_multi(&cover, &truth).unwrap());
        let true_multi: Vec<usize> = truth.multi_nodes();
        let detected = true_multi.iter().filter(|&&v| cover.is_multi(v)).count();
        bridge_rates.push(detected as f64 / true_multi.len() as f64);
    }
    println!(
        "acc2: onmi {:?}\n  fmulti {:?}\n  bridge detection {:?}\n  took {:?}",
        onmis, fmultis, bridge_rates, t0.elapsed()
    );

    // distribution of bridge affinity to the minority home community
    {
        let spec = BenchmarkSpec {
            mu: 0.1,
            om: 2,
            overlap_fraction: 0.1,
            avg_degree: 20.0,
            seed: 2000,
            ..BenchmarkSpec::default()
        };
        let (g, truth, _) = generate_with_stats(&spec).unwrap();
        let params = EngineParams::default().with_seed(0);
        let e = replicate(&g, &params, 60).unwrap();
        let rep = representative_partition(&e);
        let co = co_occurrence(&e);
        // for each true bridge, affinity to each of its two true communities
        let mut minority: Vec<f64> = Vec::new();
        let true_members = truth.community_members();
        for v in truth.multi_nodes() {
            let mut affs: Vec<f64> = truth
                .memberships_of(v)
                .iter()
                .map(|c| {
                    let members = &true_members[c];
                    let vals: Vec<f64> = members
                        .iter()
                        .filter(|&&u| u != v)
                        .map(|&u| co.rate(v, u))
                        .collect();
                    vals.iter().sum::<f64>() / vals.len() as f64
                })
                .collect();
            affs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            minority.push(affs[0]);
        }
        minority.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let q = |p: f64| minority[(p * (minority.len() - 1) as f64) as usize];
        println!(
            "bridge minority-side affinity: p10 {:.3} p25 {:.3} p50 {:.3} p75 {:.3} p90 {:.3}; frac>=0.2: {:.2}",
            q(0.1), q(0.25), q(0.5), q(0.75), q(0.9),
            minority.iter().filter(|&&a| a >= 0.2).count() as f64 / minority.len() as f64
        );
        // the documented sensitivity knob: detection + metrics across maxCommunities
        for max_c in [5usize, 8, 10, 15] {
            let cover = multi_community_nodes(&co, rep, max_c).unwrap();
            let true_multi = truth.multi_nodes();
            let detected = true_multi.iter().filter(|&&v| cover.is_multi(v)).count();
            println!(
                "maxComm {max_c}: detection {:.2}, onmi {:.3}, fmulti {:.3}, predicted multi {}",
                detected as f64 / true_multi.len() as f64,
                overlapping_nmi(&cover, &truth).unwrap(),
                f_multi(&cover, &truth).unwrap(),
                cover.multi_nodes().len()
            );
        }
    }

    // block-model cohort behavior
    {
        use rand_chacha::ChaCha8Rng;
        use rand::SeedableRng;
        use rand::prelude::Distribution;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let normal = rand_distr::Normal::new(0.0, 0.1).unwrap();
        let n = 30;
        let block = |i: usize| if i < 15 { 0 } else { 1 };
        let mut mean = vec![vec![0.0; n]; n];
        let subs = 12;
        for _ in 0..subs {
            for i in 0..n {
                for j in (i + 1)..n {
                    let base = if block(i) == block(j) { 0.8 } else { 0.0 };
                    let v = base + normal.sample(&mut rng);
                    mean[i][j] += v / subs as f64;
                    mean[j][i] += v / subs as f64;
                }
            }
        }
        let g = speakeasy::io::graph_from_dense(&mean, true).unwrap();
        let mut split_runs = 0;
        let r = 40;
        let e = replicate(&g, &EngineParams::default().with_seed(2), r).unwrap();
        for part in e.partitions() {
            let blocks_ok = (0..15).all(|v| part.community_of(v) == part.community_of(0))
                && (15..30).all(|v| part.community_of(v) == part.community_of(15));
            if !blocks_ok {
                split_runs += 1;
                if split_runs < 3 {
                    println!("block split run: {:?} ({} comms)", part.assignment(), part.num_communities());
                }
            }
        }
        println!("block cohort: {split_runs}/{r} runs split a block");
    }

    // acceptance 6 regime: bridge node with equal weight to two 8-cliques
    let mut edges = Vec::new();
    for base in [0, 8] {
        for i in 0..8 {
            for j in (i + 1)..8 {
                edges.push((base + i, base + j, 1.0));
            }
        }
    }
    for u in 0..16 {
        edges.push((16, u, 1.0));
    }
    let g = graph(17, &edges);
    let mut both = 0;
    for master in 0..20u64 {
        let e = replicate(&g, &EngineParams::default().with_seed(master), 100).unwrap();
        let rep = representative_partition(&e);
        let co = co_occurrence(&e);
        let cover = multi_community_nodes(&co, rep, 5).unwrap();
        // bridge node 16 should belong to both clique communities
        let c0 = rep.community_of(0);
        let c1 = rep.community_of(8);
        let ms = cover.memberships_of(16);
        if c0 != c1 && ms.contains(&c0) && ms.contains(&c1) {
            both += 1;
        }
    }
    println!("acc6: bridge in both communities {both}/20");
}
