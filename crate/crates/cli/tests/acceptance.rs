//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode, Output};

use junction_core::kmeans::{exhaustive_kmeans_oracle, kmeans_best_of};
use junction_core::oracles::connected_components;
use junction_core::{
    build_adjacency, builtin_scenario, canonical_partition, cast_scan, count_zero_eigenvalues,
    detect_junctions, detect_on_scenario, eigendecompose, normalized_laplacian, DenseMatrix,
    DetectorParams, LaplacianMatrix, LidarConfig, Point2, PointCloud, SCENARIO_NAMES,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// 1. Every scenario, noise-free, 20 seeds: exact ground truth.
fn scenario_correctness() -> Verdict {
    let mut failures = Vec::new();
    for name in SCENARIO_NAMES {
        for seed in 0..20 {
            let (r, expected) = detect_on_scenario(name, &DetectorParams::default(), 0.0, seed)
                .map_err(|e| e.to_string())?;
            if r.num_junctions != expected {
                failures.push(format!(
                    "{name}/seed {seed}: {} != {expected}",
                    r.num_junctions
                ));
            }
        }
    }
    check(failures.is_empty(), || failures.join("; "))?;
    Ok(format!(
        "{} scenarios x 20 seeds, 0 failures",
        SCENARIO_NAMES.len()
    ))
}

/// 2. Radial noise 0.05 m: at least 95% correct over 100 trials per scenario.
fn noise_robustness() -> Verdict {
    let mut summary = Vec::new();
    let mut worst = 100;
    for name in SCENARIO_NAMES {
        let mut correct = 0;
        for seed in 0..100 {
            let (r, expected) =
                detect_on_scenario(name, &DetectorParams::default(), 0.05, 1000 + seed)
                    .map_err(|e| e.to_string())?;
            correct += usize::from(r.num_junctions == expected);
        }
        worst = worst.min(correct);
        summary.push(format!("{name} {correct}%"));
    }
    check(worst >= 95, || summary.join(", "))?;
    Ok(summary.join(", "))
}

/// Blobs of radius <= 1.5 m on a 10 m grid with <= 1 m jitter.
fn blob_cloud(rng: &mut impl Rng, blobs: usize, max_points: usize) -> (PointCloud, Vec<usize>) {
    let mut cells: Vec<(i32, i32)> = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).collect();
    cells.shuffle(rng);
    let per_blob = max_points / blobs;
    let mut points = Vec::new();
    let mut owner = Vec::new();
    for (b, &(ci, cj)) in cells.iter().take(blobs).enumerate() {
        let center = Point2::new(
            10.0 * ci as f64 + rng.random_range(-1.0..1.0),
            10.0 * cj as f64 + rng.random_range(-1.0..1.0),
        );
        let radius = rng.random_range(0.1..1.5);
        for _ in 0..rng.random_range(1..=per_blob) {
            let r = radius * rng.random::<f64>().sqrt();
            points.push(
                center + Point2::from_angle(rng.random_range(0.0..std::f64::consts::TAU)) * r,
            );
            owner.push(b);
        }
    }
    (PointCloud::new(points).unwrap(), owner)
}

/// 3. Zero-eigenvalue multiplicity equals the union-find component count.
fn spectral_combinatorial_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let trials = 500;
    let mut agree = 0;
    let mut max_n = 0;
    for t in 0..trials {
        let blobs = rng.random_range(1..=6);
        let (cloud, owner) = blob_cloud(&mut rng, blobs, 200);
        max_n = max_n.max(cloud.len());
        check(cloud.len() <= 200, || {
            format!("trial {t}: n = {}", cloud.len())
        })?;
        let pts = cloud.points();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if owner[i] != owner[j] {
                    check(pts[i].dist(pts[j]) >= 5.0, || {
                        format!("trial {t}: blob gap below 5 m")
                    })?;
                }
            }
        }
        let g = build_adjacency(&cloud, 1.5, 1e-8).map_err(|e| e.to_string())?;
        let oracle = connected_components(&g).count;
        let dec = eigendecompose(&normalized_laplacian(&g)).map_err(|e| e.to_string())?;
        let spectral = count_zero_eigenvalues(&dec, 1e-8);
        if spectral == oracle {
            agree += 1;
        }
    }
    check(agree == trials, || format!("{agree}/{trials} agree"))?;
    Ok(format!("{agree}/{trials} clouds agree (max n = {max_n})"))
}

/// 4. Eigensolver reconstruction, orthonormality and Laplacian spectral bounds.
fn eigensolver_quality() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut worst_rec, mut worst_orth) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let n = rng.random_range(1..=100);
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = rng.random_range(-1.0..1.0);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        let l = LaplacianMatrix::from_symmetric(m).map_err(|e| e.to_string())?;
        let dec = eigendecompose(&l).map_err(|e| e.to_string())?;
        worst_rec = worst_rec.max(dec.reconstruct().max_abs_diff(l.entries()));
        worst_orth = worst_orth.max(dec.orthonormality_error());
    }
    check(worst_rec <= 1e-8 && worst_orth <= 1e-8, || {
        format!("reconstruction {worst_rec:e}, orthonormality {worst_orth:e}")
    })?;

    let (mut lo, mut hi, mut first) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for _ in 0..100 {
        let n = rng.random_range(1..=100);
        let xy: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.random_range(-8.0..8.0), rng.random_range(-8.0..8.0)))
            .collect();
        let cloud = PointCloud::from_xy(&xy).unwrap();
        let l = normalized_laplacian(&build_adjacency(&cloud, 1.5, 1e-8).unwrap());
        let dec = eigendecompose(&l).map_err(|e| e.to_string())?;
        let ev = dec.eigenvalues();
        lo = lo.min(ev[0]);
        hi = hi.max(ev[n - 1]);
        first = first.max(ev[0].abs());
    }
    check(lo >= -1e-9 && hi <= 2.0 + 1e-9 && first <= 1e-9, || {
        format!("Laplacian spectrum [{lo:e}, {hi}], |λ1| max {first:e}")
    })?;
    Ok(format!(
        "reconstruction {worst_rec:.1e}, orthonormality {worst_orth:.1e}, Laplacian spectra in [{lo:.1e}, {hi:.6}], |λ1| <= {first:.1e}"
    ))
}

/// 5. Best-of-10 k-means vs exhaustive optimum; Lloyd monotonicity.
fn kmeans_optimality() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let trials: usize = 200;
    let mut hits = 0;
    for t in 0..trials {
        let n = rng.random_range(2..=8);
        let k = rng.random_range(1..=3usize.min(n));
        let dim = rng.random_range(1..=3);
        let rows = DenseMatrix::from_fn(n, dim, |_, _| rng.random_range(-2.0..2.0));
        let opt = exhaustive_kmeans_oracle(&rows, k).map_err(|e| e.to_string())?;
        let got = kmeans_best_of(&rows, k, 10, t as u64, 100).map_err(|e| e.to_string())?;
        let slack = 1e-9 * (1.0 + opt);
        check(got.objective >= opt - slack, || {
            format!("trial {t}: objective {} below optimum {opt}", got.objective)
        })?;
        for w in got.objective_trace.windows(2) {
            check(w[1] <= w[0] + 1e-12 * (1.0 + w[0]), || {
                format!("trial {t}: objective rose {} -> {}", w[0], w[1])
            })?;
        }
        hits += usize::from(got.objective <= opt + slack);
    }
    check(hits * 100 >= 95 * trials, || {
        format!("{hits}/{trials} optimal")
    })?;
    Ok(format!("{hits}/{trials} optimal, no undershoot, monotone"))
}

fn junction(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_junction"))
        .args(args)
        .output()
        .expect("junction binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn bench_mean(args: &[&str]) -> Result<(f64, usize), String> {
    let out = junction(args);
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    check(out.status.success(), || {
        format!("bench failed: {}", String::from_utf8_lossy(&out.stderr))
    })?;
    let field = |key: &str| {
        text.lines()
            .find_map(|l| l.strip_prefix(key))
            .map(|v| v.trim().trim_end_matches(" s").to_string())
            .ok_or_else(|| format!("no `{key}` in bench output"))
    };
    let mean: f64 = field("mean:")?.parse().map_err(|e| format!("{e}"))?;
    let points: usize = field("points:")?.parse().map_err(|e| format!("{e}"))?;
    Ok((mean, points))
}

/// 6. Mean runtime of a 360-point detection via `junction bench`.
fn runtime() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let env = dir.path().join("room.env");
    let scan = dir.path().join("room.csv");
    fs::write(
        &env,
        "wall -5 -5 5 -5\nwall 5 -5 5 5\nwall 5 5 -5 5\nwall -5 5 -5 -5\n",
    )
    .unwrap();
    let sim = junction(&[
        "simulate",
        "--env",
        path_str(&env),
        "--out",
        path_str(&scan),
    ]);
    check(sim.status.success(), || "simulate failed".into())?;

    let (mean, points) = bench_mean(&[
        "bench",
        "--input",
        path_str(&scan),
        "--format",
        "xy-csv",
        "--repeat",
        "10",
    ])?;
    check(points == 360, || {
        format!("benchmarked {points} points, wanted 360")
    })?;
    check(mean <= 1.0, || format!("360-point mean {mean} s > 1.0 s"))?;

    let mut worst = 0.0f64;
    for name in SCENARIO_NAMES {
        let (m, _) = bench_mean(&["bench", "--scenario", name, "--repeat", "10"])?;
        worst = worst.max(m);
    }
    check(worst <= 1.0, || format!("scenario mean {worst} s > 1.0 s"))?;
    Ok(format!(
        "360-point mean {mean:.4} s, slowest scenario mean {worst:.4} s (limit 1.0 s)"
    ))
}

/// 7. Permutation, rotation and translation leave the partition unchanged.
fn invariance() -> Verdict {
    let p = DetectorParams::default();
    let mut checks = 0;
    for name in SCENARIO_NAMES {
        let (env, _) = builtin_scenario(name).map_err(|e| e.to_string())?;
        let cloud = cast_scan(&env, &LidarConfig::default(), 0).map_err(|e| e.to_string())?;
        let base = detect_junctions(&cloud, &p).map_err(|e| e.to_string())?;
        let base_part = canonical_partition(&base.labels);

        for seed in 0..3u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut perm: Vec<usize> = (0..cloud.len()).collect();
            perm.shuffle(&mut rng);
            let r = detect_junctions(&cloud.permuted(&perm), &p).map_err(|e| e.to_string())?;
            let mut back = vec![0; cloud.len()];
            for (new_i, &old_i) in perm.iter().enumerate() {
                back[old_i] = r.labels[new_i];
            }
            check(canonical_partition(&back) == base_part, || {
                format!("{name}: permutation {seed}")
            })?;

            let angle = rng.random_range(-3.1..3.1);
            let rotated = cloud.rigid_transform(angle, Point2::ORIGIN).unwrap();
            let r = detect_junctions(&rotated, &p).map_err(|e| e.to_string())?;
            check(canonical_partition(&r.labels) == base_part, || {
                format!("{name}: rotation {angle}")
            })?;

            let offset = Point2::new(
                rng.random_range(-100.0..100.0),
                rng.random_range(-100.0..100.0),
            );
            let moved = cloud.rigid_transform(0.0, offset).unwrap();
            let r = detect_junctions(&moved, &p).map_err(|e| e.to_string())?;
            check(canonical_partition(&r.labels) == base_part, || {
                format!("{name}: translation {offset:?}")
            })?;
            checks += 3;
        }
    }
    Ok(format!(
        "{checks} transformed detections, all partitions identical"
    ))
}

/// 8. Identical CLI runs give byte-identical reports and SVGs.
fn reproducibility() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let mut scans = Vec::new();
    for run in 0..2 {
        let scan = d.join(format!("scan{run}.csv"));
        let o = junction(&[
            "simulate",
            "--scenario",
            "five-way",
            "--noise",
            "0.05",
            "--seed",
            "11",
            "--out",
            path_str(&scan),
        ]);
        check(o.status.success(), || "simulate failed".into())?;
        scans.push(fs::read(&scan).unwrap());
    }
    check(scans[0] == scans[1], || "simulated scans differ".into())?;

    let scan = d.join("scan0.csv");
    let mut outputs = Vec::new();
    for run in 0..2 {
        let report = d.join(format!("r{run}.json"));
        let svg = d.join(format!("r{run}.svg"));
        let o = junction(&[
            "detect",
            "--input",
            path_str(&scan),
            "--format",
            "xy-csv",
            "--seed",
            "5",
            "--no-timing",
            "--report",
            path_str(&report),
            "--svg",
            path_str(&svg),
        ]);
        check(o.status.success(), || "detect failed".into())?;
        outputs.push((fs::read(&report).unwrap(), fs::read(&svg).unwrap()));
    }
    check(outputs[0].0 == outputs[1].0, || {
        "JSON reports differ".into()
    })?;
    check(outputs[0].1 == outputs[1].1, || "SVGs differ".into())?;

    // With timing on, only the measured runtime may differ.
    let mut timed = Vec::new();
    for run in 0..2 {
        let report = d.join(format!("t{run}.json"));
        let svg = d.join(format!("t{run}.svg"));
        let o = junction(&[
            "detect",
            "--input",
            path_str(&scan),
            "--format",
            "xy-csv",
            "--seed",
            "5",
            "--report",
            path_str(&report),
            "--svg",
            path_str(&svg),
        ]);
        check(o.status.success(), || "detect failed".into())?;
        let mut json: serde_json::Value =
            serde_json::from_slice(&fs::read(&report).unwrap()).unwrap();
        json["runtime_seconds"] = serde_json::Value::Null;
        timed.push((json, fs::read(&svg).unwrap()));
    }
    check(timed[0] == timed[1], || {
        "timed reports differ beyond runtime_seconds".into()
    })?;
    check(timed[0].1 == outputs[0].1, || {
        "SVG depends on --no-timing".into()
    })?;
    Ok(format!(
        "scan, report ({} bytes) and SVG ({} bytes) byte-identical across runs",
        outputs[0].0.len(),
        outputs[0].1.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("scenario correctness", scenario_correctness),
        ("noise robustness", noise_robustness),
        (
            "spectral-combinatorial equivalence",
            spectral_combinatorial_equivalence,
        ),
        ("eigensolver quality", eigensolver_quality),
        ("k-means optimality", kmeans_optimality),
        ("runtime", runtime),
        ("invariance", invariance),
        ("reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let verdict =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        match verdict {
            Ok(detail) => println!("[PASS] {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
