//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines.

use std::f64::consts::PI;
use std::time::Instant;

use weierfield::field::{
    check_functional_equations, HarmonicField, PoissonField, SaddleField, WeierstrassField,
};
use weierfield::lattice::NadicCube;
use weierfield::linalg::norm;
use weierfield::qr::{bloch_seminorm, weak_qr_ratio, zygmund_seminorm};
use weierfield::sampling::SampleStream;
use weierfield::slow_points::{check_expansion_residual, directional_divergence_survey};
use weierfield::stopping::{
    cantor_build, cone_bound_check, hungerford_bound, makarov_bound, radius_recursion,
    radius_seed, validate_tree, verify_bounded_ray, CantorParams,
};
use weierfield::trig::TrigPolynomial;

fn classical(d: usize, b: f64) -> WeierstrassField {
    WeierstrassField::new(TrigPolynomial::coordinate_cosines(d), b, 1e-12).unwrap()
}

fn unit_root(d: usize, n: u32) -> NadicCube {
    NadicCube::root(vec![0.0; d], 1.0, n).unwrap()
}

#[test]
fn criterion_01_harmonicity() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for d in [1usize, 2, 3] {
        for b in [2.0, 3.0] {
            let field = classical(d, b);
            let mut s = SampleStream::new(101 + d as u64);
            for _ in 0..1000 {
                let x: Vec<f64> = (0..d).map(|_| s.uniform(0.0, 1.0)).collect();
                let y = s.uniform(0.01, 1.0);
                let jet = field.jet(&x, y).unwrap();
                let residual =
                    jet.hessian.trace().abs() / (1.0 + jet.hessian.frobenius_norm());
                worst = worst.max(residual);
                assert!(
                    jet.hessian.trace().abs()
                        <= 1e-9 * (1.0 + jet.hessian.frobenius_norm()),
                    "d={d} b={b}: |trace HF| = {} at ({x:?}, {y})",
                    jet.hessian.trace().abs()
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "[PASS] criterion 1: harmonicity |trace HF| <= 1e-9 (1 + |HF|) over 6000 points, worst normalized residual {worst:.3e}, {elapsed:?}"
    );
}

#[test]
fn criterion_02_functional_equations() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for d in [1usize, 2, 3] {
        for b in [2.0, 3.0] {
            let field = classical(d, b);
            let mut s = SampleStream::new(211 + d as u64);
            let samples: Vec<(Vec<f64>, f64)> = (0..1000)
                .map(|_| {
                    (
                        (0..d).map(|_| s.uniform(0.0, 1.0)).collect(),
                        s.uniform(0.01, 1.0),
                    )
                })
                .collect();
            let res = check_functional_equations(&field, &samples).unwrap();
            for (name, v) in [
                ("value", res.value),
                ("gradient", res.gradient),
                ("hessian", res.hessian),
            ] {
                worst = worst.max(v);
                assert!(v <= 1e-9, "d={d} b={b}: {name} residual {v:e}");
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "[PASS] criterion 2: functional equations, max relative residual {worst:.3e} over 6 configurations x 1000 points, {elapsed:?}"
    );
}

#[test]
fn criterion_03_derivative_correctness() {
    let mut worst = 0.0f64;
    for d in [1usize, 2] {
        let field = classical(d, 2.0);
        let mut s = SampleStream::new(307 + d as u64);
        for _ in 0..100 {
            let x: Vec<f64> = (0..d).map(|_| s.uniform(0.0, 1.0)).collect();
            let y = s.log_uniform(0.01, 1.0);
            let h = 1e-4 * y;
            let jet = field.jet(&x, y).unwrap();
            for i in 0..=d {
                let jet_at = |sign: f64| {
                    let mut xp = x.clone();
                    let mut yp = y;
                    if i < d {
                        xp[i] += sign * h;
                    } else {
                        yp += sign * h;
                    }
                    field.jet(&xp, yp).unwrap()
                };
                let plus = jet_at(1.0);
                let minus = jet_at(-1.0);
                let fd_g = (plus.value - minus.value) / (2.0 * h);
                let err_g = (fd_g - jet.gradient[i]).abs() / (1.0 + jet.gradient[i].abs());
                worst = worst.max(err_g);
                assert!(err_g <= 1e-4, "gradient component {i}: error {err_g:e}");
                for j in 0..=d {
                    let fd_h = (plus.gradient[j] - minus.gradient[j]) / (2.0 * h);
                    let exact = jet.hessian.get(i, j);
                    let err_h = (fd_h - exact).abs() / (1.0 + exact.abs());
                    worst = worst.max(err_h);
                    assert!(err_h <= 1e-4, "hessian ({i},{j}): error {err_h:e}");
                }
            }
        }
    }
    println!(
        "[PASS] criterion 3: jets match central differences (h = 1e-4 y) at 200 points, worst relative error {worst:.3e}"
    );
}

/// Independent oracle: direct Poisson-kernel quadrature
/// Φ(x,y) = ∫ P_y(x−z) φ(z) dz on ℝ, truncated at |z − x| ≤ 40, with the
/// mean handled exactly (Poisson extension of a constant is the constant).
mod poisson_oracle {
    /// Adaptive Simpson,独立 of the library's integrator.
    pub fn simpson<G: Fn(f64) -> f64>(g: &G, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (g(a), g(m), g(b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        recurse(g, a, m, b, fa, fm, fb, whole, tol, depth)
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse<G: Fn(f64) -> f64>(
        g: &G,
        a: f64,
        m: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let (flm, frm) = (g(lm), g(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let err = left + right - whole;
        if err.abs() <= 15.0 * tol || depth == 0 {
            left + right + err / 15.0
        } else {
            recurse(g, a, lm, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + recurse(g, m, rm, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }

    /// P_y(t) = y / (π (t² + y²)).
    pub fn kernel(t: f64, y: f64) -> f64 {
        y / (std::f64::consts::PI * (t * t + y * y))
    }
}

#[test]
fn criterion_04_poisson_kernel_oracle() {
    // Three-mode zero-mean φ with distinct coefficients.
    let phi = TrigPolynomial::from_json(&serde_json::json!({
        "d": 1,
        "terms": [
            {"k": [1], "re": 0.45, "im": 0.1},
            {"k": [-1], "re": 0.45, "im": -0.1},
            {"k": [2], "re": -0.2, "im": 0.05},
            {"k": [-2], "re": -0.2, "im": -0.05},
            {"k": [3], "re": 0.1, "im": 0.0},
            {"k": [-3], "re": 0.1, "im": 0.0}
        ]
    }))
    .unwrap();
    let ext = PoissonField::new(phi.clone());
    let mut s = SampleStream::new(401);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let x = s.uniform(0.0, 1.0);
        let y = s.uniform(0.3, 1.0);
        let spectral = ext.jet(&[x], y).unwrap().value;
        // Truncated kernel integral over [x−40, x+40] in unit panels.
        let phi_ref = &phi;
        let integrand = move |z: f64| poisson_oracle::kernel(x - z, y) * phi_ref.eval(&[z]);
        let mut direct = 0.0;
        for j in -40i64..40 {
            let a = x + j as f64;
            direct += poisson_oracle::simpson(&integrand, a, a + 1.0, 1e-11, 24);
        }
        let rel = (spectral - direct).abs() / (1.0 + spectral.abs().max(direct.abs()));
        worst = worst.max(rel);
        assert!(
            rel <= 1e-6,
            "Φ({x}, {y}): spectral {spectral} vs kernel quadrature {direct} (rel {rel:e})"
        );
    }
    println!(
        "[PASS] criterion 4: spectral extension matches Poisson-kernel quadrature at 20 points, worst relative error {worst:.3e}"
    );
}

#[test]
fn criterion_05_d1_conformality() {
    let field = classical(1, 2.0);
    let root = unit_root(1, 2);
    let cubes: Vec<NadicCube> = root
        .descendants_up_to(5)
        .into_iter()
        .filter(|q| q.generation() >= 1)
        .take(50)
        .collect();
    assert_eq!(cubes.len(), 50);
    let mut worst16 = 0.0f64;
    let mut worst32 = 0.0f64;
    for q in &cubes {
        let r16 = weak_qr_ratio(&field, q, 2, 16).unwrap();
        let r32 = weak_qr_ratio(&field, q, 2, 32).unwrap();
        let e16 = (r16.gamma_sq.expect("nondegenerate") - 1.0).abs();
        let e32 = (r32.gamma_sq.expect("nondegenerate") - 1.0).abs();
        assert!(e16 <= 0.02, "cube {}: |gamma^2 - 1| = {e16}", q.address());
        // Halving under refinement, with an absolute floor for the
        // structurally-exact d = 1 case where both errors sit at roundoff.
        assert!(
            e32 <= 0.5 * e16 + 1e-12,
            "cube {}: m=16 error {e16:e}, m=32 error {e32:e}",
            q.address()
        );
        worst16 = worst16.max(e16);
        worst32 = worst32.max(e32);
    }
    println!(
        "[PASS] criterion 5: d=1 QR ratio is 1 within 2% at m=16 (worst {worst16:.2e}), error halves at m=32 (worst {worst32:.2e}) over 50 dyadic cubes"
    );
}

#[test]
fn criterion_06_degeneracy_detection() {
    let field = SaddleField { dim: 2 };
    let root = unit_root(2, 2);
    let mut checked = 0;
    for q in root.descendants_up_to(2) {
        let r = weak_qr_ratio(&field, &q, 2, 8).unwrap();
        assert!(
            r.flagged_infinite && r.gamma_sq.is_none(),
            "cube {} not flagged",
            q.address()
        );
        checked += 1;
    }
    println!(
        "[PASS] criterion 6: F = x1^2 - y^2 in d=2 flagged infinite on all {checked} tested cubes"
    );
}

#[test]
fn criterion_07_dimension_bound_arithmetic() {
    let h = hungerford_bound(0.25, 0.5, 1).unwrap();
    assert!(h.valid);
    assert_eq!(h.bound, 0.5);
    for d in [1usize, 2, 3] {
        let m = makarov_bound(d, 1.7, 2.3, 1.0, 10.0, PI / 3.0, 2).unwrap();
        assert_eq!(m, d as f64);
    }
    println!(
        "[PASS] criterion 7: hungerford(1/4, 1/2, d=1) = 0.5 exactly; makarov bound with beta = 1 equals d exactly"
    );
}

#[test]
fn criterion_08_cone_oracle() {
    let start = Instant::now();
    let report = cone_bound_check(1.0, 0.4, PI / 3.0, 3, 1_000_000, 801).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(report.violations, 0, "worst ratio {}", report.worst_ratio);
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "[PASS] criterion 8: 10^6 Monte-Carlo cone trials, 0 violations, worst |b|/bound = {:.6}, {elapsed:?}",
        report.worst_ratio
    );
}

#[test]
fn criterion_09_radius_recursion() {
    let theta = PI / 3.0;
    let k = 0.3;
    let r = radius_recursion(&vec![k; 200], theta, radius_seed(k / theta.cos()) + 3.0).unwrap();
    let fixed = radius_seed(k / theta.cos());
    let err = (r[199] - fixed).abs();
    assert!(err <= 1e-9, "fixed-point error {err:e}");

    let n = 10_000usize;
    let seq: Vec<f64> = (1..=n).map(|i| 1.0 / i as f64).collect();
    let rr = radius_recursion(&seq, theta, radius_seed(1.0 / theta.cos())).unwrap();
    let ratio = rr[n - 1] / seq[n - 1];
    assert!(ratio > 10.0, "R_n/k_n = {ratio}");
    println!(
        "[PASS] criterion 9: constant-k recursion reaches g(k/cos theta) within {err:.1e} by n=200; k_n = 1/n gives R_n/k_n = {ratio:.1} > 10 at n = 10^4"
    );
}

#[test]
fn criterion_10_end_to_end_cantor() {
    let start = Instant::now();
    let field = classical(1, 2.0);
    let root = unit_root(1, 2);
    let theta = PI / 3.0;
    let params = CantorParams {
        m_threshold: 7.0,
        theta,
        k_generations: 3,
        j_max: 8,
        quad_m: 8,
    };
    let radius = params.m_threshold / theta.cos();

    let tree = cantor_build(&field, &root, &params).unwrap();
    assert!(!tree.generations.is_empty());
    assert!(!tree.generations[0].is_empty(), "no stopping escape at all");

    // Clause 1: exhaustive maximality/disjointness validation.
    let validation = validate_tree(&field, &tree).unwrap();
    assert!(
        validation.all_ok(),
        "tree invariants failed: {:?}",
        validation.failures
    );

    // Clause 2: ray certificate down to the resolved floor, and the
    // gradient-radius invariant |（∇F)_Q| ≤ R on every node.
    let y_floor = tree.resolved_floor().unwrap();
    let ray = verify_bounded_ray(&field, &tree, radius, y_floor, 16).unwrap();
    assert!(ray.precondition_ok, "{:?}", ray.precondition_msg);
    assert_eq!(
        ray.violations, 0,
        "ray violations with max ratio {:?}",
        ray.max_ratio
    );
    let offenders = weierfield::stopping::check_gradient_radii(&tree, radius);
    assert!(offenders.is_empty(), "radius offenders: {offenders:?}");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}");
    println!(
        "[PASS] criterion 10 (construction clauses): tree with {} nodes validated exhaustively ({} checked); ray certificate clean over {} rays / {} points down to floor {:.3e}; {elapsed:?}",
        tree.generations.iter().map(Vec::len).sum::<usize>(),
        validation.nodes_checked,
        ray.rays_checked,
        ray.points_checked,
        y_floor
    );

    // Clause 3: a valid dimension bound in (0, 1].
    //
    // This clause is expected red, and deliberately so. The mass-distribution
    // bound needs the strict order alpha < beta^(1/d) between the measured
    // worst sidelength ratio and the measured worst per-parent accepted-mass
    // fraction. That uniform mass fraction is an asymptotic property of the
    // cone-filtered stopping construction: the regime where every parent
    // keeps a fixed fraction inside the contraction cone requires stopping
    // thresholds whose escape depth far exceeds the depth cap pinned here
    // (J_max = 8 per stage, K = 3). At reachable thresholds (M <= ~10, since
    // face-average deviations accumulate only a few units per generation),
    // child averages systematically gain norm as y shrinks, and across a full
    // sweep of M, theta, and root placement at least one parent among
    // hundreds always ends with (near-)zero cone mass, so measured beta
    // never exceeds measured alpha. The assertion is kept as stated rather
    // than weakened; the `cantor` command emits the same report with its
    // honest `valid = false` flag and exits 0 with a warning.
    let alpha = tree.measured_alpha().expect("nonempty tree");
    let beta = tree.measured_beta().expect("nonempty tree");
    let bound = hungerford_bound(alpha, beta.max(f64::MIN_POSITIVE), 1).unwrap();
    assert!(
        bound.valid && bound.bound > 0.0 && bound.bound <= 1.0,
        "[RED] criterion 10 (dimension-bound clause): measured alpha = {alpha}, beta = {beta} \
         give bound {:.4} with valid = {}; the strict order alpha < beta is not reachable \
         at J_max = 8, K = 3 for this field — an asymptotic property asserted at finite \
         depth; kept red by design (see the comment above this assertion)",
        bound.bound,
        bound.valid
    );
}

#[test]
fn criterion_11_expansion_residual_contract() {
    let field = classical(1, 2.0);
    let zygmund = zygmund_seminorm(&field, &[0.0], 1.0, (1e-6, 1.0), 50_000, 1101)
        .unwrap()
        .value;
    let mut s = SampleStream::new(1103);
    let samples: Vec<(Vec<f64>, Vec<f64>)> = (0..10_000)
        .map(|_| {
            let x = vec![s.uniform(0.0, 1.0)];
            let h_len = s.log_uniform(1e-6, 1.0);
            let sign = if s.uniform(0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
            (x, vec![sign * h_len])
        })
        .collect();
    let report = check_expansion_residual(&field, &field, &samples, zygmund).unwrap();
    assert!(
        report.normalized <= 4.4,
        "normalized residual {} > 4 + 10% slack",
        report.normalized
    );
    println!(
        "[PASS] criterion 11: first-order expansion residual / Zygmund seminorm = {:.3} <= 4.4 over 10^4 samples",
        report.normalized
    );
}

#[test]
fn criterion_12_divergence_signature() {
    let field = classical(2, 2.0);
    let mut s = SampleStream::new(1201);
    let xs: Vec<Vec<f64>> = (0..1000)
        .map(|_| vec![s.uniform(0.0, 1.0), s.uniform(0.0, 1.0)])
        .collect();
    let floors: Vec<f64> = (5..=20).map(|j| 2.0f64.powi(-j)).collect();
    let survey =
        directional_divergence_survey(&field, &[1.0, 0.0], &xs, &floors, 1.0, 8).unwrap();

    // Fixed threshold: median of the first-window sups.
    let mut first: Vec<f64> = survey.sups.iter().map(|r| r[0]).collect();
    first.sort_by(f64::total_cmp);
    let threshold = first[first.len() / 2];

    let mut prev = 0.0;
    let mut fracs = Vec::new();
    for k in 0..floors.len() {
        let f = survey.exceedance_fraction(threshold, k);
        assert!(
            f >= prev,
            "exceedance fraction decreased at floor index {k}: {f} < {prev}"
        );
        prev = f;
        fracs.push(f);
    }
    println!(
        "[PASS] criterion 12: exceedance fraction at threshold {threshold:.2} nondecreasing across floors 2^-5..2^-20: {:.3} -> {:.3} over 1000 points",
        fracs[0],
        fracs[fracs.len() - 1]
    );
}

#[test]
fn criterion_13_determinism() {
    use std::process::Command;

    let dir = std::env::temp_dir().join(format!("weierfield-acc13-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config_path = dir.join("config.json");
    let points_path = dir.join("points.txt");
    std::fs::write(
        &config_path,
        serde_json::json!({
            "field": {
                "phi": {"d": 1, "terms": [
                    {"k": [1], "re": 0.5, "im": 0.0},
                    {"k": [-1], "re": 0.5, "im": 0.0}
                ]},
                "b": 2.0,
                "tail_tol": 1e-12
            },
            "lattice": {"n": 2, "root_corner": [0.0], "root_side": 1.0, "j_max": 5, "quad_nodes": 6},
            "stopping": {"m_threshold": 5.0, "theta": PI / 3.0, "k_generations": 2},
            "qr": {"n": 2, "sweep_depth": 3},
            "sampling": {"seed": 7, "count": 50, "points_per_decade": 8}
        })
        .to_string(),
    )
    .unwrap();
    std::fs::write(&points_path, "0.3 0.5\n0.1,0.25\n0.9\t0.125\n").unwrap();

    let bin = env!("CARGO_BIN_EXE_weierfield");
    let run = |label: &str, threads: Option<usize>| -> Vec<(String, Vec<u8>)> {
        let out_dir = dir.join(label);
        for (cmd, extra) in [
            ("eval", Some(points_path.clone())),
            ("cantor", None),
            ("qr", None),
            ("survey", None),
        ] {
            let mut c = Command::new(bin);
            c.arg("--config")
                .arg(&config_path)
                .arg("--out")
                .arg(&out_dir)
                .arg("--seed")
                .arg("7");
            if let Some(t) = threads {
                c.arg("--threads").arg(t.to_string());
            }
            c.arg(cmd);
            if let Some(p) = extra {
                c.arg("--points").arg(p);
            }
            let status = c.status().expect("spawn CLI");
            assert!(status.success(), "{cmd} failed in {label}");
        }
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&out_dir)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (
                    e.file_name().to_string_lossy().into_owned(),
                    std::fs::read(e.path()).unwrap(),
                )
            })
            .filter(|(name, _)| name != "run_manifest.json") // carries wall-clock timings
            .collect();
        files.sort();
        files
    };

    let base = run("t1", Some(1));
    assert!(base.iter().any(|(n, _)| n == "jets.csv"));
    assert!(base.iter().any(|(n, _)| n == "cantor_tree.json"));
    for (label, threads) in [("t4", Some(4)), ("tmax", None), ("t1b", Some(1))] {
        let other = run(label, threads);
        assert_eq!(base.len(), other.len(), "file sets differ for {label}");
        for ((n1, b1), (n2, b2)) in base.iter().zip(&other) {
            assert_eq!(n1, n2);
            assert_eq!(b1, b2, "output {n1} differs between t1 and {label}");
        }
    }
    std::fs::remove_dir_all(&dir).unwrap();
    println!(
        "[PASS] criterion 13: eval/cantor/qr/survey outputs byte-identical across reruns at threads 1, 4, max"
    );
}
