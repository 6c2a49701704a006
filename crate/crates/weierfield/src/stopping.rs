//! Stopping-time families of N-adic cubes, the angular subfamilies, the
//! Cantor-tree construction, and Hausdorff-dimension lower bounds.
//!
//! A cube Q' below a root Q stops when its face-average gradient deviates
//! from the root's by more than M; the family 𝒮_M(Q) collects the maximal
//! stopped cubes. Iterating stopping plus a cone filter on the deviation
//! vectors produces a Cantor tree whose measured geometry (α, β) feeds the
//! Hungerford-type dimension bound.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::HarmonicField;
use crate::lattice::{face_average_gradient, NadicCube};
use crate::linalg::{dot, norm, sub};

/// How a node left the stopping search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeStatus {
    /// Deviation exceeded M; search stops below this cube.
    Stopped,
    /// Still within M at the depth cap; its mass is unresolved.
    UnresolvedAtDepthCap,
}

/// A cube visited by the stopping time, with its face-average gradient.
#[derive(Debug, Clone, Serialize)]
pub struct StoppingNode {
    pub cube: NadicCube,
    pub avg_grad: Vec<f64>,
    /// |(∇F)_root − (∇F)_cube| for the stage root this node was found under.
    pub deviation: f64,
    pub status: NodeStatus,
}

/// Output of one stopping-time stage below a root cube.
#[derive(Debug, Clone)]
pub struct StoppingFamily {
    pub root: NadicCube,
    pub root_avg: Vec<f64>,
    pub stopped: Vec<StoppingNode>,
    pub unresolved: Vec<StoppingNode>,
    /// Volume fraction of the root still interior at the depth cap.
    pub unresolved_fraction: f64,
}

fn scan_subtree<F: HarmonicField + ?Sized>(
    field: &F,
    cube: &NadicCube,
    root_avg: &[f64],
    m_threshold: f64,
    depth_left: u32,
    quad_m: usize,
) -> Result<(Vec<StoppingNode>, Vec<StoppingNode>)> {
    let children = cube.children();
    let branches: Vec<Result<(Vec<StoppingNode>, Vec<StoppingNode>)>> = children
        .par_iter()
        .map(|child| {
            let avg = face_average_gradient(field, child, quad_m)?;
            let deviation = norm(&sub(&avg, root_avg));
            if deviation > m_threshold {
                Ok((
                    vec![StoppingNode {
                        cube: child.clone(),
                        avg_grad: avg,
                        deviation,
                        status: NodeStatus::Stopped,
                    }],
                    Vec::new(),
                ))
            } else if depth_left == 1 {
                Ok((
                    Vec::new(),
                    vec![StoppingNode {
                        cube: child.clone(),
                        avg_grad: avg,
                        deviation,
                        status: NodeStatus::UnresolvedAtDepthCap,
                    }],
                ))
            } else {
                scan_subtree(field, child, root_avg, m_threshold, depth_left - 1, quad_m)
            }
        })
        .collect();

    // Merge in child order: output ordering is independent of thread count.
    let mut stopped = Vec::new();
    let mut unresolved = Vec::new();
    for b in branches {
        let (s, u) = b?;
        stopped.extend(s);
        unresolved.extend(u);
    }
    Ok((stopped, unresolved))
}

/// 𝒮_M(root): the maximal N-adic subcubes whose face-average gradient
/// deviates from the root's by more than M, searched down to `j_max`
/// generations below the root. Cubes still interior at the cap are reported
/// as unresolved together with their total volume fraction.
pub fn stopping_family<F: HarmonicField + ?Sized>(
    field: &F,
    root: &NadicCube,
    m_threshold: f64,
    j_max: u32,
    quad_m: usize,
) -> Result<StoppingFamily> {
    if !(m_threshold > 0.0) {
        return Err(Error::invalid("stopping threshold M must be positive"));
    }
    if j_max < 1 {
        return Err(Error::invalid("depth cap J_max must be at least 1"));
    }
    let root_avg = face_average_gradient(field, root, quad_m)?;
    let (stopped, unresolved) =
        scan_subtree(field, root, &root_avg, m_threshold, j_max, quad_m)?;
    let unresolved_fraction =
        unresolved.iter().map(|n| n.cube.volume()).sum::<f64>() / root.volume();
    Ok(StoppingFamily {
        root: root.clone(),
        root_avg,
        stopped,
        unresolved,
        unresolved_fraction,
    })
}

/// Keeps the nodes whose deviation vector (∇F)_{Q'} − (∇F)_Q lies strictly
/// inside the cone of axis `reference` and half-angle θ. With the reference
/// ξ_Q = −(∇F)_Q/|(∇F)_Q| this selects exactly the children whose average
/// gradient lands in Γ_θ((∇F)_Q), the cone that keeps the gradient radii
/// contracting along the construction. `reference = None` is the vacuous
/// mode used when (∇F)_Q = 0: the family passes unchanged.
pub fn angular_filter(
    nodes: &[StoppingNode],
    root_avg: &[f64],
    reference: Option<&[f64]>,
    theta: f64,
) -> Result<Vec<StoppingNode>> {
    let Some(xi) = reference else {
        return Ok(nodes.to_vec());
    };
    if (norm(xi) - 1.0).abs() > 1e-12 {
        return Err(Error::invalid("angular reference must be a unit vector"));
    }
    let cos_theta = theta.cos();
    Ok(nodes
        .iter()
        .filter(|n| {
            let dev = sub(&n.avg_grad, root_avg);
            dot(&dev, xi) > cos_theta * norm(&dev)
        })
        .cloned()
        .collect())
}

/// Parameters of the Cantor-tree construction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CantorParams {
    /// Stopping threshold M (= R cos θ when driven by a radius R).
    pub m_threshold: f64,
    /// Cone half-angle, π/3 ≤ θ < π/2.
    pub theta: f64,
    /// Number of stopping generations K.
    pub k_generations: u32,
    /// Depth cap per stage.
    pub j_max: u32,
    /// Quadrature nodes per axis for face averages.
    pub quad_m: usize,
}

/// One node of a Cantor-tree generation.
#[derive(Debug, Clone, Serialize)]
pub struct CantorNode {
    pub cube: NadicCube,
    pub avg_grad: Vec<f64>,
    /// Deviation from the stage root's average.
    pub deviation: f64,
    /// Index of the parent in the previous generation.
    pub parent: usize,
}

/// Per-generation geometry measured while building.
#[derive(Debug, Clone, Serialize)]
pub struct GenerationSummary {
    pub count: usize,
    /// max l(Q')/l(Q) over accepted children; None when the generation is empty.
    pub measured_alpha: Option<f64>,
    /// min over parents of Σ accepted child volume / parent volume.
    pub measured_beta: Option<f64>,
    /// Worst unresolved volume fraction among this generation's stages.
    pub max_unresolved_fraction: f64,
}

/// The iterated stopping-time tree 𝒢₀, …, 𝒢_K.
#[derive(Debug, Clone)]
pub struct CantorTree {
    pub params: CantorParams,
    pub root: NadicCube,
    pub root_avg: Vec<f64>,
    /// `generations[k]` = 𝒢_{k+1}; 𝒢₀ = {root} is implicit.
    pub generations: Vec<Vec<CantorNode>>,
    pub summaries: Vec<GenerationSummary>,
    /// Construction halted on an empty generation before reaching K.
    pub terminated_early: bool,
}

impl CantorTree {
    /// max l(Q')/l(Q) over all parent/child pairs, None if no generation.
    pub fn measured_alpha(&self) -> Option<f64> {
        self.summaries
            .iter()
            .filter_map(|s| s.measured_alpha)
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
    }

    /// min over all parents of the accepted-mass fraction.
    pub fn measured_beta(&self) -> Option<f64> {
        self.summaries
            .iter()
            .filter_map(|s| s.measured_beta)
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.min(v))))
    }

    pub fn final_generation(&self) -> &[CantorNode] {
        self.generations.last().map_or(&[], |g| g.as_slice())
    }

    /// Finest resolved height: min sidelength over final-generation cubes.
    pub fn resolved_floor(&self) -> Option<f64> {
        self.final_generation()
            .iter()
            .map(|n| n.cube.side())
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.min(v))))
    }
}

/// Builds the Cantor tree: 𝒢₁ = 𝒮_M(Q₀) unfiltered, then each later
/// generation applies the cone filter with ξ_Q = −(∇F)_Q/|(∇F)_Q| per stage
/// root. Records measured α and β per generation.
pub fn cantor_build<F: HarmonicField + ?Sized>(
    field: &F,
    root: &NadicCube,
    params: &CantorParams,
) -> Result<CantorTree> {
    if !(params.theta >= PI / 3.0 && params.theta < PI / 2.0) {
        return Err(Error::invalid(format!(
            "theta must lie in [pi/3, pi/2), got {}",
            params.theta
        )));
    }
    if params.k_generations < 1 {
        return Err(Error::invalid("K must be at least 1"));
    }

    let root_avg = face_average_gradient(field, root, params.quad_m)?;
    let mut generations: Vec<Vec<CantorNode>> = Vec::new();
    let mut summaries: Vec<GenerationSummary> = Vec::new();
    let mut terminated_early = false;

    for k in 1..=params.k_generations {
        // Parents of stage k: 𝒢_{k−1}, with 𝒢₀ = {root}.
        let parents: Vec<(usize, NadicCube, Vec<f64>)> = if k == 1 {
            vec![(0, root.clone(), root_avg.clone())]
        } else {
            generations[(k - 2) as usize]
                .iter()
                .enumerate()
                .map(|(i, n)| (i, n.cube.clone(), n.avg_grad.clone()))
                .collect()
        };

        let stage_results: Vec<Result<(Vec<CantorNode>, f64, Option<f64>, f64)>> = parents
            .par_iter()
            .map(|(parent_idx, cube, parent_avg)| {
                let family =
                    stopping_family(field, cube, params.m_threshold, params.j_max, params.quad_m)?;
                let accepted = if k == 1 {
                    family.stopped.clone()
                } else {
                    // (∇F)_Q = 0 up to noise: the angular filter is vacuous.
                    let reference = if norm(parent_avg) > 1e-12 * (1.0 + params.m_threshold) {
                        Some(
                            parent_avg
                                .iter()
                                .map(|v| -v / norm(parent_avg))
                                .collect::<Vec<f64>>(),
                        )
                    } else {
                        None
                    };
                    angular_filter(
                        &family.stopped,
                        &family.root_avg,
                        reference.as_deref(),
                        params.theta,
                    )?
                };
                let beta = (accepted.iter().map(|n| n.cube.volume()).sum::<f64>() / cube.volume()).max(0.0);
                let alpha = accepted
                    .iter()
                    .map(|n| n.cube.side() / cube.side())
                    .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
                let nodes = accepted
                    .into_iter()
                    .map(|n| CantorNode {
                        cube: n.cube,
                        avg_grad: n.avg_grad,
                        deviation: n.deviation,
                        parent: *parent_idx,
                    })
                    .collect();
                Ok((nodes, beta, alpha, family.unresolved_fraction))
            })
            .collect();

        let mut gen_nodes = Vec::new();
        let mut min_beta: Option<f64> = None;
        let mut max_alpha: Option<f64> = None;
        let mut max_unresolved = 0.0f64;
        for r in stage_results {
            let (nodes, beta, alpha, unresolved) = r?;
            gen_nodes.extend(nodes);
            min_beta = Some(min_beta.map_or(beta, |b: f64| b.min(beta)));
            if let Some(a) = alpha {
                max_alpha = Some(max_alpha.map_or(a, |m: f64| m.max(a)));
            }
            max_unresolved = max_unresolved.max(unresolved);
        }

        summaries.push(GenerationSummary {
            count: gen_nodes.len(),
            measured_alpha: max_alpha,
            measured_beta: min_beta,
            max_unresolved_fraction: max_unresolved,
        });
        let empty = gen_nodes.is_empty();
        generations.push(gen_nodes);
        if empty {
            terminated_early = true;
            break;
        }
    }

    Ok(CantorTree {
        params: *params,
        root: root.clone(),
        root_avg,
        generations,
        summaries,
        terminated_early,
    })
}

/// Result of recomputing the stopping invariants of a built tree from the
/// field. An independent walk over every node's N-adic tower.
#[derive(Debug, Clone, Serialize)]
pub struct TreeValidation {
    /// Every node's proper ancestors (strictly between stage root and node)
    /// stay within M, and the node itself exceeds M.
    pub maximality_ok: bool,
    /// Cubes within each generation have pairwise disjoint interiors.
    pub disjointness_ok: bool,
    pub nodes_checked: usize,
    pub failures: Vec<String>,
}

impl TreeValidation {
    pub fn all_ok(&self) -> bool {
        self.maximality_ok && self.disjointness_ok
    }
}

fn is_ancestor_or_equal(a: &NadicCube, b: &NadicCube) -> bool {
    if a.generation() > b.generation() {
        return false;
    }
    let shift = (a.arity() as u64).pow(b.generation() - a.generation());
    a.index()
        .iter()
        .zip(b.index())
        .all(|(ai, bi)| bi / shift == *ai)
}

/// Exhaustively re-verifies maximality and disjointness of a built tree.
pub fn validate_tree<F: HarmonicField + ?Sized>(
    field: &F,
    tree: &CantorTree,
) -> Result<TreeValidation> {
    let m = tree.params.m_threshold;
    let quad_m = tree.params.quad_m;
    let mut maximality_failures = Vec::new();
    let mut overlap_failures = Vec::new();
    let mut nodes_checked = 0usize;

    for (k, generation) in tree.generations.iter().enumerate() {
        // Maximality along each node's tower.
        for node in generation {
            nodes_checked += 1;
            let (stage_root, stage_avg) = if k == 0 {
                (tree.root.clone(), tree.root_avg.clone())
            } else {
                let p = &tree.generations[k - 1][node.parent];
                (p.cube.clone(), p.avg_grad.clone())
            };
            let own_avg = face_average_gradient(field, &node.cube, quad_m)?;
            let own_dev = norm(&sub(&own_avg, &stage_avg));
            if own_dev <= m {
                maximality_failures.push(format!(
                    "node {} deviation {own_dev} does not exceed M = {m}",
                    node.cube.address()
                ));
            }
            let mut cursor = node.cube.parent();
            while let Some(anc) = cursor {
                if anc == stage_root {
                    break;
                }
                if anc.generation() <= stage_root.generation() {
                    maximality_failures.push(format!(
                        "node {} tower missed its stage root {}",
                        node.cube.address(),
                        stage_root.address()
                    ));
                    break;
                }
                let avg = face_average_gradient(field, &anc, quad_m)?;
                let dev = norm(&sub(&avg, &stage_avg));
                if dev > m {
                    maximality_failures.push(format!(
                        "ancestor {} of node {} already deviates by {dev} > M = {m}",
                        anc.address(),
                        node.cube.address()
                    ));
                }
                cursor = anc.parent();
            }
        }

        // Pairwise disjoint interiors within the generation.
        for i in 0..generation.len() {
            for j in i + 1..generation.len() {
                let a = &generation[i].cube;
                let b = &generation[j].cube;
                if is_ancestor_or_equal(a, b) || is_ancestor_or_equal(b, a) {
                    overlap_failures.push(format!(
                        "generation {} cubes {} and {} overlap",
                        k + 1,
                        a.address(),
                        b.address()
                    ));
                }
            }
        }
    }

    let maximality_ok = maximality_failures.is_empty();
    let disjointness_ok = overlap_failures.is_empty();
    let mut failures = maximality_failures;
    failures.extend(overlap_failures);
    Ok(TreeValidation {
        maximality_ok,
        disjointness_ok,
        nodes_checked,
        failures,
    })
}

/// Hausdorff-dimension lower bound for nested cube families: for sidelength
/// ratios < α and per-parent mass fractions ≥ β, the intersection set has
/// dimension at least log(β/α^d)/log(1/α).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DimBound {
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "d")]
    pub dim: usize,
    pub bound: f64,
    /// Strict parameter order α < β^{1/d} < 1 verified.
    pub valid: bool,
}

/// Evaluates the dimension bound; parameters outside (0,1)×(0,1] are
/// rejected, and α ≥ β^{1/d} yields the formula value flagged invalid.
pub fn hungerford_bound(alpha: f64, beta: f64, dim: usize) -> Result<DimBound> {
    if dim == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("alpha must lie in (0,1), got {alpha}")));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::invalid(format!("beta must lie in (0,1], got {beta}")));
    }
    let bound = (beta.ln() - dim as f64 * alpha.ln()) / -alpha.ln();
    let beta_root = beta.powf(1.0 / dim as f64);
    let valid = alpha < beta_root && beta_root < 1.0;
    Ok(DimBound {
        alpha,
        beta,
        dim,
        bound,
        valid,
    })
}

/// The radius-driven dimension lower bound
/// d − C‖∇F‖_B·log(1/β) / (R cos θ log N). Returns the raw formula value;
/// callers clamp negative values in reports.
pub fn makarov_bound(
    dim: usize,
    c_const: f64,
    bloch_norm: f64,
    beta: f64,
    radius: f64,
    theta: f64,
    n: u32,
) -> Result<f64> {
    if dim == 0 || n < 2 {
        return Err(Error::invalid("need d ≥ 1 and N ≥ 2"));
    }
    if !(c_const > 0.0 && bloch_norm > 0.0 && radius > 0.0) {
        return Err(Error::invalid("constants and radius must be positive"));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::invalid(format!("beta must lie in (0,1], got {beta}")));
    }
    if !(theta >= PI / 3.0 && theta < PI / 2.0) {
        return Err(Error::invalid("theta must lie in [pi/3, pi/2)"));
    }
    Ok(dim as f64
        - c_const * bloch_norm * (1.0 / beta).ln() / (radius * theta.cos() * (n as f64).ln()))
}

/// Monte-Carlo check of the cone-geometry implication: |a| ≤ R plus
/// b ∈ Γ_θ(a) with |a−b| ∈ [R cos θ, R cos θ + k] forces
/// |b| ≤ sqrt(R² sin²θ + k²) ≤ R.
#[derive(Debug, Clone, Serialize)]
pub struct ConeCheckReport {
    pub trials: usize,
    pub violations: usize,
    /// max |b| / bound observed.
    pub worst_ratio: f64,
}

pub fn cone_bound_check(
    radius: f64,
    k: f64,
    theta: f64,
    ambient_dim: usize,
    trials: usize,
    seed: u64,
) -> Result<ConeCheckReport> {
    if !(theta >= PI / 3.0 && theta < PI / 2.0) {
        return Err(Error::invalid("theta must lie in [pi/3, pi/2)"));
    }
    if k < 0.0 || radius < 0.0 || radius * theta.cos() < k {
        return Err(Error::invalid("need R ≥ k / cos θ and nonnegative R, k"));
    }
    if ambient_dim < 2 {
        return Err(Error::invalid("ambient dimension must be at least 2"));
    }
    let cos_theta = theta.cos();
    let bound = (radius * radius * theta.sin() * theta.sin() + k * k).sqrt();
    let mut stream = crate::sampling::SampleStream::new(seed);
    let mut violations = 0usize;
    let mut worst_ratio = 0.0f64;

    for trial in 0..trials {
        // Occasionally probe the degenerate a = 0 case, where the cone
        // condition is vacuous.
        let a_len = if trial % 128 == 0 {
            0.0
        } else {
            stream.uniform(0.0, radius)
        };
        let a_dir = stream.unit_vector(ambient_dim);
        let a: Vec<f64> = a_dir.iter().map(|v| v * a_len).collect();

        let u_len = stream.uniform(radius * cos_theta, radius * cos_theta + k);
        let u_dir = if a_len == 0.0 {
            stream.unit_vector(ambient_dim)
        } else {
            // Direction at angle ψ < θ from a: u = cos ψ · â + sin ψ · v̂.
            let psi = stream.uniform(0.0, theta * (1.0 - 1e-12));
            let mut v = stream.unit_vector(ambient_dim);
            let proj = dot(&v, &a_dir);
            for (vi, ai) in v.iter_mut().zip(&a_dir) {
                *vi -= proj * ai;
            }
            let vn = norm(&v);
            if vn < 1e-9 {
                a_dir.clone()
            } else {
                a_dir
                    .iter()
                    .zip(&v)
                    .map(|(ai, vi)| psi.cos() * ai + psi.sin() * vi / vn)
                    .collect()
            }
        };
        let b: Vec<f64> = a.iter().zip(&u_dir).map(|(ai, ui)| ai - u_len * ui).collect();
        let b_len = norm(&b);
        worst_ratio = worst_ratio.max(b_len / bound);
        if b_len > bound * (1.0 + 1e-12) {
            violations += 1;
        }
    }
    Ok(ConeCheckReport {
        trials,
        violations,
        worst_ratio,
    })
}

/// g(x) = sqrt(x(x+1)), the seed function of the shrinking-radius recursion.
pub fn radius_seed(x: f64) -> f64 {
    (x * (x + 1.0)).sqrt()
}

/// The recursion R_{n+1} = max{ g(k_{n+1}/cos θ), sqrt(R_n² sin²θ + k_n²) }.
/// Requires R₁ ≥ g(k₁/cos θ).
pub fn radius_recursion(k_seq: &[f64], theta: f64, r1: f64) -> Result<Vec<f64>> {
    if k_seq.is_empty() {
        return Err(Error::invalid("k sequence must be nonempty"));
    }
    if k_seq.iter().any(|k| *k <= 0.0) {
        return Err(Error::invalid("k sequence must be positive"));
    }
    if !(theta >= PI / 3.0 && theta < PI / 2.0) {
        return Err(Error::invalid("theta must lie in [pi/3, pi/2)"));
    }
    let cos_theta = theta.cos();
    if r1 < radius_seed(k_seq[0] / cos_theta) * (1.0 - 1e-12) {
        return Err(Error::invalid(format!(
            "R1 = {r1} violates R1 ≥ g(k1/cos θ) = {}",
            radius_seed(k_seq[0] / cos_theta)
        )));
    }
    let sin2 = theta.sin() * theta.sin();
    let mut out = Vec::with_capacity(k_seq.len());
    out.push(r1);
    for n in 1..k_seq.len() {
        let prev = out[n - 1];
        let carried = (prev * prev * sin2 + k_seq[n - 1] * k_seq[n - 1]).sqrt();
        out.push(radius_seed(k_seq[n] / cos_theta).max(carried));
    }
    Ok(out)
}

/// Ray-boundedness certificate for a built tree: samples vertical rays above
/// final-generation cubes and checks sup |∇F(x, y)| ≤ 2R on [y_floor, l(Q₀)].
#[derive(Debug, Clone, Serialize)]
pub struct RayCheckReport {
    pub precondition_ok: bool,
    pub precondition_msg: Option<String>,
    pub rays_checked: usize,
    pub points_checked: usize,
    pub violations: usize,
    /// max over checked points of |∇F| / 2R; None when the check was refused.
    pub max_ratio: Option<f64>,
    pub y_floor: f64,
}

/// Checks the tree's radius certificate. The tree must have been built with
/// M = R cos θ, and R must dominate |(∇F)_{Q₀}|; otherwise the checker
/// refuses to certify.
pub fn verify_bounded_ray<F: HarmonicField + ?Sized>(
    field: &F,
    tree: &CantorTree,
    radius: f64,
    y_floor: f64,
    points_per_decade: usize,
) -> Result<RayCheckReport> {
    let refusal = |msg: String| RayCheckReport {
        precondition_ok: false,
        precondition_msg: Some(msg),
        rays_checked: 0,
        points_checked: 0,
        violations: 0,
        max_ratio: None,
        y_floor,
    };

    let expected_m = radius * tree.params.theta.cos();
    if (expected_m - tree.params.m_threshold).abs() > 1e-9 * radius.max(1.0) {
        return Ok(refusal(format!(
            "tree built with M = {} but R cos θ = {expected_m}",
            tree.params.m_threshold
        )));
    }
    let root_grad_norm = norm(&tree.root_avg);
    if radius < root_grad_norm {
        return Ok(refusal(format!(
            "R = {radius} is below |(∇F)_Q0| = {root_grad_norm}: radius precondition violated"
        )));
    }
    let l0 = tree.root.side();
    if !(y_floor > 0.0 && y_floor < l0) {
        return Err(Error::invalid("y_floor must lie in (0, l(Q0))"));
    }

    // The certificate for x in a final-generation cube Q' covers
    // y ∈ [l(Q'), l(Q₀)] (the chained Cor-3.6 windows), so each ray is
    // checked down to max(y_floor, l(Q')).
    let results: Vec<Result<(usize, usize, f64)>> = tree
        .final_generation()
        .par_iter()
        .map(|node| {
            let x = node.cube.center();
            let ray_floor = y_floor.max(node.cube.side());
            let grid = crate::sampling::log_grid_desc(ray_floor, l0, points_per_decade);
            let mut violations = 0usize;
            let mut max_ratio = 0.0f64;
            for y in &grid {
                let g = field.gradient(&x, *y)?;
                let ratio = norm(&g) / (2.0 * radius);
                max_ratio = max_ratio.max(ratio);
                if ratio > 1.0 {
                    violations += 1;
                }
            }
            Ok((grid.len(), violations, max_ratio))
        })
        .collect();

    let mut points_checked = 0usize;
    let mut violations = 0usize;
    let mut max_ratio = 0.0f64;
    let mut rays_checked = 0usize;
    for r in results {
        let (pts, v, m) = r?;
        points_checked += pts;
        violations += v;
        max_ratio = max_ratio.max(m);
        rays_checked += 1;
    }
    Ok(RayCheckReport {
        precondition_ok: true,
        precondition_msg: None,
        rays_checked,
        points_checked,
        violations,
        max_ratio: Some(max_ratio),
        y_floor,
    })
}

/// Checks the gradient-radius invariant of a built tree: when the radius
/// precondition holds, every generation's nodes keep |(∇F)_Q| ≤ R. Returns
/// the offending addresses (empty on success).
pub fn check_gradient_radii(tree: &CantorTree, radius: f64) -> Vec<String> {
    let mut offenders = Vec::new();
    for generation in &tree.generations {
        for node in generation {
            if norm(&node.avg_grad) > radius * (1.0 + 1e-12) {
                offenders.push(node.cube.address());
            }
        }
    }
    offenders
}

/// Empirical calibration of the per-generation oscillation constant C(N, d):
/// the sup over parent/child pairs of |(∇F)_parent − (∇F)_child| divided by
/// the Bloch seminorm estimate.
pub fn calibrate_c_const<F: HarmonicField + ?Sized>(
    field: &F,
    root: &NadicCube,
    depth: u32,
    quad_m: usize,
    bloch_norm: f64,
) -> Result<f64> {
    if bloch_norm <= 0.0 {
        return Err(Error::invalid("Bloch seminorm must be positive"));
    }
    fn walk<F: HarmonicField + ?Sized>(
        field: &F,
        cube: &NadicCube,
        avg: &[f64],
        depth_left: u32,
        quad_m: usize,
    ) -> Result<f64> {
        if depth_left == 0 {
            return Ok(0.0);
        }
        let per_child: Vec<Result<f64>> = cube
            .children()
            .par_iter()
            .map(|child| {
                let child_avg = face_average_gradient(field, child, quad_m)?;
                let jump = norm(&sub(&child_avg, avg));
                let below = walk(field, child, &child_avg, depth_left - 1, quad_m)?;
                Ok(jump.max(below))
            })
            .collect();
        let mut max = 0.0f64;
        for r in per_child {
            max = max.max(r?);
        }
        Ok(max)
    }
    let root_avg = face_average_gradient(field, root, quad_m)?;
    Ok(walk(field, root, &root_avg, depth, quad_m)? / bloch_norm)
}
