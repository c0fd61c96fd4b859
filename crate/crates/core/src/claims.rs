//! Registry of quantitative statements about random cyclic polygons, each
//! bound to a sampler, an estimator and an acceptance rule.
//!
//! Acceptance rules by kind:
//! - `moment` / `correlation`: `|estimate − analytic| <= z_band · stderr`
//! - `density_1d`: Kolmogorov–Smirnov at level `alpha`
//! - `density_2d` / `density_3d`: Pearson χ² at level `alpha`, split evenly
//!   (Bonferroni) across the sub-tests of a claim
//! - `identity`: largest absolute defect over all samples `<= identity_tol`
//!
//! Samples are drawn in fixed-size blocks; block `b` of lane `l` always uses
//! stream `(seed, l << 40 | b)`, and per-block results are merged in block
//! order. Results therefore do not depend on the worker count.

use std::f64::consts::{FRAC_PI_4, PI};
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analytic::{
    self, closed_form_moment, gap_density, in_quad_tetrahedron, moment_entry, orderstat_pair_pdf, tent_pdf,
    triangle_angle_pdf, AnalyticError, Density1d, GapLaw, OrderPair,
};
use crate::montecarlo::{
    chi_square_goodness, chi_square_independence, ks_test, ChiSquareOptions, ChiSquareReport, HistogramNd, MassTable,
    MomentAccumulator, PairAccumulator, StatsError, KS_MIN_SAMPLES,
};
use crate::polygon::{
    angles_from_sides, measure, sample_central_angles, third_side_triangle, Branch, CentralAngles, PolygonError,
    PolygonMeasurements, RngStream,
};
use crate::special::{integrate, QuadratureError, QuadratureSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClaimError {
    #[error("unknown claim id `{0}`")]
    UnknownClaim(String),
    #[error("{claim}: insufficient samples (need at least {needed}, got {got})")]
    InsufficientSamples { claim: String, needed: usize, got: usize },
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error("invalid run options: {0}")]
    Options(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimKind {
    Moment,
    Correlation,
    Density1d,
    Density2d,
    Density3d,
    Identity,
}

impl ClaimKind {
    pub fn min_samples(self) -> usize {
        match self {
            ClaimKind::Moment | ClaimKind::Correlation => 10,
            ClaimKind::Density1d => KS_MIN_SAMPLES,
            ClaimKind::Density2d | ClaimKind::Density3d => 1000,
            ClaimKind::Identity => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimKind::Moment => "moment",
            ClaimKind::Correlation => "correlation",
            ClaimKind::Density1d => "density_1d",
            ClaimKind::Density2d => "density_2d",
            ClaimKind::Density3d => "density_3d",
            ClaimKind::Identity => "identity",
        }
    }
}

type Runner = fn(&Ctx) -> Result<Evaluation, ClaimError>;

#[derive(Clone, Copy)]
pub struct Claim {
    pub id: &'static str,
    pub description: &'static str,
    pub paper_location: &'static str,
    pub kind: ClaimKind,
    pub conjecture: bool,
    pub default_samples: usize,
    run: Runner,
}

impl std::fmt::Debug for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Claim")
            .field("id", &self.id)
            .field("kind", &self.kind)
            .field("conjecture", &self.conjecture)
            .field("default_samples", &self.default_samples)
            .finish()
    }
}

/// Outcome of one claim. Fields that do not apply to a claim's kind are
/// `None` and serialize as `null`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimResult {
    pub claim_id: String,
    pub description: String,
    pub paper_location: String,
    pub conjecture: bool,
    pub kind: ClaimKind,
    /// target value, or the critical value for distributional tests
    pub analytic: Option<f64>,
    pub estimate: Option<f64>,
    pub stderr: Option<f64>,
    /// z-score, KS distance, χ² statistic or largest defect
    pub statistic: Option<f64>,
    pub pass: bool,
    pub n_samples: usize,
    pub seed: u64,
    pub workers: usize,
    pub elapsed_seconds: f64,
    /// diagnostics such as sub-test statistics; not part of the JSON schema
    #[serde(skip)]
    pub notes: Option<String>,
    /// why the claim could not be evaluated; not part of the JSON schema
    #[serde(skip)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub seed: u64,
    pub workers: usize,
    pub alpha: f64,
    pub z_band: f64,
    pub dependence_band: f64,
    pub identity_tol: f64,
    pub bins_2d: usize,
    pub bins_3d: usize,
    pub cdf_table_intervals: usize,
    /// `false` reports `elapsed_seconds` as 0 so reports are byte-stable
    pub record_timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            seed: 20_161_003,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            alpha: 0.01,
            z_band: 4.0,
            dependence_band: 5.0,
            identity_tol: 1e-9,
            bins_2d: 24,
            bins_3d: 16,
            cdf_table_intervals: 4096,
            record_timing: true,
        }
    }
}

impl RunOptions {
    fn validate(&self) -> Result<(), ClaimError> {
        if self.workers == 0 {
            return Err(ClaimError::Options("workers must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(ClaimError::Options("alpha must lie in (0, 1)".into()));
        }
        if self.bins_2d < 2 || self.bins_3d < 2 {
            return Err(ClaimError::Options("need at least 2 bins per axis".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
struct Evaluation {
    analytic: Option<f64>,
    estimate: Option<f64>,
    stderr: Option<f64>,
    statistic: Option<f64>,
    pass: bool,
    notes: Option<String>,
}

struct Ctx<'a> {
    n: usize,
    opts: &'a RunOptions,
    pool: rayon::ThreadPool,
}

const BLOCK: usize = 8192;
const SECOND_LANE: u64 = 1;

trait Merge: Send {
    fn merge_from(&mut self, other: Self);
}

impl Merge for MomentAccumulator {
    fn merge_from(&mut self, other: Self) {
        self.merge(&other);
    }
}

impl Merge for PairAccumulator {
    fn merge_from(&mut self, other: Self) {
        self.merge(&other);
    }
}

impl Merge for Vec<f64> {
    fn merge_from(&mut self, other: Self) {
        self.extend(other);
    }
}

impl Merge for Vec<HistogramNd> {
    fn merge_from(&mut self, other: Self) {
        for (h, o) in self.iter_mut().zip(&other) {
            h.merge(o);
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct MaxDefect(f64);

impl Merge for MaxDefect {
    fn merge_from(&mut self, other: Self) {
        self.0 = self.0.max(other.0);
    }
}

impl<A: Merge, B: Merge> Merge for (A, B) {
    fn merge_from(&mut self, other: Self) {
        self.0.merge_from(other.0);
        self.1.merge_from(other.1);
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct OutsideCount(u64);

impl Merge for OutsideCount {
    fn merge_from(&mut self, other: Self) {
        self.0 += other.0;
    }
}

/// Counts behind the adjacent-angle dependence witness.
#[derive(Debug, Clone, Copy, Default)]
struct JointCounts {
    n: u64,
    a: u64,
    b: u64,
    ab: u64,
}

impl Merge for JointCounts {
    fn merge_from(&mut self, other: Self) {
        self.n += other.n;
        self.a += other.a;
        self.b += other.b;
        self.ab += other.ab;
    }
}

impl Ctx<'_> {
    fn sample<A, I, V>(&self, order: usize, lane: u64, init: I, visit: V) -> Result<A, ClaimError>
    where
        A: Merge,
        I: Fn() -> A + Sync,
        V: Fn(&mut A, &CentralAngles, &PolygonMeasurements, &mut ChaCha8Rng) -> Result<(), ClaimError> + Sync,
    {
        let n = self.n;
        let seed = self.opts.seed;
        let blocks = n.div_ceil(BLOCK);
        let parts: Vec<Result<A, ClaimError>> = self.pool.install(|| {
            (0..blocks)
                .into_par_iter()
                .map(|b| {
                    let count = BLOCK.min(n - b * BLOCK);
                    let mut rng = RngStream::new(seed, (lane << 40) | b as u64).generator();
                    let mut acc = init();
                    for _ in 0..count {
                        let poly = sample_central_angles(order, &mut rng)?;
                        let m = measure(&poly);
                        visit(&mut acc, &poly, &m, &mut rng)?;
                    }
                    Ok(acc)
                })
                .collect()
        });
        let mut total = init();
        for part in parts {
            total.merge_from(part?);
        }
        Ok(total)
    }

    fn band(&self, target: f64, estimate: f64, stderr: f64) -> Evaluation {
        let z = if stderr > 0.0 {
            (estimate - target) / stderr
        } else if estimate == target {
            0.0
        } else {
            f64::INFINITY
        };
        Evaluation {
            analytic: Some(target),
            estimate: Some(estimate),
            stderr: Some(stderr),
            statistic: Some(z),
            pass: z.abs() <= self.opts.z_band,
            notes: None,
        }
    }

    fn chi_options(&self, parts: usize) -> ChiSquareOptions {
        ChiSquareOptions {
            alpha: self.opts.alpha / parts as f64,
            ..ChiSquareOptions::default()
        }
    }
}

fn target(id: &str) -> f64 {
    closed_form_moment(id).expect("claim targets are registered moments")
}

fn pick<R: Rng>(rng: &mut R, n: usize) -> usize {
    rng.gen_range(0..n)
}

// ---------------------------------------------------------------- moments

fn quad_moment(ctx: &Ctx, id: &str, f: fn(&PolygonMeasurements) -> f64) -> Result<Evaluation, ClaimError> {
    let acc = ctx.sample(4, 0, MomentAccumulator::new, |acc, _, m, _| {
        acc.push(f(m));
        Ok(())
    })?;
    let s = acc.summary()?;
    Ok(ctx.band(target(id), s.mean, s.stderr))
}

fn mean_of(v: impl Iterator<Item = f64>, k: usize) -> f64 {
    v.sum::<f64>() / k as f64
}

fn side_mean(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    quad_moment(ctx, "SIDE_MEAN", |m| mean_of(m.sides.iter().copied(), 4))
}

fn side_m2(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    quad_moment(ctx, "SIDE_M2", |m| mean_of(m.sides.iter().map(|s| s * s), 4))
}

fn side_adj_product(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    quad_moment(ctx, "SIDE_ADJ_PRODUCT", |m| {
        mean_of((0..4).map(|k| m.sides[k] * m.sides[(k + 1) % 4]), 4)
    })
}

fn side_opp_product(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    quad_moment(ctx, "SIDE_OPP_PRODUCT", |m| {
        0.5 * (m.sides[0] * m.sides[2] + m.sides[1] * m.sides[3])
    })
}

fn side_s2s3_product(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    quad_moment(ctx, "SIDE_S2S3_PRODUCT", |m| m.sides[1] * m.sides[2])
}

fn side_s1s2_product(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    quad_moment(ctx, "SIDE_S1S2_PRODUCT", |m| m.sides[0] * m.sides[1])
}

fn diagonals(m: &PolygonMeasurements) -> [f64; 2] {
    m.diagonals.expect("quadrilaterals have diagonals")
}

fn diag_mean(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    quad_moment(ctx, "DIAG_MEAN", |m| mean_of(diagonals(m).into_iter(), 2))
}

fn diag_m2(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    quad_moment(ctx, "DIAG_M2", |m| mean_of(diagonals(m).iter().map(|d| d * d), 2))
}

fn quad_area_mean(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    quad_moment(ctx, "QUAD_AREA_MEAN", |m| m.area)
}

fn quad_area_m2(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    quad_moment(ctx, "QUAD_AREA_M2", |m| m.area * m.area)
}

fn triangle_area_moments(ctx: &Ctx, lane: u64) -> Result<MomentAccumulator, ClaimError> {
    ctx.sample(3, lane, MomentAccumulator::new, |acc, _, m, _| {
        acc.push(m.area);
        Ok(())
    })
}

fn tri_area_moment(ctx: &Ctx, id: &str, power: i32) -> Result<Evaluation, ClaimError> {
    const QUADRATURE_TOL: f64 = 1e-6;
    let exact = target(id);
    let density = analytic::triangle_area_density();
    let q = density.moment(power, &QuadratureSpec::default())?;
    let acc = ctx.sample(3, 0, MomentAccumulator::new, |acc, _, m, _| {
        acc.push(m.area.powi(power));
        Ok(())
    })?;
    let s = acc.summary()?;
    let mut eval = ctx.band(exact, s.mean, s.stderr);
    let quad_ok = (q.value - exact).abs() <= QUADRATURE_TOL;
    eval.pass &= quad_ok;
    eval.notes = Some(format!(
        "quadrature of x^{power}·pdf: {:.12} (|Δ| = {:.3e}, tolerance {QUADRATURE_TOL:e}); \
         integrated up to cutoff {:.12} = {:e} below the maximum area; \
         flat-tail estimate above cutoff {:.3e} (lost probability mass {:.3e})",
        q.value,
        (q.value - exact).abs(),
        density.upper_cutoff.unwrap_or(f64::NAN),
        analytic::TRIANGLE_AREA_CUTOFF_FRACTION,
        q.tail,
        density.tail_mass(),
    ));
    Ok(eval)
}

fn tri_area_mean(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    tri_area_moment(ctx, "TRI_AREA_MEAN", 1)
}

fn tri_area_m2(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    tri_area_moment(ctx, "TRI_AREA_M2", 2)
}

fn quad_area_twice_tri(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    let quad = ctx.sample(4, 0, MomentAccumulator::new, |acc, _, m, _| {
        acc.push(m.area);
        Ok(())
    })?;
    let tri = triangle_area_moments(ctx, SECOND_LANE)?;
    let (q, t) = (quad.summary()?, tri.summary()?);
    let ratio = q.mean / t.mean;
    let stderr = ratio * ((q.stderr / q.mean).powi(2) + (t.stderr / t.mean).powi(2)).sqrt();
    Ok(ctx.band(target("QUAD_AREA_TWICE_TRI"), ratio, stderr))
}

// ----------------------------------------------------------- correlations

fn correlation_claim(
    ctx: &Ctx,
    id: &str,
    order: usize,
    offset: usize,
    center: f64,
    values: fn(&PolygonMeasurements) -> &[f64],
) -> Result<Evaluation, ClaimError> {
    let acc = ctx.sample(
        order,
        0,
        || PairAccumulator::with_center(center, center),
        |acc, _, m, rng| {
            let v = values(m);
            let k = pick(rng, order);
            acc.push(v[k], v[(k + offset) % order]);
            Ok(())
        },
    )?;
    let c = acc.correlation()?;
    Ok(ctx.band(target(id), c.rho, c.stderr))
}

fn angles_of(m: &PolygonMeasurements) -> &[f64] {
    &m.angles
}

fn sides_of(m: &PolygonMeasurements) -> &[f64] {
    &m.sides
}

fn mean_angle(order: usize) -> f64 {
    (order as f64 - 2.0) * PI / order as f64
}

fn side_adj_corr(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    // the printed value is rounded to three decimals
    const PRINTED: f64 = -0.183;
    let mut eval = correlation_claim(ctx, "SIDE_ADJ_CORR", 4, 1, target("SIDE_MEAN"), sides_of)?;
    let exact = target("SIDE_ADJ_CORR");
    let agrees = (exact - PRINTED).abs() <= 1e-3;
    eval.pass &= agrees;
    eval.notes = Some(format!(
        "exact value assembled from E(s), E(s²), E(st): {exact:.10}; \
         |exact − ({PRINTED})| = {:.2e} (tolerance 1e-3)",
        (exact - PRINTED).abs()
    ));
    Ok(eval)
}

macro_rules! angle_corr {
    ($name:ident, $id:literal, $order:literal, $offset:literal) => {
        fn $name(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
            correlation_claim(ctx, $id, $order, $offset, mean_angle($order), angles_of)
        }
    };
}

angle_corr!(tent_rho_zero, "TENT_RHO", 4, 1);
angle_corr!(tri_angle_rho, "TRI_ANGLE_RHO", 3, 1);
angle_corr!(pent_rho_adj, "PENT_RHO_ADJ", 5, 1);
angle_corr!(pent_rho_nonadj, "PENT_RHO_NONADJ", 5, 2);
angle_corr!(pent_rho_delta, "PENT_RHO_DELTA", 5, 3);
angle_corr!(pent_rho_phi, "PENT_RHO_PHI", 5, 4);
angle_corr!(hex_rho_adj, "HEX_RHO_ADJ", 6, 1);
angle_corr!(hex_rho_gamma, "HEX_RHO_GAMMA", 6, 2);
angle_corr!(hex_rho_delta, "HEX_RHO_DELTA", 6, 3);
angle_corr!(hex_rho_phi, "HEX_RHO_PHI", 6, 4);
angle_corr!(hex_rho_psi, "HEX_RHO_PSI", 6, 5);

fn tent_dependence(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    let c = ctx.sample(4, 0, JointCounts::default, |acc, _, m, rng| {
        let k = pick(rng, 4);
        let (a, b) = (m.angles[k] < FRAC_PI_4, m.angles[(k + 1) % 4] < FRAC_PI_4);
        acc.n += 1;
        acc.a += u64::from(a);
        acc.b += u64::from(b);
        acc.ab += u64::from(a && b);
        Ok(())
    })?;
    let n = c.n as f64;
    let (pa, pb, pab) = (c.a as f64 / n, c.b as f64 / n, c.ab as f64 / n);
    let gap = pab - pa * pb;
    // delta method on (p_ab, p_a, p_b) with gradient (1, −p_b, −p_a)
    let g = [1.0, -pb, -pa];
    let cov = [
        [pab * (1.0 - pab), pab * (1.0 - pa), pab * (1.0 - pb)],
        [pab * (1.0 - pa), pa * (1.0 - pa), pab - pa * pb],
        [pab * (1.0 - pb), pab - pa * pb, pb * (1.0 - pb)],
    ];
    let var: f64 = (0..3)
        .map(|i| (0..3).map(|j| g[i] * cov[i][j] * g[j]).sum::<f64>())
        .sum::<f64>()
        / n;
    let stderr = var.max(0.0).sqrt();
    let z = if stderr > 0.0 { gap / stderr } else { f64::INFINITY };
    // under the tent law: P(α<π/4, β<π/4) = 1/32 and P(α<π/4) = 5/32
    let exact = 1.0 / 32.0 - (5.0 / 32.0) * (5.0 / 32.0);
    Ok(Evaluation {
        analytic: Some(exact),
        estimate: Some(gap),
        stderr: Some(stderr),
        statistic: Some(z),
        pass: z.abs() > ctx.opts.dependence_band,
        notes: Some(format!(
            "P̂(α<π/4 ∧ β<π/4) = {pab:.6}, P̂(α<π/4)·P̂(β<π/4) = {:.6}; pass requires |z| > {}",
            pa * pb,
            ctx.opts.dependence_band
        )),
    })
}

// ----------------------------------------------------------------- KS

fn ks_claim(
    ctx: &Ctx,
    density: Density1d,
    order: usize,
    draw: fn(&CentralAngles, &PolygonMeasurements, &mut ChaCha8Rng) -> f64,
) -> Result<Evaluation, ClaimError> {
    let table = density.tabulate(ctx.opts.cdf_table_intervals, &QuadratureSpec::default())?;
    let samples = ctx.sample(order, 0, Vec::new, |acc: &mut Vec<f64>, poly, m, rng| {
        acc.push(draw(poly, m, rng));
        Ok(())
    })?;
    let r = ks_test(&samples, |x| table.eval(x), ctx.opts.alpha)?;
    Ok(Evaluation {
        analytic: Some(r.threshold_at_alpha),
        estimate: Some(r.d_statistic),
        stderr: None,
        statistic: Some(r.d_statistic),
        pass: r.pass,
        notes: None,
    })
}

fn normalized_gap(poly: &CentralAngles, i: usize, j: usize) -> f64 {
    (poly.theta()[j] - poly.theta()[i]) / std::f64::consts::TAU
}

fn side_ks(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    ks_claim(ctx, analytic::side_density(), 4, |_, m, rng| m.sides[pick(rng, 4)])
}

fn diag_ks(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    ks_claim(ctx, analytic::diagonal_density(), 4, |_, m, rng| {
        diagonals(m)[pick(rng, 2)]
    })
}

fn angle_ks(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    ks_claim(ctx, analytic::angle_density(), 4, |_, m, rng| m.angles[pick(rng, 4)])
}

fn gap21_ks(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    ks_claim(ctx, gap_density(GapLaw::G21), 4, |p, _, _| normalized_gap(p, 0, 1))
}

fn gap31_ks(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    ks_claim(ctx, gap_density(GapLaw::G31), 4, |p, _, _| normalized_gap(p, 0, 2))
}

fn gap41_ks(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    ks_claim(ctx, gap_density(GapLaw::G41), 4, |p, _, _| normalized_gap(p, 0, 3))
}

fn tri_side_marginal_ks(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    ks_claim(ctx, analytic::triangle_side_density(), 3, |_, m, rng| {
        m.sides[pick(rng, 3)]
    })
}

fn tri_area_ks(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    ks_claim(ctx, analytic::triangle_area_density(), 3, |_, m, _| m.area)
}

// ---------------------------------------------------------------- χ²

const INNER_MASS_SPEC: QuadratureSpec = QuadratureSpec {
    abs_tol: 1e-15,
    rel_tol: 1e-12,
    max_depth: 50,
};

// looser than the inner pass, so the outer rule is not refining inner noise
const OUTER_MASS_SPEC: QuadratureSpec = QuadratureSpec {
    abs_tol: 1e-12,
    rel_tol: 1e-9,
    max_depth: 30,
};

/// ∫∫ pdf over the bin `[lo, hi]`, with the inner variable further limited
/// to `clip(x)`.
fn region_mass<P, C>(pdf: P, lo: &[f64], hi: &[f64], clip: C) -> Result<f64, QuadratureError>
where
    P: Fn(f64, f64) -> f64,
    C: Fn(f64) -> (f64, f64),
{
    let failure = std::cell::RefCell::new(None);
    let inner = |x: f64| {
        let (a, b) = clip(x);
        let (a, b) = (a.max(lo[1]), b.min(hi[1]));
        if b <= a {
            return 0.0;
        }
        integrate(|y| pdf(x, y), a, b, &INNER_MASS_SPEC).unwrap_or_else(|e| {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        })
    };
    let outer = integrate(inner, lo[0], hi[0], &OUTER_MASS_SPEC);
    match failure.into_inner() {
        Some(e) => Err(e),
        None => outer,
    }
}

fn mass_table<F>(hist: &HistogramNd, mass: F) -> Result<MassTable, ClaimError>
where
    F: Fn(&[f64], &[f64]) -> Result<Option<f64>, ClaimError>,
{
    (0..hist.counts().len())
        .map(|b| {
            let (lo, hi) = hist.bin_box(b);
            mass(&lo, &hi)
        })
        .collect::<Result<Vec<_>, _>>()
        .map(MassTable)
}

fn tent_masses(hist: &HistogramNd) -> Result<MassTable, ClaimError> {
    mass_table(hist, |lo, hi| Ok(Some(region_mass(tent_pdf, lo, hi, |_| (0.0, PI))?)))
}

fn summarize_chi(reports: &[ChiSquareReport]) -> Evaluation {
    let worst = reports
        .iter()
        .max_by(|a, b| (a.statistic / a.threshold_at_alpha).total_cmp(&(b.statistic / b.threshold_at_alpha)))
        .expect("at least one sub-test");
    let detail: Vec<String> = reports
        .iter()
        .map(|r| format!("χ²={:.2} dof={} crit={:.2}", r.statistic, r.dof, r.threshold_at_alpha))
        .collect();
    Evaluation {
        analytic: Some(worst.threshold_at_alpha),
        estimate: Some(worst.statistic),
        stderr: None,
        statistic: Some(worst.statistic),
        pass: reports.iter().all(|r| r.pass),
        notes: (reports.len() > 1).then(|| detail.join("; ")),
    }
}

fn square_hist(side: f64, bins: usize) -> Result<HistogramNd, ClaimError> {
    Ok(HistogramNd::new(&[0.0, 0.0], &[side, side], &[bins, bins])?)
}

fn orderstat_pair_chi2(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    let template = square_hist(1.0, ctx.opts.bins_2d)?;
    let hists = ctx.sample(
        4,
        0,
        || vec![template.clone(); 4],
        |hs: &mut Vec<HistogramNd>, poly, _, _| {
            for (h, pair) in hs.iter_mut().zip(OrderPair::ALL) {
                let (i, j) = pair.indices();
                let u = poly.theta()[i] / std::f64::consts::TAU;
                let v = poly.theta()[j] / std::f64::consts::TAU;
                h.add(&[u, v])?;
            }
            Ok(())
        },
    )?;
    let opts = ctx.chi_options(4);
    let reports = hists
        .iter()
        .zip(OrderPair::ALL)
        .map(|(h, pair)| {
            let masses = mass_table(h, |lo, hi| {
                Ok(Some(region_mass(
                    |x, y| orderstat_pair_pdf(pair, x, y),
                    lo,
                    hi,
                    |x| (x, 1.0),
                )?))
            })?;
            Ok(chi_square_goodness(h, &masses, &opts)?)
        })
        .collect::<Result<Vec<_>, ClaimError>>()?;
    Ok(summarize_chi(&reports))
}

fn tent_chi2(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    let template = square_hist(PI, ctx.opts.bins_2d)?;
    let hists = ctx.sample(
        4,
        0,
        || vec![template.clone()],
        |hs: &mut Vec<HistogramNd>, _, m, rng| {
            let k = pick(rng, 4);
            hs[0].add(&[m.angles[k], m.angles[(k + 1) % 4]])?;
            Ok(())
        },
    )?;
    let masses = tent_masses(&template)?;
    let r = chi_square_goodness(&hists[0], &masses, &ctx.chi_options(1))?;
    Ok(summarize_chi(&[r]))
}

fn tri_side_indep_chi2(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    let template = square_hist(2.0, ctx.opts.bins_2d)?;
    let hists = ctx.sample(
        3,
        0,
        || vec![template.clone()],
        |hs: &mut Vec<HistogramNd>, _, m, rng| {
            let k = pick(rng, 3);
            hs[0].add(&[m.sides[k], m.sides[(k + 1) % 3]])?;
            Ok(())
        },
    )?;
    let h = &hists[0];
    let own = chi_square_independence(h, ctx.opts.alpha / 2.0)?;
    let marginal = analytic::triangle_side_density();
    let spec = QuadratureSpec::default();
    let edges = h.edges(0);
    let cdf: Vec<f64> = edges
        .iter()
        .map(|&x| marginal.cdf(x, &spec))
        .collect::<Result<_, _>>()?;
    let bins = ctx.opts.bins_2d;
    let masses = MassTable(
        (0..bins * bins)
            .map(|flat| {
                let (i, j) = (flat / bins, flat % bins);
                Some((cdf[i + 1] - cdf[i]) * (cdf[j + 1] - cdf[j]))
            })
            .collect(),
    );
    let analytic_product = chi_square_goodness(h, &masses, &ctx.chi_options(2))?;
    let mut eval = summarize_chi(&[own, analytic_product]);
    eval.notes = Some(format!(
        "independence vs own margins: χ²={:.2} dof={} crit={:.2}; vs analytic product: χ²={:.2} dof={} crit={:.2}",
        own.statistic,
        own.dof,
        own.threshold_at_alpha,
        analytic_product.statistic,
        analytic_product.dof,
        analytic_product.threshold_at_alpha
    ));
    Ok(eval)
}

fn tri_angle_uniform_chi2(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    let template = square_hist(PI, ctx.opts.bins_2d)?;
    let hists = ctx.sample(
        3,
        0,
        || vec![template.clone()],
        |hs: &mut Vec<HistogramNd>, _, m, rng| {
            let k = pick(rng, 3);
            hs[0].add(&[m.angles[k], m.angles[(k + 1) % 3]])?;
            Ok(())
        },
    )?;
    let masses = mass_table(&template, |lo, hi| {
        Ok(Some(region_mass(triangle_angle_pdf, lo, hi, |x| (0.0, PI - x))?))
    })?;
    let r = chi_square_goodness(&hists[0], &masses, &ctx.chi_options(1))?;
    Ok(summarize_chi(&[r]))
}

fn quad_triple(m: &PolygonMeasurements) -> [f64; 3] {
    [m.angles[1], m.angles[2], m.omega.expect("quadrilaterals have ω")]
}

/// `(α, β, ω)` after rotating the labels by `j` places. With θ₁ fixed as the
/// smallest angle the wrap gap is size-biased, so the labelled triple is not
/// exchangeable; a uniform rotation restores the law of an arbitrary vertex.
fn rotated_quad_triple<R: Rng>(m: &PolygonMeasurements, rng: &mut R) -> [f64; 3] {
    let j = pick(rng, 4);
    let w = m.omega.expect("quadrilaterals have ω");
    [
        m.angles[(1 + j) % 4],
        m.angles[(2 + j) % 4],
        if j.is_multiple_of(2) { w } else { PI - w },
    ]
}

fn quad_f_support_chi2(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    let bins = ctx.opts.bins_3d;
    let template = HistogramNd::new(&[0.0; 3], &[PI; 3], &[bins; 3])?;
    let (hists, outside) = ctx.sample(
        4,
        0,
        || (vec![template.clone()], OutsideCount(0)),
        |(hs, out): &mut (Vec<HistogramNd>, OutsideCount), _, m, rng| {
            let [a, b, w] = rotated_quad_triple(m, rng);
            if !in_quad_tetrahedron(a, b, w) {
                out.0 += 1;
            }
            hs[0].add(&[a, b, w])?;
            Ok(())
        },
    )?;
    // bins with every corner in the closed tetrahedron; the rest are pooled
    let inside_closed = |a: f64, b: f64, w: f64| {
        const EPS: f64 = 1e-12;
        a + b >= w - EPS && a + w >= b - EPS && b + w >= a - EPS && a + b + w <= 2.0 * PI + EPS
    };
    let density = 3.0 / (PI * PI * PI);
    let masses = mass_table(&template, |lo, hi| {
        let corners_inside = (0..8).all(|c: usize| {
            let p = |axis: usize| if c >> axis & 1 == 0 { lo[axis] } else { hi[axis] };
            inside_closed(p(0), p(1), p(2))
        });
        let volume: f64 = lo.iter().zip(hi).map(|(l, h)| h - l).product();
        Ok(corners_inside.then_some(density * volume))
    })?;
    let r = chi_square_goodness(&hists[0], &masses, &ctx.chi_options(1))?;
    let mut eval = summarize_chi(&[r]);
    eval.pass &= outside.0 == 0;
    eval.notes = Some(format!(
        "samples outside the tetrahedron: {}; interior bins tested: {}, pooled boundary/exterior bins: {}",
        outside.0, r.dof, r.pooled_bins
    ));
    Ok(eval)
}

fn quad_f_marginal_tent(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    let template = square_hist(PI, ctx.opts.bins_2d)?;
    let hists = ctx.sample(
        4,
        0,
        || vec![template.clone(); 3],
        |hs: &mut Vec<HistogramNd>, _, m, rng| {
            let [a, b, w] = rotated_quad_triple(m, rng);
            hs[0].add(&[a, b])?;
            hs[1].add(&[a, w])?;
            hs[2].add(&[b, w])?;
            Ok(())
        },
    )?;
    let masses = tent_masses(&template)?;
    let opts = ctx.chi_options(3);
    let reports = hists
        .iter()
        .map(|h| chi_square_goodness(h, &masses, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut eval = summarize_chi(&reports);
    eval.notes = eval.notes.map(|d| format!("pairs (α,β), (α,ω), (β,ω): {d}"));
    Ok(eval)
}

// ----------------------------------------------------------- identities

fn identity_claim(
    ctx: &Ctx,
    orders: &[(usize, u64)],
    defect: fn(&CentralAngles, &PolygonMeasurements) -> Result<f64, ClaimError>,
) -> Result<Evaluation, ClaimError> {
    let mut worst = 0.0f64;
    for &(order, lane) in orders {
        let d = ctx.sample(order, lane, MaxDefect::default, |acc, poly, m, _| {
            let d = defect(poly, m)?;
            acc.0 = acc.0.max(if d.is_nan() { f64::INFINITY } else { d });
            Ok(())
        })?;
        worst = worst.max(d.0);
    }
    Ok(Evaluation {
        analytic: Some(ctx.opts.identity_tol),
        estimate: Some(worst),
        stderr: None,
        statistic: Some(worst),
        pass: worst <= ctx.opts.identity_tol,
        notes: None,
    })
}

fn opp_angles_supplementary(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    identity_claim(ctx, &[(4, 0)], |_, m| {
        Ok((m.angles[0] + m.angles[2] - PI)
            .abs()
            .max((m.angles[1] + m.angles[3] - PI).abs()))
    })
}

fn angle_sum_identity(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    identity_claim(ctx, &[(3, 0), (4, 0), (5, 0), (6, 0)], |_, m| {
        let n = m.angles.len() as f64;
        Ok((m.angles.iter().sum::<f64>() - (n - 2.0) * PI).abs())
    })
}

fn area_trig_vs_shoelace(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    identity_claim(ctx, &[(4, 0), (3, SECOND_LANE)], |_, m| {
        Ok((m.trig_area().expect("n is 3 or 4") - m.area).abs())
    })
}

fn diagonal_sine_identity(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    identity_claim(ctx, &[(4, 0)], |_, m| {
        let [d1, d2] = diagonals(m);
        Ok((d1 - 2.0 * m.angles[0].sin())
            .abs()
            .max((d2 - 2.0 * m.angles[1].sin()).abs()))
    })
}

fn tri_third_side_identity(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    identity_claim(ctx, &[(3, 0)], |_, m| {
        let mut worst = 0.0f64;
        for k in 0..3 {
            let (a, b, c) = (m.sides[k], m.sides[(k + 1) % 3], m.sides[(k + 2) % 3]);
            let plus = third_side_triangle(a, b, Branch::Plus)?;
            let minus = third_side_triangle(a, b, Branch::Minus)?;
            worst = worst.max((c - plus).abs().min((c - minus).abs()));
        }
        Ok(worst)
    })
}

fn tan_half_angle_identity(ctx: &Ctx) -> Result<Evaluation, ClaimError> {
    identity_claim(ctx, &[(4, 0)], |_, m| {
        let s = &m.sides;
        let (a, b, w) = angles_from_sides(s[1], s[2], s[3], s[0])?;
        let [ea, eb, ew] = quad_triple(m);
        Ok((a - ea).abs().max((b - eb).abs()).max((w - ew).abs()))
    })
}

// ------------------------------------------------------------- registry

const M: usize = 1_000_000;

#[allow(clippy::too_many_arguments)]
const fn claim(
    id: &'static str,
    description: &'static str,
    paper_location: &'static str,
    kind: ClaimKind,
    conjecture: bool,
    default_samples: usize,
    run: Runner,
) -> Claim {
    Claim {
        id,
        description,
        paper_location,
        kind,
        conjecture,
        default_samples,
        run,
    }
}

use ClaimKind::{
    Correlation as Corr, Density1d as D1, Density2d as D2, Density3d as D3, Identity as Ident, Moment as Mom,
};

static REGISTRY: &[Claim] = &[
    claim(
        "SIDE_MEAN",
        "Mean length of an arbitrary side of a random cyclic quadrilateral",
        "Sides",
        Mom,
        false,
        M,
        side_mean,
    ),
    claim(
        "SIDE_M2",
        "Mean squared length of an arbitrary side",
        "Sides",
        Mom,
        false,
        M,
        side_m2,
    ),
    claim(
        "SIDE_ADJ_PRODUCT",
        "Mean product of two adjacent sides",
        "Sides",
        Mom,
        false,
        M,
        side_adj_product,
    ),
    claim(
        "SIDE_OPP_PRODUCT",
        "Mean product of two opposite sides equals the adjacent-side value",
        "Sides",
        Mom,
        false,
        M,
        side_opp_product,
    ),
    claim(
        "SIDE_S2S3_PRODUCT",
        "Mean product of the labelled sides s2 and s3",
        "Sides",
        Mom,
        false,
        M,
        side_s2s3_product,
    ),
    claim(
        "SIDE_S1S2_PRODUCT",
        "Mean product of the labelled sides s1 and s2",
        "Sides",
        Mom,
        false,
        M,
        side_s1s2_product,
    ),
    claim(
        "SIDE_ADJ_CORR",
        "Correlation of two adjacent sides (exact value vs printed -0.183, and Monte Carlo)",
        "Sides",
        Corr,
        false,
        M,
        side_adj_corr,
    ),
    claim(
        "DIAG_MEAN",
        "Mean length of a diagonal",
        "Sides",
        Mom,
        false,
        M,
        diag_mean,
    ),
    claim(
        "DIAG_M2",
        "Mean squared length of a diagonal",
        "Sides",
        Mom,
        false,
        M,
        diag_m2,
    ),
    claim(
        "SIDE_KS",
        "Arbitrary side follows the mixed side density",
        "Sides",
        D1,
        false,
        M,
        side_ks,
    ),
    claim(
        "DIAG_KS",
        "Diagonal follows the diagonal density",
        "Sides",
        D1,
        false,
        M,
        diag_ks,
    ),
    claim(
        "GAP21_KS",
        "X2 - X1 for four uniform order statistics has density 4(1-u)^3",
        "Sides",
        D1,
        false,
        M,
        gap21_ks,
    ),
    claim(
        "GAP31_KS",
        "X3 - X1 has density 12u(1-u)^2",
        "Sides",
        D1,
        false,
        M,
        gap31_ks,
    ),
    claim(
        "GAP41_KS",
        "X4 - X1 has density 12u^2(1-u)",
        "Sides",
        D1,
        false,
        M,
        gap41_ks,
    ),
    claim(
        "ORDERSTAT_PAIR_CHI2",
        "Joint densities of (X1,X2), (X1,X3), (X1,X4), (X2,X4)",
        "Sides",
        D2,
        false,
        M,
        orderstat_pair_chi2,
    ),
    claim(
        "ANGLE_KS",
        "Arbitrary interior angle has density 6x(pi-x)/pi^3",
        "Angles",
        D1,
        false,
        M,
        angle_ks,
    ),
    claim(
        "TENT_CHI2",
        "Two adjacent angles follow the bivariate tent density",
        "Angles",
        D2,
        false,
        M,
        tent_chi2,
    ),
    claim(
        "TENT_RHO_ZERO",
        "Adjacent angles are uncorrelated",
        "Angles",
        Corr,
        false,
        M,
        tent_rho_zero,
    ),
    claim(
        "TENT_DEPENDENCE",
        "Adjacent angles are dependent: P(a<pi/4, b<pi/4) differs from the product of marginals",
        "Angles",
        Mom,
        false,
        M,
        tent_dependence,
    ),
    claim(
        "TRI_ANGLE_RHO",
        "Two angles of a random cyclic triangle have correlation -1/2",
        "Looking Back",
        Corr,
        false,
        M,
        tri_angle_rho,
    ),
    claim(
        "TRI_SIDE_INDEP_CHI2",
        "Two sides of a random cyclic triangle are independent with the product density",
        "Looking Back",
        D2,
        false,
        M,
        tri_side_indep_chi2,
    ),
    claim(
        "TRI_SIDE_MARGINAL_KS",
        "A side of a random cyclic triangle has density 2/(pi sqrt(4-a^2))",
        "Looking Back",
        D1,
        false,
        M,
        tri_side_marginal_ks,
    ),
    claim(
        "TRI_THIRD_SIDE_IDENTITY",
        "Third side of a triangle is one of the two branch formulas",
        "Looking Back",
        Ident,
        false,
        10_000,
        tri_third_side_identity,
    ),
    claim(
        "TRI_ANGLE_UNIFORM_CHI2",
        "Two angles of a random cyclic triangle are uniform on the simplex",
        "Looking Back",
        D2,
        false,
        M,
        tri_angle_uniform_chi2,
    ),
    claim(
        "PENT_RHO_ADJ",
        "Adjacent angles of a random cyclic pentagon have correlation 1/6",
        "Looking Forward",
        Corr,
        false,
        M,
        pent_rho_adj,
    ),
    claim(
        "PENT_RHO_NONADJ",
        "Angles two apart in a random cyclic pentagon have correlation -2/3",
        "Looking Forward",
        Corr,
        false,
        M,
        pent_rho_nonadj,
    ),
    claim(
        "PENT_RHO_DELTA",
        "Angles three apart in a random cyclic pentagon have correlation -2/3",
        "Looking Forward",
        Corr,
        false,
        M,
        pent_rho_delta,
    ),
    claim(
        "PENT_RHO_PHI",
        "Angles four apart (adjacent the other way) in a pentagon have correlation 1/6",
        "Looking Forward",
        Corr,
        false,
        M,
        pent_rho_phi,
    ),
    claim(
        "HEX_RHO_ADJ",
        "Adjacent angles of a random cyclic hexagon have correlation 1/4",
        "Looking Forward",
        Corr,
        true,
        M,
        hex_rho_adj,
    ),
    claim(
        "HEX_RHO_GAMMA",
        "Angles two apart in a random cyclic hexagon have correlation -1/2",
        "Looking Forward",
        Corr,
        true,
        M,
        hex_rho_gamma,
    ),
    claim(
        "HEX_RHO_DELTA",
        "Opposite angles of a random cyclic hexagon have correlation -1/2",
        "Looking Forward",
        Corr,
        true,
        M,
        hex_rho_delta,
    ),
    claim(
        "HEX_RHO_PHI",
        "Angles four apart in a random cyclic hexagon have correlation -1/2",
        "Looking Forward",
        Corr,
        true,
        M,
        hex_rho_phi,
    ),
    claim(
        "HEX_RHO_PSI",
        "Angles five apart (adjacent the other way) in a hexagon have correlation 1/4",
        "Looking Forward",
        Corr,
        true,
        M,
        hex_rho_psi,
    ),
    claim(
        "TRI_AREA_MEAN",
        "Mean area of a random cyclic triangle, by quadrature of the area density and by sampling",
        "Area",
        Mom,
        false,
        M,
        tri_area_mean,
    ),
    claim(
        "TRI_AREA_M2",
        "Second moment of triangle area, by quadrature and by sampling",
        "Area",
        Mom,
        false,
        M,
        tri_area_m2,
    ),
    claim(
        "TRI_AREA_KS",
        "Triangle area follows the density 8x K(4x^2)",
        "Area",
        D1,
        false,
        100_000,
        tri_area_ks,
    ),
    claim(
        "QUAD_F_SUPPORT_CHI2",
        "(alpha, beta, omega) lies in the tetrahedron and is uniform there with density 3/pi^3",
        "Area",
        D3,
        true,
        4 * M,
        quad_f_support_chi2,
    ),
    claim(
        "QUAD_F_MARGINAL_TENT",
        "Each pair from (alpha, beta, omega) follows the bivariate tent density",
        "Area",
        D2,
        true,
        M,
        quad_f_marginal_tent,
    ),
    claim(
        "QUAD_AREA_MEAN",
        "Mean area of a random cyclic quadrilateral",
        "Area",
        Mom,
        false,
        M,
        quad_area_mean,
    ),
    claim(
        "QUAD_AREA_M2",
        "Second moment of quadrilateral area",
        "Area",
        Mom,
        false,
        M,
        quad_area_m2,
    ),
    claim(
        "QUAD_AREA_TWICE_TRI",
        "Mean quadrilateral area is twice the mean triangle area",
        "Area",
        Mom,
        false,
        M,
        quad_area_twice_tri,
    ),
    claim(
        "TAN_HALF_ANGLE_IDENTITY",
        "Half-angle tangent formulas recover (alpha, beta, omega) from the four sides",
        "Area",
        Ident,
        false,
        10_000,
        tan_half_angle_identity,
    ),
    claim(
        "OPP_ANGLES_SUPPLEMENTARY",
        "Opposite angles of a cyclic quadrilateral sum to pi",
        "Preamble",
        Ident,
        false,
        10_000,
        opp_angles_supplementary,
    ),
    claim(
        "AREA_TRIG_VS_SHOELACE",
        "Shoelace area equals 2 sin a sin b sin w (quadrilateral) and 2 sin a sin b sin(a+b) (triangle)",
        "Area",
        Ident,
        false,
        10_000,
        area_trig_vs_shoelace,
    ),
    claim(
        "ANGLE_SUM_IDENTITY",
        "Interior angles of a cyclic n-gon sum to (n-2) pi for n = 3..6",
        "Preamble",
        Ident,
        false,
        10_000,
        angle_sum_identity,
    ),
    claim(
        "DIAGONAL_SINE_IDENTITY",
        "Diagonals satisfy d_k = 2 sin(alpha_k)",
        "Preamble",
        Ident,
        false,
        10_000,
        diagonal_sine_identity,
    ),
];

pub fn list_claims() -> Vec<Claim> {
    REGISTRY.to_vec()
}

pub fn find_claim(id: &str) -> Result<&'static Claim, ClaimError> {
    REGISTRY
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| ClaimError::UnknownClaim(id.to_string()))
}

pub fn run_claim(id: &str, n_samples: usize, opts: &RunOptions) -> Result<ClaimResult, ClaimError> {
    let claim = find_claim(id)?;
    opts.validate()?;
    let needed = claim.kind.min_samples();
    if n_samples < needed {
        return Err(ClaimError::InsufficientSamples {
            claim: id.to_string(),
            needed,
            got: n_samples,
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| ClaimError::Options(e.to_string()))?;
    let start = Instant::now();
    let ctx = Ctx {
        n: n_samples,
        opts,
        pool,
    };
    let eval = (claim.run)(&ctx)?;
    let elapsed = start.elapsed().as_secs_f64();
    Ok(ClaimResult {
        claim_id: claim.id.to_string(),
        description: claim.description.to_string(),
        paper_location: claim.paper_location.to_string(),
        conjecture: claim.conjecture,
        kind: claim.kind,
        analytic: eval.analytic,
        estimate: eval.estimate,
        stderr: eval.stderr,
        statistic: eval.statistic,
        pass: eval.pass,
        n_samples,
        seed: opts.seed,
        workers: opts.workers,
        elapsed_seconds: if opts.record_timing { elapsed } else { 0.0 },
        notes: eval.notes,
        error: None,
    })
}

/// Result entry for a claim that could not be evaluated.
fn failed(claim: &Claim, n_samples: usize, opts: &RunOptions, err: ClaimError) -> ClaimResult {
    ClaimResult {
        claim_id: claim.id.to_string(),
        description: claim.description.to_string(),
        paper_location: claim.paper_location.to_string(),
        conjecture: claim.conjecture,
        kind: claim.kind,
        analytic: None,
        estimate: None,
        stderr: None,
        statistic: None,
        pass: false,
        n_samples,
        seed: opts.seed,
        workers: opts.workers,
        elapsed_seconds: 0.0,
        notes: None,
        error: Some(err.to_string()),
    }
}

/// Runs the given claims (all of them when `ids` is empty) in registry order
/// of `ids`, recording failures as entries instead of aborting.
pub fn run_selected(
    ids: &[String],
    n_override: Option<usize>,
    opts: &RunOptions,
) -> Result<Vec<ClaimResult>, ClaimError> {
    let claims: Vec<&Claim> = if ids.is_empty() {
        REGISTRY.iter().collect()
    } else {
        ids.iter().map(|id| find_claim(id)).collect::<Result<_, _>>()?
    };
    Ok(claims
        .into_iter()
        .map(|c| {
            let n = n_override.unwrap_or(c.default_samples);
            run_claim(c.id, n, opts).unwrap_or_else(|e| failed(c, n, opts, e))
        })
        .collect())
}

pub fn run_all(n_override: Option<usize>, opts: &RunOptions) -> Vec<ClaimResult> {
    run_selected(&[], n_override, opts).expect("registry ids resolve")
}

/// `true` when every non-conjecture result passed.
pub fn all_proved_pass(results: &[ClaimResult]) -> bool {
    results.iter().filter(|r| !r.conjecture).all(|r| r.pass)
}

/// The moment registry entry a claim compares against, if any.
pub fn claim_target(id: &str) -> Option<&'static analytic::MomentEntry> {
    let key = match id {
        "TENT_RHO_ZERO" => "TENT_RHO",
        other => other,
    };
    moment_entry(key).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn registry_inventory() {
        let claims = list_claims();
        assert!(claims.len() >= 34);
        let ids: HashSet<_> = claims.iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), claims.len(), "duplicate ids");
        for required in [
            "SIDE_MEAN",
            "SIDE_M2",
            "SIDE_ADJ_PRODUCT",
            "SIDE_OPP_PRODUCT",
            "SIDE_ADJ_CORR",
            "DIAG_MEAN",
            "DIAG_M2",
            "SIDE_KS",
            "DIAG_KS",
            "GAP21_KS",
            "GAP31_KS",
            "GAP41_KS",
            "ORDERSTAT_PAIR_CHI2",
            "ANGLE_KS",
            "TENT_CHI2",
            "TENT_RHO_ZERO",
            "TENT_DEPENDENCE",
            "TRI_ANGLE_RHO",
            "TRI_SIDE_INDEP_CHI2",
            "TRI_SIDE_MARGINAL_KS",
            "TRI_THIRD_SIDE_IDENTITY",
            "TRI_ANGLE_UNIFORM_CHI2",
            "PENT_RHO_ADJ",
            "PENT_RHO_NONADJ",
            "HEX_RHO_ADJ",
            "HEX_RHO_GAMMA",
            "HEX_RHO_DELTA",
            "TRI_AREA_MEAN",
            "TRI_AREA_M2",
            "TRI_AREA_KS",
            "QUAD_F_SUPPORT_CHI2",
            "QUAD_F_MARGINAL_TENT",
            "QUAD_AREA_MEAN",
            "QUAD_AREA_M2",
            "QUAD_AREA_TWICE_TRI",
            "TAN_HALF_ANGLE_IDENTITY",
            "OPP_ANGLES_SUPPLEMENTARY",
            "AREA_TRIG_VS_SHOELACE",
        ] {
            assert!(ids.contains(required), "missing {required}");
        }
        for c in &claims {
            assert!(!c.paper_location.is_empty());
            let expect_conjecture = c.id.starts_with("HEX_") || c.id.starts_with("QUAD_F_");
            assert_eq!(c.conjecture, expect_conjecture, "{}", c.id);
        }
    }

    #[test]
    fn unknown_and_undersized() {
        let opts = RunOptions {
            workers: 1,
            ..RunOptions::default()
        };
        assert!(matches!(
            run_claim("NOPE", 100, &opts),
            Err(ClaimError::UnknownClaim(_))
        ));
        assert!(matches!(
            run_claim("SIDE_KS", 50, &opts),
            Err(ClaimError::InsufficientSamples { needed: 100, .. })
        ));
        let bad = RunOptions {
            workers: 0,
            ..RunOptions::default()
        };
        assert!(matches!(run_claim("SIDE_MEAN", 100, &bad), Err(ClaimError::Options(_))));
    }

    #[test]
    fn moment_targets_resolve() {
        for c in list_claims() {
            if matches!(c.kind, ClaimKind::Moment | ClaimKind::Correlation) {
                assert!(claim_target(c.id).is_some() || c.id == "TENT_DEPENDENCE", "{}", c.id);
            }
        }
    }
}
