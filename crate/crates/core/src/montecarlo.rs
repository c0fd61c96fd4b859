//! Mergeable estimators and goodness-of-fit tests.
//!
//! Every accumulator here is single-writer; parallel runs give each worker
//! its own instance and merge the results afterwards in a fixed order.

use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("zero variance in {0}")]
    ZeroVariance(&'static str),
    #[error("cdf is not monotone near x = {x}")]
    NonMonotoneCdf { x: f64 },
    #[error("point {0:?} lies outside the histogram range")]
    OutOfRange(Vec<f64>),
    #[error("invalid histogram: {0}")]
    InvalidHistogram(String),
    #[error("degenerate chi-square test: {0}")]
    Degenerate(&'static str),
}

/// Welford running mean and variance.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MomentAccumulator {
    count: u64,
    mean: f64,
    m2: f64,
}

impl MomentAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Chan et al. pairwise combination.
    pub fn merge(&mut self, other: &Self) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let (na, nb) = (self.count as f64, other.count as f64);
        let delta = other.mean - self.mean;
        self.mean += delta * nb / n;
        self.m2 += other.m2 + delta * delta * na * nb / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; NaN with fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            f64::NAN
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn stderr(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }

    pub fn summary(&self) -> Result<MeanVar, StatsError> {
        if self.count < 2 {
            return Err(StatsError::InsufficientData {
                needed: 2,
                got: self.count as usize,
            });
        }
        Ok(MeanVar {
            mean: self.mean(),
            variance: self.variance(),
            stderr: self.stderr(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanVar {
    pub mean: f64,
    pub variance: f64,
    pub stderr: f64,
}

pub fn estimate_mean_var<I: IntoIterator<Item = f64>>(values: I) -> Result<MeanVar, StatsError> {
    let mut acc = MomentAccumulator::new();
    values.into_iter().for_each(|x| acc.push(x));
    acc.summary()
}

/// Power sums of a paired stream up to total order four, taken about a fixed
/// center. Merging is plain addition, so any merge order gives the same
/// result up to floating-point summation order. Put the center near the
/// means to keep the central moments accurate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairAccumulator {
    center: (f64, f64),
    count: u64,
    // s[a][b] = Σ xᵃ yᵇ over centered values, a + b <= 4
    s: [[f64; 5]; 5],
}

impl Default for PairAccumulator {
    fn default() -> Self {
        Self::with_center(0.0, 0.0)
    }
}

impl PairAccumulator {
    pub fn with_center(cx: f64, cy: f64) -> Self {
        Self {
            center: (cx, cy),
            count: 0,
            s: [[0.0; 5]; 5],
        }
    }

    pub fn push(&mut self, x: f64, y: f64) {
        let (x, y) = (x - self.center.0, y - self.center.1);
        self.count += 1;
        let mut xa = 1.0;
        for a in 0..5 {
            let mut yb = 1.0;
            for b in 0..5 - a {
                self.s[a][b] += xa * yb;
                yb *= y;
            }
            xa *= x;
        }
    }

    pub fn merge(&mut self, other: &Self) {
        assert_eq!(self.center, other.center, "merging accumulators with different centers");
        self.count += other.count;
        for a in 0..5 {
            for b in 0..5 - a {
                self.s[a][b] += other.s[a][b];
            }
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Central moment E[(x − x̄)ᵃ (y − ȳ)ᵇ] (population normalization).
    fn central(&self, a: usize, b: usize) -> f64 {
        let n = self.count as f64;
        let mx = self.s[1][0] / n;
        let my = self.s[0][1] / n;
        let mut total = 0.0;
        for i in 0..=a {
            for j in 0..=b {
                let raw = self.s[i][j] / n;
                total +=
                    binomial(a, i) * binomial(b, j) * raw * (-mx).powi((a - i) as i32) * (-my).powi((b - j) as i32);
            }
        }
        total
    }

    /// Pearson correlation with its large-sample standard error.
    ///
    /// The standard error uses the distribution-free delta-method variance
    /// `m22 + ρ²(m40 + m04 + 2 m22)/4 − ρ(m31 + m13)` in standardized central
    /// moments; for bivariate normal data this is `(1 − ρ²)²`.
    pub fn correlation(&self) -> Result<Correlation, StatsError> {
        if self.count < 3 {
            return Err(StatsError::InsufficientData {
                needed: 3,
                got: self.count as usize,
            });
        }
        let vx = self.central(2, 0);
        let vy = self.central(0, 2);
        if !(vx > 0.0) {
            return Err(StatsError::ZeroVariance("first coordinate"));
        }
        if !(vy > 0.0) {
            return Err(StatsError::ZeroVariance("second coordinate"));
        }
        let (sx, sy) = (vx.sqrt(), vy.sqrt());
        let rho = (self.central(1, 1) / (sx * sy)).clamp(-1.0, 1.0);
        let m = |a: usize, b: usize| self.central(a, b) / (sx.powi(a as i32) * sy.powi(b as i32));
        let m22 = m(2, 2);
        let var = m22 + rho * rho / 4.0 * (m(4, 0) + m(0, 4) + 2.0 * m22) - rho * (m(3, 1) + m(1, 3));
        Ok(Correlation {
            rho,
            stderr: (var.max(0.0) / self.count as f64).sqrt(),
            normal_theory_stderr: (1.0 - rho * rho) / (self.count as f64).sqrt(),
        })
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub rho: f64,
    pub stderr: f64,
    /// `(1 − ρ̂²)/√n`, exact only for bivariate normal data.
    pub normal_theory_stderr: f64,
}

pub fn estimate_correlation<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> Result<Correlation, StatsError> {
    let pairs: Vec<(f64, f64)> = pairs.into_iter().collect();
    let n = pairs.len().max(1) as f64;
    let cx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let mut acc = PairAccumulator::with_center(cx, cy);
    pairs.iter().for_each(|&(x, y)| acc.push(x, y));
    acc.correlation()
}

/// Asymptotic Kolmogorov critical value `c(α) = √(−ln(α/2)/2)`.
pub fn ks_critical_value(alpha: f64) -> f64 {
    (-(0.5 * alpha).ln() / 2.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsReport {
    pub n: usize,
    pub d_statistic: f64,
    pub threshold_at_alpha: f64,
    pub pass: bool,
}

pub const KS_MIN_SAMPLES: usize = 100;

/// One-sample Kolmogorov–Smirnov test against a continuous cdf.
pub fn ks_test<F: Fn(f64) -> f64>(samples: &[f64], cdf: F, alpha: f64) -> Result<KsReport, StatsError> {
    if samples.len() < KS_MIN_SAMPLES {
        return Err(StatsError::InsufficientData {
            needed: KS_MIN_SAMPLES,
            got: samples.len(),
        });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut prev = f64::NEG_INFINITY;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        if !(f >= prev - 1e-12) || !(-1e-12..=1.0 + 1e-12).contains(&f) {
            return Err(StatsError::NonMonotoneCdf { x });
        }
        prev = f;
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    let threshold = ks_critical_value(alpha) / n.sqrt();
    Ok(KsReport {
        n: sorted.len(),
        d_statistic: d.clamp(0.0, 1.0),
        threshold_at_alpha: threshold,
        pass: d <= threshold,
    })
}

/// Equal-width histogram in one to three dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramNd {
    lo: Vec<f64>,
    hi: Vec<f64>,
    bins: Vec<usize>,
    counts: Vec<u64>,
}

impl HistogramNd {
    pub fn new(lo: &[f64], hi: &[f64], bins: &[usize]) -> Result<Self, StatsError> {
        let dim = bins.len();
        if !(1..=3).contains(&dim) || lo.len() != dim || hi.len() != dim {
            return Err(StatsError::InvalidHistogram(format!(
                "dimension mismatch: {} bounds, {} bin counts",
                lo.len(),
                dim
            )));
        }
        if bins.contains(&0) {
            return Err(StatsError::InvalidHistogram("zero bins on an axis".into()));
        }
        if lo.iter().zip(hi).any(|(l, h)| !(l < h)) {
            return Err(StatsError::InvalidHistogram("empty axis range".into()));
        }
        Ok(Self {
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            bins: bins.to_vec(),
            counts: vec![0; bins.iter().product()],
        })
    }

    pub fn dim(&self) -> usize {
        self.bins.len()
    }

    pub fn bins(&self) -> &[usize] {
        &self.bins
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Bin edges along one axis.
    pub fn edges(&self, axis: usize) -> Vec<f64> {
        let (lo, hi, n) = (self.lo[axis], self.hi[axis], self.bins[axis]);
        (0..=n)
            .map(|i| {
                if i == n {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / n as f64
                }
            })
            .collect()
    }

    fn axis_index(&self, axis: usize, v: f64) -> Option<usize> {
        let (lo, hi, n) = (self.lo[axis], self.hi[axis], self.bins[axis]);
        if !(lo..=hi).contains(&v) {
            return None;
        }
        Some((((v - lo) / (hi - lo) * n as f64) as usize).min(n - 1))
    }

    pub fn add(&mut self, point: &[f64]) -> Result<(), StatsError> {
        if point.len() != self.dim() {
            return Err(StatsError::OutOfRange(point.to_vec()));
        }
        let mut flat = 0;
        for (axis, &v) in point.iter().enumerate() {
            let i = self
                .axis_index(axis, v)
                .ok_or_else(|| StatsError::OutOfRange(point.to_vec()))?;
            flat = flat * self.bins[axis] + i;
        }
        self.counts[flat] += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: &Self) {
        assert_eq!(self.bins, other.bins, "merging histograms of different shape");
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
    }

    /// Multi-index of a flat bin index.
    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for axis in (0..self.dim()).rev() {
            idx[axis] = flat % self.bins[axis];
            flat /= self.bins[axis];
        }
        idx
    }

    /// Lower and upper corners of a bin.
    pub fn bin_box(&self, flat: usize) -> (Vec<f64>, Vec<f64>) {
        let idx = self.unflatten(flat);
        let mut lo = Vec::with_capacity(self.dim());
        let mut hi = Vec::with_capacity(self.dim());
        for (axis, &i) in idx.iter().enumerate() {
            let w = (self.hi[axis] - self.lo[axis]) / self.bins[axis] as f64;
            lo.push(self.lo[axis] + i as f64 * w);
            hi.push(if i + 1 == self.bins[axis] {
                self.hi[axis]
            } else {
                self.lo[axis] + (i + 1) as f64 * w
            });
        }
        (lo, hi)
    }
}

/// Probability mass an expected law assigns to an axis-aligned box. `None`
/// sends the bin to the pooled remainder cell.
pub trait BinMass {
    fn mass(&self, bin: usize, lo: &[f64], hi: &[f64]) -> Option<f64>;
}

impl<F: Fn(&[f64], &[f64]) -> Option<f64>> BinMass for F {
    fn mass(&self, _bin: usize, lo: &[f64], hi: &[f64]) -> Option<f64> {
        self(lo, hi)
    }
}

/// Masses precomputed per flat bin index.
#[derive(Debug, Clone, PartialEq)]
pub struct MassTable(pub Vec<Option<f64>>);

impl BinMass for MassTable {
    fn mass(&self, bin: usize, _lo: &[f64], _hi: &[f64]) -> Option<f64> {
        self.0.get(bin).copied().flatten()
    }
}

/// Composite midpoint rule with `subdivisions` cells per axis.
pub struct MidpointMass<F> {
    pub pdf: F,
    pub subdivisions: usize,
}

impl<F: Fn(&[f64]) -> f64> BinMass for MidpointMass<F> {
    fn mass(&self, _bin: usize, lo: &[f64], hi: &[f64]) -> Option<f64> {
        let dim = lo.len();
        let m = self.subdivisions.max(1);
        let widths: Vec<f64> = lo.iter().zip(hi).map(|(l, h)| (h - l) / m as f64).collect();
        let cell: f64 = widths.iter().product();
        let mut point = vec![0.0; dim];
        let mut total = 0.0;
        for k in 0..m.pow(dim as u32) {
            let mut r = k;
            for axis in 0..dim {
                point[axis] = lo[axis] + (r % m) as f64 * widths[axis] + 0.5 * widths[axis];
                r /= m;
            }
            total += (self.pdf)(&point);
        }
        Some(total * cell)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareReport {
    pub statistic: f64,
    pub dof: usize,
    pub threshold_at_alpha: f64,
    /// bins folded into the remainder cell
    pub pooled_bins: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareOptions {
    pub alpha: f64,
    pub min_expected: f64,
}

impl Default for ChiSquareOptions {
    fn default() -> Self {
        Self {
            alpha: 0.01,
            min_expected: 5.0,
        }
    }
}

/// Upper `alpha` quantile of the χ² law with `dof` degrees of freedom.
pub fn chi_square_critical_value(dof: usize, alpha: f64) -> f64 {
    ChiSquared::new(dof as f64)
        .map(|d| d.inverse_cdf(1.0 - alpha))
        .unwrap_or(f64::NAN)
}

/// Pearson χ² goodness of fit of a histogram against bin masses.
///
/// Bins with expected count below `min_expected`, or for which `mass`
/// returns `None`, are pooled together with any probability lying outside
/// the histogram box into a single remainder cell.
pub fn chi_square_goodness<M: BinMass + ?Sized>(
    hist: &HistogramNd,
    mass: &M,
    options: &ChiSquareOptions,
) -> Result<ChiSquareReport, StatsError> {
    let n = hist.total() as f64;
    if n == 0.0 {
        return Err(StatsError::InsufficientData { needed: 1, got: 0 });
    }
    let mut statistic = 0.0;
    let mut cells = 0usize;
    let mut pooled_bins = 0usize;
    let mut kept_mass = 0.0;
    let mut kept_count = 0.0;
    for (flat, &observed) in hist.counts().iter().enumerate() {
        let (lo, hi) = hist.bin_box(flat);
        match mass.mass(flat, &lo, &hi) {
            Some(p) if p * n >= options.min_expected => {
                let e = p * n;
                let o = observed as f64;
                statistic += (o - e) * (o - e) / e;
                cells += 1;
                kept_mass += p;
                kept_count += o;
            }
            _ => pooled_bins += 1,
        }
    }
    let pool_expected = (1.0 - kept_mass) * n;
    let pool_observed = n - kept_count;
    if pool_expected.abs() > 1e-9 * n {
        if pool_expected < 0.0 {
            return Err(StatsError::Degenerate("bin masses exceed one"));
        }
        statistic += (pool_observed - pool_expected).powi(2) / pool_expected;
        cells += 1;
    } else if pool_observed > 0.0 {
        statistic = f64::INFINITY;
        cells += 1;
    }
    if cells < 2 {
        return Err(StatsError::Degenerate("fewer than two usable cells"));
    }
    let dof = cells - 1;
    let threshold = chi_square_critical_value(dof, options.alpha);
    Ok(ChiSquareReport {
        statistic,
        dof,
        threshold_at_alpha: threshold,
        pooled_bins,
        pass: statistic <= threshold,
    })
}

/// χ² against a pdf, with bin masses from an 8-per-axis midpoint rule.
pub fn chi_square_uniformity<F: Fn(&[f64]) -> f64>(
    hist: &HistogramNd,
    expected_pdf: F,
    alpha: f64,
) -> Result<ChiSquareReport, StatsError> {
    let mass = MidpointMass {
        pdf: expected_pdf,
        subdivisions: 8,
    };
    chi_square_goodness(
        hist,
        &mass,
        &ChiSquareOptions {
            alpha,
            ..ChiSquareOptions::default()
        },
    )
}

/// Pearson χ² test of independence for a two-dimensional histogram, with
/// expected counts from the table's own margins.
pub fn chi_square_independence(hist: &HistogramNd, alpha: f64) -> Result<ChiSquareReport, StatsError> {
    if hist.dim() != 2 {
        return Err(StatsError::InvalidHistogram(
            "independence test needs a 2-D histogram".into(),
        ));
    }
    let (r, c) = (hist.bins()[0], hist.bins()[1]);
    let counts = hist.counts();
    let n = hist.total() as f64;
    let rows: Vec<f64> = (0..r)
        .map(|i| counts[i * c..(i + 1) * c].iter().sum::<u64>() as f64)
        .collect();
    let cols: Vec<f64> = (0..c)
        .map(|j| (0..r).map(|i| counts[i * c + j]).sum::<u64>() as f64)
        .collect();
    let live_rows = rows.iter().filter(|&&v| v > 0.0).count();
    let live_cols = cols.iter().filter(|&&v| v > 0.0).count();
    if live_rows < 2 || live_cols < 2 {
        return Err(StatsError::Degenerate(
            "independence test needs two occupied rows and columns",
        ));
    }
    let mut statistic = 0.0;
    for i in 0..r {
        for j in 0..c {
            let e = rows[i] * cols[j] / n;
            if e > 0.0 {
                let o = counts[i * c + j] as f64;
                statistic += (o - e) * (o - e) / e;
            }
        }
    }
    let dof = (live_rows - 1) * (live_cols - 1);
    let threshold = chi_square_critical_value(dof, alpha);
    Ok(ChiSquareReport {
        statistic,
        dof,
        threshold_at_alpha: threshold,
        pooled_bins: 0,
        pass: statistic <= threshold,
    })
}
