//! Closed-form densities and moments for random cyclic polygons.
//!
//! One-dimensional laws that blow up like `1/√(4 − x²)` at the top of their
//! support are integrated in the chord chart `x = 2 sin t`, where every one of
//! them becomes a polynomial in `t`. The triangle-area law has an `x^(-1/3)`
//! spike at zero and is integrated in the cube chart `x = t³`.

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

use crate::special::{gamma, gauss_2f1, integrate, QuadratureError, QuadratureSpec, SpecialError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("triangle area density at x = {x}: {source}")]
    AreaDensity { x: f64, source: SpecialError },
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("unknown moment id `{0}`")]
    UnknownMoment(String),
    #[error("unknown density `{0}`")]
    UnknownDensity(String),
}

const PI2: f64 = PI * PI;
const PI3: f64 = PI * PI * PI;
const PI4: f64 = PI2 * PI2;

/// Largest area of a triangle inscribed in the unit circle.
pub const TRIANGLE_AREA_MAX: f64 = 1.299_038_105_676_658; // 3√3/4

/// Pairs of order statistics of four uniforms on [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderPair {
    P12,
    P13,
    P14,
    P24,
}

impl OrderPair {
    pub const ALL: [OrderPair; 4] = [Self::P12, Self::P13, Self::P14, Self::P24];

    /// 0-based indices into the sorted sample.
    pub fn indices(self) -> (usize, usize) {
        match self {
            Self::P12 => (0, 1),
            Self::P13 => (0, 2),
            Self::P14 => (0, 3),
            Self::P24 => (1, 3),
        }
    }
}

/// Joint density of `(X_i, X_j)` for the order statistics of four uniforms.
pub fn orderstat_pair_pdf(pair: OrderPair, x: f64, y: f64) -> f64 {
    if !(0.0 < x && x < y && y < 1.0) {
        return 0.0;
    }
    match pair {
        OrderPair::P12 => 12.0 * (1.0 - y).powi(2),
        OrderPair::P13 => 24.0 * (y - x) * (1.0 - y),
        OrderPair::P14 => 12.0 * (y - x).powi(2),
        OrderPair::P24 => 24.0 * x * (y - x),
    }
}

/// Differences of order statistics of four uniforms. `X₄ − X₂` follows the
/// same law as `X₃ − X₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapLaw {
    G21,
    G31,
    G41,
}

pub fn gap_pdf(which: GapLaw, u: f64) -> f64 {
    if !(0.0 < u && u < 1.0) {
        return 0.0;
    }
    match which {
        GapLaw::G21 => 4.0 * (1.0 - u).powi(3),
        GapLaw::G31 => 12.0 * u * (1.0 - u).powi(2),
        GapLaw::G41 => 12.0 * u * u * (1.0 - u),
    }
}

fn chord_arc(z: f64) -> Option<(f64, f64)> {
    if !(0.0..2.0).contains(&z) {
        return None;
    }
    let root = ((2.0 - z) * (2.0 + z)).sqrt();
    Some(((0.5 * z).asin(), root))
}

/// Density of an arbitrary side of a random cyclic quadrilateral: the
/// (3/4, 1/4) mixture of the `s₂` and `s₁` laws.
pub fn side_pdf(s: f64) -> f64 {
    chord_arc(s).map_or(0.0, |(a, root)| 3.0 / (PI * root) * (1.0 - 2.0 * a * (PI - a) / PI2))
}

/// Density of `s₂` (equally `s₃`, `s₄`): the chord over a non-wrapping gap.
pub fn side_s2_pdf(s: f64) -> f64 {
    chord_arc(s).map_or(0.0, |(a, root)| 4.0 / (PI * root) * (1.0 - 3.0 * a * (PI - a) / PI2))
}

/// Density of a diagonal, which is also the law of the wrap-around side `s₁`.
pub fn diagonal_pdf(z: f64) -> f64 {
    chord_arc(z).map_or(0.0, |(a, root)| 4.0 / (PI * root) * (3.0 * a * (PI - a) / PI2))
}

/// Marginal density of an arbitrary interior angle of a random cyclic
/// quadrilateral.
pub fn angle_pdf(x: f64) -> f64 {
    if !(0.0 < x && x < PI) {
        return 0.0;
    }
    6.0 * x * (PI - x) / PI3
}

/// Law of `α₂` (and `α₃`).
pub fn angle_a2_pdf(x: f64) -> f64 {
    if !(0.0 < x && x < PI) {
        return 0.0;
    }
    12.0 * x * (PI - x).powi(2) / PI4
}

/// Law of `α₁` (and `α₄`), the mirror image of [`angle_a2_pdf`].
pub fn angle_a1_pdf(x: f64) -> f64 {
    if !(0.0 < x && x < PI) {
        return 0.0;
    }
    12.0 * x * x * (PI - x) / PI4
}

/// Joint density of two adjacent angles of a random cyclic quadrilateral,
/// the bivariate tent on `(0, π)²`.
pub fn tent_pdf(alpha: f64, beta: f64) -> f64 {
    let inside = |v: f64| 0.0 < v && v < PI;
    if !(inside(alpha) && inside(beta)) {
        return 0.0;
    }
    let (a, b) = (alpha, beta);
    if PI - b <= a && a <= b && b >= FRAC_PI_2 {
        6.0 * (PI - b) / PI3
    } else if a <= b && b <= PI - a && a <= FRAC_PI_2 {
        6.0 * a / PI3
    } else if PI - a <= b && b <= a && a >= FRAC_PI_2 {
        6.0 * (PI - a) / PI3
    } else if b <= a && a <= PI - b && b <= FRAC_PI_2 {
        6.0 * b / PI3
    } else {
        unreachable!("tent cases cover the open square")
    }
}

/// Joint density of two angles of a random cyclic triangle.
pub fn triangle_angle_pdf(alpha: f64, beta: f64) -> f64 {
    if alpha > 0.0 && beta > 0.0 && alpha + beta < PI {
        2.0 / PI2
    } else {
        0.0
    }
}

/// Marginal density of one side of a random cyclic triangle.
pub fn triangle_side_pdf(a: f64) -> f64 {
    chord_arc(a).map_or(0.0, |(_, root)| 2.0 / (PI * root))
}

/// Joint density of two sides of a random cyclic triangle.
pub fn triangle_side_joint_pdf(a: f64, b: f64) -> f64 {
    match (chord_arc(a), chord_arc(b)) {
        (Some((_, ra)), Some((_, rb))) => 4.0 / PI2 / (ra * rb),
        _ => 0.0,
    }
}

/// Kernel `K(y)` of the triangle-area law, `0 < y < 27/4`.
pub fn triangle_area_kernel(y: f64) -> Result<f64, SpecialError> {
    if !(0.0 < y && y < 6.75) {
        return Err(SpecialError::Domain {
            function: "triangle_area_kernel",
            arg: y,
        });
    }
    let z = 4.0 * y / 27.0;
    let third = 1.0 / 3.0;
    let lead = gamma(third)?.powi(3) * z.powf(-1.0 / 6.0) * gauss_2f1(third, third, 2.0 * third, z)?;
    let trail =
        3.0 * gamma(2.0 * third)?.powi(3) * z.powf(1.0 / 6.0) * gauss_2f1(2.0 * third, 2.0 * third, 4.0 * third, z)?;
    Ok((lead - trail) / (4.0 * PI3 * y.sqrt()))
}

/// Density of the area of a random cyclic triangle, `8x K(4x²)`.
pub fn triangle_area_pdf(x: f64) -> Result<f64, AnalyticError> {
    if !(0.0 < x && x < TRIANGLE_AREA_MAX) {
        return Ok(0.0);
    }
    triangle_area_kernel(4.0 * x * x)
        .map(|k| 8.0 * x * k)
        .map_err(|source| AnalyticError::AreaDensity { x, source })
}

/// Conjectured joint density of `(α, β, ω)` for a random cyclic
/// quadrilateral: uniform on the tetrahedron with vertices
/// `(0,0,0), (0,π,π), (π,0,π), (π,π,0)`.
pub fn quad_angle_joint_pdf(alpha: f64, beta: f64, omega: f64) -> f64 {
    if in_quad_tetrahedron(alpha, beta, omega) {
        3.0 / PI3
    } else {
        0.0
    }
}

pub fn in_quad_tetrahedron(alpha: f64, beta: f64, omega: f64) -> bool {
    alpha + beta > omega && alpha + omega > beta && beta + omega > alpha && alpha + beta + omega < 2.0 * PI
}

/// Coordinate change used to integrate a one-dimensional density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Chart {
    /// `x = t`
    Identity,
    /// `x = 2 sin t` on `t ∈ [0, π/2]`
    Chord,
    /// `x = t³`
    Cube,
}

impl Chart {
    pub fn to_x(self, t: f64) -> f64 {
        match self {
            Chart::Identity => t,
            Chart::Chord => 2.0 * t.sin(),
            Chart::Cube => t * t * t,
        }
    }

    pub fn to_t(self, x: f64) -> f64 {
        match self {
            Chart::Identity => x,
            Chart::Chord => (0.5 * x).clamp(-1.0, 1.0).asin(),
            Chart::Cube => x.cbrt(),
        }
    }

    pub fn jacobian(self, t: f64) -> f64 {
        match self {
            Chart::Identity => 1.0,
            Chart::Chord => 2.0 * t.cos(),
            Chart::Cube => 3.0 * t * t,
        }
    }
}

/// A one-dimensional law with a pointwise pdf and a quadrature-backed cdf.
#[derive(Debug, Clone, Copy)]
pub struct Density1d {
    pub name: &'static str,
    pub support: (f64, f64),
    pub chart: Chart,
    pdf: fn(f64) -> f64,
    /// density of `t` in the chart, when the generic `pdf(x(t)) x'(t)` is
    /// singular at an endpoint
    chart_pdf: Option<fn(f64) -> f64>,
    /// integration stops here; the remainder is estimated as a flat tail
    pub upper_cutoff: Option<f64>,
}

/// A moment computed by quadrature, with the flat-tail estimate for the
/// stretch above the cutoff reported separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentValue {
    pub value: f64,
    pub truncated: f64,
    pub tail: f64,
}

impl Density1d {
    pub fn pdf(&self, x: f64) -> f64 {
        (self.pdf)(x)
    }

    /// Density of the chart coordinate `t`.
    pub fn chart_density(&self, t: f64) -> f64 {
        match self.chart_pdf {
            Some(f) => f(t),
            None => self.pdf(self.chart.to_x(t)) * self.chart.jacobian(t),
        }
    }

    fn integration_top(&self) -> f64 {
        self.upper_cutoff.unwrap_or(self.support.1)
    }

    fn t_range(&self) -> (f64, f64) {
        (self.chart.to_t(self.support.0), self.chart.to_t(self.integration_top()))
    }

    pub fn cdf(&self, x: f64, spec: &QuadratureSpec) -> Result<f64, AnalyticError> {
        let (lo, top) = (self.support.0, self.integration_top());
        if x <= lo {
            return Ok(0.0);
        }
        let (t0, _) = self.t_range();
        let t = self.chart.to_t(x.min(top));
        let body = if t > t0 {
            integrate(|t| self.chart_density(t), t0, t, spec)?
        } else {
            0.0
        };
        let tail = if x > top {
            self.pdf(top) * (x.min(self.support.1) - top)
        } else {
            0.0
        };
        Ok((body + tail).min(1.0))
    }

    /// `E[X^k]`.
    pub fn moment(&self, k: i32, spec: &QuadratureSpec) -> Result<MomentValue, AnalyticError> {
        let (t0, t1) = self.t_range();
        let truncated = integrate(|t| self.chart.to_x(t).powi(k) * self.chart_density(t), t0, t1, spec)?;
        let tail = match self.upper_cutoff {
            Some(cut) => {
                let hi = self.support.1;
                self.pdf(cut) * (hi.powi(k + 1) - cut.powi(k + 1)) / f64::from(k + 1)
            }
            None => 0.0,
        };
        Ok(MomentValue {
            value: truncated + tail,
            truncated,
            tail,
        })
    }

    /// Total probability above the cutoff, estimated as a flat tail.
    pub fn tail_mass(&self) -> f64 {
        self.upper_cutoff
            .map_or(0.0, |cut| self.pdf(cut) * (self.support.1 - cut))
    }

    /// Cdf tabulated on `intervals` equal steps of the chart coordinate and
    /// interpolated by cubic Hermite using the exact chart density as slope.
    pub fn tabulate(&self, intervals: usize, spec: &QuadratureSpec) -> Result<TabulatedCdf, AnalyticError> {
        let intervals = intervals.max(1);
        let (t0, t1) = self.t_range();
        let h = (t1 - t0) / intervals as f64;
        let nodes: Vec<f64> = (0..=intervals)
            .map(|i| if i == intervals { t1 } else { t0 + i as f64 * h })
            .collect();
        let slopes: Vec<f64> = nodes.iter().map(|&t| self.chart_density(t)).collect();
        if let Some(i) = slopes.iter().position(|v| !v.is_finite()) {
            return Err(QuadratureError::NonFinite { x: nodes[i] }.into());
        }
        let mut values = Vec::with_capacity(nodes.len());
        values.push(0.0);
        let mut acc = 0.0;
        for w in nodes.windows(2) {
            acc += integrate(|t| self.chart_density(t), w[0], w[1], spec)?;
            values.push(acc);
        }
        let top = self.integration_top();
        Ok(TabulatedCdf {
            chart: self.chart,
            support: self.support,
            top,
            top_pdf: self.pdf(top),
            t0,
            h,
            nodes,
            values,
            slopes,
        })
    }
}

/// Fast cdf evaluator built by [`Density1d::tabulate`].
#[derive(Debug, Clone)]
pub struct TabulatedCdf {
    chart: Chart,
    support: (f64, f64),
    top: f64,
    top_pdf: f64,
    t0: f64,
    h: f64,
    nodes: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl TabulatedCdf {
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.support.0 {
            return 0.0;
        }
        let last = self.values.len() - 1;
        if x >= self.top {
            let tail = self.top_pdf * (x.min(self.support.1) - self.top);
            return (self.values[last] + tail).min(1.0);
        }
        let t = self.chart.to_t(x);
        let i = (((t - self.t0) / self.h).floor().max(0.0) as usize).min(last - 1);
        let (ta, tb) = (self.nodes[i], self.nodes[i + 1]);
        let w = tb - ta;
        let s = ((t - ta) / w).clamp(0.0, 1.0);
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        (h00 * self.values[i] + h10 * w * self.slopes[i] + h01 * self.values[i + 1] + h11 * w * self.slopes[i + 1])
            .clamp(0.0, 1.0)
    }

    /// Cdf value at the top of the tabulated range (below 1 by the tail mass).
    pub fn covered_mass(&self) -> f64 {
        self.values[self.values.len() - 1]
    }
}

/// Relative width of the stretch below the top of the triangle-area support
/// that is excluded from quadrature; the series for ₂F₁ stalls as its
/// argument approaches 1 there.
pub const TRIANGLE_AREA_CUTOFF_FRACTION: f64 = 1e-6;

fn triangle_area_pdf_or_nan(x: f64) -> f64 {
    triangle_area_pdf(x).unwrap_or(f64::NAN)
}

pub fn side_density() -> Density1d {
    chord_density("side", side_pdf, |t| 3.0 / PI * (1.0 - 2.0 * t * (PI - t) / PI2))
}

pub fn side_s2_density() -> Density1d {
    chord_density("side_s2", side_s2_pdf, |t| 4.0 / PI * (1.0 - 3.0 * t * (PI - t) / PI2))
}

pub fn diagonal_density() -> Density1d {
    chord_density("diagonal", diagonal_pdf, |t| 12.0 * t * (PI - t) / PI3)
}

pub fn triangle_side_density() -> Density1d {
    chord_density("triangle_side", triangle_side_pdf, |t| {
        if (0.0..=FRAC_PI_2).contains(&t) {
            2.0 / PI
        } else {
            0.0
        }
    })
}

fn chord_density(name: &'static str, pdf: fn(f64) -> f64, chart_pdf: fn(f64) -> f64) -> Density1d {
    Density1d {
        name,
        support: (0.0, 2.0),
        chart: Chart::Chord,
        pdf,
        chart_pdf: Some(chart_pdf),
        upper_cutoff: None,
    }
}

fn plain_density(name: &'static str, support: (f64, f64), pdf: fn(f64) -> f64) -> Density1d {
    Density1d {
        name,
        support,
        chart: Chart::Identity,
        pdf,
        chart_pdf: None,
        upper_cutoff: None,
    }
}

pub fn angle_density() -> Density1d {
    plain_density("angle", (0.0, PI), angle_pdf)
}

pub fn gap_density(which: GapLaw) -> Density1d {
    match which {
        GapLaw::G21 => plain_density("gap21", (0.0, 1.0), |u| gap_pdf(GapLaw::G21, u)),
        GapLaw::G31 => plain_density("gap31", (0.0, 1.0), |u| gap_pdf(GapLaw::G31, u)),
        GapLaw::G41 => plain_density("gap41", (0.0, 1.0), |u| gap_pdf(GapLaw::G41, u)),
    }
}

pub fn triangle_area_density() -> Density1d {
    Density1d {
        name: "triangle_area",
        support: (0.0, TRIANGLE_AREA_MAX),
        chart: Chart::Cube,
        pdf: triangle_area_pdf_or_nan,
        chart_pdf: None,
        upper_cutoff: Some(TRIANGLE_AREA_MAX * (1.0 - TRIANGLE_AREA_CUTOFF_FRACTION)),
    }
}

/// A joint law on a box (the support itself may be a sub-region of it).
#[derive(Debug, Clone, Copy)]
pub struct DensityNd<const D: usize> {
    pub name: &'static str,
    pub lo: [f64; D],
    pub hi: [f64; D],
    pub domain: &'static str,
    pub conjecture: bool,
    pdf: fn([f64; D]) -> f64,
}

impl<const D: usize> DensityNd<D> {
    pub fn pdf(&self, p: [f64; D]) -> f64 {
        (self.pdf)(p)
    }
}

#[derive(Debug, Clone, Copy)]
pub enum AnalyticDensity {
    D1(Density1d),
    D2(DensityNd<2>),
    D3(DensityNd<3>),
}

impl AnalyticDensity {
    pub fn name(&self) -> &'static str {
        match self {
            Self::D1(d) => d.name,
            Self::D2(d) => d.name,
            Self::D3(d) => d.name,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::D1(_) => 1,
            Self::D2(_) => 2,
            Self::D3(_) => 3,
        }
    }

    pub fn conjecture(&self) -> bool {
        match self {
            Self::D1(_) => false,
            Self::D2(d) => d.conjecture,
            Self::D3(d) => d.conjecture,
        }
    }
}

fn joint<const D: usize>(
    name: &'static str,
    lo: [f64; D],
    hi: [f64; D],
    domain: &'static str,
    pdf: fn([f64; D]) -> f64,
) -> DensityNd<D> {
    DensityNd {
        name,
        lo,
        hi,
        domain,
        conjecture: false,
        pdf,
    }
}

/// Every named density, in a fixed order.
pub fn densities() -> Vec<AnalyticDensity> {
    use AnalyticDensity::{D1, D2, D3};
    let unit = [0.0, 1.0];
    vec![
        D1(side_density()),
        D1(side_s2_density()),
        D1(diagonal_density()),
        D1(angle_density()),
        D1(plain_density("angle_a2", (0.0, PI), angle_a2_pdf)),
        D1(plain_density("angle_a1", (0.0, PI), angle_a1_pdf)),
        D1(gap_density(GapLaw::G21)),
        D1(gap_density(GapLaw::G31)),
        D1(gap_density(GapLaw::G41)),
        D1(triangle_side_density()),
        D1(triangle_area_density()),
        D2(joint("orderstat12", [0.0; 2], unit, "0 < x < y < 1", |[x, y]| {
            orderstat_pair_pdf(OrderPair::P12, x, y)
        })),
        D2(joint("orderstat13", [0.0; 2], unit, "0 < x < y < 1", |[x, y]| {
            orderstat_pair_pdf(OrderPair::P13, x, y)
        })),
        D2(joint("orderstat14", [0.0; 2], unit, "0 < x < y < 1", |[x, y]| {
            orderstat_pair_pdf(OrderPair::P14, x, y)
        })),
        D2(joint("orderstat24", [0.0; 2], unit, "0 < x < y < 1", |[x, y]| {
            orderstat_pair_pdf(OrderPair::P24, x, y)
        })),
        D2(joint("tent", [0.0; 2], [PI; 2], "(0, π)²", |[a, b]| tent_pdf(a, b))),
        D2(joint(
            "triangle_angles",
            [0.0; 2],
            [PI; 2],
            "α, β > 0, α + β < π",
            |[a, b]| triangle_angle_pdf(a, b),
        )),
        D2(joint("triangle_sides", [0.0; 2], [2.0; 2], "(0, 2)²", |[a, b]| {
            triangle_side_joint_pdf(a, b)
        })),
        D3(DensityNd {
            conjecture: true,
            ..joint(
                "quad_angles",
                [0.0; 3],
                [PI; 3],
                "tetrahedron (0,0,0), (0,π,π), (π,0,π), (π,π,0)",
                |[a, b, w]| quad_angle_joint_pdf(a, b, w),
            )
        }),
    ]
}

pub fn density_by_name(name: &str) -> Result<AnalyticDensity, AnalyticError> {
    let alias = match name {
        "side_s1" => "diagonal",
        other => other,
    };
    densities()
        .into_iter()
        .find(|d| d.name() == alias)
        .ok_or_else(|| AnalyticError::UnknownDensity(name.to_string()))
}

/// A closed-form moment or correlation, kept with its exact expression.
#[derive(Debug, Clone, Copy)]
pub struct MomentEntry {
    pub id: &'static str,
    pub expression: &'static str,
    pub location: &'static str,
    pub conjecture: bool,
    value: fn() -> f64,
}

impl MomentEntry {
    pub fn value(&self) -> f64 {
        (self.value)()
    }
}

fn side_mean() -> f64 {
    6.0 / PI - 24.0 / PI3
}

fn side_m2() -> f64 {
    2.0 - 3.0 / PI2
}

fn side_adj_corr() -> f64 {
    let m = side_mean();
    (12.0 / PI2 - m * m) / (side_m2() - m * m)
}

const fn entry(
    id: &'static str,
    expression: &'static str,
    location: &'static str,
    conjecture: bool,
    value: fn() -> f64,
) -> MomentEntry {
    MomentEntry {
        id,
        expression,
        location,
        conjecture,
        value,
    }
}

pub const MOMENTS: &[MomentEntry] = &[
    entry("SIDE_MEAN", "6/π − 24/π³", "Sides", false, side_mean),
    entry("SIDE_M2", "2 − 3/π²", "Sides", false, side_m2),
    entry("SIDE_ADJ_PRODUCT", "12/π²", "Sides", false, || 12.0 / PI2),
    entry("SIDE_OPP_PRODUCT", "12/π²", "Sides", false, || 12.0 / PI2),
    entry("SIDE_S2S3_PRODUCT", "48/π² − 384/π⁴", "Sides", false, || {
        48.0 / PI2 - 384.0 / PI4
    }),
    entry("SIDE_S1S2_PRODUCT", "−24/π² + 384/π⁴", "Sides", false, || {
        -24.0 / PI2 + 384.0 / PI4
    }),
    entry(
        "SIDE_ADJ_CORR",
        "(12/π² − E(s)²)/(E(s²) − E(s)²)",
        "Sides",
        false,
        side_adj_corr,
    ),
    entry("DIAG_MEAN", "48/π³", "Sides", false, || 48.0 / PI3),
    entry("DIAG_M2", "2 + 6/π²", "Sides", false, || 2.0 + 6.0 / PI2),
    entry("TENT_RHO", "0", "Angles", false, || 0.0),
    entry("TRI_ANGLE_RHO", "−1/2", "Looking Back", false, || -0.5),
    entry("PENT_RHO_ADJ", "1/6", "Looking Forward", false, || 1.0 / 6.0),
    entry("PENT_RHO_NONADJ", "−2/3", "Looking Forward", false, || -2.0 / 3.0),
    entry("PENT_RHO_DELTA", "−2/3", "Looking Forward", false, || -2.0 / 3.0),
    entry("PENT_RHO_PHI", "1/6", "Looking Forward", false, || 1.0 / 6.0),
    entry("HEX_RHO_ADJ", "1/4", "Looking Forward", true, || 0.25),
    entry("HEX_RHO_GAMMA", "−1/2", "Looking Forward", true, || -0.5),
    entry("HEX_RHO_DELTA", "−1/2", "Looking Forward", true, || -0.5),
    entry("HEX_RHO_PHI", "−1/2", "Looking Forward", true, || -0.5),
    entry("HEX_RHO_PSI", "1/4", "Looking Forward", true, || 0.25),
    entry("TRI_AREA_MEAN", "3/(2π)", "Area", false, || 1.5 / PI),
    entry("TRI_AREA_M2", "3/8", "Area", false, || 0.375),
    entry("QUAD_AREA_MEAN", "3/π", "Area", false, || 3.0 / PI),
    entry("QUAD_AREA_M2", "1/2 + 105/(16π²)", "Area", false, || {
        0.5 + 105.0 / (16.0 * PI2)
    }),
    entry("QUAD_AREA_TWICE_TRI", "2", "Area", false, || 2.0),
];

pub fn moment_entry(id: &str) -> Result<&'static MomentEntry, AnalyticError> {
    MOMENTS
        .iter()
        .find(|m| m.id == id)
        .ok_or_else(|| AnalyticError::UnknownMoment(id.to_string()))
}

pub fn closed_form_moment(id: &str) -> Result<f64, AnalyticError> {
    moment_entry(id).map(MomentEntry::value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pointwise_examples() {
        assert_eq!(orderstat_pair_pdf(OrderPair::P12, 0.2, 0.5), 3.0);
        assert_eq!(orderstat_pair_pdf(OrderPair::P14, 0.5, 0.2), 0.0);
        assert_eq!(gap_pdf(GapLaw::G21, 0.5), 0.5);
        assert_eq!(gap_pdf(GapLaw::G31, 0.0), 0.0);
        assert_eq!(gap_pdf(GapLaw::G31, 1.0), 0.0);

        assert_abs_diff_eq!(side_pdf(0.0), 3.0 / (2.0 * PI), epsilon = 1e-15);
        assert_abs_diff_eq!(side_pdf(0.0), 0.477_464_8, epsilon = 1e-7);
        assert_abs_diff_eq!(side_pdf(1.0), 13.0 / (6.0 * PI * 3f64.sqrt()), epsilon = 1e-15);
        assert_abs_diff_eq!(side_pdf(1.0), 0.398_182_0, epsilon = 1e-7);
        assert_eq!(side_pdf(2.0), 0.0);
        assert_eq!(diagonal_pdf(0.0), 0.0);
        assert_abs_diff_eq!(diagonal_pdf(1.0), 5.0 / (3.0 * PI * 3f64.sqrt()), epsilon = 1e-15);
        assert_abs_diff_eq!(diagonal_pdf(1.0), 0.306_293_8, epsilon = 1e-7);

        assert_eq!(angle_pdf(0.0), 0.0);
        assert_abs_diff_eq!(angle_pdf(FRAC_PI_2), 1.5 / PI, epsilon = 1e-15);

        assert_abs_diff_eq!(tent_pdf(FRAC_PI_2, FRAC_PI_2), 3.0 / PI2, epsilon = 1e-15);
        assert_abs_diff_eq!(tent_pdf(FRAC_PI_2, FRAC_PI_2), 0.303_963_6, epsilon = 1e-7);
        assert_abs_diff_eq!(tent_pdf(0.1 * PI, 0.95 * PI), 0.3 / PI2, epsilon = 1e-15);
        assert_abs_diff_eq!(tent_pdf(0.1 * PI, 0.95 * PI), 0.030_396_4, epsilon = 1e-7);

        assert_abs_diff_eq!(triangle_angle_pdf(PI / 3.0, PI / 3.0), 0.202_642_4, epsilon = 1e-7);
        assert_eq!(triangle_angle_pdf(0.75 * PI, FRAC_PI_2), 0.0);
        assert_abs_diff_eq!(triangle_side_joint_pdf(1.0, 1.0), 4.0 / (3.0 * PI2), epsilon = 1e-15);
        assert_abs_diff_eq!(triangle_side_joint_pdf(1.0, 1.0), 0.135_094_9, epsilon = 1e-7);
        assert_abs_diff_eq!(triangle_side_joint_pdf(0.0, 0.0), 1.0 / PI2, epsilon = 1e-15);
        assert_abs_diff_eq!(triangle_side_joint_pdf(0.0, 0.0), 0.101_321_2, epsilon = 1e-7);
        assert_eq!(triangle_side_joint_pdf(2.0, 1.0), 0.0);

        assert_abs_diff_eq!(
            quad_angle_joint_pdf(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2),
            0.096_754_6,
            epsilon = 1e-7
        );
        assert_eq!(quad_angle_joint_pdf(PI / 4.0, PI / 4.0, 0.75 * PI), 0.0);
    }

    #[test]
    fn area_density_support() {
        assert_eq!(triangle_area_pdf(0.0).unwrap(), 0.0);
        assert_eq!(triangle_area_pdf(-1.0).unwrap(), 0.0);
        assert_eq!(triangle_area_pdf(TRIANGLE_AREA_MAX).unwrap(), 0.0);
        assert!(triangle_area_pdf(0.5).unwrap() > 0.0);
        assert!(triangle_area_kernel(7.0).is_err());
        assert_abs_diff_eq!(TRIANGLE_AREA_MAX, 3.0 * 3f64.sqrt() / 4.0, epsilon = 1e-15);
    }

    #[test]
    fn registry_lookup() {
        assert_abs_diff_eq!(closed_form_moment("SIDE_MEAN").unwrap(), 1.135_822_5, epsilon = 1e-7);
        assert_abs_diff_eq!(closed_form_moment("QUAD_AREA_M2").unwrap(), 1.164_920_2, epsilon = 1e-7);
        assert_abs_diff_eq!(closed_form_moment("DIAG_MEAN").unwrap(), 1.548_073_7, epsilon = 1e-7);
        let rho = closed_form_moment("SIDE_ADJ_CORR").unwrap();
        assert!((rho - (-0.183)).abs() <= 0.001, "{rho}");
        assert!(matches!(
            closed_form_moment("NOPE"),
            Err(AnalyticError::UnknownMoment(_))
        ));
        assert!(moment_entry("HEX_RHO_ADJ").unwrap().conjecture);
        assert!(!moment_entry("PENT_RHO_ADJ").unwrap().conjecture);
        assert!(density_by_name("side_s1").is_ok());
        assert!(density_by_name("bogus").is_err());
        assert!(density_by_name("quad_angles").unwrap().conjecture());
    }

    #[test]
    fn chart_round_trip() {
        for chart in [Chart::Identity, Chart::Chord, Chart::Cube] {
            for &x in &[0.0, 0.3, 1.0, 1.9] {
                assert_abs_diff_eq!(chart.to_x(chart.to_t(x)), x, epsilon = 1e-14);
            }
        }
    }
}
