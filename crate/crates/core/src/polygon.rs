//! Uniform random cyclic polygons inscribed in the unit circle and their
//! exact geometry.
//!
//! Vertices sit at `exp(i θₖ)` with `0 <= θ₁ < … < θₙ < 2π`. Indices in the
//! public API are 0-based: `sides[k]` joins vertex `k-1` to vertex `k`
//! (so `sides[0]` is the wrap-around side from the last vertex to the first),
//! and `angles[k]` is `(θₖ₊₁ − θₖ₋₁)/2` for quadrilaterals (the interior angle
//! at vertex `k + 2`); every n uses the interior angle at vertex `k + 2`.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolygonError {
    #[error("polygon order must be at least 3, got {0}")]
    InvalidOrder(usize),
    #[error("central angles must satisfy 0 <= θ₁ < … < θₙ < 2π: {0}")]
    InvalidAngles(String),
    #[error("sides are not realizable as a cyclic quadrilateral (factor {factor} = {value})")]
    Infeasible { factor: usize, value: f64 },
    #[error("chord length {0} outside (0, 2]")]
    ChordDomain(f64),
}

/// Identifies one reproducible random stream: the same pair always yields
/// the same sequence, and distinct stream indices never overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// ChaCha8 keyed by the master seed, with the stream index selecting the
    /// 64-bit ChaCha stream (nonce).
    pub fn generator(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralAngles {
    theta: Vec<f64>,
}

impl CentralAngles {
    pub fn new(theta: Vec<f64>) -> Result<Self, PolygonError> {
        if theta.len() < 3 {
            return Err(PolygonError::InvalidOrder(theta.len()));
        }
        if !(theta[0] >= 0.0) {
            return Err(PolygonError::InvalidAngles(format!("θ₁ = {} is negative", theta[0])));
        }
        if !(theta[theta.len() - 1] < TAU) {
            return Err(PolygonError::InvalidAngles(format!(
                "θₙ = {} is not below 2π",
                theta[theta.len() - 1]
            )));
        }
        if let Some(w) = theta.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(PolygonError::InvalidAngles(format!("{} is not below {}", w[0], w[1])));
        }
        Ok(Self { theta })
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// θ at a possibly out-of-range 0-based index, using θ₋₁ = θₙ₋₁ − 2π and
    /// θₙ = θ₀ + 2π.
    fn theta_wrapped(&self, k: isize) -> f64 {
        let n = self.n() as isize;
        let q = k.div_euclid(n);
        self.theta[k.rem_euclid(n) as usize] + q as f64 * TAU
    }

    /// Arc gaps `g[k] = θ[k+1] − θ[k]`, the last one wrapping through 2π.
    pub fn gaps(&self) -> GapVector {
        let n = self.n() as isize;
        GapVector {
            g: (0..n)
                .map(|k| self.theta_wrapped(k + 1) - self.theta_wrapped(k))
                .collect(),
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.theta.iter().map(|t| (t.cos(), t.sin()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapVector {
    pub g: Vec<f64>,
}

impl GapVector {
    pub fn total(&self) -> f64 {
        self.g.iter().sum()
    }

    /// Gaps divided by 2π, a point on the probability simplex.
    pub fn normalized(&self) -> Vec<f64> {
        self.g.iter().map(|g| g / TAU).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonMeasurements {
    pub sides: Vec<f64>,
    pub angles: Vec<f64>,
    /// `[d₁, d₂]` for quadrilaterals: d₁ joins vertices 2 and 4, d₂ joins 1 and 3
    /// (1-based), i.e. the chords facing interior angles α₁ and α₂.
    pub diagonals: Option<[f64; 2]>,
    /// Angle between the diagonals that intercepts arcs g₁ and g₃, in (0, π).
    pub omega: Option<f64>,
    pub perimeter: f64,
    /// Shoelace area over the vertices.
    pub area: f64,
}

impl PolygonMeasurements {
    /// The acute-or-right reading of the diagonal angle, `min(ω, π − ω)`.
    pub fn omega_min(&self) -> Option<f64> {
        self.omega.map(|w| w.min(PI - w))
    }

    /// Area from the inscribed-angle identities: `2 sin α sin β sin(α+β)` for
    /// triangles and `2 sin α₂ sin α₃ sin ω` for quadrilaterals.
    pub fn trig_area(&self) -> Option<f64> {
        match self.sides.len() {
            3 => {
                let (a, b) = (self.angles[0], self.angles[1]);
                Some(2.0 * a.sin() * b.sin() * (a + b).sin())
            }
            4 => {
                let w = self.omega?;
                Some(2.0 * self.angles[1].sin() * self.angles[2].sin() * w.sin())
            }
            _ => None,
        }
    }
}

/// `n` independent uniform points on the circle, sorted. A draw with a
/// repeated value is discarded and the whole set redrawn.
pub fn sample_central_angles<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<CentralAngles, PolygonError> {
    if n < 3 {
        return Err(PolygonError::InvalidOrder(n));
    }
    let mut theta = vec![0.0; n];
    loop {
        for t in theta.iter_mut() {
            *t = loop {
                let v = rng.gen::<f64>() * TAU;
                // rounding can land exactly on 2π
                if v < TAU {
                    break v;
                }
            };
        }
        theta.sort_unstable_by(f64::total_cmp);
        if theta.windows(2).all(|w| w[0] < w[1]) {
            return Ok(CentralAngles { theta });
        }
    }
}

pub fn measure(angles: &CentralAngles) -> PolygonMeasurements {
    let n = angles.n();
    let gaps = angles.gaps().g;
    let prev = |k: usize| gaps[(k + n - 1) % n];

    let sides: Vec<f64> = (0..n).map(|k| 2.0 * (0.5 * prev(k)).sin()).collect();
    // (θₖ₊₁ − θₖ₋₁)/2 for quadrilaterals; the interior angle two vertices on
    // in general, so that the angles of any n-gon sum to (n − 2)π
    let interior: Vec<f64> = (0..n)
        .map(|k| PI - 0.5 * (gaps[(k + 1) % n] + gaps[(k + 2) % n]))
        .collect();
    let perimeter = sides.iter().sum();

    let verts: Vec<(f64, f64)> = angles.vertices().collect();
    let area = 0.5
        * (0..n)
            .map(|k| {
                let (x0, y0) = verts[k];
                let (x1, y1) = verts[(k + 1) % n];
                x0 * y1 - x1 * y0
            })
            .sum::<f64>();

    let (diagonals, omega) = if n == 4 {
        let chord = |i: usize, j: usize| {
            let (xi, yi) = verts[i];
            let (xj, yj) = verts[j];
            (xi - xj).hypot(yi - yj)
        };
        (Some([chord(1, 3), chord(0, 2)]), Some(0.5 * (gaps[0] + gaps[2])))
    } else {
        (None, None)
    };

    PolygonMeasurements {
        sides,
        angles: interior,
        diagonals,
        omega,
        perimeter,
        area,
    }
}

/// Angles of a cyclic quadrilateral with successive sides `a, b, c, d`:
/// `(α, β, ω)` with α between `a` and `b`, β between `b` and `c`, and ω the
/// angle between the diagonals facing sides `a` and `c`.
pub fn angles_from_sides(a: f64, b: f64, c: f64, d: f64) -> Result<(f64, f64, f64), PolygonError> {
    let factors = [-a + b + c + d, a - b + c + d, a + b - c + d, a + b + c - d];
    for (i, &f) in factors.iter().enumerate() {
        if !(f > 0.0) {
            return Err(PolygonError::Infeasible { factor: i, value: f });
        }
    }
    let [p, q, r, s] = factors;
    let half = |num: f64, den: f64| 2.0 * num.sqrt().atan2(den.sqrt());
    Ok((half(r * s, p * q), half(p * s, q * r), half(q * s, p * r)))
}

/// Which root of the third-side relation to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// Third side of a triangle inscribed in the unit circle given the other two.
pub fn third_side_triangle(a: f64, b: f64, branch: Branch) -> Result<f64, PolygonError> {
    for &x in &[a, b] {
        if !(x > 0.0 && x <= 2.0) {
            return Err(PolygonError::ChordDomain(x));
        }
    }
    // (2−x)(2+x) keeps precision for chords close to a diameter
    let ca = ((2.0 - a) * (2.0 + a)).sqrt();
    let cb = ((2.0 - b) * (2.0 + b)).sqrt();
    Ok(match branch {
        Branch::Plus => 0.5 * (a * cb + b * ca),
        Branch::Minus => 0.5 * (a * cb - b * ca).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn rejects_bad_angles() {
        assert!(matches!(
            CentralAngles::new(vec![0.0, 1.0]),
            Err(PolygonError::InvalidOrder(2))
        ));
        assert!(CentralAngles::new(vec![0.0, 1.0, 1.0]).is_err());
        assert!(CentralAngles::new(vec![-0.1, 1.0, 2.0]).is_err());
        assert!(CentralAngles::new(vec![0.0, 1.0, TAU]).is_err());
        assert!(CentralAngles::new(vec![0.0, f64::NAN, 2.0]).is_err());
        assert!(sample_central_angles(2, &mut RngStream::new(0, 0).generator()).is_err());
    }

    #[test]
    fn square() {
        let q = CentralAngles::new(vec![0.0, FRAC_PI_2, PI, 1.5 * PI]).unwrap();
        let m = measure(&q);
        let r2 = 2f64.sqrt();
        for &s in &m.sides {
            assert_abs_diff_eq!(s, r2, epsilon = 1e-15);
        }
        for &a in &m.angles {
            assert_abs_diff_eq!(a, FRAC_PI_2, epsilon = 1e-15);
        }
        let [d1, d2] = m.diagonals.unwrap();
        assert_abs_diff_eq!(d1, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d2, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.omega.unwrap(), FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(m.area, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.perimeter, 4.0 * r2, epsilon = 1e-14);
    }

    #[test]
    fn equilateral_triangle() {
        let t = CentralAngles::new(vec![0.0, TAU / 3.0, 2.0 * TAU / 3.0]).unwrap();
        let m = measure(&t);
        for (&s, &a) in m.sides.iter().zip(&m.angles) {
            assert_abs_diff_eq!(s, 3f64.sqrt(), epsilon = 1e-15);
            assert_abs_diff_eq!(a, PI / 3.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(m.area, 3.0 * 3f64.sqrt() / 4.0, epsilon = 1e-15);
        assert!(m.diagonals.is_none() && m.omega.is_none());
    }

    #[test]
    fn irregular_quadrilateral() {
        // vertices (1,0), (1/2,√3/2), (−1,0), (0,−1); the shoelace sum of these
        // four points gives area (2 + √3)/2
        let q = CentralAngles::new(vec![0.0, PI / 3.0, PI, 1.5 * PI]).unwrap();
        let m = measure(&q);
        let expected_sides = [2f64.sqrt(), 1.0, 3f64.sqrt(), 2f64.sqrt()];
        let expected_angles = [5.0 * PI / 12.0, FRAC_PI_2, 7.0 * PI / 12.0, FRAC_PI_2];
        for k in 0..4 {
            assert_abs_diff_eq!(m.sides[k], expected_sides[k], epsilon = 1e-15);
            assert_abs_diff_eq!(m.angles[k], expected_angles[k], epsilon = 1e-15);
        }
        assert_abs_diff_eq!(m.omega.unwrap(), 5.0 * PI / 12.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.area, (2.0 + 3f64.sqrt()) / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.area, 1.866_025_403_784_438_6, epsilon = 1e-15);
        assert_abs_diff_eq!(m.trig_area().unwrap(), m.area, epsilon = 1e-15);
        assert_abs_diff_eq!(m.omega_min().unwrap(), 5.0 * PI / 12.0, epsilon = 1e-15);
    }

    #[test]
    fn omega_min_folds_obtuse_crossing() {
        let q = CentralAngles::new(vec![0.0, 2.0, 2.5, 5.0]).unwrap();
        let m = measure(&q);
        let w = m.omega.unwrap();
        assert!(w > FRAC_PI_2);
        assert_abs_diff_eq!(m.omega_min().unwrap(), PI - w, epsilon = 1e-15);
    }

    #[test]
    fn tan_half_angle_examples() {
        let r2 = 2f64.sqrt();
        let (a, b, w) = angles_from_sides(r2, r2, r2, r2).unwrap();
        for v in [a, b, w] {
            assert_abs_diff_eq!(v, FRAC_PI_2, epsilon = 1e-14);
        }
        let (a, b, w) = angles_from_sides(1.0, 3f64.sqrt(), r2, r2).unwrap();
        assert_abs_diff_eq!(a, FRAC_PI_2, epsilon = 1e-14);
        assert_abs_diff_eq!(b, 7.0 * PI / 12.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w, 5.0 * PI / 12.0, epsilon = 1e-14);
        assert!(matches!(
            angles_from_sides(5.0, 1.0, 1.0, 1.0),
            Err(PolygonError::Infeasible { factor: 0, .. })
        ));
    }

    #[test]
    fn third_side_examples() {
        let r3 = 3f64.sqrt();
        assert_abs_diff_eq!(third_side_triangle(r3, r3, Branch::Plus).unwrap(), r3, epsilon = 1e-15);
        assert_abs_diff_eq!(
            third_side_triangle(r3, r3, Branch::Minus).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        for &b in &[0.3f64, 1.0, 1.7] {
            let expected = (4.0 - b * b).sqrt();
            for br in [Branch::Plus, Branch::Minus] {
                assert_abs_diff_eq!(third_side_triangle(2.0, b, br).unwrap(), expected, epsilon = 1e-15);
            }
        }
        assert!(third_side_triangle(0.0, 1.0, Branch::Plus).is_err());
        assert!(third_side_triangle(1.0, 2.5, Branch::Minus).is_err());
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = sample_central_angles(3, &mut RngStream::new(7, 0).generator()).unwrap();
        let b = sample_central_angles(3, &mut RngStream::new(7, 0).generator()).unwrap();
        let c = sample_central_angles(3, &mut RngStream::new(7, 1).generator()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
