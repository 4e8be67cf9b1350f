//! Sampled dynamical systems: a point set, a self-map given as an index
//! array and an approximation constant, plus generators for the circle map
//! and linear torus maps.

use std::f64::consts::PI;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, SampleError};
use crate::geometry::Point;
use crate::simplicial::{torus_dist, Metric, PointSet, Simplex};

/// The three linear torus maps used in the experiments.
pub const TORUS_MATRICES: [[[i64; 2]; 2]; 3] =
    [[[2, 0], [0, 2]], [[0, 1], [1, 0]], [[1, 1], [0, 1]]];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<[[i64; 2]; 2]>,
    pub seed: u64,
}

/// Points `X`, a self-map `g` on their indices and the constant `rho`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSystem {
    pub points: Vec<Point>,
    pub map: Vec<usize>,
    pub rho: f64,
    pub metric: Metric,
    pub metadata: Option<Provenance>,
}

#[derive(Serialize, Deserialize)]
struct SampleFile {
    points: Vec<[f64; 2]>,
    map: Vec<usize>,
    rho: f64,
    metric: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    period: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<Provenance>,
}

impl SampledSystem {
    pub fn new(
        points: Vec<Point>,
        map: Vec<usize>,
        rho: f64,
        metric: Metric,
    ) -> Result<Self, SampleError> {
        let sys = SampledSystem { points, map, rho, metric, metadata: None };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<(), SampleError> {
        let n = self.points.len();
        if self.map.len() != n {
            return Err(SampleError::Invalid(format!(
                "map has {} entries for {n} points",
                self.map.len()
            )));
        }
        if let Some(i) = self.map.iter().position(|&g| g >= n) {
            return Err(SampleError::Invalid(format!("map[{i}] = {} is out of range", self.map[i])));
        }
        if !(self.rho >= 0.0 && self.rho.is_finite()) {
            return Err(SampleError::Invalid(format!("rho must be finite and >= 0, got {}", self.rho)));
        }
        if let Metric::FlatTorus { period } = self.metric {
            if !(period > 0.0 && period.is_finite()) {
                return Err(SampleError::Invalid(format!("invalid period {period}")));
            }
        }
        for p in &self.points {
            Point::new(p.x, p.y)?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same points with the identity map.
    pub fn with_identity_map(&self) -> Self {
        SampledSystem { map: (0..self.len()).collect(), rho: 0.0, ..self.clone() }
    }

    pub fn point_set(&self) -> Result<PointSet, GeometryError> {
        match self.metric {
            Metric::Euclidean => PointSet::euclidean(self.points.clone()),
            Metric::FlatTorus { period } => PointSet::flat_torus(self.points.clone(), period),
        }
    }

    pub fn dist(&self, a: usize, b: usize) -> f64 {
        let (p, q) = (self.points[a], self.points[b]);
        match self.metric {
            Metric::Euclidean => p.dist(q),
            Metric::FlatTorus { period } => torus_dist(p, q, period),
        }
    }

    pub fn to_json(&self) -> String {
        let (metric, period) = match self.metric {
            Metric::Euclidean => ("euclidean", None),
            Metric::FlatTorus { period } => ("flat_torus", Some(period)),
        };
        let file = SampleFile {
            points: self.points.iter().map(|p| [p.x, p.y]).collect(),
            map: self.map.clone(),
            rho: self.rho,
            metric: metric.to_string(),
            period,
            metadata: self.metadata.clone(),
        };
        serde_json::to_string_pretty(&file).expect("sample serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SampleError> {
        let file: SampleFile = serde_json::from_str(text)?;
        let metric = parse_metric(&file.metric, file.period)?;
        let points = file
            .points
            .iter()
            .map(|&[x, y]| Point::new(x, y))
            .collect::<Result<Vec<_>, _>>()?;
        let mut sys = SampledSystem::new(points, file.map, file.rho, metric)?;
        sys.metadata = file.metadata;
        Ok(sys)
    }

    /// Rows of `x, y, image_index`; a non-numeric first row is a header.
    pub fn from_csv(text: &str, rho: f64, metric: Metric) -> Result<Self, SampleError> {
        let mut points = Vec::new();
        let mut map = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parsed = (|| {
                if fields.len() != 3 {
                    return None;
                }
                Some((
                    fields[0].parse::<f64>().ok()?,
                    fields[1].parse::<f64>().ok()?,
                    fields[2].parse::<usize>().ok()?,
                ))
            })();
            match parsed {
                Some((x, y, g)) => {
                    points.push(Point::new(x, y)?);
                    map.push(g);
                }
                None if points.is_empty() && lineno == 0 => continue,
                None => {
                    return Err(SampleError::Invalid(format!(
                        "line {}: expected x,y,image_index",
                        lineno + 1
                    )))
                }
            }
        }
        SampledSystem::new(points, map, rho, metric)
    }

    pub fn load(path: &Path, rho: Option<f64>, metric: Option<Metric>) -> Result<Self, SampleError> {
        let text = std::fs::read_to_string(path)?;
        let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        if is_csv {
            let rho = rho.ok_or_else(|| SampleError::Invalid("CSV input needs --rho".into()))?;
            SampledSystem::from_csv(&text, rho, metric.unwrap_or(Metric::Euclidean))
        } else {
            let mut sys = SampledSystem::from_json(&text)?;
            if let Some(r) = rho {
                sys.rho = r;
            }
            if let Some(m) = metric {
                sys.metric = m;
            }
            sys.validate()?;
            Ok(sys)
        }
    }
}

pub fn parse_metric(name: &str, period: Option<f64>) -> Result<Metric, SampleError> {
    match name {
        "euclidean" => Ok(Metric::Euclidean),
        "flat_torus" => Ok(Metric::FlatTorus { period: period.unwrap_or(1.0) }),
        other => Err(SampleError::Invalid(format!("unknown metric {other:?}"))),
    }
}

/// Largest expansion ratio `d(g x, g y) / d(x, y)` over distinct pairs.
pub fn lipschitz_constant(sys: &SampledSystem) -> Result<f64, SampleError> {
    let n = sys.len();
    if n < 2 {
        return Err(SampleError::Invalid("need at least two points".into()));
    }
    let mut best = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            let d = sys.dist(i, j);
            if d == 0.0 {
                return Err(SampleError::DuplicatePoints(i, j));
            }
            best = best.max(sys.dist(sys.map[i], sys.map[j]) / d);
        }
    }
    Ok(best)
}

/// Index of the point nearest to `q`; ties go to the smaller index.
fn nearest(points: &[Point], q: Point, dist: impl Fn(Point, Point) -> f64) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, &p) in points.iter().enumerate() {
        let d = dist(p, q);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

fn square(p: Point) -> Point {
    Point { x: p.x * p.x - p.y * p.y, y: 2.0 * p.x * p.y }
}

/// Circle map `z -> z^2` sampled at `n` uniform angles with Gaussian noise.
pub fn generate_circle_map(n: usize, sigma: f64, seed: u64) -> Result<SampledSystem, SampleError> {
    if n < 3 || sigma.is_nan() || sigma < 0.0 {
        return Err(SampleError::Invalid("need n >= 3 and sigma >= 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let angles: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 * PI).collect();
    let mut sys = circle_map_from_angles(&angles, sigma, &mut rng)?;
    sys.metadata =
        Some(Provenance { generator: "circle".into(), n, sigma: Some(sigma), matrix: None, seed });
    Ok(sys)
}

/// Circle map on points at the given angles.
pub fn circle_map_from_angles<R: Rng>(
    angles: &[f64],
    sigma: f64,
    rng: &mut R,
) -> Result<SampledSystem, SampleError> {
    let noise = Normal::new(0.0, sigma).map_err(|e| SampleError::Invalid(e.to_string()))?;
    let points: Vec<Point> = angles
        .iter()
        .map(|&a| {
            let (dx, dy) = if sigma > 0.0 { (noise.sample(rng), noise.sample(rng)) } else { (0.0, 0.0) };
            Point { x: a.cos() + dx, y: a.sin() + dy }
        })
        .collect();
    let mut map = Vec::with_capacity(points.len());
    let mut err = 0.0f64;
    for &p in &points {
        let (g, d) = nearest(&points, square(p), |a, b| a.dist(b));
        map.push(g);
        err = err.max(d);
    }
    let rho = err + circle_hausdorff(&points);
    SampledSystem::new(points, map, rho, Metric::Euclidean)
}

/// Estimated Hausdorff distance between the points and the unit circle.
fn circle_hausdorff(points: &[Point]) -> f64 {
    let mut h = points.iter().map(|p| (p.x.hypot(p.y) - 1.0).abs()).fold(0.0, f64::max);
    let mut ang: Vec<(f64, usize)> =
        points.iter().enumerate().map(|(i, p)| (p.y.atan2(p.x), i)).collect();
    ang.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = ang.len();
    let window = 16.min(n);
    for k in 0..n {
        let a0 = ang[k].0;
        let a1 = if k + 1 < n { ang[k + 1].0 } else { ang[0].0 + 2.0 * PI };
        for s in 0..8 {
            let a = a0 + (a1 - a0) * s as f64 / 8.0;
            let probe = Point { x: a.cos(), y: a.sin() };
            let d = (0..2 * window)
                .map(|o| points[ang[(k + n + o - window) % n].1].dist(probe))
                .fold(f64::INFINITY, f64::min);
            h = h.max(d);
        }
    }
    h
}

fn quantize(u: u64) -> f64 {
    (u >> 32) as f64 / 4294967296.0
}

/// Linear torus map `x -> A x mod 1` on `n` uniform points.
pub fn generate_torus_map(
    n: usize,
    matrix: [[i64; 2]; 2],
    seed: u64,
) -> Result<SampledSystem, SampleError> {
    if n < 3 {
        return Err(SampleError::Invalid("need n >= 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Point> = (0..n)
        .map(|_| Point { x: quantize(rng.random()), y: quantize(rng.random()) })
        .collect();
    let mut sys = torus_map_on(points, matrix)?;
    sys.metadata =
        Some(Provenance { generator: "torus".into(), n, sigma: None, matrix: Some(matrix), seed });
    Ok(sys)
}

pub fn apply_torus_matrix(a: [[i64; 2]; 2], p: Point) -> Point {
    let x = a[0][0] as f64 * p.x + a[0][1] as f64 * p.y;
    let y = a[1][0] as f64 * p.x + a[1][1] as f64 * p.y;
    Point { x: x.rem_euclid(1.0), y: y.rem_euclid(1.0) }
}

/// Torus map on given points in `[0, 1)^2`.
pub fn torus_map_on(points: Vec<Point>, matrix: [[i64; 2]; 2]) -> Result<SampledSystem, SampleError> {
    let dist = |a: Point, b: Point| torus_dist(a, b, 1.0);
    let mut map = Vec::with_capacity(points.len());
    let mut err = 0.0f64;
    for &p in &points {
        let (g, d) = nearest(&points, apply_torus_matrix(matrix, p), dist);
        map.push(g);
        err = err.max(d);
    }
    let m = 2 * (points.len() as f64).sqrt().ceil() as usize + 8;
    let mut h = 0.0f64;
    for a in 0..m {
        for b in 0..m {
            let probe = Point { x: (a as f64 + 0.5) / m as f64, y: (b as f64 + 0.5) / m as f64 };
            h = h.max(nearest(&points, probe, dist).1);
        }
    }
    SampledSystem::new(points, map, err + h, Metric::FlatTorus { period: 1.0 })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KirszbraunReport {
    pub trials: usize,
    pub checked: usize,
    pub violations: usize,
    pub lambda: f64,
    pub max_ratio: f64,
}

/// Checks on random edges and triangles that the image of a set of Čech
/// radius `r` has radius at most `lambda * r`.
pub fn kirszbraun_check(
    sys: &SampledSystem,
    lambda: f64,
    trials: usize,
    seed: u64,
) -> Result<KirszbraunReport, SampleError> {
    let space = sys.point_set()?;
    let n = sys.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = KirszbraunReport { trials, checked: 0, violations: 0, lambda, max_ratio: 0.0 };
    for _ in 0..trials {
        let k = rng.random_range(2..=3usize).min(n);
        let mut idx: Vec<u32> = Vec::with_capacity(k);
        while idx.len() < k {
            let i = rng.random_range(0..n) as u32;
            if !idx.contains(&i) {
                idx.push(i);
            }
        }
        let q = Simplex::new(&idx).expect("distinct vertices");
        let mut img: Vec<u32> = idx.iter().map(|&i| sys.map[i as usize] as u32).collect();
        img.sort_unstable();
        img.dedup();
        let gq = Simplex::new(&img).expect("distinct vertices");
        let (Ok(r), Ok(s)) = (space.cech_radius(&q), space.cech_radius(&gq)) else {
            continue;
        };
        report.checked += 1;
        if r > 0.0 {
            report.max_ratio = report.max_ratio.max(s / r);
        }
        if s > lambda * r * (1.0 + 1e-9) {
            report.violations += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_turns_double() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let angles = [0.0, PI / 2.0, PI, 1.5 * PI];
        let sys = circle_map_from_angles(&angles, 0.0, &mut rng).unwrap();
        assert_eq!(sys.map, vec![0, 2, 0, 2]);
    }

    #[test]
    fn identity_has_unit_lipschitz_constant() {
        let sys = generate_circle_map(30, 0.1, 3).unwrap().with_identity_map();
        assert_eq!(lipschitz_constant(&sys).unwrap(), 1.0);
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(
            generate_circle_map(50, 0.1, 9).unwrap().to_json(),
            generate_circle_map(50, 0.1, 9).unwrap().to_json()
        );
        assert_eq!(
            generate_torus_map(50, TORUS_MATRICES[2], 9).unwrap().to_json(),
            generate_torus_map(50, TORUS_MATRICES[2], 9).unwrap().to_json()
        );
    }

    #[test]
    fn swap_map_finds_swapped_point() {
        let pts = vec![
            Point { x: 0.25, y: 0.5 },
            Point { x: 0.5, y: 0.25 },
            Point { x: 0.75, y: 0.125 },
        ];
        let sys = torus_map_on(pts, TORUS_MATRICES[1]).unwrap();
        assert_eq!(&sys.map[..2], &[1, 0]);
        let pts = vec![Point { x: 0.25, y: 0.5 }, Point { x: 0.75, y: 0.5 }, Point { x: 0.1, y: 0.9 }];
        let sys = torus_map_on(pts, TORUS_MATRICES[2]).unwrap();
        assert_eq!(sys.map[0], 1);
    }

    #[test]
    fn json_round_trip() {
        let sys = generate_torus_map(20, TORUS_MATRICES[0], 1).unwrap();
        let back = SampledSystem::from_json(&sys.to_json()).unwrap();
        assert_eq!(back, sys);
    }

    #[test]
    fn csv_import() {
        let text = "x,y,image\n0,0,1\n1,0,2\n0,1,0\n";
        let sys = SampledSystem::from_csv(text, 0.1, Metric::Euclidean).unwrap();
        assert_eq!(sys.map, vec![1, 2, 0]);
        assert!(SampledSystem::from_csv("0,0,5\n", 0.0, Metric::Euclidean).is_err());
    }

    #[test]
    fn understated_lambda_is_caught() {
        let sys = generate_circle_map(60, 0.0, 4).unwrap();
        let lambda = lipschitz_constant(&sys).unwrap();
        let ok = kirszbraun_check(&sys, lambda, 2000, 1).unwrap();
        assert_eq!(ok.violations, 0);
        let bad = kirszbraun_check(&sys, 0.5, 2000, 1).unwrap();
        assert!(bad.violations > 0);
    }
}
