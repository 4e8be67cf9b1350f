//! Timing helpers for the analysis pipeline and the sphere solver.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::geometry::{Point, Role, SeparationSolver, SolverKind, SolverStats};
use crate::pipeline::{analyze, AnalysisConfig};
use crate::sampled::{generate_circle_map, generate_torus_map, SampledSystem, TORUS_MATRICES};

/// Sample families accepted by the generator and the benchmarks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Circle,
    Torus1,
    Torus2,
    Torus3,
}

impl Kind {
    pub fn generate(self, n: usize, sigma: f64, seed: u64) -> Result<SampledSystem, Error> {
        Ok(match self {
            Kind::Circle => generate_circle_map(n, sigma, seed)?,
            Kind::Torus1 => generate_torus_map(n, TORUS_MATRICES[0], seed)?,
            Kind::Torus2 => generate_torus_map(n, TORUS_MATRICES[1], seed)?,
            Kind::Torus3 => generate_torus_map(n, TORUS_MATRICES[2], seed)?,
        })
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

pub fn median(v: &mut [f64]) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub median_s: f64,
    /// share of the run spent computing separating spheres
    pub sphere_share: f64,
    pub runs: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub kind: Kind,
    pub sigma: f64,
    pub rows: Vec<BenchRow>,
    pub slope: f64,
}

impl BenchReport {
    pub fn table(&self) -> String {
        let mut s = format!("{:>8}  {:>12}  {:>12}\n", "n", "median [s]", "sphere share");
        for r in &self.rows {
            s += &format!("{:>8}  {:>12.4}  {:>12.3}\n", r.n, r.median_s, r.sphere_share);
        }
        s += &format!("log-log slope: {:.3}\n", self.slope);
        s
    }
}

/// Times the full analysis for each `n`, `repeats` times on fresh samples.
pub fn bench_analysis(
    kind: Kind,
    ns: &[usize],
    sigma: f64,
    repeats: usize,
    cfg: &AnalysisConfig,
    seed: u64,
) -> Result<BenchReport, Error> {
    let mut rows = Vec::new();
    for &n in ns {
        let mut runs = Vec::new();
        let mut share = Vec::new();
        for rep in 0..repeats.max(1) {
            let sys = kind.generate(n, sigma, seed.wrapping_add(rep as u64))?;
            let started = Instant::now();
            let res = analyze(&sys, cfg)?;
            let t = started.elapsed().as_secs_f64();
            runs.push(t);
            share.push(res.timing.sphere_s / t.max(1e-12));
        }
        let median_s = median(&mut runs.clone());
        rows.push(BenchRow { n, median_s, sphere_share: median(&mut share), runs });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.median_s).collect();
    let slope = if rows.len() >= 2 { loglog_slope(&xs, &ys) } else { f64::NAN };
    Ok(BenchReport { kind, sigma, rows, slope })
}

/// Points uniform in the unit square with `queries` edges, each joining a
/// random point to its nearest neighbour.
pub fn edge_queries(n: usize, queries: usize, seed: u64) -> (Vec<Point>, Vec<(usize, usize)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Point> = (0..n).map(|_| Point { x: rng.random(), y: rng.random() }).collect();
    let edges = (0..queries)
        .map(|_| {
            let i = rng.random_range(0..n);
            let j = (0..n)
                .filter(|&j| j != i)
                .min_by(|&a, &b| pts[i].dist2(pts[a]).total_cmp(&pts[i].dist2(pts[b])))
                .expect("at least two points");
            (i, j)
        })
        .collect();
    (pts, edges)
}

/// Time to solve `S(Q, A)` for each edge `Q` with `A` all other points.
pub fn bench_solver(
    pts: &[Point],
    edges: &[(usize, usize)],
    kind: SolverKind,
    seed: u64,
) -> (Duration, SolverStats, usize) {
    let mut solver = SeparationSolver::new(kind, pts.len(), seed);
    let mut found = 0;
    let started = Instant::now();
    for &(i, j) in edges {
        let role = |k: usize| Some(if k == i || k == j { Role::Q } else { Role::A });
        if solver.solve(pts, &[], role).is_some() {
            found += 1;
        }
    }
    (started.elapsed(), solver.stats, found)
}
