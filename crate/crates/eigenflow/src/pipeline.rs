//! End-to-end analysis of a sampled system: filtration, persistence, flowed
//! loop images, map pairs and eigenspace diagrams.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::eigen::{
    candidate_eigenvalues, eigenspace_diagrams, loop_images, max_h1_persistence,
    radius_bound_violations, shift_stats, sweep_values, EigenspaceDiagram, MapPairs, ShiftStats, Sweep,
};
use crate::error::Error;
use crate::field::{Zp, DEFAULT_PRIME};
use crate::morse_flow::{FlowConfig, FlowEngine, FlowStats};
use crate::persistence::{reduce, PersistenceDiagram};
use crate::sampled::{lipschitz_constant, Provenance, SampledSystem};
use crate::simplicial::{build_filtration, Metric};

pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_THETA: f64 = 0.3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisConfig {
    pub prime: u32,
    pub sweep: Sweep,
    pub theta: f64,
    pub flow: FlowConfig,
    pub threads: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            prime: DEFAULT_PRIME,
            sweep: Sweep::Auto(Vec::new()),
            theta: DEFAULT_THETA,
            flow: FlowConfig::default(),
            threads: 1,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<Zp, Error> {
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::Config(format!("theta must lie in (0, 1), got {}", self.theta)));
        }
        Zp::new(self.prime).map_err(Error::Config)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputSummary {
    pub n: usize,
    pub metric: Metric,
    pub rho: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Provenance>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiltrationSummary {
    pub simplices: usize,
    pub ranks: usize,
    pub last_radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairSummary {
    pub rank_i: usize,
    pub rank_j: usize,
    pub r_i: f64,
    pub r_j: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MapPairStats {
    pub lambda: f64,
    pub shift: ShiftStats,
    pub events: Vec<PairSummary>,
    /// ranks whose target radius exceeds lambda times the source radius
    pub radius_bound_violations: usize,
    pub singular_blocks: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowSummary {
    pub loops: usize,
    pub mean_iterations: f64,
    pub max_iterations: usize,
    pub counters: FlowStats,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignificantInterval {
    pub t: u32,
    pub birth: f64,
    pub death: Option<f64>,
    pub persistence: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timing {
    pub total_s: f64,
    pub filtration_s: f64,
    pub persistence_s: f64,
    pub flow_s: f64,
    pub sphere_s: f64,
    pub eigen_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisResult {
    pub schema: u32,
    pub input: InputSummary,
    pub config: AnalysisConfig,
    pub filtration: FiltrationSummary,
    pub persistence: PersistenceDiagram,
    pub max_h1_persistence: f64,
    pub threshold: f64,
    pub eigenvalues: Vec<u32>,
    pub diagrams: Vec<EigenspaceDiagram>,
    pub significant: Vec<SignificantInterval>,
    pub map_pairs: MapPairStats,
    pub flow: FlowSummary,
    pub timing: Timing,
}

impl AnalysisResult {
    pub fn diagram(&self, t: u32) -> Option<&EigenspaceDiagram> {
        self.diagrams.iter().find(|d| d.t == t)
    }

    pub fn significant_at(&self, t: u32) -> Vec<&SignificantInterval> {
        self.significant.iter().filter(|s| s.t == t).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("results serialize")
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

pub fn analyze(sys: &SampledSystem, cfg: &AnalysisConfig) -> Result<AnalysisResult, Error> {
    let field = cfg.validate()?;
    sys.validate()?;
    let start = Instant::now();
    let lambda = lipschitz_constant(sys)?;

    let space = sys.point_set()?;
    let filt = build_filtration(&space)?;
    let t_filt = start.elapsed();

    let pers = reduce(&filt, field);
    let t_pers = start.elapsed();

    let mut engine = FlowEngine::new(&space, &filt, field, cfg.flow.clone());
    let images = loop_images(&mut engine, &pers, &sys.map)?;
    let t_flow = start.elapsed();

    let pairs = MapPairs::new(&filt, &pers, &images);
    let values = sweep_values(&pairs, &cfg.sweep);
    let diagrams = eigenspace_diagrams(&pairs, &filt, &values, cfg.threads);
    let singular_blocks = match cfg.sweep {
        Sweep::Auto(_) if field.p() > crate::eigen::FULL_SWEEP_MAX_PRIME => {
            candidate_eigenvalues(&pairs).singular_blocks
        }
        _ => 0,
    };
    let t_eigen = start.elapsed();

    let cv = filt.critical_values();
    let end = cv.last().copied().unwrap_or(0.0);
    let max_p = max_h1_persistence(pers.diagram(), &filt);
    let threshold = cfg.theta * max_p;
    let significant = diagrams
        .iter()
        .flat_map(|d| {
            d.significant(threshold, end).into_iter().map(move |iv| SignificantInterval {
                t: d.t,
                birth: iv.birth,
                death: iv.death,
                persistence: iv.persistence(end),
            })
        })
        .collect();

    let iterations: Vec<usize> = images.iter().flatten().map(|im| im.iterations).collect();
    let rank_j = pairs.rank_j();
    let events = pairs
        .event_ranks()
        .map(|i| PairSummary { rank_i: i, rank_j: rank_j[i], r_i: cv[i], r_j: cv[rank_j[i]] })
        .collect();
    let mean = |v: &[f64]| if v.is_empty() { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 };
    let violations = radius_bound_violations(&pairs, &filt, lambda);
    if violations > 0 {
        log::info!("{violations} ranks need a target radius beyond lambda times the source radius");
    }
    let sphere_s = secs(engine.stats.sphere_time);
    Ok(AnalysisResult {
        schema: SCHEMA_VERSION,
        input: InputSummary {
            n: sys.len(),
            metric: sys.metric,
            rho: sys.rho,
            metadata: sys.metadata.clone(),
        },
        config: cfg.clone(),
        filtration: FiltrationSummary {
            simplices: filt.len(),
            ranks: filt.num_ranks(),
            last_radius: end,
        },
        persistence: pers.diagram().clone(),
        max_h1_persistence: max_p,
        threshold,
        eigenvalues: values,
        diagrams,
        significant,
        map_pairs: MapPairStats {
            lambda,
            shift: shift_stats(&filt, &pers, &images),
            events,
            radius_bound_violations: violations,
            singular_blocks,
        },
        flow: FlowSummary {
            loops: iterations.len(),
            mean_iterations: mean(&iterations.iter().map(|&k| k as f64).collect::<Vec<_>>()),
            max_iterations: iterations.iter().copied().max().unwrap_or(0),
            counters: engine.stats,
        },
        timing: Timing {
            total_s: secs(start.elapsed()),
            filtration_s: secs(t_filt),
            persistence_s: secs(t_pers - t_filt),
            flow_s: secs(t_flow - t_pers),
            sphere_s,
            eigen_s: secs(t_eigen - t_flow),
        },
    })
}
