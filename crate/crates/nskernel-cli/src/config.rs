//! Run configuration: a JSON document validated against a closed schema
//! (unknown fields are rejected, with a path to the offending field).

use serde::{Deserialize, Serialize};

use nskernel::{CPoint, DomainSpec, C64};

pub type ComplexDoc = (f64, f64);

pub fn to_point(coords: &[ComplexDoc]) -> CPoint {
    CPoint(coords.iter().map(|&(re, im)| C64::new(re, im)).collect())
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub domain: DomainSpec,
    pub d: u32,
    #[serde(rename = "N")]
    pub truncation: u32,
    pub tol: f64,
    #[serde(default)]
    pub r_eval: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub kernel: Option<KernelBlock>,
    #[serde(default)]
    pub metric: Option<MetricBlock>,
    #[serde(default)]
    pub curvature: Option<MetricBlock>,
    #[serde(default)]
    pub extremal: Option<ExtremalBlock>,
    #[serde(default)]
    pub transform: Option<TransformBlock>,
    #[serde(default)]
    pub pinchuk: Option<PinchukBlock>,
    #[serde(default)]
    pub asymptotics: Option<AsymptoticsBlock>,
    #[serde(default)]
    pub ramadanov: Option<RamadanovBlock>,
    #[serde(default)]
    pub completeness: Option<CompletenessBlock>,
    #[serde(default)]
    pub selberg: Option<SelbergBlock>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct KernelBlock {
    /// Diagonal evaluation points.
    pub points: Vec<Vec<ComplexDoc>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MetricBlock {
    pub points: Vec<Vec<ComplexDoc>>,
    /// Direction for tau, R and Ric columns.
    pub vector: Vec<ComplexDoc>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExtremalBlock {
    pub p: Vec<ComplexDoc>,
    pub v: Vec<ComplexDoc>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TransformBlock {
    pub map: MapDoc,
    /// Destination domain; the source is the top-level domain.
    pub dst_domain: DomainSpec,
    /// Pairs (z, w) for the kernel rule.
    pub points: Vec<Vec<Vec<ComplexDoc>>>,
    /// Vectors (paired with the z of each point pair) for the metric rule.
    pub vectors: Vec<Vec<ComplexDoc>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapDoc {
    /// Row-major complex matrix.
    Linear { matrix: Vec<Vec<ComplexDoc>> },
    Translation { offset: Vec<ComplexDoc> },
    Cayley,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PinchukBlock {
    pub zeta: Vec<ComplexDoc>,
    /// Optional sweep of normal distances for the scaling-frame report.
    #[serde(default)]
    pub deltas: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AsymptoticsBlock {
    pub p0: Vec<ComplexDoc>,
    pub v: Vec<ComplexDoc>,
    pub deltas: Vec<f64>,
    pub tolerance: f64,
    /// "exact" (closed kernels) or "series" (the configured model).
    pub backend: String,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RamadanovBlock {
    pub family: Vec<DomainSpec>,
    pub grid: Vec<Vec<ComplexDoc>>,
    #[serde(default = "default_samples")]
    pub boundary_samples: usize,
}

fn default_samples() -> usize {
    1000
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CompletenessBlock {
    pub p0: Vec<ComplexDoc>,
    pub s_values: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SelbergBlock {
    pub s: u32,
    pub w: Vec<Vec<ComplexDoc>>,
}
