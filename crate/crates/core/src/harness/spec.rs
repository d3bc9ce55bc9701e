//! Experiment and generator specifications (JSON documents).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netgen::{
    generate_dcbm, generate_mmbm, generate_sbm, random_membership, sample_dirichlet_rows, uniform_activeness,
    AdjacencyGraph, BlockMatrix, DcbmParams, Membership, MmbmParams,
};
use crate::rng::{keys, SeededRng};
use crate::select::ThresholdMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Sbm,
    Dcbm,
    Mmbm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MembershipDesign {
    /// Labels iid uniform over the communities (redrawn if one is empty).
    #[default]
    Random,
    /// Contiguous communities of near-equal size.
    Balanced,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "lowercase")]
pub enum PsiDist {
    Uniform { lo: f64, hi: f64 },
}

impl Default for PsiDist {
    fn default() -> Self {
        PsiDist::Uniform { lo: 0.0, hi: 1.0 }
    }
}

/// Generator configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub model: ModelKind,
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    /// Explicit block matrix; exclusive with `r`.
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<f64>>>,
    /// Sparsity level for `B_kl = r (1 + 2 [k = l])`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default)]
    pub membership: MembershipDesign,
    /// Activeness distribution (degree-corrected model only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_dist: Option<PsiDist>,
    /// Dirichlet concentration (mixed-membership model only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A generated graph with the parameters that produced it.
#[derive(Debug, Clone)]
pub struct ModelSample {
    pub graph: AdjacencyGraph,
    /// Community labels (absent for the mixed-membership model).
    pub membership: Option<Membership>,
    pub blocks: BlockMatrix,
}

impl ModelSpec {
    pub fn sbm(n: usize, blocks: &BlockMatrix) -> Self {
        Self {
            model: ModelKind::Sbm,
            n,
            k: blocks.k(),
            b: Some(blocks.to_rows()),
            r: None,
            membership: MembershipDesign::Random,
            psi_dist: None,
            alpha: None,
            seed: None,
        }
    }

    pub fn blocks(&self) -> Result<BlockMatrix> {
        let blocks = match (&self.b, self.r) {
            (Some(rows), None) => BlockMatrix::from_rows(rows)?,
            (None, Some(r)) => {
                if !(r > 0.0 && 3.0 * r <= 1.0) {
                    return Err(Error::param(format!("sparsity r must lie in (0, 1/3], got {r}")));
                }
                BlockMatrix::from_fn(self.k, |a, b| if a == b { 3.0 * r } else { r })?
            }
            (Some(_), Some(_)) => return Err(Error::param("give either B or r, not both")),
            (None, None) => return Err(Error::param("model needs B or r")),
        };
        if blocks.k() != self.k {
            return Err(Error::param(format!(
                "K = {} but B is {}x{}",
                self.k,
                blocks.k(),
                blocks.k()
            )));
        }
        Ok(blocks)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > self.n {
            return Err(Error::param(format!("need 1 <= K <= n, got K = {}, n = {}", self.k, self.n)));
        }
        self.blocks()?;
        if self.psi_dist.is_some() && self.model != ModelKind::Dcbm {
            return Err(Error::param("psi_dist applies only to the dcbm model"));
        }
        if self.alpha.is_some() && self.model != ModelKind::Mmbm {
            return Err(Error::param("alpha applies only to the mmbm model"));
        }
        Ok(())
    }

    /// Draws parameters and a graph. Each ingredient uses its own sub-stream
    /// of `rng`.
    pub fn sample(&self, rng: &SeededRng) -> Result<ModelSample> {
        self.validate()?;
        let blocks = self.blocks()?;
        let membership = || match self.membership {
            MembershipDesign::Random => random_membership(self.n, self.k, &mut rng.derive(keys::MEMBERSHIP)),
            MembershipDesign::Balanced => Membership::balanced(self.n, self.k),
        };
        let mut graph_rng = rng.derive(keys::GRAPH);
        match self.model {
            ModelKind::Sbm => {
                let m = membership()?;
                let graph = generate_sbm(&m, &blocks, &mut graph_rng)?;
                Ok(ModelSample {
                    graph,
                    membership: Some(m),
                    blocks,
                })
            }
            ModelKind::Dcbm => {
                let m = membership()?;
                let PsiDist::Uniform { lo, hi } = self.psi_dist.unwrap_or_default();
                let psi = uniform_activeness(self.n, lo, hi, &mut rng.derive(keys::ACTIVENESS))?;
                let params = DcbmParams::new(m.clone(), blocks.clone(), psi)?;
                let graph = generate_dcbm(&params, &mut graph_rng)?;
                Ok(ModelSample {
                    graph,
                    membership: Some(m),
                    blocks,
                })
            }
            ModelKind::Mmbm => {
                let phi = sample_dirichlet_rows(
                    self.n,
                    self.k,
                    self.alpha.unwrap_or(0.5),
                    &mut rng.derive(keys::PARAMS),
                )?;
                let params = MmbmParams::new(blocks.clone(), phi)?;
                let graph = generate_mmbm(&params, &mut graph_rng)?;
                Ok(ModelSample {
                    graph,
                    membership: None,
                    blocks,
                })
            }
        }
    }
}

/// Alternatives considered by the error table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableModel {
    /// Block model with `K0` communities.
    Null,
    /// Block model with `K0 + 1` communities.
    Finer,
    Dcbm,
    Mmbm,
}

impl TableModel {
    pub const ALL: [TableModel; 4] = [TableModel::Null, TableModel::Finer, TableModel::Dcbm, TableModel::Mmbm];

    pub fn name(self) -> &'static str {
        match self {
            TableModel::Null => "null",
            TableModel::Finer => "finer",
            TableModel::Dcbm => "dcbm",
            TableModel::Mmbm => "mmbm",
        }
    }

    pub(crate) fn code(self) -> u64 {
        match self {
            TableModel::Null => 0,
            TableModel::Finer => 1,
            TableModel::Dcbm => 2,
            TableModel::Mmbm => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    Plain,
    Bootstrap,
}

impl RunMode {
    pub fn name(self) -> &'static str {
        match self {
            RunMode::Plain => "plain",
            RunMode::Bootstrap => "bootstrap",
        }
    }
}

fn default_bootstrap() -> usize {
    50
}

fn both_modes() -> Vec<RunMode> {
    vec![RunMode::Plain, RunMode::Bootstrap]
}

/// Null distribution of the rescaled extreme eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NullDistSpec {
    pub model: ModelSpec,
    /// Hypothesized count; defaults to the model's `K`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k0: Option<usize>,
    pub replicates: usize,
    pub seed: u64,
    /// Bootstrap replicates per sample; 0 disables the correction.
    #[serde(default = "default_bootstrap")]
    pub bootstrap: usize,
    /// Use the generating labels instead of spectral clustering.
    #[serde(default)]
    pub true_labels: bool,
    #[serde(default = "default_density_points")]
    pub density_points: usize,
}

fn default_density_points() -> usize {
    512
}

/// Rejection proportions over `K0 x model x mode`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorTableSpec {
    pub n: usize,
    pub k0s: Vec<usize>,
    pub models: Vec<TableModel>,
    #[serde(default = "both_modes")]
    pub modes: Vec<RunMode>,
    /// `B_kl = between + (within - between) [k = l]`.
    pub within: f64,
    pub between: f64,
    pub alpha: f64,
    pub replicates: usize,
    pub seed: u64,
    #[serde(default = "default_bootstrap")]
    pub bootstrap: usize,
    #[serde(default)]
    pub psi_dist: PsiDist,
    #[serde(default = "default_dirichlet")]
    pub dirichlet_alpha: f64,
}

fn default_dirichlet() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "design", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SelectDesign {
    /// Equal-sized communities with `B_kl = r (1 + 2 [k = l])`.
    RSweep { n: usize, rs: Vec<f64>, ks: Vec<usize> },
    /// Random `B` with upper entries iid Unif(`low`, `high`), accepted when its
    /// smallest singular value is at least `min_singular`; labels iid uniform.
    RandomB {
        ns: Vec<usize>,
        ks: Vec<usize>,
        #[serde(default)]
        low: f64,
        #[serde(default = "default_high")]
        high: f64,
        #[serde(default = "default_min_singular")]
        min_singular: f64,
        #[serde(default = "default_max_attempts")]
        max_attempts: usize,
        /// Use this block matrix for every replicate instead of resampling.
        #[serde(default, rename = "fixed_B", skip_serializing_if = "Option::is_none")]
        fixed_b: Option<Vec<Vec<f64>>>,
    },
}

fn default_high() -> f64 {
    0.5
}

fn default_min_singular() -> f64 {
    0.1
}

fn default_max_attempts() -> usize {
    1000
}

/// Proportion of correct sequential estimates of `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectKSpec {
    pub design: SelectDesign,
    #[serde(default = "both_modes")]
    pub modes: Vec<RunMode>,
    #[serde(default)]
    pub threshold: ThresholdMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    pub replicates: usize,
    pub seed: u64,
    #[serde(default = "default_bootstrap")]
    pub bootstrap: usize,
}

/// One test on one generated graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingleTestSpec {
    pub model: ModelSpec,
    pub k0: usize,
    pub alpha: f64,
    /// Bootstrap replicates; 0 runs the plain test.
    #[serde(default)]
    pub bootstrap: usize,
    pub seed: u64,
    #[serde(default)]
    pub true_labels: bool,
}

/// One sequential estimate on one generated graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateKSpec {
    pub model: ModelSpec,
    #[serde(default)]
    pub threshold: ThresholdMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(default = "default_bootstrap")]
    pub bootstrap: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExperimentSpec {
    NullDist(NullDistSpec),
    ErrorTable(ErrorTableSpec),
    SelectK(SelectKSpec),
    SingleTest(SingleTestSpec),
    EstimateK(EstimateKSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Paper,
    Smoke,
}

/// Named experiments with paper-scale and smoke-scale presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetExperiment {
    NullDist,
    ErrorTable,
    SelectKSparsity,
    SelectKRandomB,
}

fn replicates_for(preset: Preset, paper: usize) -> usize {
    match preset {
        Preset::Paper => paper,
        Preset::Smoke => 20,
    }
}

impl ExperimentSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ExperimentSpec::NullDist(_) => "null-dist",
            ExperimentSpec::ErrorTable(_) => "error-table",
            ExperimentSpec::SelectK(_) => "select-k",
            ExperimentSpec::SingleTest(_) => "single-test",
            ExperimentSpec::EstimateK(_) => "estimate-k",
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            ExperimentSpec::NullDist(s) => s.seed,
            ExperimentSpec::ErrorTable(s) => s.seed,
            ExperimentSpec::SelectK(s) => s.seed,
            ExperimentSpec::SingleTest(s) => s.seed,
            ExperimentSpec::EstimateK(s) => s.seed,
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        match self {
            ExperimentSpec::NullDist(s) => s.seed = seed,
            ExperimentSpec::ErrorTable(s) => s.seed = seed,
            ExperimentSpec::SelectK(s) => s.seed = seed,
            ExperimentSpec::SingleTest(s) => s.seed = seed,
            ExperimentSpec::EstimateK(s) => s.seed = seed,
        }
    }

    /// Replicate count, for experiments that have one.
    pub fn replicates_mut(&mut self) -> Option<&mut usize> {
        match self {
            ExperimentSpec::NullDist(s) => Some(&mut s.replicates),
            ExperimentSpec::ErrorTable(s) => Some(&mut s.replicates),
            ExperimentSpec::SelectK(s) => Some(&mut s.replicates),
            _ => None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ExperimentSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let check_reps = |r: usize| {
            if r == 0 {
                Err(Error::param("replicate count must be at least 1"))
            } else {
                Ok(())
            }
        };
        let check_alpha = |a: f64| {
            if a > 0.0 && a < 1.0 {
                Ok(())
            } else {
                Err(Error::param(format!("level must lie in (0, 1), got {a}")))
            }
        };
        let check_boot = |m: usize| {
            if m == 1 {
                Err(Error::param("bootstrap needs at least 2 replicates"))
            } else {
                Ok(())
            }
        };
        match self {
            ExperimentSpec::NullDist(s) => {
                check_reps(s.replicates)?;
                check_boot(s.bootstrap)?;
                s.model.validate()?;
                let k0 = s.k0.unwrap_or(s.model.k);
                if k0 == 0 || k0 > s.model.n {
                    return Err(Error::param(format!("k0 = {k0} out of range")));
                }
                if s.true_labels && (k0 != s.model.k || s.model.model == ModelKind::Mmbm) {
                    return Err(Error::param("true labels need k0 = K and a labelled model"));
                }
                if s.density_points < 2 {
                    return Err(Error::param("density needs at least two grid points"));
                }
            }
            ExperimentSpec::ErrorTable(s) => {
                check_reps(s.replicates)?;
                check_alpha(s.alpha)?;
                check_boot(s.bootstrap)?;
                if s.k0s.is_empty() || s.models.is_empty() || s.modes.is_empty() {
                    return Err(Error::param("error table needs K0 values, models and modes"));
                }
                if s.modes.contains(&RunMode::Bootstrap) && s.bootstrap == 0 {
                    return Err(Error::param("bootstrap mode requested with 0 replicates"));
                }
                for &k0 in &s.k0s {
                    if k0 == 0 || k0 + 1 > s.n {
                        return Err(Error::param(format!("K0 = {k0} out of range for n = {}", s.n)));
                    }
                }
                BlockMatrix::planted(2, s.within, s.between)?;
                let PsiDist::Uniform { lo, hi } = s.psi_dist;
                if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
                    return Err(Error::param("activeness range must lie in [0, 1]"));
                }
                if !(s.dirichlet_alpha > 0.0) {
                    return Err(Error::param("Dirichlet parameter must be positive"));
                }
            }
            ExperimentSpec::SelectK(s) => {
                check_reps(s.replicates)?;
                check_boot(s.bootstrap)?;
                if s.modes.is_empty() {
                    return Err(Error::param("select-k needs at least one mode"));
                }
                if s.modes.contains(&RunMode::Bootstrap) && s.bootstrap == 0 {
                    return Err(Error::param("bootstrap mode requested with 0 replicates"));
                }
                if s.k_max == Some(0) {
                    return Err(Error::param("k_max must be at least 1"));
                }
                s.threshold.threshold(2)?;
                match &s.design {
                    SelectDesign::RSweep { n, rs, ks } => {
                        if rs.is_empty() || ks.is_empty() {
                            return Err(Error::param("r-sweep needs r and K values"));
                        }
                        for &k in ks {
                            for &r in rs {
                                ModelSpec {
                                    model: ModelKind::Sbm,
                                    n: *n,
                                    k,
                                    b: None,
                                    r: Some(r),
                                    membership: MembershipDesign::Balanced,
                                    psi_dist: None,
                                    alpha: None,
                                    seed: None,
                                }
                                .validate()?;
                            }
                        }
                    }
                    SelectDesign::RandomB {
                        ns,
                        ks,
                        low,
                        high,
                        min_singular,
                        max_attempts,
                        fixed_b,
                    } => {
                        if ns.is_empty() || ks.is_empty() {
                            return Err(Error::param("random-B design needs n and K values"));
                        }
                        if !(0.0 <= *low && low < high && *high <= 1.0) {
                            return Err(Error::param(format!("entry range [{low}, {high}] invalid")));
                        }
                        if !(*min_singular >= 0.0) || *max_attempts == 0 {
                            return Err(Error::param("invalid singular-value acceptance settings"));
                        }
                        if let Some(rows) = fixed_b {
                            let b = BlockMatrix::from_rows(rows)?;
                            if ks.iter().any(|&k| k != b.k()) {
                                return Err(Error::param("fixed B must match every K"));
                            }
                        }
                        for &n in ns {
                            if ks.iter().any(|&k| k == 0 || k > n) {
                                return Err(Error::param(format!("K out of range for n = {n}")));
                            }
                        }
                    }
                }
            }
            ExperimentSpec::SingleTest(s) => {
                check_alpha(s.alpha)?;
                check_boot(s.bootstrap)?;
                s.model.validate()?;
                if s.true_labels && (s.k0 != s.model.k || s.model.model == ModelKind::Mmbm) {
                    return Err(Error::param("true labels need k0 = K and a labelled model"));
                }
            }
            ExperimentSpec::EstimateK(s) => {
                check_boot(s.bootstrap)?;
                s.model.validate()?;
                s.threshold.threshold(2)?;
            }
        }
        Ok(())
    }

    /// Built-in experiment at paper or smoke scale.
    pub fn preset(which: PresetExperiment, preset: Preset) -> Self {
        let seed = 20_160_101;
        match which {
            PresetExperiment::NullDist => ExperimentSpec::NullDist(NullDistSpec {
                model: ModelSpec {
                    membership: MembershipDesign::Balanced,
                    ..ModelSpec::sbm(200, &BlockMatrix::planted(2, 0.7, 0.3).expect("valid"))
                },
                k0: None,
                replicates: replicates_for(preset, 1000),
                seed,
                bootstrap: 50,
                true_labels: false,
                density_points: 512,
            }),
            PresetExperiment::ErrorTable => {
                let (n, replicates, models) = match preset {
                    Preset::Paper => (1000, 200, TableModel::ALL.to_vec()),
                    Preset::Smoke => (500, 50, vec![TableModel::Null]),
                };
                ExperimentSpec::ErrorTable(ErrorTableSpec {
                    n,
                    k0s: vec![2, 3, 4],
                    models,
                    modes: both_modes(),
                    within: 0.6,
                    between: 0.2,
                    alpha: 0.05,
                    replicates,
                    seed,
                    bootstrap: 50,
                    psi_dist: PsiDist::default(),
                    dirichlet_alpha: 0.5,
                })
            }
            PresetExperiment::SelectKSparsity => ExperimentSpec::SelectK(SelectKSpec {
                design: SelectDesign::RSweep {
                    n: 1000,
                    rs: match preset {
                        Preset::Paper => vec![0.01, 0.02, 0.05, 0.1, 0.2],
                        Preset::Smoke => vec![0.05, 0.2],
                    },
                    ks: match preset {
                        Preset::Paper => (2..=8).collect(),
                        Preset::Smoke => vec![2, 4],
                    },
                },
                modes: both_modes(),
                threshold: ThresholdMode::default(),
                k_max: None,
                replicates: replicates_for(preset, 200),
                seed,
                bootstrap: 50,
            }),
            PresetExperiment::SelectKRandomB => ExperimentSpec::SelectK(SelectKSpec {
                design: SelectDesign::RandomB {
                    ns: match preset {
                        Preset::Paper => vec![500, 1000],
                        Preset::Smoke => vec![500],
                    },
                    ks: vec![2, 3, 4],
                    low: 0.0,
                    high: 0.5,
                    min_singular: 0.1,
                    max_attempts: 1000,
                    fixed_b: None,
                },
                modes: both_modes(),
                threshold: ThresholdMode::default(),
                k_max: None,
                replicates: replicates_for(preset, 200),
                seed,
                bootstrap: 50,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_json_round_trip() {
        let text = r#"{"model":"dcbm","n":50,"K":2,"r":0.1,"psi_dist":{"dist":"uniform","lo":0.2,"hi":1.0},"seed":4}"#;
        let spec: ModelSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec.model, ModelKind::Dcbm);
        let b = spec.blocks().unwrap();
        assert!((b.get(0, 0) - 0.3).abs() < 1e-15 && (b.get(0, 1) - 0.1).abs() < 1e-15);
        let again: ModelSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(spec, again);
    }

    #[test]
    fn model_rejects_bad_fields() {
        assert!(serde_json::from_str::<ModelSpec>(r#"{"model":"sbm","n":5,"K":1,"r":0.1,"bogus":1}"#).is_err());
        let both: ModelSpec =
            serde_json::from_str(r#"{"model":"sbm","n":5,"K":1,"r":0.1,"B":[[0.5]]}"#).unwrap();
        assert!(both.validate().is_err());
        let wrong_k: ModelSpec = serde_json::from_str(r#"{"model":"sbm","n":5,"K":2,"B":[[0.5]]}"#).unwrap();
        assert!(wrong_k.validate().is_err());
        let psi: ModelSpec =
            serde_json::from_str(r#"{"model":"sbm","n":5,"K":1,"r":0.1,"psi_dist":{"dist":"uniform","lo":0,"hi":1}}"#)
                .unwrap();
        assert!(psi.validate().is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        for model in [ModelKind::Sbm, ModelKind::Dcbm, ModelKind::Mmbm] {
            let spec = ModelSpec {
                model,
                ..ModelSpec::sbm(40, &BlockMatrix::planted(3, 0.6, 0.2).unwrap())
            };
            let a = spec.sample(&SeededRng::new(8)).unwrap();
            let b = spec.sample(&SeededRng::new(8)).unwrap();
            assert_eq!(a.graph, b.graph);
            assert_eq!(a.membership, b.membership);
            assert_eq!(a.membership.is_none(), model == ModelKind::Mmbm);
        }
    }

    #[test]
    fn presets_validate_and_round_trip() {
        for which in [
            PresetExperiment::NullDist,
            PresetExperiment::ErrorTable,
            PresetExperiment::SelectKSparsity,
            PresetExperiment::SelectKRandomB,
        ] {
            for preset in [Preset::Paper, Preset::Smoke] {
                let spec = ExperimentSpec::preset(which, preset);
                spec.validate().unwrap();
                let text = serde_json::to_string(&spec).unwrap();
                assert_eq!(ExperimentSpec::from_json(&text).unwrap(), spec);
            }
        }
    }

    #[test]
    fn zero_replicates_rejected() {
        let mut spec = ExperimentSpec::preset(PresetExperiment::NullDist, Preset::Smoke);
        *spec.replicates_mut().unwrap() = 0;
        assert!(spec.validate().is_err());
    }
}
