//! TOML configuration: view models, classifier C, the flat-baseline learner
//! and experiment defaults. Every hyperparameter is a named key; absent keys
//! take the library defaults.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use mcua_core::eval::{Method, DEFAULT_RNP};
use mcua_core::fusion::ModelChoice;
use mcua_core::models::{Hyperparams, Learner};
use mcua_core::{MatchingType, McuaConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub learner: Option<String>,
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub n_trees: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mtry: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    pub bootstrap: bool,
    pub var_floor: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        let h = Hyperparams::default();
        ModelSection {
            learner: None,
            c: h.c,
            tol: h.tol,
            max_iter: h.max_iter,
            n_trees: h.n_trees,
            mtry: h.mtry,
            max_depth: h.max_depth,
            min_leaf: h.min_leaf,
            bootstrap: h.bootstrap,
            var_floor: h.var_floor,
        }
    }
}

impl ModelSection {
    fn with_learner(learner: Learner) -> Self {
        ModelSection {
            learner: Some(learner.id().to_string()),
            ..ModelSection::default()
        }
    }

    /// The model choice, falling back to `default` when no learner is named.
    pub fn choice(&self, default: Learner, seed: u64, section: &str) -> Result<ModelChoice> {
        let learner = match &self.learner {
            None => default,
            Some(id) => Learner::parse(id).with_context(|| format!("[{section}] unknown learner {id:?}"))?,
        };
        Ok(ModelChoice {
            learner,
            params: Hyperparams {
                c: self.c,
                tol: self.tol,
                max_iter: self.max_iter,
                n_trees: self.n_trees,
                mtry: self.mtry,
                max_depth: self.max_depth,
                min_leaf: self.min_leaf,
                bootstrap: self.bootstrap,
                var_floor: self.var_floor,
                seed,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FusionSection {
    /// Name slots per network; inferred from the accounts when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub theta: f64,
}

impl Default for FusionSection {
    fn default() -> Self {
        FusionSection {
            l: None,
            n: None,
            theta: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentSection {
    pub rnp: Vec<usize>,
    pub methods: Vec<String>,
    pub invert_folds: bool,
    /// k values of the top-k feature curves.
    pub topk: Vec<usize>,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection {
            rnp: DEFAULT_RNP.to_vec(),
            methods: Method::TABLE.iter().map(Method::id).collect(),
            invert_folds: false,
            topk: vec![1, 2, 3, 4, 5, 10, 15],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TablesSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CliConfig {
    pub fusion: FusionSection,
    pub cc: ModelSection,
    pub ce: ModelSection,
    pub ee: ModelSection,
    pub classifier: ModelSection,
    /// Learner of the flat baselines.
    pub baseline: ModelSection,
    pub experiment: ExperimentSection,
    pub tables: TablesSection,
}

impl CliConfig {
    pub fn load(path: Option<&Path>) -> Result<CliConfig> {
        let Some(path) = path else {
            return Ok(CliConfig::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        CliConfig::parse(&text).with_context(|| format!("config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<CliConfig> {
        Ok(toml::from_str(text)?)
    }

    /// The defaults with every learner spelled out, as TOML.
    pub fn default_text() -> String {
        let base = McuaConfig::new(1, 1);
        let cfg = CliConfig {
            cc: ModelSection::with_learner(base.cc.learner),
            ce: ModelSection::with_learner(base.ce.learner),
            ee: ModelSection::with_learner(base.ee.learner),
            classifier: ModelSection::with_learner(base.classifier.learner),
            baseline: ModelSection::with_learner(default_baseline()),
            ..CliConfig::default()
        };
        let body = toml::to_string(&cfg).expect("config serializes");
        format!(
            "# fusion.l and fusion.n default to the widest account in each network.\n\
             # mtry (default ceil(sqrt(d))) and max_depth (default unlimited) are optional.\n\n{body}"
        )
    }

    /// The fusion configuration for `l` x `n` slots.
    pub fn mcua(&self, l: usize, n: usize, seed: u64) -> Result<McuaConfig> {
        let mut cfg = McuaConfig::new(l, n);
        cfg.theta = self.fusion.theta;
        for (mt, section, name) in [
            (MatchingType::CC, &self.cc, "cc"),
            (MatchingType::CE, &self.ce, "ce"),
            (MatchingType::EE, &self.ee, "ee"),
        ] {
            let default = cfg.choice(mt).learner;
            *cfg.choice_mut(mt) = section.choice(default, seed, name)?;
        }
        cfg.classifier = self.classifier.choice(cfg.classifier.learner, seed, "classifier")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn baseline(&self, seed: u64) -> Result<ModelChoice> {
        self.baseline.choice(default_baseline(), seed, "baseline")
    }

    pub fn slots(&self) -> Result<Option<(usize, usize)>> {
        match (self.fusion.l, self.fusion.n) {
            (Some(l), Some(n)) => Ok(Some((l, n))),
            (None, None) => Ok(None),
            _ => bail!("[fusion] l and n must be set together"),
        }
    }

    pub fn methods(&self) -> Result<Vec<Method>> {
        parse_methods(&self.experiment.methods)
    }
}

/// The flat baselines and the content method share the l1 logistic learner.
pub fn default_baseline() -> Learner {
    Learner::LogisticL1
}

pub fn parse_methods<S: AsRef<str>>(ids: &[S]) -> Result<Vec<Method>> {
    let mut out = Vec::new();
    for id in ids {
        let id = id.as_ref().trim();
        let Some(m) = Method::parse(id) else {
            bail!("unknown method {id:?}");
        };
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        bail!("no methods selected");
    }
    Ok(out)
}
