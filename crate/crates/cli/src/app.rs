//! Argument parsing and subcommand dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use mcua_core::eval::{generate_negatives, FeatureNeeds, Method, SweepTarget};
use mcua_core::features::FeatureSchema;
use mcua_core::fusion::{partition_views, view_features, PairViews};
use mcua_core::models::{train, Model};
use mcua_core::synth::{gen_dataset, Behavior, GenSpec};
use mcua_core::text::Network;
use mcua_core::{Account, FeatureExtractor, MatchingType, McuaModel, Transliterator};

use crate::config::{parse_methods, CliConfig};
use crate::data::{
    label_of, load_transliterator, read_jsonl, write_file, write_jsonl, AccountRecord, CandidateRecord, Corpus,
    PairRecord, PositiveRecord, PredictionRecord,
};
use crate::experiment::{
    build_plans, build_store, comparison_table, ranking_table, results_jsonl, run_methods, run_topk, sweep_methods,
    topk_table,
};
use crate::parallel::{default_jobs, par_map};

#[derive(Debug, Parser)]
#[command(
    name = "mcua",
    about = "Align accounts of two social networks by their names",
    disable_version_flag = true
)]
pub struct Cli {
    /// Seed of every random choice.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Directory holding replacement transliteration tables.
    #[arg(long, global = true)]
    pub tables_dir: Option<PathBuf>,
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the binary and table versions.
    #[arg(short = 'V', long)]
    pub version: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset.
    Gen(GenArgs),
    /// Train an alignment model on labeled pairs.
    Train(TrainArgs),
    /// Score candidate pairs with a trained model.
    Predict(PredictArgs),
    /// Compare methods over imbalance ratios with 5-fold rounds.
    Eval(EvalArgs),
    /// Rank the features of one matching type and draw top-k curves.
    FeatureImportance(ImportanceArgs),
    /// Print the index-label layout of a feature schema.
    EmitSchema(SchemaArgs),
    /// Rank the seven learners for a view model or for classifier C.
    SelectModel(SelectArgs),
    /// Print the default configuration file.
    DefaultConfig(OutArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 2000)]
    pub personas: usize,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Name slots in network 1.
    #[arg(long, default_value_t = 1)]
    pub l: usize,
    /// Name slots in network 2.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Negatives per positive written to pairs.jsonl.
    #[arg(long, default_value_t = 1)]
    pub rnp: usize,
    #[arg(long, default_value_t = 0.05)]
    pub noise: f64,
    /// Seven comma-separated behavior weights.
    #[arg(long, value_delimiter = ',')]
    pub mix: Option<Vec<f64>>,
    /// Draw families from a small common set so negatives share them.
    #[arg(long)]
    pub hard_negatives: bool,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub pairs: PathBuf,
    #[arg(long)]
    pub accounts: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Candidate pairs; ids resolve against --accounts unless names are inline.
    #[arg(long)]
    pub candidates: PathBuf,
    #[arg(long)]
    pub accounts: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    #[arg(long)]
    pub accounts: PathBuf,
    #[arg(long)]
    pub positives: PathBuf,
    /// Train on four folds and test on one instead of the reverse.
    #[arg(long)]
    pub invert_folds: bool,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_delimiter = ',')]
    pub rnp: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct ImportanceArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long = "type")]
    pub matching_type: String,
    #[arg(long, default_value_t = 40)]
    pub rnp: usize,
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct SchemaArgs {
    #[arg(long = "type")]
    pub matching_type: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// cc, ce, ee or classifier.
    #[arg(long)]
    pub target: String,
    #[arg(long, value_delimiter = ',')]
    pub rnp: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `argv` and runs it. Returns the process exit code: 0 on
/// success, 2 on usage errors, 1 on data errors.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

struct Env {
    seed: u64,
    jobs: usize,
    config: CliConfig,
    tables_dir: Option<PathBuf>,
}

impl Env {
    fn transliterator(&self) -> Result<Transliterator> {
        load_transliterator(self.tables_dir.as_deref())
    }

    fn extractor(&self) -> Result<FeatureExtractor> {
        Ok(FeatureExtractor::new(self.transliterator()?))
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let config = CliConfig::load(cli.config.as_deref())?;
    let env = Env {
        seed: cli.seed,
        jobs: cli.jobs.unwrap_or_else(default_jobs).max(1),
        tables_dir: cli.tables_dir.clone().or_else(|| config.tables.dir.clone()),
        config,
    };
    if cli.version {
        let tr = env.transliterator()?;
        writeln!(out, "mcua {}", env!("CARGO_PKG_VERSION"))?;
        for (file, version) in tr.versions() {
            writeln!(out, "{file}\t{version}")?;
        }
        return Ok(0);
    }
    let Some(command) = cli.command else {
        use clap::CommandFactory;
        writeln!(err, "error: a subcommand is required\n\n{}", Cli::command().render_usage())?;
        return Ok(2);
    };
    match command {
        Command::Gen(a) => gen(&env, &a, out)?,
        Command::Train(a) => train_cmd(&env, &a, out)?,
        Command::Predict(a) => predict(&env, &a, out)?,
        Command::Eval(a) => eval(&env, &a, out)?,
        Command::FeatureImportance(a) => importance(&env, &a, out)?,
        Command::EmitSchema(a) => emit_schema(&a, out)?,
        Command::SelectModel(a) => select_model(&env, &a, out)?,
        Command::DefaultConfig(a) => emit(a.out.as_deref(), &CliConfig::default_text(), out)?,
    }
    Ok(0)
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn parse_type(s: &str) -> Result<MatchingType> {
    MatchingType::parse(&s.to_ascii_uppercase()).with_context(|| format!("unknown matching type {s:?}"))
}

fn gen(env: &Env, a: &GenArgs, out: &mut dyn Write) -> Result<()> {
    let tr = env.transliterator()?;
    let mut spec = GenSpec {
        n_personas: a.personas,
        l: a.l,
        n: a.n,
        seed: env.seed,
        noise_rate: a.noise,
        hard_negatives: a.hard_negatives,
        ..GenSpec::default()
    };
    if let Some(mix) = &a.mix {
        if mix.len() != Behavior::ALL.len() {
            bail!("--mix needs {} weights, got {}", Behavior::ALL.len(), mix.len());
        }
        spec.mix.copy_from_slice(mix);
    }
    let ds = gen_dataset(&spec, &tr)?;
    let accounts: Vec<AccountRecord> = ds
        .first
        .iter()
        .map(|x| (1, x))
        .chain(ds.second.iter().map(|x| (2, x)))
        .map(|(network, x)| AccountRecord {
            network,
            id: x.id.clone(),
            names: x.names.clone(),
        })
        .collect();
    let positives: Vec<PositiveRecord> = ds
        .positives
        .iter()
        .map(|(a, b)| PositiveRecord {
            id1: a.clone(),
            id2: b.clone(),
        })
        .collect();
    let mut pairs: Vec<PairRecord> = positives
        .iter()
        .map(|p| PairRecord {
            id1: p.id1.clone(),
            id2: p.id2.clone(),
            label: 1,
        })
        .collect();
    if a.rnp > 0 {
        let keys: Vec<(usize, usize)> = (0..positives.len()).map(|k| (k, k)).collect();
        for (i, j) in generate_negatives(&keys, a.rnp, env.seed)? {
            pairs.push(PairRecord {
                id1: positives[i].id1.clone(),
                id2: positives[j].id2.clone(),
                label: 0,
            });
        }
    }
    write_jsonl(&a.out_dir.join("accounts.jsonl"), &accounts)?;
    write_jsonl(&a.out_dir.join("positives.jsonl"), &positives)?;
    write_jsonl(&a.out_dir.join("pairs.jsonl"), &pairs)?;
    writeln!(
        out,
        "wrote {} accounts, {} positives, {} pairs to {}",
        accounts.len(),
        positives.len(),
        pairs.len(),
        a.out_dir.display()
    )?;
    Ok(())
}

fn train_cmd(env: &Env, a: &TrainArgs, out: &mut dyn Write) -> Result<()> {
    let extractor = env.extractor()?;
    let corpus = Corpus::load(&a.accounts, env.config.slots()?, extractor.transliterator().classes())?;
    let config = env.config.mcua(corpus.l, corpus.n, env.seed)?;
    let records: Vec<PairRecord> = read_jsonl(&a.pairs)?;
    let mut keys = Vec::with_capacity(records.len());
    let mut labels = Vec::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        let what = format!("{}:{}", a.pairs.display(), i + 1);
        keys.push(corpus.resolve(&r.id1, &r.id2).with_context(|| what.clone())?);
        labels.push(label_of(r.label, &what)?);
    }
    let views = par_map(&keys, env.jobs, |&(i, j)| {
        view_features(&extractor, &corpus.first[i], &corpus.second[j], corpus.l, corpus.n)
    })
    .into_iter()
    .collect::<mcua_core::Result<Vec<PairViews>>>()?;
    let refs: Vec<&PairViews> = views.iter().collect();
    let model = McuaModel::train_views(&refs, &labels, &config)?;
    write_file(&a.out, &model.to_text())?;
    writeln!(out, "trained on {} pairs, model written to {}", keys.len(), a.out.display())?;
    Ok(())
}

fn candidate_account(network: Network, id: &str, names: &[String], slots: usize, tr: &Transliterator) -> Result<Account> {
    let raw: Vec<&str> = names.iter().map(String::as_str).collect();
    Account::from_raw(network, id, &raw, slots, tr.classes()).with_context(|| format!("candidate account {id}"))
}

fn predict(env: &Env, a: &PredictArgs, out: &mut dyn Write) -> Result<()> {
    let extractor = env.extractor()?;
    let tr = extractor.transliterator();
    let text = std::fs::read_to_string(&a.model).with_context(|| format!("cannot read {}", a.model.display()))?;
    let model = McuaModel::from_text(&text).with_context(|| a.model.display().to_string())?;
    let (l, n) = (model.config.l, model.config.n);
    let corpus = match &a.accounts {
        Some(p) => Some(Corpus::load(p, Some((l, n)), tr.classes())?),
        None => None,
    };
    let candidates: Vec<CandidateRecord> = read_jsonl(&a.candidates)?;
    let mut pairs = Vec::with_capacity(candidates.len());
    for (i, c) in candidates.iter().enumerate() {
        let where_ = || format!("{}:{}", a.candidates.display(), i + 1);
        let resolve = |net: Network, id: &str, inline: &Option<Vec<String>>| -> Result<Account> {
            if let Some(names) = inline {
                return candidate_account(net, id, names, if net == Network::First { l } else { n }, tr);
            }
            let corpus = corpus.as_ref().context("candidate has no inline names and no --accounts file was given")?;
            Ok(corpus.account(net, id)?.clone())
        };
        let u1 = resolve(Network::First, &c.id1, &c.names1).with_context(where_)?;
        let u2 = resolve(Network::Second, &c.id2, &c.names2).with_context(where_)?;
        pairs.push((u1, u2));
    }
    let preds = par_map(&pairs, env.jobs, |(u1, u2)| model.predict_alignment(&extractor, u1, u2));
    let mut records = Vec::with_capacity(preds.len());
    for (c, p) in candidates.iter().zip(preds) {
        let p = p?;
        records.push(PredictionRecord {
            id1: c.id1.clone(),
            id2: c.id2.clone(),
            probability: p.probability,
            label: u8::from(p.label),
            fusion: p.fusion_vector,
        });
    }
    write_jsonl(&a.out, &records)?;
    let positive = records.iter().filter(|r| r.label == 1).count();
    writeln!(out, "scored {} candidates, {} predicted aligned", records.len(), positive)?;
    Ok(())
}

fn load_dataset(env: &Env, d: &DataArgs, tr: &Transliterator) -> Result<mcua_core::eval::Dataset> {
    let corpus = Corpus::load(&d.accounts, env.config.slots()?, tr.classes())?;
    let positives: Vec<PositiveRecord> = read_jsonl(&d.positives)?;
    corpus.dataset(&positives).with_context(|| d.positives.display().to_string())
}

fn rnps(cli: &Option<Vec<usize>>, config: &CliConfig) -> Result<Vec<usize>> {
    let v = cli.clone().unwrap_or_else(|| config.experiment.rnp.clone());
    if v.is_empty() || v.contains(&0) {
        bail!("imbalance ratios must be positive integers");
    }
    Ok(v)
}

fn eval(env: &Env, a: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let extractor = env.extractor()?;
    let dataset = load_dataset(env, &a.data, extractor.transliterator())?;
    let methods = match &a.methods {
        Some(m) => parse_methods(m)?,
        None => env.config.methods()?,
    };
    let config = env.config.mcua(dataset.l, dataset.n, env.seed)?;
    let baseline = env.config.baseline(env.seed)?;
    let invert = a.data.invert_folds || env.config.experiment.invert_folds;
    let plans = build_plans(&dataset, &rnps(&a.rnp, &env.config)?, env.seed, invert)?;
    let store = build_store(&extractor, &dataset, &plans, FeatureNeeds::for_methods(&methods), env.jobs)?;
    let results = run_methods(&store, &plans, &methods, &config, &baseline, env.jobs)?;
    let table = comparison_table(&results);
    write_file(&a.data.out_dir.join("eval.tsv"), &table)?;
    write_file(&a.data.out_dir.join("eval.jsonl"), &results_jsonl(&results))?;
    out.write_all(table.as_bytes())?;
    Ok(())
}

fn select_model(env: &Env, a: &SelectArgs, out: &mut dyn Write) -> Result<()> {
    let target = match a.target.to_ascii_lowercase().as_str() {
        "classifier" => SweepTarget::Classifier,
        other => SweepTarget::View(parse_type(other)?),
    };
    let extractor = env.extractor()?;
    let dataset = load_dataset(env, &a.data, extractor.transliterator())?;
    let methods = sweep_methods(target);
    let config = env.config.mcua(dataset.l, dataset.n, env.seed)?;
    let baseline = env.config.baseline(env.seed)?;
    let invert = a.data.invert_folds || env.config.experiment.invert_folds;
    let plans = build_plans(&dataset, &rnps(&a.rnp, &env.config)?, env.seed, invert)?;
    let store = build_store(&extractor, &dataset, &plans, FeatureNeeds::for_methods(&methods), env.jobs)?;
    let results = run_methods(&store, &plans, &methods, &config, &baseline, env.jobs)?;
    let name = match target {
        SweepTarget::Classifier => "classifier".to_string(),
        SweepTarget::View(mt) => mt.as_str().to_ascii_lowercase(),
    };
    let table = ranking_table(&results);
    write_file(&a.data.out_dir.join(format!("select-{name}.tsv")), &table)?;
    write_file(&a.data.out_dir.join(format!("select-{name}.jsonl")), &results_jsonl(&results))?;
    out.write_all(table.as_bytes())?;
    Ok(())
}

fn importance(env: &Env, a: &ImportanceArgs, out: &mut dyn Write) -> Result<()> {
    let mt = parse_type(&a.matching_type)?;
    let extractor = env.extractor()?;
    let dataset = load_dataset(env, &a.data, extractor.transliterator())?;
    let config = env.config.mcua(dataset.l, dataset.n, env.seed)?;
    let invert = a.data.invert_folds || env.config.experiment.invert_folds;
    if a.rnp == 0 {
        bail!("imbalance ratio must be positive");
    }
    let plans = build_plans(&dataset, &[a.rnp], env.seed, invert)?;
    let plan = &plans[0];
    let needs = FeatureNeeds::for_methods(&[Method::Mcua]);
    let store = build_store(&extractor, &dataset, &plans, needs, env.jobs)?;

    // ranking of the view model trained on every pair of the plan
    let views: Vec<&PairViews> = plan
        .pairs
        .iter()
        .map(|&k| store.get(k).map(|c| &c.views))
        .collect::<mcua_core::Result<_>>()?;
    let parts = partition_views(&views, &plan.labels)?;
    let data = parts.get(mt);
    let choice = config.choice(mt);
    let model: Model = train(choice.learner, &choice.params, data)?;
    let ranking = mcua_core::eval::feature_ranking(&model, data)?;
    let schema = FeatureSchema::new(mt);
    let mut table = String::from("rank\tindex\tlabel\tscore\n");
    for (r, s) in ranking.iter().enumerate() {
        table.push_str(&format!("{}\t{}\t{}\t{:.6}\n", r + 1, s.index, schema.labels()[s.index], s.score));
    }
    write_file(&a.data.out_dir.join(format!("importance-{}.tsv", mt.as_str().to_ascii_lowercase())), &table)?;

    let mut ks = a.k.clone().unwrap_or_else(|| env.config.experiment.topk.clone());
    ks.retain(|&k| k >= 1 && k <= schema.len());
    if !ks.contains(&schema.len()) {
        ks.push(schema.len());
    }
    let points = run_topk(&store, plan, mt, &ks, &config, env.jobs)?;
    let curve = topk_table(mt, &points);
    write_file(&a.data.out_dir.join(format!("topk-{}.tsv", mt.as_str().to_ascii_lowercase())), &curve)?;
    out.write_all(table.as_bytes())?;
    out.write_all(curve.as_bytes())?;
    Ok(())
}

fn emit_schema(a: &SchemaArgs, out: &mut dyn Write) -> Result<()> {
    let schema = FeatureSchema::new(parse_type(&a.matching_type)?);
    emit(a.out.as_deref(), &schema.to_text(), out)
}
