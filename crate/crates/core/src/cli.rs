//! Command-line front end. Every command reads its inputs, computes, and
//! writes a single output at the end (a file with `--out`, else stdout).

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use log::info;

use crate::error::{Error, Result};
use crate::geometry::TreeRecord;
use crate::heatmap::{
    self, decode_centernet, decode_heatmap, default_filter_bank, encode, merge_heatmaps, pixel_grid,
    separate_instances, DecodeParams, SigmaOfCd, Transform,
};
use crate::io::{self, parse_f64_list, EvalConfig, OutputFormat, Patches, ReportDocument};
use crate::matching::{CostParams, DEFAULT_K_MAX};
use crate::metrics::{evaluate_patches, AgreementTable};
use crate::noise::{
    self, noise_sweep, posterior_ca, posterior_entropy, prior_from_diameters, run_matching_sweep, stream_rng,
    synthetic_forest, CaGrid, CrownSizes, LabelNoiseModel, LikelihoodParams, PosteriorModel, PredictionNoiseModel,
    SplitBranch,
};

#[derive(Debug, Parser)]
#[command(name = "canopy-metrics", version, about = "Tree-mapping evaluation, label-noise simulation and heatmap decoding")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score predictions against labels.
    Eval(EvalArgs),
    /// Matching and label-noise simulations as CSV curves.
    Simulate(SimulateArgs),
    /// Posterior of the real crown area given a labeled one.
    Posterior(PosteriorArgs),
    /// Heatmap encoding, decoding, merging and mask separation.
    #[command(subcommand)]
    Heatmap(HeatmapCommand),
    /// Label–label agreement table.
    Agree(AgreeArgs),
}

#[derive(Debug, Args, Default)]
pub struct MatchArgs {
    /// key = value file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated distance factors.
    #[arg(long)]
    pub gamma: Option<String>,
    /// Weight of the crown-area term of the matching cost.
    #[arg(long)]
    pub lambda_size: Option<f64>,
    /// Cap on the tiling multiplicity of the many-to-one and one-to-many schemes.
    #[arg(long)]
    pub kmax: Option<usize>,
}

impl MatchArgs {
    fn config(&self) -> Result<EvalConfig> {
        let mut c = EvalConfig::default();
        if let Some(path) = &self.config {
            c.apply_file(path)?;
        }
        if let Some(g) = &self.gamma {
            c.gammas = parse_f64_list(g)?;
        }
        if let Some(l) = self.lambda_size {
            c.lambda_size = l;
        }
        if let Some(k) = self.kmax {
            c.k_max = k;
        }
        Ok(c)
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Reference tree table.
    #[arg(long)]
    pub labels: PathBuf,
    /// Predicted tree table.
    #[arg(long)]
    pub preds: PathBuf,
    #[command(flatten)]
    pub matching: MatchArgs,
    /// Raster resolution for patch IoU, m/px (omit to skip patch IoU).
    #[arg(long)]
    pub resolution: Option<f64>,
    /// Skip individual IoU.
    #[arg(long)]
    pub no_individual_iou: bool,
    /// json or csv.
    #[arg(long)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Sampling fractions for the matching sweep.
    #[arg(long, group = "sweep", allow_hyphen_values = true)]
    pub s_grid: Option<String>,
    /// Label identity probabilities for the label-noise sweep.
    #[arg(long, group = "sweep", allow_hyphen_values = true)]
    pub p1_grid: Option<String>,
    /// Label biases for the label-noise sweep.
    #[arg(long, group = "sweep", allow_hyphen_values = true)]
    pub bias_grid: Option<String>,
    /// Labels to perturb (matching sweep).
    #[arg(long, conflicts_with = "synthetic")]
    pub labels: Option<PathBuf>,
    /// Generate this many synthetic labels instead (matching sweep).
    #[arg(long)]
    pub synthetic: Option<usize>,
    /// Patches for synthetic labels.
    #[arg(long, default_value_t = 10)]
    pub patches: usize,
    /// Distance factor of the matching sweep.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Weight of the crown-area term of the matching cost.
    #[arg(long, default_value_t = CostParams::DEFAULT_LAMBDA_SIZE)]
    pub lambda_size: f64,
    /// Cap on the tiling multiplicity.
    #[arg(long, default_value_t = DEFAULT_K_MAX)]
    pub kmax: usize,
    /// Center jitter in crown diameters.
    #[arg(long, default_value_t = noise::DEFAULT_JITTER)]
    pub jitter: f64,
    /// Real trees per label-noise simulation.
    #[arg(long, default_value_t = 10_000)]
    pub n_real: usize,
    /// Label identity probability when sweeping bias.
    #[arg(long, default_value_t = 0.5)]
    pub p1_label: f64,
    /// Label bias when sweeping p1.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub bias: f64,
    /// Prediction identity probability.
    #[arg(long, default_value_t = 0.6)]
    pub p1_pred: f64,
    /// Poisson rate of split and merge sizes.
    #[arg(long, default_value_t = LabelNoiseModel::DEFAULT_RATE)]
    pub rate: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PosteriorArgs {
    /// One-column CSV of measured crown diameters (m); flat prior if omitted.
    #[arg(long)]
    pub prior: Option<PathBuf>,
    /// Identity probability of the likelihood.
    #[arg(long)]
    pub p1: Option<f64>,
    /// Poisson rate of the likelihood.
    #[arg(long)]
    pub rate: Option<f64>,
    /// Crown-area grid `min,max,n` in m².
    #[arg(long, default_value = "1,200,100")]
    pub grid: String,
    /// Linear instead of logarithmic grid spacing.
    #[arg(long)]
    pub linear: bool,
    /// Use the literal printed form of the split branch.
    #[arg(long)]
    pub literal_split: bool,
}

#[derive(Debug, Subcommand)]
pub enum HeatmapCommand {
    /// Render a tree table patch as a Gaussian heatmap.
    Encode {
        /// Tree table to render.
        #[arg(long)]
        trees: PathBuf,
        /// Patch to render; required when the table holds several.
        #[arg(long)]
        patch: Option<String>,
        /// Raster width, px.
        #[arg(long)]
        width: usize,
        /// Raster height, px.
        #[arg(long)]
        height: usize,
        /// m/px.
        #[arg(long, default_value_t = 0.2)]
        resolution: f64,
        /// Keep values only inside crown polygons.
        #[arg(long)]
        clip: bool,
    },
    /// Decode a heatmap, optionally with a size map, into a tree table.
    Decode {
        #[arg(long)]
        heatmap: PathBuf,
        /// Size map (SMAP) for CenterNet-style decoding.
        #[arg(long)]
        sizes: Option<PathBuf>,
        /// Patch id written to the output table.
        #[arg(long, default_value = "patch")]
        patch_id: String,
        /// Peak threshold (default 0.6, or 0.5 with a size map).
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long, default_value_t = 11)]
        nms_window: usize,
        /// Correlation patch and filter size, px.
        #[arg(long, default_value_t = 25)]
        patch_window: usize,
    },
    /// Average heatmaps after undoing their augmentations.
    Merge {
        /// `path[:t1,t2,...]` with transforms fliph, flipv, rot90, rot180,
        /// rot270, scale=F, listed in the order they were applied.
        #[arg(long = "input", required = true)]
        inputs: Vec<String>,
    },
    /// Split a binary crown mask into trees.
    Separate {
        /// HMAP raster holding only 0 and 1.
        #[arg(long)]
        mask: PathBuf,
        #[arg(long, default_value = "patch")]
        patch_id: String,
        /// Window for the distance-transform maxima, px.
        #[arg(long, default_value_t = heatmap::DEFAULT_W_MAX)]
        w_max: usize,
        /// Window of the majority filter, px.
        #[arg(long, default_value_t = heatmap::DEFAULT_W_MAJ)]
        w_maj: usize,
    },
}

#[derive(Debug, Args)]
pub struct AgreeArgs {
    /// First annotation.
    #[arg(long)]
    pub labels: PathBuf,
    /// Second annotation of the same patches.
    #[arg(long)]
    pub labels_b: PathBuf,
    #[command(flatten)]
    pub matching: MatchArgs,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::invalid(e.to_string()))?;
    run(cli)
}

pub fn run(cli: Cli) -> Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(Error::invalid("--jobs must be at least 1"));
        }
        pool = pool.num_threads(j);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let out = cli.out;
    let bytes = pool.install(|| match cli.command {
        Command::Eval(a) => cmd_eval(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Posterior(a) => cmd_posterior(&a),
        Command::Heatmap(c) => cmd_heatmap(c),
        Command::Agree(a) => cmd_agree(&a),
    })?;
    match out {
        Some(path) => std::fs::write(&path, bytes)?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    Ok(())
}

/// Pairs label and prediction patches by id; a patch present on one side
/// only gets an empty list on the other.
pub fn pair_patches<'a>(a: &'a Patches, b: &'a Patches) -> Vec<(&'a [TreeRecord], &'a [TreeRecord])> {
    let ids: BTreeSet<&String> = a.keys().chain(b.keys()).collect();
    ids.into_iter()
        .map(|id| {
            (
                a.get(id).map_or(&[][..], Vec::as_slice),
                b.get(id).map_or(&[][..], Vec::as_slice),
            )
        })
        .collect()
}

pub fn cmd_eval(a: &EvalArgs) -> Result<Vec<u8>> {
    let mut config = a.matching.config()?;
    if let Some(r) = a.resolution {
        config.resolution = Some(r);
    }
    if a.no_individual_iou {
        config.individual_iou = false;
    }
    if let Some(f) = a.format {
        config.format = f;
    }
    config.validate()?;
    let labels = io::load_trees(&a.labels)?;
    let preds = io::load_trees(&a.preds)?;
    let pairs = pair_patches(&labels, &preds);
    info!("evaluating {} patches", pairs.len());
    let report = evaluate_patches(&pairs, &config.settings())?;
    let doc = ReportDocument { config, report };
    match doc.config.format {
        OutputFormat::Json => Ok(doc.to_json()?.into_bytes()),
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            doc.write_csv(&mut buf)?;
            Ok(buf)
        }
    }
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<Vec<u8>> {
    let mut csv = csv::Writer::from_writer(Vec::new());
    if let Some(grid) = &a.s_grid {
        let s_grid = parse_f64_list(grid)?;
        let patches: Vec<Vec<TreeRecord>> = match (&a.labels, a.synthetic) {
            (Some(path), _) => io::load_trees(path)?.into_values().collect(),
            (None, Some(n)) => {
                // a stream the sweep itself never uses
                let mut rng = stream_rng(a.seed, u64::MAX);
                synthetic_forest(&mut rng, n, a.patches, &CrownSizes::default())?
            }
            (None, None) => return Err(Error::invalid("the matching sweep needs --labels or --synthetic")),
        };
        let params = CostParams::new(a.lambda_size, a.gamma)?;
        let rows = run_matching_sweep(&patches, &s_grid, &params, a.kmax, a.jitter, a.seed)?;
        csv.write_record(["s", "n_labels", "n_preds", "scheme", "precision", "recall", "f1", "bf1"])?;
        for r in rows {
            for (name, p) in [
                ("one_to_one", r.one_to_one),
                ("many_to_one", r.many_to_one),
                ("one_to_many", r.one_to_many),
            ] {
                csv.write_record([
                    io::num(r.s),
                    r.n_labels.to_string(),
                    r.n_preds.to_string(),
                    name.to_string(),
                    io::num(p.precision),
                    io::num(p.recall),
                    io::num(p.f1),
                    io::opt(r.bf1),
                ])?;
            }
        }
    } else {
        let models: Vec<LabelNoiseModel> = match (&a.p1_grid, &a.bias_grid) {
            (Some(g), None) => parse_f64_list(g)?
                .into_iter()
                .map(|p1| LabelNoiseModel::new(p1, a.rate, a.bias))
                .collect::<Result<_>>()?,
            (None, Some(g)) => parse_f64_list(g)?
                .into_iter()
                .map(|b| LabelNoiseModel::new(a.p1_label, a.rate, b))
                .collect::<Result<_>>()?,
            _ => return Err(Error::invalid("give exactly one of --s-grid, --p1-grid, --bias-grid")),
        };
        let pm = PredictionNoiseModel::new(a.p1_pred, a.rate)?;
        let rows = noise_sweep(a.n_real, &models, &pm, a.seed)?;
        csv.write_record(["p1_label", "bias", "p1_pred", "scheme", "precision", "recall"])?;
        for r in rows {
            csv.write_record([
                io::num(r.p1_label),
                io::num(r.bias),
                io::num(r.p1_pred),
                r.scheme.as_str().to_string(),
                io::num(r.precision),
                io::num(r.recall),
            ])?;
        }
    }
    csv.into_inner().map_err(|e| Error::Io(e.into_error()))
}

pub fn cmd_posterior(a: &PosteriorArgs) -> Result<Vec<u8>> {
    let g = parse_f64_list(&a.grid)?;
    let [min, max, n] = g[..] else {
        return Err(Error::invalid("--grid takes min,max,n"));
    };
    if n.fract() != 0.0 || n < 2.0 {
        return Err(Error::invalid("grid size must be an integer >= 2"));
    }
    let grid = if a.linear {
        CaGrid::linear(min, max, n as usize)?
    } else {
        CaGrid::log_spaced(min, max, n as usize)?
    };
    let mut params = LikelihoodParams::default();
    if let Some(p1) = a.p1 {
        params.p_identity = p1;
    }
    if let Some(rate) = a.rate {
        params.poisson_rate = rate;
    }
    if a.literal_split {
        params.split_branch = SplitBranch::Literal;
    }
    let model = match &a.prior {
        Some(path) => {
            let (prior, dropped) = prior_from_diameters(&io::load_diameters(path)?, &grid)?;
            if dropped > 0 {
                log::warn!("{dropped} crown diameters fall outside the grid");
            }
            PosteriorModel::new(grid.clone(), prior, params)?
        }
        None => PosteriorModel::flat(grid.clone(), params)?,
    };
    let post = posterior_ca(&model, &grid)?;
    let entropy = posterior_entropy(&post);
    let mut csv = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["label_ca_m2".to_string(), "entropy_nats".to_string()];
    header.extend(grid.values().iter().map(|v| format!("p_real_{}", io::num(*v))));
    csv.write_record(&header)?;
    for (l, col) in post.columns.iter().enumerate() {
        let mut row = vec![io::num(grid.values()[l]), io::num(entropy[l])];
        row.extend(col.iter().map(|&v| io::num(v)));
        csv.write_record(&row)?;
    }
    csv.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// Parses `path[:t1,t2,...]`.
pub fn parse_merge_input(s: &str) -> Result<(PathBuf, Vec<Transform>)> {
    let (path, ts) = match s.rsplit_once(':') {
        Some((p, t)) if !t.contains('/') => (p, t),
        _ => (s, ""),
    };
    let transforms = ts
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t {
            "fliph" => Ok(Transform::FlipH),
            "flipv" => Ok(Transform::FlipV),
            "rot90" => Ok(Transform::Rot90(1)),
            "rot180" => Ok(Transform::Rot90(2)),
            "rot270" => Ok(Transform::Rot90(3)),
            _ => t
                .strip_prefix("scale=")
                .and_then(|f| f.parse().ok())
                .map(Transform::Rescale)
                .ok_or_else(|| Error::invalid(format!("unknown transform {t:?}"))),
        })
        .collect::<Result<_>>()?;
    Ok((PathBuf::from(path), transforms))
}

fn raster_bytes(kind: heatmap::format::RasterKind, spec: &crate::geometry::RasterSpec, values: &[f32]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    heatmap::format::write_raster(&mut buf, kind, spec, values)?;
    Ok(buf)
}

fn trees_bytes(trees: &[TreeRecord]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    io::write_trees(&mut buf, trees)?;
    Ok(buf)
}

pub fn cmd_heatmap(c: HeatmapCommand) -> Result<Vec<u8>> {
    use heatmap::format::{RasterFile, RasterKind};
    match c {
        HeatmapCommand::Encode {
            trees,
            patch,
            width,
            height,
            resolution,
            clip,
        } => {
            let patches = io::load_trees(&trees)?;
            let selected: &[TreeRecord] = match (&patch, patches.len()) {
                (Some(id), _) => patches
                    .get(id)
                    .ok_or_else(|| Error::invalid(format!("patch {id:?} not in {}", trees.display())))?,
                (None, 0) => &[],
                (None, 1) => patches.values().next().expect("one patch"),
                (None, _) => return Err(Error::invalid("the table has several patches; pick one with --patch")),
            };
            let spec = pixel_grid(width, height, resolution)?;
            let hm = encode(selected, &spec, &SigmaOfCd::default(), clip)?;
            raster_bytes(RasterKind::Heatmap, hm.spec(), hm.data())
        }
        HeatmapCommand::Decode {
            heatmap,
            sizes,
            patch_id,
            threshold,
            nms_window,
            patch_window,
        } => {
            let hm = RasterFile::open(&heatmap)?.into_heatmap()?;
            let decoded = match sizes {
                Some(path) => {
                    let sm = RasterFile::open(&path)?.into_size_map()?;
                    let params = DecodeParams {
                        nms_window,
                        patch_window,
                        peak_threshold: threshold.unwrap_or(DecodeParams::centernet().peak_threshold),
                    };
                    decode_centernet(&hm, &sm, &params, &patch_id)?
                }
                None => {
                    let params = DecodeParams {
                        nms_window,
                        patch_window,
                        peak_threshold: threshold.unwrap_or(DecodeParams::heatmap().peak_threshold),
                    };
                    params.validate()?;
                    let bank = default_filter_bank(patch_window)?;
                    decode_heatmap(&hm, &bank, &params, &SigmaOfCd::default(), &patch_id)?
                }
            };
            if decoded.dropped > 0 {
                log::warn!("{} peaks dropped without a usable size", decoded.dropped);
            }
            trees_bytes(&decoded.trees)
        }
        HeatmapCommand::Merge { inputs } => {
            let mut loaded = Vec::with_capacity(inputs.len());
            for s in &inputs {
                let (path, transforms) = parse_merge_input(s)?;
                loaded.push((RasterFile::open(&path)?.into_heatmap()?, transforms));
            }
            let frame = base_frame(&loaded)?;
            let merged = merge_heatmaps(&loaded, &frame)?;
            raster_bytes(RasterKind::Heatmap, merged.spec(), merged.data())
        }
        HeatmapCommand::Separate {
            mask,
            patch_id,
            w_max,
            w_maj,
        } => {
            let m = RasterFile::open(&mask)?.into_mask()?;
            let inst = separate_instances(&m, w_max, w_maj, &patch_id)?;
            trees_bytes(&inst.trees)
        }
    }
}

// The common input frame: an untransformed input's raster, else the first
// input's raster with its transforms undone.
fn base_frame(inputs: &[(heatmap::Heatmap, Vec<Transform>)]) -> Result<crate::geometry::RasterSpec> {
    if let Some((hm, _)) = inputs.iter().find(|(_, t)| t.is_empty()) {
        return Ok(*hm.spec());
    }
    let (hm, ts) = inputs.first().ok_or_else(|| Error::invalid("nothing to merge"))?;
    let (mut w, mut h, mut res) = (hm.width() as f64, hm.height() as f64, hm.spec().resolution);
    for t in ts.iter().rev() {
        match *t {
            Transform::Rot90(k) if k % 2 == 1 => std::mem::swap(&mut w, &mut h),
            Transform::Rescale(f) => {
                w /= f;
                h /= f;
                res *= f;
            }
            _ => {}
        }
    }
    pixel_grid(w.round().max(1.0) as usize, h.round().max(1.0) as usize, res)
}

pub fn cmd_agree(a: &AgreeArgs) -> Result<Vec<u8>> {
    let config = a.matching.config()?;
    config.validate()?;
    let gamma = *config
        .gammas
        .first()
        .ok_or_else(|| Error::invalid("agreement needs a gamma"))?;
    if config.gammas.len() > 1 {
        info!("agreement uses the first gamma, {gamma}");
    }
    let params = CostParams::new(config.lambda_size, gamma)?;
    let la = io::load_trees(&a.labels)?;
    let lb = io::load_trees(&a.labels_b)?;
    let mut table = AgreementTable::default();
    for (x, y) in pair_patches(&la, &lb) {
        table.add_patch(x, y, &params, config.k_max);
    }
    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["category", "degree", "count", "percent"])?;
    for r in table.rows() {
        csv.write_record([
            r.category.as_str().to_string(),
            r.degree.to_string(),
            r.count.to_string(),
            io::num(r.percent),
        ])?;
    }
    csv.into_inner().map_err(|e| Error::Io(e.into_error()))
}
