//! Subcommand dispatch and artifact output.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rareweak_core::bench::{
    fdr_curve, fmt_f64, min_null_draws, power_study, rank_gene_sets, with_workers, write_boundary_csv, write_fdr_csv,
    write_power_csv, write_ranking_csv, Effect, FdrDesign, MethodId, Scenario, TraitModel,
};
use rareweak_core::boundary::{alpha_grid, boundary_curve, signal_count, ArwScenario, BoundaryMode};
use rareweak_core::linalg::Matrix;
use rareweak_core::seed::{self, tag, RNG_ALGORITHM};
use rareweak_core::simgen::{
    build_ld, draw_signal_config, simulate_case_control, simulate_quantitative, CoefScheme, GenotypeSampler,
    LatentModel, LdSpec, SignalConfig, STUDY_DESIGNS,
};
use rareweak_core::stats::{marginal_stats, GenotypeMatrix, MarginalKind, Phenotype, TraitKind};
use serde_json::json;

use crate::config::{Keys, RawConfig};
use crate::error::{CliError, CliResult};
use crate::ingest::{load_gene_map, load_genotype_csv, load_phenotype_csv, GeneMap, LoadedGenotypes, QcOptions};

/// Largest block-diagonal design simulated in one piece for case/control data.
const MAX_LOGISTIC_COLUMNS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Boundary,
    Simulate,
    Score,
    Power,
    Fdr,
    Rank,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Boundary => "boundary",
            Command::Simulate => "simulate",
            Command::Score => "score",
            Command::Power => "power",
            Command::Fdr => "fdr",
            Command::Rank => "rank",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Invocation {
    pub command: Command,
    pub config: PathBuf,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: PathBuf,
}

/// Everything needed to write one artifact and its metadata sidecar.
struct Output<'a> {
    dir: &'a Path,
    command: Command,
    seed: u64,
    effective: &'a BTreeMap<String, String>,
    written: Vec<PathBuf>,
}

impl Output<'_> {
    fn write(&mut self, name: &str, bytes: Vec<u8>, extra: Option<serde_json::Value>) -> CliResult<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        let mut meta = json!({
            "artifact": name,
            "subcommand": self.command.name(),
            "version": env!("CARGO_PKG_VERSION"),
            "rng": RNG_ALGORITHM,
            "seed": self.seed,
            "config": self.effective,
        });
        if let Some(extra) = extra {
            meta["ingest"] = extra;
        }
        let meta_path = self.dir.join(format!("{name}.meta.json"));
        let text = serde_json::to_string_pretty(&meta).expect("metadata serialises") + "\n";
        fs::write(&meta_path, text).map_err(|e| CliError::io(&meta_path, e))?;
        self.written.push(path);
        Ok(())
    }
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> rareweak_core::Result<()>) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn resolve_workers(flag: Option<usize>, configured: Option<usize>) -> CliResult<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("RAREWEAK_WORKERS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::config(format!("RAREWEAK_WORKERS: '{v}' is not a worker count"))),
        _ => Ok(configured),
    }
}

/// Runs one subcommand and returns the artifacts written.
pub fn run(inv: &Invocation) -> CliResult<Vec<PathBuf>> {
    let mut raw = RawConfig::load(&inv.config)?;
    if let Some(s) = inv.seed {
        raw.set("seed", s);
    }
    let keys = Keys::new(&raw);
    let seed: u64 = keys.or("seed", 1)?;
    let configured_workers: Option<usize> = keys.opt("workers")?;
    let job = Job::parse(inv.command, &keys)?;
    let effective = keys.finish()?;
    let workers = resolve_workers(inv.workers, configured_workers)?;
    if workers == Some(0) {
        return Err(CliError::config("workers must be at least 1"));
    }
    fs::create_dir_all(&inv.out).map_err(|e| CliError::io(&inv.out, e))?;
    let mut out = Output { dir: &inv.out, command: inv.command, seed, effective: &effective, written: vec![] };
    with_workers(workers, || job.execute(seed, &mut out))??;
    Ok(out.written)
}

#[derive(Debug, Clone)]
struct ScenarioSpec {
    template: Scenario,
    designs: Vec<LdSpec>,
    effects: Vec<Effect>,
}

impl ScenarioSpec {
    fn scenarios(&self) -> impl Iterator<Item = Scenario> + '_ {
        self.designs.iter().flat_map(move |ld| {
            self.effects.iter().map(move |&effect| Scenario { ld: ld.clone(), effect, ..self.template.clone() })
        })
    }

    /// Checks every combination before any simulation starts.
    fn validate(&self) -> CliResult<()> {
        for s in self.scenarios() {
            s.validate()?;
            build_ld(&s.ld, s.l)?;
            s.beta()?;
        }
        Ok(())
    }
}

fn parse_scheme(s: &str) -> CliResult<CoefScheme> {
    match s {
        "fixed" => Ok(CoefScheme::Fixed),
        "random_sign" => Ok(CoefScheme::RandomSign),
        other => {
            let parts: Vec<&str> = other.split('_').collect();
            if let ["uniform", lo, hi] = parts.as_slice() {
                if let (Ok(lo), Ok(hi)) = (lo.parse(), hi.parse()) {
                    return Ok(CoefScheme::UniformRange { lo, hi });
                }
            }
            Err(CliError::config(format!("scenario.scheme: '{other}' is not fixed, random_sign or uniform_<lo>_<hi>")))
        }
    }
}

fn parse_scenario(keys: &Keys, multi_design: bool, multi_effect: bool) -> CliResult<ScenarioSpec> {
    let l: usize = keys.or("scenario.L", 100)?;
    let q: f64 = keys.or("scenario.q", 0.4)?;
    let trait_name: String = keys.or("scenario.trait", "additive".to_string())?;
    let (trait_model, n) = match trait_name.as_str() {
        "additive" => {
            let n: usize = keys.or("scenario.n", 1000)?;
            (TraitModel::Additive { sigma: keys.or("scenario.sigma", 1.0)? }, n)
        }
        "logistic" => {
            let beta0: f64 = keys.or("scenario.beta0", rareweak_core::simgen::DEFAULT_BETA0)?;
            let n_case: usize = keys.or("scenario.n_case", 500)?;
            let n_control: usize = keys.or("scenario.n_control", 500)?;
            (TraitModel::Logistic { beta0, n_case, n_control }, n_case + n_control)
        }
        other => return Err(CliError::config(format!("scenario.trait: '{other}' is not additive or logistic"))),
    };
    let k = match (keys.opt::<usize>("scenario.K")?, keys.opt::<f64>("scenario.alpha")?) {
        (Some(_), Some(_)) => return Err(CliError::config("give scenario.K or scenario.alpha, not both")),
        (Some(k), None) => k,
        (None, alpha) => {
            let alpha = alpha.unwrap_or(0.76);
            let k = signal_count(l, alpha)?;
            keys.or("scenario.alpha", alpha)?;
            k
        }
    };
    let effects: Vec<Effect> = match (keys.opt_list::<f64>("scenario.r")?, keys.opt_list::<f64>("scenario.beta")?) {
        (Some(_), Some(_)) => return Err(CliError::config("give scenario.r or scenario.beta, not both")),
        (Some(r), None) => r.into_iter().map(Effect::Strength).collect(),
        (None, Some(b)) => b.into_iter().map(Effect::Beta).collect(),
        (None, None) => return Err(CliError::config("missing scenario.r or scenario.beta")),
    };
    if !multi_effect && effects.len() != 1 {
        return Err(CliError::config("this subcommand takes a single scenario.r or scenario.beta"));
    }
    let ld_names: Vec<String> = keys.list_or("scenario.ld", vec!["identity".to_string()])?;
    let ld_names: Vec<String> =
        if ld_names == ["all"] { STUDY_DESIGNS.iter().map(|s| s.to_string()).collect() } else { ld_names };
    if !multi_design && ld_names.len() != 1 {
        return Err(CliError::config("this subcommand takes a single scenario.ld"));
    }
    let designs = ld_names.iter().map(|n| LdSpec::from_name(n)).collect::<rareweak_core::Result<Vec<_>>>()?;
    let scheme = parse_scheme(&keys.or("scenario.scheme", "fixed".to_string())?)?;
    let jitter: Option<f64> = keys.opt("scenario.jitter")?;
    let template = Scenario { l, n, q, ld: designs[0].clone(), trait_model, k, effect: effects[0], scheme, jitter };
    let spec = ScenarioSpec { template, designs, effects };
    spec.validate()?;
    Ok(spec)
}

fn parse_methods(keys: &Keys, kind: TraitKind) -> CliResult<Vec<MethodId>> {
    let methods: Vec<MethodId> = keys.list_or("run.methods", MethodId::applicable(kind))?;
    for m in &methods {
        m.marginal_kind(kind)?;
    }
    Ok(methods)
}

fn parse_trait_kind(s: &str) -> CliResult<TraitKind> {
    match s {
        "quantitative" => Ok(TraitKind::Quantitative),
        "binary" => Ok(TraitKind::Binary),
        other => Err(CliError::config(format!("input.trait: '{other}' is not quantitative or binary"))),
    }
}

fn existing_path(keys: &Keys, key: &str) -> CliResult<PathBuf> {
    let p = PathBuf::from(keys.required::<String>(key)?);
    if !p.is_file() {
        return Err(CliError::config(format!("{key}: file '{}' does not exist", p.display())));
    }
    Ok(p)
}

#[derive(Debug, Clone)]
struct InputSpec {
    genotypes: PathBuf,
    phenotype: PathBuf,
    gene_map: Option<PathBuf>,
    kind: TraitKind,
    qc: QcOptions,
}

impl InputSpec {
    fn parse(keys: &Keys) -> CliResult<Self> {
        let genotypes = existing_path(keys, "input.genotypes")?;
        let phenotype = existing_path(keys, "input.phenotype")?;
        let gene_map = match keys.opt::<String>("input.gene_map")? {
            Some(_) => Some(existing_path(keys, "input.gene_map")?),
            None => None,
        };
        let kind = parse_trait_kind(&keys.or("input.trait", "quantitative".to_string())?)?;
        let qc = QcOptions {
            hwe_filter: keys.or("input.hwe_filter", false)?,
            maf_filter: keys.or("input.maf_filter", false)?,
        };
        Ok(InputSpec { genotypes, phenotype, gene_map, kind, qc })
    }

    fn load(&self) -> CliResult<(LoadedGenotypes, Phenotype, GeneMap)> {
        let g = load_genotype_csv(&self.genotypes, self.qc)?;
        let y = load_phenotype_csv(&self.phenotype, self.kind)?;
        if y.len() != g.matrix.n() {
            return Err(CliError::Core(rareweak_core::Error::DimensionMismatch {
                expected: g.matrix.n(),
                got: y.len(),
            }));
        }
        let map = match &self.gene_map {
            Some(p) => load_gene_map(p, &g)?,
            None => GeneMap::single("all", g.matrix.l()),
        };
        Ok((g, y, map))
    }
}

#[derive(Debug, Clone)]
enum Job {
    Boundary { scn: ArwScenario, alphas: Vec<f64> },
    Simulate { spec: ScenarioSpec, genes: usize, signal_genes: usize },
    Score { input: InputSpec, methods: Vec<MethodId>, n_perms: usize },
    Power { spec: ScenarioSpec, methods: Vec<MethodId>, n_sims: usize, n_perms: usize, level: f64 },
    Fdr { spec: ScenarioSpec, methods: Vec<MethodId>, design: FdrDesign, levels: Vec<f64>, n_sims: usize },
    Rank { input: InputSpec, methods: Vec<MethodId>, n_perms: usize, targets: Option<Vec<String>> },
}

impl Job {
    fn parse(command: Command, keys: &Keys) -> CliResult<Job> {
        Ok(match command {
            Command::Boundary => {
                let l = keys.or("scenario.L", 100usize)?;
                let n = keys.or("scenario.n", 1000usize)?;
                let q = keys.or("scenario.q", 0.4)?;
                let sigma = keys.or("scenario.sigma", 1.0)?;
                let lo = keys.or("boundary.alpha_min", 0.51)?;
                let hi = keys.or("boundary.alpha_max", 0.99)?;
                let steps = keys.or("boundary.steps", 49usize)?;
                if steps == 0 {
                    return Err(CliError::config("boundary.steps must be positive"));
                }
                let scn = ArwScenario { l, n, alpha: 0.75, r: 0.0.into(), sigma, q: q.into() };
                scn.validate()?;
                let alphas = alpha_grid(lo, hi, steps);
                for &a in &alphas {
                    ArwScenario { alpha: a, ..scn.clone() }.validate()?;
                }
                Job::Boundary { scn, alphas }
            }
            Command::Simulate => {
                let spec = parse_scenario(keys, false, false)?;
                let genes: usize = keys.or("simulate.genes", 1)?;
                let default_signal = usize::from(spec.template.k > 0).min(genes);
                let signal_genes: usize = keys.or("simulate.signal_genes", default_signal)?;
                if genes == 0 || signal_genes > genes {
                    return Err(CliError::config(format!("{signal_genes} signal genes among {genes} is not valid")));
                }
                if signal_genes > 0 && spec.template.k == 0 {
                    return Err(CliError::config("signal genes need scenario.K > 0"));
                }
                if matches!(spec.template.trait_model, TraitModel::Logistic { .. })
                    && genes * spec.template.l > MAX_LOGISTIC_COLUMNS
                {
                    return Err(CliError::config(format!(
                        "case/control simulation is limited to {MAX_LOGISTIC_COLUMNS} SNPs in total"
                    )));
                }
                Job::Simulate { spec, genes, signal_genes }
            }
            Command::Score | Command::Rank => {
                let input = InputSpec::parse(keys)?;
                let methods = parse_methods(keys, input.kind)?;
                let n_perms: usize = keys.or("run.n_perms", 1000)?;
                if n_perms < 100 {
                    return Err(CliError::config(format!("run.n_perms: {n_perms} is below 100")));
                }
                if command == Command::Score {
                    Job::Score { input, methods, n_perms }
                } else {
                    let targets = keys.opt_list::<String>("rank.targets")?;
                    Job::Rank { input, methods, n_perms, targets }
                }
            }
            Command::Power => {
                let spec = parse_scenario(keys, true, true)?;
                let methods = parse_methods(keys, spec.template.kind())?;
                let n_sims: usize = keys.or("run.n_sims", 500)?;
                let n_perms: usize = keys.or("run.n_perms", 20)?;
                let level: f64 = keys.or("run.level", 0.05)?;
                if !(level > 0.0 && level < 1.0) {
                    return Err(CliError::config(format!("run.level: {level} is outside (0, 1)")));
                }
                if n_sims < 100 {
                    return Err(CliError::config(format!("run.n_sims: {n_sims} is below 100")));
                }
                if n_perms == 0 || n_sims * n_perms < min_null_draws(level) {
                    return Err(CliError::config(format!(
                        "run.n_sims x run.n_perms must be at least {} at level {level}",
                        min_null_draws(level)
                    )));
                }
                Job::Power { spec, methods, n_sims, n_perms, level }
            }
            Command::Fdr => {
                let spec = parse_scenario(keys, false, true)?;
                let methods = parse_methods(keys, spec.template.kind())?;
                let n_sims: usize = keys.or("run.n_sims", 10)?;
                let design =
                    FdrDesign { n_genes: keys.or("fdr.n_genes", 500)?, n_signal: keys.or("fdr.n_signal", 50)? };
                let levels: Vec<f64> = keys.list_or("fdr.levels", vec![0.01, 0.02, 0.05, 0.1, 0.2])?;
                if n_sims == 0 {
                    return Err(CliError::config("run.n_sims must be positive"));
                }
                if design.n_genes == 0 || design.n_signal > design.n_genes {
                    return Err(CliError::config("fdr.n_signal must not exceed a positive fdr.n_genes"));
                }
                if let Some(l) = levels.iter().find(|l| !(**l > 0.0 && **l < 1.0)) {
                    return Err(CliError::config(format!("fdr.levels: {l} is outside (0, 1)")));
                }
                Job::Fdr { spec, methods, design, levels, n_sims }
            }
        })
    }

    fn execute(&self, seed: u64, out: &mut Output) -> CliResult<()> {
        match self {
            Job::Boundary { scn, alphas } => {
                let curves = [BoundaryMode::Optimal, BoundaryMode::Minp]
                    .into_iter()
                    .map(|mode| Ok((mode, boundary_curve(alphas, mode, scn)?)))
                    .collect::<CliResult<Vec<_>>>()?;
                out.write("boundary.csv", csv_bytes(|b| write_boundary_csv(b, &curves))?, None)
            }
            Job::Simulate { spec, genes, signal_genes } => simulate(spec, *genes, *signal_genes, seed, out),
            Job::Score { input, methods, n_perms } => score(input, methods, *n_perms, seed, out),
            Job::Power { spec, methods, n_sims, n_perms, level } => {
                let mut results = Vec::new();
                for s in spec.scenarios() {
                    log::info!("power: {} at {}", s.ld.name(), s.effect.value());
                    results.extend(power_study(methods, &s, *n_sims, *n_perms, *level, seed)?);
                }
                out.write("power.csv", csv_bytes(|b| write_power_csv(b, &results))?, None)
            }
            Job::Fdr { spec, methods, design, levels, n_sims } => {
                let curves = spec
                    .scenarios()
                    .map(|s| Ok((s.effect.value(), fdr_curve(methods, &s, *design, levels, *n_sims, seed)?)))
                    .collect::<CliResult<Vec<_>>>()?;
                out.write("fdr.csv", csv_bytes(|b| write_fdr_csv(b, &curves))?, None)
            }
            Job::Rank { input, methods, n_perms, targets } => {
                let (g, y, map) = input.load()?;
                let ingest = serde_json::to_value(&g.report).expect("report serialises");
                let ranking = rank_gene_sets(&map.genes, &g.matrix, &y, methods, *n_perms, seed)?;
                out.write("ranking.csv", csv_bytes(|b| write_ranking_csv(b, &ranking))?, Some(ingest.clone()))?;
                if let Some(targets) = targets {
                    let names: Vec<&str> = targets.iter().map(String::as_str).collect();
                    let avg = ranking.average_rank(&names)?;
                    let mut text = String::from("method,average_rank\n");
                    for (m, a) in methods.iter().zip(avg) {
                        text.push_str(&format!("{},{}\n", m.name(), fmt_f64(a)));
                    }
                    out.write("ranking_average.csv", text.into_bytes(), Some(ingest))?;
                }
                Ok(())
            }
        }
    }
}

fn score(input: &InputSpec, methods: &[MethodId], n_perms: usize, seed: u64, out: &mut Output) -> CliResult<()> {
    let (g, y, map) = input.load()?;
    let ingest = serde_json::to_value(&g.report).expect("report serialises");
    let kind = if input.kind == TraitKind::Binary { MarginalKind::D } else { MarginalKind::T };
    let marg = marginal_stats(&g.matrix, &y, kind, None)?;
    let mut gene_of = vec![""; g.matrix.l()];
    for gene in &map.genes {
        for &c in &gene.columns {
            gene_of[c] = &gene.name;
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |r: csv::Result<()>| r.map_err(|e| CliError::io(&out.dir.join("snp_stats.csv"), e));
    io(w.write_record(["snp", "gene", "statistic", "pvalue"]))?;
    for (j, snp) in g.snp_ids.iter().enumerate() {
        io(w.write_record([snp.as_str(), gene_of[j], &fmt_f64(marg.values[j]), &fmt_f64(marg.pvalues[j])]))?;
    }
    let snp_bytes = w.into_inner().map_err(|e| CliError::io(&out.dir.join("snp_stats.csv"), e))?;
    out.write("snp_stats.csv", snp_bytes, Some(ingest.clone()))?;

    let ranking = rank_gene_sets(&map.genes, &g.matrix, &y, methods, n_perms, seed)?;
    let mut text = String::from("gene,snps,method,statistic,pvalue\n");
    for row in &ranking.genes {
        for (mi, m) in methods.iter().enumerate() {
            text.push_str(&format!(
                "{},{},{},{},{}\n",
                csv_field(&row.name),
                row.snps,
                m.name(),
                fmt_f64(row.observed[mi]),
                fmt_f64(row.pvalues[mi])
            ));
        }
    }
    out.write("gene_scores.csv", text.into_bytes(), Some(ingest))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn padded(prefix: &str, i: usize, count: usize) -> String {
    let width = count.to_string().len();
    format!("{prefix}{:0width$}", i + 1)
}

fn simulate(spec: &ScenarioSpec, genes: usize, signal_genes: usize, seed: u64, out: &mut Output) -> CliResult<()> {
    let s = &spec.template;
    let (l, total) = (s.l, genes * s.l);
    let beta = s.beta()?;
    let target = build_ld(&s.ld, l)?;
    let mut cfg = SignalConfig::null(total);
    for g in 0..signal_genes {
        let local =
            draw_signal_config(l, s.k, s.scheme, beta, seed::derive_seed(seed, &[tag::GENE, g as u64, tag::SIGNAL]))?;
        for (i, &j) in local.support.iter().enumerate() {
            cfg.support.push(g * l + j);
            cfg.signs.push(local.signs[i]);
            cfg.beta[g * l + j] = local.beta[j];
        }
    }
    cfg.scheme = s.scheme;
    let (x, y) = match s.trait_model {
        TraitModel::Additive { sigma } => {
            let model = Arc::new(LatentModel::new(&vec![s.q; l], &target)?);
            let mut data = Vec::with_capacity(s.n * total);
            for g in 0..genes {
                let gene_seed = seed::derive_seed(seed, &[tag::GENE, g as u64, tag::GENOTYPE]);
                let block = GenotypeSampler::from_model(Arc::clone(&model), gene_seed).sample(s.n)?;
                data.extend_from_slice(block.as_slice());
            }
            let x = GenotypeMatrix::from_dosages(s.n, total, data)?;
            let y = simulate_quantitative(&x, &cfg, sigma, seed::derive_seed(seed, &[tag::PHENOTYPE]))?;
            (x, y)
        }
        TraitModel::Logistic { beta0, n_case, n_control } => {
            let block_diag =
                Matrix::from_fn(total, total, |i, j| if i / l == j / l { target[(i % l, j % l)] } else { 0.0 });
            simulate_case_control(&vec![s.q; total], &block_diag, &cfg, beta0, n_case, n_control, seed)?
        }
    };

    let snp_names: Vec<String> = (0..total).map(|j| padded("snp", j, total)).collect();
    let gene_names: Vec<String> = (0..genes).map(|g| padded("gene", g, genes)).collect();

    let mut text = snp_names.join(",") + "\n";
    for i in 0..x.n() {
        let row: Vec<String> = (0..total).map(|j| (x.get(i, j) as u8).to_string()).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    out.write("genotypes.csv", text.into_bytes(), None)?;

    let mut text = String::from("y\n");
    for &v in y.values() {
        let cell = if y.kind() == TraitKind::Binary { (v as u8).to_string() } else { fmt_f64(v) };
        text.push_str(&cell);
        text.push('\n');
    }
    out.write("phenotype.csv", text.into_bytes(), None)?;

    let mut text = String::from("gene,snp\n");
    for (j, snp) in snp_names.iter().enumerate() {
        text.push_str(&format!("{},{snp}\n", gene_names[j / l]));
    }
    out.write("gene_map.csv", text.into_bytes(), None)?;

    let mut text = String::from("snp,gene,beta\n");
    for &j in &cfg.support {
        text.push_str(&format!("{},{},{}\n", snp_names[j], gene_names[j / l], fmt_f64(cfg.beta[j])));
    }
    out.write("signals.csv", text.into_bytes(), None)
}
