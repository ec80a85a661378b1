//! Genotype, phenotype and gene-map readers.
//!
//! Genotype files are CSV with a header row of SNP ids and one row per
//! subject holding 0/1/2 minor-allele counts or `NA`. Missing cells are
//! replaced by the column mean of the observed values. A column is dropped
//! when more than 10% of it is missing or it is constant; the optional
//! quality filters also drop columns failing the 1-df chi-square
//! Hardy-Weinberg test at p < 0.01 or with MAF below 0.01. Every imputation
//! and drop is logged and kept in an [`IngestReport`].

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use rareweak_core::bench::Gene;
use rareweak_core::normal;
use rareweak_core::stats::{GenotypeMatrix, Phenotype, TraitKind};
use rareweak_core::Error as CoreError;
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const MAX_MISSING_RATE: f64 = 0.10;
pub const HWE_MIN_P: f64 = 0.01;
pub const MIN_MAF: f64 = 0.01;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QcOptions {
    pub hwe_filter: bool,
    pub maf_filter: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Imputation {
    pub snp: String,
    pub missing: usize,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum DropReason {
    MissingRate { missing: usize, rate: f64 },
    Constant,
    Hwe { pvalue: f64 },
    LowMaf { maf: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DroppedColumn {
    pub snp: String,
    #[serde(flatten)]
    pub reason: DropReason,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct IngestReport {
    pub rows: usize,
    pub columns_read: usize,
    pub columns_kept: usize,
    pub imputed: Vec<Imputation>,
    pub dropped: Vec<DroppedColumn>,
}

#[derive(Debug, Clone)]
pub struct LoadedGenotypes {
    pub matrix: GenotypeMatrix,
    /// Ids of the kept columns, in matrix order.
    pub snp_ids: Vec<String>,
    /// Every id in the file header.
    pub header: Vec<String>,
    pub report: IngestReport,
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

fn malformed(path: &Path, line: u64, reason: impl Into<String>) -> CliError {
    CliError::MalformedCsv { path: path_str(path), line, reason: reason.into() }
}

fn reader(path: &Path) -> CliResult<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new().has_headers(true).flexible(true).from_path(path).map_err(|e| CliError::io(path, e))
}

fn record_line(rec: &csv::StringRecord, fallback: u64) -> u64 {
    rec.position().map_or(fallback, |p| p.line())
}

/// 1-df chi-square Hardy-Weinberg p-value from genotype counts.
pub fn hwe_pvalue(counts: [usize; 3]) -> f64 {
    let n = (counts[0] + counts[1] + counts[2]) as f64;
    let p = (counts[1] + 2 * counts[2]) as f64 / (2.0 * n);
    let expected = [n * (1.0 - p) * (1.0 - p), 2.0 * n * p * (1.0 - p), n * p * p];
    if expected.iter().any(|&e| e <= 0.0) {
        return 1.0;
    }
    let stat: f64 = counts.iter().zip(expected).map(|(&o, e)| (o as f64 - e).powi(2) / e).sum();
    // a 1-df chi-square is a squared standard normal
    normal::two_sided_p(stat.sqrt())
}

/// Replaces missing cells by the mean of the observed ones. Returns the
/// dosages, the missing count and the mean; `None` if nothing is observed.
pub fn impute_column(col: &[Option<u8>]) -> Option<(Vec<f64>, usize, f64)> {
    let observed: Vec<f64> = col.iter().flatten().map(|&v| f64::from(v)).collect();
    if observed.is_empty() {
        return None;
    }
    let mean = observed.iter().sum::<f64>() / observed.len() as f64;
    Some((col.iter().map(|v| v.map_or(mean, f64::from)).collect(), col.len() - observed.len(), mean))
}

pub fn load_genotype_csv(path: &Path, qc: QcOptions) -> CliResult<LoadedGenotypes> {
    let mut rdr = reader(path)?;
    let header: Vec<String> =
        rdr.headers().map_err(|e| malformed(path, 1, e.to_string()))?.iter().map(|s| s.trim().to_string()).collect();
    if header.is_empty() || header.iter().any(String::is_empty) {
        return Err(malformed(path, 1, "header must name every SNP column"));
    }
    let mut seen = BTreeSet::new();
    if let Some(dup) = header.iter().find(|h| !seen.insert(h.as_str())) {
        return Err(malformed(path, 1, format!("duplicate SNP id '{dup}'")));
    }
    let l = header.len();
    // None marks a missing cell
    let mut cols: Vec<Vec<Option<u8>>> = vec![Vec::new(); l];
    for (i, rec) in rdr.records().enumerate() {
        let fallback = i as u64 + 2;
        let rec = rec.map_err(|e| malformed(path, e.position().map_or(fallback, |p| p.line()), e.to_string()))?;
        let line = record_line(&rec, fallback);
        if rec.len() != l {
            return Err(malformed(path, line, format!("expected {l} fields, found {}", rec.len())));
        }
        for (j, cell) in rec.iter().enumerate() {
            let cell = cell.trim();
            let v = match cell {
                "NA" => None,
                "0" => Some(0),
                "1" => Some(1),
                "2" => Some(2),
                other => {
                    return Err(malformed(
                        path,
                        line,
                        format!("'{other}' in column '{}' is not 0, 1, 2 or NA", header[j]),
                    ))
                }
            };
            cols[j].push(v);
        }
    }
    let n = cols[0].len();
    if n < 2 {
        return Err(malformed(path, 1, format!("need at least 2 subjects, found {n}")));
    }

    let mut report = IngestReport { rows: n, columns_read: l, ..Default::default() };
    let mut data = Vec::with_capacity(n * l);
    let mut kept = Vec::new();
    for (j, col) in cols.into_iter().enumerate() {
        let snp = &header[j];
        let mut counts = [0usize; 3];
        for v in col.iter().flatten() {
            counts[*v as usize] += 1;
        }
        let observed = counts.iter().sum::<usize>();
        let missing = n - observed;
        let rate = missing as f64 / n as f64;
        let drop = if rate > MAX_MISSING_RATE || observed == 0 {
            Some(DropReason::MissingRate { missing, rate })
        } else if counts.iter().filter(|&&c| c > 0).count() == 1 {
            Some(DropReason::Constant)
        } else {
            let p = (counts[1] + 2 * counts[2]) as f64 / (2.0 * observed as f64);
            let maf = p.min(1.0 - p);
            let hwe = hwe_pvalue(counts);
            if qc.hwe_filter && hwe < HWE_MIN_P {
                Some(DropReason::Hwe { pvalue: hwe })
            } else if qc.maf_filter && maf < MIN_MAF {
                Some(DropReason::LowMaf { maf })
            } else {
                None
            }
        };
        if let Some(reason) = drop {
            log::warn!("dropping SNP {snp}: {reason:?}");
            report.dropped.push(DroppedColumn { snp: snp.clone(), reason });
            continue;
        }
        let (values, missing, mean) = impute_column(&col).expect("column has observed cells");
        if missing > 0 {
            log::info!("SNP {snp}: imputed {missing} missing genotype(s) with mean {mean}");
            report.imputed.push(Imputation { snp: snp.clone(), missing, mean });
        }
        data.extend(values);
        kept.push(snp.clone());
    }
    if kept.is_empty() {
        return Err(CliError::AllColumnsDropped);
    }
    report.columns_kept = kept.len();
    let matrix = GenotypeMatrix::from_dosages(n, kept.len(), data)?;
    Ok(LoadedGenotypes { matrix, snp_ids: kept, header, report })
}

/// Single-column trait file with a header row. Binary traits hold 0/1.
pub fn load_phenotype_csv(path: &Path, kind: TraitKind) -> CliResult<Phenotype> {
    let mut rdr = reader(path)?;
    let width = rdr.headers().map_err(|e| malformed(path, 1, e.to_string()))?.len();
    if width != 1 {
        return Err(malformed(path, 1, format!("expected one trait column, found {width}")));
    }
    let mut values = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let fallback = i as u64 + 2;
        let rec = rec.map_err(|e| malformed(path, e.position().map_or(fallback, |p| p.line()), e.to_string()))?;
        let line = record_line(&rec, fallback);
        if rec.len() != 1 {
            return Err(malformed(path, line, format!("expected 1 field, found {}", rec.len())));
        }
        let cell = rec[0].trim();
        let v: f64 = cell.parse().map_err(|_| malformed(path, line, format!("'{cell}' is not a number")))?;
        if !v.is_finite() {
            return Err(malformed(path, line, format!("'{cell}' is not finite")));
        }
        if kind == TraitKind::Binary && v != 0.0 && v != 1.0 {
            return Err(malformed(path, line, format!("binary trait value '{cell}' is not 0 or 1")));
        }
        values.push(v);
    }
    Ok(match kind {
        TraitKind::Quantitative => Phenotype::quantitative(values)?,
        TraitKind::Binary => Phenotype::binary(&values.iter().map(|&v| v as u8).collect::<Vec<_>>())?,
    })
}

/// Genes over the kept genotype columns, in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneMap {
    pub genes: Vec<Gene>,
}

impl GeneMap {
    /// Every kept SNP in one gene.
    pub fn single(name: &str, l: usize) -> Self {
        GeneMap { genes: vec![Gene { name: name.to_string(), columns: (0..l).collect() }] }
    }
}

/// Reads a two-column `gene,snp` table. Duplicate rows are ignored, SNPs
/// removed by quality control are skipped, and a gene left with no SNPs is
/// an error.
pub fn load_gene_map(path: &Path, genotypes: &LoadedGenotypes) -> CliResult<GeneMap> {
    let header: BTreeSet<&str> = genotypes.header.iter().map(String::as_str).collect();
    let kept: HashMap<&str, usize> = genotypes.snp_ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut rdr = reader(path)?;
    let width = rdr.headers().map_err(|e| malformed(path, 1, e.to_string()))?.len();
    if width != 2 {
        return Err(malformed(path, 1, format!("expected columns gene,snp; found {width} columns")));
    }
    let mut order: Vec<String> = Vec::new();
    let mut members: HashMap<String, BTreeSet<usize>> = HashMap::new();
    let mut owner: HashMap<String, String> = HashMap::new();
    for (i, rec) in rdr.records().enumerate() {
        let fallback = i as u64 + 2;
        let rec = rec.map_err(|e| malformed(path, e.position().map_or(fallback, |p| p.line()), e.to_string()))?;
        let line = record_line(&rec, fallback);
        if rec.len() != 2 {
            return Err(malformed(path, line, format!("expected 2 fields, found {}", rec.len())));
        }
        let (gene, snp) = (rec[0].trim().to_string(), rec[1].trim().to_string());
        if gene.is_empty() || snp.is_empty() {
            return Err(malformed(path, line, "gene and snp must be non-empty"));
        }
        if !header.contains(snp.as_str()) {
            return Err(CliError::UnknownSnpId { path: path_str(path), line, snp });
        }
        match owner.get(&snp) {
            Some(g) if *g != gene => {
                return Err(malformed(path, line, format!("SNP '{snp}' is in both '{g}' and '{gene}'")));
            }
            Some(_) => {}
            None => {
                owner.insert(snp.clone(), gene.clone());
            }
        }
        if !members.contains_key(&gene) {
            order.push(gene.clone());
        }
        let set = members.entry(gene).or_default();
        if let Some(&col) = kept.get(snp.as_str()) {
            set.insert(col);
        }
    }
    let genes = order
        .into_iter()
        .map(|name| {
            let columns: Vec<usize> = members.remove(&name).unwrap_or_default().into_iter().collect();
            if columns.is_empty() {
                Err(CliError::Core(CoreError::EmptyGene(name)))
            } else {
                Ok(Gene { name, columns })
            }
        })
        .collect::<CliResult<Vec<_>>>()?;
    if genes.is_empty() {
        return Err(malformed(path, 1, "gene map has no rows"));
    }
    Ok(GeneMap { genes })
}
