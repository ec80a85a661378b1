//! CSV output. Floats carry 17 significant digits so they read back exactly.

use std::io::Write;

use super::{FdrRow, GeneRanking, ScenarioResult};
use crate::boundary::{BoundaryMode, BoundaryRow};
use crate::error::Result;

pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// Columns `curve,alpha,r,beta,heritability`.
pub fn write_boundary_csv<W: Write>(out: W, curves: &[(BoundaryMode, Vec<BoundaryRow>)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["curve", "alpha", "r", "beta", "heritability"])?;
    for (mode, rows) in curves {
        for row in rows {
            w.write_record([
                mode.name().to_string(),
                fmt_f64(row.alpha),
                fmt_f64(row.r),
                fmt_f64(row.beta),
                fmt_f64(row.heritability),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Columns `method,r_or_beta,ld_design,power,cutoff,n_sims,n_perms,seed`.
pub fn write_power_csv<W: Write>(out: W, results: &[ScenarioResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["method", "r_or_beta", "ld_design", "power", "cutoff", "n_sims", "n_perms", "seed"])?;
    for r in results {
        w.write_record([
            r.method.name().to_string(),
            fmt_f64(r.r_or_beta),
            r.ld_design.clone(),
            fmt_f64(r.power),
            fmt_f64(r.cutoff),
            r.n_sims.to_string(),
            r.n_perms.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `method,level,fdr,mean_rejections,mean_false_positives`, plus a
/// leading `r_or_beta` column.
pub fn write_fdr_csv<W: Write>(out: W, curves: &[(f64, Vec<FdrRow>)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r_or_beta", "method", "level", "fdr", "mean_rejections", "mean_false_positives"])?;
    for (effect, rows) in curves {
        for r in rows {
            w.write_record([
                fmt_f64(*effect),
                r.method.name().to_string(),
                fmt_f64(r.level),
                fmt_f64(r.fdr),
                fmt_f64(r.mean_rejections),
                fmt_f64(r.mean_false_positives),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Columns `gene,snps` then `<method>_rank,<method>_pvalue` per method.
pub fn write_ranking_csv<W: Write>(out: W, ranking: &GeneRanking) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["gene".to_string(), "snps".to_string()];
    for m in &ranking.methods {
        header.push(format!("{}_rank", m.name()));
        header.push(format!("{}_pvalue", m.name()));
    }
    w.write_record(&header)?;
    for g in &ranking.genes {
        let mut rec = vec![g.name.clone(), g.snps.to_string()];
        for (rank, p) in g.ranks.iter().zip(&g.pvalues) {
            rec.push(fmt_f64(*rank));
            rec.push(fmt_f64(*p));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
