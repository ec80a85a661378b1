use std::fs;
use std::path::{Path, PathBuf};

use rareweak_cli::ingest::{load_gene_map, load_genotype_csv, load_phenotype_csv, DropReason, QcOptions};
use rareweak_cli::CliError;
use rareweak_core::stats::TraitKind;

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn clean_file_is_preserved_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "g.csv", "a,b,c\n0,1,2\n2,1,0\n1,0,1\n");
    let g = load_genotype_csv(&p, QcOptions::default()).unwrap();
    assert_eq!(g.snp_ids, vec!["a", "b", "c"]);
    assert_eq!(g.matrix.col(0), &[0.0, 2.0, 1.0]);
    assert_eq!(g.matrix.col(2), &[2.0, 0.0, 1.0]);
    assert!(g.report.imputed.is_empty() && g.report.dropped.is_empty());
}

#[test]
fn missing_cells_are_imputed_and_reported() {
    let dir = tempfile::tempdir().unwrap();
    // column a: one NA in 10 rows (10%, kept); column b: 3 NA in 10 rows (dropped)
    let rows = ["0,NA", "NA,1", "2,NA", "0,0", "1,NA", "2,1", "1,2", "0,0", "1,1", "2,2"];
    let p = write(dir.path(), "g.csv", &format!("a,b\n{}\n", rows.join("\n")));
    let g = load_genotype_csv(&p, QcOptions::default()).unwrap();
    assert_eq!(g.snp_ids, vec!["a"]);
    assert_eq!(g.matrix.get(1, 0), 1.0);
    assert_eq!(g.report.imputed.len(), 1);
    assert_eq!(g.report.imputed[0].missing, 1);
    assert_eq!(g.report.dropped.len(), 1);
    assert_eq!(g.report.dropped[0].snp, "b");
    assert!(matches!(g.report.dropped[0].reason, DropReason::MissingRate { missing: 3, .. }));
    assert_eq!((g.report.columns_read, g.report.columns_kept, g.report.rows), (2, 1, 10));
}

#[test]
fn constant_columns_are_dropped() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "g.csv", "a,b\n1,0\n1,2\n1,1\n");
    let g = load_genotype_csv(&p, QcOptions::default()).unwrap();
    assert_eq!(g.snp_ids, vec!["b"]);
    assert!(matches!(g.report.dropped[0].reason, DropReason::Constant));
    let p = write(dir.path(), "h.csv", "a\n1\n1\n");
    assert!(matches!(load_genotype_csv(&p, QcOptions::default()), Err(CliError::AllColumnsDropped)));
}

#[test]
fn quality_filters_are_optional() {
    let dir = tempfile::tempdir().unwrap();
    // column a has no heterozygotes (HWE violation), column b has one minor allele in 100 subjects' 200
    let mut text = String::from("a,b,c\n");
    for i in 0..100 {
        let a = if i < 50 { 0 } else { 2 };
        let b = if i == 0 { 1 } else { 0 };
        let c = [0, 1, 1, 2][i % 4];
        text.push_str(&format!("{a},{b},{c}\n"));
    }
    let p = write(dir.path(), "g.csv", &text);
    let off = load_genotype_csv(&p, QcOptions::default()).unwrap();
    assert_eq!(off.snp_ids.len(), 3);
    let on = load_genotype_csv(&p, QcOptions { hwe_filter: true, maf_filter: true }).unwrap();
    assert_eq!(on.snp_ids, vec!["c"]);
    assert!(matches!(on.report.dropped[0].reason, DropReason::Hwe { .. }));
    assert!(matches!(on.report.dropped[1].reason, DropReason::LowMaf { .. }));
}

#[test]
fn malformed_files_report_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "g.csv", "a,b\n0,1\n1,3\n");
    match load_genotype_csv(&p, QcOptions::default()) {
        Err(CliError::MalformedCsv { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
    let p = write(dir.path(), "g2.csv", "a,b\n0,1\n1\n");
    match load_genotype_csv(&p, QcOptions::default()) {
        Err(CliError::MalformedCsv { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
    let err = load_genotype_csv(&p, QcOptions::default()).unwrap_err();
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn phenotypes() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "y.csv", "y\n0.5\n-1.25\n");
    assert_eq!(load_phenotype_csv(&p, TraitKind::Quantitative).unwrap().values(), &[0.5, -1.25]);
    let p = write(dir.path(), "b.csv", "case\n1\n0\n2\n");
    assert!(matches!(load_phenotype_csv(&p, TraitKind::Binary), Err(CliError::MalformedCsv { line: 4, .. })));
}

#[test]
fn gene_maps() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.csv", "s1,s2,s3,s4\n0,1,2,1\n1,0,1,2\n2,1,0,0\n");
    let g = load_genotype_csv(&g, QcOptions::default()).unwrap();

    let p = write(dir.path(), "one.csv", "gene,snp\nG,s1\nG,s2\nG,s3\nG,s4\n");
    let map = load_gene_map(&p, &g).unwrap();
    assert_eq!(map.genes.len(), 1);
    assert_eq!(map.genes[0].columns, vec![0, 1, 2, 3]);

    let p = write(dir.path(), "dup.csv", "gene,snp\nB,s3\nA,s1\nA,s1\nB,s4\nA,s2\n");
    let map = load_gene_map(&p, &g).unwrap();
    assert_eq!(map.genes.iter().map(|g| g.name.as_str()).collect::<Vec<_>>(), vec!["B", "A"]);
    assert_eq!(map.genes[1].columns, vec![0, 1]);

    let p = write(dir.path(), "bad.csv", "gene,snp\nA,s1\nA,s9\n");
    match load_gene_map(&p, &g) {
        Err(CliError::UnknownSnpId { snp, line, .. }) => assert_eq!((snp.as_str(), line), ("s9", 3)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn genes_emptied_by_quality_control_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.csv", "s1,s2\n0,1\n0,2\n0,0\n");
    let g = load_genotype_csv(&g, QcOptions::default()).unwrap();
    let p = write(dir.path(), "m.csv", "gene,snp\nA,s1\nB,s2\n");
    let err = load_gene_map(&p, &g).unwrap_err();
    assert!(matches!(err, CliError::Core(rareweak_core::Error::EmptyGene(ref name)) if name == "A"), "{err:?}");
    assert_eq!(err.exit_code(), 3);
}
