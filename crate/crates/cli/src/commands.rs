use std::path::{Path, PathBuf};

use serde_json::json;
use udlf::analytics::{
    attachment_agreement, compare_corpora, conversion_rates, differences_to_tsv, label_counts,
    longitudinal_trends, AnalyticsError, SMOOTHING_WINDOW,
};
use udlf::transducer::{convert_trees, derive, ConversionOutcome, ConversionSummary};
use udlf::treebank::{load_sessions, parse_conllu, DepTree, LoadOptions, Session};

use crate::config::RunConfig;
use crate::error::{io, CliError, Result};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| io(format!("cannot read {}: {e}", path.display())))
}

fn read_trees(path: &Path, cfg: &RunConfig) -> Result<Vec<DepTree>> {
    let trees = parse_conllu(&read(path)?).map_err(|e| io(format!("{}: {e}", path.display())))?;
    Ok(if cfg.drop_incomplete {
        trees.into_iter().filter(|t| !t.is_incomplete()).collect()
    } else {
        trees
    })
}

fn read_sessions(path: &Path, cfg: &RunConfig) -> Result<Vec<Session>> {
    let opts = LoadOptions {
        drop_incomplete: cfg.drop_incomplete,
    };
    load_sessions(&read(path)?, opts).map_err(|e| io(format!("{}: {e}", path.display())))
}

/// Files to write, each computed in full before anything touches disk.
struct Output {
    main: String,
    sidecars: Vec<(&'static str, String)>,
}

fn sidecar_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}"))
}

fn emit(cfg: &RunConfig, output: Output) -> Result<()> {
    match &cfg.out {
        None => {
            print!("{}", output.main);
            Ok(())
        }
        Some(out) => {
            let write = |p: &Path, s: &str| {
                std::fs::write(p, s).map_err(|e| io(format!("cannot write {}: {e}", p.display())))
            };
            write(out, &output.main)?;
            for (suffix, text) in &output.sidecars {
                write(&sidecar_path(out, suffix), text)?;
            }
            Ok(())
        }
    }
}

fn analytics_error(e: AnalyticsError) -> CliError {
    match e {
        AnalyticsError::Consistency(_) => CliError::Internal(e.to_string()),
        _ => io(e),
    }
}

fn run_conversion(cfg: &RunConfig, trees: &[DepTree]) -> Result<Vec<ConversionOutcome>> {
    let grammar = cfg.grammar()?;
    let opts = cfg.convert_options();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Internal(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| convert_trees(trees, &grammar, &opts)))
}

pub fn convert(cfg: &RunConfig) -> Result<()> {
    cfg.grammar()?;
    let trees = read_trees(&cfg.input(1)?[0], cfg)?;
    let outcomes = run_conversion(cfg, &trees)?;
    let mut main = String::new();
    for o in &outcomes {
        main.push_str(&o.to_record());
        main.push('\n');
    }
    let summary = ConversionSummary::of(&outcomes);
    emit(
        cfg,
        Output {
            main,
            sidecars: vec![("summary.json", summary_json(&summary) + "\n")],
        },
    )?;
    eprintln!("{summary}");
    Ok(())
}

fn summary_json(s: &ConversionSummary) -> String {
    json!({ "total": s.total, "converted": s.converted, "rate": s.rate() }).to_string()
}

pub fn stats(cfg: &RunConfig) -> Result<()> {
    cfg.grammar()?;
    let trees = read_trees(&cfg.input(1)?[0], cfg)?;
    let outcomes = run_conversion(cfg, &trees)?;
    let stats = label_counts(&trees);
    let rates = conversion_rates(&trees, &outcomes).map_err(analytics_error)?;
    let summary = ConversionSummary::of(&outcomes);
    let mut tsv =
        String::from("label\tcount\tper_token\tsentences\tpresence\tconverted\tconversion_rate\n");
    let mut rows = Vec::new();
    for r in &rates {
        let c = stats.labels[&r.label];
        tsv.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.label,
            c.count,
            stats.per_token(&r.label),
            c.sentences,
            stats.presence(&r.label),
            r.converted,
            r.rate()
        ));
        rows.push(json!({
            "label": r.label,
            "count": c.count,
            "per_token": stats.per_token(&r.label),
            "sentences": c.sentences,
            "presence": stats.presence(&r.label),
            "converted": r.converted,
            "conversion_rate": r.rate(),
        }));
    }
    let doc = json!({
        "tokens": stats.tokens,
        "sentences": stats.sentences,
        "mean_length": stats.mean_length(),
        "conversion": { "total": summary.total, "converted": summary.converted, "rate": summary.rate() },
        "labels": rows,
    });
    emit(
        cfg,
        Output {
            main: tsv,
            sidecars: vec![("json", pretty(&doc)?)],
        },
    )?;
    eprintln!("{summary}");
    Ok(())
}

fn pretty(v: &serde_json::Value) -> Result<String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Internal(e.to_string()))
}

pub fn agree(cfg: &RunConfig) -> Result<()> {
    let paths = cfg.input(2)?;
    let a = read_trees(&paths[0], cfg)?;
    let b = read_trees(&paths[1], cfg)?;
    let report = attachment_agreement(&a, &b, cfg.exclude_punct).map_err(analytics_error)?;
    emit(
        cfg,
        Output {
            main: report.to_tsv(),
            sidecars: vec![("json", report.to_json() + "\n")],
        },
    )
}

pub fn trends(cfg: &RunConfig) -> Result<()> {
    let sessions = read_sessions(&cfg.input(1)?[0], cfg)?;
    let report = longitudinal_trends(&sessions, cfg.smooth.then_some(SMOOTHING_WINDOW))
        .map_err(analytics_error)?;
    emit(
        cfg,
        Output {
            main: report.to_tsv(),
            sidecars: vec![
                ("json", report.to_json() + "\n"),
                ("plot.tsv", report.plot_tsv()),
            ],
        },
    )
}

pub fn compare(cfg: &RunConfig) -> Result<()> {
    let paths = cfg.input(2)?;
    let a = label_counts(&read_trees(&paths[0], cfg)?);
    let b = label_counts(&read_trees(&paths[1], cfg)?);
    let diffs = compare_corpora(&a, &b, cfg.threshold);
    let doc = json!({ "threshold": cfg.threshold, "differences": diffs });
    emit(
        cfg,
        Output {
            main: differences_to_tsv(&diffs),
            sidecars: vec![("json", pretty(&doc)?)],
        },
    )
}

pub fn derive_cmd(cfg: &RunConfig, sentence: Option<&str>) -> Result<()> {
    let grammar = cfg.grammar()?;
    let opts = cfg.convert_options();
    let trees = read_trees(&cfg.input(1)?[0], cfg)?;
    let selected: Vec<&DepTree> = trees
        .iter()
        .filter(|t| sentence.is_none_or(|id| t.sentence_id == id))
        .collect();
    if let (Some(id), true) = (sentence, selected.is_empty()) {
        return Err(crate::error::config(format!("no sentence with id {id:?}")));
    }
    let mut main = String::new();
    for t in selected {
        let line = match derive(t, &grammar, &opts) {
            Ok(d) => d.to_record(),
            Err(f) => json!({
                "sentence_id": t.sentence_id,
                "status": "failed",
                "reason": f.reason.code(),
                "tokens": f.tokens,
                "detail": f.detail,
            })
            .to_string(),
        };
        main.push_str(&line);
        main.push('\n');
    }
    emit(
        cfg,
        Output {
            main,
            sidecars: Vec::new(),
        },
    )
}
