use std::collections::HashMap;
use std::path::{Path, PathBuf};

use udlf::analytics::DEFAULT_THRESHOLD;
use udlf::lambda::DEFAULT_MAX_STEPS;
use udlf::transducer::{default_rule_texts, ConvertOptions, Grammar};

use crate::args::Flags;
use crate::error::{config, Result};

/// Settings after merging flags, the config file and defaults, in that
/// order of precedence.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub lang: String,
    pub rules_rewrite: Option<PathBuf>,
    pub rules_lf: Option<PathBuf>,
    pub priorities: Option<PathBuf>,
    pub inputs: Vec<PathBuf>,
    pub out: Option<PathBuf>,
    pub threshold: f64,
    pub smooth: bool,
    pub jobs: usize,
    pub drop_incomplete: bool,
    pub exclude_punct: bool,
    pub max_steps: usize,
}

const KEYS: &[&str] = &[
    "lang",
    "rules-rewrite",
    "rules-lf",
    "priorities",
    "in",
    "out",
    "threshold",
    "smooth",
    "jobs",
    "drop-incomplete",
    "exclude-punct",
    "max-steps",
];

/// Reads `key = value` lines. `#` starts a comment; keys may use `_` or `-`.
pub fn parse_config_file(text: &str) -> Result<HashMap<String, String>> {
    let mut out = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| config(format!("config line {}: expected key = value", i + 1)))?;
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(config(format!(
                "config line {}: unknown key {:?}",
                i + 1,
                k.trim()
            )));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| config(format!("bad value {v:?} for {key}")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(config(format!(
            "bad value {v:?} for {key}; expected true or false"
        ))),
    }
}

impl RunConfig {
    pub fn resolve(flags: &Flags, file: Option<&Path>) -> Result<RunConfig> {
        let (values, base) = match file {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| config(format!("cannot read config {}: {e}", p.display())))?;
                (parse_config_file(&text)?, p.parent().map(Path::to_path_buf))
            }
            None => (HashMap::new(), None),
        };
        // Paths in a config file are relative to the file.
        let path = |k: &str| {
            values.get(k).map(|v| match &base {
                Some(b) => b.join(v),
                None => PathBuf::from(v),
            })
        };
        let cfg = RunConfig {
            lang: flags
                .lang
                .clone()
                .or_else(|| values.get("lang").cloned())
                .unwrap_or_else(|| "en".to_string()),
            rules_rewrite: flags
                .rules_rewrite
                .clone()
                .or_else(|| path("rules-rewrite")),
            rules_lf: flags.rules_lf.clone().or_else(|| path("rules-lf")),
            priorities: flags.priorities.clone().or_else(|| path("priorities")),
            // `in` may list several files separated by commas.
            inputs: if flags.input.is_empty() {
                values
                    .get("in")
                    .map(|v| {
                        v.split(',')
                            .map(|p| match &base {
                                Some(b) => b.join(p.trim()),
                                None => PathBuf::from(p.trim()),
                            })
                            .collect()
                    })
                    .unwrap_or_default()
            } else {
                flags.input.clone()
            },
            out: flags.out.clone().or_else(|| path("out")),
            threshold: match (flags.threshold, values.get("threshold")) {
                (Some(t), _) => t,
                (None, Some(v)) => parse_value("threshold", v)?,
                (None, None) => DEFAULT_THRESHOLD,
            },
            smooth: flags.smooth
                || values
                    .get("smooth")
                    .map(|v| parse_bool("smooth", v))
                    .transpose()?
                    .unwrap_or(false),
            jobs: match (flags.jobs, values.get("jobs")) {
                (Some(j), _) => j,
                (None, Some(v)) => parse_value("jobs", v)?,
                (None, None) => 0,
            },
            drop_incomplete: flags.drop_incomplete
                || values
                    .get("drop-incomplete")
                    .map(|v| parse_bool("drop-incomplete", v))
                    .transpose()?
                    .unwrap_or(false),
            exclude_punct: flags.exclude_punct
                || values
                    .get("exclude-punct")
                    .map(|v| parse_bool("exclude-punct", v))
                    .transpose()?
                    .unwrap_or(false),
            max_steps: match (flags.max_steps, values.get("max-steps")) {
                (Some(m), _) => m,
                (None, Some(v)) => parse_value("max-steps", v)?,
                (None, None) => DEFAULT_MAX_STEPS,
            },
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        if !matches!(self.lang.as_str(), "en" | "he") {
            return Err(config(format!(
                "unknown language {:?}; expected en or he",
                self.lang
            )));
        }
        if !(self.threshold.is_finite() && self.threshold >= 0.0) {
            return Err(config("threshold must be a non-negative number"));
        }
        if self.max_steps == 0 {
            return Err(config("max-steps must be positive"));
        }
        Ok(())
    }

    pub fn convert_options(&self) -> ConvertOptions {
        ConvertOptions {
            max_steps: self.max_steps,
        }
    }

    /// Loads and parses every rule file. Missing or malformed files are
    /// configuration errors.
    pub fn grammar(&self) -> Result<Grammar> {
        let (rw, lf, pr) = default_rule_texts();
        let read = |p: &Option<PathBuf>, fallback: &str| -> Result<String> {
            match p {
                Some(p) => std::fs::read_to_string(p)
                    .map_err(|e| config(format!("cannot read rule file {}: {e}", p.display()))),
                None => Ok(fallback.to_string()),
            }
        };
        let rewrite = read(&self.rules_rewrite, rw)?;
        let lf_rules = read(&self.rules_lf, lf)?;
        let priorities = read(&self.priorities, pr)?;
        Grammar::from_texts(&self.lang, &rewrite, &lf_rules, &priorities).map_err(config)
    }

    pub fn input(&self, n: usize) -> Result<&[PathBuf]> {
        if self.inputs.len() != n {
            return Err(config(format!(
                "expected {n} --in file(s), got {}",
                self.inputs.len()
            )));
        }
        Ok(&self.inputs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_override_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("run.conf");
        std::fs::write(
            &file,
            "# run\nthreshold = 0.01\njobs=4\nmax_steps = 50\nrules-lf = my.lf\n",
        )
        .unwrap();
        let flags = Flags {
            jobs: Some(2),
            ..Flags::default()
        };
        let cfg = RunConfig::resolve(&flags, Some(&file)).unwrap();
        assert_eq!(cfg.jobs, 2);
        assert_eq!(cfg.threshold, 0.01);
        assert_eq!(cfg.max_steps, 50);
        assert_eq!(cfg.lang, "en");
        assert_eq!(cfg.rules_lf, Some(dir.path().join("my.lf")));
    }

    #[test]
    fn rejects_unknown_keys_and_values() {
        assert!(parse_config_file("colour = red\n").is_err());
        assert!(parse_config_file("jobs\n").is_err());
        let flags = Flags {
            lang: Some("fr".into()),
            ..Flags::default()
        };
        assert!(RunConfig::resolve(&flags, None).is_err());
    }
}
