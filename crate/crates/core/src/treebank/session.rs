use super::tree::{DepTree, Session};
use super::TreebankError;

/// Options for turning a flat list of trees into sessions.
#[derive(Clone, Copy, Debug, Default)]
pub struct LoadOptions {
    /// Discard utterances ending in `+...`.
    pub drop_incomplete: bool,
}

/// Groups trees into sessions using `# session_id` and `# child_age_months`
/// comments. A comment applies to its own sentence and to every following
/// sentence until the next one. Sessions come back ordered by age, ties kept
/// in order of first appearance.
///
/// Without any session metadata the whole corpus becomes one anonymous session
/// at age 0.
pub fn group_sessions(
    trees: Vec<DepTree>,
    opts: LoadOptions,
) -> Result<Vec<Session>, TreebankError> {
    let mut sessions: Vec<Session> = Vec::new();
    let mut current_id: Option<String> = None;
    let mut current_age: Option<f64> = None;
    let mut saw_metadata = false;
    let mut dropped = 0usize;
    for tree in trees {
        if let Some(id) = tree.comment_value("session_id") {
            current_id = Some(id.to_string());
            saw_metadata = true;
        }
        if let Some(age) = tree.comment_value("child_age_months") {
            let parsed: f64 = age.parse().map_err(|_| TreebankError::Metadata {
                sentence_id: tree.sentence_id.clone(),
                message: format!("child_age_months {age:?} is not a number"),
            })?;
            if !(parsed.is_finite() && parsed > 0.0) {
                return Err(TreebankError::Metadata {
                    sentence_id: tree.sentence_id.clone(),
                    message: format!("child_age_months must be positive, got {age}"),
                });
            }
            current_age = Some(parsed);
            saw_metadata = true;
        }
        if opts.drop_incomplete && tree.is_incomplete() {
            dropped += 1;
            continue;
        }
        let id = current_id.clone().unwrap_or_default();
        let age = current_age.unwrap_or(0.0);
        match sessions.last_mut() {
            Some(s) if s.session_id == id && s.child_age_months == age => s.trees.push(tree),
            _ => sessions.push(Session {
                session_id: id,
                child_age_months: age,
                trees: vec![tree],
            }),
        }
    }
    if !saw_metadata {
        log::warn!("no session metadata found; treating the corpus as one session at age 0");
    }
    if dropped > 0 {
        log::info!("dropped {dropped} incomplete utterances");
    }
    sessions.sort_by(|a, b| a.child_age_months.total_cmp(&b.child_age_months));
    Ok(sessions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treebank::parse_conllu;

    fn block(id: &str, comments: &str, text: &str) -> String {
        format!(
            "# sent_id = {id}\n{comments}# text = {text}\n1\tgo\tgo\tVERB\t_\t_\t0\troot\t_\t_\n\n"
        )
    }

    #[test]
    fn metadata_carries_forward_and_sorts_by_age() {
        let mut s = String::new();
        s += &block("a", "# session_id = late\n# child_age_months = 30\n", "go");
        s += &block("b", "", "go");
        s += &block(
            "c",
            "# session_id = early\n# child_age_months = 18.5\n",
            "go",
        );
        let sessions = group_sessions(parse_conllu(&s).unwrap(), LoadOptions::default()).unwrap();
        assert_eq!(sessions.len(), 2);
        assert_eq!(sessions[0].session_id, "early");
        assert_eq!(sessions[0].child_age_months, 18.5);
        assert_eq!(sessions[1].trees.len(), 2);
    }

    #[test]
    fn drop_incomplete_flag() {
        let mut s = String::new();
        s += &block("a", "", "go");
        s += &block("b", "", "go +...");
        let trees = parse_conllu(&s).unwrap();
        let kept = group_sessions(trees.clone(), LoadOptions::default()).unwrap();
        assert_eq!(kept[0].trees.len(), 2);
        let dropped = group_sessions(
            trees,
            LoadOptions {
                drop_incomplete: true,
            },
        )
        .unwrap();
        assert_eq!(dropped[0].trees.len(), 1);
        assert_eq!(dropped[0].child_age_months, 0.0);
    }

    #[test]
    fn rejects_bad_age() {
        let s = block("a", "# child_age_months = soon\n", "go");
        assert!(group_sessions(parse_conllu(&s).unwrap(), LoadOptions::default()).is_err());
    }
}
