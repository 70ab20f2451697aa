use rayon::prelude::*;

use super::labels::normalize_deprel;
use super::tree::{DepTree, Token};
use super::TreebankError;

/// One sentence block: its first line number (1-based) and its lines.
struct Block<'a> {
    first_line: usize,
    lines: Vec<(usize, &'a str)>,
}

fn split_blocks(text: &str) -> Vec<Block<'_>> {
    let mut blocks = Vec::new();
    let mut cur: Vec<(usize, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            if !cur.is_empty() {
                blocks.push(Block {
                    first_line: cur[0].0,
                    lines: std::mem::take(&mut cur),
                });
            }
        } else {
            cur.push((i + 1, line));
        }
    }
    if !cur.is_empty() {
        blocks.push(Block {
            first_line: cur[0].0,
            lines: cur,
        });
    }
    blocks
}

/// Parses CoNLL-U text into trees, in input order.
///
/// Multiword-token ranges (`3-4`) and empty nodes (`3.1`) are skipped with a
/// warning. Deprel subtypes written with underscores are normalized to colons.
/// A sentence without `# sent_id` gets `s<N>` from its 1-based position.
pub fn parse_conllu(text: &str) -> Result<Vec<DepTree>, TreebankError> {
    let blocks = split_blocks(text);
    blocks
        .par_iter()
        .enumerate()
        .map(|(i, b)| parse_block(b, i + 1))
        .collect()
}

fn malformed(line: usize, message: impl Into<String>) -> TreebankError {
    TreebankError::Malformed {
        line,
        message: message.into(),
    }
}

fn parse_block(block: &Block<'_>, ordinal: usize) -> Result<DepTree, TreebankError> {
    let mut sentence_id = None;
    let mut text = None;
    let mut comments = Vec::new();
    let mut tokens = Vec::new();
    for &(lineno, line) in &block.lines {
        if let Some(c) = line.strip_prefix('#') {
            let body = c.strip_prefix(' ').unwrap_or(c);
            match body.split_once('=') {
                Some((k, v)) if k.trim() == "sent_id" => sentence_id = Some(v.trim().to_string()),
                Some((k, v)) if k.trim() == "text" => text = Some(v.trim().to_string()),
                _ => comments.push(body.to_string()),
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(malformed(
                lineno,
                format!("expected 10 tab-separated columns, found {}", cols.len()),
            ));
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            log::warn!(
                "line {lineno}: skipping multiword or empty node {}",
                cols[0]
            );
            continue;
        }
        let id: usize = cols[0]
            .parse()
            .map_err(|_| malformed(lineno, format!("bad token id {:?}", cols[0])))?;
        let head: usize = cols[6]
            .parse()
            .map_err(|_| malformed(lineno, format!("bad head {:?}", cols[6])))?;
        tokens.push(Token {
            id,
            form: cols[1].to_string(),
            lemma: cols[2].to_string(),
            upos: cols[3].to_string(),
            morph: cols[4].to_string(),
            head,
            deprel: normalize_deprel(cols[7]),
            extra: [
                cols[5].to_string(),
                cols[8].to_string(),
                cols[9].to_string(),
            ],
        });
    }
    let tree = DepTree {
        sentence_id: sentence_id.unwrap_or_else(|| format!("s{ordinal}")),
        text,
        tokens,
        comments,
    };
    check_structure(&tree).map_err(|message| TreebankError::Structural {
        sentence_id: tree.sentence_id.clone(),
        line: block.first_line,
        message,
    })?;
    Ok(tree)
}

/// Ids must run 1..n, heads must be in range and every token must reach the
/// root. Multiple roots are tolerated here and reported by validation.
pub(crate) fn check_structure(tree: &DepTree) -> Result<(), String> {
    if tree.tokens.is_empty() {
        return Err("sentence has no tokens".into());
    }
    let n = tree.tokens.len();
    for (i, t) in tree.tokens.iter().enumerate() {
        if t.id != i + 1 {
            return Err(format!(
                "token ids not contiguous at position {}: {}",
                i + 1,
                t.id
            ));
        }
        if t.head > n {
            return Err(format!("token {} has head {} out of range", t.id, t.head));
        }
        if t.head == t.id {
            return Err(format!("token {} is its own head", t.id));
        }
    }
    for t in &tree.tokens {
        let mut cur = t.head;
        let mut steps = 0;
        while cur != 0 {
            steps += 1;
            if steps > n {
                return Err(format!("cycle through token {}", t.id));
            }
            cur = tree.tokens[cur - 1].head;
        }
    }
    Ok(())
}

/// Writes trees back to CoNLL-U. `parse_conllu(serialize_conllu(ts))` returns
/// `ts`, and a second serialization is byte-identical to the first.
pub fn serialize_conllu(trees: &[DepTree]) -> String {
    let mut out = String::new();
    for t in trees {
        write_tree(t, &mut out);
    }
    out
}

fn write_tree(tree: &DepTree, out: &mut String) {
    out.push_str("# sent_id = ");
    out.push_str(&tree.sentence_id);
    out.push('\n');
    if let Some(text) = &tree.text {
        out.push_str("# text = ");
        out.push_str(text);
        out.push('\n');
    }
    for c in &tree.comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    for t in &tree.tokens {
        let cols = [
            t.id.to_string(),
            t.form.clone(),
            t.lemma.clone(),
            t.upos.clone(),
            t.morph.clone(),
            t.extra[0].clone(),
            t.head.to_string(),
            t.deprel.clone(),
            t.extra[1].clone(),
            t.extra[2].clone(),
        ];
        out.push_str(&cols.join("\t"));
        out.push('\n');
    }
    out.push('\n');
}

#[cfg(test)]
mod tests {
    use super::*;

    const PICK_UP: &str = "# sent_id = 1\n# text = pick up the blocks\n\
1\tpick\tpick\tVERB\t_\t_\t0\troot\t_\t_\n\
2\tup\tup\tADP\t_\t_\t1\tcompound:prt\t_\t_\n\
3\tthe\tthe\tDET\t_\t_\t4\tdet\t_\t_\n\
4\tblocks\tblock\tNOUN\t_\t_\t1\tdobj\t_\t_\n\n";

    #[test]
    fn parses_and_round_trips() {
        let trees = parse_conllu(PICK_UP).unwrap();
        assert_eq!(trees.len(), 1);
        let t = &trees[0];
        assert_eq!(t.sentence_id, "1");
        assert_eq!(t.text.as_deref(), Some("pick up the blocks"));
        assert_eq!(t.root().unwrap().form, "pick");
        assert_eq!(t.children(1).map(|c| c.id).collect::<Vec<_>>(), vec![2, 4]);
        let s = serialize_conllu(&trees);
        assert_eq!(s, PICK_UP);
    }

    #[test]
    fn detects_cycles() {
        let text = "1\ta\ta\tX\t_\t_\t2\tdep\t_\t_\n2\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n";
        match parse_conllu(text) {
            Err(TreebankError::Structural { message, .. }) => assert!(message.contains("cycle")),
            other => panic!("expected structural error, got {other:?}"),
        }
    }

    #[test]
    fn reports_line_of_bad_row() {
        let text = "# sent_id = a\n1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n\n2\tb\tb\n";
        match parse_conllu(text) {
            Err(TreebankError::Malformed { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn head_out_of_range_is_structural() {
        let text = "1\ta\ta\tX\t_\t_\t5\tdep\t_\t_\n";
        assert!(matches!(
            parse_conllu(text),
            Err(TreebankError::Structural { .. })
        ));
    }

    #[test]
    fn skips_multiword_and_empty_nodes() {
        let text = "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n\
1\tdo\tdo\tAUX\t_\t_\t3\taux\t_\t_\n\
2\tn't\tnot\tPART\t_\t_\t3\tneg\t_\t_\n\
2.1\tx\tx\tX\t_\t_\t_\t_\t_\t_\n\
3\tgo\tgo\tVERB\t_\t_\t0\troot\t_\t_\n";
        let t = &parse_conllu(text).unwrap()[0];
        assert_eq!(t.len(), 3);
        assert_eq!(t.sentence_id, "s1");
    }

    #[test]
    fn normalizes_subtypes_on_read() {
        let text = "1\tdog\tdog\tNOUN\t_\t_\t0\troot\t_\t_\n\
2\tbarked\tbark\tVERB\t_\t_\t1\tacl:relcl_subj\t_\t_\n";
        let t = &parse_conllu(text).unwrap()[0];
        assert_eq!(t.tokens[1].deprel, "acl:relcl:subj");
    }

    #[test]
    fn preserves_other_comments_and_columns() {
        let text = "# session_id = 3\n# sent_id = x\n\
1\tgo\tgo\tVERB\tverb|go\tMood=Imp\t0\troot\t0:root\tSpaceAfter=No\n\n";
        let t = parse_conllu(text).unwrap();
        assert_eq!(t[0].comment_value("session_id"), Some("3"));
        assert_eq!(t[0].tokens[0].morph, "verb|go");
        let again = parse_conllu(&serialize_conllu(&t)).unwrap();
        assert_eq!(again, t);
    }
}
