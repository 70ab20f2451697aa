//! Reading, checking and writing CoNLL-U dependency treebanks.

mod conllu;
pub mod labels;
mod session;
mod tree;
mod validate;

pub use conllu::{parse_conllu, serialize_conllu};
pub use session::{group_sessions, LoadOptions};
pub use tree::{DepTree, Session, Token};
pub use validate::{validate_tree, ValidationReport, Violation};

#[derive(Debug, thiserror::Error)]
pub enum TreebankError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("sentence {sentence_id} (line {line}): {message}")]
    Structural {
        sentence_id: String,
        line: usize,
        message: String,
    },
    #[error("sentence {sentence_id}: {message}")]
    Metadata {
        sentence_id: String,
        message: String,
    },
}

/// Parses a treebank and groups it into age-ordered sessions.
pub fn load_sessions(text: &str, opts: LoadOptions) -> Result<Vec<Session>, TreebankError> {
    group_sessions(parse_conllu(text)?, opts)
}
