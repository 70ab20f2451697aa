use serde::{Deserialize, Serialize};

/// One word of a dependency tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// 1-based position.
    pub id: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    /// Opaque morphological annotation (e.g. `verb|find-past`). Never
    /// decomposed.
    pub morph: String,
    /// Governor id, 0 for the root.
    pub head: usize,
    pub deprel: String,
    /// FEATS, DEPS and MISC columns, carried verbatim.
    pub extra: [String; 3],
}

impl Token {
    pub fn new(id: usize, form: &str, lemma: &str, upos: &str, head: usize, deprel: &str) -> Self {
        Token {
            id,
            form: form.to_string(),
            lemma: lemma.to_string(),
            upos: upos.to_string(),
            morph: "_".to_string(),
            head,
            deprel: deprel.to_string(),
            extra: ["_".to_string(), "_".to_string(), "_".to_string()],
        }
    }
}

/// A rooted, labeled dependency tree over one utterance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepTree {
    pub sentence_id: String,
    pub text: Option<String>,
    pub tokens: Vec<Token>,
    /// Comment lines other than `sent_id` and `text`, without the leading `#`.
    pub comments: Vec<String>,
}

impl DepTree {
    pub fn new(sentence_id: impl Into<String>, tokens: Vec<Token>) -> Self {
        DepTree {
            sentence_id: sentence_id.into(),
            text: None,
            tokens,
            comments: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token by 1-based id.
    pub fn token(&self, id: usize) -> Option<&Token> {
        id.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    pub fn root(&self) -> Option<&Token> {
        self.tokens.iter().find(|t| t.head == 0)
    }

    /// Dependents of `id` in surface order. Id 0 yields the root(s).
    pub fn children(&self, id: usize) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(move |t| t.head == id)
    }

    pub fn parent(&self, id: usize) -> Option<&Token> {
        self.token(id).and_then(|t| self.token(t.head))
    }

    /// Looks up a `key = value` comment.
    pub fn comment_value(&self, key: &str) -> Option<&str> {
        self.comments.iter().find_map(|c| {
            let (k, v) = c.split_once('=')?;
            (k.trim() == key).then(|| v.trim())
        })
    }

    /// Utterances transcribed as interrupted end in `+...`.
    pub fn is_incomplete(&self) -> bool {
        self.text
            .as_deref()
            .is_some_and(|t| t.trim_end().ends_with("+..."))
            || self.tokens.last().is_some_and(|t| t.form == "+...")
    }

    /// Token ids in breadth-first order from the root, siblings in surface
    /// order.
    pub fn breadth_first(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.tokens.len());
        let mut frontier: std::collections::VecDeque<usize> =
            self.children(0).map(|t| t.id).collect();
        while let Some(id) = frontier.pop_front() {
            order.push(id);
            frontier.extend(self.children(id).map(|t| t.id));
        }
        order
    }
}

/// A recording session: the trees transcribed at one child age.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub session_id: String,
    pub child_age_months: f64,
    pub trees: Vec<DepTree>,
}
