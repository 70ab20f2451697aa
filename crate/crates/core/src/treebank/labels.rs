//! Tag and label inventories.
//!
//! Dependency labels follow UD v1 with the subtypes used for child-directed
//! speech: `acl:relcl:subj`, `acl:relcl:obj`, `parataxis:repeat`,
//! `compound:svc`, `<label>:promoted` and the free-relative `<label>:comp`.
//! Validation looks only at the base label (the part before the first colon),
//! so subtypes introduced by tree transformation never invalidate a tree.

pub const UPOS: &[&str] = &[
    "ADJ", "ADP", "ADV", "AUX", "CONJ", "CCONJ", "DET", "INTJ", "NOUN", "NUM", "PART", "PRON",
    "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
];

pub const BASE_DEPRELS: &[&str] = &[
    "acl",
    "advcl",
    "advmod",
    "amod",
    "appos",
    "aux",
    "auxpass",
    "case",
    "cc",
    "ccomp",
    "compound",
    "conj",
    "cop",
    "csubj",
    "csubjpass",
    "dep",
    "det",
    "discourse",
    "dislocated",
    "dobj",
    "expl",
    "foreign",
    "goeswith",
    "iobj",
    "list",
    "mark",
    "mwe",
    "name",
    "neg",
    "nmod",
    "nsubj",
    "nsubjpass",
    "nummod",
    "parataxis",
    "punct",
    "remnant",
    "reparandum",
    "root",
    "vocative",
    "xcomp",
];

/// Subtyped labels introduced for this annotation scheme.
pub const SUBTYPED_DEPRELS: &[&str] = &[
    "acl:relcl",
    "acl:relcl:subj",
    "acl:relcl:obj",
    "parataxis:repeat",
    "compound:svc",
    "compound:prt",
    "nmod:poss",
    "nmod:tmod",
    "nmod:npmod",
];

/// Base of a possibly subcategorized POS tag: `VERB-DO` -> `VERB`.
pub fn base_upos(upos: &str) -> &str {
    upos.split('-').next().unwrap_or(upos)
}

/// Base of a possibly subtyped dependency label: `acl:relcl:subj` -> `acl`.
pub fn base_deprel(deprel: &str) -> &str {
    deprel.split(':').next().unwrap_or(deprel)
}

pub fn is_known_upos(upos: &str) -> bool {
    UPOS.contains(&base_upos(upos))
}

pub fn is_known_deprel(deprel: &str) -> bool {
    BASE_DEPRELS.contains(&base_deprel(deprel))
}

/// Canonical colon-separated spelling: `acl:relcl_subj` -> `acl:relcl:subj`.
pub fn normalize_deprel(deprel: &str) -> String {
    if deprel == "_" {
        return deprel.to_string();
    }
    deprel.replace('_', ":")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_underscore_subtypes() {
        assert_eq!(normalize_deprel("acl:relcl_subj"), "acl:relcl:subj");
        assert_eq!(normalize_deprel("advcl:promoted"), "advcl:promoted");
        assert_eq!(normalize_deprel("dobj_comp"), "dobj:comp");
    }

    #[test]
    fn subtypes_validate_on_base() {
        for l in SUBTYPED_DEPRELS {
            assert!(is_known_deprel(l), "{l}");
        }
        assert!(is_known_deprel("advcl:promoted"));
        assert!(is_known_deprel("dobj:comp"));
        assert!(!is_known_deprel("xyzzy"));
        assert!(is_known_upos("VERB-DO"));
        assert!(!is_known_upos("VRB"));
    }
}
