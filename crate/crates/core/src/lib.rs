pub mod analytics;
pub mod lambda;
pub mod pattern;
pub mod transducer;
pub mod treebank;
