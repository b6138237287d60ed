use alloc::string::String;

/// Errors raised by the algorithms in this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("semiring mismatch: {0} vs {1}")]
    SemiringMismatch(&'static str, &'static str),
    #[error("symbol table mismatch in {0}")]
    SymbolTableMismatch(&'static str),
    #[error("{0} requires ordered semiring")]
    UnorderedSemiring(&'static str),
    #[error("negative arc weight {0} not allowed in {1}")]
    NegativeWeight(f64, &'static str),
    #[error("{0} requires acyclic automaton")]
    Cyclic(&'static str),
    #[error("invalid state id {0}")]
    InvalidState(usize),
    #[error("weight {0} is not in the {1} semiring domain")]
    InvalidWeight(f64, &'static str),
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("empty text")]
    EmptyText,
    #[error("out-of-vocabulary symbol `{0}`")]
    OutOfVocabulary(String),
    #[error("empty dataset")]
    EmptyDataset,
    #[error("too few rows: {rows} rows for {folds} folds")]
    TooFewRows { rows: usize, folds: usize },
    #[error("category not in training inventory for feature `{0}`")]
    UnseenCategory(String),
    #[error("value of wrong kind for feature `{0}`")]
    FeatureKind(String),
    #[error("categorical feature `{0}` has too many categories for exhaustive multiclass search")]
    TooManyCategories(String),
    #[error("operation requires a classification tree")]
    NotClassification,
    #[error("feature `{0}` has no context position")]
    NoContextPosition(String),
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("ruleset does not define {{All}}")]
    MissingAll,
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("no path survives cascade")]
    NoPath,
    #[error("character `{0}` is not covered by the dictionary")]
    Uncoverable(String),
    #[error("index {index} out of range for {len} tokens")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("zero probability for entry `{0}`")]
    ZeroProbability(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
