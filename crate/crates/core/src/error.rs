use std::fmt;

/// Location of a diagnostic inside a text source. Both fields are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    Lexical(char),
    #[error("expected {expected}, found {found}")]
    Syntax { expected: String, found: String },
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("duplicate variable `{0}` in header")]
    DuplicateVariable(String),
    #[error("duplicate rule for `{0}`")]
    DuplicateRule(String),
    #[error("missing rule for `{0}`")]
    MissingRule(String),
    #[error("malformed bitstring `{0}`")]
    MalformedBitstring(String),
    #[error("bitstring `{found}` has length {}, expected {expected}", found.len())]
    WrongLength { found: String, expected: usize },
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("expected {expected} lines, found {found}")]
    WrongLineCount { expected: usize, found: usize },
    #[error("input `{found}` out of order, expected `{expected}`")]
    OutOfOrder { found: String, expected: String },
    #[error("{0}")]
    Malformed(String),
}

/// A diagnostic produced while reading one of the text formats.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{position}: {kind}")]
pub struct ParseError {
    pub position: Position,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        ParseError {
            position: Position { line, column },
            kind,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {n} outside the supported range 1..={max}")]
    DimensionOutOfRange { n: usize, max: usize },
    #[error("value {value:#x} does not fit in {n} bits")]
    BitsOutOfRange { value: u64, n: usize },
    #[error("generator table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("the set must be nonempty")]
    EmptySet,
    #[error("schedule is not progressive: {}", starving_message(.starving))]
    NotProgressive { starving: Vec<usize> },
    #[error("schedule cycle must be nonempty")]
    EmptyCycle,
    #[error("invalid schedule times: {0}")]
    InvalidTimes(String),
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

fn starving_message(starving: &[usize]) -> String {
    let list: Vec<String> = starving.iter().map(|i| i.to_string()).collect();
    if starving.len() == 1 {
        format!("coordinate {} starves", list[0])
    } else {
        format!("coordinates {} starve", list.join(", "))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
