use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("alphabet size must be between 2 and 10, got {0}")]
    InvalidAlphabet(usize),
    #[error("letter {letter} is outside the alphabet of size {size}")]
    LetterOutOfRange { letter: u8, size: usize },
    #[error("operands live over different alphabets")]
    AlphabetMismatch,
    #[error("operands belong to different element families")]
    FamilyMismatch,
    #[error("word of length {length} is shorter than the resolution depth {needed}")]
    Unresolved { length: usize, needed: usize },
    #[error("no cycle found within {0} states")]
    NoCycleWithinBound(usize),
    #[error("domain words do not cover the space")]
    IncompleteCode,
    #[error("domain words overlap")]
    OverlappingCode,
    #[error("the map is not a bijection")]
    NotBijective,
    #[error("odometer power {0} exceeds the bound 64")]
    PowerBound(i64),
    #[error("invalid wreath table: {0}")]
    InvalidTable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("depth schedule must be strictly increasing and positive")]
    InvalidSchedule,
    #[error("no rigid-stabiliser elements found for cylinder [{0}]")]
    EmptyRist(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("budget exceeded")]
    BudgetExceeded,
    #[error("element is not in the neighbourhood stabiliser: {0}")]
    NotInNbhdStabiliser(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
