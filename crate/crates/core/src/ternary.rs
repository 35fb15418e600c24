use core::fmt;

/// Three-valued answer of a budgeted decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ternary {
    Yes,
    No,
    Unknown,
}

impl Ternary {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Ternary::Yes
        } else {
            Ternary::No
        }
    }

    /// Kleene conjunction: any `No` wins, then any `Unknown`.
    pub fn and(self, other: Ternary) -> Ternary {
        match (self, other) {
            (Ternary::No, _) | (_, Ternary::No) => Ternary::No,
            (Ternary::Yes, Ternary::Yes) => Ternary::Yes,
            _ => Ternary::Unknown,
        }
    }

    pub fn is_yes(self) -> bool {
        self == Ternary::Yes
    }

    pub fn is_no(self) -> bool {
        self == Ternary::No
    }
}

impl fmt::Display for Ternary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ternary::Yes => "YES",
            Ternary::No => "NO",
            Ternary::Unknown => "UNKNOWN",
        })
    }
}
