use std::fmt;

use serde::Serialize;

/// The three truth values. `True` and `Both` are designated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TruthValue {
    True,
    Both,
    False,
}

impl TruthValue {
    pub const ALL: [TruthValue; 3] = [TruthValue::True, TruthValue::Both, TruthValue::False];
    pub const CLASSICAL: [TruthValue; 2] = [TruthValue::True, TruthValue::False];

    pub fn is_designated(self) -> bool {
        self != TruthValue::False
    }

    pub fn is_classical(self) -> bool {
        self != TruthValue::Both
    }

    pub fn neg(self) -> TruthValue {
        match self {
            TruthValue::False => TruthValue::True,
            TruthValue::True => TruthValue::False,
            TruthValue::Both => TruthValue::Both,
        }
    }

    pub fn and(self, other: TruthValue) -> TruthValue {
        use TruthValue::*;
        if self == True && other == True {
            True
        } else if self == False || other == False {
            False
        } else {
            Both
        }
    }

    pub fn or(self, other: TruthValue) -> TruthValue {
        use TruthValue::*;
        if self == True || other == True {
            True
        } else if self == False && other == False {
            False
        } else {
            Both
        }
    }

    /// The weak implication `->`.
    pub fn implies(self, other: TruthValue) -> TruthValue {
        use TruthValue::*;
        if self == False || other == True {
            True
        } else if other == False {
            False
        } else {
            Both
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            TruthValue::True => "t",
            TruthValue::Both => "b",
            TruthValue::False => "f",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TruthValue::True => "True",
            TruthValue::Both => "Both",
            TruthValue::False => "False",
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
