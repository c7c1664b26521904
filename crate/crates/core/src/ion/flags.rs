use std::fmt;

use serde::{Serialize, Serializer};

/// Tunneling exponents below this magnitude are flagged as weakly suppressed.
pub const WEAK_SUPPRESSION_EXPONENT: f64 = 3.0;
/// Reduced fields above this are flagged as strong.
pub const STRONG_FIELD: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flag {
    /// Tunneling exponent magnitude below [`WEAK_SUPPRESSION_EXPONENT`].
    WeakSuppression,
    /// f above [`STRONG_FIELD`].
    StrongField,
    /// A factor or the rate itself underflowed in f64; ln w is still exact.
    Underflow,
    /// A factor or the rate itself overflowed in f64.
    Overflow,
    /// The state or field was rejected; the row carries no numbers.
    DomainError,
}

impl Flag {
    pub const ALL: [Flag; 5] = [
        Flag::WeakSuppression,
        Flag::StrongField,
        Flag::Underflow,
        Flag::Overflow,
        Flag::DomainError,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Flag::WeakSuppression => "weak-suppression",
            Flag::StrongField => "strong-field",
            Flag::Underflow => "underflow",
            Flag::Overflow => "overflow",
            Flag::DomainError => "domain-error",
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

/// Small set of [`Flag`]s; renders as `a|b` in a fixed order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Flags(u8);

impl Flags {
    pub fn empty() -> Self {
        Self(0)
    }

    pub fn insert(&mut self, flag: Flag) {
        self.0 |= flag.bit();
    }

    pub fn with(mut self, flag: Flag) -> Self {
        self.insert(flag);
        self
    }

    pub fn contains(self, flag: Flag) -> bool {
        self.0 & flag.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// True if f64 under- or overflow touched the result.
    pub fn has_range_issue(self) -> bool {
        self.contains(Flag::Underflow) || self.contains(Flag::Overflow)
    }

    pub fn iter(self) -> impl Iterator<Item = Flag> {
        Flag::ALL.into_iter().filter(move |f| self.contains(*f))
    }

    /// Regime flags from the tunneling exponent magnitude and the field.
    pub fn regime(exponent_magnitude: f64, f: f64) -> Self {
        let mut flags = Self::empty();
        if exponent_magnitude < WEAK_SUPPRESSION_EXPONENT {
            flags.insert(Flag::WeakSuppression);
        }
        if f > STRONG_FIELD {
            flags.insert(Flag::StrongField);
        }
        flags
    }
}

impl fmt::Display for Flags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for flag in self.iter() {
            if !first {
                f.write_str("|")?;
            }
            f.write_str(flag.name())?;
            first = false;
        }
        Ok(())
    }
}

impl Serialize for Flags {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(Flag::name))
    }
}
