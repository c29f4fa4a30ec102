//! Ground literals, terms and resource atoms.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A constant term inside a literal's argument list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Int(i64),
    Ident(String),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(n) => write!(f, "{n}"),
            Term::Ident(s) => f.write_str(s),
        }
    }
}

/// The positive part of a literal: a name and its constant arguments.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub name: String,
    pub args: Vec<Term>,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// An atom or its negation. Negation is a polarity flag, so `~~b` cannot be
/// represented and [`Literal::negate`] is an involution.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
}

impl Literal {
    pub fn new(name: impl Into<String>, args: Vec<Term>) -> Self {
        Literal {
            atom: Atom {
                name: name.into(),
                args,
            },
            negated: false,
        }
    }

    /// Positive literal without arguments.
    pub fn prop(name: impl Into<String>) -> Self {
        Literal::new(name, Vec::new())
    }

    pub fn negate(&self) -> Self {
        Literal {
            atom: self.atom.clone(),
            negated: !self.negated,
        }
    }

    pub fn name(&self) -> &str {
        &self.atom.name
    }

    pub fn is_complement_of(&self, other: &Literal) -> bool {
        self.atom == other.atom && self.negated != other.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("~")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// `res_q(name, value)`: `amount` units of resource `resource` are needed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResourceAtom {
    pub resource: String,
    pub amount: u64,
}

impl ResourceAtom {
    pub fn new(resource: impl Into<String>, amount: u64) -> Self {
        ResourceAtom {
            resource: resource.into(),
            amount,
        }
    }
}

impl fmt::Display for ResourceAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "res({},{})", self.resource, self.amount)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn display_and_negation() {
        let l = Literal::new("clean", vec![Term::Int(5), Term::Int(5)]);
        assert_eq!(l.to_string(), "clean(5,5)");
        let n = l.negate();
        assert_eq!(n.to_string(), "~clean(5,5)");
        assert_eq!(n.negate(), l);
        assert!(l.is_complement_of(&n));
        assert!(!l.is_complement_of(&l));
        assert_eq!(Literal::prop("full_trashcan").negate().to_string(), "~full_trashcan");
    }
}
