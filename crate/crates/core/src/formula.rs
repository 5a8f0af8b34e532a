//! Formula syntax: identifiers, coalitions and the formula tree.
//!
//! The core language has propositions, negation, implication, the necessity
//! modality `N` and the blame modality `B_C`. Conjunction, disjunction,
//! equivalence and the two constants are kept as first-class nodes with
//! classical semantics. The dual `<N> f` is never a node of its own: it is
//! always stored as `!N !f`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Words that cannot be used as identifiers because the parser treats them
/// as constants.
const RESERVED: [&str; 2] = ["true", "false"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid identifier {0:?}: expected a lowercase letter followed by letters, digits or '_'")]
pub struct IdentError(pub String);

/// Returns true if `s` is a lowercase letter followed by ASCII letters, digits
/// or underscores, and is not a reserved word.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !RESERVED.contains(&s)
}

macro_rules! identifier_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(try_from = "String", into = "String")]
        pub struct $name(String);

        impl $name {
            pub fn new(name: impl Into<String>) -> Result<Self, IdentError> {
                let name = name.into();
                if is_identifier(&name) {
                    Ok(Self(name))
                } else {
                    Err(IdentError(name))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl TryFrom<String> for $name {
            type Error = IdentError;

            fn try_from(value: String) -> Result<Self, Self::Error> {
                Self::new(value)
            }
        }

        impl TryFrom<&str> for $name {
            type Error = IdentError;

            fn try_from(value: &str) -> Result<Self, Self::Error> {
                Self::new(value)
            }
        }

        impl From<$name> for String {
            fn from(value: $name) -> String {
                value.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

identifier_newtype!(
    /// Name of an agent.
    AgentId
);
identifier_newtype!(
    /// Name of a propositional variable.
    Proposition
);

/// A finite set of agents. Members are kept sorted and deduplicated, so two
/// coalitions with the same members are equal regardless of how they were
/// built.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coalition(Vec<AgentId>);

impl Coalition {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(members: impl IntoIterator<Item = AgentId>) -> Self {
        let set: BTreeSet<AgentId> = members.into_iter().collect();
        Self(set.into_iter().collect())
    }

    /// Builds a coalition from string names, failing on the first invalid one.
    pub fn from_names<S: AsRef<str>>(
        names: impl IntoIterator<Item = S>,
    ) -> Result<Self, IdentError> {
        names
            .into_iter()
            .map(|n| AgentId::new(n.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }

    pub fn members(&self) -> &[AgentId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, agent: &AgentId) -> bool {
        self.0.binary_search(agent).is_ok()
    }

    pub fn is_subset(&self, other: &Coalition) -> bool {
        self.0.iter().all(|a| other.contains(a))
    }

    pub fn is_disjoint(&self, other: &Coalition) -> bool {
        !self.0.iter().any(|a| other.contains(a))
    }

    pub fn union(&self, other: &Coalition) -> Coalition {
        Coalition::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, AgentId> {
        self.0.iter()
    }
}

impl FromIterator<AgentId> for Coalition {
    fn from_iter<T: IntoIterator<Item = AgentId>>(iter: T) -> Self {
        Coalition::new(iter)
    }
}

impl<'a> IntoIterator for &'a Coalition {
    type Item = &'a AgentId;
    type IntoIter = std::slice::Iter<'a, AgentId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(a.as_str())?;
        }
        f.write_str("}")
    }
}

/// A formula of the blame logic.
///
/// Structural equality (`==`) is syntactic equality: trees are compared node
/// for node and coalitions as canonical sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Prop(Proposition),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Necessity(Box<Formula>),
    Blame(Coalition, Box<Formula>),
    Top,
    Bottom,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    /// Atom by name.
    ///
    /// # Panics
    /// If `name` is not a valid identifier. Use [`Proposition::new`] for
    /// untrusted input.
    pub fn prop(name: &str) -> Formula {
        Formula::Prop(Proposition::new(name).expect("invalid proposition name"))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn nec(f: Formula) -> Formula {
        Formula::Necessity(Box::new(f))
    }

    /// The dual of necessity, stored as `!N !f`.
    pub fn possible(f: Formula) -> Formula {
        Formula::not(Formula::nec(Formula::not(f)))
    }

    pub fn blame(c: Coalition, f: Formula) -> Formula {
        Formula::Blame(c, Box::new(f))
    }

    /// Left-nested disjunction `((f1 | f2) | f3) ...`; the empty disjunction is
    /// `false`.
    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::Bottom,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// If this formula has the shape `!N !g`, returns `g`.
    pub fn as_possible(&self) -> Option<&Formula> {
        match self {
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Necessity(inner) => match inner.as_ref() {
                    Formula::Not(g) => Some(g),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    /// Direct children, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Prop(_) | Formula::Top | Formula::Bottom => vec![],
            Formula::Not(a) | Formula::Necessity(a) | Formula::Blame(_, a) => vec![a],
            Formula::Implies(a, b)
            | Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Iff(a, b) => vec![a, b],
        }
    }

    pub fn is_modal(&self) -> bool {
        matches!(self, Formula::Necessity(_) | Formula::Blame(..))
    }

    /// Maximal nesting of `N` and `B` nodes.
    pub fn modal_depth(&self) -> usize {
        let below = self
            .children()
            .into_iter()
            .map(Formula::modal_depth)
            .max()
            .unwrap_or(0);
        below + usize::from(self.is_modal())
    }

    /// Tree height; atoms and constants have height 0.
    pub fn height(&self) -> usize {
        self.children()
            .into_iter()
            .map(|c| c.height() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::size)
            .sum::<usize>()
    }

    /// Union of all coalitions occurring in blame subformulas.
    pub fn agents_mentioned(&self) -> BTreeSet<AgentId> {
        let mut out = BTreeSet::new();
        self.collect_agents(&mut out);
        out
    }

    fn collect_agents(&self, out: &mut BTreeSet<AgentId>) {
        if let Formula::Blame(c, _) = self {
            out.extend(c.iter().cloned());
        }
        for child in self.children() {
            child.collect_agents(out);
        }
    }

    pub fn propositions(&self) -> BTreeSet<Proposition> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<Proposition>) {
        if let Formula::Prop(p) = self {
            out.insert(p.clone());
        }
        for child in self.children() {
            child.collect_props(out);
        }
    }

    /// Visits every blame subformula in pre-order.
    pub fn blame_nodes(&self) -> Vec<(&Coalition, &Formula)> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if let Formula::Blame(c, body) = f {
                out.push((c, body.as_ref()));
            }
            let mut children = f.children();
            children.reverse();
            stack.extend(children);
        }
        out
    }
}

/// Syntactic identity of two formulas.
pub fn syntactic_eq(a: &Formula, b: &Formula) -> bool {
    a == b
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print(self))
    }
}
