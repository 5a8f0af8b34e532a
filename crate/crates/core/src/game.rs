//! Finite strategic games and their JSON document format.
//!
//! A game lists its agents, a single shared action domain, outcomes, and the
//! plays that can actually happen. The mechanism is a relation: a profile may
//! have no listed outcome or several. Propositions are interpreted as sets of
//! play indices.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{AgentId, Coalition, Proposition};

/// One play: a complete action profile together with an outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Play {
    pub profile: BTreeMap<AgentId, String>,
    pub outcome: String,
}

impl Play {
    pub fn new<A, S>(profile: impl IntoIterator<Item = (A, S)>, outcome: impl Into<String>) -> Play
    where
        A: Into<AgentId>,
        S: Into<String>,
    {
        Play {
            profile: profile
                .into_iter()
                .map(|(a, s)| (a.into(), s.into()))
                .collect(),
            outcome: outcome.into(),
        }
    }

    pub fn action(&self, agent: &AgentId) -> Option<&str> {
        self.profile.get(agent).map(String::as_str)
    }
}

/// An action profile of a coalition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    coalition: Coalition,
    choice: BTreeMap<AgentId, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("strategy does not assign exactly one action to each member of {0}")]
pub struct StrategyDomainError(pub Coalition);

impl Strategy {
    /// Builds a strategy whose domain is exactly the coalition.
    pub fn new(
        coalition: Coalition,
        choice: BTreeMap<AgentId, String>,
    ) -> Result<Strategy, StrategyDomainError> {
        let domain_matches =
            choice.len() == coalition.len() && coalition.iter().all(|a| choice.contains_key(a));
        if domain_matches {
            Ok(Strategy { coalition, choice })
        } else {
            Err(StrategyDomainError(coalition))
        }
    }

    pub fn empty() -> Strategy {
        Strategy {
            coalition: Coalition::empty(),
            choice: BTreeMap::new(),
        }
    }

    pub fn coalition(&self) -> &Coalition {
        &self.coalition
    }

    pub fn choice(&self) -> &BTreeMap<AgentId, String> {
        &self.choice
    }

    /// Restriction to a subcoalition.
    pub fn restrict(&self, sub: &Coalition) -> Option<Strategy> {
        if !sub.is_subset(&self.coalition) {
            return None;
        }
        let choice = sub
            .iter()
            .map(|a| (a.clone(), self.choice[a].clone()))
            .collect();
        Some(Strategy {
            coalition: sub.clone(),
            choice,
        })
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, s)) in self.choice.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a} -> {s}")?;
        }
        f.write_str("}")
    }
}

/// True iff the play's profile agrees with the strategy on every member of its
/// coalition. Vacuously true for the empty coalition.
pub fn agrees(s: &Strategy, p: &Play) -> bool {
    s.choice
        .iter()
        .all(|(agent, action)| p.profile.get(agent) == Some(action))
}

/// A finite game. Construction does not check anything; call
/// [`Game::validate`] (or load through [`load`]) before evaluating formulas.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Game {
    pub agents: Vec<AgentId>,
    pub actions: Vec<String>,
    pub outcomes: Vec<String>,
    pub plays: Vec<Play>,
    /// Propositions missing from the map are false at every play.
    pub valuation: BTreeMap<Proposition, BTreeSet<usize>>,
}

/// A broken game invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyActionSet,
    DuplicateAgent(AgentId),
    DuplicateAction(String),
    DuplicateOutcome(String),
    EmptyIdentifier {
        what: &'static str,
    },
    MissingAction {
        play: usize,
        agent: AgentId,
    },
    UnknownAgentInProfile {
        play: usize,
        agent: AgentId,
    },
    UnknownAction {
        play: usize,
        agent: AgentId,
        action: String,
    },
    UnknownOutcome {
        play: usize,
        outcome: String,
    },
    DuplicatePlay {
        play: usize,
        first: usize,
    },
    PlayIndexOutOfRange {
        proposition: Proposition,
        index: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyActionSet => write!(f, "empty action set"),
            Violation::DuplicateAgent(a) => write!(f, "duplicate agent {a:?}"),
            Violation::DuplicateAction(a) => write!(f, "duplicate action {a:?}"),
            Violation::DuplicateOutcome(o) => write!(f, "duplicate outcome {o:?}"),
            Violation::EmptyIdentifier { what } => write!(f, "empty {what} identifier"),
            Violation::MissingAction { play, agent } => {
                write!(f, "play {play}: no action for agent {agent:?}")
            }
            Violation::UnknownAgentInProfile { play, agent } => {
                write!(f, "play {play}: profile mentions unknown agent {agent:?}")
            }
            Violation::UnknownAction {
                play,
                agent,
                action,
            } => write!(
                f,
                "play {play}: agent {agent:?} uses unknown action {action:?}"
            ),
            Violation::UnknownOutcome { play, outcome } => {
                write!(f, "play {play}: unknown outcome {outcome:?}")
            }
            Violation::DuplicatePlay { play, first } => {
                write!(f, "play {play}: duplicate of play {first}")
            }
            Violation::PlayIndexOutOfRange { proposition, index } => write!(
                f,
                "play index out of range: proposition {proposition:?} refers to play {index}"
            ),
        }
    }
}

fn duplicates<'a, T: Eq + std::hash::Hash + 'a>(
    items: impl IntoIterator<Item = &'a T>,
) -> Vec<&'a T> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for item in items {
        if !seen.insert(item) && !out.contains(&item) {
            out.push(item);
        }
    }
    out
}

impl Game {
    /// Checks every game invariant and reports all violations found.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut v = Vec::new();
        if self.actions.is_empty() {
            v.push(Violation::EmptyActionSet);
        }
        v.extend(
            duplicates(&self.agents)
                .into_iter()
                .cloned()
                .map(Violation::DuplicateAgent),
        );
        v.extend(
            duplicates(&self.actions)
                .into_iter()
                .cloned()
                .map(Violation::DuplicateAction),
        );
        v.extend(
            duplicates(&self.outcomes)
                .into_iter()
                .cloned()
                .map(Violation::DuplicateOutcome),
        );
        if self.actions.iter().any(String::is_empty) {
            v.push(Violation::EmptyIdentifier { what: "action" });
        }
        if self.outcomes.iter().any(String::is_empty) {
            v.push(Violation::EmptyIdentifier { what: "outcome" });
        }

        let agents: HashSet<&AgentId> = self.agents.iter().collect();
        let actions: HashSet<&str> = self.actions.iter().map(String::as_str).collect();
        let outcomes: HashSet<&str> = self.outcomes.iter().map(String::as_str).collect();
        let mut first_seen: std::collections::HashMap<&Play, usize> = Default::default();
        for (i, play) in self.plays.iter().enumerate() {
            for agent in &self.agents {
                match play.profile.get(agent) {
                    None => v.push(Violation::MissingAction {
                        play: i,
                        agent: agent.clone(),
                    }),
                    Some(action) if !actions.contains(action.as_str()) => {
                        v.push(Violation::UnknownAction {
                            play: i,
                            agent: agent.clone(),
                            action: action.clone(),
                        })
                    }
                    Some(_) => {}
                }
            }
            for agent in play.profile.keys() {
                if !agents.contains(agent) {
                    v.push(Violation::UnknownAgentInProfile {
                        play: i,
                        agent: agent.clone(),
                    });
                }
            }
            if !outcomes.contains(play.outcome.as_str()) {
                v.push(Violation::UnknownOutcome {
                    play: i,
                    outcome: play.outcome.clone(),
                });
            }
            if let Some(&first) = first_seen.get(play) {
                v.push(Violation::DuplicatePlay { play: i, first });
            } else {
                first_seen.insert(play, i);
            }
        }

        for (prop, indices) in &self.valuation {
            for &index in indices {
                if index >= self.plays.len() {
                    v.push(Violation::PlayIndexOutOfRange {
                        proposition: prop.clone(),
                        index,
                    });
                }
            }
        }

        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    pub fn agent(&self, name: &str) -> Option<&AgentId> {
        self.agents.iter().find(|a| a.as_str() == name)
    }

    /// The set of plays at which `p` holds.
    pub fn holds(&self, p: &Proposition) -> Option<&BTreeSet<usize>> {
        self.valuation.get(p)
    }
}

impl std::hash::Hash for Play {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.profile.hash(state);
        self.outcome.hash(state);
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlayDoc {
    profile: IndexMap<AgentId, String>,
    outcome: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameDoc {
    agents: Vec<AgentId>,
    actions: Vec<String>,
    outcomes: Vec<String>,
    plays: Vec<PlayDoc>,
    #[serde(default)]
    valuation: BTreeMap<Proposition, Vec<usize>>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("malformed game document at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid game: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// Parses a game document and validates it.
pub fn load(document: &[u8]) -> Result<Game, LoadError> {
    let doc: GameDoc = serde_json::from_slice(document).map_err(|e| LoadError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut valuation: BTreeMap<Proposition, BTreeSet<usize>> = BTreeMap::new();
    for (prop, indices) in doc.valuation {
        valuation.entry(prop).or_default().extend(indices);
    }
    let game = Game {
        agents: doc.agents,
        actions: doc.actions,
        outcomes: doc.outcomes,
        plays: doc
            .plays
            .into_iter()
            .map(|p| Play {
                profile: p.profile.into_iter().collect(),
                outcome: p.outcome,
            })
            .collect(),
        valuation,
    };
    game.validate().map_err(LoadError::Invalid)?;
    Ok(game)
}

/// Canonical JSON value of a game: fixed key order, profiles listed in agent
/// order, valuation keys and indices sorted.
pub fn to_json_value(g: &Game) -> serde_json::Value {
    let doc = GameDoc {
        agents: g.agents.clone(),
        actions: g.actions.clone(),
        outcomes: g.outcomes.clone(),
        plays: g
            .plays
            .iter()
            .map(|p| {
                let mut profile: IndexMap<AgentId, String> = g
                    .agents
                    .iter()
                    .filter_map(|a| p.profile.get(a).map(|s| (a.clone(), s.clone())))
                    .collect();
                for (a, s) in &p.profile {
                    if !profile.contains_key(a) {
                        profile.insert(a.clone(), s.clone());
                    }
                }
                PlayDoc {
                    profile,
                    outcome: p.outcome.clone(),
                }
            })
            .collect(),
        valuation: g
            .valuation
            .iter()
            .map(|(k, v)| (k.clone(), v.iter().copied().collect()))
            .collect(),
    };
    serde_json::to_value(doc).expect("game document serializes")
}

/// Canonical document bytes: two-space indent, trailing newline.
pub fn save(g: &Game) -> Vec<u8> {
    let doc = to_json_value(g);
    let mut out = serde_json::to_vec_pretty(&doc).expect("game document serializes");
    out.push(b'\n');
    out
}

/// The single-agent gun example: Lopez may hide or expose his gun, and the
/// granddaughter ends up alive or dead. Exposing the gun is the only way the
/// `dead` outcome can happen.
pub const LOPEZ_DOCUMENT: &str = include_str!("../data/lopez.json");

pub fn lopez_game() -> Game {
    load(LOPEZ_DOCUMENT.as_bytes()).expect("bundled Lopez game is valid")
}
