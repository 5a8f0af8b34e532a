//! Satisfaction of formulas at plays, and blame analysis.
//!
//! Two evaluation routes are provided. [`Checker::satisfies`] follows the
//! recursive truth definition literally: for `B_C f` it enumerates every
//! strategy of `C` and scans the plays agreeing with it.
//! [`Checker::evaluate_all`] tabulates a formula over all plays bottom-up,
//! evaluating every subformula once; for `B_C f` it collects the projections
//! onto `C` of the plays satisfying `f`. A strategy prevents `f` exactly when
//! it is not one of those projections, so some strategy prevents `f` iff
//! there are fewer projections than strategies.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::formula::{AgentId, Coalition, Formula, Proposition};
use crate::game::{Game, Strategy, Violation};

/// Default bound on `|actions|^|C|` for any blame node.
pub const DEFAULT_STRATEGY_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("invalid game: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidGame(Vec<Violation>),
    #[error("play index {index} out of range (game has {plays} plays)")]
    PlayOutOfRange { index: usize, plays: usize },
    #[error("agent {0:?} is not part of the game")]
    UnknownAgent(AgentId),
    #[error("strategy space of coalition {coalition} has {} strategies, above the cap of {cap}", .size.map_or("too many".to_string(), |s| s.to_string()))]
    StrategyOverflow {
        coalition: Coalition,
        size: Option<u64>,
        cap: u64,
    },
    #[error("coalition size bound {max_size} exceeds the {agents} agents of the game")]
    MaxSizeTooLarge { max_size: usize, agents: usize },
}

/// Truth values of one formula at every play, in play order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalTable {
    pub formula: Formula,
    pub truth: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Valid,
    /// Least play index at which the formula fails.
    Counterexample(usize),
}

/// One blamable coalition with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlameEntry {
    pub coalition: Coalition,
    pub witness: Strategy,
    pub minimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlameReport {
    pub play: usize,
    pub formula: Formula,
    pub entries: Vec<BlameEntry>,
}

impl BlameReport {
    pub fn minimal(&self) -> impl Iterator<Item = &BlameEntry> {
        self.entries.iter().filter(|e| e.minimal)
    }

    /// JSON form with witnesses listed in the game's agent order.
    pub fn to_json_value(&self, game: &Game) -> serde_json::Value {
        #[derive(Serialize)]
        struct Entry {
            coalition: Vec<String>,
            witness: IndexMap<String, String>,
            minimal: bool,
        }
        #[derive(Serialize)]
        struct Report {
            play: usize,
            formula: String,
            blamable: Vec<Entry>,
            minimal: Vec<Vec<String>>,
        }
        let names = |c: &Coalition| -> Vec<String> {
            game.agents
                .iter()
                .filter(|a| c.contains(a))
                .map(|a| a.to_string())
                .collect()
        };
        let report = Report {
            play: self.play,
            formula: self.formula.to_string(),
            blamable: self
                .entries
                .iter()
                .map(|e| Entry {
                    coalition: names(&e.coalition),
                    witness: game
                        .agents
                        .iter()
                        .filter_map(|a| {
                            e.witness
                                .choice()
                                .get(a)
                                .map(|s| (a.to_string(), s.clone()))
                        })
                        .collect(),
                    minimal: e.minimal,
                })
                .collect(),
            minimal: self.minimal().map(|e| names(&e.coalition)).collect(),
        };
        serde_json::to_value(report).expect("report serializes")
    }
}

/// A validated game indexed for evaluation.
pub struct Checker<'g> {
    game: &'g Game,
    cap: u64,
    agent_index: HashMap<&'g AgentId, usize>,
    /// Action index chosen by each agent (in game agent order), per play.
    profiles: Vec<Vec<usize>>,
    props: HashMap<&'g Proposition, Vec<bool>>,
}

impl<'g> Checker<'g> {
    pub fn new(game: &'g Game) -> Result<Checker<'g>, EvalError> {
        game.validate().map_err(EvalError::InvalidGame)?;
        let action_index: HashMap<&str, usize> = game
            .actions
            .iter()
            .enumerate()
            .map(|(i, a)| (a.as_str(), i))
            .collect();
        let profiles = game
            .plays
            .iter()
            .map(|p| {
                game.agents
                    .iter()
                    .map(|a| action_index[p.profile[a].as_str()])
                    .collect()
            })
            .collect();
        let props = game
            .valuation
            .iter()
            .map(|(p, set)| {
                let mut v = vec![false; game.plays.len()];
                for &i in set {
                    v[i] = true;
                }
                (p, v)
            })
            .collect();
        Ok(Checker {
            game,
            cap: DEFAULT_STRATEGY_CAP,
            agent_index: game
                .agents
                .iter()
                .enumerate()
                .map(|(i, a)| (a, i))
                .collect(),
            profiles,
            props,
        })
    }

    pub fn with_strategy_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn game(&self) -> &'g Game {
        self.game
    }

    pub fn num_plays(&self) -> usize {
        self.profiles.len()
    }

    /// Agent indices of a coalition, in game agent order.
    fn members(&self, c: &Coalition) -> Result<Vec<usize>, EvalError> {
        let mut idx = c
            .iter()
            .map(|a| {
                self.agent_index
                    .get(a)
                    .copied()
                    .ok_or_else(|| EvalError::UnknownAgent(a.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        idx.sort_unstable();
        Ok(idx)
    }

    /// Number of strategies of `c`, or an overflow error above the cap.
    fn strategy_space(&self, c: &Coalition) -> Result<u64, EvalError> {
        let size = u32::try_from(c.len())
            .ok()
            .and_then(|n| (self.game.actions.len() as u64).checked_pow(n));
        match size {
            Some(s) if s <= self.cap => Ok(s),
            _ => Err(EvalError::StrategyOverflow {
                coalition: c.clone(),
                size,
                cap: self.cap,
            }),
        }
    }

    /// Checks every blame node of `f` for unknown agents and oversized
    /// strategy spaces before any evaluation starts.
    fn preflight(&self, f: &Formula) -> Result<(), EvalError> {
        for (c, _) in f.blame_nodes() {
            self.members(c)?;
            self.strategy_space(c)?;
        }
        Ok(())
    }

    fn check_play(&self, index: usize) -> Result<(), EvalError> {
        if index < self.num_plays() {
            Ok(())
        } else {
            Err(EvalError::PlayOutOfRange {
                index,
                plays: self.num_plays(),
            })
        }
    }

    fn atom(&self, p: &Proposition, play: usize) -> bool {
        self.props.get(p).is_some_and(|v| v[play])
    }

    /// Truth of `f` at one play, by direct recursion on the truth definition.
    pub fn satisfies(&self, play: usize, f: &Formula) -> Result<bool, EvalError> {
        self.check_play(play)?;
        self.preflight(f)?;
        Ok(self.sat(play, f))
    }

    fn sat(&self, play: usize, f: &Formula) -> bool {
        match f {
            Formula::Prop(p) => self.atom(p, play),
            Formula::Top => true,
            Formula::Bottom => false,
            Formula::Not(a) => !self.sat(play, a),
            Formula::Implies(a, b) => !self.sat(play, a) || self.sat(play, b),
            Formula::And(a, b) => self.sat(play, a) && self.sat(play, b),
            Formula::Or(a, b) => self.sat(play, a) || self.sat(play, b),
            Formula::Iff(a, b) => self.sat(play, a) == self.sat(play, b),
            Formula::Necessity(a) => (0..self.num_plays()).all(|j| self.sat(j, a)),
            Formula::Blame(c, a) => {
                if !self.sat(play, a) {
                    return false;
                }
                let members = self.members(c).expect("checked by preflight");
                let n_actions = self.game.actions.len();
                StrategyIter::new(members.len(), n_actions).any(|s| {
                    (0..self.num_plays()).all(|j| {
                        let agrees = members
                            .iter()
                            .zip(&s)
                            .all(|(&m, &act)| self.profiles[j][m] == act);
                        !agrees || !self.sat(j, a)
                    })
                })
            }
        }
    }

    /// Truth table of `f` over all plays. Each distinct subformula is
    /// evaluated once.
    pub fn evaluate_all(&self, f: &Formula) -> Result<EvalTable, EvalError> {
        self.preflight(f)?;
        let mut cache = HashMap::new();
        let truth = self.table(f, &mut cache);
        Ok(EvalTable {
            formula: f.clone(),
            truth: truth.as_ref().clone(),
        })
    }

    fn table<'f>(
        &self,
        f: &'f Formula,
        cache: &mut HashMap<&'f Formula, Rc<Vec<bool>>>,
    ) -> Rc<Vec<bool>> {
        if let Some(t) = cache.get(f) {
            return t.clone();
        }
        let n = self.num_plays();
        let t: Vec<bool> = match f {
            Formula::Prop(p) => (0..n).map(|i| self.atom(p, i)).collect(),
            Formula::Top => vec![true; n],
            Formula::Bottom => vec![false; n],
            Formula::Not(a) => self.table(a, cache).iter().map(|x| !x).collect(),
            Formula::Implies(a, b) => self.zip(a, b, cache, |x, y| !x || y),
            Formula::And(a, b) => self.zip(a, b, cache, |x, y| x && y),
            Formula::Or(a, b) => self.zip(a, b, cache, |x, y| x || y),
            Formula::Iff(a, b) => self.zip(a, b, cache, |x, y| x == y),
            Formula::Necessity(a) => {
                let all = self.table(a, cache).iter().all(|&x| x);
                vec![all; n]
            }
            Formula::Blame(c, a) => {
                let body = self.table(a, cache);
                let members = self.members(c).expect("checked by preflight");
                let space = self.strategy_space(c).expect("checked by preflight");
                let blocked = self.blocked_strategies(&members, &body);
                if (blocked.len() as u64) < space {
                    body.as_ref().clone()
                } else {
                    vec![false; n]
                }
            }
        };
        let t = Rc::new(t);
        cache.insert(f, t.clone());
        t
    }

    fn zip<'f>(
        &self,
        a: &'f Formula,
        b: &'f Formula,
        cache: &mut HashMap<&'f Formula, Rc<Vec<bool>>>,
        op: impl Fn(bool, bool) -> bool,
    ) -> Vec<bool> {
        let ta = self.table(a, cache);
        let tb = self.table(b, cache);
        ta.iter().zip(tb.iter()).map(|(&x, &y)| op(x, y)).collect()
    }

    /// Strategies of the coalition that some play satisfying the body agrees
    /// with; every other strategy prevents the body.
    fn blocked_strategies(&self, members: &[usize], body: &[bool]) -> HashSet<Vec<usize>> {
        body.iter()
            .enumerate()
            .filter(|(_, &holds)| holds)
            .map(|(j, _)| members.iter().map(|&m| self.profiles[j][m]).collect())
            .collect()
    }

    fn strategy_from_indices(&self, c: &Coalition, members: &[usize], s: &[usize]) -> Strategy {
        let choice = members
            .iter()
            .zip(s)
            .map(|(&m, &act)| (self.game.agents[m].clone(), self.game.actions[act].clone()))
            .collect();
        Strategy::new(c.clone(), choice).expect("domain is the coalition")
    }

    /// First strategy of `c` (agent order, then action order) under which no
    /// play satisfies `f`, provided `f` holds at `play`.
    pub fn blame_witness(
        &self,
        play: usize,
        c: &Coalition,
        f: &Formula,
    ) -> Result<Option<Strategy>, EvalError> {
        self.check_play(play)?;
        self.preflight(&Formula::blame(c.clone(), f.clone()))?;
        let body = self.evaluate_all(f)?.truth;
        Ok(self.witness_from_table(play, c, &body))
    }

    fn witness_from_table(&self, play: usize, c: &Coalition, body: &[bool]) -> Option<Strategy> {
        if !body[play] {
            return None;
        }
        let members = self.members(c).expect("checked by caller");
        let blocked = self.blocked_strategies(&members, body);
        StrategyIter::new(members.len(), self.game.actions.len())
            .find(|s| !blocked.contains(s))
            .map(|s| self.strategy_from_indices(c, &members, &s))
    }

    /// Every coalition of at most `max_size` agents blamable for `f` at
    /// `play`, smallest first, with inclusion-minimal ones flagged.
    pub fn blamable_coalitions(
        &self,
        play: usize,
        f: &Formula,
        max_size: usize,
    ) -> Result<BlameReport, EvalError> {
        self.check_play(play)?;
        let agents = self.game.agents.len();
        if max_size > agents {
            return Err(EvalError::MaxSizeTooLarge { max_size, agents });
        }
        let body = self.evaluate_all(f)?.truth;
        let mut entries: Vec<BlameEntry> = Vec::new();
        if body[play] {
            for size in 0..=max_size {
                for idx in Combinations::new(agents, size) {
                    let c = Coalition::new(idx.iter().map(|&i| self.game.agents[i].clone()));
                    self.strategy_space(&c)?;
                    if let Some(witness) = self.witness_from_table(play, &c, &body) {
                        entries.push(BlameEntry {
                            coalition: c,
                            witness,
                            minimal: false,
                        });
                    }
                }
            }
        }
        let coalitions: Vec<Coalition> = entries.iter().map(|e| e.coalition.clone()).collect();
        for e in &mut entries {
            e.minimal = !coalitions
                .iter()
                .any(|d| d != &e.coalition && d.is_subset(&e.coalition));
        }
        Ok(BlameReport {
            play,
            formula: f.clone(),
            entries,
        })
    }

    /// Whether `f` holds at every play.
    pub fn valid(&self, f: &Formula) -> Result<Validity, EvalError> {
        let t = self.evaluate_all(f)?;
        Ok(match t.truth.iter().position(|&x| !x) {
            None => Validity::Valid,
            Some(i) => Validity::Counterexample(i),
        })
    }
}

/// Odometer over `n_actions^width` action vectors, first position most
/// significant.
struct StrategyIter {
    current: Option<Vec<usize>>,
    n_actions: usize,
}

impl StrategyIter {
    fn new(width: usize, n_actions: usize) -> Self {
        let current = (n_actions > 0 || width == 0).then(|| vec![0; width]);
        StrategyIter { current, n_actions }
    }
}

impl Iterator for StrategyIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        for pos in (0..next.len()).rev() {
            next[pos] += 1;
            if next[pos] < self.n_actions {
                self.current = Some(next);
                return Some(out);
            }
            next[pos] = 0;
        }
        Some(out)
    }
}

/// Size-`k` subsets of `0..n` in lexicographic order.
struct Combinations {
    current: Option<Vec<usize>>,
    n: usize,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            current: (k <= n).then(|| (0..k).collect()),
            n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

pub fn satisfies(g: &Game, play: usize, f: &Formula) -> Result<bool, EvalError> {
    Checker::new(g)?.satisfies(play, f)
}

pub fn evaluate_all(g: &Game, f: &Formula) -> Result<EvalTable, EvalError> {
    Checker::new(g)?.evaluate_all(f)
}

pub fn blame_witness(
    g: &Game,
    play: usize,
    c: &Coalition,
    f: &Formula,
) -> Result<Option<Strategy>, EvalError> {
    Checker::new(g)?.blame_witness(play, c, f)
}

pub fn blamable_coalitions(
    g: &Game,
    play: usize,
    f: &Formula,
    max_size: usize,
) -> Result<BlameReport, EvalError> {
    Checker::new(g)?.blamable_coalitions(play, f, max_size)
}

pub fn valid_in_game(g: &Game, f: &Formula) -> Result<Validity, EvalError> {
    Checker::new(g)?.valid(f)
}
