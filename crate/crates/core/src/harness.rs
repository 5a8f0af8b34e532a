//! Random games and formulas, and soundness sweeps of the axiom schemas.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`, so a seed reproduces the same games, formulas and reports
//! on every platform. In a sweep, game `i` draws from the master seed on
//! stream `i`, which keeps the report independent of how games are scheduled
//! across threads.

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::check::{Checker, EvalError};
use crate::formula::{AgentId, Coalition, Formula, Proposition};
use crate::game::{self, Game, Play};
use crate::proof::{instantiate_schema, is_tautology, Justification, Proof, Schema, Substitution};

const AGENT_NAMES: [&str; 4] = ["a", "b", "c", "d"];
const PROP_NAMES: [&str; 4] = ["p", "q", "r", "s"];

pub const MAX_AGENTS: usize = 4;
pub const MAX_ACTIONS: usize = 4;
pub const MAX_OUTCOMES: usize = 4;
pub const MAX_PLAYS: usize = 16;
pub const MAX_PROPS: usize = 4;
pub const MAX_FORMULA_DEPTH: usize = 6;

/// Generator sizes. For [`random_game`] and [`random_formula`] they are
/// exact; for a sweep they are upper bounds from which each game's sizes are
/// drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GenParams {
    pub seed: u64,
    pub n_agents: usize,
    pub n_actions: usize,
    pub n_outcomes: usize,
    pub n_plays: usize,
    pub n_props: usize,
    pub formula_depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("generator parameter {field} = {value} outside [{min}, {max}]")]
pub struct GenParamsError {
    pub field: &'static str,
    pub value: usize,
    pub min: usize,
    pub max: usize,
}

impl GenParams {
    /// Largest sizes, with the given seed.
    pub fn with_seed(seed: u64) -> GenParams {
        GenParams {
            seed,
            n_agents: MAX_AGENTS,
            n_actions: MAX_ACTIONS,
            n_outcomes: MAX_OUTCOMES,
            n_plays: MAX_PLAYS,
            n_props: MAX_PROPS,
            formula_depth: MAX_FORMULA_DEPTH,
        }
    }

    pub fn validate(&self) -> Result<(), GenParamsError> {
        let checks = [
            ("n_agents", self.n_agents, 0, MAX_AGENTS),
            ("n_actions", self.n_actions, 1, MAX_ACTIONS),
            ("n_outcomes", self.n_outcomes, 1, MAX_OUTCOMES),
            ("n_plays", self.n_plays, 0, MAX_PLAYS),
            ("n_props", self.n_props, 1, MAX_PROPS),
            ("formula_depth", self.formula_depth, 0, MAX_FORMULA_DEPTH),
        ];
        for (field, value, min, max) in checks {
            if value < min || value > max {
                return Err(GenParamsError {
                    field,
                    value,
                    min,
                    max,
                });
            }
        }
        Ok(())
    }

    fn clamped(&self) -> GenParams {
        GenParams {
            seed: self.seed,
            n_agents: self.n_agents.min(MAX_AGENTS),
            n_actions: self.n_actions.clamp(1, MAX_ACTIONS),
            n_outcomes: self.n_outcomes.clamp(1, MAX_OUTCOMES),
            n_plays: self.n_plays.min(MAX_PLAYS),
            n_props: self.n_props.clamp(1, MAX_PROPS),
            formula_depth: self.formula_depth.min(MAX_FORMULA_DEPTH),
        }
    }

    /// Sizes for one sweep game, drawn uniformly within these bounds. Sweep
    /// games have at least one agent so that formulas naming agent `a` can
    /// be evaluated on all of them.
    fn draw(&self, rng: &mut ChaCha8Rng) -> GenParams {
        let b = self.clamped();
        GenParams {
            seed: self.seed,
            n_agents: rng.gen_range(1..=b.n_agents.max(1)),
            n_actions: rng.gen_range(1..=b.n_actions),
            n_outcomes: rng.gen_range(1..=b.n_outcomes),
            n_plays: rng.gen_range(0..=b.n_plays),
            n_props: rng.gen_range(1..=b.n_props),
            formula_depth: b.formula_depth,
        }
    }
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams::with_seed(0)
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn generate_game(rng: &mut ChaCha8Rng, p: &GenParams) -> Game {
    let p = p.clamped();
    let agents: Vec<AgentId> = AGENT_NAMES[..p.n_agents]
        .iter()
        .map(|a| AgentId::new(*a).expect("valid name"))
        .collect();
    let actions: Vec<String> = (0..p.n_actions).map(|i| format!("x{i}")).collect();
    let outcomes: Vec<String> = (0..p.n_outcomes).map(|i| format!("o{i}")).collect();

    // Pairs (profile, outcome) are numbered with the profile digits most
    // significant, then the outcome.
    let profiles = p.n_actions.pow(p.n_agents as u32);
    let total = profiles * p.n_outcomes;
    let mut chosen = sample(rng, total, p.n_plays.min(total)).into_vec();
    chosen.sort_unstable();
    let plays: Vec<Play> = chosen
        .into_iter()
        .map(|code| {
            let outcome = code % p.n_outcomes;
            let mut rest = code / p.n_outcomes;
            let mut digits = vec![0; p.n_agents];
            for d in digits.iter_mut().rev() {
                *d = rest % p.n_actions;
                rest /= p.n_actions;
            }
            Play {
                profile: agents
                    .iter()
                    .cloned()
                    .zip(digits.into_iter().map(|d| actions[d].clone()))
                    .collect(),
                outcome: outcomes[outcome].clone(),
            }
        })
        .collect();

    let valuation = PROP_NAMES[..p.n_props]
        .iter()
        .map(|name| {
            let set = (0..plays.len()).filter(|_| rng.gen_bool(0.5)).collect();
            (Proposition::new(*name).expect("valid name"), set)
        })
        .collect();

    Game {
        agents,
        actions,
        outcomes,
        plays,
        valuation,
    }
}

/// A valid game with exactly the requested sizes, except that the play count
/// is capped at the number of distinct (profile, outcome) pairs.
pub fn random_game(p: &GenParams) -> Game {
    generate_game(&mut stream_rng(p.seed, 0), p)
}

struct FormulaGen<'a> {
    rng: &'a mut ChaCha8Rng,
    props: Vec<Proposition>,
    agents: &'a [AgentId],
}

impl FormulaGen<'_> {
    fn new<'a>(rng: &'a mut ChaCha8Rng, n_props: usize, agents: &'a [AgentId]) -> FormulaGen<'a> {
        FormulaGen {
            rng,
            props: PROP_NAMES[..n_props.clamp(1, MAX_PROPS)]
                .iter()
                .map(|n| Proposition::new(*n).expect("valid name"))
                .collect(),
            agents,
        }
    }

    fn leaf(&mut self) -> Formula {
        match self.rng.gen_range(0..6) {
            0 => Formula::Top,
            1 => Formula::Bottom,
            _ => {
                let i = self.rng.gen_range(0..self.props.len());
                Formula::Prop(self.props[i].clone())
            }
        }
    }

    fn coalition(&mut self) -> Coalition {
        let agents = self.agents;
        agents
            .iter()
            .filter(|_| self.rng.gen_bool(0.5))
            .cloned()
            .collect()
    }

    fn formula(&mut self, depth: usize) -> Formula {
        if depth == 0 {
            return self.leaf();
        }
        let d = depth - 1;
        match self.rng.gen_range(0..10) {
            0..=2 => self.leaf(),
            3 => Formula::not(self.formula(d)),
            4 => Formula::nec(self.formula(d)),
            5 => {
                let c = self.coalition();
                Formula::blame(c, self.formula(d))
            }
            6 => Formula::implies(self.formula(d), self.formula(d)),
            7 => Formula::and(self.formula(d), self.formula(d)),
            8 => Formula::or(self.formula(d), self.formula(d)),
            _ => Formula::iff(self.formula(d), self.formula(d)),
        }
    }

    /// A formula whose depth is itself drawn from `0..=max_depth`.
    fn any(&mut self, max_depth: usize) -> Formula {
        let depth = self.rng.gen_range(0..=max_depth);
        self.formula(depth)
    }
}

/// A random formula of height at most `p.formula_depth` over the first
/// `p.n_props` propositions, with coalitions drawn from the game's agents.
pub fn random_formula(p: &GenParams, game: &Game) -> Formula {
    let mut rng = stream_rng(p.seed, 1);
    FormulaGen::new(&mut rng, p.n_props, &game.agents)
        .formula(p.formula_depth.min(MAX_FORMULA_DEPTH))
}

/// A stream of random formulas for property tests that need many samples
/// from one seed.
pub struct FormulaSampler {
    rng: ChaCha8Rng,
    agents: Vec<AgentId>,
    n_props: usize,
}

impl FormulaSampler {
    pub fn new(seed: u64, agents: &[AgentId], n_props: usize) -> FormulaSampler {
        FormulaSampler {
            rng: stream_rng(seed, 1),
            agents: agents.to_vec(),
            n_props,
        }
    }

    /// Formula of height exactly bounded by `depth` (leaves may stop early).
    pub fn sample(&mut self, depth: usize) -> Formula {
        FormulaGen::new(&mut self.rng, self.n_props, &self.agents).formula(depth)
    }

    pub fn coalition(&mut self) -> Coalition {
        FormulaGen::new(&mut self.rng, self.n_props, &self.agents).coalition()
    }
}

/// Inputs of a soundness sweep. `params` carries the master seed and the
/// upper bounds for per-game sizes.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub params: GenParams,
    pub games: usize,
    pub instances_per_schema: usize,
    /// Extra games checked after the random ones.
    pub pinned: Vec<Game>,
}

impl SweepConfig {
    pub fn new(seed: u64, games: usize, instances_per_schema: usize) -> SweepConfig {
        SweepConfig {
            params: GenParams::with_seed(seed),
            games,
            instances_per_schema,
            pinned: Vec::new(),
        }
    }
}

/// The random games of a sweep, in order (pinned games not included).
pub fn sweep_games(config: &SweepConfig) -> Vec<Game> {
    (0..config.games)
        .into_par_iter()
        .map(|i| sweep_game(config, i).0)
        .collect()
}

fn sweep_game(config: &SweepConfig, index: usize) -> (Game, ChaCha8Rng, GenParams) {
    let mut rng = stream_rng(config.params.seed, index as u64);
    let sizes = config.params.draw(&mut rng);
    let game = generate_game(&mut rng, &sizes);
    (game, rng, sizes)
}

/// Name of the additional checks that are not axiom schemas.
pub const NECESSITATION: &str = "Necessitation";
pub const EMPTY_COALITION: &str = "EmptyCoalition";
pub const POSITIVE_INTROSPECTION: &str = "PositiveIntrospection";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub check: String,
    pub instances: u64,
    pub failures: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub check: String,
    pub game_index: usize,
    pub game: serde_json::Value,
    pub play: Option<usize>,
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub generator: &'static str,
    pub seed: u64,
    pub games: usize,
    pub pinned_games: usize,
    pub instances_per_schema: usize,
    pub totals: Vec<Tally>,
    pub failures: Vec<Counterexample>,
}

impl SweepReport {
    pub fn failure_count(&self) -> u64 {
        self.totals.iter().map(|t| t.failures).sum()
    }

    pub fn tally(&self, check: &str) -> Option<&Tally> {
        self.totals.iter().find(|t| t.check == check)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Draws a substitution for `schema`, honouring its side condition by
/// construction: `D` comes from the complement of `C` for joint
/// responsibility and is a superset of `C` for monotonicity.
fn sample_substitution(
    schema: Schema,
    fgen: &mut FormulaGen<'_>,
    max_depth: usize,
) -> Substitution {
    let mut sub = Substitution::phi(fgen.any(max_depth));
    if schema.uses_psi() {
        sub.psi = Some(fgen.any(max_depth));
    }
    if schema.uses_c() {
        sub.c = Some(fgen.coalition());
    }
    if schema.uses_d() {
        let c = sub.c.clone().unwrap_or_default();
        let extra = fgen.coalition();
        sub.d = Some(match schema {
            Schema::JointResponsibility => {
                extra.iter().filter(|a| !c.contains(a)).cloned().collect()
            }
            _ => c.union(&extra),
        });
    }
    sub
}

struct GameOutcome {
    tallies: Vec<Tally>,
    failures: Vec<Counterexample>,
}

/// How a sweep computes truth tables. The default is
/// [`Checker::evaluate_all`].
pub trait Semantics: Sync {
    fn truth(&self, checker: &Checker<'_>, f: &Formula) -> Result<Vec<bool>, EvalError>;
}

pub struct CheckerSemantics;

impl Semantics for CheckerSemantics {
    fn truth(&self, checker: &Checker<'_>, f: &Formula) -> Result<Vec<bool>, EvalError> {
        checker.evaluate_all(f).map(|t| t.truth)
    }
}

fn check_names() -> Vec<String> {
    Schema::ALL
        .iter()
        .map(|s| s.name().to_string())
        .chain([NECESSITATION, EMPTY_COALITION, POSITIVE_INTROSPECTION].map(String::from))
        .collect()
}

fn run_game<S: Semantics>(
    semantics: &S,
    game: &Game,
    game_index: usize,
    mut rng: ChaCha8Rng,
    n_props: usize,
    config: &SweepConfig,
) -> GameOutcome {
    let mut tallies: Vec<Tally> = check_names()
        .into_iter()
        .map(|check| Tally {
            check,
            instances: 0,
            failures: 0,
        })
        .collect();
    let mut failures = Vec::new();
    let checker = match Checker::new(game) {
        Ok(c) => c,
        Err(e) => {
            failures.push(Counterexample {
                check: "game".into(),
                game_index,
                game: game::to_json_value(game),
                play: None,
                instance: String::new(),
                error: Some(e.to_string()),
            });
            return GameOutcome { tallies, failures };
        }
    };
    let depth = config.params.formula_depth.min(MAX_FORMULA_DEPTH);
    let mut fgen = FormulaGen::new(&mut rng, n_props, &game.agents);

    let mut record = |slot: usize, f: &Formula, failures: &mut Vec<Counterexample>| {
        tallies[slot].instances += 1;
        let (play, error) = match semantics.truth(&checker, f) {
            Ok(t) => match t.iter().position(|&x| !x) {
                None => return,
                Some(i) => (Some(i), None),
            },
            Err(e) => (None, Some(e.to_string())),
        };
        tallies[slot].failures += 1;
        failures.push(Counterexample {
            check: tallies[slot].check.clone(),
            game_index,
            game: game::to_json_value(game),
            play,
            instance: f.to_string(),
            error,
        });
    };

    let nec_slot = Schema::ALL.len();
    for (slot, schema) in Schema::ALL.into_iter().enumerate() {
        for _ in 0..config.instances_per_schema {
            let sub = sample_substitution(schema, &mut fgen, depth);
            let instance = instantiate_schema(schema, &sub).expect("sampled substitution fits");
            record(slot, &instance, &mut failures);
            // Necessitation preserves validity.
            record(nec_slot, &Formula::nec(instance), &mut failures);
        }
    }
    for _ in 0..config.instances_per_schema {
        let phi = fgen.any(depth);
        record(
            nec_slot + 1,
            &Formula::not(Formula::blame(Coalition::empty(), phi)),
            &mut failures,
        );
        let phi = fgen.any(depth);
        record(
            nec_slot + 2,
            &Formula::implies(Formula::nec(phi.clone()), Formula::nec(Formula::nec(phi))),
            &mut failures,
        );
    }
    GameOutcome { tallies, failures }
}

/// Checks every axiom schema on random games with the standard evaluator.
pub fn soundness_sweep(config: &SweepConfig) -> SweepReport {
    soundness_sweep_with(config, &CheckerSemantics)
}

/// Sweep with a custom evaluator; used to confirm the sweep notices a broken
/// one.
pub fn soundness_sweep_with<S: Semantics>(config: &SweepConfig, semantics: &S) -> SweepReport {
    let random = config.games;
    let outcomes: Vec<GameOutcome> = (0..random + config.pinned.len())
        .into_par_iter()
        .map(|i| {
            if i < random {
                let (game, rng, sizes) = sweep_game(config, i);
                run_game(semantics, &game, i, rng, sizes.n_props, config)
            } else {
                let game = &config.pinned[i - random];
                let rng = stream_rng(config.params.seed, i as u64);
                run_game(semantics, game, i, rng, config.params.n_props, config)
            }
        })
        .collect();

    let mut totals: Vec<Tally> = check_names()
        .into_iter()
        .map(|check| Tally {
            check,
            instances: 0,
            failures: 0,
        })
        .collect();
    let mut failures = Vec::new();
    for o in outcomes {
        for (t, g) in totals.iter_mut().zip(o.tallies) {
            t.instances += g.instances;
            t.failures += g.failures;
        }
        failures.extend(o.failures);
    }
    SweepReport {
        generator: "ChaCha8",
        seed: config.params.seed,
        games: config.games,
        pinned_games: config.pinned.len(),
        instances_per_schema: config.instances_per_schema,
        totals,
        failures,
    }
}

/// Single-line corruptions of a proof, each labelled. Every one of them
/// should be rejected by the kernel.
pub fn proof_mutants(p: &Proof) -> Vec<(String, Proof)> {
    let mut out: Vec<(String, Proof)> = Vec::new();
    let n = p.lines.len();
    let mut push = |label: String, m: Proof| {
        if m != *p {
            out.push((label, m));
        }
    };
    let flip = |f: &Formula| match f {
        Formula::Not(g) => g.as_ref().clone(),
        other => Formula::not(other.clone()),
    };

    for (k, line) in p.lines.iter().enumerate() {
        let num = k + 1;
        let mut m = p.clone();
        m.lines[k].formula = flip(&line.formula);
        push(format!("line {num}: negate formula"), m);

        if line.just != Justification::Taut && !is_tautology(&line.formula).unwrap_or(true) {
            let mut m = p.clone();
            m.lines[k].just = Justification::Taut;
            push(format!("line {num}: claim tautology"), m);
        }

        match &line.just {
            Justification::Mp(i, j) => {
                let mut m = p.clone();
                m.lines[k].just = Justification::Mp(*j, *i);
                push(format!("line {num}: swap modus ponens operands"), m);
                let mut m = p.clone();
                m.lines[k].just = Justification::Mp(*i, k);
                push(format!("line {num}: modus ponens on itself"), m);
            }
            Justification::Nec(_) => {
                let mut m = p.clone();
                m.lines[k].just = Justification::Nec(k);
                push(format!("line {num}: necessitation of itself"), m);
            }
            Justification::Axiom(schema, sub) => {
                for other in Schema::ALL {
                    if other != *schema {
                        let mut m = p.clone();
                        m.lines[k].just = Justification::Axiom(other, sub.clone());
                        push(format!("line {num}: cite {other} instead of {schema}"), m);
                    }
                }
                let c = sub.c.clone().unwrap_or_default();
                let d = sub.d.clone().unwrap_or_default();
                let broken = match schema {
                    Schema::JointResponsibility if !c.is_empty() => Some((c.clone(), c.union(&d))),
                    Schema::JointResponsibility => Some((d.clone(), d.clone())),
                    Schema::Monotonicity => {
                        let outsider = AgentId::new("zz_outsider").expect("valid name");
                        Some((c.union(&Coalition::new([outsider])), d.clone()))
                    }
                    _ => None,
                };
                if let Some((c2, d2)) = broken {
                    let mut m = p.clone();
                    let mut s2 = sub.clone();
                    s2.c = Some(c2);
                    s2.d = Some(d2);
                    m.lines[k].just = Justification::Axiom(*schema, s2);
                    push(format!("line {num}: violate side condition of {schema}"), m);
                }
            }
            Justification::Hyp(h) => {
                let mut m = p.clone();
                let boxed = Formula::nec(p.hypotheses[*h].clone());
                m.lines.push(crate::proof::Line {
                    formula: boxed.clone(),
                    just: Justification::Nec(k),
                });
                m.claimed = boxed;
                push(
                    format!("line {}: necessitate hypothesis line {num}", n + 1),
                    m,
                );
            }
            Justification::Taut => {}
        }
    }
    let mut m = p.clone();
    m.claimed = flip(&p.claimed);
    push("claim: negate".into(), m);
    out
}
