//! Acceptance run. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use blamelogic::harness::{
    proof_mutants, soundness_sweep, sweep_games, FormulaSampler, SweepConfig, NECESSITATION,
};
use blamelogic::{
    bundled_scripts, check_proof, evaluate_all, lopez_game, parse, valid_in_game, AgentId, Checker,
    Coalition, Formula, Game, Schema, Validity,
};

const SEED: u64 = 20_240_601;
const SWEEP_GAMES: usize = 500;
const INSTANCES: usize = 20;
/// Formula height for the naive-versus-cached comparison: the generator's
/// maximum. The literal recursion costs about plays^(modal nesting), which
/// at this height is still under a second for the 10,000 formulas.
const ORACLE_DEPTH: usize = 6;

type Outcome = Result<String, String>;

fn sweep_config() -> SweepConfig {
    SweepConfig::new(SEED, SWEEP_GAMES, INSTANCES)
}

fn soundness_sweep_is_clean() -> Outcome {
    let start = Instant::now();
    let report = soundness_sweep(&sweep_config());
    let elapsed = start.elapsed();
    let schema_instances: u64 = Schema::ALL
        .iter()
        .map(|s| report.tally(s.name()).map_or(0, |t| t.instances))
        .sum();
    let expected = (SWEEP_GAMES * INSTANCES * Schema::ALL.len()) as u64;
    if schema_instances != expected {
        return Err(format!(
            "{schema_instances} schema instances, expected {expected}"
        ));
    }
    if report.failure_count() != 0 {
        let first = &report.failures[0];
        return Err(format!(
            "{} failures; first: {} `{}` at play {:?} of game {}",
            report.failure_count(),
            first.check,
            first.instance,
            first.play,
            first.game_index
        ));
    }
    if elapsed > Duration::from_secs(60) {
        return Err(format!("clean but took {elapsed:.1?}"));
    }
    Ok(format!(
        "{schema_instances} schema instances and {} necessitations over {SWEEP_GAMES} games, 0 failures, {elapsed:.1?}",
        report.tally(NECESSITATION).map_or(0, |t| t.instances)
    ))
}

fn lopez_golden_run() -> Outcome {
    let g = lopez_game();
    let table = |s: &str| evaluate_all(&g, &parse(s).unwrap()).map(|t| t.truth);
    let blame = table("B{lopez} dead").map_err(|e| e.to_string())?;
    if blame != [false, false, true] {
        return Err(format!("B{{lopez}} dead = {blame:?}"));
    }
    let nobody = table("B{} dead").map_err(|e| e.to_string())?;
    if nobody != [false, false, false] {
        return Err(format!("B{{}} dead = {nobody:?}"));
    }
    let checker = Checker::new(&g).map_err(|e| e.to_string())?;
    let report = checker
        .blamable_coalitions(2, &parse("dead").unwrap(), 1)
        .map_err(|e| e.to_string())?;
    let minimal: Vec<_> = report.minimal().collect();
    let lopez = Coalition::new([AgentId::new("lopez").unwrap()]);
    match minimal.as_slice() {
        [e] if e.coalition == lopez && e.witness.to_string() == "{lopez -> hide}" => {}
        _ => return Err(format!("blame report {}", report.to_json_value(&g))),
    }
    let json = report.to_json_value(&g);
    let expected = serde_json::json!({
        "play": 2,
        "formula": "dead",
        "blamable": [{"coalition": ["lopez"], "witness": {"lopez": "hide"}, "minimal": true}],
        "minimal": [["lopez"]]
    });
    if json != expected {
        return Err(format!("report JSON {json}"));
    }
    Ok("B{lopez} dead = [false,false,true], B{} dead all false, minimal {lopez} via {lopez -> hide}".into())
}

fn scripts_and_mutants() -> Outcome {
    let mut total = 0;
    for (name, proof) in bundled_scripts() {
        check_proof(&proof).map_err(|e| format!("{name}: {e}"))?;
        let mutants = proof_mutants(&proof);
        if mutants.len() < 20 {
            return Err(format!("{name}: only {} mutants", mutants.len()));
        }
        for (label, m) in &mutants {
            if check_proof(m).is_ok() {
                return Err(format!("{name}: mutant accepted: {label}"));
            }
        }
        total += mutants.len();
    }
    Ok(format!("9 scripts ok, {total} mutants all rejected"))
}

fn theorems_valid_on_sweep_games(games: &[Game]) -> Outcome {
    let mut names = Vec::new();
    for (name, proof) in bundled_scripts() {
        let flags = check_proof(&proof).map_err(|e| format!("{name}: {e}"))?;
        if !flags.last().copied().unwrap_or(false) {
            continue;
        }
        for (i, g) in games.iter().enumerate() {
            match valid_in_game(g, &proof.claimed) {
                Ok(Validity::Valid) => {}
                Ok(Validity::Counterexample(p)) => {
                    return Err(format!("{name}: fails at play {p} of sweep game {i}"))
                }
                Err(e) => return Err(format!("{name} on sweep game {i}: {e}")),
            }
        }
        names.push(name);
    }
    if names != ["lemma1", "lemma2", "lemma3_instance", "lemma7"] {
        return Err(format!("unexpected hypothesis-free scripts {names:?}"));
    }
    Ok(format!(
        "{} valid on all {} games",
        names.join(", "),
        games.len()
    ))
}

fn s5_block(games: &[Game]) -> Outcome {
    let mut checked = 0;
    for (i, g) in games.iter().enumerate() {
        let mut sampler = FormulaSampler::new(SEED ^ i as u64, &g.agents, 4);
        for _ in 0..INSTANCES {
            let phi = sampler.sample(6);
            let n = |x: Formula| Formula::nec(x);
            let instances = [
                Formula::implies(n(phi.clone()), phi.clone()),
                Formula::implies(n(phi.clone()), n(n(phi.clone()))),
                Formula::implies(
                    Formula::not(n(phi.clone())),
                    n(Formula::not(n(phi.clone()))),
                ),
            ];
            for inst in instances {
                match valid_in_game(g, &inst) {
                    Ok(Validity::Valid) => checked += 1,
                    other => return Err(format!("`{inst}` on sweep game {i}: {other:?}")),
                }
            }
        }
    }
    Ok(format!("{checked} instances valid"))
}

fn fairness_invariance(games: &[Game]) -> Outcome {
    let mut informative = 0;
    for (i, g) in games.iter().take(200).enumerate() {
        let mut sampler = FormulaSampler::new(SEED.wrapping_add(7 * i as u64), &g.agents, 4);
        let c = sampler.coalition();
        let phi = sampler.sample(4);
        let body = evaluate_all(g, &phi).map_err(|e| e.to_string())?.truth;
        let blame = evaluate_all(g, &Formula::blame(c.clone(), phi.clone()))
            .map_err(|e| e.to_string())?
            .truth;
        let mut values = body
            .iter()
            .zip(&blame)
            .filter(|(b, _)| **b)
            .map(|(_, v)| *v);
        if let Some(first) = values.next() {
            if values.clone().count() > 0 {
                informative += 1;
            }
            if values.any(|v| v != first) {
                return Err(format!("B{c} {phi} varies across plays of game {i}"));
            }
        }
    }
    Ok(format!(
        "200 triples, {informative} with several body plays, 0 violations"
    ))
}

fn oracle_equivalence(games: &[Game]) -> Outcome {
    let start = Instant::now();
    let mut compared = 0;
    for (i, g) in games.iter().take(200).enumerate() {
        let checker = Checker::new(g).map_err(|e| e.to_string())?;
        let mut sampler = FormulaSampler::new(SEED.rotate_left(17) ^ i as u64, &g.agents, 4);
        for _ in 0..50 {
            let phi = sampler.sample(ORACLE_DEPTH);
            let cached = checker.evaluate_all(&phi).map_err(|e| e.to_string())?.truth;
            let naive = (0..g.plays.len())
                .map(|p| checker.satisfies(p, &phi))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            if cached != naive {
                return Err(format!(
                    "`{phi}` on game {i}: cached {cached:?}, naive {naive:?}"
                ));
            }
            if common::oracle(g, &phi) != cached {
                return Err(format!(
                    "`{phi}` on game {i}: reference evaluator disagrees"
                ));
            }
            compared += 1;
        }
    }
    Ok(format!(
        "{compared} formulas of height <= {ORACLE_DEPTH} identical, {:.1?}",
        start.elapsed()
    ))
}

fn parser_round_trip() -> Outcome {
    let agents: Vec<AgentId> = ["a", "b", "c", "d"]
        .iter()
        .map(|a| AgentId::new(*a).unwrap())
        .collect();
    let mut sampler = FormulaSampler::new(SEED, &agents, 4);
    for _ in 0..10_000 {
        let f = sampler.sample(8);
        let text = f.to_string();
        let back = parse(&text).map_err(|e| format!("`{text}`: {e}"))?;
        if back != f {
            return Err(format!("`{text}` parses to a different formula"));
        }
        if back.to_string() != text {
            return Err(format!("`{text}` reprints as `{back}`"));
        }
    }
    Ok("10000 formulas of height <= 8".into())
}

fn main() {
    let start = Instant::now();
    let mut stderr = std::io::stderr();
    let mut failed = 0;
    let mut report = |n: u32, what: &str, outcome: Outcome| {
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        let _ = writeln!(stderr, "{tag} criterion {n} ({what}): {detail}");
    };

    let games = sweep_games(&sweep_config());
    report(1, "axiom soundness sweep", soundness_sweep_is_clean());
    report(2, "Lopez golden run", lopez_golden_run());
    report(3, "bundled scripts and mutants", scripts_and_mutants());
    report(
        4,
        "theorems valid on sweep games",
        theorems_valid_on_sweep_games(&games),
    );
    report(5, "S5 block", s5_block(&games));
    report(
        6,
        "blame constant across body plays",
        fairness_invariance(&games),
    );
    report(
        7,
        "cached versus naive evaluation",
        oracle_equivalence(&games),
    );
    report(8, "parser round trip", parser_round_trip());
    let elapsed = start.elapsed();
    let total = if elapsed < Duration::from_secs(300) {
        Ok(format!("acceptance run took {elapsed:.1?}"))
    } else {
        Err(format!("acceptance run took {elapsed:.1?}"))
    };
    report(9, "wall clock under 5 minutes", total);

    if failed > 0 {
        let _ = writeln!(std::io::stderr(), "{failed} criteria failed");
        std::process::exit(1);
    }
}
