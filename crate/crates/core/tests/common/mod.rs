//! Reference evaluator for tests. It works on the game document directly:
//! strategies are explicit maps from agents to action names, built by
//! extending partial maps one agent at a time, and agreement is checked
//! against each play's profile map.

#![allow(dead_code)]

use std::collections::BTreeMap;

use blamelogic::{AgentId, Coalition, Formula, Game};

pub fn strategies(game: &Game, c: &Coalition) -> Vec<BTreeMap<AgentId, String>> {
    let mut out = vec![BTreeMap::new()];
    for agent in c.iter() {
        out = out
            .into_iter()
            .flat_map(|partial| {
                game.actions.iter().map(move |act| {
                    let mut s = partial.clone();
                    s.insert(agent.clone(), act.clone());
                    s
                })
            })
            .collect();
    }
    out
}

/// Truth of `f` at every play.
pub fn oracle(game: &Game, f: &Formula) -> Vec<bool> {
    let n = game.plays.len();
    let un = |g: &Formula, op: &dyn Fn(bool) -> bool| oracle(game, g).into_iter().map(op).collect();
    let bin = |a: &Formula, b: &Formula, op: &dyn Fn(bool, bool) -> bool| {
        oracle(game, a)
            .into_iter()
            .zip(oracle(game, b))
            .map(|(x, y)| op(x, y))
            .collect()
    };
    match f {
        Formula::Prop(p) => (0..n)
            .map(|i| game.valuation.get(p).is_some_and(|s| s.contains(&i)))
            .collect(),
        Formula::Top => vec![true; n],
        Formula::Bottom => vec![false; n],
        Formula::Not(g) => un(g, &|x| !x),
        Formula::Implies(a, b) => bin(a, b, &|x, y| !x || y),
        Formula::And(a, b) => bin(a, b, &|x, y| x && y),
        Formula::Or(a, b) => bin(a, b, &|x, y| x || y),
        Formula::Iff(a, b) => bin(a, b, &|x, y| x == y),
        Formula::Necessity(g) => {
            let all = oracle(game, g).into_iter().all(|x| x);
            vec![all; n]
        }
        Formula::Blame(c, g) => {
            let body = oracle(game, g);
            let prevented = strategies(game, c).into_iter().any(|s| {
                game.plays.iter().zip(&body).all(|(play, &holds)| {
                    let agree = s.iter().all(|(a, act)| play.profile.get(a) == Some(act));
                    !(agree && holds)
                })
            });
            body.into_iter().map(|x| x && prevented).collect()
        }
    }
}

/// Every subformula occurrence, root first.
pub fn subformulas(f: &Formula) -> Vec<&Formula> {
    let mut out = vec![f];
    let mut i = 0;
    while i < out.len() {
        let node = out[i];
        out.extend(node.children());
        i += 1;
    }
    out
}
