//! Bundled derivations.
//!
//! Each script is a concrete instance of a derived theorem or derived rule of
//! the blame logic, with atoms `p`, `q`, `r` and agents `a`, `b` (and `c` for
//! the three-coalition instance). Propositional reasoning steps are written
//! as a single tautology `P1 -> (P2 -> ... -> C)` followed by Modus Ponens on
//! each premise; there is no deduction-theorem rule.

use crate::formula::{Coalition, Formula};
use crate::parser::parse;
use crate::proof::{instantiate_schema, Justification, Line, Proof, Schema, Substitution};

/// Names of every bundled script, in listing order.
pub const SCRIPT_NAMES: [&str; 9] = [
    "lemma1",
    "lemma2",
    "lemma3_instance",
    "lemma4",
    "lemma5_n2",
    "lemma5_n3",
    "lemma6_n2",
    "lemma7",
    "lemma8_n2",
];

fn f(text: &str) -> Formula {
    parse(text).expect("bundled formula parses")
}

fn coalition(names: &[&str]) -> Coalition {
    Coalition::from_names(names.iter()).expect("bundled agent names are valid")
}

struct Script {
    hypotheses: Vec<Formula>,
    lines: Vec<Line>,
}

impl Script {
    fn new(hypotheses: &[&str]) -> Script {
        Script {
            hypotheses: hypotheses.iter().map(|h| f(h)).collect(),
            lines: Vec::new(),
        }
    }

    fn push(&mut self, formula: Formula, just: Justification) -> usize {
        self.lines.push(Line { formula, just });
        self.lines.len() - 1
    }

    fn formula(&self, line: usize) -> &Formula {
        &self.lines[line].formula
    }

    fn hyp(&mut self, k: usize) -> usize {
        let h = self.hypotheses[k].clone();
        self.push(h, Justification::Hyp(k))
    }

    fn taut(&mut self, formula: Formula) -> usize {
        self.push(formula, Justification::Taut)
    }

    fn axiom(&mut self, schema: Schema, sub: Substitution) -> usize {
        let formula = instantiate_schema(schema, &sub).expect("bundled instance is well formed");
        self.push(formula, Justification::Axiom(schema, sub))
    }

    fn mp(&mut self, minor: usize, major: usize) -> usize {
        let conclusion = match self.formula(major) {
            Formula::Implies(_, b) => b.as_ref().clone(),
            other => panic!("bundled mp on a non-implication {other}"),
        };
        self.push(conclusion, Justification::Mp(minor, major))
    }

    fn nec(&mut self, line: usize) -> usize {
        let formula = Formula::nec(self.formula(line).clone());
        self.push(formula, Justification::Nec(line))
    }

    /// Derives `conclusion` from the premise lines by one tautology and a
    /// chain of Modus Ponens steps.
    fn chain(&mut self, premises: &[usize], conclusion: Formula) -> usize {
        let implication = premises.iter().rev().fold(conclusion, |acc, &p| {
            Formula::implies(self.formula(p).clone(), acc)
        });
        let mut major = self.taut(implication);
        for &p in premises {
            major = self.mp(p, major);
        }
        major
    }

    fn finish(self) -> Proof {
        let claimed = self
            .lines
            .last()
            .expect("script is nonempty")
            .formula
            .clone();
        Proof {
            hypotheses: self.hypotheses,
            lines: self.lines,
            claimed,
        }
    }
}

/// `|- N phi -> N N phi`, returning the line of that theorem.
fn positive_introspection(s: &mut Script, phi: &Formula) -> usize {
    let n_phi = Formula::nec(phi.clone());
    let not_n_phi = Formula::not(n_phi.clone());
    let truth = s.axiom(Schema::TruthN, Substitution::phi(not_n_phi.clone()));
    let outer = s.axiom(
        Schema::NegativeIntrospection,
        Substitution::phi(not_n_phi.clone()),
    );
    let inner = s.axiom(
        Schema::NegativeIntrospection,
        Substitution::phi(phi.clone()),
    );
    // !N !N phi -> N phi
    let back = s.chain(
        &[inner],
        Formula::implies(Formula::not(Formula::nec(not_n_phi.clone())), n_phi.clone()),
    );
    let nec_back = s.nec(back);
    let dist = s.axiom(
        Schema::Distributivity,
        Substitution::phi(Formula::not(Formula::nec(not_n_phi))).with_psi(n_phi.clone()),
    );
    let lifted = s.mp(nec_back, dist);
    s.chain(
        &[truth, outer, lifted],
        Formula::implies(n_phi.clone(), Formula::nec(n_phi)),
    )
}

fn lemma1() -> Proof {
    let a = coalition(&["a"]);
    let mut s = Script::new(&[]);
    let truth = s.axiom(Schema::TruthB, Substitution::phi(f("p")).with_c(a.clone()));
    let nec = s.nec(truth);
    let cause = s.axiom(
        Schema::BlameForCause,
        Substitution::phi(f("B{a} p")).with_psi(f("p")).with_c(a),
    );
    let curried = s.mp(nec, cause);
    let contraction = s.taut(Formula::implies(
        s.formula(curried).clone(),
        f("B{a} p -> B{a} B{a} p"),
    ));
    s.mp(curried, contraction);
    s.finish()
}

fn lemma2() -> Proof {
    let a = coalition(&["a"]);
    let mut s = Script::new(&[]);
    let fair = s.axiom(Schema::Fairness, Substitution::phi(f("p")).with_c(a));
    let contra = s.chain(&[fair], f("!N (p -> B{a} p) -> !B{a} p"));
    let nec = s.nec(contra);
    let dist = s.axiom(
        Schema::Distributivity,
        Substitution::phi(f("!N (p -> B{a} p)")).with_psi(f("!B{a} p")),
    );
    let lifted = s.mp(nec, dist);
    let intro = s.axiom(
        Schema::NegativeIntrospection,
        Substitution::phi(f("p -> B{a} p")),
    );
    let truth = s.axiom(Schema::TruthN, Substitution::phi(f("p -> B{a} p")));
    s.chain(&[intro, lifted, truth], f("<N> B{a} p -> p -> B{a} p"));
    s.finish()
}

fn lemma3_instance() -> Proof {
    let a = coalition(&["a"]);
    let mut s = Script::new(&[]);
    let back = s.taut(f("q | p -> p | q"));
    let nec = s.nec(back);
    let cause = s.axiom(
        Schema::BlameForCause,
        Substitution::phi(f("q | p"))
            .with_psi(f("p | q"))
            .with_c(a.clone()),
    );
    let step = s.mp(nec, cause);
    let truth = s.axiom(Schema::TruthB, Substitution::phi(f("p | q")).with_c(a));
    s.chain(&[step, truth], f("B{a} (p | q) -> B{a} (q | p)"));
    s.finish()
}

fn lemma4() -> Proof {
    let mut s = Script::new(&["p"]);
    let truth = s.axiom(Schema::TruthN, Substitution::phi(f("!p")));
    let contra = s.taut(f("(N !p -> !p) -> p -> <N> p"));
    let imp = s.mp(truth, contra);
    let h = s.hyp(0);
    s.mp(h, imp);
    s.finish()
}

fn lemma5_n2() -> Proof {
    let mut s = Script::new(&["<N> B{a} p", "<N> B{b} q", "p | q"]);
    let joint = s.axiom(
        Schema::JointResponsibility,
        Substitution::phi(f("p"))
            .with_psi(f("q"))
            .with_c(coalition(&["a"]))
            .with_d(coalition(&["b"])),
    );
    let h1 = s.hyp(0);
    let h2 = s.hyp(1);
    let both = s.chain(&[h1, h2], f("<N> B{a} p & <N> B{b} q"));
    let imp = s.mp(both, joint);
    let h3 = s.hyp(2);
    s.mp(h3, imp);
    s.finish()
}

fn lemma5_n3() -> Proof {
    let mut s = Script::new(&["<N> B{a} p", "<N> B{b} q", "<N> B{c} r", "p | q | r"]);
    let h: Vec<usize> = (0..4).map(|k| s.hyp(k)).collect();
    let abc = coalition(&["a", "b", "c"]);

    // Case p | q: {a,b} is blamable for p | q, so <N> B{a,b} (p | q), then
    // join with {c}.
    let joint_ab = s.axiom(
        Schema::JointResponsibility,
        Substitution::phi(f("p"))
            .with_psi(f("q"))
            .with_c(coalition(&["a"]))
            .with_d(coalition(&["b"])),
    );
    let joint_ab_c = s.axiom(
        Schema::JointResponsibility,
        Substitution::phi(f("p | q"))
            .with_psi(f("r"))
            .with_c(coalition(&["a", "b"]))
            .with_d(coalition(&["c"])),
    );
    let some_ab = s.axiom(Schema::TruthN, Substitution::phi(f("!B{a,b} (p | q)")));
    let left = s.chain(
        &[h[0], h[1], h[2], h[3], joint_ab, joint_ab_c, some_ab],
        f("p | q -> B{a,b,c} (p | q | r)"),
    );

    // Case q | r: {b,c} is blamable for q | r, join {a} with it, then move
    // from p | (q | r) to (p | q) | r.
    let joint_bc = s.axiom(
        Schema::JointResponsibility,
        Substitution::phi(f("q"))
            .with_psi(f("r"))
            .with_c(coalition(&["b"]))
            .with_d(coalition(&["c"])),
    );
    let some_bc = s.axiom(Schema::TruthN, Substitution::phi(f("!B{b,c} (q | r)")));
    let joint_a_bc = s.axiom(
        Schema::JointResponsibility,
        Substitution::phi(f("p"))
            .with_psi(f("q | r"))
            .with_c(coalition(&["a"]))
            .with_d(coalition(&["b", "c"])),
    );
    let reassoc = s.taut(f("p | q | r -> p | (q | r)"));
    let nec_reassoc = s.nec(reassoc);
    let cause = s.axiom(
        Schema::BlameForCause,
        Substitution::phi(f("p | q | r"))
            .with_psi(f("p | (q | r)"))
            .with_c(abc),
    );
    let moved = s.mp(nec_reassoc, cause);
    let right = s.chain(
        &[h[0], h[1], h[2], h[3], joint_bc, some_bc, joint_a_bc, moved],
        f("q | r -> B{a,b,c} (p | q | r)"),
    );

    s.chain(&[h[3], left, right], f("B{a,b,c} (p | q | r)"));
    s.finish()
}

fn lemma6_n2() -> Proof {
    let mut s = Script::new(&["N p", "N q"]);
    let base = s.taut(f("p -> q -> p & q"));
    let nec = s.nec(base);
    let dist1 = s.axiom(
        Schema::Distributivity,
        Substitution::phi(f("p")).with_psi(f("q -> p & q")),
    );
    let step1 = s.mp(nec, dist1);
    let h1 = s.hyp(0);
    let step2 = s.mp(h1, step1);
    let dist2 = s.axiom(
        Schema::Distributivity,
        Substitution::phi(f("q")).with_psi(f("p & q")),
    );
    let step3 = s.mp(step2, dist2);
    let h2 = s.hyp(1);
    s.mp(h2, step3);
    s.finish()
}

fn lemma7() -> Proof {
    let mut s = Script::new(&[]);
    positive_introspection(&mut s, &f("p"));
    s.finish()
}

fn lemma8_n2() -> Proof {
    let mut s = Script::new(&["<N> B{a} p", "<N> B{b} q", "N (r -> p | q)"]);
    let ab = coalition(&["a", "b"]);
    let joint = s.axiom(
        Schema::JointResponsibility,
        Substitution::phi(f("p"))
            .with_psi(f("q"))
            .with_c(coalition(&["a"]))
            .with_d(coalition(&["b"])),
    );
    let truth = s.axiom(Schema::TruthN, Substitution::phi(f("r -> p | q")));
    let cause = s.axiom(
        Schema::BlameForCause,
        Substitution::phi(f("r")).with_psi(f("p | q")).with_c(ab),
    );
    // Hypothesis-free: each hypothesis, taken as an antecedent, gives
    // r -> B{a,b} r.
    let local = s.chain(
        &[joint, truth, cause],
        f("<N> B{a} p -> <N> B{b} q -> N (r -> p | q) -> r -> B{a,b} r"),
    );
    let mut boxed = s.nec(local);
    let antecedents = [
        (
            "<N> B{a} p",
            "<N> B{b} q -> N (r -> p | q) -> r -> B{a,b} r",
        ),
        ("<N> B{b} q", "N (r -> p | q) -> r -> B{a,b} r"),
        ("N (r -> p | q)", "r -> B{a,b} r"),
    ];
    for (k, (antecedent, rest)) in antecedents.into_iter().enumerate() {
        let dist = s.axiom(
            Schema::Distributivity,
            Substitution::phi(f(antecedent)).with_psi(f(rest)),
        );
        let lifted = s.mp(boxed, dist);
        // N of the hypothesis: negative introspection for the <N> ones,
        // positive introspection for the N one.
        let to_boxed = if k < 2 {
            let inner = match f(antecedent).as_possible() {
                Some(g) => Formula::not(g.clone()),
                None => unreachable!("first two hypotheses are <N> formulas"),
            };
            s.axiom(Schema::NegativeIntrospection, Substitution::phi(inner))
        } else {
            positive_introspection(&mut s, &f("r -> p | q"))
        };
        let h = s.hyp(k);
        let boxed_h = s.mp(h, to_boxed);
        boxed = s.mp(boxed_h, lifted);
    }
    s.finish()
}

/// Looks up a bundled script by name.
pub fn bundled_script(name: &str) -> Option<Proof> {
    Some(match name {
        "lemma1" => lemma1(),
        "lemma2" => lemma2(),
        "lemma3_instance" => lemma3_instance(),
        "lemma4" => lemma4(),
        "lemma5_n2" => lemma5_n2(),
        "lemma5_n3" => lemma5_n3(),
        "lemma6_n2" => lemma6_n2(),
        "lemma7" => lemma7(),
        "lemma8_n2" => lemma8_n2(),
        _ => return None,
    })
}

/// Every bundled script with its name.
pub fn bundled_scripts() -> Vec<(&'static str, Proof)> {
    SCRIPT_NAMES
        .iter()
        .map(|&name| (name, bundled_script(name).expect("listed script exists")))
        .collect()
}
