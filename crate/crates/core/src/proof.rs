//! Hilbert-style proof checking.
//!
//! A proof is a list of lines. Each line is justified as a hypothesis, a
//! propositional tautology, an instance of an axiom schema, Modus Ponens on
//! two earlier lines, or Necessitation of an earlier line. Necessitation is
//! only allowed on hypothesis-free lines, so a proof with hypotheses `X`
//! establishes `X |- f` in the sense where hypotheses are closed under Modus
//! Ponens only.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{AgentId, Coalition, Formula};
use crate::parser::{parse, ParseError};

/// Most distinct atoms the tautology checker will enumerate.
pub const MAX_TAUTOLOGY_ATOMS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Schema {
    TruthN,
    TruthB,
    Distributivity,
    NegativeIntrospection,
    NoneToBlame,
    JointResponsibility,
    BlameForCause,
    Monotonicity,
    Fairness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideCondition {
    None,
    /// `C` and `D` share no agent.
    Disjoint,
    /// `C` is a subset of `D`.
    Subset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaMeta {
    Phi,
    Psi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoalitionMeta {
    C,
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoalitionTerm {
    Meta(CoalitionMeta),
    Empty,
    Union(CoalitionMeta, CoalitionMeta),
}

/// Formula pattern over metavariables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Template {
    Meta(FormulaMeta),
    Not(Box<Template>),
    Implies(Box<Template>, Box<Template>),
    And(Box<Template>, Box<Template>),
    Or(Box<Template>, Box<Template>),
    Necessity(Box<Template>),
    Blame(CoalitionTerm, Box<Template>),
}

mod tpl {
    use super::{CoalitionMeta, CoalitionTerm, FormulaMeta, Template};

    pub fn phi() -> Template {
        Template::Meta(FormulaMeta::Phi)
    }
    pub fn psi() -> Template {
        Template::Meta(FormulaMeta::Psi)
    }
    pub fn not(t: Template) -> Template {
        Template::Not(Box::new(t))
    }
    pub fn imp(a: Template, b: Template) -> Template {
        Template::Implies(Box::new(a), Box::new(b))
    }
    pub fn and(a: Template, b: Template) -> Template {
        Template::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Template, b: Template) -> Template {
        Template::Or(Box::new(a), Box::new(b))
    }
    pub fn nec(t: Template) -> Template {
        Template::Necessity(Box::new(t))
    }
    pub fn poss(t: Template) -> Template {
        not(nec(not(t)))
    }
    pub fn blame(c: CoalitionTerm, t: Template) -> Template {
        Template::Blame(c, Box::new(t))
    }
    pub fn b_c(t: Template) -> Template {
        blame(CoalitionTerm::Meta(CoalitionMeta::C), t)
    }
    pub fn b_d(t: Template) -> Template {
        blame(CoalitionTerm::Meta(CoalitionMeta::D), t)
    }
}

impl Schema {
    pub const ALL: [Schema; 9] = [
        Schema::TruthN,
        Schema::TruthB,
        Schema::Distributivity,
        Schema::NegativeIntrospection,
        Schema::NoneToBlame,
        Schema::JointResponsibility,
        Schema::BlameForCause,
        Schema::Monotonicity,
        Schema::Fairness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Schema::TruthN => "TruthN",
            Schema::TruthB => "TruthB",
            Schema::Distributivity => "Distributivity",
            Schema::NegativeIntrospection => "NegativeIntrospection",
            Schema::NoneToBlame => "NoneToBlame",
            Schema::JointResponsibility => "JointResponsibility",
            Schema::BlameForCause => "BlameForCause",
            Schema::Monotonicity => "Monotonicity",
            Schema::Fairness => "Fairness",
        }
    }

    pub fn template(self) -> Template {
        use tpl::*;
        match self {
            // N phi -> phi
            Schema::TruthN => imp(nec(phi()), phi()),
            // B_C phi -> phi
            Schema::TruthB => imp(b_c(phi()), phi()),
            // N(phi -> psi) -> (N phi -> N psi)
            Schema::Distributivity => imp(nec(imp(phi(), psi())), imp(nec(phi()), nec(psi()))),
            // !N phi -> N !N phi
            Schema::NegativeIntrospection => imp(not(nec(phi())), nec(not(nec(phi())))),
            // !B_{} phi
            Schema::NoneToBlame => not(blame(CoalitionTerm::Empty, phi())),
            // <N> B_C phi & <N> B_D psi -> (phi | psi -> B_{C u D} (phi | psi))
            Schema::JointResponsibility => imp(
                and(poss(b_c(phi())), poss(b_d(psi()))),
                imp(
                    or(phi(), psi()),
                    blame(
                        CoalitionTerm::Union(CoalitionMeta::C, CoalitionMeta::D),
                        or(phi(), psi()),
                    ),
                ),
            ),
            // N(phi -> psi) -> (B_C psi -> (phi -> B_C phi))
            Schema::BlameForCause => imp(
                nec(imp(phi(), psi())),
                imp(b_c(psi()), imp(phi(), b_c(phi()))),
            ),
            // B_C phi -> B_D phi
            Schema::Monotonicity => imp(b_c(phi()), b_d(phi())),
            // B_C phi -> N(phi -> B_C phi)
            Schema::Fairness => imp(b_c(phi()), nec(imp(phi(), b_c(phi())))),
        }
    }

    pub fn side_condition(self) -> SideCondition {
        match self {
            Schema::JointResponsibility => SideCondition::Disjoint,
            Schema::Monotonicity => SideCondition::Subset,
            _ => SideCondition::None,
        }
    }

    pub fn uses_psi(self) -> bool {
        matches!(
            self,
            Schema::Distributivity | Schema::JointResponsibility | Schema::BlameForCause
        )
    }

    pub fn uses_c(self) -> bool {
        matches!(
            self,
            Schema::TruthB
                | Schema::JointResponsibility
                | Schema::BlameForCause
                | Schema::Monotonicity
                | Schema::Fairness
        )
    }

    pub fn uses_d(self) -> bool {
        matches!(self, Schema::JointResponsibility | Schema::Monotonicity)
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown axiom schema {0:?}")]
pub struct UnknownSchema(pub String);

impl FromStr for Schema {
    type Err = UnknownSchema;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Schema::ALL
            .into_iter()
            .find(|schema| schema.name() == s)
            .ok_or_else(|| UnknownSchema(s.to_string()))
    }
}

/// Bindings for the metavariables of a schema.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    pub phi: Option<Formula>,
    pub psi: Option<Formula>,
    pub c: Option<Coalition>,
    pub d: Option<Coalition>,
}

impl Substitution {
    pub fn phi(phi: Formula) -> Self {
        Substitution {
            phi: Some(phi),
            ..Default::default()
        }
    }

    pub fn with_psi(mut self, psi: Formula) -> Self {
        self.psi = Some(psi);
        self
    }

    pub fn with_c(mut self, c: Coalition) -> Self {
        self.c = Some(c);
        self
    }

    pub fn with_d(mut self, d: Coalition) -> Self {
        self.d = Some(d);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("{schema}: metavariable {meta} is not bound")]
    Unbound { schema: Schema, meta: &'static str },
    #[error("{schema}: metavariable {meta} is not used by this schema")]
    Extra { schema: Schema, meta: &'static str },
    #[error("{schema}: side condition violated, {condition}")]
    SideCondition {
        schema: Schema,
        condition: &'static str,
    },
}

fn substitute(t: &Template, phi: &Formula, psi: &Formula, c: &Coalition, d: &Coalition) -> Formula {
    let go = |t: &Template| substitute(t, phi, psi, c, d);
    match t {
        Template::Meta(FormulaMeta::Phi) => phi.clone(),
        Template::Meta(FormulaMeta::Psi) => psi.clone(),
        Template::Not(a) => Formula::not(go(a)),
        Template::Implies(a, b) => Formula::implies(go(a), go(b)),
        Template::And(a, b) => Formula::and(go(a), go(b)),
        Template::Or(a, b) => Formula::or(go(a), go(b)),
        Template::Necessity(a) => Formula::nec(go(a)),
        Template::Blame(term, a) => {
            let coalition = match term {
                CoalitionTerm::Empty => Coalition::empty(),
                CoalitionTerm::Meta(CoalitionMeta::C) => c.clone(),
                CoalitionTerm::Meta(CoalitionMeta::D) => d.clone(),
                CoalitionTerm::Union(..) => c.union(d),
            };
            Formula::blame(coalition, go(a))
        }
    }
}

/// The instance of `schema` under `sub`.
pub fn instantiate_schema(schema: Schema, sub: &Substitution) -> Result<Formula, SchemaError> {
    fn bound<T>(
        schema: Schema,
        meta: &'static str,
        used: bool,
        value: &Option<T>,
    ) -> Result<(), SchemaError> {
        match (used, value.is_some()) {
            (true, false) => Err(SchemaError::Unbound { schema, meta }),
            (false, true) => Err(SchemaError::Extra { schema, meta }),
            _ => Ok(()),
        }
    }
    bound(schema, "phi", true, &sub.phi)?;
    bound(schema, "psi", schema.uses_psi(), &sub.psi)?;
    bound(schema, "C", schema.uses_c(), &sub.c)?;
    bound(schema, "D", schema.uses_d(), &sub.d)?;

    let empty = Coalition::empty();
    let c = sub.c.as_ref().unwrap_or(&empty);
    let d = sub.d.as_ref().unwrap_or(&empty);
    match schema.side_condition() {
        SideCondition::Disjoint if !c.is_disjoint(d) => {
            return Err(SchemaError::SideCondition {
                schema,
                condition: "C and D must be disjoint",
            })
        }
        SideCondition::Subset if !c.is_subset(d) => {
            return Err(SchemaError::SideCondition {
                schema,
                condition: "C must be a subset of D",
            })
        }
        _ => {}
    }
    let phi = sub.phi.as_ref().expect("checked above");
    let psi = sub.psi.as_ref().unwrap_or(&Formula::Bottom).clone();
    Ok(substitute(&schema.template(), phi, &psi, c, d))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula has {atoms} propositional atoms, more than the limit of {MAX_TAUTOLOGY_ATOMS}")]
pub struct TooManyAtoms {
    pub atoms: usize,
}

/// Maximal subformulas rooted at a proposition, `N` or `B`, in order of first
/// occurrence.
pub fn propositional_atoms(f: &Formula) -> Vec<&Formula> {
    fn walk<'f>(f: &'f Formula, seen: &mut HashMap<&'f Formula, ()>, out: &mut Vec<&'f Formula>) {
        match f {
            Formula::Prop(_) | Formula::Necessity(_) | Formula::Blame(..) => {
                if seen.insert(f, ()).is_none() {
                    out.push(f);
                }
            }
            _ => {
                for c in f.children() {
                    walk(c, seen, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(f, &mut HashMap::new(), &mut out);
    out
}

/// Whether `f` is true under every assignment to its propositional atoms,
/// with modal subformulas treated as opaque atoms.
pub fn is_tautology(f: &Formula) -> Result<bool, TooManyAtoms> {
    let atoms = propositional_atoms(f);
    if atoms.len() > MAX_TAUTOLOGY_ATOMS {
        return Err(TooManyAtoms { atoms: atoms.len() });
    }
    let index: HashMap<&Formula, usize> = atoms.iter().enumerate().map(|(i, a)| (*a, i)).collect();
    fn eval(f: &Formula, index: &HashMap<&Formula, usize>, bits: u32) -> bool {
        match f {
            Formula::Top => true,
            Formula::Bottom => false,
            Formula::Not(a) => !eval(a, index, bits),
            Formula::Implies(a, b) => !eval(a, index, bits) || eval(b, index, bits),
            Formula::And(a, b) => eval(a, index, bits) && eval(b, index, bits),
            Formula::Or(a, b) => eval(a, index, bits) || eval(b, index, bits),
            Formula::Iff(a, b) => eval(a, index, bits) == eval(b, index, bits),
            atom => bits >> index[atom] & 1 == 1,
        }
    }
    Ok((0..1u32 << atoms.len()).all(|bits| eval(f, &index, bits)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    /// Index into the proof's hypotheses.
    Hyp(usize),
    Taut,
    Axiom(Schema, Substitution),
    /// `Mp(i, j)`: line `j` is `line i -> this line`.
    Mp(usize, usize),
    Nec(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub formula: Formula,
    pub just: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub hypotheses: Vec<Formula>,
    pub lines: Vec<Line>,
    pub claimed: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofFailure {
    #[error("proof has no lines")]
    Empty,
    #[error("reference to line {0} is not an earlier line")]
    BadLineReference(usize),
    #[error("there is no hypothesis {0}")]
    BadHypothesisReference(usize),
    #[error("formula differs from hypothesis {0}")]
    HypothesisMismatch(usize),
    #[error("not a propositional tautology")]
    NotATautology,
    #[error(transparent)]
    TooManyAtoms(#[from] TooManyAtoms),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("formula is not the {schema} instance {expected}")]
    AxiomMismatch { schema: Schema, expected: Formula },
    #[error("modus ponens: line {major} is not an implication from line {minor} to this formula")]
    ModusPonensMismatch { minor: usize, major: usize },
    #[error("necessitation: formula is not N applied to line {0}")]
    NecessitationMismatch(usize),
    #[error("necessitation under hypothesis: line {0} depends on hypotheses")]
    NecessitationUnderHypothesis(usize),
    #[error("final line does not match the claim {claimed}")]
    ClaimMismatch { claimed: Formula },
}

/// A rejected proof: the first failing line (0-based) and why.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {}: {failure}", .line + 1)]
pub struct ProofError {
    pub line: usize,
    pub failure: ProofFailure,
}

/// Checks every line in order and the claim. On success returns, for each
/// line, whether it is hypothesis-free.
pub fn check_proof(p: &Proof) -> Result<Vec<bool>, ProofError> {
    if p.lines.is_empty() {
        return Err(ProofError {
            line: 0,
            failure: ProofFailure::Empty,
        });
    }
    let mut free: Vec<bool> = Vec::with_capacity(p.lines.len());
    for (n, line) in p.lines.iter().enumerate() {
        let fail = |failure| ProofError { line: n, failure };
        let earlier = |i: usize| {
            if i < n {
                Ok(&p.lines[i].formula)
            } else {
                Err(fail(ProofFailure::BadLineReference(i.wrapping_add(1))))
            }
        };
        let line_free = match &line.just {
            Justification::Hyp(k) => {
                let h = p
                    .hypotheses
                    .get(*k)
                    .ok_or_else(|| fail(ProofFailure::BadHypothesisReference(k.wrapping_add(1))))?;
                if *h != line.formula {
                    return Err(fail(ProofFailure::HypothesisMismatch(k.wrapping_add(1))));
                }
                false
            }
            Justification::Taut => {
                if !is_tautology(&line.formula).map_err(|e| fail(e.into()))? {
                    return Err(fail(ProofFailure::NotATautology));
                }
                true
            }
            Justification::Axiom(schema, sub) => {
                let expected = instantiate_schema(*schema, sub).map_err(|e| fail(e.into()))?;
                if expected != line.formula {
                    return Err(fail(ProofFailure::AxiomMismatch {
                        schema: *schema,
                        expected,
                    }));
                }
                true
            }
            Justification::Mp(i, j) => {
                let minor = earlier(*i)?;
                let major = earlier(*j)?;
                match major {
                    Formula::Implies(a, b) if **a == *minor && **b == line.formula => {}
                    _ => {
                        return Err(fail(ProofFailure::ModusPonensMismatch {
                            minor: i + 1,
                            major: j + 1,
                        }))
                    }
                }
                free[*i] && free[*j]
            }
            Justification::Nec(i) => {
                let body = earlier(*i)?;
                match &line.formula {
                    Formula::Necessity(b) if **b == *body => {}
                    _ => return Err(fail(ProofFailure::NecessitationMismatch(i + 1))),
                }
                if !free[*i] {
                    return Err(fail(ProofFailure::NecessitationUnderHypothesis(i + 1)));
                }
                true
            }
        };
        free.push(line_free);
    }
    let last = p.lines.len() - 1;
    if p.lines[last].formula != p.claimed {
        return Err(ProofError {
            line: last,
            failure: ProofFailure::ClaimMismatch {
                claimed: p.claimed.clone(),
            },
        });
    }
    Ok(free)
}

// JSON script format. Line and hypothesis numbers are 1-based.

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubstDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<String>,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<AgentId>>,
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<AgentId>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JustDoc {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subst: Option<SubstDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub from: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineDoc {
    pub formula: String,
    pub just: JustDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProofDoc {
    #[serde(default)]
    pub hypotheses: Vec<String>,
    pub claim: String,
    pub lines: Vec<LineDoc>,
}

#[derive(Debug, Error)]
pub enum ProofFileError {
    #[error("malformed proof document at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{context}: {source}")]
    Formula {
        context: String,
        #[source]
        source: ParseError,
    },
    #[error("proof line {line}: {message}")]
    Justification { line: usize, message: String },
}

fn parse_in(context: impl Into<String>, text: &str) -> Result<Formula, ProofFileError> {
    parse(text).map_err(|source| ProofFileError::Formula {
        context: context.into(),
        source,
    })
}

/// Converts a 1-based reference into a 0-based index. Zero maps to
/// `usize::MAX` so the kernel reports it as a bad reference.
fn zero_based(n: usize) -> usize {
    n.checked_sub(1).unwrap_or(usize::MAX)
}

impl ProofDoc {
    pub fn to_proof(&self) -> Result<Proof, ProofFileError> {
        let hypotheses = self
            .hypotheses
            .iter()
            .enumerate()
            .map(|(i, h)| parse_in(format!("hypothesis {}", i + 1), h))
            .collect::<Result<Vec<_>, _>>()?;
        let claimed = parse_in("claim", &self.claim)?;
        let mut lines = Vec::with_capacity(self.lines.len());
        for (n, line) in self.lines.iter().enumerate() {
            let number = n + 1;
            let bad = |message: String| ProofFileError::Justification {
                line: number,
                message,
            };
            let formula = parse_in(format!("proof line {number}"), &line.formula)?;
            let from = line.just.from.as_deref().unwrap_or(&[]);
            let refs = |count: usize| -> Result<Vec<usize>, ProofFileError> {
                if from.len() == count {
                    Ok(from.iter().copied().map(zero_based).collect())
                } else {
                    Err(bad(format!(
                        "{} needs {count} entries in \"from\", got {}",
                        line.just.kind,
                        from.len()
                    )))
                }
            };
            let just = match line.just.kind.as_str() {
                "hyp" => match from {
                    [] => match hypotheses.iter().position(|h| *h == formula) {
                        Some(k) => Justification::Hyp(k),
                        None => return Err(bad("no hypothesis matches this formula".into())),
                    },
                    [k] => Justification::Hyp(zero_based(*k)),
                    _ => return Err(bad("hyp takes at most one hypothesis number".into())),
                },
                "taut" => Justification::Taut,
                "axiom" => {
                    let name = line
                        .just
                        .name
                        .as_deref()
                        .ok_or_else(|| bad("axiom needs a \"name\"".into()))?;
                    let schema: Schema = name
                        .parse()
                        .map_err(|e: UnknownSchema| bad(e.to_string()))?;
                    let doc = line
                        .just
                        .subst
                        .as_ref()
                        .ok_or_else(|| bad("axiom needs a \"subst\"".into()))?;
                    let ctx = |m: &str| format!("proof line {number}, {m}");
                    Justification::Axiom(
                        schema,
                        Substitution {
                            phi: doc
                                .phi
                                .as_deref()
                                .map(|s| parse_in(ctx("phi"), s))
                                .transpose()?,
                            psi: doc
                                .psi
                                .as_deref()
                                .map(|s| parse_in(ctx("psi"), s))
                                .transpose()?,
                            c: doc.c.clone().map(Coalition::new),
                            d: doc.d.clone().map(Coalition::new),
                        },
                    )
                }
                "mp" => {
                    let r = refs(2)?;
                    Justification::Mp(r[0], r[1])
                }
                "nec" => Justification::Nec(refs(1)?[0]),
                other => return Err(bad(format!("unknown justification kind {other:?}"))),
            };
            lines.push(Line { formula, just });
        }
        Ok(Proof {
            hypotheses,
            lines,
            claimed,
        })
    }

    pub fn from_proof(p: &Proof) -> ProofDoc {
        let members = |c: &Option<Coalition>| c.as_ref().map(|c| c.members().to_vec());
        ProofDoc {
            hypotheses: p.hypotheses.iter().map(Formula::to_string).collect(),
            claim: p.claimed.to_string(),
            lines: p
                .lines
                .iter()
                .map(|l| {
                    let just = match &l.just {
                        Justification::Hyp(k) => JustDoc::simple("hyp", Some(vec![k + 1])),
                        Justification::Taut => JustDoc::simple("taut", None),
                        Justification::Mp(i, j) => JustDoc::simple("mp", Some(vec![i + 1, j + 1])),
                        Justification::Nec(i) => JustDoc::simple("nec", Some(vec![i + 1])),
                        Justification::Axiom(schema, sub) => JustDoc {
                            kind: "axiom".into(),
                            name: Some(schema.name().into()),
                            subst: Some(SubstDoc {
                                phi: sub.phi.as_ref().map(Formula::to_string),
                                psi: sub.psi.as_ref().map(Formula::to_string),
                                c: members(&sub.c),
                                d: members(&sub.d),
                            }),
                            from: None,
                        },
                    };
                    LineDoc {
                        formula: l.formula.to_string(),
                        just,
                    }
                })
                .collect(),
        }
    }
}

impl JustDoc {
    fn simple(kind: &str, from: Option<Vec<usize>>) -> JustDoc {
        JustDoc {
            kind: kind.into(),
            name: None,
            subst: None,
            from,
        }
    }
}

/// Parses a JSON proof script.
pub fn load_proof(document: &[u8]) -> Result<Proof, ProofFileError> {
    let doc: ProofDoc = serde_json::from_slice(document).map_err(|e| ProofFileError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.to_proof()
}

/// Pretty JSON for a proof script, with trailing newline.
pub fn save_proof(p: &Proof) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(&ProofDoc::from_proof(p)).expect("proof serializes");
    out.push(b'\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn c(names: &[&str]) -> Coalition {
        Coalition::from_names(names.iter()).unwrap()
    }

    #[test]
    fn blame_for_cause_instance() {
        let sub = Substitution::phi(f("B{a} p"))
            .with_psi(f("p"))
            .with_c(c(&["a"]));
        assert_eq!(
            instantiate_schema(Schema::BlameForCause, &sub).unwrap(),
            f("N (B{a} p -> p) -> (B{a} p -> (B{a} p -> B{a} B{a} p))")
        );
    }

    #[test]
    fn none_to_blame_instance() {
        assert_eq!(
            instantiate_schema(Schema::NoneToBlame, &Substitution::phi(f("q"))).unwrap(),
            f("!B{} q")
        );
    }

    #[test]
    fn all_templates_match_their_text() {
        let sub = |s: Schema| {
            let mut sub = Substitution::phi(f("x"));
            if s.uses_psi() {
                sub.psi = Some(f("y"));
            }
            if s.uses_c() {
                sub.c = Some(c(&["a"]));
            }
            if s.uses_d() {
                sub.d = Some(if s == Schema::Monotonicity {
                    c(&["a", "b"])
                } else {
                    c(&["b"])
                });
            }
            sub
        };
        let expected = [
            "N x -> x",
            "B{a} x -> x",
            "N (x -> y) -> N x -> N y",
            "!N x -> N !N x",
            "!B{} x",
            "<N> B{a} x & <N> B{b} y -> x | y -> B{a,b} (x | y)",
            "N (x -> y) -> B{a} y -> x -> B{a} x",
            "B{a} x -> B{a,b} x",
            "B{a} x -> N (x -> B{a} x)",
        ];
        for (schema, text) in Schema::ALL.into_iter().zip(expected) {
            let inst = instantiate_schema(schema, &sub(schema)).unwrap();
            assert_eq!(inst.to_string(), text, "{schema}");
        }
    }

    #[test]
    fn side_conditions() {
        let overlapping = Substitution::phi(f("p"))
            .with_psi(f("q"))
            .with_c(c(&["a"]))
            .with_d(c(&["a"]));
        assert!(matches!(
            instantiate_schema(Schema::JointResponsibility, &overlapping),
            Err(SchemaError::SideCondition { .. })
        ));
        let not_subset = Substitution::phi(f("p"))
            .with_c(c(&["a"]))
            .with_d(c(&["b"]));
        assert!(matches!(
            instantiate_schema(Schema::Monotonicity, &not_subset),
            Err(SchemaError::SideCondition { .. })
        ));
        let equal = Substitution::phi(f("p"))
            .with_c(c(&["a"]))
            .with_d(c(&["a"]));
        assert!(instantiate_schema(Schema::Monotonicity, &equal).is_ok());
    }

    #[test]
    fn metavariables_must_match() {
        assert_eq!(
            instantiate_schema(Schema::TruthB, &Substitution::phi(f("p"))),
            Err(SchemaError::Unbound {
                schema: Schema::TruthB,
                meta: "C"
            })
        );
        assert_eq!(
            instantiate_schema(Schema::TruthN, &Substitution::phi(f("p")).with_c(c(&[]))),
            Err(SchemaError::Extra {
                schema: Schema::TruthN,
                meta: "C"
            })
        );
        assert!(matches!(
            instantiate_schema(Schema::TruthN, &Substitution::default()),
            Err(SchemaError::Unbound { meta: "phi", .. })
        ));
    }

    #[test]
    fn tautologies() {
        assert!(is_tautology(&f("(B{a} p -> (B{a} p -> q)) -> (B{a} p -> q)")).unwrap());
        assert!(!is_tautology(&f("N p -> p")).unwrap());
        assert!(is_tautology(&f("p | !p")).unwrap());
        assert!(is_tautology(&f("true")).unwrap());
        assert!(!is_tautology(&f("false")).unwrap());
        assert!(is_tautology(&f("N (p | q) -> N (p | q)")).unwrap());
        // Different modal atoms are independent even if semantically related.
        assert!(!is_tautology(&f("N (p | q) -> N (q | p)")).unwrap());
        assert!(is_tautology(&f("(p <-> q) <-> (q <-> p)")).unwrap());
    }

    #[test]
    fn atom_limit() {
        let many = Formula::disjunction((0..21).map(|i| Formula::prop(&format!("p{i}"))));
        assert_eq!(is_tautology(&many), Err(TooManyAtoms { atoms: 21 }));
        let ok = Formula::or(
            Formula::disjunction((0..19).map(|i| Formula::prop(&format!("p{i}")))),
            Formula::not(Formula::prop("p0")),
        );
        assert!(is_tautology(&ok).unwrap());
    }

    fn line(formula: &str, just: Justification) -> Line {
        Line {
            formula: f(formula),
            just,
        }
    }

    #[test]
    fn necessitation_needs_hypothesis_free_line() {
        let p = Proof {
            hypotheses: vec![f("p")],
            lines: vec![
                line("p", Justification::Hyp(0)),
                line("N p", Justification::Nec(0)),
            ],
            claimed: f("N p"),
        };
        let err = check_proof(&p).unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.to_string().contains("necessitation under hypothesis"));
    }

    #[test]
    fn kernel_failures() {
        let taut = line("p -> p", Justification::Taut);
        let mut p = Proof {
            hypotheses: vec![],
            lines: vec![taut.clone(), line("N (p -> p)", Justification::Nec(0))],
            claimed: f("N (p -> p)"),
        };
        assert_eq!(check_proof(&p), Ok(vec![true, true]));

        p.claimed = f("p");
        assert!(matches!(
            check_proof(&p).unwrap_err().failure,
            ProofFailure::ClaimMismatch { .. }
        ));

        p.claimed = f("N (p -> p)");
        p.lines[1].just = Justification::Nec(1);
        assert_eq!(
            check_proof(&p).unwrap_err().failure,
            ProofFailure::BadLineReference(2)
        );

        p.lines[1] = line("p", Justification::Mp(0, 0));
        assert!(matches!(
            check_proof(&p).unwrap_err().failure,
            ProofFailure::ModusPonensMismatch { .. }
        ));

        p.lines = vec![line("p", Justification::Hyp(0))];
        assert_eq!(
            check_proof(&p).unwrap_err().failure,
            ProofFailure::BadHypothesisReference(1)
        );

        p.lines = vec![line("N p -> p", Justification::Taut)];
        assert_eq!(
            check_proof(&p).unwrap_err().failure,
            ProofFailure::NotATautology
        );

        p.lines = vec![line(
            "N p -> q",
            Justification::Axiom(Schema::TruthN, Substitution::phi(f("p"))),
        )];
        assert!(matches!(
            check_proof(&p).unwrap_err().failure,
            ProofFailure::AxiomMismatch { .. }
        ));

        p.lines.clear();
        assert_eq!(check_proof(&p).unwrap_err().failure, ProofFailure::Empty);
    }

    #[test]
    fn modus_ponens_on_hypotheses_is_not_free() {
        let p = Proof {
            hypotheses: vec![f("p"), f("p -> q")],
            lines: vec![
                line("p", Justification::Hyp(0)),
                line("p -> q", Justification::Hyp(1)),
                line("q", Justification::Mp(0, 1)),
                line("q -> q", Justification::Taut),
            ],
            claimed: f("q -> q"),
        };
        assert_eq!(check_proof(&p), Ok(vec![false, false, false, true]));
    }

    #[test]
    fn json_documents() {
        let doc = br#"{
          "hypotheses": ["p"],
          "claim": "<N> p",
          "lines": [
            {"formula": "N !p -> !p", "just": {"kind": "axiom", "name": "TruthN", "subst": {"phi": "!p"}}},
            {"formula": "(N !p -> !p) -> p -> <N> p", "just": {"kind": "taut"}},
            {"formula": "p -> <N> p", "just": {"kind": "mp", "from": [1, 2]}},
            {"formula": "p", "just": {"kind": "hyp"}},
            {"formula": "<N> p", "just": {"kind": "mp", "from": [4, 3]}}
          ]
        }"#;
        let p = load_proof(doc).unwrap();
        assert_eq!(p.lines[3].just, Justification::Hyp(0));
        assert!(check_proof(&p).is_ok());
        assert_eq!(load_proof(&save_proof(&p)).unwrap(), p);

        let bad_kind = br#"{"claim": "p", "lines": [{"formula": "p", "just": {"kind": "magic"}}]}"#;
        assert!(matches!(
            load_proof(bad_kind),
            Err(ProofFileError::Justification { line: 1, .. })
        ));
        let bad_formula = br#"{"claim": "p ->", "lines": []}"#;
        assert!(matches!(
            load_proof(bad_formula),
            Err(ProofFileError::Formula { .. })
        ));
        let bad_schema = br#"{"claim": "p", "lines": [{"formula": "p", "just": {"kind": "axiom", "name": "Nope", "subst": {"phi": "p"}}}]}"#;
        assert!(load_proof(bad_schema).is_err());
        let zero_ref =
            br#"{"claim": "p", "lines": [{"formula": "p", "just": {"kind": "nec", "from": [0]}}]}"#;
        let p = load_proof(zero_ref).unwrap();
        assert!(matches!(
            check_proof(&p).unwrap_err().failure,
            ProofFailure::BadLineReference(_)
        ));
    }
}
