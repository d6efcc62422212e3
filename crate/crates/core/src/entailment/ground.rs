use thiserror::Error;

use crate::relational::RelationalLanguage;
use crate::semantics::index_tuple;
use crate::syntax::{Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("free variable `{0}` must be substituted before grounding")]
    FreeVariable(String),
    #[error("function symbol `{0}` cannot occur in a relational language")]
    Function(String),
    #[error("proposition `{0}` cannot occur in a relational language")]
    Proposition(String),
    #[error("`{0}` is not a symbol of the language")]
    Unknown(String),
}

/// Eliminates quantifiers by expansion over the constants and decides ground
/// equations syntactically: `c = c` becomes `~bot`, `c = d` becomes `bot`.
pub fn ground_formula(formula: &Formula, lang: &RelationalLanguage) -> Result<Formula, GroundError> {
    let expanded;
    let formula = if formula.is_sugar_free() {
        formula
    } else {
        expanded = formula.expand_sugar();
        &expanded
    };
    Grounder { lang, env: Vec::new() }.formula(formula)
}

/// Splits off the leading run of universal quantifiers and grounds the body
/// once per tuple of constants, tuples in lexicographic order. Each item holds
/// the constants chosen for the prefix variables.
pub fn ground_instances(formula: &Formula, lang: &RelationalLanguage) -> Result<Vec<(Vec<String>, Formula)>, GroundError> {
    let expanded = formula.expand_sugar();
    let mut vars = Vec::new();
    let mut body = &expanded;
    while let Formula::Forall(v, inner) = body {
        vars.push(v.clone());
        body = inner;
    }
    let n = lang.constant_count();
    let total = n.pow(vars.len() as u32);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let chosen: Vec<String> = index_tuple(code, vars.len(), n)
            .into_iter()
            .map(|i| lang.constants()[i].clone())
            .collect();
        let env = vars.iter().cloned().zip(chosen.iter().cloned()).collect();
        let ground = Grounder { lang, env }.formula(body)?;
        out.push((chosen, ground));
    }
    Ok(out)
}

struct Grounder<'a> {
    lang: &'a RelationalLanguage,
    env: Vec<(String, String)>,
}

impl Grounder<'_> {
    fn constant(&self, term: &Term) -> Result<String, GroundError> {
        match term {
            Term::Var(v) => self
                .env
                .iter()
                .rev()
                .find(|(x, _)| x == v)
                .map(|(_, c)| c.clone())
                .ok_or_else(|| GroundError::FreeVariable(v.clone())),
            Term::Const(c) if self.lang.constant_index(c).is_some() => Ok(c.clone()),
            Term::Const(c) => Err(GroundError::Unknown(c.clone())),
            Term::App(f, _) => Err(GroundError::Function(f.clone())),
        }
    }

    fn formula(&mut self, formula: &Formula) -> Result<Formula, GroundError> {
        Ok(match formula {
            Formula::Falsum => Formula::Falsum,
            Formula::Top => Formula::Falsum.negate(),
            Formula::Prop(p) => return Err(GroundError::Proposition(p.clone())),
            Formula::Pred(p, args) => {
                if self.lang.predicate_arity(p) != Some(args.len()) {
                    return Err(GroundError::Unknown(p.clone()));
                }
                let args = args
                    .iter()
                    .map(|t| self.constant(t).map(Term::Const))
                    .collect::<Result<Vec<_>, _>>()?;
                Formula::Pred(p.clone(), args)
            }
            Formula::Eq(l, r) => {
                if self.constant(l)? == self.constant(r)? {
                    Formula::Falsum.negate()
                } else {
                    Formula::Falsum
                }
            }
            Formula::Not(a) => self.formula(a)?.negate(),
            Formula::And(a, b) => self.formula(a)?.and(self.formula(b)?),
            Formula::Or(a, b) => self.formula(a)?.or(self.formula(b)?),
            Formula::Implies(a, b) => self.formula(a)?.implies(self.formula(b)?),
            Formula::Cons(_) | Formula::StrongImplies(..) => self.formula(&formula.expand_sugar())?,
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let mut parts = Vec::with_capacity(self.lang.constant_count());
                for c in self.lang.constants() {
                    self.env.push((v.clone(), c.clone()));
                    let part = self.formula(body);
                    self.env.pop();
                    parts.push(part?);
                }
                if matches!(formula, Formula::Forall(..)) {
                    parts.into_iter().reduce(Formula::and).expect("constants are non-empty")
                } else {
                    parts.into_iter().reduce(Formula::or).expect("constants are non-empty")
                }
            }
        })
    }
}
