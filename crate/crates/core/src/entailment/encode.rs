//! Signed boolean reflection of three-valued designation. Each ground atom
//! `a` has two boolean variables: `T(a)` (value is True or Both) and `F(a)`
//! (value is False or Both).

use std::fmt;

use thiserror::Error;

use crate::relational::GroundAtom;
use crate::syntax::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    T,
    F,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedVar {
    pub atom: GroundAtom,
    pub side: Side,
}

impl fmt::Display for SignedVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::T => "T",
            Side::F => "F",
        };
        write!(f, "{side}[{}]", self.atom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoolExpr<V = SignedVar> {
    Const(bool),
    Var(V),
    Not(Box<BoolExpr<V>>),
    And(Vec<BoolExpr<V>>),
    Or(Vec<BoolExpr<V>>),
}

impl<V> BoolExpr<V> {
    /// Conjunction with constant folding and flattening.
    pub fn and(items: impl IntoIterator<Item = BoolExpr<V>>) -> BoolExpr<V> {
        let mut out = Vec::new();
        for item in items {
            match item {
                BoolExpr::Const(true) => {}
                BoolExpr::Const(false) => return BoolExpr::Const(false),
                BoolExpr::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => BoolExpr::Const(true),
            1 => out.pop().unwrap(),
            _ => BoolExpr::And(out),
        }
    }

    pub fn or(items: impl IntoIterator<Item = BoolExpr<V>>) -> BoolExpr<V> {
        let mut out = Vec::new();
        for item in items {
            match item {
                BoolExpr::Const(false) => {}
                BoolExpr::Const(true) => return BoolExpr::Const(true),
                BoolExpr::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => BoolExpr::Const(false),
            1 => out.pop().unwrap(),
            _ => BoolExpr::Or(out),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: BoolExpr<V>) -> BoolExpr<V> {
        match e {
            BoolExpr::Const(b) => BoolExpr::Const(!b),
            BoolExpr::Not(inner) => *inner,
            other => BoolExpr::Not(Box::new(other)),
        }
    }

    /// Evaluates under a valuation of the variables.
    pub fn eval(&self, value: &impl Fn(&V) -> bool) -> bool {
        match self {
            BoolExpr::Const(b) => *b,
            BoolExpr::Var(v) => value(v),
            BoolExpr::Not(e) => !e.eval(value),
            BoolExpr::And(xs) => xs.iter().all(|x| x.eval(value)),
            BoolExpr::Or(xs) => xs.iter().any(|x| x.eval(value)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("quantifier encountered; ground the formula first")]
    Quantifier,
    #[error("non-ground atom `{0}`")]
    NotGround(String),
}

/// `D(f)`: holds exactly when the ground formula `f` is designated.
pub fn encode_designated(formula: &Formula) -> Result<BoolExpr, EncodeError> {
    encode_with(formula, true, &mut |atom, side| Ok(SignedVar { atom: atom.clone(), side }))
}

/// `Fbar(f)`: holds exactly when `f` is False or Both.
pub fn encode_falsifiable(formula: &Formula) -> Result<BoolExpr, EncodeError> {
    encode_with(formula, false, &mut |atom, side| Ok(SignedVar { atom: atom.clone(), side }))
}

/// The encoding with caller-chosen variables. `designated` selects `D`
/// (true) or `Fbar` (false).
pub(crate) fn encode_with<V, E: From<EncodeError>>(
    formula: &Formula,
    designated: bool,
    leaf: &mut impl FnMut(&GroundAtom, Side) -> Result<V, E>,
) -> Result<BoolExpr<V>, E> {
    Ok(match formula {
        Formula::Falsum => BoolExpr::Const(!designated),
        Formula::Top => BoolExpr::Const(designated),
        Formula::Pred(..) => {
            let atom = GroundAtom::from_formula(formula).ok_or_else(|| EncodeError::NotGround(formula.to_string()))?;
            BoolExpr::Var(leaf(&atom, if designated { Side::T } else { Side::F })?)
        }
        Formula::Prop(_) => return Err(EncodeError::NotGround(formula.to_string()).into()),
        Formula::Eq(l, r) => match (l, r) {
            (crate::syntax::Term::Const(a), crate::syntax::Term::Const(b)) => BoolExpr::Const((a == b) == designated),
            _ => return Err(EncodeError::NotGround(formula.to_string()).into()),
        },
        Formula::Not(a) => encode_with(a, !designated, leaf)?,
        Formula::And(..) | Formula::Or(..) => {
            let is_and = matches!(formula, Formula::And(..));
            let mut parts = Vec::new();
            for operand in chain_operands(formula) {
                parts.push(encode_with(operand, designated, leaf)?);
            }
            if is_and == designated {
                BoolExpr::and(parts)
            } else {
                BoolExpr::or(parts)
            }
        }
        Formula::Implies(a, b) => {
            let da = encode_with(a, true, leaf)?;
            let b = encode_with(b, designated, leaf)?;
            if designated {
                BoolExpr::or([BoolExpr::not(da), b])
            } else {
                BoolExpr::and([da, b])
            }
        }
        Formula::Cons(_) | Formula::StrongImplies(..) => encode_with(&formula.expand_sugar(), designated, leaf)?,
        Formula::Forall(..) | Formula::Exists(..) => return Err(EncodeError::Quantifier.into()),
    })
}

/// Operands of a maximal run of the same binary connective, left to right,
/// collected without recursing down the spine.
fn chain_operands(formula: &Formula) -> Vec<&Formula> {
    let same = |f: &Formula| {
        matches!(
            (formula, f),
            (Formula::And(..), Formula::And(..)) | (Formula::Or(..), Formula::Or(..))
        )
    };
    let mut out = Vec::new();
    let mut stack = vec![formula];
    while let Some(f) = stack.pop() {
        match f {
            Formula::And(a, b) | Formula::Or(a, b) if same(f) => {
                stack.push(b);
                stack.push(a);
            }
            other => out.push(other),
        }
    }
    out
}
