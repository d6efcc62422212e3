//! Printing with minimal parentheses. The output parses back to the same tree.

use std::fmt::{self, Display, Formatter, Write};

use super::{Formula, Term};

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                write_terms(f, args)?;
                f.write_char(')')
            }
        }
    }
}

fn write_terms(f: &mut Formatter<'_>, args: &[Term]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0, true)
    }
}

/// `ctx` is the minimum precedence the position accepts; `open_right` says
/// whether nothing follows this subformula within its enclosing group, which is
/// when a quantifier may be printed without parentheses.
fn write_formula(f: &mut Formatter<'_>, phi: &Formula, ctx: u8, open_right: bool) -> fmt::Result {
    match phi {
        Formula::Falsum => f.write_str("bot"),
        Formula::Top => f.write_str("top"),
        Formula::Prop(p) => f.write_str(p),
        Formula::Pred(name, args) => {
            write!(f, "{name}(")?;
            write_terms(f, args)?;
            f.write_char(')')
        }
        Formula::Eq(l, r) => write!(f, "{l} = {r}"),
        Formula::Cons(a) => {
            f.write_str("cons(")?;
            write_formula(f, a, 0, true)?;
            f.write_char(')')
        }
        Formula::Not(a) => {
            f.write_char('~')?;
            write_formula(f, a, PREC_UNARY, open_right)
        }
        Formula::Forall(..) | Formula::Exists(..) => {
            if !open_right {
                f.write_char('(')?;
            }
            write_quantifier(f, phi)?;
            if !open_right {
                f.write_char(')')?;
            }
            Ok(())
        }
        Formula::And(a, b) => write_binary(f, a, b, " & ", PREC_AND, false, ctx, open_right),
        Formula::Or(a, b) => write_binary(f, a, b, " | ", PREC_OR, false, ctx, open_right),
        Formula::Implies(a, b) => write_binary(f, a, b, " -> ", PREC_IMP, true, ctx, open_right),
        Formula::StrongImplies(a, b) => write_binary(f, a, b, " => ", PREC_IMP, true, ctx, open_right),
    }
}

fn write_quantifier(f: &mut Formatter<'_>, phi: &Formula) -> fmt::Result {
    let (keyword, universal) = match phi {
        Formula::Forall(..) => ("forall", true),
        _ => ("exists", false),
    };
    let mut vars = Vec::new();
    let mut body = phi;
    loop {
        match body {
            Formula::Forall(v, inner) if universal => {
                vars.push(v.as_str());
                body = inner;
            }
            Formula::Exists(v, inner) if !universal => {
                vars.push(v.as_str());
                body = inner;
            }
            _ => break,
        }
    }
    write!(f, "{keyword} {}. ", vars.join(","))?;
    write_formula(f, body, 0, true)
}

#[allow(clippy::too_many_arguments)]
fn write_binary(
    f: &mut Formatter<'_>,
    lhs: &Formula,
    rhs: &Formula,
    op: &str,
    prec: u8,
    right_assoc: bool,
    ctx: u8,
    open_right: bool,
) -> fmt::Result {
    let paren = prec < ctx;
    let (lctx, rctx) = if right_assoc { (prec + 1, prec) } else { (prec, prec + 1) };
    if paren {
        f.write_char('(')?;
    }
    write_formula(f, lhs, lctx, false)?;
    f.write_str(op)?;
    write_formula(f, rhs, rctx, paren || open_right)?;
    if paren {
        f.write_char(')')?;
    }
    Ok(())
}
