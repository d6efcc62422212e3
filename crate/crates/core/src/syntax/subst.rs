use std::collections::BTreeSet;

use super::{Formula, Term};

/// First name of the form `base'`, `base''`, ... not contained in `avoid`.
pub fn fresh_variable(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut candidate = format!("{base}'");
    while avoid.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

pub fn substitute_term(term: &Term, var: &str, replacement: &Term) -> Term {
    match term {
        Term::Var(v) if v == var => replacement.clone(),
        Term::Var(_) | Term::Const(_) => term.clone(),
        Term::App(f, args) => Term::App(
            f.clone(),
            args.iter().map(|a| substitute_term(a, var, replacement)).collect(),
        ),
    }
}

/// Replaces the free occurrences of `var` in `formula` by `replacement`.
///
/// A binder whose variable occurs in `replacement` is renamed before the
/// substitution proceeds under it, using [`fresh_variable`] against the free
/// variables of the replacement and of the body. Subformulas in which `var` is
/// not free are returned unchanged.
pub fn substitute(formula: &Formula, var: &str, replacement: &Term) -> Formula {
    if !formula.has_free_var(var) {
        return formula.clone();
    }
    let rep_vars = replacement.free_variables();
    subst_inner(formula, var, replacement, &rep_vars)
}

fn subst_inner(formula: &Formula, var: &str, rep: &Term, rep_vars: &BTreeSet<String>) -> Formula {
    let recur = |f: &Formula| -> Box<Formula> {
        if f.has_free_var(var) {
            Box::new(subst_inner(f, var, rep, rep_vars))
        } else {
            Box::new(f.clone())
        }
    };
    match formula {
        Formula::Falsum | Formula::Top | Formula::Prop(_) => formula.clone(),
        Formula::Pred(p, args) => {
            Formula::Pred(p.clone(), args.iter().map(|t| substitute_term(t, var, rep)).collect())
        }
        Formula::Eq(l, r) => Formula::Eq(substitute_term(l, var, rep), substitute_term(r, var, rep)),
        Formula::Not(a) => Formula::Not(recur(a)),
        Formula::Cons(a) => Formula::Cons(recur(a)),
        Formula::And(a, b) => Formula::And(recur(a), recur(b)),
        Formula::Or(a, b) => Formula::Or(recur(a), recur(b)),
        Formula::Implies(a, b) => Formula::Implies(recur(a), recur(b)),
        Formula::StrongImplies(a, b) => Formula::StrongImplies(recur(a), recur(b)),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let rebuild = |v: String, b: Formula| match formula {
                Formula::Forall(..) => Formula::forall(v, b),
                _ => Formula::exists(v, b),
            };
            if v == var || !body.has_free_var(var) {
                return formula.clone();
            }
            if rep_vars.contains(v) {
                let mut avoid = rep_vars.clone();
                avoid.extend(body.free_variables());
                avoid.insert(var.to_string());
                let fresh = fresh_variable(v, &avoid);
                let renamed = substitute(body, v, &Term::Var(fresh.clone()));
                rebuild(fresh, subst_inner(&renamed, var, rep, rep_vars))
            } else {
                rebuild(v.clone(), subst_inner(body, var, rep, rep_vars))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_occurrences_are_untouched() {
        let px = Formula::pred("P", vec![Term::var("x")]);
        let qx = Formula::pred("Q", vec![Term::var("x")]);
        let f = px.and(Formula::forall("x", qx.clone()));
        let g = substitute(&f, "x", &Term::constant("a"));
        let pa = Formula::pred("P", vec![Term::constant("a")]);
        assert_eq!(g, pa.and(Formula::forall("x", qx)));
    }

    #[test]
    fn capture_forces_renaming() {
        let f = Formula::exists("y", Formula::eq(Term::var("x"), Term::var("y")));
        let g = substitute(&f, "x", &Term::var("y"));
        assert_eq!(g, Formula::exists("y'", Formula::eq(Term::var("y"), Term::var("y'"))));
    }

    #[test]
    fn renaming_skips_taken_names() {
        // exists y. x = y & y' = y, with x := y
        let body = Formula::eq(Term::var("x"), Term::var("y")).and(Formula::eq(Term::var("y'"), Term::var("y")));
        let f = Formula::exists("y", body);
        let g = substitute(&f, "x", &Term::var("y"));
        let expected = Formula::exists(
            "y''",
            Formula::eq(Term::var("y"), Term::var("y''")).and(Formula::eq(Term::var("y'"), Term::var("y''"))),
        );
        assert_eq!(g, expected);
    }

    #[test]
    fn plain_replacement() {
        let f = Formula::pred("P", vec![Term::var("x")]);
        assert_eq!(substitute(&f, "x", &Term::constant("c")), Formula::pred("P", vec![Term::constant("c")]));
    }
}
