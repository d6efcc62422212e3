//! Truth tables of the connectives, computed by evaluating `~p`, `p & q` and
//! so on in one-element structures that interpret `p` and `q`.

use std::fmt::Write as _;

use super::{eval_formula, Assignment, Structure, TruthValue};
use crate::syntax::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connective {
    Not,
    And,
    Or,
    Implies,
    Cons,
    StrongImplies,
}

impl Connective {
    pub const ALL: [Connective; 6] = [
        Connective::Not,
        Connective::And,
        Connective::Or,
        Connective::Implies,
        Connective::Cons,
        Connective::StrongImplies,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Connective::Not => "~",
            Connective::And => "&",
            Connective::Or => "|",
            Connective::Implies => "->",
            Connective::Cons => "cons",
            Connective::StrongImplies => "=>",
        }
    }

    pub fn is_unary(self) -> bool {
        matches!(self, Connective::Not | Connective::Cons)
    }

    fn formula(self) -> Formula {
        let p = Formula::Prop("p".into());
        let q = Formula::Prop("q".into());
        match self {
            Connective::Not => p.negate(),
            Connective::And => p.and(q),
            Connective::Or => p.or(q),
            Connective::Implies => p.implies(q),
            Connective::Cons => p.cons(),
            Connective::StrongImplies => p.strong_implies(q),
        }
    }

    /// Value for the given arguments; `b` is ignored for unary connectives.
    pub fn apply(self, a: TruthValue, b: TruthValue) -> TruthValue {
        let mut st = Structure::new(1).expect("non-empty domain");
        st.set_proposition("p", a);
        st.set_proposition("q", b);
        eval_formula(&st, &Assignment::new(0), &self.formula()).expect("p and q are interpreted")
    }
}

/// All tables as text, rows and columns in the order t, b, f.
pub fn render_truth_tables() -> String {
    let mut out = String::new();
    for (i, c) in Connective::ALL.into_iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let width = c.symbol().len();
        if c.is_unary() {
            let _ = writeln!(out, "{:w$} |", c.symbol(), w = width);
            let _ = writeln!(out, "{}-+--", "-".repeat(width));
            for a in TruthValue::ALL {
                let _ = writeln!(out, "{:w$} | {}", a.symbol(), c.apply(a, a).symbol(), w = width);
            }
        } else {
            let head: Vec<&str> = TruthValue::ALL.iter().map(|v| v.symbol()).collect();
            let _ = writeln!(out, "{:w$} | {}", c.symbol(), head.join(" "), w = width);
            let _ = writeln!(out, "{}-+------", "-".repeat(width));
            for a in TruthValue::ALL {
                let row: Vec<&str> = TruthValue::ALL.iter().map(|&b| c.apply(a, b).symbol()).collect();
                let _ = writeln!(out, "{:w$} | {}", a.symbol(), row.join(" "), w = width);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use TruthValue::{Both as B, False as F, True as T};

    #[test]
    fn strong_implication_is_crisp_on_false_consequent() {
        assert_eq!(Connective::StrongImplies.apply(B, F), F);
        assert_eq!(Connective::StrongImplies.apply(B, B), B);
        assert_eq!(Connective::Cons.apply(B, B), F);
        assert_eq!(Connective::Cons.apply(T, T), T);
    }

    #[test]
    fn rendering_shape() {
        let text = render_truth_tables();
        assert!(text.starts_with("~ |\n--+--\nt | f\nb | b\nf | t\n"));
        assert!(text.contains("& | t b f\n--+------\nt | t b f\nb | b b f\nf | f f f\n"));
    }
}
