//! The `paracqa` command line. [`run`] parses arguments, does the work and
//! returns the exit code: 0 for success (provable, consistent), 1 for a
//! negative verdict, 2 for usage or input errors, 3 when a search bound ran
//! out.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use paracqa::cqa::{
    answer_report, format_tuple, repairs, AnswerKind, CleanVariant, CqaError, Evidence, Query, RepairOptions,
};
use paracqa::entailment::{find_countermodel, Mode};
use paracqa::relational::{db_consistent, parse_database, ConsistencyCheck, RelationalDatabase, RelationalLanguage};
use paracqa::semantics::render_truth_tables;
use paracqa::sequent::{check_derivation, parse_proof_file, prove_with, ProofFile, SearchConfig, Sequent};
use paracqa::syntax::Term;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

const GRAMMARS: &str = "\
Formula grammar (loosest binding first):
  formula  ::= disj (('->' | '=>') formula)?       right-associative
  disj     ::= conj ('|' conj)*
  conj     ::= unary ('&' unary)*
  unary    ::= '~' unary | quant | atom
  quant    ::= ('forall' | 'exists') VAR (',' VAR)* '.' formula
  atom     ::= '(' formula ')' | 'bot' | 'top' | 'cons' '(' formula ')'
             | PRED '(' term (',' term)* ')' | PROP | term '=' term
  term     ::= CONST | FUNC '(' term (',' term)* ')' | VAR
  '->' is the weak implication, '=>' the strong one, cons(A) says A is
  consistent. A quantifier body extends as far right as possible. Names
  are letters, digits and '_' with optional trailing primes; an undeclared
  name in term position is a variable. bot, top, cons, forall and exists
  are reserved. Unicode connectives are accepted as well.

Sequents: comma-separated formulas, '|-', comma-separated formulas.
Queries: 'x, y | FORMULA' (the head may be empty: '| FORMULA').

Database file grammar:
  # comment
  constants: a, b
  predicates: P/1, Q/1
  facts:
  P(a). P(b).
  Q(a).
  constraints:
  forall x. ~(P(x) & Q(x))
  Facts end with '.', several may share a line. One closed formula per
  constraint line.

Proof file grammar:
  constants: a, b          (also functions: f/1, propositions: p, predicates: P/1)
  mode: lp                 (or classical)
  INDEX | SEQUENT | RULE | PREMISES=i,j | PRINCIPAL=formula | WITNESS=term
  Steps are numbered from 1. RULE is a rule name such as and-L, or HYP for a
  hypothesis.

Exit codes: 0 success, 1 negative verdict, 2 usage or input error,
3 search bound exhausted.";

#[derive(Parser, Debug)]
#[command(name = "paracqa", version, about = "Paraconsistent reasoning and consistent query answering", after_help = GRAMMARS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LogicMode {
    Lp,
    Classical,
}

impl From<LogicMode> for Mode {
    fn from(m: LogicMode) -> Mode {
        match m {
            LogicMode::Lp => Mode::Paraconsistent,
            LogicMode::Classical => Mode::Classical,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AnswerMode {
    Plain,
    Consistent,
    Strong,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Variant {
    Literal,
    Blame,
}

#[derive(clap::Args, Debug)]
struct LanguageArgs {
    /// Database whose language (and optionally theory) is used.
    #[arg(long)]
    db: Option<PathBuf>,
    /// Constants, when no database is given: `a,b`.
    #[arg(long, value_delimiter = ',')]
    constants: Vec<String>,
    /// Predicates, when no database is given: `P/1,Q/2`.
    #[arg(long, value_delimiter = ',')]
    predicates: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Answer a query `x, y | FORMULA`.
    Answers {
        #[arg(long)]
        db: PathBuf,
        query: String,
        #[arg(long, value_enum, default_value = "plain")]
        mode: AnswerMode,
        #[arg(long, value_enum, default_value = "blame")]
        variant: Variant,
        #[arg(long, default_value_t = 2)]
        max_diff: usize,
        /// Consequence relation deciding consistency of candidate repairs.
        #[arg(long, value_enum, default_value = "classical")]
        con_mode: LogicMode,
        /// Also print clean sets or per-repair answers.
        #[arg(long)]
        explain: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check a database against its constraints.
    Check {
        #[arg(long)]
        db: PathBuf,
        /// Use the semi-atomic consistency condition instead of classical satisfiability.
        #[arg(long)]
        literal: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Decide whether a sequent is valid.
    Decide {
        #[command(flatten)]
        lang: LanguageArgs,
        sequent: String,
        #[arg(long, value_enum, default_value = "lp")]
        mode: LogicMode,
        /// Add the database's relational theory to the antecedent.
        #[arg(long)]
        with_theory: bool,
        /// Add the database's constraints to the antecedent.
        #[arg(long)]
        with_constraints: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Search for a proof and print it as a proof file.
    Prove {
        #[command(flatten)]
        lang: LanguageArgs,
        sequent: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value = "lp")]
        mode: LogicMode,
        /// Do not use eq-refl and eq-repl.
        #[arg(long)]
        no_equality: bool,
    },
    /// Check a proof file.
    CheckProof { file: PathBuf },
    /// List the repairs of a database.
    Repairs {
        #[arg(long)]
        db: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_diff: usize,
        #[arg(long, value_enum, default_value = "classical")]
        con_mode: LogicMode,
        /// Only insert atoms of constraint instances violated by the database.
        #[arg(long)]
        restrict_insertions: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the truth tables of the connectives.
    TruthTables,
}

/// An error already carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Display) -> Failure {
    Failure { code: EXIT_USAGE, message: message.to_string() }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_db(path: &Path) -> Result<RelationalDatabase, Failure> {
    parse_database(&read(path)?).map_err(|e| usage(format!("{}:{}: {}", path.display(), e.line, e.message)))
}

fn cqa_failure(e: CqaError) -> Failure {
    let code = match e {
        CqaError::BoundExhausted { .. } | CqaError::IncompleteRepairs { .. } => EXIT_BOUND,
        _ => EXIT_USAGE,
    };
    Failure { code, message: e.to_string() }
}

fn parse_language(args: &LanguageArgs) -> Result<(RelationalLanguage, Option<RelationalDatabase>), Failure> {
    if let Some(path) = &args.db {
        let db = load_db(path)?;
        return Ok((db.language.clone(), Some(db)));
    }
    if args.constants.is_empty() {
        return Err(usage("give --db or --constants"));
    }
    let mut preds = Vec::new();
    for p in &args.predicates {
        let (name, arity) = p.split_once('/').ok_or_else(|| usage(format!("expected NAME/ARITY, got `{p}`")))?;
        let arity: usize = arity.parse().map_err(|_| usage(format!("bad arity in `{p}`")))?;
        preds.push((name.to_string(), arity));
    }
    let lang = RelationalLanguage::from_parts(
        args.constants.iter().map(String::as_str),
        preds.iter().map(|(n, a)| (n.as_str(), *a)),
    )
    .map_err(usage)?;
    Ok((lang, None))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn answers_cmd(
    out: &mut dyn Write,
    err: &mut dyn Write,
    db: &RelationalDatabase,
    query: &str,
    kind: AnswerKind,
    explain: bool,
    format: Format,
) -> Result<i32, Failure> {
    let q = Query::parse(query, db.language.signature()).map_err(usage)?;
    let report = answer_report(db, &q, kind).map_err(cqa_failure)?;
    if let AnswerKind::Consistent { variant } = kind {
        let _ = writeln!(err, "consistent answers, {} variant", variant.name());
    }
    if let Format::Json = format {
        let _ = writeln!(out, "{}", to_json(&report));
        return Ok(EXIT_OK);
    }
    if explain {
        match &report.evidence {
            Evidence::None => {}
            Evidence::CleanSet { facts, theory_satisfiable } => {
                let list: Vec<String> = facts.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "# clean facts: {{{}}}", list.join(", "));
                let verdict = if *theory_satisfiable { "has a" } else { "has no" };
                let _ = writeln!(out, "# theory plus constraints {verdict} three-valued model");
            }
            Evidence::Repairs { verdicts, examined } => {
                let _ = writeln!(out, "# {} repairs, {examined} candidates examined", verdicts.len());
                for v in verdicts {
                    let tuples: Vec<String> = v.answers.iter().map(|t| format_tuple(t)).collect();
                    let _ = writeln!(out, "# repair {}: {}", v.repair.basis, tuples.join(" "));
                }
            }
        }
    }
    for t in &report.answers {
        let _ = writeln!(out, "{}", format_tuple(t));
    }
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Answers { db, query, mode, variant, max_diff, con_mode, explain, format } => {
            let db = load_db(&db)?;
            let kind = match mode {
                AnswerMode::Plain => AnswerKind::Plain,
                AnswerMode::Consistent => AnswerKind::Consistent {
                    variant: match variant {
                        Variant::Literal => CleanVariant::Literal,
                        Variant::Blame => CleanVariant::Blame,
                    },
                },
                AnswerMode::Strong => AnswerKind::Strong { max_diff, con_mode: con_mode.into() },
            };
            answers_cmd(out, err, &db, &query, kind, explain, format)
        }
        Command::Check { db, literal, format } => {
            let db = load_db(&db)?;
            let check = if literal { ConsistencyCheck::Literal } else { ConsistencyCheck::ClassicalSat };
            let report = db_consistent(&db, check).map_err(usage)?;
            match format {
                Format::Json => {
                    let _ = writeln!(out, "{}", to_json(&report));
                }
                Format::Text => {
                    let _ = writeln!(out, "{}", if report.consistent { "consistent" } else { "inconsistent" });
                    for w in &report.witnesses {
                        let _ = writeln!(out, "  {w}");
                    }
                }
            }
            Ok(if report.consistent { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Decide { lang, sequent, mode, with_theory, with_constraints, format } => {
            let (lang, db) = parse_language(&lang)?;
            let goal = Sequent::parse(&sequent, lang.signature()).map_err(usage)?;
            let mut gamma: Vec<_> = goal.antecedent.iter().map(|f| f.expand_sugar()).collect();
            if with_theory || with_constraints {
                let db = db.as_ref().ok_or_else(|| usage("--with-theory and --with-constraints need --db"))?;
                if with_theory {
                    gamma.extend(db.theory());
                }
                if with_constraints {
                    gamma.extend(db.expanded_constraints());
                }
            }
            let delta: Vec<_> = goal.succedent.iter().map(|f| f.expand_sugar()).collect();
            let found = find_countermodel(&lang, &gamma, &delta, mode.into()).map_err(usage)?;
            match format {
                Format::Json => {
                    let cm = found.as_ref().map(|c| {
                        serde_json::json!({
                            "substitution": c.substitution.iter().map(|(x, t)| (x.clone(), t.clone())).collect::<std::collections::BTreeMap<_, _>>(),
                            "values": c.values.iter().map(|(a, v)| (a.to_string(), v.name())).collect::<Vec<_>>(),
                        })
                    });
                    let doc = serde_json::json!({ "mode": Mode::from(mode).name(), "valid": found.is_none(), "countermodel": cm });
                    let _ = writeln!(out, "{}", to_json(&doc));
                }
                Format::Text => match &found {
                    None => {
                        let _ = writeln!(out, "valid");
                    }
                    Some(cm) => {
                        let _ = writeln!(out, "not valid; countermodel:");
                        let _ = write!(out, "{cm}");
                    }
                },
            }
            Ok(if found.is_none() { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Prove { lang, sequent, depth, mode, no_equality } => {
            if depth == 0 {
                return Err(usage("--depth must be positive"));
            }
            let (lang, _) = parse_language(&lang)?;
            let goal = Sequent::parse(&sequent, lang.signature()).map_err(usage)?;
            if goal.formulas().any(|f| !f.is_sugar_free()) {
                return Err(usage("the calculus works on formulas without cons, => and top; expand them first"));
            }
            let config = SearchConfig {
                mode: mode.into(),
                terms: lang.constants().iter().map(|c| Term::constant(c.clone())).collect(),
                equality_rules: !no_equality,
            };
            match prove_with(&goal, depth, &config) {
                Some(derivation) => {
                    let file = ProofFile { signature: lang.signature().clone(), derivation };
                    let _ = write!(out, "{}", file.to_text());
                    Ok(EXIT_OK)
                }
                None => {
                    let _ = writeln!(err, "no proof found within depth {depth}");
                    Ok(EXIT_BOUND)
                }
            }
        }
        Command::CheckProof { file } => {
            let text = read(&file)?;
            let pf = parse_proof_file(&text).map_err(|e| usage(format!("{}:{}: {}", file.display(), e.line, e.message)))?;
            let d = &pf.derivation;
            let hyps: Vec<Sequent> = d.hypotheses().into_iter().cloned().collect();
            match check_derivation(d, &hyps) {
                Ok(()) => {
                    let conclusion = d.conclusion().expect("parsed files have steps");
                    if hyps.is_empty() {
                        let _ = writeln!(out, "proof of {conclusion} checked ({} steps, {})", d.steps.len(), d.mode.name());
                    } else {
                        let _ = writeln!(
                            out,
                            "derivation of {conclusion} from {} hypotheses checked ({} steps, {})",
                            hyps.len(),
                            d.steps.len(),
                            d.mode.name()
                        );
                    }
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    let _ = writeln!(out, "rejected: {e}");
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Repairs { db, max_diff, con_mode, restrict_insertions, format } => {
            let db = load_db(&db)?;
            let options = RepairOptions { max_diff, con_mode: con_mode.into(), restrict_insertions };
            let outcome = repairs(&db, &options).map_err(cqa_failure)?;
            match format {
                Format::Json => {
                    let _ = writeln!(out, "{}", to_json(&outcome));
                }
                Format::Text => {
                    for (i, r) in outcome.repairs.iter().enumerate() {
                        if i > 0 {
                            let _ = writeln!(out);
                        }
                        let _ = writeln!(out, "repair {}: {}", i + 1, r.basis);
                        for a in &r.deletions {
                            let _ = writeln!(out, "  delete {a}");
                        }
                        for a in &r.insertions {
                            let _ = writeln!(out, "  insert {a}");
                        }
                    }
                }
            }
            let _ = writeln!(
                err,
                "{} candidates examined; {}",
                outcome.examined,
                if outcome.exhaustive { "no other repairs exist" } else { "repairs beyond the bound may exist" }
            );
            Ok(EXIT_OK)
        }
        Command::TruthTables => {
            let _ = write!(out, "{}", render_truth_tables());
            Ok(EXIT_OK)
        }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
