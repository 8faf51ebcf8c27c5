//! Rewrite systems: rules, signatures, the builtin duplicator, and the
//! TPDB-subset text format.
//!
//! The text grammar is deliberately small: `(VAR x y n)` followed by
//! `(RULES lhs -> rhs ...)`, prefix application, comma-separated arguments,
//! nullary symbols written bare, ASCII identifiers only.

use crate::term::{schema, Name, Substitution, Symbol, Term};
use std::collections::BTreeMap;
use std::fmt;

/// A rewrite rule `lhs -> rhs` with a label unique within its system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub label: String,
    pub lhs: Term,
    pub rhs: Term,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrsError {
    #[error("rule {label}: left-hand side head must be a function symbol")]
    LhsHeadVariable { label: String },
    #[error("rule {label}: variable {variable} occurs only on the right-hand side")]
    RhsOnlyVariable { label: String, variable: String },
    #[error("symbol {symbol} used with arity {found}, expected {expected}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("duplicate rule label {label}")]
    DuplicateLabel { label: String },
}

impl Rule {
    pub fn new(label: &str, lhs: Term, rhs: Term) -> Result<Rule, TrsError> {
        if lhs.head().is_none() {
            return Err(TrsError::LhsHeadVariable {
                label: label.to_string(),
            });
        }
        let lhs_vars = lhs.vars();
        for v in rhs.vars() {
            if !lhs_vars.contains(&v) {
                return Err(TrsError::RhsOnlyVariable {
                    label: label.to_string(),
                    variable: v.to_string(),
                });
            }
        }
        Ok(Rule {
            label: label.to_string(),
            lhs,
            rhs,
        })
    }
}

/// A first-order term rewriting system over a derived signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trs {
    pub name: String,
    pub signature: Vec<Symbol>,
    pub rules: Vec<Rule>,
}

impl Trs {
    /// Builds a system from rules. The signature is derived from the rules
    /// in first-occurrence order and checked for arity consistency; the four
    /// schema names carry reserved arities.
    pub fn new(name: &str, rules: Vec<Rule>) -> Result<Trs, TrsError> {
        let mut seen_labels = std::collections::BTreeSet::new();
        for r in &rules {
            if !seen_labels.insert(r.label.clone()) {
                return Err(TrsError::DuplicateLabel {
                    label: r.label.clone(),
                });
            }
        }
        let mut signature: Vec<Symbol> = Vec::new();
        for r in &rules {
            collect_symbols(&r.lhs, &mut signature)?;
            collect_symbols(&r.rhs, &mut signature)?;
        }
        Ok(Trs {
            name: name.to_string(),
            signature,
            rules,
        })
    }

    /// The step-duplicating primitive recursor:
    /// `F(x,y,Z) -> x` and `F(x,y,S(n)) -> G(y,F(x,y,n))`.
    pub fn recursor() -> Trs {
        let x = Term::var("x");
        let y = Term::var("y");
        let n = Term::var("n");
        let base = Rule::new("base", Term::f(x.clone(), y.clone(), Term::z()), x.clone())
            .expect("base rule");
        let step = Rule::new(
            "step",
            Term::f(x.clone(), y.clone(), Term::s(n.clone())),
            Term::g(y.clone(), Term::f(x, y, n)),
        )
        .expect("step rule");
        Trs::new("recursor", vec![base, step]).expect("recursor")
    }

    /// The wrapper-free linear variant: the step rule drops the counter
    /// without duplicating any variable.
    pub fn linear_recursor() -> Trs {
        let x = Term::var("x");
        let y = Term::var("y");
        let n = Term::var("n");
        let base = Rule::new("base", Term::f(x.clone(), y.clone(), Term::z()), x.clone())
            .expect("base rule");
        let step = Rule::new(
            "step",
            Term::f(x.clone(), y.clone(), Term::s(n.clone())),
            Term::f(x, y, n),
        )
        .expect("step rule");
        Trs::new("linear-recursor", vec![base, step]).expect("linear recursor")
    }

    /// Resolves a builtin system by name.
    pub fn builtin(name: &str) -> Option<Trs> {
        match name {
            "recursor" => Some(Trs::recursor()),
            "linear-recursor" => Some(Trs::linear_recursor()),
            _ => None,
        }
    }

    pub fn rule(&self, label: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.label == label)
    }

    pub fn symbol(&self, name: &str) -> Option<&Symbol> {
        self.signature.iter().find(|s| s.name() == name)
    }

    /// Rule content equality: same rules (terms) in the same order. Labels
    /// and the system name are identity metadata and are not compared; the
    /// text format carries neither.
    pub fn same_rules(&self, other: &Trs) -> bool {
        self.rules.len() == other.rules.len()
            && self
                .rules
                .iter()
                .zip(other.rules.iter())
                .all(|(a, b)| a.lhs == b.lhs && a.rhs == b.rhs)
    }

    pub fn rename(mut self, name: &str) -> Trs {
        self.name = name.to_string();
        self
    }
}

fn collect_symbols(t: &Term, signature: &mut Vec<Symbol>) -> Result<(), TrsError> {
    if let Some(sym) = t.head() {
        check_symbol(sym)?;
        match signature.iter().find(|s| s.name() == sym.name()) {
            Some(existing) if existing.arity() != sym.arity() => {
                return Err(TrsError::ArityMismatch {
                    symbol: sym.name().to_string(),
                    expected: existing.arity(),
                    found: sym.arity(),
                });
            }
            Some(_) => {}
            None => signature.push(sym.clone()),
        }
    }
    for a in t.args() {
        collect_symbols(a, signature)?;
    }
    Ok(())
}

fn check_symbol(sym: &Symbol) -> Result<(), TrsError> {
    if let Some(reserved) = schema::reserved_arity(sym.name()) {
        if sym.arity() != reserved {
            return Err(TrsError::ArityMismatch {
                symbol: sym.name().to_string(),
                expected: reserved,
                found: sym.arity(),
            });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Arrow,
    Ident(String),
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let text = text.replace("\r\n", "\n");
    let mut toks = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if !c.is_ascii() {
            return Err(ParseError::new(
                line,
                col,
                format!("non-ASCII character {:?}", c),
            ));
        }
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
                col += 1;
            }
            '(' => {
                toks.push((Tok::LParen, line, col));
                chars.next();
                col += 1;
            }
            ')' => {
                toks.push((Tok::RParen, line, col));
                chars.next();
                col += 1;
            }
            ',' => {
                toks.push((Tok::Comma, line, col));
                chars.next();
                col += 1;
            }
            '-' => {
                let start = col;
                chars.next();
                col += 1;
                if chars.peek() == Some(&'>') {
                    chars.next();
                    col += 1;
                    toks.push((Tok::Arrow, line, start));
                } else {
                    return Err(ParseError::new(line, start, "expected '->'"));
                }
            }
            c if c.is_ascii_alphabetic() => {
                let start = col;
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(ident), line, start));
            }
            other => {
                return Err(ParseError::new(
                    line,
                    col,
                    format!("unexpected character {:?}", other),
                ));
            }
        }
    }
    Ok(Lexer {
        toks,
        pos: 0,
        end: (line, col),
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|&(_, l, c)| (l, c))
            .unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let (l, c) = self.here();
        match self.next() {
            Some(t) if t == want => Ok(()),
            _ => Err(ParseError::new(l, c, format!("expected {}", what))),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let (l, c) = self.here();
        match self.next() {
            Some(Tok::Ident(id)) if id == kw => Ok(()),
            _ => Err(ParseError::new(l, c, format!("expected '{}'", kw))),
        }
    }
}

struct TermParser<'a> {
    lex: &'a mut Lexer,
    vars: &'a [String],
    arities: &'a mut BTreeMap<String, usize>,
}

impl TermParser<'_> {
    fn term(&mut self) -> Result<Term, ParseError> {
        let (l, c) = self.lex.here();
        let name = match self.lex.next() {
            Some(Tok::Ident(id)) => id,
            _ => return Err(ParseError::new(l, c, "expected identifier")),
        };
        if self.vars.contains(&name) {
            return Ok(Term::var(&name));
        }
        let mut args = Vec::new();
        if self.lex.peek() == Some(&Tok::LParen) {
            self.lex.next();
            if self.lex.peek() == Some(&Tok::RParen) {
                let (l, c) = self.lex.here();
                return Err(ParseError::new(
                    l,
                    c,
                    "empty argument list; write nullary symbols bare",
                ));
            }
            loop {
                args.push(self.term()?);
                match self.lex.peek() {
                    Some(Tok::Comma) => {
                        self.lex.next();
                    }
                    Some(Tok::RParen) => {
                        self.lex.next();
                        break;
                    }
                    _ => {
                        let (l, c) = self.lex.here();
                        return Err(ParseError::new(l, c, "expected ',' or ')'"));
                    }
                }
            }
        }
        let arity = args.len();
        if let Some(reserved) = schema::reserved_arity(&name) {
            if arity != reserved {
                return Err(ParseError::new(
                    l,
                    c,
                    format!(
                        "arity mismatch for symbol {}: reserved arity {}, used with {}",
                        name, reserved, arity
                    ),
                ));
            }
        }
        match self.arities.get(&name) {
            Some(&known) if known != arity => {
                return Err(ParseError::new(
                    l,
                    c,
                    format!(
                        "arity mismatch for symbol {}: first used with {}, here {}",
                        name, known, arity
                    ),
                ));
            }
            Some(_) => {}
            None => {
                self.arities.insert(name.clone(), arity);
            }
        }
        Term::app(Symbol::new(&name, arity), args).map_err(|e| ParseError::new(l, c, e.to_string()))
    }
}

/// Parses the TPDB-subset text format into an arity-checked system.
pub fn parse_trs(text: &str) -> Result<Trs, ParseError> {
    let mut lex = lex(text)?;
    lex.expect(Tok::LParen, "'('")?;
    lex.expect_keyword("VAR")?;
    let mut vars = Vec::new();
    loop {
        match lex.peek() {
            Some(Tok::Ident(_)) => {
                if let Some(Tok::Ident(id)) = lex.next() {
                    vars.push(id);
                }
            }
            Some(Tok::RParen) => {
                lex.next();
                break;
            }
            _ => {
                let (l, c) = lex.here();
                return Err(ParseError::new(l, c, "expected variable name or ')'"));
            }
        }
    }
    lex.expect(Tok::LParen, "'('")?;
    lex.expect_keyword("RULES")?;
    let mut arities = BTreeMap::new();
    let mut rules = Vec::new();
    loop {
        match lex.peek() {
            Some(Tok::RParen) => {
                lex.next();
                break;
            }
            Some(_) => {
                let (rl, rc) = lex.here();
                let lhs = TermParser {
                    lex: &mut lex,
                    vars: &vars,
                    arities: &mut arities,
                }
                .term()?;
                lex.expect(Tok::Arrow, "'->'")?;
                let rhs = TermParser {
                    lex: &mut lex,
                    vars: &vars,
                    arities: &mut arities,
                }
                .term()?;
                let label = format!("r{}", rules.len());
                let rule = Rule::new(&label, lhs, rhs)
                    .map_err(|e| ParseError::new(rl, rc, e.to_string()))?;
                rules.push(rule);
            }
            None => {
                let (l, c) = lex.here();
                return Err(ParseError::new(l, c, "unterminated RULES block"));
            }
        }
    }
    if lex.peek().is_some() {
        let (l, c) = lex.here();
        return Err(ParseError::new(l, c, "trailing input after RULES block"));
    }
    Trs::new("parsed", rules).map_err(|e| ParseError::new(1, 1, e.to_string()))
}

/// Parses a single ground term, e.g. a `--payload` argument. Every
/// identifier is a function symbol; arities are inferred and must be
/// consistent, with the schema four reserved.
pub fn parse_ground_term(text: &str) -> Result<Term, ParseError> {
    let mut lex = lex(text)?;
    let vars: Vec<String> = Vec::new();
    let mut arities = BTreeMap::new();
    let t = TermParser {
        lex: &mut lex,
        vars: &vars,
        arities: &mut arities,
    }
    .term()?;
    if lex.peek().is_some() {
        let (l, c) = lex.here();
        return Err(ParseError::new(l, c, "trailing input after term"));
    }
    Ok(t)
}

/// Canonical text for a system: variables in first-occurrence order, one
/// rule per line. `parse_trs` accepts exactly this output.
pub fn emit_trs_text(trs: &Trs) -> String {
    let mut vars: Vec<Name> = Vec::new();
    for r in &trs.rules {
        for v in r.lhs.vars().into_iter().chain(r.rhs.vars()) {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
    }
    let mut out = String::from("(VAR");
    for v in &vars {
        out.push(' ');
        out.push_str(v);
    }
    out.push_str(")\n(RULES\n");
    for r in &trs.rules {
        out.push_str(&format!("  {} -> {}\n", r.lhs, r.rhs));
    }
    out.push_str(")\n");
    out
}

impl fmt::Display for Trs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", emit_trs_text(self))
    }
}

/// First-order matching: finds `sigma` with `pattern sigma == subject`.
/// Non-linear patterns require consistent bindings.
pub fn match_term(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    if match_into(pattern, subject, &mut sigma) {
        Some(sigma)
    } else {
        None
    }
}

fn match_into(pattern: &Term, subject: &Term, sigma: &mut Substitution) -> bool {
    match pattern.var_name() {
        Some(v) => match sigma.get(v) {
            Some(bound) => bound == subject,
            None => {
                sigma.bind(v, subject.clone());
                true
            }
        },
        None => {
            let (ph, sh) = match (pattern.head(), subject.head()) {
                (Some(p), Some(s)) => (p, s),
                _ => return false,
            };
            if ph != sh {
                return false;
            }
            pattern
                .args()
                .iter()
                .zip(subject.args())
                .all(|(p, s)| match_into(p, s, sigma))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DUPLICATOR: &str = "(VAR x y n) (RULES F(x,y,Z) -> x F(x,y,S(n)) -> G(y,F(x,y,n)))";

    #[test]
    fn parses_the_duplicator() {
        let trs = parse_trs(DUPLICATOR).unwrap();
        assert_eq!(trs.rules.len(), 2);
        assert_eq!(trs.signature.len(), 4);
        assert!(trs.same_rules(&Trs::recursor()));
    }

    #[test]
    fn parses_empty_rule_list() {
        let trs = parse_trs("(VAR x) (RULES )").unwrap();
        assert_eq!(trs.rules.len(), 0);
    }

    #[test]
    fn missing_var_block_is_a_syntax_error() {
        let err = parse_trs("(RULES f(x) -> g(x,x))").unwrap_err();
        assert!(err.message.contains("VAR"), "{}", err);
    }

    #[test]
    fn arity_mismatch_names_the_symbol() {
        let err = parse_trs("(VAR x) (RULES f(x) -> f(x,x))").unwrap_err();
        assert!(err.message.contains('f'), "{}", err);
        assert!(err.message.contains("arity"), "{}", err);
    }

    #[test]
    fn reserved_schema_arities_are_enforced() {
        let err = parse_trs("(VAR x) (RULES G(x) -> x)").unwrap_err();
        assert!(err.message.contains('G'), "{}", err);
    }

    #[test]
    fn rhs_only_variable_names_the_rule() {
        let err = parse_trs("(VAR x y) (RULES f(x) -> y)").unwrap_err();
        assert!(err.message.contains("r0"), "{}", err);
    }

    #[test]
    fn round_trip_is_stable() {
        let trs = Trs::recursor();
        let text = emit_trs_text(&trs);
        let reparsed = parse_trs(&text).unwrap();
        assert!(trs.same_rules(&reparsed));
        assert_eq!(text, emit_trs_text(&reparsed));
    }

    #[test]
    fn ground_rules_round_trip_with_an_empty_var_block() {
        let trs = parse_trs("(VAR) (RULES F(Z,Z,Z) -> Z)").unwrap();
        assert_eq!(trs.rules.len(), 1);
        let text = emit_trs_text(&trs);
        assert!(text.starts_with("(VAR)\n"));
        let reparsed = parse_trs(&text).unwrap();
        assert!(trs.same_rules(&reparsed));
    }

    #[test]
    fn crlf_input_is_normalized() {
        let text = "(VAR x y n)\r\n(RULES\r\n  F(x,y,Z) -> x\r\n)\r\n";
        let trs = parse_trs(text).unwrap();
        assert_eq!(trs.rules.len(), 1);
    }

    #[test]
    fn non_ascii_identifiers_are_rejected_with_position() {
        let err = parse_trs("(VAR x)\n(RULES f\u{e9}(x) -> x)").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("non-ASCII"), "{}", err);
    }

    #[test]
    fn positions_are_reported() {
        let err = parse_trs("(VAR x)\n(RULES f(x) -> )").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn matching_binds_consistently() {
        let trs = Trs::recursor();
        let step = trs.rule("step").unwrap();
        let subject = Term::f(Term::z(), Term::tower(1), Term::tower(1));
        let sigma = match_term(&step.lhs, &subject).unwrap();
        assert_eq!(sigma.get("y"), Some(&Term::tower(1)));
        assert_eq!(sigma.get("n"), Some(&Term::z()));
        // non-linear pattern: h(x,x) must not match h(Z,S(Z))
        let h = Symbol::new("h", 2);
        let pat = Term::app(h.clone(), vec![Term::var("x"), Term::var("x")]).unwrap();
        let bad = Term::app(h, vec![Term::z(), Term::tower(1)]).unwrap();
        assert!(match_term(&pat, &bad).is_none());
    }
}
