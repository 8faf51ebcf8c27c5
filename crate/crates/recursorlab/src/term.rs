//! Immutable first-order terms over the schema signature `{F, G, S, Z}`
//! plus free variables and extension symbols.
//!
//! Terms are value-semantic: equality, hashing and all statistics are
//! structural. Sharing below the term level (via `Arc`) is an internal
//! optimization and is never observable.

use smallvec::SmallVec;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

pub type Name = Arc<str>;

/// A function symbol with a fixed arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    name: Name,
    arity: usize,
}

impl Symbol {
    pub fn new(name: &str, arity: usize) -> Symbol {
        Symbol {
            name: Arc::from(name),
            arity,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

/// The four schema symbols. Extension symbols must stay away from these
/// names; `crate::trs` enforces the reserved arities on construction.
pub mod schema {
    use super::Symbol;

    pub fn f() -> Symbol {
        Symbol::new("F", 3)
    }

    pub fn g() -> Symbol {
        Symbol::new("G", 2)
    }

    pub fn s() -> Symbol {
        Symbol::new("S", 1)
    }

    pub fn z() -> Symbol {
        Symbol::new("Z", 0)
    }

    /// Reserved arity for a schema name, if the name is reserved.
    pub fn reserved_arity(name: &str) -> Option<usize> {
        match name {
            "F" => Some(3),
            "G" => Some(2),
            "S" => Some(1),
            "Z" => Some(0),
            _ => None,
        }
    }
}

#[derive(Debug)]
enum TermData {
    Var(Name),
    App(Symbol, SmallVec<[Term; 3]>),
}

/// An immutable first-order term.
#[derive(Clone)]
pub struct Term(Arc<TermData>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error(
        "arity mismatch for symbol {symbol}: declared {declared}, applied to {given} arguments"
    )]
    ArityMismatch {
        symbol: String,
        declared: usize,
        given: usize,
    },
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term(Arc::new(TermData::Var(Arc::from(name))))
    }

    /// Builds an application; the argument count must match the symbol arity.
    pub fn app(symbol: Symbol, args: Vec<Term>) -> Result<Term, TermError> {
        if args.len() != symbol.arity() {
            return Err(TermError::ArityMismatch {
                symbol: symbol.name().to_string(),
                declared: symbol.arity(),
                given: args.len(),
            });
        }
        Ok(Term(Arc::new(TermData::App(
            symbol,
            SmallVec::from_vec(args),
        ))))
    }

    pub(crate) fn app_inline(symbol: Symbol, args: SmallVec<[Term; 3]>) -> Term {
        debug_assert_eq!(args.len(), symbol.arity());
        Term(Arc::new(TermData::App(symbol, args)))
    }

    pub fn constant(name: &str) -> Term {
        Term::app_inline(Symbol::new(name, 0), SmallVec::new())
    }

    pub fn z() -> Term {
        Term::app_inline(schema::z(), SmallVec::new())
    }

    pub fn s(inner: Term) -> Term {
        Term::app_inline(schema::s(), smallvec::smallvec![inner])
    }

    pub fn g(first: Term, second: Term) -> Term {
        Term::app_inline(schema::g(), smallvec::smallvec![first, second])
    }

    pub fn f(base: Term, payload: Term, counter: Term) -> Term {
        Term::app_inline(schema::f(), smallvec::smallvec![base, payload, counter])
    }

    /// `S^height(Z)`.
    pub fn tower(height: u64) -> Term {
        let mut t = Term::z();
        for _ in 0..height {
            t = Term::s(t);
        }
        t
    }

    pub fn is_var(&self) -> bool {
        matches!(&*self.0, TermData::Var(_))
    }

    pub fn var_name(&self) -> Option<&str> {
        match &*self.0 {
            TermData::Var(n) => Some(n),
            TermData::App(..) => None,
        }
    }

    pub fn head(&self) -> Option<&Symbol> {
        match &*self.0 {
            TermData::Var(_) => None,
            TermData::App(sym, _) => Some(sym),
        }
    }

    pub fn args(&self) -> &[Term] {
        match &*self.0 {
            TermData::Var(_) => &[],
            TermData::App(_, args) => args,
        }
    }

    pub fn same_node(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Structural size: the number of symbol nodes. Variables count 0.
    pub fn size(&self) -> u64 {
        match &*self.0 {
            TermData::Var(_) => 0,
            TermData::App(_, args) => 1 + args.iter().map(Term::size).sum::<u64>(),
        }
    }

    /// Total node count: symbol nodes plus variable nodes.
    pub fn node_count(&self) -> u64 {
        match &*self.0 {
            TermData::Var(_) => 1,
            TermData::App(_, args) => 1 + args.iter().map(Term::node_count).sum::<u64>(),
        }
    }

    pub fn is_ground(&self) -> bool {
        match &*self.0 {
            TermData::Var(_) => false,
            TermData::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Name>) {
        match &*self.0 {
            TermData::Var(n) => {
                out.insert(n.clone());
            }
            TermData::App(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    pub fn count_var(&self, name: &str) -> u64 {
        match &*self.0 {
            TermData::Var(n) => (&**n == name) as u64,
            TermData::App(_, args) => args.iter().map(|a| a.count_var(name)).sum(),
        }
    }

    /// Number of occurrences of `symbol` in the term.
    pub fn count_symbol(&self, symbol: &Symbol) -> u64 {
        match &*self.0 {
            TermData::Var(_) => 0,
            TermData::App(sym, args) => {
                (sym == symbol) as u64 + args.iter().map(|a| a.count_symbol(symbol)).sum::<u64>()
            }
        }
    }

    /// Number of positions at which `pattern` occurs as a subterm.
    /// Overlapping occurrences are counted per position.
    pub fn count_subterm(&self, pattern: &Term) -> u64 {
        let here = (self == pattern) as u64;
        here + self
            .args()
            .iter()
            .map(|a| a.count_subterm(pattern))
            .sum::<u64>()
    }

    pub fn contains_subterm(&self, pattern: &Term) -> bool {
        self == pattern || self.args().iter().any(|a| a.contains_subterm(pattern))
    }

    /// Strict subterm: occurs below the root.
    pub fn has_strict_subterm(&self, pattern: &Term) -> bool {
        self.args().iter().any(|a| a.contains_subterm(pattern))
    }

    /// Height of the outermost `S`-chain: `S^m(t)` with `t` not `S`-headed
    /// gives `m`.
    pub fn successor_height(&self) -> u64 {
        let mut height = 0;
        let mut cur = self;
        while let TermData::App(sym, args) = &*cur.0 {
            if sym.name() == "S" && sym.arity() == 1 {
                height += 1;
                cur = &args[0];
            } else {
                break;
            }
        }
        height
    }

    /// The subterm at `position`, if the position exists.
    pub fn at_position(&self, position: &[usize]) -> Option<&Term> {
        let mut cur = self;
        for &i in position {
            cur = cur.args().get(i)?;
        }
        Some(cur)
    }

    /// Replaces the subterm at `position` in an owned term. When the handle
    /// is unique the spine is updated in place; shared nodes are copied on
    /// write, so the result is always value-correct.
    pub(crate) fn replace_at_owned(&mut self, position: &[usize], replacement: Term) {
        match position.split_first() {
            None => *self = replacement,
            Some((&i, rest)) => match Arc::make_mut(&mut self.0) {
                TermData::Var(_) => panic!("replace_at_owned: position descends into a variable"),
                TermData::App(_, args) => args[i].replace_at_owned(rest, replacement),
            },
        }
    }

    /// Hot-path accessor for the trace stepper: checks this node is a
    /// wrapper cell `G(payload, rest)` and hands back `rest` mutably in a
    /// single dereference.
    pub(crate) fn wrapper_cell_mut(&mut self, payload: &Term) -> Option<&mut Term> {
        match Arc::make_mut(&mut self.0) {
            TermData::App(sym, args)
                if sym.arity() == 2 && sym.name() == "G" && args[0] == *payload =>
            {
                Some(&mut args[1])
            }
            _ => None,
        }
    }
}

impl Clone for TermData {
    fn clone(&self) -> TermData {
        match self {
            TermData::Var(n) => TermData::Var(n.clone()),
            TermData::App(sym, args) => TermData::App(sym.clone(), args.clone()),
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&*self.0, &*other.0) {
            (TermData::Var(a), TermData::Var(b)) => a == b,
            (TermData::App(f, xs), TermData::App(g, ys)) => f == g && xs == ys,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl std::hash::Hash for Term {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match &*self.0 {
            TermData::Var(n) => {
                0u8.hash(state);
                n.hash(state);
            }
            TermData::App(sym, args) => {
                1u8.hash(state);
                sym.hash(state);
                for a in args {
                    a.hash(state);
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            TermData::Var(n) => write!(f, "{}", n),
            TermData::App(sym, args) => {
                write!(f, "{}", sym.name())?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", a)?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A simultaneous, capture-free replacement of variables by terms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Name, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn bind(&mut self, var: &str, image: Term) {
        self.bindings.insert(Arc::from(var), image);
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.bindings.iter().map(|(k, v)| (&**k, v))
    }

    /// Applies the substitution; unbound variables are left in place.
    pub fn apply(&self, t: &Term) -> Term {
        if self.bindings.is_empty() {
            return t.clone();
        }
        match &*t.0 {
            TermData::Var(n) => match self.bindings.get(n) {
                Some(image) => image.clone(),
                None => t.clone(),
            },
            TermData::App(sym, args) => {
                let new_args: SmallVec<[Term; 3]> = args.iter().map(|a| self.apply(a)).collect();
                if new_args
                    .iter()
                    .zip(args.iter())
                    .all(|(n, o)| Arc::ptr_eq(&n.0, &o.0))
                {
                    t.clone()
                } else {
                    Term::app_inline(sym.clone(), new_args)
                }
            }
        }
    }
}

impl<const N: usize> From<[(&str, Term); N]> for Substitution {
    fn from(pairs: [(&str, Term); N]) -> Substitution {
        let mut s = Substitution::new();
        for (v, t) in pairs {
            s.bind(v, t);
        }
        s
    }
}
