//! Primitive recursive definitions over a tree language and their
//! evaluator.
//!
//! A definition `f` of arity `n` recurses on a fixed argument position and
//! gives one clause per constructor (a `_` clause covers the remaining
//! constructors). Clause bodies are built from parameters `(arg j)`,
//! children of the recursion argument `(child i)`, recursive calls on a
//! child `(rec i e…)` (the other parameters may be replaced; omitted means
//! unchanged), calls to earlier definitions `(call g e…)`, constructor
//! applications and `(let (x e) body)`. Indices are 0-based. `(arg j)` at the
//! recursion position denotes the whole recursion argument.
//!
//! Non-recursive arguments are evaluated lazily.

use std::cell::{Cell, OnceCell, RefCell};
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use super::tree::{decimal, Tree, TreeLang};
use crate::error::{Error, Result};
use crate::sexpr::{self, SExpr};
use crate::syntax::{index_of, Formula, Sort, Term, TermVar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Arg(usize),
    Child(usize),
    Rec(usize, Option<Vec<Expr>>),
    Call(String, Vec<Expr>),
    Ctor(usize, Vec<Expr>),
    Let(String, Box<Expr>, Box<Expr>),
    Local(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    /// `None` is the default clause.
    pub ctor: Option<usize>,
    pub body: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimRecDef {
    pub name: String,
    pub arity: usize,
    /// Recursion position; `None` only for constants (arity 0).
    pub rec: Option<usize>,
    pub clauses: Vec<Clause>,
}

impl PrimRecDef {
    /// Clauses with the default expanded, one per constructor, in
    /// constructor order.
    pub fn expanded(&self, lang: &TreeLang) -> Vec<(Option<usize>, &Expr)> {
        if self.rec.is_none() {
            return self.clauses.iter().map(|c| (None, &c.body)).collect();
        }
        let default = self.clauses.iter().find(|c| c.ctor.is_none()).map(|c| &c.body);
        (0..lang.len())
            .filter_map(|k| {
                self.clauses
                    .iter()
                    .find(|c| c.ctor == Some(k))
                    .map(|c| &c.body)
                    .or(default)
                    .map(|b| (Some(k), b))
            })
            .collect()
    }

    /// The equational axioms of the definition as closed formulas of the
    /// mono-sorted theory over `sort`.
    pub fn equations(&self, lang: &TreeLang, sort: &Sort) -> Vec<Formula> {
        let param = |j: usize| TermVar::new(index_of(&format!("x{}", j + 1)).unwrap(), sort.clone());
        let child = |i: usize| TermVar::new(index_of(&format!("y{}", i + 1)).unwrap(), sort.clone());
        self.expanded(lang)
            .into_iter()
            .map(|(ctor, body)| {
                let mut vars: Vec<TermVar> = Vec::new();
                let head_arg = ctor.map(|c| {
                    let kids: Vec<TermVar> = (0..lang.arity(c)).map(child).collect();
                    Term::App(lang.name(c).into(), kids.iter().map(Term::var).collect())
                });
                let args: Vec<Term> = (0..self.arity)
                    .map(|j| {
                        if Some(j) == self.rec {
                            head_arg.clone().unwrap()
                        } else {
                            vars.push(param(j));
                            Term::var(&param(j))
                        }
                    })
                    .collect();
                if let Some(c) = ctor {
                    vars.extend((0..lang.arity(c)).map(child));
                }
                let ctx = EqCtx { lang, def: self, args: &args, rec_kids: ctor.map(|c| lang.arity(c)).unwrap_or(0) };
                let rhs = ctx.term(body, &mut Vec::new());
                let lhs = Term::App(self.name.as_str().into(), args.clone());
                Formula::forall_many(vars, Formula::atom("=", vec![lhs, rhs]))
            })
            .collect()
    }
}

struct EqCtx<'a> {
    lang: &'a TreeLang,
    def: &'a PrimRecDef,
    args: &'a [Term],
    rec_kids: usize,
}

impl EqCtx<'_> {
    fn child(&self, i: usize) -> Term {
        match &self.args[self.def.rec.unwrap()] {
            Term::App(_, kids) => kids[i].clone(),
            Term::Var(_) => unreachable!(),
        }
    }

    fn term(&self, e: &Expr, locals: &mut Vec<(String, Term)>) -> Term {
        match e {
            Expr::Arg(j) => self.args[*j].clone(),
            Expr::Child(i) => {
                debug_assert!(*i < self.rec_kids);
                self.child(*i)
            }
            Expr::Rec(i, new_args) => {
                let rec = self.def.rec.unwrap();
                let mut others = match new_args {
                    Some(es) => es.iter().map(|a| self.term(a, locals)).collect(),
                    None => self
                        .args
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != rec)
                        .map(|(_, a)| a.clone())
                        .collect::<Vec<_>>(),
                }
                .into_iter();
                let args = (0..self.def.arity)
                    .map(|j| if j == rec { self.child(*i) } else { others.next().unwrap() })
                    .collect();
                Term::App(self.def.name.as_str().into(), args)
            }
            Expr::Call(g, es) => Term::App(g.as_str().into(), es.iter().map(|a| self.term(a, locals)).collect()),
            Expr::Ctor(c, es) => {
                Term::App(self.lang.name(*c).into(), es.iter().map(|a| self.term(a, locals)).collect())
            }
            Expr::Let(x, v, body) => {
                let t = self.term(v, locals);
                locals.push((x.clone(), t));
                let r = self.term(body, locals);
                locals.pop();
                r
            }
            Expr::Local(x) => locals.iter().rev().find(|(y, _)| y == x).unwrap().1.clone(),
        }
    }
}

/// Reads `(prdef …)` forms against a language, resolving called names
/// through `arity_of`.
pub struct DefParser<'a> {
    lang: &'a TreeLang,
    arity_of: &'a dyn Fn(&str) -> Option<usize>,
}

impl<'a> DefParser<'a> {
    pub fn new(lang: &'a TreeLang, arity_of: &'a dyn Fn(&str) -> Option<usize>) -> Self {
        DefParser { lang, arity_of }
    }

    fn index(sx: &SExpr, what: &str) -> Result<usize> {
        let a = sx.expect_atom(what)?;
        decimal(a)
            .map(|n| n as usize)
            .ok_or_else(|| Error::syntax(sx.pos(), format!("expected {what}, found `{a}`")))
    }

    pub fn def(&self, sx: &SExpr) -> Result<PrimRecDef> {
        let items = sx.expect_form("prdef")?;
        if items.len() < 2 {
            return Err(Error::syntax(sx.pos(), "(prdef <name> <arity> (rec <pos>) (clause <ctor> <expr>) …)"));
        }
        let name = items[0].expect_atom("definition name")?.to_string();
        let arity = Self::index(&items[1], "an arity")?;
        let mut rest = &items[2..];
        let rec = match rest.first() {
            Some(r) if r.head() == Some("rec") => {
                let f = r.expect_form("rec")?;
                if f.len() != 1 {
                    return Err(Error::syntax(r.pos(), "(rec <argument position>)"));
                }
                rest = &rest[1..];
                Some(Self::index(&f[0], "an argument position")?)
            }
            _ => None,
        };
        let mut clauses = Vec::new();
        for c in rest {
            let f = c.expect_form("clause")?;
            if f.len() != 2 {
                return Err(Error::syntax(c.pos(), "(clause <ctor> <expr>)"));
            }
            let cname = f[0].expect_atom("constructor")?;
            let ctor = if cname == "_" {
                None
            } else {
                Some(self.lang.find(cname).ok_or_else(|| Error::ill_formed(&name, format!("unknown constructor `{cname}`")))?)
            };
            let body = self.expr(&f[1], &mut Vec::new())?;
            clauses.push(Clause { ctor, body });
        }
        Ok(PrimRecDef { name, arity, rec, clauses })
    }

    fn expr(&self, sx: &SExpr, locals: &mut Vec<String>) -> Result<Expr> {
        match sx {
            SExpr::Atom(a, pos) => {
                if locals.iter().any(|l| l == a) {
                    return Ok(Expr::Local(a.clone()));
                }
                if let Some(c) = self.lang.find(a) {
                    if self.lang.arity(c) == 0 {
                        return Ok(Expr::Ctor(c, vec![]));
                    }
                }
                if let Some(n) = decimal(a) {
                    return Ok(numeral_expr(self.lang, n));
                }
                if (self.arity_of)(a) == Some(0) {
                    return Ok(Expr::Call(a.clone(), vec![]));
                }
                Err(Error::syntax(*pos, format!("unknown name `{a}` in expression")))
            }
            SExpr::List(items, pos) => {
                let (h, rest) = items.split_first().ok_or_else(|| Error::syntax(*pos, "empty expression"))?;
                let head = h.expect_atom("expression head")?;
                let sub = |this: &Self, locals: &mut Vec<String>, es: &[SExpr]| {
                    es.iter().map(|e| this.expr(e, locals)).collect::<Result<Vec<_>>>()
                };
                let one_index = |what| {
                    if rest.len() != 1 {
                        return Err(Error::syntax(*pos, format!("({head} <{what}>)")));
                    }
                    Self::index(&rest[0], what)
                };
                match head {
                    "arg" => Ok(Expr::Arg(one_index("position")?)),
                    "child" => Ok(Expr::Child(one_index("index")?)),
                    "rec" => {
                        let first = rest.first().ok_or_else(|| Error::syntax(*pos, "(rec <child> <args>…)"))?;
                        let i = Self::index(first, "child index")?;
                        let args = if rest.len() == 1 { None } else { Some(sub(self, locals, &rest[1..])?) };
                        Ok(Expr::Rec(i, args))
                    }
                    "call" => {
                        let first = rest.first().ok_or_else(|| Error::syntax(*pos, "(call <name> <args>…)"))?;
                        let g = first.expect_atom("function name")?.to_string();
                        Ok(Expr::Call(g, sub(self, locals, &rest[1..])?))
                    }
                    "let" => {
                        let [binding, body] = rest else {
                            return Err(Error::syntax(*pos, "(let (<name> <expr>) <body>)"));
                        };
                        let b = binding.expect_list("(<name> <expr>)")?;
                        let [x, v] = b else { return Err(Error::syntax(binding.pos(), "(<name> <expr>)")) };
                        let x = x.expect_atom("local name")?.to_string();
                        let v = self.expr(v, locals)?;
                        locals.push(x.clone());
                        let body = self.expr(body, locals);
                        locals.pop();
                        Ok(Expr::Let(x, Box::new(v), Box::new(body?)))
                    }
                    c => {
                        let k = self
                            .lang
                            .find(c)
                            .ok_or_else(|| Error::syntax(h.pos(), format!("unknown constructor `{c}`")))?;
                        Ok(Expr::Ctor(k, sub(self, locals, rest)?))
                    }
                }
            }
        }
    }
}

fn numeral_expr(lang: &TreeLang, n: u32) -> Expr {
    (0..n).fold(Expr::Ctor(lang.zero(), vec![]), |e, _| Expr::Ctor(lang.succ(), vec![e]))
}

pub fn print_def(lang: &TreeLang, d: &PrimRecDef) -> String {
    let mut out = format!("(prdef {} {}", d.name, d.arity);
    if let Some(r) = d.rec {
        out.push_str(&format!(" (rec {r})"));
    }
    for c in &d.clauses {
        let name = c.ctor.map_or("_", |k| lang.name(k));
        out.push_str(&format!("\n  (clause {name} {})", print_expr(lang, &c.body)));
    }
    out.push(')');
    out
}

pub fn print_expr(lang: &TreeLang, e: &Expr) -> String {
    let list = |head: String, es: &[Expr]| {
        let mut s = format!("({head}");
        for x in es {
            s.push(' ');
            s.push_str(&print_expr(lang, x));
        }
        s.push(')');
        s
    };
    match e {
        Expr::Arg(j) => format!("(arg {j})"),
        Expr::Child(i) => format!("(child {i})"),
        Expr::Rec(i, None) => format!("(rec {i})"),
        Expr::Rec(i, Some(es)) => list(format!("rec {i}"), es),
        Expr::Call(g, es) if es.is_empty() => g.clone(),
        Expr::Call(g, es) => list(format!("call {g}"), es),
        Expr::Ctor(c, es) if es.is_empty() => lang.name(*c).to_string(),
        Expr::Ctor(c, es) => list(lang.name(*c).to_string(), es),
        Expr::Let(x, v, b) => format!("(let ({x} {}) {})", print_expr(lang, v), print_expr(lang, b)),
        Expr::Local(x) => x.clone(),
    }
}

// Compiled form: names resolved to indices.
#[derive(Debug)]
enum Code {
    Arg(usize),
    Child(usize),
    Rec(usize, Option<Box<[Code]>>),
    Call(usize, Box<[Code]>),
    Ctor(u16, Box<[Code]>),
    Const(Tree),
    Let(usize, Box<Code>, Box<Code>),
    Local(usize),
}

struct Compiled {
    arity: usize,
    rec: Option<usize>,
    /// Indexed by constructor; a single entry for constants.
    table: Vec<Code>,
    slots: usize,
}

/// An ordered registry of definitions; each may call only earlier ones.
pub struct PrEnv {
    lang: TreeLang,
    defs: Vec<PrimRecDef>,
    compiled: Vec<Compiled>,
    index: HashMap<String, usize>,
}

impl PrEnv {
    pub fn new(lang: TreeLang) -> Self {
        PrEnv { lang, defs: Vec::new(), compiled: Vec::new(), index: HashMap::new() }
    }

    pub fn lang(&self) -> &TreeLang {
        &self.lang
    }

    pub fn defs(&self) -> &[PrimRecDef] {
        &self.defs
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn get(&self, name: &str) -> Option<&PrimRecDef> {
        self.find(name).map(|i| &self.defs[i])
    }

    /// Parses and registers every `(prdef …)` form of `text`.
    pub fn load(&mut self, text: &str) -> Result<()> {
        for sx in sexpr::parse_all(text)? {
            let def = {
                let arity_of = |n: &str| self.get(n).map(|d| d.arity);
                DefParser::new(&self.lang, &arity_of).def(&sx)?
            };
            self.add(def)?;
        }
        Ok(())
    }

    pub fn add(&mut self, def: PrimRecDef) -> Result<()> {
        let compiled = self.validate(&def)?;
        self.index.insert(def.name.clone(), self.defs.len());
        self.defs.push(def);
        self.compiled.push(compiled);
        Ok(())
    }

    fn validate(&self, d: &PrimRecDef) -> Result<Compiled> {
        let bad = |msg: String| Error::ill_formed(&d.name, msg);
        if self.index.contains_key(&d.name) {
            return Err(bad("defined twice".into()));
        }
        if self.lang.find(&d.name).is_some() {
            return Err(bad("name clashes with a constructor".into()));
        }
        match d.rec {
            None if d.arity != 0 => return Err(bad("a recursion position is required".into())),
            None if d.clauses.len() != 1 || d.clauses[0].ctor.is_some() => {
                return Err(bad("a constant has exactly one `_` clause".into()))
            }
            Some(r) if r >= d.arity => return Err(bad(format!("recursion position {r} out of range"))),
            _ => {}
        }
        let mut seen = vec![false; self.lang.len()];
        let mut defaults = 0;
        for c in &d.clauses {
            match c.ctor {
                Some(k) if seen[k] => return Err(bad(format!("two clauses for `{}`", self.lang.name(k)))),
                Some(k) => seen[k] = true,
                None => defaults += 1,
            }
        }
        if defaults > 1 {
            return Err(bad("more than one `_` clause".into()));
        }
        if d.rec.is_some() && defaults == 0 {
            if let Some(k) = seen.iter().position(|s| !s) {
                return Err(bad(format!("no clause for constructor `{}`", self.lang.name(k))));
            }
        }
        let mut slots = 0;
        let mut table = Vec::new();
        for (ctor, body) in d.expanded(&self.lang) {
            let kids = match (ctor, d.clauses.iter().any(|c| c.ctor == ctor)) {
                (Some(k), true) => Some(self.lang.arity(k)),
                _ => None,
            };
            let mut locals = Vec::new();
            table.push(self.compile(d, kids, body, &mut locals, &mut slots)?);
        }
        Ok(Compiled { arity: d.arity, rec: d.rec, table, slots })
    }

    /// `kids` is the arity of the clause's constructor, `None` inside a
    /// default clause (where children are not available).
    fn compile(
        &self,
        d: &PrimRecDef,
        kids: Option<usize>,
        e: &Expr,
        locals: &mut Vec<(String, usize)>,
        slots: &mut usize,
    ) -> Result<Code> {
        let bad = |msg: String| Error::ill_formed(&d.name, msg);
        let many = |this: &Self, locals: &mut Vec<(String, usize)>, slots: &mut usize, es: &[Expr]| {
            es.iter().map(|x| this.compile(d, kids, x, locals, slots)).collect::<Result<Box<[Code]>>>()
        };
        let child_ok = |i: usize| match kids {
            Some(k) if i < k => Ok(()),
            Some(k) => Err(bad(format!("child {i} of a constructor with {k} children"))),
            None => Err(bad("children are not available in a default clause".into())),
        };
        Ok(match e {
            Expr::Arg(j) if *j < d.arity => Code::Arg(*j),
            Expr::Arg(j) => return Err(bad(format!("argument {j} out of range"))),
            Expr::Child(i) => {
                child_ok(*i)?;
                Code::Child(*i)
            }
            Expr::Rec(i, args) => {
                child_ok(*i)?;
                match args {
                    None => Code::Rec(*i, None),
                    Some(a) if a.len() + 1 == d.arity => Code::Rec(*i, Some(many(self, locals, slots, a)?)),
                    Some(a) => {
                        return Err(bad(format!("recursive call with {} arguments, expected {}", a.len(), d.arity - 1)))
                    }
                }
            }
            Expr::Call(g, args) => {
                if g == &d.name {
                    return Err(bad("direct self-call; use (rec …) on a child".into()));
                }
                let gi = self.find(g).ok_or_else(|| bad(format!("`{g}` is not defined before this definition")))?;
                if self.defs[gi].arity != args.len() {
                    return Err(bad(format!("`{g}` takes {} arguments", self.defs[gi].arity)));
                }
                if args.is_empty() {
                    let t = self.eval(gi, &[])?;
                    return Ok(Code::Const(t));
                }
                Code::Call(gi, many(self, locals, slots, args)?)
            }
            Expr::Ctor(c, args) => {
                if *c >= self.lang.len() || self.lang.arity(*c) != args.len() {
                    return Err(bad(format!("constructor applied to {} arguments", args.len())));
                }
                let code = many(self, locals, slots, args)?;
                if code.iter().all(|x| matches!(x, Code::Const(_))) {
                    let kids = code.iter().map(|x| if let Code::Const(t) = x { t.clone() } else { unreachable!() });
                    Code::Const(Tree::new(*c as u16, kids.collect()))
                } else {
                    Code::Ctor(*c as u16, code)
                }
            }
            Expr::Let(x, v, body) => {
                let v = self.compile(d, kids, v, locals, slots)?;
                let slot = *slots;
                *slots += 1;
                locals.push((x.clone(), slot));
                let b = self.compile(d, kids, body, locals, slots);
                locals.pop();
                Code::Let(slot, Box::new(v), Box::new(b?))
            }
            Expr::Local(x) => {
                let slot = locals.iter().rev().find(|(y, _)| y == x).ok_or_else(|| bad(format!("unbound `{x}`")))?.1;
                Code::Local(slot)
            }
        })
    }

    /// Evaluates definition `f` on `args`.
    pub fn eval(&self, f: usize, args: &[Tree]) -> Result<Tree> {
        let d = &self.defs[f];
        if args.len() != d.arity {
            return Err(Error::ill_formed(&d.name, format!("applied to {} arguments", args.len())));
        }
        self.eval_partial(f, args).ok_or_else(|| Error::MalformedEncoding {
            subtree: format!("argument of `{}`", d.name),
            msg: "a constructor outside the language was scrutinized".into(),
        })
    }

    /// Evaluates `f` on trees that may contain leaves outside the language
    /// (opaque values). `None` when the result depends on such a leaf.
    pub fn eval_partial(&self, f: usize, args: &[Tree]) -> Option<Tree> {
        assert_eq!(args.len(), self.defs[f].arity, "arity of `{}`", self.defs[f].name);
        let ev = Evaluator { env: self, stuck: Cell::new(false) };
        let out = ev.call(f, args.iter().cloned().map(Lazy::Val).collect());
        (!ev.stuck.get()).then_some(out)
    }

    pub fn eval_by_name(&self, name: &str, args: &[Tree]) -> Result<Tree> {
        let f = self.find(name).ok_or_else(|| Error::Unregistered(name.to_string()))?;
        self.eval(f, args)
    }

    /// `f(args) = 1`.
    pub fn holds(&self, name: &str, args: &[Tree]) -> Result<bool> {
        Ok(self.lang.as_num(&self.eval_by_name(name, args)?) == Some(1))
    }
}

impl fmt::Debug for PrEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrEnv").field("defs", &self.defs.iter().map(|d| &d.name).collect::<Vec<_>>()).finish()
    }
}

#[derive(Clone)]
enum Lazy<'a> {
    Val(Tree),
    Thunk(Rc<Thunk<'a>>),
}

struct Thunk<'a> {
    value: OnceCell<Tree>,
    code: &'a Code,
    frame: Rc<Frame<'a>>,
}

struct Frame<'a> {
    f: usize,
    rec: Option<Tree>,
    params: Vec<Lazy<'a>>,
    slots: RefCell<Vec<Option<Lazy<'a>>>>,
}

struct Evaluator<'a> {
    env: &'a PrEnv,
    stuck: Cell<bool>,
}

impl<'a> Evaluator<'a> {
    fn force(&self, l: &Lazy<'a>) -> Tree {
        match l {
            Lazy::Val(t) => t.clone(),
            Lazy::Thunk(th) => th.value.get_or_init(|| self.eval(th.code, &th.frame)).clone(),
        }
    }

    fn delay(&self, code: &'a Code, frame: &Rc<Frame<'a>>) -> Lazy<'a> {
        match code {
            Code::Const(t) => Lazy::Val(t.clone()),
            Code::Child(i) => Lazy::Val(frame.rec.as_ref().unwrap().kids()[*i].clone()),
            Code::Arg(j) => frame.params[*j].clone(),
            Code::Local(s) => frame.slots.borrow()[*s].clone().expect("local used before its let"),
            _ => Lazy::Thunk(Rc::new(Thunk { value: OnceCell::new(), code, frame: frame.clone() })),
        }
    }

    fn call(&self, f: usize, mut params: Vec<Lazy<'a>>) -> Tree {
        let c = &self.env.compiled[f];
        let (rec, body) = match c.rec {
            None => (None, &c.table[0]),
            Some(r) => {
                let t = self.force(&params[r]);
                let Some(body) = c.table.get(t.ctor()) else {
                    self.stuck.set(true);
                    return t;
                };
                params[r] = Lazy::Val(t.clone());
                (Some(t), body)
            }
        };
        debug_assert_eq!(params.len(), c.arity);
        let frame = Rc::new(Frame { f, rec, params, slots: RefCell::new(vec![None; c.slots]) });
        let out = self.eval(body, &frame);
        // Locals may hold thunks pointing back at the frame.
        frame.slots.borrow_mut().clear();
        out
    }

    fn eval(&self, code: &'a Code, frame: &Rc<Frame<'a>>) -> Tree {
        match code {
            Code::Const(t) => t.clone(),
            Code::Arg(j) => self.force(&frame.params[*j]),
            Code::Child(i) => frame.rec.as_ref().unwrap().kids()[*i].clone(),
            Code::Local(s) => {
                let l = frame.slots.borrow()[*s].clone().expect("local used before its let");
                self.force(&l)
            }
            Code::Let(s, v, body) => {
                let l = self.delay(v, frame);
                frame.slots.borrow_mut()[*s] = Some(l);
                self.eval(body, frame)
            }
            Code::Ctor(c, args) => Tree::new(*c, args.iter().map(|a| self.eval(a, frame)).collect()),
            Code::Call(g, args) => self.call(*g, args.iter().map(|a| self.delay(a, frame)).collect()),
            Code::Rec(i, args) => {
                let rec_pos = self.env.compiled[frame.f].rec.unwrap();
                let child = frame.rec.as_ref().unwrap().kids()[*i].clone();
                let params = match args {
                    None => {
                        let mut p = frame.params.clone();
                        p[rec_pos] = Lazy::Val(child);
                        p
                    }
                    Some(es) => {
                        let mut others = es.iter().map(|a| self.delay(a, frame));
                        (0..frame.params.len())
                            .map(|j| if j == rec_pos { Lazy::Val(child.clone()) } else { others.next().unwrap() })
                            .collect()
                    }
                };
                self.call(frame.f, params)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat_env() -> PrEnv {
        let mut env = PrEnv::new(TreeLang::new(&[("0", 0), ("s", 1), ("leaf", 0)]).unwrap());
        env.load(
            "(prdef add 2 (rec 0) (clause 0 (arg 1)) (clause s (s (rec 0))) (clause _ 0))
             (prdef double 1 (rec 0) (clause _ (call add (arg 0) (arg 0))))
             (prdef sub1 2 (rec 0) (clause s (rec 0 (s (arg 1)))) (clause _ (arg 1)))",
        )
        .unwrap();
        env
    }

    #[test]
    fn evaluates_structural_recursion() {
        let env = nat_env();
        let l = env.lang().clone();
        assert_eq!(env.eval_by_name("add", &[l.num(2), l.num(3)]).unwrap(), l.num(5));
        assert_eq!(env.eval_by_name("double", &[l.num(4)]).unwrap(), l.num(8));
        assert_eq!(env.eval_by_name("sub1", &[l.num(3), l.num(1)]).unwrap(), l.num(4));
    }

    #[test]
    fn rejects_ill_formed_definitions() {
        let mut env = nat_env();
        for bad in [
            "(prdef f 1 (rec 0) (clause 0 0))",
            "(prdef f 1 (rec 0) (clause _ (child 0)))",
            "(prdef f 1 (rec 0) (clause s (child 1)) (clause _ 0))",
            "(prdef f 1 (rec 2) (clause _ 0))",
            "(prdef f 1 (rec 0) (clause _ (call g (arg 0))))",
            "(prdef f 1 (rec 0) (clause _ (call f (arg 0))))",
            "(prdef add 2 (rec 0) (clause _ 0))",
        ] {
            assert!(matches!(env.load(bad), Err(Error::IllFormedDef { .. })), "{bad}");
        }
    }

    #[test]
    fn unused_arguments_are_not_evaluated() {
        let mut env = nat_env();
        env.load("(prdef first 2 (rec 0) (clause _ (arg 0)))").unwrap();
        let l = env.lang().clone();
        // The second argument would be large if forced.
        env.load("(prdef big 1 (rec 0) (clause _ (call first 0 (call double (call double (call double (arg 0)))))))")
            .unwrap();
        assert_eq!(env.eval_by_name("big", &[l.num(3)]).unwrap(), l.num(0));
    }

    #[test]
    fn equations_follow_the_clauses() {
        let env = nat_env();
        let eqs = env.get("add").unwrap().equations(env.lang(), &Sort::new("L"));
        let text: Vec<String> = eqs.iter().map(|f| f.to_string()).collect();
        assert_eq!(
            text,
            [
                "(forall (x2 L) (= (add 0 x2) x2))",
                "(forall (x2 L) (forall (y1 L) (= (add (s y1) x2) (s (add y1 x2)))))",
                "(forall (x2 L) (= (add leaf x2) 0))",
            ]
        );
    }
}
