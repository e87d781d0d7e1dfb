//! Text formats for quivers, formulas and proof scripts.
//!
//! ```text
//! quiver   {n: 4, arcs: (0,1), (1,2)}     {arcs: (0,1)}     compQ
//! term     $0   restrA([0, 2], $1)   restr([1, 2];[3], $0)
//! formula  forall Q . f   exists Q . f   f -> g   f /\ g   true
//!          commute(t)   t == u   @monoF(t)   ( f )
//! script   one tactic per line or separated by `;`, `#` starts a comment
//! ```
//!
//! `->` associates to the right and binds loosest; a quantifier extends as
//! far right as possible.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{apply_predicate, Formula, Predicate, Term, TermExpr};
use crate::kernel::{Direction, LemmaRegistry, Proof, RegistryError, RewriteTarget, Tactic};
use crate::quiver::{Quiver, Subquiver};

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("line {line}, column {col}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Colon,
    Dot,
    Dollar(usize),
    Num(usize),
    Ident(String),
    Arrow,
    BackArrow,
    Wedge,
    EqEq,
    At,
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Dollar(k) => write!(f, "`${k}`"),
            Tok::Num(k) => write!(f, "`{k}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::BackArrow => f.write_str("`<-`"),
            Tok::Wedge => f.write_str("`/\\`"),
            Tok::EqEq => f.write_str("`==`"),
            Tok::At => f.write_str("`@`"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok: Tok| out.push(Token { tok, line: start_line, col: start_col });
        let two = |s: &str| chars[i..].iter().take(2).collect::<String>() == s;
        let mut width = 1;
        match c {
            '\n' => {
                push(Tok::Newline);
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '{' => push(Tok::LBrace),
            '}' => push(Tok::RBrace),
            '(' => push(Tok::LParen),
            ')' => push(Tok::RParen),
            '[' => push(Tok::LBrack),
            ']' => push(Tok::RBrack),
            ',' => push(Tok::Comma),
            ';' => push(Tok::Semi),
            ':' => push(Tok::Colon),
            '.' => push(Tok::Dot),
            '@' => push(Tok::At),
            _ if two("->") => {
                push(Tok::Arrow);
                width = 2;
            }
            _ if two("<-") => {
                push(Tok::BackArrow);
                width = 2;
            }
            _ if two("/\\") => {
                push(Tok::Wedge);
                width = 2;
            }
            _ if two("==") => {
                push(Tok::EqEq);
                width = 2;
            }
            '$' | '0'..='9' => {
                let digits_from = if c == '$' { i + 1 } else { i };
                let mut j = digits_from;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[digits_from..j].iter().collect();
                let value = digits.parse::<usize>().map_err(|_| ParseError {
                    line,
                    col,
                    expected: "a number".into(),
                    found: format!("`{}`", chars[i..j.max(i + 1)].iter().collect::<String>()),
                })?;
                push(if c == '$' { Tok::Dollar(value) } else { Tok::Num(value) });
                width = j - i;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                push(Tok::Ident(chars[i..j].iter().collect()));
                width = j - i;
            }
            other => {
                return Err(ParseError { line, col, expected: "a token".into(), found: format!("`{other}`") });
            }
        }
        i += width;
        col += width;
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Named objects the parser may refer to.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub quivers: BTreeMap<String, Quiver>,
    pub predicates: BTreeMap<String, Predicate>,
}

impl Scope {
    /// The named quivers and predicates of the corpus.
    pub fn corpus() -> Self {
        Scope { quivers: crate::corpus::quivers(), predicates: crate::corpus::predicates() }
    }
}

struct Parser<'s> {
    toks: Vec<Token>,
    pos: usize,
    scope: &'s Scope,
}

type PResult<T> = Result<T, ParseError>;

impl<'s> Parser<'s> {
    fn new(text: &str, scope: &'s Scope) -> PResult<Self> {
        Ok(Parser { toks: lex(text)?, pos: 0, scope })
    }

    fn skip_newlines(&mut self) {
        while self.toks[self.pos].tok == Tok::Newline {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> &Tok {
        self.skip_newlines();
        &self.toks[self.pos].tok
    }

    fn peek_raw(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Token {
        self.skip_newlines();
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, tok: &Token, expected: &str) -> ParseError {
        ParseError { line: tok.line, col: tok.col, expected: expected.into(), found: tok.tok.to_string() }
    }

    fn fail<T>(&mut self, expected: &str) -> PResult<T> {
        self.skip_newlines();
        let t = self.toks[self.pos].clone();
        Err(self.error_at(&t, expected))
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            let expected = tok.to_string();
            self.fail(&expected)
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.next();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> PResult<usize> {
        match self.peek().clone() {
            Tok::Num(k) => {
                self.next();
                Ok(k)
            }
            _ => self.fail("a number"),
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => self.fail("a name"),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.next();
                Ok(())
            }
            _ => self.fail(&format!("`{kw}`")),
        }
    }

    fn end(&mut self) -> PResult<()> {
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => self.fail("end of input"),
        }
    }

    fn numbers(&mut self) -> PResult<Vec<usize>> {
        self.expect(Tok::LBrack)?;
        let mut out = Vec::new();
        if self.eat(&Tok::RBrack) {
            return Ok(out);
        }
        loop {
            out.push(self.number()?);
            if self.eat(&Tok::RBrack) {
                return Ok(out);
            }
            self.expect(Tok::Comma)?;
        }
    }

    fn quiver(&mut self) -> PResult<Quiver> {
        if let Tok::Ident(name) = self.peek().clone() {
            return match self.scope.quivers.get(&name) {
                Some(q) => {
                    self.next();
                    Ok(q.clone())
                }
                None => self.fail("a quiver"),
            };
        }
        self.expect(Tok::LBrace)?;
        let mut n = None;
        let key = self.ident()?;
        if key == "n" {
            self.expect(Tok::Colon)?;
            n = Some(self.number()?);
            self.expect(Tok::Comma)?;
            self.keyword("arcs")?;
        } else if key != "arcs" {
            let at = self.toks[self.pos - 1].clone();
            return Err(self.error_at(&at, "`n` or `arcs`"));
        }
        self.expect(Tok::Colon)?;
        let mut arcs = Vec::new();
        if !self.eat(&Tok::RBrace) {
            loop {
                self.expect(Tok::LParen)?;
                let s = self.number()?;
                self.expect(Tok::Comma)?;
                let t = self.number()?;
                self.expect(Tok::RParen)?;
                arcs.push((s, t));
                if self.eat(&Tok::RBrace) {
                    break;
                }
                self.expect(Tok::Comma)?;
            }
        }
        Ok(match n {
            Some(n) => Quiver::new(n, arcs),
            None => Quiver::from_arcs(arcs),
        })
    }

    fn term_expr(&mut self) -> PResult<TermExpr> {
        match self.peek().clone() {
            Tok::Dollar(k) => {
                self.next();
                Ok(TermExpr::Var(k))
            }
            Tok::Ident(s) if s == "restrA" => {
                self.next();
                self.expect(Tok::LParen)?;
                let arcs = self.numbers()?;
                self.expect(Tok::Comma)?;
                let inner = self.term_expr()?;
                self.expect(Tok::RParen)?;
                Ok(TermExpr::RestrArcs(arcs, Box::new(inner)))
            }
            Tok::Ident(s) if s == "restr" => {
                self.next();
                self.expect(Tok::LParen)?;
                let vertices = self.numbers()?;
                self.expect(Tok::Semi)?;
                let arcs = self.numbers()?;
                self.expect(Tok::Comma)?;
                let inner = self.term_expr()?;
                self.expect(Tok::RParen)?;
                Ok(TermExpr::Restr(Subquiver::new(vertices, arcs), Box::new(inner)))
            }
            _ => self.fail("a term"),
        }
    }

    fn term(&mut self, ctx: &[Quiver]) -> PResult<Term> {
        self.skip_newlines();
        let at = self.toks[self.pos].clone();
        let e = self.term_expr()?;
        e.resolve(ctx).map_err(|err| ParseError {
            line: at.line,
            col: at.col,
            expected: "a well-sorted term".into(),
            found: err.to_string(),
        })
    }

    fn formula(&mut self, ctx: &[Quiver]) -> PResult<Formula> {
        if let Some(f) = self.quantified(ctx)? {
            return Ok(f);
        }
        let lhs = self.conjunction(ctx)?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula(ctx)?;
            return Ok(Formula::imply(lhs, rhs));
        }
        Ok(lhs)
    }

    fn quantified(&mut self, ctx: &[Quiver]) -> PResult<Option<Formula>> {
        let exists = match self.peek() {
            Tok::Ident(s) if s == "forall" => false,
            Tok::Ident(s) if s == "exists" => true,
            _ => return Ok(None),
        };
        self.next();
        let q = self.quiver()?;
        self.expect(Tok::Dot)?;
        let mut inner = Vec::with_capacity(ctx.len() + 1);
        inner.push(q.clone());
        inner.extend_from_slice(ctx);
        let body = self.formula(&inner)?;
        Ok(Some(if exists { Formula::exists(q, body) } else { Formula::forall(q, body) }))
    }

    fn conjunction(&mut self, ctx: &[Quiver]) -> PResult<Formula> {
        if let Some(f) = self.quantified(ctx)? {
            return Ok(f);
        }
        let lhs = self.atom(ctx)?;
        if self.eat(&Tok::Wedge) {
            let rhs = self.conjunction(ctx)?;
            return Ok(Formula::and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn atom(&mut self, ctx: &[Quiver]) -> PResult<Formula> {
        match self.peek().clone() {
            Tok::LParen => {
                self.next();
                let f = self.formula(ctx)?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(s) if s == "true" => {
                self.next();
                Ok(Formula::FTrue)
            }
            Tok::Ident(s) if s == "commute" => {
                self.next();
                self.expect(Tok::LParen)?;
                let t = self.term(ctx)?;
                self.expect(Tok::RParen)?;
                Ok(Formula::commute(t))
            }
            Tok::At => {
                let at = self.next();
                let name = self.ident()?;
                let Some(p) = self.scope.predicates.get(&name).cloned() else {
                    return Err(ParseError { line: at.line, col: at.col, expected: "a known predicate".into(), found: format!("`{name}`") });
                };
                self.expect(Tok::LParen)?;
                let mut args = Vec::new();
                if !self.eat(&Tok::RParen) {
                    loop {
                        args.push(self.term(ctx)?);
                        if self.eat(&Tok::RParen) {
                            break;
                        }
                        self.expect(Tok::Comma)?;
                    }
                }
                apply_predicate(ctx, &p, &args).map_err(|err| ParseError {
                    line: at.line,
                    col: at.col,
                    expected: "well-sorted predicate arguments".into(),
                    found: err.to_string(),
                })
            }
            Tok::Dollar(_) | Tok::Ident(_) => {
                let lhs = self.term(ctx)?;
                self.expect(Tok::EqEq)?;
                let rhs = self.term(ctx)?;
                Ok(Formula::eqd(lhs, rhs))
            }
            _ => self.fail("a formula"),
        }
    }

    /// Tactics up to `}` (nested) or end of input.
    fn script(&mut self, nested: bool) -> PResult<Proof> {
        let mut out = Vec::new();
        loop {
            while matches!(self.peek_raw(), Tok::Newline | Tok::Semi) {
                self.pos += 1;
            }
            match self.peek_raw() {
                Tok::Eof if nested => return self.fail("`}`"),
                Tok::Eof => return Ok(Proof(out)),
                Tok::RBrace if nested => {
                    self.pos += 1;
                    return Ok(Proof(out));
                }
                _ => {}
            }
            out.push(self.tactic()?);
            match self.peek_raw() {
                Tok::Newline | Tok::Semi | Tok::Eof => {}
                Tok::RBrace if nested => {}
                _ => {
                    let t = self.toks[self.pos].clone();
                    return Err(self.error_at(&t, "end of tactic"));
                }
            }
        }
    }

    fn block(&mut self) -> PResult<Proof> {
        self.expect(Tok::LBrace)?;
        self.script(true)
    }

    fn tactic(&mut self) -> PResult<Tactic> {
        let at = self.toks[self.pos].clone();
        let name = self.ident()?;
        Ok(match name.as_str() {
            "intro" => Tactic::Intro,
            "intro_imply" => Tactic::IntroImply,
            "assumption" => Tactic::Assumption(self.number()?),
            "witness" => Tactic::Witness(self.term_expr()?),
            "and_intro" => Tactic::AndIntro(self.block()?),
            "specialize" => {
                let i = self.number()?;
                Tactic::SpecializePremise(i, self.term_expr()?)
            }
            "detach" => {
                let i = self.number()?;
                Tactic::DetachPremise(i, self.number()?)
            }
            "rewrite" => {
                let eq = self.number()?;
                let direction = match self.peek() {
                    Tok::Arrow => Direction::Forward,
                    Tok::BackArrow => Direction::Backward,
                    _ => return self.fail("`->` or `<-`"),
                };
                self.next();
                self.keyword("occ")?;
                let occurrence = self.number()?;
                let target = match self.peek_raw() {
                    Tok::Ident(s) if s == "in" => {
                        self.next();
                        RewriteTarget::Premise(self.number()?)
                    }
                    _ => RewriteTarget::Goal,
                };
                Tactic::RewriteEqD { eq, direction, occurrence, target }
            }
            "comauto" => Tactic::Comauto,
            "apply_lemma" => Tactic::ApplyLemma(self.ident()?),
            "apply_dual_lemma" => Tactic::ApplyDualLemma(self.ident()?),
            "qed" => Tactic::TrueIntro,
            "eq_refl" => Tactic::EqRefl,
            "glue" => Tactic::Glue(self.number()?),
            "compose" => {
                let i = self.number()?;
                Tactic::Compose(i, self.numbers()?)
            }
            "elim_imply" => {
                let i = self.number()?;
                Tactic::ElimImply(i, self.block()?)
            }
            _ => return Err(ParseError { line: at.line, col: at.col, expected: "a tactic".into(), found: format!("`{name}`") }),
        })
    }
}

pub fn parse_quiver(text: &str) -> Result<Quiver, ParseError> {
    parse_quiver_in(text, &Scope::corpus())
}

pub fn parse_quiver_in(text: &str, scope: &Scope) -> Result<Quiver, ParseError> {
    let mut p = Parser::new(text, scope)?;
    let q = p.quiver()?;
    p.end()?;
    Ok(q)
}

/// A term, with `restrA` resolved against `ctx`.
pub fn parse_term(text: &str, ctx: &[Quiver]) -> Result<Term, ParseError> {
    let scope = Scope::default();
    let mut p = Parser::new(text, &scope)?;
    let t = p.term(ctx)?;
    p.end()?;
    Ok(t)
}

pub fn parse_term_expr(text: &str) -> Result<TermExpr, ParseError> {
    let scope = Scope::default();
    let mut p = Parser::new(text, &scope)?;
    let t = p.term_expr()?;
    p.end()?;
    Ok(t)
}

/// A formula in the given context, with the corpus names in scope.
pub fn parse_formula(text: &str, ctx: &[Quiver]) -> Result<Formula, ParseError> {
    parse_formula_in(text, ctx, &Scope::corpus())
}

pub fn parse_formula_in(text: &str, ctx: &[Quiver], scope: &Scope) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, scope)?;
    let f = p.formula(ctx)?;
    p.end()?;
    Ok(f)
}

pub fn parse_proof(text: &str) -> Result<Proof, ParseError> {
    let scope = Scope::default();
    let mut p = Parser::new(text, &scope)?;
    p.script(false)
}

pub fn print_quiver(q: &Quiver) -> String {
    q.to_string()
}

pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

pub fn print_tactic(t: &Tactic) -> String {
    let mut out = String::new();
    write_tactic(&mut out, t, 0);
    out.pop();
    out
}

/// One tactic per line, nested blocks indented.
pub fn print_proof(pf: &Proof) -> String {
    let mut out = String::new();
    for t in &pf.0 {
        write_tactic(&mut out, t, 0);
    }
    out
}

fn write_block(out: &mut String, head: String, pf: &Proof, indent: usize) {
    let pad = "  ".repeat(indent);
    if pf.is_empty() {
        out.push_str(&format!("{pad}{head} {{}}\n"));
        return;
    }
    out.push_str(&format!("{pad}{head} {{\n"));
    for t in &pf.0 {
        write_tactic(out, t, indent + 1);
    }
    out.push_str(&format!("{pad}}}\n"));
}

fn write_tactic(out: &mut String, t: &Tactic, indent: usize) {
    let pad = "  ".repeat(indent);
    let line = match t {
        Tactic::Intro => "intro".to_string(),
        Tactic::IntroImply => "intro_imply".to_string(),
        Tactic::Assumption(i) => format!("assumption {i}"),
        Tactic::Witness(e) => format!("witness {e}"),
        Tactic::AndIntro(pf) => return write_block(out, "and_intro".into(), pf, indent),
        Tactic::SpecializePremise(i, e) => format!("specialize {i} {e}"),
        Tactic::DetachPremise(i, j) => format!("detach {i} {j}"),
        Tactic::RewriteEqD { eq, direction, occurrence, target } => {
            let arrow = match direction {
                Direction::Forward => "->",
                Direction::Backward => "<-",
            };
            match target {
                RewriteTarget::Goal => format!("rewrite {eq} {arrow} occ {occurrence}"),
                RewriteTarget::Premise(k) => format!("rewrite {eq} {arrow} occ {occurrence} in {k}"),
            }
        }
        Tactic::Comauto => "comauto".to_string(),
        Tactic::ApplyLemma(n) => format!("apply_lemma {n}"),
        Tactic::ApplyDualLemma(n) => format!("apply_dual_lemma {n}"),
        Tactic::TrueIntro => "qed".to_string(),
        Tactic::EqRefl => "eq_refl".to_string(),
        Tactic::Glue(k) => format!("glue {k}"),
        Tactic::Compose(i, steps) => format!("compose {i} {steps:?}"),
        Tactic::ElimImply(i, pf) => return write_block(out, format!("elim_imply {i}"), pf, indent),
    };
    out.push_str(&pad);
    out.push_str(&line);
    out.push('\n');
}

/// One stored lemma; proofs are kept as script text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaRecord {
    pub name: String,
    pub formula: Formula,
    pub script: String,
    pub dual_script: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryFile {
    pub lemmas: Vec<LemmaRecord>,
}

#[derive(Debug, Error)]
pub enum RegistryLoadError {
    #[error("registry file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("script of `{name}`: {error}")]
    Script { name: String, error: ParseError },
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

impl RegistryFile {
    pub fn from_registry(reg: &LemmaRegistry) -> Self {
        RegistryFile {
            lemmas: reg
                .iter()
                .map(|(name, l)| LemmaRecord {
                    name: name.to_string(),
                    formula: l.formula.clone(),
                    script: print_proof(&l.proof),
                    dual_script: l.dual_proof.as_ref().map(print_proof),
                })
                .collect(),
        }
    }

    /// Re-checks every lemma on the way in. A lemma may cite lemmas listed
    /// before it.
    pub fn into_registry(self, mut reg: LemmaRegistry) -> Result<LemmaRegistry, RegistryLoadError> {
        for rec in self.lemmas {
            let script = |text: &str| parse_proof(text).map_err(|error| RegistryLoadError::Script { name: rec.name.clone(), error });
            let proof = script(&rec.script)?;
            let dual = rec.dual_script.as_deref().map(script).transpose()?;
            reg.register(&rec.name, rec.formula, proof, dual)?;
        }
        Ok(reg)
    }

    pub fn from_json(text: &str) -> Result<Self, RegistryLoadError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("registry serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::fixtures::{comp_q, map_q, mono_q};

    #[test]
    fn quiver_text() {
        assert_eq!(parse_quiver("{arcs:(0,1)}").unwrap(), map_q());
        assert_eq!(parse_quiver("{n: 4, arcs: (0,1)}").unwrap(), Quiver::new(4, vec![(0, 1)]));
        assert_eq!(parse_quiver("{arcs:}").unwrap(), Quiver::new(0, vec![]));
        assert_eq!(parse_quiver("monoQ").unwrap(), mono_q());
        for q in [map_q(), mono_q(), Quiver::new(5, vec![(0, 1)]), Quiver::new(0, vec![])] {
            assert_eq!(parse_quiver(&print_quiver(&q)).unwrap(), q);
        }
    }

    #[test]
    fn errors_have_positions() {
        let e = parse_formula("forall .", &[]).unwrap_err();
        assert_eq!((e.line, e.col), (1, 8));
        let e = parse_formula("true ->\n  commute($0", &[comp_q()]).unwrap_err();
        assert_eq!((e.line, e.expected.as_str()), (2, "`)`"));
        assert!(!crate::formula::formula_wf(&[], &parse_formula("commute($0)", &[]).unwrap()));
        assert!(parse_quiver("{arcs: (0,1) (1,2)}").is_err());
        assert!(parse_proof("intro\nfrobnicate").unwrap_err().line == 2);
    }

    #[test]
    fn formula_text() {
        let f = parse_formula("forall compQ . commute($0) -> restrA([0], $0) == restrA([0], $0) /\\ true", &[]).unwrap();
        let f0 = corpus::restr_a(&comp_q(), &[0], Term::var(0));
        let expected = Formula::forall(
            comp_q(),
            Formula::imply(Formula::commute(Term::var(0)), Formula::and(Formula::eqd(f0.clone(), f0), Formula::FTrue)),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn corpus_round_trips() {
        for (name, f) in corpus::formulas() {
            let text = print_formula(&f);
            assert_eq!(parse_formula(&text, &[]).unwrap(), f, "{name}: {text}");
        }
        for (name, p) in corpus::predicates() {
            let text = print_formula(&p.body);
            assert_eq!(parse_formula(&text, &p.arity).unwrap(), p.body, "{name}");
        }
    }

    #[test]
    fn predicate_application() {
        let text = "forall compQ . commute($0) -> @monoF(restrA([1], $0)) -> @monoF(restrA([0], $0))";
        assert_eq!(parse_formula(text, &[]).unwrap(), corpus::mono_monom_pf());
        assert!(parse_formula("forall compQ . @monoF($0)", &[]).is_err());
    }

    #[test]
    fn precedence() {
        let ctx = [map_q()];
        let a = Formula::commute(Term::var(0));
        let cases = [
            Formula::imply(Formula::imply(a.clone(), a.clone()), a.clone()),
            Formula::and(Formula::imply(a.clone(), a.clone()), a.clone()),
            Formula::and(Formula::and(a.clone(), a.clone()), a.clone()),
            Formula::imply(Formula::forall(map_q(), Formula::FTrue), a.clone()),
            Formula::and(a.clone(), Formula::forall(map_q(), Formula::imply(a.clone(), a.clone()))),
            Formula::and(Formula::and(a.clone(), Formula::exists(map_q(), Formula::FTrue)), a.clone()),
        ];
        for f in cases {
            assert_eq!(parse_formula(&print_formula(&f), &ctx).unwrap(), f, "{f}");
        }
    }

    #[test]
    fn registry_round_trip() {
        let reg = corpus::builtin_registry();
        let file = RegistryFile::from_registry(&reg);
        let back = RegistryFile::from_json(&file.to_json()).unwrap().into_registry(LemmaRegistry::new()).unwrap();
        assert_eq!(back, reg);

        let mut bad = file.clone();
        bad.lemmas[0].script = "intro\nqed\n".into();
        assert!(matches!(bad.into_registry(LemmaRegistry::new()), Err(RegistryLoadError::Registry(_))));
    }

    #[test]
    fn scripts() {
        let text = "intro; intro_imply  # comment\nrewrite 2 <- occ 1 in 3\nand_intro {\n  comauto\n}\ncompose 0 [2, 5]\nwitness restrA([0], $1)\nqed\n";
        let pf = parse_proof(text).unwrap();
        assert_eq!(pf.len(), 7);
        assert_eq!(
            pf.0[2],
            Tactic::RewriteEqD { eq: 2, direction: Direction::Backward, occurrence: 1, target: RewriteTarget::Premise(3) }
        );
        assert_eq!(parse_proof(&print_proof(&pf)).unwrap(), pf);
        assert_eq!(parse_proof("elim_imply 1 {}\nand_intro { comauto; qed }").unwrap().len(), 2);
        assert!(parse_proof("and_intro { comauto").is_err());
        assert!(parse_proof("detach 1").is_err());
    }
}
