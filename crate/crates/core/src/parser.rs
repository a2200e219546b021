//! Recursive-descent parser for basic and full TLSF.
//!
//! Expressions use precedence climbing over the operator levels defined on
//! [`UnaryOp`], [`BinaryOp`] and [`BigOpKind`]. After a specification is
//! parsed, a resolution pass turns identifiers that name declared signals
//! into [`ExprKind::Signal`] and rewrites `bus == ENUMID` comparisons into
//! [`ExprKind::EnumCompare`].

use std::collections::HashSet;

use num_bigint::BigUint;

use crate::ast::*;
use crate::diagnostic::Diagnostic;
use crate::lexer::{tokenize, Keyword, Op, Punct, Token, TokenKind};

type PResult<T> = Result<T, Diagnostic>;

/// Which grammar to accept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Parameters, functions, buses, big operators and sugar allowed.
    #[default]
    Full,
    /// Fully parenthesized formulas over plain signals only.
    Basic,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    pub mode: Mode,
}

/// Parses a full-format specification.
pub fn parse_spec(source: &str) -> Result<Specification, Vec<Diagnostic>> {
    parse_spec_with(source, ParseOptions::default())
}

pub fn parse_spec_with(source: &str, options: ParseOptions) -> Result<Specification, Vec<Diagnostic>> {
    let tokens = tokenize(source).map_err(|d| vec![d])?;
    let mut parser = Parser::new(&tokens, source.len(), options.mode);
    let mut spec = parser.specification().map_err(|d| vec![d])?;
    resolve(&mut spec).map_err(|d| vec![d])?;
    Ok(spec)
}

/// Parses one full-format expression spanning all of `tokens`.
///
/// No resolution happens: identifiers stay [`ExprKind::Ident`].
pub fn parse_expression(tokens: &[Token]) -> PResult<Expr> {
    let end = tokens.last().map_or(0, |t| t.span.end);
    let mut parser = Parser::new(tokens, end, Mode::Full);
    let e = parser.expr(19)?;
    parser.expect_end()?;
    Ok(e)
}

/// Tokenizes and parses one expression.
pub fn parse_expression_str(source: &str) -> PResult<Expr> {
    parse_expression(&tokenize(source)?)
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    source_len: usize,
    mode: Mode,
    /// Nesting depth of `|..|`; inside, a single `|` closes instead of meaning or.
    size_depth: usize,
}

fn binary_of(kind: &TokenKind, in_size: bool) -> Option<BinaryOp> {
    use BinaryOp as B;
    Some(match kind {
        TokenKind::Op(op) => match op {
            Op::Star => B::Mul,
            Op::Slash => B::Div,
            Op::Percent => B::Mod,
            Op::Plus => B::Add,
            Op::Minus => B::Sub,
            Op::SetMinus => B::SetMinus,
            Op::Cap => B::Intersect,
            Op::Cup => B::Union,
            Op::Eq => B::Eq,
            Op::Neq => B::Neq,
            Op::Lt => B::Lt,
            Op::Le => B::Le,
            Op::Gt => B::Gt,
            Op::Ge => B::Ge,
            Op::In => B::In,
            Op::And => B::And,
            Op::Or => B::Or,
            Op::Implies => B::Implies,
            Op::Equiv => B::Equiv,
            Op::WeakUntil => B::WeakUntil,
            Op::Until => B::Until,
            Op::Release => B::Release,
            _ => return None,
        },
        TokenKind::Punct(Punct::Pipe) if !in_size => B::Or,
        _ => return None,
    })
}

fn unary_of(kind: &TokenKind) -> Option<UnaryOp> {
    Some(match kind {
        TokenKind::Op(Op::Not) => UnaryOp::Not,
        TokenKind::Op(Op::Next) => UnaryOp::Next,
        TokenKind::Op(Op::StrongNext) => UnaryOp::StrongNext,
        TokenKind::Op(Op::Finally) => UnaryOp::Finally,
        TokenKind::Op(Op::Globally) => UnaryOp::Globally,
        TokenKind::Op(Op::Size) => UnaryOp::Size,
        TokenKind::Op(Op::SizeOf) => UnaryOp::SizeOf,
        TokenKind::Op(Op::Min) => UnaryOp::Min,
        TokenKind::Op(Op::Max) => UnaryOp::Max,
        _ => return None,
    })
}

fn is_basic_binary(op: BinaryOp) -> bool {
    use BinaryOp::*;
    matches!(op, And | Or | Implies | Equiv | Until | Release | WeakUntil)
}

fn is_basic_unary(op: UnaryOp) -> bool {
    use UnaryOp::*;
    matches!(op, Not | Next | StrongNext | Finally | Globally)
}

fn section_of(kw: Keyword) -> Option<Section> {
    Some(match kw {
        Keyword::Initially => Section::Initially,
        Keyword::Preset => Section::Preset,
        Keyword::Require => Section::Require,
        Keyword::Assert | Keyword::Invariants => Section::Assert,
        Keyword::Assume | Keyword::Assumptions => Section::Assume,
        Keyword::Guarantee | Keyword::Guarantees => Section::Guarantee,
        _ => return None,
    })
}

impl<'t> Parser<'t> {
    fn new(tokens: &'t [Token], source_len: usize, mode: Mode) -> Self {
        Parser {
            tokens,
            pos: 0,
            source_len,
            mode,
            size_depth: 0,
        }
    }

    // -- token plumbing -----------------------------------------------------

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&'t Token> {
        self.tokens.get(self.pos + offset)
    }

    fn kind(&self) -> Option<&'t TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn bump(&mut self) -> &'t Token {
        let t = &self.tokens[self.pos];
        self.pos += 1;
        t
    }

    fn at_punct(&self, p: Punct) -> bool {
        self.kind() == Some(&TokenKind::Punct(p))
    }

    fn at_op(&self, op: Op) -> bool {
        self.kind() == Some(&TokenKind::Op(op))
    }

    fn at_kw(&self, kw: Keyword) -> bool {
        self.kind() == Some(&TokenKind::Keyword(kw))
    }

    fn eat_punct(&mut self, p: Punct) -> bool {
        let hit = self.at_punct(p);
        if hit {
            self.pos += 1;
        }
        hit
    }

    /// Span of the current token, or of the input end.
    fn here(&self) -> Span {
        match self.peek() {
            Some(t) => t.span,
            None => match self.tokens.last() {
                Some(t) => t.span,
                None => Span::new(0, self.source_len.min(1)),
            },
        }
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        let found = match self.peek() {
            Some(t) => t.to_string(),
            None => "end of input".to_string(),
        };
        Diagnostic::error(format!("expected {expected}, found {found}"), self.here()).expected(expected)
    }

    fn expect_punct(&mut self, p: Punct, what: &str) -> PResult<Span> {
        if self.at_punct(p) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(what))
        }
    }

    fn expect_kw(&mut self, kw: Keyword, what: &str) -> PResult<Span> {
        if self.at_kw(kw) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(what))
        }
    }

    fn expect_ident(&mut self, what: &str) -> PResult<(String, Span)> {
        match self.kind() {
            Some(TokenKind::Ident(name)) => {
                let span = self.bump().span;
                Ok((name.clone(), span))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn expect_end(&self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of expression")),
        }
    }

    /// True when the current token directly abuts the previous one.
    fn glued(&self) -> bool {
        self.pos > 0
            && self
                .peek()
                .is_some_and(|t| t.span.start == self.tokens[self.pos - 1].span.end)
    }

    /// Parses `item (; item)* ;?` up to (not including) a closing `}`.
    fn semi_list<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        let mut out = Vec::new();
        while !self.at_punct(Punct::RBrace) {
            if self.peek().is_none() {
                return Err(self.unexpected("`}`"));
            }
            out.push(item(self)?);
            if !self.eat_punct(Punct::Semi) && !self.at_punct(Punct::RBrace) {
                return Err(self.unexpected("`;` or `}`"));
            }
        }
        Ok(out)
    }

    // -- specification ------------------------------------------------------

    fn specification(&mut self) -> PResult<Specification> {
        let info = self.info()?;
        let global = if self.at_kw(Keyword::Global) {
            if self.mode == Mode::Basic {
                return Err(Diagnostic::error(
                    "GLOBAL is not allowed in the basic format",
                    self.here(),
                ));
            }
            Some(self.global()?)
        } else {
            None
        };
        let main_ = self.main()?;
        self.expect_end_of_file()?;
        Ok(Specification { info, global, main_ })
    }

    fn expect_end_of_file(&self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of file")),
        }
    }

    fn info(&mut self) -> PResult<Info> {
        let info_span = self.expect_kw(Keyword::Info, "`INFO`")?;
        self.expect_punct(Punct::LBrace, "`{`")?;
        let mut title = None;
        let mut description = None;
        let mut semantics = None;
        let mut target = None;
        let mut tags = None;
        while !self.eat_punct(Punct::RBrace) {
            let Some(TokenKind::Keyword(kw)) = self.kind() else {
                return Err(self.unexpected("an INFO field"));
            };
            let kw = *kw;
            let field_span = self.bump().span;
            let duplicate = || Diagnostic::error("duplicate INFO field", field_span);
            self.expect_punct(Punct::Colon, "`:`")?;
            match kw {
                Keyword::Title => {
                    if title.replace(self.string()?).is_some() {
                        return Err(duplicate());
                    }
                }
                Keyword::Description => {
                    if description.replace(self.string()?).is_some() {
                        return Err(duplicate());
                    }
                }
                Keyword::Semantics => {
                    if semantics.replace(self.semantics()?).is_some() {
                        return Err(duplicate());
                    }
                }
                Keyword::Target => {
                    let (name, span) = self.expect_ident("`Mealy` or `Moore`")?;
                    let model = model_of(&name).ok_or_else(|| {
                        Diagnostic::error(format!("unknown TARGET `{name}`"), span)
                            .expected("`Mealy` or `Moore`")
                    })?;
                    if target.replace(model).is_some() {
                        return Err(duplicate());
                    }
                }
                Keyword::Tags => {
                    if tags.replace(self.tags()?).is_some() {
                        return Err(duplicate());
                    }
                }
                _ => {
                    return Err(Diagnostic::error("unknown INFO field", field_span)
                        .expected("TITLE, DESCRIPTION, SEMANTICS, TARGET or TAGS"))
                }
            }
        }
        let missing = |field: &str| Diagnostic::error(format!("INFO is missing {field}"), info_span);
        Ok(Info {
            title: title.ok_or_else(|| missing("TITLE"))?,
            description: description.ok_or_else(|| missing("DESCRIPTION"))?,
            semantics: semantics.ok_or_else(|| missing("SEMANTICS"))?,
            target: target.ok_or_else(|| missing("TARGET"))?,
            tags: tags.unwrap_or_default(),
        })
    }

    fn string(&mut self) -> PResult<String> {
        match self.kind() {
            Some(TokenKind::Str(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.unexpected("a string literal")),
        }
    }

    fn semantics(&mut self) -> PResult<Semantics> {
        let (name, span) = self.expect_ident("`Mealy` or `Moore`")?;
        let model = model_of(&name).ok_or_else(|| {
            Diagnostic::error(format!("unknown SEMANTICS `{name}`"), span).expected("`Mealy` or `Moore`")
        })?;
        let mut variant = Variant::Standard;
        if self.eat_punct(Punct::Comma) {
            let (name, span) = self.expect_ident("`Strict` or `Finite`")?;
            variant = match name.as_str() {
                "Strict" => Variant::Strict,
                "Finite" => Variant::Finite,
                _ => {
                    return Err(Diagnostic::error(format!("unknown SEMANTICS variant `{name}`"), span)
                        .expected("`Strict` or `Finite`"))
                }
            };
        }
        Ok(Semantics { model, variant })
    }

    fn tags(&mut self) -> PResult<Vec<String>> {
        let mut tags = Vec::new();
        loop {
            match self.kind() {
                Some(TokenKind::Str(s)) | Some(TokenKind::Ident(s)) => {
                    tags.push(s.clone());
                    self.pos += 1;
                }
                _ if tags.is_empty() => return Ok(tags),
                _ => return Err(self.unexpected("a tag")),
            }
            if !self.eat_punct(Punct::Comma) {
                return Ok(tags);
            }
        }
    }

    fn global(&mut self) -> PResult<Global> {
        self.expect_kw(Keyword::Global, "`GLOBAL`")?;
        self.expect_punct(Punct::LBrace, "`{`")?;
        let mut global = Global::default();
        let (mut seen_params, mut seen_defs) = (false, false);
        while !self.eat_punct(Punct::RBrace) {
            let span = self.here();
            if self.at_kw(Keyword::Parameters) {
                if std::mem::replace(&mut seen_params, true) {
                    return Err(Diagnostic::error("duplicate PARAMETERS section", span));
                }
                self.pos += 1;
                self.expect_punct(Punct::LBrace, "`{`")?;
                global.parameters = self.semi_list(|p| {
                    let (name, _) = p.expect_ident("a parameter name")?;
                    p.expect_punct(Punct::Assign, "`=`")?;
                    let value = p.expr(19)?;
                    Ok(Parameter { name, value })
                })?;
                self.expect_punct(Punct::RBrace, "`}`")?;
            } else if self.at_kw(Keyword::Definitions) {
                if std::mem::replace(&mut seen_defs, true) {
                    return Err(Diagnostic::error("duplicate DEFINITIONS section", span));
                }
                self.pos += 1;
                self.expect_punct(Punct::LBrace, "`{`")?;
                global.definitions = self.semi_list(|p| p.definition())?;
                self.expect_punct(Punct::RBrace, "`}`")?;
            } else {
                return Err(self.unexpected("`PARAMETERS` or `DEFINITIONS`"));
            }
        }
        Ok(global)
    }

    fn definition(&mut self) -> PResult<Definition> {
        if self.at_kw(Keyword::Enum) {
            return self.enum_decl().map(Definition::Enum);
        }
        let (name, span) = self.expect_ident("a definition")?;
        if self.eat_punct(Punct::LParen) {
            let mut params = Vec::new();
            if !self.at_punct(Punct::RParen) {
                loop {
                    params.push(self.expect_ident("a parameter name")?.0);
                    if !self.eat_punct(Punct::Comma) {
                        break;
                    }
                }
            }
            self.expect_punct(Punct::RParen, "`)`")?;
            self.expect_punct(Punct::Assign, "`=`")?;
            let cases = self.cases()?;
            let end = self.tokens[self.pos - 1].span;
            return Ok(Definition::Function(FunctionDecl {
                name,
                params,
                cases,
                span: span.to(end),
            }));
        }
        self.expect_punct(Punct::Assign, "`=`")?;
        let cases = self.cases()?;
        Ok(Definition::Binding { name, cases })
    }

    /// Juxtaposed guarded cases up to `;` or `}`.
    fn cases(&mut self) -> PResult<Vec<Case>> {
        let mut cases = Vec::new();
        loop {
            let case = if self.at_kw(Keyword::Otherwise) {
                self.pos += 1;
                self.expect_punct(Punct::Colon, "`:`")?;
                Case {
                    guard: Guard::Otherwise,
                    body: self.expr(17)?,
                }
            } else {
                let e = self.expr(17)?;
                if self.eat_punct(Punct::Tilde) {
                    let pattern = self.expr(17)?;
                    self.expect_punct(Punct::Colon, "`:`")?;
                    Case {
                        guard: Guard::Match { subject: e, pattern },
                        body: self.expr(17)?,
                    }
                } else if self.eat_punct(Punct::Colon) {
                    Case {
                        guard: Guard::Cond(e),
                        body: self.expr(17)?,
                    }
                } else {
                    Case {
                        guard: Guard::Always,
                        body: e,
                    }
                }
            };
            cases.push(case);
            if self.peek().is_none() || self.at_punct(Punct::Semi) || self.at_punct(Punct::RBrace) {
                return Ok(cases);
            }
        }
    }

    fn enum_decl(&mut self) -> PResult<EnumDecl> {
        let start = self.expect_kw(Keyword::Enum, "`enum`")?;
        let (name, _) = self.expect_ident("an enumeration name")?;
        self.expect_punct(Punct::Assign, "`=`")?;
        let mut values = Vec::new();
        while let Some(TokenKind::Ident(id)) = self.kind() {
            self.pos += 1;
            self.expect_punct(Punct::Colon, "`:`")?;
            let mut patterns = vec![self.bit_pattern()?];
            while self.eat_punct(Punct::Comma) {
                patterns.push(self.bit_pattern()?);
            }
            values.push((id.clone(), patterns));
        }
        if values.is_empty() {
            return Err(self.unexpected("an enumeration value"));
        }
        let end = self.tokens[self.pos - 1].span;
        Ok(EnumDecl {
            name,
            values,
            span: start.to(end),
        })
    }

    /// A maximal run of adjacent `0`/`1`/`*` characters.
    fn bit_pattern(&mut self) -> PResult<BitPattern> {
        let mut bits = Vec::new();
        let mut first = true;
        while first || self.glued() {
            let span = self.here();
            match self.kind() {
                Some(TokenKind::Number(digits)) => {
                    for c in digits.chars() {
                        bits.push(match c {
                            '0' => Bit::Zero,
                            '1' => Bit::One,
                            _ => {
                                return Err(Diagnostic::error(
                                    "valuation patterns may only contain 0, 1 and *",
                                    span,
                                ))
                            }
                        });
                    }
                }
                Some(TokenKind::Op(Op::Star)) => bits.push(Bit::Any),
                _ if first => return Err(self.unexpected("a valuation pattern")),
                _ => break,
            }
            self.pos += 1;
            first = false;
        }
        Ok(BitPattern(bits))
    }

    fn main(&mut self) -> PResult<Main> {
        let main_span = self.expect_kw(Keyword::Main, "`MAIN`")?;
        self.expect_punct(Punct::LBrace, "`{`")?;
        let mut inputs = None;
        let mut outputs = None;
        let mut sections = Sections::new();
        let mut seen = HashSet::new();
        while !self.eat_punct(Punct::RBrace) {
            let Some(TokenKind::Keyword(kw)) = self.kind() else {
                return Err(self.unexpected("a MAIN subsection"));
            };
            let kw = *kw;
            let span = self.bump().span;
            let duplicate = || Diagnostic::error("duplicate section", span);
            match kw {
                Keyword::Inputs | Keyword::Outputs => {
                    let direction = if kw == Keyword::Inputs {
                        Direction::Input
                    } else {
                        Direction::Output
                    };
                    self.expect_punct(Punct::LBrace, "`{`")?;
                    let decls = self.semi_list(|p| p.signal_decl(direction))?;
                    self.expect_punct(Punct::RBrace, "`}`")?;
                    let slot = if kw == Keyword::Inputs { &mut inputs } else { &mut outputs };
                    if slot.replace(decls).is_some() {
                        return Err(duplicate());
                    }
                }
                _ => {
                    let section = section_of(kw).ok_or_else(|| {
                        Diagnostic::error("unknown MAIN subsection", span).expected("a MAIN subsection")
                    })?;
                    if !seen.insert(section) {
                        return Err(duplicate());
                    }
                    self.expect_punct(Punct::LBrace, "`{`")?;
                    *sections.get_mut(section) = self.semi_list(|p| p.formula())?;
                    self.expect_punct(Punct::RBrace, "`}`")?;
                }
            }
        }
        let inputs = inputs.ok_or_else(|| Diagnostic::error("MAIN is missing INPUTS", main_span))?;
        let outputs = outputs.ok_or_else(|| Diagnostic::error("MAIN is missing OUTPUTS", main_span))?;
        let mut names = HashSet::new();
        for decl in inputs.iter().chain(&outputs) {
            if !names.insert(decl.name.as_str()) {
                let message = if inputs.iter().any(|i| i.name == decl.name) && decl.direction == Direction::Output {
                    format!("`{}` is declared as both input and output", decl.name)
                } else {
                    format!("signal `{}` is declared twice", decl.name)
                };
                return Err(Diagnostic::error(message, decl.span));
            }
        }
        Ok(Main {
            inputs,
            outputs,
            sections,
        })
    }

    fn signal_decl(&mut self, direction: Direction) -> PResult<SignalDecl> {
        let (first, span) = self.expect_ident("a signal name")?;
        if let Some(TokenKind::Ident(name)) = self.kind() {
            if self.mode == Mode::Basic {
                return Err(Diagnostic::error(
                    "enumeration-typed signals are not allowed in the basic format",
                    span,
                ));
            }
            let end = self.bump().span;
            return Ok(SignalDecl {
                name: name.clone(),
                width: SignalWidth::Enum(first),
                direction,
                span: span.to(end),
            });
        }
        if self.at_punct(Punct::LBracket) {
            if self.mode == Mode::Basic {
                let (name, full) = self.basic_indexed(first, span)?;
                return Ok(SignalDecl {
                    name,
                    width: SignalWidth::Single,
                    direction,
                    span: full,
                });
            }
            self.pos += 1;
            let width = self.expr(19)?;
            let end = self.expect_punct(Punct::RBracket, "`]`")?;
            return Ok(SignalDecl {
                name: first,
                width: SignalWidth::Sized(width),
                direction,
                span: span.to(end),
            });
        }
        Ok(SignalDecl {
            name: first,
            width: SignalWidth::Single,
            direction,
            span,
        })
    }

    /// `name[digits]` in the basic format, read as one atomic signal name.
    fn basic_indexed(&mut self, name: String, span: Span) -> PResult<(String, Span)> {
        self.expect_punct(Punct::LBracket, "`[`")?;
        let digits = match self.kind() {
            Some(TokenKind::Number(d)) => d.clone(),
            _ => return Err(self.unexpected("a numeral")),
        };
        self.pos += 1;
        let end = self.expect_punct(Punct::RBracket, "`]`")?;
        let value: BigUint = digits.parse().expect("lexer yields digits");
        Ok((format!("{name}[{value}]"), span.to(end)))
    }

    fn formula(&mut self) -> PResult<Expr> {
        match self.mode {
            Mode::Full => self.expr(17),
            Mode::Basic => self.basic(),
        }
    }

    // -- basic format expressions -------------------------------------------

    fn basic(&mut self) -> PResult<Expr> {
        if self.at_punct(Punct::LParen) {
            let open = self.bump().span;
            let mut inner = self.basic_inner()?;
            let close = self.expect_punct(Punct::RParen, "`)`")?;
            inner.span = open.to(close);
            Ok(inner)
        } else {
            self.basic_atom()
        }
    }

    fn basic_inner(&mut self) -> PResult<Expr> {
        let start = self.here();
        if let Some(op) = self.kind().and_then(unary_of) {
            if !is_basic_unary(op) {
                return Err(Diagnostic::error(
                    format!("`{}` is not allowed in the basic format", op.symbol()),
                    start,
                ));
            }
            self.pos += 1;
            let operand = self.basic()?;
            let span = start.to(operand.span);
            return Ok(Expr::new(
                ExprKind::Unary {
                    op,
                    operand: Box::new(operand),
                },
                span,
            ));
        }
        let lhs = self.basic()?;
        match self.kind().and_then(|k| binary_of(k, false)) {
            Some(op) if is_basic_binary(op) => {
                self.pos += 1;
                let rhs = self.basic()?;
                let span = lhs.span.to(rhs.span);
                Ok(Expr::new(
                    ExprKind::Binary {
                        op,
                        lhs: Box::new(lhs),
                        rhs: Box::new(rhs),
                    },
                    span,
                ))
            }
            Some(op) => Err(Diagnostic::error(
                format!("`{}` is not allowed in the basic format", op.symbol()),
                self.here(),
            )),
            None => Ok(lhs),
        }
    }

    fn basic_atom(&mut self) -> PResult<Expr> {
        let span = self.here();
        match self.kind() {
            Some(TokenKind::Keyword(Keyword::True)) => {
                self.pos += 1;
                Ok(Expr::new(ExprKind::Bool(true), span))
            }
            Some(TokenKind::Keyword(Keyword::False)) => {
                self.pos += 1;
                Ok(Expr::new(ExprKind::Bool(false), span))
            }
            Some(TokenKind::Ident(name)) => {
                self.pos += 1;
                if self.at_punct(Punct::LBracket) {
                    let (full, span) = self.basic_indexed(name.clone(), span)?;
                    Ok(Expr::new(ExprKind::Signal(full), span))
                } else {
                    Ok(Expr::new(ExprKind::Ident(name.clone()), span))
                }
            }
            _ => Err(self.unexpected("a parenthesized formula or signal")),
        }
    }

    // -- full format expressions --------------------------------------------

    /// Expression whose top operator has level at most `max`.
    fn expr(&mut self, max: u8) -> PResult<Expr> {
        stacker::maybe_grow(64 * 1024, 1024 * 1024, || self.expr_inner(max))
    }

    fn expr_inner(&mut self, max: u8) -> PResult<Expr> {
        let mut lhs = self.prefix(max)?;
        while let Some(op) = self.kind().and_then(|k| binary_of(k, self.size_depth > 0)) {
            let level = op.level();
            if level > max {
                break;
            }
            self.pos += 1;
            let rhs = match op.assoc() {
                Assoc::Left => self.expr(level - 1)?,
                Assoc::Right => self.expr(level)?,
            };
            let span = lhs.span.to(rhs.span);
            lhs = Expr::new(
                ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                span,
            );
        }
        Ok(lhs)
    }

    fn prefix(&mut self, max: u8) -> PResult<Expr> {
        let start = self.here();
        let Some(kind) = self.kind() else {
            return Err(self.unexpected("an expression"));
        };
        if let TokenKind::BigOpen(op) = kind {
            let op = *op;
            self.pos += 1;
            let mut binders = vec![self.binder()?];
            while self.eat_punct(Punct::Comma) {
                binders.push(self.binder()?);
            }
            self.expect_punct(Punct::RBracket, "`]`")?;
            let body = self.expr(op.level().min(max))?;
            let span = start.to(body.span);
            return Ok(Expr::new(
                ExprKind::BigOp {
                    op,
                    binders,
                    body: Box::new(body),
                },
                span,
            ));
        }
        if let Some(op) = unary_of(kind) {
            self.pos += 1;
            let sugar = match op {
                UnaryOp::Next | UnaryOp::Finally | UnaryOp::Globally => self.at_punct(Punct::LBracket),
                _ => false,
            };
            if sugar {
                return self.sugar(op, start, max);
            }
            let operand = self.expr(op.level().min(max))?;
            let span = start.to(operand.span);
            return Ok(Expr::new(
                ExprKind::Unary {
                    op,
                    operand: Box::new(operand),
                },
                span,
            ));
        }
        self.primary()
    }

    fn sugar(&mut self, op: UnaryOp, start: Span, max: u8) -> PResult<Expr> {
        self.expect_punct(Punct::LBracket, "`[`")?;
        let mut strong = false;
        if self.at_op(Op::Not) {
            self.pos += 1;
            strong = true;
        }
        let first = self.expr(4)?;
        let kind = if op == UnaryOp::Next {
            SugarKind::NextStack(Box::new(first))
        } else {
            self.expect_punct(Punct::Colon, "`:`")?;
            let second = self.expr(4)?;
            if op == UnaryOp::Finally {
                SugarKind::FinallyRange(Box::new(first), Box::new(second))
            } else {
                SugarKind::GloballyRange(Box::new(first), Box::new(second))
            }
        };
        if self.at_op(Op::Not) {
            self.pos += 1;
            strong = true;
        }
        self.expect_punct(Punct::RBracket, "`]`")?;
        let body = self.expr(op.level().min(max))?;
        let span = start.to(body.span);
        Ok(Expr::new(
            ExprKind::Sugar {
                kind,
                strength: if strong { Strength::Strong } else { Strength::Weak },
                body: Box::new(body),
            },
            span,
        ))
    }

    fn binder(&mut self) -> PResult<Binder> {
        if let (Some(TokenKind::Ident(name)), Some(TokenKind::Op(Op::In))) =
            (self.kind(), self.peek_at(1).map(|t| &t.kind))
        {
            self.pos += 2;
            let set = self.expr(8)?;
            return Ok(Binder::Member {
                name: name.clone(),
                set,
            });
        }
        let lower = self.expr(8)?;
        let lower_kind = self.bound_kind()?;
        let (name, _) = self.expect_ident("a binder name")?;
        let upper_kind = self.bound_kind()?;
        let upper = self.expr(8)?;
        Ok(Binder::Bounded {
            lower,
            lower_kind,
            name,
            upper_kind,
            upper,
        })
    }

    fn bound_kind(&mut self) -> PResult<BoundKind> {
        let kind = match self.kind() {
            Some(TokenKind::Op(Op::Lt)) => BoundKind::Strict,
            Some(TokenKind::Op(Op::Le)) => BoundKind::Inclusive,
            _ => return Err(self.unexpected("`<` or `<=`")),
        };
        self.pos += 1;
        Ok(kind)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let start = self.here();
        let kind = match self.kind() {
            Some(k) => k.clone(),
            None => return Err(self.unexpected("an expression")),
        };
        match kind {
            TokenKind::Number(digits) => {
                self.pos += 1;
                let n: BigUint = digits.parse().expect("lexer yields digits");
                Ok(Expr::new(ExprKind::Num(n), start))
            }
            TokenKind::Keyword(Keyword::True) => {
                self.pos += 1;
                Ok(Expr::new(ExprKind::Bool(true), start))
            }
            TokenKind::Keyword(Keyword::False) => {
                self.pos += 1;
                Ok(Expr::new(ExprKind::Bool(false), start))
            }
            TokenKind::Ident(name) => {
                self.pos += 1;
                if self.at_punct(Punct::LParen) && self.glued() {
                    self.pos += 1;
                    let mut args = Vec::new();
                    if !self.at_punct(Punct::RParen) {
                        loop {
                            args.push(self.expr(19)?);
                            if !self.eat_punct(Punct::Comma) {
                                break;
                            }
                        }
                    }
                    let end = self.expect_punct(Punct::RParen, "`)`")?;
                    return Ok(Expr::new(ExprKind::Call { name, args }, start.to(end)));
                }
                if self.eat_punct(Punct::LBracket) {
                    let index = self.expr(19)?;
                    let end = self.expect_punct(Punct::RBracket, "`]`")?;
                    return Ok(Expr::new(
                        ExprKind::BusAccess {
                            bus: name,
                            index: Box::new(index),
                        },
                        start.to(end),
                    ));
                }
                Ok(Expr::new(ExprKind::Ident(name), start))
            }
            TokenKind::Punct(Punct::LParen) => {
                self.pos += 1;
                let saved = std::mem::take(&mut self.size_depth);
                let inner = self.expr(19);
                self.size_depth = saved;
                let mut inner = inner?;
                let end = self.expect_punct(Punct::RParen, "`)`")?;
                inner.span = start.to(end);
                Ok(inner)
            }
            TokenKind::Punct(Punct::Pipe) => {
                self.pos += 1;
                self.size_depth += 1;
                let inner = self.expr(19);
                self.size_depth -= 1;
                let inner = inner?;
                let end = self.expect_punct(Punct::Pipe, "`|`")?;
                Ok(Expr::new(
                    ExprKind::Unary {
                        op: UnaryOp::Size,
                        operand: Box::new(inner),
                    },
                    start.to(end),
                ))
            }
            TokenKind::Punct(Punct::LBrace) => self.set(),
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn set(&mut self) -> PResult<Expr> {
        let start = self.expect_punct(Punct::LBrace, "`{`")?;
        let saved = std::mem::take(&mut self.size_depth);
        let result = self.set_body(start);
        self.size_depth = saved;
        result
    }

    fn set_body(&mut self, start: Span) -> PResult<Expr> {
        let mut items = Vec::new();
        if !self.at_punct(Punct::RBrace) {
            loop {
                items.push(self.expr(19)?);
                if self.at_punct(Punct::DotDot) {
                    if items.len() != 2 {
                        return Err(Diagnostic::error(
                            "a range needs the form `{x, y .. z}`",
                            self.here(),
                        ));
                    }
                    self.pos += 1;
                    let end_expr = self.expr(19)?;
                    let end = self.expect_punct(Punct::RBrace, "`}`")?;
                    let step = items.pop().expect("two items");
                    let first = items.pop().expect("two items");
                    return Ok(Expr::new(
                        ExprKind::SetRange {
                            start: Box::new(first),
                            step: Box::new(step),
                            end: Box::new(end_expr),
                        },
                        start.to(end),
                    ));
                }
                if !self.eat_punct(Punct::Comma) {
                    break;
                }
            }
        }
        let end = self.expect_punct(Punct::RBrace, "`}`")?;
        Ok(Expr::new(ExprKind::SetLiteral(items), start.to(end)))
    }
}

fn model_of(name: &str) -> Option<Model> {
    match name {
        "Mealy" => Some(Model::Mealy),
        "Moore" => Some(Model::Moore),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Resolution

struct Resolver {
    signals: HashSet<String>,
    enum_ids: HashSet<String>,
    locals: Vec<String>,
}

/// Marks signal references and enum comparisons in every expression.
pub fn resolve(spec: &mut Specification) -> Result<(), Diagnostic> {
    let mut reserved: HashSet<&str> = spec.parameters().iter().map(|p| p.name.as_str()).collect();
    let mut enum_ids = HashSet::new();
    for def in spec.definitions() {
        reserved.insert(def.name());
        if let Definition::Enum(e) = def {
            for (id, _) in &e.values {
                enum_ids.insert(id.clone());
            }
        }
    }
    for decl in spec.signals() {
        if reserved.contains(decl.name.as_str()) || enum_ids.contains(&decl.name) {
            return Err(Diagnostic::error(
                format!("signal `{}` clashes with a global name", decl.name),
                decl.span,
            ));
        }
    }
    let mut r = Resolver {
        signals: spec.signals().map(|d| d.name.clone()).collect(),
        enum_ids,
        locals: Vec::new(),
    };
    if let Some(global) = &mut spec.global {
        for p in &mut global.parameters {
            r.expr(&mut p.value);
        }
        for def in &mut global.definitions {
            match def {
                Definition::Function(f) => {
                    r.locals.extend(f.params.iter().cloned());
                    r.cases(&mut f.cases);
                    r.locals.clear();
                }
                Definition::Binding { cases, .. } => r.cases(cases),
                Definition::Enum(_) => {}
            }
        }
    }
    for decl in spec.main_.inputs.iter_mut().chain(spec.main_.outputs.iter_mut()) {
        if let SignalWidth::Sized(e) = &mut decl.width {
            r.expr(e);
        }
    }
    for section in Section::ALL {
        for e in spec.main_.sections.get_mut(section) {
            r.expr(e);
        }
    }
    Ok(())
}

fn pattern_names(pattern: &Expr, out: &mut Vec<String>) {
    pattern.walk(&mut |e| {
        if let ExprKind::Ident(name) = &e.kind {
            if name != "_" {
                out.push(name.clone());
            }
        }
    });
}

impl Resolver {
    fn is_local(&self, name: &str) -> bool {
        self.locals.iter().any(|l| l == name)
    }

    fn cases(&mut self, cases: &mut [Case]) {
        for case in cases {
            let mark = self.locals.len();
            match &mut case.guard {
                Guard::Cond(g) => self.expr(g),
                Guard::Match { subject, pattern } => {
                    self.expr(subject);
                    pattern_names(pattern, &mut self.locals);
                }
                Guard::Always | Guard::Otherwise => {}
            }
            self.expr(&mut case.body);
            self.locals.truncate(mark);
        }
    }

    fn name_of<'e>(&self, e: &'e Expr) -> Option<&'e str> {
        match &e.kind {
            ExprKind::Ident(n) | ExprKind::Signal(n) => Some(n),
            _ => None,
        }
    }

    fn is_enum_id(&self, e: &Expr) -> Option<String> {
        match &e.kind {
            ExprKind::Ident(n) if self.enum_ids.contains(n) && !self.is_local(n) => Some(n.clone()),
            _ => None,
        }
    }

    fn expr(&mut self, e: &mut Expr) {
        stacker::maybe_grow(64 * 1024, 1024 * 1024, || self.expr_inner(e))
    }

    fn expr_inner(&mut self, e: &mut Expr) {
        if let ExprKind::Binary {
            op: op @ (BinaryOp::Eq | BinaryOp::Neq),
            lhs,
            rhs,
        } = &e.kind
        {
            let pair = match (self.is_enum_id(rhs), self.is_enum_id(lhs)) {
                (Some(value), _) => self.name_of(lhs).map(|b| (b.to_string(), value)),
                (None, Some(value)) => self.name_of(rhs).map(|b| (b.to_string(), value)),
                _ => None,
            };
            if let Some((bus, value)) = pair {
                let polarity = if *op == BinaryOp::Eq { Polarity::Eq } else { Polarity::Neq };
                e.kind = ExprKind::EnumCompare { polarity, bus, value };
                return;
            }
        }
        match &mut e.kind {
            ExprKind::Ident(name) => {
                if self.signals.contains(name.as_str()) && !self.is_local(name) {
                    e.kind = ExprKind::Signal(std::mem::take(name));
                }
            }
            ExprKind::Num(_) | ExprKind::Bool(_) | ExprKind::Signal(_) | ExprKind::EnumCompare { .. } => {}
            ExprKind::BusAccess { index, .. } => self.expr(index),
            ExprKind::Call { args, .. } => args.iter_mut().for_each(|a| self.expr(a)),
            ExprKind::SetLiteral(items) => items.iter_mut().for_each(|a| self.expr(a)),
            ExprKind::SetRange { start, step, end } => {
                self.expr(start);
                self.expr(step);
                self.expr(end);
            }
            ExprKind::Unary { operand, .. } => self.expr(operand),
            ExprKind::Binary { lhs, rhs, .. } => {
                self.expr(lhs);
                self.expr(rhs);
            }
            ExprKind::BigOp { binders, body, .. } => {
                let mark = self.locals.len();
                for b in binders.iter_mut() {
                    match b {
                        Binder::Member { name, set } => {
                            self.expr(set);
                            self.locals.push(name.clone());
                        }
                        Binder::Bounded {
                            lower, name, upper, ..
                        } => {
                            self.expr(lower);
                            self.expr(upper);
                            self.locals.push(name.clone());
                        }
                    }
                }
                self.expr(body);
                self.locals.truncate(mark);
            }
            ExprKind::Guarded(cases) => self.cases(cases),
            ExprKind::Sugar { kind, body, .. } => {
                match kind {
                    SugarKind::NextStack(n) => self.expr(n),
                    SugarKind::FinallyRange(n, m) | SugarKind::GloballyRange(n, m) => {
                        self.expr(n);
                        self.expr(m);
                    }
                }
                self.expr(body);
            }
        }
    }
}
