//! Tokenizer for TLSF text.
//!
//! Comments (`//` to end of line, nestable `/* */`) are dropped. Operators
//! are normalized: every symbolic and word spelling of one operator maps to
//! the same [`Op`], and compound lexemes such as `X[!]`, `(+)` or `&&[` come
//! out as single tokens.

use std::fmt;

use crate::ast::{BigOpKind, Span};
use crate::diagnostic::Diagnostic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    Info,
    Title,
    Description,
    Semantics,
    Target,
    Tags,
    Global,
    Parameters,
    Definitions,
    Main,
    Inputs,
    Outputs,
    Initially,
    Preset,
    Require,
    Assert,
    Assume,
    Guarantee,
    Invariants,
    Assumptions,
    Guarantees,
    Enum,
    Otherwise,
    True,
    False,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Not,
    And,
    Or,
    Implies,
    Equiv,
    Next,
    StrongNext,
    Finally,
    Globally,
    Until,
    Release,
    WeakUntil,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    SetMinus,
    Cap,
    Cup,
    Eq,
    Neq,
    Lt,
    Le,
    Gt,
    Ge,
    In,
    Size,
    SizeOf,
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Punct {
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Assign,
    DotDot,
    Tilde,
    Pipe,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Keyword(Keyword),
    Ident(String),
    /// Digits as written, leading zeros kept (enum patterns need them).
    Number(String),
    /// Unescaped string contents.
    Str(String),
    Op(Op),
    /// `op[` opening a big-operator binder list.
    BigOpen(BigOpKind),
    Punct(Punct),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: Span,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self.lexeme)
    }
}

/// Words with a fixed meaning. None of them can be used as an identifier.
pub fn word_kind(word: &str) -> Option<TokenKind> {
    use Keyword as K;
    let kw = |k| Some(TokenKind::Keyword(k));
    let op = |o| Some(TokenKind::Op(o));
    match word {
        "INFO" => kw(K::Info),
        "TITLE" => kw(K::Title),
        "DESCRIPTION" => kw(K::Description),
        "SEMANTICS" => kw(K::Semantics),
        "TARGET" => kw(K::Target),
        "TAGS" => kw(K::Tags),
        "GLOBAL" => kw(K::Global),
        "PARAMETERS" => kw(K::Parameters),
        "DEFINITIONS" => kw(K::Definitions),
        "MAIN" => kw(K::Main),
        "INPUTS" => kw(K::Inputs),
        "OUTPUTS" => kw(K::Outputs),
        "INITIALLY" => kw(K::Initially),
        "PRESET" => kw(K::Preset),
        "REQUIRE" => kw(K::Require),
        "ASSERT" => kw(K::Assert),
        "ASSUME" => kw(K::Assume),
        "GUARANTEE" => kw(K::Guarantee),
        "INVARIANTS" => kw(K::Invariants),
        "ASSUMPTIONS" => kw(K::Assumptions),
        "GUARANTEES" => kw(K::Guarantees),
        "enum" => kw(K::Enum),
        "otherwise" => kw(K::Otherwise),
        "true" => kw(K::True),
        "false" => kw(K::False),
        "X" => op(Op::Next),
        "F" => op(Op::Finally),
        "G" => op(Op::Globally),
        "U" => op(Op::Until),
        "R" => op(Op::Release),
        "W" => op(Op::WeakUntil),
        "NOT" => op(Op::Not),
        "AND" => op(Op::And),
        "OR" => op(Op::Or),
        "IMPLIES" => op(Op::Implies),
        "EQUIV" => op(Op::Equiv),
        "MUL" => op(Op::Star),
        "DIV" => op(Op::Slash),
        "MOD" => op(Op::Percent),
        "PLUS" => op(Op::Plus),
        "MINUS" => op(Op::Minus),
        "CAP" => op(Op::Cap),
        "CUP" => op(Op::Cup),
        "SETMINUS" => op(Op::SetMinus),
        "EQ" => op(Op::Eq),
        "NEQ" => op(Op::Neq),
        "LE" => op(Op::Lt),
        "LEQ" => op(Op::Le),
        "GE" => op(Op::Gt),
        "GEQ" | "GEG" => op(Op::Ge),
        "IN" | "ELEM" => op(Op::In),
        "SIZE" => op(Op::Size),
        "SIZEOF" => op(Op::SizeOf),
        "MIN" => op(Op::Min),
        "MAX" => op(Op::Max),
        // only meaningful directly before `[`
        "SUM" | "PROD" | "FORALL" | "EXISTS" => Some(TokenKind::Ident(String::new())),
        _ => None,
    }
}

/// Word spellings of big operators, valid only when directly followed by `[`.
fn big_op_word(word: &str) -> Option<BigOpKind> {
    Some(match word {
        "SUM" => BigOpKind::Sum,
        "PROD" => BigOpKind::Product,
        "CUP" => BigOpKind::Union,
        "CAP" => BigOpKind::Intersect,
        "AND" | "FORALL" => BigOpKind::And,
        "OR" | "EXISTS" => BigOpKind::Or,
        _ => return None,
    })
}

pub fn is_reserved(word: &str) -> bool {
    word_kind(word).is_some()
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_' || c == '@'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '@' || c == '\''
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
    tokens: Vec<Token>,
}

impl<'a> Lexer<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn advance(&mut self, bytes: usize) {
        for c in self.src[self.pos..self.pos + bytes].chars() {
            if c == '\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
        self.pos += bytes;
    }

    fn push(&mut self, kind: TokenKind, len: usize) {
        let (line, column, start) = (self.line, self.col, self.pos);
        self.advance(len);
        self.tokens.push(Token {
            kind,
            lexeme: self.src[start..self.pos].to_string(),
            span: Span::new(start, self.pos),
            line,
            column,
        });
    }

    fn skip_trivia(&mut self) -> Result<(), Diagnostic> {
        loop {
            let rest = self.rest();
            if let Some(c) = rest.chars().next().filter(|c| c.is_whitespace()) {
                self.advance(c.len_utf8());
            } else if rest.starts_with("//") {
                let len = rest.find('\n').unwrap_or(rest.len());
                self.advance(len);
            } else if rest.starts_with("/*") {
                let open = self.pos;
                let mut depth = 0usize;
                let mut i = 0;
                let bytes = rest.as_bytes();
                loop {
                    if i + 1 >= bytes.len() {
                        return Err(Diagnostic::error(
                            "unterminated comment",
                            Span::new(open, open + 2),
                        )
                        .expected("`*/`"));
                    }
                    match (bytes[i], bytes[i + 1]) {
                        (b'/', b'*') => {
                            depth += 1;
                            i += 2;
                        }
                        (b'*', b'/') => {
                            depth -= 1;
                            i += 2;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => i += 1,
                    }
                }
                self.advance(i);
            } else {
                return Ok(());
            }
        }
    }

    fn string(&mut self) -> Result<(), Diagnostic> {
        let start = self.pos;
        let mut value = String::new();
        let mut chars = self.rest().char_indices().skip(1);
        loop {
            match chars.next() {
                None => {
                    return Err(Diagnostic::error(
                        "unterminated string literal",
                        Span::new(start, self.src.len()),
                    )
                    .expected("`\"`"))
                }
                Some((i, '"')) => {
                    self.push(TokenKind::Str(value), i + 1);
                    return Ok(());
                }
                Some((_, '\\')) => match chars.next() {
                    Some((_, c @ ('"' | '\\'))) => value.push(c),
                    Some((_, c)) => {
                        value.push('\\');
                        value.push(c);
                    }
                    None => continue,
                },
                Some((_, c)) => value.push(c),
            }
        }
    }

    fn word(&mut self) -> Result<(), Diagnostic> {
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|&(_, c)| !is_ident_char(c))
            .map_or(rest.len(), |(i, _)| i);
        let word = &rest[..len];
        let after = &rest[len..];
        if word == "X" && after.starts_with("[!]") {
            self.push(TokenKind::Op(Op::StrongNext), 4);
            return Ok(());
        }
        if after.starts_with('[') {
            if let Some(kind) = big_op_word(word) {
                self.push(TokenKind::BigOpen(kind), len + 1);
                return Ok(());
            }
        }
        match word_kind(word) {
            Some(TokenKind::Ident(_)) => Err(Diagnostic::error(
                format!("`{word}` must be directly followed by `[`"),
                Span::new(self.pos, self.pos + len),
            )),
            Some(kind) => {
                self.push(kind, len);
                Ok(())
            }
            None => {
                self.push(TokenKind::Ident(word.to_string()), len);
                Ok(())
            }
        }
    }

    fn symbol(&mut self) -> Result<(), Diagnostic> {
        use Punct as P;
        let rest = self.rest();
        let big = |k| TokenKind::BigOpen(k);
        let op = TokenKind::Op;
        let p = TokenKind::Punct;
        let table: &[(&str, TokenKind)] = &[
            ("(+)[", big(BigOpKind::Union)),
            ("(*)[", big(BigOpKind::Intersect)),
            ("(+)", op(Op::Cup)),
            ("(*)", op(Op::Cap)),
            ("(\\)", op(Op::SetMinus)),
            ("(-)", op(Op::SetMinus)),
            ("&&[", big(BigOpKind::And)),
            ("||[", big(BigOpKind::Or)),
            ("+[", big(BigOpKind::Sum)),
            ("*[", big(BigOpKind::Product)),
            ("<->", op(Op::Equiv)),
            ("&&", op(Op::And)),
            ("||", op(Op::Or)),
            ("->", op(Op::Implies)),
            ("<-", op(Op::In)),
            ("<=", op(Op::Le)),
            (">=", op(Op::Ge)),
            ("==", op(Op::Eq)),
            ("!=", op(Op::Neq)),
            ("/=", op(Op::Neq)),
            ("..", p(P::DotDot)),
            ("&", op(Op::And)),
            ("|", p(P::Pipe)),
            ("+", op(Op::Plus)),
            ("-", op(Op::Minus)),
            ("*", op(Op::Star)),
            ("/", op(Op::Slash)),
            ("%", op(Op::Percent)),
            ("<", op(Op::Lt)),
            (">", op(Op::Gt)),
            ("=", p(P::Assign)),
            ("!", op(Op::Not)),
            ("~", p(P::Tilde)),
            (":", p(P::Colon)),
            (",", p(P::Comma)),
            (";", p(P::Semi)),
            ("{", p(P::LBrace)),
            ("}", p(P::RBrace)),
            ("(", p(P::LParen)),
            (")", p(P::RParen)),
            ("[", p(P::LBracket)),
            ("]", p(P::RBracket)),
        ];
        for (text, kind) in table {
            if rest.starts_with(text) {
                self.push(kind.clone(), text.len());
                return Ok(());
            }
        }
        let c = rest.chars().next().unwrap_or('\0');
        Err(Diagnostic::error(
            format!("illegal character `{c}`"),
            Span::new(self.pos, self.pos + c.len_utf8()),
        ))
    }

    fn run(mut self) -> Result<Vec<Token>, Diagnostic> {
        loop {
            self.skip_trivia()?;
            let Some(c) = self.peek() else {
                return Ok(self.tokens);
            };
            if c == '"' {
                self.string()?;
            } else if c.is_ascii_digit() {
                let len = self
                    .rest()
                    .find(|c: char| !c.is_ascii_digit())
                    .unwrap_or(self.rest().len());
                let digits = self.rest()[..len].to_string();
                self.push(TokenKind::Number(digits), len);
            } else if is_ident_start(c) {
                self.word()?;
            } else {
                self.symbol()?;
            }
        }
    }
}

/// Splits `source` into tokens, dropping whitespace and comments.
pub fn tokenize(source: &str) -> Result<Vec<Token>, Diagnostic> {
    Lexer {
        src: source,
        pos: 0,
        line: 1,
        col: 1,
        tokens: Vec::new(),
    }
    .run()
}

/// Joins token lexemes with single spaces.
pub fn detokenize(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(|t| t.lexeme.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}
