//! Hand-rolled lexer for the model format. Tracks line/column for every
//! token so diagnostics always point into the source.

use super::{Diagnostic, SourceFile};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    /// An identifier immediately followed by a prime mark.
    PrimedIdent(String),
    Int(i64),
    // Punctuation and operators.
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Semi,      // ;
    SemiSemi,  // ;;
    Assign,    // :=
    Eq,        // =
    Ne,        // !=
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Not,       // !
    AndAnd,    // &&
    OrOr,      // ||
    Arrow,     // ->
    Leads,     // ~>
    Pipe,      // |>
    DotDot,    // ..
    Dot,       // .
    At,        // @
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("'{s}'"),
            TokenKind::PrimedIdent(s) => format!("'{s}''"),
            TokenKind::Int(i) => format!("'{i}'"),
            TokenKind::LParen => "'('".into(),
            TokenKind::RParen => "')'".into(),
            TokenKind::LBrace => "'{'".into(),
            TokenKind::RBrace => "'}'".into(),
            TokenKind::LBracket => "'['".into(),
            TokenKind::RBracket => "']'".into(),
            TokenKind::Comma => "','".into(),
            TokenKind::Colon => "':'".into(),
            TokenKind::Semi => "';'".into(),
            TokenKind::SemiSemi => "';;'".into(),
            TokenKind::Assign => "':='".into(),
            TokenKind::Eq => "'='".into(),
            TokenKind::Ne => "'!='".into(),
            TokenKind::Lt => "'<'".into(),
            TokenKind::Le => "'<='".into(),
            TokenKind::Gt => "'>'".into(),
            TokenKind::Ge => "'>='".into(),
            TokenKind::Plus => "'+'".into(),
            TokenKind::Minus => "'-'".into(),
            TokenKind::Star => "'*'".into(),
            TokenKind::Not => "'!'".into(),
            TokenKind::AndAnd => "'&&'".into(),
            TokenKind::OrOr => "'||'".into(),
            TokenKind::Arrow => "'->'".into(),
            TokenKind::Leads => "'~>'".into(),
            TokenKind::Pipe => "'|>'".into(),
            TokenKind::DotDot => "'..'".into(),
            TokenKind::Dot => "'.'".into(),
            TokenKind::At => "'@'".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

pub struct Lexer;

impl Lexer {
    /// Tokenize the whole file, or report the first lexical error.
    pub fn tokenize(src: &SourceFile) -> Result<Vec<Token>, Diagnostic> {
        let mut tokens = Vec::new();
        let chars: Vec<char> = src.text.chars().collect();
        let mut i = 0usize;
        let mut line = 1usize;
        let mut col = 1usize;

        macro_rules! push {
            ($kind:expr, $l:expr, $c:expr) => {
                tokens.push(Token {
                    kind: $kind,
                    line: $l,
                    column: $c,
                })
            };
        }

        while i < chars.len() {
            let c = chars[i];
            let (tl, tc) = (line, col);
            match c {
                '\n' => {
                    line += 1;
                    col = 1;
                    i += 1;
                }
                ' ' | '\t' | '\r' => {
                    col += 1;
                    i += 1;
                }
                '/' if i + 1 < chars.len() && chars[i + 1] == '/' => {
                    while i < chars.len() && chars[i] != '\n' {
                        i += 1;
                        col += 1;
                    }
                }
                '/' if i + 1 < chars.len() && chars[i + 1] == '*' => {
                    i += 2;
                    col += 2;
                    let mut closed = false;
                    while i < chars.len() {
                        if chars[i] == '*' && i + 1 < chars.len() && chars[i + 1] == '/' {
                            i += 2;
                            col += 2;
                            closed = true;
                            break;
                        }
                        if chars[i] == '\n' {
                            line += 1;
                            col = 1;
                        } else {
                            col += 1;
                        }
                        i += 1;
                    }
                    if !closed {
                        return Err(Diagnostic::error_at(src, tl, tc, "unterminated block comment".into()));
                    }
                }
                '0'..='9' => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                        col += 1;
                    }
                    let text: String = chars[start..i].iter().collect();
                    match text.parse::<i64>() {
                        Ok(v) => push!(TokenKind::Int(v), tl, tc),
                        Err(_) => {
                            return Err(Diagnostic::error_at(src, tl, tc, format!("integer literal '{text}' out of range")))
                        }
                    }
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                        col += 1;
                    }
                    let text: String = chars[start..i].iter().collect();
                    if i < chars.len() && chars[i] == '\'' {
                        i += 1;
                        col += 1;
                        push!(TokenKind::PrimedIdent(text), tl, tc);
                    } else {
                        push!(TokenKind::Ident(text), tl, tc);
                    }
                }
                _ => {
                    let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
                    let kind2 = match two.as_str() {
                        ";;" => Some(TokenKind::SemiSemi),
                        ":=" => Some(TokenKind::Assign),
                        "!=" => Some(TokenKind::Ne),
                        "<=" => Some(TokenKind::Le),
                        ">=" => Some(TokenKind::Ge),
                        "&&" => Some(TokenKind::AndAnd),
                        "||" => Some(TokenKind::OrOr),
                        "->" => Some(TokenKind::Arrow),
                        "~>" => Some(TokenKind::Leads),
                        "|>" => Some(TokenKind::Pipe),
                        ".." => Some(TokenKind::DotDot),
                        _ => None,
                    };
                    if let Some(k) = kind2 {
                        push!(k, tl, tc);
                        i += 2;
                        col += 2;
                        continue;
                    }
                    let kind1 = match c {
                        '(' => Some(TokenKind::LParen),
                        ')' => Some(TokenKind::RParen),
                        '{' => Some(TokenKind::LBrace),
                        '}' => Some(TokenKind::RBrace),
                        '[' => Some(TokenKind::LBracket),
                        ']' => Some(TokenKind::RBracket),
                        ',' => Some(TokenKind::Comma),
                        ':' => Some(TokenKind::Colon),
                        ';' => Some(TokenKind::Semi),
                        '=' => Some(TokenKind::Eq),
                        '<' => Some(TokenKind::Lt),
                        '>' => Some(TokenKind::Gt),
                        '+' => Some(TokenKind::Plus),
                        '-' => Some(TokenKind::Minus),
                        '*' => Some(TokenKind::Star),
                        '!' => Some(TokenKind::Not),
                        '.' => Some(TokenKind::Dot),
                        '@' => Some(TokenKind::At),
                        _ => None,
                    };
                    match kind1 {
                        Some(k) => {
                            push!(k, tl, tc);
                            i += 1;
                            col += 1;
                        }
                        None => {
                            return Err(Diagnostic::error_at(src, tl, tc, format!("unexpected character '{c}'")))
                        }
                    }
                }
            }
        }
        tokens.push(Token {
            kind: TokenKind::Eof,
            line,
            column: col,
        });
        Ok(tokens)
    }
}
