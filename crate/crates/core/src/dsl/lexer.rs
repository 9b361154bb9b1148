use super::{Diagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Number(String),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Dot,
    DotDot,
    Arrow,
    Eq,
    Star,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("`{s}`"),
            TokenKind::Number(n) => format!("number `{n}`"),
            TokenKind::Str(_) => "string".into(),
            TokenKind::LBrace => "`{`".into(),
            TokenKind::RBrace => "`}`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::LBracket => "`[`".into(),
            TokenKind::RBracket => "`]`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Colon => "`:`".into(),
            TokenKind::Dot => "`.`".into(),
            TokenKind::DotDot => "`..`".into(),
            TokenKind::Arrow => "`->`".into(),
            TokenKind::Eq => "`=`".into(),
            TokenKind::Star => "`*`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

pub fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

pub fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

pub fn tokenize(file: &str, text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    let span = |line, column, length| SourceSpan {
        file: file.to_string(),
        line,
        column,
        length,
    };
    while let Some(c) = cur.peek() {
        let (line, column) = (cur.line, cur.column);
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '#' {
            while cur.peek().is_some_and(|c| c != '\n') {
                cur.bump();
            }
            continue;
        }
        let kind = if is_ident_start(c) {
            let mut s = String::new();
            while let Some(c) = cur.peek().filter(|c| is_ident_continue(*c)) {
                s.push(c);
                cur.bump();
            }
            TokenKind::Ident(s)
        } else if c.is_ascii_digit() || c == '-' {
            cur.bump();
            if c == '-' && cur.peek() == Some('>') {
                cur.bump();
                TokenKind::Arrow
            } else if c == '-' && !cur.peek().is_some_and(|d| d.is_ascii_digit()) {
                return Err(Diagnostic::error(
                    "expected a digit or `>` after `-`",
                    span(line, column, 1),
                ));
            } else {
                let mut s = String::from(c);
                while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
                    s.push(d);
                    cur.bump();
                }
                // a fraction needs a digit right after the point; `1..2` is a range
                let mut ahead = cur.chars.clone();
                if ahead.next() == Some('.') && ahead.next().is_some_and(|d| d.is_ascii_digit()) {
                    s.push('.');
                    cur.bump();
                    while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
                        s.push(d);
                        cur.bump();
                    }
                }
                TokenKind::Number(s)
            }
        } else if c == '"' {
            cur.bump();
            let mut s = String::new();
            loop {
                match cur.bump() {
                    None | Some('\n') => {
                        return Err(Diagnostic::error(
                            "unterminated string",
                            span(line, column, 1),
                        ))
                    }
                    Some('"') => break,
                    Some('\\') => match cur.bump() {
                        Some('"') => s.push('"'),
                        Some('\\') => s.push('\\'),
                        Some('n') => s.push('\n'),
                        _ => {
                            return Err(Diagnostic::error(
                                "unknown escape in string",
                                span(cur.line, cur.column.saturating_sub(1).max(1), 1),
                            ))
                        }
                    },
                    Some(other) => s.push(other),
                }
            }
            TokenKind::Str(s)
        } else {
            cur.bump();
            match c {
                '{' => TokenKind::LBrace,
                '}' => TokenKind::RBrace,
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                '[' => TokenKind::LBracket,
                ']' => TokenKind::RBracket,
                ',' => TokenKind::Comma,
                ':' => TokenKind::Colon,
                '=' => TokenKind::Eq,
                '*' => TokenKind::Star,
                '.' => {
                    if cur.peek() == Some('.') {
                        cur.bump();
                        TokenKind::DotDot
                    } else {
                        TokenKind::Dot
                    }
                }
                other => {
                    return Err(Diagnostic::error(
                        format!("unexpected character `{}`", other.escape_default()),
                        span(line, column, 1),
                    ))
                }
            }
        };
        let length = if cur.line == line {
            (cur.column - column).max(1)
        } else {
            1
        };
        tokens.push(Token {
            kind,
            span: span(line, column, length),
        });
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        span: span(cur.line, cur.column, 0),
    });
    Ok(tokens)
}
