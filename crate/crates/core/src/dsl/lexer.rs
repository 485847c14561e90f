use super::{DslError, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Lt,
    Gt,
    Arrow,
    Assign,
    Comma,
    Dot,
    Colon,
    Semi,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("'{}'", other.text()),
        }
    }

    pub fn text(&self) -> &str {
        match self {
            Tok::Ident(s) => s,
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Arrow => "->",
            Tok::Assign => ":=",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::Eof => "",
        }
    }
}

/// Punctuation terminals, in the order the grammar file lists them.
pub const PUNCTUATION: [&str; 14] = [
    "(", ")", "[", "]", "{", "}", "<", ">", "->", ":=", ",", ".", ":", ";",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spanned {
    pub tok: Tok,
    pub span: Span,
}

pub fn lex(src: &str) -> Result<Vec<Spanned>, DslError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }
    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump!();
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    bump!();
                } else {
                    break;
                }
            }
            out.push(Spanned { tok: Tok::Ident(s), span });
            continue;
        }
        bump!();
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '<' => Tok::Lt,
            '>' => Tok::Gt,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            ';' => Tok::Semi,
            '-' if chars.peek() == Some(&'>') => {
                bump!();
                Tok::Arrow
            }
            ':' if chars.peek() == Some(&'=') => {
                bump!();
                Tok::Assign
            }
            ':' => Tok::Colon,
            other => {
                return Err(DslError::Lex {
                    span,
                    message: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push(Spanned { tok, span });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        span: Span { line, col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans_and_comments() {
        let toks = lex("K a # hi\n  (p->q) := :").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(kinds[0], Tok::Ident("K".into()));
        assert_eq!(kinds[2], Tok::LParen);
        assert_eq!(toks[2].span, Span { line: 2, col: 3 });
        assert!(kinds.contains(&Tok::Arrow));
        assert!(kinds.contains(&Tok::Assign));
        assert!(kinds.contains(&Tok::Colon));
        assert_eq!(kinds.last(), Some(&Tok::Eof));
    }

    #[test]
    fn bad_character() {
        let err = lex("p $ q").unwrap_err();
        assert!(matches!(err, DslError::Lex { span: Span { line: 1, col: 3 }, .. }));
    }
}
