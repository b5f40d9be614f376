use crate::diag::{Diagnostic, Rule, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Str(String),
    Num(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Semi,
    Newline,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Str(_) => "string literal".to_string(),
            Tok::Num(s) => format!("number '{s}'"),
            Tok::LBrace => "'{'".to_string(),
            Tok::RBrace => "'}'".to_string(),
            Tok::LBracket => "'['".to_string(),
            Tok::RBracket => "']'".to_string(),
            Tok::Comma => "','".to_string(),
            Tok::Dot => "'.'".to_string(),
            Tok::Semi => "';'".to_string(),
            Tok::Newline => "end of line".to_string(),
            Tok::Eof => "end of input".to_string(),
        }
    }

    pub fn is_terminator(&self) -> bool {
        matches!(self, Tok::Newline | Tok::Semi)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: u32,
    pub column: u32,
    pub length: u32,
}

impl Token {
    pub fn span(&self, file: &str) -> SourceSpan {
        SourceSpan::new(file, self.line, self.column, self.length)
    }

    pub fn ident(&self) -> Option<&str> {
        match &self.tok {
            Tok::Ident(s) => Some(s),
            _ => None,
        }
    }
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    column: u32,
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

    fn peek_second(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next()
    }
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

/// Always ends with an `Eof` token. Lexical problems become L1 diagnostics
/// and the offending characters are skipped.
pub(crate) fn tokenize(source: &str, file: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut cur = Cursor { chars: source.chars().peekable(), line: 1, column: 1 };
    let mut tokens = Vec::new();
    let mut diags = Vec::new();

    while let Some(c) = cur.peek() {
        let (line, column) = (cur.line, cur.column);
        let push = |tokens: &mut Vec<Token>, tok: Tok, length: u32| {
            tokens.push(Token { tok, line, column, length });
        };
        match c {
            ' ' | '\t' | '\r' => {
                cur.bump();
            }
            '\n' => {
                cur.bump();
                push(&mut tokens, Tok::Newline, 1);
            }
            '/' if cur.peek_second() == Some('/') => {
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    cur.bump();
                }
            }
            '{' | '}' | '[' | ']' | ',' | '.' | ';' => {
                cur.bump();
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    _ => Tok::Semi,
                };
                push(&mut tokens, tok, 1);
            }
            '"' => {
                cur.bump();
                let mut text = String::new();
                let mut length = 1;
                let mut closed = false;
                while let Some(c) = cur.bump() {
                    length += 1;
                    match c {
                        '"' => {
                            closed = true;
                            break;
                        }
                        '\\' => match cur.peek() {
                            Some(e @ ('"' | '\\')) => {
                                cur.bump();
                                length += 1;
                                text.push(e);
                            }
                            other => {
                                let shown = other.map(|c| c.to_string()).unwrap_or_default();
                                diags.push(Diagnostic::new(
                                    Rule::L1,
                                    SourceSpan::new(file, cur.line, cur.column.saturating_sub(1), 2),
                                    format!("unknown escape `\\{shown}` in string; only \\\" and \\\\ are allowed"),
                                ));
                                text.push('\\');
                            }
                        },
                        _ => text.push(c),
                    }
                }
                if !closed {
                    diags.push(Diagnostic::new(
                        Rule::L1,
                        SourceSpan::new(file, line, column, 1),
                        "unterminated string literal",
                    ));
                }
                push(&mut tokens, Tok::Str(text), length);
            }
            c if c.is_ascii_alphabetic() => {
                let mut text = String::new();
                while let Some(c) = cur.peek() {
                    if !is_ident_continue(c) {
                        break;
                    }
                    text.push(c);
                    cur.bump();
                }
                let length = text.chars().count() as u32;
                push(&mut tokens, Tok::Ident(text), length);
            }
            c if c.is_ascii_digit() || (c == '-' && cur.peek_second().is_some_and(|d| d.is_ascii_digit())) => {
                let mut text = String::new();
                if c == '-' {
                    text.push('-');
                    cur.bump();
                }
                while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
                    text.push(d);
                    cur.bump();
                }
                if cur.peek() == Some('.') && cur.peek_second().is_some_and(|d| d.is_ascii_digit()) {
                    text.push('.');
                    cur.bump();
                    while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
                        text.push(d);
                        cur.bump();
                    }
                }
                if cur.peek().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') {
                    // 1e6, 3W and the like: swallow the rest so it reports once
                    while let Some(c) = cur.peek().filter(|&c| is_ident_continue(c) || c == '.') {
                        text.push(c);
                        cur.bump();
                    }
                    diags.push(Diagnostic::new(
                        Rule::L1,
                        SourceSpan::new(file, line, column, text.chars().count() as u32),
                        format!("malformed number `{text}`"),
                    ));
                    continue;
                }
                let length = text.chars().count() as u32;
                push(&mut tokens, Tok::Num(text), length);
            }
            other => {
                cur.bump();
                diags.push(Diagnostic::new(
                    Rule::L1,
                    SourceSpan::new(file, line, column, 1),
                    format!("unexpected character `{}`", other.escape_default()),
                ));
            }
        }
    }
    tokens.push(Token { tok: Tok::Eof, line: cur.line, column: cur.column, length: 0 });
    (tokens, diags)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        tokenize(src, "t").0.into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn tokens_and_positions() {
        let (toks, diags) = tokenize("claim C1 \"a \\\"b\\\"\" root\n  TAC-1.C2 // note\n", "t");
        assert!(diags.is_empty());
        let kinds: Vec<_> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::Ident("claim".into()),
                Tok::Ident("C1".into()),
                Tok::Str("a \"b\"".into()),
                Tok::Ident("root".into()),
                Tok::Newline,
                Tok::Ident("TAC-1".into()),
                Tok::Dot,
                Tok::Ident("C2".into()),
                Tok::Newline,
                Tok::Eof,
            ]
        );
        assert_eq!((toks[5].line, toks[5].column), (2, 3));
    }

    #[test]
    fn numbers() {
        assert_eq!(
            kinds("[-0.5, 300]"),
            vec![
                Tok::LBracket,
                Tok::Num("-0.5".into()),
                Tok::Comma,
                Tok::Num("300".into()),
                Tok::RBracket,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn lexical_errors_are_reported_and_skipped() {
        let (toks, diags) = tokenize("a @ b 1e6", "t");
        assert_eq!(diags.len(), 2);
        assert!(diags.iter().all(|d| d.rule == Rule::L1));
        assert_eq!(diags[0].span.column, 3);
        assert_eq!(toks.len(), 3);
    }

    #[test]
    fn unterminated_string() {
        let (_, diags) = tokenize("\"abc", "t");
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].message, "unterminated string literal");
    }
}
