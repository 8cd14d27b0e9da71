use crate::error::{Error, ErrorKind};
use crate::syntax::Span;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Op(String),
    Int(i64),
    Str(String),
    Char(char),
    Hole(String),
    Keyword(&'static str),
    /// Reserved punctuation: `( ) [ ] { } , ; : = -> => <- \ | _`
    Punct(&'static str),
    World,
    PrimPragma,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
    /// First token on its line.
    pub line_start: bool,
}

const KEYWORDS: &[&str] =
    &["data", "where", "case", "of", "do", "let", "in", "import", "Type", "auto", "default"];
const PUNCT: &[&str] = &["->", "=>", "<-", "=", ":", "|", "\\"];
const SYMBOL_CHARS: &str = "!#$%&*+./<=>?@\\^|-~:";

pub fn lex(src: &str) -> Result<Vec<Token>, Error> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    let mut last_line = 0u32;

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') && !chars.get(i + 2).is_some_and(|c| SYMBOL_CHARS.contains(*c) && *c != '-') {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        if c == '{' && chars.get(i + 1) == Some(&'-') {
            let mut depth = 0;
            loop {
                if i >= chars.len() {
                    return Err(err(line, col, "unterminated block comment"));
                }
                if chars[i] == '{' && chars.get(i + 1) == Some(&'-') {
                    depth += 1;
                    bump!();
                    bump!();
                } else if chars[i] == '-' && chars.get(i + 1) == Some(&'}') {
                    depth -= 1;
                    bump!();
                    bump!();
                    if depth == 0 {
                        break;
                    }
                } else {
                    bump!();
                }
            }
            continue;
        }

        let (sl, sc) = (line, col);
        let tok = if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                bump!();
            }
            let s: String = chars[start..i].iter().collect();
            if s == "_" {
                Tok::Punct("_")
            } else if let Some(k) = KEYWORDS.iter().find(|k| **k == s) {
                Tok::Keyword(k)
            } else {
                Tok::Ident(s)
            }
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                bump!();
            }
            let s: String = chars[start..i].iter().collect();
            Tok::Int(s.parse().map_err(|_| err(sl, sc, "integer literal out of range"))?)
        } else if c == '"' {
            bump!();
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None | Some('\n') => return Err(err(sl, sc, "unterminated string literal")),
                    Some('"') => {
                        bump!();
                        break;
                    }
                    Some('\\') => {
                        bump!();
                        let e = *chars.get(i).ok_or_else(|| err(sl, sc, "bad escape"))?;
                        s.push(unescape(e).ok_or_else(|| err(line, col, "bad escape"))?);
                        bump!();
                    }
                    Some(ch) => {
                        s.push(*ch);
                        bump!();
                    }
                }
            }
            Tok::Str(s)
        } else if c == '\'' {
            bump!();
            let ch = match chars.get(i) {
                Some('\\') => {
                    bump!();
                    let e = *chars.get(i).ok_or_else(|| err(sl, sc, "bad escape"))?;
                    unescape(e).ok_or_else(|| err(sl, sc, "bad escape"))?
                }
                Some(ch) => *ch,
                None => return Err(err(sl, sc, "unterminated character literal")),
            };
            bump!();
            if chars.get(i) != Some(&'\'') {
                return Err(err(sl, sc, "unterminated character literal"));
            }
            bump!();
            Tok::Char(ch)
        } else if c == '?' && chars.get(i + 1).is_some_and(|c| c.is_alphabetic() || *c == '_') {
            bump!();
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                bump!();
            }
            Tok::Hole(chars[start..i].iter().collect())
        } else if c == '%' && chars.get(i + 1).is_some_and(|c| c.is_alphabetic()) {
            bump!();
            let start = i;
            while i < chars.len() && chars[i].is_alphanumeric() {
                bump!();
            }
            let s: String = chars[start..i].iter().collect();
            match s.as_str() {
                "World" => Tok::World,
                "prim" => Tok::PrimPragma,
                _ => return Err(err(sl, sc, &format!("unknown pragma %{s}"))),
            }
        } else if "()[]{},;".contains(c) {
            bump!();
            Tok::Punct(match c {
                '(' => "(",
                ')' => ")",
                '[' => "[",
                ']' => "]",
                '{' => "{",
                '}' => "}",
                ',' => ",",
                _ => ";",
            })
        } else if SYMBOL_CHARS.contains(c) {
            let start = i;
            while i < chars.len() && SYMBOL_CHARS.contains(chars[i]) {
                bump!();
            }
            let s: String = chars[start..i].iter().collect();
            match PUNCT.iter().find(|p| **p == s) {
                Some(p) => Tok::Punct(p),
                None => Tok::Op(s),
            }
        } else {
            return Err(err(sl, sc, &format!("unexpected character `{c}`")));
        };
        let line_start = sl != last_line;
        last_line = sl;
        toks.push(Token { tok, span: Span::new(sl, sc, line, col), line_start });
    }
    Ok(toks)
}

fn unescape(c: char) -> Option<char> {
    Some(match c {
        'n' => '\n',
        't' => '\t',
        '\\' => '\\',
        '"' => '"',
        '\'' => '\'',
        '0' => '\0',
        _ => return None,
    })
}

fn err(line: u32, col: u32, msg: &str) -> Error {
    Error::new(ErrorKind::SyntaxError, Span::new(line, col, line, col), msg.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_operators_and_layout_flags() {
        let toks = lex("x :: xs\n  >>= \\k => ?h -- c\n%World").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(kinds[1], Tok::Op("::".into()));
        assert_eq!(kinds[3], Tok::Op(">>=".into()));
        assert!(toks[3].line_start);
        assert_eq!(kinds[4], Tok::Punct("\\"));
        assert_eq!(kinds[7], Tok::Hole("h".into()));
        assert_eq!(kinds[8], Tok::World);
    }

    #[test]
    fn string_escapes() {
        let toks = lex(r#""a\nb" 'x'"#).unwrap();
        assert_eq!(toks[0].tok, Tok::Str("a\nb".into()));
        assert_eq!(toks[1].tok, Tok::Char('x'));
    }
}
