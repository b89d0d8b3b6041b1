use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Turnstile,
    Eq,
    Lt,
    Le,
    Tilde,
    Str(String),
    Int(i64),
    Var(String),
    Ident(String),
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Turnstile => "`:-`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Int(i) => format!("integer {i}"),
            Tok::Var(v) => format!("variable ?{v}"),
            Tok::Ident(w) => format!("`{w}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, message: String| ParseError {
        line,
        column,
        message,
    };

    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let mut advance = 1;
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '=' => Tok::Eq,
            '~' => Tok::Tilde,
            '<' => {
                if chars.get(i + 1) == Some(&'=') {
                    advance = 2;
                    Tok::Le
                } else {
                    Tok::Lt
                }
            }
            ':' => {
                if chars.get(i + 1) == Some(&'-') {
                    advance = 2;
                    Tok::Turnstile
                } else {
                    return Err(err(tl, tc, "expected `:-`".into()));
                }
            }
            '"' => {
                let mut s = String::new();
                let mut j = i + 1;
                loop {
                    match chars.get(j) {
                        None | Some('\n') => {
                            return Err(err(tl, tc, "unterminated string literal".into()))
                        }
                        Some('"') => break,
                        Some('\\') => {
                            let esc = match chars.get(j + 1) {
                                Some('"') => '"',
                                Some('\\') => '\\',
                                Some('n') => '\n',
                                Some('t') => '\t',
                                _ => {
                                    return Err(err(
                                        tl,
                                        tc + (j - i),
                                        "unknown escape sequence".into(),
                                    ))
                                }
                            };
                            s.push(esc);
                            j += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            j += 1;
                        }
                    }
                }
                advance = j + 1 - i;
                Tok::Str(s)
            }
            '?' => {
                let mut j = i + 1;
                if !chars.get(j).is_some_and(|&ch| is_name_start(ch)) {
                    return Err(err(tl, tc, "expected a variable name after `?`".into()));
                }
                while chars.get(j).is_some_and(|&ch| is_name_char(ch)) {
                    j += 1;
                }
                advance = j - i;
                Tok::Var(chars[i + 1..j].iter().collect())
            }
            c if c.is_ascii_digit() || c == '-' => {
                let mut j = i + 1;
                while chars.get(j).is_some_and(|ch| ch.is_ascii_digit()) {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                let v = s
                    .parse::<i64>()
                    .map_err(|_| err(tl, tc, format!("invalid integer `{s}`")))?;
                advance = j - i;
                Tok::Int(v)
            }
            c if is_name_start(c) => {
                let mut j = i + 1;
                while chars.get(j).is_some_and(|&ch| is_name_char(ch)) {
                    j += 1;
                }
                advance = j - i;
                Tok::Ident(chars[i..j].iter().collect())
            }
            other => return Err(err(tl, tc, format!("unexpected character `{other}`"))),
        };
        out.push(Spanned {
            tok,
            line: tl,
            column: tc,
        });
        i += advance;
        col += advance;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}
