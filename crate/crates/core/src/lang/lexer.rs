use super::parser::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Int(i64),
    Ident(String),
    // keywords
    True,
    False,
    Not,
    Exists,
    Forall,
    In,
    Or,
    Mod,
    // punctuation
    Iff,    // <=>
    Imp,    // =>
    Amp,    // &
    Eq,     // =
    Ne,     // /=
    Lt,     // <
    Gt,     // >
    Le,     // <=
    Ge,     // >=
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
    DotDot, // ..
    Turnstile, // |- (sequent input)
    Eof,
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
}

pub fn tokenize(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = 1u32;
    let mut col = 1u32;
    macro_rules! push {
        ($tok:expr, $len:expr) => {{
            out.push(Spanned { tok: $tok, line, col });
            i += $len;
            col += $len as u32;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        let rest = |k: usize| chars.get(i + k).copied();
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
            }
            '(' => push!(Tok::LParen, 1),
            ')' => push!(Tok::RParen, 1),
            ',' => push!(Tok::Comma, 1),
            '+' => push!(Tok::Plus, 1),
            '-' => push!(Tok::Minus, 1),
            '*' => push!(Tok::Star, 1),
            '&' => push!(Tok::Amp, 1),
            '|' if rest(1) == Some('-') => push!(Tok::Turnstile, 2),
            '/' => {
                if rest(1) == Some('=') {
                    push!(Tok::Ne, 2)
                } else {
                    push!(Tok::Slash, 1)
                }
            }
            '=' => {
                if rest(1) == Some('>') {
                    push!(Tok::Imp, 2)
                } else {
                    push!(Tok::Eq, 1)
                }
            }
            '<' => {
                if rest(1) == Some('=') && rest(2) == Some('>') {
                    push!(Tok::Iff, 3)
                } else if rest(1) == Some('=') {
                    push!(Tok::Le, 2)
                } else {
                    push!(Tok::Lt, 1)
                }
            }
            '>' => {
                if rest(1) == Some('=') {
                    push!(Tok::Ge, 2)
                } else {
                    push!(Tok::Gt, 1)
                }
            }
            '.' => {
                if rest(1) == Some('.') {
                    push!(Tok::DotDot, 2)
                } else {
                    return Err(SyntaxError::new(line, col, "unexpected '.'"));
                }
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v: i64 = s.parse().map_err(|_| {
                    SyntaxError::new(line, col, format!("integer literal out of range: {s}"))
                })?;
                out.push(Spanned { tok: Tok::Int(v), line, col });
                col += (i - start) as u32;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let tok = match s.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "not" => Tok::Not,
                    "exists" => Tok::Exists,
                    "forall" => Tok::Forall,
                    "in" => Tok::In,
                    "or" => Tok::Or,
                    "mod" => Tok::Mod,
                    _ => Tok::Ident(s),
                };
                out.push(Spanned { tok, line, col });
                col += (i - start) as u32;
            }
            other => {
                return Err(SyntaxError::new(line, col, format!("unexpected character '{other}'")));
            }
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}
