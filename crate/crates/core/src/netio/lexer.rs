use crate::error::{ParseError, ParseErrorKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Token {
    Ident(String),
    Zero,
    One,
    Colon,
    Equals,
    Not,
    And,
    Or,
    Xor,
    LParen,
    RParen,
    Eof,
}

impl Token {
    pub(crate) fn describe(&self) -> String {
        match self {
            Token::Ident(name) => format!("`{name}`"),
            Token::Zero => "`0`".into(),
            Token::One => "`1`".into(),
            Token::Colon => "`:`".into(),
            Token::Equals => "`=`".into(),
            Token::Not => "`!`".into(),
            Token::And => "`&`".into(),
            Token::Or => "`|`".into(),
            Token::Xor => "`^`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Spanned {
    pub token: Token,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    while let Some(&c) = chars.peek() {
        let (start_line, start_col) = (line, column);
        let single = match c {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
                column += 1;
                continue;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    column += 1;
                }
                continue;
            }
            ':' => Some(Token::Colon),
            '=' => Some(Token::Equals),
            '!' | '~' => Some(Token::Not),
            '&' => Some(Token::And),
            '|' => Some(Token::Or),
            '^' => Some(Token::Xor),
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(token) = single {
            chars.next();
            column += 1;
            tokens.push(Spanned {
                token,
                line: start_line,
                column: start_col,
            });
            continue;
        }

        if c.is_ascii_alphabetic() || c == '_' {
            let mut name = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    name.push(c);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            tokens.push(Spanned {
                token: Token::Ident(name),
                line: start_line,
                column: start_col,
            });
        } else if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    digits.push(c);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            let token = match digits.as_str() {
                "0" => Token::Zero,
                "1" => Token::One,
                _ => {
                    let bad = digits
                        .chars()
                        .enumerate()
                        .find(|&(k, ch)| k > 0 || !matches!(ch, '0' | '1'))
                        .unwrap_or((0, c));
                    return Err(ParseError::new(
                        start_line,
                        start_col + bad.0,
                        ParseErrorKind::Lexical(bad.1),
                    ));
                }
            };
            tokens.push(Spanned {
                token,
                line: start_line,
                column: start_col,
            });
        } else {
            return Err(ParseError::new(
                start_line,
                start_col,
                ParseErrorKind::Lexical(c),
            ));
        }
    }
    tokens.push(Spanned {
        token: Token::Eof,
        line,
        column,
    });
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_are_one_based() {
        let toks = tokenize("vars: a\n  next a = !a # c\n").unwrap();
        let next = &toks[3];
        assert_eq!(next.token, Token::Ident("next".into()));
        assert_eq!((next.line, next.column), (2, 3));
        assert_eq!(toks.last().unwrap().token, Token::Eof);
        assert!(toks.iter().all(|t| t.token != Token::Ident("c".into())));
    }

    #[test]
    fn rejects_unknown_characters() {
        let err = tokenize("vars: a\nnext a = a $ a").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Lexical('$'));
        assert_eq!((err.position.line, err.position.column), (2, 12));
        assert!(tokenize("next a = 2").is_err());
        assert!(tokenize("next a = 10").is_err());
    }
}
