//! Tokenizer for the SMT-LIB / Alethe concrete syntax.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::pow::Pow;

use crate::error::{FrontendError, Position};

#[derive(Clone, Debug, PartialEq)]
pub enum TokenKind {
    LParen,
    RParen,
    Symbol(String),
    Keyword(String),
    Numeral(BigInt),
    Decimal(BigRational),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Position,
}

fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c)
}

pub fn tokenize(input: &str) -> Result<Vec<Token>, FrontendError> {
    let mut tokens = Vec::new();
    let mut chars = input.chars().peekable();
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! bump {
        ($c:expr) => {{
            if $c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }};
    }

    while let Some(&c) = chars.peek() {
        let pos = Position { line, col };
        match c {
            '(' => {
                chars.next();
                bump!(c);
                tokens.push(Token { kind: TokenKind::LParen, pos });
            }
            ')' => {
                chars.next();
                bump!(c);
                tokens.push(Token { kind: TokenKind::RParen, pos });
            }
            ';' => {
                while let Some(&c) = chars.peek() {
                    chars.next();
                    bump!(c);
                    if c == '\n' {
                        break;
                    }
                }
            }
            '|' => {
                chars.next();
                bump!(c);
                let mut name = String::new();
                let mut closed = false;
                while let Some(&c) = chars.peek() {
                    chars.next();
                    bump!(c);
                    if c == '|' {
                        closed = true;
                        break;
                    }
                    name.push(c);
                }
                if !closed {
                    return Err(FrontendError::Lex {
                        pos,
                        msg: "unterminated quoted symbol".into(),
                    });
                }
                tokens.push(Token { kind: TokenKind::Symbol(name), pos });
            }
            ':' => {
                chars.next();
                bump!(c);
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if is_symbol_char(c) {
                        chars.next();
                        bump!(c);
                        name.push(c);
                    } else {
                        break;
                    }
                }
                if name.is_empty() {
                    return Err(FrontendError::Lex {
                        pos,
                        msg: "empty keyword".into(),
                    });
                }
                tokens.push(Token { kind: TokenKind::Keyword(name), pos });
            }
            c if c.is_whitespace() => {
                chars.next();
                bump!(c);
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        chars.next();
                        bump!(c);
                        digits.push(c);
                    } else {
                        break;
                    }
                }
                if chars.peek() == Some(&'.') {
                    chars.next();
                    bump!('.');
                    let mut frac = String::new();
                    while let Some(&c) = chars.peek() {
                        if c.is_ascii_digit() {
                            chars.next();
                            bump!(c);
                            frac.push(c);
                        } else {
                            break;
                        }
                    }
                    if frac.is_empty() {
                        return Err(FrontendError::Lex {
                            pos,
                            msg: "decimal without fractional digits".into(),
                        });
                    }
                    let numerator: BigInt = format!("{digits}{frac}").parse().unwrap();
                    let denominator = BigInt::from(10u32).pow(frac.len() as u32);
                    tokens.push(Token {
                        kind: TokenKind::Decimal(BigRational::new(numerator, denominator)),
                        pos,
                    });
                } else if chars.peek().is_some_and(|&c| is_symbol_char(c)) {
                    return Err(FrontendError::Lex {
                        pos,
                        msg: "symbol may not start with a digit".into(),
                    });
                } else {
                    tokens.push(Token {
                        kind: TokenKind::Numeral(digits.parse().unwrap()),
                        pos,
                    });
                }
            }
            c if is_symbol_char(c) => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if is_symbol_char(c) {
                        chars.next();
                        bump!(c);
                        name.push(c);
                    } else {
                        break;
                    }
                }
                tokens.push(Token { kind: TokenKind::Symbol(name), pos });
            }
            other => {
                return Err(FrontendError::Lex {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(tokens)
}
