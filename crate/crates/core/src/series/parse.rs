//! Parser for small polynomial literals in `z, u, v, y` such as `"1 - 2z - u*z + 5/2 u*z^2"`.
//! Parentheses are not supported; juxtaposition and `*` both multiply.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::poly::{Exponents, Var};
use super::SeriesError;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(char),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(input: &str) -> Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            'z' | 'u' | 'v' | 'y' => {
                out.push(Token::Ident(c));
                i += 1;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Token::Num(digits.parse().expect("ascii digits")));
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    Ok(out)
}

/// Returns `(z-degree, catalytic exponents, coefficient)` for every term.
pub(crate) fn parse_polynomial(
    input: &str,
) -> Result<Vec<(usize, Exponents, BigRational)>, SeriesError> {
    let err = |reason: String| SeriesError::Parse {
        input: input.to_string(),
        reason,
    };
    let tokens = tokenize(input).map_err(err)?;
    let mut terms = Vec::new();
    let mut pos = 0;
    let mut first = true;
    while pos < tokens.len() || first {
        let mut negative = false;
        match tokens.get(pos) {
            Some(Token::Plus) => pos += 1,
            Some(Token::Minus) => {
                negative = true;
                pos += 1;
            }
            None if first => return Err(err("empty expression".into())),
            _ if first => {}
            Some(t) => return Err(err(format!("expected + or -, found {t:?}"))),
            None => unreachable!(),
        }
        first = false;
        let mut coeff = BigRational::one();
        let mut zdeg = 0usize;
        let mut exps: Exponents = [0; 3];
        let mut factors = 0;
        loop {
            match tokens.get(pos) {
                Some(Token::Star) if factors > 0 => {
                    pos += 1;
                    continue;
                }
                Some(Token::Num(n)) => {
                    pos += 1;
                    let mut value = BigRational::from_integer(n.clone());
                    if tokens.get(pos) == Some(&Token::Slash) {
                        match tokens.get(pos + 1) {
                            Some(Token::Num(d)) if *d != BigInt::from(0) => {
                                value /= BigRational::from_integer(d.clone());
                                pos += 2;
                            }
                            _ => return Err(err("bad denominator".into())),
                        }
                    }
                    coeff *= value;
                }
                Some(Token::Ident(c)) => {
                    let c = *c;
                    pos += 1;
                    let mut power = 1u32;
                    if tokens.get(pos) == Some(&Token::Caret) {
                        match tokens.get(pos + 1) {
                            Some(Token::Num(k)) => {
                                power = k.try_into().map_err(|_| err("exponent too large".into()))?;
                                pos += 2;
                            }
                            _ => return Err(err("missing exponent".into())),
                        }
                    }
                    if c == 'z' {
                        zdeg += power as usize;
                    } else {
                        let var = Var::from_name(&c.to_string()).expect("tokenizer admits u, v, y");
                        exps[var.index()] += power;
                    }
                }
                _ => break,
            }
            factors += 1;
        }
        if factors == 0 {
            return Err(err("term without factors".into()));
        }
        if negative {
            coeff = -coeff;
        }
        terms.push((zdeg, exps, coeff));
    }
    Ok(terms)
}
