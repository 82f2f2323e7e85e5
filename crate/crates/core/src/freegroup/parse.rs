//! Text format for products of named generators.
//!
//! Tokens are whitespace separated and the product is read right-to-left,
//! so `theta eps 2` means `θ ∘ ε_2`. Recognised generators:
//! `rho i j`, `eps i`, `perm (i j ...)(k l ...)`, `theta`, `tau`, `eta`,
//! `alpha`, `id`. The separators `∘` and `*` are accepted and ignored.

use super::aut::{compose_named, Basis, FreeAut, NamedGenerator, Permutation};
use super::FreeGroupError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(usize),
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<Tok>, FreeGroupError> {
    let mut toks = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() || c == '∘' || c == '*' || c == ',' {
            chars.next();
        } else if c == '(' {
            chars.next();
            toks.push(Tok::Open);
        } else if c == ')' {
            chars.next();
            toks.push(Tok::Close);
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                chars.next();
            }
            let value = s.parse().map_err(|_| FreeGroupError::Parse {
                position: toks.len(),
                token: s.clone(),
                message: "integer too large".into(),
            })?;
            toks.push(Tok::Int(value));
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_alphabetic() || d == '_') {
                    break;
                }
                s.push(d);
                chars.next();
            }
            toks.push(Tok::Ident(s.to_ascii_lowercase()));
        } else {
            return Err(FreeGroupError::Parse {
                position: toks.len(),
                token: c.to_string(),
                message: "unexpected character".into(),
            });
        }
    }
    Ok(toks)
}

fn describe(t: Option<&Tok>) -> String {
    match t {
        None => "<end>".into(),
        Some(Tok::Ident(s)) => s.clone(),
        Some(Tok::Int(i)) => i.to_string(),
        Some(Tok::Open) => "(".into(),
        Some(Tok::Close) => ")".into(),
    }
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> FreeGroupError {
        FreeGroupError::Parse { position: self.pos, token: describe(self.toks.get(self.pos)), message: message.into() }
    }

    fn int(&mut self) -> Result<usize, FreeGroupError> {
        match self.toks.get(self.pos) {
            Some(Tok::Int(i)) => {
                self.pos += 1;
                Ok(*i)
            }
            _ => Err(self.error("expected a generator index")),
        }
    }

    fn cycles(&mut self) -> Result<Vec<Vec<usize>>, FreeGroupError> {
        let mut cycles = Vec::new();
        while self.toks.get(self.pos) == Some(&Tok::Open) {
            self.pos += 1;
            let mut cycle = Vec::new();
            loop {
                match self.toks.get(self.pos) {
                    Some(Tok::Int(i)) => {
                        cycle.push(*i);
                        self.pos += 1;
                    }
                    Some(Tok::Close) => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected an index or ')' in cycle")),
                }
            }
            cycles.push(cycle);
        }
        if cycles.is_empty() {
            return Err(self.error("perm needs at least one cycle"));
        }
        Ok(cycles)
    }

    fn generator(&mut self, rank: usize) -> Result<Option<NamedGenerator>, FreeGroupError> {
        let start = self.pos;
        let name = match self.toks.get(self.pos) {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return Err(self.error("expected a generator name")),
        };
        self.pos += 1;
        let g = match name.as_str() {
            "rho" => {
                let i = self.int()?;
                let j = self.int()?;
                NamedGenerator::Rho(i, j)
            }
            "eps" => NamedGenerator::Eps(self.int()?),
            "perm" => {
                let cycles = self.cycles()?;
                let p = Permutation::from_cycles(rank, &cycles).map_err(|e| FreeGroupError::Parse {
                    position: start,
                    token: name.clone(),
                    message: e.to_string(),
                })?;
                NamedGenerator::Perm(p)
            }
            "theta" => NamedGenerator::Theta,
            "tau" => NamedGenerator::Tau,
            "eta" => NamedGenerator::Eta,
            "alpha" => NamedGenerator::Alpha,
            "id" => return Ok(None),
            _ => {
                self.pos = start;
                return Err(self.error("unknown generator"));
            }
        };
        Ok(Some(g))
    }
}

/// Parses a right-to-left product of named generators into its factors.
pub fn parse_generators(text: &str, rank: usize) -> Result<Vec<NamedGenerator>, FreeGroupError> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0 };
    let mut out = Vec::new();
    while p.pos < p.toks.len() {
        let start = p.pos;
        if let Some(g) = p.generator(rank)? {
            // Validate against the rank now so errors carry the token position.
            if let Ok(basis) = Basis::new(rank) {
                if let Err(e) = FreeAut::from_generator(&g, basis) {
                    return Err(FreeGroupError::Parse {
                        position: start,
                        token: describe(p.toks.get(start)),
                        message: e.to_string(),
                    });
                }
            }
            out.push(g);
        }
    }
    Ok(out)
}

/// Parses and evaluates a generator word over `basis`.
pub fn parse_generator_word(text: &str, basis: Basis) -> Result<FreeAut, FreeGroupError> {
    let gens = parse_generators(text, basis.rank())?;
    compose_named(basis, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::Word;

    fn b(n: usize) -> Basis {
        Basis::new(n).unwrap()
    }

    #[test]
    fn single_generators() {
        let rho = parse_generator_word("rho 1 2", b(3)).unwrap();
        assert_eq!(rho.image(1), &Word::from_signed(3, &[1, 2]).unwrap());
        let perm = parse_generator_word("perm (1 2)(3 4)", b(4)).unwrap();
        assert_eq!(perm.image(3), &Word::from_signed(4, &[4]).unwrap());
        let gens = parse_generators("theta tau eta alpha eps 3", 3).unwrap();
        assert_eq!(gens.len(), 5);
    }

    #[test]
    fn right_to_left() {
        let theta = FreeAut::from_generator(&NamedGenerator::Theta, b(3)).unwrap();
        assert_eq!(parse_generator_word("rho 1 2 eps 2", b(3)).unwrap(), theta);
        assert_eq!(parse_generator_word("rho 1 2 ∘ eps 2", b(3)).unwrap(), theta);
        let eps1 = FreeAut::from_generator(&NamedGenerator::Eps(1), b(3)).unwrap();
        assert_eq!(parse_generator_word("perm(2 3) ∘ tau", b(3)).unwrap(), eps1);
        assert!(parse_generator_word("id", b(3)).unwrap().is_identity());
        assert!(parse_generator_word("", b(3)).unwrap().is_identity());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_generator_word("theta rho 1", b(3)) {
            Err(FreeGroupError::Parse { position, .. }) => assert_eq!(position, 3),
            other => panic!("{other:?}"),
        }
        match parse_generator_word("tau frob", b(3)) {
            Err(FreeGroupError::Parse { position, token, .. }) => {
                assert_eq!(position, 1);
                assert_eq!(token, "frob");
            }
            other => panic!("{other:?}"),
        }
        match parse_generator_word("eps 1 eps 9", b(3)) {
            Err(FreeGroupError::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_generator_word("perm (1 2", b(3)).is_err());
        assert!(parse_generator_word("perm (1 2)(2 3)", b(3)).is_err());
        assert!(parse_generator_word("eta $", b(3)).is_err());
    }
}
