//! Line-oriented text format for configurations: one fact per line,
//! e.g. `isA(1,elementA).` or `rack_frame(3,4).`. Lines starting with `%`
//! are comments.

use std::fmt::Write as _;

use thiserror::Error;

use super::class::ClassName;
use super::fact::{Fact, ObjectId};
use super::state::{ConfigurationState, ModelError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A parsed `name(arg,...)` term, nested arguments kept as terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub name: String,
    pub args: Vec<Term>,
}

impl Term {
    pub fn atom(name: &str) -> Term {
        Term { name: name.to_string(), args: vec![] }
    }

    pub fn as_id(&self) -> Option<ObjectId> {
        if !self.args.is_empty() {
            return None;
        }
        self.name.parse().ok().filter(|&n: &u32| n > 0).map(ObjectId)
    }

    pub fn as_class(&self) -> Option<ClassName> {
        if self.args.is_empty() {
            self.name.parse().ok()
        } else {
            None
        }
    }
}

impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name)?;
        if !self.args.is_empty() {
            f.write_char('(')?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_char(',')?;
                }
                write!(f, "{a}")?;
            }
            f.write_char(')')?;
        }
        Ok(())
    }
}

/// Parses a single term like `action(3,create_rack(rackSingle))`.
pub fn parse_term(input: &str) -> Result<Term, String> {
    let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let term = parse_term_at(&chars, &mut pos)?;
    if pos != chars.len() {
        return Err(format!("trailing input after term at column {pos}"));
    }
    Ok(term)
}

fn parse_term_at(chars: &[char], pos: &mut usize) -> Result<Term, String> {
    let start = *pos;
    while *pos < chars.len() && (chars[*pos].is_alphanumeric() || chars[*pos] == '_') {
        *pos += 1;
    }
    if start == *pos {
        return Err(format!("expected a name at column {start}"));
    }
    let name: String = chars[start..*pos].iter().collect();
    let mut args = Vec::new();
    if chars.get(*pos) == Some(&'(') {
        *pos += 1;
        loop {
            args.push(parse_term_at(chars, pos)?);
            match chars.get(*pos) {
                Some(',') => *pos += 1,
                Some(')') => {
                    *pos += 1;
                    break;
                }
                _ => return Err(format!("expected ',' or ')' at column {}", *pos)),
            }
        }
    }
    Ok(Term { name, args })
}

/// Splits a document into `(line number, statement)` pairs, dropping
/// comments, blank lines and terminating periods. A line may hold several
/// statements.
pub(crate) fn statements(text: &str) -> impl Iterator<Item = (usize, Result<Term, String>)> + '_ {
    text.lines().enumerate().flat_map(|(i, raw)| {
        let line = raw.split('%').next().unwrap_or("").trim();
        let mut parts: Vec<&str> = line.split('.').map(str::trim).collect();
        let unterminated = parts.pop().filter(|rest| !rest.is_empty());
        let mut out: Vec<(usize, Result<Term, String>)> = parts
            .into_iter()
            .map(|body| {
                if body.is_empty() {
                    (i + 1, Err("empty statement".to_string()))
                } else {
                    (i + 1, parse_term(body))
                }
            })
            .collect();
        if unterminated.is_some() {
            out.push((i + 1, Err("missing terminating '.'".to_string())));
        }
        out
    })
}

pub fn fact_from_term(term: &Term) -> Result<Fact, String> {
    let ids = || -> Result<(ObjectId, ObjectId), String> {
        match term.args.as_slice() {
            [a, b] => Ok((
                a.as_id().ok_or_else(|| format!("bad object id '{a}'"))?,
                b.as_id().ok_or_else(|| format!("bad object id '{b}'"))?,
            )),
            _ => Err(format!("{} expects two ids", term.name)),
        }
    };
    match term.name.as_str() {
        "isA" => match term.args.as_slice() {
            [id, class] => Ok(Fact::IsA(
                id.as_id().ok_or_else(|| format!("bad object id '{id}'"))?,
                class.as_class().ok_or_else(|| format!("unknown class '{class}'"))?,
            )),
            _ => Err("isA expects an id and a class".into()),
        },
        "rack_frame" => ids().map(|(a, b)| Fact::RackFrame(a, b)),
        "frame_module" => ids().map(|(a, b)| Fact::FrameModule(a, b)),
        "element_module" => ids().map(|(a, b)| Fact::ElementModule(a, b)),
        other => Err(format!("unknown fact '{other}'")),
    }
}

pub fn parse_facts(text: &str) -> Result<Vec<Fact>, FormatError> {
    statements(text)
        .map(|(line, term)| {
            term.and_then(|t| fact_from_term(&t))
                .map_err(|message| FormatError::Syntax { line, message })
        })
        .collect()
}

pub fn parse_configuration(text: &str) -> Result<ConfigurationState, FormatError> {
    let facts = parse_facts(text)?;
    Ok(ConfigurationState::from_facts(&facts)?)
}

/// Canonical text: one fact per line in (kind, id1, id2) order.
pub fn print_configuration(state: &ConfigurationState) -> String {
    print_facts(&state.facts())
}

pub fn print_facts(facts: &[Fact]) -> String {
    let mut out = String::new();
    for fact in facts {
        let _ = writeln!(out, "{fact}");
    }
    out
}
