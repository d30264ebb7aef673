//! Text forms of divisor classes and configuration names.
//!
//! A class is either a JSON coordinate literal `{"coords":[...],"torsion":0}`
//! or a signed sum of terms `c*S` (the `*` is optional), where `S` is `E<i>`
//! (a generator of the active configuration), `f`, `g`, or `K` / `KS` / `K_S`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{
    class_f, class_g, embed_configuration, ConfigLabel, ConfigurationPresentation, DivisorClass, LatticeError,
    NumClass, RANK,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{symbol}` at position {pos}")]
    UnknownSymbol { symbol: String, pos: usize },
    #[error("expected {expected} coordinates, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("symbol `{symbol}` at position {pos} needs --config")]
    MissingConfig { symbol: String, pos: usize },
    #[error("bad configuration name `{0}`")]
    BadConfig(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassLiteral {
    coords: Vec<i64>,
    torsion: u8,
}

/// Compact JSON form; [`parse_class`] reads it back unchanged.
pub fn format_class(d: &DivisorClass) -> String {
    serde_json::to_string(&ClassLiteral { coords: d.coords().to_vec(), torsion: d.torsion() as u8 })
        .expect("class serializes")
}

pub fn class_to_json(d: &DivisorClass) -> serde_json::Value {
    serde_json::json!({ "coords": d.coords(), "torsion": d.torsion() as u8 })
}

/// A named configuration together with its embedded generators.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub name: String,
    pub presentation: ConfigurationPresentation,
    pub generators: Vec<DivisorClass>,
}

/// Accepts `i:N`, `ii:N`, `iii:N` (optionally prefixed `config-`), `two:P`
/// (two generators with `E1·E2 = P`), and `custom:<JSON Gram>`.
pub fn parse_config_name(text: &str) -> Result<ConfigurationPresentation, ParseError> {
    let bad = || ParseError::BadConfig(text.to_string());
    let (kind, arg) = text.trim().split_once(':').ok_or_else(bad)?;
    let kind = kind.strip_prefix("config-").unwrap_or(kind);
    if kind == "custom" {
        let gram: Vec<Vec<i64>> = serde_json::from_str(arg).map_err(|_| bad())?;
        return Ok(ConfigurationPresentation::custom(gram)?);
    }
    let v: i64 = arg.trim().parse().map_err(|_| bad())?;
    let n = usize::try_from(v).map_err(|_| bad())?;
    Ok(match kind {
        "i" => ConfigurationPresentation::config_i(n)?,
        "ii" => ConfigurationPresentation::config_ii(n)?,
        "iii" => ConfigurationPresentation::config_iii(n)?,
        "two" => match v {
            1 => ConfigurationPresentation::config_i(2)?,
            2 => ConfigurationPresentation::config_ii(2)?,
            p => ConfigurationPresentation::custom(vec![vec![0, p], vec![p, 0]])?,
        },
        _ => return Err(bad()),
    })
}

/// Canonical echo of a configuration, e.g. `config-ii:2`.
pub fn config_display(p: &ConfigurationPresentation) -> String {
    match p.label() {
        ConfigLabel::Custom => {
            format!("custom:{}", serde_json::to_string(p.gram()).expect("gram serializes"))
        }
        label => format!("{}:{}", label.as_str(), p.n()),
    }
}

pub fn resolve_config(text: &str) -> Result<ResolvedConfig, ParseError> {
    let presentation = parse_config_name(text)?;
    let generators = embed_configuration(&presentation)?
        .into_iter()
        .map(|x| DivisorClass::new(x, false))
        .collect::<Result<_, _>>()?;
    Ok(ResolvedConfig { name: config_display(&presentation), presentation, generators })
}

pub fn parse_class(text: &str, config: Option<&ResolvedConfig>) -> Result<DivisorClass, ParseError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return parse_json_literal(text);
    }
    Parser { src: text.as_bytes(), pos: 0, config }.expr()
}

fn parse_json_literal(text: &str) -> Result<DivisorClass, ParseError> {
    let lit: ClassLiteral = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        pos: offset_of(text, e.line(), e.column()),
        msg: e.to_string(),
    })?;
    if lit.coords.len() != RANK {
        return Err(ParseError::RankMismatch { expected: RANK, got: lit.coords.len() });
    }
    if lit.torsion > 1 {
        return Err(ParseError::Syntax { pos: 0, msg: "torsion must be 0 or 1".into() });
    }
    Ok(DivisorClass::new(NumClass::new(lit.coords), lit.torsion == 1)?)
}

fn offset_of(text: &str, line: usize, column: usize) -> usize {
    let before: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    before + column.saturating_sub(1)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    config: Option<&'a ResolvedConfig>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn expr(&mut self) -> Result<DivisorClass, ParseError> {
        let mut acc = DivisorClass::zero();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if first => return Err(self.syntax("empty expression")),
                None => return Ok(acc),
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                Some(_) if first => 1,
                Some(_) => return Err(self.syntax("expected `+` or `-`")),
            };
            first = false;
            let term = self.term()?;
            acc = &acc + &(sign * &term);
        }
    }

    fn term(&mut self) -> Result<DivisorClass, ParseError> {
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let v: i64 = digits
                    .parse()
                    .map_err(|_| ParseError::Syntax { pos: start, msg: "coefficient too large".into() })?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                }
                v
            }
            _ => 1,
        };
        let sym = self.symbol()?;
        Ok(coeff * &sym)
    }

    fn symbol(&mut self) -> Result<DivisorClass, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected a symbol"));
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match name {
            "K" | "KS" | "K_S" => return Ok(DivisorClass::canonical_class()),
            "f" => return Ok(class_f()),
            "g" => return Ok(class_g()),
            _ => {}
        }
        let unknown = || ParseError::UnknownSymbol { symbol: name.to_string(), pos: start };
        let index: usize = name
            .strip_prefix('E')
            .and_then(|s| s.parse().ok())
            .ok_or_else(unknown)?;
        let config = self
            .config
            .ok_or_else(|| ParseError::MissingConfig { symbol: name.to_string(), pos: start })?;
        if index == 0 || index > config.generators.len() {
            return Err(unknown());
        }
        Ok(config.generators[index - 1].clone())
    }
}
