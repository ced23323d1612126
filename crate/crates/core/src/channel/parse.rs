//! Channel and state file formats.
//!
//! A channel file is JSON:
//!
//! ```json
//! {"name": "bit flip", "dim": 2,
//!  "params": {"p": 0.1},
//!  "kraus": [ [[["sqrt(1-p)",0],[0,0]], [[0,0],["sqrt(1-p)",0]]],
//!             [[[0,0],["sqrt(p)",0]], [["sqrt(p)",0],[0,0]]] ]}
//! ```
//!
//! Every complex entry is a two-element `[re, im]` array. Each component is a
//! JSON number or an expression string over decimal literals, parameters,
//! `sqrt(...)`, `+ - * /` and parentheses. Parameters default to the file's
//! `params` table and can be overridden by the caller. An optional `claimed`
//! object records externally reported values for comparison in reports.
//!
//! A states file is a JSON list whose items are either vectors (`[[re, im], …]`)
//! or density matrices (`[[[re, im], …], …]`), using the same scalar encoding.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ChannelError, KrausChannel, ParseError, QuantumState};
use crate::numerics::ComplexMatrix;

/// Parameter bindings for expression entries.
pub type Params = BTreeMap<String, f64>;

/// One real component of a complex entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Expr(String),
}

/// Values reported for a channel by an outside source, kept for comparison.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Claims {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub common_eigenstates: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity_bound_bits: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive_capacity: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

type RawMatrix = Vec<Vec<[Scalar; 2]>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub name: String,
    pub dim: usize,
    pub kraus: Vec<RawMatrix>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed: Option<Claims>,
}

/// A parsed channel together with its file metadata.
#[derive(Debug, Clone)]
pub struct LoadedChannel {
    pub channel: KrausChannel,
    /// Effective parameter values (file defaults merged with overrides).
    pub params: Params,
    pub claimed: Option<Claims>,
}

/// Parses channel-file text into an unvalidated channel.
pub fn parse_channel(text: &str, overrides: &Params) -> Result<KrausChannel, ParseError> {
    Ok(load_channel(text, overrides)?.channel)
}

pub fn load_channel(text: &str, overrides: &Params) -> Result<LoadedChannel, ParseError> {
    let file: ChannelFile = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    let mut params = file.params.clone();
    params.extend(overrides.iter().map(|(k, v)| (k.clone(), *v)));

    let d = file.dim;
    if d == 0 {
        return Err(ParseError::Dimension("dim must be at least 1".into()));
    }
    if file.kraus.is_empty() {
        return Err(ParseError::EmptyKraus);
    }
    if file.kraus.len() > d * d {
        return Err(ParseError::TooManyKraus {
            kappa: file.kraus.len(),
            dim: d,
        });
    }
    let mut ops = Vec::with_capacity(file.kraus.len());
    for (idx, raw) in file.kraus.iter().enumerate() {
        if raw.len() != d || raw.iter().any(|r| r.len() != d) {
            let shape = raw.iter().map(Vec::len).collect::<Vec<_>>();
            return Err(ParseError::Ragged {
                op: idx,
                detail: format!("expected {d}x{d}, row lengths {shape:?}"),
            });
        }
        ops.push(materialize(raw, &params)?);
    }
    let channel = KrausChannel::new(file.name, ops).map_err(|e| match e {
        ChannelError::Numerics(n) => ParseError::Dimension(n.to_string()),
        other => ParseError::Dimension(other.to_string()),
    })?;
    Ok(LoadedChannel {
        channel,
        params,
        claimed: file.claimed,
    })
}

/// Serializes a channel back to the file format with numeric entries.
pub fn channel_to_json(ch: &KrausChannel) -> String {
    let file = ChannelFile {
        name: ch.name().to_string(),
        dim: ch.dim(),
        kraus: ch
            .kraus()
            .iter()
            .map(|a| {
                (0..a.rows())
                    .map(|i| a.row(i).iter().map(|z| [Scalar::Number(z.re), Scalar::Number(z.im)]).collect())
                    .collect()
            })
            .collect(),
        params: Params::new(),
        claimed: None,
    };
    serde_json::to_string_pretty(&file).expect("channel file serialization is infallible")
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawState {
    Pure(Vec<[Scalar; 2]>),
    Mixed(RawMatrix),
}

/// Parses a states file. Pure vectors are normalized on the way in; density
/// matrices must already be valid states.
pub fn parse_states(text: &str, params: &Params) -> Result<Vec<QuantumState>, ParseError> {
    let raw: Vec<RawState> = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    raw.iter()
        .enumerate()
        .map(|(idx, item)| {
            let state = match item {
                RawState::Pure(v) => {
                    let v = v.iter().map(|z| complex(z, params)).collect::<Result<Vec<_>, _>>()?;
                    QuantumState::pure_normalized(&v)
                }
                RawState::Mixed(m) => {
                    if m.iter().any(|r| r.len() != m.len()) {
                        return Err(ParseError::Ragged {
                            op: idx,
                            detail: "density matrix is not square".into(),
                        });
                    }
                    QuantumState::mixed(materialize(m, params)?)
                }
            };
            state.map_err(|e| ParseError::State {
                index: idx,
                message: e.to_string(),
            })
        })
        .collect()
}

fn materialize(raw: &RawMatrix, params: &Params) -> Result<ComplexMatrix, ParseError> {
    let rows = raw
        .iter()
        .map(|r| r.iter().map(|z| complex(z, params)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    ComplexMatrix::from_rows(&rows).map_err(|e| ParseError::Dimension(e.to_string()))
}

fn complex(z: &[Scalar; 2], params: &Params) -> Result<Complex64, ParseError> {
    Ok(Complex64::new(scalar(&z[0], params)?, scalar(&z[1], params)?))
}

fn scalar(s: &Scalar, params: &Params) -> Result<f64, ParseError> {
    let x = match s {
        Scalar::Number(x) => *x,
        Scalar::Expr(text) => evaluate(text, params)?,
    };
    if !x.is_finite() {
        return Err(ParseError::Expression {
            text: format!("{s:?}"),
            message: "value is not finite".into(),
        });
    }
    Ok(x)
}

/// Evaluates an entry expression such as `-sqrt(3)/2*sqrt(1-p)`.
pub fn evaluate(text: &str, params: &Params) -> Result<f64, ParseError> {
    let mut p = ExprParser {
        src: text.as_bytes(),
        pos: 0,
        params,
    };
    let fail = |message: String| ParseError::Expression {
        text: text.to_string(),
        message,
    };
    let v = p.expr().map_err(fail)?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(fail(format!("unexpected input at offset {}", p.pos)));
    }
    Ok(v)
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
    params: &'a Params,
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), String> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(format!("expected '{}' at offset {}", c as char, self.pos))
        }
    }

    fn expr(&mut self) -> Result<f64, String> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<f64, String> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == b'*' { acc * rhs } else { acc / rhs };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<f64, String> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<f64, String> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                if ident == "sqrt" {
                    self.expect(b'(')?;
                    let v = self.expr()?;
                    self.expect(b')')?;
                    if v < 0.0 {
                        return Err(format!("sqrt of negative value {v}"));
                    }
                    Ok(v.sqrt())
                } else {
                    self.params
                        .get(ident)
                        .copied()
                        .ok_or_else(|| format!("unknown parameter '{ident}'"))
                }
            }
            Some(c) => Err(format!("unexpected '{}' at offset {}", c as char, self.pos)),
            None => Err("unexpected end of expression".into()),
        }
    }

    fn number(&mut self) -> Result<f64, String> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        let lit = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii literal");
        lit.parse::<f64>().map_err(|_| format!("bad number literal '{lit}'"))
    }
}
