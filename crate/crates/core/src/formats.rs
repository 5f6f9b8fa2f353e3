//! Circuit text formats: an OpenQASM 2.0 subset and a small JSON schema.
//!
//! The QASM reader accepts one `qreg`, any number of `creg`s (ignored),
//! `include` lines, the supported gate set, `measure q[i] -> c[j];` and
//! `barrier`. `bridge a,b,c;` is accepted as an extension so routed
//! circuits round-trip.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateKind, GateOp};
use crate::error::CircuitError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitFormat {
    Qasm,
    Json,
}

impl FromStr for CircuitFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "qasm" | "qasm2" | "qasm2-subset" => Ok(CircuitFormat::Qasm),
            "json" => Ok(CircuitFormat::Json),
            other => Err(format!("unknown circuit format `{other}`")),
        }
    }
}

pub fn parse_circuit(source: &str, format: CircuitFormat) -> Result<Circuit, CircuitError> {
    match format {
        CircuitFormat::Qasm => parse_qasm(source),
        CircuitFormat::Json => {
            let doc: CircuitJson =
                serde_json::from_str(source).map_err(|e| CircuitError::Json(e.to_string()))?;
            doc.into_circuit()
        }
    }
}

pub fn serialize_circuit(circuit: &Circuit, format: CircuitFormat) -> String {
    match format {
        CircuitFormat::Qasm => to_qasm(circuit),
        CircuitFormat::Json => serde_json::to_string(&CircuitJson::from(circuit)).expect("circuit json"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateJson {
    pub kind: String,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitJson {
    pub n: usize,
    pub gates: Vec<GateJson>,
}

impl CircuitJson {
    pub fn into_circuit(self) -> Result<Circuit, CircuitError> {
        let mut gates = Vec::with_capacity(self.gates.len());
        for (i, g) in self.gates.into_iter().enumerate() {
            let name = g.kind.to_ascii_lowercase();
            let kind = match (name.as_str(), g.theta) {
                ("rz", None) => {
                    return Err(CircuitError::Json(format!("gate {i}: rz requires theta")))
                }
                (n, t) => GateKind::from_name(n, t).ok_or(CircuitError::UnsupportedGate {
                    name: g.kind.clone(),
                    line: i + 1,
                })?,
            };
            gates.push(GateOp::new(kind, g.qubits));
        }
        Circuit::new(self.n, gates)
    }
}

impl From<&Circuit> for CircuitJson {
    fn from(c: &Circuit) -> Self {
        CircuitJson {
            n: c.num_qubits(),
            gates: c
                .gates()
                .iter()
                .map(|g| GateJson {
                    kind: g.kind.name().to_string(),
                    qubits: g.qubits.clone(),
                    theta: match g.kind {
                        GateKind::Rz(t) => Some(t),
                        _ => None,
                    },
                })
                .collect(),
        }
    }
}

fn to_qasm(c: &Circuit) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let n = c.num_qubits();
    let _ = writeln!(out, "qreg q[{n}];");
    let _ = writeln!(out, "creg c[{n}];");
    for g in c.gates() {
        let args: Vec<String> = g.qubits.iter().map(|q| format!("q[{q}]")).collect();
        match g.kind {
            GateKind::Measure => {
                let q = g.qubits[0];
                let _ = writeln!(out, "measure q[{q}] -> c[{q}];");
            }
            // `{:?}` on f64 is the shortest exact round-trip representation.
            GateKind::Rz(theta) => {
                let _ = writeln!(out, "rz({theta:?}) {};", args.join(","));
            }
            kind => {
                let _ = writeln!(out, "{} {};", kind.name(), args.join(","));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Str,
    Sym(char),
    Arrow,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, CircuitError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let syntax = |line, col, msg: String| CircuitError::Syntax { line, col, msg };
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
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: tl,
                col: tc,
            });
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                i += 1;
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let v = text
                .parse::<f64>()
                .map_err(|_| syntax(tl, tc, format!("bad number `{text}`")))?;
            out.push(Token {
                tok: Tok::Num(v),
                line: tl,
                col: tc,
            });
            continue;
        }
        if c == '"' {
            i += 1;
            col += 1;
            while i < chars.len() && chars[i] != '"' {
                if chars[i] == '\n' {
                    return Err(syntax(tl, tc, "unterminated string".into()));
                }
                i += 1;
                col += 1;
            }
            if i >= chars.len() {
                return Err(syntax(tl, tc, "unterminated string".into()));
            }
            i += 1;
            col += 1;
            out.push(Token {
                tok: Tok::Str,
                line: tl,
                col: tc,
            });
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            i += 2;
            col += 2;
            out.push(Token {
                tok: Tok::Arrow,
                line: tl,
                col: tc,
            });
            continue;
        }
        if ";,[]()+-*/".contains(c) {
            i += 1;
            col += 1;
            out.push(Token {
                tok: Tok::Sym(c),
                line: tl,
                col: tc,
            });
            continue;
        }
        return Err(syntax(tl, tc, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    eof: (usize, usize),
    qreg: Option<(String, usize)>,
    cregs: Vec<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|t| (t.line, t.col)).unwrap_or(self.eof)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, CircuitError> {
        let (line, col) = self.here();
        Err(CircuitError::Syntax {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn expect_sym(&mut self, c: char) -> Result<(), CircuitError> {
        match self.peek() {
            Some(Tok::Sym(s)) if *s == c => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected `{c}`")),
        }
    }

    fn ident(&mut self) -> Result<String, CircuitError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn integer(&mut self) -> Result<usize, CircuitError> {
        match self.peek() {
            Some(Tok::Num(v)) if v.fract() == 0.0 && *v >= 0.0 => {
                let v = *v as usize;
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected non-negative integer"),
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<f64, CircuitError> {
        let mut v = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Sym('+')) => {
                    self.pos += 1;
                    v += self.term()?;
                }
                Some(Tok::Sym('-')) => {
                    self.pos += 1;
                    v -= self.term()?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn term(&mut self) -> Result<f64, CircuitError> {
        let mut v = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Sym('*')) => {
                    self.pos += 1;
                    v *= self.factor()?;
                }
                Some(Tok::Sym('/')) => {
                    self.pos += 1;
                    v /= self.factor()?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn factor(&mut self) -> Result<f64, CircuitError> {
        match self.peek().cloned() {
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(Tok::Sym('+')) => {
                self.pos += 1;
                self.factor()
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(v)
            }
            Some(Tok::Ident(name)) if name == "pi" => {
                self.pos += 1;
                Ok(std::f64::consts::PI)
            }
            _ => self.err("expected expression"),
        }
    }

    /// `q[i]` or a bare register name (expanded to all qubits).
    fn qubit_arg(&mut self) -> Result<Vec<usize>, CircuitError> {
        let name = self.ident()?;
        let (reg, size) = match &self.qreg {
            Some(r) => r.clone(),
            None => return self.err("qubit used before qreg declaration"),
        };
        if name != reg {
            return self.err(format!("unknown quantum register `{name}`"));
        }
        if let Some(Tok::Sym('[')) = self.peek() {
            self.pos += 1;
            let idx = self.integer()?;
            self.expect_sym(']')?;
            if idx >= size {
                return Err(CircuitError::QubitOutOfRange { qubit: idx, n: size });
            }
            Ok(vec![idx])
        } else {
            Ok((0..size).collect())
        }
    }

    fn creg_arg(&mut self) -> Result<(), CircuitError> {
        let name = self.ident()?;
        if !self.cregs.contains(&name) {
            return self.err(format!("unknown classical register `{name}`"));
        }
        if let Some(Tok::Sym('[')) = self.peek() {
            self.pos += 1;
            self.integer()?;
            self.expect_sym(']')?;
        }
        Ok(())
    }

    fn arg_list(&mut self) -> Result<Vec<Vec<usize>>, CircuitError> {
        let mut args = vec![self.qubit_arg()?];
        while let Some(Tok::Sym(',')) = self.peek() {
            self.pos += 1;
            args.push(self.qubit_arg()?);
        }
        Ok(args)
    }
}

fn parse_qasm(src: &str) -> Result<Circuit, CircuitError> {
    let toks = lex(src)?;
    let lines = src.lines().count().max(1);
    let mut p = Parser {
        toks,
        pos: 0,
        eof: (lines, 1),
        qreg: None,
        cregs: Vec::new(),
    };
    let mut gates: Vec<GateOp> = Vec::new();
    while p.peek().is_some() {
        let line = p.here().0;
        let word = p.ident()?;
        match word.as_str() {
            "OPENQASM" => {
                match p.next() {
                    Some(Tok::Num(_)) => {}
                    _ => return p.err("expected version number"),
                }
            }
            "include" => match p.next() {
                Some(Tok::Str) => {}
                _ => return p.err("expected include path"),
            },
            "qreg" => {
                if p.qreg.is_some() {
                    return p.err("only one qreg is supported");
                }
                let name = p.ident()?;
                p.expect_sym('[')?;
                let size = p.integer()?;
                p.expect_sym(']')?;
                p.qreg = Some((name, size));
            }
            "creg" => {
                let name = p.ident()?;
                p.expect_sym('[')?;
                p.integer()?;
                p.expect_sym(']')?;
                p.cregs.push(name);
            }
            "measure" => {
                let qs = p.qubit_arg()?;
                match p.next() {
                    Some(Tok::Arrow) => {}
                    _ => {
                        p.pos -= 1;
                        return p.err("expected `->`");
                    }
                }
                p.creg_arg()?;
                gates.extend(qs.into_iter().map(GateOp::measure));
            }
            "barrier" => {
                let qs: Vec<usize> = p.arg_list()?.into_iter().flatten().collect();
                let mut uniq = Vec::new();
                for q in qs {
                    if !uniq.contains(&q) {
                        uniq.push(q);
                    }
                }
                gates.push(GateOp::barrier(uniq));
            }
            name => {
                let theta = if let Some(Tok::Sym('(')) = p.peek() {
                    p.pos += 1;
                    let v = p.expr()?;
                    p.expect_sym(')')?;
                    Some(v)
                } else {
                    None
                };
                let kind = match (name, theta) {
                    ("rz", None) => return p.err("rz requires an angle"),
                    ("rz", t) => GateKind::from_name("rz", t),
                    (n, None) => GateKind::from_name(n, None)
                        .filter(|k| !matches!(k, GateKind::Measure | GateKind::Barrier)),
                    _ => None,
                }
                .ok_or(CircuitError::UnsupportedGate {
                    name: name.to_string(),
                    line,
                })?;
                let args = p.arg_list()?;
                let expected = kind.arity().unwrap_or(1);
                if args.len() != expected {
                    return Err(CircuitError::Arity {
                        kind: kind.name(),
                        expected,
                        got: args.len(),
                    });
                }
                // Register-wide arguments broadcast like in QASM for 1q gates.
                if expected == 1 {
                    gates.extend(args[0].iter().map(|&q| GateOp::new(kind, vec![q])));
                } else {
                    let mut qubits = Vec::with_capacity(expected);
                    for a in args {
                        if a.len() != 1 {
                            return Err(CircuitError::Syntax {
                                line,
                                col: 1,
                                msg: "register broadcast is only supported for one-qubit gates".into(),
                            });
                        }
                        qubits.push(a[0]);
                    }
                    gates.push(GateOp::new(kind, qubits));
                }
            }
        }
        p.expect_sym(';')?;
    }
    let n = match p.qreg {
        Some((_, n)) => n,
        None => return p.err("missing qreg declaration"),
    };
    Circuit::new(n, gates)
}
