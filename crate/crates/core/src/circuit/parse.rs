//! Line-oriented netlist reader.
//!
//! ```text
//! spins 2
//! input in R+L
//! PBS in 1 2
//! CAV 0 2 @after-cavity     # optional checkpoint name
//! detector D+ 9 +
//! feedforward D+ 0 I
//! ```

use super::netlist::{sign_from_token, FeedForward, FeedForwardOp, InputPolarization, Netlist, Step};
use crate::elements::Element;
use crate::error::NetlistError;
use crate::state::{Detector, ModeLabel, PmBasis};

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn error(&self, column: usize, message: impl Into<String>) -> NetlistError {
        NetlistError::Syntax { line: self.number, column, message: message.into() }
    }

    fn end_column(&self) -> usize {
        self.tokens.last().map(|t| t.column + t.text.chars().count()).unwrap_or(1)
    }

    fn arity(&self, want: usize, usage: &str) -> Result<(), NetlistError> {
        let got = self.tokens.len() - 1;
        if got < want {
            return Err(self.error(self.end_column(), format!("missing argument; usage: {}", usage)));
        }
        if got > want {
            let extra = self.tokens[want + 1];
            return Err(self.error(extra.column, format!("unexpected token {:?}; usage: {}", extra.text, usage)));
        }
        Ok(())
    }

    fn mode(&self, i: usize) -> Result<ModeLabel, NetlistError> {
        let t = self.tokens[i];
        ModeLabel::new(t.text).map_err(|_| self.error(t.column, format!("invalid mode label {:?}", t.text)))
    }

    fn index(&self, i: usize) -> Result<usize, NetlistError> {
        let t = self.tokens[i];
        t.text.parse().map_err(|_| self.error(t.column, format!("expected a spin index, found {:?}", t.text)))
    }
}

fn tokenize(number: usize, raw: &str) -> Line<'_> {
    let body = match raw.find('#') {
        Some(i) => &raw[..i],
        None => raw,
    };
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    let mut col = 0;
    let mut start_col = 0;
    for (byte, ch) in body.char_indices() {
        col += 1;
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token { text: &body[s..byte], column: start_col });
            }
        } else if start.is_none() {
            start = Some(byte);
            start_col = col;
        }
    }
    if let Some(s) = start {
        tokens.push(Token { text: &body[s..], column: start_col });
    }
    Line { number, tokens }
}

fn parse_element(line: &Line<'_>) -> Result<Option<Element>, NetlistError> {
    let kw = line.tokens[0].text;
    let e = match kw {
        "PBS" => {
            line.arity(3, "PBS <in> <transmit_to> <reflect_to>")?;
            Element::Pbs { input: line.mode(1)?, transmit: line.mode(2)?, reflect: line.mode(3)? }
        }
        "PMPBS" => {
            line.arity(3, "PMPBS <in> <plus_to> <minus_to>")?;
            Element::PmPbs { input: line.mode(1)?, plus: line.mode(2)?, minus: line.mode(3)? }
        }
        "HWP" => {
            line.arity(1, "HWP <mode>")?;
            Element::Hwp { mode: line.mode(1)? }
        }
        "WPM" => {
            line.arity(1, "WPM <mode>")?;
            Element::WpMirror { mode: line.mode(1)? }
        }
        "BS" => {
            line.arity(4, "BS <in_a> <in_b> <out_a> <out_b>")?;
            Element::Bs { in_a: line.mode(1)?, in_b: line.mode(2)?, out_a: line.mode(3)?, out_b: line.mode(4)? }
        }
        "SH" => {
            line.arity(1, "SH <spin_index>")?;
            Element::SpinH { spin: line.index(1)? }
        }
        "SZ" => {
            line.arity(2, "SZ <spin_index> <+|->")?;
            let t = line.tokens[2];
            let sign = sign_from_token(t.text).ok_or_else(|| line.error(t.column, "expected + or -"))?;
            Element::SpinZ { spin: line.index(1)?, sign }
        }
        "CAV" => {
            line.arity(2, "CAV <spin_index> <mode>")?;
            Element::Cavity { spin: line.index(1)?, mode: line.mode(2)? }
        }
        "SW" => {
            line.arity(2, "SW <from> <to>")?;
            Element::Switch { from: line.mode(1)?, to: line.mode(2)? }
        }
        _ => return Ok(None),
    };
    Ok(Some(e))
}

/// Parse and validate netlist text.
pub fn parse_netlist(text: &str) -> Result<Netlist, NetlistError> {
    let mut spin_count: Option<usize> = None;
    let mut input: Option<(ModeLabel, InputPolarization)> = None;
    let mut steps: Vec<Step> = Vec::new();
    let mut detectors: Vec<Detector> = Vec::new();
    let mut feedforward: Vec<FeedForward> = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        last_line = i + 1;
        let mut line = tokenize(i + 1, raw);
        if line.tokens.is_empty() {
            continue;
        }
        let head = line.tokens[0];
        match head.text {
            "spins" => {
                line.arity(1, "spins <n>")?;
                if spin_count.is_some() {
                    return Err(line.error(head.column, "spins declared twice"));
                }
                let n = line.index(1)?;
                if n == 0 {
                    return Err(line.error(line.tokens[1].column, "need at least one spin"));
                }
                spin_count = Some(n);
            }
            "input" => {
                line.arity(2, "input <mode> <R|L|R+L|R-L>")?;
                if input.is_some() {
                    return Err(line.error(head.column, "input declared twice"));
                }
                let t = line.tokens[2];
                let pol = InputPolarization::from_token(t.text)
                    .ok_or_else(|| line.error(t.column, format!("unknown polarization {:?}", t.text)))?;
                input = Some((line.mode(1)?, pol));
            }
            "detector" => {
                line.arity(3, "detector <label> <mode> <+|->")?;
                let t = line.tokens[3];
                let basis = match t.text {
                    "+" => PmBasis::Plus,
                    "-" => PmBasis::Minus,
                    _ => return Err(line.error(t.column, "expected + or -")),
                };
                detectors.push(Detector { label: line.tokens[1].text.to_string(), mode: line.mode(2)?, basis });
            }
            "feedforward" => {
                if line.tokens.len() < 2 {
                    return Err(line.error(line.end_column(), "missing outcome label"));
                }
                let args = &line.tokens[2..];
                if !args.len().is_multiple_of(2) {
                    return Err(line.error(line.end_column(), "feedforward ops come in <spin_index> <I|Z|-Z> pairs"));
                }
                let mut ops = Vec::new();
                for (j, pair) in args.chunks(2).enumerate() {
                    let k = line.index(2 + 2 * j)?;
                    let op = FeedForwardOp::from_token(pair[1].text)
                        .ok_or_else(|| line.error(pair[1].column, format!("unknown op {:?}", pair[1].text)))?;
                    ops.push((k, op));
                }
                feedforward.push(FeedForward { label: line.tokens[1].text.to_string(), ops });
            }
            _ => {
                let mut checkpoint = None;
                if let Some(last) = line.tokens.last().copied() {
                    if let Some(name) = last.text.strip_prefix('@') {
                        if name.is_empty() {
                            return Err(line.error(last.column, "empty checkpoint name"));
                        }
                        if steps.iter().any(|s| s.checkpoint.as_deref() == Some(name)) {
                            return Err(line.error(last.column, format!("checkpoint @{} declared twice", name)));
                        }
                        checkpoint = Some(name.to_string());
                        line.tokens.pop();
                    }
                }
                match parse_element(&line)? {
                    Some(element) => steps.push(Step { element, checkpoint }),
                    None => {
                        return Err(NetlistError::UnknownKeyword {
                            line: line.number,
                            column: head.column,
                            keyword: head.text.to_string(),
                        })
                    }
                }
            }
        }
    }

    let end = last_line.max(1);
    let spin_count = spin_count.ok_or(NetlistError::Syntax { line: end, column: 1, message: "missing `spins` line".into() })?;
    let (input_mode, input_pol) =
        input.ok_or(NetlistError::Syntax { line: end, column: 1, message: "missing `input` line".into() })?;
    let netlist = Netlist { spin_count, input_mode, input_pol, steps, detectors, feedforward };
    netlist.validate()?;
    Ok(netlist)
}
