use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// One elementary step of a traced evaluation.
///
/// Steps are identified only by what two runs must agree on: an evaluation
/// of `e_i` on a literal of its own variable is `Decide(i, value)` whatever
/// the polarities involved, and an evaluation on a foreign variable is
/// `Probe(i, j)` whatever the polarities involved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceStep {
    Decide { var: u32, value: bool },
    Probe { assign: u32, var: u32 },
    SetC,
    IncC,
    CheckC,
    ReturnTrue,
    ReturnFalse,
}

impl TraceStep {
    pub fn is_terminal(self) -> bool {
        matches!(self, TraceStep::ReturnTrue | TraceStep::ReturnFalse)
    }
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TraceStep::Decide { var, value } => {
                write!(f, "DECIDE {var} {}", if value { 'T' } else { 'F' })
            }
            TraceStep::Probe { assign, var } => write!(f, "PROBE {assign} {var}"),
            TraceStep::SetC => f.write_str("SETC"),
            TraceStep::IncC => f.write_str("INCC"),
            TraceStep::CheckC => f.write_str("CHECKC"),
            TraceStep::ReturnTrue => f.write_str("RET T"),
            TraceStep::ReturnFalse => f.write_str("RET F"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceParseError {
    #[error("line {line}: unrecognized step `{text}`")]
    BadStep { line: usize, text: String },
    #[error("line {line}: step after the terminal step")]
    AfterTerminal { line: usize },
}

impl FromStr for TraceStep {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fields: Vec<&str> = s.split_whitespace().collect();
        let num = |t: &str| t.parse::<u32>().map_err(|_| ());
        let flag = |t: &str| match t {
            "T" => Ok(true),
            "F" => Ok(false),
            _ => Err(()),
        };
        match fields.as_slice() {
            ["DECIDE", v, b] => Ok(TraceStep::Decide { var: num(v)?, value: flag(b)? }),
            ["PROBE", i, j] => Ok(TraceStep::Probe { assign: num(i)?, var: num(j)? }),
            ["SETC"] => Ok(TraceStep::SetC),
            ["INCC"] => Ok(TraceStep::IncC),
            ["CHECKC"] => Ok(TraceStep::CheckC),
            ["RET", b] => Ok(if flag(b)? { TraceStep::ReturnTrue } else { TraceStep::ReturnFalse }),
            _ => Err(()),
        }
    }
}

/// The implementation sequence of one algorithm run. At most one terminal
/// step, and only in last position.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Trace {
    steps: Vec<TraceStep>,
}

impl Trace {
    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The returned value, if the run finished.
    pub fn result(&self) -> Option<bool> {
        match self.steps.last() {
            Some(TraceStep::ReturnTrue) => Some(true),
            Some(TraceStep::ReturnFalse) => Some(false),
            _ => None,
        }
    }

    /// One step per line.
    pub fn to_text(&self) -> String {
        self.steps.iter().map(|s| format!("{s}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<Trace, TraceParseError> {
        let mut builder = TraceBuilder::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            let step: TraceStep = raw
                .parse()
                .map_err(|_| TraceParseError::BadStep { line, text: raw.to_string() })?;
            if builder.is_finished() {
                return Err(TraceParseError::AfterTerminal { line });
            }
            builder.push(step);
        }
        Ok(builder.finish())
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Accumulates steps for a [`Trace`].
#[derive(Debug, Default)]
pub struct TraceBuilder {
    steps: Vec<TraceStep>,
}

impl TraceBuilder {
    /// Panics when a step follows a terminal step.
    pub fn push(&mut self, step: TraceStep) {
        assert!(!self.is_finished(), "trace already terminated");
        self.steps.push(step);
    }

    pub fn is_finished(&self) -> bool {
        self.steps.last().is_some_and(|s| s.is_terminal())
    }

    pub fn decide(&mut self, var: u32, value: bool) {
        self.push(TraceStep::Decide { var, value });
    }

    pub fn probe(&mut self, assign: u32, var: u32) {
        self.push(TraceStep::Probe { assign, var });
    }

    /// Pushes the terminal step for `value` and returns it.
    pub fn ret(&mut self, value: bool) -> bool {
        self.push(if value { TraceStep::ReturnTrue } else { TraceStep::ReturnFalse });
        value
    }

    pub fn finish(self) -> Trace {
        Trace { steps: self.steps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut b = TraceBuilder::default();
        b.push(TraceStep::SetC);
        b.decide(1, false);
        b.push(TraceStep::IncC);
        b.push(TraceStep::CheckC);
        b.probe(1, 2);
        b.ret(true);
        let t = b.finish();
        assert_eq!(t.to_text(), "SETC\nDECIDE 1 F\nINCC\nCHECKC\nPROBE 1 2\nRET T\n");
        assert_eq!(Trace::parse(&t.to_text()).unwrap(), t);
        assert_eq!(t.result(), Some(true));
    }

    #[test]
    fn rejects_step_after_return() {
        assert_eq!(Trace::parse("RET F\nSETC\n").unwrap_err(), TraceParseError::AfterTerminal { line: 2 });
        assert!(matches!(Trace::parse("DECIDE x T").unwrap_err(), TraceParseError::BadStep { line: 1, .. }));
    }

    #[test]
    #[should_panic(expected = "already terminated")]
    fn builder_enforces_single_terminal() {
        let mut b = TraceBuilder::default();
        b.ret(false);
        b.ret(true);
    }
}
