//! Line-oriented PDA text format:
//!
//! ```text
//! @start q0
//! @stack G0
//! q0, a, G0 -> q1, G G
//! q1, b, G -> q1, _
//! ```

use std::fmt;
use std::str::FromStr;

use super::{Action, Pda, PdaError, StackSymbol};

fn names<'a, T: fmt::Display + 'a>(items: impl Iterator<Item = &'a T>) -> String {
    items.map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

impl<G: StackSymbol> fmt::Display for Pda<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "@start {}", self.start_state)?;
        writeln!(f, "@stack {}", self.start_stack)?;
        writeln!(f, "@states {}", names(self.states.iter()))?;
        if !self.input_alphabet.is_empty() {
            writeln!(f, "@input {}", names(self.input_alphabet.iter()))?;
        }
        writeln!(f, "@symbols {}", names(self.stack_alphabet.iter()))?;
        for a in &self.actions {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> PdaError {
    PdaError::Parse {
        line,
        message: message.into(),
    }
}

fn symbol<G: FromStr>(tok: &str, line: usize) -> Result<G, PdaError> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad stack symbol `{tok}`")))
}

fn single_token(text: &str, line: usize, what: &str) -> Result<String, PdaError> {
    let t = text.trim();
    if t.is_empty() || t.contains(char::is_whitespace) {
        return Err(parse_err(line, format!("expected one {what}, found `{t}`")));
    }
    Ok(t.to_string())
}

impl<G: StackSymbol + FromStr> FromStr for Pda<G> {
    type Err = PdaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut start_state: Option<String> = None;
        let mut start_stack: Option<G> = None;
        let mut states = Vec::new();
        let mut inputs = Vec::new();
        let mut symbols: Vec<G> = Vec::new();
        let mut actions = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            if let Some(rest) = text.strip_prefix('@') {
                let (key, val) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                match key {
                    "start" => start_state = Some(single_token(val, line, "state")?),
                    "stack" => {
                        start_stack = Some(symbol(&single_token(val, line, "symbol")?, line)?)
                    }
                    "states" => states.extend(val.split_whitespace().map(str::to_string)),
                    "input" => inputs.extend(val.split_whitespace().map(str::to_string)),
                    "symbols" => {
                        for t in val.split_whitespace() {
                            symbols.push(symbol(t, line)?);
                        }
                    }
                    other => return Err(parse_err(line, format!("unknown header `@{other}`"))),
                }
                continue;
            }
            let (lhs, rhs) = text
                .split_once("->")
                .ok_or_else(|| parse_err(line, "expected `->`"))?;
            let left: Vec<&str> = lhs.split(',').collect();
            let right: Vec<&str> = rhs.split(',').collect();
            if left.len() != 3 || right.len() != 2 {
                return Err(parse_err(
                    line,
                    "expected `state, read, pop -> state, push`",
                ));
            }
            let from = single_token(left[0], line, "state")?;
            let read = single_token(left[1], line, "input symbol or _")?;
            let pop = symbol(&single_token(left[2], line, "stack symbol")?, line)?;
            let to = single_token(right[0], line, "state")?;
            let push_text = right[1].trim();
            let push = if push_text == "_" || push_text == "ε" || push_text.is_empty() {
                Vec::new()
            } else {
                push_text
                    .split_whitespace()
                    .map(|t| symbol(t, line))
                    .collect::<Result<Vec<G>, _>>()?
            };
            let read = (read != "_" && read != "ε").then_some(read);
            actions.push(Action {
                from,
                read,
                pop,
                to,
                push,
            });
        }
        let start_state = start_state
            .or_else(|| actions.first().map(|a| a.from.clone()))
            .ok_or_else(|| parse_err(0, "no start state and no actions"))?;
        let start_stack = start_stack
            .or_else(|| actions.first().map(|a| a.pop.clone()))
            .ok_or_else(|| parse_err(0, "no start stack symbol and no actions"))?;
        let mut p = Pda::new(start_state, start_stack, actions);
        p.states.extend(states);
        p.input_alphabet.extend(inputs);
        p.stack_alphabet.extend(symbols);
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pda::tests::example9;

    #[test]
    fn round_trip() {
        let p = example9();
        let text = p.to_string();
        assert!(text.starts_with("@start q0\n@stack G0\n"));
        assert!(text.contains("q1, b, G -> q2, _"));
        let again: Pda = text.parse().unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn headers_and_comments() {
        let p: Pda = "# demo\n@start s\n@stack Z\n@symbols Y\ns, _, Z -> s, _\n"
            .parse()
            .unwrap();
        assert_eq!(p.start_state, "s");
        assert!(p.stack_alphabet.contains("Y"));
        assert_eq!(p.actions[0].read, None);
    }

    #[test]
    fn errors_name_the_line() {
        let err = "q, a, G -> q, _\nq a G -> q".parse::<Pda>().unwrap_err();
        assert!(matches!(err, PdaError::Parse { line: 2, .. }));
        assert!("@bogus x".parse::<Pda>().is_err());
        assert!("".parse::<Pda>().is_err());
    }
}
