//! Line-oriented text format for automata and timed words.
//!
//! ```text
//! automaton NAME
//! states q0 q1          # optional; inferred from init/accept/trans if absent
//! clocks x y
//! params mu
//! alphabet a b          # optional; inferred from transitions if absent
//! init q0
//! accept q1
//! trans q0 q1 a ( x<1 & !(y=mu) ) { y }
//! ```
//!
//! Guards accept `<`, `<=`, `=`, `>=`, `>`, `!=` against naturals or the
//! parameter; everything is desugared to `<`, `=`, `!` and `&`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{
    Atom, Automaton, Bound, ClockId, CmpOp, Constraint, LetterId, ModelError, ParamId, StateId, Transition,
};
use crate::rational::Rational;
use crate::semantics::{TimedWord, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Model { line: usize, source: ModelError },
    #[error("line {line}: {source}")]
    Word { line: usize, source: Box<WordError> },
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

fn dangling(line: usize, what: String) -> ParseError {
    ParseError::Model { line, source: ModelError::DanglingRef(what) }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(is_ident_char)
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '@' | '.' | '+' | '\'' | '-')
}

struct PendingTrans {
    line: usize,
    source: String,
    target: String,
    letter: String,
    rest: String,
}

/// Parses the automaton text format. Name resolution failures are reported
/// as `DanglingRef`; the no-mixed-guard rule is left to `model::validate`.
pub fn parse_automaton(text: &str) -> Result<Automaton, ParseError> {
    let mut name = None;
    let mut states: Option<Vec<String>> = None;
    let mut clocks = Vec::new();
    let mut params = Vec::new();
    let mut alphabet: Option<Vec<String>> = None;
    let mut init: Option<(usize, String)> = None;
    let mut accept: Vec<(usize, String)> = Vec::new();
    let mut trans = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let words = || -> Result<Vec<String>, ParseError> {
            rest.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|w| !w.is_empty())
                .map(|w| {
                    if is_ident(w) {
                        Ok(w.to_string())
                    } else {
                        Err(syntax(line_no, format!("invalid identifier `{w}`")))
                    }
                })
                .collect()
        };
        match kw {
            "automaton" => {
                let w = words()?;
                if w.len() != 1 {
                    return Err(syntax(line_no, "expected `automaton NAME`"));
                }
                name = Some(w[0].clone());
            }
            "states" => states.get_or_insert_with(Vec::new).extend(words()?),
            "clocks" => clocks.extend(words()?),
            "params" => params.extend(words()?),
            "alphabet" => alphabet.get_or_insert_with(Vec::new).extend(words()?),
            "init" => {
                let w = words()?;
                if w.len() != 1 || init.is_some() {
                    return Err(syntax(line_no, "expected exactly one initial state"));
                }
                init = Some((line_no, w[0].clone()));
            }
            "accept" => accept.extend(words()?.into_iter().map(|w| (line_no, w))),
            "trans" => {
                let mut parts = rest.splitn(4, char::is_whitespace).filter(|s| !s.is_empty());
                let mut field = |what: &str| {
                    parts.next().map(str::to_string).ok_or_else(|| syntax(line_no, format!("missing {what}")))
                };
                let source = field("source state")?;
                let target = field("target state")?;
                let letter = field("letter")?;
                let rest = parts.next().unwrap_or("").to_string();
                for w in [&source, &target, &letter] {
                    if !is_ident(w) {
                        return Err(syntax(line_no, format!("invalid identifier `{w}`")));
                    }
                }
                trans.push(PendingTrans { line: line_no, source, target, letter, rest });
            }
            other => return Err(syntax(line_no, format!("unknown keyword `{other}`"))),
        }
    }

    let name = name.ok_or_else(|| syntax(1, "missing `automaton NAME` line"))?;
    let (init_line, init) = init.ok_or_else(|| syntax(1, "missing `init` line"))?;
    for group in [&clocks, &params] {
        let unique: BTreeSet<_> = group.iter().collect();
        if unique.len() != group.len() {
            return Err(syntax(1, "duplicate clock or parameter declaration"));
        }
    }

    let declared_states = states.is_some();
    let mut states = states.unwrap_or_default();
    let state_of = |n: &str, line: usize, states: &mut Vec<String>| {
        if let Some(i) = states.iter().position(|s| s == n) {
            Ok(StateId(i))
        } else if declared_states {
            Err(dangling(line, format!("state `{n}`")))
        } else {
            states.push(n.to_string());
            Ok(StateId(states.len() - 1))
        }
    };
    let initial = state_of(&init, init_line, &mut states)?;
    let mut accepting = BTreeSet::new();
    for (line, q) in &accept {
        accepting.insert(state_of(q, *line, &mut states)?);
    }

    let declared_alphabet = alphabet.is_some();
    let mut alphabet = alphabet.unwrap_or_default();
    let mut transitions = Vec::new();
    for p in trans {
        let source = state_of(&p.source, p.line, &mut states)?;
        let target = state_of(&p.target, p.line, &mut states)?;
        let letter = match alphabet.iter().position(|l| *l == p.letter) {
            Some(i) => LetterId(i),
            None if declared_alphabet => return Err(dangling(p.line, format!("letter `{}`", p.letter))),
            None => {
                alphabet.push(p.letter.clone());
                LetterId(alphabet.len() - 1)
            }
        };
        let mut parser = GuardParser { src: p.rest.as_bytes(), pos: 0, line: p.line, clocks: &clocks, params: &params };
        let (guard, resets) = parser.transition_tail()?;
        transitions.push(Transition { source, target, letter, guard, resets });
    }

    Ok(Automaton { name, alphabet, states, clocks, params, initial, accepting, transitions })
}

struct GuardParser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    clocks: &'a [String],
    params: &'a [String],
}

impl GuardParser<'_> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        syntax(self.line, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }

    fn word(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && is_ident_char(self.src[self.pos] as char) {
            self.pos += 1;
        }
        if self.pos > start {
            Some(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
        } else {
            None
        }
    }

    fn number(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'/') {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn transition_tail(&mut self) -> Result<(Constraint, BTreeSet<ClockId>), ParseError> {
        self.expect(b'(')?;
        let guard = if self.peek() == Some(b')') { Constraint::True } else { self.conjunction()? };
        self.expect(b')')?;
        self.expect(b'{')?;
        let mut resets = BTreeSet::new();
        loop {
            match self.peek() {
                Some(b'}') => {
                    self.pos += 1;
                    break;
                }
                Some(b',') => self.pos += 1,
                Some(_) => {
                    let w = self.word().ok_or_else(|| self.err("expected clock name in resets"))?;
                    resets.insert(self.clock(&w)?);
                }
                None => return Err(self.err("unterminated reset set")),
            }
        }
        if self.peek().is_some() {
            return Err(self.err("trailing input after reset set"));
        }
        Ok((guard, resets))
    }

    fn clock(&self, name: &str) -> Result<ClockId, ParseError> {
        self.clocks
            .iter()
            .position(|c| c == name)
            .map(ClockId)
            .ok_or_else(|| dangling(self.line, format!("clock `{name}`")))
    }

    fn conjunction(&mut self) -> Result<Constraint, ParseError> {
        let mut g = self.unary()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            if self.peek() == Some(b'&') {
                self.pos += 1;
            }
            g = g.and(self.unary()?);
        }
        Ok(g)
    }

    fn unary(&mut self) -> Result<Constraint, ParseError> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(self.unary()?.negate())
            }
            Some(b'(') => {
                self.pos += 1;
                let g = self.conjunction()?;
                self.expect(b')')?;
                Ok(g)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Constraint, ParseError> {
        let lhs = self.word().ok_or_else(|| self.err("expected guard atom"))?;
        if lhs == "true" {
            return Ok(Constraint::True);
        }
        let clock = self.clock(&lhs)?;
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let op = [&b"<="[..], b">=", b"!=", b"==", b"<", b">", b"="]
            .into_iter()
            .find(|op| rest.starts_with(op))
            .ok_or_else(|| self.err(format!("expected comparison after `{lhs}`")))?;
        self.pos += op.len();
        let bound = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.number().unwrap_or_default();
                let value: Rational = n.parse().map_err(|_| self.err(format!("bad constant `{n}`")))?;
                Bound::Const(value)
            }
            _ => {
                let w = self.word().ok_or_else(|| self.err("expected constant or parameter"))?;
                if self.clocks.contains(&w) {
                    return Err(
                        self.err(format!("clock-vs-clock comparison `{lhs} .. {w}` is not supported in guards"))
                    );
                }
                let p = self
                    .params
                    .iter()
                    .position(|p| *p == w)
                    .ok_or_else(|| dangling(self.line, format!("parameter `{w}`")))?;
                Bound::Param(ParamId(p))
            }
        };
        if matches!(self.peek(), Some(b'+') | Some(b'-')) {
            return Err(self.err("offset expressions are not supported in guards"));
        }
        Ok(match op {
            b"<" => Constraint::lt(clock, bound),
            b"<=" => Constraint::le(clock, bound),
            b"=" | b"==" => Constraint::eq(clock, bound),
            b">=" => Constraint::ge(clock, bound),
            b">" => Constraint::gt(clock, bound),
            _ => Constraint::ne(clock, bound),
        })
    }
}

/// Renders a guard in the desugared grammar; `parse` of the output yields
/// the same tree.
pub fn print_constraint(a: &Automaton, g: &Constraint) -> String {
    let mut out = String::new();
    write_constraint(a, g, &mut out);
    out
}

fn write_constraint(a: &Automaton, g: &Constraint, out: &mut String) {
    match g {
        Constraint::True => out.push_str("true"),
        Constraint::Atom(Atom { clock, op, bound }) => {
            out.push_str(a.clock_name(*clock));
            out.push(match op {
                CmpOp::Lt => '<',
                CmpOp::Eq => '=',
            });
            match bound {
                Bound::Const(c) => {
                    let _ = write!(out, "{c}");
                }
                Bound::Param(p) => out.push_str(&a.params[p.0]),
            }
        }
        Constraint::Not(inner) => {
            out.push_str("!(");
            write_constraint(a, inner, out);
            out.push(')');
        }
        Constraint::And(l, r) => {
            write_constraint(a, l, out);
            out.push_str(" & ");
            if matches!(**r, Constraint::And(..)) {
                out.push('(');
                write_constraint(a, r, out);
                out.push(')');
            } else {
                write_constraint(a, r, out);
            }
        }
    }
}

/// Renders the automaton in the text format with every section explicit.
pub fn print_automaton(a: &Automaton) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "automaton {}", a.name);
    let _ = writeln!(out, "states {}", a.states.join(" "));
    if !a.clocks.is_empty() {
        let _ = writeln!(out, "clocks {}", a.clocks.join(" "));
    }
    if !a.params.is_empty() {
        let _ = writeln!(out, "params {}", a.params.join(" "));
    }
    if !a.alphabet.is_empty() {
        let _ = writeln!(out, "alphabet {}", a.alphabet.join(" "));
    }
    let _ = writeln!(out, "init {}", a.state_name(a.initial));
    if !a.accepting.is_empty() {
        let acc: Vec<_> = a.accepting.iter().map(|q| a.state_name(*q)).collect();
        let _ = writeln!(out, "accept {}", acc.join(" "));
    }
    for t in &a.transitions {
        let resets: Vec<_> = t.resets.iter().map(|z| a.clock_name(*z)).collect();
        let _ = writeln!(
            out,
            "trans {} {} {} ( {} ) {{ {} }}",
            a.state_name(t.source),
            a.state_name(t.target),
            a.alphabet[t.letter.0],
            print_constraint(a, &t.guard),
            resets.join(", ")
        );
    }
    out
}

/// Parses a timed word: one `LETTER TIMESTAMP` event per line.
pub fn parse_timed_word(text: &str) -> Result<TimedWord, ParseError> {
    let mut events = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(letter), Some(stamp), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(syntax(line_no, "expected `LETTER TIMESTAMP`"));
        };
        let t: Rational = stamp.parse().map_err(|_| syntax(line_no, format!("bad timestamp `{stamp}`")))?;
        events.push((letter.to_string(), t));
        let tail = events[events.len().saturating_sub(2)..].to_vec();
        TimedWord::new(tail).map_err(|e| ParseError::Word { line: line_no, source: Box::new(e) })?;
        last_line = line_no;
    }
    TimedWord::new(events).map_err(|e| ParseError::Word { line: last_line, source: Box::new(e) })
}

/// Renders a timed word in the line format.
pub fn print_timed_word(w: &TimedWord) -> String {
    let mut out = String::new();
    for (letter, t) in w.events() {
        let _ = writeln!(out, "{letter} {t}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate;
    use crate::rational::rat;

    const SAMPLE: &str = "\
# comment line
automaton demo
clocks x y
params mu
init q0
accept q1
trans q0 q1 a ( x<=2 & !(y=1) ) { y }   # trailing comment
trans q1 q1 b ( true ) { }
trans q1 q0 a ( x>mu ) { x, y }
";

    #[test]
    fn parses_sample() {
        let a = parse_automaton(SAMPLE).unwrap();
        assert_eq!(a.name, "demo");
        assert_eq!(a.states, vec!["q0", "q1"]);
        assert_eq!(a.alphabet, vec!["a", "b"]);
        assert_eq!(a.transitions.len(), 3);
        assert_eq!(a.transitions[2].resets.len(), 2);
        assert!(validate(&a).is_ok());
        let x = ClockId(0);
        assert_eq!(
            a.transitions[0].guard,
            Constraint::le(x, Bound::Const(rat(2, 1)))
                .and(Constraint::eq(ClockId(1), Bound::Const(rat(1, 1))).negate())
        );
    }

    #[test]
    fn round_trip() {
        let a = parse_automaton(SAMPLE).unwrap();
        let b = parse_automaton(&print_automaton(&a)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_clock_differences_and_unknowns() {
        let base = "automaton t\nclocks x y\ninit q\n";
        assert!(matches!(
            parse_automaton(&format!("{base}trans q q a ( x<y ) {{ }}\n")),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_automaton(&format!("{base}trans q q a ( z<1 ) {{ }}\n")),
            Err(ParseError::Model { source: ModelError::DanglingRef(_), .. })
        ));
        assert!(matches!(
            parse_automaton(&format!("{base}states q\ntrans q r a ( true ) {{ }}\n")),
            Err(ParseError::Model { source: ModelError::DanglingRef(_), .. })
        ));
        assert!(matches!(
            parse_automaton(&format!("{base}alphabet a\ntrans q q b ( true ) {{ }}\n")),
            Err(ParseError::Model { source: ModelError::DanglingRef(_), .. })
        ));
        assert!(matches!(
            parse_automaton(&format!("{base}trans q q a ( x<1 ) {{ x }} extra\n")),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn mixed_guard_parses_but_fails_validation() {
        let a =
            parse_automaton("automaton t\nclocks x y\nparams mu\ninit q\ntrans q q a ( x=mu & y=3 ) { }\n").unwrap();
        assert_eq!(validate(&a), Err(vec![ModelError::MixedGuard { transition: 0 }]));
    }

    #[test]
    fn timed_words() {
        let w = parse_timed_word("a 1/2\n# c\nb 0.75\na 2\n").unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.events()[1].1, rat(3, 4));
        assert!(parse_timed_word("").unwrap().is_empty());
        assert!(matches!(parse_timed_word("a 1\na 1\n"), Err(ParseError::Word { line: 2, .. })));
        assert!(matches!(parse_timed_word("a 2\na 1\n"), Err(ParseError::Word { .. })));
        assert!(parse_timed_word("a\n").is_err());
        let round = parse_timed_word(&print_timed_word(&w)).unwrap();
        assert_eq!(round, w);
    }
}
