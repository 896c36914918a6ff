//! Text format for transformations: one wreath-recursion equation per state.
//!
//! ```text
//! # comments run to the end of the line
//! alphabet = 3
//! b = (a, 1, b)[2,3,1]
//! a = (1, 1, a)[1,1,2]
//! main = b
//! ```
//!
//! The bracket is optional and defaults to the identity map on letters.
//! The token `1` in a section position is the built-in identity
//! transformation. Statements are separated by newlines or `;`. The
//! `alphabet` line is optional; when present it must be the first
//! statement, otherwise the alphabet size is taken from the first tuple.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::machine::{MealyMachine, Transformation};

/// Name under which the built-in identity appears in sections.
pub const IDENTITY_NAME: &str = "1";

#[derive(Debug, Clone)]
pub struct AutomatonSet {
    alphabet_size: usize,
    machine: MealyMachine,
    transformations: Vec<(String, Transformation)>,
    main: Option<String>,
}

impl AutomatonSet {
    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// The machine holding every declared state, plus the built-in identity
    /// when it is referenced.
    pub fn machine(&self) -> &MealyMachine {
        &self.machine
    }

    /// Declared names in declaration order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.transformations.iter().map(|(n, _)| n.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Transformation)> {
        self.transformations.iter().map(|(n, t)| (n.as_str(), t))
    }

    pub fn get(&self, name: &str) -> Option<&Transformation> {
        if name == IDENTITY_NAME {
            return None;
        }
        self.transformations
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }

    /// Like [`get`](Self::get), but `1` resolves to the identity and an
    /// unknown name is an error.
    pub fn resolve(&self, name: &str) -> Result<Transformation> {
        if name == IDENTITY_NAME {
            return Ok(Transformation::identity(self.alphabet_size));
        }
        self.get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownStateName {
                name: name.to_string(),
                line: 0,
            })
    }

    pub fn main(&self) -> Option<&str> {
        self.main.as_deref()
    }

    /// The `main` state if declared, otherwise the first equation.
    pub fn default_name(&self) -> &str {
        self.main
            .as_deref()
            .unwrap_or_else(|| self.transformations[0].0.as_str())
    }

    /// A namer that knows every declared transformation.
    pub fn namer(&self) -> Namer {
        let mut namer = Namer::new();
        for (name, t) in &self.transformations {
            namer.insert(name, t.clone());
        }
        namer
    }
}

/// Maps transformations back to human-readable names.
///
/// Declared names win (first declaration first); the identity is `1`;
/// anything else gets a fresh `_N` name, assigned in query order.
#[derive(Debug, Clone, Default)]
pub struct Namer {
    known: HashMap<Transformation, String>,
    fresh: usize,
}

impl Namer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, t: Transformation) {
        self.known.entry(t).or_insert_with(|| name.to_string());
    }

    pub fn lookup(&self, t: &Transformation) -> Option<&str> {
        self.known.get(t).map(String::as_str)
    }

    pub fn name(&mut self, t: &Transformation) -> String {
        if let Some(n) = self.known.get(t) {
            return n.clone();
        }
        if t.is_identity() {
            return IDENTITY_NAME.to_string();
        }
        let taken: Vec<&String> = self.known.values().collect();
        let name = loop {
            let candidate = format!("_{}", self.fresh);
            self.fresh += 1;
            if !taken.contains(&&candidate) {
                break candidate;
            }
        };
        self.known.insert(t.clone(), name.clone());
        name
    }

    /// Names of every state of `t`, in canonical order.
    pub fn state_names(&mut self, t: &Transformation) -> Vec<String> {
        (0..t.state_count())
            .map(|q| self.name(&t.rooted_at(q)))
            .collect()
    }
}

enum Statement {
    Alphabet(usize),
    Main(String),
    Equation {
        name: String,
        sections: Vec<String>,
        outputs: Option<Vec<usize>>,
    },
}

/// Line, name, tuple entries and optional output bracket.
type Equation = (usize, String, Vec<String>, Option<Vec<usize>>);

/// Parses wreath-recursion equations into canonical transformations, one
/// per declared name.
pub fn parse_wreath(source: &str) -> Result<AutomatonSet> {
    let mut statements = Vec::new();
    for (i, raw) in source.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("");
        for piece in text.split(';') {
            if !piece.trim().is_empty() {
                statements.push((line, parse_statement(piece, line)?));
            }
        }
    }

    let mut alphabet_size = None;
    let mut main: Option<(String, usize)> = None;
    let mut equations: Vec<Equation> = Vec::new();
    for (index, (line, st)) in statements.into_iter().enumerate() {
        match st {
            Statement::Alphabet(k) => {
                if index != 0 {
                    return Err(syntax(line, "`alphabet` must be the first statement"));
                }
                if k == 0 {
                    return Err(syntax(line, "alphabet size must be at least 1"));
                }
                alphabet_size = Some(k);
            }
            Statement::Main(name) => {
                if main.is_some() {
                    return Err(syntax(line, "`main` declared twice"));
                }
                main = Some((name, line));
            }
            Statement::Equation {
                name,
                sections,
                outputs,
            } => {
                if equations.iter().any(|(_, n, _, _)| *n == name) {
                    return Err(Error::DuplicateDefinition { name, line });
                }
                equations.push((line, name, sections, outputs));
            }
        }
    }
    let Some((_, _, first, _)) = equations.first() else {
        return Err(syntax(1, "no equations"));
    };
    let k = alphabet_size.unwrap_or(first.len());

    let mut machine = MealyMachine::new(k);
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, (_, name, _, _)) in equations.iter().enumerate() {
        index.insert(name.as_str(), i);
    }
    let identity_index = equations.len();
    let mut uses_identity = false;
    for (line, name, sections, outputs) in &equations {
        let line = *line;
        if sections.len() != k {
            return Err(syntax(
                line,
                &format!("`{name}` has {} sections, expected {k}", sections.len()),
            ));
        }
        let mut targets = Vec::with_capacity(k);
        for s in sections {
            if s == IDENTITY_NAME {
                uses_identity = true;
                targets.push(identity_index);
            } else {
                match index.get(s.as_str()) {
                    Some(&q) => targets.push(q),
                    None => {
                        return Err(Error::MissingDefinition {
                            name: s.clone(),
                            line,
                        })
                    }
                }
            }
        }
        let outputs = match outputs {
            Some(ys) => {
                if ys.len() != k {
                    return Err(syntax(
                        line,
                        &format!("`{name}` has {} outputs, expected {k}", ys.len()),
                    ));
                }
                ys.clone()
            }
            None => (1..=k).collect(),
        };
        machine
            .add_state(name.clone(), &targets, &outputs)
            .map_err(|e| match e {
                Error::LetterOutOfRange { .. } => e,
                other => syntax(line, &other.to_string()),
            })?;
    }
    if uses_identity {
        machine.add_state(
            IDENTITY_NAME,
            &vec![identity_index; k],
            &(1..=k).collect::<Vec<_>>(),
        )?;
    }

    let mut transformations = Vec::with_capacity(equations.len());
    for (i, (_, name, _, _)) in equations.iter().enumerate() {
        transformations.push((name.clone(), machine.canonicalize(i)?));
    }
    let main = match main {
        Some((name, line)) => {
            if !index.contains_key(name.as_str()) {
                return Err(Error::UnknownStateName { name, line });
            }
            Some(name)
        }
        None => None,
    };
    Ok(AutomatonSet {
        alphabet_size: k,
        machine,
        transformations,
        main,
    })
}

fn syntax(line: usize, message: &str) -> Error {
    Error::Syntax {
        line,
        message: message.to_string(),
    }
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '^' | '\''))
}

fn parse_statement(text: &str, line: usize) -> Result<Statement> {
    let (lhs, rhs) = text
        .split_once('=')
        .ok_or_else(|| syntax(line, "expected `name = ...`"))?;
    let lhs = lhs.trim();
    let rhs = rhs.trim();
    if !rhs.starts_with('(') {
        return match lhs {
            "alphabet" => rhs
                .parse()
                .map(Statement::Alphabet)
                .map_err(|_| syntax(line, &format!("bad alphabet size `{rhs}`"))),
            "main" if is_name(rhs) => Ok(Statement::Main(rhs.to_string())),
            _ => Err(syntax(line, "expected `(` after `=`")),
        };
    }
    if !is_name(lhs) {
        return Err(syntax(line, &format!("invalid state name `{lhs}`")));
    }
    let close = rhs.find(')').ok_or_else(|| syntax(line, "missing `)`"))?;
    let sections: Vec<String> = rhs[1..close]
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    for s in &sections {
        if s != IDENTITY_NAME && !is_name(s) {
            return Err(syntax(line, &format!("invalid section `{s}`")));
        }
    }
    let rest = rhs[close + 1..].trim();
    let outputs = if rest.is_empty() {
        None
    } else {
        let inner = rest
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| syntax(line, "expected `[y1,...,yk]` after the sections"))?;
        let ys = inner
            .split(',')
            .map(|y| {
                y.trim()
                    .parse::<usize>()
                    .map_err(|_| syntax(line, &format!("bad letter `{}`", y.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Some(ys)
    };
    Ok(Statement::Equation {
        name: lhs.to_string(),
        sections,
        outputs,
    })
}

/// Prints `t` as wreath-recursion equations that parse back to `t`.
///
/// The root gets `root_name` unless the namer already knows it; the
/// identity state is written as the built-in `1`.
pub fn print_wreath(t: &Transformation, root_name: &str, namer: &mut Namer) -> String {
    let k = t.alphabet_size();
    let n = t.state_count();
    let identity = t.identity_state();
    let mut names: Vec<String> = Vec::with_capacity(n);
    for q in 0..n {
        let name = if q == 0 {
            namer
                .lookup(t)
                .filter(|_| !t.is_identity())
                .map(str::to_string)
                .unwrap_or_else(|| root_name.to_string())
        } else if Some(q) == identity {
            IDENTITY_NAME.to_string()
        } else {
            namer.name(&t.rooted_at(q))
        };
        names.push(name);
    }

    let mut out = String::new();
    let _ = writeln!(out, "alphabet = {k}");
    for q in 0..n {
        if Some(q) == identity && q != 0 {
            continue;
        }
        let sections: Vec<&str> = (1..=k).map(|x| names[t.target(q, x)].as_str()).collect();
        let outputs: Vec<String> = (1..=k).map(|x| t.output(q, x).to_string()).collect();
        let _ = writeln!(
            out,
            "{} = ({})[{}]",
            names[q],
            sections.join(", "),
            outputs.join(",")
        );
    }
    let _ = writeln!(out, "main = {}", names[0]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t0_has_two_states() {
        let set = parse_wreath("t0 = (e, t0)[2,2]; e = (e,e)[1,2]").unwrap();
        let t0 = set.get("t0").unwrap();
        assert_eq!(t0.state_count(), 2);
        assert_eq!(set.alphabet_size(), 2);
        assert!(set.get("e").unwrap().is_identity());
    }

    #[test]
    fn identity_alone() {
        let set = parse_wreath("e = (e,e)[1,2]").unwrap();
        let e = set.get("e").unwrap();
        assert_eq!(e.state_count(), 1);
        assert!(e.is_identity());
    }

    #[test]
    fn example_b_has_three_states() {
        let set =
            parse_wreath("b = (a,e,b)[2,3,1]; a = (e,e,a)[1,1,2]; e = (e,e,e)[1,2,3]").unwrap();
        let b = set.get("b").unwrap();
        assert_eq!(b.state_count(), 3);
        assert_eq!(b.section(&[3]).unwrap(), *b);
        assert_eq!(b.section(&[1]).unwrap(), *set.get("a").unwrap());
        assert!(b.section(&[2]).unwrap().is_identity());
    }

    #[test]
    fn builtin_identity_and_omitted_bracket() {
        let set = parse_wreath("alphabet = 2\ns = (t, s)[1,1]\nt = (1, s)\nmain = s").unwrap();
        let t = set.get("t").unwrap();
        assert_eq!(t.letter_map(), vec![1, 2]);
        assert!(t.section(&[1]).unwrap().is_identity());
        assert_eq!(set.main(), Some("s"));
        assert_eq!(set.default_name(), "s");
    }

    #[test]
    fn comments_are_ignored() {
        let set =
            parse_wreath("# header\nalphabet = 2 # two letters\n\nx = (1, x)[2,2] # t0\n").unwrap();
        assert_eq!(set.default_name(), "x");
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_wreath("a = (a, b)[1,2]"),
            Err(Error::MissingDefinition { ref name, line: 1 }) if name == "b"
        ));
        assert!(matches!(
            parse_wreath("a = (a, a)[1,2]\na = (a, a)"),
            Err(Error::DuplicateDefinition { line: 2, .. })
        ));
        assert!(matches!(
            parse_wreath("a = (a, a)[1,3]"),
            Err(Error::LetterOutOfRange { letter: 3, .. })
        ));
        assert!(matches!(
            parse_wreath("a = (a, a)\nmain = b"),
            Err(Error::UnknownStateName { line: 2, .. })
        ));
        assert!(matches!(
            parse_wreath("alphabet = 3\na = (a, a)"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_wreath("a = (a, a)\nalphabet = 2"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_wreath("# nothing"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_wreath("a = a, a"),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn print_round_trip() {
        let set =
            parse_wreath("alphabet = 3\nb = (a, 1, b)[2,3,1]\na = (1, 1, a)[1,1,2]\nmain = b")
                .unwrap();
        let b = set.get("b").unwrap();
        let mut namer = set.namer();
        let text = print_wreath(b, "root", &mut namer);
        assert_eq!(
            text,
            "alphabet = 3\nb = (a, 1, b)[2,3,1]\na = (1, 1, a)[1,1,2]\nmain = b\n"
        );
        let again = parse_wreath(&text).unwrap();
        assert_eq!(again.get("b").unwrap(), b);
    }

    #[test]
    fn print_identity_root() {
        let id = Transformation::identity(2);
        let text = print_wreath(&id, "e", &mut Namer::new());
        assert_eq!(text, "alphabet = 2\ne = (e, e)[1,2]\nmain = e\n");
        assert!(parse_wreath(&text).unwrap().get("e").unwrap().is_identity());
    }

    #[test]
    fn namer_fallbacks() {
        let set = parse_wreath("t0 = (1, t0)[2,2]").unwrap();
        let t0 = set.get("t0").unwrap();
        let mut namer = set.namer();
        assert_eq!(namer.name(t0), "t0");
        assert_eq!(namer.name(&Transformation::identity(2)), "1");
        let sq = t0.power(2);
        assert_eq!(namer.name(&sq), "_0");
        assert_eq!(namer.name(&sq), "_0");
        assert_eq!(namer.state_names(&sq), vec!["_0", "t0", "1"]);
    }
}
