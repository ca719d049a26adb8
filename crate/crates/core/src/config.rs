//! Plain-text map and potential files.
//!
//! ```text
//! [partition]
//! endpoints = 0, 1/2, 1
//!
//! [branch.0]
//! slope = 2
//! intercept = 0
//! images = 0, 1
//!
//! [potential]
//! depth = 1
//! value.0 = log:7/10
//! value.1 = -1.2039728043259361
//! ```
//!
//! A potential file may instead hold `builtin = neg-log-deriv`. Unknown
//! sections or keys and repeated keys are rejected.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use ini::Ini;

use crate::error::{Error, Result};
use crate::map::{BranchSpec, MarkovMap, PartitionSpec, Symbol, Word};
use crate::rational::{display, parse_rational, to_f64};
use crate::thermo::{Potential, PotentialKind};

/// `(section, key, value)` triples in file order.
struct Entries<'t> {
    text: &'t str,
    items: Vec<(String, String, String)>,
}

impl<'t> Entries<'t> {
    fn parse(text: &'t str) -> Result<Self> {
        let ini = Ini::load_from_str_noescape(text).map_err(|e| Error::Config {
            line: e.line,
            message: e.msg.to_string(),
        })?;
        let mut items = Vec::new();
        let mut seen = HashSet::new();
        for (section, props) in ini.iter() {
            let section = section.unwrap_or("").to_string();
            for (key, value) in props.iter() {
                if !seen.insert((section.clone(), key.to_string())) {
                    let entries = Entries { text, items: vec![] };
                    return Err(entries.error(&section, key, format!("key {key:?} repeated")));
                }
                items.push((section.clone(), key.to_string(), value.to_string()));
            }
        }
        Ok(Entries { text, items })
    }

    /// 1-based line of `key` inside `[section]`, or 0 if not found.
    fn line_of(&self, section: &str, key: &str) -> usize {
        let mut current = String::new();
        for (i, line) in self.text.lines().enumerate() {
            let t = line.trim();
            if let Some(name) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                current = name.trim().to_string();
            } else if current == section && t.split_once('=').is_some_and(|(k, _)| k.trim() == key) {
                return i + 1;
            }
        }
        0
    }

    fn error(&self, section: &str, key: &str, message: String) -> Error {
        Error::Config {
            line: self.line_of(section, key),
            message,
        }
    }

    fn wrap(&self, section: &str, key: &str, e: Error) -> Error {
        self.error(section, key, format!("[{section}] {key}: {e}"))
    }
}

fn parse_list<T>(text: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    text.split(',').map(|s| item(s.trim())).collect()
}

fn parse_usize(text: &str) -> Result<usize> {
    text.trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("not a nonnegative integer: {text:?}")))
}

/// Parses a map file.
pub fn parse_map(text: &str) -> Result<MarkovMap> {
    let entries = Entries::parse(text)?;
    let mut endpoints = None;
    let mut branches: BTreeMap<usize, [Option<String>; 3]> = BTreeMap::new();
    for (section, key, value) in &entries.items {
        if section == "partition" && key == "endpoints" {
            endpoints = Some(parse_list(value, parse_rational).map_err(|e| entries.wrap(section, key, e))?);
            continue;
        }
        let branch = section.strip_prefix("branch.").and_then(|k| k.parse::<usize>().ok());
        let slot = match key.as_str() {
            "slope" => Some(0),
            "intercept" => Some(1),
            "images" => Some(2),
            _ => None,
        };
        match (branch, slot) {
            (Some(k), Some(s)) => branches.entry(k).or_default()[s] = Some(value.clone()),
            _ => return Err(entries.error(section, key, format!("unknown key {key:?} in section [{section}]"))),
        }
    }
    let endpoints = endpoints.ok_or(Error::Config {
        line: 0,
        message: "missing [partition] endpoints".into(),
    })?;
    let partition = PartitionSpec::new(endpoints)?;
    let q = partition.len();
    if branches.keys().copied().ne(0..q) {
        return Err(Error::Config {
            line: 0,
            message: format!("expected sections [branch.0] to [branch.{}]", q - 1),
        });
    }
    let mut specs = Vec::with_capacity(q);
    for (k, fields) in branches {
        let section = format!("branch.{k}");
        let field = |i: usize, name: &str| {
            fields[i].clone().ok_or_else(|| Error::Config {
                line: 0,
                message: format!("[{section}] is missing {name}"),
            })
        };
        let slope = parse_rational(&field(0, "slope")?).map_err(|e| entries.wrap(&section, "slope", e))?;
        let intercept = parse_rational(&field(1, "intercept")?).map_err(|e| entries.wrap(&section, "intercept", e))?;
        let images = parse_list(&field(2, "images")?, parse_usize).map_err(|e| entries.wrap(&section, "images", e))?;
        specs.push(BranchSpec::new(slope, intercept, images));
    }
    MarkovMap::new(partition, specs)
}

pub fn load_map(path: impl AsRef<Path>) -> Result<MarkovMap> {
    parse_map(&read(path.as_ref())?)
}

/// Serializes a map; [`parse_map`] inverts it exactly.
pub fn map_to_string(map: &MarkovMap) -> String {
    let ends: Vec<String> = map.partition().endpoints().iter().map(display).collect();
    let mut out = format!("[partition]\nendpoints = {}\n", ends.join(", "));
    for (k, b) in map.branches().iter().enumerate() {
        let images: Vec<String> = b.images.iter().map(|i| i.to_string()).collect();
        out.push_str(&format!(
            "\n[branch.{k}]\nslope = {}\nintercept = {}\nimages = {}\n",
            display(&b.slope),
            display(&b.intercept),
            images.join(", ")
        ));
    }
    out
}

fn parse_word(text: &str) -> Result<Word> {
    let bad = || Error::InvalidArgument(format!("not a word: {text:?}"));
    let symbols: Option<Vec<Symbol>> = if text.contains('-') {
        text.split('-').map(|s| s.parse().ok()).collect()
    } else {
        text.chars().map(|c| c.to_digit(10).map(|d| d as Symbol)).collect()
    };
    symbols.filter(|s| !s.is_empty()).map(Word::new).ok_or_else(bad)
}

/// A float, or `log:p/q` for the natural log of a positive rational.
fn parse_value(text: &str) -> Result<f64> {
    let text = text.trim();
    if let Some(r) = text.strip_prefix("log:") {
        let r = to_f64(&parse_rational(r)?);
        if r > 0.0 {
            return Ok(r.ln());
        }
        return Err(Error::InvalidArgument(format!("log of a nonpositive number: {text:?}")));
    }
    text.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::InvalidArgument(format!("not a finite number: {text:?}")))
}

/// Parses a potential file against `map`.
pub fn parse_potential(text: &str, map: &MarkovMap) -> Result<Potential> {
    let entries = Entries::parse(text)?;
    let mut depth = None;
    let mut builtin = None;
    let mut table = Vec::new();
    for (section, key, value) in &entries.items {
        if section != "potential" {
            return Err(entries.error(section, key, format!("unknown section [{section}]")));
        }
        let wrap = |e| entries.wrap(section, key, e);
        match key.as_str() {
            "depth" => depth = Some(parse_usize(value).map_err(wrap)?),
            "builtin" => builtin = Some(value.trim().to_string()),
            k => match k.strip_prefix("value.") {
                Some(w) => table.push((parse_word(w).map_err(wrap)?, parse_value(value).map_err(wrap)?)),
                None => return Err(entries.error(section, key, format!("unknown key {key:?}"))),
            },
        }
    }
    let config = |message: &str| Error::Config {
        line: 0,
        message: message.into(),
    };
    match builtin.as_deref() {
        Some("neg-log-deriv") if table.is_empty() && depth.is_none_or(|d| d == 1) => {
            Ok(Potential::neg_log_derivative(map))
        }
        Some("neg-log-deriv") => Err(config("builtin potential takes no values")),
        Some(other) => Err(config(&format!("unknown builtin {other:?}"))),
        None => {
            let depth = depth.ok_or_else(|| config("missing depth"))?;
            Potential::from_table(map, depth, table)
        }
    }
}

pub fn load_potential(path: impl AsRef<Path>, map: &MarkovMap) -> Result<Potential> {
    parse_potential(&read(path.as_ref())?, map)
}

/// Serializes a potential; values are written in shortest round-trip form.
pub fn potential_to_string(p: &Potential) -> String {
    if p.kind() == PotentialKind::NegLogDerivative {
        return "[potential]\nbuiltin = neg-log-deriv\n".into();
    }
    let mut out = format!("[potential]\ndepth = {}\n", p.depth());
    for (w, v) in p.words().iter().zip(p.values()) {
        let w = if w.len() > 1 && w.symbols().iter().all(|&s| s < 10) {
            w.to_string()
        } else {
            w.symbols().iter().map(|s| s.to_string()).collect::<Vec<_>>().join("-")
        };
        out.push_str(&format!("value.{w} = {v:?}\n"));
    }
    out
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOUBLING: &str = "[partition]\nendpoints = 0, 1/2, 1\n\n[branch.0]\nslope = 2\nintercept = 0\nimages = 0, 1\n\n[branch.1]\nslope = 2\nintercept = -1\nimages = 0, 1\n";

    #[test]
    fn doubling_round_trip() {
        let map = parse_map(DOUBLING).unwrap();
        assert_eq!(map.branches(), MarkovMap::doubling().branches());
        assert_eq!(parse_map(&map_to_string(&map)).unwrap().branches(), map.branches());
    }

    #[test]
    fn unknown_key_reports_line() {
        let text = DOUBLING.replace("intercept = -1", "offset = -1");
        match parse_map(&text) {
            Err(Error::Config { line, message }) => {
                assert_eq!(line, 11);
                assert!(message.contains("offset"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn repeated_key_is_rejected() {
        let text = DOUBLING.replace("slope = 2\nintercept = 0", "slope = 2\nslope = 3\nintercept = 0");
        assert!(matches!(parse_map(&text), Err(Error::Config { .. })));
    }

    #[test]
    fn potential_forms() {
        let map = MarkovMap::doubling();
        let p = parse_potential("[potential]\ndepth = 1\nvalue.0 = log:7/10\nvalue.1 = log:3/10\n", &map).unwrap();
        assert_eq!(p.values(), &[0.7f64.ln(), 0.3f64.ln()]);
        let back = parse_potential(&potential_to_string(&p), &map).unwrap();
        assert_eq!(back.values(), p.values());
        let b = parse_potential("[potential]\nbuiltin = neg-log-deriv\n", &map).unwrap();
        assert_eq!(b.kind(), PotentialKind::NegLogDerivative);
        assert!(parse_potential("[potential]\ndepth = 1\nvalue.0 = 1\n", &map).is_err());
        assert!(parse_potential("[potential]\ndepth = 1\nvalue.0 = 1\nvalue.1 = log:0\n", &map).is_err());
    }
}
