//! Text forms of groups and elements.
//!
//! Group specs: `F:r`, `Zr:r`, `C:q`, `P3`, `S:r,d`, `W:A~B`. Wreath
//! components are written `Z`, `Z^r`, `Zq`, `P3`, `S(r,d)` or `F(r)`.
//!
//! Element literals: words as `x1 X2` or `x1X2`, vectors as `(a,b)` (a bare
//! integer for rank 1), residues as integers, permutations in cycle
//! notation, wreath elements as
//! `{"base":"<B literal>","lamps":[{"at":"<B literal>","val":"<A literal>"}]}`.
//! Normal forms of `S_{r,d}`, `d >= 2`, use the wreath JSON over `Z^r ≀ S_{r,d-1}`
//! with nested objects in place of `S_{r,d-1}` literals.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::magnus::{normal_form_group, solvable_quotient, SolvableElement};
use crate::perm3::Perm3;
use crate::word::ReducedWord;
use crate::wreath::WreathElement;

fn parse_count(text: &str, what: &str) -> Result<usize> {
    let n: usize = text
        .trim()
        .parse()
        .map_err(|_| Error::input(format!("bad {what} `{text}`")))?;
    if n == 0 {
        return Err(Error::input(format!("{what} must be positive")));
    }
    Ok(n)
}

fn parse_pair(text: &str) -> Result<(usize, usize)> {
    let (r, d) = text
        .split_once(',')
        .ok_or_else(|| Error::input(format!("expected `r,d`, got `{text}`")))?;
    Ok((parse_count(r, "rank")?, parse_count(d, "derived length")?))
}

/// Parses a group spec such as `S:2,2` or `W:Z2~Z`.
pub fn parse_group(spec: &str) -> Result<Group> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("W:") {
        let (a, b) = rest
            .split_once('~')
            .ok_or_else(|| Error::input(format!("wreath spec `{spec}` needs `A~B`")))?;
        return Ok(Group::wreath(parse_component(a)?, parse_component(b)?));
    }
    if let Some(rest) = spec.strip_prefix("S:") {
        let (r, d) = parse_pair(rest)?;
        return Ok(Group::free_solvable(r, d));
    }
    if let Some(rest) = spec.strip_prefix("Zr:") {
        return Ok(Group::FreeAbelian(parse_count(rest, "rank")?));
    }
    if let Some(rest) = spec.strip_prefix("C:") {
        return Ok(Group::Cyclic(parse_count(rest, "order")? as u64));
    }
    if let Some(rest) = spec.strip_prefix("F:") {
        return Ok(Group::Free(parse_count(rest, "rank")?));
    }
    parse_component(spec).map_err(|_| Error::input(format!("unknown group spec `{spec}`")))
}

fn parse_component(text: &str) -> Result<Group> {
    let text = text.trim();
    if text == "P3" {
        return Ok(Group::Perm3);
    }
    if text == "Z" {
        return Ok(Group::FreeAbelian(1));
    }
    if let Some(r) = text.strip_prefix("Z^") {
        return Ok(Group::FreeAbelian(parse_count(r, "rank")?));
    }
    if let Some(inner) = text.strip_prefix("S(").and_then(|t| t.strip_suffix(')')) {
        let (r, d) = parse_pair(inner)?;
        return Ok(Group::free_solvable(r, d));
    }
    if let Some(inner) = text.strip_prefix("F(").and_then(|t| t.strip_suffix(')')) {
        return Ok(Group::Free(parse_count(inner, "rank")?));
    }
    if let Some(q) = text.strip_prefix('Z') {
        return Ok(Group::Cyclic(parse_count(q, "order")? as u64));
    }
    if ["S:", "Zr:", "C:", "F:"].iter().any(|p| text.starts_with(p)) {
        return parse_group(text);
    }
    Err(Error::input(format!("unknown group component `{text}`")))
}

fn format_vector(v: &[i64]) -> String {
    if v.len() == 1 {
        return v[0].to_string();
    }
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn parse_vector(rank: usize, text: &str) -> Result<Vec<i64>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .or_else(|| t.strip_prefix('[').and_then(|t| t.strip_suffix(']')))
        .unwrap_or(t);
    let v: Vec<i64> = inner
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::input(format!("bad integer vector `{text}`")))?;
    if v.len() != rank {
        return Err(Error::input(format!(
            "vector `{text}` has {} entries, expected {rank}",
            v.len()
        )));
    }
    Ok(v)
}

/// The literal of `e` in `group`.
pub fn format_element(group: &Group, e: &Element) -> String {
    match e {
        Element::Word(w) => w.to_string(),
        Element::Vector(v) => format_vector(v),
        Element::Residue(x) => x.to_string(),
        Element::Perm(p) => p.to_string(),
        Element::Solvable(s) => s.word().to_string(),
        Element::Wreath(_) => element_json(group, e).to_string(),
    }
}

/// The literal used inside ring text forms: words are written compactly.
pub(crate) fn term_literal(group: &Group, e: &Element) -> String {
    match e {
        Element::Word(w) => w.compact(),
        Element::Solvable(s) => s.word().compact(),
        _ => format_element(group, e),
    }
}

#[derive(Serialize, Deserialize)]
struct LampJson {
    at: Value,
    val: Value,
}

#[derive(Serialize, Deserialize)]
struct WreathJson {
    base: Value,
    lamps: Vec<LampJson>,
}

/// JSON form of an element: wreath elements become objects, everything
/// else its literal string.
pub fn element_json(group: &Group, e: &Element) -> Value {
    match (group, e) {
        (Group::Wreath { top, base }, Element::Wreath(w)) => wreath_json(top, base, w, &|g, x| {
            Value::String(format_element(g, x))
        }),
        _ => Value::String(format_element(group, e)),
    }
}

fn wreath_json(
    top: &Group,
    base: &Group,
    w: &WreathElement,
    key: &dyn Fn(&Group, &Element) -> Value,
) -> Value {
    let lamps = w
        .lamps
        .iter()
        .map(|(at, val)| LampJson {
            at: key(base, at),
            val: element_json(top, val),
        })
        .collect();
    serde_json::to_value(WreathJson {
        base: key(base, &w.cursor),
        lamps,
    })
    .expect("plain data serializes")
}

/// The normal form of an element of `S_{r,d}` as JSON: a vector literal for
/// `d = 1`, otherwise nested wreath JSON.
pub fn normal_form_json(s: &SolvableElement) -> Value {
    nf_value(s.rank(), s.depth(), s.normal_form())
}

fn nf_value(rank: usize, depth: usize, nf: &Element) -> Value {
    if depth == 1 {
        return Value::String(format_vector(nf.as_vector().expect("depth-1 normal form")));
    }
    let w = nf.as_wreath().expect("normal form of depth >= 2");
    let base = solvable_quotient(rank, depth - 1);
    wreath_json(&Group::FreeAbelian(rank), &base, w, &|_, x| match x {
        Element::Solvable(s) => nf_value(rank, depth - 1, s.normal_form()),
        other => Value::String(format_element(&Group::FreeAbelian(rank), other)),
    })
}

fn parse_nf_value(rank: usize, depth: usize, value: &Value) -> Result<SolvableElement> {
    let nf = if depth == 1 {
        let text = value
            .as_str()
            .ok_or_else(|| Error::input("expected a vector literal"))?;
        Element::Vector(parse_vector(rank, text)?)
    } else {
        let base = solvable_quotient(rank, depth - 1);
        let parsed: WreathJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::input(format!("bad normal form JSON: {e}")))?;
        let key = |v: &Value| -> Result<Element> {
            match (&base, v) {
                (Group::FreeSolvable { .. }, Value::Object(_)) => {
                    Ok(Element::solvable(parse_nf_value(rank, depth - 1, v)?))
                }
                (_, _) => parse_value(&base, v),
            }
        };
        let top = Group::FreeAbelian(rank);
        let entries = parsed
            .lamps
            .iter()
            .map(|l| Ok((key(&l.at)?, parse_value(&top, &l.val)?)))
            .collect::<Result<Vec<_>>>()?;
        let w = strict_entries(&top, &base, entries, key(&parsed.base)?)?;
        Element::wreath(w)
    };
    normal_form_group(rank, depth).check(&nf)?;
    SolvableElement::from_normal_form(rank, depth, nf)
}

fn strict_entries(top: &Group, base: &Group, entries: Vec<(Element, Element)>, cursor: Element) -> Result<WreathElement> {
    let n = entries.len();
    let mut keys: Vec<&Element> = entries.iter().map(|(k, _)| k).collect();
    keys.sort();
    keys.dedup();
    if keys.len() != n {
        return Err(Error::input("wreath literal repeats a lamp position"));
    }
    WreathElement::from_entries(top, base, entries, cursor)
}

fn parse_value(group: &Group, value: &Value) -> Result<Element> {
    match value {
        Value::String(s) => parse_element(group, s),
        Value::Number(n) => parse_element(group, &n.to_string()),
        Value::Object(_) => match group {
            Group::Wreath { top, base } => {
                let parsed: WreathJson = serde_json::from_value(value.clone())
                    .map_err(|e| Error::input(format!("bad wreath JSON: {e}")))?;
                let entries = parsed
                    .lamps
                    .iter()
                    .map(|l| Ok((parse_value(base, &l.at)?, parse_value(top, &l.val)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Element::wreath(strict_entries(top, base, entries, parse_value(base, &parsed.base)?)?))
            }
            Group::FreeSolvable { rank, depth } if *depth >= 2 => {
                Ok(Element::solvable(parse_nf_value(*rank, *depth, value)?))
            }
            _ => Err(Error::input(format!("JSON object is not an element of {group}"))),
        },
        Value::Array(items) => {
            let text: Vec<String> = items.iter().map(|v| v.to_string()).collect();
            parse_element(group, &format!("({})", text.join(",")))
        }
        _ => Err(Error::input(format!("`{value}` is not an element of {group}"))),
    }
}

/// Parses an element literal of `group`.
pub fn parse_element(group: &Group, text: &str) -> Result<Element> {
    let t = text.trim();
    match group {
        Group::Free(r) => Ok(Element::Word(ReducedWord::parse(*r, t)?)),
        Group::FreeAbelian(r) => Ok(Element::Vector(parse_vector(*r, t)?)),
        Group::Cyclic(q) => {
            let x: i64 = t
                .parse()
                .map_err(|_| Error::input(format!("bad residue `{t}`")))?;
            Ok(Element::Residue(x.rem_euclid(*q as i64) as u64))
        }
        Group::Perm3 => Ok(Element::Perm(Perm3::parse(t)?)),
        Group::FreeSolvable { rank, depth } => {
            if t.starts_with('{') {
                let value: Value = serde_json::from_str(t)
                    .map_err(|e| Error::input(format!("bad JSON: {e}")))?;
                return parse_value(group, &value);
            }
            if t.starts_with('(') || t.starts_with('[') {
                if *depth != 1 {
                    return Err(Error::input(format!("vector literal is not an element of {group}")));
                }
                let v = parse_vector(*rank, t)?;
                return Ok(Element::solvable(SolvableElement::from_normal_form(*rank, 1, Element::Vector(v))?));
            }
            group.project_word(&ReducedWord::parse(*rank, t)?)
        }
        Group::Wreath { .. } => {
            let value: Value = serde_json::from_str(t)
                .map_err(|e| Error::input(format!("bad wreath JSON: {e}")))?;
            parse_value(group, &value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_specs() {
        assert_eq!(parse_group("S:2,2").unwrap(), Group::free_solvable(2, 2));
        assert_eq!(
            parse_group("W:Z2~Z").unwrap(),
            Group::wreath(Group::Cyclic(2), Group::FreeAbelian(1))
        );
        assert_eq!(
            parse_group("W:Z2~Z^2").unwrap(),
            Group::wreath(Group::Cyclic(2), Group::FreeAbelian(2))
        );
        assert_eq!(parse_group("Zr:3").unwrap(), Group::FreeAbelian(3));
        assert_eq!(parse_group("C:5").unwrap(), Group::Cyclic(5));
        assert_eq!(parse_group("P3").unwrap(), Group::Perm3);
        assert_eq!(
            parse_group("W:P3~S(2,2)").unwrap(),
            Group::wreath(Group::Perm3, Group::free_solvable(2, 2))
        );
        for bad in ["", "Q", "S:2", "S:0,1", "W:Z2", "C:x", "Q:7", "W:Z2~Q:1"] {
            assert!(parse_group(bad).is_err(), "{bad}");
        }
        for spec in ["S:2,2", "W:Z2~Z", "Zr:3", "C:5", "P3", "F:2", "W:P3~S(2,3)"] {
            assert_eq!(parse_group(&parse_group(spec).unwrap().to_string()).unwrap(), parse_group(spec).unwrap());
        }
    }

    #[test]
    fn wreath_literal_round_trip() {
        let g = parse_group("W:Z2~Z").unwrap();
        let text = r#"{"base":"1","lamps":[{"at":"3","val":"1"},{"at":"0","val":"1"}]}"#;
        let e = parse_element(&g, text).unwrap();
        let out = format_element(&g, &e);
        assert_eq!(out, r#"{"base":"1","lamps":[{"at":"0","val":"1"},{"at":"3","val":"1"}]}"#);
        assert_eq!(parse_element(&g, &out).unwrap(), e);
        let dup = r#"{"base":"0","lamps":[{"at":"0","val":"1"},{"at":"0","val":"1"}]}"#;
        assert!(parse_element(&g, dup).is_err());
    }

    #[test]
    fn element_round_trips() {
        let cases = [
            ("F:2", "x1 X2 x2"),
            ("Zr:2", "(3,-2)"),
            ("Zr:1", "-4"),
            ("C:5", "7"),
            ("P3", "(1 2)(1 3)"),
            ("S:2,2", "x1 x2 X1"),
            ("S:2,1", "(1,0)"),
        ];
        for (spec, text) in cases {
            let g = parse_group(spec).unwrap();
            let e = parse_element(&g, text).unwrap();
            let back = parse_element(&g, &format_element(&g, &e)).unwrap();
            assert_eq!(back, e, "{spec} {text}");
        }
    }

    #[test]
    fn normal_form_json_round_trip() {
        for (depth, word) in [(2, "x1 x2 X1 X2"), (3, "x1 x2 X1 X2 x2"), (2, "e")] {
            let g = Group::free_solvable(2, depth);
            let e = parse_element(&g, word).unwrap();
            let json = normal_form_json(e.as_solvable().unwrap()).to_string();
            let back = parse_element(&g, &json).unwrap();
            assert_eq!(back, e, "{json}");
        }
        let g = Group::free_solvable(2, 2);
        let id = normal_form_json(parse_element(&g, "x1 X1").unwrap().as_solvable().unwrap());
        assert_eq!(id.to_string(), r#"{"base":"(0,0)","lamps":[]}"#);
    }
}
