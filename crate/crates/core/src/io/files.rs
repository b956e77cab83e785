//! `.smf` manifold files and pullback files.
//!
//! Both are flat `key = value` text grouped under `[section]` headers, with
//! `#` starting a comment. Canonical output uses LF line endings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::geometry::{manifold_from_transition, SuperManifoldData};
use crate::grassmann::{ChartId, PullbackData, SuperFunction};
use crate::{Error, Result};

use super::expr::{parse_superfunction, print_superfunction};

struct Entry {
    line: usize,
    value: String,
}

type Sections = BTreeMap<String, BTreeMap<String, Entry>>;

fn split_sections(text: &str) -> Result<Sections> {
    let mut out: Sections = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| Error::Format(format!("line {line}: unterminated section header")))?
                .trim()
                .to_string();
            if out.contains_key(&name) {
                return Err(Error::Format(format!("line {line}: section [{name}] repeated")));
            }
            out.insert(name.clone(), BTreeMap::new());
            current = Some(name);
            continue;
        }
        let section = current
            .as_ref()
            .ok_or_else(|| Error::Format(format!("line {line}: entry before any section")))?;
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("line {line}: expected 'key = value'")))?;
        let key = key.trim().to_string();
        let entries = out.get_mut(section).expect("section inserted");
        if entries.contains_key(&key) {
            return Err(Error::Format(format!("line {line}: key '{key}' repeated")));
        }
        entries.insert(
            key,
            Entry {
                line,
                value: value.trim().to_string(),
            },
        );
    }
    Ok(out)
}

fn take_section(s: &mut Sections, name: &str) -> Result<BTreeMap<String, Entry>> {
    s.remove(name)
        .ok_or_else(|| Error::Format(format!("missing [{name}] section")))
}

fn reject_leftovers(section: &str, entries: &BTreeMap<String, Entry>) -> Result<()> {
    match entries.iter().next() {
        Some((k, e)) => Err(Error::Format(format!(
            "line {}: unknown key '{k}' in [{section}]",
            e.line
        ))),
        None => Ok(()),
    }
}

fn parse_count(e: &Entry, key: &str) -> Result<usize> {
    e.value
        .parse()
        .map_err(|_| Error::Format(format!("line {}: {key} must be a non-negative integer", e.line)))
}

/// Parses an expression, keeping the error kind but naming the line.
fn parse_entry(e: &Entry, n: usize) -> Result<SuperFunction> {
    parse_superfunction(&e.value, n).map_err(|err| match err {
        Error::Syntax { pos, msg } => Error::Syntax {
            pos,
            msg: format!("line {}: {msg}", e.line),
        },
        other => other,
    })
}

/// Reads `even` and `odd1..oddn` from one section; returns the chart-0 images.
fn read_images(
    entries: &mut BTreeMap<String, Entry>,
    section: &str,
    even: &str,
    odd: &str,
    n: usize,
) -> Result<(SuperFunction, Vec<SuperFunction>)> {
    let e = entries
        .remove(even)
        .ok_or_else(|| Error::Format(format!("[{section}] needs '{even}'")))?;
    let even_img = parse_entry(&e, n)?;
    let odd_imgs = (1..=n)
        .map(|j| {
            let key = format!("{odd}{j}");
            let e = entries
                .remove(&key)
                .ok_or_else(|| Error::Format(format!("[{section}] needs '{key}'")))?;
            parse_entry(&e, n)
        })
        .collect::<Result<Vec<_>>>()?;
    reject_leftovers(section, entries)?;
    Ok((even_img, odd_imgs))
}

/// Parses a `.smf` file and validates the transition.
pub fn parse_manifold_file(text: &str) -> Result<SuperManifoldData> {
    let mut s = split_sections(text)?;
    let mut head = take_section(&mut s, "manifold")?;
    let name = head
        .remove("name")
        .map(|e| e.value)
        .ok_or_else(|| Error::Format("[manifold] needs 'name'".into()))?;
    let n = match head.remove("odd_dim") {
        Some(e) => parse_count(&e, "odd_dim")?,
        None => return Err(Error::Format("[manifold] needs 'odd_dim'".into())),
    };
    let even_dim = match head.remove("even_dim") {
        Some(e) => match parse_count(&e, "even_dim")? {
            d @ (0 | 1) => d,
            _ => return Err(Error::Format(format!("line {}: even_dim must be 0 or 1", e.line))),
        },
        None => 1,
    };
    reject_leftovers("manifold", &head)?;

    let manifold = if even_dim == 0 {
        if s.contains_key("transition") {
            return Err(Error::Format("an even_dim = 0 manifold has no [transition]".into()));
        }
        SuperManifoldData::odd_point(name, n)
    } else {
        let mut tr = take_section(&mut s, "transition")?;
        let (w, etas) = read_images(&mut tr, "transition", "w", "eta", n)?;
        let chi = PullbackData::new(ChartId::Zero, ChartId::One, w, etas)?;
        manifold_from_transition(name, n, chi)?
    };
    if let Some(extra) = s.keys().next() {
        return Err(Error::Format(format!("unknown section [{extra}]")));
    }
    Ok(manifold)
}

/// Canonical `.smf` text.
pub fn write_manifold_file(m: &SuperManifoldData) -> String {
    let mut out = String::new();
    writeln!(out, "[manifold]").unwrap();
    writeln!(out, "name = {}", m.name()).unwrap();
    if m.is_odd_point() {
        writeln!(out, "even_dim = 0").unwrap();
    }
    writeln!(out, "odd_dim = {}", m.odd_dim()).unwrap();
    if let Some(chi) = m.transition() {
        writeln!(out, "\n[transition]").unwrap();
        writeln!(out, "w = {}", print_superfunction(chi.even_image())).unwrap();
        for (j, f) in chi.odd_images().iter().enumerate() {
            writeln!(out, "eta{} = {}", j + 1, print_superfunction(f)).unwrap();
        }
    }
    out
}

/// Parses a pullback file: a chart-0 self-map given by the images of
/// `z, t1..tn`. The odd dimension is the number of `t` entries.
pub fn parse_pullback_file(text: &str) -> Result<PullbackData> {
    let mut s = split_sections(text)?;
    let mut pb = take_section(&mut s, "pullback")?;
    if let Some(extra) = s.keys().next() {
        return Err(Error::Format(format!("unknown section [{extra}]")));
    }
    let n = pb.keys().filter(|k| k.starts_with('t')).count();
    let (z, ts) = read_images(&mut pb, "pullback", "z", "t", n)?;
    PullbackData::new(ChartId::Zero, ChartId::Zero, z, ts)
}

/// Canonical pullback text. Images are printed in chart-0 variables.
pub fn write_pullback_file(p: &PullbackData) -> String {
    let mut out = String::from("[pullback]\n");
    let show = |f: &SuperFunction| print_superfunction(&f.relabel(ChartId::Zero));
    writeln!(out, "z = {}", show(p.even_image())).unwrap();
    for (j, f) in p.odd_images().iter().enumerate() {
        writeln!(out, "t{} = {}", j + 1, show(f)).unwrap();
    }
    out
}
