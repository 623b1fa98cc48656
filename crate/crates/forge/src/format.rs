//! Plain-text file formats for signatures, algebras and translations, plus
//! the inline presentation / deduction syntax used on the command line.
//!
//! All formats are line-based; blank lines and lines starting with `#` are
//! ignored.
//!
//! Signature file:
//! ```text
//! signature DL01        # optional name, defaults to the file stem
//! op meet 2
//! op join 2
//! op bot 0
//! op top 0
//! ```
//!
//! Algebra file: a signature block followed by the universe size and one
//! row-major table per operation (first argument most significant):
//! ```text
//! op meet 2
//! op bot 0
//! size 2
//! table meet 0 0 0 1
//! table bot 0
//! ```
//!
//! Translation file:
//! ```text
//! kappa 2
//! source KA             # catalog class name
//! target DL01
//! context meet(x0, x1) = bot
//! map neg := x1, x0
//! map meet := meet(x0, x2), join(x1, x3)
//! ...
//! ```
//! Argument `m`, coordinate `i` of a map image is written `x<m·κ+i>`.
//!
//! Presentation string (command line): `"<generators>; <eq>; <eq>; ..."`,
//! e.g. `"2; meet(x0, x1) = bot"`. A deduction string is
//! `"<vars>; <premise>; ... |- <conclusion>"`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use forge_core::classes::Presentation;
use forge_core::finalg::FiniteAlgebra;
use forge_core::terms::{parse_equation, parse_term, Equation, Signature, Term};
use forge_core::xlate::{ContextualTranslation, Deduction, Translation};

use crate::catalog;

fn logical_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn fail<T>(line: usize, msg: impl Into<String>) -> Result<T, String> {
    Err(format!("line {line}: {}", msg.into()))
}

/// Parses the `signature`/`op` lines of `text`; returns the signature and the
/// remaining lines.
fn parse_signature_block<'a>(
    text: &'a str,
    default_name: &str,
) -> Result<(Signature, Vec<(usize, &'a str)>), String> {
    let mut name = default_name.to_string();
    let mut ops: Vec<(String, usize)> = Vec::new();
    let mut rest = Vec::new();
    for (ln, line) in logical_lines(text) {
        let mut words = line.split_whitespace();
        match words.next() {
            Some("signature") => match words.next() {
                Some(n) if words.next().is_none() => name = n.to_string(),
                _ => return fail(ln, "expected: signature <name>"),
            },
            Some("op") => {
                let (Some(op), Some(arity), None) = (words.next(), words.next(), words.next())
                else {
                    return fail(ln, "expected: op <name> <arity>");
                };
                let arity: usize = arity
                    .parse()
                    .map_err(|_| format!("line {ln}: arity must be a number"))?;
                ops.push((op.to_string(), arity));
            }
            _ => rest.push((ln, line)),
        }
    }
    let sig = Signature::new(name, ops).map_err(|e| e.to_string())?;
    Ok((sig, rest))
}

pub fn parse_signature(text: &str, default_name: &str) -> Result<Signature, String> {
    let (sig, rest) = parse_signature_block(text, default_name)?;
    if let Some((ln, _)) = rest.first() {
        return fail(*ln, "unexpected line in a signature file");
    }
    Ok(sig)
}

pub fn parse_algebra(text: &str, default_name: &str) -> Result<FiniteAlgebra, String> {
    let (sig, rest) = parse_signature_block(text, default_name)?;
    let mut size: Option<usize> = None;
    let mut tables: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (ln, line) in rest {
        let mut words = line.split_whitespace();
        match words.next() {
            Some("size") => {
                let (Some(n), None) = (words.next(), words.next()) else {
                    return fail(ln, "expected: size <n>");
                };
                size = Some(n.parse().map_err(|_| format!("line {ln}: bad size"))?);
            }
            Some("table") => {
                let Some(op) = words.next() else {
                    return fail(ln, "expected: table <op> <entries...>");
                };
                let mut entries = Vec::new();
                for w in words {
                    entries.push(
                        w.parse()
                            .map_err(|_| format!("line {ln}: bad table entry {w:?}"))?,
                    );
                }
                if tables.insert(op.to_string(), entries).is_some() {
                    return fail(ln, format!("duplicate table for {op}"));
                }
            }
            Some(other) => return fail(ln, format!("unknown directive {other:?}")),
            None => unreachable!(),
        }
    }
    let Some(size) = size else {
        return Err("missing `size` line".into());
    };
    FiniteAlgebra::new(sig, size, tables).map_err(|e| e.to_string())
}

pub fn render_algebra(a: &FiniteAlgebra) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "signature {}", a.signature().name());
    for (op, arity) in a.signature().ops() {
        let _ = writeln!(out, "op {op} {arity}");
    }
    let _ = writeln!(out, "size {}", a.size());
    for (op, _) in a.signature().ops() {
        let _ = write!(out, "table {op}");
        for &e in a.table(op).expect("total algebra") {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    out
}

/// Resolves a signature reference: a catalog class name, else a file path.
fn resolve_signature(reference: &str) -> Result<Signature, String> {
    if let Some(c) = catalog::class(reference) {
        return Ok(c.signature().clone());
    }
    let text = std::fs::read_to_string(reference)
        .map_err(|e| format!("no catalog class and no readable file {reference:?}: {e}"))?;
    parse_signature(&text, reference)
}

/// A parsed translation file: the translation plus the `source`/`target`
/// references as written (catalog class names or signature file paths).
pub struct TranslationFile {
    pub ct: ContextualTranslation,
    pub source: String,
    pub target: String,
}

pub fn parse_translation(text: &str) -> Result<TranslationFile, String> {
    let mut kappa: Option<usize> = None;
    let mut source: Option<(String, Signature)> = None;
    let mut target: Option<(String, Signature)> = None;
    let mut context_texts: Vec<(usize, String)> = Vec::new();
    let mut map_texts: Vec<(usize, String, String)> = Vec::new();
    for (ln, line) in logical_lines(text) {
        let (head, tail) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let tail = tail.trim();
        match head {
            "kappa" => {
                kappa = Some(tail.parse().map_err(|_| format!("line {ln}: bad kappa"))?)
            }
            "source" => {
                let sig = resolve_signature(tail).map_err(|e| format!("line {ln}: {e}"))?;
                source = Some((tail.to_string(), sig));
            }
            "target" => {
                let sig = resolve_signature(tail).map_err(|e| format!("line {ln}: {e}"))?;
                target = Some((tail.to_string(), sig));
            }
            "context" => context_texts.push((ln, tail.to_string())),
            "map" => {
                let Some((name, images)) = tail.split_once(":=") else {
                    return fail(ln, "expected: map <op> := <term>, <term>, ...");
                };
                map_texts.push((ln, name.trim().to_string(), images.trim().to_string()));
            }
            other => return fail(ln, format!("unknown directive {other:?}")),
        }
    }
    let kappa = kappa.ok_or("missing `kappa` line")?;
    let (source_name, source) = source.ok_or("missing `source` line")?;
    let (target_name, target) = target.ok_or("missing `target` line")?;

    let mut images: BTreeMap<String, Vec<Term>> = BTreeMap::new();
    for (ln, name, image_text) in map_texts {
        let mut tuple = Vec::new();
        for part in split_top_level(&image_text, ',') {
            tuple.push(
                parse_term(part.trim(), &target)
                    .map_err(|e| format!("line {ln}: {e}"))?,
            );
        }
        images.insert(name, tuple);
    }
    let tau =
        Translation::new(kappa, source, target.clone(), images).map_err(|e| e.to_string())?;
    let mut context = Vec::new();
    for (ln, t) in context_texts {
        context.push(parse_equation(&t, &target).map_err(|e| format!("line {ln}: {e}"))?);
    }
    let ct = ContextualTranslation::new(tau, context).map_err(|e| e.to_string())?;
    Ok(TranslationFile { ct, source: source_name, target: target_name })
}

/// Splits on `sep` occurrences that are not nested inside parentheses.
fn split_top_level(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            c if c == sep && depth == 0 => {
                parts.push(&text[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

pub fn render_translation(ct: &ContextualTranslation, source: &str, target: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kappa {}", ct.kappa());
    let _ = writeln!(out, "source {source}");
    let _ = writeln!(out, "target {target}");
    for e in &ct.context {
        let _ = writeln!(out, "context {e}");
    }
    for (op, _) in ct.tau.source_sig().ops() {
        let tuple = ct.tau.image(op).expect("total translation");
        let images: Vec<String> = tuple.iter().map(|t| t.to_string()).collect();
        let _ = writeln!(out, "map {op} := {}", images.join(", "));
    }
    out
}

/// Parses `"<generators>; <eq>; <eq>; ..."`. A trailing `;` (or none at all
/// after the count) gives a relation-free presentation.
pub fn parse_presentation(text: &str, sig: &Signature) -> Result<Presentation, String> {
    let mut parts = text.split(';');
    let lambda: usize = parts
        .next()
        .unwrap_or("")
        .trim()
        .parse()
        .map_err(|_| "presentation must start with the generator count".to_string())?;
    let mut relations = Vec::new();
    for part in parts {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        relations.push(parse_equation(part, sig).map_err(|e| e.to_string())?);
    }
    Presentation::new(lambda, relations).map_err(|e| e.to_string())
}

/// Parses `"<vars>; <premise>; ... |- <conclusion>"`; premises may be absent.
pub fn parse_deduction(text: &str, sig: &Signature) -> Result<Deduction, String> {
    let (front, conclusion_text) = match text.rsplit_once("|-") {
        Some((f, c)) => (f, c),
        None => {
            let Some((n, c)) = text.split_once(';') else {
                return Err("expected \"<vars>; [premises |-] conclusion\"".to_string());
            };
            (n, c)
        }
    };
    let mut parts = front.split(';');
    let num_vars: usize = parts
        .next()
        .unwrap_or("")
        .trim()
        .parse()
        .map_err(|_| "deduction must start with the variable count".to_string())?;
    let mut premises = Vec::new();
    for part in parts {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        premises.push(parse_equation(part, sig).map_err(|e| e.to_string())?);
    }
    let conclusion: Equation =
        parse_equation(conclusion_text.trim(), sig).map_err(|e| e.to_string())?;
    Deduction::new(num_vars, premises, conclusion).map_err(|e| e.to_string())
}
