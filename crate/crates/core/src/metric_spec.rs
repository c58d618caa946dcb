//! Text format for metric fields.
//!
//! A spec is a list of `key: value` items separated by newlines or `;`.
//! Item order does not matter. `#` starts a comment. Named sub-specs are
//! introduced by `[name]` headers and combined with `sum`, `product` and
//! `scale`; the root is the section named `main`, or the unnamed leading
//! section when there is no `main`.
//!
//! ```text
//! [g]
//! builtin: poincare_disk
//! c: 1
//! [h]
//! conformal: exp(x_1)
//! domain: ball 0.9
//! [main]
//! sum: g, h
//! ```
//!
//! Keys:
//!
//! | key         | value                                                   |
//! |-------------|---------------------------------------------------------|
//! | `builtin`   | `euclidean`, `poincare_disk`, `complex_ball`, `fubini_study_chart`, `exp_quadratic` |
//! | `potential` | real expression (see [`crate::expr`]); metric `∂_i∂̄_j φ` |
//! | `conformal` | real expression `λ`; metric `λ·I_n`                     |
//! | `matrix`    | rows separated by `;`, entries by `,`                   |
//! | `sum`       | `a, b`: names of two sections                           |
//! | `product`   | `a, b`                                                  |
//! | `scale`     | `a`, with factor `c`                                    |
//! | `n`         | complex dimension                                       |
//! | `c`         | positive parameter (`poincare_disk`, `scale`)           |
//! | `coeffs`    | six reals for `exp_quadratic`                           |
//! | `domain`    | `whole`, `ball R` or `polydisk R`                       |
//! | `center`    | domain center, complex list `0.1+0.2i,0-1i`             |
//! | `step`      | finite-difference step                                  |
//! | `jets`      | `exact` or `finite_difference`                          |
//!
//! Inside a single line, `;` only ends an item when the next piece starts
//! with `key:` or `[`, so `matrix: 1, 0; 0, 1` is one item. A line that does
//! not start with `key:` continues the previous item.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, ParseError, Result};
use crate::expr::Expr;
use crate::field::{builtin, Backend, BuiltinParams, Domain, MetricField, DEFAULT_STEP};
use crate::point::{format_complex_list, parse_complex_list};

const KINDS: &[&str] = &["builtin", "potential", "conformal", "matrix", "sum", "product", "scale"];
const KEYS: &[&str] = &[
    "builtin", "potential", "conformal", "matrix", "sum", "product", "scale", "n", "c", "coeffs",
    "domain", "center", "step", "jets",
];

#[derive(Debug, Clone)]
struct Value {
    text: String,
    /// `(offset in text, line, column)` of each joined piece.
    pieces: Vec<(usize, usize, usize)>,
}

impl Value {
    fn locate(&self, offset: usize) -> (usize, usize) {
        let &(start, line, col) = self
            .pieces
            .iter()
            .rev()
            .find(|(start, _, _)| *start <= offset)
            .unwrap_or(&self.pieces[0]);
        (line, col + (offset - start))
    }

    fn error(&self, offset: usize, message: impl Into<String>) -> ParseError {
        let (line, col) = self.locate(offset);
        ParseError::new(line, col, message)
    }

    fn trimmed(&self) -> &str {
        self.text.trim()
    }
}

#[derive(Debug, Clone)]
struct Item {
    key: String,
    line: usize,
    col: usize,
    value: Value,
}

#[derive(Debug, Default)]
struct Section {
    line: usize,
    col: usize,
    items: BTreeMap<String, Item>,
}

fn is_key_start(piece: &str) -> Option<(String, usize)> {
    let trimmed = piece.trim_start();
    let lead = piece.len() - trimmed.len();
    let ident_len = trimmed
        .char_indices()
        .take_while(|&(i, c)| c == '_' || c.is_ascii_alphabetic() || (i > 0 && c.is_ascii_digit()))
        .count();
    if ident_len == 0 {
        return None;
    }
    let rest = trimmed[ident_len..].trim_start();
    if rest.starts_with(':') {
        Some((trimmed[..ident_len].to_string(), lead))
    } else {
        None
    }
}

fn split_sections(text: &str) -> std::result::Result<Vec<(Option<String>, Section)>, ParseError> {
    let mut sections: Vec<(Option<String>, Section)> = vec![(None, Section { line: 1, col: 1, ..Default::default() })];
    let mut last: Option<(usize, String)> = None;
    // a line ending in `;` continues the item as a new row
    let mut dangling_semicolon = false;
    for (line_idx, raw_line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let line = raw_line.split('#').next().unwrap_or("");
        // pieces of the line split at ';', with their char columns
        let mut pieces: Vec<(usize, String)> = Vec::new();
        let mut current = String::new();
        let mut start_col = 1;
        for (col, ch) in (1..).zip(line.chars()) {
            if ch == ';' {
                pieces.push((start_col, std::mem::take(&mut current)));
                start_col = col + 1;
            } else {
                current.push(ch);
            }
        }
        pieces.push((start_col, current));

        let mut first_piece = true;
        let mut queue: std::collections::VecDeque<(usize, String)> = pieces.into();
        while let Some((pcol, piece)) = queue.pop_front() {
            let trimmed = piece.trim_start();
            let lead = piece.chars().count() - trimmed.chars().count();
            if trimmed.starts_with('[') {
                let Some(close) = trimmed.find(']') else {
                    return Err(ParseError::new(line_no, pcol + lead, "unterminated section header")
                        .expecting(&["`]`"]));
                };
                let name = trimmed[1..close].trim().to_string();
                if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(ParseError::new(line_no, pcol + lead + 1, "invalid section name")
                        .expecting(&["identifier"]));
                }
                if sections.iter().any(|(n, _)| n.as_deref() == Some(name.as_str())) {
                    return Err(ParseError::new(line_no, pcol + lead, format!("duplicate section `{name}`")));
                }
                sections.push((Some(name), Section { line: line_no, col: pcol + lead, ..Default::default() }));
                last = None;
                dangling_semicolon = false;
                let rest = &trimmed[close + 1..];
                let rest_col = pcol + lead + trimmed[..close + 1].chars().count();
                if !rest.trim().is_empty() {
                    queue.push_front((rest_col, rest.to_string()));
                }
                first_piece = false;
                continue;
            }
            if let Some((key, klead)) = is_key_start(&piece) {
                let colon = piece.find(':').expect("key pattern has a colon");
                let value_text = piece[colon + 1..].to_string();
                let value_col = pcol + piece[..colon + 1].chars().count();
                let key_col = pcol + klead;
                if !KEYS.contains(&key.as_str()) {
                    return Err(ParseError::new(line_no, key_col, format!("unknown key `{key}`")).expecting(KEYS));
                }
                let section = &mut sections.last_mut().expect("root section exists").1;
                if section.items.contains_key(&key) {
                    return Err(ParseError::new(line_no, key_col, format!("duplicate key `{key}`")));
                }
                section.items.insert(
                    key.clone(),
                    Item {
                        key: key.clone(),
                        line: line_no,
                        col: key_col,
                        value: Value {
                            text: value_text,
                            pieces: vec![(0, line_no, value_col)],
                        },
                    },
                );
                last = Some((sections.len() - 1, key));
                dangling_semicolon = false;
            } else if piece.trim().is_empty() {
                if !first_piece {
                    dangling_semicolon = true;
                }
            } else {
                let Some((sec, key)) = last.clone() else {
                    return Err(ParseError::new(line_no, pcol + lead, format!("unexpected `{}`", trimmed.trim_end()))
                        .expecting(&["key: value", "[section]"]));
                };
                let item = sections[sec].1.items.get_mut(&key).expect("last item exists");
                item.value.text.push(if first_piece && !dangling_semicolon { ' ' } else { ';' });
                dangling_semicolon = false;
                let offset = item.value.text.chars().count();
                item.value.pieces.push((offset, line_no, pcol));
                item.value.text.push_str(&piece);
            }
            first_piece = false;
        }
    }
    Ok(sections)
}

/// Parses a metric spec into a field.
pub fn parse_metric_spec(text: &str) -> Result<MetricField> {
    let sections = split_sections(text)?;
    let names: BTreeMap<String, usize> = sections
        .iter()
        .enumerate()
        .filter_map(|(i, (n, _))| n.clone().map(|n| (n, i)))
        .collect();
    let root = match names.get("main") {
        Some(&i) => i,
        None if !sections[0].1.items.is_empty() => 0,
        None => {
            let line = text.lines().count().max(1);
            return Err(ParseError::new(line, 1, "no metric defined").expecting(&["key: value", "[main]"]).into());
        }
    };
    let mut builder = Builder {
        sections: &sections,
        names: &names,
        visiting: HashSet::new(),
    };
    builder.build(root)
}

struct Builder<'a> {
    sections: &'a [(Option<String>, Section)],
    names: &'a BTreeMap<String, usize>,
    visiting: HashSet<usize>,
}

impl Builder<'_> {
    fn build(&mut self, idx: usize) -> Result<MetricField> {
        let (name, section) = &self.sections[idx];
        if !self.visiting.insert(idx) {
            return Err(ParseError::new(section.line, section.col, format!(
                "section `{}` refers to itself",
                name.as_deref().unwrap_or("")
            ))
            .into());
        }
        let kinds: Vec<&Item> = KINDS.iter().filter_map(|k| section.items.get(*k)).collect();
        let kind = match kinds.as_slice() {
            [one] => *one,
            [] => {
                return Err(ParseError::new(section.line, section.col, "section defines no metric")
                    .expecting(KINDS)
                    .into())
            }
            [_, second, ..] => {
                return Err(ParseError::new(
                    second.line,
                    second.col,
                    format!("`{}` conflicts with another metric key in the same section", second.key),
                )
                .into())
            }
        };
        let field = self.build_kind(section, kind)?;
        self.visiting.remove(&idx);
        apply_common(section, field)
    }

    fn build_kind(&mut self, section: &Section, kind: &Item) -> Result<MetricField> {
        let v = &kind.value;
        match kind.key.as_str() {
            "builtin" => {
                let name = v.trimmed();
                let allowed: &[&str] = match name {
                    "euclidean" | "complex_ball" | "fubini_study_chart" => &["n"],
                    "poincare_disk" => &["c"],
                    "exp_quadratic" => &["coeffs"],
                    "sum" | "product" | "scale" => {
                        return Err(v
                            .error(0, format!("`{name}` is written as `{name}: <sections>`"))
                            .expecting(&[name])
                            .into())
                    }
                    _ => &[],
                };
                check_allowed(section, kind, allowed)?;
                let params = BuiltinParams {
                    n: opt_usize(section, "n")?,
                    c: opt_f64(section, "c")?,
                    coeffs: opt_coeffs(section)?,
                    fields: Vec::new(),
                };
                builtin(name, &params).map_err(|e| match e {
                    Error::UnknownBuiltin { .. } => Error::Parse(
                        v.error(v.text.len() - v.text.trim_start().len(), format!("unknown builtin `{name}`"))
                            .expecting(&crate::field::CATALOG[..5]),
                    ),
                    other => other,
                })
            }
            "potential" | "conformal" => {
                check_allowed(section, kind, &["n"])?;
                let expr = parse_expr(v, 0, &v.text)?;
                let n = opt_usize(section, "n")?.unwrap_or(expr.arity().max(1));
                let domain = parse_domain(section, n)?;
                if kind.key == "potential" {
                    MetricField::potential(n, expr, domain)
                } else {
                    MetricField::conformal(n, expr, domain)
                }
            }
            "matrix" => {
                check_allowed(section, kind, &["n"])?;
                let mut entries = Vec::new();
                let mut row_len = None;
                let mut offset = 0;
                for row in v.text.split(';') {
                    let mut count = 0;
                    let mut inner = offset;
                    for entry in row.split(',') {
                        entries.push(parse_expr(v, inner, entry)?);
                        inner += entry.chars().count() + 1;
                        count += 1;
                    }
                    if *row_len.get_or_insert(count) != count {
                        return Err(v.error(offset, "matrix rows have different lengths").into());
                    }
                    offset += row.chars().count() + 1;
                }
                let rank = row_len.unwrap_or(0);
                if rank * rank != entries.len() {
                    return Err(v.error(0, format!("matrix is not square ({} rows of {rank})", entries.len() / rank.max(1))).into());
                }
                let arity = entries.iter().map(Expr::arity).max().unwrap_or(0);
                let n = opt_usize(section, "n")?.unwrap_or(rank.max(arity));
                let domain = parse_domain(section, n)?;
                MetricField::matrix(n, entries, domain)
            }
            "sum" | "product" => {
                check_allowed(section, kind, &[])?;
                let refs = self.refs(v, 2)?;
                let (a, b) = (refs[0].clone(), refs[1].clone());
                if kind.key == "sum" {
                    MetricField::sum(a, b)
                } else {
                    Ok(MetricField::product(a, b))
                }
            }
            "scale" => {
                check_allowed(section, kind, &["c"])?;
                let refs = self.refs(v, 1)?;
                let c = opt_f64(section, "c")?.ok_or_else(|| {
                    ParseError::new(kind.line, kind.col, "`scale` needs a factor").expecting(&["c"])
                })?;
                MetricField::scale(c, refs[0].clone())
            }
            _ => unreachable!("kind keys are filtered"),
        }
    }

    fn refs(&mut self, v: &Value, count: usize) -> Result<Vec<MetricField>> {
        let mut out = Vec::new();
        let mut offset = 0;
        for name in v.text.split(',') {
            let trimmed = name.trim();
            let lead = name.len() - name.trim_start().len();
            let Some(&idx) = self.names.get(trimmed) else {
                let known: Vec<&str> = self.names.keys().map(String::as_str).collect();
                return Err(v
                    .error(offset + lead, format!("undefined section `{trimmed}`"))
                    .expecting(&known)
                    .into());
            };
            out.push(self.build(idx)?);
            offset += name.chars().count() + 1;
        }
        if out.len() != count {
            return Err(v
                .error(0, format!("expected {count} section name(s), found {}", out.len()))
                .into());
        }
        Ok(out)
    }
}

fn check_allowed(section: &Section, kind: &Item, allowed: &[&str]) -> Result<()> {
    const COMMON: &[&str] = &["domain", "center", "step", "jets"];
    for item in section.items.values() {
        if item.key == kind.key || allowed.contains(&item.key.as_str()) || COMMON.contains(&item.key.as_str()) {
            continue;
        }
        return Err(ParseError::new(
            item.line,
            item.col,
            format!("key `{}` does not apply to `{}`", item.key, kind.key),
        )
        .into());
    }
    Ok(())
}

fn parse_expr(v: &Value, offset: usize, text: &str) -> Result<Expr> {
    Expr::parse(text).map_err(|e| {
        let (line, col) = v.locate(offset + e.column - 1);
        Error::Parse(ParseError { line, column: col, ..e })
    })
}

fn number_error(item: &Item, what: &str) -> Error {
    let lead = item.value.text.len() - item.value.text.trim_start().len();
    item.value
        .error(lead, format!("invalid {what} `{}`", item.value.trimmed()))
        .expecting(&[what])
        .into()
}

fn opt_f64(section: &Section, key: &str) -> Result<Option<f64>> {
    section
        .items
        .get(key)
        .map(|item| {
            item.value
                .trimmed()
                .replace('\u{2212}', "-")
                .parse::<f64>()
                .map_err(|_| number_error(item, "number"))
        })
        .transpose()
}

fn opt_usize(section: &Section, key: &str) -> Result<Option<usize>> {
    section
        .items
        .get(key)
        .map(|item| item.value.trimmed().parse::<usize>().map_err(|_| number_error(item, "integer")))
        .transpose()
}

fn opt_coeffs(section: &Section) -> Result<Option<[f64; 6]>> {
    let Some(item) = section.items.get("coeffs") else {
        return Ok(None);
    };
    let values: std::result::Result<Vec<f64>, _> = item
        .value
        .text
        .split(',')
        .map(|s| s.trim().replace('\u{2212}', "-").parse::<f64>())
        .collect();
    match values {
        Ok(v) if v.len() == 6 => Ok(Some([v[0], v[1], v[2], v[3], v[4], v[5]])),
        _ => Err(number_error(item, "list of six numbers")),
    }
}

fn parse_domain(section: &Section, n: usize) -> Result<Domain> {
    let Some(item) = section.items.get("domain") else {
        if let Some(center) = section.items.get("center") {
            return Err(ParseError::new(center.line, center.col, "`center` needs a `domain`").into());
        }
        return Ok(Domain::Whole);
    };
    let words: Vec<&str> = item.value.text.split_whitespace().collect();
    let center = match section.items.get("center") {
        Some(c) => {
            let list = parse_complex_list(c.value.trimmed()).map_err(|msg| c.value.error(0, msg))?;
            if list.len() != n {
                return Err(c.value.error(0, format!("center has {} coordinates, n = {n}", list.len())).into());
            }
            list
        }
        None => vec![num_complex::Complex64::new(0.0, 0.0); n],
    };
    let radius = |w: &str| -> Result<f64> {
        w.parse::<f64>()
            .ok()
            .filter(|r| *r > 0.0 && r.is_finite())
            .ok_or_else(|| number_error(item, "positive radius"))
    };
    match words.as_slice() {
        ["whole"] => Ok(Domain::Whole),
        ["ball", r] => Ok(Domain::Ball { center, radius: radius(r)? }),
        ["polydisk", r] => Ok(Domain::Polydisk { center, radius: radius(r)? }),
        _ => Err(item
            .value
            .error(0, format!("invalid domain `{}`", item.value.trimmed()))
            .expecting(&["whole", "ball R", "polydisk R"])
            .into()),
    }
}

fn apply_common(section: &Section, mut field: MetricField) -> Result<MetricField> {
    let is_leaf = !matches!(field.backend(), Backend::Sum(..) | Backend::Product(..) | Backend::Scale(..));
    let has_expr = matches!(field.backend(), Backend::Potential(_) | Backend::Conformal(_) | Backend::Matrix(_));
    if !has_expr {
        if let Some(item) = section.items.get("domain") {
            if !is_leaf {
                return Err(ParseError::new(item.line, item.col, "combinators take the domains of their parts").into());
            }
            let domain = parse_domain(section, field.n())?;
            field = field.with_domain(domain)?;
        } else if let Some(item) = section.items.get("center") {
            return Err(ParseError::new(item.line, item.col, "`center` needs a `domain`").into());
        }
    }
    if let Some(step) = opt_f64(section, "step")? {
        field = field.with_step(step)?;
    }
    if let Some(item) = section.items.get("jets") {
        match item.value.trimmed() {
            "exact" => {
                if !field.has_exact_jets() {
                    return Err(ParseError::new(item.line, item.col, "this metric has no closed-form jets").into());
                }
            }
            "finite_difference" | "fd" => field = field.with_finite_differences(),
            _ => return Err(number_error(item, "`exact` or `finite_difference`")),
        }
    }
    Ok(field)
}

/// Renders a field in the spec format; `parse_metric_spec` inverts it.
pub fn render_metric_spec(field: &MetricField) -> String {
    let mut sections = Vec::new();
    let root = render_section(field, &mut sections);
    if sections.is_empty() {
        return root.join("\n") + "\n";
    }
    let mut out = String::new();
    for (name, lines) in &sections {
        out.push_str(&format!("[{name}]\n"));
        for line in lines {
            out.push_str(line);
            out.push('\n');
        }
    }
    out.push_str("[main]\n");
    for line in root {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn render_section(field: &MetricField, sections: &mut Vec<(String, Vec<String>)>) -> Vec<String> {
    let child = |f: &MetricField, sections: &mut Vec<(String, Vec<String>)>| -> String {
        let lines = render_section(f, sections);
        let name = format!("m{}", sections.len() + 1);
        sections.push((name.clone(), lines));
        name
    };
    let mut lines = Vec::new();
    let default_domain = match field.backend() {
        Backend::Euclidean => {
            lines.push("builtin: euclidean".into());
            lines.push(format!("n: {}", field.n()));
            Domain::Whole
        }
        Backend::PoincareDisk { c } => {
            lines.push("builtin: poincare_disk".into());
            lines.push(format!("c: {c}"));
            Domain::ball(1, 1.0)
        }
        Backend::ComplexBall => {
            lines.push("builtin: complex_ball".into());
            lines.push(format!("n: {}", field.n()));
            Domain::ball(field.n(), 1.0)
        }
        Backend::FubiniStudy => {
            lines.push("builtin: fubini_study_chart".into());
            lines.push(format!("n: {}", field.n()));
            Domain::Whole
        }
        Backend::ExpQuadratic { coeffs } => {
            lines.push("builtin: exp_quadratic".into());
            let list: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
            lines.push(format!("coeffs: {}", list.join(", ")));
            Domain::Whole
        }
        Backend::Potential(e) => {
            lines.push(format!("potential: {e}"));
            lines.push(format!("n: {}", field.n()));
            Domain::Whole
        }
        Backend::Conformal(e) => {
            lines.push(format!("conformal: {e}"));
            lines.push(format!("n: {}", field.n()));
            Domain::Whole
        }
        Backend::Matrix(entries) => {
            let r = field.rank();
            let rows: Vec<String> = entries
                .chunks(r)
                .map(|row| row.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", "))
                .collect();
            lines.push(format!("matrix: {}", rows.join("; ")));
            lines.push(format!("n: {}", field.n()));
            Domain::Whole
        }
        Backend::Sum(a, b) | Backend::Product(a, b) => {
            let key = if matches!(field.backend(), Backend::Sum(..)) { "sum" } else { "product" };
            let na = child(a, sections);
            let nb = child(b, sections);
            lines.push(format!("{key}: {na}, {nb}"));
            field.domain().clone()
        }
        Backend::Scale(c, a) => {
            let na = child(a, sections);
            lines.push(format!("scale: {na}"));
            lines.push(format!("c: {c}"));
            field.domain().clone()
        }
    };
    if field.domain() != &default_domain {
        match field.domain() {
            Domain::Whole => lines.push("domain: whole".into()),
            Domain::Ball { radius, .. } => lines.push(format!("domain: ball {radius}")),
            Domain::Polydisk { radius, .. } => lines.push(format!("domain: polydisk {radius}")),
        }
    }
    if let Some(center) = field.domain().center() {
        if center.iter().any(|z| z.norm() != 0.0) {
            lines.push(format!("center: {}", format_complex_list(center)));
        }
    }
    if field.step() != DEFAULT_STEP {
        lines.push(format!("step: {}", field.step()));
    }
    if field.forces_finite_differences() {
        lines.push("jets: finite_difference".into());
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    #[test]
    fn inline_builtin() {
        let f = parse_metric_spec("builtin: poincare_disk; c: 2").unwrap();
        assert_eq!(f.backend(), &Backend::PoincareDisk { c: 2.0 });
        assert_eq!(f.domain(), &Domain::ball(1, 1.0));
        let v = f.value_at(&[C64::new(0.0, 0.0)]).unwrap();
        assert_eq!(v[(0, 0)], C64::new(2.0, 0.0));
    }

    #[test]
    fn potential_with_domain() {
        let f = parse_metric_spec("potential: −log(1 − r2); n: 2; domain: ball 0.9").unwrap();
        assert_eq!(f.n(), 2);
        assert_eq!(f.domain(), &Domain::ball(2, 0.9));
        assert!(matches!(f.backend(), Backend::Potential(_)));
    }

    #[test]
    fn conformal_infers_dimension() {
        let f = parse_metric_spec("conformal: exp(x_1)").unwrap();
        assert_eq!((f.n(), f.rank()), (1, 1));
        let v = f.value_at(&[C64::new(0.0, 0.0)]).unwrap();
        assert_eq!(v[(0, 0)], C64::new(1.0, 0.0));
    }

    #[test]
    fn matrix_rows_inline_and_multiline() {
        let a = parse_metric_spec("matrix: 1 + x_1^2, 0.5; 0.5, 2; n: 1").unwrap();
        let b = parse_metric_spec("n: 1\nmatrix: 1 + x_1^2, 0.5;\n  0.5, 2\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rank(), 2);
        assert_eq!(a.n(), 1);
    }

    #[test]
    fn sections_and_combinators() {
        let text = "[g]\nbuiltin: poincare_disk\nc: 1\n[h]\nbuiltin: poincare_disk; c: 3\n[main]\nsum: g, h\n";
        let f = parse_metric_spec(text).unwrap();
        let v = f.value_at(&[C64::new(0.0, 0.0)]).unwrap();
        assert_eq!(v[(0, 0)], C64::new(4.0, 0.0));
        let inline = "[a] builtin: complex_ball; n: 1; [b] builtin: euclidean; [main] product: a, b";
        let p = parse_metric_spec(inline).unwrap();
        assert_eq!(p.n(), 2);
        let s = parse_metric_spec("[a]\nbuiltin: euclidean\n[main]\nscale: a\nc: 2").unwrap();
        assert_eq!(s.value_at(&[C64::new(0.0, 0.0)]).unwrap()[(0, 0)], C64::new(2.0, 0.0));
    }

    #[test]
    fn errors_report_positions() {
        let err = parse_metric_spec("builtin: hyperbolic").unwrap_err();
        let Error::Parse(p) = err else { panic!("{err:?}") };
        assert_eq!((p.line, p.column), (1, 10));
        assert!(p.expected.contains(&"poincare_disk".to_string()));

        let Error::Parse(p) = parse_metric_spec("n: 2\npotential: log(1 + * r2)").unwrap_err() else {
            panic!()
        };
        assert_eq!((p.line, p.column), (2, 20));

        let Error::Parse(p) = parse_metric_spec("builtin: euclidean\ncolour: red").unwrap_err() else {
            panic!()
        };
        assert_eq!((p.line, p.column), (2, 1));

        let Error::Parse(p) = parse_metric_spec("builtin: euclidean; c: 2").unwrap_err() else {
            panic!()
        };
        assert_eq!((p.line, p.column), (1, 21));

        let Error::Parse(p) = parse_metric_spec("[main]\nsum: a, b").unwrap_err() else { panic!() };
        assert_eq!((p.line, p.column), (2, 6));

        assert!(parse_metric_spec("").is_err());
        assert!(parse_metric_spec("[a]\nsum: a, a").is_err());
        assert!(parse_metric_spec("builtin: euclidean\nbuiltin: euclidean").is_err());
        assert!(parse_metric_spec("builtin: euclidean; potential: r2").is_err());
        assert!(parse_metric_spec("matrix: 1, 0; 1").is_err());
        assert!(parse_metric_spec("potential: r2; domain: disk 1").is_err());
    }

    #[test]
    fn non_positive_parameters_are_rejected() {
        assert!(matches!(
            parse_metric_spec("builtin: poincare_disk; c: 0"),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(parse_metric_spec("potential: r2; domain: ball -1").is_err());
        assert!(parse_metric_spec("builtin: euclidean; step: 0").is_err());
    }

    #[test]
    fn comments_and_blank_lines() {
        let f = parse_metric_spec("# flat\n\nbuiltin: euclidean  # C^3\nn: 3\n").unwrap();
        assert_eq!(f.n(), 3);
    }

    #[test]
    fn center_and_jets_keys() {
        let f = parse_metric_spec("potential: r2; n: 1; domain: ball 0.5; center: 0.1-0.2i; step: 0.002").unwrap();
        assert_eq!(f.domain(), &Domain::Ball { center: vec![C64::new(0.1, -0.2)], radius: 0.5 });
        assert_eq!(f.step(), 0.002);
        let g = parse_metric_spec("builtin: complex_ball; n: 2; jets: finite_difference").unwrap();
        assert!(!g.has_exact_jets());
        assert!(parse_metric_spec("potential: r2; jets: exact").is_err());
    }

    #[test]
    fn render_round_trips_catalog() {
        let fields = vec![
            MetricField::euclidean(3).unwrap(),
            MetricField::poincare_disk(2.5).unwrap(),
            MetricField::complex_ball(2).unwrap(),
            MetricField::fubini_study_chart(1).unwrap(),
            MetricField::exp_quadratic([0.1, -0.2, 0.3, 0.05, -0.01, 1e-3]).unwrap(),
            MetricField::product(
                MetricField::poincare_disk(1.0).unwrap(),
                MetricField::fubini_study_chart(1).unwrap(),
            ),
            MetricField::scale(2.0, MetricField::complex_ball(1).unwrap()).unwrap(),
            MetricField::sum(
                MetricField::poincare_disk(1.0).unwrap(),
                MetricField::sum(
                    MetricField::poincare_disk(3.0).unwrap(),
                    MetricField::euclidean(1).unwrap().with_domain(Domain::ball(1, 0.7)).unwrap(),
                )
                .unwrap(),
            )
            .unwrap(),
            MetricField::potential(2, Expr::parse("-log(1 - r2) + 0.1*x_1^4").unwrap(), Domain::ball(2, 0.9))
                .unwrap()
                .with_step(2e-3)
                .unwrap(),
            MetricField::conformal(1, Expr::parse("exp(x_1)").unwrap(), Domain::polydisk(1, 2.0))
                .unwrap()
                .with_domain(Domain::Polydisk { center: vec![C64::new(0.5, -1.0)], radius: 2.0 })
                .unwrap(),
            MetricField::matrix(1, vec![Expr::parse("2").unwrap(), Expr::parse("x_1").unwrap(), Expr::parse("x_1").unwrap(), Expr::parse("3").unwrap()], Domain::Whole).unwrap(),
            MetricField::complex_ball(2).unwrap().with_finite_differences(),
        ];
        for f in fields {
            let text = render_metric_spec(&f);
            let back = parse_metric_spec(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
            assert_eq!(back, f, "{text}");
        }
    }
}
