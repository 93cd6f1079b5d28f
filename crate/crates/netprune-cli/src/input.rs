//! Point-file reading and writing.
//!
//! Format: UTF-8 text, one point per line, whitespace-separated numbers.
//! An optional header line `# role role ...` declares column roles from
//! {coord, weight, color, flag, attr}; without one, every column is a
//! coordinate. Other `#` lines are comments. The dimension is inferred
//! from the coordinate columns.
//!
//! Color labels are remapped to dense indices and expanded into one-hot
//! attribute entries scaled by the point's weight, the convention the
//! library's sketch families and chromatic counters read. Flag columns
//! (0/1) follow the color block, also weight-scaled; raw attribute columns
//! come last, unscaled.

use std::fs;
use std::io::Read;

use netprune::geom::{Point, WeightedPoint};

use crate::Failure;

#[derive(Debug)]
pub struct PointFile {
    pub points: Vec<WeightedPoint>,
    /// Number of distinct colors; one-hot entries occupy attrs[0..colors].
    pub colors: usize,
    /// Number of flag columns; they occupy attrs[colors..colors + flags].
    pub flags: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum Role {
    Coord,
    Weight,
    Color,
    Flag,
    Attr,
}

fn role_of(token: &str) -> Option<Role> {
    match token {
        "coord" => Some(Role::Coord),
        "weight" => Some(Role::Weight),
        "color" => Some(Role::Color),
        "flag" => Some(Role::Flag),
        "attr" => Some(Role::Attr),
        _ => None,
    }
}

pub fn read_point_file(path: &str) -> Result<PointFile, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("reading standard input: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?
    };
    parse_point_file(&text)
}

struct Row {
    coords: Vec<f64>,
    weight: u64,
    color: Option<i64>,
    flags: Vec<f64>,
    attrs: Vec<f64>,
}

pub fn parse_point_file(text: &str) -> Result<PointFile, Failure> {
    let bad = |line: usize, msg: String| Failure::Input(format!("line {line}: {msg}"));
    let mut roles: Option<Vec<Role>> = None;
    let mut seen_data = false;
    let mut rows: Vec<Row> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            let parsed: Option<Vec<Role>> = tokens.iter().map(|t| role_of(t)).collect();
            match parsed {
                Some(r) if !r.is_empty() && !seen_data && roles.is_none() => roles = Some(r),
                _ => {} // plain comment
            }
            continue;
        }

        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let roles = roles.get_or_insert_with(|| vec![Role::Coord; tokens.len()]);
        seen_data = true;
        if tokens.len() != roles.len() {
            return Err(bad(
                line,
                format!("expected {} columns, found {}", roles.len(), tokens.len()),
            ));
        }
        let mut row = Row {
            coords: Vec::new(),
            weight: 1,
            color: None,
            flags: Vec::new(),
            attrs: Vec::new(),
        };
        for (token, role) in tokens.iter().zip(roles.iter()) {
            match role {
                Role::Coord => {
                    let v: f64 = token
                        .parse()
                        .map_err(|_| bad(line, format!("bad coordinate '{token}'")))?;
                    if !v.is_finite() {
                        return Err(bad(line, format!("non-finite coordinate '{token}'")));
                    }
                    row.coords.push(v);
                }
                Role::Weight => {
                    let w: u64 = token
                        .parse()
                        .map_err(|_| bad(line, format!("weight '{token}' is not a positive integer")))?;
                    if w == 0 {
                        return Err(bad(line, "weight must be positive".into()));
                    }
                    row.weight = w;
                }
                Role::Color => {
                    let c: i64 = token
                        .parse()
                        .map_err(|_| bad(line, format!("color '{token}' is not an integer label")))?;
                    if row.color.is_some() {
                        return Err(bad(line, "at most one color column is supported".into()));
                    }
                    row.color = Some(c);
                }
                Role::Flag => {
                    let f: f64 = token
                        .parse()
                        .map_err(|_| bad(line, format!("bad flag '{token}'")))?;
                    if f != 0.0 && f != 1.0 {
                        return Err(bad(line, format!("flag must be 0 or 1, got '{token}'")));
                    }
                    row.flags.push(f);
                }
                Role::Attr => {
                    let v: f64 = token
                        .parse()
                        .map_err(|_| bad(line, format!("bad attribute '{token}'")))?;
                    if !v.is_finite() {
                        return Err(bad(line, format!("non-finite attribute '{token}'")));
                    }
                    row.attrs.push(v);
                }
            }
        }
        if row.coords.is_empty() {
            return Err(bad(line, "no coordinate columns".into()));
        }
        rows.push(row);
    }

    if rows.is_empty() {
        return Err(Failure::Input("no data rows in the point file".into()));
    }

    // dense color indices, in ascending label order
    let mut labels: Vec<i64> = rows.iter().filter_map(|r| r.color).collect();
    labels.sort_unstable();
    labels.dedup();
    let colors = labels.len();
    let flags = rows[0].flags.len();
    let raw_attrs = rows[0].attrs.len();
    let attr_len = colors + flags + raw_attrs;

    let points = rows
        .into_iter()
        .map(|row| {
            let mut p = WeightedPoint::unit(Point::from(row.coords));
            p.weight = row.weight;
            if attr_len > 0 {
                let mut attrs = vec![0.0; attr_len];
                if let Some(c) = row.color {
                    let slot = labels.binary_search(&c).expect("label collected above");
                    attrs[slot] = row.weight as f64;
                }
                for (i, f) in row.flags.iter().enumerate() {
                    attrs[colors + i] = f * row.weight as f64;
                }
                for (i, a) in row.attrs.iter().enumerate() {
                    attrs[colors + flags + i] = *a;
                }
                p.attrs = Some(attrs.into_boxed_slice());
            }
            p
        })
        .collect();

    Ok(PointFile {
        points,
        colors,
        flags,
    })
}

/// One point per line, coordinates only, in Rust's shortest round-trip
/// float syntax; duplicated locations appear as repeated lines.
pub fn format_points(points: &[WeightedPoint]) -> String {
    let mut out = String::new();
    for p in points {
        let mut first = true;
        for c in p.point.coords() {
            if !first {
                out.push(' ');
            }
            out.push_str(&format!("{c}"));
            first = false;
        }
        out.push('\n');
    }
    out
}
