//! Fixed-field MPS export and import.
//!
//! Row and column names are replaced by 8-character codes (`R0000001`,
//! `C0000001`; the objective row is `COST`) so they fit the fixed name
//! fields. The code-to-name map is written next to the model as
//! `<file>.names`, one tab-separated pair per line.
//!
//! Numbers are written in their shortest exact decimal form, so a model
//! read back is bit-identical to the one written. Values that fit the
//! 12-character numeric field stay column-aligned; longer ones extend the
//! line, which whitespace-tokenizing readers accept.
//!
//! The objective constant is stored as the negated right-hand side of the
//! objective row, the common convention among solvers.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::program::{ColSpec, LinearProgram, RowSense, RowSpec};
use crate::LpError;

const OBJ_ROW: &str = "COST";
const MAX_CODE: usize = 9_999_999;

fn row_code(i: usize) -> String {
    format!("R{:07}", i + 1)
}

fn col_code(j: usize) -> String {
    format!("C{:07}", j + 1)
}

/// Shortest representation that parses back to exactly `v`.
pub fn format_number(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    let plain = format!("{v}");
    let exp = format!("{v:e}");
    if plain.len() <= exp.len() {
        plain
    } else {
        exp
    }
}

fn entry_line(out: &mut String, f1: &str, f2: &str, f3: &str, value: f64) {
    // fields start at columns 2, 5, 15 and 25
    let _ = writeln!(out, " {f1:<2} {f2:<8}  {f3:<8}  {:>12}", format_number(value));
}

/// Renders `lp` as fixed-field MPS text.
pub fn to_mps_string(lp: &LinearProgram) -> Result<String, LpError> {
    if lp.num_rows() > MAX_CODE || lp.num_cols() > MAX_CODE {
        return Err(LpError::NameSpace);
    }
    let mut out = String::new();
    let name: String = lp.name.chars().filter(|c| !c.is_whitespace()).take(8).collect();
    let _ = writeln!(out, "NAME          {}", if name.is_empty() { "LP" } else { &name });
    out.push_str("ROWS\n");
    let _ = writeln!(out, " N  {OBJ_ROW}");
    for (i, sense) in lp.row_sense().iter().enumerate() {
        let t = match sense {
            RowSense::Le => "L",
            RowSense::Ge => "G",
            RowSense::Eq => "E",
        };
        let _ = writeln!(out, " {t}  {}", row_code(i));
    }
    out.push_str("COLUMNS\n");
    let a = lp.matrix();
    for j in 0..lp.num_cols() {
        let code = col_code(j);
        let c = lp.objective()[j];
        let (rows, vals) = a.column_slices(j);
        if c != 0.0 {
            entry_line(&mut out, "", &code, OBJ_ROW, c);
        }
        for (&i, &v) in rows.iter().zip(vals) {
            entry_line(&mut out, "", &code, &row_code(i), v);
        }
        if c == 0.0 && rows.is_empty() {
            // keep empty columns visible to readers
            entry_line(&mut out, "", &code, OBJ_ROW, 0.0);
        }
    }
    out.push_str("RHS\n");
    if lp.objective_offset() != 0.0 {
        entry_line(&mut out, "", "RHS", OBJ_ROW, -lp.objective_offset());
    }
    for (i, &r) in lp.rhs().iter().enumerate() {
        if r != 0.0 {
            entry_line(&mut out, "", "RHS", &row_code(i), r);
        }
    }
    out.push_str("BOUNDS\n");
    for j in 0..lp.num_cols() {
        let code = col_code(j);
        let (l, u) = (lp.col_lower()[j], lp.col_upper()[j]);
        if l == u {
            entry_line(&mut out, "FX", "BND", &code, l);
            continue;
        }
        match (l.is_finite(), u.is_finite()) {
            (false, false) => {
                let _ = writeln!(out, " FR BND       {code}");
            }
            (false, true) => {
                let _ = writeln!(out, " MI BND       {code}");
                entry_line(&mut out, "UP", "BND", &code, u);
            }
            (true, fin_u) => {
                if l != 0.0 {
                    entry_line(&mut out, "LO", "BND", &code, l);
                }
                if fin_u {
                    entry_line(&mut out, "UP", "BND", &code, u);
                }
            }
        }
    }
    out.push_str("ENDATA\n");
    Ok(out)
}

/// Code-to-original-name map, one `code\tname` line per row and column.
pub fn name_map_string(lp: &LinearProgram) -> String {
    let mut out = String::new();
    for (i, n) in lp.row_names().iter().enumerate() {
        let _ = writeln!(out, "{}\t{}", row_code(i), n);
    }
    for (j, n) in lp.col_names().iter().enumerate() {
        let _ = writeln!(out, "{}\t{}", col_code(j), n);
    }
    out
}

/// Path of the name map written next to `path`.
pub fn name_map_path(path: &Path) -> PathBuf {
    let mut p = path.as_os_str().to_owned();
    p.push(".names");
    PathBuf::from(p)
}

/// Writes the model and its name map.
pub fn write_mps(lp: &LinearProgram, path: &Path) -> Result<(), LpError> {
    let text = to_mps_string(lp)?;
    fs::write(path, text).map_err(|source| LpError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let map_path = name_map_path(path);
    fs::write(&map_path, name_map_string(lp)).map_err(|source| LpError::Io {
        path: map_path,
        source,
    })
}

/// Reads an MPS file; names are the codes found in the file.
pub fn read_mps(path: &Path) -> Result<LinearProgram, LpError> {
    let text = fs::read_to_string(path).map_err(|source| LpError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_mps(&text)
}

/// Reads an MPS file and restores original names from its `.names` map,
/// when present.
pub fn read_mps_with_names(path: &Path) -> Result<LinearProgram, LpError> {
    let mut lp = read_mps(path)?;
    let map_path = name_map_path(path);
    if let Ok(text) = fs::read_to_string(&map_path) {
        let map: HashMap<&str, &str> = text
            .lines()
            .filter_map(|l| l.split_once('\t'))
            .collect();
        for n in lp.row_names.iter_mut().chain(lp.col_names.iter_mut()) {
            if let Some(orig) = map.get(n.as_str()) {
                *n = (*orig).to_string();
            }
        }
    }
    Ok(lp)
}

#[derive(PartialEq, Eq, Clone, Copy)]
enum Section {
    None,
    Rows,
    Columns,
    Rhs,
    Ranges,
    Bounds,
}

fn perr(line: usize, msg: impl Into<String>) -> LpError {
    LpError::Parse {
        line,
        msg: msg.into(),
    }
}

fn num(line: usize, s: &str) -> Result<f64, LpError> {
    s.parse::<f64>()
        .map_err(|_| perr(line, format!("invalid number {s:?}")))
}

/// Parses MPS text (fixed or free layout; fields are whitespace separated).
pub fn parse_mps(text: &str) -> Result<LinearProgram, LpError> {
    let mut name = String::new();
    let mut section = Section::None;
    let mut obj_row: Option<String> = None;
    let mut rows: Vec<RowSpec> = Vec::new();
    let mut row_lookup: HashMap<String, usize> = HashMap::new();
    let mut cols: Vec<ColSpec> = Vec::new();
    let mut col_lookup: HashMap<String, usize> = HashMap::new();
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    let mut offset = 0.0;
    let mut ended = false;

    for (ln0, raw) in text.lines().enumerate() {
        let ln = ln0 + 1;
        if raw.starts_with('*') || raw.trim().is_empty() {
            continue;
        }
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') && !raw.starts_with('\t') {
            section = match toks[0] {
                "NAME" => {
                    name = toks.get(1).copied().unwrap_or("").to_string();
                    Section::None
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "RANGES" => Section::Ranges,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => {
                    ended = true;
                    break;
                }
                other => return Err(perr(ln, format!("unknown section {other}"))),
            };
            continue;
        }
        match section {
            Section::None => return Err(perr(ln, "data outside a section")),
            Section::Rows => {
                if toks.len() != 2 {
                    return Err(perr(ln, "expected row type and name"));
                }
                let sense = match toks[0] {
                    "N" => {
                        if obj_row.is_none() {
                            obj_row = Some(toks[1].to_string());
                        }
                        continue;
                    }
                    "L" => RowSense::Le,
                    "G" => RowSense::Ge,
                    "E" => RowSense::Eq,
                    t => return Err(perr(ln, format!("unknown row type {t}"))),
                };
                if row_lookup.insert(toks[1].to_string(), rows.len()).is_some() {
                    return Err(perr(ln, format!("duplicate row {}", toks[1])));
                }
                rows.push(RowSpec {
                    name: toks[1].to_string(),
                    sense,
                    rhs: 0.0,
                });
            }
            Section::Columns => {
                if toks.contains(&"'MARKER'") {
                    return Err(perr(ln, "integer markers are not supported"));
                }
                if toks.len() != 3 && toks.len() != 5 {
                    return Err(perr(ln, "expected column, row, value [row, value]"));
                }
                let j = *col_lookup.entry(toks[0].to_string()).or_insert_with(|| {
                    cols.push(ColSpec {
                        name: toks[0].to_string(),
                        lower: 0.0,
                        upper: f64::INFINITY,
                        cost: 0.0,
                    });
                    cols.len() - 1
                });
                for pair in toks[1..].chunks(2) {
                    let v = num(ln, pair[1])?;
                    if obj_row.as_deref() == Some(pair[0]) {
                        cols[j].cost += v;
                    } else if let Some(&i) = row_lookup.get(pair[0]) {
                        entries.push((i, j, v));
                    } else {
                        return Err(perr(ln, format!("unknown row {}", pair[0])));
                    }
                }
            }
            Section::Rhs => {
                let pairs = match toks.len() {
                    2 | 4 => &toks[..],
                    3 | 5 => &toks[1..],
                    _ => return Err(perr(ln, "malformed RHS entry")),
                };
                for pair in pairs.chunks(2) {
                    let v = num(ln, pair[1])?;
                    if obj_row.as_deref() == Some(pair[0]) {
                        offset = -v;
                    } else if let Some(&i) = row_lookup.get(pair[0]) {
                        rows[i].rhs = v;
                    } else {
                        return Err(perr(ln, format!("unknown row {}", pair[0])));
                    }
                }
            }
            Section::Ranges => return Err(perr(ln, "RANGES are not supported")),
            Section::Bounds => {
                let kind = toks[0];
                let (col, value) = match (kind, toks.len()) {
                    ("FR" | "MI" | "PL", 3) => (toks[2], None),
                    ("FR" | "MI" | "PL", 2) => (toks[1], None),
                    (_, 4) => (toks[2], Some(num(ln, toks[3])?)),
                    (_, 3) => (toks[1], Some(num(ln, toks[2])?)),
                    _ => return Err(perr(ln, "malformed bound")),
                };
                let &j = col_lookup
                    .get(col)
                    .ok_or_else(|| perr(ln, format!("unknown column {col}")))?;
                let c = &mut cols[j];
                match (kind, value) {
                    ("UP", Some(v)) => c.upper = v,
                    ("LO", Some(v)) => c.lower = v,
                    ("FX", Some(v)) => {
                        c.lower = v;
                        c.upper = v;
                    }
                    ("FR", None) => {
                        c.lower = f64::NEG_INFINITY;
                        c.upper = f64::INFINITY;
                    }
                    ("MI", None) => c.lower = f64::NEG_INFINITY,
                    ("PL", None) => c.upper = f64::INFINITY,
                    _ => return Err(perr(ln, format!("unsupported bound type {kind}"))),
                }
            }
        }
    }
    if !ended {
        return Err(perr(text.lines().count(), "missing ENDATA"));
    }
    for c in &cols {
        if c.lower > c.upper {
            return Err(LpError::InvalidBounds {
                name: c.name.clone(),
                lower: c.lower,
                upper: c.upper,
            });
        }
    }
    Ok(LinearProgram::from_parts(name, cols, rows, entries, offset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::LpBuilder;

    fn sample() -> LinearProgram {
        let mut b = LpBuilder::new("sample");
        let x = b.add_col("gen[1,2]", 0.0, 1.0 / 3.0, 12.5).unwrap();
        let f = b.add_col("free", f64::NEG_INFINITY, f64::INFINITY, 0.0).unwrap();
        let m = b.add_col("minus", f64::NEG_INFINITY, -2.0, -1.0).unwrap();
        let fx = b.add_col("fixed", 4.0, 4.0, 0.1).unwrap();
        let lo = b.add_col("lo", -7.25, f64::INFINITY, 1e-9).unwrap();
        b.add_col("empty", 0.0, 5.0, 0.0).unwrap();
        b.add_row("balance", RowSense::Eq, 3.0, &[(x, 1.0), (f, -1.0)]).unwrap();
        b.add_row("cap", RowSense::Le, 1e6, &[(m, 2.0), (fx, 0.1)]).unwrap();
        b.add_row("min", RowSense::Ge, -0.5, &[(lo, 1.0), (x, 123456.789)]).unwrap();
        b.add_objective_offset(42.5);
        b.build()
    }

    #[test]
    fn text_round_trip_is_exact() {
        let lp = sample();
        let back = parse_mps(&to_mps_string(&lp).unwrap()).unwrap();
        assert_eq!(back.matrix().triplets(), lp.matrix().triplets());
        assert_eq!(back.row_sense(), lp.row_sense());
        assert_eq!(back.rhs(), lp.rhs());
        assert_eq!(back.col_lower(), lp.col_lower());
        assert_eq!(back.col_upper(), lp.col_upper());
        assert_eq!(back.objective(), lp.objective());
        assert_eq!(back.objective_offset(), lp.objective_offset());
    }

    #[test]
    fn free_and_minus_bounds_are_emitted() {
        let text = to_mps_string(&sample()).unwrap();
        assert!(text.contains(" FR BND       C0000002"));
        assert!(text.contains(" MI BND       C0000003"));
        assert!(text.contains(" FX BND       C0000004"));
    }

    #[test]
    fn fixed_fields_are_aligned() {
        let text = to_mps_string(&sample()).unwrap();
        let line = text
            .lines()
            .find(|l| l.contains("C0000001") && l.contains("COST"))
            .unwrap();
        assert_eq!(&line[4..12], "C0000001");
        assert_eq!(&line[14..18], "COST");
        assert_eq!(line.len(), 36);
        assert_eq!(line[24..].trim(), "12.5");
    }

    #[test]
    fn number_format_round_trips() {
        for v in [0.1, 1.0 / 3.0, 1e-300, -2.5e17, 123456.789, 5e-7, 0.0, -0.0] {
            let s = format_number(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_number(-0.0), "0");
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_mps("NAME x\nROWS\n N COST\n").is_err());
        assert!(parse_mps("NAME x\nROWS\n Q R1\nENDATA\n").is_err());
        assert!(parse_mps("NAME x\nROWS\n N COST\nCOLUMNS\n    X  R9  1\nENDATA\n").is_err());
    }
}
