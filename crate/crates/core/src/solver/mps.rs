//! Fixed-format MPS export for cross-checking with external solvers.
//!
//! Columns and rows get short generated names (`C0000001`, `R0000001`) so
//! every field fits the fixed layout; the original names can be listed as
//! `*` comment lines.

use std::io::{self, Write};

use crate::problem::{MilpProblem, Sense, VarKind};

fn col_name(j: usize) -> String {
    format!("C{:07}", j + 1)
}

fn row_name(i: usize) -> String {
    format!("R{:07}", i + 1)
}

/// Shortest representation of `v` that fits a 12-character field.
fn num(v: f64) -> String {
    let s = format!("{v}");
    if s.len() <= 12 {
        return s;
    }
    for prec in (1..=6).rev() {
        let s = format!("{v:.prec$e}");
        if s.len() <= 12 {
            return s;
        }
    }
    format!("{v:.0e}")
}

fn line(out: &mut impl Write, f1: &str, f2: &str, f3: &str, f4: &str, f5: &str, f6: &str) -> io::Result<()> {
    let mut s = format!(" {f1:<2} {f2:<8}  {f3:<8}  {f4:>12}");
    if !f5.is_empty() {
        s.push_str(&format!("   {f5:<8}  {f6:>12}"));
    }
    writeln!(out, "{}", s.trim_end())
}

pub fn write_mps(problem: &MilpProblem, name: &str, with_names: bool, out: &mut impl Write) -> io::Result<()> {
    let title: String = name.chars().filter(|c| !c.is_whitespace()).take(8).collect();
    if with_names {
        for (j, v) in problem.variables.iter().enumerate() {
            writeln!(out, "* {} {}", col_name(j), v.name)?;
        }
        for (i, c) in problem.constraints.iter().enumerate() {
            writeln!(out, "* {} {}", row_name(i), c.name)?;
        }
    }
    writeln!(out, "NAME          {title}")?;
    writeln!(out, "ROWS")?;
    writeln!(out, " N  COST")?;
    for (i, c) in problem.constraints.iter().enumerate() {
        let kind = match c.sense {
            Sense::Le => "L",
            Sense::Ge => "G",
            Sense::Eq => "E",
        };
        writeln!(out, " {kind}  {}", row_name(i))?;
    }

    let mut by_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); problem.num_variables()];
    for (i, c) in problem.constraints.iter().enumerate() {
        for &(j, a) in &c.terms {
            by_col[j].push((i, a));
        }
    }
    writeln!(out, "COLUMNS")?;
    let mut in_int = false;
    for (j, v) in problem.variables.iter().enumerate() {
        let binary = v.kind == VarKind::Binary;
        if binary != in_int {
            let tag = if binary { "'INTORG'" } else { "'INTEND'" };
            writeln!(out, "    MARKER                 'MARKER'                 {tag}")?;
            in_int = binary;
        }
        let mut entries: Vec<(String, f64)> = Vec::new();
        if problem.objective[j] != 0.0 {
            entries.push(("COST".into(), problem.objective[j]));
        }
        let mut col = by_col[j].clone();
        col.sort_by_key(|e| e.0);
        // merge duplicate terms of the same row
        let mut merged: Vec<(usize, f64)> = Vec::new();
        for (i, a) in col {
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 += a,
                _ => merged.push((i, a)),
            }
        }
        entries.extend(merged.into_iter().filter(|e| e.1 != 0.0).map(|(i, a)| (row_name(i), a)));
        if entries.is_empty() {
            // keep the column declared
            entries.push(("COST".into(), 0.0));
        }
        let cname = col_name(j);
        for pair in entries.chunks(2) {
            let (r1, a1) = &pair[0];
            match pair.get(1) {
                Some((r2, a2)) => line(out, "", &cname, r1, &num(*a1), r2, &num(*a2))?,
                None => line(out, "", &cname, r1, &num(*a1), "", "")?,
            }
        }
    }
    if in_int {
        writeln!(out, "    MARKER                 'MARKER'                 'INTEND'")?;
    }

    writeln!(out, "RHS")?;
    if problem.objective_offset != 0.0 {
        line(out, "", "RHS", "COST", &num(-problem.objective_offset), "", "")?;
    }
    for (i, c) in problem.constraints.iter().enumerate() {
        if c.rhs != 0.0 {
            line(out, "", "RHS", &row_name(i), &num(c.rhs), "", "")?;
        }
    }

    writeln!(out, "BOUNDS")?;
    for (j, v) in problem.variables.iter().enumerate() {
        let c = col_name(j);
        let (lo, up) = (v.lower, v.upper);
        if v.kind == VarKind::Binary && lo == 0.0 && up == 1.0 {
            line(out, "BV", "BND", &c, "", "", "")?;
        } else if lo == up {
            line(out, "FX", "BND", &c, &num(lo), "", "")?;
        } else if lo == f64::NEG_INFINITY && up == f64::INFINITY {
            line(out, "FR", "BND", &c, "", "", "")?;
        } else {
            if lo == f64::NEG_INFINITY {
                line(out, "MI", "BND", &c, "", "", "")?;
            } else if lo != 0.0 {
                line(out, "LO", "BND", &c, &num(lo), "", "")?;
            }
            if up.is_finite() {
                line(out, "UP", "BND", &c, &num(up), "", "")?;
            }
        }
    }
    writeln!(out, "ENDATA")
}

pub fn to_mps_string(problem: &MilpProblem, name: &str, with_names: bool) -> String {
    let mut buf = Vec::new();
    write_mps(problem, name, with_names, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}
