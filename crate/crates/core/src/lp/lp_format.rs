//! CPLEX LP text format writer.
//!
//! Layout: a comment header, `Minimize` with the objective row `obj`, the
//! constraints in row order under `Subject To`, one line per variable under
//! `Bounds` in column order, then `End`. Terms appear in ascending column
//! order, at most eight per line. Numbers use the shortest representation
//! that round-trips to the same `f64`. The objective offset is written as a
//! comment because not every reader accepts a constant objective term.

use super::{LpProblem, RowSense};
use std::fmt::Write as _;

const TERMS_PER_LINE: usize = 8;

fn num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 {
        "0".to_string()
    } else if (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Maps a name to the LP-format character set; names that could be read as
/// numbers get a leading underscore.
fn sanitize(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "!\"#$%&()/,.;?@_`'{}|~".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect();
    let first = s.chars().next();
    if matches!(
        first,
        None | Some('0'..='9') | Some('.') | Some('e') | Some('E')
    ) {
        s.insert(0, '_');
    }
    s
}

fn write_terms(out: &mut String, terms: impl Iterator<Item = (usize, f64)>, names: &[String]) {
    let mut count = 0;
    for (j, a) in terms {
        if count > 0 && count % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if a < 0.0 { "-" } else { "+" };
        let _ = write!(out, " {sign} {} {}", num(a.abs()), names[j]);
        count += 1;
    }
    if count == 0 {
        out.push_str(" 0");
    }
}

pub fn write_lp(problem: &LpProblem, title: &str) -> String {
    let names: Vec<String> = (0..problem.n_vars())
        .map(|j| sanitize(problem.var_name(j)))
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, "\\ {title}");
    let _ = writeln!(
        out,
        "\\ variables: {} rows: {} nonzeros: {}",
        problem.n_vars(),
        problem.n_rows(),
        problem.nnz()
    );
    let _ = writeln!(out, "\\ objective offset: {}", num(problem.offset()));
    out.push_str("Minimize\n obj:");
    write_terms(
        &mut out,
        problem
            .cost()
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, c)| c != 0.0),
        &names,
    );
    out.push_str("\nSubject To\n");
    for i in 0..problem.n_rows() {
        let _ = write!(out, " {}:", sanitize(problem.row_name(i)));
        write_terms(&mut out, problem.row(i), &names);
        let op = match problem.sense()[i] {
            RowSense::Le => "<=",
            RowSense::Eq => "=",
            RowSense::Ge => ">=",
        };
        let _ = writeln!(out, " {op} {}", num(problem.rhs()[i]));
    }
    out.push_str("Bounds\n");
    for (j, name) in names.iter().enumerate() {
        let (lo, hi) = (problem.lower()[j], problem.upper()[j]);
        let _ = match (lo.is_finite(), hi.is_finite()) {
            _ if lo == hi => writeln!(out, " {name} = {}", num(lo)),
            (false, false) => writeln!(out, " {name} free"),
            (true, false) => writeln!(out, " {name} >= {}", num(lo)),
            (false, true) => writeln!(out, " -inf <= {name} <= {}", num(hi)),
            (true, true) => writeln!(out, " {} <= {name} <= {}", num(lo), num(hi)),
        };
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::LpBuilder;

    #[test]
    fn exact_layout() {
        let mut b = LpBuilder::new();
        let x = b.add_var("x[1]", 1.5, 0.0, f64::INFINITY);
        let y = b.add_var("y", -2.0, f64::NEG_INFINITY, f64::INFINITY);
        let z = b.add_var("e1", 0.0, 1e-7, 3.0);
        b.add_row("cap", RowSense::Le, 4.0, [(x, 1.0), (y, -0.25)]);
        b.add_row("bal", RowSense::Eq, 0.0, [(y, 1.0), (z, 1e20)]);
        b.set_offset(2.0);
        let p = b.build().unwrap();
        let text = write_lp(&p, "demo");
        let expected = "\\ demo\n\\ variables: 3 rows: 2 nonzeros: 4\n\\ objective offset: 2\nMinimize\n obj: + 1.5 x_1_ - 2 y\nSubject To\n cap: + 1 x_1_ - 0.25 y <= 4\n bal: + 1 y + 1e20 _e1 = 0\nBounds\n x_1_ >= 0\n y free\n 1e-7 <= _e1 <= 3\nEnd\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn long_rows_wrap() {
        let mut b = LpBuilder::new();
        let v: Vec<_> = (0..20)
            .map(|j| b.add_var(format!("v{j}"), 0.0, 0.0, 1.0))
            .collect();
        b.add_row("r", RowSense::Ge, 1.0, v.iter().map(|&x| (x, 1.0)));
        let text = write_lp(&b.build().unwrap(), "t");
        let row_lines = text
            .lines()
            .skip_while(|l| !l.starts_with(" r:"))
            .take_while(|l| !l.starts_with("Bounds"))
            .count();
        assert_eq!(row_lines, 3);
    }
}
