//! Report assembly and rendering. Every subcommand produces one
//! `Report`; the JSON and CSV writers use fixed float formatting (17
//! significant digits in JSON, 12 in CSV) so that identical inputs give
//! byte-identical artifacts.

use std::fmt::Write as _;

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn write_json(&self, out: &mut String) {
        match self {
            Cell::Int(v) => {
                let _ = write!(out, "{v}");
            }
            Cell::Float(v) => {
                let _ = write!(out, "{v:.16e}");
            }
            Cell::Text(v) => write_json_string(v, out),
        }
    }

    fn write_csv(&self, out: &mut String) {
        match self {
            Cell::Int(v) => {
                let _ = write!(out, "{v}");
            }
            Cell::Float(v) => {
                let _ = write!(out, "{v:.11e}");
            }
            Cell::Text(v) => out.push_str(v),
        }
    }
}

fn write_json_string(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// A check that passes when the measured value stays at or below the
    /// tolerance.
    pub fn upper(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }
}

#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub params: Vec<(&'static str, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Report {
            command,
            params: Vec::new(),
            columns,
            rows: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn param(&mut self, name: &'static str, cell: Cell) {
        self.params.push((name, cell));
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Zero when every check passes, otherwise the 1-based index of the
    /// first failure; this is the process exit code.
    pub fn exit_code(&self) -> i32 {
        match self.checks.iter().position(|c| !c.pass) {
            Some(i) => (i + 1) as i32,
            None => 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n  \"command\": ");
        write_json_string(self.command, &mut out);
        out.push_str(",\n  \"params\": {");
        for (i, (name, cell)) in self.params.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            write_json_string(name, &mut out);
            out.push_str(": ");
            cell.write_json(&mut out);
        }
        out.push_str("},\n  \"rows\": [");
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(if i == 0 { "\n" } else { ",\n" });
            out.push_str("    {");
            for (j, (name, cell)) in self.columns.iter().zip(row).enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                write_json_string(name, &mut out);
                out.push_str(": ");
                cell.write_json(&mut out);
            }
            out.push('}');
        }
        if !self.rows.is_empty() {
            out.push_str("\n  ");
        }
        out.push_str("],\n  \"checks\": [");
        for (i, check) in self.checks.iter().enumerate() {
            out.push_str(if i == 0 { "\n" } else { ",\n" });
            out.push_str("    {\"name\": ");
            write_json_string(&check.name, &mut out);
            let _ = write!(
                out,
                ", \"value\": {:.16e}, \"tolerance\": {:.16e}, \"pass\": {}}}",
                check.value, check.tolerance, check.pass
            );
        }
        if !self.checks.is_empty() {
            out.push_str("\n  ");
        }
        out.push_str("]\n}\n");
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for (j, cell) in row.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                cell.write_csv(&mut out);
            }
            out.push('\n');
        }
        if !self.checks.is_empty() {
            out.push_str("\nname,value,tolerance,pass\n");
            for check in &self.checks {
                let _ = writeln!(
                    out,
                    "{},{:.11e},{:.11e},{}",
                    check.name, check.value, check.tolerance, check.pass
                );
            }
        }
        out
    }
}
