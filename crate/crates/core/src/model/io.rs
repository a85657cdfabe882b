//! JSON problem files.
//!
//! Numbers are written with 17 significant digits in exponent form so that
//! every finite double survives a save/load cycle bit for bit. Infinite upper
//! bounds are written as the string `"inf"`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::QcqpProblem;
use crate::error::{Error, Result};
use crate::matrix::ColumnMatrix;

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum MatrixRepr {
    Dense(Vec<Vec<f64>>),
    Cols(BTreeMap<usize, Vec<(usize, f64)>>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum BoundRepr {
    Number(f64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    n1: usize,
    n2: usize,
    m1: usize,
    m2: usize,
    #[serde(rename = "P")]
    p: Vec<MatrixRepr>,
    q: Vec<Vec<f64>>,
    c: Vec<Vec<f64>>,
    r: Vec<f64>,
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    b_mat: Vec<Vec<f64>>,
    b: Vec<f64>,
    x_upper: Vec<BoundRepr>,
}

pub fn load_problem(path: impl AsRef<Path>) -> Result<QcqpProblem> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_problem(&text)
}

pub(crate) fn parse_problem(text: &str) -> Result<QcqpProblem> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: ProblemFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        Error::Parse {
            line: inner.line(),
            column: inner.column(),
            field,
            message: inner.to_string(),
        }
    })?;
    from_file(file)
}

fn from_file(f: ProblemFile) -> Result<QcqpProblem> {
    let (n1, n2, m1, m2) = (f.n1, f.n2, f.m1, f.m2);
    if f.p.len() != m1 + 1 {
        return Err(Error::dim("P", m1 + 1, f.p.len()));
    }
    let quad =
        f.p.into_iter()
            .enumerate()
            .map(|(i, repr)| match repr {
                MatrixRepr::Dense(rows) => {
                    if rows.len() != n1 {
                        return Err(Error::dim(format!("P[{i}] rows"), n1, rows.len()));
                    }
                    ColumnMatrix::from_rows(&rows, n1).map_err(|e| Error::Invalid(format!("P[{i}]: {e}")))
                }
                MatrixRepr::Cols(map) => {
                    let mut cols = vec![Vec::new(); n1];
                    for (j, entries) in map {
                        if j >= n1 {
                            return Err(Error::Invalid(format!(
                                "P[{i}]: column {j} out of range (n1 = {n1})"
                            )));
                        }
                        cols[j] = entries;
                    }
                    ColumnMatrix::from_columns(n1, cols).map_err(|e| Error::Invalid(format!("P[{i}]: {e}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;

    if f.a.len() != m2 {
        return Err(Error::dim("A rows", m2, f.a.len()));
    }
    if f.b_mat.len() != m2 {
        return Err(Error::dim("B rows", m2, f.b_mat.len()));
    }
    let eq_x = ColumnMatrix::from_rows(&f.a, n1).map_err(|e| Error::Invalid(format!("A: {e}")))?;
    let eq_u = ColumnMatrix::from_rows(&f.b_mat, n2).map_err(|e| Error::Invalid(format!("B: {e}")))?;

    let x_upper = f
        .x_upper
        .into_iter()
        .enumerate()
        .map(|(j, b)| match b {
            BoundRepr::Number(v) => Ok(v),
            BoundRepr::Text(s) if s == "inf" || s == "+inf" => Ok(f64::INFINITY),
            BoundRepr::Text(s) => Err(Error::Invalid(format!(
                "x_upper[{j}]: expected a number or \"inf\", found {s:?}"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;

    let problem = QcqpProblem {
        n_x: n1,
        n_u: n2,
        n_quad: m1,
        n_eq: m2,
        quad,
        lin_x: f.q,
        lin_u: f.c,
        constant: f.r,
        eq_x,
        eq_u,
        eq_rhs: f.b,
        x_upper,
    };
    problem.check_dimensions()?;
    Ok(problem)
}

/// Formats a double with 17 significant digits.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_vec(out: &mut String, v: &[f64]) {
    out.push('[');
    for (k, x) in v.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        out.push_str(&fmt_f64(*x));
    }
    out.push(']');
}

fn write_rows(out: &mut String, rows: &[Vec<f64>], indent: &str) {
    if rows.is_empty() {
        out.push_str("[]");
        return;
    }
    out.push_str("[\n");
    for (k, row) in rows.iter().enumerate() {
        out.push_str(indent);
        out.push_str("  ");
        write_vec(out, row);
        out.push_str(if k + 1 < rows.len() { ",\n" } else { "\n" });
    }
    out.push_str(indent);
    out.push(']');
}

fn write_matrix(out: &mut String, m: &ColumnMatrix) {
    match m {
        ColumnMatrix::Dense { .. } => {
            out.push_str("{\"dense\": ");
            write_rows(out, &m.to_rows(), "    ");
            out.push('}');
        }
        ColumnMatrix::Sparse { cols, .. } => {
            out.push_str("{\"cols\": {");
            let nonempty: Vec<_> = cols.iter().enumerate().filter(|(_, c)| !c.is_empty()).collect();
            for (k, (j, col)) in nonempty.iter().enumerate() {
                let _ = write!(out, "\n      \"{j}\": [");
                for (t, (i, v)) in col.iter().enumerate() {
                    if t > 0 {
                        out.push_str(", ");
                    }
                    let _ = write!(out, "[{i}, {}]", fmt_f64(*v));
                }
                out.push(']');
                if k + 1 < nonempty.len() {
                    out.push(',');
                }
            }
            if !nonempty.is_empty() {
                out.push_str("\n    ");
            }
            out.push_str("}}");
        }
    }
}

/// Serializes a problem in the canonical layout.
pub(crate) fn problem_to_string(p: &QcqpProblem) -> Result<String> {
    p.check_dimensions()?;
    let finite = p.quad.iter().all(ColumnMatrix::is_finite)
        && p.eq_x.is_finite()
        && p.eq_u.is_finite()
        && p.lin_x.iter().chain(&p.lin_u).flatten().all(|v| v.is_finite())
        && p.constant.iter().chain(&p.eq_rhs).all(|v| v.is_finite());
    if !finite {
        return Err(Error::Invalid("problem data contains non-finite values".into()));
    }
    if p.x_upper.iter().any(|v| v.is_nan() || *v == f64::NEG_INFINITY) {
        return Err(Error::Invalid("x_upper contains NaN or -inf".into()));
    }

    let mut s = String::new();
    let _ = writeln!(s, "{{");
    let _ = writeln!(s, "  \"n1\": {},", p.n_x);
    let _ = writeln!(s, "  \"n2\": {},", p.n_u);
    let _ = writeln!(s, "  \"m1\": {},", p.n_quad);
    let _ = writeln!(s, "  \"m2\": {},", p.n_eq);
    s.push_str("  \"P\": [\n");
    for (k, m) in p.quad.iter().enumerate() {
        s.push_str("    ");
        write_matrix(&mut s, m);
        s.push_str(if k + 1 < p.quad.len() { ",\n" } else { "\n" });
    }
    s.push_str("  ],\n");
    for (name, rows) in [("q", &p.lin_x), ("c", &p.lin_u)] {
        let _ = write!(s, "  \"{name}\": ");
        write_rows(&mut s, rows, "  ");
        s.push_str(",\n");
    }
    s.push_str("  \"r\": ");
    write_vec(&mut s, &p.constant);
    s.push_str(",\n  \"A\": ");
    write_rows(&mut s, &p.eq_x.to_rows(), "  ");
    s.push_str(",\n  \"B\": ");
    write_rows(&mut s, &p.eq_u.to_rows(), "  ");
    s.push_str(",\n  \"b\": ");
    write_vec(&mut s, &p.eq_rhs);
    s.push_str(",\n  \"x_upper\": [");
    for (k, v) in p.x_upper.iter().enumerate() {
        if k > 0 {
            s.push_str(", ");
        }
        if v.is_infinite() {
            s.push_str("\"inf\"");
        } else {
            s.push_str(&fmt_f64(*v));
        }
    }
    s.push_str("]\n}\n");
    Ok(s)
}

pub fn save_problem(problem: &QcqpProblem, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = problem_to_string(problem)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes any serializable value as pretty JSON with a trailing newline.
pub fn write_json_pretty<T: Serialize>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Invalid(format!("serialization failed: {e}")))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
