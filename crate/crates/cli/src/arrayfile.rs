//! Plain-text symbol arrays.
//!
//! ```text
//! # comment lines are ignored
//! 3 4 3        <- m n w
//! 1 0 ? 7
//! ...
//! ```
//!
//! Symbols are hex, `?` marks an erasure.

use anyhow::{bail, Context, Result};
use gpc_core::field::FieldElement;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayFile {
    pub m: usize,
    pub n: usize,
    pub w: u32,
    pub cells: Vec<Option<FieldElement>>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_symbol(token: &str, w: u32, line: usize) -> Result<FieldElement> {
    let v = u64::from_str_radix(token, 16).with_context(|| format!("line {line}: bad symbol {token:?}"))?;
    if w < 64 && v >> w != 0 {
        bail!("line {line}: symbol {token} does not fit in {w} bits");
    }
    Ok(FieldElement(v))
}

impl ArrayFile {
    pub fn parse(text: &str) -> Result<ArrayFile> {
        let mut lines = content_lines(text);
        let (hl, header) = lines.next().context("empty array file")?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        let [m, n, w] = dims[..] else {
            bail!("line {hl}: header must be `m n w`");
        };
        let m: usize = m.parse().with_context(|| format!("line {hl}: bad m"))?;
        let n: usize = n.parse().with_context(|| format!("line {hl}: bad n"))?;
        let w: u32 = w.parse().with_context(|| format!("line {hl}: bad w"))?;
        let mut cells = Vec::with_capacity(m * n);
        let mut rows = 0;
        for (ln, line) in lines {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != n {
                bail!("line {ln}: expected {n} symbols, found {}", tokens.len());
            }
            for t in tokens {
                cells.push(if t == "?" { None } else { Some(parse_symbol(t, w, ln)?) });
            }
            rows += 1;
        }
        if rows != m {
            bail!("expected {m} rows, found {rows}");
        }
        Ok(ArrayFile { m, n, w, cells })
    }

    pub fn render(&self) -> String {
        let digits = (self.w as usize).div_ceil(4).max(1);
        let mut out = format!("{} {} {}\n", self.m, self.n, self.w);
        for row in self.cells.chunks(self.n.max(1)) {
            let tokens: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Some(v) => format!("{:0digits$x}", v.0),
                    None => format!("{:>digits$}", "?"),
                })
                .collect();
            out.push_str(&tokens.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_values(m: usize, n: usize, w: u32, values: &[FieldElement]) -> ArrayFile {
        ArrayFile {
            m,
            n,
            w,
            cells: values.iter().copied().map(Some).collect(),
        }
    }

    pub fn rows(&self) -> Vec<Vec<Option<FieldElement>>> {
        self.cells.chunks(self.n.max(1)).map(<[_]>::to_vec).collect()
    }
}

/// Whitespace-separated hex symbols, `#` comments allowed.
pub fn parse_data(text: &str, w: u32) -> Result<Vec<FieldElement>> {
    let mut out = Vec::new();
    for (ln, line) in content_lines(text) {
        for t in line.split_whitespace() {
            out.push(parse_symbol(t, w, ln)?);
        }
    }
    Ok(out)
}
