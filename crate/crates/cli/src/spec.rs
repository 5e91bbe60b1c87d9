//! Code-spec documents: JSON descriptions of a code and its field.

use std::fmt;
use std::path::Path;

use anyhow::{bail, Context, Result};
use gpc_core::epc::{build_h2, build_h3, build_optimal_g1, default_global_field, LinearCode};
use gpc_core::field::{BinaryPoly, Field, FieldElement};
use gpc_core::gpc::{GpcError, GpcParams};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub w: u32,
    pub modulus_hex: String,
    pub alpha: u64,
}

impl FieldSpec {
    pub fn build(&self) -> Result<Field> {
        let modulus = BinaryPoly::from_hex(&self.modulus_hex)?;
        Ok(Field::new(self.w, modulus, FieldElement(self.alpha))?)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind")]
pub enum SpecDocument {
    #[serde(rename = "gpc")]
    Gpc {
        m: usize,
        n: usize,
        k: usize,
        s: Vec<usize>,
        u: Vec<usize>,
        field: Option<FieldSpec>,
    },
    #[serde(rename = "epc-g1")]
    OptimalG1 {
        m: usize,
        v: usize,
        n: usize,
        h: usize,
        field: Option<FieldSpec>,
    },
    #[serde(rename = "epc-h2")]
    H2 {
        m: usize,
        n: usize,
        field: Option<FieldSpec>,
    },
    #[serde(rename = "epc-h3")]
    H3 {
        m: usize,
        n: usize,
        field: Option<FieldSpec>,
    },
}

/// Which global-parity construction a [`Code::Linear`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Globals {
    Two,
    Three,
}

impl Globals {
    pub fn count(self) -> usize {
        match self {
            Globals::Two => 2,
            Globals::Three => 3,
        }
    }
}

pub enum Code {
    /// A generalized product code; `shape` holds `(v, h)` for the
    /// one-global-parity construction.
    Gpc {
        params: GpcParams,
        shape: Option<(usize, usize)>,
    },
    Linear {
        code: LinearCode,
        m: usize,
        n: usize,
        globals: Globals,
    },
}

impl Code {
    pub fn m(&self) -> usize {
        match self {
            Code::Gpc { params, .. } => params.m(),
            Code::Linear { m, .. } => *m,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Code::Gpc { params, .. } => params.n(),
            Code::Linear { n, .. } => *n,
        }
    }

    pub fn field(&self) -> &Field {
        match self {
            Code::Gpc { params, .. } => params.field(),
            Code::Linear { code, .. } => code.field(),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Code::Gpc { params, .. } => params.dimension(),
            Code::Linear { code, .. } => code.dimension(),
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Code::Gpc { params, shape: None } => write!(f, "{params}"),
            Code::Gpc {
                params,
                shape: Some((v, h)),
            } => write!(f, "EP({},{v};{},{h};1) as {params}", params.m(), params.n()),
            Code::Linear { m, n, globals, .. } => {
                write!(f, "EP({m},1;{n},1;{}) with H{}", globals.count(), globals.count())
            }
        }
    }
}

/// Reads and validates a spec file. Errors carry every violated constraint.
pub fn load(path: &Path) -> Result<Code> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: SpecDocument =
        serde_json::from_str(&text).with_context(|| format!("parsing code spec {}", path.display()))?;
    build(&doc)
}

pub fn build(doc: &SpecDocument) -> Result<Code> {
    let explicit = |spec: &Option<FieldSpec>| spec.as_ref().map(FieldSpec::build).transpose();
    match doc {
        SpecDocument::Gpc { m, n, k, s, u, field } => {
            let field = match explicit(field)? {
                Some(f) => f,
                None => Field::smallest_default((*m).max(*n) as u64)?,
            };
            let params = GpcParams::new(*m, *n, *k, s.clone(), u.clone(), field).map_err(describe)?;
            Ok(Code::Gpc { params, shape: None })
        }
        SpecDocument::OptimalG1 { m, v, n, h, field } => {
            let field = match explicit(field)? {
                Some(f) => f,
                None => Field::smallest_default((*m).max(*n) as u64)?,
            };
            let params = build_optimal_g1(*m, *v, *n, *h, field)?;
            Ok(Code::Gpc {
                params,
                shape: Some((*v, *h)),
            })
        }
        SpecDocument::H2 { m, n, field } | SpecDocument::H3 { m, n, field } => {
            let field = match explicit(field)? {
                Some(f) => f,
                None => default_global_field(*m, *n)?,
            };
            let (code, globals) = match doc {
                SpecDocument::H2 { .. } => (build_h2(*m, *n, field)?, Globals::Two),
                _ => (build_h3(*m, *n, field)?, Globals::Three),
            };
            Ok(Code::Linear {
                code,
                m: *m,
                n: *n,
                globals,
            })
        }
    }
}

fn describe(e: GpcError) -> anyhow::Error {
    match e {
        GpcError::Invalid(violations) => {
            let lines: Vec<String> = violations.iter().map(|v| format!("  - {v}")).collect();
            anyhow::anyhow!("invalid code parameters:\n{}", lines.join("\n"))
        }
        other => other.into(),
    }
}

/// Field for `find-prime` style reporting.
pub fn field_json(field: &Field) -> String {
    format!(
        r#"{{"w": {}, "modulus_hex": "{}", "alpha": {}}}"#,
        field.width(),
        field.modulus().to_hex(),
        field.alpha().0
    )
}

pub fn ensure_shape(code: &Code, m: usize, n: usize) -> Result<()> {
    if (code.m(), code.n()) != (m, n) {
        bail!("array is {m}x{n} but the code is {}x{}", code.m(), code.n());
    }
    Ok(())
}
