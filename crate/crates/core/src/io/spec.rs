//! TOML code-spec documents.
//!
//! ```toml
//! group = "cyclic(46)"
//! A = ["0", "1", "2", "3", "4", "5"]
//! B = ["0", "2", "4", "6", "8", "10"]
//! comment = "optional"
//!
//! [local_codes]
//! c0 = { family = "ham6" }
//! c1 = { family = "ham6", permutation = [1, 0, 2, 3, 4, 5] }
//! c0p = { family = "ham6" }
//! c1p = { custom = { h = ["100011", "010101", "001110"], g = ["011100", "101010", "110001"] } }
//! ```
//!
//! Multiset entries are group labels; bare integers are taken as element indices.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::code::CodeSpec;
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::group::{FiniteGroup, GroupDescriptor};
use crate::local::{Family, LocalCode};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Index(usize),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomDoc {
    /// Code length; required only when `h` or `g` has no rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub h: Vec<String>,
    pub g: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalCodeDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom: Option<CustomDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalCodesDoc {
    pub c0: LocalCodeDoc,
    pub c1: LocalCodeDoc,
    pub c0p: LocalCodeDoc,
    pub c1p: LocalCodeDoc,
}

/// The serialized form of a [`CodeSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDoc {
    pub group: String,
    #[serde(rename = "A")]
    pub a: Vec<Label>,
    #[serde(rename = "B")]
    pub b: Vec<Label>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    pub local_codes: LocalCodesDoc,
}

fn keyed(key: &str, e: Error) -> Error {
    Error::Input(format!("key `{key}`: {e}"))
}

impl LocalCodeDoc {
    pub fn from_code(code: &LocalCode) -> Self {
        match (code.family(), code.permutation()) {
            (Family::Custom, _) | (_, None) => {
                let rows = |m: &BitMatrix| m.row_iter().map(|r| r.to_string()).collect();
                LocalCodeDoc {
                    custom: Some(CustomDoc {
                        n: (code.h().rows() == 0 || code.g().rows() == 0).then(|| code.n()),
                        h: rows(code.h()),
                        g: rows(code.g()),
                    }),
                    ..Default::default()
                }
            }
            (family, Some(p)) => LocalCodeDoc {
                family: Some(family.to_string()),
                permutation: (!p.iter().enumerate().all(|(i, &x)| i == x)).then(|| p.to_vec()),
                custom: None,
            },
        }
    }

    pub fn to_code(&self) -> Result<LocalCode> {
        self.to_code_with(true)
    }

    /// With `checked = false`, custom codes are accepted without validating
    /// `H Gᵀ = 0` so that a checker can report the violation.
    pub fn to_code_with(&self, checked: bool) -> Result<LocalCode> {
        match (&self.family, &self.custom) {
            (Some(_), Some(_)) => Err(Error::input("give either `family` or `custom`, not both")),
            (None, None) => Err(Error::input("missing `family` or `custom`")),
            (None, Some(c)) => {
                if self.permutation.is_some() {
                    return Err(Error::input("`permutation` applies only to built-in families"));
                }
                let parse = |rows: &[String], name: &str| {
                    if rows.is_empty() {
                        return match c.n {
                            Some(n) => Ok(BitMatrix::zeros(0, n)),
                            None => Err(keyed(name, Error::input("no rows; set `custom.n` to give the length"))),
                        };
                    }
                    let rows: Vec<&str> = rows.iter().map(String::as_str).collect();
                    let m = BitMatrix::from_bit_strings(&rows).map_err(|e| keyed(name, e))?;
                    match c.n {
                        Some(n) if n != m.cols() => Err(keyed(
                            name,
                            Error::dim(format!("rows have length {} but `custom.n` is {n}", m.cols())),
                        )),
                        _ => Ok(m),
                    }
                };
                let (h, g) = (parse(&c.h, "custom.h")?, parse(&c.g, "custom.g")?);
                if checked {
                    LocalCode::custom(h, g)
                } else if h.cols() != g.cols() {
                    Err(Error::dim(format!("custom code: H has {} columns but G has {}", h.cols(), g.cols())))
                } else {
                    Ok(LocalCode::custom_unchecked(h, g))
                }
            }
            (Some(f), None) => {
                let family: Family = f.parse().map_err(|e| keyed("family", e))?;
                if family == Family::Custom {
                    return Err(keyed("family", Error::input("use a `custom` table for custom codes")));
                }
                match &self.permutation {
                    None => LocalCode::canonical(family),
                    Some(p) => LocalCode::permuted(family, p).map_err(|e| keyed("permutation", e)),
                }
            }
        }
    }
}

fn resolve(group: &FiniteGroup, labels: &[Label]) -> Result<Vec<usize>> {
    labels
        .iter()
        .map(|l| match l {
            Label::Index(i) if *i < group.order() => Ok(*i),
            Label::Index(i) => Err(Error::input(format!("element index {i} outside a group of order {}", group.order()))),
            Label::Name(s) => group.element(s),
        })
        .collect()
}

impl SpecDoc {
    pub fn from_spec(spec: &CodeSpec) -> Result<Self> {
        let group = spec.validate()?;
        let labels = |v: &[usize]| v.iter().map(|&x| Label::Name(group.label(x).to_string())).collect();
        Ok(SpecDoc {
            group: spec.group.to_string(),
            a: labels(&spec.a),
            b: labels(&spec.b),
            comment: spec.comment.clone(),
            local_codes: LocalCodesDoc {
                c0: LocalCodeDoc::from_code(&spec.c0),
                c1: LocalCodeDoc::from_code(&spec.c1),
                c0p: LocalCodeDoc::from_code(&spec.c0p),
                c1p: LocalCodeDoc::from_code(&spec.c1p),
            },
        })
    }

    pub fn to_spec(&self) -> Result<CodeSpec> {
        self.to_spec_with(true)
    }

    pub fn to_spec_with(&self, checked: bool) -> Result<CodeSpec> {
        let descriptor: GroupDescriptor = self.group.parse().map_err(|e| keyed("group", e))?;
        let group = descriptor.build().map_err(|e| keyed("group", e))?;
        let a = resolve(&group, &self.a).map_err(|e| keyed("A", e))?;
        let b = resolve(&group, &self.b).map_err(|e| keyed("B", e))?;
        let lc = &self.local_codes;
        let code = |doc: &LocalCodeDoc, name: &str| doc.to_code_with(checked).map_err(|e| keyed(&format!("local_codes.{name}"), e));
        let spec = CodeSpec {
            group: descriptor,
            a,
            b,
            c0: code(&lc.c0, "c0")?,
            c1: code(&lc.c1, "c1")?,
            c0p: code(&lc.c0p, "c0p")?,
            c1p: code(&lc.c1p, "c1p")?,
            comment: self.comment.clone(),
        };
        spec.validate_with(&group)?;
        Ok(spec)
    }
}

fn parse_doc(text: &str) -> Result<SpecDoc> {
    toml::from_str(text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        Error::parse_line_col(text, offset, e.message().to_string())
    })
}

pub fn parse_spec(text: &str) -> Result<CodeSpec> {
    parse_doc(text)?.to_spec()
}

/// Parses a spec without validating custom local codes.
pub fn parse_spec_unchecked(text: &str) -> Result<CodeSpec> {
    parse_doc(text)?.to_spec_with(false)
}

pub fn serialize_spec(spec: &CodeSpec) -> Result<String> {
    let doc = SpecDoc::from_spec(spec)?;
    toml::to_string(&doc).map_err(|e| Error::input(format!("cannot serialize spec: {e}")))
}

pub fn load_spec(path: impl AsRef<Path>) -> Result<CodeSpec> {
    parse_spec(&super::read_text(path)?)
}

pub fn save_spec(spec: &CodeSpec, path: impl AsRef<Path>) -> Result<()> {
    super::atomic_write(path, serialize_spec(spec)?.as_bytes())
}

/// SHA-256 of the spec's canonical key, hex encoded.
pub fn spec_hash(spec: &CodeSpec) -> String {
    Sha256::digest(spec.key().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}
