//! Dataset schema descriptors.
//!
//! Schemas are shipped as versioned plain-text descriptors (see `schemas/` in
//! the repository root) and parsed into [`DatasetSchema`]. A descriptor
//! declares the column layout in file order, which columns are features,
//! labels or ignored, and the ordered rules that binarize label values into
//! attack (1) / normal (0) / excluded.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Well-known dataset families plus a catch-all for user descriptors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemaName {
    Cidds001,
    UnswNb15,
    NslKdd,
    Generic(String),
}

impl SchemaName {
    fn from_id(id: &str) -> Self {
        match id {
            "cidds001" => SchemaName::Cidds001,
            "unswnb15" => SchemaName::UnswNb15,
            "nslkdd" => SchemaName::NslKdd,
            other => SchemaName::Generic(other.to_string()),
        }
    }

    pub fn id(&self) -> &str {
        match self {
            SchemaName::Cidds001 => "cidds001",
            SchemaName::UnswNb15 => "unswnb15",
            SchemaName::NslKdd => "nslkdd",
            SchemaName::Generic(s) => s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Numeric,
    Categorical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnRole {
    Feature(ColumnKind),
    Label,
    Ignore,
}

#[derive(Debug, Clone)]
pub struct ColumnDecl {
    pub name: String,
    pub role: ColumnRole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelClass {
    Attack,
    Normal,
    Exclude,
}

/// One binarization rule: one pattern per label column, `*` matches anything.
/// Rules are tried in declaration order; the first full match wins. Rows
/// matching no rule are excluded.
#[derive(Debug, Clone)]
pub struct LabelRule {
    pub class: LabelClass,
    pub patterns: Vec<String>,
}

impl LabelRule {
    fn matches(&self, label_values: &[&str]) -> bool {
        self.patterns
            .iter()
            .zip(label_values)
            .all(|(pat, val)| pat == "*" || pat == val)
    }
}

#[derive(Debug, Clone)]
pub struct DatasetSchema {
    pub name: SchemaName,
    /// All declared columns in file order (relevant for headerless files).
    pub columns: Vec<ColumnDecl>,
    pub label_rules: Vec<LabelRule>,
    /// True when the distribution files carry no header row; columns are then
    /// taken in declared order.
    pub headerless: bool,
}

impl DatasetSchema {
    /// Feature columns in declared order.
    pub fn feature_columns(&self) -> impl Iterator<Item = (&str, ColumnKind)> {
        self.columns.iter().filter_map(|c| match c.role {
            ColumnRole::Feature(kind) => Some((c.name.as_str(), kind)),
            _ => None,
        })
    }

    pub fn feature_count(&self) -> usize {
        self.feature_columns().count()
    }

    pub fn feature_kinds(&self) -> Vec<ColumnKind> {
        self.feature_columns().map(|(_, k)| k).collect()
    }

    pub fn label_columns(&self) -> Vec<&str> {
        self.columns
            .iter()
            .filter(|c| c.role == ColumnRole::Label)
            .map(|c| c.name.as_str())
            .collect()
    }

    /// Binarize one row's label values: `Some(1)` attack, `Some(0)` normal,
    /// `None` excluded.
    pub fn binarize(&self, label_values: &[&str]) -> Option<u8> {
        for rule in &self.label_rules {
            if rule.matches(label_values) {
                return match rule.class {
                    LabelClass::Attack => Some(1),
                    LabelClass::Normal => Some(0),
                    LabelClass::Exclude => None,
                };
            }
        }
        None
    }

    /// Parse a descriptor from text. Line-based: `schema-version`, `name`,
    /// `headerless`, then ordered `feature <name> <kind>` / `label <name>` /
    /// `ignore <name>` declarations and `class <attack|normal|exclude> <patterns>`
    /// rules. Names containing whitespace are double-quoted. `#` starts a comment.
    pub fn from_descriptor_str(text: &str) -> Result<Self> {
        let mut name = None;
        let mut version = None;
        let mut headerless = false;
        let mut columns: Vec<ColumnDecl> = Vec::new();
        let mut label_rules = Vec::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let tokens = tokenize(line)
                .map_err(|e| Error::InvalidSchema(format!("line {}: {e}", lineno + 1)))?;
            if tokens.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::InvalidSchema(format!("line {}: {msg}", lineno + 1));
            match tokens[0].as_str() {
                "schema-version" => {
                    let v: u32 = tokens
                        .get(1)
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| err("expected schema-version <n>"))?;
                    if v != 1 {
                        return Err(err(&format!("unsupported schema-version {v}")));
                    }
                    version = Some(v);
                }
                "name" => {
                    name = Some(SchemaName::from_id(
                        tokens.get(1).ok_or_else(|| err("expected name <id>"))?,
                    ));
                }
                "headerless" => {
                    headerless = match tokens.get(1).map(String::as_str) {
                        Some("true") => true,
                        Some("false") => false,
                        _ => return Err(err("expected headerless true|false")),
                    };
                }
                "feature" => {
                    let col = tokens
                        .get(1)
                        .ok_or_else(|| err("expected feature <name> <kind>"))?;
                    let kind = match tokens.get(2).map(String::as_str) {
                        Some("numeric") => ColumnKind::Numeric,
                        Some("categorical") => ColumnKind::Categorical,
                        _ => return Err(err("feature kind must be numeric|categorical")),
                    };
                    columns.push(ColumnDecl {
                        name: col.clone(),
                        role: ColumnRole::Feature(kind),
                    });
                }
                "label" => {
                    let col = tokens.get(1).ok_or_else(|| err("expected label <name>"))?;
                    columns.push(ColumnDecl {
                        name: col.clone(),
                        role: ColumnRole::Label,
                    });
                }
                "ignore" => {
                    let col = tokens.get(1).ok_or_else(|| err("expected ignore <name>"))?;
                    columns.push(ColumnDecl {
                        name: col.clone(),
                        role: ColumnRole::Ignore,
                    });
                }
                "class" => {
                    let class = match tokens.get(1).map(String::as_str) {
                        Some("attack") => LabelClass::Attack,
                        Some("normal") => LabelClass::Normal,
                        Some("exclude") => LabelClass::Exclude,
                        _ => return Err(err("class must be attack|normal|exclude")),
                    };
                    let pats = tokens
                        .get(2)
                        .ok_or_else(|| err("expected class <kind> <patterns>"))?;
                    label_rules.push(LabelRule {
                        class,
                        patterns: pats.split(',').map(|s| s.trim().to_string()).collect(),
                    });
                }
                other => return Err(err(&format!("unknown directive {other:?}"))),
            }
        }

        if version.is_none() {
            return Err(Error::InvalidSchema("missing schema-version".into()));
        }
        let schema = DatasetSchema {
            name: name.ok_or_else(|| Error::InvalidSchema("missing name".into()))?,
            columns,
            label_rules,
            headerless,
        };
        schema.validate()?;
        Ok(schema)
    }

    pub fn from_descriptor_file(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::FileNotFound(path.to_path_buf()));
        }
        Self::from_descriptor_str(&std::fs::read_to_string(path)?)
    }

    /// Descriptors bundled with the crate: `cidds001`, `unswnb15`,
    /// `unswnb15-part`, `nslkdd`.
    pub fn builtin(id: &str) -> Option<Self> {
        let text = match id {
            "cidds001" => include_str!("../../../../schemas/cidds001.schema"),
            "unswnb15" => include_str!("../../../../schemas/unswnb15.schema"),
            "unswnb15-part" => include_str!("../../../../schemas/unswnb15-part.schema"),
            "nslkdd" => include_str!("../../../../schemas/nslkdd.schema"),
            _ => return None,
        };
        Some(Self::from_descriptor_str(text).expect("bundled descriptor must parse"))
    }

    fn validate(&self) -> Result<()> {
        if self.feature_count() == 0 {
            return Err(Error::InvalidSchema("no feature columns declared".into()));
        }
        let labels = self.label_columns();
        if labels.is_empty() || labels.len() > 2 {
            return Err(Error::InvalidSchema(format!(
                "need 1 or 2 label columns, got {}",
                labels.len()
            )));
        }
        let mut seen = HashSet::new();
        for c in &self.columns {
            if !seen.insert(c.name.as_str()) {
                return Err(Error::InvalidSchema(format!(
                    "duplicate column {:?}",
                    c.name
                )));
            }
        }
        if self.label_rules.is_empty() {
            return Err(Error::InvalidSchema("no class rules declared".into()));
        }
        for rule in &self.label_rules {
            if rule.patterns.len() != labels.len() {
                return Err(Error::InvalidSchema(format!(
                    "class rule has {} patterns for {} label columns",
                    rule.patterns.len(),
                    labels.len()
                )));
            }
        }
        Ok(())
    }

    /// Render back to descriptor text (used by the dataset cache so a cache
    /// file is self-describing).
    pub fn to_descriptor_string(&self) -> String {
        let mut out = String::from("schema-version 1\n");
        let _ = writeln!(out, "name {}", self.name.id());
        if self.headerless {
            out.push_str("headerless true\n");
        }
        for c in &self.columns {
            match c.role {
                ColumnRole::Feature(ColumnKind::Numeric) => {
                    let _ = writeln!(out, "feature {} numeric", quote(&c.name));
                }
                ColumnRole::Feature(ColumnKind::Categorical) => {
                    let _ = writeln!(out, "feature {} categorical", quote(&c.name));
                }
                ColumnRole::Label => {
                    let _ = writeln!(out, "label {}", quote(&c.name));
                }
                ColumnRole::Ignore => {
                    let _ = writeln!(out, "ignore {}", quote(&c.name));
                }
            }
        }
        for r in &self.label_rules {
            let class = match r.class {
                LabelClass::Attack => "attack",
                LabelClass::Normal => "normal",
                LabelClass::Exclude => "exclude",
            };
            let _ = writeln!(out, "class {} {}", class, r.patterns.join(","));
        }
        out
    }
}

fn quote(name: &str) -> String {
    if name.chars().any(char::is_whitespace) {
        format!("\"{name}\"")
    } else {
        name.to_string()
    }
}

/// Whitespace tokenizer with double-quoted tokens for names containing spaces.
fn tokenize(line: &str) -> std::result::Result<Vec<String>, String> {
    let mut tokens = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '"' {
            chars.next();
            let mut tok = String::new();
            loop {
                match chars.next() {
                    Some('"') => break,
                    Some(ch) => tok.push(ch),
                    None => return Err("unterminated quote".into()),
                }
            }
            tokens.push(tok);
        } else {
            let mut tok = String::new();
            while let Some(&ch) = chars.peek() {
                if ch.is_whitespace() {
                    break;
                }
                tok.push(ch);
                chars.next();
            }
            tokens.push(tok);
        }
    }
    Ok(tokens)
}
