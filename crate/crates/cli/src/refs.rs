//! Resolving the ALGEBRA argument: a catalog name, `zero:N`, or a JSON file.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use conserv::{catalog, CatalogName, FieldSpec, StructureAlgebra};

use crate::Failure;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraRef {
    Catalog(CatalogName),
    Zero(usize),
    File(PathBuf),
}

impl FromStr for AlgebraRef {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(n) = s.strip_prefix("zero:") {
            return n
                .parse()
                .map(AlgebraRef::Zero)
                .map_err(|_| format!("`{s}`: expected zero:N with N a dimension"));
        }
        if let Ok(name) = s.parse() {
            return Ok(AlgebraRef::Catalog(name));
        }
        let path = PathBuf::from(s);
        if path.extension().is_some_and(|e| e == "json") || path.exists() {
            Ok(AlgebraRef::File(path))
        } else {
            Err(format!(
                "`{s}` is neither a catalog algebra (S2, S2_char2, W2, W2x2), zero:N, nor a JSON file"
            ))
        }
    }
}

impl fmt::Display for AlgebraRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraRef::Catalog(c) => write!(f, "{c}"),
            AlgebraRef::Zero(n) => write!(f, "zero:{n}"),
            AlgebraRef::File(p) => write!(f, "{}", p.display()),
        }
    }
}

/// A loaded algebra and the catalog entry it came from, if any.
pub struct Loaded {
    pub algebra: StructureAlgebra,
    pub catalog: Option<CatalogName>,
}

impl Loaded {
    pub fn label(&self) -> String {
        self.algebra.name().unwrap_or("algebra").to_string()
    }
}

/// Catalog and zero algebras default to Q; a file carries its own field and
/// `--field` must agree with it.
pub fn load(r: &AlgebraRef, field: Option<FieldSpec>) -> Result<Loaded, Failure> {
    match r {
        AlgebraRef::Catalog(name) => {
            let algebra = catalog(*name, field.unwrap_or(FieldSpec::Rationals))?;
            Ok(Loaded { algebra, catalog: Some(*name) })
        }
        AlgebraRef::Zero(n) => Ok(Loaded {
            algebra: StructureAlgebra::zero(field.unwrap_or(FieldSpec::Rationals), *n).with_name("zero"),
            catalog: None,
        }),
        AlgebraRef::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            let algebra = StructureAlgebra::from_json(&text).map_err(|e| Failure::Usage(e.to_string()))?;
            if let Some(f) = field.filter(|f| *f != algebra.field()) {
                return Err(Failure::Usage(format!(
                    "{} is over {}, not {f}",
                    path.display(),
                    algebra.field()
                )));
            }
            let catalog = algebra.name().and_then(|n| n.parse().ok());
            Ok(Loaded { algebra, catalog })
        }
    }
}
