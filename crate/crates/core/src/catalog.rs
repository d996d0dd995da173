//! The built-in algebras S₂, W₂ and W(2), stored as integer tables and
//! reduced into the requested field.

use std::fmt;
use std::str::FromStr;

use crate::algebra::StructureAlgebra;
use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// Sparse entries `(i, j, k, c)`: the coefficient of e_k in e_i·e_j is c.
type Entries = &'static [(usize, usize, usize, i64)];

const S2: Entries = &[
    (1, 1, 1, -1),
    (1, 2, 2, -3),
    (1, 3, 3, 1),
    (1, 4, 4, 3),
    (2, 1, 2, 3),
    (2, 3, 1, 2),
    (2, 4, 3, 1),
    (3, 1, 3, -2),
    (3, 2, 1, -1),
    (3, 3, 4, -3),
];

/// The characteristic-2 table of S₂, kept separately from `S2`.
const S2_CHAR2: Entries = &[
    (1, 1, 1, 1),
    (1, 2, 2, 1),
    (1, 3, 3, 1),
    (1, 4, 4, 1),
    (2, 1, 2, 1),
    (2, 4, 3, 1),
    (3, 2, 1, 1),
    (3, 3, 4, 1),
];

/// Products of W₂ involving e₅ or e₆.
const W2_EXTRA: Entries = &[
    (1, 5, 5, -1),
    (1, 6, 6, 1),
    (2, 6, 5, -1),
    (3, 5, 6, 1),
    (5, 1, 1, -2),
    (5, 2, 2, -3),
    (5, 3, 3, -1),
    (5, 5, 5, -2),
    (5, 6, 6, -1),
    (6, 1, 3, 2),
    (6, 2, 1, 1),
    (6, 3, 4, 3),
    (6, 5, 6, -1),
];

/// Products of W(2) involving e₇ or e₈.
const W2X2_EXTRA: Entries = &[
    (1, 7, 7, 1),
    (1, 8, 8, -1),
    (2, 7, 8, 1),
    (3, 8, 7, -1),
    (5, 7, 7, -1),
    (5, 8, 8, -2),
    (6, 8, 7, 1),
    (7, 1, 3, 2),
    (7, 2, 1, 1),
    (7, 3, 4, 3),
    (7, 5, 6, -1),
    (7, 8, 7, 1),
    (8, 2, 2, 1),
    (8, 3, 3, -1),
    (8, 4, 4, -2),
    (8, 6, 6, -1),
    (8, 7, 7, -1),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CatalogName {
    S2,
    S2Char2,
    W2,
    W2x2,
}

impl CatalogName {
    pub const ALL: [CatalogName; 4] = [Self::S2, Self::S2Char2, Self::W2, Self::W2x2];

    pub fn as_str(&self) -> &'static str {
        match self {
            CatalogName::S2 => "S2",
            CatalogName::S2Char2 => "S2_char2",
            CatalogName::W2 => "W2",
            CatalogName::W2x2 => "W2x2",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            CatalogName::S2 | CatalogName::S2Char2 => 4,
            CatalogName::W2 => 6,
            CatalogName::W2x2 => 8,
        }
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CatalogName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S2" => Ok(CatalogName::S2),
            "S2_char2" => Ok(CatalogName::S2Char2),
            "W2" => Ok(CatalogName::W2),
            "W2x2" | "W(2)" => Ok(CatalogName::W2x2),
            _ => Err(Error::UnknownCatalog(s.to_string())),
        }
    }
}

/// The named table with its integer entries reduced into `field`.
pub fn catalog(name: CatalogName, field: FieldSpec) -> Result<StructureAlgebra> {
    let entries: Vec<_> = match name {
        CatalogName::S2 => S2.to_vec(),
        CatalogName::S2Char2 => {
            if field.characteristic() != 2 {
                return Err(Error::Characteristic {
                    what: "S2_char2".into(),
                    requirement: "characteristic 2".into(),
                    field: field.to_string(),
                });
            }
            S2_CHAR2.to_vec()
        }
        CatalogName::W2 => [S2, W2_EXTRA].concat(),
        CatalogName::W2x2 => [S2, W2_EXTRA, W2X2_EXTRA].concat(),
    };
    Ok(StructureAlgebra::from_integer_entries(
        name.as_str(),
        field,
        name.dim(),
        &entries,
    ))
}

pub fn catalog_by_name(name: &str, field: FieldSpec) -> Result<StructureAlgebra> {
    catalog(name.parse()?, field)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_name() {
        assert!(matches!(
            catalog_by_name("W3", FieldSpec::Rationals),
            Err(Error::UnknownCatalog(_))
        ));
    }

    #[test]
    fn char2_table_needs_char2() {
        assert!(catalog(CatalogName::S2Char2, FieldSpec::Prime(3)).is_err());
    }
}
