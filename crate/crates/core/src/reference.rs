//! Published data that the checks compare against: operator spans,
//! matrix-unit candidates, reachability figures and quotient bases.
//!
//! Operators are written as combinations of E_ij, the map e_i ↦ e_j
//! (1-based). The published matrix units compose left to right (apply the
//! left factor first), so in the column-action convention used here the
//! family e_ij is stored with its indices swapped.

use crate::catalog::CatalogName;
use crate::field::FieldSpec;
use crate::linalg::{LinearOp, Vector};
use crate::mult_algebra::{unit_combination, MatrixUnitFamily, OperatorSubspace};

type Terms = &'static [(usize, usize, i64)];

fn span(field: FieldSpec, n: usize, ops: &[Terms]) -> OperatorSubspace {
    let ops: Vec<LinearOp> = ops.iter().map(|t| unit_combination(field, n, t)).collect();
    OperatorSubspace::from_operators(field, n, &ops)
}

fn family(field: FieldSpec, n: usize, label: &str, units: [[Terms; 2]; 2]) -> MatrixUnitFamily {
    // units[i][j] is the published e_{i+1,j+1}; store transposed.
    MatrixUnitFamily {
        label: label.to_string(),
        units: (0..2)
            .map(|i| (0..2).map(|j| unit_combination(field, n, units[j][i])).collect())
            .collect(),
    }
}

/// M(S₂) over F₃.
pub fn s2_char3_mult_algebra(field: FieldSpec) -> OperatorSubspace {
    span(
        field,
        4,
        &[
            &[(1, 1, 1)],
            &[(3, 3, 1)],
            &[(3, 1, 1)],
            &[(1, 3, 1)],
            &[(2, 1, 1)],
            &[(2, 3, 1)],
            &[(4, 1, 1)],
            &[(4, 3, 1)],
        ],
    )
}

/// Trace-form radical of M(S₂) over F₃.
pub fn s2_char3_radical(field: FieldSpec) -> OperatorSubspace {
    span(field, 4, &[&[(4, 3, 1)], &[(2, 1, 1)], &[(2, 3, 1)], &[(4, 1, 1)]])
}

/// The classes of E₁₁, E₁₃, E₃₁, E₃₃ as matrix units of M(S₂)/rad over F₃.
pub fn s2_char3_matrix_units(field: FieldSpec) -> Vec<MatrixUnitFamily> {
    vec![family(
        field,
        4,
        "E",
        [[&[(1, 1, 1)], &[(1, 3, 1)]], [&[(3, 1, 1)], &[(3, 3, 1)]]],
    )]
}

/// M(W₂) over F₃, 20-dimensional.
pub fn w2_char3_mult_algebra(field: FieldSpec) -> OperatorSubspace {
    span(
        field,
        6,
        &[
            &[(1, 1, 1), (5, 5, 1)],
            &[(3, 3, 1), (6, 6, 1)],
            &[(3, 1, 1), (6, 5, 1)],
            &[(1, 3, 1), (5, 6, 1)],
            &[(1, 1, 1), (5, 1, -1)],
            &[(3, 3, 1), (6, 3, -1)],
            &[(3, 1, 1), (6, 1, -1)],
            &[(1, 3, 1), (5, 3, -1)],
            &[(1, 5, 1), (5, 5, -1)],
            &[(3, 6, 1), (6, 6, -1)],
            &[(1, 6, 1), (5, 6, -1)],
            &[(3, 5, 1), (6, 5, -1)],
            &[(2, 1, 1)],
            &[(2, 3, 1)],
            &[(2, 5, 1)],
            &[(2, 6, 1)],
            &[(4, 1, 1)],
            &[(4, 3, 1)],
            &[(4, 5, 1)],
            &[(4, 6, 1)],
        ],
    )
}

/// Trace-form radical of M(W₂) over F₃, 12-dimensional.
pub fn w2_char3_radical(field: FieldSpec) -> OperatorSubspace {
    span(
        field,
        6,
        &[
            &[(2, 1, 1)],
            &[(2, 3, 1)],
            &[(2, 5, 1)],
            &[(2, 6, 1)],
            &[(4, 1, 1)],
            &[(4, 3, 1)],
            &[(4, 5, 1)],
            &[(4, 6, 1)],
            &[(1, 1, 1), (1, 5, 1), (5, 1, -1), (5, 5, 2)],
            &[(1, 3, 1), (1, 6, 1), (5, 3, -1), (5, 6, 2)],
            &[(3, 1, 1), (3, 5, 1), (6, 1, -1), (6, 5, 2)],
            &[(3, 3, 1), (3, 6, 1), (6, 3, -1), (6, 6, 2)],
        ],
    )
}

/// Square of the radical of M(W₂) over F₃.
pub fn w2_char3_radical_square(field: FieldSpec) -> OperatorSubspace {
    span(
        field,
        6,
        &[
            &[(4, 3, 1), (4, 6, 1)],
            &[(4, 1, 1), (4, 5, 1)],
            &[(2, 3, 1), (2, 6, 1)],
            &[(2, 1, 1), (2, 5, 1)],
        ],
    )
}

/// The two families {e_ij} and {u_ij} exhibiting M(W₂)/rad ≅ M₂ ⊕ M₂ over F₃.
pub fn w2_char3_matrix_units(field: FieldSpec) -> Vec<MatrixUnitFamily> {
    vec![
        family(
            field,
            6,
            "e",
            [
                [&[(1, 1, 1), (1, 5, 1)], &[(1, 3, 1), (1, 6, 1)]],
                [&[(3, 1, 1), (3, 5, 1)], &[(3, 3, 1), (3, 6, 1)]],
            ],
        ),
        family(
            field,
            6,
            "u",
            [
                [&[(1, 5, -1), (5, 5, 1)], &[(1, 6, 1), (5, 6, -1)]],
                [&[(3, 5, 1), (6, 5, -1)], &[(3, 6, -1), (6, 6, 1)]],
            ],
        ),
    ]
}

/// Trace-form radical r₁..r₁₂ of M(W(2)) over F₂.
pub fn w2x2_char2_radical(field: FieldSpec) -> OperatorSubspace {
    span(
        field,
        8,
        &[
            &[(1, 5, 1), (1, 8, 1)],
            &[(1, 6, 1), (1, 7, 1)],
            &[(2, 5, 1), (2, 8, 1)],
            &[(2, 6, 1), (2, 7, 1)],
            &[(3, 5, 1), (3, 8, 1)],
            &[(3, 6, 1), (3, 7, 1)],
            &[(4, 5, 1), (4, 8, 1)],
            &[(4, 6, 1), (4, 7, 1)],
            &[(5, 5, 1), (5, 8, 1), (8, 5, 1), (8, 8, 1)],
            &[(5, 6, 1), (5, 7, 1), (8, 6, 1), (8, 7, 1)],
            &[(6, 5, 1), (6, 8, 1), (7, 5, 1), (7, 8, 1)],
            &[(6, 6, 1), (6, 7, 1), (7, 6, 1), (7, 7, 1)],
        ],
    )
}

/// M(W(2)) over F₃ as published: E_ij for i ∈ {2,4,7,8}; E_ai + E_bj for
/// (a,b) ∈ {(1,5),(3,6),(5,5),(6,6)} and (i,j) ∈ {(1,5),(3,6)}; E_ai − E_bi
/// for (a,b) ∈ {(1,5),(3,6)} and i ∈ {2,4,5,6,7,8}.
pub fn w2x2_char3_mult_algebra(field: FieldSpec) -> OperatorSubspace {
    let mut ops = Vec::new();
    for i in [2, 4, 7, 8] {
        for j in 1..=8 {
            ops.push(unit_combination(field, 8, &[(i, j, 1)]));
        }
    }
    for (a, b) in [(1, 5), (3, 6), (5, 5), (6, 6)] {
        for (i, j) in [(1, 5), (3, 6)] {
            ops.push(unit_combination(field, 8, &[(a, i, 1), (b, j, 1)]));
        }
    }
    for (a, b) in [(1, 5), (3, 6)] {
        for i in [2, 4, 5, 6, 7, 8] {
            ops.push(unit_combination(field, 8, &[(a, i, 1), (b, i, -1)]));
        }
    }
    OperatorSubspace::from_operators(field, 8, &ops)
}

/// Trace-form radical of M(W(2)) over F₃.
pub fn w2x2_char3_radical(field: FieldSpec) -> OperatorSubspace {
    span(
        field,
        8,
        &[
            &[(2, 1, 1), (2, 5, 1)],
            &[(2, 3, 1), (2, 6, 1)],
            &[(1, 1, 1), (1, 5, 1), (5, 1, -1), (5, 5, 2)],
            &[(4, 1, 1), (4, 5, 1)],
            &[(4, 3, 1), (4, 6, 1)],
            &[(1, 3, 1), (1, 6, 1), (5, 3, -1), (5, 6, 2)],
            &[(7, 1, 1), (7, 5, 1)],
            &[(7, 3, 1), (7, 6, 1)],
            &[(3, 1, 1), (3, 5, 1), (6, 1, -1), (6, 5, 2)],
            &[(8, 1, 1), (8, 5, 1)],
            &[(8, 3, 1), (8, 6, 1)],
            &[(3, 3, 1), (3, 6, 1), (6, 3, -1), (6, 6, 2)],
        ],
    )
}

fn vectors(field: FieldSpec, n: usize, vs: &[&[(usize, i64)]]) -> Vec<Vector> {
    vs.iter()
        .map(|terms| {
            let mut c = vec![0; n];
            for &(i, a) in *terms {
                c[i - 1] += a;
            }
            Vector::from_i64(field, &c)
        })
        .collect()
}

/// The ideal span(e₅+e₈, e₆+e₇) of W(2) over F₂.
pub fn w2x2_char2_ideal(field: FieldSpec) -> Vec<Vector> {
    vectors(field, 8, &[&[(5, 1), (8, 1)], &[(6, 1), (7, 1)]])
}

/// The ideal span(e₁+e₅, e₃+e₆) of W(2) over F₃.
pub fn w2x2_char3_ideal(field: FieldSpec) -> Vec<Vector> {
    vectors(field, 8, &[&[(1, 1), (5, 1)], &[(3, 1), (6, 1)]])
}

/// Complement f₁..f₆ = e₁, e₂, e₃, e₄, e₈, 2e₇ used for W(2)/I over F₃.
pub fn w2x2_char3_complement(field: FieldSpec) -> Vec<Vector> {
    vectors(field, 8, &[&[(1, 1)], &[(2, 1)], &[(3, 1)], &[(4, 1)], &[(8, 1)], &[(7, 2)]])
}

/// Published table of W(2)/I over F₃ in the basis f₁..f₆, as entries
/// (i, j, k, c): f_i f_j has coefficient c on f_k.
pub const W2X2_CHAR3_QUOTIENT: &[(usize, usize, usize, i64)] = &[
    (1, 1, 1, 2),
    (1, 3, 3, 1),
    (1, 5, 5, 2),
    (1, 6, 6, 1),
    (2, 3, 1, 2),
    (2, 4, 3, 1),
    (2, 6, 5, 2),
    (3, 1, 3, 1),
    (3, 2, 1, 2),
    (3, 5, 6, 1),
    (5, 1, 1, 1),
    (5, 3, 3, 2),
    (5, 5, 5, 1),
    (5, 6, 6, 2),
    (6, 1, 3, 2),
    (6, 2, 1, 1),
    (6, 5, 6, 2),
];

/// Edge lists (1-based) of the published simplified basis graphs.
pub mod figures {
    pub const S2: &[(usize, usize)] = &[(1, 2), (2, 3), (3, 4), (4, 3), (3, 1)];
    pub const S2_CHAR3: &[(usize, usize)] = &[(3, 1), (1, 3), (4, 3), (2, 3), (2, 1)];
    pub const W2: &[(usize, usize)] = &[(1, 2), (2, 3), (3, 1), (1, 5), (5, 6), (6, 1), (3, 4), (4, 6)];
    pub const W2_CHAR3: &[(usize, usize)] = &[(1, 3), (3, 6), (6, 1), (5, 1), (1, 5), (3, 4), (4, 3), (2, 1)];
    pub const W2X2: &[(usize, usize)] = &[
        (1, 5),
        (5, 6),
        (6, 7),
        (7, 1),
        (7, 3),
        (3, 4),
        (4, 7),
        (5, 8),
        (8, 2),
        (2, 5),
    ];
}

/// Matrix-unit candidates for M(A)/rad when the algebra has published ones:
/// S₂ and W₂ in characteristic 3.
pub fn matrix_unit_candidates(name: CatalogName, field: FieldSpec) -> Option<Vec<MatrixUnitFamily>> {
    match (name, field.characteristic()) {
        (CatalogName::S2, 3) => Some(s2_char3_matrix_units(field)),
        (CatalogName::W2, 3) => Some(w2_char3_matrix_units(field)),
        _ => None,
    }
}
